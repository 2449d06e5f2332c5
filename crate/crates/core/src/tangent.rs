//! The tangent functor on basic manifolds and its companions: second
//! tangent map, canonical flip, bundle projection, the zero-section /
//! fiber-sum monad structure, and the cotangent-side pullback and
//! (diffeomorphism-case) pushforward of covectors.
//!
//! Points of the tangent bundle over an open convex region are pairs
//! `(base, dir)`; points of the second tangent bundle are quadruples
//! `(base, e1, e2, e3)`, read as `((base, e1), (e2, e3))`. The arrow
//! part is `f -> (f(u), Df(u)·e)`; applied twice it produces
//! `(f(u), Df·e1, Df·e2, D²f·(e1,e2) + Df·e3)`, all computed by jet
//! propagation.

use crate::error::{Error, Result};
use crate::smoothmap::{compose, Expr, SmoothMap};
use crate::vecspace::{InnerProduct, NormSpec, Vector};

/// An open convex region of R^n. Convexity holds by construction for
/// every variant.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    All,
    /// Open ball `‖x - center‖ < radius`.
    Ball { center: Vector, radius: f64 },
    /// Open half-space `<normal, x> < offset`.
    HalfSpace { normal: Vector, offset: f64 },
}

impl Region {
    pub fn contains(&self, x: &Vector) -> bool {
        if !x.is_finite() {
            return false;
        }
        match self {
            Region::All => true,
            Region::Ball { center, radius } => match x.sub(center) {
                Ok(d) => d.euclidean() < *radius,
                Err(_) => false,
            },
            Region::HalfSpace { normal, offset } => match normal.dot(x) {
                Ok(p) => p < *offset,
                Err(_) => false,
            },
        }
    }
}

/// A basic manifold: an open convex region of R^n with a norm on the
/// model space.
#[derive(Debug, Clone, PartialEq)]
pub struct BasicManifold {
    dim: usize,
    region: Region,
    norm: NormSpec,
}

impl BasicManifold {
    pub fn new(dim: usize, region: Region, norm: NormSpec) -> Result<Self> {
        if dim == 0 {
            return Err(Error::contract("manifold dimension must be at least 1"));
        }
        match &region {
            Region::Ball { center, radius } => {
                if center.dim() != dim {
                    return Err(Error::contract("ball center dimension mismatch"));
                }
                if !(radius > &0.0) {
                    return Err(Error::contract("ball radius must be positive"));
                }
            }
            Region::HalfSpace { normal, .. } => {
                if normal.dim() != dim {
                    return Err(Error::contract("half-space normal dimension mismatch"));
                }
                if normal.euclidean() == 0.0 {
                    return Err(Error::contract("half-space normal must be nonzero"));
                }
            }
            Region::All => {}
        }
        Ok(BasicManifold { dim, region, norm })
    }

    /// All of R^n with the euclidean norm.
    pub fn euclidean(dim: usize) -> Self {
        BasicManifold::new(dim, Region::All, NormSpec::Euclidean).expect("valid manifold")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn norm(&self) -> &NormSpec {
        &self.norm
    }

    pub fn contains(&self, x: &Vector) -> bool {
        x.dim() == self.dim && self.region.contains(x)
    }
}

/// A point of the tangent bundle: base point and direction, equal
/// dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    pub base: Vector,
    pub dir: Vector,
}

impl TangentVector {
    pub fn new(base: Vector, dir: Vector) -> Result<Self> {
        if base.dim() != dir.dim() {
            return Err(Error::contract(
                "tangent vector base and direction dimensions differ",
            ));
        }
        if !dir.is_finite() || !base.is_finite() {
            return Err(Error::domain("tangent vector must be finite"));
        }
        Ok(TangentVector { base, dir })
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Coordinates of the point in `T U = U × E`, i.e. `(base, dir)`
    /// concatenated.
    pub fn flatten(&self) -> Vector {
        self.base.concat(&self.dir)
    }

    pub fn from_flat(v: &Vector) -> Result<Self> {
        if v.dim() % 2 != 0 {
            return Err(Error::contract("flat tangent vector needs even dimension"));
        }
        let (base, dir) = v.split(v.dim() / 2);
        TangentVector::new(base, dir)
    }
}

/// A point of the second tangent bundle `(U × E) × (E × E)`, stored as
/// the base and the three fiber directions.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondTangent {
    pub base: Vector,
    pub dirs: (Vector, Vector, Vector),
}

impl SecondTangent {
    pub fn new(base: Vector, e1: Vector, e2: Vector, e3: Vector) -> Result<Self> {
        let n = base.dim();
        if e1.dim() != n || e2.dim() != n || e3.dim() != n {
            return Err(Error::contract(
                "second tangent directions must match the base dimension",
            ));
        }
        for v in [&base, &e1, &e2, &e3] {
            if !v.is_finite() {
                return Err(Error::domain("second tangent must be finite"));
            }
        }
        Ok(SecondTangent {
            base,
            dirs: (e1, e2, e3),
        })
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Coordinates `(base, e1, e2, e3)` concatenated.
    pub fn flatten(&self) -> Vector {
        self.base
            .concat(&self.dirs.0)
            .concat(&self.dirs.1)
            .concat(&self.dirs.2)
    }

    pub fn from_flat(v: &Vector) -> Result<Self> {
        if v.dim() % 4 != 0 {
            return Err(Error::contract(
                "flat second tangent needs dimension divisible by 4",
            ));
        }
        let n = v.dim() / 4;
        let c = v.coords();
        SecondTangent::new(
            Vector::from(&c[0..n]),
            Vector::from(&c[n..2 * n]),
            Vector::from(&c[2 * n..3 * n]),
            Vector::from(&c[3 * n..4 * n]),
        )
    }
}

/// A linear functional at a base point, held by its Riesz coefficient
/// vector against the identity gram: it acts as `w ↦ <coeffs, w>`.
#[derive(Debug, Clone, PartialEq)]
pub struct Covector {
    pub base: Vector,
    pub coeffs: Vector,
}

impl Covector {
    pub fn new(base: Vector, coeffs: Vector) -> Result<Self> {
        if base.dim() != coeffs.dim() {
            return Err(Error::contract(
                "covector base and coefficient dimensions differ",
            ));
        }
        Ok(Covector { base, coeffs })
    }

    pub fn apply(&self, w: &Vector) -> Result<f64> {
        self.coeffs.dot(w)
    }

    /// The vector representing this functional in a non-identity inner
    /// product: solves `G r = coeffs`, so that `<r, w>_G = coeffs·w`.
    pub fn riesz_vector(&self, ip: &InnerProduct) -> Result<Vector> {
        ip.gram().solve(&self.coeffs)
    }
}

/// Arrow part of the tangent functor: `(u, e) ↦ (f(u), Df(u)·e)`.
pub fn tangent_map(f: &SmoothMap, tv: &TangentVector) -> Result<TangentVector> {
    let jet = f.jet(&tv.base, &tv.dir)?;
    TangentVector::new(jet.value, jet.first)
}

/// The tangent lift as a map object on `R^{2n}`, so that it can be
/// evaluated, composed, and lifted again.
pub fn tangent_lift(f: &SmoothMap) -> SmoothMap {
    let n = f.domain_dim();
    let guard = f.guard().pulled_back(&Expr::window(0, n));
    SmoothMap::with_guard(2 * n, Expr::Lift(Box::new(f.clone())), guard)
        .expect("lift of a valid map is well-formed")
}

/// Second tangent map:
/// `(u, e1, e2, e3) ↦ (f(u), Df·e1, Df·e2, D²f·(e1,e2) + Df·e3)`.
pub fn second_tangent_map(f: &SmoothMap, st: &SecondTangent) -> Result<SecondTangent> {
    let (v, d1, d2, d12) = f.second_order_jet(&st.base, &st.dirs.0, &st.dirs.1, &st.dirs.2)?;
    SecondTangent::new(v, d1, d2, d12)
}

/// The involution `(u, e1, e2, e3) ↦ (u, e2, e1, e3)`. Its naturality
/// against second tangent maps is the symmetry of mixed second
/// differentials.
pub fn canonical_flip(st: &SecondTangent) -> SecondTangent {
    SecondTangent {
        base: st.base.clone(),
        dirs: (st.dirs.1.clone(), st.dirs.0.clone(), st.dirs.2.clone()),
    }
}

/// Bundle projection: a tangent vector to the point it touches.
pub fn projection(tv: &TangentVector) -> Vector {
    tv.base.clone()
}

/// Coevaluation candidate `(u, e) ↦ (u, e, e, e)`. Coassociative but
/// not a comonad coevaluation for the tangent functor; shipped as a
/// candidate only, and no comonad API is built on it.
pub fn delta_candidate(tv: &TangentVector) -> SecondTangent {
    SecondTangent {
        base: tv.base.clone(),
        dirs: (tv.dir.clone(), tv.dir.clone(), tv.dir.clone()),
    }
}

/// Monad unit: the zero section `u ↦ (u, 0)`, the trivial splitting of
/// the bundle projection.
pub fn monad_unit(m: &BasicManifold, u: &Vector) -> Result<TangentVector> {
    if !m.contains(u) {
        return Err(Error::domain(format!(
            "point {:?} is outside the manifold region",
            u.coords()
        )));
    }
    Ok(TangentVector {
        dir: Vector::zeros(u.dim()),
        base: u.clone(),
    })
}

/// Projection of a second-level point to the tangent vector it sits
/// over: `(u, e1, e2, e3) ↦ (u, e1)`. This is the bundle projection of
/// `T(TU)`.
pub fn outer_projection(st: &SecondTangent) -> TangentVector {
    TangentVector {
        base: st.base.clone(),
        dir: st.dirs.0.clone(),
    }
}

/// Tangent lift of the bundle projection: `(u, e1, e2, e3) ↦ (u, e2)`.
pub fn lifted_projection(st: &SecondTangent) -> TangentVector {
    TangentVector {
        base: st.base.clone(),
        dir: st.dirs.1.clone(),
    }
}

/// Monad multiplication: the fiberwise sum of [`outer_projection`] and
/// [`lifted_projection`], `(u, e1, e2, e3) ↦ (u, e1 + e2)`.
pub fn monad_mult(st: &SecondTangent) -> TangentVector {
    let a = outer_projection(st);
    let b = lifted_projection(st);
    TangentVector {
        dir: a.dir.add(&b.dir).expect("equal dimensions by construction"),
        base: a.base,
    }
}

/// Contravariant action on covectors: given `p` at `f(u)`, returns the
/// covector `q` at `u` acting as `w ↦ <p, Df(u)·w>`, i.e. the Jacobian
/// transpose applied to the coefficients.
pub fn pullback(f: &SmoothMap, cv: &Covector, u: &Vector) -> Result<Covector> {
    let fu = f.evaluate(u)?;
    let gap = fu.sub(&cv.base)?.euclidean();
    if gap > 1e-9 * cv.base.euclidean().max(1.0) {
        return Err(Error::contract(format!(
            "covector base does not match f(u): gap {gap:e}"
        )));
    }
    let j = f.jacobian(u)?;
    let coeffs = j.transpose().apply(&cv.coeffs)?;
    Covector::new(u.clone(), coeffs)
}

/// Direct image of a covector along a diffeomorphism. Verifies that
/// `f_inv` actually inverts `f` near the base point, then transports
/// the functional as `w ↦ <p, Df⁻¹(f(u))·w>`. Pulling the result back
/// along `f` recovers the original covector.
pub fn pushforward_diffeo(f: &SmoothMap, f_inv: &SmoothMap, cv: &Covector) -> Result<Covector> {
    let u = &cv.base;
    if f.domain_dim() != f_inv.codomain_dim() || f.codomain_dim() != f_inv.domain_dim() {
        return Err(Error::contract(
            "inverse candidate has mismatched dimensions",
        ));
    }
    // Inverse check battery: the base point plus a small perturbation
    // along each coordinate. Perturbed points that fall off the domain
    // are skipped; the base point itself must round-trip.
    let delta = 1e-6 * u.euclidean().max(1.0);
    let mut checked = false;
    for k in 0..=u.dim() {
        let x = if k == 0 {
            u.clone()
        } else {
            u.add(&Vector::basis(u.dim(), k - 1).scale(delta))?
        };
        let roundtrip = match f.evaluate(&x).and_then(|y| f_inv.evaluate(&y)) {
            Ok(r) => r,
            Err(e) => {
                if k == 0 {
                    return Err(e);
                }
                continue;
            }
        };
        let gap = roundtrip.sub(&x)?.euclidean();
        if gap > 1e-9 * x.euclidean().max(1.0) {
            return Err(Error::contract(format!(
                "inverse check failed near the base point: gap {gap:e}"
            )));
        }
        checked = true;
    }
    debug_assert!(checked);
    let y = f.evaluate(u)?;
    let j_inv = f_inv.jacobian(&y)?;
    let coeffs = j_inv.transpose().apply(&cv.coeffs)?;
    Covector::new(y, coeffs)
}

/// Deviations of a chart transition from its finite-difference
/// derivatives, sample by sample.
#[derive(Debug, Clone)]
pub struct TransitionReport {
    pub samples: usize,
    pub max_first_deviation: f64,
    pub max_second_deviation: f64,
}

/// Evaluate the transition `phi1 ∘ phi0⁻¹` on points of the chart-0
/// image and compare its first and second jet derivatives against
/// central differences. `phi0` is used to confirm each sample actually
/// lies in the chart-0 image (round-trip through `phi0⁻¹`).
pub fn check_transition_smooth(
    phi0: &SmoothMap,
    phi0_inv: &SmoothMap,
    phi1: &SmoothMap,
    overlap_samples: &[Vector],
) -> Result<TransitionReport> {
    let transition = compose(phi1, phi0_inv)?;
    let k = transition.domain_dim();
    let mut max_first = 0.0_f64;
    let mut max_second = 0.0_f64;
    for s in overlap_samples {
        let back = compose(phi0, phi0_inv)?.evaluate(s)?;
        let gap = back.sub(s)?.euclidean();
        if gap > 1e-6 * s.euclidean().max(1.0) {
            return Err(Error::domain(format!(
                "sample {:?} is not in the chart overlap (round-trip gap {gap:e})",
                s.coords()
            )));
        }
        let h = crate::smoothmap::fd_default_step(s);
        for i in 0..k {
            let ei = Vector::basis(k, i);
            let exact = transition.differential(s, &ei)?;
            let fd = transition.fd_oracle(s, &ei, h)?;
            max_first = max_first.max(exact.sub(&fd)?.euclidean());
            for j in 0..k {
                let ej = Vector::basis(k, j);
                let exact2 = transition.second_differential(s, &ei, &ej)?;
                let plus = transition.differential(&s.add(&ej.scale(h))?, &ei)?;
                let minus = transition.differential(&s.sub(&ej.scale(h))?, &ei)?;
                let fd2 = plus.sub(&minus)?.scale(1.0 / (2.0 * h));
                max_second = max_second.max(exact2.sub(&fd2)?.euclidean());
            }
        }
    }
    Ok(TransitionReport {
        samples: overlap_samples.len(),
        max_first_deviation: max_first,
        max_second_deviation: max_second,
    })
}
