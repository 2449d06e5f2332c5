//! Smooth maps between open subsets of real coordinate spaces,
//! represented as composable expression objects, with exact forward-mode
//! differentiation and an independent finite-difference oracle.
//!
//! Differentiation is always jet propagation (first order for `D`,
//! nested second order for `D²`); nothing is ever simplified
//! symbolically. The central-difference oracle is the one independent
//! cross-check of the jet engine.

mod expr;
mod jet;
mod text;

pub use expr::{Expr, Guard, GuardClause};
pub use text::{parse_expr, print_expr};

use crate::error::{Error, Result};
use crate::vecspace::{Matrix, Vector};

/// A smooth map `f : U ⊆ R^n -> R^m` as a closed expression object.
/// Immutable after construction; evaluation and differentiation are pure.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothMap {
    domain_dim: usize,
    codomain_dim: usize,
    body: Expr,
    guard: Guard,
}

/// Value of a map together with its first directional derivative, and
/// optionally the mixed second-order term from a nested pass.
#[derive(Debug, Clone)]
pub struct JetValue {
    pub value: Vector,
    pub first: Vector,
    pub second: Option<Vector>,
}

impl SmoothMap {
    pub fn new(domain_dim: usize, body: Expr) -> Result<Self> {
        Self::with_guard(domain_dim, body, Guard::none())
    }

    pub fn with_guard(domain_dim: usize, body: Expr, guard: Guard) -> Result<Self> {
        if domain_dim == 0 {
            return Err(Error::contract("domain dimension must be at least 1"));
        }
        let codomain_dim = body.out_dim(domain_dim)?;
        guard.validate(domain_dim)?;
        Ok(SmoothMap {
            domain_dim,
            codomain_dim,
            body,
            guard,
        })
    }

    pub fn identity(dim: usize) -> Self {
        SmoothMap::new(dim, Expr::window(0, dim)).expect("identity is well-formed")
    }

    pub fn linear_map(m: Matrix) -> Self {
        let n = m.cols();
        SmoothMap::new(n, Expr::linear(m, Expr::window(0, n))).expect("linear map is well-formed")
    }

    pub fn constant(domain_dim: usize, value: Vector) -> Self {
        SmoothMap::new(domain_dim, Expr::Const(value)).expect("constant map is well-formed")
    }

    /// Parse the textual expression notation into a map on `domain_dim`
    /// coordinates. See the grammar notes in the repository README.
    pub fn parse(source: &str, domain_dim: usize) -> Result<Self> {
        let body = text::parse_expr(source)?;
        SmoothMap::new(domain_dim, body)
    }

    /// Render the body in the textual notation. Fails for bodies holding
    /// tangent-lifted maps, which have no textual form.
    pub fn to_text(&self) -> Result<String> {
        text::print_expr(&self.body)
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    pub fn codomain_dim(&self) -> usize {
        self.codomain_dim
    }

    pub fn body(&self) -> &Expr {
        &self.body
    }

    pub fn guard(&self) -> &Guard {
        &self.guard
    }

    pub fn domain_contains(&self, u: &Vector) -> bool {
        u.dim() == self.domain_dim && u.is_finite() && self.guard.check(u.coords()).is_ok()
    }

    fn check_point(&self, u: &Vector) -> Result<()> {
        if u.dim() != self.domain_dim {
            return Err(Error::contract(format!(
                "input dimension {} does not match domain dimension {}",
                u.dim(),
                self.domain_dim
            )));
        }
        if !u.is_finite() {
            return Err(Error::domain("evaluation point is not finite"));
        }
        self.guard.check(u.coords())
    }

    fn check_direction(&self, e: &Vector) -> Result<()> {
        if e.dim() != self.domain_dim {
            return Err(Error::contract(format!(
                "direction dimension {} does not match domain dimension {}",
                e.dim(),
                self.domain_dim
            )));
        }
        Ok(())
    }

    /// `f(u)`.
    pub fn evaluate(&self, u: &Vector) -> Result<Vector> {
        self.check_point(u)?;
        let v = jet::eval0(&self.body, u.coords())?;
        finite(&v, "evaluation")?;
        Ok(Vector::from(v))
    }

    /// `Df(u)·e` by first-order jet propagation; exact up to rounding
    /// and linear in `e`.
    pub fn differential(&self, u: &Vector, e: &Vector) -> Result<Vector> {
        Ok(self.jet(u, e)?.first)
    }

    /// Value and directional derivative in one pass.
    pub fn jet(&self, u: &Vector, e: &Vector) -> Result<JetValue> {
        self.check_point(u)?;
        self.check_direction(e)?;
        let j = jet::eval1(&self.body, u.coords(), e.coords())?;
        finite(&j.v, "evaluation")?;
        finite(&j.d, "differential")?;
        Ok(JetValue {
            value: Vector::from(j.v),
            first: Vector::from(j.d),
            second: None,
        })
    }

    /// Jacobian matrix at `u`: column `j` is the differential along the
    /// `j`-th basis direction.
    pub fn jacobian(&self, u: &Vector) -> Result<Matrix> {
        let mut m = Matrix::new(
            self.codomain_dim,
            self.domain_dim,
            vec![0.0; self.codomain_dim * self.domain_dim],
        )?;
        for j in 0..self.domain_dim {
            let col = self.differential(u, &Vector::basis(self.domain_dim, j))?;
            for i in 0..self.codomain_dim {
                m.set(i, j, col[i]);
            }
        }
        Ok(m)
    }

    /// `D²f(u)·(e1, e2)` by a nested second-order pass; symmetric in
    /// `(e1, e2)`.
    pub fn second_differential(&self, u: &Vector, e1: &Vector, e2: &Vector) -> Result<Vector> {
        self.check_point(u)?;
        self.check_direction(e1)?;
        self.check_direction(e2)?;
        let zero = vec![0.0; self.domain_dim];
        let j = jet::eval2(&self.body, u.coords(), e1.coords(), e2.coords(), &zero)?;
        finite(&j.d12, "second differential")?;
        Ok(Vector::from(j.d12))
    }

    /// Full second-order pass with a seeded cross direction:
    /// returns `(f(u), Df·e1, Df·e2, D²f·(e1,e2) + Df·e3)`.
    /// This is the fiberwise second tangent map.
    pub(crate) fn second_order_jet(
        &self,
        u: &Vector,
        e1: &Vector,
        e2: &Vector,
        e3: &Vector,
    ) -> Result<(Vector, Vector, Vector, Vector)> {
        self.check_point(u)?;
        self.check_direction(e1)?;
        self.check_direction(e2)?;
        self.check_direction(e3)?;
        let j = jet::eval2(
            &self.body,
            u.coords(),
            e1.coords(),
            e2.coords(),
            e3.coords(),
        )?;
        finite(&j.v, "evaluation")?;
        finite(&j.d1, "differential")?;
        finite(&j.d2, "differential")?;
        finite(&j.d12, "second-order channel")?;
        Ok((
            Vector::from(j.v),
            Vector::from(j.d1),
            Vector::from(j.d2),
            Vector::from(j.d12),
        ))
    }

    /// Central difference `(f(u + h·e) - f(u - h·e)) / 2h`: the
    /// independent oracle for [`SmoothMap::differential`].
    pub fn fd_oracle(&self, u: &Vector, e: &Vector, h: f64) -> Result<Vector> {
        if !(h > 0.0) {
            return Err(Error::contract("finite-difference step must be positive"));
        }
        self.check_direction(e)?;
        let plus = self.evaluate(&u.add(&e.scale(h))?)?;
        let minus = self.evaluate(&u.sub(&e.scale(h))?)?;
        Ok(plus.sub(&minus)?.scale(1.0 / (2.0 * h)))
    }
}

/// Step size balancing O(h²) truncation against O(eps/h) rounding for
/// doubles: `1e-5 · max(1, ‖u‖)`.
pub fn fd_default_step(u: &Vector) -> f64 {
    1e-5 * u.euclidean().max(1.0)
}

/// `g ∘ f`. The composite's guard is `f`'s guard together with `g`'s
/// guard pulled back through `f`.
pub fn compose(g: &SmoothMap, f: &SmoothMap) -> Result<SmoothMap> {
    if f.codomain_dim != g.domain_dim {
        return Err(Error::contract(format!(
            "cannot compose: inner codomain {} vs outer domain {}",
            f.codomain_dim, g.domain_dim
        )));
    }
    let body = Expr::Compose(Box::new(g.body.clone()), Box::new(f.body.clone()));
    let guard = f.guard.clone().and(g.guard.pulled_back(&f.body));
    SmoothMap::with_guard(f.domain_dim, body, guard)
}

/// A bilinear pairing `B : R^p × R^q -> R^g` given by one `p×q` matrix
/// per output component: `B(a, b)_i = aᵀ · M_i · b`.
#[derive(Debug, Clone)]
pub struct Bilinear {
    mats: Vec<Matrix>,
}

impl Bilinear {
    pub fn new(mats: Vec<Matrix>) -> Result<Self> {
        if mats.is_empty() {
            return Err(Error::contract("bilinear map needs at least one component"));
        }
        let (p, q) = (mats[0].rows(), mats[0].cols());
        if mats.iter().any(|m| m.rows() != p || m.cols() != q) {
            return Err(Error::contract("bilinear component shapes differ"));
        }
        Ok(Bilinear { mats })
    }

    /// Scalar multiplication on R × R.
    pub fn scalar_product() -> Self {
        Bilinear {
            mats: vec![Matrix::identity(1)],
        }
    }

    /// The pairing `<a, b> = aᵀ G b` of an inner product.
    pub fn from_gram(gram: Matrix) -> Self {
        Bilinear { mats: vec![gram] }
    }

    pub fn left_dim(&self) -> usize {
        self.mats[0].rows()
    }

    pub fn right_dim(&self) -> usize {
        self.mats[0].cols()
    }

    pub fn out_dim(&self) -> usize {
        self.mats.len()
    }

    pub fn apply(&self, a: &Vector, b: &Vector) -> Result<Vector> {
        if a.dim() != self.left_dim() || b.dim() != self.right_dim() {
            return Err(Error::contract("bilinear argument dimension mismatch"));
        }
        let mut out = Vec::with_capacity(self.mats.len());
        for m in &self.mats {
            out.push(a.dot(&m.apply(b)?)?);
        }
        Ok(Vector::from(out))
    }

    /// Assemble `x ↦ B(f1(x), f2(x))` as an expression tree, so its
    /// differential comes out of the jet engine rather than from the
    /// product-rule formula under test.
    pub fn as_map(&self, f1: &SmoothMap, f2: &SmoothMap) -> Result<SmoothMap> {
        if f1.domain_dim() != f2.domain_dim() {
            return Err(Error::contract("bilinear factors need a common domain"));
        }
        if f1.codomain_dim() != self.left_dim() || f2.codomain_dim() != self.right_dim() {
            return Err(Error::contract("bilinear factor dimensions do not match"));
        }
        let mut components = Vec::with_capacity(self.mats.len());
        for m in &self.mats {
            let mut sum: Option<Expr> = None;
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    let w = m.get(i, j);
                    if w == 0.0 {
                        continue;
                    }
                    let term = Expr::Compose(
                        Box::new(Expr::coord(i)),
                        Box::new(f1.body.clone()),
                    )
                    .mul(Expr::Compose(
                        Box::new(Expr::coord(j)),
                        Box::new(f2.body.clone()),
                    ))
                    .scale(w);
                    sum = Some(match sum {
                        None => term,
                        Some(s) => s.add(term),
                    });
                }
            }
            components.push(sum.unwrap_or_else(|| Expr::scalar(0.0)));
        }
        let guard = f1.guard.clone().and(f2.guard.clone());
        SmoothMap::with_guard(f1.domain_dim(), Expr::Pair(components), guard)
    }
}

/// Leibniz-rule residual
/// `‖D(B(f1,f2))(u)·e − B(Df1·e, f2(u)) − B(f1(u), Df2·e)‖`.
/// The left side is differentiated as one assembled expression; the
/// right side pairs the factor jets. Library primitives keep this at
/// rounding level (contract: ≤ 1e-10).
pub fn check_leibniz(
    pairing: &Bilinear,
    f1: &SmoothMap,
    f2: &SmoothMap,
    u: &Vector,
    e: &Vector,
) -> Result<f64> {
    let assembled = pairing.as_map(f1, f2)?;
    let lhs = assembled.differential(u, e)?;
    let j1 = f1.jet(u, e)?;
    let j2 = f2.jet(u, e)?;
    let rhs = pairing
        .apply(&j1.first, &j2.value)?
        .add(&pairing.apply(&j1.value, &j2.first)?)?;
    Ok(lhs.sub(&rhs)?.euclidean())
}

fn finite(v: &[f64], what: &str) -> Result<()> {
    if v.iter().any(|c| !c.is_finite()) {
        return Err(Error::domain(format!("{what} produced a non-finite value")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::from(c)
    }

    /// f(x) = x·x on R.
    fn square() -> SmoothMap {
        SmoothMap::new(1, Expr::coord(0).mul(Expr::coord(0))).unwrap()
    }

    #[test]
    fn evaluate_identity_and_square() {
        let id = SmoothMap::identity(2);
        assert_eq!(id.evaluate(&v(&[2.0, 5.0])).unwrap(), v(&[2.0, 5.0]));
        assert_eq!(square().evaluate(&v(&[3.0])).unwrap(), v(&[9.0]));
    }

    #[test]
    fn guarded_reciprocal_rejects_origin() {
        let f = SmoothMap::with_guard(
            1,
            Expr::coord(0).recip(),
            Guard::norm_above(vec![0], 1e-9),
        )
        .unwrap();
        assert!(matches!(f.evaluate(&v(&[0.0])), Err(Error::Domain(_))));
        assert!((f.evaluate(&v(&[2.0])).unwrap()[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn unguarded_singularity_is_still_a_domain_error() {
        let f = SmoothMap::new(1, Expr::coord(0).recip()).unwrap();
        assert!(matches!(f.evaluate(&v(&[0.0])), Err(Error::Domain(_))));
    }

    #[test]
    fn differential_hand_values() {
        // Oracle: central differences put D(x²)(3)·1 at 6 ± O(h²).
        let f = square();
        let d = f.differential(&v(&[3.0]), &v(&[1.0])).unwrap();
        assert!((d[0] - 6.0).abs() < 1e-12);
        let fd = f.fd_oracle(&v(&[3.0]), &v(&[1.0]), 1e-5).unwrap();
        assert!((fd[0] - 6.0).abs() < 1e-9);

        let id = SmoothMap::identity(3);
        let e = v(&[0.3, -0.1, 2.0]);
        assert_eq!(id.differential(&v(&[1.0, 1.0, 1.0]), &e).unwrap(), e);
    }

    #[test]
    fn differential_of_linear_map_is_the_map() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![-1.0, 0.5]]).unwrap();
        let f = SmoothMap::linear_map(a.clone());
        let e = v(&[0.7, -0.2]);
        let d = f.differential(&v(&[3.0, 4.0]), &e).unwrap();
        assert_eq!(d, a.apply(&e).unwrap());
        // Central differences are exact on affine maps up to rounding.
        let fd = f.fd_oracle(&v(&[3.0, 4.0]), &e, 0.37).unwrap();
        assert!(d.sub(&fd).unwrap().euclidean() < 1e-12);
    }

    #[test]
    fn jacobian_hand_values() {
        // f(x,y) = (x·y, x+y) at (2,3): rows [[3,2],[1,1]].
        let f = SmoothMap::new(
            2,
            Expr::pair(vec![
                Expr::coord(0).mul(Expr::coord(1)),
                Expr::coord(0).add(Expr::coord(1)),
            ]),
        )
        .unwrap();
        let j = f.jacobian(&v(&[2.0, 3.0])).unwrap();
        assert_eq!(
            (j.get(0, 0), j.get(0, 1), j.get(1, 0), j.get(1, 1)),
            (3.0, 2.0, 1.0, 1.0)
        );

        let id = SmoothMap::identity(2);
        assert_eq!(id.jacobian(&v(&[5.0, -1.0])).unwrap(), Matrix::identity(2));
    }

    #[test]
    fn jacobian_times_direction_matches_differential() {
        let f = SmoothMap::new(
            3,
            Expr::pair(vec![
                Expr::coord(0).sin().mul(Expr::coord(2)),
                Expr::window(0, 3).norm(),
            ]),
        )
        .unwrap();
        let u = v(&[0.4, -1.2, 0.9]);
        let e = v(&[0.3, 0.5, -0.7]);
        let j = f.jacobian(&u).unwrap();
        let by_matrix = j.apply(&e).unwrap();
        let direct = f.differential(&u, &e).unwrap();
        assert!(by_matrix.sub(&direct).unwrap().euclidean() < 1e-12);
    }

    #[test]
    fn second_differential_hand_values() {
        // D²(x²) = 2 everywhere.
        let f = square();
        let one = v(&[1.0]);
        let d2 = f.second_differential(&v(&[1.0]), &one, &one).unwrap();
        assert!((d2[0] - 2.0).abs() < 1e-12);

        let a = Matrix::from_rows(&[vec![2.0, -1.0], vec![0.0, 3.0]]).unwrap();
        let lin = SmoothMap::linear_map(a);
        let z = lin
            .second_differential(&v(&[1.0, 1.0]), &v(&[1.0, 2.0]), &v(&[-1.0, 0.5]))
            .unwrap();
        assert_eq!(z, v(&[0.0, 0.0]));
    }

    #[test]
    fn second_differential_is_symmetric() {
        let f = SmoothMap::new(
            2,
            Expr::coord(0)
                .sin()
                .mul(Expr::coord(1).exp())
                .add(Expr::coord(0).mul(Expr::coord(1)).pow(2)),
        )
        .unwrap();
        let u = v(&[0.7, -0.3]);
        let e1 = v(&[1.0, 2.0]);
        let e2 = v(&[-0.5, 0.8]);
        let a = f.second_differential(&u, &e1, &e2).unwrap();
        let b = f.second_differential(&u, &e2, &e1).unwrap();
        assert!(a.sub(&b).unwrap().euclidean() <= 1e-12 * a.euclidean().max(1.0));
    }

    #[test]
    fn fd_oracle_on_sin() {
        let f = SmoothMap::new(1, Expr::coord(0).sin()).unwrap();
        let fd = f.fd_oracle(&v(&[0.0]), &v(&[1.0]), 1e-5).unwrap();
        assert!((fd[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn fd_oracle_respects_guards() {
        let f = SmoothMap::with_guard(
            1,
            Expr::coord(0).recip(),
            Guard::norm_above(vec![0], 1e-9),
        )
        .unwrap();
        // u - h·e lands exactly on the singularity.
        assert!(f.fd_oracle(&v(&[1e-5]), &v(&[1.0]), 1e-5).is_err());
    }

    #[test]
    fn compose_chain_rule_hand_value() {
        // f(x) = x², g(y) = sin y: D(g∘f)(1)·1 = 2·cos(1).
        let g = SmoothMap::new(1, Expr::coord(0).sin()).unwrap();
        let gf = compose(&g, &square()).unwrap();
        let d = gf.differential(&v(&[1.0]), &v(&[1.0])).unwrap();
        assert!((d[0] - 2.0 * 1.0_f64.cos()).abs() < 1e-12);
        let fd = gf.fd_oracle(&v(&[1.0]), &v(&[1.0]), 1e-5).unwrap();
        assert!((d[0] - fd[0]).abs() < 1e-9);
    }

    #[test]
    fn compose_identity_acts_trivially() {
        let f = SmoothMap::new(1, Expr::coord(0).exp()).unwrap();
        let idf = compose(&SmoothMap::identity(1), &f).unwrap();
        for x in [-1.0, 0.0, 0.5, 2.0] {
            assert_eq!(
                idf.evaluate(&v(&[x])).unwrap(),
                f.evaluate(&v(&[x])).unwrap()
            );
        }
    }

    #[test]
    fn compose_linear_maps_multiplies_matrices() {
        let a = Matrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 2.0]]).unwrap();
        let b = Matrix::from_rows(&[vec![3.0, 0.0], vec![1.0, -1.0]]).unwrap();
        let ba = compose(&SmoothMap::linear_map(b.clone()), &SmoothMap::linear_map(a.clone()))
            .unwrap();
        let expected = b.matmul(&a).unwrap();
        assert_eq!(ba.jacobian(&v(&[0.3, 0.4])).unwrap(), expected);
    }

    #[test]
    fn compose_dimension_mismatch() {
        let f = SmoothMap::identity(2);
        let g = SmoothMap::identity(3);
        assert!(matches!(compose(&g, &f), Err(Error::Contract(_))));
    }

    #[test]
    fn composite_guard_is_preimage() {
        // g = 1/y guarded away from 0; f(x) = x - 1. The composite must
        // reject x = 1 even though f itself is total.
        let g = SmoothMap::with_guard(
            1,
            Expr::coord(0).recip(),
            Guard::norm_above(vec![0], 1e-9),
        )
        .unwrap();
        let f = SmoothMap::new(1, Expr::coord(0).sub(Expr::scalar(1.0))).unwrap();
        let gf = compose(&g, &f).unwrap();
        assert!(gf.evaluate(&v(&[1.0])).is_err());
        assert!((gf.evaluate(&v(&[3.0])).unwrap()[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn leibniz_scalar_product_of_identities() {
        // Law reads 2u = u + u; residual is pure rounding.
        let id = SmoothMap::identity(1);
        let r = check_leibniz(
            &Bilinear::scalar_product(),
            &id,
            &id,
            &v(&[2.0]),
            &v(&[1.0]),
        )
        .unwrap();
        assert!(r <= 1e-12);
    }

    #[test]
    fn leibniz_sin_cos() {
        let f1 = SmoothMap::new(1, Expr::coord(0).sin()).unwrap();
        let f2 = SmoothMap::new(1, Expr::coord(0).cos()).unwrap();
        let r = check_leibniz(
            &Bilinear::scalar_product(),
            &f1,
            &f2,
            &v(&[0.7]),
            &v(&[1.0]),
        )
        .unwrap();
        assert!(r <= 1e-10);
    }

    #[test]
    fn leibniz_inner_product_of_linear_maps() {
        let a = SmoothMap::linear_map(
            Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap(),
        );
        let b = SmoothMap::linear_map(
            Matrix::from_rows(&[vec![-1.0, 0.0], vec![3.0, 1.0]]).unwrap(),
        );
        let pairing = Bilinear::from_gram(Matrix::identity(2));
        let r = check_leibniz(&pairing, &a, &b, &v(&[0.5, -0.25]), &v(&[1.0, 1.0])).unwrap();
        assert!(r <= 1e-12);
    }

    #[test]
    fn differential_linear_in_direction() {
        let f = SmoothMap::new(
            2,
            Expr::pair(vec![
                Expr::coord(0).mul(Expr::coord(1)).sin(),
                Expr::window(0, 2).norm().pow(3),
            ]),
        )
        .unwrap();
        let u = v(&[1.3, -0.4]);
        let e1 = v(&[0.2, 0.9]);
        let e2 = v(&[-1.1, 0.5]);
        let (alpha, beta) = (0.7, -2.3);
        let combo = f
            .differential(&u, &e1.scale(alpha).add(&e2.scale(beta)).unwrap())
            .unwrap();
        let split = f
            .differential(&u, &e1)
            .unwrap()
            .scale(alpha)
            .add(&f.differential(&u, &e2).unwrap().scale(beta))
            .unwrap();
        assert!(combo.sub(&split).unwrap().euclidean() <= 1e-12 * combo.euclidean().max(1.0));
    }

    #[test]
    fn evaluate_rejects_wrong_dimension() {
        let f = square();
        assert!(matches!(
            f.evaluate(&v(&[1.0, 2.0])),
            Err(Error::Contract(_))
        ));
    }
}
