//! Paths, tests, and the correlation between them.
//!
//! A path probes a space from the line, a test probes it toward the
//! line, and the pairing `(ς, t) ↦ D(t ∘ ς)(0)` is what either side can
//! observe of the other. Tangent vectors are exactly paths up to
//! indistinguishability under this pairing (together with the base
//! point they pass through), and covectors are the mirror-image
//! quotient of tests.

use crate::error::{Error, Result};
use crate::smoothmap::{compose, Expr, SmoothMap};
use crate::tangent::{Covector, TangentVector};
use crate::vecspace::Vector;

/// A differentiable curve into R^n, defined on an open window around 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    map: SmoothMap,
    /// Half-width of the parameter window `(-a, a)`.
    half_width: f64,
}

impl Path {
    pub fn new(map: SmoothMap, half_width: f64) -> Result<Self> {
        if map.domain_dim() != 1 {
            return Err(Error::contract("a path must have a one-dimensional domain"));
        }
        if !(half_width > 0.0) {
            return Err(Error::contract("path window must have positive width"));
        }
        let p = Path { map, half_width };
        // The curve must exist at the probe instant.
        p.at_zero()?;
        Ok(p)
    }

    /// The straight line `s ↦ u + s·e`.
    pub fn line(through: &Vector, direction: &Vector) -> Result<Self> {
        if through.dim() != direction.dim() {
            return Err(Error::contract("line point and direction dimensions differ"));
        }
        let n = through.dim();
        let body = Expr::pair(
            (0..n)
                .map(|i| {
                    Expr::scalar(through[i]).add(Expr::coord(0).scale(direction[i]))
                })
                .collect(),
        );
        Path::new(SmoothMap::new(1, body)?, 1.0)
    }

    pub fn map(&self) -> &SmoothMap {
        &self.map
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn target_dim(&self) -> usize {
        self.map.codomain_dim()
    }

    pub fn at_zero(&self) -> Result<Vector> {
        self.map.evaluate(&Vector::from(vec![0.0]))
    }

    /// Velocity at the probe instant, `Dς(0)·1`.
    pub fn velocity_at_zero(&self) -> Result<Vector> {
        self.map
            .differential(&Vector::from(vec![0.0]), &Vector::from(vec![1.0]))
    }
}

/// A scalar-valued test on R^n.
#[derive(Debug, Clone, PartialEq)]
pub struct Test {
    map: SmoothMap,
}

impl Test {
    pub fn new(map: SmoothMap) -> Result<Self> {
        if map.codomain_dim() != 1 {
            return Err(Error::contract("a test must be scalar-valued"));
        }
        Ok(Test { map })
    }

    /// The linear test `x ↦ <c, x>`.
    pub fn linear(c: &Vector) -> Result<Self> {
        let n = c.dim();
        let mut sum = Expr::coord(0).scale(c[0]);
        for i in 1..n {
            sum = sum.add(Expr::coord(i).scale(c[i]));
        }
        Test::new(SmoothMap::new(n, sum)?)
    }

    pub fn map(&self) -> &SmoothMap {
        &self.map
    }

    pub fn source_dim(&self) -> usize {
        self.map.domain_dim()
    }

    pub fn evaluate(&self, x: &Vector) -> Result<f64> {
        Ok(self.map.evaluate(x)?[0])
    }
}

/// The testing correlation `D(t ∘ ς)(0)`, computed by one jet pass
/// through the composite.
pub fn correlate(path: &Path, test: &Test) -> Result<f64> {
    if path.target_dim() != test.source_dim() {
        return Err(Error::contract(
            "path target and test source dimensions differ",
        ));
    }
    let composite = compose(test.map(), path.map())?;
    let d = composite.differential(&Vector::from(vec![0.0]), &Vector::from(vec![1.0]))?;
    Ok(d[0])
}

/// Canonical representative of a path's equivalence class:
/// `(ς(0), Dς(0)·1)`.
pub fn tangent_of_path(path: &Path) -> Result<TangentVector> {
    TangentVector::new(path.at_zero()?, path.velocity_at_zero()?)
}

/// Two paths are equivalent when they agree at 0 in both value and
/// velocity, up to `tol`.
pub fn paths_equivalent(p1: &Path, p2: &Path, tol: f64) -> Result<bool> {
    if p1.target_dim() != p2.target_dim() {
        return Ok(false);
    }
    let value_gap = p1.at_zero()?.sub(&p2.at_zero()?)?.euclidean();
    let velocity_gap = p1
        .velocity_at_zero()?
        .sub(&p2.velocity_at_zero()?)?
        .euclidean();
    Ok(value_gap <= tol && velocity_gap <= tol)
}

fn monomial_tests(dim: usize, degree: u32) -> Vec<Test> {
    let mut battery = Vec::new();
    for i in 0..dim {
        battery.push(Test::new(SmoothMap::new(dim, Expr::coord(i)).expect("valid")).expect("scalar"));
    }
    if degree >= 2 {
        for i in 0..dim {
            for j in i..dim {
                let body = Expr::coord(i).mul(Expr::coord(j));
                battery.push(Test::new(SmoothMap::new(dim, body).expect("valid")).expect("scalar"));
            }
        }
    }
    battery
}

/// Brute-force search for a monomial test (total degree at most
/// `degree`, which must be 1 or 2) that tells two paths apart.
///
/// A test `t` separates the paths when it observes different behaviors:
/// either the correlations `D(t∘ς)(0)` differ, or the values `t(ς(0))`
/// differ (paths through different base points live in different
/// components of the path space, and the coordinate tests witness
/// that). Returns the first separating test found, or `None` when the
/// battery observes no difference.
pub fn separating_test_search(p1: &Path, p2: &Path, degree: u32) -> Result<Option<Test>> {
    if !(1..=2).contains(&degree) {
        return Err(Error::contract("separation degree must be 1 or 2"));
    }
    if p1.target_dim() != p2.target_dim() {
        return Err(Error::contract("paths live in different dimensions"));
    }
    let threshold = 1e-9;
    for test in monomial_tests(p1.target_dim(), degree) {
        let c1 = correlate(p1, &test)?;
        let c2 = correlate(p2, &test)?;
        if (c1 - c2).abs() > threshold {
            return Ok(Some(test));
        }
        let v1 = test.evaluate(&p1.at_zero()?)?;
        let v2 = test.evaluate(&p2.at_zero()?)?;
        if (v1 - v2).abs() > threshold {
            return Ok(Some(test));
        }
    }
    Ok(None)
}

/// Dinaturality residual `|correlate(f∘p, t) − correlate(p, t∘f)|`.
/// Both sides differentiate the same composite, so this is zero up to
/// rounding.
pub fn check_dinaturality(f: &SmoothMap, path: &Path, test: &Test) -> Result<f64> {
    let pushed = Path::new(compose(f, path.map())?, path.half_width())?;
    let pulled = Test::new(compose(test.map(), f)?)?;
    let lhs = correlate(&pushed, test)?;
    let rhs = correlate(path, &pulled)?;
    Ok((lhs - rhs).abs())
}

/// The covector a test induces at a point: the Riesz representative of
/// `e ↦ Dt(x)·e`, i.e. the gradient read off basis direction by basis
/// direction.
pub fn covector_of_test(test: &Test, x: &Vector) -> Result<Covector> {
    let n = test.source_dim();
    let mut coeffs = Vec::with_capacity(n);
    for i in 0..n {
        let d = test.map().differential(x, &Vector::basis(n, i))?;
        coeffs.push(d[0]);
    }
    Covector::new(x.clone(), Vector::from(coeffs))
}
