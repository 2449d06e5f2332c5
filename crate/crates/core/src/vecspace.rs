//! Real coordinate vector spaces: vectors, matrices, norms, metrics,
//! inner products, and randomized axiom checkers.
//!
//! Dimension is a runtime property. All values are immutable after
//! construction and every operation is pure, so everything here is safe
//! to share across threads.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A finite-dimensional real vector. Every coordinate is finite; all
/// arithmetic requires equal dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::contract("vector dimension must be at least 1"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("vector coordinates must be finite"));
        }
        Ok(Vector(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![0.0; dim])
    }

    /// Standard basis vector `i` in dimension `dim`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut c = vec![0.0; dim];
        c[i] = 1.0;
        Vector(c)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        self.check_dim(other)?;
        Ok(Vector(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        self.check_dim(other)?;
        Ok(Vector(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn scale(&self, s: f64) -> Vector {
        Vector(self.0.iter().map(|a| s * a).collect())
    }

    pub fn dot(&self, other: &Vector) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum())
    }

    /// Euclidean length, without going through a `NormSpec`.
    pub fn euclidean(&self) -> f64 {
        self.0.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// Concatenate two vectors (used for bundle points `(u, e)`).
    pub fn concat(&self, other: &Vector) -> Vector {
        let mut c = self.0.clone();
        c.extend_from_slice(&other.0);
        Vector(c)
    }

    /// Split into a prefix of length `at` and the rest.
    pub fn split(&self, at: usize) -> (Vector, Vector) {
        let (a, b) = self.0.split_at(at);
        (Vector(a.to_vec()), Vector(b.to_vec()))
    }

    fn check_dim(&self, other: &Vector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::contract(format!(
                "dimension mismatch: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }
}

impl From<Vec<f64>> for Vector {
    fn from(coords: Vec<f64>) -> Self {
        Vector(coords)
    }
}

impl From<&[f64]> for Vector {
    fn from(coords: &[f64]) -> Self {
        Vector(coords.to_vec())
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Dense row-major matrix. Dimensions here are small (a handful of
/// coordinates), so no external linear-algebra backend is needed.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::contract(format!(
                "matrix data length {} does not match {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::contract("matrix needs at least one row"));
        }
        let c = rows[0].len();
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::contract("matrix rows have unequal lengths"));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.concat(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Matrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        if v.dim() != self.cols {
            return Err(Error::contract(format!(
                "matrix-vector dimension mismatch: {}x{} vs {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        let mut out = vec![0.0; self.rows];
        for i in 0..self.rows {
            let mut s = 0.0;
            for j in 0..self.cols {
                s += self.get(i, j) * v[j];
            }
            out[i] = s;
        }
        Ok(Vector(out))
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix {
            rows: self.cols,
            cols: self.rows,
            data: vec![0.0; self.data.len()],
        };
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j));
            }
        }
        m
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::contract("matrix product dimension mismatch"));
        }
        let mut m = Matrix {
            rows: self.rows,
            cols: other.cols,
            data: vec![0.0; self.rows * other.cols],
        };
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut s = 0.0;
                for k in 0..self.cols {
                    s += self.get(i, k) * other.get(k, j);
                }
                m.set(i, j, s);
            }
        }
        Ok(m)
    }

    /// Solve `A x = b` by Gaussian elimination with partial pivoting.
    /// Intended for the small well-conditioned systems that show up when
    /// inverting affine chart maps.
    pub fn solve(&self, b: &Vector) -> Result<Vector> {
        if self.rows != self.cols {
            return Err(Error::contract("solve requires a square matrix"));
        }
        if b.dim() != self.rows {
            return Err(Error::contract("solve right-hand side has wrong dimension"));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut x: Vec<f64> = b.coords().to_vec();
        for col in 0..n {
            let mut pivot = col;
            for r in col + 1..n {
                if a[r * n + col].abs() > a[pivot * n + col].abs() {
                    pivot = r;
                }
            }
            if a[pivot * n + col].abs() < 1e-300 {
                return Err(Error::domain("matrix is numerically singular"));
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                x.swap(col, pivot);
            }
            let d = a[col * n + col];
            for r in col + 1..n {
                let factor = a[r * n + col] / d;
                if factor == 0.0 {
                    continue;
                }
                for j in col..n {
                    a[r * n + j] -= factor * a[col * n + j];
                }
                x[r] -= factor * x[col];
            }
        }
        for col in (0..n).rev() {
            let mut s = x[col];
            for j in col + 1..n {
                s -= a[col * n + j] * x[j];
            }
            x[col] = s / a[col * n + col];
        }
        Ok(Vector(x))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::contract("inverse requires a square matrix"));
        }
        let n = self.rows;
        let mut inv = Matrix {
            rows: n,
            cols: n,
            data: vec![0.0; n * n],
        };
        for j in 0..n {
            let col = self.solve(&Vector::basis(n, j))?;
            for i in 0..n {
                inv.set(i, j, col[i]);
            }
        }
        Ok(inv)
    }
}

/// Which norm to use. `P(p)` requires `p >= 1`; use
/// [`NormSpec::p_norm_unchecked`] to build a pseudo-spec when probing the
/// axiom checker with a known-bad exponent.
#[derive(Debug, Clone, PartialEq)]
pub enum NormSpec {
    Euclidean,
    P(f64),
    Max,
}

impl NormSpec {
    pub fn p_norm(p: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::contract(format!("p-norm requires p >= 1, got {p}")));
        }
        Ok(NormSpec::P(p))
    }

    /// Skips the `p >= 1` check. The result violates the triangle
    /// inequality for `p < 1`, which is exactly what the axiom checker
    /// tests are probing for.
    pub fn p_norm_unchecked(p: f64) -> Self {
        NormSpec::P(p)
    }
}

/// `‖v‖ >= 0`, zero only at the origin.
pub fn norm(v: &Vector, spec: &NormSpec) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::domain("norm of a non-finite vector"));
    }
    Ok(match spec {
        NormSpec::Euclidean => v.euclidean(),
        NormSpec::P(p) => v
            .coords()
            .iter()
            .map(|c| c.abs().powf(*p))
            .sum::<f64>()
            .powf(1.0 / *p),
        NormSpec::Max => v.coords().iter().fold(0.0, |m, c| m.max(c.abs())),
    })
}

/// Norm-induced distance `d(x, y) = ‖x - y‖`.
pub fn metric(x: &Vector, y: &Vector, spec: &NormSpec) -> Result<f64> {
    norm(&x.sub(y)?, spec)
}

/// A real inner product given by a symmetric positive-definite Gram
/// matrix (identity by default). Positive definiteness is screened at
/// construction by a seeded battery of nonzero vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerProduct {
    gram: Matrix,
}

impl InnerProduct {
    pub fn identity(dim: usize) -> Self {
        InnerProduct {
            gram: Matrix::identity(dim),
        }
    }

    pub fn new(gram: Matrix) -> Result<Self> {
        if gram.rows() != gram.cols() {
            return Err(Error::contract("gram matrix must be square"));
        }
        for i in 0..gram.rows() {
            for j in 0..i {
                if gram.get(i, j) != gram.get(j, i) {
                    return Err(Error::contract(format!(
                        "gram matrix not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        let ip = InnerProduct { gram };
        // Positive-definiteness screen: <e,e> > 0 on a seeded battery of
        // nonzero vectors (plus the basis directions).
        let n = ip.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for trial in 0..128 {
            let e = if trial < n {
                Vector::basis(n, trial)
            } else {
                random_nonzero(&mut rng, n)
            };
            let q = ip.pair(&e, &e)?;
            if q <= 0.0 {
                return Err(Error::contract(format!(
                    "gram matrix is not positive definite: <e,e> = {q} at e = {:?}",
                    e.coords()
                )));
            }
        }
        Ok(ip)
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn pair(&self, x: &Vector, y: &Vector) -> Result<f64> {
        if x.dim() != self.dim() || y.dim() != self.dim() {
            return Err(Error::contract(format!(
                "inner product dimension mismatch: gram {}x{} vs {} and {}",
                self.dim(),
                self.dim(),
                x.dim(),
                y.dim()
            )));
        }
        self.gram.apply(y).and_then(|gy| x.dot(&gy))
    }

    /// The norm induced by this inner product, `sqrt(<x, x>)`.
    pub fn induced_norm(&self, x: &Vector) -> Result<f64> {
        Ok(self.pair(x, x)?.sqrt())
    }
}

/// `<x, y>` against the given Gram matrix.
pub fn inner(x: &Vector, y: &Vector, ip: &InnerProduct) -> Result<f64> {
    ip.pair(x, y)
}

/// One failed axiom instance, with the witness that broke it.
#[derive(Debug, Clone)]
pub struct AxiomViolation {
    pub axiom: &'static str,
    pub witness: String,
    pub magnitude: f64,
}

/// Outcome of a randomized axiom battery.
#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub trials: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    Vector((0..dim).map(|_| rng.random_range(-10.0..10.0)).collect())
}

fn random_nonzero(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    loop {
        let v = random_vector(rng, dim);
        if v.euclidean() > 1e-6 {
            return v;
        }
    }
}

// Violation slack for exact identities under floating point. The axiom
// quantities are O(norm) in magnitude, so a relative cushion is applied.
fn tol(scale: f64) -> f64 {
    1e-9 * scale.max(1.0)
}

/// Evaluate the norm axioms (positive definiteness, absolute
/// homogeneity, triangle inequality) on `samples` seeded random trials
/// in dimension 3.
pub fn check_norm_axioms(spec: &NormSpec, samples: usize, seed: u64) -> Result<AxiomReport> {
    if samples == 0 {
        return Err(Error::contract("samples must be >= 1"));
    }
    let dim = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    for _ in 0..samples {
        let e = random_vector(&mut rng, dim);
        let f = random_vector(&mut rng, dim);
        let lambda: f64 = rng.random_range(-5.0..5.0);

        let ne = norm(&e, spec)?;
        // N1: nonnegative, zero exactly at the origin.
        if ne < 0.0 {
            violations.push(AxiomViolation {
                axiom: "N1",
                witness: format!("‖{:?}‖ = {ne}", e.coords()),
                magnitude: -ne,
            });
        }
        if e.euclidean() > 1e-6 && ne == 0.0 {
            violations.push(AxiomViolation {
                axiom: "N1",
                witness: format!("nonzero {:?} has zero norm", e.coords()),
                magnitude: e.euclidean(),
            });
        }
        // N2: ‖λe‖ = |λ|·‖e‖.
        let lhs = norm(&e.scale(lambda), spec)?;
        let rhs = lambda.abs() * ne;
        if (lhs - rhs).abs() > tol(rhs) {
            violations.push(AxiomViolation {
                axiom: "N2",
                witness: format!("λ = {lambda}, e = {:?}: {lhs} vs {rhs}", e.coords()),
                magnitude: (lhs - rhs).abs(),
            });
        }
        // N3: triangle inequality.
        let sum = norm(&e.add(&f)?, spec)?;
        let bound = ne + norm(&f, spec)?;
        if sum > bound + tol(bound) {
            violations.push(AxiomViolation {
                axiom: "N3",
                witness: format!(
                    "e = {:?}, f = {:?}: ‖e+f‖ = {sum} > {bound}",
                    e.coords(),
                    f.coords()
                ),
                magnitude: sum - bound,
            });
        }
    }
    // Zero vector check is deterministic, run once per battery.
    if norm(&Vector::zeros(dim), spec)? != 0.0 {
        violations.push(AxiomViolation {
            axiom: "N1",
            witness: "‖0‖ ≠ 0".into(),
            magnitude: norm(&Vector::zeros(dim), spec)?,
        });
    }
    Ok(AxiomReport {
        trials: samples,
        violations,
    })
}

/// Evaluate the metric axioms d1-d4 for the norm-induced distance on
/// `samples` seeded random trials in dimension 3.
pub fn check_metric_axioms(spec: &NormSpec, samples: usize, seed: u64) -> Result<AxiomReport> {
    if samples == 0 {
        return Err(Error::contract("samples must be >= 1"));
    }
    let dim = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    for _ in 0..samples {
        let x = random_vector(&mut rng, dim);
        let y = random_vector(&mut rng, dim);
        let z = random_vector(&mut rng, dim);

        let dxy = metric(&x, &y, spec)?;
        // d1: nonnegativity.
        if dxy < 0.0 {
            violations.push(AxiomViolation {
                axiom: "d1",
                witness: format!("d = {dxy}"),
                magnitude: -dxy,
            });
        }
        // d2: coincidence.
        if metric(&x, &x, spec)? != 0.0 {
            violations.push(AxiomViolation {
                axiom: "d2",
                witness: format!("d(x,x) ≠ 0 at x = {:?}", x.coords()),
                magnitude: metric(&x, &x, spec)?,
            });
        }
        // d3: symmetry.
        let dyx = metric(&y, &x, spec)?;
        if (dxy - dyx).abs() > tol(dxy) {
            violations.push(AxiomViolation {
                axiom: "d3",
                witness: format!("d(x,y) = {dxy} vs d(y,x) = {dyx}"),
                magnitude: (dxy - dyx).abs(),
            });
        }
        // d4: triangle inequality.
        let dxz = metric(&x, &z, spec)?;
        let via = dxy + metric(&y, &z, spec)?;
        if dxz > via + tol(via) {
            violations.push(AxiomViolation {
                axiom: "d4",
                witness: format!("d(x,z) = {dxz} > d(x,y)+d(y,z) = {via}"),
                magnitude: dxz - via,
            });
        }
    }
    Ok(AxiomReport {
        trials: samples,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(coords: &[f64]) -> Vector {
        Vector::from(coords)
    }

    #[test]
    fn euclidean_norm_hand_values() {
        // √(9 + 16) = 5
        assert_eq!(norm(&v(&[3.0, 4.0]), &NormSpec::Euclidean).unwrap(), 5.0);
        assert_eq!(
            norm(&v(&[1.0, 0.0, 0.0]), &NormSpec::Euclidean).unwrap(),
            1.0
        );
        assert_eq!(norm(&Vector::zeros(4), &NormSpec::Euclidean).unwrap(), 0.0);
        assert_eq!(norm(&Vector::zeros(4), &NormSpec::Max).unwrap(), 0.0);
        assert_eq!(
            norm(&Vector::zeros(4), &NormSpec::p_norm(3.0).unwrap()).unwrap(),
            0.0
        );
    }

    #[test]
    fn norm_rejects_non_finite() {
        let bad = Vector(vec![1.0, f64::NAN]);
        assert!(matches!(
            norm(&bad, &NormSpec::Euclidean),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn metric_hand_values() {
        let x = v(&[1.0, 0.0]);
        let y = v(&[0.0, 1.0]);
        let d = metric(&x, &y, &NormSpec::Euclidean).unwrap();
        assert!((d - 2.0_f64.sqrt()).abs() < 1e-15);
        assert_eq!(metric(&x, &x, &NormSpec::Euclidean).unwrap(), 0.0);
    }

    #[test]
    fn metric_dimension_mismatch_is_contract_error() {
        let x = v(&[1.0, 0.0]);
        let y = v(&[0.0, 1.0, 2.0]);
        assert!(matches!(
            metric(&x, &y, &NormSpec::Euclidean),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn metric_translation_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let x = random_vector(&mut rng, 3);
            let y = random_vector(&mut rng, 3);
            let a = random_vector(&mut rng, 3);
            let d0 = metric(&x, &y, &NormSpec::Euclidean).unwrap();
            let d1 = metric(&x.add(&a).unwrap(), &y.add(&a).unwrap(), &NormSpec::Euclidean)
                .unwrap();
            assert!((d0 - d1).abs() <= 1e-12 * d0.max(1.0));
        }
    }

    #[test]
    fn inner_hand_values() {
        let ip = InnerProduct::identity(2);
        let x = v(&[1.0, 2.0]);
        let y = v(&[3.0, 4.0]);
        assert_eq!(inner(&x, &y, &ip).unwrap(), 11.0);
        assert_eq!(inner(&x, &Vector::zeros(2), &ip).unwrap(), 0.0);
    }

    #[test]
    fn inner_symmetry_and_norm_identity() {
        let ip = InnerProduct::identity(3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let x = random_vector(&mut rng, 3);
            let y = random_vector(&mut rng, 3);
            assert_eq!(inner(&x, &y, &ip).unwrap(), inner(&y, &x, &ip).unwrap());
            let n = norm(&x, &NormSpec::Euclidean).unwrap();
            let q = inner(&x, &x, &ip).unwrap();
            assert!((q - n * n).abs() <= 1e-12 * q.max(1.0));
        }
    }

    #[test]
    fn gram_must_be_symmetric_and_positive() {
        let asym = Matrix::from_rows(&[vec![1.0, 0.5], vec![0.4, 1.0]]).unwrap();
        assert!(InnerProduct::new(asym).is_err());
        let indef = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        assert!(InnerProduct::new(indef).is_err());
        let spd = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        assert!(InnerProduct::new(spd).is_ok());
    }

    #[test]
    fn norm_axioms_hold_for_real_norms() {
        for spec in [
            NormSpec::Euclidean,
            NormSpec::p_norm(1.0).unwrap(),
            NormSpec::p_norm(3.0).unwrap(),
            NormSpec::Max,
        ] {
            let report = check_norm_axioms(&spec, 1000, 42).unwrap();
            assert!(
                report.passed(),
                "{spec:?} violations: {:?}",
                report.violations
            );
            assert_eq!(report.trials, 1000);
        }
    }

    #[test]
    fn pseudo_norm_triangle_violation_is_witnessed() {
        let pseudo = NormSpec::p_norm_unchecked(0.5);
        let report = check_norm_axioms(&pseudo, 1000, 42).unwrap();
        assert!(report.violations.iter().any(|v| v.axiom == "N3"));
    }

    #[test]
    fn single_trial_report() {
        let report = check_norm_axioms(&NormSpec::Euclidean, 1, 0).unwrap();
        assert_eq!(report.trials, 1);
        assert!(check_norm_axioms(&NormSpec::Euclidean, 0, 0).is_err());
    }

    #[test]
    fn metric_axioms_hold() {
        for spec in [NormSpec::Euclidean, NormSpec::Max] {
            let report = check_metric_axioms(&spec, 1000, 9).unwrap();
            assert!(
                report.passed(),
                "{spec:?} violations: {:?}",
                report.violations
            );
        }
    }

    #[test]
    fn norm_homogeneity_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let x = random_vector(&mut rng, 4);
            let lambda: f64 = rng.random_range(-8.0..8.0);
            for spec in [NormSpec::Euclidean, NormSpec::Max] {
                let lhs = norm(&x.scale(lambda), &spec).unwrap();
                let rhs = lambda.abs() * norm(&x, &spec).unwrap();
                assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
            }
        }
    }

    #[test]
    fn solve_and_inverse_roundtrip() {
        let a = Matrix::from_rows(&[vec![2.0, 1.0, 0.0], vec![1.0, 3.0, 1.0], vec![0.0, 1.0, 2.0]])
            .unwrap();
        let b = v(&[1.0, 2.0, 3.0]);
        let x = a.solve(&b).unwrap();
        let back = a.apply(&x).unwrap();
        for i in 0..3 {
            assert!((back[i] - b[i]).abs() < 1e-12);
        }
        let inv = a.inverse().unwrap();
        let prod = a.matmul(&inv).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((prod.get(i, j) - expect).abs() < 1e-12);
            }
        }
    }
}
