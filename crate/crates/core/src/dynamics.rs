//! Vector fields as cross-sections of the tangent bundle, the
//! unit-rate clock, and trajectories as integral curves.
//!
//! A vector field is kept as its direction component `x ↦ X(x)`; the
//! coalgebra is `x ↦ (x, X(x))`, which satisfies the cross-section law
//! by construction. A trajectory discretizes a morphism from the clock:
//! along the stored states, the centered-difference velocity should
//! match the field, and `check_trajectory` reports how well it does.

use crate::error::{Error, Result};
use crate::smoothmap::{Expr, SmoothMap};
use crate::tangent::{tangent_map, BasicManifold, Region, TangentVector};
use crate::vecspace::{NormSpec, Vector};

/// A smooth section `x ↦ (x, field(x))` of the tangent bundle over a
/// basic manifold.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    manifold: BasicManifold,
    field: SmoothMap,
}

impl VectorField {
    pub fn new(manifold: BasicManifold, field: SmoothMap) -> Result<Self> {
        if field.domain_dim() != manifold.dim() || field.codomain_dim() != manifold.dim() {
            return Err(Error::contract(format!(
                "field must map R^{n} to R^{n}, got {} -> {}",
                field.domain_dim(),
                field.codomain_dim(),
                n = manifold.dim()
            )));
        }
        Ok(VectorField { manifold, field })
    }

    /// Field on all of R^n with the euclidean norm.
    pub fn on_euclidean(field: SmoothMap) -> Result<Self> {
        let m = BasicManifold::euclidean(field.domain_dim());
        VectorField::new(m, field)
    }

    pub fn manifold(&self) -> &BasicManifold {
        &self.manifold
    }

    pub fn map(&self) -> &SmoothMap {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.manifold.dim()
    }

    /// Direction component `X(x)`.
    pub fn direction(&self, x: &Vector) -> Result<Vector> {
        if !self.manifold.contains(x) {
            return Err(Error::domain(format!(
                "point {:?} is outside the field's region",
                x.coords()
            )));
        }
        self.field.evaluate(x)
    }

    /// The coalgebra `x ↦ (x, X(x))`.
    pub fn coalgebra(&self, x: &Vector) -> Result<TangentVector> {
        TangentVector::new(x.clone(), self.direction(x)?)
    }

    /// The field with reversed directions (for integrating backwards).
    pub fn negated(&self) -> VectorField {
        let body = self.field.body().clone().scale(-1.0);
        let field = SmoothMap::with_guard(
            self.field.domain_dim(),
            body,
            self.field.guard().clone(),
        )
        .expect("negation preserves well-formedness");
        VectorField {
            manifold: self.manifold.clone(),
            field,
        }
    }
}

/// The time axis: an open interval `(-a, a)` around 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Clock {
    half_width: f64,
}

impl Clock {
    pub const DEFAULT_HALF_WIDTH: f64 = 10.0;

    pub fn new(half_width: f64) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(Error::contract("clock interval must have positive width"));
        }
        Ok(Clock { half_width })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }
}

impl Default for Clock {
    fn default() -> Self {
        Clock {
            half_width: Clock::DEFAULT_HALF_WIDTH,
        }
    }
}

/// The clock as a dynamical system: unit-rate field `t ↦ (t, 1)` on its
/// interval.
pub fn clock_field(clock: &Clock) -> VectorField {
    let manifold = BasicManifold::new(
        1,
        Region::Ball {
            center: Vector::zeros(1),
            radius: clock.half_width,
        },
        NormSpec::Euclidean,
    )
    .expect("interval is a valid manifold");
    let field = SmoothMap::new(1, Expr::scalar(1.0)).expect("constant map");
    VectorField::new(manifold, field).expect("dimensions agree")
}

/// How a trajectory was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Rk4,
    Picard,
}

/// A sampled integral curve on a uniform time grid starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<Vector>,
    dt: f64,
    method: Method,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, states: Vec<Vector>, dt: f64, method: Method) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::contract("times and states lengths differ"));
        }
        if times.is_empty() || times[0] != 0.0 {
            return Err(Error::contract("trajectory must start at time 0"));
        }
        for k in 1..times.len() {
            let step = times[k] - times[k - 1];
            if (step - dt).abs() > 1e-12 {
                return Err(Error::contract(format!(
                    "non-uniform step at index {k}: {step} vs dt {dt}"
                )));
            }
        }
        if states.iter().any(|s| !s.is_finite()) {
            return Err(Error::domain("trajectory contains non-finite states"));
        }
        Ok(Trajectory {
            times,
            states,
            dt,
            method,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[Vector] {
        &self.states
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory is never empty")
    }

    pub fn final_state(&self) -> &Vector {
        self.states.last().expect("trajectory is never empty")
    }
}

fn singular(step: usize, time: f64, err: Error) -> Error {
    match err {
        Error::Singularity { .. } => err,
        other => Error::Singularity {
            step,
            time,
            detail: other.to_string(),
        },
    }
}

/// Number of uniform steps covering `t_end` with step at most `dt`
/// (up to rounding), landing exactly on `t_end`.
fn step_count(t_end: f64, dt: f64) -> usize {
    ((t_end / dt) - 1e-9).ceil().max(1.0) as usize
}

/// Classical fixed-step fourth-order Runge-Kutta integration of
/// `γ̇ = X(γ)`, `γ(0) = q0`, up to `t_end`. The step is `t_end / n`
/// with `n = ceil(t_end / dt)`, so the grid lands exactly on `t_end`.
/// Any stage that leaves the region aborts with a singularity error
/// naming the step.
pub fn integrate_rk4(
    field: &VectorField,
    q0: &Vector,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    if !(t_end > 0.0) || !(dt > 0.0) {
        return Err(Error::contract("t_end and dt must be positive"));
    }
    if dt > t_end {
        return Err(Error::contract("dt must not exceed t_end"));
    }
    let n = step_count(t_end, dt);
    let h = t_end / n as f64;
    let mut states = Vec::with_capacity(n + 1);
    let mut times = Vec::with_capacity(n + 1);
    let mut y = q0.clone();
    // Initial state must be admissible.
    field.direction(&y)?;
    states.push(y.clone());
    times.push(0.0);
    for step in 0..n {
        let t = step as f64 * h;
        let eval = |p: &Vector| -> Result<Vector> {
            field.direction(p).map_err(|e| singular(step, t, e))
        };
        let k1 = eval(&y)?;
        let k2 = eval(&y.add(&k1.scale(h / 2.0))?)?;
        let k3 = eval(&y.add(&k2.scale(h / 2.0))?)?;
        let k4 = eval(&y.add(&k3.scale(h))?)?;
        let increment = k1
            .add(&k2.scale(2.0))?
            .add(&k3.scale(2.0))?
            .add(&k4)?
            .scale(h / 6.0);
        y = y.add(&increment)?;
        if !y.is_finite() || !field.manifold().contains(&y) {
            return Err(Error::Singularity {
                step,
                time: t + h,
                detail: "state left the region".into(),
            });
        }
        states.push(y.clone());
        times.push((step + 1) as f64 * h);
    }
    Trajectory::new(times, states, h, Method::Rk4)
}

/// Fixed-point iteration of the integral operator:
/// `x_{k+1}(t) = q0 + ∫₀ᵗ X(x_k(s)) ds` on a uniform grid with
/// trapezoidal quadrature, iterated until the sup-norm change drops
/// to `tol`. Solutions of the differential equation are exactly the
/// fixed points of this operator.
pub fn integrate_picard(
    field: &VectorField,
    q0: &Vector,
    t_end: f64,
    grid: usize,
    max_iter: usize,
    tol: f64,
) -> Result<Trajectory> {
    if !(t_end > 0.0) {
        return Err(Error::contract("t_end must be positive"));
    }
    if grid < 1 || max_iter < 1 {
        return Err(Error::contract("grid and max_iter must be at least 1"));
    }
    if !(tol > 0.0) {
        return Err(Error::contract("tolerance must be positive"));
    }
    field.direction(q0)?;
    let h = t_end / grid as f64;
    let times: Vec<f64> = (0..=grid).map(|i| i as f64 * h).collect();
    let mut current: Vec<Vector> = vec![q0.clone(); grid + 1];
    let mut last_change = f64::INFINITY;
    for iteration in 0..max_iter {
        // Field along the current iterate; leaving the domain mid-stream
        // counts as failure to contract.
        let mut directions = Vec::with_capacity(grid + 1);
        for state in &current {
            match field.direction(state) {
                Ok(d) => directions.push(d),
                Err(_) => {
                    return Err(Error::NonContraction {
                        iterations: iteration,
                        last_change,
                    })
                }
            }
        }
        let mut next = Vec::with_capacity(grid + 1);
        let mut accumulated = Vector::zeros(field.dim());
        next.push(q0.clone());
        for i in 1..=grid {
            let panel = directions[i - 1].add(&directions[i])?.scale(h / 2.0);
            accumulated = accumulated.add(&panel)?;
            next.push(q0.add(&accumulated)?);
        }
        let mut change = 0.0_f64;
        for (a, b) in next.iter().zip(&current) {
            change = change.max(a.sub(b)?.euclidean());
        }
        if !change.is_finite() {
            return Err(Error::NonContraction {
                iterations: iteration + 1,
                last_change: change,
            });
        }
        current = next;
        last_change = change;
        if change <= tol {
            return Trajectory::new(times, current, h, Method::Picard);
        }
    }
    Err(Error::NonContraction {
        iterations: max_iter,
        last_change,
    })
}

/// Residual between the stored trajectory and the field along it.
#[derive(Debug, Clone)]
pub struct TrajectoryReport {
    /// `max_k ‖(γ_{k+1} − γ_{k−1})/2dt − X(γ_k)‖` over interior points.
    pub max_residual: f64,
    pub worst_step: usize,
    pub checked_points: usize,
}

/// Compare the centered-difference velocity of a trajectory against
/// the field at each interior grid point.
pub fn check_trajectory(field: &VectorField, trajectory: &Trajectory) -> Result<TrajectoryReport> {
    let states = trajectory.states();
    let dt = trajectory.dt();
    let mut max_residual = 0.0_f64;
    let mut worst_step = 0;
    let mut checked = 0;
    for k in 1..states.len().saturating_sub(1) {
        let velocity = states[k + 1].sub(&states[k - 1])?.scale(1.0 / (2.0 * dt));
        let residual = velocity.sub(&field.direction(&states[k])?)?.euclidean();
        if residual > max_residual {
            max_residual = residual;
            worst_step = k;
        }
        checked += 1;
    }
    Ok(TrajectoryReport {
        max_residual,
        worst_step,
        checked_points: checked,
    })
}

/// Max deviation of the relatedness square `Tf ∘ X = Y ∘ f` over the
/// sample points.
pub fn check_f_related(
    f: &SmoothMap,
    x_field: &VectorField,
    y_field: &VectorField,
    samples: &[Vector],
) -> Result<f64> {
    let mut worst = 0.0_f64;
    for s in samples {
        let lifted = tangent_map(f, &x_field.coalgebra(s)?)?;
        let target = y_field.direction(&lifted.base)?;
        worst = worst.max(lifted.dir.sub(&target)?.euclidean());
    }
    Ok(worst)
}

/// Endpoint of the integral curve after time `t` (negative `t`
/// integrates the reversed field).
pub fn flow(field: &VectorField, q0: &Vector, t: f64, dt: f64) -> Result<Vector> {
    if t == 0.0 {
        field.direction(q0)?;
        return Ok(q0.clone());
    }
    if t > 0.0 {
        Ok(integrate_rk4(field, q0, t, dt)?.final_state().clone())
    } else {
        Ok(integrate_rk4(&field.negated(), q0, -t, dt)?
            .final_state()
            .clone())
    }
}
