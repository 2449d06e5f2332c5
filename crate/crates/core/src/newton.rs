//! Newtonian gravity of a test mass around a pinned source, in both the
//! configuration-space and phase-space pictures, plus the mutual
//! two-body field and the standard conservation diagnostics.
//!
//! Sign conventions: `potential` returns the positive magnitude
//! `G·m1/‖r‖` (zero at infinity). The per-unit-mass potential *energy*
//! is its negative, and the force is minus the test mass times the
//! gradient of that energy:
//! `F(r) = −m2·∇(−G·m1/‖r‖) = −G·m1·m2·r/‖r‖³`, attractive toward the
//! origin. `total_energy` uses the conventional `−G·m1·m2/‖r‖` term,
//! consistent with the same convention.

use crate::dynamics::VectorField;
use crate::error::{Error, Result};
use crate::smoothmap::{Expr, Guard, SmoothMap};
use crate::tangent::BasicManifold;
use crate::vecspace::Vector;

/// Parameters of the gravitational setup. `g` may be zero (free
/// motion); the masses must be positive. `rho_min` is the softening
/// radius below which evaluations are rejected as singular.
#[derive(Debug, Clone, PartialEq)]
pub struct GravityParams {
    pub g: f64,
    pub m1: f64,
    pub m2: f64,
    pub rho_min: f64,
}

impl GravityParams {
    pub const DEFAULT_RHO_MIN: f64 = 1e-9;

    pub fn new(g: f64, m1: f64, m2: f64, rho_min: f64) -> Result<Self> {
        if !(g >= 0.0) {
            return Err(Error::contract("G must be nonnegative"));
        }
        if !(m1 > 0.0) || !(m2 > 0.0) {
            return Err(Error::contract("masses must be positive"));
        }
        if !(rho_min > 0.0) {
            return Err(Error::contract("rho_min must be positive"));
        }
        Ok(GravityParams { g, m1, m2, rho_min })
    }

    /// G = m1 = m2 = 1 with the default softening radius.
    pub fn unit() -> Self {
        GravityParams {
            g: 1.0,
            m1: 1.0,
            m2: 1.0,
            rho_min: GravityParams::DEFAULT_RHO_MIN,
        }
    }

    fn check_radius(&self, r: &Vector) -> Result<f64> {
        let radius = r.euclidean();
        if radius <= self.rho_min {
            return Err(Error::domain(format!(
                "singularity: radius {radius:e} at or below rho_min {:e}",
                self.rho_min
            )));
        }
        Ok(radius)
    }
}

/// Configuration-space state `(r, v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigState {
    pub r: Vector,
    pub v: Vector,
}

impl ConfigState {
    pub fn new(gp: &GravityParams, r: Vector, v: Vector) -> Result<Self> {
        if r.dim() != v.dim() {
            return Err(Error::contract(
                "position and velocity dimensions differ",
            ));
        }
        gp.check_radius(&r)?;
        Ok(ConfigState { r, v })
    }

    pub fn flatten(&self) -> Vector {
        self.r.concat(&self.v)
    }
}

/// Phase-space state `(r, p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState {
    pub r: Vector,
    pub p: Vector,
}

impl PhaseState {
    pub fn new(gp: &GravityParams, r: Vector, p: Vector) -> Result<Self> {
        if r.dim() != p.dim() {
            return Err(Error::contract(
                "position and momentum dimensions differ",
            ));
        }
        gp.check_radius(&r)?;
        Ok(PhaseState { r, p })
    }

    pub fn flatten(&self) -> Vector {
        self.r.concat(&self.p)
    }
}

/// Gravitational potential magnitude `G·m1/‖r‖` (zero at infinity).
pub fn potential(gp: &GravityParams, r: &Vector) -> Result<f64> {
    let radius = gp.check_radius(r)?;
    Ok(gp.g * gp.m1 / radius)
}

/// The per-unit-mass potential energy `−G·m1/‖r‖` as a map object, for
/// differentiating. Its gradient times `−m2` is the force.
pub fn potential_energy_map(gp: &GravityParams, dim: usize) -> Result<SmoothMap> {
    if dim == 0 {
        return Err(Error::contract("dimension must be at least 1"));
    }
    let body = Expr::window(0, dim).norm().recip().scale(-gp.g * gp.m1);
    SmoothMap::with_guard(dim, body, Guard::norm_above((0..dim).collect(), gp.rho_min))
}

/// Gravitational force on the test mass:
/// `F(r) = −G·m1·m2·r/‖r‖³`.
pub fn gravity_force(gp: &GravityParams, r: &Vector) -> Result<Vector> {
    let radius = gp.check_radius(r)?;
    Ok(r.scale(-gp.g * gp.m1 * gp.m2 / (radius * radius * radius)))
}

fn position_guard(dim: usize, rho_min: f64) -> Guard {
    Guard::norm_above((0..dim).collect(), rho_min)
}

/// The configuration-space field on `R^{2d}`:
/// `(r, v) ↦ (v, F(r)/m2)`.
pub fn lagrangian_field(gp: &GravityParams) -> Result<VectorField> {
    lagrangian_field_dim(gp, 3)
}

pub fn lagrangian_field_dim(gp: &GravityParams, dim: usize) -> Result<VectorField> {
    let r = Expr::window(0, dim);
    let accel = r
        .clone()
        .norm()
        .pow(-3)
        .mul(r)
        .scale(-gp.g * gp.m1);
    let body = Expr::pair(vec![Expr::window(dim, dim), accel]);
    let field = SmoothMap::with_guard(2 * dim, body, position_guard(dim, gp.rho_min))?;
    VectorField::new(BasicManifold::euclidean(2 * dim), field)
}

/// The phase-space field on `R^{2d}`:
/// `(r, p) ↦ (p/m2, F(r))`.
pub fn hamiltonian_field(gp: &GravityParams) -> Result<VectorField> {
    hamiltonian_field_dim(gp, 3)
}

pub fn hamiltonian_field_dim(gp: &GravityParams, dim: usize) -> Result<VectorField> {
    let r = Expr::window(0, dim);
    let force = r
        .clone()
        .norm()
        .pow(-3)
        .mul(r)
        .scale(-gp.g * gp.m1 * gp.m2);
    let body = Expr::pair(vec![Expr::window(dim, dim).scale(1.0 / gp.m2), force]);
    let field = SmoothMap::with_guard(2 * dim, body, position_guard(dim, gp.rho_min))?;
    VectorField::new(BasicManifold::euclidean(2 * dim), field)
}

/// The evaluation pairing of a phase point against a configuration
/// point over the same base: `½·p(v)`. With `p = m·v` this is the
/// kinetic energy `½·m·‖v‖²`.
pub fn kinetic_pairing(ps: &PhaseState, cs: &ConfigState, mass: f64) -> Result<f64> {
    if !(mass > 0.0) {
        return Err(Error::contract("mass must be positive"));
    }
    if ps.r.dim() != cs.r.dim() {
        return Err(Error::contract("phase and configuration dimensions differ"));
    }
    let gap = ps.r.sub(&cs.r)?.euclidean();
    if gap > 1e-9 * cs.r.euclidean().max(1.0) {
        return Err(Error::contract(format!(
            "phase and configuration base points differ by {gap:e}"
        )));
    }
    Ok(0.5 * ps.p.dot(&cs.v)?)
}

/// `½·m2·‖v‖² − G·m1·m2/‖r‖`.
pub fn total_energy(gp: &GravityParams, cs: &ConfigState) -> Result<f64> {
    let radius = gp.check_radius(&cs.r)?;
    let speed2 = cs.v.dot(&cs.v)?;
    Ok(0.5 * gp.m2 * speed2 - gp.g * gp.m1 * gp.m2 / radius)
}

/// `m·(r × v)`; three-dimensional states only.
pub fn angular_momentum(cs: &ConfigState, mass: f64) -> Result<Vector> {
    if cs.r.dim() != 3 {
        return Err(Error::contract("angular momentum needs dimension 3"));
    }
    let (r, v) = (cs.r.coords(), cs.v.coords());
    Ok(Vector::from(vec![
        mass * (r[1] * v[2] - r[2] * v[1]),
        mass * (r[2] * v[0] - r[0] * v[2]),
        mass * (r[0] * v[1] - r[1] * v[0]),
    ]))
}

/// Mutual gravity of two bodies on `R^12`, state `(r1, v1, r2, v2)`.
/// The two accelerations come from the same force expression with
/// opposite signs, so action equals reaction identically.
pub fn two_body_field(g: f64, m1: f64, m2: f64, rho_min: f64) -> Result<VectorField> {
    if !(g >= 0.0) {
        return Err(Error::contract("G must be nonnegative"));
    }
    if !(m1 > 0.0) || !(m2 > 0.0) {
        return Err(Error::contract("masses must be positive"));
    }
    if !(rho_min > 0.0) {
        return Err(Error::contract("rho_min must be positive"));
    }
    let separation = Expr::window(6, 3).sub(Expr::window(0, 3));
    let inv_cube = separation.clone().norm().pow(-3);
    // F12 on body 1 points toward body 2; body 2 feels the opposite.
    let accel1 = inv_cube.clone().mul(separation.clone()).scale(g * m2);
    let accel2 = inv_cube.mul(separation.clone()).scale(-g * m1);
    let body = Expr::pair(vec![
        Expr::window(3, 3),
        accel1,
        Expr::window(9, 3),
        accel2,
    ]);
    let guard = Guard {
        clauses: vec![crate::smoothmap::GuardClause {
            expr: separation.norm(),
            min: rho_min,
        }],
    };
    let field = SmoothMap::with_guard(12, body, guard)?;
    VectorField::new(BasicManifold::euclidean(12), field)
}

/// Total linear momentum `m1·v1 + m2·v2` of a two-body state.
pub fn two_body_momentum(m1: f64, m2: f64, state: &Vector) -> Result<Vector> {
    if state.dim() != 12 {
        return Err(Error::contract("two-body state must have dimension 12"));
    }
    let c = state.coords();
    let v1 = Vector::from(&c[3..6]);
    let v2 = Vector::from(&c[9..12]);
    v1.scale(m1).add(&v2.scale(m2))
}

/// Total energy of a two-body state:
/// `½m1‖v1‖² + ½m2‖v2‖² − G·m1·m2/‖r2−r1‖`.
pub fn two_body_energy(g: f64, m1: f64, m2: f64, state: &Vector) -> Result<f64> {
    if state.dim() != 12 {
        return Err(Error::contract("two-body state must have dimension 12"));
    }
    let c = state.coords();
    let v1 = Vector::from(&c[3..6]);
    let v2 = Vector::from(&c[9..12]);
    let sep = Vector::from(&c[6..9]).sub(&Vector::from(&c[0..3]))?.euclidean();
    Ok(0.5 * m1 * v1.dot(&v1)? + 0.5 * m2 * v2.dot(&v2)? - g * m1 * m2 / sep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{check_f_related, integrate_rk4};
    use crate::testing::{covector_of_test, Test};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(c: &[f64]) -> Vector {
        Vector::from(c)
    }

    fn circular_start(gp: &GravityParams) -> ConfigState {
        ConfigState::new(gp, v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0])).unwrap()
    }

    #[test]
    fn potential_hand_values() {
        let gp = GravityParams::unit();
        assert_eq!(potential(&gp, &v(&[1.0, 0.0, 0.0])).unwrap(), 1.0);

        // Monotone decay to zero.
        let mut last = f64::INFINITY;
        for radius in [10.0, 100.0, 1000.0] {
            let p = potential(&gp, &v(&[radius, 0.0, 0.0])).unwrap();
            assert!(p < last && p > 0.0);
            last = p;
        }

        let below = v(&[gp.rho_min / 2.0, 0.0, 0.0]);
        assert!(matches!(potential(&gp, &below), Err(Error::Domain(_))));
    }

    #[test]
    fn force_hand_values_and_inverse_square() {
        let gp = GravityParams::unit();
        let f = gravity_force(&gp, &v(&[1.0, 0.0, 0.0])).unwrap();
        assert_eq!(f, v(&[-1.0, 0.0, 0.0]));

        let r = v(&[0.3, -0.4, 1.2]);
        let near = gravity_force(&gp, &r).unwrap().euclidean();
        let far = gravity_force(&gp, &r.scale(2.0)).unwrap().euclidean();
        assert!((near / far - 4.0).abs() <= 1e-12);
    }

    #[test]
    fn force_is_minus_m2_gradient_of_potential_energy() {
        let gp = GravityParams::new(2.5, 1.7, 0.6, 1e-9).unwrap();
        let energy = Test::new(potential_energy_map(&gp, 3).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(97);
        for _ in 0..100 {
            let r = loop {
                let cand = Vector::from(
                    (0..3)
                        .map(|_| rng.random_range(-3.0..3.0))
                        .collect::<Vec<f64>>(),
                );
                if cand.euclidean() > 0.2 {
                    break cand;
                }
            };
            let grad = covector_of_test(&energy, &r).unwrap().coeffs;
            let from_gradient = grad.scale(-gp.m2);
            let direct = gravity_force(&gp, &r).unwrap();
            let gap = direct.sub(&from_gradient).unwrap().euclidean();
            assert!(
                gap <= 1e-10 * direct.euclidean().max(1.0),
                "gap {gap} at {:?}",
                r.coords()
            );
        }
    }

    #[test]
    fn lagrangian_field_hand_value_and_free_limit() {
        let gp = GravityParams::unit();
        let field = lagrangian_field(&gp).unwrap();
        let state = circular_start(&gp).flatten();
        let dir = field.direction(&state).unwrap();
        assert!(dir.sub(&v(&[0.0, 1.0, 0.0, -1.0, 0.0, 0.0])).unwrap().euclidean() < 1e-14);
        // Cross-section law.
        assert_eq!(field.coalgebra(&state).unwrap().base, state);

        // G = 0: straight-line motion.
        let free = GravityParams::new(0.0, 1.0, 1.0, 1e-9).unwrap();
        let field = lagrangian_field(&free).unwrap();
        let dir = field.direction(&state).unwrap();
        assert_eq!(dir, v(&[0.0, 1.0, 0.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn hamiltonian_field_hand_value() {
        let gp = GravityParams::unit();
        let field = hamiltonian_field(&gp).unwrap();
        let state = PhaseState::new(&gp, v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0]))
            .unwrap()
            .flatten();
        let dir = field.direction(&state).unwrap();
        assert!(dir.sub(&v(&[0.0, 1.0, 0.0, -1.0, 0.0, 0.0])).unwrap().euclidean() < 1e-14);
        assert_eq!(field.coalgebra(&state).unwrap().base, state);
    }

    #[test]
    fn hamiltonian_momentum_component_is_the_force() {
        // NP2: the momentum half of the phase-space field equals the
        // force pointwise.
        let gp = GravityParams::new(1.3, 2.0, 0.7, 1e-9).unwrap();
        let field = hamiltonian_field(&gp).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for _ in 0..100 {
            let r = Vector::from(
                (0..3)
                    .map(|_| rng.random_range(0.5..2.0))
                    .collect::<Vec<f64>>(),
            );
            let p = Vector::from(
                (0..3)
                    .map(|_| rng.random_range(-1.0..1.0))
                    .collect::<Vec<f64>>(),
            );
            let dir = field.direction(&r.concat(&p)).unwrap();
            let (_, dp) = dir.split(3);
            let force = gravity_force(&gp, &r).unwrap();
            assert!(dp.sub(&force).unwrap().euclidean() <= 1e-14 * force.euclidean().max(1.0));
        }
    }

    #[test]
    fn kinetic_pairing_hand_values() {
        let gp = GravityParams::unit();
        let cs = circular_start(&gp);
        let ps = PhaseState::new(&gp, cs.r.clone(), v(&[0.0, 1.0, 0.0])).unwrap();
        assert_eq!(kinetic_pairing(&ps, &cs, 1.0).unwrap(), 0.5);

        let rest = ConfigState::new(&gp, cs.r.clone(), Vector::zeros(3)).unwrap();
        let ps0 = PhaseState::new(&gp, cs.r.clone(), Vector::zeros(3)).unwrap();
        assert_eq!(kinetic_pairing(&ps0, &rest, 1.0).unwrap(), 0.0);

        // With p = m·v the pairing is the kinetic energy ½·m‖v‖².
        let m = 2.7;
        let vel = v(&[0.4, -0.2, 1.1]);
        let cs = ConfigState::new(&gp, v(&[1.0, 0.0, 0.0]), vel.clone()).unwrap();
        let ps = PhaseState::new(&gp, v(&[1.0, 0.0, 0.0]), vel.scale(m)).unwrap();
        let lhs = kinetic_pairing(&ps, &cs, m).unwrap();
        let rhs = 0.5 * m * vel.dot(&vel).unwrap();
        assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));

        // Mismatched base points are rejected.
        let elsewhere = PhaseState::new(&gp, v(&[2.0, 0.0, 0.0]), vel).unwrap();
        assert!(kinetic_pairing(&elsewhere, &cs, m).is_err());
    }

    #[test]
    fn total_energy_hand_values() {
        let gp = GravityParams::unit();
        let cs = circular_start(&gp);
        assert!((total_energy(&gp, &cs).unwrap() + 0.5).abs() < 1e-15);

        // Far away and at rest, both terms vanish.
        let far = ConfigState::new(&gp, v(&[1e9, 0.0, 0.0]), Vector::zeros(3)).unwrap();
        assert!(total_energy(&gp, &far).unwrap().abs() < 1e-8);
    }

    #[test]
    fn angular_momentum_hand_values() {
        let gp = GravityParams::unit();
        let cs = circular_start(&gp);
        assert_eq!(angular_momentum(&cs, 1.0).unwrap(), v(&[0.0, 0.0, 1.0]));

        let parallel = ConfigState::new(&gp, v(&[2.0, 0.0, 0.0]), v(&[3.0, 0.0, 0.0])).unwrap();
        assert_eq!(angular_momentum(&parallel, 1.5).unwrap(), Vector::zeros(3));

        let planar = ConfigState {
            r: v(&[1.0, 2.0]),
            v: v(&[0.0, 1.0]),
        };
        assert!(angular_momentum(&planar, 1.0).is_err());
    }

    #[test]
    fn circular_orbit_conserves_energy_and_momentum() {
        let gp = GravityParams::unit();
        let field = lagrangian_field(&gp).unwrap();
        let start = circular_start(&gp);
        let tr = integrate_rk4(&field, &start.flatten(), std::f64::consts::TAU, 1e-3).unwrap();
        let e0 = total_energy(&gp, &start).unwrap();
        let l0 = angular_momentum(&start, gp.m2).unwrap();
        let mut max_energy_drift = 0.0_f64;
        let mut max_l_drift = 0.0_f64;
        for s in tr.states() {
            let (r, vel) = s.split(3);
            let cs = ConfigState { r, v: vel };
            max_energy_drift = max_energy_drift
                .max(((total_energy(&gp, &cs).unwrap() - e0) / e0).abs());
            max_l_drift = max_l_drift.max(
                angular_momentum(&cs, gp.m2)
                    .unwrap()
                    .sub(&l0)
                    .unwrap()
                    .euclidean(),
            );
        }
        assert!(max_energy_drift <= 1e-7, "energy drift {max_energy_drift}");
        assert!(max_l_drift <= 1e-8, "angular momentum drift {max_l_drift}");
        // One full period returns to the start.
        let gap = tr.final_state().sub(&start.flatten()).unwrap().euclidean();
        assert!(gap <= 1e-4, "period return gap {gap}");
    }

    #[test]
    fn np1_free_motion_is_affine() {
        let free = GravityParams::new(0.0, 1.0, 1.0, 1e-9).unwrap();
        let field = lagrangian_field(&free).unwrap();
        let r0 = v(&[1.0, 2.0, 3.0]);
        let v0 = v(&[0.3, -0.2, 0.1]);
        let tr = integrate_rk4(&field, &r0.concat(&v0), 10.0, 1e-2).unwrap();
        let mut worst = 0.0_f64;
        for (t, s) in tr.times().iter().zip(tr.states()) {
            let expected = r0.add(&v0.scale(*t)).unwrap();
            let (r, _) = s.split(3);
            worst = worst.max(r.sub(&expected).unwrap().euclidean());
        }
        assert!(worst <= 1e-9, "affine deviation {worst}");
    }

    #[test]
    fn np3_two_body_action_reaction_and_momentum() {
        let (g, m1, m2) = (1.0, 1.0, 1.0);
        let field = two_body_field(g, m1, m2, 1e-9).unwrap();
        let state = v(&[0.5, 0.0, 0.0, 0.0, 0.5, 0.0, -0.5, 0.0, 0.0, 0.0, -0.5, 0.0]);

        // Forces cancel pointwise.
        let dir = field.direction(&state).unwrap();
        let c = dir.coords();
        let f12 = Vector::from(&c[3..6]).scale(m1);
        let f21 = Vector::from(&c[9..12]).scale(m2);
        assert!(f12.add(&f21).unwrap().euclidean() <= 1e-14);

        // Momentum is conserved along the integrated motion.
        let tr = integrate_rk4(&field, &state, 1.0, 1e-3).unwrap();
        let p0 = two_body_momentum(m1, m2, &state).unwrap();
        let mut drift = 0.0_f64;
        for s in tr.states() {
            drift = drift.max(
                two_body_momentum(m1, m2, s)
                    .unwrap()
                    .sub(&p0)
                    .unwrap()
                    .euclidean(),
            );
        }
        assert!(drift <= 1e-9, "momentum drift {drift}");
    }

    #[test]
    fn heavy_source_limit_matches_one_body() {
        // With m1 = 1 and a feather-light m2, the light particle follows
        // the pinned-source orbit closely over one revolution.
        let (g, m1, m2) = (1.0, 1.0, 1e-4);
        let field = two_body_field(g, m1, m2, 1e-9).unwrap();
        // Zero total momentum so the source only wobbles.
        let v1 = -m2 / m1;
        let state = v(&[
            0.0, 0.0, 0.0, 0.0, v1, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0,
        ]);
        let t_end = std::f64::consts::TAU;
        let two_body = integrate_rk4(&field, &state, t_end, 1e-3).unwrap();

        let gp = GravityParams::new(g, m1, m2, 1e-9).unwrap();
        let one_body = integrate_rk4(
            &lagrangian_field(&gp).unwrap(),
            &v(&[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]),
            t_end,
            1e-3,
        )
        .unwrap();

        let mut worst = 0.0_f64;
        for (a, b) in two_body.states().iter().zip(one_body.states()) {
            let light = Vector::from(&a.coords()[6..9]);
            let (r, _) = b.split(3);
            worst = worst.max(light.sub(&r).unwrap().euclidean() / r.euclidean().max(1.0));
        }
        assert!(worst <= 1e-3, "relative deviation {worst}");
    }

    #[test]
    fn lagrangian_and_hamiltonian_views_are_related() {
        let gp = GravityParams::new(1.0, 1.0, 2.0, 1e-9).unwrap();
        let lagrangian = lagrangian_field(&gp).unwrap();
        let hamiltonian = hamiltonian_field(&gp).unwrap();
        // (r, v) ↦ (r, m·v) as a linear map on R^6.
        let to_phase = SmoothMap::new(
            6,
            Expr::pair(vec![
                Expr::window(0, 3),
                Expr::window(3, 3).scale(gp.m2),
            ]),
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(103);
        let samples: Vec<Vector> = (0..50)
            .map(|_| {
                let r: Vec<f64> = (0..3).map(|_| rng.random_range(0.6..2.0)).collect();
                let vel: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
                Vector::from(r).concat(&Vector::from(vel))
            })
            .collect();
        let residual = check_f_related(&to_phase, &lagrangian, &hamiltonian, &samples).unwrap();
        assert!(residual <= 1e-12, "relatedness residual {residual}");
    }

    #[test]
    fn parameter_validation() {
        assert!(GravityParams::new(-1.0, 1.0, 1.0, 1e-9).is_err());
        assert!(GravityParams::new(1.0, 0.0, 1.0, 1e-9).is_err());
        assert!(GravityParams::new(1.0, 1.0, 1.0, 0.0).is_err());
        assert!(GravityParams::new(0.0, 1.0, 1.0, 1e-9).is_ok());
        assert!(two_body_field(1.0, 1.0, -1.0, 1e-9).is_err());
    }
}
