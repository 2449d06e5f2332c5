//! Building fields from configs, running them, and collecting per-step
//! diagnostics.

use jetbundle::dynamics::{
    clock_field, integrate_picard, integrate_rk4, Clock, Method, Trajectory, VectorField,
};
use jetbundle::newton::{
    angular_momentum, lagrangian_field_dim, total_energy, two_body_energy, two_body_field,
    ConfigState, GravityParams,
};
use jetbundle::{Result, SmoothMap, Vector};

use crate::config::{Preset, ScenarioConfig};

/// Worst-case drifts and residuals over a run.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub steps: usize,
    pub final_time: f64,
    pub final_state: Vec<f64>,
    /// Max relative energy drift against the initial energy (0 when the
    /// preset has no conserved energy).
    pub energy_drift: f64,
    /// Max absolute drift of the z angular momentum (0 when not
    /// applicable).
    pub ang_momentum_drift: f64,
    /// Max centered-difference residual against the field.
    pub max_residual: f64,
}

/// A finished run: the trajectory plus per-step diagnostics, aligned
/// index by index with the trajectory grid.
#[derive(Debug, Clone)]
pub struct RunArtifact {
    pub config: ScenarioConfig,
    pub trajectory: Trajectory,
    pub energy: Vec<f64>,
    pub ang_momentum_z: Vec<f64>,
    pub residual: Vec<f64>,
    pub summary: RunSummary,
}

/// The vector field a config describes.
pub fn build_field(cfg: &ScenarioConfig) -> Result<VectorField> {
    let n = cfg.initial_state.len();
    match cfg.preset {
        Preset::GravityCircular | Preset::GravityElliptic => {
            let gp = gravity_params(cfg)?;
            lagrangian_field_dim(&gp, 3)
        }
        Preset::TwoBody => two_body_field(
            cfg.params.g,
            cfg.params.m1,
            cfg.params.m2,
            cfg.params.rho_min,
        ),
        Preset::LinearField => VectorField::on_euclidean(SmoothMap::identity(n)),
        Preset::Clock => Ok(clock_field(&Clock::new(cfg.params.clock_half_width)?)),
        Preset::Custom => {
            let src = cfg
                .custom_field
                .as_deref()
                .expect("validated at parse time");
            VectorField::on_euclidean(SmoothMap::parse(src, n)?)
        }
    }
}

fn gravity_params(cfg: &ScenarioConfig) -> Result<GravityParams> {
    GravityParams::new(
        cfg.params.g,
        cfg.params.m1,
        cfg.params.m2,
        cfg.params.rho_min,
    )
}

fn config_state(gp: &GravityParams, state: &Vector) -> Result<ConfigState> {
    let (r, v) = state.split(3);
    ConfigState::new(gp, r, v)
}

fn two_body_lz(m1: f64, m2: f64, state: &Vector) -> f64 {
    let c = state.coords();
    let lz = |r: &[f64], v: &[f64], m: f64| m * (r[0] * v[1] - r[1] * v[0]);
    lz(&c[0..3], &c[3..6], m1) + lz(&c[6..9], &c[9..12], m2)
}

/// Run the scenario and compute diagnostics at every grid point.
/// Deterministic for a fixed config.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunArtifact> {
    let field = build_field(cfg)?;
    let q0 = Vector::new(cfg.initial_state.clone())?;
    let trajectory = match cfg.method {
        Method::Rk4 => integrate_rk4(&field, &q0, cfg.params.t_end, cfg.params.dt)?,
        Method::Picard => integrate_picard(
            &field,
            &q0,
            cfg.params.t_end,
            cfg.params.grid,
            cfg.params.max_iter,
            cfg.params.tol,
        )?,
    };

    let states = trajectory.states();
    let mut energy = Vec::with_capacity(states.len());
    let mut ang = Vec::with_capacity(states.len());
    match cfg.preset {
        Preset::GravityCircular | Preset::GravityElliptic => {
            let gp = gravity_params(cfg)?;
            for s in states {
                let cs = config_state(&gp, s)?;
                energy.push(total_energy(&gp, &cs)?);
                ang.push(angular_momentum(&cs, gp.m2)?[2]);
            }
        }
        Preset::TwoBody => {
            for s in states {
                energy.push(two_body_energy(
                    cfg.params.g,
                    cfg.params.m1,
                    cfg.params.m2,
                    s,
                )?);
                ang.push(two_body_lz(cfg.params.m1, cfg.params.m2, s));
            }
        }
        _ => {
            energy.resize(states.len(), 0.0);
            ang.resize(states.len(), 0.0);
        }
    }

    // Centered-difference residual at interior points; endpoints have no
    // centered stencil and report 0.
    let mut residual = vec![0.0; states.len()];
    let dt = trajectory.dt();
    for k in 1..states.len().saturating_sub(1) {
        let velocity = states[k + 1].sub(&states[k - 1])?.scale(1.0 / (2.0 * dt));
        residual[k] = velocity.sub(&field.direction(&states[k])?)?.euclidean();
    }

    let has_energy = matches!(
        cfg.preset,
        Preset::GravityCircular | Preset::GravityElliptic | Preset::TwoBody
    );
    let mut energy_drift = 0.0_f64;
    let mut ang_drift = 0.0_f64;
    if has_energy {
        let e0 = energy[0];
        let l0 = ang[0];
        for (e, l) in energy.iter().zip(&ang) {
            energy_drift = energy_drift.max((e - e0).abs() / e0.abs().max(1e-30));
            ang_drift = ang_drift.max((l - l0).abs());
        }
    }
    let max_residual = residual.iter().fold(0.0_f64, |m, r| m.max(*r));

    let summary = RunSummary {
        steps: trajectory.len() - 1,
        final_time: trajectory.final_time(),
        final_state: trajectory.final_state().coords().to_vec(),
        energy_drift,
        ang_momentum_drift: ang_drift,
        max_residual,
    };
    Ok(RunArtifact {
        config: cfg.clone(),
        trajectory,
        energy,
        ang_momentum_z: ang,
        residual,
        summary,
    })
}

/// Write the run as CSV: header
/// `t,state_0,...,state_{n-1},energy,Lz,residual`, one row per grid
/// point, floats with 17 significant digits.
pub fn emit_csv(artifact: &RunArtifact, path: &std::path::Path) -> std::io::Result<()> {
    let mut out = String::new();
    render_csv(artifact, &mut out);
    std::fs::write(path, out)
}

/// The exact bytes `emit_csv` writes.
pub fn render_csv(artifact: &RunArtifact, out: &mut String) {
    let n = artifact
        .trajectory
        .states()
        .first()
        .map(|s| s.dim())
        .unwrap_or(0);
    out.push('t');
    for i in 0..n {
        out.push_str(&format!(",state_{i}"));
    }
    out.push_str(",energy,Lz,residual\n");
    for (k, (t, s)) in artifact
        .trajectory
        .times()
        .iter()
        .zip(artifact.trajectory.states())
        .enumerate()
    {
        out.push_str(&fmt17(*t));
        for x in s.coords() {
            out.push(',');
            out.push_str(&fmt17(*x));
        }
        out.push(',');
        out.push_str(&fmt17(artifact.energy[k]));
        out.push(',');
        out.push_str(&fmt17(artifact.ang_momentum_z[k]));
        out.push(',');
        out.push_str(&fmt17(artifact.residual[k]));
        out.push('\n');
    }
}

/// 17 significant digits: 1 leading + 16 fractional, exponent form.
fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn clock_run_keeps_time() {
        let cfg = parse_config("preset = \"clock\"").unwrap();
        let artifact = run_scenario(&cfg).unwrap();
        assert!((artifact.summary.final_time - 2.0).abs() < 1e-12);
        assert!((artifact.summary.final_state[0] - 2.0).abs() <= 1e-12);
        assert_eq!(artifact.energy.len(), artifact.trajectory.len());
    }

    #[test]
    fn gravity_circular_defaults_conserve_energy() {
        let cfg = parse_config("preset = \"gravity-circular\"").unwrap();
        let artifact = run_scenario(&cfg).unwrap();
        assert!(
            artifact.summary.energy_drift <= 1e-7,
            "energy drift {}",
            artifact.summary.energy_drift
        );
    }

    #[test]
    fn two_body_momentum_is_steady() {
        let cfg = parse_config("preset = \"two-body\"").unwrap();
        let artifact = run_scenario(&cfg).unwrap();
        let p0 = jetbundle::newton::two_body_momentum(
            cfg.params.m1,
            cfg.params.m2,
            &Vector::new(cfg.initial_state.clone()).unwrap(),
        )
        .unwrap();
        let mut drift = 0.0_f64;
        for s in artifact.trajectory.states() {
            let p = jetbundle::newton::two_body_momentum(cfg.params.m1, cfg.params.m2, s)
                .unwrap();
            drift = drift.max(p.sub(&p0).unwrap().euclidean());
        }
        assert!(drift <= 1e-9, "momentum drift {drift}");
    }

    #[test]
    fn custom_rotation_field_runs() {
        let cfg = parse_config(
            "preset = \"custom\"\ncustom_field = \"(x1, -x0)\"\ninitial_state = [1.0, 0.0]\n[params]\nt_end = 6.283185307179586\n",
        )
        .unwrap();
        let artifact = run_scenario(&cfg).unwrap();
        // One full turn of the rotation field returns to the start.
        let gap = ((artifact.summary.final_state[0] - 1.0).powi(2)
            + artifact.summary.final_state[1].powi(2))
        .sqrt();
        assert!(gap <= 1e-6, "rotation return gap {gap}");
    }

    #[test]
    fn csv_shape_and_determinism() {
        let cfg = parse_config("preset = \"clock\"\n[params]\ndt = 0.5").unwrap();
        let artifact = run_scenario(&cfg).unwrap();
        let mut first = String::new();
        render_csv(&artifact, &mut first);
        let lines: Vec<&str> = first.lines().collect();
        assert_eq!(lines[0], "t,state_0,energy,Lz,residual");
        // Row count = step count + 1.
        assert_eq!(lines.len() - 1, artifact.summary.steps + 1);
        assert!(lines[1].starts_with("0.0000000000000000e0,"));

        let again = run_scenario(&cfg).unwrap();
        let mut second = String::new();
        render_csv(&again, &mut second);
        assert_eq!(first, second);
    }

    #[test]
    fn singular_launch_is_reported_as_runtime_error() {
        let cfg = parse_config(
            "preset = \"gravity-circular\"\ninitial_state = [1e-12, 0.0, 0.0, 0.0, 0.0, 0.0]",
        )
        .unwrap();
        assert!(run_scenario(&cfg).is_err());
    }

    #[test]
    fn picard_method_runs_the_linear_preset() {
        let cfg = parse_config(
            "preset = \"linear-field\"\nmethod = \"picard\"\n[params]\nt_end = 0.5\n",
        )
        .unwrap();
        let artifact = run_scenario(&cfg).unwrap();
        let expected = 0.5_f64.exp();
        assert!((artifact.summary.final_state[0] - expected).abs() <= 1e-6);
    }
}
