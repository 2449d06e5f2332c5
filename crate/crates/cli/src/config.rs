//! Scenario configuration: a small TOML dialect with a flat header and
//! one `[params]` table. Parsing fills preset defaults and validates
//! every field; printing emits the fully resolved form, so
//! `parse(print(cfg)) == cfg`.

use std::collections::BTreeMap;

use jetbundle::dynamics::Method;
use jetbundle::{Error, Result};
use serde::Deserialize;

/// Built-in scenario families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    GravityCircular,
    GravityElliptic,
    TwoBody,
    LinearField,
    Clock,
    Custom,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::GravityCircular,
        Preset::GravityElliptic,
        Preset::TwoBody,
        Preset::LinearField,
        Preset::Clock,
        Preset::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::GravityCircular => "gravity-circular",
            Preset::GravityElliptic => "gravity-elliptic",
            Preset::TwoBody => "two-body",
            Preset::LinearField => "linear-field",
            Preset::Clock => "clock",
            Preset::Custom => "custom",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Preset::GravityCircular => {
                "test mass on the unit circular orbit (G = m1 = m2 = 1), one period"
            }
            Preset::GravityElliptic => "test mass on a bound elliptic orbit",
            Preset::TwoBody => "two bodies under mutual gravity, symmetric start",
            Preset::LinearField => "the linear field dx/dt = x",
            Preset::Clock => "unit-rate clock on its interval",
            Preset::Custom => "field given by a custom expression",
        }
    }

    fn from_name(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown preset '{s}' (expected one of: {})",
                    Preset::ALL.map(|p| p.name()).join(", ")
                ))
            })
    }

    fn default_t_end(self) -> f64 {
        match self {
            Preset::GravityCircular => std::f64::consts::TAU,
            Preset::GravityElliptic => 15.0,
            Preset::TwoBody => 1.0,
            Preset::LinearField => 1.0,
            Preset::Clock => 2.0,
            Preset::Custom => 1.0,
        }
    }

    fn default_initial_state(self) -> Option<Vec<f64>> {
        match self {
            Preset::GravityCircular => Some(vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0]),
            Preset::GravityElliptic => Some(vec![1.0, 0.0, 0.0, 0.0, 1.2, 0.0]),
            Preset::TwoBody => Some(vec![
                0.5, 0.0, 0.0, 0.0, 0.5, 0.0, -0.5, 0.0, 0.0, 0.0, -0.5, 0.0,
            ]),
            Preset::LinearField => Some(vec![1.0]),
            Preset::Clock => Some(vec![0.0]),
            Preset::Custom => None,
        }
    }
}

/// Numeric parameters after defaulting and validation.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub g: f64,
    pub m1: f64,
    pub m2: f64,
    pub dt: f64,
    pub t_end: f64,
    pub seed: u64,
    pub rho_min: f64,
    /// Picard grid intervals.
    pub grid: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub clock_half_width: f64,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            g: 1.0,
            m1: 1.0,
            m2: 1.0,
            dt: 1e-3,
            t_end: 1.0,
            seed: 0,
            rho_min: 1e-9,
            grid: 256,
            max_iter: 200,
            tol: 1e-10,
            clock_half_width: 10.0,
        }
    }
}

/// A fully validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub preset: Preset,
    pub method: Method,
    pub params: Params,
    pub custom_field: Option<String>,
    pub initial_state: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: Option<String>,
    preset: String,
    method: Option<String>,
    custom_field: Option<String>,
    initial_state: Option<Vec<f64>>,
    params: Option<BTreeMap<String, f64>>,
}

fn take_integer(
    map: &mut BTreeMap<String, f64>,
    key: &str,
    default: u64,
) -> Result<u64> {
    match map.remove(key) {
        None => Ok(default),
        Some(v) => {
            if v.fract() != 0.0 || v < 0.0 || v > 2f64.powi(53) {
                return Err(Error::Parse(format!(
                    "param '{key}' must be a nonnegative integer, got {v}"
                )));
            }
            Ok(v as u64)
        }
    }
}

/// Parse and validate a scenario config from TOML text.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let raw: RawConfig =
        toml::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
    let preset = Preset::from_name(&raw.preset)?;

    let method = match raw.method.as_deref() {
        None | Some("rk4") => Method::Rk4,
        Some("picard") => Method::Picard,
        Some(other) => {
            return Err(Error::Parse(format!(
                "method must be 'rk4' or 'picard', got '{other}'"
            )))
        }
    };

    let mut map = raw.params.unwrap_or_default();
    let mut params = Params {
        t_end: preset.default_t_end(),
        ..Params::default()
    };
    if let Some(v) = map.remove("G") {
        params.g = v;
    }
    if let Some(v) = map.remove("m1") {
        params.m1 = v;
    }
    if let Some(v) = map.remove("m2") {
        params.m2 = v;
    }
    if let Some(v) = map.remove("dt") {
        params.dt = v;
    }
    if let Some(v) = map.remove("t_end") {
        params.t_end = v;
    }
    if let Some(v) = map.remove("rho_min") {
        params.rho_min = v;
    }
    if let Some(v) = map.remove("tol") {
        params.tol = v;
    }
    if let Some(v) = map.remove("clock_half_width") {
        params.clock_half_width = v;
    }
    params.seed = take_integer(&mut map, "seed", params.seed)?;
    params.grid = take_integer(&mut map, "grid", params.grid as u64)? as usize;
    params.max_iter = take_integer(&mut map, "max_iter", params.max_iter as u64)? as usize;
    if let Some(unknown) = map.keys().next() {
        return Err(Error::Parse(format!("unknown param '{unknown}'")));
    }

    if !(params.dt > 0.0) {
        return Err(Error::Parse("param 'dt' must be positive".into()));
    }
    if !(params.t_end >= params.dt) {
        return Err(Error::Parse(
            "param 't_end' must be at least 'dt'".into(),
        ));
    }
    if !(params.g >= 0.0) {
        return Err(Error::Parse("param 'G' must be nonnegative".into()));
    }
    if !(params.m1 > 0.0) || !(params.m2 > 0.0) {
        return Err(Error::Parse("params 'm1' and 'm2' must be positive".into()));
    }
    if !(params.rho_min > 0.0) {
        return Err(Error::Parse("param 'rho_min' must be positive".into()));
    }
    if !(params.tol > 0.0) {
        return Err(Error::Parse("param 'tol' must be positive".into()));
    }
    if params.grid == 0 || params.max_iter == 0 {
        return Err(Error::Parse(
            "params 'grid' and 'max_iter' must be at least 1".into(),
        ));
    }
    if !(params.clock_half_width > 0.0) {
        return Err(Error::Parse(
            "param 'clock_half_width' must be positive".into(),
        ));
    }

    if preset == Preset::Custom {
        if raw.custom_field.is_none() {
            return Err(Error::Parse(
                "field 'custom_field' is required for the custom preset".into(),
            ));
        }
    } else if raw.custom_field.is_some() {
        return Err(Error::Parse(
            "field 'custom_field' is only allowed with the custom preset".into(),
        ));
    }

    let initial_state = match raw.initial_state.or_else(|| preset.default_initial_state()) {
        Some(s) => s,
        None => {
            return Err(Error::Parse(
                "field 'initial_state' is required for the custom preset".into(),
            ))
        }
    };
    if initial_state.is_empty() {
        return Err(Error::Parse("field 'initial_state' must be nonempty".into()));
    }
    if initial_state.iter().any(|x| !x.is_finite()) {
        return Err(Error::Parse("field 'initial_state' must be finite".into()));
    }
    let expected_dim = match preset {
        Preset::GravityCircular | Preset::GravityElliptic => Some(6),
        Preset::TwoBody => Some(12),
        Preset::Clock => Some(1),
        Preset::LinearField | Preset::Custom => None,
    };
    if let Some(d) = expected_dim {
        if initial_state.len() != d {
            return Err(Error::Parse(format!(
                "field 'initial_state' must have {d} entries for preset '{}', got {}",
                preset.name(),
                initial_state.len()
            )));
        }
    }
    // A custom field must parse and be a square field on the state.
    if let Some(src) = &raw.custom_field {
        let n = initial_state.len();
        let map = jetbundle::SmoothMap::parse(src, n)
            .map_err(|e| Error::Parse(format!("custom_field: {e}")))?;
        if map.codomain_dim() != n {
            return Err(Error::Parse(format!(
                "custom_field must map R^{n} to R^{n}, got output dimension {}",
                map.codomain_dim()
            )));
        }
    }

    Ok(ScenarioConfig {
        name: raw.name.unwrap_or_else(|| preset.name().to_string()),
        preset,
        method,
        params,
        custom_field: raw.custom_field,
        initial_state,
    })
}

fn toml_float(x: f64) -> String {
    let s = x.to_string();
    if s.contains('.') || s.contains('e') || s.contains("inf") || s.contains("nan") {
        s
    } else {
        format!("{s}.0")
    }
}

/// Render the fully resolved config; `parse_config` of the result gives
/// back an equal value.
pub fn print_config(cfg: &ScenarioConfig) -> String {
    let mut out = String::new();
    out.push_str(&format!("name = \"{}\"\n", cfg.name));
    out.push_str(&format!("preset = \"{}\"\n", cfg.preset.name()));
    let method = match cfg.method {
        Method::Rk4 => "rk4",
        Method::Picard => "picard",
    };
    out.push_str(&format!("method = \"{method}\"\n"));
    if let Some(field) = &cfg.custom_field {
        out.push_str(&format!("custom_field = \"{field}\"\n"));
    }
    let state: Vec<String> = cfg.initial_state.iter().map(|x| toml_float(*x)).collect();
    out.push_str(&format!("initial_state = [{}]\n", state.join(", ")));
    out.push_str("\n[params]\n");
    let p = &cfg.params;
    out.push_str(&format!("G = {}\n", toml_float(p.g)));
    out.push_str(&format!("m1 = {}\n", toml_float(p.m1)));
    out.push_str(&format!("m2 = {}\n", toml_float(p.m2)));
    out.push_str(&format!("dt = {}\n", toml_float(p.dt)));
    out.push_str(&format!("t_end = {}\n", toml_float(p.t_end)));
    out.push_str(&format!("seed = {}\n", p.seed));
    out.push_str(&format!("rho_min = {}\n", toml_float(p.rho_min)));
    out.push_str(&format!("grid = {}\n", p.grid));
    out.push_str(&format!("max_iter = {}\n", p.max_iter));
    out.push_str(&format!("tol = {}\n", toml_float(p.tol)));
    out.push_str(&format!(
        "clock_half_width = {}\n",
        toml_float(p.clock_half_width)
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_fills_defaults() {
        let cfg = parse_config("preset = \"gravity-circular\"").unwrap();
        assert_eq!(cfg.preset, Preset::GravityCircular);
        assert_eq!(cfg.name, "gravity-circular");
        assert_eq!(cfg.method, Method::Rk4);
        assert_eq!(cfg.params.g, 1.0);
        assert_eq!(cfg.params.dt, 1e-3);
        assert!((cfg.params.t_end - std::f64::consts::TAU).abs() < 1e-15);
        assert_eq!(cfg.initial_state, vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn zero_dt_is_rejected_naming_the_field() {
        let err = parse_config("preset = \"clock\"\n[params]\ndt = 0").unwrap_err();
        assert!(err.to_string().contains("dt"), "{err}");
    }

    #[test]
    fn unknown_preset_and_param_are_rejected() {
        assert!(parse_config("preset = \"frobnicate\"").is_err());
        let err = parse_config("preset = \"clock\"\n[params]\nmass = 2").unwrap_err();
        assert!(err.to_string().contains("mass"), "{err}");
    }

    #[test]
    fn custom_rotation_field_roundtrips() {
        let text = r#"
preset = "custom"
custom_field = "(x1, -x0)"
initial_state = [1.0, 0.0]
"#;
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.custom_field.as_deref(), Some("(x1, -x0)"));
        let reparsed = parse_config(&print_config(&cfg)).unwrap();
        assert_eq!(reparsed, cfg);
    }

    #[test]
    fn custom_field_dimensions_are_checked() {
        let text = r#"
preset = "custom"
custom_field = "(x1, -x0, x0)"
initial_state = [1.0, 0.0]
"#;
        assert!(parse_config(text).is_err());
    }

    #[test]
    fn every_preset_roundtrips_through_print() {
        for preset in Preset::ALL {
            let text = if preset == Preset::Custom {
                "preset = \"custom\"\ncustom_field = \"-x0\"\ninitial_state = [2.0]".to_string()
            } else {
                format!("preset = \"{}\"", preset.name())
            };
            let cfg = parse_config(&text).unwrap();
            let printed = print_config(&cfg);
            let again = parse_config(&printed).unwrap();
            assert_eq!(again, cfg, "print/parse mismatch for {}", preset.name());
        }
    }

    #[test]
    fn method_is_validated() {
        assert!(parse_config("preset = \"clock\"\nmethod = \"picard\"").is_ok());
        assert!(parse_config("preset = \"clock\"\nmethod = \"euler\"").is_err());
    }
}
