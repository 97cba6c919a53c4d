//! JSON scenario documents. Every physical quantity carries its unit in the
//! field name; omitted fields take the defaults listed in the README.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use spinxfer_core::band::{Case, FieldConfig, Lineshape, MaterialParams, Orientation, SpectralWindow};
use spinxfer_core::noise::NoiseModel;
use spinxfer_core::pipeline::{HadamardTiming, ScenarioConfig};
use spinxfer_core::processor::ChainParams;
use spinxfer_core::Complex64;

use crate::catalog::{Catalog, MaterialDoc};
use crate::error::CliError;

pub const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    pub case: Option<String>,
    pub material: Option<MaterialRef>,
    /// Extra materials, relative to the config file.
    pub catalog: Option<PathBuf>,
    #[serde(default)]
    pub field: FieldDoc,
    pub window: Option<WindowDoc>,
    pub noise: Option<NoiseRef>,
    #[serde(default)]
    pub chain: ChainDoc,
    pub compensate: Option<bool>,
    pub strict: Option<bool>,
    pub storage_time_ns: Option<f64>,
    pub hadamard_periods: Option<f64>,
    pub hadamard_time_ns: Option<f64>,
    pub emission_direction: Option<[f64; 3]>,
    pub absorption_efficiency: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub input: Option<InputDoc>,
    pub dot: Option<DotDoc>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum MaterialRef {
    Name(String),
    Inline(MaterialDoc),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDoc {
    pub b_tesla: Option<f64>,
    pub orientation: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowDoc {
    #[serde(rename = "bandwidth_ueV")]
    pub bandwidth_uev: f64,
    #[serde(rename = "center_ueV")]
    pub center_uev: Option<f64>,
    pub lineshape: Option<String>,
}

/// `"ideal"`, `"default"` or an object of overrides.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum NoiseRef {
    Preset(String),
    Custom(NoiseDoc),
}

/// A time that may be `"inf"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Duration {
    Ns(f64),
    Word(String),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseDoc {
    pub t2_iii_v_ns: Option<Duration>,
    pub t2_si_ns: Option<Duration>,
    pub transport_time_ns: Option<f64>,
    pub transport_dephasing_fraction: Option<f64>,
    pub transport_loss: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDoc {
    pub n_sites: Option<usize>,
    pub g_transfer: Option<f64>,
    pub g_donor: Option<f64>,
    pub gate_error: Option<f64>,
}

/// Photon amplitudes as `[re, im]` pairs; normalized on load.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDoc {
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DotDoc {
    #[serde(rename = "capacitance_F")]
    pub capacitance_f: Option<f64>,
    pub tunnel_resistance_ohm: Option<f64>,
    #[serde(rename = "confinement_ueV")]
    pub confinement_uev: Option<f64>,
    #[serde(rename = "temperature_K")]
    pub temperature_k: Option<f64>,
}

/// A validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub scenario: ScenarioConfig,
    pub samples: usize,
    pub input: [Complex64; 2],
    pub dot: DotDoc,
}

fn parse_case(s: &str) -> Option<Case> {
    match s {
        "A" | "a" => Some(Case::A),
        "B" | "b" => Some(Case::B),
        "degenerate" => Some(Case::Degenerate),
        _ => None,
    }
}

fn parse_orientation(s: &str) -> Option<Orientation> {
    match s {
        "normal" => Some(Orientation::Normal),
        "in_plane" | "in-plane" => Some(Orientation::InPlane),
        _ => None,
    }
}

fn parse_lineshape(s: &str) -> Option<Lineshape> {
    match s {
        "gaussian" => Some(Lineshape::Gaussian),
        "lorentzian" => Some(Lineshape::Lorentzian),
        _ => None,
    }
}

impl Default for CliConfig {
    fn default() -> Self {
        Self::from_doc(ConfigDoc::default(), None).expect("defaults are valid")
    }
}

impl CliConfig {
    /// Reads `path`, or returns the defaults when there is none.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Self::from_doc(ConfigDoc::default(), None);
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let doc: ConfigDoc =
            serde_json::from_str(&text).map_err(|e| CliError::Config(vec![format!("{}: {e}", path.display())]))?;
        Self::from_doc(doc, path.parent())
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let doc: ConfigDoc = serde_json::from_str(text).map_err(|e| CliError::Config(vec![e.to_string()]))?;
        Self::from_doc(doc, None)
    }

    /// Converts and validates `doc`, collecting every problem before failing.
    pub fn from_doc(doc: ConfigDoc, base_dir: Option<&Path>) -> Result<Self, CliError> {
        let mut errors = Vec::new();
        let mut err = |field: &str, msg: String| errors.push(format!("{field}: {msg}"));

        let case = match doc.case.as_deref() {
            None => Case::A,
            Some(s) => parse_case(s).unwrap_or_else(|| {
                err("case", format!("unknown case {s:?} (expected A, B or degenerate)"));
                Case::A
            }),
        };
        let mut cfg = ScenarioConfig::ideal(case);
        cfg.noise = NoiseModel::default();

        let mut catalog = Catalog::default();
        if let Some(p) = &doc.catalog {
            let p = base_dir.map_or_else(|| p.clone(), |d| d.join(p));
            match Catalog::load(&p) {
                Ok(c) => catalog = c,
                Err(CliError::Config(list)) => list.into_iter().for_each(|m| err("catalog", m)),
                Err(e) => err("catalog", e.to_string()),
            }
        }
        match &doc.material {
            None => {}
            Some(MaterialRef::Name(n)) => match catalog.get(n) {
                Some(m) => cfg.material = m.clone(),
                None => err("material", format!("unknown material {n:?} (known: {})", catalog.names().join(", "))),
            },
            Some(MaterialRef::Inline(d)) => match catalog.resolve(d, &cfg.material) {
                Ok(m) => cfg.material = m,
                Err(e) => err("material", e),
            },
        }

        let orientation = match doc.field.orientation.as_deref() {
            None => cfg.field.orientation(),
            Some(s) => parse_orientation(s).unwrap_or_else(|| {
                err("field.orientation", format!("unknown orientation {s:?} (expected normal or in_plane)"));
                cfg.field.orientation()
            }),
        };
        let b = doc.field.b_tesla.unwrap_or(1.0);
        match FieldConfig::new(b, orientation) {
            Ok(f) => cfg.field = f,
            Err(e) => {
                err("field.b_tesla", e.to_string());
                cfg.field = FieldConfig::new(1.0, orientation).expect("1 T is a valid field");
            }
        }

        if let Some(w) = &doc.window {
            let lineshape = match w.lineshape.as_deref() {
                None => Lineshape::Gaussian,
                Some(s) => parse_lineshape(s).unwrap_or_else(|| {
                    err("window.lineshape", format!("unknown lineshape {s:?} (expected gaussian or lorentzian)"));
                    Lineshape::Gaussian
                }),
            };
            match SpectralWindow::new(w.center_uev, w.bandwidth_uev, lineshape) {
                Ok(sw) => cfg.window = Some(sw),
                Err(e) => err("window", e.to_string()),
            }
        }

        match &doc.noise {
            None => {}
            Some(NoiseRef::Preset(p)) => match p.as_str() {
                "ideal" => cfg.noise = NoiseModel::ideal(),
                "default" => {}
                _ => err("noise", format!("unknown preset {p:?} (expected ideal, default or an object)")),
            },
            Some(NoiseRef::Custom(n)) => {
                let d = NoiseModel::default();
                let mut time = |name: &str, v: &Option<Duration>, default: f64| -> f64 {
                    let t = match v {
                        None => default,
                        Some(Duration::Ns(x)) => *x,
                        Some(Duration::Word(w)) if matches!(w.as_str(), "inf" | "infinity") => f64::INFINITY,
                        Some(Duration::Word(w)) => {
                            err(name, format!("expected a number of ns or \"inf\", got {w:?}"));
                            return default;
                        }
                    };
                    if !(t > 0.0) {
                        err(name, "must be positive".into());
                        return default;
                    }
                    t
                };
                let t2_iii_v = time("noise.t2_iii_v_ns", &n.t2_iii_v_ns, d.t2_iii_v_ns());
                let t2_si = time("noise.t2_si_ns", &n.t2_si_ns, d.t2_si_ns());
                let transport = n.transport_time_ns.unwrap_or(d.transport_time_ns());
                if !(transport >= 0.0 && transport.is_finite()) {
                    err("noise.transport_time_ns", "must be finite and non-negative".into());
                }
                let fraction = n.transport_dephasing_fraction.unwrap_or(0.0);
                if !(0.0..=1.0).contains(&fraction) {
                    err("noise.transport_dephasing_fraction", "must lie in [0, 1]".into());
                }
                let loss = n.transport_loss.unwrap_or(0.0);
                if !(0.0..=1.0).contains(&loss) {
                    err("noise.transport_loss", "must lie in [0, 1]".into());
                }
                if let Ok(m) = NoiseModel::new(t2_iii_v, t2_si, transport, fraction, loss) {
                    cfg.noise = m;
                }
            }
        }

        let c = &doc.chain;
        cfg.chain = ChainParams {
            n_sites: c.n_sites.unwrap_or(cfg.chain.n_sites),
            g_transfer: c.g_transfer.unwrap_or(cfg.chain.g_transfer),
            g_donor: c.g_donor.unwrap_or(cfg.chain.g_donor),
            b_tesla: b,
            gate_error: c.gate_error.unwrap_or(0.0),
        };

        cfg.compensate = doc.compensate.unwrap_or(true);
        cfg.strict = doc.strict.unwrap_or(false);
        cfg.storage_time_ns = doc.storage_time_ns.unwrap_or(0.0);
        cfg.hadamard = match (doc.hadamard_periods, doc.hadamard_time_ns) {
            (Some(_), Some(_)) => {
                err("hadamard_periods", "give either hadamard_periods or hadamard_time_ns, not both".into());
                HadamardTiming::Periods(1.0)
            }
            (Some(n), None) => HadamardTiming::Periods(n),
            (None, Some(t)) => HadamardTiming::TimeNs(t),
            (None, None) => HadamardTiming::Periods(1.0),
        };
        cfg.emission_direction = doc.emission_direction;
        cfg.absorption_efficiency = doc.absorption_efficiency.unwrap_or(1.0);
        cfg.seed = doc.seed.unwrap_or(0);

        let samples = doc.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples == 0 {
            err("samples", "must be at least 1".into());
        }

        let input = match &doc.input {
            None => [Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0); 2],
            Some(q) => {
                let a = Complex64::new(q.alpha[0], q.alpha[1]);
                let b = Complex64::new(q.beta[0], q.beta[1]);
                let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
                if n > 0.0 && n.is_finite() {
                    [a / n, b / n]
                } else {
                    err("input", "amplitudes must be finite and not both zero".into());
                    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
                }
            }
        };

        let dot = doc.dot.unwrap_or_default();
        for (name, v) in [
            ("dot.capacitance_F", dot.capacitance_f),
            ("dot.tunnel_resistance_ohm", dot.tunnel_resistance_ohm),
            ("dot.confinement_ueV", dot.confinement_uev),
            ("dot.temperature_K", dot.temperature_k),
        ] {
            if v.is_some_and(|x| !(x > 0.0 && x.is_finite())) {
                err(name, "must be positive".into());
            }
        }

        let mut chain_reported = false;
        for (name, bad) in [
            ("chain.n_sites", !(1..=spinxfer_core::processor::MAX_SITES).contains(&cfg.chain.n_sites)),
            ("chain.g_transfer", !(cfg.chain.g_transfer > 0.0 && cfg.chain.g_transfer.is_finite())),
            ("chain.g_donor", !(cfg.chain.g_donor > 0.0 && cfg.chain.g_donor.is_finite())),
            ("chain.gate_error", !(0.0..=1.0).contains(&cfg.chain.gate_error)),
        ] {
            if bad {
                chain_reported = true;
                let msg = match name {
                    "chain.n_sites" => format!("must lie in 1..={}", spinxfer_core::processor::MAX_SITES),
                    "chain.gate_error" => "must lie in [0, 1]".into(),
                    _ => "must be positive".into(),
                };
                err(name, msg);
            }
        }
        for v in cfg.violations() {
            if !(chain_reported && v.field == "chain") {
                err(v.field, v.message.into());
            }
        }

        if errors.is_empty() {
            Ok(Self { scenario: cfg, samples, input, dot })
        } else {
            Err(CliError::Config(errors))
        }
    }
}

/// Material used by a case when the config names none.
pub fn default_material(case: Case) -> MaterialParams {
    ScenarioConfig::ideal(case).material
}

#[cfg(test)]
mod tests {
    use super::*;

    fn errors(json: &str) -> Vec<String> {
        match CliConfig::from_json(json) {
            Err(CliError::Config(e)) => e,
            other => panic!("expected config errors, got {other:?}"),
        }
    }

    #[test]
    fn defaults() {
        let c = CliConfig::default();
        assert_eq!(c.scenario.case, Case::A);
        assert_eq!(c.scenario.noise, NoiseModel::default());
        assert_eq!(c.samples, DEFAULT_SAMPLES);
        assert_eq!(c.scenario.material, default_material(Case::A));
    }

    #[test]
    fn case_b_gets_in_plane_field() {
        let c = CliConfig::from_json(r#"{"case": "B", "field": {"b_tesla": 0.5}, "noise": "ideal"}"#).unwrap();
        assert_eq!(c.scenario.field.orientation(), Orientation::InPlane);
        assert_eq!(c.scenario.chain.b_tesla, 0.5);
        assert!(c.scenario.noise.t2_si_ns().is_infinite());
    }

    #[test]
    fn unit_suffixed_fields() {
        let c = CliConfig::from_json(
            r#"{"window": {"bandwidth_ueV": 100, "lineshape": "lorentzian"},
                "noise": {"t2_iii_v_ns": "inf", "t2_si_ns": 1000, "transport_time_ns": 0},
                "storage_time_ns": 10, "hadamard_time_ns": 0.2,
                "material": {"base": "InAs/GaAs-QW", "g_cb": 0.5},
                "dot": {"capacitance_F": 1e-18}}"#,
        )
        .unwrap();
        let s = &c.scenario;
        assert_eq!(s.window.unwrap().bandwidth_uev(), 100.0);
        assert_eq!(s.window.unwrap().lineshape(), Lineshape::Lorentzian);
        assert!(s.noise.t2_iii_v_ns().is_infinite());
        assert_eq!(s.storage_time_ns, 10.0);
        assert_eq!(s.hadamard, HadamardTiming::TimeNs(0.2));
        assert_eq!(s.material.g_cb(), 0.5);
        assert_eq!(c.dot.capacitance_f, Some(1e-18));
    }

    #[test]
    fn all_errors_reported_together() {
        let e = errors(
            r#"{"case": "B", "field": {"orientation": "normal", "b_tesla": -1},
                "noise": {"t2_si_ns": -5, "transport_loss": 2},
                "chain": {"n_sites": 0, "gate_error": -0.1},
                "absorption_efficiency": 1.5, "storage_time_ns": -1, "samples": 0,
                "material": "unobtainium"}"#,
        );
        let fields: Vec<&str> = e.iter().map(|s| s.split(':').next().unwrap()).collect();
        for want in [
            "material",
            "field.b_tesla",
            "noise.t2_si_ns",
            "noise.transport_loss",
            "samples",
            "chain.n_sites",
            "chain.gate_error",
            "field.orientation",
            "storage_time_ns",
            "absorption_efficiency",
        ] {
            assert!(fields.contains(&want), "{want} missing from {e:?}");
        }
        assert!(!fields.contains(&"chain"));
    }

    #[test]
    fn syntax_and_unknown_fields() {
        assert_eq!(errors("{").len(), 1);
        assert!(errors(r#"{"b_tesla": 1}"#)[0].contains("unknown field"));
        assert!(errors(r#"{"hadamard_periods": 1, "hadamard_time_ns": 1}"#)[0].starts_with("hadamard_periods"));
        assert!(errors(r#"{"input": {"alpha": [0, 0], "beta": [0, 0]}}"#)[0].starts_with("input"));
    }

    #[test]
    fn input_is_normalized() {
        let c = CliConfig::from_json(r#"{"input": {"alpha": [3, 0], "beta": [0, 4]}}"#).unwrap();
        assert!((c.input[0].re - 0.6).abs() < 1e-15 && (c.input[1].im - 0.8).abs() < 1e-15);
    }
}
