//! Command-line front end.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Deserialize;
use spinxfer_core::band::{precession_period, resolvability_check, Case, Orientation};
use spinxfer_core::linalg::CMatrix;
use spinxfer_core::pipeline::{
    dot_constraint_check, linspace, resolve_parameter, summarize, sweep_configs, DotConstraints, ScenarioPlan,
    SweepRow, CPTP_TOL,
};
use spinxfer_core::quantum::{is_cptp, process_fidelity, ChoiMatrix};
use spinxfer_core::{Complex64, Error as ModelError};

use crate::config::CliConfig;
use crate::error::CliError;
use crate::parallel;
use crate::report::{Document, Format, Table, Value};

pub const SWEEP_COLUMNS: [&str; 7] =
    ["param", "value", "mean_fidelity", "stderr", "success_prob", "leakage", "hole_purity"];

#[derive(Debug, Parser)]
#[command(name = "spinxfer", version, about = "Photon polarization to electron spin transfer simulator")]
pub struct Cli {
    /// Scenario document (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Level scheme and spectral resolvability.
    Levels,
    /// One input through the full round trip, plus Monte Carlo and tomography.
    Run {
        #[arg(long)]
        samples: Option<usize>,
        /// Also write per-stage fidelities as CSV.
        #[arg(long, value_name = "PATH")]
        stages_csv: Option<PathBuf>,
    },
    /// Monte Carlo statistics over an evenly spaced parameter range.
    Sweep {
        #[arg(long)]
        param: String,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Choi matrix of the round trip, or the CPTP verdict on a matrix file.
    Tomography {
        #[arg(long, value_name = "PATH")]
        choi: Option<PathBuf>,
    },
    /// Emitter quantum-dot conditions.
    CheckDot {
        /// Farad.
        #[arg(long)]
        capacitance: Option<f64>,
        /// Ohm.
        #[arg(long)]
        resistance: Option<f64>,
        /// µeV.
        #[arg(long)]
        confinement: Option<f64>,
        /// Kelvin.
        #[arg(long)]
        temperature: Option<f64>,
    },
}

/// Rendered report and the exit status that goes with it.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub status: u8,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Self { output, status: 0 }
    }
}

fn load(cli: &Cli) -> Result<CliConfig, CliError> {
    let mut cfg = CliConfig::load(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        cfg.scenario.seed = seed;
    }
    Ok(cfg)
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Levels => Ok(Outcome::ok(levels(&load(cli)?)?.render(cli.format))),
        Command::Run { samples, stages_csv } => {
            let cfg = load(cli)?;
            let (doc, stages) = run(&cfg, samples.unwrap_or(cfg.samples))?;
            if let Some(p) = stages_csv {
                std::fs::write(p, stages.to_csv()).map_err(|e| CliError::io(p, e))?;
            }
            Ok(Outcome::ok(doc.render(cli.format)))
        }
        Command::Sweep { param, from, to, steps, samples } => {
            let cfg = load(cli)?;
            let rows = sweep(&cfg, param, *from, *to, *steps, samples.unwrap_or(cfg.samples))?;
            let table = sweep_table(&rows);
            Ok(Outcome::ok(match cli.format {
                Format::Text | Format::Csv => table.to_csv(),
                Format::JsonLike => {
                    let mut d = Document::new();
                    d.push("param", Value::Text(resolve_parameter(param).unwrap_or_default().into()))
                        .push("rows", Value::Table(table));
                    d.render(Format::JsonLike)
                }
            }))
        }
        Command::Tomography { choi } => {
            let doc = match choi {
                Some(p) => choi_file(p)?,
                None => tomography(&load(cli)?)?,
            };
            Ok(Outcome::ok(doc.render(cli.format)))
        }
        Command::CheckDot { capacitance, resistance, confinement, temperature } => {
            let cfg = load(cli)?;
            let d = cfg.dot;
            let mut missing = Vec::new();
            let mut pick = |flag: &'static str, v: Option<f64>, fallback: Option<f64>| {
                v.or(fallback).unwrap_or_else(|| {
                    missing.push(flag);
                    f64::NAN
                })
            };
            let dc = DotConstraints {
                capacitance_f: pick("--capacitance", *capacitance, d.capacitance_f),
                tunnel_resistance_ohm: pick("--resistance", *resistance, d.tunnel_resistance_ohm),
                confinement_uev: pick("--confinement", *confinement, d.confinement_uev),
                temperature_k: pick("--temperature", *temperature, d.temperature_k),
            };
            if !missing.is_empty() {
                return Err(CliError::Usage(format!(
                    "check-dot needs {} (or a dot section in the config)",
                    missing.join(", ")
                )));
            }
            let (doc, ok) = check_dot(&dc)?;
            Ok(Outcome { output: doc.render(cli.format), status: if ok { 0 } else { 1 } })
        }
    }
}

fn orientation_name(o: Orientation) -> &'static str {
    match o {
        Orientation::Normal => "normal",
        Orientation::InPlane => "in_plane",
    }
}

pub fn levels(cfg: &CliConfig) -> Result<Document, CliError> {
    let s = &cfg.scenario;
    let scheme = s.scheme()?;
    let b = s.field.b_tesla();
    let mut d = Document::new();
    d.push("case", Value::Text(s.case.to_string()))
        .push("material", Value::Text(s.material.name().into()))
        .push("b_tesla", Value::Sig(b))
        .push("orientation", Value::Text(orientation_name(s.field.orientation()).into()));
    if b == 0.0 {
        d.push(
            "warning",
            Value::Text("B = 0 T: the Zeeman sublevels are degenerate and the spin does not precess".into()),
        );
    }
    let mut t = Table::new(&["band", "label", "energy_ueV"]);
    for l in scheme.levels().iter().rev() {
        t.push(vec![Value::Text(l.band.to_string()), Value::Text(l.label.to_string()), Value::Fixed(l.energy_uev)]);
    }
    d.push("levels", Value::Table(t));
    let valence = match s.case {
        Case::Degenerate => scheme.heavy_hole_splitting_uev(),
        _ => scheme.light_hole_splitting_uev().abs(),
    };
    d.push("valence_splitting_ueV", Value::Fixed(valence))
        .push("light_hole_splitting_ueV", Value::Fixed(scheme.light_hole_splitting_uev().abs()))
        .push("heavy_hole_splitting_ueV", Value::Fixed(scheme.heavy_hole_splitting_uev()))
        .push("conduction_splitting_ueV", Value::Fixed(scheme.conduction_splitting_uev().abs()))
        .push("strain_splitting_ueV", Value::Fixed(s.material.strain_splitting_uev()));
    match precession_period(s.material.g_cb(), b) {
        Ok(tau) => d.push("precession_period_ns", Value::Sig(tau)),
        Err(_) => d.push("precession_period_ns", Value::Text("none".into())),
    };
    match &s.window {
        None => d.push("resolvability", Value::Text("not applicable (ideal spectral selection)".into())),
        Some(w) => {
            let r = resolvability_check(w, &s.material, &s.field);
            let mut sec = Document::new();
            sec.push("bandwidth_ueV", Value::Fixed(w.bandwidth_uev()))
                .push("valence_resolved", Value::Bool(r.valence_resolved))
                .push("valence_margin_ueV", Value::Fixed(r.valence_margin_uev))
                .push("conduction_unresolved", Value::Bool(r.conduction_unresolved))
                .push("conduction_margin_ueV", Value::Fixed(r.conduction_margin_uev))
                .push("strain_resolved", Value::Bool(r.strain_resolved))
                .push("strain_margin_ueV", Value::Fixed(r.strain_margin_uev))
                .push("passes", Value::Bool(r.passes()));
            d.push("resolvability", Value::Section(sec))
        }
    };
    Ok(d)
}

/// Report document and the per-stage table.
pub fn run(cfg: &CliConfig, samples: usize) -> Result<(Document, Table), CliError> {
    if samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let s = &cfg.scenario;
    let plan = ScenarioPlan::new(s)?;
    let (photon, r) = plan.run(cfg.input)?;
    let mc = summarize(&parallel::samples(&plan, s.seed, samples)?)?;
    let tomo = plan.tomography()?;

    let mut input = Document::new();
    input.push("alpha", Value::Complex(cfg.input[0])).push("beta", Value::Complex(cfg.input[1]));
    let tr = photon.trace().re;
    let out = if tr > 0.0 { photon.scale(Complex64::new(1.0 / tr, 0.0)) } else { photon };

    let mut m = Document::new();
    m.push("samples", Value::Int(mc.samples as u64))
        .push("detection_fidelity", Value::Fixed(mc.stages.detection))
        .push("storage_fidelity", Value::Fixed(mc.stages.storage))
        .push("shuttle_fidelity", Value::Fixed(mc.stages.shuttle))
        .push("success_probability", Value::Fixed(mc.success_probability))
        .push("leakage", Value::Fixed(mc.leakage))
        .push("hole_purity_mean", Value::Fixed(mc.hole_purity))
        .push("hole_purity_min", Value::Fixed(mc.hole_purity_min));

    let mut t = Document::new();
    t.push("process_fidelity", Value::Fixed(tomo.process_fidelity))
        .push("average_fidelity", Value::Fixed(tomo.average_fidelity))
        .push("cptp", Value::Bool(tomo.cptp.cptp));

    let mut d = Document::new();
    d.push("case", Value::Text(s.case.to_string()))
        .push("material", Value::Text(s.material.name().into()))
        .push("seed", Value::Int(s.seed))
        .push("input", Value::Section(input))
        .push("detection_fidelity", Value::Fixed(r.stages.detection))
        .push("storage_fidelity", Value::Fixed(r.stages.storage))
        .push("shuttle_fidelity", Value::Fixed(r.stages.shuttle))
        .push("round_trip_fidelity", Value::Fixed(r.stages.round_trip))
        .push("detection_probability", Value::Fixed(r.detection_probability))
        .push("success_probability", Value::Fixed(r.success_probability))
        .push("leakage", Value::Fixed(r.leakage))
        .push("hole_purity", Value::Fixed(r.hole_purity))
        .push("lossy", Value::Bool(r.lossy))
        .push("output_photon", Value::Matrix(out))
        .push("mean_fidelity", Value::Estimate { mean: mc.mean_fidelity, stderr: mc.stderr })
        .push("monte_carlo", Value::Section(m))
        .push("tomography", Value::Section(t));

    let mut stages = Table::new(&["stage", "fidelity", "mean_fidelity"]);
    for (name, one, mean) in [
        ("detection", r.stages.detection, mc.stages.detection),
        ("storage", r.stages.storage, mc.stages.storage),
        ("shuttle", r.stages.shuttle, mc.stages.shuttle),
        ("round_trip", r.stages.round_trip, mc.stages.round_trip),
    ] {
        stages.push(vec![Value::Text(name.into()), Value::Fixed(one), Value::Fixed(mean)]);
    }
    Ok((d, stages))
}

pub fn sweep(
    cfg: &CliConfig,
    param: &str,
    from: f64,
    to: f64,
    steps: usize,
    samples: usize,
) -> Result<Vec<SweepRow>, CliError> {
    let path = resolve_parameter(param).map_err(|_| {
        CliError::Usage(format!(
            "unknown sweep parameter {param:?} (known: {})",
            spinxfer_core::pipeline::SWEEP_PARAMETERS.join(", ")
        ))
    })?;
    if samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    if !(from.is_finite() && to.is_finite()) {
        return Err(CliError::Usage("--from and --to must be finite".into()));
    }
    let values = linspace(from, to, steps);
    let configs =
        sweep_configs(&cfg.scenario, path, &values).map_err(|e| CliError::Config(vec![format!("{path}: {e}")]))?;
    let mut problems = Vec::new();
    for (c, v) in configs.iter().zip(&values) {
        for x in c.violations() {
            problems.push(format!("{path} = {v}: {}: {}", x.field, x.message));
        }
    }
    if !problems.is_empty() {
        return Err(CliError::Config(problems));
    }
    Ok(parallel::sweep_rows(path, &values, &configs, samples)?)
}

pub fn sweep_table(rows: &[SweepRow]) -> Table {
    let mut t = Table::new(&SWEEP_COLUMNS);
    for r in rows {
        let s = &r.summary;
        t.push(vec![
            Value::Text(r.param.clone()),
            Value::Sig(r.value),
            Value::Fixed(s.mean_fidelity),
            Value::Fixed(s.stderr),
            Value::Fixed(s.success_probability),
            Value::Fixed(s.leakage),
            Value::Fixed(s.hole_purity),
        ]);
    }
    t
}

fn choi_document(choi: &ChoiMatrix) -> Document {
    let v = is_cptp(choi, CPTP_TOL);
    let trace = choi.matrix().trace().re;
    let mut d = Document::new();
    d.push("choi", Value::Matrix(choi.normalized().matrix().clone()))
        .push("trace", Value::Sig(trace))
        .push("cptp", Value::Bool(v.cptp))
        .push("min_eigenvalue", Value::Sig(v.min_eigenvalue))
        .push("trace_deviation", Value::Sig(v.trace_deviation));
    match process_fidelity(choi) {
        Ok(f) if trace > 0.0 => {
            let dim = choi.in_dim() as f64;
            d.push("process_fidelity", Value::Fixed(f))
                .push("average_fidelity", Value::Fixed((dim * f + 1.0) / (dim + 1.0)))
        }
        _ => d.push("process_fidelity", Value::Text("undefined".into())),
    };
    d
}

pub fn tomography(cfg: &CliConfig) -> Result<Document, CliError> {
    let plan = ScenarioPlan::new(&cfg.scenario)?;
    let t = plan.tomography()?;
    let mut d = Document::new();
    d.push("case", Value::Text(cfg.scenario.case.to_string()));
    for (k, v) in choi_document(&t.choi).entries() {
        d.push(k.clone(), v.clone());
    }
    Ok(d)
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ChoiFile {
    Bare(Vec<Vec<[f64; 2]>>),
    Tagged {
        matrix: Vec<Vec<[f64; 2]>>,
        #[serde(default)]
        conditional: bool,
    },
}

/// Reads a Choi matrix written as rows of `[re, im]` pairs, output factor
/// first, normalized to trace 1 for a trace-preserving channel.
pub fn parse_choi(text: &str) -> Result<ChoiMatrix, CliError> {
    let doc: ChoiFile = serde_json::from_str(text).map_err(|e| CliError::Config(vec![format!("choi: {e}")]))?;
    let (rows, conditional) = match doc {
        ChoiFile::Bare(m) => (m, false),
        ChoiFile::Tagged { matrix, conditional } => (matrix, conditional),
    };
    let n = rows.len();
    let d = (n as f64).sqrt().round() as usize;
    if n == 0 || d * d != n || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Config(vec![format!("choi: expected a square d²×d² matrix, got {n} rows")]));
    }
    if rows.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(CliError::Config(vec!["choi: entries must be finite".into()]));
    }
    let m = CMatrix::from_fn(n, n, |r, c| Complex64::new(rows[r][c][0], rows[r][c][1]));
    ChoiMatrix::from_matrix(m, d, d, conditional).map_err(|e| CliError::Config(vec![format!("choi: {e}")]))
}

fn choi_file(path: &Path) -> Result<Document, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let choi = parse_choi(&text)?;
    let mut d = Document::new();
    d.push("source", Value::Text(path.display().to_string()));
    for (k, v) in choi_document(&choi).entries() {
        d.push(k.clone(), v.clone());
    }
    Ok(d)
}

pub fn check_dot(dc: &DotConstraints) -> Result<(Document, bool), CliError> {
    let r = dot_constraint_check(dc).map_err(|e| match e {
        ModelError::InvalidParameter(m) => CliError::Usage(m.into()),
        other => CliError::Scenario(other),
    })?;
    let check = |c: spinxfer_core::pipeline::DotCheck, unit| Value::Check {
        ok: c.ok,
        measured: c.measured,
        threshold: c.threshold,
        unit,
    };
    let mut d = Document::new();
    d.push("charging", check(r.charging, "ueV"))
        .push("confinement", check(r.confinement, "ueV"))
        .push("resistance", check(r.resistance, "ohm"))
        .push(
            "note",
            Value::Text(
                "charging compares e^2/C with kB*T; the condition is often quoted as e/C > kT, a voltage against an energy"
                    .into(),
            ),
        );
    Ok((d, r.all_ok()))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    use std::io::Write;
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

/// Parses `args`, runs the command and reports errors on stderr.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = execute(&cli).and_then(|o| write_output(cli.out.as_deref(), &o.output).map(|_| o.status));
    match result {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
