//! Acceptance suite. Runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line per criterion; exits non-zero if any fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use spinxfer::config::CliConfig;
use spinxfer::parallel;
use spinxfer_core::band::{
    build_level_scheme, precession_period, zeeman_splitting, BandScheme, Case, FieldConfig, MaterialParams,
    Orientation, SpectralWindow,
};
use spinxfer_core::constants::{BOHR_MAGNETON_UEV_PER_T, HBAR_UEV_NS, RESISTANCE_QUANTUM_OHM};
use spinxfer_core::noise::{dephase, dephasing_channel, phase_damping, NoiseModel};
use spinxfer_core::pipeline::{
    haar_qubit, monte_carlo, process_tomography, run_detection, HadamardTiming, ScenarioConfig, CPTP_TOL,
};
use spinxfer_core::quantum::{
    choi_matrix, clebsch_gordan, entanglement_entropy, expand_jmj, fidelity, is_cptp, partial_trace, purity,
    AngularMomentumState, FactorLabel, HalfInt, HilbertFactor, QuantumState,
};
use spinxfer_core::transfer::{
    absorb_any, absorb_case_a, absorption_map, canonical_basis, canonical_k, synchronized_hadamard, AbsorptionSettings,
    PhotonBasis, PhotonQubit, HOLE_DIM,
};
use spinxfer_core::Complex64;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn scheme(case: Case) -> BandScheme {
    ScenarioConfig::ideal(case).scheme().unwrap()
}

fn photon(case: Case, q: [Complex64; 2], window: Option<SpectralWindow>) -> PhotonQubit {
    PhotonQubit::new(canonical_basis(case), q[0], q[1], window, canonical_k(case)).unwrap()
}

fn criterion_1() -> Outcome {
    let s = AngularMomentumState::valence(HalfInt::HALF).map_err(|e| e.to_string())?;
    let terms = expand_jmj(&s).map_err(|e| e.to_string())?;
    let coef = |ml| terms.iter().find(|t| t.ml == ml).map_or(0.0, |t| t.coefficient);
    let (d0, d1) = ((coef(0) - (2.0f64 / 3.0).sqrt()).abs(), (coef(1) - (1.0f64 / 3.0).sqrt()).abs());
    // Rows (J, M), columns (mL, mS) of the L=1 ⊗ S=1/2 block.
    let jm: Vec<(f64, f64)> = [(1.5, 1.5), (1.5, 0.5), (1.5, -0.5), (1.5, -1.5), (0.5, 0.5), (0.5, -0.5)].into();
    let ls: Vec<(f64, f64)> = [1.0, 0.0, -1.0].iter().flat_map(|&ml| [(ml, 0.5), (ml, -0.5)]).collect();
    let mut worst: f64 = 0.0;
    for (i, a) in jm.iter().enumerate() {
        for (k, b) in jm.iter().enumerate() {
            let dot: f64 = ls
                .iter()
                .map(|&(ml, ms)| {
                    clebsch_gordan(1.0, ml, 0.5, ms, a.0, a.1).unwrap()
                        * clebsch_gordan(1.0, ml, 0.5, ms, b.0, b.1).unwrap()
                })
                .sum();
            worst = worst.max((dot - if i == k { 1.0 } else { 0.0 }).abs());
        }
    }
    for (i, a) in ls.iter().enumerate() {
        for (k, b) in ls.iter().enumerate() {
            let dot: f64 = jm
                .iter()
                .map(|&(j, m)| {
                    clebsch_gordan(1.0, a.0, 0.5, a.1, j, m).unwrap()
                        * clebsch_gordan(1.0, b.0, 0.5, b.1, j, m).unwrap()
                })
                .sum();
            worst = worst.max((dot - if i == k { 1.0 } else { 0.0 }).abs());
        }
    }
    check(
        d0 < 1e-12 && d1 < 1e-12 && worst < 1e-12,
        format!("|√(2/3) err| = {d0:.1e}, |√(1/3) err| = {d1:.1e}, block orthonormality err = {worst:.1e} (tol 1e-12)"),
    )
}

fn criterion_2() -> Outcome {
    let s = scheme(Case::Degenerate);
    let settings = AbsorptionSettings { compensate: false, ..Default::default() };
    let entropy = |q: [Complex64; 2]| {
        let out = absorb_any(&photon(Case::Degenerate, q, None), &s, &settings).unwrap();
        entanglement_entropy(&out.state, &[FactorLabel::Electron]).unwrap()
    };
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let q = haar_qubit(2, i);
        let shannon: f64 = q.iter().map(|a| a.norm_sqr()).filter(|&p| p > 0.0).map(|p| -p * p.log2()).sum();
        worst = worst.max((entropy(q) - shannon).abs());
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let sym = (entropy([c(h), c(h)]) - 1.0).abs();
    check(
        worst < 1e-10 && sym < 1e-10,
        format!("max |S - H(|α|²,|β|²)| = {worst:.1e} over 1000 inputs, |S(1/√2,1/√2) - 1| = {sym:.1e} (tol 1e-10)"),
    )
}

fn criterion_3() -> Outcome {
    let mut worst: f64 = 0.0;
    for case in [Case::A, Case::B] {
        let s = scheme(case);
        for i in 0..1000 {
            let out = absorb_any(&photon(case, haar_qubit(3, i), None), &s, &AbsorptionSettings::default()).unwrap();
            let hole = partial_trace(&out.state, &[FactorLabel::Hole]).unwrap();
            worst = worst.max((purity(&hole) - 1.0).abs());
        }
    }
    check(worst < 1e-10, format!("max |Tr ρ_h² - 1| = {worst:.1e} over 1000 inputs each in Case A and B (tol 1e-10)"))
}

fn criterion_4() -> Outcome {
    let s = scheme(Case::A);
    let m = absorption_map(&s, PhotonBasis::LinearZx, canonical_k(Case::A), None, false).map_err(|e| e.to_string())?;
    let ratio = m.matrix()[(0, 0)].norm() / m.matrix()[(HOLE_DIM, 1)].norm();
    let dr = (ratio - 2f64.sqrt()).abs();

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let settings = AbsorptionSettings { compensate: false, ..Default::default() };
    let out = absorb_case_a(&photon(Case::A, [c(h), c(h)], None), &s, &settings).map_err(|e| e.to_string())?;
    let electron = partial_trace(&out.state, &[FactorLabel::Electron]).unwrap();
    let f = fidelity(&electron, &QuantumState::electron(c(h), c(h)).unwrap()).unwrap();
    // State oracle: z reaches spin up through the mL = 0 part of |3/2,1/2⟩,
    // x reaches spin down through its mL = +1 part.
    let up = clebsch_gordan(1.0, 0.0, 0.5, 0.5, 1.5, 0.5).unwrap();
    let down = clebsch_gordan(1.0, 1.0, 0.5, -0.5, 1.5, 0.5).unwrap();
    let n = (up * up + down * down).sqrt();
    let oracle = ((up + down) / n * h).powi(2);
    check(
        dr < 1e-12 && (f - oracle).abs() < 1e-6 && (f - 0.971405).abs() < 1e-6,
        format!("ratio = {ratio:.12} (err {dr:.1e}), fidelity = {f:.6}, oracle = {oracle:.6}, 0.971405 target"),
    )
}

fn criterion_5() -> Outcome {
    let tau = precession_period(0.4, 1.0).map_err(|e| e.to_string())?;
    let table = 2.0 * std::f64::consts::PI * HBAR_UEV_NS / (0.4 * BOHR_MAGNETON_UEV_PER_T * 1.0);
    let dtau = (tau - table).abs();
    let literal = 0.178615;
    let s = scheme(Case::B);
    let [zero, one] = spinxfer_core::band::conduction_eigenstates(s.field());
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let q = haar_qubit(5, i);
        let out = absorb_any(&photon(Case::B, q, None), &s, &AbsorptionSettings::default()).unwrap();
        let e = partial_trace(&out.state, &[FactorLabel::Electron]).unwrap();
        let target = QuantumState::electron(q[0] * zero[0] + q[1] * one[0], q[0] * zero[1] + q[1] * one[1]).unwrap();
        for n in 1..=5 {
            let h = synchronized_hadamard(&e, &s, n as f64 * tau, true).map_err(|e| e.to_string())?;
            worst = worst.max((fidelity(&h, &target).unwrap() - 1.0).abs());
        }
    }
    check(
        dtau < 1e-6 && worst < 1e-10,
        format!(
            "τ = {tau:.10} ns, constants table 2πħ/(g µB B) = {table:.10} ns (err {dtau:.1e}, tol 1e-6); \
             quoted literal {literal} differs by {:.2e} ns; max |F - 1| at t = nτ, n = 1..5: {worst:.1e} (tol 1e-10)",
            (tau - literal).abs()
        ),
    )
}

fn criterion_6() -> Outcome {
    let m = MaterialParams::inas_gaas_qw().with_g_cb(0.4).and_then(|m| m.with_g_lh(8.87)).map_err(|e| e.to_string())?;
    let f = FieldConfig::new(1.0, Orientation::Normal).unwrap();
    let ev = zeeman_splitting(8.87, 1.0);
    let ec = zeeman_splitting(0.4, 1.0);
    let w100 = SpectralWindow::gaussian(100.0).unwrap();
    let w600 = SpectralWindow::gaussian(600.0).unwrap();
    let r100 = spinxfer_core::band::resolvability_check(&w100, &m, &f);
    let r600 = spinxfer_core::band::resolvability_check(&w600, &m, &f);
    let arithmetic = (100.0 < ev) && (100.0 > ec) && 600.0 >= ev;
    let mut cfg = ScenarioConfig::ideal(Case::A);
    cfg.material = m.clone();
    cfg.window = Some(w100);
    let leakage = (0..200)
        .map(|i| run_detection(haar_qubit(6, i), &cfg).map(|(_, r)| r.leakage))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?
        .into_iter()
        .fold(0.0, f64::max);
    let margins = (r100.valence_margin_uev - (ev - 100.0)).abs() < 1e-9
        && (r100.conduction_margin_uev - (100.0 - ec)).abs() < 1e-9;
    let _ = build_level_scheme(&m, &f).map_err(|e| e.to_string())?;
    check(
        r100.valence_resolved && r100.conduction_unresolved && leakage < 1e-3 && !r600.valence_resolved && arithmetic && margins,
        format!(
            "g_lh µB B = {ev:.3} µeV, g_cb µB B = {ec:.3} µeV; 100 µeV: valence {} conduction-unresolved {} max leakage {leakage:.2e}; 600 µeV: valence {}",
            r100.valence_resolved, r100.conduction_unresolved, r600.valence_resolved
        ),
    )
}

fn criterion_7() -> Outcome {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = QuantumState::electron(c(h), c(h)).unwrap();
    let t2 = 5e5;
    let out = dephase(&plus.to_density(), FactorLabel::Electron, t2, t2, None).map_err(|e| e.to_string())?;
    let f = fidelity(&out, &plus).unwrap();
    let want = (1.0 + (-1.0f64).exp()) / 2.0;
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let q = haar_qubit(7, i);
        let rho = QuantumState::electron(q[0], q[1]).unwrap().to_density();
        let (t1, t2b) = (0.1 * i as f64 + 0.3, 2.5);
        let two = dephase(
            &dephase(&rho, FactorLabel::Electron, t1, 10.0, None).unwrap(),
            FactorLabel::Electron,
            t2b,
            10.0,
            None,
        )
        .unwrap();
        let one = dephase(&rho, FactorLabel::Electron, t1 + t2b, 10.0, None).unwrap();
        worst = worst.max(two.density_matrix().max_abs_diff(&one.density_matrix()));
    }
    check(
        (f - want).abs() < 1e-6 && (f - 0.683940).abs() < 1e-6 && worst < 1e-12,
        format!("F(|+⟩, t = T2) = {f:.9} vs (1+e^-1)/2 = {want:.9}; composition err {worst:.1e} (tol 1e-12)"),
    )
}

fn scenario_catalog() -> Vec<(&'static str, ScenarioConfig)> {
    let mut out = Vec::new();
    for case in [Case::A, Case::B, Case::Degenerate] {
        out.push(("ideal", ScenarioConfig::ideal(case)));
        let mut n = ScenarioConfig::ideal(case);
        n.noise = NoiseModel::new(100.0, 5e5, 20.0, 0.1, 0.2).unwrap();
        n.storage_time_ns = 1e5;
        out.push(("noisy", n));
        let mut g = ScenarioConfig::ideal(case);
        g.chain.gate_error = 0.01;
        g.absorption_efficiency = 0.4;
        out.push(("gate errors", g));
        let mut u = ScenarioConfig::ideal(case);
        u.compensate = false;
        u.emission_direction = Some([0.3, -0.5, 0.8]);
        out.push(("uncompensated, tilted emission", u));
    }
    let mut w = ScenarioConfig::ideal(Case::A);
    w.window = Some(SpectralWindow::gaussian(400.0).unwrap());
    out.push(("wide window", w));
    let mut b = ScenarioConfig::ideal(Case::B);
    b.hadamard = HadamardTiming::TimeNs(0.03);
    out.push(("unsynchronized readout", b));
    out
}

fn criterion_8() -> Outcome {
    let mut pf = Vec::new();
    for case in [Case::A, Case::B] {
        let t = process_tomography(&ScenarioConfig::ideal(case)).map_err(|e| e.to_string())?;
        pf.push((t.process_fidelity - 1.0).abs());
    }
    let mut failures = Vec::new();
    let catalog = scenario_catalog();
    for (name, cfg) in &catalog {
        let t = process_tomography(cfg).map_err(|e| format!("{name} {}: {e}", cfg.case))?;
        if !is_cptp(&t.choi, CPTP_TOL).cptp {
            failures.push(format!("{name} {}", cfg.case));
        }
    }
    let electron = HilbertFactor::electron();
    for lambda in [0.0, 0.3, 1.0] {
        if !is_cptp(&choi_matrix(&phase_damping(electron, lambda, None).unwrap()), CPTP_TOL).cptp {
            failures.push(format!("phase damping λ = {lambda}"));
        }
    }
    let basis = scheme(Case::B).conduction_basis();
    if !is_cptp(&choi_matrix(&dephasing_channel(electron, 50.0, 100.0, Some(&basis)).unwrap()), CPTP_TOL).cptp {
        failures.push("energy-basis dephasing".into());
    }
    let worst = pf.iter().cloned().fold(0.0, f64::max);
    check(
        worst < 1e-8 && failures.is_empty(),
        format!(
            "ideal A/B |F_pro - 1| = {:.1e}/{:.1e} (tol 1e-8); CPTP at 1e-8 for {} scenario channels + 4 component channels; failures: {:?}",
            pf[0],
            pf[1],
            catalog.len(),
            failures
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut cfg = ScenarioConfig::ideal(Case::Degenerate);
    cfg.seed = 2024;
    let n = 100_000;
    let par = parallel::monte_carlo(&cfg, n).map_err(|e| e.to_string())?;
    let again = parallel::monte_carlo(&cfg, n).map_err(|e| e.to_string())?;
    let seq = monte_carlo(&cfg, n).map_err(|e| e.to_string())?;
    let dev = (par.mean_fidelity - 2.0 / 3.0).abs();
    let same = par == again && par.mean_fidelity.to_bits() == seq.mean_fidelity.to_bits() && par == seq;
    check(
        dev < 3.0 * par.stderr && same,
        format!(
            "mean = {:.6} ± {:.6} at n = {n}, |mean - 2/3| = {dev:.2e} = {:.2}σ; repeat/sequential bit-identical: {same}",
            par.mean_fidelity,
            par.stderr,
            dev / par.stderr
        ),
    )
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spinxfer"))
}

fn criterion_10() -> Outcome {
    let dot = |r: &str| {
        bin()
            .args([
                "check-dot",
                "--capacitance",
                "1e-18",
                "--resistance",
                r,
                "--confinement",
                "5000",
                "--temperature",
                "4",
            ])
            .output()
            .map_err(|e| e.to_string())
    };
    let pass = dot("26000")?;
    let fail = dot("25000")?;
    let line = |o: &std::process::Output| {
        String::from_utf8_lossy(&o.stdout).lines().find(|l| l.starts_with("resistance:")).unwrap_or("").to_string()
    };
    let (lp, lf) = (line(&pass), line(&fail));
    let constant = (RESISTANCE_QUANTUM_OHM - 25_812.807).abs() < 1e-3;
    check(
        pass.status.code() == Some(0)
            && fail.status.code() == Some(1)
            && lp.contains("PASS")
            && lf.contains("FAIL")
            && lf.contains("threshold 25812.8075 ohm")
            && constant,
        format!(
            "26 kΩ → {lp:?} (exit {:?}); 25 kΩ → {lf:?} (exit {:?}); h/e² = {RESISTANCE_QUANTUM_OHM} Ω",
            pass.status.code(),
            fail.status.code()
        ),
    )
}

fn criterion_11() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = dir.path().join("scenario.json");
    std::fs::write(
        &cfg,
        r#"{"case": "degenerate", "seed": 99, "samples": 20000,
            "noise": {"t2_iii_v_ns": 100, "t2_si_ns": 5e5, "transport_time_ns": 5},
            "storage_time_ns": 1000, "window": {"bandwidth_ueV": 80}}"#,
    )
    .map_err(|e| e.to_string())?;
    CliConfig::load(Some(&cfg)).map_err(|e| e.to_string())?;
    let cfg_b = dir.path().join("b.json");
    std::fs::write(&cfg_b, r#"{"case": "B", "noise": "default", "seed": 5, "samples": 5000}"#)
        .map_err(|e| e.to_string())?;
    let commands: Vec<(Vec<&str>, &std::path::Path)> = vec![
        (vec!["levels"], &cfg_b),
        (vec!["run"], &cfg),
        (vec!["run", "--format", "csv"], &cfg_b),
        (vec!["run", "--format", "json-like"], &cfg_b),
        (
            vec!["sweep", "--param", "b_tesla", "--from", "0.1", "--to", "1.0", "--steps", "6", "--samples", "3000"],
            &cfg_b,
        ),
        (vec!["tomography", "--format", "json-like"], &cfg),
        (
            vec![
                "check-dot",
                "--capacitance",
                "1e-18",
                "--resistance",
                "3e4",
                "--confinement",
                "900",
                "--temperature",
                "0.5",
            ],
            &cfg,
        ),
    ];
    let mut checked = 0;
    for (args, config) in &commands {
        let mut outputs = Vec::new();
        for (run, threads) in [(0, "1"), (1, "4"), (2, "4")] {
            let out_path = dir.path().join(format!("out{run}"));
            let o = bin()
                .args(args)
                .arg("--config")
                .arg(config)
                .arg("--out")
                .arg(&out_path)
                .env("RAYON_NUM_THREADS", threads)
                .output()
                .map_err(|e| e.to_string())?;
            if o.status.code() != Some(0) {
                return Err(format!("{args:?} exited {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr)));
            }
            outputs.push(std::fs::read(&out_path).map_err(|e| e.to_string())?);
        }
        if outputs.iter().any(|o| o != &outputs[0]) || outputs[0].is_empty() {
            return Err(format!("{args:?}: outputs differ between runs"));
        }
        checked += 1;
    }
    check(
        checked == commands.len(),
        format!("{checked} commands byte-identical across 3 runs each (1 and 4 worker threads)"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("1 CG coefficients and block orthonormality", criterion_1),
        ("2 degenerate-case entanglement entropy", criterion_2),
        ("3 hole disentanglement in Case A and B", criterion_3),
        ("4 uncompensated √2 imbalance", criterion_4),
        ("5 precession period and synchronized Hadamard", criterion_5),
        ("6 resolvability inequalities", criterion_6),
        ("7 dephasing at T2 and composition", criterion_7),
        ("8 ideal round trips and CPTP channels", criterion_8),
        ("9 classical 2/3 baseline", criterion_9),
        ("10 quantum-dot resistance threshold", criterion_10),
        ("11 CLI determinism", criterion_11),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        let result = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let dt = t.elapsed().as_secs_f64();
        match result {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{dt:.2} s]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{dt:.2} s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed in {:.1} s", 11 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
