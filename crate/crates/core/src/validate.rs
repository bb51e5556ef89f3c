//! Self-check suite behind the `validate` subcommand.
//!
//! Each check carries a status and a human-readable detail line; tables
//! record where the closed-form quantities and their density-matrix
//! counterparts part ways.

use std::fmt::Write as _;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channel::{
    apply_channel, apply_channel_density, compare_modes, cp_check, decay_factors, y_reflection, ChannelMode,
    ChannelParams, Component, DecayFactors,
};
use crate::curve::{Quantity, SweepSpec};
use crate::entanglement::{
    classify_decay, doe, entangled_time, evolved_family, partial_transpose, ppt_scalar_oracle, ppt_scalar_paper,
    pt_spectrum, x_spectrum, DecayClass,
};
use crate::error::Result;
use crate::figures::{run_all_figures, FigureOptions};
use crate::numerics::{hermitian_eigenvalues, JACOBI_TOL};
use crate::qstate::{bloch_to_density, generic_pure_state, validate_state, DensityMatrix, FamilyParam};
use crate::sampling;
use crate::teleport::{
    best_correction, bob_coefficients_paper, fidelity_paper, horodecki_measure, teleport_protocol,
    teleportation_window, telp_paper, BellState, FidelityForm, InputQubit, Pauli,
};

/// Horizon for lifetime and window searches, in units of T1.
pub const SEARCH_HORIZON: f64 = 10.0;

/// Horizon of the DOE curves compared in the sudden-death check.
pub const DECAY_HORIZON: f64 = 5.0;

/// Published teleportation windows used for the calibration attempt.
pub const PUBLISHED_WINDOW_P0_SEQ1: f64 = 25.2;
pub const PUBLISHED_WINDOW_P0_SEQ05: f64 = 23.1;
pub const PUBLISHED_WINDOW_P05_SEQ1: f64 = 30.9;
pub const CALIBRATION_TOL: f64 = 0.10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Warn,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Warn => "WARN",
                Status::Fail => "FAIL",
            };
            let _ = writeln!(out, "[{tag}] {}: {}", c.id, c.detail);
        }
        for t in &self.tables {
            let _ = writeln!(out, "\n# {}\n{}", t.name, t.columns.join("\t"));
            for r in &t.rows {
                let cells: Vec<String> = r.iter().map(|v| format!("{v:.6}")).collect();
                let _ = writeln!(out, "{}", cells.join("\t"));
            }
        }
        out
    }
}

fn check(id: &str, ok: bool, detail: String) -> Check {
    Check {
        id: id.to_string(),
        status: if ok { Status::Pass } else { Status::Fail },
        detail,
    }
}

fn fam(p: f64) -> FamilyParam {
    FamilyParam::new(p).expect("preset p in [0, 1]")
}

/// Channel of Figs. 1 and 7 (α = 2.5, t_eq = -0.5) for a given s_eq.
pub fn fig1_channel(s_eq: f64) -> ChannelParams {
    ChannelParams::from_alpha(2.5, 2.5, s_eq, -0.5).expect("preset")
}

pub fn run_validate() -> Result<ValidationReport> {
    let started = Instant::now();
    let mut checks = vec![
        zero_time_identity()?,
        mode_equivalence()?,
        spectrum_oracle()?,
        input_entanglement()?,
        ppt_anchors(),
    ];
    checks.extend(robustness_orderings()?);
    checks.push(teleport_anchors()?);
    checks.push(criterion_anchors()?);
    checks.push(window_calibration()?);
    checks.push(cp_at_zero());
    checks.push(semigroup()?);
    checks.push(safe_positivity()?);
    checks.push(ppt_sign_consistency()?);
    checks.push(horodecki_closed_form()?);

    let tables = vec![ppt_divergence_table()?, horodecki_telp_table()?, window_table()?];

    let fig_started = Instant::now();
    let opts = FigureOptions::default();
    let first = run_all_figures(&opts)?;
    let second = run_all_figures(&opts)?;
    let figures_secs = fig_started.elapsed().as_secs_f64() / 2.0;
    let identical = first.len() == second.len()
        && first
            .iter()
            .zip(&second)
            .all(|(a, b)| a.name == b.name && a.table.to_csv() == b.table.to_csv());
    let total = started.elapsed().as_secs_f64();
    checks.push(check(
        "c10-runtime-determinism",
        identical && total < 60.0,
        format!(
            "{} figure curves in {figures_secs:.2}s per run, suite {total:.2}s (< 60s); CSV identical across runs: {identical}",
            first.len()
        ),
    ));

    Ok(ValidationReport { checks, tables })
}

fn zero_time_identity() -> Result<Check> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let states: Vec<_> = (0..200).map(|_| sampling::bloch_state(&mut rng)).collect();
    let params: Vec<_> = (0..50).map(|_| sampling::channel_params(&mut rng)).collect();
    let mut worst: f64 = 0.0;
    let mut vs_reflection: f64 = 0.0;
    for s in &states {
        for cp in &params {
            for mode in [ChannelMode::Physical, ChannelMode::PaperLiteral] {
                let out = apply_channel(s, cp, 0.0, mode)?;
                worst = worst.max(out.max_abs_diff(s));
                vs_reflection = vs_reflection.max(out.max_abs_diff(&y_reflection(s)));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(check(
        "c1-zero-time-identity",
        worst < 1e-12 && secs < 1.0,
        format!(
            "200 states x 50 channels x 2 modes: max deviation {worst:e} (< 1e-12), {secs:.3}s (< 1s); \
             the printed d = diag(b, -b, g) makes t=0 a y-reflection (deviation from it {vs_reflection:e})"
        ),
    ))
}

fn mode_equivalence() -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut route_dev: f64 = 0.0;
    let mut nonzero_with_a1_zero = 0;
    let mut outside_c13 = 0;
    for i in 0..1000 {
        let mut s = sampling::bloch_state(&mut rng);
        if i % 2 == 0 {
            s.a[0] = 0.0;
        }
        let cp = sampling::channel_params(&mut rng);
        let t = rand::Rng::gen_range(&mut rng, 0.0..5.0);
        let direct = bloch_to_density(&apply_channel(&s, &cp, t, ChannelMode::Physical)?);
        let routed = apply_channel_density(&bloch_to_density(&s), &cp, t)?;
        route_dev = route_dev.max(direct.max_abs_diff(&routed));
        let dev = compare_modes(&s, &cp, t)?;
        if s.a[0] == 0.0 && dev.max_abs != 0.0 {
            nonzero_with_a1_zero += 1;
        }
        if dev.offending.iter().any(|c| *c != Component::C(1, 3)) {
            outside_c13 += 1;
        }
    }
    Ok(check(
        "c2-mode-equivalence",
        route_dev < 1e-12 && nonzero_with_a1_zero == 0 && outside_c13 == 0,
        format!(
            "1000 cases: Bloch vs density route max entry deviation {route_dev:e} (< 1e-12); \
             a1=0 cases with mode difference: {nonzero_with_a1_zero}; differences outside c13: {outside_c13}"
        ),
    ))
}

fn spectrum_oracle() -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    let mut worst_sum: f64 = 0.0;
    for _ in 0..1000 {
        let pt = partial_transpose(&sampling::x_state(&mut rng));
        let closed = x_spectrum(&pt);
        let jacobi = hermitian_eigenvalues(pt.matrix(), JACOBI_TOL)?;
        for (a, b) in closed.iter().zip(&jacobi) {
            worst = worst.max((a - b).abs());
        }
        worst_sum = worst_sum.max((closed.iter().sum::<f64>() - 1.0).abs());
    }
    Ok(check(
        "c3-spectrum-oracle",
        worst < 1e-10 && worst_sum < 1e-10,
        format!("1000 X states: closed form vs Jacobi {worst:e} (< 1e-10); |sum - 1| {worst_sum:e} (< 1e-10)"),
    ))
}

fn input_entanglement() -> Result<Check> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (p, want) in [(0.0, 1.0), (0.6, 0.8), (1.0, 0.0)] {
        let rho = bloch_to_density(&generic_pure_state(fam(p)));
        let fast = doe(&rho)?;
        let brute: f64 = hermitian_eigenvalues(partial_transpose(&rho).matrix(), JACOBI_TOL)?
            .iter()
            .map(|l| l.abs())
            .sum::<f64>()
            - 1.0;
        ok &= (fast - want).abs() < 1e-10 && (brute - want).abs() < 1e-10;
        parts.push(format!("p={p}: {fast:.12} / brute force {brute:.12}"));
    }
    Ok(check("c4-input-doe", ok, parts.join("; ")))
}

fn ppt_anchors() -> Check {
    let id = DecayFactors::identity();
    let p0 = ppt_scalar_paper(fam(0.0), &id, 1.0, -0.5);
    let p05 = ppt_scalar_paper(fam(0.5), &id, 1.0, -0.5);
    let inf = ppt_scalar_paper(fam(0.0), &DecayFactors::asymptotic(), 1.0, -0.5);
    check(
        "c5-ppt-anchors",
        (p0 + 0.25).abs() < 1e-12 && (p05 + 0.1875).abs() < 1e-12 && inf.abs() < 1e-12,
        format!("t=0: p=0 -> {p0}, p=0.5 -> {p05}; t=inf -> {inf:e}"),
    )
}

fn lifetime(p: f64, cp: &ChannelParams) -> Result<f64> {
    Ok(entangled_time(fam(p), cp, SEARCH_HORIZON)?.unwrap_or(f64::INFINITY))
}

/// DOE samples of the Fig. 4 family (p = 0, s_eq = 1, t_eq = -0.5).
pub fn fig4_doe_curve(alpha: f64, horizon: f64, steps: usize) -> Result<Vec<(f64, f64)>> {
    let spec = SweepSpec {
        quantity: Quantity::Doe,
        p: fam(0.0),
        channel: ChannelParams::from_alpha(alpha, alpha, 1.0, -0.5)?,
        mode: ChannelMode::Physical,
        t_max: horizon,
        steps,
        lambda1: None,
    };
    Ok(crate::curve::run_curve(&spec)?.rows)
}

fn robustness_orderings() -> Result<Vec<Check>> {
    let start = Instant::now();
    let mut out = Vec::new();

    let times = [0.5, 0.7, 0.8, 0.9, 1.0]
        .iter()
        .map(|&s| lifetime(0.0, &fig1_channel(s)))
        .collect::<Result<Vec<_>>>()?;
    out.push(check(
        "c6a-lifetime-vs-seq",
        times.windows(2).all(|w| w[0] <= w[1]),
        format!("entangled time for s_eq = 0.5,0.7,0.8,0.9,1.0: {times:.6?}"),
    ));

    let t0 = lifetime(0.0, &fig1_channel(1.0))?;
    let t5 = lifetime(0.5, &fig1_channel(1.0))?;
    out.push(check(
        "c6b-partial-outlives-maximal",
        t5 > t0,
        format!("entangled time p=0.5: {t5:.6}, p=0: {t0:.6}"),
    ));

    let w0 = teleportation_window(fam(0.0), &fig1_channel(1.0), SEARCH_HORIZON)?.telp;
    let w5 = teleportation_window(fam(0.5), &fig1_channel(1.0), SEARCH_HORIZON)?.telp;
    out.push(check(
        "c6c-partial-window-longer",
        w5.end() > w0.end(),
        format!("Telp window p=0.5: {:.6}, p=0: {:.6}", w5.end(), w0.end()),
    ));

    let fast = classify_decay(&fig4_doe_curve(2.5, DECAY_HORIZON, 2001)?);
    let slow_curve = fig4_doe_curve(0.5, DECAY_HORIZON, 2001)?;
    let slow_min = slow_curve.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let slow_death = entangled_time(
        fam(0.0),
        &ChannelParams::from_alpha(0.5, 0.5, 1.0, -0.5)?,
        DECAY_HORIZON,
    )?;
    let ok = matches!(fast, DecayClass::SuddenDeath { .. }) && slow_min > 1e-9;
    out.push(check(
        "c6d-sudden-death-vs-alpha",
        ok,
        format!(
            "horizon {DECAY_HORIZON}: alpha=2.5 -> {fast:?}; alpha=0.5 -> {:?}, min DOE {slow_min:e} (needs > 1e-9), \
             separable from t = {slow_death:?}",
            classify_decay(&slow_curve)
        ),
    ));

    let secs = start.elapsed().as_secs_f64();
    out.push(check(
        "c6-runtime",
        secs < 10.0,
        format!("ordering checks took {secs:.3}s (< 10s)"),
    ));
    Ok(out)
}

fn teleport_anchors() -> Result<Check> {
    let one = InputQubit::from_real(1.0)?;
    let bell = generic_pure_state(fam(0.0));
    let (pauli, oracle) = best_correction(&one, &bloch_to_density(&bell), BellState::PhiPlus)?;
    let paper = fidelity_paper(&one, &bob_coefficients_paper(&one, &bell), FidelityForm::Printed)?;

    let half = InputQubit::from_real(std::f64::consts::FRAC_1_SQRT_2)?;
    let mixed = teleport_protocol(&half, &DensityMatrix::maximally_mixed(), BellState::PhiPlus, Pauli::I)?.fidelity;

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst_sum: f64 = 0.0;
    for _ in 0..200 {
        let channel = sampling::mixed_state(&mut rng);
        let l1 = rand::Rng::gen_range(&mut rng, -1.0..=1.0);
        let input = InputQubit::from_real(l1)?;
        let total: f64 = BellState::ALL
            .iter()
            .map(|&b| teleport_protocol(&input, &channel, b, Pauli::I).map(|r| r.probability))
            .sum::<Result<f64>>()?;
        worst_sum = worst_sum.max((total - 1.0).abs());
    }
    Ok(check(
        "c7-teleport-anchors",
        (oracle.fidelity - 1.0).abs() < 1e-12
            && (paper - 1.0).abs() < 1e-12
            && (mixed - 0.5).abs() < 1e-12
            && worst_sum < 1e-10,
        format!(
            "oracle fidelity {} (best correction {pauli:?}), printed fidelity {paper}; maximally mixed {mixed}; \
             max |sum of Bell probabilities - 1| {worst_sum:e}",
            oracle.fidelity
        ),
    ))
}

fn criterion_anchors() -> Result<Check> {
    let h = horodecki_measure(&generic_pure_state(fam(0.0)));
    let t = telp_paper(fam(0.0), &DecayFactors::identity(), 1.0, -0.5);
    Ok(check(
        "c8-criterion-anchors",
        (h - 3.0).abs() < 1e-12 && (t - 3.0).abs() < 1e-12,
        format!("tr sqrt(CtC) at p=0: {h}; Telp at p=0, t=0: {t}; divergence tabulated below"),
    ))
}

fn window_calibration() -> Result<Check> {
    let end = |p: f64, s: f64| -> Result<f64> {
        Ok(teleportation_window(fam(p), &fig1_channel(s), SEARCH_HORIZON)?
            .telp
            .end())
    };
    let base = end(0.0, 1.0)?;
    let scale = PUBLISHED_WINDOW_P0_SEQ1 / base;
    let low_seq = scale * end(0.0, 0.5)?;
    let partial = scale * end(0.5, 1.0)?;
    let rel = |got: f64, want: f64| (got - want) / want;
    let (r1, r2) = (
        rel(low_seq, PUBLISHED_WINDOW_P0_SEQ05),
        rel(partial, PUBLISHED_WINDOW_P05_SEQ1),
    );
    let within = r1.abs() <= CALIBRATION_TOL && r2.abs() <= CALIBRATION_TOL;
    Ok(Check {
        id: "c9-window-calibration".into(),
        status: if within { Status::Pass } else { Status::Warn },
        detail: format!(
            "unit = {scale:.4} (window {base:.6} -> 25.2); s_eq=0.5 -> {low_seq:.3} vs 23.1 ({:+.1}%); \
             p=0.5 -> {partial:.3} vs 30.9 ({:+.1}%); tolerance ±10%, report-only",
            100.0 * r1,
            100.0 * r2
        ),
    })
}

fn cp_at_zero() -> Check {
    let r = cp_check(&DecayFactors::identity(), 1.0, -0.5);
    Check {
        id: "cp-check-at-zero".into(),
        status: if r.passes() { Status::Fail } else { Status::Pass },
        detail: format!(
            "expected-paper-literal: printed CP inequalities fail at t=0 (qubit a {:?}, qubit b {:?})",
            r.qubit_a, r.qubit_b
        ),
    }
}

fn semigroup() -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    let mut vs_reflection: f64 = 0.0;
    for _ in 0..200 {
        let s = sampling::bloch_state(&mut rng);
        let cp = sampling::channel_params(&mut rng);
        let t1 = rand::Rng::gen_range(&mut rng, 0.0..3.0);
        let t2 = rand::Rng::gen_range(&mut rng, 0.0..3.0);
        let two_step = apply_channel(
            &apply_channel(&s, &cp, t1, ChannelMode::Physical)?,
            &cp,
            t2,
            ChannelMode::Physical,
        )?;
        let one_step = apply_channel(&s, &cp, t1 + t2, ChannelMode::Physical)?;
        worst = worst.max(two_step.max_abs_diff(&one_step));
        vs_reflection = vs_reflection.max(two_step.max_abs_diff(&y_reflection(&one_step)));
    }
    Ok(check(
        "semigroup",
        worst < 1e-12,
        format!(
            "200 cases: max deviation {worst:e} (< 1e-12); two steps equal the y-reflected single step to {vs_reflection:e}"
        ),
    ))
}

fn safe_positivity() -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = f64::INFINITY;
    for _ in 0..200 {
        let rho = sampling::mixed_state(&mut rng);
        let t2a = rand::Rng::gen_range(&mut rng, 0.2..3.0);
        let t2b = rand::Rng::gen_range(&mut rng, 0.2..3.0);
        let aa = rand::Rng::gen_range(&mut rng, 0.5..4.0);
        let ab = rand::Rng::gen_range(&mut rng, 0.5..4.0);
        let cp = ChannelParams::from_alpha_t2(
            aa,
            t2a,
            ab,
            t2b,
            rand::Rng::gen_range(&mut rng, -1.0..=1.0),
            rand::Rng::gen_range(&mut rng, -1.0..=1.0),
        )?;
        let t = rand::Rng::gen_range(&mut rng, 0.0..5.0);
        let out = apply_channel_density(&rho, &cp, t)?;
        worst = worst.min(validate_state(&out).min_eigenvalue);
    }
    Ok(check(
        "positivity-alpha-ge-half",
        worst >= -1e-9,
        format!("200 random states, alpha >= 0.5: smallest eigenvalue {worst:e} (>= -1e-9)"),
    ))
}

fn ppt_sign_consistency() -> Result<Check> {
    let mut mismatches = 0;
    let mut n = 0;
    for p in [0.0, 0.25, 0.5, 0.75] {
        for s in [0.5, 1.0] {
            let cp = fig1_channel(s);
            for i in 0..=200 {
                let t = 2.0 * i as f64 / 200.0;
                let m = evolved_family(fam(p), &cp, t, ChannelMode::Physical)?;
                let det = ppt_scalar_oracle(&m)?;
                let min = pt_spectrum(&m)?.min();
                if (det < 0.0) != (min < 0.0) {
                    mismatches += 1;
                }
                n += 1;
            }
        }
    }
    Ok(check(
        "ppt-sign-consistency",
        mismatches == 0,
        format!("{n} evolved family states: sign(ppt oracle) vs sign(min PT eigenvalue) mismatches {mismatches}"),
    ))
}

fn horodecki_closed_form() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for p in [0.0, 0.3, 0.5, 0.9] {
        let cp = fig1_channel(0.8);
        for i in 0..=50 {
            let t = i as f64 * 0.05;
            let df = decay_factors(&cp, t)?;
            let s = apply_channel(&generic_pure_state(fam(p)), &cp, t, ChannelMode::Physical)?;
            let closed = 2.0 * fam(p).q() * df.beta1 * df.beta2 + s.c[2][2].abs();
            worst = worst.max((closed - horodecki_measure(&s)).abs());
        }
    }
    Ok(check(
        "horodecki-closed-form",
        worst < 1e-12,
        format!("2q·b1·b2 + |c33| vs singular values: max deviation {worst:e}"),
    ))
}

fn ppt_divergence_table() -> Result<Table> {
    let cp = fig1_channel(1.0);
    let mut rows = Vec::new();
    for p in [0.0, 0.5] {
        for i in 0..=20 {
            let t = i as f64 * 0.05;
            let df = decay_factors(&cp, t)?;
            let m = evolved_family(fam(p), &cp, t, ChannelMode::Physical)?;
            rows.push(vec![
                p,
                t,
                ppt_scalar_paper(fam(p), &df, cp.s_eq(), cp.t_eq()),
                ppt_scalar_oracle(&m)?,
                pt_spectrum(&m)?.min(),
            ]);
        }
    }
    Ok(Table {
        name: "PPT scalar: printed closed form vs density-matrix block determinant (s_eq=1, t_eq=-0.5, alpha=2.5)"
            .into(),
        columns: ["p", "t", "ppt_paper", "ppt_oracle", "min_pt_eigenvalue"]
            .map(String::from)
            .to_vec(),
        rows,
    })
}

fn horodecki_telp_table() -> Result<Table> {
    let cp = fig1_channel(1.0);
    let mut rows = Vec::new();
    for p in [0.0, 0.5] {
        for i in 0..=20 {
            let t = i as f64 * 0.05;
            let df = decay_factors(&cp, t)?;
            let s = apply_channel(&generic_pure_state(fam(p)), &cp, t, ChannelMode::Physical)?;
            let h = horodecki_measure(&s);
            rows.push(vec![p, t, telp_paper(fam(p), &df, cp.s_eq(), cp.t_eq()), h, h * h]);
        }
    }
    Ok(Table {
        name: "Teleportation criteria: Telp vs tr sqrt(CtC) (s_eq=1, t_eq=-0.5, alpha=2.5)".into(),
        columns: ["p", "t", "telp", "horodecki", "horodecki_squared"]
            .map(String::from)
            .to_vec(),
        rows,
    })
}

fn window_table() -> Result<Table> {
    let mut rows = Vec::new();
    for p in [0.0, 0.5] {
        for s in [1.0, 0.9, 0.8, 0.7, 0.5] {
            let w = teleportation_window(fam(p), &fig1_channel(s), SEARCH_HORIZON)?;
            rows.push(vec![p, s, w.telp.end(), w.horodecki.end()]);
        }
    }
    Ok(Table {
        name: "Teleportation windows (t in units of T1, alpha=2.5, t_eq=-0.5)".into(),
        columns: ["p", "s_eq", "telp_window_end", "horodecki_window_end"]
            .map(String::from)
            .to_vec(),
        rows,
    })
}
