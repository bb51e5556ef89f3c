//! Independent Bloch relaxation channels on each qubit.
//!
//! Qubit `a` relaxes with times `T1a`/`T2a` toward `<σ3>_eq = s_eq`, qubit
//! `b` with `T1b`/`T2b` toward `<τ3>_eq = t_eq`. On a single Bloch vector the
//! channel is the affine map `v ↦ diag(β, -β, γ) v + (0, 0, (1-γ)·eq)` with
//! `γ = exp(-t/T1)`, `β = exp(-t/T2)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{bloch_to_density, density_to_bloch, BlochState, DensityMatrix, Vec3};

/// Relaxation times and equilibrium polarizations of both channels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawChannelParams")]
pub struct ChannelParams {
    t1a: f64,
    t2a: f64,
    t1b: f64,
    t2b: f64,
    s_eq: f64,
    t_eq: f64,
}

#[derive(Deserialize)]
struct RawChannelParams {
    t1a: f64,
    t2a: f64,
    t1b: f64,
    t2b: f64,
    s_eq: f64,
    t_eq: f64,
}

impl TryFrom<RawChannelParams> for ChannelParams {
    type Error = Error;

    fn try_from(r: RawChannelParams) -> Result<Self> {
        Self::new(r.t1a, r.t2a, r.t1b, r.t2b, r.s_eq, r.t_eq)
    }
}

impl ChannelParams {
    pub fn new(t1a: f64, t2a: f64, t1b: f64, t2b: f64, s_eq: f64, t_eq: f64) -> Result<Self> {
        for (name, v) in [("t1a", t1a), ("t2a", t2a), ("t1b", t1b), ("t2b", t2b)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("relaxation time {name} = {v} must be positive")));
            }
        }
        for (name, v) in [("s_eq", s_eq), ("t_eq", t_eq)] {
            if !(-1.0..=1.0).contains(&v) {
                return Err(Error::Domain(format!(
                    "equilibrium value {name} = {v} is outside [-1, 1]"
                )));
            }
        }
        Ok(Self {
            t1a,
            t2a,
            t1b,
            t2b,
            s_eq,
            t_eq,
        })
    }

    /// Channels given by `α = T1/T2` and explicit transverse times.
    pub fn from_alpha_t2(alpha_a: f64, t2a: f64, alpha_b: f64, t2b: f64, s_eq: f64, t_eq: f64) -> Result<Self> {
        Self::new(alpha_a * t2a, t2a, alpha_b * t2b, t2b, s_eq, t_eq)
    }

    /// Channels given by `α = T1/T2` with time measured in units of the
    /// longitudinal time: `T1a = T1b = 1`, `T2 = 1/α`.
    pub fn from_alpha(alpha_a: f64, alpha_b: f64, s_eq: f64, t_eq: f64) -> Result<Self> {
        for (name, v) in [("alpha_a", alpha_a), ("alpha_b", alpha_b)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} = {v} must be positive")));
            }
        }
        Self::new(1.0, 1.0 / alpha_a, 1.0, 1.0 / alpha_b, s_eq, t_eq)
    }

    pub fn t1a(&self) -> f64 {
        self.t1a
    }
    pub fn t2a(&self) -> f64 {
        self.t2a
    }
    pub fn t1b(&self) -> f64 {
        self.t1b
    }
    pub fn t2b(&self) -> f64 {
        self.t2b
    }
    pub fn s_eq(&self) -> f64 {
        self.s_eq
    }
    pub fn t_eq(&self) -> f64 {
        self.t_eq
    }
    pub fn alpha_a(&self) -> f64 {
        self.t1a / self.t2a
    }
    pub fn alpha_b(&self) -> f64 {
        self.t1b / self.t2b
    }
}

/// `γ = exp(-t/T1)`, `β = exp(-t/T2)` for both qubits at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFactors {
    pub gamma1: f64,
    pub beta1: f64,
    pub gamma2: f64,
    pub beta2: f64,
}

impl DecayFactors {
    pub fn new(gamma1: f64, beta1: f64, gamma2: f64, beta2: f64) -> Self {
        Self {
            gamma1,
            beta1,
            gamma2,
            beta2,
        }
    }

    /// All factors equal to one (t = 0).
    pub fn identity() -> Self {
        Self::new(1.0, 1.0, 1.0, 1.0)
    }

    /// All factors zero (t → ∞).
    pub fn asymptotic() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0)
    }
}

pub fn decay_factors(cp: &ChannelParams, t: f64) -> Result<DecayFactors> {
    check_time(t)?;
    Ok(DecayFactors {
        gamma1: (-t / cp.t1a).exp(),
        beta1: (-t / cp.t2a).exp(),
        gamma2: (-t / cp.t1b).exp(),
        beta2: (-t / cp.t2b).exp(),
    })
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("time t = {t} must be non-negative")))
    }
}

/// Single-qubit relaxation `v ↦ d ⊙ v + k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineQubitMap {
    pub d: Vec3,
    pub k: Vec3,
}

impl AffineQubitMap {
    pub fn new(gamma: f64, beta: f64, eq: f64) -> Self {
        Self {
            d: [beta, -beta, gamma],
            k: [0.0, 0.0, (1.0 - gamma) * eq],
        }
    }

    pub fn linear(&self, v: &Vec3) -> Vec3 {
        [self.d[0] * v[0], self.d[1] * v[1], self.d[2] * v[2]]
    }

    pub fn apply(&self, v: &Vec3) -> Vec3 {
        let l = self.linear(v);
        [l[0] + self.k[0], l[1] + self.k[1], l[2] + self.k[2]]
    }
}

/// Which update law [`apply_channel`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelMode {
    /// The closed-form component equations, including the `<σ3>_eq` factor
    /// in the `C̃13` feed-in term.
    PaperLiteral,
    /// Tensor product of the two affine single-qubit maps.
    Physical,
}

impl fmt::Display for ChannelMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChannelMode::PaperLiteral => "paper-literal",
            ChannelMode::Physical => "physical",
        })
    }
}

impl FromStr for ChannelMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-literal" => Ok(ChannelMode::PaperLiteral),
            "physical" => Ok(ChannelMode::Physical),
            other => Err(Error::Usage(format!(
                "unknown mode '{other}' (expected paper-literal or physical)"
            ))),
        }
    }
}

pub fn apply_channel(s: &BlochState, cp: &ChannelParams, t: f64, mode: ChannelMode) -> Result<BlochState> {
    let df = decay_factors(cp, t)?;
    Ok(apply_with_factors(s, &df, cp.s_eq, cp.t_eq, mode))
}

/// Negates every component carrying exactly one `y` index.
///
/// The printed channel has `d = diag(β, -β, γ)`, so at `t = 0` it reduces to
/// this reflection rather than the identity; states without `y` components
/// are left unchanged.
pub fn y_reflection(s: &BlochState) -> BlochState {
    let sign = |i: usize| if i == 1 { -1.0 } else { 1.0 };
    let mut out = *s;
    out.a[1] = -s.a[1];
    out.b[1] = -s.b[1];
    for i in 0..3 {
        for j in 0..3 {
            out.c[i][j] = sign(i) * sign(j) * s.c[i][j];
        }
    }
    out
}

/// Channel update for given decay factors.
pub fn apply_with_factors(s: &BlochState, df: &DecayFactors, s_eq: f64, t_eq: f64, mode: ChannelMode) -> BlochState {
    match mode {
        ChannelMode::Physical => apply_physical(s, df, s_eq, t_eq),
        ChannelMode::PaperLiteral => apply_paper_literal(s, df, s_eq, t_eq),
    }
}

fn apply_physical(s: &BlochState, df: &DecayFactors, s_eq: f64, t_eq: f64) -> BlochState {
    let ma = AffineQubitMap::new(df.gamma1, df.beta1, s_eq);
    let mb = AffineQubitMap::new(df.gamma2, df.beta2, t_eq);
    let la = ma.linear(&s.a);
    let lb = mb.linear(&s.b);
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            // D1 c D2ᵀ + (D1 a) k2ᵀ + k1 (D2 b)ᵀ + k1 k2ᵀ
            c[i][j] = ma.d[i] * s.c[i][j] * mb.d[j] + la[i] * mb.k[j] + ma.k[i] * lb[j] + ma.k[i] * mb.k[j];
        }
    }
    BlochState {
        a: ma.apply(&s.a),
        b: mb.apply(&s.b),
        c,
    }
}

// Terms are written in the same multiplication order as the physical law so
// that the two modes agree bit for bit wherever the formulas coincide.
fn apply_paper_literal(s: &BlochState, df: &DecayFactors, se: f64, te: f64) -> BlochState {
    let DecayFactors {
        gamma1: g1,
        beta1: b1,
        gamma2: g2,
        beta2: b2,
    } = *df;
    let (a, b, c) = (&s.a, &s.b, &s.c);
    let ka = (1.0 - g1) * se;
    let kb = (1.0 - g2) * te;

    let a_new = [b1 * a[0], -b1 * a[1], g1 * a[2] + ka];
    let b_new = [b2 * b[0], -b2 * b[1], g2 * b[2] + kb];

    let mut ct = [[0.0; 3]; 3];
    ct[0][0] = b1 * c[0][0] * b2;
    ct[0][1] = b1 * c[0][1] * -b2;
    ct[0][2] = b1 * c[0][2] * g2 + (b1 * a[0]) * ((1.0 - g2) * se);
    // printed as -C12 β1β2; the symmetric reading C21 is used
    ct[1][0] = -b1 * c[1][0] * b2;
    ct[1][1] = -b1 * c[1][1] * -b2;
    ct[1][2] = -b1 * c[1][2] * g2 + (-b1 * a[1]) * ((1.0 - g2) * te);
    ct[2][0] = g1 * c[2][0] * b2 + ((1.0 - g1) * se) * (b2 * b[0]);
    ct[2][1] = g1 * c[2][1] * -b2 + ((1.0 - g1) * se) * (-b2 * b[1]);
    ct[2][2] = g1 * c[2][2] * g2
        + (g1 * a[2]) * ((1.0 - g2) * te)
        + ((1.0 - g1) * se) * (g2 * b[2])
        + ((1.0 - g1) * se) * ((1.0 - g2) * te);

    BlochState {
        a: a_new,
        b: b_new,
        c: ct,
    }
}

/// One Bloch-data component, with 1-based indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Component {
    A(usize),
    B(usize),
    C(usize, usize),
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::A(i) => write!(f, "a{i}"),
            Component::B(i) => write!(f, "b{i}"),
            Component::C(i, j) => write!(f, "c{i}{j}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeDeviation {
    pub max_abs: f64,
    /// Components where the two modes differ at all.
    pub offending: Vec<Component>,
}

/// Difference between the paper-literal and physical updates.
pub fn compare_modes(s: &BlochState, cp: &ChannelParams, t: f64) -> Result<ModeDeviation> {
    let lit = apply_channel(s, cp, t, ChannelMode::PaperLiteral)?;
    let phy = apply_channel(s, cp, t, ChannelMode::Physical)?;
    let mut max_abs: f64 = 0.0;
    let mut offending = Vec::new();
    let mut note = |d: f64, comp: Component| {
        if d != 0.0 {
            offending.push(comp);
            max_abs = max_abs.max(d);
        }
    };
    for i in 0..3 {
        note((lit.a[i] - phy.a[i]).abs(), Component::A(i + 1));
    }
    for i in 0..3 {
        note((lit.b[i] - phy.b[i]).abs(), Component::B(i + 1));
    }
    for i in 0..3 {
        for j in 0..3 {
            note((lit.c[i][j] - phy.c[i][j]).abs(), Component::C(i + 1, j + 1));
        }
    }
    Ok(ModeDeviation { max_abs, offending })
}

/// Reference evolution of a density matrix through the physical law.
pub fn apply_channel_density(m: &DensityMatrix, cp: &ChannelParams, t: f64) -> Result<DensityMatrix> {
    let s = density_to_bloch(m)?;
    let out = apply_channel(&s, cp, t, ChannelMode::Physical)?;
    Ok(bloch_to_density(&out))
}

/// The two printed complete-positivity inequalities for one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QubitCp {
    pub longitudinal: bool,
    pub transverse: bool,
}

impl QubitCp {
    pub fn passes(&self) -> bool {
        self.longitudinal && self.transverse
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CpCheck {
    pub qubit_a: QubitCp,
    pub qubit_b: QubitCp,
}

impl CpCheck {
    pub fn passes(&self) -> bool {
        self.qubit_a.passes() && self.qubit_b.passes()
    }
}

fn qubit_cp(gamma: f64, beta: f64, eq: f64) -> QubitCp {
    QubitCp {
        longitudinal: gamma > (2.0 * beta + eq) / (eq + 2.0),
        transverse: beta < (1.0 - eq).sqrt() / 4.0 * (1.0 - gamma),
    }
}

/// Evaluates the complete-positivity inequalities literally, reading the
/// unsubscripted expectation values as the equilibrium values.
///
/// With `γ = β = 1` (t = 0) the first inequality reads `1 > 1` and fails.
pub fn cp_check(df: &DecayFactors, s_eq: f64, t_eq: f64) -> CpCheck {
    CpCheck {
        qubit_a: qubit_cp(df.gamma1, df.beta1, s_eq),
        qubit_b: qubit_cp(df.gamma2, df.beta2, t_eq),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{generic_pure_state, FamilyParam};

    fn sample_state() -> BlochState {
        BlochState {
            a: [0.3, -0.2, 0.1],
            b: [-0.1, 0.25, -0.3],
            c: [[0.1, 0.2, -0.3], [0.05, -0.4, 0.15], [0.2, -0.1, 0.35]],
        }
    }

    #[test]
    fn params_validation() {
        assert!(ChannelParams::new(0.0, 1.0, 1.0, 1.0, 0.0, 0.0).is_err());
        assert!(ChannelParams::new(1.0, -1.0, 1.0, 1.0, 0.0, 0.0).is_err());
        assert!(ChannelParams::new(1.0, 1.0, 1.0, 1.0, 1.5, 0.0).is_err());
        assert!(ChannelParams::new(1.0, 1.0, 1.0, 1.0, 0.0, -1.01).is_err());
        let cp = ChannelParams::from_alpha_t2(2.5, 1.0, 0.5, 2.0, 1.0, -0.5).unwrap();
        assert_eq!((cp.t1a(), cp.t1b()), (2.5, 1.0));
        assert_eq!((cp.alpha_a(), cp.alpha_b()), (2.5, 0.5));
        let cp = ChannelParams::from_alpha(2.5, 0.5, 0.0, 0.0).unwrap();
        assert_eq!((cp.t1a(), cp.t2a(), cp.t2b()), (1.0, 0.4, 2.0));
    }

    #[test]
    fn decay_factor_values() {
        let cp = ChannelParams::new(2.5, 1.0, 2.5, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(decay_factors(&cp, 0.0).unwrap(), DecayFactors::identity());
        let df = decay_factors(&cp, 1.0).unwrap();
        assert!((df.gamma1 - 0.670320046035639).abs() < 1e-12);
        assert!((df.beta1 - 0.367879441171442).abs() < 1e-12);
        assert_eq!(decay_factors(&cp, f64::INFINITY).unwrap(), DecayFactors::asymptotic());
        assert!(decay_factors(&cp, -1e-9).is_err());
        assert!(decay_factors(&cp, f64::NAN).is_err());
    }

    #[test]
    fn zero_time_is_y_reflection() {
        let cp = ChannelParams::new(1.3, 0.7, 2.0, 0.4, 0.3, -0.8).unwrap();
        let mut y_free = sample_state();
        y_free.a[1] = 0.0;
        y_free.b[1] = 0.0;
        for k in 0..3 {
            y_free.c[1][k] = 0.0;
            y_free.c[k][1] = 0.0;
        }
        for mode in [ChannelMode::Physical, ChannelMode::PaperLiteral] {
            let out = apply_channel(&sample_state(), &cp, 0.0, mode).unwrap();
            assert_eq!(out, y_reflection(&sample_state()));
            assert!(out.max_abs_diff(&sample_state()) > 0.1);
            assert_eq!(apply_channel(&y_free, &cp, 0.0, mode).unwrap(), y_free);
        }
    }

    #[test]
    fn y_reflection_is_involution() {
        let s = sample_state();
        let r = y_reflection(&s);
        assert_eq!(r.a, [0.3, 0.2, 0.1]);
        assert_eq!(r.c[1][1], s.c[1][1]);
        assert_eq!(r.c[0][1], -s.c[0][1]);
        assert_eq!(y_reflection(&r), s);
    }

    #[test]
    fn infinite_time_fixed_point() {
        let cp = ChannelParams::new(1.3, 0.7, 2.0, 0.4, 0.3, -0.8).unwrap();
        for mode in [ChannelMode::Physical, ChannelMode::PaperLiteral] {
            let out = apply_channel(&sample_state(), &cp, f64::INFINITY, mode).unwrap();
            let mut c = [[0.0; 3]; 3];
            c[2][2] = 0.3 * -0.8;
            let want = BlochState::new([0.0, 0.0, 0.3], [0.0, 0.0, -0.8], c);
            assert!(out.max_abs_diff(&want) < 1e-15, "{mode}: {out:?}");
        }
    }

    #[test]
    fn evolved_bell_state() {
        let cp = ChannelParams::from_alpha_t2(2.5, 1.0, 2.5, 1.0, 1.0, -0.5).unwrap();
        let s = generic_pure_state(FamilyParam::new(0.0).unwrap());
        for mode in [ChannelMode::Physical, ChannelMode::PaperLiteral] {
            let out = apply_channel(&s, &cp, 1.0, mode).unwrap();
            let e2 = (-2.0f64).exp();
            assert!((out.c[0][0] + e2).abs() < 1e-15);
            assert!((out.c[1][1] + e2).abs() < 1e-15);
            let g = (-0.4f64).exp();
            assert!((out.a[2] - (1.0 - g)).abs() < 1e-15);
            assert!((out.a[2] - 0.329680).abs() < 1e-6);
            assert!((out.b[2] + 0.164840).abs() < 1e-6);
            // -γ1γ2 + Γ with Γ = (1-γ)²·1·(-0.5)
            let c33 = -(-0.8f64).exp() - 0.5 * (1.0 - g).powi(2);
            assert!((out.c[2][2] - c33).abs() < 1e-15);
            assert!((out.c[2][2] + 0.503673).abs() < 1e-6);
        }
    }

    #[test]
    fn modes_agree_on_family() {
        let cp = ChannelParams::new(1.3, 0.7, 2.0, 0.4, 0.3, -0.8).unwrap();
        for p in [0.0, 0.3, 0.5, 1.0] {
            let s = generic_pure_state(FamilyParam::new(p).unwrap());
            for t in [0.0, 0.2, 1.7, 9.0] {
                let dev = compare_modes(&s, &cp, t).unwrap();
                assert_eq!(dev.max_abs, 0.0);
                assert!(dev.offending.is_empty());
            }
        }
    }

    #[test]
    fn mode_difference_at_c13() {
        // a1 = 1, s_eq = 1, t_eq = -1, γ2 = 1/2, β1 = 1
        let cp = ChannelParams::new(1.0, f64::MAX, std::f64::consts::LN_2.recip(), 1.0, 1.0, -1.0).unwrap();
        let df = decay_factors(&cp, 1.0).unwrap();
        assert!((df.gamma2 - 0.5).abs() < 1e-15 && df.beta1 == 1.0);
        let s = BlochState::new([1.0, 0.0, 0.0], [0.0; 3], [[0.0; 3]; 3]);
        let dev = compare_modes(&s, &cp, 1.0).unwrap();
        assert_eq!(dev.offending, vec![Component::C(1, 3)]);
        assert!((dev.max_abs - 1.0).abs() < 1e-15);
        assert_eq!(compare_modes(&s, &cp, 0.0).unwrap().max_abs, 0.0);
    }

    #[test]
    fn density_route_fixed_points() {
        let cp = ChannelParams::new(1.3, 0.7, 2.0, 0.4, 0.0, 0.0).unwrap();
        let out = apply_channel_density(&DensityMatrix::maximally_mixed(), &cp, 3.2).unwrap();
        assert!(out.max_abs_diff(&DensityMatrix::maximally_mixed()) < 1e-15);

        let cp = ChannelParams::new(1.3, 0.7, 2.0, 0.4, 1.0, 1.0).unwrap();
        let out = apply_channel_density(&DensityMatrix::singlet(), &cp, f64::INFINITY).unwrap();
        assert!(out.max_abs_diff(&DensityMatrix::basis(0)) < 1e-15);
    }

    #[test]
    fn cp_inequalities() {
        let at_zero = cp_check(&DecayFactors::identity(), 0.0, 0.0);
        assert!(!at_zero.qubit_a.longitudinal && !at_zero.passes());

        let r = cp_check(&DecayFactors::new(1.0, 0.0, 1.0, 0.0), 0.0, 0.0);
        assert!(r.qubit_a.longitudinal && !r.qubit_a.transverse && !r.qubit_a.passes());

        let r = cp_check(&DecayFactors::new(0.9, 0.01, 0.9, 0.01), 0.0, 0.0);
        assert!(r.qubit_a.passes() && r.passes());

        // s_eq = 1 makes the square root vanish; the comparison is still made
        let r = cp_check(&DecayFactors::new(0.5, 0.1, 0.5, 0.1), 1.0, 1.0);
        assert!(!r.qubit_a.transverse);
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("physical".parse::<ChannelMode>().unwrap(), ChannelMode::Physical);
        assert_eq!(
            "paper-literal".parse::<ChannelMode>().unwrap(),
            ChannelMode::PaperLiteral
        );
        assert!(matches!("exact".parse::<ChannelMode>(), Err(Error::Usage(_))));
    }
}
