//! Separability of two-qubit states: partial transpose, its spectrum,
//! negativity-based degree of entanglement (DOE), and the time at which the
//! evolved pure family becomes separable.

use serde::Serialize;

use crate::channel::{apply_channel, ChannelMode, ChannelParams, DecayFactors};
use crate::error::{Error, Result};
use crate::numerics::{first_nonnegative, hermitian_eigenvalues, ComplexMatrix, Crossing, JACOBI_TOL};
use crate::qstate::{bloch_to_density, generic_pure_state, DensityMatrix, FamilyParam, PHYSICAL_TOL};

/// Off-X entries below this count as zero.
pub const X_TOL: f64 = 1e-12;

/// Scan resolution used by [`entangled_time`].
pub const SCAN_STEPS: usize = 2000;

/// Bisection width used by the crossing searches.
pub const ROOT_TOL: f64 = 1e-9;

/// Transpose on the second qubit: `(ij, kl) ← (il, kj)`.
pub fn partial_transpose(m: &DensityMatrix) -> DensityMatrix {
    let src = m.matrix();
    let mut out = ComplexMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + j, 2 * k + l)] = src[(2 * i + l, 2 * k + j)];
                }
            }
        }
    }
    DensityMatrix::new(out).expect("4x4")
}

/// Four partial-transpose eigenvalues, ascending.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PtSpectrum {
    pub lambdas: [f64; 4],
}

impl PtSpectrum {
    pub fn min(&self) -> f64 {
        self.lambdas[0]
    }

    pub fn sum(&self) -> f64 {
        self.lambdas.iter().sum()
    }

    pub fn negativity_sum(&self) -> f64 {
        self.lambdas.iter().map(|l| l.abs()).sum::<f64>() - 1.0
    }
}

/// Eigenvalues of a Hermitian X-shaped 4×4 matrix from its two 2×2 blocks
/// `{0,3}` and `{1,2}`: `mean ± sqrt(half_gap² + |coherence|²)`.
pub fn x_spectrum(m: &DensityMatrix) -> [f64; 4] {
    let block = |d1: f64, d2: f64, coh: f64| {
        let mean = 0.5 * (d1 + d2);
        let r = (0.25 * (d1 - d2).powi(2) + coh * coh).sqrt();
        [mean - r, mean + r]
    };
    let outer = block(m.get(0, 0).re, m.get(3, 3).re, m.get(0, 3).norm());
    let inner = block(m.get(1, 1).re, m.get(2, 2).re, m.get(1, 2).norm());
    let mut ev = [outer[0], outer[1], inner[0], inner[1]];
    ev.sort_by(f64::total_cmp);
    ev
}

/// Partial-transpose spectrum. X-shaped input uses [`x_spectrum`]; anything
/// else goes through the Jacobi eigensolver.
pub fn pt_spectrum(m: &DensityMatrix) -> Result<PtSpectrum> {
    let pt = partial_transpose(m);
    let lambdas = if m.is_x_shaped(X_TOL) {
        x_spectrum(&pt)
    } else {
        let ev = hermitian_eigenvalues(pt.matrix(), JACOBI_TOL)?;
        [ev[0], ev[1], ev[2], ev[3]]
    };
    Ok(PtSpectrum { lambdas })
}

/// Degree of entanglement `Σ|λ| - 1` over the partial-transpose spectrum.
pub fn doe(m: &DensityMatrix) -> Result<f64> {
    Ok(pt_spectrum(m)?.negativity_sum())
}

/// The printed element expressions behind the PPT scalar of the evolved
/// family, with `Γ = (1-γ1)(1-γ2)·s_eq·t_eq`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PptClosedForm {
    pub rho11: f64,
    pub rho44: f64,
    pub rho23: f64,
    pub rho32: f64,
    pub gamma: f64,
}

impl PptClosedForm {
    pub fn new(fp: FamilyParam, df: &DecayFactors, s: f64, t: f64) -> Self {
        let p = fp.p();
        let (g1, g2) = (df.gamma1, df.gamma2);
        let gamma = (1.0 - g1) * (1.0 - g2) * s * t;
        // the p-terms are kept exactly as printed, including the s_eq that
        // appears twice in rho23
        let rho11 = 0.25 * ((1.0 - g1 * g2) + (1.0 - g1) * s + (1.0 - g2) * t + gamma)
            + 0.25 * p * ((g1 - g2) + g1 * (1.0 - g2) * s - g2 * (1.0 - g1) * t);
        let rho44 = 0.25 * ((1.0 - g1 * g2) - (1.0 - g1) * s - (1.0 - g2) * t + gamma)
            + 0.25 * p * (-(g1 - g2) + g1 * (1.0 - g2) * s - g2 * (1.0 - g1) * t);
        let rho23 = 0.25 * ((1.0 + g1 * g2) - (1.0 - g1) * s + (1.0 - g2) * t - gamma)
            + 0.25 * p * ((g1 + g2) - g1 * (1.0 - g2) * s + g2 * (1.0 - g1) * s);
        let rho32 = 0.25 * ((1.0 + g1 * g2) + (1.0 - g1) * s - (1.0 - g2) * t - gamma)
            + 0.25 * p * (-(g1 + g2) + g1 * (1.0 - g2) * s - g2 * (1.0 - g1) * t);
        Self {
            rho11,
            rho44,
            rho23,
            rho32,
            gamma,
        }
    }

    /// `ρ11ρ44 - ρ23ρ32`; negative means entangled.
    pub fn ppt(&self) -> f64 {
        self.rho11 * self.rho44 - self.rho23 * self.rho32
    }
}

pub fn ppt_scalar_paper(fp: FamilyParam, df: &DecayFactors, s_eq: f64, t_eq: f64) -> f64 {
    PptClosedForm::new(fp, df, s_eq, t_eq).ppt()
}

/// Determinant `ρ11ρ44 - |ρ23|²` of the partial-transpose block that carries
/// the family's negative eigenvalue. X-shaped input only.
pub fn ppt_scalar_oracle(m: &DensityMatrix) -> Result<f64> {
    if !m.is_x_shaped(X_TOL) {
        return Err(Error::UnsupportedStructure(
            "PPT block determinant needs an X-shaped matrix; use pt_spectrum".into(),
        ));
    }
    Ok(m.get(0, 0).re * m.get(3, 3).re - m.get(1, 2).norm_sqr())
}

/// Evolved pure-family density matrix at time `t`.
pub fn evolved_family(fp: FamilyParam, cp: &ChannelParams, t: f64, mode: ChannelMode) -> Result<DensityMatrix> {
    let s = apply_channel(&generic_pure_state(fp), cp, t, mode)?;
    Ok(bloch_to_density(&s))
}

fn min_pt_eigenvalue(fp: FamilyParam, cp: &ChannelParams, t: f64) -> f64 {
    evolved_family(fp, cp, t, ChannelMode::Physical)
        .and_then(|m| pt_spectrum(&m))
        .map(|s| s.min())
        .unwrap_or(f64::NAN)
}

/// First time the evolved family becomes separable.
///
/// `Some(0.0)` when the input is already separable, `None` when the state is
/// still entangled at `t_max`.
pub fn entangled_time(fp: FamilyParam, cp: &ChannelParams, t_max: f64) -> Result<Option<f64>> {
    if t_max.is_nan() || t_max <= 0.0 {
        return Err(Error::Domain(format!("t_max = {t_max} must be positive")));
    }
    let f = |t: f64| min_pt_eigenvalue(fp, cp, t);
    Ok(match first_nonnegative(f, t_max, SCAN_STEPS, ROOT_TOL)? {
        Crossing::AtStart => Some(0.0),
        Crossing::At(t) => Some(t),
        Crossing::Beyond(_) => None,
    })
}

/// How a DOE curve approaches zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DecayClass {
    /// DOE drops below [`DEATH_TOL`] at `t` and stays there.
    SuddenDeath {
        t: f64,
    },
    Asymptotic,
    /// The curve never goes below [`DECAYED_TOL`] or revives after dying.
    Inconclusive,
}

pub const DEATH_TOL: f64 = 1e-9;
pub const DECAYED_TOL: f64 = 1e-6;

/// Classifies `(t, DOE)` samples, ordered by time.
pub fn classify_decay(rows: &[(f64, f64)]) -> DecayClass {
    let Some(&(_, last)) = rows.last() else {
        return DecayClass::Inconclusive;
    };
    if last < DEATH_TOL {
        // start of the final run below threshold
        let mut start = rows.len() - 1;
        while start > 0 && rows[start - 1].1 < DEATH_TOL {
            start -= 1;
        }
        return DecayClass::SuddenDeath { t: rows[start].0 };
    }
    if last < DECAYED_TOL && rows.iter().all(|&(_, v)| v > DEATH_TOL) {
        return DecayClass::Asymptotic;
    }
    DecayClass::Inconclusive
}

/// Wootters concurrence of an X-shaped state:
/// `2·max(0, |ρ23| - sqrt(ρ11ρ44), |ρ14| - sqrt(ρ22ρ33))`.
pub fn x_concurrence(m: &DensityMatrix) -> Result<f64> {
    if !m.is_x_shaped(X_TOL) {
        return Err(Error::UnsupportedStructure(
            "concurrence is only provided for X states".into(),
        ));
    }
    let d = |i: usize| m.get(i, i).re.max(0.0);
    let c1 = m.get(1, 2).norm() - (d(0) * d(3)).sqrt();
    let c2 = m.get(0, 3).norm() - (d(1) * d(2)).sqrt();
    Ok(2.0 * c1.max(c2).max(0.0))
}

/// Separable according to the partial-transpose spectrum.
pub fn is_separable(m: &DensityMatrix) -> Result<bool> {
    Ok(pt_spectrum(m)?.min() >= -PHYSICAL_TOL)
}
