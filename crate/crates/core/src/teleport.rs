//! Teleportation through an evolved two-qubit channel: usefulness criteria,
//! a density-matrix simulation of the standard protocol, the closed-form
//! coefficients of Bob's state and the time window in which the channel
//! beats classical transmission.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::channel::{decay_factors, ChannelMode, ChannelParams, DecayFactors};
use crate::entanglement::{evolved_family, ROOT_TOL, SCAN_STEPS};
use crate::error::{Error, Result};
use crate::numerics::{
    first_nonnegative, partial_trace, symmetric3_singular_values, tensor_product, ComplexMatrix, Crossing, Subsystem,
};
use crate::qstate::{density_to_bloch, BlochState, DensityMatrix, FamilyParam, INPUT_TOL};

/// Below this the conditional state is undefined.
pub const MIN_PROBABILITY: f64 = 1e-14;

/// `|Ψ> = λ1|0> + λ2|1>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputQubit {
    lambda1: Complex64,
    lambda2: Complex64,
}

impl InputQubit {
    pub fn new(lambda1: Complex64, lambda2: Complex64) -> Result<Self> {
        let norm = lambda1.norm_sqr() + lambda2.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("|λ1|² + |λ2|² = {norm}, expected 1")));
        }
        Ok(Self { lambda1, lambda2 })
    }

    /// Real amplitudes with `λ2 = sqrt(1 - λ1²) ≥ 0`.
    pub fn from_real(lambda1: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&lambda1) {
            return Err(Error::Domain(format!("λ1 = {lambda1} is outside [-1, 1]")));
        }
        let lambda2 = (1.0 - lambda1 * lambda1).max(0.0).sqrt();
        Ok(Self {
            lambda1: Complex64::new(lambda1, 0.0),
            lambda2: Complex64::new(lambda2, 0.0),
        })
    }

    pub fn lambda1(&self) -> Complex64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> Complex64 {
        self.lambda2
    }

    pub fn ket(&self) -> [Complex64; 2] {
        [self.lambda1, self.lambda2]
    }

    pub fn density(&self) -> ComplexMatrix {
        ComplexMatrix::projector(&self.ket())
    }

    /// `<Ψ|ρ|Ψ>` for a 2×2 operator.
    pub fn overlap(&self, rho: &ComplexMatrix) -> f64 {
        let k = self.ket();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                acc += k[i].conj() * rho[(i, j)] * k[j];
            }
        }
        acc.re
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    pub fn vector(self) -> [Complex64; 4] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (z, p, m) = (
            Complex64::new(0.0, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(-h, 0.0),
        );
        match self {
            BellState::PhiPlus => [p, z, z, p],
            BellState::PhiMinus => [p, z, z, m],
            BellState::PsiPlus => [z, p, p, z],
            BellState::PsiMinus => [z, p, m, z],
        }
    }
}

impl fmt::Display for BellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BellState::PhiPlus => "phi+",
            BellState::PhiMinus => "phi-",
            BellState::PsiPlus => "psi+",
            BellState::PsiMinus => "psi-",
        })
    }
}

impl FromStr for BellState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BellState::ALL
            .into_iter()
            .find(|b| b.to_string() == s)
            .ok_or_else(|| Error::Usage(format!("unknown Bell state '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> ComplexMatrix {
        crate::qstate::pauli_matrix(match self {
            Pauli::I => 0,
            Pauli::X => 1,
            Pauli::Y => 2,
            Pauli::Z => 3,
        })
    }
}

/// Bob's correction in the standard protocol over a singlet channel, the
/// `p = 0` member of the family.
pub fn standard_correction(outcome: BellState) -> Pauli {
    match outcome {
        BellState::PsiMinus => Pauli::I,
        BellState::PsiPlus => Pauli::Z,
        BellState::PhiMinus => Pauli::X,
        BellState::PhiPlus => Pauli::Y,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeleportOutcome {
    /// Normalized, corrected 2×2 state of Bob's qubit.
    pub bob_state: ComplexMatrix,
    pub probability: f64,
    pub fidelity: f64,
}

/// Simulates one branch of the protocol. Qubit 0 carries `input`, qubits 1
/// and 2 the channel (Alice's half first). Alice projects qubits 0 and 1 on
/// `outcome`; Bob applies `correction` to the normalized remainder.
pub fn teleport_protocol(
    input: &InputQubit,
    channel: &DensityMatrix,
    outcome: BellState,
    correction: Pauli,
) -> Result<TeleportOutcome> {
    check_channel(channel)?;
    let total = tensor_product(&input.density(), channel.matrix());
    let proj = tensor_product(
        &ComplexMatrix::projector(&outcome.vector()),
        &ComplexMatrix::identity(2),
    );
    let branch = &(&proj * &total) * &proj;
    let probability = branch.trace().re;
    if probability < MIN_PROBABILITY {
        return Err(Error::ZeroProbability(probability));
    }
    let bob = partial_trace(&branch, 4, 2, Subsystem::First)?.scale_real(1.0 / probability);
    let bob_state = bob.conjugate_by(&correction.matrix());
    let fidelity = input.overlap(&bob_state);
    Ok(TeleportOutcome {
        bob_state,
        probability,
        fidelity,
    })
}

fn check_channel(channel: &DensityMatrix) -> Result<()> {
    let herm = channel.matrix().hermiticity_deviation();
    let tr = channel.trace();
    if herm > INPUT_TOL || (tr - 1.0).norm() > INPUT_TOL {
        return Err(Error::InvalidInput(format!(
            "channel is not a density matrix (hermiticity deviation {herm:e}, trace {tr})"
        )));
    }
    Ok(())
}

/// The correction with the highest fidelity for one outcome. Ties keep the
/// first in `I, X, Y, Z` order.
pub fn best_correction(
    input: &InputQubit,
    channel: &DensityMatrix,
    outcome: BellState,
) -> Result<(Pauli, TeleportOutcome)> {
    let mut best: Option<(Pauli, TeleportOutcome)> = None;
    for pauli in Pauli::ALL {
        let r = teleport_protocol(input, channel, outcome, pauli)?;
        if best.as_ref().is_none_or(|(_, b)| r.fidelity > b.fidelity) {
            best = Some((pauli, r));
        }
    }
    Ok(best.expect("four corrections"))
}

/// Sum of the singular values of the correlation tensor, `tr sqrt(CᵀC)`.
/// The state is useful for teleportation when this exceeds one.
pub fn horodecki_measure(s: &BlochState) -> f64 {
    symmetric3_singular_values(&s.c).iter().sum()
}

/// `2q²β1²β2² + [Γ + p(γ1(1-γ2)t_eq - γ2(1-γ1)s_eq) - γ1γ2]²`; useful when
/// above one.
pub fn telp_paper(fp: FamilyParam, df: &DecayFactors, s_eq: f64, t_eq: f64) -> f64 {
    let (p, q) = (fp.p(), fp.q());
    let DecayFactors {
        gamma1: g1,
        beta1: b1,
        gamma2: g2,
        beta2: b2,
    } = *df;
    let gamma = (1.0 - g1) * (1.0 - g2) * s_eq * t_eq;
    let inner = gamma + p * (g1 * (1.0 - g2) * t_eq - g2 * (1.0 - g1) * s_eq) - g1 * g2;
    2.0 * q * q * b1 * b1 * b2 * b2 + inner * inner
}

/// Coefficients of Bob's (unnormalized) operator
/// `η1|0><0| + η2|0><1| + η3|1><0| + η4|1><1|` after a `φ+` outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BobCoefficients {
    pub eta1: Complex64,
    pub eta2: Complex64,
    pub eta3: Complex64,
    pub eta4: Complex64,
}

impl BobCoefficients {
    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_rows(2, 2, vec![self.eta1, self.eta2, self.eta3, self.eta4]).expect("2x2")
    }
}

/// The printed η expressions, read off `Ã3, B̃3, C̃11, C̃22, C̃33`.
pub fn bob_coefficients_paper(input: &InputQubit, evolved: &BlochState) -> BobCoefficients {
    let (l1, l2) = (input.lambda1, input.lambda2);
    let (w1, w2) = (l1.norm_sqr(), l2.norm_sqr());
    let a3 = evolved.a[2];
    let b3 = evolved.b[2];
    let (c11, c22, c33) = (evolved.c[0][0], evolved.c[1][1], evolved.c[2][2]);
    let x = l1 * l2.conj();
    let y = l1.conj() * l2;
    BobCoefficients {
        eta1: Complex64::new(0.5 * (w1 * (1.0 + a3 - b3 - c33) + w2 * (1.0 - a3 + b3 + c33)), 0.0),
        eta2: (x * (c11 - c22) + y * (c11 + c22)) * 0.5,
        eta3: (x * (c11 + c22) + y * (c11 - c22)) * 0.5,
        eta4: Complex64::new(0.5 * (w1 * (1.0 + a3 + b3 + c33) + w2 * (1.0 - a3 + b3 - c33)), 0.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FidelityForm {
    /// The bilinear form as printed.
    Printed,
    /// Divided by `η1 + η4`.
    Normalized,
}

/// `F = |λ1|²η1 + λ1λ2*η2 + λ1*λ2η3 + |λ2|²η4`.
pub fn fidelity_paper(input: &InputQubit, bc: &BobCoefficients, form: FidelityForm) -> Result<f64> {
    let (l1, l2) = (input.lambda1, input.lambda2);
    let f = l1.norm_sqr() * bc.eta1 + l1 * l2.conj() * bc.eta2 + l1.conj() * l2 * bc.eta3 + l2.norm_sqr() * bc.eta4;
    match form {
        FidelityForm::Printed => Ok(f.re),
        FidelityForm::Normalized => {
            let norm = (bc.eta1 + bc.eta4).re;
            if norm.abs() < 1e-14 {
                return Err(Error::Degenerate(format!("η1 + η4 = {norm:e}")));
            }
            Ok(f.re / norm)
        }
    }
}

/// Interval `[0, t*]` in which a criterion holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "t", rename_all = "kebab-case")]
pub enum Window {
    Empty,
    Until(f64),
    /// Still useful at the scan horizon.
    OpenAt(f64),
}

impl Window {
    /// Right end of the interval (the horizon for open windows).
    pub fn end(&self) -> f64 {
        match *self {
            Window::Empty => 0.0,
            Window::Until(t) | Window::OpenAt(t) => t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TeleportWindow {
    /// From the closed-form inequality `Telp > 1`.
    pub telp: Window,
    /// From `tr sqrt(CᵀC) > 1` on the evolved correlation tensor.
    pub horodecki: Window,
}

fn window_from<F: Fn(f64) -> f64>(margin: F, t_max: f64) -> Result<Window> {
    Ok(match first_nonnegative(margin, t_max, SCAN_STEPS, ROOT_TOL)? {
        Crossing::AtStart => Window::Empty,
        Crossing::At(t) => Window::Until(t),
        Crossing::Beyond(t) => Window::OpenAt(t),
    })
}

/// Time interval in which the evolved family is useful for teleportation.
pub fn teleportation_window(fp: FamilyParam, cp: &ChannelParams, t_max: f64) -> Result<TeleportWindow> {
    if t_max.is_nan() || t_max <= 0.0 {
        return Err(Error::Domain(format!("t_max = {t_max} must be positive")));
    }
    let telp = window_from(
        |t| match decay_factors(cp, t) {
            Ok(df) => 1.0 - telp_paper(fp, &df, cp.s_eq(), cp.t_eq()),
            Err(_) => f64::NAN,
        },
        t_max,
    )?;
    let horodecki = window_from(
        |t| {
            evolved_family(fp, cp, t, ChannelMode::Physical)
                .and_then(|m| density_to_bloch(&m))
                .map(|s| 1.0 - horodecki_measure(&s))
                .unwrap_or(f64::NAN)
        },
        t_max,
    )?;
    Ok(TeleportWindow { telp, horodecki })
}
