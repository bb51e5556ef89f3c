//! Two-qubit states in Bloch form (`a`, `b`, correlation tensor `c`) and as
//! 4×4 density matrices in the basis `|00>, |01>, |10>, |11>`.
//!
//! The first qubit (Alice, Pauli operators σ) is the most significant index.
//! Bloch data is not required to describe a positive operator; use
//! [`validate_state`] to check physicality.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eigenvalues, ComplexMatrix, JACOBI_TOL};

pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];

/// Tolerance on hermiticity and trace when inverting a density matrix.
pub const INPUT_TOL: f64 = 1e-9;

/// Smallest eigenvalue still considered non-negative.
pub const PHYSICAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Qubit {
    A,
    B,
}

/// Fifteen-parameter description of a two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BlochState {
    pub a: Vec3,
    pub b: Vec3,
    pub c: Mat3,
}

impl BlochState {
    pub fn new(a: Vec3, b: Vec3, c: Mat3) -> Self {
        Self { a, b, c }
    }

    /// Bloch data of the maximally mixed state.
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..3 {
            d = d.max((self.a[i] - other.a[i]).abs());
            d = d.max((self.b[i] - other.b[i]).abs());
            for j in 0..3 {
                d = d.max((self.c[i][j] - other.c[i][j]).abs());
            }
        }
        d
    }

    /// True when `a`, `b` lie on the z axis and `c` is diagonal, which is the
    /// shape of the generic pure family and everything it evolves into.
    pub fn is_axial(&self) -> bool {
        self.a[0] == 0.0
            && self.a[1] == 0.0
            && self.b[0] == 0.0
            && self.b[1] == 0.0
            && (0..3).all(|i| (0..3).all(|j| i == j || self.c[i][j] == 0.0))
    }
}

/// Parameter of the generic pure family; `q = sqrt(1 - p²)` is derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FamilyParam(f64);

impl FamilyParam {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("family parameter p = {p} is outside [0, 1]")));
        }
        Ok(Self(p))
    }

    pub fn p(self) -> f64 {
        self.0
    }

    pub fn q(self) -> f64 {
        (1.0 - self.0 * self.0).max(0.0).sqrt()
    }
}

impl TryFrom<f64> for FamilyParam {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        Self::new(p)
    }
}

impl From<FamilyParam> for f64 {
    fn from(fp: FamilyParam) -> f64 {
        fp.0
    }
}

/// `a = (0,0,p)`, `b = (0,0,-p)`, `c = diag(-q,-q,-1)`.
///
/// `p = 0` is the singlet, `p = 1` the product state `|01>`.
pub fn generic_pure_state(fp: FamilyParam) -> BlochState {
    let p = fp.p();
    let q = fp.q();
    BlochState {
        a: [0.0, 0.0, p],
        b: [0.0, 0.0, -p],
        c: [[-q, 0.0, 0.0], [0.0, -q, 0.0], [0.0, 0.0, -1.0]],
    }
}

/// A 4×4 complex matrix read as a two-qubit operator. Hermiticity, trace and
/// positivity are not enforced here.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.rows() != 4 || m.cols() != 4 {
            return Err(Error::InvalidInput(format!(
                "two-qubit operator must be 4x4, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(Self(m))
    }

    pub fn maximally_mixed() -> Self {
        Self(ComplexMatrix::identity(4).scale_real(0.25))
    }

    /// Projector onto a (normalized) state vector.
    pub fn pure(amplitudes: [Complex64; 4]) -> Self {
        Self(ComplexMatrix::projector(&amplitudes))
    }

    /// `(|01> - |10>)/√2`.
    pub fn singlet() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::pure([
            Complex64::new(0.0, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(-h, 0.0),
            Complex64::new(0.0, 0.0),
        ])
    }

    /// Computational basis projector `|ij><ij|` with `index = 2i + j`.
    pub fn basis(index: usize) -> Self {
        let mut d = [0.0; 4];
        d[index] = 1.0;
        Self(ComplexMatrix::diag(&d))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// Entry `(i, j)`, zero-based.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.max_abs_diff(&other.0)
    }

    pub fn scale_real(&self, k: f64) -> Self {
        Self(self.0.scale_real(k))
    }

    /// Purity `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        (&self.0 * &self.0).trace().re
    }

    /// Only diagonal and anti-diagonal entries are non-zero (within `tol`).
    pub fn is_x_shaped(&self, tol: f64) -> bool {
        (0..4).all(|i| (0..4).all(|j| i == j || i + j == 3 || self.0[(i, j)].norm() < tol))
    }
}

fn pauli(k: usize) -> ComplexMatrix {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let data = match k {
        0 => vec![one, z, z, one],
        1 => vec![z, one, one, z],
        2 => vec![z, -i, i, z],
        3 => vec![one, z, z, -one],
        _ => unreachable!("Pauli index {k}"),
    };
    ComplexMatrix::from_rows(2, 2, data).expect("2x2")
}

/// `σ_μ ⊗ τ_ν` for μ, ν ∈ {0,1,2,3}, index 0 being the identity.
fn pauli_products() -> &'static [[ComplexMatrix; 4]; 4] {
    static TABLE: OnceLock<[[ComplexMatrix; 4]; 4]> = OnceLock::new();
    TABLE.get_or_init(|| {
        std::array::from_fn(|mu| std::array::from_fn(|nu| crate::numerics::tensor_product(&pauli(mu), &pauli(nu))))
    })
}

/// Single-qubit Pauli matrix; index 0 is the identity.
pub fn pauli_matrix(k: usize) -> ComplexMatrix {
    pauli(k)
}

/// `ρ = ¼(I + Σ aᵢ σᵢ⊗I + Σ bⱼ I⊗τⱼ + Σ cᵢⱼ σᵢ⊗τⱼ)`.
pub fn bloch_to_density(s: &BlochState) -> DensityMatrix {
    let table = pauli_products();
    let mut rho = table[0][0].clone();
    let mut acc = |coef: f64, op: &ComplexMatrix| {
        if coef != 0.0 {
            rho = &rho + &op.scale_real(coef);
        }
    };
    for i in 0..3 {
        acc(s.a[i], &table[i + 1][0]);
        acc(s.b[i], &table[0][i + 1]);
        for j in 0..3 {
            acc(s.c[i][j], &table[i + 1][j + 1]);
        }
    }
    DensityMatrix(rho.scale_real(0.25))
}

/// Inverse of [`bloch_to_density`] through Pauli expectation values.
pub fn density_to_bloch(m: &DensityMatrix) -> Result<BlochState> {
    let herm = m.0.hermiticity_deviation();
    if herm > INPUT_TOL {
        return Err(Error::InvalidInput(format!(
            "density matrix is not Hermitian (max |m - m†| = {herm:e})"
        )));
    }
    let tr = m.trace();
    if (tr - 1.0).norm() > INPUT_TOL {
        return Err(Error::InvalidInput(format!("density matrix trace is {tr}, expected 1")));
    }
    Ok(pauli_expectations(m))
}

fn pauli_expectations(m: &DensityMatrix) -> BlochState {
    let table = pauli_products();
    // Tr(m P) for Hermitian P; the imaginary part vanishes for Hermitian m
    let expect = |p: &ComplexMatrix| -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..4 {
            for k in 0..4 {
                acc += m.0[(i, k)] * p[(k, i)];
            }
        }
        acc.re
    };
    let mut s = BlochState::zero();
    for i in 0..3 {
        s.a[i] = expect(&table[i + 1][0]);
        s.b[i] = expect(&table[0][i + 1]);
        for j in 0..3 {
            s.c[i][j] = expect(&table[i + 1][j + 1]);
        }
    }
    s
}

/// Bloch vector of one qubit's reduced state.
pub fn reduced_qubit(s: &BlochState, side: Qubit) -> Vec3 {
    match side {
        Qubit::A => s.a,
        Qubit::B => s.b,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StateDiagnostics {
    pub min_eigenvalue: f64,
    pub trace_deviation: f64,
    pub hermiticity_deviation: f64,
    pub physical: bool,
}

/// Physicality report. Never fails: non-Hermitian input is measured through
/// its Hermitian part and a solver failure yields a NaN minimum eigenvalue.
pub fn validate_state(m: &DensityMatrix) -> StateDiagnostics {
    let hermiticity_deviation = m.0.hermiticity_deviation();
    let trace_deviation = (m.trace() - 1.0).norm();
    let hermitian_part = (&m.0 + &m.0.adjoint()).scale_real(0.5);
    let min_eigenvalue = hermitian_eigenvalues(&hermitian_part, JACOBI_TOL)
        .map(|ev| ev[0])
        .unwrap_or(f64::NAN);
    StateDiagnostics {
        min_eigenvalue,
        trace_deviation,
        hermiticity_deviation,
        physical: min_eigenvalue >= -PHYSICAL_TOL && trace_deviation <= INPUT_TOL && hermiticity_deviation <= INPUT_TOL,
    }
}
