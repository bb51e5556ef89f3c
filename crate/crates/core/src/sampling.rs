//! Seeded random inputs for the validation suite and tests.

use num_complex::Complex64;
use rand::Rng;

use crate::channel::ChannelParams;
use crate::numerics::ComplexMatrix;
use crate::qstate::{BlochState, DensityMatrix};

/// Bloch data with every entry uniform in `[-1, 1]`; usually unphysical.
pub fn bloch_state<R: Rng>(rng: &mut R) -> BlochState {
    let mut u = || rng.gen_range(-1.0..=1.0);
    BlochState {
        a: [u(), u(), u()],
        b: [u(), u(), u()],
        c: [[u(), u(), u()], [u(), u(), u()], [u(), u(), u()]],
    }
}

/// Relaxation times in `[0.1, 5]`, equilibria in `[-1, 1]`.
pub fn channel_params<R: Rng>(rng: &mut R) -> ChannelParams {
    let mut time = || rng.gen_range(0.1..=5.0);
    let (t1a, t2a, t1b, t2b) = (time(), time(), time(), time());
    ChannelParams::new(t1a, t2a, t1b, t2b, rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
        .expect("sampled inside the domain")
}

/// Random positive X-shaped density matrix with complex coherences.
pub fn x_state<R: Rng>(rng: &mut R) -> DensityMatrix {
    let mut d: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.0..1.0));
    let total: f64 = d.iter().sum();
    d.iter_mut().for_each(|x| *x /= total);
    let mut m = ComplexMatrix::diag(&d);
    for (i, j) in [(0, 3), (1, 2)] {
        let r = (d[i] * d[j]).sqrt() * rng.gen_range(0.0..=1.0);
        let z = Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU));
        m[(i, j)] = z;
        m[(j, i)] = z.conj();
    }
    DensityMatrix::new(m).expect("4x4")
}

/// Full-rank mixed state `G G† / Tr(G G†)`, entries of `G` uniform in the
/// complex unit square.
pub fn mixed_state<R: Rng>(rng: &mut R) -> DensityMatrix {
    let data = (0..16)
        .map(|_| Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
        .collect();
    let g = ComplexMatrix::from_rows(4, 4, data).expect("4x4");
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    DensityMatrix::new(gg.scale_real(1.0 / tr)).expect("4x4")
}
