use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::error::Result;

use super::matrix::{C64, ComplexMatrix, UnitaryOperator};
use super::state::{DensityOperator, PureState};

/// Independent standard complex Gaussian.
fn gaussian(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Haar-distributed pure state: a vector of independent standard complex
/// Gaussians, normalized. Deterministic given the generator state.
pub fn haar_pure_state(dim: usize, rng: &mut impl Rng) -> PureState {
    assert!(dim >= 2, "haar_pure_state requires dim >= 2");
    loop {
        let amps: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-100 {
            continue; // astronomically unlikely degenerate draw
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        return PureState::new(amps, 1e-9).expect("normalized by construction");
    }
}

/// Haar-distributed unitary via QR of a complex Ginibre matrix with the
/// phase convention fixed by the R diagonal.
pub fn haar_unitary(dim: usize, rng: &mut impl Rng) -> UnitaryOperator {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    // modified Gram-Schmidt on columns
    let mut cols: Vec<Vec<C64>> = (0..dim)
        .map(|j| (0..dim).map(|i| g.get(i, j)).collect())
        .collect();
    for j in 0..dim {
        for k in 0..j {
            let proj: C64 = (0..dim).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            for i in 0..dim {
                let v = cols[k][i];
                cols[j][i] -= proj * v;
            }
        }
        let norm: f64 = cols[j].iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for v in &mut cols[j] {
            *v /= norm;
        }
        // fix the phase so the distribution is exactly Haar
        let diag: C64 = (0..dim).map(|i| cols[j][i].conj() * g.get(i, j)).sum();
        let phase = diag / diag.norm();
        for v in &mut cols[j] {
            *v *= phase.conj();
        }
    }
    let m = ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i]);
    UnitaryOperator::new(m, 1e-9).expect("orthonormalized by construction")
}

/// Random density operator from the Hilbert-Schmidt measure: G G† / tr(G G†).
pub fn random_density(dim: usize, rng: &mut impl Rng) -> DensityOperator {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let w = g.matmul(&g.dagger());
    let tr = w.trace().re;
    DensityOperator::clamped(w.scale_re(1.0 / tr), 1e-9).expect("Wishart states are PSD")
}

/// Generator for trial `index` of a seeded sweep. Trials get independent
/// ChaCha streams so results do not depend on evaluation order.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Convenience wrapper used by everything that takes a bare seed.
pub fn seeded_rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

#[allow(unused)]
pub(crate) fn _assert_result_free(_: Result<()>) {}
