//! Helpers shared by unit tests across modules.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{Grid, GridFunction, Spectrum};

/// Deterministic random function: independent complex Gaussian coefficients
/// on every lattice bin except the unpaired Nyquist rows.
pub(crate) fn random_band_limited(grid: &Grid, seed: u64) -> GridFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spec = Spectrum::from_coef(
        grid,
        ndarray::ArrayD::default(ndarray::IxDyn(grid.n())),
    )
    .expect("matching shape");
    let n: Vec<usize> = grid.n().to_vec();
    for (idx, v) in spec.coef_mut().indexed_iter_mut() {
        if (0..n.len()).any(|ax| idx[ax] == n[ax] / 2) {
            continue;
        }
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        *v = Complex64::new(re, im);
    }
    spec.idft()
}
