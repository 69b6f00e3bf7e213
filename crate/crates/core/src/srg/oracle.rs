use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::lti::ComplexMatrix;

/// Samples the SRG of `a` directly from its definition.
///
/// Each draw takes a uniformly distributed unit vector `u` and emits
/// `‖Au‖·e^{±j∠(u, Au)}` (both signs). Draws with `Au = 0` are skipped.
pub fn srg_sample_oracle(a: &ComplexMatrix, n_samples: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = a.dim();
    let mut out = Vec::with_capacity(2 * n_samples);
    for _ in 0..n_samples {
        let u = DVector::from_fn(n, |_, _| {
            Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
        });
        let nu = u.norm();
        if nu == 0.0 {
            continue;
        }
        let u = u / Complex64::new(nu, 0.0);
        let au = a.inner() * &u;
        let gain = au.norm();
        if gain == 0.0 {
            continue;
        }
        // Angle in the real inner product: atan2 of the orthogonal and parallel parts.
        let along = u.dotc(&au).re;
        let across = (&au - &u * Complex64::new(along, 0.0)).norm();
        let z = Complex64::from_polar(gain, across.atan2(along));
        out.push(z);
        out.push(z.conj());
    }
    out
}
