//! Haar-distributed pure states.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::qmath::matrix::PureState;

/// Draw a Haar-random pure state: fill the vector with independent standard
/// complex Gaussians and normalize. Unitary invariance of the Gaussian makes
/// the normalized vector uniform on the unit sphere.
pub fn random_haar_pure<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    assert!(dim >= 1, "state dimension must be at least 1");
    loop {
        let v = DVector::from_iterator(
            dim,
            (0..dim).map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im)
            }),
        );
        // A zero draw has probability zero; retry defensively.
        if let Ok(state) = PureState::normalized(v) {
            return state;
        }
    }
}
