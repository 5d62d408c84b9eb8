use rand::Rng;
use rand_distr::StandardNormal;

use super::rng::{stream, Domain};
use crate::error::{Error, Result};

fn check(mu: f64, lambda: f64) -> Result<()> {
    if !(mu.is_finite() && mu > 0.0 && lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "inverse Gaussian needs mu > 0 and lambda > 0, got mu={mu}, lambda={lambda}"
        )));
    }
    Ok(())
}

/// One inverse-Gaussian draw (mean `mu`, shape `lambda`) by the
/// Michael-Schucany-Haas transform. The smaller root is written as
/// `4 mu^2 lambda y / (mu y + s)^2`, which does not cancel when
/// `lambda` is tiny relative to `mu`.
pub fn sample_ig_one<R: Rng + ?Sized>(mu: f64, lambda: f64, rng: &mut R) -> f64 {
    let v: f64 = rng.sample(StandardNormal);
    let y = v * v;
    let x = if y == 0.0 {
        mu
    } else {
        let s = (4.0 * mu * lambda * y + mu * mu * y * y).sqrt();
        4.0 * mu * mu * lambda * y / (mu * y + s).powi(2)
    };
    let u: f64 = rng.random();
    if u * (mu + x) <= mu {
        x
    } else {
        mu * mu / x
    }
}

pub fn sample_ig(mu: f64, lambda: f64, count: usize, seed: u64) -> Result<Vec<f64>> {
    check(mu, lambda)?;
    let mut rng = stream(seed, 0, 0, Domain::Batch);
    Ok((0..count).map(|_| sample_ig_one(mu, lambda, &mut rng)).collect())
}

pub(crate) fn validate(mu: f64, lambda: f64) -> Result<()> {
    check(mu, lambda)
}
