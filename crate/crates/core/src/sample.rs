//! Random curves for property checks and examples.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::space::{Curve, Space};

/// Value at zero ~ N(0,1); derivative a few damped oscillations plus
/// white noise, scaled by `w^(-1/2)` so every cell carries comparable
/// weight in the norm.
pub fn random_curve<R: Rng + ?Sized>(space: &Arc<Space>, rng: &mut R) -> Curve {
    let f0: f64 = rng.sample(StandardNormal);
    let modes: Vec<(f64, f64, f64)> = (0..4)
        .map(|_| {
            let a: f64 = rng.sample(StandardNormal);
            let freq = rng.random_range(0.1..6.0);
            let phase = rng.random_range(0.0..2.0 * PI);
            (a, freq, phase)
        })
        .collect();
    let noise = rng.random_range(0.0..1.0);
    let g = *space.grid();
    let inv = space.inv_w_mid();
    let deriv = (0..g.cells())
        .map(|i| {
            let x = g.mid(i);
            let smooth: f64 = modes.iter().map(|(a, f, p)| a * (f * x + p).sin()).sum();
            let z: f64 = rng.sample(StandardNormal);
            (smooth + noise * z) * inv[i].sqrt()
        })
        .collect();
    Curve::new(space, f0, deriv).expect("length matches grid")
}

/// A positive forward curve: level around 50 with seasonality and a slope.
pub fn random_price_curve<R: Rng + ?Sized>(space: &Arc<Space>, rng: &mut R) -> Curve {
    let level = rng.random_range(30.0..70.0);
    let slope = rng.random_range(-2.0..2.0);
    let season = rng.random_range(0.0..8.0);
    let phase = rng.random_range(0.0..2.0 * PI);
    let wiggle = rng.random_range(0.0..1.0);
    let g = *space.grid();
    let mut walk = 0.0;
    let vals: Vec<f64> = (0..g.nodes())
        .map(|i| {
            let x = g.node(i);
            let z: f64 = rng.sample(StandardNormal);
            walk += wiggle * z * g.dx().sqrt();
            level + slope * x + season * (2.0 * PI * x + phase).sin() + walk
        })
        .collect();
    Curve::from_node_values(space, &vals).expect("length matches grid")
}
