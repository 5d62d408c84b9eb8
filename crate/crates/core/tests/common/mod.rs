#![allow(dead_code)]

use std::sync::Arc;

use fcurve_core::noise::{stream, Domain};
use fcurve_core::Space;
use rand_chacha::ChaCha8Rng;

pub fn rng(i: u64) -> ChaCha8Rng {
    stream(20_241, i, 0, Domain::Test)
}

pub fn reduced() -> Arc<Space> {
    Space::with(1.0, 5.0, 0.01).unwrap()
}

/// Composite Simpson on `[a, b]` with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
