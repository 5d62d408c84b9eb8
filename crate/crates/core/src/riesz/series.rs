use num_complex::Complex64;

use super::basis::BiorthogonalSystem;
use crate::dynamics::{ForwardSurface, ModelSpec};
use crate::error::{Error, Result};
use crate::noise::NoiseIncrements;
use crate::space::Curve;

/// Checks that `v` coincides with its expansion on `[0, upto]`.
fn check_in_span(sys: &BiorthogonalSystem, v: &Curve, upto: f64, what: &str) -> Result<()> {
    let p = sys.project(v)?;
    let cells = v.space().grid().steps_for(upto.min(v.space().x_max()))?;
    let a = v.node_values();
    let b = p.node_values();
    let scale = a[..=cells].iter().fold(1e-300f64, |m, x| m.max(x.abs()));
    let err = a[..=cells]
        .iter()
        .zip(&b[..=cells])
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    if err > 1e-6 * scale.max(1e-12) {
        return Err(Error::Representation(format!(
            "{what} lies outside the truncated span (deviation {err:e})"
        )));
    }
    Ok(())
}

/// Rebuilds the forward curves of a simulated path from the complex OU
/// coordinates `c_n(t) = <f(t), g_n*>`:
/// `c_n(t_{k+1}) = e^{lambda_n dt} (c_n(t_k) + <beta, g_n*> dt + <Psi dL_k, g_n*>)`
/// and `f(t) = S(t) + 2 sum_{n>=1} Re(c_n(t) g_n)`.
/// The spot channel is read from the surface. Valid on `[0, x0]`.
pub fn ou_series_reconstruct(
    sys: &BiorthogonalSystem,
    model: &ModelSpec,
    surface: &ForwardSurface,
    increments: &NoiseIncrements,
) -> Result<ForwardSurface> {
    let sp = sys.space();
    sp.check(model.f0.space())?;
    let dt = increments.dt;
    sp.grid().steps_for(dt)?;
    let steps = surface.times.len().saturating_sub(1);
    if increments.steps < steps {
        return Err(Error::Shape(format!(
            "{} increments for {steps} steps",
            increments.steps
        )));
    }
    let horizon = steps as f64 * dt;
    let reach = sys.spec().x0 + horizon;
    if reach > sp.x_max() + 1e-12 {
        return Err(Error::Domain(format!(
            "x0 + horizon = {reach} exceeds the grid end {}",
            sp.x_max()
        )));
    }
    let (_, op) = model.deterministic_psi(0.0)?;
    let images = model
        .driver
        .covariance
        .factors()
        .iter()
        .map(|g| op.apply(g))
        .collect::<Result<Vec<_>>>()?;
    check_in_span(sys, &model.f0, reach, "initial curve")?;
    for (i, img) in images.iter().enumerate() {
        check_in_span(sys, img, reach, &format!("volatility image of factor {i}"))?;
    }
    if let Some(b) = model.beta.at(0.0) {
        check_in_span(sys, &b, reach, "drift")?;
    }

    let nm = sys.n_max();
    let img_coef: Vec<Vec<Complex64>> = images
        .iter()
        .map(|img| (1..=nm).map(|n| sys.coefficient(n, img)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let growth: Vec<Complex64> = (1..=nm).map(|n| (sys.eigenvalue(n) * dt).exp()).collect();
    let mut c: Vec<Complex64> = (1..=nm).map(|n| sys.coefficient(n, &model.f0)).collect::<Result<_>>()?;

    let mut curves = Vec::with_capacity(steps + 1);
    curves.push(sys.synthesize(surface.curves[0].f0(), &c));
    for k in 0..steps {
        let t = k as f64 * dt;
        let (scale, _) = model.deterministic_psi(t)?;
        let beta_c: Option<Vec<Complex64>> = match model.beta.at(t) {
            Some(b) => Some((1..=nm).map(|n| sys.coefficient(n, &b)).collect::<Result<_>>()?),
            None => None,
        };
        let dl = increments.step(k);
        for i in 0..nm as usize {
            let mut v = c[i];
            if let Some(bc) = &beta_c {
                v += bc[i] * dt;
            }
            for (a, ic) in dl.iter().zip(&img_coef) {
                v += ic[i] * (scale * a);
            }
            c[i] = growth[i] * v;
        }
        curves.push(sys.synthesize(surface.curves[k + 1].f0(), &c));
    }
    Ok(ForwardSurface { times: surface.times.clone(), curves })
}
