use fcurve_core::analytics::{correlation_report, exp_kernel_correlation};
use fcurve_core::riesz::{BiorthogonalSystem, RieszBasisSpec};

use crate::config::Scenario;
use crate::error::Result;
use crate::scenario::{build_space, factor_covariance, initial_curve};

/// `x,y,rho,lower_bound,radius` rows (plus the exponential-kernel
/// correlation when configured) and any bound violations.
pub fn correlation_csv(s: &Scenario) -> Result<(String, Vec<String>)> {
    let sp = build_space(s)?;
    let q = factor_covariance(s, &sp)?;
    let rep = correlation_report(&q, &s.config.analytics.correlation_points)?;
    let delta = s.config.analytics.exp_kernel_delta;
    let mut csv = String::from("x,y,rho,lower_bound,radius");
    if delta.is_some() {
        csv.push_str(",exp_kernel_rho");
    }
    csv.push('\n');
    for p in &rep.pairs {
        let lb = p.lower_bound.map(|b| b.to_string()).unwrap_or_default();
        csv.push_str(&format!("{},{},{},{lb},{}", p.x, p.y, p.rho, p.radius));
        if let Some(d) = delta {
            let v = if p.x > 0.0 { exp_kernel_correlation(sp.alpha(), d, p.x, p.y)?.to_string() } else { String::new() };
            csv.push_str(&format!(",{v}"));
        }
        csv.push('\n');
    }
    Ok((csv, rep.notes))
}

/// `n,eigen_re,eigen_im,coef_re,coef_im` for the initial curve, and a
/// one-line report on the truncation.
pub fn basis_csv(s: &Scenario) -> Result<(String, String)> {
    let sp = build_space(s)?;
    let b = &s.config.analytics.basis;
    let spec = match b.lambda {
        Some(l) => RieszBasisSpec::new(b.x0, l, b.n_max),
        None => RieszBasisSpec::with_default_lambda(b.x0, sp.alpha(), b.n_max),
    };
    let sys = BiorthogonalSystem::build(&sp, spec)?;
    let f0 = initial_curve(s, &sp)?;
    let n = sys.n_max();
    let mut csv = String::from("n,eigen_re,eigen_im,coef_re,coef_im\n");
    for k in -n..=n {
        let lam = sys.eigenvalue(k);
        // the constant g_0 is fixed by the shift
        let (re, im) = if k == 0 { (0.0, 0.0) } else { (lam.re, lam.im) };
        let c = sys.coefficient(k, &f0)?;
        csv.push_str(&format!("{k},{re},{im},{},{}\n", c.re, c.im));
    }
    let p = sys.project(&f0)?;
    let cx = sys.cells_x0();
    let err = f0.node_values()[..=cx]
        .iter()
        .zip(&p.node_values()[..=cx])
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let info = format!(
        "basis |n| <= {n} on [0, {}]: Gram condition {:.3e}, residual {:.3e}, projection error {:.3e}",
        b.x0,
        sys.condition_number(),
        sys.residual(),
        err
    );
    Ok((csv, info))
}
