use crate::config::{DriverKindConfig, Scenario};

fn on_grid(v: f64, dx: f64) -> bool {
    let r = v / dx;
    (r - r.round()).abs() <= 1e-9 * r.abs().max(1.0)
}

/// Static checks; an empty list means the scenario can run.
pub fn validate_config(s: &Scenario) -> Vec<String> {
    let c = &s.config;
    let mut issues = Vec::new();
    let (alpha, dx, x_max) = (c.space.alpha, c.space.dx, c.space.x_max);
    if !(alpha > 0.0 && alpha.is_finite()) {
        issues.push(format!("space.alpha = {alpha} must be positive"));
    }
    if !(dx > 0.0 && x_max > 0.0) || !on_grid(x_max, dx) {
        issues.push(format!("space.x_max = {x_max} must be a positive multiple of dx = {dx}"));
    }
    let dt = s.dt();
    if dt != dx {
        issues.push(format!("run.dt = {dt} does not match space.dx = {dx}; steps must be exact grid shifts"));
    }
    let h = c.run.horizon;
    if !(h > 0.0) || !on_grid(h, dt) {
        issues.push(format!("run.horizon = {h} must be a positive multiple of dt = {dt}"));
    }
    if c.run.n_paths < 2 {
        issues.push(format!("run.n_paths = {} must be at least 2", c.run.n_paths));
    }
    for (i, f) in c.driver.factors.iter().enumerate() {
        if !(f.gamma > alpha / 2.0) {
            issues.push(format!(
                "driver.factors[{i}]: gamma = {} must be strictly bigger than alpha/2 = {}, otherwise exp(-gamma x) is not in the curve space",
                f.gamma,
                alpha / 2.0
            ));
        } else if !f.lambda.is_finite() {
            issues.push(format!("driver.factors[{i}]: lambda = {} is not finite", f.lambda));
        }
    }
    // squared norms lambda^2 (1 + gamma^2 / (2 gamma - alpha)) must have a finite sum
    let total: f64 = c
        .driver
        .factors
        .iter()
        .filter(|f| f.gamma > alpha / 2.0)
        .map(|f| f.lambda * f.lambda * (1.0 + f.gamma * f.gamma / (2.0 * f.gamma - alpha)))
        .sum();
    if !total.is_finite() {
        issues.push(format!("driver.factors: squared loading norms sum to {total}"));
    }
    match c.driver.kind {
        DriverKindConfig::Nig => match c.driver.ig_lambda {
            Some(l) if l > 0.0 && l.is_finite() => {}
            other => issues.push(format!("driver.ig_lambda = {other:?} must be positive for the nig driver")),
        },
        DriverKindConfig::Wiener => {
            if c.driver.ig_lambda.is_some() {
                issues.push("driver.ig_lambda is only used by the nig driver".into());
            }
        }
    }
    let out = &c.run.outputs;
    for (i, m) in out.maturities.iter().enumerate() {
        if !(*m >= 0.0) || !on_grid(*m, dx) || *m > x_max {
            issues.push(format!("run.outputs.maturities[{i}] = {m} must be a grid point in [0, x_max = {x_max}]"));
        }
    }
    if out.record_every == 0 {
        issues.push("run.outputs.record_every must be positive".into());
    }
    if !(out.summary_x_step > 0.0) || !on_grid(out.summary_x_step, dx) {
        issues.push(format!("run.outputs.summary_x_step = {} must be a positive multiple of dx = {dx}", out.summary_x_step));
    }
    let a = &c.analytics;
    if let Some(delta) = a.exp_kernel_delta {
        if !(delta > 0.0 && alpha > delta) {
            issues.push(format!("analytics.exp_kernel_delta = {delta} must satisfy 0 < delta < alpha = {alpha}"));
        }
    }
    for (i, p) in a.correlation_points.iter().enumerate() {
        if !(*p >= 0.0 && *p <= x_max) {
            issues.push(format!("analytics.correlation_points[{i}] = {p} lies outside [0, {x_max}]"));
        }
    }
    if !(a.basis.x0 > 0.0 && a.basis.x0 <= x_max) || !on_grid(a.basis.x0, dx) {
        issues.push(format!("analytics.basis.x0 = {} must be a grid point in (0, {x_max}]", a.basis.x0));
    }
    if a.basis.n_max == 0 {
        issues.push("analytics.basis.n_max must be positive".into());
    }
    issues
}
