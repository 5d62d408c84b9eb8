use std::collections::BTreeMap;
use std::sync::Arc;

use super::{delivery_period_operator, KernelOperator};
use crate::error::{Error, Result};
use crate::space::Space;

fn parse_args(body: &str) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for part in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("kernel argument `{part}` is not key=value")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("kernel argument `{part}`: {e}")))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

fn take(args: &BTreeMap<String, f64>, name: &str, key: &str) -> Result<f64> {
    args.get(key)
        .copied()
        .ok_or_else(|| Error::Parse(format!("`{name}` needs `{key}=`")))
}

/// Named kernels:
/// `delivery(tau=..)`, `expconv(delta=..)`, and
/// `separable(xi=a,theta=b)` for `exp(-a x) exp(-b y)`.
pub fn parse_kernel(space: &Arc<Space>, text: &str) -> Result<KernelOperator> {
    let text = text.trim();
    let (name, rest) = text
        .split_once('(')
        .ok_or_else(|| Error::Parse(format!("kernel `{text}` must look like name(key=value,..)")))?;
    let body = rest
        .strip_suffix(')')
        .ok_or_else(|| Error::Parse(format!("kernel `{text}` lacks a closing parenthesis")))?;
    let args = parse_args(body)?;
    match name.trim() {
        "delivery" => delivery_period_operator(space, take(&args, "delivery", "tau")?),
        "expconv" => KernelOperator::expconv(space, take(&args, "expconv", "delta")?),
        "separable" => {
            let a = take(&args, "separable", "xi")?;
            let b = take(&args, "separable", "theta")?;
            Ok(KernelOperator::separable(space, move |x| (-a * x).exp(), move |y| (-b * y).exp()))
        }
        other => Err(Error::Parse(format!("unknown kernel `{other}`"))),
    }
}
