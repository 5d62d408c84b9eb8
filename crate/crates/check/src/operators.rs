use std::sync::Arc;

use fcurve_core::operators::{
    delivery_period_operator, frobenius_norm, operator_norm, parse_kernel, HsOperator,
    HsRepresentation, KernelOperator, LinearOperator, MultiplicationOperator, TraceClassOperator,
    TraceClassSpec,
};
use fcurve_core::sample::{random_curve, random_price_curve};
use fcurve_core::space::h_curve;
use fcurve_core::{Curve, Result, Space};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::{rng, CriterionReport};

fn reduced() -> Result<Arc<Space>> {
    Space::with(1.0, 5.0, 0.01)
}

pub fn criterion_3(seed: u64) -> CriterionReport {
    CriterionReport::run(3, "multiplication, Schur and square-function bounds", |r| {
        let sp = Space::standard();
        let mut mult: f64 = 0.0;
        for i in 0..100 {
            let m = random_curve(&sp, &mut rng(seed, 3, i));
            let est = MultiplicationOperator::new(m.clone()).norm_estimate();
            mult = mult.max(est / (3.0 * m.norm()));
        }
        r.require("mult_norm_over_3m", mult, mult <= 1.0, format!("multiplication ratio {mult}"));

        let red = reduced()?;
        let kernels = [
            KernelOperator::expconv(&red, 0.8)?,
            KernelOperator::separable(&red, |x| (-1.5 * x).exp(), |y| (-0.9 * y).exp()),
            KernelOperator::convolution(&red, |s| (-s * s).exp()),
            delivery_period_operator(&red, 0.1)?,
            delivery_period_operator(&red, 0.5)?,
            delivery_period_operator(&red, 1.0)?,
            parse_kernel(&red, "delivery(tau=0.25)")?,
        ];
        let mut schur: f64 = 0.0;
        for t in &kernels {
            let c = t.schur_bound()?.c;
            schur = schur.max(operator_norm(t)? / c);
        }
        r.require("schur_norm_over_c", schur, schur <= 1.05, format!("Schur ratio {schur}"));

        let hinf = h_curve(&sp, f64::INFINITY)?.norm();
        let mut sq: f64 = 0.0;
        for i in 0..500 {
            let f = random_curve(&sp, &mut rng(seed, 3, 1000 + 2 * i));
            let g = random_curve(&sp, &mut rng(seed, 3, 1001 + 2 * i));
            let d = f.multiply(&f)?.sub(&g.multiply(&g)?)?.norm();
            let s = 3.0 * hinf * f.add(&g)?.norm() * f.sub(&g)?.norm();
            sq = sq.max(d / s);
        }
        r.require("square_diff_over_bound", sq, sq <= 1.0, format!("square-function ratio {sq}"));
        Ok(())
    })
}

fn zero_start(sp: &Arc<Space>, seed: u64, i: u64) -> Curve {
    let mut c = random_curve(sp, &mut rng(seed, 4, i));
    c.set_f0(0.0);
    c
}

fn random_b(n: usize, seed: u64, i: u64, symmetric: bool) -> DMatrix<f64> {
    let mut g = rng(seed, 4, i);
    let m = DMatrix::from_fn(n, n, |_, _| g.sample::<f64, _>(StandardNormal));
    if symmetric {
        (&m + m.transpose()) * 0.5
    } else {
        m
    }
}

pub fn criterion_4(seed: u64) -> CriterionReport {
    CriterionReport::run(4, "Hilbert-Schmidt and trace-class calculus", |r| {
        let sp = reduced()?;
        let n = sp.cells();
        let mut roundtrip: f64 = 0.0;
        for i in 0..5 {
            let b = random_b(n, seed, i, false);
            let rep = HsRepresentation { c: 0.0, g: Curve::zero(&sp), h: Curve::zero(&sp), b: b.clone() };
            roundtrip = roundtrip.max((HsRepresentation::recover_b(&rep.kernel()?) - b).amax());
        }
        r.require("hs_roundtrip", roundtrip, roundtrip <= 1e-6, format!("roundtrip {roundtrip:e}"));

        let mut fro_gap: f64 = 0.0;
        for case in 0..50 {
            let rep = HsRepresentation {
                c: rng(seed, 4, 100 + case).sample(StandardNormal),
                g: zero_start(&sp, seed, 200 + case),
                h: zero_start(&sp, seed, 300 + case),
                b: random_b(n, seed, 400 + case, false),
            };
            let op = HsOperator::build(rep)?;
            fro_gap = fro_gap.max((op.hs_norm() - frobenius_norm(&op)?).abs());
        }
        r.require("hs_vs_frobenius", fro_gap, fro_gap <= 1e-6, format!("Frobenius gap {fro_gap:e}"));

        let mut g = zero_start(&sp, seed, 500).scale(0.5);
        g.set_f0(0.0);
        let rep = HsRepresentation { c: 0.7, g: g.clone(), h: g, b: random_b(n, seed, 501, true) };
        let q = TraceClassOperator::build(TraceClassSpec::from_symmetric_hs(&rep)?)?;
        let mut min_form = f64::INFINITY;
        for i in 0..100 {
            let f = random_curve(&sp, &mut rng(seed, 4, 600 + i));
            min_form = min_form.min(q.apply(&f)?.inner(&f)?);
        }
        r.require("min_quadratic_form", min_form, min_form >= -1e-10, format!("<Qf,f> = {min_form:e}"));
        let m = q.coordinate_matrix()?;
        let eig_sum: f64 = SymmetricEigen::new((&m + m.transpose()) * 0.5).eigenvalues.iter().sum();
        let trace_rel = (q.trace() - eig_sum).abs() / eig_sum.abs();
        r.require("trace_rel_gap", trace_rel, trace_rel <= 1e-4, format!("trace gap {trace_rel:e}"));
        Ok(())
    })
}

pub fn criterion_5(seed: u64) -> CriterionReport {
    CriterionReport::run(5, "delivery-period forwards", |r| {
        let sp = Space::standard();
        let dx = sp.dx();
        let mut worst: f64 = 0.0;
        for tau in [0.1, 0.5, 1.0] {
            let op = delivery_period_operator(&sp, tau)?;
            let m = sp.grid().steps_for(tau)?;
            for i in 0..50 {
                let f = random_price_curve(&sp, &mut rng(seed, 5, i));
                let mut avg = op.apply(&f)?;
                avg.axpy(1.0, &f)?;
                let got = avg.node_values();
                let v = f.node_values();
                // trapezoid on the nodes integrates the piecewise-linear curve exactly
                let mut cum = vec![0.0; v.len()];
                for j in 1..v.len() {
                    cum[j] = cum[j - 1] + 0.5 * (v[j - 1] + v[j]) * dx;
                }
                for j in 0..=sp.cells() - m {
                    let direct = (cum[j + m] - cum[j]) / tau;
                    worst = worst.max((got[j] - direct).abs() / direct.abs());
                }
            }
        }
        r.require("max_rel_error", worst, worst <= 1e-3, format!("delivery error {worst:e}"));
        Ok(())
    })
}
