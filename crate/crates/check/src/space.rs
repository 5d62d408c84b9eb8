use fcurve_core::sample::random_curve;
use fcurve_core::space::{h_curve, point_eval};
use fcurve_core::{Result, Space};
use rand::Rng;

use crate::{rng, CriterionReport};

pub fn criterion_1(seed: u64) -> CriterionReport {
    CriterionReport::run(1, "space axioms on 1000 random curves", |r| {
        let sp = Space::standard();
        let mut iso: f64 = 0.0;
        let mut sup_ratio: f64 = 0.0;
        let mut duality: f64 = 0.0;
        for i in 0..1000 {
            let mut g = rng(seed, 1, i);
            let f = random_curve(&sp, &mut g);
            let wd = f.weighted_derivative();
            let two_way = f.f0() * f.f0() + wd.iter().map(|v| v * v).sum::<f64>() * sp.dx();
            iso = iso.max((two_way - f.norm_sq()).abs() / f.norm_sq());
            sup_ratio = sup_ratio.max(f.sup_norm() / (2f64.sqrt() * f.norm()));
            let node = sp.grid().node(g.random_range(0..=sp.cells()));
            for x in [g.random_range(0.0..sp.x_max()), node, f64::INFINITY] {
                let d = h_curve(&sp, x)?.inner(&f)?;
                duality = duality.max((point_eval(&f, x)? - d).abs());
            }
        }
        r.require("isometry_rel_defect", iso, iso <= 1e-12, format!("isometry defect {iso:e}"));
        r.require("sup_over_sqrt2_norm", sup_ratio, sup_ratio <= 1.0, format!("sup ratio {sup_ratio}"));
        r.require("duality_defect", duality, duality <= 1e-10, format!("duality defect {duality:e}"));
        Ok(())
    })
}

pub fn criterion_2(_seed: u64) -> CriterionReport {
    CriterionReport::run(2, "Hoelder sandwich on representer differences", |r| {
        let sp = Space::standard();
        let n = sp.cells() + 1;
        let reps = (0..n).map(|i| h_curve(&sp, sp.grid().node(i))).collect::<Result<Vec<_>>>()?;
        // <h_x, h_y> = ||h_x||^2 for x <= y, so ||h_y - h_x||^2 = ||h_y||^2 - ||h_x||^2
        let sq: Vec<f64> = reps.iter().map(|h| h.norm_sq()).collect();
        let mut upper: f64 = 0.0;
        let mut lower: f64 = 0.0;
        for i in 0..n {
            let x = sp.grid().node(i);
            for j in i + 1..n {
                let y = sp.grid().node(j);
                let d = (sq[j] - sq[i]).max(0.0).sqrt();
                upper = upper.max(d / (y - x).sqrt());
                lower = lower.max(((y - x) * (-y).exp()).sqrt() / d);
            }
        }
        // direct differences on a sub-lattice guard the shortcut
        let mut shortcut: f64 = 0.0;
        for i in (0..n).step_by(25) {
            for j in (i + 25..n).step_by(25) {
                let direct = reps[j].distance(&reps[i])?;
                let fast = (sq[j] - sq[i]).max(0.0).sqrt();
                shortcut = shortcut.max((direct - fast).abs() / direct.max(1e-300));
            }
        }
        let slack = 1e-3;
        r.require("max_norm_over_upper", upper, upper <= 1.0 + slack, format!("upper ratio {upper}"));
        r.require("max_lower_over_norm", lower, lower <= 1.0 + slack, format!("lower ratio {lower}"));
        r.require("shortcut_rel_defect", shortcut, shortcut <= 1e-6, format!("shortcut defect {shortcut:e}"));
        r.metric("pairs", (n * (n - 1) / 2) as f64);
        Ok(())
    })
}
