use std::io::{BufRead, BufReader, Read, Write};
use std::sync::Arc;

use super::{Curve, GridSpec, Space, WeightSpec};
use crate::error::{Error, Result};

/// Which column a curve CSV carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsvLayout {
    /// `x,value` at the nodes.
    Values,
    /// `x,deriv` at the cell midpoints.
    Derivs,
}

pub fn write_curve_csv<W: Write>(curve: &Curve, layout: CsvLayout, out: W) -> Result<()> {
    let sp = curve.space();
    let mut out = out;
    writeln!(
        out,
        "# alpha={} dx={} xmax={} f0={}",
        sp.alpha(),
        sp.dx(),
        sp.x_max(),
        curve.f0()
    )?;
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Parse(e.to_string());
    match layout {
        CsvLayout::Values => {
            w.write_record(["x", "value"]).map_err(csv_err)?;
            for (i, v) in curve.node_values().iter().enumerate() {
                w.write_record([sp.grid().node(i).to_string(), v.to_string()]).map_err(csv_err)?;
            }
        }
        CsvLayout::Derivs => {
            w.write_record(["x", "deriv"]).map_err(csv_err)?;
            for (i, d) in curve.deriv().iter().enumerate() {
                w.write_record([sp.grid().mid(i).to_string(), d.to_string()]).map_err(csv_err)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn meta_field(line: &str, key: &str) -> Result<f64> {
    line.trim_start_matches('#')
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .ok_or_else(|| Error::Parse(format!("metadata line lacks `{key}=`")))?
        .parse::<f64>()
        .map_err(|e| Error::Parse(format!("metadata `{key}`: {e}")))
}

/// Reads a curve written by [`write_curve_csv`]. When `space` is given the
/// metadata must agree with it and the curve shares it.
pub fn read_curve_csv<R: Read>(input: R, space: Option<&Arc<Space>>) -> Result<Curve> {
    let mut rd = BufReader::new(input);
    let mut meta = String::new();
    rd.read_line(&mut meta)?;
    if !meta.starts_with('#') {
        return Err(Error::Parse("line 1: expected `# alpha=.. dx=.. xmax=.. f0=..`".into()));
    }
    let alpha = meta_field(&meta, "alpha")?;
    let dx = meta_field(&meta, "dx")?;
    let xmax = meta_field(&meta, "xmax")?;
    let f0 = meta_field(&meta, "f0")?;
    let grid = GridSpec::new(xmax, dx)?;
    let weight = WeightSpec::new(alpha)?;
    let space = match space {
        Some(s) => {
            if *s.grid() != grid || *s.weight() != weight {
                return Err(Error::Shape(format!(
                    "curve file grid alpha={alpha} dx={dx} xmax={xmax} does not match the configured space"
                )));
            }
            s.clone()
        }
        None => Space::new(grid, weight),
    };

    let mut r = csv::Reader::from_reader(rd);
    let headers = r.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    let layout = match (headers.get(0), headers.get(1)) {
        (Some("x"), Some("value")) => CsvLayout::Values,
        (Some("x"), Some("deriv")) => CsvLayout::Derivs,
        _ => return Err(Error::Parse("line 2: header must be `x,value` or `x,deriv`".into())),
    };
    let mut col = Vec::new();
    for (k, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(format!("line {}: {e}", k + 3)))?;
        let v = rec
            .get(1)
            .ok_or_else(|| Error::Parse(format!("line {}: missing column", k + 3)))?
            .trim()
            .parse::<f64>()
            .map_err(|e| Error::Parse(format!("line {}: {e}", k + 3)))?;
        col.push(v);
    }
    match layout {
        CsvLayout::Values => Curve::from_node_values(&space, &col),
        CsvLayout::Derivs => Curve::new(&space, f0, col),
    }
}
