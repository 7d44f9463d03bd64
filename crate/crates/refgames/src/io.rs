//! File formats: sample CSV, CDF CSV, dense grid CSV, track CSV, and JSON
//! reports. Floats are written with Rust's shortest round-trip formatting,
//! so rereading a file reproduces the values bit-exactly.

use std::io::{BufRead, Write};

use serde::Serialize;

use crate::cdf::CdfGrid;
use crate::error::{Error, Result};
use crate::grid::GridMeasure;
use crate::solution::QuantileTrack;
use crate::tree::ValueSampleSet;

pub fn write_samples_csv<W: Write>(w: &mut W, set: &ValueSampleSet) -> Result<()> {
    writeln!(w, "replicate,payoff1,payoff2")?;
    for (i, s) in set.samples.iter().enumerate() {
        writeln!(w, "{},{},{}", i, s[0], s[1])?;
    }
    Ok(())
}

/// Reads a sample CSV back as (replicate, payoff1, payoff2) rows.
pub fn read_samples_csv<R: BufRead>(r: R) -> Result<Vec<(u64, f64, f64)>> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::SchemaMismatch("empty sample file".into()))??;
    if header.trim() != "replicate,payoff1,payoff2" {
        return Err(Error::SchemaMismatch(format!("unexpected header `{header}`")));
    }
    let mut out = Vec::new();
    for (n, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::SchemaMismatch(format!("row {}: expected 3 columns", n + 2)));
        }
        let bad = |e: &dyn std::fmt::Display| Error::SchemaMismatch(format!("row {}: {e}", n + 2));
        let rep = fields[0].trim().parse::<u64>().map_err(|e| bad(&e))?;
        let p1 = fields[1].trim().parse::<f64>().map_err(|e| bad(&e))?;
        let p2 = fields[2].trim().parse::<f64>().map_err(|e| bad(&e))?;
        out.push((rep, p1, p2));
    }
    Ok(out)
}

pub fn write_cdf_csv<W: Write>(w: &mut W, grid: &CdfGrid) -> Result<()> {
    writeln!(w, "x,F")?;
    for (x, f) in grid.xs.iter().zip(&grid.f) {
        writeln!(w, "{x},{f}")?;
    }
    Ok(())
}

pub fn read_cdf_csv<R: BufRead>(r: R) -> Result<CdfGrid> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::SchemaMismatch("empty cdf file".into()))??;
    if header.trim() != "x,F" {
        return Err(Error::SchemaMismatch(format!("unexpected header `{header}`")));
    }
    let mut xs = Vec::new();
    let mut f = Vec::new();
    for (n, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let mut field = || -> Result<f64> {
            parts
                .next()
                .ok_or_else(|| Error::SchemaMismatch(format!("row {}: too few columns", n + 2)))?
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::SchemaMismatch(format!("row {}: {e}", n + 2)))
        };
        xs.push(field()?);
        f.push(field()?);
    }
    CdfGrid::new(xs, f)
}

/// Dense row-major cell masses. The header line carries the bounding box
/// and resolution so the measure can be reconstructed.
pub fn write_grid_csv<W: Write>(w: &mut W, m: &GridMeasure) -> Result<()> {
    writeln!(
        w,
        "# x0={} y0={} dx={} dy={} nx={} ny={}",
        m.x0, m.y0, m.dx, m.dy, m.nx, m.ny
    )?;
    writeln!(w, "ix,iy,mass")?;
    for iy in 0..m.ny {
        for ix in 0..m.nx {
            writeln!(w, "{},{},{}", ix, iy, m.mass[iy * m.nx + ix])?;
        }
    }
    Ok(())
}

pub fn write_track_csv<W: Write>(w: &mut W, track: &QuantileTrack) -> Result<()> {
    writeln!(w, "step,x,y")?;
    for p in &track.points {
        writeln!(w, "{},{},{}", p.step, p.x, p.y)?;
    }
    Ok(())
}

pub fn write_json_pretty<W: Write, T: Serialize>(w: &mut W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::FeasibleSet;
    use crate::solution::TrackPoint;
    use crate::tree::{sample_many, AssignmentModel, GameSpec};

    #[test]
    fn samples_round_trip() {
        let spec = GameSpec {
            domain: FeasibleSet::zero_sum_segment(),
            assignment: AssignmentModel::random(),
            depth: 3,
            branching: 2,
        };
        let set = sample_many(&spec, 42, 10).unwrap();
        let mut buf = Vec::new();
        write_samples_csv(&mut buf, &set).unwrap();
        let rows = read_samples_csv(&buf[..]).unwrap();
        assert_eq!(rows.len(), 10);
        for (i, (rep, p1, p2)) in rows.iter().enumerate() {
            assert_eq!(*rep, i as u64);
            assert_eq!(*p1, set.samples[i][0]);
            assert_eq!(*p2, set.samples[i][1]);
        }
    }

    #[test]
    fn cdf_round_trip() {
        let g = CdfGrid::uniform(17);
        let mut buf = Vec::new();
        write_cdf_csv(&mut buf, &g).unwrap();
        let back = read_cdf_csv(&buf[..]).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn bad_headers_rejected() {
        assert!(matches!(
            read_samples_csv(&b"a,b,c\n"[..]),
            Err(Error::SchemaMismatch(_))
        ));
        assert!(matches!(read_cdf_csv(&b"x,y\n"[..]), Err(Error::SchemaMismatch(_))));
    }

    #[test]
    fn track_csv_header() {
        let track = QuantileTrack {
            level: 0.5,
            points: vec![TrackPoint { step: 1, x: 0.25, y: 0.75 }],
        };
        let mut buf = Vec::new();
        write_track_csv(&mut buf, &track).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "step,x,y\n1,0.25,0.75\n");
    }
}
