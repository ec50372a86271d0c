//! CSV export and import of trajectories.
//!
//! Column layouts are fixed:
//!
//! | file | columns |
//! |------|---------|
//! | trajectory | `t, segment_k, component, alpha, lower, upper` |
//! | comparison | `t, segment_k, V, r, margin` |
//! | derivative | `t, component, alpha, lower, upper` |
//!
//! Floats are written in shortest round-trip form.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::{AlphaGrid, FuzzyNumber, FuzzyVector};
use crate::hukuhara::FuzzyTrajectory;
use crate::scalar::Scalar;
use crate::stability::BoundRow;
use crate::timescale::TimeScale;

pub const TRAJECTORY_HEADER: [&str; 6] = ["t", "segment_k", "component", "alpha", "lower", "upper"];
pub const COMPARISON_HEADER: [&str; 5] = ["t", "segment_k", "V", "r", "margin"];
pub const DERIVATIVE_HEADER: [&str; 5] = ["t", "component", "alpha", "lower", "upper"];

fn csv_err(e: impl std::fmt::Display) -> Error {
    Error::Csv(e.to_string())
}

/// `(alpha, lower, upper)` rows of one component.
type Cuts = Vec<(f64, f64, f64)>;

#[derive(Debug, Serialize, Deserialize)]
struct TrajectoryRow {
    t: f64,
    segment_k: usize,
    component: usize,
    alpha: f64,
    lower: f64,
    upper: f64,
}

/// Writes one row per (point, component, level). `segments[i]` labels point `i`.
pub fn write_trajectory_csv<T: Scalar, W: Write>(out: W, traj: &FuzzyTrajectory<T>, segments: &[usize]) -> Result<()> {
    if segments.len() != traj.len() {
        return Err(Error::InvalidShape(format!(
            "{} segment labels for {} points",
            segments.len(),
            traj.len()
        )));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRAJECTORY_HEADER).map_err(csv_err)?;
    for (i, (&t, u)) in traj.times().iter().zip(traj.values()).enumerate() {
        for (j, c) in u.components().iter().enumerate() {
            for (alpha, cut) in c.levels() {
                w.write_record([
                    t.to_string(),
                    segments[i].to_string(),
                    j.to_string(),
                    alpha.to_string(),
                    cut.lo.to_string(),
                    cut.hi.to_string(),
                ])
                .map_err(csv_err)?;
            }
        }
    }
    w.flush().map_err(csv_err)
}

/// Inverse of [`write_trajectory_csv`]. The time scale must contain the file's times as leading points.
pub fn read_trajectory_csv<T: Scalar, R: Read>(input: R, ts: Arc<TimeScale<T>>) -> Result<(FuzzyTrajectory<T>, Vec<usize>)> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers().map_err(csv_err)?.clone();
    if header.iter().ne(TRAJECTORY_HEADER) {
        return Err(Error::Csv(format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
    }
    // point -> (segment, component -> cuts in file order)
    let mut points: BTreeMap<usize, (usize, BTreeMap<usize, Cuts>)> = BTreeMap::new();
    for row in rdr.deserialize::<TrajectoryRow>() {
        let row = row.map_err(csv_err)?;
        let i = ts.index_of(T::lit(row.t))?;
        let entry = points.entry(i).or_insert((row.segment_k, BTreeMap::new()));
        entry.1.entry(row.component).or_default().push((row.alpha, row.lower, row.upper));
    }
    if points.keys().copied().ne(0..points.len()) {
        return Err(Error::Csv("trajectory rows must cover the leading points without gaps".into()));
    }
    let mut grid: Option<AlphaGrid<T>> = None;
    let mut values = Vec::with_capacity(points.len());
    let mut segments = Vec::with_capacity(points.len());
    for (_, (seg, comps)) in points {
        if comps.keys().copied().ne(0..comps.len()) {
            return Err(Error::Csv("component indices must be contiguous".into()));
        }
        let mut out = Vec::with_capacity(comps.len());
        for (_, cuts) in comps {
            let levels: Vec<T> = cuts.iter().map(|c| T::lit(c.0)).collect();
            let g = match &grid {
                Some(g) if g.levels() == &levels[..] => g.clone(),
                Some(_) => return Err(Error::IncompatibleGrids),
                None => {
                    let g = AlphaGrid::new(levels)?;
                    grid = Some(g.clone());
                    g
                }
            };
            out.push(FuzzyNumber::from_cuts(
                g,
                cuts.iter().map(|c| T::lit(c.1)).collect(),
                cuts.iter().map(|c| T::lit(c.2)).collect(),
            )?);
        }
        values.push(FuzzyVector::new(out)?);
        segments.push(seg);
    }
    Ok((FuzzyTrajectory::new(ts, values)?, segments))
}

pub fn write_comparison_csv<W: Write>(out: W, rows: &[BoundRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COMPARISON_HEADER).map_err(csv_err)?;
    for row in rows {
        w.write_record([
            row.t.to_string(),
            row.segment.to_string(),
            row.v.to_string(),
            row.r.to_string(),
            row.margin.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(csv_err)
}

/// Writes `Δ_H u(t)` rows; `None` entries (no derivative) are skipped.
pub fn write_derivative_csv<T: Scalar, W: Write>(out: W, rows: &[(T, Option<FuzzyVector<T>>)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(DERIVATIVE_HEADER).map_err(csv_err)?;
    for (t, d) in rows {
        let Some(d) = d else { continue };
        for (j, c) in d.components().iter().enumerate() {
            for (alpha, cut) in c.levels() {
                w.write_record([
                    t.to_string(),
                    j.to_string(),
                    alpha.to_string(),
                    cut.lo.to_string(),
                    cut.hi.to_string(),
                ])
                .map_err(csv_err)?;
            }
        }
    }
    w.flush().map_err(csv_err)
}
