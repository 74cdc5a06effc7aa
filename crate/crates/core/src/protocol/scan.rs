//! Scans of the maximum quantum score over probing ratios.

use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::score::max_eigenvalue;
use crate::classical::{energy_window, ModelSystem};
use crate::error::{Error, Result};
use crate::spectra::{SliceCache, SpectrumSlice};

/// How the truncation is chosen at each grid point.
#[derive(Debug, Clone)]
pub enum WindowPolicy {
    /// Window recomputed from the classical conditions at each τ, with an
    /// optional level cap (required for unbounded windows).
    FromTau { max_index: Option<usize> },
    /// One slice for every τ.
    Fixed(Arc<SpectrumSlice>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointError {
    pub kind: String,
    pub message: String,
}

impl From<&Error> for PointError {
    fn from(e: &Error) -> Self {
        Self {
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub tau: f64,
    pub p3_max: Option<f64>,
    /// Number of retained levels.
    pub levels: Option<usize>,
    pub error: Option<PointError>,
}

fn point(
    model: &ModelSystem,
    tau: f64,
    policy: &WindowPolicy,
    cache: Option<&SliceCache>,
) -> Result<(f64, usize)> {
    match policy {
        WindowPolicy::Fixed(slice) => Ok((max_eigenvalue(slice, tau)?.0, slice.dim())),
        WindowPolicy::FromTau { max_index } => {
            let window = energy_window(model, tau)?;
            let slice = match cache {
                Some(c) => c.get_or_build(*model, window, *max_index)?,
                None => SpectrumSlice::build_capped(*model, window, *max_index)?,
            };
            Ok((max_eigenvalue(&slice, tau)?.0, slice.dim()))
        }
    }
}

/// Maximum score at each τ of the grid, in grid order. Failures are recorded per
/// point instead of aborting the scan.
pub fn scan_tau(model: &ModelSystem, taus: &[f64], policy: &WindowPolicy) -> Vec<ScanPoint> {
    scan_tau_cached(model, taus, policy, None)
}

pub fn scan_tau_cached(
    model: &ModelSystem,
    taus: &[f64],
    policy: &WindowPolicy,
    cache: Option<&SliceCache>,
) -> Vec<ScanPoint> {
    taus.par_iter()
        .map(|&tau| match point(model, tau, policy, cache) {
            Ok((v, n)) => ScanPoint {
                tau,
                p3_max: Some(v),
                levels: Some(n),
                error: None,
            },
            Err(e) => ScanPoint {
                tau,
                p3_max: None,
                levels: None,
                error: Some((&e).into()),
            },
        })
        .collect()
}

/// n + 1 equally spaced points on [a, b].
pub fn linear_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 0 {
        return vec![a];
    }
    (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect()
}

/// CSV curve with columns tau, p3_max, levels, error.
pub fn write_scan_csv<W: Write>(out: W, points: &[ScanPoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["tau", "p3_max", "levels", "error"])
        .map_err(csv_err)?;
    for p in points {
        w.write_record([
            p.tau.to_string(),
            p.p3_max.map(|v| v.to_string()).unwrap_or_default(),
            p.levels.map(|v| v.to_string()).unwrap_or_default(),
            p.error.as_ref().map(|e| e.kind.clone()).unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_peak_at_unit_tau() {
        let slice = Arc::new(SpectrumSlice::lowest(ModelSystem::Harmonic, 30).unwrap());
        let grid = linear_grid(0.75, 1.5, 30);
        let pts = scan_tau(&ModelSystem::Harmonic, &grid, &WindowPolicy::Fixed(slice));
        let best = pts
            .iter()
            .max_by(|a, b| a.p3_max.unwrap().total_cmp(&b.p3_max.unwrap()))
            .unwrap();
        assert!((best.tau - 1.0).abs() < 1e-12);
        assert!((pts[0].p3_max.unwrap() - 2.0 / 3.0).abs() < 1e-9);
        assert!((pts[30].p3_max.unwrap() - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn errors_are_collected() {
        let pts = scan_tau(
            &ModelSystem::Kerr { alpha: 0.02 },
            &[0.5, 1.0],
            &WindowPolicy::FromTau { max_index: None },
        );
        assert_eq!(pts[0].error.as_ref().unwrap().kind, "unsupported_tau");
        assert!(pts[1].p3_max.is_some());
    }

    #[test]
    fn csv_layout() {
        let pts = vec![ScanPoint {
            tau: 1.0,
            p3_max: Some(0.5),
            levels: Some(3),
            error: None,
        }];
        let mut buf = Vec::new();
        write_scan_csv(&mut buf, &pts).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "tau,p3_max,levels,error\n1,0.5,3,\n"
        );
    }
}
