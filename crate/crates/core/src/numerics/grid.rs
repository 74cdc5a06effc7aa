use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Samples of a real function on strictly increasing abscissae.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealGrid {
    points: Vec<f64>,
    values: Vec<f64>,
}

impl RealGrid {
    pub fn new(points: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "grid has {} points but {} values",
                points.len(),
                values.len()
            )));
        }
        if points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParameter(
                "grid points must be strictly increasing".into(),
            ));
        }
        Ok(Self { points, values })
    }

    /// Samples `f` at `n` equally spaced points spanning [a, b].
    pub fn sample<F: FnMut(f64) -> f64>(a: f64, b: f64, n: usize, mut f: F) -> Result<Self> {
        if n < 2 || !(a < b) {
            return Err(Error::InvalidParameter(format!(
                "cannot sample {n} points on [{a}, {b}]"
            )));
        }
        let h = (b - a) / (n - 1) as f64;
        let points: Vec<f64> = (0..n)
            .map(|i| if i + 1 == n { b } else { a + h * i as f64 })
            .collect();
        let values = points.iter().map(|&x| f(x)).collect();
        Self::new(points, values)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Trapezoid-rule integral over the grid.
    pub fn trapezoid(&self) -> f64 {
        self.points
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
            .sum()
    }

    /// Piecewise-linear interpolation; None outside the grid.
    pub fn interpolate(&self, x: f64) -> Option<f64> {
        let i = self.points.partition_point(|&p| p <= x);
        if i == 0 {
            return (self.points.first() == Some(&x)).then(|| self.values[0]);
        }
        if i == self.points.len() {
            return (self.points.last() == Some(&x)).then(|| self.values[i - 1]);
        }
        let (x0, x1) = (self.points[i - 1], self.points[i]);
        let t = (x - x0) / (x1 - x0);
        Some(self.values[i - 1] * (1.0 - t) + self.values[i] * t)
    }
}
