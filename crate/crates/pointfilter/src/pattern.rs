//! Point patterns and their observation windows.
//!
//! A [`Window`] is an axis-aligned hyperrectangle in position space; a
//! [`PointPattern`] is a finite set of d-dimensional locations together
//! with the window on which it was observed. Containment is closed on
//! every face: points sitting exactly on the boundary count as inside.

use crate::error::{Error, Result};

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

/// Axis-aligned observation window with strictly positive volume.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Window {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if lower.is_empty() || lower.len() > 3 {
            return Err(Error::InvalidWindow(format!(
                "dimension must be 1, 2 or 3, got {}",
                lower.len()
            )));
        }
        for j in 0..lower.len() {
            if !(lower[j] < upper[j]) || !lower[j].is_finite() || !upper[j].is_finite() {
                return Err(Error::InvalidWindow(format!(
                    "axis {j}: need lower < upper, got [{}, {}]",
                    lower[j], upper[j]
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// Unit hypercube `[0,1]^d`.
    pub fn unit(dim: usize) -> Result<Self> {
        Self::new(vec![0.0; dim], vec![1.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn side(&self, axis: usize) -> f64 {
        self.upper[axis] - self.lower[axis]
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|j| self.side(j)).product()
    }

    /// Closed containment test.
    pub fn contains(&self, point: &[f64]) -> bool {
        debug_assert_eq!(point.len(), self.dim());
        point
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(&x, (&lo, &hi))| x >= lo && x <= hi)
    }

    /// Window grown by `margin` on every face.
    pub fn expanded(&self, margin: f64) -> Result<Self> {
        Self::new(
            self.lower.iter().map(|x| x - margin).collect(),
            self.upper.iter().map(|x| x + margin).collect(),
        )
    }

    /// Window moved by `shift`.
    pub fn translated(&self, shift: &[f64]) -> Result<Self> {
        if shift.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: shift.len(),
            });
        }
        Self::new(
            self.lower.iter().zip(shift).map(|(x, s)| x + s).collect(),
            self.upper.iter().zip(shift).map(|(x, s)| x + s).collect(),
        )
    }

    pub fn center(&self) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| 0.5 * (lo + hi))
            .collect()
    }
}

/// Intensity estimate `n / |B|`; `degenerate` flags an empty pattern,
/// which downstream band selection must reject.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntensityEstimate {
    pub value: f64,
    pub degenerate: bool,
}

/// A finite point pattern on an observation window.
///
/// Coordinates are stored flat (`n * d` doubles) in 64-bit precision;
/// wavenumber phases `2 pi k.u` accumulate error too quickly at lower
/// precision for the window sizes used here.
#[derive(Debug, Clone, PartialEq)]
pub struct PointPattern {
    coords: Vec<f64>,
    window: Window,
}

impl PointPattern {
    /// Builds a pattern from flat coordinates (`n * d` values, point-major).
    pub fn new(coords: Vec<f64>, window: Window) -> Result<Self> {
        let d = window.dim();
        if coords.len() % d != 0 {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: coords.len() % d,
            });
        }
        for point in coords.chunks_exact(d) {
            if !window.contains(point) {
                return Err(Error::InvalidWindow(format!(
                    "point {point:?} lies outside the observation window"
                )));
            }
        }
        Ok(Self { coords, window })
    }

    pub fn from_points(points: &[Vec<f64>], window: Window) -> Result<Self> {
        let d = window.dim();
        let mut coords = Vec::with_capacity(points.len() * d);
        for p in points {
            if p.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: p.len(),
                });
            }
            coords.extend_from_slice(p);
        }
        Self::new(coords, window)
    }

    pub fn empty(window: Window) -> Self {
        Self {
            coords: Vec::new(),
            window,
        }
    }

    pub fn dim(&self) -> usize {
        self.window.dim()
    }

    pub fn n(&self) -> usize {
        self.coords.len() / self.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn point(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.coords[i * d..(i + 1) * d]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim())
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Number of points falling in `region` (closed containment). The
    /// region may extend beyond the observation window.
    pub fn count_in(&self, region: &Window) -> Result<usize> {
        if region.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: region.dim(),
            });
        }
        Ok(self.points().filter(|p| region.contains(p)).count())
    }

    /// `n / |B|`, flagged degenerate (value 0) for an empty pattern.
    pub fn estimate_intensity(&self) -> IntensityEstimate {
        if self.is_empty() {
            IntensityEstimate {
                value: 0.0,
                degenerate: true,
            }
        } else {
            IntensityEstimate {
                value: self.n() as f64 / self.window.volume(),
                degenerate: false,
            }
        }
    }

    /// Mean-corrected count `N(B) - lambda |B|`.
    pub fn mean_corrected_count(&self, region: &Window, intensity: f64) -> Result<f64> {
        let count = self.count_in(region)? as f64;
        Ok(count - intensity * region.volume())
    }

    /// Restriction to a sub-window: points inside `sub`, observed on `sub`.
    pub fn restricted(&self, sub: &Window) -> Result<PointPattern> {
        if sub.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: sub.dim(),
            });
        }
        let mut coords = Vec::new();
        for p in self.points() {
            if sub.contains(p) {
                coords.extend_from_slice(p);
            }
        }
        PointPattern::new(coords, sub.clone())
    }

    /// Pattern and window shifted by the same vector.
    pub fn translated(&self, shift: &[f64]) -> Result<PointPattern> {
        let window = self.window.translated(shift)?;
        let d = self.dim();
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, &x)| x + shift[i % d])
            .collect();
        PointPattern::new(coords, window)
    }

    /// Reads a pattern from CSV with header `x,y[,z]`. The window is
    /// supplied by the caller, never inferred from point extremes.
    pub fn read_csv<P: AsRef<Path>>(path: P, window: Window) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_path(path.as_ref())?;
        let headers = reader.headers()?.clone();
        let expected: Vec<&str> = match window.dim() {
            1 => vec!["x"],
            2 => vec!["x", "y"],
            _ => vec!["x", "y", "z"],
        };
        let got: Vec<String> = headers.iter().map(|h| h.to_ascii_lowercase()).collect();
        if got != expected {
            return Err(Error::Config(format!(
                "pattern csv header {:?} does not match the {}-d window (expected {:?})",
                got,
                window.dim(),
                expected
            )));
        }
        let d = window.dim();
        let mut coords = Vec::new();
        for record in reader.records() {
            let record = record?;
            if record.len() != d {
                return Err(Error::Config(format!(
                    "pattern csv row has {} fields, expected {d}",
                    record.len()
                )));
            }
            for field in record.iter() {
                let v: f64 = field
                    .parse()
                    .map_err(|_| Error::Config(format!("bad coordinate {field:?}")))?;
                coords.push(v);
            }
        }
        Self::new(coords, window)
    }

    /// Writes the pattern as CSV with header `x,y[,z]`.
    pub fn write_csv<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut out = BufWriter::new(File::create(path.as_ref())?);
        let header = match self.dim() {
            1 => "x",
            2 => "x,y",
            _ => "x,y,z",
        };
        writeln!(out, "{header}")?;
        for p in self.points() {
            let row: Vec<String> = p.iter().map(|x| x.to_string()).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn unit_square() -> Window {
        Window::unit(2).unwrap()
    }

    #[test]
    fn window_validation() {
        assert!(Window::new(vec![0.0], vec![1.0]).is_ok());
        assert!(Window::new(vec![0.0, 0.0], vec![1.0, 0.0]).is_err());
        assert!(Window::new(vec![0.0; 4], vec![1.0; 4]).is_err());
        assert!(Window::new(vec![0.0, 0.0], vec![1.0]).is_err());
        let w = Window::new(vec![0.0, -1.0], vec![2.0, 1.0]).unwrap();
        assert_abs_diff_eq!(w.volume(), 4.0);
    }

    #[test]
    fn containment_is_closed() {
        let w = unit_square();
        assert!(w.contains(&[0.0, 0.0]));
        assert!(w.contains(&[1.0, 1.0]));
        assert!(w.contains(&[0.5, 1.0]));
        assert!(!w.contains(&[1.0 + 1e-12, 0.5]));
    }

    #[test]
    fn count_in_basic() {
        let p = PointPattern::from_points(&[vec![0.2, 0.2], vec![0.8, 0.8]], unit_square()).unwrap();
        let region = Window::new(vec![0.0, 0.0], vec![0.5, 0.5]).unwrap();
        assert_eq!(p.count_in(&region).unwrap(), 1);

        let empty = PointPattern::empty(unit_square());
        assert_eq!(empty.count_in(&region).unwrap(), 0);
    }

    #[test]
    fn count_in_rejects_dimension_mismatch() {
        let p = PointPattern::from_points(&[vec![0.2, 0.2]], unit_square()).unwrap();
        let region1d = Window::new(vec![0.0], vec![0.5]).unwrap();
        assert!(matches!(
            p.count_in(&region1d),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn count_in_additive_over_disjoint_split() {
        let pts: Vec<Vec<f64>> = (0..37)
            .map(|i| vec![(i as f64 * 0.137) % 1.0, (i as f64 * 0.379) % 1.0])
            .collect();
        let p = PointPattern::from_points(&pts, unit_square()).unwrap();
        let left = Window::new(vec![0.0, 0.0], vec![0.4999, 1.0]).unwrap();
        let right = Window::new(vec![0.5, 0.0], vec![1.0, 1.0]).unwrap();
        let full = unit_square();
        // the split at 0.4999 / 0.5 leaves the windows disjoint
        assert_eq!(
            p.count_in(&left).unwrap() + p.count_in(&right).unwrap(),
            p.count_in(&full).unwrap()
        );
    }

    #[test]
    fn intensity_examples() {
        let pts: Vec<Vec<f64>> = (0..100)
            .map(|i| vec![(i as f64 + 0.5) / 100.0, 0.5])
            .collect();
        let p = PointPattern::from_points(&pts, unit_square()).unwrap();
        assert_abs_diff_eq!(p.estimate_intensity().value, 100.0);
        assert!(!p.estimate_intensity().degenerate);

        let wide = Window::new(vec![0.0, 0.0], vec![2.0, 1.0]).unwrap();
        let pts: Vec<Vec<f64>> = (0..50).map(|i| vec![(i as f64 + 0.5) / 25.0, 0.5]).collect();
        let p = PointPattern::from_points(&pts, wide).unwrap();
        assert_abs_diff_eq!(p.estimate_intensity().value, 25.0);

        let empty = PointPattern::empty(unit_square());
        let est = empty.estimate_intensity();
        assert_eq!(est.value, 0.0);
        assert!(est.degenerate);
    }

    #[test]
    fn intensity_scales_inversely_with_volume() {
        let pts: Vec<Vec<f64>> = (0..20).map(|i| vec![0.3 + 0.02 * i as f64, 0.5]).collect();
        let small = PointPattern::from_points(&pts, unit_square()).unwrap();
        let doubled = Window::new(vec![0.0, 0.0], vec![2.0, 1.0]).unwrap();
        let big = PointPattern::from_points(&pts, doubled).unwrap();
        assert_abs_diff_eq!(
            big.estimate_intensity().value,
            small.estimate_intensity().value / 2.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn mean_corrected_count_examples() {
        let quarter = Window::new(vec![0.0, 0.0], vec![0.5, 0.5]).unwrap();
        let p = PointPattern::from_points(&[vec![0.25, 0.25]], quarter.clone()).unwrap();
        assert_abs_diff_eq!(p.mean_corrected_count(&quarter, 4.0).unwrap(), 0.0);

        // full window with lambda = lambda_hat is exactly zero
        let pts: Vec<Vec<f64>> = (0..123)
            .map(|i| vec![(i as f64 * 0.61803) % 1.0, (i as f64 * 0.24512) % 1.0])
            .collect();
        let p = PointPattern::from_points(&pts, unit_square()).unwrap();
        let lambda_hat = p.estimate_intensity().value;
        let resid = p
            .mean_corrected_count(&unit_square(), lambda_hat)
            .unwrap()
            .abs();
        assert!(resid <= 1e-12 * p.n() as f64);
    }

    #[test]
    fn construction_rejects_outside_points() {
        assert!(PointPattern::from_points(&[vec![1.5, 0.5]], unit_square()).is_err());
        assert!(PointPattern::from_points(&[vec![0.5]], unit_square()).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pattern.csv");
        let p = PointPattern::from_points(
            &[vec![0.25, 0.75], vec![0.5, 0.125], vec![1.0, 0.0]],
            unit_square(),
        )
        .unwrap();
        p.write_csv(&path).unwrap();
        let q = PointPattern::read_csv(&path, unit_square()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn csv_header_must_match_dimension() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pattern.csv");
        std::fs::write(&path, "x,y\n0.5,0.5\n").unwrap();
        assert!(PointPattern::read_csv(&path, Window::unit(3).unwrap()).is_err());
        assert!(PointPattern::read_csv(&path, Window::unit(2).unwrap()).is_ok());
    }
}
