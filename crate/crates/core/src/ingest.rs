// Copyright 2026 The polarrecon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! From raw position samples to a centered localization ellipsoid, and from
//! there to a postulated momentum region.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ensure_spd, spd_inv_sqrt, spd_inverse, Matrix, Vector};
use crate::polar::{
    is_subset, john_of_cloud_at, mvee_centered, polar_dual, Ellipsoid, MeasurementCloud, Space, DEFAULT_EPS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Estimator {
    /// Smallest enclosing ellipsoid.
    Loewner,
    /// Largest ellipsoid inscribed in the convex hull.
    John,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CenterMode {
    Mean,
    Fixed(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IngestConfig {
    pub estimator: Estimator,
    /// Fraction trimmed from each end of every coordinate, in `[0, 0.2]`.
    pub trim_fraction: f64,
    pub center_mode: CenterMode,
    pub eps: f64,
    pub hbar: f64,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            estimator: Estimator::Loewner,
            trim_fraction: 0.0,
            center_mode: CenterMode::Mean,
            eps: DEFAULT_EPS,
            hbar: 1.0,
        }
    }
}

impl IngestConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=0.2).contains(&self.trim_fraction) {
            return Err(Error::invalid(format!(
                "trim_fraction must lie in [0, 0.2], got {}",
                self.trim_fraction
            )));
        }
        if !(self.eps > 0.0) || !self.eps.is_finite() {
            return Err(Error::invalid(format!("eps must be positive, got {}", self.eps)));
        }
        if !(self.hbar > 0.0) || !self.hbar.is_finite() {
            return Err(Error::invalid(format!("hbar must be positive, got {}", self.hbar)));
        }
        Ok(())
    }
}

/// Reads a CSV cloud with a header row (`x1,...,xn`).
pub fn load_cloud(path: impl AsRef<Path>, expected_n: Option<usize>) -> Result<MeasurementCloud> {
    let path = path.as_ref();
    let mut text = String::new();
    File::open(path)?.read_to_string(&mut text)?;
    parse_cloud(&text, &path.display().to_string(), expected_n)
}

/// Parses CSV text; see [`load_cloud`].
pub fn parse_cloud(text: &str, label: &str, expected_n: Option<usize>) -> Result<MeasurementCloud> {
    let mut reader =
        csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| csv_error(&e, 1))?.clone();
    if header.is_empty() || header.iter().all(str::is_empty) {
        return Err(Error::Parse { line: 1, message: "empty file: missing header row".into() });
    }
    let n = header.len();
    if let Some(want) = expected_n {
        if want != n {
            return Err(Error::dim(format!("header has {n} columns but {want} were expected")));
        }
    }

    let mut points = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(&e, 0))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != n {
            return Err(Error::Parse {
                line,
                message: format!("expected {n} fields, found {}", record.len()),
            });
        }
        let mut p = Vector::zeros(n);
        for (k, field) in record.iter().enumerate() {
            p[k] = field.parse::<f64>().map_err(|_| Error::Parse {
                line,
                message: format!("column {} is not a number: '{field}'", k + 1),
            })?;
            if !p[k].is_finite() {
                return Err(Error::Parse { line, message: format!("column {} is not finite", k + 1) });
            }
        }
        points.push(p);
    }
    if points.is_empty() {
        return Err(Error::Parse { line: 2, message: "empty file: no samples after the header".into() });
    }
    MeasurementCloud::new(points, label)
}

fn csv_error(e: &csv::Error, fallback_line: usize) -> Error {
    let line = e.position().map_or(fallback_line, |p| p.line() as usize);
    Error::Parse { line, message: e.to_string() }
}

/// Output of [`estimate_region`]: the fitted ellipsoid centered at the
/// origin, and the extracted center `x0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionEstimate {
    pub ellipsoid: Ellipsoid,
    pub center: Vector,
    pub retained: usize,
    pub dropped: usize,
}

impl RegionEstimate {
    /// The ellipsoid placed back at `x0`.
    pub fn located(&self) -> Result<Ellipsoid> {
        crate::polar::translate(&self.ellipsoid, &self.center)
    }
}

/// Indices of samples that survive the per-coordinate quantile trim.
pub fn trim_indices(cloud: &MeasurementCloud, fraction: f64) -> Vec<usize> {
    let len = cloud.len();
    let k = (fraction * len as f64).floor() as usize;
    if k == 0 || 2 * k >= len {
        return (0..len).collect();
    }
    let bounds: Vec<(f64, f64)> = (0..cloud.dim())
        .map(|j| {
            let mut col: Vec<f64> = cloud.points().iter().map(|p| p[j]).collect();
            col.sort_by(f64::total_cmp);
            (col[k], col[len - 1 - k])
        })
        .collect();
    (0..len)
        .filter(|&i| {
            let p = &cloud.points()[i];
            bounds.iter().enumerate().all(|(j, &(lo, hi))| lo <= p[j] && p[j] <= hi)
        })
        .collect()
}

/// Trims, centers and fits the localization ellipsoid.
///
/// Both estimators are fitted with their center pinned at `x0`, so the
/// returned ellipsoid is exactly centered and ready for polar duality.
pub fn estimate_region(cloud: &MeasurementCloud, cfg: &IngestConfig) -> Result<RegionEstimate> {
    cfg.validate()?;
    let n = cloud.dim();
    let keep = trim_indices(cloud, cfg.trim_fraction);
    let retained: Vec<Vector> = keep.iter().map(|&i| cloud.points()[i].clone()).collect();
    let trimmed = MeasurementCloud::new(retained, cloud.label())?;
    trimmed.ensure_full_rank()?;

    let center = match &cfg.center_mode {
        CenterMode::Mean => trimmed.mean(),
        CenterMode::Fixed(c) => {
            if c.len() != n {
                return Err(Error::dim(format!(
                    "fixed center has length {} but the cloud has dimension {n}",
                    c.len()
                )));
            }
            Vector::from_column_slice(c)
        }
    };
    let shifted =
        MeasurementCloud::new(trimmed.points().iter().map(|p| p - &center).collect(), cloud.label())?;
    let fitted = match cfg.estimator {
        Estimator::Loewner => mvee_centered(&shifted, cfg.eps, cfg.hbar)?,
        Estimator::John => john_of_cloud_at(&shifted, &Vector::zeros(n), cfg.eps, cfg.hbar)?,
    };
    let ellipsoid = Ellipsoid::centered(Space::Position, fitted.shape().clone(), cfg.hbar)?;
    Ok(RegionEstimate { ellipsoid, center, retained: trimmed.len(), dropped: cloud.len() - trimmed.len() })
}

/// How much larger the momentum region is than the polar dual of `X`.
#[derive(Debug, Clone, PartialEq)]
pub enum Slack {
    /// `P = sqrt(s) X^hbar`; `s >= 1`.
    Scalar(f64),
    /// `P = S^{1/2} X^hbar`; requires `S >= I` in the Loewner order.
    Matrix(Matrix),
}

/// Postulated momentum region `P ⊇ X^hbar`.
///
/// With scalar slack `s` the shape is `A^{-1} / s`; with a matrix slack `S`
/// it is `S^{-1/2} A^{-1} S^{-1/2}`, and the inclusion is verified.
pub fn postulate_momentum_region(x: &Ellipsoid, slack: &Slack) -> Result<Ellipsoid> {
    if x.space() != Space::Position {
        return Err(Error::invalid("momentum region must be postulated from a position ellipsoid"));
    }
    let dual = polar_dual(x, true)?;
    let n = x.dim();
    let shape = match slack {
        Slack::Scalar(s) => {
            if !s.is_finite() || *s < 1.0 {
                return Err(Error::Polarity(format!(
                    "slack {s} < 1 would make P smaller than the polar dual of X"
                )));
            }
            dual.shape() / *s
        }
        Slack::Matrix(m) => {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::dim(format!("slack matrix must be {n}x{n}")));
            }
            ensure_spd(m, "slack matrix")?;
            let r = spd_inv_sqrt(m);
            &r * dual.shape() * &r
        }
    };
    let p = Ellipsoid::centered(Space::Momentum, shape, x.hbar())?;
    let tol = 1e-12 * spd_inverse(dual.shape())?.norm().max(p.shape().norm());
    if !is_subset(&dual, &p, tol)? {
        return Err(Error::Polarity("slack does not keep P containing the polar dual of X".into()));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_cloud() {
        let c = parse_cloud("x1,x2,x3\n1,2,3\n4,5,6\n", "t", None).unwrap();
        assert_eq!(c.dim(), 3);
        assert_eq!(c.len(), 2);
        assert!(matches!(parse_cloud("x1,x2\n1,2\n", "t", Some(3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn parse_error_names_line() {
        match parse_cloud("x1,x2\n1,2\n3,abc\n", "t", None) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("abc"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_inputs() {
        assert!(matches!(parse_cloud("", "t", None), Err(Error::Parse { .. })));
        assert!(matches!(parse_cloud("x1,x2\n", "t", None), Err(Error::Parse { .. })));
    }

    #[test]
    fn config_json() {
        let cfg: IngestConfig = serde_json::from_str(
            r#"{"estimator":"john","trim_fraction":0.01,"center_mode":{"fixed":[1.0]},"eps":1e-6,"hbar":2.0}"#,
        )
        .unwrap();
        assert_eq!(cfg.estimator, Estimator::John);
        assert_eq!(cfg.center_mode, CenterMode::Fixed(vec![1.0]));
        let cfg: IngestConfig = serde_json::from_str(r#"{"center_mode":"mean"}"#).unwrap();
        assert_eq!(cfg, IngestConfig::default());
        assert!(IngestConfig { trim_fraction: 0.3, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn trim_drops_extremes() {
        let rows: Vec<Vec<f64>> = (0..100).map(|i| vec![i as f64]).collect();
        let c = MeasurementCloud::from_rows(&rows, "t").unwrap();
        let keep = trim_indices(&c, 0.05);
        assert_eq!(keep.len(), 90);
        assert_eq!(keep[0], 5);
    }

    #[test]
    fn square_loewner_is_centered() {
        let rows = vec![vec![1.0, 1.0], vec![-1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0], vec![3.0, 3.0]];
        let c = MeasurementCloud::from_rows(&rows, "t").unwrap();
        let cfg = IngestConfig { center_mode: CenterMode::Fixed(vec![0.0, 0.0]), ..Default::default() };
        let est = estimate_region(&c, &cfg).unwrap();
        assert!(est.ellipsoid.is_centered());
        for p in c.points() {
            assert!(est.ellipsoid.quadratic_form(p) <= 1.0 + 1e-6);
        }
    }

    #[test]
    fn too_few_points() {
        let c = MeasurementCloud::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]], "t").unwrap();
        assert!(matches!(estimate_region(&c, &IngestConfig::default()), Err(Error::RankDeficient(_))));
    }

    #[test]
    fn momentum_slack() {
        let x = Ellipsoid::centered(Space::Position, Matrix::identity(1, 1), 1.0).unwrap();
        let p = postulate_momentum_region(&x, &Slack::Scalar(1.0)).unwrap();
        assert_eq!(p.shape()[(0, 0)], 1.0);
        let p = postulate_momentum_region(&x, &Slack::Scalar(4.0)).unwrap();
        // p^2 / 4 <= 1
        assert_eq!(p.shape()[(0, 0)], 0.25);
        assert!(matches!(postulate_momentum_region(&x, &Slack::Scalar(0.5)), Err(Error::Polarity(_))));

        let x2 = Ellipsoid::centered(Space::Position, Matrix::identity(2, 2), 1.0).unwrap();
        let bad = Matrix::from_diagonal(&Vector::from_column_slice(&[2.0, 0.5]));
        assert!(matches!(postulate_momentum_region(&x2, &Slack::Matrix(bad)), Err(Error::Polarity(_))));
    }
}
