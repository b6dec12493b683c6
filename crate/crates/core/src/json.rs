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

//! JSON documents exchanged by the command-line tool.
//!
//! Floats are written with 17 significant digits so that every double
//! survives a write/read cycle unchanged.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::error::{Error, Result};
use crate::ingest::RegionEstimate;
use crate::linalg::{matrix_from_rows, matrix_to_rows, Matrix, Vector};
use crate::polar::{translate, Ellipsoid, Space};
use crate::reconstruct::{CovarianceMatrix, PurityClass};
use crate::states::{GaussianState, PureGaussianWavefunction};

pub const DEFAULT_HBAR: f64 = 1.0;

struct Precise;

impl Formatter for Precise {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }
}

/// Compact JSON with 17-significant-digit floats.
pub fn to_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Precise);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

/// Picks the hbar from a document and an optional override, refusing to
/// reconcile two different values.
pub fn resolve_hbar(in_file: Option<f64>, flag: Option<f64>) -> Result<f64> {
    match (in_file, flag) {
        (Some(a), Some(b)) if a != b => {
            Err(Error::invalid(format!("hbar mismatch: document has {a}, command line has {b}")))
        }
        (Some(a), _) => Ok(a),
        (None, Some(b)) => Ok(b),
        (None, None) => Ok(DEFAULT_HBAR),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllipsoidDoc {
    pub space: Space,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbar: Option<f64>,
    pub center: Vec<f64>,
    pub shape: Vec<Vec<f64>>,
}

impl EllipsoidDoc {
    pub fn from_ellipsoid(e: &Ellipsoid) -> Self {
        EllipsoidDoc {
            space: e.space(),
            hbar: Some(e.hbar()),
            center: e.center().iter().copied().collect(),
            shape: matrix_to_rows(e.shape()),
        }
    }

    pub fn to_ellipsoid(&self, hbar_flag: Option<f64>) -> Result<Ellipsoid> {
        let hbar = resolve_hbar(self.hbar, hbar_flag)?;
        Ellipsoid::new(
            self.space,
            Vector::from_column_slice(&self.center),
            matrix_from_rows(&self.shape)?,
            hbar,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestDoc {
    pub ellipsoid: EllipsoidDoc,
    pub center: Vec<f64>,
    pub retained: usize,
    pub dropped: usize,
}

impl IngestDoc {
    pub fn from_estimate(est: &RegionEstimate) -> Self {
        IngestDoc {
            ellipsoid: EllipsoidDoc::from_ellipsoid(&est.ellipsoid),
            center: est.center.iter().copied().collect(),
            retained: est.retained,
            dropped: est.dropped,
        }
    }

    /// The fitted ellipsoid placed at the extracted center.
    pub fn to_ellipsoid(&self, hbar_flag: Option<f64>) -> Result<Ellipsoid> {
        let e = self.ellipsoid.to_ellipsoid(hbar_flag)?;
        translate(&e, &Vector::from_column_slice(&self.center))
    }
}

/// Reads either a bare ellipsoid document or the output of `ingest`.
pub fn parse_ellipsoid(text: &str, hbar_flag: Option<f64>) -> Result<Ellipsoid> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("ellipsoid").is_some() {
        serde_json::from_value::<IngestDoc>(value)?.to_ellipsoid(hbar_flag)
    } else {
        serde_json::from_value::<EllipsoidDoc>(value)?.to_ellipsoid(hbar_flag)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceDoc {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbar: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean: Option<Vec<f64>>,
    pub sigma: Vec<Vec<f64>>,
    /// Derived from `sigma`; ignored on input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub purity_class: Option<PurityClass>,
}

impl CovarianceDoc {
    pub fn from_covariance(c: &CovarianceMatrix) -> Result<Self> {
        Ok(CovarianceDoc {
            n: c.n(),
            hbar: Some(c.hbar()),
            mean: Some(c.mean().iter().copied().collect()),
            sigma: matrix_to_rows(c.sigma()),
            purity_class: Some(c.purity_class()?),
        })
    }

    pub fn to_covariance(&self, hbar_flag: Option<f64>) -> Result<CovarianceMatrix> {
        let hbar = resolve_hbar(self.hbar, hbar_flag)?;
        let sigma: Matrix = matrix_from_rows(&self.sigma)?;
        if sigma.nrows() != 2 * self.n {
            return Err(Error::dim(format!(
                "n = {} but sigma is {}x{}",
                self.n,
                sigma.nrows(),
                sigma.ncols()
            )));
        }
        let mean = match &self.mean {
            Some(m) => Vector::from_column_slice(m),
            None => Vector::zeros(2 * self.n),
        };
        CovarianceMatrix::new(sigma, mean, hbar)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavefunctionDoc {
    pub sigma_xx: Vec<Vec<f64>>,
    pub sigma_xp: Vec<Vec<f64>>,
    pub x0: Vec<f64>,
    pub sign_branch: Vec<i8>,
}

impl WavefunctionDoc {
    pub fn from_wavefunction(w: &PureGaussianWavefunction) -> Self {
        WavefunctionDoc {
            sigma_xx: matrix_to_rows(w.sigma_xx()),
            sigma_xp: matrix_to_rows(w.sigma_xp()),
            x0: w.x0().iter().copied().collect(),
            sign_branch: w.sign_branch().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianStateDoc {
    pub covariance: CovarianceDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub purity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<PurityClass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavefunction: Option<WavefunctionDoc>,
}

impl GaussianStateDoc {
    pub fn from_state(s: &GaussianState) -> Result<Self> {
        Ok(GaussianStateDoc {
            covariance: CovarianceDoc::from_covariance(s.covariance())?,
            purity: Some(s.purity()),
            classification: Some(s.classification()),
            wavefunction: s.wavefunction().map(WavefunctionDoc::from_wavefunction),
        })
    }
}

/// Reads a covariance document or a Gaussian-state document.
pub fn parse_covariance(text: &str, hbar_flag: Option<f64>) -> Result<CovarianceMatrix> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("covariance").is_some() {
        serde_json::from_value::<GaussianStateDoc>(value)?.covariance.to_covariance(hbar_flag)
    } else {
        serde_json::from_value::<CovarianceDoc>(value)?.to_covariance(hbar_flag)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckDoc {
    pub quantum_ok: bool,
    pub symplectic_eigenvalues: Vec<f64>,
    pub rs_margins: Vec<f64>,
    pub purity: f64,
    pub pure: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerSummaryDoc {
    pub integral_estimate: f64,
    pub max_at: Vec<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_17_digits() {
        let s = to_string(&vec![0.1, 1.0 / 3.0, -0.0, 2.0]).unwrap();
        assert_eq!(
            s,
            "[1.0000000000000001e-1,3.3333333333333331e-1,-0.0000000000000000e0,2.0000000000000000e0]"
        );
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vec![0.1, 1.0 / 3.0, -0.0, 2.0]);
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let e = Ellipsoid::centered(Space::Position, Matrix::identity(2, 2) * 0.7, 1.3).unwrap();
        let s = to_string(&EllipsoidDoc::from_ellipsoid(&e)).unwrap();
        let again = parse_ellipsoid(&s, None).unwrap();
        assert_eq!(to_string(&EllipsoidDoc::from_ellipsoid(&again)).unwrap(), s);
    }

    #[test]
    fn hbar_rules() {
        assert_eq!(resolve_hbar(None, None).unwrap(), 1.0);
        assert_eq!(resolve_hbar(Some(2.0), Some(2.0)).unwrap(), 2.0);
        assert!(matches!(resolve_hbar(Some(2.0), Some(1.0)), Err(Error::Validation(_))));
    }

    #[test]
    fn covariance_accepts_state_document() {
        let text = r#"{"covariance":{"n":1,"sigma":[[0.5,0.0],[0.0,0.5]]},"purity":1.0}"#;
        let c = parse_covariance(text, None).unwrap();
        assert_eq!(c.hbar(), 1.0);
        let bad = r#"{"n":2,"sigma":[[0.5,0.0],[0.0,0.5]]}"#;
        assert!(matches!(parse_covariance(bad, None), Err(Error::Dimension(_))));
    }
}
