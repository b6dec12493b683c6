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

//! Reconstruction of Gaussian quantum states from position localization.
//!
//! A measured position region is modelled as an ellipsoid `X`. Its polar
//! dual `X^hbar` is the smallest momentum region compatible with the
//! uncertainty principle. From `X` and any momentum ellipsoid `P ⊇ X^hbar`
//! the crate reconstructs
//!
//! * the pure Gaussian states whose position and momentum projections are
//!   `X` and `P` ([`reconstruct::reconstruct_pure`]), and
//! * the mixed state whose covariance ellipsoid is the John ellipsoid of
//!   `X x P` ([`reconstruct::reconstruct_mixed`]).
//!
//! Supporting modules cover symplectic linear algebra ([`symplectic`]),
//! ellipsoid geometry and point-cloud fitting ([`polar`]), state objects
//! ([`states`]) and CSV ingestion ([`ingest`]).
//!
//! ```
//! use polarrecon::polar::{polar_dual, Ellipsoid, Space};
//! use polarrecon::reconstruct::reconstruct_pure;
//! use polarrecon::linalg::Matrix;
//!
//! let x = Ellipsoid::centered(Space::Position, Matrix::identity(1, 1), 1.0).unwrap();
//! let p = polar_dual(&x, true).unwrap();
//! let set = reconstruct_pure(&x, &p).unwrap();
//! assert_eq!(set.multiplicity(), 1);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod ingest;
pub mod json;
pub mod linalg;
pub mod polar;
pub mod reconstruct;
pub mod states;
pub mod symplectic;

pub use error::{Error, Result};
