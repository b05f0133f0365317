//! The hitting-set container shared by fsgen, genabp and assembly, and its
//! JSON file format.

use serde::{Deserialize, Serialize};

use crate::field::Ring;
use crate::linalg::Mat;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dtilde: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub height: Option<usize>,
    pub dim: usize,
    /// "Q" or "K".
    pub field: String,
    pub ell: usize,
    pub kappa: u32,
    #[serde(rename = "L")]
    pub big_l: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub blockdim: Option<usize>,
    pub mode: String,
    pub count: usize,
    /// Free-form provenance of caps and backends.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certification {
    pub det_nonzero: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sigma_chain_ok: Option<bool>,
    /// How the determinant was certified, e.g. "mod 998244353 at t=1000003".
    pub method: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "R: Serialize", deserialize = "R: Deserialize<'de>"))]
pub struct HitPoint<R: Ring> {
    pub matrices: Vec<Mat<R>>,
    pub cert: Certification,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "R: Serialize", deserialize = "R: Deserialize<'de>"))]
pub struct HittingSet<R: Ring> {
    pub meta: Meta,
    pub points: Vec<HitPoint<R>>,
}

impl<R: Ring> HittingSet<R> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn tuples(&self) -> impl Iterator<Item = &[Mat<R>]> {
        self.points.iter().map(|p| p.matrices.as_slice())
    }
}
