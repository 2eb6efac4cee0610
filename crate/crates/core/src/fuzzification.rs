//! First network layer: equally spaced membership functions per feature.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MembershipFamily {
    Gaussian,
    Triangular,
}

impl fmt::Display for MembershipFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MembershipFamily::Gaussian => "gaussian",
            MembershipFamily::Triangular => "triangular",
        })
    }
}

impl FromStr for MembershipFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" => Ok(MembershipFamily::Gaussian),
            "triangular" => Ok(MembershipFamily::Triangular),
            other => Err(Error::invalid(format!(
                "unknown membership family `{other}` (expected gaussian or triangular)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MembershipFunction {
    Gaussian {
        center: f64,
        sigma: f64,
    },
    /// Piecewise-linear hat. A shouldered side stays at 1 past the peak
    /// instead of falling to its foot.
    Triangular {
        left: f64,
        peak: f64,
        right: f64,
        left_shoulder: bool,
        right_shoulder: bool,
    },
    /// Membership 1 everywhere; used for features with no spread.
    Constant,
}

impl MembershipFunction {
    pub fn center(&self) -> f64 {
        match *self {
            MembershipFunction::Gaussian { center, .. } => center,
            MembershipFunction::Triangular { peak, .. } => peak,
            MembershipFunction::Constant => 0.0,
        }
    }
}

/// Degree of membership of `x`, always in [0, 1].
pub fn membership(f: &MembershipFunction, x: f64) -> f64 {
    match *f {
        MembershipFunction::Gaussian { center, sigma } => {
            (-(x - center).powi(2) / (2.0 * sigma * sigma)).exp()
        }
        MembershipFunction::Triangular {
            left,
            peak,
            right,
            left_shoulder,
            right_shoulder,
        } => {
            let v = if x < peak {
                if left_shoulder {
                    1.0
                } else if x <= left {
                    0.0
                } else {
                    (x - left) / (peak - left)
                }
            } else if right_shoulder {
                1.0
            } else if x >= right {
                0.0
            } else {
                (right - x) / (right - peak)
            };
            v.clamp(0.0, 1.0)
        }
        MembershipFunction::Constant => 1.0,
    }
}

/// Membership functions of one feature, ordered by center.
#[derive(Debug, Clone, PartialEq)]
pub struct FeaturePartition {
    pub functions: Vec<MembershipFunction>,
    pub min: f64,
    pub max: f64,
}

impl FeaturePartition {
    pub fn is_constant(&self) -> bool {
        matches!(self.functions.as_slice(), [MembershipFunction::Constant])
    }

    fn build(min: f64, max: f64, m: usize, family: MembershipFamily) -> Self {
        if max - min <= 1e-12 * (1.0 + min.abs().max(max.abs())) {
            return Self {
                functions: vec![MembershipFunction::Constant],
                min,
                max,
            };
        }
        let step = (max - min) / (m - 1) as f64;
        let centers: Vec<f64> = (0..m)
            .map(|k| if k == m - 1 { max } else { min + k as f64 * step })
            .collect();
        let functions = match family {
            MembershipFamily::Gaussian => {
                let sigma = step / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt());
                centers
                    .iter()
                    .map(|&center| MembershipFunction::Gaussian { center, sigma })
                    .collect()
            }
            MembershipFamily::Triangular => (0..m)
                .map(|k| MembershipFunction::Triangular {
                    left: if k == 0 { centers[0] } else { centers[k - 1] },
                    peak: centers[k],
                    right: if k == m - 1 { centers[k] } else { centers[k + 1] },
                    left_shoulder: k == 0,
                    right_shoulder: k == m - 1,
                })
                .collect(),
        };
        Self { functions, min, max }
    }
}

/// Grid partition of the input space: `m` functions for every feature with
/// spread, a single constant function otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzificationGrid {
    pub family: MembershipFamily,
    pub m: usize,
    pub per_feature: Vec<FeaturePartition>,
}

/// Anchor the grid on the observed per-feature range of `train`.
pub fn build_grid(train: &Dataset, m: usize, family: MembershipFamily) -> Result<FuzzificationGrid> {
    if train.is_empty() {
        return Err(Error::invalid("cannot build a grid on an empty dataset"));
    }
    let ranges: Vec<(f64, f64)> = (0..train.n_features())
        .map(|j| {
            train
                .column(j)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
        })
        .collect();
    FuzzificationGrid::from_ranges(&ranges, m, family)
}

impl FuzzificationGrid {
    pub fn from_ranges(
        ranges: &[(f64, f64)],
        m: usize,
        family: MembershipFamily,
    ) -> Result<Self> {
        if m < 2 {
            return Err(Error::invalid(format!("m must be ≥ 2, got {m}")));
        }
        if ranges.is_empty() {
            return Err(Error::invalid("grid needs at least one feature"));
        }
        let mut per_feature = Vec::with_capacity(ranges.len());
        for (j, &(min, max)) in ranges.iter().enumerate() {
            if !(min.is_finite() && max.is_finite()) || min > max {
                return Err(Error::invalid(format!("feature {j} has invalid range [{min}, {max}]")));
            }
            per_feature.push(FeaturePartition::build(min, max, m, family));
        }
        Ok(Self { family, m, per_feature })
    }

    pub fn n_features(&self) -> usize {
        self.per_feature.len()
    }

    pub fn feature_ranges(&self) -> Vec<(f64, f64)> {
        self.per_feature.iter().map(|p| (p.min, p.max)).collect()
    }

    /// Number of functions per feature (1 for constant features).
    pub fn mf_counts(&self) -> Vec<usize> {
        self.per_feature.iter().map(|p| p.functions.len()).collect()
    }

    /// N × M matrix of membership degrees. Rows of constant features hold a
    /// single 1 in column 0.
    pub fn fuzzify(&self, sample: &[f64]) -> Result<DMatrix<f64>> {
        if sample.len() != self.n_features() {
            return Err(Error::DimensionMismatch {
                expected: self.n_features(),
                found: sample.len(),
            });
        }
        let mut out = DMatrix::zeros(self.n_features(), self.m);
        for (j, (part, &x)) in self.per_feature.iter().zip(sample).enumerate() {
            for (l, f) in part.functions.iter().enumerate() {
                out[(j, l)] = membership(f, x);
            }
        }
        Ok(out)
    }
}
