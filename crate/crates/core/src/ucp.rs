//! Use Case Point arithmetic: actor and use-case weights, the technical and
//! environmental adjustment factors, and the adjusted point total.
//!
//! All weights and affine constants are configurable; the defaults are
//! Karner's original values.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const KARNER_ACTOR_WEIGHTS: [f64; 3] = [1.0, 2.0, 3.0];
pub const KARNER_USE_CASE_WEIGHTS: [f64; 3] = [5.0, 10.0, 15.0];
pub const DEFAULT_TCF: Affine = Affine { intercept: 0.6, slope: 0.01 };
pub const DEFAULT_EF: Affine = Affine { intercept: 1.4, slope: -0.03 };

/// Counts of simple, average and complex items (actors or use cases).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct GradedCounts {
    pub simple: f64,
    pub average: f64,
    pub complex: f64,
}

pub type ActorCounts = GradedCounts;
pub type UseCaseCounts = GradedCounts;

impl GradedCounts {
    pub fn new(simple: f64, average: f64, complex: f64) -> Self {
        Self { simple, average, complex }
    }

    fn weighted(&self, weights: [f64; 3], what: &str) -> Result<f64> {
        for c in [self.simple, self.average, self.complex] {
            if !c.is_finite() || c < 0.0 {
                return Err(Error::invalid(format!("{what} count must be a finite value >= 0, got {c}")));
            }
        }
        Ok(self.simple * weights[0] + self.average * weights[1] + self.complex * weights[2])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorRating {
    pub weight: f64,
    /// Expert rating on the 0..=5 scale.
    pub value: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FactorRatings {
    pub entries: Vec<FactorRating>,
}

impl FactorRatings {
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Self {
        Self {
            entries: pairs
                .iter()
                .map(|&(weight, value)| FactorRating { weight, value })
                .collect(),
        }
    }

    /// The thirteen technical factors T1..T13 of the classic worked example,
    /// whose weighted sum is 30.
    pub fn technical_example() -> Self {
        Self::from_pairs(&[
            (2.0, 0.0), // distributed system
            (2.0, 0.0), // response or throughput objectives
            (1.0, 5.0), // end-user efficiency
            (1.0, 1.0), // complex internal processing
            (1.0, 3.0), // reusable code
            (0.5, 4.0), // easy to install
            (0.5, 4.0), // easy to use
            (2.0, 1.0), // portable
            (1.0, 4.0), // easy to change
            (1.0, 3.0), // concurrent
            (1.0, 3.0), // security features
            (1.0, 0.0), // access for third parties
            (1.0, 5.0), // special user training
        ])
    }

    pub fn concat(&self, other: &FactorRatings) -> FactorRatings {
        FactorRatings {
            entries: self.entries.iter().chain(&other.entries).copied().collect(),
        }
    }
}

/// `intercept + slope * factor`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Affine {
    pub intercept: f64,
    pub slope: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UcpBreakdown {
    pub uaw: f64,
    pub uucw: f64,
    pub uucp: f64,
    pub tcf: f64,
    pub ef: f64,
    pub ucp: f64,
}

pub fn compute_uaw(actors: &ActorCounts, weights: [f64; 3]) -> Result<f64> {
    actors.weighted(weights, "actor")
}

pub fn compute_uucw(use_cases: &UseCaseCounts, weights: [f64; 3]) -> Result<f64> {
    use_cases.weighted(weights, "use case")
}

/// Σ weight · value over the rating table.
pub fn compute_tfactor(ratings: &FactorRatings) -> Result<f64> {
    let mut sum = 0.0;
    for (i, r) in ratings.entries.iter().enumerate() {
        if !(0.0..=5.0).contains(&r.value) {
            return Err(Error::invalid(format!(
                "factor {} rating {} is outside [0, 5]",
                i + 1,
                r.value
            )));
        }
        if !r.weight.is_finite() {
            return Err(Error::NonFinite(format!("factor {} weight", i + 1)));
        }
        sum += r.weight * r.value;
    }
    Ok(sum)
}

pub fn compute_tcf(tfactor: f64, c0: f64, c1: f64) -> f64 {
    c0 + c1 * tfactor
}

pub fn compute_ef(efactor: f64, c0: f64, c1: f64) -> f64 {
    c0 + c1 * efactor
}

pub fn compute_ucp(uaw: f64, uucw: f64, tcf: f64, ef: f64) -> Result<UcpBreakdown> {
    for (name, v) in [("uaw", uaw), ("uucw", uucw), ("tcf", tcf), ("ef", ef)] {
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("{name} = {v}")));
        }
    }
    let uucp = uaw + uucw;
    Ok(UcpBreakdown {
        uaw,
        uucw,
        uucp,
        tcf,
        ef,
        ucp: uucp * tcf * ef,
    })
}

/// Everything needed for one UCP computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UcpInput {
    pub actors: ActorCounts,
    pub use_cases: UseCaseCounts,
    pub actor_weights: [f64; 3],
    pub use_case_weights: [f64; 3],
    pub technical: FactorRatings,
    pub environmental: FactorRatings,
    pub tcf_constants: Affine,
    pub ef_constants: Affine,
}

impl Default for UcpInput {
    fn default() -> Self {
        Self {
            actors: GradedCounts::default(),
            use_cases: GradedCounts::default(),
            actor_weights: KARNER_ACTOR_WEIGHTS,
            use_case_weights: KARNER_USE_CASE_WEIGHTS,
            technical: FactorRatings::default(),
            environmental: FactorRatings::default(),
            tcf_constants: DEFAULT_TCF,
            ef_constants: DEFAULT_EF,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UcpReport {
    pub tfactor: f64,
    pub efactor: f64,
    #[serde(flatten)]
    pub breakdown: UcpBreakdown,
}

impl UcpInput {
    pub fn evaluate(&self) -> Result<UcpReport> {
        let uaw = compute_uaw(&self.actors, self.actor_weights)?;
        let uucw = compute_uucw(&self.use_cases, self.use_case_weights)?;
        let tfactor = compute_tfactor(&self.technical)?;
        let efactor = compute_tfactor(&self.environmental)?;
        let tcf = compute_tcf(tfactor, self.tcf_constants.intercept, self.tcf_constants.slope);
        let ef = compute_ef(efactor, self.ef_constants.intercept, self.ef_constants.slope);
        Ok(UcpReport {
            tfactor,
            efactor,
            breakdown: compute_ucp(uaw, uucw, tcf, ef)?,
        })
    }

    /// Apply one `key = value` setting. Keys: `actors`, `use_cases`,
    /// `actor_weights`, `use_case_weights` (three numbers each),
    /// `technical`, `environmental` (`weight:value` pairs), `tcf_constants`,
    /// `ef_constants` (intercept and slope).
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "actors" => self.actors = triple(key, value)?.into(),
            "use_cases" => self.use_cases = triple(key, value)?.into(),
            "actor_weights" => self.actor_weights = triple(key, value)?,
            "use_case_weights" => self.use_case_weights = triple(key, value)?,
            "technical" => self.technical = parse_ratings(value)?,
            "environmental" => self.environmental = parse_ratings(value)?,
            "tcf_constants" => self.tcf_constants = pair(key, value)?,
            "ef_constants" => self.ef_constants = pair(key, value)?,
            other => return Err(Error::invalid(format!("unknown UCP key `{other}`"))),
        }
        Ok(())
    }
}

impl From<[f64; 3]> for GradedCounts {
    fn from(v: [f64; 3]) -> Self {
        GradedCounts::new(v[0], v[1], v[2])
    }
}

/// `key = value` lines; `#` starts a comment.
impl FromStr for UcpInput {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut input = UcpInput::default();
        for (n, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("line {}: expected key = value", n + 1)))?;
            input
                .set(key.trim(), value.trim())
                .map_err(|e| Error::invalid(format!("line {}: {e}", n + 1)))?;
        }
        Ok(input)
    }
}

fn numbers(value: &str) -> Result<Vec<f64>> {
    value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::invalid(format!("`{t}` is not a number")))
        })
        .collect()
}

fn triple(key: &str, value: &str) -> Result<[f64; 3]> {
    numbers(value)?
        .try_into()
        .map_err(|_| Error::invalid(format!("`{key}` takes exactly three numbers")))
}

fn pair(key: &str, value: &str) -> Result<Affine> {
    match numbers(value)?.as_slice() {
        &[intercept, slope] => Ok(Affine { intercept, slope }),
        _ => Err(Error::invalid(format!("`{key}` takes an intercept and a slope"))),
    }
}

/// Parse `w:v` pairs separated by commas or whitespace.
pub fn parse_ratings(value: &str) -> Result<FactorRatings> {
    let mut entries = Vec::new();
    for tok in value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
    {
        let (w, v) = tok
            .split_once(':')
            .ok_or_else(|| Error::invalid(format!("rating `{tok}` is not weight:value")))?;
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::invalid(format!("`{s}` is not a number")))
        };
        entries.push(FactorRating {
            weight: parse(w)?,
            value: parse(v)?,
        });
    }
    Ok(FactorRatings { entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn actor_and_use_case_weights() {
        let w = KARNER_ACTOR_WEIGHTS;
        assert_eq!(compute_uaw(&GradedCounts::new(0.0, 0.0, 0.0), w).unwrap(), 0.0);
        assert_eq!(compute_uaw(&GradedCounts::new(2.0, 0.0, 1.0), w).unwrap(), 5.0);
        assert_eq!(compute_uaw(&GradedCounts::new(1.0, 1.0, 1.0), w).unwrap(), 6.0);
        assert!(compute_uaw(&GradedCounts::new(-1.0, 0.0, 0.0), w).is_err());

        let w = KARNER_USE_CASE_WEIGHTS;
        assert_eq!(compute_uucw(&GradedCounts::new(0.0, 0.0, 0.0), w).unwrap(), 0.0);
        assert_eq!(compute_uucw(&GradedCounts::new(3.0, 0.0, 1.0), w).unwrap(), 30.0);
        assert_eq!(compute_uucw(&GradedCounts::new(1.0, 2.0, 0.0), w).unwrap(), 25.0);
    }

    #[test]
    fn tfactor_examples() {
        assert_eq!(compute_tfactor(&FactorRatings::technical_example()).unwrap(), 30.0);
        let zeros = FactorRatings::from_pairs(&[(2.0, 0.0), (1.0, 0.0)]);
        assert_eq!(compute_tfactor(&zeros).unwrap(), 0.0);
        assert_eq!(compute_tfactor(&FactorRatings::from_pairs(&[(2.0, 5.0)])).unwrap(), 10.0);
        assert!(compute_tfactor(&FactorRatings::from_pairs(&[(1.0, 6.0)])).is_err());
        assert!(compute_tfactor(&FactorRatings::from_pairs(&[(1.0, -0.5)])).is_err());
    }

    #[test]
    fn adjustment_factors() {
        let tcf = |t| compute_tcf(t, DEFAULT_TCF.intercept, DEFAULT_TCF.slope);
        assert!((tcf(30.0) - 0.9).abs() < 1e-15);
        assert_eq!(tcf(0.0), 0.6);
        assert_eq!(compute_tcf(7.25, 0.0, 1.0), 7.25);

        let ef = |e| compute_ef(e, DEFAULT_EF.intercept, DEFAULT_EF.slope);
        assert_eq!(ef(0.0), 1.4);
        assert!((ef(20.0) - 0.8).abs() < 1e-15);
        assert_eq!(compute_ef(13.0, 1.1, 0.0), 1.1);
    }

    #[test]
    fn ucp_breakdown() {
        let b = compute_ucp(5.0, 30.0, 0.9, 0.8).unwrap();
        assert_eq!(b.uucp, 35.0);
        assert!((b.ucp - 25.2).abs() < 1e-12);
        let b = compute_ucp(12.0, 40.0, 1.0, 1.0).unwrap();
        assert_eq!(b.ucp, b.uucp);
        assert_eq!(compute_ucp(0.0, 0.0, 0.9, 0.8).unwrap().ucp, 0.0);
        assert!(compute_ucp(f64::NAN, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn parses_key_value_input() {
        let text = "\
# worked example
actors = 2, 0, 1
use_cases = 3 0 1
technical = 2:0 2:0 1:5 1:1 1:3 0.5:4 0.5:4 2:1 1:4 1:3 1:3 1:0 1:5
environmental = 1:0
ef_constants = 1.4 -0.03
";
        let report: UcpReport = text.parse::<UcpInput>().unwrap().evaluate().unwrap();
        assert_eq!(report.tfactor, 30.0);
        assert_eq!(report.breakdown.uaw, 5.0);
        assert_eq!(report.breakdown.uucw, 30.0);
        assert!((report.breakdown.tcf - 0.9).abs() < 1e-15);
        assert_eq!(report.breakdown.ef, 1.4);

        assert!("actors = 1 2".parse::<UcpInput>().is_err());
        assert!("colour = blue".parse::<UcpInput>().is_err());
        assert!("technical = 2-3".parse::<UcpInput>().is_err());
    }
}
