use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::MAX_DIM;
use crate::convex::ConvexBody;
use crate::error::{Error, Result};
use crate::hr::SignConvention;
use crate::kahler::HermitianMatrix;

/// Inclusive range of ambient dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NRange {
    pub min: usize,
    pub max: usize,
}

impl NRange {
    pub fn single(n: usize) -> Self {
        Self { min: n, max: n }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        self.min..=self.max
    }
}

impl FromStr for NRange {
    type Err = Error;

    /// `"4"`, `"2..4"`, `"2..=4"` or `"2-4"`, all inclusive.
    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidConfig(format!("bad dimension {t:?}")))
        };
        let s = s.trim();
        for sep in ["..=", "..", "-"] {
            if let Some((a, b)) = s.split_once(sep) {
                return Ok(Self {
                    min: parse(a)?,
                    max: parse(b)?,
                });
            }
        }
        parse(s).map(Self::single)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(Error::InvalidConfig(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductTermSpec {
    pub weight: f64,
    pub factors: Vec<HermitianMatrix>,
}

/// An (n−2,n−2)-class supplied on the command line or in a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CandidateSpec {
    Product {
        terms: Vec<ProductTermSpec>,
    },
    /// Canonical-basis coefficients of an (n−2,n−2)-form.
    Raw {
        n: usize,
        coeffs: Vec<Complex64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConeConfig {
    pub steps: usize,
    pub search_attempts: usize,
    pub limit_trials: usize,
    pub candidate: Option<CandidateSpec>,
}

impl Default for ConeConfig {
    fn default() -> Self {
        Self {
            steps: 256,
            search_attempts: 50,
            limit_trials: 100,
            candidate: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MixedConfig {
    pub bodies: Vec<ConvexBody>,
    pub multiplicities: Vec<i64>,
    pub classes: Vec<HermitianMatrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub master_seed: u64,
    pub n_range: NRange,
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub trial_count: usize,
    pub tolerance: f64,
    pub sign_convention: SignConvention,
    pub workers: Option<usize>,
    /// Random forms per trial for the coercivity estimate.
    pub inequality_samples: usize,
    /// Random forms per trial for metric positivity.
    pub metric_samples: usize,
    pub output: OutputConfig,
    pub cone: ConeConfig,
    pub mixed: MixedConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            master_seed: 42,
            n_range: NRange { min: 2, max: 4 },
            p: None,
            q: None,
            trial_count: 25,
            tolerance: 1e-9,
            sign_convention: SignConvention::Classical,
            workers: None,
            inequality_samples: 100,
            metric_samples: 20,
            output: OutputConfig::default(),
            cone: ConeConfig::default(),
            mixed: MixedConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.trial_count == 0 {
            return Err(Error::InvalidConfig("trial_count must be ≥ 1".into()));
        }
        let NRange { min, max } = self.n_range;
        if min == 0 || max > MAX_DIM || min > max {
            return Err(Error::InvalidConfig(format!(
                "n_range {min}..{max} must lie within 1..{MAX_DIM}"
            )));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerance {} must be positive",
                self.tolerance
            )));
        }
        if self.workers == Some(0) {
            return Err(Error::InvalidConfig("workers must be ≥ 1".into()));
        }
        for (name, v) in [("p", self.p), ("q", self.q)] {
            if let Some(v) = v {
                if v > max {
                    return Err(Error::InvalidConfig(format!(
                        "{name} = {v} exceeds n ≤ {max}"
                    )));
                }
            }
        }
        if let (Some(p), Some(q)) = (self.p, self.q) {
            if p + q > max {
                return Err(Error::InvalidConfig(format!(
                    "bidegree ({p},{q}) does not fit in n ≤ {max}"
                )));
            }
        }
        Ok(())
    }

    /// Bidegrees (p,q), p+q ≤ n, passing the p/q filters.
    pub fn bidegrees(&self, n: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for p in 0..=n {
            for q in 0..=n - p {
                if self.p.map_or(true, |x| x == p) && self.q.map_or(true, |x| x == q) {
                    out.push((p, q));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!("3".parse::<NRange>().unwrap(), NRange::single(3));
        assert_eq!("2..4".parse::<NRange>().unwrap(), NRange { min: 2, max: 4 });
        assert_eq!("2-5".parse::<NRange>().unwrap(), NRange { min: 2, max: 5 });
        assert!("x".parse::<NRange>().is_err());
    }

    #[test]
    fn validation() {
        let mut c = RunConfig::default();
        assert!(c.validate().is_ok());
        c.trial_count = 0;
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.n_range = NRange { min: 1, max: 9 };
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.tolerance = -1.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn json_round_trip_and_partial() {
        let c = RunConfig::default();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(RunConfig::from_json(&text).unwrap(), c);
        let partial =
            RunConfig::from_json(r#"{"master_seed": 7, "sign_convention": "alternate"}"#).unwrap();
        assert_eq!(partial.master_seed, 7);
        assert_eq!(partial.sign_convention, SignConvention::Alternate);
        assert_eq!(partial.trial_count, 25);
        assert!(RunConfig::from_json(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn bidegree_filter() {
        let mut c = RunConfig::default();
        assert_eq!(c.bidegrees(2).len(), 6);
        c.p = Some(1);
        assert_eq!(c.bidegrees(2), vec![(1, 0), (1, 1)]);
    }
}
