use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hurst index `H`, validated to the open interval `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct HurstParameter(f64);

impl HurstParameter {
    pub fn new(h: f64) -> Result<Self> {
        if h.is_finite() && h > 0.0 && h < 1.0 {
            Ok(Self(h))
        } else {
            Err(Error::InvalidHurst(h))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `2H`, the exponent appearing in the covariance.
    #[inline]
    pub fn twice(self) -> f64 {
        2.0 * self.0
    }
}

impl TryFrom<f64> for HurstParameter {
    type Error = Error;

    fn try_from(h: f64) -> Result<Self> {
        Self::new(h)
    }
}

impl From<HurstParameter> for f64 {
    fn from(h: HurstParameter) -> f64 {
        h.0
    }
}

impl FromStr for HurstParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let h: f64 = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("not a number: {s:?}")))?;
        Self::new(h)
    }
}

impl fmt::Display for HurstParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_open_interval() {
        for h in [1e-9, 0.25, 0.5, 0.75, 1.0 - 1e-9] {
            assert_eq!(HurstParameter::new(h).unwrap().value(), h);
        }
    }

    #[test]
    fn rejects_endpoints_and_garbage() {
        for h in [0.0, 1.0, -0.1, 1.2, f64::NAN, f64::INFINITY] {
            assert!(matches!(HurstParameter::new(h), Err(Error::InvalidHurst(_))));
        }
        assert!("abc".parse::<HurstParameter>().is_err());
        assert!("1.2".parse::<HurstParameter>().is_err());
        assert_eq!("0.3".parse::<HurstParameter>().unwrap().value(), 0.3);
    }

    #[test]
    fn serde_validates() {
        assert!(serde_json::from_str::<HurstParameter>("0.5").is_ok());
        assert!(serde_json::from_str::<HurstParameter>("1.5").is_err());
        assert_eq!(serde_json::to_string(&HurstParameter::new(0.5).unwrap()).unwrap(), "0.5");
    }
}
