//! Model parameters, numeric modes, tolerances and run configuration.

use std::fmt;
use std::path::Path;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};

/// Which arithmetic backend the analytic routines run on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NumericMode {
    #[serde(rename = "exact", alias = "exact_rational")]
    ExactRational,
    #[serde(rename = "float", alias = "float64")]
    Float64,
}

impl fmt::Display for NumericMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericMode::ExactRational => f.write_str("exact"),
            NumericMode::Float64 => f.write_str("float"),
        }
    }
}

/// The jump coefficient `p`, stored exactly when it came in as a ratio.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficient {
    Exact(Rational),
    Float(f64),
}

/// Parameters of the chain. Construction guarantees `0 < p <= 1`, so `p * x`
/// is a probability for every state `x` in `(0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    p: Coefficient,
}

impl ModelParams {
    /// Exact coefficient `num / den`.
    pub fn exact(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Precondition("denominator must be nonzero".into()));
        }
        Self::from_rational(Rational::from_ratio(num, den))
    }

    pub fn from_rational(p: Rational) -> Result<Self> {
        if p <= Rational::zero() || p > Rational::one() {
            return Err(Error::OutOfRange(format_rational(&p)));
        }
        Ok(Self {
            p: Coefficient::Exact(p),
        })
    }

    /// Floating-point coefficient.
    pub fn float(p: f64) -> Result<Self> {
        if !p.is_finite() || p <= 0.0 || p > 1.0 {
            return Err(Error::OutOfRange(p.to_string()));
        }
        Ok(Self {
            p: Coefficient::Float(p),
        })
    }

    /// Parses a command-line style literal. In exact mode only `a/b` or an
    /// integer is accepted; in float mode decimals and ratios both work.
    pub fn parse(literal: &str, mode: NumericMode) -> Result<Self> {
        match (parse_rational(literal), mode) {
            (Some(r), NumericMode::ExactRational) => Self::from_rational(r),
            (Some(r), NumericMode::Float64) => Self::float(r.to_f64()),
            (None, NumericMode::ExactRational) => {
                if literal.trim().parse::<f64>().is_ok() {
                    Err(Error::NonRational(literal.to_string()))
                } else {
                    Err(Error::Parse(literal.to_string()))
                }
            }
            (None, NumericMode::Float64) => literal
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(literal.to_string()))
                .and_then(Self::float),
        }
    }

    pub fn coefficient(&self) -> &Coefficient {
        &self.p
    }

    pub fn mode(&self) -> NumericMode {
        match self.p {
            Coefficient::Exact(_) => NumericMode::ExactRational,
            Coefficient::Float(_) => NumericMode::Float64,
        }
    }

    pub fn p_f64(&self) -> f64 {
        match &self.p {
            Coefficient::Exact(r) => r.to_f64(),
            Coefficient::Float(v) => *v,
        }
    }

    /// The exact coefficient, or [`Error::Mode`] for float parameters.
    pub fn p_exact(&self) -> Result<&Rational> {
        match &self.p {
            Coefficient::Exact(r) => Ok(r),
            Coefficient::Float(_) => Err(Error::Mode("exact coefficient")),
        }
    }

    /// The coefficient in the requested scalar backend. Float coefficients
    /// convert to rationals through their exact binary value.
    pub fn p_as<S: Scalar>(&self) -> S {
        match &self.p {
            Coefficient::Exact(r) => S::from_rational(r),
            Coefficient::Float(v) => S::from_f64(*v),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.p {
            Coefficient::Exact(r) => r.is_one(),
            Coefficient::Float(v) => *v == 1.0,
        }
    }
}

impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.p {
            Coefficient::Exact(r) => f.write_str(&format_rational(r)),
            Coefficient::Float(v) => write!(f, "{v}"),
        }
    }
}

/// Wire form of the coefficient: a `"a/b"` string for exact values, a JSON
/// number for floats.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoefficientRepr {
    Ratio(String),
    Float(f64),
}

impl Serialize for ModelParams {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match &self.p {
            Coefficient::Exact(r) => CoefficientRepr::Ratio(format_rational(r)),
            Coefficient::Float(v) => CoefficientRepr::Float(*v),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ModelParams {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match CoefficientRepr::deserialize(d)? {
            CoefficientRepr::Ratio(s) => {
                ModelParams::parse(&s, NumericMode::ExactRational).map_err(D::Error::custom)
            }
            CoefficientRepr::Float(v) => ModelParams::float(v).map_err(D::Error::custom),
        }
    }
}

/// Numerical tolerances used across quadrature cross-checks and gates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub quad_rel_tol: f64,
    pub match_abs_tol: f64,
    pub mc_alpha: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            quad_rel_tol: 1e-10,
            match_abs_tol: 1e-9,
            mc_alpha: 0.01,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        if !(self.quad_rel_tol > 0.0) || !(self.match_abs_tol > 0.0) {
            return Err(Error::Tolerance("tolerances must be strictly positive".into()));
        }
        if !(self.mc_alpha > 0.0 && self.mc_alpha < 0.5) {
            return Err(Error::Tolerance(format!(
                "mc_alpha {} is outside (0, 0.5)",
                self.mc_alpha
            )));
        }
        Ok(())
    }
}

/// A complete run configuration, as read from a JSON config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub p: ModelParams,
    #[serde(default = "default_mode")]
    pub mode: NumericMode,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seed: u64,
}

fn default_mode() -> NumericMode {
    NumericMode::ExactRational
}

impl Config {
    pub fn new(p: ModelParams) -> Self {
        let mode = p.mode();
        Self {
            p,
            mode,
            tolerances: Tolerances::default(),
            seed: 0,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Config =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        cfg.tolerances.validate()?;
        if cfg.mode == NumericMode::ExactRational && cfg.p.mode() == NumericMode::Float64 {
            return Err(Error::NonRational(cfg.p.to_string()));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn half_is_accepted() {
        let p = ModelParams::exact(1, 2).unwrap();
        assert_eq!(p.p_exact().unwrap(), &Rational::from_ratio(1, 2));
    }

    #[test]
    fn above_one_is_out_of_range() {
        assert!(matches!(ModelParams::exact(3, 2), Err(Error::OutOfRange(_))));
        assert!(matches!(ModelParams::float(0.0), Err(Error::OutOfRange(_))));
        assert!(matches!(ModelParams::exact(-1, 2), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn one_is_a_valid_boundary() {
        let p = ModelParams::exact(1, 1).unwrap();
        assert!(p.is_one());
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(matches!(ModelParams::exact(1, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn exact_mode_rejects_decimal_literal() {
        assert!(matches!(
            ModelParams::parse("0.5", NumericMode::ExactRational),
            Err(Error::NonRational(_))
        ));
        assert!(matches!(
            ModelParams::parse("abc", NumericMode::ExactRational),
            Err(Error::Parse(_))
        ));
        let f = ModelParams::parse("0.25", NumericMode::Float64).unwrap();
        assert_eq!(f.p_f64(), 0.25);
        assert!(f.p_exact().is_err());
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerances::default().validate().is_ok());
        let bad = Tolerances {
            mc_alpha: 0.5,
            ..Tolerances::default()
        };
        assert!(bad.validate().is_err());
        let bad = Tolerances {
            quad_rel_tol: 0.0,
            ..Tolerances::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn config_from_json() {
        let cfg = Config::from_json(
            r#"{"p": "1/3", "mode": "exact", "seed": 7, "tolerances": {"mc_alpha": 0.05}}"#,
        )
        .unwrap();
        assert_eq!(cfg.p, ModelParams::exact(1, 3).unwrap());
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.tolerances.mc_alpha, 0.05);
        assert_eq!(cfg.tolerances.quad_rel_tol, 1e-10);
        assert!(Config::from_json(r#"{"p": 0.5, "mode": "exact"}"#).is_err());
        assert!(Config::from_json(r#"{"p": 0.5, "mode": "float"}"#).is_ok());
    }

    proptest! {
        #[test]
        fn constructed_params_lie_in_unit_interval(num in -50i64..200, den in 1i64..100) {
            match ModelParams::exact(num, den) {
                Ok(p) => {
                    let r = p.p_exact().unwrap();
                    prop_assert!(*r > Rational::zero() && *r <= Rational::one());
                }
                Err(e) => {
                    prop_assert!(matches!(e, Error::OutOfRange(_)));
                    prop_assert!(num <= 0 || num > den);
                }
            }
        }

        #[test]
        fn exact_params_roundtrip_through_json(num in 1i64..1_000_000, extra in 0i64..1_000_000) {
            let p = ModelParams::exact(num, num + extra).unwrap();
            let text = serde_json::to_string(&p).unwrap();
            let back: ModelParams = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
