//! Scenario files and the builtin catalogue.
//!
//! A scenario is a JSON document:
//!
//! ```json
//! {
//!   "field": {
//!     "left_tail":  {"hadamard": true},
//!     "right_tail": {"hadamard": true},
//!     "defects": {"0": {"hadamard": true, "omega_turns": 0.25}}
//!   },
//!   "lambda": {"arg_turns": 0.125},
//!   "alpha": [1, 0],
//!   "beta": [0, 0],
//!   "window": [-60, 60],
//!   "steps": 50
//! }
//! ```
//!
//! Coins are either explicit (`{"a": [re, im], "b": ..., "c": ..., "d": ...}`),
//! a reflection (`{"rotation_theta": θ}`) or a phased Hadamard
//! (`{"hadamard": true, "omega_turns": t}` for `e^{2πit} H`). `lambda` is
//! `{"arg_turns": t}` or `[re, im]`. Unknown keys are rejected.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coin::{Coin, CoinField};
use crate::error::Error;
use crate::linalg::C64;
use crate::transfer::{unit_from_turns, Eigenvalue};

pub type Complex = [f64; 2];

fn to_c64(z: Complex) -> C64 {
    C64::new(z[0], z[1])
}

fn from_c64(z: C64) -> Complex {
    [z.re, z.im]
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("malformed scenario: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("invalid scenario at `{path}`: {source}")]
    Validation {
        path: String,
        #[source]
        source: Error,
    },

    #[error("invalid scenario at `{path}`: {message}")]
    Invalid { path: String, message: String },

    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
}

impl ScenarioError {
    fn invalid(path: impl Into<String>, message: impl Into<String>) -> Self {
        ScenarioError::Invalid {
            path: path.into(),
            message: message.into(),
        }
    }

    fn at(path: impl Into<String>) -> impl FnOnce(Error) -> ScenarioError {
        let path = path.into();
        move |source| ScenarioError::Validation { path, source }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitCoin {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotationCoin {
    pub rotation_theta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhasedHadamard {
    pub hadamard: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_turns: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoinSpec {
    Explicit(ExplicitCoin),
    Rotation(RotationCoin),
    Hadamard(PhasedHadamard),
}

impl CoinSpec {
    pub fn explicit(coin: &Coin) -> CoinSpec {
        CoinSpec::Explicit(ExplicitCoin {
            a: from_c64(coin.a()),
            b: from_c64(coin.b()),
            c: from_c64(coin.c()),
            d: from_c64(coin.d()),
        })
    }

    pub fn rotation(theta: f64) -> CoinSpec {
        CoinSpec::Rotation(RotationCoin {
            rotation_theta: theta,
        })
    }

    pub fn hadamard(omega_turns: Option<f64>) -> CoinSpec {
        CoinSpec::Hadamard(PhasedHadamard {
            hadamard: true,
            omega_turns,
        })
    }

    pub fn build(&self, path: &str) -> Result<Coin, ScenarioError> {
        match self {
            CoinSpec::Explicit(e) => Coin::new(to_c64(e.a), to_c64(e.b), to_c64(e.c), to_c64(e.d))
                .map_err(ScenarioError::at(path)),
            CoinSpec::Rotation(r) => Ok(Coin::rotation(r.rotation_theta)),
            CoinSpec::Hadamard(h) => {
                if !h.hadamard {
                    return Err(ScenarioError::invalid(
                        format!("{path}.hadamard"),
                        "must be true when present",
                    ));
                }
                let omega = unit_from_turns(h.omega_turns.unwrap_or(0.0));
                Coin::hadamard()
                    .phase_scaled(omega)
                    .map_err(ScenarioError::at(path))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub left_tail: CoinSpec,
    pub right_tail: CoinSpec,
    #[serde(default)]
    pub defects: BTreeMap<String, CoinSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArgTurns {
    pub arg_turns: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaSpec {
    Turns(ArgTurns),
    Value(Complex),
}

impl LambdaSpec {
    pub fn turns(t: f64) -> LambdaSpec {
        LambdaSpec::Turns(ArgTurns { arg_turns: t })
    }

    pub fn build(&self) -> Result<Eigenvalue, ScenarioError> {
        match self {
            LambdaSpec::Turns(t) => Ok(Eigenvalue::from_turns(t.arg_turns)),
            LambdaSpec::Value(z) => {
                Eigenvalue::normalized(to_c64(*z)).map_err(ScenarioError::at("lambda"))
            }
        }
    }
}

pub const DEFAULT_STEPS: usize = 50;

fn default_steps() -> usize {
    DEFAULT_STEPS
}

/// On-disk form of a scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub field: FieldSpec,
    pub lambda: LambdaSpec,
    pub alpha: Complex,
    pub beta: Complex,
    pub window: [i64; 2],
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report_region: Option<[i64; 2]>,
}

/// Validated scenario: the file form plus the domain objects built from it.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    spec: ScenarioFile,
    field: CoinField,
    lambda: Eigenvalue,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario, ScenarioError> {
        let spec: ScenarioFile = serde_json::from_str(text)?;
        Scenario::from_spec(spec)
    }

    pub fn from_spec(spec: ScenarioFile) -> Result<Scenario, ScenarioError> {
        let left = spec.field.left_tail.build("field.left_tail")?;
        let right = spec.field.right_tail.build("field.right_tail")?;
        let mut defects = BTreeMap::new();
        for (key, coin) in &spec.field.defects {
            let path = format!("field.defects.{key}");
            let x: i64 = key
                .trim()
                .parse()
                .map_err(|_| ScenarioError::invalid(&path, "defect position must be an integer"))?;
            if defects.insert(x, coin.build(&path)?).is_some() {
                return Err(ScenarioError::invalid(path, "duplicate defect position"));
            }
        }
        let field =
            CoinField::new(left, right, defects).map_err(ScenarioError::at("field.defects"))?;
        let lambda = spec.lambda.build()?;

        let [lo, hi] = spec.window;
        if lo > 0 || hi < 0 {
            return Err(ScenarioError::invalid(
                "window",
                "window must contain the origin",
            ));
        }
        if let Some([rlo, rhi]) = spec.report_region {
            if rlo > rhi {
                return Err(ScenarioError::invalid(
                    "report_region",
                    "min must not exceed max",
                ));
            }
        }
        Ok(Scenario {
            spec,
            field,
            lambda,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.spec).expect("scenario serialises")
    }

    pub fn spec(&self) -> &ScenarioFile {
        &self.spec
    }

    pub fn field(&self) -> &CoinField {
        &self.field
    }

    pub fn lambda(&self) -> Eigenvalue {
        self.lambda
    }

    pub fn alpha(&self) -> C64 {
        to_c64(self.spec.alpha)
    }

    pub fn beta(&self) -> C64 {
        to_c64(self.spec.beta)
    }

    pub fn window(&self) -> (i64, i64) {
        (self.spec.window[0], self.spec.window[1])
    }

    pub fn steps(&self) -> usize {
        self.spec.steps
    }

    /// Explicit report region, or the defect hull (origin for homogeneous
    /// fields) widened by ten sites.
    pub fn report_region(&self) -> (i64, i64) {
        if let Some([lo, hi]) = self.spec.report_region {
            return (lo, hi);
        }
        let (lo, hi) = self.field.defect_hull().unwrap_or((0, 0));
        (lo.min(0) - 10, hi.max(0) + 10)
    }

    pub fn with_window(mut self, xmin: i64, xmax: i64) -> Result<Scenario, ScenarioError> {
        self.spec.window = [xmin, xmax];
        Scenario::from_spec(self.spec)
    }

    pub fn with_steps(mut self, steps: usize) -> Scenario {
        self.spec.steps = steps;
        self
    }
}

/// Builtin scenario names with one-line descriptions.
pub const BUILTINS: &[(&str, &str)] = &[
    (
        "two-defect",
        "reflection coins at x = ±m on a diag(1, -1) background (params: m, theta)",
    ),
    (
        "hadamard-3defect",
        "Hadamard walk with e^{2πiφ}H on [-1, 1] (params: phi)",
    ),
    (
        "wojcik-1defect",
        "Hadamard walk with e^{2πiφ}H at the origin only (params: phi)",
    ),
    ("hadamard", "homogeneous Hadamard walk"),
];

/// Optional overrides for builtin expansion; `None` keeps the default.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BuiltinParams {
    pub m: Option<i64>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub lambda_turns: Option<f64>,
    pub alpha: Option<Complex>,
    pub beta: Option<Complex>,
    pub window: Option<[i64; 2]>,
    pub steps: Option<usize>,
}

/// Window used by builtins whose measures are meant to be classified.
pub const WIDE_WINDOW: [i64; 2] = [-100, 100];

pub fn expand_builtin(name: &str, params: &BuiltinParams) -> Result<Scenario, ScenarioError> {
    let diag = CoinSpec::Explicit(ExplicitCoin {
        a: [1.0, 0.0],
        b: [0.0, 0.0],
        c: [0.0, 0.0],
        d: [-1.0, 0.0],
    });
    let phi = params.phi.unwrap_or(0.25);
    if !(0.0..1.0).contains(&phi) {
        return Err(ScenarioError::invalid("phi", "phi must lie in [0, 1)"));
    }
    let phased = CoinSpec::hadamard(Some(phi));
    let plain = CoinSpec::hadamard(None);

    let (field, window) = match name {
        "two-defect" => {
            let m = params.m.unwrap_or(1);
            if m < 1 {
                return Err(ScenarioError::invalid("m", "m must be a positive integer"));
            }
            let theta = params.theta.unwrap_or(FRAC_PI_4);
            if theta.cos().abs() <= crate::coin::ZERO_ENTRY_TOL {
                return Err(ScenarioError::invalid(
                    "theta",
                    "cos(theta) must be nonzero",
                ));
            }
            let mut defects = BTreeMap::new();
            defects.insert((-m).to_string(), CoinSpec::rotation(theta));
            defects.insert(m.to_string(), CoinSpec::rotation(theta));
            (
                FieldSpec {
                    left_tail: diag.clone(),
                    right_tail: diag,
                    defects,
                },
                [-m - 10, m + 10],
            )
        }
        "hadamard-3defect" => {
            let defects = (-1..=1).map(|x| (x.to_string(), phased.clone())).collect();
            (
                FieldSpec {
                    left_tail: plain.clone(),
                    right_tail: plain,
                    defects,
                },
                WIDE_WINDOW,
            )
        }
        "wojcik-1defect" => {
            let defects = [("0".to_string(), phased)].into_iter().collect();
            (
                FieldSpec {
                    left_tail: plain.clone(),
                    right_tail: plain,
                    defects,
                },
                WIDE_WINDOW,
            )
        }
        "hadamard" => (
            FieldSpec {
                left_tail: plain.clone(),
                right_tail: plain,
                defects: BTreeMap::new(),
            },
            WIDE_WINDOW,
        ),
        other => return Err(ScenarioError::UnknownBuiltin(other.to_string())),
    };
    let spec = ScenarioFile {
        field,
        lambda: LambdaSpec::turns(params.lambda_turns.unwrap_or(0.0)),
        alpha: params.alpha.unwrap_or([FRAC_1_SQRT_2, 0.0]),
        beta: params.beta.unwrap_or([0.0, FRAC_1_SQRT_2]),
        window: params.window.unwrap_or(window),
        steps: params.steps.unwrap_or(DEFAULT_STEPS),
        report_region: None,
    };
    Scenario::from_spec(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
        "field": {
            "left_tail": {"hadamard": true},
            "right_tail": {"hadamard": true},
            "defects": {"0": {"hadamard": true, "omega_turns": 0.25}}
        },
        "lambda": {"arg_turns": 0.125},
        "alpha": [1, 0],
        "beta": [0, 0],
        "window": [-60, 60]
    }"#;

    #[test]
    fn parses_sample() {
        let s = Scenario::parse(SAMPLE).unwrap();
        assert_eq!(s.steps(), DEFAULT_STEPS);
        let l = s.lambda().value();
        assert_eq!(l.re, l.im);
        assert_eq!(s.field().coin_at(0).a(), C64::new(0.0, FRAC_1_SQRT_2));
        assert_eq!(*s.field().coin_at(5), Coin::hadamard());
        assert_eq!(s.report_region(), (-10, 10));
    }

    #[test]
    fn round_trip() {
        let s = Scenario::parse(SAMPLE).unwrap();
        assert_eq!(Scenario::parse(&s.to_json()).unwrap(), s);
        let b = expand_builtin("two-defect", &BuiltinParams::default()).unwrap();
        assert_eq!(Scenario::parse(&b.to_json()).unwrap(), b);
    }

    #[test]
    fn rejects_non_unitary_coin() {
        let text = SAMPLE.replace(
            r#""left_tail": {"hadamard": true}"#,
            r#""left_tail": {"a":[1,0],"b":[1,0],"c":[0,0],"d":[0,0]}"#,
        );
        match Scenario::parse(&text) {
            Err(ScenarioError::Validation { path, source }) => {
                assert_eq!(path, "field.left_tail");
                assert!(matches!(source, Error::NotUnitary { .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_lambda_and_unknown_keys() {
        let text = SAMPLE.replace(r#"{"arg_turns": 0.125}"#, "[1.01, 0]");
        assert!(matches!(
            Scenario::parse(&text),
            Err(ScenarioError::Validation {
                source: Error::BadEigenvalue { .. },
                ..
            })
        ));
        let text = SAMPLE.replace(r#""window""#, r#""colour": 3, "window""#);
        assert!(matches!(
            Scenario::parse(&text),
            Err(ScenarioError::Parse(_))
        ));
        assert!(matches!(Scenario::parse("{"), Err(ScenarioError::Parse(_))));
        let text = SAMPLE.replace(r#""0": {"#, r#""zero": {"#);
        assert!(matches!(
            Scenario::parse(&text),
            Err(ScenarioError::Invalid { .. })
        ));
    }

    #[test]
    fn lambda_as_value_is_renormalised() {
        let text = SAMPLE.replace(r#"{"arg_turns": 0.125}"#, "[0.6, 0.8000000001]");
        let s = Scenario::parse(&text).unwrap();
        assert!((s.lambda().value().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_defect_builtin_matches_model() {
        let s = expand_builtin("two-defect", &BuiltinParams::default()).unwrap();
        let f = s.field();
        assert_eq!(*f.coin_at(1), Coin::rotation(FRAC_PI_4));
        assert_eq!(*f.coin_at(-1), Coin::rotation(FRAC_PI_4));
        for x in [-5, -2, 0, 2, 9] {
            assert_eq!(
                f.coin_at(x).matrix(),
                crate::linalg::Mat2::new(
                    C64::new(1.0, 0.0),
                    C64::new(0.0, 0.0),
                    C64::new(0.0, 0.0),
                    C64::new(-1.0, 0.0)
                )
            );
        }
        assert_eq!(s.window(), (-11, 11));
        assert_eq!(s.lambda().value(), C64::new(1.0, 0.0));
        assert_eq!(s.report_region(), (-11, 11));
    }

    #[test]
    fn builtin_parameter_validation() {
        let bad_m = BuiltinParams {
            m: Some(0),
            ..Default::default()
        };
        assert!(expand_builtin("two-defect", &bad_m).is_err());
        let bad_phi = BuiltinParams {
            phi: Some(1.0),
            ..Default::default()
        };
        assert!(expand_builtin("hadamard-3defect", &bad_phi).is_err());
        let bad_theta = BuiltinParams {
            theta: Some(std::f64::consts::FRAC_PI_2),
            ..Default::default()
        };
        assert!(expand_builtin("two-defect", &bad_theta).is_err());
        assert!(matches!(
            expand_builtin("nope", &BuiltinParams::default()),
            Err(ScenarioError::UnknownBuiltin(_))
        ));
        for (name, _) in BUILTINS {
            assert!(
                expand_builtin(name, &BuiltinParams::default()).is_ok(),
                "{name}"
            );
        }
    }
}
