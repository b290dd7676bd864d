//! Measures `μ(x) = |Ψᴸ(x)|² + |Ψᴿ(x)|²` and their classification.
//!
//! The measure classes are defined by limits on the infinite lattice. On a
//! finite window the classifier looks at the outermost quarter of each tail
//! and applies convergence diagnostics with fixed thresholds; when they do
//! not agree it answers [`MeasureClass::Inconclusive`].
//!
//! Rates are reported per step *away from the origin*: `c_plus` is the limit
//! of `μ(x+1)/μ(x)` as `x → +∞` and `c_minus` the limit of `μ(x-1)/μ(x)` as
//! `x → -∞`. With that convention both rates exceed one for a measure that
//! grows in both directions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transfer::AmplitudeField;

/// Classification needs at least `[-MIN_HALF_WIDTH, MIN_HALF_WIDTH]`.
pub const MIN_HALF_WIDTH: i64 = 100;
/// Values below this are skipped in ratio statistics.
pub const UNDERFLOW_GUARD: f64 = 1e-300;
/// `|r - 1|` must exceed this for an exponential tail.
pub const RATE_DISTANCE: f64 = 0.01;
/// Relative spread of successive ratios for a converged exponential tail.
pub const RATE_SPREAD_TOL: f64 = 1e-3;
/// Relative spread of `μ(x)/x²` for a converged quadratic tail.
pub const QUADRATIC_SPREAD_TOL: f64 = 1e-2;
/// Relative spread of `μ` over the whole window for a uniform measure.
pub const UNIFORM_TOL: f64 = 1e-9;
/// Relative spread of `μ` over a tail quarter for a constant tail.
pub const CONSTANT_TAIL_TOL: f64 = 1e-2;

#[derive(Clone, Debug, PartialEq)]
pub struct Measure {
    xmin: i64,
    values: Vec<f64>,
}

impl Measure {
    pub fn from_values(xmin: i64, values: Vec<f64>) -> Measure {
        Measure { xmin, values }
    }

    pub fn xmin(&self) -> i64 {
        self.xmin
    }

    pub fn xmax(&self) -> i64 {
        self.xmin + self.values.len() as i64 - 1
    }

    pub fn get(&self, x: i64) -> Option<f64> {
        if x >= self.xmin && x <= self.xmax() {
            Some(self.values[(x - self.xmin) as usize])
        } else {
            None
        }
    }

    pub fn at(&self, x: i64) -> f64 {
        self.get(x)
            .unwrap_or_else(|| panic!("x = {x} outside window [{}, {}]", self.xmin, self.xmax()))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.xmin + i as i64, *v))
    }

    pub fn scaled(&self, s: f64) -> Measure {
        Measure::from_values(self.xmin, self.values.iter().map(|v| v * s).collect())
    }
}

pub fn measure_of(psi: &AmplitudeField) -> Measure {
    Measure::from_values(
        psi.xmin(),
        psi.values().iter().map(|v| v.norm_sqr()).collect(),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureClass {
    ExponentialType,
    QuadraticPolynomialType,
    Uniform,
    BoundedOther,
    Inconclusive,
}

/// Convergence diagnostics over the outermost quarter of one tail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailDiagnostics {
    /// Sites `[from, to]` examined (ordered by distance from the origin).
    pub from: i64,
    pub to: i64,
    /// Median of successive outward ratios, if any were usable.
    pub rate: Option<f64>,
    /// `(max - min) / median` of those ratios.
    pub rate_spread: Option<f64>,
    /// `μ(x)/x²` at the outermost site.
    pub quadratic_coefficient: f64,
    /// `(max - min) / max` of `μ(x)/x²` over the quarter.
    pub quadratic_spread: f64,
    /// `(max - min) / max` of `μ(x)` over the quarter.
    pub level_spread: f64,
    pub max: f64,
}

impl TailDiagnostics {
    fn exponential(&self) -> Option<f64> {
        match (self.rate, self.rate_spread) {
            (Some(r), Some(s)) if (r - 1.0).abs() > RATE_DISTANCE && s < RATE_SPREAD_TOL => Some(r),
            _ => None,
        }
    }

    fn quadratic(&self) -> Option<f64> {
        (self.quadratic_coefficient > 0.0 && self.quadratic_spread < QUADRATIC_SPREAD_TOL)
            .then_some(self.quadratic_coefficient)
    }

    fn constant(&self) -> bool {
        self.max > 0.0 && self.level_spread < CONSTANT_TAIL_TOL
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub class: MeasureClass,
    pub c_plus: Option<f64>,
    pub c_minus: Option<f64>,
    pub q_plus: Option<f64>,
    pub q_minus: Option<f64>,
    pub right: TailDiagnostics,
    pub left: TailDiagnostics,
    /// `(max - min) / max` of `μ` over the whole window.
    pub uniform_spread: f64,
}

fn relative_spread(values: impl Iterator<Item = f64>) -> (f64, f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    let spread = if hi > 0.0 {
        (hi - lo) / hi
    } else {
        f64::INFINITY
    };
    (lo, hi, spread)
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    })
}

/// `sites` ordered from the innermost to the outermost site of the quarter.
fn tail_diagnostics(mu: &Measure, sites: &[i64]) -> TailDiagnostics {
    let ratios: Vec<f64> = sites
        .windows(2)
        .filter_map(|w| {
            let (inner, outer) = (mu.at(w[0]), mu.at(w[1]));
            (inner >= UNDERFLOW_GUARD && outer >= UNDERFLOW_GUARD).then(|| outer / inner)
        })
        .collect();
    let rate = median(ratios.clone());
    let rate_spread = rate.map(|m| {
        let (lo, hi, _) = relative_spread(ratios.iter().copied());
        (hi - lo) / m
    });
    let outermost = *sites.last().expect("non-empty tail");
    let quad = |x: i64| mu.at(x) / (x as f64 * x as f64);
    let (_, _, quadratic_spread) = relative_spread(sites.iter().map(|&x| quad(x)));
    let (_, max, level_spread) = relative_spread(sites.iter().map(|&x| mu.at(x)));
    TailDiagnostics {
        from: sites[0],
        to: outermost,
        rate,
        rate_spread,
        quadratic_coefficient: quad(outermost),
        quadratic_spread,
        level_spread,
        max,
    }
}

/// Classifies a measure on a window spanning at least `[-100, 100]`.
pub fn classify(mu: &Measure) -> Result<ClassificationReport> {
    let (xmin, xmax) = (mu.xmin(), mu.xmax());
    if xmin > -MIN_HALF_WIDTH || xmax < MIN_HALF_WIDTH {
        return Err(Error::InsufficientWindow(format!(
            "window [{xmin}, {xmax}] must contain [-{MIN_HALF_WIDTH}, {MIN_HALF_WIDTH}]"
        )));
    }
    let right_len = (xmax + 3) / 4;
    let left_len = (-xmin + 3) / 4;
    let right_sites: Vec<i64> = (xmax - right_len + 1..=xmax).collect();
    let left_sites: Vec<i64> = (xmin..=xmin + left_len - 1).rev().collect();
    let right = tail_diagnostics(mu, &right_sites);
    let left = tail_diagnostics(mu, &left_sites);
    let (_, _, uniform_spread) = relative_spread(mu.values().iter().copied());

    let mut report = ClassificationReport {
        class: MeasureClass::Inconclusive,
        c_plus: None,
        c_minus: None,
        q_plus: None,
        q_minus: None,
        right,
        left,
        uniform_spread,
    };

    if let (Some(cp), Some(cm)) = (right.exponential(), left.exponential()) {
        report.class = MeasureClass::ExponentialType;
        report.c_plus = Some(cp);
        report.c_minus = Some(cm);
    } else if let (Some(qp), Some(qm)) = (right.quadratic(), left.quadratic()) {
        report.class = MeasureClass::QuadraticPolynomialType;
        report.q_plus = Some(qp);
        report.q_minus = Some(qm);
    } else if uniform_spread < UNIFORM_TOL {
        report.class = MeasureClass::Uniform;
    } else if right.constant() && left.constant() {
        report.class = MeasureClass::BoundedOther;
    }
    Ok(report)
}
