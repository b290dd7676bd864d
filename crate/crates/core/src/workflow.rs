//! The three scenario commands: `measure`, `verify` and `classify`.
//!
//! Each returns a plain data value; the CLI only adds argument parsing,
//! file I/O and exit codes.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closed_form::{homogeneous_window, DefectRegion, MultiDefectSolution};
use crate::error::Error;
use crate::evolution::{eigen_residual, stationarity_check};
use crate::linalg::{Mat2, Spinor, C64};
use crate::measure::{classify, measure_of, ClassificationReport, MIN_HALF_WIDTH};
use crate::scenario::{Complex, Scenario};
use crate::transfer::{amplitude_window, transfer_minus, transfer_plus, AmplitudeField};

/// `max_x ‖(U⁽ˢ⁾Ψ)(x) − λΨ(x)‖∞` threshold.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// `max |μₙ(x) − μ₀(x)|` threshold.
pub const STATIONARITY_TOL: f64 = 1e-10;
/// `max ‖D⁻_{x−1} D⁺ₓ − I‖` threshold.
pub const INVERSE_TOL: f64 = 1e-12;
/// Closed form vs transfer products, relative per site.
pub const CLOSED_FORM_TOL: f64 = 1e-9;
/// Absolute floor in the per-site relative closed-form discrepancy.
pub const CLOSED_FORM_FLOOR: f64 = 1e-3;

pub const CSV_HEADER: [&str; 6] = ["x", "re_psi_l", "im_psi_l", "re_psi_r", "im_psi_r", "mu"];

#[derive(Debug, Error)]
pub enum WorkflowError {
    #[error(transparent)]
    Domain(#[from] Error),

    #[error("amplitude table: {0}")]
    Table(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type WorkflowResult<T> = std::result::Result<T, WorkflowError>;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureRow {
    pub x: i64,
    pub psi_l: Complex,
    pub psi_r: Complex,
    pub mu: f64,
}

impl MeasureRow {
    fn from_site(x: i64, v: Spinor) -> MeasureRow {
        MeasureRow {
            x,
            psi_l: [v.left.re, v.left.im],
            psi_r: [v.right.re, v.right.im],
            mu: v.norm_sqr(),
        }
    }
}

/// Transfer-product amplitudes of the scenario on its window.
pub fn scenario_amplitudes(s: &Scenario) -> WorkflowResult<AmplitudeField> {
    let (lo, hi) = s.window();
    Ok(amplitude_window(
        s.field(),
        s.lambda(),
        s.alpha(),
        s.beta(),
        lo,
        hi,
    )?)
}

/// Amplitudes and measure over the window, ordered by `x`.
pub fn cmd_measure(s: &Scenario) -> WorkflowResult<Vec<MeasureRow>> {
    let psi = scenario_amplitudes(s)?;
    Ok(psi
        .iter()
        .map(|(x, v)| MeasureRow::from_site(x, v))
        .collect())
}

/// CSV with a header row; floats use shortest round-trip formatting.
pub fn write_csv<W: Write>(rows: &[MeasureRow], out: W) -> WorkflowResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.x.to_string(),
            r.psi_l[0].to_string(),
            r.psi_l[1].to_string(),
            r.psi_r[0].to_string(),
            r.psi_r[1].to_string(),
            r.mu.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn rows_to_json(rows: &[MeasureRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialise")
}

/// Reads an amplitude table in the `measure` CSV layout (the `mu` column is
/// optional and ignored). Sites must be consecutive and ascending.
pub fn read_amplitude_csv<R: Read>(input: R) -> WorkflowResult<AmplitudeField> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    let expected = &CSV_HEADER[..5];
    if headers.len() < 5 || headers.iter().take(5).ne(expected.iter().copied()) {
        return Err(WorkflowError::Table(format!(
            "expected header starting with {}",
            expected.join(",")
        )));
    }
    let mut xmin = None;
    let mut values = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let field = |k: usize| -> WorkflowResult<&str> {
            rec.get(k).ok_or_else(|| {
                WorkflowError::Table(format!("line {line}: missing column {}", CSV_HEADER[k]))
            })
        };
        let num = |k: usize| -> WorkflowResult<f64> {
            field(k)?.trim().parse().map_err(|_| {
                WorkflowError::Table(format!(
                    "line {line}: column {} is not a number",
                    CSV_HEADER[k]
                ))
            })
        };
        let x: i64 = field(0)?
            .trim()
            .parse()
            .map_err(|_| WorkflowError::Table(format!("line {line}: x is not an integer")))?;
        let start = *xmin.get_or_insert(x);
        if x != start + values.len() as i64 {
            return Err(WorkflowError::Table(format!(
                "line {line}: expected x = {}, found {x}",
                start + values.len() as i64
            )));
        }
        values.push(Spinor::new(
            C64::new(num(1)?, num(2)?),
            C64::new(num(3)?, num(4)?),
        ));
    }
    let xmin = xmin.ok_or_else(|| WorkflowError::Table("no data rows".into()))?;
    Ok(AmplitudeField::from_values(xmin, values))
}

/// One verification check. `normalized` is what is compared to the
/// threshold; see [`VerifyReport`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub value: f64,
    pub normalized: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    fn new(value: f64, scale: f64, threshold: f64) -> Check {
        let normalized = value / scale.max(1.0);
        Check {
            value,
            normalized,
            threshold,
            passed: normalized <= threshold,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checks {
    pub eigen_residual: Check,
    pub stationarity: Check,
    pub inverse_identity: Check,
    pub closed_form: Check,
}

/// Result of `verify`.
///
/// Residual and stationarity errors grow with the size of the amplitudes, so
/// each check is judged on `value / max(1, scale)`: the residual against
/// `amplitude_scale = max ‖Ψ(x)‖∞` on the window, stationarity against
/// `measure_scale = max μ(x)` on the evolution window. For amplitudes of
/// order one this is the absolute error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub window: [i64; 2],
    pub report_region: [i64; 2],
    pub evolution_window: [i64; 2],
    pub steps: usize,
    pub amplitude_scale: f64,
    pub measure_scale: f64,
    pub checks: Checks,
    pub passed: bool,
}

/// `max_x max_ij |(D⁻_{x−1} D⁺ₓ − I)_ij|` over `x` in `[lo, hi]`.
pub fn inverse_identity_error(s: &Scenario, lo: i64, hi: i64) -> WorkflowResult<f64> {
    let mut worst = 0.0f64;
    for x in lo..=hi {
        let plus = transfer_plus(s.field(), s.lambda(), x)?.matrix;
        let minus = transfer_minus(s.field(), s.lambda(), x - 1)?.matrix;
        worst = worst.max((minus * plus).max_abs_diff(&Mat2::IDENTITY));
    }
    Ok(worst)
}

/// Closed-form amplitudes on `[lo, hi]`: the homogeneous formula when there
/// are no defects and the tails agree, the piecewise solution otherwise.
pub fn closed_form_window(s: &Scenario, lo: i64, hi: i64) -> WorkflowResult<AmplitudeField> {
    let field = s.field();
    let psi = if field.is_homogeneous() {
        homogeneous_window(field.right_tail(), s.lambda(), s.alpha(), s.beta(), lo, hi)?
    } else {
        MultiDefectSolution::new(
            field,
            DefectRegion::covering(field),
            s.lambda(),
            s.alpha(),
            s.beta(),
        )?
        .window(lo, hi)?
    };
    Ok(psi)
}

/// `max_x ‖c(x) − t(x)‖∞ / (‖t(x)‖∞ + CLOSED_FORM_FLOOR)`.
pub fn closed_form_discrepancy(closed: &AmplitudeField, transfer: &AmplitudeField) -> f64 {
    transfer
        .iter()
        .map(|(x, t)| (closed.at(x) - t).max_abs() / (t.max_abs() + CLOSED_FORM_FLOOR))
        .fold(0.0, f64::max)
}

fn hull(a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
    (a.0.min(b.0), a.1.max(b.1))
}

/// Runs all checks. With `psi_override` the residual and stationarity checks
/// use the supplied amplitudes instead of the computed eigenvector; that
/// table must then cover the report region padded by `steps` sites.
pub fn cmd_verify(
    s: &Scenario,
    psi_override: Option<&AmplitudeField>,
) -> WorkflowResult<VerifyReport> {
    let window = s.window();
    let report = s.report_region();
    let steps = s.steps();
    let pad = steps as i64 + 1;

    let transfer = scenario_amplitudes(s)?;
    let (psi, psi0) = match psi_override {
        Some(p) => (p.clone(), p.clone()),
        None => {
            let (lo, hi) = hull((report.0 - pad, report.1 + pad), (0, 0));
            let evo = amplitude_window(s.field(), s.lambda(), s.alpha(), s.beta(), lo, hi)?;
            (transfer.clone(), evo)
        }
    };

    let amplitude_scale = psi.max_abs();
    let residual = eigen_residual(s.field(), s.lambda(), &psi);
    let measure_scale = measure_of(&psi0)
        .values()
        .iter()
        .copied()
        .fold(0.0, f64::max);
    let deviation = stationarity_check(s.field(), &psi0, steps, report)?;
    let inverse = inverse_identity_error(s, window.0, window.1)?;
    let closed = closed_form_window(s, window.0, window.1)?;
    let discrepancy = closed_form_discrepancy(&closed, &transfer);

    let checks = Checks {
        eigen_residual: Check::new(residual, amplitude_scale, RESIDUAL_TOL),
        stationarity: Check::new(deviation, measure_scale, STATIONARITY_TOL),
        inverse_identity: Check::new(inverse, 1.0, INVERSE_TOL),
        closed_form: Check::new(discrepancy, 1.0, CLOSED_FORM_TOL),
    };
    let passed = [
        checks.eigen_residual,
        checks.stationarity,
        checks.inverse_identity,
        checks.closed_form,
    ]
    .iter()
    .all(|c| c.passed);
    if !passed {
        log::warn!("verification failed: {checks:?}");
    }
    Ok(VerifyReport {
        window: [window.0, window.1],
        report_region: [report.0, report.1],
        evolution_window: [psi0.xmin(), psi0.xmax()],
        steps,
        amplitude_scale,
        measure_scale,
        checks,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOutput {
    pub window: [i64; 2],
    #[serde(flatten)]
    pub report: ClassificationReport,
}

/// Classifies the scenario's measure, widening the window to at least
/// `[-100, 100]`.
pub fn cmd_classify(s: &Scenario) -> WorkflowResult<ClassifyOutput> {
    let (lo, hi) = s.window();
    let (lo, hi) = (lo.min(-MIN_HALF_WIDTH), hi.max(MIN_HALF_WIDTH));
    let psi = amplitude_window(s.field(), s.lambda(), s.alpha(), s.beta(), lo, hi)?;
    Ok(ClassifyOutput {
        window: [lo, hi],
        report: classify(&measure_of(&psi))?,
    })
}
