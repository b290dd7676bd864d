//! Direct time evolution on a truncated lattice, used as an independent
//! check of the transfer-matrix eigenvectors.
//!
//! One step is `Ψₙ₊₁(x) = P_{x+1} Ψₙ(x+1) + Q_{x-1} Ψₙ(x-1)`. Sites outside
//! the stored window are taken as zero, so after `k` steps the outermost `k`
//! sites on each side no longer agree with the infinite-lattice dynamics.
//! That contamination is tracked as the validity margin.

use crate::coin::CoinField;
use crate::error::{Error, Result};
use crate::linalg::{Spinor, C64};
use crate::measure::measure_of;
use crate::transfer::{AmplitudeField, Eigenvalue};

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedState {
    amplitudes: AmplitudeField,
    margin: usize,
}

impl TruncatedState {
    pub fn new(amplitudes: AmplitudeField) -> TruncatedState {
        TruncatedState {
            amplitudes,
            margin: 0,
        }
    }

    pub fn amplitudes(&self) -> &AmplitudeField {
        &self.amplitudes
    }

    pub fn margin(&self) -> usize {
        self.margin
    }

    /// Sites still exact with respect to the infinite lattice, if any.
    pub fn valid_range(&self) -> Option<(i64, i64)> {
        let lo = self.amplitudes.xmin() + self.margin as i64;
        let hi = self.amplitudes.xmax() - self.margin as i64;
        (lo <= hi).then_some((lo, hi))
    }

    /// Total `ℓ²` norm squared over the stored window.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().iter().map(Spinor::norm_sqr).sum()
    }
}

/// Point mass `(α, β)` at the origin on `[xmin, xmax]`.
pub fn delta_state(alpha: C64, beta: C64, xmin: i64, xmax: i64) -> AmplitudeField {
    let mut values = vec![Spinor::ZERO; (xmax - xmin + 1).max(0) as usize];
    if xmin <= 0 && xmax >= 0 {
        values[(-xmin) as usize] = Spinor::new(alpha, beta);
    }
    AmplitudeField::from_values(xmin, values)
}

/// `(U⁽ˢ⁾Ψ)(x)` for a site whose neighbours are both inside the window.
fn apply_at(field: &CoinField, psi: &AmplitudeField, x: i64) -> Spinor {
    let right = psi.get(x + 1).unwrap_or(Spinor::ZERO);
    let left = psi.get(x - 1).unwrap_or(Spinor::ZERO);
    let p = field.coin_at(x + 1).split().p;
    let q = field.coin_at(x - 1).split().q;
    p * right + q * left
}

/// One application of `U⁽ˢ⁾` with zero inflow at both window ends.
pub fn evolve_step(field: &CoinField, state: &TruncatedState) -> Result<TruncatedState> {
    let psi = &state.amplitudes;
    let width = psi.len() as i64;
    let margin = state.margin + 1;
    if 2 * margin as i64 >= width {
        return Err(Error::WindowExhausted(format!(
            "window [{}, {}] has no valid sites left after {} steps",
            psi.xmin(),
            psi.xmax(),
            margin
        )));
    }
    let values = (psi.xmin()..=psi.xmax())
        .map(|x| apply_at(field, psi, x))
        .collect();
    Ok(TruncatedState {
        amplitudes: AmplitudeField::from_values(psi.xmin(), values),
        margin,
    })
}

/// `max_x ‖(U⁽ˢ⁾Ψ)(x) − λΨ(x)‖∞` over interior sites of the window.
/// Returns zero for windows with fewer than three sites.
pub fn eigen_residual(field: &CoinField, lambda: Eigenvalue, psi: &AmplitudeField) -> f64 {
    let l = lambda.value();
    (psi.xmin() + 1..psi.xmax())
        .map(|x| (apply_at(field, psi, x) - psi.at(x).scale(l)).max_abs())
        .fold(0.0, f64::max)
}

/// Evolves `psi0` for `steps` steps and returns the largest
/// `|μₙ(x) − μ₀(x)|` over `x` in the report region and `n ≤ steps`.
///
/// The window of `psi0` must extend at least `steps` sites beyond the report
/// region on each side so the region stays inside the light cone of exact
/// dynamics.
pub fn stationarity_check(
    field: &CoinField,
    psi0: &AmplitudeField,
    steps: usize,
    report: (i64, i64),
) -> Result<f64> {
    let (rlo, rhi) = report;
    let pad = steps as i64;
    if rlo > rhi || rlo - pad < psi0.xmin() || rhi + pad > psi0.xmax() {
        return Err(Error::WindowExhausted(format!(
            "report region [{rlo}, {rhi}] needs {steps} sites of padding inside [{}, {}]",
            psi0.xmin(),
            psi0.xmax()
        )));
    }
    let mu0 = measure_of(psi0);
    let mut state = TruncatedState::new(psi0.clone());
    let mut worst = 0.0f64;
    for _ in 0..steps {
        state = evolve_step(field, &state)?;
        let mu = measure_of(state.amplitudes());
        for x in rlo..=rhi {
            worst = worst.max((mu.at(x) - mu0.at(x)).abs());
        }
    }
    Ok(worst)
}
