//! Analytic solutions of the eigenvalue problem.
//!
//! Beyond the outermost defect the coin is constant, so the transfer matrix
//! is a fixed `D⁺` (right) or `D⁻` (left). Each chirality component then obeys
//! a constant-coefficient second-order recurrence whose characteristic
//! polynomial is that of `D±`:
//!
//! ```text
//! right:  aλ Λ² − (λ² + Δ) Λ + dλ = 0        Λ₊Λ₋ = d/a
//! left:   dλ Γ² − (λ² + Δ) Γ + aλ = 0        Γ₊Γ₋ = a/d,  Γ± = (a/d) Λ±
//! ```
//!
//! with `Δ = ad − bc`. Because the recurrence follows from Cayley–Hamilton
//! applied to `D±`, only `a ≠ 0` (right tail) and `d ≠ 0` (left tail) are
//! needed; in particular diagonal tails with `b = c = 0` are handled.
//!
//! The two roots coincide exactly when `(λ² − ∇)² = 4abcd` with
//! `∇ = ad + bc`; the solution is then linear-times-geometric.

use log::warn;

use crate::coin::{Coin, CoinField};
use crate::error::{Entry, Error, Result};
use crate::linalg::{Spinor, C64};
use crate::transfer::{
    amplitude_window, check_window, transfer_minus, transfer_plus, AmplitudeField, Eigenvalue,
};

/// `|(λ² − ∇)² − 4abcd|` at or below this is a multiple root.
pub const DEGENERACY_TOL: f64 = 1e-10;
/// Between [`DEGENERACY_TOL`] and this, the distinct-root formulas are used
/// but lose precision; a warning is logged.
pub const NEAR_DEGENERACY_TOL: f64 = 1e-6;
/// Distinct roots closer than this are treated as an inconsistent
/// classification.
pub const ROOT_SEPARATION_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootKind {
    Distinct,
    Multiple,
}

/// Characteristic roots of one tail recurrence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Roots {
    Distinct { plus: C64, minus: C64 },
    Multiple(C64),
}

impl Roots {
    pub fn kind(&self) -> RootKind {
        match self {
            Roots::Distinct { .. } => RootKind::Distinct,
            Roots::Multiple(_) => RootKind::Multiple,
        }
    }

    /// Largest root modulus: the per-site growth rate of the amplitude.
    pub fn dominant_modulus(&self) -> f64 {
        match *self {
            Roots::Distinct { plus, minus } => plus.norm().max(minus.norm()),
            Roots::Multiple(r) => r.norm(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedFormParams {
    /// `Δ = ad − bc`
    pub delta: C64,
    /// `∇ = ad + bc`
    pub nabla: C64,
    /// `|(λ² − ∇)² − 4abcd|`, the modulus of the discriminant.
    pub degeneracy: f64,
    /// `Λ±` or `Λ`
    pub right: Roots,
    /// `Γ±` or `Γ`
    pub left: Roots,
}

impl ClosedFormParams {
    pub fn kind(&self) -> RootKind {
        self.right.kind()
    }

    pub fn near_degenerate(&self) -> bool {
        self.degeneracy > DEGENERACY_TOL && self.degeneracy <= NEAR_DEGENERACY_TOL
    }
}

/// `Λ±` from the distinct-root formula with the principal square root,
/// regardless of how close the roots are. Requires `a ≠ 0`.
pub fn distinct_roots(coin: &Coin, lambda: Eigenvalue) -> Result<(C64, C64)> {
    let a = coin.require_nonzero(Entry::A, 0)?;
    let l = lambda.value();
    let l2 = l * l;
    let s = l2 + coin.a() * coin.d() - coin.b() * coin.c();
    let root = (s * s - 4.0 * l2 * a * coin.d()).sqrt();
    let den = 2.0 * a * l;
    Ok(((s + root) / den, (s - root) / den))
}

/// Root analysis of the constant-coin recurrence for `coin` at eigenvalue `λ`.
/// Requires `a ≠ 0` and `d ≠ 0`.
pub fn root_analysis(coin: &Coin, lambda: Eigenvalue) -> Result<ClosedFormParams> {
    let a = coin.require_nonzero(Entry::A, 0)?;
    let d = coin.require_nonzero(Entry::D, 0)?;
    let (b, c) = (coin.b(), coin.c());
    let l = lambda.value();
    let l2 = l * l;
    let delta = a * d - b * c;
    let nabla = a * d + b * c;
    let gap = l2 - nabla;
    let degeneracy = (gap * gap - 4.0 * a * b * c * d).norm();

    let (right, left) = if degeneracy <= DEGENERACY_TOL {
        let s = l2 + delta;
        (
            Roots::Multiple(s / (2.0 * a * l)),
            Roots::Multiple(s / (2.0 * d * l)),
        )
    } else {
        if degeneracy <= NEAR_DEGENERACY_TOL {
            warn!(
                "near-degenerate characteristic roots (|disc| = {degeneracy:e}); \
                 distinct-root formulas may lose precision"
            );
        }
        let (plus, minus) = distinct_roots(coin, lambda)?;
        let ratio = a / d;
        (
            Roots::Distinct { plus, minus },
            Roots::Distinct {
                plus: ratio * plus,
                minus: ratio * minus,
            },
        )
    };
    Ok(ClosedFormParams {
        delta,
        nabla,
        degeneracy,
        right,
        left,
    })
}

fn ipow(z: C64, k: i64) -> C64 {
    z.powi(k as i32)
}

/// Two-term solution `u_k` of a recurrence with distinct roots `r₊, r₋`
/// given `u_0` and `u_1`, evaluated at `k`.
fn distinct_solution(rp: C64, rm: C64, u0: C64, u1: C64, k: i64) -> Result<C64> {
    let sep = rp - rm;
    if sep.norm() <= ROOT_SEPARATION_TOL {
        return Err(Error::DegenerateDenominator(format!(
            "distinct roots coincide (|Λ₊ − Λ₋| = {:e})",
            sep.norm()
        )));
    }
    Ok((ipow(rp, k) * (u1 - rm * u0) - ipow(rm, k) * (u1 - rp * u0)) / sep)
}

/// Linear-times-geometric solution for a double root `r`, given `u_0`, `u_1`,
/// evaluated at `k`: `r^{k-1} [u_1 + (k-1)(u_1 − r u_0)]`.
fn multiple_solution(r: C64, u0: C64, u1: C64, k: i64) -> C64 {
    ipow(r, k - 1) * (u1 + (k - 1) as f64 * (u1 - r * u0))
}

fn tail_component(roots: &Roots, u0: C64, u1: C64, k: i64) -> Result<C64> {
    match *roots {
        Roots::Distinct { plus, minus } => distinct_solution(plus, minus, u0, u1, k),
        Roots::Multiple(r) => Ok(multiple_solution(r, u0, u1, k)),
    }
}

/// Boundary values for the right tail beyond the last defect at `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RightSeeds {
    /// `S_n = Ψᴸ(n)`
    pub s_n: C64,
    /// `S_{n+1}`
    pub s_n1: C64,
    /// `T_{n+1} = Ψᴿ(n+1)`
    pub t_n1: C64,
    /// `T_{n+2}`
    pub t_n2: C64,
}

/// Boundary values for the left tail beyond the last defect at `-m`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeftSeeds {
    /// `S_{-(m+1)}`
    pub s_m1: C64,
    /// `S_{-(m+2)}`
    pub s_m2: C64,
    /// `T_{-m}`
    pub t_m: C64,
    /// `T_{-(m+1)}`
    pub t_m1: C64,
}

/// Amplitude `(S_x, T_x)` at `x ≥ n + 1` in a right tail with coin `coin`.
///
/// `Ψᴸ` satisfies the tail recurrence from index `n` on and `Ψᴿ` from `n+1`
/// on, which is why the seeds are staggered.
pub fn tail_amplitude_plus(
    coin: &Coin,
    lambda: Eigenvalue,
    seeds: RightSeeds,
    n: i64,
    x: i64,
) -> Result<Spinor> {
    if x < n + 1 {
        return Err(Error::InvalidWindow {
            min: x,
            max: n + 1,
            reason: "right tail formula needs x >= n + 1".into(),
        });
    }
    let params = root_analysis(coin, lambda)?;
    right_tail_with(&params.right, seeds, n, x)
}

fn right_tail_with(roots: &Roots, seeds: RightSeeds, n: i64, x: i64) -> Result<Spinor> {
    let s = tail_component(roots, seeds.s_n, seeds.s_n1, x - n)?;
    let t = tail_component(roots, seeds.t_n1, seeds.t_n2, x - (n + 1))?;
    Ok(Spinor::new(s, t))
}

/// Mirror of [`tail_amplitude_plus`] for `x ≤ -(m + 1)` using the `Γ` roots.
pub fn tail_amplitude_minus(
    coin: &Coin,
    lambda: Eigenvalue,
    seeds: LeftSeeds,
    m: i64,
    x: i64,
) -> Result<Spinor> {
    if x > -(m + 1) {
        return Err(Error::InvalidWindow {
            min: -(m + 1),
            max: x,
            reason: "left tail formula needs x <= -(m + 1)".into(),
        });
    }
    let params = root_analysis(coin, lambda)?;
    left_tail_with(&params.left, seeds, m, x)
}

fn left_tail_with(roots: &Roots, seeds: LeftSeeds, m: i64, x: i64) -> Result<Spinor> {
    let s = tail_component(roots, seeds.s_m1, seeds.s_m2, -x - (m + 1))?;
    let t = tail_component(roots, seeds.t_m, seeds.t_m1, -x - m)?;
    Ok(Spinor::new(s, t))
}

/// Closed form for a homogeneous walk with coin `coin`.
///
/// Distinct roots: two-term geometric combination anchored at `Ψ(0)` and
/// `Ψ(±1)`. Multiple root: polynomial bracket of degree one in `x` times
/// `Λ^x` (right) or `Γ^{-x}` (left).
pub fn homogeneous_amplitude(
    coin: &Coin,
    lambda: Eigenvalue,
    alpha: C64,
    beta: C64,
    x: i64,
) -> Result<Spinor> {
    if x == 0 {
        return Ok(Spinor::new(alpha, beta));
    }
    let params = root_analysis(coin, lambda)?;
    homogeneous_with(coin, &params, lambda, alpha, beta, x)
}

fn homogeneous_with(
    coin: &Coin,
    params: &ClosedFormParams,
    lambda: Eigenvalue,
    alpha: C64,
    beta: C64,
    x: i64,
) -> Result<Spinor> {
    if x == 0 {
        return Ok(Spinor::new(alpha, beta));
    }
    let (a, b, c, d) = (coin.a(), coin.b(), coin.c(), coin.d());
    let l = lambda.value();
    let l2 = l * l;
    match (params.right, params.left) {
        (Roots::Multiple(_), Roots::Multiple(_)) => {
            let s = l2 + params.delta;
            if s.norm() <= ROOT_SEPARATION_TOL {
                return Err(Error::DegenerateDenominator(
                    "λ² + Δ vanishes at a multiple root".into(),
                ));
            }
            let xf = x as f64;
            let top = alpha * (1.0 + xf) * l2 - (alpha * params.nabla + 2.0 * b * d * beta) * xf
                + alpha * params.delta;
            let bottom = beta * (1.0 - xf) * l2
                + (beta * params.nabla + 2.0 * a * c * alpha) * xf
                + beta * params.delta;
            let prefactor = if x >= 1 {
                ipow(s / (2.0 * a * l), x)
            } else {
                ipow(s / (2.0 * d * l), -x)
            };
            Ok(Spinor::new(top, bottom).scale(prefactor / s))
        }
        (right, left) => {
            if x >= 1 {
                let cb = d * beta + c * alpha;
                let l1 = (alpha * l2 - b * cb) / (a * l);
                let r1 = cb / l;
                Ok(Spinor::new(
                    tail_component(&right, alpha, l1, x)?,
                    tail_component(&right, beta, r1, x)?,
                ))
            } else {
                let ab = b * beta + a * alpha;
                let lm1 = ab / l;
                let rm1 = (beta * l2 - c * ab) / (d * l);
                Ok(Spinor::new(
                    tail_component(&left, alpha, lm1, -x)?,
                    tail_component(&left, beta, rm1, -x)?,
                ))
            }
        }
    }
}

/// Defect coins live on `[-m, n]` with `m, n ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DefectRegion {
    pub m: i64,
    pub n: i64,
}

impl DefectRegion {
    pub fn new(m: i64, n: i64) -> Result<DefectRegion> {
        if m < 1 || n < 1 {
            return Err(Error::InvalidRegion(format!(
                "m and n must be positive, got m = {m}, n = {n}"
            )));
        }
        Ok(DefectRegion { m, n })
    }

    /// Smallest region with `m, n ≥ 1` that contains every defect of `field`.
    pub fn covering(field: &CoinField) -> DefectRegion {
        let (lo, hi) = field.defect_hull().unwrap_or((0, 0));
        DefectRegion {
            m: (-lo).max(1),
            n: hi.max(1),
        }
    }

    fn check_covers(&self, field: &CoinField) -> Result<()> {
        if let Some((lo, hi)) = field.defect_hull() {
            if lo < -self.m || hi > self.n {
                return Err(Error::InvalidRegion(format!(
                    "defects on [{lo}, {hi}] extend beyond [-{}, {}]",
                    self.m, self.n
                )));
            }
        }
        Ok(())
    }
}

/// Piecewise solution for a field with defects on `[-m, n]`.
///
/// Evaluating many sites is cheaper through [`MultiDefectSolution`]; this
/// convenience rebuilds it for a single `x`.
pub fn multi_defect_amplitude(
    field: &CoinField,
    region: DefectRegion,
    lambda: Eigenvalue,
    alpha: C64,
    beta: C64,
    x: i64,
) -> Result<Spinor> {
    MultiDefectSolution::new(field, region, lambda, alpha, beta)?.at(x)
}

/// Explicit transfer products on `[-(m+1), n+1]`, tail closed forms outside.
#[derive(Clone, Debug)]
pub struct MultiDefectSolution {
    region: DefectRegion,
    inner: AmplitudeField,
    right: Roots,
    left: Roots,
    right_seeds: RightSeeds,
    left_seeds: LeftSeeds,
}

impl MultiDefectSolution {
    pub fn new(
        field: &CoinField,
        region: DefectRegion,
        lambda: Eigenvalue,
        alpha: C64,
        beta: C64,
    ) -> Result<Self> {
        region.check_covers(field)?;
        let (m, n) = (region.m, region.n);
        let right = root_analysis(field.right_tail(), lambda)?.right;
        let left = root_analysis(field.left_tail(), lambda)?.left;

        let inner = amplitude_window(field, lambda, alpha, beta, -(m + 1), n + 1)?;
        // One application of the constant tail matrices yields the last seed
        // on each side.
        let beyond_right = transfer_plus(field, lambda, n + 2)?.matrix * inner.at(n + 1);
        let beyond_left = transfer_minus(field, lambda, -(m + 2))?.matrix * inner.at(-(m + 1));
        let right_seeds = RightSeeds {
            s_n: inner.at(n).left,
            s_n1: inner.at(n + 1).left,
            t_n1: inner.at(n + 1).right,
            t_n2: beyond_right.right,
        };
        let left_seeds = LeftSeeds {
            s_m1: inner.at(-(m + 1)).left,
            s_m2: beyond_left.left,
            t_m: inner.at(-m).right,
            t_m1: inner.at(-(m + 1)).right,
        };
        Ok(MultiDefectSolution {
            region,
            inner,
            right,
            left,
            right_seeds,
            left_seeds,
        })
    }

    pub fn at(&self, x: i64) -> Result<Spinor> {
        let (m, n) = (self.region.m, self.region.n);
        if let Some(v) = self.inner.get(x) {
            return Ok(v);
        }
        if x > n + 1 {
            right_tail_with(&self.right, self.right_seeds, n, x)
        } else {
            debug_assert!(x < -(m + 1));
            left_tail_with(&self.left, self.left_seeds, m, x)
        }
    }

    pub fn window(&self, xmin: i64, xmax: i64) -> Result<AmplitudeField> {
        check_window(xmin, xmax)?;
        let values = (xmin..=xmax)
            .map(|x| self.at(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(AmplitudeField::from_values(xmin, values))
    }
}

/// Closed-form amplitudes of a homogeneous walk on a window.
pub fn homogeneous_window(
    coin: &Coin,
    lambda: Eigenvalue,
    alpha: C64,
    beta: C64,
    xmin: i64,
    xmax: i64,
) -> Result<AmplitudeField> {
    check_window(xmin, xmax)?;
    let params = root_analysis(coin, lambda)?;
    let values = (xmin..=xmax)
        .map(|x| homogeneous_with(coin, &params, lambda, alpha, beta, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(AmplitudeField::from_values(xmin, values))
}
