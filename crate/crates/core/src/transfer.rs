//! Transfer matrices `D⁺ₓ`, `D⁻ₓ` and eigenvector amplitudes built from them.
//!
//! The eigenvalue relation `U⁽ˢ⁾Ψ = λΨ` couples each site to its two
//! neighbours:
//!
//! ```text
//! λ Ψᴸ(x) = a_{x+1} Ψᴸ(x+1) + b_{x+1} Ψᴿ(x+1)
//! λ Ψᴿ(x) = c_{x-1} Ψᴸ(x-1) + d_{x-1} Ψᴿ(x-1)
//! ```
//!
//! Solving for `Ψ(x)` in terms of `Ψ(x-1)` gives `Ψ(x) = D⁺ₓ Ψ(x-1)`, and the
//! inverse step is `Ψ(x) = D⁻ₓ Ψ(x+1)` with `D⁻_{x-1} = (D⁺ₓ)⁻¹`.
//!
//! No renormalisation is done while accumulating products. For exponential
//! type solutions the amplitudes grow like `|Λ|^|x|`; with the Hadamard coin
//! that is at most `(√2+1)^|x|`, which overflows `f64` beyond `|x| ≈ 700`.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use crate::coin::CoinField;
use crate::error::{Entry, Error, Result};
use crate::linalg::{Mat2, Spinor, C64};

/// Tolerance on `|λ| = 1` for eigenvalues given directly.
pub const EIGENVALUE_TOL: f64 = 1e-12;
/// Looser tolerance for user-supplied `[re, im]` values, which are then
/// renormalised onto the unit circle.
pub const EIGENVALUE_INPUT_TOL: f64 = 1e-9;

/// Unit-modulus eigenvalue `λ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigenvalue(C64);

impl Eigenvalue {
    pub fn new(value: C64) -> Result<Eigenvalue> {
        let modulus = value.norm();
        if modulus.is_nan() || (modulus - 1.0).abs() > EIGENVALUE_TOL {
            return Err(Error::BadEigenvalue { modulus });
        }
        Ok(Eigenvalue(value))
    }

    /// Accepts `|value|` within [`EIGENVALUE_INPUT_TOL`] of one and projects
    /// onto the unit circle.
    pub fn normalized(value: C64) -> Result<Eigenvalue> {
        let modulus = value.norm();
        if modulus.is_nan() || (modulus - 1.0).abs() > EIGENVALUE_INPUT_TOL {
            return Err(Error::BadEigenvalue { modulus });
        }
        if modulus == 1.0 {
            Ok(Eigenvalue(value))
        } else {
            Ok(Eigenvalue(value / modulus))
        }
    }

    /// `λ = e^{2πit}`, see [`unit_from_turns`].
    pub fn from_turns(turns: f64) -> Eigenvalue {
        Eigenvalue(unit_from_turns(turns))
    }

    pub fn value(&self) -> C64 {
        self.0
    }
}

/// `e^{2πit}`. Multiples of 1/8 turn are produced exactly, so `e^{iπ/4}`
/// and friends hit the degenerate-root condition as tightly as floating
/// point allows.
pub fn unit_from_turns(turns: f64) -> C64 {
    let t = turns.rem_euclid(1.0);
    let eighths = t * 8.0;
    if eighths.fract() == 0.0 {
        let s = FRAC_1_SQRT_2;
        let (re, im) = match eighths as u8 {
            0 | 8 => (1.0, 0.0),
            1 => (s, s),
            2 => (0.0, 1.0),
            3 => (-s, s),
            4 => (-1.0, 0.0),
            5 => (-s, -s),
            6 => (0.0, -1.0),
            _ => (s, -s),
        };
        return C64::new(re, im);
    }
    C64::from_polar(1.0, TAU * t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransferMatrix {
    pub matrix: Mat2,
    pub direction: Direction,
    pub position: i64,
}

/// `D⁺ₓ`, mapping `Ψ(x-1)` to `Ψ(x)`. Uses the coins at `x` and `x-1`;
/// requires `aₓ ≠ 0`.
pub fn transfer_plus(field: &CoinField, lambda: Eigenvalue, x: i64) -> Result<TransferMatrix> {
    let here = field.coin_at(x);
    let prev = field.coin_at(x - 1);
    let a = here.require_nonzero(Entry::A, x)?;
    let l = lambda.value();
    let la = l * a;
    let matrix = Mat2::new(
        (l * l - here.b() * prev.c()) / la,
        -(here.b() * prev.d()) / la,
        prev.c() / l,
        prev.d() / l,
    );
    Ok(TransferMatrix {
        matrix,
        direction: Direction::Plus,
        position: x,
    })
}

/// `D⁻ₓ`, mapping `Ψ(x+1)` to `Ψ(x)`. Uses the coins at `x+1` and `x`;
/// requires `dₓ ≠ 0`.
pub fn transfer_minus(field: &CoinField, lambda: Eigenvalue, x: i64) -> Result<TransferMatrix> {
    let here = field.coin_at(x);
    let next = field.coin_at(x + 1);
    let d = here.require_nonzero(Entry::D, x)?;
    let l = lambda.value();
    let ld = l * d;
    let matrix = Mat2::new(
        next.a() / l,
        next.b() / l,
        -(next.a() * here.c()) / ld,
        (l * l - next.b() * here.c()) / ld,
    );
    Ok(TransferMatrix {
        matrix,
        direction: Direction::Minus,
        position: x,
    })
}

/// Eigenvector amplitudes `Ψ(x)` on a closed window containing the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeField {
    xmin: i64,
    values: Vec<Spinor>,
}

impl AmplitudeField {
    /// Wraps raw amplitudes starting at `xmin`. The window need not contain
    /// the origin; use this for amplitudes that did not come from
    /// [`amplitude_window`].
    pub fn from_values(xmin: i64, values: Vec<Spinor>) -> AmplitudeField {
        AmplitudeField { xmin, values }
    }

    pub fn xmin(&self) -> i64 {
        self.xmin
    }

    pub fn xmax(&self) -> i64 {
        self.xmin + self.values.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, x: i64) -> bool {
        x >= self.xmin && x <= self.xmax()
    }

    pub fn get(&self, x: i64) -> Option<Spinor> {
        if self.contains(x) {
            Some(self.values[(x - self.xmin) as usize])
        } else {
            None
        }
    }

    /// Amplitude at `x`; panics outside the window.
    pub fn at(&self, x: i64) -> Spinor {
        self.get(x)
            .unwrap_or_else(|| panic!("x = {x} outside window [{}, {}]", self.xmin, self.xmax()))
    }

    pub fn set(&mut self, x: i64, v: Spinor) {
        let i = (x - self.xmin) as usize;
        self.values[i] = v;
    }

    /// `(α, β) = Ψ(0)`, if the window contains the origin.
    pub fn origin(&self) -> Option<Spinor> {
        self.get(0)
    }

    pub fn values(&self) -> &[Spinor] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Spinor)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.xmin + i as i64, *v))
    }

    /// Largest component modulus over the window.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(Spinor::max_abs).fold(0.0, f64::max)
    }
}

pub(crate) fn check_window(xmin: i64, xmax: i64) -> Result<()> {
    if xmin > 0 || xmax < 0 {
        return Err(Error::InvalidWindow {
            min: xmin,
            max: xmax,
            reason: "window must contain the origin".into(),
        });
    }
    Ok(())
}

/// Solves `U⁽ˢ⁾Ψ = λΨ` on `[xmin, xmax]` from `Ψ(0) = (α, β)`.
///
/// Steps outward from the origin one site at a time:
/// `Ψ(x) = D⁺ₓ Ψ(x-1)` for `x ≥ 1` and `Ψ(x) = D⁻ₓ Ψ(x+1)` for `x ≤ -1`.
pub fn amplitude_window(
    field: &CoinField,
    lambda: Eigenvalue,
    alpha: C64,
    beta: C64,
    xmin: i64,
    xmax: i64,
) -> Result<AmplitudeField> {
    check_window(xmin, xmax)?;
    let mut out = AmplitudeField {
        xmin,
        values: vec![Spinor::ZERO; (xmax - xmin + 1) as usize],
    };
    let origin = Spinor::new(alpha, beta);
    out.set(0, origin);

    let mut psi = origin;
    for x in 1..=xmax {
        psi = transfer_plus(field, lambda, x)?.matrix * psi;
        out.set(x, psi);
    }
    psi = origin;
    for x in (xmin..=-1).rev() {
        psi = transfer_minus(field, lambda, x)?.matrix * psi;
        out.set(x, psi);
    }
    Ok(out)
}
