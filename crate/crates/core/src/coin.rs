//! Position-dependent coin sequences and their left/right move split.
//!
//! A [`Coin`] is the local 2×2 unitary `[[a, b], [c, d]]`. A [`CoinField`]
//! assigns a coin to every `x ∈ ℤ` using a left tail, a right tail and a
//! finite table of defect coins indexed by absolute lattice position.

use std::collections::BTreeMap;

use crate::error::{Entry, Error, Result};
use crate::linalg::{Mat2, C64, ZERO};

/// Entrywise tolerance on `U^H U - I`.
pub const UNITARITY_TOL: f64 = 1e-12;
/// Entries with modulus at or below this are treated as zero.
pub const ZERO_ENTRY_TOL: f64 = 1e-12;
/// Tolerance on `|omega| = 1` for phase factors.
pub const PHASE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coin {
    a: C64,
    b: C64,
    c: C64,
    d: C64,
    all_nonzero: bool,
}

impl Coin {
    /// Validated coin from its four entries.
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Coin> {
        let coin = Coin {
            a,
            b,
            c,
            d,
            all_nonzero: [a, b, c, d].iter().all(|z| z.norm() > ZERO_ENTRY_TOL),
        };
        let deviation = coin.unitarity_error();
        if deviation.is_nan() || deviation > UNITARITY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(coin)
    }

    pub fn hadamard() -> Coin {
        let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Coin::new(s, s, s, -s).expect("Hadamard coin is unitary")
    }

    /// The real reflection `[[cos θ, sin θ], [sin θ, -cos θ]]`.
    pub fn rotation(theta: f64) -> Coin {
        let (s, c) = theta.sin_cos();
        Coin::new(
            C64::new(c, 0.0),
            C64::new(s, 0.0),
            C64::new(s, 0.0),
            C64::new(-c, 0.0),
        )
        .expect("reflection coin is unitary")
    }

    /// `ω·U` for a unit-modulus phase `ω`.
    pub fn phase_scaled(&self, omega: C64) -> Result<Coin> {
        let modulus = omega.norm();
        if modulus.is_nan() || (modulus - 1.0).abs() > PHASE_TOL {
            return Err(Error::BadPhase { modulus });
        }
        Coin::new(
            self.a * omega,
            self.b * omega,
            self.c * omega,
            self.d * omega,
        )
    }

    pub fn a(&self) -> C64 {
        self.a
    }
    pub fn b(&self) -> C64 {
        self.b
    }
    pub fn c(&self) -> C64 {
        self.c
    }
    pub fn d(&self) -> C64 {
        self.d
    }

    pub fn entry(&self, e: Entry) -> C64 {
        match e {
            Entry::A => self.a,
            Entry::B => self.b,
            Entry::C => self.c,
            Entry::D => self.d,
        }
    }

    /// True when `abcd ≠ 0`, the standing assumption for the general
    /// transfer-matrix solution. Individual operations only check the
    /// entries they actually divide by.
    pub fn entries_nonzero(&self) -> bool {
        self.all_nonzero
    }

    /// Errors unless the named entry is nonzero. `position` is only used
    /// for the error message.
    pub fn require_nonzero(&self, e: Entry, position: i64) -> Result<C64> {
        let z = self.entry(e);
        if z.norm() > ZERO_ENTRY_TOL {
            Ok(z)
        } else {
            Err(Error::DivisionByZeroEntry { entry: e, position })
        }
    }

    pub fn matrix(&self) -> Mat2 {
        Mat2::new(self.a, self.b, self.c, self.d)
    }

    /// Max entrywise `|(U^H U - I)_ij|`.
    pub fn unitarity_error(&self) -> f64 {
        let m = self.matrix();
        (m.adjoint() * m).max_abs_diff(&Mat2::IDENTITY)
    }

    /// Split `U = P + Q` into the left-moving row (`P`) and right-moving
    /// row (`Q`). No arithmetic is performed, so the sum is exact.
    pub fn split(&self) -> CoinSplit {
        CoinSplit {
            p: Mat2::new(self.a, self.b, ZERO, ZERO),
            q: Mat2::new(ZERO, ZERO, self.c, self.d),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoinSplit {
    /// Top row of the coin; moves the walker left.
    pub p: Mat2,
    /// Bottom row of the coin; moves the walker right.
    pub q: Mat2,
}

/// Coin sequence `x ↦ U_x`: two homogeneous tails plus a finite defect table.
#[derive(Clone, Debug, PartialEq)]
pub struct CoinField {
    left_tail: Coin,
    right_tail: Coin,
    defects: BTreeMap<i64, Coin>,
}

impl CoinField {
    pub fn homogeneous(coin: Coin) -> CoinField {
        CoinField {
            left_tail: coin,
            right_tail: coin,
            defects: BTreeMap::new(),
        }
    }

    /// Field with the given tails and defect table.
    ///
    /// If the tails differ, the defect table must be contiguous so that
    /// every site between the outermost defects resolves unambiguously.
    pub fn new(left_tail: Coin, right_tail: Coin, defects: BTreeMap<i64, Coin>) -> Result<Self> {
        if left_tail != right_tail {
            if let (Some(&lo), Some(&hi)) = (defects.keys().next(), defects.keys().next_back()) {
                if let Some(gap) = (lo..=hi).find(|x| !defects.contains_key(x)) {
                    return Err(Error::DefectGap(gap));
                }
            }
        }
        Ok(CoinField {
            left_tail,
            right_tail,
            defects,
        })
    }

    /// Builder-style insertion of a defect coin, re-checking the gap rule.
    pub fn with_defect(mut self, x: i64, coin: Coin) -> Result<Self> {
        self.defects.insert(x, coin);
        CoinField::new(self.left_tail, self.right_tail, self.defects)
    }

    pub fn left_tail(&self) -> &Coin {
        &self.left_tail
    }

    pub fn right_tail(&self) -> &Coin {
        &self.right_tail
    }

    pub fn defects(&self) -> &BTreeMap<i64, Coin> {
        &self.defects
    }

    /// `(lo, hi)` of the defect table, `None` for a homogeneous field.
    pub fn defect_hull(&self) -> Option<(i64, i64)> {
        Some((
            *self.defects.keys().next()?,
            *self.defects.keys().next_back()?,
        ))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.left_tail == self.right_tail && self.defects.values().all(|c| *c == self.left_tail)
    }

    pub fn coin_at(&self, x: i64) -> &Coin {
        if let Some(c) = self.defects.get(&x) {
            return c;
        }
        match self.defect_hull() {
            Some((lo, _)) if x < lo => &self.left_tail,
            Some(_) => &self.right_tail,
            // Gaps inside the hull only occur when both tails agree.
            None if x < 0 => &self.left_tail,
            None => &self.right_tail,
        }
    }
}
