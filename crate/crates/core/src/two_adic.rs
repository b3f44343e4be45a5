//! Exact arithmetic on residues modulo powers of two.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::modular::{geom_sum_mod, mul_mod, reduce};

/// Largest supported modulus exponent.
pub const MAX_EXPONENT: u32 = 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwoAdicError {
    #[error("not a unit: {0} is even")]
    NotAUnit(i64),
    #[error("not a square root at base level: {reason}")]
    NotASquareRoot { reason: String },
    #[error("modulus exponent {0} exceeds the supported maximum {MAX_EXPONENT}")]
    ExponentTooLarge(u32),
}

/// A residue modulo `2^exp`, stored canonically in `[0, 2^exp)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Residue2 {
    value: u64,
    exp: u32,
}

impl Residue2 {
    pub fn new(value: i128, exp: u32) -> Self {
        assert!(exp <= MAX_EXPONENT, "modulus exponent {exp} too large");
        Residue2 { value: reduce(value, 1u64 << exp), exp }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn exponent(self) -> u32 {
        self.exp
    }

    pub fn modulus(self) -> u64 {
        1u64 << self.exp
    }

    pub fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.exp, rhs.exp);
        Residue2::new(self.value as i128 + rhs.value as i128, self.exp)
    }

    pub fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.exp, rhs.exp);
        Residue2::new(self.value as i128 - rhs.value as i128, self.exp)
    }

    pub fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.exp, rhs.exp);
        Residue2 { value: mul_mod(self.value, rhs.value, self.modulus()), exp: self.exp }
    }

    pub fn neg(self) -> Self {
        Residue2::new(-(self.value as i128), self.exp)
    }

    /// The same integer viewed modulo a smaller power of two.
    pub fn truncate(self, exp: u32) -> Self {
        assert!(exp <= self.exp);
        Residue2::new(self.value as i128, exp)
    }
}

impl fmt::Display for Residue2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod 2^{})", self.value, self.exp)
    }
}

/// A 2-adic valuation; `Infinity` is the valuation of zero and exceeds
/// every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(k) => Some(k),
            Valuation::Infinity => None,
        }
    }

    /// True when `self >= k`.
    pub fn at_least(self, k: i64) -> bool {
        match self {
            Valuation::Infinity => true,
            Valuation::Finite(v) => v as i64 >= k,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(k) => write!(f, "{k}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

pub fn deg2(u: i128) -> Valuation {
    if u == 0 {
        Valuation::Infinity
    } else {
        Valuation::Finite(u.trailing_zeros())
    }
}

fn check_exp(e: u32) -> Result<(), TwoAdicError> {
    if e > MAX_EXPONENT {
        Err(TwoAdicError::ExponentTooLarge(e))
    } else {
        Ok(())
    }
}

/// `[u]_s = 1 + s + ... + s^(u-1)` modulo `2^e`.
pub fn geom_sum(s: i64, u: u64, e: u32) -> Residue2 {
    let n = 1u64 << e;
    Residue2 { value: geom_sum_mod(reduce(s as i128, n), u, n), exp: e }
}

/// Inverse of an odd integer modulo `2^e`.
pub fn inv_mod2(u: i64, e: u32) -> Result<Residue2, TwoAdicError> {
    check_exp(e)?;
    if u.rem_euclid(2) == 0 {
        return Err(TwoAdicError::NotAUnit(u));
    }
    Ok(Residue2 { value: inv_odd(reduce(u as i128, 1u64 << e), e), exp: e })
}

/// Newton iteration `v <- v(2 - uv)`; every step doubles the correct bits.
pub(crate) fn inv_odd(u: u64, e: u32) -> u64 {
    if e == 0 {
        return 0;
    }
    let n: u128 = 1u128 << e;
    let u = u as u128 % n;
    // u*u == 1 mod 8 for odd u
    let mut v = u;
    let mut bits = 3;
    while bits < e {
        let uv = (u * v) % n;
        v = (v * ((2 + n - uv) % n)) % n;
        bits *= 2;
    }
    (v % n) as u64
}

/// All `x` in `[0, 2^e)` with `a*x == b (mod 2^e)`; empty when unsolvable.
pub fn solve_linear(a: i64, b: i64, e: u32) -> Vec<Residue2> {
    let n = 1u64 << e;
    let a = reduce(a as i128, n);
    let b = reduce(b as i128, n);
    // gcd(a, 2^e) = 2^k
    let k = if a == 0 { e } else { a.trailing_zeros().min(e) };
    if b != 0 && b.trailing_zeros() < k {
        return Vec::new();
    }
    let reduced = e - k;
    let m = 1u64 << reduced;
    let base = if reduced == 0 {
        0
    } else {
        mul_mod(b >> k, inv_odd(a >> k, reduced), m)
    };
    (0..(1u64 << k))
        .map(|j| Residue2 { value: base + j * m, exp: e })
        .collect()
}

/// Lifts a square root of `h` from modulus `2^e` to `2^target`.
///
/// Returns `s'` with `s'^2 == h (mod 2^target)` and `s' == s (mod 2^(e-1))`.
/// Each step writes `h = s_k^2 + 2^K u_k` and tries `s_k + 2^(K-1) u_k`.
/// That step only squares correctly when `s_k == 1 (mod 2^(K-2))`; otherwise
/// it falls back to `s_k + 2^(K-1) u_k s_k^(-1)`, which always does.
/// Iteration stops as soon as the target congruence holds.
pub fn sqrt_lift(s: i64, h: i64, e: u32, target: u32) -> Result<Residue2, TwoAdicError> {
    check_exp(target)?;
    if e < 3 {
        return Err(TwoAdicError::NotASquareRoot { reason: format!("base exponent {e} < 3") });
    }
    if target <= e {
        return Err(TwoAdicError::NotASquareRoot {
            reason: format!("target exponent {target} must exceed base exponent {e}"),
        });
    }
    if s.rem_euclid(2) == 0 {
        return Err(TwoAdicError::NotASquareRoot { reason: format!("base root {s} is even") });
    }
    // one spare bit: increments are only known modulo 2^(w-1)
    let w = target + 1;
    let big: u128 = 1u128 << w;
    let modw = |v: i128| -> u128 { v.rem_euclid(big as i128) as u128 };
    let h_w = modw(h as i128);
    let mut cur = modw(s as i128);
    let square_gap = |x: u128| -> u128 { (h_w + big - (x * x) % big) % big };
    if square_gap(cur) % (1u128 << e) != 0 {
        return Err(TwoAdicError::NotASquareRoot {
            reason: format!("{s}^2 != {h} (mod 2^{e})"),
        });
    }
    let mut valid = e;
    while square_gap(cur) % (1u128 << target) != 0 {
        let u = square_gap(cur) >> valid;
        // first step: 2^e -> 2^(2(e-1)); afterwards K -> K + (e-1)
        let next = if valid == e { 2 * (e - 1) } else { valid + e - 1 };
        let reached = 1u128 << next.min(target);
        let literal = (cur + ((u << (valid - 1)) % big)) % big;
        cur = if square_gap(literal) % reached == 0 {
            literal
        } else {
            let inv = inv_odd(cur as u64 & ((1u64 << w.min(63)) - 1), w.min(63)) as u128;
            (cur + (((u * inv) % big) << (valid - 1)) % big) % big
        };
        valid = next;
        debug_assert!(square_gap(cur) % reached == 0);
    }
    Ok(Residue2 { value: (cur % (1u128 << target)) as u64, exp: target })
}
