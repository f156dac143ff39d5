//! Locally-balanced, strong-locally-balanced and d-regular predicates.
//!
//! Balance bounds are compared in exact rational arithmetic: a window of
//! length `L` with `w` ones is balanced iff `(1/2 - eps) L <= w <= (1/2 + eps) L`,
//! both ends inclusive.

use std::fmt;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitseq::BitSeq;
use crate::error::{Error, Result};

/// Default cap on `n` for exhaustive counting.
pub const DEFAULT_COUNT_LIMIT: usize = 20;

/// Window length and slack of a balance constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BalanceParams {
    ell: usize,
    eps: Ratio<i64>,
}

impl BalanceParams {
    pub fn new(ell: usize, eps: Ratio<i64>) -> Result<Self> {
        if ell == 0 {
            return Err(Error::InvalidParameter("window length must be positive".into()));
        }
        if eps <= Ratio::from_integer(0) || eps >= Ratio::new(1, 2) {
            return Err(Error::InvalidParameter(format!(
                "eps = {eps} must lie strictly between 0 and 1/2"
            )));
        }
        Ok(BalanceParams { ell, eps })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn eps(&self) -> Ratio<i64> {
        self.eps
    }

    /// Whether `weight` ones in a window of length `len` is within bounds.
    #[inline]
    pub fn window_ok(&self, weight: u32, len: usize) -> bool {
        let p = *self.eps.numer() as i128;
        let q = *self.eps.denom() as i128;
        let len = len as i128;
        let w2q = 2 * q * weight as i128;
        (q - 2 * p) * len <= w2q && w2q <= (q + 2 * p) * len
    }
}

impl fmt::Display for BalanceParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ell={} eps={}", self.ell, self.eps)
    }
}

/// Serializable form used in reports.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BalanceParamsRepr {
    pub ell: usize,
    pub eps: String,
}

impl From<BalanceParams> for BalanceParamsRepr {
    fn from(p: BalanceParams) -> Self {
        BalanceParamsRepr {
            ell: p.ell,
            eps: p.eps.to_string(),
        }
    }
}

fn windows_ok(x: &BitSeq, len: usize, p: &BalanceParams) -> bool {
    let n = x.len();
    if len > n {
        return true;
    }
    (1..=n - len + 1).all(|s| p.window_ok(x.weight_range(s, s + len - 1), len))
}

/// Every window of length exactly `ell` is balanced.
pub fn is_locally_balanced(x: &BitSeq, p: &BalanceParams) -> bool {
    windows_ok(x, p.ell, p)
}

/// Every window of every length `ell' >= ell` is balanced. Quadratic in `n`.
pub fn is_strong_locally_balanced(x: &BitSeq, p: &BalanceParams) -> bool {
    (p.ell..=x.len()).all(|len| windows_ok(x, len, p))
}

/// Both `x` and its differential sequence are strong-locally-balanced.
pub fn is_balanced_pair(x: &BitSeq, p: &BalanceParams) -> bool {
    is_strong_locally_balanced(x, p)
        && x
            .differential()
            .map(|d| is_strong_locally_balanced(&d, p))
            .unwrap_or(false)
}

/// Every window of length `window` (equivalently, of length at least
/// `window`) contains both `11` and `00`. Vacuously true when `window > n`.
pub fn is_d_regular(x: &BitSeq, window: usize) -> bool {
    let n = x.len();
    if window > n {
        return true;
    }
    if window < 2 {
        return false;
    }
    let ones = x.indicator_lenient(1, 1);
    let zeros = x.indicator_lenient(0, 0);
    // A window starting at s holds the pairs s .. s + window - 2.
    (1..=n - window + 1).all(|s| {
        let e = s + window - 2;
        ones.weight_range(s, e) > 0 && zeros.weight_range(s, e) > 0
    })
}

/// `eps_t + (1 - 4 eps_t^2) / (4 s) <= eps < 1/2`, the sufficient condition
/// for an `(ell_t, eps_t)`-balanced sequence to be strong-`(ell, eps)`-balanced
/// whenever `ell >= s * ell_t`.
pub fn link_condition(eps_t: Ratio<i128>, s: Ratio<i128>, eps: Ratio<i128>) -> Result<bool> {
    let zero = Ratio::from_integer(0);
    let half = Ratio::new(1, 2);
    let one = Ratio::from_integer(1);
    if eps_t <= zero || eps_t >= half {
        return Err(Error::InvalidParameter(format!("eps~ = {eps_t} not in (0, 1/2)")));
    }
    if s < one {
        return Err(Error::InvalidParameter(format!("s = {s} below 1")));
    }
    let lhs = eps_t + (one - Ratio::from_integer(4) * eps_t * eps_t) / (Ratio::from_integer(4) * s);
    Ok(lhs <= eps && eps < half)
}

/// `|{x in Sigma^n : x and psi(x) both strong-(ell, eps)-balanced}|` by
/// enumeration.
pub fn count_balanced_pair(n: usize, p: &BalanceParams, limit: usize) -> Result<u64> {
    if n > limit {
        return Err(Error::LimitExceeded { n, limit });
    }
    let total = 1u64 << n;
    Ok((0..total)
        .into_par_iter()
        .filter(|&w| is_balanced_pair(&BitSeq::from_word_unchecked(w as u128, n), p))
        .count() as u64)
}
