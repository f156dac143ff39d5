//! Higher-order VT syndromes and syndrome vectors over sequence transforms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitseq::{BitSeq, IntSeq};
use crate::error::{Error, Result};

/// Largest supported syndrome order. With sequences of at most 129 symbols
/// every syndrome of order up to this bound fits in a `u128`.
pub const MAX_ORDER: u32 = 16;

/// The weight `c_i^(k)`: 1 for `k = 0`, otherwise `sum_{j=1}^{i} j^(k-1)`.
pub fn vt_coefficient(i: u64, k: u32) -> u128 {
    assert!(i >= 1, "VT coefficients are 1-indexed");
    assert!(k <= MAX_ORDER, "order {k} above MAX_ORDER");
    let i = i as u128;
    match k {
        0 => 1,
        1 => i,
        2 => i * (i + 1) / 2,
        3 => i * (i + 1) * (2 * i + 1) / 6,
        _ => (1..=i).map(|j| j.pow(k - 1)).sum(),
    }
}

/// Unreduced `VT^(k)(x) = sum_i c_i^(k) x_i`.
pub fn vt(x: &BitSeq, k: u32) -> u128 {
    if k == 0 {
        return x.weight() as u128;
    }
    let n = x.len();
    let mut word = x.word();
    let mut total = 0u128;
    while word != 0 {
        let bit = word.trailing_zeros() as usize;
        word &= word - 1;
        total += vt_coefficient((n - bit) as u64, k);
    }
    total
}

/// `sum_i c_i^(k) r_i` over an integer sequence.
pub fn vt_int(r: &IntSeq, k: u32) -> u128 {
    r.0.iter()
        .enumerate()
        .map(|(i, &v)| vt_coefficient(i as u64 + 1, k) * v as u128)
        .sum()
}

/// Sequence transform a syndrome is taken over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Transform {
    Identity,
    Differential,
    /// The integer run sequence, weighted by `c_i^(k)`.
    Run,
    Indicator(u8, u8),
}

impl Transform {
    /// `VT^(k)` of the transformed sequence.
    pub fn syndrome(&self, x: &BitSeq, k: u32) -> Result<u128> {
        match *self {
            Transform::Identity => Ok(vt(x, k)),
            Transform::Differential => Ok(vt(&x.differential()?, k)),
            Transform::Run => Ok(vt_int(&x.run_sequence()?, k)),
            Transform::Indicator(a, b) => Ok(vt(&x.indicator(a, b)?, k)),
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transform::Identity => f.write_str("identity"),
            Transform::Differential => f.write_str("differential"),
            Transform::Run => f.write_str("run"),
            Transform::Indicator(a, b) => write!(f, "indicator{a}{b}"),
        }
    }
}

impl FromStr for Transform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" | "id" | "x" => Ok(Transform::Identity),
            "differential" | "diff" | "psi" => Ok(Transform::Differential),
            "run" => Ok(Transform::Run),
            "indicator00" | "00" => Ok(Transform::Indicator(0, 0)),
            "indicator01" | "01" => Ok(Transform::Indicator(0, 1)),
            "indicator10" | "10" => Ok(Transform::Indicator(1, 0)),
            "indicator11" | "11" => Ok(Transform::Indicator(1, 1)),
            other => Err(Error::InvalidParameter(format!("unknown transform {other:?}"))),
        }
    }
}

/// One syndrome check: transform, order and modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SyndromeSpec {
    pub transform: Transform,
    pub order: u32,
    pub modulus: u64,
}

impl SyndromeSpec {
    pub fn new(transform: Transform, order: u32, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidParameter("modulus must be positive".into()));
        }
        if order > MAX_ORDER {
            return Err(Error::OutOfRange {
                what: "syndrome order",
                value: order as i128,
                range: format!("[0, {MAX_ORDER}]"),
            });
        }
        Ok(SyndromeSpec {
            transform,
            order,
            modulus,
        })
    }

    pub fn residue(&self, x: &BitSeq) -> Result<u64> {
        Ok((self.transform.syndrome(x, self.order)? % self.modulus as u128) as u64)
    }
}

/// Residues of a list of syndrome checks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SyndromeVector(pub Vec<u64>);

pub fn syndrome_vector(x: &BitSeq, specs: &[SyndromeSpec]) -> Result<SyndromeVector> {
    specs
        .iter()
        .map(|s| s.residue(x))
        .collect::<Result<Vec<_>>>()
        .map(SyndromeVector)
}
