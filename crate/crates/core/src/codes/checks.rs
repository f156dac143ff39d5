//! Quantities that code constructions constrain, and the block-paired sums
//! used by the P-bounded codes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitseq::BitSeq;
use crate::syndromes::{vt, vt_int, Transform};

/// Which block pairs a paired sum runs over: `(1,2), (3,4), ...` or
/// `(2,3), (4,5), ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pairing {
    Odd,
    Even,
}

/// How the block pairs are cut off at the right end of the sequence.
///
/// With `n' = floor(n / P)` the blocks are `1 ..= n' + 1`, the last being the
/// possibly empty tail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Boundary {
    /// A pair is included whenever its first block exists; a missing second
    /// block counts as empty, so a lone final block still contributes.
    #[default]
    Lone,
    /// A pair is included only when both of its blocks exist.
    Paired,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Lone => "lone",
            Boundary::Paired => "paired",
        })
    }
}

impl std::str::FromStr for Boundary {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "lone" => Ok(Boundary::Lone),
            "paired" => Ok(Boundary::Paired),
            other => Err(crate::Error::InvalidParameter(format!(
                "unknown boundary rule {other:?} (expected lone or paired)"
            ))),
        }
    }
}

/// Sequence a paired sum applies its syndrome to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairInner {
    Identity,
    Indicator(u8, u8),
}

/// An integer-valued function of a codeword.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantity {
    /// `VT^(k)` of a transform of the whole word.
    Vt { transform: Transform, order: u32 },
    /// `sum_i VT^(k)(inner(x^(P,t_i) x^(P,t_i + 1)))` over the block pairs.
    Paired {
        pairing: Pairing,
        inner: PairInner,
        order: u32,
        block: usize,
        boundary: Boundary,
    },
}

impl Quantity {
    pub fn eval(&self, x: &BitSeq) -> u128 {
        match *self {
            Quantity::Vt { transform, order } => match transform {
                Transform::Identity => vt(x, order),
                Transform::Differential => vt(&x.differential().expect("length checked"), order),
                Transform::Run => x.run_sequence().map(|r| vt_int(&r, order)).unwrap_or(0),
                Transform::Indicator(a, b) => vt(&x.indicator_lenient(a, b), order),
            },
            Quantity::Paired {
                pairing,
                inner,
                order,
                block,
                boundary,
            } => paired_sum(x, block, pairing, inner, order, boundary),
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            Quantity::Vt { transform, order } => {
                let arg = match transform {
                    Transform::Identity => "x".to_string(),
                    Transform::Differential => "psi(x)".to_string(),
                    Transform::Run => "r(x)".to_string(),
                    Transform::Indicator(a, b) => format!("1_{a}{b}(x)"),
                };
                format!("VT{order}({arg})")
            }
            Quantity::Paired {
                pairing,
                inner,
                order,
                block,
                ..
            } => {
                let pair = match pairing {
                    Pairing::Odd => "x(2i-1)x(2i)",
                    Pairing::Even => "x(2i)x(2i+1)",
                };
                let arg = match inner {
                    PairInner::Identity => pair.to_string(),
                    PairInner::Indicator(a, b) => format!("1_{a}{b}({pair})"),
                };
                format!("sum_i VT{order}({arg}), P={block}")
            }
        }
    }
}

/// First block indices of the pairs a paired sum runs over.
pub fn pair_starts(n: usize, block: usize, pairing: Pairing, boundary: Boundary) -> Vec<usize> {
    let last = n / block + 1;
    let first = match pairing {
        Pairing::Odd => 1,
        Pairing::Even => 2,
    };
    (first..)
        .step_by(2)
        .take_while(|&t| match boundary {
            Boundary::Lone => t <= last,
            Boundary::Paired => t < last,
        })
        .collect()
}

/// Sum over block pairs of `VT^(k)(inner(x^(P,t) x^(P,t+1)))`.
pub fn paired_sum(
    x: &BitSeq,
    block: usize,
    pairing: Pairing,
    inner: PairInner,
    order: u32,
    boundary: Boundary,
) -> u128 {
    pair_starts(x.len(), block, pairing, boundary)
        .into_iter()
        .map(|t| {
            let seg = x
                .block_lenient(block, t)
                .concat(&x.block_lenient(block, t + 1))
                .expect("segment no longer than x");
            match inner {
                PairInner::Identity => vt(&seg, order),
                PairInner::Indicator(a, b) => vt(&seg.indicator_lenient(a, b), order),
            }
        })
        .sum()
}

/// A congruence `quantity(x) = residue (mod modulus)` with its residue key.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Check {
    pub key: String,
    pub quantity: Quantity,
    pub modulus: u64,
}

impl Check {
    pub fn residue(&self, x: &BitSeq) -> u64 {
        (self.quantity.eval(x) % self.modulus as u128) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitseq::bs;

    #[test]
    fn pair_starts_at_boundary() {
        // n = 8, P = 2: blocks 1..4 full, block 5 empty tail.
        assert_eq!(pair_starts(8, 2, Pairing::Odd, Boundary::Lone), vec![1, 3, 5]);
        assert_eq!(pair_starts(8, 2, Pairing::Odd, Boundary::Paired), vec![1, 3]);
        assert_eq!(pair_starts(8, 2, Pairing::Even, Boundary::Lone), vec![2, 4]);
        assert_eq!(pair_starts(8, 2, Pairing::Even, Boundary::Paired), vec![2, 4]);
        // n = 2P: the even pairing is the single pair (block 2, empty tail).
        assert_eq!(pair_starts(4, 2, Pairing::Even, Boundary::Lone), vec![2]);
        assert_eq!(pair_starts(4, 2, Pairing::Even, Boundary::Paired), vec![2]);
        // P > n: one (whole-word) block.
        assert_eq!(pair_starts(5, 9, Pairing::Odd, Boundary::Lone), vec![1]);
        assert_eq!(pair_starts(5, 9, Pairing::Even, Boundary::Lone), Vec::<usize>::new());
    }

    #[test]
    fn paired_sum_by_hand() {
        // x = 10 11 01 1 with P = 2: odd pairs (1011), (011); even pairs
        // (1101) and, for the lone rule, the tail block (1) on its own.
        let x = bs("1011011");
        let k1 = |pairing, boundary| paired_sum(&x, 2, pairing, PairInner::Identity, 1, boundary);
        assert_eq!(k1(Pairing::Odd, Boundary::Lone), vt(&bs("1011"), 1) + vt(&bs("011"), 1));
        assert_eq!(k1(Pairing::Odd, Boundary::Paired), k1(Pairing::Odd, Boundary::Lone));
        assert_eq!(k1(Pairing::Even, Boundary::Lone), vt(&bs("1101"), 1) + vt(&bs("1"), 1));
        assert_eq!(k1(Pairing::Even, Boundary::Paired), vt(&bs("1101"), 1));
        let ind = paired_sum(&x, 2, Pairing::Odd, PairInner::Indicator(0, 1), 1, Boundary::Lone);
        assert_eq!(ind, vt(&bs("010"), 1) + vt(&bs("10"), 1));
    }
}
