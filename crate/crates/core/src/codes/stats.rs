//! Exhaustive enumeration and residue-class statistics.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{CodeLayout, CodeSpec};
use crate::bitseq::BitSeq;
use crate::error::{Error, Result};

/// Largest `n` enumerated by default.
pub const DEFAULT_ENUMERATE_LIMIT: usize = 24;
/// Enumeration above this length is slow enough to deserve a warning.
pub const ENUMERATE_WARN_ABOVE: usize = 20;

fn check_limit(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::LimitExceeded { n, limit });
    }
    Ok(())
}

fn words(n: usize) -> impl IndexedParallelIterator<Item = BitSeq> {
    (0..1usize << n)
        .into_par_iter()
        .map(move |w| BitSeq::from_word_unchecked(w as u128, n))
}

/// All members of the class, in lexicographic order.
pub fn enumerate_code(spec: &CodeSpec) -> Result<Vec<BitSeq>> {
    enumerate_code_with_limit(spec, DEFAULT_ENUMERATE_LIMIT)
}

pub fn enumerate_code_with_limit(spec: &CodeSpec, limit: usize) -> Result<Vec<BitSeq>> {
    check_limit(spec.n(), limit)?;
    Ok(words(spec.n()).filter(|x| spec.member(x)).collect())
}

/// Every non-empty class of the layout with its members, ordered by
/// residue vector; members are in lexicographic order.
pub fn classes(layout: &CodeLayout, limit: usize) -> Result<Vec<(Vec<u64>, Vec<BitSeq>)>> {
    check_limit(layout.n(), limit)?;
    let tagged: Vec<(Vec<u64>, BitSeq)> = words(layout.n())
        .filter_map(|x| layout.signature(&x).map(|s| (s, x)))
        .collect();
    let mut map: BTreeMap<Vec<u64>, Vec<BitSeq>> = BTreeMap::new();
    for (s, x) in tagged {
        map.entry(s).or_default().push(x);
    }
    Ok(map.into_iter().collect())
}

/// Size of one class in a partition report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassStats {
    pub residues: Vec<u64>,
    pub size: usize,
}

/// Class-size statistics of a construction at fixed `n` and parameters.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartitionStats {
    pub code: String,
    pub n: usize,
    /// Words passing the eligibility filter.
    pub eligible: u64,
    /// Number of residue tuples, including empty classes. Serialized as a
    /// decimal string since it can exceed 64 bits.
    #[serde(serialize_with = "u128_string")]
    pub residue_tuples: u128,
    /// Non-empty classes.
    pub classes: u64,
    pub max_size: usize,
    pub best_class: ClassStats,
    /// `n - log2(max_size)`.
    pub redundancy_bits: f64,
    /// `size -> number of residue tuples with that class size`, counts as
    /// decimal strings.
    #[serde(serialize_with = "u128_string_map")]
    pub histogram: BTreeMap<usize, u128>,
}

fn u128_string<S: serde::Serializer>(v: &u128, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn u128_string_map<S: serde::Serializer>(m: &BTreeMap<usize, u128>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(k, v)| (k, v.to_string())))
}

pub fn partition_stats(layout: &CodeLayout, limit: usize) -> Result<PartitionStats> {
    let classes = classes(layout, limit)?;
    let mut histogram: BTreeMap<usize, u128> = BTreeMap::new();
    let mut eligible = 0u64;
    for (_, members) in &classes {
        *histogram.entry(members.len()).or_default() += 1;
        eligible += members.len() as u64;
    }
    let tuples = layout.residue_tuples();
    let empty = tuples - classes.len() as u128;
    if empty > 0 {
        histogram.insert(0, empty);
    }
    // First class of maximum size in residue order.
    let best = classes
        .iter()
        .fold(None::<&(Vec<u64>, Vec<BitSeq>)>, |best, c| match best {
            Some(b) if b.1.len() >= c.1.len() => Some(b),
            _ => Some(c),
        });
    let best_class = best
        .map(|(r, m)| ClassStats {
            residues: r.clone(),
            size: m.len(),
        })
        .unwrap_or(ClassStats {
            residues: Vec::new(),
            size: 0,
        });
    let max_size = best_class.size;
    let redundancy_bits = if max_size == 0 {
        f64::INFINITY
    } else {
        layout.n() as f64 - (max_size as f64).log2()
    };
    Ok(PartitionStats {
        code: layout.construction().tag().to_string(),
        n: layout.n(),
        eligible,
        residue_tuples: tuples,
        classes: classes.len() as u64,
        max_size,
        best_class,
        redundancy_bits,
        histogram,
    })
}
