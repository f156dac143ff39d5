//! Error balls for insertion/deletion/substitution budgets.
//!
//! Balls are generated in canonical order: all deletions first, then up to
//! `t3` substitutions at pairwise-distinct positions, then all insertions.
//! Any interleaving of the same operations reaches the same set.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::bitseq::{BitSeq, MAX_LEN};
use crate::error::{Error, Result};

/// Default cap on `t1 + t2 + t3`.
pub const DEFAULT_BUDGET_LIMIT: usize = 4;

/// Exactly `ins` insertions, exactly `del` deletions, up to `sub` substitutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChannelBudget {
    pub ins: usize,
    pub del: usize,
    pub sub: usize,
}

impl ChannelBudget {
    pub fn new(ins: usize, del: usize, sub: usize) -> Result<Self> {
        Self::with_limit(ins, del, sub, DEFAULT_BUDGET_LIMIT)
    }

    pub fn with_limit(ins: usize, del: usize, sub: usize, limit: usize) -> Result<Self> {
        let total = ins + del + sub;
        if total > limit {
            return Err(Error::OutOfRange {
                what: "total channel budget",
                value: total as i128,
                range: format!("[0, {limit}]"),
            });
        }
        Ok(ChannelBudget { ins, del, sub })
    }

    pub const fn of(ins: usize, del: usize, sub: usize) -> Self {
        ChannelBudget { ins, del, sub }
    }

    pub fn total(&self) -> usize {
        self.ins + self.del + self.sub
    }

    /// Length of every ball member for an input of length `n`.
    pub fn output_len(&self, n: usize) -> Option<usize> {
        (n + self.ins).checked_sub(self.del)
    }

    /// The budget that maps received words back to their sources.
    pub fn inverse(&self) -> Self {
        ChannelBudget {
            ins: self.del,
            del: self.ins,
            sub: self.sub,
        }
    }
}

impl fmt::Display for ChannelBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.ins, self.del, self.sub)
    }
}

impl FromStr for ChannelBudget {
    type Err = Error;

    /// Parses `t1,t2,t3`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::InvalidParameter(format!(
                "channel {s:?} must be three comma-separated counts t1,t2,t3"
            )));
        }
        let num = |p: &str| {
            p.parse::<usize>()
                .map_err(|_| Error::InvalidParameter(format!("bad channel count {p:?}")))
        };
        ChannelBudget::new(num(parts[0])?, num(parts[1])?, num(parts[2])?)
    }
}

/// Up to `t` edits of any kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EditBudget(pub usize);

impl EditBudget {
    /// Every exact `(t1, t2)` split with the substitution cap filling the rest.
    /// Together these cover every combination with `t1 + t2 + t3 <= t`.
    pub fn components(&self) -> Vec<ChannelBudget> {
        let t = self.0;
        let mut out = Vec::new();
        for ins in 0..=t {
            for del in 0..=t - ins {
                out.push(ChannelBudget::of(ins, del, t - ins - del));
            }
        }
        out
    }
}

/// A deduplicated set of sequences in canonical (length, lexicographic) order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Ball {
    members: Vec<BitSeq>,
}

impl Ball {
    pub fn from_unsorted(mut members: Vec<BitSeq>) -> Self {
        members.sort_unstable();
        members.dedup();
        Ball { members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[BitSeq] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BitSeq> {
        self.members.iter()
    }

    pub fn contains(&self, z: &BitSeq) -> bool {
        self.members.binary_search(z).is_ok()
    }

    /// Smallest common member, if any.
    pub fn first_common(&self, other: &Ball) -> Option<BitSeq> {
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.members, &other.members);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return Some(a[i]),
            }
        }
        None
    }

    pub fn intersects(&self, other: &Ball) -> bool {
        self.first_common(other).is_some()
    }

    pub fn union(&self, other: &Ball) -> Ball {
        let mut v = self.members.clone();
        v.extend_from_slice(&other.members);
        Ball::from_unsorted(v)
    }

    pub fn into_vec(self) -> Vec<BitSeq> {
        self.members
    }
}

impl<'a> IntoIterator for &'a Ball {
    type Item = &'a BitSeq;
    type IntoIter = std::slice::Iter<'a, BitSeq>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// Distinct results of deleting one symbol: deleting any symbol of a run
/// gives the same word, so only the first symbol of each run is removed.
fn single_deletions(x: &BitSeq, out: &mut FxHashSet<BitSeq>) {
    let n = x.len();
    for i in 1..=n {
        if i == 1 || x.get(i) != x.get(i - 1) {
            out.insert(x.delete(i));
        }
    }
}

/// Distinct results of inserting one symbol: `b` is only placed where the
/// preceding symbol differs from `b`.
fn single_insertions(x: &BitSeq, out: &mut FxHashSet<BitSeq>) {
    let n = x.len();
    for i in 1..=n + 1 {
        let prev = if i == 1 { None } else { Some(x.get(i - 1)) };
        for b in 0..=1u8 {
            if prev != Some(b) {
                out.insert(x.insert(i, b));
            }
        }
    }
}

fn flips_up_to(x: &BitSeq, remaining: usize, from: usize, out: &mut FxHashSet<BitSeq>) {
    out.insert(*x);
    if remaining == 0 {
        return;
    }
    for i in from..=x.len() {
        flips_up_to(&x.flip(i), remaining - 1, i + 1, out);
    }
}

fn check_budget(x: &BitSeq, b: &ChannelBudget) -> Result<()> {
    if b.del > x.len() {
        return Err(Error::OutOfRange {
            what: "deletions",
            value: b.del as i128,
            range: format!("[0, {}]", x.len()),
        });
    }
    let peak = x.len() + b.ins;
    if peak > MAX_LEN {
        return Err(Error::TooLong(peak));
    }
    Ok(())
}

/// Canonical-order generation into a hash set (unsorted).
pub(crate) fn mixed_ball_set(x: &BitSeq, b: &ChannelBudget) -> FxHashSet<BitSeq> {
    let mut current = FxHashSet::default();
    current.insert(*x);
    for _ in 0..b.del {
        let mut next = FxHashSet::default();
        for s in &current {
            single_deletions(s, &mut next);
        }
        current = next;
    }
    if b.sub > 0 {
        let mut next = FxHashSet::default();
        for s in &current {
            flips_up_to(s, b.sub, 1, &mut next);
        }
        current = next;
    }
    for _ in 0..b.ins {
        let mut next = FxHashSet::default();
        for s in &current {
            single_insertions(s, &mut next);
        }
        current = next;
    }
    current
}

/// All words reachable from `x` with exactly `b.ins` insertions, exactly
/// `b.del` deletions and up to `b.sub` substitutions.
pub fn mixed_ball(x: &BitSeq, b: &ChannelBudget) -> Result<Ball> {
    check_budget(x, b)?;
    Ok(Ball::from_unsorted(mixed_ball_set(x, b).into_iter().collect()))
}

/// All words within `t` edits of `x`; members have lengths `n - t ..= n + t`.
pub fn edit_ball(x: &BitSeq, t: EditBudget) -> Result<Ball> {
    if t.0 > x.len() {
        return Err(Error::OutOfRange {
            what: "edit budget",
            value: t.0 as i128,
            range: format!("[0, {}]", x.len()),
        });
    }
    let mut all = FxHashSet::default();
    for b in t.components() {
        check_budget(x, &b)?;
        all.extend(mixed_ball_set(x, &b));
    }
    Ok(Ball::from_unsorted(all.into_iter().collect()))
}

/// Whether the two balls share a member.
pub fn balls_intersect(x: &BitSeq, y: &BitSeq, b: &ChannelBudget) -> Result<bool> {
    common_word(x, y, b).map(|w| w.is_some())
}

/// Smallest word in both balls, if any.
pub fn common_word(x: &BitSeq, y: &BitSeq, b: &ChannelBudget) -> Result<Option<BitSeq>> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    let bx = mixed_ball(x, b)?;
    let by = mixed_ball(y, b)?;
    Ok(bx.first_common(&by))
}

/// Substitutes `x_e` and then deletes `x_d`. `e = 0` or `e = d` means the
/// deletion alone.
pub fn apply_del_sub(x: &BitSeq, d: usize, e: usize) -> Result<BitSeq> {
    let n = x.len();
    if d == 0 || d > n {
        return Err(Error::OutOfRange {
            what: "deletion index",
            value: d as i128,
            range: format!("[1, {n}]"),
        });
    }
    if e > n {
        return Err(Error::OutOfRange {
            what: "substitution index",
            value: e as i128,
            range: format!("[0, {n}]"),
        });
    }
    let sub = if e == 0 || e == d { *x } else { x.flip(e) };
    Ok(sub.delete(d))
}

/// A single edit; positions refer to the sequence at the moment the edit is
/// applied (1-indexed).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum EditOp {
    Delete { pos: usize },
    Substitute { pos: usize },
    Insert { pos: usize, bit: u8 },
}

impl EditOp {
    pub fn apply(&self, x: &BitSeq) -> Result<BitSeq> {
        let n = x.len();
        let bad = |pos: usize, hi: usize| Error::OutOfRange {
            what: "edit position",
            value: pos as i128,
            range: format!("[1, {hi}]"),
        };
        match *self {
            EditOp::Delete { pos } if pos >= 1 && pos <= n => Ok(x.delete(pos)),
            EditOp::Substitute { pos } if pos >= 1 && pos <= n => Ok(x.flip(pos)),
            EditOp::Insert { pos, bit } if pos >= 1 && pos <= n + 1 && bit <= 1 => {
                if n + 1 > MAX_LEN {
                    return Err(Error::TooLong(n + 1));
                }
                Ok(x.insert(pos, bit))
            }
            EditOp::Delete { pos } | EditOp::Substitute { pos } => Err(bad(pos, n)),
            EditOp::Insert { pos, .. } => Err(bad(pos, n + 1)),
        }
    }
}

impl fmt::Display for EditOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EditOp::Delete { pos } => write!(f, "del@{pos}"),
            EditOp::Substitute { pos } => write!(f, "sub@{pos}"),
            EditOp::Insert { pos, bit } => write!(f, "ins{bit}@{pos}"),
        }
    }
}

pub fn apply_ops(x: &BitSeq, ops: &[EditOp]) -> Result<BitSeq> {
    ops.iter().try_fold(*x, |acc, op| op.apply(&acc))
}

/// Output of the channel simulator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChannelOutput {
    pub received: BitSeq,
    /// One edit script, in application order, that produces `received`.
    pub ops: Vec<EditOp>,
}

/// Every ball member together with the first canonical-order script reaching
/// it. Level maps are ordered so the chosen scripts are deterministic.
fn ball_with_scripts(x: &BitSeq, b: &ChannelBudget) -> BTreeMap<BitSeq, Vec<EditOp>> {
    let mut level: BTreeMap<BitSeq, Vec<EditOp>> = BTreeMap::new();
    level.insert(*x, Vec::new());
    let step = |level: &BTreeMap<BitSeq, Vec<EditOp>>,
                gen: &dyn Fn(&BitSeq) -> Vec<EditOp>| {
        let mut next: BTreeMap<BitSeq, Vec<EditOp>> = BTreeMap::new();
        for (s, script) in level {
            for op in gen(s) {
                let out = op.apply(s).expect("generated op is in range");
                next.entry(out).or_insert_with(|| {
                    let mut v = script.clone();
                    v.push(op);
                    v
                });
            }
        }
        next
    };
    for _ in 0..b.del {
        level = step(&level, &|s| (1..=s.len()).map(|pos| EditOp::Delete { pos }).collect());
    }
    // Substitutions at strictly increasing positions of the shortened word.
    let mut acc = level.clone();
    let mut frontier = level;
    for _ in 0..b.sub {
        let mut next: BTreeMap<BitSeq, Vec<EditOp>> = BTreeMap::new();
        for (s, script) in &frontier {
            let after = script
                .iter()
                .filter_map(|op| match op {
                    EditOp::Substitute { pos } => Some(*pos),
                    _ => None,
                })
                .max()
                .unwrap_or(0);
            for pos in after + 1..=s.len() {
                let out = s.flip(pos);
                let mut v = script.clone();
                v.push(EditOp::Substitute { pos });
                next.entry(out).or_insert(v.clone());
                acc.entry(out).or_insert(v);
            }
        }
        frontier = next;
    }
    level = acc;
    for _ in 0..b.ins {
        level = step(&level, &|s| {
            (1..=s.len() + 1)
                .flat_map(|pos| [0u8, 1].map(|bit| EditOp::Insert { pos, bit }))
                .collect()
        });
    }
    level
}

/// Samples one member of `mixed_ball(x, b)` uniformly, deterministically for
/// a given seed, and reports an edit script producing it.
pub fn simulate_channel(x: &BitSeq, b: &ChannelBudget, seed: u64) -> Result<ChannelOutput> {
    check_budget(x, b)?;
    let scripts = ball_with_scripts(x, b);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let idx = rng.gen_range(0..scripts.len());
    let (received, ops) = scripts
        .into_iter()
        .nth(idx)
        .expect("index drawn below ball size");
    Ok(ChannelOutput { received, ops })
}

/// Samples one member of `edit_ball(x, t)` uniformly, deterministically for a
/// given seed, with an edit script producing it.
pub fn simulate_edit_channel(x: &BitSeq, t: EditBudget, seed: u64) -> Result<ChannelOutput> {
    let mut all: BTreeMap<BitSeq, Vec<EditOp>> = BTreeMap::new();
    for b in t.components() {
        if b.del > x.len() {
            continue;
        }
        check_budget(x, &b)?;
        for (z, ops) in ball_with_scripts(x, &b) {
            all.entry(z).or_insert(ops);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let idx = rng.gen_range(0..all.len());
    let (received, ops) = all.into_iter().nth(idx).expect("index drawn below ball size");
    Ok(ChannelOutput { received, ops })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitseq::bs;

    fn ball(x: &str, t1: usize, t2: usize, t3: usize) -> Ball {
        mixed_ball(&bs(x), &ChannelBudget::of(t1, t2, t3)).unwrap()
    }

    #[test]
    fn edit_channel_lands_in_edit_ball() {
        let x = bs("0110");
        let ball = edit_ball(&x, EditBudget(2)).unwrap();
        for seed in 0..500 {
            let out = simulate_edit_channel(&x, EditBudget(2), seed).unwrap();
            assert!(ball.contains(&out.received));
            assert!(out.ops.len() <= 2);
            assert_eq!(apply_ops(&x, &out.ops).unwrap(), out.received);
        }
        assert_eq!(
            simulate_edit_channel(&bs("1"), EditBudget(1), 3).unwrap(),
            simulate_edit_channel(&bs("1"), EditBudget(1), 3).unwrap()
        );
    }

    #[test]
    fn mixed_ball_examples() {
        assert_eq!(ball("000", 0, 1, 0).members(), &[bs("00")]);
        assert!(ball("001001", 0, 2, 0).contains(&bs("0000")));
        assert!(ball("000110", 0, 2, 0).contains(&bs("0000")));
        for n in 1..=8 {
            for x in BitSeq::all(n) {
                let b = mixed_ball(&x, &ChannelBudget::of(1, 1, 0)).unwrap();
                assert!(b.contains(&x));
                assert!(b.iter().all(|z| z.len() == n));
            }
        }
        assert!(mixed_ball(&bs("01"), &ChannelBudget::of(0, 3, 0)).is_err());
    }

    /// Brute-force single-edit neighborhoods built from strings.
    fn naive_single(x: &BitSeq, kind: char) -> Ball {
        let s = x.to_string();
        let mut v = Vec::new();
        match kind {
            'i' => {
                for i in 0..=s.len() {
                    for c in ["0", "1"] {
                        v.push(format!("{}{}{}", &s[..i], c, &s[i..]));
                    }
                }
            }
            'd' => {
                for i in 0..s.len() {
                    v.push(format!("{}{}", &s[..i], &s[i + 1..]));
                }
            }
            _ => unreachable!(),
        }
        Ball::from_unsorted(v.iter().map(|w| BitSeq::parse_line(w, 1).unwrap()).collect())
    }

    #[test]
    fn single_edit_counts() {
        for n in 0..=12 {
            for x in BitSeq::all(n) {
                let ins = ball(&x.to_string(), 1, 0, 0);
                assert_eq!(ins, naive_single(&x, 'i'));
                assert_eq!(ins.len(), n + 2);
                if n >= 1 {
                    let del = ball(&x.to_string(), 0, 1, 0);
                    assert_eq!(del, naive_single(&x, 'd'));
                    assert_eq!(del.len(), x.runs());
                }
            }
        }
    }

    #[test]
    fn substitution_ball_is_hamming_ball() {
        for n in 0..=8 {
            for x in BitSeq::all(n) {
                for t in 0..=3 {
                    let b = mixed_ball(&x, &ChannelBudget::of(0, 0, t)).unwrap();
                    let expect: Vec<BitSeq> =
                        BitSeq::all(n).filter(|y| x.hamming(y).unwrap() as usize <= t).collect();
                    assert_eq!(b.members(), &expect[..]);
                }
            }
        }
    }

    #[test]
    fn edit_ball_examples() {
        let x = bs("01101");
        assert_eq!(edit_ball(&x, EditBudget(0)).unwrap().members(), &[x]);
        let b2 = edit_ball(&x, EditBudget(2)).unwrap();
        let lens: std::collections::BTreeSet<usize> = b2.iter().map(|z| z.len()).collect();
        assert_eq!(lens.into_iter().collect::<Vec<_>>(), vec![3, 4, 5, 6, 7]);
        // Single edit around "0": itself, the flip, the empty word and the
        // three distinct supersequences 00, 01, 10.
        let b = edit_ball(&bs("0"), EditBudget(1)).unwrap();
        let mut naive = vec![bs("0"), bs("1"), bs("")];
        naive.extend(naive_single(&bs("0"), 'i').iter().copied());
        assert_eq!(b, Ball::from_unsorted(naive));
        assert_eq!(b.len(), 6);
        assert!(edit_ball(&bs("0"), EditBudget(2)).is_err());
    }

    #[test]
    fn intersect_examples() {
        let b = ChannelBudget::of(0, 2, 0);
        assert!(balls_intersect(&bs("001001"), &bs("001001"), &b).unwrap());
        assert!(balls_intersect(&bs("001001"), &bs("000110"), &b).unwrap());
        assert!(!balls_intersect(&bs("0000"), &bs("1111"), &ChannelBudget::of(0, 1, 0)).unwrap());
        assert!(balls_intersect(&bs("000"), &bs("0000"), &b).is_err());
    }

    #[test]
    fn del_sub_examples() {
        let x = bs("10111001");
        assert_eq!(apply_del_sub(&x, 5, 6).unwrap(), bs("1011101"));
        assert_eq!(apply_del_sub(&x, 3, 0).unwrap(), x.delete(3));
        assert_eq!(apply_del_sub(&x, 3, 3).unwrap(), x.delete(3));
        assert!(apply_del_sub(&x, 0, 1).is_err());
        assert!(apply_del_sub(&x, 9, 1).is_err());
        assert!(apply_del_sub(&x, 1, 9).is_err());
        for n in 1..=10 {
            for x in BitSeq::all(n) {
                let b = mixed_ball(&x, &ChannelBudget::of(0, 1, 1)).unwrap();
                for d in 1..=n {
                    for e in 0..=n {
                        assert!(b.contains(&apply_del_sub(&x, d, e).unwrap()));
                    }
                }
            }
        }
    }

    #[test]
    fn channel_examples() {
        let x = bs("1011001110");
        let out = simulate_channel(&x, &ChannelBudget::of(0, 0, 0), 7).unwrap();
        assert_eq!(out.received, x);
        assert!(out.ops.is_empty());
        let b = ChannelBudget::of(1, 1, 1);
        assert_eq!(
            simulate_channel(&x, &b, 42).unwrap(),
            simulate_channel(&x, &b, 42).unwrap()
        );
    }

    #[test]
    fn channel_output_in_ball_and_replays() {
        let x = bs("110100101");
        for b in [
            ChannelBudget::of(0, 2, 0),
            ChannelBudget::of(1, 1, 0),
            ChannelBudget::of(0, 1, 1),
            ChannelBudget::of(2, 0, 0),
            ChannelBudget::of(0, 0, 2),
        ] {
            let ball = mixed_ball(&x, &b).unwrap();
            for seed in 0..2_500u64 {
                let out = simulate_channel(&x, &b, seed).unwrap();
                assert!(ball.contains(&out.received));
                assert_eq!(apply_ops(&x, &out.ops).unwrap(), out.received);
            }
        }
    }

    #[test]
    fn budget_parsing() {
        assert_eq!("0,2,0".parse::<ChannelBudget>().unwrap(), ChannelBudget::of(0, 2, 0));
        assert!("0,2".parse::<ChannelBudget>().is_err());
        assert!("3,2,0".parse::<ChannelBudget>().is_err());
        assert_eq!(ChannelBudget::of(1, 2, 0).inverse(), ChannelBudget::of(2, 1, 0));
        assert_eq!(EditBudget(2).components().len(), 6);
    }
}
