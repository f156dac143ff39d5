//! Exhaustive certification of correcting properties.
//!
//! Unique and list decodability are checked with a ball-cover index: every
//! codeword's ball is generated once and each ball member records the
//! smallest codeword indices covering it. A set is `L`-list decodable iff no
//! member is covered `L + 1` times; the reported witness is the
//! lexicographically first violating tuple of codewords (sorted order), with
//! the smallest common word. Unique decodability is the case `L = 1`.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use crate::balls::{mixed_ball, mixed_ball_set, Ball, ChannelBudget, EditBudget};
use crate::bitseq::BitSeq;
use crate::codes::{classes, CodeLayout};
use crate::error::{Error, Result};

/// Pairwise work above which reports carry a warning.
pub const WORK_WARN_ABOVE: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Certified,
    Refuted,
}

/// Counterexample to a certified property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// The offending codewords, sorted.
    pub words: Vec<BitSeq>,
    /// A word in all of their balls.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub common: Option<BitSeq>,
    /// For P-bounded checks: the window `[s, e]` holding the differing parts.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub property: String,
    pub params: BTreeMap<String, String>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub counts: BTreeMap<String, u64>,
    /// The exhaustive domain a certified verdict covers.
    pub domain: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub elapsed_ms: u64,
}

impl VerifyReport {
    pub fn certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }
}

struct Builder {
    property: String,
    params: BTreeMap<String, String>,
    counts: BTreeMap<String, u64>,
    notes: Vec<String>,
    start: Instant,
}

impl Builder {
    fn new(property: &str) -> Self {
        Builder {
            property: property.to_string(),
            params: BTreeMap::new(),
            counts: BTreeMap::new(),
            notes: Vec::new(),
            start: Instant::now(),
        }
    }

    fn param(mut self, k: &str, v: impl ToString) -> Self {
        self.params.insert(k.to_string(), v.to_string());
        self
    }

    fn count(&mut self, k: &str, v: u64) {
        *self.counts.entry(k.to_string()).or_default() += v;
    }

    fn finish(self, witness: Option<Witness>, domain: String) -> VerifyReport {
        VerifyReport {
            property: self.property,
            params: self.params,
            verdict: if witness.is_some() {
                Verdict::Refuted
            } else {
                Verdict::Certified
            },
            witness,
            counts: self.counts,
            domain,
            notes: self.notes,
            elapsed_ms: self.start.elapsed().as_millis() as u64,
        }
    }
}

/// Sorted, deduplicated codewords of a common length.
fn normalize(codewords: &[BitSeq]) -> Result<Vec<BitSeq>> {
    if let Some(first) = codewords.first() {
        if let Some(bad) = codewords.iter().find(|x| x.len() != first.len()) {
            return Err(Error::LengthMismatch {
                expected: first.len(),
                found: bad.len(),
            });
        }
    }
    let mut v = codewords.to_vec();
    v.sort();
    v.dedup();
    Ok(v)
}

fn pairs(k: usize) -> u64 {
    (k as u64) * (k as u64).saturating_sub(1) / 2
}

fn domain_of(words: &[BitSeq]) -> String {
    match words.first() {
        Some(x) => format!("all {} codewords of length {}", words.len(), x.len()),
        None => "empty code".to_string(),
    }
}

/// Ball-cover check: the first `(cap + 1)`-tuple of codewords (in
/// lexicographic index order) whose balls share a word, with that word.
fn cover_violation<F>(words: &[BitSeq], cap: usize, ball: F) -> (Option<(Vec<usize>, BitSeq)>, u64)
where
    F: Fn(&BitSeq) -> FxHashSet<BitSeq> + Sync,
{
    let need = cap + 1;
    let balls: Vec<FxHashSet<BitSeq>> = words.par_iter().map(&ball).collect();
    let members: u64 = balls.iter().map(|b| b.len() as u64).sum();
    if words.len() < need {
        return (None, members);
    }
    let mut cover: FxHashMap<BitSeq, Vec<usize>> = FxHashMap::default();
    for (i, b) in balls.iter().enumerate() {
        for z in b {
            let e = cover.entry(*z).or_default();
            if e.len() < need {
                e.push(i);
            }
        }
    }
    let best = cover
        .into_iter()
        .filter(|(_, v)| v.len() == need)
        .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
        .map(|(z, v)| (v, z));
    (best, members)
}

fn cover_report<F>(
    mut builder: Builder,
    codewords: &[BitSeq],
    cap: usize,
    ball: F,
) -> Result<VerifyReport>
where
    F: Fn(&BitSeq) -> FxHashSet<BitSeq> + Sync,
{
    let words = normalize(codewords)?;
    let (violation, members) = cover_violation(&words, cap, ball);
    builder.count("codewords", words.len() as u64);
    builder.count("balls", words.len() as u64);
    builder.count("ball_members", members);
    builder.count("pairs", pairs(words.len()));
    let witness = violation.map(|(idx, z)| Witness {
        words: idx.into_iter().map(|i| words[i]).collect(),
        common: Some(z),
        window: None,
        detail: None,
    });
    let domain = domain_of(&words);
    Ok(builder.finish(witness, domain))
}

fn check_budget_fits(codewords: &[BitSeq], del: usize) -> Result<()> {
    if let Some(x) = codewords.first() {
        if del > x.len() {
            return Err(Error::OutOfRange {
                what: "deletions",
                value: del as i128,
                range: format!("[0, {}]", x.len()),
            });
        }
    }
    Ok(())
}

/// Certifies that the `b`-balls of all codewords are pairwise disjoint.
pub fn verify_correcting(codewords: &[BitSeq], b: &ChannelBudget) -> Result<VerifyReport> {
    check_budget_fits(codewords, b.del)?;
    let builder = Builder::new("correcting").param("channel", b);
    cover_report(builder, codewords, 1, |x| mixed_ball_set(x, b))
}

fn edit_set(x: &BitSeq, t: EditBudget) -> FxHashSet<BitSeq> {
    let mut all = FxHashSet::default();
    for b in t.components() {
        all.extend(mixed_ball_set(x, &b));
    }
    all
}

/// Certifies that the `t`-edit balls of all codewords are pairwise disjoint.
pub fn verify_edit_correcting(codewords: &[BitSeq], t: EditBudget) -> Result<VerifyReport> {
    check_budget_fits(codewords, t.0)?;
    let builder = Builder::new("edit-correcting").param("edits", t.0);
    cover_report(builder, codewords, 1, |x| edit_set(x, t))
}

/// Certifies that no word lies in the `b`-balls of `cap + 1` codewords.
pub fn verify_list(codewords: &[BitSeq], b: &ChannelBudget, cap: usize) -> Result<VerifyReport> {
    if cap == 0 {
        return Err(Error::InvalidParameter("list size must be at least 1".into()));
    }
    check_budget_fits(codewords, b.del)?;
    let builder = Builder::new("list-decodable")
        .param("channel", b)
        .param("list", cap);
    cover_report(builder, codewords, cap, |x| mixed_ball_set(x, b))
}

/// Like [`verify_list`] for the `t`-edit ball.
pub fn verify_edit_list(codewords: &[BitSeq], t: EditBudget, cap: usize) -> Result<VerifyReport> {
    if cap == 0 {
        return Err(Error::InvalidParameter("list size must be at least 1".into()));
    }
    check_budget_fits(codewords, t.0)?;
    let builder = Builder::new("edit-list-decodable")
        .param("edits", t.0)
        .param("list", cap);
    cover_report(builder, codewords, cap, |x| edit_set(x, t))
}

/// First and last differing positions of two distinct equal-length words.
fn differing_span(x: &BitSeq, y: &BitSeq) -> Option<(usize, usize)> {
    let n = x.len();
    let diff = x.word() ^ y.word();
    if diff == 0 {
        return None;
    }
    let f = n - (127 - diff.leading_zeros() as usize);
    let g = n - diff.trailing_zeros() as usize;
    Some((f, g))
}

/// Checks one codeword pair: every window `[s, e]` of length at most `p`
/// covering the differing span must give disjoint sub-balls.
fn p_bounded_pair(
    x: &BitSeq,
    y: &BitSeq,
    p: usize,
    b: &ChannelBudget,
    windows: &mut u64,
) -> Option<Witness> {
    let n = x.len();
    let (f, g) = differing_span(x, y)?;
    if g - f + 1 > p {
        return None;
    }
    for s in (1..=f).rev() {
        for e in g..=n {
            let len = e - s + 1;
            if len > p {
                break;
            }
            if b.del > len {
                continue;
            }
            *windows += 1;
            let bx = Ball::from_unsorted(mixed_ball_set(&x.slice(s, e), b).into_iter().collect());
            let by = Ball::from_unsorted(mixed_ball_set(&y.slice(s, e), b).into_iter().collect());
            if let Some(z) = bx.first_common(&by) {
                return Some(Witness {
                    words: vec![*x, *y],
                    common: Some(z),
                    window: Some((s, e)),
                    detail: Some(format!(
                        "sub-balls of {} and {} intersect",
                        x.slice(s, e),
                        y.slice(s, e)
                    )),
                });
            }
        }
    }
    None
}

/// Certifies the `P`-bounded property: for codewords `u x~ v`, `u y~ v` with
/// `|x~| = |y~| <= P`, the `b`-balls of `x~` and `y~` are disjoint. Pairs
/// whose differing span exceeds `P` are unconstrained.
pub fn verify_p_bounded(codewords: &[BitSeq], p: usize, b: &ChannelBudget) -> Result<VerifyReport> {
    let words = normalize(codewords)?;
    if let Some(x) = words.first() {
        if p == 0 || p > x.len() {
            return Err(Error::OutOfRange {
                what: "block length P",
                value: p as i128,
                range: format!("[1, {}]", x.len()),
            });
        }
    }
    let mut builder = Builder::new("p-bounded-correcting")
        .param("channel", b)
        .param("P", p);
    let k = words.len();
    if pairs(k) > WORK_WARN_ABOVE {
        builder.notes.push(format!(
            "warning: {} codeword pairs exceed the 2^20 work estimate",
            pairs(k)
        ));
    }
    let results: Vec<(Option<Witness>, u64, u64)> = (0..k)
        .into_par_iter()
        .map(|i| {
            let mut windows = 0u64;
            let mut constrained = 0u64;
            for j in i + 1..k {
                let (f, g) = differing_span(&words[i], &words[j]).expect("distinct");
                if g - f < p {
                    constrained += 1;
                }
                if let Some(w) = p_bounded_pair(&words[i], &words[j], p, b, &mut windows) {
                    return (Some(w), windows, constrained);
                }
            }
            (None, windows, constrained)
        })
        .collect();
    let mut witness = None;
    for (w, windows, constrained) in results {
        builder.count("windows", windows);
        builder.count("constrained_pairs", constrained);
        if witness.is_none() {
            witness = w;
        }
    }
    builder.count("codewords", k as u64);
    builder.count("pairs", pairs(k));
    let domain = domain_of(&words);
    Ok(builder.finish(witness, domain))
}

/// Checks the two-edit equivalence: a code corrects two edits iff it
/// corrects two deletions, two substitutions, and one deletion with one
/// substitution. Certified iff both sides agree; a disagreement refutes the
/// implementation. The component verdicts are listed in `params`.
pub fn verify_equivalence(codewords: &[BitSeq]) -> Result<VerifyReport> {
    let words = normalize(codewords)?;
    let mut builder = Builder::new("two-edit-equivalence");
    let components = [
        ("two-deletion", ChannelBudget::of(0, 2, 0)),
        ("two-substitution", ChannelBudget::of(0, 0, 2)),
        ("deletion-substitution", ChannelBudget::of(0, 1, 1)),
    ];
    let mut rhs = true;
    let mut rhs_witness = None;
    let witness_of = |v: Option<(Vec<usize>, BitSeq)>| {
        v.map(|(idx, z)| Witness {
            words: idx.into_iter().map(|i| words[i]).collect(),
            common: Some(z),
            window: None,
            detail: None,
        })
    };
    for (name, b) in components {
        // Words shorter than the deletion count have empty balls.
        let (v, _) = cover_violation(&words, 1, |x| mixed_ball_set(x, &b));
        let ok = v.is_none();
        if !ok && rhs_witness.is_none() {
            rhs_witness = witness_of(v);
        }
        rhs &= ok;
        builder = builder.param(name, if ok { "certified" } else { "refuted" });
    }
    let (v, _) = cover_violation(&words, 1, |x| edit_set(x, EditBudget(2)));
    let full_ok = v.is_none();
    let full_witness = witness_of(v);
    builder = builder.param("two-edit", if full_ok { "certified" } else { "refuted" });
    builder.count("codewords", words.len() as u64);
    let witness = if full_ok == rhs {
        None
    } else {
        let mut w = full_witness.or(rhs_witness).unwrap_or(Witness {
            words: Vec::new(),
            common: None,
            window: None,
            detail: None,
        });
        w.detail = Some(format!(
            "implementation disagreement: two-edit {} but components {}",
            if full_ok { "certified" } else { "refuted" },
            if rhs { "certified" } else { "refuted" }
        ));
        Some(w)
    };
    let domain = domain_of(&words);
    Ok(builder.finish(witness, domain))
}

/// Deliberate defects used to check that the lemma suite can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Insertion balls never append a symbol at the end.
    SkipLastInsertion,
    /// Substitution balls never flip the first symbol.
    SkipFirstSubstitution,
}

fn suite_ball(x: &BitSeq, b: &ChannelBudget, mutation: Option<Mutation>) -> Ball {
    let Some(m) = mutation else {
        return mixed_ball(x, b).expect("budget fits");
    };
    let mut cur: FxHashSet<BitSeq> = mixed_ball_set(x, &ChannelBudget::of(0, b.del, 0));
    if b.sub > 0 {
        let mut next = FxHashSet::default();
        for s in &cur {
            let lo = if m == Mutation::SkipFirstSubstitution { 2 } else { 1 };
            next.insert(*s);
            for i in lo..=s.len() {
                next.insert(s.flip(i));
                if b.sub > 1 {
                    for j in i + 1..=s.len() {
                        next.insert(s.flip(i).flip(j));
                    }
                }
            }
        }
        cur = next;
    }
    for _ in 0..b.ins {
        let mut next = FxHashSet::default();
        for s in &cur {
            let hi = if m == Mutation::SkipLastInsertion { s.len() } else { s.len() + 1 };
            for i in 1..=hi {
                next.insert(s.insert(i, 0));
                next.insert(s.insert(i, 1));
            }
        }
        cur = next;
    }
    Ball::from_unsorted(cur.into_iter().collect())
}

struct WordBalls {
    b020: Ball,
    b200: Ball,
    b110: Ball,
    b011: Ball,
    b101: Ball,
    b002: Ball,
}

fn pair_failure(x: &BitSeq, y: &BitSeq, bx: &WordBalls, by: &WordBalls) -> Option<String> {
    let d020 = !bx.b020.intersects(&by.b020);
    let d200 = !bx.b200.intersects(&by.b200);
    let d110 = !bx.b110.intersects(&by.b110);
    if d020 != (d200 && d110) {
        return Some(format!(
            "indel equivalence fails: (0,2,0) disjoint={d020}, (2,0,0) disjoint={d200}, (1,1,0) disjoint={d110}"
        ));
    }
    let d011 = !bx.b011.intersects(&by.b011);
    let d101 = !bx.b101.intersects(&by.b101);
    if d011 != d101 {
        return Some(format!(
            "deletion/insertion-substitution equivalence fails: (0,1,1) disjoint={d011}, (1,0,1) disjoint={d101}"
        ));
    }
    for (u, v, bu, bv) in [(x, y, bx, by), (y, x, by, bx)] {
        if bu.b002.intersects(&bv.b110) && d011 {
            return Some(format!(
                "mixed-type implication fails: B002({u}) meets B110({v}) but (0,1,1) balls are disjoint"
            ));
        }
    }
    None
}

fn psi_weight(x: &BitSeq) -> i64 {
    x.differential().expect("length fits").weight() as i64
}

fn observation_failure(x: &BitSeq) -> Option<String> {
    let w = psi_weight(x);
    let n = x.len();
    for i in 1..=n {
        let d = psi_weight(&x.delete(i)) - w;
        if d != 0 && d != -2 {
            return Some(format!("deleting position {i} of {x} changes weight(psi) by {d}"));
        }
        if i < n {
            let d = psi_weight(&x.delete(i).delete(i)) - w;
            if d != 0 && d != -2 {
                return Some(format!(
                    "deleting positions {i},{} of {x} changes weight(psi) by {d}",
                    i + 1
                ));
            }
        }
        let d = psi_weight(&x.flip(i)) - w;
        if ![-2, 0, 2].contains(&d) {
            return Some(format!("flipping position {i} of {x} changes weight(psi) by {d}"));
        }
    }
    None
}

/// Exhaustive check, for every length up to `n_max`, of the pairwise ball
/// equivalences and implications behind the two-edit equivalence, and of
/// how single deletions and substitutions change the weight of the
/// differential sequence.
pub fn verify_lemma_suite(n_max: usize) -> Result<VerifyReport> {
    verify_lemma_suite_with(n_max, None)
}

pub fn verify_lemma_suite_with(n_max: usize, mutation: Option<Mutation>) -> Result<VerifyReport> {
    const LIMIT: usize = 10;
    if n_max > LIMIT {
        return Err(Error::LimitExceeded { n: n_max, limit: LIMIT });
    }
    let mut builder = Builder::new("lemma-suite").param("n_max", n_max);
    if let Some(m) = mutation {
        builder = builder.param("mutation", format!("{m:?}"));
    }
    let mut witness = None;
    'outer: for n in 0..=n_max {
        let words: Vec<BitSeq> = BitSeq::all(n).collect();
        for x in &words {
            if let Some(detail) = observation_failure(x) {
                witness = Some(Witness {
                    words: vec![*x],
                    common: None,
                    window: None,
                    detail: Some(detail),
                });
                break 'outer;
            }
        }
        builder.count("words", words.len() as u64);
        if n < 2 {
            continue;
        }
        let balls: Vec<WordBalls> = words
            .par_iter()
            .map(|x| WordBalls {
                b020: suite_ball(x, &ChannelBudget::of(0, 2, 0), mutation),
                b200: suite_ball(x, &ChannelBudget::of(2, 0, 0), mutation),
                b110: suite_ball(x, &ChannelBudget::of(1, 1, 0), mutation),
                b011: suite_ball(x, &ChannelBudget::of(0, 1, 1), mutation),
                b101: suite_ball(x, &ChannelBudget::of(1, 0, 1), mutation),
                b002: suite_ball(x, &ChannelBudget::of(0, 0, 2), mutation),
            })
            .collect();
        builder.count("balls", 6 * words.len() as u64);
        builder.count("pairs", pairs(words.len()));
        let k = words.len();
        let found = (0..k).into_par_iter().find_map_first(|i| {
            (i + 1..k).find_map(|j| {
                pair_failure(&words[i], &words[j], &balls[i], &balls[j]).map(|d| (i, j, d))
            })
        });
        if let Some((i, j, detail)) = found {
            witness = Some(Witness {
                words: vec![words[i], words[j]],
                common: None,
                window: None,
                detail: Some(format!("n = {n}: {detail}")),
            });
            break;
        }
    }
    let domain = format!("all words and word pairs of every length n <= {n_max}");
    Ok(builder.finish(witness, domain))
}

/// Outcome of verifying every class of a layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub property: String,
    pub classes: u64,
    pub certified: u64,
    pub codewords: u64,
    /// First refuted class in residue order, with its report.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_refuted: Option<(Vec<u64>, VerifyReport)>,
    pub elapsed_ms: u64,
}

impl SweepReport {
    pub fn all_certified(&self) -> bool {
        self.first_refuted.is_none()
    }
}

/// Runs `check` on every non-empty class of `layout`, in parallel.
pub fn sweep_classes<F>(layout: &CodeLayout, limit: usize, property: &str, check: F) -> Result<SweepReport>
where
    F: Fn(&[BitSeq]) -> Result<VerifyReport> + Sync,
{
    let start = Instant::now();
    let cls = classes(layout, limit)?;
    let reports: Vec<VerifyReport> = cls
        .par_iter()
        .map(|(_, m)| check(m))
        .collect::<Result<Vec<_>>>()?;
    let certified = reports.iter().filter(|r| r.certified()).count() as u64;
    let first_refuted = cls
        .iter()
        .zip(reports)
        .find(|(_, r)| !r.certified())
        .map(|((sig, _), r)| (sig.clone(), r));
    Ok(SweepReport {
        property: property.to_string(),
        classes: cls.len() as u64,
        certified,
        codewords: cls.iter().map(|(_, m)| m.len() as u64).sum(),
        first_refuted,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}
