//! Decoders: the explicit two-substitution syndrome decoder, search decoders
//! over inverse error balls, and the length-dispatched two-edit decoders.

use serde::Serialize;

use crate::balls::{mixed_ball_set, ChannelBudget, EditBudget};
use crate::bitseq::BitSeq;
use crate::codes::{CodeSpec, Construction};
use crate::error::{Error, Result};
use crate::syndromes::vt;

/// Result of decoding one received word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "codewords")]
pub enum DecodeOutcome {
    Unique(BitSeq),
    /// At most the declared list size, sorted.
    List(Vec<BitSeq>),
    NoCandidate,
    /// More candidates than the decoder's contract allows, sorted.
    Ambiguous(Vec<BitSeq>),
}

impl DecodeOutcome {
    pub fn kind(&self) -> &'static str {
        match self {
            DecodeOutcome::Unique(_) => "unique",
            DecodeOutcome::List(_) => "list",
            DecodeOutcome::NoCandidate => "no-candidate",
            DecodeOutcome::Ambiguous(_) => "ambiguous",
        }
    }

    pub fn candidates(&self) -> Vec<BitSeq> {
        match self {
            DecodeOutcome::Unique(x) => vec![*x],
            DecodeOutcome::List(v) | DecodeOutcome::Ambiguous(v) => v.clone(),
            DecodeOutcome::NoCandidate => Vec::new(),
        }
    }

    pub fn contains(&self, x: &BitSeq) -> bool {
        self.candidates().contains(x)
    }

    /// Unique-decoding outcome from an unsorted candidate list.
    pub fn unique_from(mut cands: Vec<BitSeq>) -> Self {
        cands.sort();
        cands.dedup();
        match cands.len() {
            0 => DecodeOutcome::NoCandidate,
            1 => DecodeOutcome::Unique(cands[0]),
            _ => DecodeOutcome::Ambiguous(cands),
        }
    }

    /// List outcome with list size `cap`.
    pub fn list_from(mut cands: Vec<BitSeq>, cap: usize) -> Self {
        cands.sort();
        cands.dedup();
        match cands.len() {
            0 => DecodeOutcome::NoCandidate,
            k if k <= cap => DecodeOutcome::List(cands),
            _ => DecodeOutcome::Ambiguous(cands),
        }
    }
}

/// Discrepancies between the target residues and the received word's
/// syndromes, lifted to centered representatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SubSyndromeDelta {
    pub d0: i128,
    pub d1: i128,
    /// `2 * lifted(delta_2) - lifted(delta_1)`, i.e. `sum s_i i^2`.
    pub d2: i128,
}

/// Outcome of the two-substitution decoder with the recovered positions
/// (`i <= j`, 0 meaning no error) when it succeeds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubDecoding {
    pub outcome: DecodeOutcome,
    pub delta: SubSyndromeDelta,
    pub positions: Option<(usize, usize)>,
}

fn lift(target: u64, actual: u128, modulus: u64) -> i128 {
    let m = modulus as i128;
    let mut d = (target as i128 - (actual % modulus as u128) as i128).rem_euclid(m);
    if d > m / 2 {
        d -= m;
    }
    d
}

fn isqrt_exact(v: i128) -> Option<i128> {
    if v < 0 {
        return None;
    }
    let r = (v as f64).sqrt() as i128;
    (r.saturating_sub(2)..=r + 2).find(|&s| s >= 0 && s * s == v)
}

fn half(v: i128) -> Option<i128> {
    (v % 2 == 0).then_some(v / 2)
}

fn c2s_moduli(n: usize) -> [u64; 3] {
    let n = n as u64;
    [5, 4 * n + 1, 4 * n * n + 1]
}

/// Flip positions implied by the deltas, before range checks; empty for
/// "no error".
fn sub_positions(d: &SubSyndromeDelta) -> Option<Vec<i128>> {
    let SubSyndromeDelta { d0, d1, d2 } = *d;
    match d0 {
        2 | -2 => {
            // i + j = s d1, i^2 + j^2 = s d2 with s = sign(d0).
            let s = d0.signum();
            let root = isqrt_exact(2 * s * d2 - d1 * d1)?;
            if root == 0 {
                return None;
            }
            Some(vec![half(s * d1 - root)?, half(s * d1 + root)?])
        }
        1 | -1 => Some(vec![d0 * d1]),
        0 => {
            if d1 == 0 {
                return (d2 == 0).then(Vec::new);
            }
            // One 0->1 and one 1->0 error at p, q: p - q = d1, p + q = d2 / d1.
            if d2 % d1 != 0 {
                return None;
            }
            let sum = d2 / d1;
            let (a, b) = (half(sum - d1)?, half(sum + d1)?);
            Some(if a < b { vec![a, b] } else { vec![b, a] })
        }
        _ => None,
    }
}

/// Explicit syndrome decoder for the class `VT_k(x) = b_k (mod 4n^k + 1)`.
pub fn decode_two_substitutions_detailed(z: &BitSeq, n: usize, b: [u64; 3]) -> Result<SubDecoding> {
    if z.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: z.len(),
        });
    }
    let m = c2s_moduli(n);
    for k in 0..3 {
        if b[k] >= m[k] {
            return Err(Error::OutOfRange {
                what: "residue",
                value: b[k] as i128,
                range: format!("[0, {}) for b{k}", m[k]),
            });
        }
    }
    let t: Vec<i128> = (0..3).map(|k| lift(b[k], vt(z, k as u32), m[k])).collect();
    let delta = SubSyndromeDelta {
        d0: t[0],
        d1: t[1],
        d2: 2 * t[2] - t[1],
    };
    let fail = SubDecoding {
        outcome: DecodeOutcome::NoCandidate,
        delta,
        positions: None,
    };
    let Some(pos) = sub_positions(&delta) else {
        return Ok(fail);
    };
    if pos.iter().any(|&p| p < 1 || p > n as i128) || (pos.len() == 2 && pos[0] == pos[1]) {
        return Ok(fail);
    }
    let x = pos.iter().fold(*z, |acc, &p| acc.flip(p as usize));
    let member = (0..3).all(|k| (vt(&x, k as u32) % m[k] as u128) as u64 == b[k]);
    if !member {
        return Ok(fail);
    }
    let positions = match pos.as_slice() {
        [] => (0, 0),
        [j] => (0, *j as usize),
        [i, j] => (*i as usize, *j as usize),
        _ => unreachable!(),
    };
    Ok(SubDecoding {
        outcome: DecodeOutcome::Unique(x),
        delta,
        positions: Some(positions),
    })
}

pub fn decode_two_substitutions(z: &BitSeq, n: usize, b: [u64; 3]) -> Result<DecodeOutcome> {
    decode_two_substitutions_detailed(z, n, b).map(|d| d.outcome)
}

fn check_received_len(z: &BitSeq, n: usize, b: &ChannelBudget) -> Result<()> {
    let expected = b.output_len(n).ok_or_else(|| Error::OutOfRange {
        what: "deletions",
        value: b.del as i128,
        range: format!("[0, {n}]"),
    })?;
    if z.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            found: z.len(),
        });
    }
    Ok(())
}

/// All `x` of length `n` with `member(x)` and `z` in `mixed_ball(x, b)`,
/// sorted. The candidates are the members of the inverse ball of `z`.
pub fn search_candidates(
    z: &BitSeq,
    n: usize,
    b: &ChannelBudget,
    member: &dyn Fn(&BitSeq) -> bool,
) -> Result<Vec<BitSeq>> {
    check_received_len(z, n, b)?;
    if n + b.del > crate::bitseq::MAX_LEN {
        return Err(Error::TooLong(n + b.del));
    }
    let mut v: Vec<BitSeq> = mixed_ball_set(z, &b.inverse())
        .into_iter()
        .filter(|x| member(x))
        .collect();
    v.sort();
    Ok(v)
}

pub fn decode_by_search(
    z: &BitSeq,
    n: usize,
    b: &ChannelBudget,
    member: &dyn Fn(&BitSeq) -> bool,
) -> Result<DecodeOutcome> {
    Ok(DecodeOutcome::unique_from(search_candidates(z, n, b, member)?))
}

/// Candidates within `t` edits: the union of the searches over every
/// budget component whose output length equals `|y|`.
pub fn edit_candidates(
    y: &BitSeq,
    n: usize,
    t: EditBudget,
    member: &dyn Fn(&BitSeq) -> bool,
) -> Result<Vec<BitSeq>> {
    check_edit_len(y, n, t.0)?;
    let mut out = Vec::new();
    for b in t.components() {
        if b.output_len(n) == Some(y.len()) {
            out.extend(search_candidates(y, n, &b, member)?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

pub fn decode_edit_by_search(
    y: &BitSeq,
    n: usize,
    t: EditBudget,
    member: &dyn Fn(&BitSeq) -> bool,
) -> Result<DecodeOutcome> {
    Ok(DecodeOutcome::unique_from(edit_candidates(y, n, t, member)?))
}

fn check_edit_len(y: &BitSeq, n: usize, t: usize) -> Result<()> {
    let (lo, hi) = (n.saturating_sub(t), n + t);
    if y.len() < lo || y.len() > hi {
        return Err(Error::OutOfRange {
            what: "received length",
            value: y.len() as i128,
            range: format!("[{lo}, {hi}]"),
        });
    }
    Ok(())
}

/// Residues of the `VT_k(x) mod 4n^k + 1` conditions of a class, if it has
/// all three.
pub fn substitution_residues(spec: &CodeSpec) -> Option<[u64; 3]> {
    let keys = match spec.construction() {
        Construction::C2s => ["b0", "b1", "b2"],
        Construction::C2e | Construction::C2eList => ["a0", "a1", "a2"],
        _ => return None,
    };
    Some([
        spec.residue(keys[0])?,
        spec.residue(keys[1])?,
        spec.residue(keys[2])?,
    ])
}

/// Two-substitution candidates for a class: the explicit decoder when the
/// class carries the needed residues, the (0,0,2) search otherwise.
fn substitution_candidates(y: &BitSeq, spec: &CodeSpec) -> Result<Vec<BitSeq>> {
    let member = |x: &BitSeq| spec.member(x);
    match substitution_residues(spec) {
        Some(b) => Ok(decode_two_substitutions(y, spec.n(), b)?
            .candidates()
            .into_iter()
            .filter(member)
            .collect()),
        None => search_candidates(y, spec.n(), &ChannelBudget::of(0, 0, 2), &member),
    }
}

fn length_budget(y: &BitSeq, n: usize) -> Result<Option<ChannelBudget>> {
    check_edit_len(y, n, 2)?;
    Ok(match y.len() as isize - n as isize {
        -2 => Some(ChannelBudget::of(0, 2, 0)),
        -1 => Some(ChannelBudget::of(0, 1, 1)),
        1 => Some(ChannelBudget::of(1, 0, 1)),
        2 => Some(ChannelBudget::of(2, 0, 0)),
        _ => None,
    })
}

/// Unique decoding of up to two edits, dispatched on `|y|` only. At
/// `|y| = n` the (1,1,0) search runs first and the two-substitution decoder
/// only when it finds nothing.
pub fn decode_two_edit(y: &BitSeq, spec: &CodeSpec) -> Result<DecodeOutcome> {
    let n = spec.n();
    let member = |x: &BitSeq| spec.member(x);
    let cands = match length_budget(y, n)? {
        Some(b) => search_candidates(y, n, &b, &member)?,
        None => {
            let indel = search_candidates(y, n, &ChannelBudget::of(1, 1, 0), &member)?;
            if indel.is_empty() {
                substitution_candidates(y, spec)?
            } else {
                indel
            }
        }
    };
    Ok(DecodeOutcome::unique_from(cands))
}

/// List decoding of up to two edits with list size two. At `|y| = n` the
/// (1,1,0) search and the two-substitution decoder are both run and their
/// results merged.
pub fn list_decode_two_edit(y: &BitSeq, spec: &CodeSpec) -> Result<DecodeOutcome> {
    let n = spec.n();
    let member = |x: &BitSeq| spec.member(x);
    let cands = match length_budget(y, n)? {
        Some(b) => search_candidates(y, n, &b, &member)?,
        None => {
            let mut v = search_candidates(y, n, &ChannelBudget::of(1, 1, 0), &member)?;
            v.extend(substitution_candidates(y, spec)?);
            v
        }
    };
    Ok(DecodeOutcome::list_from(cands, 2))
}

/// List decoding under a fixed channel budget.
pub fn list_decode_by_search(
    z: &BitSeq,
    n: usize,
    b: &ChannelBudget,
    cap: usize,
    member: &dyn Fn(&BitSeq) -> bool,
) -> Result<DecodeOutcome> {
    Ok(DecodeOutcome::list_from(search_candidates(z, n, b, member)?, cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balls::mixed_ball;
    use crate::bitseq::bs;
    use crate::codes::{c2s_member, CodeSpec};

    fn c2s_residues(x: &BitSeq) -> [u64; 3] {
        let m = c2s_moduli(x.len());
        [0, 1, 2].map(|k| (vt(x, k as u32) % m[k] as u128) as u64)
    }

    /// Hamming-neighbourhood oracle: class members within distance two.
    fn hamming_oracle(z: &BitSeq, b: [u64; 3]) -> Vec<BitSeq> {
        BitSeq::all(z.len())
            .filter(|x| x.hamming(z).unwrap() <= 2 && c2s_member(x, b).unwrap())
            .collect()
    }

    #[test]
    fn isqrt_and_lift() {
        assert_eq!(isqrt_exact(0), Some(0));
        assert_eq!(isqrt_exact(49), Some(7));
        assert_eq!(isqrt_exact(50), None);
        assert_eq!(isqrt_exact(-1), None);
        assert_eq!(lift(0, 3, 5), 2);
        assert_eq!(lift(0, 2, 5), -2);
        assert_eq!(lift(4, 0, 5), -1);
    }

    #[test]
    fn codeword_decodes_to_itself() {
        let x = bs("0110100110");
        let d = decode_two_substitutions_detailed(&x, 10, c2s_residues(&x)).unwrap();
        assert_eq!(d.outcome, DecodeOutcome::Unique(x));
        assert_eq!(d.positions, Some((0, 0)));
        assert_eq!((d.delta.d0, d.delta.d1), (0, 0));
    }

    #[test]
    fn flips_at_three_and_seven() {
        for x in BitSeq::all(10).step_by(37) {
            let b = c2s_residues(&x);
            let z = x.flip(3).flip(7);
            let d = decode_two_substitutions_detailed(&z, 10, b).unwrap();
            assert_eq!(d.outcome, DecodeOutcome::Unique(x));
            assert_eq!(d.positions, Some((3, 7)));
            assert_eq!(hamming_oracle(&z, b), vec![x]);
            let one = x.flip(5);
            let d = decode_two_substitutions_detailed(&one, 10, b).unwrap();
            assert_eq!(d.outcome, DecodeOutcome::Unique(x));
            assert_eq!(d.positions, Some((0, 5)));
            assert_eq!(d.delta.d0.abs(), 1);
        }
    }

    #[test]
    fn out_of_model_is_no_candidate() {
        let x = BitSeq::zeros(9).unwrap();
        let b = c2s_residues(&x);
        let z = x.flip(1).flip(4).flip(8);
        let got = decode_two_substitutions(&z, 9, b).unwrap();
        assert_eq!(got.candidates(), hamming_oracle(&z, b));
        assert!(decode_two_substitutions(&bs("101"), 4, b).is_err());
    }

    #[test]
    fn search_examples() {
        let x = bs("0110101");
        let member = |y: &BitSeq| *y == x;
        let got = decode_by_search(&x, 7, &ChannelBudget::of(1, 1, 0), &member).unwrap();
        assert_eq!(got, DecodeOutcome::Unique(x));
        assert!(decode_by_search(&x, 7, &ChannelBudget::of(0, 1, 0), &member).is_err());
        for z in mixed_ball(&x, &ChannelBudget::of(0, 2, 0)).unwrap().iter() {
            assert!(decode_by_search(z, 7, &ChannelBudget::of(0, 2, 0), &member).unwrap().contains(&x));
        }
    }

    #[test]
    fn two_edit_length_precondition() {
        let spec: CodeSpec = "code=C2E n=6 ell=3 eps=1/3 P=2 a0=0 a1=0 a2=0 b0=0 b1=0 b2=0 d1=0 d2=0 d3=0 d4=0 d5=0 d1p=0 d2p=0 d3p=0 d4p=0 d5p=0 c1=0 c2=0 c3=0 c1p=0 c2p=0 c3p=0"
            .parse()
            .unwrap();
        assert!(decode_two_edit(&bs("101"), &spec).is_err());
        assert!(list_decode_two_edit(&bs("101010101"), &spec).is_err());
        assert!(decode_two_edit(&bs("1010"), &spec).is_ok());
    }

    #[test]
    fn zero_edit_recovered() {
        let pairs = crate::codes::parse_kv("code=C2E_L n=8 ell=3 eps=1/3 P=2").unwrap();
        let x = BitSeq::all(8)
            .find_map(|x| CodeSpec::from_pairs(&pairs, Some(&x)).ok().map(|s| (x, s)));
        let (x, spec) = x.unwrap();
        assert!(decode_two_edit(&x, &spec).unwrap().contains(&x));
        assert!(list_decode_two_edit(&x, &spec).unwrap().contains(&x));
    }
}
