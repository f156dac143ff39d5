//! Code constructions as membership predicates.
//!
//! Every construction compiles to a [`CodeLayout`]: an eligibility filter
//! (balance constraints, excluded constant words) plus an ordered list of
//! congruence [`Check`]s. A [`CodeSpec`] pairs a layout with one residue per
//! check; a word is a member iff it is eligible and its residue vector (its
//! *signature*) equals the spec's residues. Residue vectors therefore
//! partition the eligible words into classes.

mod checks;
mod stats;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

pub use checks::{pair_starts, paired_sum, Boundary, Check, PairInner, Pairing, Quantity};
pub use stats::{
    classes, enumerate_code, enumerate_code_with_limit, partition_stats, ClassStats,
    PartitionStats, DEFAULT_ENUMERATE_LIMIT, ENUMERATE_WARN_ABOVE,
};

use crate::balance::{is_balanced_pair, BalanceParams};
use crate::bitseq::{BitSeq, MAX_LEN};
use crate::error::{Error, Result};
use crate::syndromes::Transform;

/// The available constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Construction {
    /// Single-edit code: `VT1(x) = a (mod m)`, `m >= 2n`.
    #[serde(rename = "LEV")]
    Lev,
    /// P-bounded two-deletion code on 01/10 indicators of block pairs.
    #[serde(rename = "C2D_P")]
    C2dBounded,
    /// P-bounded single-deletion single-substitution code on block pairs.
    #[serde(rename = "CDS_P")]
    CdsBounded,
    /// Two-substitution code: `VTk(x) = b_k (mod 4n^k + 1)`, `k = 0, 1, 2`.
    #[serde(rename = "C2S")]
    C2s,
    #[serde(rename = "C2D")]
    C2d,
    #[serde(rename = "CDS")]
    Cds,
    /// Single-deletion single-substitution list code (list size two).
    #[serde(rename = "CDS_L")]
    CdsList,
    #[serde(rename = "C2E")]
    C2e,
    /// Two-edit list code (list size two).
    #[serde(rename = "C2E_L")]
    C2eList,
}

impl Construction {
    pub const ALL: [Construction; 9] = [
        Construction::Lev,
        Construction::C2dBounded,
        Construction::CdsBounded,
        Construction::C2s,
        Construction::C2d,
        Construction::Cds,
        Construction::CdsList,
        Construction::C2e,
        Construction::C2eList,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Construction::Lev => "LEV",
            Construction::C2dBounded => "C2D_P",
            Construction::CdsBounded => "CDS_P",
            Construction::C2s => "C2S",
            Construction::C2d => "C2D",
            Construction::Cds => "CDS",
            Construction::CdsList => "CDS_L",
            Construction::C2e => "C2E",
            Construction::C2eList => "C2E_L",
        }
    }

    /// Constructions carrying balance constraints and block length `P`.
    pub fn is_composite(&self) -> bool {
        matches!(
            self,
            Construction::C2d
                | Construction::Cds
                | Construction::C2e
                | Construction::C2eList
        )
    }

    fn has_paired_checks(&self) -> bool {
        self.is_composite() || matches!(self, Construction::C2dBounded | Construction::CdsBounded)
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Construction::ALL
            .iter()
            .find(|c| c.tag().eq_ignore_ascii_case(s))
            .copied()
            .ok_or_else(|| Error::InvalidParameter(format!("unknown construction {s:?}")))
    }
}

/// Whether a composite construction runs with the asymptotic parameters
/// (`ell = ceil(1296 log2 n)`, `eps = 1/18`, `P = 6(ell + 3)`) or with
/// arbitrary desk-scale parameters. Only paper mode carries a correctness
/// guarantee, and only for large `n`; relaxed classes must be verified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Paper,
    Relaxed,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Mode::Paper),
            "relaxed" => Ok(Mode::Relaxed),
            other => Err(Error::InvalidParameter(format!("unknown mode {other:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Paper => "paper",
            Mode::Relaxed => "relaxed",
        })
    }
}

/// Balance slack of the asymptotic parameter set.
pub fn paper_eps() -> Ratio<i64> {
    Ratio::new(1, 18)
}

/// `ceil(1296 log2 n)`, at least 1.
pub fn paper_ell(n: usize) -> usize {
    if n <= 1 {
        return 1;
    }
    ((1296.0 * (n as f64).log2()).ceil() as usize).max(1)
}

/// `6 (ell + 3)`.
pub fn paper_block(ell: usize) -> usize {
    6 * (ell + 3)
}

/// Optional parameters when building a layout.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LayoutOptions {
    pub m: Option<u64>,
    pub block: Option<usize>,
    pub ell: Option<usize>,
    pub eps: Option<Ratio<i64>>,
    pub mode: Option<Mode>,
    pub boundary: Boundary,
}

/// A construction compiled for a fixed length `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeLayout {
    construction: Construction,
    n: usize,
    m: Option<u64>,
    block: Option<usize>,
    balance: Option<BalanceParams>,
    mode: Option<Mode>,
    boundary: Boundary,
    exclude_constant: bool,
    checks: Vec<Check>,
    notes: Vec<String>,
}

fn pow(base: u64, k: u32) -> u64 {
    base.pow(k)
}

fn vt_check(key: &str, transform: Transform, order: u32, modulus: u64) -> Check {
    Check {
        key: key.to_string(),
        quantity: Quantity::Vt { transform, order },
        modulus,
    }
}

fn paired_check(
    key: &str,
    pairing: Pairing,
    inner: PairInner,
    order: u32,
    block: usize,
    boundary: Boundary,
    modulus: u64,
) -> Check {
    Check {
        key: key.to_string(),
        quantity: Quantity::Paired {
            pairing,
            inner,
            order,
            block,
            boundary,
        },
        modulus,
    }
}

/// Residue keys `d1..d5` (odd pairing) and `d1p..d5p` (even pairing).
fn bounded_2d_checks(p: usize, boundary: Boundary) -> Vec<Check> {
    let p64 = p as u64;
    let spec: [(PairInner, u32, u64); 5] = [
        (PairInner::Indicator(0, 1), 1, 4 * p64),
        (PairInner::Indicator(0, 1), 2, 4 * p64 * p64),
        (PairInner::Indicator(0, 1), 3, 8 * p64 * p64 * p64),
        (PairInner::Indicator(1, 0), 0, 3),
        (PairInner::Indicator(1, 0), 2, 4 * p64),
    ];
    let mut out = Vec::with_capacity(10);
    for (pairing, suffix) in [(Pairing::Odd, ""), (Pairing::Even, "p")] {
        for (j, &(inner, order, modulus)) in spec.iter().enumerate() {
            out.push(paired_check(
                &format!("d{}{}", j + 1, suffix),
                pairing,
                inner,
                order,
                p,
                boundary,
                modulus,
            ));
        }
    }
    out
}

/// Residue keys `c1..c3` (odd pairing) and `c1p..c3p` (even pairing).
fn bounded_ds_checks(p: usize, boundary: Boundary) -> Vec<Check> {
    let mut out = Vec::with_capacity(6);
    for (pairing, suffix) in [(Pairing::Odd, ""), (Pairing::Even, "p")] {
        for k in 1..=3u32 {
            out.push(paired_check(
                &format!("c{k}{suffix}"),
                pairing,
                PairInner::Identity,
                k,
                p,
                boundary,
                3 * pow(2 * p as u64, k),
            ));
        }
    }
    out
}

impl CodeLayout {
    pub fn new(construction: Construction, n: usize, opts: LayoutOptions) -> Result<Self> {
        if n == 0 || n + 1 > MAX_LEN {
            return Err(Error::OutOfRange {
                what: "code length n",
                value: n as i128,
                range: format!("[1, {}]", MAX_LEN - 1),
            });
        }
        let nn = n as u64;
        let n1 = nn + 1;
        let boundary = opts.boundary;
        let reject = |what: &str| -> Result<()> {
            Err(Error::InvalidParameter(format!(
                "{what} does not apply to {construction}"
            )))
        };
        if !construction.has_paired_checks() && opts.boundary != Boundary::Lone {
            reject("boundary")?;
        }
        if construction != Construction::Lev && opts.m.is_some() {
            reject("m")?;
        }
        if !construction.is_composite() {
            if opts.ell.is_some() {
                reject("ell")?;
            }
            if opts.eps.is_some() {
                reject("eps")?;
            }
            if opts.mode.is_some() {
                reject("mode")?;
            }
        }
        if !construction.has_paired_checks() && opts.block.is_some() {
            reject("P")?;
        }

        let mut layout = CodeLayout {
            construction,
            n,
            m: None,
            block: None,
            balance: None,
            mode: None,
            boundary,
            exclude_constant: false,
            checks: Vec::new(),
            notes: Vec::new(),
        };
        let id = Transform::Identity;
        let psi = Transform::Differential;

        match construction {
            Construction::Lev => {
                let m = opts.m.unwrap_or(2 * nn);
                if m < 2 * nn {
                    return Err(Error::OutOfRange {
                        what: "LEV modulus m",
                        value: m as i128,
                        range: format!("[{}, inf)", 2 * nn),
                    });
                }
                layout.m = Some(m);
                layout.checks.push(vt_check("a", id, 1, m));
            }
            Construction::C2s => {
                for k in 0..=2 {
                    layout
                        .checks
                        .push(vt_check(&format!("b{k}"), id, k, 4 * pow(nn, k) + 1));
                }
            }
            Construction::CdsList => {
                layout.exclude_constant = true;
                layout.checks.push(vt_check("b0", id, 0, 4));
                for k in 1..=2 {
                    layout
                        .checks
                        .push(vt_check(&format!("b{k}"), id, k, 2 * pow(nn, k)));
                }
            }
            Construction::C2dBounded | Construction::CdsBounded => {
                let p = opts.block.ok_or_else(|| {
                    Error::InvalidParameter(format!("{construction} requires P"))
                })?;
                if p == 0 || p > n {
                    return Err(Error::OutOfRange {
                        what: "block length P",
                        value: p as i128,
                        range: format!("[1, {n}]"),
                    });
                }
                if p == n {
                    layout
                        .notes
                        .push(format!("P = n = {n}: blocks are only defined for n > P"));
                }
                layout.block = Some(p);
                layout.checks = if construction == Construction::C2dBounded {
                    bounded_2d_checks(p, boundary)
                } else {
                    bounded_ds_checks(p, boundary)
                };
            }
            Construction::C2d | Construction::Cds | Construction::C2e | Construction::C2eList => {
                let ell = opts.ell.unwrap_or_else(|| paper_ell(n));
                let eps = opts.eps.unwrap_or_else(paper_eps);
                let p = opts.block.unwrap_or_else(|| paper_block(ell));
                if p == 0 {
                    return Err(Error::InvalidParameter("P must be positive".into()));
                }
                let balance = BalanceParams::new(ell, eps)?;
                let block_ok = if construction == Construction::C2d {
                    p >= paper_block(ell)
                } else {
                    p == paper_block(ell)
                };
                let matches_paper = ell == paper_ell(n) && eps == paper_eps() && block_ok;
                let mode = match opts.mode {
                    Some(Mode::Paper) if !matches_paper => {
                        return Err(Error::InvalidParameter(format!(
                            "mode=paper requires ell={}, eps=1/18 and P {} {}; got ell={ell} eps={eps} P={p}",
                            paper_ell(n),
                            if construction == Construction::C2d { ">=" } else { "=" },
                            paper_block(ell)
                        )))
                    }
                    Some(m) => m,
                    None if matches_paper => Mode::Paper,
                    None => Mode::Relaxed,
                };
                match mode {
                    Mode::Paper => layout.notes.push(
                        "paper parameters: correctness is guaranteed only asymptotically in n"
                            .into(),
                    ),
                    Mode::Relaxed => layout.notes.push(
                        "relaxed parameters: no correctness guarantee, verify the class"
                            .into(),
                    ),
                }
                if ell > n + 1 {
                    layout
                        .notes
                        .push(format!("balance constraints vacuous (ell={ell} > n+1={})", n + 1));
                }
                if p > n {
                    layout
                        .notes
                        .push(format!("P={p} exceeds n={n}: bounded conditions see a single block"));
                }
                layout.block = Some(p);
                layout.balance = Some(balance);
                layout.mode = Some(mode);

                let checks = &mut layout.checks;
                match construction {
                    Construction::C2d => {
                        for k in 0..=1 {
                            checks.push(vt_check(&format!("a{k}"), psi, k, 4 * pow(n1, k) + 1));
                        }
                        for k in 0..=2 {
                            checks.push(vt_check(&format!("b{k}"), id, k, 2 * pow(nn, k) + 1));
                        }
                        checks.extend(bounded_2d_checks(p, boundary));
                    }
                    Construction::Cds => {
                        for k in 0..=1 {
                            checks.push(vt_check(&format!("a{k}"), id, k, 3 * pow(nn, k) + 1));
                        }
                        for k in 0..=2 {
                            checks.push(vt_check(&format!("b{k}"), psi, k, 6 * pow(n1, k) + 1));
                        }
                        checks.extend(bounded_ds_checks(p, boundary));
                    }
                    Construction::C2e => {
                        for k in 0..=2 {
                            checks.push(vt_check(&format!("a{k}"), id, k, 4 * pow(nn, k) + 1));
                        }
                        for k in 0..=2 {
                            checks.push(vt_check(&format!("b{k}"), psi, k, 6 * pow(n1, k) + 1));
                        }
                        checks.extend(bounded_2d_checks(p, boundary));
                        checks.extend(bounded_ds_checks(p, boundary));
                    }
                    Construction::C2eList => {
                        for k in 0..=2 {
                            checks.push(vt_check(&format!("a{k}"), id, k, 4 * pow(nn, k) + 1));
                        }
                        for k in 0..=1 {
                            checks.push(vt_check(&format!("b{k}"), psi, k, 4 * pow(n1, k) + 1));
                        }
                        checks.extend(bounded_2d_checks(p, boundary));
                    }
                    _ => unreachable!(),
                }
            }
        }
        Ok(layout)
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus_m(&self) -> Option<u64> {
        self.m
    }

    pub fn block(&self) -> Option<usize> {
        self.block
    }

    pub fn balance(&self) -> Option<BalanceParams> {
        self.balance
    }

    pub fn mode(&self) -> Option<Mode> {
        self.mode
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn excludes_constant(&self) -> bool {
        self.exclude_constant
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.checks.iter().map(|c| c.key.as_str())
    }

    /// Number of residue tuples (product of the moduli).
    pub fn residue_tuples(&self) -> u128 {
        self.checks
            .iter()
            .fold(1u128, |acc, c| acc.saturating_mul(c.modulus as u128))
    }

    /// Passes the non-congruence conditions (length, balance, constant words).
    pub fn eligible(&self, x: &BitSeq) -> bool {
        if x.len() != self.n {
            return false;
        }
        if self.exclude_constant && x.is_constant() {
            return false;
        }
        match &self.balance {
            Some(p) => is_balanced_pair(x, p),
            None => true,
        }
    }

    /// Residue vector of an eligible word; `None` for ineligible words.
    pub fn signature(&self, x: &BitSeq) -> Option<Vec<u64>> {
        if !self.eligible(x) {
            return None;
        }
        Some(self.raw_signature(x))
    }

    /// Residue vector without the eligibility filter. `x` must have length n.
    pub fn raw_signature(&self, x: &BitSeq) -> Vec<u64> {
        self.checks.iter().map(|c| c.residue(x)).collect()
    }

    /// The class spec with the given residues (validated).
    pub fn with_residues(self: &Arc<Self>, residues: Vec<u64>) -> Result<CodeSpec> {
        if residues.len() != self.checks.len() {
            return Err(Error::InvalidParameter(format!(
                "{} expects {} residues, got {}",
                self.construction,
                self.checks.len(),
                residues.len()
            )));
        }
        for (c, &r) in self.checks.iter().zip(&residues) {
            if r >= c.modulus {
                return Err(Error::OutOfRange {
                    what: "residue",
                    value: r as i128,
                    range: format!("[0, {}) for {}", c.modulus, c.key),
                });
            }
        }
        Ok(CodeSpec {
            layout: Arc::clone(self),
            residues,
        })
    }

    /// The class containing `anchor`.
    pub fn anchored(self: &Arc<Self>, anchor: &BitSeq) -> Result<CodeSpec> {
        if anchor.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: anchor.len(),
            });
        }
        let sig = self.signature(anchor).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "anchor {anchor} is not eligible for {} (balance or constant-word condition)",
                self.construction
            ))
        })?;
        self.with_residues(sig)
    }

    /// Layout parameters as ordered key=value pairs.
    pub fn param_pairs(&self) -> Vec<(String, String)> {
        let mut v = vec![
            ("code".to_string(), self.construction.tag().to_string()),
            ("n".to_string(), self.n.to_string()),
        ];
        if let Some(m) = self.m {
            v.push(("m".into(), m.to_string()));
        }
        if let Some(b) = &self.balance {
            v.push(("ell".into(), b.ell().to_string()));
            v.push(("eps".into(), b.eps().to_string()));
        }
        if let Some(p) = self.block {
            v.push(("P".into(), p.to_string()));
        }
        if let Some(mode) = self.mode {
            v.push(("mode".into(), mode.to_string()));
        }
        if self.construction.has_paired_checks() {
            v.push(("boundary".into(), self.boundary.to_string()));
        }
        v
    }
}

/// One residue class of a construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeSpec {
    layout: Arc<CodeLayout>,
    residues: Vec<u64>,
}

/// Outcome of one membership condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub condition: String,
    pub detail: String,
    pub ok: bool,
}

impl CodeSpec {
    pub fn layout(&self) -> &CodeLayout {
        &self.layout
    }

    pub fn layout_arc(&self) -> &Arc<CodeLayout> {
        &self.layout
    }

    pub fn n(&self) -> usize {
        self.layout.n
    }

    pub fn construction(&self) -> Construction {
        self.layout.construction
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn residue(&self, key: &str) -> Option<u64> {
        self.layout
            .checks
            .iter()
            .position(|c| c.key == key)
            .map(|i| self.residues[i])
    }

    /// Membership predicate; words of the wrong length are not members.
    pub fn member(&self, x: &BitSeq) -> bool {
        self.layout.eligible(x)
            && self
                .layout
                .checks
                .iter()
                .zip(&self.residues)
                .all(|(c, &r)| c.residue(x) == r)
    }

    /// Per-condition membership breakdown.
    pub fn breakdown(&self, x: &BitSeq) -> Vec<ConditionReport> {
        let mut out = Vec::new();
        let n = self.layout.n;
        out.push(ConditionReport {
            condition: "length".into(),
            detail: format!("|x| = {} (n = {n})", x.len()),
            ok: x.len() == n,
        });
        if x.len() != n {
            return out;
        }
        if self.layout.exclude_constant {
            out.push(ConditionReport {
                condition: "non-constant".into(),
                detail: "x not in {0^n, 1^n}".into(),
                ok: !x.is_constant(),
            });
        }
        if let Some(p) = &self.layout.balance {
            let sx = crate::balance::is_strong_locally_balanced(x, p);
            let sd = x
                .differential()
                .map(|d| crate::balance::is_strong_locally_balanced(&d, p))
                .unwrap_or(false);
            out.push(ConditionReport {
                condition: "strong-balanced(x)".into(),
                detail: p.to_string(),
                ok: sx,
            });
            out.push(ConditionReport {
                condition: "strong-balanced(psi(x))".into(),
                detail: p.to_string(),
                ok: sd,
            });
        }
        for (c, &r) in self.layout.checks.iter().zip(&self.residues) {
            let got = c.residue(x);
            out.push(ConditionReport {
                condition: c.key.clone(),
                detail: format!(
                    "{} mod {} = {} (want {})",
                    c.quantity.describe(),
                    c.modulus,
                    got,
                    r
                ),
                ok: got == r,
            });
        }
        out
    }

    /// Resolved `key=value` pairs: layout parameters then residues.
    pub fn pairs(&self) -> Vec<(String, String)> {
        let mut v = self.layout.param_pairs();
        for (c, r) in self.layout.checks.iter().zip(&self.residues) {
            v.push((c.key.clone(), r.to_string()));
        }
        v
    }

    pub fn to_kv(&self) -> String {
        self.pairs()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Builds a spec from `key=value` pairs. Residues come either from the
    /// pairs or from `anchor` (the class containing the anchor), never both.
    pub fn from_pairs(pairs: &BTreeMap<String, String>, anchor: Option<&BitSeq>) -> Result<Self> {
        let layout = Arc::new(CodeLayout::from_pairs(pairs, anchor.map(BitSeq::len))?);
        let construction = layout.construction;
        for k in pairs.keys() {
            if !LAYOUT_KEYS.contains(&k.as_str()) && !layout.keys().any(|c| c == k) {
                return Err(Error::InvalidParameter(format!(
                    "unknown key {k:?} for {construction}"
                )));
            }
        }
        let num = |k: &str| -> Result<Option<u64>> { num_key(pairs, k) };
        let explicit: Vec<&str> = layout.keys().filter(|k| pairs.contains_key(*k)).collect();
        match anchor {
            Some(a) => {
                if let Some(k) = explicit.first() {
                    return Err(Error::InvalidParameter(format!(
                        "residue {k} given together with an anchor"
                    )));
                }
                layout.anchored(a)
            }
            None => {
                let residues = layout
                    .keys()
                    .map(|k| {
                        num(k)?.ok_or_else(|| Error::InvalidParameter(format!("missing residue key: {k}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                layout.with_residues(residues)
            }
        }
    }
}

/// Keys that configure a layout rather than fix a residue.
pub const LAYOUT_KEYS: [&str; 8] = ["code", "n", "m", "P", "ell", "eps", "mode", "boundary"];

fn num_key(pairs: &BTreeMap<String, String>, k: &str) -> Result<Option<u64>> {
    pairs
        .get(k)
        .map(|v| {
            v.parse::<u64>()
                .map_err(|_| Error::InvalidParameter(format!("{k}={v:?} is not a non-negative integer")))
        })
        .transpose()
}

impl CodeLayout {
    /// Builds a layout from the layout keys among `pairs`; other keys are
    /// ignored. `n` falls back to `default_n` when absent.
    pub fn from_pairs(pairs: &BTreeMap<String, String>, default_n: Option<usize>) -> Result<Self> {
        let get = |k: &str| pairs.get(k).map(String::as_str);
        let num = |k: &str| num_key(pairs, k);
        let construction: Construction = get("code")
            .ok_or_else(|| Error::InvalidParameter("missing key: code".into()))?
            .parse()?;
        let n = match (num("n")?, default_n) {
            (Some(n), _) => n as usize,
            (None, Some(n)) => n,
            (None, None) => return Err(Error::InvalidParameter("missing key: n".into())),
        };
        let opts = LayoutOptions {
            m: num("m")?,
            block: num("P")?.map(|p| p as usize),
            ell: num("ell")?.map(|l| l as usize),
            eps: get("eps").map(parse_ratio).transpose()?,
            mode: get("mode").map(str::parse).transpose()?,
            boundary: get("boundary").map(str::parse).transpose()?.unwrap_or_default(),
        };
        CodeLayout::new(construction, n, opts)
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_kv())
    }
}

impl FromStr for CodeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CodeSpec::from_pairs(&parse_kv(s)?, None)
    }
}

/// Splits whitespace-separated `key=value` tokens. A trailing `'` on a key
/// is accepted as an alias for the `p` suffix (`d1'` = `d1p`).
pub fn parse_kv(s: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for tok in s.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| Error::InvalidParameter(format!("expected key=value, got {tok:?}")))?;
        let key = normalize_key(k);
        if out.insert(key.clone(), v.to_string()).is_some() {
            return Err(Error::InvalidParameter(format!("duplicate key {key:?}")));
        }
    }
    Ok(out)
}

pub fn normalize_key(k: &str) -> String {
    let k = k.trim();
    let k = if k == "p" { "P" } else { k };
    match k.strip_suffix('\'') {
        Some(base) => format!("{base}p"),
        None => k.to_string(),
    }
}

/// Parses `a/b` or an integer into a rational.
pub fn parse_ratio(s: &str) -> Result<Ratio<i64>> {
    let bad = || Error::InvalidParameter(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            Ok(Ratio::new(a, b))
        }
        None => s.trim().parse::<i64>().map(Ratio::from_integer).map_err(|_| bad()),
    }
}

fn class_member(
    construction: Construction,
    x: &BitSeq,
    opts: LayoutOptions,
    residues: Vec<u64>,
) -> Result<bool> {
    let layout = Arc::new(CodeLayout::new(construction, x.len(), opts)?);
    Ok(layout.with_residues(residues)?.member(x))
}

/// `VT1(x) = a (mod m)` with `m >= 2n`.
pub fn lev_member(x: &BitSeq, m: u64, a: u64) -> Result<bool> {
    let opts = LayoutOptions {
        m: Some(m),
        ..Default::default()
    };
    class_member(Construction::Lev, x, opts, vec![a])
}

/// `VTk(x) = b_k (mod 4n^k + 1)` for `k = 0, 1, 2`.
pub fn c2s_member(x: &BitSeq, b: [u64; 3]) -> Result<bool> {
    class_member(Construction::C2s, x, LayoutOptions::default(), b.to_vec())
}

/// `x` non-constant, `VT0(x) = b0 (mod 4)`, `VTk(x) = b_k (mod 2n^k)`.
pub fn cds_list_member(x: &BitSeq, b: [u64; 3]) -> Result<bool> {
    class_member(Construction::CdsList, x, LayoutOptions::default(), b.to_vec())
}

/// The ten paired indicator congruences; `odd` holds `d1..d5`, `even`
/// holds `d1p..d5p`.
pub fn c2d_bounded_member(
    x: &BitSeq,
    p: usize,
    odd: [u64; 5],
    even: [u64; 5],
    boundary: Boundary,
) -> Result<bool> {
    let opts = LayoutOptions {
        block: Some(p),
        boundary,
        ..Default::default()
    };
    let mut r = odd.to_vec();
    r.extend_from_slice(&even);
    class_member(Construction::C2dBounded, x, opts, r)
}

/// The six paired VT congruences; `odd` holds `c1..c3`, `even` `c1p..c3p`.
pub fn cds_bounded_member(
    x: &BitSeq,
    p: usize,
    odd: [u64; 3],
    even: [u64; 3],
    boundary: Boundary,
) -> Result<bool> {
    let opts = LayoutOptions {
        block: Some(p),
        boundary,
        ..Default::default()
    };
    let mut r = odd.to_vec();
    r.extend_from_slice(&even);
    class_member(Construction::CdsBounded, x, opts, r)
}
