//! Independent oracles shared by the integration tests. Everything here works
//! on plain strings and vectors so it shares no code paths with the library.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use editcodes::BitSeq;

pub fn to_str(x: &BitSeq) -> String {
    x.to_string()
}

pub fn from_str(s: &str) -> BitSeq {
    s.parse().unwrap()
}

/// All binary strings of length `n`.
pub fn strings(n: usize) -> Vec<String> {
    (0..1u64 << n).map(|w| if n == 0 { String::new() } else { format!("{w:0n$b}") }).collect()
}

/// Differential sequence with zero padding on both ends.
pub fn psi(s: &str) -> String {
    let b: Vec<u8> = s.bytes().map(|c| c - b'0').collect();
    let n = b.len();
    (1..=n + 1)
        .map(|i| {
            let cur = if i <= n { b[i - 1] } else { 0 };
            let prev = if i >= 2 { b[i - 2] } else { 0 };
            if cur ^ prev == 1 { '1' } else { '0' }
        })
        .collect()
}

pub fn weight(s: &str) -> i64 {
    s.bytes().filter(|&c| c == b'1').count() as i64
}

/// `sum_i c_i^(k) s_i` with `c_i^(k) = sum_{j <= i} j^(k-1)`, `c^(0) = 1`.
pub fn vt(s: &str, k: u32) -> u128 {
    s.bytes()
        .enumerate()
        .filter(|&(_, c)| c == b'1')
        .map(|(i, _)| {
            let i = i as u128 + 1;
            if k == 0 { 1 } else { (1..=i).map(|j| j.pow(k - 1)).sum::<u128>() }
        })
        .sum()
}

/// Run sequence: `r_1 = s_1`, incremented at every change, with `s_{n+1} = 0`.
pub fn runs(s: &str) -> Vec<u32> {
    let b: Vec<u8> = s.bytes().map(|c| c - b'0').chain(std::iter::once(0)).collect();
    let mut out = vec![b[0] as u32];
    for i in 1..b.len() {
        let last = *out.last().unwrap();
        out.push(last + (b[i] != b[i - 1]) as u32);
    }
    out
}

pub fn delete(s: &str, i: usize) -> String {
    format!("{}{}", &s[..i], &s[i + 1..])
}

pub fn flip(s: &str, i: usize) -> String {
    let mut v: Vec<u8> = s.bytes().collect();
    v[i] = if v[i] == b'0' { b'1' } else { b'0' };
    String::from_utf8(v).unwrap()
}

pub fn insert(s: &str, i: usize, c: char) -> String {
    format!("{}{}{}", &s[..i], c, &s[i..])
}

/// Any-order closure: every word reachable by exactly `ins` insertions,
/// exactly `del` deletions and at most `sub` substitutions, interleaved in
/// every possible order.
pub fn bfs_ball(x: &str, ins: usize, del: usize, sub: usize) -> BTreeSet<String> {
    let mut seen: HashSet<(String, usize, usize, usize)> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut out = BTreeSet::new();
    let start = (x.to_string(), ins, del, sub);
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some((w, i, d, s)) = queue.pop_front() {
        if i == 0 && d == 0 {
            out.insert(w.clone());
        }
        let mut next = Vec::new();
        if i > 0 {
            for p in 0..=w.len() {
                for c in ['0', '1'] {
                    next.push((insert(&w, p, c), i - 1, d, s));
                }
            }
        }
        if d > 0 {
            for p in 0..w.len() {
                next.push((delete(&w, p), i, d - 1, s));
            }
        }
        if s > 0 {
            for p in 0..w.len() {
                next.push((flip(&w, p), i, d, s - 1));
            }
        }
        for st in next {
            if seen.insert(st.clone()) {
                queue.push_back(st);
            }
        }
    }
    out
}

/// `t`-edit ball by the same closure.
pub fn bfs_edit_ball(x: &str, t: usize) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for i in 0..=t {
        for d in 0..=t - i {
            if d <= x.len() {
                out.extend(bfs_ball(x, i, d, t - i - d));
            }
        }
    }
    out
}
