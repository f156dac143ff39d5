use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use editcodes::balance::{is_d_regular, is_locally_balanced, is_strong_locally_balanced, BalanceParams};
use editcodes::balls::{edit_ball, mixed_ball, simulate_channel, simulate_edit_channel, ChannelBudget, EditBudget};
use editcodes::codes::{
    enumerate_code_with_limit, parse_kv, partition_stats, CodeLayout, CodeSpec,
    Construction, DEFAULT_ENUMERATE_LIMIT, ENUMERATE_WARN_ABOVE, LAYOUT_KEYS,
};
use editcodes::decode::{
    decode_by_search, decode_two_edit, decode_two_substitutions_detailed, edit_candidates,
    list_decode_by_search, list_decode_two_edit, substitution_residues, DecodeOutcome,
};
use editcodes::syndromes::Transform;
use editcodes::verify::{
    verify_correcting, verify_edit_correcting, verify_edit_list, verify_lemma_suite, verify_list,
    verify_p_bounded, VerifyReport,
};
use editcodes::BitSeq;
use num_rational::Ratio;
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(name = "editcodes", version, about = "Binary two-edit-correcting codes: syndromes, balls, decoding and exhaustive verification")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print VT syndromes of sequences, one per line.
    Syndrome {
        words: Vec<String>,
        /// Newline-delimited file of sequences.
        #[arg(long)]
        file: Option<PathBuf>,
        /// identity, differential, run, or indicatorAB (e.g. indicator01).
        #[arg(long, default_value = "identity")]
        transform: String,
        #[arg(long, short, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        modulus: Option<u64>,
    },
    /// Check local balance of a sequence.
    Balance {
        word: String,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = 1)]
        eps_num: i64,
        #[arg(long, default_value_t = 18)]
        eps_den: i64,
        /// Check every window of length at least ell.
        #[arg(long)]
        strong: bool,
        /// Also check d-regularity with window ell.
        #[arg(long)]
        regular: bool,
    },
    /// List an error ball, one member per line.
    Ball {
        word: String,
        #[command(flatten)]
        noise: NoiseArgs,
    },
    /// Pass a sequence through a seeded random channel.
    Channel {
        word: String,
        #[command(flatten)]
        noise: NoiseArgs,
        #[arg(long, required = true)]
        seed: Option<u64>,
    },
    /// Test membership of x in a code class, condition by condition.
    Member {
        /// key=value pairs of the class, plus x=<bits>.
        pairs: Vec<String>,
        #[arg(long)]
        anchor: Option<String>,
    },
    /// Write every codeword of a class.
    Enumerate {
        pairs: Vec<String>,
        #[arg(long)]
        anchor: Option<String>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATE_LIMIT)]
        limit: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Class-size statistics of a construction at fixed n.
    Stats {
        /// code=<tag> n=<len> and optional layout keys.
        pairs: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATE_LIMIT)]
        limit: usize,
    },
    /// Decode received words.
    Decode {
        /// Class as key=value pairs.
        #[arg(long)]
        code: String,
        #[arg(long)]
        anchor: Option<String>,
        /// A bitstring or a file of bitstrings.
        #[arg(long)]
        received: String,
        #[command(flatten)]
        noise: NoiseArgs,
        /// List size.
        #[arg(long)]
        list: Option<usize>,
    },
    /// Exhaustively verify a correction property.
    Verify {
        #[arg(long, conflicts_with = "words")]
        code: Option<String>,
        #[arg(long, requires = "code")]
        anchor: Option<String>,
        #[arg(long)]
        words: Option<PathBuf>,
        #[command(flatten)]
        noise: NoiseArgs,
        #[arg(long)]
        list: Option<usize>,
        #[arg(long, conflicts_with = "list")]
        p_bounded: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATE_LIMIT)]
        limit: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the pairwise ball lemmas for every pair up to n-max.
    LemmaSuite {
        #[arg(long, default_value_t = 8)]
        n_max: usize,
    },
}

#[derive(Args, Clone, Default)]
struct NoiseArgs {
    /// Channel as t1,t2,t3: insertions, deletions, substitution cap.
    #[arg(long, conflicts_with_all = ["t1", "t2", "t3", "edits"])]
    channel: Option<String>,
    #[arg(long)]
    t1: Option<usize>,
    #[arg(long)]
    t2: Option<usize>,
    #[arg(long)]
    t3: Option<usize>,
    /// Up to this many edits of any kind.
    #[arg(long, conflicts_with_all = ["t1", "t2", "t3"])]
    edits: Option<usize>,
}

#[derive(Clone, Copy)]
enum Noise {
    Mixed(ChannelBudget),
    Edits(EditBudget),
}

impl Noise {
    fn config(&self, config: &mut Map<String, Value>) {
        match self {
            Noise::Mixed(b) => config.insert("channel".into(), json!(b.to_string())),
            Noise::Edits(t) => config.insert("edits".into(), json!(t.0)),
        };
    }
}

/// Failure before a result exists: always exit 2.
struct Usage(String);

impl Usage {
    fn flag(flag: &str, e: impl fmt::Display) -> Self {
        Usage(format!("{flag}: {e}"))
    }
}

type Res<T> = std::result::Result<T, Usage>;

impl NoiseArgs {
    fn resolve(&self) -> Res<Option<Noise>> {
        if let Some(c) = &self.channel {
            let b: ChannelBudget = c.parse().map_err(|e| Usage::flag("--channel", e))?;
            return Ok(Some(Noise::Mixed(b)));
        }
        if let Some(t) = self.edits {
            return Ok(Some(Noise::Edits(EditBudget(t))));
        }
        if self.t1.is_some() || self.t2.is_some() || self.t3.is_some() {
            let (i, d, s) = (self.t1.unwrap_or(0), self.t2.unwrap_or(0), self.t3.unwrap_or(0));
            let b = ChannelBudget::new(i, d, s).map_err(|e| Usage::flag("--t1/--t2/--t3", e))?;
            return Ok(Some(Noise::Mixed(b)));
        }
        Ok(None)
    }

    fn require(&self) -> Res<Noise> {
        self.resolve()?
            .ok_or_else(|| Usage("one of --channel, --t1/--t2/--t3 or --edits is required".into()))
    }
}

/// Everything a subcommand reports.
struct Report {
    config: Map<String, Value>,
    verdict: Value,
    witness: Option<Value>,
    counts: BTreeMap<String, u64>,
    result: Option<Value>,
    /// Text-mode body.
    lines: Vec<String>,
    /// Text mode: print the config line on stderr so stdout stays one item per line.
    config_to_stderr: bool,
    out: Option<PathBuf>,
    exit: u8,
}

impl Report {
    fn new(command: &str) -> Self {
        let mut config = Map::new();
        config.insert("command".into(), json!(command));
        Report {
            config,
            verdict: json!("ok"),
            witness: None,
            counts: BTreeMap::new(),
            result: None,
            lines: Vec::new(),
            config_to_stderr: false,
            out: None,
            exit: 0,
        }
    }

    fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.config.insert(key.into(), value.into());
    }

    fn emit(self, format: Format, elapsed_ms: u64) -> Res<u8> {
        let body = match format {
            Format::Json => {
                let mut top = Map::new();
                top.insert("config".into(), Value::Object(self.config));
                top.insert("verdict".into(), self.verdict);
                if let Some(w) = self.witness {
                    top.insert("witness".into(), w);
                }
                top.insert("counts".into(), json!(self.counts));
                if let Some(r) = self.result {
                    top.insert("result".into(), r);
                }
                top.insert("elapsed_ms".into(), json!(elapsed_ms));
                let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("json values serialize");
                s.push('\n');
                s
            }
            Format::Text => {
                let config = config_line(&self.config);
                let mut s = String::new();
                if self.config_to_stderr {
                    eprintln!("{config}");
                } else {
                    s.push_str(&config);
                    s.push('\n');
                }
                for l in &self.lines {
                    s.push_str(l);
                    s.push('\n');
                }
                s
            }
        };
        match &self.out {
            Some(path) => fs::write(path, body).map_err(|e| Usage::flag("--out", format!("{}: {e}", path.display())))?,
            None => {
                let mut stdout = std::io::stdout().lock();
                // A closed pipe is not an error worth reporting.
                let _ = stdout.write_all(body.as_bytes());
            }
        }
        Ok(self.exit)
    }
}

fn config_line(config: &Map<String, Value>) -> String {
    let parts: Vec<String> = config
        .iter()
        .map(|(k, v)| match v {
            Value::String(s) => format!("{k}={s}"),
            other => format!("{k}={other}"),
        })
        .collect();
    format!("config: {}", parts.join(" "))
}

fn parse_word(flag: &str, s: &str) -> Res<BitSeq> {
    BitSeq::parse_line(s.trim(), 1).map_err(|e| Usage::flag(flag, e))
}

fn read_words(flag: &str, path: &Path) -> Res<Vec<BitSeq>> {
    let text = fs::read_to_string(path).map_err(|e| Usage::flag(flag, format!("{}: {e}", path.display())))?;
    BitSeq::parse_lines(&text).map_err(|e| Usage::flag(flag, format!("{}: {e}", path.display())))
}

/// `x=<bits>` or bare `<bits>`.
fn parse_anchor(s: &str) -> Res<BitSeq> {
    let bits = s.strip_prefix("x=").unwrap_or(s);
    parse_word("--anchor", bits)
}

fn kv_map(flag: &str, pairs: &[String]) -> Res<BTreeMap<String, String>> {
    parse_kv(&pairs.join(" ")).map_err(|e| Usage::flag(flag, e))
}

fn spec_from(flag: &str, pairs: &BTreeMap<String, String>, anchor: Option<&String>) -> Res<CodeSpec> {
    let anchor = anchor.map(|a| parse_anchor(a)).transpose()?;
    CodeSpec::from_pairs(pairs, anchor.as_ref()).map_err(|e| Usage::flag(flag, e))
}

fn spec_config(report: &mut Report, spec: &CodeSpec) {
    for (k, v) in spec.pairs() {
        report.set(&k, v);
    }
    if !spec.layout().notes().is_empty() {
        report.set("notes", spec.layout().notes().to_vec());
    }
}

fn ratio_str(r: Ratio<i64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn cmd_syndrome(
    words: &[String],
    file: Option<&PathBuf>,
    transform: &str,
    k: u32,
    modulus: Option<u64>,
) -> Res<Report> {
    let t: Transform = transform.parse().map_err(|e| Usage::flag("--transform", e))?;
    let mut seqs = words.iter().map(|w| parse_word("word", w)).collect::<Res<Vec<_>>>()?;
    if let Some(f) = file {
        seqs.extend(read_words("--file", f)?);
    }
    if seqs.is_empty() {
        return Err(Usage("no input sequences: pass bitstrings or --file".into()));
    }
    let mut r = Report::new("syndrome");
    r.config_to_stderr = true;
    r.set("transform", t.to_string());
    r.set("k", k);
    if let Some(m) = modulus {
        if m == 0 {
            return Err(Usage::flag("--modulus", "must be positive"));
        }
        r.set("modulus", m);
    }
    let mut rows = Vec::new();
    for x in &seqs {
        let raw = t.syndrome(x, k).map_err(|e| Usage::flag("word", format!("{x}: {e}")))?;
        let v = match modulus {
            Some(m) => raw % m as u128,
            None => raw,
        };
        r.lines.push(v.to_string());
        rows.push(json!({"word": x.to_string(), "value": v.to_string()}));
    }
    r.counts.insert("words".into(), seqs.len() as u64);
    r.result = Some(Value::Array(rows));
    Ok(r)
}

fn cmd_balance(word: &str, ell: usize, num: i64, den: i64, strong: bool, regular: bool) -> Res<Report> {
    let x = parse_word("word", word)?;
    if den <= 0 {
        return Err(Usage::flag("--eps-den", "must be positive"));
    }
    let eps = Ratio::new(num, den);
    let p = BalanceParams::new(ell, eps).map_err(|e| Usage::flag("--ell/--eps-num/--eps-den", e))?;
    let mut r = Report::new("balance");
    r.set("word", x.to_string());
    r.set("ell", ell);
    r.set("eps", ratio_str(eps));
    r.set("strong", strong);
    r.set("regular", regular);
    let mut checks = Map::new();
    if strong {
        checks.insert("strong_locally_balanced".into(), json!(is_strong_locally_balanced(&x, &p)));
    } else {
        checks.insert("locally_balanced".into(), json!(is_locally_balanced(&x, &p)));
    }
    if regular {
        checks.insert("d_regular".into(), json!(is_d_regular(&x, ell)));
    }
    let all = checks.values().all(|v| v == &json!(true));
    for (k, v) in &checks {
        r.lines.push(format!("{k}: {v}"));
    }
    r.verdict = json!(all);
    r.result = Some(Value::Object(checks));
    Ok(r)
}

fn cmd_ball(word: &str, noise: &NoiseArgs) -> Res<Report> {
    let x = parse_word("word", word)?;
    let n = noise.require()?;
    let ball = match n {
        Noise::Mixed(b) => mixed_ball(&x, &b),
        Noise::Edits(t) => edit_ball(&x, t),
    }
    .map_err(|e| Usage::flag("--channel/--edits", e))?;
    let mut r = Report::new("ball");
    r.config_to_stderr = true;
    r.set("word", x.to_string());
    n.config(&mut r.config);
    r.lines = ball.iter().map(|z| z.to_string()).collect();
    r.counts.insert("members".into(), ball.len() as u64);
    r.result = Some(json!(r.lines));
    Ok(r)
}

fn cmd_channel(word: &str, noise: &NoiseArgs, seed: u64) -> Res<Report> {
    let x = parse_word("word", word)?;
    let n = noise.require()?;
    let out = match n {
        Noise::Mixed(b) => simulate_channel(&x, &b, seed),
        Noise::Edits(t) => simulate_edit_channel(&x, t, seed),
    }
    .map_err(|e| Usage::flag("--channel/--edits", e))?;
    let mut r = Report::new("channel");
    r.config_to_stderr = true;
    r.set("word", x.to_string());
    n.config(&mut r.config);
    r.set("seed", seed);
    r.lines.push(out.received.to_string());
    for op in &out.ops {
        r.lines.push(format!("# {op}"));
    }
    r.counts.insert("ops".into(), out.ops.len() as u64);
    r.result = Some(serde_json::to_value(&out).expect("channel output serializes"));
    Ok(r)
}

fn cmd_member(pairs: &[String], anchor: Option<&String>) -> Res<Report> {
    let mut map = kv_map("pairs", pairs)?;
    let x = map
        .remove("x")
        .ok_or_else(|| Usage("missing x=<bits>".into()))
        .and_then(|s| parse_word("x", &s))?;
    let spec = spec_from("pairs", &map, anchor)?;
    if x.len() != spec.n() {
        return Err(Usage::flag("x", format!("length {} differs from n = {}", x.len(), spec.n())));
    }
    let mut r = Report::new("member");
    spec_config(&mut r, &spec);
    r.set("x", x.to_string());
    let member = spec.member(&x);
    let breakdown = spec.breakdown(&x);
    r.lines.push(member.to_string());
    for c in &breakdown {
        r.lines.push(format!("  {} {}: {}", if c.ok { "ok  " } else { "FAIL" }, c.condition, c.detail));
    }
    r.verdict = json!(member);
    r.counts.insert("conditions".into(), breakdown.len() as u64);
    r.counts.insert("failed".into(), breakdown.iter().filter(|c| !c.ok).count() as u64);
    r.result = Some(serde_json::to_value(&breakdown).expect("breakdown serializes"));
    Ok(r)
}

fn warn_large(n: usize) {
    if n > ENUMERATE_WARN_ABOVE {
        eprintln!("warning: exhaustive enumeration over 2^{n} words");
    }
}

fn cmd_enumerate(pairs: &[String], anchor: Option<&String>, limit: usize, out: Option<&PathBuf>) -> Res<Report> {
    let map = kv_map("pairs", pairs)?;
    let spec = spec_from("pairs", &map, anchor)?;
    warn_large(spec.n());
    let words = enumerate_code_with_limit(&spec, limit).map_err(|e| Usage::flag("--limit", e))?;
    let mut r = Report::new("enumerate");
    r.config_to_stderr = true;
    spec_config(&mut r, &spec);
    r.lines = words.iter().map(|x| x.to_string()).collect();
    r.counts.insert("codewords".into(), words.len() as u64);
    r.result = Some(json!(r.lines));
    r.out = out.cloned();
    Ok(r)
}

fn cmd_stats(pairs: &[String], limit: usize) -> Res<Report> {
    let map = kv_map("pairs", pairs)?;
    if let Some(k) = map.keys().find(|k| !LAYOUT_KEYS.contains(&k.as_str())) {
        return Err(Usage::flag("pairs", format!("unknown key {k:?} (stats takes layout keys only)")));
    }
    let layout = Arc::new(CodeLayout::from_pairs(&map, None).map_err(|e| Usage::flag("pairs", e))?);
    warn_large(layout.n());
    let stats = partition_stats(&layout, limit).map_err(|e| Usage::flag("--limit", e))?;
    let mut r = Report::new("stats");
    for (k, v) in layout.param_pairs() {
        r.set(&k, v);
    }
    r.counts.insert("classes".into(), stats.classes);
    r.counts.insert("eligible".into(), stats.eligible);
    r.counts.insert("max_size".into(), stats.max_size as u64);
    r.counts.insert("residue_tuples".into(), u64::try_from(stats.residue_tuples).unwrap_or(u64::MAX));
    let value = serde_json::to_value(&stats).expect("stats serialize");
    r.lines.push(serde_json::to_string_pretty(&value).expect("json values serialize"));
    r.result = Some(value);
    Ok(r)
}

/// A readable account of how `x` became `y`, when it is a pure substitution
/// pattern.
fn describe(x: &BitSeq, y: &BitSeq) -> Option<String> {
    if x.len() != y.len() {
        let d = y.len() as i64 - x.len() as i64;
        return Some(format!("length changed by {d:+}"));
    }
    let pos: Vec<String> = (1..=x.len()).filter(|&i| x.get(i) != y.get(i)).map(|i| i.to_string()).collect();
    Some(if pos.is_empty() {
        "no substitutions".into()
    } else {
        format!("substitutions at {}", pos.join(","))
    })
}

fn decode_one(y: &BitSeq, spec: &CodeSpec, noise: Option<Noise>, list: Option<usize>) -> Res<(DecodeOutcome, Option<String>)> {
    let n = spec.n();
    let member = |x: &BitSeq| spec.member(x);
    let err = |e| Usage::flag("--received", format!("{y}: {e}"));
    let explicit = match (spec.construction(), noise, list) {
        (Construction::C2s, None, None) => true,
        (Construction::C2s, Some(Noise::Mixed(b)), None) => b.ins == 0 && b.del == 0 && b.sub <= 2,
        _ => false,
    };
    let outcome = if explicit {
        let b = substitution_residues(spec).expect("C2S carries substitution residues");
        let d = decode_two_substitutions_detailed(y, n, b).map_err(err)?;
        let note = d.positions.map(|(i, j)| match (i, j) {
            (0, 0) => "no substitutions".to_string(),
            (0, j) | (j, 0) => format!("substitution at {j}"),
            (i, j) => format!("substitutions at {i},{j}"),
        });
        return Ok((d.outcome, note));
    } else {
        match (noise, list) {
            (None, None) if spec.construction() == Construction::C2e => decode_two_edit(y, spec).map_err(err)?,
            (None, None) if spec.construction() == Construction::C2eList => list_decode_two_edit(y, spec).map_err(err)?,
            (None, Some(2)) if spec.construction() == Construction::C2eList => list_decode_two_edit(y, spec).map_err(err)?,
            (None, _) => {
                return Err(Usage(format!(
                    "{} has no built-in decoder: pass --channel, --t1/--t2/--t3 or --edits",
                    spec.construction()
                )))
            }
            (Some(Noise::Mixed(b)), None) => decode_by_search(y, n, &b, &member).map_err(err)?,
            (Some(Noise::Mixed(b)), Some(cap)) => list_decode_by_search(y, n, &b, cap, &member).map_err(err)?,
            (Some(Noise::Edits(t)), None) => DecodeOutcome::unique_from(edit_candidates(y, n, t, &member).map_err(err)?),
            (Some(Noise::Edits(t)), Some(cap)) => {
                DecodeOutcome::list_from(edit_candidates(y, n, t, &member).map_err(err)?, cap)
            }
        }
    };
    let note = match &outcome {
        DecodeOutcome::Unique(x) => describe(x, y),
        _ => None,
    };
    Ok((outcome, note))
}

fn cmd_decode(code: &str, anchor: Option<&String>, received: &str, noise: &NoiseArgs, list: Option<usize>) -> Res<Report> {
    let map = parse_kv(code).map_err(|e| Usage::flag("--code", e))?;
    let spec = spec_from("--code", &map, anchor)?;
    let noise = noise.resolve()?;
    if list == Some(0) {
        return Err(Usage::flag("--list", "must be at least 1"));
    }
    let inputs = if Path::new(received).is_file() {
        read_words("--received", Path::new(received))?
    } else {
        vec![parse_word("--received", received)?]
    };
    let mut r = Report::new("decode");
    spec_config(&mut r, &spec);
    if let Some(n) = noise {
        n.config(&mut r.config);
    }
    if let Some(l) = list {
        r.set("list", l);
    }
    r.set("received", received);
    let mut rows = Vec::new();
    let mut kinds: BTreeMap<String, u64> = BTreeMap::new();
    for y in &inputs {
        let (outcome, note) = decode_one(y, &spec, noise, list)?;
        *kinds.entry(outcome.kind().into()).or_default() += 1;
        let cands: Vec<String> = outcome.candidates().iter().map(|x| x.to_string()).collect();
        let mut line = format!("{y} {} {}", outcome.kind(), cands.join(" "));
        if let Some(nt) = &note {
            line.push_str(&format!(" ({nt})"));
        }
        r.lines.push(line.trim_end().replace("  ", " "));
        let mut row = json!({"received": y.to_string(), "kind": outcome.kind(), "codewords": cands});
        if let Some(nt) = note {
            row["error"] = json!(nt);
        }
        rows.push(row);
    }
    if kinds.contains_key("no-candidate") {
        r.exit = 3;
    }
    r.verdict = if inputs.len() == 1 {
        json!(rows[0]["kind"].clone())
    } else {
        json!(kinds.keys().cloned().collect::<Vec<_>>().join(","))
    };
    r.counts = kinds;
    r.counts.insert("received".into(), inputs.len() as u64);
    r.result = Some(Value::Array(rows));
    Ok(r)
}

fn verify_report_into(r: &mut Report, v: VerifyReport) {
    let certified = v.certified();
    r.verdict = json!(v.verdict);
    r.set("property", v.property.clone());
    for (k, val) in &v.params {
        r.set(k, val.clone());
    }
    r.set("domain", v.domain.clone());
    if !v.notes.is_empty() {
        for n in &v.notes {
            eprintln!("{n}");
        }
        r.set("report_notes", v.notes.clone());
    }
    r.lines.push(format!("verdict: {}", if certified { "certified" } else { "refuted" }));
    if let Some(w) = &v.witness {
        let words: Vec<String> = w.words.iter().map(|x| x.to_string()).collect();
        r.lines.push(format!("witness words: {}", words.join(" ")));
        if let Some(c) = &w.common {
            r.lines.push(format!("witness common: {}", if c.is_empty() { "(empty)".to_string() } else { c.to_string() }));
        }
        if let Some((s, e)) = w.window {
            r.lines.push(format!("witness window: [{s}, {e}]"));
        }
        if let Some(d) = &w.detail {
            r.lines.push(format!("witness detail: {d}"));
        }
        r.witness = Some(serde_json::to_value(w).expect("witness serializes"));
    }
    for (k, c) in &v.counts {
        r.lines.push(format!("{k}: {c}"));
    }
    r.lines.push(format!("domain: {}", v.domain));
    r.counts = v.counts;
    if !certified {
        r.exit = 1;
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    code: Option<&String>,
    anchor: Option<&String>,
    words: Option<&PathBuf>,
    noise: &NoiseArgs,
    list: Option<usize>,
    p_bounded: Option<usize>,
    limit: usize,
    out: Option<&PathBuf>,
) -> Res<Report> {
    let mut r = Report::new("verify");
    let codewords = match (code, words) {
        (Some(c), None) => {
            let map = parse_kv(c).map_err(|e| Usage::flag("--code", e))?;
            let spec = spec_from("--code", &map, anchor)?;
            warn_large(spec.n());
            spec_config(&mut r, &spec);
            enumerate_code_with_limit(&spec, limit).map_err(|e| Usage::flag("--limit", e))?
        }
        (None, Some(f)) => {
            r.set("words", f.display().to_string());
            read_words("--words", f)?
        }
        _ => return Err(Usage("one of --code or --words is required".into())),
    };
    let noise = noise.require()?;
    noise.config(&mut r.config);
    if list == Some(0) {
        return Err(Usage::flag("--list", "must be at least 1"));
    }
    let report = match (noise, list, p_bounded) {
        (Noise::Mixed(b), None, Some(p)) => verify_p_bounded(&codewords, p, &b).map_err(|e| Usage::flag("--p-bounded", e))?,
        (Noise::Edits(_), _, Some(_)) => return Err(Usage::flag("--p-bounded", "needs --channel or --t1/--t2/--t3")),
        (Noise::Mixed(b), None, None) => verify_correcting(&codewords, &b).map_err(|e| Usage::flag("--channel", e))?,
        (Noise::Mixed(b), Some(l), _) => verify_list(&codewords, &b, l).map_err(|e| Usage::flag("--channel", e))?,
        (Noise::Edits(t), None, None) => verify_edit_correcting(&codewords, t).map_err(|e| Usage::flag("--edits", e))?,
        (Noise::Edits(t), Some(l), _) => verify_edit_list(&codewords, t, l).map_err(|e| Usage::flag("--edits", e))?,
    };
    verify_report_into(&mut r, report);
    r.out = out.cloned();
    Ok(r)
}

fn cmd_lemma_suite(n_max: usize) -> Res<Report> {
    let mut r = Report::new("lemma-suite");
    r.set("n_max", n_max);
    let v = verify_lemma_suite(n_max).map_err(|e| Usage::flag("--n-max", e))?;
    verify_report_into(&mut r, v);
    Ok(r)
}

fn run(cli: Cli) -> Res<u8> {
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(Usage::flag("--jobs", "must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| Usage::flag("--jobs", e))?;
    }
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Syndrome { words, file, transform, k, modulus } => {
            cmd_syndrome(words, file.as_ref(), transform, *k, *modulus)?
        }
        Command::Balance { word, ell, eps_num, eps_den, strong, regular } => {
            cmd_balance(word, *ell, *eps_num, *eps_den, *strong, *regular)?
        }
        Command::Ball { word, noise } => cmd_ball(word, noise)?,
        Command::Channel { word, noise, seed } => cmd_channel(word, noise, seed.expect("clap requires --seed"))?,
        Command::Member { pairs, anchor } => cmd_member(pairs, anchor.as_ref())?,
        Command::Enumerate { pairs, anchor, limit, out } => cmd_enumerate(pairs, anchor.as_ref(), *limit, out.as_ref())?,
        Command::Stats { pairs, limit } => cmd_stats(pairs, *limit)?,
        Command::Decode { code, anchor, received, noise, list } => {
            cmd_decode(code, anchor.as_ref(), received, noise, *list)?
        }
        Command::Verify { code, anchor, words, noise, list, p_bounded, limit, out } => cmd_verify(
            code.as_ref(),
            anchor.as_ref(),
            words.as_ref(),
            noise,
            *list,
            *p_bounded,
            *limit,
            out.as_ref(),
        )?,
        Command::LemmaSuite { n_max } => cmd_lemma_suite(*n_max)?,
    };
    if let Some(j) = cli.jobs {
        report.set("jobs", j);
    }
    let elapsed = start.elapsed().as_millis() as u64;
    report.emit(cli.format, elapsed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
