//! The `bturan` command line. Output is JSON unless `--format text` is given.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage or
//! parameter error, 3 a search budget ran out.

use crate::bounds::{self, ExResolver, Params};
use crate::constructions::{self, ConstructionError, ConstructionParams, Variant};
use crate::graph::Graph;
use crate::oracle::{
    self, exact_ex, exact_ex_restricted, Caps, ExTable, FamilySpec, Mode, OracleError, SearchConfig, TableEntry,
};
use crate::{forbidden, graph6, matching};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable naming the table file.
pub const TABLE_ENV: &str = "BTURAN_TABLE";
pub const DEFAULT_TABLE: &str = "ex_table.jsonl";

#[derive(Debug, Parser)]
#[command(name = "bturan", version, about = "K_{l,t}-free graphs with bounded matching number")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Table of solved instances (JSON lines).
    #[arg(long, global = true, env = TABLE_ENV, default_value = DEFAULT_TABLE)]
    pub table: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a barrier construction; writes PREFIX.g6 and PREFIX.layout.json.
    Construct(ConstructArgs),
    /// Check K_{l,t}-freeness and the matching bound of graph6 input.
    Verify(VerifyArgs),
    /// Evaluate every bound and theorem value for one instance.
    Bounds(InstanceArgs),
    /// Exact Turán numbers by exhaustive search.
    Oracle(OracleArgs),
    /// Lower bound, upper bound, oracle value and certificate per n or per s.
    Table(TableArgs),
    /// Inspect or compact the table file.
    Cache(CacheArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    G1,
    G2,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub variant: VariantArg,
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub t: usize,
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub x: usize,
    #[arg(long)]
    pub n: usize,
    /// Output prefix; defaults to `g1_l{l}_t{t}_s{s}_x{x}_n{n}`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also add X–S edges greedily (experimental, beyond the proven bound).
    #[arg(long)]
    pub augment: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// graph6 file, one graph per line, or `-` for stdin.
    pub input: String,
    #[arg(long, requires = "t")]
    pub l: Option<usize>,
    #[arg(long, requires = "l")]
    pub t: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
}

#[derive(Debug, Args)]
pub struct InstanceArgs {
    #[arg(long)]
    pub l: u64,
    #[arg(long)]
    pub t: u64,
    #[arg(long)]
    pub s: u64,
    #[arg(long)]
    pub n: u64,
    /// Refuse surrogate values for unknown ex(m, K_{l,t}).
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Worker threads for the exhaustive search.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Node budget; exhausting it yields a lower-only value and exit code 3.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Override the order cap for this run.
    #[arg(long)]
    pub cap: Option<usize>,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        let caps = match self.cap {
            Some(c) => Caps {
                c4: c,
                general: c,
                restricted: c,
            },
            None => Caps::default(),
        };
        SearchConfig {
            workers: self.workers.max(1),
            node_budget: self.budget,
            caps,
            ..SearchConfig::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Order or inclusive range `a..b`.
    #[arg(long, value_parser = parse_range)]
    pub n: RangeInclusive<usize>,
    /// Forbid K_{l,t}, given as `l,t`.
    #[arg(long, value_parser = parse_pair)]
    pub forbid_klt: Option<(usize, usize)>,
    /// Forbid M_{s+1}, given as `s`.
    #[arg(long)]
    pub forbid_matching: Option<usize>,
    /// Restrict to graphs with x(G) = x.
    #[arg(long)]
    pub x: Option<usize>,
    /// Do not write results to the table.
    #[arg(long)]
    pub no_store: bool,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub l: u64,
    #[arg(long)]
    pub t: u64,
    /// Matching bound or inclusive range `a..b`.
    #[arg(long, value_parser = parse_range)]
    pub s: RangeInclusive<usize>,
    /// Order or inclusive range `a..b`.
    #[arg(long, value_parser = parse_range)]
    pub n: RangeInclusive<usize>,
    /// Run the exact search for rows within the cap that the table lacks.
    #[arg(long)]
    pub solve: bool,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct CacheArgs {
    #[command(subcommand)]
    pub action: CacheAction,
}

#[derive(Debug, Subcommand)]
pub enum CacheAction {
    /// List entries and monotonicity violations.
    Inspect,
    /// Rewrite the file keeping one record per key.
    Compact,
}

/// Parses `a..b` (inclusive) or a single integer.
pub fn parse_range(text: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |s: &str| s.trim().parse::<usize>().map_err(|e| format!("`{s}`: {e}"));
    match text.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err(format!("empty range {a}..{b}"));
            }
            Ok(a..=b)
        }
        None => num(text).map(|v| v..=v),
    }
}

fn parse_pair(text: &str) -> Result<(usize, usize), String> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| format!("expected `l,t`, got `{text}`"))?;
    let num = |s: &str| s.trim().parse::<usize>().map_err(|e| format!("`{s}`: {e}"));
    Ok((num(a)?, num(b)?))
}

/// An error with the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn failure(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_CHECK_FAILED,
            message: message.into(),
        }
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<oracle::TableError> for CliError {
    fn from(e: oracle::TableError) -> Self {
        match e {
            oracle::TableError::Oracle(e) => e.into(),
            e => CliError::failure(e.to_string()),
        }
    }
}

/// What a command printed, and its exit code.
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

fn emit(format: Format, value: &Value, text: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("serialisable") + "\n",
        Format::Text => text(),
    }
}

/// Parses `args` (program name first), runs the command, writes output.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match dispatch(&cfg) {
        Ok(o) => {
            let _ = out.write_all(o.output.as_bytes());
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

pub fn dispatch(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match &cfg.command {
        Command::Construct(a) => cmd_construct(cfg, a),
        Command::Verify(a) => cmd_verify(cfg, a),
        Command::Bounds(a) => cmd_bounds(cfg, a),
        Command::Oracle(a) => cmd_oracle(cfg, a),
        Command::Table(a) => cmd_table(cfg, a),
        Command::Cache(a) => cmd_cache(cfg, a),
    }
}

fn open_table(cfg: &RunConfig) -> Result<ExTable, CliError> {
    Ok(ExTable::open(&cfg.table)?)
}

pub fn cmd_construct(cfg: &RunConfig, a: &ConstructArgs) -> Result<Outcome, CliError> {
    let variant = match a.variant {
        VariantArg::G1 => Variant::G1,
        VariantArg::G2 => Variant::G2,
    };
    let p = ConstructionParams::new(a.l, a.t, a.s, a.x, a.n, variant)?;
    let q = Params::new(a.l as u64, a.t as u64, a.s as u64, a.n as u64);
    let (mut c, formula) = match variant {
        Variant::G1 => (constructions::build_g1(&p)?, bounds::f1(a.x as u64, &q).expect("validated")),
        Variant::G2 => {
            let table = open_table(cfg)?;
            let c = constructions::build_g2_from(&p, &table)?;
            let f2 = bounds::f2(a.x as u64, &q, &ExResolver::strict(&table), bounds::Need::Lower)
                .map_err(|e| CliError::usage(e.to_string()))?;
            (c, f2.value)
        }
    };
    let augmentation = a.augment.then(|| constructions::augment_barrier_to_piece(&mut c));
    let prefix = a.out.clone().unwrap_or_else(|| {
        PathBuf::from(format!(
            "{}_l{}_t{}_s{}_x{}_n{}",
            if variant == Variant::G1 { "g1" } else { "g2" },
            a.l,
            a.t,
            a.s,
            a.x,
            a.n
        ))
    });
    let g6_path = prefix.with_extension("g6");
    let layout_path = prefix.with_extension("layout.json");
    let write = |path: &PathBuf, body: String| {
        std::fs::write(path, body).map_err(|e| CliError::failure(format!("{}: {e}", path.display())))
    };
    write(&g6_path, graph6::encode(&c.graph) + "\n")?;
    let mut layout = c.layout_json();
    if let Some(aug) = &augmentation {
        layout["augmentation"] = json!(aug);
    }
    write(&layout_path, serde_json::to_string_pretty(&layout).expect("serialisable") + "\n")?;
    let report = json!({
        "variant": if variant == Variant::G1 { "g1" } else { "g2" },
        "n": c.graph.order(),
        "edges": c.edge_count(),
        "formula": formula,
        "matches_formula": augmentation.is_some() || c.edge_count() as i128 == formula,
        "augmented_edges": augmentation.as_ref().map(|x| x.added.len()),
        "graph6_file": g6_path,
        "layout_file": layout_path,
    });
    let text = || {
        format!(
            "{} on {} vertices: {} edges (formula {})\nwrote {} and {}\n",
            report["variant"].as_str().unwrap_or_default(),
            c.graph.order(),
            c.edge_count(),
            formula,
            g6_path.display(),
            layout_path.display()
        )
    };
    Ok(Outcome {
        code: EXIT_OK,
        output: emit(cfg.format, &report, text),
    })
}

fn read_input(input: &str) -> Result<String, CliError> {
    if input == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::failure(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(input).map_err(|e| CliError::failure(format!("{input}: {e}")))
    }
}

/// JSON report on one graph for the requested checks.
pub fn verify_report(g: &Graph, klt: Option<(usize, usize)>, s: Option<usize>) -> (bool, Value) {
    let mut ok = true;
    let mut report = json!({ "n": g.order(), "edges": g.edge_count() });
    if let Some((l, t)) = klt {
        let cert = forbidden::contains_klt(g, l, t);
        ok &= cert.is_none();
        report["klt_free"] = json!(cert.is_none());
        report["klt"] = json!({ "l": l, "t": t, "certificate": cert });
    }
    if let Some(s) = s {
        let m = matching::is_matching_bounded(g, s);
        ok &= m.bounded;
        report["matching_bounded"] = json!(m.bounded);
        report["matching"] = json!({ "s": s, "detail": m });
    }
    (ok, report)
}

pub fn cmd_verify(cfg: &RunConfig, a: &VerifyArgs) -> Result<Outcome, CliError> {
    if a.l.is_none() && a.s.is_none() {
        return Err(CliError::usage("nothing to check: give --l/--t and/or --s"));
    }
    let klt = a.l.zip(a.t);
    let text = read_input(&a.input)?;
    let mut all_ok = true;
    let mut reports = Vec::new();
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let g = graph6::decode(line.trim())
            .map_err(|e| CliError::usage(format!("{} line {}: {e}", a.input, i + 1)))?;
        let (ok, r) = verify_report(&g, klt, a.s);
        all_ok &= ok;
        reports.push(r);
    }
    if reports.is_empty() {
        return Err(CliError::usage(format!("{}: no graphs", a.input)));
    }
    let value = if reports.len() == 1 {
        reports[0].clone()
    } else {
        Value::Array(reports.clone())
    };
    let render = || {
        let mut s = String::new();
        for r in &reports {
            let _ = write!(s, "n={} e={}", r["n"], r["edges"]);
            if let Some(f) = r.get("klt_free") {
                let _ = write!(s, " klt_free={f}");
            }
            if let Some(m) = r.get("matching_bounded") {
                let _ = write!(s, " matching_bounded={m} nu={}", r["matching"]["detail"]["matching_number"]);
            }
            s.push('\n');
        }
        s
    };
    Ok(Outcome {
        code: if all_ok { EXIT_OK } else { EXIT_CHECK_FAILED },
        output: emit(cfg.format, &value, render),
    })
}

pub fn cmd_bounds(cfg: &RunConfig, a: &InstanceArgs) -> Result<Outcome, CliError> {
    if a.l < 1 || a.t < a.l {
        return Err(CliError::usage(format!("needs 1 <= l <= t (l = {}, t = {})", a.l, a.t)));
    }
    let table = open_table(cfg)?;
    let resolver = ExResolver {
        exact: Some(&table),
        allow_surrogates: !a.strict,
    };
    let report = bounds::theorem_value(&Params::new(a.l, a.t, a.s, a.n), &resolver);
    let value = serde_json::to_value(&report).expect("serialisable");
    Ok(Outcome {
        code: EXIT_OK,
        output: emit(cfg.format, &value, || report.to_table()),
    })
}

pub fn cmd_oracle(cfg: &RunConfig, a: &OracleArgs) -> Result<Outcome, CliError> {
    let spec = FamilySpec::new(a.forbid_klt, a.forbid_matching)?;
    let search = a.search.config();
    let mut table = if a.no_store { ExTable::in_memory() } else { open_table(cfg)? };
    let mut rows = Vec::new();
    let mut budget_hit = false;
    for n in a.n.clone() {
        let entry = match a.x {
            None => match table.exact(n, &spec) {
                Some(e) => Some(e.clone()),
                None => {
                    let filled = oracle::table_fill(&mut table, [n], &spec, &search)?;
                    filled.into_iter().next()
                }
            },
            Some(x) => match table.get(n, &spec, Some(x)).filter(|e| e.mode == Mode::Exact) {
                Some(e) => Some(e.clone()),
                None => match exact_ex_restricted(n, &spec, x, &search)? {
                    Some(r) => {
                        let e = TableEntry::from_result(&r);
                        table.insert(e.clone())?;
                        Some(e)
                    }
                    None => None,
                },
            },
        };
        budget_hit |= entry.as_ref().is_some_and(|e| e.mode == Mode::LowerOnly);
        rows.push(json!({
            "n": n,
            "spec": spec.to_string(),
            "x": a.x,
            "value": entry.as_ref().map(|e| e.value),
            "mode": entry.as_ref().map(|e| e.mode),
            "witness_graph6": entry.as_ref().map(|e| e.witness_graph6.clone()),
            "node_count": entry.as_ref().map(|e| e.node_count),
        }));
    }
    let value = if rows.len() == 1 { rows[0].clone() } else { Value::Array(rows.clone()) };
    let render = || {
        let mut s = format!("{:<14} {:>4} {:>6} {:>10}\n", "family", "n", "ex", "mode");
        for r in &rows {
            let v = r["value"].as_u64().map(|v| v.to_string()).unwrap_or_else(|| "none".into());
            let m = r["mode"].as_str().unwrap_or("-");
            let _ = writeln!(s, "{:<14} {:>4} {:>6} {:>10}", spec.to_string(), r["n"], v, m);
        }
        s
    };
    Ok(Outcome {
        code: if budget_hit { EXIT_BUDGET } else { EXIT_OK },
        output: emit(cfg.format, &value, render),
    })
}

pub fn cmd_table(cfg: &RunConfig, a: &TableArgs) -> Result<Outcome, CliError> {
    if a.l < 1 || a.t < a.l {
        return Err(CliError::usage(format!("needs 1 <= l <= t (l = {}, t = {})", a.l, a.t)));
    }
    let mut table = open_table(cfg)?;
    let search = a.search.config();
    let mut rows = Vec::new();
    for s in a.s.clone() {
        for n in a.n.clone() {
            let spec = FamilySpec::both(a.l as usize, a.t as usize, s);
            if a.solve && table.exact(n, &spec).is_none() && n <= search.caps.for_spec(&spec) {
                oracle::table_fill(&mut table, [n], &spec, &search)?;
            }
            let resolver = ExResolver::with_surrogates(&table);
            let r = bounds::theorem_value(&Params::new(a.l, a.t, s as u64, n as u64), &resolver);
            let oracle_value = table.exact(n, &spec).map(|e| e.value);
            rows.push(json!({
                "n": n,
                "s": s,
                "lower": r.lower_bound.map(|b| b.value),
                "upper": r.upper_bound.map(|b| b.value),
                "oracle": oracle_value,
                "exact": r.exact.map(|e| e.value),
                "certified_by": r.exact.map(|e| format!("{:?}", e.by)),
                "audit": r.audit,
            }));
        }
    }
    let value = Value::Array(rows.clone());
    let render = || {
        let cell = |v: &Value| if v.is_null() { "-".to_string() } else { v.to_string().trim_matches('"').to_string() };
        let mut s = format!(
            "{:>4} {:>4} {:>8} {:>8} {:>8} {:>8}  {}\n",
            "s", "n", "lower", "upper", "oracle", "exact", "certified by"
        );
        for r in &rows {
            let _ = writeln!(
                s,
                "{:>4} {:>4} {:>8} {:>8} {:>8} {:>8}  {}{}",
                cell(&r["s"]),
                cell(&r["n"]),
                cell(&r["lower"]),
                cell(&r["upper"]),
                cell(&r["oracle"]),
                cell(&r["exact"]),
                cell(&r["certified_by"]),
                if r["audit"].as_array().is_some_and(|a| !a.is_empty()) { "  (audit: see json)" } else { "" }
            );
        }
        s
    };
    Ok(Outcome {
        code: EXIT_OK,
        output: emit(cfg.format, &value, render),
    })
}

pub fn cmd_cache(cfg: &RunConfig, a: &CacheArgs) -> Result<Outcome, CliError> {
    let table = open_table(cfg)?;
    let value = match a.action {
        CacheAction::Inspect => json!({
            "path": cfg.table,
            "entries": table.entries().collect::<Vec<_>>(),
            "monotonicity_violations": table.monotonicity_violations(),
        }),
        CacheAction::Compact => json!({ "path": cfg.table, "records": table.compact()? }),
    };
    let render = || match a.action {
        CacheAction::Inspect => {
            let mut s = format!("{} ({} entries)\n", cfg.table.display(), table.len());
            for e in table.entries() {
                let x = e.x.map(|x| format!(" x={x}")).unwrap_or_default();
                let _ = writeln!(s, "  n={:<3} {:<14}{x} value={} {:?}", e.n, e.spec.to_string(), e.value, e.mode);
            }
            for v in table.monotonicity_violations() {
                let _ = writeln!(s, "  violation: {v}");
            }
            s
        }
        CacheAction::Compact => format!("{}: {} records\n", cfg.table.display(), table.len()),
    };
    Ok(Outcome {
        code: EXIT_OK,
        output: emit(cfg.format, &value, render),
    })
}

/// Convenience for callers holding a search result: the exact value at `n`.
pub fn oracle_value(n: usize, spec: &FamilySpec, cfg: &SearchConfig) -> Result<usize, CliError> {
    let r = exact_ex(n, spec, cfg)?;
    if r.mode == Mode::LowerOnly {
        return Err(CliError {
            code: EXIT_BUDGET,
            message: format!("budget exhausted at n = {n}; best found {}", r.value),
        });
    }
    Ok(r.value)
}
