//! Command-line front end. JSON goes to stdout (or `--out`) with a
//! top-level `"schema": 1`; `--csv` switches to CSV where a table makes sense.
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 usage or input error.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{constants_consistency, torsion_bound, torsion_bound_table, criterion_threshold, reduction_bound};
use crate::error::Error;
use crate::hecke_symbols::{criterion_report_in, sigma_r_set, CriterionReport};
use crate::linalg::{FieldSpec, DEFAULT_SMITH_CAP};
use crate::qexp::ring::parse_rational;
use crate::qexp::{up_matrix_report, verify_relations, LevelCase};
use crate::rel_homology::{invariant_generators, relation_smith_invariants, summarize, AnyPresentation};
use crate::residue_p1::{P1Table, PrimePower};
use crate::winding_paths::{
    chain_is_consistent, check_bound, walk_chain_a, walk_second_chain, BoundCheck, Chain, ChainLabel, StopReason,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "modtors", version, about = "Modular-symbol and Hecke computations behind torsion bounds")]
struct Cli {
    /// Emit CSV instead of JSON.
    #[arg(long, global = true)]
    csv: bool,
    /// Write output to this file (relative paths resolve under $OUTPUT_DIR).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate P^1(Z/p^n) with the sigma and tau permutations.
    P1(P1Args),
    /// Presentation of relative homology of X_0(p^n).
    Homology(HomologyArgs),
    /// Independence of T_1{0,oo}, ..., T_sd{0,oo} over F_l.
    Criterion(CriterionArgs),
    /// Walks avoiding the Hecke obstruction set, and their interval bounds.
    Paths(PathsCmd),
    /// q-expansion operator checks.
    #[command(subcommand)]
    Qexp(QexpCmd),
    /// Closed-form bounds and constants.
    Bounds(BoundsArgs),
}

#[derive(Args, Debug)]
struct PrimePowerArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    n: u32,
}

impl PrimePowerArgs {
    fn get(&self) -> Result<PrimePower, Error> {
        PrimePower::new(self.p, self.n)
    }
}

#[derive(Args, Debug)]
struct P1Args {
    #[command(flatten)]
    pp: PrimePowerArgs,
    /// List every point.
    #[arg(long)]
    points: bool,
}

#[derive(Args, Debug)]
struct HomologyArgs {
    #[command(flatten)]
    pp: PrimePowerArgs,
    /// `Q` or a prime `l` (also `Fl`).
    #[arg(long, default_value = "Q")]
    field: FieldSpec,
    /// Also compute elementary divisors of the relation matrix.
    #[arg(long)]
    smith: bool,
}

#[derive(Args, Debug)]
struct CriterionArgs {
    #[command(flatten)]
    pp: PrimePowerArgs,
    #[arg(long)]
    d: u64,
    #[arg(long, required_unless_present = "all_l_up_to")]
    l: Option<u64>,
    /// Run for every prime l up to this bound instead of a single l.
    #[arg(long)]
    all_l_up_to: Option<u64>,
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
struct PathsCmd {
    #[command(subcommand)]
    sweep: Option<PathsSub>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[arg(long)]
    r: Option<u64>,
    /// Bound parameter D (defaults to r).
    #[arg(long)]
    d: Option<u64>,
    /// Include visited vertices and interval residues.
    #[arg(long)]
    full: bool,
}

#[derive(Subcommand, Debug)]
enum PathsSub {
    /// Run every (p^n, r) of a grid; CSV columns p,n,r,chain,interval_len,bound,pass.
    Sweep {
        /// Prime powers, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [101u64, 343, 1024, 2048])]
        moduli: Vec<u64>,
        #[arg(long, default_value_t = 6)]
        r_max: u64,
    },
}

#[derive(Subcommand, Debug)]
enum QexpCmd {
    /// Check the operator relations on seeded random series.
    VerifyRelations {
        #[arg(long, default_value_t = 200)]
        order: usize,
        #[arg(long, default_value_t = 50)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print U_p on an oldclass with its characteristic polynomial and Jordan data.
    UpMatrix {
        /// `divides` (p | M) or `coprime`.
        #[arg(long)]
        case: LevelCase,
        #[arg(long)]
        k: usize,
        /// Eigenvalue a_p as `n` or `n/d`.
        #[arg(long, allow_hyphen_values = true)]
        ap: String,
        /// eps(p) in {-1, 0, 1}.
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        eps: i64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        weight: u32,
    },
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    d: Option<u64>,
    #[arg(long)]
    l: Option<u64>,
    /// Table of the final bound for d = 1..d-max; CSV columns d,p_ge5,p_eq3,p_eq2.
    #[arg(long)]
    table: bool,
    #[arg(long, default_value_t = 5)]
    d_max: u64,
    /// Check the constants linking the interval estimate to the threshold.
    #[arg(long)]
    constants: bool,
    /// Multiply by l^d - 1 to bound the order before the isogeny step.
    #[arg(long)]
    original_order: bool,
}

/// Rendered command output.
struct Output {
    command: &'static str,
    json: Value,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    failed: bool,
}

impl Output {
    fn new(command: &'static str, json: Value) -> Self {
        Output {
            command,
            json,
            header: Vec::new(),
            rows: Vec::new(),
            failed: false,
        }
    }

    fn table(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.header = header.iter().map(|s| s.to_string()).collect();
        self.rows = rows;
        self
    }

    fn render(&self, csv: bool) -> Result<String, Error> {
        if csv {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::InvalidArgument(e.to_string());
            w.write_record(&self.header).map_err(io)?;
            for r in &self.rows {
                w.write_record(r).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("utf8"))
        } else {
            let doc = json!({
                "schema": SCHEMA_VERSION,
                "command": self.command,
                "result": self.json,
            });
            Ok(serde_json::to_string_pretty(&doc).expect("serializable") + "\n")
        }
    }
}

fn to_json(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn s(v: impl ToString) -> String {
    v.to_string()
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return if code == 0 { 0 } else { 2 };
        }
    };
    let result = dispatch(&cli.command).and_then(|o| Ok((o.render(cli.csv)?, o.failed)));
    let (text, failed) = match result {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    match &cli.out {
        Some(path) => {
            let path = resolve_out(path);
            if let Err(e) = std::fs::write(&path, text) {
                let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => {
            let _ = out.write_all(text.as_bytes());
        }
    }
    if failed {
        1
    } else {
        0
    }
}

fn resolve_out(path: &std::path::Path) -> PathBuf {
    match std::env::var_os("OUTPUT_DIR") {
        Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn smith_cap() -> usize {
    std::env::var("SMITH_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_SMITH_CAP)
}

fn dispatch(cmd: &Command) -> Result<Output, Error> {
    match cmd {
        Command::P1(a) => p1(a),
        Command::Homology(a) => homology(a),
        Command::Criterion(a) => criterion(a),
        Command::Paths(PathsCmd { sweep: Some(PathsSub::Sweep { moduli, r_max }), .. }) => sweep(moduli, *r_max),
        Command::Paths(a) => paths(a),
        Command::Qexp(QexpCmd::VerifyRelations { order, trials, seed }) => {
            let rep = verify_relations(*order, *trials, *seed)?;
            let rows = rep
                .relations
                .iter()
                .map(|r| vec![r.relation.clone(), s(r.checked), s(r.passed), s(r.min_compared_order), s(r.pass)])
                .collect();
            let mut o = Output::new("qexp verify-relations", to_json(&rep))
                .table(&["relation", "checked", "passed", "min_compared_order", "pass"], rows);
            o.failed = !rep.all_pass;
            Ok(o)
        }
        Command::Qexp(QexpCmd::UpMatrix { case, k, ap, eps, p, weight }) => {
            let a: BigRational =
                parse_rational(ap).ok_or_else(|| Error::InvalidArgument(format!("bad rational '{ap}'")))?;
            if !(-1..=1).contains(eps) {
                return Err(Error::InvalidArgument("eps must be -1, 0 or 1".into()));
            }
            let rep = up_matrix_report(*case, *k, a, *eps, *p, *weight)?;
            let rows = rep.matrix.clone();
            let header: Vec<String> = (0..rows.len()).map(|j| format!("col{j}")).collect();
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let mut o = Output::new("qexp up-matrix", to_json(&rep)).table(&header, rows);
            o.failed = !rep.pass();
            Ok(o)
        }
        Command::Bounds(a) => bounds(a),
    }
}

fn p1(a: &P1Args) -> Result<Output, Error> {
    let pp = a.pp.get()?;
    let table = P1Table::build(pp)?;
    let rows: Vec<Vec<String>> = (0..table.len())
        .map(|i| {
            let pt = table.point(i);
            let (w, t) = pt.pair(&pp);
            vec![s(i), s(pt), s(w), s(t), s(table.act_sigma(i)), s(table.act_tau(i))]
        })
        .collect();
    let mut json = json!({
        "p": pp.p(),
        "n": pp.n(),
        "modulus": pp.modulus(),
        "size": table.len(),
    });
    if a.points {
        json["points"] = Value::Array(
            rows.iter()
                .map(|r| json!({"index": r[0], "point": r[1], "w": r[2], "t": r[3], "sigma": r[4], "tau": r[5]}))
                .collect(),
        );
    }
    Ok(Output::new("p1", json).table(&["index", "point", "w", "t", "sigma", "tau"], rows))
}

fn homology(a: &HomologyArgs) -> Result<Output, Error> {
    let table = P1Table::build(a.pp.get()?)?;
    let pres = AnyPresentation::build(&table, a.field)?;
    let summary = summarize(&table, &pres);
    let mut json = to_json(&summary);
    let mut row = vec![
        s(summary.p),
        s(summary.n),
        s(summary.field),
        s(summary.p1_size),
        s(summary.relation_rank),
        s(summary.quotient_dim),
    ];
    let mut header = vec!["p", "n", "field", "p1_size", "relation_rank", "quotient_dim"];
    if a.smith {
        let inv = relation_smith_invariants(&invariant_generators(&table), smith_cap())?;
        let nontrivial: Vec<String> = inv.iter().filter(|d| **d != 1.into()).map(s).collect();
        json["smith"] = json!({
            "nonzero_invariants": inv.len(),
            "non_unit_invariants": nontrivial,
            "torsion_free": nontrivial.is_empty(),
        });
        header.extend(["nonzero_invariants", "torsion_free"]);
        row.extend([s(inv.len()), s(nontrivial.is_empty())]);
    }
    Ok(Output::new("homology", json).table(&header, vec![row]))
}

fn criterion(a: &CriterionArgs) -> Result<Output, Error> {
    let table = P1Table::build(a.pp.get()?)?;
    let ls: Vec<u64> = match (a.all_l_up_to, a.l) {
        (Some(b), _) => crate::arith::primes_up_to(b),
        (None, Some(l)) => vec![l],
        (None, None) => unreachable!("clap enforces one of --l / --all-l-up-to"),
    };
    let mut reports: Vec<CriterionReport> = Vec::new();
    for l in ls {
        let pres = AnyPresentation::build(&table, FieldSpec::prime(l)?)?;
        reports.push(criterion_report_in(&pres, &table, a.d)?);
    }
    let rows = reports
        .iter()
        .map(|r| {
            vec![
                s(r.p),
                s(r.n),
                s(r.d),
                s(r.l),
                s(r.s),
                s(r.required_rank),
                s(r.achieved_rank),
                s(r.pass),
                r.threshold.clone(),
                s(r.threshold_satisfied),
                s(r.l_equals_p),
            ]
        })
        .collect();
    // Above the threshold independence is guaranteed for l != p.
    let failed = reports.iter().any(|r| r.threshold_satisfied && !r.l_equals_p && !r.pass);
    let json = if reports.len() == 1 { to_json(&reports[0]) } else { to_json(&reports) };
    let mut o = Output::new("criterion", json).table(
        &[
            "p",
            "n",
            "d",
            "l",
            "s",
            "required_rank",
            "achieved_rank",
            "pass",
            "threshold",
            "threshold_satisfied",
            "l_equals_p",
        ],
        rows,
    );
    o.failed = failed;
    Ok(o)
}

/// One walk with its bound check.
#[derive(Debug, Serialize)]
pub struct ChainOutcome {
    pub chain: ChainLabel,
    pub start: usize,
    pub stop: StopReason,
    pub interval_len: u64,
    pub interval_first: Option<u64>,
    pub interval_last: Option<u64>,
    pub visited_len: usize,
    pub check: BoundCheck,
    pub consistent: bool,
    /// Whether the bound is claimed for this instance.
    pub asserted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub visited: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<Vec<u64>>,
}

impl ChainOutcome {
    pub fn ok(&self) -> bool {
        !self.asserted || (self.check.pass && self.consistent)
    }
}

/// Both walks for `(p^n, r)` checked against the bounds with parameter `d`.
/// The second walk at `r = 1` starts next to an obstruction and is not
/// asserted.
pub fn run_chains(table: &P1Table, r: u64, d: u64, full: bool) -> Result<Vec<ChainOutcome>, Error> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    let sigma = sigma_r_set(r, table);
    let chains: [Chain; 2] = [walk_chain_a(table, &sigma)?, walk_second_chain(table, &sigma)?];
    chains
        .into_iter()
        .map(|c| {
            let check = check_bound(&c, table.prime_power(), d)?;
            let degenerate = c.label != ChainLabel::A && r == 1;
            Ok(ChainOutcome {
                chain: c.label,
                start: c.start,
                stop: c.stop,
                interval_len: c.interval_len(),
                interval_first: c.interval.first().copied(),
                interval_last: c.interval.last().copied(),
                visited_len: c.visited.len(),
                consistent: chain_is_consistent(&c, table, &sigma),
                asserted: check.in_regime && !degenerate,
                check,
                visited: full.then(|| c.visited.clone()),
                interval: full.then(|| c.interval.clone()),
            })
        })
        .collect()
}

fn paths(a: &PathsCmd) -> Result<Output, Error> {
    let (Some(p), Some(r)) = (a.p, a.r) else {
        return Err(Error::InvalidArgument("paths needs --p and --r, or the sweep subcommand".into()));
    };
    let pp = PrimePower::new(p, a.n)?;
    let table = P1Table::build(pp)?;
    let d = a.d.unwrap_or(r);
    let outcomes = run_chains(&table, r, d, a.full)?;
    let rows = outcomes
        .iter()
        .map(|o| {
            vec![
                s(pp.p()),
                s(pp.n()),
                s(r),
                s(o.chain),
                s(o.interval_len),
                o.check.bound.clone(),
                s(o.check.pass),
            ]
        })
        .collect();
    let failed = outcomes.iter().any(|o| !o.ok());
    let json = json!({
        "p": pp.p(),
        "n": pp.n(),
        "r": r,
        "d": d,
        "obstruction_size": sigma_r_set(r, &table).len(),
        "chains": to_json(&outcomes),
    });
    let mut o = Output::new("paths", json)
        .table(&["p", "n", "r", "chain", "interval_len", "bound", "pass"], rows);
    o.failed = failed;
    Ok(o)
}

fn sweep(moduli: &[u64], r_max: u64) -> Result<Output, Error> {
    let mut rows = Vec::new();
    let mut records = Vec::new();
    let mut failed = false;
    let started = Instant::now();
    for &q in moduli {
        let pp = PrimePower::from_modulus(q)?;
        let table = P1Table::build(pp)?;
        for r in 1..=r_max {
            for o in run_chains(&table, r, r, false)? {
                failed |= !o.ok();
                let pass = if o.asserted { s(o.check.pass && o.consistent) } else { "skip".into() };
                rows.push(vec![
                    s(pp.p()),
                    s(pp.n()),
                    s(r),
                    s(o.chain),
                    s(o.interval_len),
                    o.check.bound.clone(),
                    pass.clone(),
                ]);
                records.push(json!({
                    "p": pp.p(), "n": pp.n(), "r": r, "chain": o.chain,
                    "interval_len": o.interval_len, "bound": o.check.bound, "pass": pass,
                }));
            }
        }
    }
    let json = json!({ "rows": records, "elapsed_ms": started.elapsed().as_millis() as u64 });
    let mut o = Output::new("paths sweep", json)
        .table(&["p", "n", "r", "chain", "interval_len", "bound", "pass"], rows);
    o.failed = failed;
    Ok(o)
}

fn bounds(a: &BoundsArgs) -> Result<Output, Error> {
    if a.table {
        let rows = torsion_bound_table(a.d_max, a.original_order)?;
        let csv_rows = rows
            .iter()
            .map(|r| vec![s(r.d), r.p_ge5.clone(), r.p_eq3.clone(), r.p_eq2.clone()])
            .collect();
        return Ok(Output::new("bounds", json!({ "table": to_json(&rows) }))
            .table(&["d", "p_ge5", "p_eq3", "p_eq2"], csv_rows));
    }
    let mut json = json!({});
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut failed = false;
    if a.constants {
        let rep = constants_consistency();
        failed |= !rep.consistent;
        for c in &rep.checks {
            rows.push(vec![format!("constants: {}", c.name), s(c.holds)]);
        }
        json["constants"] = to_json(&rep);
    }
    if let (Some(p), Some(d)) = (a.p, a.d) {
        let rep = torsion_bound(p, d, a.original_order)?;
        let th = criterion_threshold(p, d)?;
        rows.push(vec!["final_bound".into(), rep.value.clone()]);
        rows.push(vec!["criterion_threshold".into(), th.threshold.to_string()]);
        json["final_bound"] = to_json(&rep);
        json["criterion_threshold"] = to_json(&th);
    }
    if let (Some(l), Some(d)) = (a.l, a.d) {
        let rep = reduction_bound(l, d)?;
        rows.push(vec!["reduction_bound".into(), rep.value.clone()]);
        for v in &rep.sub_values {
            rows.push(vec![format!("reduction_bound: {}", v.tag), v.value.clone()]);
        }
        json["reduction_bound"] = to_json(&rep);
    }
    if rows.is_empty() {
        return Err(Error::InvalidArgument(
            "bounds needs --table, --constants, --p with --d, or --l with --d".into(),
        ));
    }
    let mut o = Output::new("bounds", json).table(&["quantity", "value"], rows);
    o.failed = failed;
    Ok(o)
}
