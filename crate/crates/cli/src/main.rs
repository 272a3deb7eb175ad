//! `vlab`: run vector-lattice constructions and checkers and emit
//! recheckable JSON reports.

mod commands;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;
use vlab::finlat::{FinLattice, FinPoset};
use vlab::ideals::{self, IdealSpec, Sublattice};
use vlab::props;
use vlab::rational::{int, parse_rational};
use vlab::report::Report;
use vlab::{Error, PLFun, PlOp, Result, Space};

#[derive(Parser)]
#[command(name = "vlab", version, about = "Exact vector-lattice laboratory")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Space as JSON, a JSON file, or `a:b,c:d`. Defaults to the space of
    /// the first JSON function, else [-1,1].
    #[arg(long, global = true, allow_hyphen_values = true)]
    space: Option<String>,
    /// Function: JSON, file, or catalog name (tplus, t, abs, one, const:c).
    #[arg(long = "fn", global = true)]
    fns: Vec<String>,
    /// Ideal: JSON, file, `E(<region>)` or `I(<function>)`.
    #[arg(long, global = true)]
    ideal: Option<String>,
    /// Principal ideal generated by a function.
    #[arg(long, global = true)]
    principal: Option<String>,
    /// Region operand, as interval text or JSON; repeatable.
    #[arg(long = "region", global = true)]
    regions: Vec<String>,
    #[arg(long, global = true)]
    k: Option<String>,
    #[arg(long, global = true)]
    u: Option<String>,
    #[arg(long, global = true)]
    v: Option<String>,
    /// Evaluation point.
    #[arg(long, global = true, allow_hyphen_values = true)]
    at: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    scalar: Option<String>,
    /// full | even-near-zero
    #[arg(long, global = true, default_value = "full")]
    sublattice: String,
    /// Increasing sequence: JSON, file, `exhaust:<region>` or `multiples:<fn>`.
    #[arg(long, global = true)]
    seq: Option<String>,
    /// Strictly positive unit for abvg; defaults to 1.
    #[arg(long, global = true)]
    unit: Option<String>,
    #[arg(long, global = true, default_value_t = 20)]
    terms: usize,
    /// Bump-family rates as `r:s,...`.
    #[arg(long, global = true)]
    grid: Option<String>,
    #[arg(long, global = true, default_value_t = 20)]
    families: usize,
    #[arg(long, global = true, default_value_t = 20)]
    samples: usize,
    /// Lattice by name (chain:K, boolean:K, divisors:M, n5, m3,
    /// downsets:{chain|antichain|fence}:K) or poset file.
    #[arg(long, global = true)]
    lattice: Option<String>,
    /// Poset as `{n, leq, labels}` JSON or file.
    #[arg(long, global = true)]
    poset: Option<String>,
    #[arg(long, global = true)]
    divisors: Option<u64>,
    #[arg(long, global = true)]
    boolean: Option<usize>,
    #[arg(long, global = true)]
    chain: Option<usize>,
    /// Lattice element label.
    #[arg(long, global = true)]
    element: Option<String>,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = ideals::DEFAULT_CUTOFF)]
    cutoff: usize,
    /// Re-verify every certificate of the report from its JSON form.
    #[arg(long, global = true)]
    recheck: bool,
    /// Print the full report instead of the result line.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// eval, add, sub, scale, join, meet, abs, pos, neg
    Fn { op: String },
    /// union, intersect, difference, complement, interior, closure, boundary,
    /// regularization, ro-join, is-open, is-closed, is-clopen,
    /// is-regular-open, is-dense, is-empty
    Region { op: String },
    Ideal {
        #[arg(value_enum)]
        op: IdealOp,
    },
    Urysohn {
        #[arg(value_enum)]
        op: UrysohnOp,
    },
    /// Disjoint telescoping approximation along an increasing sequence.
    Abvg,
    Check {
        #[arg(value_enum)]
        what: CheckWhat,
    },
    Lattice {
        #[arg(value_enum)]
        op: LatticeOp,
    },
    /// Re-verify a saved report.
    Recheck { path: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum IdealOp {
    Member,
    Support,
    Complement,
    BandStatus,
    Projection,
}

#[derive(Clone, Copy, ValueEnum)]
enum UrysohnOp {
    Coincide,
    Split,
    Dsi,
    Od,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckWhat {
    Main,
    Infd,
    Njo,
    Selfmaj,
    Glivenko,
    IdealLattice,
    Principal,
}

#[derive(Clone, Copy, ValueEnum)]
enum LatticeOp {
    Validate,
    Distributive,
    Pseudo,
    Skeleton,
    Complemented,
}

fn need<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str> {
    v.as_deref()
        .ok_or_else(|| Error::PreconditionViolated(format!("missing --{flag}")))
}

impl Opts {
    fn space(&self) -> Result<Arc<Space>> {
        if let Some(s) = &self.space {
            return input::space(s);
        }
        for f in self.fns.iter().chain(self.principal.iter()) {
            if let Some(s) = input::space_of_function(f)? {
                return Ok(s);
            }
        }
        Ok(commands::default_space())
    }

    fn functions(&self, space: &Arc<Space>) -> Result<Vec<PLFun>> {
        self.fns.iter().map(|f| input::function(space, f)).collect()
    }

    fn function(&self, space: &Arc<Space>) -> Result<PLFun> {
        let f = self
            .fns
            .first()
            .ok_or_else(|| Error::PreconditionViolated("missing --fn".into()))?;
        input::function(space, f)
    }

    fn region(&self, space: &Arc<Space>, v: &Option<String>, flag: &str) -> Result<vlab::Region> {
        input::region(space, need(v, flag)?)
    }

    fn ideal(&self, space: &Arc<Space>) -> Result<IdealSpec> {
        match (&self.ideal, &self.principal) {
            (Some(i), _) => input::ideal(space, i),
            (None, Some(p)) => IdealSpec::principal(input::function(space, p)?),
            (None, None) => Err(Error::PreconditionViolated("missing --ideal or --principal".into())),
        }
    }

    fn sublattice(&self) -> Result<Sublattice> {
        Sublattice::parse(&self.sublattice)
            .ok_or_else(|| Error::PreconditionViolated(format!("unknown sublattice {:?}", self.sublattice)))
    }

    fn lattice(&self) -> Result<FinLattice> {
        if let Some(m) = self.divisors {
            return FinLattice::divisors(m);
        }
        if let Some(k) = self.boolean {
            return FinLattice::boolean(k);
        }
        if let Some(k) = self.chain {
            return FinLattice::chain(k);
        }
        if let Some(p) = &self.poset {
            return FinLattice::from_poset(input::poset(p)?);
        }
        input::lattice(need(&self.lattice, "lattice")?)
    }

    fn poset(&self) -> Result<FinPoset> {
        match &self.poset {
            Some(p) => input::poset(p),
            None => Ok(self.lattice()?.poset().clone()),
        }
    }
}

/// A report plus the line printed for it.
struct Outcome {
    report: Report,
    line: String,
}

fn result_line(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn certificate_lines(report: &Report) -> String {
    let mut out = String::new();
    for c in &report.certificates {
        let mark = if c.passed { "pass" } else { "FAIL" };
        out.push_str(&format!("[{mark}] {}: {}\n", c.name, c.claim));
    }
    let status = if report.passed() { "pass" } else { "fail" };
    let result = &report.verdict.result;
    let summary = result.get("verdict").map(result_line).or_else(|| {
        result.get("witness").and_then(Value::as_array).map(|w| {
            let names: Vec<String> = w.iter().map(result_line).collect();
            format!("witness {}", names.join(", "))
        })
    });
    match summary {
        Some(s) => out.push_str(&format!("verdict: {status} ({s})")),
        None => out.push_str(&format!("verdict: {status}")),
    }
    out
}

fn plain(report: Report) -> Outcome {
    let line = result_line(&report.verdict.result);
    Outcome { report, line }
}

fn checked(report: Report) -> Outcome {
    let line = certificate_lines(&report);
    Outcome { report, line }
}

fn run(cmd: &Cmd, o: &Opts) -> Result<Outcome> {
    let cutoff = o.cutoff;
    match cmd {
        Cmd::Fn { op } => {
            let space = o.space()?;
            if op == "eval" {
                let x = parse_rational(need(&o.at, "at")?)?;
                return Ok(plain(commands::fn_eval(&o.function(&space)?, &x)?));
            }
            let pl_op = PlOp::parse(op)
                .ok_or_else(|| Error::PreconditionViolated(format!("unknown fn operation {op:?}")))?;
            let scalar = o.scalar.as_deref().map(parse_rational).transpose()?;
            Ok(plain(commands::fn_op(pl_op, &o.functions(&space)?, scalar.as_ref())?))
        }
        Cmd::Region { op } => {
            let space = o.space()?;
            let regions = o
                .regions
                .iter()
                .map(|r| input::region(&space, r))
                .collect::<Result<Vec<_>>>()?;
            Ok(plain(commands::region(op, &regions)?))
        }
        Cmd::Ideal { op } => {
            let space = o.space()?;
            let h = o.ideal(&space)?;
            h.validate()?;
            let report = match op {
                IdealOp::Member => commands::ideal_member(&h, o.sublattice()?, &o.function(&space)?, cutoff)?,
                IdealOp::Support => commands::ideal_support(&h, cutoff)?,
                IdealOp::Complement => commands::ideal_complement(&h)?,
                IdealOp::BandStatus => h.band_status_report(cutoff),
                IdealOp::Projection => commands::ideal_projection(&h, &o.function(&space)?, cutoff)?,
            };
            Ok(plain(report))
        }
        Cmd::Urysohn { op } => {
            let space = o.space()?;
            let f = o.function(&space)?;
            let report = match op {
                UrysohnOp::Coincide => {
                    commands::urysohn_coincide(&f, &o.region(&space, &o.k, "k")?, &o.region(&space, &o.u, "u")?)?
                }
                UrysohnOp::Split => {
                    commands::urysohn_split(&f, &o.region(&space, &o.u, "u")?, &o.region(&space, &o.v, "v")?)?
                }
                UrysohnOp::Dsi => commands::urysohn_dsi(&o.ideal(&space)?, &o.region(&space, &o.k, "k")?, &f, cutoff)?,
                UrysohnOp::Od => commands::urysohn_od(&f, &o.region(&space, &o.u, "u")?)?,
            };
            Ok(plain(report))
        }
        Cmd::Abvg => {
            let space = o.space()?;
            let f = o.function(&space)?;
            let seq = input::sequence(&space, need(&o.seq, "seq")?)?;
            let unit = match &o.unit {
                Some(u) => input::function(&space, u)?,
                None => PLFun::constant(&space, int(1)),
            };
            Ok(checked(commands::abvg(&f, &seq, &unit, o.terms)?))
        }
        Cmd::Check { what } => {
            let report = match what {
                CheckWhat::Main => {
                    let grid = match &o.grid {
                        Some(g) => props::parse_grid(g)?,
                        None => props::default_grid(),
                    };
                    props::theorem_main_check(&o.ideal(&o.space()?)?, &grid)?
                }
                CheckWhat::Infd => props::infd_witness(&o.ideal(&o.space()?)?, o.families, o.seed)?,
                CheckWhat::Njo => props::njo_counterexample()?,
                CheckWhat::Selfmaj => {
                    let space = o.space()?;
                    let e = match &o.principal {
                        Some(p) => input::function(&space, p)?,
                        None => o.function(&space)?,
                    };
                    props::self_majorizing_report(&e, o.samples, o.seed, cutoff)?
                }
                CheckWhat::Glivenko => o.lattice()?.glivenko_check()?,
                CheckWhat::IdealLattice => o.lattice()?.ideal_lattice_check()?,
                CheckWhat::Principal => {
                    let space = o.space()?;
                    let fs = o.functions(&space)?;
                    if fs.len() != 2 {
                        return Err(Error::PreconditionViolated("check principal takes two --fn".into()));
                    }
                    ideals::principal_identities_check(&fs[0], &fs[1], o.samples, o.seed)?
                }
            };
            Ok(checked(report))
        }
        Cmd::Lattice { op } => {
            let report = match op {
                LatticeOp::Validate => FinLattice::validate_report(&o.poset()?),
                LatticeOp::Distributive => o.lattice()?.distributive_report(),
                LatticeOp::Pseudo => o.lattice()?.pseudo_report()?,
                LatticeOp::Skeleton => o.lattice()?.skeleton_report()?,
                LatticeOp::Complemented => o.lattice()?.complemented_report()?,
            };
            let line = match (op, &o.element) {
                (LatticeOp::Pseudo, Some(el)) => report
                    .verdict
                    .result
                    .get(el)
                    .map(result_line)
                    .ok_or_else(|| Error::UnknownElement(el.clone()))?,
                _ => result_line(&report.verdict.result),
            };
            Ok(Outcome { report, line })
        }
        Cmd::Recheck { path } => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Json(format!("{}: {e}", path.display())))?;
            let report: Report =
                serde_json::from_str(&text).map_err(|e| Error::Json(format!("{}: {e}", path.display())))?;
            Ok(Outcome { line: String::new(), report })
        }
    }
}

/// Re-verifies the report after a round trip through its JSON text.
fn recheck(report: &Report) -> Result<bool> {
    let text = report.to_json_string();
    let parsed: Report = serde_json::from_str(&text)?;
    let outcome = parsed.recheck();
    for m in &outcome.mismatches {
        eprintln!("recheck: {m}");
    }
    if !outcome.verdict_matches {
        eprintln!("recheck: verdict does not follow from the certificates");
    }
    eprintln!(
        "recheck: {} ({} certificates, {} facts)",
        if outcome.ok() { "confirmed" } else { "MISMATCH" },
        outcome.certificates,
        outcome.evidence
    );
    Ok(outcome.ok())
}

/// Writes a line to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli.cmd, &cli.opts) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let is_recheck = matches!(cli.cmd, Cmd::Recheck { .. });
    let text = outcome.report.to_json_string();
    if let Some(path) = &cli.opts.out {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if cli.opts.json {
        emit(&text);
    } else if !is_recheck {
        emit(&outcome.line);
    }
    let mut ok = outcome.report.passed();
    if cli.opts.recheck || is_recheck {
        match recheck(&outcome.report) {
            Ok(confirmed) => ok &= confirmed,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
