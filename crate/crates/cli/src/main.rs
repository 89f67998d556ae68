//! `ybx`: batch interface to the brace and cycle-set library.
//!
//! Exit codes: 0 success, 1 domain error, 2 I/O or parse error,
//! 3 input is not a multipermutation solution.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use ybx::classify::{enumerate_order, squarefree_enumerate, to_csv};
use ybx::io::{BraceJson, CycleSetJson, Document, Object, SolutionJson};
use ybx::oracle::{census, cross_validate, CROSS_VALIDATE_BOUND};
use ybx::{classify, CycleSet, LeftBrace, ZGroupBraceSpec};

#[derive(Parser)]
#[command(name = "ybx", version, about = "Left braces, cycle sets and involutive Yang-Baxter solutions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the result here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Report timings on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check a brace, cycle set, solution or spec file.
    Validate { file: PathBuf },
    /// Emit a brace as JSON.
    BuildBrace {
        /// B(p,k,t) given as `p,k,t`.
        #[arg(long, value_name = "P,K,T", conflicts_with_all = ["trivial", "spec"])]
        bpkt: Option<String>,
        /// Trivial brace Z/n.
        #[arg(long, value_name = "N", conflicts_with = "spec")]
        trivial: Option<usize>,
        /// Brace of a structured spec file.
        #[arg(long, value_name = "FILE")]
        spec: Option<PathBuf>,
    },
    /// Emit the cycle set of a brace or spec (decomposable, or uniconnected
    /// at `--g`), or convert a solution.
    BuildCycleset {
        file: PathBuf,
        /// Base point for the uniconnected cycle set.
        #[arg(long)]
        g: Option<usize>,
        /// Emit the associated solution instead.
        #[arg(long)]
        solution: bool,
    },
    /// Classification table of all uniconnected cycle sets of an odd order.
    Enumerate {
        #[arg(long)]
        order: u64,
        #[arg(long)]
        square_free: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Multipermutation level from the retraction tower.
    Mpl {
        file: PathBuf,
        /// Also evaluate the closed formula (spec inputs) and require equality.
        #[arg(long)]
        formula: bool,
    },
    /// Retraction of a cycle set or solution, or its whole tower.
    Retract {
        file: PathBuf,
        #[arg(long)]
        tower: bool,
    },
    /// Isomorphism test between two braces or two cycle sets.
    Iso { first: PathBuf, second: PathBuf },
    /// Exhaustive census of all cycle sets on at most four points.
    Census {
        #[arg(long)]
        n: usize,
        /// Shuffle the search order with this seed.
        #[arg(long, value_name = "SEED")]
        seed_order: Option<u64>,
    },
    /// Check every closed formula against search on all specs in an order range.
    CrossValidate {
        #[arg(long, default_value_t = 1)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
}

enum Failure {
    Domain(String),
    Io(String),
    NotMultipermutation(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Io(_) => 2,
            Failure::NotMultipermutation(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Domain(m) | Failure::Io(m) | Failure::NotMultipermutation(m) => m,
        }
    }
}

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

type Outcome = Result<String, Failure>;

fn read_document(path: &Path) -> Result<Document, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Document::parse(&text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn read_object(path: &Path) -> Result<Object, Failure> {
    read_document(path)?.validate().map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn to_line(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

fn brace_of(object: Object) -> Result<LeftBrace, Failure> {
    match object {
        Object::Brace(b) => Ok(b),
        Object::Spec(s) => s.build().map_err(domain),
        other => Err(Failure::Domain(format!("expected a brace or spec, found a {}", kind(&other)))),
    }
}

fn cycle_set_of(object: Object) -> Result<CycleSet, Failure> {
    match object {
        Object::CycleSet(x) => Ok(x),
        Object::Solution(s) => Ok(CycleSet::from_solution(&s)),
        other => Err(Failure::Domain(format!("expected a cycle set or solution, found a {}", kind(&other)))),
    }
}

fn kind(object: &Object) -> &'static str {
    match object {
        Object::Brace(_) => "brace",
        Object::CycleSet(_) => "cycle set",
        Object::Solution(_) => "solution",
        Object::Spec(_) => "spec",
    }
}

fn cmd_validate(file: &Path) -> Outcome {
    let doc = read_document(file)?;
    let object = doc.validate().map_err(|e| Failure::Domain(format!("invalid {}: {e}", doc.kind())))?;
    let size = match &object {
        Object::Brace(b) => b.order() as u64,
        Object::CycleSet(x) => x.size() as u64,
        Object::Solution(s) => s.size() as u64,
        Object::Spec(s) => s.order(),
    };
    Ok(format!("valid {} of size {size}\n", doc.kind()))
}

fn parse_bpkt(text: &str) -> Result<(u64, u32, u32), Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || Failure::Io(format!("--bpkt expects p,k,t, got {text:?}"));
    let [p, k, t] = parts.as_slice() else { return Err(bad()) };
    Ok((p.parse().map_err(|_| bad())?, k.parse().map_err(|_| bad())?, t.parse().map_err(|_| bad())?))
}

fn cmd_build_brace(bpkt: Option<&str>, trivial: Option<usize>, spec: Option<&Path>) -> Outcome {
    let brace = match (bpkt, trivial, spec) {
        (Some(text), None, None) => {
            let (p, k, t) = parse_bpkt(text)?;
            LeftBrace::bpkt(p, k, t).map_err(domain)?
        }
        (None, Some(n), None) => {
            if n == 0 {
                return Err(Failure::Domain("a brace needs at least one element".into()));
            }
            LeftBrace::trivial(n)
        }
        (None, None, Some(path)) => match read_object(path)? {
            Object::Spec(s) => s.build().map_err(domain)?,
            other => return Err(Failure::Domain(format!("expected a spec, found a {}", kind(&other)))),
        },
        _ => return Err(Failure::Io("give exactly one of --bpkt, --trivial, --spec".into())),
    };
    Ok(to_line(&BraceJson::from(&brace)))
}

fn cmd_build_cycleset(file: &Path, g: Option<usize>, as_solution: bool) -> Outcome {
    let set = match read_object(file)? {
        Object::Solution(s) => CycleSet::from_solution(&s),
        Object::CycleSet(x) => x,
        object => {
            let brace = brace_of(object)?;
            match g {
                Some(g) => CycleSet::from_brace_uniconnected(&brace, g).map_err(domain)?,
                None => CycleSet::from_brace_decomposable(&brace),
            }
        }
    };
    Ok(if as_solution { to_line(&SolutionJson::from(&set.to_solution())) } else { to_line(&CycleSetJson::from(&set)) })
}

fn cmd_enumerate(order: u64, square_free: bool, format: Format) -> Outcome {
    let families = if square_free { squarefree_enumerate(order) } else { enumerate_order(order) }.map_err(domain)?;
    Ok(match format {
        Format::Csv => to_csv(&families),
        Format::Json => to_line(&families),
    })
}

fn cmd_mpl(file: &Path, formula: bool) -> Outcome {
    let object = read_object(file)?;
    let spec = match &object {
        Object::Spec(s) => Some(s.clone()),
        _ => None,
    };
    let level = match object {
        Object::Brace(b) => b.mpl(),
        Object::Spec(s) => s.build().map_err(domain)?.mpl(),
        other => cycle_set_of(other)?.mpl(),
    };
    let level = level.ok_or_else(|| Failure::NotMultipermutation("not a multipermutation solution".into()))?;
    if !formula {
        return Ok(format!("{level}\n"));
    }
    let spec: ZGroupBraceSpec = spec.ok_or_else(|| Failure::Domain("--formula needs a spec input".into()))?;
    let closed = spec.mpl_formula().map_err(domain)?;
    if closed != level {
        return Err(Failure::Domain(format!("tower gives {level} but the formula gives {closed}")));
    }
    Ok(format!("{level}\nformula {closed}\n"))
}

fn cmd_retract(file: &Path, tower: bool) -> Outcome {
    let set = cycle_set_of(read_object(file)?)?;
    if tower {
        let t = set.retraction_tower();
        return Ok(to_line(&json!({
            "sizes": t.sizes(),
            "stages": t.stages,
            "mpl": t.mpl(),
        })));
    }
    Ok(to_line(&CycleSetJson::from(&set.retraction())))
}

fn cmd_iso(first: &Path, second: &Path) -> Outcome {
    let (a, b) = (read_object(first)?, read_object(second)?);
    let map = match (a, b) {
        (Object::CycleSet(x), Object::CycleSet(y)) => x.find_isomorphism(&y).map_err(domain)?,
        (a @ (Object::Brace(_) | Object::Spec(_)), b @ (Object::Brace(_) | Object::Spec(_))) => {
            brace_of(a)?.find_isomorphism(&brace_of(b)?).map_err(domain)?
        }
        (a, b) => {
            let (x, y) = (cycle_set_of(a)?, cycle_set_of(b)?);
            x.find_isomorphism(&y).map_err(domain)?
        }
    };
    let value: Value = match map {
        Some(p) => json!({ "isomorphic": true, "map": p.images() }),
        None => json!({ "isomorphic": false }),
    };
    Ok(to_line(&value))
}

fn cmd_census(n: usize, seed: Option<u64>) -> Outcome {
    Ok(to_line(&census(n, seed).map_err(domain)?))
}

fn cmd_cross_validate(from: u64, to: u64) -> Outcome {
    if to > CROSS_VALIDATE_BOUND {
        return Err(Failure::Domain(format!("upper bound {to} exceeds {CROSS_VALIDATE_BOUND}")));
    }
    let mut out = String::new();
    let mut failures = 0;
    for n in (from.max(1)..=to).filter(|n| n % 2 == 1) {
        for spec in classify::all_specs(n).map_err(domain)? {
            let report = cross_validate(&spec).map_err(domain)?;
            if !report.all_pass() {
                failures += 1;
            }
            out.push_str(&to_line(&json!({ "spec": spec, "report": report })));
        }
    }
    if failures > 0 {
        print!("{out}");
        return Err(Failure::Domain(format!("{failures} spec(s) failed cross-validation")));
    }
    Ok(out)
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("YBX_THREADS") else { return Ok(()) };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Io(format!("YBX_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(domain)
}

fn run(cli: &Cli) -> Outcome {
    configure_threads()?;
    match &cli.command {
        Command::Validate { file } => cmd_validate(file),
        Command::BuildBrace { bpkt, trivial, spec } => cmd_build_brace(bpkt.as_deref(), *trivial, spec.as_deref()),
        Command::BuildCycleset { file, g, solution } => cmd_build_cycleset(file, *g, *solution),
        Command::Enumerate { order, square_free, format } => cmd_enumerate(*order, *square_free, *format),
        Command::Mpl { file, formula } => cmd_mpl(file, *formula),
        Command::Retract { file, tower } => cmd_retract(file, *tower),
        Command::Iso { first, second } => cmd_iso(first, second),
        Command::Census { n, seed_order } => cmd_census(*n, *seed_order),
        Command::CrossValidate { from, to } => cmd_cross_validate(*from, *to),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let start = Instant::now();
    let result = run(&cli).and_then(|text| match &cli.output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    if cli.verbose > 0 {
        eprintln!("elapsed {:.3?}", start.elapsed());
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
