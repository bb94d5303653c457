//! `listsep`: command-line front end.
//!
//! Exit codes: 0 success, 1 usage or domain error, 2 budget exceeded,
//! 3 verification failure.

use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use listsep::choosability::{amplitude_ok, brute_force_color};
use listsep::colorsym::{colorsym_with, DrainOrder};
use listsep::constructions::{counterexample_high, counterexample_low, counterexample_xb};
use listsep::counting::{count_classes_with, degree_fit_with, difference_csv, CountBudget};
use listsep::kernel::kernel_report;
use listsep::search::{conjecture_scan, sep, sep_symmetric, SearchOptions, SepQuery};
use listsep::setsys::{canonical_order, pi_vector, realize};
use listsep::verify::{Status, Verifier, VerifyConfig};
use listsep::{Error, Exec, ListAssignment, PIVector, SubsetKey};

#[derive(Parser, Debug)]
#[command(name = "listsep", version, about = "Separation-constrained list coloring on complete graphs")]
struct Cli {
    /// Output format; each command has a natural default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for search and scan.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,
    /// Largest vertex count for exhaustive work.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    max_n: Option<u32>,
    /// Largest list size for exhaustive work.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    max_a: Option<u32>,
    /// Wall-clock limit in seconds for search.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    time_limit: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Xb,
    Low,
    High,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Order {
    Orbit,
    RoundRobin,
    Exhaust,
}

#[derive(Args, Debug)]
struct Nab {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    a: u32,
    #[arg(long)]
    b: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Proper-intersection vector of a list assignment.
    Pi {
        /// ListAssignment JSON, `-` for stdin.
        #[arg(long)]
        file: PathBuf,
    },
    /// A list assignment realizing a proper-intersection vector.
    Realize {
        /// PIVector JSON, `-` for stdin.
        #[arg(long)]
        file: PathBuf,
    },
    /// Size of the union of the lists over a vertex subset, or over all subsets.
    Amplitude {
        /// ListAssignment or PIVector JSON.
        #[arg(long)]
        file: PathBuf,
        /// Comma-separated vertices, e.g. `1,2,3`.
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<usize>>,
    },
    /// Amplitude condition at `b`.
    Check {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        b: u32,
        /// Also search for a witness coloring (list assignments only).
        #[arg(long)]
        witness: bool,
    },
    /// Greedy layer-by-layer coloring.
    Colorsym {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        b: usize,
        #[arg(long, value_enum, default_value = "orbit")]
        order: Order,
    },
    /// Counter-example constructions.
    Construct {
        #[arg(long, value_enum)]
        family: Family,
        #[command(flatten)]
        nab: Nab,
        /// Subset size for the `xb` family.
        #[arg(long)]
        x: Option<usize>,
    },
    /// Exact separation number of `K_n`.
    Sep {
        #[command(flatten)]
        nab: Nab,
        /// Bound from symmetric counter-examples only.
        #[arg(long)]
        symmetric_only: bool,
        /// Only consider counter-examples on at most this many vertices.
        #[arg(long)]
        max_m: Option<usize>,
    },
    /// Exact sep against the conjectured formula, `pb ≤ a < (p+1)b`.
    Scan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a_max: u32,
        #[arg(long)]
        b_max: u32,
    },
    /// Number of `a`-uniform proper-intersection vectors on `n` vertices.
    Count {
        #[arg(long)]
        n: usize,
        /// List size, or the largest list size with `--fit`.
        #[arg(long)]
        a: u32,
        /// Fit a polynomial in `a` over `0..=a`.
        #[arg(long)]
        fit: bool,
    },
    /// Kernel vectors, ranks and extreme points.
    Kernel {
        #[arg(long)]
        n: usize,
        #[arg(long, requires = "c")]
        a: Option<u64>,
        #[arg(long, requires = "a")]
        c: Option<u64>,
    },
    /// Run the reproduction checklist.
    VerifyPaper {
        /// Replace the built-in example assignment.
        #[arg(long)]
        example: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
    Budget(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_budget() {
            Failure::Budget(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

type Out = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (1, m),
                Failure::Domain(m) => (1, m),
                Failure::Budget(m) => (2, m),
                Failure::Verification(m) => (3, m),
            };
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

struct Ctx {
    format: Option<Format>,
    exec: Exec,
    max_n: Option<usize>,
    max_a: Option<u32>,
    deadline: Option<Instant>,
}

impl Ctx {
    fn search(&self) -> SearchOptions {
        let mut o = SearchOptions { exec: self.exec, deadline: self.deadline, ..SearchOptions::default() };
        if let Some(m) = self.max_n {
            o.max_n = m;
        }
        o
    }

    fn check_a(&self, a: u32) -> Result<(), Failure> {
        match self.max_a {
            Some(cap) if a > cap => Err(Failure::Budget(format!("a = {a} above --max-a {cap}"))),
            _ => Ok(()),
        }
    }

    /// JSON unless another format was asked for and `alt` can render it.
    fn render(&self, value: &Value, text: Option<&dyn Fn() -> String>) -> Out {
        match (self.format, text) {
            (None | Some(Format::Json), _) => Ok(pretty(value)),
            (Some(Format::Text), Some(f)) => Ok(f()),
            (Some(f), _) => Err(Failure::Usage(format!("--format {f:?} is not available for this command").to_lowercase())),
        }
    }
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn run(cli: Cli) -> Out {
    let exec = match cli.jobs {
        Some(1) => Exec::Sequential,
        Some(j) => {
            set_jobs(j as usize);
            Exec::Parallel
        }
        None => Exec::default(),
    };
    let ctx = Ctx {
        format: cli.format,
        exec,
        max_n: cli.max_n.map(|m| m as usize),
        max_a: cli.max_a,
        deadline: cli.time_limit.map(|s| Instant::now() + Duration::from_secs(s)),
    };
    match cli.command {
        Command::Pi { file } => {
            let l: ListAssignment = read_json(&file)?;
            let v = pi_vector(&l);
            ctx.render(&to_value(&v), Some(&|| pi_text(&v)))
        }
        Command::Realize { file } => {
            let v: PIVector = read_json(&file)?;
            let l = realize(&v, 1)?;
            ctx.render(&to_value(&l), None)
        }
        Command::Amplitude { file, subset } => amplitude_cmd(&ctx, &file, subset),
        Command::Check { file, b, witness } => {
            let (v, l) = read_either(&file)?;
            let verdict = match (witness, l) {
                (true, Some(l)) => brute_force_color(&l, b as usize)?,
                (true, None) => return Err(Failure::Usage("--witness needs a list assignment".into())),
                (false, _) => amplitude_ok(&v, b)?,
            };
            ctx.render(&to_value(&verdict), None)
        }
        Command::Colorsym { file, b, order } => {
            let l: ListAssignment = read_json(&file)?;
            let order = match order {
                Order::Orbit => DrainOrder::Orbit,
                Order::RoundRobin => DrainOrder::RoundRobin,
                Order::Exhaust => DrainOrder::Exhaust,
            };
            let out = colorsym_with(&l, b, order)?;
            ctx.render(&to_value(&out), None)
        }
        Command::Construct { family, nab, x } => construct_cmd(&ctx, family, nab, x),
        Command::Sep { nab, symmetric_only, max_m } => {
            ctx.check_a(nab.a)?;
            let q = SepQuery::new(nab.n, nab.a, nab.b)?;
            if symmetric_only {
                let value = sep_symmetric(q)?;
                let out = json!({ "n": q.n, "a": q.a, "b": q.b, "value": value, "bound": "symmetric" });
                return ctx.render(&out, Some(&|| value.to_string()));
            }
            let mut opts = ctx.search();
            opts.max_m = max_m;
            let r = sep(q, &opts)?;
            ctx.render(&to_value(&r), Some(&|| r.value.to_string()))
        }
        Command::Scan { n, a_max, b_max } => {
            ctx.check_a(a_max)?;
            let rows = conjecture_scan(n, a_max, b_max, &ctx.search())?;
            match ctx.format {
                None | Some(Format::Csv) | Some(Format::Text) => {
                    let mut s = String::from("n,a,b,sep,conjectured,epsilon\n");
                    for r in &rows {
                        let _ = writeln!(s, "{},{},{},{},{},{}", r.n, r.a, r.b, r.sep, r.conjectured, r.epsilon);
                    }
                    Ok(s)
                }
                Some(Format::Json) => Ok(pretty(&rows)),
            }
        }
        Command::Count { n, a, fit } => {
            let budget = CountBudget {
                max_n: ctx.max_n.unwrap_or(CountBudget::default().max_n),
                max_a: ctx.max_a.unwrap_or(CountBudget::default().max_a),
            };
            if fit {
                let report = degree_fit_with(n, a, budget, ctx.exec)?;
                match ctx.format {
                    None | Some(Format::Csv) | Some(Format::Text) => Ok(difference_csv(&report.values)),
                    Some(Format::Json) => Ok(pretty(&report)),
                }
            } else {
                let c = count_classes_with(n, a, budget, ctx.exec)?;
                let total = c.total.to_string();
                ctx.render(&to_value(&c), Some(&|| total.clone()))
            }
        }
        Command::Kernel { n, a, c } => {
            let r = kernel_report(n, a.zip(c))?;
            ctx.render(&to_value(&r), None)
        }
        Command::VerifyPaper { example } => verify_cmd(&ctx, example),
    }
}

#[cfg(feature = "parallel")]
fn set_jobs(jobs: usize) {
    // only fails when a pool already exists, which is harmless here
    let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
}

#[cfg(not(feature = "parallel"))]
fn set_jobs(_jobs: usize) {}

fn read_text(path: &Path) -> Result<String, Failure> {
    let mut s = String::new();
    let res = if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| s = t)
    };
    res.map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    Ok(s)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

/// A PIVector file, or a list assignment together with its vector.
fn read_either(path: &Path) -> Result<(PIVector, Option<ListAssignment>), Failure> {
    let text = read_text(path)?;
    let bad = |e: serde_json::Error| Failure::Domain(format!("{}: {e}", path.display()));
    let value: Value = serde_json::from_str(&text).map_err(bad)?;
    if value.get("lists").is_some() {
        let l: ListAssignment = serde_json::from_str(&text).map_err(bad)?;
        Ok((pi_vector(&l), Some(l)))
    } else if value.get("counts").is_some() {
        Ok((serde_json::from_str(&text).map_err(bad)?, None))
    } else {
        Err(Failure::Domain(format!("{}: expected a \"lists\" or \"counts\" field", path.display())))
    }
}

fn pi_text(v: &PIVector) -> String {
    let mut s = String::new();
    for (key, count) in v.nonzero() {
        let _ = writeln!(s, "{:?} {count}", key.vertices());
    }
    s
}

fn amplitude_cmd(ctx: &Ctx, file: &Path, subset: Option<Vec<usize>>) -> Out {
    let (v, _) = read_either(file)?;
    let keys = match subset {
        Some(vs) => vec![SubsetKey::from_vertices(&vs, v.n())?],
        None => canonical_order(v.n()),
    };
    let rows: Vec<(Vec<usize>, u64)> =
        keys.iter().map(|&k| Ok((k.vertices(), v.amplitude(k)?))).collect::<Result<_, Error>>()?;
    let value = if rows.len() == 1 {
        json!({ "subset": rows[0].0, "amplitude": rows[0].1 })
    } else {
        Value::Array(rows.iter().map(|(s, a)| json!({ "subset": s, "amplitude": a })).collect())
    };
    match ctx.format {
        Some(Format::Csv) => {
            let mut s = String::from("subset,amplitude\n");
            for (k, a) in &rows {
                let cells: Vec<String> = k.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(s, "{},{a}", cells.join(" "));
            }
            Ok(s)
        }
        _ => ctx.render(&value, Some(&|| rows.iter().map(|(k, a)| format!("{k:?} {a}\n")).collect())),
    }
}

fn construct_cmd(ctx: &Ctx, family: Family, nab: Nab, x: Option<usize>) -> Out {
    let Nab { n, a, b } = nab;
    let v = match family {
        Family::Xb => {
            let x = x.ok_or_else(|| Failure::Usage("--family xb needs --x".into()))?;
            counterexample_xb(n, a, b, x)?
        }
        Family::Low => counterexample_low(n, a, b)?,
        Family::High => counterexample_high(n, a, b)?,
    };
    let sums = (1..=n).map(|i| v.list_size(i)).collect::<Result<Vec<u64>, Error>>()?;
    let amplitude = v.total();
    let verdict = amplitude_ok(&v, b)?;
    let out = json!({
        "vector": v,
        "audit": {
            "per_vertex_sums": sums,
            "max_pair_intersection": v.max_pair_intersection(),
            "amplitude": amplitude,
            "nb": n as u64 * b as u64,
            "colorable": verdict.colorable,
            "violating_subset": verdict.violating_subset.map(|k| k.vertices()),
        }
    });
    ctx.render(&out, None)
}

fn verify_cmd(ctx: &Ctx, example: Option<PathBuf>) -> Out {
    let example = example.map(|p| read_json::<ListAssignment>(&p)).transpose()?;
    let mut cfg = VerifyConfig { exec: ctx.exec, deadline: ctx.deadline, example, ..VerifyConfig::default() };
    if let Some(m) = ctx.max_n {
        cfg.max_n = m;
    }
    if let Some(a) = ctx.max_a {
        cfg.max_a = a;
    }
    let reports = Verifier::new(cfg).run_all();
    let failed = reports.iter().filter(|r| r.status == Status::Fail).count();
    let text = match ctx.format {
        None | Some(Format::Text) => {
            let mut s = String::new();
            for r in &reports {
                let _ = writeln!(s, "{}", r.line());
                for d in &r.details {
                    let _ = writeln!(s, "    {d}");
                }
            }
            s
        }
        Some(Format::Json) => pretty(&reports),
        Some(Format::Csv) => {
            let mut s = String::from("id,status,elapsed_ms\n");
            for r in &reports {
                let _ = writeln!(s, "{},{},{}", r.id, r.status, r.elapsed_ms);
            }
            s
        }
    };
    if failed > 0 {
        print!("{text}");
        return Err(Failure::Verification(format!("{failed} criteria failed")));
    }
    Ok(text)
}
