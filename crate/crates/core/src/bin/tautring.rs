use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tautring::cache::{ClassCache, CACHE_DIR_ENV};
use tautring::format::{class_to_json, graph_to_json, q_to_string, stratum_to_json, twist_to_json};
use tautring::graph::{enumerate_simple_star_graphs, enumerate_stable_graphs, StarFilter};
use tautring::hclass::{verify_conjecture_a, ClosureEngine, HMode};
use tautring::intersect::compare_by_pairing;
use tautring::pixton::{pixton_class_k, pixton_fixed_r_k, PixtonOptions};
use tautring::strata::TautClass;
use tautring::twist::{enumerate_star_twists, enumerate_twists_general};
use tautring::Error;

const EXIT_PARSE: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_INTERPOLATION: u8 = 4;
const EXIT_DISTINCT: u8 = 5;

#[derive(Parser)]
#[command(name = "tautring", version, about = "Twists, Pixton's cycle and closures of strata of differentials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stable graphs of G_{g,n}, with n the length of --mu.
    Graphs(Job),
    /// Simple star graphs of (g, μ) with their twists.
    Stars(Job),
    /// Stable graphs of (g, n) admitting twists for μ, with all twists.
    Twists(Job),
    /// Pixton's cycle P^d_{g,μ}.
    Pixton(Job),
    /// The weighted fundamental class H_{g,μ} = 2^{-g} P^g and its star-graph terms.
    Hclass(Job),
    /// The closure class [H̄_g(μ)].
    Closure(Job),
    /// Compares the star side of H_{g,μ} with 2^{-g} P^g under all pairings.
    Verify(Job),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Job {
    #[arg(long)]
    g: u32,
    /// Comma-separated multiplicities, negatives allowed.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_mu)]
    mu: Option<Mu>,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long, default_value_t = 1)]
    k: i64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, env = CACHE_DIR_ENV)]
    cache_dir: Option<std::path::PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, default_value_t = 64)]
    max_samples: usize,
    /// Only star graphs that contribute to the star-graph sum.
    #[arg(long)]
    contributing: bool,
}

#[derive(Clone)]
struct Mu(Vec<i64>);

fn parse_mu(s: &str) -> Result<Mu, String> {
    if s.trim().is_empty() {
        return Ok(Mu(Vec::new()));
    }
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(Mu)
}

enum Failure {
    Lib(Error),
    Usage(String),
    Distinct,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn mu_of(job: &Job) -> Result<&[i64], Failure> {
    job.mu
        .as_ref()
        .map(|m| m.0.as_slice())
        .ok_or_else(|| Failure::Usage("cli::run: --mu is required".into()))
}

fn emit(job: &Job, command: &str, text: String, result: Value, verdict: Option<&str>) {
    match job.format {
        Format::Text => print!("{text}"),
        Format::Json => {
            let doc = json!({
                "command": command,
                "inputs": { "g": job.g, "mu": job.mu.as_ref().map(|m| &m.0), "degree": job.degree, "k": job.k },
                "verdict": verdict,
                "result": result,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
    }
}

fn class_text(x: &TautClass) -> String {
    if x.is_zero() {
        return "0\n".into();
    }
    x.terms()
        .iter()
        .map(|(s, c)| format!("{:>12} * {s}\n", q_to_string(c)))
        .collect()
}

fn run(command: &str, job: &Job) -> Result<(), Failure> {
    let opts = PixtonOptions {
        max_samples: job.max_samples,
    };
    let cache = match &job.cache_dir {
        Some(d) => Some(ClassCache::open(d)?),
        None => None,
    };
    match command {
        "graphs" => {
            let n = mu_of(job)?.len();
            let graphs = enumerate_stable_graphs(job.g, n)?;
            let mut text = format!("{} stable graphs in G_{{{},{}}}\n", graphs.len(), job.g, n);
            for gr in &graphs {
                text += &format!("  |Aut| = {:<3} {gr}\n", gr.automorphism_order());
            }
            let list: Vec<Value> = graphs
                .iter()
                .map(|gr| json!({ "graph": graph_to_json(gr), "aut": gr.automorphism_order() }))
                .collect();
            emit(job, command, text, json!(list), None);
        }
        "stars" => {
            let mu = mu_of(job)?;
            let meromorphic = mu.iter().any(|&m| m < 0);
            let filter = if job.contributing { StarFilter::Contributing } else { StarFilter::All };
            let stars = enumerate_simple_star_graphs(job.g, mu, meromorphic, filter)?;
            let mut text = format!("{} simple star graphs\n", stars.len());
            let mut list = Vec::new();
            for s in &stars {
                let twists = enumerate_star_twists(s, mu)?;
                let shown: Vec<Value> = twists.iter().map(|t| twist_to_json(&s.graph, t, Some(s.center))).collect();
                text += &format!("  {s}  |Aut| = {}  twists: {}\n", s.automorphism_order(), json!(shown));
                list.push(json!({
                    "graph": graph_to_json(&s.graph),
                    "center": s.center,
                    "aut": s.automorphism_order(),
                    "twists": shown,
                }));
            }
            emit(job, command, text, json!(list), None);
        }
        "twists" => {
            let mu = mu_of(job)?;
            let mut text = String::new();
            let mut list = Vec::new();
            for gr in enumerate_stable_graphs(job.g, mu.len())? {
                let twists = enumerate_twists_general(&gr, mu, job.k)?;
                if twists.is_empty() {
                    continue;
                }
                let shown: Vec<Value> = twists.iter().map(|t| twist_to_json(&gr, t, None)).collect();
                text += &format!("  {gr}  twists: {}\n", json!(shown));
                list.push(json!({ "graph": graph_to_json(&gr), "twists": shown }));
            }
            text = format!("{} graphs with twists\n{text}", list.len());
            emit(job, command, text, json!(list), None);
        }
        "pixton" => {
            let mu = mu_of(job)?;
            let d = job.degree.unwrap_or(job.g as usize);
            let report = pixton_class_k(job.g, mu, job.k, d, &opts)?;
            let dim = 3 * job.g as usize + mu.len() - 3;
            let zero = TautClass::zero(job.g, mu.len());
            let vanishes = if d <= dim {
                compare_by_pairing(&report.class, &zero, d)?.verdict.is_equal()
            } else {
                true
            };
            let mut text = class_text(&report.class);
            text += &format!("samples r = {:?}, held out r = {:?}\n", report.samples, report.holdout);
            text += &format!(
                "under pairing: {}\n",
                if vanishes { "zero class" } else { "nonzero class" }
            );
            let mut raw = serde_json::Map::new();
            if matches!(job.format, Format::Json) {
                for &r in report.samples.iter().chain(&report.holdout) {
                    raw.insert(r.to_string(), class_to_json(&pixton_fixed_r_k(job.g, mu, job.k, d, r)?));
                }
            }
            let result = json!({
                "class": class_to_json(&report.class),
                "raw": raw,
                "samples": report.samples,
                "holdout": report.holdout,
                "zero_under_pairing": vanishes,
            });
            emit(job, command, text, result, None);
        }
        "hclass" => {
            let mu = mu_of(job)?;
            let mut engine = ClosureEngine::new(HMode::Pixton, opts);
            if let Some(c) = cache {
                engine = engine.with_cache(c);
            }
            let h = engine.h_weighted(job.g, mu)?;
            let terms = engine.star_terms(job.g, mu, true)?;
            let mut text = class_text(&h);
            text += &format!("{} star-graph terms\n", terms.len());
            let mut list = Vec::new();
            for t in &terms {
                text += &format!("  {}  I = {:?}  |Aut| = {}  coefficient {}\n", t.star, t.twist, t.aut, t.coefficient);
                list.push(json!({
                    "graph": graph_to_json(&t.star.graph),
                    "center": t.star.center,
                    "twist": t.twist,
                    "aut": t.aut,
                    "coefficient": q_to_string(&t.coefficient),
                }));
            }
            emit(job, command, text, json!({ "class": class_to_json(&h), "star_terms": list }), None);
        }
        "closure" => {
            let mu = mu_of(job)?;
            let mut engine = ClosureEngine::new(HMode::Pixton, opts);
            if let Some(c) = cache {
                engine = engine.with_cache(c);
            }
            let x = engine.closure_class(job.g, mu)?;
            emit(job, command, class_text(&x), class_to_json(&x), None);
        }
        "verify" => {
            let mu = mu_of(job)?;
            let report = verify_conjecture_a(job.g, mu, &opts, cache)?;
            let label = report.pairing.verdict.label();
            let mut text = format!(
                "star side: {}\n",
                if report.conjecture_free { "conjecture-free" } else { "recursion-assisted" }
            );
            for t in &report.terms {
                text += &format!("  {}  I = {:?}  |Aut| = {}  coefficient {}\n", t.star, t.twist, t.aut, t.coefficient);
            }
            text += &format!(
                "{} generators of degree {}, {} nonzero pairings\n{label}\n",
                report.pairing.generators.len(),
                3 * job.g as usize + mu.len() - 3 - job.g as usize,
                report.nonzero_pairings()
            );
            let pairings: Vec<Value> = (0..report.pairing.generators.len())
                .map(|i| {
                    json!({
                        "generator": stratum_to_json(&report.pairing.generators[i]),
                        "star": q_to_string(&report.pairing.left[i]),
                        "pixton": q_to_string(&report.pairing.right[i]),
                    })
                })
                .collect();
            let terms: Vec<Value> = report
                .terms
                .iter()
                .map(|t| {
                    json!({
                        "graph": graph_to_json(&t.star.graph),
                        "center": t.star.center,
                        "twist": t.twist,
                        "aut": t.aut,
                        "coefficient": q_to_string(&t.coefficient),
                    })
                })
                .collect();
            let result = json!({
                "conjecture_free": report.conjecture_free,
                "semantics": "equality modulo the kernel of the pairing",
                "star_terms": terms,
                "star_side": class_to_json(&report.star_side),
                "pixton_side": class_to_json(&report.pixton_side),
                "pairings": pairings,
            });
            emit(job, command, text, result, Some(label));
            if !report.is_equal() {
                return Err(Failure::Distinct);
            }
        }
        _ => unreachable!(),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_PARSE),
            };
        }
    };
    let (name, job) = match &cli.command {
        Command::Graphs(j) => ("graphs", j),
        Command::Stars(j) => ("stars", j),
        Command::Twists(j) => ("twists", j),
        Command::Pixton(j) => ("pixton", j),
        Command::Hclass(j) => ("hclass", j),
        Command::Closure(j) => ("closure", j),
        Command::Verify(j) => ("verify", j),
    };
    if let Some(n) = job.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("cli::run: {e}");
            return ExitCode::from(EXIT_PARSE);
        }
    }
    let start = Instant::now();
    let outcome = run(name, job);
    eprintln!("{name}: {:.3}s", start.elapsed().as_secs_f64());
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Distinct) => ExitCode::from(EXIT_DISTINCT),
        Err(Failure::Usage(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_PARSE)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("{e}");
            ExitCode::from(match e {
                Error::Interpolation { .. } => EXIT_INTERPOLATION,
                Error::Format { .. } => EXIT_PARSE,
                Error::Io { .. } => 1,
                _ => EXIT_INFEASIBLE,
            })
        }
    }
}
