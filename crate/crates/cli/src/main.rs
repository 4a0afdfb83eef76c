//! `kq`: command-line front end for the `kummer_quartic` library.

mod render;
mod report;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use kummer_quartic::arith::{self, FactorBudget, GeneratorTest};
use kummer_quartic::conditions::{self, EnumerationOptions};
use kummer_quartic::cyclotomic;
use kummer_quartic::diophantine::{self, EquationInstance, SearchOptions};
use kummer_quartic::Error;
use num_bigint::{BigInt, BigUint};
use serde::Serialize;
use serde_json::{json, Value};

use report::Report;

#[derive(Debug, Parser)]
#[command(name = "kq", version, about = "Explore x^4 - q^4 = p*y^r and the arithmetic around it")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Emit a JSON report instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Write output to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Test generators by computing the full order rather than lifting from q^2.
    #[arg(long, global = true)]
    full_order: bool,
    /// Work limit: candidate triples for scan, y values for search, rho steps for order.
    #[arg(long, global = true, value_name = "N")]
    budget: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate every hypothesis on a prime triple.
    Check { p: u64, q: u64, r: u64 },
    /// List all triples within bounds that satisfy every hypothesis.
    Scan {
        #[arg(long)]
        p_max: u64,
        #[arg(long)]
        q_max: u64,
        #[arg(long)]
        r_max: u64,
        /// Also write the triples as CSV.
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
    },
    /// Check whether (x, y) solves the equation.
    #[command(allow_negative_numbers = true)]
    Verify { p: u64, q: u64, r: u64, x: BigInt, y: BigInt },
    /// Find all solutions with |y| <= y-bound and |x| <= x-bound.
    Search {
        p: u64,
        q: u64,
        r: u64,
        #[arg(long)]
        y_bound: u64,
        #[arg(long)]
        x_bound: u64,
    },
    /// Decompose a solution into its factorization branch.
    #[command(allow_negative_numbers = true)]
    Trace { p: u64, q: u64, r: u64, x: BigInt, y: BigInt },
    /// Splitting of the prime p in the l-th cyclotomic integers.
    Split { p: u64, l: u64 },
    /// r-th power residue symbol of a at q.
    #[command(allow_negative_numbers = true)]
    Symbol { a: BigInt, r: u64, q: u64 },
    /// Multiplicative order of a modulo n.
    #[command(allow_negative_numbers = true)]
    Order { a: BigInt, n: BigUint },
    /// Whether a generates the units modulo q^k.
    #[command(allow_negative_numbers = true)]
    Generator { a: BigInt, q: u64, k: u32 },
    /// Whether a is an r-th power modulo the prime q.
    #[command(allow_negative_numbers = true)]
    Residue { a: BigInt, r: u64, q: u64 },
}

struct Outcome {
    name: &'static str,
    inputs: BTreeMap<String, String>,
    outputs: Value,
    human: String,
    csv: Option<(PathBuf, String)>,
}

fn inputs<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("library types serialize")
}

fn generator_test_name(test: GeneratorTest) -> String {
    match test {
        GeneratorTest::Lifted => "lifted".into(),
        GeneratorTest::FullOrder => "full_order".into(),
    }
}

fn run(g: &Global, command: Command) -> Result<Outcome, Error> {
    let test = if g.full_order { GeneratorTest::FullOrder } else { GeneratorTest::Lifted };
    let outcome = match command {
        Command::Check { p, q, r } => {
            let rep = conditions::check_conditions_with(p, q, r, test)?;
            Outcome {
                name: "check",
                inputs: inputs([
                    ("p", p.to_string()),
                    ("q", q.to_string()),
                    ("r", r.to_string()),
                    ("generator_test", generator_test_name(test)),
                ]),
                outputs: to_value(&rep),
                human: render::conditions(&rep),
                csv: None,
            }
        }
        Command::Scan { p_max, q_max, r_max, csv } => {
            let mut opts = EnumerationOptions { generator_test: test, ..Default::default() };
            if let Some(b) = g.budget {
                opts.budget = b;
            }
            let reps = conditions::enumerate_triples_with(p_max, q_max, r_max, &opts)?;
            let csv = csv.map(|path| {
                let mut body = String::from("p,q,r\n");
                for rep in &reps {
                    body.push_str(&format!("{},{},{}\n", rep.triple.p, rep.triple.q, rep.triple.r));
                }
                (path, body)
            });
            Outcome {
                name: "scan",
                inputs: inputs([
                    ("p_max", p_max.to_string()),
                    ("q_max", q_max.to_string()),
                    ("r_max", r_max.to_string()),
                    ("generator_test", generator_test_name(test)),
                    ("budget", opts.budget.to_string()),
                ]),
                outputs: json!({ "count": reps.len(), "triples": to_value(&reps) }),
                human: render::scan(&reps),
                csv,
            }
        }
        Command::Verify { p, q, r, x, y } => {
            let inst = EquationInstance::new(p, q, r)?;
            let rec = diophantine::verify_solution(&inst, &x, &y);
            Outcome {
                name: "verify",
                inputs: inputs([
                    ("p", p.to_string()),
                    ("q", q.to_string()),
                    ("r", r.to_string()),
                    ("x", x.to_string()),
                    ("y", y.to_string()),
                ]),
                outputs: to_value(&rec),
                human: render::solution(&rec),
                csv: None,
            }
        }
        Command::Search { p, q, r, y_bound, x_bound } => {
            let inst = EquationInstance::new(p, q, r)?;
            let mut opts = SearchOptions::default();
            if let Some(b) = g.budget {
                opts.budget = b;
            }
            let recs = diophantine::search_solutions_with(&inst, y_bound, x_bound, &opts)?;
            Outcome {
                name: "search",
                inputs: inputs([
                    ("p", p.to_string()),
                    ("q", q.to_string()),
                    ("r", r.to_string()),
                    ("y_bound", y_bound.to_string()),
                    ("x_bound", x_bound.to_string()),
                    ("budget", opts.budget.to_string()),
                ]),
                outputs: to_value(&recs),
                human: render::solutions(&recs),
                csv: None,
            }
        }
        Command::Trace { p, q, r, x, y } => {
            let inst = EquationInstance::new(p, q, r)?;
            let t = diophantine::decompose_solution(&inst, &x, &y)?;
            Outcome {
                name: "trace",
                inputs: inputs([
                    ("p", p.to_string()),
                    ("q", q.to_string()),
                    ("r", r.to_string()),
                    ("x", x.to_string()),
                    ("y", y.to_string()),
                ]),
                outputs: to_value(&t),
                human: render::trace(&t),
                csv: None,
            }
        }
        Command::Split { p, l } => {
            let s = cyclotomic::split_prime_in_cyclotomic(p, l)?;
            Outcome {
                name: "split",
                inputs: inputs([("p", p.to_string()), ("l", l.to_string())]),
                outputs: to_value(&s),
                human: render::split(&s),
                csv: None,
            }
        }
        Command::Symbol { a, r, q } => {
            let v = cyclotomic::power_residue_symbol_rational(&a, r, q)?;
            let k = cyclotomic::classify_kummer_splitting(&a, r, q)?;
            Outcome {
                name: "symbol",
                inputs: inputs([("a", a.to_string()), ("r", r.to_string()), ("q", q.to_string())]),
                outputs: json!({ "symbol": to_value(&v), "splitting": to_value(&k) }),
                human: render::symbol(&v, k),
                csv: None,
            }
        }
        Command::Order { a, n } => {
            let mut budget = FactorBudget::default();
            if let Some(b) = g.budget {
                budget.rho_steps = b;
            }
            let fact = arith::factorize_with_budget(&n, &budget)?;
            let ord = arith::multiplicative_order_with(&a, &fact)?;
            Outcome {
                name: "order",
                inputs: inputs([
                    ("a", a.to_string()),
                    ("n", n.to_string()),
                    ("budget", budget.rho_steps.to_string()),
                ]),
                outputs: json!({ "order": ord.to_string() }),
                human: render::scalar("order", &ord),
                csv: None,
            }
        }
        Command::Generator { a, q, k } => {
            let gen = arith::is_generator_mod_prime_power_with(&a, q, k, test)?;
            Outcome {
                name: "generator",
                inputs: inputs([
                    ("a", a.to_string()),
                    ("q", q.to_string()),
                    ("k", k.to_string()),
                    ("generator_test", generator_test_name(test)),
                ]),
                outputs: json!({ "is_generator": gen }),
                human: render::scalar("is generator", if gen { "yes" } else { "no" }),
                csv: None,
            }
        }
        Command::Residue { a, r, q } => {
            let res = cyclotomic::rth_power_residue_mod_prime(&a, r, q)?;
            Outcome {
                name: "residue",
                inputs: inputs([("a", a.to_string()), ("r", r.to_string()), ("q", q.to_string())]),
                outputs: json!({ "is_residue": res }),
                human: render::scalar("is residue", if res { "yes" } else { "no" }),
                csv: None,
            }
        }
    };
    Ok(outcome)
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn emit(global: &Global, outcome: Outcome, elapsed_ms: u64) -> std::io::Result<()> {
    if let Some((path, body)) = &outcome.csv {
        std::fs::write(path, body)?;
    }
    let text = if global.json {
        Report::new(outcome.name, outcome.inputs, outcome.outputs, elapsed_ms).to_json()
    } else {
        outcome.human
    };
    match &global.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let start = Instant::now();
    let outcome = match run(&cli.global, cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {}: {}", e.kind(), one_line(&e.to_string()));
            return ExitCode::from(1);
        }
    };
    let elapsed = start.elapsed().as_millis() as u64;
    if let Err(e) = emit(&cli.global, outcome, elapsed) {
        eprintln!("error: Io: {}", one_line(&e.to_string()));
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
