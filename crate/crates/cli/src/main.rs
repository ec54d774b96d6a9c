//! `polymod`: command-line access to the polymod library.
//!
//! Inputs are inline JSON or `@path` to a JSON file. Output is JSON unless
//! `--human` is given. Exit codes: 0 success, 1 domain error (a JSON error
//! object is printed), 2 usage or parse error.

mod input;
mod render;

use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use polymod::l_engine::{
    canonical_split, generate, infer_l_cancellable, nilpotent_chains, order_of_module_cancellable,
    order_of_sum_cancellable, quotient_derivation, GammaTable,
};
use polymod::linalg::Matrix;
use polymod::module_algebra::{contains_with_bound, derivative_closure, v_space, ModuleExpr};
use polymod::nonclosed::{sweep, thresholds, verify_e14};
use polymod::{BiPoly, CancelToken, Error, UniPoly};
use serde_json::{json, Value};

use input::{parse_json, parse_scalar, UsageError};

#[derive(Parser, Debug)]
#[command(name = "polymod", version, about = "Translation-invariant spaces of bivariate polynomials")]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Render results in conventional notation instead of JSON.
    #[arg(long, global = true, conflicts_with = "json")]
    human: bool,

    /// Emit JSON (the default).
    #[arg(long, global = true)]
    json: bool,

    /// Degree bound for truncated computations.
    #[arg(long, global = true, env = "POLYMOD_DEG_BOUND")]
    deg_bound: Option<usize>,

    /// Abort cancellable computations after this many milliseconds.
    #[arg(long, global = true)]
    timeout_ms: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a polynomial at a point.
    PolyEval {
        #[arg(long)]
        poly: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Compute F(x + a, y + b).
    PolyShift {
        #[arg(long)]
        poly: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Compute the partial derivative of order (i, j).
    PolyDiff {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 0)]
        i: usize,
        #[arg(long, default_value_t = 0)]
        j: usize,
    },
    /// Basis of the smallest derivative-closed span of the generators.
    Closure {
        #[arg(long)]
        gens: String,
    },
    /// Decide membership of a polynomial in a module expression.
    Member {
        #[arg(long)]
        module: String,
        #[arg(long)]
        poly: String,
    },
    /// Initial coordinate tuples of a module, truncated at the degree bound.
    Vspace {
        #[arg(long)]
        module: String,
        #[arg(long)]
        s: usize,
    },
    /// The element of M_Γ with the given first coordinates.
    GenGamma {
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        seeds: String,
    },
    /// Recover the operator table of a module from a basis.
    InferL {
        #[arg(long)]
        basis: String,
        #[arg(long)]
        s: usize,
    },
    /// Smallest K with every element determined by its first K coordinates.
    Order {
        #[arg(long)]
        basis: String,
    },
    /// Order of the sum of two operator modules.
    OrderSum {
        #[arg(long)]
        gamma1: String,
        #[arg(long)]
        gamma2: String,
    },
    /// Chain decomposition of a nilpotent matrix.
    Chains {
        /// Matrix as a JSON array of rows.
        #[arg(long, conflicts_with = "quotient", required_unless_present = "quotient")]
        matrix: Option<String>,
        /// Differentiation on s-tuples of degree < k modulo degree < d.
        #[arg(long, num_args = 3, value_names = ["S", "K", "D"])]
        quotient: Option<Vec<usize>>,
    },
    /// Recover (d, s) from a sum M_d + M_Γ.
    Split {
        #[arg(long)]
        module: String,
    },
    /// Certified upper bounds on sup |G_n − x| over a range of n.
    NonclosedDemo {
        #[arg(long, default_value_t = 5)]
        n_min: usize,
        #[arg(long, default_value_t = 25)]
        n_max: usize,
    },
    /// ln(e_3(n−1)^{e(n)} / e_3(n)) for n = 2..=n_max.
    E14 {
        #[arg(long, default_value_t = 20)]
        n_max: usize,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => Failure::Usage(m),
            e => Failure::Domain(e),
        }
    }
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

/// JSON value and human rendering of a result.
struct Output {
    json: Value,
    human: String,
}

fn out<T: serde::Serialize>(v: &T, human: String) -> Result<Output, Failure> {
    Ok(Output { json: serde_json::to_value(v).expect("serializable"), human })
}

const DEFAULT_DEG_BOUND: usize = 8;

fn run(cli: &Cli) -> Result<Output, Failure> {
    let g = &cli.global;
    let cancel = g.timeout_ms.map(|ms| CancelToken::with_timeout(Duration::from_millis(ms))).unwrap_or_default();
    let bound = g.deg_bound.unwrap_or(DEFAULT_DEG_BOUND);
    match &cli.command {
        Command::PolyEval { poly, x, y } => {
            let f: BiPoly = parse_json("poly", poly)?;
            let v = f.eval(&parse_scalar("x", x)?, &parse_scalar("y", y)?);
            out(&json!({ "value": v }), v.to_string())
        }
        Command::PolyShift { poly, a, b } => {
            let f: BiPoly = parse_json("poly", poly)?;
            let r = f.shift(&parse_scalar("a", a)?, &parse_scalar("b", b)?);
            out(&r, render::bipoly(&r))
        }
        Command::PolyDiff { poly, i, j } => {
            let f: BiPoly = parse_json("poly", poly)?;
            let r = f.partial(*i, *j);
            out(&r, render::bipoly(&r))
        }
        Command::Closure { gens } => {
            let gens: Vec<BiPoly> = parse_json("gens", gens)?;
            let basis = derivative_closure(&gens);
            out(&json!({ "basis": basis }), render::bipoly_list(&basis))
        }
        Command::Member { module, poly } => {
            let m: ModuleExpr = parse_json("module", module)?;
            let f: BiPoly = parse_json("poly", poly)?;
            let r = contains_with_bound(&m, &f, g.deg_bound)?;
            let human = render::membership(&r);
            out(&r, human)
        }
        Command::Vspace { module, s } => {
            let m: ModuleExpr = parse_json("module", module)?;
            let r = v_space(&m, *s, bound)?;
            let human = render::vspace(&r);
            out(&r, human)
        }
        Command::GenGamma { gamma, seeds } => {
            let t: GammaTable = parse_json("gamma", gamma)?;
            let seeds: Vec<UniPoly> = parse_json("seeds", seeds)?;
            let r = generate(&t, &seeds)?;
            out(&r, render::bipoly(&r))
        }
        Command::InferL { basis, s } => {
            let basis: Vec<BiPoly> = parse_json("basis", basis)?;
            let t = infer_l_cancellable(&basis, *s, bound, &cancel)?;
            let human = render::gamma(&t);
            out(&t, human)
        }
        Command::Order { basis } => {
            let basis: Vec<BiPoly> = parse_json("basis", basis)?;
            let k = order_of_module_cancellable(&basis, bound, &cancel)?;
            let human = match k {
                Some(k) => format!("order {k}"),
                None => format!("order exceeds {bound}"),
            };
            out(&json!({ "order": k, "deg_bound": bound }), human)
        }
        Command::OrderSum { gamma1, gamma2 } => {
            let g1: GammaTable = parse_json("gamma1", gamma1)?;
            let g2: GammaTable = parse_json("gamma2", gamma2)?;
            let r = order_of_sum_cancellable(&g1, &g2, bound, &cancel)?;
            let human = render::order_report(&r);
            out(&r, human)
        }
        Command::Chains { matrix, quotient } => {
            let d = match (matrix, quotient) {
                (Some(m), _) => parse_json::<Matrix>("matrix", m)?,
                (None, Some(q)) => quotient_derivation(q[0], q[1], q[2])?,
                (None, None) => return Err(Failure::Usage("one of --matrix or --quotient is required".into())),
            };
            let c = nilpotent_chains(&d)?;
            let human = render::chains(&c);
            out(&c, human)
        }
        Command::Split { module } => {
            let m: ModuleExpr = parse_json("module", module)?;
            let r = canonical_split(&m)?;
            out(&r, format!("d = {}, order = {}", r.d, r.order))
        }
        Command::NonclosedDemo { n_min, n_max } => {
            let reports = sweep(*n_min, *n_max)?;
            let rows: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "log10_linear": r.log_linear_term.log10_mag(),
                        "log10_tail": r.log_tail_term.log10_mag(),
                        "log10_total": r.log_total.log10_mag(),
                        "certified": r.certified,
                    })
                })
                .collect();
            let t = thresholds(*n_max)?;
            let human = render::demo(&reports, &t);
            out(&json!({ "scale": "log10 of upper bounds", "rows": rows, "thresholds": t }), human)
        }
        Command::E14 { n_max } => {
            let rows = verify_e14(*n_max)?;
            let human = render::e14(&rows);
            out(&json!({ "scale": "natural log", "rows": rows }), human)
        }
    }
}

fn error_json(e: &Error) -> Value {
    let mut v = json!({ "error": e.kind(), "message": e.to_string() });
    let extra = match e {
        Error::NotAnLModule { s, witness } => json!({ "s": s, "witness": witness }),
        Error::Underdetermined { free_layers } => json!({ "free_layers": free_layers }),
        Error::Inconsistent { layer } => json!({ "layer": layer }),
        Error::ArityMismatch { expected, got } => json!({ "expected": expected, "got": got }),
        Error::ThresholdUnmet { n, condition } => json!({ "n": n, "condition": condition }),
        _ => json!({}),
    };
    if let (Value::Object(base), Value::Object(more)) = (&mut v, extra) {
        base.extend(more);
    }
    v
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let human = cli.global.human;
    match run(&cli) {
        Ok(o) => {
            if human {
                println!("{}", o.human);
            } else {
                println!("{}", serde_json::to_string(&o.json).expect("json"));
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            if human {
                eprintln!("error: {e}");
            } else {
                println!("{}", serde_json::to_string(&error_json(&e)).expect("json"));
            }
            ExitCode::from(1)
        }
    }
}
