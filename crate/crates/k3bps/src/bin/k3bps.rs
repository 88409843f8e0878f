//! Command-line front end: compute tables and series, run the verification
//! suites, and emit deterministic JSON/CSV.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Deserialize;
use serde_json::{json, Value};

use k3bps::kawai_yoshioka::{i_series, ky_table};
use k3bps::kkv::{extract_r_table, yau_zaslow};
use k3bps::lattice::{coset_of_degrees, discriminant_group, CosetClass, EvenLattice};
use k3bps::multicover::rtilde_multiple;
use k3bps::noether_lefschetz::refined_multiplicity;
use k3bps::potentials::dictionary_check;
use k3bps::qseries::Rat;
use k3bps::quartic::QuarticPencil;
use k3bps::report::{rat_str, series_csv, series_json};
use k3bps::verify::{run_suite, Suite, VerifyConfig};

#[derive(Parser)]
#[command(
    name = "k3bps",
    about = "Exact BPS counts, stable-pairs series and Noether-Lefschetz numbers for K3 surfaces",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format for tables and series.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write output to a file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Largest arithmetic genus h of table rows.
    #[arg(long, global = true, default_value_t = 6)]
    hmax: i64,

    /// Largest genus g.
    #[arg(long, global = true, default_value_t = 4)]
    gmax: i64,

    /// Largest divisibility m.
    #[arg(long, global = true, default_value_t = 3)]
    mmax: i64,

    /// Largest degree d.
    #[arg(long, global = true, default_value_t = 3)]
    dmax: i64,

    /// Series in q are exact strictly below q^{q-order}.
    #[arg(long = "q-order", global = true, default_value_t = 10)]
    q_order: i64,

    /// Series in y are exact through y^{y-order}.
    #[arg(long = "y-order", global = true, default_value_t = 16)]
    y_order: i64,

    /// λ-series are compared through λ^{lambda-order}.
    #[arg(long = "lambda-order", global = true, default_value_t = 12)]
    lambda_order: i64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// The BPS table r_{g,h} for h <= hmax.
    KkvTable,
    /// The genus-0 series: the 24th-power infinite product.
    YauZaslow,
    /// Euler characteristics e(P_n(S,h)) for h < q-order, n <= y-order.
    Ky,
    /// The signed residue series t·I_h in y.
    ISeries {
        #[arg(long)]
        h: i64,
    },
    /// The multiple-cover series for divisibility m and primitive genus h.
    Rtilde {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        h: i64,
    },
    /// The quartic pencil's modular form Θ on the (1/8)-grid.
    QuarticTheta,
    /// Θ, the quartic NL numbers and the fiberwise counts n_{g,d}.
    QuarticBps,
    /// Verify the variable-change identity for g <= gmax, d <= dmax.
    DictionaryCheck,
    /// Lattice computations on a Gram matrix read from JSON.
    Lattice {
        #[command(subcommand)]
        cmd: LatticeCmd,
    },
    /// Run a verification suite: kkv, ky, dictionary, multicover, recursion,
    /// nl, or all (default).
    Verify {
        suite: Option<String>,
    },
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Discriminant, signature and discriminant group.
    Disc {
        #[arg(long)]
        gram: PathBuf,
    },
    /// The coset class of the functional v_i -> d_i.
    Coset {
        #[arg(long)]
        gram: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        degrees: Vec<i64>,
    },
    /// The refined multiplicity of a type (disc, coset) at (h, degrees).
    Multiplicity {
        #[arg(long)]
        gram: PathBuf,
        #[arg(long)]
        h: i64,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        degrees: Vec<i64>,
        /// Target discriminant of the type.
        #[arg(long)]
        disc: i64,
        /// Target coset as comma-separated dual coordinates, e.g. "1/4" or
        /// "0,1/2".
        #[arg(long)]
        coset: String,
    },
}

#[derive(Deserialize)]
struct GramFile {
    rank: usize,
    gram: Vec<Vec<i64>>,
}

fn load_lattice(path: &PathBuf) -> Result<EvenLattice, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))?;
    let parsed: GramFile =
        serde_json::from_str(&text).map_err(|e| format!("parsing {}: {e}", path.display()))?;
    if parsed.gram.len() != parsed.rank {
        return Err(format!("rank {} does not match the matrix size", parsed.rank));
    }
    EvenLattice::new(parsed.gram).map_err(|e| e.to_string())
}

fn parse_rat(text: &str) -> Result<Rat, String> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|e| format!("bad rational {text}: {e}"))?;
        let d: BigInt = den.trim().parse().map_err(|e| format!("bad rational {text}: {e}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {text}"));
        }
        Ok(Rat::new(n, d))
    } else {
        let n: BigInt = text.parse().map_err(|e| format!("bad integer {text}: {e}"))?;
        Ok(Rat::from_integer(n))
    }
}

fn emit(cli: &Cli, text: String) -> Result<(), String> {
    match &cli.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| format!("writing {}: {e}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<bool, String> {
    for (name, value) in [
        ("--q-order", cli.q_order),
        ("--y-order", cli.y_order),
        ("--lambda-order", cli.lambda_order),
    ] {
        if value < 1 {
            return Err(format!("{name} must be at least 1"));
        }
    }
    if cli.hmax < 0 || cli.gmax < 0 || cli.mmax < 1 || cli.dmax < 1 {
        return Err("bounds must be nonnegative (hmax, gmax) or positive (mmax, dmax)".into());
    }
    match &cli.command {
        Command::KkvTable => {
            let table = extract_r_table(cli.hmax).map_err(|e| e.to_string())?;
            let text = match cli.format {
                Format::Json => {
                    let entries: Vec<Value> = table
                        .entries()
                        .map(|(g, h, r)| json!({"g": g, "h": h, "r": r.to_string()}))
                        .collect();
                    pretty(&json!({"hmax": table.hmax(), "entries": entries}))
                }
                Format::Csv => {
                    let mut out = String::from("g,h,r\n");
                    for (g, h, r) in table.entries() {
                        out.push_str(&format!("{g},{h},{r}\n"));
                    }
                    out
                }
            };
            emit(cli, text)?;
        }
        Command::YauZaslow => {
            let s = yau_zaslow(cli.q_order);
            emit_series(cli, &s, "q")?;
        }
        Command::Ky => {
            let table = ky_table(cli.q_order, cli.y_order);
            let text = match cli.format {
                Format::Json => {
                    let entries: Vec<Value> = table
                        .entries()
                        .map(|(n, h, e)| json!({"n": n, "h": h, "e": e.to_string()}))
                        .collect();
                    pretty(&json!({
                        "q_order": cli.q_order,
                        "y_order": cli.y_order,
                        "entries": entries,
                    }))
                }
                Format::Csv => {
                    let mut out = String::from("n,h,e\n");
                    for (n, h, e) in table.entries() {
                        out.push_str(&format!("{n},{h},{e}\n"));
                    }
                    out
                }
            };
            emit(cli, text)?;
        }
        Command::ISeries { h } => {
            let is = i_series(*h, cli.y_order);
            emit_series(cli, &is.series, "y")?;
        }
        Command::Rtilde { m, h } => {
            let rt = rtilde_multiple(*m, *h, cli.q_order);
            emit_series(cli, &rt.series, "q")?;
        }
        Command::QuarticTheta => {
            let pencil = QuarticPencil::with_order8(8 * cli.q_order);
            emit_series(cli, pencil.theta(), "q")?;
        }
        Command::QuarticBps => {
            let pencil = QuarticPencil::for_degree(cli.dmax);
            let hmax_needed = (cli.dmax * cli.dmax + 8).div_euclid(8);
            let table = extract_r_table(cli.hmax.max(hmax_needed)).map_err(|e| e.to_string())?;
            let mut nl = Vec::new();
            let mut bps = Vec::new();
            for d in 1..=cli.dmax {
                let mut h = 0i64;
                while k3bps::quartic::delta4(h, d) >= 0 {
                    nl.push(json!({
                        "m": Value::Null,
                        "h": h,
                        "d": [d],
                        "value": rat_str(&pencil.nl(h, d)),
                    }));
                    h += 1;
                }
                for g in 0..=cli.gmax {
                    bps.push((g, d, pencil.bps(&table, g, d)));
                }
            }
            let text = match cli.format {
                Format::Json => {
                    let bps_json: Vec<Value> = bps
                        .iter()
                        .map(|(g, d, n)| json!({"g": g, "d": d, "n": n.to_string()}))
                        .collect();
                    pretty(&json!({
                        "theta": series_json(pencil.theta(), "q"),
                        "nl": nl,
                        "bps": bps_json,
                    }))
                }
                Format::Csv => {
                    let mut out = String::from("g,d,n\n");
                    for (g, d, n) in &bps {
                        out.push_str(&format!("{g},{d},{n}\n"));
                    }
                    out
                }
            };
            emit(cli, text)?;
        }
        Command::DictionaryCheck => {
            let mut all_ok = true;
            let mut lines = String::new();
            for g in 0..=cli.gmax {
                for d in 1..=cli.dmax {
                    let ok =
                        dictionary_check(g, d, cli.lambda_order).map_err(|e| e.to_string())?;
                    all_ok &= ok;
                    lines.push_str(&format!(
                        "{} g={g} d={d} through lambda^{}\n",
                        if ok { "PASS" } else { "FAIL" },
                        cli.lambda_order
                    ));
                }
            }
            emit(cli, lines)?;
            return Ok(all_ok);
        }
        Command::Lattice { cmd } => {
            run_lattice(cli, cmd)?;
        }
        Command::Verify { suite } => {
            let name = suite.as_deref().unwrap_or("all");
            let suite = Suite::parse(name).ok_or_else(|| format!("unknown suite '{name}'"))?;
            let cfg = VerifyConfig {
                hmax: cli.hmax,
                gmax: cli.gmax,
                mmax: cli.mmax,
                dmax: cli.dmax,
                q_order: cli.q_order,
                y_order: cli.y_order,
                lambda_order: cli.lambda_order,
            };
            let checks = run_suite(suite, &cfg);
            let mut lines = String::new();
            let mut failed = 0;
            for c in &checks {
                lines.push_str(&format!(
                    "{} {} - {}\n",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                ));
                if !c.passed {
                    failed += 1;
                }
            }
            lines.push_str(&format!("{} checks, {} failed\n", checks.len(), failed));
            emit(cli, lines)?;
            return Ok(failed == 0);
        }
    }
    Ok(true)
}

fn run_lattice(cli: &Cli, cmd: &LatticeCmd) -> Result<(), String> {
    match cmd {
        LatticeCmd::Disc { gram } => {
            let lattice = load_lattice(gram)?;
            let group = discriminant_group(&lattice).map_err(|e| e.to_string())?;
            let (pos, neg, zero) = lattice.signature();
            let classes: Vec<Vec<String>> = group
                .classes_mod_negation()
                .iter()
                .map(|c| c.dual_coords().iter().map(rat_str).collect())
                .collect();
            let text = pretty(&json!({
                "rank": lattice.rank(),
                "gram": lattice.gram(),
                "determinant": lattice.det().to_string(),
                "discriminant": lattice.discriminant().to_string(),
                "signature": [pos, neg, zero],
                "group_order": group.order().to_string(),
                "invariant_factors":
                    group.invariant_factors.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                "classes_mod_negation": classes,
            }));
            emit(cli, text)?;
        }
        LatticeCmd::Coset { gram, degrees } => {
            let lattice = load_lattice(gram)?;
            let class = coset_of_degrees(&lattice, degrees).map_err(|e| e.to_string())?;
            let text = pretty(&json!({
                "degrees": degrees,
                "coset": class.dual_coords().iter().map(rat_str).collect::<Vec<_>>(),
            }));
            emit(cli, text)?;
        }
        LatticeCmd::Multiplicity { gram, h, degrees, disc, coset } => {
            let lattice = load_lattice(gram)?;
            let coords: Result<Vec<Rat>, String> = coset.split(',').map(parse_rat).collect();
            let class = CosetClass::from_dual_coords(&coords?);
            let count = refined_multiplicity(&lattice, *h, degrees, &BigInt::from(*disc), &class)
                .map_err(|e| e.to_string())?;
            let text = pretty(&json!({
                "h": h,
                "degrees": degrees,
                "disc": disc,
                "coset": class.dual_coords().iter().map(rat_str).collect::<Vec<_>>(),
                "count": count,
            }));
            emit(cli, text)?;
        }
    }
    Ok(())
}

fn emit_series(cli: &Cli, s: &k3bps::qseries::FracSeries<Rat>, var: &str) -> Result<(), String> {
    let text = match cli.format {
        Format::Json => pretty(&series_json(s, var)),
        Format::Csv => series_csv(s),
    };
    emit(cli, text)
}

fn pretty(v: &Value) -> String {
    let mut text = serde_json::to_string_pretty(v).expect("serializable");
    text.push('\n');
    text
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
