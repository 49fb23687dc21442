//! Command-line front end: exact counts, table reproduction, bound
//! constants, lower-bound constructions, and fixture verification.
//!
//! Exit codes: 0 success, 1 verification mismatch (or internal defect),
//! 2 usage error, 3 resource refusal (retry with `--slow` where offered).

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use permarith::bounds::{lower_bound_report, upper_bound_report};
use permarith::compat::CompatKind;
use permarith::constructions::{build_family, emit_members, family_count, is_lcm_member};
use permarith::fixtures;
use permarith::numtheory::SpfTable;
use permarith::permanent::{count_permutations, table1, CountResult, Engine};
use permarith::verify::run_verify;
use permarith::Error;

/// Counts above this need `--slow` (Ryser time grows like 2^n).
const SLOW_COUNT_N: usize = 24;

#[derive(Parser)]
#[command(
    name = "permarith",
    version,
    about = "Exact counting and growth constants for arithmetically constrained permutations"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for the permanent engines (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Unlock the slow tiers (counts above n = 24, bases with more than
    /// 20 divisors).
    #[arg(long, global = true)]
    slow: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Count compatible permutations of [n].
    Count {
        /// Compatibility kind: lcm, div, anticoprime, coprime.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        /// auto, bruteforce, or ryser.
        #[arg(long, default_value = "auto")]
        engine: String,
    },
    /// Exact #S_div(n) and #S_lcm(n) with n-th roots, n = 1..=max-n.
    Table1 {
        #[arg(long = "max-n")]
        max_n: usize,
    },
    /// Lower-bound constants c(b)α(b), c_d(b)α(b) per base.
    Table2 {
        /// Base(s) b; repeat or comma-separate.
        #[arg(long = "b", required = true, value_delimiter = ',')]
        bases: Vec<u64>,
    },
    /// Upper-bound exponent constants at cut k.
    Upper {
        #[arg(long)]
        k: u64,
        /// Also compute the empirical X0 at this n (defaults to 10^6 when
        /// the flag is given bare).
        #[arg(long = "empirical-n", num_args = 0..=1, default_missing_value = "1000000")]
        empirical_n: Option<u64>,
    },
    /// Build the block family for base b at size n.
    Construct {
        #[arg(long)]
        b: u64,
        #[arg(long)]
        n: u64,
        /// How many member permutations to emit.
        #[arg(long, default_value_t = 10)]
        limit: u64,
        /// Check every emitted member for lcm-compatibility.
        #[arg(long)]
        verify: bool,
    },
    /// Recompute all embedded reference values and report pass/fail.
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: could not configure {threads} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::ResourceLimit(_) => 3,
                Error::InvalidArgument(_) | Error::OutOfRange(_) => 2,
                Error::Internal(_) => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Count { kind, n, engine } => cmd_count(cli, kind, *n, engine),
        Command::Table1 { max_n } => cmd_table1(cli, *max_n),
        Command::Table2 { bases } => cmd_table2(cli, bases),
        Command::Upper { k, empirical_n } => cmd_upper(cli, *k, *empirical_n),
        Command::Construct { b, n, limit, verify } => cmd_construct(cli, *b, *n, *limit, *verify),
        Command::Verify => cmd_verify(cli),
    }
}

fn require_slow(cli: &Cli, what: String) -> Result<(), Error> {
    if cli.slow {
        Ok(())
    } else {
        Err(Error::ResourceLimit(format!("{what}; pass --slow to run it")))
    }
}

/// Constants print at 6 decimals, exponentials at 4 (already floored).
fn c6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

fn count_json(r: &CountResult) -> serde_json::Value {
    json!({
        "kind": r.kind.name(),
        "n": r.n,
        "count": r.count.to_string(),
        "nth_root": r.nth_root,
        "engine": r.engine,
        "elapsed_ms": r.elapsed.as_millis() as u64,
    })
}

fn emit_record(cli: &Cli, command: &str, params: serde_json::Value, results: serde_json::Value) {
    if cli.format == Format::Json {
        println!(
            "{}",
            json!({
                "command": command,
                "params": params,
                "results": results,
            })
        );
    }
}

fn cmd_count(cli: &Cli, kind: &str, n: usize, engine: &str) -> Result<ExitCode, Error> {
    let kind: CompatKind = kind.parse()?;
    let engine: Engine = engine.parse()?;
    if n > SLOW_COUNT_N && !matches!(engine, Engine::Bruteforce) {
        require_slow(cli, format!("n = {n} is in the slow tier (above {SLOW_COUNT_N})"))?;
    }
    let r = count_permutations(kind, n, engine)?;
    match cli.format {
        Format::Text => println!(
            "count(kind={}, n={}) = {}  nth_root={:.4}  engine={}  elapsed={:?}",
            r.kind, r.n, r.count, r.nth_root, r.engine, r.elapsed
        ),
        Format::Csv => {
            println!("kind,n,count,nth_root,engine,elapsed_ms");
            println!(
                "{},{},\"{}\",{:.4},{},{}",
                r.kind,
                r.n,
                r.count,
                r.nth_root,
                r.engine,
                r.elapsed.as_millis()
            );
        }
        Format::Json => emit_record(
            cli,
            "count",
            json!({"kind": r.kind.name(), "n": n, "engine": format!("{engine:?}").to_lowercase()}),
            count_json(&r),
        ),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_table1(cli: &Cli, max_n: usize) -> Result<ExitCode, Error> {
    if max_n > SLOW_COUNT_N {
        require_slow(cli, format!("max-n = {max_n} is in the slow tier"))?;
    }
    let start = Instant::now();
    let rows = table1(max_n)?;
    match cli.format {
        Format::Text => {
            println!("{:>4} {:>16} {:>9} {:>16} {:>9}", "n", "#S_div", "root", "#S_lcm", "root");
            for row in &rows {
                println!(
                    "{:>4} {:>16} {:>9.4} {:>16} {:>9.4}",
                    row.n, row.div.count, row.div.nth_root, row.lcm.count, row.lcm.nth_root
                );
            }
        }
        Format::Csv => {
            println!("n,div_count,div_root,lcm_count,lcm_root");
            for row in &rows {
                println!(
                    "{},\"{}\",{:.4},\"{}\",{:.4}",
                    row.n, row.div.count, row.div.nth_root, row.lcm.count, row.lcm.nth_root
                );
            }
        }
        Format::Json => emit_record(
            cli,
            "table1",
            json!({"max_n": max_n}),
            json!({
                "rows": rows.iter().map(|row| json!({
                    "n": row.n,
                    "div": count_json(&row.div),
                    "lcm": count_json(&row.lcm),
                })).collect::<Vec<_>>(),
                "elapsed_ms": start.elapsed().as_millis() as u64,
            }),
        ),
    }
    Ok(ExitCode::SUCCESS)
}

/// Table-style 6-decimal constant: ".354987" for values below 1.
fn dot6(x: f64) -> String {
    let s = format!("{x:.6}");
    s.strip_prefix('0').map(str::to_owned).unwrap_or(s)
}

fn cmd_table2(cli: &Cli, bases: &[u64]) -> Result<ExitCode, Error> {
    let table = SpfTable::with_default_limit();
    let start = Instant::now();
    let mut rows = Vec::new();
    for &b in bases {
        if table.tau(b)? > fixtures::TABLE2_FAST_MAX_TAU {
            require_slow(cli, format!("τ({b}) > {} is the slow tier", fixtures::TABLE2_FAST_MAX_TAU))?;
        }
        rows.push(lower_bound_report(&table, b)?);
    }
    match cli.format {
        Format::Text => {
            for r in &rows {
                println!(
                    "b={}: {},{:.4},{},{:.4}",
                    r.b,
                    dot6(r.c_alpha),
                    r.exp_c_alpha,
                    dot6(r.cd_alpha),
                    r.exp_cd_alpha
                );
            }
        }
        Format::Csv => {
            println!("b,c_alpha,exp_c_alpha,cd_alpha,exp_cd_alpha");
            for r in &rows {
                println!(
                    "{},{:.6},{:.4},{:.6},{:.4}",
                    r.b, r.c_alpha, r.exp_c_alpha, r.cd_alpha, r.exp_cd_alpha
                );
            }
        }
        Format::Json => emit_record(
            cli,
            "table2",
            json!({"b": bases}),
            json!({
                "rows": rows.iter().map(|r| json!({
                    "b": r.b,
                    "c": c6(r.c),
                    "c_d": c6(r.c_d),
                    "alpha": {"num": r.alpha.numer().to_string(), "den": r.alpha.denom().to_string()},
                    "c_alpha": c6(r.c_alpha),
                    "exp_c_alpha": r.exp_c_alpha,
                    "cd_alpha": c6(r.cd_alpha),
                    "exp_cd_alpha": r.exp_cd_alpha,
                    "phi_variant": c6(r.phi_variant),
                    "p_lcm": r.p_lcm_values.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "p_div": r.p_div_values.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
                "elapsed_ms": start.elapsed().as_millis() as u64,
            }),
        ),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_upper(cli: &Cli, k: u64, empirical_n: Option<u64>) -> Result<ExitCode, Error> {
    let table = SpfTable::with_default_limit();
    let start = Instant::now();
    let r = upper_bound_report(&table, k, empirical_n)?;
    match cli.format {
        Format::Text => {
            print!(
                "k={}: yseq={:.4} xi={:.4} yi={:.4} x0_analytic={:.4} total_analytic={:.4}",
                r.k, r.yseq_const, r.xi_const, r.yi_const, r.x0_analytic, r.total_analytic
            );
            if let (Some(x0), Some(total), Some(n)) =
                (r.x0_empirical, r.total_empirical, r.empirical_n)
            {
                print!(" x0_empirical={x0:.4} total_empirical={total:.4} (n={n})");
            }
            println!();
        }
        Format::Csv => {
            println!("k,yseq,xi,yi,x0_analytic,total_analytic,x0_empirical,total_empirical,empirical_n");
            println!(
                "{},{:.6},{:.6},{:.6},{:.6},{:.6},{},{},{}",
                r.k,
                r.yseq_const,
                r.xi_const,
                r.yi_const,
                r.x0_analytic,
                r.total_analytic,
                r.x0_empirical.map_or(String::new(), |x| format!("{x:.6}")),
                r.total_empirical.map_or(String::new(), |x| format!("{x:.6}")),
                r.empirical_n.map_or(String::new(), |n| n.to_string()),
            );
        }
        Format::Json => emit_record(
            cli,
            "upper",
            json!({"k": k, "empirical_n": empirical_n}),
            json!({
                "yseq_const": c6(r.yseq_const),
                "xi_const": c6(r.xi_const),
                "yi_const": c6(r.yi_const),
                "x0_analytic": c6(r.x0_analytic),
                "total_analytic": c6(r.total_analytic),
                "x0_empirical": r.x0_empirical.map(c6),
                "total_empirical": r.total_empirical.map(c6),
                "empirical_n": r.empirical_n,
                "elapsed_ms": start.elapsed().as_millis() as u64,
            }),
        ),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_construct(cli: &Cli, b: u64, n: u64, limit: u64, verify: bool) -> Result<ExitCode, Error> {
    let table = SpfTable::with_default_limit();
    let start = Instant::now();
    let family = build_family(&table, b, n)?;
    let count = family_count(&table, &family)?;
    let members = emit_members(&table, &family, limit)?;
    let verified = if verify {
        let mut ok = 0usize;
        for m in &members {
            if is_lcm_member(m, n)? {
                ok += 1;
            }
        }
        Some((ok, members.len()))
    } else {
        None
    };
    if let Some((ok, total)) = verified {
        if ok != total {
            return Err(Error::Internal(format!(
                "{}/{total} emitted members verified",
                ok
            )));
        }
    }
    match cli.format {
        Format::Text => {
            print!(
                "construct(b={b}, n={n}): {} blocks ({} incl. singletons), family count {count}, {} members emitted",
                family.nontrivial_blocks(),
                family.blocks.len(),
                members.len()
            );
            if let Some((ok, total)) = verified {
                print!(", {ok}/{total} verified in S_lcm({n})");
            }
            println!("  [{:?}]", start.elapsed());
        }
        Format::Csv => {
            println!("b,n,blocks_nontrivial,blocks_total,family_count,members_emitted,members_verified");
            println!(
                "{b},{n},{},{},\"{}\",{},{}",
                family.nontrivial_blocks(),
                family.blocks.len(),
                count,
                members.len(),
                verified.map_or(String::new(), |(ok, _)| ok.to_string()),
            );
        }
        Format::Json => emit_record(
            cli,
            "construct",
            json!({"b": b, "n": n, "limit": limit, "verify": verify}),
            json!({
                "blocks_nontrivial": family.nontrivial_blocks(),
                "blocks_total": family.blocks.len(),
                "per_interval_counts": family.per_interval_counts,
                "family_count": count.to_string(),
                "members_emitted": members.len(),
                "members_verified": verified.map(|(ok, _)| ok),
                "elapsed_ms": start.elapsed().as_millis() as u64,
            }),
        ),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(cli: &Cli) -> Result<ExitCode, Error> {
    let table = SpfTable::with_default_limit();
    let start = Instant::now();
    let report = run_verify(&table)?;
    let all_pass = report.all_pass();
    match cli.format {
        Format::Text => {
            for item in &report.items {
                if item.pass {
                    println!("ok   {}", item.name);
                } else {
                    println!(
                        "FAIL {}: expected {}, got {}",
                        item.name, item.expected, item.actual
                    );
                }
            }
            println!(
                "verify: {}/{} checks passed in {:?}",
                report.items.iter().filter(|i| i.pass).count(),
                report.items.len(),
                start.elapsed()
            );
        }
        Format::Csv => {
            println!("name,pass,expected,actual");
            for item in &report.items {
                println!(
                    "{},{},\"{}\",\"{}\"",
                    item.name, item.pass, item.expected, item.actual
                );
            }
        }
        Format::Json => emit_record(
            cli,
            "verify",
            json!({}),
            json!({
                "all_pass": all_pass,
                "items": report.items.iter().map(|i| json!({
                    "name": i.name,
                    "expected": i.expected,
                    "actual": i.actual,
                    "pass": i.pass,
                })).collect::<Vec<_>>(),
                "elapsed_ms": start.elapsed().as_millis() as u64,
            }),
        ),
    }
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
