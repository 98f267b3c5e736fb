//! Command-line surface for the exact arithmetic library: class-number
//! tables, L-value queries, coefficient tables, restriction series, and
//! the relation verifiers, with CSV/JSON artifacts and a persistent
//! L-value cache.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use hq_core::cache::LValueCache;
use hq_core::cohen::coeff_table;
use hq_core::dirichlet::{cohen_h, hurwitz_h, rational_str, verify_classical};
use hq_core::fchar::relative_discriminant;
use hq_core::field::{parse_elt, RealQuadField, RestrictionUnit};
use hq_core::ideal::{parse_ideal, TrivialCharacter};
use hq_core::qseries::{
    restrict, verify_corollary_k1, verify_sum_of_squares, verify_theorem_consts,
    verify_theta_identity,
};
use hq_core::report::RelationReport;
use hq_core::shintani::hecke_l_neg;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "hq",
    about = "Exact Hecke L-values over real quadratic fields and the q-expansion identities they satisfy",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Path of the persistent L-value cache (HQ_CACHE overrides).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,

    /// Trial-division bound for factorizations.
    #[arg(long, global = true, default_value_t = hq_core::DEFAULT_FACTOR_BOUND)]
    factor_bound: i128,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the artifact here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Artifact format.
    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Hurwitz class numbers H(N) for 0 <= N <= max.
    Hurwitz {
        #[arg(long)]
        max: i128,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Generalized class numbers H(r, N) for 0 <= N <= max.
    Cohen {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        max: i128,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact L-value of the quadratic character attached to x at 1-k.
    Lvalue {
        #[arg(long)]
        disc: i128,
        #[arg(long)]
        x: String,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value = "trivial")]
        chiprime: String,
    },
    /// Coefficient table of the weight-(kappa+1/2) Eisenstein series.
    Gtable {
        #[arg(long)]
        disc: i128,
        #[arg(long)]
        kappa: u32,
        #[arg(long)]
        prec: i128,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Diagonal restriction of the coefficient table as a q-expansion.
    Restrict {
        #[arg(long)]
        disc: i128,
        #[arg(long)]
        kappa: u32,
        #[arg(long)]
        prec: i128,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Relative discriminant, conductor, and character values.
    Fchar {
        #[arg(long)]
        disc: i128,
        #[arg(long)]
        x: String,
        #[arg(long)]
        ideal: Option<String>,
    },
    /// Exact verification of the stated linear relations.
    Verify {
        #[command(subcommand)]
        relation: VerifyCommand,
    },
    /// Run the full acceptance checks.
    Selftest,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Classical class-number relations over the rationals.
    Classical {
        #[arg(long, default_value_t = 300)]
        max: i128,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Restricted theta series against the two-squares series.
    Theta {
        #[arg(long)]
        disc: i128,
        #[arg(long, default_value_t = 500)]
        prec: i128,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Representation-number line sums against 2k-square counts.
    Sumsq {
        #[arg(long)]
        disc: i128,
        #[arg(long, default_value_t = 3)]
        kmax: u32,
        #[arg(long, default_value_t = 100)]
        prec: i128,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Weight-3/2 line sums against the Eisenstein pair.
    Corollary {
        #[arg(long)]
        disc: i128,
        #[arg(long, default_value_t = 50)]
        prec: i128,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Restriction constants and cusp residual at a given weight.
    Consts {
        #[arg(long)]
        disc: i128,
        #[arg(long, default_value_t = 1)]
        kappa: u32,
        #[arg(long, default_value_t = 30)]
        prec: i128,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn open_cache(cli: &Cli) -> LValueCache {
    let path = std::env::var_os("HQ_CACHE")
        .map(PathBuf::from)
        .or_else(|| cli.cache.clone());
    match path {
        Some(p) => LValueCache::with_file(&p),
        None => LValueCache::in_memory(),
    }
}

fn emit_table(rows: &[(String, String)], header: (&str, &str), output: &OutputArgs) -> Result<()> {
    let text = if output.format == "json" {
        let entries: Vec<serde_json::Value> = rows
            .iter()
            .map(|(k, v)| serde_json::json!({ header.0: k, header.1: v }))
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({
            "schema": 1,
            "rows": entries,
        }))?
    } else {
        let mut t = format!("{},{}\n", header.0, header.1);
        for (k, v) in rows {
            t.push_str(&format!("{k},{v}\n"));
        }
        t
    };
    write_out(&text, output)
}

fn write_out(text: &str, output: &OutputArgs) -> Result<()> {
    match &output.out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_report(report: &RelationReport, output: &OutputArgs) -> Result<()> {
    let text = if output.format == "json" {
        report.to_json()
    } else {
        report.to_csv()
    };
    write_out(&text, output)?;
    eprintln!(
        "{}: {} pass, {} fail",
        report.relation, report.summary.pass, report.summary.fail
    );
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    let cache = open_cache(cli);
    let bound = cli.factor_bound;
    let mut all_pass = true;
    match &cli.command {
        Command::Hurwitz { max, output } => {
            let rows: Vec<(String, String)> = (0..=*max)
                .map(|n| (n.to_string(), rational_str(&hurwitz_h(n))))
                .collect();
            emit_table(&rows, ("N", "H"), output)?;
        }
        Command::Cohen { r, max, output } => {
            if *r < 1 {
                bail!("r must be at least 1");
            }
            let rows: Vec<(String, String)> = (0..=*max)
                .map(|n| (n.to_string(), rational_str(&cohen_h(*r, n))))
                .collect();
            emit_table(&rows, ("N", "H"), output)?;
        }
        Command::Lvalue {
            disc,
            x,
            k,
            chiprime,
        } => {
            if chiprime != "trivial" {
                bail!("only the trivial class character is available from the command line");
            }
            let field = RealQuadField::new(*disc)?;
            let elt = parse_elt(x)?;
            let chi = relative_discriminant(&field, elt)?;
            let l = hecke_l_neg(&field, &chi, &TrivialCharacter, *k, &cache, bound)?;
            println!("{}", rational_str(&l.value));
            if l.parity_zero {
                eprintln!("note: value vanishes by sign parity");
            }
        }
        Command::Gtable {
            disc,
            kappa,
            prec,
            output,
        } => {
            let field = RealQuadField::new(*disc)?;
            let unit = RestrictionUnit::find(&field)?;
            let table =
                coeff_table(&field, *kappa, &TrivialCharacter, &unit, *prec, &cache, bound)?;
            let mut rows = vec![serde_json::json!({
                "xi": "0+0*w",
                "n": 0,
                "H": rational_str(&table.constant),
            })];
            for (xi, v) in &table.coeffs {
                rows.push(serde_json::json!({
                    "xi": xi.to_string(),
                    "n": table.unit.line_index(*xi),
                    "H": rational_str(v),
                }));
            }
            let text = serde_json::to_string_pretty(&serde_json::json!({
                "schema": 1,
                "disc": disc,
                "kappa": kappa,
                "prec": prec,
                "rows": rows,
            }))?;
            write_out(&text, output)?;
        }
        Command::Restrict {
            disc,
            kappa,
            prec,
            output,
        } => {
            let field = RealQuadField::new(*disc)?;
            let unit = RestrictionUnit::find(&field)?;
            let table =
                coeff_table(&field, *kappa, &TrivialCharacter, &unit, *prec, &cache, bound)?;
            let series = restrict(&field, &table);
            let rows: Vec<(String, String)> = (0..=series.prec())
                .map(|n| (n.to_string(), rational_str(series.coeff(n))))
                .collect();
            emit_table(&rows, ("n", "c"), output)?;
        }
        Command::Fchar { disc, x, ideal } => {
            let field = RealQuadField::new(*disc)?;
            let elt = parse_elt(x)?;
            let chi = relative_discriminant(&field, elt)?;
            println!("disc = {}", chi.disc.to_string_bracket());
            println!("cond = {}", chi.cond.to_string_bracket());
            if chi.square_class_flag {
                println!("square class: character is trivial");
            }
            if let Some(spec) = ideal {
                let i = parse_ideal(&field, spec)?;
                let v = chi.eval(&field, &i, bound)?;
                println!("chi({}) = {v}", i.to_string_bracket());
            }
        }
        Command::Verify { relation } => {
            all_pass = run_verify(relation, &cache, bound)?;
        }
        Command::Selftest => {
            all_pass = selftest(&cache, bound)?;
        }
    }
    cache.persist()?;
    Ok(all_pass)
}

fn run_verify(relation: &VerifyCommand, cache: &LValueCache, bound: i128) -> Result<bool> {
    let mut pass = true;
    match relation {
        VerifyCommand::Classical { max, output } => {
            for rep in verify_classical(*max) {
                pass &= rep.all_pass();
                emit_report(&rep, output)?;
            }
        }
        VerifyCommand::Theta { disc, prec, output } => {
            let field = RealQuadField::new(*disc)?;
            let rep = verify_theta_identity(&field, *prec)?;
            pass &= rep.all_pass();
            emit_report(&rep, output)?;
        }
        VerifyCommand::Sumsq {
            disc,
            kmax,
            prec,
            output,
        } => {
            let field = RealQuadField::new(*disc)?;
            let rep = verify_sum_of_squares(&field, *kmax, *prec, true)?;
            pass &= rep.all_pass();
            emit_report(&rep, output)?;
        }
        VerifyCommand::Corollary { disc, prec, output } => {
            let field = RealQuadField::new(*disc)?;
            let rep = verify_corollary_k1(&field, *prec, cache, bound)?;
            pass &= rep.all_pass();
            emit_report(&rep, output)?;
        }
        VerifyCommand::Consts {
            disc,
            kappa,
            prec,
            output,
        } => {
            let field = RealQuadField::new(*disc)?;
            let rep = verify_theorem_consts(&field, *kappa, *prec, cache, bound)?;
            pass &= rep.all_pass();
            emit_report(&rep, output)?;
        }
    }
    Ok(pass)
}

fn selftest(cache: &LValueCache, bound: i128) -> Result<bool> {
    let mut all = true;
    let mut check = |name: &str, ok: bool| {
        println!("{}: {}", name, if ok { "PASS" } else { "FAIL" });
        all &= ok;
    };

    for d in [5i128, 8, 13] {
        let field = RealQuadField::new(d)?;
        let rep = verify_theta_identity(&field, 500)?;
        check(&format!("theta restriction D={d} (n <= 500)"), rep.all_pass());
    }
    for d in [5i128, 8, 13] {
        let field = RealQuadField::new(d)?;
        let rep = verify_sum_of_squares(&field, 3, 100, true)?;
        check(
            &format!("sum-of-squares D={d} (k <= 3, n <= 100)"),
            rep.all_pass(),
        );
    }
    for d in [5i128, 8, 13, 17, 24, 29] {
        let field = RealQuadField::new(d)?;
        let ok = hq_core::shintani::zeta_f_neg(&field, -1, cache, bound).is_ok()
            && hq_core::shintani::zeta_f_neg(&field, -3, cache, bound).is_ok();
        check(&format!("zeta special values D={d}"), ok);
    }
    for d in [5i128, 8, 13] {
        let field = RealQuadField::new(d)?;
        let rep = verify_corollary_k1(&field, 50, cache, bound)?;
        check(&format!("weight-3/2 lines D={d} (n <= 50)"), rep.all_pass());
    }
    for (d, kappa, prec) in [(5i128, 1u32, 50i128), (5, 2, 30)] {
        let field = RealQuadField::new(d)?;
        let rep = verify_theorem_consts(&field, kappa, prec, cache, bound)?;
        check(
            &format!("restriction constants D={d} kappa={kappa} (n <= {prec})"),
            rep.all_pass(),
        );
    }
    let classical_ok = verify_classical(300).iter().all(|r| r.all_pass());
    check("classical relations (N <= 300)", classical_ok);
    Ok(all)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
