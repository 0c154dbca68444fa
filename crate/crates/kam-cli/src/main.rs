//! `kam`: a command-line workbench for finite Kleene algebras and modules.

mod commands;
mod format;
mod report;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use commands::{CommandError, Context};
use kam_core::Limits;

#[derive(Parser)]
#[command(name = "kam", version, about = "Workbench for finite Kleene algebras and modules")]
struct Cli {
    /// Largest carrier accepted for any algebra or module.
    #[arg(long, global = true, default_value_t = 65_536)]
    max_carrier: usize,
    /// Largest number of candidate maps enumerated for hom sets.
    #[arg(long, global = true, default_value_t = 1_048_576)]
    hom_bound: u64,
    /// Seed echoed into reports; all computations are deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the produced structure or witness file here.
    #[arg(long, global = true)]
    emit: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Kleene algebra checks.
    Ka {
        #[command(subcommand)]
        sub: KaCmd,
    },
    /// Module constructions and checks.
    Module {
        #[command(subcommand)]
        sub: ModuleCmd,
    },
    /// Tensor products: `tensor M N`, `tensor adjunction M N P`,
    /// `tensor laws M N P`.
    Tensor(TensorArgs),
    /// Morita equivalence constructions.
    Morita {
        #[command(subcommand)]
        sub: MoritaCmd,
    },
    /// Re-verify an emitted structure or witness file.
    Verify { file: String },
}

#[derive(Subcommand)]
enum KaCmd {
    /// Check the Kleene algebra axioms of every algebra in the input.
    Check { input: String },
    /// Print the star table computed by saturation and cross-check it.
    Star { input: String },
}

#[derive(Subcommand)]
enum ModuleCmd {
    /// Check the module laws of every module in the input.
    Check { input: String },
    /// Build the free module of the given rank.
    Free {
        algebra: String,
        rank: usize,
        #[arg(long, default_value = "bi")]
        side: String,
    },
    /// Build the dual module.
    Dual {
        module: String,
        #[arg(long)]
        side: Option<String>,
    },
    /// Build the homomorphism module Hom(M, N).
    Hom { left: String, right: String },
    /// Quotient a module by generated identifications, e.g. --pairs 1=2,0=3.
    Quotient {
        module: String,
        #[arg(long)]
        pairs: String,
    },
    /// Decide isomorphism of two modules.
    Iso { left: String, right: String },
}

#[derive(Args)]
struct TensorArgs {
    /// `M N`, or `adjunction M N P`, or `laws M N P`.
    args: Vec<String>,
    /// Construction path for the plain product: auto, fast, exhaustive.
    #[arg(long, default_value = "auto")]
    path: String,
}

#[derive(Subcommand)]
enum MoritaCmd {
    /// Build and verify the equivalence of K with its n x n matrix algebra.
    Matrix { algebra: String, n: usize },
    /// Scan an algebra for idempotents and report which are full.
    FullIdempotents { algebra: String },
    /// Build the corner algebra at an idempotent.
    Corner {
        algebra: String,
        #[arg(long)]
        idempotent: String,
    },
    /// Lift a semiring equivalence through a full idempotent of M_n(K).
    Lift {
        algebra: String,
        n: usize,
        #[arg(long)]
        idempotent: String,
    },
    /// Build the homomorphism module of an algebra homomorphism.
    HomModule { hom: String },
    /// Verify E_(g.f) ~ E_f (x) E_g for homomorphisms f and g.
    ComposeLaw { f: String, g: String },
}

fn run(cli: Cli) -> (report::Report, i32) {
    let ctx = Context {
        limits: Limits::default()
            .with_max_carrier(cli.max_carrier)
            .with_hom_bound(cli.hom_bound),
        seed: cli.seed,
        emit: cli.emit.clone(),
    };
    let (echo, result) = match &cli.command {
        Cmd::Ka { sub } => match sub {
            KaCmd::Check { input } => (format!("ka check {input}"), commands::ka_check(&ctx, input)),
            KaCmd::Star { input } => (format!("ka star {input}"), commands::ka_star(&ctx, input)),
        },
        Cmd::Module { sub } => match sub {
            ModuleCmd::Check { input } => (
                format!("module check {input}"),
                commands::module_check(&ctx, input),
            ),
            ModuleCmd::Free { algebra, rank, side } => (
                format!("module free {algebra} {rank}"),
                commands::module_free(&ctx, algebra, *rank, side),
            ),
            ModuleCmd::Dual { module, side } => (
                format!("module dual {module}"),
                commands::module_dual(&ctx, module, side.as_deref()),
            ),
            ModuleCmd::Hom { left, right } => (
                format!("module hom {left} {right}"),
                commands::module_hom(&ctx, left, right),
            ),
            ModuleCmd::Quotient { module, pairs } => (
                format!("module quotient {module}"),
                commands::module_quotient(&ctx, module, pairs),
            ),
            ModuleCmd::Iso { left, right } => (
                format!("module iso {left} {right}"),
                commands::module_iso(&ctx, left, right),
            ),
        },
        Cmd::Tensor(args) => {
            let echo = format!("tensor {}", args.args.join(" "));
            let result = match args.args.first().map(|s| s.as_str()) {
                Some("adjunction") if args.args.len() == 4 => {
                    commands::tensor_adjunction(&ctx, &args.args[1], &args.args[2], &args.args[3])
                }
                Some("laws") if args.args.len() == 4 => {
                    commands::tensor_laws(&ctx, &args.args[1], &args.args[2], &args.args[3])
                }
                Some(_) if args.args.len() == 2 => {
                    commands::tensor_product_cmd(&ctx, &args.args[0], &args.args[1], &args.path)
                }
                _ => Err(CommandError::Usage(
                    "expected `tensor M N`, `tensor adjunction M N P`, or `tensor laws M N P`"
                        .to_string(),
                )),
            };
            (echo, result)
        }
        Cmd::Morita { sub } => match sub {
            MoritaCmd::Matrix { algebra, n } => (
                format!("morita matrix {algebra} {n}"),
                commands::morita_matrix(&ctx, algebra, *n),
            ),
            MoritaCmd::FullIdempotents { algebra } => (
                format!("morita full-idempotents {algebra}"),
                commands::morita_full_idempotents(&ctx, algebra),
            ),
            MoritaCmd::Corner { algebra, idempotent } => (
                format!("morita corner {algebra}"),
                commands::morita_corner(&ctx, algebra, idempotent),
            ),
            MoritaCmd::Lift {
                algebra,
                n,
                idempotent,
            } => (
                format!("morita lift {algebra} {n}"),
                commands::morita_lift(&ctx, algebra, *n, idempotent),
            ),
            MoritaCmd::HomModule { hom } => (
                format!("morita hom-module {hom}"),
                commands::morita_hom_module(&ctx, hom),
            ),
            MoritaCmd::ComposeLaw { f, g } => (
                format!("morita compose-law {f} {g}"),
                commands::morita_compose_law(&ctx, f, g),
            ),
        },
        Cmd::Verify { file } => (format!("verify {file}"), commands::verify(&ctx, file)),
    };
    match result {
        Ok(report) => {
            let code = report.verdict.exit_code();
            (report, code)
        }
        Err(err) => {
            let report = commands::error_report(&echo, ctx.seed, &err);
            (report, 2)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let start = Instant::now();
    let (report, code) = run(cli);
    print!("{}", report.render());
    eprintln!("# elapsed_ms: {}", start.elapsed().as_millis());
    std::process::exit(code);
}
