use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hermgrass_cli::{run, Budgets, Command, Format, Method, RunConfig, Suite};
use hermgrass_core::CodeFamily;

#[derive(Parser)]
#[command(name = "hermgrass", version, about = "Parameters and certificates for affine Hermitian Grassmann codes")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Output file (the generator matrix for `gen`, the report otherwise).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Tree,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Hermitian,
    Affine,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Formula,
    Witness,
    Subfield,
    Exhaustive,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Fields,
    Counts,
    Codes,
    Classifiers,
    Duals,
    All,
}

#[derive(Args)]
struct Code {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    ell: usize,
}

#[derive(Args)]
struct BudgetArgs {
    /// Messages a minimum-distance search may enumerate.
    #[arg(long, env = "HERMGRASS_BUDGET_MESSAGES")]
    budget_messages: Option<u128>,
    /// Column subsets per size the dual-distance search may examine.
    #[arg(long, env = "HERMGRASS_BUDGET_SUBSETS")]
    budget_subsets: Option<u128>,
}

impl BudgetArgs {
    fn resolve(&self) -> Budgets {
        let d = Budgets::default();
        Budgets {
            messages: self.budget_messages.unwrap_or(d.messages),
            subsets: self.budget_subsets.unwrap_or(d.subsets),
        }
    }
}

#[derive(Subcommand)]
enum Sub {
    /// Length, dimension and both distances from the closed forms.
    Params(Code),
    /// Build a generator matrix and write it in the matrix file format.
    Gen {
        #[command(flatten)]
        code: Code,
        #[arg(long, value_enum, default_value_t = FamilyArg::Hermitian)]
        family: FamilyArg,
    },
    /// Minimum distance certificate.
    Mindist {
        #[command(flatten)]
        code: Code,
        #[arg(long, value_enum, default_value_t = FamilyArg::Hermitian)]
        family: FamilyArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Subfield)]
        method: MethodArg,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
    /// Dual distance by minimal dependent column sets.
    Dualdist {
        #[command(flatten)]
        code: Code,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Restrict checks to one field size.
        #[arg(long)]
        q: Option<u32>,
        #[arg(long, default_value_t = hermgrass_cli::verify::DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
    /// Parameter table for both code families.
    Table {
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
}

fn config(cli: Cli) -> RunConfig {
    let family = |f: FamilyArg| match f {
        FamilyArg::Hermitian => CodeFamily::Hermitian,
        FamilyArg::Affine => CodeFamily::Affine,
    };
    let (command, q, ell, fam, budgets, seed) = match cli.command {
        Sub::Params(c) => (Command::Params, Some(c.q), Some(c.ell), None, None, None),
        Sub::Gen { code, family: f } => (Command::Gen, Some(code.q), Some(code.ell), Some(f), None, None),
        Sub::Mindist {
            code,
            family: f,
            method,
            budgets,
        } => {
            let m = match method {
                MethodArg::Formula => Method::Formula,
                MethodArg::Witness => Method::Witness,
                MethodArg::Subfield => Method::Subfield,
                MethodArg::Exhaustive => Method::Exhaustive,
            };
            (Command::MinDist(m), Some(code.q), Some(code.ell), Some(f), Some(budgets), None)
        }
        Sub::Dualdist { code, budgets } => (Command::DualDist, Some(code.q), Some(code.ell), None, Some(budgets), None),
        Sub::Verify { suite, q, seed, budgets } => {
            let s = match suite {
                SuiteArg::Fields => Suite::Fields,
                SuiteArg::Counts => Suite::Counts,
                SuiteArg::Codes => Suite::Codes,
                SuiteArg::Classifiers => Suite::Classifiers,
                SuiteArg::Duals => Suite::Duals,
                SuiteArg::All => Suite::All,
            };
            (Command::Verify(s), q, None, None, Some(budgets), Some(seed))
        }
        Sub::Table { ell, budgets } => (Command::Table, None, Some(ell), None, Some(budgets), None),
    };
    let mut c = RunConfig::new(command);
    c.q = q;
    c.ell = ell;
    if let Some(f) = fam {
        c.family = family(f);
    }
    if let Some(b) = budgets {
        c.budgets = b.resolve();
    }
    if let Some(s) = seed {
        c.seed = s;
    }
    c.out = cli.out;
    c.format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Tree => Format::Tree,
        FormatArg::Csv => Format::Csv,
    };
    c
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("usage error: {e}");
            return ExitCode::from(2);
        }
    }
    let cfg = config(cli);
    match run(&cfg) {
        Ok(outcome) => {
            if cfg.out.is_none() || matches!(cfg.command, Command::Gen) {
                print!("{}", outcome.output);
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
