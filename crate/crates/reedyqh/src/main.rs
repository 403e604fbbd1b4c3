//! Binary entry point: parse the command line, run one subcommand, print
//! the report as a table or JSON, and exit with the verdict's code
//! (0 pass, 1 fail, 2 operational error).

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use reedyqh::commands::{self, CmdResult, OpError, DEFAULT_SEED};
use reedyqh::report::{render_human, Report, Verdict, SCHEMA};
use reedyqh_core::diagrams::CotorsionPairSpec;

#[derive(Parser)]
#[command(
    name = "reedyqh",
    version,
    about = "Verify finite k-linear Reedy categories and compute their module and diagram homological algebra"
)]
struct Cli {
    /// Emit the report as JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum PairArg {
    /// Left class projectives, right class all modules.
    ProjAll,
    /// Left class all modules, right class injectives.
    AllInj,
}

impl PairArg {
    fn spec(self) -> CotorsionPairSpec {
        match self {
            PairArg::ProjAll => CotorsionPairSpec::ProjectivesAll,
            PairArg::AllInj => CotorsionPairSpec::AllInjectives,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a presentation, certify finiteness, and verify the category
    /// axioms and the Reedy structure.
    Check {
        file: PathBuf,
        /// Verifier self test: bump one structure constant (seeded) so the
        /// category check must fail.
        #[arg(long)]
        perturb: Option<u64>,
    },
    /// Dimension vectors of the standard and costandard modules.
    Standards { file: PathBuf },
    /// Certified complete list of simple modules.
    Simples { file: PathBuf },
    /// Standard filtration certificates: every representable, a direct
    /// sum spot check, and sampled modules over the lowering subcategory.
    Filtration {
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Ext dimensions between standard modules, checked against the
    /// exceptional-collection pattern.
    ExtTable {
        file: PathBuf,
        #[arg(long = "max-n", default_value_t = 4)]
        max_n: usize,
    },
    /// Tor dimensions between costandard and standard modules, checked
    /// against the Kronecker pattern.
    TorTable {
        file: PathBuf,
        #[arg(long = "max-n", default_value_t = 4)]
        max_n: usize,
    },
    /// Quasi-hereditary verification: composition multiplicities and
    /// kernel filtrations.
    Qh { file: PathBuf },
    /// Exact Borel verification: lowering standards are simple, induction
    /// is exact on samples and sends simples to standards.
    Borel {
        file: PathBuf,
        #[arg(long, default_value_t = 25)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Latching and matching objects of a diagram, with an independent
    /// cofinality cross-check at every object.
    Latching {
        file: PathBuf,
        /// Coefficient algebra presentation.
        #[arg(long)]
        coeff: PathBuf,
        /// Diagram file with a [diagram] section.
        #[arg(long)]
        diagram: PathBuf,
    },
    /// Skeleton and coskeleton of a diagram across cut degrees.
    Sk {
        file: PathBuf,
        #[arg(long)]
        coeff: PathBuf,
        #[arg(long)]
        diagram: PathBuf,
        /// Highest cut degree to report (default: max degree + 1).
        #[arg(long = "max-n")]
        max_n: Option<u32>,
    },
    /// Latching and matching class membership for every class spec.
    PhiPsi {
        file: PathBuf,
        #[arg(long)]
        coeff: PathBuf,
        #[arg(long)]
        diagram: PathBuf,
    },
    /// Special approximation sequence of a diagram for a complete
    /// cotorsion pair of coefficient modules.
    Approx {
        file: PathBuf,
        #[arg(long)]
        coeff: PathBuf,
        #[arg(long)]
        diagram: PathBuf,
        #[arg(long, value_enum, default_value_t = PairArg::ProjAll)]
        pair: PairArg,
    },
    /// Sampled lifting test: approximation sequences, class memberships,
    /// and the pairwise first-extension orthogonality matrix.
    LiftTest {
        file: PathBuf,
        #[arg(long)]
        coeff: PathBuf,
        #[arg(long, value_enum, default_value_t = PairArg::ProjAll)]
        pair: PairArg,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Render parsed inputs back to text, reparse, and compare the built
    /// structures entry by entry.
    Roundtrip {
        file: PathBuf,
        #[arg(long)]
        coeff: Option<PathBuf>,
        #[arg(long, requires = "coeff")]
        diagram: Option<PathBuf>,
    },
}

fn command_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Check { .. } => "check",
        Cmd::Standards { .. } => "standards",
        Cmd::Simples { .. } => "simples",
        Cmd::Filtration { .. } => "filtration",
        Cmd::ExtTable { .. } => "ext-table",
        Cmd::TorTable { .. } => "tor-table",
        Cmd::Qh { .. } => "qh",
        Cmd::Borel { .. } => "borel",
        Cmd::Latching { .. } => "latching",
        Cmd::Sk { .. } => "sk",
        Cmd::PhiPsi { .. } => "phi-psi",
        Cmd::Approx { .. } => "approx",
        Cmd::LiftTest { .. } => "lift-test",
        Cmd::Roundtrip { .. } => "roundtrip",
    }
}

fn dispatch(cmd: &Cmd) -> CmdResult {
    match cmd {
        Cmd::Check { file, perturb } => commands::cmd_check(file, *perturb),
        Cmd::Standards { file } => commands::cmd_standards(file),
        Cmd::Simples { file } => commands::cmd_simples(file),
        Cmd::Filtration {
            file,
            samples,
            seed,
        } => commands::cmd_filtration(file, *samples, *seed),
        Cmd::ExtTable { file, max_n } => commands::cmd_ext_table(file, *max_n),
        Cmd::TorTable { file, max_n } => commands::cmd_tor_table(file, *max_n),
        Cmd::Qh { file } => commands::cmd_qh(file),
        Cmd::Borel {
            file,
            samples,
            seed,
        } => commands::cmd_borel(file, *samples, *seed),
        Cmd::Latching {
            file,
            coeff,
            diagram,
        } => commands::cmd_latching(file, coeff, diagram),
        Cmd::Sk {
            file,
            coeff,
            diagram,
            max_n,
        } => commands::cmd_sk(file, coeff, diagram, *max_n),
        Cmd::PhiPsi {
            file,
            coeff,
            diagram,
        } => commands::cmd_phi_psi(file, coeff, diagram),
        Cmd::Approx {
            file,
            coeff,
            diagram,
            pair,
        } => commands::cmd_approx(file, coeff, diagram, pair.spec()),
        Cmd::LiftTest {
            file,
            coeff,
            pair,
            samples,
            seed,
        } => commands::cmd_lift_test(file, coeff, pair.spec(), *samples, *seed),
        Cmd::Roundtrip {
            file,
            coeff,
            diagram,
        } => commands::cmd_roundtrip(file, coeff.as_deref(), diagram.as_deref()),
    }
}

fn main() {
    let cli = Cli::parse();
    let start = Instant::now();
    let name = command_name(&cli.cmd);
    let (verdict, payload, warnings) = match dispatch(&cli.cmd) {
        Ok(out) => out,
        Err(OpError(msg)) => {
            eprintln!("error: {msg}");
            (Verdict::Error, json!({ "message": msg }), Vec::new())
        }
    };
    let report = Report {
        schema: SCHEMA.to_string(),
        command: name.to_string(),
        verdict,
        payload,
        warnings,
        timing_ms: start.elapsed().as_millis() as u64,
    };
    if cli.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
    } else {
        print!("{}", render_human(&report));
    }
    std::process::exit(report.verdict.exit_code());
}
