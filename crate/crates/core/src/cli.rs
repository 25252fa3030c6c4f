//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a mathematical check fails, 2 on usage,
//! parse or capacity errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::abelian::AbelianGroup;
use crate::cocycle::Cocycle;
use crate::cohomology::z2_b2_h2_with;
use crate::embedding::embed;
use crate::error::Error;
use crate::examples::{carry_report, heisenberg_report};
use crate::io::{parse_bilinear, parse_cocycle, parse_group_arg, to_json, BilinearJson, CocycleJson, EmbeddingJson, GroupJson};
use crate::properties::{run_suite, SuiteConfig};
use crate::twisted::{ExtensionGroup, StructureReport};
use crate::Limits;

#[derive(Parser, Debug)]
#[command(name = "centext", version, about = "Central extensions of finite abelian groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Print timings to stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(flatten)]
    pub limits: LimitArgs,
}

#[derive(Args, Debug, Clone)]
pub struct LimitArgs {
    /// Largest |A| for a full H² computation.
    #[arg(long, global = true, default_value_t = Limits::default().max_h2_order as u64)]
    pub max_h2_order: u64,
    /// Largest |G| for extension groups.
    #[arg(long, global = true, default_value_t = Limits::default().max_group_order as u64)]
    pub max_group_order: u64,
    /// Largest |A| for a coboundary search.
    #[arg(long, global = true, default_value_t = Limits::default().max_cohomologous_order as u64)]
    pub max_cohomologous_order: u64,
    /// Largest number of bilinear candidates to enumerate.
    #[arg(long, global = true, default_value_t = Limits::default().max_bilinear_candidates as u64)]
    pub max_bilinear_candidates: u64,
}

/// Ceiling on user-raised bounds, so a typo cannot exhaust memory.
const HARD_LIMIT: u64 = 1 << 16;

impl LimitArgs {
    fn to_limits(&self) -> Result<Limits, CliError> {
        let all = [
            self.max_h2_order,
            self.max_group_order,
            self.max_cohomologous_order,
            self.max_bilinear_candidates,
        ];
        if let Some(v) = all.iter().find(|&&v| v > HARD_LIMIT) {
            return Err(CliError::Usage(format!("bound {v} exceeds the hard limit {HARD_LIMIT}")));
        }
        Ok(Limits {
            max_h2_order: self.max_h2_order as u128,
            max_group_order: self.max_group_order as u128,
            max_cohomologous_order: self.max_cohomologous_order as u128,
            max_bilinear_candidates: self.max_bilinear_candidates as u128,
            ..Limits::default()
        })
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check normalization and the cocycle identity.
    Validate {
        #[arg(long)]
        cocycle: PathBuf,
    },
    /// Compute H²(A, B) with its bilinear and Ext subgroups.
    H2 {
        /// Group as `[d1, ...]` or a group JSON document.
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Include representative tables in the report.
        #[arg(long)]
        representatives: bool,
    },
    /// Decide whether two cocycles differ by a coboundary.
    Cohomologous {
        #[arg(long)]
        first: PathBuf,
        #[arg(long)]
        second: PathBuf,
    },
    /// Structure of the extension group, and a bilinear representative of
    /// its class if one exists.
    Twist {
        #[arg(long, conflicts_with = "bilinear", required_unless_present = "bilinear")]
        cocycle: Option<PathBuf>,
        #[arg(long)]
        bilinear: Option<PathBuf>,
    },
    /// Embed the extension group into a twisted product with divisible kernel.
    Embed {
        #[arg(long)]
        cocycle: PathBuf,
    },
    /// Reproduce the worked examples.
    PaperExamples {
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
        #[arg(long, default_value_t = 3)]
        p: u64,
    },
    /// Run the property suite.
    Check {
        #[arg(long, default_value_t = SuiteConfig::default().random_matrices)]
        matrices: usize,
        #[arg(long, default_value_t = SuiteConfig::default().seed)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    /// The carry extension Z/p → Z/p² → Z/p.
    Carry,
    /// The extension of Z/p by (Z/p)³ with z^p = [x, y].
    HeisenbergCarry,
    All,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Math(Value),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconsistent(_) | Error::NotAlternating(_) | Error::CommutatorIncompatible(..) => {
                CliError::Math(json!({ "error": e.to_string() }))
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

/// Parses `argv` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let start = Instant::now();
    let outcome = execute(&cli);
    if cli.verbose > 0 {
        eprintln!("{:?} finished in {:.3} s", cli.command, start.elapsed().as_secs_f64());
    }
    let (report, code) = match outcome {
        Ok((report, ok)) => (report, if ok { 0 } else { 1 }),
        Err(CliError::Math(report)) => (report, 1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    let text = to_json(&report);
    let written = match &cli.out {
        Some(path) => fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return 2;
    }
    code
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_cocycle(path: &PathBuf) -> Result<Cocycle, CliError> {
    Ok(parse_cocycle(&read(path)?)?)
}

fn group_json(g: &AbelianGroup) -> Value {
    json!(GroupJson::from(g))
}

fn structure_json(s: &StructureReport) -> Value {
    json!({
        "order": s.order,
        "exponent": s.exponent,
        "order_histogram": s.order_histogram,
        "center_order": s.center_order,
        "derived_subgroup": group_json(&s.derived_subgroup),
        "abelianization": group_json(&s.abelianization),
        "abelian": s.is_abelian,
        "nilpotency_class": s.nilpotency_class,
    })
}

fn execute(cli: &Cli) -> Result<(Value, bool), CliError> {
    let limits = cli.limits.to_limits()?;
    match &cli.command {
        Command::Validate { cocycle } => {
            let c = load_cocycle(cocycle)?;
            let r = c.validate();
            Ok((json!(r), r.passed()))
        }
        Command::H2 { a, b, representatives } => {
            let a = parse_group_arg(a)?;
            let b = parse_group_arg(b)?;
            let h2 = z2_b2_h2_with(&a, &b, &limits)?;
            let bil = h2.bilinear_subgroup()?;
            let ext = h2.ext_subgroup()?;
            let mut report = json!({
                "a": group_json(&a),
                "b": group_json(&b),
                "h2": group_json(h2.abstract_group()),
                "order": h2.abstract_group().order(),
                "z2_order": h2.z2_order(),
                "b2_order": h2.b2_order(),
                "representative_count": h2.representatives().len(),
                "bilinear_subgroup": group_json(&bil.subgroup.group),
                "ext_subgroup": group_json(&ext.group),
            });
            if *representatives {
                report["representatives"] = json!(h2.representatives().iter().map(CocycleJson::from).collect::<Vec<_>>());
            }
            Ok((report, true))
        }
        Command::Cohomologous { first, second } => {
            let x = load_cocycle(first)?;
            let y = load_cocycle(second)?;
            let w = x.cohomologous_with(&y, &limits)?;
            let report = json!({
                "cohomologous": w.is_some(),
                "witness": w.map(|h| h.values().to_vec()),
            });
            Ok((report, true))
        }
        Command::Twist { cocycle, bilinear } => {
            let gamma = match (cocycle, bilinear) {
                (Some(p), _) => load_cocycle(p)?,
                (None, Some(p)) => parse_bilinear(&read(p)?)?.to_cocycle()?,
                (None, None) => return Err(CliError::Usage("need --cocycle or --bilinear".into())),
            };
            let v = gamma.validate();
            if !v.passed() {
                return Err(CliError::Math(json!({ "validation": v })));
            }
            let g = ExtensionGroup::build_with(&gamma, &limits)?;
            let rep = g.is_twisted_product_class_with(&limits)?;
            let report = json!({
                "structure": structure_json(&g.structure_report()?),
                "bilinear_representative": rep.as_ref().map(BilinearJson::from),
            });
            Ok((report, true))
        }
        Command::Embed { cocycle } => {
            let gamma = load_cocycle(cocycle)?;
            let v = gamma.validate();
            if !v.passed() {
                return Err(CliError::Math(json!({ "validation": v })));
            }
            let g = ExtensionGroup::build_with(&gamma, &limits)?;
            let r = embed(&g)?;
            let report = json!({
                "embedding": EmbeddingJson::from(&r),
                "target_abelian": r.target_is_abelian(),
                "checks": {
                    "additivity": r.report.additivity,
                    "restriction_is_j": r.report.restriction_is_j,
                    "power_formula": r.report.power_formula,
                    "commutator_formula": r.report.commutator_formula,
                    "phi_injective": r.report.phi_injective,
                    "phi_homomorphism": r.report.phi_homomorphism,
                    "coboundary_witness": r.report.coboundary_witness,
                },
            });
            Ok((report, r.report.passed()))
        }
        Command::PaperExamples { which, p } => {
            if *p < 2 || *p > 7 {
                return Err(CliError::Usage(format!("--p must be between 2 and 7, got {p}")));
            }
            let mut report = json!({});
            let mut ok = true;
            if matches!(which, Which::Carry | Which::All) {
                let r = carry_report(*p)?;
                // At p = 2 the carry cocycle is itself bilinear.
                ok &= r.valid && r.bilinear_representative == (*p == 2) && r.cyclic && r.witness_holds;
                report["carry"] = json!(r);
            }
            if matches!(which, Which::HeisenbergCarry | Which::All) {
                let r = heisenberg_report(*p)?;
                ok &= r.valid && r.presentation_holds && r.embedding_verified;
                report["heisenberg_carry"] = json!(r);
            }
            Ok((report, ok))
        }
        Command::Check { matrices, seed } => {
            let r = run_suite(&SuiteConfig {
                random_matrices: *matrices,
                seed: *seed,
            });
            if cli.verbose > 0 {
                for o in &r.outcomes {
                    eprintln!("{:<32} {:>6} cases {:>8} ms {}", o.name, o.cases, o.millis, if o.passed { "ok" } else { "FAIL" });
                }
            }
            Ok((json!(r), r.passed()))
        }
    }
}
