//! `succinct`: generators, checkers, converters and bounded searches over
//! the repository's text formats.
//!
//! Exit codes: 0 valid/found, 1 invalid/absent, 2 input or validation
//! error, 3 resource cap exceeded.

mod error;
mod formats;

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use succinct_core::acceptance;
use succinct_core::bits::State;
use succinct_core::circuit::{identity_circuit, increment_circuit, Circuit};
use succinct_core::ltl::{
    check_succinct_model, find_model, ltl_eval, CheckMode, LassoModel, Ltl, TableauLimits,
};
use succinct_core::plan::{
    bounded_succinct_plan_exists, plan_from_text, search_plan, simulate, simulate_repr,
    PlanSearchLimits, PolyplanInstance, SimulateOptions, Verdict,
};
use succinct_core::proplogic::cnf::Cnf3Encoding;
use succinct_core::proplogic::{eval_formula, Formula};
use succinct_core::qbf::{
    bounded_model_exists, check_model, hard_family, DirectionalModel, ModelSearchLimits, Qbf,
};
use succinct_core::seq::{convert, ExpandLimits, PlanSeqRepr, SeqKind};

use error::CliError;

#[derive(Parser)]
#[command(name = "succinct", version, about = "circuit-backed succinct representations: generate, check, convert, search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate instances, formulas and sequences
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Check objects against instances or formulas
    Check {
        #[command(subcommand)]
        what: CheckCommand,
    },
    /// Convert a sequence representation to another kind
    Convert {
        /// Sequence file
        input: PathBuf,
        /// Target kind
        #[arg(long, value_enum)]
        to: KindArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bounded-size searches
    Solve {
        #[command(subcommand)]
        what: SolveCommand,
    },
    /// Evaluate circuits and formulas
    Eval {
        #[command(subcommand)]
        what: EvalCommand,
    },
    /// Run the cross-validation suite
    Oracle {
        /// Run a single criterion (1-13)
        #[arg(long)]
        only: Option<usize>,
        /// Seed for the randomized suites
        #[arg(long, default_value_t = 0xC0DE)]
        seed: u64,
        /// Machine-readable report
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Ts,
    Ss,
    Ta,
    Sa,
}

impl KindArg {
    fn kind(self) -> SeqKind {
        match self {
            KindArg::Ts => SeqKind::TimeState,
            KindArg::Ss => SeqKind::NextState,
            KindArg::Ta => SeqKind::TimeAction,
            KindArg::Sa => SeqKind::NextAction,
        }
    }
}

#[derive(Args)]
struct EncodingArgs {
    /// Variables of the encoded 3CNF formulas
    #[arg(short = 'r', long)]
    vars: usize,
    /// Clauses of the encoded 3CNF formulas
    #[arg(short = 'c', long)]
    clauses: usize,
}

impl EncodingArgs {
    fn encoding(&self) -> Result<Cnf3Encoding, CliError> {
        if self.vars == 0 || self.clauses == 0 {
            return Err(CliError::input("encoding needs at least one variable and one clause"));
        }
        Ok(Cnf3Encoding::new(self.vars, self.clauses))
    }
}

#[derive(Subcommand)]
enum GenCommand {
    /// The alternating validity family whose minimal models grow with k
    QbfHard {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Next-state sequence scanning all formulas of an encoding
    SatNextState {
        #[command(flatten)]
        enc: EncodingArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time/action sequence revealing satisfiability (single formula flag
    /// variant, or the chunked all-formulas variant)
    SatTimeAction {
        #[command(flatten)]
        enc: EncodingArgs,
        #[arg(long, value_enum)]
        variant: TimeActionVariant,
        /// Formula number for the flag variant
        #[arg(long)]
        formula_index: Option<u128>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Next-action sequence whose chunk-final actions reveal satisfiability
    SatNextAction {
        #[command(flatten)]
        enc: EncodingArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Function-based time/state sequences (pair or chunked layout)
    FunctionSeq {
        /// `identity`, `increment`, or a circuit file
        #[arg(long)]
        function: String,
        /// Width for the built-in functions
        #[arg(long)]
        bits: Option<usize>,
        #[arg(long, value_enum)]
        variant: FunctionVariant,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Counter instance whose plans are longer than k
    LongPlan {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Instance with exactly one plan, spelling out a satisfiability table
    UniquePlan {
        #[command(flatten)]
        enc: EncodingArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Planning instance with a plan exactly when the two-block formula
    /// `exists X forall Y . E` is valid
    PlanFromQbf {
        qbf: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TimeActionVariant {
    Flag,
    Chunked,
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctionVariant {
    Pair,
    Chunk,
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Check a directional model against a QBF
    Model { qbf: PathBuf, model: PathBuf },
    /// Check an explicit plan or a sequence representation against an
    /// instance
    Plan { instance: PathBuf, plan: PathBuf },
    /// Validate a sequence representation against its own action set
    Seq { seq: PathBuf },
    /// Evaluate an LTL formula on a lasso model
    Lasso {
        #[arg(long)]
        formula: String,
        lasso: PathBuf,
        #[arg(long, default_value_t = 0)]
        pos: usize,
    },
    /// Parse a file and report whether it is well formed
    WellFormed { file: PathBuf },
}

#[derive(Subcommand)]
enum SolveCommand {
    /// Search for a directional model of total size at most --size
    Qbf {
        qbf: PathBuf,
        #[arg(long)]
        size: u64,
        /// Require the size bound to stay within this budget, mirroring
        /// size bounds that are part of the input
        #[arg(long)]
        unary_budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a succinct plan representation of the given kind
    Plan {
        instance: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        size: u64,
        #[arg(long)]
        unary_budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find a shortest explicit plan by breadth-first search
    ExplicitPlan {
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a lasso model of an LTL formula
    Ltl {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum EvalCommand {
    /// Evaluate a circuit on an input bit string
    Circuit {
        circuit: PathBuf,
        #[arg(long)]
        input: String,
    },
    /// Evaluate an LTL formula on a lasso at a position
    Ltl {
        #[arg(long)]
        formula: String,
        lasso: PathBuf,
        #[arg(long, default_value_t = 0)]
        pos: usize,
    },
    /// Evaluate a propositional formula under an assignment
    Formula {
        #[arg(long)]
        formula: String,
        /// Comma-separated `atom=0|1` pairs
        #[arg(long, default_value = "")]
        assign: String,
    },
    /// Check a succinct lasso against an LTL formula
    Slasso {
        #[arg(long)]
        formula: String,
        slasso: PathBuf,
        #[arg(long, value_enum, default_value = "expand")]
        mode: ModeArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Expand,
    Conjoin,
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn check_budget(size: u64, budget: Option<u64>) -> Result<(), CliError> {
    if let Some(budget) = budget {
        if size > budget {
            return Err(CliError::input(format!(
                "size bound {size} exceeds the budget of {budget}"
            )));
        }
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    });
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Gen { what } => run_gen(what),
        Command::Check { what } => run_check(what),
        Command::Convert { input, to, out } => {
            let repr = PlanSeqRepr::from_str(&read(&input)?)?;
            let converted = convert(&repr, to.kind())?;
            emit(&out, &converted.to_string())?;
            Ok(0)
        }
        Command::Solve { what } => run_solve(what),
        Command::Eval { what } => run_eval(what),
        Command::Oracle { only, seed, json } => run_oracle(only, seed, json),
    }
}

fn run_gen(what: GenCommand) -> Result<i32, CliError> {
    match what {
        GenCommand::QbfHard { k, out } => {
            let q = hard_family(k)?;
            emit(&out, &q.to_string())?;
        }
        GenCommand::SatNextState { enc, out } => {
            let scan = succinct_core::seq::gen::sat_scan_sequence(&enc.encoding()?)?;
            emit(&out, &scan.repr.to_string())?;
        }
        GenCommand::SatTimeAction { enc, variant, formula_index, out } => {
            let encoding = enc.encoding()?;
            let repr = match variant {
                TimeActionVariant::Flag => {
                    let index = formula_index.ok_or_else(|| {
                        CliError::input("the flag variant needs --formula-index")
                    })?;
                    let bits = encoding
                        .formula_bits(index)
                        .map_err(|e| CliError::input(e.to_string()))?;
                    succinct_core::seq::gen::sat_flag_sequence(&encoding, &bits)?.repr
                }
                TimeActionVariant::Chunked => {
                    succinct_core::seq::gen::sat_chunked_sequence(&encoding)?.repr
                }
            };
            emit(&out, &repr.to_string())?;
        }
        GenCommand::SatNextAction { enc, out } => {
            let scan = succinct_core::seq::gen::sat_state_action_sequence(&enc.encoding()?)?;
            emit(&out, &scan.repr.to_string())?;
        }
        GenCommand::FunctionSeq { function, bits, variant, out } => {
            let circuit = match function.as_str() {
                "identity" => identity_circuit(
                    bits.ok_or_else(|| CliError::input("--bits required for identity"))?,
                ),
                "increment" => increment_circuit(
                    bits.ok_or_else(|| CliError::input("--bits required for increment"))?,
                ),
                path => Circuit::from_str(&read(&PathBuf::from(path))?)?,
            };
            let repr = match variant {
                FunctionVariant::Pair => {
                    succinct_core::seq::gen::function_pair_sequence(&circuit)?
                }
                FunctionVariant::Chunk => {
                    succinct_core::seq::gen::function_chunk_sequence(&circuit)?
                }
            };
            emit(&out, &repr.to_string())?;
        }
        GenCommand::LongPlan { k, out } => {
            let inst = succinct_core::plan::long_plan_instance(k)?;
            emit(&out, &inst.to_string())?;
        }
        GenCommand::UniquePlan { enc, out } => {
            let unique = succinct_core::plan::unique_plan_instance(&enc.encoding()?)?;
            emit(&out, &unique.instance.to_string())?;
        }
        GenCommand::PlanFromQbf { qbf, out } => {
            let q = Qbf::from_str(&read(&qbf)?)?;
            let inst = succinct_core::plan::qbf_planning_instance(&q)?;
            emit(&out, &inst.to_string())?;
        }
    }
    Ok(0)
}

fn run_check(what: CheckCommand) -> Result<i32, CliError> {
    match what {
        CheckCommand::Model { qbf, model } => {
            let q = Qbf::from_str(&read(&qbf)?)?;
            let m = DirectionalModel::from_str(&read(&model)?)?;
            let ok = check_model(&q, &m)?;
            println!("{}", if ok { "model checks" } else { "model fails" });
            Ok(if ok { 0 } else { 1 })
        }
        CheckCommand::Plan { instance, plan } => {
            let inst = PolyplanInstance::from_str(&read(&instance)?)?;
            let text = read(&plan)?;
            let options = SimulateOptions::default();
            let verdict = if text.trim_start().starts_with("seq") {
                let repr = PlanSeqRepr::from_str(&text)?;
                simulate_repr(&inst, &repr, &options)?
            } else {
                let plan = plan_from_text(&inst, &text)?;
                simulate(&inst, &plan, &options)?
            };
            match verdict {
                Verdict::Valid => {
                    println!("plan is valid");
                    Ok(0)
                }
                Verdict::Failure { step, reason } => {
                    println!("plan fails at step {step}: {reason}");
                    Ok(1)
                }
            }
        }
        CheckCommand::Seq { seq } => {
            let repr = PlanSeqRepr::from_str(&read(&seq)?)?;
            let report = repr.validate(&ExpandLimits::default())?;
            for step in &report.steps {
                if !step.ok {
                    println!("step {}: no witnessing action", step.step);
                }
            }
            for (first, second) in &report.repetitions {
                println!("states {first} and {second} coincide");
            }
            println!("{}", if report.valid { "sequence is valid" } else { "sequence is invalid" });
            Ok(if report.valid { 0 } else { 1 })
        }
        CheckCommand::Lasso { formula, lasso, pos } => {
            let f = Ltl::parse(&formula)?;
            let m = LassoModel::from_str(&read(&lasso)?)?;
            let ok = ltl_eval(&f, &m, pos)?;
            println!("{}", if ok { "formula holds" } else { "formula fails" });
            Ok(if ok { 0 } else { 1 })
        }
        CheckCommand::WellFormed { file } => {
            let text = read(&file)?;
            formats::parse_any(&text)?;
            println!("well formed ({})", formats::sniff(&text).unwrap_or("unknown"));
            Ok(0)
        }
    }
}

fn run_solve(what: SolveCommand) -> Result<i32, CliError> {
    match what {
        SolveCommand::Qbf { qbf, size, unary_budget, out } => {
            check_budget(size, unary_budget)?;
            let q = Qbf::from_str(&read(&qbf)?)?;
            match bounded_model_exists(&q, size, &ModelSearchLimits::default())? {
                Some(model) => {
                    println!("model of size {} found", model.size());
                    emit(&out, &model.to_string())?;
                    Ok(0)
                }
                None => {
                    println!("no model within size {size}");
                    Ok(1)
                }
            }
        }
        SolveCommand::Plan { instance, kind, size, unary_budget, out } => {
            check_budget(size, unary_budget)?;
            let inst = PolyplanInstance::from_str(&read(&instance)?)?;
            match bounded_succinct_plan_exists(
                &inst,
                size,
                kind.kind(),
                &PlanSearchLimits::default(),
            )? {
                Some(repr) => {
                    println!(
                        "representation of size {} with {} steps found",
                        repr.circuit.size(),
                        repr.steps
                    );
                    emit(&out, &repr.to_string())?;
                    Ok(0)
                }
                None => {
                    println!("no representation within size {size}");
                    Ok(1)
                }
            }
        }
        SolveCommand::ExplicitPlan { instance, out } => {
            let inst = PolyplanInstance::from_str(&read(&instance)?)?;
            match search_plan(&inst, &PlanSearchLimits::default())? {
                Some(plan) => {
                    println!("plan with {} actions found", plan.len());
                    emit(&out, &succinct_core::plan::plan_to_text(&inst, &plan))?;
                    Ok(0)
                }
                None => {
                    println!("no plan exists");
                    Ok(1)
                }
            }
        }
        SolveCommand::Ltl { formula, out } => {
            let f = Ltl::parse(&formula)?;
            match find_model(&f, &TableauLimits::default())? {
                Some(model) => {
                    println!(
                        "model with {} initial states and period {}",
                        model.initial.len(),
                        model.period.len()
                    );
                    emit(&out, &model.to_string())?;
                    Ok(0)
                }
                None => {
                    println!("unsatisfiable");
                    Ok(1)
                }
            }
        }
    }
}

fn run_eval(what: EvalCommand) -> Result<i32, CliError> {
    match what {
        EvalCommand::Circuit { circuit, input } => {
            let c = Circuit::from_str(&read(&circuit)?)?;
            let bits = State::parse(&input).map_err(|e| CliError::input(e.to_string()))?;
            let out = c.evaluate(bits.bits())?;
            println!("{}", State::new(out));
            Ok(0)
        }
        EvalCommand::Ltl { formula, lasso, pos } => {
            let f = Ltl::parse(&formula)?;
            let m = LassoModel::from_str(&read(&lasso)?)?;
            let ok = ltl_eval(&f, &m, pos)?;
            println!("{}", if ok { "true" } else { "false" });
            Ok(if ok { 0 } else { 1 })
        }
        EvalCommand::Formula { formula, assign } => {
            let f = Formula::parse(&formula)?;
            let mut assignment = succinct_core::proplogic::Assignment::new();
            for pair in assign.split(',').filter(|s| !s.is_empty()) {
                let (name, value) = pair
                    .split_once('=')
                    .ok_or_else(|| CliError::input(format!("bad assignment `{pair}`")))?;
                let value = match value {
                    "0" => false,
                    "1" => true,
                    _ => return Err(CliError::input(format!("bad value in `{pair}`"))),
                };
                assignment.insert(name.to_string(), value);
            }
            let ok = eval_formula(&f, &assignment)?;
            println!("{}", if ok { "true" } else { "false" });
            Ok(if ok { 0 } else { 1 })
        }
        EvalCommand::Slasso { formula, slasso, mode } => {
            let f = Ltl::parse(&formula)?;
            let lasso = formats::parse_slasso(&read(&slasso)?)?;
            let mode = match mode {
                ModeArg::Expand => CheckMode::Expand,
                ModeArg::Conjoin => CheckMode::Conjoin,
            };
            let ok = check_succinct_model(&f, &lasso, mode, 1 << 16)?;
            println!("{}", if ok { "formula holds" } else { "formula fails" });
            Ok(if ok { 0 } else { 1 })
        }
    }
}

#[derive(serde::Serialize)]
struct JsonReport<'a> {
    schema: &'a str,
    seed: u64,
    criteria: Vec<JsonCriterion>,
    all_pass: bool,
}

#[derive(serde::Serialize)]
struct JsonCriterion {
    id: usize,
    name: String,
    pass: bool,
    seconds: f64,
    details: String,
}

fn run_oracle(only: Option<usize>, seed: u64, json: bool) -> Result<i32, CliError> {
    let reports = match only {
        Some(id) => {
            if id == 0 || id > acceptance::NUM_CRITERIA {
                return Err(CliError::input(format!(
                    "criterion id must be 1..={}",
                    acceptance::NUM_CRITERIA
                )));
            }
            vec![acceptance::run_criterion(id, seed)]
        }
        None => acceptance::run_all(seed),
    };
    let all_pass = reports.iter().all(|r| r.pass);
    if json {
        let report = JsonReport {
            schema: "succinct-oracle-v1",
            seed,
            criteria: reports
                .iter()
                .map(|r| JsonCriterion {
                    id: r.id,
                    name: r.name.to_string(),
                    pass: r.pass,
                    seconds: r.seconds,
                    details: r.details.clone(),
                })
                .collect(),
            all_pass,
        };
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        for report in &reports {
            println!("{report}");
        }
        println!("{}", if all_pass { "all criteria pass" } else { "SOME CRITERIA FAILED" });
    }
    Ok(if all_pass { 0 } else { 1 })
}
