use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use davn_core::coloring::{brute_force_colorable, check_colorable, has_odd_red_loop, Certificate};
use davn_core::davn::{lhv_consistent_assignments_with, LHV_MAX_QUBITS};
use davn_core::state::{ensure_qubit_limit, qubit_limit_from_env};
use davn_core::{
    build_pcg, derive_conditions, export_dot, generate, io, verify_davn_with, ColorabilityResult,
    EdgeScope, FamilyId, NonstabilizerVerdict, OutcomeVector, PcgStateSpec, ValidationMode,
    VerifyOptions,
};

const OUTCOME_HELP: &str =
    "Z outcome as a bitstring, one character per qubit: '0' means Z=+1 (|0>), '1' means Z=-1 (|1>)";

#[derive(Parser)]
#[command(name = "pcg", version, about = "Exact DAVN verification for PCG states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct StateArgs {
    /// State JSON file
    file: PathBuf,
    /// Also accept a component with every qubit in |1>
    #[arg(long)]
    paper_compatible: bool,
}

#[derive(Args)]
struct ScopeArgs {
    /// Skip the unconditional all-qubit X-parity
    #[arg(long)]
    paper_edges_only: bool,
}

impl ScopeArgs {
    fn scope(&self) -> EdgeScope {
        if self.paper_edges_only {
            EdgeScope::PaperEdgesOnly
        } else {
            EdgeScope::All
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a state file and print its canonical form
    Validate {
        file: PathBuf,
        #[arg(long, conflicts_with = "paper_compatible")]
        strict: bool,
        #[arg(long)]
        paper_compatible: bool,
    },
    /// Write a named state as canonical JSON
    Family {
        /// One of ghz3, phi4, phi4_prime, phi4_double_prime, phi_n, phi5, phi_2n3, fig1a, fig1b, fig1c
        name: String,
        /// Family parameter (phi_n: qubit count; phi_2n3: n in 2n+3)
        #[arg(long)]
        n: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List the Z outcomes and their exact probabilities
    Outcomes {
        #[command(flatten)]
        state: StateArgs,
    },
    /// Derive every Hardy-like condition for one outcome
    Hardy {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, help = OUTCOME_HELP)]
        outcome: String,
        #[command(flatten)]
        scope: ScopeArgs,
    },
    /// Build the PCG for one outcome
    Pcg {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, help = OUTCOME_HELP)]
        outcome: String,
        #[command(flatten)]
        scope: ScopeArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide colorability of a PCG file
    Color {
        pcg: PathBuf,
        /// Use exhaustive search instead of GF(2) elimination
        #[arg(long)]
        brute_force: bool,
    },
    /// Render a PCG file as Graphviz DOT
    Dot { pcg: PathBuf },
    /// Run the full DAVN verification
    Davn {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        json: bool,
        /// Also run the brute-force local-hidden-variable oracle
        #[arg(long)]
        with_lhv: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Exit with status 1 unless the state yields a DAVN proof
        #[arg(long)]
        expect_davn: bool,
        #[command(flatten)]
        scope: ScopeArgs,
    },
    /// Count deterministic hidden-variable tables consistent with the state
    Lhv {
        #[command(flatten)]
        state: StateArgs,
        /// Print up to this many consistent tables
        #[arg(long, default_value_t = 0)]
        limit: usize,
        /// Lift the 12-qubit guard up to PCG_MAX_QUBITS
        #[arg(long)]
        allow_large: bool,
        #[command(flatten)]
        scope: ScopeArgs,
    },
    /// Certify non-stabilizerness from single-qubit marginals
    Nonstab {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        json: bool,
    },
}

/// Input problems: exit code 2.
#[derive(Debug)]
struct InputError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

enum Outcome {
    Ok,
    Negative,
}

fn read(path: &Path) -> Result<String, InputError> {
    Ok(fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), InputError> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn load_state(args: &StateArgs) -> Result<PcgStateSpec, InputError> {
    let mode = if args.paper_compatible { ValidationMode::PaperCompatible } else { ValidationMode::Strict };
    let state = io::parse_state(&read(&args.file)?, mode)
        .with_context(|| format!("loading {}", args.file.display()))?;
    ensure_qubit_limit(state.n(), qubit_limit_from_env()?)?;
    Ok(state)
}

fn parse_outcome(state: &PcgStateSpec, bits: &str) -> Result<OutcomeVector, InputError> {
    let outcome = OutcomeVector::from_bitstring(bits)?;
    if outcome.n() != state.n() {
        return Err(anyhow!("outcome {bits} has {} qubits, state has {}", outcome.n(), state.n()).into());
    }
    if !state.contains_outcome(&outcome) {
        return Err(anyhow!("outcome {bits} has probability zero for this state").into());
    }
    Ok(outcome)
}

fn run(cli: Cli) -> Result<Outcome, InputError> {
    match cli.command {
        Command::Validate { file, strict: _, paper_compatible } => {
            let mode = if paper_compatible { ValidationMode::PaperCompatible } else { ValidationMode::Strict };
            let raw = io::parse_raw_state(&read(&file)?)?;
            match davn_core::validate_pcg_state(&raw, mode) {
                Ok(state) => {
                    eprintln!("valid: n={}, |I|={}", state.n(), state.len());
                    emit(&io::state_json(&state), None)?;
                }
                Err(violations) => {
                    let list: Vec<String> = violations.iter().map(|v| format!("  - {v}")).collect();
                    return Err(anyhow!("{} violation(s):\n{}", violations.len(), list.join("\n")).into());
                }
            }
        }
        Command::Family { name, n, output } => {
            let state = generate(FamilyId::parse(&name, n)?)?;
            emit(&io::state_json(&state), output.as_deref())?;
        }
        Command::Outcomes { state } => {
            let state = load_state(&state)?;
            let mut text = String::new();
            for (o, p) in state.outcome_support() {
                text.push_str(&format!("{} {}\n", o.to_bitstring(), io::fraction(&p)));
            }
            emit(&text, None)?;
        }
        Command::Hardy { state, outcome, scope } => {
            let state = load_state(&state)?;
            let outcome = parse_outcome(&state, &outcome)?;
            let set = derive_conditions(&state, &outcome, scope.scope())?;
            emit(&io::condition_set_json(&set), None)?;
        }
        Command::Pcg { state, outcome, scope, output } => {
            let state = load_state(&state)?;
            let outcome = parse_outcome(&state, &outcome)?;
            let set = derive_conditions(&state, &outcome, scope.scope())?;
            emit(&io::pcg_json(&build_pcg(&outcome, &set)), output.as_deref())?;
        }
        Command::Color { pcg, brute_force } => {
            let pcg = io::parse_pcg(&read(&pcg)?)?;
            let result = if brute_force { brute_force_colorable(&pcg)? } else { check_colorable(&pcg) };
            emit(&io::colorability_json(&pcg, &result), None)?;
            if !result.is_colorable() {
                if let Some(lp) = has_odd_red_loop(&pcg) {
                    let edges: Vec<String> = lp.edges.iter().map(|i| pcg.edges()[*i].vertices.to_string()).collect();
                    eprintln!("odd red loop: {}", edges.join(" "));
                }
            }
        }
        Command::Dot { pcg } => {
            let pcg = io::parse_pcg(&read(&pcg)?)?;
            emit(&export_dot(&pcg), None)?;
        }
        Command::Davn { state, json, with_lhv, jobs, expect_davn, scope } => {
            let state = load_state(&state)?;
            let options = VerifyOptions {
                scope: scope.scope(),
                jobs,
                with_lhv,
                lhv_max_qubits: LHV_MAX_QUBITS,
            };
            let report = verify_davn_with(&state, &options)?;
            if json {
                emit(&io::report_json(&report), None)?;
            } else {
                emit(&text_report(&state, &report), None)?;
            }
            if expect_davn && !report.davn {
                return Ok(Outcome::Negative);
            }
        }
        Command::Lhv { state, limit, allow_large, scope } => {
            let state = load_state(&state)?;
            let max = if allow_large { qubit_limit_from_env()? } else { LHV_MAX_QUBITS };
            let lhv = lhv_consistent_assignments_with(&state, Some(limit), scope.scope(), max)?;
            let mut text = format!("consistent assignments: {}\n", lhv.count);
            for a in &lhv.samples {
                let fmt = |v: &[davn_core::Sign]| v.iter().map(|s| s.value().to_string()).collect::<Vec<_>>().join(",");
                text.push_str(&format!("z=[{}] x=[{}]\n", fmt(&a.z), fmt(&a.x)));
            }
            emit(&text, None)?;
        }
        Command::Nonstab { state, json } => {
            let state = load_state(&state)?;
            let verdict = state.certify_nonstabilizer();
            if json {
                emit(&io::nonstabilizer_json(&verdict), None)?;
            } else {
                emit(&format!("{}\n", nonstab_line(&verdict)), None)?;
            }
        }
    }
    Ok(Outcome::Ok)
}

fn nonstab_line(v: &NonstabilizerVerdict) -> String {
    match v {
        NonstabilizerVerdict::Certified { qubit, rho } => {
            format!("non-stabilizer: certified (qubit {qubit}, rho = {rho} != I/2)")
        }
        NonstabilizerVerdict::Inconclusive(reason) => format!("non-stabilizer: inconclusive ({reason})"),
    }
}

fn text_report(state: &PcgStateSpec, report: &davn_core::DavnReport) -> String {
    let mut out = format!("state {state}\n");
    for r in &report.records {
        let verdict = match &r.verdict {
            ColorabilityResult::Uncolorable(Certificate::Combination(idx)) => {
                let edges: Vec<String> = idx
                    .iter()
                    .map(|&i| {
                        let e = r.pcg.edges()[i];
                        format!("{}{}", e.vertices, if e.weight.is_minus() { "r" } else { "g" })
                    })
                    .collect();
                format!("un-colorable -> HLQP paradox [certificate {}]", edges.join(" "))
            }
            ColorabilityResult::Uncolorable(Certificate::Exhaustive) => "un-colorable -> HLQP paradox".into(),
            ColorabilityResult::Colorable(c) => format!("colorable (witness {:?}) -> no paradox", c.values()),
        };
        out.push_str(&format!(
            "outcome {}  p={}  conditions={}  {}\n",
            r.outcome.to_bitstring(),
            io::fraction(&r.probability),
            r.condition_count(),
            verdict
        ));
    }
    out.push_str(&format!(
        "success probability {}/{}\n{}\n",
        report.uncolorable,
        report.total(),
        nonstab_line(&report.nonstabilizer)
    ));
    if let Some(count) = report.lhv_consistent_count {
        out.push_str(&format!("LHV-consistent assignments: {count}\n"));
    }
    out.push_str(if report.davn { "DAVN proof: yes\n" } else { "DAVN proof: no\n" });
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
