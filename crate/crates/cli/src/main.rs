//! `fbe`: evaluate expansions, synthesize and simulate circuits, run the
//! verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or domain error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use fbe_core::blocks::{GarbagePolicy, SquareMethod};
use fbe_core::circuit::{
    export_text, export_text_expanded, import_text, resource_count, simulate_basis, simulate_sparse, BasisState,
    Circuit, Role, SparseState, DEFAULT_SPARSE_CAP,
};
use fbe_core::fbe::{
    derived_eval, fbe_expand_traced, ifbe_evaluate, log2_domain_reduce, DerivedKind, DigitOrder, DigitString, Dyadic,
    ExtendedValue, Function, FunctionSpec, Group, SpecId,
};
use fbe_core::synth::{synthesize, SynthConfig};
use fbe_core::verify::{equivalence_sweep, run_suite, Execution, Suite, VerifyOptions};
use fbe_core::{FixedPoint, Layout};

#[derive(Parser)]
#[command(name = "fbe", version, about = "Function-value binary expansion toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a recurrence classically.
    ///
    /// Forward functions (log2, arccos, arccot) take a decimal `x`, or binary
    /// text prefixed with `u:` / `s:`. Inverse functions (exp2, cos, cot) take
    /// the digit string `v`, e.g. `.1011`. Derived functions (ln, log10,
    /// arcsin, arctan, exp, sin, tan) take a decimal `x` and `--n` fraction bits.
    Eval {
        function: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
        /// Digit count (forward) or result precision (derived).
        #[arg(long)]
        n: Option<u32>,
        /// Working register width.
        #[arg(long, default_value_t = 16)]
        m: u32,
        /// Digit radix for log2.
        #[arg(long, value_enum, default_value_t = Radix::Two)]
        radix: Radix,
        /// Print every intermediate a_i.
        #[arg(long)]
        trace: bool,
    },
    /// Build a circuit and write it in the text format.
    Synth {
        function: Function,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum, default_value_t = PolicyArg::Garbage)]
        policy: PolicyArg,
        #[arg(long, value_enum, default_value_t = SquareArg::ShiftAdd)]
        square: SquareArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Rewrite negative controls as positive controls between X gates.
        #[arg(long)]
        expanded: bool,
        /// Print qubit and gate tallies.
        #[arg(long)]
        report: bool,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate a circuit file on binary inputs for its input register.
    Sim {
        file: PathBuf,
        /// One input for basis mode; one or more for sparse mode (uniform superposition).
        #[arg(required = true)]
        inputs: Vec<String>,
        #[arg(long, value_enum, default_value_t = Mode::Basis)]
        mode: Mode,
        /// Also print registers of every role.
        #[arg(long)]
        all: bool,
    },
    /// Run a verification suite.
    Verify {
        /// table2, worked-traces, group1-exact, group2-bounds, equivalence,
        /// blocks, reversibility, radix, scaling or all.
        suite: String,
        #[arg(long)]
        sequential: bool,
        #[arg(long, default_value_t = VerifyOptions::default().seed)]
        seed: u64,
        /// Print wall times.
        #[arg(long)]
        timing: bool,
        /// Only print failing reports and the summary.
        #[arg(long)]
        quiet: bool,
    },
    /// Time an exhaustive circuit sweep sequentially and in parallel.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [Function::Log2, Function::Arccot, Function::Cos])]
        functions: Vec<Function>,
        #[arg(long, default_value_t = 6)]
        n: u32,
        #[arg(long, default_value_t = 10)]
        m: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Radix {
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    #[value(name = "4")]
    Four,
    #[value(name = "4-wide")]
    FourWide,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Garbage,
    Clean,
}

#[derive(Clone, Copy, ValueEnum)]
enum SquareArg {
    ShiftAdd,
    ReversedSqrt,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Basis,
    Sparse,
}

/// Distinguishes a failed check from a usage problem.
#[derive(Debug)]
struct VerificationFailed;

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("verification failed")
    }
}

impl std::error::Error for VerificationFailed {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<VerificationFailed>() => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Eval {
            function,
            x,
            n,
            m,
            radix,
            trace,
        } => cmd_eval(&function, &x, n, m, radix, trace),
        Command::Synth {
            function,
            n,
            m,
            policy,
            square,
            format: Format::Text,
            expanded,
            report,
            out,
        } => {
            let policy = match policy {
                PolicyArg::Garbage => GarbagePolicy::Garbage,
                PolicyArg::Clean => GarbagePolicy::Clean,
            };
            let square = match square {
                SquareArg::ShiftAdd => SquareMethod::ShiftAdd,
                SquareArg::ReversedSqrt => SquareMethod::ReversedSqrt,
            };
            let cfg = SynthConfig::new(function, n, m).with_policy(policy).with_square(square);
            cmd_synth(&cfg, expanded, report, out)
        }
        Command::Sim {
            file,
            inputs,
            mode,
            all,
        } => cmd_sim(&file, &inputs, mode, all),
        Command::Verify {
            suite,
            sequential,
            seed,
            timing,
            quiet,
        } => {
            let opts = VerifyOptions {
                execution: if sequential {
                    Execution::Sequential
                } else {
                    Execution::Parallel
                },
                seed,
            };
            cmd_verify(&suite, &opts, timing, quiet)
        }
        Command::Bench { functions, n, m } => cmd_bench(&functions, n, m),
    }
}

fn show(d: &Dyadic, layout: Layout) -> String {
    format!("{} ({})", d.to_fixed(layout).to_binary_string(), d.to_f64())
}

fn show_state(v: &ExtendedValue, layout: Layout) -> String {
    match v {
        ExtendedValue::Finite(d) => show(d, layout),
        other => other.to_string(),
    }
}

/// Decimal, or binary text when prefixed with `u:` / `s:`, truncated onto `layout`.
fn parse_value(text: &str, layout: Layout) -> Result<FixedPoint> {
    if text.starts_with("u:") || text.starts_with("s:") {
        let x = FixedPoint::parse(text)?;
        return Ok(Dyadic::from_fixed(&x).rescale(layout.frac_bits).to_fixed(layout));
    }
    let v: f64 = text.parse().with_context(|| format!("'{text}' is not a number"))?;
    Ok(FixedPoint::from_f64(v, layout)?)
}

fn value_f64(text: &str) -> Result<f64> {
    if text.starts_with("u:") || text.starts_with("s:") {
        Ok(FixedPoint::parse(text)?.to_f64())
    } else {
        text.parse().with_context(|| format!("'{text}' is not a number"))
    }
}

fn cmd_eval(function: &str, x: &str, n: Option<u32>, m: u32, radix: Radix, trace: bool) -> Result<()> {
    if let Ok(kind) = function.parse::<DerivedKind>() {
        let precision = n.unwrap_or(m);
        let xv = value_f64(x)?;
        let y = derived_eval(kind, xv, precision)?;
        println!("{kind}({xv}) = {} ({})", y.to_binary_string(), y.to_f64());
        return Ok(());
    }
    let function: Function = function.parse()?;
    match function.group() {
        Group::Forward => eval_forward(function, x, n.unwrap_or(m) as usize, m, radix, trace),
        Group::Inverse => eval_inverse(function, x, n, m, trace),
    }
}

fn eval_forward(function: Function, x: &str, n: usize, m: u32, radix: Radix, trace: bool) -> Result<()> {
    let id = match (function, radix) {
        (Function::Log2, Radix::Two) => SpecId::Log2 { range_exponent: 0 },
        (Function::Log2, Radix::Three) => SpecId::Log2Ternary,
        (Function::Log2, Radix::Four) => SpecId::Log2QuaternaryNarrow,
        (Function::Log2, Radix::FourWide) => SpecId::Log2QuaternaryWide,
        (f, Radix::Two) => f.spec_id(),
        (f, _) => bail!("{f} has only a binary expansion"),
    };
    let spec = FunctionSpec::get(id);
    let layout = spec.working_layout(m, n as u32)?;
    let xv = value_f64(x)?;
    let mut exponent = None;
    let input = if id == (SpecId::Log2 { range_exponent: 0 }) {
        if xv.is_nan() || xv <= 0.0 || !xv.is_finite() {
            return Err(fbe_core::Error::Domain {
                value: x.to_string(),
                domain: "(0, inf)".into(),
            }
            .into());
        }
        let int_bits = (xv.log2().floor().max(0.0) as u32) + 1;
        let wide = Layout::unsigned(int_bits, m);
        wide.validate()?;
        let reduced = log2_domain_reduce(&parse_value(x, wide)?)?;
        exponent = Some(reduced.exponent());
        Dyadic::from_fixed(&reduced.shifted_input)
            .rescale(layout.frac_bits)
            .to_fixed(layout)
    } else {
        if !spec.domain.contains_f64(xv) {
            return Err(fbe_core::Error::Domain {
                value: x.to_string(),
                domain: spec.domain.to_string(),
            }
            .into());
        }
        parse_value(x, layout)?
    };
    let t = fbe_expand_traced(&spec, &input, n)?;
    println!("{} x = {} in {}", spec.name, input.to_binary_string(), layout);
    println!("digits {}", t.digits);
    let f = t.digits.to_f64();
    println!("value {f}");
    if let Some(e) = exponent {
        println!("log2 = {e} + {f} = {}", e as f64 + f);
    }
    if trace {
        for (i, a) in t.states.iter().enumerate() {
            println!("a_{i} = {}", show_state(a, layout));
        }
    }
    Ok(())
}

fn eval_inverse(function: Function, v: &str, n: Option<u32>, m: u32, trace: bool) -> Result<()> {
    let digits = DigitString::from_binary_str(v)?;
    if let Some(n) = n {
        if n as usize != digits.len() {
            bail!("--n {n} does not match the {} digits of '{v}'", digits.len());
        }
    }
    let spec = function.spec();
    let layout = spec.working_layout(m, digits.len() as u32)?;
    let eval = ifbe_evaluate(&spec, &digits.reorder(DigitOrder::LeastSignificantFirst), layout)?;
    println!("{} v = {} in {}", spec.name, digits, layout);
    println!("value {}", show_state(&eval.value, layout));
    if trace {
        for (i, a) in eval.trace.iter().enumerate() {
            println!("a_{i} = {}", show_state(a, layout));
        }
    }
    Ok(())
}

fn cmd_synth(cfg: &SynthConfig, expanded: bool, report: bool, out: Option<PathBuf>) -> Result<()> {
    let sc = synthesize(cfg)?;
    let text = if expanded {
        export_text_expanded(&sc.circuit)
    } else {
        export_text(&sc.circuit)
    };
    let tally = resource_count(&sc.circuit).to_string();
    match out {
        Some(path) => {
            fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?;
            if report {
                println!("{cfg}\n{tally}");
            }
        }
        None => {
            print!("{text}");
            if report {
                for line in format!("{cfg}\n{tally}").lines() {
                    println!("# {line}");
                }
            }
        }
    }
    Ok(())
}

fn cmd_sim(file: &PathBuf, inputs: &[String], mode: Mode, all: bool) -> Result<()> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let circuit = import_text(&text)?;
    let input_reg = {
        let mut regs = circuit.registers_with_role(Role::Input);
        match (regs.next(), regs.next()) {
            (Some(r), None) => r.clone(),
            _ => bail!("the circuit must have exactly one input register"),
        }
    };
    let states = inputs
        .iter()
        .map(|s| {
            let x = FixedPoint::parse_with_layout(s, input_reg.layout)
                .with_context(|| format!("input for {} ({})", input_reg.name, input_reg.layout))?;
            let mut st = BasisState::zeros(circuit.qubit_count());
            st.write_register(&input_reg, x.raw_bits());
            Ok(st)
        })
        .collect::<Result<Vec<_>>>()?;
    match mode {
        Mode::Basis => {
            let [input] = states.as_slice() else {
                bail!("basis mode takes exactly one input; use --mode sparse for several");
            };
            let out = simulate_basis(&circuit, input)?;
            for line in describe(&circuit, &out, all) {
                println!("{line}");
            }
        }
        Mode::Sparse => {
            let out = simulate_sparse(&circuit, &SparseState::uniform(states)?, DEFAULT_SPARSE_CAP)?;
            for (state, amp) in out.sorted_terms() {
                println!("amplitude {:+.6}{:+.6}i", amp.re, amp.im);
                for line in describe(&circuit, &state, all) {
                    println!("  {line}");
                }
            }
        }
    }
    Ok(())
}

/// Register contents decoded through their headers: inputs and outputs, or all.
fn describe(circuit: &Circuit, state: &BasisState, all: bool) -> Vec<String> {
    circuit
        .registers()
        .iter()
        .filter(|r| all || matches!(r.role, Role::Input | Role::Output))
        .map(|r| {
            let v = FixedPoint::from_bits_raw(state.read_register(r), r.layout);
            format!("{} {} = {} ({})", r.role, r.name, v.to_binary_string(), v.to_f64())
        })
        .collect()
}

fn cmd_verify(suite: &str, opts: &VerifyOptions, timing: bool, quiet: bool) -> Result<()> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse()?]
    };
    let mut failed = Vec::new();
    for s in suites {
        let run = run_suite(s, opts)?;
        for r in &run.reports {
            if !quiet || !r.passed() {
                println!("{}", r.render(timing));
            }
        }
        let status = if run.passed() { "PASS" } else { "FAIL" };
        if timing {
            println!(
                "suite {s}: {status} ({} reports, {:.2}s, budget {}s)",
                run.reports.len(),
                run.elapsed.as_secs_f64(),
                s.budget().as_secs()
            );
        } else {
            println!("suite {s}: {status} ({} reports)", run.reports.len());
        }
        if !run.passed() {
            failed.push(s);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        let names: Vec<String> = failed.iter().map(|s| s.to_string()).collect();
        println!("failed suites: {}", names.join(", "));
        Err(anyhow!(VerificationFailed))
    }
}

fn cmd_bench(functions: &[Function], n: u32, m: u32) -> Result<()> {
    let configs: Vec<SynthConfig> = functions.iter().map(|&f| SynthConfig::new(f, n, m)).collect();
    for execution in [Execution::Sequential, Execution::Parallel] {
        let start = Instant::now();
        let (cases, mismatches) = equivalence_sweep(&configs, |sc| sc.valid_inputs(), execution)?;
        println!(
            "{execution:?}: {cases} cases, {} mismatches, {:.3}s",
            mismatches.len(),
            start.elapsed().as_secs_f64()
        );
    }
    Ok(())
}
