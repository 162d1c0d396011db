//! Circuit-level suites: equivalence with the recurrences, the arithmetic
//! blocks, reversibility and ancilla hygiene, and qubit scaling.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use super::{map_cases, sample, Execution, Suite, VerificationReport, VerifyOptions};
use crate::blocks::{
    build_absolute, build_adder, build_reciprocal, build_shift, build_sqrt, build_square, AdderVariant, GarbagePolicy,
    ShiftDirection, SquareMethod,
};
use crate::circuit::{resource_count, simulate_basis, simulate_sparse, BasisState, Circuit, Role, SparseState};
use crate::error::{Error, Result};
use crate::fbe::{Function, Group};
use crate::fixedpoint::{FixedPoint, Layout};
use crate::synth::{synthesize, SynthConfig, SynthesizedCircuit};

const POLICIES: [GarbagePolicy; 2] = [GarbagePolicy::Garbage, GarbagePolicy::Clean];

/// Exhaustive limits and random-sample limits of the equivalence suite.
pub const EXHAUSTIVE_MAX_N: u32 = 5;
pub const EXHAUSTIVE_MAX_M: u32 = 8;
pub const RANDOM_MAX_N: u32 = 8;
pub const RANDOM_MAX_M: u32 = 16;
pub const RANDOM_CASES: usize = 500;

/// Qubit and gate counts reported for the demonstrated circuits:
/// function, n, m, qubits, basic gates.
pub const REFERENCE_COUNTS: [(Function, u32, u32, usize, usize); 5] = [
    (Function::Log2, 4, 4, 40, 1260),
    (Function::Arccos, 2, 4, 30, 770),
    (Function::Arccot, 2, 4, 24, 1000),
    (Function::Exp2, 2, 4, 32, 820),
    (Function::Cos, 2, 5, 29, 730),
];

/// Synthesizes every config, then runs every `(config, input)` pair and
/// compares the circuit with the recurrence. Returns the mismatching cases.
pub fn equivalence_sweep(
    configs: &[SynthConfig],
    inputs: impl Fn(&SynthesizedCircuit) -> Vec<u128>,
    execution: Execution,
) -> Result<(usize, Vec<String>)> {
    let circuits = map_cases(execution, configs, synthesize);
    let circuits = circuits.into_iter().collect::<Result<Vec<_>>>()?;
    let cases: Vec<(usize, u128)> = circuits
        .iter()
        .enumerate()
        .flat_map(|(k, sc)| inputs(sc).into_iter().map(move |bits| (k, bits)))
        .collect();
    let results = map_cases(execution, &cases, |&(k, bits)| -> Result<bool> {
        let sc = &circuits[k];
        Ok(sc.run(bits)? == sc.classical(bits)?)
    });
    let mut bad = Vec::new();
    for (&(k, bits), ok) in cases.iter().zip(results) {
        if !ok? {
            bad.push(format!("{} input {bits:#b}", circuits[k].config));
        }
    }
    Ok((cases.len(), bad))
}

fn exhaustive_configs(function: Function) -> Vec<SynthConfig> {
    let mut out = Vec::new();
    for n in 1..=EXHAUSTIVE_MAX_N {
        for m in 2..=EXHAUSTIVE_MAX_M {
            for policy in POLICIES {
                let cfg = SynthConfig::new(function, n, m).with_policy(policy);
                if cfg.working_layout().is_ok() {
                    out.push(cfg);
                }
            }
        }
    }
    out
}

/// Exhaustive and sampled circuit/recurrence equivalence for every function.
pub fn equivalence(opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for function in Function::ALL {
        let configs = exhaustive_configs(function);
        let mut r = VerificationReport::new(
            Suite::Equivalence,
            format!("{function} exhaustive n<={EXHAUSTIVE_MAX_N} m<={EXHAUSTIVE_MAX_M}"),
        )
        .with_function(function);
        let (cases, bad) = equivalence_sweep(&configs, |sc| sc.valid_inputs(), opts.execution)?;
        r.cases = cases;
        r.exact_matches = cases - bad.len();
        r.check(
            format!("{} configurations, both policies", configs.len()),
            bad.is_empty(),
            format!("{} mismatches: {}", bad.len(), sample(&bad, 3)),
        );
        out.push(r);
        out.push(random_equivalence(function, opts)?);
    }
    Ok(out)
}

fn random_equivalence(function: Function, opts: &VerifyOptions) -> Result<VerificationReport> {
    let mut rng = opts.rng(&format!("equivalence {function}"));
    let mut configs = Vec::with_capacity(RANDOM_CASES);
    while configs.len() < RANDOM_CASES {
        let n = rng.gen_range(1..=RANDOM_MAX_N);
        let m = rng.gen_range(2..=RANDOM_MAX_M);
        let cfg = SynthConfig::new(function, n, m).with_policy(POLICIES[configs.len() % 2]);
        if cfg.working_layout().is_ok() {
            configs.push(cfg);
        }
    }
    let mut unique: Vec<SynthConfig> = configs.clone();
    unique.sort_by_key(|c| (c.n, c.m, c.policy == GarbagePolicy::Clean));
    unique.dedup();
    let circuits = map_cases(opts.execution, &unique, synthesize);
    let circuits = circuits.into_iter().collect::<Result<Vec<_>>>()?;
    let by_config: BTreeMap<(u32, u32, bool), &SynthesizedCircuit> = circuits
        .iter()
        .map(|sc| ((sc.config.n, sc.config.m, sc.config.policy == GarbagePolicy::Clean), sc))
        .collect();
    let cases: Vec<(&SynthesizedCircuit, u128)> = configs
        .iter()
        .map(|c| {
            let sc = by_config[&(c.n, c.m, c.policy == GarbagePolicy::Clean)];
            let w = sc.input_width() as u32;
            loop {
                let bits = rng.gen_range(0..1u128 << w);
                if sc.is_valid_input(bits) {
                    break (sc, bits);
                }
            }
        })
        .collect();
    let results = map_cases(opts.execution, &cases, |&(sc, bits)| -> Result<bool> {
        Ok(sc.run(bits)? == sc.classical(bits)?)
    });
    let mut bad = Vec::new();
    for (&(sc, bits), ok) in cases.iter().zip(results) {
        if !ok? {
            bad.push(format!("{} input {bits:#b}", sc.config));
        }
    }
    let mut r = VerificationReport::new(
        Suite::Equivalence,
        format!("{function} random n<={RANDOM_MAX_N} m<={RANDOM_MAX_M}"),
    )
    .with_function(function);
    r.cases = cases.len();
    r.exact_matches = cases.len() - bad.len();
    r.check(
        format!("{} random cases over {} configurations", cases.len(), unique.len()),
        bad.is_empty(),
        format!("{} mismatches: {}", bad.len(), sample(&bad, 3)),
    );
    Ok(r)
}

fn run_with(c: &Circuit, inputs: &[(&str, u128)]) -> Result<BasisState> {
    let mut s = BasisState::zeros(c.qubit_count());
    for (name, v) in inputs {
        s.write_register(c.require_register(name)?, *v);
    }
    simulate_basis(c, &s)
}

fn read(c: &Circuit, s: &BasisState, name: &str) -> Result<u128> {
    Ok(s.read_register(c.require_register(name)?))
}

fn ancillas_zero(c: &Circuit, s: &BasisState) -> bool {
    c.registers_with_role(Role::Ancilla).all(|r| s.is_zero_in(r.qubits()))
}

/// Tally of one block configuration: inputs tried and failures.
#[derive(Default)]
struct BlockTally {
    cases: usize,
    failures: Vec<String>,
    skipped: usize,
}

impl BlockTally {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn into_check(self, report: &mut VerificationReport, name: String) {
        report.cases += self.cases;
        report.exact_matches += self.cases - self.failures.len();
        let mut detail = format!("{} inputs, {} mismatches", self.cases, self.failures.len());
        if self.skipped > 0 {
            detail.push_str(&format!(", {} without a representable reference", self.skipped));
        }
        if !self.failures.is_empty() {
            detail.push_str(&format!(": {}", sample(&self.failures, 3)));
        }
        report.check(name, self.failures.is_empty(), detail);
    }
}

/// Largest register width of the block suite.
pub const BLOCK_MAX_WIDTH: u32 = 6;

fn unsigned_layouts() -> Vec<Layout> {
    let mut out = Vec::new();
    for w in 1..=BLOCK_MAX_WIDTH {
        let mut fracs = vec![0, w / 2, w];
        fracs.dedup();
        for f in fracs {
            out.push(Layout::unsigned(w - f, f));
        }
    }
    out
}

/// Every block against the fixed-point reference on every input of width at most 6.
pub fn blocks(opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    type Job = fn(&VerifyOptions) -> Result<VerificationReport>;
    let jobs: [Job; 8] = [
        adder_suite,
        increment_suite,
        shift_suite,
        absolute_suite,
        square_suite,
        square_methods_suite,
        sqrt_suite,
        reciprocal_suite,
    ];
    map_cases(opts.execution, &jobs, |job| job(opts)).into_iter().collect()
}

fn adder_suite(_: &VerifyOptions) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(Suite::Blocks, "adder");
    for w in 1..=BLOCK_MAX_WIDTH {
        let c = build_adder(w, AdderVariant::Full)?;
        let layout = Layout::unsigned(w, 0);
        let mut t = BlockTally::default();
        for a in 0..1u128 << w {
            for b in 0..1u128 << w {
                let s = run_with(&c, &[("a", a), ("b", b)])?;
                let want = FixedPoint::from_bits_raw(a, layout).add(&FixedPoint::from_bits_raw(b, layout))?;
                let ok = read(&c, &s, "b")? == want.raw_bits() && read(&c, &s, "a")? == a && ancillas_zero(&c, &s);
                t.record(ok, || format!("{a}+{b}"));
            }
        }
        t.into_check(&mut r, format!("a + b, width {w}"));
    }
    Ok(r)
}

fn increment_suite(_: &VerifyOptions) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(Suite::Blocks, "increment");
    for w in 1..=BLOCK_MAX_WIDTH {
        let mut variants = vec![(AdderVariant::IncrementLow, Layout::unsigned(w, 0))];
        for f in 0..w {
            variants.push((
                AdderVariant::IncrementIntLow { frac_bits: f },
                Layout::unsigned(w - f, f),
            ));
        }
        for (variant, layout) in variants {
            let c = build_adder(w, variant)?;
            let mut t = BlockTally::default();
            for a in 0..1u128 << w {
                let s = run_with(&c, &[("a", a)])?;
                let x = FixedPoint::from_bits_raw(a, layout);
                let want = match variant {
                    AdderVariant::IncrementLow => x.increment_low(),
                    _ => x.increment_int_low(),
                };
                t.record(read(&c, &s, "a")? == want.raw_bits() && ancillas_zero(&c, &s), || {
                    format!("{x}")
                });
            }
            t.into_check(&mut r, format!("{variant:?} on {layout}"));
        }
    }
    Ok(r)
}

fn rotate(a: u128, w: u32, k: u32, direction: ShiftDirection) -> u128 {
    let mask = (1u128 << w) - 1;
    match direction {
        ShiftDirection::Right => ((a >> k) | (a << (w - k))) & mask,
        ShiftDirection::Left => ((a << k) | (a >> (w - k))) & mask,
    }
}

fn shift_suite(_: &VerifyOptions) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(Suite::Blocks, "shift");
    for w in 2..=BLOCK_MAX_WIDTH {
        for k in 1..w {
            for direction in [ShiftDirection::Left, ShiftDirection::Right] {
                let c = build_shift(w, direction, k, true)?;
                let layout = Layout::unsigned(w, 0);
                let mut t = BlockTally::default();
                for a in 0..1u128 << w {
                    for ctrl in [0, 1] {
                        let s = run_with(&c, &[("a", a), ("ctrl", ctrl)])?;
                        let got = read(&c, &s, "a")?;
                        let want = if ctrl == 1 { rotate(a, w, k, direction) } else { a };
                        let x = FixedPoint::from_bits_raw(a, layout);
                        let signed_k = match direction {
                            ShiftDirection::Left => k as i32,
                            ShiftDirection::Right => -(k as i32),
                        };
                        let shifted = x.shift(signed_k);
                        // a rotation is a shift whenever the bits it wraps around are zero
                        let wraps = match direction {
                            ShiftDirection::Left => a >> (w - k) != 0,
                            ShiftDirection::Right => a & ((1 << k) - 1) != 0,
                        };
                        let shift_ok = ctrl == 0 || wraps || got == shifted.raw_bits();
                        t.record(got == want && shift_ok && ancillas_zero(&c, &s), || {
                            format!("{a:#b} ctrl={ctrl}")
                        });
                    }
                }
                t.into_check(&mut r, format!("{direction:?} by {k}, width {w}"));
            }
        }
    }
    Ok(r)
}

fn absolute_suite(_: &VerifyOptions) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(Suite::Blocks, "absolute");
    for w in 1..=BLOCK_MAX_WIDTH {
        for int_bits in 1..=w.min(3) {
            let layout = Layout::signed(int_bits, w - int_bits);
            let c = build_absolute(layout, true)?;
            let mut t = BlockTally::default();
            for a in 0..1u128 << w {
                for ctrl in [0, 1] {
                    let s = run_with(&c, &[("a", a), ("ctrl", ctrl)])?;
                    let x = FixedPoint::from_bits_raw(a, layout);
                    let want = if ctrl == 1 { x.abs_wrapping() } else { x };
                    t.record(read(&c, &s, "a")? == want.raw_bits() && ancillas_zero(&c, &s), || {
                        format!("{x} ctrl={ctrl}")
                    });
                }
            }
            t.into_check(&mut r, format!("|a| on {layout}"));
        }
    }
    Ok(r)
}

fn square_outputs(input: Layout) -> Vec<Layout> {
    let i = input.int_bits;
    let f = input.frac_bits;
    let mut outs = vec![input, Layout::unsigned(2 * i, 2 * f), Layout::unsigned(2 * i, f)];
    outs.retain(|l| l.width() >= 1);
    outs.dedup();
    outs
}

fn square_suite(_: &VerifyOptions) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(Suite::Blocks, "square");
    for input in unsigned_layouts() {
        for output in square_outputs(input) {
            for policy in POLICIES {
                let c = build_square(input, output, SquareMethod::ShiftAdd, policy)?;
                let mut t = BlockTally::default();
                for a in 0..1u128 << input.width() {
                    let s = run_with(&c, &[("a", a)])?;
                    let x = FixedPoint::from_bits_raw(a, input);
                    let (want, _) = x.mul_into(&x, 0, output);
                    let ok =
                        read(&c, &s, "out")? == want.raw_bits() && read(&c, &s, "a")? == a && ancillas_zero(&c, &s);
                    t.record(ok, || format!("{x}"));
                }
                t.into_check(&mut r, format!("{input} -> {output}, {policy}"));
            }
        }
    }
    Ok(r)
}

/// The reversed-sqrt square against shift-and-add wherever it can be built.
fn square_methods_suite(_: &VerifyOptions) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(Suite::Blocks, "square methods");
    for input in unsigned_layouts() {
        for output in square_outputs(input) {
            let reversed = match build_square(input, output, SquareMethod::ReversedSqrt, GarbagePolicy::Garbage) {
                Ok(c) => c,
                Err(Error::Config(_)) => continue,
                Err(e) => return Err(e),
            };
            let shift_add = build_square(input, output, SquareMethod::ShiftAdd, GarbagePolicy::Garbage)?;
            let mut t = BlockTally::default();
            for a in 0..1u128 << input.width() {
                let x = FixedPoint::from_bits_raw(a, input);
                let s1 = run_with(&reversed, &[("a", a)])?;
                let s2 = run_with(&shift_add, &[("a", a)])?;
                let (want, _) = x.mul_into(&x, 0, output);
                let got = read(&reversed, &s1, "out")?;
                let ok = got == read(&shift_add, &s2, "out")? && got == want.raw_bits();
                t.record(
                    ok && read(&reversed, &s1, "a")? == a && ancillas_zero(&reversed, &s1),
                    || format!("{x}"),
                );
            }
            t.into_check(&mut r, format!("reversed-sqrt = shift-add, {input} -> {output}"));
        }
    }
    Ok(r)
}

fn sqrt_suite(_: &VerifyOptions) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(Suite::Blocks, "sqrt");
    for layout in unsigned_layouts() {
        for policy in POLICIES {
            let c = build_sqrt(layout, policy)?;
            let mut t = BlockTally::default();
            for a in 0..1u128 << layout.width() {
                let x = FixedPoint::from_bits_raw(a, layout);
                let s = run_with(&c, &[("a", a)])?;
                let want = x.sqrt_into(0, layout)?;
                let kept = policy == GarbagePolicy::Garbage || read(&c, &s, "a")? == a;
                t.record(
                    read(&c, &s, "out")? == want.raw_bits() && kept && ancillas_zero(&c, &s),
                    || format!("{x}"),
                );
            }
            t.into_check(&mut r, format!("sqrt on {layout}, {policy}"));
        }
    }
    Ok(r)
}

fn reciprocal_suite(_: &VerifyOptions) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(Suite::Blocks, "reciprocal");
    for layout in unsigned_layouts() {
        for policy in POLICIES {
            let c = build_reciprocal(layout, policy)?;
            let mut t = BlockTally::default();
            for a in 0..1u128 << layout.width() {
                let x = FixedPoint::from_bits_raw(a, layout);
                let want = match x.reciprocal_into(layout) {
                    Ok(v) => v,
                    Err(Error::DivisionByZero) | Err(Error::Overflow(_)) => {
                        t.skipped += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let s = run_with(&c, &[("a", a)])?;
                let ok = read(&c, &s, "out")? == want.raw_bits() && read(&c, &s, "a")? == a && ancillas_zero(&c, &s);
                t.record(ok, || format!("{x}"));
            }
            t.into_check(&mut r, format!("1/a on {layout}, {policy}"));
        }
    }
    Ok(r)
}

pub const REVERSIBILITY_CASES: usize = 100;
const REVERSIBILITY_N: u32 = 4;
const REVERSIBILITY_M: u32 = 8;

/// Round trips through the inverse, ancilla hygiene and superposed inputs.
pub fn reversibility(opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    let configs: Vec<SynthConfig> = Function::ALL
        .into_iter()
        .flat_map(|f| POLICIES.map(|p| SynthConfig::new(f, REVERSIBILITY_N, REVERSIBILITY_M).with_policy(p)))
        .collect();
    map_cases(opts.execution, &configs, |cfg| reversibility_of(cfg, opts))
        .into_iter()
        .collect()
}

fn random_state(rng: &mut impl Rng, len: usize) -> BasisState {
    let mut s = BasisState::zeros(len);
    for q in 0..len {
        s.set(q, rng.gen());
    }
    s
}

fn random_valid_input(rng: &mut impl Rng, sc: &SynthesizedCircuit) -> u128 {
    loop {
        let bits = rng.gen_range(0..1u128 << sc.input_width());
        if sc.is_valid_input(bits) {
            return bits;
        }
    }
}

fn reversibility_of(cfg: &SynthConfig, opts: &VerifyOptions) -> Result<VerificationReport> {
    let sc = synthesize(cfg)?;
    let c = &sc.circuit;
    let inverse = c.inverse();
    let mut rng = opts.rng(&format!("reversibility {cfg}"));
    let mut r = VerificationReport::new(Suite::Reversibility, cfg.to_string()).with_config(*cfg);

    let mut round_trip_failures = 0;
    for _ in 0..REVERSIBILITY_CASES {
        let s = random_state(&mut rng, c.qubit_count());
        let back = simulate_basis(&inverse, &simulate_basis(c, &s)?)?;
        round_trip_failures += (back != s) as usize;
    }
    r.check(
        "inverse after circuit is the identity",
        round_trip_failures == 0,
        format!("{round_trip_failures} of {REVERSIBILITY_CASES} random basis states not restored"),
    );

    let input_reg = c.require_register(&sc.input)?.clone();
    let mut dirty = Vec::new();
    let mut moved_input = 0;
    let mut clean_cases = 0;
    for _ in 0..REVERSIBILITY_CASES {
        let bits = random_valid_input(&mut rng, &sc);
        let out = simulate_basis(c, &sc.encode(bits)?)?;
        clean_cases += 1;
        if !ancillas_zero(c, &out) {
            dirty.push(format!("{bits:#b}"));
        }
        moved_input += (out.read_register(&input_reg) != bits) as usize;
    }
    r.cases = clean_cases;
    r.exact_matches = clean_cases - dirty.len();
    r.check(
        "ancilla registers end at zero",
        dirty.is_empty(),
        format!(
            "{} of {clean_cases} inputs leave ancillas set: {}",
            dirty.len(),
            sample(&dirty, 3)
        ),
    );
    if cfg.policy == GarbagePolicy::Clean {
        r.check(
            "input register preserved",
            moved_input == 0,
            format!("{moved_input} of {clean_cases} inputs changed"),
        );
        let garbage = c.registers_with_role(Role::Garbage).count();
        r.check(
            "no garbage registers",
            garbage == 0,
            format!("{garbage} garbage registers"),
        );
    }

    let a = random_valid_input(&mut rng, &sc);
    let mut b = random_valid_input(&mut rng, &sc);
    while b == a && sc.valid_inputs().len() > 1 {
        b = random_valid_input(&mut rng, &sc);
    }
    let (sa, sb) = (sc.encode(a)?, sc.encode(b)?);
    let superposed = SparseState::uniform([sa.clone(), sb.clone()])?;
    let result = simulate_sparse(c, &superposed, 4)?;
    let expected = SparseState::uniform([simulate_basis(c, &sa)?, simulate_basis(c, &sb)?])?;
    let same = result.len() == expected.len()
        && expected
            .terms()
            .all(|(s, amp)| (result.amplitude(s) - amp).norm() < 1e-12 && *amp != Complex64::new(0.0, 0.0));
    r.check(
        "superposed inputs give the two basis branches",
        same,
        format!("inputs {a:#b} and {b:#b}, {} branches", result.len()),
    );
    Ok(r)
}

/// Widths of the scaling fit at fixed `n`; the third checks the line through the first two.
pub const SCALING_N: u32 = 4;
pub const SCALING_WIDTHS: [u32; 3] = [8, 12, 16];

/// Qubit counts affine in `m`, plus the demonstrated-circuit counts side by side.
pub fn scaling() -> Result<VerificationReport> {
    let mut r = VerificationReport::new(Suite::Scaling, format!("qubits vs m at n={SCALING_N}"));
    for function in Function::ALL {
        for policy in POLICIES {
            let counts = SCALING_WIDTHS
                .iter()
                .map(|&m| {
                    let cfg = SynthConfig::new(function, SCALING_N, m).with_policy(policy);
                    Ok(synthesize(&cfg)?.circuit.qubit_count() as i64)
                })
                .collect::<Result<Vec<_>>>()?;
            let [m0, m1, m2] = SCALING_WIDTHS.map(|m| m as i64);
            let slope_num = counts[1] - counts[0];
            let predicted = counts[1] * (m2 - m0) - counts[0] * (m2 - m1);
            let residual = counts[2] * (m1 - m0) - predicted;
            r.cases += 1;
            r.exact_matches += (residual == 0) as usize;
            r.check(
                format!("{function} {policy}"),
                residual == 0,
                format!(
                    "qubits {:?} at m = {:?}; slope {} per bit, residual {}",
                    counts,
                    SCALING_WIDTHS,
                    slope_num as f64 / (m1 - m0) as f64,
                    residual as f64 / (m1 - m0) as f64
                ),
            );
            let group_modules = match function.group() {
                Group::Forward => SCALING_N - 1,
                Group::Inverse => SCALING_N,
            };
            if policy == GarbagePolicy::Garbage {
                r.note(format!(
                    "{function}: {} modules, {:.2} qubits per module per bit of m",
                    group_modules,
                    slope_num as f64 / (m1 - m0) as f64 / group_modules as f64
                ));
            }
        }
    }
    for (function, n, m, qubits, gates) in REFERENCE_COUNTS {
        let sc = synthesize(&SynthConfig::new(function, n, m))?;
        let rc = resource_count(&sc.circuit);
        r.note(format!(
            "{function} n={n} m={m}: {} qubits, {} gates ({} after lowering multi-controlled gates); reported {qubits} qubits, {gates} gates",
            rc.qubits,
            rc.raw_total(),
            rc.decomposed.total()
        ));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_reference() {
        assert_eq!(rotate(0b0011, 4, 1, ShiftDirection::Right), 0b1001);
        assert_eq!(rotate(0b1001, 4, 1, ShiftDirection::Left), 0b0011);
    }

    #[test]
    fn sweep_reports_mismatch_free_small_configs() {
        let configs = [
            SynthConfig::new(Function::Cos, 2, 4),
            SynthConfig::new(Function::Log2, 3, 4),
        ];
        let (cases, bad) = equivalence_sweep(&configs, |sc| sc.valid_inputs(), Execution::Sequential).unwrap();
        assert_eq!(cases, 4 + 12);
        assert!(bad.is_empty(), "{bad:?}");
    }

    #[test]
    fn a_block_suite_and_reversibility_pass() {
        let opts = VerifyOptions::default();
        let r = adder_suite(&opts).unwrap();
        assert!(r.passed(), "{r}");
        let r = reversibility_of(
            &SynthConfig::new(Function::Arccos, 3, 6).with_policy(GarbagePolicy::Clean),
            &opts,
        )
        .unwrap();
        assert!(r.passed(), "{r}");
    }
}
