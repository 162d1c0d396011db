//! Group 1 exactness, Group 2 error bounds and radix cross-checks, all against
//! the high-precision oracle.

use rand::Rng;

use super::{map_cases, sample, Suite, VerificationReport, VerifyOptions};
use crate::error::{Error, Result};
use crate::fbe::{
    abs_error, error_budget, fbe_expand, oracle_eval, oracle_expand, oracle_inverse, DigitString, Dyadic,
    ExtendedValue, Function, FunctionSpec, SpecId,
};
use crate::fixedpoint::{FixedPoint, Layout};
use crate::synth::{synthesize, Decoded, SynthConfig, SynthesizedCircuit};

/// Largest `m = n` of the exhaustive Group 1 sweep.
pub const GROUP1_MAX_M: u32 = 10;
pub const GROUP2_WIDTHS: [u32; 2] = [12, 16];
pub const GROUP2_RANDOM_CASES: usize = 1000;
pub const RADIX_CASES: usize = 200;
pub const RADIX_FRAC_BITS: u32 = 48;

fn common_prefix(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Every valid input at `m = n` for log2 and arccot, on the recurrence and the circuit.
pub fn group1_exact(opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for function in [Function::Log2, Function::Arccot] {
        for m in 2..=GROUP1_MAX_M {
            if SynthConfig::new(function, m, m).working_layout().is_ok() {
                out.push(group1_exact_at(function, m, opts)?);
            }
        }
    }
    for m in 4..=GROUP1_MAX_M {
        out.push(cot_observed(m / 2, m, opts)?);
    }
    Ok(out)
}

/// Cotangent exactness is only claimed for "almost all" bits, so this report
/// records how far each value is from the truncated oracle without asserting.
fn cot_observed(n: u32, m: u32, opts: &VerifyOptions) -> Result<VerificationReport> {
    let cfg = SynthConfig::new(Function::Cot, n, m);
    let sc = synthesize(&cfg)?;
    let ulp = sc.layout.ulp();
    let mut report =
        VerificationReport::new(Suite::Group1Exact, format!("cot n={n} m={m} (observed)")).with_config(cfg);
    let inputs = sc.valid_inputs();
    let errors = map_cases(opts.execution, &inputs, |&bits| -> Result<Option<f64>> {
        let v = DigitString::from_fraction_bits(bits, n as usize);
        let want = oracle_inverse(Function::Cot, &v, m)?;
        Ok(match (sc.classical(bits)?, want) {
            (Decoded::PosInfinity, ExtendedValue::PosInfinity) => Some(0.0),
            (Decoded::Value(x), ExtendedValue::Finite(y)) => Some(abs_error(&Dyadic::from_fixed(&x), &y) / ulp),
            _ => None,
        })
    });
    let errors = errors.into_iter().collect::<Result<Vec<_>>>()?;
    report.cases = errors.len();
    report.exact_matches = errors.iter().filter(|e| matches!(e, Some(u) if *u < 1.0)).count();
    let within_two = errors.iter().filter(|e| matches!(e, Some(u) if *u < 2.0)).count();
    let worst = errors.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
    let mismatched = errors.iter().filter(|e| e.is_none()).count();
    report.note(format!(
        "{} of {} within 1 ulp, {within_two} within 2 ulps, worst {worst:.2} ulps, {mismatched} infinity mismatches",
        report.exact_matches, report.cases
    ));
    Ok(report)
}

struct Group1Case {
    input: String,
    classical_ok: bool,
    circuit_ok: bool,
    prefix: usize,
}

fn group1_exact_at(function: Function, m: u32, opts: &VerifyOptions) -> Result<VerificationReport> {
    let cfg = SynthConfig::new(function, m, m);
    let sc = synthesize(&cfg)?;
    let mut report = VerificationReport::new(Suite::Group1Exact, format!("{function} m=n={m}")).with_config(cfg);
    let inputs = sc.valid_inputs();
    let results = map_cases(opts.execution, &inputs, |&bits| -> Result<Group1Case> {
        let x = FixedPoint::from_bits_raw(bits, sc.layout);
        let want = oracle_expand(function, &x, m as usize)?;
        let classical = sc.classical(bits)?;
        let circuit = sc.run(bits)?;
        let prefix = match &classical {
            Decoded::Digits(d) => common_prefix(d.digits(), want.digits()),
            _ => 0,
        };
        let want = Decoded::Digits(want);
        Ok(Group1Case {
            input: x.to_binary_string(),
            classical_ok: classical == want,
            circuit_ok: circuit == want,
            prefix,
        })
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    report.cases = results.len();
    report.exact_matches = results.iter().filter(|c| c.classical_ok && c.circuit_ok).count();
    let bad_classical: Vec<&str> = results
        .iter()
        .filter(|c| !c.classical_ok)
        .map(|c| c.input.as_str())
        .collect();
    let bad_circuit: Vec<&str> = results
        .iter()
        .filter(|c| !c.circuit_ok)
        .map(|c| c.input.as_str())
        .collect();
    report.check(
        "fbe_expand = oracle",
        bad_classical.is_empty(),
        format!(
            "{} of {} inputs differ: {}",
            bad_classical.len(),
            report.cases,
            sample(&bad_classical, 4)
        ),
    );
    report.check(
        "circuit = oracle",
        bad_circuit.is_empty(),
        format!(
            "{} of {} inputs differ: {}",
            bad_circuit.len(),
            report.cases,
            sample(&bad_circuit, 4)
        ),
    );
    let min_prefix = results.iter().map(|c| c.prefix).min().unwrap_or(m as usize);
    report.note(format!(
        "every input agrees with the oracle on the first {min_prefix} of {m} digits"
    ));
    Ok(report)
}

/// Worst-case and random inputs for exp2, cos and arccos at each width.
pub fn group2_bounds(opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for m in GROUP2_WIDTHS {
        out.push(inverse_bound(Function::Exp2, m, m, opts)?);
        out.push(inverse_bound(Function::Cos, m / 2, m, opts)?);
        out.push(inverse_bound(Function::Cos, m, m, opts)?);
        out.push(arccos_exact_bits(m, opts)?);
    }
    Ok(out)
}

/// Named worst-case digit patterns, as register bits (`v_0` is bit 0).
fn worst_cases(function: Function, n: u32) -> Vec<(String, u128)> {
    let all = (1u128 << n) - 1;
    match function {
        Function::Exp2 => vec![(format!("0.{}", "1".repeat(n as usize)), all)],
        Function::Cos if n >= 2 => vec![
            (format!("0.0{}", "1".repeat(n as usize - 1)), all >> 1),
            (format!("0.1{}1", "0".repeat(n as usize - 2)), (1u128 << (n - 1)) | 1),
        ],
        _ => Vec::new(),
    }
}

fn inverse_bound(function: Function, n: u32, m: u32, opts: &VerifyOptions) -> Result<VerificationReport> {
    let cfg = SynthConfig::new(function, n, m);
    let sc = synthesize(&cfg)?;
    let budget = error_budget(function, n, m);
    let mut report = VerificationReport::new(Suite::Group2Bounds, format!("{function} n={n} m={m}")).with_config(cfg);
    report.bound = budget.accumulated_bound;
    report.note(budget.formula);

    let worst = worst_cases(function, n);
    let mut rng = opts.rng(&format!("group2 {function} {n} {m}"));
    let mut inputs: Vec<u128> = worst.iter().map(|w| w.1).collect();
    inputs.extend((0..GROUP2_RANDOM_CASES).map(|_| rng.gen_range(0..1u128 << n)));

    let errors = map_cases(opts.execution, &inputs, |&bits| inverse_error(&sc, bits, m));
    let errors = errors.into_iter().collect::<Result<Vec<_>>>()?;
    report.cases = errors.len();
    report.exact_matches = errors.iter().filter(|e| e.1).count();
    for &(e, _) in &errors {
        report.observe_error(e);
    }
    let bound = budget.accumulated_bound.expect("exp2 and cos have analytic bounds");
    for ((name, _), (e, _)) in worst.iter().zip(&errors) {
        report.check(
            format!("worst case x = {name}"),
            *e < bound,
            format!("error {e:.3e} < {bound:.3e}"),
        );
    }
    let over = errors.iter().filter(|e| e.0 >= bound).count();
    report.check(
        "every input below the bound",
        over == 0,
        format!("{over} of {} at or above {bound:.3e}", errors.len()),
    );
    report.check(
        "circuit = recurrence",
        report.exact_matches == report.cases,
        format!("{} of {} bit-exact", report.exact_matches, report.cases),
    );
    Ok(report)
}

/// Circuit error against the oracle, and whether the circuit matched the recurrence.
fn inverse_error(sc: &SynthesizedCircuit, bits: u128, m: u32) -> Result<(f64, bool)> {
    let got = sc.run(bits)?;
    let same = got == sc.classical(bits)?;
    let v = DigitString::from_fraction_bits(bits, sc.config.n as usize);
    let reference = oracle_inverse(sc.function(), &v, m)?;
    let error = match (&got, &reference) {
        (Decoded::Value(x), ExtendedValue::Finite(r)) => abs_error(&Dyadic::from_fixed(x), r),
        _ => return Err(Error::Overflow(format!("{} of {bits:#b} is not finite", sc.function()))),
    };
    Ok((error, same))
}

fn arccos_exact_bits(m: u32, opts: &VerifyOptions) -> Result<VerificationReport> {
    let n = m / 2 + 1;
    let cfg = SynthConfig::new(Function::Arccos, n, m);
    let sc = synthesize(&cfg)?;
    let budget = error_budget(Function::Arccos, n, m);
    let q = budget.frac_bits;
    let spec = FunctionSpec::get(SpecId::Arccos);
    let mut report = VerificationReport::new(Suite::Group2Bounds, format!("arccos n={n} m={m}")).with_config(cfg);

    let worst_raw: i128 = (1i128 << (q / 2)) - 1;
    let mut rng = opts.rng(&format!("group2 arccos {m}"));
    let mut raws = vec![worst_raw];
    raws.extend((0..GROUP2_RANDOM_CASES).map(|_| rng.gen_range(1 - (1i128 << q)..=1i128 << q)));

    let results = map_cases(opts.execution, &raws, |&raw| -> Result<ArccosCase> {
        let x = FixedPoint::from_scaled(raw, sc.layout);
        let full = fbe_expand(&spec, &x, m as usize)?;
        let oracle_m = oracle_expand(Function::Arccos, &x, m as usize)?;
        let circuit_ok = match sc.run(x.raw_bits())? {
            Decoded::Digits(d) => d.digits() == &full.digits()[..n as usize],
            _ => false,
        };
        let reference = oracle_eval(Function::Arccos, &x)?;
        let (num, _) = full.to_rational();
        let error = match reference.finite() {
            Some(r) => abs_error(&Dyadic::new(num, m), r),
            None => f64::INFINITY,
        };
        Ok(ArccosCase {
            error,
            prefix: common_prefix(full.digits(), oracle_m.digits()),
            circuit_ok,
        })
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    report.cases = results.len();
    report.exact_matches = results.iter().filter(|r| r.circuit_ok).count();
    for r in &results {
        report.observe_error(r.error);
    }
    let need = budget.guaranteed_exact_bits;
    let worst = &results[0];
    report.check(
        "worst case x = 2^(-q/2)(1 - 2^(-q/2))",
        exact_bits(worst.error, m) >= need,
        format!(
            "{} exact bits (error {:.3e}), need {need}",
            exact_bits(worst.error, m),
            worst.error
        ),
    );
    let min_bits = results.iter().map(|r| exact_bits(r.error, m)).min().unwrap_or(0);
    report.check(
        "exact bits over all inputs",
        min_bits >= need,
        format!("at least {min_bits} exact bits, need {need}"),
    );
    report.check(
        "circuit digits = recurrence",
        report.exact_matches == report.cases,
        format!(
            "{} of {} circuits give the first {n} digits of the recurrence",
            report.exact_matches, report.cases
        ),
    );
    let min_prefix = results.iter().map(|r| r.prefix).min().unwrap_or(0);
    report.note(format!(
        "exact bits k means |y_hat - y| < 2^-k for the m-digit expansion y_hat; \
         the shortest common digit prefix with the reference is {min_prefix} (worst case {})",
        worst.prefix
    ));
    report.note(format!(
        "analytic bound on y_hat - y: {:.3e}",
        budget.accumulated_bound.unwrap_or(f64::NAN)
    ));
    let x = FixedPoint::from_scaled(worst_raw, sc.layout);
    report.note(format!(
        "worst case x = {}: expansion {}, reference {:.10}",
        x.to_binary_string(),
        fbe_expand(&spec, &x, m as usize)?,
        oracle_eval(Function::Arccos, &x)?.to_f64()
    ));
    Ok(report)
}

struct ArccosCase {
    error: f64,
    prefix: usize,
    circuit_ok: bool,
}

/// Largest `k <= m` with `error < 2^-k`.
fn exact_bits(error: f64, m: u32) -> u32 {
    (0..=m).rev().find(|&k| error < (-(k as f64)).exp2()).unwrap_or(0)
}

struct RadixForm {
    name: &'static str,
    id: SpecId,
    int_bits: u32,
    digits: usize,
    /// `log2(x) = scale * f(x)`.
    scale: f64,
}

const RADIX_FORMS: [RadixForm; 4] = [
    RadixForm {
        name: "binary",
        id: SpecId::Log2 { range_exponent: 0 },
        int_bits: 1,
        digits: 24,
        scale: 1.0,
    },
    RadixForm {
        name: "ternary",
        id: SpecId::Log2Ternary,
        int_bits: 3,
        digits: 15,
        scale: 3.0,
    },
    RadixForm {
        name: "quaternary narrow",
        id: SpecId::Log2QuaternaryNarrow,
        int_bits: 2,
        digits: 12,
        scale: 2.0,
    },
    RadixForm {
        name: "quaternary wide",
        id: SpecId::Log2QuaternaryWide,
        int_bits: 4,
        digits: 12,
        scale: 4.0,
    },
];

/// `log2` estimate of one form and its resolution in `log2` units.
fn radix_estimate(form: &RadixForm, raw: u128) -> Result<(f64, f64)> {
    let spec = FunctionSpec::get(form.id);
    let x = FixedPoint::from_bits_raw(raw, Layout::unsigned(form.int_bits, RADIX_FRAC_BITS));
    let d = fbe_expand(&spec, &x, form.digits)?;
    let ulp = form.scale * (spec.radix as f64).powi(-(form.digits as i32));
    Ok((form.scale * d.to_f64(), ulp))
}

/// Ternary and quaternary log2 digits against the binary expansion.
pub fn radix(opts: &VerifyOptions) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(Suite::Radix, "log2 in radix 3 and 4 vs radix 2");
    let mut rng = opts.rng("radix");
    let raws: Vec<u128> = (0..RADIX_CASES)
        .map(|_| (1u128 << RADIX_FRAC_BITS) | rng.gen_range(0..1u128 << RADIX_FRAC_BITS))
        .collect();
    let results = map_cases(opts.execution, &raws, |&raw| {
        RADIX_FORMS
            .iter()
            .map(|f| radix_estimate(f, raw))
            .collect::<Result<Vec<_>>>()
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    report.cases = results.len();
    let mut all_ok = vec![true; results.len()];
    for (k, form) in RADIX_FORMS.iter().enumerate().skip(1) {
        let mut worst: f64 = 0.0;
        let mut bad = Vec::new();
        for (i, r) in results.iter().enumerate() {
            let (b, b_ulp) = r[0];
            let (v, v_ulp) = r[k];
            let tol = if form.digits < RADIX_FORMS[0].digits {
                v_ulp
            } else {
                b_ulp
            };
            let diff = (v - b).abs();
            worst = worst.max(diff / tol);
            if diff > tol {
                bad.push(format!("{:.12}", (raws[i] as f64) / (RADIX_FRAC_BITS as f64).exp2()));
                all_ok[i] = false;
            }
        }
        report.check(
            format!("{} ({} digits) vs binary (24 digits)", form.name, form.digits),
            bad.is_empty(),
            format!(
                "largest difference {worst:.3} ulp; {} outside: {}",
                bad.len(),
                sample(&bad, 3)
            ),
        );
    }
    report.exact_matches = all_ok.iter().filter(|&&ok| ok).count();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_case_patterns() {
        assert_eq!(worst_cases(Function::Exp2, 4)[0].1, 0b1111);
        let cos = worst_cases(Function::Cos, 4);
        assert_eq!(cos[0].0, "0.0111");
        // v_0 is the last binary digit
        assert_eq!(cos[0].1, 0b0111);
        assert_eq!(cos[1].1, 0b1001);
    }

    #[test]
    fn radix_estimates_agree_on_a_simple_point() {
        let raw = 3u128 << (RADIX_FRAC_BITS - 1);
        let (b, _) = radix_estimate(&RADIX_FORMS[0], raw).unwrap();
        for f in &RADIX_FORMS[1..] {
            let (v, ulp) = radix_estimate(f, raw).unwrap();
            assert!((v - b).abs() <= ulp, "{}", f.name);
        }
        assert!((b - 1.5f64.log2()).abs() < 2f64.powi(-23));
    }

    #[test]
    fn small_group2_bounds_hold() {
        let opts = VerifyOptions::default();
        let r = inverse_bound(Function::Exp2, 8, 8, &opts).unwrap();
        assert!(r.passed(), "{r}");
        let r = arccos_exact_bits(8, &opts).unwrap();
        assert!(r.passed(), "{r}");
    }
}
