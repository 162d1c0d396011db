//! Golden vectors and the two worked traces.

use super::{map_cases, Suite, VerificationReport, VerifyOptions};
use crate::circuit::simulate_basis;
use crate::error::{Error, Result};
use crate::fbe::{fbe_expand_traced, ifbe_evaluate, DigitOrder, DigitString, Function, Group, SpecId};
use crate::fixedpoint::{FixedPoint, Layout};
use crate::synth::{synthesize, Decoded, SynthConfig, SynthesizedCircuit};

pub const GOLDEN_FIXTURE: &str = include_str!("../../fixtures/golden.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GoldenKind {
    /// Checked bit for bit.
    Golden,
    /// Run and printed, not checked.
    Info,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenRow {
    pub kind: GoldenKind,
    pub function: Function,
    pub n: u32,
    pub m: u32,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

pub fn parse_golden(text: &str) -> Result<Vec<GoldenRow>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: &str| Error::parse(i + 1, msg);
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 6 {
            return Err(bad("expected: kind function n m input output"));
        }
        let kind = match f[0] {
            "golden" => GoldenKind::Golden,
            "info" => GoldenKind::Info,
            _ => return Err(bad("kind must be golden or info")),
        };
        let function = f[1].parse().map_err(|_| bad("unknown function"))?;
        let n = f[2].parse().map_err(|_| bad("bad n"))?;
        let m = f[3].parse().map_err(|_| bad("bad m"))?;
        let split = |s: &str| s.split(',').map(String::from).collect::<Vec<_>>();
        rows.push(GoldenRow {
            kind,
            function,
            n,
            m,
            inputs: split(f[4]),
            outputs: split(f[5]),
        });
    }
    Ok(rows)
}

/// Input text as the bit pattern of the input register.
pub(crate) fn input_bits(sc: &SynthesizedCircuit, text: &str) -> Result<u128> {
    match sc.function().group() {
        Group::Forward => Ok(FixedPoint::parse_with_layout(text, sc.layout)?.raw_bits()),
        Group::Inverse => {
            let t = if text.contains('.') {
                text.to_string()
            } else {
                format!(".{text}")
            };
            let v = DigitString::from_binary_str(&t)?;
            if v.len() != sc.config.n as usize {
                return Err(Error::config(format!("{text} is not {} digits", sc.config.n)));
            }
            Ok(v.to_bits())
        }
    }
}

fn simulate_text(sc: &SynthesizedCircuit, input: &str) -> Result<String> {
    let out = simulate_basis(&sc.circuit, &sc.encode(input_bits(sc, input)?)?)?;
    sc.output_text(&out)
}

pub fn table2(opts: &VerifyOptions) -> Result<VerificationReport> {
    let rows = parse_golden(GOLDEN_FIXTURE)?;
    let mut report = VerificationReport::new(Suite::Table2, "golden vectors");
    let cases: Vec<(GoldenRow, SynthesizedCircuit)> = rows
        .into_iter()
        .map(|r| {
            let sc = synthesize(&SynthConfig::new(r.function, r.n, r.m))?;
            Ok((r, sc))
        })
        .collect::<Result<_>>()?;
    let results = map_cases(opts.execution, &cases, |(row, sc)| {
        row.inputs
            .iter()
            .map(|x| simulate_text(sc, x))
            .collect::<Result<Vec<_>>>()
    });
    for ((row, _), got) in cases.iter().zip(results) {
        let got = got?;
        match row.kind {
            GoldenKind::Golden => {
                for ((x, want), g) in row.inputs.iter().zip(&row.outputs).zip(&got) {
                    report.cases += 1;
                    let ok = g == want;
                    report.exact_matches += ok as usize;
                    report.check(
                        format!("{} n={} m={} |{x}>", row.function, row.n, row.m),
                        ok,
                        format!("got |{g}>, expected |{want}>"),
                    );
                }
            }
            GoldenKind::Info => {
                let pairs: Vec<String> = row
                    .inputs
                    .iter()
                    .zip(&got)
                    .map(|(x, g)| format!("|{x}> -> |{g}>"))
                    .collect();
                report.note(format!(
                    "{} n={} m={} (informational): {}; listed outputs {}",
                    row.function,
                    row.n,
                    row.m,
                    pairs.join(", "),
                    row.outputs
                        .iter()
                        .map(|o| format!("|{o}>"))
                        .collect::<Vec<_>>()
                        .join(", ")
                ));
            }
        }
    }
    Ok(report)
}

/// True when `value` truncated to the decimals of `printed` is within one unit
/// in the last printed place.
pub(crate) fn matches_printed(value: f64, printed: &str) -> bool {
    let decimals = printed.split('.').nth(1).map_or(0, |f| f.len()) as i32;
    let want: f64 = match printed.parse() {
        Ok(v) => v,
        Err(_) => return false,
    };
    let unit = 10f64.powi(-decimals);
    let truncated = (value / unit).trunc() * unit;
    (truncated - want).abs() <= unit * (1.0 + 1e-9)
}

fn trace_check(report: &mut VerificationReport, name: &str, values: &[(f64, &str)]) {
    let ok = values.iter().all(|&(v, p)| matches_printed(v, p));
    let detail = values
        .iter()
        .map(|(v, p)| format!("{v:.6} vs {p}"))
        .collect::<Vec<_>>()
        .join(", ");
    report.check(name, ok, detail);
}

const LOG2_DIGITS: [u8; 4] = [1, 0, 0, 1];
const LOG2_TRACE: [(usize, &str); 2] = [(2, "1.265625"), (3, "1.601807")];
const EXP2_TRACE: [(usize, &str); 4] = [(1, "1.4142"), (2, "1.6818"), (3, "1.2968"), (4, "1.6105")];
const TRACE_M: u32 = 16;

/// The log2(1.5) and 2^0.7 examples, classically and on the circuits.
pub fn worked_traces() -> Result<VerificationReport> {
    let mut report = VerificationReport::new(Suite::WorkedTraces, format!("log2(1.5) and 2^.1011 at m={TRACE_M}"));

    let spec = SpecId::Log2 { range_exponent: 0 };
    let layout = Layout::unsigned(1, TRACE_M - 1);
    let x = FixedPoint::from_f64(1.5, layout)?;
    let t = fbe_expand_traced(&crate::fbe::FunctionSpec::get(spec), &x, 4)?;
    report.cases += 1;
    let ok = t.digits.digits() == LOG2_DIGITS;
    report.exact_matches += ok as usize;
    report.check("classical log2 digits", ok, format!("w = {}", t.digits));
    let vals: Vec<(f64, &str)> = LOG2_TRACE.iter().map(|&(i, p)| (t.states[i].to_f64(), p)).collect();
    trace_check(&mut report, "classical log2 trace a_2, a_3", &vals);

    // The circuit normalizes over [1, 4): its input is x^2 and its chain holds a_i^2 = a_(i+1).
    let sc = synthesize(&SynthConfig::new(Function::Log2, 4, TRACE_M))?;
    let x2 = FixedPoint::from_f64(2.25, sc.layout)?;
    let state = simulate_basis(&sc.circuit, &sc.encode_value(&x2)?)?;
    report.cases += 1;
    let got = sc.decode_output(&state)?;
    let ok = matches!(&got, Decoded::Digits(d) if d.digits() == LOG2_DIGITS);
    report.exact_matches += ok as usize;
    report.check("circuit log2 digits", ok, format!("w = {got}"));
    let chain = sc.decode_chain(&state)?;
    let vals: Vec<(f64, &str)> = LOG2_TRACE.iter().map(|&(i, p)| (chain[i - 1].to_f64(), p)).collect();
    trace_check(&mut report, "circuit log2 registers RegI1, RegI2", &vals);

    let v = DigitString::from_binary_str(".1011")?;
    let layout = Layout::unsigned(1, TRACE_M - 1);
    let spec = crate::fbe::FunctionSpec::get(SpecId::Exp2);
    let eval = ifbe_evaluate(&spec, &v.reorder(DigitOrder::LeastSignificantFirst), layout)?;
    let vals: Vec<(f64, &str)> = EXP2_TRACE.iter().map(|&(i, p)| (eval.trace[i].to_f64(), p)).collect();
    report.cases += 1;
    trace_check(&mut report, "classical exp2 trace a_1 .. a_4", &vals);
    report.exact_matches += report.checks.last().is_some_and(|c| c.passed) as usize;

    let sc = synthesize(&SynthConfig::new(Function::Exp2, 4, TRACE_M))?;
    let state = simulate_basis(&sc.circuit, &sc.encode_digits(&v)?)?;
    let chain = sc.decode_chain(&state)?;
    let vals: Vec<(f64, &str)> = EXP2_TRACE.iter().map(|&(i, p)| (chain[i].to_f64(), p)).collect();
    report.cases += 1;
    trace_check(&mut report, "circuit exp2 registers RegI1 .. RegI4", &vals);
    report.exact_matches += report.checks.last().is_some_and(|c| c.passed) as usize;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_parses() {
        let rows = parse_golden(GOLDEN_FIXTURE).unwrap();
        let golden: usize = rows
            .iter()
            .filter(|r| r.kind == GoldenKind::Golden)
            .map(|r| r.inputs.len())
            .sum();
        assert_eq!(golden, 11);
        assert!(rows
            .iter()
            .any(|r| r.kind == GoldenKind::Info && r.function == Function::Exp2));
    }

    #[test]
    fn malformed_fixture_lines_are_rejected() {
        assert!(matches!(
            parse_golden("golden log2 4 4 01.00"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(parse_golden("maybe log2 4 4 01.00 0.000").is_err());
        assert!(parse_golden("golden tan 4 4 01.00 0.000").is_err());
    }

    #[test]
    fn printed_precision_tolerance() {
        assert!(matches_printed(1.601_807_4, "1.601807"));
        assert!(matches_printed(1.610_59, "1.6105"));
        assert!(matches_printed(1.610_4, "1.6105"));
        assert!(!matches_printed(1.612, "1.6105"));
    }

    #[test]
    fn golden_and_traces_pass() {
        let r = table2(&VerifyOptions::default()).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.cases, 11);
        let r = worked_traces().unwrap();
        assert!(r.passed(), "{r}");
    }
}
