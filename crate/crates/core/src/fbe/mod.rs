//! Function-value binary expansion and its inverse on fixed-point grids.
//!
//! Forward expansion (`fbe_expand`) reads one digit per step from the subinterval
//! holding `a_i` and moves on with the matching branch map. Inverse evaluation
//! (`ifbe_evaluate`) consumes digits least significant first and applies the
//! inverse maps. Both run in exact big-integer arithmetic that truncates and
//! wraps exactly like the circuit registers do.

mod catalog;
mod derived;
mod oracle;

pub use catalog::{
    builtin_specs, Bound, BranchMap, FunctionSpec, Group, InitialValue, Interval, Piece, Real, Region, SpecId,
};
pub use derived::{derived_eval, plouffe_arctan_bits, DerivedKind};
pub use oracle::{oracle_eval, oracle_expand, oracle_frac_bits, oracle_inverse, oracle_layout};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fixedpoint::{shift_toward_zero, FixedPoint, Layout};

/// The six functions with circuits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Function {
    Log2,
    Arccos,
    Arccot,
    Exp2,
    Cos,
    Cot,
}

impl Function {
    pub const ALL: [Function; 6] = [
        Function::Log2,
        Function::Arccos,
        Function::Arccot,
        Function::Exp2,
        Function::Cos,
        Function::Cot,
    ];

    /// Recurrence used by the circuits. Logarithms run on `[1, 4)`.
    pub fn spec_id(self) -> SpecId {
        match self {
            Function::Log2 => SpecId::Log2 { range_exponent: 1 },
            Function::Arccos => SpecId::Arccos,
            Function::Arccot => SpecId::Arccot,
            Function::Exp2 => SpecId::Exp2,
            Function::Cos => SpecId::Cos,
            Function::Cot => SpecId::Cot,
        }
    }

    pub fn spec(self) -> FunctionSpec {
        FunctionSpec::get(self.spec_id())
    }

    pub fn group(self) -> Group {
        match self {
            Function::Log2 | Function::Arccos | Function::Arccot => Group::Forward,
            _ => Group::Inverse,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Function::Log2 => "log2",
            Function::Arccos => "arccos",
            Function::Arccot => "arccot",
            Function::Exp2 => "exp2",
            Function::Cos => "cos",
            Function::Cot => "cot",
        }
    }
}

impl fmt::Display for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Function {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Function::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::config(format!("unknown function '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DigitOrder {
    /// `w_0 w_1 ...`: index 0 is the first digit after the point.
    MostSignificantFirst,
    /// `v_0 v_1 ...`: index 0 is the last digit after the point.
    LeastSignificantFirst,
}

/// Digits of a number in `[0, 1)` with an explicit orientation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitString {
    digits: Vec<u8>,
    radix: u32,
    order: DigitOrder,
}

impl DigitString {
    pub fn new(digits: Vec<u8>, radix: u32, order: DigitOrder) -> Result<Self> {
        if radix < 2 {
            return Err(Error::config(format!("radix {radix} is below 2")));
        }
        if let Some(d) = digits.iter().find(|&&d| d as u32 >= radix) {
            return Err(Error::config(format!("digit {d} is not below radix {radix}")));
        }
        Ok(DigitString { digits, radix, order })
    }

    /// Parses `.1011`, `0.1011` or `1011` as binary digits, most significant first.
    pub fn from_binary_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let body = t.strip_prefix("0.").or_else(|| t.strip_prefix('.')).unwrap_or(t);
        let digits = body
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::parse(1, format!("'{other}' is not a binary digit in '{text}'"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        DigitString::new(digits, 2, DigitOrder::MostSignificantFirst)
    }

    /// `v_i` = bit `i` of `bits`, for the `n`-digit fraction `bits / 2^n`.
    pub fn from_fraction_bits(bits: u128, n: usize) -> Self {
        let digits = (0..n).map(|i| ((bits >> i) & 1) as u8).collect();
        DigitString {
            digits,
            radix: 2,
            order: DigitOrder::LeastSignificantFirst,
        }
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn radix(&self) -> u32 {
        self.radix
    }

    pub fn order(&self) -> DigitOrder {
        self.order
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// The same number with the digits stored in `order`.
    pub fn reorder(&self, order: DigitOrder) -> DigitString {
        let mut digits = self.digits.clone();
        if order != self.order {
            digits.reverse();
        }
        DigitString {
            digits,
            radix: self.radix,
            order,
        }
    }

    pub fn msb_first(&self) -> Vec<u8> {
        self.reorder(DigitOrder::MostSignificantFirst).digits
    }

    pub fn lsb_first(&self) -> Vec<u8> {
        self.reorder(DigitOrder::LeastSignificantFirst).digits
    }

    /// Exact value as `(numerator, radix^len)`.
    pub fn to_rational(&self) -> (BigInt, BigInt) {
        let r = BigInt::from(self.radix);
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for d in self.msb_first() {
            num = num * &r + d;
            den *= &r;
        }
        (num, den)
    }

    pub fn to_f64(&self) -> f64 {
        let (n, d) = self.to_rational();
        ratio_to_f64(&n, &d)
    }

    /// Binary digits as the fraction bits of an unsigned integer (MSB = first digit).
    pub fn to_bits(&self) -> u128 {
        assert_eq!(self.radix, 2);
        self.msb_first().iter().fold(0u128, |acc, &d| (acc << 1) | d as u128)
    }
}

impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: String = self.msb_first().iter().map(|d| char::from(b'0' + d)).collect();
        if self.radix == 2 {
            write!(f, ".{body}")
        } else {
            write!(f, "(.{body})_{}", self.radix)
        }
    }
}

fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    let shift = den.bits().saturating_sub(60) as usize;
    let n = (num >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (den >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// `raw / 2^frac_bits`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    raw: BigInt,
    frac_bits: u32,
}

impl Dyadic {
    pub fn new(raw: BigInt, frac_bits: u32) -> Self {
        Dyadic { raw, frac_bits }
    }

    pub fn from_fixed(x: &FixedPoint) -> Self {
        Dyadic::new(x.scaled_big(), x.layout().frac_bits)
    }

    pub fn raw(&self) -> &BigInt {
        &self.raw
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    /// Same value on a grid with `frac_bits` fraction bits, truncated toward zero.
    pub fn rescale(&self, frac_bits: u32) -> Dyadic {
        let raw = shift_toward_zero(&self.raw, frac_bits as i64 - self.frac_bits as i64);
        Dyadic::new(raw, frac_bits)
    }

    /// Truncates onto `layout` and wraps into its range.
    pub fn to_fixed(&self, layout: Layout) -> FixedPoint {
        FixedPoint::from_scaled_big(&self.rescale(layout.frac_bits).raw, layout)
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.raw, &(BigInt::one() << self.frac_bits as usize))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

/// A recurrence state: a dyadic value or one of the two sentinels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtendedValue {
    Finite(Dyadic),
    NegInfinity,
    PosInfinity,
}

impl ExtendedValue {
    pub fn finite(&self) -> Option<&Dyadic> {
        match self {
            ExtendedValue::Finite(d) => Some(d),
            _ => None,
        }
    }

    pub(crate) fn raw_or_zero(&self) -> BigInt {
        self.finite().map(|d| d.raw.clone()).unwrap_or_default()
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtendedValue::Finite(d) => d.to_f64(),
            ExtendedValue::NegInfinity => f64::NEG_INFINITY,
            ExtendedValue::PosInfinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for ExtendedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedValue::Finite(d) => d.fmt(f),
            ExtendedValue::NegInfinity => f.write_str("-inf"),
            ExtendedValue::PosInfinity => f.write_str("+inf"),
        }
    }
}

/// Digits plus every intermediate `a_0 .. a_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForwardTrace {
    pub digits: DigitString,
    pub states: Vec<ExtendedValue>,
}

/// Final value plus every intermediate `a_0 .. a_n` (before sign restoration).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseEvaluation {
    pub value: ExtendedValue,
    pub trace: Vec<ExtendedValue>,
}

pub(crate) fn run_forward(spec: &FunctionSpec, a0: ExtendedValue, grid: Layout, n: usize) -> Result<ForwardTrace> {
    let mut states = Vec::with_capacity(n + 1);
    let mut digits = Vec::with_capacity(n);
    states.push(a0);
    for i in 0..n {
        let a = &states[i];
        let j = spec
            .digit_of(a)
            .ok_or_else(|| Error::Overflow(format!("{}: a_{i} = {a} lies in no subinterval", spec.name)))?;
        let next = spec.id.forward_next(j, a, grid);
        digits.push(j);
        states.push(next);
    }
    Ok(ForwardTrace {
        digits: DigitString::new(digits, spec.radix, DigitOrder::MostSignificantFirst)?,
        states,
    })
}

pub(crate) fn run_inverse(spec: &FunctionSpec, digits: &[u8], grid: Layout) -> InverseEvaluation {
    let one = Dyadic::new(BigInt::one() << grid.frac_bits as usize, grid.frac_bits);
    let a0 = match spec.initial_value {
        Some(InitialValue::PosInfinity) => ExtendedValue::PosInfinity,
        _ => ExtendedValue::Finite(one),
    };
    let mut frozen = spec.id == SpecId::Cot;
    let mut trace = vec![a0];
    for i in 0..digits.len() {
        let next = spec.id.inverse_step(i, digits, &trace[i], &mut frozen, grid);
        trace.push(next);
    }
    let last = trace.last().cloned().expect("a_0 present");
    InverseEvaluation {
        value: spec.id.inverse_finish(digits, last, frozen, grid),
        trace,
    }
}

fn require_group(spec: &FunctionSpec, group: Group) -> Result<()> {
    if spec.group == group {
        Ok(())
    } else {
        Err(Error::config(format!(
            "{} has no {} recurrence",
            spec.name,
            if group == Group::Forward { "forward" } else { "inverse" }
        )))
    }
}

/// Forward expansion with the intermediate values.
pub fn fbe_expand_traced(spec: &FunctionSpec, x: &FixedPoint, n: usize) -> Result<ForwardTrace> {
    require_group(spec, Group::Forward)?;
    spec.check_layout(x.layout())?;
    let a0 = ExtendedValue::Finite(Dyadic::from_fixed(x));
    if !spec.domain.contains(&a0) {
        return Err(Error::domain(x.to_f64(), spec.domain.to_string()));
    }
    run_forward(spec, a0, x.layout(), n)
}

/// `n` digits of `f(x)`, most significant first.
pub fn fbe_expand(spec: &FunctionSpec, x: &FixedPoint, n: usize) -> Result<DigitString> {
    Ok(fbe_expand_traced(spec, x, n)?.digits)
}

/// Rebuilds `g(x)` from the digits of `x` on the grid `layout`.
///
/// The digits must be stored least significant first; use
/// [`DigitString::reorder`] to convert.
pub fn ifbe_evaluate(spec: &FunctionSpec, v: &DigitString, layout: Layout) -> Result<InverseEvaluation> {
    require_group(spec, Group::Inverse)?;
    if v.radix() != spec.radix {
        return Err(Error::config(format!(
            "{} takes radix {} digits",
            spec.name, spec.radix
        )));
    }
    if v.order() != DigitOrder::LeastSignificantFirst {
        return Err(Error::config(
            "inverse evaluation consumes digits least significant first; reorder explicitly",
        ));
    }
    spec.check_layout(layout)?;
    layout.validate()?;
    Ok(run_inverse(spec, v.digits(), layout))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftDirection {
    /// `y = x / 2^p`.
    Right,
    /// `y = x * 2^p`.
    Left,
}

/// `y = x * 2^(-+p)` normalized into `[1, 2^(range_exponent + 1))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainReduction {
    pub shifted_input: FixedPoint,
    pub shift_bits: u32,
    pub direction: ShiftDirection,
    pub range_exponent: u32,
}

impl DomainReduction {
    /// `log2 x` from the normalized expansion value `f(y) = log2(y) / (range_exponent + 1)`.
    pub fn assemble(&self, f_of_y: f64) -> f64 {
        let p = self.shift_bits as f64;
        let base = (self.range_exponent as f64 + 1.0) * f_of_y;
        match self.direction {
            ShiftDirection::Right => base + p,
            ShiftDirection::Left => base - p,
        }
    }

    /// The signed exponent `+p` (right shift) or `-p` (left shift).
    pub fn exponent(&self) -> i64 {
        match self.direction {
            ShiftDirection::Right => self.shift_bits as i64,
            ShiftDirection::Left => -(self.shift_bits as i64),
        }
    }
}

/// Moves the binary point of `x > 0` so that `y` lands in `[1, 2)`.
/// `y` keeps every bit of `x`: its layout is `u1.k` with `k` the position of
/// the leading one.
pub fn log2_domain_reduce(x: &FixedPoint) -> Result<DomainReduction> {
    if x.is_zero() || x.is_negative() {
        return Err(Error::domain(x.to_f64(), "(0, inf)"));
    }
    let raw = x.scaled_big();
    let lead = raw.bits() as i64 - 1;
    let frac = x.layout().frac_bits as i64;
    let e = lead - frac;
    let y_layout = Layout::unsigned(1, lead as u32);
    y_layout.validate()?;
    let shifted_input = FixedPoint::from_scaled_big(&raw, y_layout);
    Ok(DomainReduction {
        shifted_input,
        shift_bits: e.unsigned_abs() as u32,
        direction: if e >= 0 {
            ShiftDirection::Right
        } else {
            ShiftDirection::Left
        },
        range_exponent: 0,
    })
}

/// How many output bits the error analysis guarantees, and the bounds behind it.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorBudget {
    pub function: Function,
    pub n: u32,
    pub m: u32,
    /// Fraction bits of the working register.
    pub frac_bits: u32,
    /// Truncation error of one step, `2^-q`.
    pub step_bound: f64,
    /// Bound on the final error; `None` where only an empirical rule exists.
    pub accumulated_bound: Option<f64>,
    pub guaranteed_exact_bits: u32,
    pub formula: &'static str,
}

pub fn error_budget(function: Function, n: u32, m: u32) -> ErrorBudget {
    let q = match function {
        Function::Log2 | Function::Arccos | Function::Cos => m.saturating_sub(2),
        Function::Exp2 => m.saturating_sub(1),
        Function::Arccot => m / 2,
        Function::Cot => m.saturating_sub(n.max(2)),
    };
    let qf = q as f64;
    let (accumulated_bound, guaranteed_exact_bits, formula) = match function {
        Function::Log2 => (None, m, "n = m: all m output bits exact (numerical rule)"),
        Function::Arccot => (None, m, "n = m: all m output bits exact (numerical rule)"),
        Function::Cot => (None, m, "n = m: almost all m output bits exact (numerical rule)"),
        Function::Arccos => (
            Some((-qf / 2.0 - 1.0).exp2() - (-qf).exp2()),
            m / 2 + 1,
            "y_hat - y < 2^(-q/2-1) - 2^-q, exact for n <= m/2 + 1",
        ),
        Function::Exp2 => (
            Some((-qf + 2.0).exp2()),
            m.saturating_sub(2),
            "a_n - a_hat_n < 2^(-q+2)",
        ),
        Function::Cos => (
            Some(((n as f64).exp2() + 1.0) * (-qf).exp2()),
            m.saturating_sub(n),
            "|a_n - a_hat_n| < (2^n + 1) 2^-q",
        ),
    };
    ErrorBudget {
        function,
        n,
        m,
        frac_bits: q,
        step_bound: (-qf).exp2(),
        accumulated_bound,
        guaranteed_exact_bits,
        formula,
    }
}

/// Exact rational value of a dyadic minus `reference`, as `f64`.
pub(crate) fn abs_error(value: &Dyadic, reference: &Dyadic) -> f64 {
    let f = value.frac_bits.max(reference.frac_bits);
    let a = value.raw.clone() << (f - value.frac_bits) as usize;
    let b = reference.raw.clone() << (f - reference.frac_bits) as usize;
    Dyadic::new((a - b).abs(), f).to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fx(text: &str) -> FixedPoint {
        text.parse().unwrap()
    }

    #[test]
    fn log2_worked_example() {
        let spec = FunctionSpec::get(SpecId::Log2 { range_exponent: 0 });
        let x = FixedPoint::from_f64(1.5, Layout::unsigned(1, 24)).unwrap();
        let t = fbe_expand_traced(&spec, &x, 4).unwrap();
        assert_eq!(t.digits.digits(), &[1, 0, 0, 1]);
        assert_eq!(t.states[1].to_f64(), 1.125);
        assert_eq!(t.states[2].to_f64(), 1.265625);
        assert!((t.states[3].to_f64() - 1.601807).abs() < 1e-6);
        assert!((t.states[4].to_f64() - 1.282893).abs() < 1e-6);
    }

    #[test]
    fn log2_of_one_is_zero() {
        let spec = FunctionSpec::get(SpecId::Log2 { range_exponent: 1 });
        let d = fbe_expand(&spec, &fx("u:01.0000"), 6).unwrap();
        assert!(d.digits().iter().all(|&w| w == 0));
    }

    #[test]
    fn arccot_of_zero_uses_the_sentinel() {
        let spec = FunctionSpec::get(SpecId::Arccot);
        let t = fbe_expand_traced(&spec, &fx("s:00.00"), 5).unwrap();
        assert_eq!(t.digits.digits(), &[1, 0, 0, 0, 0]);
        assert_eq!(t.states[1], ExtendedValue::NegInfinity);
        assert_eq!(t.states[5], ExtendedValue::NegInfinity);
    }

    #[test]
    fn arccos_half_is_one_third() {
        let spec = FunctionSpec::get(SpecId::Arccos);
        assert_eq!(fbe_expand(&spec, &fx("s:00.10"), 2).unwrap().to_string(), ".01");
        assert_eq!(fbe_expand(&spec, &fx("s:00.00"), 2).unwrap().to_string(), ".10");
        assert_eq!(fbe_expand(&spec, &fx("s:01.00"), 2).unwrap().to_string(), ".00");
        assert_eq!(fbe_expand(&spec, &fx("s:11.10"), 2).unwrap().to_string(), ".10");
    }

    #[test]
    fn domain_errors() {
        let spec = FunctionSpec::get(SpecId::Log2 { range_exponent: 1 });
        assert!(matches!(
            fbe_expand(&spec, &fx("u:00.10"), 3),
            Err(Error::Domain { .. })
        ));
        let spec = FunctionSpec::get(SpecId::Arccos);
        assert!(matches!(
            fbe_expand(&spec, &fx("s:11.00"), 3),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn exp2_worked_trace() {
        let spec = FunctionSpec::get(SpecId::Exp2);
        let v = DigitString::from_binary_str(".1011").unwrap();
        assert!(ifbe_evaluate(&spec, &v, Layout::unsigned(1, 20)).is_err());
        let v = v.reorder(DigitOrder::LeastSignificantFirst);
        let r = ifbe_evaluate(&spec, &v, Layout::unsigned(1, 20)).unwrap();
        let want = [1.0, std::f64::consts::SQRT_2, 1.6818, 1.2968, 1.6105];
        for (a, w) in r.trace.iter().zip(want) {
            assert!((a.to_f64() - w).abs() < 1e-4, "{a} vs {w}");
        }
        let zeros = DigitString::from_fraction_bits(0, 5);
        assert_eq!(
            ifbe_evaluate(&spec, &zeros, Layout::unsigned(1, 8))
                .unwrap()
                .value
                .to_f64(),
            1.0
        );
    }

    #[test]
    fn cos_and_cot_trivial_points() {
        let cos = FunctionSpec::get(SpecId::Cos);
        let l = Layout::signed(2, 10);
        let half = DigitString::from_fraction_bits(0b1, 1);
        assert_eq!(ifbe_evaluate(&cos, &half, l).unwrap().value.to_f64(), 0.0);
        let three_quarters = DigitString::from_fraction_bits(0b11, 2);
        let v = ifbe_evaluate(&cos, &three_quarters, l).unwrap().value.to_f64();
        assert!((v + std::f64::consts::FRAC_1_SQRT_2).abs() < 2e-3);

        let cot = FunctionSpec::get(SpecId::Cot);
        let l = cot.working_layout(12, 2).unwrap();
        let quarter = DigitString::from_fraction_bits(0b01, 2);
        assert_eq!(ifbe_evaluate(&cot, &quarter, l).unwrap().value.to_f64(), 1.0);
        let half = DigitString::from_fraction_bits(0b10, 2);
        assert_eq!(ifbe_evaluate(&cot, &half, l).unwrap().value.to_f64(), 0.0);
        let zero = DigitString::from_fraction_bits(0, 2);
        assert_eq!(ifbe_evaluate(&cot, &zero, l).unwrap().value, ExtendedValue::PosInfinity);
    }

    #[test]
    fn ternary_of_two() {
        let spec = FunctionSpec::get(SpecId::Log2Ternary);
        let d = fbe_expand(&spec, &fx("u:010.00000"), 4).unwrap();
        assert_eq!(d.digits(), &[1, 0, 0, 0]);
        assert_eq!(d.to_rational(), (BigInt::from(27), BigInt::from(81)));
        assert_eq!(d.to_string(), "(.1000)_3");
    }

    #[test]
    fn domain_reduction_examples() {
        let r = log2_domain_reduce(&fx("u:110.0")).unwrap();
        assert_eq!(r.shifted_input.to_f64(), 1.5);
        assert_eq!((r.shift_bits, r.direction), (2, ShiftDirection::Right));
        assert!((r.assemble(1.5f64.log2()) - 6f64.log2()).abs() < 1e-12);

        let r = log2_domain_reduce(&fx("u:1.00")).unwrap();
        assert_eq!((r.shifted_input.to_f64(), r.shift_bits), (1.0, 0));

        let r = log2_domain_reduce(&fx("u:0.10")).unwrap();
        assert_eq!(r.shifted_input.to_f64(), 1.0);
        assert_eq!((r.shift_bits, r.direction), (1, ShiftDirection::Left));
        assert_eq!(r.assemble(0.0), -1.0);

        assert!(log2_domain_reduce(&fx("s:11.10")).is_err());
    }

    #[test]
    fn budget_examples() {
        assert_eq!(error_budget(Function::Arccos, 9, 16).guaranteed_exact_bits, 9);
        assert_eq!(error_budget(Function::Exp2, 16, 16).guaranteed_exact_bits, 14);
        assert_eq!(error_budget(Function::Cos, 8, 16).guaranteed_exact_bits, 8);
        let cos = error_budget(Function::Cos, 8, 16);
        assert_eq!(cos.accumulated_bound, Some(257.0 * 2f64.powi(-14)));
        assert_eq!(error_budget(Function::Log2, 10, 10).accumulated_bound, None);
    }

    #[test]
    fn digit_string_orientation() {
        let d = DigitString::from_binary_str("0.1011").unwrap();
        assert_eq!(d.order(), DigitOrder::MostSignificantFirst);
        assert_eq!(d.lsb_first(), vec![1, 1, 0, 1]);
        assert_eq!(d.to_f64(), 0.6875);
        assert_eq!(d.to_bits(), 0b1011);
        assert_eq!(
            DigitString::from_fraction_bits(0b1011, 4).reorder(DigitOrder::MostSignificantFirst),
            d
        );
        assert!(DigitString::new(vec![0, 3], 3, DigitOrder::MostSignificantFirst).is_err());
        assert!(DigitString::from_binary_str(".12").is_err());
    }
}
