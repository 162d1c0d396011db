//! Functions reached from the six base functions by constants and angle relations,
//! and the Plouffe arctangent recursion.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use super::{
    fbe_expand, ifbe_evaluate, log2_domain_reduce, DigitOrder, DigitString, ExtendedValue, FunctionSpec, SpecId,
};
use crate::error::{Error, Result};
use crate::fixedpoint::{shift_toward_zero, FixedPoint, Layout};

/// `ln 2` to 64 fraction bits, truncated.
const LN_2: u64 = 0xB172_17F7_D1CF_79AB;
/// Fraction part of `log2 e` to 64 bits, truncated.
const LOG2_E_FRAC: u64 = 0x7154_7652_B82F_E177;
/// `log10 2` to 64 fraction bits, truncated.
const LOG10_2: u64 = 0x4D10_4D42_7DE7_FBCC;
const CONST_BITS: u32 = 64;

const GUARD_BITS: u32 = 8;
/// Largest output precision `derived_eval` accepts.
pub const MAX_DERIVED_PRECISION: u32 = 48;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DerivedKind {
    Ln,
    Log10,
    /// `arcsin(x) / pi`.
    Arcsin,
    /// `arctan(x) / pi`.
    Arctan,
    ExpE,
    /// `sin(pi x)`.
    Sin,
    /// `tan(pi x)`.
    Tan,
}

impl DerivedKind {
    pub const ALL: [DerivedKind; 7] = [
        DerivedKind::Ln,
        DerivedKind::Log10,
        DerivedKind::Arcsin,
        DerivedKind::Arctan,
        DerivedKind::ExpE,
        DerivedKind::Sin,
        DerivedKind::Tan,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DerivedKind::Ln => "ln",
            DerivedKind::Log10 => "log10",
            DerivedKind::Arcsin => "arcsin",
            DerivedKind::Arctan => "arctan",
            DerivedKind::ExpE => "exp",
            DerivedKind::Sin => "sin",
            DerivedKind::Tan => "tan",
        }
    }

    /// Float reference with the same units as [`derived_eval`].
    pub fn reference(self, x: f64) -> f64 {
        use std::f64::consts::PI;
        match self {
            DerivedKind::Ln => x.ln(),
            DerivedKind::Log10 => x.log10(),
            DerivedKind::Arcsin => x.asin() / PI,
            DerivedKind::Arctan => x.atan() / PI,
            DerivedKind::ExpE => x.exp(),
            DerivedKind::Sin => (PI * x).sin(),
            DerivedKind::Tan => (PI * x).tan(),
        }
    }
}

impl fmt::Display for DerivedKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DerivedKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DerivedKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::config(format!("unknown derived function '{s}'")))
    }
}

fn scaled_from_f64(x: f64, frac: u32) -> Result<BigInt> {
    if !x.is_finite() {
        return Err(Error::domain(x, "finite reals"));
    }
    BigInt::from_f64((x * (frac as f64).exp2()).trunc()).ok_or_else(|| Error::domain(x, "finite reals"))
}

fn digits_value(d: &DigitString) -> BigInt {
    d.to_rational().0
}

fn fraction_digits(raw: &BigInt, n: u32) -> DigitString {
    let bits = raw.to_u128().expect("fraction fits in 128 bits");
    DigitString::from_fraction_bits(bits, n as usize)
}

fn output(raw: &BigInt, frac: u32, precision: u32) -> Result<FixedPoint> {
    let layout = Layout::signed(8, precision);
    let den = BigInt::one() << frac as usize;
    FixedPoint::from_rational(raw, &den, layout)
}

/// `log2 x` at `m` fraction bits, through domain reduction onto `[1, 2)`.
fn log2_scaled(x: f64, m: u32) -> Result<BigInt> {
    let raw = scaled_from_f64(x, m)?;
    if !raw.is_positive() {
        return Err(Error::domain(x, "(0, inf)"));
    }
    let int_bits = (raw.bits() as u32).saturating_sub(m).max(1);
    let layout = Layout::unsigned(int_bits, m);
    layout.validate()?;
    let fixed = FixedPoint::from_scaled_big(&raw, layout);
    let reduced = log2_domain_reduce(&fixed)?;
    let y = super::Dyadic::from_fixed(&reduced.shifted_input).to_fixed(Layout::unsigned(1, m));
    let spec = FunctionSpec::get(SpecId::Log2 { range_exponent: 0 });
    let f = digits_value(&fbe_expand(&spec, &y, m as usize)?);
    Ok(f + (BigInt::from(reduced.exponent()) << m as usize))
}

/// Evaluates `kind` at `x` with `precision` fraction bits in a `s8.precision` result.
///
/// The base functions run `8` guard bits wider; the result is truncated toward zero.
pub fn derived_eval(kind: DerivedKind, x: f64, precision: u32) -> Result<FixedPoint> {
    if precision == 0 || precision > MAX_DERIVED_PRECISION {
        return Err(Error::config(format!(
            "precision must lie in 1..={MAX_DERIVED_PRECISION}, got {precision}"
        )));
    }
    let m = precision + GUARD_BITS;
    let one = BigInt::one() << m as usize;
    match kind {
        DerivedKind::Ln | DerivedKind::Log10 => {
            let c = if kind == DerivedKind::Ln { LN_2 } else { LOG10_2 };
            let l = log2_scaled(x, m)?;
            output(&(l * c), m + CONST_BITS, precision)
        }
        DerivedKind::Arcsin => {
            let a = FixedPoint::from_f64(x, Layout::signed(2, m))?;
            let f = digits_value(&fbe_expand(&FunctionSpec::get(SpecId::Arccos), &a, m as usize)?);
            output(&((&one >> 1usize) - f), m, precision)
        }
        DerivedKind::Arctan => {
            let a = FixedPoint::from_f64(x, Layout::signed(m + 2, m))?;
            let f = digits_value(&fbe_expand(&FunctionSpec::get(SpecId::Arccot), &a, m as usize)?);
            output(&((&one >> 1usize) - f), m, precision)
        }
        DerivedKind::ExpE => {
            let log2_e = (BigInt::one() << CONST_BITS as usize) + LOG2_E_FRAC;
            let t = shift_toward_zero(&(scaled_from_f64(x, m)? * log2_e), -(CONST_BITS as i64));
            let (k, r) = t.div_mod_floor(&one);
            let k = k
                .to_i64()
                .ok_or_else(|| Error::Overflow(format!("exp({x}) is out of range")))?;
            if k >= 8 {
                return Err(Error::Overflow(format!("exp({x}) does not fit s8.{precision}")));
            }
            let v = fraction_digits(&r, m);
            let spec = FunctionSpec::get(SpecId::Exp2);
            let a = ifbe_evaluate(&spec, &v, Layout::unsigned(1, m))?.value.raw_or_zero();
            output(&shift_toward_zero(&a, k), m, precision)
        }
        DerivedKind::Sin => {
            let n = m;
            let q = m + precision + GUARD_BITS;
            let t = (scaled_from_f64(x, n)? - (BigInt::one() << (n as usize - 1)))
                .mod_floor(&(BigInt::one() << (n as usize + 1)));
            let (half_turns, r) = t.div_mod_floor(&(BigInt::one() << n as usize));
            let v = fraction_digits(&r, n);
            let spec = FunctionSpec::get(SpecId::Cos);
            let c = ifbe_evaluate(&spec, &v, Layout::signed(2, q))?.value.raw_or_zero();
            let c = if half_turns.is_one() { -c } else { c };
            output(&c, q, precision)
        }
        DerivedKind::Tan => {
            let t = ((&one >> 1usize) - scaled_from_f64(x, m)?).mod_floor(&one);
            let v = fraction_digits(&t, m);
            let spec = FunctionSpec::get(SpecId::Cot);
            let layout = spec.working_layout(2 * m, m)?;
            match ifbe_evaluate(&spec, &v, layout)?.value {
                ExtendedValue::Finite(d) => output(d.raw(), d.frac_bits(), precision),
                _ => Err(Error::domain(x, "x - 1/2 not an integer")),
            }
        }
    }
}

/// Binary digits of `arctan(x) / pi` by `a_{k+1} = 2 a_k / (1 - a_k^2)`.
///
/// Digit `k` is 1 when `a_k < 0`; `a_k = +-1` maps to the `-inf` sentinel, which
/// counts as negative and maps to 0.
pub fn plouffe_arctan_bits(x: &FixedPoint, n: usize) -> Result<DigitString> {
    if x.is_negative() {
        return Err(Error::domain(x.to_f64(), "[0, inf)"));
    }
    let w = x.layout().frac_bits as usize + 4 * n;
    let unit = BigInt::one() << w;
    let unit_sq = BigInt::one() << (2 * w);
    let limit = BigInt::one() << (w + 4 * n);
    let mut a = Some(x.scaled_big() << (4 * n));
    let mut digits = Vec::with_capacity(n);
    for _ in 0..n {
        digits.push(match &a {
            Some(v) if !v.is_negative() => 0,
            _ => 1,
        });
        a = match a {
            None => Some(BigInt::zero()),
            Some(v) if v.abs() == unit => None,
            Some(v) => {
                let den = &unit_sq - &v * &v;
                let next = ((v << 1usize) * &unit_sq).div_floor(&den);
                (next.abs() <= limit).then_some(next)
            }
        };
    }
    DigitString::new(digits, 2, DigitOrder::MostSignificantFirst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stored_constants_match_floats() {
        let scale = 2f64.powi(-64);
        assert!((LN_2 as f64 * scale - std::f64::consts::LN_2).abs() < 1e-15);
        assert!((1.0 + LOG2_E_FRAC as f64 * scale - std::f64::consts::LOG2_E).abs() < 1e-15);
        assert!((LOG10_2 as f64 * scale - std::f64::consts::LOG10_2).abs() < 1e-15);
    }

    #[test]
    fn named_examples() {
        let ln2 = derived_eval(DerivedKind::Ln, 2.0, 8).unwrap();
        assert_eq!(ln2.scaled(), 0b1011_0001);
        assert_eq!(derived_eval(DerivedKind::Arcsin, 0.0, 16).unwrap().scaled(), 0);
        assert_eq!(derived_eval(DerivedKind::Tan, 0.25, 16).unwrap().to_f64(), 1.0);
        assert!(matches!(
            derived_eval(DerivedKind::Tan, 0.5, 16),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            derived_eval(DerivedKind::Ln, -1.0, 16),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn close_to_float_references() {
        let cases = [
            (DerivedKind::Ln, 0.3),
            (DerivedKind::Ln, 37.5),
            (DerivedKind::Log10, 5.0),
            (DerivedKind::Arcsin, 0.6),
            (DerivedKind::Arcsin, -0.25),
            (DerivedKind::Arctan, 3.0),
            (DerivedKind::Arctan, -0.5),
            (DerivedKind::ExpE, 1.0),
            (DerivedKind::ExpE, -2.5),
            (DerivedKind::Sin, 0.3),
            (DerivedKind::Sin, 1.7),
            (DerivedKind::Tan, 0.1),
            (DerivedKind::Tan, 0.8),
        ];
        for (kind, x) in cases {
            let got = derived_eval(kind, x, 24).unwrap().to_f64();
            let want = kind.reference(x);
            assert!((got - want).abs() < 1e-5, "{kind}({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn plouffe_examples() {
        let one: FixedPoint = "u:1.0000".parse().unwrap();
        assert_eq!(plouffe_arctan_bits(&one, 4).unwrap().to_string(), ".0100");
        let half: FixedPoint = "u:0.1000".parse().unwrap();
        assert_eq!(plouffe_arctan_bits(&half, 8).unwrap().to_string(), ".00100101");
        let zero: FixedPoint = "u:0.0000".parse().unwrap();
        assert_eq!(plouffe_arctan_bits(&zero, 6).unwrap().to_string(), ".000000");
        let neg: FixedPoint = "s:11.1000".parse().unwrap();
        assert!(plouffe_arctan_bits(&neg, 3).is_err());
    }
}
