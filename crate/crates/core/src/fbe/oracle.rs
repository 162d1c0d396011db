//! High-precision references: the same recurrences run on a grid with at
//! least four times as many fraction bits as the circuit registers.

use super::{run_forward, run_inverse, DigitString, Dyadic, ExtendedValue, Function, FunctionSpec, SpecId};
use crate::error::{Error, Result};
use crate::fixedpoint::{FixedPoint, Layout};

/// Fraction bits of the oracle grid for circuits of width `m`.
pub fn oracle_frac_bits(m: u32) -> u32 {
    (4 * m).max(32)
}

/// Recurrence and grid the oracle uses for `function` with `n` digits.
pub fn oracle_layout(function: Function, m: u32, n: u32) -> (SpecId, Layout) {
    let f = oracle_frac_bits(m);
    match function {
        Function::Log2 => (SpecId::Log2 { range_exponent: 1 }, Layout::unsigned(2, f)),
        Function::Arccos => (SpecId::Arccos, Layout::signed(2, f)),
        Function::Arccot => (SpecId::Arccot, Layout::signed(f + 2, f)),
        Function::Exp2 => (SpecId::Exp2, Layout::unsigned(1, f)),
        Function::Cos => (SpecId::CosSigned, Layout::signed(2, f)),
        Function::Cot => (SpecId::CotInfinite, Layout::signed(n + 2, f)),
    }
}

/// `n` digits of a Group 1 function of `x`, computed on the oracle grid.
pub fn oracle_expand(function: Function, x: &FixedPoint, n: usize) -> Result<DigitString> {
    if function.group() != super::Group::Forward {
        return Err(Error::config(format!("{function} is not expanded digit by digit")));
    }
    let m = x.width().max(n as u32);
    let (id, grid) = oracle_layout(function, m, n as u32);
    let spec = FunctionSpec::get(id);
    let a0 = ExtendedValue::Finite(Dyadic::from_fixed(x).rescale(grid.frac_bits));
    if !spec.domain.contains(&a0) {
        return Err(Error::domain(x.to_f64(), spec.domain.to_string()));
    }
    Ok(run_forward(&spec, a0, grid, n)?.digits)
}

/// A Group 2 function of the digits `v`, computed on the oracle grid.
pub fn oracle_inverse(function: Function, v: &DigitString, m: u32) -> Result<ExtendedValue> {
    if function.group() != super::Group::Inverse {
        return Err(Error::config(format!("{function} is not rebuilt from digits")));
    }
    let (id, grid) = oracle_layout(function, m, v.len() as u32);
    let spec = FunctionSpec::get(id);
    Ok(run_inverse(&spec, &v.lsb_first(), grid).value)
}

/// Reference value of `function` at `x`.
///
/// Group 1 returns the normalized `f(x)` in `[0, 1)` to `oracle_frac_bits`
/// digits (for log2 that is `log2(x) / 2`). Group 2 reads the fraction bits of
/// `x` as the digit string and returns `g(x)`.
pub fn oracle_eval(function: Function, x: &FixedPoint) -> Result<ExtendedValue> {
    let m = x.width();
    match function.group() {
        super::Group::Forward => {
            let n = oracle_frac_bits(m) as usize;
            let digits = oracle_expand(function, x, n)?;
            let (num, _) = digits.to_rational();
            Ok(ExtendedValue::Finite(Dyadic::new(num, n as u32)))
        }
        super::Group::Inverse => {
            let f = x.layout().frac_bits as usize;
            let raw = x.raw_bits() & ((1u128 << f) - 1);
            let v = DigitString::from_fraction_bits(raw, f);
            oracle_inverse(function, &v, m)
        }
    }
}
