//! Two's-complement fixed-point numbers that mirror circuit registers bit for bit.
//!
//! A [`FixedPoint`] is a bit string of `int_bits + frac_bits` binary digits with an
//! implied binary point. Signed layouts count the sign bit among the integer bits.
//! Every operation is width-preserving and wraps modulo `2^width`, which is what a
//! reversible adder does; the checked variants (`square`, `sqrt_nonrestoring`, ...)
//! additionally report overflow or domain violations. All truncation is toward zero.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Widest register a [`FixedPoint`] can model.
pub const MAX_WIDTH: u32 = 120;

/// Bit layout of a fixed-point register.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Layout {
    /// Integer-part bits, including the sign bit for signed layouts.
    pub int_bits: u32,
    /// Fraction bits (the `q` of the error analysis).
    pub frac_bits: u32,
    pub signed: bool,
}

impl Layout {
    pub const fn unsigned(int_bits: u32, frac_bits: u32) -> Self {
        Layout {
            int_bits,
            frac_bits,
            signed: false,
        }
    }

    pub const fn signed(int_bits: u32, frac_bits: u32) -> Self {
        Layout {
            int_bits,
            frac_bits,
            signed: true,
        }
    }

    pub const fn width(&self) -> u32 {
        self.int_bits + self.frac_bits
    }

    pub fn validate(&self) -> Result<()> {
        let w = self.width();
        if w == 0 || w > MAX_WIDTH {
            return Err(Error::config(format!("register width {w} must be in 1..={MAX_WIDTH}")));
        }
        if self.signed && self.int_bits == 0 {
            return Err(Error::config("signed layout needs a sign bit among int_bits"));
        }
        Ok(())
    }

    /// Same bits read without a sign.
    pub const fn as_unsigned(&self) -> Self {
        Layout::unsigned(self.int_bits, self.frac_bits)
    }

    pub const fn as_signed(&self) -> Self {
        Layout::signed(self.int_bits, self.frac_bits)
    }

    fn mask(&self) -> u128 {
        if self.width() >= 128 {
            u128::MAX
        } else {
            (1u128 << self.width()) - 1
        }
    }

    /// Smallest and largest scaled integer this layout can hold.
    pub fn raw_range(&self) -> (i128, i128) {
        let w = self.width();
        if self.signed {
            (-(1i128 << (w - 1)), (1i128 << (w - 1)) - 1)
        } else {
            (0, (1i128 << w) - 1)
        }
    }

    /// One unit in the last place as an `f64`.
    pub fn ulp(&self) -> f64 {
        (-(self.frac_bits as f64)).exp2()
    }
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}.{}",
            if self.signed { "s" } else { "u" },
            self.int_bits,
            self.frac_bits
        )
    }
}

/// A fixed-point value: `bits` interpreted under `layout`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FixedPoint {
    bits: u128,
    layout: Layout,
}

impl FixedPoint {
    /// Builds a value from raw register bits (LSB = bit 0); excess bits are dropped.
    pub fn from_bits_raw(bits: u128, layout: Layout) -> Self {
        FixedPoint {
            bits: bits & layout.mask(),
            layout,
        }
    }

    /// Builds a value from its scaled integer (`value * 2^frac_bits`), wrapping.
    pub fn from_scaled(scaled: i128, layout: Layout) -> Self {
        Self::from_bits_raw(scaled as u128, layout)
    }

    /// Builds a value from a `BigInt` scaled integer, wrapping modulo `2^width`.
    pub fn from_scaled_big(scaled: &BigInt, layout: Layout) -> Self {
        let modulus = BigInt::one() << layout.width();
        let wrapped = scaled.mod_floor(&modulus);
        Self::from_bits_raw(wrapped.to_u128().unwrap_or(0), layout)
    }

    pub fn zero(layout: Layout) -> Self {
        Self::from_bits_raw(0, layout)
    }

    /// `1.0`, or an overflow error when the layout has no room for it.
    pub fn one(layout: Layout) -> Result<Self> {
        let scaled = 1i128 << layout.frac_bits;
        let (_, hi) = layout.raw_range();
        if scaled > hi {
            return Err(Error::Overflow(format!("1.0 does not fit {layout}")));
        }
        Ok(Self::from_scaled(scaled, layout))
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn width(&self) -> u32 {
        self.layout.width()
    }

    /// Raw register bits, LSB = bit 0.
    pub fn raw_bits(&self) -> u128 {
        self.bits
    }

    pub fn bit(&self, index: u32) -> bool {
        (self.bits >> index) & 1 == 1
    }

    /// Binary digits, most significant first.
    pub fn bits(&self) -> Vec<bool> {
        (0..self.width()).rev().map(|i| self.bit(i)).collect()
    }

    /// Inverse of [`FixedPoint::bits`].
    pub fn from_bits(bits: &[bool], layout: Layout) -> Result<Self> {
        if bits.len() != layout.width() as usize {
            return Err(Error::config(format!(
                "{} bits given for a {}-bit layout",
                bits.len(),
                layout.width()
            )));
        }
        let raw = bits.iter().fold(0u128, |acc, &b| (acc << 1) | b as u128);
        Ok(Self::from_bits_raw(raw, layout))
    }

    /// The scaled integer `value * 2^frac_bits`, honouring the sign convention.
    pub fn scaled(&self) -> i128 {
        let w = self.width();
        if self.layout.signed && self.bit(w - 1) {
            self.bits as i128 - (1i128 << w)
        } else {
            self.bits as i128
        }
    }

    pub fn scaled_big(&self) -> BigInt {
        BigInt::from(self.scaled())
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn is_negative(&self) -> bool {
        self.scaled() < 0
    }

    pub fn to_f64(&self) -> f64 {
        self.scaled() as f64 * self.layout.ulp()
    }

    /// Truncates `x` toward zero onto the layout grid.
    pub fn from_f64(x: f64, layout: Layout) -> Result<Self> {
        layout.validate()?;
        if !x.is_finite() {
            return Err(Error::domain(x, "finite reals"));
        }
        let scaled = (x * (layout.frac_bits as f64).exp2()).trunc();
        let (lo, hi) = layout.raw_range();
        if scaled < lo as f64 || scaled > hi as f64 {
            return Err(Error::Overflow(format!("{x} does not fit {layout}")));
        }
        Ok(Self::from_scaled(scaled as i128, layout))
    }

    /// Exact value as `numerator / denominator` with a power-of-two denominator.
    pub fn to_rational(&self) -> (BigInt, BigInt) {
        (self.scaled_big(), BigInt::one() << self.layout.frac_bits)
    }

    /// Truncates `num / den` toward zero onto the layout grid.
    pub fn from_rational(num: &BigInt, den: &BigInt, layout: Layout) -> Result<Self> {
        layout.validate()?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let scaled = div_toward_zero(&(num << layout.frac_bits), den);
        Self::checked_from_big(&scaled, layout)
    }

    fn checked_from_big(scaled: &BigInt, layout: Layout) -> Result<Self> {
        let (lo, hi) = layout.raw_range();
        if *scaled < BigInt::from(lo) || *scaled > BigInt::from(hi) {
            return Err(Error::Overflow(format!("scaled value {scaled} does not fit {layout}")));
        }
        Ok(Self::from_scaled_big(scaled, layout))
    }

    /// Same bits under another layout of equal width.
    pub fn reinterpret(&self, layout: Layout) -> Result<Self> {
        if layout.width() != self.width() {
            return Err(Error::config(format!("cannot reinterpret {} as {layout}", self.layout)));
        }
        Ok(Self::from_bits_raw(self.bits, layout))
    }

    /// Converts onto another layout, truncating toward zero and wrapping.
    pub fn resize(&self, layout: Layout) -> Self {
        let scaled = self.scaled_big();
        let shifted = shift_toward_zero(&scaled, layout.frac_bits as i64 - self.layout.frac_bits as i64);
        Self::from_scaled_big(&shifted, layout)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.layout != other.layout {
            return Err(Error::config(format!(
                "layout mismatch: {} vs {}",
                self.layout, other.layout
            )));
        }
        Ok(())
    }

    /// `(a + b) mod 2^width`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self::from_bits_raw(self.bits.wrapping_add(other.bits), self.layout))
    }

    /// `(a - b) mod 2^width`.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self::from_bits_raw(self.bits.wrapping_sub(other.bits), self.layout))
    }

    /// Logical shift: left for `k > 0`, right for `k < 0`, zero fill.
    pub fn shift(&self, k: i32) -> Self {
        let w = self.width() as i32;
        assert!(k.abs() < w, "shift amount {k} out of range for width {w}");
        let bits = if k >= 0 { self.bits << k } else { self.bits >> (-k) };
        Self::from_bits_raw(bits, self.layout)
    }

    /// Two's-complement negation; requires a signed layout.
    pub fn negate(&self) -> Result<Self> {
        if !self.layout.signed {
            return Err(Error::config("negate requires a signed layout"));
        }
        Ok(self.negate_wrapping())
    }

    /// Invert all bits and add one at the lowest bit, whatever the layout.
    pub fn negate_wrapping(&self) -> Self {
        Self::from_bits_raw((!self.bits).wrapping_add(1), self.layout)
    }

    /// `|a|`, with the most-negative value wrapping to itself.
    pub fn abs_wrapping(&self) -> Self {
        if self.is_negative() {
            self.negate_wrapping()
        } else {
            *self
        }
    }

    /// Adds one unit at bit `pos` (0 = lowest fraction bit), wrapping.
    pub fn increment_at(&self, pos: u32) -> Self {
        Self::from_bits_raw(self.bits.wrapping_add(1u128 << pos), self.layout)
    }

    /// Subtracts one unit at bit `pos`, wrapping.
    pub fn decrement_at(&self, pos: u32) -> Self {
        Self::from_bits_raw(self.bits.wrapping_sub(1u128 << pos), self.layout)
    }

    /// Adds one ulp (the `Adder*` convention).
    pub fn increment_low(&self) -> Self {
        self.increment_at(0)
    }

    /// Adds `1.0`, i.e. one unit at the lowest integer bit.
    pub fn increment_int_low(&self) -> Self {
        self.increment_at(self.layout.frac_bits)
    }

    pub fn decrement_int_low(&self) -> Self {
        self.decrement_at(self.layout.frac_bits)
    }

    /// Exact product of `self` and `other` scaled by `2^scale_log2`, truncated
    /// toward zero onto `out` and wrapped. The flag reports wrap-around.
    pub fn mul_into(&self, other: &Self, scale_log2: i32, out: Layout) -> (Self, bool) {
        let product = self.scaled_big() * other.scaled_big();
        let frac_in = (self.layout.frac_bits + other.layout.frac_bits) as i64;
        let shifted = shift_toward_zero(&product, out.frac_bits as i64 + scale_log2 as i64 - frac_in);
        let overflow = !fits(&shifted, out);
        (Self::from_scaled_big(&shifted, out), overflow)
    }

    /// `trunc(a^2)` at the same layout; wraps silently.
    pub fn square_wrapping(&self) -> Self {
        self.mul_into(self, 0, self.layout).0
    }

    /// `trunc(a^2)` at the same layout; overflow of the integer part is an error.
    pub fn square(&self) -> Result<Self> {
        let (sq, overflow) = self.mul_into(self, 0, self.layout);
        if overflow {
            return Err(Error::Overflow(format!("square of {self} exceeds {}", self.layout)));
        }
        Ok(sq)
    }

    /// `trunc(a^p * 2^scale_log2)` onto `out`, exact before truncation.
    pub fn pow_into(&self, p: u32, scale_log2: i32, out: Layout) -> (Self, bool) {
        let mut product = BigInt::one();
        for _ in 0..p {
            product *= self.scaled_big();
        }
        let frac_in = self.layout.frac_bits as i64 * p as i64;
        let shifted = shift_toward_zero(&product, out.frac_bits as i64 + scale_log2 as i64 - frac_in);
        let overflow = !fits(&shifted, out);
        (Self::from_scaled_big(&shifted, out), overflow)
    }

    /// Floor square root of `a * 2^scale_log2` onto `out`, computed by the
    /// non-restoring digit recurrence.
    pub fn sqrt_into(&self, scale_log2: i32, out: Layout) -> Result<Self> {
        if self.is_negative() {
            return Err(Error::domain(self, "[0, inf)"));
        }
        // root r satisfies r^2 <= a * 2^scale, scaled by 2^(2 * out.frac)
        let exp = 2 * out.frac_bits as i64 + scale_log2 as i64 - self.layout.frac_bits as i64;
        let radicand = shift_toward_zero(&self.scaled_big(), exp);
        let radicand = radicand.to_biguint().unwrap_or_default();
        let root = isqrt_nonrestoring(&radicand);
        let root = BigInt::from(root);
        if !fits(&root, out) {
            return Err(Error::Overflow(format!("square root of {self} exceeds {out}")));
        }
        Ok(Self::from_scaled_big(&root, out))
    }

    /// Floor square root at the same layout.
    pub fn sqrt_nonrestoring(&self) -> Result<Self> {
        self.sqrt_into(0, self.layout)
    }

    /// `trunc(1/a)` onto `out` via non-restoring division of one by `a`.
    pub fn reciprocal_into(&self, out: Layout) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let divisor = self.scaled_big().abs().to_biguint().expect("non-negative");
        let dividend = BigUint::one() << (self.layout.frac_bits + out.frac_bits);
        let q = BigInt::from(div_nonrestoring(&dividend, &divisor));
        let q = if self.is_negative() { -q } else { q };
        if !fits(&q, out) {
            return Err(Error::Overflow(format!("1/({self}) exceeds {out}")));
        }
        Ok(Self::from_scaled_big(&q, out))
    }

    pub fn reciprocal_nonrestoring(&self) -> Result<Self> {
        self.reciprocal_into(self.layout)
    }

    /// Binary text, e.g. `01.10`; fraction-only layouts render as `.10`.
    pub fn to_binary_string(&self) -> String {
        let digits: String = self.bits().iter().map(|&b| if b { '1' } else { '0' }).collect();
        let int = self.layout.int_bits as usize;
        if self.layout.frac_bits == 0 {
            digits
        } else {
            format!("{}.{}", &digits[..int], &digits[int..])
        }
    }

    /// Parses binary text, inferring the layout from the digit counts.
    ///
    /// A leading `s:` or `u:` selects the sign convention (default unsigned).
    pub fn parse(text: &str) -> Result<Self> {
        let (signed, body) = split_sign_flag(text);
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        let layout = Layout {
            int_bits: int_part.len() as u32,
            frac_bits: frac_part.len() as u32,
            signed: signed.unwrap_or(false),
        };
        layout.validate().map_err(|e| Error::parse(1, e.to_string()))?;
        let bits = parse_digits(int_part, frac_part)?;
        Self::from_bits(&bits, layout)
    }

    /// Parses binary text against a known layout. Text without a binary point
    /// supplies all digits most significant first.
    pub fn parse_with_layout(text: &str, layout: Layout) -> Result<Self> {
        let (_, body) = split_sign_flag(text);
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => {
                if i.len() != layout.int_bits as usize || f.len() != layout.frac_bits as usize {
                    return Err(Error::parse(1, format!("'{text}' does not match layout {layout}")));
                }
                (i, f)
            }
            None => {
                if body.len() != layout.width() as usize {
                    return Err(Error::parse(
                        1,
                        format!(
                            "'{text}' has {} digits, layout {layout} needs {}",
                            body.len(),
                            layout.width()
                        ),
                    ));
                }
                (body, "")
            }
        };
        let bits = parse_digits(int_part, frac_part)?;
        Self::from_bits(&bits, layout)
    }
}

fn split_sign_flag(text: &str) -> (Option<bool>, &str) {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("s:") {
        (Some(true), rest)
    } else if let Some(rest) = text.strip_prefix("u:") {
        (Some(false), rest)
    } else {
        (None, text)
    }
}

fn parse_digits(int_part: &str, frac_part: &str) -> Result<Vec<bool>> {
    int_part
        .chars()
        .chain(frac_part.chars())
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::parse(
                1,
                format!("unexpected character '{other}' in binary number"),
            )),
        })
        .collect()
}

impl PartialOrd for FixedPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by numeric value, across layouts.
impl Ord for FixedPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        let fa = self.layout.frac_bits;
        let fb = other.layout.frac_bits;
        let a = self.scaled_big() << fb;
        let b = other.scaled_big() << fa;
        a.cmp(&b).then_with(|| self.bits.cmp(&other.bits))
    }
}

impl fmt::Display for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_binary_string())
    }
}

impl fmt::Debug for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}, {})", self.to_binary_string(), self.to_f64(), self.layout)
    }
}

impl FromStr for FixedPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FixedPoint::parse(s)
    }
}

fn fits(scaled: &BigInt, layout: Layout) -> bool {
    let (lo, hi) = layout.raw_range();
    *scaled >= BigInt::from(lo) && *scaled <= BigInt::from(hi)
}

/// `n * 2^k`, truncated toward zero when `k < 0`.
pub(crate) fn shift_toward_zero(n: &BigInt, k: i64) -> BigInt {
    if k >= 0 {
        n << (k as usize)
    } else {
        let mag = n.magnitude() >> ((-k) as usize);
        BigInt::from_biguint(
            if n.sign() == Sign::Minus {
                Sign::Minus
            } else {
                Sign::Plus
            },
            mag,
        )
    }
}

fn div_toward_zero(num: &BigInt, den: &BigInt) -> BigInt {
    let q = num.magnitude() / den.magnitude();
    let negative = (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus);
    BigInt::from_biguint(if negative { Sign::Minus } else { Sign::Plus }, q)
}

/// Floor square root by the non-restoring digit recurrence: one root digit per
/// radicand bit pair, the partial remainder allowed to go negative and corrected
/// by addition on the following step.
pub fn isqrt_nonrestoring(n: &BigUint) -> BigUint {
    let pairs = n.bits().div_ceil(2);
    let mut rem = BigInt::zero();
    let mut root = BigUint::zero();
    for i in (0..pairs).rev() {
        let pair = BigInt::from((n >> (2 * i)) & BigUint::from(3u8));
        let trial = BigInt::from(root.clone() << 2u32);
        rem = if rem.sign() != Sign::Minus {
            (rem << 2u32) + pair - (trial | BigInt::one())
        } else {
            (rem << 2u32) + pair + (trial | BigInt::from(3u8))
        };
        root <<= 1u32;
        if rem.sign() != Sign::Minus {
            root |= BigUint::one();
        }
    }
    root
}

/// `floor(dividend / divisor)` by non-restoring division.
pub fn div_nonrestoring(dividend: &BigUint, divisor: &BigUint) -> BigUint {
    assert!(!divisor.is_zero(), "division by zero");
    let qbits = dividend.bits().max(1);
    let d = BigInt::from(divisor.clone());
    let mut rem = BigInt::from(dividend.clone());
    let mut q = BigUint::zero();
    let mut last_nonneg = true;
    for i in (0..qbits).rev() {
        let step = &d << (i as usize);
        if last_nonneg {
            rem -= step;
        } else {
            rem += step;
        }
        last_nonneg = rem.sign() != Sign::Minus;
        if last_nonneg {
            q |= BigUint::one() << (i as usize);
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Roots;
    use proptest::prelude::*;

    fn fp(s: &str) -> FixedPoint {
        FixedPoint::parse(s).unwrap()
    }

    fn sfp(s: &str) -> FixedPoint {
        FixedPoint::parse(&format!("s:{s}")).unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(fp("01.00").add(&fp("01.00")).unwrap(), fp("10.00"));
        assert_eq!(sfp("11.10").add(&sfp("00.10")).unwrap(), sfp("00.00"));
        assert!(fp("01.00").add(&fp("01.000")).is_err());
    }

    #[test]
    fn add_exhaustive_width_six() {
        let layout = Layout::unsigned(3, 3);
        for a in 0..64u128 {
            for b in 0..64u128 {
                let x = FixedPoint::from_bits_raw(a, layout);
                let y = FixedPoint::from_bits_raw(b, layout);
                assert_eq!(x.add(&y).unwrap().raw_bits(), (a + b) % 64);
            }
        }
    }

    #[test]
    fn shift_examples() {
        assert_eq!(fp("01.00").shift(-1), fp("00.10"));
        assert_eq!(fp("01.10").shift(1), fp("11.00"));
        assert_eq!(fp("10.01").shift(-2), fp("00.10"));
    }

    #[test]
    fn negate_examples() {
        assert_eq!(sfp("00.10").negate().unwrap(), sfp("11.10"));
        assert_eq!(sfp("00.00").negate().unwrap(), sfp("00.00"));
        assert_eq!(sfp("10.00").negate().unwrap(), sfp("10.00"));
        assert!(fp("00.10").negate().is_err());
    }

    #[test]
    fn square_examples() {
        assert_eq!(fp("01.10").square().unwrap(), fp("10.01"));
        assert_eq!(fp("01.00").square().unwrap(), fp("01.00"));
        assert_eq!(fp("00.0011").square().unwrap(), fp("00.0000"));
        assert!(matches!(fp("10.00").square(), Err(Error::Overflow(_))));
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(fp("01.00").sqrt_nonrestoring().unwrap(), fp("01.00"));
        assert_eq!(fp("10.0000").sqrt_nonrestoring().unwrap(), fp("01.0110"));
        assert_eq!(fp("00.0100").sqrt_nonrestoring().unwrap(), fp("00.1000"));
        assert!(sfp("11.00").sqrt_nonrestoring().is_err());
    }

    #[test]
    fn reciprocal_examples() {
        assert_eq!(fp("01.00").reciprocal_nonrestoring().unwrap(), fp("01.00"));
        assert_eq!(fp("10.00").reciprocal_nonrestoring().unwrap(), fp("00.10"));
        assert_eq!(fp("01.1000").reciprocal_nonrestoring().unwrap(), fp("00.1010"));
        assert_eq!(fp("00.00").reciprocal_nonrestoring(), Err(Error::DivisionByZero));
    }

    #[test]
    fn sqrt_and_reciprocal_brute_force() {
        let layout = Layout::unsigned(2, 4);
        let ulp = BigInt::one();
        for raw in 0..64u128 {
            let a = FixedPoint::from_bits_raw(raw, layout);
            let r = a.sqrt_nonrestoring().unwrap().scaled_big();
            // r^2 <= a * 2^frac < (r + 1)^2
            let target = BigInt::from(raw) << 4;
            assert!(&r * &r <= target);
            assert!((&r + &ulp) * (&r + &ulp) > target);
            if raw != 0 {
                match a.reciprocal_nonrestoring() {
                    Ok(q) => {
                        let q = q.scaled_big();
                        let one = BigInt::one() << 8;
                        assert!(&q * BigInt::from(raw) <= one);
                        assert!((&q + &ulp) * BigInt::from(raw) > one);
                    }
                    Err(Error::Overflow(_)) => assert!((256 / raw) >= 64),
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn exhaustive_against_integer_reference_width_eight() {
        for layout in [Layout::unsigned(3, 5), Layout::signed(4, 4)] {
            let w = layout.width();
            for raw in 0..(1u128 << w) {
                let a = FixedPoint::from_bits_raw(raw, layout);
                let v = a.scaled();
                assert_eq!(a.negate_wrapping().raw_bits(), ((1u128 << w) - raw) % (1 << w));
                assert_eq!(a.shift(1).raw_bits(), (raw << 1) % (1 << w));
                assert_eq!(a.shift(-3).raw_bits(), raw >> 3);
                let sq = (v * v) >> layout.frac_bits;
                assert_eq!(a.square_wrapping().raw_bits(), (sq as u128) % (1 << w));
                if v >= 0 {
                    let expect = ((v as u128) << layout.frac_bits).sqrt();
                    assert_eq!(a.sqrt_nonrestoring().unwrap().raw_bits(), expect);
                }
                if v > 0 {
                    let q = (1i128 << (2 * layout.frac_bits)) / v;
                    let (_, hi) = layout.raw_range();
                    match a.reciprocal_nonrestoring() {
                        Ok(r) => assert_eq!(r.scaled(), q),
                        Err(_) => assert!(q > hi),
                    }
                }
            }
        }
    }

    #[test]
    fn nonrestoring_primitives_match_reference() {
        for n in 0u32..5000 {
            let big = BigUint::from(n);
            assert_eq!(isqrt_nonrestoring(&big), BigUint::from(n.sqrt()));
            for d in [1u32, 2, 3, 7, 10, 255] {
                assert_eq!(div_nonrestoring(&big, &BigUint::from(d)), BigUint::from(n / d));
            }
        }
    }

    #[test]
    fn text_round_trip_and_errors() {
        let a = FixedPoint::parse("s:11.011").unwrap();
        assert_eq!(a.to_f64(), -0.625);
        assert_eq!(a.to_string(), "11.011");
        assert_eq!(FixedPoint::parse(".10").unwrap().to_f64(), 0.5);
        let lay = Layout::unsigned(0, 2);
        assert_eq!(FixedPoint::parse_with_layout("01", lay).unwrap().to_f64(), 0.25);
        assert!(FixedPoint::parse("01.2").is_err());
        assert!(FixedPoint::parse_with_layout("01.0", Layout::unsigned(2, 2)).is_err());
    }

    #[test]
    fn rational_round_trip() {
        let layout = Layout::signed(3, 4);
        for raw in 0..128u128 {
            let a = FixedPoint::from_bits_raw(raw, layout);
            let (n, d) = a.to_rational();
            assert_eq!(FixedPoint::from_rational(&n, &d, layout).unwrap(), a);
        }
    }

    proptest! {
        #[test]
        fn add_commutes_and_associates(a in 0u128..1024, b in 0u128..1024, c in 0u128..1024) {
            let layout = Layout::signed(4, 6);
            let (x, y, z) = (
                FixedPoint::from_bits_raw(a, layout),
                FixedPoint::from_bits_raw(b, layout),
                FixedPoint::from_bits_raw(c, layout),
            );
            prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
            prop_assert_eq!(x.add(&y).unwrap().add(&z).unwrap(), x.add(&y.add(&z).unwrap()).unwrap());
        }

        #[test]
        fn negate_is_an_involution(raw in 0u128..4096) {
            let layout = Layout::signed(5, 7);
            let a = FixedPoint::from_bits_raw(raw, layout);
            prop_assert_eq!(a.negate().unwrap().negate().unwrap(), a);
            if raw == 1 << 11 {
                prop_assert_eq!(a.negate().unwrap(), a);
            }
        }

        #[test]
        fn sqrt_square_adjunction(raw in 0u128..(1 << 14)) {
            let layout = Layout::unsigned(6, 8);
            let a = FixedPoint::from_bits_raw(raw, layout);
            let r = a.sqrt_nonrestoring().unwrap();
            prop_assert!(r.square_wrapping() <= a);
            let next = r.increment_low();
            let (sq, overflow) = next.mul_into(&next, 0, Layout::unsigned(16, 16));
            prop_assert!(overflow || sq > a);
        }
    }
}
