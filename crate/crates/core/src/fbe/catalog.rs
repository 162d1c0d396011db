//! The built-in function catalog: domains, subintervals, branch maps and the
//! exact step rules used on fixed-point grids.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Dyadic, ExtendedValue};
use crate::error::{Error, Result};
use crate::fixedpoint::Layout;

/// An exact real endpoint: a rational or `2^(num/den)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Real {
    Rational { num: BigInt, den: BigInt },
    Pow2 { num: i64, den: u32 },
}

impl Real {
    pub fn int(v: i64) -> Self {
        Real::Rational {
            num: v.into(),
            den: BigInt::one(),
        }
    }

    pub fn pow2(num: i64, den: u32) -> Self {
        assert!(den > 0);
        Real::Pow2 { num, den }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Rational { num, den } => num.to_f64().unwrap_or(f64::NAN) / den.to_f64().unwrap_or(f64::NAN),
            Real::Pow2 { num, den } => (*num as f64 / *den as f64).exp2(),
        }
    }

    /// Orders the dyadic `d` against this endpoint, exactly.
    pub fn cmp_dyadic(&self, d: &Dyadic) -> Ordering {
        match self {
            Real::Rational { num, den } => (d.raw() * den).cmp(&(num << d.frac_bits())),
            Real::Pow2 { num, den } => {
                if !d.raw().is_positive() {
                    return Ordering::Less;
                }
                let lhs = num_traits::pow(d.raw().clone(), *den as usize);
                let e = num + d.frac_bits() as i64 * *den as i64;
                if e >= 0 {
                    lhs.cmp(&(BigInt::one() << e as usize))
                } else {
                    (lhs << (-e) as usize).cmp(&BigInt::one())
                }
            }
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Rational { num, den } if den.is_one() => write!(f, "{num}"),
            Real::Rational { num, den } => write!(f, "{num}/{den}"),
            Real::Pow2 { num, den: 1 } => write!(f, "2^{num}"),
            Real::Pow2 { num, den } => write!(f, "2^({num}/{den})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    Unbounded,
    Open(Real),
    Closed(Real),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Bound,
    pub hi: Bound,
}

impl Interval {
    pub fn new(lo: Bound, hi: Bound) -> Self {
        Interval { lo, hi }
    }

    /// `[lo, hi)`.
    pub fn half_open(lo: Real, hi: Real) -> Self {
        Interval::new(Bound::Closed(lo), Bound::Open(hi))
    }

    pub fn contains(&self, d: &Dyadic) -> bool {
        let lo_ok = match &self.lo {
            Bound::Unbounded => true,
            Bound::Open(r) => r.cmp_dyadic(d) == Ordering::Greater,
            Bound::Closed(r) => r.cmp_dyadic(d) != Ordering::Less,
        };
        let hi_ok = match &self.hi {
            Bound::Unbounded => true,
            Bound::Open(r) => r.cmp_dyadic(d) == Ordering::Less,
            Bound::Closed(r) => r.cmp_dyadic(d) != Ordering::Greater,
        };
        lo_ok && hi_ok
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        let lo_ok = match &self.lo {
            Bound::Unbounded => true,
            Bound::Open(r) => x > r.to_f64(),
            Bound::Closed(r) => x >= r.to_f64(),
        };
        let hi_ok = match &self.hi {
            Bound::Unbounded => true,
            Bound::Open(r) => x < r.to_f64(),
            Bound::Closed(r) => x <= r.to_f64(),
        };
        x.is_finite() && lo_ok && hi_ok
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lo {
            Bound::Unbounded => write!(f, "(-inf")?,
            Bound::Open(r) => write!(f, "({r}")?,
            Bound::Closed(r) => write!(f, "[{r}")?,
        }
        match &self.hi {
            Bound::Unbounded => write!(f, ", inf)"),
            Bound::Open(r) => write!(f, ", {r})"),
            Bound::Closed(r) => write!(f, ", {r}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Piece {
    Interval(Interval),
    NegInfinity,
}

/// A finite union of intervals, optionally including the point `-inf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region(pub Vec<Piece>);

impl Region {
    pub fn interval(i: Interval) -> Self {
        Region(vec![Piece::Interval(i)])
    }

    pub fn contains(&self, v: &ExtendedValue) -> bool {
        self.0.iter().any(|p| match (p, v) {
            (Piece::Interval(i), ExtendedValue::Finite(d)) => i.contains(d),
            (Piece::NegInfinity, ExtendedValue::NegInfinity) => true,
            _ => false,
        })
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        self.0.iter().any(|p| match p {
            Piece::Interval(i) => i.contains_f64(x),
            Piece::NegInfinity => x == f64::NEG_INFINITY,
        })
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" u ")?;
            }
            match p {
                Piece::Interval(i) => write!(f, "{i}")?,
                Piece::NegInfinity => f.write_str("{-inf}")?,
            }
        }
        Ok(())
    }
}

/// Group 1 functions are expanded digit by digit; Group 2 are rebuilt from digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Group {
    Forward,
    Inverse,
}

/// A branch map `r_j` or `r_j^-1` with a human-readable formula and a float evaluator.
#[derive(Clone)]
pub struct BranchMap {
    pub formula: String,
    pub eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl BranchMap {
    fn new(formula: impl Into<String>, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        BranchMap {
            formula: formula.into(),
            eval: Arc::new(eval),
        }
    }
}

impl fmt::Debug for BranchMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.formula)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpecId {
    /// `log2(x)/(q+1)` on `[1, 2^(q+1))`.
    Log2 {
        range_exponent: u32,
    },
    Arccos,
    Arccot,
    Exp2,
    /// Signed cosine recurrence, used by the oracle.
    CosSigned,
    /// `|cos(pi x)|` recurrence with the sign restored from the top digit.
    Cos,
    /// Cotangent recurrence starting from `+inf`, used by the oracle.
    CotInfinite,
    /// Cotangent recurrence starting from 1 with a frozen flag.
    Cot,
    Log2Ternary,
    Log2QuaternaryNarrow,
    Log2QuaternaryWide,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialValue {
    One,
    PosInfinity,
}

#[derive(Clone, Debug)]
pub struct FunctionSpec {
    pub id: SpecId,
    pub name: &'static str,
    pub radix: u32,
    pub group: Group,
    /// Forward: the domain `I` of `x`. Inverse: the range of the digit value.
    pub domain: Region,
    /// `D_0 .. D_{radix-1}`.
    pub subintervals: Vec<Region>,
    pub forward_maps: Vec<BranchMap>,
    pub inverse_maps: Vec<BranchMap>,
    pub initial_value: Option<InitialValue>,
}

fn ival(lo: Real, hi: Real) -> Region {
    Region::interval(Interval::half_open(lo, hi))
}

fn log2_regions(q: u32) -> (Region, Vec<Region>) {
    let top = q as i64 + 1;
    (
        ival(Real::int(1), Real::pow2(top, 1)),
        vec![
            ival(Real::int(1), Real::pow2(top, 2)),
            ival(Real::pow2(top, 2), Real::pow2(top, 1)),
        ],
    )
}

fn arccos_regions() -> (Region, Vec<Region>) {
    (
        Region::interval(Interval::new(Bound::Open(Real::int(-1)), Bound::Closed(Real::int(1)))),
        vec![
            Region::interval(Interval::new(Bound::Open(Real::int(0)), Bound::Closed(Real::int(1)))),
            Region::interval(Interval::new(Bound::Closed(Real::int(-1)), Bound::Closed(Real::int(0)))),
        ],
    )
}

fn arccot_regions() -> (Region, Vec<Region>) {
    (
        Region::interval(Interval::new(Bound::Unbounded, Bound::Unbounded)),
        vec![
            Region(vec![
                Piece::Interval(Interval::new(Bound::Open(Real::int(0)), Bound::Unbounded)),
                Piece::NegInfinity,
            ]),
            Region::interval(Interval::new(Bound::Unbounded, Bound::Closed(Real::int(0)))),
        ],
    )
}

fn unit_digits() -> Region {
    ival(Real::int(0), Real::int(1))
}

fn power_ladder(levels: &[Real]) -> (Region, Vec<Region>) {
    let dom = ival(levels[0].clone(), levels[levels.len() - 1].clone());
    let subs = levels.windows(2).map(|w| ival(w[0].clone(), w[1].clone())).collect();
    (dom, subs)
}

fn log2_maps(q: u32) -> Vec<BranchMap> {
    let div = 2f64.powi(q as i32 + 1);
    vec![
        BranchMap::new("x^2", |x| x * x),
        BranchMap::new(format!("x^2/{}", div), move |x| x * x / div),
    ]
}

fn power_maps(p: i32, divisors: &[u32]) -> Vec<BranchMap> {
    divisors
        .iter()
        .map(|&d| {
            let df = d as f64;
            let text = if d == 1 { format!("x^{p}") } else { format!("x^{p}/{d}") };
            BranchMap::new(text, move |x| x.powi(p) / df)
        })
        .collect()
}

fn arccos_maps() -> Vec<BranchMap> {
    vec![
        BranchMap::new("2x^2 - 1", |x| 2.0 * x * x - 1.0),
        BranchMap::new("1 - 2x^2", |x| 1.0 - 2.0 * x * x),
    ]
}

fn arccot_maps() -> Vec<BranchMap> {
    let r = |x: f64| {
        if x == 0.0 {
            f64::NEG_INFINITY
        } else {
            (x * x - 1.0) / (2.0 * x)
        }
    };
    vec![
        BranchMap::new("(x^2 - 1)/(2x)", r),
        BranchMap::new("(x^2 - 1)/(2x), -inf at 0", r),
    ]
}

fn spec_for(id: SpecId) -> FunctionSpec {
    use SpecId::*;
    let (name, radix, group, domain, subintervals, forward_maps, inverse_maps, initial_value) = match id {
        Log2 { range_exponent: q } => {
            let (d, s) = log2_regions(q);
            let name = if q == 0 { "log2" } else { "log2-wide" };
            (name, 2, Group::Forward, d, s, log2_maps(q), vec![], None)
        }
        Arccos => {
            let (d, s) = arccos_regions();
            ("arccos", 2, Group::Forward, d, s, arccos_maps(), vec![], None)
        }
        Arccot => {
            let (d, s) = arccot_regions();
            ("arccot", 2, Group::Forward, d, s, arccot_maps(), vec![], None)
        }
        Exp2 => {
            let (_, s) = log2_regions(0);
            let inv = vec![
                BranchMap::new("sqrt(a)", f64::sqrt),
                BranchMap::new("sqrt(2a)", |a| (2.0 * a).sqrt()),
            ];
            (
                "exp2",
                2,
                Group::Inverse,
                unit_digits(),
                s,
                log2_maps(0),
                inv,
                Some(InitialValue::One),
            )
        }
        CosSigned | Cos => {
            let (_, s) = arccos_regions();
            let inv = if id == CosSigned {
                vec![
                    BranchMap::new("sqrt((1 + a)/2)", |a| ((1.0 + a) / 2.0).sqrt()),
                    BranchMap::new("-sqrt((1 - a)/2)", |a| -((1.0 - a) / 2.0).sqrt()),
                ]
            } else {
                vec![
                    BranchMap::new("sqrt((1 + a)/2) when v_i = v_(i-1)", |a| ((1.0 + a) / 2.0).sqrt()),
                    BranchMap::new("sqrt((1 - a)/2) when v_i != v_(i-1)", |a| ((1.0 - a) / 2.0).sqrt()),
                ]
            };
            let name = if id == CosSigned { "cos-signed" } else { "cos" };
            (
                name,
                2,
                Group::Inverse,
                unit_digits(),
                s,
                arccos_maps(),
                inv,
                Some(InitialValue::One),
            )
        }
        CotInfinite | Cot => {
            let (_, s) = arccot_regions();
            let (inv, init, name) = if id == CotInfinite {
                (
                    vec![
                        BranchMap::new("a + sqrt(a^2 + 1)", |a: f64| a + (a * a + 1.0).sqrt()),
                        BranchMap::new("a - sqrt(a^2 + 1)", |a: f64| a - (a * a + 1.0).sqrt()),
                    ],
                    InitialValue::PosInfinity,
                    "cot-infinite",
                )
            } else {
                (
                    vec![
                        BranchMap::new("sqrt(a^2 + 1) + a when v_i = v_(i-1)", |a: f64| {
                            (a * a + 1.0).sqrt() + a
                        }),
                        BranchMap::new("sqrt(a^2 + 1) - a when v_i != v_(i-1)", |a: f64| {
                            (a * a + 1.0).sqrt() - a
                        }),
                    ],
                    InitialValue::One,
                    "cot",
                )
            };
            (
                name,
                2,
                Group::Inverse,
                unit_digits(),
                s,
                arccot_maps(),
                inv,
                Some(init),
            )
        }
        Log2Ternary => {
            let (d, s) = power_ladder(&[Real::int(1), Real::int(2), Real::int(4), Real::int(8)]);
            (
                "log2-ternary",
                3,
                Group::Forward,
                d,
                s,
                power_maps(3, &[1, 8, 64]),
                vec![],
                None,
            )
        }
        Log2QuaternaryNarrow => {
            let (d, s) = power_ladder(&[
                Real::int(1),
                Real::pow2(1, 2),
                Real::int(2),
                Real::pow2(3, 2),
                Real::int(4),
            ]);
            (
                "log2-quaternary",
                4,
                Group::Forward,
                d,
                s,
                power_maps(4, &[1, 4, 16, 64]),
                vec![],
                None,
            )
        }
        Log2QuaternaryWide => {
            let (d, s) = power_ladder(&[Real::int(1), Real::int(2), Real::int(4), Real::int(8), Real::int(16)]);
            let maps = power_maps(4, &[1, 16, 256, 4096]);
            ("log2-quaternary-wide", 4, Group::Forward, d, s, maps, vec![], None)
        }
    };
    FunctionSpec {
        id,
        name,
        radix,
        group,
        domain,
        subintervals,
        forward_maps,
        inverse_maps,
        initial_value,
    }
}

/// Every spec in the catalog.
pub fn builtin_specs() -> Vec<FunctionSpec> {
    use SpecId::*;
    [
        Log2 { range_exponent: 0 },
        Log2 { range_exponent: 1 },
        Arccos,
        Arccot,
        Exp2,
        CosSigned,
        Cos,
        CotInfinite,
        Cot,
        Log2Ternary,
        Log2QuaternaryNarrow,
        Log2QuaternaryWide,
    ]
    .into_iter()
    .map(FunctionSpec::get)
    .collect()
}

/// Shared digit-to-value sample grid for partition checks.
fn samples(region: &Region) -> Vec<f64> {
    let (lo, hi) = match region.0.first() {
        Some(Piece::Interval(i)) => {
            let lo = match &i.lo {
                Bound::Unbounded => -8.0,
                Bound::Open(r) | Bound::Closed(r) => r.to_f64(),
            };
            let hi = match &i.hi {
                Bound::Unbounded => 8.0,
                Bound::Open(r) | Bound::Closed(r) => r.to_f64(),
            };
            (lo, hi)
        }
        _ => (0.0, 1.0),
    };
    (0..=256).map(|k| lo + (hi - lo) * k as f64 / 256.0).collect()
}

impl FunctionSpec {
    pub fn get(id: SpecId) -> FunctionSpec {
        spec_for(id)
    }

    /// `f(x)` for Group 1 (normalized to `[0, 1)`), `g(x)` for Group 2.
    pub fn closed_form(&self, x: f64) -> f64 {
        use SpecId::*;
        match self.id {
            Log2 { range_exponent: q } => x.log2() / (q as f64 + 1.0),
            Arccos => x.acos() / PI,
            Arccot => {
                if x == f64::NEG_INFINITY {
                    1.0
                } else {
                    0.5 - x.atan() / PI
                }
            }
            Exp2 => x.exp2(),
            CosSigned | Cos => (PI * x).cos(),
            CotInfinite | Cot => 1.0 / (PI * x).tan(),
            Log2Ternary => x.log2() / 3.0,
            Log2QuaternaryNarrow => x.log2() / 2.0,
            Log2QuaternaryWide => x.log2() / 4.0,
        }
    }

    /// Index of the subinterval containing `a`.
    pub fn digit_of(&self, a: &ExtendedValue) -> Option<u8> {
        self.subintervals.iter().position(|r| r.contains(a)).map(|j| j as u8)
    }

    /// Every sample of the domain lies in exactly one subinterval; for Group 1
    /// `x in D_j` implies `f(x) in [j/radix, (j+1)/radix]`.
    pub fn check_partition(&self) -> Result<()> {
        let union = match self.group {
            Group::Forward => self.domain.clone(),
            Group::Inverse => {
                let mut pieces = Vec::new();
                for s in &self.subintervals {
                    pieces.extend(s.0.iter().cloned());
                }
                Region(pieces)
            }
        };
        for x in samples(&union) {
            if !union.contains_f64(x) {
                continue;
            }
            let hits: Vec<usize> = (0..self.subintervals.len())
                .filter(|&j| self.subintervals[j].contains_f64(x))
                .collect();
            if hits.len() != 1 {
                return Err(Error::config(format!(
                    "{}: sample {x} lies in {} subintervals",
                    self.name,
                    hits.len()
                )));
            }
            if self.group == Group::Forward {
                let j = hits[0] as f64;
                let r = self.radix as f64;
                let fx = self.closed_form(x);
                if fx < j / r - 1e-12 || fx > (j + 1.0) / r + 1e-12 {
                    return Err(Error::config(format!(
                        "{}: f({x}) = {fx} outside digit band {j}",
                        self.name
                    )));
                }
            }
        }
        Ok(())
    }

    /// The fixed-point layout the recurrence and circuits use at width `m` with `n` digits.
    pub fn working_layout(&self, m: u32, n: u32) -> Result<Layout> {
        use SpecId::*;
        let need = |int: u32, signed: bool| -> Result<Layout> {
            if m <= int {
                return Err(Error::config(format!(
                    "{} needs more than {int} bits, got m = {m}",
                    self.name
                )));
            }
            let l = Layout {
                int_bits: int,
                frac_bits: m - int,
                signed,
            };
            l.validate()?;
            Ok(l)
        };
        match self.id {
            Log2 { range_exponent: q } => need(q + 1, false),
            Arccos | CosSigned | Cos => need(2, true),
            Arccot => {
                if m < 2 {
                    return Err(Error::config("arccot needs m >= 2"));
                }
                need(m - m / 2, true)
            }
            Exp2 => need(1, false),
            CotInfinite | Cot => need(n.max(2), true),
            Log2Ternary => need(3, false),
            Log2QuaternaryNarrow => need(2, false),
            Log2QuaternaryWide => need(4, false),
        }
    }

    /// Checks that `layout` has the shape the recurrence expects.
    pub fn check_layout(&self, layout: Layout) -> Result<()> {
        use SpecId::*;
        let ok = match self.id {
            Log2 { range_exponent: q } => !layout.signed && layout.int_bits == q + 1,
            Arccos | CosSigned | Cos => layout.signed && layout.int_bits == 2,
            Arccot => layout.signed && layout.int_bits >= 1,
            Exp2 => !layout.signed && layout.int_bits == 1,
            CotInfinite | Cot => layout.signed && layout.int_bits >= 2,
            Log2Ternary => !layout.signed && layout.int_bits == 3,
            Log2QuaternaryNarrow => !layout.signed && layout.int_bits == 2,
            Log2QuaternaryWide => !layout.signed && layout.int_bits == 4,
        };
        let frac_ok = match self.id {
            Cos | CosSigned | Exp2 | Cot | CotInfinite => layout.frac_bits >= 1,
            _ => true,
        };
        if ok && frac_ok {
            Ok(())
        } else {
            Err(Error::config(format!("layout {layout} does not suit {}", self.name)))
        }
    }
}

/// Reduces `raw` modulo `2^width` into the layout's range.
pub(crate) fn wrap(raw: BigInt, layout: Layout) -> BigInt {
    let w = layout.width() as usize;
    let modulus = BigInt::one() << w;
    let mut r = raw.mod_floor(&modulus);
    if layout.signed && w > 0 && r >= (BigInt::one() << (w - 1)) {
        r -= modulus;
    }
    r
}

fn isqrt(n: &BigInt) -> BigInt {
    debug_assert!(!n.is_negative());
    n.sqrt()
}

fn finite(raw: BigInt, grid: Layout) -> ExtendedValue {
    ExtendedValue::Finite(Dyadic::new(raw, grid.frac_bits))
}

impl SpecId {
    /// `a_{i+1}` from `a_i` and its digit on the grid `grid`.
    pub(crate) fn forward_next(self, digit: u8, a: &ExtendedValue, grid: Layout) -> ExtendedValue {
        use SpecId::*;
        let f = grid.frac_bits as usize;
        let raw = match a {
            ExtendedValue::Finite(d) => d.raw().clone(),
            other => return other.clone(),
        };
        let j = digit as usize;
        let next = match self {
            Log2 { range_exponent: q } => (&raw * &raw) >> (f + j * (q as usize + 1)),
            Arccos => {
                let b = wrap(raw.abs(), grid.as_unsigned());
                let t = (&b * &b * 2u32) >> f;
                let u = t - (BigInt::one() << f);
                if j == 1 {
                    -u
                } else {
                    u
                }
            }
            Arccot => {
                if raw.is_zero() {
                    return ExtendedValue::NegInfinity;
                }
                let w = grid.width() as usize;
                let dw = (2 * f + 2).max(w + 1);
                let d_layout = Layout::signed(dw as u32, 0);
                let b = wrap(raw.abs(), grid.as_unsigned());
                let q = wrap((BigInt::one() << (2 * f)) / &b, d_layout.as_unsigned());
                let d = wrap(q - &b, d_layout);
                let h = d >> 1usize;
                if raw.is_positive() {
                    -h
                } else {
                    h
                }
            }
            Log2Ternary => num_traits::pow(raw.clone(), 3) >> (2 * f + 3 * j),
            Log2QuaternaryNarrow => num_traits::pow(raw.clone(), 4) >> (3 * f + 2 * j),
            Log2QuaternaryWide => num_traits::pow(raw.clone(), 4) >> (3 * f + 4 * j),
            Exp2 | CosSigned | Cos | CotInfinite | Cot => unreachable!("inverse specs have no forward step"),
        };
        finite(wrap(next, grid), grid)
    }

    /// One inverse stage. `digits` are least significant first; `frozen` is the
    /// flag of the cotangent recurrence that starts from 1.
    pub(crate) fn inverse_step(
        self,
        i: usize,
        digits: &[u8],
        a: &ExtendedValue,
        frozen: &mut bool,
        grid: Layout,
    ) -> ExtendedValue {
        use SpecId::*;
        let f = grid.frac_bits as usize;
        let one = BigInt::one() << f;
        let v = digits[i] == 1;
        let c = v ^ (i > 0 && digits[i - 1] == 1);
        match self {
            Exp2 => {
                let raw = a.raw_or_zero();
                let doubled = if v { raw << 1 } else { raw };
                finite(wrap(isqrt(&(doubled << f)), grid), grid)
            }
            Cos => {
                let raw = a.raw_or_zero();
                let t = wrap(if c { &one - raw } else { &one + raw }, grid.as_unsigned());
                finite(wrap(isqrt(&(t << (f - 1))), grid), grid)
            }
            CosSigned => {
                let raw = a.raw_or_zero();
                let t = if v { &one - raw } else { &one + raw };
                let r = isqrt(&(t << (f - 1)));
                finite(wrap(if v { -r } else { r }, grid), grid)
            }
            Cot => {
                if *frozen {
                    if v {
                        *frozen = false;
                        return finite(BigInt::zero(), grid);
                    }
                    return finite(one, grid);
                }
                let raw = a.raw_or_zero();
                let bits = wrap(raw.clone(), grid.as_unsigned());
                let sq_layout = Layout::unsigned(2 * (grid.int_bits - 1) + 1, grid.frac_bits);
                let sq = wrap(wrap((&bits * &bits) >> f, sq_layout) + &one, sq_layout);
                let r = wrap(isqrt(&(sq << f)), grid.as_unsigned());
                finite(wrap(if c { r - raw } else { r + raw }, grid), grid)
            }
            CotInfinite => match a {
                ExtendedValue::PosInfinity if v => finite(BigInt::zero(), grid),
                ExtendedValue::PosInfinity => ExtendedValue::PosInfinity,
                _ => {
                    let raw = a.raw_or_zero();
                    let r = isqrt(&((((&raw * &raw) >> f) + &one) << f));
                    finite(wrap(if v { raw - r } else { raw + r }, grid), grid)
                }
            },
            _ => unreachable!("forward specs have no inverse step"),
        }
    }

    /// Sign restoration after the last stage.
    pub(crate) fn inverse_finish(self, digits: &[u8], a: ExtendedValue, frozen: bool, grid: Layout) -> ExtendedValue {
        let top = digits.last().copied() == Some(1);
        match self {
            SpecId::Cot if frozen => ExtendedValue::PosInfinity,
            SpecId::Cos | SpecId::Cot if top => finite(wrap(-a.raw_or_zero(), grid), grid),
            _ => a,
        }
    }
}
