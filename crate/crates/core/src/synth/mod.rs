//! The six top-level circuits: log2, arccos and arccot expand digits out of a
//! value register; exp2, cos and cot rebuild a value from digit qubits.
//!
//! Register names: `RegO` holds the digits, `RegI0 .. RegIk` the chain of
//! working values `a_i`, `Anc1_i` the master-control flags. Under the clean
//! policy the whole computation is undone after copying the result to `Out`
//! (and `OutFlag` for the cotangent's infinity flag).

use std::fmt;

use crate::blocks::{
    add_or_sub, copy, decrement_at, increment_at, negate, reciprocal, rotate_left, rotate_right, sqrt, square, sub,
    zero_test, Builder, GarbagePolicy, QReg, QubitKind, SquareMethod,
};
use crate::circuit::{simulate_basis, BasisState, Circuit, Control, Qubit, Register, Role};
use crate::error::{Error, Result};
use crate::fbe::{fbe_expand, ifbe_evaluate, DigitOrder, DigitString, ExtendedValue, Function, FunctionSpec, Group};
use crate::fixedpoint::{FixedPoint, Layout};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SynthConfig {
    pub function: Function,
    /// Digit count (width of `RegO`).
    pub n: u32,
    /// Width of each working register.
    pub m: u32,
    pub policy: GarbagePolicy,
    pub square: SquareMethod,
}

impl SynthConfig {
    pub fn new(function: Function, n: u32, m: u32) -> Self {
        SynthConfig {
            function,
            n,
            m,
            policy: GarbagePolicy::Garbage,
            square: SquareMethod::ShiftAdd,
        }
    }

    pub fn with_policy(mut self, policy: GarbagePolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_square(mut self, square: SquareMethod) -> Self {
        self.square = square;
        self
    }

    /// Layout of every `a_i` register.
    pub fn working_layout(&self) -> Result<Layout> {
        if self.n == 0 {
            return Err(Error::config("n must be at least 1"));
        }
        if self.m < 2 {
            return Err(Error::config("m must be at least 2"));
        }
        let spec = self.function.spec();
        let layout = spec.working_layout(self.m, self.n)?;
        spec.check_layout(layout)?;
        Ok(layout)
    }
}

impl fmt::Display for SynthConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} n={} m={} policy={} square={}",
            self.function, self.n, self.m, self.policy, self.square
        )
    }
}

/// Where the result lives and how to read it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decoding {
    /// Digit qubits; the register's most significant bit is `w_0`.
    Digits {
        register: String,
        n: usize,
    },
    Value {
        register: String,
        layout: Layout,
    },
    /// A value, or `+inf` when `flag` is set.
    ValueOrInfinity {
        register: String,
        layout: Layout,
        flag: String,
    },
}

/// A decoded circuit result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decoded {
    Digits(DigitString),
    Value(FixedPoint),
    PosInfinity,
}

impl Decoded {
    pub fn to_f64(&self) -> f64 {
        match self {
            Decoded::Digits(d) => d.to_f64(),
            Decoded::Value(v) => v.to_f64(),
            Decoded::PosInfinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for Decoded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decoded::Digits(d) => d.fmt(f),
            Decoded::Value(v) => v.fmt(f),
            Decoded::PosInfinity => f.write_str("+inf"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SynthesizedCircuit {
    pub circuit: Circuit,
    pub config: SynthConfig,
    /// Layout of the `a_i` registers.
    pub layout: Layout,
    /// Register the input is loaded into (`RegI0` or `RegO`).
    pub input: String,
    /// `RegI0 ..` in order; their contents are only meaningful under the garbage policy.
    pub chain: Vec<String>,
    pub decoding: Decoding,
}

struct Parts {
    rego: QReg,
    chain: Vec<QReg>,
    flags: Vec<Qubit>,
    result: Vec<Qubit>,
    result_flag: Option<Qubit>,
}

fn one_qubit(b: &mut Builder) -> Qubit {
    b.alloc(Layout::unsigned(1, 0)).bit(0)
}

fn log2_body(b: &mut Builder, cfg: &SynthConfig, layout: Layout, a0: QReg) -> Result<Parts> {
    let n = cfg.n as usize;
    let f = layout.frac_bits;
    let rego = b.alloc(Layout::unsigned(1, cfg.n - 1));
    let w = |i: usize| rego.bit(n - 1 - i);
    let mut chain = vec![a0];
    for i in 0..n - 1 {
        let a = chain[i].clone();
        b.cx(a.msb(), w(i));
        let z = b.ancilla();
        let mut ext = vec![z];
        ext.extend_from_slice(a.qubits());
        b.controlled(&[Control::on(w(i))], |b| rotate_right(b, &ext, 1));
        let halved = QReg::new(ext.clone(), Layout::unsigned(2, f + 1))?;
        let next = square(b, &halved, layout, 0, cfg.square, GarbagePolicy::Garbage)?;
        b.controlled(&[Control::on(w(i))], |b| rotate_left(b, &ext, 1));
        b.release(z);
        chain.push(next);
    }
    b.cx(chain[n - 1].msb(), w(n - 1));
    let result = rego.qubits().to_vec();
    Ok(Parts {
        rego,
        chain,
        flags: vec![],
        result,
        result_flag: None,
    })
}

fn arccos_body(b: &mut Builder, cfg: &SynthConfig, layout: Layout, a0: QReg) -> Result<Parts> {
    let n = cfg.n as usize;
    let f = layout.frac_bits;
    let rego = b.alloc(Layout::unsigned(0, cfg.n));
    let w = |i: usize| rego.bit(n - 1 - i);
    let mut chain = vec![a0];
    let mut flags = Vec::with_capacity(n);
    for i in 0..n {
        let a = chain[i].clone();
        let flag = one_qubit(b);
        flags.push(flag);
        zero_test(b, a.qubits(), flag);
        b.cx(a.msb(), w(i));
        b.cx(flag, w(i));
        if i == n - 1 {
            break;
        }
        let on_w = [Control::on(w(i))];
        b.controlled(&on_w, |b| negate(b, a.qubits()));
        let magnitude = a.with_layout(layout.as_unsigned())?;
        let t = square(
            b,
            &magnitude,
            Layout::unsigned(2, f),
            1,
            cfg.square,
            GarbagePolicy::Garbage,
        )?;
        b.controlled(&on_w, |b| negate(b, a.qubits()));
        decrement_at(b, t.qubits(), f as usize);
        b.controlled(&on_w, |b| negate(b, t.qubits()));
        chain.push(t.with_layout(layout)?);
    }
    let result = rego.qubits().to_vec();
    Ok(Parts {
        rego,
        chain,
        flags,
        result,
        result_flag: None,
    })
}

fn arccot_body(b: &mut Builder, cfg: &SynthConfig, layout: Layout, a0: QReg) -> Result<Parts> {
    let n = cfg.n as usize;
    let f = layout.frac_bits;
    let width = layout.width();
    let rego = b.alloc(Layout::unsigned(0, cfg.n));
    let w = |i: usize| rego.bit(n - 1 - i);
    let flags: Vec<Qubit> = (0..n).map(|_| one_qubit(b)).collect();
    let quotient = Layout::unsigned((2 * f + 2).max(width + 1) - f, f);
    let mut chain = vec![a0];
    for i in 0..n {
        let a = chain[i].clone();
        let s = flags[i];
        b.mcx(&[Control::off(s), Control::on(a.msb())], w(i));
        let mut fresh_zero: Vec<Control> = a.qubits().iter().map(|&q| Control::off(q)).collect();
        fresh_zero.push(Control::off(s));
        b.mcx(&fresh_zero, w(i));
        if i == n - 1 {
            break;
        }
        b.cx(s, flags[i + 1]);
        b.mcx(&fresh_zero, flags[i + 1]);

        let sign = b.ancilla();
        b.cx(a.msb(), sign);
        b.controlled(&[Control::on(sign)], |b| negate(b, a.qubits()));
        let magnitude = a.with_layout(layout.as_unsigned())?;
        let d = reciprocal(b, &magnitude, quotient, GarbagePolicy::Garbage)?;
        sub(b, magnitude.qubits(), d.qubits());
        let next = d.window(1..width as usize + 1, layout)?;
        b.controlled(&[Control::off(sign)], |b| negate(b, next.qubits()));
        b.controlled(&[Control::on(sign)], |b| negate(b, a.qubits()));
        b.cx(a.msb(), sign);
        b.release(sign);
        chain.push(next);
    }
    let result = rego.qubits().to_vec();
    Ok(Parts {
        rego,
        chain,
        flags,
        result,
        result_flag: None,
    })
}

fn preset_one(b: &mut Builder, layout: Layout) -> QReg {
    let a0 = b.alloc(layout);
    b.x(a0.bit(layout.frac_bits as usize));
    a0
}

fn exp2_body(b: &mut Builder, cfg: &SynthConfig, layout: Layout, rego: QReg) -> Result<Parts> {
    let n = cfg.n as usize;
    let f = layout.frac_bits;
    let m = layout.width() as usize;
    let mut chain = vec![preset_one(b, layout)];
    for i in 0..n {
        let a = chain[i].clone();
        let ext = b.alloc_garbage(m + 1);
        copy(b, a.qubits(), &ext[..m]);
        b.controlled(&[Control::on(rego.bit(i))], |b| rotate_left(b, &ext, 1));
        let doubled = QReg::new(ext, Layout::unsigned(2, f))?;
        chain.push(sqrt(b, &doubled, layout, 0, GarbagePolicy::Garbage)?);
    }
    let result = chain[n].qubits().to_vec();
    Ok(Parts {
        rego,
        chain,
        flags: vec![],
        result,
        result_flag: None,
    })
}

fn cos_body(b: &mut Builder, cfg: &SynthConfig, layout: Layout, rego: QReg) -> Result<Parts> {
    let n = cfg.n as usize;
    let f = layout.frac_bits;
    let m = layout.width() as usize;
    let v = |i: usize| rego.bit(i);
    let mut chain = vec![preset_one(b, layout)];
    for i in 0..n {
        let a = chain[i].clone();
        if i > 0 {
            b.cx(v(i - 1), v(i));
        }
        let ext = b.alloc_garbage(m);
        copy(b, a.qubits(), &ext);
        b.controlled(&[Control::on(v(i))], |b| negate(b, &ext));
        increment_at(b, &ext, f as usize);
        let t = QReg::new(ext, Layout::unsigned(2, f))?;
        let next = sqrt(b, &t, layout, -1, GarbagePolicy::Garbage)?;
        if i > 0 {
            b.cx(v(i - 1), v(i));
        }
        chain.push(next);
    }
    b.controlled(&[Control::on(v(n - 1))], |b| negate(b, chain[n].qubits()));
    let result = chain[n].qubits().to_vec();
    Ok(Parts {
        rego,
        chain,
        flags: vec![],
        result,
        result_flag: None,
    })
}

fn cot_body(b: &mut Builder, cfg: &SynthConfig, layout: Layout, rego: QReg) -> Result<Parts> {
    let n = cfg.n as usize;
    let f = layout.frac_bits;
    let v = |i: usize| rego.bit(i);
    let sq_layout = Layout::unsigned(2 * (layout.int_bits - 1) + 1, f);
    let mut chain = vec![preset_one(b, layout)];
    let flags: Vec<Qubit> = (0..=n).map(|_| one_qubit(b)).collect();
    b.x(flags[0]);
    for i in 0..n {
        let a = chain[i].clone();
        b.mcx(&[Control::on(flags[i]), Control::off(v(i))], flags[i + 1]);
        let next = if i == 0 {
            b.alloc(layout)
        } else {
            b.controlled(&[Control::off(flags[i])], |b| -> Result<QReg> {
                b.cx(v(i - 1), v(i));
                let bits = a.with_layout(layout.as_unsigned())?;
                let sq = square(b, &bits, sq_layout, 0, cfg.square, GarbagePolicy::Garbage)?;
                increment_at(b, sq.qubits(), f as usize);
                let r = sqrt(b, &sq, layout, 0, GarbagePolicy::Garbage)?;
                add_or_sub(b, v(i), a.qubits(), r.qubits());
                b.cx(v(i - 1), v(i));
                Ok(r)
            })?
        };
        b.cx(flags[i + 1], next.bit(f as usize));
        chain.push(next);
    }
    b.controlled(&[Control::on(v(n - 1))], |b| negate(b, chain[n].qubits()));
    let result = chain[n].qubits().to_vec();
    Ok(Parts {
        rego,
        chain,
        result_flag: Some(flags[n]),
        flags,
        result,
    })
}

fn named(reg: &QReg, name: &str, role: Role) -> Result<Register> {
    reg.register(name, role)
}

fn single(q: Qubit, name: String, role: Role) -> Register {
    Register::new(name, role, q, Layout::unsigned(1, 0))
}

/// Builds the circuit for `cfg.function`.
pub fn synthesize(cfg: &SynthConfig) -> Result<SynthesizedCircuit> {
    let layout = cfg.working_layout()?;
    let group = cfg.function.group();
    let mut b = Builder::new();
    let input = match group {
        Group::Forward => b.alloc(layout),
        Group::Inverse => b.alloc(Layout::unsigned(0, cfg.n)),
    };
    let start = b.mark();
    let first_body_qubit = b.qubit_count();
    let parts = match cfg.function {
        Function::Log2 => log2_body(&mut b, cfg, layout, input.clone())?,
        Function::Arccos => arccos_body(&mut b, cfg, layout, input.clone())?,
        Function::Arccot => arccot_body(&mut b, cfg, layout, input.clone())?,
        Function::Exp2 => exp2_body(&mut b, cfg, layout, input.clone())?,
        Function::Cos => cos_body(&mut b, cfg, layout, input.clone())?,
        Function::Cot => cot_body(&mut b, cfg, layout, input.clone())?,
    };
    let clean = cfg.policy == GarbagePolicy::Clean;
    let mut out = None;
    let mut out_flag = None;
    if clean {
        let end = b.mark();
        let body_end = b.qubit_count();
        let result_layout = match group {
            Group::Forward => parts.rego.layout(),
            Group::Inverse => layout,
        };
        let o = b.alloc(result_layout);
        copy(&mut b, &parts.result, o.qubits());
        if let Some(flag) = parts.result_flag {
            let q = one_qubit(&mut b);
            b.cx(flag, q);
            out_flag = Some(q);
        }
        b.append_inverse(start, end);
        let body: Vec<Qubit> = (first_body_qubit..body_end).collect();
        b.set_kind(&body, QubitKind::Ancilla);
        out = Some(o);
    }

    let leftover = if clean { Role::Ancilla } else { Role::Garbage };
    let mut registers = Vec::new();
    let chain_start = match group {
        Group::Forward => {
            registers.push(named(&parts.chain[0], "RegI0", Role::Input)?);
            let role = if clean { Role::Ancilla } else { Role::Output };
            registers.push(named(&parts.rego, "RegO", role)?);
            1
        }
        Group::Inverse => {
            registers.push(named(&parts.rego, "RegO", Role::Input)?);
            0
        }
    };
    let last = parts.chain.len() - 1;
    for (i, reg) in parts.chain.iter().enumerate().skip(chain_start) {
        let role = if group == Group::Inverse && i == last && !clean {
            Role::Output
        } else {
            leftover
        };
        registers.push(named(reg, &format!("RegI{i}"), role)?);
    }
    for (i, &q) in parts.flags.iter().enumerate() {
        registers.push(single(q, format!("Anc1_{i}"), leftover));
    }
    if let Some(o) = &out {
        registers.push(named(o, "Out", Role::Output)?);
    }
    if let Some(q) = out_flag {
        registers.push(single(q, "OutFlag".into(), Role::Output));
    }
    let circuit = b.finish(registers)?;

    let (value_register, flag_register) = match (clean, group) {
        (true, _) => ("Out".to_string(), "OutFlag".to_string()),
        (false, Group::Forward) => ("RegO".to_string(), String::new()),
        (false, Group::Inverse) => (format!("RegI{last}"), format!("Anc1_{}", cfg.n)),
    };
    let decoding = match (group, cfg.function) {
        (Group::Forward, _) => Decoding::Digits {
            register: value_register,
            n: cfg.n as usize,
        },
        (_, Function::Cot) => Decoding::ValueOrInfinity {
            register: value_register,
            layout,
            flag: flag_register,
        },
        _ => Decoding::Value {
            register: value_register,
            layout,
        },
    };
    Ok(SynthesizedCircuit {
        circuit,
        config: *cfg,
        layout,
        input: match group {
            Group::Forward => "RegI0".into(),
            Group::Inverse => "RegO".into(),
        },
        chain: (0..=last).map(|i| format!("RegI{i}")).collect(),
        decoding,
    })
}

fn synth_checked(cfg: &SynthConfig, function: Function) -> Result<SynthesizedCircuit> {
    if cfg.function != function {
        return Err(Error::config(format!(
            "configuration is for {}, not {function}",
            cfg.function
        )));
    }
    synthesize(cfg)
}

pub fn synth_log2(cfg: &SynthConfig) -> Result<SynthesizedCircuit> {
    synth_checked(cfg, Function::Log2)
}

pub fn synth_arccos(cfg: &SynthConfig) -> Result<SynthesizedCircuit> {
    synth_checked(cfg, Function::Arccos)
}

pub fn synth_arccot(cfg: &SynthConfig) -> Result<SynthesizedCircuit> {
    synth_checked(cfg, Function::Arccot)
}

pub fn synth_exp2(cfg: &SynthConfig) -> Result<SynthesizedCircuit> {
    synth_checked(cfg, Function::Exp2)
}

pub fn synth_cos(cfg: &SynthConfig) -> Result<SynthesizedCircuit> {
    synth_checked(cfg, Function::Cos)
}

pub fn synth_cot(cfg: &SynthConfig) -> Result<SynthesizedCircuit> {
    synth_checked(cfg, Function::Cot)
}

impl SynthesizedCircuit {
    pub fn function(&self) -> Function {
        self.config.function
    }

    pub fn spec(&self) -> FunctionSpec {
        self.config.function.spec()
    }

    fn input_register(&self) -> &Register {
        self.circuit
            .require_register(&self.input)
            .expect("input register exists")
    }

    pub fn input_width(&self) -> usize {
        self.input_register().layout.width() as usize
    }

    /// Input bit patterns inside the function's domain, in increasing order.
    pub fn valid_inputs(&self) -> Vec<u128> {
        let count = 1u128 << self.input_width();
        (0..count).filter(|&bits| self.is_valid_input(bits)).collect()
    }

    /// Whether `bits` fits the input register and, for Group 1, lies in the domain.
    pub fn is_valid_input(&self, bits: u128) -> bool {
        let w = self.input_width();
        if w < 128 && bits >> w != 0 {
            return false;
        }
        match self.function().group() {
            Group::Inverse => true,
            Group::Forward => {
                let x = FixedPoint::from_bits_raw(bits, self.layout);
                self.spec()
                    .domain
                    .contains(&ExtendedValue::Finite(crate::fbe::Dyadic::from_fixed(&x)))
            }
        }
    }

    /// Basis state with `bits` in the input register and zeros elsewhere.
    pub fn encode(&self, bits: u128) -> Result<BasisState> {
        let reg = self.input_register();
        if self.input_width() < 128 && bits >> self.input_width() != 0 {
            return Err(Error::config(format!("input {bits:#b} is wider than {}", reg.name)));
        }
        let mut s = BasisState::zeros(self.circuit.qubit_count());
        s.write_register(reg, bits);
        Ok(s)
    }

    pub fn encode_value(&self, x: &FixedPoint) -> Result<BasisState> {
        if self.function().group() != Group::Forward || x.layout() != self.layout {
            return Err(Error::config(format!(
                "{} takes a value in {}",
                self.function(),
                self.layout
            )));
        }
        self.encode(x.raw_bits())
    }

    pub fn encode_digits(&self, v: &DigitString) -> Result<BasisState> {
        if self.function().group() != Group::Inverse || v.len() != self.config.n as usize || v.radix() != 2 {
            return Err(Error::config(format!(
                "{} takes {} binary digits",
                self.function(),
                self.config.n
            )));
        }
        self.encode(v.to_bits())
    }

    /// Simulates the circuit on `bits` and decodes the result.
    pub fn run(&self, bits: u128) -> Result<Decoded> {
        let out = simulate_basis(&self.circuit, &self.encode(bits)?)?;
        self.decode_output(&out)
    }

    pub fn decode_output(&self, state: &BasisState) -> Result<Decoded> {
        if state.len() != self.circuit.qubit_count() {
            return Err(Error::config(format!(
                "state has {} qubits, circuit has {}",
                state.len(),
                self.circuit.qubit_count()
            )));
        }
        let read = |name: &str| -> Result<u128> { Ok(state.read_register(self.circuit.require_register(name)?)) };
        match &self.decoding {
            Decoding::Digits { register, n } => {
                let bits = read(register)?;
                let digits = (0..*n).map(|i| ((bits >> (n - 1 - i)) & 1) as u8).collect();
                Ok(Decoded::Digits(DigitString::new(
                    digits,
                    2,
                    DigitOrder::MostSignificantFirst,
                )?))
            }
            Decoding::Value { register, layout } => {
                Ok(Decoded::Value(FixedPoint::from_bits_raw(read(register)?, *layout)))
            }
            Decoding::ValueOrInfinity { register, layout, flag } => {
                if read(flag)? == 1 {
                    Ok(Decoded::PosInfinity)
                } else {
                    Ok(Decoded::Value(FixedPoint::from_bits_raw(read(register)?, *layout)))
                }
            }
        }
    }

    /// The output register rendered in its layout, e.g. `0.000` or `11.011`.
    pub fn output_text(&self, state: &BasisState) -> Result<String> {
        let name = match &self.decoding {
            Decoding::Digits { register, .. } => register,
            Decoding::Value { register, .. } => register,
            Decoding::ValueOrInfinity { register, flag, .. } => {
                if state.read_register(self.circuit.require_register(flag)?) == 1 {
                    return Ok("+inf".into());
                }
                register
            }
        };
        let reg = self.circuit.require_register(name)?;
        Ok(FixedPoint::from_bits_raw(state.read_register(reg), reg.layout).to_binary_string())
    }

    /// Contents of `RegI0 ..` as values; only the garbage policy keeps them.
    pub fn decode_chain(&self, state: &BasisState) -> Result<Vec<FixedPoint>> {
        if self.config.policy == GarbagePolicy::Clean {
            return Err(Error::Mode("the clean policy uncomputes the working registers".into()));
        }
        self.chain
            .iter()
            .map(|name| {
                let reg = self.circuit.require_register(name)?;
                Ok(FixedPoint::from_bits_raw(state.read_register(reg), self.layout))
            })
            .collect()
    }

    /// The classical recurrence at the circuit's widths on the same input.
    pub fn classical(&self, bits: u128) -> Result<Decoded> {
        let spec = self.spec();
        match self.function().group() {
            Group::Forward => {
                let x = FixedPoint::from_bits_raw(bits, self.layout);
                Ok(Decoded::Digits(fbe_expand(&spec, &x, self.config.n as usize)?))
            }
            Group::Inverse => {
                let v = DigitString::from_fraction_bits(bits, self.config.n as usize);
                match ifbe_evaluate(&spec, &v, self.layout)?.value {
                    ExtendedValue::Finite(d) => Ok(Decoded::Value(d.to_fixed(self.layout))),
                    ExtendedValue::PosInfinity => Ok(Decoded::PosInfinity),
                    ExtendedValue::NegInfinity => Err(Error::Overflow("unexpected -inf".into())),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn text(sc: &SynthesizedCircuit, input: &str) -> String {
        let bits = match sc.function().group() {
            Group::Forward => FixedPoint::parse_with_layout(input, sc.layout).unwrap().raw_bits(),
            Group::Inverse => DigitString::from_binary_str(input).unwrap().to_bits(),
        };
        let out = simulate_basis(&sc.circuit, &sc.encode(bits).unwrap()).unwrap();
        sc.output_text(&out).unwrap()
    }

    #[test]
    fn table_two_rows() {
        let log = synthesize(&SynthConfig::new(Function::Log2, 4, 4)).unwrap();
        assert_eq!(text(&log, "01.00"), "0.000");
        assert_eq!(text(&log, "10.00"), "1.000");
        let acos = synthesize(&SynthConfig::new(Function::Arccos, 2, 4)).unwrap();
        for (x, w) in [("00.00", ".10"), ("00.10", ".01"), ("01.00", ".00"), ("11.10", ".10")] {
            assert_eq!(text(&acos, x), w, "arccos {x}");
        }
        let acot = synthesize(&SynthConfig::new(Function::Arccot, 2, 4)).unwrap();
        assert_eq!(text(&acot, "01.00"), ".01");
        let cos = synthesize(&SynthConfig::new(Function::Cos, 2, 5)).unwrap();
        for (v, y) in [("00", "01.000"), ("01", "00.101"), ("10", "00.000"), ("11", "11.011")] {
            assert_eq!(text(&cos, v), y, "cos {v}");
        }
    }

    #[test]
    fn circuits_match_recurrences_exhaustively() {
        for function in Function::ALL {
            for policy in [GarbagePolicy::Garbage, GarbagePolicy::Clean] {
                let (n, m) = if function == Function::Cot { (3, 6) } else { (3, 5) };
                let cfg = SynthConfig::new(function, n, m).with_policy(policy);
                let sc = synthesize(&cfg).unwrap();
                for bits in sc.valid_inputs() {
                    let want = sc.classical(bits).unwrap();
                    assert_eq!(sc.run(bits).unwrap(), want, "{cfg} input {bits:#b}");
                }
            }
        }
    }

    #[test]
    fn reversed_sqrt_square_gives_the_same_circuits() {
        for function in [Function::Log2, Function::Arccos, Function::Cot] {
            let cfg = SynthConfig::new(function, 3, 6).with_square(SquareMethod::ReversedSqrt);
            let sc = synthesize(&cfg).unwrap();
            for bits in sc.valid_inputs() {
                assert_eq!(sc.run(bits).unwrap(), sc.classical(bits).unwrap(), "{cfg} {bits}");
            }
        }
    }

    #[test]
    fn clean_policy_restores_everything_but_input_and_out() {
        let cfg = SynthConfig::new(Function::Arccot, 3, 5).with_policy(GarbagePolicy::Clean);
        let sc = synthesize(&cfg).unwrap();
        for bits in sc.valid_inputs() {
            let s = simulate_basis(&sc.circuit, &sc.encode(bits).unwrap()).unwrap();
            for r in sc.circuit.registers() {
                if r.role == Role::Ancilla {
                    assert_eq!(s.read_register(r), 0, "{} after {bits}", r.name);
                }
            }
            assert_eq!(s.read_register(sc.circuit.require_register("RegI0").unwrap()), bits);
        }
    }

    #[test]
    fn exp2_chain_follows_the_worked_trace() {
        let sc = synthesize(&SynthConfig::new(Function::Exp2, 4, 16)).unwrap();
        let v = DigitString::from_binary_str(".1011").unwrap();
        let s = simulate_basis(&sc.circuit, &sc.encode_digits(&v).unwrap()).unwrap();
        let chain = sc.decode_chain(&s).unwrap();
        let want = [1.0, std::f64::consts::SQRT_2, 1.6818, 1.2968, 1.6105];
        for (a, w) in chain.iter().zip(want) {
            assert!((a.to_f64() - w).abs() < 1e-4, "{a:?} vs {w}");
        }
    }

    #[test]
    fn cot_special_points() {
        let sc = synthesize(&SynthConfig::new(Function::Cot, 3, 12)).unwrap();
        assert_eq!(sc.run(0b010).unwrap().to_f64(), 1.0);
        assert_eq!(sc.run(0b100).unwrap().to_f64(), 0.0);
        assert_eq!(sc.run(0).unwrap(), Decoded::PosInfinity);
        let eighth = sc.run(0b001).unwrap().to_f64();
        assert!((eighth - (1.0 + 2f64.sqrt())).abs() < 2f64.powi(-6), "{eighth}");
    }

    #[test]
    fn mismatched_configuration_is_rejected() {
        assert!(synth_log2(&SynthConfig::new(Function::Cos, 2, 4)).is_err());
        assert!(synthesize(&SynthConfig::new(Function::Cot, 4, 4)).is_err());
        assert!(synthesize(&SynthConfig::new(Function::Log2, 0, 4)).is_err());
    }
}
