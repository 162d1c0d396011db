//! Reversible arithmetic blocks and the builder used to assemble them.
//!
//! Blocks are free functions over a [`Builder`]. Every gate a block emits picks up
//! the builder's current control stack, so "controlled X" is just X run inside
//! [`Builder::controlled`]. Registers are [`QReg`]s, LSB first.

mod algebraic;
mod arith;

pub use algebraic::{reciprocal, sqrt, sqrt_core, square};
pub use arith::{
    absolute, add, add_or_sub, copy, decrement_at, increment_at, negate, rotate_left, rotate_right, sub, zero_test,
};

use std::fmt;
use std::str::FromStr;

use crate::circuit::{Circuit, Control, Gate, Qubit, Register, Role};
use crate::error::{Error, Result};
use crate::fixedpoint::Layout;

/// Whether intermediate work registers are left dirty or uncomputed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum GarbagePolicy {
    #[default]
    Garbage,
    /// Compute, copy the result out, run the computation backwards.
    Clean,
}

impl FromStr for GarbagePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "garbage" => Ok(GarbagePolicy::Garbage),
            "clean" => Ok(GarbagePolicy::Clean),
            other => Err(Error::config(format!("unknown garbage policy '{other}'"))),
        }
    }
}

impl fmt::Display for GarbagePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GarbagePolicy::Garbage => "garbage",
            GarbagePolicy::Clean => "clean",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SquareMethod {
    /// Controlled-add multiplier specialized to equal operands.
    #[default]
    ShiftAdd,
    /// The square-root circuit run backwards from `|root = a, rem = 0>`.
    ReversedSqrt,
}

impl FromStr for SquareMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shift-add" => Ok(SquareMethod::ShiftAdd),
            "reversed-sqrt" => Ok(SquareMethod::ReversedSqrt),
            other => Err(Error::config(format!("unknown square method '{other}'"))),
        }
    }
}

impl fmt::Display for SquareMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SquareMethod::ShiftAdd => "shift-add",
            SquareMethod::ReversedSqrt => "reversed-sqrt",
        })
    }
}

/// How a qubit is expected to end up.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QubitKind {
    Data,
    Ancilla,
    Garbage,
}

/// A quantum register: qubits LSB first plus the fixed-point reading of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QReg {
    qubits: Vec<Qubit>,
    layout: Layout,
}

impl QReg {
    pub fn new(qubits: Vec<Qubit>, layout: Layout) -> Result<Self> {
        if qubits.len() != layout.width() as usize {
            return Err(Error::config(format!(
                "{} qubits cannot hold layout {layout}",
                qubits.len()
            )));
        }
        Ok(QReg { qubits, layout })
    }

    pub fn qubits(&self) -> &[Qubit] {
        &self.qubits
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    pub fn bit(&self, i: usize) -> Qubit {
        self.qubits[i]
    }

    pub fn msb(&self) -> Qubit {
        *self.qubits.last().expect("non-empty register")
    }

    /// Same qubits, different reading.
    pub fn with_layout(&self, layout: Layout) -> Result<QReg> {
        QReg::new(self.qubits.clone(), layout)
    }

    /// Qubits `range` read under `layout`.
    pub fn window(&self, range: std::ops::Range<usize>, layout: Layout) -> Result<QReg> {
        QReg::new(self.qubits[range].to_vec(), layout)
    }

    /// Start of the run if the qubits are consecutive.
    pub fn contiguous_start(&self) -> Option<Qubit> {
        let s = *self.qubits.first()?;
        self.qubits.iter().enumerate().all(|(k, &q)| q == s + k).then_some(s)
    }

    /// Circuit register over these qubits; they must be consecutive.
    pub fn register(&self, name: &str, role: Role) -> Result<Register> {
        let start = self
            .contiguous_start()
            .ok_or_else(|| Error::config(format!("register {name} is not contiguous")))?;
        Ok(Register::new(name, role, start, self.layout))
    }
}

/// Gate list under construction with a control stack and a clean-ancilla pool.
#[derive(Debug, Default)]
pub struct Builder {
    gates: Vec<Gate>,
    kinds: Vec<QubitKind>,
    controls: Vec<Control>,
    pool: Vec<Qubit>,
    in_pool: Vec<bool>,
}

impl Builder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn qubit_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn kind(&self, q: Qubit) -> QubitKind {
        self.kinds[q]
    }

    pub fn set_kind(&mut self, qubits: &[Qubit], kind: QubitKind) {
        for &q in qubits {
            self.kinds[q] = kind;
        }
    }

    fn fresh(&mut self, n: usize, kind: QubitKind) -> Vec<Qubit> {
        let start = self.kinds.len();
        self.kinds.extend(std::iter::repeat_n(kind, n));
        self.in_pool.extend(std::iter::repeat_n(false, n));
        (start..start + n).collect()
    }

    /// Fresh consecutive zero qubits holding data.
    pub fn alloc(&mut self, layout: Layout) -> QReg {
        let qubits = self.fresh(layout.width() as usize, QubitKind::Data);
        QReg { qubits, layout }
    }

    /// Fresh zero qubits that will be left dirty.
    pub fn alloc_garbage(&mut self, n: usize) -> Vec<Qubit> {
        self.fresh(n, QubitKind::Garbage)
    }

    /// A zero qubit from the pool; hand it back with [`Builder::release`] once zero again.
    pub fn ancilla(&mut self) -> Qubit {
        match self.pool.pop() {
            Some(q) => {
                self.in_pool[q] = false;
                q
            }
            None => self.fresh(1, QubitKind::Ancilla)[0],
        }
    }

    pub fn ancillas(&mut self, n: usize) -> Vec<Qubit> {
        (0..n).map(|_| self.ancilla()).collect()
    }

    pub fn release(&mut self, q: Qubit) {
        debug_assert!(!self.in_pool[q], "qubit {q} released twice");
        self.kinds[q] = QubitKind::Ancilla;
        self.in_pool[q] = true;
        self.pool.push(q);
    }

    pub fn release_all(&mut self, qs: &[Qubit]) {
        for &q in qs.iter().rev() {
            self.release(q);
        }
    }

    fn emit(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    fn stacked(&self, extra: &[Control]) -> Vec<Control> {
        self.controls.iter().chain(extra).copied().collect()
    }

    pub fn x(&mut self, target: Qubit) {
        self.mcx(&[], target);
    }

    pub fn cx(&mut self, control: Qubit, target: Qubit) {
        self.mcx(&[Control::on(control)], target);
    }

    pub fn ccx(&mut self, c0: Qubit, c1: Qubit, target: Qubit) {
        self.mcx(&[Control::on(c0), Control::on(c1)], target);
    }

    pub fn mcx(&mut self, controls: &[Control], target: Qubit) {
        let controls = self.stacked(controls);
        self.emit(Gate::X { target, controls });
    }

    /// X with the given controls only, ignoring the control stack.
    pub fn mcx_unstacked(&mut self, controls: &[Control], target: Qubit) {
        self.emit(Gate::X {
            target,
            controls: controls.to_vec(),
        });
    }

    pub fn h(&mut self, q: Qubit) {
        self.emit(Gate::H(q));
    }

    /// SWAP under the control stack; more than one control lowers to CNOT-MCX-CNOT.
    pub fn swap(&mut self, a: Qubit, b: Qubit) {
        match self.controls.len() {
            0 => self.emit(Gate::swap(a, b)),
            1 => self.emit(Gate::Swap {
                a,
                b,
                control: Some(self.controls[0]),
            }),
            _ => {
                self.emit(Gate::cx(b, a));
                self.mcx(&[Control::on(a)], b);
                self.emit(Gate::cx(b, a));
            }
        }
    }

    pub fn push_control(&mut self, c: Control) {
        self.controls.push(c);
    }

    pub fn pop_control(&mut self) {
        self.controls.pop();
    }

    /// Runs `f` with `controls` pushed onto the stack.
    pub fn controlled<R>(&mut self, controls: &[Control], f: impl FnOnce(&mut Self) -> R) -> R {
        let depth = self.controls.len();
        self.controls.extend_from_slice(controls);
        let r = f(self);
        self.controls.truncate(depth);
        r
    }

    /// Index of the next gate, for [`Builder::append_inverse`].
    pub fn mark(&self) -> usize {
        self.gates.len()
    }

    /// Appends the inverse of gates `from..to`.
    pub fn append_inverse(&mut self, from: usize, to: usize) {
        let inv: Vec<Gate> = self.gates[from..to].iter().rev().map(Gate::inverse).collect();
        self.gates.extend(inv);
    }

    /// Replaces gates `from..` with their inverse.
    pub fn invert_tail(&mut self, from: usize) {
        self.gates[from..].reverse();
    }

    /// Compute with `f`, copy its result into a fresh register, then undo `f`.
    /// Everything `f` allocated is zero again and joins the ancilla pool.
    pub fn bennett(&mut self, f: impl FnOnce(&mut Builder) -> Result<QReg>) -> Result<QReg> {
        let start = self.mark();
        let first_new = self.qubit_count();
        let result = f(self)?;
        let end = self.mark();
        let out = self.alloc(result.layout);
        for (&s, &d) in result.qubits.iter().zip(&out.qubits) {
            self.cx(s, d);
        }
        self.append_inverse(start, end);
        for q in first_new..out.qubits[0] {
            self.kinds[q] = QubitKind::Ancilla;
            if !self.in_pool[q] {
                self.in_pool[q] = true;
                self.pool.push(q);
            }
        }
        Ok(out)
    }

    /// Finishes the circuit. Qubits outside `registers` are grouped into
    /// consecutive `Anc*` (clean) and `Garbage*` registers.
    pub fn finish(self, registers: Vec<Register>) -> Result<Circuit> {
        let n = self.qubit_count();
        let mut c = Circuit::new(n);
        c.extend(self.gates)?;
        let mut covered = vec![false; n];
        for r in &registers {
            for q in r.qubits() {
                if q < n {
                    covered[q] = true;
                }
            }
        }
        for r in registers {
            c.add_register(r)?;
        }
        let role_of = |q: usize| match self.kinds[q] {
            QubitKind::Ancilla => Role::Ancilla,
            _ => Role::Garbage,
        };
        let (mut anc, mut garb) = (0, 0);
        let mut q = 0;
        while q < n {
            if covered[q] {
                q += 1;
                continue;
            }
            let role = role_of(q);
            let start = q;
            while q < n && !covered[q] && role_of(q) == role {
                q += 1;
            }
            let name = if role == Role::Ancilla {
                anc += 1;
                format!("Anc{}", anc - 1)
            } else {
                garb += 1;
                format!("Garbage{}", garb - 1)
            };
            c.add_register(Register::new(
                name,
                role,
                start,
                Layout::unsigned((q - start) as u32, 0),
            ))?;
        }
        Ok(c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AdderVariant {
    /// `|a>|b> -> |a>|a+b mod 2^w>`.
    Full,
    /// Adds one at the lowest bit.
    IncrementLow,
    /// Adds one at the lowest integer bit.
    IncrementIntLow { frac_bits: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShiftDirection {
    Left,
    Right,
}

fn unsigned_width(width: u32) -> Result<Layout> {
    let l = Layout::unsigned(width, 0);
    l.validate()?;
    Ok(l)
}

/// Standalone adder with registers `a` and `b` (full) or just `a`.
pub fn build_adder(width: u32, variant: AdderVariant) -> Result<Circuit> {
    let mut b = Builder::new();
    match variant {
        AdderVariant::Full => {
            let layout = unsigned_width(width)?;
            let a = b.alloc(layout);
            let t = b.alloc(layout);
            add(&mut b, a.qubits(), t.qubits());
            let regs = vec![a.register("a", Role::Input)?, t.register("b", Role::Output)?];
            b.finish(regs)
        }
        AdderVariant::IncrementLow => {
            let a = b.alloc(unsigned_width(width)?);
            increment_at(&mut b, a.qubits(), 0);
            let regs = vec![a.register("a", Role::Output)?];
            b.finish(regs)
        }
        AdderVariant::IncrementIntLow { frac_bits } => {
            if frac_bits >= width {
                return Err(Error::config(format!(
                    "no integer bit in a {width}-bit register with {frac_bits} fraction bits"
                )));
            }
            let a = b.alloc(Layout::unsigned(width - frac_bits, frac_bits));
            increment_at(&mut b, a.qubits(), frac_bits as usize);
            let regs = vec![a.register("a", Role::Output)?];
            b.finish(regs)
        }
    }
}

/// Rotation by `k` over register `a`, optionally controlled by register `ctrl`.
pub fn build_shift(width: u32, direction: ShiftDirection, k: u32, controlled: bool) -> Result<Circuit> {
    if k >= width {
        return Err(Error::config(format!("shift {k} not below width {width}")));
    }
    let mut b = Builder::new();
    let ctrl = controlled.then(|| b.alloc(Layout::unsigned(1, 0)));
    let a = b.alloc(unsigned_width(width)?);
    let controls: Vec<Control> = ctrl.iter().map(|c| Control::on(c.bit(0))).collect();
    b.controlled(&controls, |b| match direction {
        ShiftDirection::Left => rotate_left(b, a.qubits(), k as usize),
        ShiftDirection::Right => rotate_right(b, a.qubits(), k as usize),
    });
    let mut regs = vec![a.register("a", Role::Output)?];
    if let Some(c) = ctrl {
        regs.push(c.register("ctrl", Role::Input)?);
    }
    b.finish(regs)
}

/// In-place absolute value of a signed register `a`; the sign copy is garbage.
pub fn build_absolute(layout: Layout, controlled: bool) -> Result<Circuit> {
    layout.validate()?;
    if !layout.signed {
        return Err(Error::config("absolute value needs a signed layout"));
    }
    let mut b = Builder::new();
    let ctrl = controlled.then(|| b.alloc(Layout::unsigned(1, 0)));
    let a = b.alloc(layout);
    let controls: Vec<Control> = ctrl.iter().map(|c| Control::on(c.bit(0))).collect();
    b.controlled(&controls, |b| absolute(b, &a));
    let mut regs = vec![a.register("a", Role::Output)?];
    if let Some(c) = ctrl {
        regs.push(c.register("ctrl", Role::Input)?);
    }
    b.finish(regs)
}

/// Out-of-place square `|a>|0> -> |a>|trunc(a^2)>` with registers `a` and `out`.
pub fn build_square(input: Layout, output: Layout, method: SquareMethod, policy: GarbagePolicy) -> Result<Circuit> {
    input.validate()?;
    output.validate()?;
    let mut b = Builder::new();
    let a = b.alloc(input);
    let out = square(&mut b, &a, output, 0, method, policy)?;
    let regs = vec![a.register("a", Role::Input)?, out.register("out", Role::Output)?];
    b.finish(regs)
}

/// Non-restoring square root; the radicand register `a` is consumed into the
/// remainder unless the policy is clean.
pub fn build_sqrt(layout: Layout, policy: GarbagePolicy) -> Result<Circuit> {
    layout.validate()?;
    let mut b = Builder::new();
    let a = b.alloc(layout);
    let out = sqrt(&mut b, &a, layout, 0, policy)?;
    let role = match policy {
        GarbagePolicy::Garbage => Role::Garbage,
        GarbagePolicy::Clean => Role::Input,
    };
    let regs = vec![a.register("a", role)?, out.register("out", Role::Output)?];
    b.finish(regs)
}

/// Non-restoring reciprocal `|a>|0> -> |a>|trunc(1/a)>`.
pub fn build_reciprocal(layout: Layout, policy: GarbagePolicy) -> Result<Circuit> {
    layout.validate()?;
    let mut b = Builder::new();
    let a = b.alloc(layout);
    let out = reciprocal(&mut b, &a, layout, policy)?;
    let regs = vec![a.register("a", Role::Input)?, out.register("out", Role::Output)?];
    b.finish(regs)
}
