//! Reversible circuit IR: gates over numbered qubits plus named, typed registers.

mod resources;
mod sim;
mod text;

pub use resources::{resource_count, DecomposedCounts, ResourceReport};
pub use sim::{simulate_basis, simulate_sparse, BasisState, SparseState, DEFAULT_SPARSE_CAP};
pub use text::{export_text, export_text_expanded, import_text};

use std::fmt;

use crate::error::{Error, Result};
use crate::fixedpoint::Layout;

pub type Qubit = usize;

/// A control line; `positive == false` fires on `|0>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Control {
    pub qubit: Qubit,
    pub positive: bool,
}

impl Control {
    pub const fn on(qubit: Qubit) -> Self {
        Control { qubit, positive: true }
    }

    pub const fn off(qubit: Qubit) -> Self {
        Control { qubit, positive: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    X,
    Cnot,
    Toffoli,
    Mcx,
    Swap,
    Cswap,
    H,
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GateKind::X => "X",
            GateKind::Cnot => "CNOT",
            GateKind::Toffoli => "TOFFOLI",
            GateKind::Mcx => "MCX",
            GateKind::Swap => "SWAP",
            GateKind::Cswap => "CSWAP",
            GateKind::H => "H",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(Qubit),
    /// NOT with any number of controls (X, CNOT, TOFFOLI, MCX).
    X {
        target: Qubit,
        controls: Vec<Control>,
    },
    /// SWAP, or CSWAP when `control` is set.
    Swap {
        a: Qubit,
        b: Qubit,
        control: Option<Control>,
    },
}

impl Gate {
    pub fn x(target: Qubit) -> Self {
        Gate::X {
            target,
            controls: Vec::new(),
        }
    }

    pub fn cx(control: Qubit, target: Qubit) -> Self {
        Gate::X {
            target,
            controls: vec![Control::on(control)],
        }
    }

    pub fn ccx(c0: Qubit, c1: Qubit, target: Qubit) -> Self {
        Gate::X {
            target,
            controls: vec![Control::on(c0), Control::on(c1)],
        }
    }

    pub fn mcx(controls: Vec<Control>, target: Qubit) -> Self {
        Gate::X { target, controls }
    }

    pub fn swap(a: Qubit, b: Qubit) -> Self {
        Gate::Swap { a, b, control: None }
    }

    pub fn cswap(control: Qubit, a: Qubit, b: Qubit) -> Self {
        Gate::Swap {
            a,
            b,
            control: Some(Control::on(control)),
        }
    }

    pub fn kind(&self) -> GateKind {
        match self {
            Gate::H(_) => GateKind::H,
            Gate::X { controls, .. } => match controls.len() {
                0 => GateKind::X,
                1 => GateKind::Cnot,
                2 => GateKind::Toffoli,
                _ => GateKind::Mcx,
            },
            Gate::Swap { control: None, .. } => GateKind::Swap,
            Gate::Swap { control: Some(_), .. } => GateKind::Cswap,
        }
    }

    pub fn controls(&self) -> &[Control] {
        match self {
            Gate::H(_) => &[],
            Gate::X { controls, .. } => controls,
            Gate::Swap { control, .. } => control.as_slice(),
        }
    }

    /// Every qubit the gate touches, controls first.
    pub fn qubits(&self) -> Vec<Qubit> {
        match self {
            Gate::H(q) => vec![*q],
            Gate::X { target, controls } => controls
                .iter()
                .map(|c| c.qubit)
                .chain(std::iter::once(*target))
                .collect(),
            Gate::Swap { a, b, control } => control.iter().map(|c| c.qubit).chain([*a, *b]).collect(),
        }
    }

    /// Every gate in the set is its own inverse.
    pub fn inverse(&self) -> Gate {
        self.clone()
    }

    pub fn validate(&self, qubit_count: usize) -> Result<()> {
        let qs = self.qubits();
        if let Some(&bad) = qs.iter().find(|&&q| q >= qubit_count) {
            return Err(Error::config(format!(
                "gate {self:?} uses qubit {bad} but the circuit has {qubit_count}"
            )));
        }
        let mut sorted = qs.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != qs.len() {
            return Err(Error::config(format!("gate {self:?} repeats a qubit")));
        }
        Ok(())
    }

    fn remap(&self, map: &[Qubit]) -> Gate {
        let c = |c: &Control| Control {
            qubit: map[c.qubit],
            positive: c.positive,
        };
        match self {
            Gate::H(q) => Gate::H(map[*q]),
            Gate::X { target, controls } => Gate::X {
                target: map[*target],
                controls: controls.iter().map(c).collect(),
            },
            Gate::Swap { a, b, control } => Gate::Swap {
                a: map[*a],
                b: map[*b],
                control: control.as_ref().map(c),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Input,
    Output,
    /// Must be |0...0> on entry and is restored to zero on exit.
    Ancilla,
    /// Starts at zero, ends in a data-dependent state.
    Garbage,
}

impl Role {
    pub fn as_str(&self) -> &'static str {
        match self {
            Role::Input => "input",
            Role::Output => "output",
            Role::Ancilla => "ancilla",
            Role::Garbage => "garbage",
        }
    }

    pub fn parse(s: &str) -> Option<Role> {
        match s {
            "input" => Some(Role::Input),
            "output" => Some(Role::Output),
            "ancilla" => Some(Role::Ancilla),
            "garbage" => Some(Role::Garbage),
            _ => None,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A contiguous run of qubits; qubit `start` holds the least significant bit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Register {
    pub name: String,
    pub role: Role,
    pub start: Qubit,
    pub len: usize,
    pub layout: Layout,
}

impl Register {
    pub fn new(name: impl Into<String>, role: Role, start: Qubit, layout: Layout) -> Self {
        Register {
            name: name.into(),
            role,
            start,
            len: layout.width() as usize,
            layout,
        }
    }

    pub fn end(&self) -> Qubit {
        self.start + self.len
    }

    pub fn qubits(&self) -> std::ops::Range<Qubit> {
        self.start..self.end()
    }

    fn overlaps(&self, other: &Register) -> bool {
        self.start < other.end() && other.start < self.end()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Circuit {
    qubit_count: usize,
    gates: Vec<Gate>,
    registers: Vec<Register>,
}

impl Circuit {
    pub fn new(qubit_count: usize) -> Self {
        Circuit {
            qubit_count,
            gates: Vec::new(),
            registers: Vec::new(),
        }
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn register(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name == name)
    }

    pub fn require_register(&self, name: &str) -> Result<&Register> {
        self.register(name)
            .ok_or_else(|| Error::config(format!("circuit has no register named {name}")))
    }

    pub fn registers_with_role(&self, role: Role) -> impl Iterator<Item = &Register> {
        self.registers.iter().filter(move |r| r.role == role)
    }

    pub fn has_h(&self) -> bool {
        self.gates.iter().any(|g| matches!(g, Gate::H(_)))
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.qubit_count)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    /// Adds a register; names must be unique and ranges disjoint and in bounds.
    pub fn add_register(&mut self, reg: Register) -> Result<()> {
        if reg.len == 0 || reg.end() > self.qubit_count {
            return Err(Error::config(format!(
                "register {} spans {}..{} outside {} qubits",
                reg.name,
                reg.start,
                reg.end(),
                self.qubit_count
            )));
        }
        if reg.layout.width() as usize != reg.len {
            return Err(Error::config(format!(
                "register {} has {} qubits but layout {}",
                reg.name, reg.len, reg.layout
            )));
        }
        if let Some(other) = self.registers.iter().find(|r| r.name == reg.name || r.overlaps(&reg)) {
            return Err(Error::config(format!(
                "register {} collides with {}",
                reg.name, other.name
            )));
        }
        self.registers.push(reg);
        Ok(())
    }

    /// Gates reversed, each replaced by its inverse; registers kept.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            qubit_count: self.qubit_count,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            registers: self.registers.clone(),
        }
    }

    /// Appends `other` after `self`. `wiring` sends each qubit of `other` either
    /// onto an existing qubit of `self` or onto a fresh qubit. Registers of
    /// `other` landing on consecutive fresh qubits are kept unless the name is taken.
    pub fn compose(&self, other: &Circuit, wiring: &Wiring) -> Result<Circuit> {
        if wiring.targets.len() != other.qubit_count {
            return Err(Error::config(format!(
                "wiring covers {} qubits, circuit has {}",
                wiring.targets.len(),
                other.qubit_count
            )));
        }
        let mut map = Vec::with_capacity(other.qubit_count);
        let mut used = vec![false; self.qubit_count];
        let mut next = self.qubit_count;
        for (q, t) in wiring.targets.iter().enumerate() {
            match *t {
                Some(target) => {
                    if target >= self.qubit_count {
                        return Err(Error::config(format!(
                            "wiring sends qubit {q} to {target}, outside {} qubits",
                            self.qubit_count
                        )));
                    }
                    if std::mem::replace(&mut used[target], true) {
                        return Err(Error::config(format!("wiring collision on qubit {target}")));
                    }
                    map.push(target);
                }
                None => {
                    map.push(next);
                    next += 1;
                }
            }
        }
        let mut out = Circuit {
            qubit_count: next,
            gates: self.gates.clone(),
            registers: self.registers.clone(),
        };
        out.gates.extend(other.gates.iter().map(|g| g.remap(&map)));
        for reg in &other.registers {
            let fresh = reg.qubits().all(|q| wiring.targets[q].is_none());
            let contiguous = reg.qubits().all(|q| map[q] == map[reg.start] + (q - reg.start));
            if fresh && contiguous && out.register(&reg.name).is_none() {
                let mut moved = reg.clone();
                moved.start = map[reg.start];
                out.add_register(moved)?;
            }
        }
        Ok(out)
    }
}

/// Qubit mapping used by [`Circuit::compose`]; `None` allocates a fresh qubit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wiring {
    pub targets: Vec<Option<Qubit>>,
}

impl Wiring {
    pub fn identity(n: usize) -> Self {
        Wiring {
            targets: (0..n).map(Some).collect(),
        }
    }

    pub fn fresh(n: usize) -> Self {
        Wiring { targets: vec![None; n] }
    }

    /// Maps the named registers of `other` onto the equally sized registers of
    /// `host`; every other qubit goes to a fresh wire.
    pub fn by_register(host: &Circuit, other: &Circuit, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut w = Wiring::fresh(other.qubit_count());
        for (theirs, ours) in pairs {
            let from = other.require_register(theirs)?;
            let to = host.require_register(ours)?;
            if from.len != to.len {
                return Err(Error::config(format!(
                    "cannot wire {theirs} ({} qubits) onto {ours} ({} qubits)",
                    from.len, to.len
                )));
            }
            for k in 0..from.len {
                w.targets[from.start + k] = Some(to.start + k);
            }
        }
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_kinds_follow_control_count() {
        assert_eq!(Gate::x(0).kind(), GateKind::X);
        assert_eq!(Gate::cx(0, 1).kind(), GateKind::Cnot);
        assert_eq!(Gate::ccx(0, 1, 2).kind(), GateKind::Toffoli);
        let mcx = Gate::mcx(vec![Control::on(0), Control::off(1), Control::on(2)], 3);
        assert_eq!(mcx.kind(), GateKind::Mcx);
        assert_eq!(Gate::cswap(0, 1, 2).kind(), GateKind::Cswap);
    }

    #[test]
    fn push_rejects_bad_gates() {
        let mut c = Circuit::new(2);
        assert!(c.push(Gate::x(2)).is_err());
        assert!(c.push(Gate::cx(1, 1)).is_err());
        c.push(Gate::cx(0, 1)).unwrap();
        assert_eq!(c.gates().len(), 1);
    }

    #[test]
    fn registers_must_be_disjoint() {
        let mut c = Circuit::new(4);
        c.add_register(Register::new("a", Role::Input, 0, Layout::unsigned(2, 0)))
            .unwrap();
        assert!(c
            .add_register(Register::new("b", Role::Output, 1, Layout::unsigned(2, 0)))
            .is_err());
        assert!(c
            .add_register(Register::new("a", Role::Output, 2, Layout::unsigned(2, 0)))
            .is_err());
        assert!(c
            .add_register(Register::new("c", Role::Output, 3, Layout::unsigned(2, 0)))
            .is_err());
    }

    #[test]
    fn compose_examples() {
        let empty = Circuit::new(1);
        let mut x = Circuit::new(1);
        x.push(Gate::x(0)).unwrap();
        let c = empty.compose(&x, &Wiring::identity(1)).unwrap();
        assert_eq!(c.gates(), &[Gate::x(0)]);

        let mut block = Circuit::new(4);
        block.push(Gate::ccx(0, 1, 2)).unwrap();
        block
            .add_register(Register::new("r", Role::Input, 0, Layout::unsigned(4, 0)))
            .unwrap();
        let both = block.compose(&block, &Wiring::fresh(4)).unwrap();
        assert_eq!(both.qubit_count(), 8);
        assert_eq!(both.gates()[1], Gate::ccx(4, 5, 6));

        let mut wiring = Wiring::identity(4);
        wiring.targets[3] = Some(2);
        wiring.targets[2] = Some(2);
        assert!(block.compose(&block, &wiring).is_err());
    }

    #[test]
    fn inverse_of_inverse_is_identity() {
        let mut c = Circuit::new(3);
        c.extend([Gate::x(0), Gate::cx(0, 1), Gate::cswap(2, 0, 1)]).unwrap();
        assert_eq!(c.inverse().inverse(), c);
        assert_eq!(c.inverse().gates()[0], Gate::cswap(2, 0, 1));
    }
}
