use std::collections::BTreeMap;
use std::fmt;

use super::{Circuit, Gate, GateKind, Role};

/// Gate tallies after lowering to {X, CNOT, TOFFOLI, H}.
///
/// An MCX with `k >= 3` controls counts as `2k - 3` Toffolis using `k - 2`
/// clean ancillas; CSWAP is two CNOTs around a Toffoli; SWAP is three CNOTs;
/// each negative control adds two X gates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecomposedCounts {
    pub x: usize,
    pub cnot: usize,
    pub toffoli: usize,
    pub h: usize,
    /// Extra clean qubits the MCX lowering needs at its widest point.
    pub extra_ancillas: usize,
}

impl DecomposedCounts {
    pub fn total(&self) -> usize {
        self.x + self.cnot + self.toffoli + self.h
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResourceReport {
    pub qubits: usize,
    /// Qubits in ancilla or garbage registers.
    pub ancilla_qubits: usize,
    pub garbage_qubits: usize,
    pub raw: BTreeMap<GateKind, usize>,
    pub negative_controls: usize,
    pub decomposed: DecomposedCounts,
}

impl ResourceReport {
    pub fn raw_total(&self) -> usize {
        self.raw.values().sum()
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.raw.get(&kind).copied().unwrap_or(0)
    }
}

impl fmt::Display for ResourceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "qubits {} (ancilla {}, garbage {})",
            self.qubits, self.ancilla_qubits, self.garbage_qubits
        )?;
        let raw: Vec<String> = self.raw.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        writeln!(f, "raw gates {} [{}]", self.raw_total(), raw.join(" "))?;
        writeln!(f, "negative controls {}", self.negative_controls)?;
        let d = &self.decomposed;
        write!(
            f,
            "basic gates {} [X:{} CNOT:{} TOFFOLI:{} H:{}] (+{} lowering ancillas)",
            d.total(),
            d.x,
            d.cnot,
            d.toffoli,
            d.h,
            d.extra_ancillas
        )
    }
}

pub fn resource_count(c: &Circuit) -> ResourceReport {
    let mut r = ResourceReport {
        qubits: c.qubit_count(),
        ..Default::default()
    };
    for reg in c.registers() {
        match reg.role {
            Role::Ancilla => r.ancilla_qubits += reg.len,
            Role::Garbage => r.garbage_qubits += reg.len,
            _ => {}
        }
    }
    r.ancilla_qubits += r.garbage_qubits;
    let d = &mut r.decomposed;
    for g in c.gates() {
        *r.raw.entry(g.kind()).or_default() += 1;
        let neg = g.controls().iter().filter(|c| !c.positive).count();
        r.negative_controls += neg;
        d.x += 2 * neg;
        match g {
            Gate::H(_) => d.h += 1,
            Gate::X { controls, .. } => match controls.len() {
                0 => d.x += 1,
                1 => d.cnot += 1,
                2 => d.toffoli += 1,
                k => {
                    d.toffoli += 2 * k - 3;
                    d.extra_ancillas = d.extra_ancillas.max(k - 2);
                }
            },
            Gate::Swap { control: None, .. } => d.cnot += 3,
            Gate::Swap { control: Some(_), .. } => {
                d.cnot += 2;
                d.toffoli += 1;
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Control, Gate};

    #[test]
    fn empty_circuit_counts_nothing() {
        let r = resource_count(&Circuit::new(0));
        assert_eq!(r.raw_total(), 0);
        assert_eq!(r.decomposed.total(), 0);
        assert_eq!(r.qubits, 0);
    }

    #[test]
    fn single_toffoli() {
        let mut c = Circuit::new(3);
        c.push(Gate::ccx(0, 1, 2)).unwrap();
        let r = resource_count(&c);
        assert_eq!(r.count(GateKind::Toffoli), 1);
        assert_eq!(r.raw_total(), 1);
        assert_eq!(r.qubits, 3);
    }

    #[test]
    fn mcx_lowering_estimate() {
        let mut c = Circuit::new(6);
        c.push(Gate::mcx(
            (0..5)
                .map(|q| if q == 2 { Control::off(q) } else { Control::on(q) })
                .collect(),
            5,
        ))
        .unwrap();
        c.push(Gate::cswap(0, 1, 2)).unwrap();
        let r = resource_count(&c);
        assert_eq!(r.decomposed.toffoli, 7 + 1);
        assert_eq!(r.decomposed.cnot, 2);
        assert_eq!(r.decomposed.x, 2);
        assert_eq!(r.decomposed.extra_ancillas, 3);
        assert_eq!(r.negative_controls, 1);
    }
}
