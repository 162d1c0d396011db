use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;

use super::{Circuit, Control, Gate, Qubit, Register};
use crate::error::{Error, Result};

/// Default limit on the number of terms a [`SparseState`] may hold.
pub const DEFAULT_SPARSE_CAP: usize = 1 << 20;

/// A computational-basis state as a packed bit vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BasisState {
    words: Vec<u64>,
    len: usize,
}

impl BasisState {
    pub fn zeros(len: usize) -> Self {
        BasisState {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, q: Qubit) -> bool {
        (self.words[q >> 6] >> (q & 63)) & 1 == 1
    }

    #[inline]
    pub fn flip(&mut self, q: Qubit) {
        self.words[q >> 6] ^= 1 << (q & 63);
    }

    pub fn set(&mut self, q: Qubit, value: bool) {
        if self.get(q) != value {
            self.flip(q);
        }
    }

    /// Reads `len <= 128` qubits starting at `start`, LSB first.
    pub fn read(&self, start: Qubit, len: usize) -> u128 {
        assert!(len <= 128, "cannot read {len} qubits into a u128");
        (0..len).fold(0u128, |acc, k| acc | ((self.get(start + k) as u128) << k))
    }

    pub fn write(&mut self, start: Qubit, len: usize, value: u128) {
        assert!(len <= 128, "cannot write {len} qubits from a u128");
        for k in 0..len {
            self.set(start + k, (value >> k) & 1 == 1);
        }
    }

    pub fn read_register(&self, reg: &Register) -> u128 {
        self.read(reg.start, reg.len)
    }

    pub fn write_register(&mut self, reg: &Register, value: u128) {
        self.write(reg.start, reg.len, value)
    }

    /// True when every qubit in `range` is zero.
    pub fn is_zero_in(&self, range: std::ops::Range<Qubit>) -> bool {
        range.into_iter().all(|q| !self.get(q))
    }

    #[inline]
    fn controls_fire(&self, controls: &[Control]) -> bool {
        controls.iter().all(|c| self.get(c.qubit) == c.positive)
    }

    /// Applies one permutation gate; `H` is rejected.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        match gate {
            Gate::X { target, controls } => {
                if self.controls_fire(controls) {
                    self.flip(*target);
                }
            }
            Gate::Swap { a, b, control } => {
                let fire = control.is_none_or(|c| self.get(c.qubit) == c.positive);
                if fire && self.get(*a) != self.get(*b) {
                    self.flip(*a);
                    self.flip(*b);
                }
            }
            Gate::H(q) => {
                return Err(Error::Mode(format!(
                    "H on qubit {q} needs sparse simulation, not basis simulation"
                )))
            }
        }
        Ok(())
    }
}

/// Bit string with qubit 0 leftmost.
impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.len {
            f.write_str(if self.get(q) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{self}>")
    }
}

/// Runs an H-free circuit as a permutation of basis states.
pub fn simulate_basis(circuit: &Circuit, input: &BasisState) -> Result<BasisState> {
    if input.len() != circuit.qubit_count() {
        return Err(Error::config(format!(
            "state has {} qubits, circuit has {}",
            input.len(),
            circuit.qubit_count()
        )));
    }
    let mut state = input.clone();
    for gate in circuit.gates() {
        state.apply(gate)?;
    }
    Ok(state)
}

/// A superposition stored as basis terms with complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseState {
    qubits: usize,
    terms: HashMap<BasisState, Complex64>,
}

impl SparseState {
    pub fn basis(state: BasisState) -> Self {
        let qubits = state.len();
        let mut terms = HashMap::new();
        terms.insert(state, Complex64::new(1.0, 0.0));
        SparseState { qubits, terms }
    }

    /// Equal-weight superposition of distinct basis states.
    pub fn uniform(states: impl IntoIterator<Item = BasisState>) -> Result<Self> {
        let mut terms: HashMap<BasisState, Complex64> = HashMap::new();
        let mut qubits = None;
        for s in states {
            if *qubits.get_or_insert(s.len()) != s.len() {
                return Err(Error::config("basis states of different widths"));
            }
            terms.insert(s, Complex64::new(1.0, 0.0));
        }
        let qubits = qubits.ok_or_else(|| Error::config("empty superposition"))?;
        let amp = 1.0 / (terms.len() as f64).sqrt();
        for v in terms.values_mut() {
            *v = Complex64::new(amp, 0.0);
        }
        Ok(SparseState { qubits, terms })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, state: &BasisState) -> Complex64 {
        self.terms.get(state).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisState, &Complex64)> {
        self.terms.iter()
    }

    /// Terms sorted by their bit string, for stable output.
    pub fn sorted_terms(&self) -> Vec<(BasisState, Complex64)> {
        let mut v: Vec<_> = self.terms.iter().map(|(k, a)| (k.clone(), *a)).collect();
        v.sort_by_key(|(k, _)| k.to_string());
        v
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }
}

/// Applies every gate to every term; H splits terms and merges collisions.
pub fn simulate_sparse(circuit: &Circuit, input: &SparseState, cap: usize) -> Result<SparseState> {
    if input.qubits != circuit.qubit_count() {
        return Err(Error::config(format!(
            "state has {} qubits, circuit has {}",
            input.qubits,
            circuit.qubit_count()
        )));
    }
    let mut terms = input.terms.clone();
    let amp = std::f64::consts::FRAC_1_SQRT_2;
    for gate in circuit.gates() {
        match gate {
            Gate::H(q) => {
                let mut next: HashMap<BasisState, Complex64> = HashMap::with_capacity(terms.len() * 2);
                for (state, a) in terms {
                    let sign = if state.get(*q) { -1.0 } else { 1.0 };
                    let mut flipped = state.clone();
                    flipped.flip(*q);
                    let (zero, one) = if state.get(*q) {
                        (flipped, state)
                    } else {
                        (state, flipped)
                    };
                    *next.entry(zero).or_default() += a * amp;
                    *next.entry(one).or_default() += a * (amp * sign);
                }
                next.retain(|_, a| a.norm_sqr() > 1e-24);
                if next.len() > cap {
                    return Err(Error::Resource(format!(
                        "sparse state grew to {} terms, cap is {cap}",
                        next.len()
                    )));
                }
                terms = next;
            }
            _ => {
                let mut next = HashMap::with_capacity(terms.len());
                for (mut state, a) in terms {
                    state.apply(gate)?;
                    next.insert(state, a);
                }
                terms = next;
            }
        }
    }
    Ok(SparseState {
        qubits: input.qubits,
        terms,
    })
}
