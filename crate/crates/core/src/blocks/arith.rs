//! Adders, increments, negation, rotations.

use super::{Builder, QReg};
use crate::circuit::{Control, Qubit};

fn maj(b: &mut Builder, x: Qubit, y: Qubit, z: Qubit) {
    b.cx(z, y);
    b.cx(z, x);
    b.ccx(x, y, z);
}

fn uma(b: &mut Builder, x: Qubit, y: Qubit, z: Qubit) {
    b.ccx(x, y, z);
    b.cx(z, x);
    b.cx(x, y);
}

/// `target += addend (mod 2^len(target))` by a ripple-carry adder with one carry
/// ancilla. A shorter addend is zero-extended from the pool; a longer one is cut.
pub fn add(b: &mut Builder, addend: &[Qubit], target: &[Qubit]) {
    let n = target.len();
    if n == 0 {
        return;
    }
    let mut a: Vec<Qubit> = addend.iter().take(n).copied().collect();
    let pads = b.ancillas(n - a.len());
    a.extend(&pads);
    let carry = b.ancilla();
    maj(b, carry, target[0], a[0]);
    for i in 1..n {
        maj(b, a[i - 1], target[i], a[i]);
    }
    for i in (1..n).rev() {
        uma(b, a[i - 1], target[i], a[i]);
    }
    uma(b, carry, target[0], a[0]);
    b.release(carry);
    b.release_all(&pads);
}

/// `target -= subtrahend` as `~(~target + subtrahend)`.
pub fn sub(b: &mut Builder, subtrahend: &[Qubit], target: &[Qubit]) {
    for &t in target {
        b.x(t);
    }
    add(b, subtrahend, target);
    for &t in target {
        b.x(t);
    }
}

/// `target = ctrl ? target - addend : target + addend`.
///
/// `ctrl` may be one of the addend qubits; it must not be in `target`.
pub fn add_or_sub(b: &mut Builder, ctrl: Qubit, addend: &[Qubit], target: &[Qubit]) {
    for &t in target {
        b.cx(ctrl, t);
    }
    add(b, addend, target);
    for &t in target {
        b.cx(ctrl, t);
    }
}

/// Adds `2^pos` with a cascade of multi-controlled X gates, top bit first.
pub fn increment_at(b: &mut Builder, target: &[Qubit], pos: usize) {
    for k in (pos..target.len()).rev() {
        let controls: Vec<Control> = target[pos..k].iter().map(|&q| Control::on(q)).collect();
        b.mcx(&controls, target[k]);
    }
}

/// Subtracts `2^pos`; the gates of [`increment_at`] in reverse.
pub fn decrement_at(b: &mut Builder, target: &[Qubit], pos: usize) {
    for k in pos..target.len() {
        let controls: Vec<Control> = target[pos..k].iter().map(|&q| Control::on(q)).collect();
        b.mcx(&controls, target[k]);
    }
}

/// Two's-complement negation in place.
pub fn negate(b: &mut Builder, target: &[Qubit]) {
    for &t in target {
        b.x(t);
    }
    increment_at(b, target, 0);
}

/// Bit `j + k` moves to bit `j` (cyclically).
pub fn rotate_right(b: &mut Builder, target: &[Qubit], k: usize) {
    for _ in 0..k {
        for j in 0..target.len().saturating_sub(1) {
            b.swap(target[j], target[j + 1]);
        }
    }
}

/// Bit `j` moves to bit `j + k` (cyclically).
pub fn rotate_left(b: &mut Builder, target: &[Qubit], k: usize) {
    for _ in 0..k {
        for j in (0..target.len().saturating_sub(1)).rev() {
            b.swap(target[j], target[j + 1]);
        }
    }
}

/// CNOT copy of `src` onto zeroed `dst`.
pub fn copy(b: &mut Builder, src: &[Qubit], dst: &[Qubit]) {
    for (&s, &d) in src.iter().zip(dst) {
        b.cx(s, d);
    }
}

/// Flips `flag` when every qubit of `reg` is zero.
pub fn zero_test(b: &mut Builder, reg: &[Qubit], flag: Qubit) {
    let controls: Vec<Control> = reg.iter().map(|&q| Control::off(q)).collect();
    b.mcx(&controls, flag);
}

/// In-place `|a| -> |abs(a)>`; returns the garbage qubit holding the old sign.
pub fn absolute(b: &mut Builder, reg: &QReg) -> Qubit {
    let sign = b.alloc_garbage(1)[0];
    b.cx(reg.msb(), sign);
    b.controlled(&[Control::on(sign)], |b| negate(b, reg.qubits()));
    sign
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{simulate_basis, BasisState, Circuit};
    use crate::fixedpoint::Layout;

    fn run(c: &Circuit, writes: &[(usize, usize, u128)]) -> BasisState {
        let mut s = BasisState::zeros(c.qubit_count());
        for &(start, len, v) in writes {
            s.write(start, len, v);
        }
        simulate_basis(c, &s).unwrap()
    }

    #[test]
    fn adder_exhaustive_width_4() {
        let mut b = Builder::new();
        let x = b.alloc(Layout::unsigned(4, 0));
        let y = b.alloc(Layout::unsigned(4, 0));
        add(&mut b, x.qubits(), y.qubits());
        let c = b.finish(vec![]).unwrap();
        for p in 0..16u128 {
            for q in 0..16u128 {
                let s = run(&c, &[(0, 4, p), (4, 4, q)]);
                assert_eq!(s.read(0, 4), p);
                assert_eq!(s.read(4, 4), (p + q) % 16);
                assert!(s.is_zero_in(8..c.qubit_count()));
            }
        }
    }

    #[test]
    fn short_addend_and_add_or_sub() {
        let mut b = Builder::new();
        let x = b.alloc(Layout::unsigned(2, 0));
        let y = b.alloc(Layout::unsigned(5, 0));
        let c0 = b.alloc(Layout::unsigned(1, 0));
        add_or_sub(&mut b, c0.bit(0), x.qubits(), y.qubits());
        let c = b.finish(vec![]).unwrap();
        for p in 0..4u128 {
            for q in 0..32u128 {
                for ctl in 0..2u128 {
                    let s = run(&c, &[(0, 2, p), (2, 5, q), (7, 1, ctl)]);
                    let want = if ctl == 1 { (q + 32 - p) % 32 } else { (q + p) % 32 };
                    assert_eq!(s.read(2, 5), want);
                    assert!(s.is_zero_in(8..c.qubit_count()));
                }
            }
        }
    }

    #[test]
    fn increments_rotations_and_negation() {
        let w = 5;
        for pos in 0..w {
            let mut b = Builder::new();
            let r = b.alloc(Layout::unsigned(w as u32, 0));
            increment_at(&mut b, r.qubits(), pos);
            let inc = b.finish(vec![]).unwrap();
            let mut b = Builder::new();
            let r = b.alloc(Layout::unsigned(w as u32, 0));
            decrement_at(&mut b, r.qubits(), pos);
            let dec = b.finish(vec![]).unwrap();
            for v in 0..32u128 {
                assert_eq!(run(&inc, &[(0, w, v)]).read(0, w), (v + (1 << pos)) % 32);
                assert_eq!(run(&dec, &[(0, w, v)]).read(0, w), (v + 32 - (1 << pos)) % 32);
            }
        }
        let mut b = Builder::new();
        let r = b.alloc(Layout::unsigned(4, 0));
        rotate_right(&mut b, r.qubits(), 1);
        let c = b.finish(vec![]).unwrap();
        assert_eq!(run(&c, &[(0, 4, 0b0100)]).read(0, 4), 0b0010);
        assert_eq!(run(&c, &[(0, 4, 0b0001)]).read(0, 4), 0b1000);

        let mut b = Builder::new();
        let r = b.alloc(Layout::unsigned(4, 0));
        rotate_left(&mut b, r.qubits(), 3);
        let c = b.finish(vec![]).unwrap();
        assert_eq!(run(&c, &[(0, 4, 0b0001)]).read(0, 4), 0b1000);

        let mut b = Builder::new();
        let r = b.alloc(Layout::unsigned(4, 0));
        negate(&mut b, r.qubits());
        let c = b.finish(vec![]).unwrap();
        for v in 0..16u128 {
            assert_eq!(run(&c, &[(0, 4, v)]).read(0, 4), (16 - v) % 16);
        }
    }

    #[test]
    fn absolute_value_leaves_sign_copy() {
        let mut b = Builder::new();
        let r = b.alloc(Layout::signed(2, 2));
        let sign = absolute(&mut b, &r);
        let c = b.finish(vec![]).unwrap();
        for v in 0..16u128 {
            let s = run(&c, &[(0, 4, v)]);
            let signed = if v >= 8 { v as i128 - 16 } else { v as i128 };
            assert_eq!(s.read(0, 4), (signed.unsigned_abs() % 16));
            assert_eq!(s.get(sign), v >= 8);
        }
    }
}
