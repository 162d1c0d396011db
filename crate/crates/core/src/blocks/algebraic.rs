//! Square, square root and reciprocal.

use super::arith::{add, add_or_sub, copy, decrement_at, sub};
use super::{Builder, GarbagePolicy, QReg, QubitKind, SquareMethod};
use crate::circuit::{Control, Qubit};
use crate::error::{Error, Result};
use crate::fixedpoint::Layout;

/// Out-of-place square of the unsigned bits of `a` into a fresh register:
/// `out = floor(A^2 * 2^scale * 2^(f_out - 2 f_in)) mod 2^w_out`.
pub fn square(
    b: &mut Builder,
    a: &QReg,
    out: Layout,
    scale: i32,
    method: SquareMethod,
    policy: GarbagePolicy,
) -> Result<QReg> {
    let body = |b: &mut Builder| match method {
        SquareMethod::ShiftAdd => square_shift_add(b, a, out, scale),
        SquareMethod::ReversedSqrt => square_reversed_sqrt(b, a, out, scale),
    };
    match policy {
        GarbagePolicy::Garbage => body(b),
        GarbagePolicy::Clean => b.bennett(body),
    }
}

fn dropped_bits(a: &QReg, out: Layout, scale: i32) -> i64 {
    2 * a.layout().frac_bits as i64 - out.frac_bits as i64 - scale as i64
}

fn square_shift_add(b: &mut Builder, a: &QReg, out: Layout, scale: i32) -> Result<QReg> {
    let drop = dropped_bits(a, out, scale);
    let out_reg = b.alloc(out);
    let acc: Vec<Qubit> = if drop >= 0 {
        let mut low = b.alloc_garbage(drop as usize);
        low.extend_from_slice(out_reg.qubits());
        low
    } else {
        let skip = (-drop) as usize;
        out_reg.qubits()[skip.min(out_reg.len())..].to_vec()
    };
    for i in 0..a.len().min(acc.len()) {
        let c = b.ancilla();
        b.cx(a.bit(i), c);
        b.controlled(&[Control::on(c)], |b| add(b, a.qubits(), &acc[i..]));
        b.cx(a.bit(i), c);
        b.release(c);
    }
    Ok(out_reg)
}

fn square_reversed_sqrt(b: &mut Builder, a: &QReg, out: Layout, scale: i32) -> Result<QReg> {
    let drop = dropped_bits(a, out, scale);
    if drop < 0 {
        return Err(Error::config(format!(
            "reversed-sqrt square cannot scale up by 2^{}",
            -drop
        )));
    }
    let k = a.len();
    let rem = b.alloc_garbage(2 * k + 1);
    let root = b.alloc(Layout::unsigned(k as u32, 0));
    copy(b, a.qubits(), root.qubits());
    let mark = b.mark();
    sqrt_core(b, &rem, root.qubits());
    b.invert_tail(mark);
    b.release_all(root.qubits());
    let out_reg = b.alloc(out);
    for j in 0..out_reg.len() {
        let src = drop as usize + j;
        if src < rem.len() {
            b.cx(rem[src], out_reg.bit(j));
        }
    }
    Ok(out_reg)
}

fn set_root_bit(b: &mut Builder, sign: Qubit, bit: Qubit) {
    b.cx(sign, bit);
    b.x(bit);
}

/// Non-restoring integer square root.
///
/// `rem` has `2k + 1` qubits holding a nonnegative radicand `N < 2^(2k)`; the
/// first `k` qubits of `root` must be zero. Afterwards `root = isqrt(N)` and
/// `rem = N - root^2`.
pub fn sqrt_core(b: &mut Builder, rem: &[Qubit], root: &[Qubit]) {
    let k = (rem.len() - 1) / 2;
    assert!(k >= 1 && rem.len() == 2 * k + 1 && root.len() >= k);
    let sign = rem[2 * k];
    decrement_at(b, &rem[2 * (k - 1)..], 0);
    set_root_bit(b, sign, root[k - 1]);
    for i in (0..k - 1).rev() {
        let q_next = root[i + 1];
        let one = b.ancilla();
        b.x(one);
        let not_q = b.ancilla();
        b.cx(q_next, not_q);
        b.x(not_q);
        let mut operand = vec![one, not_q];
        operand.extend_from_slice(&root[i + 1..k]);
        add_or_sub(b, q_next, &operand, &rem[2 * i..]);
        b.x(not_q);
        b.cx(q_next, not_q);
        b.release(not_q);
        b.x(one);
        b.release(one);
        set_root_bit(b, sign, root[i]);
    }
    let one = b.ancilla();
    let zero = b.ancilla();
    b.x(one);
    let mut operand = vec![one, zero];
    operand.extend_from_slice(&root[1..k]);
    b.controlled(&[Control::off(root[0])], |b| add(b, &operand, rem));
    b.x(one);
    b.release(zero);
    b.release(one);
}

/// Square root of the unsigned bits of `a` into a fresh register:
/// `out = isqrt(A * 2^(2 f_out - f_in + scale))`.
///
/// In garbage mode the qubits of `a` end up holding part of the remainder.
pub fn sqrt(b: &mut Builder, a: &QReg, out: Layout, scale: i32, policy: GarbagePolicy) -> Result<QReg> {
    let ext = 2 * out.frac_bits as i64 - a.layout().frac_bits as i64 + scale as i64;
    if ext < 0 {
        return Err(Error::config(format!(
            "square root from {} to {out} with scale {scale} would drop radicand bits",
            a.layout()
        )));
    }
    let body = |b: &mut Builder| {
        let total = ext as usize + a.len();
        let k = total.div_ceil(2).max(1);
        let mut rem = b.alloc_garbage(ext as usize);
        rem.extend_from_slice(a.qubits());
        rem.extend(b.alloc_garbage(2 * k + 1 - total));
        let w_out = out.width() as usize;
        let root = b.alloc(Layout::unsigned(k.max(w_out) as u32, 0));
        sqrt_core(b, &rem, &root.qubits()[..k]);
        if k > w_out {
            b.set_kind(&root.qubits()[w_out..], QubitKind::Garbage);
        }
        root.window(0..w_out, out)
    };
    match policy {
        GarbagePolicy::Garbage => body(b),
        GarbagePolicy::Clean => b.bennett(body),
    }
}

/// Reciprocal of the unsigned bits of `a`: `out = floor(2^(f_in + f_out) / A) mod 2^w_out`.
pub fn reciprocal(b: &mut Builder, a: &QReg, out: Layout, policy: GarbagePolicy) -> Result<QReg> {
    let body = |b: &mut Builder| {
        let p = (a.layout().frac_bits + out.frac_bits) as usize;
        let q = out.width() as usize;
        let width = (p + 1).max(a.len() + q) + 1;
        let rem = b.alloc_garbage(width);
        b.x(rem[p]);
        let quot = b.alloc(out);
        let sign = rem[width - 1];
        for i in (0..q).rev() {
            if i == q - 1 {
                sub(b, a.qubits(), &rem[i..]);
            } else {
                add_or_sub(b, quot.bit(i + 1), a.qubits(), &rem[i..]);
            }
            set_root_bit(b, sign, quot.bit(i));
        }
        Ok(quot)
    };
    match policy {
        GarbagePolicy::Garbage => body(b),
        GarbagePolicy::Clean => b.bennett(body),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{simulate_basis, BasisState, Circuit};
    use crate::fixedpoint::FixedPoint;

    fn run(c: &Circuit, a: &QReg, value: u128) -> BasisState {
        let mut s = BasisState::zeros(c.qubit_count());
        for (j, &q) in a.qubits().iter().enumerate() {
            s.set(q, (value >> j) & 1 == 1);
        }
        simulate_basis(c, &s).unwrap()
    }

    fn read(s: &BasisState, r: &QReg) -> u128 {
        r.qubits()
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &q)| acc | ((s.get(q) as u128) << j))
    }

    fn clean_ancillas_zero(b_kinds: &[(Qubit, QubitKind)], s: &BasisState) -> bool {
        b_kinds
            .iter()
            .filter(|(_, k)| *k == QubitKind::Ancilla)
            .all(|(q, _)| !s.get(*q))
    }

    fn kinds(b: &Builder) -> Vec<(Qubit, QubitKind)> {
        (0..b.qubit_count()).map(|q| (q, b.kind(q))).collect()
    }

    #[test]
    fn sqrt_core_matches_integer_sqrt() {
        for k in 1..=4usize {
            let mut b = Builder::new();
            let rem = b.alloc(Layout::unsigned(2 * k as u32 + 1, 0));
            let root = b.alloc(Layout::unsigned(k as u32, 0));
            sqrt_core(&mut b, rem.qubits(), root.qubits());
            let ks = kinds(&b);
            let c = b.finish(vec![]).unwrap();
            for n in 0..(1u128 << (2 * k)) {
                let s = run(&c, &rem, n);
                let r = (n as f64).sqrt().floor() as u128;
                assert_eq!(read(&s, &root), r, "k={k} n={n}");
                assert_eq!(read(&s, &rem), n - r * r);
                assert!(clean_ancillas_zero(&ks, &s));
            }
        }
    }

    #[test]
    fn square_methods_agree_with_fixed_point() {
        let input = Layout::unsigned(2, 3);
        let outs = [Layout::unsigned(2, 3), Layout::unsigned(4, 3), Layout::unsigned(1, 4)];
        for method in [SquareMethod::ShiftAdd, SquareMethod::ReversedSqrt] {
            for policy in [GarbagePolicy::Garbage, GarbagePolicy::Clean] {
                for out in outs {
                    let mut b = Builder::new();
                    let a = b.alloc(input);
                    let o = square(&mut b, &a, out, 0, method, policy).unwrap();
                    let ks = kinds(&b);
                    let c = b.finish(vec![]).unwrap();
                    for v in 0..32u128 {
                        let s = run(&c, &a, v);
                        let x = FixedPoint::from_bits_raw(v, input);
                        let (want, _) = x.mul_into(&x, 0, out);
                        assert_eq!(read(&s, &o), want.raw_bits(), "{method} {policy} {out} {v}");
                        assert_eq!(read(&s, &a), v);
                        assert!(clean_ancillas_zero(&ks, &s));
                    }
                }
            }
        }
    }

    #[test]
    fn sqrt_block_matches_fixed_point() {
        for (input, out, scale) in [
            (Layout::unsigned(2, 3), Layout::unsigned(2, 3), 0),
            (Layout::unsigned(2, 2), Layout::unsigned(1, 3), -1),
            (Layout::unsigned(3, 1), Layout::unsigned(2, 2), 1),
        ] {
            for policy in [GarbagePolicy::Garbage, GarbagePolicy::Clean] {
                let mut b = Builder::new();
                let a = b.alloc(input);
                let o = sqrt(&mut b, &a, out, scale, policy).unwrap();
                let ks = kinds(&b);
                let c = b.finish(vec![]).unwrap();
                for v in 0..(1u128 << input.width()) {
                    let s = run(&c, &a, v);
                    let x = FixedPoint::from_bits_raw(v, input);
                    match x.sqrt_into(scale, out) {
                        Ok(want) => assert_eq!(read(&s, &o), want.raw_bits(), "{input} {v}"),
                        Err(_) => continue,
                    }
                    if policy == GarbagePolicy::Clean {
                        assert_eq!(read(&s, &a), v);
                    }
                    assert!(clean_ancillas_zero(&ks, &s));
                }
            }
        }
    }

    #[test]
    fn reciprocal_block_matches_fixed_point() {
        let layout = Layout::unsigned(2, 3);
        for policy in [GarbagePolicy::Garbage, GarbagePolicy::Clean] {
            let mut b = Builder::new();
            let a = b.alloc(layout);
            let o = reciprocal(&mut b, &a, layout, policy).unwrap();
            let ks = kinds(&b);
            let c = b.finish(vec![]).unwrap();
            for v in 1..32u128 {
                let want = (1u128 << 6) / v;
                if want >= 32 {
                    continue;
                }
                let s = run(&c, &a, v);
                assert_eq!(read(&s, &o), want, "v={v}");
                assert_eq!(read(&s, &a), v);
                assert!(clean_ancillas_zero(&ks, &s));
            }
        }
    }
}
