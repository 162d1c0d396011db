use proptest::prelude::*;

use fbe_core::blocks::{build_adder, build_shift, AdderVariant, GarbagePolicy, ShiftDirection};
use fbe_core::circuit::{
    export_text, export_text_expanded, import_text, simulate_basis, simulate_sparse, BasisState, Role, SparseState,
    DEFAULT_SPARSE_CAP,
};
use fbe_core::fbe::{
    fbe_expand, ifbe_evaluate, log2_domain_reduce, DigitOrder, DigitString, Dyadic, Function, FunctionSpec, SpecId,
};
use fbe_core::synth::{synthesize, SynthConfig, SynthesizedCircuit};
use fbe_core::{FixedPoint, Layout};

fn function() -> impl Strategy<Value = Function> {
    prop::sample::select(Function::ALL.to_vec())
}

fn policy() -> impl Strategy<Value = GarbagePolicy> {
    prop::sample::select(vec![GarbagePolicy::Garbage, GarbagePolicy::Clean])
}

/// A small valid configuration, or `None` when the widths do not fit the function.
fn small_circuit(f: Function, n: u32, m: u32, p: GarbagePolicy) -> Option<SynthesizedCircuit> {
    synthesize(&SynthConfig::new(f, n, m).with_policy(p)).ok()
}

fn random_state(len: usize, words: &[u64]) -> BasisState {
    let mut s = BasisState::zeros(len);
    for (i, w) in words.iter().enumerate() {
        let start = i * 64;
        if start >= len {
            break;
        }
        let width = (len - start).min(64);
        let mask = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
        s.write(start, width, (w & mask) as u128);
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn text_format_round_trips(f in function(), n in 1u32..4, m in 4u32..8, p in policy()) {
        if let Some(sc) = small_circuit(f, n, m, p) {
            let text = export_text(&sc.circuit);
            let back = import_text(&text).unwrap();
            prop_assert_eq!(&back, &sc.circuit);
            prop_assert_eq!(export_text(&back), text);
        }
    }

    #[test]
    fn expanded_export_computes_the_same_outputs(f in function(), n in 1u32..4, m in 4u32..7, pick in any::<u64>()) {
        if let Some(sc) = small_circuit(f, n, m, GarbagePolicy::Garbage) {
            let inputs = sc.valid_inputs();
            let bits = inputs[(pick % inputs.len() as u64) as usize];
            let lowered = import_text(&export_text_expanded(&sc.circuit)).unwrap();
            prop_assert!(lowered.gates().iter().all(|g| g.controls().iter().all(|c| c.positive)));
            let input = lowered.registers_with_role(Role::Input).next().unwrap().clone();
            let mut s = BasisState::zeros(lowered.qubit_count());
            s.write_register(&input, bits);
            let out = simulate_basis(&lowered, &s).unwrap();
            let want = simulate_basis(&sc.circuit, &sc.encode(bits).unwrap()).unwrap();
            for reg in sc.circuit.registers_with_role(Role::Output) {
                prop_assert_eq!(out.read_register(lowered.register(&reg.name).unwrap()), want.read_register(reg));
            }
        }
    }

    #[test]
    fn inverse_undoes_any_state(f in function(), n in 1u32..4, m in 4u32..8, words in prop::collection::vec(any::<u64>(), 8)) {
        if let Some(sc) = small_circuit(f, n, m, GarbagePolicy::Garbage) {
            let s = random_state(sc.circuit.qubit_count(), &words);
            let out = simulate_basis(&sc.circuit, &s).unwrap();
            prop_assert_eq!(simulate_basis(&sc.circuit.inverse(), &out).unwrap(), s);
        }
    }

    #[test]
    fn sparse_agrees_with_basis(f in function(), n in 1u32..4, m in 4u32..7, pick in any::<u64>()) {
        if let Some(sc) = small_circuit(f, n, m, GarbagePolicy::Clean) {
            let inputs = sc.valid_inputs();
            let s = sc.encode(inputs[(pick % inputs.len() as u64) as usize]).unwrap();
            let basis = simulate_basis(&sc.circuit, &s).unwrap();
            let sparse = simulate_sparse(&sc.circuit, &SparseState::basis(s), DEFAULT_SPARSE_CAP).unwrap();
            let terms = sparse.sorted_terms();
            prop_assert_eq!(terms.len(), 1);
            prop_assert_eq!(&terms[0].0, &basis);
            prop_assert!((terms[0].1.re - 1.0).abs() < 1e-12 && terms[0].1.im.abs() < 1e-12);
        }
    }

    #[test]
    fn circuit_matches_recurrence(f in function(), n in 1u32..6, m in 4u32..10, pick in any::<u64>()) {
        if let Some(sc) = small_circuit(f, n, m, GarbagePolicy::Garbage) {
            let inputs = sc.valid_inputs();
            let bits = inputs[(pick % inputs.len() as u64) as usize];
            prop_assert_eq!(sc.run(bits).unwrap(), sc.classical(bits).unwrap());
        }
    }

    #[test]
    fn controlled_shift_off_is_identity(width in 2u32..10, k in 1u32..9, a in any::<u64>(), left in any::<bool>()) {
        prop_assume!(k < width);
        let dir = if left { ShiftDirection::Left } else { ShiftDirection::Right };
        let c = build_shift(width, dir, k, true).unwrap();
        let reg = c.register("a").unwrap().clone();
        let mut s = BasisState::zeros(c.qubit_count());
        s.write_register(&reg, (a as u128) & ((1 << width) - 1));
        prop_assert_eq!(simulate_basis(&c, &s).unwrap(), s);
    }

    #[test]
    fn digit_strings_lie_in_unit_interval(bits in any::<u64>(), n in 1usize..64) {
        let bits = (bits as u128) & ((1u128 << n) - 1);
        let d = DigitString::from_fraction_bits(bits, n);
        let v = d.to_f64();
        prop_assert!((0.0..1.0).contains(&v));
        prop_assert!(d.digits().iter().all(|&x| x < 2));
        prop_assert_eq!(d.reorder(DigitOrder::MostSignificantFirst).to_bits(), bits);
    }

    #[test]
    fn domain_reduction_normalizes(raw in 1u64..u64::MAX, frac in 0u32..40) {
        let layout = Layout::unsigned(64 - frac, frac);
        let x = FixedPoint::from_scaled(raw as i128, layout);
        let r = log2_domain_reduce(&x).unwrap();
        let y = r.shifted_input.to_f64();
        prop_assert!((1.0..2.0).contains(&y));
        let back = y * (r.exponent() as f64).exp2();
        prop_assert!((back - x.to_f64()).abs() <= x.to_f64() * 1e-15);
    }

    #[test]
    fn log2_then_exp2_recovers_input(raw in 0u64..(1 << 23)) {
        let (m, n) = (24u32, 11usize);
        let log_spec = FunctionSpec::get(SpecId::Log2 { range_exponent: 0 });
        let layout = log_spec.working_layout(m, n as u32).unwrap();
        let y = FixedPoint::from_scaled((1i128 << 23) + raw as i128, layout);
        let d = fbe_expand(&log_spec, &y, n).unwrap();
        let exp = Function::Exp2.spec();
        let back = ifbe_evaluate(&exp, &d.reorder(DigitOrder::LeastSignificantFirst), exp.working_layout(m, n as u32).unwrap())
            .unwrap()
            .value
            .to_f64();
        let q = m - 1;
        let tol = 4.0 * (-(n as f64)).exp2() + (-(q as f64) + 2.0).exp2();
        prop_assert!((back - y.to_f64()).abs() < tol, "{} -> {} -> {}", y.to_f64(), d, back);
    }

    #[test]
    fn arccos_then_cos_recovers_input(raw in -(1i64 << 22)..=(1i64 << 22)) {
        let (m, n) = (24u32, 11usize);
        prop_assume!(raw > -(1i64 << 22));
        let spec = Function::Arccos.spec();
        let layout = spec.working_layout(m, n as u32).unwrap();
        let x = FixedPoint::from_scaled(raw as i128, layout);
        let d = fbe_expand(&spec, &x, n).unwrap();
        let cos = Function::Cos.spec();
        let back = ifbe_evaluate(&cos, &d.reorder(DigitOrder::LeastSignificantFirst), cos.working_layout(m, n as u32).unwrap())
            .unwrap()
            .value
            .to_f64();
        let q = (m - 2) as f64;
        let tol = 4.0 * std::f64::consts::PI * (-(n as f64)).exp2() + ((n as f64).exp2() + 1.0) * (-q).exp2();
        prop_assert!((back - x.to_f64()).abs() < tol, "{} -> {} -> {}", x.to_f64(), d, back);
    }
}

#[test]
fn adder_is_a_permutation() {
    let c = build_adder(4, AdderVariant::Full).unwrap();
    let q = c.qubit_count();
    assert!(q <= 10);
    let mut seen = std::collections::HashSet::new();
    for bits in 0u128..(1 << q) {
        let mut s = BasisState::zeros(q);
        s.write(0, q, bits);
        assert!(seen.insert(simulate_basis(&c, &s).unwrap()));
    }
}

#[test]
fn dyadic_rescale_keeps_value() {
    let d = Dyadic::new(13.into(), 3);
    assert_eq!(d.rescale(10).to_f64(), 13.0 / 8.0);
}
