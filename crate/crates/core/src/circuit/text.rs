//! Line-oriented circuit text format.
//!
//! ```text
//! qubits 5
//! reg RegI0 input 0..3 int_bits 2 frac_bits 2 signed
//! x q[0]
//! cx !q[1],q[4]
//! ccx q[0],q[1],q[4]
//! ```
//!
//! Register ranges are inclusive. `#` starts a comment.

use std::fmt::Write as _;

use super::{Circuit, Control, Gate, Register, Role};
use crate::error::{Error, Result};
use crate::fixedpoint::Layout;

fn operand(c: &Control) -> String {
    format!("{}q[{}]", if c.positive { "" } else { "!" }, c.qubit)
}

fn header(c: &Circuit) -> String {
    let mut out = format!("qubits {}\n", c.qubit_count());
    for r in c.registers() {
        let _ = writeln!(
            out,
            "reg {} {} {}..{} int_bits {} frac_bits {}{}",
            r.name,
            r.role,
            r.start,
            r.end() - 1,
            r.layout.int_bits,
            r.layout.frac_bits,
            if r.layout.signed { " signed" } else { "" }
        );
    }
    out
}

fn gate_line(g: &Gate) -> String {
    match g {
        Gate::H(q) => format!("h q[{q}]"),
        Gate::X { target, controls } => {
            let mnemonic = match controls.len() {
                0 => "x",
                1 => "cx",
                2 => "ccx",
                _ => "mcx",
            };
            let mut ops: Vec<String> = controls.iter().map(operand).collect();
            ops.push(format!("q[{target}]"));
            format!("{mnemonic} {}", ops.join(","))
        }
        Gate::Swap { a, b, control: None } => format!("swap q[{a}],q[{b}]"),
        Gate::Swap { a, b, control: Some(c) } => format!("cswap {},q[{a}],q[{b}]", operand(c)),
    }
}

/// Serializes a circuit, negative controls written with a `!` prefix.
pub fn export_text(c: &Circuit) -> String {
    let mut out = header(c);
    for g in c.gates() {
        out.push_str(&gate_line(g));
        out.push('\n');
    }
    out
}

/// Like [`export_text`] but every negative control is rewritten as a positive
/// control conjugated by X gates, so only positive controls appear.
pub fn export_text_expanded(c: &Circuit) -> String {
    let mut out = header(c);
    for g in c.gates() {
        let negatives: Vec<usize> = g.controls().iter().filter(|c| !c.positive).map(|c| c.qubit).collect();
        for q in &negatives {
            let _ = writeln!(out, "x q[{q}]");
        }
        let positive = match g {
            Gate::X { target, controls } => Gate::X {
                target: *target,
                controls: controls.iter().map(|c| Control::on(c.qubit)).collect(),
            },
            Gate::Swap { a, b, control } => Gate::Swap {
                a: *a,
                b: *b,
                control: control.map(|c| Control::on(c.qubit)),
            },
            Gate::H(q) => Gate::H(*q),
        };
        out.push_str(&gate_line(&positive));
        out.push('\n');
        for q in &negatives {
            let _ = writeln!(out, "x q[{q}]");
        }
    }
    out
}

fn parse_qubit(tok: &str, line: usize) -> Result<Control> {
    let (positive, body) = match tok.strip_prefix('!') {
        Some(rest) => (false, rest),
        None => (true, tok),
    };
    let idx = body
        .strip_prefix("q[")
        .and_then(|s| s.strip_suffix(']'))
        .and_then(|s| s.parse::<usize>().ok())
        .ok_or_else(|| Error::parse(line, format!("expected q[<index>], found '{tok}'")))?;
    Ok(Control { qubit: idx, positive })
}

fn plain(c: Control, line: usize) -> Result<usize> {
    if c.positive {
        Ok(c.qubit)
    } else {
        Err(Error::parse(line, format!("q[{}] cannot be negated here", c.qubit)))
    }
}

fn parse_gate(mnemonic: &str, args: &str, line: usize) -> Result<Gate> {
    let ops = args
        .split(',')
        .map(|t| parse_qubit(t.trim(), line))
        .collect::<Result<Vec<_>>>()?;
    let arity = |want: usize| -> Result<()> {
        if ops.len() == want {
            Ok(())
        } else {
            Err(Error::parse(
                line,
                format!("{mnemonic} takes {want} operands, found {}", ops.len()),
            ))
        }
    };
    let gate = match mnemonic {
        "h" => {
            arity(1)?;
            Gate::H(plain(ops[0], line)?)
        }
        "x" | "cx" | "ccx" => {
            arity(match mnemonic {
                "x" => 1,
                "cx" => 2,
                _ => 3,
            })?;
            let (target, controls) = ops.split_last().expect("arity checked");
            Gate::X {
                target: plain(*target, line)?,
                controls: controls.to_vec(),
            }
        }
        "mcx" => {
            if ops.len() < 2 {
                return Err(Error::parse(line, "mcx needs at least one control"));
            }
            let (target, controls) = ops.split_last().expect("non-empty");
            Gate::X {
                target: plain(*target, line)?,
                controls: controls.to_vec(),
            }
        }
        "swap" => {
            arity(2)?;
            Gate::Swap {
                a: plain(ops[0], line)?,
                b: plain(ops[1], line)?,
                control: None,
            }
        }
        "cswap" => {
            arity(3)?;
            Gate::Swap {
                a: plain(ops[1], line)?,
                b: plain(ops[2], line)?,
                control: Some(ops[0]),
            }
        }
        other => return Err(Error::parse(line, format!("unknown gate '{other}'"))),
    };
    Ok(gate)
}

fn parse_register(tokens: &[&str], line: usize) -> Result<Register> {
    let bad = || Error::parse(line, "expected: reg NAME ROLE i..j int_bits F frac_bits G [signed]");
    if !(tokens.len() == 8 || tokens.len() == 9) || tokens[4] != "int_bits" || tokens[6] != "frac_bits" {
        return Err(bad());
    }
    let role = Role::parse(tokens[2]).ok_or_else(|| Error::parse(line, format!("unknown role '{}'", tokens[2])))?;
    let (lo, hi) = tokens[3].split_once("..").ok_or_else(bad)?;
    let lo: usize = lo.parse().map_err(|_| bad())?;
    let hi: usize = hi.parse().map_err(|_| bad())?;
    let int_bits: u32 = tokens[5].parse().map_err(|_| bad())?;
    let frac_bits: u32 = tokens[7].parse().map_err(|_| bad())?;
    let signed = match tokens.get(8) {
        None => false,
        Some(&"signed") => true,
        Some(_) => return Err(bad()),
    };
    if hi < lo || (hi - lo + 1) as u32 != int_bits + frac_bits {
        return Err(Error::parse(
            line,
            format!("range {lo}..{hi} does not match int_bits {int_bits} + frac_bits {frac_bits}"),
        ));
    }
    let layout = Layout {
        int_bits,
        frac_bits,
        signed,
    };
    Ok(Register::new(tokens[1], role, lo, layout))
}

/// Parses the text format; errors carry the 1-based line number.
pub fn import_text(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens[0] {
            "qubits" => {
                if circuit.is_some() {
                    return Err(Error::parse(line, "duplicate qubits header"));
                }
                let n = tokens
                    .get(1)
                    .and_then(|t| t.parse::<usize>().ok())
                    .filter(|_| tokens.len() == 2)
                    .ok_or_else(|| Error::parse(line, "expected: qubits N"))?;
                circuit = Some(Circuit::new(n));
            }
            kw => {
                let c = circuit
                    .as_mut()
                    .ok_or_else(|| Error::parse(line, "missing 'qubits N' header"))?;
                if kw == "reg" {
                    let reg = parse_register(&tokens, line)?;
                    c.add_register(reg).map_err(|e| Error::parse(line, e.to_string()))?;
                } else {
                    let args = content[kw.len()..].trim();
                    if args.is_empty() {
                        return Err(Error::parse(line, format!("{kw} without operands")));
                    }
                    let gate = parse_gate(kw, &args.replace(' ', ""), line)?;
                    c.push(gate).map_err(|e| Error::parse(line, e.to_string()))?;
                }
            }
        }
    }
    circuit.ok_or_else(|| Error::parse(1, "missing 'qubits N' header"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{simulate_basis, BasisState};

    #[test]
    fn x_gate_line() {
        let mut c = Circuit::new(1);
        c.push(Gate::x(0)).unwrap();
        assert_eq!(export_text(&c), "qubits 1\nx q[0]\n");
    }

    #[test]
    fn round_trip_with_registers_and_negative_controls() {
        let mut c = Circuit::new(6);
        c.add_register(Register::new("RegI0", Role::Input, 0, Layout::signed(2, 2)))
            .unwrap();
        c.add_register(Register::new("RegO", Role::Output, 4, Layout::unsigned(0, 2)))
            .unwrap();
        c.extend([
            Gate::x(0),
            Gate::mcx(vec![Control::off(1)], 4),
            Gate::ccx(0, 1, 5),
            Gate::mcx(vec![Control::on(0), Control::off(1), Control::on(2)], 3),
            Gate::swap(0, 1),
            Gate::Swap {
                a: 2,
                b: 3,
                control: Some(Control::off(5)),
            },
            Gate::H(5),
        ])
        .unwrap();
        let text = export_text(&c);
        assert!(text.contains("reg RegI0 input 0..3 int_bits 2 frac_bits 2 signed"));
        assert!(text.contains("cx !q[1],q[4]"));
        assert_eq!(import_text(&text).unwrap(), c);
    }

    #[test]
    fn expanded_export_is_equivalent() {
        let mut c = Circuit::new(3);
        c.extend([Gate::mcx(vec![Control::off(0), Control::on(1)], 2)]).unwrap();
        let expanded = import_text(&export_text_expanded(&c)).unwrap();
        assert!(expanded.gates().iter().all(|g| g.controls().iter().all(|c| c.positive)));
        for v in 0..8u128 {
            let mut s = BasisState::zeros(3);
            s.write(0, 3, v);
            assert_eq!(simulate_basis(&c, &s).unwrap(), simulate_basis(&expanded, &s).unwrap());
        }
    }

    #[test]
    fn malformed_lines_report_their_line() {
        let err = import_text("qubits 3\nx q[0]\nccx q[0]\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 3,
                message: "ccx takes 3 operands, found 1".into()
            }
        );
        assert!(matches!(import_text("x q[0]"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            import_text("qubits 2\nfoo q[0]"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            import_text("qubits 2\ncx q[0],q[5]"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            import_text("qubits 4\nreg a input 0..2 int_bits 1 frac_bits 1"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
