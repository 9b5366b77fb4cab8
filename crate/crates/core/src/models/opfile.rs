//! Plain-text operator files.
//!
//! ```text
//! # comment
//! qubits 2
//! 0.5 XX
//! -0.25 ZI
//! ```
//!
//! A `modes N` header switches to fermionic terms: a coefficient followed by
//! ladder tokens, `3^` creating and `3` annihilating mode 3. Fermionic
//! coefficients may be complex, written `(re,im)`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::models::fermion::{FermionOperator, Ladder};
use crate::pauli::{PauliString, PauliSum};

#[derive(Clone, Debug, PartialEq)]
pub enum OperatorFile {
    Qubit(PauliSum),
    Fermion(FermionOperator),
}

fn parse_error(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_real(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok.parse().map_err(|_| parse_error(line, format!("bad number '{tok}'")))?;
    if !v.is_finite() {
        return Err(parse_error(line, format!("non-finite number '{tok}'")));
    }
    Ok(v)
}

fn parse_complex(tok: &str, line: usize) -> Result<C64> {
    match tok.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        Some(inner) => {
            let (re, im) = inner.split_once(',').ok_or_else(|| parse_error(line, format!("bad complex '{tok}'")))?;
            Ok(C64::new(parse_real(re.trim(), line)?, parse_real(im.trim(), line)?))
        }
        None => Ok(C64::new(parse_real(tok, line)?, 0.0)),
    }
}

pub fn parse_operator(text: &str) -> Result<OperatorFile> {
    let mut out: Option<OperatorFile> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").replace('\u{2212}', "-");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let Some(op) = out.as_mut() else {
            let (kind, size) = match tokens.as_slice() {
                [kind, size] => (*kind, *size),
                _ => return Err(parse_error(line, "expected header 'qubits N' or 'modes N'")),
            };
            let n: usize = size.parse().map_err(|_| parse_error(line, format!("bad size '{size}'")))?;
            out = Some(match kind {
                "qubits" => OperatorFile::Qubit(PauliSum::new(n)),
                "modes" => OperatorFile::Fermion(FermionOperator::new(n)),
                other => return Err(parse_error(line, format!("unknown header '{other}'"))),
            });
            continue;
        };
        match op {
            OperatorFile::Qubit(h) => {
                let [coeff, letters] = tokens.as_slice() else {
                    return Err(parse_error(line, "expected '<coefficient> <pauli letters>'"));
                };
                let c = parse_real(coeff, line)?;
                let p: PauliString = letters.parse().map_err(|_| parse_error(line, format!("bad Pauli string '{letters}'")))?;
                if p.num_qubits() != h.num_qubits() {
                    return Err(parse_error(
                        line,
                        format!("term acts on {} qubits, header declares {}", p.num_qubits(), h.num_qubits()),
                    ));
                }
                h.add_term(p, c).map_err(|e| parse_error(line, e.to_string()))?;
            }
            OperatorFile::Fermion(f) => {
                let c = parse_complex(tokens[0], line)?;
                let mut ops = Vec::with_capacity(tokens.len() - 1);
                for tok in &tokens[1..] {
                    let (digits, dagger) = match tok.strip_suffix('^') {
                        Some(d) => (d, true),
                        None => (*tok, false),
                    };
                    let mode: usize = digits.parse().map_err(|_| parse_error(line, format!("bad ladder token '{tok}'")))?;
                    ops.push(Ladder { mode, dagger });
                }
                f.add_term(ops, c).map_err(|e| parse_error(line, e.to_string()))?;
            }
        }
    }
    out.ok_or_else(|| parse_error(0, "missing header"))
}

pub fn load_operator_file(path: &Path) -> Result<OperatorFile> {
    parse_operator(&std::fs::read_to_string(path)?)
}

pub fn write_pauli_sum(h: &PauliSum) -> String {
    let mut s = format!("qubits {}\n", h.num_qubits());
    for (p, c) in h.terms() {
        writeln!(s, "{c:?} {p}").expect("writing to a String");
    }
    s
}

pub fn write_fermion(f: &FermionOperator) -> String {
    let mut s = format!("modes {}\n", f.modes());
    for (ops, c) in f.terms() {
        if c.im == 0.0 {
            write!(s, "{:?}", c.re).expect("writing to a String");
        } else {
            write!(s, "({:?},{:?})", c.re, c.im).expect("writing to a String");
        }
        for l in ops {
            write!(s, " {}{}", l.mode, if l.dagger { "^" } else { "" }).expect("writing to a String");
        }
        s.push('\n');
    }
    s
}

pub fn write_operator(op: &OperatorFile) -> String {
    match op {
        OperatorFile::Qubit(h) => write_pauli_sum(h),
        OperatorFile::Fermion(f) => write_fermion(f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reads_qubit_terms() {
        let OperatorFile::Qubit(h) = parse_operator("qubits 2\n0.5 XX\n0.5 ZI\n").unwrap() else { panic!() };
        assert_eq!(h.len(), 2);
        assert_eq!(h.coefficient(&"ZI".parse().unwrap()), 0.5);
    }

    #[test]
    fn reads_fermion_terms_with_unicode_minus() {
        let text = "# hopping\nmodes 2\n\u{2212}2.0 1^ 0\n(0.5,-1) 0^ 1 # complex\n";
        let OperatorFile::Fermion(f) = parse_operator(text).unwrap() else { panic!() };
        let terms: Vec<_> = f.terms().collect();
        assert_eq!(terms.len(), 2);
        let hop = vec![Ladder::create(1), Ladder::annihilate(0)];
        assert!(terms.iter().any(|(ops, c)| **ops == hop && *c == C64::new(-2.0, 0.0)));
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_operator("qubits 2\n0.5 XX\n0.5 XYZ\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        assert!(matches!(parse_operator("qubits 2\nabc XX\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_operator("modes 2\n1.0 2^\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_operator("spins 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(parse_operator("# nothing\n").is_err());
    }

    fn pauli_sum(n: usize) -> impl Strategy<Value = PauliSum> {
        let letter = prop_oneof![Just('I'), Just('X'), Just('Y'), Just('Z')];
        let term = (proptest::collection::vec(letter, n), -10.0f64..10.0);
        proptest::collection::vec(term, 50).prop_map(move |terms| {
            let mut h = PauliSum::new(n);
            for (letters, c) in terms {
                let s: String = letters.into_iter().collect();
                h.add_term(s.parse().unwrap(), c).unwrap();
            }
            h
        })
    }

    proptest! {
        #[test]
        fn pauli_sums_round_trip(h in pauli_sum(5)) {
            let OperatorFile::Qubit(back) = parse_operator(&write_pauli_sum(&h)).unwrap() else { panic!() };
            prop_assert_eq!(back, h);
        }

        #[test]
        fn fermion_operators_round_trip(
            terms in proptest::collection::vec(
                (proptest::collection::vec((0usize..4, any::<bool>()), 0..5), -5.0f64..5.0, -5.0f64..5.0),
                1..30,
            )
        ) {
            let mut f = FermionOperator::new(4);
            for (ops, re, im) in terms {
                let ops = ops.into_iter().map(|(mode, dagger)| Ladder { mode, dagger }).collect();
                f.add_term(ops, C64::new(re, im)).unwrap();
            }
            let OperatorFile::Fermion(back) = parse_operator(&write_fermion(&f)).unwrap() else { panic!() };
            prop_assert_eq!(back, f);
        }
    }
}
