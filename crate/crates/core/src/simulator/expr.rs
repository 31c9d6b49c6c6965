// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Operator expressions such as `2*pi*0.05e6*ZX - 0.5*j*IY`.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := number | 'pi' | 'j' | pauli-string
//! ```
//!
//! Pauli strings must have one letter per qubit, highest qubit first.
//! Division is only allowed by scalars. A term without a Pauli string is a
//! multiple of the identity.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{identity, pauli_string, CMatrix};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Pi,
    J,
    Pauli(String),
    Plus,
    Minus,
    Star,
    Slash,
}

fn err(column: usize, message: impl Into<String>) -> Error {
    Error::Expression {
        column,
        message: message.into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        let col = i + 1;
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push((col, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((col, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((col, Tok::Star));
                i += 1;
            }
            '/' => {
                out.push((col, Tok::Slash));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                    i += 1;
                }
                if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                    let mut k = i + 1;
                    if k < b.len() && (b[k] == b'+' || b[k] == b'-') {
                        k += 1;
                    }
                    if k < b.len() && b[k].is_ascii_digit() {
                        while k < b.len() && b[k].is_ascii_digit() {
                            k += 1;
                        }
                        i = k;
                    }
                }
                let text = &src[start..i];
                let v: f64 = text.parse().map_err(|_| err(col, format!("bad number '{text}'")))?;
                out.push((col, Tok::Num(v)));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < b.len() && b[i].is_ascii_alphabetic() {
                    i += 1;
                }
                let word = &src[start..i];
                let tok = match word {
                    "pi" => Tok::Pi,
                    "j" => Tok::J,
                    w if w.chars().all(|c| matches!(c, 'I' | 'X' | 'Y' | 'Z')) => Tok::Pauli(w.to_string()),
                    w => return Err(err(col, format!("unknown identifier '{w}'"))),
                };
                out.push((col, tok));
            }
            other => return Err(err(col, format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

/// Parse an operator expression over `n_qubits` qubits.
pub fn parse_operator(src: &str, n_qubits: usize) -> Result<CMatrix> {
    let toks = tokenize(src)?;
    let d = 1usize << n_qubits;
    let end_col = src.len() + 1;
    let mut pos = 0;
    let mut acc = CMatrix::zeros(d, d);
    let mut first = true;
    loop {
        let mut sign = 1.0;
        match toks.get(pos) {
            Some((_, Tok::Plus)) => pos += 1,
            Some((_, Tok::Minus)) => {
                sign = -1.0;
                pos += 1;
            }
            Some((col, _)) if !first => return Err(err(*col, "expected '+' or '-'")),
            None if first => return Err(err(end_col, "empty expression")),
            _ => {}
        }
        first = false;
        // term
        let mut scalar = Complex64::new(sign, 0.0);
        let mut op: Option<CMatrix> = None;
        let mut divide = false;
        loop {
            let (col, tok) = toks.get(pos).ok_or_else(|| err(end_col, "expected a factor"))?;
            pos += 1;
            match tok {
                Tok::Num(v) => {
                    if divide {
                        if *v == 0.0 {
                            return Err(err(*col, "division by zero"));
                        }
                        scalar /= v;
                    } else {
                        scalar *= v;
                    }
                }
                Tok::Pi => {
                    if divide {
                        scalar /= std::f64::consts::PI;
                    } else {
                        scalar *= std::f64::consts::PI;
                    }
                }
                Tok::J => {
                    if divide {
                        scalar /= Complex64::new(0.0, 1.0);
                    } else {
                        scalar *= Complex64::new(0.0, 1.0);
                    }
                }
                Tok::Pauli(p) => {
                    if divide {
                        return Err(err(*col, "cannot divide by an operator"));
                    }
                    if p.len() != n_qubits {
                        return Err(err(*col, format!("Pauli string '{p}' needs {n_qubits} letters")));
                    }
                    let m = pauli_string(p).expect("letters checked by tokenizer");
                    op = Some(match op {
                        Some(prev) => prev * m,
                        None => m,
                    });
                }
                _ => return Err(err(*col, "expected a number, pi, j or Pauli string")),
            }
            match toks.get(pos) {
                Some((_, Tok::Star)) => {
                    divide = false;
                    pos += 1;
                }
                Some((_, Tok::Slash)) => {
                    divide = true;
                    pos += 1;
                }
                _ => break,
            }
        }
        let m = op.unwrap_or_else(|| identity(d));
        acc += m * scalar;
        if pos >= toks.len() {
            break;
        }
    }
    Ok(acc)
}
