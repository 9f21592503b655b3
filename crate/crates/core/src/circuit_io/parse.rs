use std::fmt;

use crate::algebra::{is_l2_generator, PauliString};

use super::{Circuit, ComplexNumber, Item, Number, Sign};

/// Upper bound on `modes N` accepted by the parser.
pub const MAX_MODES: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token { text: &line[s..i], column: line[..s].chars().count() + 1 });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token { text: &line[s..], column: line[..s].chars().count() + 1 });
    }
    out
}

fn parse_number(s: &str) -> Result<Number, String> {
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.parse().map_err(|_| format!("bad rational numerator {p:?}"))?;
        let q: u64 = q.parse().map_err(|_| format!("bad rational denominator {q:?}"))?;
        if q == 0 {
            return Err("rational with zero denominator".into());
        }
        return Ok(Number::Rational(p, q));
    }
    // f64::from_str also takes "inf" and "NaN"; only plain decimals are allowed
    let ok_chars = s.chars().all(|c| c.is_ascii_digit() || matches!(c, '+' | '-' | '.' | 'e' | 'E'));
    if !ok_chars || !s.chars().any(|c| c.is_ascii_digit()) {
        return Err(format!("bad number {s:?}"));
    }
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(Number::Decimal(x)),
        _ => Err(format!("bad number {s:?}")),
    }
}

struct Parser {
    errors: Vec<ParseError>,
    line: usize,
}

impl Parser {
    fn err(&mut self, column: usize, message: impl Into<String>) {
        self.errors.push(ParseError { line: self.line, column, message: message.into() });
    }

    fn number(&mut self, tok: &Token<'_>) -> Option<Number> {
        match parse_number(tok.text) {
            Ok(x) => Some(x),
            Err(m) => {
                self.err(tok.column, m);
                None
            }
        }
    }

    fn pauli(&mut self, tok: &Token<'_>, n: usize) -> Option<PauliString> {
        let p = match tok.text.parse::<PauliString>() {
            Ok(p) => p,
            Err(e) => {
                self.err(tok.column, e.to_string());
                return None;
            }
        };
        if p.num_qubits() != n {
            self.err(tok.column, format!("Pauli string has width {}, expected {n}", p.num_qubits()));
            return None;
        }
        if !is_l2_generator(&p) {
            self.err(tok.column, format!("{p} is not a non-identity L2 generator"));
            return None;
        }
        Some(p)
    }

    fn mode(&mut self, tok: &Token<'_>, n: usize) -> Option<usize> {
        match tok.text.parse::<usize>() {
            Ok(k) if (1..=n).contains(&k) => Some(k - 1),
            Ok(k) => {
                self.err(tok.column, format!("mode {k} out of range 1..={n}"));
                None
            }
            Err(_) => {
                self.err(tok.column, format!("bad mode index {:?}", tok.text));
                None
            }
        }
    }

    fn arity(&mut self, toks: &[Token<'_>], want: usize) -> bool {
        if toks.len() != want {
            let col = toks.get(want).map_or(toks[0].column, |t| t.column);
            self.err(col, format!("{} expects {} arguments, got {}", toks[0].text, want - 1, toks.len() - 1));
            return false;
        }
        true
    }
}

/// Parse a `.circ` document. Every problem found is reported with its
/// 1-based line and column; parsing never panics.
pub fn parse(text: &str) -> Result<Circuit, Vec<ParseError>> {
    let mut p = Parser { errors: Vec::new(), line: 0 };
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        p.line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokenize(content);
        let Some(head) = toks.first() else { continue };
        if head.text == "modes" {
            if circuit.is_some() {
                p.err(head.column, "duplicate modes header");
                continue;
            }
            if !p.arity(&toks, 2) {
                // keep going with a placeholder so later lines still get checked
                circuit = Some(Circuit::new(0));
                continue;
            }
            match toks[1].text.parse::<usize>() {
                Ok(n) if (1..=MAX_MODES).contains(&n) => circuit = Some(Circuit::new(n)),
                _ => {
                    p.err(toks[1].column, format!("mode count must be in 1..={MAX_MODES}"));
                    circuit = Some(Circuit::new(0));
                }
            }
            continue;
        }
        let Some(c) = circuit.as_mut() else {
            p.err(head.column, "expected `modes N` header before any item");
            // assume nothing about n; later lines are still scanned for the header
            continue;
        };
        let n = c.n;
        let item = match head.text {
            "name" => {
                if toks.len() < 2 {
                    p.err(head.column, "name expects a label");
                } else {
                    let label = content.trim_start().strip_prefix("name").unwrap_or("");
                    c.name = Some(label.trim().to_string());
                }
                continue;
            }
            "rot" => {
                if !p.arity(&toks, 3) {
                    continue;
                }
                let t = p.number(&toks[1]);
                let pauli = if n > 0 { p.pauli(&toks[2], n) } else { None };
                match (t, pauli) {
                    (Some(t), Some(pauli)) => Item::Rot { t, pauli },
                    _ => continue,
                }
            }
            "gate" => {
                if !p.arity(&toks, 6) {
                    continue;
                }
                let nums: Vec<Option<Number>> = toks[1..5].iter().map(|t| p.number(t)).collect();
                let pauli = if n > 0 { p.pauli(&toks[5], n) } else { None };
                let [Some(qr), Some(qi), Some(rr), Some(ri)] = nums[..] else { continue };
                let q = ComplexNumber { re: qr, im: qi };
                let r = ComplexNumber { re: rr, im: ri };
                if q.is_zero() {
                    p.err(toks[1].column, "q must be nonzero in a gate q + rU");
                    continue;
                }
                match pauli {
                    Some(pauli) => Item::Gate { q, r, pauli },
                    None => continue,
                }
            }
            "project" => {
                if !p.arity(&toks, 3) {
                    continue;
                }
                let mode = p.mode(&toks[1], n);
                let sign = match toks[2].text {
                    "+" => Some(Sign::Plus),
                    "-" => Some(Sign::Minus),
                    other => {
                        p.err(toks[2].column, format!("projection sign must be + or -, got {other:?}"));
                        None
                    }
                };
                match (mode, sign) {
                    (Some(mode), Some(sign)) => Item::Project { mode, sign },
                    _ => continue,
                }
            }
            "measure" => {
                if !p.arity(&toks, 2) {
                    continue;
                }
                match p.mode(&toks[1], n) {
                    Some(mode) => Item::Measure { mode },
                    None => continue,
                }
            }
            other => {
                p.err(head.column, format!("unknown keyword {other:?}"));
                continue;
            }
        };
        c.items.push(item);
    }
    if circuit.is_none() && p.errors.is_empty() {
        p.line = text.lines().count().max(1);
        p.err(1, "missing `modes N` header");
    }
    if p.errors.is_empty() {
        Ok(circuit.expect("checked above"))
    } else {
        Err(p.errors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let c = parse("modes 2\nrot 0.7853981633974483 XX").unwrap();
        assert_eq!(c.n, 2);
        assert_eq!(c.items.len(), 1);
        let c = parse("modes 1\nproject 1 +").unwrap();
        assert_eq!(c.items, vec![Item::Project { mode: 0, sign: Sign::Plus }]);
        let e = parse("modes 2\ngate 0 0 1 0 XX").unwrap_err();
        assert_eq!(e.len(), 1);
        assert!(e[0].message.contains("q must be nonzero"));
        assert_eq!((e[0].line, e[0].column), (2, 6));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("modes 2\nfoo 1\nrot x XX\nrot 1 XXX\nrot 1 ZZ\nproject 3 +\nproject 1 *\n").unwrap_err();
        let lines: Vec<usize> = e.iter().map(|x| x.line).collect();
        assert_eq!(lines, vec![2, 3, 4, 5, 6, 7]);
        assert!(e[3].message.contains("not a non-identity L2 generator"));
        assert!(parse("").is_err());
        assert!(parse("rot 1 X").is_err());
        assert!(parse("modes 1\nmodes 1").is_err());
        assert!(parse("modes 1\nrot 1/0 X").is_err());
        assert!(parse("modes 1\nrot inf X").is_err());
        assert!(parse("modes 0").is_err());
    }

    #[test]
    fn comments_names_rationals() {
        let c = parse("# header\nmodes 2 # two modes\nname gadget demo\ngate 1/3 0 -2/7 1.5 -ZY\nmeasure 2\n").unwrap();
        assert_eq!(c.name.as_deref(), Some("gadget demo"));
        match &c.items[0] {
            Item::Gate { q, r, pauli } => {
                assert_eq!(q.re, Number::Rational(1, 3));
                assert_eq!(r.re, Number::Rational(-2, 7));
                assert_eq!(r.im, Number::Decimal(1.5));
                assert_eq!(pauli.to_string(), "-ZY");
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(parse(&c.emit()).unwrap(), c);
    }

    #[test]
    fn empty_circuit_emits_header_only() {
        assert_eq!(Circuit::new(3).emit(), "modes 3\n");
    }
}
