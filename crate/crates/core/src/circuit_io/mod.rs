//! Circuit intermediate representation and the line-oriented `.circ` format.
//!
//! ```text
//! # comment
//! modes 2
//! name demo
//! rot 0.7853981633974483 XX      # e^{i t XX}
//! gate 1 0 1/3 0 ZY              # q + r*ZY, q = 1, r = 1/3
//! project 1 +                    # (I + Z_1)/2
//! measure 2                      # outcome chosen at simulation time
//! ```
//!
//! Mode indices are 1-based in the text and 0-based in [`Item`].

mod parse;
mod record;

use std::fmt;

use num_complex::Complex64;

use crate::algebra::PauliString;

pub use parse::{parse, ParseError};
pub use record::{MeasurementRecord, ResultRecord, SampleRecord, FORMAT_VERSION};

/// A real number as written in a circuit file: a decimal or an exact `p/q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Number {
    Decimal(f64),
    Rational(i64, u64),
}

impl Number {
    pub fn value(self) -> f64 {
        match self {
            Number::Decimal(x) => x,
            Number::Rational(p, q) => p as f64 / q as f64,
        }
    }

    pub fn is_zero(self) -> bool {
        match self {
            Number::Decimal(x) => x == 0.0,
            Number::Rational(p, _) => p == 0,
        }
    }
}

impl From<f64> for Number {
    fn from(x: f64) -> Self {
        Number::Decimal(x)
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // Display for f64 prints the shortest string that parses back exactly
            Number::Decimal(x) => write!(f, "{x}"),
            Number::Rational(p, q) => write!(f, "{p}/{q}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexNumber {
    pub re: Number,
    pub im: Number,
}

impl ComplexNumber {
    pub fn value(self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }

    pub fn is_zero(self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl From<Complex64> for ComplexNumber {
    fn from(z: Complex64) -> Self {
        ComplexNumber { re: Number::Decimal(z.re), im: Number::Decimal(z.im) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    /// `e^{i t P}`.
    Rot { t: Number, pauli: PauliString },
    /// `q + r P`.
    Gate { q: ComplexNumber, r: ComplexNumber, pauli: PauliString },
    /// `(I ± Z_k)/2` with a fixed outcome.
    Project { mode: usize, sign: Sign },
    /// Number-basis measurement of a mode; the outcome is supplied when the
    /// circuit is simulated.
    Measure { mode: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub n: usize,
    pub name: Option<String>,
    pub items: Vec<Item>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Circuit { n, name: None, items: Vec::new() }
    }

    pub fn push(&mut self, item: Item) -> &mut Self {
        self.items.push(item);
        self
    }

    pub fn rot(&mut self, t: f64, pauli: PauliString) -> &mut Self {
        self.push(Item::Rot { t: Number::Decimal(t), pauli })
    }

    pub fn gate(&mut self, q: Complex64, r: Complex64, pauli: PauliString) -> &mut Self {
        self.push(Item::Gate { q: q.into(), r: r.into(), pauli })
    }

    pub fn project(&mut self, mode: usize, sign: Sign) -> &mut Self {
        self.push(Item::Project { mode, sign })
    }

    pub fn measure(&mut self, mode: usize) -> &mut Self {
        self.push(Item::Measure { mode })
    }

    pub fn measure_count(&self) -> usize {
        self.items.iter().filter(|i| matches!(i, Item::Measure { .. })).count()
    }

    /// Number of `project` and `measure` items.
    pub fn projection_count(&self) -> usize {
        self.items.iter().filter(|i| matches!(i, Item::Measure { .. } | Item::Project { .. })).count()
    }

    /// Canonical text: header, optional name, one item per line.
    pub fn emit(&self) -> String {
        let mut out = format!("modes {}\n", self.n);
        if let Some(name) = &self.name {
            out.push_str(&format!("name {name}\n"));
        }
        for item in &self.items {
            let line = match item {
                Item::Rot { t, pauli } => format!("rot {t} {}", letters(pauli)),
                Item::Gate { q, r, pauli } => {
                    format!("gate {} {} {} {} {}", q.re, q.im, r.re, r.im, letters(pauli))
                }
                Item::Project { mode, sign } => format!("project {} {}", mode + 1, sign.as_char()),
                Item::Measure { mode } => format!("measure {}", mode + 1),
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

/// Pauli text for the circuit format: the phase prefix is dropped when `+1`.
fn letters(p: &PauliString) -> String {
    let s = p.to_string();
    s.strip_prefix('+').map(str::to_string).unwrap_or(s)
}

pub fn emit(c: &Circuit) -> String {
    c.emit()
}

/// Parse an outcome string such as `"+-+"`.
pub fn parse_outcomes(s: &str) -> Option<Vec<Sign>> {
    s.chars().map(Sign::from_char).collect()
}

pub fn outcomes_to_string(v: &[Sign]) -> String {
    v.iter().map(|s| s.as_char()).collect()
}
