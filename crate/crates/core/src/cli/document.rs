//! JSON input documents. Rationals travel as strings (`"3"`, `"-2/5"`) so
//! no value ever passes through floating point.

use serde::{Deserialize, Serialize};

use crate::algebra::{Polynomial, Rational};
use crate::cramer::LinearSystem;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Rational,
    Symbolic,
}

/// `A` and `b` may be omitted in symbolic mode, meaning `a[i,j]` and `b[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub n: usize,
    pub mode: Mode,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ParsedSystem {
    Rational(LinearSystem<Rational>),
    Symbolic(LinearSystem<Polynomial>),
}

impl ParsedSystem {
    pub fn n(&self) -> usize {
        match self {
            ParsedSystem::Rational(s) => s.n(),
            ParsedSystem::Symbolic(s) => s.n(),
        }
    }
}

fn shape_error(what: &str, expected: usize, found: usize) -> Error {
    Error::Parse(format!("{what} has {found} entries, expected {expected}"))
}

impl InputDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    fn check_shape(&self) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Err(Error::Parse("n must be at least 1".into()));
        }
        if let Some(a) = &self.a {
            if a.len() != n {
                return Err(shape_error("A", n, a.len()));
            }
            for (i, row) in a.iter().enumerate() {
                if row.len() != n {
                    return Err(shape_error(&format!("row {} of A", i + 1), n, row.len()));
                }
            }
        }
        if let Some(b) = &self.b {
            if b.len() != n {
                return Err(shape_error("b", n, b.len()));
            }
        }
        Ok(())
    }

    pub fn to_system(&self) -> Result<ParsedSystem> {
        self.check_shape()?;
        let n = self.n;
        match self.mode {
            Mode::Rational => {
                let (Some(a), Some(b)) = (&self.a, &self.b) else {
                    return Err(Error::Parse("rational mode needs both A and b".into()));
                };
                let entries = a
                    .iter()
                    .map(|row| row.iter().map(|s| s.parse()).collect())
                    .collect::<Result<_>>()?;
                let rhs = b.iter().map(|s| s.parse()).collect::<Result<_>>()?;
                Ok(ParsedSystem::Rational(LinearSystem::new(entries, rhs)?))
            }
            Mode::Symbolic => {
                let generic = LinearSystem::generic(n)?;
                let parse = |s: &String| -> Result<Polynomial> {
                    let p: Polynomial = s.parse()?;
                    if let Some(sym) = p.symbols().find(|sym| !sym.fits(n)) {
                        return Err(Error::Parse(format!(
                            "symbol {sym} does not belong to a size-{n} system"
                        )));
                    }
                    Ok(p)
                };
                let entries = match &self.a {
                    Some(a) => a
                        .iter()
                        .map(|row| row.iter().map(parse).collect())
                        .collect::<Result<_>>()?,
                    None => generic.entries().to_vec(),
                };
                let rhs = match &self.b {
                    Some(b) => b.iter().map(parse).collect::<Result<_>>()?,
                    None => generic.rhs().to_vec(),
                };
                Ok(ParsedSystem::Symbolic(LinearSystem::new(entries, rhs)?))
            }
        }
    }

    /// Writes every entry out explicitly.
    pub fn from_system(sys: &ParsedSystem) -> Self {
        fn strings<T: ToString>(
            sys_entries: &[Vec<T>],
            rhs: &[T],
        ) -> (Vec<Vec<String>>, Vec<String>) {
            (
                sys_entries
                    .iter()
                    .map(|r| r.iter().map(|x| x.to_string()).collect())
                    .collect(),
                rhs.iter().map(|x| x.to_string()).collect(),
            )
        }
        let (mode, (a, b)) = match sys {
            ParsedSystem::Rational(s) => (Mode::Rational, strings(s.entries(), s.rhs())),
            ParsedSystem::Symbolic(s) => (Mode::Symbolic, strings(s.entries(), s.rhs())),
        };
        Self {
            n: sys.n(),
            mode,
            a: Some(a),
            b: Some(b),
        }
    }
}
