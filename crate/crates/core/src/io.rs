//! JSON representation files.
//!
//! ```json
//! {"radix": 2, "dim": 2, "scalar": "rational",
//!  "L": [1, 0], "A": [[[1, 0], [0, 1]], [[1, 0], [1, 1]]], "C": [0, 1],
//!  "name": "sum_of_digits"}
//! ```
//!
//! Rational entries are integers or "p/q" strings; complex entries are
//! [re, im] pairs (a bare number is read as real). Writing a parsed file
//! gives back the same document up to whitespace, with rationals in lowest
//! terms.

use std::fs;
use std::path::Path;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{fmt_rational, parse_rational, Rational, C64};
use crate::linrep::{check_parts, AnyRep, LinearRep};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scalar {
    Rational,
    Complex,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
    Pair([f64; 2]),
    Real(f64),
}

impl Entry {
    fn rational(&self, at: &str) -> Result<Rational> {
        match self {
            Entry::Int(n) => Ok(Rational::from_integer((*n).into())),
            Entry::Text(s) => parse_rational(s).map_err(|e| Error::Parse(format!("{at}: {e}"))),
            other => Err(Error::Parse(format!("{at}: {other:?} is not a rational entry (use an integer or \"p/q\")"))),
        }
    }

    fn complex(&self, at: &str) -> Result<C64> {
        let z = match self {
            Entry::Pair([re, im]) => C64::new(*re, *im),
            Entry::Real(x) => C64::new(*x, 0.0),
            Entry::Int(n) => C64::new(*n as f64, 0.0),
            Entry::Text(s) => {
                let q = parse_rational(s).map_err(|e| Error::Parse(format!("{at}: {e}")))?;
                C64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
            }
        };
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Parse(format!("{at}: non-finite entry")));
        }
        Ok(z)
    }

    pub fn from_rational(q: &Rational) -> Self {
        match (q.is_integer(), q.numer().to_i64()) {
            (true, Some(n)) => Entry::Int(n),
            _ => Entry::Text(fmt_rational(q)),
        }
    }

    pub fn from_complex(z: C64) -> Self {
        Entry::Pair([z.re, z.im])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepFile {
    pub radix: u32,
    pub dim: usize,
    pub scalar: Scalar,
    #[serde(rename = "L")]
    pub l: Vec<Entry>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<Vec<Entry>>>,
    #[serde(rename = "C")]
    pub c: Vec<Entry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigen_hints: Option<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

fn convert<T>(
    f: &RepFile,
    entry: impl Fn(&Entry, &str) -> Result<T>,
) -> Result<(Vec<T>, Vec<Vec<Vec<T>>>, Vec<T>)> {
    let vec = |v: &[Entry], what: &str| -> Result<Vec<T>> {
        v.iter().enumerate().map(|(i, e)| entry(e, &format!("{what}[{i}]"))).collect()
    };
    let l = vec(&f.l, "L")?;
    let c = vec(&f.c, "C")?;
    let a = f
        .a
        .iter()
        .enumerate()
        .map(|(r, m)| m.iter().enumerate().map(|(i, row)| vec(row, &format!("A[{r}] row {i}"))).collect())
        .collect::<Result<_>>()?;
    Ok((l, a, c))
}

impl RepFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Every structural problem in the document; empty when it converts.
    pub fn check(&self) -> Vec<String> {
        let mut issues = check_parts(self.radix, &self.l, &self.a, &self.c);
        if self.dim != self.l.len() {
            issues.push(format!("dim is {} but L has {} entries", self.dim, self.l.len()));
        }
        issues
    }

    pub fn to_rep(&self) -> Result<AnyRep> {
        let issues = self.check();
        if !issues.is_empty() {
            return Err(Error::Shape(issues.join("; ")));
        }
        let hints = match &self.eigen_hints {
            Some(h) => h.iter().enumerate().map(|(i, e)| e.complex(&format!("eigen_hints[{i}]"))).collect::<Result<_>>()?,
            None => vec![],
        };
        let mut rep = match self.scalar {
            Scalar::Rational => {
                let (l, a, c) = convert(self, Entry::rational)?;
                AnyRep::Rational(LinearRep::from_rows(self.radix, l, a, c)?.with_hints(hints))
            }
            Scalar::Complex => {
                let (l, a, c) = convert(self, Entry::complex)?;
                AnyRep::Complex(LinearRep::from_rows(self.radix, l, a, c)?.with_hints(hints))
            }
        };
        match &mut rep {
            AnyRep::Rational(r) => r.name = self.name.clone(),
            AnyRep::Complex(r) => r.name = self.name.clone(),
        }
        Ok(rep)
    }

    pub fn from_rational(rep: &LinearRep<Rational>) -> Self {
        let v = |x: &[Rational]| x.iter().map(Entry::from_rational).collect();
        RepFile {
            radix: rep.radix(),
            dim: rep.dim(),
            scalar: Scalar::Rational,
            l: v(rep.l()),
            a: rep.mats().iter().map(|m| m.to_rows().iter().map(|r| v(r)).collect()).collect(),
            c: v(rep.c()),
            eigen_hints: hints(&rep.eigen_hints),
            name: rep.name.clone(),
        }
    }

    pub fn from_complex(rep: &LinearRep<C64>) -> Self {
        let v = |x: &[C64]| x.iter().map(|&z| Entry::from_complex(z)).collect();
        RepFile {
            radix: rep.radix(),
            dim: rep.dim(),
            scalar: Scalar::Complex,
            l: v(rep.l()),
            a: rep.mats().iter().map(|m| m.to_rows().iter().map(|r| v(r)).collect()).collect(),
            c: v(rep.c()),
            eigen_hints: hints(&rep.eigen_hints),
            name: rep.name.clone(),
        }
    }

    pub fn from_any(rep: &AnyRep) -> Self {
        match rep {
            AnyRep::Rational(r) => Self::from_rational(r),
            AnyRep::Complex(r) => Self::from_complex(r),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("rep file serializes");
        s.push('\n');
        s
    }
}

fn hints(h: &[C64]) -> Option<Vec<Entry>> {
    (!h.is_empty()).then(|| h.iter().map(|&z| Entry::from_complex(z)).collect())
}
