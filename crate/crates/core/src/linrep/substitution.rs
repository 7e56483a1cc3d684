use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactnum::{Field, Mat, Rational};

use super::LinearRep;

/// Constant-length substitution with output map, as a representation whose
/// states are the letters. Reading the digits of n most significant first
/// from `start` lands in the state ω_n, so u(n) = output(ω_n).
pub fn substitution_to_linrep(
    rules: &BTreeMap<char, String>,
    output: &BTreeMap<char, Rational>,
    start: char,
) -> Result<LinearRep<Rational>> {
    let mut letters: Vec<char> = vec![start];
    letters.extend(rules.keys().copied().filter(|&c| c != start));
    let len = rules.values().next().map(|w| w.chars().count()).unwrap_or(0);
    if rules.values().any(|w| w.chars().count() != len) {
        return Err(Error::Unsupported("substitution rules of unequal length".into()));
    }
    if len < 2 {
        return Err(Error::InvalidRep("substitution length must be at least 2".into()));
    }
    let index = |c: char| {
        letters
            .iter()
            .position(|&x| x == c)
            .ok_or_else(|| Error::InvalidRep(format!("letter {c:?} has no rule")))
    };
    let image = rules.get(&start).ok_or_else(|| Error::InvalidRep("start has no rule".into()))?;
    if !image.starts_with(start) {
        return Err(Error::InvalidRep(format!("{start:?} is not a prefix of its image {image:?}")));
    }
    let d = letters.len();
    let mut a = vec![Mat::<Rational>::zeros(d, d); len];
    for (x, &letter) in letters.iter().enumerate() {
        for (r, target) in rules[&letter].chars().enumerate() {
            a[r][(x, index(target)?)] = Rational::one();
        }
    }
    let mut l = vec![Rational::zero(); d];
    l[0] = Rational::one();
    let c = letters
        .iter()
        .map(|x| {
            output
                .get(x)
                .cloned()
                .ok_or_else(|| Error::InvalidRep(format!("letter {x:?} has no output")))
        })
        .collect::<Result<Vec<_>>>()?;
    LinearRep::new(len as u32, l, a, c)
}
