use crate::error::{Error, Result};
use crate::exactnum::{Field, Mat, Rational, SpanBasis};

use super::LinearRep;

/// Guesses an insensitive representation from values: scans the
/// subsequences n ↦ u(B^k n + r) level by level (k ascending, r ascending),
/// keeps those that enlarge the span of their first `horizon` values, and
/// stops at the first level that adds nothing. The basis sequences v^ℓ give
/// L = (v^ℓ(0)), A_s with columns the coordinates of n ↦ v^ℓ(Bn + s), and
/// C = e_1.
pub fn infer_representation(
    oracle: &dyn Fn(u64) -> Rational,
    radix: u32,
    max_level: u32,
    horizon: usize,
) -> Result<LinearRep<Rational>> {
    let b = radix as u64;
    let window = |k: u32, r: u64| -> Vec<Rational> {
        let step = b.pow(k);
        (0..horizon as u64).map(|i| oracle(step * i + r)).collect()
    };

    let mut span = SpanBasis::new(0.0);
    let mut chosen: Vec<(u32, u64)> = Vec::new();
    let mut closed = false;
    for k in 0..=max_level {
        let mut grew = false;
        for r in 0..b.pow(k) {
            if span.insert(&window(k, r)) {
                chosen.push((k, r));
                grew = true;
            }
        }
        if !grew {
            closed = true;
            break;
        }
    }
    if !closed {
        return Err(Error::NotRecognized { level: max_level, dim: chosen.len() });
    }
    let d = chosen.len();
    if d == 0 {
        let z = Rational::zero();
        return LinearRep::new(radix, vec![z.clone()], vec![Mat::zeros(1, 1); radix as usize], vec![z]);
    }

    let mut a = Vec::with_capacity(radix as usize);
    for s in 0..b {
        let mut cols = Vec::with_capacity(d);
        for &(k, r) in &chosen {
            // (s·v)(n) = v(Bn + s) = u(B^{k+1} n + B^k s + r)
            let img = window(k + 1, b.pow(k) * s + r);
            let coords = span
                .coordinates(&img)
                .ok_or(Error::NotRecognized { level: k + 1, dim: d })?;
            cols.push(coords);
        }
        a.push(Mat::from_cols(&cols));
    }
    let l = chosen.iter().map(|&(_, r)| oracle(r)).collect();
    let mut c = vec![Rational::zero(); d];
    c[0] = Rational::one();
    let rep = LinearRep::new(radix, l, a, c)?;
    for n in 0..horizon as u64 {
        if rep.eval_term(n) != oracle(n) {
            return Err(Error::NotRecognized { level: max_level, dim: d });
        }
    }
    Ok(rep)
}
