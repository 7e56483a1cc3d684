use crate::error::Result;
use crate::exactnum::{dot, Field, Mat, Rational, SpanBasis};

use super::LinearRep;

/// Minimal representation of the same series: restrict to the forward
/// closure span{A_w C}, then project onto the backward closure span{L A_w}.
pub fn reduce(rep: &LinearRep<Rational>) -> Result<LinearRep<Rational>> {
    let fwd = forward(rep)?;
    let back = backward(&fwd)?;
    let mut out = back;
    out.name = rep.name.clone();
    out.eigen_hints = rep.eigen_hints.clone();
    Ok(out)
}

fn zero_rep(radix: u32) -> Result<LinearRep<Rational>> {
    let z = <Rational as Field>::zero();
    LinearRep::new(radix, vec![z.clone()], vec![Mat::zeros(1, 1); radix as usize], vec![z])
}

/// Closure of `seed` under v ↦ step(r, v), breadth first.
fn closure(
    seed: &[Rational],
    radix: u32,
    step: impl Fn(u32, &[Rational]) -> Vec<Rational>,
) -> (SpanBasis<Rational>, Vec<Vec<Rational>>) {
    let mut span = SpanBasis::new(0.0);
    let mut basis = Vec::new();
    if span.insert(seed) {
        basis.push(seed.to_vec());
    }
    let mut i = 0;
    while i < basis.len() {
        for r in 0..radix {
            let v = step(r, &basis[i]);
            if span.insert(&v) {
                basis.push(v);
            }
        }
        i += 1;
    }
    (span, basis)
}

fn forward(rep: &LinearRep<Rational>) -> Result<LinearRep<Rational>> {
    let (span, basis) = closure(rep.c(), rep.radix(), |r, v| rep.mat(r).mul_vec(v));
    let k = basis.len();
    if k == 0 {
        return zero_rep(rep.radix());
    }
    let coords = |v: &[Rational]| span.coordinates(v).expect("closed under the digit maps");
    let a = rep
        .mats()
        .iter()
        .map(|m| {
            let cols: Vec<Vec<Rational>> = basis.iter().map(|p| coords(&m.mul_vec(p))).collect();
            Mat::from_cols(&cols)
        })
        .collect();
    let l = basis.iter().map(|p| dot(rep.l(), p)).collect();
    LinearRep::new(rep.radix(), l, a, coords(rep.c()))
}

fn backward(rep: &LinearRep<Rational>) -> Result<LinearRep<Rational>> {
    let (span, basis) = closure(rep.l(), rep.radix(), |r, v| rep.mat(r).vec_mul(v));
    if basis.is_empty() {
        return zero_rep(rep.radix());
    }
    let coords = |v: &[Rational]| span.coordinates(v).expect("closed under the digit maps");
    let a = rep
        .mats()
        .iter()
        .map(|m| {
            let rows: Vec<Vec<Rational>> = basis.iter().map(|q| coords(&m.vec_mul(q))).collect();
            Mat::from_rows(rows)
        })
        .collect::<Result<Vec<_>>>()?;
    let c = basis.iter().map(|q| dot(q, rep.c())).collect();
    LinearRep::new(rep.radix(), coords(rep.l()), a, c)
}
