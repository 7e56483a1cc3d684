use crate::error::{Error, Result};
use crate::exactnum::{Field, Mat, SpanBasis};

#[derive(Clone, Debug, PartialEq)]
pub struct LieClosureReport<T> {
    pub basis: Vec<Mat<T>>,
    /// dim D⁰𝔤, dim D¹𝔤, ... ending at 0 or at the first repeat.
    pub derived_dims: Vec<usize>,
    pub solvable: bool,
}

/// Adds `m` to the span; keeps it in `kept` when it is new.
fn extend<T: Field>(span: &mut SpanBasis<T>, kept: &mut Vec<Mat<T>>, m: Mat<T>) -> bool {
    if span.insert(&m.flatten()) {
        kept.push(m);
        true
    } else {
        false
    }
}

fn traceless<T: Field>(m: &Mat<T>, tol: f64) -> bool {
    let tr = (0..m.rows()).fold(T::zero(), |acc, i| acc.plus(&m[(i, i)]));
    tr.negligible(m.max_abs().max(1.0), tol.max(1e-12))
}

/// [xs, xs]. It lies in span(xs) ∩ sl, so the search stops once it
/// reaches that dimension.
fn bracket_span<T: Field>(xs: &[Mat<T>], tol: f64) -> Vec<Mat<T>> {
    let cap = xs.len() - usize::from(!xs.iter().all(|m| traceless(m, tol)));
    let mut span = SpanBasis::new(tol);
    let mut out = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        for y in &xs[i + 1..] {
            if out.len() == cap {
                return out;
            }
            extend(&mut span, &mut out, x.mul(y).sub(&y.mul(x)));
        }
    }
    out
}

/// The Lie algebra generated by `mats` under [A, B] = AB − BA, and its
/// derived series D^{k+1} = [D^k, D^k].
pub fn lie_algebra_closure<T: Field>(mats: &[Mat<T>], tol: f64) -> Result<LieClosureReport<T>> {
    let d = mats.first().map_or(0, |m| m.rows());
    if mats.iter().any(|m| m.rows() != d || m.cols() != d) {
        return Err(Error::Shape("Lie closure needs square matrices of one size".into()));
    }
    let mut span = SpanBasis::new(tol);
    let mut basis = Vec::new();
    for m in mats {
        extend(&mut span, &mut basis, m.clone());
    }
    let mut next = 0;
    while next < basis.len() && basis.len() < d * d {
        let x = basis[next].clone();
        for j in 0..next {
            let b = basis[j].mul(&x).sub(&x.mul(&basis[j]));
            extend(&mut span, &mut basis, b);
        }
        next += 1;
    }

    let mut derived_dims = vec![basis.len()];
    let mut current = basis.clone();
    while !current.is_empty() {
        let d_next = bracket_span(&current, tol);
        if d_next.len() == current.len() {
            break;
        }
        derived_dims.push(d_next.len());
        current = d_next;
    }
    let solvable = *derived_dims.last().unwrap() == 0;
    Ok(LieClosureReport { basis, derived_dims, solvable })
}
