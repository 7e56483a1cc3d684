use super::field::Field;
use super::matrix::{vec_inf_norm, Mat};
use crate::error::{Error, Result};

/// Reduced row echelon form. Floats pick the largest pivot in the column and
/// treat entries ≤ tol·scale as zero; rationals take the first nonzero pivot.
pub fn rref<T: Field>(m: &Mat<T>, tol: f64) -> (Mat<T>, Vec<usize>) {
    rref_scaled(m, tol, m.max_abs())
}

/// As `rref`, with the zero threshold tol·scale taken from the caller, e.g.
/// the scale of Q when `m` is the nearly singular Q − λI.
pub fn rref_scaled<T: Field>(m: &Mat<T>, tol: f64, scale: f64) -> (Mat<T>, Vec<usize>) {
    let scale = scale.max(f64::MIN_POSITIVE);
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let pick = if T::EXACT {
            (r..rows).find(|&i| !a[(i, c)].is_zero())
        } else {
            (r..rows)
                .max_by(|&i, &j| a[(i, c)].abs().partial_cmp(&a[(j, c)].abs()).unwrap())
                .filter(|&i| !a[(i, c)].negligible(scale, tol))
        };
        let Some(p) = pick else {
            if !T::EXACT {
                for i in r..rows {
                    a[(i, c)] = T::zero();
                }
            }
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(r, j)].clone();
                a[(r, j)] = tmp;
            }
        }
        let inv = T::one().over(&a[(r, c)]);
        for j in c..cols {
            a[(r, j)] = a[(r, j)].times(&inv);
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                let v = a[(i, j)].minus(&f.times(&a[(r, j)]));
                a[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank<T: Field>(m: &Mat<T>, tol: f64) -> usize {
    rref(m, tol).1.len()
}

/// Echelon kernel basis: one vector per free column, that column set to 1.
pub fn nullspace<T: Field>(m: &Mat<T>, tol: f64) -> Vec<Vec<T>> {
    nullspace_scaled(m, tol, m.max_abs())
}

pub fn nullspace_scaled<T: Field>(m: &Mat<T>, tol: f64, scale: f64) -> Vec<Vec<T>> {
    let (r, pivots) = rref_scaled(m, tol, scale);
    let cols = m.cols();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![T::zero(); cols];
        v[free] = T::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = r[(row, free)].negate();
        }
        basis.push(v);
    }
    basis
}

/// Solves A x = b for square nonsingular A.
pub fn solve<T: Field>(a: &Mat<T>, b: &[T], tol: f64) -> Result<Vec<T>> {
    let n = a.rows();
    if !a.is_square() || b.len() != n {
        return Err(Error::Shape("solve needs square A and conformant b".into()));
    }
    let aug = Mat::from_fn(n, n + 1, |i, j| if j < n { a[(i, j)].clone() } else { b[i].clone() });
    let (r, pivots) = rref(&aug, tol);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::Singular);
    }
    Ok((0..n).map(|i| r[(i, n)].clone()).collect())
}

pub fn inverse<T: Field>(a: &Mat<T>, tol: f64) -> Result<Mat<T>> {
    let n = a.rows();
    if !a.is_square() {
        return Err(Error::Shape("inverse of non-square matrix".into()));
    }
    let aug = Mat::from_fn(n, 2 * n, |i, j| {
        if j < n {
            a[(i, j)].clone()
        } else if j - n == i {
            T::one()
        } else {
            T::zero()
        }
    });
    let (r, pivots) = rref(&aug, tol);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::Singular);
    }
    Ok(Mat::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
}

/// Incrementally grown span of vectors, remembering how each echelon row is
/// built from the inserted vectors so coordinates can be recovered.
#[derive(Clone, Debug)]
pub struct SpanBasis<T> {
    tol: f64,
    scale: f64,
    rows: Vec<Vec<T>>,
    pivots: Vec<usize>,
    combos: Vec<Vec<T>>,
    count: usize,
}

impl<T: Field> SpanBasis<T> {
    pub fn new(tol: f64) -> Self {
        SpanBasis { tol, scale: 0.0, rows: vec![], pivots: vec![], combos: vec![], count: 0 }
    }

    pub fn dim(&self) -> usize {
        self.count
    }

    fn reduce(&self, v: &[T]) -> (Vec<T>, Vec<T>) {
        let mut r = v.to_vec();
        let mut combo = vec![T::zero(); self.count];
        for (row, (&p, comb)) in self.rows.iter().zip(self.pivots.iter().zip(&self.combos)) {
            let f = r[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in r.iter_mut().zip(row) {
                *x = x.minus(&f.times(y));
            }
            for (x, y) in combo.iter_mut().zip(comb) {
                *x = x.plus(&f.times(y));
            }
        }
        (r, combo)
    }

    fn scale_for(&self, v: &[T]) -> f64 {
        self.scale.max(vec_inf_norm(v)).max(f64::MIN_POSITIVE)
    }

    pub fn contains(&self, v: &[T]) -> bool {
        let s = self.scale_for(v);
        let (r, _) = self.reduce(v);
        r.iter().all(|x| x.negligible(s, self.tol))
    }

    /// Inserts v if it enlarges the span; returns whether it did.
    pub fn insert(&mut self, v: &[T]) -> bool {
        let s = self.scale_for(v);
        let (mut r, combo) = self.reduce(v);
        let pick = if T::EXACT {
            r.iter().position(|x| !x.is_zero())
        } else {
            let (i, m) = r
                .iter()
                .enumerate()
                .map(|(i, x)| (i, x.abs()))
                .fold((0, 0.0), |b, c| if c.1 > b.1 { c } else { b });
            (m > self.tol * s).then_some(i)
        };
        let Some(p) = pick else { return false };
        self.scale = s;
        let inv = T::one().over(&r[p]);
        for x in r.iter_mut() {
            *x = x.times(&inv);
        }
        // row = (v − Σ combo_i · orig_i) / pivot, expressed over originals
        let mut comb: Vec<T> = combo.iter().map(|c| c.negate().times(&inv)).collect();
        comb.push(inv.clone());
        for old in self.combos.iter_mut() {
            old.push(T::zero());
        }
        // keep rows reduced against the new pivot
        for (row, oc) in self.rows.iter_mut().zip(self.combos.iter_mut()) {
            let f = row[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&r) {
                *x = x.minus(&f.times(y));
            }
            for (x, y) in oc.iter_mut().zip(&comb) {
                *x = x.minus(&f.times(y));
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        self.combos.push(comb);
        self.count += 1;
        true
    }

    /// Coordinates of v over the inserted vectors, if v lies in the span.
    pub fn coordinates(&self, v: &[T]) -> Option<Vec<T>> {
        let s = self.scale_for(v);
        let (r, combo) = self.reduce(v);
        r.iter().all(|x| x.negligible(s, self.tol)).then_some(combo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::field::{int, rat, Rational};

    fn rm(rows: &[&[i64]]) -> Mat<Rational> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn kernel_of_ones() {
        let k = nullspace(&rm(&[&[1, 1], &[1, 1]]), 0.0);
        assert_eq!(k, vec![vec![int(-1), int(1)]]);
        assert!(nullspace(&Mat::<Rational>::identity(3), 0.0).is_empty());
    }

    #[test]
    fn solve_and_inverse() {
        let a = rm(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[int(3), int(5)], 0.0).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
        let inv = inverse(&a, 0.0).unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(2));
        assert_eq!(solve(&rm(&[&[1, 2], &[2, 4]]), &[int(1), int(1)], 0.0), Err(Error::Singular));
    }

    #[test]
    fn span_coordinates() {
        let mut s = SpanBasis::new(0.0);
        assert!(s.insert(&[int(1), int(1), int(0)]));
        assert!(s.insert(&[int(0), int(1), int(1)]));
        assert!(!s.insert(&[int(1), int(2), int(1)]));
        assert_eq!(s.coordinates(&[int(2), int(5), int(3)]), Some(vec![int(2), int(3)]));
        assert_eq!(s.coordinates(&[int(0), int(0), int(1)]), None);
        assert!(s.insert(&[int(0), int(0), int(1)]));
        assert_eq!(s.coordinates(&[int(1), int(0), int(0)]), Some(vec![int(1), int(-1), int(1)]));
    }
}
