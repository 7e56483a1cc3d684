use std::ops::{Index, IndexMut};

use super::field::{Field, Rational, C64};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NormKind {
    One,
    Infinity,
    Two,
}

impl NormKind {
    pub const ALL: [NormKind; 3] = [NormKind::One, NormKind::Infinity, NormKind::Two];

    pub fn name(self) -> &'static str {
        match self {
            NormKind::One => "one",
            NormKind::Infinity => "infinity",
            NormKind::Two => "two",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "one" | "1" => Ok(NormKind::One),
            "infinity" | "inf" => Ok(NormKind::Infinity),
            "two" | "2" => Ok(NormKind::Two),
            _ => Err(Error::Parse(format!("unknown norm {s:?}"))),
        }
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Field> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d, d);
        for i in 0..d {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, x)| x.len() != c) {
            return Err(Error::Shape(format!("row {i} has {} entries, expected {c}", row.len())));
        }
        Ok(Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<T>]) -> Self {
        let r = cols.first().map_or(0, |c| c.len());
        Self::from_fn(r, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_complex(&self) -> Mat<C64> {
        self.map(|x| x.to_c64())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].plus(&a.times(b));
                    }
                }
            }
        }
        out
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(self.mul(o))
    }

    /// M·v for a column vector v.
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for j in 0..self.cols {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !v[j].is_zero() {
                        acc = acc.plus(&a.times(&v[j]));
                    }
                }
                acc
            })
            .collect()
    }

    /// v·M for a row vector v.
    pub fn vec_mul(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.rows, v.len(), "vector-matrix shape");
        (0..self.cols)
            .map(|j| {
                let mut acc = T::zero();
                for i in 0..self.rows {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !v[i].is_zero() {
                        acc = acc.plus(&v[i].times(a));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.plus(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.minus(b)).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.times(s))
    }

    /// self − s·I
    pub fn shift(&self, s: &T) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] = m[(i, i)].minus(s);
        }
        m
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn lie_bracket(&self, o: &Self) -> Result<Self> {
        if !self.is_square() || self.rows != o.rows || self.cols != o.cols {
            return Err(Error::Shape("lie bracket needs equal square shapes".into()));
        }
        Ok(self.mul(o).sub(&o.mul(self)))
    }

    pub fn induced_norm(&self, kind: NormKind) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::Shape(format!("norm of non-square {}x{}", self.rows, self.cols)));
        }
        Ok(match kind {
            NormKind::One => (0..self.cols)
                .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<f64>())
                .fold(0.0, f64::max),
            NormKind::Infinity => (0..self.rows)
                .map(|i| (0..self.cols).map(|j| self[(i, j)].abs()).sum::<f64>())
                .fold(0.0, f64::max),
            NormKind::Two => super::svd::singular_values(&self.to_complex())
                .first()
                .copied()
                .unwrap_or(0.0),
        })
    }

    pub fn flatten(&self) -> Vec<T> {
        self.data.clone()
    }
}

impl Mat<Rational> {
    /// Exact one/infinity norms. The two-norm is generally irrational.
    pub fn exact_norm(&self, kind: NormKind) -> Result<Rational> {
        use num_traits::Signed;
        if !self.is_square() {
            return Err(Error::Shape("norm of non-square matrix".into()));
        }
        let sums: Vec<Rational> = match kind {
            NormKind::One => (0..self.cols)
                .map(|j| (0..self.rows).map(|i| Signed::abs(&self[(i, j)])).sum())
                .collect(),
            NormKind::Infinity => (0..self.rows)
                .map(|i| (0..self.cols).map(|j| Signed::abs(&self[(i, j)])).sum())
                .collect(),
            NormKind::Two => return Err(Error::Unsupported("exact two-norm".into())),
        };
        Ok(sums.into_iter().max().unwrap_or_else(<Rational as Field>::zero))
    }
}

pub fn vec_inf_norm<T: Field>(v: &[T]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

pub fn vec_sub<T: Field>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.minus(y)).collect()
}

pub fn vec_add<T: Field>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.plus(y)).collect()
}

pub fn vec_scale<T: Field>(a: &[T], s: &T) -> Vec<T> {
    a.iter().map(|x| x.times(s)).collect()
}

pub fn dot<T: Field>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc.plus(&x.times(y)))
}

pub fn to_complex_vec<T: Field>(v: &[T]) -> Vec<C64> {
    v.iter().map(|x| x.to_c64()).collect()
}
