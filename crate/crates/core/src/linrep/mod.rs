//! Linear representations (L, A_0..A_{B-1}, C) and their running sums.
//!
//! Words multiply most-significant digit leftmost: A_w = A_{w_1}⋯A_{w_K},
//! and u(n) = L·A_{w(n)}·C with w(0) the empty word.

mod infer;
mod reduce;
mod substitution;

pub use infer::infer_representation;
pub use reduce::reduce;
pub use substitution::substitution_to_linrep;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{vec_add, vec_sub, Field, Mat, Rational, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct LinearRep<T> {
    radix: u32,
    l: Vec<T>,
    a: Vec<Mat<T>>,
    c: Vec<T>,
    pub name: Option<String>,
    /// Exact eigenvalues of Q supplied by the user (e.g. ±√2 as doubles).
    pub eigen_hints: Vec<C64>,
}

/// A representation whose scalar domain is only known at run time.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyRep {
    Rational(LinearRep<Rational>),
    Complex(LinearRep<C64>),
}

impl AnyRep {
    pub fn to_complex(&self) -> LinearRep<C64> {
        match self {
            AnyRep::Rational(r) => r.to_complex(),
            AnyRep::Complex(r) => r.clone(),
        }
    }
    pub fn radix(&self) -> u32 {
        match self {
            AnyRep::Rational(r) => r.radix(),
            AnyRep::Complex(r) => r.radix(),
        }
    }
    pub fn dim(&self) -> usize {
        match self {
            AnyRep::Rational(r) => r.dim(),
            AnyRep::Complex(r) => r.dim(),
        }
    }
    pub fn name(&self) -> Option<&str> {
        match self {
            AnyRep::Rational(r) => r.name.as_deref(),
            AnyRep::Complex(r) => r.name.as_deref(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics {
    pub issues: Vec<String>,
    pub insensitive: Option<bool>,
    pub q: Option<Vec<Vec<String>>>,
}

impl Diagnostics {
    pub fn valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Shape and range checks on raw parts, collecting every problem found.
pub fn check_parts<T>(radix: u32, l: &[T], a: &[Vec<Vec<T>>], c: &[T]) -> Vec<String> {
    let mut issues = Vec::new();
    if radix < 2 {
        issues.push(format!("radix must be at least 2, got {radix}"));
    }
    let d = l.len();
    if d == 0 {
        issues.push("L is empty".to_string());
    }
    if c.len() != d {
        issues.push(format!("C has {} entries but L has {d}", c.len()));
    }
    if a.len() != radix as usize {
        issues.push(format!("radix {radix} needs {radix} matrices, got {}", a.len()));
    }
    for (r, m) in a.iter().enumerate() {
        if m.len() != d {
            issues.push(format!("A[{r}] has {} rows, expected {d}", m.len()));
        }
        for (i, row) in m.iter().enumerate() {
            if row.len() != d {
                issues.push(format!("A[{r}] row {i} has {} entries, expected {d}", row.len()));
            }
        }
    }
    issues
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordKind {
    Integer,
    Fractional,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitWord {
    pub digits: Vec<u32>,
    pub kind: WordKind,
}

impl DigitWord {
    /// Canonical expansion of n, most significant digit first; empty for 0.
    pub fn integer(mut n: u64, radix: u32) -> Self {
        let mut digits = Vec::new();
        while n > 0 {
            digits.push((n % radix as u64) as u32);
            n /= radix as u64;
        }
        digits.reverse();
        DigitWord { digits, kind: WordKind::Integer }
    }

    /// Exactly K digits of m (leading zeros kept), as the word of (0.w)_B = m/B^K.
    pub fn padded(mut m: u64, k: usize, radix: u32) -> Self {
        let mut digits = vec![0; k];
        for d in digits.iter_mut().rev() {
            *d = (m % radix as u64) as u32;
            m /= radix as u64;
        }
        DigitWord { digits, kind: WordKind::Fractional }
    }

    /// First m digits of x ∈ [0,1); the word of its B-adic truncation.
    pub fn fractional(x: &Rational, radix: u32, m: usize) -> Result<Self> {
        if x < &<Rational as Field>::zero() || x >= &<Rational as Field>::one() {
            return Err(Error::OutOfRange(format!("fractional digits need x in [0,1), got {x}")));
        }
        let b = BigInt::from(radix);
        let mut num = x.numer().clone();
        let den = x.denom().clone();
        let mut digits = Vec::with_capacity(m);
        for _ in 0..m {
            num *= &b;
            let (q, r) = num.div_rem(&den);
            digits.push(q.to_u32().unwrap());
            num = r;
        }
        Ok(DigitWord { digits, kind: WordKind::Fractional })
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// (0.w)_B as an exact rational.
    pub fn fraction_value(&self, radix: u32) -> Rational {
        let mut num = BigInt::zero();
        for &d in &self.digits {
            num = num * radix + d;
        }
        Rational::new(num, num_traits::pow(BigInt::from(radix), self.digits.len()))
    }
}

/// Number of digits of x's B-adic expansion when finite, up to `cap`.
pub fn badic_length(x: &Rational, radix: u32, cap: usize) -> Option<usize> {
    let b = BigInt::from(radix);
    let mut den = x.denom().clone();
    let mut k = 0;
    while !den.is_one() {
        let g = den.gcd(&b);
        if g.is_one() || k >= cap {
            return None;
        }
        den /= g;
        k += 1;
    }
    Some(k)
}

impl<T: Field> LinearRep<T> {
    pub fn new(radix: u32, l: Vec<T>, a: Vec<Mat<T>>, c: Vec<T>) -> Result<Self> {
        let rows: Vec<Vec<Vec<T>>> = a.iter().map(|m| m.to_rows()).collect();
        let issues = check_parts(radix, &l, &rows, &c);
        if !issues.is_empty() {
            return Err(Error::InvalidRep(issues.join("; ")));
        }
        Ok(LinearRep { radix, l, a, c, name: None, eigen_hints: vec![] })
    }

    pub fn from_rows(radix: u32, l: Vec<T>, a: Vec<Vec<Vec<T>>>, c: Vec<T>) -> Result<Self> {
        let issues = check_parts(radix, &l, &a, &c);
        if !issues.is_empty() {
            return Err(Error::InvalidRep(issues.join("; ")));
        }
        let a = a.into_iter().map(Mat::from_rows).collect::<Result<Vec<_>>>()?;
        Self::new(radix, l, a, c)
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn with_hints(mut self, hints: Vec<C64>) -> Self {
        self.eigen_hints = hints;
        self
    }

    pub fn radix(&self) -> u32 {
        self.radix
    }
    pub fn dim(&self) -> usize {
        self.l.len()
    }
    pub fn l(&self) -> &[T] {
        &self.l
    }
    pub fn c(&self) -> &[T] {
        &self.c
    }
    pub fn mats(&self) -> &[Mat<T>] {
        &self.a
    }
    pub fn mat(&self, r: u32) -> &Mat<T> {
        &self.a[r as usize]
    }

    pub fn q(&self) -> Mat<T> {
        self.a[1..].iter().fold(self.a[0].clone(), |acc, m| acc.add(m))
    }

    pub fn to_complex(&self) -> LinearRep<C64> {
        LinearRep {
            radix: self.radix,
            l: self.l.iter().map(|x| x.to_c64()).collect(),
            a: self.a.iter().map(|m| m.to_complex()).collect(),
            c: self.c.iter().map(|x| x.to_c64()).collect(),
            name: self.name.clone(),
            eigen_hints: self.eigen_hints.clone(),
        }
    }

    /// Same representation with every A_r multiplied by `alpha`.
    pub fn scaled(&self, alpha: &T) -> Self {
        let mut out = self.clone();
        out.a = self.a.iter().map(|m| m.scale(alpha)).collect();
        out
    }

    pub fn with_c(&self, c: Vec<T>) -> Result<Self> {
        if c.len() != self.dim() {
            return Err(Error::Shape("C length".into()));
        }
        let mut out = self.clone();
        out.c = c;
        Ok(out)
    }

    /// A_w for a digit sequence.
    pub fn word_matrix(&self, digits: &[u32]) -> Mat<T> {
        digits.iter().fold(Mat::identity(self.dim()), |acc, &r| acc.mul(self.mat(r)))
    }

    /// A_w·C, evaluated right to left on vectors.
    pub fn word_vector(&self, digits: &[u32]) -> Vec<T> {
        digits.iter().rev().fold(self.c.clone(), |v, &r| self.mat(r).mul_vec(&v))
    }

    pub fn eval_term(&self, n: u64) -> T {
        let w = DigitWord::integer(n, self.radix);
        let row = w.digits.iter().fold(self.l.clone(), |v, &r| self.mat(r).vec_mul(&v));
        crate::exactnum::dot(&row, &self.c)
    }

    pub fn validate(&self) -> Diagnostics {
        let q = self.q();
        Diagnostics {
            issues: vec![],
            insensitive: Some(self.is_insensitive()),
            q: Some(q.to_rows().iter().map(|r| r.iter().map(|x| x.render()).collect()).collect()),
        }
    }

    /// L·A_0 = L, exactly for rationals and within 1e-12 (relative to ‖L‖) for floats.
    pub fn is_insensitive(&self) -> bool {
        let la = self.a[0].vec_mul(&self.l);
        let scale = crate::exactnum::vec_inf_norm(&self.l).max(1.0);
        la.iter().zip(&self.l).all(|(x, y)| x.minus(y).negligible(scale, 1e-12))
    }

    /// Q^k C for k = 0..=k_max.
    pub fn q_powers_c(&self, k_max: usize) -> Vec<Vec<T>> {
        let q = self.q();
        let mut out = Vec::with_capacity(k_max + 1);
        out.push(self.c.clone());
        for k in 0..k_max {
            let next = q.mul_vec(&out[k]);
            out.push(next);
        }
        out
    }

    /// Partial sums Σ_{r'<r} A_{r'} for r = 0..=B.
    fn digit_prefix_sums(&self) -> Vec<Mat<T>> {
        let d = self.dim();
        let mut out = vec![Mat::zeros(d, d)];
        for m in &self.a {
            let next = out.last().unwrap().add(m);
            out.push(next);
        }
        out
    }

    pub fn running_sum_words(&self, k: usize, x: &Rational, mode: SumMode) -> Result<Vec<T>> {
        if x < &<Rational as Field>::zero() || x > &<Rational as Field>::one() {
            return Err(Error::OutOfRange(format!("x = {x} outside [0,1]")));
        }
        match mode {
            SumMode::Naive => self.running_sum_words_naive(k, x),
            SumMode::Digitwise => Ok(self.running_sum_words_digitwise(k, x)),
        }
    }

    fn running_sum_words_naive(&self, k: usize, x: &Rational) -> Result<Vec<T>> {
        let b = self.radix as u128;
        let count = b.checked_pow(k as u32).filter(|&c| c <= 1 << 22);
        let Some(count) = count else {
            return Err(Error::Budget { needed: b.saturating_pow(k as u32), budget: 1 << 22 });
        };
        // (0.w)_B = m/B^K ≤ x  ⇔  m ≤ ⌊x·B^K⌋
        let scaled = x * Rational::from_integer(BigInt::from(count));
        let top = scaled.floor().to_integer().to_u64().unwrap().min(count as u64 - 1);
        let mut acc = vec![T::zero(); self.dim()];
        for m in 0..=top {
            let w = DigitWord::padded(m, k, self.radix);
            acc = vec_add(&acc, &self.word_vector(&w.digits));
        }
        Ok(acc)
    }

    fn running_sum_words_digitwise(&self, k: usize, x: &Rational) -> Vec<T> {
        let qk = self.q_powers_c(k);
        if x.is_one() {
            return qk[k].clone();
        }
        let w = DigitWord::fractional(x, self.radix, k).expect("x in [0,1)");
        self.sum_words_below(&w.digits, &qk)
    }

    /// S_K at the B-adic point with the given K digits, innermost digit first:
    /// v ← (Σ_{r<x_k} A_r) Q^{K−k} C + A_{x_k} v, starting from S_0 = C.
    pub fn sum_words_below(&self, digits: &[u32], qk: &[Vec<T>]) -> Vec<T> {
        let pre = self.digit_prefix_sums();
        let k = digits.len();
        let mut v = self.c.clone();
        for (i, &r) in digits.iter().enumerate().rev() {
            let below = pre[r as usize].mul_vec(&qk[k - 1 - i]);
            v = vec_add(&below, &self.mat(r).mul_vec(&v));
        }
        v
    }

    /// 𝚺_N = Σ_{n=0}^{N} A_{w(n)} C over canonical words.
    pub fn running_sum_integers(&self, n: u64, path: SigmaPath) -> Vec<T> {
        match path {
            SigmaPath::Accumulate => {
                let mut acc = SigmaAccumulator::new(self);
                let mut out = acc.next_sum();
                for _ in 0..n {
                    out = acc.next_sum();
                }
                out
            }
            SigmaPath::Decompose => self.sigma_decomposed(n),
        }
    }

    /// (I − A_0)·Σ_{k≤K} Q^k C + S_{K+1}(N/B^{K+1}) with K = ⌊log_B N⌋.
    fn sigma_decomposed(&self, n: u64) -> Vec<T> {
        if n == 0 {
            return self.c.clone();
        }
        let k = DigitWord::integer(n, self.radix).len() - 1;
        let qk = self.q_powers_c(k + 1);
        let geo = qk[..=k].iter().fold(vec![T::zero(); self.dim()], |s, v| vec_add(&s, v));
        let first = vec_sub(&geo, &self.a[0].mul_vec(&geo));
        let w = DigitWord::padded(n, k + 1, self.radix);
        vec_add(&first, &self.sum_words_below(&w.digits, &qk))
    }

    pub fn radix_power(&self, t: u32) -> Result<Self> {
        if t == 0 {
            return Err(Error::OutOfRange("radix power needs T >= 1".into()));
        }
        let nb = (self.radix as u64).checked_pow(t).filter(|&v| v <= 1 << 20);
        let Some(nb) = nb else {
            return Err(Error::Budget { needed: (self.radix as u128).pow(t.min(30)), budget: 1 << 20 });
        };
        let a = (0..nb)
            .map(|s| self.word_matrix(&DigitWord::padded(s, t as usize, self.radix).digits))
            .collect();
        let mut out = LinearRep::new(nb as u32, self.l.clone(), a, self.c.clone())?;
        out.name = self.name.as_ref().map(|n| format!("{n}^{t}"));
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumMode {
    Naive,
    Digitwise,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SigmaPath {
    Accumulate,
    Decompose,
}

/// Yields 𝚺_0, 𝚺_1, 𝚺_2, … by exact accumulation. Keeps the prefix products
/// A_{w_1}⋯A_{w_k} of the current word so stepping n costs amortized O(1)
/// matrix products.
pub struct SigmaAccumulator<'a, T: Field> {
    rep: &'a LinearRep<T>,
    digits: Vec<u32>,
    prefix: Vec<Mat<T>>,
    sum: Vec<T>,
    started: bool,
}

impl<'a, T: Field> SigmaAccumulator<'a, T> {
    pub fn new(rep: &'a LinearRep<T>) -> Self {
        SigmaAccumulator {
            rep,
            digits: vec![],
            prefix: vec![Mat::identity(rep.dim())],
            sum: vec![T::zero(); rep.dim()],
            started: false,
        }
    }

    /// Returns the next running sum (𝚺_0 on the first call).
    pub fn next_sum(&mut self) -> Vec<T> {
        if self.started {
            self.increment();
        }
        self.started = true;
        let term = self.prefix.last().unwrap().mul_vec(&self.rep.c);
        self.sum = vec_add(&self.sum, &term);
        self.sum.clone()
    }

    /// The term A_{w(n)} C of the current n.
    pub fn current_term(&self) -> Vec<T> {
        self.prefix.last().unwrap().mul_vec(&self.rep.c)
    }

    fn increment(&mut self) {
        let b = self.rep.radix;
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.digits.insert(0, 1);
                for d in self.digits.iter_mut().skip(1) {
                    *d = 0;
                }
                self.prefix.truncate(1);
                break;
            }
            i -= 1;
            if self.digits[i] + 1 < b {
                self.digits[i] += 1;
                for d in self.digits.iter_mut().skip(i + 1) {
                    *d = 0;
                }
                self.prefix.truncate(i + 1);
                break;
            }
        }
        for j in self.prefix.len() - 1..self.digits.len() {
            let next = self.prefix[j].mul(self.rep.mat(self.digits[j]));
            self.prefix.push(next);
        }
    }
}
