use crate::error::{Error, Result};
use crate::exactnum::{
    binom, nullspace_scaled, solve, vec_inf_norm, Field, Mat, Rational, SpanBasis, C64,
};

use super::{eigen_structure, Eigenvalue};

/// Vectors V^(0)..V^(ν−1) with Q V^(0) = ρω V^(0) and
/// Q V^(j) = ρω V^(j) + V^(j−1).
#[derive(Clone, Debug, PartialEq)]
pub struct JordanChain {
    pub eigenvalue: Eigenvalue,
    pub vectors: Vec<Vec<C64>>,
    pub exact_vectors: Option<Vec<Vec<Rational>>>,
}

impl JordanChain {
    pub fn height(&self) -> usize {
        self.vectors.len()
    }
    pub fn rho(&self) -> f64 {
        self.eigenvalue.rho()
    }
    pub fn omega(&self) -> C64 {
        self.eigenvalue.omega()
    }
    pub fn value(&self) -> C64 {
        self.eigenvalue.value
    }

    /// Chain from given vectors, checked against Q.
    pub fn from_vectors(q: &Mat<C64>, value: C64, vectors: Vec<Vec<C64>>) -> Result<Self> {
        let chain = JordanChain {
            eigenvalue: Eigenvalue { value, exact: None, multiplicity: vectors.len() },
            vectors,
            exact_vectors: None,
        };
        let res = chain.residual(q);
        if res > 1e-9 * q.max_abs().max(1.0) {
            return Err(Error::InvalidRep(format!("chain relations fail, residual {res:.3e}")));
        }
        Ok(chain)
    }

    pub fn from_exact(q: &Mat<Rational>, value: Rational, vectors: Vec<Vec<Rational>>) -> Result<Self> {
        let n = q.shift(&value);
        for j in 0..vectors.len() {
            let lhs = n.mul_vec(&vectors[j]);
            let rhs = if j == 0 { vec![<Rational as Field>::zero(); q.rows()] } else { vectors[j - 1].clone() };
            if lhs != rhs {
                return Err(Error::InvalidRep(format!("chain relation {j} fails exactly")));
            }
        }
        Ok(JordanChain {
            eigenvalue: Eigenvalue { value: value.to_c64(), exact: Some(value), multiplicity: vectors.len() },
            vectors: vectors.iter().map(|v| v.iter().map(|x| x.to_c64()).collect()).collect(),
            exact_vectors: Some(vectors),
        })
    }

    /// max_j ‖Q V^(j) − ρω V^(j) − V^(j−1)‖_∞
    pub fn residual(&self, q: &Mat<C64>) -> f64 {
        let lam = self.value();
        (0..self.height())
            .map(|j| {
                let qv = q.mul_vec(&self.vectors[j]);
                (0..qv.len())
                    .map(|i| {
                        let prev = if j == 0 { C64::new(0.0, 0.0) } else { self.vectors[j - 1][i] };
                        (qv[i] - lam * self.vectors[j][i] - prev).norm()
                    })
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// Columns V^(0)..V^(ν−1) as a d×ν matrix.
    pub fn matrix(&self) -> Mat<C64> {
        Mat::from_cols(&self.vectors)
    }

    /// Upper ν×ν Jordan block: ρω on the diagonal, 1 above it.
    pub fn jordan_block(&self) -> Mat<C64> {
        let nu = self.height();
        Mat::from_fn(nu, nu, |i, j| {
            if i == j {
                self.value()
            } else if j == i + 1 {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }
}

/// Jordan chains of Q from the nullspace filtration of (Q − λI)^k, highest
/// chains first within each eigenvalue. Exact whenever Q and λ are rational.
pub fn jordan_basis<T: Field>(q: &Mat<T>, tol: f64, hints: &[C64]) -> Result<Vec<JordanChain>> {
    let es = eigen_structure(q, tol, hints)?;
    let mut out = Vec::new();
    for e in es.eigenvalues {
        match (&e.exact, T::EXACT) {
            (Some(lam), true) => {
                let qr: Mat<Rational> = q.map(|x| x.to_rational().unwrap());
                for vecs in chains_for(&qr, lam, e.multiplicity, 0.0)? {
                    out.push(JordanChain {
                        eigenvalue: e.clone(),
                        vectors: vecs.iter().map(|v| v.iter().map(|x| x.to_c64()).collect()).collect(),
                        exact_vectors: Some(vecs),
                    });
                }
            }
            _ => {
                for vecs in chains_for(&q.to_complex(), &e.value, e.multiplicity, tol)? {
                    out.push(JordanChain { eigenvalue: e.clone(), vectors: vecs, exact_vectors: None });
                }
            }
        }
    }
    Ok(out)
}

fn chains_for<T: Field>(q: &Mat<T>, lam: &T, mult: usize, tol: f64) -> Result<Vec<Vec<Vec<T>>>> {
    let n = q.shift(lam);
    let mut kernels: Vec<Vec<Vec<T>>> = vec![vec![]];
    let mut power = Mat::identity(q.rows());
    let base = q.max_abs() + lam.abs();
    while kernels.last().unwrap().len() < mult {
        if kernels.len() > mult {
            return Err(Error::UnstableRank(format!(
                "kernel dimensions {:?} never reach multiplicity {mult}",
                kernels.iter().map(|k| k.len()).collect::<Vec<_>>()
            )));
        }
        power = power.mul(&n);
        let k = nullspace_scaled(&power, tol, base.powi(kernels.len() as i32));
        if k.len() <= kernels.last().unwrap().len() || k.len() > mult {
            return Err(Error::UnstableRank(format!(
                "ker (Q-λI)^{} has dimension {} (multiplicity {mult})",
                kernels.len(),
                k.len()
            )));
        }
        kernels.push(k);
    }

    let top = kernels.len() - 1;
    let mut tops: Vec<(usize, Vec<T>)> = Vec::new();
    for k in (1..=top).rev() {
        let mut span = SpanBasis::new(tol);
        for v in &kernels[k - 1] {
            span.insert(v);
        }
        for (h, v) in &tops {
            let mut w = v.clone();
            for _ in 0..h - k {
                w = n.mul_vec(&w);
            }
            span.insert(&w);
        }
        for x in &kernels[k] {
            if span.insert(x) {
                tops.push((k, normalize(x)));
            }
        }
    }
    Ok(tops
        .into_iter()
        .map(|(h, v)| {
            let mut chain = vec![v];
            for _ in 1..h {
                let next = n.mul_vec(chain.last().unwrap());
                chain.push(next);
            }
            chain.reverse();
            chain
        })
        .collect())
}

/// Scales so the first entry of largest modulus becomes exactly 1.
fn normalize<T: Field>(v: &[T]) -> Vec<T> {
    let m = vec_inf_norm(v);
    let i = v.iter().position(|x| x.abs() == m).unwrap_or(0);
    let inv = T::one().over(&v[i]);
    let mut out: Vec<T> = v.iter().map(|x| x.times(&inv)).collect();
    out[i] = T::one();
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct CDecomposition {
    /// γ per chain, indexed like the chain vectors.
    pub gamma: Vec<Vec<C64>>,
    pub exact_gamma: Option<Vec<Vec<Rational>>>,
    pub residual: f64,
    c_scale: f64,
}

impl CDecomposition {
    /// Whether γ for V^(j) of chain i is nonzero: exact when available,
    /// otherwise relative to ‖C‖.
    pub fn nonzero(&self, chain: usize, j: usize, chains: &[JordanChain]) -> bool {
        if let Some(ex) = &self.exact_gamma {
            return !ex[chain][j].is_zero();
        }
        let v = vec_inf_norm(&chains[chain].vectors[j]);
        self.gamma[chain][j].norm() * v > 1e-9 * self.c_scale.max(1e-300)
    }

    /// The component of C along chain i: Σ_j γ_j V^(j).
    pub fn component(&self, chain: usize, chains: &[JordanChain]) -> Vec<C64> {
        let d = chains[chain].vectors[0].len();
        let mut out = vec![C64::new(0.0, 0.0); d];
        for (g, v) in self.gamma[chain].iter().zip(&chains[chain].vectors) {
            for (o, x) in out.iter_mut().zip(v) {
                *o += g * x;
            }
        }
        out
    }
}

/// Coordinates of C over the union of chain vectors.
pub fn decompose_c(chains: &[JordanChain], c: &[C64], exact_c: Option<&[Rational]>) -> Result<CDecomposition> {
    let cols: Vec<Vec<C64>> = chains.iter().flat_map(|ch| ch.vectors.iter().cloned()).collect();
    if cols.len() != c.len() {
        return Err(Error::Singular);
    }
    let split = |flat: Vec<C64>| -> Vec<Vec<C64>> {
        let mut it = flat.into_iter();
        chains.iter().map(|ch| (0..ch.height()).map(|_| it.next().unwrap()).collect()).collect()
    };
    let exact_gamma = match exact_c {
        Some(ce) if chains.iter().all(|ch| ch.exact_vectors.is_some()) => {
            let ecols: Vec<Vec<Rational>> =
                chains.iter().flat_map(|ch| ch.exact_vectors.clone().unwrap()).collect();
            let g = solve(&Mat::from_cols(&ecols), ce, 0.0)?;
            let mut it = g.into_iter();
            Some(chains.iter().map(|ch| (0..ch.height()).map(|_| it.next().unwrap()).collect()).collect::<Vec<Vec<Rational>>>())
        }
        _ => None,
    };
    let p = Mat::from_cols(&cols);
    let flat: Vec<C64> = match &exact_gamma {
        Some(g) => g.iter().flatten().map(|x| x.to_c64()).collect(),
        None => solve(&p, c, 1e-12)?,
    };
    let recon = p.mul_vec(&flat);
    let residual = recon.iter().zip(c).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let c_scale = vec_inf_norm(c);
    if residual > 1e-9 * c_scale.max(1.0) {
        return Err(Error::Singular);
    }
    Ok(CDecomposition { gamma: split(flat), exact_gamma, residual, c_scale })
}

/// Q^K V^(top) = Σ_{j≤top} C(K, top−j)·(ρω)^{K−top+j}·V^(j).
pub fn qk_on_vector(chain: &JordanChain, top: usize, k: u64) -> Vec<C64> {
    let d = chain.vectors[0].len();
    let lam = chain.value();
    let mut out = vec![C64::new(0.0, 0.0); d];
    for j in 0..=top {
        let l = (top - j) as u64;
        if l > k {
            continue;
        }
        let coef = lam.powu((k - l) as u32) * binom(k, l);
        for (o, x) in out.iter_mut().zip(&chain.vectors[j]) {
            *o += coef * x;
        }
    }
    out
}

pub fn qk_on_chain(chain: &JordanChain, k: u64) -> Vec<C64> {
    qk_on_vector(chain, chain.height() - 1, k)
}

/// g_ℓ(α, K) = Σ_{k=ℓ}^{K} C(k,ℓ) α^{k−ℓ}, by the closed summation formula.
pub fn chain_sum_coefficient(alpha: C64, is_one: bool, l: u64, k: u64) -> C64 {
    if is_one {
        return C64::new(binom(k, l + 1) + binom(k, l), 0.0);
    }
    let one = C64::new(1.0, 0.0);
    let am1 = alpha - one;
    let pw = |e: i64| if e >= 0 { alpha.powu(e as u32) } else { one / alpha.powu((-e) as u32) };
    let (ki, li) = (k as i64, l as i64);
    let mut s = pw(ki - li + 1) * binom(k, l) / am1;
    for j in 1..=l {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        if j > l || l - j > k {
            continue;
        }
        s += pw(ki - li + j as i64) * (sign * binom(k, l - j)) / am1.powu(j as u32 + 1);
    }
    let sign = if (l + 1) % 2 == 0 { 1.0 } else { -1.0 };
    s + C64::new(sign, 0.0) / am1.powu(l as u32 + 1)
}

/// Σ_{k=0}^{K} Q^k V^(ν−1), per chain index via the summation formula.
pub fn geometric_sum_on_chain(chain: &JordanChain, k: u64) -> Vec<C64> {
    geometric_sum_on_vector(chain, chain.height() - 1, k)
}

pub fn geometric_sum_on_vector(chain: &JordanChain, top: usize, k: u64) -> Vec<C64> {
    let d = chain.vectors[0].len();
    let alpha = chain.value();
    let is_one = match &chain.eigenvalue.exact {
        Some(x) => x == &<Rational as Field>::one(),
        None => (alpha - 1.0).norm() <= 1e-9,
    };
    let mut out = vec![C64::new(0.0, 0.0); d];
    for j in 0..=top {
        let g = chain_sum_coefficient(alpha, is_one, (top - j) as u64, k);
        for (o, x) in out.iter_mut().zip(&chain.vectors[j]) {
            *o += g * x;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;

    fn rm(rows: &[&[i64]]) -> Mat<Rational> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    fn close(a: &[C64], b: &[C64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol * (1.0 + y.norm()))
    }

    #[test]
    fn defective_block_gives_one_chain() {
        let q = rm(&[&[2, 1, 0], &[0, 2, 1], &[0, 0, 2]]);
        let chains = jordan_basis(&q, 1e-9, &[]).unwrap();
        assert_eq!(chains.len(), 1);
        assert_eq!(chains[0].height(), 3);
        let ex = chains[0].exact_vectors.clone().unwrap();
        JordanChain::from_exact(&q, int(2), ex).unwrap();
    }

    #[test]
    fn mixed_blocks() {
        // blocks J_2(1), J_1(1), J_1(-1), conjugated by an integer matrix
        let j = rm(&[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, -1]]);
        let p = rm(&[&[1, 2, 0, 1], &[0, 1, 1, 0], &[1, 0, 1, 0], &[0, 0, 1, 1]]);
        let pinv = crate::exactnum::inverse(&p, 0.0).unwrap();
        let q = p.mul(&j).mul(&pinv);
        let chains = jordan_basis(&q, 1e-9, &[]).unwrap();
        let mut heights: Vec<usize> = chains.iter().map(|c| c.height()).collect();
        heights.sort();
        assert_eq!(heights, vec![1, 1, 2]);
        for ch in &chains {
            assert!(ch.residual(&q.to_complex()) < 1e-12);
        }
        let c: Vec<Rational> = vec![int(1), int(-2), int(3), int(5)];
        let cc: Vec<C64> = c.iter().map(|x| x.to_c64()).collect();
        let dec = decompose_c(&chains, &cc, Some(&c)).unwrap();
        assert!(dec.residual < 1e-12);
        assert!(dec.exact_gamma.is_some());
    }

    #[test]
    fn complex_rotation_chains() {
        let c = |x: f64| C64::new(x, 0.0);
        let q = Mat::from_rows(vec![vec![c(0.0), c(-1.0)], vec![c(1.0), c(0.0)]]).unwrap();
        let chains = jordan_basis(&q, 1e-9, &[]).unwrap();
        assert_eq!(chains.len(), 2);
        for ch in &chains {
            assert!(ch.residual(&q) < 1e-12);
            assert!((ch.rho() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_forms_match_powers() {
        let q = rm(&[&[3, 1, 0], &[0, 3, 1], &[0, 0, 3]]);
        let qc = q.to_complex();
        let ch = &jordan_basis(&q, 1e-9, &[]).unwrap()[0];
        let top = ch.vectors[2].clone();
        let mut pw = top.clone();
        let mut sum = top.clone();
        for k in 1..=9u64 {
            pw = qc.mul_vec(&pw);
            for (s, x) in sum.iter_mut().zip(&pw) {
                *s += x;
            }
            assert!(close(&qk_on_chain(ch, k), &pw, 1e-12));
            assert!(close(&geometric_sum_on_chain(ch, k), &sum, 1e-12));
        }
    }

    #[test]
    fn geometric_sum_at_eigenvalue_one() {
        let q = rm(&[&[1, 1], &[0, 1]]);
        let qc = q.to_complex();
        let ch = &jordan_basis(&q, 1e-9, &[]).unwrap()[0];
        let mut pw = ch.vectors[1].clone();
        let mut sum = pw.clone();
        for k in 1..=12u64 {
            pw = qc.mul_vec(&pw);
            for (s, x) in sum.iter_mut().zip(&pw) {
                *s += x;
            }
            assert!(close(&geometric_sum_on_chain(ch, k), &sum, 1e-12));
        }
    }
}
