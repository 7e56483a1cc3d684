//! Eigenvalues and Jordan chains of Q, the decomposition of C over the
//! Jordan basis, and closed forms for Q^K and its partial sums on a chain.

mod jordan;
pub mod poly;

pub use jordan::{
    chain_sum_coefficient, decompose_c, geometric_sum_on_chain, geometric_sum_on_vector, jordan_basis,
    qk_on_chain, qk_on_vector,
    CDecomposition, JordanChain,
};

use crate::error::{Error, Result};
use crate::exactnum::{singular_values, Field, Mat, Rational, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct Eigenvalue {
    pub value: C64,
    /// Present when the eigenvalue is a rational root of the exact characteristic polynomial.
    pub exact: Option<Rational>,
    pub multiplicity: usize,
}

impl Eigenvalue {
    pub fn rho(&self) -> f64 {
        self.value.norm()
    }

    /// Unit part; 1 by convention when ρ = 0.
    pub fn omega(&self) -> C64 {
        let r = self.rho();
        if r == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            self.value / r
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenStructure {
    pub eigenvalues: Vec<Eigenvalue>,
}

impl EigenStructure {
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|e| e.rho()).fold(0.0, f64::max)
    }
}

/// Numeric roots closer than this (relative to the matrix scale) are one
/// eigenvalue. Double precision resolves an m-fold root only to about
/// eps^{1/m}, so the exact 1e-9 would split defective eigenvalues.
const CLUSTER: f64 = 1e-6;

pub fn eigen_structure<T: Field>(q: &Mat<T>, tol: f64, hints: &[C64]) -> Result<EigenStructure> {
    if !q.is_square() {
        return Err(Error::Shape("eigenvalues of a non-square matrix".into()));
    }
    let scale = q.max_abs().max(1e-300);
    let mut eigs: Vec<Eigenvalue> = Vec::new();
    let numeric_poly: Vec<C64> = if T::EXACT {
        let qr: Mat<Rational> = q.map(|x| x.to_rational().unwrap());
        let (roots, rest) = poly::rational_roots(&poly::char_poly(&qr));
        for r in roots {
            match eigs.last_mut() {
                Some(e) if e.exact.as_ref() == Some(&r) => e.multiplicity += 1,
                _ => eigs.push(Eigenvalue { value: r.to_c64(), exact: Some(r), multiplicity: 1 }),
            }
        }
        rest.iter().map(|c| c.to_c64()).collect()
    } else {
        poly::char_poly(&q.to_complex())
    };
    let numeric = poly::aberth(&numeric_poly);

    let snapped: Vec<C64> = numeric
        .iter()
        .map(|z| {
            hints
                .iter()
                .copied()
                .filter(|h| (h - z).norm() <= CLUSTER * scale.max(1.0))
                .min_by(|a, b| (a - z).norm().partial_cmp(&(b - z).norm()).unwrap())
                .unwrap_or(*z)
        })
        .collect();
    for cluster in clusters(&snapped, CLUSTER * scale.max(1.0)) {
        let mean = cluster.iter().sum::<C64>() / cluster.len() as f64;
        let value = match hints.iter().copied().find(|h| *h == cluster[0]) {
            Some(h) => h,
            None => poly::refine_multiple_root(&numeric_poly, mean, cluster.len()),
        };
        eigs.push(Eigenvalue { value, exact: None, multiplicity: cluster.len() });
    }

    let qc = q.to_complex();
    for e in eigs.iter().filter(|e| e.exact.is_none()) {
        let sv = singular_values(&qc.shift(&e.value));
        let residual = sv.last().copied().unwrap_or(0.0) / scale.max(1.0);
        if residual > tol.max(1e-6) {
            return Err(Error::Eigen {
                residual,
                note: format!("eigenvalue {} does not make Q - λI singular", e.value),
            });
        }
    }

    eigs.sort_by(|a, b| {
        b.rho()
            .partial_cmp(&a.rho())
            .unwrap()
            .then(a.value.arg().partial_cmp(&b.value.arg()).unwrap())
    });
    Ok(EigenStructure { eigenvalues: eigs })
}

fn clusters(points: &[C64], radius: f64) -> Vec<Vec<C64>> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, i: usize) -> usize {
        if p[i] != i {
            let r = find(p, p[i]);
            p[i] = r;
        }
        p[i]
    }
    for i in 0..n {
        for j in i + 1..n {
            if (points[i] - points[j]).norm() <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<(usize, Vec<C64>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => g.1.push(points[i]),
            None => groups.push((r, vec![points[i]])),
        }
    }
    groups.into_iter().map(|g| g.1).collect()
}

pub fn spectral_radius<T: Field>(m: &Mat<T>) -> Result<f64> {
    if m.rows() == 0 {
        return Ok(0.0);
    }
    Ok(eigen_structure(m, crate::exactnum::TOL, &[])?.spectral_radius())
}

/// Spectral radius of a complex matrix without the exact-root pass or
/// residual checks; used inside product enumerations.
pub fn spectral_radius_fast(m: &Mat<C64>) -> f64 {
    poly::aberth(&poly::char_poly(m)).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
