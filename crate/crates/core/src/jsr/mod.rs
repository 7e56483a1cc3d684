//! Joint spectral radius λ* of the digit matrices: norm upper bounds λ_T,
//! product spectral-radius lower bounds, and the exact shortcut for
//! families generating a solvable Lie algebra.

mod lie;

pub use lie::{lie_algebra_closure, LieClosureReport};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{rank, Field, Mat, NormKind, Rational, C64};
use crate::linrep::LinearRep;
use crate::spectral::{poly, spectral_radius_fast};

pub const DEFAULT_BUDGET: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Attainment {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Witness {
    One,
    Infinity,
    Two,
    /// Value supplied by the caller.
    Given,
}

impl From<NormKind> for Witness {
    fn from(k: NormKind) -> Self {
        match k {
            NormKind::One => Witness::One,
            NormKind::Infinity => Witness::Infinity,
            NormKind::Two => Witness::Two,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JsrEstimate {
    pub lower: f64,
    pub upper: f64,
    pub witness_norm: Witness,
    #[serde(rename = "T")]
    pub t: u32,
    pub attained: Attainment,
    pub certificate: String,
    /// Exact λ* whose products are not bounded: ‖A_w‖ ≤ c·|w|^g·λ*^|w|.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth_degree: Option<u32>,
}

impl JsrEstimate {
    /// Best single value: the common bound when attained, else the upper bound.
    pub fn value(&self) -> f64 {
        self.upper
    }

    /// Caller-supplied value, trusted as exact.
    pub fn given(lambda: f64, attained: Attainment, note: &str) -> Self {
        JsrEstimate {
            lower: lambda,
            upper: lambda,
            witness_norm: Witness::Given,
            t: 0,
            attained,
            certificate: note.to_string(),
            growth_degree: None,
        }
    }
}

impl fmt::Display for JsrEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "λ* in [{:.12}, {:.12}] attained={:?} ({})",
            self.lower, self.upper, self.attained, self.certificate
        )
    }
}

fn check_budget(radix: u32, t: u32, budget: u128) -> Result<u128> {
    let needed = (radix as u128).checked_pow(t).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::Budget { needed, budget });
    }
    Ok(needed)
}

/// Calls `visit(word, A_w)` for every word of length 1..=t_max, depth first
/// in lexicographic order. Prefix products are shared.
fn for_each_product<T: Field>(
    mats: &[Mat<T>],
    t_max: u32,
    visit: &mut dyn FnMut(&[u32], &Mat<T>),
) {
    fn rec<T: Field>(
        mats: &[Mat<T>],
        t_max: u32,
        word: &mut Vec<u32>,
        prefix: &Mat<T>,
        visit: &mut dyn FnMut(&[u32], &Mat<T>),
    ) {
        for (r, a) in mats.iter().enumerate() {
            let p = if word.is_empty() { a.clone() } else { prefix.mul(a) };
            word.push(r as u32);
            visit(word, &p);
            if (word.len() as u32) < t_max {
                rec(mats, t_max, word, &p, visit);
            }
            word.pop();
        }
    }
    let d = mats.first().map_or(0, |m| m.rows());
    rec(mats, t_max, &mut Vec::new(), &Mat::identity(d), visit);
}

/// λ_T = max over |w| = T of ‖A_w‖^{1/T}, with the maximising word.
pub fn lambda_t_word<T: Field>(
    rep: &LinearRep<T>,
    t: u32,
    kind: NormKind,
    budget: u128,
) -> Result<(f64, Vec<u32>)> {
    if t == 0 {
        return Err(Error::OutOfRange("T must be at least 1".into()));
    }
    check_budget(rep.radix(), t, budget)?;
    let mats: Vec<Mat<C64>> = rep.mats().iter().map(|m| m.to_complex()).collect();
    let mut best = (-1.0f64, vec![]);
    for_each_product(&mats, t, &mut |w, p| {
        if w.len() as u32 == t {
            let n = p.induced_norm(kind).unwrap();
            if n > best.0 {
                best = (n, w.to_vec());
            }
        }
    });
    Ok((best.0.max(0.0).powf(1.0 / t as f64), best.1))
}

pub fn lambda_t<T: Field>(rep: &LinearRep<T>, t: u32, kind: NormKind, budget: u128) -> Result<f64> {
    Ok(lambda_t_word(rep, t, kind, budget)?.0)
}

/// λ_T^T exactly, for the one and infinity norms of a rational family.
pub fn lambda_t_power_exact(
    rep: &LinearRep<Rational>,
    t: u32,
    kind: NormKind,
    budget: u128,
) -> Result<Rational> {
    if t == 0 {
        return Err(Error::OutOfRange("T must be at least 1".into()));
    }
    check_budget(rep.radix(), t, budget)?;
    let mut best: Option<Rational> = None;
    let mut err = None;
    for_each_product(rep.mats(), t, &mut |w, p| {
        if w.len() as u32 == t {
            match p.exact_norm(kind) {
                Ok(n) => {
                    if best.as_ref().map_or(true, |b| &n > b) {
                        best = Some(n);
                    }
                }
                Err(e) => err = Some(e),
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(best.unwrap_or_else(<Rational as Field>::zero))
}

/// Spectral radius with the rational roots of the characteristic
/// polynomial taken exactly.
pub fn product_radius<T: Field>(m: &Mat<T>) -> f64 {
    if T::EXACT {
        let qr: Mat<Rational> = m.map(|x| x.to_rational().unwrap());
        let (roots, rest) = poly::rational_roots(&poly::char_poly(&qr));
        let exact = roots.iter().map(|r| r.abs()).fold(0.0, f64::max);
        let rest: Vec<C64> = rest.iter().map(|c| c.to_c64()).collect();
        poly::aberth(&rest).iter().map(|z| z.norm()).fold(exact, f64::max)
    } else {
        spectral_radius_fast(&m.to_complex())
    }
}

/// max over t_min ≤ |w| ≤ t_max of ρ(A_w)^{1/|w|}, searched in floats; the
/// maximising word is re-evaluated with `product_radius`.
fn lower_bound_between<T: Field>(rep: &LinearRep<T>, t_min: u32, t_max: u32, budget: u128) -> Result<(f64, Vec<u32>)> {
    check_budget(rep.radix(), t_max, budget)?;
    let mats: Vec<Mat<C64>> = rep.mats().iter().map(|m| m.to_complex()).collect();
    let mut best = (-1.0f64, vec![]);
    for_each_product(&mats, t_max, &mut |w, p| {
        if (w.len() as u32) < t_min {
            return;
        }
        let r = spectral_radius_fast(p).powf(1.0 / w.len() as f64);
        if r > best.0 * (1.0 + 1e-12) {
            best = (r, w.to_vec());
        }
    });
    let exact = product_radius(&rep.word_matrix(&best.1)).powf(1.0 / best.1.len() as f64);
    Ok((exact, best.1))
}

/// max over 1 ≤ |w| ≤ T_max of ρ(A_w)^{1/|w|}, with the maximising word.
pub fn jsr_lower_bound_word<T: Field>(rep: &LinearRep<T>, t_max: u32, budget: u128) -> Result<(f64, Vec<u32>)> {
    lower_bound_between(rep, 1, t_max, budget)
}

pub fn jsr_lower_bound<T: Field>(rep: &LinearRep<T>, t_max: u32, budget: u128) -> Result<f64> {
    Ok(jsr_lower_bound_word(rep, t_max, budget)?.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JsrConfig {
    pub budget: u128,
    /// Longest product length tried for both bounds.
    pub t_max: u32,
    pub tol: f64,
}

impl Default for JsrConfig {
    fn default() -> Self {
        JsrConfig { budget: DEFAULT_BUDGET, t_max: 8, tol: 1e-9 }
    }
}

/// Longest product length whose B^T words fit in the budget.
fn affordable_t(radix: u32, cfg: &JsrConfig) -> u32 {
    let b = radix as u128;
    let mut t_max = 1;
    while t_max < cfg.t_max && b.checked_pow(t_max + 1).map_or(false, |n| n <= cfg.budget) {
        t_max += 1;
    }
    t_max
}

/// A word w with ρ(A_w) = λ*^|w| and a Jordan block of size ≥ 2 at a
/// rational eigenvalue of that modulus: its powers grow linearly past λ*.
fn defective_word<T: Field>(rep: &LinearRep<T>, lambda_star: f64, t_max: u32, tol: f64) -> Option<Vec<u32>> {
    if !T::EXACT || lambda_star == 0.0 {
        return None;
    }
    let mut found = None;
    for_each_product(rep.mats(), t_max, &mut |w, p| {
        if found.is_some() {
            return;
        }
        let target = lambda_star.powi(w.len() as i32);
        let q: Mat<Rational> = p.map(|x| x.to_rational().unwrap());
        let (roots, _) = poly::rational_roots(&poly::char_poly(&q));
        for mu in roots {
            if (mu.abs() - target).abs() > tol * target.max(1.0) {
                continue;
            }
            let n = q.shift(&mu);
            if rank(&n, 0.0) > rank(&n.mul(&n), 0.0) {
                found = Some(w.to_vec());
                return;
            }
        }
    });
    found
}

pub fn jsr_estimate<T: Field>(rep: &LinearRep<T>, cfg: &JsrConfig) -> Result<JsrEstimate> {
    let lie = lie_algebra_closure(rep.mats(), if T::EXACT { 0.0 } else { cfg.tol })?;
    let t_max = affordable_t(rep.radix(), cfg);
    if lie.solvable {
        // λ* = max ρ(A_r) exactly; attainment still needs a norm certificate
        let rho = rep.mats().iter().map(product_radius).fold(0.0, f64::max);
        let head = format!(
            "solvable Lie algebra, derived dimensions {:?}; λ* = max ρ(A_r)",
            lie.derived_dims
        );
        let mut best = (f64::INFINITY, NormKind::One, 1u32);
        for kind in NormKind::ALL {
            for t in 1..=t_max {
                let (v, _) = lambda_t_word(rep, t, kind, cfg.budget)?;
                if v < best.0 * (1.0 - 1e-12) {
                    best = (v, kind, t);
                }
            }
        }
        let mut est = JsrEstimate {
            lower: rho,
            upper: rho,
            witness_norm: best.1.into(),
            t: best.2,
            attained: Attainment::Unknown,
            certificate: String::new(),
            growth_degree: None,
        };
        if best.0 <= rho + cfg.tol * rho.max(1.0) {
            est.attained = Attainment::Yes;
            est.certificate = format!("{head}; λ_{} {} norm = λ*", best.2, best.1.name());
        } else {
            // triangularisable: products grow at most polynomially, degree < d
            est.growth_degree = Some(rep.dim().saturating_sub(1) as u32);
            match defective_word(rep, rho, t_max.min(3), cfg.tol) {
                Some(w) => {
                    est.attained = Attainment::No;
                    est.certificate = format!("{head}; A_w defective at modulus λ*^|w| for w={w:?}");
                }
                None => {
                    est.certificate = format!("{head}; best λ_{} {} norm = {}", best.2, best.1.name(), best.0);
                }
            }
        }
        return Ok(est);
    }

    // lengths one at a time, stopping once the bounds meet
    let (mut lower, mut lword) = (0.0f64, vec![]);
    let mut upper = (f64::INFINITY, NormKind::One, 1u32, vec![]);
    for t in 1..=t_max {
        let (l, w) = lower_bound_between(rep, t, t, cfg.budget)?;
        if l > lower * (1.0 + 1e-12) {
            (lower, lword) = (l, w);
        }
        for kind in NormKind::ALL {
            let (v, w) = lambda_t_word(rep, t, kind, cfg.budget)?;
            if v < upper.0 * (1.0 - 1e-12) {
                upper = (v, kind, t, w);
            }
        }
        if upper.0 - lower <= cfg.tol * upper.0.max(1.0) {
            break;
        }
    }
    let attained = if upper.0 - lower <= cfg.tol * upper.0.max(1.0) {
        Attainment::Yes
    } else {
        Attainment::Unknown
    };
    let upper_v = if attained == Attainment::Yes { lower.max(upper.0) } else { upper.0 };
    Ok(JsrEstimate {
        lower: if attained == Attainment::Yes { upper_v } else { lower },
        upper: upper_v,
        witness_norm: upper.1.into(),
        t: upper.2,
        attained,
        certificate: format!(
            "ρ(A_w)^(1/|w|) at w={:?}; λ_{} {} norm at w={:?}",
            lword,
            upper.2,
            upper.1.name(),
            upper.3
        ),
        growth_degree: None,
    })
}
