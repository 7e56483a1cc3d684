//! Asymptotic expansions of the running sums S_K(x) over words of length K
//! and 𝚺_N over the integers 0..=N, assembled from the Jordan chains of Q
//! and the solutions of their dilation systems.
//!
//! Every contribution is an [`ExpansionTerm`]: a weight times
//! C(K, ℓ)·base^{K−ℓ} times either a coefficient function F^(j) of a chain
//! or a constant vector (I − A₀)V^(j).

mod profile;

pub use profile::{periodic_profile, Periodicity, Profile, ProfileSelector};

use serde::Serialize;

use crate::dilation::{holder_exponent, DilationSystem, SolutionGrid};
use crate::error::{Error, Result};
use crate::exactnum::{binom, vec_inf_norm, Field, Mat, Rational, C64};
use crate::jsr::{Attainment, JsrEstimate};
use crate::linrep::{DigitWord, LinearRep};
use crate::spectral::{decompose_c, jordan_basis, CDecomposition, JordanChain};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpansionConfig {
    /// Requested grid depth for the coefficient functions.
    pub depth: u32,
    /// The depth is lowered until B^depth fits.
    pub max_nodes: usize,
    pub tol: f64,
    /// Build coefficient grids even when ρ is not certified above λ*.
    pub force: bool,
}

impl Default for ExpansionConfig {
    fn default() -> Self {
        ExpansionConfig { depth: 12, max_nodes: 1 << 16, tol: 1e-9, force: false }
    }
}

impl ExpansionConfig {
    pub fn depth_for(&self, radix: u32) -> u32 {
        let mut depth = self.depth.max(1);
        while depth > 1 && (radix as u128).pow(depth) > self.max_nodes as u128 {
            depth -= 1;
        }
        depth
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Block {
    /// S_K(x) term of the word expansion.
    Words,
    /// Power part of the first term (I − A₀)Σ_{k≤K} Q^k V.
    FirstX,
    /// Constant part of the first term, ρω ≠ 1.
    FirstY,
    /// First term when ρω = 1.
    FirstZ,
    /// S_{K+1}(B^{t−1}).
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TermSource {
    /// F^(column) of the chain's dilation system.
    Coefficient { column: usize },
    /// (I − A₀)·V^(column).
    Vector { column: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionTerm {
    /// Index into the expansion's coefficient list.
    pub chain: usize,
    pub block: Block,
    pub base: C64,
    pub ell: u64,
    pub source: TermSource,
    pub weight: C64,
}

impl ExpansionTerm {
    pub fn rho(&self) -> f64 {
        self.base.norm()
    }

    pub fn omega(&self) -> C64 {
        let r = self.rho();
        if r == 0.0 {
            ONE
        } else {
            self.base / r
        }
    }

    /// C(K, ℓ)·base^{K−ℓ}; zero when K < ℓ.
    pub fn scale(&self, k: u64) -> C64 {
        if self.ell > k {
            return ZERO;
        }
        self.base.powu((k - self.ell) as u32) * binom(k, self.ell)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ErrorKind {
    /// C = 0: the sums vanish identically.
    Zero,
    /// O(λ^K) with λ above λ*.
    Lambda { lambda: f64 },
    /// O(λ*^K·K^m).
    Attained { lambda_star: f64, m: usize },
    /// λ* exact but products grow like T^degree: O(λ*^K·K^{m+degree}).
    Growth { lambda_star: f64, m: usize, degree: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorClass {
    #[serde(flatten)]
    pub kind: ErrorKind,
    pub attained: Attainment,
    pub radix: u32,
}

impl ErrorClass {
    /// (λ*, total power of K) for the two exact-λ* kinds.
    fn exact_power(&self) -> Option<(f64, usize)> {
        match self.kind {
            ErrorKind::Attained { lambda_star, m } => Some((lambda_star, m)),
            ErrorKind::Growth { lambda_star, m, degree } => Some((lambda_star, m + degree)),
            _ => None,
        }
    }

    /// λ^K or λ*^K·max(K, 1)^m.
    pub fn envelope_words(&self, k: u64) -> f64 {
        match self.kind {
            ErrorKind::Zero => 0.0,
            ErrorKind::Lambda { lambda } => lambda.powf(k as f64),
            _ => {
                let (l, m) = self.exact_power().unwrap();
                l.powf(k as f64) * (k.max(1) as f64).powi(m as i32)
            }
        }
    }

    /// N^{log_B λ} or N^{log_B λ*}·max(log_B N, 1)^m.
    pub fn envelope_integers(&self, n: f64) -> f64 {
        let s = n.max(1.0).ln() / (self.radix as f64).ln();
        match self.kind {
            ErrorKind::Zero => 0.0,
            ErrorKind::Lambda { lambda } => lambda.powf(s),
            _ => {
                let (l, m) = self.exact_power().unwrap();
                l.powf(s) * s.max(1.0).powi(m as i32)
            }
        }
    }

    pub fn describe_words(&self) -> String {
        match self.kind {
            ErrorKind::Zero => "0".into(),
            ErrorKind::Lambda { lambda } => format!("O({lambda}^K)"),
            _ => match self.exact_power().unwrap() {
                (l, 0) => format!("O({l}^K)"),
                (l, m) => format!("O({l}^K K^{m})"),
            },
        }
    }

    pub fn describe_integers(&self) -> String {
        let b = self.radix as f64;
        let exp = |l: f64| if l > 0.0 { format!("{}", l.ln() / b.ln()) } else { "-inf".into() };
        match self.kind {
            ErrorKind::Zero => "0".into(),
            ErrorKind::Lambda { lambda } => format!("O(N^{})", exp(lambda)),
            _ => match self.exact_power().unwrap() {
                (l, 0) => format!("O(N^{})", exp(l)),
                (l, m) => format!("O(N^{} log^{m} N)", exp(l)),
            },
        }
    }
}

/// Relative comparison used for every modulus decision.
fn above(rho: f64, lambda: f64, tol: f64) -> bool {
    rho > lambda + tol * lambda.max(1.0)
}

fn same_modulus(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.max(b).max(1.0)
}

/// max j with γ_j ≠ 0, plus one; zero when C has no component on the chain.
fn effective_height(dec: &CDecomposition, i: usize, chains: &[JordanChain]) -> usize {
    (0..chains[i].height()).rev().find(|&j| dec.nonzero(i, j, chains)).map_or(0, |j| j + 1)
}

/// m = largest effective height among chains of modulus λ*; the error class
/// follows the attainment of the estimate.
pub fn error_class(
    chains: &[JordanChain],
    dec: &CDecomposition,
    jsr: &JsrEstimate,
    lambda: f64,
    radix: u32,
    tol: f64,
) -> ErrorClass {
    let heights: Vec<usize> = (0..chains.len()).map(|i| effective_height(dec, i, chains)).collect();
    let kind = if heights.iter().all(|&h| h == 0) {
        ErrorKind::Zero
    } else if jsr.attained == Attainment::Yes || jsr.growth_degree.is_some() {
        let lambda_star = jsr.upper;
        let m = chains
            .iter()
            .zip(&heights)
            .filter(|(c, _)| same_modulus(c.rho(), lambda_star, tol))
            .map(|(_, &h)| h)
            .max()
            .unwrap_or(0);
        match jsr.growth_degree {
            Some(g) if jsr.attained != Attainment::Yes => {
                ErrorKind::Growth { lambda_star, m, degree: g as usize }
            }
            _ => ErrorKind::Attained { lambda_star, m },
        }
    } else {
        ErrorKind::Lambda { lambda }
    };
    ErrorClass { kind, attained: jsr.attained, radix }
}

/// λ* when attained or known exactly, else the midpoint between the upper
/// bound and the next eigenvalue modulus above it.
pub fn choose_lambda(moduli: &[f64], jsr: &JsrEstimate, tol: f64) -> (f64, String) {
    if jsr.attained == Attainment::Yes {
        return (jsr.upper, "lambda = lambda* (attained)".into());
    }
    if jsr.growth_degree.is_some() {
        return (jsr.upper, "lambda = lambda* (exact, not attained)".into());
    }
    let next = moduli
        .iter()
        .copied()
        .filter(|&r| above(r, jsr.upper, tol))
        .fold(f64::INFINITY, f64::min);
    if next.is_finite() {
        let l = 0.5 * (jsr.upper + next);
        (l, format!("lambda = midpoint of ({}, {next})", jsr.upper))
    } else {
        (jsr.upper, format!("lambda = {} (no eigenvalue above the bound)", jsr.upper))
    }
}

/// The component V of C on one generalized eigenspace of Q, with its
/// cyclic chain V^(j−1) = (Q − ρω)V^(j) and the coefficient functions.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainCoefficient {
    /// Chains of the Jordan basis sharing this eigenvalue.
    pub members: Vec<usize>,
    pub chain: JordanChain,
    /// γ over V^(0)..V^(ν−1).
    pub gamma: Vec<C64>,
    pub effective_height: usize,
    pub system: DilationSystem,
    pub grid: SolutionGrid,
    /// log_B(ρ/λ) when defined.
    pub holder: Option<f64>,
    /// (I − A₀)V^(j).
    pub first_vectors: Vec<Vec<C64>>,
}

/// What both algorithms share: the chains, the decomposition of C, λ and
/// the coefficient grids of the kept chains.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionCore {
    pub radix: u32,
    pub dim: usize,
    pub l: Vec<C64>,
    pub jsr: JsrEstimate,
    pub lambda: f64,
    pub lambda_rule: String,
    pub chains: Vec<JordanChain>,
    pub decomposition: CDecomposition,
    pub coefficients: Vec<ChainCoefficient>,
    pub terms: Vec<ExpansionTerm>,
    pub error: ErrorClass,
    pub grid_depth: u32,
    a0: Mat<C64>,
}

fn analyse<T: Field>(rep: &LinearRep<T>, jsr: &JsrEstimate, cfg: &ExpansionConfig) -> Result<ExpansionCore> {
    let chains = jordan_basis(&rep.q(), cfg.tol, &rep.eigen_hints)?;
    let c: Vec<C64> = rep.c().iter().map(|x| x.to_c64()).collect();
    let exact_c: Option<Vec<Rational>> =
        if T::EXACT { rep.c().iter().map(|x| x.to_rational()).collect() } else { None };
    let dec = decompose_c(&chains, &c, exact_c.as_deref())?;
    let moduli: Vec<f64> = chains.iter().map(|c| c.rho()).collect();
    let (lambda, lambda_rule) = choose_lambda(&moduli, jsr, cfg.tol);
    let error = error_class(&chains, &dec, jsr, lambda, rep.radix(), cfg.tol);
    let a0 = rep.mat(0).to_complex();
    let depth = cfg.depth_for(rep.radix());

    let mut coefficients = Vec::new();
    let mut done = vec![false; chains.len()];
    for first in 0..chains.len() {
        if done[first] {
            continue;
        }
        let members: Vec<usize> =
            (first..chains.len()).filter(|&i| chains[i].eigenvalue.value == chains[first].eigenvalue.value).collect();
        for &i in &members {
            done[i] = true;
        }
        let h = members.iter().map(|&i| effective_height(&dec, i, &chains)).max().unwrap_or(0);
        if h == 0 || !above(chains[first].rho(), lambda, cfg.tol) {
            continue;
        }
        let chain = cyclic_chain(rep, &chains, &dec, &members, h)?;
        let mut system = DilationSystem::from_chain(rep, &chain)?;
        system.check_admissible(jsr, cfg.force).map_err(|e| match e {
            Error::NoSolutionGuarantee { rho, lambda, note } => Error::NoSolutionGuarantee {
                rho,
                lambda,
                note: format!("eigenvalue {}: {note}", chain.value()),
            },
            other => other,
        })?;
        let grid = system.grid(depth)?;
        let first_vectors = chain.vectors.iter().map(|v| crate::exactnum::vec_sub(v, &a0.mul_vec(v))).collect();
        let mut gamma = vec![ZERO; h];
        gamma[h - 1] = ONE;
        coefficients.push(ChainCoefficient {
            members,
            holder: holder_exponent(chain.rho(), lambda, rep.radix()).ok(),
            chain,
            gamma,
            effective_height: h,
            system,
            grid,
            first_vectors,
        });
    }
    Ok(ExpansionCore {
        radix: rep.radix(),
        dim: rep.dim(),
        l: rep.l().iter().map(|x| x.to_c64()).collect(),
        jsr: jsr.clone(),
        lambda,
        lambda_rule,
        chains,
        decomposition: dec,
        coefficients,
        terms: vec![],
        error,
        grid_depth: depth,
        a0,
    })
}

/// The cyclic chain generated by Σ_{i∈members} Σ_j γ_{ij} V_i^(j); its
/// height is the largest effective height h in the group. Exact when the
/// eigenvalue and the decomposition are.
fn cyclic_chain<T: Field>(
    rep: &LinearRep<T>,
    chains: &[JordanChain],
    dec: &CDecomposition,
    members: &[usize],
    h: usize,
) -> Result<JordanChain> {
    let lead = &chains[members[0]];
    let d = rep.dim();
    if let (Some(value), Some(eg)) = (&lead.eigenvalue.exact, &dec.exact_gamma) {
        if T::EXACT && members.iter().all(|&i| chains[i].exact_vectors.is_some()) {
            let q: Mat<Rational> = rep.q().map(|x| x.to_rational().unwrap());
            let mut top = vec![<Rational as Field>::zero(); d];
            for &i in members {
                for (g, v) in eg[i].iter().zip(chains[i].exact_vectors.as_ref().unwrap()) {
                    top = crate::exactnum::vec_add(&top, &crate::exactnum::vec_scale(v, g));
                }
            }
            let n = q.shift(value);
            let mut vectors = vec![top];
            for _ in 1..h {
                let next = n.mul_vec(vectors.last().unwrap());
                vectors.push(next);
            }
            vectors.reverse();
            return JordanChain::from_exact(&q, value.clone(), vectors);
        }
    }
    let q = rep.q().to_complex();
    let mut top = vec![ZERO; d];
    for &i in members {
        for (o, x) in top.iter_mut().zip(dec.component(i, chains)) {
            *o += x;
        }
    }
    let n = q.shift(&lead.value());
    let mut vectors = vec![top];
    for _ in 1..h {
        let next = n.mul_vec(vectors.last().unwrap());
        vectors.push(next);
    }
    vectors.reverse();
    let mut chain = JordanChain::from_vectors(&q, lead.value(), vectors)?;
    chain.eigenvalue = lead.eigenvalue.clone();
    chain.eigenvalue.multiplicity = h;
    Ok(chain)
}

/// Sums weights of terms that differ only in weight, keeping first-seen order.
fn merge(terms: Vec<ExpansionTerm>) -> Vec<ExpansionTerm> {
    let mut out: Vec<ExpansionTerm> = Vec::new();
    for t in terms {
        match out.iter_mut().find(|o| {
            o.chain == t.chain && o.block == t.block && o.ell == t.ell && o.source == t.source && o.base == t.base
        }) {
            Some(o) => o.weight += t.weight,
            None => out.push(t),
        }
    }
    out.retain(|t| t.weight != ZERO);
    out
}

impl ExpansionCore {
    /// Σ terms at K with the coefficient matrices 𝔽 supplied per chain.
    fn eval_with(&self, k: u64, coeff: &[Mat<C64>]) -> Vec<C64> {
        self.eval_selected(k, coeff, &|_| true)
    }

    fn eval_selected(&self, k: u64, coeff: &[Mat<C64>], keep: &dyn Fn(&ExpansionTerm) -> bool) -> Vec<C64> {
        let mut out = vec![ZERO; self.dim];
        for t in self.terms.iter().filter(|t| keep(t)) {
            let s = t.weight * t.scale(k);
            if s == ZERO {
                continue;
            }
            let cc = &self.coefficients[t.chain];
            match t.source {
                TermSource::Coefficient { column } => {
                    for (i, o) in out.iter_mut().enumerate() {
                        *o += s * coeff[t.chain][(i, column)];
                    }
                }
                TermSource::Vector { column } => {
                    for (o, v) in out.iter_mut().zip(&cc.first_vectors[column]) {
                        *o += s * v;
                    }
                }
            }
        }
        out
    }

    fn coeff_interpolated(&self, x: f64) -> Vec<Mat<C64>> {
        self.coefficients.iter().map(|c| c.grid.interpolate(x)).collect()
    }

    /// L·v.
    pub fn project(&self, v: &[C64]) -> C64 {
        self.l.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    pub fn a0(&self) -> &Mat<C64> {
        &self.a0
    }

    /// Terms whose base has modulus ρ.
    pub fn terms_with_modulus(&self, rho: f64, tol: f64) -> Vec<&ExpansionTerm> {
        self.terms.iter().filter(|t| same_modulus(t.rho(), rho, tol)).collect()
    }

    /// Smallest Hölder exponent over the kept chains.
    pub fn holder_exponent(&self) -> Option<f64> {
        self.coefficients.iter().filter_map(|c| c.holder).fold(None, |m, h| Some(m.map_or(h, |m: f64| m.min(h))))
    }
}

/// Expansion of S_K(x).
#[derive(Clone, Debug, PartialEq)]
pub struct WordExpansion {
    pub core: ExpansionCore,
}

pub fn lrtoae1<T: Field>(rep: &LinearRep<T>, jsr: &JsrEstimate) -> Result<WordExpansion> {
    lrtoae1_with(rep, jsr, &ExpansionConfig::default())
}

/// S_K^{V^(j)}(x) ≈ Σ_{i≤j} C(K, j−i)·(ρω)^{K−j+i}·F^(i)(x), weighted by γ_j.
pub fn lrtoae1_with<T: Field>(rep: &LinearRep<T>, jsr: &JsrEstimate, cfg: &ExpansionConfig) -> Result<WordExpansion> {
    let mut core = analyse(rep, jsr, cfg)?;
    let mut terms = Vec::new();
    for (ci, cc) in core.coefficients.iter().enumerate() {
        for j in 0..cc.effective_height {
            for i in 0..=j {
                terms.push(ExpansionTerm {
                    chain: ci,
                    block: Block::Words,
                    base: cc.chain.value(),
                    ell: (j - i) as u64,
                    source: TermSource::Coefficient { column: i },
                    weight: cc.gamma[j],
                });
            }
        }
    }
    core.terms = merge(terms);
    Ok(WordExpansion { core })
}

/// A_K(x) with the coefficients interpolated on their grids.
pub fn eval_expansion_words(exp: &WordExpansion, k: u64, x: f64) -> Vec<C64> {
    exp.core.eval_with(k, &exp.core.coeff_interpolated(x))
}

/// A_K(x) at a B-adic x with the coefficients evaluated exactly.
pub fn eval_expansion_words_exact(exp: &WordExpansion, k: u64, x: &Rational) -> Result<Vec<C64>> {
    let coeff: Vec<Mat<C64>> =
        exp.core.coefficients.iter().map(|c| c.system.eval_rational(x)).collect::<Result<_>>()?;
    Ok(exp.core.eval_with(k, &coeff))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// λ ≥ 1: only the X part of the first term is kept.
    LambdaAtLeastOne,
    /// λ < 1: X + Y for ρω ≠ 1, Z for ρω = 1.
    LambdaBelowOne,
}

/// Expansion of 𝚺_N.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegerExpansion {
    pub core: ExpansionCore,
    pub branch: Branch,
    /// |λ − 1| within tolerance; the λ ≥ 1 branch was taken.
    pub lambda_near_one: bool,
    /// In the λ < 1 branch: the constant Σ_k (I − A₀)Q^k C over the dropped
    /// chains. It stays in the error term, as in the algorithm; reported so
    /// a caller can judge it.
    pub dropped_constant: Vec<C64>,
}

pub fn lrtoae2<T: Field>(rep: &LinearRep<T>, jsr: &JsrEstimate) -> Result<IntegerExpansion> {
    lrtoae2_with(rep, jsr, &ExpansionConfig::default())
}

fn is_one(chain: &JordanChain, tol: f64) -> bool {
    match &chain.eigenvalue.exact {
        Some(x) => x == &<Rational as Field>::one(),
        None => (chain.value() - ONE).norm() <= tol,
    }
}

/// Y_ℓ = (−1)^{ℓ+1}/(α − 1)^{ℓ+1}, the constant of Σ_{k=ℓ}^{K} C(k,ℓ)α^{k−ℓ}.
fn y_coefficient(alpha: C64, l: u64) -> C64 {
    let sign = if (l + 1) % 2 == 0 { 1.0 } else { -1.0 };
    C64::new(sign, 0.0) / (alpha - ONE).powu(l as u32 + 1)
}

pub fn lrtoae2_with<T: Field>(rep: &LinearRep<T>, jsr: &JsrEstimate, cfg: &ExpansionConfig) -> Result<IntegerExpansion> {
    let mut core = analyse(rep, jsr, cfg)?;
    let lambda_near_one = same_modulus(core.lambda, 1.0, cfg.tol);
    let branch = if core.lambda >= 1.0 || lambda_near_one { Branch::LambdaAtLeastOne } else { Branch::LambdaBelowOne };

    let mut terms = Vec::new();
    for (ci, cc) in core.coefficients.iter().enumerate() {
        let alpha = cc.chain.value();
        let unit = is_one(&cc.chain, cfg.tol);
        let mut push = |block, base, ell, source, weight| {
            terms.push(ExpansionTerm { chain: ci, block, base, ell, source, weight });
        };
        for j in 0..cc.effective_height {
            let g = cc.gamma[j];
            for i in 0..=j {
                let l = (j - i) as u64;
                let vec = TermSource::Vector { column: i };
                if unit {
                    // Σ_{k=ℓ}^{K} C(k, ℓ) = C(K, ℓ+1) + C(K, ℓ)
                    push(Block::FirstZ, ONE, l + 1, vec, g);
                    push(Block::FirstZ, ONE, l, vec, g);
                } else {
                    // C(K,ℓ)α^{K−ℓ+1}/(α−1) + Σ_{p=1}^{ℓ} (−1)^p C(K,ℓ−p) α^{K−ℓ+p}/(α−1)^{p+1}
                    push(Block::FirstX, alpha, l, vec, g * alpha / (alpha - ONE));
                    for p in 1..=l {
                        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
                        push(Block::FirstX, alpha, l - p, vec, g * sign / (alpha - ONE).powu(p as u32 + 1));
                    }
                    if branch == Branch::LambdaBelowOne {
                        push(Block::FirstY, ONE, 0, vec, g * y_coefficient(alpha, l));
                    }
                }
                // S_{K+1}: C(K,ℓ)α^{K−ℓ}[α F^(j−ℓ) + F^(j−ℓ−1)]
                push(Block::Second, alpha, l, TermSource::Coefficient { column: i }, g * alpha);
                if i > 0 {
                    push(Block::Second, alpha, l, TermSource::Coefficient { column: i - 1 }, g);
                }
            }
        }
    }
    core.terms = merge(terms);
    if branch == Branch::LambdaBelowOne && core.terms.iter().any(|t| t.block == Block::FirstZ) {
        debug_assert!(core.lambda < 1.0);
    }

    let mut dropped_constant = vec![ZERO; core.dim];
    if branch == Branch::LambdaBelowOne {
        let kept: Vec<usize> = core.coefficients.iter().flat_map(|c| c.members.iter().copied()).collect();
        for (index, chain) in core.chains.iter().enumerate() {
            if kept.contains(&index) {
                continue;
            }
            let alpha = chain.value();
            for j in 0..chain.height() {
                let g = core.decomposition.gamma[index][j];
                for i in 0..=j {
                    let v = &chain.vectors[i];
                    let w = crate::exactnum::vec_sub(v, &core.a0.mul_vec(v));
                    let y = g * y_coefficient(alpha, (j - i) as u64);
                    for (o, x) in dropped_constant.iter_mut().zip(&w) {
                        *o += y * x;
                    }
                }
            }
        }
    }
    Ok(IntegerExpansion { core, branch, lambda_near_one, dropped_constant })
}

/// K = ⌊log_B N⌋ and the K + 1 digits of N, read as the fraction N/B^{K+1}.
fn split_integer(n: u64, radix: u32) -> (u64, Vec<u32>) {
    let w = DigitWord::integer(n.max(1), radix);
    ((w.len() - 1) as u64, w.digits)
}

/// A_N with the coefficients evaluated exactly at N/B^{K+1}.
pub fn eval_expansion_integers(exp: &IntegerExpansion, n: u64) -> Vec<C64> {
    let (k, digits) = split_integer(n, exp.core.radix);
    let coeff: Vec<Mat<C64>> = exp.core.coefficients.iter().map(|c| c.system.eval_digits(&digits)).collect();
    exp.core.eval_with(k, &coeff)
}

/// A_N restricted to the terms accepted by `keep`.
pub fn eval_expansion_integers_where(
    exp: &IntegerExpansion,
    n: u64,
    keep: &dyn Fn(&ExpansionTerm) -> bool,
) -> Vec<C64> {
    let (k, digits) = split_integer(n, exp.core.radix);
    let coeff: Vec<Mat<C64>> = exp.core.coefficients.iter().map(|c| c.system.eval_digits(&digits)).collect();
    exp.core.eval_selected(k, &coeff, keep)
}

/// A_N at N = B^s for real s ≥ 0, coefficients interpolated at B^{{s}−1}.
pub fn eval_expansion_at_log(exp: &IntegerExpansion, s: f64) -> Vec<C64> {
    let k = s.max(0.0).floor();
    let x = (exp.core.radix as f64).powf(s.max(0.0) - k - 1.0);
    exp.core.eval_with(k as u64, &exp.core.coeff_interpolated(x))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TermReport {
    pub rho: f64,
    pub omega_re: f64,
    pub omega_im: f64,
    pub ell: u64,
    pub chain: usize,
    pub block: Block,
    pub source: TermSource,
    pub gamma_re: f64,
    pub gamma_im: f64,
    pub coefficient_grid_ref: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorReport {
    pub kind: String,
    pub lambda_or_m: f64,
    pub words: String,
    pub integers: String,
    pub attained: Attainment,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainReport {
    pub chain: usize,
    pub eigenvalue_re: f64,
    pub eigenvalue_im: f64,
    pub height: usize,
    pub effective_height: usize,
    pub holder_exponent: Option<f64>,
    pub grid_ref: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpansionReport {
    pub mode: &'static str,
    pub radix: u32,
    pub lambda: f64,
    pub lambda_rule: String,
    pub grid_depth: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<Branch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_near_one: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dropped_constant_norm: Option<f64>,
    pub chains: Vec<ChainReport>,
    pub terms: Vec<TermReport>,
    pub error: ErrorReport,
}

/// File name of chain i's coefficient grid CSV.
pub fn grid_file_name(chain: usize) -> String {
    format!("chain{chain}_grid.csv")
}

fn core_report(core: &ExpansionCore, mode: &'static str) -> ExpansionReport {
    let (kind, lambda_or_m) = match core.error.kind {
        ErrorKind::Zero => ("zero".to_string(), 0.0),
        ErrorKind::Lambda { lambda } => ("lambda".to_string(), lambda),
        ErrorKind::Attained { m, .. } => ("attained".to_string(), m as f64),
        ErrorKind::Growth { m, degree, .. } => ("growth".to_string(), (m + degree) as f64),
    };
    ExpansionReport {
        mode,
        radix: core.radix,
        lambda: core.lambda,
        lambda_rule: core.lambda_rule.clone(),
        grid_depth: core.grid_depth,
        branch: None,
        lambda_near_one: None,
        dropped_constant_norm: None,
        chains: core
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, c)| ChainReport {
                chain: i,
                eigenvalue_re: c.chain.value().re,
                eigenvalue_im: c.chain.value().im,
                height: c.chain.height(),
                effective_height: c.effective_height,
                holder_exponent: c.holder,
                grid_ref: grid_file_name(i),
            })
            .collect(),
        terms: core
            .terms
            .iter()
            .map(|t| TermReport {
                rho: t.rho(),
                omega_re: t.omega().re,
                omega_im: t.omega().im,
                ell: t.ell,
                chain: t.chain,
                block: t.block,
                source: t.source,
                gamma_re: t.weight.re,
                gamma_im: t.weight.im,
                coefficient_grid_ref: match t.source {
                    TermSource::Coefficient { .. } => Some(grid_file_name(t.chain)),
                    TermSource::Vector { .. } => None,
                },
            })
            .collect(),
        error: ErrorReport {
            kind,
            lambda_or_m,
            words: core.error.describe_words(),
            integers: core.error.describe_integers(),
            attained: core.error.attained,
        },
    }
}

impl WordExpansion {
    pub fn report(&self) -> ExpansionReport {
        core_report(&self.core, "words")
    }
}

impl IntegerExpansion {
    pub fn report(&self) -> ExpansionReport {
        let mut r = core_report(&self.core, "integers");
        r.branch = Some(self.branch);
        r.lambda_near_one = Some(self.lambda_near_one);
        r.dropped_constant_norm = Some(vec_inf_norm(&self.dropped_constant));
        r
    }
}
