//! The Jordan system of dilation equations
//!
//!   𝔽(x)·J = Σ_{r<x₁} A_r V + A_{x₁}·𝔽(Bx − x₁),   𝔽(0) = 0, 𝔽(1) = V,
//!
//! where V holds a Jordan chain as columns and J is its Jordan block.
//! Values are exact (up to rounding) at B-adic points by unrolling the
//! recursion; the cascade iteration is kept for convergence measurements.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exactnum::{inverse, Field, Mat, Rational, C64};
use crate::jsr::JsrEstimate;
use crate::linrep::{badic_length, DigitWord, LinearRep};
use crate::spectral::JordanChain;

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub enum Admissibility {
    /// ρ above the upper bound on λ*.
    Certified { rho: f64, lambda_upper: f64 },
    /// Not certified, but the caller asked to proceed.
    Overridden { rho: f64, lambda_upper: f64 },
    Unchecked,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DilationSystem {
    radix: u32,
    a: Vec<Mat<C64>>,
    value: C64,
    v: Mat<C64>,
    j_inv: Mat<C64>,
    /// P_r = Σ_{s<r} A_s V for r = 0..=B.
    p: Vec<Mat<C64>>,
    pub admissibility: Admissibility,
}

impl DilationSystem {
    pub fn new(radix: u32, a: Vec<Mat<C64>>, value: C64, v: Mat<C64>) -> Result<Self> {
        if value.norm() == 0.0 {
            return Err(Error::OutOfRange("dilation system needs ρ > 0".into()));
        }
        if a.len() != radix as usize || a.iter().any(|m| m.rows() != v.rows() || !m.is_square()) {
            return Err(Error::Shape("dilation system: A_r must be B square matrices matching V".into()));
        }
        let nu = v.cols();
        let j = Mat::from_fn(nu, nu, |i, k| {
            if i == k {
                value
            } else if k == i + 1 {
                C64::new(1.0, 0.0)
            } else {
                ZERO
            }
        });
        let j_inv = inverse(&j, 0.0)?;
        let mut p = vec![Mat::zeros(v.rows(), nu)];
        for m in &a {
            let next = p.last().unwrap().add(&m.mul(&v));
            p.push(next);
        }
        Ok(DilationSystem { radix, a, value, v, j_inv, p, admissibility: Admissibility::Unchecked })
    }

    pub fn from_chain<T: Field>(rep: &LinearRep<T>, chain: &JordanChain) -> Result<Self> {
        Self::new(
            rep.radix(),
            rep.mats().iter().map(|m| m.to_complex()).collect(),
            chain.value(),
            chain.matrix(),
        )
    }

    pub fn radix(&self) -> u32 {
        self.radix
    }
    pub fn value(&self) -> C64 {
        self.value
    }
    pub fn rho(&self) -> f64 {
        self.value.norm()
    }
    pub fn dim(&self) -> usize {
        self.v.rows()
    }
    pub fn height(&self) -> usize {
        self.v.cols()
    }
    pub fn boundary(&self) -> &Mat<C64> {
        &self.v
    }

    /// Multiplies every A_r and the eigenvalue by `alpha`.
    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        let s = C64::new(alpha, 0.0);
        Self::new(self.radix, self.a.iter().map(|m| m.scale(&s)).collect(), self.value * alpha, self.v.clone())
    }

    /// Refuses unless ρ exceeds the upper bound on λ*; `force` records an
    /// override instead of failing.
    pub fn check_admissible(&mut self, jsr: &JsrEstimate, force: bool) -> Result<()> {
        let rho = self.rho();
        let lambda_upper = jsr.upper;
        if rho > lambda_upper * (1.0 + 1e-9) {
            self.admissibility = Admissibility::Certified { rho, lambda_upper };
            return Ok(());
        }
        if force {
            self.admissibility = Admissibility::Overridden { rho, lambda_upper };
            return Ok(());
        }
        let note = if rho <= jsr.lower * (1.0 + 1e-9) {
            "ρ ≤ λ*: no continuous solution guaranteed (the equation may have none, as when \
             F(y) = V' + F(y) is forced at a periodic point)"
        } else {
            "ρ not above the certified upper bound on λ*: no continuous solution guaranteed"
        };
        Err(Error::NoSolutionGuarantee { rho, lambda: lambda_upper, note: note.into() })
    }

    /// (P_r + A_r·G)·J⁻¹ written into `out`; `g` and `out` are d×ν row-major.
    fn step(&self, r: usize, g: &[C64], out: &mut [C64]) {
        let (d, nu) = (self.dim(), self.height());
        let mut tmp = vec![ZERO; d * nu];
        let a = &self.a[r];
        let p = &self.p[r];
        for i in 0..d {
            for k in 0..nu {
                let mut s = p[(i, k)];
                for l in 0..d {
                    s += a[(i, l)] * g[l * nu + k];
                }
                tmp[i * nu + k] = s;
            }
        }
        for i in 0..d {
            for k in 0..nu {
                let mut s = ZERO;
                for l in 0..nu {
                    s += tmp[i * nu + l] * self.j_inv[(l, k)];
                }
                out[i * nu + k] = s;
            }
        }
    }

    /// 𝔽 at the B-adic point with the given fractional digits:
    /// Σ_k A_{x₁}⋯A_{x_{k−1}}·P_{x_k}·J^{−k}.
    pub fn eval_digits(&self, digits: &[u32]) -> Mat<C64> {
        let (d, nu) = (self.dim(), self.height());
        let mut g = vec![ZERO; d * nu];
        let mut out = vec![ZERO; d * nu];
        for &r in digits.iter().rev() {
            self.step(r as usize, &g, &mut out);
            std::mem::swap(&mut g, &mut out);
        }
        Mat::from_fn(d, nu, |i, k| g[i * nu + k])
    }

    pub fn eval_exact_badic(&self, word: &DigitWord) -> Mat<C64> {
        self.eval_digits(&word.digits)
    }

    /// 𝔽(x) for an exact B-adic x in [0, 1]; 𝔽(1) = V.
    pub fn eval_rational(&self, x: &Rational) -> Result<Mat<C64>> {
        use num_traits::One;
        if x < &<Rational as Field>::zero() || x > &<Rational as Field>::one() {
            return Err(Error::OutOfRange(format!("x = {x} outside [0, 1]")));
        }
        if x.is_one() {
            return Ok(self.v.clone());
        }
        let m = badic_length(x, self.radix, 64)
            .ok_or_else(|| Error::OutOfRange(format!("{x} is not a B-adic number of length ≤ 64")))?;
        Ok(self.eval_exact_badic(&DigitWord::fractional(x, self.radix, m)?))
    }

    /// Exact values at every node k/B^depth, by the recursion
    /// 𝔽((rB^{m−1} + k)/B^m) = (P_r + A_r 𝔽(k/B^{m−1}))·J⁻¹.
    pub fn grid(&self, depth: u32) -> Result<SolutionGrid> {
        let n = node_count(self.radix, depth)?;
        let (d, nu) = (self.dim(), self.height());
        let w = d * nu;
        let mut vals = vec![ZERO; w];
        let b = self.radix as usize;
        for m in 1..=depth {
            let prev_n = vals.len() / w;
            let mut next = vec![ZERO; w * prev_n * b];
            for r in 0..b {
                for k in 0..prev_n {
                    let idx = r * prev_n + k;
                    self.step(r, &vals[k * w..(k + 1) * w], &mut next[idx * w..(idx + 1) * w]);
                }
            }
            vals = next;
            debug_assert_eq!(vals.len() / w, (b as u64).pow(m) as usize);
        }
        vals.extend(self.v.data().iter().copied());
        debug_assert_eq!(vals.len() / w, n);
        Ok(SolutionGrid { radix: self.radix, depth, d, nu, values: vals })
    }

    /// The piecewise-linear seed G₀(x) = x·V.
    pub fn seed_grid(&self, depth: u32) -> Result<SolutionGrid> {
        let n = node_count(self.radix, depth)?;
        let last = (n - 1) as f64;
        let mut values = Vec::with_capacity(n * self.v.data().len());
        for i in 0..n {
            let x = i as f64 / last;
            values.extend(self.v.data().iter().map(|z| z * x));
        }
        Ok(SolutionGrid { radix: self.radix, depth, d: self.dim(), nu: self.height(), values })
    }

    /// One application of the dilation operator on grid nodes.
    pub fn cascade_step(&self, g: &SolutionGrid) -> SolutionGrid {
        let w = g.d * g.nu;
        let b = self.radix as usize;
        let inner = g.len() - 1;
        let block = inner / b;
        let mut values = vec![ZERO; g.values.len()];
        for r in 0..b {
            for k in 0..block {
                let src = k * b;
                let idx = r * block + k;
                self.step(r, &g.values[src * w..(src + 1) * w], &mut values[idx * w..(idx + 1) * w]);
            }
        }
        values[inner * w..].copy_from_slice(self.v.data());
        SolutionGrid { values, ..g.clone() }
    }

    /// Iterates from the seed and logs sup-norm differences of successive iterates.
    pub fn cascade_grid(&self, depth: u32, iterations: u32) -> Result<(SolutionGrid, Vec<f64>)> {
        if depth == 0 {
            return Err(Error::OutOfRange("cascade depth must be at least 1".into()));
        }
        if self.admissibility == Admissibility::Unchecked {
            return Err(Error::NoSolutionGuarantee {
                rho: self.rho(),
                lambda: f64::NAN,
                note: "admissibility not checked; call check_admissible first".into(),
            });
        }
        let mut g = self.seed_grid(depth)?;
        let mut log = Vec::with_capacity(iterations as usize);
        for _ in 0..iterations {
            let next = self.cascade_step(&g);
            log.push(next.sup_distance(&g));
            g = next;
        }
        Ok((g, log))
    }

    /// max over interior nodes of ‖𝔽(x)J − P_{x₁} − A_{x₁}𝔽(Bx − x₁)‖.
    pub fn residual(&self, g: &SolutionGrid) -> f64 {
        let (d, nu) = (g.d, g.nu);
        let w = d * nu;
        let b = self.radix as usize;
        let block = (g.len() - 1) / b;
        let j = Mat::from_fn(nu, nu, |i, k| {
            if i == k {
                self.value
            } else if k == i + 1 {
                C64::new(1.0, 0.0)
            } else {
                ZERO
            }
        });
        let mut worst = 0.0f64;
        for idx in 1..g.len() - 1 {
            let (r, k) = (idx / block, idx % block);
            let f = g.node(idx);
            let inner = &g.values[k * b * w..(k * b + 1) * w];
            for i in 0..d {
                for c in 0..nu {
                    let mut lhs = ZERO;
                    for l in 0..nu {
                        lhs += f[(i, l)] * j[(l, c)];
                    }
                    let mut rhs = self.p[r][(i, c)];
                    for l in 0..d {
                        rhs += self.a[r][(i, l)] * inner[l * nu + c];
                    }
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
        worst
    }
}

fn node_count(radix: u32, depth: u32) -> Result<usize> {
    let n = (radix as u128).checked_pow(depth).filter(|&n| n <= 1 << 26).ok_or(Error::Budget {
        needed: (radix as u128).saturating_pow(depth),
        budget: 1 << 26,
    })?;
    Ok(n as usize + 1)
}

/// Values 𝔽(k/B^depth), k = 0..=B^depth, each d×ν, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionGrid {
    pub radix: u32,
    pub depth: u32,
    pub d: usize,
    pub nu: usize,
    values: Vec<C64>,
}

impl SolutionGrid {
    pub fn len(&self) -> usize {
        self.values.len() / (self.d * self.nu)
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn node(&self, k: usize) -> Mat<C64> {
        let w = self.d * self.nu;
        let s = &self.values[k * w..(k + 1) * w];
        Mat::from_fn(self.d, self.nu, |i, j| s[i * self.nu + j])
    }

    /// Entry (i, j) at node k.
    pub fn at(&self, k: usize, i: usize, j: usize) -> C64 {
        self.values[k * self.d * self.nu + i * self.nu + j]
    }

    pub fn x(&self, k: usize) -> f64 {
        k as f64 / (self.len() - 1) as f64
    }

    /// Column j (the coefficient function F^(j)) at node k.
    pub fn column(&self, k: usize, j: usize) -> Vec<C64> {
        (0..self.d).map(|i| self.at(k, i, j)).collect()
    }

    /// Piecewise-linear interpolation, extended by 0 left of 0 and by 𝔽(1) right of 1.
    pub fn interpolate(&self, x: f64) -> Mat<C64> {
        let last = self.len() - 1;
        if x <= 0.0 {
            return self.node(0).map(|_| ZERO);
        }
        if x >= 1.0 {
            return self.node(last);
        }
        let pos = x * last as f64;
        let k = (pos.floor() as usize).min(last - 1);
        let f = pos - k as f64;
        let (a, b) = (self.node(k), self.node(k + 1));
        Mat::from_fn(self.d, self.nu, |i, j| a[(i, j)] * (1.0 - f) + b[(i, j)] * f)
    }

    pub fn sup_distance(&self, o: &SolutionGrid) -> f64 {
        self.values.iter().zip(&o.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Smallest c with ‖𝔽(y) − 𝔽(x)‖ ≤ c·|y − x|^α over node pairs at
    /// distances B^{-j}, j = 1..=depth.
    pub fn holder_constant(&self, alpha: f64) -> f64 {
        let last = self.len() - 1;
        let w = self.d * self.nu;
        let mut c = 0.0f64;
        let mut step = last;
        while step >= 1 {
            let h = step as f64 / last as f64;
            let mut worst = 0.0f64;
            for k in 0..=last - step {
                let a = &self.values[k * w..(k + 1) * w];
                let b = &self.values[(k + step) * w..(k + step + 1) * w];
                let dist = a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
                worst = worst.max(dist);
            }
            c = c.max(worst / h.powf(alpha));
            step /= self.radix as usize;
        }
        c
    }

    /// CSV with columns x, then F_i_j for every entry (split into _re/_im
    /// when any value has an imaginary part).
    pub fn to_csv(&self) -> String {
        let complex = self.values.iter().any(|z| z.im != 0.0);
        let mut s = String::from("x");
        for i in 0..self.d {
            for j in 0..self.nu {
                if complex {
                    write!(s, ",F_{i}_{j}_re,F_{i}_{j}_im").unwrap();
                } else {
                    write!(s, ",F_{i}_{j}").unwrap();
                }
            }
        }
        s.push('\n');
        for k in 0..self.len() {
            s.push_str(&crate::exactnum::fmt_f64(self.x(k)));
            for z in &self.values[k * self.d * self.nu..(k + 1) * self.d * self.nu] {
                s.push(',');
                s.push_str(&crate::exactnum::fmt_f64(z.re));
                if complex {
                    s.push(',');
                    s.push_str(&crate::exactnum::fmt_f64(z.im));
                }
            }
            s.push('\n');
        }
        s
    }
}

/// log_B(ρ/λ), the guaranteed Hölder exponent; requires 0 < λ < ρ ≤ Bλ.
pub fn holder_exponent(rho: f64, lambda: f64, radix: u32) -> Result<f64> {
    let b = radix as f64;
    let tol = 1e-12 * rho.abs().max(1.0);
    if !(lambda > 0.0 && lambda < rho && rho <= b * lambda + tol) {
        return Err(Error::OutOfRange(format!(
            "Hölder exponent needs 0 < λ < ρ ≤ Bλ (ρ = {rho}, λ = {lambda}, B = {radix})"
        )));
    }
    if (rho - b * lambda).abs() <= tol {
        return Ok(1.0);
    }
    Ok(((rho / lambda).ln() / b.ln()).min(1.0))
}

/// Grid of the unique continuous solution for one chain, after the
/// admissibility check against the JSR estimate.
pub fn solve_jordan_system<T: Field>(
    rep: &LinearRep<T>,
    chain: &JordanChain,
    jsr: &JsrEstimate,
    depth: u32,
    force: bool,
) -> Result<(DilationSystem, SolutionGrid)> {
    let mut sys = DilationSystem::from_chain(rep, chain)?;
    sys.check_admissible(jsr, force)?;
    let grid = sys.grid(depth)?;
    Ok((sys, grid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use crate::fixtures;
    use crate::jsr::{jsr_estimate, Attainment, JsrConfig};
    use crate::spectral::jordan_basis;

    fn dominant<T: Field>(rep: &LinearRep<T>) -> JordanChain {
        jordan_basis(&rep.q(), 1e-9, &rep.eigen_hints).unwrap().remove(0)
    }

    #[test]
    fn mergesort_solution_is_linear() {
        let rep = fixtures::mergesort();
        let ch = dominant(&rep);
        assert_eq!(ch.height(), 2);
        // F^(1) for the top vector; its chain partner is V^(0)
        let sys = DilationSystem::from_chain(&rep, &ch).unwrap();
        let g = sys.grid(10).unwrap();
        let v0 = &ch.vectors[0];
        for k in 0..g.len() {
            let x = g.x(k);
            for i in 0..4 {
                assert!((g.at(k, i, 0) - v0[i] * x).norm() < 1e-12);
            }
        }
        assert!(sys.residual(&g) < 1e-12);
    }

    #[test]
    fn multiples_of_three_point_value() {
        let rep = fixtures::multiples_of_3();
        let ch = dominant(&rep);
        let sys = DilationSystem::from_chain(&rep, &ch).unwrap();
        let f = sys.eval_rational(&rat(3, 8)).unwrap();
        let scale = ch.vectors[0][0];
        for i in 0..3 {
            assert!((f[(i, 0)] / scale - 0.375).norm() < 1e-14);
        }
    }

    #[test]
    fn powers_of_two_step_function() {
        let rep = fixtures::powers_of_2();
        let ch = dominant(&rep);
        let sys = DilationSystem::from_chain(&rep, &ch).unwrap();
        let f = sys.eval_rational(&rat(1, 4)).unwrap();
        let top = ch.height() - 1;
        assert!((f[(0, top)] - ch.vectors[top][0]).norm() < 1e-14 || ch.height() == 2);
        assert_eq!(sys.eval_rational(&int(0)).unwrap(), Mat::zeros(2, ch.height()));
    }

    #[test]
    fn grid_matches_unrolling_and_scaling() {
        let rep = fixtures::coquet();
        let ch = dominant(&rep);
        let sys = DilationSystem::from_chain(&rep, &ch).unwrap();
        let g = sys.grid(4).unwrap();
        for k in [0usize, 1, 7, 100, 255] {
            let x = rat(k as i64, 256);
            let e = sys.eval_rational(&x).unwrap();
            assert!(e.sub(&g.node(k)).max_abs() < 1e-13);
        }
        let g2 = sys.scaled(4.0).unwrap().grid(4).unwrap();
        assert_eq!(g, g2);
    }

    #[test]
    fn billingsley_cascade_contracts_at_three_quarters() {
        let rep = fixtures::billingsley(rat(1, 4));
        let jsr = jsr_estimate(&rep, &JsrConfig::default()).unwrap();
        assert_eq!(jsr.attained, Attainment::Yes);
        let (mut sys, _) = solve_jordan_system(&rep, &dominant(&rep), &jsr, 2, false).unwrap();
        sys.check_admissible(&jsr, false).unwrap();
        let (g, log) = sys.cascade_grid(21, 20).unwrap();
        for k in 5..19 {
            let ratio = log[k + 1] / log[k];
            assert!((ratio - 0.75).abs() < 0.075, "iteration {k}: {ratio}");
        }
        for k in 1..g.len() {
            assert!(g.at(k, 0, 0).re >= g.at(k - 1, 0, 0).re);
        }
    }

    #[test]
    fn triangular_tiling_is_refused() {
        let rep = fixtures::triangular_tiling();
        let jsr = jsr_estimate(&rep, &JsrConfig::default()).unwrap();
        assert!((jsr.upper - 1.0).abs() < 1e-12);
        let ch = dominant(&rep);
        let err = solve_jordan_system(&rep, &ch, &jsr, 4, false).unwrap_err();
        assert!(matches!(err, Error::NoSolutionGuarantee { .. }));
    }

    #[test]
    fn holder_exponents() {
        assert!((holder_exponent(1.0, 0.75, 2).unwrap() - (4f64 / 3.0).log2()).abs() < 1e-15);
        assert!((holder_exponent(3.0, 1.0, 4).unwrap() - 0.792481250360578).abs() < 1e-12);
        assert_eq!(holder_exponent(2.0, 1.0, 2).unwrap(), 1.0);
        assert!(holder_exponent(1.0, 1.0, 2).is_err());
    }

    #[test]
    fn perturbation_is_detected() {
        let rep = fixtures::mergesort();
        let sys = DilationSystem::from_chain(&rep, &dominant(&rep)).unwrap();
        let mut g = sys.grid(6).unwrap();
        g.values[17 * 8 + 3] += 1e-3;
        assert!(sys.residual(&g) >= 1e-4);
    }
}
