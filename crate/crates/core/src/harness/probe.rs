use std::ops::RangeInclusive;

use serde::Serialize;

use super::dominant_modulus;
use crate::error::{Error, Result};
use crate::exactnum::{binom, Field, C64};
use crate::expansion::{eval_expansion_at_log, IntegerExpansion, WordExpansion};
use crate::linrep::{DigitWord, LinearRep};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceProbe {
    pub chain: usize,
    pub ks: Vec<u32>,
    /// |R(K)| with R(K) = C(K, h−1)·(ρω)^{K−h+1}.
    pub normalization: Vec<f64>,
    /// sup over the grid of ‖F_K − F‖_∞.
    pub sup_deviation: Vec<f64>,
    /// exp of the least-squares slope of ln sup_deviation against K.
    pub rate: f64,
    /// λ*/ρ + 0.1 when C is an eigenvector of Q.
    pub bound: Option<f64>,
    pub within_bound: Option<bool>,
}

fn fit_rate(ks: &[u32], devs: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = ks
        .iter()
        .zip(devs)
        .filter(|(_, &d)| d > 1e-300 && d.is_finite())
        .map(|(&k, &d)| (k as f64, d.ln()))
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxy / sxx).exp()
}

/// sup of ‖S_K(x)/R(K) − F(x)‖ for each K over the K-digit points made of
/// a depth-g grid node followed by a constant tail digit, where F is the
/// leading coefficient function of the given chain.
pub fn probe_fk_convergence<T: Field>(
    rep: &LinearRep<T>,
    exp: &WordExpansion,
    chain: usize,
    ks: RangeInclusive<u32>,
    grid_depth: u32,
) -> Result<ConvergenceProbe> {
    let core = &exp.core;
    let cc = core
        .coefficients
        .get(chain)
        .ok_or_else(|| Error::OutOfRange(format!("no coefficient chain {chain}")))?;
    let rho = cc.chain.rho();
    if rho <= core.jsr.upper * (1.0 + 1e-9) {
        return Err(Error::NoSolutionGuarantee { rho, lambda: core.jsr.upper, note: "nothing to converge to".into() });
    }
    let radix = rep.radix();
    let h = cc.effective_height;
    let value = cc.chain.value();
    let nodes = (radix as u64).pow(grid_depth);
    let c: Vec<C64> = rep.c().iter().map(|x| x.to_c64()).collect();
    let qc = rep.q().to_complex().mul_vec(&c);
    let eigenvector = qc.iter().zip(&c).all(|(a, b)| (a - value * b).norm() <= 1e-9 * rho.max(1.0));

    let mut out_k = Vec::new();
    let mut norms = Vec::new();
    let mut devs = Vec::new();
    for k in ks.filter(|&k| k >= grid_depth) {
        let r = value.powi(k as i32 - h as i32 + 1) * binom(k as u64, h as u64 - 1);
        if r.norm() == 0.0 {
            continue;
        }
        let qk = rep.q_powers_c(k as usize);
        let mut sup = 0.0f64;
        for a in qk[k as usize].iter().zip(&cc.system.boundary().col(0)).map(|(a, b)| (a.to_c64() / r - b).norm()) {
            sup = sup.max(a);
        }
        // every grid node, followed by each constant tail digit
        for j in 0..nodes {
            for tail in 0..radix {
                let mut digits = DigitWord::padded(j, grid_depth as usize, radix).digits;
                digits.resize(k as usize, tail);
                let s = rep.sum_words_below(&digits, &qk);
                let fx = cc.system.eval_digits(&digits).col(0);
                for (a, b) in s.iter().zip(&fx) {
                    sup = sup.max((a.to_c64() / r - b).norm());
                }
            }
        }
        out_k.push(k);
        norms.push(r.norm());
        devs.push(sup);
    }
    let rate = fit_rate(&out_k, &devs);
    let bound = eigenvector.then(|| core.jsr.upper / rho + 0.1);
    Ok(ConvergenceProbe {
        chain,
        ks: out_k,
        normalization: norms,
        sup_deviation: devs,
        rate,
        within_bound: bound.map(|b| rate <= b),
        bound,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuityReport {
    pub alpha: Option<f64>,
    pub delta: f64,
    /// Hölder constant of Φ(s) = A(s)/ρ^s from samples of spacing ≥ 1/1024
    /// that do not straddle an integer.
    pub holder_constant: f64,
    /// (k, ‖Φ(k + δ) − Φ(k − δ)‖).
    pub jumps: Vec<(u64, f64)>,
    pub bound: f64,
    pub pass: bool,
}

fn dist(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Jumps of the regular part across the integers in `ks`, against
/// c·(2δ)^α with c the Hölder constant measured away from the integers.
pub fn continuity_probe(exp: &IntegerExpansion, ks: &[u64], delta: f64) -> ContinuityReport {
    continuity_probe_with(exp, ks, delta, exp.core.holder_exponent())
}

/// As `continuity_probe` with the exponent given. Below λ* not attained
/// the coefficients need only be Hölder for exponents strictly below
/// log_B(ρ/λ*), and a δ·log(1/δ) modulus does occur.
pub fn continuity_probe_with(exp: &IntegerExpansion, ks: &[u64], delta: f64, alpha: Option<f64>) -> ContinuityReport {
    let rho = dominant_modulus(exp).unwrap_or(1.0);
    let phi = |s: f64| -> Vec<C64> {
        let sc = 1.0 / rho.powf(s);
        eval_expansion_at_log(exp, s).into_iter().map(|z| z * sc).collect()
    };
    let a = alpha.unwrap_or(1.0).min(1.0);
    let mut c = 0.0f64;
    let mut jumps = Vec::new();
    const M: usize = 1024;
    for &k in ks {
        let samples: Vec<(f64, Vec<C64>)> = (0..=M)
            .map(|i| k as f64 - 0.5 + i as f64 / M as f64)
            .filter(|s| (s - k as f64).abs() > 0.5 / M as f64)
            .map(|s| (s, phi(s)))
            .collect();
        let mut lag = 1;
        while lag < samples.len() {
            for w in 0..samples.len() - lag {
                let (s0, v0) = &samples[w];
                let (s1, v1) = &samples[w + lag];
                if (s0 - k as f64).signum() != (s1 - k as f64).signum() {
                    continue;
                }
                c = c.max(dist(v0, v1) / (s1 - s0).powf(a));
            }
            lag *= 2;
        }
        jumps.push((k, dist(&phi(k as f64 + delta), &phi(k as f64 - delta))));
    }
    // k − δ and k + δ are 2δ apart
    let bound = c * (2.0 * delta).powf(a);
    let pass = jumps.iter().all(|&(_, j)| j <= bound + 1e-12);
    ContinuityReport { alpha, delta, holder_constant: c, jumps, bound, pass }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use crate::expansion::{lrtoae1, lrtoae2};
    use crate::fixtures;
    use crate::jsr::{jsr_estimate, JsrConfig};

    #[test]
    fn billingsley_rate_is_three_quarters() {
        let rep = fixtures::billingsley(rat(1, 4));
        let jsr = jsr_estimate(&rep, &JsrConfig::default()).unwrap();
        let exp = lrtoae1(&rep, &jsr).unwrap();
        let p = probe_fk_convergence(&rep, &exp, 0, 4..=16, 4).unwrap();
        assert!((p.rate - 0.75).abs() < 0.05, "{}", p.rate);
        assert_eq!(p.within_bound, Some(true));
    }

    #[test]
    fn mergesort_deviation_decreases() {
        let rep = fixtures::mergesort();
        let jsr = jsr_estimate(&rep, &JsrConfig::default()).unwrap();
        let exp = lrtoae1(&rep, &jsr).unwrap();
        let p = probe_fk_convergence(&rep, &exp, 0, 4..=14, 4).unwrap();
        for w in p.sup_deviation.windows(2) {
            assert!(w[1] < w[0], "{:?}", p.sup_deviation);
        }
    }

    #[test]
    fn single_digit_scaling_is_refused() {
        // A₀ = ρ gives λ* = ρ: no room between the two.
        let rep = LinearRep::from_rows(2, vec![int(1)], vec![vec![vec![int(2)]], vec![vec![int(0)]]], vec![int(1)])
            .unwrap();
        let jsr = jsr_estimate(&rep, &JsrConfig::default()).unwrap();
        let exp = lrtoae1(&rep, &jsr).unwrap();
        assert!(exp.core.coefficients.is_empty());
        assert!(probe_fk_convergence(&rep, &exp, 0, 4..=8, 2).is_err());
    }

    #[test]
    fn rudin_shapiro_regular_part_is_continuous() {
        let rep = fixtures::rudin_shapiro4();
        let jsr = jsr_estimate(&rep, &JsrConfig::default()).unwrap();
        let exp = lrtoae2(&rep, &jsr).unwrap();
        let r = continuity_probe(&exp, &[2, 3], 1e-6);
        assert!(r.pass, "{r:?}");
    }
}
