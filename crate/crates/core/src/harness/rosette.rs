use std::f64::consts::PI;

use serde::Serialize;

use super::{compare_integers, ComparisonReport, NRange};
use crate::error::{Error, Result};
use crate::exactnum::C64;
use crate::expansion::{eval_expansion_at_log, eval_expansion_integers_where, lrtoae2, IntegerExpansion};
use crate::fixtures;
use crate::jsr::{jsr_estimate, JsrConfig};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RosetteReport {
    pub theta: f64,
    /// ϑ/π = p/q in lowest terms, when found with q ≤ 64.
    pub ratio: Option<(i64, u64)>,
    /// Centre read off the constant terms of the expansion.
    pub center: [f64; 2],
    /// sin(ϑ/2)·(sin(ϑ/2), cos(ϑ/2)).
    pub center_closed_form: [f64; 2],
    /// max ‖Γ(t+1) − R_ϑ(Γ(t) − Ω) − Ω‖ over the t-grid.
    pub rotation_residual: f64,
    /// 2^{1−κ}q for rational ϑ/π, κ the dyadic valuation of p.
    pub period: Option<f64>,
    pub period_residual: Option<f64>,
    /// 2^{−κ}q.
    pub antipodal_shift: Option<f64>,
    /// max ‖Γ(t + shift) + Γ(t) − 2Ω‖.
    pub antipodal_residual: Option<f64>,
    /// Smallest integer P ≤ 64 with max ‖Γ(t+P) − Γ(t)‖ ≤ 1e−6.
    pub smallest_period: Option<u64>,
    /// max over K ≤ 50 of ‖Γ(K) − Ω − cos(ϑ/2)·(cos((K−½)ϑ), sin((K−½)ϑ))‖.
    pub closed_form_residual: f64,
    /// max over K ≤ 64 of |‖Γ(K) − Ω‖ − cos(ϑ/2)|.
    pub circle_residual: f64,
    pub comparison: ComparisonReport,
}

/// p/q with q ≤ 64 and |x − p/q| ≤ 1e−12.
fn small_fraction(x: f64) -> Option<(i64, u64)> {
    (1..=64u64).find_map(|q| {
        let p = (x * q as f64).round();
        ((x - p / q as f64).abs() <= 1e-12).then_some((p as i64, q))
    })
}

fn rotate(theta: f64, v: [f64; 2]) -> [f64; 2] {
    let (s, c) = theta.sin_cos();
    [c * v[0] - s * v[1], s * v[0] + c * v[1]]
}

fn gap(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).abs().max((a[1] - b[1]).abs())
}

fn center(exp: &IntegerExpansion) -> [f64; 2] {
    let constant = |t: &crate::expansion::ExpansionTerm| (t.base - C64::new(1.0, 0.0)).norm() < 1e-12 && t.ell == 0;
    let v = eval_expansion_integers_where(exp, 1, &constant);
    [v[0].re + exp.dropped_constant[0].re, v[1].re + exp.dropped_constant[1].re]
}

/// Rotation, period and closed-form checks of the arc Γ for angle ϑ,
/// plus the brute-force comparison of 𝚺_N over `range`.
pub fn rosette_check(theta: f64, range: NRange) -> Result<RosetteReport> {
    let quarter = theta / (PI / 2.0);
    if (quarter - quarter.round()).abs() < 1e-12 {
        return Err(Error::OutOfRange(format!("degenerate angle {theta}: multiple of pi/2")));
    }
    let rep = fixtures::rosette(theta);
    let jsr = jsr_estimate(&rep, &JsrConfig::default())?;
    let exp = lrtoae2(&rep, &jsr)?;
    let gamma = |t: f64| -> [f64; 2] {
        let v = eval_expansion_at_log(&exp, t);
        [v[0].re, v[1].re]
    };
    let omega = center(&exp);
    let h = (theta / 2.0).sin();
    let omega_closed = [h * h, h * (theta / 2.0).cos()];
    let grid: Vec<f64> = (0..1000).map(|i| 2.0 + i as f64 / 100.0).collect();
    let max_over = |f: &dyn Fn(f64) -> f64| grid.iter().map(|&t| f(t)).fold(0.0, f64::max);

    let rotation_residual = max_over(&|t| {
        let g = gamma(t);
        let r = rotate(theta, [g[0] - omega[0], g[1] - omega[1]]);
        gap(gamma(t + 1.0), [r[0] + omega[0], r[1] + omega[1]])
    });
    let shift_residual = |s: f64| max_over(&|t| gap(gamma(t + s), gamma(t)));

    let ratio = small_fraction(theta / PI);
    let (mut period, mut period_residual, mut antipodal_shift, mut antipodal_residual) = (None, None, None, None);
    if let Some((p, q)) = ratio {
        let kappa = p.unsigned_abs().trailing_zeros() as i32;
        let per = 2f64.powi(1 - kappa) * q as f64;
        let anti = 2f64.powi(-kappa) * q as f64;
        period = Some(per);
        period_residual = Some(shift_residual(per));
        antipodal_shift = Some(anti);
        antipodal_residual = Some(max_over(&|t| {
            let (a, b) = (gamma(t + anti), gamma(t));
            gap([a[0] + b[0], a[1] + b[1]], [2.0 * omega[0], 2.0 * omega[1]])
        }));
    }
    let smallest_period = (1..=64u64).find(|&p| shift_residual(p as f64) <= 1e-6);

    let c = (theta / 2.0).cos();
    let closed_form_residual = (1..=50)
        .map(|k| {
            let a = (k as f64 - 0.5) * theta;
            gap(gamma(k as f64), [omega_closed[0] + c * a.cos(), omega_closed[1] + c * a.sin()])
        })
        .fold(0.0, f64::max);
    let circle_residual = (1..=64)
        .map(|k| {
            let g = gamma(k as f64);
            ((g[0] - omega[0]).hypot(g[1] - omega[1]) - c.abs()).abs()
        })
        .fold(0.0, f64::max);

    Ok(RosetteReport {
        theta,
        ratio,
        center: omega,
        center_closed_form: omega_closed,
        rotation_residual,
        period,
        period_residual,
        antipodal_shift,
        antipodal_residual,
        smallest_period,
        closed_form_residual,
        circle_residual,
        comparison: compare_integers(&rep, &exp, range)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TilingGrowth {
    /// (K, S_{2K}(y_{2K}), K·V_{−2π/3} + V₀).
    pub rows: Vec<(u32, [f64; 2], [f64; 2])>,
    pub max_residual: f64,
}

/// S_{2K} at y_{2K} = (0.(01)^K)_B for the triangular-tiling fixture.
pub fn triangular_tiling_growth(k_max: u32) -> TilingGrowth {
    let rep = fixtures::triangular_tiling();
    let qk = rep.q_powers_c(2 * k_max as usize);
    let v = rotate(-2.0 * PI / 3.0, [1.0, 0.0]);
    let mut rows = Vec::new();
    let mut max_residual = 0.0f64;
    for k in 0..=k_max {
        let digits: Vec<u32> = (0..k).flat_map(|_| [0, 1]).collect();
        let s = rep.sum_words_below(&digits, &qk[..=2 * k as usize]);
        let got = [s[0].re, s[1].re];
        let want = [k as f64 * v[0] + 1.0, k as f64 * v[1]];
        max_residual = max_residual.max(gap(got, want));
        rows.push((k, got, want));
    }
    TilingGrowth { rows, max_residual }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions_of_pi() {
        assert_eq!(small_fraction(0.4), Some((2, 5)));
        assert_eq!(small_fraction(1.0 / PI), None);
    }

    #[test]
    fn degenerate_angle_is_refused() {
        assert!(rosette_check(PI / 2.0, NRange::new(1, 64)).is_err());
    }

    #[test]
    fn tiling_grows_linearly() {
        let g = triangular_tiling_growth(12);
        assert!(g.max_residual < 1e-12, "{}", g.max_residual);
        let (_, s, _) = g.rows[2];
        // x = 5/16, K = 4
        assert!((s[0] - 0.0).abs() < 1e-12 && (s[1] + 3f64.sqrt()).abs() < 1e-12);
    }
}
