//! Brute-force comparisons of the expansions against exact running sums,
//! convergence probes for F_K, and the empirical periodic scatter.
//!
//! Big-oh claims are checked with a fitted envelope: the constant c is the
//! largest deviation/envelope ratio on the first half of the range (in log
//! scale), and the second half must stay within 2c.

mod probe;
mod rosette;

pub use probe::{continuity_probe, continuity_probe_with, probe_fk_convergence, ContinuityReport, ConvergenceProbe};
pub use rosette::{rosette_check, triangular_tiling_growth, RosetteReport, TilingGrowth};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{fmt_f64, Field, C64};
use crate::expansion::{
    eval_expansion_integers, eval_expansion_integers_where, periodic_profile, ExpansionTerm, IntegerExpansion,
    ProfileSelector,
};
use crate::linrep::{LinearRep, SigmaAccumulator};

/// Largest N enumerated by the brute-force oracles.
pub const MAX_N: u64 = 1 << 24;

/// N from `min` to `max`, every `stride`-th value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NRange {
    pub min: u64,
    pub max: u64,
    pub stride: u64,
}

impl NRange {
    pub fn new(min: u64, max: u64) -> Self {
        NRange { min: min.max(1), max, stride: 1 }
    }

    pub fn with_stride(mut self, stride: u64) -> Self {
        self.stride = stride.max(1);
        self
    }

    fn check(&self) -> Result<()> {
        if self.max > MAX_N {
            return Err(Error::Budget { needed: self.max as u128, budget: MAX_N as u128 });
        }
        if self.min > self.max {
            return Err(Error::OutOfRange(format!("empty range {}..={}", self.min, self.max)));
        }
        Ok(())
    }

    fn contains(&self, n: u64) -> bool {
        n >= self.min && n <= self.max && (n - self.min) % self.stride == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComparisonPoint {
    pub n: u64,
    pub deviation: f64,
    pub envelope: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnvelopeFit {
    /// N at the log-midpoint of the range.
    pub split: f64,
    pub fitted_c: f64,
    pub second_half_max: f64,
    pub pass: bool,
}

/// c from the points with N ≤ split, then max ratio beyond split ≤ 2c.
pub fn fit_envelope(points: &[ComparisonPoint]) -> EnvelopeFit {
    let (lo, hi) = match (points.first(), points.last()) {
        (Some(a), Some(b)) => (a.n.max(1) as f64, b.n.max(1) as f64),
        _ => return EnvelopeFit { split: 0.0, fitted_c: 0.0, second_half_max: 0.0, pass: true },
    };
    let split = (lo * hi).sqrt();
    let mut c = 0.0f64;
    let mut second = 0.0f64;
    for p in points {
        if (p.n as f64) <= split {
            c = c.max(p.ratio);
        } else {
            second = second.max(p.ratio);
        }
    }
    // ratios at rounding level count as zero
    let pass = second <= 2.0 * c + 1e-9;
    EnvelopeFit { split, fitted_c: c, second_half_max: second, pass }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub range: NRange,
    pub envelope: String,
    /// Log-spaced subset of the compared points; the fit uses all of them.
    pub points: Vec<ComparisonPoint>,
    pub compared: usize,
    pub max_deviation: f64,
    pub max_ratio: f64,
    pub fit: EnvelopeFit,
}

impl ComparisonReport {
    pub fn pass(&self) -> bool {
        self.fit.pass
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,deviation,envelope,ratio\n");
        for p in &self.points {
            out.push_str(&format!("{},{},{},{}\n", p.n, fmt_f64(p.deviation), fmt_f64(p.envelope), fmt_f64(p.ratio)));
        }
        out
    }
}

/// What the deviation is measured on.
#[derive(Clone, Debug, PartialEq)]
pub enum Projection {
    /// ∞-norm of the full vector 𝚺_N − reference.
    Vector,
    /// |L·𝚺_N − reference| with the given row.
    Row(Vec<C64>),
}

fn project(p: &Projection, v: &[C64]) -> Vec<C64> {
    match p {
        Projection::Vector => v.to_vec(),
        Projection::Row(l) => vec![l.iter().zip(v).map(|(a, b)| a * b).sum()],
    }
}

fn inf_dist(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Keeps about 64 points per decade of N plus the last one.
fn thin(points: Vec<ComparisonPoint>) -> Vec<ComparisonPoint> {
    let mut out: Vec<ComparisonPoint> = Vec::new();
    let mut next = 0.0f64;
    let n = points.len();
    for (i, p) in points.into_iter().enumerate() {
        let key = (p.n.max(1) as f64).ln();
        if key >= next || i + 1 == n {
            next = key + std::f64::consts::LN_10 / 64.0;
            out.push(p);
        }
    }
    out
}

/// Exact 𝚺_N by accumulation against `reference(N)`, projected, with the
/// deviation divided by `envelope(N)`.
pub fn compare_with<T: Field>(
    rep: &LinearRep<T>,
    range: NRange,
    projection: &Projection,
    reference: &dyn Fn(u64) -> Vec<C64>,
    envelope: &dyn Fn(f64) -> f64,
    envelope_label: &str,
) -> Result<ComparisonReport> {
    range.check()?;
    let mut acc = SigmaAccumulator::new(rep);
    let mut points = Vec::new();
    for n in 0..=range.max {
        let s = acc.next_sum();
        if !range.contains(n) {
            continue;
        }
        let truth: Vec<C64> = s.iter().map(|x| x.to_c64()).collect();
        let deviation = inf_dist(&project(projection, &truth), &project(projection, &reference(n)));
        let env = envelope(n as f64);
        let ratio = if env > 0.0 { deviation / env } else { deviation };
        points.push(ComparisonPoint { n, deviation, envelope: env, ratio });
    }
    let fit = fit_envelope(&points);
    let max_deviation = points.iter().map(|p| p.deviation).fold(0.0, f64::max);
    let max_ratio = points.iter().map(|p| p.ratio).fold(0.0, f64::max);
    let compared = points.len();
    Ok(ComparisonReport {
        range,
        envelope: envelope_label.to_string(),
        points: thin(points),
        compared,
        max_deviation,
        max_ratio,
        fit,
    })
}

/// 𝚺_N against A_N over the range, normalized by the expansion's own
/// error class.
pub fn compare_integers<T: Field>(rep: &LinearRep<T>, exp: &IntegerExpansion, range: NRange) -> Result<ComparisonReport> {
    let err = &exp.core.error;
    compare_with(
        rep,
        range,
        &Projection::Vector,
        &|n| eval_expansion_integers(exp, n),
        &|n| err.envelope_integers(n),
        &err.describe_integers(),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScatterPoint {
    pub n: u64,
    /// {log_B N}.
    pub t: f64,
    pub empirical: Vec<(f64, f64)>,
    pub theoretical: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalPeriodic {
    pub rho: f64,
    pub radix: u32,
    pub points: Vec<ScatterPoint>,
    /// Largest |empirical − theoretical| over the points.
    pub max_gap: f64,
    /// Theoretical profile on a uniform t-grid of [0, 1).
    pub overlay: Vec<(f64, Vec<(f64, f64)>)>,
}

impl EmpiricalPeriodic {
    /// Columns t, then re/im of each empirical component, then the
    /// theoretical overlay at the same N.
    pub fn to_csv(&self) -> String {
        let d = self.points.first().map_or(0, |p| p.empirical.len());
        let mut out = String::from("t");
        for i in 0..d {
            out.push_str(&format!(",residual_{i}_re,residual_{i}_im"));
        }
        for i in 0..d {
            out.push_str(&format!(",theory_{i}_re,theory_{i}_im"));
        }
        out.push('\n');
        for p in &self.points {
            out.push_str(&fmt_f64(p.t));
            for (re, im) in p.empirical.iter().chain(&p.theoretical) {
                out.push_str(&format!(",{},{}", fmt_f64(*re), fmt_f64(*im)));
            }
            out.push('\n');
        }
        out
    }
}

fn pairs(v: &[C64]) -> Vec<(f64, f64)> {
    v.iter().map(|z| (z.re, z.im)).collect()
}

/// The dominant modulus among the expansion terms.
pub fn dominant_modulus(exp: &IntegerExpansion) -> Option<f64> {
    exp.core.terms.iter().map(|t| t.rho()).fold(None, |m, r| Some(m.map_or(r, |m: f64| m.max(r))))
}

/// (t, (𝚺_N − terms of smaller modulus)/N^{log_B ρ}) for the dominant ρ,
/// with the same quantity from the expansion alongside.
pub fn empirical_periodic<T: Field>(
    rep: &LinearRep<T>,
    exp: &IntegerExpansion,
    range: NRange,
    projection: &Projection,
) -> Result<EmpiricalPeriodic> {
    range.check()?;
    let tol = 1e-9;
    let Some(rho) = dominant_modulus(exp) else {
        return Err(Error::OutOfRange("expansion has no terms".into()));
    };
    let lower = |t: &ExpansionTerm| t.rho() < rho * (1.0 - tol);
    let dominant = |t: &ExpansionTerm| !lower(t);
    let b = rep.radix() as f64;
    let mut acc = SigmaAccumulator::new(rep);
    let mut points = Vec::new();
    let mut max_gap = 0.0f64;
    for n in 0..=range.max {
        let s = acc.next_sum();
        if !range.contains(n) {
            continue;
        }
        let sl = (n as f64).ln() / b.ln();
        let scale = 1.0 / rho.powf(sl);
        let truth: Vec<C64> = s.iter().map(|x| x.to_c64()).collect();
        let low = eval_expansion_integers_where(exp, n, &lower);
        let emp: Vec<C64> = truth.iter().zip(&low).map(|(a, b)| (a - b) * scale).collect();
        let theo: Vec<C64> =
            eval_expansion_integers_where(exp, n, &dominant).iter().map(|z| z * scale).collect();
        let (emp, theo) = (project(projection, &emp), project(projection, &theo));
        max_gap = max_gap.max(inf_dist(&emp, &theo));
        points.push(ScatterPoint { n, t: sl - sl.floor(), empirical: pairs(&emp), theoretical: pairs(&theo) });
    }
    let grid: Vec<f64> = (0..256).map(|i| 8.0 + i as f64 / 256.0).collect();
    let profile = periodic_profile(exp, ProfileSelector { rho, ell: None }, &grid)?;
    let overlay = profile
        .samples
        .iter()
        .map(|(s, v)| (s - s.floor(), pairs(&project(projection, v))))
        .collect();
    Ok(EmpiricalPeriodic { rho, radix: rep.radix(), points, max_gap, overlay })
}
