use serde::Serialize;

use super::{same_modulus, ExpansionTerm, IntegerExpansion};
use crate::error::{Error, Result};
use crate::exactnum::{binom, fmt_f64, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProfileSelector {
    /// Modulus class ρ; the profile is divided by N^{log_B ρ} = ρ^s.
    pub rho: f64,
    /// Restrict to one binomial index ℓ and divide by C(K, ℓ) as well.
    pub ell: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Periodicity {
    /// Order q ≤ 64 of each distinct ω in the class, None when not found.
    pub orders: Vec<Option<u64>>,
    /// 1-periodic up to the factor ω^K when every ω is a root of unity;
    /// the period in s is then the lcm of the orders.
    pub periodic: bool,
    pub period: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    pub selector: ProfileSelector,
    /// (s, Φ(s)) with s = log_B N.
    pub samples: Vec<(f64, Vec<C64>)>,
    pub periodicity: Periodicity,
}

impl Profile {
    /// CSV with columns t, then one column per component (re/im when complex).
    pub fn to_csv(&self) -> String {
        let d = self.samples.first().map_or(0, |s| s.1.len());
        let complex = self.samples.iter().any(|(_, v)| v.iter().any(|z| z.im.abs() > 0.0));
        let mut out = String::from("t");
        for i in 0..d {
            if complex {
                out.push_str(&format!(",phi_{i}_re,phi_{i}_im"));
            } else {
                out.push_str(&format!(",phi_{i}"));
            }
        }
        out.push('\n');
        for (t, v) in &self.samples {
            out.push_str(&fmt_f64(*t));
            for z in v {
                out.push(',');
                out.push_str(&fmt_f64(z.re));
                if complex {
                    out.push(',');
                    out.push_str(&fmt_f64(z.im));
                }
            }
            out.push('\n');
        }
        out
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Smallest q ≤ 64 with |ω^q − 1| ≤ 1e−9.
pub fn root_of_unity_order(omega: C64) -> Option<u64> {
    let mut z = omega;
    for q in 1..=64u64 {
        if (z - 1.0).norm() <= 1e-9 {
            return Some(q);
        }
        z *= omega;
    }
    None
}

/// Samples of the periodic coefficient Φ of one modulus class.
pub fn periodic_profile(exp: &IntegerExpansion, sel: ProfileSelector, t_grid: &[f64]) -> Result<Profile> {
    let tol = 1e-9;
    let keep = |t: &ExpansionTerm| same_modulus(t.rho(), sel.rho, tol) && sel.ell.map_or(true, |l| t.ell == l);
    let selected: Vec<&ExpansionTerm> = exp.core.terms.iter().filter(|t| keep(t)).collect();
    if selected.is_empty() {
        return Err(Error::OutOfRange(format!("no term of modulus {} (ell {:?})", sel.rho, sel.ell)));
    }
    let mut omegas: Vec<C64> = Vec::new();
    for t in &selected {
        let w = t.omega();
        if !omegas.iter().any(|o| (o - w).norm() <= tol) {
            omegas.push(w);
        }
    }
    let orders: Vec<Option<u64>> = omegas.iter().map(|&w| root_of_unity_order(w)).collect();
    let periodic = orders.iter().all(|o| o.is_some());
    let period = periodic.then(|| orders.iter().map(|o| o.unwrap()).fold(1, |a, b| a / gcd(a, b) * b));

    let b = exp.core.radix as f64;
    let samples = t_grid
        .iter()
        .map(|&s| {
            let s = s.max(0.0);
            let k = s.floor();
            let x = b.powf(s - k - 1.0);
            let coeff = exp.core.coeff_interpolated(x);
            let mut v = exp.core.eval_selected(k as u64, &coeff, &keep);
            let mut norm = sel.rho.powf(s);
            if let Some(l) = sel.ell {
                norm *= binom(k as u64, l);
            }
            let inv = if norm == 0.0 { 0.0 } else { 1.0 / norm };
            for z in v.iter_mut() {
                *z *= inv;
            }
            (s, v)
        })
        .collect();
    Ok(Profile { selector: sel, samples, periodicity: Periodicity { orders, periodic, period } })
}
