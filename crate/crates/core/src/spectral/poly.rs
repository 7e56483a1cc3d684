use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactnum::{Field, Mat, Rational, C64};

/// Coefficients c_0..c_d (lowest degree first) of det(xI − M), by the
/// Faddeev–LeVerrier recursion. Valid in any field of characteristic 0.
pub fn char_poly<T: Field>(m: &Mat<T>) -> Vec<T> {
    let d = m.rows();
    let mut coeffs = vec![T::zero(); d + 1];
    coeffs[d] = T::one();
    let mut mk = Mat::<T>::zeros(d, d);
    for k in 1..=d {
        mk = m.mul(&mk).add(&Mat::identity(d).scale(&coeffs[d - k + 1]));
        let qm = m.mul(&mk);
        let tr = (0..d).fold(T::zero(), |acc, i| acc.plus(&qm[(i, i)]));
        coeffs[d - k] = tr.negate().over(&T::from_i64(k as i64));
    }
    coeffs
}

pub fn horner<T: Field>(p: &[T], x: &T) -> T {
    p.iter().rev().fold(T::zero(), |acc, c| acc.times(x).plus(c))
}

/// p(x) / (x − r) for a root r, exactly.
fn deflate(p: &[Rational], r: &Rational) -> Vec<Rational> {
    let n = p.len() - 1;
    let mut out = vec![<Rational as Field>::zero(); n];
    let mut carry = <Rational as Field>::zero();
    for i in (1..=n).rev() {
        carry = &p[i] + &carry * r;
        out[i - 1] = carry.clone();
    }
    out
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            out.push(BigInt::from(i));
            if i * i != n {
                out.push(BigInt::from(n / i));
            }
        }
        i += 1;
    }
    out.sort();
    Some(out)
}

/// Splits p into rational roots (with repetition) and the remaining factor.
/// Candidates p/q come from rounding numeric roots against denominators q
/// dividing the leading coefficient of the integer-scaled polynomial.
pub fn rational_roots(p: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut p = trim(p.to_vec());
    let mut roots = Vec::new();
    while p.len() > 1 && Field::is_zero(&p[0]) {
        roots.push(<Rational as Field>::zero());
        p.remove(0);
    }
    loop {
        if p.len() <= 1 {
            break;
        }
        let lead = integer_lead(&p);
        let qs: Vec<BigInt> =
            divisors(&lead).unwrap_or_else(|| (1..=1000).map(BigInt::from).collect());
        let numeric = aberth(&p.iter().map(|c| c.to_c64()).collect::<Vec<_>>());
        let mut found = None;
        'outer: for z in &numeric {
            if z.im.abs() > 1e-3 * (1.0 + z.re.abs()) {
                continue;
            }
            for q in &qs {
                let qf = q.to_f64().unwrap_or(f64::INFINITY);
                let pr = (z.re * qf).round();
                if !pr.is_finite() || pr.abs() > 1e15 {
                    continue;
                }
                let cand = Rational::new(BigInt::from(pr as i64), q.clone());
                if Field::is_zero(&horner(&p, &cand)) {
                    found = Some(cand);
                    break 'outer;
                }
            }
        }
        match found {
            Some(r) => {
                p = deflate(&p, &r);
                roots.push(r);
            }
            None => break,
        }
    }
    roots.sort();
    (roots, p)
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && Field::is_zero(p.last().unwrap()) {
        p.pop();
    }
    p
}

/// Leading coefficient after clearing denominators and content.
fn integer_lead(p: &[Rational]) -> BigInt {
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return BigInt::one();
    }
    ints.last().unwrap() / g
}

/// All complex roots of a polynomial (lowest degree first) by the
/// Aberth–Ehrlich simultaneous iteration.
pub fn aberth(p: &[C64]) -> Vec<C64> {
    let mut p = p.to_vec();
    while p.len() > 1 && p.last().unwrap().norm() == 0.0 {
        p.pop();
    }
    let n = p.len() - 1;
    if n == 0 {
        return vec![];
    }
    let lead = p[n];
    let p: Vec<C64> = p.iter().map(|c| c / lead).collect();
    if n == 1 {
        return vec![-p[0]];
    }
    let dp: Vec<C64> = (1..=n).map(|i| p[i] * i as f64).collect();
    // Fujiwara bound on root moduli
    let bound = (1..=n)
        .map(|k| {
            let c = p[n - k].norm();
            if k == n {
                (c / 2.0).powf(1.0 / k as f64)
            } else {
                c.powf(1.0 / k as f64)
            }
        })
        .fold(0.0, f64::max)
        * 2.0;
    let radius = bound.max(1e-300);
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let pv = horner(&p, &z[k]);
            if pv.norm() == 0.0 {
                continue;
            }
            let dv = horner(&dp, &z[k]);
            let ratio = pv / dv;
            let s: C64 = (0..n).filter(|&j| j != k).map(|j| C64::new(1.0, 0.0) / (z[k] - z[j])).sum();
            let w = ratio / (C64::new(1.0, 0.0) - ratio * s);
            if w.re.is_finite() && w.im.is_finite() {
                z[k] -= w;
                moved = moved.max(w.norm() / (1.0 + z[k].norm()));
            }
        }
        if moved < 1e-16 {
            break;
        }
    }
    z
}

/// Newton on p^{(m−1)}, where an m-fold root of p is simple. Keeps the
/// starting point if the iteration wanders off.
pub fn refine_multiple_root(p: &[C64], z0: C64, m: usize) -> C64 {
    let mut q = p.to_vec();
    for _ in 1..m {
        q = (1..q.len()).map(|i| q[i] * i as f64).collect();
    }
    if q.len() < 2 {
        return z0;
    }
    let dq: Vec<C64> = (1..q.len()).map(|i| q[i] * i as f64).collect();
    let mut z = z0;
    for _ in 0..20 {
        let d = horner(&dq, &z);
        if d.norm() == 0.0 {
            break;
        }
        let step = horner(&q, &z) / d;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z -= step;
        if step.norm() <= 1e-17 * (1.0 + z.norm()) {
            break;
        }
    }
    if (z - z0).norm() <= 1e-4 * (1.0 + z0.norm()) {
        z
    } else {
        z0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    #[test]
    fn char_poly_of_companion() {
        // x^2 - x - 2 = (x-2)(x+1)
        let m = Mat::from_rows(vec![vec![int(0), int(2)], vec![int(1), int(1)]]).unwrap();
        assert_eq!(char_poly(&m), vec![int(-2), int(-1), int(1)]);
    }

    #[test]
    fn finds_repeated_rational_roots() {
        // (x - 1/2)^2 (x + 3) x (x^2 + 1)
        let mut check = vec![int(1)];
        for f in [vec![rat(-1, 2), int(1)], vec![rat(-1, 2), int(1)], vec![int(3), int(1)], vec![int(0), int(1)], vec![int(1), int(0), int(1)]] {
            let mut out = vec![int(0); check.len() + f.len() - 1];
            for (i, a) in check.iter().enumerate() {
                for (j, b) in f.iter().enumerate() {
                    out[i + j] = &out[i + j] + a * b;
                }
            }
            check = out;
        }
        let (roots, rest) = rational_roots(&check);
        assert_eq!(roots, vec![int(-3), int(0), rat(1, 2), rat(1, 2)]);
        assert_eq!(rest, vec![int(1), int(0), int(1)]);
    }

    #[test]
    fn aberth_roots_of_unity() {
        let mut p = vec![C64::new(0.0, 0.0); 6];
        p[0] = C64::new(-1.0, 0.0);
        p[5] = C64::new(1.0, 0.0);
        let roots = aberth(&p);
        for z in roots {
            assert!((z.powu(5) - 1.0).norm() < 1e-13);
        }
    }
}
