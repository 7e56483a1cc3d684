//! One line per acceptance criterion: "ACn PASS: ..." or "ACn FAIL: ...".
//! Where a stated value is contradicted by an independent check, the
//! literal check stays red and the corrected check is reported next to it.

use std::f64::consts::PI;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use radixrat::dilation::DilationSystem;
use radixrat::exactnum::{int, rat, to_complex_vec, vec_add, Field, Mat, NormKind, Rational, C64};
use radixrat::expansion::{eval_expansion_integers, lrtoae1, lrtoae2};
use radixrat::fixtures;
use radixrat::harness::{compare_with, continuity_probe, continuity_probe_with, rosette_check, NRange, Projection};
use radixrat::jsr::{jsr_estimate, lambda_t_power_exact, lie_algebra_closure, Attainment, JsrConfig};
use radixrat::linrep::{infer_representation, reduce, AnyRep, DigitWord, LinearRep, SigmaAccumulator, SigmaPath, SumMode};
use radixrat::spectral::{decompose_c, geometric_sum_on_chain, jordan_basis, qk_on_chain, JordanChain};

type Outcome = (bool, String);

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn cvec(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| c(x)).collect()
}

fn dist(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// A vector v with L·v = value, for comparing a scalar reference under Projection::Row(L).
fn lift(l: &[C64], value: f64) -> Vec<C64> {
    let n2: f64 = l.iter().map(|z| z.norm_sqr()).sum();
    l.iter().map(|z| z.conj() * (value / n2)).collect()
}

fn inf(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn rational_fixtures() -> Vec<LinearRep<Rational>> {
    fixtures::all()
        .into_iter()
        .filter_map(|(_, r)| match r {
            AnyRep::Rational(r) => Some(r),
            AnyRep::Complex(_) => None,
        })
        .collect()
}

// AC1

fn ac1() -> Outcome {
    let rs = fixtures::rudin_shapiro();
    let sd = fixtures::sum_of_digits();
    let mut bad = Vec::new();
    for n in 0..1u64 << 16 {
        // overlapping occurrences of "11" in the binary word
        let pairs = (0..63).filter(|&i| (n >> i) & 3 == 3).count();
        let want = if pairs % 2 == 0 { int(1) } else { int(-1) };
        if rs.eval_term(n) != want {
            bad.push(format!("rudin_shapiro n = {n}"));
        }
        if sd.eval_term(n) != int(n.count_ones() as i64) {
            bad.push(format!("sum_of_digits n = {n}"));
        }
    }
    (bad.is_empty(), if bad.is_empty() { "2^16 terms of each fixture exact".into() } else { bad[..bad.len().min(3)].join(", ") })
}

// AC2

fn ac2() -> Outcome {
    let budget = 1 << 20;
    let ms = lambda_t_power_exact(&fixtures::mergesort(), 4, NormKind::One, budget).unwrap();
    let literal = ms == int(9);
    let rs4 = fixtures::rudin_shapiro4();
    let rs_ok: Vec<bool> = (1..=4)
        .map(|t| {
            let p = lambda_t_power_exact(&rs4, t, NormKind::One, budget).unwrap();
            p == int(1)
        })
        .collect();
    let rs_all = rs_ok.iter().all(|&b| b);
    // independent float enumeration of the sixteen length-4 words
    let mats: Vec<Mat<C64>> = fixtures::mergesort().mats().iter().map(|m| m.to_complex()).collect();
    let mut worst = 0.0f64;
    for w in 0..16u32 {
        let mut p = Mat::<C64>::identity(4);
        for i in (0..4).rev() {
            p = p.mul(&mats[((w >> i) & 1) as usize]);
        }
        let col = (0..4).map(|j| (0..4).map(|i| p[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max);
        worst = worst.max(col);
    }
    (
        literal && rs_all,
        format!(
            "mergesort lambda_4^4 = {ms} (stated 9; independent float enumeration gives {worst}); \
             rudin_shapiro4 lambda_T = 1 for T = 1..4: {rs_all}"
        ),
    )
}

// AC3

fn ac3() -> Outcome {
    let rep = fixtures::vdc_discrepancy();
    let lie = lie_algebra_closure(rep.mats(), 0.0).unwrap();
    let jsr = jsr_estimate(&rep, &JsrConfig::default()).unwrap();
    let dims_ok = lie.derived_dims == vec![4, 3, 1, 0];
    let value_ok = jsr.lower == 1.0 && jsr.upper == 1.0;
    let literal = dims_ok && lie.solvable && value_ok && jsr.attained == Attainment::Yes;
    // corrected: A_0A_0A_1 has a Jordan block at 1, so its powers grow linearly
    let w = rep.word_matrix(&[0, 0, 1]);
    let norm = |k: u32| {
        let mut p = Mat::<Rational>::identity(3);
        for _ in 0..k {
            p = p.mul(&w);
        }
        p.exact_norm(NormKind::One).unwrap()
    };
    let (n32, n64, n128) = (norm(32), norm(64), norm(128));
    let (a, b, d) = (n32.to_c64().re, n64.to_c64().re, n128.to_c64().re);
    let linear = ((d - b) / (b - a) - 2.0).abs() < 1e-9 && b > a;
    (
        literal,
        format!(
            "derived dims {:?}, solvable {}, lower = upper = 1: {value_ok}, attained {:?} (stated yes); \
             ||(A_0A_0A_1)^k||_1 at k = 32, 64, 128 is {a:.4}, {b:.4}, {d:.4}, linear growth: {linear}",
            lie.derived_dims, lie.solvable, jsr.attained
        ),
    )
}

// AC4

/// Σ of the components of C over every chain with the given eigenvalue.
fn component_at(rep: &LinearRep<Rational>, value: f64) -> (Vec<C64>, Vec<(f64, usize)>) {
    let chains = jordan_basis(&rep.q(), 1e-9, &rep.eigen_hints).unwrap();
    let cc = to_complex_vec(rep.c());
    let dec = decompose_c(&chains, &cc, Some(rep.c())).unwrap();
    let mut out = vec![c(0.0); rep.dim()];
    for (i, ch) in chains.iter().enumerate() {
        if (ch.value() - c(value)).norm() < 1e-9 {
            out = vec_add(&out, &dec.component(i, &chains));
        }
    }
    let mut spectrum: Vec<(f64, usize)> = Vec::new();
    for ch in &chains {
        let v = ch.value().re;
        match spectrum.iter_mut().find(|(x, _)| (*x - v).abs() < 1e-9) {
            Some(e) => e.1 += ch.height(),
            None => spectrum.push((v, ch.height())),
        }
    }
    spectrum.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    (out, spectrum)
}

fn ac4() -> Outcome {
    let co = fixtures::coquet();
    let (v3, spectrum_co) = component_at(&co, 3.0);
    let (v0, _) = component_at(&co, 0.0);
    let e_co = dist(&v3, &cvec(&[2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0])).max(dist(&v0, &cvec(&[1.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0])));
    let lw = fixtures::lipmaa_wallen();
    let (v4, spectrum_lw) = component_at(&lw, 4.0);
    let (v2, _) = component_at(&lw, 2.0);
    let (v1, _) = component_at(&lw, 1.0);
    let p4: Vec<f64> = [1.0; 8].iter().map(|x| x / 8.0).collect();
    let p2: Vec<f64> = [3.0, 1.0, 1.0, -1.0, 1.0, -1.0, -1.0, -3.0].iter().map(|x| x / 8.0).collect();
    let p1: Vec<f64> = [2.0, -1.0, -1.0, 0.0, -1.0, 0.0, 0.0, 1.0].iter().map(|x| x / 4.0).collect();
    let e_lw = dist(&v4, &cvec(&p4)).max(dist(&v2, &cvec(&p2))).max(dist(&v1, &cvec(&p1)));
    let spectrum_ok = spectrum_co == vec![(3.0, 2), (0.0, 1)] && spectrum_lw == vec![(4.0, 1), (2.0, 3), (1.0, 4)];
    (
        spectrum_ok && e_co <= 1e-10 && e_lw <= 1e-10,
        format!("coquet {spectrum_co:?}, lipmaa_wallen {spectrum_lw:?}, component errors {e_co:.1e} and {e_lw:.1e}"),
    )
}

// AC5

fn grid_residuals<T: Field>(rep: &LinearRep<T>) -> Result<f64, String> {
    let jsr = jsr_estimate(rep, &JsrConfig::default()).map_err(|e| e.to_string())?;
    let exp = lrtoae1(rep, &jsr).map_err(|e| e.to_string())?;
    Ok(exp.core.coefficients.iter().map(|cc| cc.system.residual(&cc.grid)).fold(0.0, f64::max))
}

fn ac5() -> Outcome {
    let rep = fixtures::mergesort();
    let chains = jordan_basis(&rep.q(), 1e-9, &rep.eigen_hints).unwrap();
    let ch = chains.iter().find(|ch| ch.value() == c(2.0)).unwrap();
    let sys = DilationSystem::from_chain(&rep, ch).unwrap();
    let g = sys.grid(10).unwrap();
    // the eigenvector column, normalised as printed: (0, 0, −1, 1)·x
    let v0 = &ch.vectors[0];
    let s = v0[3];
    let mut lin = 0.0f64;
    for k in 0..g.len() {
        let x = k as f64 / 1024.0;
        let want = [0.0, 0.0, -x, x];
        for i in 0..4 {
            lin = lin.max((g.at(k, i, 0) / s - c(want[i])).norm());
        }
    }
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for (name, r) in fixtures::all() {
        if name == "triangular_tiling" {
            continue;
        }
        let res = match &r {
            AnyRep::Rational(r) => grid_residuals(r),
            AnyRep::Complex(r) => grid_residuals(r),
        };
        match res {
            Ok(x) => worst = worst.max(x),
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    let tiling = fixtures::triangular_tiling();
    let tj = jsr_estimate(&tiling, &JsrConfig::default()).unwrap();
    let tch = jordan_basis(&tiling.q(), 1e-9, &tiling.eigen_hints).unwrap();
    let refused = tch.iter().all(|ch| {
        let mut sys = DilationSystem::from_chain(&tiling, ch).unwrap();
        matches!(sys.check_admissible(&tj, false), Err(radixrat::Error::NoSolutionGuarantee { .. }))
    });
    (
        lin <= 1e-12 && worst <= 1e-12 && failures.is_empty() && refused,
        format!(
            "mergesort linear F error {lin:.1e} on 1025 nodes; max grid residual {worst:.1e}{}; tiling refused: {refused}",
            if failures.is_empty() { String::new() } else { format!(" (errors: {})", failures.join("; ")) }
        ),
    )
}

// AC6

fn ac6() -> Outcome {
    let rep = fixtures::billingsley(rat(1, 4));
    let jsr = jsr_estimate(&rep, &JsrConfig::default()).unwrap();
    let chains = jordan_basis(&rep.q(), 1e-9, &rep.eigen_hints).unwrap();
    let mut sys = DilationSystem::from_chain(&rep, &chains[0]).unwrap();
    sys.check_admissible(&jsr, false).unwrap();
    let (g, diffs) = sys.cascade_grid(22, 20).unwrap();
    // diffs[i] is iteration i + 1; ratios over iterations 5..20
    let ratios: Vec<f64> = (4..19).map(|i| diffs[i + 1] / diffs[i]).collect();
    let worst = ratios.iter().map(|r| (r / 0.75 - 1.0).abs()).fold(0.0, f64::max);
    let monotone = (1..g.len()).all(|k| g.at(k, 0, 0).re >= g.at(k - 1, 0, 0).re);
    (
        worst <= 0.1 && monotone,
        format!(
            "ratios {:.4}..{:.4}, max relative gap to 3/4 {worst:.3}; grid monotone: {monotone}",
            ratios.iter().cloned().fold(f64::INFINITY, f64::min),
            ratios.iter().cloned().fold(0.0, f64::max)
        ),
    )
}

// AC7

/// Q^K V and Σ_{k≤K} Q^k V for the top vector, each with its error scale.
fn direct(q: &Mat<Rational>, ch: &JordanChain, k: u64) -> ((Vec<C64>, f64), (Vec<C64>, f64)) {
    if let Some(ev) = &ch.exact_vectors {
        let mut v = ev.last().unwrap().clone();
        let mut sum = v.clone();
        for _ in 0..k {
            v = q.mul_vec(&v);
            sum = vec_add(&sum, &v);
        }
        let (v, sum) = (to_complex_vec(&v), to_complex_vec(&sum));
        let (sv, ss) = (inf(&v), inf(&sum));
        return ((v, sv), (sum, ss));
    }
    let qc = q.to_complex();
    let qa = q.map(|x| c(x.to_c64().norm()));
    let mut v = ch.vectors.last().unwrap().clone();
    let mut a: Vec<C64> = v.iter().map(|z| c(z.norm())).collect();
    let mut sum = v.clone();
    let mut sum_scale = inf(&a);
    for _ in 0..k {
        v = qc.mul_vec(&v);
        a = qa.mul_vec(&a);
        sum = vec_add(&sum, &v);
        sum_scale += inf(&a);
    }
    let s = inf(&a);
    ((v, s), (sum, sum_scale))
}

fn ac7() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let (mut chains_checked, mut skipped) = (0usize, 0usize);
    for _ in 0..200 {
        let d = rng.gen_range(1..=5);
        let k = rng.gen_range(0..=30u64);
        let q = Mat::from_fn(d, d, |_, _| rat(rng.gen_range(-4..=4), rng.gen_range(1..=3)));
        let chains = match jordan_basis(&q, 1e-9, &[]) {
            Ok(ch) => ch,
            Err(_) => {
                skipped += 1;
                continue;
            }
        };
        for ch in &chains {
            if ch.exact_vectors.is_none() && ch.residual(&q.to_complex()) > 1e-9 {
                skipped += 1;
                continue;
            }
            let ((p, ps), (s, ss)) = direct(&q, ch, k);
            let e1 = dist(&qk_on_chain(ch, k), &p) / ps.max(1e-300);
            let e2 = dist(&geometric_sum_on_chain(ch, k), &s) / ss.max(1e-300);
            worst = worst.max(e1).max(e2);
            chains_checked += 1;
        }
    }
    (
        worst <= 1e-9 && skipped == 0,
        format!("200 systems, {chains_checked} chains, max relative error {worst:.1e}, {skipped} skipped"),
    )
}

// AC8

fn frac(x: f64) -> f64 {
    x - x.floor()
}

fn vdc_check() -> Outcome {
    let rep = fixtures::vdc_discrepancy();
    let a: Vec<Mat<C64>> = rep.mats().iter().map(|m| m.to_complex()).collect();
    let v = Mat::from_cols(&[cvec(&[0.0, 0.0, 0.5]), cvec(&[0.5, 0.5, 0.0])]);
    let sys = DilationSystem::new(2, a, c(2.0), v).unwrap();
    let l = to_complex_vec(rep.l());
    let reference = |n: u64| -> Vec<C64> {
        let nf = n as f64;
        let t = nf.log2();
        let ft = frac(t);
        // F at 2^{{t}−1} = N/2^{K+1}: the binary digits of N
        let f = sys.eval_digits(&DigitWord::integer(n, 2).digits);
        let phi = 0.25 * (1.0 - ft + 2f64.powf(3.0 - ft) * (f[(1, 1)].re + f[(2, 1)].re));
        lift(&l, nf * (0.25 * t + phi))
    };
    let r = compare_with(
        &rep,
        NRange::new(1 << 8, 1 << 16),
        &Projection::Row(l.clone()),
        &reference,
        &|n| n.ln(),
        "log N",
    )
    .unwrap();
    (r.pass(), format!("vdc: fitted c = {:.3}, second half {:.3}", r.fit.fitted_c, r.fit.second_half_max))
}

fn coquet_check() -> Outcome {
    let rep = fixtures::coquet();
    let a: Vec<Mat<C64>> = rep.mats().iter().map(|m| m.to_complex()).collect();
    let v = Mat::from_cols(&[cvec(&[2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0])]);
    let sys = DilationSystem::new(4, a, c(3.0), v).unwrap();
    let f_sum = |digits: &[u32]| {
        let f = sys.eval_digits(digits);
        (0..3).map(|i| f[(i, 0)].re).sum::<f64>()
    };
    let l = to_complex_vec(rep.l());
    let reference = |n: u64| -> Vec<C64> {
        // N^{log₄3}·3^{1−{t}} = 3^{K+1}; F at N/4^{K+1}
        let digits = DigitWord::integer(n, 4).digits;
        lift(&l, 3f64.powi(digits.len() as i32) * f_sum(&digits))
    };
    let r = compare_with(&rep, NRange::new(16, 1 << 20), &Projection::Row(l.clone()), &reference, &|_| 1.0, "1")
        .unwrap();
    // Φ(t) = 3^{1−t}F(4^{t−1}) on t = i/10⁴; F from 30 base-4 digits of 4^{t−1}
    let mut min_phi = f64::INFINITY;
    for i in 0..10_000 {
        let t = i as f64 / 10_000.0;
        let mut x = 4f64.powf(t - 1.0);
        let mut digits = Vec::with_capacity(30);
        for _ in 0..30 {
            x *= 4.0;
            let d = (x.floor() as u32).min(3);
            digits.push(d);
            x -= d as f64;
        }
        min_phi = min_phi.min(3f64.powf(1.0 - t) * f_sum(&digits));
    }
    (
        r.pass() && min_phi > 0.0,
        format!("coquet: fitted c = {:.3}, second half {:.3}, min phi {min_phi:.4}", r.fit.fitted_c, r.fit.second_half_max),
    )
}

fn rudin_shapiro_check() -> Outcome {
    let rep = fixtures::rudin_shapiro4();
    let jsr = jsr_estimate(&rep, &JsrConfig::default()).unwrap();
    let exp = lrtoae2(&rep, &jsr).unwrap();
    let l = to_complex_vec(rep.l());
    let reference = |n: u64| eval_expansion_integers(&exp, n);
    let r = compare_with(&rep, NRange::new(16, 1 << 20), &Projection::Row(l.clone()), &reference, &|_| 1.0, "1")
        .unwrap();
    (r.pass(), format!("rudin_shapiro4: fitted c = {:.3}, second half {:.3}", r.fit.fitted_c, r.fit.second_half_max))
}

/// Σ_N against factor·N·Φ(log₂N), Φ(t) = 2^{−1/2}cosh(({t}−½)ln 2), within c.
fn rescaled(factor: f64) -> (bool, f64, f64) {
    let rep = fixtures::rescaled_identity(2);
    let l = to_complex_vec(rep.l());
    let reference = |n: u64| {
        let t = frac((n as f64).log2());
        let phi = 2f64.powf(-0.5) * ((t - 0.5) * 2f64.ln()).cosh();
        lift(&l, factor * n as f64 * phi)
    };
    let r = compare_with(&rep, NRange::new(16, 1 << 20), &Projection::Row(l.clone()), &reference, &|_| 1.0, "1")
        .unwrap();
    (r.pass(), r.fit.fitted_c, r.fit.second_half_max)
}

fn ac8() -> Outcome {
    let parts = [vdc_check(), coquet_check(), rudin_shapiro_check()];
    // |2Σ/N − Φ| ≤ c/N is |Σ − ½NΦ| ≤ c/2
    let (lit, lc, lh) = rescaled(0.5);
    let (cor, cc, ch) = rescaled(1.0);
    let ok = parts.iter().all(|p| p.0) && lit;
    let mut msg: Vec<String> = parts.into_iter().map(|p| p.1).collect();
    msg.push(format!("rescaling 2Σ/N: pass {lit} (c = {lc:.3e}, second half {lh:.3e})"));
    msg.push(format!("corrected Σ/N: pass {cor} (c = {cc:.3}, second half {ch:.3})"));
    (ok, msg.join("; "))
}

// AC9

fn ac9() -> Outcome {
    let range = NRange::new(1, 1 << 12);
    let r = rosette_check(2.0 * PI / 5.0, range).unwrap();
    let per = r.period_residual.unwrap_or(f64::INFINITY);
    let anti = r.antipodal_residual.unwrap_or(f64::INFINITY);
    let literal = r.period == Some(5.0) && per <= 1e-6 && r.antipodal_shift == Some(2.5) && anti <= 1e-6;
    let closed = r.closed_form_residual <= 1e-9;
    let irr = rosette_check(1.0, range).unwrap();
    let no_period = irr.smallest_period.is_none();
    // corrected: ϑ = 3π/5 has an integer antipodal shift
    let r3 = rosette_check(3.0 * PI / 5.0, range).unwrap();
    let anti3 = r3.antipodal_residual.unwrap_or(f64::INFINITY);
    (
        literal && closed && no_period,
        format!(
            "2pi/5: period 5 residual {per:.1e}, antipodal shift 5/2 residual {anti:.3} (stated <= 1e-6), \
             closed form {:.1e}; theta = 1 period: {:?}; 3pi/5 antipodal shift {:?} residual {anti3:.1e}",
            r.closed_form_residual, irr.smallest_period, r3.antipodal_shift
        ),
    )
}

// AC10

/// Literal: the module's exponent. Corrected: 0.1 below it when λ* is not attained.
fn probe<T: Field>(rep: &LinearRep<T>) -> Result<((bool, f64, f64), bool), String> {
    let jsr = jsr_estimate(rep, &JsrConfig::default()).map_err(|e| e.to_string())?;
    let exp = lrtoae2(rep, &jsr).map_err(|e| e.to_string())?;
    let ks = [2, 3, 4, 5];
    let r = continuity_probe(&exp, &ks, 1e-6);
    let jump = r.jumps.iter().map(|j| j.1).fold(0.0, f64::max);
    let corrected = if jsr.attained == Attainment::Yes {
        r.pass
    } else {
        continuity_probe_with(&exp, &ks, 1e-6, r.alpha.map(|a| a - 0.1)).pass
    };
    Ok(((r.pass, jump, r.bound), corrected))
}

fn ac10() -> Outcome {
    let (mut ok, mut ok_corrected) = (true, true);
    let mut notes = Vec::new();
    let mut count = 0;
    for (name, r) in fixtures::all() {
        let res = match &r {
            AnyRep::Rational(r) => probe(r),
            AnyRep::Complex(r) => probe(r),
        };
        match res {
            Ok(((pass, jump, bound), corrected)) => {
                count += 1;
                ok_corrected &= corrected;
                if !pass {
                    ok = false;
                    notes.push(format!("{name} jump {jump:.2e} > {bound:.2e}"));
                }
            }
            Err(e) => notes.push(format!("{name}: no expansion ({e})")),
        }
    }
    (
        ok,
        format!(
            "{count} expansions probed at t = 2..5{}; with exponent 0.1 lower where lambda* is not attained: pass {ok_corrected}",
            if notes.is_empty() { String::new() } else { format!("; {}", notes.join("; ")) }
        ),
    )
}

// AC11

fn ac11() -> Outcome {
    let mut bad: Vec<String> = Vec::new();
    for rep in rational_fixtures() {
        let name = rep.name.clone().unwrap_or_default();
        let b = rep.radix() as u64;
        let k_max = (1..=10).take_while(|&k| b.pow(k) <= 1 << 12).last().unwrap_or(1) as usize;
        let qk = rep.q_powers_c(k_max);
        for k in 0..=k_max {
            if rep.running_sum_words(k, &int(1), SumMode::Naive).unwrap() != qk[k] {
                bad.push(format!("{name} S_K(1), K = {k}"));
            }
            let m = b.pow(k as u32);
            for num in [0, m / 3, m / 2, m.saturating_sub(1)] {
                let x = Rational::new((num as i64).into(), (m as i64).into());
                if rep.running_sum_words(k, &x, SumMode::Digitwise).unwrap()
                    != rep.running_sum_words(k, &x, SumMode::Naive).unwrap()
                {
                    bad.push(format!("{name} digitwise, K = {k}"));
                }
            }
        }
        // the accumulation path, run once instead of restarting at every N
        let mut acc = SigmaAccumulator::new(&rep);
        for n in 0..3000u64 {
            let s = acc.next_sum();
            if n % 7 == 0 && s != rep.running_sum_integers(n, SigmaPath::Decompose) {
                bad.push(format!("{name} sigma paths, N = {n}"));
                break;
            }
        }
        let red = reduce(&rep).unwrap();
        if (0..2048).any(|n| red.eval_term(n) != rep.eval_term(n)) {
            bad.push(format!("{name} reduce"));
        }
        if rep.is_insensitive() {
            if b <= 8 {
                let p = rep.radix_power(2).unwrap();
                if (0..2048).any(|n| p.eval_term(n) != rep.eval_term(n)) {
                    bad.push(format!("{name} radix_power"));
                }
            }
            let level = if b > 4 { 3 } else { 8 };
            match infer_representation(&|n| rep.eval_term(n), rep.radix(), level, 32) {
                Ok(got) if (0..2048).all(|n| got.eval_term(n) == rep.eval_term(n)) => {}
                _ => bad.push(format!("{name} infer")),
            }
        }
    }
    (
        bad.is_empty(),
        if bad.is_empty() { format!("{} rational fixtures, all exact", rational_fixtures().len()) } else { bad.join(", ") },
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("AC1", ac1),
        ("AC2", ac2),
        ("AC3", ac3),
        ("AC4", ac4),
        ("AC5", ac5),
        ("AC6", ac6),
        ("AC7", ac7),
        ("AC8", ac8),
        ("AC9", ac9),
        ("AC10", ac10),
        ("AC11", ac11),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let (pass, detail) = f();
        let secs = start.elapsed().as_secs_f64();
        println!("{name} {}: {detail} [{secs:.1}s]", if pass { "PASS" } else { "FAIL" });
        failed += !pass as usize;
    }
    println!("{} of 11 criteria pass", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
