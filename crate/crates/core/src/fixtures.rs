//! Representations of the classical examples, shared by tests, examples and
//! the `radixrat` binary. Names match the JSON files under `fixtures/`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::exactnum::{int, rat, Rational, C64};
use crate::linrep::{substitution_to_linrep, AnyRep, LinearRep};

fn rrows(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
}

fn rvec(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

fn build(name: &str, radix: u32, l: &[i64], a: &[&[&[i64]]], c: &[i64]) -> LinearRep<Rational> {
    LinearRep::from_rows(radix, rvec(l), a.iter().map(|m| rrows(m)).collect(), rvec(c))
        .expect("fixture shape")
        .named(name)
}

pub fn sum_of_digits() -> LinearRep<Rational> {
    build("sum_of_digits", 2, &[0, 1], &[&[&[1, 0], &[0, 1]], &[&[1, 0], &[1, 1]]], &[1, 0])
}

pub fn rudin_shapiro() -> LinearRep<Rational> {
    let s2 = 2f64.sqrt();
    build("rudin_shapiro", 2, &[1, 1], &[&[&[1, 1], &[0, 0]], &[&[0, 0], &[1, -1]]], &[1, 0])
        .with_hints(vec![C64::new(s2, 0.0), C64::new(-s2, 0.0)])
}

pub fn rudin_shapiro4() -> LinearRep<Rational> {
    build(
        "rudin_shapiro4",
        4,
        &[1, 1],
        &[&[&[1, 1], &[0, 0]], &[&[1, -1], &[0, 0]], &[&[0, 0], &[1, 1]], &[&[0, 0], &[-1, 1]]],
        &[1, 0],
    )
}

pub fn multiples_of_3() -> LinearRep<Rational> {
    build(
        "multiples_of_3",
        2,
        &[1, 0, 0],
        &[&[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0]], &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]],
        &[1, 0, 0],
    )
}

/// v(n) = ⌈log₂ n⌉, whose running sums are the worst-case mergesort costs.
pub fn mergesort() -> LinearRep<Rational> {
    build(
        "mergesort",
        2,
        &[0, 0, 0, 1],
        &[
            &[&[0, -1, -1, -1], &[1, 2, 1, 1], &[0, 0, 1, 0], &[0, 0, 0, 1]],
            &[&[0, 0, 1, 1], &[0, 0, -1, -1], &[1, 0, -1, -2], &[0, 1, 2, 3]],
        ],
        &[1, 0, 0, 0],
    )
}

/// Distribution function of Σ X_n/2^n for i.i.d. bits with P(X = 0) = p0.
pub fn billingsley(p0: Rational) -> LinearRep<Rational> {
    let p1 = int(1) - &p0;
    let name = format!("billingsley_{}_{}", p0.numer(), p0.denom());
    LinearRep::from_rows(2, vec![int(1)], vec![vec![vec![p0]], vec![vec![p1]]], vec![int(1)])
        .expect("fixture shape")
        .named(&name)
}

fn rotation(theta: f64) -> Vec<Vec<C64>> {
    let (s, c) = theta.sin_cos();
    vec![vec![C64::new(c, 0.0), C64::new(-s, 0.0)], vec![C64::new(s, 0.0), C64::new(c, 0.0)]]
}

fn real(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| C64::new(x, 0.0)).collect()
}

pub fn triangular_tiling() -> LinearRep<C64> {
    let t = PI / 3.0;
    LinearRep::from_rows(2, real(&[1.0, 0.0]), vec![rotation(-t), rotation(t)], real(&[1.0, 0.0]))
        .expect("fixture shape")
        .named("triangular_tiling")
}

pub fn powers_of_2() -> LinearRep<Rational> {
    build("powers_of_2", 2, &[0, 1], &[&[&[1, 0], &[0, 1]], &[&[0, 0], &[1, 0]]], &[1, 0])
}

/// Additive differential probability of xor, octal digits.
pub fn lipmaa_wallen() -> LinearRep<Rational> {
    let a0: [[i64; 8]; 8] = [
        [4, 0, 0, 1, 0, 1, 1, 0],
        [0, 0, 0, 1, 0, 1, 0, 0],
        [0, 0, 0, 1, 0, 0, 1, 0],
        [0, 0, 0, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1, 1, 0],
        [0, 0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 0, 0, 0],
    ];
    let a: Vec<Vec<Vec<Rational>>> = (0..8)
        .map(|r| (0..8).map(|i| (0..8).map(|j| rat(a0[i ^ r][j ^ r], 4)).collect()).collect())
        .collect();
    let mut c = vec![int(0); 8];
    c[0] = int(1);
    LinearRep::from_rows(8, vec![int(1); 8], a, c).expect("fixture shape").named("lipmaa_wallen")
}

/// Discrepancy D(n) of the binary van der Corput sequence.
pub fn vdc_discrepancy() -> LinearRep<Rational> {
    let h = || rat(1, 2);
    let a0 = vec![vec![int(1), h(), int(0)], vec![int(0), h(), int(0)], vec![int(0), h(), int(1)]];
    let a1 = vec![vec![h(), int(0), int(0)], vec![h(), int(1), int(0)], vec![h(), int(0), int(1)]];
    LinearRep::from_rows(2, rvec(&[0, 1, 1]), vec![a0, a1], rvec(&[1, 0, 0]))
        .expect("fixture shape")
        .named("vdc_discrepancy")
}

/// (−1)^{s₂(3n)} in radix 4.
pub fn coquet() -> LinearRep<Rational> {
    build(
        "coquet",
        4,
        &[1, 1, 1],
        &[
            &[&[1, 1, 1], &[0, 0, 0], &[0, 0, 0]],
            &[&[1, 0, 0], &[0, 1, -1], &[0, 0, 0]],
            &[&[0, 0, 0], &[1, 1, 0], &[0, 0, 1]],
            &[&[0, 0, 0], &[0, 0, 0], &[1, -1, 1]],
        ],
        &[1, 0, 0],
    )
}

/// u(n) = n in radix B.
pub fn identity(radix: u32) -> LinearRep<Rational> {
    let b = radix as i64;
    let a = (0..b).map(|r| rrows(&[&[b, 0], &[r, 1]])).collect();
    LinearRep::from_rows(radix, rvec(&[0, 1]), a, rvec(&[1, 0]))
        .expect("fixture shape")
        .named(&format!("identity_{radix}"))
}

/// u(n) = n / B^{length of n}: the identity rescaled by 1/B.
pub fn rescaled_identity(radix: u32) -> LinearRep<Rational> {
    let b = radix as i64;
    let a = (0..b)
        .map(|r| vec![vec![int(1), int(0)], vec![rat(r, b), rat(1, b)]])
        .collect();
    LinearRep::from_rows(radix, rvec(&[0, 1]), a, rvec(&[1, 0]))
        .expect("fixture shape")
        .named(&format!("rescaling_{radix}"))
}

/// A_0 = cos ϑ·I, A_1 = sin ϑ·R_{π/2}, C = E_1.
pub fn rosette(theta: f64) -> LinearRep<C64> {
    let (s, c) = theta.sin_cos();
    let z = C64::new(0.0, 0.0);
    let a0 = vec![vec![C64::new(c, 0.0), z], vec![z, C64::new(c, 0.0)]];
    let a1 = vec![vec![z, C64::new(-s, 0.0)], vec![C64::new(s, 0.0), z]];
    LinearRep::from_rows(2, real(&[1.0, 0.0]), vec![a0, a1], real(&[1.0, 0.0]))
        .expect("fixture shape")
        .named("rosette")
        .with_hints(vec![C64::from_polar(1.0, theta), C64::from_polar(1.0, -theta)])
}

fn substitution(name: &str, rules: &[(char, &str)], out: &[(char, i64)]) -> LinearRep<Rational> {
    let rules: BTreeMap<char, String> = rules.iter().map(|&(c, w)| (c, w.to_string())).collect();
    let out: BTreeMap<char, Rational> = out.iter().map(|&(c, v)| (c, int(v))).collect();
    substitution_to_linrep(&rules, &out, 'a').expect("fixture substitution").named(name)
}

pub fn thue_morse() -> LinearRep<Rational> {
    substitution("thue_morse", &[('a', "ab"), ('b', "ba")], &[('a', 1), ('b', -1)])
}

pub fn period_doubling() -> LinearRep<Rational> {
    substitution("period_doubling", &[('a', "ab"), ('b', "aa")], &[('a', 0), ('b', 1)])
}

/// Every fixture of the corpus, keyed by file stem.
pub fn all() -> Vec<(String, AnyRep)> {
    let rats = vec![
        sum_of_digits(),
        thue_morse(),
        period_doubling(),
        rudin_shapiro(),
        rudin_shapiro4(),
        multiples_of_3(),
        mergesort(),
        billingsley(rat(1, 4)),
        billingsley(rat(1, 5)),
        powers_of_2(),
        lipmaa_wallen(),
        vdc_discrepancy(),
        coquet(),
        identity(2),
        rescaled_identity(2).named("rescaling"),
    ];
    let mut out: Vec<(String, AnyRep)> =
        rats.into_iter().map(|r| (r.name.clone().unwrap(), AnyRep::Rational(r))).collect();
    out.push(("triangular_tiling".into(), AnyRep::Complex(triangular_tiling())));
    let mut r5 = rosette(2.0 * PI / 5.0);
    r5.name = Some("rosette_2pi5".into());
    out.push(("rosette_2pi5".into(), AnyRep::Complex(r5)));
    let mut r1 = rosette(1.0);
    r1.name = Some("rosette_1".into());
    out.push(("rosette_1".into(), AnyRep::Complex(r1)));
    out
}
