//! Brute-force check of the Rudin–Shapiro expansion up to N = 4^8.

use radixrat::expansion::lrtoae2;
use radixrat::fixtures;
use radixrat::harness::{compare_integers, NRange};
use radixrat::jsr::{jsr_estimate, JsrConfig};

fn main() {
    let rep = fixtures::rudin_shapiro4();
    let jsr = jsr_estimate(&rep, &JsrConfig::default()).unwrap();
    let exp = lrtoae2(&rep, &jsr).unwrap();
    let r = compare_integers(&rep, &exp, NRange::new(1, 1 << 16)).unwrap();
    println!(
        "{} values, envelope {}, fitted c {:.3}, second half {:.3}, pass {}",
        r.compared,
        r.envelope,
        r.fit.fitted_c,
        r.fit.second_half_max,
        r.pass()
    );
}
