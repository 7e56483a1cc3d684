//! Joint spectral radius bounds for mergesort and Rudin–Shapiro.

use radixrat::fixtures;
use radixrat::jsr::{jsr_estimate, JsrConfig};

fn main() {
    for rep in [fixtures::mergesort(), fixtures::rudin_shapiro4(), fixtures::billingsley(radixrat::exactnum::rat(1, 4))] {
        let est = jsr_estimate(&rep, &JsrConfig::default()).unwrap();
        println!(
            "{}: {:.6} <= lambda* <= {:.6}, attained {:?}",
            rep.name.as_deref().unwrap_or("?"),
            est.lower,
            est.upper,
            est.attained
        );
    }
}
