//! Asymptotic expansion of the Coquet sums, printed as a report.

use radixrat::expansion::lrtoae2;
use radixrat::fixtures;
use radixrat::jsr::{jsr_estimate, JsrConfig};

fn main() {
    let rep = fixtures::coquet();
    let jsr = jsr_estimate(&rep, &JsrConfig::default()).unwrap();
    let exp = lrtoae2(&rep, &jsr).unwrap();
    println!("{}", serde_json::to_string_pretty(&exp.report()).unwrap());
}
