//! Terms of the Rudin–Shapiro sequence from its linear representation.

use radixrat::fixtures;

fn main() {
    let rep = fixtures::rudin_shapiro();
    let terms: Vec<String> = (0..32).map(|n| rep.eval_term(n).to_string()).collect();
    println!("{}", terms.join(" "));
}
