//! S_K(x) and 𝚺_N for the binary sum of digits, both computed exactly.

use radixrat::exactnum::rat;
use radixrat::fixtures;
use radixrat::linrep::{SigmaPath, SumMode};

fn main() {
    let rep = fixtures::sum_of_digits();
    let s = rep.running_sum_words(10, &rat(1, 3), SumMode::Digitwise).unwrap();
    println!("S_10(1/3) = {:?}", s.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    for n in [10u64, 100, 1000] {
        let sigma = rep.running_sum_integers(n, SigmaPath::Decompose);
        let total: i64 = (0..=n).map(|k| k.count_ones() as i64).sum();
        println!("N = {n}: L·Σ_N = {}, direct {total}", sigma[1]);
    }
}
