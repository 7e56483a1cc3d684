//! Recovers a linear representation from the terms of the Thue–Morse
//! sequence and reduces it.

use radixrat::exactnum::int;
use radixrat::linrep::infer_representation;

fn main() {
    let tm = |n: u64| if n.count_ones() % 2 == 0 { int(1) } else { int(-1) };
    let rep = infer_representation(&tm, 2, 8, 32).unwrap();
    println!("dimension {}", rep.dim());
    for (r, m) in rep.mats().iter().enumerate() {
        println!("A_{r} = {:?}", m.to_rows().iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>());
    }
}
