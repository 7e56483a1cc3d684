//! Jordan chains of Q for the Lipmaa–Wallén representation and the
//! decomposition of C over them.

use radixrat::exactnum::to_complex_vec;
use radixrat::fixtures;
use radixrat::spectral::{decompose_c, jordan_basis};

fn main() {
    let rep = fixtures::lipmaa_wallen();
    let chains = jordan_basis(&rep.q(), 1e-9, &rep.eigen_hints).unwrap();
    let dec = decompose_c(&chains, &to_complex_vec(rep.c()), Some(rep.c())).unwrap();
    for (i, ch) in chains.iter().enumerate() {
        let comp: Vec<f64> = dec.component(i, &chains).iter().map(|z| z.re).collect();
        println!("eigenvalue {} height {}: component {comp:?}", ch.value().re, ch.height());
    }
}
