//! The Billingsley distribution function by the cascade algorithm, next
//! to the exact values at dyadic points.

use radixrat::dilation::DilationSystem;
use radixrat::exactnum::rat;
use radixrat::fixtures;
use radixrat::jsr::{jsr_estimate, JsrConfig};
use radixrat::spectral::jordan_basis;

fn main() {
    let rep = fixtures::billingsley(rat(1, 4));
    let jsr = jsr_estimate(&rep, &JsrConfig::default()).unwrap();
    let chain = jordan_basis(&rep.q(), 1e-9, &rep.eigen_hints).unwrap().remove(0);
    let mut sys = DilationSystem::from_chain(&rep, &chain).unwrap();
    sys.check_admissible(&jsr, false).unwrap();
    let (grid, diffs) = sys.cascade_grid(20, 16).unwrap();
    for w in diffs.windows(2).skip(4) {
        println!("difference ratio {:.4}", w[1] / w[0]);
    }
    for k in [1i64, 3, 5, 7] {
        let exact = sys.eval_rational(&rat(k, 8)).unwrap()[(0, 0)].re;
        println!("F({k}/8) = {exact:.6}, cascade {:.6}", grid.at((k as usize) << 17, 0, 0).re);
    }
}
