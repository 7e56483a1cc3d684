//! The rosette arcs for a rational and an irrational angle.

use std::f64::consts::PI;

use radixrat::harness::{rosette_check, NRange};

fn main() {
    for theta in [2.0 * PI / 5.0, 3.0 * PI / 5.0, 1.0] {
        let r = rosette_check(theta, NRange::new(1, 1 << 12)).unwrap();
        println!(
            "theta {theta:.4}: center {:?}, smallest period {:?}, closed form residual {:.1e}",
            r.center, r.smallest_period, r.closed_form_residual
        );
    }
}
