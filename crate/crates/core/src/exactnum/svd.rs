use super::field::C64;
use super::matrix::Mat;

/// Singular values in decreasing order, by one-sided Jacobi rotations on the
/// columns. This diagonalizes the Gram matrix M^H M implicitly, without
/// squaring the condition number.
pub fn singular_values(m: &Mat<C64>) -> Vec<f64> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut u: Vec<Vec<C64>> = (0..cols).map(|j| m.col(j)).collect();
    let norm2 = |v: &[C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>();

    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = norm2(&u[p]);
                let beta = norm2(&u[q]);
                let gamma: C64 = (0..rows).map(|i| u[p][i].conj() * u[q][i]).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let up = u[p][i];
                    let uq = u[q][i] * phase.conj();
                    u[p][i] = up * c - uq * s;
                    u[q][i] = up * s + uq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = u.iter().map(|c| norm2(c).sqrt()).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn orthogonal_scaled() {
        let m = Mat::from_rows(vec![vec![c(1.0), c(1.0)], vec![c(1.0), c(-1.0)]]).unwrap();
        let sv = singular_values(&m);
        assert!((sv[0] - 2f64.sqrt()).abs() < 1e-14);
        assert!((sv[1] - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn rank_one_complex() {
        let i = C64::new(0.0, 1.0);
        let m = Mat::from_rows(vec![vec![c(1.0), i], vec![i, c(-1.0)]]).unwrap();
        let sv = singular_values(&m);
        assert!((sv[0] - 2.0).abs() < 1e-14);
        assert!(sv[1].abs() < 1e-14);
    }

    #[test]
    fn rectangular_upper() {
        let m = Mat::from_rows(vec![vec![c(3.0), c(0.0)], vec![c(4.0), c(5.0)]]).unwrap();
        let sv = singular_values(&m);
        // singular values of [[3,0],[4,5]] are sqrt(45) and sqrt(5)
        assert!((sv[0] - 45f64.sqrt()).abs() < 1e-13);
        assert!((sv[1] - 5f64.sqrt()).abs() < 1e-13);
    }
}
