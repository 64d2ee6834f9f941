//! Radix-2 transform used to evaluate trigonometric polynomials on uniform grids.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::Complex;

/// `e^{2πik/m}` for `k = 0..m`, each entry computed directly.
pub fn roots_of_unity(m: usize) -> Vec<Complex> {
    (0..m)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / m as f64;
            Complex::new(t.cos(), t.sin())
        })
        .collect()
}

/// In place `v_j = Σ_k b_k e^{+2πi jk/m}` (no normalisation). `m` must be a power of two.
pub fn inverse_unnormalized(buf: &mut [Complex]) {
    let m = buf.len();
    assert!(
        m.is_power_of_two(),
        "radix-2 transform needs a power-of-two length"
    );
    if m <= 1 {
        return;
    }
    let bits = m.trailing_zeros();
    for i in 0..m {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            buf.swap(i, j);
        }
    }
    let roots = roots_of_unity(m);
    let mut len = 2;
    while len <= m {
        let half = len / 2;
        let stride = m / len;
        for start in (0..m).step_by(len) {
            for k in 0..half {
                let w = roots[k * stride];
                let a = buf[start + k];
                let b = buf[start + k + half] * w;
                buf[start + k] = a + b;
                buf[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive(b: &[Complex]) -> Vec<Complex> {
        let m = b.len();
        (0..m)
            .map(|j| {
                b.iter()
                    .enumerate()
                    .map(|(k, c)| {
                        let t = 2.0 * PI * ((j * k) % m) as f64 / m as f64;
                        c * Complex::new(t.cos(), t.sin())
                    })
                    .sum()
            })
            .collect()
    }

    proptest! {
        #[test]
        fn matches_naive_transform(
            log_m in 0u32..8,
            seed in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 128)
        ) {
            let m = 1usize << log_m;
            let b: Vec<Complex> = seed[..m].iter().map(|&(r, i)| Complex::new(r, i)).collect();
            let mut fast = b.clone();
            inverse_unnormalized(&mut fast);
            for (x, y) in fast.iter().zip(naive(&b)) {
                prop_assert!((x - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    #[should_panic]
    fn rejects_other_lengths() {
        let mut b = alloc::vec![Complex::new(0.0, 0.0); 6];
        inverse_unnormalized(&mut b);
    }
}
