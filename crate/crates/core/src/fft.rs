//! Forward DFTs over the two finite index groups of a model space:
//! the cyclic group `Z/p^M` (radix-p Cooley-Tukey) and the elementary abelian
//! group `(Z/p)^M` (one size-p DFT per axis).
//!
//! Both use the sign convention `X[b] = sum_a x[a] exp(-2 pi i <a, b>)`.
//! Roots of unity come from exact rational turns via [`unit_root`].

use num_complex::Complex64;

use crate::localfield::unit_root;

/// `exp(-2 pi i j / n)` for `j` in `0..n`.
fn roots(n: usize) -> Vec<Complex64> {
    (0..n).map(|j| unit_root(((n - j) % n) as u64, n as u64)).collect()
}

/// `log_p(n)`, or `None` when `n` is not a power of `p`.
pub fn log_p(mut n: usize, p: usize) -> Option<u32> {
    let mut e = 0;
    while n > 1 {
        if !n.is_multiple_of(p) {
            return None;
        }
        n /= p;
        e += 1;
    }
    (n == 1).then_some(e)
}

/// Reverses the `digits` base-p digits of `i`.
pub fn digit_reverse(mut i: usize, p: usize, digits: u32) -> usize {
    let mut r = 0;
    for _ in 0..digits {
        r = r * p + i % p;
        i /= p;
    }
    r
}

/// Cyclic DFT of length `p^M`.
pub fn cyclic_dft(input: &[Complex64], p: u32) -> Vec<Complex64> {
    let n = input.len();
    let p = p as usize;
    let stages = log_p(n, p).expect("length is a power of p");
    let w = roots(n);
    let mut data = vec![Complex64::new(0.0, 0.0); n];
    for (i, &x) in input.iter().enumerate() {
        data[digit_reverse(i, p, stages)] = x;
    }
    let mut gathered = vec![Complex64::new(0.0, 0.0); p];
    let mut len = 1;
    for _ in 0..stages {
        let sub = len;
        len *= p;
        let twiddle_step = n / len;
        for start in (0..n).step_by(len) {
            for j in 0..sub {
                for (r, slot) in gathered.iter_mut().enumerate() {
                    *slot = data[start + j + r * sub] * w[(j * r * twiddle_step) % n];
                }
                for q in 0..p {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (r, &x) in gathered.iter().enumerate() {
                        acc += x * w[((q * r) % p) * (n / p)];
                    }
                    data[start + j + q * sub] = acc;
                }
            }
        }
    }
    data
}

/// DFT over `(Z/p)^M`: `X[c] = sum_a x[a] exp(-2 pi i sum_j a_j c_j / p)` with
/// `a_j`, `c_j` the base-p digits (least significant first).
pub fn tensor_dft(input: &[Complex64], p: u32) -> Vec<Complex64> {
    let n = input.len();
    let p = p as usize;
    let axes = log_p(n, p).expect("length is a power of p");
    let w = roots(p);
    let mut data = input.to_vec();
    let mut gathered = vec![Complex64::new(0.0, 0.0); p];
    let mut stride = 1;
    for _ in 0..axes {
        for base in 0..n {
            if (base / stride) % p != 0 {
                continue;
            }
            for (r, slot) in gathered.iter_mut().enumerate() {
                *slot = data[base + r * stride];
            }
            for q in 0..p {
                let mut acc = Complex64::new(0.0, 0.0);
                for (r, &x) in gathered.iter().enumerate() {
                    acc += x * w[(q * r) % p];
                }
                data[base + q * stride] = acc;
            }
        }
        stride *= p;
    }
    data
}
