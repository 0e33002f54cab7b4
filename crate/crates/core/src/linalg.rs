//! Dense complex Hermitian eigen-solver (cyclic Jacobi) and solves.

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Row-major entries; symmetrized after checking the defect
    /// `max |a_ij - conj(a_ji)| <= 1e-12 max(1, max |a_ij|)`.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::arg(format!("expected {} entries, got {}", dim * dim, entries.len())));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let scale = entries.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let mut defect: f64 = 0.0;
        for i in 0..dim {
            for j in i..dim {
                defect = defect.max((entries[i * dim + j] - entries[j * dim + i].conj()).norm());
            }
        }
        if defect > 1e-12 * scale {
            return Err(Error::NotHermitian(defect));
        }
        let mut sym = entries.clone();
        for i in 0..dim {
            for j in 0..dim {
                sym[i * dim + j] = (entries[i * dim + j] + entries[j * dim + i].conj()) * 0.5;
            }
        }
        Ok(HermitianMatrix { dim, entries: sym })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Complex64::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        HermitianMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|i| self.entries[i * self.dim..(i + 1) * self.dim].iter().zip(v).map(|(a, x)| a * x).sum())
            .collect()
    }

    /// Largest entrywise deviation from `c I`.
    pub fn deviation_from_scalar(&self, c: f64) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let target = if i == j { c } else { 0.0 };
                dev = dev.max((self.get(i, j) - target).norm());
            }
        }
        dev
    }

    /// Row-major `[re, im]` pairs.
    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.entries.iter().map(|z| [z.re, z.im]).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// `vectors[i]` belongs to `values[i]`.
    pub vectors: Vec<Vec<Complex64>>,
    /// `max_i ||M v_i - l_i v_i|| / ||M||_F`.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spectrum {
    pub min: f64,
    pub max: f64,
}

/// All eigenpairs by cyclic complex Jacobi rotations.
pub fn hermitian_eigs(m: &HermitianMatrix) -> Result<Eigen> {
    let n = m.dim;
    if n == 0 {
        return Err(Error::arg("empty matrix"));
    }
    let mut a = m.entries.clone();
    let mut v = HermitianMatrix::identity(n).entries;
    let norm = m.frobenius();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * norm || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let values: Vec<f64> = order.iter().map(|&i| a[i * n + i].re).collect();
    let vectors: Vec<Vec<Complex64>> = order.iter().map(|&c| (0..n).map(|r| v[r * n + c]).collect()).collect();
    let scale = if norm > 0.0 { norm } else { 1.0 };
    let residual = values
        .iter()
        .zip(&vectors)
        .map(|(&l, x)| {
            let mx = m.mul_vec(x);
            mx.iter().zip(x).map(|(y, xi)| (y - xi * l).norm_sqr()).sum::<f64>().sqrt() / scale
        })
        .fold(0.0, f64::max);
    Ok(Eigen { values, vectors, residual })
}

/// Zeroes `a[p][q]` with `a <- J^H a J`, `v <- v J`, where
/// `J = diag(1, e^{-i phi}) R` makes the pivot real and `R` is a real rotation.
fn rotate(a: &mut [Complex64], v: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let (app, aqq) = (a[p * n + p].re, a[q * n + q].re);
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_infinite() { 0.0 } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let e = phase.conj();
    let (jpp, jpq, jqp, jqq) = (Complex64::new(c, 0.0), Complex64::new(s, 0.0), e * -s, e * c);
    for i in 0..n {
        let (x, y) = (a[i * n + p], a[i * n + q]);
        a[i * n + p] = x * jpp + y * jqp;
        a[i * n + q] = x * jpq + y * jqq;
        let (x, y) = (v[i * n + p], v[i * n + q]);
        v[i * n + p] = x * jpp + y * jqp;
        v[i * n + q] = x * jpq + y * jqq;
    }
    for j in 0..n {
        let (x, y) = (a[p * n + j], a[q * n + j]);
        a[p * n + j] = jpp.conj() * x + jqp.conj() * y;
        a[q * n + j] = jpq.conj() * x + jqq.conj() * y;
    }
    a[p * n + q] = Complex64::zero();
    a[q * n + p] = Complex64::zero();
    a[p * n + p].im = 0.0;
    a[q * n + q].im = 0.0;
}

impl Eigen {
    pub fn spectrum(&self) -> Spectrum {
        Spectrum { min: self.values[0], max: *self.values.last().expect("nonempty") }
    }

    /// `#{l_i > tol * max(1, l_max)}`.
    pub fn rank(&self, tol: f64) -> usize {
        let cut = tol * self.spectrum().max.max(1.0);
        self.values.iter().filter(|&&l| l > cut).count()
    }

    /// `x = sum_i v_i <b, v_i> / l_i`; fails when `l_min <= tol * max(1, l_max)`.
    pub fn solve(&self, rhs: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
        let cut = tol * self.spectrum().max.max(1.0);
        if self.values[0] <= cut {
            return Err(Error::RankDeficient { eigenvalue: self.values[0], tol: cut });
        }
        if rhs.len() != self.values.len() {
            return Err(Error::arg(format!("rhs length {} for dimension {}", rhs.len(), self.values.len())));
        }
        let mut x = vec![Complex64::zero(); rhs.len()];
        for (&l, vec) in self.values.iter().zip(&self.vectors) {
            let coef: Complex64 = vec.iter().zip(rhs).map(|(vi, bi)| vi.conj() * bi).sum::<Complex64>() / l;
            for (xi, vi) in x.iter_mut().zip(vec) {
                *xi += vi * coef;
            }
        }
        Ok(x)
    }
}

pub fn solve_hermitian(m: &HermitianMatrix, rhs: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
    hermitian_eigs(m)?.solve(rhs, tol)
}

pub fn rank(m: &HermitianMatrix, tol: f64) -> Result<usize> {
    Ok(hermitian_eigs(m)?.rank(tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::Rng64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn random_hermitian(n: usize, rng: &mut Rng64) -> HermitianMatrix {
        let mut e = vec![Complex64::zero(); n * n];
        for i in 0..n {
            e[i * n + i] = c(rng.normal());
            for j in i + 1..n {
                let z = Complex64::new(rng.normal(), rng.normal());
                e[i * n + j] = z;
                e[j * n + i] = z.conj();
            }
        }
        HermitianMatrix::new(n, e).unwrap()
    }

    fn outer(v: &[Complex64]) -> HermitianMatrix {
        let n = v.len();
        let e = (0..n * n).map(|k| v[k / n] * v[k % n].conj()).collect();
        HermitianMatrix::new(n, e).unwrap()
    }

    fn unit(n: usize, rng: &mut Rng64) -> Vec<Complex64> {
        let v: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.normal(), rng.normal())).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.into_iter().map(|z| z / norm).collect()
    }

    // Determinant via Gaussian elimination with partial pivoting.
    fn lu_det(m: &HermitianMatrix) -> Complex64 {
        let n = m.dim();
        let mut a = m.entries().to_vec();
        let mut det = c(1.0);
        for col in 0..n {
            let piv = (col..n).max_by(|&i, &j| a[i * n + col].norm().total_cmp(&a[j * n + col].norm())).unwrap();
            if a[piv * n + col].norm() == 0.0 {
                return Complex64::zero();
            }
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                }
                det = -det;
            }
            let d = a[col * n + col];
            det *= d;
            for i in col + 1..n {
                let f = a[i * n + col] / d;
                for j in col..n {
                    let t = a[col * n + j];
                    a[i * n + j] -= f * t;
                }
            }
        }
        det
    }

    #[test]
    fn examples() {
        let e = hermitian_eigs(&HermitianMatrix::identity(4)).unwrap();
        assert_eq!(e.values, vec![1.0; 4]);
        let d = HermitianMatrix::new(2, vec![c(2.0), c(0.0), c(0.0), c(1.0)]).unwrap();
        assert_eq!(hermitian_eigs(&d).unwrap().values, vec![1.0, 2.0]);
        let mut rng = Rng64::new(9);
        let v = unit(8, &mut rng);
        let e = hermitian_eigs(&outer(&v)).unwrap();
        for &l in &e.values[..7] {
            assert!(l.abs() < 1e-12);
        }
        assert!((e.values[7] - 1.0).abs() < 1e-12);
        assert_eq!(e.rank(1e-9), 1);
    }

    #[test]
    fn rejects_bad_input() {
        let nan = HermitianMatrix::new(1, vec![Complex64::new(f64::NAN, 0.0)]);
        assert_eq!(nan, Err(Error::NonFinite));
        let skew = HermitianMatrix::new(2, vec![c(1.0), c(1.0), c(0.0), c(1.0)]);
        assert!(matches!(skew, Err(Error::NotHermitian(_))));
        assert!(HermitianMatrix::new(2, vec![c(1.0)]).is_err());
    }

    #[test]
    fn trace_residual_and_determinant() {
        let mut rng = Rng64::new(1);
        for n in 1..=12 {
            let m = random_hermitian(n, &mut rng);
            let e = hermitian_eigs(&m).unwrap();
            assert!(e.residual <= 1e-10, "residual {}", e.residual);
            assert!((e.values.iter().sum::<f64>() - m.trace()).abs() <= 1e-10 * m.frobenius());
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            if n <= 8 {
                let det = lu_det(&m);
                let prod: f64 = e.values.iter().product();
                assert!((det - c(prod)).norm() <= 1e-9 * det.norm().max(1.0));
            }
        }
    }

    #[test]
    fn solves() {
        let mut rng = Rng64::new(2);
        let b: Vec<Complex64> = (0..5).map(|_| Complex64::new(rng.normal(), rng.normal())).collect();
        let id = HermitianMatrix::identity(5);
        let x = solve_hermitian(&id, &b, 1e-9).unwrap();
        assert!(x.iter().zip(&b).all(|(u, v)| (u - v).norm() < 1e-15));
        let two = HermitianMatrix::new(5, id.entries().iter().map(|z| z * 2.0).collect()).unwrap();
        let x = solve_hermitian(&two, &b, 1e-9).unwrap();
        assert!(x.iter().zip(&b).all(|(u, v)| (u - v / 2.0).norm() < 1e-15));
        for n in [3, 10, 20] {
            let base = random_hermitian(n, &mut rng);
            // shift to positive definite
            let shift = hermitian_eigs(&base).unwrap().values[0].abs() + 1.0;
            let e: Vec<Complex64> =
                (0..n * n).map(|k| base.entries()[k] + if k / n == k % n { c(shift) } else { c(0.0) }).collect();
            let m = HermitianMatrix::new(n, e).unwrap();
            let b: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.normal(), rng.normal())).collect();
            let x = solve_hermitian(&m, &b, 1e-9).unwrap();
            let r = m.mul_vec(&x);
            let err = r.iter().zip(&b).map(|(u, v)| (u - v).norm_sqr()).sum::<f64>().sqrt();
            let bn = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!(err / bn <= 1e-10);
        }
        let v = unit(4, &mut rng);
        match solve_hermitian(&outer(&v), &v, 1e-9) {
            Err(Error::RankDeficient { eigenvalue, .. }) => assert!(eigenvalue.abs() < 1e-12),
            other => panic!("expected rank deficiency, got {other:?}"),
        }
        assert_eq!(rank(&outer(&v), 1e-9).unwrap(), 1);
    }
}
