//! Finite models of `L^2(G)`.
//!
//! `ModelSpace(m, k)` holds the functions supported on `A^m H` and constant on
//! cosets of `A^{-k} H`. A function is stored by its values on the
//! `p^(m+k)` cosets, indexed by the canonical section of `A^m H / A^{-k} H`:
//! index `a` is the coset whose representative has the base-p digits of `a`
//! at exponents `-m .. k-1`. Each coset has Haar measure `p^-k`.
//!
//! Under the self-dual pairing, the Fourier image lives on the dual space
//! `ModelSpace(k, m)`: support `A^k H`, constant on `A^{-m} H` cosets.

use std::ops::Add;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{cyclic_dft, digit_reverse, tensor_dft};
use crate::geometry::{ball_of, base_p_digits, checked_p_pow, same_ball, section, Section};
use crate::localfield::{GroupElement, GroupParams, Mode};

pub const MAX_DIM: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModelSpace {
    params: GroupParams,
    m: u32,
    k: u32,
    dim: usize,
}

impl ModelSpace {
    pub fn new(params: GroupParams, m: u32, k: u32) -> Result<Self> {
        let dim = checked_p_pow(params.p(), (m + k) as u64)
            .filter(|&d| d <= MAX_DIM)
            .ok_or_else(|| Error::arg(format!("model dimension {}^{} exceeds {MAX_DIM}", params.p(), m + k)))?;
        Ok(ModelSpace { params, m, k, dim: dim as usize })
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dual(&self) -> ModelSpace {
        ModelSpace { params: self.params, m: self.k, k: self.m, dim: self.dim }
    }

    /// Haar measure `p^-k` of one coset of `A^{-k} H`.
    pub fn cell_measure(&self) -> f64 {
        (self.params.p() as f64).powi(-(self.k as i32))
    }

    pub fn index_section(&self) -> Section {
        section(self.params, self.m as i64, -(self.k as i64)).expect("dimension already bounded")
    }

    /// Representative of coset `a`.
    pub fn element(&self, a: usize) -> GroupElement {
        let digits = base_p_digits(a as u64, self.params.p(), (self.m + self.k) as usize);
        GroupElement::from_digits(self.params, -(self.m as i64), &digits)
    }

    /// Coset index of `x`; fails when `x` lies outside `A^m H`.
    pub fn index_of(&self, x: &GroupElement) -> Result<usize> {
        if x.params() != self.params {
            return Err(Error::ParamMismatch(self.params, x.params()));
        }
        if !x.valuation().at_least(-(self.m as i64)) {
            return Err(Error::Resolution(format!("{x} lies outside A^{} H; embed into a larger model first", self.m)));
        }
        let p = self.params.p() as usize;
        let mut a = 0;
        for e in (-(self.m as i64)..self.k as i64).rev() {
            a = a * p + x.digit(e) as usize;
        }
        Ok(a)
    }

    fn combine(&self, a: usize, b: usize, subtract: bool) -> usize {
        match self.params.mode() {
            Mode::Carry => {
                if subtract {
                    (a + self.dim - b) % self.dim
                } else {
                    (a + b) % self.dim
                }
            }
            Mode::Modular => {
                let p = self.params.p() as usize;
                let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
                while place < self.dim {
                    let d = if subtract { (a % p + p - b % p) % p } else { (a % p + b % p) % p };
                    out += d * place;
                    a /= p;
                    b /= p;
                    place *= p;
                }
                out
            }
        }
    }

    /// Index of `x_a + x_b` mod `A^{-k} H`.
    pub fn add_index(&self, a: usize, b: usize) -> usize {
        self.combine(a, b, false)
    }

    /// Index of `x_a - x_b` mod `A^{-k} H`.
    pub fn sub_index(&self, a: usize, b: usize) -> usize {
        self.combine(a, b, true)
    }
}

/// Sum in a fixed pairwise tree over the slice order.
pub(crate) fn pairwise_sum<T: Copy + Zero + Add<Output = T>>(xs: &[T]) -> T {
    if xs.len() <= 8 {
        return xs.iter().fold(T::zero(), |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelFunction {
    space: ModelSpace,
    coeffs: Vec<Complex64>,
}

/// JSON record for a model function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFunctionRecord {
    pub p: u32,
    pub mode: Mode,
    pub m: u32,
    pub k: u32,
    pub coeffs: Vec<[f64; 2]>,
}

impl ModelFunction {
    pub fn new(space: ModelSpace, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != space.dim {
            return Err(Error::arg(format!("expected {} coefficients, got {}", space.dim, coeffs.len())));
        }
        Ok(ModelFunction { space, coeffs })
    }

    pub fn zeros(space: ModelSpace) -> Self {
        ModelFunction { space, coeffs: vec![Complex64::zero(); space.dim] }
    }

    /// Characteristic function of `c + A^j H`, for `-k <= j <= m`.
    pub fn indicator(space: ModelSpace, j: i64, c: &GroupElement) -> Result<Self> {
        if j < -(space.k as i64) || j > space.m as i64 {
            return Err(Error::arg(format!("indicator scale {j} outside [-{}, {}]", space.k, space.m)));
        }
        space.index_of(c)?;
        let coeffs = (0..space.dim)
            .map(|a| {
                let inside = same_ball(&space.element(a), c, j).expect("same params");
                Complex64::new(inside as u8 as f64, 0.0)
            })
            .collect();
        Ok(ModelFunction { space, coeffs })
    }

    pub fn space(&self) -> ModelSpace {
        self.space
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn scale(&self, c: Complex64) -> Self {
        ModelFunction { space: self.space, coeffs: self.coeffs.iter().map(|&z| z * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(ModelFunction { space: self.space, coeffs })
    }

    /// `<f, g> = p^-k sum_a f_a conj(g_a)`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let terms: Vec<Complex64> = self.coeffs.iter().zip(&other.coeffs).map(|(f, g)| f * g.conj()).collect();
        Ok(pairwise_sum(&terms) * self.space.cell_measure())
    }

    pub fn norm_sqr(&self) -> f64 {
        let terms: Vec<f64> = self.coeffs.iter().map(|z| z.norm_sqr()).collect();
        pairwise_sum(&terms) * self.space.cell_measure()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|z| z.is_zero())
    }

    /// `T_x f(y) = f(y - x)`; needs `x` in `A^m H`.
    pub fn translate(&self, x: &GroupElement) -> Result<Self> {
        let shift = self.space.index_of(x)?;
        let coeffs = (0..self.space.dim).map(|c| self.coeffs[self.space.sub_index(c, shift)]).collect();
        Ok(ModelFunction { space: self.space, coeffs })
    }

    /// `M_xi f(y) = <y, xi> f(y)`; needs `xi` in `A^k H` so the character is
    /// constant on the cosets of `A^{-k} H`.
    pub fn modulate(&self, xi: &GroupElement) -> Result<Self> {
        if xi.params() != self.space.params {
            return Err(Error::ParamMismatch(self.space.params, xi.params()));
        }
        if !xi.valuation().at_least(-(self.space.k as i64)) {
            return Err(Error::Resolution(format!(
                "{xi} lies outside A^{} H; modulation is not constant on model cells, embed first",
                self.space.k
            )));
        }
        let coeffs = (0..self.space.dim)
            .map(|a| {
                let phase = self.space.element(a).pairing_phase(xi).expect("same params");
                self.coeffs[a] * phase.complex_value()
            })
            .collect();
        Ok(ModelFunction { space: self.space, coeffs })
    }

    /// `Ff(xi_b) = p^-k sum_a f_a conj(<x_a, xi_b>)` on the dual space.
    pub fn fourier(&self) -> ModelFunction {
        ModelFunction { space: self.space.dual(), coeffs: fourier_coeffs(self.space, &self.coeffs) }
    }

    /// Isometric embedding into `ModelSpace(m_new, k_new)`: values are
    /// replicated over refined cosets and zero outside `A^m H`.
    pub fn embed(&self, m_new: u32, k_new: u32) -> Result<Self> {
        if m_new < self.space.m || k_new < self.space.k {
            return Err(Error::arg(format!(
                "cannot embed ({}, {}) into smaller ({m_new}, {k_new})",
                self.space.m, self.space.k
            )));
        }
        let target = ModelSpace::new(self.space.params, m_new, k_new)?;
        let p = self.space.params.p() as usize;
        let low = p.pow(m_new - self.space.m);
        let coeffs = (0..target.dim)
            .map(|a| if a % low == 0 { self.coeffs[(a / low) % self.space.dim] } else { Complex64::zero() })
            .collect();
        Ok(ModelFunction { space: target, coeffs })
    }

    pub fn to_record(&self) -> ModelFunctionRecord {
        ModelFunctionRecord {
            p: self.space.params.p(),
            mode: self.space.params.mode(),
            m: self.space.m,
            k: self.space.k,
            coeffs: self.coeffs.iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn from_record(rec: &ModelFunctionRecord) -> Result<Self> {
        let space = ModelSpace::new(GroupParams::new(rec.p, rec.mode)?, rec.m, rec.k)?;
        Self::new(space, rec.coeffs.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
    }
}

fn fourier_coeffs(space: ModelSpace, coeffs: &[Complex64]) -> Vec<Complex64> {
    let p = space.params.p();
    let scale = space.cell_measure();
    match space.params.mode() {
        Mode::Carry => cyclic_dft(coeffs, p).into_iter().map(|z| z * scale).collect(),
        Mode::Modular => {
            // <x_a, xi_b> pairs digit j of a with digit (m+k-1-j) of b
            let digits = space.m + space.k;
            let spectrum = tensor_dft(coeffs, p);
            (0..space.dim).map(|b| spectrum[digit_reverse(b, p as usize, digits)] * scale).collect()
        }
    }
}

/// `V_g f(x_a, xi_b)` on the full `p^(m+k) x p^(m+k)` grid, row-major in `(a, b)`.
///
/// `V_g f` is constant on cosets of `A^{-k} H x A^{-m} H` and vanishes outside
/// `A^m H x A^k H`, so the grid holds all of it.
#[derive(Debug, Clone, PartialEq)]
pub struct StftGrid {
    space: ModelSpace,
    values: Vec<Complex64>,
}

/// JSON record of an STFT grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StftGridRecord {
    pub p: u32,
    pub mode: Mode,
    pub m: u32,
    pub k: u32,
    pub rows: usize,
    pub cols: usize,
    pub values: Vec<[f64; 2]>,
}

/// `V_g f` via one DFT of `f * conj(T_{x_a} g)` per row.
pub fn stft(f: &ModelFunction, g: &ModelFunction) -> Result<StftGrid> {
    if f.space != g.space {
        return Err(Error::SpaceMismatch);
    }
    let space = f.space;
    let n = space.dim;
    let mut values = Vec::with_capacity(n * n);
    let mut prod = vec![Complex64::zero(); n];
    for a in 0..n {
        for (c, slot) in prod.iter_mut().enumerate() {
            *slot = f.coeffs[c] * g.coeffs[space.sub_index(c, a)].conj();
        }
        values.extend(fourier_coeffs(space, &prod));
    }
    Ok(StftGrid { space, values })
}

fn check_exponent(p_exp: f64) -> Result<()> {
    if p_exp.is_nan() || p_exp < 1.0 {
        return Err(Error::arg(format!("norm exponent must be >= 1, got {p_exp}")));
    }
    Ok(())
}

fn lp_sum(values: &[f64], p_exp: f64) -> f64 {
    if p_exp.is_infinite() {
        return values.iter().copied().fold(0.0, f64::max);
    }
    let powered: Vec<f64> = values.iter().map(|&v| v.powf(p_exp)).collect();
    pairwise_sum(&powered).powf(1.0 / p_exp)
}

impl StftGrid {
    pub fn space(&self) -> ModelSpace {
        self.space
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, a: usize, b: usize) -> Complex64 {
        self.values[a * self.space.dim + b]
    }

    /// `V_g f(x, xi)` at an arbitrary point; zero outside the support.
    pub fn at(&self, x: &GroupElement, xi: &GroupElement) -> Result<Complex64> {
        let outside = |e: &GroupElement, ext: u32| !e.valuation().at_least(-(ext as i64));
        if outside(x, self.space.m) || outside(xi, self.space.k) {
            return Ok(Complex64::zero());
        }
        Ok(self.value(self.space.index_of(x)?, self.space.dual().index_of(xi)?))
    }

    /// Measure of one grid cell in `G x G^`: `p^-(m+k)`.
    pub fn cell_measure(&self) -> f64 {
        (self.space.params.p() as f64).powi(-((self.space.m + self.space.k) as i32))
    }

    pub fn l2_norm(&self) -> f64 {
        modulation_norm(self, 2.0).expect("2 is a valid exponent")
    }

    pub fn to_record(&self) -> StftGridRecord {
        StftGridRecord {
            p: self.space.params.p(),
            mode: self.space.params.mode(),
            m: self.space.m,
            k: self.space.k,
            rows: self.space.dim,
            cols: self.space.dim,
            values: self.values.iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    /// Unit-cell index `(c, d)` of grid entry `(a, b)`; cells are
    /// `(c + H) x (d + H)` with `c` in `A^m H / H`, `d` in `A^k H / H`.
    fn unit_cell(&self, a: usize, b: usize) -> (usize, usize) {
        let p = self.space.params.p() as usize;
        (a % p.pow(self.space.m), b % p.pow(self.space.k))
    }
}

/// `||V||_{L^p(G x G^)}`; `p_exp = f64::INFINITY` gives the sup norm.
pub fn modulation_norm(grid: &StftGrid, p_exp: f64) -> Result<f64> {
    check_exponent(p_exp)?;
    let mags: Vec<f64> = grid.values.iter().map(|z| z.norm()).collect();
    if p_exp.is_infinite() {
        return Ok(lp_sum(&mags, p_exp));
    }
    let powered: Vec<f64> = mags.iter().map(|&v| v.powf(p_exp) * grid.cell_measure()).collect();
    Ok(pairwise_sum(&powered).powf(1.0 / p_exp))
}

/// `W(C, l^p)` norm: the l^p sum over unit cells of the cell-wise sup.
pub fn wiener_norm(grid: &StftGrid, p_exp: f64) -> Result<f64> {
    check_exponent(p_exp)?;
    let p = grid.space.params.p() as usize;
    let cols = p.pow(grid.space.k);
    let mut sup = vec![0.0f64; p.pow(grid.space.m) * cols];
    for a in 0..grid.space.dim {
        for b in 0..grid.space.dim {
            let (c, d) = grid.unit_cell(a, b);
            let cell = &mut sup[c * cols + d];
            *cell = cell.max(grid.value(a, b).norm());
        }
    }
    Ok(lp_sum(&sup, p_exp))
}

/// `W(C, L^p)` norm: integrates the local sup `||chi_{cell(z)} V||_inf^p`
/// over `G x G^`. Cells are located through their ball keys and their
/// measure is accumulated exactly from the grid cells they contain.
pub fn wiener_norm_amalgam(grid: &StftGrid, p_exp: f64) -> Result<f64> {
    check_exponent(p_exp)?;
    let space = grid.space;
    let dual = space.dual();
    let x_cells = section(space.params, space.m as i64, 0)?;
    let xi_cells = section(space.params, space.k as i64, 0)?;
    let cols = xi_cells.len();
    let mut sup = vec![0.0f64; x_cells.len() * cols];
    let mut fine = vec![0u64; x_cells.len() * cols];
    for a in 0..space.dim {
        let cx = x_cells.index_of(ball_of(&space.element(a), 0).key()).expect("inside A^m H");
        for b in 0..space.dim {
            let cd = xi_cells.index_of(ball_of(&dual.element(b), 0).key()).expect("inside A^k H");
            let i = cx * cols + cd;
            sup[i] = sup[i].max(grid.value(a, b).norm());
            fine[i] += 1;
        }
    }
    let fine_cells: BigInt = Pow::pow(BigInt::from(space.params.p()), space.m + space.k);
    let measure: Vec<f64> =
        fine.iter().map(|&c| BigRational::new(BigInt::from(c), fine_cells.clone()).to_f64().expect("finite")).collect();
    if p_exp.is_infinite() {
        let occupied: Vec<f64> = sup.iter().zip(&measure).map(|(&s, &w)| if w > 0.0 { s } else { 0.0 }).collect();
        return Ok(lp_sum(&occupied, p_exp));
    }
    let integrand: Vec<f64> = sup.iter().zip(&measure).map(|(&s, &w)| s.powf(p_exp) * w).collect();
    Ok(pairwise_sum(&integrand).powf(1.0 / p_exp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_function, Rng64};

    fn space(p: u32, mode: Mode, m: u32, k: u32) -> ModelSpace {
        ModelSpace::new(GroupParams::new(p, mode).unwrap(), m, k).unwrap()
    }

    fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    fn re(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    // Fourier transform straight from the exact pairing, O(n^2).
    fn naive_fourier(f: &ModelFunction) -> Vec<Complex64> {
        let s = f.space();
        let dual = s.dual();
        (0..s.dim())
            .map(|b| {
                let xi = dual.element(b);
                let sum: Complex64 = (0..s.dim())
                    .map(|a| f.coeffs()[a] * s.element(a).pairing_phase(&xi).unwrap().complex_value().conj())
                    .sum();
                sum * s.cell_measure()
            })
            .collect()
    }

    fn all_spaces() -> Vec<ModelSpace> {
        let mut out = Vec::new();
        for mode in [Mode::Carry, Mode::Modular] {
            for (p, m, k) in [(2, 1, 1), (2, 2, 2), (3, 1, 1), (3, 2, 2), (2, 0, 3), (5, 1, 1), (2, 3, 1)] {
                out.push(space(p, mode, m, k));
            }
        }
        out
    }

    #[test]
    fn index_round_trip() {
        for s in all_spaces() {
            for a in 0..s.dim() {
                assert_eq!(s.index_of(&s.element(a)).unwrap(), a);
                for b in [0, 1 % s.dim(), s.dim() - 1] {
                    let sum = s.element(a).add(&s.element(b)).unwrap();
                    assert_eq!(s.index_of(&sum).unwrap(), s.add_index(a, b));
                    let diff = s.element(a).sub(&s.element(b)).unwrap();
                    assert_eq!(s.index_of(&diff).unwrap(), s.sub_index(a, b));
                }
            }
            assert_eq!(s.index_section().elements(), (0..s.dim()).map(|a| s.element(a)).collect::<Vec<_>>());
        }
    }

    #[test]
    fn indicator_examples() {
        let s = space(2, Mode::Carry, 1, 1);
        let g = s.params();
        let h = ModelFunction::indicator(s, 0, &g.zero()).unwrap();
        assert_eq!(h.coeffs(), re(&[1.0, 0.0, 1.0, 0.0]).as_slice());
        let full = ModelFunction::indicator(s, 1, &g.zero()).unwrap();
        assert!(full.coeffs().iter().all(|z| *z == Complex64::new(1.0, 0.0)));
        let point = ModelFunction::indicator(s, -1, &g.zero()).unwrap();
        assert_eq!(point.coeffs(), re(&[1.0, 0.0, 0.0, 0.0]).as_slice());
        assert!(ModelFunction::indicator(s, 2, &g.zero()).is_err());
        assert!(matches!(ModelFunction::indicator(s, 0, &g.parse("1/2^2").unwrap()), Err(Error::Resolution(_))));
    }

    #[test]
    fn inner_product_normalization() {
        for s in all_spaces() {
            let g = s.params();
            let h = ModelFunction::indicator(s, 0, &g.zero()).unwrap();
            assert!((h.inner(&h).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
            if s.m() > 0 {
                let c = g.one().apply_automorphism(1);
                let shifted = ModelFunction::indicator(s, 0, &c).unwrap();
                assert_eq!(h.inner(&shifted).unwrap(), Complex64::zero());
            }
        }
        let a = ModelFunction::zeros(space(2, Mode::Carry, 1, 1));
        let b = ModelFunction::zeros(space(2, Mode::Carry, 2, 0));
        assert_eq!(a.inner(&b), Err(Error::SpaceMismatch));
    }

    #[test]
    fn translation_examples() {
        let s = space(2, Mode::Carry, 1, 1);
        let g = s.params();
        let h = ModelFunction::indicator(s, 0, &g.zero()).unwrap();
        assert_eq!(h.translate(&g.zero()).unwrap(), h);
        let half = g.parse("1/2^1").unwrap();
        assert_eq!(h.translate(&half).unwrap().coeffs(), re(&[0.0, 1.0, 0.0, 1.0]).as_slice());
        assert!(matches!(h.translate(&g.parse("1/2^2").unwrap()), Err(Error::Resolution(_))));
        assert!(matches!(h.modulate(&g.parse("1/2^2").unwrap()), Err(Error::Resolution(_))));
    }

    #[test]
    fn unitary_operators_and_commutation() {
        let mut rng = Rng64::new(11);
        for s in all_spaces() {
            let f = random_function(s, &mut rng);
            let n = f.norm();
            for a in [0, 1 % s.dim(), s.dim() / 2 + 1 % s.dim(), s.dim() - 1] {
                let x = s.element(a);
                let xi = s.dual().element((a * 7 + 3) % s.dim());
                let tf = f.translate(&x).unwrap();
                let mf = f.modulate(&xi).unwrap();
                assert!(((tf.norm() - n) / n).abs() < 1e-12);
                assert!(((mf.norm() - n) / n).abs() < 1e-12);
                assert!(close(tf.translate(&x.negate()).unwrap().coeffs(), f.coeffs(), 0.0));
                // M_xi T_x f = <x, xi> T_x M_xi f
                let lhs = tf.modulate(&xi).unwrap();
                let phase = x.pairing_phase(&xi).unwrap().complex_value();
                let rhs = mf.translate(&x).unwrap().scale(phase);
                assert!(close(lhs.coeffs(), rhs.coeffs(), 1e-14));
            }
            assert_eq!(f.modulate(&s.params().zero()).unwrap(), f);
            let h = ModelFunction::indicator(s, 0, &s.params().zero()).unwrap();
            assert!(close(h.modulate(&s.params().one()).unwrap().coeffs(), h.coeffs(), 0.0));
        }
    }

    #[test]
    fn fourier_matches_pairing_oracle() {
        let mut rng = Rng64::new(5);
        for s in all_spaces() {
            let f = random_function(s, &mut rng);
            let fast = f.fourier();
            assert_eq!(fast.space(), s.dual());
            assert!(close(fast.coeffs(), &naive_fourier(&f), 1e-12));
            let rel = (fast.norm() - f.norm()).abs() / f.norm();
            assert!(rel < 1e-12, "Plancherel {rel}");
        }
    }

    #[test]
    fn fourier_of_unit_ball_and_point() {
        for s in all_spaces() {
            let g = s.params();
            let h = ModelFunction::indicator(s, 0, &g.zero()).unwrap();
            let hh = ModelFunction::indicator(s.dual(), 0, &g.zero()).unwrap();
            assert!(close(h.fourier().coeffs(), hh.coeffs(), 1e-12));
            let point = ModelFunction::indicator(s, -(s.k() as i64), &g.zero()).unwrap();
            let flat = vec![Complex64::new(s.cell_measure(), 0.0); s.dim()];
            assert!(close(point.fourier().coeffs(), &flat, 1e-15));
        }
    }

    #[test]
    fn stft_matches_definition() {
        let mut rng = Rng64::new(3);
        for s in all_spaces().into_iter().filter(|s| s.dim() <= 27) {
            let f = random_function(s, &mut rng);
            let g = random_function(s, &mut rng);
            let grid = stft(&f, &g).unwrap();
            for a in 0..s.dim() {
                for b in 0..s.dim() {
                    let atom = g.translate(&s.element(a)).unwrap().modulate(&s.dual().element(b)).unwrap();
                    let direct = f.inner(&atom).unwrap();
                    assert!((grid.value(a, b) - direct).norm() < 1e-12);
                }
            }
            assert!((grid.value(0, 0) - f.inner(&g).unwrap()).norm() < 1e-13);
        }
    }

    #[test]
    fn stft_of_unit_ball() {
        let s = space(2, Mode::Carry, 1, 1);
        let h = ModelFunction::indicator(s, 0, &s.params().zero()).unwrap();
        let grid = stft(&h, &h).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let in_block = s.element(a).valuation().at_least(0) && s.dual().element(b).valuation().at_least(0);
                let expect = if in_block { 1.0 } else { 0.0 };
                assert!((grid.value(a, b) - Complex64::new(expect, 0.0)).norm() < 1e-15);
            }
        }
        assert!((modulation_norm(&grid, 2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((modulation_norm(&grid, f64::INFINITY).unwrap() - 1.0).abs() < 1e-15);
        assert!((wiener_norm(&grid, 2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(modulation_norm(&grid, 0.5).is_err());
        assert!(wiener_norm(&grid, 0.9).is_err());
    }

    #[test]
    fn orthogonality_relation_and_covariance() {
        let mut rng = Rng64::new(17);
        for s in all_spaces() {
            let f = random_function(s, &mut rng);
            let g = random_function(s, &mut rng);
            let grid = stft(&f, &g).unwrap();
            let rel = (grid.l2_norm() - f.norm() * g.norm()).abs() / (f.norm() * g.norm());
            assert!(rel < 1e-10);
            // |V_g(T_u M_eta f)(x, xi)| = |V_g f(x - u, xi - eta)|
            let (u, eta) = (s.dim() / 3, s.dim() / 2);
            let moved = f.modulate(&s.dual().element(eta)).unwrap().translate(&s.element(u)).unwrap();
            let grid2 = stft(&moved, &g).unwrap();
            let dual = s.dual();
            for a in 0..s.dim() {
                for b in 0..s.dim() {
                    let lhs = grid2.value(a, b).norm();
                    let rhs = grid.value(s.sub_index(a, u), dual.sub_index(b, eta)).norm();
                    assert!((lhs - rhs).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn stft_support_and_constancy() {
        // refine the model and evaluate off-grid: shifted points inside a cell
        // give the grid value, points outside A^m H give zero
        let mut rng = Rng64::new(23);
        for s in [space(2, Mode::Carry, 1, 1), space(3, Mode::Modular, 1, 1), space(2, Mode::Modular, 2, 1)] {
            let f = random_function(s, &mut rng);
            let g = random_function(s, &mut rng);
            let grid = stft(&f, &g).unwrap();
            let (fe, ge) = (f.embed(s.m() + 1, s.k() + 1).unwrap(), g.embed(s.m() + 1, s.k() + 1).unwrap());
            let fine = stft(&fe, &ge).unwrap();
            let params = s.params();
            let h_small = params.one().apply_automorphism(-(s.k() as i64)); // in A^{-k} H
            let eta_small = params.one().apply_automorphism(-(s.m() as i64)); // in A^{-m} H
            for a in 0..s.dim() {
                for b in 0..s.dim() {
                    let x = s.element(a).add(&h_small).unwrap();
                    let xi = s.dual().element(b).add(&eta_small).unwrap();
                    assert!((fine.at(&x, &xi).unwrap() - grid.value(a, b)).norm() < 1e-12);
                }
            }
            let far = params.one().apply_automorphism(s.m() as i64 + 1);
            assert!(fine.at(&far, &params.zero()).unwrap().norm() < 1e-12);
            let far_xi = params.one().apply_automorphism(s.k() as i64 + 1);
            assert!(fine.at(&params.zero(), &far_xi).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn norms_are_homogeneous() {
        let mut rng = Rng64::new(2);
        let s = space(3, Mode::Carry, 1, 1);
        let f = random_function(s, &mut rng);
        let g = random_function(s, &mut rng);
        let c = Complex64::new(-1.5, 2.0);
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            let a = modulation_norm(&stft(&f.scale(c), &g).unwrap(), p).unwrap();
            let b = modulation_norm(&stft(&f, &g).unwrap(), p).unwrap();
            assert!((a - c.norm() * b).abs() < 1e-12 * a.max(1.0));
        }
        let zero = ModelFunction::zeros(s);
        let grid = stft(&zero, &g).unwrap();
        assert_eq!(wiener_norm(&grid, 2.0).unwrap(), 0.0);
        assert_eq!(wiener_norm_amalgam(&grid, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn wiener_routes_agree_exactly() {
        let mut rng = Rng64::new(8);
        for s in all_spaces().into_iter().filter(|s| s.dim() <= 81) {
            let grid = stft(&random_function(s, &mut rng), &random_function(s, &mut rng)).unwrap();
            for p in [1.0, 2.0, 3.0, f64::INFINITY] {
                assert_eq!(wiener_norm(&grid, p).unwrap(), wiener_norm_amalgam(&grid, p).unwrap());
            }
            // every cell holds p^(m+k) grid points of measure p^-(m+k)
            assert!(wiener_norm(&grid, 2.0).unwrap() + 1e-12 >= modulation_norm(&grid, 2.0).unwrap());
        }
    }

    #[test]
    fn embedding_is_isometric_and_functorial() {
        let mut rng = Rng64::new(4);
        for s in all_spaces().into_iter().filter(|s| s.dim() <= 27) {
            let f = random_function(s, &mut rng);
            let g = random_function(s, &mut rng);
            let (fe, ge) = (f.embed(s.m() + 1, s.k() + 2).unwrap(), g.embed(s.m() + 1, s.k() + 2).unwrap());
            assert!((fe.inner(&ge).unwrap() - f.inner(&g).unwrap()).norm() < 1e-13);
            let twice = f.embed(s.m() + 1, s.k()).unwrap().embed(s.m() + 1, s.k() + 2).unwrap();
            assert_eq!(twice, fe);
            // value check against the element-level definition
            let t = fe.space();
            for a in 0..t.dim() {
                let x = t.element(a);
                let expect = match s.index_of(&x) {
                    Ok(i) => f.coeffs()[i],
                    Err(_) => Complex64::zero(),
                };
                assert_eq!(fe.coeffs()[a], expect);
            }
            let h = ModelFunction::indicator(s, 0, &s.params().zero()).unwrap();
            let he = ModelFunction::indicator(t, 0, &s.params().zero()).unwrap();
            assert_eq!(h.embed(t.m(), t.k()).unwrap(), he);
            assert!(f.embed(s.m().saturating_sub(1), s.k()).is_err() || s.m() == 0);
        }
    }

    #[test]
    fn record_round_trip() {
        let mut rng = Rng64::new(1);
        let f = random_function(space(3, Mode::Modular, 1, 1), &mut rng);
        let json = serde_json::to_string(&f.to_record()).unwrap();
        let back: ModelFunctionRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(ModelFunction::from_record(&back).unwrap(), f);
    }
}
