//! Gabor systems `{M_xi T_x phi}` on a model space: frame operator, bounds,
//! classification, canonical duals.

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::density::{finite_density_check, Ambient, PointSet};
use crate::error::{Error, Result};
use crate::geometry::section;
use crate::linalg::{hermitian_eigs, Eigen, HermitianMatrix};
use crate::model::{stft, wiener_norm, ModelFunction, ModelSpace};

/// Relative eigenvalue tolerance for rank and classification.
pub const RANK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct GaborSystem {
    window: ModelFunction,
    lambda: PointSet,
    keys: Vec<(usize, usize)>,
    vectors: Vec<ModelFunction>,
}

impl GaborSystem {
    /// Materializes `v_lambda = M_xi T_x phi` in the order of `lambda`.
    pub fn build(window: ModelFunction, lambda: PointSet) -> Result<Self> {
        if window.is_zero() {
            return Err(Error::arg("window must be nonzero"));
        }
        let space = window.space();
        if lambda.params() != space.params() {
            return Err(Error::ParamMismatch(space.params(), lambda.params()));
        }
        if lambda.ambient() != Ambient::PhaseSpace {
            return Err(Error::AmbientMismatch);
        }
        let mut keys = Vec::with_capacity(lambda.len());
        let mut vectors = Vec::with_capacity(lambda.len());
        for i in 0..lambda.len() {
            let c = lambda.components(i);
            let name = |e: Error| Error::Resolution(format!("point #{i} {}: {e}", lambda.point_text(i)));
            let v = window.translate(c[0]).and_then(|t| t.modulate(c[1])).map_err(name)?;
            keys.push((space.index_of(c[0]).map_err(name)?, space.dual().index_of(c[1]).map_err(name)?));
            vectors.push(v);
        }
        Ok(GaborSystem { window, lambda, keys, vectors })
    }

    pub fn space(&self) -> ModelSpace {
        self.window.space()
    }

    pub fn window(&self) -> &ModelFunction {
        &self.window
    }

    pub fn lambda(&self) -> &PointSet {
        &self.lambda
    }

    /// Grid cell `(a, b)` of each point: `x mod A^{-k} H`, `xi mod A^{-m} H`.
    pub fn keys(&self) -> &[(usize, usize)] {
        &self.keys
    }

    pub fn vectors(&self) -> &[ModelFunction] {
        &self.vectors
    }

    pub fn gram(&self) -> Result<HermitianMatrix> {
        gram(&self.vectors)
    }

    pub fn frame_operator(&self) -> Result<HermitianMatrix> {
        frame_operator(self.space(), &self.vectors)
    }
}

/// `G[l][u] = <v_u, v_l>`.
pub fn gram(vectors: &[ModelFunction]) -> Result<HermitianMatrix> {
    let n = vectors.len();
    let mut e = vec![Complex64::zero(); n * n];
    for l in 0..n {
        for u in 0..n {
            e[l * n + u] = vectors[u].inner(&vectors[l])?;
        }
    }
    HermitianMatrix::new(n, e)
}

/// Matrix of `S f = sum <f, v> v` in the coefficient basis:
/// `S[i][j] = p^-k sum_l v_l[i] conj(v_l[j])`.
pub fn frame_operator(space: ModelSpace, vectors: &[ModelFunction]) -> Result<HermitianMatrix> {
    let n = space.dim();
    let mut e = vec![Complex64::zero(); n * n];
    for v in vectors {
        if v.space() != space {
            return Err(Error::SpaceMismatch);
        }
        let c = v.coeffs();
        for i in 0..n {
            for j in 0..n {
                e[i * n + j] += c[i] * c[j].conj();
            }
        }
    }
    let w = space.cell_measure();
    HermitianMatrix::new(n, e.into_iter().map(|z| z * w).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Classification {
    Onb,
    TightFrame(f64),
    Frame,
    BesselOnly,
    Incomplete,
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::Onb => "ONB",
            Classification::TightFrame(_) => "TightFrame",
            Classification::Frame => "Frame",
            Classification::BesselOnly => "BesselOnly",
            Classification::Incomplete => "Incomplete",
        }
    }

    /// Spanning the model space.
    pub fn is_frame(&self) -> bool {
        matches!(self, Classification::Onb | Classification::TightFrame(_) | Classification::Frame)
    }
}

fn class_name<S: Serializer>(c: &Classification, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(c.name())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaborReport {
    pub dim: usize,
    pub count: usize,
    pub lower: f64,
    pub upper: f64,
    pub rank: usize,
    #[serde(serialize_with = "class_name")]
    pub classification: Classification,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    pub tol: f64,
    pub residual: f64,
}

/// Bounds are the extreme eigenvalues of the frame operator.
///
/// Order of tests: rank below `dim` gives `Incomplete`; `count = dim` with
/// Gram = I gives `Onb`; equal bounds give `TightFrame`; otherwise `Frame`.
/// A finite system always has a finite upper bound, so `BesselOnly` is only
/// reached when the lower bound is positive yet at or below tolerance,
/// which the rank test already excludes.
pub fn frame_report(space: ModelSpace, vectors: &[ModelFunction]) -> Result<GaborReport> {
    let eig = hermitian_eigs(&frame_operator(space, vectors)?)?;
    classify(space.dim(), vectors, &eig)
}

fn classify(dim: usize, vectors: &[ModelFunction], eig: &Eigen) -> Result<GaborReport> {
    let spec = eig.spectrum();
    let rank = eig.rank(RANK_TOL);
    let tol = RANK_TOL * spec.max.max(1.0);
    let classification = if rank < dim {
        Classification::Incomplete
    } else if vectors.len() == dim && gram(vectors)?.deviation_from_scalar(1.0) <= tol {
        Classification::Onb
    } else if spec.max - spec.min <= tol {
        Classification::TightFrame((spec.min + spec.max) / 2.0)
    } else if spec.min > tol {
        Classification::Frame
    } else {
        Classification::BesselOnly
    };
    let c = match classification {
        Classification::TightFrame(c) => Some(c),
        Classification::Onb => Some(1.0),
        _ => None,
    };
    Ok(GaborReport {
        dim,
        count: vectors.len(),
        lower: spec.min,
        upper: spec.max,
        rank,
        classification,
        c,
        tol,
        residual: eig.residual,
    })
}

pub fn frame_bounds(sys: &GaborSystem) -> Result<GaborReport> {
    frame_report(sys.space(), &sys.vectors)
}

/// `S^{-1} v_lambda` for every vector; fails when the system does not span.
pub fn canonical_dual(sys: &GaborSystem) -> Result<Vec<ModelFunction>> {
    dual_of(sys.space(), &sys.vectors)
}

pub fn dual_of(space: ModelSpace, vectors: &[ModelFunction]) -> Result<Vec<ModelFunction>> {
    let eig = hermitian_eigs(&frame_operator(space, vectors)?)?;
    vectors.iter().map(|v| ModelFunction::new(space, eig.solve(v.coeffs(), RANK_TOL)?)).collect()
}

/// `f ~ sum <f, v> d` for a system `v` with dual `d`.
pub fn reconstruct(f: &ModelFunction, vectors: &[ModelFunction], dual: &[ModelFunction]) -> Result<ModelFunction> {
    let mut out = ModelFunction::zeros(f.space());
    for (v, d) in vectors.iter().zip(dual) {
        out = out.add(&d.scale(f.inner(v)?))?;
    }
    Ok(out)
}

/// Riesz basis test: invertible Gram and `<v_l, d_u> = delta` within 1e-8.
pub fn riesz_check(sys: &GaborSystem) -> Result<bool> {
    let dual = canonical_dual(sys)?;
    let g = hermitian_eigs(&sys.gram()?)?;
    if g.rank(RANK_TOL) < sys.vectors.len() {
        return Ok(false);
    }
    for (l, v) in sys.vectors.iter().enumerate() {
        for (u, d) in dual.iter().enumerate() {
            let target = if l == u { 1.0 } else { 0.0 };
            if (v.inner(d)? - target).norm() > 1e-8 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StressRow {
    pub reps: usize,
    pub upper: f64,
    /// `reps * ||phi||^2`.
    pub floor: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StressReport {
    pub rows: Vec<StressRow>,
    pub nondecreasing: bool,
}

impl StressReport {
    pub fn holds(&self) -> bool {
        self.nondecreasing && self.rows.iter().all(|r| r.holds)
    }
}

/// Upper frame bound after adding `lambda0` to the base system `reps` times.
pub fn bessel_stress(base: &GaborSystem, lambda0: &PointSet, reps: &[usize], tol: f64) -> Result<StressReport> {
    if lambda0.len() != 1 {
        return Err(Error::arg("stress point must be a single phase-space point"));
    }
    let extra = GaborSystem::build(base.window.clone(), lambda0.clone())?;
    let v0 = &extra.vectors[0];
    let norm2 = base.window.norm_sqr();
    let mut rows = Vec::new();
    for &n in reps {
        let mut vectors = base.vectors.clone();
        vectors.extend(std::iter::repeat_n(v0.clone(), n));
        let upper = hermitian_eigs(&frame_operator(base.space(), &vectors)?)?.spectrum().max;
        let floor = n as f64 * norm2;
        rows.push(StressRow { reps: n, upper, floor, holds: upper >= floor - tol * floor.max(1.0) });
    }
    let nondecreasing = rows.windows(2).all(|w| w[1].upper >= w[0].upper - tol * w[0].upper.max(1.0));
    Ok(StressReport { rows, nondecreasing })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    /// `sum_lambda |V_phi f(lambda)|^2`.
    pub lhs: f64,
    /// Largest number of points in a unit phase-space ball.
    pub n0: u64,
    pub wiener2: f64,
    /// `n0 * wiener2^2`.
    pub mid: f64,
    /// `||f||^2 ||phi||^2`.
    pub rhs: f64,
    pub holds: bool,
}

/// Sampling bound `sum |V f(lambda)|^2 <= N_0 ||V f||_{W(l^2)}^2`.
pub fn bessel_chain_check(f: &ModelFunction, sys: &GaborSystem, region: i64, tol: f64) -> Result<ChainReport> {
    let grid = stft(f, &sys.window)?;
    let terms: Vec<f64> = sys.keys.iter().map(|&(a, b)| grid.value(a, b).norm_sqr()).collect();
    let lhs = terms.iter().sum();
    let n0 = finite_density_check(&sys.lambda, 0, region)?.n_n;
    let wiener2 = wiener_norm(&grid, 2.0)?;
    let mid = n0 as f64 * wiener2 * wiener2;
    Ok(ChainReport { lhs, n0, wiener2, mid, rhs: f.norm_sqr() * sys.window.norm_sqr(), holds: lhs <= mid + tol })
}

/// A constructed system with its density region and the scales at which
/// its point set tiles the region.
#[derive(Debug, Clone, PartialEq)]
pub struct GaborFamily {
    pub name: String,
    pub system: GaborSystem,
    pub region: i64,
    pub scales: (i64, i64),
}

fn product_family(name: String, window: ModelFunction, x_sec: (i64, i64), xi_sec: (i64, i64)) -> Result<GaborFamily> {
    let params = window.space().params();
    let xs = section(params, x_sec.0, x_sec.1)?;
    let xis = section(params, xi_sec.0, xi_sec.1)?;
    let lambda = PointSet::product(params, xs.elements(), xis.elements())?;
    let region = x_sec.0.max(xi_sec.0);
    let scales = (x_sec.1.max(xi_sec.1), x_sec.0.min(xi_sec.0));
    Ok(GaborFamily { name, system: GaborSystem::build(window, lambda)?, region, scales })
}

/// `chi_H` on the lattice `section(m, 0) x section(k, 0)`: an orthonormal basis.
pub fn onb_family(space: ModelSpace) -> Result<GaborFamily> {
    let window = ModelFunction::indicator(space, 0, &space.params().zero())?;
    let (m, k) = (space.m() as i64, space.k() as i64);
    product_family(format!("onb(m={m},k={k})"), window, (m, 0), (k, 0))
}

/// Window `p^{j/2} chi_{A^{-j} H}` on `section(m, -j) x section(k, -j)`:
/// tight with bound `p^{2j}`.
pub fn fine_lattice_family(space: ModelSpace, j: u32) -> Result<GaborFamily> {
    if j > space.k() {
        return Err(Error::arg(format!("lattice refinement {j} exceeds model resolution {}", space.k())));
    }
    let p = space.params().p() as f64;
    let window = ModelFunction::indicator(space, -(j as i64), &space.params().zero())?
        .scale(Complex64::new(p.powf(j as f64 / 2.0), 0.0));
    let (m, k, j) = (space.m() as i64, space.k() as i64, j as i64);
    product_family(format!("fine-lattice(j={j})"), window, (m, -j), (k, -j))
}

/// `chi_H` on `section(m, 0) x section(k, -j)`: orthonormal for `j = 0`,
/// tight with constant `p^j` for `j > 0`, incomplete for `j < 0`.
pub fn section_family(space: ModelSpace, j: i64) -> Result<GaborFamily> {
    let (m, k) = (space.m() as i64, space.k() as i64);
    if j < -k || j > m {
        return Err(Error::arg(format!("section offset {j} outside [-{k}, {m}]")));
    }
    let window = ModelFunction::indicator(space, 0, &space.params().zero())?;
    product_family(format!("section(j={j})"), window, (m, 0), (k, -j))
}
