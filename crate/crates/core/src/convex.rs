//! Bounded open convex bodies in ℝⁿ and their Minkowski functionals.
//!
//! A body comes in one of three representations:
//!
//! * [`Polytope`]: a finite intersection of open halfspaces `a·w < b`,
//! * [`Ellipsoid`]: `(w − c)ᵀQ(w − c) < 1` with `Q` symmetric positive definite,
//! * a smooth body `{φ < 0}` described by a [`DefiningFunction`].
//!
//! The central quantity is the Minkowski functional centered at an interior
//! point `x`,
//!
//! ```text
//! p(x, y) = inf { t > 0 : x + y/t ∈ D }
//! ```
//!
//! which is positively homogeneous and convex in `y` but not symmetric.
//! Polytopes and ellipsoids evaluate it in closed form; every body also
//! supports the bracketed bisection oracle [`ConvexBody::gauge_by_bisection`],
//! which only uses the membership predicate.

use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;

use crate::error::{check_dim, Error, Result};

pub type RealVector = DVector<f64>;

/// Smallest admissible value of `1 − x'ᵀQx'` in the ellipsoid closed form.
pub const ELLIPSOID_BOUNDARY_MARGIN: f64 = 1e-12;

/// Feasibility slack used when enumerating polytope vertices.
const VERTEX_SLACK: f64 = 1e-9;

/// The open halfspace `normal · w < offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub normal: RealVector,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: impl Into<RealVector>, offset: f64) -> Self {
        Self {
            normal: normal.into(),
            offset,
        }
    }
}

/// Bounded polytope in halfspace representation.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    halfspaces: Vec<Halfspace>,
    dim: usize,
    vertices: Vec<RealVector>,
}

impl Polytope {
    pub fn new(halfspaces: Vec<Halfspace>) -> Result<Self> {
        let first = halfspaces
            .first()
            .ok_or_else(|| Error::InvalidBody("polytope needs at least one halfspace".into()))?;
        let dim = first.normal.len();
        if dim == 0 {
            return Err(Error::InvalidBody("zero-dimensional halfspace".into()));
        }
        for h in &halfspaces {
            check_dim(dim, h.normal.len())?;
            if !h.offset.is_finite() || h.normal.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite);
            }
            if h.normal.norm() == 0.0 {
                return Err(Error::InvalidBody("halfspace with zero normal".into()));
            }
        }
        if !normals_positively_span(&halfspaces, dim) {
            return Err(Error::InvalidBody(
                "halfspace normals do not positively span the space (unbounded)".into(),
            ));
        }
        let vertices = enumerate_vertices(&halfspaces, dim);
        if vertices.is_empty() {
            return Err(Error::InvalidBody("polytope is empty".into()));
        }
        let poly = Self {
            halfspaces,
            dim,
            vertices,
        };
        let centroid = poly.vertex_centroid();
        if !poly.contains_point(&centroid) {
            return Err(Error::InvalidBody("polytope has empty interior".into()));
        }
        Ok(poly)
    }

    /// Axis-aligned box `∏ (lo_i, hi_i)`.
    pub fn axis_box(lo: &[f64], hi: &[f64]) -> Result<Self> {
        check_dim(lo.len(), hi.len())?;
        let n = lo.len();
        let mut hs = Vec::with_capacity(2 * n);
        for i in 0..n {
            let mut e = RealVector::zeros(n);
            e[i] = 1.0;
            hs.push(Halfspace::new(e.clone(), hi[i]));
            hs.push(Halfspace::new(-e, -lo[i]));
        }
        Self::new(hs)
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn contains_point(&self, w: &RealVector) -> bool {
        self.halfspaces.iter().all(|h| h.normal.dot(w) < h.offset)
    }

    fn vertex_centroid(&self) -> RealVector {
        let mut c = RealVector::zeros(self.dim);
        for v in &self.vertices {
            c += v;
        }
        c / self.vertices.len() as f64
    }

    fn support(&self, a: &RealVector) -> f64 {
        self.vertices
            .iter()
            .map(|v| a.dot(v))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn gauge(&self, x: &RealVector, y: &RealVector) -> f64 {
        self.halfspaces
            .iter()
            .map(|h| {
                let slack = h.offset - h.normal.dot(x);
                (h.normal.dot(y) / slack).max(0.0)
            })
            .fold(0.0, f64::max)
    }
}

/// The recession cone `{d : A d ≤ 0}` is trivial iff the normals have full
/// rank and no extreme ray exists; extreme rays are kernels of n−1 normals.
fn normals_positively_span(hs: &[Halfspace], dim: usize) -> bool {
    let in_recession = |d: &RealVector| {
        let dn = d.norm();
        hs.iter().all(|h| h.normal.dot(d) <= 1e-12 * h.normal.norm() * dn)
    };
    if dim == 1 {
        let up = RealVector::from_element(1, 1.0);
        let down = RealVector::from_element(1, -1.0);
        return !in_recession(&up) && !in_recession(&down);
    }
    let a = DMatrix::from_fn(hs.len(), dim, |i, j| hs[i].normal[j]);
    if hs.len() < dim {
        return false;
    }
    let sv = a.clone().svd(false, false).singular_values;
    let smax = sv.max();
    if sv.min() <= 1e-12 * smax {
        return false;
    }
    for rows in (0..hs.len()).combinations(dim - 1) {
        let sub = DMatrix::from_fn(dim - 1, dim, |i, j| hs[rows[i]].normal[j]);
        let d = generalized_cross(&sub);
        if d.norm() <= 1e-12 {
            continue;
        }
        if in_recession(&d) || in_recession(&(-d)) {
            return false;
        }
    }
    true
}

/// Vector orthogonal to the n−1 rows of `m` (cofactor expansion).
fn generalized_cross(m: &DMatrix<f64>) -> RealVector {
    let n = m.ncols();
    RealVector::from_fn(n, |k, _| {
        let minor = m.clone().remove_column(k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sign * minor.determinant()
    })
}

fn enumerate_vertices(hs: &[Halfspace], dim: usize) -> Vec<RealVector> {
    let mut out = Vec::new();
    for rows in (0..hs.len()).combinations(dim) {
        let a = DMatrix::from_fn(dim, dim, |i, j| hs[rows[i]].normal[j]);
        let b = RealVector::from_fn(dim, |i, _| hs[rows[i]].offset);
        let Some(v) = a.lu().solve(&b) else { continue };
        if v.iter().any(|c| !c.is_finite()) {
            continue;
        }
        let feasible = hs
            .iter()
            .all(|h| h.normal.dot(&v) <= h.offset + VERTEX_SLACK * (1.0 + h.offset.abs()));
        if feasible {
            out.push(v);
        }
    }
    out
}

/// `(w − c)ᵀQ(w − c) < 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ellipsoid {
    shape: DMatrix<f64>,
    center: RealVector,
    inverse: DMatrix<f64>,
}

impl Ellipsoid {
    pub fn new(shape: DMatrix<f64>, center: RealVector) -> Result<Self> {
        let n = shape.nrows();
        if n == 0 || shape.ncols() != n {
            return Err(Error::InvalidBody("ellipsoid form must be square".into()));
        }
        check_dim(n, center.len())?;
        if shape.iter().chain(center.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let scale = shape.amax();
        if (&shape - shape.transpose()).amax() > 1e-12 * scale {
            return Err(Error::InvalidBody("ellipsoid form is not symmetric".into()));
        }
        let chol = shape
            .clone()
            .cholesky()
            .ok_or_else(|| Error::InvalidBody("ellipsoid form is not positive definite".into()))?;
        let inverse = chol.inverse();
        Ok(Self {
            shape,
            center,
            inverse,
        })
    }

    /// Ellipsoid centered at the origin.
    pub fn centered(shape: DMatrix<f64>) -> Result<Self> {
        let n = shape.nrows();
        Self::new(shape, RealVector::zeros(n))
    }

    /// Unit ball of ℝⁿ.
    pub fn unit_ball(n: usize) -> Self {
        Self::centered(DMatrix::identity(n, n)).expect("identity is positive definite")
    }

    /// Axis-aligned form `diag(entries)`.
    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        Self::centered(DMatrix::from_diagonal(&RealVector::from_column_slice(entries)))
    }

    pub fn shape(&self) -> &DMatrix<f64> {
        &self.shape
    }

    pub fn center(&self) -> &RealVector {
        &self.center
    }

    pub fn dim(&self) -> usize {
        self.shape.nrows()
    }

    fn contains_point(&self, w: &RealVector) -> bool {
        let d = w - &self.center;
        d.dot(&(&self.shape * &d)) < 1.0
    }

    fn support(&self, a: &RealVector) -> f64 {
        a.dot(&self.center) + a.dot(&(&self.inverse * a)).max(0.0).sqrt()
    }

    /// Closed-form terms shared by the gauge and its derivatives.
    fn terms(&self, x: &RealVector, y: &RealVector) -> Result<EllipsoidTerms> {
        let xs = x - &self.center;
        let qx = &self.shape * &xs;
        let d = 1.0 - xs.dot(&qx);
        if d < ELLIPSOID_BOUNDARY_MARGIN {
            return Err(Error::TooCloseToBoundary(d));
        }
        let qy = &self.shape * y;
        let b = qx.dot(y);
        let c = y.dot(&qy);
        let s = (b * b + c * d).sqrt();
        // b + s cancels when b < 0; use the conjugate form there.
        let p = if b >= 0.0 { (b + s) / d } else { c / (s - b) };
        Ok(EllipsoidTerms { qx, qy, b, d, s, p })
    }

    fn gauge(&self, x: &RealVector, y: &RealVector) -> Result<f64> {
        Ok(self.terms(x, y)?.p)
    }

    /// ∇_y p and ∇²_y p of the closed form; requires y ≠ 0.
    fn gauge_derivatives(&self, x: &RealVector, y: &RealVector) -> Result<(RealVector, DMatrix<f64>)> {
        let t = self.terms(x, y)?;
        let grad_s = (&t.qx * t.b + &t.qy * t.d) / t.s;
        let grad = (&t.qx + &grad_s) / t.d;
        let hess_s =
            (&t.qx * t.qx.transpose() + &self.shape * t.d) / t.s - &grad_s * grad_s.transpose() / t.s;
        Ok((grad, hess_s / t.d))
    }
}

struct EllipsoidTerms {
    qx: RealVector,
    qy: RealVector,
    b: f64,
    d: f64,
    s: f64,
    p: f64,
}

/// Defining function of a smooth bounded convex body `{φ < 0}`.
pub trait DefiningFunction: fmt::Debug + Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, w: &RealVector) -> f64;
    fn gradient(&self, w: &RealVector) -> RealVector;
    fn hessian(&self, w: &RealVector) -> DMatrix<f64>;
    /// The body lies in the Euclidean ball of this radius about the origin.
    fn bounding_radius(&self) -> f64;
    /// A point strictly inside the body.
    fn interior_point(&self) -> RealVector {
        RealVector::zeros(self.dim())
    }
    /// Upper bound for `sup_{w ∈ D} a·w`.
    ///
    /// The default runs multistart projected ascent over boundary points
    /// reached radially from [`interior_point`](Self::interior_point) and
    /// pads the result by [`SUPPORT_MARGIN`].
    fn support(&self, a: &RealVector) -> f64 {
        support_by_ascent(self, a)
    }
    /// Short family name used in reports.
    fn family(&self) -> &'static str {
        "smooth"
    }
}

/// Additive padding applied to numerically maximized support values.
pub const SUPPORT_MARGIN: f64 = 1e-9;

fn radial_boundary<F: DefiningFunction + ?Sized>(def: &F, x0: &RealVector, d: &RealVector) -> f64 {
    let mut lo = 0.0;
    let mut hi = 2.0 * def.bounding_radius() + 2.0 * x0.norm();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if def.value(&(x0 + d * mid)) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    hi
}

fn support_by_ascent<F: DefiningFunction + ?Sized>(def: &F, a: &RealVector) -> f64 {
    let n = def.dim();
    let x0 = def.interior_point();
    let objective = |d: &RealVector| {
        let d = d.normalize();
        let r = radial_boundary(def, &x0, &d);
        a.dot(&(&x0 + d * r))
    };
    let mut starts: Vec<RealVector> = Vec::new();
    if a.norm() > 0.0 {
        starts.push(a.normalize());
    }
    for i in 0..n {
        let mut e = RealVector::zeros(n);
        e[i] = 1.0;
        starts.push(e.clone());
        starts.push(-e);
    }
    let mut rng = crate::sampling::sample_rng(0x5eed_5afe, 0);
    for _ in 0..8 {
        starts.push(crate::sampling::unit_direction(&mut rng, n));
    }
    let mut best = f64::NEG_INFINITY;
    for start in starts {
        let mut d = start;
        let mut val = objective(&d);
        let mut step = 0.25;
        for _ in 0..400 {
            let h = 1e-7;
            let grad = RealVector::from_fn(n, |i, _| {
                let mut dp = d.clone();
                let mut dm = d.clone();
                dp[i] += h;
                dm[i] -= h;
                (objective(&dp) - objective(&dm)) / (2.0 * h)
            });
            // project onto the tangent space of the sphere
            let tangent = &grad - &d * d.dot(&grad);
            if tangent.norm() < 1e-13 {
                break;
            }
            let candidate = (&d + tangent * step).normalize();
            let cval = objective(&candidate);
            if cval > val {
                d = candidate;
                val = cval;
                step *= 1.5;
            } else {
                step *= 0.5;
                if step < 1e-14 {
                    break;
                }
            }
        }
        best = best.max(val);
    }
    best + SUPPORT_MARGIN
}

/// `Σ |w_i / a_i|^q < 1` with `q ≥ 2`, a C² family containing ellipses
/// (`q = 2`) and rounded boxes (large `q`).
#[derive(Debug, Clone, PartialEq)]
pub struct Superellipse {
    semi_axes: Vec<f64>,
    exponent: f64,
}

impl Superellipse {
    pub fn new(semi_axes: Vec<f64>, exponent: f64) -> Result<Self> {
        if semi_axes.is_empty() {
            return Err(Error::InvalidBody("superellipse needs semi-axes".into()));
        }
        if semi_axes.iter().any(|a| !a.is_finite() || *a <= 0.0) {
            return Err(Error::InvalidBody(
                "superellipse semi-axes must be positive".into(),
            ));
        }
        if !exponent.is_finite() || exponent < 2.0 {
            return Err(Error::InvalidBody(
                "superellipse exponent must be at least 2 for a C² boundary".into(),
            ));
        }
        Ok(Self { semi_axes, exponent })
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn semi_axes(&self) -> &[f64] {
        &self.semi_axes
    }
}

impl DefiningFunction for Superellipse {
    fn dim(&self) -> usize {
        self.semi_axes.len()
    }

    fn value(&self, w: &RealVector) -> f64 {
        w.iter()
            .zip(&self.semi_axes)
            .map(|(wi, ai)| (wi / ai).abs().powf(self.exponent))
            .sum::<f64>()
            - 1.0
    }

    fn gradient(&self, w: &RealVector) -> RealVector {
        let q = self.exponent;
        RealVector::from_fn(w.len(), |i, _| {
            let s = w[i] / self.semi_axes[i];
            q * s.abs().powf(q - 1.0) * s.signum() / self.semi_axes[i]
        })
    }

    fn hessian(&self, w: &RealVector) -> DMatrix<f64> {
        let q = self.exponent;
        DMatrix::from_diagonal(&RealVector::from_fn(w.len(), |i, _| {
            let a = self.semi_axes[i];
            q * (q - 1.0) * (w[i] / a).abs().powf(q - 2.0) / (a * a)
        }))
    }

    fn bounding_radius(&self) -> f64 {
        self.semi_axes.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// Dual-norm closed form `‖(a_i v_i)‖_{q'}` with `1/q + 1/q' = 1`.
    fn support(&self, v: &RealVector) -> f64 {
        let qd = self.exponent / (self.exponent - 1.0);
        v.iter()
            .zip(&self.semi_axes)
            .map(|(vi, ai)| (vi * ai).abs().powf(qd))
            .sum::<f64>()
            .powf(1.0 / qd)
    }

    fn family(&self) -> &'static str {
        "superellipse"
    }
}

/// Bracketing and bisection controls for the gauge oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisectionParams {
    pub growth: f64,
    pub rel_tol: f64,
    pub max_bracket_steps: usize,
    pub max_iter: usize,
}

impl Default for BisectionParams {
    fn default() -> Self {
        Self {
            growth: 2.0,
            rel_tol: 1e-14,
            max_bracket_steps: 200,
            max_iter: 200,
        }
    }
}

/// A bounded open convex body in ℝⁿ.
#[derive(Debug, Clone)]
pub enum ConvexBody {
    Polytope(Polytope),
    Ellipsoid(Ellipsoid),
    Smooth(Arc<dyn DefiningFunction>),
}

impl From<Polytope> for ConvexBody {
    fn from(p: Polytope) -> Self {
        ConvexBody::Polytope(p)
    }
}

impl From<Ellipsoid> for ConvexBody {
    fn from(e: Ellipsoid) -> Self {
        ConvexBody::Ellipsoid(e)
    }
}

impl ConvexBody {
    /// The open interval `(lo, hi) ⊂ ℝ`.
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::InvalidBody(format!("empty interval ({lo}, {hi})")));
        }
        Ok(Polytope::axis_box(&[lo], &[hi])?.into())
    }

    /// The cube `(−1, 1)ⁿ`.
    pub fn unit_cube(n: usize) -> Self {
        Polytope::axis_box(&vec![-1.0; n], &vec![1.0; n])
            .expect("unit cube is a valid polytope")
            .into()
    }

    pub fn unit_ball(n: usize) -> Self {
        Ellipsoid::unit_ball(n).into()
    }

    /// Wraps a smooth defining function after a sampled convexity check:
    /// the Hessian of φ must be positive semidefinite at seeded points of
    /// the bounding ball that fall inside the body.
    pub fn smooth(def: Arc<dyn DefiningFunction>) -> Result<Self> {
        let n = def.dim();
        if n == 0 {
            return Err(Error::InvalidBody("zero-dimensional smooth body".into()));
        }
        let r = def.bounding_radius();
        if !r.is_finite() || r <= 0.0 {
            return Err(Error::InvalidBody(
                "smooth body needs a positive bounding radius".into(),
            ));
        }
        let x0 = def.interior_point();
        check_dim(n, x0.len())?;
        if !(def.value(&x0) < 0.0) {
            return Err(Error::InvalidBody(
                "declared interior point is not interior".into(),
            ));
        }
        let mut rng = crate::sampling::sample_rng(0xc0ffee, 0);
        for _ in 0..64 {
            let d = crate::sampling::unit_direction(&mut rng, n);
            let w = d * (r * rng.gen::<f64>());
            if def.value(&w) >= 0.0 {
                continue;
            }
            let h = def.hessian(&w);
            let eig = SymmetricEigen::new(h.clone()).eigenvalues;
            if eig.min() < -1e-9 * (1.0 + h.amax()) {
                return Err(Error::InvalidBody(
                    "defining function is not convex (indefinite Hessian)".into(),
                ));
            }
        }
        Ok(ConvexBody::Smooth(def))
    }

    pub fn superellipse(semi_axes: Vec<f64>, exponent: f64) -> Result<Self> {
        Self::smooth(Arc::new(Superellipse::new(semi_axes, exponent)?))
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Polytope(p) => p.dim(),
            ConvexBody::Ellipsoid(e) => e.dim(),
            ConvexBody::Smooth(s) => s.dim(),
        }
    }

    /// Short name of the representation.
    pub fn kind(&self) -> &'static str {
        match self {
            ConvexBody::Polytope(_) => "polytope",
            ConvexBody::Ellipsoid(_) => "ellipsoid",
            ConvexBody::Smooth(s) => s.family(),
        }
    }

    /// Whether the boundary is C², as required by the Levi-form checks.
    pub fn is_c2(&self) -> bool {
        !matches!(self, ConvexBody::Polytope(_))
    }

    pub fn contains(&self, x: &RealVector) -> Result<bool> {
        check_dim(self.dim(), x.len())?;
        Ok(self.contains_unchecked(x))
    }

    pub(crate) fn contains_unchecked(&self, x: &RealVector) -> bool {
        match self {
            ConvexBody::Polytope(p) => p.contains_point(x),
            ConvexBody::Ellipsoid(e) => e.contains_point(x),
            ConvexBody::Smooth(s) => s.value(x) < 0.0,
        }
    }

    /// A point strictly inside the body.
    pub fn interior_point(&self) -> RealVector {
        match self {
            ConvexBody::Polytope(p) => {
                let origin = RealVector::zeros(p.dim());
                if p.contains_point(&origin) {
                    origin
                } else {
                    p.vertex_centroid()
                }
            }
            ConvexBody::Ellipsoid(e) => e.center().clone(),
            ConvexBody::Smooth(s) => s.interior_point(),
        }
    }

    /// `sup_{w ∈ D} a·w`. Exact for polytopes and ellipsoids; smooth bodies
    /// return a padded upper bound.
    pub fn support(&self, a: &RealVector) -> Result<f64> {
        check_dim(self.dim(), a.len())?;
        Ok(match self {
            ConvexBody::Polytope(p) => p.support(a),
            ConvexBody::Ellipsoid(e) => e.support(a),
            ConvexBody::Smooth(s) => s.support(a),
        })
    }

    fn check_base(&self, x: &RealVector, y: &RealVector) -> Result<()> {
        check_dim(self.dim(), x.len())?;
        check_dim(self.dim(), y.len())?;
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if !self.contains_unchecked(x) {
            return Err(Error::OutsideBody);
        }
        Ok(())
    }

    /// Minkowski functional of the body centered at `x`, evaluated at `y`.
    pub fn centered_gauge(&self, x: &RealVector, y: &RealVector) -> Result<f64> {
        self.check_base(x, y)?;
        if y.iter().all(|v| *v == 0.0) {
            return Ok(0.0);
        }
        match self {
            ConvexBody::Polytope(p) => Ok(p.gauge(x, y)),
            ConvexBody::Ellipsoid(e) => e.gauge(x, y),
            ConvexBody::Smooth(_) => self.bisect_gauge(x, y, &BisectionParams::default()),
        }
    }

    /// The same functional computed only from the membership predicate.
    pub fn gauge_by_bisection(
        &self,
        x: &RealVector,
        y: &RealVector,
        params: &BisectionParams,
    ) -> Result<f64> {
        self.check_base(x, y)?;
        if y.iter().all(|v| *v == 0.0) {
            return Ok(0.0);
        }
        self.bisect_gauge(x, y, params)
    }

    fn bisect_gauge(&self, x: &RealVector, y: &RealVector, params: &BisectionParams) -> Result<f64> {
        let inside = |t: f64| self.contains_unchecked(&(x + y / t));
        let mut hi = 1.0;
        let mut lo;
        if inside(hi) {
            lo = hi;
            let mut steps = 0;
            while inside(lo) {
                hi = lo;
                lo /= params.growth;
                steps += 1;
                if steps > params.max_bracket_steps {
                    return Err(Error::NonConvergent("gauge bracketing"));
                }
            }
        } else {
            let mut steps = 0;
            while !inside(hi) {
                hi *= params.growth;
                steps += 1;
                if steps > params.max_bracket_steps {
                    return Err(Error::NonConvergent("gauge bracketing"));
                }
            }
            lo = hi / params.growth;
        }
        let mut iter = 0;
        while hi - lo > params.rel_tol * hi {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if inside(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
            iter += 1;
            if iter > params.max_iter {
                return Err(Error::NonConvergent("gauge bisection"));
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// `∂²p/∂y_i∂y_j` at `(x, y)`.
    ///
    /// Analytic for ellipsoids; central differences of the bisection gauge
    /// with step `1e-4·|y|` for smooth bodies. Polytopes are rejected.
    pub fn gauge_hessian(&self, x: &RealVector, y: &RealVector) -> Result<DMatrix<f64>> {
        self.check_base(x, y)?;
        if y.norm() == 0.0 {
            return Err(Error::ApexDirection);
        }
        match self {
            ConvexBody::Polytope(_) => Err(Error::Unsupported(
                "polytope gauges are not twice differentiable".into(),
            )),
            ConvexBody::Ellipsoid(e) => Ok(e.gauge_derivatives(x, y)?.1),
            ConvexBody::Smooth(_) => {
                let n = self.dim();
                let h = 1e-4 * y.norm();
                let p = |v: RealVector| self.centered_gauge(x, &v);
                let mut hess = DMatrix::zeros(n, n);
                for i in 0..n {
                    for j in i..n {
                        let mut ei = RealVector::zeros(n);
                        let mut ej = RealVector::zeros(n);
                        ei[i] = h;
                        ej[j] = h;
                        let v = (p(y + &ei + &ej)? - p(y + &ei - &ej)? - p(y - &ei + &ej)?
                            + p(y - &ei - &ej)?)
                            / (4.0 * h * h);
                        hess[(i, j)] = v;
                        hess[(j, i)] = v;
                    }
                }
                Ok(hess)
            }
        }
    }

    /// `∇_y p` at `(x, y)`, analytic for ellipsoids and central differences
    /// otherwise. Polytopes are rejected.
    pub fn gauge_gradient(&self, x: &RealVector, y: &RealVector) -> Result<RealVector> {
        self.check_base(x, y)?;
        if y.norm() == 0.0 {
            return Err(Error::ApexDirection);
        }
        match self {
            ConvexBody::Polytope(_) => Err(Error::Unsupported(
                "polytope gauges are not differentiable".into(),
            )),
            ConvexBody::Ellipsoid(e) => Ok(e.gauge_derivatives(x, y)?.0),
            ConvexBody::Smooth(_) => {
                let n = self.dim();
                let h = 1e-5 * y.norm();
                let mut g = RealVector::zeros(n);
                for i in 0..n {
                    let mut e = RealVector::zeros(n);
                    e[i] = h;
                    g[i] =
                        (self.centered_gauge(x, &(y + &e))? - self.centered_gauge(x, &(y - &e))?) / (2.0 * h);
                }
                Ok(g)
            }
        }
    }
}

/// Origin-centered gauge `μ(y) = p(0, y)` of a body containing the origin.
#[derive(Debug, Clone)]
pub struct Gauge {
    body: ConvexBody,
    params: BisectionParams,
}

impl Gauge {
    pub fn new(body: ConvexBody) -> Result<Self> {
        let origin = RealVector::zeros(body.dim());
        if !body.contains_unchecked(&origin) {
            return Err(Error::InvalidBody("gauge body must contain the origin".into()));
        }
        Ok(Self {
            body,
            params: BisectionParams::default(),
        })
    }

    pub fn with_params(mut self, params: BisectionParams) -> Self {
        self.params = params;
        self
    }

    /// Euclidean norm of ℝⁿ.
    pub fn euclidean(n: usize) -> Self {
        Self::new(ConvexBody::unit_ball(n)).expect("ball contains the origin")
    }

    pub fn body(&self) -> &ConvexBody {
        &self.body
    }

    pub fn dim(&self) -> usize {
        self.body.dim()
    }

    fn origin(&self) -> RealVector {
        RealVector::zeros(self.dim())
    }

    pub fn eval(&self, y: &RealVector) -> Result<f64> {
        let origin = self.origin();
        match self.body {
            ConvexBody::Smooth(_) => self.body.gauge_by_bisection(&origin, y, &self.params),
            _ => self.body.centered_gauge(&origin, y),
        }
    }

    /// Whether `μ(−y) = μ(y)` holds up to rounding, tested on the
    /// coordinate directions and the body's own normals.
    pub fn is_symmetric(&self) -> bool {
        match &self.body {
            ConvexBody::Ellipsoid(e) => e.center().iter().all(|c| *c == 0.0),
            ConvexBody::Polytope(p) => {
                let n = p.dim();
                let mut dirs: Vec<RealVector> = p.halfspaces().iter().map(|h| h.normal.clone()).collect();
                for i in 0..n {
                    let mut e = RealVector::zeros(n);
                    e[i] = 1.0;
                    dirs.push(e);
                }
                dirs.iter().all(|d| {
                    let a = self.eval(d).unwrap_or(f64::NAN);
                    let b = self.eval(&-d).unwrap_or(f64::NAN);
                    (a - b).abs() <= 1e-12 * (1.0 + a.abs())
                })
            }
            ConvexBody::Smooth(_) => false,
        }
    }

    pub fn hessian(&self, y: &RealVector) -> Result<DMatrix<f64>> {
        self.body.gauge_hessian(&self.origin(), y)
    }
}
