//! Finite-difference Levi forms and the checks built on them.
//!
//! The Levi form of `u` at `z` along a complex direction `ξ` is
//! `∂²/∂ζ∂ζ̄ u(z + ζξ)` at `ζ = 0`, approximated by the five-point Laplacian
//! of the complex line divided by four. Full Hermitian matrices
//! `L_jk = ∂²u/∂z_j∂z̄_k` are assembled by polarization.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::convex::{ConvexBody, RealVector};
use crate::error::{check_dim, Error, Result};
use crate::models::{ComplexPoint, Model};
use crate::report::CheckReport;
use crate::sampling::{sample_member, sample_rng, uniform_in_box, SafeRegion, SampleRng};

pub const DEFAULT_STEP: f64 = 1e-3;
pub const DEFAULT_PSH_TOL: f64 = 1e-6;
pub const DEFAULT_MA_REL_TOL: f64 = 1e-4;

/// Coefficient `c` in `∂²u/∂z_i∂z̄_j = c·(∂²p(z)/∂y_i∂y_j + ∂²p(z̄)/∂y_i∂y_j)`
/// for the elliptic-tube function `u = (arctan p(z) + arctan p(z̄))/2`.
///
/// Each `arctan p` contributes `¼·∂²p/∂y∂y` and `u` averages the two.
pub const TUBE_LEVI_COEFFICIENT: f64 = 0.125;

/// Relative rounding floor of the five-point stencil, in units of `|u|/h²`.
const STENCIL_ROUNDOFF: f64 = 64.0 * f64::EPSILON;

/// A real-valued function on a domain of ℂⁿ.
pub trait ScalarField: Sync {
    fn dim(&self) -> usize;
    /// Fails outside the domain.
    fn value(&self, z: &ComplexPoint) -> Result<f64>;
    fn label(&self) -> String;
}

/// Draws points where finite differences of step `h` are trustworthy.
pub trait SafeSampler {
    fn sample_safe(&self, rng: &mut SampleRng, h: f64) -> Result<ComplexPoint>;
}

impl ScalarField for Model {
    fn dim(&self) -> usize {
        Model::dim(self)
    }

    fn value(&self, z: &ComplexPoint) -> Result<f64> {
        self.u_max(z)
    }

    fn label(&self) -> String {
        match self.body() {
            Some(b) => format!("{}/{}", self.name(), b.kind()),
            None => self.name().to_string(),
        }
    }
}

impl SafeSampler for Model {
    fn sample_safe(&self, rng: &mut SampleRng, h: f64) -> Result<ComplexPoint> {
        sample_member(self, rng, &SafeRegion::for_step(h))
    }
}

/// A closure-backed field defined on all of ℂⁿ.
pub struct FnField<F> {
    dim: usize,
    label: String,
    f: F,
}

impl<F> FnField<F>
where
    F: Fn(&ComplexPoint) -> f64 + Sync,
{
    pub fn new(dim: usize, label: impl Into<String>, f: F) -> Self {
        Self {
            dim,
            label: label.into(),
            f,
        }
    }
}

impl<F> ScalarField for FnField<F>
where
    F: Fn(&ComplexPoint) -> f64 + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, z: &ComplexPoint) -> Result<f64> {
        check_dim(self.dim, z.dim())?;
        Ok((self.f)(z))
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

impl<F> SafeSampler for FnField<F> {
    fn sample_safe(&self, rng: &mut SampleRng, _h: f64) -> Result<ComplexPoint> {
        ComplexPoint::new(
            uniform_in_box(rng, self.dim, 1.0),
            uniform_in_box(rng, self.dim, 1.0),
        )
    }
}

/// Fixtures that must fail the checks.
#[derive(Debug, Clone)]
pub enum CounterField {
    /// `Σ|z_i|²`, strictly plurisubharmonic.
    SumOfSquares { dim: usize },
    /// `u − weight·|Im z|²` for a model's maximal function.
    Corrupted { model: Model, weight: f64 },
}

impl ScalarField for CounterField {
    fn dim(&self) -> usize {
        match self {
            CounterField::SumOfSquares { dim } => *dim,
            CounterField::Corrupted { model, .. } => model.dim(),
        }
    }

    fn value(&self, z: &ComplexPoint) -> Result<f64> {
        check_dim(ScalarField::dim(self), z.dim())?;
        match self {
            CounterField::SumOfSquares { .. } => Ok(z.re.norm_squared() + z.im.norm_squared()),
            CounterField::Corrupted { model, weight } => Ok(model.u_max(z)? - weight * z.im.norm_squared()),
        }
    }

    fn label(&self) -> String {
        match self {
            CounterField::SumOfSquares { .. } => "sum-of-squares".into(),
            CounterField::Corrupted { model, .. } => format!("corrupted/{}", model.label()),
        }
    }
}

impl SafeSampler for CounterField {
    fn sample_safe(&self, rng: &mut SampleRng, h: f64) -> Result<ComplexPoint> {
        match self {
            CounterField::SumOfSquares { dim } => {
                ComplexPoint::new(uniform_in_box(rng, *dim, 1.0), uniform_in_box(rng, *dim, 1.0))
            }
            CounterField::Corrupted { model, .. } => model.sample_safe(rng, h),
        }
    }
}

fn eval_on_stencil<F: ScalarField + ?Sized>(field: &F, z: &ComplexPoint) -> Result<f64> {
    field.value(z).map_err(|e| match e {
        Error::NotMember | Error::OutsideBody | Error::TooCloseToBoundary(_) => Error::StencilEscape,
        other => other,
    })
}

/// `¼·(u(z+hξ) + u(z−hξ) + u(z+ihξ) + u(z−ihξ) − 4u(z))/h²`.
pub fn levi_line<F: ScalarField + ?Sized>(
    field: &F,
    z: &ComplexPoint,
    dir: &ComplexPoint,
    h: f64,
) -> Result<f64> {
    check_dim(field.dim(), z.dim())?;
    check_dim(field.dim(), dir.dim())?;
    if !(h > 0.0) {
        return Err(Error::OutOfDomain("step must be positive".into()));
    }
    let center = eval_on_stencil(field, z)?;
    let mut sum = -4.0 * center;
    for c in [
        Complex64::new(h, 0.0),
        Complex64::new(-h, 0.0),
        Complex64::new(0.0, h),
        Complex64::new(0.0, -h),
    ] {
        sum += eval_on_stencil(field, &z.offset(dir, c))?;
    }
    Ok(0.25 * sum / (h * h))
}

/// Hermitian Levi matrix with eigen-diagnostics.
#[derive(Debug, Clone)]
pub struct LeviReport {
    pub matrix: DMatrix<Complex64>,
    pub min_eig: f64,
    pub max_eig: f64,
    pub det_abs: f64,
    pub step: f64,
    pub point: ComplexPoint,
}

impl Serialize for LeviReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = |part: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..self.matrix.nrows())
                .map(|i| self.matrix.row(i).iter().map(part).collect())
                .collect()
        };
        let mut st = serializer.serialize_struct("LeviReport", 7)?;
        st.serialize_field("matrix_re", &rows(|c| c.re))?;
        st.serialize_field("matrix_im", &rows(|c| c.im))?;
        st.serialize_field("min_eig", &self.min_eig)?;
        st.serialize_field("max_eig", &self.max_eig)?;
        st.serialize_field("det_abs", &self.det_abs)?;
        st.serialize_field("step", &self.step)?;
        st.serialize_field("point", &self.point)?;
        st.end()
    }
}

/// `L_jk = ∂²u/∂z_j∂z̄_k` by polarization of [`levi_line`]:
/// `L_jk = ¼[L(e_j+e_k) − L(e_j−e_k) + i·L(e_j+ie_k) − i·L(e_j−ie_k)]`.
pub fn levi_matrix<F: ScalarField + ?Sized>(field: &F, z: &ComplexPoint, h: f64) -> Result<LeviReport> {
    let n = field.dim();
    check_dim(n, z.dim())?;
    let e = |k: usize| ComplexPoint::basis(n, k);
    let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for j in 0..n {
        m[(j, j)] = Complex64::new(levi_line(field, z, &e(j), h)?, 0.0);
        for k in j + 1..n {
            let (ej, ek) = (e(j), e(k));
            let plus = levi_line(field, z, &ej.offset(&ek, Complex64::new(1.0, 0.0)), h)?;
            let minus = levi_line(field, z, &ej.offset(&ek, Complex64::new(-1.0, 0.0)), h)?;
            let iplus = levi_line(field, z, &ej.offset(&ek, Complex64::new(0.0, 1.0)), h)?;
            let iminus = levi_line(field, z, &ej.offset(&ek, Complex64::new(0.0, -1.0)), h)?;
            let entry = Complex64::new(plus - minus, iplus - iminus) * 0.25;
            m[(j, k)] = entry;
            m[(k, j)] = entry.conj();
        }
    }
    let eig = SymmetricEigen::new(m.clone()).eigenvalues;
    Ok(LeviReport {
        min_eig: eig.min(),
        max_eig: eig.max(),
        det_abs: eig.iter().map(|v| v.abs()).product(),
        matrix: m,
        step: h,
        point: z.clone(),
    })
}

/// Levi matrices at `nsamples` seeded safe-region points, in sample order.
pub fn levi_sweep<F>(field: &F, nsamples: usize, seed: u64, h: f64) -> Result<Vec<LeviReport>>
where
    F: ScalarField + SafeSampler + Sync,
{
    (0..nsamples)
        .into_par_iter()
        .map(|k| {
            let mut rng = sample_rng(seed, k as u64);
            let z = field.sample_safe(&mut rng, h)?;
            levi_matrix(field, &z, h)
        })
        .collect()
}

/// Every sampled Levi matrix must satisfy `min_eig ≥ −tol·max(1, max_eig)`.
pub fn verify_psh<F>(field: &F, nsamples: usize, seed: u64, h: f64, tol: f64) -> Result<CheckReport>
where
    F: ScalarField + SafeSampler + Sync,
{
    let reports = levi_sweep(field, nsamples, seed, h)?;
    let mut out = CheckReport::new("psh", field.label());
    out.samples = nsamples;
    out.h = h;
    out.tol = tol;
    out.worst_value = f64::INFINITY;
    for r in &reports {
        let score = r.min_eig / r.max_eig.max(1.0);
        if score < out.worst_value {
            out.worst_value = score;
            out.worst_point = Some(r.point.clone());
        }
    }
    out.pass = out.worst_value >= -tol;
    Ok(out)
}

/// Every sampled Levi matrix must have a vanishing eigenvalue:
/// `min_eig ≤ rel_tol·max(1, |max_eig|)` up to the stencil's rounding floor.
/// The `max(1, ·)` keeps the test meaningful in one variable, where the
/// only eigenvalue is the one that has to vanish.
/// The reported value is the largest excess over that bound.
pub fn verify_ma_degenerate<F>(
    field: &F,
    nsamples: usize,
    seed: u64,
    h: f64,
    rel_tol: f64,
) -> Result<CheckReport>
where
    F: ScalarField + SafeSampler + Sync,
{
    let reports = levi_sweep(field, nsamples, seed, h)?;
    let mut out = CheckReport::new("ma", field.label());
    out.samples = nsamples;
    out.h = h;
    out.tol = rel_tol;
    out.worst_value = f64::NEG_INFINITY;
    for r in &reports {
        let floor = STENCIL_ROUNDOFF * field.value(&r.point)?.abs() / (h * h);
        let excess = r.min_eig - rel_tol * r.max_eig.abs().max(1.0) - floor;
        if excess > out.worst_value {
            out.worst_value = excess;
            out.worst_point = Some(r.point.clone());
        }
    }
    out.pass = out.worst_value <= 0.0;
    Ok(out)
}

fn require_c2_offcenter(body: &ConvexBody, z: &ComplexPoint) -> Result<()> {
    check_dim(body.dim(), z.dim())?;
    if !body.is_c2() {
        return Err(Error::Unsupported(format!(
            "{} bodies are not C²; Levi identities need a smooth boundary",
            body.kind()
        )));
    }
    if z.im.iter().all(|v| *v == 0.0) {
        return Err(Error::ApexDirection);
    }
    Ok(())
}

/// `c·(∂²p(z)/∂y∂y + ∂²p(z̄)/∂y∂y)` with `c = TUBE_LEVI_COEFFICIENT`.
pub fn tube_levi_rhs(body: &ConvexBody, z: &ComplexPoint) -> Result<DMatrix<f64>> {
    require_c2_offcenter(body, z)?;
    let up = body.gauge_hessian(&z.re, &z.im)?;
    let down = body.gauge_hessian(&z.re, &(-&z.im))?;
    Ok((up + down) * TUBE_LEVI_COEFFICIENT)
}

/// Max-norm gap between the finite-difference Levi matrix of the elliptic
/// tube function and the gauge-Hessian expression [`tube_levi_rhs`].
pub fn verify_tube_levi(body: &ConvexBody, z: &ComplexPoint, h: f64) -> Result<f64> {
    let rhs = tube_levi_rhs(body, z)?;
    let model = Model::EllipticTube(body.clone());
    if !model.member(z)? {
        return Err(Error::NotMember);
    }
    let lhs = levi_matrix(&model, z, h)?.matrix;
    let n = body.dim();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((lhs[(i, j)] - Complex64::new(rhs[(i, j)], 0.0)).norm());
        }
    }
    Ok(worst)
}

/// Residuals of the three real-derivative identities of the centered gauge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaugeIdentityResiduals {
    /// `∂p/∂x_i = p·∂p/∂y_i`
    pub dx: f64,
    /// `∂²p/∂x_i∂y_j = p·∂²p/∂y_i∂y_j + ∂p/∂y_i·∂p/∂y_j`
    pub dxy: f64,
    /// `∂²p/∂x_i∂x_j = p²·∂²p/∂y_i∂y_j + 2p·∂p/∂y_i·∂p/∂y_j`
    pub dxx: f64,
}

impl GaugeIdentityResiduals {
    pub fn max(&self) -> f64 {
        self.dx.max(self.dxy).max(self.dxx)
    }
}

/// Evaluates the identities with every derivative taken by central
/// differences of step `h` in the `2n` real variables `(x, y)`.
pub fn verify_gauge_derivative_identities(
    body: &ConvexBody,
    z: &ComplexPoint,
    h: f64,
) -> Result<GaugeIdentityResiduals> {
    require_c2_offcenter(body, z)?;
    let n = body.dim();
    let p = |dx: &RealVector, dy: &RealVector| -> Result<f64> {
        body.centered_gauge(&(&z.re + dx), &(&z.im + dy))
            .map_err(|e| match e {
                Error::OutsideBody | Error::TooCloseToBoundary(_) => Error::StencilEscape,
                other => other,
            })
    };
    let zero = RealVector::zeros(n);
    let unit = |i: usize| {
        let mut e = RealVector::zeros(n);
        e[i] = h;
        e
    };
    // derivative in coordinate k of the stacked vector (x, y)
    let shift = |k: usize, s: f64| -> (RealVector, RealVector) {
        if k < n {
            (unit(k) * s, zero.clone())
        } else {
            (zero.clone(), unit(k - n) * s)
        }
    };
    let first = |k: usize| -> Result<f64> {
        let (ax, ay) = shift(k, 1.0);
        let (bx, by) = shift(k, -1.0);
        Ok((p(&ax, &ay)? - p(&bx, &by)?) / (2.0 * h))
    };
    let second = |k: usize, l: usize| -> Result<f64> {
        let mut acc = 0.0;
        for (sk, sl, sign) in [
            (1.0, 1.0, 1.0),
            (1.0, -1.0, -1.0),
            (-1.0, 1.0, -1.0),
            (-1.0, -1.0, 1.0),
        ] {
            let (kx, ky) = shift(k, sk);
            let (lx, ly) = shift(l, sl);
            acc += sign * p(&(kx + lx), &(ky + ly))?;
        }
        Ok(acc / (4.0 * h * h))
    };
    let p0 = p(&zero, &zero)?;
    let px = (0..n).map(first).collect::<Result<Vec<_>>>()?;
    let py = (n..2 * n).map(first).collect::<Result<Vec<_>>>()?;
    let mut out = GaugeIdentityResiduals {
        dx: 0.0,
        dxy: 0.0,
        dxx: 0.0,
    };
    for i in 0..n {
        out.dx = out.dx.max((px[i] - p0 * py[i]).abs());
        for j in 0..n {
            let pyy = second(n + i, n + j)?;
            let pxy = second(i, n + j)?;
            let pxx = second(i, j)?;
            out.dxy = out.dxy.max((pxy - (p0 * pyy + py[i] * py[j])).abs());
            out.dxx = out
                .dxx
                .max((pxx - (p0 * p0 * pyy + 2.0 * p0 * py[i] * py[j])).abs());
        }
    }
    Ok(out)
}

/// `(sqrt(2·L_{u²}(x, ξ)), E(x, ξ))` on a strip tube whose gauge is
/// `sqrt(yᵀQy)`, so that `u²` is C² across the center.
pub fn prop_eg_check(model: &Model, x: &RealVector, xi: &RealVector, h: f64) -> Result<(f64, f64)> {
    let Model::StripTube(gauge) = model else {
        return Err(Error::Unsupported(
            "the u² identity is checked on strip tubes only".into(),
        ));
    };
    let smooth_square = matches!(
        gauge.body(),
        ConvexBody::Ellipsoid(e) if e.center().iter().all(|c| *c == 0.0)
    );
    if !smooth_square {
        return Err(Error::Unsupported(
            "u² is C² near the center only for origin-centered ellipsoidal gauges".into(),
        ));
    }
    let e = model.metric_e(x, xi)?;
    let squared = FnField::new(model.dim(), "u^2", |z: &ComplexPoint| {
        gauge.eval(&z.im).map(|u| u * u).unwrap_or(f64::NAN)
    });
    let dir = ComplexPoint::real(xi.clone());
    let l = levi_line(&squared, &ComplexPoint::real(x.clone()), &dir, h)?;
    Ok(((2.0 * l).max(0.0).sqrt(), e))
}
