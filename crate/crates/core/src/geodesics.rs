//! Complex geodesics of the tube models.
//!
//! Through every point `z = x + iy` (`y ≠ 0`) of an elliptic tube passes the
//! flat disc spanned by the chord of `D` in direction `y`:
//!
//! ```text
//! t₁ = 1/p(z),  t₂ = 1/p(z̄),  x₁ = x + t₁y,  x₂ = x − t₂y  (x₁, x₂ ∈ ∂D)
//! f(ζ) = ((1 − ζ)/2)·x₁ + ((1 + ζ)/2)·x₂,   f(ζ₀) = z
//! ζ₀ = ((t₁ − t₂) − 2i)/(t₁ + t₂)
//! ```
//!
//! Along it `u(f(ζ)) = |Im arctanh ζ|`, and `h(η) = f(tanh η)` is a geodesic
//! of the strip `{|Im η| < π/4}`.

use num_complex::Complex64;
use serde::Serialize;

use crate::convex::{ConvexBody, Gauge, RealVector};
use crate::error::{check_dim, Error, Result};
use crate::models::{im_arctanh, ComplexPoint, Model, QUARTER_PI};
use crate::sampling::{sample_rng, uniform_in_disc};

pub type ComplexScalar = Complex64;

/// Radius of the disc from which identity sweeps draw ζ.
pub const GEODESIC_SAMPLE_RADIUS: f64 = 0.95;

/// The extremal disc through an elliptic-tube point.
#[derive(Debug, Clone)]
pub struct GeodesicChart {
    t1: f64,
    t2: f64,
    x1: RealVector,
    x2: RealVector,
    zeta0: Complex64,
    point: ComplexPoint,
    body: ConvexBody,
}

/// Plain-data view of a chart for reports.
#[derive(Debug, Clone, Serialize)]
pub struct ChartRecord {
    pub t1: f64,
    pub t2: f64,
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub zeta0: [f64; 2],
    pub reconstruction_residual: f64,
    pub boundary_residual: f64,
}

/// Builds the chart of `z` over `body`.
pub fn chart(body: &ConvexBody, z: &ComplexPoint) -> Result<GeodesicChart> {
    check_dim(body.dim(), z.dim())?;
    if z.im.iter().all(|v| *v == 0.0) {
        return Err(Error::OutOfDomain("no chart through a center point".into()));
    }
    if !body.contains(&z.re)? {
        return Err(Error::NotMember);
    }
    let p = body.centered_gauge(&z.re, &z.im)?;
    let pbar = body.centered_gauge(&z.re, &(-&z.im))?;
    if !(p * pbar < 1.0) {
        return Err(Error::NotMember);
    }
    let (t1, t2) = (1.0 / p, 1.0 / pbar);
    let x1 = &z.re + &z.im * t1;
    let x2 = &z.re - &z.im * t2;
    let zeta0 = Complex64::new(t1 - t2, -2.0) / (t1 + t2);
    Ok(GeodesicChart {
        t1,
        t2,
        x1,
        x2,
        zeta0,
        point: z.clone(),
        body: body.clone(),
    })
}

impl GeodesicChart {
    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn t2(&self) -> f64 {
        self.t2
    }

    pub fn x1(&self) -> &RealVector {
        &self.x1
    }

    pub fn x2(&self) -> &RealVector {
        &self.x2
    }

    pub fn zeta0(&self) -> Complex64 {
        self.zeta0
    }

    pub fn point(&self) -> &ComplexPoint {
        &self.point
    }

    pub fn body(&self) -> &ConvexBody {
        &self.body
    }

    /// `f(ζ)` for `|ζ| < 1`.
    pub fn eval(&self, zeta: Complex64) -> Result<ComplexPoint> {
        if !(zeta.norm() < 1.0) {
            return Err(Error::OutOfDomain(format!(
                "|ζ| = {} is not below 1",
                zeta.norm()
            )));
        }
        Ok(self.eval_unchecked(zeta))
    }

    fn eval_unchecked(&self, zeta: Complex64) -> ComplexPoint {
        let a = 0.5 * (1.0 - zeta.re);
        let b = 0.5 * (1.0 + zeta.re);
        ComplexPoint {
            re: &self.x1 * a + &self.x2 * b,
            im: (&self.x2 - &self.x1) * (0.5 * zeta.im),
        }
    }

    /// `h(η) = f(tanh η)` on the strip `|Im η| < π/4`.
    pub fn eval_strip(&self, eta: Complex64) -> Result<ComplexPoint> {
        if !(eta.im.abs() < QUARTER_PI) {
            return Err(Error::OutOfDomain(format!(
                "|Im η| = {} is not below π/4",
                eta.im.abs()
            )));
        }
        self.eval(eta.tanh())
    }

    /// `|f(ζ₀) − z|`.
    pub fn reconstruction_residual(&self) -> f64 {
        self.eval_unchecked(self.zeta0).distance(&self.point)
    }

    /// How far `x₁`, `x₂` are from ∂D, measured by the gauge centered at
    /// `Re z`: both `p(x, x₁ − x)` and `p(x, x₂ − x)` equal 1 on the boundary.
    pub fn boundary_residual(&self) -> Result<f64> {
        let x = &self.point.re;
        let g1 = self.body.centered_gauge(x, &(&self.x1 - x))?;
        let g2 = self.body.centered_gauge(x, &(&self.x2 - x))?;
        Ok((g1 - 1.0).abs().max((g2 - 1.0).abs()))
    }

    /// Inverse of `f` on its image; rejects points off the disc.
    pub fn preimage(&self, z: &ComplexPoint) -> Result<Complex64> {
        check_dim(self.x1.len(), z.dim())?;
        let mid = (&self.x1 + &self.x2) * 0.5;
        let half = (&self.x2 - &self.x1) * 0.5;
        let nn = half.norm_squared();
        let zeta = Complex64::new((&z.re - &mid).dot(&half) / nn, z.im.dot(&half) / nn);
        let back = self.eval_unchecked(zeta);
        if back.distance(z) > 1e-9 * (1.0 + z.norm()) || !(zeta.norm() < 1.0) {
            return Err(Error::OutOfDomain("point is not on the geodesic disc".into()));
        }
        Ok(zeta)
    }

    /// Largest `|u(f(ζ)) − |Im arctanh ζ||` over seeded ζ in the disc of
    /// radius [`GEODESIC_SAMPLE_RADIUS`].
    pub fn identity_residual(&self, nsamples: usize, seed: u64) -> Result<f64> {
        let model = Model::EllipticTube(self.body.clone());
        let mut worst = 0.0f64;
        for k in 0..nsamples {
            let mut rng = sample_rng(seed, k as u64);
            let zeta = uniform_in_disc(&mut rng, GEODESIC_SAMPLE_RADIUS);
            let u = model.u_max(&self.eval_unchecked(zeta))?;
            worst = worst.max((u - im_arctanh(zeta).abs()).abs());
        }
        Ok(worst)
    }

    pub fn record(&self) -> Result<ChartRecord> {
        Ok(ChartRecord {
            t1: self.t1,
            t2: self.t2,
            x1: self.x1.iter().copied().collect(),
            x2: self.x2.iter().copied().collect(),
            zeta0: [self.zeta0.re, self.zeta0.im],
            reconstruction_residual: self.reconstruction_residual(),
            boundary_residual: self.boundary_residual()?,
        })
    }
}

/// `f(ζ)` on the chart disc.
pub fn disc_geodesic_eval(chart: &GeodesicChart, zeta: Complex64) -> Result<ComplexPoint> {
    chart.eval(zeta)
}

/// `f(tanh η)` on the strip.
pub fn strip_geodesic_eval(chart: &GeodesicChart, eta: Complex64) -> Result<ComplexPoint> {
    chart.eval_strip(eta)
}

/// Builds the chart of `z` and sweeps the identity `u(f(ζ)) = |Im arctanh ζ|`.
pub fn geodesic_identity_residual(
    body: &ConvexBody,
    z: &ComplexPoint,
    nsamples: usize,
    seed: u64,
) -> Result<f64> {
    chart(body, z)?.identity_residual(nsamples, seed)
}

/// `x + ζ·y/μ(y)` on the upper half strip `0 < Im ζ < π/4`, where
/// `u_μ = Im ζ`.
pub fn striptube_geodesic(
    gauge: &Gauge,
    x: &RealVector,
    y: &RealVector,
    zeta: Complex64,
) -> Result<ComplexPoint> {
    check_dim(gauge.dim(), x.len())?;
    check_dim(gauge.dim(), y.len())?;
    if y.iter().all(|v| *v == 0.0) {
        return Err(Error::ApexDirection);
    }
    if !(zeta.im > 0.0 && zeta.im < QUARTER_PI) {
        return Err(Error::OutOfDomain(format!(
            "Im ζ = {} outside the half strip (0, π/4)",
            zeta.im
        )));
    }
    let dir = y / gauge.eval(y)?;
    ComplexPoint::new(x + &dir * zeta.re, dir * zeta.im)
}

/// An explicit holomorphic disc `g: Δ → M` with `g((−1,1)) ⊂ V`.
#[derive(Debug, Clone)]
pub enum AnalyticDisc {
    /// `ζ ↦ base + arctanh(ζ)·velocity`.
    Strip { base: RealVector, velocity: RealVector },
    /// `ζ ↦ m(σζ)` with `m(w) = (w + c)/(1 + cw)` and `σ = ±1`.
    Mobius { center: f64, orientation: f64 },
    /// `ζ ↦ f(m(−ζ))` for a chart `f` and the real automorphism `m` sending
    /// 0 to the real point of the chart disc above `Re z`.
    Chart {
        chart: Box<GeodesicChart>,
        real_center: f64,
    },
}

impl AnalyticDisc {
    pub fn eval(&self, zeta: Complex64) -> Result<ComplexPoint> {
        if !(zeta.norm() < 1.0) {
            return Err(Error::OutOfDomain(format!(
                "|ζ| = {} is not below 1",
                zeta.norm()
            )));
        }
        match self {
            AnalyticDisc::Strip { base, velocity } => {
                let w = zeta.atanh();
                ComplexPoint::new(base + velocity * w.re, velocity * w.im)
            }
            AnalyticDisc::Mobius { center, orientation } => {
                let w = zeta * *orientation;
                Ok(ComplexPoint::scalar((w + center) / (w * center + 1.0)))
            }
            AnalyticDisc::Chart { chart, real_center } => {
                let w = -zeta;
                chart.eval((w + real_center) / (w * real_center + 1.0))
            }
        }
    }

    /// `g(0)`.
    pub fn origin(&self) -> RealVector {
        match self {
            AnalyticDisc::Strip { base, .. } => base.clone(),
            AnalyticDisc::Mobius { center, .. } => RealVector::from_element(1, *center),
            AnalyticDisc::Chart { chart, .. } => chart.point.re.clone(),
        }
    }

    /// `g'(0)`, a real vector since `g` is real on (−1, 1).
    pub fn velocity(&self) -> RealVector {
        match self {
            AnalyticDisc::Strip { velocity, .. } => velocity.clone(),
            AnalyticDisc::Mobius { center, orientation } => {
                RealVector::from_element(1, orientation * (1.0 - center * center))
            }
            AnalyticDisc::Chart { chart, real_center } => {
                (&chart.x1 - &chart.x2) * (0.5 * (1.0 - real_center * real_center))
            }
        }
    }
}

/// The disc through `(x, ξ)` that realizes the upper bound for `F`.
pub fn extremal_disc(model: &Model, x: &RealVector, xi: &RealVector) -> Result<AnalyticDisc> {
    check_dim(model.dim(), xi.len())?;
    if !model.center_contains(x)? {
        return Err(Error::NotInCenter);
    }
    if xi.iter().all(|v| *v == 0.0) {
        return Err(Error::OutOfDomain("no candidate disc for ξ = 0".into()));
    }
    match model {
        Model::Strip1D => Ok(AnalyticDisc::Strip {
            base: x.clone(),
            velocity: xi / xi[0].abs(),
        }),
        Model::Disc1D => Ok(AnalyticDisc::Mobius {
            center: x[0],
            orientation: xi[0].signum(),
        }),
        Model::StripTube(g) => {
            // Im(arctanh ζ) takes both signs, so both μ(ξ) and μ(−ξ) must fit.
            let a = g.eval(xi)?.max(g.eval(&(-xi))?);
            Ok(AnalyticDisc::Strip {
                base: x.clone(),
                velocity: xi / a,
            })
        }
        Model::EllipticTube(body) => {
            let up = body.centered_gauge(x, xi)?;
            let down = body.centered_gauge(x, &(-xi))?;
            let s = 0.5 / (up * down).sqrt();
            let z = ComplexPoint::new(x.clone(), xi * s)?;
            let chart = chart(body, &z)?;
            let real_center = (chart.t1 - chart.t2) / (chart.t1 + chart.t2);
            Ok(AnalyticDisc::Chart {
                chart: Box::new(chart),
                real_center,
            })
        }
    }
}

/// The value `a` with `g'(0) = ξ/a` for the disc of [`extremal_disc`];
/// an upper bound for `F(x, ξ)` and hence for `E(x, ξ)`.
pub fn f_upper_bound(model: &Model, x: &RealVector, xi: &RealVector) -> Result<f64> {
    let disc = extremal_disc(model, x, xi)?;
    let v = disc.velocity();
    let along = v.dot(xi);
    if !(along > 0.0) || (&v * xi.norm_squared() - xi * along).norm() > 1e-9 * v.norm() * xi.norm_squared() {
        return Err(Error::Certification(
            "disc velocity is not a positive multiple of ξ".into(),
        ));
    }
    Ok(xi.norm_squared() / along)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::Ellipsoid;
    use approx::assert_abs_diff_eq;

    fn v(c: &[f64]) -> RealVector {
        RealVector::from_column_slice(c)
    }

    fn interval() -> ConvexBody {
        ConvexBody::interval(-1.0, 1.0).unwrap()
    }

    #[test]
    fn interval_chart_at_half_i() {
        let z = ComplexPoint::from_slices(&[0.0], &[0.5]).unwrap();
        let c = chart(&interval(), &z).unwrap();
        assert_eq!((c.t1(), c.t2()), (2.0, 2.0));
        assert_eq!(c.x1()[0], 1.0);
        assert_eq!(c.x2()[0], -1.0);
        assert_eq!(c.zeta0(), Complex64::new(0.0, -0.5));
        let back = c.eval(Complex64::new(0.0, -0.5)).unwrap();
        assert_eq!(back, z);
    }

    #[test]
    fn ball_chart() {
        let z = ComplexPoint::from_slices(&[0.0, 0.0], &[0.3, 0.0]).unwrap();
        let c = chart(&ConvexBody::unit_ball(2), &z).unwrap();
        assert_abs_diff_eq!(c.t1(), 10.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c.t2(), 10.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c.x1().clone(), v(&[1.0, 0.0]), epsilon = 1e-14);
        assert_abs_diff_eq!(c.x2().clone(), v(&[-1.0, 0.0]), epsilon = 1e-14);
        assert_abs_diff_eq!(c.zeta0().re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.zeta0().im, -0.3, epsilon = 1e-15);
        assert!(c.boundary_residual().unwrap() < 1e-12);
    }

    #[test]
    fn off_center_interval_chart() {
        let z = ComplexPoint::from_slices(&[0.5], &[0.25]).unwrap();
        let c = chart(&interval(), &z).unwrap();
        assert_abs_diff_eq!(c.t1(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.t2(), 6.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c.zeta0().re, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c.zeta0().im, -0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(c.zeta0().norm_sqr(), 0.3125, epsilon = 1e-15);
        assert!(c.reconstruction_residual() < 1e-15);
    }

    #[test]
    fn chart_rejects_center_and_outside() {
        let b = interval();
        assert!(chart(&b, &ComplexPoint::from_slices(&[0.2], &[0.0]).unwrap()).is_err());
        assert_eq!(
            chart(&b, &ComplexPoint::from_slices(&[0.0], &[1.5]).unwrap()).unwrap_err(),
            Error::NotMember
        );
    }

    #[test]
    fn disc_eval_examples() {
        let z = ComplexPoint::from_slices(&[0.1, 0.2], &[0.2, -0.1]).unwrap();
        let c = chart(&ConvexBody::unit_ball(2), &z).unwrap();
        let mid = c.eval(Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(mid.im, v(&[0.0, 0.0]));
        assert_abs_diff_eq!(mid.re, (c.x1() + c.x2()) * 0.5, epsilon = 1e-15);
        let on_segment = c.eval(Complex64::new(0.4, 0.0)).unwrap();
        assert_eq!(on_segment.im, v(&[0.0, 0.0]));
        assert!(ConvexBody::unit_ball(2).contains(&on_segment.re).unwrap());
        assert!(c.eval(Complex64::new(0.6, 0.8)).is_err());
    }

    #[test]
    fn identity_on_interval_and_ball() {
        let z = ComplexPoint::from_slices(&[0.3], &[-0.4]).unwrap();
        assert!(geodesic_identity_residual(&interval(), &z, 500, 1).unwrap() <= 1e-12);
        let z = ComplexPoint::from_slices(&[0.0, 0.0], &[0.3, 0.0]).unwrap();
        assert!(geodesic_identity_residual(&ConvexBody::unit_ball(2), &z, 1000, 2).unwrap() <= 1e-10);
    }

    #[test]
    fn real_zeta_hits_center() {
        let z = ComplexPoint::from_slices(&[0.0, 0.0], &[0.3, 0.1]).unwrap();
        let body: ConvexBody = Ellipsoid::diagonal(&[1.0, 4.0]).unwrap().into();
        let c = chart(&body, &z).unwrap();
        let m = Model::EllipticTube(body);
        for s in [-0.9, -0.2, 0.0, 0.7] {
            assert_eq!(m.u_max(&c.eval(Complex64::new(s, 0.0)).unwrap()).unwrap(), 0.0);
        }
    }

    #[test]
    fn strip_geodesic() {
        let z = ComplexPoint::from_slices(&[0.0], &[0.5]).unwrap();
        let c = chart(&interval(), &z).unwrap();
        let m = Model::EllipticTube(interval());
        let p = c.eval_strip(Complex64::new(0.0, 0.3)).unwrap();
        assert_abs_diff_eq!(m.u_max(&p).unwrap(), 0.3, epsilon = 1e-12);
        let real = c.eval_strip(Complex64::new(0.8, 0.0)).unwrap();
        assert_eq!(real.im[0], 0.0);
        assert!(c.eval_strip(Complex64::new(0.0, QUARTER_PI)).is_err());
    }

    #[test]
    fn striptube_geodesic_examples() {
        let g = Gauge::euclidean(2);
        let p = striptube_geodesic(&g, &v(&[0.0, 0.0]), &v(&[0.0, 1.0]), Complex64::new(0.1, 0.2)).unwrap();
        assert_abs_diff_eq!(p.re, v(&[0.0, 0.1]), epsilon = 1e-16);
        assert_abs_diff_eq!(p.im, v(&[0.0, 0.2]), epsilon = 1e-16);
        assert_abs_diff_eq!(g.eval(&p.im).unwrap(), 0.2, epsilon = 1e-16);

        let skew = Gauge::new(ConvexBody::interval(-1.0, 2.0).unwrap()).unwrap();
        let p = striptube_geodesic(&skew, &v(&[0.0]), &v(&[-1.0]), Complex64::new(0.0, 0.3)).unwrap();
        assert_abs_diff_eq!(p.im[0], -0.3, epsilon = 1e-16);
        assert_abs_diff_eq!(skew.eval(&p.im).unwrap(), 0.3, epsilon = 1e-15);

        assert!(striptube_geodesic(&g, &v(&[0.0, 0.0]), &v(&[0.0, 1.0]), Complex64::new(0.0, -0.1)).is_err());
        assert!(striptube_geodesic(&g, &v(&[0.0, 0.0]), &v(&[0.0, 0.0]), Complex64::new(0.0, 0.1)).is_err());
    }

    #[test]
    fn upper_bound_examples() {
        let tube = Model::EllipticTube(interval());
        assert_abs_diff_eq!(
            f_upper_bound(&tube, &v(&[0.5]), &v(&[1.0])).unwrap(),
            4.0 / 3.0,
            epsilon = 1e-14
        );
        assert_eq!(
            f_upper_bound(&Model::Strip1D, &v(&[0.0]), &v(&[1.0])).unwrap(),
            1.0
        );
        let st = Model::StripTube(
            Ellipsoid::diagonal(&[1.0, 4.0])
                .map(|e| Gauge::new(e.into()).unwrap())
                .unwrap(),
        );
        let xi = v(&[0.3, -0.7]);
        assert_abs_diff_eq!(
            f_upper_bound(&st, &v(&[1.0, 2.0]), &xi).unwrap(),
            st.metric_e(&v(&[1.0, 2.0]), &xi).unwrap(),
            epsilon = 1e-14
        );
        assert!(f_upper_bound(&tube, &v(&[0.5]), &v(&[0.0])).is_err());
    }

    #[test]
    fn skew_strip_tube_disc_bound_is_symmetric() {
        let skew = Model::StripTube(Gauge::new(ConvexBody::interval(-1.0, 2.0).unwrap()).unwrap());
        let up = f_upper_bound(&skew, &v(&[0.0]), &v(&[1.0])).unwrap();
        let down = f_upper_bound(&skew, &v(&[0.0]), &v(&[-1.0])).unwrap();
        assert_eq!(up, 1.0);
        assert_eq!(down, 1.0);
        assert!(skew.metric_e(&v(&[0.0]), &v(&[1.0])).unwrap() < up);
    }

    #[test]
    fn extremal_discs_stay_in_model() {
        let models = [
            Model::Strip1D,
            Model::Disc1D,
            Model::EllipticTube(ConvexBody::unit_cube(2)),
            Model::StripTube(Gauge::new(ConvexBody::interval(-1.0, 2.0).unwrap()).unwrap()),
        ];
        for m in &models {
            let n = m.dim();
            let x = RealVector::from_element(n, 0.2);
            let xi = RealVector::from_fn(n, |i, _| if i == 0 { -0.7 } else { 0.4 });
            let disc = extremal_disc(m, &x, &xi).unwrap();
            assert_abs_diff_eq!(disc.origin(), x.clone(), epsilon = 1e-14);
            for k in 0..200 {
                let mut rng = sample_rng(9, k);
                let zeta = uniform_in_disc(&mut rng, 0.999);
                assert!(
                    m.member(&disc.eval(zeta).unwrap()).unwrap(),
                    "{} at {zeta}",
                    m.name()
                );
                let real = disc.eval(Complex64::new(zeta.re, 0.0)).unwrap();
                assert!(m.center_contains(&real.re).unwrap());
                assert!(real.im.iter().all(|v| v.abs() < 1e-15));
            }
        }
    }
}
