//! The catalog of analytic pairs `(V, M)` and their maximal functions.
//!
//! | model          | M                                   | V      | u                              |
//! |----------------|-------------------------------------|--------|--------------------------------|
//! | `Strip1D`      | `{|Im z| < π/4}`                    | ℝ      | `|Im z|`                       |
//! | `Disc1D`       | unit disc Δ                         | (−1,1) | `|Im arctanh z|`               |
//! | `StripTube(μ)` | `{μ(Im z) < π/4}`                   | ℝⁿ     | `μ(Im z)`                      |
//! | `EllipticTube` | `{Re z ∈ D, p(z)p(z̄) < 1}`          | D      | `(arctan p(z) + arctan p(z̄))/2` |
//!
//! Each model also carries the closed form of its pseudo-metric `E(x, ξ)`,
//! and [`Model::metric_e_fd`] recovers `E` from its definition as the
//! one-sided slope of `u` along `t ↦ x + itξ`.

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::convex::{ConvexBody, Gauge, RealVector};
use crate::error::{check_dim, Error, Result};

/// π/4, the supremum of every function in the class.
pub const QUARTER_PI: f64 = std::f64::consts::FRAC_PI_4;

/// Step ladder used by [`Model::metric_e_fd`] when none is supplied.
pub const DEFAULT_FD_STEPS: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// `z = x + iy ∈ ℂⁿ` stored as its real and imaginary parts.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPoint {
    pub re: RealVector,
    pub im: RealVector,
}

impl ComplexPoint {
    pub fn new(re: RealVector, im: RealVector) -> Result<Self> {
        check_dim(re.len(), im.len())?;
        if re.iter().chain(im.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { re, im })
    }

    pub fn from_slices(re: &[f64], im: &[f64]) -> Result<Self> {
        Self::new(
            RealVector::from_column_slice(re),
            RealVector::from_column_slice(im),
        )
    }

    /// A point of the real subspace.
    pub fn real(x: RealVector) -> Self {
        let n = x.len();
        Self {
            re: x,
            im: RealVector::zeros(n),
        }
    }

    pub fn scalar(z: Complex64) -> Self {
        Self {
            re: RealVector::from_element(1, z.re),
            im: RealVector::from_element(1, z.im),
        }
    }

    /// The `k`-th standard basis vector of ℂⁿ.
    pub fn basis(n: usize, k: usize) -> Self {
        let mut re = RealVector::zeros(n);
        re[k] = 1.0;
        Self::real(re)
    }

    pub fn dim(&self) -> usize {
        self.re.len()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn coord(&self, k: usize) -> Complex64 {
        Complex64::new(self.re[k], self.im[k])
    }

    /// `self + c · dir` with complex scalar `c`.
    pub fn offset(&self, dir: &ComplexPoint, c: Complex64) -> Self {
        Self {
            re: &self.re + &dir.re * c.re - &dir.im * c.im,
            im: &self.im + &dir.im * c.re + &dir.re * c.im,
        }
    }

    /// `self + other`.
    pub fn add(&self, other: &ComplexPoint) -> Self {
        Self {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    /// Complex bilinear pairing `Σ a_k z_k` with a real covector `a`.
    pub fn pair_real(&self, a: &RealVector) -> Complex64 {
        Complex64::new(a.dot(&self.re), a.dot(&self.im))
    }

    /// Hermitian norm of ℂⁿ.
    pub fn norm(&self) -> f64 {
        (self.re.norm_squared() + self.im.norm_squared()).sqrt()
    }

    pub fn distance(&self, other: &ComplexPoint) -> f64 {
        ((&self.re - &other.re).norm_squared() + (&self.im - &other.im).norm_squared()).sqrt()
    }
}

impl Serialize for ComplexPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("ComplexPoint", 2)?;
        st.serialize_field("re", self.re.as_slice())?;
        st.serialize_field("im", self.im.as_slice())?;
        st.end()
    }
}

/// `Im arctanh ζ` on the unit disc.
///
/// With the principal logarithm, `(1+ζ)/(1−ζ) = (1 − |ζ|² + 2i Im ζ)/|1−ζ|²`,
/// whose real part is positive on Δ, so the argument is a plain `atan2`.
pub fn im_arctanh(zeta: Complex64) -> f64 {
    0.5 * (2.0 * zeta.im).atan2(1.0 - zeta.norm_sqr())
}

/// One of the four explicit analytic pairs.
#[derive(Debug, Clone)]
pub enum Model {
    Strip1D,
    Disc1D,
    StripTube(Gauge),
    EllipticTube(ConvexBody),
}

impl Model {
    pub fn dim(&self) -> usize {
        match self {
            Model::Strip1D | Model::Disc1D => 1,
            Model::StripTube(g) => g.dim(),
            Model::EllipticTube(b) => b.dim(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Model::Strip1D => "strip1d",
            Model::Disc1D => "disc1d",
            Model::StripTube(_) => "striptube",
            Model::EllipticTube(_) => "elliptictube",
        }
    }

    /// The convex body underlying a tube model.
    pub fn body(&self) -> Option<&ConvexBody> {
        match self {
            Model::StripTube(g) => Some(g.body()),
            Model::EllipticTube(b) => Some(b),
            _ => None,
        }
    }

    /// Whether `u` is C² off the center, so that Levi forms make sense.
    pub fn is_smooth(&self) -> bool {
        self.body().is_none_or(ConvexBody::is_c2)
    }

    /// Membership of a real point in the center `V`.
    pub fn center_contains(&self, x: &RealVector) -> Result<bool> {
        check_dim(self.dim(), x.len())?;
        Ok(match self {
            Model::Strip1D | Model::StripTube(_) => x.iter().all(|v| v.is_finite()),
            Model::Disc1D => x[0].abs() < 1.0,
            Model::EllipticTube(b) => b.contains_unchecked(x),
        })
    }

    /// `(p(z), p(z̄))` for an elliptic tube point whose real part lies in D.
    pub fn tube_gauges(&self, z: &ComplexPoint) -> Result<(f64, f64)> {
        let Model::EllipticTube(body) = self else {
            return Err(Error::Unsupported(format!(
                "{} has no centered gauges",
                self.name()
            )));
        };
        let p = body.centered_gauge(&z.re, &z.im)?;
        let pbar = body.centered_gauge(&z.re, &(-&z.im))?;
        Ok((p, pbar))
    }

    pub fn member(&self, z: &ComplexPoint) -> Result<bool> {
        check_dim(self.dim(), z.dim())?;
        Ok(match self {
            Model::Strip1D => z.im[0].abs() < QUARTER_PI,
            Model::Disc1D => z.re[0] * z.re[0] + z.im[0] * z.im[0] < 1.0,
            Model::StripTube(g) => g.eval(&z.im)? < QUARTER_PI,
            Model::EllipticTube(b) => {
                if !b.contains_unchecked(&z.re) {
                    return Ok(false);
                }
                let (p, pbar) = self.tube_gauges(z)?;
                p * pbar < 1.0
            }
        })
    }

    /// The maximal function `u` at a member point.
    pub fn u_max(&self, z: &ComplexPoint) -> Result<f64> {
        if !self.member(z)? {
            return Err(Error::NotMember);
        }
        Ok(match self {
            Model::Strip1D => z.im[0].abs(),
            Model::Disc1D => im_arctanh(z.coord(0)).abs(),
            Model::StripTube(g) => g.eval(&z.im)?,
            Model::EllipticTube(_) => {
                let (p, pbar) = self.tube_gauges(z)?;
                0.5 * (p.atan() + pbar.atan())
            }
        })
    }

    fn check_tangent(&self, x: &RealVector, xi: &RealVector) -> Result<()> {
        check_dim(self.dim(), xi.len())?;
        if !self.center_contains(x)? {
            return Err(Error::NotInCenter);
        }
        Ok(())
    }

    /// Closed form of the pseudo-metric `E(x, ξ)`.
    pub fn metric_e(&self, x: &RealVector, xi: &RealVector) -> Result<f64> {
        self.check_tangent(x, xi)?;
        Ok(match self {
            Model::Strip1D => xi[0].abs(),
            Model::Disc1D => xi[0].abs() / (1.0 - x[0] * x[0]),
            Model::StripTube(g) => g.eval(xi)?,
            Model::EllipticTube(b) => 0.5 * (b.centered_gauge(x, xi)? + b.centered_gauge(x, &(-xi))?),
        })
    }

    /// `E(x, ξ)` as the limit of `u(x + itξ)/t`, extrapolated in `t²` over a
    /// decreasing step ladder.
    ///
    /// If the quotients along the ladder are not monotone the extrapolation
    /// is not trusted and the quotient at the smallest step is returned.
    /// The ladder is shrunk by factors of ten (at most eight times) until its
    /// largest step stays inside the model.
    pub fn metric_e_fd(&self, x: &RealVector, xi: &RealVector, steps: &[f64]) -> Result<f64> {
        self.check_tangent(x, xi)?;
        if steps.is_empty() || steps.iter().any(|s| !(*s > 0.0)) {
            return Err(Error::OutOfDomain("steps must be positive".into()));
        }
        if steps.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::OutOfDomain("steps must be decreasing".into()));
        }
        if xi.iter().all(|v| *v == 0.0) {
            return Ok(0.0);
        }
        let along = |t: f64| ComplexPoint {
            re: x.clone(),
            im: xi * t,
        };
        let mut ladder = steps.to_vec();
        let mut shrinks = 0;
        while !self.member(&along(ladder[0]))? {
            shrinks += 1;
            if shrinks > 8 {
                return Err(Error::OutOfDomain(
                    "slope curve leaves the model for every step ladder".into(),
                ));
            }
            ladder.iter_mut().for_each(|t| *t *= 0.1);
        }
        let quotients = ladder
            .iter()
            .map(|&t| Ok(self.u_max(&along(t))? / t))
            .collect::<Result<Vec<f64>>>()?;
        if !is_monotone(&quotients) {
            return Ok(*quotients.last().expect("non-empty ladder"));
        }
        let squares: Vec<f64> = ladder.iter().map(|t| t * t).collect();
        Ok(extrapolate_to_zero(&squares, &quotients))
    }
}

fn is_monotone(vals: &[f64]) -> bool {
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-14 * scale;
    let mut sign = 0.0;
    for w in vals.windows(2) {
        let d = w[1] - w[0];
        if d.abs() <= floor {
            continue;
        }
        if sign == 0.0 {
            sign = d.signum();
        } else if d.signum() != sign {
            return false;
        }
    }
    true
}

/// Neville's scheme evaluated at 0 for the nodes `xs`.
pub(crate) fn extrapolate_to_zero(xs: &[f64], vals: &[f64]) -> f64 {
    let mut p = vals.to_vec();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            let (xi, xj) = (xs[i], xs[i + m]);
            p[i] = (xi * p[i + 1] - xj * p[i]) / (xi - xj);
        }
    }
    p[0]
}

/// Outcome of comparing samples against the strip Schwarz bound
/// `u(z) ≤ (a/r)·Im z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchwarzReport {
    pub max_excess: f64,
    pub worst_index: usize,
}

impl SchwarzReport {
    pub fn holds(&self, slack: f64) -> bool {
        self.max_excess <= slack
    }
}

/// Largest `u_val − (a/r)·Im z` over samples of the half strip `0 < Im z < r`.
pub fn schwarz_bound_check(samples: &[(Complex64, f64)], a: f64, r: f64) -> Result<SchwarzReport> {
    if !(a > 0.0 && r > 0.0) {
        return Err(Error::OutOfDomain("a and r must be positive".into()));
    }
    let mut report = SchwarzReport {
        max_excess: f64::NEG_INFINITY,
        worst_index: 0,
    };
    for (k, (z, u)) in samples.iter().enumerate() {
        if !(z.im > 0.0 && z.im < r) {
            return Err(Error::OutOfDomain(format!(
                "sample {k} has Im z = {} outside (0, {r})",
                z.im
            )));
        }
        if !(*u >= 0.0 && *u < a) {
            return Err(Error::OutOfDomain(format!(
                "sample {k} value {u} outside [0, {a})"
            )));
        }
        let excess = u - a / r * z.im;
        if excess > report.max_excess {
            report = SchwarzReport {
                max_excess: excess,
                worst_index: k,
            };
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::Ellipsoid;
    use approx::assert_abs_diff_eq;

    fn v(c: &[f64]) -> RealVector {
        RealVector::from_column_slice(c)
    }

    fn interval_tube() -> Model {
        Model::EllipticTube(ConvexBody::interval(-1.0, 1.0).unwrap())
    }

    #[test]
    fn quarter_pi_is_nearest_double() {
        assert_eq!(QUARTER_PI, std::f64::consts::PI / 4.0);
    }

    #[test]
    fn member_examples() {
        let square = Model::EllipticTube(ConvexBody::unit_cube(2));
        let z = ComplexPoint::from_slices(&[0.0, 0.0], &[0.5, 0.0]).unwrap();
        assert!(square.member(&z).unwrap());
        assert_eq!(square.tube_gauges(&z).unwrap(), (0.5, 0.5));

        // p(z) p(z̄) = 1 exactly: x = 0.5, y = 0.5 gives p = 1, p̄ = 1/3; scale y
        let d = interval_tube();
        let y = (1.0f64 / (2.0 * (2.0 / 3.0))).sqrt();
        let edge = ComplexPoint::from_slices(&[0.5], &[y]).unwrap();
        let (p, pb) = d.tube_gauges(&edge).unwrap();
        assert!((p * pb - 1.0).abs() < 1e-15);
        let inside = ComplexPoint::from_slices(&[0.5], &[0.999 * y]).unwrap();
        assert!(d.member(&inside).unwrap());

        let ball = Model::StripTube(Gauge::euclidean(2));
        let on_edge = ComplexPoint::from_slices(&[0.0, 0.0], &[QUARTER_PI, 0.0]).unwrap();
        assert!(!ball.member(&on_edge).unwrap());
    }

    #[test]
    fn interval_boundary_probe_is_not_member() {
        // at x = 0.5 the interval gauges are 2y and 2y/3, product 4y²/3 = 1
        let d = interval_tube();
        let y = (0.75f64).sqrt();
        let z = ComplexPoint::from_slices(&[0.5], &[y * (1.0 + 1e-12)]).unwrap();
        assert!(!d.member(&z).unwrap());
    }

    #[test]
    fn u_max_examples() {
        let z = ComplexPoint::scalar(Complex64::new(0.3, 0.2));
        assert_eq!(Model::Strip1D.u_max(&z).unwrap(), 0.2);

        let d = interval_tube();
        let z = ComplexPoint::scalar(Complex64::new(0.0, 0.5));
        assert_abs_diff_eq!(d.u_max(&z).unwrap(), 0.4636476090008061, epsilon = 1e-16);

        for model in [
            Model::Strip1D,
            Model::Disc1D,
            interval_tube(),
            Model::StripTube(Gauge::euclidean(1)),
        ] {
            let z = ComplexPoint::real(v(&[0.25]));
            assert_eq!(model.u_max(&z).unwrap(), 0.0);
        }
    }

    #[test]
    fn u_max_rejects_non_members() {
        let z = ComplexPoint::scalar(Complex64::new(0.0, 1.0));
        assert_eq!(Model::Strip1D.u_max(&z), Err(Error::NotMember));
        assert_eq!(Model::Disc1D.u_max(&z), Err(Error::NotMember));
    }

    #[test]
    fn metric_examples() {
        assert_abs_diff_eq!(
            Model::Disc1D.metric_e(&v(&[0.5]), &v(&[1.0])).unwrap(),
            4.0 / 3.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            interval_tube().metric_e(&v(&[0.5]), &v(&[1.0])).unwrap(),
            4.0 / 3.0,
            epsilon = 1e-15
        );
        let skew = Model::StripTube(Gauge::new(ConvexBody::interval(-1.0, 2.0).unwrap()).unwrap());
        assert_eq!(skew.metric_e(&v(&[0.0]), &v(&[1.0])).unwrap(), 0.5);
        assert_eq!(skew.metric_e(&v(&[0.0]), &v(&[-1.0])).unwrap(), 1.0);
        assert_eq!(
            Model::Disc1D.metric_e(&v(&[1.0]), &v(&[1.0])),
            Err(Error::NotInCenter)
        );
    }

    #[test]
    fn metric_fd_examples() {
        let steps = DEFAULT_FD_STEPS;
        let strip = Model::Strip1D
            .metric_e_fd(&v(&[0.0]), &v(&[1.0]), &steps)
            .unwrap();
        assert_abs_diff_eq!(strip, 1.0, epsilon = 1e-12);

        let ball = Model::EllipticTube(ConvexBody::unit_ball(2));
        let e = ball
            .metric_e_fd(&v(&[0.0, 0.0]), &v(&[1.0, 0.0]), &steps)
            .unwrap();
        assert_abs_diff_eq!(e, 1.0, epsilon = 1e-6);

        let skew = Model::StripTube(Gauge::new(ConvexBody::interval(-1.0, 2.0).unwrap()).unwrap());
        let e = skew.metric_e_fd(&v(&[0.0]), &v(&[-1.0]), &steps).unwrap();
        assert_abs_diff_eq!(e, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn metric_fd_shrinks_ladder() {
        // ξ so large that t = 1e-2 already leaves the disc
        let e = Model::Disc1D
            .metric_e_fd(&v(&[0.0]), &v(&[500.0]), &DEFAULT_FD_STEPS)
            .unwrap();
        assert_abs_diff_eq!(e, 500.0, epsilon = 1e-6);
    }

    #[test]
    fn metric_fd_rejects_bad_ladders() {
        let x = v(&[0.0]);
        let xi = v(&[1.0]);
        assert!(Model::Strip1D.metric_e_fd(&x, &xi, &[1e-3, 1e-2]).is_err());
        assert!(Model::Strip1D.metric_e_fd(&x, &xi, &[]).is_err());
    }

    #[test]
    fn extrapolation_removes_even_terms() {
        let f = |t: f64| 2.0 + 3.0 * t * t - 5.0 * t.powi(4);
        let ts = [0.1, 0.05, 0.025];
        let xs: Vec<f64> = ts.iter().map(|t| t * t).collect();
        let vals: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
        assert_abs_diff_eq!(extrapolate_to_zero(&xs, &vals), 2.0, epsilon = 1e-13);
    }

    #[test]
    fn disc_is_strip_through_arctanh() {
        for (re, im) in [(0.1, 0.2), (-0.7, 0.1), (0.0, -0.9), (0.3, -0.5)] {
            let zeta = Complex64::new(re, im);
            let w = zeta.atanh();
            let ud = Model::Disc1D.u_max(&ComplexPoint::scalar(zeta)).unwrap();
            let us = Model::Strip1D.u_max(&ComplexPoint::scalar(w)).unwrap();
            assert_abs_diff_eq!(ud, us, epsilon = 1e-14);
        }
    }

    #[test]
    fn ellipsoid_tube_is_conjugation_symmetric() {
        let m = Model::EllipticTube(Ellipsoid::diagonal(&[1.0, 4.0]).unwrap().into());
        let z = ComplexPoint::from_slices(&[0.2, -0.1], &[0.15, 0.2]).unwrap();
        assert_abs_diff_eq!(m.u_max(&z).unwrap(), m.u_max(&z.conj()).unwrap(), epsilon = 1e-15);
    }

    #[test]
    fn schwarz_examples() {
        let (a, r) = (QUARTER_PI, QUARTER_PI);
        let extremal: Vec<(Complex64, f64)> = (1..50)
            .map(|k| {
                let z = Complex64::new(0.1 * k as f64, r * k as f64 / 50.0);
                (z, a / r * z.im)
            })
            .collect();
        let rep = schwarz_bound_check(&extremal, a, r).unwrap();
        assert_eq!(rep.max_excess, 0.0);

        let squares: Vec<(Complex64, f64)> = (1..50)
            .map(|k| {
                let z = Complex64::new(0.0, k as f64 / 50.0);
                (z, z.im * z.im)
            })
            .collect();
        let rep = schwarz_bound_check(&squares, 1.0, 1.0).unwrap();
        assert!(rep.max_excess < 0.0);

        let outside = [(Complex64::new(0.0, 2.0), 0.1)];
        assert!(schwarz_bound_check(&outside, 1.0, 1.0).is_err());
    }
}
