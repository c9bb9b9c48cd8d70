//! Seeded, counter-based sampling.
//!
//! Sample `k` of a sweep seeded with `seed` is drawn from its own ChaCha
//! stream, so every sample is a pure function of `(seed, k)` and parallel
//! sweeps reproduce sequential ones bit for bit.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::convex::RealVector;
use crate::error::{Error, Result};
use crate::models::{ComplexPoint, Model, QUARTER_PI};

pub type SampleRng = ChaCha8Rng;

/// Generator for sample `index` of the sweep seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box-Muller; 1 - u keeps the logarithm finite
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Uniform direction on the unit sphere of ℝⁿ.
pub fn unit_direction<R: Rng + ?Sized>(rng: &mut R, n: usize) -> RealVector {
    loop {
        let v = RealVector::from_fn(n, |_, _| standard_normal(rng));
        let norm = v.norm();
        if norm > 1e-8 {
            return v / norm;
        }
    }
}

pub fn uniform_in_box<R: Rng + ?Sized>(rng: &mut R, n: usize, half_width: f64) -> RealVector {
    RealVector::from_fn(n, |_, _| rng.gen_range(-half_width..=half_width))
}

/// Area-uniform point of the closed disc of the given radius.
pub fn uniform_in_disc<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    let theta = rng.gen::<f64>() * std::f64::consts::TAU;
    Complex64::from_polar(r, theta)
}

/// Margins that keep finite-difference stencils away from the center
/// (where `u` has a kink) and from the boundary (where derivatives blow up).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SafeRegion {
    /// Lower bound on `p(z)p(z̄)` for elliptic tubes.
    pub min_gauge_product: f64,
    /// Upper bound on `p(z)p(z̄)` for elliptic tubes.
    pub max_gauge_product: f64,
    /// Real parts stay within this fraction of the radial distance to ∂D;
    /// for the disc model, the bound on `|tanh Re η|` where `z = tanh η`.
    pub max_radial: f64,
    /// Lower bound on `u(z)`.
    pub min_u: f64,
    /// Upper bound on `u(z)` as a fraction of π/4 for strip models.
    pub max_u_fraction: f64,
    /// Half width of the box sampled for real parts when the center is ℝⁿ.
    pub real_half_width: f64,
}

impl SafeRegion {
    /// The finite-difference region for step `h`. The margins keep the
    /// five-point truncation error of the Levi form below 1e-6 at `h = 1e-3`
    /// on round bodies and on ellipsoids with axis ratio 2; more elongated
    /// bodies need a smaller step.
    pub fn for_step(h: f64) -> Self {
        Self {
            min_gauge_product: 0.2,
            max_gauge_product: 0.9,
            max_radial: 0.4,
            min_u: (10.0 * h).max(0.4),
            max_u_fraction: 0.9,
            real_half_width: 1.0,
        }
    }

    /// Essentially the whole model, used by range and identity sweeps.
    pub fn whole() -> Self {
        Self {
            min_gauge_product: 0.0,
            max_gauge_product: 0.999,
            max_radial: 0.999,
            min_u: 0.0,
            max_u_fraction: 0.999,
            real_half_width: 2.0,
        }
    }
}

const MAX_ATTEMPTS: usize = 1000;

/// Draws a member point of `model` inside `region`.
pub fn sample_member<R: Rng + ?Sized>(
    model: &Model,
    rng: &mut R,
    region: &SafeRegion,
) -> Result<ComplexPoint> {
    let u_hi = region.max_u_fraction * QUARTER_PI;
    if region.min_u >= u_hi {
        return Err(Error::SamplingFailure(0));
    }
    let sign = |rng: &mut R| if rng.gen::<bool>() { 1.0 } else { -1.0 };
    match model {
        Model::Strip1D => {
            let x = rng.gen_range(-region.real_half_width..=region.real_half_width);
            let t = rng.gen_range(region.min_u..u_hi);
            Ok(ComplexPoint::scalar(Complex64::new(x, sign(rng) * t)))
        }
        Model::Disc1D => {
            // tanh maps the strip |Im η| < π/4 onto the disc with u = |Im η|
            // and the real line onto the center
            let reach = region.max_radial.atanh();
            let s = rng.gen_range(-reach..=reach);
            let t = rng.gen_range(region.min_u..u_hi);
            Ok(ComplexPoint::scalar(Complex64::new(s, sign(rng) * t).tanh()))
        }
        Model::StripTube(gauge) => {
            let n = gauge.dim();
            let x = uniform_in_box(rng, n, region.real_half_width);
            let d = unit_direction(rng, n);
            let t = rng.gen_range(region.min_u..u_hi);
            let y = &d * (t / gauge.eval(&d)?);
            ComplexPoint::new(x, y)
        }
        Model::EllipticTube(body) => {
            let n = body.dim();
            let x0 = body.interior_point();
            for _ in 0..MAX_ATTEMPTS {
                let d1 = unit_direction(rng, n);
                let reach = body.centered_gauge(&x0, &d1)?;
                let r = region.max_radial * rng.gen::<f64>();
                let x = &x0 + &d1 * (r / reach);
                let d2 = unit_direction(rng, n);
                let up = body.centered_gauge(&x, &d2)?;
                let down = body.centered_gauge(&x, &(-&d2))?;
                let target = rng.gen_range(region.min_gauge_product..=region.max_gauge_product);
                if target <= 0.0 {
                    continue;
                }
                let s = (target / (up * down)).sqrt();
                let z = ComplexPoint::new(x, d2 * s)?;
                if model.u_max(&z)? >= region.min_u {
                    return Ok(z);
                }
            }
            Err(Error::SamplingFailure(MAX_ATTEMPTS))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<f64> = (0..4).map(|_| sample_rng(42, 7).gen()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        let b: f64 = sample_rng(42, 8).gen();
        assert_ne!(a[0], b);
    }

    #[test]
    fn directions_are_unit() {
        let mut rng = sample_rng(1, 0);
        for n in 1..5 {
            let d = unit_direction(&mut rng, n);
            assert!((d.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn disc_samples_stay_inside() {
        let mut rng = sample_rng(3, 0);
        for _ in 0..1000 {
            assert!(uniform_in_disc(&mut rng, 0.95).norm() <= 0.95);
        }
    }
}
