//! Certified competitors `w` for the class of plurisubharmonic functions
//! below the maximal function, and pointwise comparison `w ≤ u`.
//!
//! Every competitor is the pullback of a one-variable maximal function by a
//! holomorphic map into the strip or the disc, so membership in the class is
//! guaranteed by construction rather than tested.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::convex::{ConvexBody, Gauge, RealVector};
use crate::error::{check_dim, Error, Result};
use crate::geodesics::{GeodesicChart, GEODESIC_SAMPLE_RADIUS};
use crate::models::{im_arctanh, ComplexPoint, Model};
use crate::report::CheckReport;
use crate::sampling::{sample_member, sample_rng, uniform_in_disc, unit_direction, SafeRegion};

/// Largest tolerated `w − u`.
pub const MAXIMALITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub enum CompetitorKind {
    /// `|Im arctanh φ(a·z)|` with `φ` the affine map of `(α, β)` onto `(−1, 1)`.
    SlabPullback { a: RealVector, alpha: f64, beta: f64 },
    /// `|Im arctanh ζ|` at `z = f(ζ)` on a geodesic disc.
    GeodesicPullback { chart: Box<GeodesicChart> },
    /// `|Im(c·z)|`.
    LinearStripPullback { c: RealVector },
}

#[derive(Debug, Clone)]
pub struct Competitor {
    kind: CompetitorKind,
    scale: f64,
}

impl Competitor {
    pub fn kind(&self) -> &CompetitorKind {
        &self.kind
    }

    pub fn label(&self) -> &'static str {
        match self.kind {
            CompetitorKind::SlabPullback { .. } => "slab",
            CompetitorKind::GeodesicPullback { .. } => "geodesic",
            CompetitorKind::LinearStripPullback { .. } => "linear-strip",
        }
    }

    /// The same function multiplied by `factor`. For `factor > 1` the result
    /// is no longer certified; counter-tests use it to make sure violations
    /// are caught.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            kind: self.kind.clone(),
            scale: self.scale * factor,
        }
    }

    pub fn eval(&self, z: &ComplexPoint) -> Result<f64> {
        let w = match &self.kind {
            CompetitorKind::SlabPullback { a, alpha, beta } => {
                check_dim(a.len(), z.dim())?;
                let s = z.pair_real(a);
                let zeta = (s * 2.0 - Complex64::new(alpha + beta, 0.0)) / (beta - alpha);
                if !(zeta.norm() < 1.0) {
                    return Err(Error::OutOfDomain("a·z leaves the slab disc".into()));
                }
                im_arctanh(zeta).abs()
            }
            CompetitorKind::GeodesicPullback { chart } => im_arctanh(chart.preimage(z)?).abs(),
            CompetitorKind::LinearStripPullback { c } => {
                check_dim(c.len(), z.dim())?;
                c.dot(&z.im).abs()
            }
        };
        Ok(self.scale * w)
    }

    /// Checks that the competitor belongs to the class of `model`.
    pub fn certify(&self, model: &Model) -> Result<()> {
        match (&self.kind, model) {
            (CompetitorKind::SlabPullback { a, alpha, beta }, _) => {
                check_dim(model.dim(), a.len())?;
                let (lo, hi) = match model {
                    Model::EllipticTube(body) => slab_bounds(body, a)?,
                    Model::Disc1D => (-a[0].abs(), a[0].abs()),
                    _ => return Err(unsupported(self, model)),
                };
                if lo < *alpha || hi > *beta {
                    return Err(Error::Certification(format!(
                        "slab ({alpha}, {beta}) does not contain the body's image ({lo}, {hi})"
                    )));
                }
                Ok(())
            }
            (CompetitorKind::GeodesicPullback { chart }, Model::EllipticTube(body)) => {
                check_dim(body.dim(), chart.point().dim())
            }
            (CompetitorKind::LinearStripPullback { c }, Model::StripTube(gauge)) => certify_linear(gauge, c),
            (CompetitorKind::LinearStripPullback { c }, Model::Strip1D) => {
                check_dim(1, c.len())?;
                if c[0].abs() > 1.0 {
                    return Err(Error::Certification(format!("|c| = {} exceeds 1", c[0].abs())));
                }
                Ok(())
            }
            _ => Err(unsupported(self, model)),
        }
    }
}

fn unsupported(w: &Competitor, model: &Model) -> Error {
    Error::Unsupported(format!("{} competitor on {}", w.label(), model.name()))
}

/// `(inf a·x, sup a·x)` over the body.
fn slab_bounds(body: &ConvexBody, a: &RealVector) -> Result<(f64, f64)> {
    Ok((-body.support(&(-a))?, body.support(a)?))
}

/// Pullback of the disc function through `z ↦ φ(a·z)`.
pub fn slab_competitor(body: &ConvexBody, a: &RealVector) -> Result<Competitor> {
    check_dim(body.dim(), a.len())?;
    if a.iter().all(|v| *v == 0.0) {
        return Err(Error::Certification("slab direction is zero".into()));
    }
    let (alpha, beta) = slab_bounds(body, a)?;
    if !(alpha.is_finite() && beta.is_finite() && alpha < beta) {
        return Err(Error::InvalidBody(format!("degenerate slab ({alpha}, {beta})")));
    }
    Ok(Competitor {
        kind: CompetitorKind::SlabPullback {
            a: a.clone(),
            alpha,
            beta,
        },
        scale: 1.0,
    })
}

fn certify_linear(gauge: &Gauge, c: &RealVector) -> Result<()> {
    check_dim(gauge.dim(), c.len())?;
    // |c·y| ≤ μ(y) for all y iff c and −c have support at most 1 on the unit ball of μ
    let body = gauge.body();
    let bound = body.support(c)?.max(body.support(&(-c))?);
    if bound > 1.0 {
        return Err(Error::Certification(format!("c has dual gauge {bound}, above 1")));
    }
    Ok(())
}

/// Pullback of the strip function through `z ↦ c·z`.
pub fn linear_strip_competitor(gauge: &Gauge, c: &RealVector) -> Result<Competitor> {
    certify_linear(gauge, c)?;
    Ok(Competitor {
        kind: CompetitorKind::LinearStripPullback { c: c.clone() },
        scale: 1.0,
    })
}

/// The disc function transported along a geodesic disc; defined only on the
/// image of the disc, where it coincides with `u`.
pub fn geodesic_pullback_competitor(chart: &GeodesicChart) -> Competitor {
    Competitor {
        kind: CompetitorKind::GeodesicPullback {
            chart: Box::new(chart.clone()),
        },
        scale: 1.0,
    }
}

/// Sample `k` of a comparison: member points of the model, or points of the
/// disc image for geodesic competitors.
fn comparison_point(model: &Model, w: &Competitor, seed: u64, k: usize) -> Result<ComplexPoint> {
    let mut rng = sample_rng(seed, k as u64);
    match &w.kind {
        CompetitorKind::GeodesicPullback { chart } => {
            chart.eval(uniform_in_disc(&mut rng, GEODESIC_SAMPLE_RADIUS))
        }
        _ => sample_member(model, &mut rng, &SafeRegion::whole()),
    }
}

/// Largest `w(z) − u(z)` over the samples, with the point attaining it.
pub fn worst_violation(
    model: &Model,
    w: &Competitor,
    nsamples: usize,
    seed: u64,
) -> Result<(f64, Option<ComplexPoint>)> {
    if w.scale <= 1.0 {
        w.certify(model)?;
    }
    let gaps = (0..nsamples)
        .into_par_iter()
        .map(|k| {
            let z = comparison_point(model, w, seed, k)?;
            Ok((w.eval(&z)? - model.u_max(&z)?, z))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(gaps
        .into_iter()
        .fold((f64::NEG_INFINITY, None), |best, (gap, z)| {
            if gap > best.0 {
                (gap, Some(z))
            } else {
                best
            }
        }))
}

/// Largest `w − u` over `nsamples` seeded points.
pub fn compare(model: &Model, w: &Competitor, nsamples: usize, seed: u64) -> Result<f64> {
    Ok(worst_violation(model, w, nsamples, seed)?.0)
}

/// Certified competitors for `model`, drawn from seed `seed`.
///
/// Elliptic tubes get slab pullbacks in random directions plus geodesic
/// pullbacks through random points; strip tubes get linear pullbacks scaled
/// to the edge of admissibility.
pub fn random_competitors(model: &Model, count: usize, seed: u64) -> Result<Vec<Competitor>> {
    let n = model.dim();
    (0..count)
        .map(|k| {
            let mut rng = sample_rng(seed, k as u64);
            let d = unit_direction(&mut rng, n);
            match model {
                Model::EllipticTube(body) => {
                    if k % 2 == 0 {
                        slab_competitor(body, &d)
                    } else {
                        let z = sample_member(model, &mut rng, &SafeRegion::whole())?;
                        if z.im.iter().all(|v| *v == 0.0) {
                            return slab_competitor(body, &d);
                        }
                        Ok(geodesic_pullback_competitor(&crate::geodesics::chart(body, &z)?))
                    }
                }
                Model::Disc1D => Ok(Competitor {
                    kind: CompetitorKind::SlabPullback {
                        a: d,
                        alpha: -1.0,
                        beta: 1.0,
                    },
                    scale: 1.0,
                }),
                Model::StripTube(gauge) => {
                    let body = gauge.body();
                    let dual = body.support(&d)?.max(body.support(&(-&d))?);
                    linear_strip_competitor(gauge, &(d / dual))
                }
                Model::Strip1D => Ok(Competitor {
                    kind: CompetitorKind::LinearStripPullback { c: d },
                    scale: 1.0,
                }),
            }
        })
        .collect()
}

/// Runs `count` random competitors against `model` and reports the worst
/// violation.
pub fn maximality_suite(
    model: &Model,
    count: usize,
    nsamples: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    let mut report = CheckReport::new("maximality", model.name());
    report.samples = count * nsamples;
    report.tol = tol;
    report.worst_value = f64::NEG_INFINITY;
    for (k, w) in random_competitors(model, count, seed)?.iter().enumerate() {
        let (gap, z) = worst_violation(model, w, nsamples, seed.wrapping_add(k as u64 + 1))?;
        if gap > report.worst_value {
            report.worst_value = gap;
            report.worst_point = z;
        }
    }
    report.pass = report.worst_value <= tol;
    Ok(report)
}
