//! Named verification suites run against a model file's subject.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::config::Subject;
use crate::convex::ConvexBody;
use crate::error::{Error, Result};
use crate::geodesics::{chart, extremal_disc, striptube_geodesic, GEODESIC_SAMPLE_RADIUS};
use crate::levi::{
    verify_gauge_derivative_identities, verify_ma_degenerate, verify_psh, verify_tube_levi, SafeSampler,
    ScalarField, DEFAULT_MA_REL_TOL, DEFAULT_PSH_TOL, DEFAULT_STEP,
};
use crate::maximality::{maximality_suite, MAXIMALITY_TOL};
use crate::models::{im_arctanh, schwarz_bound_check, ComplexPoint, Model, QUARTER_PI};
use crate::report::CheckReport;
use crate::sampling::{sample_member, sample_rng, uniform_in_disc, unit_direction, SafeRegion};

/// Competitors drawn per maximality run.
pub const MAXIMALITY_COMPETITORS: usize = 12;
/// Charts drawn per geodesic run; each is swept with the configured sample count.
pub const GEODESIC_CHARTS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Psh,
    Ma,
    TubeLevi,
    GaugeDerivatives,
    Maximality,
    Geodesics,
    Schwarz,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Psh,
        Suite::Ma,
        Suite::TubeLevi,
        Suite::GaugeDerivatives,
        Suite::Maximality,
        Suite::Geodesics,
        Suite::Schwarz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Psh => "psh",
            Suite::Ma => "ma",
            Suite::TubeLevi => "tube-levi",
            Suite::GaugeDerivatives => "gauge-derivatives",
            Suite::Maximality => "maximality",
            Suite::Geodesics => "geodesics",
            Suite::Schwarz => "schwarz",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite {s:?}")))
    }
}

/// Pass thresholds, one per suite plus the metric agreement warning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub psh: f64,
    pub ma: f64,
    pub tube_levi: f64,
    pub gauge_derivatives: f64,
    pub maximality: f64,
    pub geodesics: f64,
    pub schwarz: f64,
    pub metric: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            psh: DEFAULT_PSH_TOL,
            ma: DEFAULT_MA_REL_TOL,
            tube_levi: 1e-6,
            gauge_derivatives: 1e-6,
            maximality: MAXIMALITY_TOL,
            geodesics: 1e-10,
            schwarz: 1e-12,
            metric: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn get(&self, suite: Suite) -> f64 {
        match suite {
            Suite::Psh => self.psh,
            Suite::Ma => self.ma,
            Suite::TubeLevi => self.tube_levi,
            Suite::GaugeDerivatives => self.gauge_derivatives,
            Suite::Maximality => self.maximality,
            Suite::Geodesics => self.geodesics,
            Suite::Schwarz => self.schwarz,
        }
    }

    /// Sets the tolerance called `name` (a suite name or `metric`).
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::Config(format!(
                "tolerance {name} must be positive, got {value}"
            )));
        }
        let slot = match name {
            "metric" => &mut self.metric,
            other => match other.parse::<Suite>()? {
                Suite::Psh => &mut self.psh,
                Suite::Ma => &mut self.ma,
                Suite::TubeLevi => &mut self.tube_levi,
                Suite::GaugeDerivatives => &mut self.gauge_derivatives,
                Suite::Maximality => &mut self.maximality,
                Suite::Geodesics => &mut self.geodesics,
                Suite::Schwarz => &mut self.schwarz,
            },
        };
        *slot = value;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub samples: usize,
    pub h: f64,
    pub tolerances: Tolerances,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            samples: 1000,
            h: DEFAULT_STEP,
            tolerances: Tolerances::default(),
        }
    }
}

fn unsupported(suite: Suite, subject: &Subject) -> Error {
    Error::Unsupported(format!("suite {suite} does not apply to {}", subject.name()))
}

fn smooth_model(suite: Suite, subject: &Subject) -> Result<&Model> {
    let model = subject.model().ok_or_else(|| unsupported(suite, subject))?;
    if !model.is_smooth() {
        return Err(Error::Unsupported(format!(
            "suite {suite} needs a C² body, {} has a {} body",
            model.name(),
            model.body().map_or("", ConvexBody::kind)
        )));
    }
    Ok(model)
}

/// Runs one suite.
pub fn run_suite(subject: &Subject, suite: Suite, cfg: &SuiteConfig) -> Result<CheckReport> {
    if cfg.samples == 0 {
        return Err(Error::Config("sample count must be positive".into()));
    }
    if !(cfg.h > 0.0) {
        return Err(Error::Config("step must be positive".into()));
    }
    let tol = cfg.tolerances.get(suite);
    match suite {
        Suite::Psh | Suite::Ma => match subject {
            Subject::Counter(field) => levi_suite(field, suite, cfg, tol),
            Subject::Model(_) => levi_suite(smooth_model(suite, subject)?, suite, cfg, tol),
        },
        Suite::TubeLevi => {
            let model = smooth_model(suite, subject)?;
            let Model::EllipticTube(body) = model else {
                return Err(unsupported(suite, subject));
            };
            offcenter_sweep(suite, model, cfg, |z| {
                let coarse = verify_tube_levi(body, z, cfg.h)?;
                let fine = verify_tube_levi(body, z, 0.5 * cfg.h)?;
                Ok(richardson(coarse, fine))
            })
        }
        Suite::GaugeDerivatives => {
            let model = smooth_model(suite, subject)?;
            let body = match model {
                Model::EllipticTube(b) => b,
                Model::StripTube(g) => g.body(),
                _ => return Err(unsupported(suite, subject)),
            };
            let tube = Model::EllipticTube(body.clone());
            offcenter_sweep(suite, &tube, cfg, |z| {
                let c = verify_gauge_derivative_identities(body, z, cfg.h)?;
                let f = verify_gauge_derivative_identities(body, z, 0.5 * cfg.h)?;
                Ok(richardson(c.dx, f.dx)
                    .max(richardson(c.dxy, f.dxy))
                    .max(richardson(c.dxx, f.dxx)))
            })
        }
        Suite::Maximality => {
            let model = subject.model().ok_or_else(|| unsupported(suite, subject))?;
            maximality_suite(model, MAXIMALITY_COMPETITORS, cfg.samples, cfg.seed, tol)
        }
        Suite::Geodesics => {
            let model = subject.model().ok_or_else(|| unsupported(suite, subject))?;
            geodesic_suite(model, cfg, tol)
        }
        Suite::Schwarz => {
            let model = subject.model().ok_or_else(|| unsupported(suite, subject))?;
            schwarz_suite(model, cfg, tol)
        }
    }
}

fn levi_suite<F>(field: &F, suite: Suite, cfg: &SuiteConfig, tol: f64) -> Result<CheckReport>
where
    F: ScalarField + SafeSampler + Sync,
{
    if suite == Suite::Psh {
        verify_psh(field, cfg.samples, cfg.seed, cfg.h, tol)
    } else {
        verify_ma_degenerate(field, cfg.samples, cfg.seed, cfg.h, tol)
    }
}

/// Runs every suite that applies to the subject, skipping the rest.
pub fn run_all(subject: &Subject, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for suite in Suite::ALL {
        match run_suite(subject, suite, cfg) {
            Ok(r) => out.push(r),
            Err(Error::Unsupported(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Residual extrapolated to zero step from steps `h` and `h/2`, assuming
/// the `O(h²)` truncation error of central differences. What remains is the
/// defect of the identity itself.
pub fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse).abs() / 3.0
}

/// Worst residual of `check` over safe-region samples of `model`.
fn offcenter_sweep<F>(suite: Suite, model: &Model, cfg: &SuiteConfig, check: F) -> Result<CheckReport>
where
    F: Fn(&ComplexPoint) -> Result<f64> + Sync,
{
    let rows = (0..cfg.samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = sample_rng(cfg.seed, k as u64);
            let z = model.sample_safe(&mut rng, cfg.h)?;
            Ok((check(&z)?, z))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = CheckReport::new(suite.name(), model.name());
    report.samples = cfg.samples;
    report.h = cfg.h;
    report.tol = cfg.tolerances.get(suite);
    report.worst_value = 0.0;
    for (r, z) in rows {
        if r >= report.worst_value {
            report.worst_value = r;
            report.worst_point = Some(z);
        }
    }
    report.pass = report.worst_value <= report.tol;
    Ok(report)
}

/// `u(g(ζ)) = |Im arctanh ζ|` along explicit geodesic discs of the model,
/// plus the chart reconstruction `f(ζ₀) = z` for elliptic tubes.
fn geodesic_suite(model: &Model, cfg: &SuiteConfig, tol: f64) -> Result<CheckReport> {
    let mut report = CheckReport::new("geodesics", model.name());
    report.samples = GEODESIC_CHARTS * cfg.samples;
    report.tol = tol;
    for c in 0..GEODESIC_CHARTS {
        let chart_seed = cfg.seed.wrapping_add(c as u64);
        let mut rng = sample_rng(cfg.seed, c as u64);
        let z = loop {
            let z = sample_member(model, &mut rng, &SafeRegion::whole())?;
            if z.im.iter().any(|v| *v != 0.0) {
                break z;
            }
        };
        let residual = match model {
            Model::EllipticTube(body) => {
                let ch = chart(body, &z)?;
                ch.identity_residual(cfg.samples, chart_seed)?
                    .max(ch.reconstruction_residual())
            }
            Model::StripTube(gauge) => {
                // u = Im η on the upper half strip through z
                (0..cfg.samples)
                    .map(|k| {
                        let mut r = sample_rng(chart_seed, k as u64);
                        let eta = Complex64::new(r.gen_range(-2.0..2.0), r.gen_range(1e-3..QUARTER_PI));
                        let w = striptube_geodesic(gauge, &z.re, &z.im, eta)?;
                        Ok((model.u_max(&w)? - eta.im).abs())
                    })
                    .collect::<Result<Vec<f64>>>()?
                    .into_iter()
                    .fold(0.0, f64::max)
            }
            Model::Strip1D | Model::Disc1D => {
                let xi = unit_direction(&mut rng, 1);
                let disc = extremal_disc(model, &z.re, &xi)?;
                (0..cfg.samples)
                    .map(|k| {
                        let mut r = sample_rng(chart_seed, k as u64);
                        let zeta = uniform_in_disc(&mut r, GEODESIC_SAMPLE_RADIUS);
                        Ok((model.u_max(&disc.eval(zeta)?)? - im_arctanh(zeta).abs()).abs())
                    })
                    .collect::<Result<Vec<f64>>>()?
                    .into_iter()
                    .fold(0.0, f64::max)
            }
        };
        if residual >= report.worst_value {
            report.worst_value = residual;
            report.worst_point = Some(z);
        }
    }
    report.pass = report.worst_value <= tol;
    Ok(report)
}

/// Strip Schwarz bound `u(g(tanh λη)) ≤ Im η` for holomorphic discs `g`
/// through the center, on the half strip `0 < Im η < π/4`.
fn schwarz_suite(model: &Model, cfg: &SuiteConfig, tol: f64) -> Result<CheckReport> {
    let samples = (0..cfg.samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = sample_rng(cfg.seed, k as u64);
            let z = sample_member(model, &mut rng, &SafeRegion::whole())?;
            let xi = unit_direction(&mut rng, model.dim());
            let disc = extremal_disc(model, &z.re, &xi)?;
            let lambda: f64 = rng.gen_range(0.5..=1.0);
            let eta = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(1e-3..QUARTER_PI));
            let image = disc.eval((eta * lambda).tanh())?;
            let u = model.u_max(&image)?;
            Ok(((eta, u), image))
        })
        .collect::<Result<Vec<_>>>()?;
    let pairs: Vec<(Complex64, f64)> = samples.iter().map(|(p, _)| *p).collect();
    let check = schwarz_bound_check(&pairs, QUARTER_PI, QUARTER_PI)?;
    let mut report = CheckReport::new("schwarz", model.name());
    report.samples = cfg.samples;
    report.tol = tol;
    report.worst_value = check.max_excess;
    report.worst_point = samples.get(check.worst_index).map(|(_, z)| z.clone());
    report.pass = check.holds(tol);
    Ok(report)
}
