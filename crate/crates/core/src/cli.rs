//! Command-line front end.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage or configuration
//! error, 3 domain error (point outside the model, base point outside the
//! center).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::config::{load_subject, Subject};
use crate::convex::RealVector;
use crate::error::{Error, Result};
use crate::geodesics::{chart, f_upper_bound};
use crate::models::{ComplexPoint, Model, DEFAULT_FD_STEPS};
use crate::suites::{run_all, run_suite, Suite, SuiteConfig, Tolerances};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "pluritube",
    version,
    about = "Maximal plurisubharmonic models and their verifiers"
)]
pub struct Cli {
    /// JSON model file.
    #[arg(long, global = true)]
    pub model: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1000)]
    pub samples: usize,
    /// Finite-difference step.
    #[arg(long, global = true, default_value_t = 1e-3)]
    pub step: f64,
    /// Tolerance override, e.g. `--tol psh=1e-5`; repeatable.
    #[arg(long = "tol", global = true, value_name = "NAME=V", value_parser = parse_tol)]
    pub tol: Vec<(String, f64)>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Membership, u and the two centered gauges at a point.
    Eval {
        /// Complex coordinates separated by commas, e.g. `0.3+0.2i,-0.1i`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Closed-form and finite-difference E, and the disc upper bound for F.
    Metric {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
    },
    /// Geodesic chart through a point of an elliptic tube.
    Geodesic {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Runs a verification suite, or `all` applicable suites.
    Verify {
        /// psh, ma, tube-levi, gauge-derivatives, maximality, geodesics, schwarz or all.
        suite: String,
    },
    /// CSV grid of u over an affine real 2-plane.
    Slice {
        /// Two indices into `(Re z_1..Re z_n, Im z_1..Im z_n)`.
        #[arg(long, default_value = "0,1")]
        plane: String,
        /// Center of the grid as `2n` reals, real parts first; zero by default.
        #[arg(long, allow_hyphen_values = true)]
        center: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        half_width: f64,
        #[arg(long, default_value_t = 100)]
        resolution: usize,
    },
}

fn parse_tol(s: &str) -> std::result::Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or("expected NAME=V")?;
    let v: f64 = value.trim().parse().map_err(|e| format!("{value}: {e}"))?;
    Ok((name.trim().to_string(), v))
}

fn parse_reals(s: &str) -> Result<RealVector> {
    let vals = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("{t:?}: {e}")))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(RealVector::from_vec(vals))
}

fn parse_point(s: &str) -> Result<ComplexPoint> {
    let coords = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<Complex64>()
                .map_err(|_| Error::Config(format!("{t:?} is not a complex number")))
        })
        .collect::<Result<Vec<Complex64>>>()?;
    let re = RealVector::from_iterator(coords.len(), coords.iter().map(|c| c.re));
    let im = RealVector::from_iterator(coords.len(), coords.iter().map(|c| c.im));
    ComplexPoint::new(re, im)
}

/// Exit code for an error raised while running a command.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotMember
        | Error::NotInCenter
        | Error::OutsideBody
        | Error::OutOfDomain(_)
        | Error::ApexDirection
        | Error::TooCloseToBoundary(_)
        | Error::NonFinite
        | Error::StencilEscape
        | Error::NonConvergent(_) => EXIT_DOMAIN,
        Error::DimensionMismatch { .. }
        | Error::InvalidBody(_)
        | Error::Unsupported(_)
        | Error::Certification(_)
        | Error::SamplingFailure(_)
        | Error::Config(_) => EXIT_CONFIG,
    }
}

struct Session<'a> {
    cli: &'a Cli,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Session<'_> {
    fn emit(&mut self, text: &str) -> Result<()> {
        let io = |e: std::io::Error| Error::Config(format!("cannot write output: {e}"));
        match &self.cli.out {
            Some(path) => std::fs::write(path, text).map_err(io),
            None => self.stdout.write_all(text.as_bytes()).map_err(io),
        }
    }

    fn warn(&mut self, msg: &str) {
        let _ = writeln!(self.stderr, "warning: {msg}");
    }

    fn subject(&self) -> Result<Subject> {
        let path: &Path = self
            .cli
            .model
            .as_deref()
            .ok_or_else(|| Error::Config("--model PATH is required".into()))?;
        load_subject(path)
    }

    fn model(&self) -> Result<Model> {
        match self.subject()? {
            Subject::Model(m) => Ok(m),
            Subject::Counter(_) => Err(Error::Config(
                "counter fields are only accepted by `verify psh` and `verify ma`".into(),
            )),
        }
    }

    fn suite_config(&self) -> Result<SuiteConfig> {
        let mut tolerances = Tolerances::default();
        for (name, v) in &self.cli.tol {
            tolerances.set(name, *v)?;
        }
        if self.cli.samples == 0 {
            return Err(Error::Config("--samples must be positive".into()));
        }
        if !(self.cli.step > 0.0 && self.cli.step.is_finite()) {
            return Err(Error::Config("--step must be positive".into()));
        }
        Ok(SuiteConfig {
            seed: self.cli.seed,
            samples: self.cli.samples,
            h: self.cli.step,
            tolerances,
        })
    }

    fn run(&mut self) -> Result<i32> {
        let cfg = self.suite_config()?;
        match &self.cli.command {
            Command::Eval { point } => self.eval(&parse_point(point)?),
            Command::Metric { x, xi } => self.metric(&parse_reals(x)?, &parse_reals(xi)?, &cfg),
            Command::Geodesic { point } => self.geodesic(&parse_point(point)?),
            Command::Verify { suite } => self.verify(suite, &cfg),
            Command::Slice {
                plane,
                center,
                half_width,
                resolution,
            } => self.slice(plane, center.as_deref(), *half_width, *resolution),
        }
    }

    fn eval(&mut self, z: &ComplexPoint) -> Result<i32> {
        let model = self.model()?;
        let member = model.member(z)?;
        let (p, p_bar) = match &model {
            Model::EllipticTube(b) if b.contains(&z.re)? => (
                Some(b.centered_gauge(&z.re, &z.im)?),
                Some(b.centered_gauge(&z.re, &(-&z.im))?),
            ),
            Model::StripTube(g) => (Some(g.eval(&z.im)?), Some(g.eval(&(-&z.im))?)),
            _ => (None, None),
        };
        let u = if member { Some(model.u_max(z)?) } else { None };
        self.emit(&format!(
            "{}\n",
            json!({"member": member, "u": u, "p": p, "p_bar": p_bar})
        ))?;
        if member {
            Ok(EXIT_PASS)
        } else {
            Err(Error::NotMember)
        }
    }

    fn metric(&mut self, x: &RealVector, xi: &RealVector, cfg: &SuiteConfig) -> Result<i32> {
        let model = self.model()?;
        let e_closed = model.metric_e(x, xi)?;
        let e_fd = model.metric_e_fd(x, xi, &DEFAULT_FD_STEPS)?;
        let f_upper = if xi.iter().all(|v| *v == 0.0) {
            0.0
        } else {
            f_upper_bound(&model, x, xi)?
        };
        if (e_closed - e_fd).abs() > cfg.tolerances.metric {
            self.warn(&format!(
                "closed-form E = {e_closed} and finite-difference E = {e_fd} differ by more than {}",
                cfg.tolerances.metric
            ));
        }
        self.emit(&format!(
            "{}\n",
            json!({"E_closed": e_closed, "E_fd": e_fd, "F_upper": f_upper})
        ))?;
        Ok(EXIT_PASS)
    }

    fn geodesic(&mut self, z: &ComplexPoint) -> Result<i32> {
        let model = self.model()?;
        let Model::EllipticTube(body) = &model else {
            return Err(Error::Unsupported(format!(
                "geodesic charts exist for elliptic tubes, not {}",
                model.name()
            )));
        };
        let c = chart(body, z)?;
        let doc = json!({
            "chart": c.record()?,
            "identity_residual": c.identity_residual(self.cli.samples, self.cli.seed)?,
        });
        self.emit(&format!("{doc}\n"))?;
        Ok(EXIT_PASS)
    }

    fn verify(&mut self, suite: &str, cfg: &SuiteConfig) -> Result<i32> {
        let subject = self.subject()?;
        let (text, pass) = if suite == "all" {
            let reports = run_all(&subject, cfg)?;
            let pass = reports.iter().all(|r| r.pass);
            #[derive(Serialize)]
            struct All<'a> {
                suite: &'a str,
                model: String,
                pass: bool,
                reports: &'a [crate::report::CheckReport],
            }
            let doc = All {
                suite: "all",
                model: subject.name(),
                pass,
                reports: &reports,
            };
            (to_json(&doc)?, pass)
        } else {
            let report = run_suite(&subject, suite.parse::<Suite>()?, cfg)?;
            (to_json(&report)?, report.pass)
        };
        self.emit(&format!("{text}\n"))?;
        Ok(if pass { EXIT_PASS } else { EXIT_FAIL })
    }

    fn slice(
        &mut self,
        plane: &str,
        center: Option<&str>,
        half_width: f64,
        resolution: usize,
    ) -> Result<i32> {
        let model = self.model()?;
        let n = model.dim();
        let idx: Vec<usize> = plane
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Config(format!("--plane: {e}")))
            })
            .collect::<Result<_>>()?;
        let [i, j] = idx[..] else {
            return Err(Error::Config("--plane takes two indices".into()));
        };
        if i == j || i >= 2 * n || j >= 2 * n {
            return Err(Error::Config(format!(
                "--plane indices must be distinct and below {}",
                2 * n
            )));
        }
        if i < n && j < n {
            return Err(Error::Config(
                "--plane needs at least one imaginary coordinate".into(),
            ));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::Config("--half-width must be positive".into()));
        }
        let base = match center {
            Some(c) => parse_reals(c)?,
            None => RealVector::zeros(2 * n),
        };
        if base.len() != 2 * n {
            return Err(Error::Config(format!("--center needs {} reals", 2 * n)));
        }
        let offset = |k: usize| {
            if resolution == 0 {
                0.0
            } else {
                -half_width + 2.0 * half_width * k as f64 / resolution as f64
            }
        };
        let mut csv = String::from("c1,c2,member,u\n");
        for a in 0..=resolution {
            for b in 0..=resolution {
                let mut v = base.clone();
                v[i] += offset(a);
                v[j] += offset(b);
                let z = ComplexPoint::new(v.rows(0, n).into_owned(), v.rows(n, n).into_owned())?;
                let member = model.member(&z)?;
                let u = if member {
                    model.u_max(&z)?.to_string()
                } else {
                    String::new()
                };
                csv.push_str(&format!("{},{},{},{}\n", v[i], v[j], u8::from(member), u));
            }
        }
        self.emit(&csv)?;
        Ok(EXIT_PASS)
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Config(e.to_string()))
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut session = Session {
        cli: &cli,
        stdout,
        stderr,
    };
    match session.run() {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(session.stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
