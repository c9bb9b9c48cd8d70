// The maximal function and the pseudo-metric `E` on each model.

use num_complex::Complex64;
use pluritube::convex::{ConvexBody, Gauge, RealVector};
use pluritube::models::{ComplexPoint, Model, DEFAULT_FD_STEPS};

pub fn run_example() -> pluritube::Result<()> {
    let v = |c: &[f64]| RealVector::from_column_slice(c);
    let cases = [
        (Model::Strip1D, v(&[0.0]), v(&[1.0])),
        (Model::Disc1D, v(&[0.5]), v(&[1.0])),
        (
            Model::StripTube(Gauge::new(ConvexBody::interval(-1.0, 2.0)?)?),
            v(&[0.0]),
            v(&[-1.0]),
        ),
        (
            Model::EllipticTube(ConvexBody::interval(-1.0, 1.0)?),
            v(&[0.5]),
            v(&[1.0]),
        ),
        (
            Model::EllipticTube(ConvexBody::unit_ball(2)),
            v(&[0.0, 0.0]),
            v(&[1.0, 0.0]),
        ),
    ];
    for (model, x, xi) in &cases {
        let e = model.metric_e(x, xi)?;
        let fd = model.metric_e_fd(x, xi, &DEFAULT_FD_STEPS)?;
        println!(
            "{:12} E({x:?}, {xi:?}) = {e:.12}  slope {fd:.12}",
            model.name(),
            x = x.as_slice(),
            xi = xi.as_slice()
        );
    }

    // the interval tube and the disc carry the same maximal function
    let tube = Model::EllipticTube(ConvexBody::interval(-1.0, 1.0)?);
    let z = ComplexPoint::scalar(Complex64::new(0.3, 0.4));
    println!(
        "u_tube(0.3+0.4i) = {:.15}, u_disc = {:.15}",
        tube.u_max(&z)?,
        Model::Disc1D.u_max(&z)?
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
