// The extremal disc through an elliptic-tube point.

use num_complex::Complex64;
use pluritube::convex::{ConvexBody, Ellipsoid, Gauge, RealVector};
use pluritube::geodesics::{chart, extremal_disc, f_upper_bound, striptube_geodesic};
use pluritube::models::{im_arctanh, ComplexPoint, Model};

pub fn run_example() -> pluritube::Result<()> {
    let body: ConvexBody = Ellipsoid::diagonal(&[1.0, 4.0])?.into();
    let model = Model::EllipticTube(body.clone());
    let z = ComplexPoint::from_slices(&[0.2, -0.1], &[0.3, 0.1])?;
    let c = chart(&body, &z)?;
    println!("t1 = {:.6}, t2 = {:.6}, zeta0 = {:.6}", c.t1(), c.t2(), c.zeta0());
    println!("|f(zeta0) - z| = {:.1e}", c.reconstruction_residual());
    for zeta in [Complex64::new(0.5, 0.2), Complex64::new(-0.3, -0.6)] {
        let u = model.u_max(&c.eval(zeta)?)?;
        println!(
            "u(f({zeta})) = {u:.15}  |Im arctanh| = {:.15}",
            im_arctanh(zeta).abs()
        );
    }

    let x = RealVector::from_column_slice(&[0.1, 0.2]);
    let xi = RealVector::from_column_slice(&[1.0, -0.5]);
    let disc = extremal_disc(&model, &x, &xi)?;
    println!(
        "E = {:.12}, disc bound F <= {:.12}, g(0) = {:?}",
        model.metric_e(&x, &xi)?,
        f_upper_bound(&model, &x, &xi)?,
        disc.origin().as_slice()
    );

    let gauge = Gauge::new(ConvexBody::unit_cube(2))?;
    let w = striptube_geodesic(&gauge, &x, &xi, Complex64::new(0.7, 0.25))?;
    println!(
        "strip tube: u(f(0.7+0.25i)) = {}",
        Model::StripTube(gauge).u_max(&w)?
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
