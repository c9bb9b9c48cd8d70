// Certified competitors stay below the maximal function; an inflated one
// does not.

use pluritube::convex::{ConvexBody, RealVector};
use pluritube::geodesics::chart;
use pluritube::maximality::{
    compare, geodesic_pullback_competitor, maximality_suite, slab_competitor, MAXIMALITY_TOL,
};
use pluritube::models::{ComplexPoint, Model};

pub fn run_example() -> pluritube::Result<()> {
    let body = ConvexBody::unit_ball(2);
    let model = Model::EllipticTube(body.clone());

    let slab = slab_competitor(&body, &RealVector::from_column_slice(&[0.6, 0.8]))?;
    println!("slab: max w - u = {:.2e}", compare(&model, &slab, 1000, 1)?);

    let z = ComplexPoint::from_slices(&[0.1, 0.0], &[0.2, 0.4])?;
    let geodesic = geodesic_pullback_competitor(&chart(&body, &z)?);
    println!(
        "geodesic: max w - u = {:.2e}",
        compare(&model, &geodesic, 1000, 1)?
    );
    println!(
        "geodesic x 1.01: max w - u = {:.2e}",
        compare(&model, &geodesic.scaled(1.01), 1000, 1)?
    );

    let report = maximality_suite(&model, 12, 500, 3, MAXIMALITY_TOL)?;
    println!(
        "suite: pass={} worst {:.2e} over {} samples",
        report.pass, report.worst_value, report.samples
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
