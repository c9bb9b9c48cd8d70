// The Levi form of the elliptic-tube function against gauge Hessians, and
// the real-derivative identities of the centered gauge, at two steps.

use nalgebra::DMatrix;
use pluritube::convex::{ConvexBody, Ellipsoid, RealVector};
use pluritube::levi::{verify_gauge_derivative_identities, verify_tube_levi};
use pluritube::models::ComplexPoint;

pub fn run_example() -> pluritube::Result<()> {
    let body: ConvexBody = Ellipsoid::new(
        DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]),
        RealVector::from_column_slice(&[0.1, -0.2]),
    )?
    .into();
    let z = ComplexPoint::from_slices(&[0.2, -0.1], &[0.3, 0.2])?;
    let coarse = verify_tube_levi(&body, &z, 2e-3)?;
    let fine = verify_tube_levi(&body, &z, 1e-3)?;
    println!(
        "tube Levi residual {coarse:.3e} -> {fine:.3e}, ratio {:.3}",
        coarse / fine
    );

    let coarse = verify_gauge_derivative_identities(&body, &z, 2e-3)?;
    let fine = verify_gauge_derivative_identities(&body, &z, 1e-3)?;
    println!("dx  {:.3e} -> {:.3e}", coarse.dx, fine.dx);
    println!("dxy {:.3e} -> {:.3e}", coarse.dxy, fine.dxy);
    println!("dxx {:.3e} -> {:.3e}", coarse.dxx, fine.dxx);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
