// The strip Schwarz bound `u ≤ (a/r)·Im z`, on its extremal case and on a
// pulled-back maximal function.

use num_complex::Complex64;
use pluritube::convex::{ConvexBody, RealVector};
use pluritube::geodesics::extremal_disc;
use pluritube::models::{schwarz_bound_check, Model, QUARTER_PI};

pub fn run_example() -> pluritube::Result<()> {
    let model = Model::EllipticTube(ConvexBody::unit_ball(2));
    let disc = extremal_disc(
        &model,
        &RealVector::from_column_slice(&[0.2, 0.1]),
        &RealVector::from_column_slice(&[1.0, 1.0]),
    )?;
    let mut samples = Vec::new();
    for i in 1..40 {
        for re in [-1.0, 0.0, 2.0] {
            let eta = Complex64::new(re, QUARTER_PI * i as f64 / 40.0);
            samples.push((eta, model.u_max(&disc.eval(eta.tanh())?)?));
        }
    }
    let report = schwarz_bound_check(&samples, QUARTER_PI, QUARTER_PI)?;
    println!(
        "pulled back along the extremal disc: max excess {:.2e}",
        report.max_excess
    );

    let extremal: Vec<_> = samples.iter().map(|(eta, _)| (*eta, eta.im)).collect();
    println!(
        "extremal case: max excess {:.2e}",
        schwarz_bound_check(&extremal, 1.0, 1.0)?.max_excess
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
