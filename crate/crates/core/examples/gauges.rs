// Centered gauges of a few bodies, closed form against the bisection oracle.

use pluritube::convex::{BisectionParams, ConvexBody, Ellipsoid, RealVector};

pub fn run_example() -> pluritube::Result<()> {
    let bodies = [
        ("interval (-1, 2)", ConvexBody::interval(-1.0, 2.0)?),
        ("unit square", ConvexBody::unit_cube(2)),
        ("ellipsoid diag(1, 4)", Ellipsoid::diagonal(&[1.0, 4.0])?.into()),
        (
            "superellipse |x|^4 + |y/0.7|^4",
            ConvexBody::superellipse(vec![1.0, 0.7], 4.0)?,
        ),
    ];
    let params = BisectionParams::default();
    for (name, body) in &bodies {
        let n = body.dim();
        let x = RealVector::from_element(n, 0.1);
        let y = RealVector::from_fn(n, |i, _| if i == 0 { 0.5 } else { -0.3 });
        let p = body.centered_gauge(&x, &y)?;
        let oracle = body.gauge_by_bisection(&x, &y, &params)?;
        let back = body.centered_gauge(&x, &(-&y))?;
        println!(
            "{name:32} p(x, y) = {p:.12}  oracle gap {:.1e}  p(x, -y) = {back:.12}",
            (p - oracle).abs()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
