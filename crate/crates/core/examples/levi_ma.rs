// Finite-difference Levi matrices: plurisubharmonicity and a degenerate
// Monge-Ampère determinant off the center, and a counter-field that fails.

use pluritube::convex::{ConvexBody, Ellipsoid};
use pluritube::levi::{verify_ma_degenerate, verify_psh, CounterField, DEFAULT_MA_REL_TOL, DEFAULT_PSH_TOL};
use pluritube::models::Model;

pub fn run_example() -> pluritube::Result<()> {
    let h = 1e-3;
    let tube = Model::EllipticTube(Ellipsoid::diagonal(&[1.0, 4.0])?.into());
    let psh = verify_psh(&tube, 100, 7, h, DEFAULT_PSH_TOL)?;
    let ma = verify_ma_degenerate(&tube, 100, 7, h, DEFAULT_MA_REL_TOL)?;
    println!(
        "{}: psh pass={} worst {:.2e}; ma pass={} worst {:.2e}",
        tube.name(),
        psh.pass,
        psh.worst_value,
        ma.pass,
        ma.worst_value
    );

    let counter = CounterField::SumOfSquares { dim: 2 };
    let ma = verify_ma_degenerate(&counter, 20, 7, h, DEFAULT_MA_REL_TOL)?;
    println!("|z|^2: ma pass={} worst {:.2e}", ma.pass, ma.worst_value);

    let corrupted = CounterField::Corrupted {
        model: Model::EllipticTube(ConvexBody::unit_ball(2)),
        weight: 1.0,
    };
    let psh = verify_psh(&corrupted, 20, 7, h, DEFAULT_PSH_TOL)?;
    println!("u - |z|^2: psh pass={} worst {:.2e}", psh.pass, psh.worst_value);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
