// Drives the command line over the bundled model files.

use std::path::PathBuf;

use pluritube::cli;

pub fn run_example() -> pluritube::Result<()> {
    let models = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models");
    let runs: [(&str, &[&str]); 4] = [
        ("ball-tube.json", &["eval", "--point", "0.3i,0.1"]),
        ("skew-strip-tube.json", &["metric", "--x", "0", "--xi", "-1"]),
        ("ellipsoid-tube.json", &["verify", "ma", "--samples", "50"]),
        ("sum-of-squares.json", &["verify", "ma", "--samples", "5"]),
    ];
    for (file, args) in runs {
        let path = models.join(file);
        let mut argv = vec!["pluritube", "--model", path.to_str().unwrap_or_default()];
        argv.extend_from_slice(args);
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = cli::run(argv, &mut out, &mut err);
        let first = String::from_utf8_lossy(&out);
        let first = first.lines().next().unwrap_or("");
        println!("{file} {}: exit {code}: {first}", args.join(" "));
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
