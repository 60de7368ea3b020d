//! The experiment layer: fixtures, manifests, and the determinism
//! contract, driven through the library API rather than the CLI.
//!
//! Run with `cargo run --example experiment_runs`.

use hadamard::experiment::{fixture, fixtures, run_fixture};

fn main() -> hadamard::Result<()> {
    println!("{} built-in fixtures:", fixtures().len());
    for f in fixtures() {
        println!("  {}", f.name);
    }

    // Run one fixture twice in serial mode; data files must agree byte
    // for byte, and the manifest digest pins the exact config.
    let name = "h2-rotation-period5";
    let config = fixture(name)?.config;
    println!(
        "\n{name}: scenario {}, seed {}, digest {}",
        config.scenario.kind(),
        config.seed,
        config.digest()?
    );

    let base = std::env::temp_dir().join("experiment_runs_example");
    let first = run_fixture(name, &base.join("first"), true, None)?;
    let second = run_fixture(name, &base.join("second"), true, None)?;
    for check in &first.manifest.checks {
        println!(
            "  [{}] {} = {:.6e} {} {:.6e}",
            if check.pass { "ok" } else { "FAIL" },
            check.name,
            check.value,
            check.op,
            check.threshold
        );
    }
    println!("passed = {}", first.manifest.passed);

    let mut identical = true;
    for (a, b) in first.data_files.iter().zip(&second.data_files) {
        identical &= std::fs::read(a)? == std::fs::read(b)?;
    }
    println!("two serial runs, data files byte-identical: {identical}");

    // A different seed changes the digest, and with it the data.
    let reseeded = run_fixture(name, &base.join("reseeded"), true, Some(99))?;
    println!(
        "seed 99 digest differs: {}",
        reseeded.manifest.config_digest != first.manifest.config_digest
    );
    std::fs::remove_dir_all(&base).ok();
    Ok(())
}
