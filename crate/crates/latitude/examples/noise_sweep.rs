//! Sweep the noise level on planted mixed data and summarize per method.

use latitude::baselines::{EvalConfig, Method};
use latitude::{sweep, SweepAxis, SynthSpec};

fn main() {
    let mut spec = SynthSpec::desk_scale();
    spec.n = 100;
    spec.m = 80;
    spec.k_true = 4;
    spec.seed = 7;

    let mut eval = EvalConfig::default();
    eval.niter = 15;

    let table = sweep(
        &spec,
        SweepAxis::Noise,
        &[0.0, 0.05, 0.1],
        &[Method::Latitude, Method::Nmf, Method::Svd],
        3,
        &eval,
    )
    .unwrap();

    // Raw rows go to CSV; the summary aggregates repeats per cell.
    let mut csv = Vec::new();
    table.write_csv(&mut csv).unwrap();
    println!("{} raw rows", table.rows.len());

    println!("{:>6} {:>10} {:>12} {:>12}", "noise", "method", "mean rel", "std rel");
    for s in table.summarize() {
        println!(
            "{:>6} {:>10} {:>12.4} {:>12.4}",
            s.axis_value, s.method, s.mean_rel_error, s.std_rel_error
        );
    }
}
