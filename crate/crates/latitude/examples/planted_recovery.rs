//! Fit the mixed model to planted data and compare against the NMF and
//! truncated-SVD baselines.

use latitude::baselines::{run_methods, EvalConfig, Method};
use latitude::{gen_planted, latitude_fit, SolverConfig, SynthSpec};

fn main() {
    let mut spec = SynthSpec::desk_scale();
    spec.n = 120;
    spec.m = 90;
    spec.seed = 42;
    let (clean, noisy, truth) = gen_planted(&spec).unwrap();
    println!(
        "planted: {}x{} rank {} density {} noise {}",
        spec.n, spec.m, spec.k_true, spec.density, spec.noise_sigma
    );

    let cfg = SolverConfig::new(spec.k_true).with_seed(spec.seed);
    let (fact, report) = latitude_fit(&noisy, &cfg).unwrap();
    println!(
        "latitude: best error {:.4} at iteration {} ({} iterations total)",
        report.best_error,
        report.best_iteration,
        report.error_trace.len()
    );
    let first = report.error_trace.first().unwrap();
    let last = report.error_trace.last().unwrap();
    println!("error trace: {first:.4} -> {last:.4}");

    // Gate parameters stay inside [-M, M] and most should lean negative on
    // sparse data (NMF-style structure dominates).
    let bound = fact.params.bound();
    assert!(fact
        .params
        .co()
        .iter()
        .chain(fact.params.ro())
        .all(|v| v.abs() <= bound));

    // Cross-method comparison, scored against the noise-free matrix.
    let results = run_methods(
        &clean,
        &noisy,
        spec.k_true,
        &[Method::Latitude, Method::Nmf, Method::Svd],
        spec.seed,
        &EvalConfig::default(),
    )
    .unwrap();
    for r in &results {
        println!(
            "{:>8}: rel error {:.4} ({:.2}s)",
            r.method, r.rel_error, r.wall_seconds
        );
    }
    let _ = truth;
}
