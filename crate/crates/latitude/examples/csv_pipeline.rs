//! End-to-end file pipeline: save a matrix to CSV, load it back, apply the
//! column preprocessing, fit, and write the factor files.

use latitude::io::{load_csv, preprocess, save_matrix_csv, save_vector_csv, PreprocessSpec};
use latitude::solver::fitted_alpha;
use latitude::{latitude_fit, DenseMatrix, SolverConfig};
use rand::{Rng, SeedableRng};

fn main() {
    let dir = std::env::temp_dir().join("latitude_csv_pipeline");
    std::fs::create_dir_all(&dir).unwrap();

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let a = DenseMatrix::from_vec(40, 30, (0..1200).map(|_| rng.gen::<f64>() * 10.0).collect())
        .unwrap();
    let input = dir.join("input.csv");
    save_matrix_csv(&input, &a).unwrap();

    let loaded = load_csv(&input).unwrap();
    // Shortest round-trip float formatting makes the cycle bit-exact.
    assert_eq!(loaded.matrix.values(), a.values());

    // Column preprocessing: subtract the minimum, then divide by the
    // population standard deviation. Flags mirror the CLI's --preprocess.
    let spec = PreprocessSpec::parse_flags("minsub,stddiv").unwrap();
    let prepped = preprocess(&loaded.matrix, &spec);
    assert!(prepped.values().iter().all(|&v| v >= 0.0));

    let mut cfg = SolverConfig::new(4).with_seed(3);
    cfg.niter = 10;
    let (fact, report) = latitude_fit(&prepped, &cfg).unwrap();
    println!("fit error {:.4} over {} iterations", report.best_error, cfg.niter);

    save_matrix_csv(dir.join("B.csv"), &fact.b).unwrap();
    save_matrix_csv(dir.join("C.csv"), &fact.c).unwrap();
    save_vector_csv(dir.join("co.csv"), fact.params.co()).unwrap();
    save_vector_csv(dir.join("ro.csv"), fact.params.ro()).unwrap();
    save_matrix_csv(dir.join("alpha.csv"), &fitted_alpha(&fact)).unwrap();
    println!("factor files written under {}", dir.display());
}
