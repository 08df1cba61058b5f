//! The three matrix products side by side, and the exact-reconstruction
//! construction for data in [1, 2].

use latitude::{
    constant_factor_alpha, matmul, maxtimes_product, mixed_product_with_alpha, DenseMatrix,
};

fn main() {
    let b = DenseMatrix::from_rows(&[vec![0.9, 0.2], vec![0.4, 0.8], vec![0.1, 0.5]]).unwrap();
    let c = DenseMatrix::from_rows(&[vec![0.7, 0.3, 0.9], vec![0.2, 0.8, 0.4]]).unwrap();

    let linear = matmul(&b, &c).unwrap();
    let tropical = maxtimes_product(&b, &c).unwrap();

    println!("linear product BC:");
    print_matrix(&linear);
    println!("max-times product B (x) C:");
    print_matrix(&tropical);

    // The mixed product interpolates between the two, entrywise, and is
    // always sandwiched by them.
    let alpha = DenseMatrix::from_vec(3, 3, vec![0.5; 9]).unwrap();
    let mixed = mixed_product_with_alpha(&b, &c, &alpha).unwrap();
    println!("mixed product at alpha = 0.5:");
    print_matrix(&mixed);
    for i in 0..3 {
        for j in 0..3 {
            assert!(tropical.get(i, j) <= mixed.get(i, j));
            assert!(mixed.get(i, j) <= linear.get(i, j));
        }
    }

    // With constant sqrt(3)/2 factors at k = 4 the bracket [3/4, 3] covers
    // [1, 2], so any such matrix is reproduced exactly by a suitable alpha.
    let v = 3f64.sqrt() / 2.0;
    let bb = DenseMatrix::from_vec(2, 4, vec![v; 8]).unwrap();
    let cc = DenseMatrix::from_vec(4, 3, vec![v; 12]).unwrap();
    let target =
        DenseMatrix::from_rows(&[vec![1.0, 1.5, 2.0], vec![1.25, 1.75, 1.1]]).unwrap();
    let alpha = constant_factor_alpha(&target, &bb, &cc).unwrap();
    let rebuilt = mixed_product_with_alpha(&bb, &cc, &alpha).unwrap();
    println!("exact reconstruction of a [1,2]-valued matrix:");
    print_matrix(&rebuilt);
}

fn print_matrix(m: &DenseMatrix) {
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|v| format!("{v:.4}")).collect();
        println!("  [{}]", row.join(", "));
    }
}
