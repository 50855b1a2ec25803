mod common;

use proptest::prelude::*;
use trilab::sparse::{
    coo_to_csr, csr_to_sell, gen_laplacian_5pt, gen_random_spd, parse_matrix_market, permute_system,
    read_csr_cache, read_matrix_market, write_csr_cache, write_matrix_market, CsrMatrix,
    MtxSymmetry, Permutation,
};

fn arb_permutation(max_n: usize) -> impl Strategy<Value = Vec<usize>> {
    (1..max_n).prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())
}

fn arb_spd() -> impl Strategy<Value = CsrMatrix> {
    (2usize..60, 0.0f64..0.3, any::<u64>())
        .prop_map(|(n, density, seed)| gen_random_spd(n, density, seed).unwrap())
}

proptest! {
    #[test]
    fn permute_round_trip(forward in arb_permutation(64)) {
        let p = Permutation::from_forward(forward.clone()).unwrap();
        let x: Vec<f64> = (0..forward.len()).map(|i| i as f64 * 0.5 - 3.0).collect();
        prop_assert_eq!(p.unpermute(&p.permute(&x).unwrap()).unwrap(), x.clone());
        prop_assert_eq!(p.inverted().permute(&p.permute(&x).unwrap()).unwrap(), x);
        prop_assert!(p.then(&p.inverted()).unwrap().is_identity());
    }

    #[test]
    fn spmv_commutes_with_permutation(a in arb_spd(), seed in any::<u64>()) {
        let n = a.n();
        let mut order: Vec<usize> = (0..n).collect();
        order.rotate_left((seed as usize) % n);
        order.swap(0, n - 1);
        let p = Permutation::from_forward(order).unwrap();
        let x = common::random_vector(n, seed);
        let (pa, px) = permute_system(&a, &x, &p).unwrap();
        let lhs = pa.spmv(&px).unwrap();
        let rhs = p.permute(&a.spmv(&x).unwrap()).unwrap();
        // the same products are summed in a different order
        prop_assert!(common::max_rel_diff(&lhs, &rhs) < 1e-14);
    }

    #[test]
    fn sell_round_trip_and_spmv(a in arb_spd(), w in 1usize..9, seed in any::<u64>()) {
        let s = csr_to_sell(&a, w, None).unwrap();
        prop_assert_eq!(s.to_csr(), a.clone());
        prop_assert_eq!(s.nnz(), a.nnz());
        let x = common::random_vector(a.n(), seed);
        let y_csr = a.spmv(&x).unwrap();
        prop_assert_eq!(s.spmv(&x).unwrap(), y_csr.clone());
        let mut y = vec![0.0; a.n()];
        s.par_spmv_into(&x, &mut y).unwrap();
        prop_assert_eq!(y, y_csr);
    }

    #[test]
    fn random_spd_is_symmetric_with_dominant_diagonal(a in arb_spd()) {
        prop_assert!(a.is_structurally_symmetric());
        for i in 0..a.n() {
            let (cols, vals) = a.row(i);
            let off: f64 = cols.iter().zip(vals).filter(|(&j, _)| j != i).map(|(_, v)| v.abs()).sum();
            prop_assert!(a.get(i, i).unwrap() > off);
            for (&j, &v) in cols.iter().zip(vals) {
                prop_assert_eq!(a.get(j, i), Some(v));
            }
        }
    }
}

#[test]
fn spmv_matches_dense_oracle() {
    let a = gen_random_spd(100, 0.05, 11).unwrap();
    let x = common::random_vector(100, 3);
    let dense = common::dense(&a) * nalgebra::DVector::from_column_slice(&x);
    let y = a.spmv(&x).unwrap();
    assert!(common::max_rel_diff(&y, dense.as_slice()) < 1e-14);
}

#[test]
fn laplacian_3x3_is_spd() {
    let (a, ones) = gen_laplacian_5pt(3, 3).unwrap();
    assert_eq!(ones, vec![1.0; 9]);
    let eig = common::dense(&a).symmetric_eigenvalues();
    assert!(eig.iter().all(|&l| l > 0.0), "{eig:?}");
}

#[test]
fn matrix_market_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen_random_spd(40, 0.1, 5).unwrap();
    for sym in [MtxSymmetry::General, MtxSymmetry::Symmetric] {
        let path = dir.path().join(format!("a_{sym:?}.mtx"));
        write_matrix_market(&path, &a, sym).unwrap();
        let (back, _) = coo_to_csr(&read_matrix_market(&path).unwrap());
        assert_eq!(back, a);
    }
}

#[test]
fn matrix_market_reports_line_of_bad_index() {
    let text = "%%MatrixMarket matrix coordinate real general\n% c\n2 2 2\n1 1 1.0\n3 1 1.0\n";
    let err = parse_matrix_market(text.as_bytes()).unwrap_err().to_string();
    assert!(err.contains("line 5"), "{err}");
}

#[test]
fn csr_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.csrbin");
    let (a, _) = gen_laplacian_5pt(7, 5).unwrap();
    write_csr_cache(&path, &a).unwrap();
    assert_eq!(read_csr_cache(&path).unwrap(), a);
    std::fs::write(&path, b"not a cache").unwrap();
    assert!(read_csr_cache(&path).is_err());
}
