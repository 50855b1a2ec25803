mod common;

use std::sync::Arc;

use proptest::prelude::*;
use trilab::ordering::{build_blocks, build_hbmc, color_blocks, greedy_color_nodes, OrderingKind};
use trilab::precond::{
    factor_equivalence_check, ic0_factorize, sub_backward_bmc, sub_backward_hbmc, sub_backward_mc,
    sub_backward_seq, sub_forward_bmc, sub_forward_hbmc, sub_forward_mc, sub_forward_seq,
    BarrierCounter, IcPreconditioner, KernelPool, SellFactor,
};
use trilab::sparse::{gen_laplacian_5pt, gen_random_spd, CsrMatrix};
use trilab::Error;

const KERNEL_TOL: f64 = 1e-14;

proptest! {
    #[test]
    fn ic0_reproduces_shifted_matrix_on_pattern(
        n in 2usize..80, density in 0.0f64..0.2, seed in any::<u64>(), shift in 0.0f64..0.5
    ) {
        let a = gen_random_spd(n, density, seed).unwrap();
        let f = ic0_factorize(&a, shift).unwrap();
        let (same_pattern, dev) = common::ic_defining_property(&a, shift, &f);
        prop_assert!(same_pattern);
        prop_assert!(dev <= 1e-12, "{}", dev);
    }
}

#[test]
fn ic0_on_grids() {
    for (nx, ny) in [(2, 2), (5, 3), (16, 16), (40, 25)] {
        let (a, _) = gen_laplacian_5pt(nx, ny).unwrap();
        for shift in [0.0, 0.1] {
            let f = ic0_factorize(&a, shift).unwrap();
            let (same_pattern, dev) = common::ic_defining_property(&a, shift, &f);
            assert!(same_pattern && dev <= 1e-12, "{nx}x{ny}: {dev}");
        }
    }
}

#[test]
fn ic0_breakdown_is_reported() {
    let a = CsrMatrix::from_dense(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
    assert!(matches!(ic0_factorize(&a, 0.0), Err(Error::IcBreakdown { row: 1, .. })));
}

#[test]
fn ic_preconditioner_inverts_exact_factorization() {
    // tridiagonal matrices have no fill, so IC(0) is the exact Cholesky factor
    let (a, _) = gen_laplacian_5pt(30, 2).unwrap();
    let a = a.lower_triangle(true);
    let a = {
        let mut rows = a.to_dense();
        for i in 0..rows.len() {
            for j in 0..i {
                if j + 1 != i {
                    rows[i][j] = 0.0;
                }
                rows[j][i] = rows[i][j];
            }
        }
        CsrMatrix::from_dense(&rows).unwrap()
    };
    let r = common::random_vector(a.n(), 9);
    let z = IcPreconditioner::sequential(ic0_factorize(&a, 0.0).unwrap()).apply(&r).unwrap();
    assert!(common::max_rel_diff(&z, &common::dense_solve(&a, &r)) < 1e-12);
}

#[test]
fn mc_and_bmc_kernels_match_sequential() {
    for (a, label) in [
        (gen_laplacian_5pt(23, 17).unwrap().0, "grid"),
        (gen_random_spd(400, 0.02, 3).unwrap(), "random"),
    ] {
        let r = common::random_vector(a.n(), 1);
        let mc = greedy_color_nodes(&a);
        let fm = ic0_factorize(&a.permute(&mc.perm).unwrap(), 0.0).unwrap().with_tag(OrderingKind::Mc);
        let bmc = color_blocks(&a, build_blocks(&a, 8).unwrap());
        let fb = ic0_factorize(&a.permute(&bmc.perm).unwrap(), 0.0).unwrap().with_tag(OrderingKind::Bmc);
        let (ym_ref, yb_ref) = (sub_forward_seq(&fm, &r).unwrap(), sub_forward_seq(&fb, &r).unwrap());
        let (zm_ref, zb_ref) = (sub_backward_seq(&fm, &r).unwrap(), sub_backward_seq(&fb, &r).unwrap());
        for threads in common::THREAD_COUNTS {
            let pool = KernelPool::new(threads).unwrap();
            let mut c = BarrierCounter::new();
            let y = sub_forward_mc(&fm, &mc, &pool, &r, &mut c).unwrap();
            assert!(common::max_rel_diff(&y, &ym_ref) <= KERNEL_TOL, "{label} mc fwd {threads}");
            assert_eq!(c.count(), mc.n_c - 1);
            c.reset();
            let z = sub_backward_mc(&fm, &mc, &pool, &r, &mut c).unwrap();
            assert!(common::max_rel_diff(&z, &zm_ref) <= KERNEL_TOL, "{label} mc bwd {threads}");
            assert_eq!(c.count(), mc.n_c - 1);
            c.reset();
            let y = sub_forward_bmc(&fb, &bmc, &pool, &r, &mut c).unwrap();
            assert!(common::max_rel_diff(&y, &yb_ref) <= KERNEL_TOL, "{label} bmc fwd {threads}");
            assert_eq!(c.count(), bmc.n_c - 1);
            c.reset();
            let z = sub_backward_bmc(&fb, &bmc, &pool, &r, &mut c).unwrap();
            assert!(common::max_rel_diff(&z, &zb_ref) <= KERNEL_TOL, "{label} bmc bwd {threads}");
            assert_eq!(c.count(), bmc.n_c - 1);
        }
    }
}

#[test]
fn hbmc_kernels_match_sequential_and_are_thread_invariant() {
    let (a, _) = gen_laplacian_5pt(29, 31).unwrap();
    for (b_s, w) in [(2, 2), (4, 8), (8, 4)] {
        let h = build_hbmc(color_blocks(&a, build_blocks(&a, b_s).unwrap()), w).unwrap();
        let f = ic0_factorize(&h.hbmc_matrix(&a).unwrap(), 0.0).unwrap().with_tag(OrderingKind::Hbmc);
        let sell = SellFactor::new(&f, &h).unwrap();
        let r = h.hbmc_vector(&common::random_vector(a.n(), 4)).unwrap();
        let y_ref = sub_forward_seq(&f, &r).unwrap();
        let z_ref = sub_backward_seq(&f, &r).unwrap();
        let mut first: Option<(Vec<f64>, Vec<f64>)> = None;
        for threads in common::THREAD_COUNTS {
            let pool = KernelPool::new(threads).unwrap();
            let mut c = BarrierCounter::new();
            let y = sub_forward_hbmc(&sell, &h, &pool, &r, &mut c).unwrap();
            assert_eq!(c.count(), h.n_c() - 1);
            c.reset();
            let z = sub_backward_hbmc(&sell, &h, &pool, &r, &mut c).unwrap();
            assert_eq!(c.count(), h.n_c() - 1);
            assert!(common::max_rel_diff(&y, &y_ref) <= KERNEL_TOL);
            assert!(common::max_rel_diff(&z, &z_ref) <= KERNEL_TOL);
            match &first {
                None => first = Some((y, z)),
                Some((y0, z0)) => {
                    assert!(y.iter().zip(y0).all(|(u, v)| u.to_bits() == v.to_bits()));
                    assert!(z.iter().zip(z0).all(|(u, v)| u.to_bits() == v.to_bits()));
                }
            }
        }
    }
}

#[test]
fn preconditioner_apply_counts_both_sweeps() {
    let (a, _) = gen_laplacian_5pt(12, 12).unwrap();
    let pool = Arc::new(KernelPool::new(3).unwrap());
    let h = build_hbmc(color_blocks(&a, build_blocks(&a, 4).unwrap()), 4).unwrap();
    let f = ic0_factorize(&h.hbmc_matrix(&a).unwrap(), 0.0).unwrap().with_tag(OrderingKind::Hbmc);
    let pc = IcPreconditioner::hbmc(f.clone(), &h, pool).unwrap();
    let r = h.hbmc_vector(&vec![1.0; a.n()]).unwrap();
    let mut z = vec![0.0; r.len()];
    let mut scratch = vec![0.0; r.len()];
    let barriers = pc.apply_into(&r, &mut z, &mut scratch).unwrap();
    assert_eq!(barriers, 2 * (h.n_c() - 1));
    let seq = sub_backward_seq(&f, &sub_forward_seq(&f, &r).unwrap()).unwrap();
    assert!(common::max_rel_diff(&z, &seq) <= KERNEL_TOL);
}

#[test]
fn factoring_commutes_with_hbmc_permutation() {
    let (a, _) = gen_laplacian_5pt(8, 8).unwrap();
    let h = build_hbmc(color_blocks(&a, build_blocks(&a, 4).unwrap()), 2).unwrap();
    let padded = h.padded_bmc_matrix(&a).unwrap();
    let eq = factor_equivalence_check(&padded, &h.perm, 0.0).unwrap();
    assert!(eq.equivalent, "{eq:?}");
    assert!(eq.max_rel_dev <= 1e-12);
}

#[test]
fn factoring_does_not_commute_with_an_arbitrary_permutation() {
    let (a, _) = gen_laplacian_5pt(6, 6).unwrap();
    let mc = greedy_color_nodes(&a);
    let eq = factor_equivalence_check(&a, &mc.perm, 0.0).unwrap();
    assert!(!eq.equivalent);
}
