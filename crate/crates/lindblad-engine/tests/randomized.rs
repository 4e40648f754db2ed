//! Randomized 8-dimensional models: physical invariants of the exact propagator and
//! agreement with the independent RK4 integration.

use lindblad_engine::*;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Bounded random model: |H| entries up to h_scale Hz, a handful of collapse
/// operators with rates up to r_scale.
fn random_model(rng: &mut ChaCha20Rng, dim: usize, h_scale: f64, r_scale: f64) -> LindbladModel {
    let mut h = DMatrix::<Complex64>::zeros(dim, dim);
    for r in 0..dim {
        for col in r..dim {
            if r == col {
                h[(r, col)] = c(rng.gen_range(-1.0..1.0) * h_scale, 0.0);
            } else {
                let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * h_scale;
                h[(r, col)] = z;
                h[(col, r)] = z.conj();
            }
        }
    }
    let n_ops = rng.gen_range(1..=4);
    let ops = (0..n_ops)
        .map(|_| {
            let mut op = DMatrix::<Complex64>::zeros(dim, dim);
            for _ in 0..rng.gen_range(1..=3) {
                let (r, col) = (rng.gen_range(0..dim), rng.gen_range(0..dim));
                op[(r, col)] = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
            (op, rng.gen_range(0.0..r_scale))
        })
        .collect();
    LindbladModel::new(h, ops).unwrap()
}

fn random_state(rng: &mut ChaCha20Rng, dim: usize) -> DensityMatrix {
    // rho = G G^dag / tr, Wishart-style, always a valid state
    let g = DMatrix::<Complex64>::from_fn(dim, dim, |_, _| {
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let m = &g * g.adjoint();
    let tr: Complex64 = (0..dim).map(|k| m[(k, k)]).sum();
    DensityMatrix::new(m / tr).unwrap()
}

#[test]
fn invariants_hold_over_many_random_evolutions() {
    let mut rng = ChaCha20Rng::seed_from_u64(0x51F0);
    for trial in 0..300 {
        let model = random_model(&mut rng, 8, 20e6, 5e6);
        let rho0 = random_state(&mut rng, 8);
        let t = rng.gen_range(0.0..10e-6);
        let rho = evolve(&model, &rho0, t).unwrap();
        assert!((rho.trace().re - 1.0).abs() < 1e-9, "trace, trial {trial}");
        assert!(rho.trace().im.abs() < 1e-9);
        assert!(rho.min_eigenvalue() > -1e-8, "positivity, trial {trial}");
        assert!(rho.purity() <= 1.0 + 1e-9, "purity, trial {trial}");
    }
}

#[test]
fn exact_and_rk4_paths_agree() {
    let mut rng = ChaCha20Rng::seed_from_u64(0xCAFE);
    for trial in 0..24 {
        let model = random_model(&mut rng, 8, 2e6, 2e6);
        let rho0 = random_state(&mut rng, 8);
        let t = rng.gen_range(50e-9..200e-9);
        let exact = evolve(&model, &rho0, t).unwrap();
        let rk4 = evolve_rk4(&model, &rho0, t, 0.1e-9).unwrap();
        let d = exact.trace_distance(&rk4);
        assert!(d < 1e-8, "trace distance {d:.2e}, trial {trial}");
    }
}

#[test]
fn semigroup_on_random_models() {
    let mut rng = ChaCha20Rng::seed_from_u64(0xBEEF);
    for _ in 0..30 {
        let model = random_model(&mut rng, 8, 30e6, 8e6);
        let rho0 = random_state(&mut rng, 8);
        let (t1, t2) = (rng.gen_range(0.0..400e-9), rng.gen_range(0.0..400e-9));
        let whole = evolve(&model, &rho0, t1 + t2).unwrap();
        let composed = evolve(&model, &evolve(&model, &rho0, t1).unwrap(), t2).unwrap();
        assert!(whole.trace_distance(&composed) < 1e-9);
    }
}

#[test]
fn liouvillian_images_are_traceless_on_a_hermitian_basis() {
    let mut rng = ChaCha20Rng::seed_from_u64(0xABCD);
    let dim = 8;
    let model = random_model(&mut rng, dim, 50e6, 10e6);
    let l = liouvillian(&model);
    let scale = l.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
    // the dim^2 Hermitian basis: E_jj, (E_jk + E_kj)/2, i(E_jk - E_kj)/2
    for j in 0..dim {
        for k in j..dim {
            let mut re = DMatrix::<Complex64>::zeros(dim, dim);
            if j == k {
                re[(j, j)] = c(1.0, 0.0);
            } else {
                re[(j, k)] = c(0.5, 0.0);
                re[(k, j)] = c(0.5, 0.0);
            }
            let mut batch = vec![re];
            if j != k {
                let mut im = DMatrix::<Complex64>::zeros(dim, dim);
                im[(j, k)] = c(0.0, 0.5);
                im[(k, j)] = c(0.0, -0.5);
                batch.push(im);
            }
            for m in batch {
                let image = unvectorize(&(&l * vectorize(&m)), dim);
                let tr: Complex64 = (0..dim).map(|q| image[(q, q)]).sum();
                assert!(tr.norm() < 1e-12 * scale);
            }
        }
    }
}

#[test]
fn steady_state_is_a_kernel_member() {
    let mut rng = ChaCha20Rng::seed_from_u64(0x5EED);
    let mut found = 0;
    for _ in 0..20 {
        let model = random_model(&mut rng, 4, 5e6, 3e6);
        match steady_state(&model) {
            Ok(ss) => {
                let l = liouvillian(&model);
                let residual = (&l * vectorize(ss.matrix())).norm();
                let scale = l.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
                assert!(residual / scale < 1e-10, "kernel residual {residual:.2e}");
                found += 1;
            }
            // random sparse channels can leave decoupled sectors; degeneracy is a
            // legitimate verdict there
            Err(EngineError::NonUniqueSteadyState { .. }) => {}
            Err(e) => panic!("unexpected error {e}"),
        }
    }
    assert!(found >= 5, "too few unique steady states in sample: {found}");
}
