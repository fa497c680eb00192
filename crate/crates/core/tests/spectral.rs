use altchain::dynamics::{integrate, IntegratorConfig};
use altchain::spectral::{eval_qh_rhs, pair_spectrum, quasi_harmonic};
use altchain::{pair_eigenvalues, ModeKind, ReducedState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn closed_form(a: f64, p: usize, j: usize) -> (f64, f64) {
    let s = (std::f64::consts::PI * j as f64 / p as f64).sin();
    let r = ((1.0 + a) * (1.0 + a) - 4.0 * a * s * s).sqrt();
    (1.0 + a - r, 1.0 + a + r)
}

#[test]
fn pair_sums_and_closed_form() {
    for a in [0.01, 0.001] {
        for p in (3..=47).step_by(2) {
            for j in 1..=(p - 1) / 2 {
                let (ac, op) = pair_eigenvalues(a, p, j).unwrap();
                let (ca, co) = closed_form(a, p, j);
                assert!((ac - ca).abs() <= 1e-12 && (op - co).abs() <= 1e-12);
                assert!((ac + op - 2.0 - 2.0 * a).abs() <= 1e-12);
            }
        }
    }
    assert!(pair_eigenvalues(0.01, 5, 0).is_err());
    assert!(pair_eigenvalues(0.01, 5, 3).is_err());
}

#[test]
fn basis_is_mass_orthonormal_and_diagonalises() {
    for p in (3..=47).step_by(2) {
        let (red, basis, _) = quasi_harmonic(p, 0.01, 1.0).unwrap();
        let n = p - 1;
        assert!(basis.conjugation_residual(&red) <= 1e-10, "p={p}");
        let spectrum = pair_spectrum(0.01, p);
        for m in 0..n {
            assert!((basis.lambdas[m] - spectrum[m]).abs() <= 1e-9);
            let kind = if m % 2 == 0 { ModeKind::Acoustic } else { ModeKind::Optical };
            assert_eq!(basis.labels[m].kind, kind);
            assert_eq!(basis.labels[m].pair, m / 2 + 1);
            let norm: f64 = (0..n).map(|i| red.masses[i] * basis.t[(i, m)].powi(2)).sum();
            assert!((norm - 1.0).abs() < 1e-12);
            let dominant = (0..n).max_by(|&i, &k| basis.t[(i, m)].abs().total_cmp(&basis.t[(k, m)].abs())).unwrap();
            assert!(basis.t[(dominant, m)] > 0.0);
        }
    }
}

#[test]
fn modal_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for p in [3, 9, 27, 47] {
        let (_, basis, _) = quasi_harmonic(p, 0.01, 1.0).unwrap();
        for _ in 0..20 {
            let q: Vec<f64> = (0..p - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let back = basis.from_modal(&basis.to_modal(&q).unwrap()).unwrap();
            for (x, y) in q.iter().zip(&back) {
                assert!((x - y).abs() <= 1e-12, "p={p}");
            }
        }
    }
}

#[test]
fn modal_rhs_is_the_transformed_particle_accel() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for p in [3, 5, 9, 21] {
        let (red, basis, qh) = quasi_harmonic(p, 0.01, 1.0).unwrap();
        for _ in 0..100 {
            let x: Vec<f64> = (0..p - 1).map(|_| rng.gen_range(-0.5..0.5)).collect();
            let q = basis.from_modal(&x).unwrap();
            let qdd = red.eval_accel(&ReducedState::at_rest(q)).unwrap();
            let expect = basis.to_modal(&qdd).unwrap();
            let got = eval_qh_rhs(&qh, &x, 1.0).unwrap();
            for (e, g) in expect.iter().zip(&got) {
                assert!((e - g).abs() <= 1e-9, "p={p}: {e} vs {g}");
            }
        }
        assert!(eval_qh_rhs(&qh, &vec![0.0; p - 1], 1.0).unwrap().iter().all(|&v| v == 0.0));
        // α multiplies at evaluation time only
        let x = vec![0.1; p - 1];
        let linear = eval_qh_rhs(&qh, &x, 0.0).unwrap();
        for (m, v) in linear.iter().enumerate() {
            assert!((v + qh.lambdas[m] * 0.1).abs() < 1e-15);
        }
    }
}

#[test]
fn modal_and_particle_trajectories_agree() {
    let (red, basis, qh) = quasi_harmonic(5, 0.01, 1.0).unwrap();
    let q0 = [0.1, -0.05, 0.12, 0.03];
    let v0 = [0.0, 0.01, 0.0, -0.005];
    let cfg = IntegratorConfig::new(200.0);
    let tq = integrate(&red, &q0, &v0, &cfg).unwrap();
    let tx = integrate(&qh, &basis.to_modal(&q0).unwrap(), &basis.to_modal(&v0).unwrap(), &cfg).unwrap();
    assert_eq!(tq.len(), tx.len());
    let mut worst = 0.0_f64;
    for k in 0..tq.len() {
        let q = basis.from_modal(tx.position(k)).unwrap();
        let v = basis.from_modal(tx.velocity(k)).unwrap();
        for i in 0..4 {
            worst = worst.max((q[i] - tq.position(k)[i]).abs()).max((v[i] - tq.velocity(k)[i]).abs());
        }
    }
    assert!(worst <= 1e-7, "max deviation {worst:e}");
}

#[test]
fn coupling_is_stored_upper_and_finite() {
    let (_, _, qh) = quasi_harmonic(15, 0.01, 1.0).unwrap();
    for (i, j, k, v) in qh.coupling.entries() {
        assert!(j <= k && i < 14 && v.is_finite() && v != 0.0);
    }
}
