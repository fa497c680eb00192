use altchain::chain::{embed_state, restrict_state};
use altchain::dynamics::{energy_drift, integrate, momentum_drift, IntegratorConfig};
use altchain::{build_chain, ChainParams, FullChainSystem, FullState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn chain(n_pairs: usize) -> FullChainSystem {
    build_chain(ChainParams::new(n_pairs, 0.01, 1.0)).unwrap()
}

fn random_state(rng: &mut ChaCha8Rng, n: usize, amp: f64) -> FullState {
    FullState {
        q: (0..n).map(|_| rng.gen_range(-amp..amp)).collect(),
        v: (0..n).map(|_| rng.gen_range(-amp..amp)).collect(),
    }
}

#[test]
fn accel_is_minus_scaled_gradient() {
    let sys = chain(3);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let h = 1e-6;
    for _ in 0..100 {
        let s = random_state(&mut rng, 6, 0.5);
        let acc = sys.eval_accel(&s).unwrap();
        for j in 0..6 {
            let mut qp = s.q.clone();
            let mut qm = s.q.clone();
            qp[j] += h;
            qm[j] -= h;
            let grad = (sys.potential_energy(&qp) - sys.potential_energy(&qm)) / (2.0 * h);
            assert!((acc[j] + grad / sys.masses[j]).abs() <= 1e-6, "j={j}: {} vs {}", acc[j], -grad / sys.masses[j]);
        }
    }
}

#[test]
fn single_displacement_matches_hand_computation() {
    // q = (0.1, 0, ..): the spring to the right of particle 1 has z = -0.1, the one to its left z = 0.1
    let sys = chain(3);
    let mut s = FullState::zeros(6);
    s.q[0] = 0.1;
    let acc = sys.eval_accel(&s).unwrap();
    let vp = |z: f64| z + z * z;
    assert!((acc[0] - (vp(-0.1) - vp(0.1))).abs() < 1e-15);
    assert!((acc[1] + 0.01 * vp(-0.1)).abs() < 1e-15);
    assert!((acc[5] - 0.01 * vp(0.1)).abs() < 1e-15);
    assert_eq!(&acc[2..5], &[0.0, 0.0, 0.0]);
}

#[test]
fn translation_leaves_accel_unchanged() {
    let sys = chain(4);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let s = random_state(&mut rng, 8, 0.3);
    let shifted = FullState { q: s.q.iter().map(|q| q + 0.7).collect(), v: s.v.clone() };
    let a = sys.eval_accel(&s).unwrap();
    let b = sys.eval_accel(&shifted).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-12);
    }
    let c = FullState { q: vec![0.3; 8], v: vec![0.0; 8] };
    assert!(sys.eval_accel(&c).unwrap().iter().all(|&x| x == 0.0));
}

#[test]
fn hamiltonian_basics() {
    let sys = chain(3);
    assert_eq!(sys.hamiltonian(&FullState::zeros(6)).unwrap(), 0.0);
    let mut s = FullState::zeros(6);
    s.v[0] = 1.0;
    assert_eq!(sys.hamiltonian(&s).unwrap(), 0.5);
    assert!(sys.hamiltonian(&FullState::zeros(4)).is_err());
}

#[test]
fn six_particle_spectrum_closed_form() {
    for a in [0.01, 0.05, 0.3] {
        let sys = build_chain(ChainParams::new(3, a, 1.0)).unwrap();
        let w = sys.linear_spectrum();
        let r = (a * a - a + 1.0_f64).sqrt();
        let mut expect = vec![2.0 * (1.0 + a), a + 1.0 + r, a + 1.0 + r, a + 1.0 - r, a + 1.0 - r, 0.0];
        expect.sort_by(|x, y| y.total_cmp(x));
        for (x, e) in w.iter().zip(&expect) {
            assert!((x - e).abs() < 1e-12, "a={a}: {w:?} vs {expect:?}");
        }
    }
}

#[test]
fn spectrum_splits_into_two_groups() {
    for n_pairs in [2, 3, 5, 8, 13] {
        let w = chain(n_pairs).linear_spectrum();
        let n = 2 * n_pairs;
        assert_eq!(w.iter().filter(|x| x.abs() < 1e-10).count(), 1);
        assert_eq!(w.iter().filter(|&&x| (x - 2.0).abs() < 0.1).count(), n / 2);
        assert_eq!(w.iter().filter(|&&x| x < 0.05).count(), n / 2);
    }
}

#[test]
fn embedding_reproduces_smaller_chain() {
    let small = chain(2);
    let big = chain(4);
    let s = FullState { q: vec![0.1, -0.05, 0.02, 0.07], v: vec![0.0, 0.01, -0.02, 0.0] };
    assert_eq!(embed_state(&s, 1), s);
    assert_eq!(embed_state(&FullState::zeros(4), 2), FullState::zeros(8));
    let e = embed_state(&s, 2);
    assert_eq!(e.q.len(), 8);
    assert_eq!(restrict_state(&e, 4), s);

    let cfg = IntegratorConfig::new(100.0);
    let ts = integrate(&small, &s.q, &s.v, &cfg).unwrap();
    let tb = integrate(&big, &e.q, &e.v, &cfg).unwrap();
    assert!(ts.termination.is_completed() && tb.termination.is_completed());
    let (mut dev, mut block) = (0.0_f64, 0.0_f64);
    for k in 0..ts.len() {
        let (xs, xb) = (ts.position(k), tb.position(k));
        let (vs, vb) = (ts.velocity(k), tb.velocity(k));
        for j in 0..4 {
            dev = dev.max((xs[j] - xb[j]).abs()).max((vs[j] - vb[j]).abs());
            block = block.max((xb[j] - xb[j + 4]).abs()).max((vb[j] - vb[j + 4]).abs());
        }
    }
    assert!(dev <= 1e-6, "restricted trajectory deviates by {dev:e}");
    assert!(block <= 1e-7, "blocks drift apart by {block:e}");
}

#[test]
fn energy_and_momentum_are_conserved() {
    let sys = chain(3);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let s = random_state(&mut rng, 6, 0.1);
    let tr = integrate(&sys, &s.q, &s.v, &IntegratorConfig::new(2000.0)).unwrap();
    assert!(tr.termination.is_completed());
    let e = energy_drift(&sys, &tr).unwrap();
    let p = momentum_drift(&sys, &tr);
    assert!(sys.momentum(&s.v).abs() > 1e-3);
    assert!(e <= 1e-8, "energy drift {e:e}");
    assert!(p <= 1e-8, "momentum drift {p:e}");
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(build_chain(ChainParams::new(3, -1.0, 1.0)).is_err());
    assert!(build_chain(ChainParams::new(3, 0.0, 1.0)).is_err());
    assert!(build_chain(ChainParams::new(1, 0.01, 1.0)).is_err());
    assert_eq!(chain(2).len(), 4);
    assert_eq!(chain(3).masses, vec![1.0, 100.0, 1.0, 100.0, 1.0, 100.0]);
}
