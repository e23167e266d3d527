use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use signal_core::{
    effective_axis, ghz_parity_prob, qsp_activation, subset_phase, syndrome_rotation_angle,
    CodeShape,
};
use statevector_oracle::*;
use std::f64::consts::FRAC_PI_2;

type C = Complex64;

fn identity() -> [[C; 2]; 2] {
    [
        [C::new(1.0, 0.0), C::new(0.0, 0.0)],
        [C::new(0.0, 0.0), C::new(1.0, 0.0)],
    ]
}

#[test]
fn evolve_product_basics() {
    let ghz = DenseState::ghz(3).unwrap();
    let same = ghz.evolve_product(&[identity(); 3]).unwrap();
    assert_eq!(same.amplitudes, ghz.amplitudes);

    // Z rotation on |0..0> is a pure global phase.
    let zero = DenseState::zero(2).unwrap();
    let evolved = zero.evolve_product(&[rotation_z(0.7), identity()]).unwrap();
    assert_abs_diff_eq!(evolved.amplitudes[0].norm(), 1.0, epsilon = 1e-12);

    // GHZ branches pick up relative phase e^{2i sum(omega)}.
    let omegas = [0.2, -0.4, 0.9];
    let us: Vec<_> = omegas.iter().map(|&w| rotation_z(w)).collect();
    let evolved = ghz.evolve_product(&us).unwrap();
    let rel = evolved.amplitudes[7] / evolved.amplitudes[0];
    let total: f64 = omegas.iter().sum();
    assert_abs_diff_eq!((rel - C::new(0.0, 2.0 * total).exp()).norm(), 0.0, epsilon = 1e-12);

    // Non-unitary input is rejected.
    let mut bad = identity();
    bad[0][0] = C::new(0.5, 0.0);
    assert!(ghz.evolve_product(&[bad, identity(), identity()]).is_err());
}

#[test]
fn parity_prob_matches_closed_form() {
    assert_abs_diff_eq!(DenseState::ghz(4).unwrap().parity_prob_exact(), 1.0, epsilon = 1e-12);

    let mut flipped = DenseState::ghz(3).unwrap();
    let last = flipped.amplitudes.len() - 1;
    flipped.amplitudes[last] = -flipped.amplitudes[last];
    assert_abs_diff_eq!(flipped.parity_prob_exact(), 0.0, epsilon = 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [3u32, 5, 7] {
        for _ in 0..40 {
            let omegas: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let us: Vec<_> = omegas.iter().map(|&w| rotation_z(w)).collect();
            let p = DenseState::ghz(n).unwrap().evolve_product(&us).unwrap().parity_prob_exact();
            let total: f64 = omegas.iter().sum();
            assert_abs_diff_eq!(p, ghz_parity_prob(1, total, 0.0), epsilon = 1e-12);
        }
    }
}

#[test]
fn subset_decomposition_matches_products() {
    let subsets = DenseState::subset_decomposition(&[0.0, 0.0, 0.0]).unwrap();
    for s in &subsets {
        assert_eq!(s.probability, if s.subset == 0 { 1.0 } else { 0.0 });
    }

    let half = DenseState::subset_decomposition(&[std::f64::consts::FRAC_PI_4]).unwrap();
    assert_abs_diff_eq!(half[0].probability, 0.5, epsilon = 1e-12);
    assert_abs_diff_eq!(half[1].probability, 0.5, epsilon = 1e-12);

    let omegas = [0.2, 0.3, 0.4];
    let subsets = DenseState::subset_decomposition(&omegas).unwrap();
    let mut total = 0.0;
    for s in &subsets {
        let expect: f64 = omegas
            .iter()
            .enumerate()
            .map(|(k, w)| if s.subset >> k & 1 == 1 { w.sin().powi(2) } else { w.cos().powi(2) })
            .product();
        assert_abs_diff_eq!(s.probability, expect, epsilon = 1e-12);
        assert_abs_diff_eq!(s.amplitude.norm_sqr(), expect, epsilon = 1e-12);
        total += s.probability;
    }
    assert_abs_diff_eq!(total, 1.0, epsilon = 1e-10);
}

#[test]
fn subset_phase_matches_amplitude_ratio() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in [3usize, 5, 7] {
        for _ in 0..40 {
            let omegas: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.2)).collect();
            let subsets = DenseState::subset_decomposition(&omegas).unwrap();
            let mask: u32 = rng.gen_range(0..(1u32 << n));
            let comp = mask ^ ((1u32 << n) - 1);
            let p_s = subsets[mask as usize].probability;
            let p_sbar = subsets[comp as usize].probability;
            let members: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).collect();
            let phi = subset_phase(&omegas, &members).unwrap();
            assert_abs_diff_eq!(phi.tan().powi(2), p_s / p_sbar, epsilon = 1e-9 * (1.0 + p_s / p_sbar));
        }
    }
}

#[test]
fn syndrome_project_basics() {
    // No transverse evolution: trivial syndrome with probability 1.
    let outcomes = DenseState::zero(3).unwrap().syndrome_project(CodeShape::single(1)).unwrap();
    assert_eq!(outcomes.len(), 4); // 2^{N-1} syndromes
    for o in &outcomes {
        if o.pattern == 0 {
            assert_abs_diff_eq!(o.probability, 1.0, epsilon = 1e-12);
            assert_eq!(o.decoded_weight, 0);
        } else {
            assert_abs_diff_eq!(o.probability, 0.0, epsilon = 1e-12);
        }
    }

    // Deterministic X on the middle qubit: decoded weight 1, pattern 0b010.
    let x = rotation_xy(FRAC_PI_2, 0.0);
    let flipped = DenseState::zero(3).unwrap().evolve_product(&[identity(), x, identity()]).unwrap();
    let outcomes = flipped.syndrome_project(CodeShape::single(1)).unwrap();
    for o in &outcomes {
        let expect = if o.pattern == 0b010 { 1.0 } else { 0.0 };
        assert_abs_diff_eq!(o.probability, expect, epsilon = 1e-12);
        if o.pattern == 0b010 {
            assert_eq!(o.decoded_weight, 1);
        }
    }
}

#[test]
fn syndrome_distribution_matches_binomial_cosets() {
    let phi = 0.35f64;
    let n = 5u32;
    let state = DenseState::zero(n)
        .unwrap()
        .evolve_product(&vec![rotation_xy(phi, 0.0); n as usize])
        .unwrap();
    let outcomes = state.syndrome_project(CodeShape::single(2)).unwrap();
    let (s2, c2) = (phi.sin().powi(2), phi.cos().powi(2));
    let binom = |k: u32| -> f64 {
        let choose = [1.0, 5.0, 10.0, 10.0, 5.0, 1.0][k as usize];
        choose * s2.powi(k as i32) * c2.powi((n - k) as i32) / choose
    };
    let mut by_j = [0.0f64; 3];
    for o in &outcomes {
        by_j[o.decoded_weight as usize] += o.probability;
    }
    for j in 0..=2u32 {
        let choose = [1.0, 5.0, 10.0][j as usize];
        let expect = choose * (binom(j) + binom(n - j));
        assert_abs_diff_eq!(by_j[j as usize], expect, epsilon = 1e-10);
    }
}

#[test]
fn arctan_protocol_examples_and_endpoints() {
    for l in [1u32, 2, 3] {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let (p1, a1) = arctan_protocol_exact(l, 1.0).unwrap();
        assert_abs_diff_eq!(p1, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(a1, sign * FRAC_PI_2, epsilon = 1e-10);
        let (p0, a0) = arctan_protocol_exact(l, 0.0).unwrap();
        assert_abs_diff_eq!(p0, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(a0, 0.0, epsilon = 1e-10);
        // Continuity toward the endpoints.
        for x in [0.999, 0.9999] {
            let (_, a) = arctan_protocol_exact(l, x).unwrap();
            let (_, ac) = arctan_protocol_closed_form(l, x);
            assert_abs_diff_eq!(a, ac, epsilon = 1e-10);
        }
    }

    let (p, a) = arctan_protocol_exact(1, 0.9).unwrap();
    let proj = 0.9f64.powi(6) + 0.19f64.powi(3);
    let angle = -(0.9f64.powi(3) / 0.19f64.powf(1.5)).atan();
    assert_abs_diff_eq!(p, proj, epsilon = 1e-10);
    assert_abs_diff_eq!(a, angle, epsilon = 1e-10);

    assert!(arctan_protocol_exact(1, 1.2).is_err());
}

#[test]
fn syndrome_rotation_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for n in [3u32, 5, 7, 9] {
        for _ in 0..25 {
            let phi = rng.gen_range(-1.2..1.2);
            let vartheta = rng.gen_range(-3.0..3.0);
            let blocks = syndrome_rotation_exact(n, phi, vartheta).unwrap();
            for b in &blocks {
                let theta = syndrome_rotation_angle(n, b.decoded_weight, phi).unwrap();
                let axis = effective_axis(n, b.decoded_weight, vartheta).unwrap();
                let expect = logical_rotation(theta, axis);
                // For vartheta = 0 the operators agree outright; in general a
                // trailing e^{i j vartheta Z} remains, so compare per column.
                let f = if vartheta == 0.0 {
                    trace_fidelity(&b.matrix, &expect)
                } else {
                    column_fidelity(&b.matrix, &expect)
                };
                assert!(
                    f >= 1.0 - 1e-9,
                    "N={n} j={} phi={phi} vartheta={vartheta}: fidelity {f}",
                    b.decoded_weight
                );
            }
        }
    }

    // Spec examples at vartheta = 0, N = 3.
    let blocks = syndrome_rotation_exact(3, 0.3, 0.0).unwrap();
    for b in &blocks {
        let theta = syndrome_rotation_angle(3, b.decoded_weight, 0.3).unwrap();
        if b.decoded_weight == 1 {
            assert_abs_diff_eq!(theta, 0.3, epsilon = 1e-14);
        } else {
            assert_abs_diff_eq!(theta, 0.3f64.tan().powi(3).atan(), epsilon = 1e-14);
        }
    }
}

#[test]
fn qsp_activation_matches_oracle() {
    // Post-selected code-space projection of per-qubit X rotations equals
    // (Phi_N, cos^{2N} + sin^{2N}).
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for n in [3u32, 5, 7] {
        let l = (n - 1) / 2;
        for _ in 0..40 {
            let phi = rng.gen_range(-1.4..1.4);
            let state = DenseState::zero(n)
                .unwrap()
                .evolve_product(&vec![rotation_xy(phi, 0.0); n as usize])
                .unwrap();
            let a0 = state.amplitudes[0];
            let a1 = state.amplitudes[(1usize << n) - 1];
            let (angle, success) = qsp_activation(n, phi).unwrap();
            assert_abs_diff_eq!(success, a0.norm_sqr() + a1.norm_sqr(), epsilon = 1e-12);
            // |tan(angle)| = |a1|/|a0| and the sign convention carries (-1)^L
            // together with the sign of tan(phi).
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 } * phi.tan().signum();
            let expect = sign * a1.norm().atan2(a0.norm());
            assert_abs_diff_eq!(angle, expect, epsilon = 1e-9);
        }
    }
}

#[test]
fn capacity_limits() {
    assert!(DenseState::zero(15).is_err());
    assert!(DenseState::zero(14).is_ok());
    assert!(syndrome_rotation_exact(11, 0.1, 0.0).is_err());
}
