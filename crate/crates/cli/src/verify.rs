//! Verification suites: closed forms in `signal-core` and `fisher-lab`
//! checked against the brute-force statevector oracle and against their
//! stated invariants. Exit is clean only if every check passes.

use clap::ValueEnum;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use signal_core::{
    effective_axis, ghz_parity_prob, phase_amplification, phase_amplification_derivative,
    qsp_activation, subset_phase, syndrome_rotation_angle,
};
use statevector_oracle::{
    arctan_protocol_closed_form, arctan_protocol_exact, column_fidelity, logical_rotation,
    rotation_xy, rotation_z, syndrome_rotation_exact, trace_fidelity, DenseState,
};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    /// Analytic formulas vs the dense statevector simulator.
    Oracle,
    /// The 4N Fisher-information identity for independent probes.
    SqlBarrier,
    /// Property battery for the phase amplification function.
    StepFunction,
}

const TOL: f64 = 1e-9;

struct Suite {
    failed: u32,
}

impl Suite {
    fn check(&mut self, name: &str, ok: bool, detail: &str) {
        if ok {
            println!("[PASS] {name}");
        } else {
            println!("[FAIL] {name}: {detail}");
            self.failed += 1;
        }
    }
}

fn identity() -> [[Complex64; 2]; 2] {
    let (one, zero) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    [[one, zero], [zero, one]]
}

fn oracle_suite(suite: &mut Suite) {
    let mut rng = ChaCha8Rng::seed_from_u64(1001);

    let mut worst = 0.0f64;
    for n in [3u32, 5, 7] {
        for _ in 0..30 {
            let omegas: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let us: Vec<_> = omegas.iter().map(|&w| rotation_z(w)).collect();
            let p = DenseState::ghz(n).unwrap().evolve_product(&us).unwrap().parity_prob_exact();
            worst = worst.max((p - ghz_parity_prob(1, omegas.iter().sum(), 0.0)).abs());
        }
    }
    suite.check("ghz-parity vs oracle", worst <= TOL, &format!("max |diff| = {worst:.2e}"));

    let mut worst = 0.0f64;
    for n in [3usize, 5, 7] {
        for _ in 0..20 {
            let omegas: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.2)).collect();
            let subsets = DenseState::subset_decomposition(&omegas).unwrap();
            for s in &subsets {
                let expect: f64 = omegas
                    .iter()
                    .enumerate()
                    .map(|(k, w)| if s.subset >> k & 1 == 1 { w.sin().powi(2) } else { w.cos().powi(2) })
                    .product();
                worst = worst.max((s.probability - expect).abs());
            }
            // Subset phase against the amplitude ratio of complementary masks.
            let mask: u32 = rng.gen_range(0..(1u32 << n));
            let comp = mask ^ ((1u32 << n) - 1);
            let ratio = subsets[mask as usize].probability / subsets[comp as usize].probability;
            let members: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).collect();
            let phi = subset_phase(&omegas, &members).unwrap();
            worst = worst.max((phi.tan().powi(2) - ratio).abs() / (1.0 + ratio));
        }
    }
    suite.check("subset-decomposition vs oracle", worst <= TOL, &format!("max |diff| = {worst:.2e}"));

    let mut worst = 1.0f64;
    for n in [3u32, 5, 7] {
        for _ in 0..15 {
            let phi = rng.gen_range(-1.2..1.2);
            let vartheta = rng.gen_range(-3.0..3.0);
            for b in &syndrome_rotation_exact(n, phi, vartheta).unwrap() {
                let theta = syndrome_rotation_angle(n, b.decoded_weight, phi).unwrap();
                let axis = effective_axis(n, b.decoded_weight, vartheta).unwrap();
                let expect = logical_rotation(theta, axis);
                // vartheta = 0 matches outright; otherwise a residual
                // e^{i j vartheta Z} phase remains, so compare per column.
                let f = if vartheta == 0.0 {
                    trace_fidelity(&b.matrix, &expect)
                } else {
                    column_fidelity(&b.matrix, &expect)
                };
                worst = worst.min(f);
            }
        }
    }
    suite.check("syndrome-rotation vs oracle", worst >= 1.0 - TOL, &format!("min fidelity = {worst:.12}"));

    let mut worst = 0.0f64;
    for n in [3u32, 5, 7] {
        let l = (n - 1) / 2;
        for _ in 0..30 {
            let phi = rng.gen_range(-1.4..1.4);
            let state = DenseState::zero(n)
                .unwrap()
                .evolve_product(&vec![rotation_xy(phi, 0.0); n as usize])
                .unwrap();
            let a0 = state.amplitudes[0];
            let a1 = state.amplitudes[(1usize << n) - 1];
            let (angle, success) = qsp_activation(n, phi).unwrap();
            worst = worst.max((success - (a0.norm_sqr() + a1.norm_sqr())).abs());
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 } * phi.tan().signum();
            worst = worst.max((angle - sign * a1.norm().atan2(a0.norm())).abs());
        }
    }
    suite.check("qsp-activation vs oracle", worst <= TOL, &format!("max |diff| = {worst:.2e}"));

    let mut worst = 0.0f64;
    for l in [1u32, 2, 3] {
        for _ in 0..30 {
            let x = rng.gen_range(0.01..0.999);
            let (p, a) = arctan_protocol_exact(l, x).unwrap();
            let (pc, ac) = arctan_protocol_closed_form(l, x);
            worst = worst.max((p - pc).abs()).max((a - ac).abs());
        }
    }
    suite.check("arctan-projection vs closed form", worst <= TOL, &format!("max |diff| = {worst:.2e}"));

    // Sanity anchor: the oracle itself on a known state.
    let ghz = DenseState::ghz(3).unwrap();
    let same = ghz.evolve_product(&[identity(); 3]).unwrap();
    suite.check(
        "oracle identity evolution",
        same.amplitudes == ghz.amplitudes,
        "identity changed the state",
    );
}

fn sql_barrier_suite(suite: &mut Suite) {
    println!("{:>4} {:>10} {:>6}", "N", "F_total", "4N");
    let mut all = true;
    for n in (3u32..=21).step_by(2) {
        let f = fisher_lab::sql_barrier_total(n).unwrap().value;
        let ok = f == 4.0 * n as f64;
        all &= ok;
        println!("{n:>4} {f:>10} {:>6}{}", 4 * n, if ok { "" } else { "  MISMATCH" });
    }
    suite.check("sql-barrier F_total = 4N", all, "exact identity violated");
}

fn step_function_suite(suite: &mut Suite) {
    let mut odd_ok = true;
    let mut mono_ok = true;
    let mut sat_ok = true;
    let mut small_ok = true;
    let mut deriv_ok = true;
    let mut detail = String::new();
    for n in (3u32..=41).step_by(2) {
        let l = (n - 1) / 2;
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        for w in [0.1f64, 0.4, 1.0, 1.4] {
            let f = phase_amplification(n, w).unwrap();
            if (phase_amplification(n, -w).unwrap() + f).abs() > 1e-12 {
                odd_ok = false;
                detail = format!("oddness broken at N={n}, omega={w}");
            }
            if sign * phase_amplification_derivative(n, w).unwrap() < 0.0 {
                mono_ok = false;
                detail = format!("derivative sign wrong at N={n}, omega={w}");
            }
        }
        // The bounds are strict mathematically; the slack only absorbs
        // rounding. The gap is a difference of two numbers near pi/2, so its
        // absolute error is a few ulps of pi/2 regardless of how small the
        // gap itself is — hence an absolute, not relative, allowance.
        let gap = std::f64::consts::FRAC_PI_2 - phase_amplification(n, std::f64::consts::FRAC_PI_3).unwrap().abs();
        if gap > 3f64.powf(-(n as f64) / 2.0) + 1e-14 {
            sat_ok = false;
            detail = format!("saturation gap {gap:.2e} at N={n}");
        }
        for w in [0.01f64, 0.05, 0.1] {
            if phase_amplification(n, w).unwrap().abs() > w.tan().powi(n as i32) * (1.0 + 1e-12) {
                small_ok = false;
                detail = format!("small-angle bound broken at N={n}, omega={w}");
            }
        }
        for w in [0.3f64, 0.6, 0.9] {
            let h = 1e-6;
            let fd = (phase_amplification(n, w + h).unwrap() - phase_amplification(n, w - h).unwrap())
                / (2.0 * h);
            let d = phase_amplification_derivative(n, w).unwrap();
            if (fd - d).abs() > 1e-6 * d.abs().max(1e-12) {
                deriv_ok = false;
                detail = format!("derivative vs FD off at N={n}, omega={w}: {d} vs {fd}");
            }
        }
    }
    suite.check("step-function oddness", odd_ok, &detail);
    suite.check("step-function monotonicity sign", mono_ok, &detail);
    suite.check("step-function saturation at pi/3", sat_ok, &detail);
    suite.check("step-function small-angle bound", small_ok, &detail);
    suite.check("step-function derivative vs finite difference", deriv_ok, &detail);
}

pub fn cmd_verify(which: Option<SuiteArg>) -> Result<(), CliError> {
    let mut suite = Suite { failed: 0 };
    let run_all = which.is_none();
    if run_all || which == Some(SuiteArg::Oracle) {
        oracle_suite(&mut suite);
    }
    if run_all || which == Some(SuiteArg::SqlBarrier) {
        sql_barrier_suite(&mut suite);
    }
    if run_all || which == Some(SuiteArg::StepFunction) {
        step_function_suite(&mut suite);
    }
    if suite.failed > 0 {
        Err(CliError::Runtime(format!("{} verification check(s) failed", suite.failed)))
    } else {
        println!("all checks passed");
        Ok(())
    }
}
