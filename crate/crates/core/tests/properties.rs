use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qcorr::dissipative::{evolve, suggest_dt, BathSpec, DissipativeParams};
use qcorr::linalg::{kron, pauli};
use qcorr::measures::{bell_m, concurrence, discord, mutual_information, teleport_fidelity};
use qcorr::qnd::{apply_qnd_channel, default_kernel, Regime};
use qcorr::state::random_state;
use qcorr::{ComplexMatrix, DensityMatrix, DiscordMode, Subsystem};

/// `exp(−iθ n·σ/2)` for the unit vector along spherical angles `(a, b)`.
fn qubit_rotation(theta: f64, a: f64, b: f64) -> ComplexMatrix {
    let n = [a.sin() * b.cos(), a.sin() * b.sin(), a.cos()];
    let (s, c) = (0.5 * theta).sin_cos();
    let mut u = ComplexMatrix::identity(2).scale_real(c);
    for (k, nk) in n.iter().enumerate() {
        u = &u + &pauli(k + 1).scale(Complex64::new(0.0, -s * nk));
    }
    u
}

fn state(seed: u64) -> DensityMatrix {
    random_state(&mut ChaCha8Rng::seed_from_u64(seed))
}

fn angles() -> impl Strategy<Value = (f64, f64, f64)> {
    (
        0.0..std::f64::consts::TAU,
        0.0..std::f64::consts::PI,
        0.0..std::f64::consts::TAU,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn measures_are_local_unitary_invariant(seed in any::<u64>(), u in angles(), v in angles()) {
        let rho = state(seed);
        let w = kron(&qubit_rotation(u.0, u.1, u.2), &qubit_rotation(v.0, v.1, v.2));
        let sigma = rho.conjugate_by(&w);

        assert_abs_diff_eq!(concurrence(&rho), concurrence(&sigma), epsilon = 1e-9);
        assert_abs_diff_eq!(bell_m(&rho), bell_m(&sigma), epsilon = 1e-9);
        assert_abs_diff_eq!(teleport_fidelity(&rho).n, teleport_fidelity(&sigma).n, epsilon = 1e-9);
        assert_abs_diff_eq!(mutual_information(&rho), mutual_information(&sigma), epsilon = 1e-9);
        for side in [Subsystem::First, Subsystem::Second] {
            assert_abs_diff_eq!(
                discord(&rho, DiscordMode::Optimized, side),
                discord(&sigma, DiscordMode::Optimized, side),
                epsilon = 1e-5
            );
        }
    }

    #[test]
    fn qnd_keeps_populations_and_never_raises_purity(
        seed in any::<u64>(),
        t in 0.0..3.0f64,
        temperature in 0.0..5.0f64,
        r in -1.5..1.5f64,
        collective in any::<bool>(),
    ) {
        let rho = state(seed);
        let regime = if collective { Regime::Collective } else { Regime::Independent };
        let bath = BathSpec { temperature, squeezing: r, ..BathSpec::default() };
        let kernel = default_kernel(&bath, 1.0, regime).unwrap();
        let out = apply_qnd_channel(&rho, &kernel, t).unwrap();
        for k in 0..4 {
            prop_assert_eq!(out.matrix()[(k, k)], rho.matrix()[(k, k)]);
        }
        prop_assert!(out.purity() <= rho.purity() + 1e-12);
        prop_assert!(out.validate().passes());
    }

    #[test]
    fn dissipative_evolution_stays_physical(
        seed in any::<u64>(),
        x in 0.05..3.0f64,
        temperature in 0.0..2.0f64,
        r in -0.5..0.5f64,
    ) {
        let params = DissipativeParams::default()
            .with_separation(x)
            .with_bath(BathSpec { temperature, squeezing: r, ..BathSpec::default() });
        let traj = evolve(&state(seed), &params, 0.5, suggest_dt(&params, 0.5).unwrap()).unwrap();
        for rho in &traj.states {
            let v = rho.validate();
            prop_assert!(v.trace_deviation < 1e-9);
            prop_assert!(v.min_eigenvalue > -1e-6);
        }
    }
}
