//! End-to-end acceptance checks. Each test prints one PASS/FAIL line;
//! run with `cargo test --test acceptance -- --nocapture` to see them all.

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use phaselight::hilbert::{
    annihilation, coherent_state, number_state, poisson_weight, CompositeSpace,
    DensityOperator, Factor, LinearOperator, ModeSpace, StateVector,
};
use phaselight::prepmeas::{self, DeviceItem, Pom, PrepDevice};
use phaselight::twolaser::{
    self, CoherentEnsemble, DetectionEvent, TwoCavityState,
};
use phaselight::{jcpulse, phase, sources};

fn criterion(n: usize, description: &str, pass: bool) {
    println!("{}: criterion {n} - {description}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n} failed: {description}");
}

fn number_pair(n_a: usize, n_b: usize) -> TwoCavityState {
    let ma = ModeSpace::new("a", n_a + 2);
    let mb = ModeSpace::new("b", n_b + 2);
    let rho_a = DensityOperator::from_pure(&number_state(n_a, &ma).unwrap()).unwrap();
    let rho_b = DensityOperator::from_pure(&number_state(n_b, &mb).unwrap()).unwrap();
    TwoCavityState::from_product(&rho_a, &rho_b).unwrap()
}

fn diagonal_state(mode: &ModeSpace, weights: &[f64]) -> DensityOperator {
    let mut acc = LinearOperator::zero(mode.into());
    for (n, &p) in weights.iter().enumerate() {
        let proj = number_state(n, mode).unwrap().outer();
        acc = acc.add(&proj.scale(C64::new(p, 0.0))).unwrap();
    }
    DensityOperator::from_unnormalized(acc).unwrap()
}

#[test]
fn criterion_1_post_collapse_distribution() {
    let start = Instant::now();
    let gamma = 0.7;
    let mut worst = 0.0_f64;
    for n in [1usize, 5, 20] {
        let state = number_pair(n, n);
        let event = DetectionEvent::new(1, gamma).unwrap();
        let dist =
            twolaser::post_collapse_phase_distribution(&state, &event, 4, 1024).unwrap();
        for (x, p) in dist.grid().zip(dist.density()) {
            worst = worst.max((p - (1.0 + (x - gamma).cos()) / (2.0 * PI)).abs());
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    criterion(
        1,
        "post-collapse P(Delta) = [1 + cos(Delta - gamma)]/(2 pi) within 1e-9, < 1 s",
        worst < 1e-9 && elapsed < 1.0,
    );
}

#[test]
fn criterion_2_variance_narrowing() {
    let gamma = 0.4;
    let state = number_pair(5, 5);
    let event = DetectionEvent::new(1, gamma).unwrap();
    let narrowed = twolaser::post_collapse_phase_distribution(&state, &event, 4, 4096)
        .unwrap()
        .circular_variance(gamma);
    let uniform = phase::phase_difference_distribution(state.rho(), 4, 4096, -PI)
        .unwrap()
        .circular_variance(gamma);
    criterion(
        2,
        "variance pi^2/3 - 2 after collapse and pi^2/3 before, within 2e-3",
        (narrowed - (PI * PI / 3.0 - 2.0)).abs() < 2e-3
            && (uniform - PI * PI / 3.0).abs() < 2e-3,
    );
}

#[test]
fn criterion_3_second_detection_ratio() {
    let gamma = 0.3;
    let mut worst = 0.0_f64;
    let mut fixtures = 0usize;
    for (n_a, n_b) in [
        (1usize, 1usize),
        (1, 2),
        (1, 3),
        (2, 2),
        (2, 3),
        (2, 5),
        (3, 3),
        (3, 4),
        (4, 4),
        (4, 6),
        (5, 5),
        (5, 8),
        (6, 6),
        (8, 8),
        (10, 10),
        (20, 20),
    ] {
        let rep = twolaser::second_detection_ratio(&number_pair(n_a, n_b), gamma).unwrap();
        worst = worst.max((rep.ratio_numeric - rep.ratio_analytic).abs());
        fixtures += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let n_max = 9;
        let mode_a = ModeSpace::new("a", n_max);
        let mode_b = ModeSpace::new("b", n_max);
        let draw = |rng: &mut ChaCha8Rng| {
            (0..=n_max).map(|_| rng.random::<f64>()).collect::<Vec<_>>()
        };
        let state = TwoCavityState::from_product(
            &diagonal_state(&mode_a, &draw(&mut rng)),
            &diagonal_state(&mode_b, &draw(&mut rng)),
        )
        .unwrap();
        let rep = twolaser::second_detection_ratio(&state, gamma).unwrap();
        worst = worst.max((rep.ratio_numeric - rep.ratio_analytic).abs());
        fixtures += 1;
    }

    let hom = twolaser::second_detection_ratio(&number_pair(1, 1), gamma).unwrap();
    let fifty = twolaser::second_detection_ratio(&number_pair(50, 50), gamma).unwrap();
    // Large-n trend through the closed form (numeric agreement is pinned
    // at n = 50 above); |n>|n> has E[n^2] = n^2.
    let large = twolaser::analytic_second_detection_ratio(
        200.0, 200.0, 200.0 * 200.0, 200.0 * 200.0,
    );
    let imbalance = twolaser::second_detection_ratio(&number_pair(400, 1), gamma).unwrap();
    criterion(
        3,
        "ratio matches Eq-27-style closed form on 21 fixtures; HOM 0, 49/149, -> 1/3, -> 1",
        fixtures >= 20
            && worst < 1e-10
            && hom.ratio_analytic == 0.0
            && hom.ratio_numeric.abs() < 1e-12
            && (fifty.ratio_numeric - 49.0 / 149.0).abs() < 1e-10
            && (large - 1.0 / 3.0).abs() < 2e-3
            && (imbalance.ratio_numeric - 1.0).abs() < 0.02,
    );
}

#[test]
fn criterion_4_coherent_states_not_collapsed() {
    let n_max = 35;
    let ma = ModeSpace::new("a", n_max);
    let mb = ModeSpace::new("b", n_max);
    let mut worst = 0.0_f64;
    for (alpha, beta, gamma) in [
        (C64::new(2.0, 0.0), C64::new(0.0, 2.0), 0.0),
        (C64::new(1.2, -0.9), C64::new(-0.4, 1.3), 1.1),
        (C64::from_polar(2.0, 2.4), C64::from_polar(1.0, -0.7), -0.6),
    ] {
        let state = TwoCavityState::from_product(
            &DensityOperator::from_pure(&coherent_state(alpha, &ma).unwrap()).unwrap(),
            &DensityOperator::from_pure(&coherent_state(beta, &mb).unwrap()).unwrap(),
        )
        .unwrap();
        let event = DetectionEvent::new(1, gamma).unwrap();
        let (collapsed, _) = twolaser::collapse_first_detection(&state, &event).unwrap();
        worst = worst.max(collapsed.rho().max_abs_diff(state.rho()));
    }
    criterion(4, "coherent product states unchanged by detection within 1e-10", worst < 1e-10);
}

#[test]
fn criterion_5_retrodiction_equals_collapse() {
    let start = Instant::now();
    let n_max = 30;
    let ma = ModeSpace::new("a", n_max);
    let mb = ModeSpace::new("b", n_max);
    let ens = CoherentEnsemble::uniform(2.0, 64).unwrap();
    let event = DetectionEvent::new(1, 0.9).unwrap();
    let ret =
        twolaser::retrodict_coherent_ensemble(&ens, &ens, &ma, &mb, &event).unwrap();
    let prior = TwoCavityState::from_product(
        &ens.density(&ma).unwrap(),
        &ens.density(&mb).unwrap(),
    )
    .unwrap();
    let (collapsed, _) = twolaser::collapse_first_detection(&prior, &event).unwrap();
    let diff = ret.posterior.max_abs_diff(collapsed.rho());
    let elapsed = start.elapsed().as_secs_f64();
    criterion(
        5,
        "64-point coherent-ensemble posterior = collapsed prior within 1e-8, < 10 s",
        diff < 1e-8 && elapsed < 10.0,
    );
}

#[test]
fn criterion_6_brute_force_collapse_oracle() {
    let gamma = 0.8;
    let kappa_t = 1e-2;
    let ma = ModeSpace::new("a", 3);
    let mb = ModeSpace::new("b", 3);
    let moa = ModeSpace::new("oa", 2);
    let mob = ModeSpace::new("ob", 2);
    let joint = CompositeSpace::from(&ma)
        .join(&(&mb).into())
        .unwrap()
        .join(&(&moa).into())
        .unwrap()
        .join(&(&mob).into())
        .unwrap();
    let a = annihilation(&ma).embed(&joint).unwrap();
    let b = annihilation(&mb).embed(&joint).unwrap();
    let ao = annihilation(&moa).embed(&joint).unwrap();
    let bo = annihilation(&mob).embed(&joint).unwrap();
    let h = ao
        .adjoint()
        .mul(&a)
        .unwrap()
        .sub(&ao.mul(&a.adjoint()).unwrap())
        .unwrap()
        .add(
            &bo.adjoint()
                .mul(&b)
                .unwrap()
                .sub(&bo.mul(&b.adjoint()).unwrap())
                .unwrap(),
        )
        .unwrap()
        .scale(C64::new(0.0, 1.0));
    let u = h.scale(C64::new(0.0, -kappa_t)).matrix_exponential();

    let mut worst = 0.0_f64;
    for (na, nb) in [(1usize, 1usize), (2, 1), (3, 2)] {
        let psi_ab = StateVector::tensor(&[
            &number_state(na, &ma).unwrap(),
            &number_state(nb, &mb).unwrap(),
        ])
        .unwrap();
        let vac_o = StateVector::tensor(&[
            &number_state(0, &moa).unwrap(),
            &number_state(0, &mob).unwrap(),
        ])
        .unwrap();
        let psi_t = StateVector::tensor(&[&psi_ab, &vac_o])
            .unwrap()
            .apply(&u)
            .unwrap();
        let db = mb.dim();
        let mut inside = DVector::<C64>::zeros(ma.dim() * db);
        for (idx, amp) in psi_t.amplitudes().iter().enumerate() {
            let parts = joint.unflatten(idx);
            if parts[2] == 1 && parts[3] == 0 {
                inside[parts[0] * db + parts[1]] += amp;
            } else if parts[2] == 0 && parts[3] == 1 {
                inside[parts[0] * db + parts[1]] +=
                    C64::from_polar(1.0, gamma) * amp;
            }
        }
        let oracle = DensityOperator::from_pure(
            &StateVector::new(CompositeSpace::from(&ma).join(&(&mb).into()).unwrap(), inside)
                .unwrap()
                .normalized()
                .unwrap(),
        )
        .unwrap();
        let state =
            TwoCavityState::new(DensityOperator::from_pure(&psi_ab).unwrap(), "a", "b")
                .unwrap();
        let (collapsed, _) =
            twolaser::collapse_first_detection(&state, &DetectionEvent::new(1, gamma).unwrap())
                .unwrap();
        worst = worst.max(oracle.max_abs_diff(collapsed.rho()));
    }
    criterion(
        6,
        "explicit outside-mode leak + projection matches jump collapse within 1e-3",
        worst < 1e-3,
    );
}

#[test]
fn criterion_7_source_diagonality() {
    let sys = sources::build_oscillator_source(12, 12, 1.0).unwrap();
    let mut weights = vec![0.0; 7];
    weights[2] = 0.4;
    weights[5] = 0.6;
    let mut worst_offdiag = 0.0_f64;
    for &t in &[0.1, 0.2, 0.3, 0.5] {
        let rho_f = sources::number_mixture_field(&sys, &weights, t).unwrap();
        for r in 0..rho_f.dim() {
            for c in 0..rho_f.dim() {
                if r != c {
                    worst_offdiag = worst_offdiag.max(rho_f.op().entry(r, c).norm());
                }
            }
        }
    }

    let atom_sys = sources::build_atomic_source(&[1.0, 1.0, 1.0], 5).unwrap();
    let atoms = sources::atom_space(3).unwrap();
    let atom_ket = |bits: [usize; 3]| {
        let kets: Vec<StateVector> = bits
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                StateVector::basis(CompositeSpace::single(atoms.factors()[i].clone()), x)
                    .unwrap()
            })
            .collect();
        let refs: Vec<&StateVector> = kets.iter().collect();
        StateVector::tensor(&refs).unwrap()
    };
    let eigen = DensityOperator::from_pure(&atom_ket([1, 1, 0])).unwrap();
    for &t in &[0.1, 0.2, 0.3] {
        let rho_f = sources::atomic_source_field(&atom_sys, &eigen, None, t).unwrap();
        for r in 0..rho_f.dim() {
            for c in 0..rho_f.dim() {
                if r != c {
                    worst_offdiag = worst_offdiag.max(rho_f.op().entry(r, c).norm());
                }
            }
        }
    }

    let single = |theta: f64, i: usize| {
        StateVector::new(
            CompositeSpace::single(atoms.factors()[i].clone()),
            DVector::from_vec(vec![
                C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
                C64::from_polar(std::f64::consts::FRAC_1_SQRT_2, theta),
            ]),
        )
        .unwrap()
    };
    let kets = [single(0.5, 0), single(0.5, 1), single(0.5, 2)];
    let refs: Vec<&StateVector> = kets.iter().collect();
    let superposed = DensityOperator::from_pure(&StateVector::tensor(&refs).unwrap()).unwrap();
    let rho_f = sources::atomic_source_field(&atom_sys, &superposed, None, 0.3).unwrap();
    let coherence = rho_f.op().entry(0, 1).norm();

    criterion(
        7,
        "energy-diagonal sources keep field off-diagonals < 1e-10; superposed atoms give |<0|rho|1>| > 1e-3",
        worst_offdiag < 1e-10 && coherence > 1e-3,
    );
}

#[test]
fn criterion_8_coherence_transfer() {
    let lambda = 1.0;
    let sys = sources::build_oscillator_source(22, 22, lambda).unwrap();
    let gamma = C64::from_polar(2f64.sqrt(), 1.2);
    let src = sources::oscillator_coherent_source(&sys, gamma).unwrap();
    let mut worst_residual = 0.0_f64;
    let mut worst_arg = 0.0_f64;
    for &t in &[0.05, 0.1, 0.2, 0.3] {
        let rep = sources::coherence_transfer_check(&sys, &src, t).unwrap();
        worst_residual = worst_residual.max(rep.eigenvalue_residual);
        worst_arg = worst_arg.max(rep.arg_alignment);
    }
    criterion(
        8,
        "field stays an a-eigenstate (residual < 1e-3) with arg alpha = arg gamma within 1e-6",
        worst_residual < 1e-3 && worst_arg < 1e-6,
    );
}

#[test]
fn criterion_9_jc_phase_disruption() {
    let lambda = 1.0;
    let mut worst = 0.0_f64;
    for n in [1usize, 2, 5, 10] {
        let mode = ModeSpace::new("field", n + jcpulse::TRUNCATION_MARGIN);
        let field = DensityOperator::from_pure(&number_state(n, &mode).unwrap()).unwrap();
        let out = jcpulse::disrupted_pi_pulse(&field, n, lambda).unwrap();
        worst = worst.max((out.ground_probability - 1.0).abs());
    }
    let mode = ModeSpace::new("field", 32);
    let coherent = DensityOperator::from_pure(
        &coherent_state(C64::from_polar(5f64.sqrt(), 0.3), &mode).unwrap(),
    )
    .unwrap();
    let out = jcpulse::disrupted_pi_pulse(&coherent, 5, lambda).unwrap();
    worst = worst.max((out.ground_probability - 1.0).abs());
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..10 {
        let d = mode.dim();
        let m = DMatrix::<C64>::from_fn(d, d, |_, _| {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let rho = DensityOperator::from_unnormalized(
            LinearOperator::new((&mode).into(), &m * m.adjoint()).unwrap(),
        )
        .unwrap();
        let out = jcpulse::disrupted_pi_pulse(&rho, 5, lambda).unwrap();
        worst = worst.max((out.ground_probability - 1.0).abs());
    }
    let deviation = jcpulse::combined_unitary_identity_check(20, lambda, 5).unwrap();
    criterion(
        9,
        "disrupted pi-pulse leaves the atom in |g> within 1e-9 for all fields; combined unitary = U(pi)",
        worst < 1e-9 && deviation < 1e-9,
    );
}

#[test]
fn criterion_10_formalism_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let d = rng.random_range(2..=8usize);
        let n_prep = rng.random_range(2..=4usize);
        let n_meas = rng.random_range(2..=4usize);
        let space = CompositeSpace::single(Factor::new("s", d));

        // Random preparation device: PSD items normalized to total trace 1.
        let mut raw: Vec<LinearOperator> = (0..n_prep)
            .map(|_| {
                let m = DMatrix::<C64>::from_fn(d, d, |_, _| {
                    C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                });
                LinearOperator::new(space.clone(), &m * m.adjoint()).unwrap()
            })
            .collect();
        let total: f64 = raw.iter().map(|op| op.trace().re).sum();
        for op in raw.iter_mut() {
            *op = op.scale(C64::new(1.0 / total, 0.0));
        }
        let prep = PrepDevice::new(
            raw.into_iter()
                .enumerate()
                .map(|(i, op)| DeviceItem::new(format!("p{i}"), op))
                .collect(),
        )
        .unwrap();

        // Random POM: a random unitary rotating random diagonal partitions
        // of unity.
        let g = DMatrix::<C64>::from_fn(d, d, |_, _| {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let anti = LinearOperator::new(space.clone(), &g - g.adjoint()).unwrap();
        let unitary = anti.matrix_exponential();
        let mut diags = vec![vec![0.0; d]; n_meas];
        for k in 0..d {
            let cuts: Vec<f64> = (0..n_meas).map(|_| rng.random::<f64>() + 1e-3).collect();
            let s: f64 = cuts.iter().sum();
            for (j, &c) in cuts.iter().enumerate() {
                diags[j][k] = c / s;
            }
        }
        let pom = Pom::new(
            diags
                .iter()
                .enumerate()
                .map(|(j, diag)| {
                    let dm = LinearOperator::from_fn(space.clone(), |r, c| {
                        if r == c {
                            C64::new(diag[r], 0.0)
                        } else {
                            C64::ZERO
                        }
                    });
                    let op = unitary
                        .mul(&dm)
                        .unwrap()
                        .mul(&unitary.adjoint())
                        .unwrap();
                    DeviceItem::new(format!("m{j}"), op)
                })
                .collect(),
        )
        .unwrap();
        // Measurement device operators Gamma_j = Pi_j / n_meas.
        let meas: Vec<DeviceItem> = pom
            .items()
            .iter()
            .map(|it| {
                DeviceItem::new(
                    it.label.clone(),
                    it.op.scale(C64::new(1.0 / n_meas as f64, 0.0)),
                )
            })
            .collect();

        let rho = prepmeas::density_from_prep(&prep).unwrap();
        for pi in prep.items() {
            for mj in &meas {
                let joint =
                    prepmeas::joint_probability(&prep, &meas, &pi.label, &mj.label).unwrap();
                let prior = prep.a_priori_probability(&pi.label).unwrap();
                let predictive = prepmeas::predictive_probability(
                    &prep.prepared_state(&pi.label).unwrap(),
                    &pom,
                    &mj.label,
                )
                .unwrap();
                let evidence = rho
                    .expectation(&pom.item(&mj.label).unwrap().op)
                    .unwrap()
                    .re;
                let retro =
                    prepmeas::retrodictive_probability(&prep, &pom.item(&mj.label).unwrap().op, &pi.label)
                        .unwrap();
                worst = worst.max((joint - prior * predictive).abs());
                worst = worst.max((joint - evidence * retro).abs());
            }
        }
    }
    let prep = prepmeas::fixtures::z_device();
    let pom = prepmeas::fixtures::x_pom();
    let spin = prepmeas::retrodictive_probability(&prep, &pom.item("+x").unwrap().op, "+z")
        .unwrap();
    criterion(
        10,
        "Bayes identity on 100 random devices within 1e-10; spin retrodiction P(+z|+x) = 1/2",
        worst < 1e-10 && (spin - 0.5).abs() < 1e-12,
    );
}

#[test]
fn criterion_11_sequential_simulation() {
    let start = Instant::now();
    let hom = number_pair(1, 1);
    let mut same_detector = true;
    for seed in 0..100u64 {
        let run =
            twolaser::sequential_detection_simulation(&hom, 0.6, 2, seed, 3, 128).unwrap();
        same_detector &= run.steps[0].detector == run.steps[1].detector;
    }

    let big = number_pair(20, 20);
    let before = phase::phase_difference_distribution(big.rho(), 4, 1024, -PI)
        .unwrap()
        .circular_variance(0.0);
    let mut mean_after = 0.0;
    let n_seeds = 200;
    for seed in 0..n_seeds as u64 {
        let run =
            twolaser::sequential_detection_simulation(&big, 0.0, 1, seed, 3, 1024).unwrap();
        mean_after += run.steps[0].variance;
    }
    mean_after /= n_seeds as f64;
    let elapsed = start.elapsed().as_secs_f64();
    criterion(
        11,
        "HOM repeats the first detector on 100/100 seeds; |20>|20> mean variance drops below pi^2/3 - 1.5; < 30 s",
        same_detector
            && (before - PI * PI / 3.0).abs() < 2e-3
            && mean_after < PI * PI / 3.0 - 1.5
            && elapsed < 30.0,
    );
}
