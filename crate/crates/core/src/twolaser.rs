//! Two leaky cavities feeding a beam splitter: detection-conditioned
//! collapse, interference statistics, sequential detection runs, and the
//! coherent-ensemble retrodiction equivalence.
//!
//! A detection at detector 1 applies the jump a + e^{i gamma} b; detector 2
//! uses gamma + pi. All conditional quantities are ratios of such weights,
//! so the leak amplitude itself never appears.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hilbert::{
    annihilation, coherent_state, number_operator, CompositeSpace, DensityOperator,
    LinearOperator, ModeSpace, StateVector,
};
use crate::phase::{self, PhaseDistribution};

pub const WEIGHT_FLOOR: f64 = 1e-14;
pub const NUMBER_DIAGONAL_TOL: f64 = 1e-10;

/// Which detector clicked, and the beam-splitter phase for the event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionEvent {
    detector: u8,
    gamma: f64,
}

impl DetectionEvent {
    pub fn new(detector: u8, gamma: f64) -> Result<Self> {
        if detector != 1 && detector != 2 {
            return Err(Error::InvalidDevice(format!(
                "detector must be 1 or 2, got {detector}"
            )));
        }
        Ok(Self { detector, gamma })
    }

    pub fn detector(&self) -> u8 {
        self.detector
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Detector 2 swaps the beam-splitter output: gamma -> gamma + pi.
    pub fn effective_gamma(&self) -> f64 {
        if self.detector == 1 {
            self.gamma
        } else {
            self.gamma + PI
        }
    }
}

/// Joint state of the two cavity fields, optionally with attached source
/// factors. The two field factors are named; cavity a must come before
/// cavity b in the factor order.
#[derive(Debug, Clone)]
pub struct TwoCavityState {
    rho: DensityOperator,
    label_a: String,
    label_b: String,
}

impl TwoCavityState {
    pub fn new(rho: DensityOperator, label_a: &str, label_b: &str) -> Result<Self> {
        let ia = rho.space().factor_index(label_a)?;
        let ib = rho.space().factor_index(label_b)?;
        if ia >= ib {
            return Err(Error::InvalidConfig(format!(
                "cavity factor '{label_a}' must precede '{label_b}'"
            )));
        }
        Ok(Self { rho, label_a: label_a.into(), label_b: label_b.into() })
    }

    /// Product state rho_a (x) rho_b of two single-factor cavity states.
    pub fn from_product(rho_a: &DensityOperator, rho_b: &DensityOperator) -> Result<Self> {
        let fa = rho_a.space().factors();
        let fb = rho_b.space().factors();
        if fa.len() != 1 || fb.len() != 1 {
            return Err(Error::InvalidConfig(
                "from_product expects single-factor cavity states".into(),
            ));
        }
        let joint = LinearOperator::tensor(&[rho_a.op(), rho_b.op()])?;
        let rho = DensityOperator::new_structurally_positive(joint)?;
        Self::new(rho, fa[0].label(), fb[0].label())
    }

    pub fn rho(&self) -> &DensityOperator {
        &self.rho
    }

    pub fn label_a(&self) -> &str {
        &self.label_a
    }

    pub fn label_b(&self) -> &str {
        &self.label_b
    }

    fn mode(&self, label: &str) -> Result<ModeSpace> {
        let idx = self.rho.space().factor_index(label)?;
        let f = &self.rho.space().factors()[idx];
        Ok(ModeSpace::new(f.label(), f.dim() - 1))
    }

    pub fn mode_a(&self) -> ModeSpace {
        self.mode(&self.label_a).expect("validated label")
    }

    pub fn mode_b(&self) -> ModeSpace {
        self.mode(&self.label_b).expect("validated label")
    }

    /// Reduced state of one cavity.
    pub fn reduced(&self, label: &str) -> Result<DensityOperator> {
        self.rho.partial_trace(&[label])
    }

    /// Reduced two-field state (traces out any attached source factors).
    pub fn fields(&self) -> Result<DensityOperator> {
        if self.rho.space().factors().len() == 2 {
            return Ok(self.rho.clone());
        }
        self.rho.partial_trace(&[&self.label_a, &self.label_b])
    }

    pub fn mean_photon(&self, label: &str) -> Result<f64> {
        let reduced = self.reduced(label)?;
        let mode = self.mode(label)?;
        Ok(reduced.expectation(&number_operator(&mode))?.re)
    }

    /// Jump operator a + e^{i gamma_eff} b, embedded in the full space.
    pub fn jump_operator(&self, event: &DetectionEvent) -> Result<LinearOperator> {
        let space = self.rho.space();
        let a = annihilation(&self.mode(&self.label_a)?).embed(space)?;
        let b = annihilation(&self.mode(&self.label_b)?).embed(space)?;
        a.add(&b.scale(Complex64::from_polar(1.0, event.effective_gamma())))
    }

    /// Off-diagonal mass of one reduced cavity in the number basis.
    pub fn off_diagonal_defect(&self, label: &str) -> Result<f64> {
        let reduced = self.reduced(label)?;
        let d = reduced.dim();
        let mut worst = 0.0_f64;
        for r in 0..d {
            for c in 0..d {
                if r != c {
                    worst = worst.max(reduced.op().entry(r, c).norm());
                }
            }
        }
        Ok(worst)
    }

    pub fn is_number_diagonal(&self) -> Result<bool> {
        Ok(self.off_diagonal_defect(&self.label_a)? < NUMBER_DIAGONAL_TOL
            && self.off_diagonal_defect(&self.label_b)? < NUMBER_DIAGONAL_TOL)
    }
}

/// One-cavity photodetection: rho -> a rho a^† / Tr(a rho a^†). Returns the
/// collapsed state and the weight Tr(a rho a^†) = n_bar.
pub fn single_cavity_collapse(
    rho: &DensityOperator,
    label: &str,
) -> Result<(DensityOperator, f64)> {
    let idx = rho.space().factor_index(label)?;
    let f = &rho.space().factors()[idx];
    let mode = ModeSpace::new(f.label(), f.dim() - 1);
    let a = annihilation(&mode).embed(rho.space())?;
    let collapsed = rho.op().sandwich(&a)?;
    let weight = collapsed.trace().re;
    if weight <= WEIGHT_FLOOR {
        return Err(Error::NoPhoton { weight });
    }
    let out = DensityOperator::new_structurally_positive(
        collapsed.scale(Complex64::new(1.0 / weight, 0.0)),
    )?;
    Ok((out, weight))
}

/// Unnormalized detection probability Tr[(a+e^{ig}b) rho (a^†+e^{-ig}b^†)].
pub fn detection_weight(state: &TwoCavityState, event: &DetectionEvent) -> Result<f64> {
    let j = state.jump_operator(event)?;
    let w = state.rho().op().sandwich(&j)?.trace().re;
    if w < -1e-10 {
        return Err(Error::InvalidDensity(format!(
            "negative detection weight {w:.3e}"
        )));
    }
    Ok(w.max(0.0))
}

/// Detection-conditioned collapse: rho_1 = J rho J^† / weight.
pub fn collapse_first_detection(
    state: &TwoCavityState,
    event: &DetectionEvent,
) -> Result<(TwoCavityState, f64)> {
    let j = state.jump_operator(event)?;
    let collapsed = state.rho().op().sandwich(&j)?;
    let weight = collapsed.trace().re;
    if weight <= WEIGHT_FLOOR {
        return Err(Error::NoPhoton { weight });
    }
    let rho1 = DensityOperator::new_structurally_positive(
        collapsed.scale(Complex64::new(1.0 / weight, 0.0)),
    )?;
    Ok((
        TwoCavityState {
            rho: rho1,
            label_a: state.label_a.clone(),
            label_b: state.label_b.clone(),
        },
        weight,
    ))
}

fn require_number_diagonal(state: &TwoCavityState) -> Result<()> {
    if !state.is_number_diagonal()? {
        return Err(Error::InvalidDensity(
            "cavities are not number-diagonal; closed form does not apply".into(),
        ));
    }
    Ok(())
}

/// Numeric phase-difference distribution of the state after one detection.
/// Requires number-diagonal cavities so the analytic companion
/// [`analytic_post_collapse_phase_distribution`] applies.
pub fn post_collapse_phase_distribution(
    state: &TwoCavityState,
    event: &DetectionEvent,
    p_max: usize,
    grid_size: usize,
) -> Result<PhaseDistribution> {
    require_number_diagonal(state)?;
    let (collapsed, _) = collapse_first_detection(state, event)?;
    phase::phase_difference_distribution(&collapsed.fields()?, p_max, grid_size, -PI)
}

/// Closed form for the post-collapse distribution of number-diagonal
/// cavities: 1/(2pi) + (1/pi) E[sqrt(n_a)] E[sqrt(n_b)] / (nbar_a + nbar_b)
/// cos(Delta - gamma_eff).
pub fn analytic_post_collapse_phase_distribution(
    state: &TwoCavityState,
    event: &DetectionEvent,
    grid_size: usize,
) -> Result<PhaseDistribution> {
    require_number_diagonal(state)?;
    let sqrt_mean = |label: &str| -> Result<f64> {
        let reduced = state.reduced(label)?;
        let mode = state.mode(label)?;
        Ok(reduced
            .expectation(&crate::hilbert::sqrt_number_operator(&mode))?
            .re)
    };
    let ea = sqrt_mean(&state.label_a)?;
    let eb = sqrt_mean(&state.label_b)?;
    let na = state.mean_photon(&state.label_a)?;
    let nb = state.mean_photon(&state.label_b)?;
    if na + nb <= WEIGHT_FLOOR {
        return Err(Error::NoPhoton { weight: na + nb });
    }
    let amp = ea * eb / (na + nb) / PI;
    let gamma = event.effective_gamma();
    let h = 2.0 * PI / grid_size as f64;
    let density = (0..grid_size)
        .map(|k| {
            let delta = -PI + k as f64 * h;
            1.0 / (2.0 * PI) + amp * (delta - gamma).cos()
        })
        .collect();
    PhaseDistribution::new(-PI, density)
}

/// Weights and ratio for the second detection after a first click at
/// detector 1.
#[derive(Debug, Clone)]
pub struct RatioReport {
    pub first_weight: f64,
    pub p11: f64,
    pub p12: f64,
    pub ratio_numeric: f64,
    pub ratio_analytic: f64,
}

/// Closed-form second-detection ratio for number-diagonal cavities:
/// (E[n_a^2] + E[n_b^2] - nbar_a - nbar_b) / (same + 4 nbar_a nbar_b).
pub fn analytic_second_detection_ratio(
    na_mean: f64,
    nb_mean: f64,
    na_sq: f64,
    nb_sq: f64,
) -> f64 {
    let numerator = na_sq + nb_sq - na_mean - nb_mean;
    let denominator = numerator + 4.0 * na_mean * nb_mean;
    if denominator <= WEIGHT_FLOOR {
        return 0.0;
    }
    numerator / denominator
}

pub fn second_detection_ratio(state: &TwoCavityState, gamma: f64) -> Result<RatioReport> {
    require_number_diagonal(state)?;
    let first = DetectionEvent::new(1, gamma)?;
    let (rho1, first_weight) = collapse_first_detection(state, &first)?;
    let p11 = detection_weight(&rho1, &DetectionEvent::new(1, gamma)?)?;
    let p12 = detection_weight(&rho1, &DetectionEvent::new(2, gamma)?)?;
    if p11 <= WEIGHT_FLOOR {
        return Err(Error::NoPhoton { weight: p11 });
    }
    let moments = |label: &str| -> Result<(f64, f64)> {
        let reduced = state.reduced(label)?;
        let mode = state.mode(label)?;
        let n = number_operator(&mode);
        let mean = reduced.expectation(&n)?.re;
        let sq = reduced.expectation(&n.mul(&n)?)?.re;
        Ok((mean, sq))
    };
    let (na, na_sq) = moments(&state.label_a.clone())?;
    let (nb, nb_sq) = moments(&state.label_b.clone())?;
    Ok(RatioReport {
        first_weight,
        p11,
        p12,
        ratio_numeric: p12 / p11,
        ratio_analytic: analytic_second_detection_ratio(na, nb, na_sq, nb_sq),
    })
}

/// One step of a sequential detection run.
#[derive(Debug, Clone)]
pub struct SimulationStep {
    pub event_index: usize,
    pub detector: u8,
    pub weight1: f64,
    pub weight2: f64,
    /// Circular variance of P(Delta) about its peak after this event.
    pub variance: f64,
}

#[derive(Debug, Clone)]
pub struct SimulationRun {
    pub seed: u64,
    pub steps: Vec<SimulationStep>,
    pub final_state: TwoCavityState,
}

/// Simulate `n_events` successive detections. Each step recomputes both
/// detector weights from the current state, samples a detector in
/// proportion, collapses, and records the phase-difference variance.
/// Deterministic for a given seed.
pub fn sequential_detection_simulation(
    initial: &TwoCavityState,
    gamma: f64,
    n_events: usize,
    seed: u64,
    p_max: usize,
    grid_size: usize,
) -> Result<SimulationRun> {
    let available =
        initial.mean_photon(initial.label_a())? + initial.mean_photon(initial.label_b())?;
    if available + 1e-9 < n_events as f64 {
        return Err(Error::NoPhoton { weight: available });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = initial.clone();
    let mut steps = Vec::with_capacity(n_events);
    for event_index in 0..n_events {
        let w1 = detection_weight(&state, &DetectionEvent::new(1, gamma)?)?;
        let w2 = detection_weight(&state, &DetectionEvent::new(2, gamma)?)?;
        let total = w1 + w2;
        if total <= WEIGHT_FLOOR {
            return Err(Error::NoPhoton { weight: total });
        }
        let detector = if rng.random::<f64>() < w1 / total { 1 } else { 2 };
        let event = DetectionEvent::new(detector, gamma)?;
        let (next, _) = collapse_first_detection(&state, &event)?;
        state = next;
        let dist = phase::peak_centered_distribution(&state.fields()?, p_max, grid_size)?;
        let variance = dist.circular_variance(dist.peak());
        steps.push(SimulationStep { event_index, detector, weight1: w1, weight2: w2, variance });
    }
    Ok(SimulationRun { seed, steps, final_state: state })
}

/// A preparation ensemble of coherent states with fixed modulus and a
/// discrete phase grid.
#[derive(Debug, Clone)]
pub struct CoherentEnsemble {
    modulus: f64,
    phases: Vec<f64>,
    weights: Vec<f64>,
}

impl CoherentEnsemble {
    pub fn new(modulus: f64, phases: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if phases.is_empty() || phases.len() != weights.len() {
            return Err(Error::InvalidConfig(
                "phase grid and weights must be nonempty and equal length".into(),
            ));
        }
        if weights.iter().any(|&w| w < 0.0) {
            return Err(Error::InvalidConfig("negative ensemble weight".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidConfig(format!(
                "ensemble weights sum to {total}, need 1"
            )));
        }
        Ok(Self { modulus, phases, weights })
    }

    /// Uniform grid of `m` phases 2 pi i / m with equal weights.
    pub fn uniform(modulus: f64, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidConfig("empty phase grid".into()));
        }
        let phases = (0..m).map(|i| 2.0 * PI * i as f64 / m as f64).collect();
        Self::new(modulus, phases, vec![1.0 / m as f64; m])
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn modulus(&self) -> f64 {
        self.modulus
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn amplitude(&self, i: usize) -> Complex64 {
        Complex64::from_polar(self.modulus, self.phases[i])
    }

    pub fn member(&self, i: usize, mode: &ModeSpace) -> Result<StateVector> {
        coherent_state(self.amplitude(i), mode)
    }

    /// Ensemble-averaged density sum_i P(i) |alpha_i><alpha_i|.
    pub fn density(&self, mode: &ModeSpace) -> Result<DensityOperator> {
        let space: CompositeSpace = mode.into();
        let mut acc = LinearOperator::zero(space);
        for i in 0..self.len() {
            if self.weights[i] == 0.0 {
                continue;
            }
            let member = self.member(i, mode)?;
            acc = acc.add(&member.outer().scale(Complex64::new(self.weights[i], 0.0)))?;
        }
        DensityOperator::new_structurally_positive(acc)
    }
}

/// Posterior over the joint preparation grid after one detection.
#[derive(Debug, Clone)]
pub struct Retrodiction {
    /// P(i, k | event), indexed [i][k].
    pub weights: Vec<Vec<f64>>,
    pub posterior: DensityOperator,
}

/// Retrodict which coherent pair was prepared, given the click:
/// P(i,k|event) proportional to P_a(i) P_b(k) |alpha_i + e^{ig} beta_k|^2.
/// The posterior density recombines the same components, so it equals the
/// detection collapse of the averaged prior.
pub fn retrodict_coherent_ensemble(
    ens_a: &CoherentEnsemble,
    ens_b: &CoherentEnsemble,
    mode_a: &ModeSpace,
    mode_b: &ModeSpace,
    event: &DetectionEvent,
) -> Result<Retrodiction> {
    let phase = Complex64::from_polar(1.0, event.effective_gamma());
    let ma = ens_a.len();
    let mb = ens_b.len();
    let mut weights = vec![vec![0.0; mb]; ma];
    let mut total = 0.0;
    for (i, row) in weights.iter_mut().enumerate() {
        for (k, w) in row.iter_mut().enumerate() {
            *w = ens_a.weight(i)
                * ens_b.weight(k)
                * (ens_a.amplitude(i) + phase * ens_b.amplitude(k)).norm_sqr();
            total += *w;
        }
    }
    if total <= WEIGHT_FLOOR {
        return Err(Error::DegenerateNormalization { trace: total });
    }
    for row in weights.iter_mut() {
        for w in row.iter_mut() {
            *w /= total;
        }
    }
    // Accumulate sum_{i,k} w_ik A_i (x) B_k by first summing over k: one
    // Kronecker product per i instead of per (i, k) pair.
    let b_outers: Vec<LinearOperator> = (0..mb)
        .map(|k| Ok(ens_b.member(k, mode_b)?.outer()))
        .collect::<Result<_>>()?;
    let joint_space = CompositeSpace::from(mode_a).join(&mode_b.into())?;
    let mut acc = LinearOperator::zero(joint_space);
    for (i, row) in weights.iter().enumerate() {
        let mut inner = LinearOperator::zero(CompositeSpace::from(mode_b));
        let mut row_mass = 0.0;
        for (k, &w) in row.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            inner = inner.add(&b_outers[k].scale(Complex64::new(w, 0.0)))?;
            row_mass += w;
        }
        if row_mass == 0.0 {
            continue;
        }
        let a_outer = ens_a.member(i, mode_a)?.outer();
        acc = acc.add(&LinearOperator::tensor(&[&a_outer, &inner])?)?;
    }
    let posterior = DensityOperator::new_structurally_positive(acc)?;
    Ok(Retrodiction { weights, posterior })
}
