//! Symmetric preparation/measurement formalism.
//!
//! A preparation device is a labeled set of positive operators
//! `Lambda_i = P(i) rho_i` with `Tr(sum Lambda_i) = 1`; a measurement is a
//! labeled POM whose elements sum to the identity. Joint, predictive and
//! retrodictive probabilities are all ratios of traces, so scaling any
//! single device operator by a positive constant changes nothing.
//!
//! Retrodiction is only defined over the labels a device actually has: a
//! state that the device cannot prepare has no label and therefore no
//! preparation probability at all.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{CompositeSpace, DensityOperator, LinearOperator};

/// Threshold below which a normalizing trace is treated as degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-14;

const POSITIVITY_TOL: f64 = 1e-10;
const NORMALIZATION_TOL: f64 = 1e-10;

/// One labeled operator of a device.
#[derive(Debug, Clone)]
pub struct DeviceItem {
    pub label: String,
    pub op: LinearOperator,
}

impl DeviceItem {
    pub fn new(label: impl Into<String>, op: LinearOperator) -> Self {
        Self { label: label.into(), op }
    }
}

/// Validation report for a candidate device or POM.
#[derive(Debug, Clone, Default)]
pub struct Diagnostics {
    /// Worst negative-eigenvalue excursion over all items (0 when clean).
    pub positivity_defect: f64,
    /// |Tr(sum) - 1| for preparation devices, max |sum - 1|_elementwise
    /// for POMs.
    pub normalization_defect: f64,
}

impl Diagnostics {
    pub fn is_clean(&self) -> bool {
        self.positivity_defect <= POSITIVITY_TOL
            && self.normalization_defect <= NORMALIZATION_TOL
    }
}

fn positivity_defect(items: &[DeviceItem]) -> Result<f64> {
    let mut worst = 0.0f64;
    for item in items {
        let min = item
            .op
            .eigenvalues_hermitian()?
            .first()
            .copied()
            .unwrap_or(0.0);
        worst = worst.max((-min).max(0.0));
    }
    Ok(worst)
}

fn sum_ops(items: &[DeviceItem]) -> Result<LinearOperator> {
    let mut iter = items.iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::InvalidDevice("device has no items".into()))?;
    let mut acc = first.op.clone();
    for item in iter {
        acc = acc.add(&item.op)?;
    }
    Ok(acc)
}

/// Positivity and trace-normalization report for preparation-device items.
pub fn validate_prep(items: &[DeviceItem]) -> Result<Diagnostics> {
    let total = sum_ops(items)?;
    Ok(Diagnostics {
        positivity_defect: positivity_defect(items)?,
        normalization_defect: (total.trace() - Complex64::new(1.0, 0.0)).norm(),
    })
}

/// Positivity and completeness report for POM items.
pub fn validate_pom(items: &[DeviceItem]) -> Result<Diagnostics> {
    let total = sum_ops(items)?;
    let identity = LinearOperator::identity(total.space().clone());
    Ok(Diagnostics {
        positivity_defect: positivity_defect(items)?,
        normalization_defect: total.max_abs_diff(&identity),
    })
}

/// A preparation device: labeled operators Lambda_i with Tr(sum) = 1.
#[derive(Debug, Clone)]
pub struct PrepDevice {
    items: Vec<DeviceItem>,
}

impl PrepDevice {
    pub fn new(items: Vec<DeviceItem>) -> Result<Self> {
        let diag = validate_prep(&items)?;
        if !diag.is_clean() {
            return Err(Error::InvalidDevice(format!(
                "preparation device invalid: positivity defect {:.3e}, normalization defect {:.3e}",
                diag.positivity_defect, diag.normalization_defect
            )));
        }
        Ok(Self { items })
    }

    pub fn items(&self) -> &[DeviceItem] {
        &self.items
    }

    pub fn space(&self) -> &CompositeSpace {
        self.items[0].op.space()
    }

    pub fn item(&self, label: &str) -> Result<&DeviceItem> {
        self.items
            .iter()
            .find(|it| it.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Lambda = sum_i Lambda_i.
    pub fn total(&self) -> LinearOperator {
        sum_ops(&self.items).expect("device is non-empty")
    }

    /// P(i) = Tr Lambda_i.
    pub fn a_priori_probability(&self, label: &str) -> Result<f64> {
        Ok(self.item(label)?.op.trace().re)
    }

    /// rho_i = Lambda_i / Tr Lambda_i.
    pub fn prepared_state(&self, label: &str) -> Result<DensityOperator> {
        DensityOperator::from_unnormalized(self.item(label)?.op.clone())
    }
}

/// A probability operator measure: labeled elements summing to identity.
#[derive(Debug, Clone)]
pub struct Pom {
    items: Vec<DeviceItem>,
}

impl Pom {
    pub fn new(items: Vec<DeviceItem>) -> Result<Self> {
        let diag = validate_pom(&items)?;
        if !diag.is_clean() {
            return Err(Error::InvalidDevice(format!(
                "POM invalid: positivity defect {:.3e}, completeness defect {:.3e}",
                diag.positivity_defect, diag.normalization_defect
            )));
        }
        Ok(Self { items })
    }

    pub fn items(&self) -> &[DeviceItem] {
        &self.items
    }

    pub fn item(&self, label: &str) -> Result<&DeviceItem> {
        self.items
            .iter()
            .find(|it| it.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }
}

/// P(i, j) = Tr(Lambda_i Gamma_j) / Tr(Lambda Gamma), the symmetric
/// probability rule. `meas` are raw measurement device operators; any
/// overall scale on either device cancels.
pub fn joint_probability(
    prep: &PrepDevice,
    meas: &[DeviceItem],
    i: &str,
    j: &str,
) -> Result<f64> {
    let lambda_i = &prep.item(i)?.op;
    let gamma_j = &meas
        .iter()
        .find(|it| it.label == j)
        .ok_or_else(|| Error::UnknownLabel(j.to_string()))?
        .op;
    let lambda = prep.total();
    let gamma = sum_ops(meas)?;
    let denom = lambda.trace_product(&gamma)?.re;
    if denom <= DEGENERACY_THRESHOLD {
        return Err(Error::DegenerateNormalization { trace: denom });
    }
    Ok(lambda_i.trace_product(gamma_j)?.re / denom)
}

/// P(j|i) = Tr(rho Pi_j), the predictive postulate.
pub fn predictive_probability(rho: &DensityOperator, pom: &Pom, j: &str) -> Result<f64> {
    Ok(rho.expectation(&pom.item(j)?.op)?.re)
}

/// P(i|j) = Tr(Lambda_i Pi_j) / Tr(Lambda Pi_j), the retrodictive rule.
/// The POM element may carry any positive scale.
pub fn retrodictive_probability(
    prep: &PrepDevice,
    pom_element: &LinearOperator,
    i: &str,
) -> Result<f64> {
    let lambda_i = &prep.item(i)?.op;
    let denom = prep.total().trace_product(pom_element)?.re;
    if denom <= DEGENERACY_THRESHOLD {
        return Err(Error::DegenerateNormalization { trace: denom });
    }
    Ok(lambda_i.trace_product(pom_element)?.re / denom)
}

/// rho = sum_i Lambda_i = sum_i P(i) rho_i, validated.
pub fn density_from_prep(prep: &PrepDevice) -> Result<DensityOperator> {
    DensityOperator::new(prep.total())
}

// --- JSON serialization -------------------------------------------------
//
// Wire schema per item: {"label": ..., "matrix": [[re, im], ...]} with the
// matrix flattened row-major. f64 values survive the round trip bit-exactly.

#[derive(Serialize, Deserialize)]
struct ItemJson {
    label: String,
    matrix: Vec<[f64; 2]>,
}

fn item_to_json(item: &DeviceItem) -> ItemJson {
    let d = item.op.dim();
    let mut matrix = Vec::with_capacity(d * d);
    for r in 0..d {
        for c in 0..d {
            let v = item.op.entry(r, c);
            matrix.push([v.re, v.im]);
        }
    }
    ItemJson { label: item.label.clone(), matrix }
}

fn item_from_json(json: ItemJson, space: &CompositeSpace) -> Result<DeviceItem> {
    let d = space.dim();
    if json.matrix.len() != d * d {
        return Err(Error::DimensionMismatch(format!(
            "item '{}' has {} entries, space needs {}",
            json.label,
            json.matrix.len(),
            d * d
        )));
    }
    let op = LinearOperator::from_fn(space.clone(), |r, c| {
        let [re, im] = json.matrix[r * d + c];
        Complex64::new(re, im)
    });
    Ok(DeviceItem::new(json.label, op))
}

pub fn items_to_json_string(items: &[DeviceItem]) -> Result<String> {
    let parsed: Vec<ItemJson> = items.iter().map(item_to_json).collect();
    Ok(serde_json::to_string_pretty(&parsed)?)
}

pub fn items_from_json_str(s: &str, space: &CompositeSpace) -> Result<Vec<DeviceItem>> {
    let parsed: Vec<ItemJson> = serde_json::from_str(s)?;
    parsed
        .into_iter()
        .map(|j| item_from_json(j, space))
        .collect()
}

pub mod fixtures {
    //! The spin-half Stern-Gerlach fixture: Alice prepares |+z> or |-z>
    //! with equal probability, Bob measures along x.

    use super::*;
    use crate::hilbert::{Factor, StateVector};
    use nalgebra::DVector;

    pub fn spin_space() -> CompositeSpace {
        CompositeSpace::single(Factor::new("spin", 2))
    }

    pub fn ket(up: Complex64, down: Complex64) -> StateVector {
        StateVector::new(spin_space(), DVector::from_vec(vec![up, down]))
            .unwrap()
            .normalized()
            .unwrap()
    }

    pub fn plus_z() -> StateVector {
        ket(Complex64::new(1.0, 0.0), Complex64::ZERO)
    }

    pub fn minus_z() -> StateVector {
        ket(Complex64::ZERO, Complex64::new(1.0, 0.0))
    }

    pub fn plus_x() -> StateVector {
        ket(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
    }

    pub fn minus_x() -> StateVector {
        ket(Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0))
    }

    pub fn plus_y() -> StateVector {
        ket(Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0))
    }

    pub fn minus_y() -> StateVector {
        ket(Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0))
    }

    pub fn half(op: LinearOperator) -> LinearOperator {
        op.scale(Complex64::new(0.5, 0.0))
    }

    pub fn z_device() -> PrepDevice {
        PrepDevice::new(vec![
            DeviceItem::new("+z", half(plus_z().outer())),
            DeviceItem::new("-z", half(minus_z().outer())),
        ])
        .unwrap()
    }

    pub fn y_device() -> PrepDevice {
        PrepDevice::new(vec![
            DeviceItem::new("+y", half(plus_y().outer())),
            DeviceItem::new("-y", half(minus_y().outer())),
        ])
        .unwrap()
    }

    pub fn x_pom() -> Pom {
        Pom::new(vec![
            DeviceItem::new("+x", plus_x().outer()),
            DeviceItem::new("-x", minus_x().outer()),
        ])
        .unwrap()
    }

    /// Measurement device operators Gamma_j = Pi_j / 2 for the joint rule.
    pub fn x_meas_halved() -> Vec<DeviceItem> {
        x_pom()
            .items()
            .iter()
            .map(|it| DeviceItem::new(it.label.clone(), half(it.op.clone())))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::hilbert::{coherent_state, number_state, ModeSpace};
    use proptest::prelude::*;

    #[test]
    fn spin_joint_probability() {
        // 2x2 oracle: Tr(Lambda_+ Gamma_+) = |<+z|+x>|^2 / 4 = 1/8,
        // Tr(Lambda Gamma) = Tr(1/2 * 1/2) = 1/2, so P(+,+) = 1/4.
        let prep = z_device();
        let meas = x_meas_halved();
        for i in ["+z", "-z"] {
            for j in ["+x", "-x"] {
                let p = joint_probability(&prep, &meas, i, j).unwrap();
                assert!((p - 0.25).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn single_item_devices_give_unity() {
        let m = ModeSpace::new("f", 3);
        let vac = number_state(0, &m).unwrap();
        let prep = PrepDevice::new(vec![DeviceItem::new("vac", vac.outer())]).unwrap();
        let meas = vec![DeviceItem::new("vac", vac.outer())];
        let p = joint_probability(&prep, &meas, "vac", "vac").unwrap();
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spin_a_priori_probabilities() {
        let prep = z_device();
        assert!((prep.a_priori_probability("+z").unwrap() - 0.5).abs() < 1e-12);
        assert!((prep.a_priori_probability("-z").unwrap() - 0.5).abs() < 1e-12);
        assert!(matches!(
            prep.a_priori_probability("+y"),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn spin_predictive_is_half() {
        let prep = z_device();
        let rho = density_from_prep(&prep).unwrap();
        // rho = identity / 2
        let id_half = LinearOperator::identity(spin_space()).scale(Complex64::new(0.5, 0.0));
        assert!(rho.op().max_abs_diff(&id_half) < 1e-12);
        let pom = x_pom();
        assert!((predictive_probability(&rho, &pom, "+x").unwrap() - 0.5).abs() < 1e-12);
        assert!((predictive_probability(&rho, &pom, "-x").unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn predictive_poisson_statistics() {
        let m = ModeSpace::new("f", 30);
        let rho =
            DensityOperator::from_pure(&coherent_state(Complex64::new(1.0, 0.0), &m).unwrap())
                .unwrap();
        let items: Vec<DeviceItem> = (0..=m.n_max())
            .map(|n| {
                DeviceItem::new(format!("{n}"), number_state(n, &m).unwrap().outer())
            })
            .collect();
        let pom = Pom::new(items).unwrap();
        let mut fact = 1.0;
        for n in 0..6 {
            if n > 0 {
                fact *= n as f64;
            }
            let p = predictive_probability(&rho, &pom, &format!("{n}")).unwrap();
            assert!((p - (-1.0f64).exp() / fact).abs() < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn spin_retrodiction_is_half() {
        let prep = z_device();
        let pom = x_pom();
        let plus_x_el = &pom.item("+x").unwrap().op;
        let p = retrodictive_probability(&prep, plus_x_el, "+z").unwrap();
        assert!((p - 0.5).abs() < 1e-12);
        // |+y> is not a device label: retrodiction over it is not even
        // expressible, which is the point of the label-based API.
        assert!(matches!(
            retrodictive_probability(&prep, plus_x_el, "+y"),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn retrodiction_differs_between_equivalent_devices() {
        // z-device and y-device share rho = 1/2 but retrodict differently
        // for the same +x outcome.
        let pom = x_pom();
        let el = &pom.item("+x").unwrap().op;
        let pz = retrodictive_probability(&z_device(), el, "+z").unwrap();
        let py = retrodictive_probability(&y_device(), el, "+y").unwrap();
        assert!((pz - 0.5).abs() < 1e-12);
        assert!((py - 0.5).abs() < 1e-12);
        // Identical predictions despite distinct compositions.
        let rho_z = density_from_prep(&z_device()).unwrap();
        let rho_y = density_from_prep(&y_device()).unwrap();
        assert!(rho_z.max_abs_diff(&rho_y) < 1e-12);
        // But the devices answer different questions: the z-device cannot
        // retrodict a y preparation at all.
        assert!(retrodictive_probability(&z_device(), el, "+y").is_err());
    }

    #[test]
    fn retrodiction_scale_invariant() {
        let prep = z_device();
        let pom = x_pom();
        let el = pom.item("+x").unwrap().op.clone();
        let scaled = el.scale(Complex64::new(7.3, 0.0));
        let a = retrodictive_probability(&prep, &el, "+z").unwrap();
        let b = retrodictive_probability(&prep, &scaled, "+z").unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn density_from_spin_prep_is_maximally_mixed() {
        let rho = density_from_prep(&z_device()).unwrap();
        let expect = LinearOperator::identity(spin_space()).scale(Complex64::new(0.5, 0.0));
        assert!(rho.op().max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn coherent_phase_ensemble_approaches_poisson_diagonal() {
        // 64 coherent states uniformly spread in phase, |alpha|^2 = 4,
        // mixed with equal weight: diagonal approaches the Poisson weights
        // and off-diagonals are suppressed to grid error.
        let m = ModeSpace::new("f", 30);
        let modulus = 2.0;
        let points = 64;
        let items: Vec<DeviceItem> = (0..points)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / points as f64;
                let alpha = Complex64::from_polar(modulus, theta);
                let proj = coherent_state(alpha, &m).unwrap().outer();
                DeviceItem::new(
                    format!("{k}"),
                    proj.scale(Complex64::new(1.0 / points as f64, 0.0)),
                )
            })
            .collect();
        let prep = PrepDevice::new(items).unwrap();
        let rho = density_from_prep(&prep).unwrap();
        let mut max_diag = 0.0f64;
        let mut max_off = 0.0f64;
        for r in 0..m.dim() {
            for c in 0..m.dim() {
                let v = rho.op().entry(r, c).norm();
                if r == c {
                    max_diag = max_diag.max(v);
                    let poisson = crate::hilbert::poisson_weight(4.0, r);
                    assert!((rho.op().entry(r, r).re - poisson).abs() < 1e-6, "n = {r}");
                } else {
                    max_off = max_off.max(v);
                }
            }
        }
        assert!(max_off < 1e-3 * max_diag);
    }

    #[test]
    fn pom_diagnostics_report_defects() {
        let pom = x_pom();
        let clean = validate_pom(pom.items()).unwrap();
        assert!(clean.is_clean());
        assert!(clean.normalization_defect < 1e-12);
        // Missing element: completeness defect is |sum - 1|_max = 1/2.
        let missing = vec![pom.items()[0].clone()];
        let diag = validate_pom(&missing).unwrap();
        assert!((diag.normalization_defect - 0.5).abs() < 1e-12);
    }

    #[test]
    fn prep_diagnostics_report_defects() {
        let scaled: Vec<DeviceItem> = z_device()
            .items()
            .iter()
            .map(|it| {
                DeviceItem::new(it.label.clone(), it.op.scale(Complex64::new(0.9, 0.0)))
            })
            .collect();
        let diag = validate_prep(&scaled).unwrap();
        assert!((diag.normalization_defect - 0.1).abs() < 1e-12);
    }

    #[test]
    fn json_roundtrip_bit_exact() {
        let prep = z_device();
        let s = items_to_json_string(prep.items()).unwrap();
        let back = items_from_json_str(&s, &spin_space()).unwrap();
        for (a, b) in prep.items().iter().zip(&back) {
            assert_eq!(a.label, b.label);
            // Bit-exact: compare raw f64 representations.
            for r in 0..2 {
                for c in 0..2 {
                    let x = a.op.entry(r, c);
                    let y = b.op.entry(r, c);
                    assert_eq!(x.re.to_bits(), y.re.to_bits());
                    assert_eq!(x.im.to_bits(), y.im.to_bits());
                }
            }
        }
    }

    /// Random valid preparation device over a given dimension: random pure
    /// projectors with random positive weights.
    pub(crate) fn random_device(
        dim: usize,
        n_labels: usize,
        seed: u64,
    ) -> (PrepDevice, Vec<DensityOperator>) {
        use crate::hilbert::{Factor, StateVector};
        use nalgebra::DVector;
        let space = CompositeSpace::single(Factor::new("s", dim));
        let mut s = seed.max(1);
        let mut rng = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut weights: Vec<f64> = (0..n_labels).map(|_| rng() + 0.05).collect();
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        let mut items = Vec::new();
        let mut states = Vec::new();
        for (k, w) in weights.iter().enumerate() {
            let amps =
                DVector::from_fn(dim, |_, _| Complex64::new(rng() - 0.5, rng() - 0.5));
            let psi = StateVector::new(space.clone(), amps)
                .unwrap()
                .normalized()
                .unwrap();
            states.push(DensityOperator::from_pure(&psi).unwrap());
            items.push(DeviceItem::new(
                format!("{k}"),
                psi.outer().scale(Complex64::new(*w, 0.0)),
            ));
        }
        (PrepDevice::new(items).unwrap(), states)
    }

    /// Random POM: random positive operators completed to identity.
    pub(crate) fn random_pom(dim: usize, n_labels: usize, seed: u64) -> Pom {
        use crate::hilbert::Factor;
        use nalgebra::DMatrix;
        let space = CompositeSpace::single(Factor::new("s", dim));
        let mut s = seed.max(1);
        let mut rng = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut items = Vec::new();
        let mut remaining = LinearOperator::identity(space.clone());
        for k in 0..n_labels - 1 {
            // Random PSD operator scaled to stay below the remaining slack.
            let g = DMatrix::from_fn(dim, dim, |_, _| {
                Complex64::new(rng() - 0.5, rng() - 0.5)
            });
            let psd = LinearOperator::new(space.clone(), &g * g.adjoint()).unwrap();
            // Scale so its largest eigenvalue stays small.
            let max_ev = psd
                .eigenvalues_hermitian()
                .unwrap()
                .last()
                .copied()
                .unwrap_or(1.0);
            let el = psd.scale(Complex64::new(0.5 / (max_ev * n_labels as f64), 0.0));
            remaining = remaining.sub(&el).unwrap();
            items.push(DeviceItem::new(format!("{k}"), el));
        }
        items.push(DeviceItem::new(format!("{}", n_labels - 1), remaining));
        Pom::new(items).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        /// Bayes consistency: P(i,j) = P(i) P(j|i) = P(j) P(i|j).
        #[test]
        fn bayes_identity(seed in 1u64..10_000, dim in 2usize..=8, labels in 2usize..=6) {
            let (prep, states) = random_device(dim, labels, seed);
            let pom = random_pom(dim, 3, seed.wrapping_add(99));
            let mut total = 0.0;
            for (k, item) in prep.items().iter().enumerate() {
                let i = item.label.clone();
                for jt in pom.items() {
                    let j = &jt.label;
                    // Joint rule with Gamma_j = Pi_j / dim (any scale works).
                    let meas: Vec<DeviceItem> = pom
                        .items()
                        .iter()
                        .map(|it| DeviceItem::new(
                            it.label.clone(),
                            it.op.scale(Complex64::new(1.0 / dim as f64, 0.0)),
                        ))
                        .collect();
                    let joint = joint_probability(&prep, &meas, &i, j).unwrap();
                    let prior = prep.a_priori_probability(&i).unwrap();
                    let pred = predictive_probability(&states[k], &pom, j).unwrap();
                    prop_assert!((joint - prior * pred).abs() < 1e-10);
                    let rho = density_from_prep(&prep).unwrap();
                    let evidence = predictive_probability(&rho, &pom, j).unwrap();
                    if evidence > 1e-12 {
                        let retro = retrodictive_probability(&prep, &jt.op, &i).unwrap();
                        prop_assert!((joint - evidence * retro).abs() < 1e-10);
                    }
                    total += joint;
                }
            }
            // Joint probabilities sum to 1.
            prop_assert!((total - 1.0).abs() < 1e-9);
        }

        /// Two devices with the same total density give identical
        /// predictive probabilities for every POM element.
        #[test]
        fn predictive_decomposition_invariance(seed in 1u64..10_000) {
            let pom = x_pom();
            let rho_z = density_from_prep(&z_device()).unwrap();
            let rho_y = density_from_prep(&y_device()).unwrap();
            let _ = seed;
            for it in pom.items() {
                let pz = predictive_probability(&rho_z, &pom, &it.label).unwrap();
                let py = predictive_probability(&rho_y, &pom, &it.label).unwrap();
                prop_assert!((pz - py).abs() < 1e-12);
            }
        }
    }
}
