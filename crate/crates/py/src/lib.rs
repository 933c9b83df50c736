//! Python bindings for the phaselight core library.

use phaselight::hilbert::{
    coherent_state, number_operator, number_state, DensityOperator, ModeSpace,
};
use phaselight::phase::PhaseDistribution;
use phaselight::twolaser::{self, DetectionEvent, TwoCavityState};
use phaselight::{jcpulse, prepmeas};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: phaselight::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A validated density operator on a labeled truncated Fock space.
#[pyclass(name = "DensityOperator", skip_from_py_object)]
#[derive(Clone)]
struct PyDensityOperator {
    inner: DensityOperator,
}

#[pymethods]
impl PyDensityOperator {
    /// |n><n| on a mode truncated at n_max.
    #[staticmethod]
    fn number_state(label: &str, n_max: usize, n: usize) -> PyResult<Self> {
        let mode = ModeSpace::new(label, n_max);
        let ket = number_state(n, &mode).map_err(err)?;
        Ok(Self { inner: DensityOperator::from_pure(&ket).map_err(err)? })
    }

    /// |alpha><alpha| with alpha = re + i im, truncated at n_max.
    #[staticmethod]
    fn coherent_state(label: &str, n_max: usize, re: f64, im: f64) -> PyResult<Self> {
        let mode = ModeSpace::new(label, n_max);
        let ket = coherent_state(num_complex::Complex64::new(re, im), &mode).map_err(err)?;
        Ok(Self { inner: DensityOperator::from_pure(&ket).map_err(err)? })
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// <N> for a single-mode state.
    fn mean_photon_number(&self) -> PyResult<f64> {
        let factors = self.inner.space().factors();
        if factors.len() != 1 {
            return Err(PyValueError::new_err("state is not single-mode"));
        }
        let mode = ModeSpace::new(factors[0].label(), factors[0].dim() - 1);
        Ok(self
            .inner
            .expectation(&number_operator(&mode))
            .map_err(err)?
            .re)
    }

    /// Row-major matrix entries as (re, im) pairs.
    fn matrix(&self) -> Vec<Vec<(f64, f64)>> {
        let d = self.inner.dim();
        (0..d)
            .map(|r| {
                (0..d)
                    .map(|c| {
                        let z = self.inner.op().entry(r, c);
                        (z.re, z.im)
                    })
                    .collect()
            })
            .collect()
    }

    fn max_abs_diff(&self, other: &Self) -> f64 {
        self.inner.max_abs_diff(&other.inner)
    }
}

/// Joint state of two leaky cavities ahead of the beam splitter.
#[pyclass(name = "TwoCavityState", skip_from_py_object)]
#[derive(Clone)]
struct PyTwoCavityState {
    inner: TwoCavityState,
}

#[pymethods]
impl PyTwoCavityState {
    #[staticmethod]
    fn from_product(a: &PyDensityOperator, b: &PyDensityOperator) -> PyResult<Self> {
        Ok(Self { inner: TwoCavityState::from_product(&a.inner, &b.inner).map_err(err)? })
    }

    /// |n_a> (x) |n_b| with two levels of truncation headroom.
    #[staticmethod]
    fn from_number_states(n_a: usize, n_b: usize) -> PyResult<Self> {
        let a = PyDensityOperator::number_state("a", n_a + 2, n_a)?;
        let b = PyDensityOperator::number_state("b", n_b + 2, n_b)?;
        Self::from_product(&a, &b)
    }

    fn mean_photon(&self, label: &str) -> PyResult<f64> {
        self.inner.mean_photon(label).map_err(err)
    }

    /// Unnormalized probability of a click at `detector` with phase gamma.
    fn detection_weight(&self, detector: u8, gamma: f64) -> PyResult<f64> {
        let event = DetectionEvent::new(detector, gamma).map_err(err)?;
        twolaser::detection_weight(&self.inner, &event).map_err(err)
    }

    /// Collapse on a detection; returns (collapsed state, weight).
    fn collapse(&self, detector: u8, gamma: f64) -> PyResult<(Self, f64)> {
        let event = DetectionEvent::new(detector, gamma).map_err(err)?;
        let (state, weight) =
            twolaser::collapse_first_detection(&self.inner, &event).map_err(err)?;
        Ok((Self { inner: state }, weight))
    }

    /// (ratio_numeric, ratio_analytic) for a second click at detector 2
    /// versus detector 1, after a first click at detector 1.
    fn second_detection_ratio(&self, gamma: f64) -> PyResult<(f64, f64)> {
        let rep = twolaser::second_detection_ratio(&self.inner, gamma).map_err(err)?;
        Ok((rep.ratio_numeric, rep.ratio_analytic))
    }

    /// Phase-difference distribution of the current two-field state:
    /// (delta grid, density).
    fn phase_distribution(
        &self,
        p_max: usize,
        grid_size: usize,
    ) -> PyResult<(Vec<f64>, Vec<f64>)> {
        let dist = phaselight::phase::phase_difference_distribution(
            &self.inner.fields().map_err(err)?,
            p_max,
            grid_size,
            -std::f64::consts::PI,
        )
        .map_err(err)?;
        Ok((dist.grid().collect(), dist.density().to_vec()))
    }

    /// Numeric distribution after a detector-1 click (number-diagonal
    /// cavities only): (delta grid, density).
    fn post_collapse_phase_distribution(
        &self,
        gamma: f64,
        p_max: usize,
        grid_size: usize,
    ) -> PyResult<(Vec<f64>, Vec<f64>)> {
        let event = DetectionEvent::new(1, gamma).map_err(err)?;
        let dist = twolaser::post_collapse_phase_distribution(
            &self.inner, &event, p_max, grid_size,
        )
        .map_err(err)?;
        Ok((dist.grid().collect(), dist.density().to_vec()))
    }
}

/// Circular variance of a sampled distribution about `center`. The grid is
/// assumed uniform over one 2 pi window starting at `window_origin`.
#[pyfunction]
fn circular_variance(window_origin: f64, density: Vec<f64>, center: f64) -> PyResult<f64> {
    let dist = PhaseDistribution::new(window_origin, density).map_err(err)?;
    Ok(dist.circular_variance(center))
}

/// Sequential detections on |n_a>|n_b>: list of
/// (event_index, detector, weight1, weight2, variance).
#[pyfunction]
fn sequential_simulation(
    n_a: usize,
    n_b: usize,
    gamma: f64,
    n_events: usize,
    seed: u64,
) -> PyResult<Vec<(usize, u8, f64, f64, f64)>> {
    let state = PyTwoCavityState::from_number_states(n_a, n_b)?;
    let run = twolaser::sequential_detection_simulation(
        &state.inner,
        gamma,
        n_events,
        seed,
        n_events.clamp(2, 16),
        1024,
    )
    .map_err(err)?;
    Ok(run
        .steps
        .iter()
        .map(|s| (s.event_index, s.detector, s.weight1, s.weight2, s.variance))
        .collect())
}

/// Ground-state probability after a pi-pulse with a midway pi phase shift
/// of the field. The field state must live on a factor labeled "field".
#[pyfunction]
fn disrupted_pi_pulse_ground_probability(
    field: &PyDensityOperator,
    n_ref: usize,
    coupling: f64,
) -> PyResult<f64> {
    let out = jcpulse::disrupted_pi_pulse(&field.inner, n_ref, coupling).map_err(err)?;
    Ok(out.ground_probability)
}

/// Max deviation of exp(-iHt/2) U(pi) exp(-iHt/2) from U(pi).
#[pyfunction]
fn combined_unitary_deviation(n_max: usize, coupling: f64, n_ref: usize) -> PyResult<f64> {
    jcpulse::combined_unitary_identity_check(n_max, coupling, n_ref).map_err(err)
}

/// P(+z prepared | +x measured) for the equal-weight z preparation device.
#[pyfunction]
fn spin_retrodiction() -> PyResult<f64> {
    let prep = prepmeas::fixtures::z_device();
    let pom = prepmeas::fixtures::x_pom();
    prepmeas::retrodictive_probability(&prep, &pom.item("+x").map_err(err)?.op, "+z")
        .map_err(err)
}

#[pymodule]
fn phaselight_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDensityOperator>()?;
    m.add_class::<PyTwoCavityState>()?;
    m.add_function(wrap_pyfunction!(circular_variance, m)?)?;
    m.add_function(wrap_pyfunction!(sequential_simulation, m)?)?;
    m.add_function(wrap_pyfunction!(disrupted_pi_pulse_ground_probability, m)?)?;
    m.add_function(wrap_pyfunction!(combined_unitary_deviation, m)?)?;
    m.add_function(wrap_pyfunction!(spin_retrodiction, m)?)?;
    Ok(())
}
