//! Python bindings: build a synthesis for a scenario, query the feedback,
//! run the closed loop and the grid oracle.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use landfillctl::config::{builtin_case, CaseConfig, BUILTIN_NAMES};
use landfillctl::geometry::BuildConfig;
use landfillctl::model::State;
use landfillctl::oracle::solve_hjb;
use landfillctl::simulate::{simulate_closed_loop, FeedbackLaw};
use landfillctl::synthesis::{ControlDecision, SynthesisGeometry};

fn err(e: landfillctl::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A fully built minimal-time synthesis for one scenario.
#[pyclass]
struct Synthesis {
    geom: SynthesisGeometry,
    cfg: BuildConfig,
}

#[pymethods]
impl Synthesis {
    /// Build from one of the embedded benchmark scenarios.
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        let case = builtin_case(name).ok_or_else(|| {
            PyValueError::new_err(format!("unknown case `{name}`; see builtin_names()"))
        })?;
        Synthesis::from_case(&case)
    }

    /// Build from configuration text in the `key = value` format.
    #[staticmethod]
    fn from_config(text: &str) -> PyResult<Self> {
        let case = CaseConfig::parse(text).map_err(err)?;
        Synthesis::from_case(&case)
    }

    /// Feedback regime name.
    #[getter]
    fn regime(&self) -> &'static str {
        self.geom.regime.name()
    }

    /// Synthesis landmarks as a dict.
    fn landmarks<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
        let d = pyo3::types::PyDict::new(py);
        d.set_item("s2_star", self.geom.singular.s2_star)?;
        d.set_item("s1_min", self.geom.singular.s1_min)?;
        d.set_item("s1_star", self.geom.singular.s1_star)?;
        d.set_item("s1_bar", self.geom.s1_bar)?;
        d.set_item("sigma1_under", self.geom.partition.sigma1_under)?;
        Ok(d)
    }

    /// Optimal control at a state; `None` once inside the target box.
    fn feedback(&self, s1: f64, s2: f64) -> Option<f64> {
        match self.geom.feedback(State::new(s1, s2)) {
            ControlDecision::TargetReached => None,
            d => d.value(),
        }
    }

    /// Run the closed loop; returns a dict with the sampled trajectory,
    /// the switch log and the arc word.
    fn simulate<'py>(
        &self,
        py: Python<'py>,
        s1: f64,
        s2: f64,
    ) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
        let traj = simulate_closed_loop(
            &self.geom,
            FeedbackLaw::OptimalSynthesis,
            State::new(s1, s2),
            &self.cfg,
        )
        .map_err(err)?;
        let d = pyo3::types::PyDict::new(py);
        d.set_item("t", traj.nodes.iter().map(|n| n.0).collect::<Vec<_>>())?;
        d.set_item("s1", traj.nodes.iter().map(|n| n.1.s1).collect::<Vec<_>>())?;
        d.set_item("s2", traj.nodes.iter().map(|n| n.1.s2).collect::<Vec<_>>())?;
        d.set_item("u", traj.nodes.iter().map(|n| n.2).collect::<Vec<_>>())?;
        d.set_item("arc_word", traj.arc_word())?;
        d.set_item("final_time", traj.final_time)?;
        d.set_item(
            "switches",
            traj.switches
                .iter()
                .map(|sw| (sw.t, sw.state.s1, sw.state.s2, sw.u_from, sw.u_to))
                .collect::<Vec<_>>(),
        )?;
        Ok(d)
    }

    /// Final time of the always-convergent fallback law from a state.
    fn attainability_time(&self, s1: f64, s2: f64) -> PyResult<f64> {
        let traj = simulate_closed_loop(
            &self.geom,
            FeedbackLaw::Attainability,
            State::new(s1, s2),
            &self.cfg,
        )
        .map_err(err)?;
        Ok(traj.final_time)
    }

    /// Boundary curve of the absorbing set as `(s1, s2)` pairs.
    fn sigma2_curve(&self) -> Vec<(f64, f64)> {
        self.geom.partition.sigma2.points().collect()
    }

    /// Switching locus reached by holds near the target, if nonempty.
    fn c0_curve(&self) -> Option<Vec<(f64, f64)>> {
        self.geom.partition.c0.as_ref().map(|c| c.points().collect())
    }

    /// Switch curve above the singular level, if this regime has one.
    fn c1_curve(&self) -> Option<Vec<(f64, f64)>> {
        self.geom.switching_curve.as_ref().map(|c| c.points().collect())
    }

    /// Frame curve out of the end singular state, if built.
    fn xi_star_curve(&self) -> Option<Vec<(f64, f64)>> {
        self.geom.xi_star.as_ref().map(|c| c.points().collect())
    }

    /// Solve the minimal-time grid and interpolate it at the given states.
    fn oracle_values(&self, n: usize, states: Vec<(f64, f64)>) -> PyResult<Vec<Option<f64>>> {
        let grid =
            solve_hjb(&self.geom.params, &self.geom.target, n, &self.cfg).map_err(err)?;
        Ok(states
            .into_iter()
            .map(|(a, b)| grid.value_at(State::new(a, b)).filter(|v| *v < grid.cap))
            .collect())
    }
}

impl Synthesis {
    fn from_case(case: &CaseConfig) -> PyResult<Self> {
        let (params, target) = case.to_model().map_err(err)?;
        let cfg = BuildConfig::default();
        let geom = SynthesisGeometry::build(&params, &target, &cfg).map_err(err)?;
        Ok(Synthesis { geom, cfg })
    }
}

/// Names of the embedded benchmark scenarios.
#[pyfunction]
fn builtin_names() -> Vec<&'static str> {
    BUILTIN_NAMES.to_vec()
}

#[pymodule]
fn landfillctl_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Synthesis>()?;
    m.add_function(wrap_pyfunction!(builtin_names, m)?)?;
    Ok(())
}
