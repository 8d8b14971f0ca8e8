//! Growth kinetics, solubilization law and the reduced planar dynamics.
//!
//! The state is the pair of substrate concentrations `(s1, s2)` evolving on
//! the invariant triangle `0 <= s1`, `0 <= s2`, `s1 + s2 < M`. The
//! recirculation control `u` in `[0, 1]` moves mass from the unsolubilized
//! pool `s1` into the solubilized pool `s2`, which is consumed by the biomass
//! `M - s1 - s2`.

use crate::error::Error;

/// Specific growth rate of the biomass as a function of solubilized substrate.
///
/// The Haldane form is inhibited at high concentrations and peaks at
/// `sqrt(ks * ki)`; the Monod form is strictly increasing (reported peak is
/// the `+inf` sentinel).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowthLaw {
    Haldane { mu_bar: f64, ks: f64, ki: f64 },
    Monod { mu_bar: f64, ks: f64 },
}

impl GrowthLaw {
    /// Growth rate at solubilized-substrate concentration `s2 >= 0`.
    pub fn mu(&self, s2: f64) -> f64 {
        assert!(s2 >= 0.0, "growth rate queried at negative concentration {s2}");
        match *self {
            GrowthLaw::Haldane { mu_bar, ks, ki } => mu_bar * s2 / (ks + s2 + s2 * s2 / ki),
            GrowthLaw::Monod { mu_bar, ks } => mu_bar * s2 / (ks + s2),
        }
    }

    /// Analytic derivative of [`GrowthLaw::mu`].
    pub fn mu_prime(&self, s2: f64) -> f64 {
        assert!(s2 >= 0.0, "growth-rate slope queried at negative concentration {s2}");
        match *self {
            GrowthLaw::Haldane { mu_bar, ks, ki } => {
                let den = ks + s2 + s2 * s2 / ki;
                mu_bar * (ks - s2 * s2 / ki) / (den * den)
            }
            GrowthLaw::Monod { mu_bar, ks } => {
                let den = ks + s2;
                mu_bar * ks / (den * den)
            }
        }
    }

    /// Concentration at which the growth rate peaks; `+inf` for Monod.
    pub fn s2_star(&self) -> f64 {
        match *self {
            GrowthLaw::Haldane { ks, ki, .. } => (ks * ki).sqrt(),
            GrowthLaw::Monod { .. } => f64::INFINITY,
        }
    }

    pub fn mu_bar(&self) -> f64 {
        match *self {
            GrowthLaw::Haldane { mu_bar, .. } | GrowthLaw::Monod { mu_bar, .. } => mu_bar,
        }
    }
}

/// Solubilization speed under maximal recirculation, `f(s1) = slope * s1`.
///
/// Linear is the only shipped law; downstream code only consumes `rate` and
/// `rate_prime`, so other increasing laws with `f(0) = 0` slot in here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolubilizationLaw {
    pub slope: f64,
}

impl SolubilizationLaw {
    pub fn rate(&self, s1: f64) -> f64 {
        self.slope * s1
    }

    pub fn rate_prime(&self, _s1: f64) -> f64 {
        self.slope
    }
}

/// Complete parameter set of one site: kinetics, solubilization and the
/// conserved total mass `M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub growth: GrowthLaw,
    pub solub: SolubilizationLaw,
    pub total_mass: f64,
}

impl ModelParams {
    pub fn mu(&self, s2: f64) -> f64 {
        self.growth.mu(s2)
    }

    pub fn mu_prime(&self, s2: f64) -> f64 {
        self.growth.mu_prime(s2)
    }

    pub fn f(&self, s1: f64) -> f64 {
        self.solub.rate(s1)
    }

    pub fn f_prime(&self, s1: f64) -> f64 {
        self.solub.rate_prime(s1)
    }

    pub fn s2_star(&self) -> f64 {
        self.growth.s2_star()
    }

    /// Biomass concentration `M - s1 - s2`.
    pub fn biomass(&self, x: State) -> f64 {
        self.total_mass - x.s1 - x.s2
    }

    /// Right-hand side of the planar dynamics, unchecked.
    ///
    /// `ds1 = -u f(s1)`, `ds2 = u f(s1) - mu(s2) (M - s1 - s2)`. Total on
    /// the line `s1 + s2 = M` the biomass factor vanishes and the field is
    /// tangent to it; the axis `s1 = 0` is likewise invariant.
    pub fn field(&self, x: State, u: f64) -> (f64, f64) {
        let transfer = u * self.f(x.s1);
        (-transfer, transfer - self.mu(x.s2) * self.biomass(x))
    }
}

/// Planar state: unsolubilized (`s1`) and solubilized (`s2`) concentrations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub s1: f64,
    pub s2: f64,
}

impl State {
    pub fn new(s1: f64, s2: f64) -> Self {
        State { s1, s2 }
    }

    /// Interior of the invariant domain.
    pub fn in_domain(&self, total_mass: f64) -> bool {
        self.s1 >= 0.0 && self.s2 >= 0.0 && {
            let sum = self.s1 + self.s2;
            sum > 0.0 && sum < total_mass
        }
    }

    /// Closure of the invariant domain.
    pub fn in_domain_closure(&self, total_mass: f64) -> bool {
        self.s1 >= 0.0 && self.s2 >= 0.0 && self.s1 + self.s2 <= total_mass
    }
}

impl From<[f64; 2]> for State {
    fn from(y: [f64; 2]) -> Self {
        State { s1: y[0], s2: y[1] }
    }
}

impl From<State> for [f64; 2] {
    fn from(x: State) -> Self {
        [x.s1, x.s2]
    }
}

/// Rectangular target: both concentrations at or below their thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetBox {
    pub s1_bar: f64,
    pub s2_bar: f64,
}

impl TargetBox {
    pub fn contains(&self, x: State) -> bool {
        x.s1 <= self.s1_bar && x.s2 <= self.s2_bar
    }

    /// The corner state `(s1_bar, s2_bar)`.
    pub fn corner(&self) -> State {
        State::new(self.s1_bar, self.s2_bar)
    }
}

/// Checked evaluation of the planar vector field.
///
/// Rejects controls outside `[0, 1]` and states outside the closure of the
/// domain; use [`ModelParams::field`] in integrator inner loops.
pub fn vector_field(params: &ModelParams, x: State, u: f64) -> (f64, f64) {
    assert!((0.0..=1.0).contains(&u), "control {u} outside [0, 1]");
    assert!(
        x.in_domain_closure(params.total_mass),
        "state ({}, {}) outside the closure of the domain (M = {})",
        x.s1,
        x.s2,
        params.total_mass
    );
    params.field(x, u)
}

/// One failed standing hypothesis with a witness point.
#[derive(Debug, Clone)]
pub struct HypothesisViolation {
    pub hypothesis: &'static str,
    pub witness: f64,
    pub detail: String,
}

/// Outcome of [`check_hypotheses`].
#[derive(Debug, Clone)]
pub struct HypothesisReport {
    pub s2_star: f64,
    /// `s2_star < M`: the singular locus intersects the domain.
    pub singular_arc_exists: bool,
    pub violations: Vec<HypothesisViolation>,
}

impl HypothesisReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<HypothesisReport, Error> {
        if self.ok() {
            Ok(self)
        } else {
            let v = &self.violations[0];
            Err(Error::Hypothesis(format!(
                "{} violated at {} ({})",
                v.hypothesis, v.witness, v.detail
            )))
        }
    }
}

const HYPOTHESIS_SAMPLES: usize = 2048;

/// Verify the standing structural hypotheses on a dense sample of `[0, M]`.
///
/// The solubilization law must be increasing with `f(0) = 0`; the growth law
/// must vanish only at zero and be unimodal with peak `s2_star` (or strictly
/// increasing). Any violation aborts synthesis downstream.
pub fn check_hypotheses(params: &ModelParams) -> HypothesisReport {
    let mut violations = Vec::new();
    let m = params.total_mass;

    if !(m > 0.0) || !m.is_finite() {
        violations.push(HypothesisViolation {
            hypothesis: "total mass",
            witness: m,
            detail: "M must be positive and finite".into(),
        });
        return HypothesisReport { s2_star: f64::NAN, singular_arc_exists: false, violations };
    }

    if params.f(0.0) != 0.0 {
        violations.push(HypothesisViolation {
            hypothesis: "H0",
            witness: 0.0,
            detail: format!("f(0) = {} instead of 0", params.f(0.0)),
        });
    }

    let (mu_bar, ks, ki) = match params.growth {
        GrowthLaw::Haldane { mu_bar, ks, ki } => (mu_bar, ks, Some(ki)),
        GrowthLaw::Monod { mu_bar, ks } => (mu_bar, ks, None),
    };
    if !(mu_bar > 0.0) || !(ks > 0.0) || ki.is_some_and(|k| !(k > 0.0)) {
        violations.push(HypothesisViolation {
            hypothesis: "H1",
            witness: 0.0,
            detail: "kinetic constants must be positive".into(),
        });
        return HypothesisReport { s2_star: f64::NAN, singular_arc_exists: false, violations };
    }

    let s2_star = params.s2_star();
    let h = m / HYPOTHESIS_SAMPLES as f64;
    let mut prev_f = params.f(0.0);
    for i in 1..=HYPOTHESIS_SAMPLES {
        let s = i as f64 * h;
        let fs = params.f(s);
        if fs <= prev_f {
            violations.push(HypothesisViolation {
                hypothesis: "H0",
                witness: s,
                detail: format!("f not increasing: f({s}) = {fs} <= {prev_f}"),
            });
            break;
        }
        prev_f = fs;
    }

    if params.mu(0.0) != 0.0 {
        violations.push(HypothesisViolation {
            hypothesis: "H1",
            witness: 0.0,
            detail: format!("mu(0) = {} instead of 0", params.mu(0.0)),
        });
    }
    for i in 1..=HYPOTHESIS_SAMPLES {
        let s = i as f64 * h;
        if !(params.mu(s) > 0.0) {
            violations.push(HypothesisViolation {
                hypothesis: "H1",
                witness: s,
                detail: format!("mu({s}) = {} not positive", params.mu(s)),
            });
            break;
        }
        // unimodal shape: mu' positive below the peak, negative above
        let slope = params.mu_prime(s);
        let wrong_side = if s < s2_star { slope <= 0.0 } else { slope >= 0.0 };
        if wrong_side && (s - s2_star).abs() > 1e-9 * m.max(s2_star.min(m)) {
            violations.push(HypothesisViolation {
                hypothesis: "H1",
                witness: s,
                detail: format!("mu' has the wrong sign at {s}: {slope}"),
            });
            break;
        }
    }

    HypothesisReport { s2_star, singular_arc_exists: s2_star < m, violations }
}
