//! Regime-dependent optimal feedback and the numerically constructed
//! switching curve.
//!
//! The barrier regimes need one object the partition does not provide: the
//! locus of switch points from hold to maximal recirculation that sits above
//! the singular level. It is assembled by shooting the reduced
//! state/switching-function pair backward (parameterized by `s1`) from every
//! admissible switch state near the target — the switching locus `C0` plus
//! the corner column swept by the terminal covector family — and recording
//! where the normalized switching function returns to zero. Seeds beyond a
//! critical one never return to zero; bisecting the seed path on that
//! transition pins the prior-saturation abscissa, where the curve is closed
//! off at the singular level.

use crate::curve::CurveGraph;
use crate::error::Error;
use crate::geometry::{
    build_partition, classify, singular_control, BuildConfig, Partition, Regime, RegionTag,
    SingularArcInfo,
};
use crate::model::{ModelParams, State, TargetBox};
use crate::ode::{integrate_in_s1, Direction, EventKind, EventSpec};

/// What the controller wants at a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ControlDecision {
    /// The state is inside the target box.
    TargetReached,
    /// Constant control 0 or 1.
    Bang(f64),
    /// Track the singular locus with the given interior control value.
    Singular(f64),
}

impl ControlDecision {
    pub fn value(&self) -> Option<f64> {
        match self {
            ControlDecision::TargetReached => None,
            ControlDecision::Bang(u) | ControlDecision::Singular(u) => Some(*u),
        }
    }
}

/// Everything the feedback laws need, fully computed.
#[derive(Debug, Clone)]
pub struct SynthesisGeometry {
    pub params: ModelParams,
    pub target: TargetBox,
    pub partition: Partition,
    pub singular: SingularArcInfo,
    pub regime: Regime,
    /// Backward maximal-control frame curve from the end singular state
    /// (interior-barrier regime only), with its re-crossing abscissa.
    pub xi_star: Option<CurveGraph>,
    pub xi_recross: Option<f64>,
    /// Switch locus from hold to maximal control, above the singular level.
    pub switching_curve: Option<CurveGraph>,
    /// Prior-saturation abscissa: singular travel must stop there.
    pub s1_bar: Option<f64>,
    /// Half-width of the singular tracking band (absolute).
    pub band: f64,
}

impl SynthesisGeometry {
    pub fn build(params: &ModelParams, target: &TargetBox, cfg: &BuildConfig) -> Result<Self, Error> {
        let (partition, singular) = build_partition(params, target, cfg)?;
        let regime = classify(&singular);
        let mut geom = SynthesisGeometry {
            params: *params,
            target: *target,
            partition,
            singular,
            regime,
            xi_star: None,
            xi_recross: None,
            switching_curve: None,
            s1_bar: None,
            band: cfg.band_factor * params.total_mass,
        };
        match regime {
            Regime::SaturatedInterior => {
                let (xi, recross) = compute_xi_star(params, &geom, cfg)?;
                geom.xi_star = Some(xi);
                geom.xi_recross = Some(recross);
                let (c1, s1_bar) = compute_c1(params, &geom, cfg)?;
                geom.switching_curve = Some(c1);
                geom.s1_bar = Some(s1_bar);
            }
            Regime::SaturatedBoundary => {
                let (c1, s1_bar) = compute_c1(params, &geom, cfg)?;
                geom.switching_curve = Some(c1);
                geom.s1_bar = Some(s1_bar);
            }
            Regime::NoSingular | Regime::AdmissibleSingular => {}
        }
        Ok(geom)
    }

    /// Switch-curve ordinate extended to the whole axis: the singular level
    /// right of the prior-saturation point, the left-limit value left of
    /// the computed span.
    pub fn zeta(&self, s1: f64) -> f64 {
        let curve = self.switching_curve.as_ref().expect("switching curve not built");
        if let Some(s1_bar) = self.s1_bar {
            if s1 >= s1_bar {
                return self.singular.s2_star;
            }
        }
        match curve.eval(s1) {
            Some(v) => v,
            None => {
                if s1 < curve.s1_min() {
                    curve.first().1
                } else {
                    self.singular.s2_star
                }
            }
        }
    }

    /// Dispatch to the regime's feedback law.
    pub fn feedback(&self, x: State) -> ControlDecision {
        match self.regime {
            Regime::NoSingular => self.decide_no_singular(x),
            Regime::AdmissibleSingular => self.decide_admissible(x),
            Regime::SaturatedInterior => self.decide_saturated(x, false),
            Regime::SaturatedBoundary => self.decide_saturated(x, true),
        }
    }

    /// Feedback with the singular branch suppressed, for dispatching right
    /// at a singular exit point.
    pub(crate) fn feedback_bang_only(&self, x: State) -> ControlDecision {
        match self.feedback(x) {
            ControlDecision::Singular(_) => {
                match self.regime {
                    Regime::AdmissibleSingular => {
                        // leaving singular travel at the end singular state
                        // hands over to the constant-control subsets
                        match self.partition.membership(x) {
                            RegionTag::Z1 => ControlDecision::Bang(1.0),
                            _ => ControlDecision::Bang(0.0),
                        }
                    }
                    // barrier regimes exit with maximal control
                    _ => ControlDecision::Bang(1.0),
                }
            }
            other => other,
        }
    }

    fn in_singular_band(&self, x: State) -> bool {
        if !self.singular.exists {
            return false;
        }
        (x.s2 - self.singular.s2_star).abs() <= self.band
    }

    fn decide_no_singular(&self, x: State) -> ControlDecision {
        if self.target.contains(x) {
            return ControlDecision::TargetReached;
        }
        if self.partition.in_extended_target(x) {
            ControlDecision::Bang(0.0)
        } else {
            ControlDecision::Bang(1.0)
        }
    }

    fn decide_admissible(&self, x: State) -> ControlDecision {
        if self.target.contains(x) {
            return ControlDecision::TargetReached;
        }
        let s1_star = self.singular.s1_star.expect("end singular abscissa");
        if self.in_singular_band(x) && x.s1 > s1_star {
            let u = singular_control(&self.params, x.s1);
            // admissible by construction: s1 > s1_star >= s1_min
            return ControlDecision::Singular(u.clamp(0.0, 1.0));
        }
        match self.partition.membership(x) {
            RegionTag::Z1 => ControlDecision::Bang(1.0),
            RegionTag::Z0 { in_extended_target: true } => ControlDecision::Bang(0.0),
            _ => {
                if x.s2 < self.singular.s2_star {
                    ControlDecision::Bang(1.0)
                } else {
                    ControlDecision::Bang(0.0)
                }
            }
        }
    }

    fn decide_saturated(&self, x: State, boundary: bool) -> ControlDecision {
        if self.target.contains(x) {
            return ControlDecision::TargetReached;
        }
        let s2s = self.singular.s2_star;
        let s1_bar = self.s1_bar.expect("prior-saturation abscissa");
        let admissible_span = x.s1 >= s1_bar && x.s1 < self.params.total_mass - s2s;
        if self.in_singular_band(x) && admissible_span {
            let u = singular_control(&self.params, x.s1);
            return ControlDecision::Singular(u.clamp(0.0, 1.0));
        }
        if self.partition.in_extended_target(x) {
            return ControlDecision::Bang(0.0);
        }
        if x.s2 < s2s {
            return ControlDecision::Bang(1.0);
        }
        if boundary {
            // left of every computed switch point the maximal control may
            // run straight to the extended target
            let curve = self.switching_curve.as_ref().expect("switching curve");
            if x.s1 < curve.s1_min() {
                return ControlDecision::Bang(1.0);
            }
        }
        if x.s2 >= self.zeta(x.s1).max(s2s) {
            ControlDecision::Bang(0.0)
        } else {
            // between the singular level and the switch curve: the maximal
            // control continues to the extended target
            ControlDecision::Bang(1.0)
        }
    }
}

/// Feedback for the regime without a singular arc: hold in the extended
/// target, maximal recirculation everywhere else.
pub fn feedback_no_singular(geom: &SynthesisGeometry, x: State) -> Result<ControlDecision, Error> {
    expect_regime(geom, Regime::NoSingular)?;
    Ok(geom.decide_no_singular(x))
}

/// Feedback when the singular arc is admissible down to the end singular
/// state.
pub fn feedback_admissible(geom: &SynthesisGeometry, x: State) -> Result<ControlDecision, Error> {
    expect_regime(geom, Regime::AdmissibleSingular)?;
    Ok(geom.decide_admissible(x))
}

/// Barrier feedback with the end singular state in the interior.
pub fn feedback_saturated(geom: &SynthesisGeometry, x: State) -> Result<ControlDecision, Error> {
    expect_regime(geom, Regime::SaturatedInterior)?;
    Ok(geom.decide_saturated(x, false))
}

/// Barrier feedback with the end singular state on the axis.
pub fn feedback_saturated_boundary(
    geom: &SynthesisGeometry,
    x: State,
) -> Result<ControlDecision, Error> {
    expect_regime(geom, Regime::SaturatedBoundary)?;
    Ok(geom.decide_saturated(x, true))
}

fn expect_regime(geom: &SynthesisGeometry, want: Regime) -> Result<(), Error> {
    if geom.regime == want {
        Ok(())
    } else {
        Err(Error::RegimeMismatch { expected: want.name(), found: geom.regime.name() })
    }
}

/// Always-convergent fallback law: maximal recirculation until the first
/// threshold, then hold.
pub fn attainability_feedback(target: &TargetBox, x: State) -> f64 {
    if x.s1 > target.s1_bar {
        1.0
    } else {
        0.0
    }
}

/// Maximal-control flow out of the end singular state, as a graph over
/// `s1`, continued to its return onto the singular level.
pub fn compute_xi_star(
    params: &ModelParams,
    geom: &SynthesisGeometry,
    cfg: &BuildConfig,
) -> Result<(CurveGraph, f64), Error> {
    let s1_star = geom
        .singular
        .s1_star
        .filter(|v| *v > 0.0)
        .ok_or_else(|| Error::Synthesis("frame curve needs an interior end singular state".into()))?;
    let s1_min = geom.singular.s1_min.expect("saturation abscissa");
    let p = *params;
    let m = p.total_mass;
    let s2s = geom.singular.s2_star;
    let rhs = move |s1: f64, y: &[f64; 1]| [-1.0 + p.mu(y[0]) * (m - s1 - y[0]) / p.f(s1)];
    let events = [EventSpec::new(
        EventKind::CrossesS2Star,
        Direction::Down,
        true,
        move |_s1, y: &[f64; 1]| y[0] - s2s,
    )];
    let sol = integrate_in_s1(
        &rhs,
        [s2s],
        (s1_star, m - s2s),
        &cfg.ode,
        &events,
        cfg.s1_floor_factor * m,
    )?;
    let term = sol.terminated.ok_or_else(|| {
        Error::Synthesis("frame curve failed to re-cross the singular level".into())
    })?;
    let recross = term.t;
    if recross <= s1_min {
        return Err(Error::Synthesis(format!(
            "frame curve re-crossed at {recross}, left of the saturation abscissa {s1_min}"
        )));
    }
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(sol.t.len());
    for (s1, y) in sol.t.iter().zip(sol.y.iter()) {
        if pts.last().map(|p: &(f64, f64)| *s1 > p.0).unwrap_or(true) {
            pts.push((*s1, y[0]));
        }
    }
    Ok((CurveGraph::monotone(pts)?, recross))
}

/// Outcome of one backward shot of the state/normalized-switching pair.
#[derive(Debug, Clone, Copy)]
pub struct BackwardShot {
    /// Switch point `(s1, s2)` where the normalized switching function
    /// returned to zero, if it did.
    pub emission: Option<(f64, f64)>,
    /// Residual of the switching function at the emission.
    pub psi_residual: f64,
}

/// Shoot the backward maximal-control pair from a switch seed
/// `(s1, s2, psi=0)` towards increasing `s1`, stopping at the first return
/// of the switching function to zero.
///
/// The switching function dips below zero right after the seed; for seeds
/// very close to the end singular state the dip is shallow and narrow, so a
/// first small-step phase resolves it before the fast up-crossing search.
pub fn backward_switch_shot(
    params: &ModelParams,
    seed: (f64, f64),
    s2_stop: f64,
    cfg: &BuildConfig,
) -> Result<BackwardShot, Error> {
    let p = *params;
    let m = p.total_mass;
    let s2s = p.s2_star();
    let rhs = move |s1: f64, y: &[f64; 2]| {
        let s2 = y[0];
        let psi = y[1];
        let f = p.f(s1);
        let mu = p.mu(s2);
        let mup = p.mu_prime(s2);
        [
            -1.0 + mu * (m - s1 - s2) / f,
            -mup / (mu * f) - psi * (p.f_prime(s1) / f + mup / mu),
        ]
    };
    let mut ode = cfg.ode;
    ode.rel_tol = ode.rel_tol.min(1e-11);
    ode.abs_tol = ode.abs_tol.min(1e-13);
    let floor = cfg.s1_floor_factor * m;
    const ARM: f64 = 1e-13;

    // phase 1: small steps until the dip is certified
    let phase1_end = (seed.0 + 0.25 * (m - seed.0)).min(m * (1.0 - 1e-9));
    let mut ode1 = ode;
    ode1.max_step = (m - seed.0) * 1e-4;
    let events1 = [
        EventSpec::new(EventKind::SignChange, Direction::Down, true, |_s1, y: &[f64; 2]| {
            y[1] + ARM
        }),
        EventSpec::new(EventKind::CrossesS2Star, Direction::Up, true, move |_s1, y: &[f64; 2]| {
            y[0] - s2s
        }),
        EventSpec::new(EventKind::LeavesDomain, Direction::Down, true, move |_s1, y: &[f64; 2]| {
            y[0] - s2_stop
        }),
    ];
    let sol1 = integrate_in_s1(&rhs, [seed.1, 0.0], (seed.0, phase1_end), &ode1, &events1, floor)?;
    let (start_s1, start_y) = match sol1.terminated {
        Some(t) if t.kind == EventKind::SignChange => (t.t, t.y),
        Some(t) if t.kind == EventKind::CrossesS2Star => {
            // dip too shallow to certify before the flow crossed the peak
            // level: the return to zero happens immediately after, so the
            // crossing itself is the switch point to working precision
            return Ok(BackwardShot { emission: Some((t.t, t.y[0])), psi_residual: t.y[1] });
        }
        _ => return Ok(BackwardShot { emission: None, psi_residual: f64::NAN }),
    };

    // phase 2: run to the first return of psi to zero
    let events2 = [
        EventSpec::new(EventKind::SignChange, Direction::Up, true, |_s1, y: &[f64; 2]| y[1]),
        EventSpec::new(EventKind::LeavesDomain, Direction::Down, true, move |_s1, y: &[f64; 2]| {
            y[0] - s2_stop
        }),
    ];
    ode.max_step = (m - start_s1).abs() / 64.0;
    let sol =
        integrate_in_s1(&rhs, start_y, (start_s1, m * (1.0 - 1e-9)), &ode, &events2, floor)?;
    match sol.terminated {
        Some(t) if t.kind == EventKind::SignChange => {
            Ok(BackwardShot { emission: Some((t.t, t.y[0])), psi_residual: t.y[1] })
        }
        _ => Ok(BackwardShot { emission: None, psi_residual: f64::NAN }),
    }
}

/// Seed states for the backward construction, ordered along the switch
/// locus from the end singular state towards the target corner and then
/// down the corner column.
fn c1_seeds(geom: &SynthesisGeometry, cfg: &BuildConfig) -> Vec<(f64, f64)> {
    let s2s = geom.singular.s2_star;
    let t = geom.target;
    let m = geom.params.total_mass;
    let floor = (cfg.s1_floor_factor * m).max(1e-7 * m);
    let mut seeds: Vec<(f64, f64)> = Vec::new();
    let mut column_top = s2s;
    if let Some(c0) = &geom.partition.c0 {
        for (s1, s2) in c0.points() {
            if s1 < floor || s2 >= s2s - 1e-12 {
                continue;
            }
            seeds.push((s1, s2));
        }
        if let Some(v) = c0.eval(t.s1_bar) {
            column_top = column_top.min(v);
        }
    }
    let n = cfg.column_seeds.max(16);
    let lo = t.s2_bar;
    for j in 1..=n {
        let frac = (j as f64 / (n + 1) as f64).powi(2);
        let s2 = column_top - frac * (column_top - lo);
        if s2 > lo && s2 < s2s {
            seeds.push((t.s1_bar, s2));
        }
    }
    seeds
}

/// Midpoint of two adjacent seeds along the seed path. Pairs on the corner
/// column interpolate the ordinate; pairs along the switch locus re-root
/// the defining integral so the midpoint stays on the locus.
fn seed_midpoint(
    geom: &SynthesisGeometry,
    cfg: &BuildConfig,
    a: (f64, f64),
    b: (f64, f64),
) -> (f64, f64) {
    if a.0 == b.0 {
        return (a.0, 0.5 * (a.1 + b.1));
    }
    let s1 = 0.5 * (a.0 + b.0);
    let s2s = geom.singular.s2_star;
    let mut lo = geom.target.s2_bar;
    let mut hi = s2s;
    for _ in 0..90 {
        let mid = 0.5 * (lo + hi);
        if crate::geometry::phi_capped(&geom.params, &geom.target, s1, mid, cfg) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (s1, 0.5 * (lo + hi))
}

/// Arrival value of the switching function for the exit arc out of
/// `(s, s2_star)`: integrate the pair towards decreasing `s1` until the
/// seed locus (switching locus or corner column) and report the residual.
/// `None` when the arc misses the locus.
fn exit_arc_arrival_psi(
    params: &ModelParams,
    geom: &SynthesisGeometry,
    s: f64,
    cfg: &BuildConfig,
) -> Option<f64> {
    let p = *params;
    let m = p.total_mass;
    let s2s = geom.singular.s2_star;
    let t = geom.target;
    let rhs = move |s1: f64, y: &[f64; 2]| {
        let s2 = y[0];
        let psi = y[1];
        let f = p.f(s1);
        let mu = p.mu(s2);
        let mup = p.mu_prime(s2);
        [
            -1.0 + mu * (m - s1 - s2) / f,
            -mup / (mu * f) - psi * (p.f_prime(s1) / f + mup / mu),
        ]
    };
    let mut events: Vec<EventSpec<'_, 2>> = Vec::new();
    if s > t.s1_bar {
        events.push(EventSpec::new(EventKind::HitsTargetEdge, Direction::Down, true, move |s1, _y: &[f64; 2]| {
            s1 - t.s1_bar
        }));
    }
    if let Some(c0) = &geom.partition.c0 {
        let c0 = c0.clone();
        events.push(EventSpec::new(EventKind::CrossesCurve, Direction::Down, true, move |s1, y: &[f64; 2]| {
            let s1c = s1.clamp(c0.s1_min(), c0.s1_max());
            y[0] - c0.eval(s1c).expect("clamped into span")
        }));
    }
    if events.is_empty() {
        return None;
    }
    let mut ode = cfg.ode;
    ode.rel_tol = ode.rel_tol.min(1e-11);
    ode.abs_tol = ode.abs_tol.min(1e-13);
    let floor = (cfg.s1_floor_factor * m).max(1e-7 * m);
    let sol = integrate_in_s1(&rhs, [s2s, 0.0], (s, floor * 2.0), &ode, &events, floor).ok()?;
    let term = sol.terminated?;
    match term.kind {
        EventKind::HitsTargetEdge => {
            // valid only when the arrival ordinate sits in the swept part
            // of the corner column
            let s2_arr = term.y[0];
            if s2_arr > t.s2_bar && s2_arr < s2s {
                Some(term.y[1])
            } else {
                None
            }
        }
        EventKind::CrossesCurve => Some(term.y[1]),
        _ => None,
    }
}

/// Bisection on the exit-arc arrival residual around the seed-path
/// estimate of the prior-saturation abscissa.
fn refine_prior_saturation(
    params: &ModelParams,
    geom: &SynthesisGeometry,
    estimate: f64,
    cfg: &BuildConfig,
) -> Option<f64> {
    let m = params.total_mass;
    let s2s = geom.singular.s2_star;
    let s1_min = geom.singular.s1_min?;
    let g = |s: f64| exit_arc_arrival_psi(params, geom, s, cfg);
    let mut delta = 2e-3 * m;
    for _ in 0..6 {
        let lo = (estimate - delta).max(s1_min * (1.0 + 1e-9));
        let hi = (estimate + delta).min((m - s2s) * (1.0 - 1e-9));
        if let (Some(glo), Some(ghi)) = (g(lo), g(hi)) {
            if glo == 0.0 {
                return Some(lo);
            }
            if ghi == 0.0 {
                return Some(hi);
            }
            if glo.signum() != ghi.signum() {
                let (mut a, mut b, ga) = (lo, hi, glo);
                for _ in 0..100 {
                    let mid = 0.5 * (a + b);
                    match g(mid) {
                        Some(gm) if gm.signum() == ga.signum() => a = mid,
                        Some(_) => b = mid,
                        None => return None,
                    }
                    if b - a < 1e-13 * m {
                        break;
                    }
                }
                return Some(0.5 * (a + b));
            }
        }
        delta *= 2.0;
    }
    None
}

/// Construct the switch curve and the prior-saturation abscissa by
/// backward shooting over the seed path.
pub fn compute_c1(
    params: &ModelParams,
    geom: &SynthesisGeometry,
    cfg: &BuildConfig,
) -> Result<(CurveGraph, f64), Error> {
    let s2s = geom.singular.s2_star;
    let s1_min = geom
        .singular
        .s1_min
        .ok_or_else(|| Error::Synthesis("switch-curve construction needs a singular arc".into()))?;
    let m = params.total_mass;
    let s2_stop = 0.5 * geom.target.s2_bar;

    let seeds = c1_seeds(geom, cfg);
    if seeds.is_empty() {
        return Err(Error::Synthesis("empty backward seed set".into()));
    }

    let mut emissions: Vec<(f64, f64)> = Vec::new();
    let mut last_emitting: Option<usize> = None;
    let mut first_silent_after: Option<usize> = None;
    for (k, seed) in seeds.iter().enumerate() {
        let shot = backward_switch_shot(params, *seed, s2_stop, cfg)?;
        match shot.emission {
            Some(e) => {
                emissions.push(e);
                last_emitting = Some(k);
                first_silent_after = None;
            }
            None => {
                if last_emitting.is_some() && first_silent_after.is_none() {
                    first_silent_after = Some(k);
                }
            }
        }
    }

    if emissions.is_empty() {
        return Err(Error::Synthesis(
            "no backward shot produced a switch point in a barrier regime".into(),
        ));
    }

    // refine the prior-saturation point by bisecting the seed path across
    // the emitting/silent transition; the emitting-side emissions trace the
    // steep tail of the curve and are kept as samples
    let mut s1_bar_pt = *emissions.last().unwrap();
    if let (Some(k), Some(k1)) = (last_emitting, first_silent_after) {
        let mut lo = seeds[k];
        let mut hi = seeds[k1];
        for _ in 0..90 {
            let mid = seed_midpoint(geom, cfg, lo, hi);
            let shot = backward_switch_shot(params, mid, s2_stop, cfg)?;
            match shot.emission {
                Some(e) => {
                    s1_bar_pt = e;
                    emissions.push(e);
                    lo = mid;
                }
                None => hi = mid,
            }
            if (s1_bar_pt.1 - s2s).abs() < 1e-8 {
                break;
            }
        }
    }
    let mut s1_bar = s1_bar_pt.0;
    // sharpen the abscissa on its defining property: the exit arc must
    // arrive on the seed locus with the switching function at zero again
    if let Some(refined) = refine_prior_saturation(params, geom, s1_bar, cfg) {
        s1_bar = refined;
    }

    if !(s1_bar > s1_min && s1_bar < m - s2s) {
        return Err(Error::Synthesis(format!(
            "prior-saturation abscissa {s1_bar} outside ({s1_min}, {})",
            m - s2s
        )));
    }

    // assemble the graph: emitted switch points left of the prior-saturation
    // point, closed off at the singular level
    let mut pts: Vec<(f64, f64)> = emissions
        .into_iter()
        .filter(|(s1, s2)| *s1 < s1_bar - 1e-12 * m && *s2 >= s2s - 1e-9)
        .map(|(s1, s2)| (s1, s2.max(s2s)))
        .collect();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("switch point NaN"));
    pts.dedup_by(|b, a| b.0 - a.0 <= 1e-13 * m);
    pts.push((s1_bar, s2s));
    if pts.len() < 2 {
        return Err(Error::Synthesis("switch curve degenerated to a point".into()));
    }
    Ok((CurveGraph::piecewise_linear(pts)?, s1_bar))
}
