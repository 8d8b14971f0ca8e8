//! Event-driven closed-loop simulation with switching-structure extraction.
//!
//! Each arc integrates the planar dynamics under the current control until a
//! region boundary fires, then the feedback is re-evaluated at the boundary
//! state. Singular travel holds the second coordinate at the peak exactly
//! and reduces to a scalar flow in `s1` rather than chattering around the
//! locus.

use crate::error::Error;
use crate::geometry::{singular_control, BuildConfig, Regime};
use crate::model::State;
use crate::ode::{integrate, Direction, EventKind, EventSpec};
use crate::synthesis::{attainability_feedback, ControlDecision, SynthesisGeometry};

/// Which controller drives the loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeedbackLaw {
    /// The regime's optimal synthesis.
    OptimalSynthesis,
    /// Maximal recirculation to the first threshold, then hold.
    Attainability,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcKind {
    Bang0,
    Bang1,
    Singular,
}

impl ArcKind {
    pub fn label(&self) -> &'static str {
        match self {
            ArcKind::Bang0 => "B0",
            ArcKind::Bang1 => "B1",
            ArcKind::Singular => "S",
        }
    }

    fn of(decision: &ControlDecision) -> ArcKind {
        match decision {
            ControlDecision::Singular(_) => ArcKind::Singular,
            ControlDecision::Bang(u) => {
                if *u > 0.5 {
                    ArcKind::Bang1
                } else {
                    ArcKind::Bang0
                }
            }
            ControlDecision::TargetReached => unreachable!("no arc inside the target"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SwitchRecord {
    pub t: f64,
    pub state: State,
    pub u_from: f64,
    pub u_to: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct ArcSpan {
    pub kind: ArcKind,
    pub t0: f64,
    pub t1: f64,
}

/// Closed-loop run: time-stamped nodes, switch log and the arc word.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub nodes: Vec<(f64, State, f64)>,
    pub switches: Vec<SwitchRecord>,
    pub arcs: Vec<ArcSpan>,
    pub reached_target: bool,
    pub final_time: f64,
}

impl Trajectory {
    /// Dot-separated structure word, e.g. `B1.S.B1.B0`.
    pub fn arc_word(&self) -> String {
        self.arcs.iter().map(|a| a.kind.label()).collect::<Vec<_>>().join(".")
    }

    pub fn final_state(&self) -> State {
        self.nodes.last().expect("empty trajectory").1
    }

    /// Control in force at time `t` per the arc schedule.
    pub fn control_kind_at(&self, t: f64) -> ArcKind {
        for arc in &self.arcs {
            if t <= arc.t1 {
                return arc.kind;
            }
        }
        self.arcs.last().expect("empty trajectory").kind
    }
}

const MAX_ARCS: usize = 64;

/// Simulate the closed loop from `x0` until the target box is reached.
pub fn simulate_closed_loop(
    geom: &SynthesisGeometry,
    law: FeedbackLaw,
    x0: State,
    cfg: &BuildConfig,
) -> Result<Trajectory, Error> {
    let target = geom.target;
    let m = geom.params.total_mass;
    if !x0.in_domain(m) {
        return Err(Error::Config(format!("start ({}, {}) outside the domain", x0.s1, x0.s2)));
    }
    if target.contains(x0) {
        return Err(Error::Config("start already inside the target".into()));
    }

    // boundary-riding runs (singular exits onto the absorbing-set edge)
    // reach the corner tangentially; a hair of arrival slack keeps the
    // integration drift from manufacturing zero-length extra arcs
    let arrival_eps = 2e-6 * m;
    let decide = |x: State| -> ControlDecision {
        if x.s1 <= target.s1_bar + arrival_eps && x.s2 <= target.s2_bar + arrival_eps {
            return ControlDecision::TargetReached;
        }
        match law {
            FeedbackLaw::OptimalSynthesis => geom.feedback(x),
            FeedbackLaw::Attainability => {
                ControlDecision::Bang(attainability_feedback(&target, x))
            }
        }
    };

    let mut traj = Trajectory {
        nodes: vec![(0.0, x0, f64::NAN)],
        switches: Vec::new(),
        arcs: Vec::new(),
        reached_target: false,
        final_time: 0.0,
    };
    let mut t = 0.0;
    let mut x = x0;
    let mut decision = decide(x);
    if let ControlDecision::Singular(_) = decision {
        x = State::new(x.s1, geom.singular.s2_star);
    }
    traj.nodes[0].2 = decision.value().unwrap_or(f64::NAN);

    for _arc in 0..MAX_ARCS {
        match decision {
            ControlDecision::TargetReached => {
                traj.reached_target = true;
                traj.final_time = t;
                canonicalize(&mut traj);
                return Ok(traj);
            }
            ControlDecision::Bang(u) => {
                let (t_new, x_new) = run_bang_arc(geom, law, &mut traj, t, x, u, cfg)?;
                t = t_new;
                x = x_new;
            }
            ControlDecision::Singular(_) => {
                let (t_new, x_new) = run_singular_arc(geom, &mut traj, t, x, cfg)?;
                t = t_new;
                x = x_new;
                // leaving singular travel is a forced bang hand-over
                let next = geom.feedback_bang_only(x);
                record_transition(&mut traj, t, x, next);
                decision = next;
                continue;
            }
        }
        if t > cfg.horizon {
            return Err(Error::Synthesis(format!("horizon {} exceeded", cfg.horizon)));
        }
        let next = decide(x);
        let next = match next {
            // snap onto the singular level when entering the band
            ControlDecision::Singular(u) => {
                x = State::new(x.s1, geom.singular.s2_star);
                ControlDecision::Singular(u)
            }
            other => other,
        };
        record_transition(&mut traj, t, x, next);
        decision = next;
    }
    Err(Error::Synthesis("dispatch did not terminate within the arc budget".into()))
}

/// Drop dispatch bounces: arcs much shorter than the run are merged away
/// and their switch records removed.
fn canonicalize(traj: &mut Trajectory) {
    let eps = 1e-9 * traj.final_time.max(1.0);
    let mut arcs: Vec<ArcSpan> = Vec::with_capacity(traj.arcs.len());
    for arc in &traj.arcs {
        if arc.t1 - arc.t0 <= eps {
            if let Some(last) = arcs.last_mut() {
                last.t1 = arc.t1;
            }
            continue;
        }
        match arcs.last_mut() {
            Some(last) if last.kind == arc.kind => last.t1 = arc.t1,
            _ => arcs.push(*arc),
        }
    }
    let boundaries: Vec<f64> = arcs.iter().skip(1).map(|a| a.t0).collect();
    traj.switches.retain(|sw| boundaries.iter().any(|b| (sw.t - b).abs() <= eps));
    traj.switches.dedup_by(|b, a| (b.t - a.t).abs() <= eps);
    traj.arcs = arcs;
}

/// Record arc boundaries and switches; keeps the arc open when the control
/// did not change.
fn record_transition(traj: &mut Trajectory, t: f64, x: State, next: ControlDecision) {
    let current = traj.arcs.last().map(|a| a.kind);
    match next {
        ControlDecision::TargetReached => {}
        ref d => {
            let kind = ArcKind::of(d);
            if current == Some(kind) {
                return; // same control continues across the boundary
            }
            if let Some(prev) = traj.arcs.last() {
                let u_from = match prev.kind {
                    ArcKind::Bang0 => 0.0,
                    ArcKind::Bang1 => 1.0,
                    ArcKind::Singular => f64::NAN,
                };
                let u_to = d.value().unwrap_or(f64::NAN);
                traj.switches.push(SwitchRecord { t, state: x, u_from, u_to });
            }
        }
    }
}

/// Integrate one constant-control arc to the next dispatch boundary.
fn run_bang_arc(
    geom: &SynthesisGeometry,
    law: FeedbackLaw,
    traj: &mut Trajectory,
    t0: f64,
    x0: State,
    u: f64,
    cfg: &BuildConfig,
) -> Result<(f64, State), Error> {
    let p = geom.params;
    let m = p.total_mass;
    let target = geom.target;
    // trial stages of rejected steps may poke outside the domain; clamp
    // them, accepted states stay inside via the boundary events
    let rhs = move |_t: f64, y: &[f64; 2]| {
        let (d1, d2) = p.field(State::new(y[0].max(0.0), y[1].max(0.0)), u);
        [d1, d2]
    };

    let mut events: Vec<EventSpec<'_, 2>> = Vec::new();
    events.push(EventSpec::new(EventKind::LeavesDomain, Direction::Up, true, move |_t, y: &[f64; 2]| {
        y[0] + y[1] - m * (1.0 + 1e-9)
    }));
    events.push(EventSpec::new(EventKind::HitsTargetEdge, Direction::Down, true, move |_t, y: &[f64; 2]| {
        y[0] - target.s1_bar
    }));
    events.push(EventSpec::new(EventKind::HitsTargetEdge, Direction::Down, true, move |_t, y: &[f64; 2]| {
        y[1] - target.s2_bar
    }));

    if law == FeedbackLaw::OptimalSynthesis {
        if geom.singular.exists {
            let s2s = geom.singular.s2_star;
            events.push(EventSpec::new(EventKind::CrossesS2Star, Direction::Any, true, move |_t, y: &[f64; 2]| {
                y[1] - s2s
            }));
        }
        match geom.regime {
            Regime::SaturatedInterior | Regime::SaturatedBoundary => {
                // switch curve, as a function frozen along this arc for the
                // hold control (s1 constant) and live for the maximal one
                if u < 0.5 {
                    let level = geom.zeta(x0.s1);
                    events.push(EventSpec::new(EventKind::CrossesCurve, Direction::Down, true, move |_t, y: &[f64; 2]| {
                        y[1] - level
                    }));
                } else {
                    events.push(EventSpec::new(EventKind::CrossesCurve, Direction::Up, true, move |_t, y: &[f64; 2]| {
                        y[1] - geom.zeta(y[0])
                    }));
                }
            }
            _ => {}
        }
        if let Some(c0) = &geom.partition.c0 {
            // extended-target entry through the switching locus (clamped
            // constant outside its span to stay continuous)
            events.push(EventSpec::new(EventKind::CrossesCurve, Direction::Down, true, move |_t, y: &[f64; 2]| {
                let s1c = y[0].clamp(c0.s1_min(), c0.s1_max());
                y[1] - c0.eval(s1c).expect("clamped into span")
            }));
            if let Some(s1_star) = geom.singular.s1_star {
                if s1_star > 0.0 && u > 0.5 {
                    events.push(EventSpec::new(EventKind::CrossesCurve, Direction::Down, true, move |_t, y: &[f64; 2]| {
                        y[0] - s1_star
                    }));
                }
            }
        }
        if u < 0.5 && x0.s1 > target.s1_bar {
            // hold arcs can sink into the absorbing region below the
            // maximal-control boundary curve
            if let Some(level) = geom.partition.sigma2.eval(x0.s1) {
                events.push(EventSpec::new(EventKind::CrossesCurve, Direction::Down, true, move |_t, y: &[f64; 2]| {
                    y[1] - level
                }));
            }
        }
    }

    let span = (t0, cfg.horizon * 1.01);
    let sol = integrate(&rhs, [x0.s1, x0.s2], span, &cfg.ode, &events)?;
    for (i, (tt, yy)) in sol.t.iter().zip(sol.y.iter()).enumerate() {
        if i == 0 {
            continue;
        }
        traj.nodes.push((*tt, State::new(yy[0], yy[1]), u));
    }
    let kind = if u > 0.5 { ArcKind::Bang1 } else { ArcKind::Bang0 };
    extend_arc(traj, kind, t0, sol.t_end());
    match sol.terminated {
        Some(term) => {
            if term.kind == EventKind::LeavesDomain {
                return Err(Error::Synthesis(format!(
                    "trajectory left the domain at t = {}",
                    term.t
                )));
            }
            Ok((term.t, State::new(term.y[0], term.y[1])))
        }
        None => Err(Error::Synthesis("no dispatch boundary reached within the horizon".into())),
    }
}

/// Integrate singular travel: `s2` pinned at the peak, scalar flow in `s1`
/// down to the regime's exit abscissa.
fn run_singular_arc(
    geom: &SynthesisGeometry,
    traj: &mut Trajectory,
    t0: f64,
    x0: State,
    cfg: &BuildConfig,
) -> Result<(f64, State), Error> {
    let p = geom.params;
    let s2s = geom.singular.s2_star;
    debug_assert!((x0.s2 - s2s).abs() <= geom.band);
    let exit_s1 = match geom.regime {
        Regime::SaturatedInterior | Regime::SaturatedBoundary => {
            geom.s1_bar.expect("prior-saturation abscissa")
        }
        Regime::AdmissibleSingular => geom.singular.s1_star.expect("end singular abscissa"),
        Regime::NoSingular => unreachable!("no singular travel without a singular arc"),
    };
    // ds1 = -u_s f = -mu(s2*) (M - s1 - s2*): strictly negative on the
    // admissible locus
    let rhs = move |_t: f64, y: &[f64; 1]| [-p.mu(s2s) * (p.total_mass - y[0] - s2s)];
    let events = [EventSpec::new(EventKind::CrossesCurve, Direction::Down, true, move |_t, y: &[f64; 1]| {
        y[0] - exit_s1
    })];
    let sol = integrate(&rhs, [x0.s1], (t0, cfg.horizon * 1.01), &cfg.ode, &events)?;
    for (i, (tt, yy)) in sol.t.iter().zip(sol.y.iter()).enumerate() {
        if i == 0 {
            continue;
        }
        traj.nodes.push((*tt, State::new(yy[0], s2s), singular_control(&p, yy[0])));
    }
    extend_arc(traj, ArcKind::Singular, t0, sol.t_end());
    match sol.terminated {
        Some(term) => Ok((term.t, State::new(term.y[0], s2s))),
        None => Err(Error::Synthesis("singular travel missed its exit abscissa".into())),
    }
}

fn extend_arc(traj: &mut Trajectory, kind: ArcKind, t0: f64, t1: f64) {
    if let Some(last) = traj.arcs.last_mut() {
        if last.kind == kind {
            last.t1 = t1;
            return;
        }
    }
    traj.arcs.push(ArcSpan { kind, t0, t1 });
}

/// Closed-loop run under the attainability law; convenience wrapper.
pub fn simulate_attainability(
    geom: &SynthesisGeometry,
    x0: State,
    cfg: &BuildConfig,
) -> Result<Trajectory, Error> {
    simulate_closed_loop(geom, FeedbackLaw::Attainability, x0, cfg)
}

/// Roll the planar dynamics under a piecewise-constant control signal;
/// used by the invariance and comparison property tests.
pub fn rollout(
    params: &crate::model::ModelParams,
    x0: State,
    pieces: &[(f64, f64)],
    cfg: &BuildConfig,
) -> Result<Vec<(f64, State)>, Error> {
    let mut out = vec![(0.0, x0)];
    let mut t = 0.0;
    let mut x = x0;
    for (dur, u) in pieces.iter().copied() {
        let p = *params;
        let rhs = move |_t: f64, y: &[f64; 2]| {
            let (d1, d2) = p.field(State::new(y[0].max(0.0), y[1].max(0.0)), u);
            [d1, d2]
        };
        let sol = integrate(&rhs, [x.s1, x.s2], (t, t + dur), &cfg.ode, &[])?;
        for (tt, yy) in sol.t.iter().zip(sol.y.iter()).skip(1) {
            out.push((*tt, State::new(yy[0], yy[1])));
        }
        t += dur;
        x = out.last().unwrap().1;
    }
    Ok(out)
}
