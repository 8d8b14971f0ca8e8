//! Brute-force minimal-time oracles: a semi-Lagrangian value-iteration grid
//! solver and an exhaustive search over low-switch-count arc structures.
//!
//! Both are independent of the synthesis construction — they consume only
//! the dynamics, the target box and the raw singular-level quantities — and
//! exist to validate the analytic feedback at desk scale.

use crate::error::Error;
use crate::geometry::{singular_control, BuildConfig, Regime};
use crate::model::{ModelParams, State, TargetBox};
use crate::ode::{integrate, Direction, EventKind, EventSpec};
use crate::simulate::ArcKind;

/// Discretized minimal-time function over the domain triangle.
#[derive(Debug, Clone)]
pub struct ValueGrid {
    /// Nodes per axis over `[0, M]^2`.
    pub n: usize,
    pub spacing: f64,
    pub total_mass: f64,
    /// Row-major `values[i2 * n + i1]`; unreachable and out-of-domain nodes
    /// carry the cap.
    pub values: Vec<f64>,
    pub controls: Vec<f64>,
    pub cap: f64,
    pub sweeps: usize,
}

impl ValueGrid {
    pub fn node_state(&self, i1: usize, i2: usize) -> State {
        State::new(i1 as f64 * self.spacing, i2 as f64 * self.spacing)
    }

    fn raw(&self, i1: usize, i2: usize) -> f64 {
        self.values[i2 * self.n + i1]
    }

    /// Bilinear interpolation; `None` outside the grid hull.
    pub fn value_at(&self, x: State) -> Option<f64> {
        let m = self.total_mass;
        if !(x.s1 >= 0.0 && x.s2 >= 0.0 && x.s1 <= m && x.s2 <= m) {
            return None;
        }
        let h = self.spacing;
        let fi = (x.s1 / h).min((self.n - 2) as f64);
        let fj = (x.s2 / h).min((self.n - 2) as f64);
        let i = fi.floor() as usize;
        let j = fj.floor() as usize;
        let a = fi - i as f64;
        let b = fj - j as f64;
        let v00 = self.raw(i, j);
        let v10 = self.raw(i + 1, j);
        let v01 = self.raw(i, j + 1);
        let v11 = self.raw(i + 1, j + 1);
        Some((1.0 - a) * (1.0 - b) * v00 + a * (1.0 - b) * v10 + (1.0 - a) * b * v01 + a * b * v11)
    }
}

const CFL: f64 = 2.0;
const VALUE_CAP: f64 = 1e6;
const SWEEP_LIMIT: usize = 60_000;

/// Solve the minimal-time problem on an `n x n` grid by semi-Lagrangian
/// value iteration: `V(x) = min_u [tau_u + V(x + tau_u F(x, u))]` with a
/// per-control local step `tau_u = CFL * h / |F(x, u)|`, bilinear
/// interpolation, iterated from the cap down to a fixed point (Jacobi
/// double-buffer, so reruns are bitwise identical).
///
/// The per-control step keeps every sampled foot displacement at half a
/// cell; a per-node step sized by the fastest control would crawl along
/// slow optimal characteristics and inflate the sweep count by orders of
/// magnitude. The control sample set holds both bang values, nine interior
/// values and the clamped singular level so the grid can represent
/// singular travel.
pub fn solve_hjb(
    params: &ModelParams,
    target: &TargetBox,
    n: usize,
    _cfg: &BuildConfig,
) -> Result<ValueGrid, Error> {
    if n < 8 {
        return Err(Error::Oracle(format!("grid needs at least 8 nodes per axis, got {n}")));
    }
    let m = params.total_mass;
    let h = m / (n - 1) as f64;
    let controls: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let singular_exists = params.s2_star() < m;

    let idx = |i1: usize, i2: usize| i2 * n + i1;
    let mut values = vec![VALUE_CAP; n * n];
    let mut active = vec![false; n * n];
    for i2 in 0..n {
        for i1 in 0..n {
            let x = State::new(i1 as f64 * h, i2 as f64 * h);
            let inside = x.s1 + x.s2 <= m + 1e-12 * m;
            if inside && target.contains(x) {
                values[idx(i1, i2)] = 0.0;
            } else if inside {
                active[idx(i1, i2)] = true;
            }
        }
    }

    // per-column singular control sample
    let singular_u: Vec<f64> = (0..n)
        .map(|i1| {
            let s1 = i1 as f64 * h;
            if singular_exists && s1 > 0.0 {
                singular_control(params, s1).clamp(0.0, 1.0)
            } else {
                f64::NAN
            }
        })
        .collect();

    let mut speed_max: f64 = 0.0;
    for i2 in 0..n {
        for i1 in 0..n {
            if !active[idx(i1, i2)] {
                continue;
            }
            let x = State::new(i1 as f64 * h, i2 as f64 * h);
            let (d1, d2) = params.field(x, 1.0);
            speed_max = speed_max.max(d1.abs().max(d2.abs()));
            let (e1, e2) = params.field(x, 0.0);
            speed_max = speed_max.max(e1.abs().max(e2.abs()));
        }
    }
    if speed_max <= 0.0 {
        return Err(Error::Oracle("degenerate dynamics: nothing moves".into()));
    }
    let tau_ref = CFL * h / speed_max;
    let tol = 1e-7 * tau_ref;
    let speed_floor = 1e-9 * speed_max;

    let interp = |vals: &[f64], s1: f64, s2: f64| -> f64 {
        // clamp the foot point onto the triangle; the flow is tangent at
        // the boundaries, so this only absorbs rounding overshoot
        let s1 = s1.clamp(0.0, m);
        let s2 = s2.clamp(0.0, (m - s1).max(0.0));
        let fi = (s1 / h).min((n - 2) as f64);
        let fj = (s2 / h).min((n - 2) as f64);
        let i = fi.floor() as usize;
        let j = fj.floor() as usize;
        let a = fi - i as f64;
        let b = fj - j as f64;
        (1.0 - a) * (1.0 - b) * vals[idx(i, j)]
            + a * (1.0 - b) * vals[idx(i + 1, j)]
            + (1.0 - a) * b * vals[idx(i, j + 1)]
            + a * b * vals[idx(i + 1, j + 1)]
    };

    let mut back = values.clone();
    let mut sweeps = 0;
    loop {
        sweeps += 1;
        if sweeps > SWEEP_LIMIT {
            return Err(Error::Oracle(format!(
                "value iteration failed to converge within {SWEEP_LIMIT} sweeps"
            )));
        }
        let mut delta: f64 = 0.0;
        for i2 in 0..n {
            for i1 in 0..n {
                let k = idx(i1, i2);
                if !active[k] {
                    back[k] = values[k];
                    continue;
                }
                let x = State::new(i1 as f64 * h, i2 as f64 * h);
                let mut best = VALUE_CAP;
                let mut try_u = |u: f64| {
                    let (d1, d2) = params.field(x, u);
                    let speed = d1.abs().max(d2.abs());
                    if speed < speed_floor {
                        return;
                    }
                    let dt = CFL * h / speed;
                    // midpoint characteristic tracing; the local steps are
                    // large where the dynamics are slow and a tangent foot
                    // would bias the value there
                    let xm = State::new(
                        (x.s1 + 0.5 * dt * d1).clamp(0.0, m),
                        (x.s2 + 0.5 * dt * d2).clamp(0.0, m),
                    );
                    let (d1, d2) = params.field(xm, u);
                    // exact first-hit term: when the characteristic segment
                    // enters the target box within the local step, the cost
                    // is the fractional crossing time — without it every
                    // path pays up to one full step on arrival
                    if let Some(theta) = box_entry_fraction(x, d1, d2, dt, target) {
                        let v = theta * dt;
                        if v < best {
                            best = v;
                        }
                        return;
                    }
                    let v = dt + interp(&values, x.s1 + dt * d1, x.s2 + dt * d2);
                    if v < best {
                        best = v;
                    }
                };
                for &u in &controls {
                    try_u(u);
                }
                if !singular_u[i1].is_nan() {
                    try_u(singular_u[i1]);
                }
                let v_new = best.min(VALUE_CAP);
                delta = delta.max((values[k] - v_new).abs());
                back[k] = v_new;
            }
        }
        std::mem::swap(&mut values, &mut back);
        if delta < tol {
            break;
        }
    }

    Ok(ValueGrid {
        n,
        spacing: h,
        total_mass: m,
        values,
        controls,
        cap: VALUE_CAP,
        sweeps,
    })
}

/// Earliest fraction `theta` in `(0, 1]` at which the straight segment
/// `x + theta * dt * d` enters the target box, if it does.
fn box_entry_fraction(x: State, d1: f64, d2: f64, dt: f64, target: &TargetBox) -> Option<f64> {
    // fraction at which each coordinate first satisfies its threshold
    let need = |pos: f64, vel: f64, bar: f64| -> Option<f64> {
        if pos <= bar {
            Some(0.0)
        } else if vel < 0.0 {
            let th = (bar - pos) / (vel * dt);
            (th <= 1.0).then_some(th)
        } else {
            None
        }
    };
    let t1 = need(x.s1, d1, target.s1_bar)?;
    let t2 = need(x.s2, d2, target.s2_bar)?;
    let theta = t1.max(t2);
    // both coordinates must still be inside at the entry fraction (a
    // coordinate can move back out while the other catches up)
    let s1 = x.s1 + theta * dt * d1;
    let s2 = x.s2 + theta * dt * d2;
    let eps = 1e-12;
    (theta > 0.0 && s1 <= target.s1_bar + eps && s2 <= target.s2_bar + eps).then_some(theta)
}

/// One candidate structure: the arc word plus its optimized switch times.
#[derive(Debug, Clone)]
pub struct StructuredCandidate {
    pub word: Vec<ArcKind>,
    pub switch_times: Vec<f64>,
    pub final_time: f64,
}

impl StructuredCandidate {
    pub fn word_string(&self) -> String {
        self.word.iter().map(|a| a.label()).collect::<Vec<_>>().join(".")
    }
}

/// Admissible arc words for a regime, in search order.
pub fn regime_wordset(regime: Regime) -> Vec<Vec<ArcKind>> {
    use ArcKind::*;
    let mut words = vec![
        vec![Bang0],
        vec![Bang1],
        vec![Bang0, Bang1],
        vec![Bang1, Bang0],
        vec![Bang0, Bang1, Bang0],
        vec![Bang1, Bang0, Bang1],
    ];
    if regime != Regime::NoSingular {
        words.extend([
            vec![Bang0, Singular, Bang0],
            vec![Bang0, Singular, Bang1],
            vec![Bang1, Singular, Bang0],
            vec![Bang1, Singular, Bang1],
        ]);
    }
    if matches!(regime, Regime::SaturatedInterior | Regime::SaturatedBoundary) {
        words.extend([
            vec![Bang0, Singular, Bang1, Bang0],
            vec![Bang1, Singular, Bang1, Bang0],
        ]);
    }
    words
}

/// Simulation outcome of one candidate: final time and realized switch
/// times, or `None` when infeasible within the horizon.
struct WordRun {
    final_time: f64,
    switch_times: Vec<f64>,
    arcs_used: usize,
}

/// Simulate a word with the free durations `theta`, exactly: bang arcs
/// preceding singular travel run to the singular level (the hit is not a
/// free parameter), singular travel is capped at the saturation abscissa,
/// the last arc runs to the target.
fn simulate_word(
    params: &ModelParams,
    target: &TargetBox,
    x0: State,
    word: &[ArcKind],
    theta: &[f64],
    horizon: f64,
    cfg: &BuildConfig,
) -> Option<WordRun> {
    let p = *params;
    let m = p.total_mass;
    let s2s = p.s2_star();
    let s1b = target.s1_bar;
    let s2b = target.s2_bar;
    let mut t = 0.0_f64;
    let mut x = x0;
    let mut th = theta.iter().copied();
    let mut switch_times = Vec::new();

    for (k, kind) in word.iter().enumerate() {
        if target.contains(x) {
            return Some(WordRun { final_time: t, switch_times, arcs_used: k });
        }
        let last = k + 1 == word.len();
        match kind {
            ArcKind::Bang0 | ArcKind::Bang1 => {
                let u = if *kind == ArcKind::Bang1 { 1.0 } else { 0.0 };
                let rhs = move |_t: f64, y: &[f64; 2]| {
                    let (d1, d2) = p.field(State::new(y[0].max(0.0), y[1].max(0.0)), u);
                    [d1, d2]
                };
                let to_singular = !last && word[k + 1] == ArcKind::Singular;
                let mut events: Vec<EventSpec<'_, 2>> = vec![
                    EventSpec::new(EventKind::HitsTargetEdge, Direction::Down, true, move |_t, y: &[f64; 2]| {
                        y[0] - s1b
                    }),
                    EventSpec::new(EventKind::HitsTargetEdge, Direction::Down, true, move |_t, y: &[f64; 2]| {
                        y[1] - s2b
                    }),
                ];
                if to_singular {
                    events.push(EventSpec::new(EventKind::CrossesS2Star, Direction::Any, true, move |_t, y: &[f64; 2]| {
                        y[1] - s2s
                    }));
                }
                let t_end = if to_singular || last {
                    horizon
                } else {
                    t + th.next()?
                };
                loop {
                    let sol = integrate(&rhs, [x.s1, x.s2], (t, t_end), &cfg.ode, &events).ok()?;
                    t = sol.t_end();
                    let y = sol.final_state();
                    x = State::new(y[0], y[1]);
                    match sol.terminated {
                        Some(term) => {
                            if term.kind == EventKind::CrossesS2Star {
                                // only accept holds where singular travel is
                                // admissible
                                let us = singular_control(&p, x.s1);
                                if (0.0..=1.0).contains(&us) {
                                    break;
                                }
                                if t >= horizon {
                                    return None;
                                }
                                continue; // keep flying, re-arm at the level
                            }
                            // a target edge: inside only if the other
                            // coordinate already cleared its threshold
                            if target.contains(x) {
                                return Some(WordRun {
                                    final_time: t,
                                    switch_times,
                                    arcs_used: k + 1,
                                });
                            }
                            if t >= horizon {
                                return None;
                            }
                            continue; // edge crossed outside the box: keep going
                        }
                        None => {
                            // duration exhausted (interior switch) or horizon
                            if last || to_singular {
                                return None; // never reached target/level
                            }
                            break;
                        }
                    }
                }
                if !last {
                    switch_times.push(t);
                }
            }
            ArcKind::Singular => {
                if last {
                    return None; // singular travel cannot end a word
                }
                if (x.s2 - s2s).abs() > 1e-6 * m {
                    return None; // word demands singular travel off the level
                }
                let dur = th.next()?;
                // cap travel at the saturation abscissa where the control
                // hits the bound
                let mu_star = p.mu(s2s);
                let s1_min = mu_star * (m - s2s) / (p.solub.slope + mu_star);
                let rhs = move |_t: f64, y: &[f64; 1]| [-mu_star * (m - y[0] - s2s)];
                let events = [EventSpec::new(EventKind::CrossesCurve, Direction::Down, true, move |_t, y: &[f64; 1]| {
                    y[0] - s1_min
                })];
                let sol = integrate(&rhs, [x.s1], (t, t + dur), &cfg.ode, &events).ok()?;
                t = sol.t_end();
                x = State::new(sol.final_state()[0], s2s);
                switch_times.push(t);
            }
        }
    }
    if target.contains(x) {
        Some(WordRun { final_time: t, switch_times, arcs_used: word.len() })
    } else {
        None
    }
}

/// Count of free duration parameters of a word under the exact-simulation
/// parameterization.
fn free_dims(word: &[ArcKind]) -> usize {
    let mut dims = 0;
    for (k, kind) in word.iter().enumerate() {
        let last = k + 1 == word.len();
        match kind {
            ArcKind::Singular => dims += 1,
            _ => {
                let to_singular = !last && word[k + 1] == ArcKind::Singular;
                if !last && !to_singular {
                    dims += 1;
                }
            }
        }
    }
    dims
}

/// Exhaustive structure search: optimize the free switch durations of every
/// word by coarse grid plus golden-section refinement, simulating each
/// candidate exactly, and return the best.
pub fn best_structured(
    params: &ModelParams,
    target: &TargetBox,
    x0: State,
    words: &[Vec<ArcKind>],
    horizon: f64,
    cfg: &BuildConfig,
) -> Result<StructuredCandidate, Error> {
    let mut best: Option<StructuredCandidate> = None;
    let mut consider = |cand: StructuredCandidate| {
        let better = match &best {
            None => true,
            Some(b) => {
                let eps = 1e-9 * (1.0 + b.final_time);
                cand.final_time < b.final_time - eps
                    || ((cand.final_time - b.final_time).abs() <= eps
                        && cand.word.len() < b.word.len())
            }
        };
        if better {
            best = Some(cand);
        }
    };

    for word in words {
        let dims = free_dims(word);
        let run = |theta: &[f64]| simulate_word(params, target, x0, word, theta, horizon, cfg);
        // drop degenerate zero-duration arcs so ties canonicalize to the
        // shortest equivalent word
        let canonical = |r: WordRun| {
            let mut kept: Vec<ArcKind> = Vec::new();
            let mut times: Vec<f64> = Vec::new();
            let eps = 1e-9 * (1.0 + r.final_time);
            let mut t_prev = 0.0;
            for (k, kind) in word[..r.arcs_used].iter().enumerate() {
                let t_end = r.switch_times.get(k).copied().unwrap_or(r.final_time);
                let dur = t_end - t_prev;
                t_prev = t_end;
                if dur <= eps {
                    continue;
                }
                if kept.last() == Some(kind) {
                    // merge adjacent arcs left by a dropped one
                    times.pop();
                    times.push(t_end);
                    continue;
                }
                kept.push(*kind);
                times.push(t_end);
            }
            if !times.is_empty() {
                times.pop(); // last entry is the final time, not a switch
            }
            StructuredCandidate { word: kept, switch_times: times, final_time: r.final_time }
        };
        match dims {
            0 => {
                if let Some(r) = run(&[]) {
                    consider(canonical(r));
                }
            }
            1 => {
                let f = |d: f64| run(&[d]).map(|r| r.final_time);
                if let Some((d, _)) = minimize_1d(&f, 0.0, horizon, 48) {
                    if let Some(r) = run(&[d]) {
                        consider(canonical(r));
                    }
                }
            }
            2 => {
                let f = |a: f64, b: f64| run(&[a, b]).map(|r| r.final_time);
                if let Some((a, b, _)) = minimize_2d(&f, horizon) {
                    if let Some(r) = run(&[a, b]) {
                        consider(canonical(r));
                    }
                }
            }
            _ => {
                return Err(Error::Oracle(format!(
                    "word {:?} has {dims} free durations, expected at most 2",
                    word
                )))
            }
        }
    }
    best.ok_or_else(|| Error::Oracle("no arc word reached the target within the horizon".into()))
}

/// Coarse scan plus golden-section refinement of a possibly partial
/// objective on `[lo, hi]`.
fn minimize_1d(
    f: &dyn Fn(f64) -> Option<f64>,
    lo: f64,
    hi: f64,
    coarse: usize,
) -> Option<(f64, f64)> {
    let mut best: Option<(f64, f64)> = None;
    let mut xs: Vec<f64> = Vec::with_capacity(coarse + 1);
    for k in 0..=coarse {
        xs.push(lo + (hi - lo) * k as f64 / coarse as f64);
    }
    for &xk in &xs {
        if let Some(v) = f(xk) {
            if best.map(|(_, bv)| v < bv).unwrap_or(true) {
                best = Some((xk, v));
            }
        }
    }
    let (xb, _) = best?;
    let cell = (hi - lo) / coarse as f64;
    let (mut a, mut b) = ((xb - cell).max(lo), (xb + cell).min(hi));
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let eval = |x: f64| f(x).unwrap_or(f64::INFINITY);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (eval(c), eval(d));
    for _ in 0..60 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval(d);
        }
    }
    let x = 0.5 * (a + b);
    f(x).map(|v| (x, v)).or(best)
}

/// Coarse grid plus per-axis golden refinement for two free durations.
fn minimize_2d(f: &dyn Fn(f64, f64) -> Option<f64>, hi: f64) -> Option<(f64, f64, f64)> {
    const COARSE: usize = 20;
    let mut best: Option<(f64, f64, f64)> = None;
    for i in 0..=COARSE {
        for j in 0..=COARSE {
            let a = hi * i as f64 / COARSE as f64;
            let b = hi * j as f64 / COARSE as f64;
            if let Some(v) = f(a, b) {
                if best.map(|(_, _, bv)| v < bv).unwrap_or(true) {
                    best = Some((a, b, v));
                }
            }
        }
    }
    let (mut a, mut b, mut v) = best?;
    let cell = hi / COARSE as f64;
    for _round in 0..4 {
        if let Some((na, nv)) = minimize_1d(&|x| f(x, b), (a - cell).max(0.0), (a + cell).min(hi), 16)
        {
            if nv < v {
                a = na;
                v = nv;
            }
        }
        if let Some((nb, nv)) = minimize_1d(&|y| f(a, y), (b - cell).max(0.0), (b + cell).min(hi), 16)
        {
            if nv < v {
                b = nb;
                v = nv;
            }
        }
    }
    Some((a, b, v))
}

/// Feedback-versus-oracle comparison at one start.
#[derive(Debug, Clone, Copy)]
pub struct OracleGap {
    pub oracle_value: f64,
    pub feedback_time: f64,
    /// `(feedback - oracle) / oracle`.
    pub rel_gap: f64,
}

/// Interpolate the grid value at the trajectory start and report the gap.
pub fn compare(
    traj: &crate::simulate::Trajectory,
    grid: &ValueGrid,
) -> Result<OracleGap, Error> {
    let x0 = traj.nodes.first().expect("empty trajectory").1;
    let v = grid
        .value_at(x0)
        .ok_or_else(|| Error::Oracle(format!("start ({}, {}) outside the grid hull", x0.s1, x0.s2)))?;
    if v >= grid.cap {
        return Err(Error::Oracle("oracle value is the unreachable cap at the start".into()));
    }
    let t = traj.final_time;
    Ok(OracleGap { oracle_value: v, feedback_time: t, rel_gap: (t - v) / v })
}
