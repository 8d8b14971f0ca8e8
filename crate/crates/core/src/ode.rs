//! Explicit Runge–Kutta integration with dense output and event location.
//!
//! Two methods are provided: a fixed-step classic RK4 (step = `max_step`)
//! and an adaptive Dormand–Prince 5(4) pair. Dense output is cubic Hermite
//! on the accepted nodes, which is what event bisection runs on. Everything
//! is plain sequential `f64` arithmetic, so identical inputs produce
//! bitwise-identical results.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },

    #[error("step budget exhausted at t = {t}")]
    TooManySteps { t: f64 },

    #[error("state left the domain at t = {t} without a matching event")]
    DomainDeparture { t: f64 },

    #[error("independent variable reached the singular floor at s1 = {s1}")]
    SingularityApproach { s1: f64 },

    #[error("required event did not occur within the integration span")]
    MissingEvent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    /// Classic RK4 with step equal to `max_step`.
    FixedRk4,
    /// Dormand–Prince 5(4) with PI-free elementary step control.
    AdaptiveRk45,
}

#[derive(Debug, Clone, Copy)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub method: Method,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: f64::INFINITY,
            method: Method::AdaptiveRk45,
        }
    }
}

impl IntegratorConfig {
    pub fn fixed_rk4(step: f64) -> Self {
        IntegratorConfig { max_step: step, method: Method::FixedRk4, ..Default::default() }
    }

    pub fn with_max_step(mut self, h: f64) -> Self {
        self.max_step = h;
        self
    }
}

/// What a located event corresponds to, for dispatch by callers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    HitsTargetEdge,
    CrossesS2Star,
    CrossesCurve,
    SignChange,
    LeavesDomain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Any,
    Up,
    Down,
}

/// Scalar event function `g(t, y)`; a crossing is reported when `g` passes
/// through zero in the requested direction. A `g` that starts at exactly
/// zero is not a crossing until it has left zero first.
pub struct EventSpec<'a, const N: usize> {
    pub kind: EventKind,
    pub direction: Direction,
    pub terminal: bool,
    pub g: Box<dyn Fn(f64, &[f64; N]) -> f64 + 'a>,
}

impl<'a, const N: usize> EventSpec<'a, N> {
    pub fn new(
        kind: EventKind,
        direction: Direction,
        terminal: bool,
        g: impl Fn(f64, &[f64; N]) -> f64 + 'a,
    ) -> Self {
        EventSpec { kind, direction, terminal, g: Box::new(g) }
    }
}

/// A located zero crossing.
#[derive(Debug, Clone, Copy)]
pub struct Event<const N: usize> {
    pub kind: EventKind,
    /// Index into the event list passed to [`integrate`].
    pub index: usize,
    pub t: f64,
    pub y: [f64; N],
}

/// Continuous-output coefficients for one accepted step, in the nested
/// form `y(θ) = c1 + θ (c2 + (1-θ)(c3 + θ (c4 + (1-θ) c5)))`.
#[derive(Debug, Clone, Copy)]
struct DenseSegment<const N: usize> {
    t0: f64,
    h: f64,
    c: [[f64; N]; 5],
}

impl<const N: usize> DenseSegment<N> {
    fn eval(&self, t: f64) -> [f64; N] {
        let theta = if self.h == 0.0 { 0.0 } else { (t - self.t0) / self.h };
        let omt = 1.0 - theta;
        let mut out = [0.0; N];
        for i in 0..N {
            out[i] = self.c[0][i]
                + theta
                    * (self.c[1][i]
                        + omt * (self.c[2][i] + theta * (self.c[3][i] + omt * self.c[4][i])));
        }
        out
    }

    /// Cubic-Hermite segment (4th dense slot zero).
    fn hermite(t0: f64, y0: &[f64; N], f0: &[f64; N], t1: f64, y1: &[f64; N], f1: &[f64; N]) -> Self {
        let h = t1 - t0;
        let mut c = [[0.0; N]; 5];
        for i in 0..N {
            let dy = y1[i] - y0[i];
            c[0][i] = y0[i];
            c[1][i] = dy;
            c[2][i] = h * f0[i] - dy;
            c[3][i] = 2.0 * dy - h * (f0[i] + f1[i]);
            c[4][i] = 0.0;
        }
        DenseSegment { t0, h, c }
    }
}

/// Dense trajectory: accepted nodes with derivatives, plus located events.
#[derive(Debug, Clone)]
pub struct Solution<const N: usize> {
    pub t: Vec<f64>,
    pub y: Vec<[f64; N]>,
    pub dy: Vec<[f64; N]>,
    segments: Vec<DenseSegment<N>>,
    pub events: Vec<Event<N>>,
    /// Set when integration stopped at a terminal event rather than at the
    /// end of the span.
    pub terminated: Option<Event<N>>,
}

impl<const N: usize> Solution<N> {
    pub fn t_end(&self) -> f64 {
        *self.t.last().expect("empty solution")
    }

    pub fn final_state(&self) -> [f64; N] {
        *self.y.last().expect("empty solution")
    }

    /// Continuous-output evaluation; clamps to the span.
    pub fn eval(&self, t: f64) -> [f64; N] {
        let n = self.t.len();
        if n == 1 || self.segments.is_empty() {
            return self.y[0];
        }
        let forward = self.t[n - 1] >= self.t[0];
        let (lo, hi) = if forward { (self.t[0], self.t[n - 1]) } else { (self.t[n - 1], self.t[0]) };
        let tc = t.clamp(lo, hi);
        // binary search for the segment on the monotone node times
        let mut a = 0usize;
        let mut b = n - 1;
        while b - a > 1 {
            let mid = (a + b) / 2;
            let before = if forward { self.t[mid] <= tc } else { self.t[mid] >= tc };
            if before {
                a = mid;
            } else {
                b = mid;
            }
        }
        self.segments[a.min(self.segments.len() - 1)].eval(tc)
    }
}

const MAX_STEPS: usize = 4_000_000;
const EVENT_BISECT_ITERS: usize = 80;

struct DormandPrince;

impl DormandPrince {
    const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 6] = [
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    // y1 coefficients are the last A row (FSAL); E = b5 - b4 error weights
    const E: [f64; 7] = [
        71.0 / 57600.0,
        0.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    ];
    // weights of the 4th-order continuous output
    const D: [f64; 7] = [
        -12715105075.0 / 11282082432.0,
        0.0,
        87487479700.0 / 32700410799.0,
        -10690763975.0 / 1880347072.0,
        701980252875.0 / 199316789632.0,
        -1453857185.0 / 822651844.0,
        69997945.0 / 29380423.0,
    ];
}

fn dopri_dense<const N: usize>(
    t0: f64,
    hs: f64,
    y0: &[f64; N],
    y1: &[f64; N],
    k: &[[f64; N]; 7],
) -> DenseSegment<N> {
    let mut c = [[0.0; N]; 5];
    for i in 0..N {
        let dy = y1[i] - y0[i];
        c[0][i] = y0[i];
        c[1][i] = dy;
        c[2][i] = hs * k[0][i] - dy;
        c[3][i] = dy - hs * k[6][i] - c[2][i];
        let mut d = 0.0;
        for j in 0..7 {
            d += DormandPrince::D[j] * k[j][i];
        }
        c[4][i] = hs * d;
    }
    DenseSegment { t0, h: hs, c }
}

/// Integrate `dy/dt = rhs(t, y)` over `t_span` (either direction), locating
/// the given events on the dense output. Integration halts at the first
/// terminal event.
pub fn integrate<const N: usize>(
    rhs: &dyn Fn(f64, &[f64; N]) -> [f64; N],
    y0: [f64; N],
    t_span: (f64, f64),
    cfg: &IntegratorConfig,
    events: &[EventSpec<'_, N>],
) -> Result<Solution<N>, OdeError> {
    let (t0, t_end) = t_span;
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let span = (t_end - t0).abs();

    let mut sol = Solution {
        t: vec![t0],
        y: vec![y0],
        dy: vec![rhs(t0, &y0)],
        segments: Vec::new(),
        events: Vec::new(),
        terminated: None,
    };
    if span == 0.0 {
        return Ok(sol);
    }

    let mut prev_g: Vec<f64> = events.iter().map(|e| (e.g)(t0, &y0)).collect();

    let mut t = t0;
    let mut y = y0;
    let mut f = sol.dy[0];
    let mut h = match cfg.method {
        Method::FixedRk4 => {
            assert!(cfg.max_step.is_finite() && cfg.max_step > 0.0, "fixed RK4 needs a step");
            let n = (span / cfg.max_step).ceil().max(1.0);
            span / n
        }
        Method::AdaptiveRk45 => {
            // size the first trial step from the initial slope so that huge
            // spans do not drive the stage states far outside the domain
            let mut scale: f64 = 0.0;
            for i in 0..N {
                let s = sol.dy[0][i].abs() / (1.0 + y0[i].abs());
                scale = scale.max(s);
            }
            let slope_cap = if scale > 0.0 { 0.1 / scale } else { span };
            (span / 16.0).min(cfg.max_step).min(slope_cap)
        }
    };

    for _step in 0..MAX_STEPS {
        let remaining = (t_end - t) * dir;
        if remaining <= 1e-14 * span.max(1.0) {
            return Ok(sol);
        }
        h = h.min(remaining).min(cfg.max_step);
        if h < 4.0 * f64::EPSILON * t.abs().max(1.0) {
            return Err(OdeError::StepUnderflow { t });
        }
        let hs = h * dir;

        let (y_new, f_new, err, seg) = match cfg.method {
            Method::FixedRk4 => {
                let y_new = rk4_step(rhs, t, &y, &f, hs);
                let f_new = rhs(t + hs, &y_new);
                let seg = DenseSegment::hermite(t, &y, &f, t + hs, &y_new, &f_new);
                (y_new, f_new, 0.0, seg)
            }
            Method::AdaptiveRk45 => {
                let mut k = [[0.0; N]; 7];
                k[0] = f;
                for stage in 0..6 {
                    let mut yi = y;
                    for i in 0..N {
                        let mut acc = 0.0;
                        for (j, kj) in k.iter().enumerate().take(stage + 1) {
                            acc += DormandPrince::A[stage][j] * kj[i];
                        }
                        yi[i] += hs * acc;
                    }
                    k[stage + 1] = rhs(t + DormandPrince::C[stage] * hs, &yi);
                }
                let y_new = {
                    let mut yn = y;
                    for i in 0..N {
                        let mut acc = 0.0;
                        for j in 0..6 {
                            acc += DormandPrince::A[5][j] * k[j][i];
                        }
                        yn[i] += hs * acc;
                    }
                    yn
                };
                let mut err = 0.0;
                for i in 0..N {
                    let mut e = 0.0;
                    for j in 0..7 {
                        e += DormandPrince::E[j] * k[j][i];
                    }
                    e *= hs;
                    let sc = cfg.abs_tol + cfg.rel_tol * y[i].abs().max(y_new[i].abs());
                    err += (e / sc) * (e / sc);
                }
                err = (err / N as f64).sqrt();
                let seg = dopri_dense(t, hs, &y, &y_new, &k);
                (y_new, k[6], err, seg)
            }
        };

        if err > 1.0 {
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            continue;
        }

        let t_new = t + hs;

        // event scan on this accepted step
        let mut located: Vec<Event<N>> = Vec::new();
        let mut terminal_hit: Option<Event<N>> = None;
        for (idx, ev) in events.iter().enumerate() {
            let g1 = (ev.g)(t_new, &y_new);
            let g0 = prev_g[idx];
            let up = g0 < 0.0 && g1 >= 0.0;
            let down = g0 > 0.0 && g1 <= 0.0;
            let fired = match ev.direction {
                Direction::Any => up || down,
                Direction::Up => up,
                Direction::Down => down,
            };
            if fired {
                let (te, ye) = locate_event(&ev.g, cfg, &seg, t, t_new, y_new, g0);
                let event = Event { kind: ev.kind, index: idx, t: te, y: ye };
                if ev.terminal {
                    let better = terminal_hit
                        .map(|cur| (te - t0).abs() < (cur.t - t0).abs())
                        .unwrap_or(true);
                    if better {
                        terminal_hit = Some(event);
                    }
                } else {
                    located.push(event);
                }
            }
            prev_g[idx] = g1;
        }

        if let Some(term) = terminal_hit {
            // keep non-terminal events that occurred before the stop
            located.retain(|e| (e.t - t0).abs() <= (term.t - t0).abs());
            located.sort_by(|a, b| {
                (a.t - t0).abs().partial_cmp(&(b.t - t0).abs()).expect("event time NaN")
            });
            sol.events.extend(located);
            sol.events.push(term);
            sol.segments.push(seg);
            sol.t.push(term.t);
            sol.y.push(term.y);
            sol.dy.push(rhs(term.t, &term.y));
            sol.terminated = Some(term);
            return Ok(sol);
        }
        located.sort_by(|a, b| {
            (a.t - t0).abs().partial_cmp(&(b.t - t0).abs()).expect("event time NaN")
        });
        sol.events.extend(located);

        sol.segments.push(seg);
        sol.t.push(t_new);
        sol.y.push(y_new);
        sol.dy.push(f_new);
        t = t_new;
        y = y_new;
        f = f_new;

        if cfg.method == Method::AdaptiveRk45 {
            let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= grow;
        }
    }
    Err(OdeError::TooManySteps { t })
}

fn rk4_step<const N: usize>(
    rhs: &dyn Fn(f64, &[f64; N]) -> [f64; N],
    t: f64,
    y: &[f64; N],
    f: &[f64; N],
    h: f64,
) -> [f64; N] {
    let mut y2 = *y;
    for i in 0..N {
        y2[i] += 0.5 * h * f[i];
    }
    let k2 = rhs(t + 0.5 * h, &y2);
    let mut y3 = *y;
    for i in 0..N {
        y3[i] += 0.5 * h * k2[i];
    }
    let k3 = rhs(t + 0.5 * h, &y3);
    let mut y4 = *y;
    for i in 0..N {
        y4[i] += h * k3[i];
    }
    let k4 = rhs(t + h, &y4);
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (f[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Bisection on the continuous output of one accepted step. `g0` is the
/// event value at the step start (used only for its sign).
fn locate_event<const N: usize>(
    g: &(dyn Fn(f64, &[f64; N]) -> f64 + '_),
    cfg: &IntegratorConfig,
    seg: &DenseSegment<N>,
    t0: f64,
    t1: f64,
    y1: [f64; N],
    g0: f64,
) -> (f64, [f64; N]) {
    let mut a = t0;
    let mut b = t1;
    let sign_a = g0 >= 0.0;
    let mut best_t = b;
    let mut best_y = y1;
    for _ in 0..EVENT_BISECT_ITERS {
        let mid = 0.5 * (a + b);
        let ym = seg.eval(mid);
        let gm = g(mid, &ym);
        if (gm >= 0.0) == sign_a {
            a = mid;
        } else {
            b = mid;
            best_t = mid;
            best_y = ym;
        }
        if (b - a).abs() < cfg.rel_tol * b.abs().max(1.0) && gm.abs() < cfg.abs_tol {
            break;
        }
    }
    (best_t, best_y)
}

/// Integrate a flow parameterized by `s1` instead of time.
///
/// Used for the backward constant-control flows whose right-hand sides
/// divide by `f(s1)`: a hard floor on `s1` guards the `f(0) = 0`
/// singularity, and reaching it is reported distinctly.
pub fn integrate_in_s1<const N: usize>(
    rhs: &dyn Fn(f64, &[f64; N]) -> [f64; N],
    y0: [f64; N],
    s1_span: (f64, f64),
    cfg: &IntegratorConfig,
    events: &[EventSpec<'_, N>],
    s1_floor: f64,
) -> Result<Solution<N>, OdeError> {
    let (a, b) = s1_span;
    if a.min(b) < s1_floor {
        if a < s1_floor {
            return Err(OdeError::SingularityApproach { s1: a });
        }
        // descending towards the floor: stop there and report
        let mut own: Vec<EventSpec<'_, N>> = Vec::with_capacity(events.len() + 1);
        for e in events {
            own.push(EventSpec { kind: e.kind, direction: e.direction, terminal: e.terminal, g: Box::new(&*e.g) });
        }
        own.push(EventSpec::new(EventKind::LeavesDomain, Direction::Down, true, move |s1, _y: &[f64; N]| {
            s1 - s1_floor
        }));
        let sol = integrate(rhs, y0, s1_span, cfg, &own)?;
        if let Some(term) = sol.terminated {
            if term.kind == EventKind::LeavesDomain && term.index == events.len() {
                return Err(OdeError::SingularityApproach { s1: term.t });
            }
        }
        return Ok(sol);
    }
    integrate(rhs, y0, s1_span, cfg, events)
}
