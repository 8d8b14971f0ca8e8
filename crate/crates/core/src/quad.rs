//! Adaptive Simpson quadrature with a divergence cap.

/// Result of an adaptive integration. `diverged` is set when the running
/// value exceeded the cap, which callers treat as `+inf` (the integrands
/// here blow up logarithmically at the biomass-depletion endpoint).
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub diverged: bool,
}

const MAX_DEPTH: u32 = 60;

/// Adaptive Simpson on `[a, b]` to absolute tolerance `abs_tol`.
pub fn adaptive_simpson(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    cap: f64,
) -> QuadResult {
    if a == b {
        return QuadResult { value: 0.0, diverged: false };
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    let mut diverged = false;
    let value =
        recurse(f, a, b, fa, fm, fb, whole, abs_tol, MAX_DEPTH, cap, &mut diverged);
    QuadResult { value, diverged }
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    cap: f64,
    diverged: &mut bool,
) -> f64 {
    if *diverged {
        return whole;
    }
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    // the tolerance handed to children is floored at rounding noise, or the
    // recursion would subdivide forever once the Richardson delta consists
    // of cancellation error only
    let floor = 8.0 * f64::EPSILON * (left.abs() + right.abs() + 1.0);
    if depth == 0 || delta.abs() <= 15.0 * tol.max(floor) || (b - a).abs() <= 8.0 * f64::EPSILON * (a.abs() + b.abs()) {
        let v = left + right + delta / 15.0;
        if v.abs() > cap || !v.is_finite() {
            *diverged = true;
        }
        return v;
    }
    let child_tol = (0.5 * tol).max(floor);
    let l = recurse(f, a, m, fa, flm, fm, left, child_tol, depth - 1, cap, diverged);
    if *diverged || l.abs() > cap {
        *diverged = true;
        return l;
    }
    let r = recurse(f, m, b, fm, frm, fb, right, child_tol, depth - 1, cap, diverged);
    let v = l + r;
    if v.abs() > cap || !v.is_finite() {
        *diverged = true;
    }
    v
}
