//! Synthesis landmarks and curves: the `Z1` boundary, the switching locus
//! `C0` with its defining integral, the singular-arc quantities and the
//! regime classification.

use crate::curve::CurveGraph;
use crate::error::Error;
use crate::model::{check_hypotheses, ModelParams, State, TargetBox};
use crate::ode::{integrate, Direction, EventKind, EventSpec, IntegratorConfig};
use crate::quad::adaptive_simpson;

/// Numerical knobs shared by the geometry and synthesis builders.
#[derive(Debug, Clone, Copy)]
pub struct BuildConfig {
    pub ode: IntegratorConfig,
    /// Curve sample-table size.
    pub curve_samples: usize,
    /// Coarse bracketing scan for inf-type definitions.
    pub scan_points: usize,
    /// Absolute tolerance of the switching integral.
    pub quad_tol: f64,
    /// Values of the switching integral beyond this count as divergent.
    pub phi_cap: f64,
    /// Root tolerance, relative to the total mass.
    pub root_tol: f64,
    /// Half-width of the singular tracking band, relative to the total mass.
    pub band_factor: f64,
    /// Hard floor on `s1` in flows that divide by `f(s1)`, relative to `M`.
    pub s1_floor_factor: f64,
    /// Backward-shot seeds on the target-corner column.
    pub column_seeds: usize,
    /// Closed-loop time horizon.
    pub horizon: f64,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            ode: IntegratorConfig::default(),
            curve_samples: 512,
            scan_points: 1024,
            quad_tol: 1e-10,
            phi_cap: 1e6,
            root_tol: 1e-9,
            band_factor: 1e-6,
            s1_floor_factor: 1e-9,
            column_seeds: 256,
            horizon: 1e4,
        }
    }
}

/// Singular-arc quantities: peak concentration, saturation abscissa (where
/// the singular control reaches the bound) and the end singular abscissa.
#[derive(Debug, Clone, Copy)]
pub struct SingularArcInfo {
    pub s2_star: f64,
    /// `s2_star < M`: the singular locus meets the domain.
    pub exists: bool,
    /// Unique root of [`nu`]; `u_s(s1_min) = 1`.
    pub s1_min: Option<f64>,
    /// Abscissa where singular travel ends and the synthesis hands over.
    pub s1_star: Option<f64>,
}

/// Feedback regime. Exactly one applies per `(ModelParams, TargetBox)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Growth peak at or above the total mass: no singular arc.
    NoSingular,
    /// The singular arc stays admissible down to the end singular state.
    AdmissibleSingular,
    /// Barrier with prior saturation, end singular state in the interior.
    SaturatedInterior,
    /// Barrier with prior saturation, end singular state on the axis.
    SaturatedBoundary,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::NoSingular => "no-singular",
            Regime::AdmissibleSingular => "admissible-singular",
            Regime::SaturatedInterior => "saturated-interior",
            Regime::SaturatedBoundary => "saturated-boundary",
        }
    }
}

/// Region of the domain partition a state falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionTag {
    Target,
    /// Left column above the target: `s1 <= s1_bar`, `s2 > s2_bar`.
    Z0 { in_extended_target: bool },
    /// Under the maximal-control boundary curve: absorbed into the target
    /// by `u = 1`.
    Z1,
    Zs,
}

/// Domain partition: the `Z1` boundary curve, the switching locus `C0` and
/// the landmarks needed for membership tests.
#[derive(Debug, Clone)]
pub struct Partition {
    pub target: TargetBox,
    pub total_mass: f64,
    pub sigma2: CurveGraph,
    /// Abscissa where the `Z1` boundary meets `s2 = 0`.
    pub sigma1_under: f64,
    pub c0: Option<CurveGraph>,
    pub s2_star: f64,
    pub s1_star: Option<f64>,
}

impl Partition {
    pub fn membership(&self, x: State) -> RegionTag {
        if self.target.contains(x) {
            return RegionTag::Target;
        }
        if x.s1 <= self.target.s1_bar {
            return RegionTag::Z0 { in_extended_target: self.in_extended_target(x) };
        }
        if x.s1 <= self.sigma1_under {
            if let Some(b) = self.sigma2.eval(x.s1) {
                if x.s2 <= b {
                    return RegionTag::Z1;
                }
            }
        }
        RegionTag::Zs
    }

    /// Closed membership in the extended target: inside the left column,
    /// a state belongs when no point of `C0` lies strictly below it.
    pub fn in_extended_target(&self, x: State) -> bool {
        if !(x.s1 <= self.target.s1_bar && x.s2 > self.target.s2_bar) {
            return false;
        }
        match &self.c0 {
            None => true,
            Some(c) => match c.eval(x.s1) {
                None => true,
                Some(v) => x.s2 <= v,
            },
        }
    }
}

/// Saturation gap `nu(s1) = f(s1) - mu(s2*) (M - s1 - s2*)`: negative where
/// the singular control exceeds the bound, zero at the saturation point.
pub fn nu(params: &ModelParams, s1: f64) -> f64 {
    let s2s = params.s2_star();
    params.f(s1) - params.mu(s2s) * (params.total_mass - s1 - s2s)
}

/// Control holding the state on the singular locus, `u_s(s1) =
/// mu(s2*) (M - s1 - s2*) / f(s1)`; admissible iff `s1 >= s1_min`.
pub fn singular_control(params: &ModelParams, s1: f64) -> f64 {
    let s2s = params.s2_star();
    params.mu(s2s) * (params.total_mass - s1 - s2s) / params.f(s1)
}

/// Switching integral value, with divergence reported as `+inf`.
///
/// Integrand `mu'(s) mu(s2_bar) (M - s1 - s2_bar) / (mu(s)^2 (M - s1 - s))`
/// from `s2_bar` to `s2`; the pole at `s = M - s1` makes the integral blow
/// up as the upper limit approaches it, which the cap detects.
pub fn phi_capped(params: &ModelParams, target: &TargetBox, s1: f64, s2: f64, cfg: &BuildConfig) -> f64 {
    let m = params.total_mass;
    if s2 <= target.s2_bar {
        return 0.0;
    }
    if s2 >= (m - s1) * (1.0 - 1e-12) {
        return f64::INFINITY;
    }
    let k = params.mu(target.s2_bar) * (m - s1 - target.s2_bar);
    let integrand = move |s: f64| params.mu_prime(s) * k / (params.mu(s).powi(2) * (m - s1 - s));
    let r = adaptive_simpson(&integrand, target.s2_bar, s2, cfg.quad_tol, cfg.phi_cap);
    if r.diverged {
        f64::INFINITY
    } else {
        r.value
    }
}

/// Checked switching integral: `s2` must sit at or above the target
/// threshold and strictly inside the domain column.
pub fn phi_integral(params: &ModelParams, target: &TargetBox, s1: f64, s2: f64) -> Result<f64, Error> {
    if s2 < target.s2_bar {
        return Err(Error::Geometry(format!(
            "switching integral queried below the target threshold: s2 = {s2}"
        )));
    }
    if s1 + s2 >= params.total_mass {
        return Err(Error::Geometry(format!(
            "switching integrand singular: s1 + s2 = {} >= M",
            s1 + s2
        )));
    }
    Ok(phi_capped(params, target, s1, s2, &BuildConfig::default()))
}

/// Boundary curve of `Z1`: the maximal-control flow through the target
/// corner, parameterized by `s1`, continued until it meets `s2 = 0`.
pub fn compute_sigma2(
    params: &ModelParams,
    target: &TargetBox,
    cfg: &BuildConfig,
) -> Result<(CurveGraph, f64), Error> {
    let p = *params;
    let m = p.total_mass;
    let rhs = move |s1: f64, y: &[f64; 1]| {
        let s2 = y[0].max(0.0);
        [p.mu(s2) * (m - s1 - s2) / p.f(s1) - 1.0]
    };
    let events = [
        EventSpec::new(EventKind::HitsTargetEdge, Direction::Down, true, |_s1, y: &[f64; 1]| y[0]),
        EventSpec::new(EventKind::LeavesDomain, Direction::Up, true, move |s1, y: &[f64; 1]| {
            s1 + y[0] - m * (1.0 - 1e-12)
        }),
    ];
    let sol = integrate(&rhs, [target.s2_bar], (target.s1_bar, m), &cfg.ode, &events)?;
    let term = sol.terminated.ok_or_else(|| {
        Error::Geometry("Z1 boundary curve did not reach s2 = 0 before s1 = M".into())
    })?;
    if term.kind == EventKind::LeavesDomain {
        return Err(Error::Geometry("Z1 boundary curve met the full-mass line".into()));
    }
    let sigma1_under = term.t;
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(sol.t.len());
    for (s1, y) in sol.t.iter().zip(sol.y.iter()) {
        if s1 + y[0] >= m {
            return Err(Error::Geometry("Z1 boundary sample outside the domain".into()));
        }
        if pts.last().map(|p: &(f64, f64)| s1 > &p.0).unwrap_or(true) {
            pts.push((*s1, y[0].max(0.0)));
        }
    }
    thin_to(&mut pts, 4 * cfg.curve_samples);
    Ok((CurveGraph::monotone(pts)?, sigma1_under))
}

fn thin_to(pts: &mut Vec<(f64, f64)>, max: usize) {
    if pts.len() <= max.max(2) {
        return;
    }
    let n = pts.len();
    let stride = n.div_ceil(max);
    let mut kept: Vec<(f64, f64)> = pts.iter().copied().step_by(stride).collect();
    if kept.last() != pts.last() {
        kept.push(*pts.last().unwrap());
    }
    *pts = kept;
}

/// Root of the switching integral in one column: the unique
/// `s2 in (s2_bar, upper]` with `phi(s1, s2) = 1`, if the column reaches 1.
fn column_root(
    params: &ModelParams,
    target: &TargetBox,
    s1: f64,
    upper: f64,
    cfg: &BuildConfig,
) -> Option<f64> {
    let phi = |s2: f64| phi_capped(params, target, s1, s2, cfg);
    if phi(upper) < 1.0 {
        return None;
    }
    let mut lo = target.s2_bar;
    let mut hi = upper;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phi(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * upper.max(1.0) {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}

/// End singular abscissa per its three-branch definition.
fn end_singular_abscissa(
    params: &ModelParams,
    target: &TargetBox,
    sigma2: &CurveGraph,
    cfg: &BuildConfig,
) -> Result<f64, Error> {
    let s2s = params.s2_star();
    let m = params.total_mass;
    debug_assert!(s2s < m);

    if s2s < target.s2_bar {
        // singular level below the target threshold: hand-over where the
        // Z1 boundary first dips below it
        return sigma2.first_crossing_below(s2s).ok_or_else(|| {
            Error::Geometry("Z1 boundary never crosses the singular level".into())
        });
    }

    let phi_at = |s1: f64| phi_capped(params, target, s1, s2s, cfg);
    let phi_ul = phi_at(target.s1_bar);
    if phi_ul >= 1.0 {
        // infimum of { s1 > 0 : phi(s1, s2*) > 1 }; phi is increasing in s1
        if phi_at(0.0) > 1.0 {
            return Ok(0.0);
        }
        // coarse scan for a bracket, then bisection
        let n = cfg.scan_points;
        let mut lo = 0.0;
        let mut hi = target.s1_bar;
        for i in 1..=n {
            let s1 = target.s1_bar * i as f64 / n as f64;
            if phi_at(s1) > 1.0 {
                hi = s1;
                lo = target.s1_bar * (i - 1) as f64 / n as f64;
                break;
            }
        }
        let tol = cfg.root_tol * m;
        while hi - lo > tol.min(1e-12 * m.max(1.0)).max(f64::EPSILON * m) {
            let mid = 0.5 * (lo + hi);
            if phi_at(mid) > 1.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        return Ok(0.5 * (lo + hi));
    }

    // empty switching locus with the singular level above the threshold
    Ok(target.s1_bar)
}

/// The switching locus `C0` as a graph over `s1`, or `None` when empty.
///
/// Case split on the position of the growth peak: at or above `M` the locus
/// spans the whole column `[0, s1_bar]`; strictly between the threshold and
/// `M` it exists iff the column integral at the corner abscissa reaches 1,
/// and then spans `[s1_star, s1_bar]` with ordinates below the peak; at or
/// below the threshold it is empty.
fn build_c0(
    params: &ModelParams,
    target: &TargetBox,
    s1_star: Option<f64>,
    cfg: &BuildConfig,
) -> Result<Option<CurveGraph>, Error> {
    let s2s = params.s2_star();
    let m = params.total_mass;
    let n = cfg.curve_samples.max(8);

    if s2s <= target.s2_bar {
        return Ok(None);
    }

    if s2s >= m {
        let mut pts = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let s1 = target.s1_bar * i as f64 / n as f64;
            // the integral blows up at the biomass-depletion end, so a root
            // always exists in (s2_bar, M - s1)
            let mut upper = m - s1 - (m - s1 - target.s2_bar) * 1e-9;
            let mut root = column_root(params, target, s1, upper, cfg);
            while root.is_none() {
                let gap = m - s1 - upper;
                upper = m - s1 - gap * 0.5;
                if m - s1 - upper < 1e-13 * m {
                    return Err(Error::Geometry(format!(
                        "no switching-locus root in column s1 = {s1}"
                    )));
                }
                root = column_root(params, target, s1, upper, cfg);
            }
            pts.push((s1, root.unwrap()));
        }
        return Ok(Some(CurveGraph::monotone(pts)?));
    }

    let phi_ul = phi_capped(params, target, target.s1_bar, s2s, cfg);
    if phi_ul < 1.0 {
        return Ok(None);
    }
    let s1_star = s1_star.expect("end singular abscissa required for the locus span");
    let span = target.s1_bar - s1_star;
    if span <= 0.0 {
        return Ok(None);
    }
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(n + 1);
    if s1_star > 0.0 {
        // the locus meets the singular level exactly at the end singular state
        pts.push((s1_star, s2s));
    }
    for i in 1..=n {
        // quadratic clustering towards the vertical-slope end
        let frac = (i as f64 / n as f64).powi(2);
        let s1 = s1_star + span * frac;
        match column_root(params, target, s1, s2s, cfg) {
            Some(r) => pts.push((s1, r)),
            None => {
                return Err(Error::Geometry(format!(
                    "switching-locus root bracketing failed in column s1 = {s1}"
                )))
            }
        }
    }
    pts.dedup_by(|b, a| b.0 <= a.0);
    Ok(Some(CurveGraph::monotone(pts)?))
}

/// Singular-arc landmarks for a validated model.
pub fn singular_info(params: &ModelParams, target: &TargetBox) -> Result<SingularArcInfo, Error> {
    let cfg = BuildConfig::default();
    let (_, info) = build_partition(params, target, &cfg)?;
    Ok(info)
}

/// The switching locus `C0`, or `None` when empty; spec surface over the
/// partition builder.
pub fn compute_c0(
    params: &ModelParams,
    target: &TargetBox,
    cfg: &BuildConfig,
) -> Result<Option<CurveGraph>, Error> {
    let (partition, _) = build_partition(params, target, cfg)?;
    Ok(partition.c0)
}

/// Classify which feedback construction applies.
pub fn classify_regime(params: &ModelParams, target: &TargetBox) -> Result<Regime, Error> {
    let cfg = BuildConfig::default();
    let (_, info) = build_partition(params, target, &cfg)?;
    Ok(classify(&info))
}

/// Regime from computed landmarks. An exact tie `s1_min = s1_star` counts
/// as admissible.
pub fn classify(info: &SingularArcInfo) -> Regime {
    if !info.exists {
        return Regime::NoSingular;
    }
    let s1_min = info.s1_min.expect("saturation abscissa");
    let s1_star = info.s1_star.expect("end singular abscissa");
    if s1_min <= s1_star {
        Regime::AdmissibleSingular
    } else if s1_star > 0.0 {
        Regime::SaturatedInterior
    } else {
        Regime::SaturatedBoundary
    }
}

/// Spec surface for membership queries.
pub fn membership(partition: &Partition, x: State) -> RegionTag {
    partition.membership(x)
}

/// Validate hypotheses and build the partition plus singular landmarks.
pub fn build_partition(
    params: &ModelParams,
    target: &TargetBox,
    cfg: &BuildConfig,
) -> Result<(Partition, SingularArcInfo), Error> {
    check_hypotheses(params).into_result()?;
    let m = params.total_mass;
    if !(target.s1_bar > 0.0 && target.s2_bar > 0.0 && target.s1_bar + target.s2_bar < m) {
        return Err(Error::Config(format!(
            "target ({}, {}) outside the domain (M = {m})",
            target.s1_bar, target.s2_bar
        )));
    }

    let (sigma2, sigma1_under) = compute_sigma2(params, target, cfg)?;
    let s2s = params.s2_star();

    let info = if s2s < m {
        let s1_min = bisect_nu_root(params);
        let s1_star = end_singular_abscissa(params, target, &sigma2, cfg)?;
        SingularArcInfo { s2_star: s2s, exists: true, s1_min: Some(s1_min), s1_star: Some(s1_star) }
    } else {
        SingularArcInfo { s2_star: s2s, exists: false, s1_min: None, s1_star: None }
    };

    let c0 = build_c0(params, target, info.s1_star, cfg)?;
    let partition = Partition {
        target: *target,
        total_mass: m,
        sigma2,
        sigma1_under,
        c0,
        s2_star: s2s,
        s1_star: info.s1_star,
    };
    Ok((partition, info))
}

/// Unique root of [`nu`] on `(0, M - s2*)`.
fn bisect_nu_root(params: &ModelParams) -> f64 {
    let m = params.total_mass;
    let s2s = params.s2_star();
    let mut lo = 0.0;
    let mut hi = m - s2s;
    debug_assert!(nu(params, lo) < 0.0 && nu(params, hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if nu(params, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::builtin_case;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn case(name: &str) -> (ModelParams, TargetBox) {
        builtin_case(name).unwrap().to_model().unwrap()
    }

    #[test]
    fn sigma2_boundary_condition_and_underline() {
        let (p, t) = case("case_I");
        let cfg = BuildConfig::default();
        let (curve, under) = compute_sigma2(&p, &t, &cfg).unwrap();
        assert_eq!(curve.eval(t.s1_bar).unwrap(), t.s2_bar); // exact initial condition
        assert_abs_diff_eq!(under, 1.126_931_665_988, epsilon = 1e-7);
        for (s1, s2) in curve.points() {
            assert!(s1 + s2 < p.total_mass);
        }
    }

    #[test]
    fn sigma2_under_abscissas_frozen() {
        // independently recomputed with a separate high-order integrator
        let expect = [
            ("case_IIa", 0.439_058_306_917),
            ("case_IIb", 0.269_063_616_551),
            ("case_IIIa", 0.223_998_558_609),
            ("case_IVa", 1.278_976_316_816),
            ("case_IVb", 1.025_776_339_867),
        ];
        let cfg = BuildConfig::default();
        for (name, want) in expect {
            let (p, t) = case(name);
            let (_, under) = compute_sigma2(&p, &t, &cfg).unwrap();
            assert_abs_diff_eq!(under, want, epsilon = 1e-6);
        }
    }

    #[test]
    fn sigma2_step_halved_reintegration_case_iva() {
        let (p, t) = case("case_IVa");
        let fine = BuildConfig { ode: IntegratorConfig::fixed_rk4(1e-3), ..Default::default() };
        let half = BuildConfig { ode: IntegratorConfig::fixed_rk4(5e-4), ..Default::default() };
        let (_, u1) = compute_sigma2(&p, &t, &fine).unwrap();
        let (_, u2) = compute_sigma2(&p, &t, &half).unwrap();
        assert_abs_diff_eq!(u1, u2, epsilon = 1e-6);
    }

    #[test]
    fn phi_integral_base_cases() {
        let (p, t) = case("case_IIa");
        assert_eq!(phi_integral(&p, &t, 0.1, t.s2_bar).unwrap(), 0.0);
        // frozen switching-integral values at the corner abscissa
        let (p1, t1) = case("case_I");
        let v1 = phi_integral(&p1, &t1, t1.s1_bar, p1.s2_star()).unwrap();
        assert_abs_diff_eq!(v1, 0.901_009_069_362, epsilon = 1e-8);
        let cfg = BuildConfig::default();
        let v2 = phi_capped(&p, &t, t.s1_bar, p.s2_star(), &cfg);
        assert!(v2.is_infinite()); // pole sits below the peak in this case
        let v3 = phi_capped(&p, &t, 0.05, p.s2_star(), &cfg);
        assert!(v3.is_finite() && v3 < 1.0);
    }

    #[test]
    fn phi_diverges_at_biomass_depletion_monod() {
        let text = "name = mono\nmu_bar = 1\nKs = 2\na = 0.1\nM = 1.3\nS1_bar = 0.15\nS2_bar = 0.05\n";
        let (p, t) = crate::config::CaseConfig::parse(text).unwrap().to_model().unwrap();
        let s1 = 0.1;
        let near = (p.total_mass - s1) * (1.0 - 1e-14);
        assert!(phi_integral(&p, &t, s1, near).unwrap().is_infinite());
        assert!(phi_integral(&p, &t, s1, p.total_mass - s1).is_err());
    }

    #[test]
    fn s1_min_roots_match_closed_form() {
        // for linear f the saturation abscissa solves a linear equation:
        // s1_min = mu* (M - s2*) / (a + mu*)
        for name in ["case_I", "case_IIa", "case_IIb", "case_IIc", "case_IIIa", "case_IVb"] {
            let (p, t) = case(name);
            let info = singular_info(&p, &t).unwrap();
            let s2s = p.s2_star();
            let mu = p.mu(s2s);
            let closed = mu * (p.total_mass - s2s) / (p.solub.slope + mu);
            let got = info.s1_min.unwrap();
            assert_relative_eq!(got, closed, max_relative = 1e-12);
            assert!(nu(&p, got).abs() < 1e-10);
            assert_abs_diff_eq!(singular_control(&p, got), 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn nu_endpoint_signs_and_monotonicity() {
        let (p, _) = case("case_I");
        let s2s = p.s2_star();
        let hi = p.total_mass - s2s;
        assert!(nu(&p, 1e-12) < 0.0);
        assert_relative_eq!(nu(&p, hi), p.f(hi), max_relative = 1e-12);
        assert_eq!(singular_control(&p, hi), 0.0);
        let mut prev = f64::NEG_INFINITY;
        let mut sign_changes = 0;
        let mut last_sign = -1.0;
        for i in 1..=1000 {
            let s1 = hi * i as f64 / 1000.0;
            let v = nu(&p, s1);
            assert!(v > prev);
            if v.signum() != last_sign {
                sign_changes += 1;
                last_sign = v.signum();
            }
            prev = v;
        }
        assert_eq!(sign_changes, 1);
    }

    #[test]
    fn end_singular_abscissas_frozen() {
        let expect = [
            ("case_I", 0.15),
            ("case_IIa", 0.088_799_832_133_896),
            ("case_IIb", 0.100_802_944_262_652),
            ("case_IIc", 0.100_802_944_262_652),
            ("case_IIIa", 0.0),
            ("case_IIIb", 0.0),
            ("case_IIIc", 0.0),
            ("case_IVa", 0.569_325_797_357_857),
            ("case_IVb", 0.305_968_987_888_895),
        ];
        for (name, want) in expect {
            let (p, t) = case(name);
            let info = singular_info(&p, &t).unwrap();
            assert_abs_diff_eq!(info.s1_star.unwrap(), want, epsilon = 2e-6);
        }
    }

    #[test]
    fn regimes_of_builtin_cases() {
        let expect = [
            ("case_I", Regime::SaturatedInterior),
            ("case_IIa", Regime::SaturatedInterior),
            ("case_IIb", Regime::SaturatedInterior),
            ("case_IIc", Regime::SaturatedInterior),
            ("case_IIIa", Regime::SaturatedBoundary),
            ("case_IIIb", Regime::SaturatedBoundary),
            ("case_IIIc", Regime::SaturatedBoundary),
            ("case_IVa", Regime::AdmissibleSingular),
            ("case_IVb", Regime::AdmissibleSingular),
        ];
        for (name, want) in expect {
            let (p, t) = case(name);
            assert_eq!(classify_regime(&p, &t).unwrap(), want, "{name}");
        }
    }

    #[test]
    fn monod_classifies_no_singular() {
        let text = "name = mono\nmu_bar = 1\nKs = 2\na = 0.1\nM = 1.3\nS1_bar = 0.15\nS2_bar = 0.05\n";
        let (p, t) = crate::config::CaseConfig::parse(text).unwrap().to_model().unwrap();
        assert_eq!(classify_regime(&p, &t).unwrap(), Regime::NoSingular);
        let (part, info) = build_partition(&p, &t, &BuildConfig::default()).unwrap();
        assert!(!info.exists);
        // Lemma-2 case i: the locus spans the whole column
        let c0 = part.c0.as_ref().unwrap();
        assert_eq!(c0.s1_min(), 0.0);
        assert_eq!(c0.s1_max(), t.s1_bar);
    }

    #[test]
    fn c0_empty_in_case_i_nonempty_in_case_iia() {
        let cfg = BuildConfig::default();
        let (p, t) = case("case_I");
        let (part, _) = build_partition(&p, &t, &cfg).unwrap();
        assert!(part.c0.is_none());

        let (p2, t2) = case("case_IIa");
        let (part2, info2) = build_partition(&p2, &t2, &cfg).unwrap();
        let c0 = part2.c0.as_ref().expect("locus nonempty");
        assert_abs_diff_eq!(c0.s1_min(), info2.s1_star.unwrap(), epsilon = 1e-12);
        assert_abs_diff_eq!(c0.s1_max(), t2.s1_bar, epsilon = 1e-12);
        // decreasing graph bounded by the peak, meeting it at the left end
        let mut prev = f64::INFINITY;
        for (s1, s2) in c0.points() {
            assert!(s2 < prev + 1e-14, "not decreasing at {s1}");
            assert!(s2 <= p2.s2_star() + 1e-12);
            prev = s2;
        }
        assert_abs_diff_eq!(c0.first().1, p2.s2_star(), epsilon = 1e-12);
        // every interior sample satisfies the defining equation
        for (s1, s2) in c0.points().skip(1).step_by(37) {
            let v = phi_integral(&p2, &t2, s1, s2).unwrap();
            assert_abs_diff_eq!(v, 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn c0_vertical_slope_diagnostic_case_iia() {
        let (p, t) = case("case_IIa");
        let (_, info) = build_partition(&p, &t, &BuildConfig::default()).unwrap();
        let s1s = info.s1_star.unwrap();
        // finite-difference slope of the defining root blows up approaching
        // the end singular state
        let root = |s1: f64| {
            let (mut lo, mut hi) = (t.s2_bar, p.s2_star());
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if phi_integral(&p, &t, s1, mid).unwrap() < 1.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        let h = 1e-9 * (t.s1_bar - s1s);
        let d = (root(s1s + 2.0 * h) - root(s1s + h)) / h;
        assert!(d.abs() > 1e3, "slope {d}");
    }

    #[test]
    fn membership_tags() {
        let (p, t) = case("case_IIa");
        let (part, _) = build_partition(&p, &t, &BuildConfig::default()).unwrap();
        assert_eq!(part.membership(State::new(0.1, 0.03)), RegionTag::Target);
        assert_eq!(
            part.membership(State::new(t.s1_bar, t.s2_bar)),
            RegionTag::Target
        );
        // just right of the corner, under the boundary curve
        let eps = 1e-3;
        let b = part.sigma2.eval(t.s1_bar + eps).unwrap();
        assert_eq!(part.membership(State::new(t.s1_bar + eps, b * 0.5)), RegionTag::Z1);
        assert_eq!(part.membership(State::new(t.s1_bar + eps, b + 0.05)), RegionTag::Zs);
        // above the locus inside the column: outside the extended target
        let c0 = part.c0.as_ref().unwrap();
        let s1 = 0.2;
        let v = c0.eval(s1).unwrap();
        assert_eq!(
            part.membership(State::new(s1, v + 1e-4)),
            RegionTag::Z0 { in_extended_target: false }
        );
        assert_eq!(
            part.membership(State::new(s1, v - 1e-4)),
            RegionTag::Z0 { in_extended_target: true }
        );
        // column left of the locus span: all extended target
        assert_eq!(
            part.membership(State::new(0.05, 1.0)),
            RegionTag::Z0 { in_extended_target: true }
        );
    }

    #[test]
    fn lemma_case_iv_ordering() {
        for name in ["case_IVa", "case_IVb"] {
            let (p, t) = case(name);
            let info = singular_info(&p, &t).unwrap();
            assert!(p.s2_star() < t.s2_bar);
            assert!(info.s1_min.unwrap() <= info.s1_star.unwrap());
        }
        // sub-case split on the saturation abscissa vs the threshold
        let (pa, ta) = case("case_IVa");
        assert!(singular_info(&pa, &ta).unwrap().s1_min.unwrap() > ta.s1_bar);
        let (pb, tb) = case("case_IVb");
        assert!(singular_info(&pb, &tb).unwrap().s1_min.unwrap() < tb.s1_bar);
    }
}
