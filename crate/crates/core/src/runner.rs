//! Case runner behind the CLI: builds the synthesis for a scenario, emits
//! curve/trajectory/grid files and prints a landmark report.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use crate::config::{builtin_cases, CaseConfig};
use crate::curve::CurveGraph;
use crate::error::Error;
use crate::export;
use crate::geometry::{BuildConfig, Regime, RegionTag};
use crate::model::State;
use crate::oracle::{compare, solve_hjb, OracleGap, ValueGrid};
use crate::simulate::{simulate_closed_loop, FeedbackLaw, Trajectory};
use crate::svg::SvgPlot;
use crate::synthesis::SynthesisGeometry;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Command {
    Classify,
    Curves,
    Simulate { start: State },
    Oracle,
    Compare { start: State },
    All,
}

#[derive(Debug, Clone, Copy)]
pub struct Landmarks {
    pub s2_star: f64,
    pub s1_min: Option<f64>,
    pub s1_star: Option<f64>,
    pub s1_bar: Option<f64>,
    pub sigma1_under: f64,
}

#[derive(Debug, Clone)]
pub struct SimulationRow {
    pub start: State,
    pub final_time: f64,
    pub arc_word: String,
    pub gap: Option<OracleGap>,
}

/// Everything a subcommand produced for one case.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub case_name: String,
    pub regime: Regime,
    pub landmarks: Landmarks,
    pub files: Vec<PathBuf>,
    pub simulations: Vec<SimulationRow>,
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "case {}: regime {}", self.case_name, self.regime.name())?;
        writeln!(f, "  s2_star      = {:.12}", self.landmarks.s2_star)?;
        if let Some(v) = self.landmarks.s1_min {
            writeln!(f, "  s1_min       = {v:.12}")?;
        }
        if let Some(v) = self.landmarks.s1_star {
            writeln!(f, "  s1_star      = {v:.12}")?;
        }
        if let Some(v) = self.landmarks.s1_bar {
            writeln!(f, "  s1_bar       = {v:.12}")?;
        }
        writeln!(f, "  sigma1_under = {:.12}", self.landmarks.sigma1_under)?;
        for row in &self.simulations {
            write!(
                f,
                "  start ({:.4}, {:.4}): t_f = {:.8}, word {}",
                row.start.s1, row.start.s2, row.final_time, row.arc_word
            )?;
            if let Some(g) = &row.gap {
                write!(f, ", oracle {:.8}, gap {:+.3}%", g.oracle_value, g.rel_gap * 100.0)?;
            }
            writeln!(f)?;
        }
        for p in &self.files {
            writeln!(f, "  wrote {}", p.display())?;
        }
        Ok(())
    }
}

fn landmarks_of(geom: &SynthesisGeometry) -> Landmarks {
    Landmarks {
        s2_star: geom.singular.s2_star,
        s1_min: geom.singular.s1_min,
        s1_star: geom.singular.s1_star,
        s1_bar: geom.s1_bar,
        sigma1_under: geom.partition.sigma1_under,
    }
}

fn build_config_for(case: &CaseConfig) -> BuildConfig {
    let mut cfg = BuildConfig::default();
    if let Some(rt) = case.ode_rel_tol {
        cfg.ode.rel_tol = rt;
        cfg.ode.abs_tol = (rt * 1e-2).min(cfg.ode.abs_tol);
    }
    cfg
}

/// Deterministic start states spanning the partition regions that exist
/// for this geometry: lattice candidates bucketed by region, drawn
/// round-robin.
///
/// Candidates sit where a first-order grid oracle is meaningful: away from
/// the full-mass line (values blow up towards it), at distance from the
/// target box and from the ray extending its top edge (the value field is
/// steep or kinked there and bilinear interpolation smears it), and off
/// the slow column strip right of the box. Runs whose final hold arc is a
/// brief corner graze are dropped too — their whole arrival corridor sits
/// in the smeared kink band.
pub fn spanning_starts(geom: &SynthesisGeometry, count: usize) -> Vec<State> {
    let cfg = BuildConfig::default();
    let m = geom.params.total_mass;
    let t = geom.target;
    let arrival_ok = |x: State| -> bool {
        match simulate_closed_loop(geom, FeedbackLaw::OptimalSynthesis, x, &cfg) {
            Ok(traj) if traj.reached_target => {
                let last = traj.arcs.last().unwrap();
                let hold_ok = traj.arcs.len() == 1
                    || last.kind != crate::simulate::ArcKind::Bang0
                    || (last.t1 - last.t0) >= 0.15 * traj.final_time;
                // no switch inside the corner quadrant, where the value
                // field is kinked at cell scale
                let corner_ok = traj.switches.iter().all(|sw| {
                    !((sw.state.s1 - t.s1_bar).abs() <= 0.04 * m
                        && sw.state.s2 > t.s2_bar
                        && sw.state.s2 < t.s2_bar + 0.08 * m)
                });
                hold_ok && corner_ok
            }
            _ => false,
        }
    };
    spanning_candidates(geom)
        .into_iter()
        .filter(|x| arrival_ok(*x))
        .take(count)
        .collect()
}

fn spanning_candidates(geom: &SynthesisGeometry) -> Vec<State> {
    let m = geom.params.total_mass;
    let t = geom.target;
    let s2s = geom.singular.s2_star;
    let mut buckets: Vec<(&'static str, Vec<State>)> = vec![
        ("z1", Vec::new()),
        ("e0", Vec::new()),
        ("z0-out", Vec::new()),
        ("zs-below", Vec::new()),
        ("zs-above", Vec::new()),
        ("arc", Vec::new()),
    ];
    let n = 23;
    let mut candidates: Vec<State> = Vec::new();
    for i in 1..n {
        for j in 1..n {
            candidates.push(State::new(m * i as f64 / n as f64, m * j as f64 / n as f64));
        }
    }
    // singular-band candidates so barrier runs exercise singular travel
    if let Some(s1_bar) = geom.s1_bar {
        let hi = m - s2s;
        for f in [0.35, 0.6] {
            candidates.push(State::new(s1_bar + f * (hi - s1_bar), s2s));
        }
    }
    for x in candidates {
        if !x.in_domain(m) || x.s1 + x.s2 > 0.95 * m {
            continue;
        }
        // box distance and corner-ray band
        let d_box = (x.s1 - t.s1_bar).max(x.s2 - t.s2_bar);
        if d_box < 0.08 * m {
            continue;
        }
        if x.s1 > t.s1_bar && (x.s2 - t.s2_bar).abs() < 0.05 * m {
            continue;
        }
        if x.s1 > t.s1_bar && x.s1 < t.s1_bar + 0.08 * m {
            continue;
        }
        let key = match geom.partition.membership(x) {
            RegionTag::Target => continue,
            RegionTag::Z1 => "z1",
            RegionTag::Z0 { in_extended_target: true } => "e0",
            RegionTag::Z0 { in_extended_target: false } => "z0-out",
            RegionTag::Zs => {
                if geom.singular.exists && (x.s2 - s2s).abs() <= geom.band {
                    "arc"
                } else if geom.singular.exists && x.s2 > s2s {
                    "zs-above"
                } else {
                    "zs-below"
                }
            }
        };
        buckets.iter_mut().find(|(k, _)| *k == key).unwrap().1.push(x);
    }
    for (_, b) in buckets.iter_mut() {
        // spread within the bucket rather than walking the lattice order
        let step = (b.len() / 7).max(1);
        *b = b.iter().copied().step_by(step).collect();
    }
    // exhaust the buckets round-robin so every region is represented early
    let mut out = Vec::new();
    let mut k = 0;
    loop {
        let mut advanced = false;
        for (_, b) in buckets.iter() {
            if let Some(x) = b.get(k) {
                out.push(*x);
                advanced = true;
            }
        }
        if !advanced {
            break;
        }
        k += 1;
    }
    out
}

fn singular_segment(geom: &SynthesisGeometry) -> Option<CurveGraph> {
    let s1_min = geom.singular.s1_min?;
    let s2s = geom.singular.s2_star;
    let hi = geom.params.total_mass - s2s;
    if hi <= s1_min {
        return None;
    }
    CurveGraph::piecewise_linear(vec![(s1_min, s2s), (hi, s2s)]).ok()
}

fn emit_curves(
    geom: &SynthesisGeometry,
    dir: &Path,
    report: &mut RunReport,
) -> Result<(), Error> {
    fs::create_dir_all(dir)?;
    let sigma2_path = dir.join("sigma2.csv");
    export::write_curve_csv(&sigma2_path, &geom.partition.sigma2)?;
    report.files.push(sigma2_path);
    if let Some(c0) = &geom.partition.c0 {
        let p = dir.join("c0.csv");
        export::write_curve_csv(&p, c0)?;
        report.files.push(p);
    }
    if let Some(c1) = &geom.switching_curve {
        let p = dir.join("c1.csv");
        export::write_curve_csv(&p, c1)?;
        report.files.push(p);
    }
    if let Some(xi) = &geom.xi_star {
        let p = dir.join("xi_star.csv");
        export::write_curve_csv(&p, xi)?;
        report.files.push(p);
    }
    if let Some(seg) = singular_segment(geom) {
        let p = dir.join("singular_arc.csv");
        export::write_curve_csv(&p, &seg)?;
        report.files.push(p);
    }

    let m = geom.params.total_mass;
    let t = geom.target;
    let mut plot = SvgPlot::new((0.0, m), (0.0, m));
    plot.add_region(
        &[(0.0, 0.0), (t.s1_bar, 0.0), (t.s1_bar, t.s2_bar), (0.0, t.s2_bar)],
        "#4f81bd",
        "target",
    );
    let mut z1_poly: Vec<(f64, f64)> = geom.partition.sigma2.points().collect();
    z1_poly.push((geom.partition.sigma1_under, 0.0));
    z1_poly.push((t.s1_bar, 0.0));
    plot.add_region(&z1_poly, "#9bbb59", "absorbing set");
    plot.add_curve(&geom.partition.sigma2, "#376092", "sigma2");
    if let Some(c0) = &geom.partition.c0 {
        plot.add_curve(c0, "#c0504d", "C0");
    }
    if let Some(c1) = &geom.switching_curve {
        plot.add_curve(c1, "#e36c09", "C1");
    }
    if let Some(xi) = &geom.xi_star {
        plot.add_curve(xi, "#7f7f7f", "xi*");
    }
    if let Some(seg) = singular_segment(geom) {
        plot.add_curve(&seg, "#00b050", "singular arc");
    }
    if let Some(s1_min) = geom.singular.s1_min {
        plot.add_marker(s1_min, geom.singular.s2_star, "#00b050", "saturation");
    }
    if let Some(s1_bar) = geom.s1_bar {
        plot.add_marker(s1_bar, geom.singular.s2_star, "#e36c09", "prior saturation");
    }
    if let (Some(s1_star), true) = (geom.singular.s1_star, geom.singular.exists) {
        plot.add_marker(s1_star, geom.singular.s2_star, "#c0504d", "end singular");
    }
    let svg_path = dir.join("overlay.svg");
    fs::write(&svg_path, plot.render(&report.case_name))?;
    report.files.push(svg_path);
    Ok(())
}

fn emit_simulation(
    geom: &SynthesisGeometry,
    start: State,
    dir: &Path,
    tag: &str,
    cfg: &BuildConfig,
    report: &mut RunReport,
    grid: Option<&ValueGrid>,
) -> Result<Trajectory, Error> {
    fs::create_dir_all(dir)?;
    let traj = simulate_closed_loop(geom, FeedbackLaw::OptimalSynthesis, start, cfg)?;
    let tpath = dir.join(format!("trajectory_{tag}.csv"));
    export::write_trajectory_csv(&tpath, &traj)?;
    report.files.push(tpath);
    let spath = dir.join(format!("switches_{tag}.csv"));
    export::write_switches_csv(&spath, &traj)?;
    report.files.push(spath);
    let wpath = dir.join(format!("arc_word_{tag}.txt"));
    fs::write(&wpath, format!("{}\n", traj.arc_word()))?;
    report.files.push(wpath);
    let gap = match grid {
        Some(g) => Some(compare(&traj, g)?),
        None => None,
    };
    report.simulations.push(SimulationRow {
        start,
        final_time: traj.final_time,
        arc_word: traj.arc_word(),
        gap,
    });
    Ok(traj)
}

fn validate_start(geom: &SynthesisGeometry, start: State) -> Result<(), Error> {
    if !start.in_domain(geom.params.total_mass) {
        return Err(Error::Config(format!(
            "start ({}, {}) outside the domain",
            start.s1, start.s2
        )));
    }
    if geom.target.contains(start) {
        return Err(Error::Config(format!(
            "start ({}, {}) already inside the target",
            start.s1, start.s2
        )));
    }
    Ok(())
}

/// Execute one subcommand for one case, writing outputs under
/// `out/<case-name>/`.
pub fn run_case(case: &CaseConfig, cmd: &Command, out: &Path) -> Result<RunReport, Error> {
    let (params, target) = case.to_model()?;
    let cfg = build_config_for(case);
    let geom = SynthesisGeometry::build(&params, &target, &cfg)?;
    let dir = out.join(&case.name);
    let mut report = RunReport {
        case_name: case.name.clone(),
        regime: geom.regime,
        landmarks: landmarks_of(&geom),
        files: Vec::new(),
        simulations: Vec::new(),
    };

    match cmd {
        Command::Classify => {}
        Command::Curves => emit_curves(&geom, &dir, &mut report)?,
        Command::Simulate { start } => {
            validate_start(&geom, *start)?;
            emit_simulation(&geom, *start, &dir, "start", &cfg, &mut report, None)?;
        }
        Command::Oracle => {
            fs::create_dir_all(&dir)?;
            let n = case.grid_n.unwrap_or(128);
            let grid = solve_hjb(&params, &target, n, &cfg)?;
            let gpath = dir.join("value_grid.csv");
            export::write_value_grid_csv(&gpath, &grid)?;
            report.files.push(gpath);
        }
        Command::Compare { start } => {
            validate_start(&geom, *start)?;
            fs::create_dir_all(&dir)?;
            let n = case.grid_n.unwrap_or(128);
            let grid = solve_hjb(&params, &target, n, &cfg)?;
            emit_simulation(&geom, *start, &dir, "compare", &cfg, &mut report, Some(&grid))?;
        }
        Command::All => {
            emit_curves(&geom, &dir, &mut report)?;
            let n = case.grid_n.unwrap_or(96);
            let grid = solve_hjb(&params, &target, n, &cfg)?;
            let gpath = dir.join("value_grid.csv");
            export::write_value_grid_csv(&gpath, &grid)?;
            report.files.push(gpath);
            for (k, start) in spanning_starts(&geom, 3).into_iter().enumerate() {
                emit_simulation(
                    &geom,
                    start,
                    &dir,
                    &format!("{k}"),
                    &cfg,
                    &mut report,
                    Some(&grid),
                )?;
            }
        }
    }
    Ok(report)
}

/// Run a command over every built-in case.
pub fn run_all_builtin(cmd: &Command, out: &Path) -> Result<Vec<RunReport>, Error> {
    let mut reports = Vec::new();
    for case in builtin_cases() {
        reports.push(run_case(&case, cmd, out)?);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::builtin_case;

    #[test]
    fn spanning_starts_cover_regions_case_iia() {
        let (p, t) = builtin_case("case_IIa").unwrap().to_model().unwrap();
        let geom = SynthesisGeometry::build(&p, &t, &BuildConfig::default()).unwrap();
        let starts = spanning_starts(&geom, 12);
        assert_eq!(starts.len(), 12);
        let mut tags = std::collections::BTreeSet::new();
        for x in &starts {
            assert!(x.in_domain(p.total_mass));
            assert!(!t.contains(*x));
            tags.insert(format!("{:?}", geom.partition.membership(*x)));
        }
        assert!(tags.len() >= 3, "{tags:?}");
    }

    #[test]
    fn classify_report_prints_landmarks() {
        let case = builtin_case("case_I").unwrap();
        let tmp = std::env::temp_dir().join("landfillctl-test-classify");
        let rep = run_case(&case, &Command::Classify, &tmp).unwrap();
        assert_eq!(rep.regime, Regime::SaturatedInterior);
        let text = rep.to_string();
        assert!(text.contains("s1_bar"));
        assert!(text.contains("saturated-interior"));
    }
}
