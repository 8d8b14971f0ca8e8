//! Acceptance suite: one test per contract criterion, each printing a
//! PASS/FAIL line with its measured numbers (run with `--nocapture` to see
//! them). Tolerances are pinned here and nowhere else.

use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use landfillctl::config::{builtin_case, CaseConfig, BUILTIN_NAMES};
use landfillctl::extremal::extremal_check;
use landfillctl::geometry::{nu, singular_control, BuildConfig, Regime, RegionTag};
use landfillctl::model::{ModelParams, State, TargetBox};
use landfillctl::ode::integrate;
use landfillctl::oracle::{best_structured, compare, regime_wordset, solve_hjb, ValueGrid};
use landfillctl::runner::spanning_starts;
use landfillctl::simulate::{rollout, simulate_closed_loop, FeedbackLaw, Trajectory};
use landfillctl::synthesis::SynthesisGeometry;

fn cfg() -> BuildConfig {
    BuildConfig::default()
}

fn model_of(name: &str) -> (ModelParams, TargetBox) {
    builtin_case(name).unwrap().to_model().unwrap()
}

fn geometry(name: &'static str) -> &'static SynthesisGeometry {
    static CACHE: OnceLock<std::sync::Mutex<std::collections::HashMap<&'static str, &'static SynthesisGeometry>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| std::sync::Mutex::new(std::collections::HashMap::new()));
    let mut guard = cache.lock().unwrap();
    if let Some(g) = guard.get(name) {
        return g;
    }
    let (p, t) = model_of(name);
    let g: &'static SynthesisGeometry =
        Box::leak(Box::new(SynthesisGeometry::build(&p, &t, &cfg()).unwrap()));
    guard.insert(name, g);
    g
}

/// Grid + closed-loop runs shared by criteria 3 and 6.
struct CaseBundle {
    grid: ValueGrid,
    runs: Vec<(State, Trajectory)>,
}

fn bundle(name: &'static str) -> &'static CaseBundle {
    static CACHE: OnceLock<std::sync::Mutex<std::collections::HashMap<&'static str, &'static CaseBundle>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| std::sync::Mutex::new(std::collections::HashMap::new()));
    let mut guard = cache.lock().unwrap();
    if let Some(b) = guard.get(name) {
        return b;
    }
    let (p, t) = model_of(name);
    let geom = geometry(name);
    let grid = solve_hjb(&p, &t, 128, &cfg()).unwrap();
    let runs: Vec<(State, Trajectory)> = spanning_starts(geom, 12)
        .into_iter()
        .map(|x0| {
            let traj = simulate_closed_loop(geom, FeedbackLaw::OptimalSynthesis, x0, &cfg())
                .unwrap_or_else(|e| panic!("closed loop from ({}, {}): {e}", x0.s1, x0.s2));
            (x0, traj)
        })
        .collect();
    let b: &'static CaseBundle = Box::leak(Box::new(CaseBundle { grid, runs }));
    guard.insert(name, b);
    b
}

fn random_start(rng: &mut ChaCha8Rng, p: &ModelParams, t: &TargetBox) -> State {
    let m = p.total_mass;
    loop {
        let x = State::new(rng.random::<f64>() * m, rng.random::<f64>() * m);
        if x.in_domain(m) && x.s1 + x.s2 < 0.9 * m && !t.contains(x) && x.s1 > 1e-3 * m
        {
            return x;
        }
    }
}

fn monod_case() -> CaseConfig {
    CaseConfig::parse(
        "name = monod_reference\nmu_bar = 1\nKs = 2\na = 0.1\nM = 1.3\nS1_bar = 0.15\nS2_bar = 0.05\n",
    )
    .unwrap()
}

#[test]
fn criterion_1_regime_classification() {
    let expected = [
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
    let t0 = Instant::now();
    let mut mismatches = Vec::new();
    for (name, want) in expected {
        let g = geometry(name);
        if g.regime != want {
            mismatches.push(format!(
                "{name}: got {} want {} (s2*={:.6}, s1_min={:?}, s1*={:?})",
                g.regime.name(),
                want.name(),
                g.singular.s2_star,
                g.singular.s1_min,
                g.singular.s1_star
            ));
        }
    }
    let elapsed = t0.elapsed();
    let ok = mismatches.is_empty() && elapsed.as_secs_f64() < 10.0;
    println!(
        "criterion 1 (regime classification): {} — 9 cases in {:.2?}{}",
        if ok { "PASS" } else { "FAIL" },
        elapsed,
        if mismatches.is_empty() { String::new() } else { format!("; {mismatches:?}") }
    );
    assert!(mismatches.is_empty(), "{mismatches:?}");
    assert!(elapsed.as_secs_f64() < 10.0, "classification took {elapsed:?}");
}

#[test]
fn criterion_2_landmark_ordering() {
    let mut lines = Vec::new();
    let mut ok = true;
    for name in BUILTIN_NAMES {
        let g = geometry(Box::leak(name.to_string().into_boxed_str()));
        let (p, t) = model_of(name);
        let s1_min = g.singular.s1_min.unwrap();
        let s1_star = g.singular.s1_star.unwrap();
        let nu_res = nu(&p, s1_min).abs();
        // the defining relation of the end singular abscissa per branch
        let def_res = if g.singular.s2_star < t.s2_bar {
            (g.partition.sigma2.eval(s1_star).unwrap() - g.singular.s2_star).abs()
        } else if s1_star == t.s1_bar {
            0.0 // empty-locus branch fixes it at the threshold exactly
        } else if s1_star == 0.0 {
            let v = landfillctl::geometry::phi_integral(&p, &t, 0.0, g.singular.s2_star).unwrap();
            if v >= 1.0 {
                0.0
            } else {
                1.0 - v
            }
        } else {
            (landfillctl::geometry::phi_integral(&p, &t, s1_star, g.singular.s2_star).unwrap()
                - 1.0)
                .abs()
        };
        let order_ok = match name {
            "case_I" | "case_IIa" | "case_IIb" | "case_IIc" => s1_min > s1_star && s1_star > 0.0,
            "case_IIIa" | "case_IIIb" | "case_IIIc" => s1_min > s1_star && s1_star == 0.0,
            _ => s1_min <= s1_star,
        };
        let res_ok = nu_res < 1e-8 && def_res < 1e-8;
        ok &= order_ok && res_ok;
        lines.push(format!(
            "{name}: s1_min={s1_min:.9} s1*={s1_star:.9} |nu|={nu_res:.2e} |def|={def_res:.2e}{}",
            if order_ok && res_ok { "" } else { "  <-- FAIL" }
        ));
    }
    println!(
        "criterion 2 (landmark ordering): {}",
        if ok { "PASS" } else { "FAIL" }
    );
    for l in &lines {
        println!("    {l}");
    }
    assert!(ok, "{lines:?}");
}

#[test]
fn criterion_3_oracle_agreement() {
    let mut all_ok = true;
    for name in ["case_I", "case_IIa", "case_IVa"] {
        let t0 = Instant::now();
        let b = bundle(name);
        let geom = geometry(name);
        assert_eq!(b.runs.len(), 12, "{name}: expected 12 starts");
        let mut regions = BTreeSet::new();
        let mut worst_hi = f64::NEG_INFINITY;
        let mut worst_lo = f64::INFINITY;
        for (x0, traj) in &b.runs {
            regions.insert(region_label(geom, *x0));
            let gap = compare(traj, &b.grid).unwrap();
            worst_hi = worst_hi.max(gap.rel_gap);
            worst_lo = worst_lo.min(gap.rel_gap);
            if !(gap.rel_gap <= 0.02 && gap.rel_gap >= -0.01) {
                all_ok = false;
                println!(
                    "    {name} start ({:.3}, {:.3}) word {} gap {:+.3}% OUT OF [-1%, +2%]",
                    x0.s1,
                    x0.s2,
                    traj.arc_word(),
                    gap.rel_gap * 100.0
                );
            }
        }
        let elapsed = t0.elapsed();
        all_ok &= elapsed.as_secs_f64() < 300.0;
        println!(
            "    {name}: gaps in [{:+.3}%, {:+.3}%], regions {:?}, {:.2?}",
            worst_lo * 100.0,
            worst_hi * 100.0,
            regions,
            elapsed
        );
        assert!(regions.len() >= 2, "{name}: starts span {regions:?}");
    }
    println!(
        "criterion 3 (oracle agreement, 128x128, 12 starts/case): {}",
        if all_ok { "PASS" } else { "FAIL" }
    );
    assert!(all_ok);
}

fn region_label(geom: &SynthesisGeometry, x: State) -> &'static str {
    match geom.partition.membership(x) {
        RegionTag::Target => "T",
        RegionTag::Z1 => "Z1",
        RegionTag::Z0 { in_extended_target: true } => "Z0/E0",
        RegionTag::Z0 { in_extended_target: false } => "Z0out",
        RegionTag::Zs => "Zs",
    }
}

#[test]
fn criterion_4_structured_search_agreement() {
    let name = "case_IIa";
    let geom = geometry(name);
    let (p, t) = model_of(name);
    // six starts across the structure zoo; the two near the full-mass line
    // exercise singular travel, which only the exact search can certify
    let starts = [
        State::new(0.35, 0.02),   // absorbing set
        State::new(0.10, 0.30),   // extended target
        State::new(0.50, 0.20),   // below the singular level, right of the box
        State::new(0.20, 0.90),   // above the locus, inside the column
        State::new(0.215, 1.08),  // above the admissible singular band
        State::new(0.16, 1.02),   // above the locus, left of the band
    ];
    let words = regime_wordset(geom.regime);
    let mut ok = true;
    for x0 in starts {
        let traj = simulate_closed_loop(geom, FeedbackLaw::OptimalSynthesis, x0, &cfg()).unwrap();
        let attain = simulate_closed_loop(geom, FeedbackLaw::Attainability, x0, &cfg()).unwrap();
        let horizon_box = 1.2 * attain.final_time.max(traj.final_time);
        let best = best_structured(&p, &t, x0, &words, horizon_box, &cfg()).unwrap();
        let rel = (best.final_time - traj.final_time).abs() / traj.final_time;
        let word_match = best.word_string() == traj.arc_word();
        if rel > 0.005 || !word_match {
            ok = false;
        }
        println!(
            "    ({:.3},{:.3}): feedback {} t={:.6} vs search {} t={:.6} (rel {:.4}%){}",
            x0.s1,
            x0.s2,
            traj.arc_word(),
            traj.final_time,
            best.word_string(),
            best.final_time,
            rel * 100.0,
            if rel <= 0.005 && word_match { "" } else { "  <-- FAIL" }
        );
    }
    println!(
        "criterion 4 (structured-search agreement, 6 starts in case IIa): {}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok);
}

#[test]
fn criterion_5_switching_structure_bounds() {
    let scenarios: [(&str, Option<&str>, usize); 4] = [
        ("NoSingular", None, 2),
        ("AdmissibleSingular", Some("case_IVa"), 2),
        ("SaturatedInterior", Some("case_I"), 3),
        ("SaturatedBoundary", Some("case_IIIa"), 3),
    ];
    let mut ok = true;
    for (label, name, max_switches) in scenarios {
        let (geom, p, t): (SynthesisGeometry, ModelParams, TargetBox) = match name {
            Some(n) => {
                let (p, t) = model_of(n);
                (geometry(Box::leak(n.to_string().into_boxed_str())).clone(), p, t)
            }
            None => {
                let (p, t) = monod_case().to_model().unwrap();
                (SynthesisGeometry::build(&p, &t, &cfg()).unwrap(), p, t)
            }
        };
        assert_eq!(geom.regime.name().replace('-', ""),
            label.to_lowercase().replace("singular", "singular"),
            "scenario regime sanity" );
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + max_switches as u64);
        let mut worst = 0usize;
        let mut violations = 0usize;
        for _ in 0..200 {
            let x0 = random_start(&mut rng, &p, &t);
            let traj =
                simulate_closed_loop(&geom, FeedbackLaw::OptimalSynthesis, x0, &cfg()).unwrap();
            let switches = traj.switches.len();
            worst = worst.max(switches);
            if switches > max_switches {
                violations += 1;
                println!(
                    "    {label}: ({:.4}, {:.4}) word {} has {} switches",
                    x0.s1,
                    x0.s2,
                    traj.arc_word(),
                    switches
                );
            }
        }
        ok &= violations == 0;
        println!("    {label}: 200 starts, max switches {worst}, violations {violations}");
    }
    println!(
        "criterion 5 (switching-structure bounds, 200 starts/regime): {}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok);
}

#[test]
fn criterion_6_extremal_consistency() {
    let mut ok = true;
    let mut checked = 0usize;
    let mut singular_arcs = 0usize;
    for name in ["case_I", "case_IIa", "case_IVa"] {
        let b = bundle(name);
        let geom = geometry(name);
        for (x0, traj) in &b.runs {
            let rep = extremal_check(geom, traj, &cfg()).unwrap();
            checked += 1;
            if traj.arc_word().contains('S') {
                singular_arcs += 1;
            }
            if !rep.passes() {
                ok = false;
                println!(
                    "    {name} ({:.3},{:.3}) word {}: H={:.2e} l2min={:.2e} sign={:.2e} phi_sw={:.2e} phi_S={:.2e} dphi_S={:.2e}",
                    x0.s1,
                    x0.s2,
                    traj.arc_word(),
                    rep.max_abs_hamiltonian,
                    rep.min_lambda2_outside_z1,
                    rep.sign_violation_time,
                    rep.max_abs_phi_at_switches,
                    rep.singular_max_abs_phi,
                    rep.singular_max_abs_dphi
                );
            }
        }
    }
    println!(
        "criterion 6 (extremal consistency on {checked} runs, {singular_arcs} with singular travel): {}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok);
    assert!(singular_arcs > 0, "no feedback run exercised singular travel");
}

#[test]
fn criterion_7_switch_curve_endpoints() {
    let mut ok = true;
    for name in ["case_I", "case_IIa", "case_IIb", "case_IIc"] {
        let geom = geometry(Box::leak(name.to_string().into_boxed_str()));
        let c1 = geom.switching_curve.as_ref().expect("barrier regime must build the curve");
        let s1_bar = geom.s1_bar.unwrap();
        let s2s = geom.singular.s2_star;
        let s1_min = geom.singular.s1_min.unwrap();
        let s1_star = geom.singular.s1_star.unwrap();
        let m = geom.params.total_mass;
        let end_ok = (geom.zeta(s1_bar) - s2s).abs() < 1e-6 && (c1.last().1 - s2s).abs() < 1e-6;
        let bracket_ok = s1_bar > s1_min && s1_bar < m - s2s;
        let left = c1.first();
        let left_ok = (left.1 - s2s).abs() < 1e-3 && (left.0 - s1_star).abs() < 2e-2 * m;
        ok &= end_ok && bracket_ok && left_ok;
        println!(
            "    {name}: s1_bar={s1_bar:.8} in ({s1_min:.6}, {:.6}), zeta(s1_bar)-s2*={:.2e}, left ({:.6}, {:.6}) vs ({s1_star:.6}, {s2s:.6}){}",
            m - s2s,
            geom.zeta(s1_bar) - s2s,
            left.0,
            left.1,
            if end_ok && bracket_ok && left_ok { "" } else { "  <-- FAIL" }
        );
    }
    println!(
        "criterion 7 (switch-curve endpoints, cases I and IIa-c): {}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok);
}

#[test]
fn criterion_8_invariance_suite() {
    let (p, t) = model_of("case_I");
    let geom = geometry("case_I");
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a5e_u64);
    let mut ok = true;

    // absorbing-set invariance: random control signals never leave before
    // the target
    let mut z1_starts = Vec::new();
    while z1_starts.len() < 20 {
        let x = random_start(&mut rng, &p, &t);
        if geom.partition.membership(x) == RegionTag::Z1 {
            z1_starts.push(x);
        }
    }
    let mut leaves = 0usize;
    for k in 0..200 {
        let x0 = z1_starts[k % 20];
        let pieces: Vec<(f64, f64)> =
            (0..6).map(|_| (rng.random::<f64>() * 3.0, rng.random::<f64>())).collect();
        for (_, x) in rollout(&p, x0, &pieces, &cfg()).unwrap() {
            match geom.partition.membership(x) {
                RegionTag::Z1 | RegionTag::Target => {}
                other => {
                    leaves += 1;
                    println!("    left Z1 at ({:.4}, {:.4}): {:?}", x.s1, x.s2, other);
                    break;
                }
            }
        }
    }
    ok &= leaves == 0;
    println!("    Z1 invariance: 200 random signals, {leaves} departures");

    // flow-invariance of the axis and the full-mass line
    let mut worst_axis = 0.0f64;
    let mut worst_mass = 0.0f64;
    for _ in 0..20 {
        let pieces: Vec<(f64, f64)> =
            (0..5).map(|_| (rng.random::<f64>() * 2.0, rng.random::<f64>())).collect();
        let total: f64 = pieces.iter().map(|p| p.0).sum();
        let x_axis = State::new(0.0, 0.3 + 0.5 * rng.random::<f64>());
        for (_, x) in rollout(&p, x_axis, &pieces, &cfg()).unwrap() {
            worst_axis = worst_axis.max(x.s1.abs() / total.max(1.0));
        }
        let s1 = 0.2 + 0.6 * rng.random::<f64>();
        let x_mass = State::new(s1, p.total_mass - s1);
        for (_, x) in rollout(&p, x_mass, &pieces, &cfg()).unwrap() {
            worst_mass = worst_mass.max((x.s1 + x.s2 - p.total_mass).abs() / total.max(1.0));
        }
    }
    ok &= worst_axis < 1e-9 && worst_mass < 1e-9;
    println!("    boundary drift per unit time: axis {worst_axis:.2e}, full-mass {worst_mass:.2e}");

    // comparison containment: any control stays weakly below the maximal
    // trajectory in the matched-abscissa sense
    let mut worst_excess = 0.0f64;
    for _ in 0..100 {
        let x0 = random_start(&mut rng, &p, &t);
        let pieces: Vec<(f64, f64)> =
            (0..6).map(|_| (rng.random::<f64>() * 4.0, rng.random::<f64>())).collect();
        let total: f64 = pieces.iter().map(|p| p.0).sum();
        let path = rollout(&p, x0, &pieces, &cfg()).unwrap();
        // maximal-control reference from the same start, long enough to
        // cover every abscissa the path visits
        let pmax = p;
        let rhs = move |_t: f64, y: &[f64; 2]| {
            let (d1, d2) = pmax.field(State::new(y[0].max(0.0), y[1].max(0.0)), 1.0);
            [d1, d2]
        };
        let reference = integrate(&rhs, [x0.s1, x0.s2], (0.0, 4.0 * total + 1.0), &cfg().ode, &[])
            .unwrap();
        for (_, x) in &path {
            // s1 decreases monotonically along the reference: invert it
            let (mut lo, mut hi) = (0.0, reference.t_end());
            if x.s1 >= x0.s1 {
                worst_excess = worst_excess.max(x.s2 - x0.s2);
                continue;
            }
            if x.s1 <= reference.final_state()[0] {
                continue; // beyond the reference span
            }
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if reference.eval(mid)[0] > x.s1 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let s2_max = reference.eval(0.5 * (lo + hi))[1];
            worst_excess = worst_excess.max(x.s2 - s2_max);
        }
    }
    ok &= worst_excess < 1e-7;
    println!("    comparison containment: worst excess {worst_excess:.2e} over 100 signals");

    println!("criterion 8 (invariance suite): {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok);
}

#[test]
fn criterion_9_attainability() {
    let mut ok = true;
    for name in BUILTIN_NAMES {
        let geom = geometry(Box::leak(name.to_string().into_boxed_str()));
        let (p, t) = model_of(name);
        let grid = solve_hjb(&p, &t, 128, &cfg()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0xa77a1_u64);
        let mut below = 0usize;
        let mut unreached = 0usize;
        for _ in 0..50 {
            let x0 = random_start(&mut rng, &p, &t);
            match simulate_closed_loop(geom, FeedbackLaw::Attainability, x0, &cfg()) {
                Ok(traj) if traj.reached_target => {
                    if let Some(v) = grid.value_at(x0) {
                        // interpolation-error budget of the first-order grid
                        // at desk scale: 10% relative (the stiff cases carry
                        // an under-resolved slow channel along the axis)
                        // plus one arrival cell at the local speed
                        let (d1, d2) = p.field(x0, 1.0);
                        let slack =
                            0.10 * v + 8.0 * grid.spacing / d1.abs().max(d2.abs()).max(1e-9);
                        if traj.final_time < v - slack {
                            below += 1;
                            println!(
                                "    {name}: ({:.3},{:.3}) attainability {:.4} below oracle {:.4} (budget {:.4})",
                                x0.s1, x0.s2, traj.final_time, v, slack
                            );
                        }
                    }
                }
                _ => {
                    unreached += 1;
                    println!("    {name}: start failed to reach the target");
                }
            }
        }
        ok &= below == 0 && unreached == 0;
        println!("    {name}: 50 random starts reached, {below} below oracle");
    }
    println!("criterion 9 (attainability upper-bounds the oracle): {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok);
}
