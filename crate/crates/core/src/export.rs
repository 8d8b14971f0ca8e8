//! Deterministic CSV emission for curves, trajectories and value grids.
//!
//! All decimals are written with 17 significant digits so files round-trip
//! `f64` exactly and byte-identical reruns are guaranteed.

use std::fs;
use std::path::Path;

use crate::curve::CurveGraph;
use crate::error::Error;
use crate::oracle::ValueGrid;
use crate::simulate::Trajectory;

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn curve_csv(curve: &CurveGraph) -> String {
    let mut out = String::from("s1,s2\n");
    for (s1, s2) in curve.points() {
        out.push_str(&fmt(s1));
        out.push(',');
        out.push_str(&fmt(s2));
        out.push('\n');
    }
    out
}

pub fn write_curve_csv(path: &Path, curve: &CurveGraph) -> Result<(), Error> {
    fs::write(path, curve_csv(curve))?;
    Ok(())
}

pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t,s1,s2,u\n");
    for (t, x, u) in &traj.nodes {
        out.push_str(&format!("{},{},{},{}\n", fmt(*t), fmt(x.s1), fmt(x.s2), fmt(*u)));
    }
    out
}

pub fn write_trajectory_csv(path: &Path, traj: &Trajectory) -> Result<(), Error> {
    fs::write(path, trajectory_csv(traj))?;
    Ok(())
}

pub fn switches_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t,s1,s2,u_from,u_to\n");
    for sw in &traj.switches {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt(sw.t),
            fmt(sw.state.s1),
            fmt(sw.state.s2),
            fmt(sw.u_from),
            fmt(sw.u_to)
        ));
    }
    out
}

pub fn write_switches_csv(path: &Path, traj: &Trajectory) -> Result<(), Error> {
    fs::write(path, switches_csv(traj))?;
    Ok(())
}

pub fn value_grid_csv(grid: &ValueGrid) -> String {
    let mut out = String::new();
    out.push_str(&format!("# nx1={} nx2={}\n", grid.n, grid.n));
    out.push_str(&format!("# spacing={}\n", fmt(grid.spacing)));
    out.push_str(&format!("# total_mass={}\n", fmt(grid.total_mass)));
    out.push_str(&format!("# cap={}\n", fmt(grid.cap)));
    out.push_str(&format!("# sweeps={}\n", grid.sweeps));
    out.push_str(&format!(
        "# controls={}\n",
        grid.controls.iter().map(|u| u.to_string()).collect::<Vec<_>>().join(";")
    ));
    out.push_str("s1,s2,v\n");
    for i2 in 0..grid.n {
        for i1 in 0..grid.n {
            let x = grid.node_state(i1, i2);
            let v = grid.values[i2 * grid.n + i1];
            out.push_str(&format!("{},{},{}\n", fmt(x.s1), fmt(x.s2), fmt(v)));
        }
    }
    out
}

pub fn write_value_grid_csv(path: &Path, grid: &ValueGrid) -> Result<(), Error> {
    fs::write(path, value_grid_csv(grid))?;
    Ok(())
}
