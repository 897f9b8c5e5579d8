//! Trajectory CSV.

use std::fmt::Write;

use hamflow_core::{ChartKind, ScalarField, Trajectory64};

use crate::error::CliError;

/// Header `t,x1..xn,(p1..pn | v1..vn)` plus an `H` column when a Hamiltonian
/// is given; values carry 17 significant digits.
pub fn trajectory_csv(traj: &Trajectory64, hamiltonian: Option<&ScalarField>) -> Result<String, CliError> {
    let chart = traj.chart();
    let fiber = if chart.kind() == ChartKind::Momentum { "p" } else { "v" };
    let n = chart.dimension();
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|i| format!("x{i}")));
    header.extend((1..=n).map(|i| format!("{fiber}{i}")));
    if hamiltonian.is_some() {
        header.push("H".into());
    }
    let energy = hamiltonian.map(|h| traj.eval(h)).transpose()?;

    let mut out = header.join(",");
    out.push('\n');
    for (k, point) in traj.points().iter().enumerate() {
        let row: Vec<f64> = point.iter().copied().chain(energy.as_ref().map(|e| e[k])).collect();
        for (j, value) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            write!(out, "{value:.16e}").expect("writing to a String");
        }
        out.push('\n');
    }
    Ok(out)
}
