use super::{Context, Experiment, Outcome};
use crate::report::CheckRow;
use furstenberg::spectral::{nonarith_csv, nonarith_scan, CircleGrid, NEAR_ONE};
use furstenberg::LabError;

const AC: &str = "AC13";

pub(super) fn experiments<'a>(ctx: &'a Context) -> Vec<Experiment<'a>> {
    let s = &ctx.cfg.spectral;
    vec![
        Experiment::new("spectral.nonarithmetic", AC, move || {
            let coarse = nonarith_scan(&ctx.mu, CircleGrid::new(s.grid)?, &s.xi)?;
            let fine = nonarith_scan(&ctx.mu, CircleGrid::new(s.refined_grid)?, &s.xi)?;
            let worst = coarse.iter().map(|r| r.modulus).fold(0.0, f64::max);
            let drift = coarse.iter().zip(&fine).map(|(a, b)| (a.modulus - b.modulus).abs()).fold(0.0, f64::max);
            let mut out = Outcome::default();
            out.row(CheckRow::below("spectral.moduli_below_one", AC, worst, 1.0 - 1e-4));
            out.row(CheckRow::at_most("spectral.refinement_stable", AC, drift, 0.0, 1e-4));
            out.datum("max_modulus", worst).datum("max_refinement_change", drift);
            for r in &coarse {
                out.datum(format!("modulus_xi_{}", r.xi), r.modulus);
            }
            out.tables.push((format!("spectral_m{}", s.grid), nonarith_csv(&coarse)));
            out.tables.push((format!("spectral_m{}", s.refined_grid), nonarith_csv(&fine)));
            Ok(out)
        }),
        Experiment::new("spectral.arithmetic_control", AC, move || {
            let mu = s.control.build().map_err(|e| LabError::InvalidInput(e.to_string()))?;
            let rows = nonarith_scan(&mu, CircleGrid::new(s.control_grid)?, &[s.control_xi])?;
            let modulus = rows[0].modulus;
            let mut out = Outcome::default();
            out.row(CheckRow::above("spectral.control_detected", AC, modulus, 1.0 - NEAR_ONE));
            out.datum("control_modulus", modulus);
            Ok(out)
        }),
    ]
}
