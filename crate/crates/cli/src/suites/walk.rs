use super::{Context, Experiment, Outcome};
use crate::report::CheckRow;
use furstenberg::spectral::{sigma_from_eigen, CircleGrid};
use furstenberg::walk::lyapunov_estimate;

const AC: &str = "AC02";

pub(super) fn experiments<'a>(ctx: &'a Context) -> Vec<Experiment<'a>> {
    let w = &ctx.cfg.walk;
    let steps = w.steps;
    let paths = ctx.scaled(w.paths).max(2);
    vec![
        Experiment::new("walk.lyapunov", AC, move || {
            let mc = lyapunov_estimate(&ctx.mu, steps, paths, ctx.key("walk", "lyapunov"));
            let spec = sigma_from_eigen(&ctx.mu, CircleGrid::new(w.spectral_grid)?, w.spectral_step)?;
            let z = if mc.stderr > 0.0 { mc.value / mc.stderr } else { f64::INFINITY };
            let tol = (0.02 * mc.value.abs()).max(3.0 * mc.stderr);
            let mut out = Outcome::default();
            out.row(CheckRow::above("walk.lyapunov_positive", AC, z, 5.0));
            out.row(CheckRow::close("walk.spectral_matches_mc", AC, spec.richardson, mc.value, tol));
            out.datum("sigma_hat", mc.value)
                .datum("sigma_stderr", mc.stderr)
                .datum("sigma_spectral", spec.value)
                .datum("sigma_spectral_half_step", spec.half_step)
                .datum("sigma_spectral_richardson", spec.richardson);
            Ok(out)
        }),
        Experiment::new("walk.symmetric_zero", AC, move || {
            let mu = w.symmetric.build().map_err(|e| furstenberg::LabError::InvalidInput(e.to_string()))?;
            let mc = lyapunov_estimate(&mu, steps, paths, ctx.key("walk", "symmetric"));
            let mut out = Outcome::default();
            out.row(CheckRow::close("walk.symmetric_zero", AC, mc.value, 0.0, 3.0 * mc.stderr));
            out.datum("sigma_hat", mc.value).datum("sigma_stderr", mc.stderr);
            Ok(out)
        }),
    ]
}
