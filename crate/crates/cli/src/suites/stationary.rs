use super::{pilot_burn_in, Context, Experiment, Outcome};
use crate::report::CheckRow;
use furstenberg::stationary::{
    convolve_once, kolmogorov_distance, mc_stationary, ulam_stationary, DirectionFlag, GridMeasure,
};

const AC: &str = "AC03";

pub(super) fn experiments<'a>(ctx: &'a Context) -> Vec<Experiment<'a>> {
    let s = &ctx.cfg.stationary;
    let n = ctx.scaled(s.samples).max(2);
    vec![
        Experiment::new("stationary.convolution", AC, move || {
            let burn = pilot_burn_in(&ctx.mu, ctx.key("stationary", "pilot"));
            let nu = mc_stationary(&ctx.mu, DirectionFlag::Forward, burn, n, ctx.key("stationary", "pool"));
            let pushed = convolve_once(&ctx.mu, &nu, ctx.key("stationary", "push"));
            let ks = kolmogorov_distance(&nu, &pushed);
            let tol = 3.0 * 1.63 / (n as f64).sqrt();
            let mut out = Outcome::default();
            out.row(CheckRow::at_most("stationary.convolution_ks", AC, ks, 0.0, tol));
            out.datum("burn_in", burn as f64).datum("samples", n as f64).datum("ks", ks);
            Ok(out)
        }),
        Experiment::new("stationary.ulam_vs_mc", AC, move || {
            let burn = pilot_burn_in(&ctx.mu, ctx.key("stationary", "pilot"));
            let nu = mc_stationary(&ctx.mu, DirectionFlag::Forward, burn, n, ctx.key("stationary", "ulam_pool"));
            let ulam = ulam_stationary(&ctx.mu, s.ulam_bins, s.ulam_max_iter)?;
            // Compared at the resolution of the grid: the MC sample is binned
            // on the same bins as the Ulam vector.
            let binned = GridMeasure::from_angles(&nu.angles(), s.ulam_bins);
            let ks = kolmogorov_distance(&ulam.measure, &binned);
            let mut out = Outcome::default();
            out.row(CheckRow::below("stationary.ulam_vs_mc", AC, ks, 0.03));
            out.datum("ks", ks).datum("ulam_iterations", ulam.iterations as f64).datum("ulam_residual", ulam.residual);
            out.tables.push(("stationary_ulam".into(), ulam.measure.to_csv()));
            Ok(out)
        }),
    ]
}
