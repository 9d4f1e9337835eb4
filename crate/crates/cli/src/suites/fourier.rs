use super::{pilot_burn_in, Context, Experiment, Outcome};
use crate::report::CheckRow;
use furstenberg::fourier::{
    decay_csv, decay_profile, oscillatory_integral, pisot_scan, BernoulliParams, OscillatoryIntegrand, Phase, PisotRow,
    Window,
};
use furstenberg::stationary::{mc_stationary, DirectionFlag};
use furstenberg::walk::GOLDEN;
use furstenberg::LabError;
use std::fmt::Write as _;
use std::sync::{Arc, OnceLock};

fn stationary_angles<'p>(ctx: &Context, n: usize, pool: &'p OnceLock<Vec<f64>>) -> &'p [f64] {
    pool.get_or_init(|| {
        let burn = pilot_burn_in(&ctx.mu, ctx.key("fourier", "pilot"));
        mc_stationary(&ctx.mu, DirectionFlag::Forward, burn, n, ctx.key("fourier", "pool")).angles()
    })
}

fn pisot_csv(label: &str, rows: &[PisotRow], out: &mut String) {
    for r in rows {
        let _ = writeln!(out, "{label},{},{:.16e},{:.16e}", r.n, r.xi, r.value);
    }
}

pub(super) fn experiments<'a>(ctx: &'a Context) -> Vec<Experiment<'a>> {
    let f = &ctx.cfg.fourier;
    let n = ctx.scaled(f.samples).max(2);
    // One stationary pool serves both the coefficient and the oscillatory checks.
    let pool = Arc::new(OnceLock::new());
    let (pool_a, pool_b) = (pool.clone(), pool);
    vec![
        Experiment::new("fourier.coefficient_decay", "AC04", move || {
            let blocks = decay_profile(stationary_angles(ctx, n, &pool_a), &[f.low_block, f.high_block]);
            let (low, high) = (&blocks[0], &blocks[1]);
            let mut out = Outcome::default();
            out.row(CheckRow::below("fourier.high_block_below_low", "AC04", high.median, low.median));
            out.row(CheckRow::above("fourier.low_block_above_noise", "AC04", low.median, 3.0 * low.noise_floor));
            out.datum("low_median", low.median).datum("high_median", high.median).datum("noise_floor", low.noise_floor);
            out.tables.push(("fourier_decay".into(), decay_csv(&blocks)));
            Ok(out)
        }),
        Experiment::new("fourier.oscillatory_decay", "AC05", move || {
            let window = Window::Bump { center: f.bump_center, half_width: f.bump_half_width };
            let integrand = OscillatoryIntegrand::new(Phase::Warp { amplitude: f.warp }, window)?;
            let angles = stationary_angles(ctx, n, &pool_b);
            let low = oscillatory_integral(angles, &integrand, f.xi_low);
            let high = oscillatory_integral(angles, &integrand, f.xi_high);
            let noise = low.stderr.hypot(high.stderr);
            let mut out = Outcome::default();
            // |I(ξ_high)| < |I(ξ_low)| − 2 · noise
            out.row(CheckRow::below(
                "fourier.oscillatory_decay",
                "AC05",
                high.magnitude() + 2.0 * noise,
                low.magnitude(),
            ));
            out.datum("low_magnitude", low.magnitude()).datum("high_magnitude", high.magnitude()).datum("noise", noise);
            Ok(out)
        }),
        Experiment::new("fourier.pisot", "AC06", move || {
            let lambda = match f.pisot_lambda.as_str() {
                "golden" => GOLDEN,
                v => v.parse().map_err(|_| LabError::InvalidInput(format!("bad contraction {v:?}")))?,
            };
            let pisot = pisot_scan(&BernoulliParams::new(lambda)?, f.pisot_n);
            let control = pisot_scan(&BernoulliParams::new(f.control_lambda)?, f.control_n);
            let min_pisot = pisot.iter().map(|r| r.value.abs()).fold(f64::INFINITY, f64::min);
            let last_control = control.last().map_or(f64::NAN, |r| r.value.abs());
            let mut out = Outcome::default();
            out.row(CheckRow::new("fourier.pisot_no_decay", "AC06", min_pisot, f.pisot_threshold, 0.0, min_pisot >= f.pisot_threshold));
            out.row(CheckRow::below("fourier.control_decays", "AC06", last_control, f.control_threshold));
            out.datum("pisot_min", min_pisot).datum("control_last", last_control);
            let mut table = String::from("lambda,n,xi,value\n");
            pisot_csv(&lambda.to_string(), &pisot, &mut table);
            pisot_csv(&f.control_lambda.to_string(), &control, &mut table);
            out.tables.push(("fourier_pisot".into(), table));
            Ok(out)
        }),
    ]
}
