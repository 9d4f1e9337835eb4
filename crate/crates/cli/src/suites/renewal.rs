use super::{pilot_burn_in, Context, Experiment, Outcome};
use crate::report::CheckRow;
use furstenberg::fourier::{Phase, Window};
use furstenberg::renewal::{
    lambda_approx_check, limit_oracle, osc_bound_check, renewal_sum, residue_crossing, stopping_identity_check,
    CircleFunction, LambdaSetup, LimitVariant, Profile, RenewalEstimate, RenewalPlan, ResidueVariant, ScalarKind,
    TargetFunction,
};
use furstenberg::rng::map_paths;
use furstenberg::stationary::{mc_stationary, DirectionFlag, EmpiricalMeasure, DEFAULT_BASE};
use furstenberg::stats::linear_fit;
use furstenberg::walk::{lyapunov_estimate, StepDistribution};
use furstenberg::{LabError, ProjectivePoint, Result};
use rand::Rng;
use std::sync::{Arc, OnceLock};

/// Exponent estimate and stationary pools of one step distribution, shared by
/// the experiments that use them.
struct Prepared {
    mu: StepDistribution,
    sigma: f64,
    /// `ν̂` for the left side of every comparison.
    nu: EmpiricalMeasure,
    /// An independent `ν̂` pool for start points.
    starts: EmpiricalMeasure,
    /// `ν̌̂`, stationary for the inverse walk.
    nu_check: EmpiricalMeasure,
}

impl Prepared {
    fn new(ctx: &Context, mu: StepDistribution, tag: &str) -> Result<Self> {
        let w = &ctx.cfg.walk;
        let est = lyapunov_estimate(&mu, w.steps, ctx.scaled(w.paths).max(2), ctx.key("renewal", &format!("{tag}.sigma")));
        if !(est.value > 0.0) {
            return Err(LabError::InvalidInput(format!("{tag}: Lyapunov estimate {} is not positive", est.value)));
        }
        let pool = ctx.scaled(ctx.cfg.renewal.pool).max(2);
        let burn = pilot_burn_in(&mu, ctx.key("renewal", &format!("{tag}.pilot")));
        let draw = |dir, name: &str| mc_stationary(&mu, dir, burn, pool, ctx.key("renewal", &format!("{tag}.{name}")));
        let nu = draw(DirectionFlag::Forward, "nu");
        let starts = draw(DirectionFlag::Forward, "starts");
        let nu_check = draw(DirectionFlag::Reversed, "nu_check");
        Ok(Self { sigma: est.value, nu, starts, nu_check, mu })
    }

    fn plan(&self, ctx: &Context, experiment: &str, paths: usize) -> RenewalPlan {
        RenewalPlan::new(ctx.key("renewal", experiment), paths, self.sigma)
    }
}

type Shared = Arc<OnceLock<std::result::Result<Prepared, LabError>>>;

/// Which step distribution an experiment runs on.
#[derive(Clone, Copy)]
enum Walk {
    Main,
    Tail,
    Minus,
}

fn prepared<'p>(cell: &'p Shared, ctx: &Context, walk: Walk) -> Result<&'p Prepared> {
    cell.get_or_init(|| {
        let r = &ctx.cfg.renewal;
        let extra = |spec: &crate::config::MeasureSpec, tag| {
            let mu = spec.build().map_err(|e| LabError::InvalidInput(e.to_string()))?;
            Prepared::new(ctx, mu, tag)
        };
        match walk {
            Walk::Main => Prepared::new(ctx, ctx.mu.clone(), "main"),
            Walk::Tail => extra(&r.tail_measure, "tail"),
            Walk::Minus => extra(&r.minus_measure, "minus"),
        }
    })
    .as_ref()
    .map_err(Clone::clone)
}

fn base() -> ProjectivePoint {
    ProjectivePoint::from_angle(DEFAULT_BASE)
}

fn record(out: &mut Outcome, name: &str, e: &RenewalEstimate) {
    out.datum(format!("{name}.value"), e.value)
        .datum(format!("{name}.stderr"), e.stderr)
        .datum(format!("{name}.max_steps"), e.max_steps as f64)
        .datum(format!("{name}.cap_hit_fraction"), e.cap_hit_fraction);
}

/// Circular mean of the sample angles, as an angle in `[0, π)`.
fn circular_center(nu: &EmpiricalMeasure) -> f64 {
    let (c, s) = nu.angles().iter().fold((0.0, 0.0), |(c, s), t| (c + (2.0 * t).cos(), s + (2.0 * t).sin()));
    (0.5 * s.atan2(c)).rem_euclid(std::f64::consts::PI)
}

/// A catalog bump in every argument; `|f| ≤ 1`.
fn residue_bump(y: Window) -> Result<TargetFunction> {
    TargetFunction::jump(y, Profile::Bump { center: 0.5, half_width: 0.5 }, Profile::Bump { center: -0.3, half_width: 0.3 })
}

fn oracle_row(id: &str, lhs: &RenewalEstimate, rhs: &RenewalEstimate, norm: f64) -> CheckRow {
    CheckRow::close(id, "AC09", lhs.value, rhs.value, 3.0 * (lhs.stderr + rhs.stderr) + 0.1 * norm)
}

pub(super) fn experiments<'a>(ctx: &'a Context) -> Vec<Experiment<'a>> {
    let r = &ctx.cfg.renewal;
    let paths = ctx.scaled(r.paths).max(2);
    let lambda_paths = ctx.scaled(r.lambda_paths).max(1);
    let main: Shared = Arc::new(OnceLock::new());
    let tail_cell: Shared = Arc::new(OnceLock::new());
    let minus_cell: Shared = Arc::new(OnceLock::new());
    let m = || main.clone();

    let limit = {
        let cell = m();
        Experiment::new("renewal.limit", "AC07", move || {
            let p = prepared(&cell, ctx, Walk::Main)?;
            let f = TargetFunction::scalar(Window::Constant, Profile::indicator(0.0, r.a))?;
            let target = r.a / p.sigma;
            let mut out = Outcome::default();
            out.datum("limit", target);
            let estimates = r
                .limit_t
                .iter()
                .map(|&t| {
                    let e = renewal_sum(&p.mu, &f, base(), t, ScalarKind::Cocycle, &p.plan(ctx, &format!("limit.{t}"), paths))?;
                    record(&mut out, &format!("t{t}"), &e);
                    Ok((t, e))
                })
                .collect::<Result<Vec<_>>>()?;
            for pair in estimates.windows(2) {
                let ((t0, e0), (t1, e1)) = (&pair[0], &pair[1]);
                let (err0, err1) = ((e0.value - target).abs(), (e1.value - target).abs());
                let id = format!("renewal.limit_trend_t{t0}_t{t1}");
                out.row(CheckRow::at_most(&id, "AC07", err1, err0, 2.0 * e0.stderr.hypot(e1.stderr)));
            }
            if let Some((t, e)) = estimates.last() {
                let id = format!("renewal.limit_at_t{t}");
                out.row(CheckRow::close(&id, "AC07", e.value, target, 3.0 * e.stderr + 0.05 * r.a));
            }
            Ok(out)
        })
    };

    let regularity = {
        let cell = m();
        Experiment::new("renewal.regularity", "AC08", move || {
            let p = prepared(&cell, ctx, Walk::Main)?;
            // A single constant must cover the whole grid; the reference is
            // twice the large-window asymptote 1/σ plus one.
            let reference = 2.0 * (1.0 + 1.0 / p.sigma);
            let mut out = Outcome::default();
            let mut fitted = |kind: ScalarKind, s_grid: &[f64], growth: fn(f64) -> f64, tag: &str| -> Result<f64> {
                let mut c = 0.0f64;
                for &s in s_grid {
                    let f = TargetFunction::scalar(Window::Constant, Profile::indicator(0.0, s))?;
                    for &t in &r.regularity_t {
                        let plan = p.plan(ctx, &format!("regularity.{tag}.{s}.{t}"), paths);
                        let e = renewal_sum(&p.mu, &f, base(), t, kind, &plan)?;
                        record(&mut out, &format!("{tag}.s{s}.t{t}"), &e);
                        c = c.max(e.value / growth(s));
                    }
                }
                Ok(c)
            };
            let c = fitted(ScalarKind::Cocycle, &r.regularity_s, |s| s.max(1.0), "cocycle")?;
            let c_cartan = fitted(ScalarKind::Cartan, &r.cartan_s, |s| (s * s).max(1.0), "cartan")?;
            out.row(CheckRow::at_most("renewal.regularity_constant", "AC08", c, reference, 0.0));
            out.row(CheckRow::at_most("renewal.cartan_regularity_constant", "AC08", c_cartan, reference, 0.0));
            out.datum("constant", c).datum("cartan_constant", c_cartan);
            Ok(out)
        })
    };

    let bounded = {
        let (cell, minus) = (m(), minus_cell.clone());
        Experiment::new("residue.bounded", "AC09", move || {
            let mut out = Outcome::default();
            // The main walk may only jump upwards, which pins the count at 1;
            // the minus walk also crosses downwards.
            for (walk, cell, tag) in [(Walk::Main, &cell, "main"), (Walk::Minus, &minus, "minus")] {
                let p = prepared(cell, ctx, walk)?;
                let huge = Profile::indicator(-20.0, 20.0);
                let f = TargetFunction::jump(Window::Constant, huge, huge)?;
                let values = r
                    .residue_t
                    .iter()
                    .map(|&t| {
                        let plan = p.plan(ctx, &format!("bounded.{tag}.{t}"), paths);
                        let e = residue_crossing(&p.mu, &f, base(), base(), t, ResidueVariant::Cutoff, &plan)?;
                        record(&mut out, &format!("{tag}.t{t}"), &e);
                        Ok(e.value)
                    })
                    .collect::<Result<Vec<f64>>>()?;
                let mean = values.iter().sum::<f64>() / values.len() as f64;
                let spread = values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
                    - values.iter().copied().fold(f64::INFINITY, f64::min);
                out.row(CheckRow::below(&format!("residue.cutoff_one_spread_{tag}"), "AC09", spread / mean, 0.2));
            }
            Ok(out)
        })
    };

    let tail = {
        let cell = tail_cell.clone();
        Experiment::new("residue.tail", "AC09", move || {
            let p = prepared(&cell, ctx, Walk::Tail)?;
            let wide = Profile::indicator(-30.0, 30.0);
            let mut out = Outcome::default();
            let logs = r
                .tail_s
                .iter()
                .map(|&s| {
                    let f = TargetFunction::jump(Window::Constant, Profile::indicator(s, 30.0), wide)?;
                    let plan = p.plan(ctx, &format!("tail.{s}"), paths);
                    let e = residue_crossing(&p.mu, &f, base(), base(), r.tail_t, ResidueVariant::Cutoff, &plan)?;
                    record(&mut out, &format!("s{s}"), &e);
                    Ok(e.value.ln())
                })
                .collect::<Result<Vec<f64>>>()?;
            let fit = linear_fit(&r.tail_s, &logs);
            out.row(CheckRow::below("residue.tail_log_slope", "AC09", fit.slope, 0.0));
            out.datum("log_slope", fit.slope).datum("log_slope_stderr", fit.slope_stderr);
            Ok(out)
        })
    };

    let cutoff_oracle = {
        let cell = m();
        Experiment::new("residue.cutoff_oracle", "AC09", move || {
            let p = prepared(&cell, ctx, Walk::Main)?;
            let y = Window::Bump { center: circular_center(&p.nu), half_width: 0.45 };
            let f = residue_bump(y)?;
            let plan = p.plan(ctx, "cutoff_oracle", paths);
            let lhs = residue_crossing(&p.mu, &f, base(), base(), r.oracle_t, ResidueVariant::Cutoff, &plan)?;
            let rhs = limit_oracle(&p.mu, &f, LimitVariant::Crossing(ResidueVariant::Cutoff), &p.nu, None, p.sigma)?;
            let mut out = Outcome::default();
            out.row(oracle_row("residue.cutoff_vs_limit", &lhs, &rhs, 1.0));
            record(&mut out, "lhs", &lhs);
            record(&mut out, "rhs", &rhs);
            Ok(out)
        })
    };

    let cartan_oracle = {
        let cell = m();
        Experiment::new("residue.cartan_oracle", "AC09", move || {
            let p = prepared(&cell, ctx, Walk::Main)?;
            let y = Window::Bump { center: circular_center(&p.nu), half_width: 0.45 };
            let y_prime = Window::Bump { center: circular_center(&p.nu_check), half_width: 0.45 };
            let f = TargetFunction::full(
                y_prime,
                y,
                Profile::Bump { center: 0.5, half_width: 0.5 },
                Profile::Bump { center: -0.3, half_width: 0.3 },
            )?;
            let plan = p.plan(ctx, "cartan_oracle", paths);
            let x_prime = ProjectivePoint::from_angle(DEFAULT_BASE + 0.5);
            let lhs = residue_crossing(&p.mu, &f, base(), x_prime, r.oracle_t, ResidueVariant::Cartan, &plan)?;
            let rhs = limit_oracle(
                &p.mu,
                &f,
                LimitVariant::Crossing(ResidueVariant::Cartan),
                &p.nu,
                Some(&p.nu_check),
                p.sigma,
            )?;
            let mut out = Outcome::default();
            out.row(oracle_row("residue.cartan_vs_limit", &lhs, &rhs, 1.0));
            record(&mut out, "lhs", &lhs);
            record(&mut out, "rhs", &rhs);
            Ok(out)
        })
    };

    let minus_oracle = {
        let cell = minus_cell.clone();
        Experiment::new("residue.minus_oracle", "AC09", move || {
            let p = prepared(&cell, ctx, Walk::Minus)?;
            // Down-crossings: negative jump v, residue u ∈ (0, −v]. Flat in
            // the jump and residue, so only the window in y matters.
            let y = Window::Bump { center: circular_center(&p.nu), half_width: 0.7 };
            let f = TargetFunction::jump(y, Profile::indicator(-20.0, 20.0), Profile::indicator(-1.0, 20.0))?;
            let plan = p.plan(ctx, "minus_oracle", paths);
            let lhs = residue_crossing(&p.mu, &f, base(), base(), r.oracle_t, ResidueVariant::CutoffMinus, &plan)?;
            let rhs = limit_oracle(&p.mu, &f, LimitVariant::Crossing(ResidueVariant::CutoffMinus), &p.nu, None, p.sigma)?;
            let mut out = Outcome::default();
            out.row(oracle_row("residue.cutoff_minus_vs_limit", &lhs, &rhs, 1.0));
            record(&mut out, "lhs", &lhs);
            record(&mut out, "rhs", &rhs);
            Ok(out)
        })
    };

    let stopping = {
        let cell = m();
        Experiment::new("stopping.identity", "AC10", move || {
            let p = prepared(&cell, ctx, Walk::Main)?;
            let mut out = Outcome::default();
            for (name, test_fn) in [("cos2", CircleFunction::Cos2), ("one", CircleFunction::One)] {
                let plan = p.plan(ctx, &format!("stopping.{name}"), paths);
                let c = stopping_identity_check(&p.mu, test_fn, r.stopping_t, &p.nu, &p.starts, &plan)?;
                out.row(CheckRow::close(&format!("stopping.{name}"), "AC10", c.lhs, c.rhs, 3.0 * c.combined_stderr()));
                out.datum(format!("{name}.lhs"), c.lhs)
                    .datum(format!("{name}.rhs"), c.rhs)
                    .datum(format!("{name}.z_score"), c.z_score)
                    .datum(format!("{name}.cap_hit_fraction"), c.cap_hit_fraction);
            }
            Ok(out)
        })
    };

    let lambda = {
        let cell = m();
        Experiment::new("lambda.approximation", "AC11", move || {
            let p = prepared(&cell, ctx, Walk::Main)?;
            let setup = |(s, t): (f64, f64)| LambdaSetup {
                x: ProjectivePoint::from_angle(0.1),
                y: ProjectivePoint::from_angle(1.4),
                s,
                t,
                sign: 1.0,
                eps3: 0.3,
                phase: Phase::Identity,
                window: Window::Bump { center: 0.6, half_width: 0.5 },
            };
            let low = lambda_approx_check(&p.mu, &setup(r.lambda_low), &p.plan(ctx, "lambda.low", lambda_paths))?;
            let high = lambda_approx_check(&p.mu, &setup(r.lambda_high), &p.plan(ctx, "lambda.high", lambda_paths))?;
            let modulus = low.rows.iter().chain(&high.rows).map(|row| row.lambda0_modulus).fold(0.0, f64::max);
            let mut out = Outcome::default();
            out.row(CheckRow::below("lambda.low_scale_threshold", "AC11", low.max_gap, r.lambda_threshold_low));
            out.row(CheckRow::below("lambda.high_scale_threshold", "AC11", high.max_gap, r.lambda_threshold_high));
            out.row(CheckRow::below("lambda.gap_shrinks", "AC11", high.max_gap, low.max_gap));
            out.row(CheckRow::at_most("lambda.modulus_bounded", "AC11", modulus, 1.0, 0.0));
            for (tag, table) in [("low", &low), ("high", &high)] {
                out.datum(format!("{tag}.retained"), table.rows.len() as f64)
                    .datum(format!("{tag}.crossings"), table.crossings as f64)
                    .datum(format!("{tag}.max_gap"), table.max_gap)
                    .datum(format!("{tag}.mean_gap"), table.mean_gap);
            }
            Ok(out)
        })
    };

    let osc = Experiment::new("osc.bound", "AC12", move || {
        let triples = map_paths(ctx.key("renewal", "osc"), r.osc_triples, |_, rng| {
            let b1 = rng.gen_range(-3.0..3.0);
            let b2 = b1 + rng.gen_range(0.0..4.0);
            let magnitude = 10f64.powf(rng.gen_range(0.0..8.0));
            let lambda = if rng.gen_bool(0.5) { magnitude } else { -magnitude };
            (b1, b2, lambda)
        });
        let checks = triples.iter().map(|&(b1, b2, l)| osc_bound_check(b1, b2, l)).collect::<Result<Vec<_>>>()?;
        let excess = checks.iter().map(|c| c.modulus - c.bound).fold(f64::NEG_INFINITY, f64::max);
        let failures = checks.iter().filter(|c| !c.passes()).count();
        let mut out = Outcome::default();
        out.row(CheckRow::new("osc.bound_holds", "AC12", excess, 0.0, furstenberg::renewal::OSC_TOL, failures == 0));
        out.datum("triples", checks.len() as f64).datum("max_excess", excess).datum("failures", failures as f64);
        Ok(out)
    });

    vec![limit, regularity, bounded, tail, cutoff_oracle, cartan_oracle, minus_oracle, stopping, lambda, osc]
}
