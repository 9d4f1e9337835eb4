use super::{Context, Experiment, Outcome};
use crate::report::CheckRow;
use furstenberg::geometry::identities::{
    cocycle_approximation_violation, cocycle_additivity, duality, random_element, random_point,
    sandwich_violation, sign_equality,
};
use furstenberg::rng::{map_paths, SeedKey};
use rand_chacha::ChaCha8Rng;
use rand::Rng;

const AC: &str = "AC01";

/// Evaluate `probe` on fresh random instances until `target` of them satisfy
/// its hypothesis (`Some`), giving up after `50 · target` draws.
fn conditioned<F>(key: SeedKey, target: usize, probe: F) -> Vec<f64>
where
    F: Fn(&mut ChaCha8Rng) -> Option<f64> + Sync,
{
    let mut values = Vec::with_capacity(target);
    let mut batch = 0u64;
    while values.len() < target && batch < 50 {
        let k = key.child(&batch.to_string());
        values.extend(map_paths(k, target, |_, rng| probe(rng)).into_iter().flatten());
        batch += 1;
    }
    values.truncate(target);
    values
}

fn max_of(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(0.0, f64::max)
}

/// Maximum residual over `n` instances, checked against `tol`; fewer than
/// `n` eligible instances fails the check.
fn residual_check(id: &'static str, values: Vec<f64>, n: usize, tol: f64) -> Outcome {
    let worst = max_of(&values);
    let mut out = Outcome::default();
    let enough = values.len() >= n;
    out.row(CheckRow::new(id, AC, worst, 0.0, tol, enough && worst <= tol));
    out.datum("instances", values.len() as f64).datum("max_residual", worst);
    out
}

pub(super) fn experiments<'a>(ctx: &'a Context) -> Vec<Experiment<'a>> {
    let n = ctx.scaled(ctx.cfg.geometry.instances);
    let km = ctx.cfg.geometry.kappa_max;
    let key = move |e: &str| ctx.key("geometry", e);
    vec![
        Experiment::new("geometry.cocycle_additivity", AC, move || {
            let v = conditioned(key("additivity"), n, |rng| {
                let (g, h, x) = (random_element(rng, km), random_element(rng, km), random_point(rng));
                Some(cocycle_additivity(&g, &h, &x))
            });
            Ok(residual_check("geometry.cocycle_additivity", v, n, 1e-9))
        }),
        Experiment::new("geometry.distance_distortion", AC, move || {
            // |d(gx,gy) − d(x,y) e^{−σ(g,x)−σ(g,y)}| / d(x,y)
            let v = conditioned(key("distortion"), n, |rng| {
                let (g, x, y) = (random_element(rng, km), random_point(rng), random_point(rng));
                let d = x.distance(&y);
                (d > 0.0).then(|| {
                    let predicted = d * (-(g.cocycle(&x) + g.cocycle(&y))).exp();
                    (g.act(&x).distance(&g.act(&y)) - predicted).abs() / d
                })
            });
            Ok(residual_check("geometry.distance_distortion", v, n, 1e-8))
        }),
        Experiment::new("geometry.sandwich", AC, move || {
            let v = conditioned(key("sandwich"), n, |rng| {
                Some(sandwich_violation(&random_element(rng, km), &random_point(rng)))
            });
            Ok(residual_check("geometry.sandwich", v, n, 1e-10))
        }),
        Experiment::new("geometry.cocycle_approximation", AC, move || {
            let v = conditioned(key("approximation"), n, |rng| {
                let (g, x, xp) = (random_element(rng, km), random_point(rng), random_point(rng));
                cocycle_approximation_violation(&g, &x, &xp)
            });
            Ok(residual_check("geometry.cocycle_approximation", v, n, 1e-9))
        }),
        Experiment::new("geometry.axis_duality", AC, move || {
            let v = conditioned(key("duality"), n, |rng| {
                let g = random_element(rng, km);
                (g.kappa() > 0.0).then(|| duality(&g))
            });
            Ok(residual_check("geometry.axis_duality", v, n, 1e-9))
        }),
        Experiment::new("geometry.sign_equality", AC, move || {
            let v = conditioned(key("sign"), n, |rng| {
                let (g, x, y) = (random_element(rng, km), random_point(rng), random_point(rng));
                sign_equality(&g, &x, &y).map(|ok| if ok { 0.0 } else { 1.0 })
            });
            let mismatches: f64 = v.iter().sum();
            let mut out = Outcome::default();
            out.row(CheckRow::new("geometry.sign_equality", AC, mismatches, 0.0, 0.0, v.len() >= n && mismatches == 0.0));
            out.datum("instances", v.len() as f64).datum("mismatches", mismatches);
            Ok(out)
        }),
        Experiment::new("geometry.kappa_bounds", AC, move || {
            let pairs = map_paths(key("kappa"), n, |_, rng| {
                let (g, x) = (random_element(rng, km), random_point(rng));
                let k = g.kappa();
                ((k - g.inverse().kappa()).abs(), g.cocycle(&x) - k)
            });
            let sym = max_of(&pairs.iter().map(|p| p.0).collect::<Vec<_>>());
            let excess = pairs.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
            let mut out = Outcome::default();
            out.row(CheckRow::at_most("geometry.kappa_inverse", AC, sym, 0.0, 1e-10));
            out.row(CheckRow::at_most("geometry.cocycle_below_kappa", AC, excess, 0.0, 1e-10));
            out.datum("max_kappa_asymmetry", sym).datum("max_cocycle_minus_kappa", excess);
            Ok(out)
        }),
        Experiment::new("geometry.representation", AC, move || {
            let v = map_paths(key("representation"), n, |_, rng| {
                let (g, x) = (random_element(rng, km), random_point(rng));
                let h = g.rescaled(rng.gen_range(-20.0..20.0));
                let act = g.act(&x).distance(&h.act(&x));
                let coc = (g.cocycle(&x) - h.cocycle(&x)).abs();
                let kap = (g.kappa() - h.kappa()).abs();
                act.max(coc).max(kap)
            });
            Ok(residual_check("geometry.representation", v, n, 1e-9))
        }),
    ]
}
