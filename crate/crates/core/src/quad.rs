//! Adaptive Gauss–Kronrod quadrature (G7/K15).
//!
//! The Lifshitz kernels are smooth but span many decades and decay
//! exponentially, so the engine needs three entry points: plain adaptive
//! integration on a finite interval, the same with caller-supplied
//! breakpoints (table panels, known kinks), and a semi-infinite integral for
//! kernels with a known exponential decay scale, closed by a geometric tail
//! bound.

use crate::error::{Error, Result};

/// K15 abscissae (positive half, descending); odd indices are the G7 nodes.
const XGK: [f64; 7] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
];

/// K15 weights matching `XGK`, last entry is the centre node.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_82,
];

/// G7 weights for `XGK[1]`, `XGK[3]`, `XGK[5]` and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// One G7/K15 evaluation on [a, b] with the QUADPACK error estimate.
fn kronrod_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut resk = WGK[7] * fc;
    let mut resg = WG[3] * fc;
    let mut resabs = WGK[7] * fc.abs();
    let mut fv = [0.0_f64; 14];

    for i in 0..7 {
        let dx = half * XGK[i];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[2 * i] = f1;
        fv[2 * i + 1] = f2;
        resk += WGK[i] * (f1 + f2);
        resabs += WGK[i] * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            resg += WG[i / 2] * (f1 + f2);
        }
    }

    let reskh = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for i in 0..7 {
        resasc += WGK[i] * ((fv[2 * i] - reskh).abs() + (fv[2 * i + 1] - reskh).abs());
    }

    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * 1.0_f64.min((200.0 * error / resasc).powf(1.5));
    }
    let round = 50.0 * f64::EPSILON * resabs;
    if round > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(round);
    }

    Panel { a, b, value, error }
}

fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

const MAX_PANELS: usize = 4096;

fn refine<F: Fn(f64) -> f64>(
    f: &F,
    mut panels: Vec<Panel>,
    rel_tol: f64,
    abs_tol: f64,
    context: &'static str,
) -> Result<QuadResult> {
    let mut evaluations = panels.len() * 15;
    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) {
            // Positional Kahan resum keeps the result independent of the
            // subdivision history.
            panels.sort_by(|x, y| x.a.total_cmp(&y.a));
            let value = kahan_sum(panels.iter().map(|p| p.value));
            return Ok(QuadResult {
                value,
                error: err,
                evaluations,
            });
        }
        if panels.len() >= MAX_PANELS {
            return Err(Error::Numeric {
                context,
                achieved: total,
                error_bound: err,
                detail: format!("quadrature did not converge within {MAX_PANELS} panels"),
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .map(|(i, _)| i)
            .expect("panel list is nonempty");
        let Panel { a, b, .. } = panels[worst];
        let mid = 0.5 * (a + b);
        if !(a < mid && mid < b) {
            // Interval exhausted at f64 resolution; accept what we have.
            panels.sort_by(|x, y| x.a.total_cmp(&y.a));
            let value = kahan_sum(panels.iter().map(|p| p.value));
            return Ok(QuadResult {
                value,
                error: err,
                evaluations,
            });
        }
        panels[worst] = kronrod_panel(f, a, mid);
        panels.push(kronrod_panel(f, mid, b));
        evaluations += 30;
    }
}

/// Adaptive integral of `f` over [a, b].
pub fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    context: &'static str,
) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    if !(a < b) {
        return Err(Error::domain(format!(
            "quadrature requires a < b, got [{a}, {b}]"
        )));
    }
    refine(f, vec![kronrod_panel(f, a, b)], rel_tol, abs_tol, context)
}

/// Adaptive integral over [breaks[0], breaks[last]] with the given initial
/// subdivision (panel edges where the integrand has kinks or table nodes).
pub fn adaptive_with_breakpoints<F: Fn(f64) -> f64>(
    f: &F,
    breaks: &[f64],
    rel_tol: f64,
    abs_tol: f64,
    context: &'static str,
) -> Result<QuadResult> {
    if breaks.len() < 2 {
        return Err(Error::domain("need at least two breakpoints"));
    }
    let mut panels = Vec::with_capacity(breaks.len() - 1);
    for w in breaks.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::domain(format!(
                "breakpoints must be strictly increasing, got {} then {}",
                w[0], w[1]
            )));
        }
        panels.push(kronrod_panel(f, w[0], w[1]));
    }
    refine(f, panels, rel_tol, abs_tol, context)
}

/// Semi-infinite integral ∫_a^∞ f(y) dy for integrands decaying at least as
/// fast as exp(-y/`decay_scale`) once underway. Marches segments of
/// 15 decay lengths and closes with a geometric tail bound measured from the
/// last two segments; the bound is folded into the reported error.
pub fn exp_tail<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    decay_scale: f64,
    rel_tol: f64,
    context: &'static str,
) -> Result<QuadResult> {
    if !(decay_scale > 0.0) {
        return Err(Error::domain(format!(
            "decay scale must be positive, got {decay_scale}"
        )));
    }
    let seg_len = 15.0 * decay_scale;
    let mut acc = 0.0_f64;
    let mut comp = 0.0_f64;
    let mut err = 0.0_f64;
    let mut evaluations = 0usize;
    let mut prev_mag: Option<f64> = None;

    const MAX_SEGMENTS: usize = 200;
    for k in 0..MAX_SEGMENTS {
        let lo = a + seg_len * k as f64;
        let hi = lo + seg_len;
        let seg = adaptive(
            f,
            lo,
            hi,
            0.5 * rel_tol,
            0.02 * rel_tol * acc.abs(),
            context,
        )?;
        evaluations += seg.evaluations;
        err += seg.error;
        let y = seg.value - comp;
        let t = acc + y;
        comp = (t - acc) - y;
        acc = t;

        let mag = seg.value.abs();
        if mag == 0.0 || mag <= 0.05 * rel_tol * acc.abs() {
            // Geometric continuation of the measured decay.
            let ratio = match prev_mag {
                Some(p) if p > 0.0 => (mag / p).min(0.9),
                _ => (-15.0_f64).exp(),
            };
            let tail_bound = mag * ratio / (1.0 - ratio);
            err += tail_bound;
            return Ok(QuadResult {
                value: acc,
                error: err,
                evaluations,
            });
        }
        prev_mag = Some(mag);
    }
    Err(Error::Numeric {
        context,
        achieved: acc,
        error_bound: err,
        detail: format!("tail not reached after {MAX_SEGMENTS} segments"),
    })
}
