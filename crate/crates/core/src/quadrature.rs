//! Globally adaptive Gauss-Kronrod (7/15) integration on finite intervals.
//!
//! The interval with the largest error estimate is bisected until the summed
//! error estimate meets `max(abs_tol, rel_tol * |integral|)` or the interval
//! budget runs out. Callers with kinked integrands pass the kink locations as
//! breakpoints so every panel starts out smooth.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// Kronrod abscissae on [0, 1]; odd indices are the 7-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Points evaluated per panel.
pub const RULE_SIZE: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of panels kept alive at once.
    pub max_intervals: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-14,
            max_intervals: 10_000,
        }
    }
}

impl QuadratureConfig {
    pub fn new(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "tolerance must be finite and > 0",
                });
            }
        }
        if self.max_intervals == 0 {
            return Err(Error::InvalidParameter {
                name: "max_intervals",
                value: 0.0,
                reason: "need at least one interval",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs_value: f64,
}

impl Panel {
    /// Error estimate is already at the roundoff floor; bisecting won't help.
    fn at_roundoff(&self) -> bool {
        self.error <= 50.0 * f64::EPSILON * self.abs_value * (1.0 + 1e-6)
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    // Largest error first; ties broken by position so the order is total
    // and the refinement sequence deterministic.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// QUADPACK-style scaling of the raw Gauss/Kronrod difference.
fn rescale_error(raw: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = raw.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut kronrod = WGK[7] * f_center;
    let mut gauss = WG[3] * f_center;
    let mut res_abs = kronrod.abs();
    let mut left = [0.0; 7];
    let mut right = [0.0; 7];

    for j in 0..7 {
        let dx = half * XGK[j];
        let fl = f(center - dx);
        let fr = f(center + dx);
        left[j] = fl;
        right[j] = fr;
        kronrod += WGK[j] * (fl + fr);
        res_abs += WGK[j] * (fl.abs() + fr.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (fl + fr);
        }
    }

    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((left[j] - mean).abs() + (right[j] - mean).abs());
    }

    let scale = half.abs();
    Panel {
        a,
        b,
        value: kronrod * half,
        error: rescale_error((kronrod - gauss) * half, res_abs * scale, res_asc * scale),
        abs_value: res_abs * scale,
    }
}

/// Integrates `f` over `[a, b]` with default budget.
pub fn integrate_adaptive<F>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    integrate(f, &[a, b], &QuadratureConfig::new(rel_tol, abs_tol))
}

/// Integrates `f` from the first to the last breakpoint, starting with one
/// panel per consecutive pair. Breakpoints must be finite and ascending;
/// repeated points are skipped.
pub fn integrate<F>(
    f: F,
    breakpoints: &[f64],
    config: &QuadratureConfig,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    config.validate()?;
    if breakpoints.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "breakpoints",
            value: breakpoints.len() as f64,
            reason: "need at least the two interval endpoints",
        });
    }
    for w in breakpoints.windows(2) {
        if !(w[0].is_finite() && w[1].is_finite()) || w[1] < w[0] {
            return Err(Error::InvalidParameter {
                name: "breakpoints",
                value: w[1],
                reason: "must be finite and ascending",
            });
        }
    }

    let mut heap = BinaryHeap::new();
    let mut settled = Vec::new();
    let mut evaluations = 0;
    for w in breakpoints.windows(2) {
        if w[1] > w[0] {
            heap.push(gauss_kronrod_15(&f, w[0], w[1]));
            evaluations += RULE_SIZE;
        }
    }
    if heap.is_empty() {
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations,
        });
    }

    loop {
        let (value, error) = heap
            .iter()
            .chain(settled.iter())
            .fold((0.0, 0.0), |(v, e), p: &Panel| (v + p.value, e + p.error));
        let tolerance = config.abs_tol.max(config.rel_tol * value.abs());
        if error <= tolerance {
            return Ok(QuadratureResult {
                value,
                error_estimate: error,
                evaluations,
            });
        }

        let worst = match heap.pop() {
            Some(p) => p,
            None => {
                return Err(Error::NonConvergence {
                    estimate: value,
                    error_estimate: error,
                    intervals: settled.len(),
                })
            }
        };
        if heap.len() + settled.len() + 2 > config.max_intervals {
            heap.push(worst);
            return Err(Error::NonConvergence {
                estimate: value,
                error_estimate: error,
                intervals: heap.len() + settled.len(),
            });
        }

        let mid = 0.5 * (worst.a + worst.b);
        // Panels that cannot be bisected in floating point are frozen.
        if mid <= worst.a || mid >= worst.b {
            settled.push(worst);
            continue;
        }
        let left = gauss_kronrod_15(&f, worst.a, mid);
        let right = gauss_kronrod_15(&f, mid, worst.b);
        evaluations += 2 * RULE_SIZE;
        for half in [left, right] {
            if half.at_roundoff() {
                settled.push(half);
            } else {
                heap.push(half);
            }
        }
    }
}
