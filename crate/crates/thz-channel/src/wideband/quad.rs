//! Adaptive Gauss-Kronrod quadrature for complex-valued integrands on a real
//! interval. The caller supplies a maximum initial panel width so that an
//! oscillatory integrand is resolved before adaptive refinement begins.

use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{ModelError, Result};

// 15-point Kronrod abscissae (positive half; even indices are the Kronrod
// extension, odd indices the embedded 7-point Gauss nodes).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

// 7-point Gauss weights (positive half).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

// 15-point Kronrod weights.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

/// One evaluated panel: value, error estimate and L1 estimate.
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
    resabs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err && self.a == other.a
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        // Max-heap on error estimate; tie-break on the left edge so the
        // subdivision order is deterministic.
        self.err
            .total_cmp(&other.err)
            .then(other.a.total_cmp(&self.a))
    }
}

/// 15-point Gauss-Kronrod evaluation of `f` on [a, b].
fn qk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs_sum = WGK[7] * fc.norm();

    for j in 0..7 {
        let dx = half * XGK[j];
        let f_lo = f(center - dx);
        let f_hi = f(center + dx);
        let pair = f_lo + f_hi;
        kronrod += WGK[j] * pair;
        abs_sum += WGK[j] * (f_lo.norm() + f_hi.norm());
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }

    Panel {
        a,
        b,
        value: kronrod * half,
        err: ((kronrod - gauss) * half).norm(),
        resabs: abs_sum * half,
    }
}

/// Adaptively integrates `f` over [a, b] to the requested relative tolerance.
///
/// The interval is first cut into panels no wider than `max_panel_width`,
/// then the worst panel is bisected until the summed error estimate drops
/// below `rtol * |integral|` or roundoff on the L1 mass makes further
/// refinement pointless. Exceeding `max_subdivisions` panels yields a
/// non-convergence error carrying the best estimate.
pub(crate) fn integrate_adaptive<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    max_panel_width: f64,
    rtol: f64,
    max_subdivisions: usize,
) -> Result<Complex64> {
    let width = b - a;
    let n0 = ((width / max_panel_width).ceil() as usize).clamp(1, max_subdivisions);

    let mut heap = BinaryHeap::with_capacity(n0 + 64);
    let mut total = Complex64::new(0.0, 0.0);
    let mut total_err = 0.0;
    let mut total_abs = 0.0;
    for i in 0..n0 {
        let pa = a + width * (i as f64 / n0 as f64);
        let pb = if i + 1 == n0 {
            b
        } else {
            a + width * ((i + 1) as f64 / n0 as f64)
        };
        let panel = qk15(&f, pa, pb);
        total += panel.value;
        total_err += panel.err;
        total_abs += panel.resabs;
        heap.push(panel);
    }

    let mut panels = n0;
    loop {
        let converged =
            total_err <= rtol * total.norm() || total_err <= 50.0 * f64::EPSILON * total_abs;
        if converged {
            return Ok(total);
        }
        if panels >= max_subdivisions {
            return Err(ModelError::NonConvergence {
                estimate: total,
                achieved: total_err / total.norm().max(f64::MIN_POSITIVE),
                requested: rtol,
                subdivisions: panels,
            });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        total -= worst.value;
        total_err -= worst.err;
        total_abs -= worst.resabs;
        let mid = 0.5 * (worst.a + worst.b);
        for (pa, pb) in [(worst.a, mid), (mid, worst.b)] {
            let panel = qk15(&f, pa, pb);
            total += panel.value;
            total_err += panel.err;
            total_abs += panel.resabs;
            heap.push(panel);
        }
        panels += 1;
    }
}
