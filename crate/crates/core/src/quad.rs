//! One-dimensional quadrature rules.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::special::gauss_legendre;

/// A fixed Gauss–Legendre rule on `[-1, 1]`, mapped onto intervals on demand.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        GaussRule { nodes, weights }
    }

    /// `∫_a^b f`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let h = 0.5 * (b - a);
        let c = 0.5 * (b + a);
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(c + h * x);
        }
        s * h
    }

    /// Composite rule over `panels` equal panels of `[a, b]`.
    pub fn integrate_panels<F: FnMut(f64) -> f64>(
        &self,
        a: f64,
        b: f64,
        panels: usize,
        mut f: F,
    ) -> f64 {
        let panels = panels.max(1);
        let width = (b - a) / panels as f64;
        let mut s = 0.0;
        for p in 0..panels {
            let lo = a + width * p as f64;
            s += self.integrate(lo, lo + width, &mut f);
        }
        s
    }

    /// Nodes and weights of the composite rule, for reuse across many integrands.
    pub fn composite(&self, a: f64, b: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
        let panels = panels.max(1);
        let width = (b - a) / panels as f64;
        let mut xs = Vec::with_capacity(panels * self.nodes.len());
        let mut ws = Vec::with_capacity(panels * self.nodes.len());
        for p in 0..panels {
            let c = a + width * (p as f64 + 0.5);
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                xs.push(c + 0.5 * width * x);
                ws.push(0.5 * width * w);
            }
        }
        (xs, ws)
    }
}

impl GaussRule {
    /// Composite rule on `[a, b]` with panel width `max(min_width, growth·x)`
    /// at the panel's left end `x ≥ 0`: uniform near the origin, geometric
    /// far out.
    pub fn graded(&self, a: f64, b: f64, min_width: f64, growth: f64) -> (Vec<f64>, Vec<f64>) {
        let mut xs = Vec::new();
        let mut ws = Vec::new();
        let mut lo = a;
        while lo < b {
            let hi = (lo + min_width.max(growth * lo.abs())).min(b);
            let (c, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                xs.push(c + h * x);
                ws.push(h * w);
            }
            lo = hi;
        }
        (xs, ws)
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(a: f64, b: f64, f: &mut F) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) integration of `f` over `[a, b]` to an
/// absolute-or-relative tolerance. Returns the estimate and its error bound.
pub fn adaptive<F: FnMut(f64) -> f64>(a: f64, b: f64, tol: f64, mut f: F) -> (f64, f64) {
    if a == b {
        return (0.0, 0.0);
    }
    let mut stack: Vec<(f64, f64, f64, f64)> = Vec::new();
    let (v, e) = gk15(a, b, &mut f);
    stack.push((a, b, v, e));
    let mut total = v;
    let mut err = e;
    let mut iterations = 0;
    while err > tol.max(tol * total.abs()) && iterations < 2000 {
        iterations += 1;
        // split the interval with the largest error
        let (idx, _) = stack
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, s)| if s.3 > best.1 { (i, s.3) } else { best });
        let (lo, hi, v0, e0) = stack.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(lo, mid, &mut f);
        let (v2, e2) = gk15(mid, hi, &mut f);
        total += v1 + v2 - v0;
        err += e1 + e2 - e0;
        stack.push((lo, mid, v1, e1));
        stack.push((mid, hi, v2, e2));
    }
    // resum to limit drift from the incremental updates
    let total: f64 = stack.iter().map(|s| s.2).sum();
    let err: f64 = stack.iter().map(|s| s.3).sum();
    (total, err)
}

/// Composite Simpson weights for `n` (odd) equally spaced samples with step `h`.
pub fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    assert!(n >= 3 && n % 2 == 1, "Simpson needs an odd sample count");
    let mut w = alloc::vec![0.0; n];
    for (i, wi) in w.iter_mut().enumerate() {
        *wi = if i == 0 || i == n - 1 {
            h / 3.0
        } else if i % 2 == 1 {
            4.0 * h / 3.0
        } else {
            2.0 * h / 3.0
        };
    }
    w
}

/// Four-point Lagrange interpolation of uniformly spaced samples
/// `values[i] ≈ f(x0 + i·h)`; zero outside the sampled range.
pub fn lagrange4(values: &[f64], x0: f64, h: f64, x: f64) -> f64 {
    let n = values.len();
    let s = (x - x0) / h;
    if s < 0.0 || s > (n - 1) as f64 {
        return 0.0;
    }
    if n < 4 {
        let i = (s.floor() as usize).min(n.saturating_sub(2));
        let fr = s - i as f64;
        return values[i] * (1.0 - fr) + values[(i + 1).min(n - 1)] * fr;
    }
    let i = (s.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
    let u = s - i as f64;
    let (y0, y1, y2, y3) = (values[i], values[i + 1], values[i + 2], values[i + 3]);
    let l0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
    let l1 = u * (u - 2.0) * (u - 3.0) / 2.0;
    let l2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
    let l3 = u * (u - 1.0) * (u - 2.0) / 6.0;
    y0 * l0 + y1 * l1 + y2 * l2 + y3 * l3
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn adaptive_handles_peaks() {
        let (v, _) = adaptive(0.0, 10.0, 1e-12, |x| (-(x - 3.0) * (x - 3.0) * 50.0).exp());
        assert!((v - (PI / 50.0).sqrt()).abs() < 1e-11);
        let (v, _) = adaptive(0.0, PI, 1e-13, |x| x.sin());
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn simpson_is_exact_for_cubics() {
        let n = 11;
        let h = 0.1;
        let w = simpson_weights(n, h);
        let s: f64 = (0..n).map(|i| w[i] * (i as f64 * h).powi(3)).sum();
        assert!((s - 0.25).abs() < 1e-14);
    }

    #[test]
    fn lagrange_reproduces_cubics() {
        let vals: Vec<f64> = (0..10).map(|i| (i as f64 * 0.5).powi(3) - 1.0).collect();
        let x: f64 = 2.3;
        assert!((lagrange4(&vals, 0.0, 0.5, x) - (x.powi(3) - 1.0)).abs() < 1e-12);
        assert!((lagrange4(&vals, 0.0, 0.5, 4.4) - (4.4f64.powi(3) - 1.0)).abs() < 1e-11);
    }
}
