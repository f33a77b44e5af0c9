//! Special functions: Legendre polynomials, normalized associated Legendre
//! functions, spherical Bessel functions and log-Γ ratios.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

/// Legendre polynomial `P_k(x)` by the three-term recurrence.
pub fn legendre(k: usize, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let (mut p0, mut p1) = (1.0, x);
    for j in 1..k {
        let jf = j as f64;
        let p2 = ((2.0 * jf + 1.0) * x * p1 - jf * p0) / (jf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `P_k(x)` for all `k ≤ k_max`.
pub fn legendre_all(k_max: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; k_max + 1];
    out[0] = 1.0;
    if k_max >= 1 {
        out[1] = x;
    }
    for j in 1..k_max {
        let jf = j as f64;
        out[j + 1] = ((2.0 * jf + 1.0) * x * out[j] - jf * out[j - 1]) / (jf + 1.0);
    }
    out
}

/// `P_k(0)`: zero for odd `k`, `(-1)^{k/2} (k-1)!!/k!!` for even `k`.
pub fn legendre_at_zero(k: usize) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    let mut v = 1.0;
    let mut j = 2;
    while j <= k {
        v *= -((j - 1) as f64) / (j as f64);
        j += 2;
    }
    v
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma_r(x).0
}

/// `Γ(a)/Γ(b)` for positive arguments, evaluated through log-Γ.
pub fn gamma_ratio(a: f64, b: f64) -> f64 {
    (ln_gamma(a) - ln_gamma(b)).exp()
}

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Flat index of the real spherical harmonic of degree `k`, order `m`.
///
/// Ordering: degree-major, orders `-k..=k` ascending, so `idx(k, m) = k² + k + m`.
#[inline]
pub fn sh_index(k: usize, m: i64) -> usize {
    ((k * k + k) as i64 + m) as usize
}

/// Number of coefficients up to degree `l_max`.
#[inline]
pub fn sh_count(l_max: usize) -> usize {
    (l_max + 1) * (l_max + 1)
}

/// Table of orthonormalised associated Legendre functions `P̄_k^m(z)` for
/// `0 ≤ m ≤ k ≤ l_max`, without the Condon–Shortley phase.
///
/// `Y_{k,0} = P̄_k^0`, `Y_{k,m} = √2 P̄_k^m cos(mφ)`, `Y_{k,-m} = √2 P̄_k^m sin(mφ)`.
pub struct AssocLegendre {
    l_max: usize,
    values: Vec<f64>,
}

impl AssocLegendre {
    pub fn new(l_max: usize, z: f64) -> Self {
        let mut t = AssocLegendre {
            l_max,
            values: vec![0.0; (l_max + 1) * (l_max + 2) / 2],
        };
        t.fill(z);
        t
    }

    #[inline]
    fn tri(k: usize, m: usize) -> usize {
        k * (k + 1) / 2 + m
    }

    /// Recompute the table in place for a new `z`.
    pub fn fill(&mut self, z: f64) {
        let l = self.l_max;
        let s = (1.0 - z * z).max(0.0).sqrt();
        let mut pmm = 0.5 / PI.sqrt();
        for m in 0..=l {
            if m > 0 {
                let mf = m as f64;
                pmm *= ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s;
            }
            self.values[Self::tri(m, m)] = pmm;
            if m < l {
                let p1 = (2.0 * m as f64 + 3.0).sqrt() * z * pmm;
                self.values[Self::tri(m + 1, m)] = p1;
                let (mut a, mut b) = (pmm, p1);
                for k in (m + 2)..=l {
                    let kf = k as f64;
                    let mf = m as f64;
                    let c1 = ((4.0 * kf * kf - 1.0) / (kf * kf - mf * mf)).sqrt();
                    let km1 = kf - 1.0;
                    let c2 = ((km1 * km1 - mf * mf) / (4.0 * km1 * km1 - 1.0)).sqrt();
                    let next = c1 * (z * b - c2 * a);
                    self.values[Self::tri(k, m)] = next;
                    a = b;
                    b = next;
                }
            }
        }
    }

    #[inline]
    pub fn get(&self, k: usize, m: usize) -> f64 {
        self.values[Self::tri(k, m)]
    }
}

/// Spherical Bessel function of the first kind `j_k(x)`, `x ≥ 0`.
///
/// Upward recurrence where it is stable (`x > k`), otherwise Miller's downward
/// recurrence normalised by `Σ (2n+1) j_n² = 1`.
pub fn spherical_bessel_j(k: usize, x: f64) -> f64 {
    let x = x.abs();
    if x < 1e-300 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if x < 1e-3 && k <= 2 {
        let x2 = x * x;
        return match k {
            0 => 1.0 - x2 / 6.0 + x2 * x2 / 120.0,
            1 => x / 3.0 - x * x2 / 30.0 + x * x2 * x2 / 840.0,
            _ => x2 / 15.0 - x2 * x2 / 210.0,
        };
    }
    let j0 = x.sin() / x;
    if k == 0 {
        return j0;
    }
    if x > k as f64 {
        let mut a = j0;
        let mut b = x.sin() / (x * x) - x.cos() / x;
        for n in 1..k {
            let c = (2.0 * n as f64 + 1.0) / x * b - a;
            a = b;
            b = c;
        }
        return b;
    }
    let start = k + 20 + (2.0 * x).ceil() as usize + (10.0 * (k as f64).sqrt()) as usize;
    let mut upper = 0.0;
    let mut cur = 1.0;
    let mut target = 0.0;
    let mut sum = 0.0;
    let mut first_two = [0.0; 2];
    for n in (0..=start).rev() {
        // j_{n-1} = (2n+1)/x j_n - j_{n+1}
        if n == k {
            target = cur;
        }
        if n <= 1 {
            first_two[n] = cur;
        }
        sum += (2.0 * n as f64 + 1.0) * cur * cur;
        let lower = (2.0 * n as f64 + 1.0) / x * cur - upper;
        upper = cur;
        cur = lower;
        if cur.abs() > 1e100 {
            let scale = 1e-100;
            cur *= scale;
            upper *= scale;
            target *= scale;
            sum *= scale * scale;
            first_two[0] *= scale;
            first_two[1] *= scale;
        }
    }
    let norm = 1.0 / sum.sqrt();
    let j1 = x.sin() / (x * x) - x.cos() / x;
    let sign = if j0.abs() >= j1.abs() {
        (j0 * first_two[0]).signum()
    } else {
        (j1 * first_two[1]).signum()
    };
    sign * target * norm
}

/// Gauss–Legendre nodes (ascending) and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 1..n {
                let jf = j as f64;
                let p2 = ((2.0 * jf + 1.0) * z * p1 - jf * p0) / (jf + 1.0);
                p0 = p1;
                p1 = p2;
            }
            let (p, pm1) = if n == 1 { (z, 1.0) } else { (p1, p0) };
            dp = nf * (z * p - pm1) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        // recompute derivative at the converged root
        let (mut p0, mut p1) = (1.0, z);
        for j in 1..n {
            let jf = j as f64;
            let p2 = ((2.0 * jf + 1.0) * z * p1 - jf * p0) / (jf + 1.0);
            p0 = p1;
            p1 = p2;
        }
        if n > 1 {
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_at_zero_matches_recurrence() {
        for k in 0..40 {
            assert!((legendre_at_zero(k) - legendre(k, 0.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(12);
        for deg in 0..24 {
            let num: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((num - exact).abs() < 1e-14, "deg {deg}: {num} vs {exact}");
        }
        let total: f64 = gauss_legendre(1).1.iter().sum();
        assert!((total - 2.0).abs() < 1e-15);
    }

    #[test]
    fn assoc_legendre_low_degrees() {
        let z: f64 = 0.3;
        let t = AssocLegendre::new(3, z);
        let n00 = 0.5 / PI.sqrt();
        assert!((t.get(0, 0) - n00).abs() < 1e-15);
        let y10 = (3.0 / (4.0 * PI)).sqrt() * z;
        assert!((t.get(1, 0) - y10).abs() < 1e-15);
        let y20 = (5.0 / (16.0 * PI)).sqrt() * (3.0 * z * z - 1.0);
        assert!((t.get(2, 0) - y20).abs() < 1e-15);
        // P̄_1^1 = sqrt(3/(8π)) sin θ
        let y11 = (3.0 / (8.0 * PI)).sqrt() * (1.0 - z * z).sqrt();
        assert!((t.get(1, 1) - y11).abs() < 1e-15);
    }

    #[test]
    fn spherical_bessel_closed_forms() {
        for &x in &[0.5, 1.0, 3.0, 7.5, 20.0, 60.0] {
            let (s, c) = (x.sin(), x.cos());
            let j1 = s / (x * x) - c / x;
            let j2 = (3.0 / (x * x) - 1.0) * s / x - 3.0 * c / (x * x);
            assert!((spherical_bessel_j(1, x) - j1).abs() < 1e-12, "j1({x})");
            assert!((spherical_bessel_j(2, x) - j2).abs() < 1e-12, "j2({x})");
        }
        // series near the origin, where the closed forms cancel
        let x: f64 = 0.01;
        let x2 = x * x;
        assert!((spherical_bessel_j(1, x) - (x / 3.0 - x * x2 / 30.0 + x * x2 * x2 / 840.0)).abs() < 1e-16);
        assert!((spherical_bessel_j(2, x) - (x2 / 15.0 - x2 * x2 / 210.0 + x2 * x2 * x2 / 7560.0)).abs() < 1e-16);
        // downward branch against upward branch near the switch
        let a = spherical_bessel_j(10, 10.5);
        let b = spherical_bessel_j(10, 10.5 - 1e-12);
        assert!((a - b).abs() < 1e-10);
        // small argument asymptotics j_k(x) ≈ x^k/(2k+1)!!
        let x: f64 = 1e-2;
        let approx = x.powi(4) / (1.0 * 3.0 * 5.0 * 7.0 * 9.0);
        assert!((spherical_bessel_j(4, x) / approx - 1.0).abs() < 1e-4);
    }

    #[test]
    fn gamma_ratio_half_integers() {
        assert!((gamma_ratio(0.5, 1.0) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma_ratio(40.5, 40.0) / 40.0_f64.sqrt() - 1.0).abs() < 1e-2);
    }
}
