//! Scalar special functions needed by the mode solvers and simulators.
//!
//! Bessel J₀/J₁ use the power series below |x| = 12 and the Hankel asymptotic
//! expansion above; modified Bessel K₀/K₁ use the log series below x = 2 and a
//! Steed continued fraction above, with exponentially scaled variants for
//! large arguments. Accuracy is a few ulps except `erfc` (≈1e−7 relative,
//! Chebyshev fit), which is plenty for every consumer in this crate.

use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Bessel function of the first kind, order 0.
pub fn bessel_j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 12.0 {
        j_series(ax, 0)
    } else {
        j_asymptotic(ax, 0)
    }
}

/// Bessel function of the first kind, order 1.
pub fn bessel_j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax < 12.0 {
        j_series(ax, 1)
    } else {
        j_asymptotic(ax, 1)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

fn j_series(x: f64, nu: u32) -> f64 {
    let q = 0.25 * x * x;
    let (mut term, mut sum) = if nu == 0 {
        (1.0, 1.0)
    } else {
        (0.5 * x, 0.5 * x)
    };
    for m in 1..200 {
        let m = m as f64;
        let denom = if nu == 0 { m * m } else { m * (m + 1.0) };
        term *= -q / denom;
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

fn j_asymptotic(x: f64, nu: u32) -> f64 {
    let mu = 4.0 * (nu * nu) as f64;
    let (mut p, mut q) = (1.0, 0.0);
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..24 {
        let kf = k as f64;
        term *= (mu - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0 * x);
        if term.abs() > prev {
            break;
        }
        prev = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (2.0 * nu as f64 + 1.0) * PI / 4.0;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Modified Bessel function of the second kind, order 0.
pub fn bessel_k0(x: f64) -> f64 {
    bessel_k0_scaled(x) * (-x).exp()
}

/// Modified Bessel function of the second kind, order 1.
pub fn bessel_k1(x: f64) -> f64 {
    bessel_k1_scaled(x) * (-x).exp()
}

/// e^x · K₀(x); finite far beyond the underflow range of K₀ itself.
pub fn bessel_k0_scaled(x: f64) -> f64 {
    k_scaled(x).0
}

/// e^x · K₁(x).
pub fn bessel_k1_scaled(x: f64) -> f64 {
    k_scaled(x).1
}

fn k_scaled(x: f64) -> (f64, f64) {
    assert!(x > 0.0, "K_nu requires positive argument, got {x}");
    if x <= 2.0 {
        let ex = x.exp();
        let (k0, k1) = k_series(x);
        (k0 * ex, k1 * ex)
    } else {
        k_steed_scaled(x)
    }
}

fn k_series(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let lg = (0.5 * x).ln();

    // I0, I1 and the companion log-series sums, accumulated together.
    let mut i0 = 1.0;
    let mut i1t = 1.0; // I1 = (x/2) * i1t
    let mut k0_sum = 0.0;
    let mut k1_sum = (0.0f64 + 1.0) - 2.0 * EULER_GAMMA; // m = 0: H_0 + H_1 - 2γ
    let mut t0 = 1.0;
    let mut t1 = 1.0;
    let mut h = 0.0;
    for m in 1..200 {
        let mf = m as f64;
        h += 1.0 / mf;
        t0 *= q / (mf * mf);
        i0 += t0;
        k0_sum += t0 * h;
        t1 *= q / (mf * (mf + 1.0));
        i1t += t1;
        k1_sum += t1 * (2.0 * h + 1.0 / (mf + 1.0) - 2.0 * EULER_GAMMA);
        if t0 < 1e-18 * i0 {
            break;
        }
    }
    let i1 = 0.5 * x * i1t;
    let k0 = -(lg + EULER_GAMMA) * i0 + k0_sum;
    let k1 = 1.0 / x + lg * i1 - 0.25 * x * k1_sum;
    (k0, k1)
}

// Steed continued-fraction evaluation of e^x K0, e^x K1 for x > 2.
fn k_steed_scaled(x: f64) -> (f64, f64) {
    const EPS: f64 = 1e-16;
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        a -= 2.0 * (i as f64 - 1.0);
        c = -a * c / i as f64;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    let h = a1 * h;
    let k0e = (PI / (2.0 * x)).sqrt() / s;
    let k1e = k0e * (x + 0.5 - h) / x;
    (k0e, k1e)
}

/// Complementary error function (Chebyshev fit, ≲1.2e−7 relative error).
pub fn erfc(x: f64) -> f64 {
    let z = x.abs();
    let t = 1.0 / (1.0 + 0.5 * z);
    let ans = t * (-z * z - 1.26551223
        + t * (1.00002368
            + t * (0.37409196
                + t * (0.09678418
                    + t * (-0.18628806
                        + t * (0.27886807
                            + t * (-1.13520398
                                + t * (1.48851587
                                    + t * (-0.82215223 + t * 0.17087277)))))))))
    .exp();
    if x >= 0.0 {
        ans
    } else {
        2.0 - ans
    }
}

/// Error function.
pub fn erf(x: f64) -> f64 {
    1.0 - erfc(x)
}

/// Nodes and weights of n-point Gauss-Legendre quadrature on [a, b].
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    assert!(n >= 2);
    let m = (n + 1) / 2;
    let xm = 0.5 * (b + a);
    let xl = 0.5 * (b - a);
    let mut out = vec![(0.0, 0.0); n];
    for i in 0..m {
        // Newton iteration from the Chebyshev-like initial guess.
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j as f64 + 1.0) * z * p2 - j as f64 * p3) / (j as f64 + 1.0);
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 * xl / ((1.0 - z * z) * pp * pp);
        out[i] = (xm - xl * z, w);
        out[n - 1 - i] = (xm + xl * z, w);
    }
    out
}

/// Integrate a smooth function over [a, b] with composite Gauss-Legendre
/// panels (16 points per panel).
pub fn integrate_panels<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let mut total = 0.0;
    let h = (b - a) / panels as f64;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for &(x, w) in gl16(lo, lo + h).iter() {
            total += w * f(x);
        }
    }
    total
}

fn gl16(a: f64, b: f64) -> [(f64, f64); 16] {
    // 16-point nodes/weights on [-1,1], computed once.
    use std::sync::OnceLock;
    static NODES: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    let base = NODES.get_or_init(|| gauss_legendre(16, -1.0, 1.0));
    let xm = 0.5 * (b + a);
    let xl = 0.5 * (b - a);
    let mut out = [(0.0, 0.0); 16];
    for (i, &(x, w)) in base.iter().enumerate() {
        out[i] = (xm + xl * x, xl * w);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Reference values from standard tables (Abramowitz & Stegun / SciPy).
    #[test]
    fn j0_reference_values() {
        let cases = [
            (0.1, 0.99750156206604),
            (0.5, 0.938469807240813),
            (1.0, 0.7651976865579665),
            (2.0, 0.22389077914123562),
            (4.0, -0.3971498098638473),
            (7.5, 0.2663396578803784),
            (11.9, 0.02504944169958986),
            (12.1, 0.06966677360680752),
            (20.0, 0.16702466434058322),
            (55.0, -0.07454830264823664),
            (120.0, 0.07182341582915616),
        ];
        for (x, want) in cases {
            assert_relative_eq!(bessel_j0(x), want, max_relative = 1e-11, epsilon = 1e-12);
        }
    }

    #[test]
    fn j1_reference_values() {
        let cases = [
            (0.1, 0.049937526036242),
            (0.5, 0.24226845767487387),
            (1.0, 0.44005058574493355),
            (2.0, 0.5767248077568734),
            (4.0, -0.06604332802354912),
            (7.5, 0.13524842757970554),
            (11.9, -0.22898324966192404),
            (12.1, -0.21574897337692486),
            (20.0, 0.0668331241758502),
            (55.0, -0.07825003830868475),
            (120.0, -0.011805211433002331),
        ];
        for (x, want) in cases {
            assert_relative_eq!(bessel_j1(x), want, max_relative = 1e-11, epsilon = 1e-12);
        }
        assert_eq!(bessel_j1(0.0), 0.0);
        assert_relative_eq!(bessel_j1(-1.0), -0.44005058574493355, max_relative = 1e-12);
    }

    #[test]
    fn k0_k1_reference_values() {
        let cases = [
            (0.05, 3.1142340294719917, 19.909674325882506),
            (0.3, 1.3724600605442983, 3.055992033457325),
            (1.0, 0.42102443824070823, 0.6019072301972346),
            (1.9, 0.12884597927604755, 0.15966015303266756),
            (2.1, 0.10078374088996692, 0.1227464115335079),
            (5.0, 0.0036910983340425942, 0.004044613445452163),
            (20.0, 5.741237815336524e-10, 5.883057969557038e-10),
        ];
        for (x, k0, k1) in cases {
            assert_relative_eq!(bessel_k0(x), k0, max_relative = 1e-12);
            assert_relative_eq!(bessel_k1(x), k1, max_relative = 1e-12);
        }
    }

    #[test]
    fn scaled_k_survives_huge_arguments() {
        assert_relative_eq!(bessel_k0_scaled(100.0), 0.1251756216591266, max_relative = 1e-12);
        assert_relative_eq!(bessel_k1_scaled(100.0), 0.12579995047957854, max_relative = 1e-12);
        assert_relative_eq!(bessel_k0_scaled(600.0), 0.05115568572023597, max_relative = 1e-12);
        assert_relative_eq!(bessel_k1_scaled(600.0), 0.05119829772547244, max_relative = 1e-12);
        // far beyond the unscaled underflow point
        assert!(bessel_k0_scaled(5000.0).is_finite());
        assert!(bessel_k0_scaled(5000.0) > 0.0);
    }

    #[test]
    fn erfc_reference_values() {
        let cases = [
            (0.0, 1.0),
            (0.1, 0.8875370839817152),
            (0.5, 0.4795001221869535),
            (1.0, 0.15729920705028516),
            (2.0, 0.004677734981047266),
            (3.5, 7.430983723414129e-07),
            (-1.0, 1.8427007929497148),
        ];
        for (x, want) in cases {
            assert_relative_eq!(erfc(x), want, max_relative = 3e-7, epsilon = 1e-12);
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        // 16-point rule is exact through degree 31
        let nodes = gauss_legendre(16, 0.0, 2.0);
        let integral: f64 = nodes.iter().map(|&(x, w)| w * x.powi(9)).sum();
        assert_relative_eq!(integral, 2.0f64.powi(10) / 10.0, max_relative = 1e-13);
    }

    #[test]
    fn panel_integration_of_gaussian() {
        // ∫_-8^8 exp(-x²) dx = sqrt(pi) to machine precision
        let v = integrate_panels(|x| (-x * x).exp(), -8.0, 8.0, 32);
        assert_relative_eq!(v, PI.sqrt(), max_relative = 1e-12);
    }
}
