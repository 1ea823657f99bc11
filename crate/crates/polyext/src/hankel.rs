//! Oscillatory radial-transform machinery: Bessel `J_0`/`J_1`, their zeros,
//! Ogata-damped quadrature for Hankel and cosine transforms, and the radial
//! inverse-transform kernel `Omega_n`.
//!
//! The quadrature follows Ogata's construction: nodes ride the transformed
//! Bessel zeros `x_k = (pi/h) psi(h xi_k)` with `psi(t) = t tanh((pi/2) sinh t)`.
//! Once the map saturates, the nodes coincide with actual zeros of the kernel
//! and the tail terms vanish, so polynomially decaying integrands need no
//! explicit truncation.

/// `J_0(x)`: power series for `x <= 12`, Hankel asymptotic expansion beyond.
pub fn bessel_j0(x: f64) -> f64 {
    bessel_j(0, x.abs())
}

/// `J_1(x)` (odd in x).
pub fn bessel_j1(x: f64) -> f64 {
    let v = bessel_j(1, x.abs());
    if x < 0.0 { -v } else { v }
}

fn bessel_j(m: u32, x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x <= 12.0 {
        // the absolute-value sum of the terms is I_m(12) ~ 2e4, so the
        // alternating sum keeps ~12 digits at the split and improves fast
        // below it
        let half = 0.5 * x;
        let mut term = if m == 0 { 1.0 } else { half };
        let mut sum = term;
        for k in 1..60 {
            let kf = k as f64;
            term *= -half * half / (kf * (kf + m as f64));
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1e-30) {
                break;
            }
        }
        sum
    } else {
        let mu = 4.0 * (m * m) as f64;
        let (p, q) = hankel_pq(mu, x);
        let chi = x - (0.5 * m as f64 + 0.25) * std::f64::consts::PI;
        (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
    }
}

// Asymptotic amplitude series: a_k = prod_{j<=k} (mu - (2j-1)^2) / (k! 8^k x^k);
// P collects the even-k terms, Q the odd ones, signs alternating pairwise.
fn hankel_pq(mu: f64, x: f64) -> (f64, f64) {
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..30u32 {
        let kf = k as f64;
        term *= (mu - (2.0 * kf - 1.0) * (2.0 * kf - 1.0)) / (kf * 8.0 * x);
        if term.abs() >= prev {
            break; // the asymptotic series started diverging
        }
        prev = term.abs();
        let signed = if (k / 2) % 2 == 0 { term } else { -term };
        if k % 2 == 1 {
            q += signed;
        } else {
            p += signed;
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    (p, q)
}

/// First `count` positive zeros of `J_0`: McMahon expansion polished by
/// Newton steps (`J_0' = -J_1`).
pub fn j0_zeros(count: usize) -> Vec<f64> {
    let mut zeros = Vec::with_capacity(count);
    for k in 1..=count {
        let beta = (k as f64 - 0.25) * std::f64::consts::PI;
        let b2 = beta * beta;
        let mut x = beta + 1.0 / (8.0 * beta) * (1.0 - 31.0 / (48.0 * b2));
        for _ in 0..3 {
            let dx = bessel_j0(x) / bessel_j1(x);
            x += dx;
            if dx.abs() < 1e-15 * x {
                break;
            }
        }
        zeros.push(x);
    }
    zeros
}

fn psi(t: f64) -> f64 {
    let u = 0.5 * std::f64::consts::PI * t.sinh();
    if u > 40.0 { t } else { t * u.tanh() }
}

fn psi_prime(t: f64) -> f64 {
    let u = 0.5 * std::f64::consts::PI * t.sinh();
    if u > 40.0 {
        1.0
    } else {
        let sech = 1.0 / u.cosh();
        u.tanh() + t * 0.5 * std::f64::consts::PI * t.cosh() * sech * sech
    }
}

/// `int_0^inf f(x) J_0(x) dx` by the damped-node rule. The weights
/// `2/(pi j_k J_1(j_k)^2)` are the Wronskian form of `Y_0(j_k)/J_1(j_k)`.
pub fn ogata_j0(f: impl Fn(f64) -> f64, h: f64, count: usize) -> f64 {
    let zeros = j0_zeros(count);
    let pi = std::f64::consts::PI;
    let mut sum = 0.0;
    for &j in &zeros {
        let xi = j / pi;
        let x = pi / h * psi(h * xi);
        let w = 2.0 / (pi * j * bessel_j1(j).powi(2));
        sum += w * f(x) * bessel_j0(x) * psi_prime(h * xi);
    }
    pi * sum
}

/// `int_0^inf f(x) sin(x) dx`: the half-integer-order instance of the same
/// rule, where the kernel zeros are `pi k` and all weights are 1. Needs
/// `f(x) = O(x)` at the origin, the canonical behavior for order 1/2;
/// cosine transforms are integrated by parts onto this rule.
pub fn ogata_sin(f: impl Fn(f64) -> f64, h: f64, count: usize) -> f64 {
    let pi = std::f64::consts::PI;
    let mut sum = 0.0;
    for k in 1..=count {
        let xi = k as f64;
        let x = pi / h * psi(h * xi);
        sum += f(x) * x.sin() * psi_prime(h * xi);
    }
    pi * sum
}

/// Radial inverse-transform kernel, normalized to `Omega_n(0) = 1`:
/// `u(r) = (2pi)^{-n/2} omega_{n-1} int u_hat(rho) Omega_n(r rho) rho^{n-1} drho`
/// for radial functions on `R^n`.
///
/// `Omega_n(t) = Gamma(n/2) (2/t)^{n/2-1} J_{n/2-1}(t)`: power series for
/// small `t`, trigonometric and recurrence forms past the split.
pub fn radial_kernel(n: u32, t: f64) -> f64 {
    assert!((1..=8).contains(&n), "dimension out of the supported range");
    let t = t.abs();
    if t <= 12.0 {
        // Omega_n(t) = sum_k (-1)^k t^{2k} / (4^k k! (n/2)_k)
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 0..80 {
            let kf = k as f64;
            term *= -0.25 * t * t / ((kf + 1.0) * (kf + n as f64 / 2.0));
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1e-30) {
                break;
            }
        }
        sum
    } else if n % 2 == 1 {
        match n {
            1 => t.cos(),
            3 => t.sin() / t,
            5 => 3.0 * (t.sin() / t - t.cos()) / (t * t),
            7 => 15.0 * ((3.0 / (t * t) - 1.0) * t.sin() / t - 3.0 * t.cos() / (t * t)) / (t * t),
            _ => unreachable!(),
        }
    } else {
        // J_m by upward recurrence from J_0, J_1; stable here since t > m
        let m = n / 2 - 1;
        let mut jm = bessel_j0(t);
        let mut jp = bessel_j1(t);
        for i in 1..m {
            let next = 2.0 * i as f64 / t * jp - jm;
            jm = jp;
            jp = next;
        }
        let j = if m == 0 { jm } else { jp };
        crate::specfun::gamma(n as f64 / 2.0).unwrap() * (2.0 / t).powi(n as i32 / 2 - 1) * j
    }
}
