//! Fractional-order bookkeeping and the closed-form constants of the
//! theory: the energy constant `d_s`, Taylor coefficients `kappa_{s,m}`,
//! the Poisson normalizer `c_{n,alpha}`, weighted Hardy constants, the
//! Fourier multiplier of the extension kernel and the boundary deficit.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{self, factorial, gamma, gamma_ratio};

/// Validated fractional order `0 < s < n/2`, `s` not an integer, together
/// with its derived quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FractionalOrder {
    /// ambient trace dimension
    pub n: u32,
    /// fractional order
    pub s: f64,
    /// integer part `[s]`
    pub int_part: u32,
    /// fractional part `sigma = s - [s]`, in `(0, 1)`
    pub frac: f64,
    /// weight exponent `b = 1 - 2 sigma`, in `(-1, 1)`
    pub b: f64,
}

impl FractionalOrder {
    /// Order of the extension operator tower, `1 + [s]`.
    pub fn operator_order(&self) -> u32 {
        1 + self.int_part
    }
}

/// Construct and validate a [`FractionalOrder`].
pub fn make_order(n: u32, s: f64) -> Result<FractionalOrder> {
    if n < 1 {
        return Err(Error::InvalidOrder(format!("dimension n = {n} must be >= 1")));
    }
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::InvalidOrder(format!("s = {s} must be positive")));
    }
    if s == s.floor() {
        return Err(Error::InvalidOrder(format!("s = {s} must not be an integer")));
    }
    if s >= n as f64 / 2.0 {
        return Err(Error::InvalidOrder(format!("s = {s} violates s < n/2 = {}", n as f64 / 2.0)));
    }
    let int_part = s.floor() as u32;
    let frac = s - int_part as f64;
    Ok(FractionalOrder { n, s, int_part, frac, b: 1.0 - 2.0 * frac })
}

/// Parameters of the weighted Hardy inequality: derivative order `k`,
/// radial weight exponent `a`, transverse weight exponent `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HardyParams {
    pub n: u32,
    pub k: u32,
    pub a: f64,
    pub b: f64,
}

impl HardyParams {
    /// Admissibility: `-1 < b < 1` and `0 <= a < (n+1+b)/2 - k`.
    pub fn new(n: u32, k: u32, a: f64, b: f64) -> Result<Self> {
        if !(-1.0 < b && b < 1.0) {
            return Err(Error::Inadmissible(format!("b = {b} outside (-1, 1)")));
        }
        if k < 1 {
            return Err(Error::Inadmissible("k must be >= 1".into()));
        }
        let bound = (n as f64 + 1.0 + b) / 2.0 - k as f64;
        if !(0.0 <= a && a < bound) {
            return Err(Error::Inadmissible(format!(
                "a = {a} outside [0, {bound}) for n = {n}, k = {k}, b = {b}"
            )));
        }
        Ok(HardyParams { n, k, a, b })
    }
}

/// The dimension-free energy constant
/// `d_s = ([s]!/Gamma(s)) * 2 Gamma(1-sigma) / 2^(2 sigma)`.
pub fn d_constant(s: f64) -> Result<f64> {
    if !(s > 0.0) || s == s.floor() {
        return Err(Error::InvalidOrder(format!("d_s needs non-integer s > 0, got {s}")));
    }
    let int_part = s.floor();
    let sigma = s - int_part;
    Ok(factorial(int_part as u32) / gamma(s)? * 2.0 * gamma(1.0 - sigma)?
        / 2f64.powf(2.0 * sigma))
}

fn binomial(m: u32, l: u32) -> Result<f64> {
    // floating binomial through Gamma ratios, uniform in m
    Ok(gamma_ratio(m as f64 + 1.0, l as f64 + 1.0)? / gamma((m - l) as f64 + 1.0)?)
}

/// Taylor coefficient `kappa_{s,m}` of the extension in the transverse
/// variable. `kappa_{s,0} = 1` exactly; for `m >= 1`,
/// `kappa_{s,m} = (Gamma(s+1/2)/Gamma(s)) * sum_l C(m,l) (-1)^l Gamma(s-l)/Gamma(s+1/2-l)`.
pub fn kappa(s: f64, m: u32) -> Result<f64> {
    if m == 0 {
        return Ok(1.0);
    }
    if !(s > 1.0) || s == s.floor() || m as f64 > s.floor() {
        return Err(Error::Inadmissible(format!("kappa needs 1 <= m <= [s], got s = {s}, m = {m}")));
    }
    let mut sum = 0.0;
    for l in 0..=m {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        sum += binomial(m, l)? * sign * gamma_ratio(s - l as f64, s + 0.5 - l as f64)?;
    }
    Ok(gamma_ratio(s + 0.5, s)? * sum)
}

/// Poisson kernel normalizer `c_{n,alpha} = Gamma((n+2 alpha)/2) / (pi^{n/2} Gamma(alpha))`,
/// chosen so the kernel has unit mass.
pub fn poisson_normalizer(n: u32, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::Inadmissible(format!("alpha = {alpha} must be positive")));
    }
    Ok(gamma_ratio((n as f64 + 2.0 * alpha) / 2.0, alpha)?
        / std::f64::consts::PI.powf(n as f64 / 2.0))
}

/// Weighted Hardy constant `H_{k,a,b}` (the four-Gamma product).
pub fn hardy_constant(p: HardyParams) -> Result<f64> {
    let q = (p.n as f64 + 1.0 + p.b) / 4.0;
    let half_k = p.k as f64 / 2.0;
    // k/2 - [k/2]: 0 for even k, 1/2 for odd k
    let h = half_k - (p.k / 2) as f64;
    let r1 = gamma_ratio(q + h - p.a / 2.0, q + h + p.a / 2.0)?;
    let r2 = gamma_ratio(q + half_k + p.a / 2.0, q - half_k - p.a / 2.0)?;
    Ok(2f64.powi(p.k as i32) * r1 * r2)
}

/// Fourier multiplier of the extension kernel,
/// `m_alpha(t) = (2^(1-alpha)/Gamma(alpha)) t^alpha K_alpha(t)`, with the
/// removable limit `m_alpha(0) = 1` taken exactly.
pub fn multiplier(alpha: f64, t: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::Inadmissible(format!("alpha = {alpha} must be positive")));
    }
    if t < 0.0 {
        return Err(Error::BesselDomain(t));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    let scale = (alpha * t.ln() - t).exp();
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok(2f64.powf(1.0 - alpha) / gamma(alpha)? * scale * specfun::kn_scaled(alpha, t))
}

/// Which boundary-limit deficit to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DeficitKind {
    /// deficit of the weighted conormal derivative: `1 - m_{1-alpha}(t)`
    Neumann,
    /// deficit of the value limit: `1 - m_alpha(t)`
    Dirichlet,
}

/// Boundary deficit `Phi_alpha(t)`: vanishes at `t = 0`, tends to 1 at
/// infinity.
pub fn dtn_deficit(alpha: f64, t: f64, kind: DeficitKind) -> Result<f64> {
    match kind {
        DeficitKind::Neumann => {
            if !(0.0 < alpha && alpha < 1.0) {
                return Err(Error::Inadmissible(format!(
                    "Neumann deficit needs alpha in (0,1), got {alpha}"
                )));
            }
            Ok(1.0 - multiplier(1.0 - alpha, t)?)
        }
        DeficitKind::Dirichlet => Ok(1.0 - multiplier(alpha, t)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_construction() {
        let o = make_order(4, 1.5).unwrap();
        assert_eq!(o.int_part, 1);
        assert_eq!(o.frac, 0.5);
        assert_eq!(o.b, 0.0);
        assert_eq!(o.operator_order(), 2);

        let o = make_order(2, 0.75).unwrap();
        assert_eq!(o.int_part, 0);
        assert!((o.frac - 0.75).abs() < 1e-15);
        assert!((o.b + 0.5).abs() < 1e-15);

        assert!(make_order(2, 1.2).is_err()); // s >= n/2
        assert!(make_order(4, 1.0).is_err()); // integer
        assert!(make_order(4, -0.5).is_err());
        assert!(make_order(0, 0.5).is_err());

        // b = 0 exactly when s + 1/2 is an integer
        for s in [0.5, 1.5, 2.5] {
            assert_eq!(make_order(8, s).unwrap().b, 0.0);
        }
        for s in [0.3, 0.75, 2.2] {
            assert!(make_order(8, s).unwrap().b != 0.0);
        }
    }

    #[test]
    fn d_constant_reference_values() {
        // substituted into the defining formula with exact Gamma values:
        // d_{1/2} = 1, d_{3/2} = 2, d_{5/2} = 8/3
        assert!((d_constant(0.5).unwrap() - 1.0).abs() < 1e-13);
        assert!((d_constant(1.5).unwrap() - 2.0).abs() < 1e-13);
        assert!((d_constant(2.5).unwrap() - 8.0 / 3.0).abs() < 1e-13);
        assert!(d_constant(2.0).is_err());
    }

    #[test]
    fn kappa_reference_values() {
        assert_eq!(kappa(1.5, 0).unwrap(), 1.0);
        assert_eq!(kappa(0.3, 0).unwrap(), 1.0);
        // symbolic simplification kappa_{s,1} = 1/(2(1-s))
        assert!((kappa(1.5, 1).unwrap() + 1.0).abs() < 1e-13);
        assert!((kappa(2.5, 1).unwrap() + 1.0 / 3.0).abs() < 1e-13);
        for s in [1.3, 1.9, 2.7, 3.4] {
            let expect = 1.0 / (2.0 * (1.0 - s));
            assert!((kappa(s, 1).unwrap() - expect).abs() < 1e-12, "s={s}");
        }
        assert!((kappa(2.5, 2).unwrap() - 1.0).abs() < 1e-12);
        assert!(kappa(1.5, 2).is_err());
    }

    // Eliminate the h and h^2 error terms of a central-difference estimate.
    // The even extension of m_s has an odd |t|^3-type term past the Taylor
    // order, so the difference quotients carry a genuine O(h) error that a
    // single Richardson step would miss.
    fn richardson2(d: impl Fn(f64) -> f64, h: f64) -> f64 {
        let e = |h: f64| 2.0 * d(h / 2.0) - d(h);
        (4.0 * e(h / 2.0) - e(h)) / 3.0
    }

    #[test]
    fn kappa_matches_multiplier_taylor_coefficients() {
        // Only half-integer orders are probed: there the multiplier is
        // entire, so the classical truncation estimates apply.
        let h = 0.05;
        for s in [1.5, 2.5] {
            let m = move |t: f64| multiplier(s, t).unwrap();
            let d2 = richardson2(|h| 2.0 * (m(h) - 1.0) / (h * h), h);
            let k1 = kappa(s, 1).unwrap();
            assert!((d2 / 2.0 - k1 / 2.0).abs() < 1e-6, "s={s}: {d2}");
        }
        let m = |t: f64| multiplier(2.5, t).unwrap();
        let d4 = richardson2(|h| (2.0 * m(2.0 * h) - 8.0 * m(h) + 6.0) / h.powi(4), h);
        let k2 = kappa(2.5, 2).unwrap();
        assert!((d4 / 24.0 - k2 / 24.0).abs() < 1e-6, "{d4}");
    }

    #[test]
    fn poisson_normalizer_values() {
        let pi = std::f64::consts::PI;
        assert!((poisson_normalizer(1, 0.5).unwrap() - 1.0 / pi).abs() < 1e-14);
        assert!((poisson_normalizer(2, 0.5).unwrap() - 1.0 / (2.0 * pi)).abs() < 1e-14);
        assert!((poisson_normalizer(2, 1.0).unwrap() - 1.0 / pi).abs() < 1e-14);
    }

    #[test]
    fn hardy_constant_matches_elementary_reductions() {
        // k = 1: H = (n+1+b)/2 - (a+1); k = 2: H = (H1 - 1)((n+1+b)/2 + a)
        for n in [2u32, 3, 4, 6] {
            for &b in &[-0.6, -0.2, 0.0, 0.4, 0.8] {
                for &a in &[0.0, 0.3, 0.7] {
                    if let Ok(p) = HardyParams::new(n, 1, a, b) {
                        let h1 = (n as f64 + 1.0 + b) / 2.0 - (a + 1.0);
                        let got = hardy_constant(p).unwrap();
                        assert!((got - h1).abs() < 1e-10 * h1.max(1.0), "k=1 n={n} a={a} b={b}");
                    }
                    if let Ok(p) = HardyParams::new(n, 2, a, b) {
                        let h1 = (n as f64 + 1.0 + b) / 2.0 - (a + 1.0);
                        let h2 = (h1 - 1.0) * ((n as f64 + 1.0 + b) / 2.0 + a);
                        let got = hardy_constant(p).unwrap();
                        assert!((got - h2).abs() < 1e-10 * h2.abs().max(1.0), "k=2 n={n} a={a} b={b}");
                    }
                }
            }
        }
        let p = HardyParams::new(2, 1, 0.0, 0.0).unwrap();
        assert!((hardy_constant(p).unwrap() - 0.5).abs() < 1e-12);
        let p = HardyParams::new(4, 2, 0.0, 0.0).unwrap();
        assert!((hardy_constant(p).unwrap() - 1.25).abs() < 1e-12);
        let p = HardyParams::new(4, 2, 0.0, 0.5).unwrap();
        assert!((hardy_constant(p).unwrap() - 2.0625).abs() < 1e-12);
        assert!(HardyParams::new(2, 1, 0.5, -0.4).is_err());
    }

    #[test]
    fn multiplier_closed_forms() {
        // m_{1/2}(t) = e^{-t}, m_{3/2}(t) = (1+t) e^{-t}
        for t in [0.01, 0.3, 1.0, 4.0, 20.0] {
            assert!((multiplier(0.5, t).unwrap() - (-t).exp()).abs() < 1e-12);
            assert!((multiplier(1.5, t).unwrap() - (1.0 + t) * (-t).exp()).abs() < 1e-12);
        }
        assert_eq!(multiplier(0.7, 0.0).unwrap(), 1.0);
        assert!((multiplier(0.5, 1.0).unwrap() - 0.3678794).abs() < 1e-7);
        assert!((multiplier(1.5, 1.0).unwrap() - 0.7357589).abs() < 1e-7);
    }

    #[test]
    fn multiplier_bounded_and_decreasing() {
        for alpha in [0.25, 0.5, 0.9, 1.5, 2.5, 3.7] {
            let mut prev = 1.0;
            for i in 0..60 {
                let t = 1e-3 * 1.25f64.powi(i);
                let v = multiplier(alpha, t).unwrap();
                assert!(v > 0.0 && v <= 1.0 && v < prev, "alpha={alpha}, t={t}");
                prev = v;
            }
        }
    }

    #[test]
    fn deficit_properties() {
        // closed forms at sigma = 1/2
        assert!((dtn_deficit(0.5, 1.0, DeficitKind::Neumann).unwrap() - (1.0 - (-1f64).exp())).abs() < 1e-12);
        assert!(
            (dtn_deficit(1.5, 1.0, DeficitKind::Dirichlet).unwrap() - (1.0 - 2.0 / std::f64::consts::E))
                .abs()
                < 1e-12
        );
        // Phi(0+) = 0 (the approach is only O(t^{2(1-alpha)})), Phi -> 1
        for alpha in [0.2, 0.5, 0.8] {
            assert!(dtn_deficit(alpha, 1e-12, DeficitKind::Neumann).unwrap().abs() < 1e-4);
            assert!((dtn_deficit(alpha, 60.0, DeficitKind::Neumann).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(dtn_deficit(1.5, 1.0, DeficitKind::Neumann).is_err());
        // Dirichlet deficit is 1 - multiplier, pointwise
        for t in [0.0, 0.2, 2.0, 9.0] {
            let d = dtn_deficit(0.75, t, DeficitKind::Dirichlet).unwrap();
            assert_eq!(d, 1.0 - multiplier(0.75, t).unwrap());
        }
    }
}
