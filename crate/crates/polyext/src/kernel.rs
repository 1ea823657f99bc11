//! Physical-space Poisson kernels of fractional order and numerical
//! certification of their identities: unit mass, Fourier transform against
//! the Bessel multiplier, and the differential identities relating kernels
//! of neighbouring orders.
//!
//! Derivatives here are exact: the kernel family is closed under the
//! operators involved, so each side of an identity is expanded in the term
//! basis `c r^e y^{2 alpha + p} (r^2+y^2)^{-(n+2 alpha)/2 - q}` and the
//! residual isolates formula errors from discretization error.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::sphere_surface;
use crate::hankel;
use crate::orders::{multiplier, poisson_normalizer};
use crate::quad::{power_weight_quad, Quad1};
use crate::specfun::gamma_ratio;

/// Evaluation point of a kernel of order `alpha` in trace dimension `n`.
#[derive(Debug, Clone, Copy)]
pub struct KernelPoint {
    pub n: u32,
    pub alpha: f64,
    /// trace-plane radius `|x|`
    pub r: f64,
    /// height off the trace plane; must be nonzero
    pub y: f64,
}

/// `P^y_alpha(x) = c_{n,alpha} y^{2 alpha} (|x|^2 + y^2)^{-(n+2 alpha)/2}`.
pub fn poisson_eval(p: &KernelPoint) -> Result<f64> {
    if p.y == 0.0 {
        return Err(Error::Inadmissible("kernel is undefined on the trace plane".into()));
    }
    let c = poisson_normalizer(p.n, p.alpha)?;
    let n2a = (p.n as f64 + 2.0 * p.alpha) / 2.0;
    Ok(c * p.y.abs().powf(2.0 * p.alpha) * (p.r * p.r + p.y * p.y).powf(-n2a))
}

/// Total mass `omega_{n-1} int_0^inf P^y_alpha(r) r^{n-1} dr`; equals 1 for
/// every height. Computed at the given `y` on a y-independent angular grid
/// (`r = tan(theta)`), so agreement across heights is a genuine scaling
/// check rather than an algebraic identity of the quadrature.
pub fn kernel_mass_at(n: u32, alpha: f64, y: f64) -> Result<f64> {
    if !(alpha > 0.0) || y == 0.0 {
        return Err(Error::Inadmissible(format!("need alpha > 0, y != 0; got {alpha}, {y}")));
    }
    let c = poisson_normalizer(n, alpha)?;
    let omega = sphere_surface(n);
    let big_n = n as f64 + 2.0 * alpha;
    let y2 = y * y;
    // integrand(theta) = G(theta) cos^{2 alpha - 1}(theta) with smooth
    // G(theta) = omega c y^{2 alpha} (sin^2 + y^2 cos^2)^{-N/2} sin^{n-1}
    let g = |theta: f64| {
        let (s, co) = theta.sin_cos();
        omega
            * c
            * y.abs().powf(2.0 * alpha)
            * (s * s + y2 * co * co).powf(-big_n / 2.0)
            * s.powi(n as i32 - 1)
    };
    let half_pi = std::f64::consts::FRAC_PI_2;
    let quarter_pi = std::f64::consts::FRAC_PI_4;
    // [0, pi/4]: cosine factor regular there
    let mut plain = Quad1::empty();
    plain.push_panel(0.0, quarter_pi, 24);
    let mut total = plain.integrate(|th| g(th) * th.cos().powf(2.0 * alpha - 1.0));
    // [pi/4, pi/2]: substitute phi = pi/2 - theta and absorb phi^{2 alpha - 1}
    let q = power_weight_quad(2.0 * alpha - 1.0, quarter_pi, quarter_pi, 16, 16);
    total += q.integrate(|phi| {
        let theta = half_pi - phi;
        g(theta) * (phi.sin() / phi).powf(2.0 * alpha - 1.0)
    });
    Ok(total)
}

/// Mass at the reference height `y = 1`.
pub fn kernel_mass(n: u32, alpha: f64) -> Result<f64> {
    kernel_mass_at(n, alpha, 1.0)
}

// Step size for the damped oscillatory rules: the integrand's complex
// singularity sits at distance delta = y rho from the real axis, and the
// trig instance converges like (h/delta)^3.
fn ft_rule_params(delta: f64, trig: bool) -> (f64, usize) {
    let h = if trig { (delta / 220.0).min(0.002) } else { (delta / 130.0).min(0.002) };
    let count = (6.5 / h).ceil() as usize;
    (h, count)
}

/// Direct radial Fourier transform of the kernel against the closed
/// multiplier form: the max over `rho_samples` of
/// `|FT_quadrature - (2pi)^{-n/2} m_alpha(y rho)| * (2pi)^{n/2}`.
///
/// `n = 1` uses the cosine transform integrated by parts onto the sine
/// rule; `n = 2` the Hankel rule on the `J_0` kernel.
pub fn kernel_ft_check(n: u32, alpha: f64, rho_samples: &[f64], y: f64) -> Result<f64> {
    if !(y != 0.0 && alpha > 0.0) {
        return Err(Error::Inadmissible("need y != 0, alpha > 0".into()));
    }
    let c = poisson_normalizer(n, alpha)?;
    let y = y.abs();
    let mut worst: f64 = 0.0;
    for &rho in rho_samples {
        if !(rho > 0.0) {
            return Err(Error::Inadmissible(format!("rho sample {rho} must be positive")));
        }
        let delta = y * rho;
        let ft = match n {
            1 => {
                // int P cos(rho x) dx = -rho^{-2} int P'(u/rho) sin(u) du
                let (h, count) = ft_rule_params(delta, true);
                let dp = |x: f64| {
                    -c * (1.0 + 2.0 * alpha)
                        * y.powf(2.0 * alpha)
                        * x
                        * (x * x + y * y).powf(-(3.0 + 2.0 * alpha) / 2.0)
                };
                let i = -1.0 / (rho * rho) * hankel::ogata_sin(|u| dp(u / rho), h, count);
                (2.0 / std::f64::consts::PI).sqrt() * i
            }
            2 => {
                // int P(r) J0(rho r) r dr, scaled to unit frequency
                let (h, count) = ft_rule_params(delta, false);
                let p =
                    |r: f64| c * y.powf(2.0 * alpha) * (r * r + y * y).powf(-(1.0 + alpha));
                1.0 / (rho * rho) * hankel::ogata_j0(|u| p(u / rho) * u / rho, h, count) * rho
            }
            _ => {
                return Err(Error::Inadmissible(format!(
                    "direct transform path supports n in {{1, 2}}, got {n}"
                )))
            }
        };
        let expected =
            (2.0 * std::f64::consts::PI).powf(-(n as f64) / 2.0) * multiplier(alpha, delta)?;
        let resid = (ft - expected).abs() * (2.0 * std::f64::consts::PI).powf(n as f64 / 2.0);
        if !resid.is_finite() {
            return Err(Error::TailDominated(format!("transform at rho = {rho} did not converge")));
        }
        worst = worst.max(resid);
    }
    Ok(worst)
}

// --- exact term algebra ----------------------------------------------------

// Sum of terms c r^e y^{2 alpha + p} (r^2+y^2)^{-((n + 2 alpha)/2 + q)}
// attached to a fixed kernel order alpha; the operators below shift the
// exponents by integers, so terms merge exactly.
#[derive(Debug, Clone)]
struct TermSet {
    n: u32,
    alpha: f64,
    terms: BTreeMap<(i32, i32, i32), f64>,
}

impl TermSet {
    fn kernel(n: u32, alpha: f64) -> Result<TermSet> {
        let mut terms = BTreeMap::new();
        terms.insert((0, 0, 0), poisson_normalizer(n, alpha)?);
        Ok(TermSet { n, alpha, terms })
    }

    fn add(&mut self, key: (i32, i32, i32), c: f64) {
        if c != 0.0 {
            *self.terms.entry(key).or_insert(0.0) += c;
        }
    }

    fn empty_like(&self) -> TermSet {
        TermSet { n: self.n, alpha: self.alpha, terms: BTreeMap::new() }
    }

    fn radial_exponent(&self, q: i32) -> f64 {
        (self.n as f64 + 2.0 * self.alpha) / 2.0 + q as f64
    }

    fn d_r(&self) -> TermSet {
        let mut out = self.empty_like();
        for (&(e, p, q), &c) in &self.terms {
            out.add((e - 1, p, q), c * e as f64);
            out.add((e + 1, p, q + 1), -2.0 * c * self.radial_exponent(q));
        }
        out
    }

    fn d_y(&self) -> TermSet {
        let mut out = self.empty_like();
        for (&(e, p, q), &c) in &self.terms {
            out.add((e, p - 1, q), c * (2.0 * self.alpha + p as f64));
            out.add((e, p + 1, q + 1), -2.0 * c * self.radial_exponent(q));
        }
        out
    }

    // multiply by r^de y^dp
    fn shift(&self, de: i32, dp: i32) -> TermSet {
        let mut out = self.empty_like();
        for (&(e, p, q), &c) in &self.terms {
            out.add((e + de, p + dp, q), c);
        }
        out
    }

    fn scaled(&self, k: f64) -> TermSet {
        let mut out = self.empty_like();
        for (&key, &c) in &self.terms {
            out.add(key, k * c);
        }
        out
    }

    fn plus(&self, other: &TermSet) -> TermSet {
        let mut out = self.clone();
        for (&key, &c) in &other.terms {
            out.add(key, c);
        }
        out
    }

    fn delta_x(&self) -> TermSet {
        let dr = self.d_r();
        dr.d_r().plus(&dr.shift(-1, 0).scaled(self.n as f64 - 1.0))
    }

    fn delta_b(&self, b: f64) -> TermSet {
        let dy = self.d_y();
        self.delta_x().plus(&dy.d_y()).plus(&dy.shift(0, -1).scaled(b))
    }

    fn eval(&self, r: f64, y: f64) -> f64 {
        let g = r * r + y * y;
        let mut sum = 0.0;
        for (&(e, p, q), &c) in &self.terms {
            let re = if e == 0 { 1.0 } else { r.powi(e) };
            sum += c * re * y.powf(2.0 * self.alpha + p as f64) * g.powf(-self.radial_exponent(q));
        }
        sum
    }
}

/// Which kernel identity to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelIdentity {
    /// `d_y P_alpha = 2 alpha y^{-1} (P_alpha - P_{alpha+1})`
    FirstDy,
    /// `Delta_b P_alpha = 2 alpha (b - 1 + 2 alpha) y^{-2} (P_alpha - P_{alpha+1})`
    FirstDeltaB,
    /// `d_y P_alpha = y Delta_x P_{alpha-1} / (2 (alpha - 1))`, `alpha > 1`
    Second,
    /// `Delta_b^m P_alpha = ratio * Delta_x^m P_{alpha-m}`, `1 <= m < alpha`
    Third { m: u32 },
}

/// Absolute residual `|LHS - RHS|` of a kernel identity at a point, with
/// both sides expanded analytically.
pub fn r1_residual(
    which: KernelIdentity,
    n: u32,
    alpha: f64,
    b: f64,
    r: f64,
    y: f64,
) -> Result<f64> {
    if y == 0.0 {
        return Err(Error::Inadmissible("identities hold off the trace plane".into()));
    }
    let base = TermSet::kernel(n, alpha)?;
    match which {
        KernelIdentity::FirstDy => {
            let lhs = base.d_y().eval(r, y);
            let upper = TermSet::kernel(n, alpha + 1.0)?;
            let rhs = 2.0 * alpha / y * (base.eval(r, y) - upper.eval(r, y));
            Ok((lhs - rhs).abs())
        }
        KernelIdentity::FirstDeltaB => {
            let lhs = base.delta_b(b).eval(r, y);
            let upper = TermSet::kernel(n, alpha + 1.0)?;
            let rhs = 2.0 * alpha * (b - 1.0 + 2.0 * alpha) / (y * y)
                * (base.eval(r, y) - upper.eval(r, y));
            Ok((lhs - rhs).abs())
        }
        KernelIdentity::Second => {
            if !(alpha > 1.0) {
                return Err(Error::Inadmissible(format!("identity needs alpha > 1, got {alpha}")));
            }
            let lhs = base.d_y().eval(r, y);
            let lower = TermSet::kernel(n, alpha - 1.0)?;
            let rhs = y / (2.0 * (alpha - 1.0)) * lower.delta_x().eval(r, y);
            Ok((lhs - rhs).abs())
        }
        KernelIdentity::Third { m } => {
            if !(m >= 1 && (m as f64) < alpha) {
                return Err(Error::Inadmissible(format!(
                    "identity needs 1 <= m < alpha, got m = {m}"
                )));
            }
            let mut lhs_set = base;
            for _ in 0..m {
                lhs_set = lhs_set.delta_b(b);
            }
            let mut rhs_set = TermSet::kernel(n, alpha - m as f64)?;
            for _ in 0..m {
                rhs_set = rhs_set.delta_x();
            }
            let half_b1 = (b + 1.0) / 2.0;
            let ratio = gamma_ratio(half_b1 + alpha, half_b1 + alpha - m as f64)?
                * gamma_ratio(alpha - m as f64, alpha)?;
            Ok((lhs_set.eval(r, y) - ratio * rhs_set.eval(r, y)).abs())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn poisson_reference_values() {
        let v = poisson_eval(&KernelPoint { n: 2, alpha: 0.5, r: 0.0, y: 1.0 }).unwrap();
        assert!((v - 1.0 / (2.0 * PI)).abs() < 1e-14);
        let v = poisson_eval(&KernelPoint { n: 1, alpha: 0.5, r: 0.0, y: 1.0 }).unwrap();
        assert!((v - 1.0 / PI).abs() < 1e-14);
        // scaling: P^2(2) = (1/4) P^1(1) for n = 2
        let v = poisson_eval(&KernelPoint { n: 2, alpha: 0.5, r: 2.0, y: 2.0 }).unwrap();
        let w = poisson_eval(&KernelPoint { n: 2, alpha: 0.5, r: 1.0, y: 1.0 }).unwrap();
        assert!((v - w / 4.0).abs() < 1e-15);
        // exact value 8^{-3/2}/pi = 0.014067433...
        assert!((v - 8f64.powf(-1.5) / PI).abs() < 1e-16);
        assert!((v - 0.0140674).abs() < 1e-7);
        assert!(poisson_eval(&KernelPoint { n: 2, alpha: 0.5, r: 1.0, y: 0.0 }).is_err());
    }

    #[test]
    fn kernel_scaling_law() {
        // P^y(r) y^n = P^1(r/y) on a lattice
        for alpha in [0.3, 0.8, 1.5] {
            for r in [0.0, 0.5, 2.0] {
                for y in [0.25, 1.0, 3.0] {
                    let a =
                        poisson_eval(&KernelPoint { n: 3, alpha, r, y }).unwrap() * y.powi(3);
                    let b =
                        poisson_eval(&KernelPoint { n: 3, alpha, r: r / y, y: 1.0 }).unwrap();
                    assert!((a - b).abs() <= 1e-14 * b.abs(), "alpha={alpha} r={r} y={y}");
                }
            }
        }
    }

    #[test]
    fn kernel_radial_monotonicity() {
        let mut prev = f64::INFINITY;
        for i in 0..30 {
            let r = 0.1 * i as f64;
            let v = poisson_eval(&KernelPoint { n: 2, alpha: 0.75, r, y: 1.0 }).unwrap();
            assert!(v > 0.0 && v < prev);
            prev = v;
        }
    }

    #[test]
    fn unit_mass() {
        for (n, alpha) in [(2, 0.5), (4, 1.5), (3, 0.8), (1, 0.3), (2, 2.5)] {
            let m = kernel_mass(n, alpha).unwrap();
            assert!((m - 1.0).abs() < 1e-10, "n={n}, alpha={alpha}: {m}");
        }
    }

    #[test]
    fn mass_is_height_independent() {
        for (n, alpha) in [(2, 0.5), (3, 1.2)] {
            let m1 = kernel_mass_at(n, alpha, 1.0).unwrap();
            let m3 = kernel_mass_at(n, alpha, 3.0).unwrap();
            assert!((m1 - m3).abs() < 1e-10, "n={n}, alpha={alpha}: {m1} vs {m3}");
        }
    }

    #[test]
    fn fourier_transform_closed_forms() {
        let samples = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0];
        // m_{1/2} = e^{-t} and m_{3/2} = (1+t) e^{-t}: classical kernels
        let r = kernel_ft_check(1, 0.5, &samples, 1.0).unwrap();
        assert!(r < 1e-6, "n=1 alpha=0.5: {r}");
        let r = kernel_ft_check(2, 1.5, &samples, 1.0).unwrap();
        assert!(r < 1e-6, "n=2 alpha=1.5: {r}");
        let r = kernel_ft_check(2, 0.7, &samples, 0.5).unwrap();
        assert!(r < 1e-6, "n=2 alpha=0.7: {r}");
        assert!(kernel_ft_check(3, 0.5, &samples, 1.0).is_err());
    }

    #[test]
    fn identity_residuals() {
        // reference lattice points
        let r = r1_residual(KernelIdentity::FirstDy, 2, 0.7, -0.4, 1.0, 0.5).unwrap();
        assert!(r <= 1e-10, "{r}");
        let r = r1_residual(KernelIdentity::Second, 2, 1.5, 0.0, 0.5, 1.0).unwrap();
        assert!(r <= 1e-10, "{r}");
        let r = r1_residual(KernelIdentity::Third { m: 1 }, 4, 1.5, 0.0, 1.0, 1.0).unwrap();
        assert!(r <= 1e-10, "{r}");
        // a denser sweep across all four identities; tolerance is looser
        // because intermediate terms reach ~1e6 near the origin and the
        // residual is absolute
        for &alpha in &[0.7, 1.3, 2.5] {
            for &b in &[-0.5, 0.0, 0.6] {
                for &(r0, y0) in &[(0.3, 0.4), (1.0, 1.0), (2.0, 0.2)] {
                    let v = r1_residual(KernelIdentity::FirstDy, 3, alpha, b, r0, y0).unwrap();
                    assert!(v <= 1e-9, "i_dy alpha={alpha} b={b}: {v}");
                    let v =
                        r1_residual(KernelIdentity::FirstDeltaB, 3, alpha, b, r0, y0).unwrap();
                    assert!(v <= 1e-9, "i_db alpha={alpha} b={b}: {v}");
                    if alpha > 1.0 {
                        let v =
                            r1_residual(KernelIdentity::Second, 3, alpha, b, r0, y0).unwrap();
                        assert!(v <= 1e-9, "ii alpha={alpha}: {v}");
                    }
                    let max_m = ((alpha.ceil() as u32).saturating_sub(1)).min(2);
                    for m in 1..=max_m {
                        let v =
                            r1_residual(KernelIdentity::Third { m }, 3, alpha, b, r0, y0).unwrap();
                        assert!(v <= 1e-9, "iii alpha={alpha} b={b} m={m}: {v}");
                    }
                }
            }
        }
        // preconditions
        assert!(r1_residual(KernelIdentity::Second, 2, 0.7, 0.0, 1.0, 1.0).is_err());
        assert!(r1_residual(KernelIdentity::Third { m: 2 }, 2, 1.5, 0.0, 1.0, 1.0).is_err());
        assert!(r1_residual(KernelIdentity::FirstDy, 2, 0.7, 0.0, 1.0, 0.0).is_err());
    }
}
