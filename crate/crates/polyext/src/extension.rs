//! The extension operator in spectral form, the fractional Laplacian, and
//! the weighted operators applied to extension fields.
//!
//! Everything is per-mode: an extension of order `alpha` restricted to the
//! mode `rho` is `u_hat(rho) m_alpha(y rho)`, and every derivative in play
//! reduces to the single recurrence `d/dt [t^nu K_nu(t)] = -t^nu K_{nu-1}(t)`.
//! Finite differences exist only as a cross-check path.

use crate::error::{Error, Result};
use crate::field::{
    eval_physical_origin, sphere_surface, ExtensionField, Family, RadialSpectralFunction,
    YLadder,
};
use crate::hankel::radial_kernel;
use crate::orders::{kappa, multiplier, poisson_normalizer};
use crate::quad::Quad1;
use crate::specfun::{gamma, kn_scaled};

/// `A_nu(t) = t^nu K_nu(t)` for `t > 0`; the index may be negative
/// (`K_{-nu} = K_nu`).
fn a_bessel(nu: f64, t: f64) -> f64 {
    let scale = (nu * t.ln() - t).exp();
    if scale == 0.0 {
        return 0.0;
    }
    scale * kn_scaled(nu.abs(), t)
}

// 2^{1-alpha}/Gamma(alpha), the normalizer making m_alpha(0) = 1
fn mult_norm(alpha: f64) -> f64 {
    2f64.powf(1.0 - alpha) / gamma(alpha).unwrap()
}

/// `m_alpha'(t) = -(2^{1-alpha}/Gamma(alpha)) t^alpha K_{alpha-1}(t)`;
/// `m'(0) = 0` by evenness.
pub fn multiplier_prime(alpha: f64, t: f64) -> Result<f64> {
    if !(alpha > 0.0) || t < 0.0 {
        return Err(Error::Inadmissible(format!(
            "multiplier needs alpha > 0, t >= 0; got {alpha}, {t}"
        )));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    Ok(-mult_norm(alpha) * t * a_bessel(alpha - 1.0, t))
}

/// `j`-th derivative of `t -> m_alpha(t)`. Analytic for `j <= 2 [alpha]`;
/// at `t = 0` the even Taylor limits are used exactly.
pub fn multiplier_deriv(alpha: f64, j: u32, t: f64) -> Result<f64> {
    if t == 0.0 {
        // odd orders vanish by evenness for every alpha; even orders are
        // the Taylor limits and need j/2 <= [alpha]
        if j % 2 == 1 {
            return Ok(0.0);
        }
        if j as f64 > 2.0 * alpha.floor() {
            return Err(Error::Inadmissible(format!(
                "derivative order {j} exceeds the smoothness 2[alpha] = {} at t = 0",
                2.0 * alpha.floor()
            )));
        }
        return kappa(alpha, j / 2);
    }
    if j == 0 {
        return multiplier(alpha, t);
    }
    // expand d^j/dt^j A_alpha in the basis t^p A_{alpha - l} using
    // d/dt [t^p A_nu] = p t^{p-1} A_nu - t^{p+1} A_{nu-1}
    let mut terms: Vec<(f64, i32, u32)> = vec![(1.0, 0, 0)];
    for _ in 0..j {
        let mut next: Vec<(f64, i32, u32)> = Vec::with_capacity(terms.len() + 1);
        for &(c, p, l) in &terms {
            if p != 0 {
                merge(&mut next, (c * p as f64, p - 1, l));
            }
            merge(&mut next, (-c, p + 1, l + 1));
        }
        terms = next;
    }
    let mut sum = 0.0;
    for &(c, p, l) in &terms {
        sum += c * t.powi(p) * a_bessel(alpha - l as f64, t);
    }
    Ok(mult_norm(alpha) * sum)
}

fn merge(terms: &mut Vec<(f64, i32, u32)>, item: (f64, i32, u32)) {
    for slot in terms.iter_mut() {
        if slot.1 == item.1 && slot.2 == item.2 {
            slot.0 += item.0;
            return;
        }
    }
    terms.push(item);
}

/// Per-mode profile `g(y) = m_alpha(y rho)` of an extension mode, with its
/// analytic derivatives.
#[derive(Debug, Clone, Copy)]
pub struct ModeProfile {
    pub alpha: f64,
    pub rho: f64,
}

impl ModeProfile {
    pub fn value(&self, y: f64) -> f64 {
        multiplier(self.alpha, y * self.rho).unwrap()
    }

    /// `d^j/dy^j g = rho^j m^{(j)}(y rho)`
    pub fn deriv(&self, j: u32, y: f64) -> Result<f64> {
        Ok(self.rho.powi(j as i32) * multiplier_deriv(self.alpha, j, y * self.rho)?)
    }
}

/// Extend a trace profile: `E_hat(rho, y) = u_hat(rho) m_alpha(y rho)`.
pub fn extend(u: &RadialSpectralFunction, alpha: f64, ladder: &YLadder) -> Result<ExtensionField> {
    if !(alpha > 0.0) {
        return Err(Error::Inadmissible(format!("alpha = {alpha} must be positive")));
    }
    let mut values = Vec::with_capacity(ladder.nodes.len());
    for &y in &ladder.nodes {
        let row = u
            .grid
            .nodes
            .iter()
            .zip(&u.values)
            .map(|(&rho, &uh)| uh * multiplier(alpha, y * rho).unwrap())
            .collect();
        values.push(row);
    }
    let b = 1.0 - 2.0 * (alpha - alpha.floor());
    Ok(ExtensionField { parent: u.clone(), ladder: ladder.clone(), values, alpha, b })
}

/// Fractional Laplacian as the spectral multiplier `rho^{two_s}`: the
/// exponent of `|xi|^{2s}` is passed explicitly.
pub fn frac_laplacian(u: &RadialSpectralFunction, two_s: f64) -> Result<RadialSpectralFunction> {
    if !(two_s > 0.0) {
        return Err(Error::Inadmissible(format!("exponent {two_s} must be positive")));
    }
    let values = u
        .grid
        .nodes
        .iter()
        .zip(&u.values)
        .map(|(&rho, &uh)| rho.powf(two_s) * uh)
        .collect();
    Ok(RadialSpectralFunction { grid: u.grid.clone(), values, family: Family::Derived })
}

/// Closed per-mode form of `(-Delta_b)^m` on an extension of order `alpha`:
/// `coeff * rho^{2m} u_hat * m_{alpha-m}(y rho)`, each step contributing
/// `(2 beta + b - 1)/(2 (beta - 1))`.
#[derive(Debug, Clone, Copy)]
pub struct IteratedMode {
    pub coeff: f64,
    pub order_drop: u32,
}

pub fn neg_delta_b_iterated(alpha: f64, b: f64, m: u32) -> Result<IteratedMode> {
    if m as f64 >= alpha && m > 0 {
        return Err(Error::Inadmissible(format!(
            "(-Delta_b)^{m} needs m < alpha = {alpha} on the analytic path"
        )));
    }
    let mut coeff = 1.0;
    for i in 0..m {
        let beta = alpha - i as f64;
        coeff *= (2.0 * beta + b - 1.0) / (2.0 * (beta - 1.0));
    }
    Ok(IteratedMode { coeff, order_drop: m })
}

impl IteratedMode {
    /// value of `(-Delta_b)^m E` on the mode `rho` at height `y`
    pub fn value(&self, alpha: f64, uhat: f64, rho: f64, y: f64) -> f64 {
        let beta = alpha - self.order_drop as f64;
        self.coeff
            * rho.powi(2 * self.order_drop as i32)
            * uhat
            * multiplier(beta, y * rho).unwrap()
    }

    /// `d/dy` of the same
    pub fn dy(&self, alpha: f64, uhat: f64, rho: f64, y: f64) -> f64 {
        let beta = alpha - self.order_drop as f64;
        self.coeff
            * rho.powi(2 * self.order_drop as i32 + 1)
            * uhat
            * multiplier_prime(beta, y * rho).unwrap()
    }
}

/// Derivative evaluation path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivPath {
    Analytic,
    FiniteDifference,
}

/// `Delta_b E` per mode on grid x ladder. The analytic path uses the
/// single-step recurrence; the finite-difference path stencils the stored
/// samples (interior ladder rows only, the two boundary rows are NaN).
pub fn delta_b_apply(field: &ExtensionField, b: f64, path: DerivPath) -> Result<Vec<Vec<f64>>> {
    let grid = &field.parent.grid;
    let ladder = &field.ladder;
    match path {
        DerivPath::Analytic => {
            let alpha = field.alpha;
            // Delta_b E = -(-Delta_b) E; the single step is written through
            // A_{alpha-1} so it also covers alpha < 1
            let mut out = Vec::with_capacity(ladder.nodes.len());
            for &y in &ladder.nodes {
                let row = grid
                    .nodes
                    .iter()
                    .zip(&field.parent.values)
                    .map(|(&rho, &uh)| {
                        -uh * rho
                            * rho
                            * (2.0 * alpha + b - 1.0)
                            * mult_norm(alpha)
                            * a_bessel(alpha - 1.0, y * rho)
                    })
                    .collect();
                out.push(row);
            }
            Ok(out)
        }
        DerivPath::FiniteDifference => {
            let decades = (ladder.nodes[ladder.nodes.len() - 1] / ladder.nodes[0]).log10();
            let density = ladder.nodes.len() as f64 / decades.max(1e-300);
            if density < 5.0 {
                return Err(Error::Inadmissible(format!(
                    "finite differences need >= 5 ladder nodes per decade, have {density:.2}"
                )));
            }
            let nj = ladder.nodes.len();
            let mut out = vec![vec![f64::NAN; grid.len()]; nj];
            for j in 1..nj - 1 {
                let (ym, y0, yp) = (ladder.nodes[j - 1], ladder.nodes[j], ladder.nodes[j + 1]);
                let (hm, hp) = (y0 - ym, yp - y0);
                for i in 0..grid.len() {
                    let (fm, f0, fp) =
                        (field.values[j - 1][i], field.values[j][i], field.values[j + 1][i]);
                    // nonuniform 3-point first and second derivatives
                    let d1 = (fp * hm * hm - fm * hp * hp + f0 * (hp * hp - hm * hm))
                        / (hm * hp * (hm + hp));
                    let d2 = 2.0 * (fm * hp - f0 * (hm + hp) + fp * hm) / (hm * hp * (hm + hp));
                    let rho = grid.nodes[i];
                    out[j][i] = -rho * rho * f0 + d2 + b * d1 / y0;
                }
            }
            Ok(out)
        }
    }
}

/// Pointwise energy density of the half-order operator tower:
/// even `k`: `|Delta_b^{k/2} E|^2`; odd `k`: `rho^2 |W|^2 + |d_y W|^2`
/// with `W = Delta_b^{(k-1)/2} E` (x-gradient in spectral form plus the
/// transverse gradient).
pub fn mode_energy_density(
    alpha: f64,
    b: f64,
    k: u32,
    uhat: f64,
    rho: f64,
    y: f64,
) -> Result<f64> {
    if k % 2 == 0 {
        let it = neg_delta_b_iterated(alpha, b, k / 2)?;
        let w = it.value(alpha, uhat, rho, y);
        Ok(w * w)
    } else {
        let it = neg_delta_b_iterated(alpha, b, (k - 1) / 2)?;
        let w = it.value(alpha, uhat, rho, y);
        let wy = it.dy(alpha, uhat, rho, y);
        Ok(rho * rho * w * w + wy * wy)
    }
}

/// Density matrix on grid x ladder (the dump-able artifact form).
pub fn polyharm_energy_density(field: &ExtensionField, k: u32, b: f64) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::with_capacity(field.ladder.nodes.len());
    for &y in &field.ladder.nodes {
        let mut row = Vec::with_capacity(field.parent.grid.len());
        for (&rho, &uh) in field.parent.grid.nodes.iter().zip(&field.parent.values) {
            row.push(mode_energy_density(field.alpha, b, k, uh, rho, y)?);
        }
        out.push(row);
    }
    Ok(out)
}

/// Per-mode `j`-th transverse derivative of the field at one height. The
/// field is smooth off the trace plane, so the regularity cap `j <= 2 [alpha]`
/// binds only at `y = 0`.
pub fn y_derivative(field: &ExtensionField, j: u32, y: f64) -> Result<Vec<f64>> {
    field
        .parent
        .grid
        .nodes
        .iter()
        .zip(&field.parent.values)
        .map(|(&rho, &uh)| Ok(uh * ModeProfile { alpha: field.alpha, rho }.deriv(j, y)?))
        .collect()
}

/// Spectral axis value
/// `E(0, y) = (2pi)^{-n/2} omega int u_hat m_alpha(y rho) rho^{n-1} drho`.
pub fn spectral_axis_value(u: &RadialSpectralFunction, alpha: f64, y: f64) -> f64 {
    let n = u.grid.n as f64;
    (2.0 * std::f64::consts::PI).powf(-n / 2.0)
        * u.radial_integral(0.0, |uh, rho| uh * multiplier(alpha, y * rho).unwrap())
}

/// Independent physical-side axis value by direct kernel quadrature:
/// `E(0, y) = c_{n,alpha} omega y^{2 alpha} int u(r) r^{n-1} (r^2+y^2)^{-(n+2 alpha)/2} dr`.
pub fn extend_axis_oracle(family: Family, n: u32, alpha: f64, y: f64) -> Result<f64> {
    let u = family.physical_profile(n).ok_or_else(|| {
        Error::Inadmissible(format!("family {family:?} has no closed physical profile"))
    })?;
    if !(y > 0.0) {
        return Err(Error::Inadmissible("axis oracle needs y > 0".into()));
    }
    let c = poisson_normalizer(n, alpha)?;
    let omega = sphere_surface(n);
    // nodes graded from y*1e-3 so the kernel's y-scale concentration is
    // resolved for any ladder height
    let mut q = Quad1::empty();
    let head = (y * 1e-3).min(1e-3);
    q.push_panel(0.0, head, 16);
    q.push_geometric(head, 40.0, 50, 16);
    let n2a = (n as f64 + 2.0 * alpha) / 2.0;
    let val = q.integrate(|r| u(r) * r.powi(n as i32 - 1) * (r * r + y * y).powf(-n2a));
    Ok(c * omega * y.powf(2.0 * alpha) * val)
}

/// Physical extension values `E(r, y)` through the radial inverse
/// transform, for x-space weighted integrals.
pub fn physical_extension_value(u: &RadialSpectralFunction, alpha: f64, r: f64, y: f64) -> f64 {
    let n = u.grid.n;
    if y == 0.0 {
        // trace: inverse transform of u_hat itself
        return (2.0 * std::f64::consts::PI).powf(-(n as f64) / 2.0)
            * u.radial_integral(0.0, |uh, rho| uh * radial_kernel(n, r * rho));
    }
    (2.0 * std::f64::consts::PI).powf(-(n as f64) / 2.0)
        * u.radial_integral(0.0, |uh, rho| {
            uh * multiplier(alpha, y.abs() * rho).unwrap() * radial_kernel(n, r * rho)
        })
}

/// Trace value `u(0)` recovered from the spectral profile; convenience
/// re-export for axis studies.
pub fn trace_origin(u: &RadialSpectralFunction) -> Result<f64> {
    eval_physical_origin(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_test_function, RhoGrid};

    fn gaussian(n: u32) -> RadialSpectralFunction {
        make_test_function(Family::Gaussian, RhoGrid::standard(n))
    }

    #[test]
    fn extend_closed_multiplier() {
        let u = gaussian(2);
        let ladder = YLadder::geometric(0.5, 2.0, 4);
        let field = extend(&u, 0.5, &ladder).unwrap();
        // E(rho, y) = e^{-rho^2/2} e^{-y rho}
        let y = ladder.nodes[2];
        for (i, &rho) in u.grid.nodes.iter().enumerate().step_by(37) {
            let want = (-0.5 * rho * rho).exp() * (-y * rho).exp();
            assert!((field.values[2][i] - want).abs() < 1e-13, "rho={rho}");
        }
        // trace slice is u_hat exactly; |E| <= |u_hat| everywhere
        assert_eq!(field.trace(), &u.values[..]);
        for row in &field.values {
            for (v, uh) in row.iter().zip(&u.values) {
                assert!(v.abs() <= uh.abs() + 1e-300);
            }
        }
        assert!(extend(&u, -0.5, &ladder).is_err());
    }

    #[test]
    fn frac_laplacian_composition() {
        let u = gaussian(2);
        let a = frac_laplacian(&u, 1.0).unwrap();
        let i = 150;
        let rho: f64 = u.grid.nodes[i];
        assert!((a.values[i] - rho * (-0.5 * rho * rho).exp()).abs() < 1e-14);
        // composition equals the combined exponent
        let b = frac_laplacian(&frac_laplacian(&u, 1.2).unwrap(), 0.8).unwrap();
        let c = frac_laplacian(&u, 2.0).unwrap();
        for (x, y) in b.values.iter().zip(&c.values) {
            assert!((x - y).abs() <= 1e-13 * y.abs().max(1e-300));
        }
    }

    #[test]
    fn multiplier_derivatives_closed_forms() {
        // m_{3/2}(t) = (1+t) e^{-t}: m' = -t e^{-t}, m'' = (t-1) e^{-t}
        for t in [0.05, 0.3, 1.0, 4.0] {
            let m1 = multiplier_prime(1.5, t).unwrap();
            assert!((m1 + t * (-t).exp()).abs() < 1e-13, "t={t}: {m1}");
            let m2 = multiplier_deriv(1.5, 2, t).unwrap();
            assert!((m2 - (t - 1.0) * (-t).exp()).abs() < 1e-12, "t={t}: {m2}");
            // m_{1/2} = e^{-t}: every derivative alternates sign
            let d3 = multiplier_deriv(0.5, 3, t).unwrap();
            assert!((d3 + (-t).exp()).abs() < 1e-11, "t={t}: {d3}");
        }
        // t = 0 limits through the Taylor coefficients
        assert_eq!(multiplier_deriv(1.5, 1, 0.0).unwrap(), 0.0);
        assert!((multiplier_deriv(1.5, 2, 0.0).unwrap() + 1.0).abs() < 1e-12);
        assert!(multiplier_deriv(0.7, 2, 0.0).is_err());
    }

    #[test]
    fn semigroup_relation_between_orders() {
        // t m_alpha'(t) = 2 alpha (m_{alpha+1}(t) - m_alpha(t)): the kernel
        // identity d_y P = 2 alpha y^{-1} (P_a - P_{a+1}) per mode
        for alpha in [0.3, 0.5, 1.5, 2.2] {
            for t in [0.01, 0.2, 1.0, 5.0, 20.0] {
                let lhs = t * multiplier_prime(alpha, t).unwrap();
                let rhs = 2.0
                    * alpha
                    * (multiplier(alpha, t).unwrap() - multiplier(alpha + 1.0, t).unwrap());
                assert!((lhs - rhs).abs() < 1e-10, "alpha={alpha}, t={t}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn iterated_operator_reproduces_lower_order_extension() {
        // (-Delta_b)^{[s]} E_s = (d_s/d_sigma) rho^{2[s]} u_hat m_sigma per
        // mode, coefficient and profile both
        use crate::orders::d_constant;
        for s in [1.5f64, 2.5, 2.2] {
            let b = 1.0 - 2.0 * (s - s.floor());
            let m = s.floor() as u32;
            let it = neg_delta_b_iterated(s, b, m).unwrap();
            let want = d_constant(s).unwrap() / d_constant(s - m as f64).unwrap();
            assert!((it.coeff - want).abs() < 1e-12 * want.abs(), "s={s}: {} vs {want}", it.coeff);
            for (rho, y) in [(0.5, 0.1), (2.0, 1.0), (7.0, 0.02)] {
                let got = it.value(s, 1.0, rho, y);
                let direct =
                    want * rho.powi(2 * m as i32) * multiplier(s - m as f64, y * rho).unwrap();
                assert!((got - direct).abs() <= 1e-8 * direct.abs().max(1e-12), "s={s}");
            }
        }
        assert!(neg_delta_b_iterated(1.5, 0.0, 2).is_err());
    }

    #[test]
    fn delta_b_analytic_limit_at_small_y() {
        // s = 3/2, b = 0: Delta_b E -> -2 rho^2 u_hat as y -> 0 (the limit
        // identity with d_{3/2}/d_{1/2} = 2)
        let u = gaussian(4);
        let ladder = YLadder::geometric(1e-6, 1.0, 10);
        let field = extend(&u, 1.5, &ladder).unwrap();
        let rows = delta_b_apply(&field, 0.0, DerivPath::Analytic).unwrap();
        for (i, &rho) in u.grid.nodes.iter().enumerate().step_by(61) {
            let want = -2.0 * rho * rho * u.values[i];
            // the limit converges like y*rho per mode
            let y0 = ladder.nodes[0];
            assert!(
                (rows[0][i] - want).abs() <= 1.5 * y0 * rho * want.abs() + 1e-12,
                "rho={rho}: {} vs {want}",
                rows[0][i]
            );
        }
    }

    #[test]
    fn delta_b_finite_difference_converges_second_order() {
        let u = gaussian(4);
        let coarse = YLadder::geometric(0.5, 2.0, 33);
        let fine = YLadder::geometric(0.5, 2.0, 65); // halved spacing
        let fc = extend(&u, 1.5, &coarse).unwrap();
        let ff = extend(&u, 1.5, &fine).unwrap();
        let a_c = delta_b_apply(&fc, 0.0, DerivPath::Analytic).unwrap();
        let d_c = delta_b_apply(&fc, 0.0, DerivPath::FiniteDifference).unwrap();
        let a_f = delta_b_apply(&ff, 0.0, DerivPath::Analytic).unwrap();
        let d_f = delta_b_apply(&ff, 0.0, DerivPath::FiniteDifference).unwrap();
        // coarse node 16 and fine node 32 are the same height
        assert!((coarse.nodes[16] - fine.nodes[32]).abs() < 1e-12);
        let i = 200;
        let ec = (d_c[16][i] - a_c[16][i]).abs();
        let ef = (d_f[32][i] - a_f[32][i]).abs();
        let ratio = ec / ef;
        assert!((2.8..5.5).contains(&ratio), "convergence ratio {ratio} ({ec} vs {ef})");
        // density precondition
        let sparse = YLadder::geometric(1e-4, 20.0, 10);
        let fs = extend(&u, 1.5, &sparse).unwrap();
        assert!(delta_b_apply(&fs, 0.0, DerivPath::FiniteDifference).is_err());
    }

    #[test]
    fn energy_density_closed_form() {
        // k=1, b=0, gaussian, alpha=1/2: density = 2 rho^2 e^{-rho^2} e^{-2 y rho}
        for (rho, y) in [(0.5, 0.2), (1.5, 1.0), (3.0, 0.05)] {
            let uh = (-0.5f64 * rho * rho).exp();
            let got = mode_energy_density(0.5, 0.0, 1, uh, rho, y).unwrap();
            let want = 2.0 * rho * rho * (-rho * rho).exp() * (-2.0 * y * rho).exp();
            assert!((got - want).abs() < 1e-12 * want, "rho={rho} y={y}");
        }
        // zero field -> 0; even k consistency with the squared application
        assert_eq!(mode_energy_density(1.5, 0.0, 2, 0.0, 1.0, 1.0).unwrap(), 0.0);
        let it = neg_delta_b_iterated(1.5, 0.0, 1).unwrap();
        let w = it.value(1.5, 0.7, 1.2, 0.4);
        let d = mode_energy_density(1.5, 0.0, 2, 0.7, 1.2, 0.4).unwrap();
        assert!((d - w * w).abs() < 1e-13 * d.abs());
    }

    #[test]
    fn y_derivative_reference() {
        let u = gaussian(2);
        let ladder = YLadder::standard();
        let field = extend(&u, 0.5, &ladder).unwrap();
        // alpha = 1/2: d_y e^{-y rho} = -rho e^{-y rho}
        let y = 0.37;
        let d = y_derivative(&field, 1, y).unwrap();
        for (i, &rho) in u.grid.nodes.iter().enumerate().step_by(97) {
            let want = -rho * (-y * rho).exp() * u.values[i];
            assert!((d[i] - want).abs() < 1e-12 * want.abs().max(1e-14), "rho={rho}");
        }
        // evenness at y = 0
        let d0 = y_derivative(&field, 1, 0.0).unwrap();
        assert!(d0.iter().all(|&v| v == 0.0));
        // the regularity cap binds only for even orders on the trace plane
        let f2 = extend(&u, 1.5, &ladder).unwrap();
        assert!(y_derivative(&f2, 3, 0.1).is_ok());
        assert!(y_derivative(&f2, 3, 0.0).unwrap().iter().all(|&v| v == 0.0));
        assert!(y_derivative(&f2, 4, 0.0).is_err());
        let d2 = y_derivative(&f2, 2, 0.0).unwrap();
        for (i, &rho) in u.grid.nodes.iter().enumerate().step_by(97) {
            let want = -rho * rho * u.values[i];
            assert!((d2[i] - want).abs() < 1e-11 * want.abs().max(1e-14));
        }
    }

    #[test]
    fn axis_paths_agree() {
        // spectral vs direct kernel quadrature on the axis
        for (n, alpha) in [(2u32, 0.5), (4, 1.5)] {
            let u = gaussian(n);
            for y in [0.01, 0.1, 1.0, 5.0] {
                let spectral = spectral_axis_value(&u, alpha, y);
                let physical = extend_axis_oracle(Family::Gaussian, n, alpha, y).unwrap();
                assert!(
                    (spectral - physical).abs() <= 1e-6 * physical.abs(),
                    "n={n} alpha={alpha} y={y}: {spectral} vs {physical}"
                );
            }
        }
        // y -> 0 limit recovers u(0) = 1
        let v = extend_axis_oracle(Family::Gaussian, 2, 0.5, 1e-5).unwrap();
        assert!((v - 1.0).abs() < 1e-3, "{v}");
    }

    #[test]
    fn physical_values_match_closed_form_on_trace() {
        // gaussian self-duality: E(r, 0) = e^{-r^2/2}
        let u = gaussian(4);
        for r in [0.0, 0.5, 1.5, 3.0] {
            let v = physical_extension_value(&u, 1.5, r, 0.0);
            assert!((v - (-0.5 * r * r).exp()).abs() < 1e-9, "r={r}: {v}");
        }
        // and on the axis it agrees with the spectral axis value
        let v = physical_extension_value(&u, 1.5, 0.0, 0.7);
        let w = spectral_axis_value(&u, 1.5, 0.7);
        assert!((v - w).abs() < 1e-12);
    }
}
