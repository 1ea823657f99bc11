//! Grids, radial-spectral test functions, extension fields and the `v1`
//! field file format.
//!
//! Everything here is radial: a trace function on `R^n` is represented by
//! its spectral profile `u_hat(rho)` on a half-line quadrature grid, and an
//! extension field by per-mode samples on the grid times a geometric ladder
//! of heights. The ambient dimension only enters through the surface factor
//! `omega_{n-1} rho^{n-1}` of the radial measure.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::quad::{self, Quad1};
use crate::specfun::gamma;

/// Half-line quadrature grid for spectral integrals `int_0^inf ... drho`.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// ambient trace dimension
    pub n: u32,
    /// surface measure of the unit sphere, `2 pi^{n/2} / Gamma(n/2)`
    pub surface: f64,
    pub rho_min: f64,
    pub rho_max: f64,
}

pub fn sphere_surface(n: u32) -> f64 {
    2.0 * std::f64::consts::PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0).unwrap()
}

impl RhoGrid {
    /// Composite Gauss-Legendre on geometrically graded panels over
    /// `[rho_min, rho_max]`, closed by a head panel `[0, rho_min]`.
    pub fn with_resolution(n: u32, rho_min: f64, rho_max: f64, panels: usize, order: usize) -> Self {
        let q = quad::halfline_quad(rho_min, rho_max, panels, order);
        RhoGrid {
            nodes: q.nodes,
            weights: q.weights,
            n,
            surface: sphere_surface(n),
            rho_min,
            rho_max,
        }
    }

    /// Default resolution: covers `[1e-4, 40]`, where Gaussian-family tails
    /// are below 1e-14.
    pub fn standard(n: u32) -> Self {
        Self::with_resolution(n, 1e-4, 40.0, 30, 16)
    }

    /// Same span at doubled panel count, for refinement checks.
    pub fn refined(n: u32) -> Self {
        Self::with_resolution(n, 1e-4, 40.0, 60, 16)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `int_0^inf f(rho) drho`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// `int_0^inf rho^p f(rho) drho`. Negative powers (still integrable)
    /// are routed through a singularity-absorbing rule instead of the
    /// plain grid.
    pub fn integrate_moment(&self, p: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
        if p <= -1.0 {
            return Err(Error::Inadmissible(format!("rho^{p} is not integrable at 0")));
        }
        if p >= 0.0 {
            Ok(self.integrate(|r| r.powf(p) * f(r)))
        } else {
            let q = quad::power_weight_quad(p, 1.0, self.rho_max, 24, 16);
            Ok(q.integrate(f))
        }
    }
}

/// Weighted transverse integral `int_0^{y_max} y^b f(y) dy`, `b > -1`.
pub fn y_weighted_integral(b: f64, y_max: f64, f: impl Fn(f64) -> f64) -> f64 {
    let q = y_weighted_quad(b, y_max);
    q.integrate(f)
}

pub fn y_weighted_quad(b: f64, y_max: f64) -> Quad1 {
    quad::power_weight_quad(b, y_max.min(1.0), y_max, 20, 16)
}

/// Geometric ladder of heights for boundary-limit studies.
#[derive(Debug, Clone, PartialEq)]
pub struct YLadder {
    /// strictly increasing positive heights
    pub nodes: Vec<f64>,
    /// constant ratio between consecutive heights
    pub ratio: f64,
    /// whether dumped fields carry the y = 0 trace row
    pub include_zero: bool,
}

impl YLadder {
    pub fn geometric(y_min: f64, y_max: f64, count: usize) -> Self {
        assert!(y_min > 0.0 && y_max > y_min && count >= 2);
        let ratio = (y_max / y_min).powf(1.0 / (count - 1) as f64);
        let nodes = (0..count).map(|j| y_min * ratio.powi(j as i32)).collect();
        YLadder { nodes, ratio, include_zero: true }
    }

    /// 60 heights spanning `[1e-4, 20]`.
    pub fn standard() -> Self {
        Self::geometric(1e-4, 20.0, 60)
    }
}

/// Analytic family of a spectral profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `u_hat(rho) = e^{-rho^2/2}`; self-dual, so `u(r) = e^{-r^2/2}` too
    Gaussian,
    /// `u_hat(rho) = rho^{2j} e^{-rho^2}`
    PolyGaussian { j: u32 },
    /// `u_hat(rho) = e^{-rho}`; physically the unit-scale Poisson profile
    Slater,
    /// produced by an operator; no analytic physical form attached
    Derived,
}

impl Family {
    pub fn parse(name: &str) -> Result<Family> {
        match name {
            "gaussian" => Ok(Family::Gaussian),
            "slater" => Ok(Family::Slater),
            _ => {
                if let Some(j) = name.strip_prefix("poly_gaussian(").and_then(|s| s.strip_suffix(')'))
                {
                    let j: u32 = j
                        .parse()
                        .map_err(|_| Error::UnknownFamily(name.to_string()))?;
                    Ok(Family::PolyGaussian { j })
                } else {
                    Err(Error::UnknownFamily(name.to_string()))
                }
            }
        }
    }

    pub fn eval_hat(&self, rho: f64) -> f64 {
        match *self {
            Family::Gaussian => (-0.5 * rho * rho).exp(),
            Family::PolyGaussian { j } => rho.powi(2 * j as i32) * (-rho * rho).exp(),
            Family::Slater => (-rho).exp(),
            Family::Derived => f64::NAN,
        }
    }

    /// Closed-form physical radial profile `u(r)` in dimension `n`, when
    /// the family has one.
    pub fn physical_profile(&self, n: u32) -> Option<Box<dyn Fn(f64) -> f64 + Send + Sync>> {
        match *self {
            Family::Gaussian => Some(Box::new(|r| (-0.5 * r * r).exp())),
            Family::Slater => {
                // inverse transform of e^{-rho}: the Poisson-kernel shape
                // (2pi)^{-n/2} 2^n pi^{(n-1)/2} Gamma((n+1)/2) (1+r^2)^{-(n+1)/2}
                let nf = n as f64;
                let c = (2.0 * std::f64::consts::PI).powf(-nf / 2.0)
                    * 2f64.powf(nf)
                    * std::f64::consts::PI.powf((nf - 1.0) / 2.0)
                    * gamma((nf + 1.0) / 2.0).unwrap();
                Some(Box::new(move |r| c * (1.0 + r * r).powf(-(nf + 1.0) / 2.0)))
            }
            _ => None,
        }
    }
}

/// Radial spectral profile of a trace function, sampled on a [`RhoGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSpectralFunction {
    pub grid: RhoGrid,
    pub values: Vec<f64>,
    pub family: Family,
}

/// Sample an analytic family on a grid.
pub fn make_test_function(family: Family, grid: RhoGrid) -> RadialSpectralFunction {
    let values = grid.nodes.iter().map(|&r| family.eval_hat(r)).collect();
    RadialSpectralFunction { grid, values, family }
}

pub fn make_test_function_by_name(name: &str, grid: RhoGrid) -> Result<RadialSpectralFunction> {
    Ok(make_test_function(Family::parse(name)?, grid))
}

impl RadialSpectralFunction {
    /// Rescaled copy `lambda^n u_hat(lambda rho)`, the spectral side of
    /// `u(x/lambda)`. Only meaningful for analytic families.
    pub fn rescaled(&self, lambda: f64) -> RadialSpectralFunction {
        let scale = lambda.powi(self.grid.n as i32);
        let values = self
            .grid
            .nodes
            .iter()
            .map(|&r| scale * self.family.eval_hat(lambda * r))
            .collect();
        RadialSpectralFunction { grid: self.grid.clone(), values, family: Family::Derived }
    }

    /// Weighted spectral integral `omega_{n-1} int rho^{n-1+p} g(u_hat, rho) drho`
    /// evaluated on the sample grid.
    pub fn radial_integral(&self, extra_power: f64, g: impl Fn(f64, f64) -> f64) -> f64 {
        let n1 = self.grid.n as f64 - 1.0;
        let mut sum = 0.0;
        for ((&r, &w), &v) in self.grid.nodes.iter().zip(&self.grid.weights).zip(&self.values) {
            sum += w * r.powf(n1 + extra_power) * g(v, r);
        }
        self.grid.surface * sum
    }
}

/// Physical value at the origin by the inverse transform,
/// `u(0) = (2pi)^{-n/2} omega_{n-1} int u_hat rho^{n-1} drho`.
pub fn eval_physical_origin(u: &RadialSpectralFunction) -> Result<f64> {
    let n = u.grid.n as f64;
    let mut total = 0.0;
    let mut tail = 0.0;
    let tail_from = 0.75 * u.grid.rho_max;
    for ((&r, &w), &v) in u.grid.nodes.iter().zip(&u.grid.weights).zip(&u.values) {
        let term = w * r.powf(n - 1.0) * v;
        total += term;
        if r > tail_from {
            tail += term.abs();
        }
    }
    if tail > 1e-8 * total.abs().max(f64::MIN_POSITIVE) {
        return Err(Error::TailDominated(format!(
            "last-quarter contribution {tail:.3e} vs total {total:.3e}"
        )));
    }
    Ok((2.0 * std::f64::consts::PI).powf(-n / 2.0) * u.grid.surface * total)
}

/// Per-mode extension samples `E_hat(rho_i, y_j) = u_hat(rho_i) m_alpha(y_j rho_i)`
/// on grid x ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionField {
    pub parent: RadialSpectralFunction,
    pub ladder: YLadder,
    /// row-major: `values[j][i]` is the sample at `(rho_i, y_j)`
    pub values: Vec<Vec<f64>>,
    pub alpha: f64,
    /// weight exponent of the governing order, `1 - 2(alpha - [alpha])`
    pub b: f64,
}

impl ExtensionField {
    pub fn trace(&self) -> &[f64] {
        &self.parent.values
    }
}

// --- field file format ---------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Spectral,
    Physical,
}

/// Raw contents of a `polyext-field v1` file.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldFile {
    pub kind: FieldKind,
    pub n: u32,
    pub alpha: f64,
    pub b: f64,
    pub rows: Vec<(f64, f64, f64)>,
}

fn format_field(file: &FieldFile) -> String {
    let kind = match file.kind {
        FieldKind::Spectral => "spectral",
        FieldKind::Physical => "physical",
    };
    let mut out = String::new();
    writeln!(
        out,
        "# polyext-field v1 kind={} n={} alpha={} b={}",
        kind, file.n, file.alpha, file.b
    )
    .unwrap();
    let col = if file.kind == FieldKind::Spectral { "rho" } else { "r" };
    writeln!(out, "{col},y,value").unwrap();
    for &(x, y, v) in &file.rows {
        // `{}` prints the shortest decimal that round-trips the f64
        writeln!(out, "{x},{y},{v}").unwrap();
    }
    out
}

pub fn write_field_file(file: &FieldFile, path: &Path) -> Result<()> {
    std::fs::write(path, format_field(file))?;
    Ok(())
}

pub fn load_field(path: &Path) -> Result<FieldFile> {
    parse_field(&std::fs::read_to_string(path)?)
}

fn parse_field(text: &str) -> Result<FieldFile> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::FieldFormat("empty file".into()))?;
    let rest = header
        .strip_prefix("# polyext-field v1 ")
        .ok_or_else(|| Error::FieldFormat(format!("bad header: {header}")))?;
    let mut kind = None;
    let mut n = None;
    let mut alpha = None;
    let mut b = None;
    for tok in rest.split_whitespace() {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| Error::FieldFormat(format!("bad header token: {tok}")))?;
        match key {
            "kind" => {
                kind = Some(match val {
                    "spectral" => FieldKind::Spectral,
                    "physical" => FieldKind::Physical,
                    _ => return Err(Error::FieldFormat(format!("unknown kind: {val}"))),
                })
            }
            "n" => n = val.parse().ok(),
            "alpha" => alpha = val.parse().ok(),
            "b" => b = val.parse().ok(),
            _ => return Err(Error::FieldFormat(format!("unknown header key: {key}"))),
        }
    }
    let (kind, n, alpha, b) = match (kind, n, alpha, b) {
        (Some(k), Some(n), Some(a), Some(b)) => (k, n, a, b),
        _ => return Err(Error::FieldFormat("incomplete header".into())),
    };
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        if idx == 0 && line.ends_with(",y,value") {
            continue; // column header
        }
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let mut next = |what: &str| -> Result<f64> {
            parts
                .next()
                .and_then(|p| p.trim().parse().ok())
                .ok_or_else(|| Error::FieldFormat(format!("row {}: bad {what}: {line}", idx + 2)))
        };
        let x = next("first column")?;
        let y = next("y")?;
        let v = next("value")?;
        if parts.next().is_some() {
            return Err(Error::FieldFormat(format!("row {}: too many columns", idx + 2)));
        }
        rows.push((x, y, v));
    }
    Ok(FieldFile { kind, n, alpha, b, rows })
}

impl ExtensionField {
    pub fn to_file(&self) -> FieldFile {
        let mut rows = Vec::new();
        if self.ladder.include_zero {
            for (&r, &v) in self.parent.grid.nodes.iter().zip(self.trace()) {
                rows.push((r, 0.0, v));
            }
        }
        for (j, &y) in self.ladder.nodes.iter().enumerate() {
            for (i, &r) in self.parent.grid.nodes.iter().enumerate() {
                rows.push((r, y, self.values[j][i]));
            }
        }
        FieldFile { kind: FieldKind::Spectral, n: self.parent.grid.n, alpha: self.alpha, b: self.b, rows }
    }

    /// Rebuild a field from a dumped file. The rho-nodes must match the
    /// standard grid for the recorded dimension, since quadrature weights
    /// are not part of the interchange format.
    pub fn from_file(file: &FieldFile) -> Result<ExtensionField> {
        if file.kind != FieldKind::Spectral {
            return Err(Error::FieldFormat("expected a spectral field".into()));
        }
        let grid = RhoGrid::standard(file.n);
        let nr = grid.len();
        if file.rows.len() % nr != 0 || file.rows.is_empty() {
            return Err(Error::FieldFormat(format!(
                "row count {} is not a multiple of the standard grid size {nr}",
                file.rows.len()
            )));
        }
        let levels = file.rows.len() / nr;
        let mut trace = vec![0.0; nr];
        let mut pos_ys = Vec::new();
        let mut values: Vec<Vec<f64>> = Vec::new();
        let mut has_zero = false;
        for level in 0..levels {
            let y = file.rows[level * nr].1;
            let mut slice = vec![0.0; nr];
            for i in 0..nr {
                let (r, yy, v) = file.rows[level * nr + i];
                if (r - grid.nodes[i]).abs() > 1e-12 * grid.nodes[i].max(1e-300) {
                    return Err(Error::FieldFormat(format!(
                        "rho node {r} does not match the standard grid"
                    )));
                }
                if yy != y {
                    return Err(Error::FieldFormat("rows out of order".into()));
                }
                slice[i] = v;
            }
            if y == 0.0 {
                has_zero = true;
                trace = slice;
            } else {
                pos_ys.push(y);
                values.push(slice);
            }
        }
        if !has_zero {
            return Err(Error::FieldFormat("missing y = 0 trace rows".into()));
        }
        let count = pos_ys.len();
        let ratio = if count >= 2 {
            (pos_ys[count - 1] / pos_ys[0]).powf(1.0 / (count - 1) as f64)
        } else {
            1.0
        };
        Ok(ExtensionField {
            parent: RadialSpectralFunction { grid, values: trace, family: Family::Derived },
            ladder: YLadder { nodes: pos_ys, ratio, include_zero: true },
            values,
            alpha: file.alpha,
            b: file.b,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surface_factors() {
        let pi = std::f64::consts::PI;
        assert!((sphere_surface(1) - 2.0).abs() < 1e-14);
        assert!((sphere_surface(2) - 2.0 * pi).abs() < 1e-14);
        assert!((sphere_surface(3) - 4.0 * pi).abs() < 1e-13);
        assert!((sphere_surface(4) - 2.0 * pi * pi).abs() < 1e-13);
    }

    #[test]
    fn families() {
        let g = RhoGrid::standard(2);
        let u = make_test_function_by_name("slater", g.clone()).unwrap();
        let i = u.grid.nodes.iter().position(|&r| (r - 1.0).abs() < 0.05).unwrap();
        assert!((u.values[i] - (-u.grid.nodes[i]).exp()).abs() < 1e-15);
        assert!(make_test_function_by_name("cauchy", g.clone()).is_err());
        let p = make_test_function_by_name("poly_gaussian(1)", g).unwrap();
        assert_eq!(p.family, Family::PolyGaussian { j: 1 });
        assert!((Family::PolyGaussian { j: 1 }.eval_hat(1.0) - (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn origin_recovery() {
        // gaussian is self-dual: u(0) = 1 in every dimension
        for n in [2, 4, 6] {
            let u = make_test_function(Family::Gaussian, RhoGrid::standard(n));
            let v = eval_physical_origin(&u).unwrap();
            assert!((v - 1.0).abs() < 1e-10, "n={n}: {v}");
        }
        let u = make_test_function(Family::Slater, RhoGrid::standard(2));
        assert!((eval_physical_origin(&u).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn tail_domination_flagged() {
        let grid = RhoGrid::standard(2);
        let values = grid.nodes.iter().map(|&r| 1.0 / (1.0 + r)).collect();
        let u = RadialSpectralFunction { grid, values, family: Family::Derived };
        assert!(matches!(eval_physical_origin(&u), Err(Error::TailDominated(_))));
    }

    #[test]
    fn moments_and_negative_powers() {
        let g = RhoGrid::standard(1);
        let sqrt_pi = std::f64::consts::PI.sqrt();
        let v = g.integrate_moment(6.0, |r| (-r * r).exp()).unwrap();
        assert!((v - 15.0 * sqrt_pi / 16.0).abs() < 1e-12);
        let v = g.integrate_moment(-0.5, |r| (-r).exp()).unwrap();
        assert!((v - sqrt_pi).abs() < 1e-10);
        assert!(g.integrate_moment(-1.2, |_| 1.0).is_err());
    }

    #[test]
    fn weighted_y_integrals() {
        for b in [-0.9, -0.5, 0.0, 0.5, 0.9] {
            let v = y_weighted_integral(b, 1.0, |_| 1.0);
            assert!((v - 1.0 / (1.0 + b)).abs() < 1e-8, "b={b}");
        }
    }

    #[test]
    fn refinement_is_stable() {
        let coarse = make_test_function(Family::Gaussian, RhoGrid::standard(4));
        let fine = make_test_function(Family::Gaussian, RhoGrid::refined(4));
        let a = coarse.radial_integral(2.0 * 1.5, |v, _| v * v);
        let b = fine.radial_integral(2.0 * 1.5, |v, _| v * v);
        assert!((a - b).abs() < 1e-10 * a.abs());
    }

    #[test]
    fn ladder_geometry() {
        let l = YLadder::standard();
        assert_eq!(l.nodes.len(), 60);
        assert!((l.nodes[0] - 1e-4).abs() < 1e-18);
        assert!((l.nodes[59] - 20.0).abs() < 1e-10);
        for w in l.nodes.windows(2) {
            assert!((w[1] / w[0] - l.ratio).abs() < 1e-12 * l.ratio);
        }
    }

    #[test]
    fn field_file_round_trip() {
        let file = FieldFile {
            kind: FieldKind::Spectral,
            n: 4,
            alpha: 1.5,
            b: 0.0,
            rows: vec![(0.1, 0.0, 1.0), (0.25, 0.0, 0.5), (0.1, 0.5, 0.72), (0.25, 0.5, 0.11)],
        };
        let text = format_field(&file);
        assert!(text.starts_with("# polyext-field v1 kind=spectral n=4 alpha=1.5 b=0\n"));
        let back = parse_field(&text).unwrap();
        assert_eq!(file, back);
    }

    #[test]
    fn malformed_field_files() {
        assert!(parse_field("").is_err());
        assert!(parse_field("# other-format v2\n").is_err());
        let truncated = "# polyext-field v1 kind=spectral n=2 alpha=0.5 b=0\nrho,y,value\n0.5,0.1\n";
        assert!(matches!(parse_field(truncated), Err(Error::FieldFormat(_))));
    }
}
