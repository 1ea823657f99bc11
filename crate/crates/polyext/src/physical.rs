//! Physical-space machinery: an exact-derivative engine for polynomial
//! times Gaussian profiles, polar quadrature with absorbed weight
//! singularities, and sampled physical fields.
//!
//! The weighted Hardy quotients mix `r` and `y` through `(r^2+y^2)^{-a}`,
//! so they cannot ride the per-mode factorization; they are computed here
//! in polar coordinates, where both the radial power and the transverse
//! `|y|^b` singularity separate exactly.

use crate::error::{Error, Result};
use crate::quad::{power_weight_quad, Quad1};

/// Function of the form `sum c r^i y^j e^{-lambda (r^2+y^2)/2}`, closed
/// under every operator in play.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyGauss {
    pub lambda: f64,
    /// terms `(coefficient, r power, y power)`
    pub terms: Vec<(f64, u32, u32)>,
}

impl PolyGauss {
    /// plain Gaussian `e^{-lambda (r^2+y^2)/2}`
    pub fn gaussian(lambda: f64) -> Self {
        PolyGauss { lambda, terms: vec![(1.0, 0, 0)] }
    }

    /// monomial profile `c r^i y^j e^{-lambda (r^2+y^2)/2}`
    pub fn monomial(c: f64, i: u32, j: u32, lambda: f64) -> Self {
        PolyGauss { lambda, terms: vec![(c, i, j)] }
    }

    pub fn is_even(&self) -> bool {
        self.terms.iter().all(|&(_, i, j)| i % 2 == 0 && j % 2 == 0)
    }

    fn push(&mut self, c: f64, i: i64, j: i64) {
        if c == 0.0 {
            return;
        }
        assert!(i >= 0 && j >= 0, "negative power generated: check operator order");
        let (i, j) = (i as u32, j as u32);
        for t in self.terms.iter_mut() {
            if t.1 == i && t.2 == j {
                t.0 += c;
                return;
            }
        }
        self.terms.push((c, i, j));
    }

    fn empty_like(&self) -> PolyGauss {
        PolyGauss { lambda: self.lambda, terms: Vec::new() }
    }

    pub fn d_r(&self) -> PolyGauss {
        let mut out = self.empty_like();
        for &(c, i, j) in &self.terms {
            if i > 0 {
                out.push(c * i as f64, i as i64 - 1, j as i64);
            }
            out.push(-c * self.lambda, i as i64 + 1, j as i64);
        }
        out
    }

    pub fn d_y(&self) -> PolyGauss {
        let mut out = self.empty_like();
        for &(c, i, j) in &self.terms {
            if j > 0 {
                out.push(c * j as f64, i as i64, j as i64 - 1);
            }
            out.push(-c * self.lambda, i as i64, j as i64 + 1);
        }
        out
    }

    // (1/r) d_r, well defined on even-in-r profiles
    fn r_inv_d_r(&self) -> PolyGauss {
        let d = self.d_r();
        let mut out = self.empty_like();
        for &(c, i, j) in &d.terms {
            out.push(c, i as i64 - 1, j as i64);
        }
        out
    }

    fn y_inv_d_y(&self) -> PolyGauss {
        let d = self.d_y();
        let mut out = self.empty_like();
        for &(c, i, j) in &d.terms {
            out.push(c, i as i64, j as i64 - 1);
        }
        out
    }

    pub fn scaled(&self, k: f64) -> PolyGauss {
        PolyGauss {
            lambda: self.lambda,
            terms: self.terms.iter().map(|&(c, i, j)| (k * c, i, j)).collect(),
        }
    }

    pub fn plus(&self, other: &PolyGauss) -> PolyGauss {
        assert_eq!(self.lambda, other.lambda, "cannot mix Gaussian scales");
        let mut out = self.clone();
        for &(c, i, j) in &other.terms {
            out.push(c, i as i64, j as i64);
        }
        out
    }

    /// x-radial Laplacian `d_r^2 + (n-1) r^{-1} d_r`
    pub fn delta_x(&self, n: u32) -> PolyGauss {
        self.d_r().d_r().plus(&self.r_inv_d_r().scaled(n as f64 - 1.0))
    }

    /// weighted operator `Delta_x + d_y^2 + b y^{-1} d_y`
    pub fn delta_b(&self, n: u32, b: f64) -> PolyGauss {
        self.delta_x(n).plus(&self.d_y().d_y()).plus(&self.y_inv_d_y().scaled(b))
    }

    pub fn eval(&self, r: f64, y: f64) -> f64 {
        let e = (-0.5 * self.lambda * (r * r + y * y)).exp();
        let mut sum = 0.0;
        for &(c, i, j) in &self.terms {
            sum += c * r.powi(i as i32) * y.powi(j as i32);
        }
        sum * e
    }
}

/// The half-order operator tower on an even profile: even `k` gives the
/// scalar `Delta_b^{k/2} U`, odd `k` the gradient pair of `Delta_b^{(k-1)/2} U`.
pub enum TowerValue {
    Scalar(PolyGauss),
    Gradient(PolyGauss, PolyGauss),
}

pub fn operator_tower(u: &PolyGauss, n: u32, b: f64, k: u32) -> TowerValue {
    let mut w = u.clone();
    for _ in 0..k / 2 {
        w = w.delta_b(n, b);
    }
    if k % 2 == 0 {
        TowerValue::Scalar(w)
    } else {
        TowerValue::Gradient(w.d_r(), w.d_y())
    }
}

impl TowerValue {
    /// squared pointwise magnitude of the tower value
    pub fn density(&self, r: f64, y: f64) -> f64 {
        match self {
            TowerValue::Scalar(w) => {
                let v = w.eval(r, y);
                v * v
            }
            TowerValue::Gradient(wr, wy) => {
                let a = wr.eval(r, y);
                let b = wy.eval(r, y);
                a * a + b * b
            }
        }
    }

    /// pairing of two tower values of the same order
    pub fn pair(&self, other: &TowerValue, r: f64, y: f64) -> f64 {
        match (self, other) {
            (TowerValue::Scalar(a), TowerValue::Scalar(b)) => a.eval(r, y) * b.eval(r, y),
            (TowerValue::Gradient(ar, ay), TowerValue::Gradient(br, by)) => {
                ar.eval(r, y) * br.eval(r, y) + ay.eval(r, y) * by.eval(r, y)
            }
            _ => panic!("mismatched tower parities"),
        }
    }
}

/// Quadrature for `int int_{r,y>0} y^b (r^2+y^2)^{-q} f(r,y) r^{n-1} dr dy`
/// in polar coordinates: the radial power `n+b-2q` and the angular
/// `sin^b cos^{n-1}` factor are absorbed into the weights.
#[derive(Debug, Clone)]
pub struct PolarQuad {
    pub points: Vec<(f64, f64)>,
    pub weights: Vec<f64>,
}

pub fn polar_quad(n: u32, b: f64, q: f64, radius: f64) -> Result<PolarQuad> {
    let p_rad = n as f64 + b - 2.0 * q;
    if p_rad <= -1.0 {
        return Err(Error::Inadmissible(format!(
            "radial power {p_rad} is not integrable (n = {n}, b = {b}, q = {q})"
        )));
    }
    if !(-1.0 < b && b < 1.0) {
        return Err(Error::Inadmissible(format!("b = {b} outside (-1, 1)")));
    }
    let radial = power_weight_quad(p_rad, 1.0_f64.min(radius / 2.0), radius, 20, 16);
    // angular: [0, pi/4] absorbs sin^b, [pi/4, pi/2] is regular
    let quarter = std::f64::consts::FRAC_PI_4;
    let sing = power_weight_quad(b, quarter, quarter, 12, 16);
    let mut plain = Quad1::empty();
    plain.push_panel(quarter, std::f64::consts::FRAC_PI_2, 32);
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let nm1 = n as i32 - 1;
    for (&rho, &wr) in radial.nodes.iter().zip(&radial.weights) {
        for (&th, &wt) in sing.nodes.iter().zip(&sing.weights) {
            // weight already carries th^b; restore (sin th / th)^b
            let (s, c) = th.sin_cos();
            let w = wr * wt * (s / th).powf(b) * c.powi(nm1);
            points.push((rho * c, rho * s));
            weights.push(w);
        }
        for (&th, &wt) in plain.nodes.iter().zip(&plain.weights) {
            let (s, c) = th.sin_cos();
            let w = wr * wt * s.powf(b) * c.powi(nm1);
            points.push((rho * c, rho * s));
            weights.push(w);
        }
    }
    Ok(PolarQuad { points, weights })
}

impl PolarQuad {
    pub fn integrate(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&(r, y), &w)| w * f(r, y))
            .sum()
    }
}

/// Samples of an x-radial, y-even function on a physical `(r, y)` lattice;
/// only `y >= 0` is stored. The analytic profile rides along when the
/// family has one, enabling exact derivatives.
#[derive(Debug, Clone)]
pub struct PhysicalField {
    pub n: u32,
    pub r_nodes: Vec<f64>,
    pub y_nodes: Vec<f64>,
    /// `values[j][i]` at `(r_i, y_j)`
    pub values: Vec<Vec<f64>>,
    pub profile: Option<PolyGauss>,
}

/// Sample an analytic profile on a lattice.
pub fn sample_profile(n: u32, profile: &PolyGauss, r_nodes: Vec<f64>, y_nodes: Vec<f64>) -> PhysicalField {
    let values = y_nodes
        .iter()
        .map(|&y| r_nodes.iter().map(|&r| profile.eval(r, y)).collect())
        .collect();
    PhysicalField { n, r_nodes, y_nodes, values, profile: Some(profile.clone()) }
}

impl PhysicalField {
    /// Interchange form; `b` records the weight exponent the field is
    /// meant for (the analytic tag does not survive the trip).
    pub fn to_file(&self, b: f64) -> crate::field::FieldFile {
        let mut rows = Vec::new();
        for (j, &y) in self.y_nodes.iter().enumerate() {
            for (i, &r) in self.r_nodes.iter().enumerate() {
                rows.push((r, y, self.values[j][i]));
            }
        }
        crate::field::FieldFile { kind: crate::field::FieldKind::Physical, n: self.n, alpha: 0.0, b, rows }
    }

    pub fn from_file(file: &crate::field::FieldFile) -> crate::error::Result<PhysicalField> {
        if file.kind != crate::field::FieldKind::Physical {
            return Err(Error::Inadmissible("expected a physical field file".into()));
        }
        let mut r_nodes: Vec<f64> = Vec::new();
        for &(r, _, _) in &file.rows {
            if r_nodes.first() == Some(&r) {
                break;
            }
            r_nodes.push(r);
        }
        let nr = r_nodes.len();
        if nr == 0 || file.rows.len() % nr != 0 {
            return Err(Error::Inadmissible("rows do not tile a lattice".into()));
        }
        let mut y_nodes = Vec::new();
        let mut values = Vec::new();
        for chunk in file.rows.chunks(nr) {
            y_nodes.push(chunk[0].1);
            if chunk.iter().zip(&r_nodes).any(|(&(r, y, _), &rn)| r != rn || y != chunk[0].1) {
                return Err(Error::Inadmissible("rows out of lattice order".into()));
            }
            values.push(chunk.iter().map(|&(_, _, v)| v).collect());
        }
        Ok(PhysicalField { n: file.n, r_nodes, y_nodes, values, profile: None })
    }
}
