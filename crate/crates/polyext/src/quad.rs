//! Composite Gauss-Legendre quadrature on graded panels, with
//! power-absorbing endpoint maps for weights `t^p`, `p > -1`.

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
///
/// Newton iteration on the Legendre polynomial `P_n`; converges to
/// machine precision in a handful of steps for the orders used here.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2, "need at least two nodes");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n and P_n' by the three-term recurrence
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// A one-dimensional quadrature rule: `sum(w_i f(x_i))` approximates a
/// (possibly weighted) integral fixed at construction time.
#[derive(Debug, Clone, PartialEq)]
pub struct Quad1 {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Quad1 {
    pub fn empty() -> Self {
        Quad1 { nodes: Vec::new(), weights: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Plain Gauss-Legendre panel on `[a, b]`.
    pub fn push_panel(&mut self, a: f64, b: f64, order: usize) {
        let (xs, ws) = gauss_legendre(order);
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        for (x, w) in xs.iter().zip(&ws) {
            self.nodes.push(mid + half * x);
            self.weights.push(half * w);
        }
    }

    /// Geometrically graded panels covering `[a, b]`, `a > 0`.
    pub fn push_geometric(&mut self, a: f64, b: f64, panels: usize, order: usize) {
        assert!(a > 0.0 && b > a);
        let ratio = (b / a).powf(1.0 / panels as f64);
        let mut left = a;
        for _ in 0..panels {
            let right = left * ratio;
            self.push_panel(left, right, order);
            left = right;
        }
    }

    /// Panels for `int_0^c t^p f(t) dt` with the weight `t^p` absorbed into
    /// the returned weights. Substituting `t = tau^(2/(1+p))` turns the
    /// weighted measure into `(2/(1+p)) tau dtau`, which is regular at 0.
    pub fn push_power_absorbed(&mut self, p: f64, c: f64, panels: usize, order: usize) {
        assert!(p > -1.0, "weight exponent must be integrable");
        assert!(c > 0.0);
        let gamma = 2.0 / (1.0 + p);
        let tau_max = c.powf(1.0 / gamma);
        let (xs, ws) = gauss_legendre(order);
        // grade panels toward tau = 0 to soak up fractional-power remainders
        let mut bounds = Vec::with_capacity(panels + 1);
        bounds.push(0.0);
        let tau_min = tau_max * 1e-4;
        for j in 0..panels {
            bounds.push(tau_min * (tau_max / tau_min).powf(j as f64 / (panels - 1) as f64));
        }
        for win in bounds.windows(2) {
            let (a, b) = (win[0], win[1]);
            let mid = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            for (x, w) in xs.iter().zip(&ws) {
                let tau = mid + half * x;
                self.nodes.push(tau.powf(gamma));
                self.weights.push(half * w * gamma * tau);
            }
        }
    }
}

/// Quadrature for `int_0^inf f(rho) drho` with smooth integrands that decay
/// by `rho_max`. Head panel joins 0 to the graded region.
pub fn halfline_quad(rho_min: f64, rho_max: f64, panels: usize, order: usize) -> Quad1 {
    let mut q = Quad1::empty();
    q.push_panel(0.0, rho_min, order);
    q.push_geometric(rho_min, rho_max, panels, order);
    q
}

/// Quadrature for `int_0^tmax t^p f(t) dt`, `p > -1`: the singular head
/// `[0, t_break]` uses the absorbing substitution, the rest graded panels
/// with the weight evaluated directly.
pub fn power_weight_quad(p: f64, t_break: f64, t_max: f64, panels: usize, order: usize) -> Quad1 {
    let mut q = Quad1::empty();
    q.push_power_absorbed(p, t_break, panels, order);
    if t_max > t_break {
        let mut tail = Quad1::empty();
        tail.push_geometric(t_break, t_max, panels, order);
        for (x, w) in tail.nodes.iter().zip(&tail.weights) {
            q.nodes.push(*x);
            q.weights.push(w * x.powf(p));
        }
    }
    q
}
