//! Check-suite configuration, execution and reporting.
//!
//! A suite is a list of named check groups swept over configured orders,
//! families and Hardy parameter sets. Checks never abort the run: numeric
//! failures become failed rows so a single edge case cannot hide the rest
//! of the report. Reports are deterministic given the configuration.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::extension::{extend, DerivPath};
use crate::field::{make_test_function_by_name, Family, RhoGrid, YLadder};
use crate::functionals::{
    boundedness_ratio, dtn_residual_norm, energy_identity_gap, hardy_quotient, ibp_check,
    limits_gap, recursion_residual, taylor_remainder, trace_axis_halving, trace_seminorm,
    walphasumm_constant, weighted_energy, CheckValue, IbpCheck,
};
use crate::kernel::{kernel_ft_check, kernel_mass, kernel_mass_at, r1_residual, KernelIdentity};
use crate::orders::{
    d_constant, dtn_deficit, hardy_constant, kappa, make_order, multiplier, poisson_normalizer,
    DeficitKind, HardyParams,
};
use crate::physical::{sample_profile, PolyGauss};

pub const GROUPS: [&str; 10] = [
    "constants",
    "kernel",
    "energy",
    "dtn",
    "taylor",
    "limits",
    "recursion",
    "hardy",
    "ibp",
    "boundedness",
];

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct OrderSpec {
    pub n: u32,
    pub s: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct HardySpec {
    pub n: u32,
    pub k: u32,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    /// check groups to run, in order
    pub groups: Vec<String>,
    /// fractional orders swept by the spectral groups
    pub orders: Vec<OrderSpec>,
    /// trace families used by energy/boundedness sweeps
    pub families: Vec<String>,
    /// Hardy parameter sets
    pub hardy: Vec<HardySpec>,
    /// spectral grid resolution
    pub grid_panels: usize,
    pub grid_order: usize,
    /// multiplies every tolerance (loose-grid smoke runs)
    pub tol_scale: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            groups: GROUPS.iter().map(|s| s.to_string()).collect(),
            orders: vec![
                OrderSpec { n: 2, s: 0.5 },
                OrderSpec { n: 2, s: 0.75 },
                OrderSpec { n: 4, s: 1.5 },
                OrderSpec { n: 6, s: 2.5 },
            ],
            families: vec!["gaussian".into(), "slater".into()],
            hardy: vec![
                HardySpec { n: 2, k: 1, a: 0.0, b: 0.0 },
                HardySpec { n: 3, k: 1, a: 0.5, b: -0.4 },
                HardySpec { n: 4, k: 2, a: 0.0, b: 0.0 },
                HardySpec { n: 4, k: 2, a: 0.0, b: 0.5 },
            ],
            grid_panels: 30,
            grid_order: 16,
            tol_scale: 1.0,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        for g in &self.groups {
            if !GROUPS.contains(&g.as_str()) {
                problems.push(format!("groups: unknown group '{g}'"));
            }
        }
        for (i, o) in self.orders.iter().enumerate() {
            if let Err(e) = make_order(o.n, o.s) {
                problems.push(format!("orders[{i}]: {e}"));
            }
        }
        for (i, f) in self.families.iter().enumerate() {
            if let Err(e) = Family::parse(f) {
                problems.push(format!("families[{i}]: {e}"));
            }
        }
        for (i, h) in self.hardy.iter().enumerate() {
            if let Err(e) = HardyParams::new(h.n, h.k, h.a, h.b) {
                problems.push(format!("hardy[{i}]: {e}"));
            }
        }
        if !(self.tol_scale > 0.0) {
            problems.push("tol_scale: must be positive".into());
        }
        if self.grid_order < 2 || self.grid_panels < 4 {
            problems.push("grid: need at least 4 panels of order 2".into());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems.join("; ")))
        }
    }

    fn grid(&self, n: u32) -> RhoGrid {
        RhoGrid::with_resolution(n, 1e-4, 40.0, self.grid_panels, self.grid_order)
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub version: String,
    pub config: SuiteConfig,
    pub checks: Vec<CheckValue>,
    pub summary: Summary,
    /// wall-clock per executed group, milliseconds
    pub wall_ms: BTreeMap<String, u64>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }
}

// wrap a fallible check so numeric errors become failed rows
fn push(checks: &mut Vec<CheckValue>, name: &str, params: serde_json::Value, f: impl FnOnce() -> Result<CheckValue>) {
    match f() {
        Ok(c) => checks.push(c),
        Err(e) => checks.push(CheckValue::failed(name, params, &e)),
    }
}

/// Run every configured group; the report is complete even when checks
/// fail.
pub fn run_suite(config: &SuiteConfig) -> Result<VerificationReport> {
    config.validate()?;
    let mut checks = Vec::new();
    let mut wall_ms = BTreeMap::new();
    for group in &config.groups {
        let t0 = Instant::now();
        match group.as_str() {
            "constants" => group_constants(config, &mut checks),
            "kernel" => group_kernel(config, &mut checks),
            "energy" => group_energy(config, &mut checks),
            "dtn" => group_dtn(config, &mut checks),
            "taylor" => group_taylor(config, &mut checks),
            "limits" => group_limits(config, &mut checks),
            "recursion" => group_recursion(config, &mut checks),
            "hardy" => group_hardy(config, &mut checks),
            "ibp" => group_ibp(config, &mut checks),
            "boundedness" => group_boundedness(config, &mut checks),
            _ => unreachable!("validated"),
        }
        wall_ms.insert(group.clone(), t0.elapsed().as_millis() as u64);
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    let summary = Summary { total: checks.len(), passed, failed: checks.len() - passed };
    Ok(VerificationReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        checks,
        summary,
        wall_ms,
    })
}

fn group_constants(cfg: &SuiteConfig, checks: &mut Vec<CheckValue>) {
    let ts = cfg.tol_scale;
    for (s, want) in [(0.5, 1.0), (1.5, 2.0), (2.5, 8.0 / 3.0)] {
        push(checks, "constants.d", json!({"s": s}), || {
            Ok(CheckValue::equals("constants.d", json!({"s": s}), d_constant(s)?, want, 1e-12 * ts))
        });
    }
    for s in [0.75, 1.5, 2.5] {
        push(checks, "constants.kappa0", json!({"s": s}), || {
            Ok(CheckValue::equals("constants.kappa0", json!({"s": s}), kappa(s, 0)?, 1.0, 0.0))
        });
    }
    for (s, want) in [(1.5, -1.0), (2.5, -1.0 / 3.0)] {
        push(checks, "constants.kappa1", json!({"s": s}), || {
            Ok(CheckValue::equals("constants.kappa1", json!({"s": s}), kappa(s, 1)?, want, 1e-12 * ts))
        });
    }
    let pi = std::f64::consts::PI;
    for (n, alpha, want) in [(1u32, 0.5, 1.0 / pi), (2, 0.5, 0.5 / pi), (2, 1.0, 1.0 / pi)] {
        push(checks, "constants.poisson_norm", json!({"n": n, "alpha": alpha}), || {
            Ok(CheckValue::equals(
                "constants.poisson_norm",
                json!({"n": n, "alpha": alpha}),
                poisson_normalizer(n, alpha)?,
                want,
                1e-13 * ts,
            ))
        });
    }
    // Gamma-form Hardy constants against the elementary reductions
    for &HardySpec { n, k, a, b } in &cfg.hardy {
        if k > 2 {
            continue;
        }
        push(checks, "constants.hardy_gamma_form", json!({"n": n, "k": k, "a": a, "b": b}), || {
            let p = HardyParams::new(n, k, a, b)?;
            let h1 = (n as f64 + 1.0 + b) / 2.0 - (a + 1.0);
            let want = if k == 1 { h1 } else { (h1 - 1.0) * ((n as f64 + 1.0 + b) / 2.0 + a) };
            Ok(CheckValue::equals(
                "constants.hardy_gamma_form",
                json!({"n": n, "k": k, "a": a, "b": b}),
                hardy_constant(p)?,
                want,
                1e-10 * ts,
            ))
        });
    }
    // closed multiplier forms on a t-lattice
    let mut worst_half: f64 = 0.0;
    let mut worst_three_half: f64 = 0.0;
    let mut t = 1e-2;
    while t <= 30.0 {
        worst_half = worst_half.max((multiplier(0.5, t).unwrap() - (-t).exp()).abs());
        worst_three_half =
            worst_three_half.max((multiplier(1.5, t).unwrap() - (1.0 + t) * (-t).exp()).abs());
        t *= 1.6;
    }
    checks.push(CheckValue::below("constants.multiplier_half", json!({"t": "[1e-2,30]"}), worst_half, 1e-10 * ts));
    checks.push(CheckValue::below(
        "constants.multiplier_three_half",
        json!({"t": "[1e-2,30]"}),
        worst_three_half,
        1e-10 * ts,
    ));
    // deficit identities
    push(checks, "constants.deficit_dirichlet", json!({"alpha": 0.75}), || {
        let mut worst: f64 = 0.0;
        for t in [0.0, 0.3, 2.0, 11.0] {
            let d = dtn_deficit(0.75, t, DeficitKind::Dirichlet)?;
            worst = worst.max((d - (1.0 - multiplier(0.75, t)?)).abs());
        }
        Ok(CheckValue::below("constants.deficit_dirichlet", json!({"alpha": 0.75}), worst, 1e-15 * ts))
    });
    push(checks, "constants.deficit_neumann_small_t", json!({"alpha": 0.5}), || {
        Ok(CheckValue::below(
            "constants.deficit_neumann_small_t",
            json!({"alpha": 0.5}),
            dtn_deficit(0.5, 1e-9, DeficitKind::Neumann)?.abs(),
            1e-8 * ts,
        ))
    });
}

fn group_kernel(cfg: &SuiteConfig, checks: &mut Vec<CheckValue>) {
    let ts = cfg.tol_scale;
    for (n, alpha) in [(2u32, 0.5), (4, 1.5), (3, 0.8)] {
        push(checks, "kernel.mass", json!({"n": n, "alpha": alpha}), || {
            Ok(CheckValue::equals("kernel.mass", json!({"n": n, "alpha": alpha}), kernel_mass(n, alpha)?, 1.0, 1e-8 * ts))
        });
    }
    push(checks, "kernel.mass_scaling", json!({"n": 2, "alpha": 0.5}), || {
        let gap = (kernel_mass_at(2, 0.5, 1.0)? - kernel_mass_at(2, 0.5, 3.0)?).abs();
        Ok(CheckValue::below("kernel.mass_scaling", json!({"n": 2, "alpha": 0.5}), gap, 1e-10 * ts))
    });
    let samples = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0];
    for (n, alpha, y) in [(1u32, 0.3, 1.0), (1, 0.5, 1.0), (2, 0.75, 1.0), (2, 1.5, 1.0)] {
        push(checks, "kernel.fourier_transform", json!({"n": n, "alpha": alpha, "y": y}), || {
            Ok(CheckValue::below(
                "kernel.fourier_transform",
                json!({"n": n, "alpha": alpha, "y": y}),
                kernel_ft_check(n, alpha, &samples, y)?,
                1e-6 * ts,
            ))
        });
    }
    // identity lattice: 3 alphas x 3 bs x 3 points
    for &alpha in &[0.7, 1.2, 1.8] {
        for &b in &[-0.4, 0.0, 0.5] {
            for &(r, y) in &[(0.5, 0.5), (1.0, 1.0), (1.5, 0.8)] {
                let params = json!({"alpha": alpha, "b": b, "r": r, "y": y});
                push(checks, "kernel.identity_first", params.clone(), || {
                    let v = r1_residual(KernelIdentity::FirstDy, 3, alpha, b, r, y)?
                        .max(r1_residual(KernelIdentity::FirstDeltaB, 3, alpha, b, r, y)?);
                    Ok(CheckValue::below("kernel.identity_first", params.clone(), v, 1e-10 * ts))
                });
                if alpha > 1.0 {
                    let params = json!({"alpha": alpha, "r": r, "y": y});
                    push(checks, "kernel.identity_second", params.clone(), || {
                        let v = r1_residual(KernelIdentity::Second, 3, alpha, 0.0, r, y)?;
                        Ok(CheckValue::below("kernel.identity_second", params.clone(), v, 1e-10 * ts))
                    });
                    let params = json!({"alpha": alpha, "b": b, "m": 1, "r": r, "y": y});
                    push(checks, "kernel.identity_third", params.clone(), || {
                        let v = r1_residual(KernelIdentity::Third { m: 1 }, 3, alpha, b, r, y)?;
                        Ok(CheckValue::below("kernel.identity_third", params.clone(), v, 1e-10 * ts))
                    });
                }
            }
        }
    }
}

fn group_energy(cfg: &SuiteConfig, checks: &mut Vec<CheckValue>) {
    let ts = cfg.tol_scale;
    let pi = std::f64::consts::PI;
    // frozen closed-form energies
    push(checks, "energy.value", json!({"n": 2, "s": 0.5, "family": "gaussian"}), || {
        let u = make_test_function_by_name("gaussian", cfg.grid(2))?;
        let field = extend(&u, 0.5, &YLadder::standard())?;
        Ok(CheckValue::equals(
            "energy.value",
            json!({"n": 2, "s": 0.5, "family": "gaussian"}),
            weighted_energy(&field, 1, 0.0)?,
            pi.powf(1.5),
            1e-2 * ts,
        ))
    });
    push(checks, "energy.value", json!({"n": 4, "s": 1.5, "family": "gaussian"}), || {
        let u = make_test_function_by_name("gaussian", cfg.grid(4))?;
        let field = extend(&u, 1.5, &YLadder::standard())?;
        Ok(CheckValue::equals(
            "energy.value",
            json!({"n": 4, "s": 1.5, "family": "gaussian"}),
            weighted_energy(&field, 2, 0.0)?,
            7.5 * pi.powf(2.5),
            1e-2 * ts,
        ))
    });
    // identity gap for all configured orders and families
    for o in &cfg.orders {
        for fam in &cfg.families {
            let params = json!({"n": o.n, "s": o.s, "family": fam});
            push(checks, "energy.identity_gap", params.clone(), || {
                let order = make_order(o.n, o.s)?;
                let u = make_test_function_by_name(fam, cfg.grid(o.n))?;
                Ok(CheckValue::below(
                    "energy.identity_gap",
                    params.clone(),
                    energy_identity_gap(&u, &order)?,
                    1e-2 * ts,
                ))
            });
        }
    }
    // the independent one-dimensional constant
    for (n, s) in [(2u32, 0.3), (2, 0.75), (4, 1.5), (6, 2.5)] {
        let params = json!({"n": n, "s": s});
        push(checks, "energy.bessel_route_constant", params.clone(), || {
            Ok(CheckValue::equals(
                "energy.bessel_route_constant",
                params.clone(),
                walphasumm_constant(s, s, n)?,
                2.0 * d_constant(s)?,
                1e-6 * ts,
            ))
        });
    }
    // transverse profile energy: an upper bound for the 1-D trace
    // constant, reported next to 2 d_{(1-b)/2} without asserting equality
    for b in [-0.5, 0.0, 0.5] {
        push(checks, "energy.trace_profile_bound", json!({"b": b}), || {
            let v = crate::functionals::trace_profile_energy(b)?;
            let two_d = 2.0 * d_constant((1.0 - b) / 2.0)?;
            let mut c = CheckValue::below("energy.trace_profile_bound", json!({"b": b}), if v > 0.0 { 0.0 } else { f64::INFINITY }, 0.5);
            c.measured = v;
            c.params = json!({"b": b, "two_d": two_d});
            Ok(c)
        });
    }
    // scaling covariance of the seminorm
    push(checks, "energy.scaling_exponent", json!({"n": 4, "s": 1.5, "lambda": 1.25}), || {
        let u = make_test_function_by_name("gaussian", cfg.grid(4))?;
        let e = crate::functionals::scaling_exponent(&u, 1.25, |f| Ok(trace_seminorm(f, 1.5)))?;
        Ok(CheckValue::equals(
            "energy.scaling_exponent",
            json!({"n": 4, "s": 1.5, "lambda": 1.25}),
            e,
            4.0 - 2.0 * 1.5,
            1e-3 * ts,
        ))
    });
}

fn group_dtn(cfg: &SuiteConfig, checks: &mut Vec<CheckValue>) {
    let ts = cfg.tol_scale;
    for (n, s) in [(2u32, 0.5), (4, 1.5)] {
        let params = json!({"n": n, "s": s});
        push(checks, "dtn.majorant_decay", params.clone(), || {
            let order = make_order(n, s)?;
            let u = make_test_function_by_name("gaussian", cfg.grid(n))?;
            let mut values = Vec::new();
            for j in 3..=10 {
                values.push(dtn_residual_norm(&u, &order, 0.5f64.powi(j))?);
            }
            let monotone = values.windows(2).all(|w| w[1] < w[0]);
            let final_ratio = values[values.len() - 1] / values[0];
            let c = CheckValue::below(
                "dtn.majorant_decay",
                json!({"n": n, "s": s, "monotone": monotone}),
                if monotone { final_ratio } else { f64::INFINITY },
                1e-2 * ts,
            );
            Ok(c)
        });
    }
}

fn group_taylor(cfg: &SuiteConfig, checks: &mut Vec<CheckValue>) {
    let ts = cfg.tol_scale;
    let params = json!({"n": 4, "s": 1.5, "family": "gaussian"});
    push(checks, "taylor.remainder_small", params.clone(), || {
        let order = make_order(4, 1.5)?;
        let u = make_test_function_by_name("gaussian", cfg.grid(4))?;
        Ok(CheckValue::below(
            "taylor.remainder_small",
            params.clone(),
            taylor_remainder(&u, &order, 0.05)?.abs(),
            1e-3 * ts,
        ))
    });
    push(checks, "taylor.remainder_over_y2", params.clone(), || {
        let order = make_order(4, 1.5)?;
        let u = make_test_function_by_name("gaussian", cfg.grid(4))?;
        let y = 0.025;
        Ok(CheckValue::below(
            "taylor.remainder_over_y2",
            json!({"n": 4, "s": 1.5, "y": y}),
            taylor_remainder(&u, &order, y)?.abs() / (y * y),
            0.1 * ts,
        ))
    });
    push(checks, "taylor.cubic_halving", params.clone(), || {
        let order = make_order(4, 1.5)?;
        let u = make_test_function_by_name("gaussian", cfg.grid(4))?;
        let r1 = taylor_remainder(&u, &order, 0.05)?;
        let r2 = taylor_remainder(&u, &order, 0.025)?;
        Ok(CheckValue::below("taylor.cubic_halving", params.clone(), (r2 / r1).abs(), 0.3 * ts))
    });
    // multiplier-series cross-check of the Taylor coefficients
    for (s, m) in [(1.5, 1u32), (2.5, 1), (2.5, 2)] {
        let params = json!({"s": s, "m": m});
        push(checks, "taylor.kappa_fd", params.clone(), || {
            let fd = kappa_fd_oracle(s, m);
            let exact = kappa(s, m)?;
            Ok(CheckValue::equals_abs(
                "taylor.kappa_fd",
                params.clone(),
                fd / crate::specfun::factorial(2 * m),
                exact / crate::specfun::factorial(2 * m),
                1e-6 * ts,
            ))
        });
    }
    // second-order trace recovery on the axis
    push(checks, "taylor.axis_halving_ratio", json!({"n": 4, "s": 1.5}), || {
        let order = make_order(4, 1.5)?;
        let u = make_test_function_by_name("gaussian", cfg.grid(4))?;
        let ratio = trace_axis_halving(&u, &order, 0.05)?;
        let pass_band = (3.4..=4.6).contains(&ratio);
        Ok(CheckValue::equals(
            "taylor.axis_halving_ratio",
            json!({"n": 4, "s": 1.5, "band": "[3.4, 4.6]"}),
            ratio,
            4.0,
            if pass_band { 0.6 / 4.0 } else { 0.0 },
        ))
    });
}

// two-level Richardson central differences of the multiplier at 0
fn kappa_fd_oracle(s: f64, m: u32) -> f64 {
    let mult = |t: f64| multiplier(s, t).unwrap();
    let d = |h: f64| -> f64 {
        match m {
            1 => 2.0 * (mult(h) - 1.0) / (h * h),
            2 => (2.0 * mult(2.0 * h) - 8.0 * mult(h) + 6.0) / h.powi(4),
            _ => f64::NAN,
        }
    };
    let h = 0.04;
    let e = |h: f64| 2.0 * d(h / 2.0) - d(h);
    (4.0 * e(h / 2.0) - e(h)) / 3.0
}

fn group_limits(cfg: &SuiteConfig, checks: &mut Vec<CheckValue>) {
    let ts = cfg.tol_scale;
    let cases: [(u32, f64, u32); 3] = [(4, 1.5, 1), (6, 2.5, 1), (6, 2.5, 2)];
    for (n, s, m) in cases {
        let params = json!({"n": n, "s": s, "m": m, "y": 1e-3});
        push(checks, "limits.gap", params.clone(), || {
            let order = make_order(n, s)?;
            let u = make_test_function_by_name("gaussian", cfg.grid(n))?;
            Ok(CheckValue::below(
                "limits.gap",
                params.clone(),
                limits_gap(&u, &order, m, 1e-3)?,
                1e-2 * ts,
            ))
        });
    }
    push(checks, "limits.gap_shrinks", json!({"n": 4, "s": 1.5, "m": 1}), || {
        let order = make_order(4, 1.5)?;
        let u = make_test_function_by_name("gaussian", cfg.grid(4))?;
        let g1 = limits_gap(&u, &order, 1, 1e-3)?;
        let g2 = limits_gap(&u, &order, 1, 5e-4)?;
        Ok(CheckValue::below("limits.gap_shrinks", json!({"n": 4, "s": 1.5, "m": 1}), g2 / g1, 1.0))
    });
}

fn group_recursion(cfg: &SuiteConfig, checks: &mut Vec<CheckValue>) {
    let ts = cfg.tol_scale;
    push(checks, "recursion.closed_form", json!({"n": 4, "s": 1.5, "m": 1}), || {
        let order = make_order(4, 1.5)?;
        let u = make_test_function_by_name("gaussian", cfg.grid(4))?;
        Ok(CheckValue::below(
            "recursion.closed_form",
            json!({"n": 4, "s": 1.5, "m": 1}),
            recursion_residual(&u, &order, 1, 0.3)?,
            1e-12 * ts,
        ))
    });
    for m in [1u32, 2] {
        let params = json!({"n": 6, "s": 2.5, "m": m});
        push(checks, "recursion.bessel_route", params.clone(), || {
            let order = make_order(6, 2.5)?;
            let u = make_test_function_by_name("gaussian", cfg.grid(6))?;
            Ok(CheckValue::below(
                "recursion.bessel_route",
                params.clone(),
                recursion_residual(&u, &order, m, 0.3)?,
                1e-8 * ts,
            ))
        });
    }
}

fn group_hardy(cfg: &SuiteConfig, checks: &mut Vec<CheckValue>) {
    let ts = cfg.tol_scale;
    // gaussian in d = 3 measures exactly 3/4
    push(checks, "hardy.gaussian_d3", json!({"n": 2, "k": 1}), || {
        let p = HardyParams::new(2, 1, 0.0, 0.0)?;
        let field = sample_profile(2, &PolyGauss::gaussian(1.0), vec![0.0], vec![0.0]);
        let (q, _) = hardy_quotient(&field, p)?;
        Ok(CheckValue::equals("hardy.gaussian_d3", json!({"n": 2, "k": 1}), q, 0.75, 1e-2 * ts))
    });
    let profiles = [
        ("gaussian", PolyGauss::gaussian(1.0)),
        ("wide_gaussian", PolyGauss::gaussian(0.5)),
        ("ring_gaussian", PolyGauss { lambda: 1.0, terms: vec![(1.0, 0, 0), (0.5, 2, 0)] }),
    ];
    for spec in &cfg.hardy {
        for (label, profile) in &profiles {
            let params = json!({"n": spec.n, "k": spec.k, "a": spec.a, "b": spec.b, "field": label});
            push(checks, "hardy.quotient_bound", params.clone(), || {
                let p = HardyParams::new(spec.n, spec.k, spec.a, spec.b)?;
                let bound = hardy_constant(p)?.powi(2);
                let field = sample_profile(spec.n, profile, vec![0.0], vec![0.0]);
                let (q, path) = hardy_quotient(&field, p)?;
                let mut c = CheckValue::at_least(
                    "hardy.quotient_bound",
                    params.clone(),
                    q,
                    bound * (1.0 - 0.02 * ts),
                );
                c.params = json!({"inputs": params, "path": path});
                Ok(c)
            });
        }
    }
}

fn group_ibp(cfg: &SuiteConfig, checks: &mut Vec<CheckValue>) {
    let ts = cfg.tol_scale;
    let w = PolyGauss::gaussian(1.0);
    let v = PolyGauss { lambda: 2.0, terms: vec![(1.0, 0, 0), (-0.3, 2, 2)] };
    for (k, b) in [(2u32, 0.5), (3, 0.5)] {
        let params = json!({"n": 2, "k": k, "b": b});
        push(checks, "ibp.parts_identity", params.clone(), || {
            Ok(CheckValue::below(
                "ibp.parts_identity",
                params.clone(),
                ibp_check(&IbpCheck::Step1 { w: &w, v: &v, n: 2, k, b })?,
                1e-6 * ts,
            ))
        });
    }
    for (n, s) in [(4u32, 1.5), (2, 0.5)] {
        let params = json!({"n": n, "s": s});
        push(checks, "ibp.orthogonality", params.clone(), || {
            let order = make_order(n, s)?;
            let u = make_test_function_by_name("gaussian", cfg.grid(n))?;
            Ok(CheckValue::below(
                "ibp.orthogonality",
                params.clone(),
                ibp_check(&IbpCheck::Orthogonality { u: &u, order })?,
                1e-3 * ts,
            ))
        });
    }
    push(checks, "ibp.normal_flux", json!({"n": 4, "s": 1.5, "m": 1}), || {
        let order = make_order(4, 1.5)?;
        let u = make_test_function_by_name("gaussian", cfg.grid(4))?;
        let q1 = ibp_check(&IbpCheck::NormalFlux { u: &u, order, m: 1, y: 1e-3 })?;
        let q2 = ibp_check(&IbpCheck::NormalFlux { u: &u, order, m: 1, y: 5e-4 })?;
        Ok(CheckValue::below(
            "ibp.normal_flux",
            json!({"n": 4, "s": 1.5, "m": 1, "decreasing": q2 < q1}),
            if q2 < q1 { q1 } else { f64::INFINITY },
            1e-2 * ts,
        ))
    });
    // the finite-difference derivative cross-path
    push(checks, "ibp.fd_cross_path", json!({"n": 4, "s": 1.5}), || {
        let u = make_test_function_by_name("gaussian", cfg.grid(4))?;
        let ladder = YLadder::geometric(0.5, 2.0, 33);
        let field = extend(&u, 1.5, &ladder)?;
        let ana = crate::extension::delta_b_apply(&field, 0.0, DerivPath::Analytic)?;
        let fd = crate::extension::delta_b_apply(&field, 0.0, DerivPath::FiniteDifference)?;
        let i = field.parent.grid.len() / 2;
        let rel = ((fd[16][i] - ana[16][i]) / ana[16][i]).abs();
        Ok(CheckValue::below("ibp.fd_cross_path", json!({"n": 4, "s": 1.5}), rel, 1e-3 * ts))
    });
}

fn group_boundedness(cfg: &SuiteConfig, checks: &mut Vec<CheckValue>) {
    for (n, s) in [(4u32, 1.5), (2, 0.75)] {
        for fam in &cfg.families {
            // the denominator needs a closed physical profile; families
            // without one are outside this check's scope
            if Family::parse(fam).ok().and_then(|f| f.physical_profile(n)).is_none() {
                continue;
            }
            let params = json!({"n": n, "s": s, "family": fam});
            push(checks, "boundedness.ratio_spread", params.clone(), || {
                let order = make_order(n, s)?;
                let u = make_test_function_by_name(fam, cfg.grid(n))?;
                let sigma = order.frac;
                let mut ratios = Vec::new();
                for alpha in [sigma, sigma + 1.0, order.s, order.s + 1.0] {
                    ratios.push(boundedness_ratio(&u, &order, alpha)?);
                }
                let max = ratios.iter().cloned().fold(0.0f64, f64::max);
                let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
                Ok(CheckValue::below(
                    "boundedness.ratio_spread",
                    json!({"inputs": params, "ratios": ratios}),
                    max / min,
                    10.0,
                ))
            });
        }
    }
}

/// Output format of a written report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
}

pub fn render_report(report: &VerificationReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Text => {
            let mut out = String::new();
            out.push_str(&format!("verification report v{}\n", report.version));
            out.push_str(&format!(
                "{:<38} {:>14} {:>14} {:>10}  status\n",
                "check", "measured", "expected", "tol"
            ));
            for c in &report.checks {
                let expected = c.expected.map_or("-".to_string(), |e| format!("{e:.6e}"));
                out.push_str(&format!(
                    "{:<38} {:>14.6e} {:>14} {:>10.2e}  {}\n",
                    c.name,
                    c.measured,
                    expected,
                    c.tol,
                    if c.pass { "ok" } else { "FAIL" }
                ));
            }
            out.push_str(&format!(
                "summary: {} checks, {} passed, {} failed\n",
                report.summary.total, report.summary.passed, report.summary.failed
            ));
            out
        }
    }
}

/// Serialize a report to disk.
pub fn write_report(report: &VerificationReport, path: &Path, format: ReportFormat) -> Result<()> {
    std::fs::write(path, render_report(report, format))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        let ok = SuiteConfig::default();
        assert!(ok.validate().is_ok());
        let mut bad = SuiteConfig::default();
        bad.orders.push(OrderSpec { n: 2, s: 1.2 }); // violates s < n/2
        let err = bad.validate().unwrap_err().to_string();
        assert!(err.contains("orders[4]"), "{err}");
        let mut bad = SuiteConfig::default();
        bad.groups.push("plotting".into());
        assert!(bad.validate().is_err());
        let empty = SuiteConfig { groups: vec![], ..SuiteConfig::default() };
        let report = run_suite(&empty).unwrap();
        assert_eq!(report.summary.total, 0);
        assert_eq!(report.summary.failed, 0);
    }

    #[test]
    fn constants_group_all_pass() {
        let cfg = SuiteConfig { groups: vec!["constants".into()], ..SuiteConfig::default() };
        let report = run_suite(&cfg).unwrap();
        assert!(report.summary.total >= 15);
        for c in &report.checks {
            assert!(c.pass, "{}: measured {} params {}", c.name, c.measured, c.params);
        }
    }

    #[test]
    fn failures_are_rows_not_crashes() {
        // an inadmissible Hardy spec is caught by validation...
        let mut cfg = SuiteConfig { groups: vec!["hardy".into()], ..SuiteConfig::default() };
        cfg.hardy.push(HardySpec { n: 2, k: 1, a: 0.5, b: -0.4 });
        assert!(run_suite(&cfg).is_err());
    }

    #[test]
    fn json_round_trip_and_determinism() {
        let cfg = SuiteConfig { groups: vec!["constants".into()], ..SuiteConfig::default() };
        let r1 = run_suite(&cfg).unwrap();
        let r2 = run_suite(&cfg).unwrap();
        let mut v1: serde_json::Value = serde_json::from_str(&render_report(&r1, ReportFormat::Json)).unwrap();
        let mut v2: serde_json::Value = serde_json::from_str(&render_report(&r2, ReportFormat::Json)).unwrap();
        v1["wall_ms"] = serde_json::Value::Null;
        v2["wall_ms"] = serde_json::Value::Null;
        assert_eq!(v1, v2);
        // text format marks failures
        let mut r3 = r1.clone();
        r3.checks.push(CheckValue::below("x", serde_json::json!({}), 2.0, 1.0));
        let text = render_report(&r3, ReportFormat::Text);
        assert!(text.contains("FAIL"));
    }
}
