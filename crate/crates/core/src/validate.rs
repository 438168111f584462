//! Named invariant suites with pass/fail counts.
//!
//! Every check reduces to a worst-case error compared against a tolerance,
//! so reports print uniformly and failures carry their magnitude.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coulomb::{channel_overlap, eigen_residual, eps0_coefficient, eps0_coefficient_real};
use crate::error::{Error, Result};
use crate::limits::{
    extrapolate_nonrel, halving_ratios, nonrel_eps0, nonrel_eps1, nonrel_eps2_kappa, rational_to_f64,
};
use crate::perturb::{
    e1_coefficient_real, e1_nodeless, e1_via_quadrature, e2_assembled_with, e2_coefficient, e2_coefficient_real,
    default_window, magnetizability, magnetizability_ground, magnetizability_nodeless, OverlapSource,
};
use crate::qnum::{enumerate_channels, enumerate_states, Channel, ChannelParams, HalfOdd, PhysicsConfig};
use crate::radial::RadialIntegrator;
use crate::real::{rel_diff, DoubleDouble, Real};
use crate::specfun::{
    gauss_generalized_laguerre, laguerre, laguerre_integral_identity, laguerre_square_moment, laguerre_x_moment,
};
use crate::spinors::verify_all;
use crate::sturmian::{mu_eigenvalue, SturmianContext};
use crate::tables::{table_channels, table_eps0, table_eps1, table_eps2, table_nonrel, Gammas};
use crate::units::{b0_tesla, degeneracy};
use crate::variational::{perturbation_cross_check, DEFAULT_B_GRID, DEFAULT_BASIS_SIZE};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, worst: f64, tolerance: f64) -> Self {
        Self { name: name.into(), worst, tolerance, passed: worst <= tolerance }
    }

    /// A check that is either satisfied or not.
    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self { name: name.into(), worst: if ok { 0.0 } else { 1.0 }, tolerance: 0.0, passed: ok }
    }

    /// An error raised while running the check counts as a failure.
    fn from_result(name: &str, r: Result<Check>) -> Self {
        r.unwrap_or_else(|e| Self { name: format!("{name}: {e}"), worst: f64::INFINITY, tolerance: 0.0, passed: false })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Quadrature,
    Coulomb,
    Sturmian,
    Perturb,
    Limits,
    Spinors,
    Variational,
    All,
}

impl Suite {
    pub const MEMBERS: [Suite; 7] = [
        Suite::Quadrature,
        Suite::Coulomb,
        Suite::Sturmian,
        Suite::Perturb,
        Suite::Limits,
        Suite::Spinors,
        Suite::Variational,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Quadrature => "quadrature",
            Suite::Coulomb => "coulomb",
            Suite::Sturmian => "sturmian",
            Suite::Perturb => "perturb",
            Suite::Limits => "limits",
            Suite::Spinors => "spinors",
            Suite::Variational => "variational",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::MEMBERS
            .iter()
            .chain([Suite::All].iter())
            .find(|m| m.name() == s)
            .copied()
            .ok_or_else(|| {
                Error::Domain(format!(
                    "unknown suite {s:?}; expected one of quadrature, coulomb, sturmian, perturb, limits, spinors, variational, all"
                ))
            })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn failed(&self) -> usize {
        self.checks.len() - self.passed()
    }
}

/// Runs one suite, or every suite for [`Suite::All`].
pub fn run_suite(suite: Suite) -> Vec<SuiteReport> {
    match suite {
        Suite::All => Suite::MEMBERS.iter().flat_map(|&s| run_suite(s)).collect(),
        s => {
            let checks = match s {
                Suite::Quadrature => quadrature_checks(),
                Suite::Coulomb => coulomb_checks(),
                Suite::Sturmian => sturmian_checks(),
                Suite::Perturb => perturb_checks(),
                Suite::Limits => limits_checks(),
                Suite::Spinors => spinor_checks(),
                Suite::Variational => variational_checks(),
                Suite::All => unreachable!(),
            };
            vec![SuiteReport { suite: s, checks }]
        }
    }
}

/// Worst errors of the three Laguerre integral identities (square moment,
/// general double sum, tridiagonal `x` moment) against Gauss quadrature, for
/// `n, n' <= n_max` and every upper index in `alphas`. Errors are relative to
/// the quadrature's absolute sum, the natural scale of the cancellation.
pub fn laguerre_identity_errors(n_max: u32, alphas: &[f64]) -> Result<[f64; 3]> {
    let mut worst = [0.0f64; 3];
    let order = 2 * n_max as usize + 12;
    let scaled = |rule: &crate::specfun::QuadratureRule, f: &dyn Fn(f64) -> f64, closed: f64| {
        let (sum, abs) = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .fold((0.0, 0.0), |(s, a), (&x, &w)| (s + w * f(x), a + (w * f(x)).abs()));
        (sum - closed).abs() / abs.max(closed.abs())
    };
    for &a in alphas {
        let moment_rule = gauss_generalized_laguerre(order, a + 1.0)?;
        for n in 0..=n_max {
            let ln = |x: f64| laguerre(i64::from(n), a, x).expect("valid index");
            let sq = laguerre_square_moment(n, a)?;
            worst[0] = worst[0].max(scaled(&moment_rule, &|x| ln(x) * ln(x), sq));
            for np in 0..=n_max {
                let lnp = |x: f64| laguerre(i64::from(np), a, x).expect("valid index");
                let xm = laguerre_x_moment(n, np, a)?;
                worst[2] = worst[2].max(scaled(&moment_rule, &|x| ln(x) * lnp(x), xm));
                for (b, g) in [(a, a), (a + 1.0, a + 0.5), (a * 0.5, a + 2.0)] {
                    let rule = gauss_generalized_laguerre(order, g)?;
                    let lb = |x: f64| laguerre(i64::from(np), b, x).expect("valid index");
                    let closed = laguerre_integral_identity(n, np, a, b, g)?;
                    worst[1] = worst[1].max(scaled(&rule, &|x| ln(x) * lb(x), closed));
                }
            }
        }
    }
    Ok(worst)
}

/// `max |<n kappa|n' kappa> - delta|` over channels with `n <= n_max`.
pub fn orthonormality_error(n_max: u32, config: &PhysicsConfig) -> Result<(f64, f64)> {
    let chans = enumerate_channels(n_max);
    let (mut diag, mut off) = (0.0f64, 0.0f64);
    for a in &chans {
        for b in chans.iter().filter(|b| b.kappa == a.kappa) {
            let v = channel_overlap(*a, *b, config)?;
            if a == b {
                diag = diag.max((v - 1.0).abs());
            } else {
                off = off.max(v.abs());
            }
        }
    }
    Ok((diag, off))
}

/// Worst deviation of both Sturmian Gram relations on `|n_r'| <= window`.
pub fn gram_error(kappa: HalfOdd, e: f64, window: i32, config: &PhysicsConfig) -> Result<f64> {
    let ctx = SturmianContext::<f64>::at_energy(kappa, e, config)?;
    let funcs = (-window..=window).map(|n| ctx.pair(n)).collect::<Result<Vec<_>>>()?;
    let integ = RadialIntegrator::new(ctx.gamma, ctx.k, window as usize + 2)?;
    let c = 1.0 / ctx.alpha;
    let mut worst = 0.0f64;
    for a in &funcs {
        for b in &funcs {
            let pot = config.z
                * (a.mu * integ.integrate(&a.s, &b.s, -1)? - integ.integrate(&a.t, &b.t, -1)? / b.mu);
            let kin = c
                * ctx.k
                * (ctx.epsilon * integ.integrate(&a.s, &b.s, 0)? + integ.integrate(&a.t, &b.t, 0)? / ctx.epsilon);
            let want = if a.n_r_prime == b.n_r_prime { 1.0 } else { 0.0 };
            worst = worst.max((pot - want).abs()).max((kin - want).abs());
        }
    }
    Ok(worst)
}

/// Worst relative gap between the quadrature of `int r P Q` and its closed
/// bracket, and between the general `eps1` and its `n_r = 0` form.
pub fn first_order_errors(n_max: u32, config: &PhysicsConfig) -> Result<(f64, f64)> {
    let (mut quad, mut nodeless) = (0.0f64, 0.0f64);
    for s in enumerate_states(n_max) {
        let q = e1_via_quadrature(&s, config)?;
        quad = quad.max(rel_diff(q.rpq_over_alpha, q.rpq_closed));
        if s.n_r() == 0 {
            let p = ChannelParams::<f64>::new(s.channel(), config)?;
            nodeless = nodeless.max(rel_diff(e1_coefficient_real(&p, s.m_over_kappa()), e1_nodeless(&s, config)?));
        }
    }
    Ok((quad, nodeless))
}

/// Worst relative gap between the assembled Sturmian sum (both overlap
/// sources) and the closed `eps2`.
pub fn two_path_error(n_max: u32, zs: &[f64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &z in zs {
        let cfg = PhysicsConfig::codata(z)?;
        for c in enumerate_channels(n_max) {
            let closed = e2_coefficient(c, &cfg)?;
            for src in [OverlapSource::ClosedForm, OverlapSource::Quadrature] {
                let sum = e2_assembled_with(c, &cfg, default_window(c), src)?.total;
                worst = worst.max(rel_diff(sum, closed));
            }
        }
    }
    Ok(worst)
}

/// Worst relative gap between the general coefficients and the literal
/// per-state expressions, both in double-double.
pub fn table_formula_error(config: &PhysicsConfig) -> Result<f64> {
    type D = DoubleDouble;
    let g = Gammas::<D>::new(config)?;
    let mut worst = 0.0f64;
    for c in table_channels() {
        let p = ChannelParams::<D>::new(c, config)?;
        let general = [
            eps0_coefficient_real(&p),
            e1_coefficient_real(&p, c.state(true).m_over_kappa()),
            e2_coefficient_real(&p),
        ];
        let literal = [table_eps0(c, &g)?, table_eps1(c, true, &g)?, table_eps2(c, &g)?];
        for (a, b) in general.iter().zip(&literal) {
            worst = worst.max(rel_diff(*a, *b).to_f64());
        }
    }
    Ok(worst)
}

/// Worst relative gap between extrapolated `alpha -> 0` coefficients of the
/// nine tabulated states (both signs of `m`) and the printed rational columns.
pub fn nonrel_table_error(base_scale: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    for c in table_channels() {
        let (e0, e1, e2) = table_nonrel(c)?;
        for positive in [true, false] {
            let s = c.state(positive);
            let l = extrapolate_nonrel(&s, 1.0, base_scale)?;
            let sgn = if positive { 1.0 } else { -1.0 };
            let want = [rational_to_f64(e0), sgn * rational_to_f64(e1), rational_to_f64(e2)];
            for (got, want) in [l.eps0, l.eps1, l.eps2].iter().zip(want) {
                let err = if want == 0.0 { got.abs() } else { rel_diff(*got, want) };
                worst = worst.max(err);
            }
        }
    }
    Ok(worst)
}

/// Smallest and largest residual ratio under `alpha Z -> alpha Z/2` over the
/// nine tabulated states, starting at `start` for `steps` halvings.
pub fn halving_band(start: f64, steps: usize) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for c in table_channels() {
        for r in halving_ratios(&c.state(true), start, steps)? {
            for v in r {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
    }
    Ok((lo, hi))
}

/// Worst relative gap between the general magnetizability and the reduced
/// `n_r = 0` form, for `n <= n_max`.
pub fn nodeless_chi_error(n_max: u32, config: &PhysicsConfig) -> Result<f64> {
    let mut worst = 0.0f64;
    for c in enumerate_channels(n_max).into_iter().filter(|c| c.n_r() == 0) {
        worst = worst.max(rel_diff(magnetizability(c, config)?, magnetizability_nodeless(c, config)?));
    }
    Ok(worst)
}

/// Largest ground-state magnetizability over a uniform grid of `alpha Z` in
/// `(0, alpha_z_max)`; negative means diamagnetic everywhere on the grid.
pub fn ground_chi_max(alpha_z_max: f64, points: usize) -> Result<f64> {
    let mut worst = f64::NEG_INFINITY;
    for i in 1..=points {
        let az = alpha_z_max * i as f64 / (points + 1) as f64;
        worst = worst.max(magnetizability_ground(&PhysicsConfig::new(1.0, az, 1.0)?)?);
    }
    Ok(worst)
}

fn quadrature_checks() -> Vec<Check> {
    let alphas = [0.2, 0.999_946_7, 1.9, 3.0, 5.5];
    match laguerre_identity_errors(8, &alphas) {
        Ok([sq, general, xm]) => vec![
            Check::new("square-moment identity vs quadrature, n <= 8", sq, 1e-10),
            Check::new("general two-index identity vs quadrature, n, n' <= 8", general, 1e-10),
            Check::new("tridiagonal x-moment identity vs quadrature, n, n' <= 8", xm, 1e-10),
        ],
        Err(e) => vec![Check::from_result("Laguerre identities", Err(e))],
    }
}

fn coulomb_checks() -> Vec<Check> {
    let mut out = Vec::new();
    for z in [1.0, 40.0, 68.0] {
        let name = format!("orthonormality n <= 5, Z = {z}");
        match PhysicsConfig::codata(z).and_then(|cfg| orthonormality_error(5, &cfg)) {
            Ok((d, o)) => {
                out.push(Check::new(format!("{name}: diagonal"), d, 1e-9));
                out.push(Check::new(format!("{name}: off-diagonal"), o, 1e-9));
            }
            Err(e) => out.push(Check::from_result(&name, Err(e))),
        }
    }
    out.push(Check::from_result(
        "eigen-residual n <= 4, Z in {1, 40}",
        (|| {
            let mut worst = 0.0f64;
            for z in [1.0, 40.0] {
                let cfg = PhysicsConfig::codata(z)?;
                for c in enumerate_channels(4) {
                    worst = worst.max(eigen_residual(c, &cfg)?.abs());
                }
            }
            Ok(Check::new("eigen-residual n <= 4, Z in {1, 40} (Hartree)", worst, 1e-8))
        })(),
    ));
    out.push(Check::flag(
        "degeneracy 2(2n-1) for n <= 10",
        (1..=10u32).all(|n| degeneracy(n) == 2 * (2 * n as usize - 1)),
    ));
    out.push(Check::new("B0 within 0.5% of 2.35e5 T", (b0_tesla() / 2.35e5 - 1.0).abs(), 5e-3));
    out.push(Check::from_result(
        "nonrelativistic eps0",
        (|| {
            let cfg = PhysicsConfig::with_alpha_scale(1.0, 1e-6)?;
            let mut worst = 0.0f64;
            for c in enumerate_channels(5) {
                worst = worst.max((eps0_coefficient(c, &cfg)? - rational_to_f64(nonrel_eps0(c.n))).abs());
            }
            Ok(Check::new("eps0 at alpha_scale 1e-6 vs -1/(2(n-1/2)^2)", worst, 1e-9))
        })(),
    ));
    out
}

fn sturmian_checks() -> Vec<Check> {
    let mut out = Vec::new();
    for (tk, z, e) in [(-1, 1.0, 0.9), (1, 30.0, 0.5), (-3, 5.0, 0.99), (5, 60.0, 0.8)] {
        let name = format!("Gram relations |n_r'| <= 6, 2kappa = {tk}, Z = {z}, E/mc2 = {e}");
        out.push(Check::from_result(
            &name,
            (|| {
                let cfg = PhysicsConfig::codata(z)?;
                Ok(Check::new(name.clone(), gram_error(HalfOdd::from_twice(tk)?, e, 6, &cfg)?, 1e-9))
            })(),
        ));
    }
    out.push(Check::from_result(
        "mu = 1 at bound energies",
        (|| {
            let mut worst = 0.0f64;
            for z in [1.0, 7.0, 60.0] {
                let cfg = PhysicsConfig::codata(z)?;
                for c in enumerate_channels(4) {
                    let e0 = crate::coulomb::energy0(c, &cfg)?;
                    worst = worst.max((mu_eigenvalue(c.n_r() as i32, c.kappa, e0, &cfg)? - 1.0).abs());
                }
            }
            Ok(Check::new("mu_{n_r} = 1 at E0, n <= 4", worst, 1e-10))
        })(),
    ));
    out
}

fn perturb_checks() -> Vec<Check> {
    let mut out = Vec::new();
    for z in [1.0, 40.0] {
        let name = format!("first order, n <= 4, Z = {z}");
        match PhysicsConfig::codata(z).and_then(|cfg| first_order_errors(4, &cfg)) {
            Ok((q, n)) => {
                out.push(Check::new(format!("{name}: quadrature vs closed bracket"), q, 1e-10));
                out.push(Check::new(format!("{name}: nodeless form"), n, 1e-12));
            }
            Err(e) => out.push(Check::from_result(&name, Err(e))),
        }
    }
    out.push(Check::from_result(
        "two-path eps2",
        two_path_error(4, &[1.0, 10.0, 40.0, 60.0])
            .map(|w| Check::new("two-path eps2 (Sturmian sum vs closed), n <= 4, Z in {1,10,40,60}", w, 1e-9)),
    ));
    out.push(Check::from_result(
        "nodeless chi",
        PhysicsConfig::codata(30.0)
            .and_then(|cfg| nodeless_chi_error(6, &cfg))
            .map(|w| Check::new("nodeless chi vs general chi, n <= 6", w, 1e-12)),
    ));
    out.push(Check::from_result(
        "ground chi",
        ground_chi_max(0.46, 200).map(|w| Check::new("ground-state chi < 0 for alpha Z < 0.46", w.max(0.0), 0.0)),
    ));
    out
}

fn limits_checks() -> Vec<Check> {
    let mut out = Vec::new();
    out.push(Check::from_result(
        "nonrel tables",
        nonrel_table_error(1e-4).map(|w| Check::new("extrapolated nonrelativistic columns, nine states", w, 1e-8)),
    ));
    for az in [ALPHA_Z_CODATA, 0.4] {
        let name = format!("general vs literal table formulas at alpha Z = {az}");
        out.push(Check::from_result(
            &name,
            PhysicsConfig::new(1.0, az, 1.0)
                .and_then(|cfg| table_formula_error(&cfg))
                .map(|w| Check::new(name.clone(), w, 1e-12)),
        ));
    }
    out.push(Check::from_result(
        "asymptotic scaling",
        halving_band(0.1, 1).map(|(lo, hi)| {
            Check::new("residual ratio 16 +- 3 for alpha Z 0.1 -> 0.05", (lo - 16.0).abs().max((hi - 16.0).abs()), 3.0)
        }),
    ));
    out.push(Check::from_result(
        "nonrel ground chi",
        extrapolate_nonrel(&Channel::new(1, -1).expect("ground").state(true), 1.0, 1e-4)
            .map(|l| Check::new("nonrelativistic ground chi = -3/32", rel_diff(-2.0 * l.eps2, -3.0 / 32.0), 1e-8)),
    ));
    out.push(Check::flag(
        "exact rational columns are consistent",
        table_channels().into_iter().all(|c| {
            let (e0, e1, e2) = table_nonrel(c).expect("tabulated");
            let s = c.state(true);
            e0 == nonrel_eps0(c.n) && e1 * s.m_kappa.twice().signum() as i64 == nonrel_eps1(&s) && e2 == nonrel_eps2_kappa(c)
        }),
    ));
    out
}

/// `alpha Z` for `Z = 1` with CODATA `alpha`.
const ALPHA_Z_CODATA: f64 = crate::qnum::ALPHA_CODATA;

fn spinor_checks() -> Vec<Check> {
    match verify_all(7, 256) {
        Ok(reports) => reports
            .into_iter()
            .flat_map(|r| {
                let tag = r.spinor.map(|s| format!("{s}: ")).unwrap_or_default();
                r.checks
                    .into_iter()
                    .map(move |c| Check::new(format!("{tag}{}", c.identity), c.max_error, c.tolerance))
            })
            .collect(),
        Err(e) => vec![Check::from_result("spinor identities", Err(e))],
    }
}

fn variational_checks() -> Vec<Check> {
    let mut out = Vec::new();
    let ground = Channel::new(1, -1).expect("ground").state(true);
    let p32 = Channel::new(2, -3).expect("2p3/2").state(true);
    out.push(Check::from_result(
        "variational 2p3/2",
        PhysicsConfig::codata(20.0)
            .and_then(|cfg| perturbation_cross_check(&p32, &cfg, &DEFAULT_B_GRID, DEFAULT_BASIS_SIZE))
            .map(|r| {
                let slope = r.fitted_power.unwrap_or(f64::NAN);
                Check::new("2p3/2, Z = 20: residual slope 3 +- 0.3", (slope - 3.0).abs(), 0.3)
            }),
    ));
    out.push(Check::from_result(
        "variational E(0)",
        PhysicsConfig::codata(1.0)
            .and_then(|cfg| perturbation_cross_check(&ground, &cfg, &[], DEFAULT_BASIS_SIZE))
            .map(|r| Check::new("1s, Z = 1: variational E(0) - E0 (Hartree)", r.e0_error.abs(), 1e-12)),
    ));
    out.push(Check::from_result(
        "basis robustness",
        (|| {
            let cfg = PhysicsConfig::codata(1.0)?;
            let a = perturbation_cross_check(&ground, &cfg, &[1e-3], 20)?;
            let b = perturbation_cross_check(&ground, &cfg, &[1e-3], 40)?;
            Ok(Check::new(
                "1s, Z = 1, B/B0 = 1e-3: basis 20 vs 40 (Hartree)",
                (a.rows[0].e_var - b.rows[0].e_var).abs(),
                1e-9,
            ))
        })(),
    ));
    out
}
