//! Quasi-relativistic `(alpha Z)^2` expansions and exact nonrelativistic limits.

use num_rational::Rational64;

use crate::error::Result;
use crate::perturb::energy_breakdown;
use crate::qnum::{Channel, PhysicsConfig, QuantumState};

fn half_n(n: u32) -> f64 {
    f64::from(n) - 0.5
}

/// `eps0 ~ -1/(2h^2) [1 + (alpha Z)^2 (h/|kappa| - 3/4)/h^2]`, `h = n - 1/2`.
pub fn quasirel_eps0(channel: Channel, config: &PhysicsConfig) -> f64 {
    let h = half_n(channel.n);
    let az = config.alpha_z();
    let ak = channel.kappa.value().abs();
    -1.0 / (2.0 * h * h) * (1.0 + az * az * (h / ak - 0.75) / (h * h))
}

pub fn quasirel_eps1(state: &QuantumState, config: &PhysicsConfig) -> f64 {
    let h = half_n(state.n);
    let az2 = config.alpha_z().powi(2);
    let k = state.kappa.value();
    let m = state.m_kappa.value();
    if state.kappa.twice() == 1 {
        return -az2 * m / (4.0 * h * h);
    }
    m * (2.0 * k - 1.0) / (4.0 * k) * (1.0 - az2 * k / ((2.0 * k - 1.0) * h * h))
}

/// `20 n^2 - 20 n - 12 kappa^2 - 12 kappa + 9`.
fn eps2_factor(channel: Channel) -> f64 {
    let n = f64::from(channel.n);
    let k = channel.kappa.value();
    20.0 * n * n - 20.0 * n - 12.0 * k * k - 12.0 * k + 9.0
}

/// The `(alpha Z)^2` coefficient polynomial of the second-order expansion.
pub fn beta2(channel: Channel) -> f64 {
    let n = f64::from(channel.n);
    let k = channel.kappa.value();
    let a = k.abs();
    -80.0 * n.powi(3) + 120.0 * n * n + 44.0 * n * n * a - 68.0 * n + 24.0 * n * k * k + 24.0 * n * k
        - 44.0 * n * a
        - 28.0 * k * k * a
        + 8.0 * k * a
        - 12.0 * k * k
        - 12.0 * k
        + 15.0 * a
        + 14.0
}

pub fn quasirel_eps2(channel: Channel, config: &PhysicsConfig) -> f64 {
    let h = half_n(channel.n);
    let f = eps2_factor(channel);
    let az2 = config.alpha_z().powi(2);
    let ak = channel.kappa.value().abs();
    h * h * f / 64.0 * (1.0 + az2 * beta2(channel) / (2.0 * ak * h * h * f))
}

/// `-1/(2 (n - 1/2)^2)`.
pub fn nonrel_eps0(n: u32) -> Rational64 {
    let h = 2 * i64::from(n) - 1;
    Rational64::new(-2, h * h)
}

/// `m (2 kappa - 1)/(4 kappa)`, which vanishes for `kappa = 1/2`.
pub fn nonrel_eps1(state: &QuantumState) -> Rational64 {
    let tm = i64::from(state.m_kappa.twice());
    let tk = i64::from(state.kappa.twice());
    Rational64::new(tm * (tk - 1), 4 * tk)
}

/// `(m_l + 2 m_s)/2` from doubled quantum numbers.
pub fn nonrel_eps1_ml_ms(two_ml: i32, two_ms: i32) -> Rational64 {
    Rational64::new(i64::from(two_ml) + 2 * i64::from(two_ms), 4)
}

/// `(n - 1/2)^2 (20 n^2 - 20 n - 12 kappa^2 - 12 kappa + 9)/64`.
pub fn nonrel_eps2_kappa(channel: Channel) -> Rational64 {
    let n = i64::from(channel.n);
    let tk = i64::from(channel.two_kappa());
    let h = 2 * n - 1;
    Rational64::new(h * h * (20 * n * n - 20 * n - 3 * tk * tk - 6 * tk + 9), 256)
}

/// `(n - 1/2)^2 (5 n^2 - 5 n - 3 l^2 + 3)/16`.
pub fn nonrel_eps2_l(n: u32, l: u32) -> Rational64 {
    let n = i64::from(n);
    let l = i64::from(l);
    let h = 2 * n - 1;
    Rational64::new(h * h * (5 * n * n - 5 * n - 3 * l * l + 3), 64)
}

pub fn rational_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Polynomial extrapolation to `u = 0` of samples `(u_i, v_i)` (Neville).
pub fn extrapolate_to_zero(us: &[f64], values: &[f64]) -> f64 {
    assert_eq!(us.len(), values.len());
    let mut p = values.to_vec();
    let n = p.len();
    for step in 1..n {
        for i in 0..n - step {
            let (ui, uj) = (us[i], us[i + step]);
            p[i] = (uj * p[i] - ui * p[i + 1]) / (uj - ui);
        }
    }
    p[0]
}

/// Coefficients `(eps0, eps1, eps2)` extrapolated to `alpha -> 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitCoefficients {
    pub eps0: f64,
    pub eps1: f64,
    pub eps2: f64,
}

/// Samples `alpha_scale = base * t` for `t` in `{1, 1/2, 1/4, 1/8}` and
/// extrapolates in `t^2`, the natural variable of every coefficient.
pub fn extrapolate_nonrel(state: &QuantumState, z: f64, base_scale: f64) -> Result<LimitCoefficients> {
    let ts = [1.0, 0.5, 0.25, 0.125];
    let mut us = Vec::new();
    let mut cols = [Vec::new(), Vec::new(), Vec::new()];
    for t in ts {
        let cfg = PhysicsConfig::with_alpha_scale(z, base_scale * t)?;
        let b = energy_breakdown(state, &cfg)?;
        us.push(t * t);
        cols[0].push(b.eps0);
        cols[1].push(b.eps1);
        cols[2].push(b.eps2);
    }
    Ok(LimitCoefficients {
        eps0: extrapolate_to_zero(&us, &cols[0]),
        eps1: extrapolate_to_zero(&us, &cols[1]),
        eps2: extrapolate_to_zero(&us, &cols[2]),
    })
}

/// `|exact - quasirel|` for the three coefficients at one `alpha Z`.
#[derive(Clone, Copy, Debug)]
pub struct ExpansionResidual {
    pub alpha_z: f64,
    pub eps0: f64,
    pub eps1: f64,
    pub eps2: f64,
}

pub fn expansion_residual(state: &QuantumState, alpha_z: f64) -> Result<ExpansionResidual> {
    let cfg = PhysicsConfig::new(1.0, alpha_z, 1.0)?;
    let b = energy_breakdown(state, &cfg)?;
    let ch = state.channel();
    Ok(ExpansionResidual {
        alpha_z,
        eps0: (b.eps0 - quasirel_eps0(ch, &cfg)).abs(),
        eps1: (b.eps1 - quasirel_eps1(state, &cfg)).abs(),
        eps2: (b.eps2 - quasirel_eps2(ch, &cfg)).abs(),
    })
}

/// Ratios of successive residuals along `alpha Z = start, start/2, ...`
/// (`steps` halvings), as `[eps0, eps1, eps2]` per step.
pub fn halving_ratios(state: &QuantumState, start: f64, steps: usize) -> Result<Vec<[f64; 3]>> {
    let mut out = Vec::with_capacity(steps);
    let mut prev = expansion_residual(state, start)?;
    let mut az = start;
    for _ in 0..steps {
        az /= 2.0;
        let next = expansion_residual(state, az)?;
        out.push([prev.eps0 / next.eps0, prev.eps1 / next.eps1, prev.eps2 / next.eps2]);
        prev = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qnum::{enumerate_channels, enumerate_states, ml_ms};

    fn ch(n: u32, tk: i32) -> Channel {
        Channel::new(n, tk).unwrap()
    }

    #[test]
    fn ground_state_expansions() {
        let cfg = PhysicsConfig::new(1.0, 0.01, 1.0).unwrap();
        let g = ch(1, -1);
        assert!((quasirel_eps0(g, &cfg) + 2.0 * (1.0 + 1e-4)).abs() < 1e-15);
        let s = g.state(true);
        assert!((quasirel_eps1(&s, &cfg) - 0.5 * (1.0 - 1e-4)).abs() < 1e-15);
        assert!((quasirel_eps2(g, &cfg) - 3.0 / 64.0 * (1.0 - 5e-4)).abs() < 1e-15);
    }

    #[test]
    fn kappa_half_branch_is_second_order() {
        let cfg = PhysicsConfig::new(1.0, 0.02, 1.0).unwrap();
        let s = ch(3, 1).state(true);
        let want = -4e-4 * 0.5 / (4.0 * 2.5 * 2.5);
        assert!((quasirel_eps1(&s, &cfg) - want).abs() < 1e-18);
    }

    #[test]
    fn nonrel_forms_agree() {
        for c in enumerate_channels(10) {
            assert_eq!(nonrel_eps2_kappa(c), nonrel_eps2_l(c.n, c.l()), "{c}");
        }
        for s in enumerate_states(10) {
            let (ml, ms) = ml_ms(s.kappa, s.m_kappa);
            assert_eq!(nonrel_eps1(&s), nonrel_eps1_ml_ms(ml, ms), "{}", s.label());
        }
        assert_eq!(nonrel_eps2_l(3, 2), Rational64::new(525, 64));
        assert_eq!(nonrel_eps0(3), Rational64::new(-2, 25));
    }

    #[test]
    fn neville_recovers_quadratic() {
        let us = [1.0, 0.25, 0.0625];
        let vs: Vec<f64> = us.iter().map(|u| 3.0 - 2.0 * u + 0.5 * u * u).collect();
        assert!((extrapolate_to_zero(&us, &vs) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn extrapolated_limits_match_rationals() {
        for s in enumerate_states(4) {
            let l = extrapolate_nonrel(&s, 1.0, 0.5).unwrap();
            let c = s.channel();
            assert!((l.eps0 - rational_to_f64(nonrel_eps0(s.n))).abs() < 1e-8, "{}", s.label());
            assert!((l.eps1 - rational_to_f64(nonrel_eps1(&s))).abs() < 1e-8, "{}", s.label());
            let e2 = rational_to_f64(nonrel_eps2_kappa(c));
            assert!((l.eps2 - e2).abs() < 1e-8 * e2, "{}", s.label());
        }
    }

    #[test]
    fn residuals_scale_as_fourth_power() {
        let s = ch(2, -3).state(true);
        let r = halving_ratios(&s, 0.4, 3).unwrap();
        let last = r.last().unwrap();
        for v in last {
            assert!((14.0..18.0).contains(v), "{r:?}");
        }
    }
}
