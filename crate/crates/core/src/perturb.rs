//! First- and second-order Zeeman coefficients and the magnetizability.
//!
//! Coefficients are dimensionless: `E1 = eps1 (B/B0)` Hartree and
//! `E2 = eps2 Z^-2 (B/B0)^2` Hartree. Radial overlaps are reported after
//! division by `alpha` (for `int r P Q`) or by `alpha/Z` (for the
//! Sturmian overlaps), which leaves pure numbers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coulomb::{eps0_coefficient_real, radial_orbital_real, EnergyBreakdown, RadialOrbital, UnitsPolicy};
use crate::error::{Error, Result};
use crate::qnum::{Channel, ChannelParams, PhysicsConfig, QuantumState};
use crate::radial::RadialIntegrator;
use crate::real::{factorial, pochhammer, DoubleDouble, Real};
use crate::sturmian::SturmianContext;

/// `[1 - 2 kappa (n_r + gamma)/N] / 4`, the reduced value of `int r P Q dr / alpha`.
///
/// For `kappa = 1/2` the bracket is evaluated as `(alpha Z)^2 / (N (N + n_r + gamma))`.
pub fn rpq_closed<T: Real>(p: &ChannelParams<T>) -> T {
    let two = T::from_f64(2.0);
    let four = T::from_f64(4.0);
    let sum = p.n_r_real() + p.gamma;
    if p.channel.two_kappa() == 1 {
        return p.alpha_z * p.alpha_z / (p.big_n * (p.big_n + sum)) / four;
    }
    (T::one() - two * p.kappa * sum / p.big_n) / four
}

pub fn e1_coefficient_real<T: Real>(p: &ChannelParams<T>, m_over_kappa: i32) -> T {
    -T::from_i64(i64::from(m_over_kappa)) * rpq_closed(p)
}

/// `eps1 = -(m/(4 kappa)) [1 - 2 kappa (n_r + gamma)/N]`.
pub fn e1_coefficient(state: &QuantumState, config: &PhysicsConfig) -> Result<f64> {
    let p = ChannelParams::<f64>::new(state.channel(), config)?;
    Ok(e1_coefficient_real(&p, state.m_over_kappa()))
}

/// `eps1` for `n_r = 0`: `m (2 gamma + 1) / (4 (n - 1/2))`.
pub fn e1_nodeless(state: &QuantumState, config: &PhysicsConfig) -> Result<f64> {
    if state.n_r() != 0 {
        return Err(Error::Precondition(format!("{} has n_r != 0", state.label())));
    }
    let g = crate::qnum::gamma_kappa(state.kappa, config)?;
    Ok(state.m_kappa.value() * (2.0 * g + 1.0) / (4.0 * (f64::from(state.n) - 0.5)))
}

/// Quadrature value of `int r P Q dr / alpha` and the resulting `eps1`.
#[derive(Clone, Copy, Debug)]
pub struct FirstOrderQuadrature {
    pub rpq_over_alpha: f64,
    pub rpq_closed: f64,
    pub eps1: f64,
}

/// The quadrature runs in double-double arithmetic.
pub fn e1_via_quadrature(state: &QuantumState, config: &PhysicsConfig) -> Result<FirstOrderQuadrature> {
    let p = ChannelParams::<DoubleDouble>::new(state.channel(), config)?;
    let orb = radial_orbital_real(&p)?;
    let integ = RadialIntegrator::new(p.gamma, p.k_scale(), orb.max_degree())?;
    let rpq = (integ.integrate(&orb.p, &orb.q, 1)? / p.alpha).to_f64();
    Ok(FirstOrderQuadrature {
        rpq_over_alpha: rpq,
        rpq_closed: rpq_closed(&ChannelParams::<f64>::new(state.channel(), config)?),
        eps1: -f64::from(state.m_over_kappa()) * rpq,
    })
}

/// `eps2` in the closed polynomial form.
pub fn e2_coefficient_real<T: Real>(p: &ChannelParams<T>) -> T {
    let n = p.n_r_real();
    let g = p.gamma;
    let k = p.kappa;
    let k2 = k * k;
    let c = T::from_f64;
    let first = -k * (c(3.0) * n * n + c(6.0) * n * g + c(4.0) * g * g - k2);
    let poly = c(5.0) * n.powi(4) + c(20.0) * n.powi(3) * g + n * n + c(22.0) * n * n * g * g
        + c(5.0) * n * n * k2
        + c(4.0) * n * g.powi(3)
        + c(2.0) * n * g
        + c(10.0) * n * g * k2
        + c(4.0) * g * g * k2
        - c(2.0) * k2 * k2
        + k2;
    (first + (n + g) / p.big_n * poly) / c(16.0)
}

pub fn e2_coefficient(channel: Channel, config: &PhysicsConfig) -> Result<f64> {
    Ok(e2_coefficient_real(&ChannelParams::<f64>::new(channel, config)?))
}

/// `eps2` for `n_r = 0`: `(n - 1/2)(2 gamma + 1)[2 gamma^2 + gamma - (n - 1/2)^2]/16`.
pub fn e2_nodeless_real<T: Real>(p: &ChannelParams<T>) -> Result<T> {
    if p.n_r != 0 {
        return Err(Error::Precondition(format!("{} has n_r != 0", p.channel.label())));
    }
    let h = T::from_i64(i64::from(p.channel.n)) - T::from_f64(0.5);
    let g = p.gamma;
    let two = T::from_f64(2.0);
    Ok(h * (two * g + T::one()) * (two * g * g + g - h * h) / T::from_f64(16.0))
}

pub fn e2_nodeless(channel: Channel, config: &PhysicsConfig) -> Result<f64> {
    e2_nodeless_real(&ChannelParams::<f64>::new(channel, config)?)
}

/// Magnetizability in units of `alpha^2 a0^3 / Z^2`: `chi = -2 eps2`.
pub fn magnetizability(channel: Channel, config: &PhysicsConfig) -> Result<f64> {
    Ok(-2.0 * e2_coefficient(channel, config)?)
}

/// `chi` for `n_r = 0` states in the reduced form
/// `-(n - 1/2)(2 gamma + 1)[2 gamma^2 + gamma - (n - 1/2)^2]/8`.
pub fn magnetizability_nodeless(channel: Channel, config: &PhysicsConfig) -> Result<f64> {
    if channel.n_r() != 0 {
        return Err(Error::Precondition(format!("{} has n_r != 0", channel.label())));
    }
    let h = f64::from(channel.n) - 0.5;
    let g = crate::qnum::gamma_kappa(channel.kappa, config)?;
    Ok(-h * (2.0 * g + 1.0) * (2.0 * g * g + g - h * h) / 8.0)
}

/// Ground-state magnetizability `-(2 gamma + 1)(8 gamma^2 + 4 gamma - 1)/64`.
pub fn magnetizability_ground(config: &PhysicsConfig) -> Result<f64> {
    let g = crate::qnum::gamma_kappa(crate::qnum::HalfOdd::from_twice(-1)?, config)?;
    Ok(-(2.0 * g + 1.0) * (8.0 * g * g + 4.0 * g - 1.0) / 64.0)
}

/// `(mu + 1)/(mu - 1)` at the bound energy, from the rearranged form that
/// never forms `mu - 1` explicitly.
pub fn mu_ratio<T: Real>(p: &ChannelParams<T>, ctx: &SturmianContext<T>, n_r_prime: i32) -> Result<T> {
    let nr = p.n_r as i32;
    if n_r_prime == nr {
        return Err(Error::Precondition(format!(
            "n_r' = n_r = {nr} is excluded from the Sturmian sum"
        )));
    }
    if n_r_prime == -nr {
        return Ok(-(p.n_r_real() + p.gamma) / p.big_n);
    }
    let d = T::from_i64(i64::from(n_r_prime.abs() - nr));
    Ok((ctx.n_prime(n_r_prime) + p.big_n) / d)
}

/// `1/(mu - 1) = (X - 1)/2` with `X` from [`mu_ratio`].
pub fn inverse_mu_minus_one<T: Real>(p: &ChannelParams<T>, ctx: &SturmianContext<T>, n_r_prime: i32) -> Result<T> {
    let x = mu_ratio(p, ctx, n_r_prime)?;
    let direct = ctx.mu(n_r_prime) - T::one();
    if direct.abs() <= T::from_f64(64.0) * T::epsilon() {
        return Err(Error::Numeric(format!(
            "mu_{{{n_r_prime}}}(E0) = 1 for n_r' != n_r in {}; the bound-state condition should be unique",
            p.channel.label()
        )));
    }
    Ok((x - T::one()) / T::from_f64(2.0))
}

/// Reduced Sturmian overlaps for one `n_r'`:
/// `a = (Z/alpha) int r [Q S' + P T'] dr`,
/// `b = (Z/alpha) int r [mu' Q S' + P T'] dr`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapPair {
    pub integral_a: f64,
    pub integral_b: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapEntry {
    pub quadrature: OverlapPair,
    pub closed: OverlapPair,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OverlapTable {
    pub state: QuantumState,
    pub entries: BTreeMap<i32, OverlapEntry>,
}

impl OverlapTable {
    /// Largest absolute quadrature value among entries outside the selection windows.
    pub fn max_outside_window(&self) -> f64 {
        let nr = self.state.n_r() as i32;
        self.entries
            .iter()
            .flat_map(|(&np, e)| {
                let a = if in_window_a(nr, np) { 0.0 } else { e.quadrature.integral_a.abs() };
                let b = if in_window_b(nr, np) { 0.0 } else { e.quadrature.integral_b.abs() };
                [a, b]
            })
            .fold(0.0, f64::max)
    }
}

pub fn in_window_a(n_r: i32, n_r_prime: i32) -> bool {
    let a = n_r_prime.abs();
    a == n_r + 1 || a == n_r - 1 || (n_r_prime == -n_r && n_r > 0)
}

pub fn in_window_b(n_r: i32, n_r_prime: i32) -> bool {
    let a = n_r_prime.abs();
    (a - n_r).abs() <= 2 && n_r_prime != n_r && a >= 0
}

/// Data shared by every overlap of one channel.
struct OverlapWork<T> {
    params: ChannelParams<T>,
    ctx: SturmianContext<T>,
    orbital: RadialOrbital<T>,
}

impl<T: Real> OverlapWork<T> {
    fn new(channel: Channel, config: &PhysicsConfig) -> Result<Self> {
        let params = ChannelParams::<T>::new(channel, config)?;
        let orbital = radial_orbital_real(&params)?;
        let ctx = SturmianContext::at_bound(&params);
        Ok(Self { params, ctx, orbital })
    }

    /// Overlaps by quadrature of the defining integrands.
    fn quadrature(&self, n_r_prime: i32) -> Result<(T, T)> {
        let p = &self.params;
        let f = self.ctx.pair(n_r_prime)?;
        let deg = self.orbital.max_degree().max(f.s.degree()).max(f.t.degree());
        let integ = RadialIntegrator::new(p.gamma, p.k_scale(), deg + 1)?;
        let qs = integ.integrate(&self.orbital.q, &f.s, 1)?;
        let pt = integ.integrate(&self.orbital.p, &f.t, 1)?;
        let scale = p.z / p.alpha;
        Ok(((qs + pt) * scale, (f.mu * qs + pt) * scale))
    }

    /// `Gamma(n_r + 2 gamma + j) / sqrt(Gamma(n_r + 2 gamma) Gamma(|n_r'| + 2 gamma))`
    /// via Pochhammer symbols; `j >= -1`.
    fn gamma_ratio(&self, n_r_prime: i32, j: i32) -> T {
        let a = self.params.gamma + self.params.gamma;
        let nr = self.params.n_r as i32;
        let top = pochhammer(a, (nr + j) as u32);
        let bottom = (pochhammer(a, nr as u32) * pochhammer(a, n_r_prime.unsigned_abs())).sqrt();
        top / bottom
    }

    /// Closed forms. `b` is returned divided by `mu' - 1`.
    fn closed(&self, n_r_prime: i32) -> Result<(T, T)> {
        let p = &self.params;
        let c = T::from_f64;
        let nr = p.n_r as i32;
        let nrt = p.n_r_real();
        let absp = n_r_prime.abs();
        let a2 = p.gamma + p.gamma;
        let big_n = p.big_n;
        let kap = p.kappa;
        let np = self.ctx.n_prime(n_r_prime);
        let abs_t = T::from_i64(i64::from(absp));
        let root = (factorial::<T>(p.n_r) * (nrt + a2) * factorial::<T>(absp as u32) * (abs_t + a2)
            / (big_n * (big_n - kap) * np * (np - kap)))
            .sqrt();
        let fact = |m: i32| factorial::<T>(m as u32);
        let g = |j: i32| self.gamma_ratio(n_r_prime, j);

        let mut a_sum = T::zero();
        let mut b_sum = T::zero();
        if absp == nr + 1 {
            a_sum += (big_n - kap) * (np - big_n - c(2.0) * kap) * g(0) / fact(nr);
            b_sum += c(2.0) * (big_n - kap) * (c(2.0) * nrt + a2 + T::one() - kap * (big_n + np)) * g(0) / fact(nr);
        }
        if absp == nr + 2 {
            b_sum -= (big_n - kap) * g(2) / (fact(nr) * (nrt + a2));
        }
        if nr >= 1 && n_r_prime == -nr {
            a_sum += c(4.0) * (nrt + p.gamma) * g(0) / fact(nr - 1);
            b_sum -= c(2.0) * (big_n * big_n + c(2.0) * (nrt + p.gamma) * (nrt + p.gamma)) * g(0)
                / (big_n * fact(nr - 1));
        }
        if nr >= 1 && absp == nr - 1 {
            a_sum += (np - kap) * (big_n - np - c(2.0) * kap) * g(-1) / fact(nr - 1);
            b_sum -= c(2.0) * (np - kap) * (c(2.0) * nrt + a2 - T::one() - kap * (big_n + np)) * g(-1)
                / fact(nr - 1);
        }
        if nr >= 2 && absp == nr - 2 {
            b_sum += (np - kap) * g(0) / (fact(nr - 2) * (nrt + a2 - c(2.0)));
        }
        let a = -big_n * root * a_sum / c(4.0);
        let b_reduced = -big_n * root * b_sum / c(8.0);
        Ok((a, b_reduced))
    }
}

fn check_prime(channel: Channel, n_r_prime: i32) -> Result<()> {
    if n_r_prime == channel.n_r() as i32 {
        return Err(Error::Precondition(format!(
            "n_r' = n_r = {n_r_prime} is excluded from the Sturmian sum"
        )));
    }
    Ok(())
}

/// Overlaps for one `n_r'` by quadrature and in closed form.
pub fn overlap_integrals(state: &QuantumState, n_r_prime: i32, config: &PhysicsConfig) -> Result<OverlapEntry> {
    let ch = state.channel();
    check_prime(ch, n_r_prime)?;
    let work = OverlapWork::<f64>::new(ch, config)?;
    overlap_entry(&work, n_r_prime)
}

fn overlap_entry(work: &OverlapWork<f64>, n_r_prime: i32) -> Result<OverlapEntry> {
    let (qa, qb) = work.quadrature(n_r_prime)?;
    let (ca, cb_reduced) = work.closed(n_r_prime)?;
    let mu_minus_one = work.ctx.mu(n_r_prime) - 1.0;
    Ok(OverlapEntry {
        quadrature: OverlapPair { integral_a: qa, integral_b: qb },
        closed: OverlapPair { integral_a: ca, integral_b: cb_reduced * mu_minus_one },
    })
}

/// Overlap table over `-window <= n_r' <= window`, `n_r' != n_r`.
pub fn overlap_table(state: &QuantumState, window: i32, config: &PhysicsConfig) -> Result<OverlapTable> {
    let ch = state.channel();
    let work = OverlapWork::<f64>::new(ch, config)?;
    let nr = ch.n_r() as i32;
    let mut entries = BTreeMap::new();
    for np in -window..=window {
        if np != nr {
            entries.insert(np, overlap_entry(&work, np)?);
        }
    }
    Ok(OverlapTable { state: *state, entries })
}

/// Which overlap values feed the Sturmian sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OverlapSource {
    ClosedForm,
    Quadrature,
}

/// Breakdown of the assembled second-order coefficient.
#[derive(Clone, Debug)]
pub struct SecondOrderSum {
    /// `-(1/4) sum a b/(mu - 1)` per `n_r'`.
    pub terms: BTreeMap<i32, f64>,
    /// `N^2 e0 [int r P Q / alpha]^2`.
    pub diagonal: f64,
    pub total: f64,
}

/// Default half-width of the `n_r'` window: every delta term lies within `n_r + 2`.
pub fn default_window(channel: Channel) -> i32 {
    channel.n_r() as i32 + 4
}

/// `eps2` assembled from the reduced-Green-function Sturmian sum.
pub fn e2_assembled(channel: Channel, config: &PhysicsConfig) -> Result<f64> {
    Ok(e2_assembled_with(channel, config, default_window(channel), OverlapSource::ClosedForm)?.total)
}

pub fn e2_assembled_with(
    channel: Channel,
    config: &PhysicsConfig,
    window: i32,
    source: OverlapSource,
) -> Result<SecondOrderSum> {
    let work = OverlapWork::<f64>::new(channel, config)?;
    let nr = channel.n_r() as i32;
    let mut terms = BTreeMap::new();
    let mut sum = 0.0;
    for np in -window..=window {
        if np == nr {
            continue;
        }
        let inv = inverse_mu_minus_one(&work.params, &work.ctx, np)?;
        let term = match source {
            OverlapSource::ClosedForm => {
                let (a, b_reduced) = work.closed(np)?;
                -0.25 * a * b_reduced
            }
            OverlapSource::Quadrature => {
                let (a, b) = work.quadrature(np)?;
                -0.25 * a * b * inv
            }
        };
        terms.insert(np, term);
        sum += term;
    }
    let p = &work.params;
    let rpq = match source {
        OverlapSource::ClosedForm => rpq_closed(p),
        OverlapSource::Quadrature => {
            let integ = RadialIntegrator::new(p.gamma, p.k_scale(), work.orbital.max_degree())?;
            integ.integrate(&work.orbital.p, &work.orbital.q, 1)? / p.alpha
        }
    };
    let diagonal = p.big_n * p.big_n * p.energy_ratio() * rpq * rpq;
    Ok(SecondOrderSum { terms, diagonal, total: sum + diagonal })
}

/// All three coefficients for one state.
pub fn energy_breakdown(state: &QuantumState, config: &PhysicsConfig) -> Result<EnergyBreakdown> {
    let p = ChannelParams::<f64>::new(state.channel(), config)?;
    Ok(EnergyBreakdown {
        state: *state,
        config: *config,
        eps0: eps0_coefficient_real(&p),
        eps1: e1_coefficient_real(&p, state.m_over_kappa()),
        eps2: e2_coefficient_real(&p),
        units: UnitsPolicy::DimensionlessHartree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qnum::{enumerate_channels, enumerate_states};

    fn ch(n: u32, tk: i32) -> Channel {
        Channel::new(n, tk).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn first_order_quadrature_matches_bracket() {
        let cfg = PhysicsConfig::codata(1.0).unwrap();
        for s in enumerate_states(4) {
            let q = e1_via_quadrature(&s, &cfg).unwrap();
            assert!(rel(q.rpq_over_alpha, q.rpq_closed) < 1e-10, "{}", s.label());
            let e1 = e1_coefficient(&s, &cfg).unwrap();
            assert!(rel(q.eps1, e1) < 1e-10, "{}", s.label());
        }
    }

    #[test]
    fn nodeless_first_order_form() {
        let cfg = PhysicsConfig::codata(50.0).unwrap();
        for n in 1..=5 {
            for positive in [true, false] {
                let s = ch(n, 1 - 2 * n as i32).state(positive);
                let a = e1_coefficient(&s, &cfg).unwrap();
                let b = e1_nodeless(&s, &cfg).unwrap();
                assert!(rel(a, b) < 1e-13);
            }
        }
    }

    #[test]
    fn ground_first_order_value() {
        let cfg = PhysicsConfig::codata(20.0).unwrap();
        let g = crate::qnum::gamma_kappa(ch(1, -1).kappa, &cfg).unwrap();
        let s = ch(1, -1).state(true);
        assert!(rel(e1_coefficient(&s, &cfg).unwrap(), 0.25 * (2.0 * g + 1.0)) < 1e-14);
    }

    #[test]
    fn first_order_depends_on_alpha_z_only() {
        let a = PhysicsConfig::new(2.0, 0.1, 1.0).unwrap();
        let b = PhysicsConfig::new(8.0, 0.025, 1.0).unwrap();
        for s in enumerate_states(3) {
            assert!(rel(e1_coefficient(&s, &a).unwrap(), e1_coefficient(&s, &b).unwrap()) < 1e-13);
        }
    }

    #[test]
    fn nodeless_second_order_forms() {
        for z in [1.0, 30.0, 68.0] {
            let cfg = PhysicsConfig::codata(z).unwrap();
            for n in 1..=6 {
                let c = ch(n, 1 - 2 * n as i32);
                let a = e2_coefficient(c, &cfg).unwrap();
                let b = e2_nodeless(c, &cfg).unwrap();
                assert!(rel(a, b) < 1e-12, "Z={z} n={n}");
                let chi = magnetizability(c, &cfg).unwrap();
                assert!(rel(chi, magnetizability_nodeless(c, &cfg).unwrap()) < 1e-12);
            }
            let g = magnetizability_ground(&cfg).unwrap();
            assert!(rel(g, magnetizability(ch(1, -1), &cfg).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn mu_ratio_matches_direct_mu() {
        for z in [1.0, 40.0, 60.0] {
            let cfg = PhysicsConfig::codata(z).unwrap();
            for c in enumerate_channels(4) {
                let p = ChannelParams::<f64>::new(c, &cfg).unwrap();
                let ctx = SturmianContext::at_bound(&p);
                for np in -8..=8 {
                    if np == c.n_r() as i32 {
                        continue;
                    }
                    let mu = ctx.mu(np);
                    let x = mu_ratio(&p, &ctx, np).unwrap();
                    assert!(rel(x, (mu + 1.0) / (mu - 1.0)) < 1e-12, "{c} {np}");
                }
            }
        }
    }

    #[test]
    fn overlap_closed_forms_match_quadrature() {
        for z in [1.0, 40.0] {
            let cfg = PhysicsConfig::codata(z).unwrap();
            for s in enumerate_states(4) {
                let t = overlap_table(&s, 7, &cfg).unwrap();
                for (np, e) in &t.entries {
                    let scale = e.closed.integral_a.abs().max(e.closed.integral_b.abs()).max(1.0);
                    assert!(
                        (e.quadrature.integral_a - e.closed.integral_a).abs() < 1e-9 * scale,
                        "{} n'={np}: {e:?}",
                        s.label()
                    );
                    assert!(
                        (e.quadrature.integral_b - e.closed.integral_b).abs() < 1e-9 * scale,
                        "{} n'={np}: {e:?}",
                        s.label()
                    );
                }
                assert!(t.max_outside_window() < 1e-10, "{}", s.label());
            }
        }
    }

    #[test]
    fn selection_examples() {
        let cfg = PhysicsConfig::codata(1.0).unwrap();
        let one_s = ch(1, -1).state(true);
        let e = overlap_integrals(&one_s, 2, &cfg).unwrap();
        assert!(e.quadrature.integral_a.abs() < 1e-10);
        assert!(e.quadrature.integral_b.abs() > 1e-3);
        let e = overlap_integrals(&one_s, -1, &cfg).unwrap();
        assert!(e.quadrature.integral_a.abs() > 1e-3);
        assert!(e.quadrature.integral_b.abs() > 1e-3);
        let two_s = ch(2, -1).state(true);
        let e = overlap_integrals(&two_s, 5, &cfg).unwrap();
        assert!(e.quadrature.integral_a.abs() < 1e-10 && e.quadrature.integral_b.abs() < 1e-10);
        assert!(matches!(overlap_integrals(&two_s, 1, &cfg), Err(Error::Precondition(_))));
    }

    #[test]
    fn second_order_two_paths() {
        for z in [1.0, 10.0, 40.0, 60.0] {
            let cfg = PhysicsConfig::codata(z).unwrap();
            for c in enumerate_channels(4) {
                let closed = e2_coefficient(c, &cfg).unwrap();
                let a = e2_assembled(c, &cfg).unwrap();
                assert!(rel(a, closed) < 1e-9, "Z={z} {c}: {a} vs {closed}");
                let q = e2_assembled_with(c, &cfg, default_window(c), OverlapSource::Quadrature)
                    .unwrap()
                    .total;
                assert!(rel(q, closed) < 1e-9, "Z={z} {c}: quadrature {q} vs {closed}");
            }
        }
    }

    #[test]
    fn window_tail_is_negligible() {
        let cfg = PhysicsConfig::codata(1.0).unwrap();
        for c in enumerate_channels(3) {
            let nr = c.n_r() as i32;
            let narrow = e2_assembled_with(c, &cfg, nr + 2, OverlapSource::Quadrature).unwrap();
            let wide = e2_assembled_with(c, &cfg, nr + 6, OverlapSource::Quadrature).unwrap();
            assert!((narrow.total - wide.total).abs() < 1e-12, "{c}");
        }
    }

    #[test]
    fn ground_state_sign_change() {
        let root = (2.0 * 3f64.sqrt()).sqrt() / 4.0;
        for i in 1..200 {
            let az = 0.5 * f64::from(i) / 200.0;
            let cfg = PhysicsConfig::new(1.0, az, 1.0).unwrap();
            let chi = magnetizability(ch(1, -1), &cfg).unwrap();
            if az < root - 1e-9 {
                assert!(chi < 0.0, "alpha Z = {az}");
            } else if az > root + 1e-9 {
                assert!(chi > 0.0, "alpha Z = {az}");
            }
        }
    }

    #[test]
    fn table_values_nonrelativistic_scale() {
        let cfg = PhysicsConfig::with_alpha_scale(1.0, 1e-6).unwrap();
        assert!(rel(e2_coefficient(ch(1, -1), &cfg).unwrap(), 3.0 / 64.0) < 1e-9);
        assert!(rel(e2_coefficient(ch(2, -3), &cfg).unwrap(), 45.0 / 32.0) < 1e-9);
        assert!(rel(e2_coefficient(ch(3, -5), &cfg).unwrap(), 525.0 / 64.0) < 1e-9);
    }
}
