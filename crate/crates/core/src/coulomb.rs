//! Field-free bound states: energies and the radial spinor components
//! `P`, `Q` in Laguerre form.
//!
//! Atomic units throughout (`hbar = m = e = 4 pi eps0 = a0 = 1`, `c = 1/alpha`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qnum::{Channel, ChannelParams, PhysicsConfig, QuantumState};
use crate::radial::{cross_overlap, LaguerreSeries, RadialIntegrator};
use crate::real::{factorial, pochhammer, Real};

/// `E^(0)/mc^2 = (n_r + gamma)/N`.
pub fn energy0(channel: Channel, config: &PhysicsConfig) -> Result<f64> {
    Ok(ChannelParams::<f64>::new(channel, config)?.energy_ratio())
}

/// `E^(0)/mc^2`, the same quantity as [`energy0`].
pub fn epsilon_small(channel: Channel, config: &PhysicsConfig) -> Result<f64> {
    energy0(channel, config)
}

/// `E^(0)/mc^2` recovered from `eps = alpha Z/(n_r + gamma + N)` by
/// inverting `eps = sqrt((1 - e)/(1 + e))`.
pub fn epsilon_small_via_aux(channel: Channel, config: &PhysicsConfig) -> Result<f64> {
    let p = ChannelParams::<f64>::new(channel, config)?;
    let e2 = p.epsilon_aux() * p.epsilon_aux();
    Ok((1.0 - e2) / (1.0 + e2))
}

/// `(E^(0) - mc^2)/(Z^2 Hartree) = (alpha Z)^-2 ((n_r+gamma)/N - 1)`, evaluated
/// as `-1/(N (n_r + gamma + N))`.
pub fn eps0_coefficient_real<T: Real>(p: &ChannelParams<T>) -> T {
    -T::one() / (p.big_n * (p.n_r_real() + p.gamma + p.big_n))
}

pub fn eps0_coefficient(channel: Channel, config: &PhysicsConfig) -> Result<f64> {
    Ok(eps0_coefficient_real(&ChannelParams::<f64>::new(channel, config)?))
}

/// `1 - E^(0)/mc^2 = (alpha Z)^2 / (N (n_r + gamma + N))`.
pub fn one_minus_energy_ratio<T: Real>(p: &ChannelParams<T>) -> T {
    p.alpha_z * p.alpha_z / (p.big_n * (p.n_r_real() + p.gamma + p.big_n))
}

/// Large and small radial components.
#[derive(Clone, Debug)]
pub struct RadialOrbital<T> {
    pub p: LaguerreSeries<T>,
    pub q: LaguerreSeries<T>,
}

impl<T: Real> RadialOrbital<T> {
    pub fn max_degree(&self) -> usize {
        self.p.coeffs.len().max(self.q.coeffs.len())
    }
}

/// The two-term bracket `L_{n-1} -+ ratio L_n` as dense coefficients.
pub(crate) fn bracket<T: Real>(n: u32, ratio: T, sign: T) -> Vec<T> {
    let n = n as usize;
    let mut c = vec![T::zero(); n + 1];
    if n >= 1 {
        c[n - 1] = T::one();
    }
    c[n] = sign * ratio;
    c
}

/// `P`, `Q` of the bound state in precision `T`.
pub fn radial_orbital_real<T: Real>(p: &ChannelParams<T>) -> Result<RadialOrbital<T>> {
    let nr = p.n_r;
    if nr == 0 && p.kappa > T::zero() {
        return Err(Error::NoBoundState {
            n: p.channel.n,
            two_kappa: p.channel.two_kappa(),
        });
    }
    let a = p.gamma + p.gamma;
    let e = p.energy_ratio();
    let one_minus = one_minus_energy_ratio(p);
    let n_minus_k = p.big_n - p.kappa;
    let nr_t = p.n_r_real();
    let common = p.z * factorial::<T>(nr) * (nr_t + a)
        / (T::from_f64(2.0) * p.big_n * p.big_n * n_minus_k * pochhammer(a, nr));
    let ratio = n_minus_k / (nr_t + a);
    let k = p.k_scale();
    Ok(RadialOrbital {
        p: LaguerreSeries::new(
            (common * (T::one() + e)).sqrt(),
            p.gamma,
            k,
            bracket(nr, ratio, -T::one()),
        ),
        q: LaguerreSeries::new(
            -(common * one_minus).sqrt(),
            p.gamma,
            k,
            bracket(nr, ratio, T::one()),
        ),
    })
}

pub fn radial_orbital(channel: Channel, config: &PhysicsConfig) -> Result<RadialOrbital<f64>> {
    radial_orbital_real(&ChannelParams::<f64>::new(channel, config)?)
}

/// Sign changes of the large component on `(0, inf)`.
pub fn node_count(orbital: &RadialOrbital<f64>) -> usize {
    let p = &orbital.p;
    let deg = p.coeffs.len() as f64;
    // every zero of L_n^{(a)} lies below 2n + a + 1 + 2 sqrt(n(n+a)) < 4n + 2a + 2
    let x_max = 4.0 * deg + 2.0 * p.upper_index() + 10.0;
    let samples = 20_000;
    let mut count = 0;
    let mut prev = p.poly(x_max / samples as f64);
    for i in 2..=samples {
        let v = p.poly(x_max * i as f64 / samples as f64);
        if v != 0.0 && prev != 0.0 && (v < 0.0) != (prev < 0.0) {
            count += 1;
        }
        if v != 0.0 {
            prev = v;
        }
    }
    count
}

/// `<psi_a | psi_b>` for two orbitals of the same channel measure.
pub fn orbital_overlap<T: Real>(
    integ: &RadialIntegrator<T>,
    a: &RadialOrbital<T>,
    b: &RadialOrbital<T>,
) -> Result<T> {
    Ok(integ.integrate(&a.p, &b.p, 0)? + integ.integrate(&a.q, &b.q, 0)?)
}

/// `int (P_a P_b + Q_a Q_b) dr` for two channels of the same `kappa`.
pub fn channel_overlap(a: Channel, b: Channel, config: &PhysicsConfig) -> Result<f64> {
    if a.kappa != b.kappa {
        return Err(Error::Precondition(format!("{a} and {b} have different kappa")));
    }
    let (x, y) = (radial_orbital(a, config)?, radial_orbital(b, config)?);
    Ok(cross_overlap(&x.p, &y.p)? + cross_overlap(&x.q, &y.q)?)
}

/// Integrator able to handle the orbital and its `r d/dr`.
pub fn orbital_integrator<T: Real>(p: &ChannelParams<T>, extra_degree: usize) -> Result<RadialIntegrator<T>> {
    RadialIntegrator::new(p.gamma, p.k_scale(), p.n_r as usize + 2 + extra_degree)
}

/// `<psi, (H0 - E0) psi>` in Hartree, with `H0` applied to the Laguerre
/// representation analytically.
pub fn eigen_residual(channel: Channel, config: &PhysicsConfig) -> Result<f64> {
    let p = ChannelParams::<f64>::new(channel, config)?;
    let orb = radial_orbital_real(&p)?;
    let integ = orbital_integrator(&p, 1)?;
    let c = p.c();
    let mc2 = c * c;
    let rest_minus_e = mc2 * one_minus_energy_ratio(&p);
    let rest_plus_e = mc2 * (1.0 + p.energy_ratio());
    let dp = orb.p.r_derivative();
    let dq = orb.q.r_derivative();
    let (pp, qq) = (&orb.p, &orb.q);
    let z = p.z;
    let kappa = p.kappa;
    let upper = rest_minus_e * integ.integrate(pp, pp, 0)? - z * integ.integrate(pp, pp, -1)?
        + c * integ.integrate(pp, &dq, -1)?
        - c * kappa * integ.integrate(pp, qq, -1)?;
    let lower = -c * integ.integrate(qq, &dp, -1)? - c * kappa * integ.integrate(qq, pp, -1)?
        - rest_plus_e * integ.integrate(qq, qq, 0)?
        - z * integ.integrate(qq, qq, -1)?;
    Ok(upper + lower)
}

/// Units attached to an [`EnergyBreakdown`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnitsPolicy {
    /// Coefficients multiply `Z^2 Hartree`, `(B/B0) Hartree`, `Z^-2 (B/B0)^2 Hartree`.
    DimensionlessHartree,
}

/// Dimensionless coefficients of the weak-field expansion
/// `E = mc^2 + eps0 Z^2 H + eps1 (B/B0) H + eps2 Z^-2 (B/B0)^2 H`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub state: QuantumState,
    pub config: PhysicsConfig,
    pub eps0: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub units: UnitsPolicy,
}

impl EnergyBreakdown {
    /// `(E - mc^2)` in Hartree at field `b = B/B0`.
    pub fn binding_hartree(&self, b_over_b0: f64) -> f64 {
        let z = self.config.z;
        self.eps0 * z * z + self.eps1 * b_over_b0 + self.eps2 * b_over_b0 * b_over_b0 / (z * z)
    }

    /// Individual orders in Hartree: `(E0 - mc^2, E1, E2)`.
    pub fn terms_hartree(&self, b_over_b0: f64) -> (f64, f64, f64) {
        let z = self.config.z;
        (
            self.eps0 * z * z,
            self.eps1 * b_over_b0,
            self.eps2 * b_over_b0 * b_over_b0 / (z * z),
        )
    }

    /// `E/mc^2` at field `b = B/B0`.
    pub fn energy_over_mc2(&self, b_over_b0: f64) -> f64 {
        let a = self.config.alpha_eff();
        1.0 + a * a * self.binding_hartree(b_over_b0)
    }

    /// Magnetizability in units of `alpha^2 a0^3 / Z^2`.
    pub fn chi(&self) -> f64 {
        -2.0 * self.eps2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(n: u32, tk: i32) -> Channel {
        Channel::new(n, tk).unwrap()
    }

    #[test]
    fn ground_state_energy_is_twice_gamma() {
        let cfg = PhysicsConfig::new(0.4, 1.0, 1.0).unwrap();
        assert!((energy0(ch(1, -1), &cfg).unwrap() - 0.6).abs() < 1e-15);
        let cfg = PhysicsConfig::codata(30.0).unwrap();
        let g = crate::qnum::gamma_kappa(ch(1, -1).kappa, &cfg).unwrap();
        assert!((energy0(ch(1, -1), &cfg).unwrap() - 2.0 * g).abs() < 1e-15);
    }

    #[test]
    fn aux_inversion_agrees() {
        let cfg = PhysicsConfig::codata(10.0).unwrap();
        for c in crate::qnum::enumerate_channels(4) {
            let a = epsilon_small(c, &cfg).unwrap();
            let b = epsilon_small_via_aux(c, &cfg).unwrap();
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn nonrelativistic_eps0() {
        let cfg = PhysicsConfig::with_alpha_scale(1.0, 1e-6).unwrap();
        assert!((eps0_coefficient(ch(1, -1), &cfg).unwrap() + 2.0).abs() < 1e-9);
        assert!((eps0_coefficient(ch(3, 3), &cfg).unwrap() + 2.0 / 25.0).abs() < 1e-9);
    }

    #[test]
    fn normalization_and_nodes() {
        let cfg = PhysicsConfig::codata(20.0).unwrap();
        for c in crate::qnum::enumerate_channels(5) {
            let p = ChannelParams::<f64>::new(c, &cfg).unwrap();
            let orb = radial_orbital_real(&p).unwrap();
            let integ = orbital_integrator(&p, 0).unwrap();
            let norm = orbital_overlap(&integ, &orb, &orb).unwrap();
            assert!((norm - 1.0).abs() < 1e-10, "{c}: {norm}");
            let want = if c.kappa.is_negative() { c.n_r() } else { c.n_r() - 1 };
            assert_eq!(node_count(&orb) as u32, want, "{c}");
        }
    }

    #[test]
    fn orthonormal_within_kappa() {
        let cfg = PhysicsConfig::codata(40.0).unwrap();
        let chans = crate::qnum::enumerate_channels(5);
        for a in &chans {
            for b in chans.iter().filter(|b| b.kappa == a.kappa) {
                let v = channel_overlap(*a, *b, &cfg).unwrap();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-10, "{a} {b}: {v}");
            }
        }
    }

    #[test]
    fn single_term_ground_state() {
        let orb = radial_orbital(ch(1, -1), &PhysicsConfig::codata(1.0).unwrap()).unwrap();
        assert_eq!(orb.p.terms().len(), 1);
        assert_eq!(orb.p.terms()[0].0, 0);
    }

    #[test]
    fn residual_is_tiny() {
        for z in [1.0, 40.0] {
            let cfg = PhysicsConfig::codata(z).unwrap();
            for c in crate::qnum::enumerate_channels(4) {
                let r = eigen_residual(c, &cfg).unwrap();
                assert!(r.abs() < 1e-8, "{c} Z={z}: {r}");
            }
        }
    }

    #[test]
    fn missing_bound_state() {
        let bad = Channel {
            n: 1,
            kappa: crate::qnum::HalfOdd::from_twice(1).unwrap(),
        };
        assert!(matches!(
            radial_orbital(bad, &PhysicsConfig::codata(1.0).unwrap()),
            Err(Error::NoBoundState { .. })
        ));
    }
}
