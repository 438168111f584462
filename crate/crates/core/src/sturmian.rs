//! Discrete radial Dirac-Coulomb Sturmian functions at a fixed energy.
//!
//! The Sturmian index `n_r'` runs over all integers. Its sign selects the
//! branch of `N' = +-sqrt(n_r'^2 + 2|n_r'| gamma + kappa^2)`, with
//! `N'_0 = -kappa`. Energies are passed as `e = E/mc^2`.

use crate::coulomb::bracket;
use crate::error::{Error, Result};
use crate::qnum::{Channel, ChannelParams, HalfOdd, PhysicsConfig};
use crate::radial::LaguerreSeries;
use crate::real::{factorial, pochhammer, Real};

/// Energy-dependent data shared by all Sturmians of one `(kappa, E)`.
#[derive(Clone, Copy, Debug)]
pub struct SturmianContext<T> {
    pub kappa: HalfOdd,
    pub kappa_real: T,
    pub gamma: T,
    pub alpha: T,
    pub alpha_z: T,
    /// `e = E/mc^2`.
    pub e: T,
    /// `sqrt((1 - e)/(1 + e))`.
    pub epsilon: T,
    /// `sqrt(1 - e^2)/alpha`, inverse Bohr radii.
    pub k: T,
}

impl<T: Real> SturmianContext<T> {
    /// Context at an arbitrary energy `-1 < e < 1`.
    pub fn at_energy(kappa: HalfOdd, e: T, config: &PhysicsConfig) -> Result<Self> {
        config.validate()?;
        crate::qnum::gamma_kappa(kappa, config)?;
        if !(e.abs() < T::one()) {
            return Err(Error::Domain(format!(
                "Sturmian energy must satisfy |E| < mc^2, got E/mc^2 = {e}"
            )));
        }
        let kappa_real: T = kappa.as_real();
        let alpha = config.alpha_eff_real::<T>();
        let alpha_z = alpha * T::from_f64(config.z);
        let abs_k = kappa_real.abs();
        let gamma = ((abs_k - alpha_z) * (abs_k + alpha_z)).sqrt();
        let one_m = T::one() - e;
        let one_p = T::one() + e;
        Ok(Self {
            kappa,
            kappa_real,
            gamma,
            alpha,
            alpha_z,
            e,
            epsilon: (one_m / one_p).sqrt(),
            k: (one_m * one_p).sqrt() / alpha,
        })
    }

    /// Context at the bound-state energy of `p`, using the cancellation-free
    /// forms `eps = alpha Z/(n_r + gamma + N)` and `k = Z/N`.
    pub fn at_bound(p: &ChannelParams<T>) -> Self {
        Self {
            kappa: p.channel.kappa,
            kappa_real: p.kappa,
            gamma: p.gamma,
            alpha: p.alpha,
            alpha_z: p.alpha_z,
            e: p.energy_ratio(),
            epsilon: p.epsilon_aux(),
            k: p.k_scale(),
        }
    }

    /// Signed `N'` for index `n_r'`.
    pub fn n_prime(&self, n_r_prime: i32) -> T {
        if n_r_prime == 0 {
            return -self.kappa_real;
        }
        let n = T::from_i64(i64::from(n_r_prime.unsigned_abs()));
        let mag = (n * n + T::from_f64(2.0) * n * self.gamma + self.kappa_real * self.kappa_real).sqrt();
        if n_r_prime > 0 {
            mag
        } else {
            -mag
        }
    }

    /// `mu = (eps/(alpha Z)) (|n_r'| + gamma + N')`.
    pub fn mu(&self, n_r_prime: i32) -> T {
        let n = T::from_i64(i64::from(n_r_prime.unsigned_abs()));
        self.epsilon / self.alpha_z * (n + self.gamma + self.n_prime(n_r_prime))
    }

    pub fn pair(&self, n_r_prime: i32) -> Result<SturmianFunction<T>> {
        let n = n_r_prime.unsigned_abs();
        let nt = T::from_i64(i64::from(n));
        let a = self.gamma + self.gamma;
        let np = self.n_prime(n_r_prime);
        let np_minus_k = np - self.kappa_real;
        let guard = np * np_minus_k;
        if !(guard > T::zero()) {
            return Err(Error::Numeric(format!(
                "Sturmian normalization requires N'(N' - kappa) > 0, got {guard} for n_r' = {n_r_prime}"
            )));
        }
        let common = self.alpha * factorial::<T>(n) * (nt + a) / (T::from_f64(2.0) * guard * pochhammer(a, n));
        let ratio = np_minus_k / (nt + a);
        Ok(SturmianFunction {
            n_r_prime,
            kappa: self.kappa,
            e: self.e,
            epsilon: self.epsilon,
            k: self.k,
            n_prime: np,
            mu: self.mu(n_r_prime),
            s: LaguerreSeries::new(
                (common / self.epsilon).sqrt(),
                self.gamma,
                self.k,
                bracket(n, ratio, -T::one()),
            ),
            t: LaguerreSeries::new(
                -(common * self.epsilon).sqrt(),
                self.gamma,
                self.k,
                bracket(n, ratio, T::one()),
            ),
        })
    }
}

#[derive(Clone, Debug)]
pub struct SturmianFunction<T> {
    pub n_r_prime: i32,
    pub kappa: HalfOdd,
    pub e: T,
    pub epsilon: T,
    pub k: T,
    pub n_prime: T,
    pub mu: T,
    pub s: LaguerreSeries<T>,
    pub t: LaguerreSeries<T>,
}

/// Sturmian eigenvalue `mu_{n_r' kappa}(E)`.
pub fn mu_eigenvalue(n_r_prime: i32, kappa: HalfOdd, e: f64, config: &PhysicsConfig) -> Result<f64> {
    Ok(SturmianContext::<f64>::at_energy(kappa, e, config)?.mu(n_r_prime))
}

/// `(S, T)` for index `n_r'` at `e = E/mc^2`.
pub fn sturmian_pair(n_r_prime: i32, kappa: HalfOdd, e: f64, config: &PhysicsConfig) -> Result<SturmianFunction<f64>> {
    SturmianContext::<f64>::at_energy(kappa, e, config)?.pair(n_r_prime)
}

/// `(dS/de, dT/de)` with `e = E/mc^2`:
/// `dS/de = -e/(1-e^2) [r S' - S/(2e)]`, `dT/de = -e/(1-e^2) [r T' + T/(2e)]`.
pub fn sturmian_energy_derivative(
    n_r_prime: i32,
    kappa: HalfOdd,
    e: f64,
    config: &PhysicsConfig,
) -> Result<(LaguerreSeries<f64>, LaguerreSeries<f64>)> {
    if !(e > 0.0) {
        return Err(Error::Domain(format!(
            "energy derivative formulas need E > 0, got E/mc^2 = {e}"
        )));
    }
    let f = sturmian_pair(n_r_prime, kappa, e, config)?;
    let pre = -e / ((1.0 - e) * (1.0 + e));
    let half_over_e = 0.5 / e;
    let ds = f.s.r_derivative().add(&f.s.scaled(-half_over_e)).scaled(pre);
    let dt = f.t.r_derivative().add(&f.t.scaled(half_over_e)).scaled(pre);
    Ok((ds, dt))
}

/// `I`, `J`, `K` at the bound energy:
/// `I = e0 r S' - S/2`, `J = e0 r S' + S/2`, `K = e0 r T' + T/2`.
#[derive(Clone, Debug)]
pub struct IjkFunctions<T> {
    pub i: LaguerreSeries<T>,
    pub j: LaguerreSeries<T>,
    pub k: LaguerreSeries<T>,
    pub s: LaguerreSeries<T>,
    pub t: LaguerreSeries<T>,
}

pub fn ijk_functions_real<T: Real>(p: &ChannelParams<T>) -> Result<IjkFunctions<T>> {
    let ctx = SturmianContext::at_bound(p);
    let f = ctx.pair(p.n_r as i32)?;
    let e0 = ctx.e;
    let half = T::from_f64(0.5);
    let rs = f.s.r_derivative().scaled(e0);
    let rt = f.t.r_derivative().scaled(e0);
    Ok(IjkFunctions {
        i: rs.add(&f.s.scaled(-half)),
        j: rs.add(&f.s.scaled(half)),
        k: rt.add(&f.t.scaled(half)),
        s: f.s,
        t: f.t,
    })
}

pub fn ijk_functions(channel: Channel, config: &PhysicsConfig) -> Result<IjkFunctions<f64>> {
    ijk_functions_real(&ChannelParams::<f64>::new(channel, config)?)
}

/// `g(e) = (e - e0)/(mu_{n_r}(e) - 1)` and related quantities at one energy.
#[derive(Clone, Copy, Debug)]
pub struct LimitSample {
    pub e: f64,
    /// `g(e)`.
    pub ratio: f64,
    /// closed form `-eps0 (eps + eps0)(1 + e)(1 + e0)/2`.
    pub ratio_closed: f64,
    /// `g(e) dmu/de`.
    pub ratio_times_dmu: f64,
}

/// The limits of `g`, `dg/de` and `g dmu/de` as `e -> e0`.
#[derive(Clone, Copy, Debug)]
pub struct LimitTargets {
    pub e0: f64,
    /// `-(1 - e0^2)`.
    pub ratio: f64,
    /// `(2 e0 - 1)/2`.
    pub ratio_derivative: f64,
    /// `1`.
    pub ratio_times_dmu: f64,
}

pub fn limit_targets(channel: Channel, config: &PhysicsConfig) -> Result<LimitTargets> {
    let p = ChannelParams::<f64>::new(channel, config)?;
    let e0 = p.energy_ratio();
    let one_minus = crate::coulomb::one_minus_energy_ratio(&p);
    Ok(LimitTargets {
        e0,
        ratio: -one_minus * (1.0 + e0),
        ratio_derivative: (2.0 * e0 - 1.0) / 2.0,
        ratio_times_dmu: 1.0,
    })
}

pub fn limit_sample(channel: Channel, config: &PhysicsConfig, e: f64) -> Result<LimitSample> {
    let p = ChannelParams::<f64>::new(channel, config)?;
    let e0 = p.energy_ratio();
    let eps0 = p.epsilon_aux();
    let ctx = SturmianContext::<f64>::at_energy(channel.kappa, e, config)?;
    let mu = ctx.mu(p.n_r as i32);
    let ratio = (e - e0) / (mu - 1.0);
    let dmu = -mu / ((1.0 - e) * (1.0 + e));
    Ok(LimitSample {
        e,
        ratio,
        ratio_closed: -eps0 * (ctx.epsilon + eps0) * (1.0 + e) * (1.0 + e0) / 2.0,
        ratio_times_dmu: ratio * dmu,
    })
}
