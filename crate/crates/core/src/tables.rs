//! Per-state explicit expressions for the nine states with `n <= 3`,
//! written out term by term and independent of the general formulas.

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::qnum::{Channel, PhysicsConfig};
use crate::real::Real;

/// The nine tabulated channels in table order.
pub const TABLE_CHANNELS: [(u32, i32); 9] = [(1, -1), (2, -1), (2, 1), (2, -3), (3, -1), (3, 1), (3, -3), (3, 3), (3, -5)];

pub fn table_channels() -> Vec<Channel> {
    TABLE_CHANNELS
        .iter()
        .map(|&(n, tk)| Channel::new(n, tk).expect("table channel is valid"))
        .collect()
}

fn index(channel: Channel) -> Result<usize> {
    TABLE_CHANNELS
        .iter()
        .position(|&(n, tk)| n == channel.n && tk == channel.two_kappa())
        .ok_or_else(|| Error::Precondition(format!("{} is not one of the tabulated states", channel.label())))
}

/// Printed nonrelativistic values: `eps0`, `eps1 / sgn(m)`, `eps2`.
pub fn table_nonrel(channel: Channel) -> Result<(Rational64, Rational64, Rational64)> {
    let r = Rational64::new;
    let rows = [
        (r(-2, 1), r(1, 2), r(3, 64)),
        (r(-2, 9), r(1, 2), r(117, 64)),
        (r(-2, 9), r(0, 1), r(45, 32)),
        (r(-2, 9), r(1, 1), r(45, 32)),
        (r(-2, 25), r(1, 2), r(825, 64)),
        (r(-2, 25), r(0, 1), r(375, 32)),
        (r(-2, 25), r(1, 1), r(375, 32)),
        (r(-2, 25), r(1, 2), r(525, 64)),
        (r(-2, 25), r(3, 2), r(525, 64)),
    ];
    Ok(rows[index(channel)?])
}

/// `gamma_{1/2}`, `gamma_{3/2}`, `gamma_{5/2}` and `(alpha Z)^2` in precision `T`.
#[derive(Clone, Copy, Debug)]
pub struct Gammas<T> {
    pub g1: T,
    pub g3: T,
    pub g5: T,
    pub az2: T,
}

impl<T: Real> Gammas<T> {
    pub fn new(config: &PhysicsConfig) -> Result<Self> {
        config.validate()?;
        let az = config.alpha_eff_real::<T>() * T::from_f64(config.z);
        let az2 = az * az;
        let g = |k: f64| {
            let k = T::from_f64(k);
            let v = k * k - az2;
            if v > T::zero() {
                Ok(v.sqrt())
            } else {
                Err(Error::Supercritical { alpha_z: az.to_f64(), abs_kappa: k.to_f64() })
            }
        };
        Ok(Self { g1: g(0.5)?, g3: g(1.5)?, g5: g(2.5)?, az2 })
    }
}

/// Literal `eps0`.
pub fn table_eps0<T: Real>(channel: Channel, g: &Gammas<T>) -> Result<T> {
    let c = T::from_f64;
    let one = T::one();
    let v = match index(channel)? {
        0 => c(2.0) * g.g1 - one,
        1 | 2 => c(2.0) * (g.g1 + one) / (c(8.0) * g.g1 + c(5.0)).sqrt() - one,
        3 => c(2.0) / c(3.0) * g.g3 - one,
        4 | 5 => c(2.0) * (g.g1 + c(2.0)) / (c(16.0) * g.g1 + c(17.0)).sqrt() - one,
        6 | 7 => c(2.0) * (g.g3 + one) / (c(8.0) * g.g3 + c(13.0)).sqrt() - one,
        _ => c(2.0) / c(5.0) * g.g5 - one,
    };
    Ok(v / g.az2)
}

/// Literal `eps1`; `positive_m` selects `sgn(m)`.
pub fn table_eps1<T: Real>(channel: Channel, positive_m: bool, g: &Gammas<T>) -> Result<T> {
    let c = T::from_f64;
    let one = T::one();
    let v = match index(channel)? {
        0 => c(2.0) * g.g1 + one,
        1 => c(2.0) * (g.g1 + one) / (c(8.0) * g.g1 + c(5.0)).sqrt() + one,
        2 => c(2.0) * (g.g1 + one) / (c(8.0) * g.g1 + c(5.0)).sqrt() - one,
        3 => c(2.0) * g.g3 + one,
        4 => c(2.0) * (g.g1 + c(2.0)) / (c(16.0) * g.g1 + c(17.0)).sqrt() + one,
        5 => c(2.0) * (g.g1 + c(2.0)) / (c(16.0) * g.g1 + c(17.0)).sqrt() - one,
        6 => c(6.0) * (g.g3 + one) / (c(8.0) * g.g3 + c(13.0)).sqrt() + one,
        7 => c(6.0) * (g.g3 + one) / (c(8.0) * g.g3 + c(13.0)).sqrt() - one,
        _ => c(2.0) * g.g5 + one,
    };
    let sign = if positive_m { one } else { -one };
    Ok(sign * v / c(4.0))
}

/// Literal `eps2`.
pub fn table_eps2<T: Real>(channel: Channel, g: &Gammas<T>) -> Result<T> {
    let c = T::from_f64;
    let one = T::one();
    let (g1, g3, g5) = (g.g1, g.g3, g.g5);
    let two_s = |g: T, s: T| {
        c(2.0) * (g + one) * (c(32.0) * g * g * g + c(184.0) * g * g + c(196.0) * g + c(59.0)) / s
    };
    let three_s = |g: T, s: T| {
        c(2.0) * (g + c(2.0)) * (c(64.0) * g * g * g + c(712.0) * g * g + c(1352.0) * g + c(713.0)) / s
    };
    let three_p = |g: T, s: T| {
        c(2.0) * (g + one) * (c(32.0) * g * g * g + c(248.0) * g * g + c(356.0) * g + c(75.0)) / s
    };
    let s2 = (c(8.0) * g1 + c(5.0)).sqrt();
    let s3 = (c(16.0) * g1 + c(17.0)).sqrt();
    let s3p = (c(8.0) * g3 + c(13.0)).sqrt();
    let v = match index(channel)? {
        0 => (c(2.0) * g1 + one) * (c(8.0) * g1 * g1 + c(4.0) * g1 - one),
        1 => c(16.0) * g1 * g1 + c(24.0) * g1 + c(11.0) + two_s(g1, s2),
        2 => -c(16.0) * g1 * g1 - c(24.0) * g1 - c(11.0) + two_s(g1, s2),
        3 => c(3.0) * (c(2.0) * g3 + one) * (c(8.0) * g3 * g3 + c(4.0) * g3 - c(9.0)),
        4 => c(16.0) * g1 * g1 + c(48.0) * g1 + c(47.0) + three_s(g1, s3),
        5 => -c(16.0) * g1 * g1 - c(48.0) * g1 - c(47.0) + three_s(g1, s3),
        6 => c(48.0) * g3 * g3 + c(72.0) * g3 + c(9.0) + three_p(g3, s3p),
        7 => -c(48.0) * g3 * g3 - c(72.0) * g3 - c(9.0) + three_p(g3, s3p),
        _ => c(5.0) * (c(2.0) * g5 + one) * (c(8.0) * g5 * g5 + c(4.0) * g5 - c(25.0)),
    };
    Ok(v / c(128.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::{nonrel_eps0, nonrel_eps1, nonrel_eps2_kappa};
    use crate::real::DoubleDouble;

    #[test]
    fn printed_limits_match_general_rationals() {
        for c in table_channels() {
            let (e0, e1, e2) = table_nonrel(c).unwrap();
            assert_eq!(e0, nonrel_eps0(c.n));
            let s = c.state(true);
            let sgn = Rational64::new(i64::from(s.m_kappa.twice().signum()), 1);
            assert_eq!(e1 * sgn, nonrel_eps1(&s), "{c}");
            assert_eq!(e2, nonrel_eps2_kappa(c), "{c}");
        }
    }

    #[test]
    fn literal_forms_near_limit() {
        let cfg = PhysicsConfig::with_alpha_scale(1.0, 1e-3).unwrap();
        let g = Gammas::<DoubleDouble>::new(&cfg).unwrap();
        for c in table_channels() {
            let (e0, e1, e2) = table_nonrel(c).unwrap();
            let f = |r: Rational64| *r.numer() as f64 / *r.denom() as f64;
            assert!((table_eps0(c, &g).unwrap().to_f64() - f(e0)).abs() < 1e-6, "{c}");
            assert!((table_eps1(c, true, &g).unwrap().to_f64() - f(e1)).abs() < 1e-6, "{c}");
            assert!((table_eps2(c, &g).unwrap().to_f64() - f(e2)).abs() < 1e-5, "{c}");
        }
    }

    #[test]
    fn unknown_state_is_rejected() {
        let c = Channel::new(4, -1).unwrap();
        assert!(table_nonrel(c).is_err());
    }
}
