//! Quantum numbers of the planar Dirac-Coulomb problem.
//!
//! Half-odd integers are stored as twice their value, so `kappa = -3/2` is
//! the integer `-3`. The sign of `kappa` follows the convention in which the
//! ground state is `kappa = -1/2` and `l = |kappa + 1/2|`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

/// CODATA 2018 fine-structure constant.
pub const ALPHA_CODATA: f64 = 1.0 / 137.035_999_084;
pub const ALPHA_INVERSE_CODATA: f64 = 137.035_999_084;

/// A half-odd integer, held as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfOdd(i32);

impl HalfOdd {
    pub fn from_twice(twice: i32) -> Result<Self> {
        if twice % 2 == 0 {
            return Err(Error::InvalidState(format!(
                "{twice}/2 is not a half-odd integer"
            )));
        }
        Ok(Self(twice))
    }

    pub fn twice(self) -> i32 {
        self.0
    }

    pub fn abs_twice(self) -> i32 {
        self.0.abs()
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub fn as_real<T: Real>(self) -> T {
        T::from_i64(i64::from(self.0)) / T::from_f64(2.0)
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    pub fn sign(self) -> i32 {
        self.0.signum()
    }
}

impl fmt::Display for HalfOdd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.0)
    }
}

const L_LETTERS: &[u8] = b"spdfghiklmnoqrtuvwxyz";

fn l_letter(l: u32) -> Result<char> {
    L_LETTERS
        .get(l as usize)
        .map(|&c| c as char)
        .ok_or_else(|| Error::InvalidState(format!("no spectroscopic letter for l = {l}")))
}

/// A radial channel `(n, kappa)`; every quantity except the first-order
/// Zeeman term depends only on the channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Channel {
    pub n: u32,
    pub kappa: HalfOdd,
}

impl Channel {
    pub fn new(n: u32, two_kappa: i32) -> Result<Self> {
        let kappa = HalfOdd::from_twice(two_kappa)?;
        if n == 0 {
            return Err(Error::InvalidState("principal quantum number must be positive".into()));
        }
        let abs_k = kappa.abs_twice() as u32;
        if 2 * n < abs_k + 1 {
            return Err(Error::InvalidState(format!(
                "n = {n} is too small for |kappa| = {}/2",
                abs_k
            )));
        }
        let ch = Self { n, kappa };
        if ch.n_r() == 0 && !kappa.is_negative() {
            return Err(Error::NoBoundState { n, two_kappa });
        }
        Ok(ch)
    }

    /// `n_r = n - |kappa| - 1/2`.
    pub fn n_r(&self) -> u32 {
        self.n - (self.kappa.abs_twice() as u32).div_ceil(2)
    }

    /// `l = |kappa + 1/2|`.
    pub fn l(&self) -> u32 {
        ((self.kappa.twice() + 1) / 2).unsigned_abs()
    }

    pub fn two_kappa(&self) -> i32 {
        self.kappa.twice()
    }

    /// `nl_{|kappa|}` such as `2p_{3/2}`.
    pub fn label(&self) -> String {
        let letter = l_letter(self.l()).unwrap_or('?');
        format!("{}{}_{{{}/2}}", self.n, letter, self.kappa.abs_twice())
    }

    /// The state with `m_kappa = +|kappa|` or `-|kappa|`.
    pub fn state(&self, positive_m: bool) -> QuantumState {
        let a = self.kappa.abs_twice();
        QuantumState {
            n: self.n,
            kappa: self.kappa,
            m_kappa: HalfOdd(if positive_m { a } else { -a }),
        }
    }

    /// Parses `2p3/2`, `2p_{3/2}`, `2p_3/2`, `2p1/2` or an `n,2kappa` pair such as `2,-3`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if let Some((a, b)) = t.split_once(',') {
            let n: u32 = a
                .trim()
                .parse()
                .map_err(|_| Error::InvalidState(format!("cannot parse n in '{text}'")))?;
            let tk: i32 = b
                .trim()
                .parse()
                .map_err(|_| Error::InvalidState(format!("cannot parse 2kappa in '{text}'")))?;
            return Self::new(n, tk);
        }
        let digits: String = t.chars().take_while(|c| c.is_ascii_digit()).collect();
        let n: u32 = digits
            .parse()
            .map_err(|_| Error::InvalidState(format!("state label '{text}' must start with n")))?;
        let rest = &t[digits.len()..];
        let mut chars = rest.chars();
        let letter = chars
            .next()
            .ok_or_else(|| Error::InvalidState(format!("missing orbital letter in '{text}'")))?
            .to_ascii_lowercase();
        let l = L_LETTERS
            .iter()
            .position(|&c| c as char == letter)
            .ok_or_else(|| Error::InvalidState(format!("unknown orbital letter '{letter}'")))?
            as i32;
        let j: String = chars
            .as_str()
            .chars()
            .filter(|c| !matches!(c, '_' | '{' | '}'))
            .collect();
        let (num, den) = j
            .split_once('/')
            .ok_or_else(|| Error::InvalidState(format!("missing |kappa| such as 3/2 in '{text}'")))?;
        let num: i32 = num
            .parse()
            .map_err(|_| Error::InvalidState(format!("bad |kappa| numerator in '{text}'")))?;
        if den != "2" || num % 2 == 0 || num < 1 {
            return Err(Error::InvalidState(format!("|kappa| must be a positive half-odd integer in '{text}'")));
        }
        // |kappa| = l + 1/2 means kappa negative, |kappa| = l - 1/2 means positive
        let two_kappa = if num == 2 * l + 1 {
            -num
        } else if num == 2 * l - 1 {
            num
        } else {
            return Err(Error::InvalidState(format!(
                "|kappa| = {num}/2 is incompatible with l = {l} in '{text}'"
            )));
        };
        Self::new(n, two_kappa)
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `(n, kappa, m_kappa)` with `m_kappa = +-kappa`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantumState {
    pub n: u32,
    pub kappa: HalfOdd,
    pub m_kappa: HalfOdd,
}

impl QuantumState {
    pub fn new(n: u32, two_kappa: i32, two_m_kappa: i32) -> Result<Self> {
        let ch = Channel::new(n, two_kappa)?;
        let m = HalfOdd::from_twice(two_m_kappa)?;
        if m.abs_twice() != ch.kappa.abs_twice() {
            return Err(Error::InvalidState(format!(
                "m_kappa = {m} must equal +-kappa = +-{}",
                ch.kappa
            )));
        }
        Ok(Self {
            n,
            kappa: ch.kappa,
            m_kappa: m,
        })
    }

    pub fn channel(&self) -> Channel {
        Channel {
            n: self.n,
            kappa: self.kappa,
        }
    }

    pub fn n_r(&self) -> u32 {
        self.channel().n_r()
    }

    pub fn l(&self) -> u32 {
        self.channel().l()
    }

    pub fn label(&self) -> String {
        self.channel().label()
    }

    /// `m_kappa / kappa`, which is `+1` or `-1`.
    pub fn m_over_kappa(&self) -> i32 {
        self.m_kappa.sign() * self.kappa.sign()
    }
}

/// Nuclear charge and the (scalable) fine-structure constant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicsConfig {
    pub z: f64,
    pub alpha: f64,
    pub alpha_scale: f64,
}

impl PhysicsConfig {
    pub fn new(z: f64, alpha: f64, alpha_scale: f64) -> Result<Self> {
        let cfg = Self {
            z,
            alpha,
            alpha_scale,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// CODATA alpha, unscaled.
    pub fn codata(z: f64) -> Result<Self> {
        Self::new(z, ALPHA_CODATA, 1.0)
    }

    pub fn with_alpha_scale(z: f64, alpha_scale: f64) -> Result<Self> {
        Self::new(z, ALPHA_CODATA, alpha_scale)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.z > 0.0) || !self.z.is_finite() {
            return Err(Error::Domain(format!("nuclear charge Z must be positive, got {}", self.z)));
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::Domain(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.alpha_scale > 0.0) || !self.alpha_scale.is_finite() {
            return Err(Error::Domain(format!(
                "alpha_scale must be positive, got {}",
                self.alpha_scale
            )));
        }
        let limit = 0.5 / self.alpha_eff();
        if self.z >= limit {
            return Err(Error::ChargeConstraint { z: self.z, limit });
        }
        Ok(())
    }

    pub fn alpha_eff(&self) -> f64 {
        self.alpha * self.alpha_scale
    }

    pub fn alpha_z(&self) -> f64 {
        self.alpha_eff() * self.z
    }

    /// Effective `alpha` in the requested precision. The CODATA value is
    /// formed as `1/137.035999084` in that precision rather than rounded
    /// through `f64` first.
    pub fn alpha_eff_real<T: Real>(&self) -> T {
        let base = if self.alpha == ALPHA_CODATA {
            T::one() / T::from_f64(ALPHA_INVERSE_CODATA)
        } else {
            T::from_f64(self.alpha)
        };
        base * T::from_f64(self.alpha_scale)
    }
}

/// `gamma_kappa = sqrt(kappa^2 - (alpha Z)^2)`.
pub fn gamma_kappa(kappa: HalfOdd, config: &PhysicsConfig) -> Result<f64> {
    let az = config.alpha_z();
    let k = kappa.value().abs();
    if az >= k {
        return Err(Error::Supercritical {
            alpha_z: az,
            abs_kappa: k,
        });
    }
    Ok(((k - az) * (k + az)).sqrt())
}

/// `N = sqrt(n_r^2 + 2 n_r gamma + kappa^2)`.
pub fn big_n(n_r: u32, kappa: HalfOdd, config: &PhysicsConfig) -> Result<f64> {
    let g = gamma_kappa(kappa, config)?;
    let nr = f64::from(n_r);
    let k = kappa.value();
    Ok((nr * nr + 2.0 * nr * g + k * k).sqrt())
}

/// Derived channel quantities in precision `T`.
#[derive(Clone, Copy, Debug)]
pub struct ChannelParams<T> {
    pub channel: Channel,
    pub n_r: u32,
    pub kappa: T,
    pub z: T,
    pub alpha: T,
    pub alpha_z: T,
    pub gamma: T,
    pub big_n: T,
}

impl<T: Real> ChannelParams<T> {
    pub fn new(channel: Channel, config: &PhysicsConfig) -> Result<Self> {
        config.validate()?;
        gamma_kappa(channel.kappa, config)?;
        let kappa: T = channel.kappa.as_real();
        let z = T::from_f64(config.z);
        let alpha = config.alpha_eff_real::<T>();
        let alpha_z = alpha * z;
        let abs_k = kappa.abs();
        let gamma = ((abs_k - alpha_z) * (abs_k + alpha_z)).sqrt();
        let nr = T::from_i64(i64::from(channel.n_r()));
        let big_n = (nr * nr + T::from_f64(2.0) * nr * gamma + kappa * kappa).sqrt();
        Ok(Self {
            channel,
            n_r: channel.n_r(),
            kappa,
            z,
            alpha,
            alpha_z,
            gamma,
            big_n,
        })
    }

    pub fn n_r_real(&self) -> T {
        T::from_i64(i64::from(self.n_r))
    }

    /// Speed of light in atomic units, `1/alpha`.
    pub fn c(&self) -> T {
        T::one() / self.alpha
    }

    /// `E^(0)/mc^2 = (n_r + gamma)/N`.
    pub fn energy_ratio(&self) -> T {
        (self.n_r_real() + self.gamma) / self.big_n
    }

    /// `sqrt((1-e)/(1+e)) = alpha Z/(n_r + gamma + N)` at the bound energy.
    pub fn epsilon_aux(&self) -> T {
        self.alpha_z / (self.n_r_real() + self.gamma + self.big_n)
    }

    /// Inverse length scale `k = Z/N` (atomic units) at the bound energy.
    pub fn k_scale(&self) -> T {
        self.z / self.big_n
    }
}

/// Every valid `(n, kappa, m_kappa)` with `n <= n_max`, ordered by `n`, then
/// `|kappa|` with negative `kappa` first, then `m_kappa` descending.
pub fn enumerate_states(n_max: u32) -> Vec<QuantumState> {
    enumerate_channels(n_max)
        .into_iter()
        .flat_map(|ch| [ch.state(true), ch.state(false)])
        .collect()
}

/// Every bound channel with `n <= n_max`, in Table-1 order.
pub fn enumerate_channels(n_max: u32) -> Vec<Channel> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        for abs_two in (1..=(2 * n as i32 - 1)).step_by(2) {
            for tk in [-abs_two, abs_two] {
                if let Ok(ch) = Channel::new(n, tk) {
                    out.push(ch);
                }
            }
        }
    }
    out
}

/// `(2 m_l, 2 m_s)` from `m_l = m + m/(2 kappa)`, `m_s = -m/(2 kappa)`.
pub fn ml_ms(kappa: HalfOdd, m_kappa: HalfOdd) -> (i32, i32) {
    let s = m_kappa.sign() * kappa.sign();
    let two_ms = -s;
    let two_ml = m_kappa.twice() + s;
    (two_ml, two_ms)
}

/// Inverse map: `kappa = -(1 + m_l/m_s)/2`, `m_kappa = m_l + m_s`.
pub fn kappa_m_from_ml_ms(two_ml: i32, two_ms: i32) -> Result<(HalfOdd, HalfOdd)> {
    if two_ms.abs() != 1 || two_ml % 2 != 0 {
        return Err(Error::InvalidState(format!(
            "m_l must be an integer and m_s = +-1/2, got 2m_l = {two_ml}, 2m_s = {two_ms}"
        )));
    }
    let ml = two_ml / 2;
    let two_kappa = -(1 + 2 * ml * two_ms);
    Ok((HalfOdd::from_twice(two_kappa)?, HalfOdd::from_twice(two_ml + two_ms)?))
}

/// Spectroscopic label of a state, e.g. `1s_{1/2}`.
pub fn spectroscopic_label(state: &QuantumState) -> String {
    state.label()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ho(t: i32) -> HalfOdd {
        HalfOdd::from_twice(t).unwrap()
    }

    #[test]
    fn gamma_kappa_examples() {
        let zero_cfg = PhysicsConfig::new(1.0, 1e-300, 1.0).unwrap();
        assert_eq!(gamma_kappa(ho(1), &zero_cfg).unwrap(), 0.5);
        let c = PhysicsConfig::new(0.3, 1.0, 1.0).unwrap();
        assert!((gamma_kappa(ho(-1), &c).unwrap() - 0.4).abs() < 1e-15);
        // alpha Z = 0.6 violates the global charge limit, but gamma_{3/2} is still defined
        let raw = PhysicsConfig {
            z: 0.6,
            alpha: 1.0,
            alpha_scale: 1.0,
        };
        let want = (2.25f64 - 0.36).sqrt();
        assert!((gamma_kappa(ho(3), &raw).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn supercritical_is_reported() {
        let raw = PhysicsConfig {
            z: 0.6,
            alpha: 1.0,
            alpha_scale: 1.0,
        };
        assert!(matches!(gamma_kappa(ho(-1), &raw), Err(Error::Supercritical { .. })));
    }

    #[test]
    fn big_n_examples() {
        let cfg = PhysicsConfig::codata(37.0).unwrap();
        assert!((big_n(0, ho(-1), &cfg).unwrap() - 0.5).abs() < 1e-15);
        let tiny = PhysicsConfig::new(1.0, 1e-300, 1.0).unwrap();
        assert!((big_n(1, ho(-1), &tiny).unwrap() - 1.5).abs() < 1e-15);
        let cfg = PhysicsConfig::new(0.4, 1.0, 1.0).unwrap();
        let g = (2.25f64 - 0.16).sqrt();
        let want = (4.0 + 4.0 * g + 2.25f64).sqrt();
        assert!((big_n(2, ho(3), &cfg).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_states(1).len(), 2);
        assert_eq!(enumerate_states(2).len(), 8);
        for n in 1..=10u32 {
            let here = enumerate_states(n).iter().filter(|s| s.n == n).count();
            assert_eq!(here as u32, 2 * (2 * n - 1));
            assert_eq!(enumerate_states(n).len() as u32, 2 * n * n);
        }
    }

    #[test]
    fn table_one_rows() {
        let rows: Vec<(u32, u32, i32, u32, &str)> = vec![
            (1, 0, -1, 0, "1s_{1/2}"),
            (2, 1, -1, 0, "2s_{1/2}"),
            (2, 1, 1, 1, "2p_{1/2}"),
            (2, 0, -3, 1, "2p_{3/2}"),
            (3, 2, -1, 0, "3s_{1/2}"),
            (3, 2, 1, 1, "3p_{1/2}"),
            (3, 1, -3, 1, "3p_{3/2}"),
            (3, 1, 3, 2, "3d_{3/2}"),
            (3, 0, -5, 2, "3d_{5/2}"),
        ];
        let chans = enumerate_channels(3);
        assert_eq!(chans.len(), rows.len());
        for (ch, (n, nr, tk, l, label)) in chans.iter().zip(rows) {
            assert_eq!((ch.n, ch.n_r(), ch.two_kappa(), ch.l()), (n, nr, tk, l));
            assert_eq!(ch.label(), label);
            assert_eq!(Channel::parse(label).unwrap(), *ch);
        }
    }

    #[test]
    fn parse_variants() {
        assert_eq!(Channel::parse("2p3/2").unwrap(), Channel::new(2, -3).unwrap());
        assert_eq!(Channel::parse("3d_3/2").unwrap(), Channel::new(3, 3).unwrap());
        assert_eq!(Channel::parse("2,-3").unwrap(), Channel::new(2, -3).unwrap());
        assert!(Channel::parse("1p1/2").is_err());
        assert!(Channel::parse("2s3/2").is_err());
    }

    #[test]
    fn no_bound_state_for_positive_kappa_at_zero_n_r() {
        assert!(matches!(Channel::new(1, 1), Err(Error::NoBoundState { .. })));
        assert!(matches!(Channel::new(2, 3), Err(Error::NoBoundState { .. })));
    }

    #[test]
    fn table_four() {
        let rows = [
            (-1, 1, 0, 1),
            (-1, -1, 0, -1),
            (1, 1, 2, -1),
            (1, -1, -2, 1),
            (-3, 3, 2, 1),
            (-3, -3, -2, -1),
            (3, 3, 4, -1),
            (3, -3, -4, 1),
            (-5, 5, 4, 1),
            (-5, -5, -4, -1),
        ];
        for (tk, tm, tml, tms) in rows {
            assert_eq!(ml_ms(ho(tk), ho(tm)), (tml, tms));
        }
    }

    #[test]
    fn ml_ms_round_trip_and_l_relation() {
        for tk in (-15..=15).filter(|t: &i32| t % 2 != 0) {
            for tm in [tk, -tk] {
                let (tml, tms) = ml_ms(ho(tk), ho(tm));
                let (k, m) = kappa_m_from_ml_ms(tml, tms).unwrap();
                assert_eq!((k.twice(), m.twice()), (tk, tm));
            }
        }
        for s in enumerate_states(6) {
            let (tml, _) = ml_ms(s.kappa, s.m_kappa);
            assert_eq!((tml / 2).unsigned_abs(), s.l());
            let k = s.kappa.value();
            let l = f64::from(s.l());
            assert_eq!(k * (k + 1.0), l * l - 0.25);
        }
    }

    #[test]
    fn config_guards() {
        assert!(matches!(PhysicsConfig::codata(80.0), Err(Error::ChargeConstraint { .. })));
        assert!(PhysicsConfig::with_alpha_scale(1.0, 0.0).is_err());
        assert!(PhysicsConfig::codata(68.0).is_ok());
    }
}
