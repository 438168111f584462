//! SI constants (CODATA 2018) and the atomic unit of magnetic induction.

use crate::qnum::enumerate_states;

pub const HBAR_SI: f64 = 1.054_571_817e-34;
pub const ELEMENTARY_CHARGE_SI: f64 = 1.602_176_634e-19;
pub const BOHR_RADIUS_SI: f64 = 5.291_772_109_03e-11;

/// `B0 = hbar/(e a0^2)` in tesla.
pub fn b0_tesla() -> f64 {
    HBAR_SI / (ELEMENTARY_CHARGE_SI * BOHR_RADIUS_SI * BOHR_RADIUS_SI)
}

/// Number of `(kappa, m_kappa)` states with principal quantum number `n`,
/// counted by enumeration.
pub fn degeneracy(n: u32) -> usize {
    enumerate_states(n).iter().filter(|s| s.n == n).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b0_is_atomic_unit() {
        let b0 = b0_tesla();
        assert!((b0 - 2.350_517_567_58e5).abs() < 1e-4 * b0);
    }

    #[test]
    fn level_degeneracy() {
        for n in 1..=10u32 {
            assert_eq!(degeneracy(n), 2 * (2 * n as usize - 1), "n={n}");
        }
    }
}
