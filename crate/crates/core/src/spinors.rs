//! Axial two-component spinors `Phi_{kappa m}(phi)` and numerical checks of
//! their algebra on a uniform `phi` grid.
//!
//! `Phi_{kappa,-kappa} = (e^{-i(kappa+1/2)phi}, 0)/sqrt(2 pi)` and
//! `Phi_{kappa,kappa} = (0, e^{i(kappa+1/2)phi})/sqrt(2 pi)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qnum::HalfOdd;

type Spinor = [Complex64; 2];

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AxialSpinor {
    pub kappa: HalfOdd,
    pub m_kappa: HalfOdd,
}

impl std::fmt::Display for AxialSpinor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Phi(kappa = {}/2, m = {}/2)", self.kappa.twice(), self.m_kappa.twice())
    }
}

impl AxialSpinor {
    pub fn new(two_kappa: i32, two_m: i32) -> Result<Self> {
        let kappa = HalfOdd::from_twice(two_kappa)?;
        let m_kappa = HalfOdd::from_twice(two_m)?;
        if two_m.abs() != two_kappa.abs() {
            return Err(Error::InvalidState(format!(
                "axial spinor needs m = +-kappa, got kappa = {two_kappa}/2, m = {two_m}/2"
            )));
        }
        Ok(Self { kappa, m_kappa })
    }

    /// All spinors with `|kappa| <= max_two_kappa/2`.
    pub fn enumerate(max_two_kappa: i32) -> Vec<Self> {
        let mut out = Vec::new();
        for tk in (-max_two_kappa..=max_two_kappa).filter(|t| t % 2 != 0) {
            for tm in [-tk.abs(), tk.abs()] {
                out.push(Self::new(tk, tm).expect("enumerated spinor is valid"));
            }
        }
        out
    }

    fn shifted(two_kappa: i32, two_m: i32) -> Self {
        Self::new(two_kappa, two_m).expect("derived spinor is valid")
    }

    /// `m/kappa`, either `+1` or `-1`.
    pub fn m_over_kappa(&self) -> i32 {
        self.m_kappa.twice() / self.kappa.twice()
    }

    pub fn is_lower(&self) -> bool {
        self.m_kappa == self.kappa
    }

    /// Angular frequency `p` in `e^{i p phi}` of the nonzero component.
    pub fn frequency(&self) -> f64 {
        if self.is_lower() {
            self.m_kappa.value() + 0.5
        } else {
            self.m_kappa.value() - 0.5
        }
    }

    pub fn eval(&self, phi: f64) -> Spinor {
        let v = Complex64::from_polar(1.0 / (2.0 * PI).sqrt(), self.frequency() * phi);
        if self.is_lower() {
            [Complex64::new(0.0, 0.0), v]
        } else {
            [v, Complex64::new(0.0, 0.0)]
        }
    }

    /// `d/dphi` of [`Self::eval`].
    pub fn derivative(&self, phi: f64) -> Spinor {
        let p = I * self.frequency();
        let [a, b] = self.eval(phi);
        [p * a, p * b]
    }

    /// `Phi_{kappa + m/kappa, m + 1}`.
    pub fn raised(&self) -> Self {
        let s = self.m_over_kappa();
        Self::shifted(self.kappa.twice() + 2 * s, self.m_kappa.twice() + 2)
    }

    /// `Phi_{kappa - m/kappa, m - 1}`.
    pub fn lowered(&self) -> Self {
        let s = self.m_over_kappa();
        Self::shifted(self.kappa.twice() - 2 * s, self.m_kappa.twice() - 2)
    }

    /// `Phi_{-kappa-1, m + m/kappa}`.
    pub fn sigma_partner(&self) -> Self {
        Self::shifted(-self.kappa.twice() - 2, self.m_kappa.twice() + 2 * self.m_over_kappa())
    }

    /// `Phi_{-kappa, m}`.
    pub fn flipped(&self) -> Self {
        Self::shifted(-self.kappa.twice(), self.m_kappa.twice())
    }
}

fn sigma1(v: Spinor) -> Spinor {
    [v[1], v[0]]
}

fn sigma2(v: Spinor) -> Spinor {
    [-I * v[1], I * v[0]]
}

fn sigma3(v: Spinor) -> Spinor {
    [v[0], -v[1]]
}

fn scale(s: Complex64, v: Spinor) -> Spinor {
    [s * v[0], s * v[1]]
}

fn add(a: Spinor, b: Spinor) -> Spinor {
    [a[0] + b[0], a[1] + b[1]]
}

fn dist(a: Spinor, b: Spinor) -> f64 {
    ((a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr()).sqrt()
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Uniform grid `phi_j = 2 pi j / n`.
pub fn phi_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
}

fn require_grid(grid_size: usize, max_frequency: f64) -> Result<()> {
    let need = (4.0 * max_frequency).ceil() as usize + 1;
    if grid_size < need {
        return Err(Error::Precondition(format!(
            "phi grid of {grid_size} points undersamples frequency {max_frequency}; need at least {need}"
        )));
    }
    Ok(())
}

/// Trapezoidal `int_0^{2 pi} w(phi) a^dagger b dphi`.
pub fn weighted_inner_product(
    a: &AxialSpinor,
    b: &AxialSpinor,
    weight: impl Fn(f64) -> f64,
    weight_frequency: f64,
    grid_size: usize,
) -> Result<Complex64> {
    let fmax = a.frequency().abs() + b.frequency().abs() + weight_frequency;
    require_grid(grid_size, fmax)?;
    let h = 2.0 * PI / grid_size as f64;
    let mut s = Complex64::new(0.0, 0.0);
    for phi in phi_grid(grid_size) {
        let u = a.eval(phi);
        let v = b.eval(phi);
        s += (u[0].conj() * v[0] + u[1].conj() * v[1]) * weight(phi);
    }
    Ok(s * h)
}

pub fn spinor_inner_product(a: &AxialSpinor, b: &AxialSpinor, grid_size: usize) -> Result<Complex64> {
    weighted_inner_product(a, b, |_| 1.0, 0.0, grid_size)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl IdentityCheck {
    fn new(identity: impl Into<String>, max_error: f64, tolerance: f64) -> Self {
        Self { identity: identity.into(), max_error, tolerance, passed: max_error <= tolerance }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpinorReport {
    pub spinor: Option<AxialSpinor>,
    pub checks: Vec<IdentityCheck>,
}

impl SpinorReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&IdentityCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

/// How `d/dphi` is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivativeMode {
    Analytic,
    /// Central differences with `h = 1e-6`.
    FiniteDifference,
}

impl DerivativeMode {
    fn tolerance(self) -> f64 {
        match self {
            DerivativeMode::Analytic => 1e-12,
            DerivativeMode::FiniteDifference => 1e-6,
        }
    }

    fn apply(self, s: &AxialSpinor, phi: f64) -> Spinor {
        match self {
            DerivativeMode::Analytic => s.derivative(phi),
            DerivativeMode::FiniteDifference => {
                let h = 1e-6;
                let (p, m) = (s.eval(phi + h), s.eval(phi - h));
                scale(re(0.5 / h), add(p, scale(re(-1.0), m)))
            }
        }
    }
}

/// Pointwise checks of the `cos`/`sin` expansions, the Pauli actions, the
/// polar projections, the `Lambda`/`J`/`K` eigenvalues and the `sigma . nabla`
/// product rule for one spinor.
pub fn verify_operator_actions(spinor: &AxialSpinor, grid_size: usize, mode: DerivativeMode) -> Result<SpinorReport> {
    require_grid(grid_size, spinor.frequency().abs() + 1.0)?;
    let tol = mode.tolerance();
    let mk = f64::from(spinor.m_over_kappa());
    let kappa = spinor.kappa.value();
    let m = spinor.m_kappa.value();
    let up = spinor.raised();
    let down = spinor.lowered();
    let partner = spinor.sigma_partner();
    let flip = spinor.flipped();
    let half = re(0.5);
    let half_i = Complex64::new(0.0, -0.5);

    let mut err = [0.0f64; 11];
    for phi in phi_grid(grid_size) {
        let v = spinor.eval(phi);
        let (c, s) = (phi.cos(), phi.sin());
        let e = [
            dist(scale(re(c), v), add(scale(half, up.eval(phi)), scale(half, down.eval(phi)))),
            dist(scale(re(s), v), add(scale(half_i, up.eval(phi)), scale(-half_i, down.eval(phi)))),
            dist(sigma1(v), partner.eval(phi)),
            dist(sigma2(v), scale(-I * mk, partner.eval(phi))),
            dist(sigma3(v), scale(re(-mk), v)),
            dist(add(scale(re(c), sigma1(v)), scale(re(s), sigma2(v))), flip.eval(phi)),
            dist(add(scale(re(-s), sigma1(v)), scale(re(c), sigma2(v))), scale(-I * mk, flip.eval(phi))),
        ];
        let lam = scale(-I, mode.apply(spinor, phi));
        let j = add(lam, scale(half, sigma3(v)));
        let k = scale(re(-1.0), add(sigma3(lam), scale(half, v)));
        let e2 = [
            dist(lam, scale(re(mk * (kappa + 0.5)), v)),
            dist(j, scale(re(m), v)),
            dist(k, scale(re(kappa), v)),
        ];
        let mut worst_nabla = 0.0f64;
        for r in [0.25f64, 1.0, 3.5] {
            let f = r * r * (-r).exp();
            let df = (2.0 * r - r * r) * (-r).exp();
            let dphi = mode.apply(spinor, phi);
            let lhs = add(
                scale(re(df), add(scale(re(c), sigma1(v)), scale(re(s), sigma2(v)))),
                scale(re(f / r), add(scale(re(-s), sigma1(dphi)), scale(re(c), sigma2(dphi)))),
            );
            let rhs = scale(re(df + (kappa + 0.5) * f / r), flip.eval(phi));
            worst_nabla = worst_nabla.max(dist(lhs, rhs));
        }
        for (slot, val) in err.iter_mut().zip(e.iter().chain(e2.iter()).chain([worst_nabla].iter())) {
            *slot = slot.max(*val);
        }
    }

    // Projection of cos(phi) Phi onto the neighbouring spinors.
    let h = 2.0 * PI / grid_size as f64;
    let mut proj_err = 0.0f64;
    let bound = spinor.kappa.abs_twice() + 2;
    for other in AxialSpinor::enumerate(bound) {
        let mut acc = Complex64::new(0.0, 0.0);
        for phi in phi_grid(grid_size) {
            let u = other.eval(phi);
            let v = spinor.eval(phi);
            acc += (u[0].conj() * v[0] + u[1].conj() * v[1]) * phi.cos();
        }
        acc *= h;
        let want = if other == up || other == down { 0.5 } else { 0.0 };
        proj_err = proj_err.max((acc - re(want)).norm());
    }

    let names = [
        "cos expansion",
        "sin expansion",
        "sigma1 action",
        "sigma2 action",
        "sigma3 action",
        "n_r . sigma action",
        "n_phi . sigma action",
        "Lambda eigenvalue",
        "J eigenvalue",
        "K eigenvalue",
        "sigma . nabla product rule",
    ];
    let mut checks: Vec<IdentityCheck> = names
        .iter()
        .zip(err.iter())
        .map(|(n, &e)| IdentityCheck::new(*n, e, tol))
        .collect();
    checks.push(IdentityCheck::new("cos expansion coefficients", proj_err, 1e-12));
    Ok(SpinorReport { spinor: Some(*spinor), checks })
}

fn delta(a: bool) -> f64 {
    if a {
        1.0
    } else {
        0.0
    }
}

/// Orthonormality and the `cos`/`sin` weighted integrals (both printed forms)
/// over every pair with `|kappa| <= max_two_kappa/2`.
pub fn verify_integrals(max_two_kappa: i32, grid_size: usize) -> Result<SpinorReport> {
    let all = AxialSpinor::enumerate(max_two_kappa);
    let (mut ortho, mut cos_m, mut cos_k, mut sin_m, mut sin_k) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for a in &all {
        for b in &all {
            let ip = spinor_inner_product(a, b, grid_size)?;
            ortho = ortho.max((ip - re(delta(a == b))).norm());

            let same_ratio = delta(a.m_over_kappa() == b.m_over_kappa());
            let (ma, mb) = (a.m_kappa.twice(), b.m_kappa.twice());
            let (ka, kb) = (a.kappa.twice(), b.kappa.twice());
            let m_plus = delta(ma == mb + 2);
            let m_minus = delta(ma == mb - 2);
            let k_plus = delta(ka == kb + 2);
            let k_minus = delta(ka == kb - 2);
            let sgn = f64::from(a.m_over_kappa());

            let c = weighted_inner_product(a, b, f64::cos, 1.0, grid_size)?;
            cos_m = cos_m.max((c - re(0.5 * same_ratio * (m_plus + m_minus))).norm());
            cos_k = cos_k.max((c - re(0.5 * same_ratio * (k_plus + k_minus))).norm());

            let s = weighted_inner_product(a, b, f64::sin, 1.0, grid_size)?;
            let inv_2i = Complex64::new(0.0, -0.5);
            sin_m = sin_m.max((s - inv_2i * same_ratio * (m_plus - m_minus)).norm());
            sin_k = sin_k.max((s - inv_2i * sgn * same_ratio * (k_plus - k_minus)).norm());
        }
    }
    Ok(SpinorReport {
        spinor: None,
        checks: vec![
            IdentityCheck::new("orthonormality", ortho, 1e-12),
            IdentityCheck::new("cos integral (m form)", cos_m, 1e-12),
            IdentityCheck::new("cos integral (kappa form)", cos_k, 1e-12),
            IdentityCheck::new("sin integral (m form)", sin_m, 1e-12),
            IdentityCheck::new("sin integral (kappa form)", sin_k, 1e-12),
        ],
    })
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// `n_z x n_phi = -n_r` and `n_z x n_r = n_phi` at the given angles.
pub fn frame_identity_error(phis: &[f64]) -> f64 {
    let nz = [0.0, 0.0, 1.0];
    phis.iter()
        .map(|&phi| {
            let (c, s) = (phi.cos(), phi.sin());
            let nr = [c, s, 0.0];
            let nphi = [-s, c, 0.0];
            let a = cross(nz, nphi);
            let b = cross(nz, nr);
            (0..3)
                .map(|i| (a[i] + nr[i]).abs().max((b[i] - nphi[i]).abs()))
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// Every check for all spinors with `|kappa| <= max_two_kappa/2`.
pub fn verify_all(max_two_kappa: i32, grid_size: usize) -> Result<Vec<SpinorReport>> {
    let mut out = vec![verify_integrals(max_two_kappa, grid_size)?];
    for s in AxialSpinor::enumerate(max_two_kappa) {
        out.push(verify_operator_actions(&s, grid_size, DerivativeMode::Analytic)?);
    }
    let phis: Vec<f64> = (0..100).map(|j| (f64::from(j) * 0.618_033_988_749_895).fract() * 2.0 * PI).collect();
    let e = frame_identity_error(&phis);
    out.push(SpinorReport { spinor: None, checks: vec![IdentityCheck::new("polar frame cross products", e, 1e-15)] });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn inner_product_examples() {
        let a = AxialSpinor::new(-1, 1).unwrap();
        let b = AxialSpinor::new(3, 3).unwrap();
        assert!((spinor_inner_product(&a, &a, 64).unwrap() - re(1.0)).norm() < 1e-14);
        assert!(spinor_inner_product(&a, &b, 64).unwrap().norm() < 1e-14);
    }

    #[test]
    fn undersampled_grid_is_rejected() {
        let a = AxialSpinor::new(7, 7).unwrap();
        assert!(matches!(spinor_inner_product(&a, &a, 8), Err(Error::Precondition(_))));
    }

    #[test]
    fn sigma3_on_ground_spinor() {
        let a = AxialSpinor::new(-1, 1).unwrap();
        let v = a.eval(0.3);
        assert!(dist(sigma3(v), v) < 1e-15);
    }

    #[test]
    fn full_suite_passes() {
        for rep in verify_all(7, 256).unwrap() {
            assert!(rep.all_passed(), "{:?}", rep.failures());
        }
    }

    #[test]
    fn finite_difference_mode_agrees() {
        for s in AxialSpinor::enumerate(5) {
            let rep = verify_operator_actions(&s, 64, DerivativeMode::FiniteDifference).unwrap();
            assert!(rep.all_passed(), "{:?}", rep.failures());
        }
    }

    #[test]
    fn mismatched_m_rejected() {
        assert!(AxialSpinor::new(3, 1).is_err());
    }

    proptest! {
        #[test]
        fn pointwise_norm(tk in (-9i32..=9).prop_filter("odd", |t| t % 2 != 0), upper in any::<bool>(), phi in 0.0..(2.0 * PI)) {
            let tm = if upper { -tk } else { tk };
            let s = AxialSpinor::new(tk, tm).unwrap();
            let v = s.eval(phi);
            prop_assert!((v[0].norm_sqr() + v[1].norm_sqr() - 1.0 / (2.0 * PI)).abs() < 1e-15);
            prop_assert!(v[0] == re(0.0) || v[1] == re(0.0));
        }

        #[test]
        fn frame_identities(phi in 0.0..(2.0 * PI)) {
            prop_assert!(frame_identity_error(&[phi]) <= 1e-15);
        }
    }
}
