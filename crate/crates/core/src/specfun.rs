//! Log-gamma, generalized Laguerre polynomials and Gauss quadrature for the
//! weight `x^a e^{-x}` on `[0, inf)`.

use crate::error::{Error, Result};
use crate::linalg::tridiagonal_ql;
use crate::real::{factorial, pochhammer, Real};

const LANCZOS_COF: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

/// `ln Gamma(x)` for `x > 0` (Lanczos approximation, g = 671/128).
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("log_gamma requires x > 0, got {x}")));
    }
    let mut y = x;
    let tmp = x + 5.242_187_5;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut ser = 0.999_999_999_999_997_092;
    for c in LANCZOS_COF {
        y += 1.0;
        ser += c / y;
    }
    Ok(tmp + (2.506_628_274_631_000_5 * ser / x).ln())
}

/// `Gamma(x)` for `x > 0`.
pub fn gamma(x: f64) -> Result<f64> {
    log_gamma(x).map(f64::exp)
}

/// `L_n^{(alpha)}(x)` by upward recurrence. `n = -1` yields `0`.
pub fn laguerre(n: i64, alpha: f64, x: f64) -> Result<f64> {
    if !(alpha > -1.0) {
        return Err(Error::Domain(format!(
            "Laguerre upper index must exceed -1, got {alpha}"
        )));
    }
    if n < -1 {
        return Err(Error::Domain(format!("Laguerre degree must be >= -1, got {n}")));
    }
    Ok(laguerre_unchecked(n, alpha, x))
}

/// Recurrence without argument validation, for any [`Real`].
pub fn laguerre_unchecked<T: Real>(n: i64, alpha: T, x: T) -> T {
    if n < 0 {
        return T::zero();
    }
    let mut prev = T::zero();
    let mut cur = T::one();
    for j in 0..n {
        let jf = T::from_i64(j);
        let next = ((T::from_i64(2 * j + 1) + alpha - x) * cur - (jf + alpha) * prev)
            / T::from_i64(j + 1);
        prev = cur;
        cur = next;
    }
    cur
}

/// `[L_0(x), ..., L_{n_max}(x)]` for upper index `alpha`.
pub fn laguerre_table<T: Real>(n_max: usize, alpha: T, x: T) -> Vec<T> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut prev = T::zero();
    let mut cur = T::one();
    out.push(cur);
    for j in 0..n_max {
        let jf = T::from_i64(j as i64);
        let next = ((T::from_i64(2 * j as i64 + 1) + alpha - x) * cur - (jf + alpha) * prev)
            / T::from_i64(j as i64 + 1);
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// Gauss rule for the weight `x^a e^{-x}`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub order: usize,
    pub alpha_weight: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// `sum_i w_i f(x_i)`, approximating `int_0^inf x^a e^{-x} f(x) dx`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Gauss rule whose weights sum to one (the weight function divided by its
/// zeroth moment), usable in any precision.
#[derive(Clone, Debug)]
pub struct NormalizedRule<T> {
    pub alpha_weight: T,
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> NormalizedRule<T> {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }
}

/// Golub-Welsch construction with unit zeroth moment.
pub fn normalized_gauss_laguerre<T: Real>(order: usize, a: T) -> Result<NormalizedRule<T>> {
    if order == 0 {
        return Err(Error::Domain("quadrature order must be at least 1".into()));
    }
    if !(a > -T::one()) {
        return Err(Error::Domain(format!(
            "quadrature weight exponent must exceed -1, got {a}"
        )));
    }
    let diag: Vec<T> = (0..order)
        .map(|j| T::from_i64(2 * j as i64 + 1) + a)
        .collect();
    let off: Vec<T> = (1..order)
        .map(|j| (T::from_i64(j as i64) * (T::from_i64(j as i64) + a)).sqrt())
        .collect();
    let (nodes, first) = tridiagonal_ql(&diag, &off, 100).map_err(|e| {
        Error::Numeric(format!(
            "Golub-Welsch eigen-iteration failed for order {order}, a = {a}: {e}"
        ))
    })?;
    let weights = first.iter().map(|&z| z * z).collect();
    Ok(NormalizedRule {
        alpha_weight: a,
        nodes,
        weights,
    })
}

/// Gauss rule of the given order for `x^a e^{-x}`; weights sum to `Gamma(a+1)`.
pub fn gauss_generalized_laguerre(order: usize, a: f64) -> Result<QuadratureRule> {
    let rule = normalized_gauss_laguerre(order, a)?;
    let mass = gamma(a + 1.0)?;
    Ok(QuadratureRule {
        order,
        alpha_weight: a,
        nodes: rule.nodes,
        weights: rule.weights.iter().map(|w| w * mass).collect(),
    })
}

/// Default order for integrals between states of radial numbers `n_r`, `n_r'`.
pub fn default_quadrature_order(n_r: usize, n_r_prime: usize) -> usize {
    (n_r + n_r_prime + 8).max(32)
}

/// Generalized binomial coefficient `C(x, m)` for integer `m >= 0`.
fn binomial_general(x: f64, m: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..m {
        acc *= (x - i as f64) / (i as f64 + 1.0);
    }
    acc
}

/// `int_0^inf x^gamma e^{-x} L_n^{(alpha)} L_{n'}^{(beta)} dx` as the finite
/// double-binomial sum.
pub fn laguerre_integral_identity(n: u32, n_prime: u32, alpha: f64, beta: f64, gamma_exp: f64) -> Result<f64> {
    if !(gamma_exp > -1.0) {
        return Err(Error::Domain(format!(
            "integral identity requires gamma > -1, got {gamma_exp}"
        )));
    }
    let base = gamma(gamma_exp + 1.0)?;
    let sign = if (n + n_prime).is_multiple_of(2) { 1.0 } else { -1.0 };
    let sum: f64 = (0..=n.min(n_prime))
        .map(|k| {
            pochhammer(gamma_exp + 1.0, k) / factorial::<f64>(k)
                * binomial_general(gamma_exp - alpha, n - k)
                * binomial_general(gamma_exp - beta, n_prime - k)
        })
        .sum();
    Ok(sign * base * sum)
}

/// `int_0^inf x^{alpha+1} e^{-x} [L_n^{(alpha)}]^2 dx = (alpha+2n+1) Gamma(alpha+n+1)/n!`.
pub fn laguerre_square_moment(n: u32, alpha: f64) -> Result<f64> {
    Ok((alpha + 2.0 * n as f64 + 1.0) * gamma(alpha + 1.0)? * pochhammer(alpha + 1.0, n) / factorial::<f64>(n))
}

/// `int_0^inf x^{alpha+1} e^{-x} L_n^{(alpha)} L_{n'}^{(alpha)} dx`, the
/// tridiagonal three-delta form.
pub fn laguerre_x_moment(n: u32, n_prime: u32, alpha: f64) -> Result<f64> {
    let g = |m: u32| -> Result<f64> { Ok(gamma(alpha + 1.0)? * pochhammer(alpha + 1.0, m)) };
    let nf = factorial::<f64>(n);
    if n_prime == n + 1 {
        Ok(-g(n + 1)? / nf)
    } else if n_prime == n {
        laguerre_square_moment(n, alpha)
    } else if n >= 1 && n_prime == n - 1 {
        Ok(-g(n)? / factorial::<f64>(n - 1))
    } else {
        Ok(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Explicit coefficient sum `sum_i (-1)^i C(n+a, n-i) x^i / i!` in
    /// double-double arithmetic.
    fn laguerre_series(n: u32, a: f64, x: f64) -> f64 {
        use crate::real::DoubleDouble as D;
        let (a, x) = (D::from_f64(a), D::from_f64(x));
        let binom = |y: D, m: u32| {
            (0..m).fold(D::one(), |acc, i| acc * (y - D::from_i64(i as i64)) / D::from_i64(i as i64 + 1))
        };
        let total: D = (0..=n)
            .map(|i| {
                let term = binom(D::from_i64(n as i64) + a, n - i) * x.powi(i) / factorial::<D>(i);
                if i % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum();
        total.to_f64()
    }

    #[test]
    fn log_gamma_trivial_points() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-15);
        assert!(log_gamma(2.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn log_gamma_against_multiprecision() {
        // mpmath.loggamma at 50 digits
        let cases = [
            (10.5, 13.940_625_219_403_763),
            (0.5, 0.572_364_942_924_700_1),
            (3.7, 1.428_072_326_665_387_9),
            (150.25, 601.261_504_032_499_7),
        ];
        for (x, want) in cases {
            let got = log_gamma(x).unwrap();
            assert!(((got - want) / want).abs() < 1e-13, "x={x} got={got} want={want}");
        }
    }

    #[test]
    fn log_gamma_rejects_nonpositive() {
        assert!(matches!(log_gamma(0.0), Err(Error::Domain(_))));
        assert!(matches!(log_gamma(-2.5), Err(Error::Domain(_))));
    }

    #[test]
    fn laguerre_conventions() {
        assert_eq!(laguerre(0, 0.3, 5.0).unwrap(), 1.0);
        assert_eq!(laguerre(-1, 0.3, 5.0).unwrap(), 0.0);
        assert!(matches!(laguerre(2, -1.0, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn laguerre_against_exact_rational_value() {
        // L_3^{(0.82)}(1.7) = -222721/187500 in exact rational arithmetic
        let got = laguerre(3, 0.82, 1.7).unwrap();
        let want = -222_721.0 / 187_500.0;
        assert!((got - want).abs() < 1e-14, "{got}");
    }

    #[test]
    fn recurrence_matches_series() {
        for n in 0..=12u32 {
            for &a in &[0.0, 0.5, 1.9, 3.3] {
                for &x in &[0.1, 1.0, 7.5, 20.0, 50.0] {
                    let r = laguerre(n as i64, a, x).unwrap();
                    let s = laguerre_series(n, a, x);
                    let scale = s.abs().max(1.0);
                    assert!((r - s).abs() / scale < 1e-11, "n={n} a={a} x={x}: {r} vs {s}");
                }
            }
        }
    }

    #[test]
    fn one_point_rule() {
        let r = gauss_generalized_laguerre(1, 0.0).unwrap();
        assert!((r.nodes[0] - 1.0).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rule_integrates_cubic() {
        let a = 0.913_4;
        let r = gauss_generalized_laguerre(20, a).unwrap();
        let got = r.integrate(|x| x * x * x);
        let want = gamma(a + 4.0).unwrap();
        assert!(((got - want) / want).abs() < 1e-12);
    }

    #[test]
    fn identity_trivial_and_diagonal() {
        assert!((laguerre_integral_identity(0, 0, 0.3, 0.7, 0.0).unwrap() - 1.0).abs() < 1e-15);
        for n in 0..6 {
            let a = 0.37;
            let lhs = laguerre_integral_identity(n, n, a, a, a + 1.0).unwrap();
            let rhs = laguerre_square_moment(n, a).unwrap();
            assert!(((lhs - rhs) / rhs).abs() < 1e-13);
        }
    }

    #[test]
    fn identity_against_quadrature() {
        let (n, np, a, b, g) = (2u32, 3u32, 0.5, 0.5, 1.5);
        let rule = gauss_generalized_laguerre(40, g).unwrap();
        let quad = rule.integrate(|x| laguerre(n as i64, a, x).unwrap() * laguerre(np as i64, b, x).unwrap());
        let closed = laguerre_integral_identity(n, np, a, b, g).unwrap();
        assert!(((quad - closed) / closed).abs() < 1e-12, "{quad} vs {closed}");
    }

    #[test]
    fn double_double_rule_has_unit_mass() {
        use crate::real::DoubleDouble;
        let a = DoubleDouble::from_f64(0.999_946_7);
        let rule = normalized_gauss_laguerre(40, a).unwrap();
        let total: DoubleDouble = rule.weights.iter().copied().sum();
        assert!((total - DoubleDouble::one()).abs().to_f64() < 1e-28);
        // first moment of the normalized weight is a + 1
        let m1: DoubleDouble = rule.nodes.iter().zip(&rule.weights).map(|(&x, &w)| x * w).sum();
        assert!((m1 - (a + DoubleDouble::one())).abs().to_f64() < 1e-27);
    }
}
