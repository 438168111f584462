//! Radial functions of the form
//! `norm * Gamma(2 gamma)^{-1/2} * x^gamma e^{-x/2} * sum_j c_j L_j^{(2 gamma)}(x)`
//! with `x = 2 k r`, and Gauss quadrature of their products.
//!
//! The factor `Gamma(2 gamma)^{-1/2}` is kept out of `norm` so that norms
//! only involve Pochhammer symbols `(2 gamma)_n`. It cancels in every product
//! integral and enters only pointwise evaluation.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::specfun::{default_quadrature_order, laguerre_table, log_gamma, normalized_gauss_laguerre};

#[derive(Clone, Debug, PartialEq)]
pub struct LaguerreSeries<T> {
    pub norm: T,
    pub gamma: T,
    pub k: T,
    /// Dense coefficients of `L_0, L_1, ...` with upper index `2 gamma`.
    pub coeffs: Vec<T>,
}

impl<T: Real> LaguerreSeries<T> {
    pub fn new(norm: T, gamma: T, k: T, coeffs: Vec<T>) -> Self {
        Self {
            norm,
            gamma,
            k,
            coeffs,
        }
    }

    pub fn upper_index(&self) -> T {
        self.gamma + self.gamma
    }

    /// Highest degree with a nonzero coefficient (0 for the zero function).
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|&c| c != T::zero())
            .unwrap_or(0)
    }

    /// Nonzero `(degree, coefficient)` pairs.
    pub fn terms(&self) -> Vec<(usize, T)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != T::zero())
            .map(|(j, &c)| (j, c))
            .collect()
    }

    /// Copy with the norm folded into the coefficients.
    pub fn absorbed(&self) -> Self {
        Self {
            norm: T::one(),
            gamma: self.gamma,
            k: self.k,
            coeffs: self.coeffs.iter().map(|&c| c * self.norm).collect(),
        }
    }

    pub fn scaled(&self, s: T) -> Self {
        Self {
            norm: self.norm * s,
            ..self.clone()
        }
    }

    /// Sum of two series sharing `gamma` and `k`.
    pub fn add(&self, other: &Self) -> Self {
        debug_assert!(same_measure(self, other));
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |s: &Self, j: usize| s.coeffs.get(j).copied().unwrap_or_else(T::zero) * s.norm;
        Self {
            norm: T::one(),
            gamma: self.gamma,
            k: self.k,
            coeffs: (0..len).map(|j| get(self, j) + get(other, j)).collect(),
        }
    }

    /// The series representing `r d/dr f`.
    pub fn r_derivative(&self) -> Self {
        let a = self.upper_index();
        let half = T::from_f64(0.5);
        let len = self.coeffs.len() + 1;
        let mut out = vec![T::zero(); len];
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c == T::zero() {
                continue;
            }
            let jf = T::from_i64(j as i64);
            // gamma * L_j + x L_j'  with  x L_j' = j L_j - (j + a) L_{j-1}
            out[j] += (self.gamma + jf) * c;
            if j >= 1 {
                out[j - 1] -= (jf + a) * c;
            }
        }
        // -(x/2) P
        for (j, v) in mul_x(&self.coeffs, a).into_iter().enumerate() {
            out[j] -= half * v;
        }
        trim(&mut out);
        Self {
            norm: self.norm,
            gamma: self.gamma,
            k: self.k,
            coeffs: out,
        }
    }

    /// `sum_j c_j L_j^{(2 gamma)}(x)`.
    pub fn poly(&self, x: T) -> T {
        let table = laguerre_table(self.coeffs.len().saturating_sub(1), self.upper_index(), x);
        self.coeffs.iter().zip(&table).map(|(&c, &l)| c * l).sum()
    }
}

impl LaguerreSeries<f64> {
    /// `f(r)`.
    pub fn value(&self, r: f64) -> f64 {
        let x = 2.0 * self.k * r;
        if x <= 0.0 {
            return 0.0;
        }
        let lg = log_gamma(self.upper_index()).expect("2 gamma > 0");
        let envelope = (self.gamma * x.ln() - 0.5 * x - 0.5 * lg).exp();
        self.norm * envelope * self.poly(x)
    }

    pub fn to_real<T: Real>(&self) -> LaguerreSeries<T> {
        LaguerreSeries {
            norm: T::from_f64(self.norm),
            gamma: T::from_f64(self.gamma),
            k: T::from_f64(self.k),
            coeffs: self.coeffs.iter().map(|&c| T::from_f64(c)).collect(),
        }
    }
}

impl<T: Real> LaguerreSeries<T> {
    pub fn to_f64(&self) -> LaguerreSeries<f64> {
        LaguerreSeries {
            norm: self.norm.to_f64(),
            gamma: self.gamma.to_f64(),
            k: self.k.to_f64(),
            coeffs: self.coeffs.iter().map(|c| c.to_f64()).collect(),
        }
    }
}

/// Laguerre coefficients of `x * sum_j c_j L_j^{(a)}(x)` via
/// `x L_j = -(j+1) L_{j+1} + (2j+a+1) L_j - (j+a) L_{j-1}`.
pub fn mul_x<T: Real>(coeffs: &[T], a: T) -> Vec<T> {
    let mut out = vec![T::zero(); coeffs.len() + 1];
    for (j, &c) in coeffs.iter().enumerate() {
        if c == T::zero() {
            continue;
        }
        let jf = T::from_i64(j as i64);
        out[j + 1] -= (jf + T::one()) * c;
        out[j] += (T::from_i64(2 * j as i64 + 1) + a) * c;
        if j >= 1 {
            out[j - 1] -= (jf + a) * c;
        }
    }
    out
}

fn trim<T: Real>(v: &mut Vec<T>) {
    while v.len() > 1 && *v.last().unwrap() == T::zero() {
        v.pop();
    }
}

fn same_measure<T: Real>(a: &LaguerreSeries<T>, b: &LaguerreSeries<T>) -> bool {
    let tol = T::epsilon() * T::from_f64(64.0);
    crate::real::rel_diff(a.gamma, b.gamma) <= tol && crate::real::rel_diff(a.k, b.k) <= tol
}

/// Quadrature of `int_0^inf r^p f(r) g(r) dr` for series sharing `gamma`
/// and `k`, with `p` in `-1..=2`.
#[derive(Clone, Debug)]
pub struct RadialIntegrator<T> {
    gamma: T,
    k: T,
    nodes: Vec<T>,
    weights: Vec<T>,
    /// `tables[i][j] = L_j^{(2 gamma)}(x_i)`.
    tables: Vec<Vec<T>>,
}

impl<T: Real> RadialIntegrator<T> {
    /// Integrator exact for products of series up to `max_degree` each.
    pub fn new(gamma: T, k: T, max_degree: usize) -> Result<Self> {
        let order = default_quadrature_order(max_degree + 1, max_degree + 1);
        Self::with_order(gamma, k, max_degree, order)
    }

    pub fn with_order(gamma: T, k: T, max_degree: usize, order: usize) -> Result<Self> {
        let a = gamma + gamma;
        // weight x^{2 gamma - 1} e^{-x}; the extra x^{p+1} lives in the integrand
        let rule = normalized_gauss_laguerre(order, a - T::one())?;
        let tables = rule
            .nodes
            .iter()
            .map(|&x| laguerre_table(max_degree, a, x))
            .collect();
        Ok(Self {
            gamma,
            k,
            nodes: rule.nodes,
            weights: rule.weights,
            tables,
        })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn max_degree(&self) -> usize {
        self.tables.first().map_or(0, |t| t.len() - 1)
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    fn check(&self, f: &LaguerreSeries<T>) -> Result<()> {
        let tol = T::epsilon() * T::from_f64(64.0);
        if crate::real::rel_diff(f.gamma, self.gamma) > tol || crate::real::rel_diff(f.k, self.k) > tol {
            return Err(Error::Precondition(
                "radial function does not share the integrator's gamma and k".into(),
            ));
        }
        if f.coeffs.len() > self.max_degree() + 1 {
            return Err(Error::Precondition(format!(
                "series degree {} exceeds integrator capacity {}",
                f.coeffs.len() - 1,
                self.max_degree()
            )));
        }
        Ok(())
    }

    /// `P_f(x_i)` at every node (without norm).
    pub fn poly_at_nodes(&self, f: &LaguerreSeries<T>) -> Vec<T> {
        self.tables
            .iter()
            .map(|row| f.coeffs.iter().zip(row).map(|(&c, &l)| c * l).sum())
            .collect()
    }

    /// `int_0^inf r^p f g dr`.
    pub fn integrate(&self, f: &LaguerreSeries<T>, g: &LaguerreSeries<T>, p: i32) -> Result<T> {
        self.check(f)?;
        self.check(g)?;
        if !(-1..=2).contains(&p) {
            return Err(Error::Precondition(format!("power r^{p} outside -1..=2")));
        }
        let pf = self.poly_at_nodes(f);
        let pg = self.poly_at_nodes(g);
        Ok(self.integrate_values(&pf, &pg, p) * f.norm * g.norm)
    }

    /// Same as [`Self::integrate`] on precomputed node values.
    pub fn integrate_values(&self, pf: &[T], pg: &[T], p: i32) -> T {
        let power = (p + 1) as u32;
        let s: T = self
            .nodes
            .iter()
            .zip(&self.weights)
            .zip(pf.iter().zip(pg))
            .map(|((&x, &w), (&a, &b))| w * x.powi(power) * a * b)
            .sum();
        s / (self.k + self.k).powi(power)
    }
}

/// `int_0^inf f g dr` for series sharing `gamma` but with different `k`.
pub fn cross_overlap(f: &LaguerreSeries<f64>, g: &LaguerreSeries<f64>) -> Result<f64> {
    let tol = 64.0 * f64::EPSILON;
    if crate::real::rel_diff(f.gamma, g.gamma) > tol {
        return Err(Error::Precondition("cross overlap needs a common gamma".into()));
    }
    let a = f.upper_index();
    let s = f.k + g.k;
    let order = default_quadrature_order(f.coeffs.len(), g.coeffs.len());
    let rule = normalized_gauss_laguerre(order, a)?;
    let (uf, ug) = ((f.k + f.k) / s, (g.k + g.k) / s);
    let sum: f64 = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&y, &w)| w * f.poly(uf * y) * g.poly(ug * y))
        .sum();
    let prefactor = (4.0 * f.k * g.k).powf(f.gamma) / s.powf(a + 1.0);
    Ok(f.norm * g.norm * prefactor * a * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::{factorial, pochhammer, DoubleDouble};

    fn unit(gamma: f64, k: f64, j: usize) -> LaguerreSeries<f64> {
        let mut c = vec![0.0; j + 1];
        c[j] = 1.0;
        LaguerreSeries::new(1.0, gamma, k, c)
    }

    #[test]
    fn orthogonality_in_reduced_units() {
        // int x^{2g} e^{-x} L_i L_j dx / Gamma(2g) = (2g+1)_j / j! delta_ij, times (2k)^{-1}
        let (g, k) = (0.87, 1.3);
        let integ = RadialIntegrator::new(g, k, 8).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let v = integ.integrate(&unit(g, k, i), &unit(g, k, j), 0).unwrap();
                let want = if i == j {
                    pochhammer(2.0 * g, j as u32 + 1) / factorial::<f64>(j as u32) / (2.0 * k)
                } else {
                    0.0
                };
                assert!((v - want).abs() < 1e-13 * want.abs().max(1.0), "{i} {j}: {v} {want}");
            }
        }
    }

    #[test]
    fn mul_x_matches_pointwise() {
        let a = 1.74;
        let c = vec![0.3, -1.2, 0.5, 2.0];
        let xc = mul_x(&c, a);
        let s = LaguerreSeries::new(1.0, a / 2.0, 1.0, c);
        let t = LaguerreSeries::new(1.0, a / 2.0, 1.0, xc);
        for &x in &[0.2, 1.1, 4.0, 9.5] {
            assert!((x * s.poly(x) - t.poly(x)).abs() < 1e-12 * (1.0 + t.poly(x).abs()));
        }
    }

    #[test]
    fn r_derivative_matches_finite_difference() {
        let f = LaguerreSeries::new(0.7, 0.93, 0.8, vec![1.0, -0.4, 0.25]);
        let df = f.r_derivative();
        for &r in &[0.1, 0.7, 2.0, 5.0] {
            let h = 1e-5 * r;
            let fd = r * (f.value(r + h) - f.value(r - h)) / (2.0 * h);
            assert!((fd - df.value(r)).abs() < 1e-8 * (1.0 + fd.abs()), "r={r}");
        }
    }

    #[test]
    fn double_double_integrator_agrees() {
        let g = 0.499_99;
        let f = LaguerreSeries::new(1.1, g, 2.0, vec![0.5, 1.0, -0.3]);
        let integ = RadialIntegrator::new(g, 2.0, 4).unwrap();
        let want = integ.integrate(&f, &f.r_derivative(), 0).unwrap();
        let fd = f.to_real::<DoubleDouble>();
        let integ_dd = RadialIntegrator::new(fd.gamma, fd.k, 4).unwrap();
        let got = integ_dd.integrate(&fd, &fd.r_derivative(), 0).unwrap();
        // int f r f' dr = -1/2 int f^2 dr
        let half_norm = integ.integrate(&f, &f, 0).unwrap() * -0.5;
        assert!((want - half_norm).abs() < 1e-13 * want.abs());
        assert!((got.to_f64() - want).abs() < 1e-13 * want.abs(), "{got} vs {want}");
    }

    #[test]
    fn cross_overlap_reduces_to_integrator() {
        let f = LaguerreSeries::new(0.9, 0.93, 1.2, vec![0.5, -1.0, 0.3]);
        let g = LaguerreSeries::new(1.4, 0.93, 1.2, vec![0.2, 0.7]);
        let integ = RadialIntegrator::new(0.93, 1.2, 4).unwrap();
        let want = integ.integrate(&f, &g, 0).unwrap();
        assert!((cross_overlap(&f, &g).unwrap() - want).abs() < 1e-13 * want.abs());
    }

    #[test]
    fn mismatched_measure_is_rejected() {
        let integ = RadialIntegrator::new(0.5, 1.0, 3).unwrap();
        let f = unit(0.5, 1.0, 1);
        let g = unit(0.5, 2.0, 1);
        assert!(integ.integrate(&f, &g, 0).is_err());
    }
}
