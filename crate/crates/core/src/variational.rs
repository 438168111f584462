//! Finite-basis diagonalization of the radial Dirac-Coulomb Hamiltonian with
//! the magnetic term, used to cross-check the perturbation series.
//!
//! The basis consists of Sturmian pairs `(S_j, T_j)` at the unperturbed
//! energy of the target state, ordered `n_r' = 0, 1, -1, 2, -2, ...`.
//! Energies are measured from `mc^2` in Hartree.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coulomb::eps0_coefficient_real;
use crate::error::{Error, Result};
use crate::linalg::{generalized_symmetric_eigen, jacobi_eigen, EigenPair, JacobiOptions, Matrix};
use crate::perturb::{e1_coefficient_real, e2_coefficient_real};
use crate::qnum::{ChannelParams, PhysicsConfig, QuantumState};
use crate::radial::RadialIntegrator;
use crate::real::{DoubleDouble, Real};
use crate::sturmian::SturmianContext;

pub const DEFAULT_BASIS_SIZE: usize = 30;
pub const DEFAULT_B_GRID: [f64; 4] = [1e-4, 3e-4, 1e-3, 3e-3];
pub const MAX_CONDITION: f64 = 1e12;

/// `0, 1, -1, 2, -2, ...` truncated to `size` entries.
pub fn basis_indices(size: usize) -> Vec<i32> {
    let mut out = Vec::with_capacity(size);
    let mut k = 0i32;
    while out.len() < size {
        if k == 0 {
            out.push(0);
        } else {
            out.push(k);
            if out.len() < size {
                out.push(-k);
            }
        }
        k += 1;
    }
    out
}

#[derive(Clone, Debug)]
pub struct ChannelMatrixProblem<T> {
    pub state: QuantumState,
    pub basis_size: usize,
    pub indices: Vec<i32>,
    /// `H0 + b V`.
    pub hamiltonian: Matrix<T>,
    pub unperturbed: Matrix<T>,
    /// Magnetic term per unit `B/B0`.
    pub magnetic: Matrix<T>,
    pub overlap: Matrix<T>,
    pub b_over_b0: f64,
    /// Reference bound orbital `(P, Q)` in basis coordinates.
    pub bound_vector: Vec<T>,
    /// `E0 - mc^2` in Hartree.
    pub e0_hartree: T,
}

impl<T: Real> ChannelMatrixProblem<T> {
    pub fn with_field(&self, b_over_b0: f64) -> Result<Self> {
        if !(b_over_b0 >= 0.0) {
            return Err(Error::Domain(format!("B/B0 must be nonnegative, got {b_over_b0}")));
        }
        let mut out = self.clone();
        out.hamiltonian = self.unperturbed.add(&self.magnetic.scaled(T::from_f64(b_over_b0)));
        out.b_over_b0 = b_over_b0;
        Ok(out)
    }

    /// `lambda_max / lambda_min` of the overlap matrix.
    pub fn condition_estimate(&self) -> Result<f64> {
        let (values, _) = jacobi_eigen(&self.overlap, JacobiOptions::for_precision::<T>(self.basis_size))?;
        let lo = values[0].to_f64();
        let hi = values[values.len() - 1].to_f64();
        Ok(if lo > 0.0 { hi / lo } else { f64::INFINITY })
    }
}

/// Node values of `(S, T, r S', r T')` for one basis function, norms absorbed.
struct NodeValues<T> {
    s: Vec<T>,
    t: Vec<T>,
    ds: Vec<T>,
    dt: Vec<T>,
}

pub fn build_channel_matrices_real<T: Real>(
    state: &QuantumState,
    basis_size: usize,
    b_over_b0: f64,
    config: &PhysicsConfig,
) -> Result<ChannelMatrixProblem<T>> {
    if basis_size == 0 {
        return Err(Error::Domain("basis_size must be positive".into()));
    }
    if !(b_over_b0 >= 0.0) {
        return Err(Error::Domain(format!("B/B0 must be nonnegative, got {b_over_b0}")));
    }
    let p = ChannelParams::<T>::new(state.channel(), config)?;
    let ctx = SturmianContext::at_bound(&p);
    let indices = basis_indices(basis_size);
    let max_deg = indices.iter().map(|i| i.unsigned_abs() as usize).max().unwrap_or(0) + 1;
    let integ = RadialIntegrator::new(p.gamma, p.k_scale(), max_deg)?;
    let funcs = indices.iter().map(|&i| ctx.pair(i)).collect::<Result<Vec<_>>>()?;
    let nodes: Vec<NodeValues<T>> = funcs
        .iter()
        .map(|f| {
            let at = |s: &crate::radial::LaguerreSeries<T>| integ.poly_at_nodes(&s.absorbed());
            NodeValues {
                s: at(&f.s),
                t: at(&f.t),
                ds: at(&f.s.r_derivative()),
                dt: at(&f.t.r_derivative()),
            }
        })
        .collect();

    let c = p.c();
    let z = p.z;
    let kappa = p.kappa;
    let two_c2 = T::from_f64(2.0) * c * c;
    let half = T::from_f64(0.5);
    let mag_pref = -T::from_i64(i64::from(state.m_over_kappa())) * c * half;
    let n = basis_size;

    let rows: Vec<Vec<(T, T, T)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let a = &nodes[i];
            (i..n)
                .map(|j| {
                    let b = &nodes[j];
                    let ip = |f: &[T], g: &[T], pw: i32| integ.integrate_values(f, g, pw);
                    let ov = ip(&a.s, &b.s, 0) + ip(&a.t, &b.t, 0);
                    let pot = -z * (ip(&a.s, &b.s, -1) + ip(&a.t, &b.t, -1));
                    let lower = -two_c2 * ip(&a.t, &b.t, 0);
                    let kin = c
                        * (half * (ip(&a.s, &b.dt, -1) - ip(&a.ds, &b.t, -1) + ip(&a.dt, &b.s, -1) - ip(&a.t, &b.ds, -1))
                            - kappa * (ip(&a.s, &b.t, -1) + ip(&a.t, &b.s, -1)));
                    let mag = mag_pref * (ip(&a.s, &b.t, 1) + ip(&a.t, &b.s, 1));
                    (pot + lower + kin, mag, ov)
                })
                .collect()
        })
        .collect();

    let mut h0 = Matrix::zeros(n);
    let mut v = Matrix::zeros(n);
    let mut s = Matrix::zeros(n);
    for (i, row) in rows.into_iter().enumerate() {
        for (off, (hv, vv, sv)) in row.into_iter().enumerate() {
            let j = i + off;
            h0[(i, j)] = hv;
            h0[(j, i)] = hv;
            v[(i, j)] = vv;
            v[(j, i)] = vv;
            s[(i, j)] = sv;
            s[(j, i)] = sv;
        }
    }

    let mut bound_vector = vec![T::zero(); n];
    if let Some(pos) = indices.iter().position(|&i| i == p.n_r as i32) {
        bound_vector[pos] = p.z / p.big_n;
    }
    let e0_hartree = eps0_coefficient_real(&p) * p.z * p.z;
    let problem = ChannelMatrixProblem {
        state: *state,
        basis_size,
        indices,
        hamiltonian: h0.clone(),
        unperturbed: h0,
        magnetic: v,
        overlap: s,
        b_over_b0: 0.0,
        bound_vector,
        e0_hartree,
    };
    let cond = problem.condition_estimate()?;
    if cond > MAX_CONDITION {
        return Err(Error::IllConditioned { condition: cond });
    }
    problem.with_field(b_over_b0)
}

/// Matrices in double-double precision.
pub fn build_channel_matrices(
    state: &QuantumState,
    basis_size: usize,
    b_over_b0: f64,
    config: &PhysicsConfig,
) -> Result<ChannelMatrixProblem<DoubleDouble>> {
    build_channel_matrices_real(state, basis_size, b_over_b0, config)
}

pub fn solve_generalized_symmetric<T: Real>(problem: &ChannelMatrixProblem<T>) -> Result<Vec<EigenPair<T>>> {
    generalized_symmetric_eigen(
        &problem.hamiltonian,
        &problem.overlap,
        JacobiOptions::for_precision::<T>(problem.basis_size),
    )
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CrossCheckRow {
    pub b_over_b0: f64,
    /// Tracked eigenvalue, `E - mc^2` in Hartree.
    pub e_var: f64,
    /// `E0 + E1 + E2 - mc^2` in Hartree.
    pub e_pert: f64,
    /// `e_var - e_pert`, evaluated before rounding to `f64`.
    pub residual: f64,
    /// `|v^T S v0|` with the `B = 0` eigenvector.
    pub tracking_overlap: f64,
    /// Normalized overlap with the exact unperturbed orbital.
    pub bound_overlap: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub state: QuantumState,
    pub z: f64,
    pub basis_size: usize,
    /// `E_var(0) - E0` in Hartree.
    pub e0_error: f64,
    pub rows: Vec<CrossCheckRow>,
    /// Least-squares slope of `ln|R|` against `ln(B/B0)`.
    pub fitted_power: Option<f64>,
}

/// Least-squares slope of `ln|y|` against `ln x` over points with `x > 0`, `y != 0`.
pub fn fit_power(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(&x, &y)| x > 0.0 && y != 0.0)
        .map(|(&x, &y)| (x.ln(), y.abs().ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Some(sxy / sxx)
}

fn track<T: Real>(pairs: &[EigenPair<T>], overlap: &Matrix<T>, reference: &[T], b: f64) -> Result<usize> {
    let mut scored: Vec<(usize, f64)> = pairs
        .iter()
        .enumerate()
        .map(|(k, pr)| (k, overlap.bilinear(&pr.vector, reference).abs().to_f64()))
        .collect();
    scored.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("NaN overlap"));
    if scored.len() > 1 && scored[1].1 >= 0.99 * scored[0].1 {
        return Err(Error::AmbiguousTracking { b_over_b0: b, best: scored[0].1, second: scored[1].1 });
    }
    Ok(scored[0].0)
}

pub fn perturbation_cross_check_real<T: Real>(
    state: &QuantumState,
    config: &PhysicsConfig,
    b_grid: &[f64],
    basis_size: usize,
) -> Result<CrossCheckReport> {
    let base = build_channel_matrices_real::<T>(state, basis_size, 0.0, config)?;
    let p = ChannelParams::<T>::new(state.channel(), config)?;
    let e1 = e1_coefficient_real(&p, state.m_over_kappa());
    let e2 = e2_coefficient_real(&p);
    let z2 = p.z * p.z;

    let pairs0 = solve_generalized_symmetric(&base)?;
    let k0 = track(&pairs0, &base.overlap, &base.bound_vector, 0.0)?;
    let v0 = pairs0[k0].vector.clone();
    let e0_error = (pairs0[k0].value - base.e0_hartree).to_f64();
    let bound_norm = base.overlap.bilinear(&base.bound_vector, &base.bound_vector).sqrt();

    let rows = b_grid
        .par_iter()
        .map(|&b| {
            let prob = base.with_field(b)?;
            let pairs = solve_generalized_symmetric(&prob)?;
            let k = track(&pairs, &prob.overlap, &v0, b)?;
            let bt = T::from_f64(b);
            let pert = base.e0_hartree + e1 * bt + e2 * bt * bt / z2;
            let e_var = pairs[k].value;
            Ok(CrossCheckRow {
                b_over_b0: b,
                e_var: e_var.to_f64(),
                e_pert: pert.to_f64(),
                residual: (e_var - pert).to_f64(),
                tracking_overlap: prob.overlap.bilinear(&pairs[k].vector, &v0).abs().to_f64(),
                bound_overlap: (prob.overlap.bilinear(&pairs[k].vector, &base.bound_vector).abs() / bound_norm).to_f64(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let xs: Vec<f64> = rows.iter().map(|r| r.b_over_b0).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.residual).collect();
    Ok(CrossCheckReport {
        state: *state,
        z: config.z,
        basis_size,
        e0_error,
        fitted_power: fit_power(&xs, &ys),
        rows,
    })
}

/// Cross-check in double-double precision.
pub fn perturbation_cross_check(
    state: &QuantumState,
    config: &PhysicsConfig,
    b_grid: &[f64],
    basis_size: usize,
) -> Result<CrossCheckReport> {
    perturbation_cross_check_real::<DoubleDouble>(state, config, b_grid, basis_size)
}
