//! Minimisation of `‖ρ - δ‖₁` over diagonal states `δ`.
//!
//! The search space is the probability 4-simplex. Pairwise moves
//! `p + t(e_i - e_j)` stall where an eigenvalue of `ρ - δ` crosses zero, so
//! the descent runs on the smoothed objective `Σ √(λ² + μ²)` with `μ`
//! shrinking tenfold per stage. Each stage takes projected Newton steps with
//! the exact spectral Hessian, falling back to pairwise golden-section sweeps
//! when Newton makes no progress.
//!
//! Termination is certified by duality. For any Hermitian `W` with
//! `‖W‖ ≤ 1` and any feasible `δ`,
//! `‖ρ - δ‖₁ ≥ Re tr(Wρ) - max_k W_kk`. The (smoothed) sign of `ρ - δ` at the
//! current iterate supplies `W`, and the search stops once the best value is
//! within `tol` of the best bound.

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eigen, hermitian_eigenvalues, ComplexMatrix, C64};

/// Total Newton steps plus pairwise sweeps allowed across all starts.
const MAX_ITERATIONS: usize = 20_000;
const FIRST_SMOOTHING: f64 = 0.1;
/// Below this the smoothing schedule gives up.
const MIN_SMOOTHING: f64 = 1e-14;

/// Result of minimising `‖ρ - δ‖₁` over diagonal states `δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceDistanceMinimum {
    pub value: f64,
    /// Diagonal of the minimising incoherent state.
    pub delta: [f64; 4],
    /// Certified bound on `value - optimum`.
    pub gap: f64,
    /// Newton steps plus pairwise sweeps, summed over starts.
    pub iterations: usize,
}

/// Searches from eight spread starts: the four vertices, the centre,
/// `diag ρ`, and two edge midpoints. Values and dual bounds are pooled across
/// starts, so a start ends as soon as the pooled gap is within `tol`.
///
/// `rho` must already be a validated 4×4 density matrix.
pub(crate) fn minimize(rho: &ComplexMatrix, tol: f64) -> Result<TraceDistanceMinimum> {
    let diag = {
        let mut d = [0.0; 4];
        for (dk, x) in d.iter_mut().zip(rho.diagonal_real()) {
            *dk = x.max(0.0);
        }
        let total: f64 = d.iter().sum();
        d.map(|x| x / total)
    };
    let starts: [[f64; 4]; 8] = [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.25; 4],
        diag,
        [0.5, 0.0, 0.0, 0.5],
        [0.0, 0.5, 0.5, 0.0],
    ];

    let mut search = Search {
        rho,
        tol,
        line_tol: (tol * 1e-3).max(1e-13),
        best_value: f64::INFINITY,
        best_delta: diag,
        bound: 0.0,
        iterations: 0,
    };
    for start in starts {
        search.run(start)?;
    }
    Ok(TraceDistanceMinimum {
        value: search.best_value,
        delta: search.best_delta,
        gap: (search.best_value - search.bound).max(0.0),
        iterations: search.iterations,
    })
}

struct Search<'a> {
    rho: &'a ComplexMatrix,
    tol: f64,
    line_tol: f64,
    best_value: f64,
    best_delta: [f64; 4],
    bound: f64,
    iterations: usize,
}

/// Spectral data of `ρ - δ` at one iterate.
struct Local {
    smoothed: f64,
    /// Diagonal of `W`, the smoothed sign of `ρ - δ`; the gradient is `-w`.
    w: [f64; 4],
    hessian: [[f64; 4]; 4],
}

impl Search<'_> {
    fn certified(&self) -> bool {
        self.best_value - self.bound <= self.tol
    }

    fn tick(&mut self) -> Result<()> {
        self.iterations += 1;
        if self.iterations > MAX_ITERATIONS {
            return Err(Error::NoConvergence {
                iterations: self.iterations,
                best: self.best_value,
            });
        }
        Ok(())
    }

    fn run(&mut self, start: [f64; 4]) -> Result<()> {
        let mut p = start;
        let mut mu = FIRST_SMOOTHING;
        loop {
            self.stage(&mut p, mu)?;
            if self.certified() {
                return Ok(());
            }
            mu *= 0.1;
            if mu < MIN_SMOOTHING {
                return Err(Error::NoConvergence {
                    iterations: self.iterations,
                    best: self.best_value,
                });
            }
        }
    }

    /// Descends the `μ`-smoothed objective until its KKT residual drops
    /// below `tol / 4`, the pooled gap is certified, or progress stops.
    ///
    /// Near the minimum a Newton step lowers the objective by less than its
    /// rounding error while still shrinking the residual. Such steps are
    /// taken on the strength of the quadratic model, at most a few in a row
    /// without the residual improving.
    fn stage(&mut self, p: &mut [f64; 4], mu: f64) -> Result<()> {
        const MAX_FLAT_STEPS: usize = 4;
        let mut flat_steps = 0;
        let mut best_residual = f64::INFINITY;
        loop {
            let local = self.inspect(p, mu)?;
            if self.certified() {
                return Ok(());
            }
            let w_max = local.w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let w_mean: f64 = p.iter().zip(&local.w).map(|(pk, wk)| pk * wk).sum();
            let residual = w_max - w_mean;
            if residual <= self.tol / 4.0 {
                return Ok(());
            }
            if residual < 0.5 * best_residual {
                flat_steps = 0;
                best_residual = residual;
            }

            self.tick()?;
            let noise = 4.0 * f64::EPSILON * local.smoothed;
            let objective = |x: &[f64; 4]| smoothed_value(self.rho, x, mu);
            match newton_step(p, &local, self.line_tol, noise, &objective)? {
                Step::Descent(next, value) if value < local.smoothed - noise => {
                    *p = next;
                    continue;
                }
                Step::Flat(next) if flat_steps < MAX_FLAT_STEPS => {
                    flat_steps += 1;
                    *p = next;
                    continue;
                }
                _ => {}
            }
            let value = pairwise_sweep(p, local.smoothed, self.line_tol, &objective)?;
            if !(value < local.smoothed - noise) {
                return Ok(());
            }
        }
    }

    /// Evaluates the local model at `p` and folds its exact value and dual
    /// bounds into the pooled state.
    fn inspect(&mut self, p: &[f64; 4], mu: f64) -> Result<Local> {
        let eig = hermitian_eigen(&shifted(self.rho, p))?;
        let mut lambda = [0.0; 4];
        lambda.copy_from_slice(&eig.spectrum.eigenvalues);
        let v = &eig.vectors;

        let exact: f64 = lambda.iter().map(|x| x.abs()).sum();
        if exact < self.best_value {
            self.best_value = exact;
            self.best_delta = *p;
        }

        let smooth_sign = lambda.map(|x| x / x.hypot(mu));
        let sharp_sign = lambda.map(f64::signum);
        let mut expectation = [0.0; 4];
        for (a, e) in expectation.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..4 {
                for j in 0..4 {
                    acc += v[(i, a)].conj() * self.rho[(i, j)] * v[(j, a)];
                }
            }
            *e = acc.re;
        }
        let w_diag = |sign: &[f64; 4]| {
            let mut w = [0.0; 4];
            for (k, wk) in w.iter_mut().enumerate() {
                *wk = (0..4).map(|a| sign[a] * v[(k, a)].norm_sqr()).sum();
            }
            w
        };
        let w = w_diag(&smooth_sign);
        for (sign, wk) in [(smooth_sign, w), (sharp_sign, w_diag(&sharp_sign))] {
            let w_max = wk.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let trace: f64 = (0..4).map(|a| sign[a] * expectation[a]).sum();
            self.bound = self.bound.max(trace - w_max);
        }

        // Daleckii-Krein: the second derivative of tr f(X) along E is
        // Σ_ab f'[λ_a, λ_b] |(V†EV)_ab|², with f' = λ/√(λ²+μ²).
        let mut divided = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                let gap = lambda[a] - lambda[b];
                divided[a][b] = if gap.abs() > 1e-6 * mu {
                    (smooth_sign[a] - smooth_sign[b]) / gap
                } else {
                    let h = (0.5 * (lambda[a] + lambda[b])).hypot(mu);
                    mu * mu / (h * h * h)
                };
            }
        }
        let mut hessian = [[0.0; 4]; 4];
        for k in 0..4 {
            for l in k..4 {
                let mut acc = 0.0;
                for a in 0..4 {
                    for b in 0..4 {
                        let z = v[(k, a)].conj() * v[(k, b)] * v[(l, a)] * v[(l, b)].conj();
                        acc += divided[a][b] * z.re;
                    }
                }
                hessian[k][l] = acc;
                hessian[l][k] = acc;
            }
        }

        Ok(Local {
            smoothed: lambda.iter().map(|x| x.hypot(mu)).sum(),
            w,
            hessian,
        })
    }
}

fn shifted(rho: &ComplexMatrix, p: &[f64; 4]) -> ComplexMatrix {
    let mut m = *rho;
    for (i, &pi) in p.iter().enumerate() {
        m[(i, i)] -= C64::new(pi, 0.0);
    }
    m
}

fn smoothed_value(rho: &ComplexMatrix, p: &[f64; 4], mu: f64) -> Result<f64> {
    let ev = hermitian_eigenvalues(&shifted(rho, p))?.eigenvalues;
    Ok(ev.iter().map(|x| x.hypot(mu)).sum())
}

enum Step {
    /// Line-searched step with its objective value.
    Descent([f64; 4], f64),
    /// Full step whose predicted decrease is below rounding noise.
    Flat([f64; 4]),
    None,
}

/// Newton step on the face of the simplex that can still move, followed by
/// a line search truncated at the boundary.
fn newton_step<F>(
    p: &[f64; 4],
    local: &Local,
    line_tol: f64,
    noise: f64,
    objective: &F,
) -> Result<Step>
where
    F: Fn(&[f64; 4]) -> Result<f64>,
{
    // Mass may flow into an empty coordinate only if its W entry beats the
    // weakest occupied one.
    let w_floor = (0..4)
        .filter(|&k| p[k] > 0.0)
        .map(|k| local.w[k])
        .fold(f64::INFINITY, f64::min);
    let free: Vec<usize> = (0..4)
        .filter(|&k| p[k] > 0.0 || local.w[k] > w_floor)
        .collect();
    if free.len() < 2 {
        return Ok(Step::None);
    }

    // KKT system [H 1; 1ᵀ 0] [d; ν] = [w; 0], with a ridge for flat directions.
    let n = free.len();
    let scale = free
        .iter()
        .map(|&k| local.hessian[k][k].abs())
        .fold(0.0, f64::max);
    let ridge = 1e-12 * scale.max(1.0);
    let mut a = [[0.0; 6]; 5];
    for (r, &k) in free.iter().enumerate() {
        for (c, &l) in free.iter().enumerate() {
            a[r][c] = local.hessian[k][l];
        }
        a[r][r] += ridge;
        a[r][n] = 1.0;
        a[n][r] = 1.0;
        a[r][n + 1] = local.w[k];
    }
    let Some(solution) = solve(&mut a, n + 1) else {
        return Ok(Step::None);
    };
    let mut d = [0.0; 4];
    for (r, &k) in free.iter().enumerate() {
        d[k] = solution[r];
    }
    let d_sum: f64 = d.iter().sum();
    let correction = d_sum / n as f64;
    for &k in &free {
        d[k] -= correction;
    }
    if d.iter().all(|x| x.abs() < 1e-300) {
        return Ok(Step::None);
    }

    let t_max = (0..4)
        .filter(|&k| d[k] < 0.0)
        .map(|k| p[k] / -d[k])
        .fold(f64::INFINITY, f64::min);
    if !(t_max > 0.0) {
        return Ok(Step::None);
    }
    let at = |t: f64| {
        let mut x = *p;
        for k in 0..4 {
            x[k] = (x[k] + t * d[k]).max(0.0);
        }
        let total: f64 = x.iter().sum();
        x.map(|xk| xk / total)
    };

    let slope: f64 = -(0..4).map(|k| local.w[k] * d[k]).sum::<f64>();
    let t0 = t_max.min(1.0);
    let x0 = at(t0);
    if -slope * t0 <= 16.0 * noise {
        return Ok(Step::Flat(x0));
    }
    let f0 = objective(&x0)?;
    if f0 <= local.smoothed + 0.25 * t0 * slope {
        return Ok(Step::Descent(x0, f0));
    }
    let (t, v) = golden_section(0.0, t0, local.smoothed, line_tol * t0, |t| {
        objective(&at(t))
    })?;
    Ok(Step::Descent(at(t), v))
}

/// Gaussian elimination with partial pivoting on an `n × (n+1)` augmented
/// system stored in the top-left of `a`.
fn solve(a: &mut [[f64; 6]; 5], n: usize) -> Option<[f64; 5]> {
    for col in 0..n {
        let pivot = (col..n).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        let (top, rest) = a.split_at_mut(col + 1);
        let p = &top[col];
        for row in &mut rest[..n - col - 1] {
            let factor = row[col] / p[col];
            for (x, y) in row[col..=n].iter_mut().zip(&p[col..=n]) {
                *x -= factor * y;
            }
        }
    }
    let mut x = [0.0; 5];
    for r in (0..n).rev() {
        let tail: f64 = ((r + 1)..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (a[r][n] - tail) / a[r][r];
        if !x[r].is_finite() {
            return None;
        }
    }
    Some(x)
}

/// One sweep of exact line searches over the six coordinate pairs.
fn pairwise_sweep<F>(p: &mut [f64; 4], mut value: f64, line_tol: f64, objective: &F) -> Result<f64>
where
    F: Fn(&[f64; 4]) -> Result<f64>,
{
    for i in 0..4 {
        for j in (i + 1)..4 {
            let (lo, hi) = (-p[i], p[j]);
            if hi - lo <= 0.0 {
                continue;
            }
            let base = *p;
            let at = |t: f64| {
                let mut x = base;
                x[i] = (x[i] + t).max(0.0);
                x[j] = (x[j] - t).max(0.0);
                x
            };
            let (t, v) = golden_section(lo, hi, value, line_tol, |t| objective(&at(t)))?;
            if v < value {
                *p = at(t);
                value = v;
            }
        }
    }
    Ok(value)
}

/// Minimises a convex `f` on `[lo, hi]`; compares against `t = 0` with value
/// `current`, and against both endpoints.
fn golden_section<F>(lo: f64, hi: f64, current: f64, tol: f64, f: F) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut l, mut h) = (lo, hi);
    let mut a = h - INV_PHI * (h - l);
    let mut b = l + INV_PHI * (h - l);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    while h - l > tol {
        if fa <= fb {
            h = b;
            b = a;
            fb = fa;
            a = h - INV_PHI * (h - l);
            fa = f(a)?;
        } else {
            l = a;
            a = b;
            fa = fb;
            b = l + INV_PHI * (h - l);
            fb = f(b)?;
        }
    }
    let mut best = (0.0, current);
    for (t, v) in [(a, fa), (b, fb), (lo, f(lo)?), (hi, f(hi)?)] {
        if v < best.1 {
            best = (t, v);
        }
    }
    Ok(best)
}
