//! Quasi-Newton minimizer used by the likelihood fit.

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BfgsOptions {
    pub max_iter: usize,
    /// Stop when a step moves every coordinate by less than `xtol·(1 + ‖u‖∞)`.
    pub xtol: f64,
    /// Stop when `‖∇f‖∞ ≤ gtol·(1 + |f|)`.
    pub gtol: f64,
    /// Largest coordinate change accepted in one line search trial.
    pub max_step: f64,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        Self { max_iter: 500, xtol: 1e-8, gtol: 1e-8, max_step: 2.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BfgsResult<T> {
    pub x: Vec<T>,
    pub f: T,
    pub grad: Vec<T>,
    pub iterations: usize,
    pub converged: bool,
}

fn inf_norm<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(x, y)| *x * *y).sum()
}

fn identity<T: Scalar>(n: usize) -> Vec<Vec<T>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect()
}

/// Minimizes `f` from `x0`. `fg` returns the value and gradient, or `None`
/// where the objective is undefined; such trial points are backtracked from.
///
/// Returns `None` if the objective is undefined at `x0`.
pub fn minimize<T: Scalar>(
    mut fg: impl FnMut(&[T]) -> Option<(T, Vec<T>)>,
    x0: &[T],
    opts: &BfgsOptions,
) -> Option<BfgsResult<T>> {
    let n = x0.len();
    let mut x = x0.to_vec();
    let (mut f, mut g) = fg(&x)?;
    if !f.is_finite() || g.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let mut h = identity::<T>(n);
    let mut fresh = true;
    let mut converged = false;
    let mut iterations = 0;
    let c1 = T::lit(1e-4);
    let half = T::lit(0.5);
    let gtol = T::lit(opts.gtol);
    let xtol = T::lit(opts.xtol);
    let max_step = T::lit(opts.max_step);

    while iterations < opts.max_iter {
        if inf_norm(&g) <= gtol * (T::one() + f.abs()) {
            converged = true;
            break;
        }
        iterations += 1;

        let mut d: Vec<T> = h.iter().map(|row| -dot(row, &g)).collect();
        let mut slope = dot(&d, &g);
        if !(slope < T::zero()) {
            h = identity(n);
            fresh = true;
            d = g.iter().map(|v| -*v).collect();
            slope = dot(&d, &g);
        }

        let dn = inf_norm(&d);
        let mut t = if dn > max_step { max_step / dn } else { T::one() };
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<T> = x.iter().zip(&d).map(|(xi, di)| *xi + t * *di).collect();
            if let Some((ft, gt)) = fg(&trial) {
                if ft.is_finite() && gt.iter().all(|v| v.is_finite()) && ft <= f + c1 * t * slope {
                    accepted = Some((trial, ft, gt));
                    break;
                }
            }
            t = t * half;
        }

        let Some((xn, fnew, gn)) = accepted else {
            if fresh {
                break;
            }
            h = identity(n);
            fresh = true;
            continue;
        };

        let s: Vec<T> = xn.iter().zip(&x).map(|(a, b)| *a - *b).collect();
        let y: Vec<T> = gn.iter().zip(&g).map(|(a, b)| *a - *b).collect();
        let small_step = inf_norm(&s) <= xtol * (T::one() + inf_norm(&x));
        x = xn;
        f = fnew;
        g = gn;
        if small_step {
            converged = true;
            break;
        }

        let sy = dot(&s, &y);
        if sy > T::zero() {
            if fresh {
                // Scale the initial inverse Hessian to the observed curvature.
                let scale = sy / dot(&y, &y);
                for (i, row) in h.iter_mut().enumerate() {
                    for (j, v) in row.iter_mut().enumerate() {
                        *v = if i == j { scale } else { T::zero() };
                    }
                }
            }
            bfgs_update(&mut h, &s, &y, sy);
            fresh = false;
        }
    }
    if !converged && inf_norm(&g) <= gtol * (T::one() + f.abs()) {
        converged = true;
    }
    Some(BfgsResult { x, f, grad: g, iterations, converged })
}

/// `H ← (I - ρ s yᵀ) H (I - ρ y sᵀ) + ρ s sᵀ`, `ρ = 1/(yᵀs)`.
fn bfgs_update<T: Scalar>(h: &mut [Vec<T>], s: &[T], y: &[T], sy: T) {
    let n = s.len();
    let rho = T::one() / sy;
    let hy: Vec<T> = h.iter().map(|row| dot(row, y)).collect();
    let yhy = dot(y, &hy);
    for i in 0..n {
        for j in 0..n {
            h[i][j] = h[i][j] - rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
        }
    }
}
