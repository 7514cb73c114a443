//! Aberth–Ehrlich simultaneous root iteration.

use std::f64::consts::TAU;

use num_traits::Zero;

use super::CPoly;
use crate::{Error, Result, C64};

pub const MAX_SWEEPS: usize = 200;

/// All roots of a polynomial, one per unit of degree.
#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<C64>,
    /// `|p(root)|` for each root, same order.
    pub residuals: Vec<f64>,
    pub tol: f64,
    pub sweeps: usize,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Roots of `p`, starting from points on a circle sized by a coefficient bound.
pub fn find_roots(p: &CPoly, tol: f64) -> Result<RootSet> {
    solve(p, tol, None)
}

/// Roots of `p` from caller-supplied starting points (one per unit of degree).
pub fn find_roots_from(p: &CPoly, tol: f64, initial: &[C64]) -> Result<RootSet> {
    solve(p, tol, Some(initial))
}

fn solve(p: &CPoly, tol: f64, initial: Option<&[C64]>) -> Result<RootSet> {
    let degree = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::InvalidArgument("root finding needs degree >= 1".into())),
    };
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if let Some(init) = initial {
        if init.len() != degree {
            return Err(Error::InvalidArgument(format!(
                "{} starting points for a degree-{degree} polynomial",
                init.len()
            )));
        }
    }

    // Exact zero roots come off the bottom of the coefficient list.
    let zeros = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    let reduced = CPoly::new(p.coeffs()[zeros..].to_vec());
    let monic = {
        let lead = reduced.leading().expect("nonzero polynomial");
        CPoly::new(reduced.coeffs().iter().map(|&c| c / lead).collect())
    };
    let n = degree - zeros;

    let mut roots = vec![C64::zero(); zeros];
    let mut sweeps = 0;
    if n == 1 {
        roots.push(-monic.coeff(0));
    } else if n > 1 {
        let mut z: Vec<C64> = match initial {
            // Starting points already at a zero root are not useful for the reduced problem.
            Some(init) => seed_from(init, zeros, &monic),
            None => circle_start(&monic),
        };
        sweeps = aberth(&monic, &mut z, tol).map_err(|best| {
            let mut all = vec![C64::zero(); zeros];
            all.extend(best);
            Error::RootConvergence { sweeps: MAX_SWEEPS, best: all }
        })?;
        roots.extend(z);
    }

    let residuals = roots.iter().map(|&r| p.eval(r).norm()).collect();
    Ok(RootSet { roots, residuals, tol, sweeps })
}

/// Circle centred on the root centroid with radius from the Fujiwara bound.
fn circle_start(monic: &CPoly) -> Vec<C64> {
    let n = monic.degree().unwrap();
    let c = monic.coeffs();
    let center = -c[n - 1] / n as f64;
    let mut bound: f64 = 0.0;
    for k in 0..n {
        let mut a = c[k].norm();
        if k == 0 {
            a /= 2.0;
        }
        bound = bound.max(a.powf(1.0 / (n - k) as f64));
    }
    let radius = (2.0 * bound).max(f64::MIN_POSITIVE.sqrt());
    (0..n)
        .map(|k| center + C64::from_polar(radius, TAU * k as f64 / n as f64 + 0.7))
        .collect()
}

fn seed_from(init: &[C64], zeros: usize, monic: &CPoly) -> Vec<C64> {
    let mut pts: Vec<C64> = init.to_vec();
    // Drop the starting points closest to the origin, one per extracted zero root.
    for _ in 0..zeros {
        let (k, _) = pts
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .unwrap();
        pts.remove(k);
    }
    // Coincident starts stall the iteration; nudge duplicates apart.
    let scale = monic.max_abs_coeff().max(1.0) * 1e-9;
    for i in 1..pts.len() {
        while pts[..i].iter().any(|&q| (q - pts[i]).norm() <= scale) {
            pts[i] += C64::from_polar(scale * 4.0, 1.0 + i as f64);
        }
    }
    pts
}

/// Gauss–Seidel Aberth sweeps. Returns the sweep count, or the best iterates
/// on failure.
fn aberth(monic: &CPoly, z: &mut [C64], tol: f64) -> std::result::Result<usize, Vec<C64>> {
    let n = z.len();
    let abs_coeffs: Vec<f64> = monic.coeffs().iter().map(|c| c.norm()).collect();
    let mut done = vec![false; n];
    for sweep in 1..=MAX_SWEEPS {
        for i in 0..n {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let (p, dp) = monic.eval_with_derivative(zi);
            // Rounding floor of Horner at |zi|: no correction can be trusted below it.
            let floor = f64::EPSILON * abs_coeffs.iter().rev().fold(0.0, |acc, a| acc * zi.norm() + a);
            if p.norm() <= 4.0 * floor {
                done[i] = true;
                continue;
            }
            let mut s = C64::zero();
            for (j, &zj) in z.iter().enumerate() {
                if j != i {
                    s += (zi - zj).inv();
                }
            }
            let denom = dp - p * s;
            let w = if denom.is_finite() && !denom.is_zero() {
                p / denom
            } else {
                C64::from_polar(tol.max(1e-8) * (1.0 + zi.norm()), i as f64)
            };
            if !w.is_finite() {
                return Err(z.to_vec());
            }
            z[i] = zi - w;
            if w.norm() <= tol * (1.0 + zi.norm()) {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return Ok(sweep);
        }
    }
    Err(z.to_vec())
}
