//! Fixed points of the Möbius map `b ↦ (αb + β)/(γb + δ)` of a word.

use num_traits::Zero;
use serde::Serialize;

use super::transfer::{transfer_polynomials, TransferWord};
use crate::word::Word;
use crate::{Error, Result, C64};

/// Width of the band around `|f'| = 1` reported as marginal.
pub const MARGINAL_BAND: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    Plus,
    Minus,
}

/// Both roots of `γb² + (δ − α)b − β = 0` with the map's derivative at each.
#[derive(Clone, Copy, Debug)]
pub struct FixedPointPair {
    /// `(P + √Q) / 2R` with the principal square root.
    pub b_plus: C64,
    pub b_minus: C64,
    pub derivative_plus: C64,
    pub derivative_minus: C64,
    /// Branch with `|f'| < 1` outside the marginal band, if any.
    pub stable: Option<Branch>,
    /// Some `|f'|` lies within [`MARGINAL_BAND`] of 1.
    pub marginal: bool,
}

impl FixedPointPair {
    pub fn stable_point(&self) -> Option<C64> {
        self.stable.map(|b| match b {
            Branch::Plus => self.b_plus,
            Branch::Minus => self.b_minus,
        })
    }

    pub fn get(&self, branch: Branch) -> (C64, C64) {
        match branch {
            Branch::Plus => (self.b_plus, self.derivative_plus),
            Branch::Minus => (self.b_minus, self.derivative_minus),
        }
    }
}

/// Classifies a multiplier: `Some(true)` stable, `Some(false)` unstable, `None` marginal.
pub fn classify_multiplier(derivative: C64) -> Option<bool> {
    let m = derivative.norm();
    if (1.0 - m).abs() < MARGINAL_BAND {
        None
    } else {
        Some(m < 1.0)
    }
}

/// Fixed points of the 2×2 map `[[a, b], [c, d]]` with determinant `det`.
pub fn mobius_fixed_points(m: [[C64; 2]; 2], det: C64, z: C64) -> Result<FixedPointPair> {
    let [[a, b], [c, d]] = m;
    let scale = a.norm() + b.norm() + d.norm();
    if c.norm() <= f64::EPSILON * scale {
        return Err(Error::DegenerateMap { z });
    }
    let p = a - d;
    let sqrt_q = (p * p + 4.0 * c * b).sqrt();
    // Avoid cancellation: form the larger of P ± √Q, get the other root from the product −β/γ.
    let (big, plus_is_big) = if (p + sqrt_q).norm() >= (p - sqrt_q).norm() { (p + sqrt_q, true) } else { (p - sqrt_q, false) };
    let (b_big, b_small) = if big.is_zero() {
        // P = √Q = 0: double root.
        (C64::zero(), C64::zero())
    } else {
        (big / (2.0 * c), -2.0 * b / big)
    };
    let (b_plus, b_minus) = if plus_is_big { (b_big, b_small) } else { (b_small, b_big) };
    // W (b, 1)ᵀ = λ (b, 1)ᵀ with λ = γb + δ = (tr ± √Q)/2 and f'(b) = det/λ².
    // The smaller eigenvalue comes from λ₊λ₋ = det rather than from γb + δ,
    // which cancels badly when the entries of W are large.
    let tr = a + d;
    let (l_big, l_big_is_plus) =
        if (tr + sqrt_q).norm() >= (tr - sqrt_q).norm() { ((tr + sqrt_q) * 0.5, true) } else { ((tr - sqrt_q) * 0.5, false) };
    let l_small = det / l_big;
    let (lambda_plus, lambda_minus) = if l_big_is_plus { (l_big, l_small) } else { (l_small, l_big) };
    let derivative_plus = det / (lambda_plus * lambda_plus);
    let derivative_minus = det / (lambda_minus * lambda_minus);
    let cp = classify_multiplier(derivative_plus);
    let cm = classify_multiplier(derivative_minus);
    let stable = match (cp, cm) {
        (Some(true), _) => Some(Branch::Plus),
        (_, Some(true)) => Some(Branch::Minus),
        _ => None,
    };
    Ok(FixedPointPair {
        b_plus,
        b_minus,
        derivative_plus,
        derivative_minus,
        stable,
        marginal: cp.is_none() || cm.is_none(),
    })
}

/// Fixed points of the word map at `z`, from precomputed transfer polynomials.
pub fn fixed_points_with(t: &TransferWord<C64>, z: C64) -> Result<FixedPointPair> {
    mobius_fixed_points(t.matrix_at(z), t.det, z)
}

pub fn fixed_points(w: &Word, z: C64) -> Result<FixedPointPair> {
    fixed_points_with(&transfer_polynomials(w), z)
}

/// `f_L(b; z, w)` from `f_1 = z − w_1/b`, `f_{j+1} = z − w_{j+1}/f_j`, in
/// projective form so a vanishing `f_j` passes through infinity.
pub fn continued_fraction_f(w: &Word, b: C64, z: C64) -> C64 {
    let (mut num, mut den) = if b.is_finite() { (b, C64::new(1.0, 0.0)) } else { (C64::new(1.0, 0.0), C64::zero()) };
    for letter in w.letters() {
        let next = (z * num - letter.value() * den, num);
        let s = next.0.norm().max(next.1.norm());
        num = next.0 / s;
        den = next.1 / s;
    }
    if den.is_zero() {
        C64::new(f64::INFINITY, 0.0)
    } else {
        num / den
    }
}

/// Stable fixed points of every word of length `1..=max_len` at `z`.
pub fn stable_fixed_points(z: C64, max_len: usize) -> Vec<C64> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        for w in crate::word::enumerate_words(len).expect("length within enumeration range") {
            if let Ok(fp) = fixed_points(&w, z) {
                out.extend(fp.stable_point());
            }
        }
    }
    out
}
