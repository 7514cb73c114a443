//! Bloch curves `tr W(z) = 2 p^{1/2} cos θ`, isolated points and unions of word spectra.

use std::collections::HashSet;
use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;

use super::fixed_point::classify_multiplier;
use super::transfer::{transfer_polynomials, TransferWord};
use crate::matching::match_points;
use crate::poly::{find_roots, CPoly};
use crate::solver::{dense_eigenvalues, DenseMatrix};
use crate::word::Word;
use crate::{Error, Result, C64};

pub const DEFAULT_THETA_STEPS: usize = 2048;
const ROOT_TOL: f64 = 1e-14;
const DEDUP_GRID: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub z: C64,
    pub theta: f64,
    /// Index of `theta` in the uniform grid.
    pub step: usize,
}

/// One continuation branch of a word's Bloch curve.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralCurve {
    /// Index into [`WordSpectrum::words`].
    pub source: usize,
    pub branch: usize,
    pub points: Vec<CurvePoint>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TaggedPoint {
    pub source: usize,
    pub z: C64,
}

/// A root of `β_L` where the vanishing fixed point is the stable one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IsolatedPoint {
    pub source: usize,
    pub z: C64,
    /// Möbius derivative `det/δ²` at the fixed point `b = 0`.
    pub multiplier: C64,
}

/// A θ at which the root finder failed; the curves skip it.
#[derive(Clone, Debug, Serialize)]
pub struct CurveGap {
    pub source: usize,
    pub theta: f64,
    pub reason: String,
}

/// Support of the spectrum of one or more periodic words.
#[derive(Clone, Debug, Serialize)]
pub struct WordSpectrum {
    pub words: Vec<Word>,
    pub curves: Vec<SpectralCurve>,
    /// Roots of `Q`.
    pub endpoints: Vec<TaggedPoint>,
    pub isolated_points: Vec<IsolatedPoint>,
    /// Roots of `R`.
    pub poles: Vec<TaggedPoint>,
    /// Roots of `β_L` with a marginal multiplier.
    pub marginal: Vec<TaggedPoint>,
    pub gaps: Vec<CurveGap>,
    pub theta_steps: usize,
}

impl WordSpectrum {
    /// The first (for a single-word spectrum, the only) source word.
    pub fn word(&self) -> &Word {
        &self.words[0]
    }

    pub fn curve_points(&self) -> impl Iterator<Item = &CurvePoint> + '_ {
        self.curves.iter().flat_map(|c| c.points.iter())
    }

    /// Curve points at grid index `step` for source `source`, in branch order.
    pub fn points_at_step(&self, source: usize, step: usize) -> Vec<C64> {
        self.curves
            .iter()
            .filter(|c| c.source == source)
            .filter_map(|c| c.points.iter().find(|p| p.step == step).map(|p| p.z))
            .collect()
    }

    /// Curve points, endpoints and isolated points with duplicates (closer than 1e−9) removed.
    pub fn support_points(&self) -> Vec<C64> {
        let all = self
            .curve_points()
            .map(|p| p.z)
            .chain(self.endpoints.iter().map(|p| p.z))
            .chain(self.isolated_points.iter().map(|p| p.z));
        dedup_points(all)
    }

    /// Distance from `z` to the nearest support point.
    pub fn distance(&self, z: C64) -> f64 {
        nearest_distance(&self.support_points(), z)
    }
}

fn dedup_points(points: impl Iterator<Item = C64>) -> Vec<C64> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for z in points {
        let key = ((z.re / DEDUP_GRID).round() as i64, (z.im / DEDUP_GRID).round() as i64);
        if seen.insert(key) {
            out.push(z);
        }
    }
    out
}

fn nearest_distance(points: &[C64], z: C64) -> f64 {
    points.iter().map(|p| (p - z).norm()).fold(f64::INFINITY, f64::min)
}

/// Principal square root with `√(−1) = i` even when the imaginary part is `−0.0`.
pub fn principal_sqrt(x: C64) -> C64 {
    C64::new(x.re, x.im + 0.0).sqrt()
}

fn roots_or_empty(p: &CPoly) -> Vec<C64> {
    match p.degree() {
        Some(d) if d >= 1 => find_roots(p, ROOT_TOL).map(|r| r.roots).unwrap_or_else(|e| match e {
            Error::RootConvergence { best, .. } => best,
            _ => Vec::new(),
        }),
        _ => Vec::new(),
    }
}

/// Traces the curve of `w` over `theta_steps` uniform values of `θ ∈ [0, 2π)`.
///
/// Roots are taken from `tr W` in coefficient form, which is well conditioned
/// for short words only; for words much longer than ~30 letters use
/// [`bloch_matrix_eigs`] instead.
pub fn bloch_curve(w: &Word, theta_steps: usize) -> Result<WordSpectrum> {
    if theta_steps < 8 {
        return Err(Error::InvalidArgument(format!("theta_steps must be at least 8, got {theta_steps}")));
    }
    let t = transfer_polynomials(w);
    let amplitude = 2.0 * principal_sqrt(t.det);
    let solved: Vec<(f64, Result<Vec<C64>>)> = (0..theta_steps)
        .into_par_iter()
        .map(|j| {
            let theta = TAU * j as f64 / theta_steps as f64;
            let p = &t.trace - &CPoly::constant(amplitude * theta.cos());
            (theta, find_roots(&p, ROOT_TOL).map(|r| r.roots))
        })
        .collect();

    let l = w.len();
    let mut curves: Vec<SpectralCurve> =
        (0..l).map(|branch| SpectralCurve { source: 0, branch, points: Vec::with_capacity(theta_steps) }).collect();
    let mut gaps = Vec::new();
    let mut previous: Option<Vec<C64>> = None;
    for (step, (theta, roots)) in solved.into_iter().enumerate() {
        let roots = match roots {
            Ok(r) => r,
            Err(e) => {
                gaps.push(CurveGap { source: 0, theta, reason: e.to_string() });
                continue;
            }
        };
        let ordered = match &previous {
            None => {
                let mut r = roots;
                r.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
                r
            }
            Some(prev) => {
                let assign = match_points(prev, &roots);
                assign.iter().map(|&k| roots[k]).collect()
            }
        };
        for (branch, &z) in ordered.iter().enumerate() {
            curves[branch].points.push(CurvePoint { z, theta, step });
        }
        previous = Some(ordered);
    }

    let pqr = t.pqr();
    let endpoints = roots_or_empty(&pqr.q).into_iter().map(|z| TaggedPoint { source: 0, z }).collect();
    let (isolated_points, marginal, poles) = isolated_from(&t);
    Ok(WordSpectrum {
        words: vec![w.clone()],
        curves,
        endpoints,
        isolated_points,
        poles,
        marginal,
        gaps,
        theta_steps,
    })
}

type Isolated = (Vec<IsolatedPoint>, Vec<TaggedPoint>, Vec<TaggedPoint>);

fn isolated_from(t: &TransferWord<C64>) -> Isolated {
    let mut isolated = Vec::new();
    let mut marginal = Vec::new();
    for z in roots_or_empty(&t.beta_l) {
        // At β_L(z) = 0 one fixed point is b = 0, with derivative det/δ².
        let delta = t.beta_lm1.eval(z);
        if delta.norm() == 0.0 {
            continue;
        }
        let multiplier = t.det / (delta * delta);
        match classify_multiplier(multiplier) {
            Some(true) => isolated.push(IsolatedPoint { source: 0, z, multiplier }),
            None => marginal.push(TaggedPoint { source: 0, z }),
            Some(false) => {}
        }
    }
    let poles = roots_or_empty(&t.alpha_lm1).into_iter().map(|z| TaggedPoint { source: 0, z }).collect();
    (isolated, marginal, poles)
}

/// Stable-branch zeros of `β_L` and, separately, the poles (zeros of `R`).
pub fn isolated_points(w: &Word) -> (Vec<IsolatedPoint>, Vec<TaggedPoint>) {
    let (isolated, _, poles) = isolated_from(&transfer_polynomials(w));
    (isolated, poles)
}

/// Superposes several word spectra, keeping each item tagged with its source word.
pub fn support_union(parts: &[WordSpectrum]) -> Result<WordSpectrum> {
    let first = parts.first().ok_or_else(|| Error::InvalidArgument("support_union needs at least one spectrum".into()))?;
    let mut out = WordSpectrum {
        words: Vec::new(),
        curves: Vec::new(),
        endpoints: Vec::new(),
        isolated_points: Vec::new(),
        poles: Vec::new(),
        marginal: Vec::new(),
        gaps: Vec::new(),
        theta_steps: first.theta_steps,
    };
    for part in parts {
        let offset = out.words.len();
        out.words.extend(part.words.iter().cloned());
        out.curves.extend(part.curves.iter().map(|c| SpectralCurve { source: c.source + offset, ..c.clone() }));
        let retag = |v: &[TaggedPoint]| v.iter().map(|p| TaggedPoint { source: p.source + offset, z: p.z }).collect::<Vec<_>>();
        out.endpoints.extend(retag(&part.endpoints));
        out.poles.extend(retag(&part.poles));
        out.marginal.extend(retag(&part.marginal));
        out.isolated_points
            .extend(part.isolated_points.iter().map(|p| IsolatedPoint { source: p.source + offset, ..*p }));
        out.gaps.extend(part.gaps.iter().map(|g| CurveGap { source: g.source + offset, ..g.clone() }));
    }
    Ok(out)
}

/// The `L × L` Bloch matrix `h_L(φ)`: the periodic chain with corner
/// entries `r_L e^{−iφ}` (top right) and `e^{iφ}` (bottom left).
pub fn bloch_matrix(w: &Word, phi: f64) -> DenseMatrix<C64> {
    let r = w.values();
    let l = r.len();
    let mut h = DenseMatrix::zeros(l);
    for k in 0..l.saturating_sub(1) {
        h.set(k, k + 1, C64::new(1.0, 0.0));
        h.set(k + 1, k, r[k]);
    }
    let top = h.get(0, l - 1) + r[l - 1] * C64::from_polar(1.0, -phi);
    h.set(0, l - 1, top);
    let bottom = h.get(l - 1, 0) + C64::from_polar(1.0, phi);
    h.set(l - 1, 0, bottom);
    h
}

/// Eigenvalues of `h_L(φ)` over a uniform grid of `φ ∈ [0, 2π)`.
pub fn bloch_matrix_eigs(w: &Word, phi_steps: usize) -> Result<Vec<C64>> {
    if phi_steps < 8 {
        return Err(Error::InvalidArgument(format!("phi_steps must be at least 8, got {phi_steps}")));
    }
    let per_phi: Vec<Result<Vec<C64>>> = (0..phi_steps)
        .into_par_iter()
        .map(|j| dense_eigenvalues(&bloch_matrix(w, TAU * j as f64 / phi_steps as f64)))
        .collect();
    let mut out = Vec::with_capacity(phi_steps * w.len());
    for r in per_phi {
        out.extend(r?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::{hausdorff, matched_max_distance};
    use crate::spectrum::pqr;
    use crate::word::{enumerate_words, Letter};

    fn word(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn clean_chain_segments() {
        let s = bloch_curve(&word("+"), 64).unwrap();
        assert_eq!(s.curves.len(), 1);
        for p in s.curve_points() {
            assert!((p.z - C64::new(2.0 * p.theta.cos(), 0.0)).norm() < 1e-14);
        }
        let mut ends: Vec<f64> = s.endpoints.iter().map(|e| e.z.re).collect();
        ends.sort_by(f64::total_cmp);
        assert!((ends[0] + 2.0).abs() < 1e-12 && (ends[1] - 2.0).abs() < 1e-12);

        let s = bloch_curve(&word("-"), 64).unwrap();
        for p in s.curve_points() {
            assert!(p.z.re.abs() < 1e-14 && p.z.im.abs() <= 2.0 + 1e-14);
        }
        assert!(s.isolated_points.is_empty() && s.poles.is_empty());
    }

    #[test]
    fn four_letter_algebraic_curve() {
        let s = bloch_curve(&word("+++-"), DEFAULT_THETA_STEPS).unwrap();
        assert!(s.gaps.is_empty());
        for p in s.curve_points() {
            let v = p.z.powi(4) - 2.0 * p.z * p.z - C64::new(0.0, 2.0 * p.theta.cos());
            assert!(v.norm() < 1e-9);
        }
    }

    #[test]
    fn curve_points_lie_on_im_q_zero() {
        for len in 1..=6 {
            for w in enumerate_words(len).unwrap() {
                let q = pqr(&w).q;
                let s = bloch_curve(&w, 256).unwrap();
                for p in s.curve_points() {
                    let bound = 1e-8 * (1.0 + p.z.norm().powi(2 * len as i32));
                    assert!(q.eval(p.z).im.abs() <= bound, "{w} at {}", p.z);
                }
            }
        }
    }

    #[test]
    fn four_letter_factored_condition() {
        for w in enumerate_words(4).unwrap() {
            let inv = w.cyclic_invariants();
            let s = inv.s.re;
            let kappa = inv.kappa.unwrap().re;
            for p in bloch_curve(&w, 512).unwrap().curve_points() {
                let (x, y) = (p.z.re, p.z.im);
                let (x2, y2) = (x * x, y * y);
                let f = x * y * (y2 - x2 + s / 2.0) * (x2 * x2 + y2 * y2 - 6.0 * x2 * y2 + s * (y2 - x2) + kappa);
                assert!(f.abs() < 1e-6, "{w}: {f} at {}", p.z);
            }
        }
    }

    #[test]
    fn continuation_keeps_branches_short() {
        let s = bloch_curve(&word("++-"), 2048).unwrap();
        for c in &s.curves {
            for pair in c.points.windows(2) {
                assert!((pair[1].z - pair[0].z).norm() < 0.05);
            }
        }
    }

    #[test]
    fn scaling_and_rotation_covariance() {
        let base = word("++-");
        let n = 256;
        let s0 = bloch_curve(&base, n).unwrap();
        let cases = [(base.scaled(C64::new(4.0, 0.0)).unwrap(), C64::new(2.0, 0.0)), (base.negated(), C64::i())];
        for (w, factor) in cases {
            let s1 = bloch_curve(&w, n).unwrap();
            for j in 0..n {
                let got = s1.points_at_step(0, j);
                let direct: Vec<C64> = s0.points_at_step(0, j).iter().map(|z| z * factor).collect();
                let mirrored: Vec<C64> =
                    s0.points_at_step(0, (n / 2 + n - j) % n).iter().map(|z| z * factor).collect();
                let d = matched_max_distance(&got, &direct).min(matched_max_distance(&got, &mirrored));
                assert!(d < 1e-9, "{w} step {j}: {d}");
            }
        }
    }

    #[test]
    fn isolated_points_and_poles() {
        let (iso, poles) = isolated_points(&word("+"));
        assert!(iso.is_empty() && poles.is_empty());

        // β₂ = −z: root at 0 with multiplier det/δ² = −1, marginal.
        let s = bloch_curve(&word("+-"), 64).unwrap();
        assert!(s.isolated_points.is_empty());
        assert_eq!(s.marginal.len(), 1);
        assert!(s.marginal[0].z.norm() < 1e-14);

        // R = z² − 1 for {++-} and z² + 1 for its rotation {+-+}; every pole lies on the curves.
        for (w, pole) in [("++-", C64::new(1.0, 0.0)), ("+-+", C64::i())] {
            let s = bloch_curve(&word(w), 2048).unwrap();
            let poles: Vec<C64> = s.poles.iter().map(|p| p.z).collect();
            assert!(matched_max_distance(&poles, &[pole, -pole]) < 1e-12);
            for p in poles {
                assert!(s.distance(p) < 5e-3, "{w}: pole {p} off the curve");
            }
        }
    }

    #[test]
    fn union_semantics() {
        let a = bloch_curve(&word("++--"), 128).unwrap();
        let b = bloch_curve(&word("+++-"), 128).unwrap();
        let u = support_union(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(u.words.len(), 2);
        assert_eq!(u.curves.len(), 8);
        assert!(u.curves[4..].iter().all(|c| c.source == 1));
        let self_union = support_union(&[a.clone(), a.clone()]).unwrap();
        assert!(hausdorff(&self_union.support_points(), &a.support_points()) < 1e-9);
        assert_eq!(self_union.support_points().len(), a.support_points().len());
        assert!(support_union(&[]).is_err());
    }

    #[test]
    fn bloch_matrix_reproduces_curves() {
        let plus = bloch_matrix_eigs(&word("+"), 32).unwrap();
        assert!(plus.iter().all(|z| z.im.abs() < 1e-14 && z.re.abs() <= 2.0 + 1e-14));

        let w = word("+++-");
        let eigs = bloch_matrix_eigs(&w, 2048).unwrap();
        let curve = bloch_curve(&w, 2048).unwrap();
        let pts: Vec<C64> = curve.curve_points().map(|p| p.z).collect();
        assert!(hausdorff(&eigs, &pts) < 2e-3);

        let q = pqr(&word("++-")).q;
        for z in bloch_matrix_eigs(&word("++-"), 256).unwrap() {
            assert!(q.eval(z).im.abs() <= 1e-8);
        }
    }

    #[test]
    fn generalized_letters_are_supported() {
        let w = Word::new(vec![Letter::new(C64::new(0.5, 0.5)).unwrap(), Letter::MINUS]).unwrap();
        let s = bloch_curve(&w, 64).unwrap();
        let t = transfer_polynomials(&w);
        let amp = 2.0 * principal_sqrt(t.det);
        for p in s.curve_points() {
            assert!((t.trace.eval(p.z) - amp * p.theta.cos()).norm() < 1e-12);
        }
        assert!(bloch_curve(&w, 4).is_err());
    }
}
