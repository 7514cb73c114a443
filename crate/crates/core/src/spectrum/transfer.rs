//! Polynomial transfer matrix of a word and its discriminant.
//!
//! For letters `w_1 … w_L` the recursions
//!
//! ```text
//! α_{j+1} = z α_j − w_{j+1} α_{j−1},   α_0 = 1, α_1 = z
//! β_{j+1} = z β_j − w_{j+1} β_{j−1},   β_0 = 0, β_1 = −w_1
//! ```
//!
//! build `W = U_L ⋯ U_1 = [[α_L, β_L], [α_{L−1}, β_{L−1}]]` with
//! `U_j = [[z, −w_j], [1, 0]]`. The fixed points of the Möbius map of `W`
//! are `b = (P ± √Q) / 2R` with `P = α_L − β_{L−1}`,
//! `Q = P² + 4 α_{L−1} β_L` and `R = α_{L−1}`.

use crate::poly::{CPoly, Coeff, GPoly, Poly};
use crate::word::{CyclicInvariants, Word};
use crate::{Error, Result, C64};

/// Entries of the word's transfer matrix `W(z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferWord<T: Coeff> {
    pub alpha_l: Poly<T>,
    pub beta_l: Poly<T>,
    pub alpha_lm1: Poly<T>,
    pub beta_lm1: Poly<T>,
    /// `Π w_j`.
    pub det: T,
    /// `α_L + β_{L−1}`.
    pub trace: Poly<T>,
}

/// `P`, `Q`, `R` of the fixed-point quadratic `R b² − P b − β_L = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pqr<T: Coeff> {
    pub p: Poly<T>,
    pub q: Poly<T>,
    pub r: Poly<T>,
}

/// Runs the α/β recursions over `letters` (must be nonempty).
pub fn transfer_polynomials_of<T: Coeff>(letters: &[T]) -> TransferWord<T> {
    assert!(!letters.is_empty(), "transfer matrix of an empty word");
    let z = Poly::<T>::z();
    let mut alpha = (Poly::one(), z.clone());
    let mut beta = (Poly::zero(), Poly::constant(-letters[0]));
    for &w in &letters[1..] {
        let next_a = &alpha.1.shift() - &alpha.0.scale(w);
        let next_b = &beta.1.shift() - &beta.0.scale(w);
        alpha = (alpha.1, next_a);
        beta = (beta.1, next_b);
    }
    let det = letters.iter().fold(T::one(), |acc, &w| acc * w);
    let trace = &alpha.1 + &beta.0;
    TransferWord { alpha_l: alpha.1, beta_l: beta.1, alpha_lm1: alpha.0, beta_lm1: beta.0, det, trace }
}

/// Floating transfer polynomials of any word.
pub fn transfer_polynomials(w: &Word) -> TransferWord<C64> {
    transfer_polynomials_of(&w.values())
}

/// Exact transfer polynomials when every letter is a Gaussian integer.
pub fn transfer_polynomials_exact(w: &Word) -> Option<TransferWord<crate::poly::GaussInt>> {
    w.gaussian_letters().map(|l| transfer_polynomials_of(&l))
}

impl<T: Coeff> TransferWord<T> {
    pub fn pqr(&self) -> Pqr<T> {
        let p = &self.alpha_l - &self.beta_lm1;
        let q = &(&p * &p) + &(&self.alpha_lm1 * &self.beta_l).scale(T::from_i64(4));
        Pqr { p, q, r: self.alpha_lm1.clone() }
    }

    /// `tr² − 4 det`, which equals `Q`.
    pub fn discriminant(&self) -> Poly<T> {
        &(&self.trace * &self.trace) - &Poly::constant(self.det * T::from_i64(4))
    }

    /// `αδ − βγ` from the polynomial entries; equals `det` identically.
    pub fn det_poly(&self) -> Poly<T> {
        &(&self.alpha_l * &self.beta_lm1) - &(&self.beta_l * &self.alpha_lm1)
    }

    pub fn to_complex(&self) -> TransferWord<C64> {
        TransferWord {
            alpha_l: self.alpha_l.to_complex(),
            beta_l: self.beta_l.to_complex(),
            alpha_lm1: self.alpha_lm1.to_complex(),
            beta_lm1: self.beta_lm1.to_complex(),
            det: self.det.to_c64(),
            trace: self.trace.to_complex(),
        }
    }
}

impl TransferWord<C64> {
    /// `W(z)` as `[[α, β], [γ, δ]]`.
    pub fn matrix_at(&self, z: C64) -> [[C64; 2]; 2] {
        [[self.alpha_l.eval(z), self.beta_l.eval(z)], [self.alpha_lm1.eval(z), self.beta_lm1.eval(z)]]
    }
}

/// Floating `P`, `Q`, `R` of a word.
pub fn pqr(w: &Word) -> Pqr<C64> {
    transfer_polynomials(w).pqr()
}

/// Exact `P`, `Q`, `R` when all letters are Gaussian integers.
pub fn pqr_exact(w: &Word) -> Option<Pqr<crate::poly::GaussInt>> {
    transfer_polynomials_exact(w).map(|t| t.pqr())
}

/// Closed-form `Q_L` for `2 ≤ L ≤ 7` in terms of the cyclic invariants.
pub fn q_closed_form<T: Coeff>(length: usize, inv: &CyclicInvariants<T>) -> Result<Poly<T>> {
    if !(2..=7).contains(&length) {
        return Err(Error::UnsupportedLength(length));
    }
    if inv.length != length {
        return Err(Error::InvalidArgument(format!(
            "invariants were computed for length {}, not {length}",
            inv.length
        )));
    }
    let n = |v: i64| T::from_i64(v);
    let need = |x: Option<T>, name: &str| {
        x.ok_or_else(|| Error::InvalidArgument(format!("invariant {name} missing for length {length}")))
    };
    let (s, p) = (inv.s, inv.p);
    // Coefficients of z^0, z^2, z^4, … ; the top one is always 1.
    let even: Vec<T> = match length {
        2 => {
            let d = need(inv.d, "d")?;
            vec![d * d, n(-2) * s, T::one()]
        }
        3 => vec![n(-4) * p, s * s, n(-2) * s, T::one()],
        4 => {
            let (k, w) = (need(inv.kappa, "kappa")?, need(inv.omega, "omega")?);
            vec![w * w, n(-2) * s * k, s * s + n(2) * k, n(-2) * s, T::one()]
        }
        5 => {
            let k = need(inv.kappa, "kappa")?;
            vec![n(-4) * p, k * k, n(-2) * s * k, s * s + n(2) * k, n(-2) * s, T::one()]
        }
        6 => {
            let (k, r, d) = (need(inv.kappa, "kappa")?, need(inv.rho, "rho")?, need(inv.delta, "delta")?);
            vec![
                d * d,
                n(-2) * k * r,
                k * k + n(2) * s * r,
                n(-2) * (s * k + r),
                s * s + n(2) * k,
                n(-2) * s,
                T::one(),
            ]
        }
        7 => {
            let (k, r) = (need(inv.kappa, "kappa")?, need(inv.rho, "rho")?);
            vec![
                n(-4) * p,
                r * r,
                n(-2) * k * r,
                k * k + n(2) * s * r,
                n(-2) * (s * k + r),
                s * s + n(2) * k,
                n(-2) * s,
                T::one(),
            ]
        }
        _ => unreachable!(),
    };
    Ok(Poly::new(even).compose_z2())
}

/// Closed-form `Q` of a word with Gaussian-integer letters.
pub fn q_closed_form_exact(w: &Word) -> Result<GPoly> {
    let letters = w
        .gaussian_letters()
        .ok_or_else(|| Error::InvalidArgument(format!("word {w} has non-integral letters")))?;
    q_closed_form(w.len(), &crate::word::cyclic_invariants(&letters))
}

/// Floating closed-form `Q` of any word of length 2..=7.
pub fn q_closed_form_word(w: &Word) -> Result<CPoly> {
    q_closed_form(w.len(), &w.cyclic_invariants())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::GaussInt;
    use crate::word::enumerate_words;

    fn g(c: &[i64]) -> GPoly {
        GPoly::new(c.iter().map(|&v| GaussInt::new(v, 0)).collect())
    }

    fn word(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn single_letter() {
        let t = transfer_polynomials_exact(&word("+")).unwrap();
        assert_eq!(t.alpha_l, g(&[0, 1]));
        assert_eq!(t.beta_l, g(&[-1]));
        assert_eq!(t.alpha_lm1, g(&[1]));
        assert_eq!(t.beta_lm1, GPoly::zero());
        assert_eq!(t.trace, g(&[0, 1]));
        assert_eq!(t.det, GaussInt::new(1, 0));
        let pqr = t.pqr();
        assert_eq!(pqr.p, g(&[0, 1]));
        assert_eq!(pqr.q, g(&[-4, 0, 1]));
        assert_eq!(pqr.r, g(&[1]));
    }

    #[test]
    fn two_and_three_letters() {
        let t = transfer_polynomials_exact(&word("+-")).unwrap();
        assert_eq!(t.trace, g(&[0, 0, 1]));
        assert_eq!(t.det, GaussInt::new(-1, 0));
        let t = transfer_polynomials_exact(&word("++-")).unwrap();
        assert_eq!(t.trace, g(&[0, -1, 0, 1]));
        assert_eq!(t.det, GaussInt::new(-1, 0));
    }

    #[test]
    fn pqr_of_three_letter_words() {
        // R = α_{L−1} = z² − w_2 depends on which rotation is used; Q does not.
        let q = g(&[4, 0, 1, 0, -2, 0, 1]);
        let a = pqr_exact(&word("++-")).unwrap();
        assert_eq!(a.q, q);
        assert_eq!(a.r, g(&[-1, 0, 1]));
        let b = pqr_exact(&word("+-+")).unwrap();
        assert_eq!(b.q, q);
        assert_eq!(b.r, g(&[1, 0, 1]));
    }

    #[test]
    fn pqr_of_four_letter_word() {
        let t = transfer_polynomials_exact(&word("+++-")).unwrap();
        assert_eq!(t.pqr().q, g(&[4, 0, 0, 0, 4, 0, -4, 0, 1]));
        assert_eq!(t.trace, g(&[0, 0, -2, 0, 1]));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(q_closed_form_exact(&word("++--")).unwrap(), g(&[0, 0, 0, 0, -4, 0, 0, 0, 1]));
        assert_eq!(q_closed_form_exact(&word("++-")).unwrap(), g(&[4, 0, 1, 0, -2, 0, 1]));
        assert_eq!(q_closed_form_exact(&word("+-")).unwrap(), g(&[4, 0, 0, 0, 1]));
        assert!(matches!(q_closed_form_exact(&word("+")), Err(Error::UnsupportedLength(1))));
        assert!(matches!(q_closed_form_exact(&word("++++++++")), Err(Error::UnsupportedLength(8))));
    }

    #[test]
    fn structural_invariants_small_lengths() {
        for len in 1..=8 {
            for w in enumerate_words(len).unwrap() {
                let t = transfer_polynomials_exact(&w).unwrap();
                assert_eq!(t.det_poly(), GPoly::constant(t.det), "{w}");
                assert_eq!(t.alpha_l.degree(), Some(len));
                assert_eq!(t.alpha_l.leading(), Some(GaussInt::new(1, 0)));
                let pqr = t.pqr();
                assert_eq!(pqr.q.degree(), Some(2 * len));
                assert!(pqr.q.is_even(), "{w}");
                assert_eq!(pqr.q, t.discriminant());
            }
        }
    }

    #[test]
    fn closed_form_holds_for_generic_letters() {
        // Non-binary Gaussian-integer letters exercise every coefficient.
        let letters: Vec<GaussInt> =
            [(2, 1), (-3, 0), (1, -2), (5, 0), (0, 1), (-1, -1), (4, 3)].iter().map(|&(a, b)| GaussInt::new(a, b)).collect();
        for len in 2..=7 {
            let l = &letters[..len];
            let q = transfer_polynomials_of(l).pqr().q;
            let closed = q_closed_form(len, &crate::word::cyclic_invariants(l)).unwrap();
            assert_eq!(q, closed, "length {len}");
        }
    }
}
