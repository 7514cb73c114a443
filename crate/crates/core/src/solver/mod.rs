//! Finite open-chain Hamiltonians and their eigenvalues.
//!
//! `H` is `(N+1) × (N+1)` with zero diagonal, unit superdiagonal and
//! subdiagonal `r_1 … r_N`. All public eigenvalues are eigenvalues of `H`,
//! i.e. roots of `det(zI − H)`. Since the diagonal is zero, `det(zI − H)` and
//! `det(H + zI)` obey the same recursion `Δ_{k+1} = zΔ_k − r_kΔ_{k−1}`, so the
//! two conventions give the same polynomial.

pub mod qr;

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::poly::{find_roots, to_gauss, CPoly, GaussInt, Poly};
use crate::word::{Letter, Paragraph, Word};
use crate::{Error, Result, C64};
pub use qr::{dense_eigenvalues, DenseMatrix, QrStats};

/// Largest matrix handled by [`eigenvalues_qr`].
pub const MAX_QR_SIZE: usize = 5000;
/// Largest matrix for which the characteristic polynomial is formed.
pub const MAX_CHAR_POLY_SIZE: usize = 64;

/// Where the subdiagonal comes from.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// A word repeated cyclically from its first letter.
    Periodic(Word),
    /// Model A: `±1` with equal probability.
    RandomSign { seed: u64 },
    /// Model B: `e^{iθ}` with `θ` uniform on `[0, 2π)`.
    RandomPhase { seed: u64 },
    /// A paragraph, tiled or truncated to length `N`.
    Paragraph(Paragraph),
    /// Exactly `N` given letters.
    Explicit(Vec<Letter>),
}

impl Source {
    pub fn seed(&self) -> Option<u64> {
        match self {
            Source::RandomSign { seed } | Source::RandomPhase { seed } => Some(*seed),
            _ => None,
        }
    }

    /// Short label for tables.
    pub fn label(&self) -> String {
        match self {
            Source::Periodic(w) => format!("periodic:{w}"),
            Source::RandomSign { .. } => "random_sign".into(),
            Source::RandomPhase { .. } => "random_phase".into(),
            Source::Paragraph(p) => format!("paragraph:{p}"),
            Source::Explicit(_) => "explicit".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HamiltonianSpec {
    /// Subdiagonal length; the matrix is `(n+1) × (n+1)`.
    pub n: usize,
    pub source: Source,
}

impl HamiltonianSpec {
    pub fn new(n: usize, source: Source) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("N must be at least 1".into()));
        }
        if let Source::Explicit(letters) = &source {
            if letters.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "explicit source has {} letters, expected N = {n}",
                    letters.len()
                )));
            }
        }
        Ok(HamiltonianSpec { n, source })
    }

    pub fn periodic(n: usize, w: Word) -> Result<Self> {
        Self::new(n, Source::Periodic(w))
    }

    pub fn random_sign(n: usize, seed: u64) -> Result<Self> {
        Self::new(n, Source::RandomSign { seed })
    }

    pub fn random_phase(n: usize, seed: u64) -> Result<Self> {
        Self::new(n, Source::RandomPhase { seed })
    }

    pub fn explicit(letters: Vec<Letter>) -> Result<Self> {
        Self::new(letters.len(), Source::Explicit(letters))
    }

    pub fn size(&self) -> usize {
        self.n + 1
    }
}

/// Letters `r_1 … r_N`, deterministic in the spec.
pub fn build_subdiagonal(spec: &HamiltonianSpec) -> Vec<Letter> {
    let n = spec.n;
    let tile = |base: &[Letter]| base.iter().cycle().take(n).copied().collect();
    match &spec.source {
        Source::Periodic(w) => tile(w.letters()),
        Source::Paragraph(p) => tile(&p.build()),
        Source::Explicit(letters) => letters.clone(),
        Source::RandomSign { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..n).map(|_| if rng.gen::<bool>() { Letter::PLUS } else { Letter::MINUS }).collect()
        }
        Source::RandomPhase { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..n)
                .map(|_| {
                    let theta = TAU * rng.gen::<f64>();
                    Letter::new(C64::from_polar(1.0, theta)).expect("unit modulus")
                })
                .collect()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    RealDoubleShift,
    ComplexSingleShift,
    PolynomialRoots,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    pub method: Method,
    pub iterations: usize,
    pub deflations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenResult {
    pub eigenvalues: Vec<C64>,
    pub spec: HamiltonianSpec,
    pub diagnostics: Diagnostics,
}

fn sort_complex(v: &mut [C64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Eigenvalues of the tridiagonal matrix with unit superdiagonal and the given subdiagonal.
pub fn tridiagonal_eigenvalues(sub: &[C64]) -> Result<(Vec<C64>, Diagnostics)> {
    let size = sub.len() + 1;
    if size > MAX_QR_SIZE {
        return Err(Error::SizeCap { size, cap: MAX_QR_SIZE });
    }
    let (mut eig, stats, method) = if sub.iter().all(|r| r.im == 0.0) {
        let mut h = DenseMatrix::<f64>::zeros(size);
        for (k, r) in sub.iter().enumerate() {
            h.set(k + 1, k, r.re);
            h.set(k, k + 1, 1.0);
        }
        let (e, s) = qr::real_hessenberg_eigenvalues(&mut h)?;
        (e, s, Method::RealDoubleShift)
    } else {
        let mut h = DenseMatrix::<C64>::zeros(size);
        for (k, r) in sub.iter().enumerate() {
            h.set(k + 1, k, *r);
            h.set(k, k + 1, C64::new(1.0, 0.0));
        }
        let (e, s) = qr::complex_hessenberg_eigenvalues(&mut h)?;
        (e, s, Method::ComplexSingleShift)
    };
    sort_complex(&mut eig);
    Ok((eig, Diagnostics { method, iterations: stats.iterations, deflations: stats.deflations }))
}

/// All `N+1` eigenvalues by shifted QR on the (already Hessenberg) matrix.
pub fn eigenvalues_qr(spec: &HamiltonianSpec) -> Result<EigenResult> {
    let sub: Vec<C64> = build_subdiagonal(spec).iter().map(|l| l.value()).collect();
    let (eigenvalues, diagnostics) = tridiagonal_eigenvalues(&sub)?;
    Ok(EigenResult { eigenvalues, spec: spec.clone(), diagnostics })
}

/// `Δ_{N+1}` from `Δ_0 = 1`, `Δ_1 = z`, `Δ_{k+1} = zΔ_k − r_kΔ_{k−1}`.
pub fn char_poly_of<T: crate::poly::Coeff>(sub: &[T]) -> Poly<T> {
    let z = Poly::<T>::z();
    let mut prev = Poly::one();
    let mut cur = z.clone();
    for &r in sub {
        let next = &(&z * &cur) - &prev.scale(r);
        prev = cur;
        cur = next;
    }
    cur
}

/// Characteristic polynomial `det(zI − H)`; exact when every letter is a Gaussian integer.
pub fn char_poly(spec: &HamiltonianSpec) -> Result<CPoly> {
    if spec.size() > MAX_CHAR_POLY_SIZE {
        return Err(Error::SizeCap { size: spec.size(), cap: MAX_CHAR_POLY_SIZE });
    }
    let letters = build_subdiagonal(spec);
    let values: Vec<C64> = letters.iter().map(|l| l.value()).collect();
    let exact: Option<Vec<GaussInt>> = values.iter().map(|&v| to_gauss(v)).collect();
    Ok(match exact {
        Some(g) => char_poly_of(&g).to_complex(),
        None => char_poly_of(&values),
    })
}

/// Eigenvalues as roots of [`char_poly`]; the oracle for [`eigenvalues_qr`].
pub fn eigenvalues_via_roots(spec: &HamiltonianSpec) -> Result<EigenResult> {
    let p = char_poly(spec)?;
    let roots = find_roots(&p, 1e-15)?;
    let mut eigenvalues = roots.roots;
    sort_complex(&mut eigenvalues);
    Ok(EigenResult {
        eigenvalues,
        spec: spec.clone(),
        diagnostics: Diagnostics { method: Method::PolynomialRoots, iterations: roots.sweeps, deflations: 0 },
    })
}

/// Reduces the general chain with superdiagonal `s` and subdiagonal `r` to
/// unit superdiagonal form.
///
/// `s[k]` and `r[k]` are the two couplings between sites `k` and `k+1`; the
/// diagonal similarity `ψ_k → λ_kψ_k` leaves only their product, so
/// `r'[k] = r[k]·s[k]`.
pub fn gauge_reduce(s: &[Letter], r: &[Letter]) -> Result<Vec<Letter>> {
    if s.len() != r.len() {
        return Err(Error::InvalidArgument(format!("gauge needs equal lengths, got {} and {}", s.len(), r.len())));
    }
    s.iter()
        .zip(r)
        .enumerate()
        .map(|(k, (sk, rk))| {
            if sk.value().norm() == 0.0 {
                return Err(Error::SingularGauge { index: k });
            }
            Letter::new(rk.value() * sk.value())
        })
        .collect()
}

/// Same as [`gauge_reduce`] on raw values, allowing zero entries in `s` to be reported.
pub fn gauge_reduce_values(s: &[C64], r: &[C64]) -> Result<Vec<C64>> {
    if s.len() != r.len() {
        return Err(Error::InvalidArgument(format!("gauge needs equal lengths, got {} and {}", s.len(), r.len())));
    }
    if let Some(k) = s.iter().position(|x| x.norm() == 0.0) {
        return Err(Error::SingularGauge { index: k });
    }
    Ok(s.iter().zip(r).map(|(a, b)| a * b).collect())
}

/// Dense `(N+1) × (N+1)` matrix with superdiagonal `s` and subdiagonal `r`.
pub fn general_matrix(s: &[C64], r: &[C64]) -> DenseMatrix<C64> {
    assert_eq!(s.len(), r.len());
    let mut m = DenseMatrix::zeros(s.len() + 1);
    for k in 0..s.len() {
        m.set(k, k + 1, s[k]);
        m.set(k + 1, k, r[k]);
    }
    m
}
