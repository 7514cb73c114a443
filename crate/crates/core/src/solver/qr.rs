//! Eigenvalues of upper Hessenberg matrices by shifted QR iteration.
//!
//! Only eigenvalues are wanted, so each sweep touches just the active
//! (undeflated) diagonal block. Storage is dense row-major `n × n`.

use num_traits::Zero;
use serde::Serialize;

use crate::{Error, Result, C64};

/// Relative size below which a subdiagonal entry is treated as zero.
pub const DEFLATION_EPS: f64 = 1e-14;

/// Iteration budget per deflated eigenvalue (or pair).
pub const MAX_ITERATIONS_PER_EIGENVALUE: usize = 100;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct QrStats {
    pub iterations: usize,
    pub deflations: usize,
}

/// Row-major square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Copy + Zero> DenseMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix { n, data: vec![T::zero(); n * n] }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        DenseMatrix { n, data: rows.iter().flatten().copied().collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }
}

impl DenseMatrix<f64> {
    pub fn to_complex(&self) -> DenseMatrix<C64> {
        DenseMatrix { n: self.n, data: self.data.iter().map(|&x| C64::new(x, 0.0)).collect() }
    }
}

fn block_norm<T: Copy>(a: &[T], n: usize, abs: impl Fn(T) -> f64) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            s += abs(a[i * n + j]);
        }
    }
    s
}

/// Eigenvalues of a real upper Hessenberg matrix by Francis double-shift QR.
///
/// Complex eigenvalues come out in exactly conjugate pairs. The matrix is
/// overwritten.
pub fn real_hessenberg_eigenvalues(h: &mut DenseMatrix<f64>) -> Result<(Vec<C64>, QrStats)> {
    let n = h.n;
    let mut out = Vec::with_capacity(n);
    let mut stats = QrStats::default();
    if n == 0 {
        return Ok((out, stats));
    }
    let a = &mut h.data;
    macro_rules! at {
        ($i:expr, $j:expr) => {
            a[($i) * n + ($j)]
        };
    }
    let anorm = block_norm(a, n, f64::abs);
    let mut t = 0.0;
    let mut nn = n as isize - 1;
    while nn >= 0 {
        let mut its = 0;
        loop {
            let nnu = nn as usize;
            // Look for a negligible subdiagonal entry.
            let mut l = nnu;
            while l >= 1 {
                let mut s = at!(l - 1, l - 1).abs() + at!(l, l).abs();
                if s == 0.0 {
                    s = anorm;
                }
                if at!(l, l - 1).abs() <= DEFLATION_EPS * s {
                    at!(l, l - 1) = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = at!(nnu, nnu);
            if l == nnu {
                out.push(C64::new(x + t, 0.0));
                stats.deflations += 1;
                nn -= 1;
                break;
            }
            let mut y = at!(nnu - 1, nnu - 1);
            let mut w = at!(nnu, nnu - 1) * at!(nnu - 1, nnu);
            if l == nnu - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let zz = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    let zz = p + zz.copysign(p);
                    let e1 = x + zz;
                    let e2 = if zz != 0.0 { x - w / zz } else { e1 };
                    out.push(C64::new(e1, 0.0));
                    out.push(C64::new(e2, 0.0));
                } else {
                    out.push(C64::new(x + p, zz));
                    out.push(C64::new(x + p, -zz));
                }
                stats.deflations += 2;
                nn -= 2;
                break;
            }
            if its == MAX_ITERATIONS_PER_EIGENVALUE {
                return Err(Error::QrConvergence { block: nnu - l + 1, deflated: out });
            }
            if its == 10 || its == 20 || (its > 20 && its % 10 == 0) {
                // Exceptional shift.
                t += x;
                for i in 0..=nnu {
                    at!(i, i) -= x;
                }
                let s = at!(nnu, nnu - 1).abs() + at!(nnu - 1, nnu - 2).abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            stats.iterations += 1;

            // Find two consecutive small subdiagonal elements.
            let mut m = nnu - 2;
            let (mut p, mut q, mut r);
            loop {
                let zz = at!(m, m);
                let r0 = x - zz;
                let s0 = y - zz;
                p = (r0 * s0 - w) / at!(m + 1, m) + at!(m, m + 1);
                q = at!(m + 1, m + 1) - zz - r0 - s0;
                r = at!(m + 2, m + 1);
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = at!(m, m - 1).abs() * (q.abs() + r.abs());
                let v = p.abs() * (at!(m - 1, m - 1).abs() + zz.abs() + at!(m + 1, m + 1).abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nnu {
                at!(i, i - 2) = 0.0;
                if i != m + 2 {
                    at!(i, i - 3) = 0.0;
                }
            }
            // Double-shift QR step on rows/columns l..=nn.
            let mut xk = 0.0;
            for k in m..nnu {
                if k != m {
                    p = at!(k, k - 1);
                    q = at!(k + 1, k - 1);
                    r = if k != nnu - 1 { at!(k + 2, k - 1) } else { 0.0 };
                    xk = p.abs() + q.abs() + r.abs();
                    if xk != 0.0 {
                        p /= xk;
                        q /= xk;
                        r /= xk;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s == 0.0 {
                    continue;
                }
                if k == m {
                    if l != m {
                        at!(k, k - 1) = -at!(k, k - 1);
                    }
                } else {
                    at!(k, k - 1) = -s * xk;
                }
                p += s;
                let (hx, hy, hz) = (p / s, q / s, r / s);
                q /= p;
                r /= p;
                for j in k..=nnu {
                    let mut pp = at!(k, j) + q * at!(k + 1, j);
                    if k != nnu - 1 {
                        pp += r * at!(k + 2, j);
                        at!(k + 2, j) -= pp * hz;
                    }
                    at!(k + 1, j) -= pp * hy;
                    at!(k, j) -= pp * hx;
                }
                let mmin = nnu.min(k + 3);
                for i in l..=mmin {
                    let mut pp = hx * at!(i, k) + hy * at!(i, k + 1);
                    if k != nnu - 1 {
                        pp += hz * at!(i, k + 2);
                        at!(i, k + 2) -= pp * r;
                    }
                    at!(i, k + 1) -= pp * q;
                    at!(i, k) -= pp;
                }
            }
            if l >= nnu - 1 {
                break;
            }
        }
    }
    Ok((out, stats))
}

/// Rotation `[[c, s], [−s̄, c]]` with real `c` taking `(a, b)` to `(r, 0)`.
#[inline]
fn givens(a: C64, b: C64) -> (f64, C64) {
    if b.is_zero() {
        return (1.0, C64::zero());
    }
    let na = a.norm();
    let norm = na.hypot(b.norm());
    if na == 0.0 {
        return (0.0, b.conj() / b.norm());
    }
    (na / norm, (a / na) * b.conj() / norm)
}

fn eig2(a: C64, b: C64, c: C64, d: C64) -> (C64, C64) {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    (mean + disc, mean - disc)
}

/// Eigenvalues of a complex upper Hessenberg matrix by single-shift QR with
/// Wilkinson shifts. The matrix is overwritten.
pub fn complex_hessenberg_eigenvalues(h: &mut DenseMatrix<C64>) -> Result<(Vec<C64>, QrStats)> {
    let n = h.n;
    let mut out = Vec::with_capacity(n);
    let mut stats = QrStats::default();
    if n == 0 {
        return Ok((out, stats));
    }
    let a = &mut h.data;
    macro_rules! at {
        ($i:expr, $j:expr) => {
            a[($i) * n + ($j)]
        };
    }
    let anorm = block_norm(a, n, |c: C64| c.norm());
    let mut rot: Vec<(f64, C64)> = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut its = 0;
    loop {
        if hi == 0 {
            out.push(at!(0, 0));
            stats.deflations += 1;
            break;
        }
        let mut l = hi;
        while l >= 1 {
            let mut s = at!(l - 1, l - 1).norm() + at!(l, l).norm();
            if s == 0.0 {
                s = anorm;
            }
            if at!(l, l - 1).norm() <= DEFLATION_EPS * s {
                at!(l, l - 1) = C64::zero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            out.push(at!(hi, hi));
            stats.deflations += 1;
            hi -= 1;
            its = 0;
            continue;
        }
        if l + 1 == hi {
            let (e1, e2) = eig2(at!(l, l), at!(l, hi), at!(hi, l), at!(hi, hi));
            out.push(e1);
            out.push(e2);
            stats.deflations += 2;
            if l == 0 {
                break;
            }
            hi = l - 1;
            its = 0;
            continue;
        }
        if its == MAX_ITERATIONS_PER_EIGENVALUE {
            return Err(Error::QrConvergence { block: hi - l + 1, deflated: out });
        }
        its += 1;
        stats.iterations += 1;

        let d = at!(hi, hi);
        let mu = if its % 10 == 0 {
            let s = at!(hi, hi - 1).norm() + at!(hi - 1, hi - 2).norm();
            d + C64::new(0.75 * s, 0.25 * s)
        } else {
            let (e1, e2) = eig2(at!(hi - 1, hi - 1), at!(hi - 1, hi), at!(hi, hi - 1), d);
            if (e1 - d).norm() <= (e2 - d).norm() {
                e1
            } else {
                e2
            }
        };

        for k in l..=hi {
            at!(k, k) -= mu;
        }
        rot.clear();
        for k in l..hi {
            let (c, s) = givens(at!(k, k), at!(k + 1, k));
            for j in k..=hi {
                let x = at!(k, j);
                let y = at!(k + 1, j);
                at!(k, j) = x * c + s * y;
                at!(k + 1, j) = y * c - s.conj() * x;
            }
            rot.push((c, s));
        }
        for (off, &(c, s)) in rot.iter().enumerate() {
            let k = l + off;
            for i in l..=(k + 1).min(hi) {
                let x = at!(i, k);
                let y = at!(i, k + 1);
                at!(i, k) = x * c + y * s.conj();
                at!(i, k + 1) = y * c - x * s;
            }
        }
        for k in l..=hi {
            at!(k, k) += mu;
        }
    }
    Ok((out, stats))
}

/// Householder reduction of a general complex matrix to upper Hessenberg form.
pub fn reduce_to_hessenberg(m: &mut DenseMatrix<C64>) {
    let n = m.n;
    if n < 3 {
        return;
    }
    let mut v = vec![C64::zero(); n];
    for k in 0..n - 2 {
        let norm: f64 = (k + 1..n).map(|i| m.get(i, k).norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = m.get(k + 1, k);
        let phase = if x0.is_zero() { C64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        for i in k + 1..n {
            v[i] = m.get(i, k);
        }
        v[k + 1] -= alpha;
        let vnorm: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for vi in &mut v[k + 1..n] {
            *vi /= vnorm;
        }
        // A ← (I − 2vvᴴ) A
        for j in k..n {
            let dot: C64 = (k + 1..n).map(|i| v[i].conj() * m.get(i, j)).sum();
            for i in k + 1..n {
                let val = m.get(i, j) - v[i] * dot * 2.0;
                m.set(i, j, val);
            }
        }
        // A ← A (I − 2vvᴴ)
        for i in 0..n {
            let dot: C64 = (k + 1..n).map(|j| m.get(i, j) * v[j]).sum();
            for j in k + 1..n {
                let val = m.get(i, j) - dot * v[j].conj() * 2.0;
                m.set(i, j, val);
            }
        }
        for i in k + 2..n {
            m.set(i, k, C64::zero());
        }
    }
}

/// All eigenvalues of a general dense complex matrix.
pub fn dense_eigenvalues(m: &DenseMatrix<C64>) -> Result<Vec<C64>> {
    let mut h = m.clone();
    reduce_to_hessenberg(&mut h);
    complex_hessenberg_eigenvalues(&mut h).map(|(e, _)| e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::matched_max_distance;
    use crate::poly::{find_roots, CPoly};

    fn companion(coeffs: &[f64]) -> DenseMatrix<f64> {
        // Monic polynomial, ascending coefficients without the leading 1.
        let n = coeffs.len();
        let mut m = DenseMatrix::zeros(n);
        for j in 0..n {
            m.set(0, j, -coeffs[n - 1 - j]);
        }
        for i in 1..n {
            m.set(i, i - 1, 1.0);
        }
        m
    }

    #[test]
    fn real_companion_matches_roots() {
        let coeffs = [4.0, 0.0, 1.0, 0.0, -2.0, 0.0];
        let (e, _) = real_hessenberg_eigenvalues(&mut companion(&coeffs)).unwrap();
        let mut full: Vec<C64> = coeffs.iter().map(|&c| C64::new(c, 0.0)).collect();
        full.push(C64::new(1.0, 0.0));
        let r = find_roots(&CPoly::new(full), 1e-15).unwrap();
        assert!(matched_max_distance(&e, &r.roots) < 1e-12);
    }

    #[test]
    fn complex_path_agrees_with_real_path() {
        let coeffs = [1.0, -3.0, 0.5, 2.0, -1.0, 0.25, 3.0];
        let m = companion(&coeffs);
        let (er, _) = real_hessenberg_eigenvalues(&mut m.clone()).unwrap();
        let (ec, _) = complex_hessenberg_eigenvalues(&mut m.to_complex()).unwrap();
        assert!(matched_max_distance(&er, &ec) < 1e-10);
    }

    #[test]
    fn dense_general_matrix() {
        // Upper triangular after a similarity: eigenvalues are the diagonal.
        let d = [C64::new(1.0, 2.0), C64::new(-0.5, 0.0), C64::new(3.0, -1.0), C64::new(0.0, 0.7)];
        let mut t = DenseMatrix::zeros(4);
        for i in 0..4 {
            t.set(i, i, d[i]);
            for j in i + 1..4 {
                t.set(i, j, C64::new(0.3 * (i + j) as f64, -0.1 * j as f64));
            }
        }
        // S T S⁻¹ with S = I + E (E strictly lower, nilpotent), S⁻¹ = I − E + E² − E³.
        let mut s = DenseMatrix::<C64>::zeros(4);
        let mut e = DenseMatrix::<C64>::zeros(4);
        for i in 0..4 {
            s.set(i, i, C64::new(1.0, 0.0));
            for j in 0..i {
                let v = C64::new(0.2 * (i as f64 - j as f64), 0.1);
                s.set(i, j, v);
                e.set(i, j, v);
            }
        }
        let mul = |a: &DenseMatrix<C64>, b: &DenseMatrix<C64>| {
            let mut c = DenseMatrix::zeros(4);
            for i in 0..4 {
                for j in 0..4 {
                    c.set(i, j, (0..4).map(|k| a.get(i, k) * b.get(k, j)).sum());
                }
            }
            c
        };
        let e2 = mul(&e, &e);
        let e3 = mul(&e2, &e);
        let mut sinv = DenseMatrix::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                let id = if i == j { C64::new(1.0, 0.0) } else { C64::zero() };
                sinv.set(i, j, id - e.get(i, j) + e2.get(i, j) - e3.get(i, j));
            }
        }
        let a = mul(&mul(&s, &t), &sinv);
        let got = dense_eigenvalues(&a).unwrap();
        assert!(matched_max_distance(&got, &d) < 1e-12);
    }

    #[test]
    fn tiny_sizes() {
        let mut one = DenseMatrix::from_rows(&[vec![2.5]]);
        assert_eq!(real_hessenberg_eigenvalues(&mut one).unwrap().0, vec![C64::new(2.5, 0.0)]);
        let mut two = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]);
        let (e, _) = real_hessenberg_eigenvalues(&mut two).unwrap();
        assert!(matched_max_distance(&e, &[C64::i(), -C64::i()]) < 1e-15);
        assert!(dense_eigenvalues(&DenseMatrix::<C64>::zeros(0)).unwrap().is_empty());
    }
}
