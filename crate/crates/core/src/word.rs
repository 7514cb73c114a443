//! Words over the subdiagonal alphabet.
//!
//! A word `{w_1, …, w_L}` is one period of the subdiagonal `r_k`. The ±1
//! alphabet is the model of interest, but letters are complex so that the
//! stretching rule `r → u² r` (spectrum `E → u E`) stays expressible.
//!
//! Text forms: a binary word is a string over `+`/`-` (`"++-"`); any word
//! may also be written as `;`-separated complex letters (`"2+0i;-1+0i"`).
//! A paragraph is a comma-separated list of `word:count` items, e.g.
//! `"++-:16,+++:1,++-:16"`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::poly::{format_c64, parse_c64, to_gauss, Coeff, GaussInt};
use crate::{Error, Result, C64};

/// Largest length accepted by [`enumerate_words`].
pub const MAX_ENUMERATION_LENGTH: usize = 24;

/// Largest length for which [`CyclicInvariants`] carries the length-specific fields.
pub const MAX_INVARIANT_LENGTH: usize = 7;

/// A nonzero subdiagonal entry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Letter(C64);

impl Letter {
    pub const PLUS: Letter = Letter(C64::new(1.0, 0.0));
    pub const MINUS: Letter = Letter(C64::new(-1.0, 0.0));

    pub fn new(value: C64) -> Result<Self> {
        if value.is_zero() || !value.is_finite() {
            return Err(Error::InvalidArgument(format!("letter must be finite and nonzero, got {value}")));
        }
        Ok(Letter(value))
    }

    pub fn value(self) -> C64 {
        self.0
    }

    /// `Some(+1)` / `Some(-1)` for the binary letters.
    pub fn sign(self) -> Option<i8> {
        if self == Self::PLUS {
            Some(1)
        } else if self == Self::MINUS {
            Some(-1)
        } else {
            None
        }
    }

    /// Lexicographic letter order with `+` before `-`.
    fn order(&self, other: &Letter) -> Ordering {
        (-self.0.re).total_cmp(&-other.0.re).then((-self.0.im).total_cmp(&-other.0.im))
    }
}

/// A nonempty sequence of letters.
#[derive(Clone, PartialEq)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidArgument("a word needs at least one letter".into()));
        }
        Ok(Word { letters })
    }

    /// Builds a word from `+1` / `-1` values; any other value is rejected.
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        let letters = signs
            .iter()
            .map(|&s| match s {
                1 => Ok(Letter::PLUS),
                -1 => Ok(Letter::MINUS),
                _ => Err(Error::InvalidArgument(format!("sign must be +1 or -1, got {s}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(letters)
    }

    pub fn from_values(values: &[C64]) -> Result<Self> {
        Word::new(values.iter().map(|&v| Letter::new(v)).collect::<Result<_>>()?)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn values(&self) -> Vec<C64> {
        self.letters.iter().map(|l| l.0).collect()
    }

    pub fn is_binary(&self) -> bool {
        self.letters.iter().all(|l| l.sign().is_some())
    }

    /// Letters as exact Gaussian integers, when all of them are.
    pub fn gaussian_letters(&self) -> Option<Vec<GaussInt>> {
        self.letters.iter().map(|l| to_gauss(l.0)).collect()
    }

    pub fn sum(&self) -> C64 {
        self.letters.iter().map(|l| l.0).sum()
    }

    /// `Π w_j`, the determinant of the word's transfer matrix.
    pub fn product(&self) -> C64 {
        self.letters.iter().map(|l| l.0).product()
    }

    /// Cyclic shift by `k` to the left: `{w_{k+1}, …, w_L, w_1, …, w_k}`.
    pub fn rotate(&self, k: usize) -> Word {
        let mut letters = self.letters.clone();
        letters.rotate_left(k % self.len());
        Word { letters }
    }

    /// `w` repeated `n ≥ 1` times.
    pub fn power(&self, n: usize) -> Word {
        assert!(n >= 1, "word power must be at least 1");
        Word { letters: self.letters.repeat(n) }
    }

    /// Every letter multiplied by `factor`; `factor = u²` stretches the spectrum by `u`.
    pub fn scaled(&self, factor: C64) -> Result<Word> {
        Word::from_values(&self.letters.iter().map(|l| l.0 * factor).collect::<Vec<_>>())
    }

    /// Sign-flipped word `-w`; its spectrum is `i` times that of `w`.
    pub fn negated(&self) -> Word {
        Word { letters: self.letters.iter().map(|l| Letter(-l.0)).collect() }
    }

    fn cmp_letters(a: &[Letter], b: &[Letter]) -> Ordering {
        for (x, y) in a.iter().zip(b) {
            match x.order(y) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        a.len().cmp(&b.len())
    }

    /// Total lexicographic order (`+` before `-`).
    pub fn lex_cmp(&self, other: &Word) -> Ordering {
        Self::cmp_letters(&self.letters, &other.letters)
    }

    pub fn to_signs(&self) -> Option<Vec<i8>> {
        self.letters.iter().map(|l| l.sign()).collect()
    }

    pub fn cyclic_invariants(&self) -> CyclicInvariants<C64> {
        cyclic_invariants(&self.values())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(signs) = self.to_signs() {
            for s in signs {
                f.write_str(if s > 0 { "+" } else { "-" })?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.letters.iter().map(|l| format_c64(l.0)).collect();
            f.write_str(&parts.join(";"))
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() {
            return Err(Error::parse(s, "empty word"));
        }
        if t.contains(';') {
            let values = t.split(';').map(parse_c64).collect::<Result<Vec<_>>>()?;
            return Word::from_values(&values).map_err(|e| Error::parse(s, e.to_string()));
        }
        let letters = t
            .chars()
            .map(|c| match c {
                '+' => Ok(Letter::PLUS),
                '-' | '\u{2212}' => Ok(Letter::MINUS),
                other => Err(Error::parse(other.to_string(), format!("unexpected letter in word {t:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(letters)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign() {
            Some(1) => f.write_str("+"),
            Some(_) => f.write_str("-"),
            None => f.write_str(&format_c64(self.0)),
        }
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Iterator over all `2^L` binary words of length `L` in lexicographic order.
#[derive(Clone, Debug)]
pub struct WordIter {
    length: usize,
    next: u64,
    end: u64,
}

impl Iterator for WordIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.next >= self.end {
            return None;
        }
        let code = self.next;
        self.next += 1;
        let letters = (0..self.length)
            .map(|j| if code >> (self.length - 1 - j) & 1 == 0 { Letter::PLUS } else { Letter::MINUS })
            .collect();
        Some(Word { letters })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for WordIter {}

/// All binary words of length `length` (`+` before `-`).
pub fn enumerate_words(length: usize) -> Result<WordIter> {
    if !(1..=MAX_ENUMERATION_LENGTH).contains(&length) {
        return Err(Error::InvalidArgument(format!(
            "word length must be in 1..={MAX_ENUMERATION_LENGTH}, got {length}"
        )));
    }
    Ok(WordIter { length, next: 0, end: 1u64 << length })
}

/// The lexicographically least rotation (Booth's algorithm).
pub fn canonical_rotation(w: &Word) -> Word {
    w.rotate(least_rotation(w.letters()))
}

fn least_rotation(s: &[Letter]) -> usize {
    let n = s.len();
    let at = |i: usize| &s[i % n];
    let mut fail: Vec<isize> = vec![-1; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = at(j);
        let mut i = fail[j - k - 1];
        while i != -1 && sj.order(at(k + i as usize + 1)) != Ordering::Equal {
            if sj.order(at(k + i as usize + 1)) == Ordering::Less {
                k = j - i as usize - 1;
            }
            i = fail[i as usize];
        }
        if i == -1 && sj.order(at(k)) != Ordering::Equal {
            if sj.order(at(k)) == Ordering::Less {
                k = j;
            }
            fail[j - k] = -1;
        } else {
            fail[j - k] = i + 1;
        }
    }
    k % n
}

/// Smallest period `p` such that `w = u^{L/p}` for a word `u` of length `p`.
pub fn primitive_period(w: &Word) -> usize {
    let s = w.letters();
    let n = s.len();
    // Prefix function; the shortest period of the string is n - pi[n-1].
    let mut pi = vec![0usize; n];
    for i in 1..n {
        let mut k = pi[i - 1];
        while k > 0 && s[i] != s[k] {
            k = pi[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        pi[i] = k;
    }
    let p = n - pi[n - 1];
    if n.is_multiple_of(p) {
        p
    } else {
        n
    }
}

/// True iff `w` is not a power of a strictly shorter word.
pub fn is_primitive(w: &Word) -> bool {
    primitive_period(w) == w.len()
}

/// Canonical representatives of the binary necklaces of length `L` that are
/// aperiodic and contain both signs.
pub fn nontrivial_necklaces(length: usize) -> Result<Vec<Word>> {
    let mut out: Vec<Word> = enumerate_words(length)?
        .filter(|w| is_primitive(w) && canonical_rotation(w) == *w)
        .filter(|w| {
            let signs = w.to_signs().unwrap();
            signs.contains(&1) && signs.contains(&-1)
        })
        .collect();
    out.sort_by(|a, b| a.lex_cmp(b));
    Ok(out)
}

/// Rotation-invariant combinations of a word's letters that parametrize the
/// discriminant `Q_L`.
///
/// `s` and `p` exist for every length. The rest are present only for the
/// lengths whose closed form uses them: `d` (L = 2), `kappa` (L = 4..7),
/// `omega` (L = 4), `rho` (L = 6, 7), `delta` (L = 6). `d`, `omega` and
/// `delta` change sign under odd rotations; only their squares are invariant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CyclicInvariants<T> {
    pub length: usize,
    pub s: T,
    pub p: T,
    pub d: Option<T>,
    pub kappa: Option<T>,
    pub rho: Option<T>,
    pub delta: Option<T>,
    pub omega: Option<T>,
}

/// Sum over the `k`-element subsets of the cycle `1..=L` with no two cyclically
/// adjacent members.
fn independent_sum<T: Coeff>(w: &[T], k: usize) -> T {
    fn rec<T: Coeff>(w: &[T], k: usize, start: usize, first: usize, acc: T, chosen: usize, out: &mut T) {
        let n = w.len();
        if chosen == k {
            *out = *out + acc;
            return;
        }
        for j in start..n {
            // j adjacent to the first chosen index across the wrap.
            if chosen > 0 && first == 0 && j == n - 1 {
                continue;
            }
            let f = if chosen == 0 { j } else { first };
            rec(w, k, j + 2, f, acc * w[j], chosen + 1, out);
        }
    }
    let mut out = T::zero();
    rec(w, k, 0, 0, T::one(), 0, &mut out);
    out
}

/// Cyclic invariants of a letter sequence (works for exact and floating letters).
pub fn cyclic_invariants<T: Coeff>(w: &[T]) -> CyclicInvariants<T> {
    let length = w.len();
    let s = w.iter().fold(T::zero(), |a, &b| a + b);
    let p = w.iter().fold(T::one(), |a, &b| a * b);
    let mut inv = CyclicInvariants { length, s, p, d: None, kappa: None, rho: None, delta: None, omega: None };
    match length {
        2 => inv.d = Some(w[0] - w[1]),
        4 => {
            inv.kappa = Some(independent_sum(w, 2));
            inv.omega = Some(w[0] * w[2] - w[1] * w[3]);
        }
        5 => inv.kappa = Some(independent_sum(w, 2)),
        6 => {
            inv.kappa = Some(independent_sum(w, 2));
            inv.rho = Some(independent_sum(w, 3));
            inv.delta = Some(w[0] * w[2] * w[4] - w[1] * w[3] * w[5]);
        }
        7 => {
            inv.kappa = Some(independent_sum(w, 2));
            inv.rho = Some(independent_sum(w, 3));
        }
        _ => {}
    }
    inv
}

/// A run of `count ≥ 1` repetitions of one word.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub word: Word,
    pub count: usize,
}

/// Words strung together with repetition counts: `w_1^{n_1} w_2^{n_2} …`.
#[derive(Clone, Debug, PartialEq)]
pub struct Paragraph {
    segments: Vec<Segment>,
}

impl Paragraph {
    pub fn new(segments: Vec<(Word, usize)>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidArgument("a paragraph needs at least one segment".into()));
        }
        if let Some((w, _)) = segments.iter().find(|(_, n)| *n == 0) {
            return Err(Error::InvalidArgument(format!("repetition count of {w} must be >= 1")));
        }
        Ok(Paragraph { segments: segments.into_iter().map(|(word, count)| Segment { word, count }).collect() })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_len(&self) -> usize {
        self.segments.iter().map(|s| s.word.len() * s.count).sum()
    }

    /// The flat letter sequence.
    pub fn build(&self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(self.total_len());
        for seg in &self.segments {
            for _ in 0..seg.count {
                out.extend_from_slice(seg.word.letters());
            }
        }
        out
    }

    pub fn to_word(&self) -> Word {
        Word { letters: self.build() }
    }

    /// Distinct words in order of first appearance.
    pub fn distinct_words(&self) -> Vec<Word> {
        let mut out: Vec<Word> = Vec::new();
        for seg in &self.segments {
            if !out.contains(&seg.word) {
                out.push(seg.word.clone());
            }
        }
        out
    }
}

/// Flattens a paragraph into its letter sequence.
pub fn build_paragraph(p: &Paragraph) -> Vec<Letter> {
    p.build()
}

impl fmt::Display for Paragraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.segments.iter().map(|s| format!("{}:{}", s.word, s.count)).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Paragraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let segments = s
            .split(',')
            .map(|item| {
                let item = item.trim();
                let (w, n) = match item.rsplit_once(':') {
                    Some((w, n)) => (w, n.trim()),
                    None => (item, "1"),
                };
                let count: usize = n.parse().map_err(|_| Error::parse(n, "repetition count is not an integer"))?;
                Ok((w.parse::<Word>()?, count))
            })
            .collect::<Result<Vec<_>>>()?;
        Paragraph::new(segments).map_err(|e| Error::parse(s, e.to_string()))
    }
}

impl Serialize for Paragraph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
