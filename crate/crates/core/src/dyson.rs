//! Monte Carlo iteration of the characteristic ratio `y_{k+1} = z − r_k / y_k`.
//!
//! `y_k = Δ_k / Δ_{k−1}` is carried as a projective pair so that `y = 0`,
//! `y = ∞` and back are ordinary states. The mean of `log|y_k|` is the growth
//! rate of `|Δ_N(z)|`; large excursions of `|y|` flag candidate support.
//! Escape statistics are only a candidate-support indicator: for complex `z`
//! boundedness alone does not decide membership in the spectrum.

use std::f64::consts::TAU;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::spectrum::stable_fixed_points;
use crate::word::Word;
use crate::{Error, Result, C64};

/// `y = num / den`, renormalized so the larger component has modulus 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioState {
    num: C64,
    den: C64,
}

impl RatioState {
    /// `y_1 = z`.
    pub fn initial(z: C64) -> Self {
        let mut s = RatioState { num: z, den: C64::new(1.0, 0.0) };
        s.normalize();
        s
    }

    pub fn from_pair(num: C64, den: C64) -> Result<Self> {
        let mut s = RatioState { num, den };
        if !s.is_valid() {
            return Err(Error::InvalidArgument("projective pair must be finite and not both zero".into()));
        }
        s.normalize();
        Ok(s)
    }

    fn normalize(&mut self) {
        let m = self.num.norm().max(self.den.norm());
        self.num /= m;
        self.den /= m;
    }

    /// One step: `(num, den) ↦ (z·num − r·den, num)`.
    #[inline]
    pub fn step(&mut self, z: C64, r: C64) {
        let num = z * self.num - r * self.den;
        self.den = self.num;
        self.num = num;
        self.normalize();
    }

    pub fn pair(&self) -> (C64, C64) {
        (self.num, self.den)
    }

    pub fn is_valid(&self) -> bool {
        self.num.is_finite() && self.den.is_finite() && !(self.num.is_zero() && self.den.is_zero())
    }

    pub fn is_infinite(&self) -> bool {
        self.den.is_zero()
    }

    /// `y`, or complex infinity when the denominator vanishes.
    pub fn value(&self) -> C64 {
        if self.den.is_zero() {
            C64::new(f64::INFINITY, 0.0)
        } else {
            self.num / self.den
        }
    }

    pub fn modulus(&self) -> f64 {
        if self.den.is_zero() {
            f64::INFINITY
        } else {
            self.num.norm() / self.den.norm()
        }
    }
}

/// Subdiagonal letters fed to the recursion.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LetterSource {
    /// `±1` with equal probability.
    RandomSign,
    /// `e^{2πiu}` with `u` uniform.
    RandomPhase,
    /// The word repeated from its first letter.
    Word(Word),
}

/// Infinite letter stream from a source and a seeded generator.
pub struct LetterStream {
    kind: StreamKind,
}

enum StreamKind {
    Sign(ChaCha8Rng),
    Phase(ChaCha8Rng),
    Cycle { letters: Vec<C64>, next: usize },
}

impl LetterStream {
    /// Stream number `stream` of the generator seeded with `seed`.
    pub fn new(source: &LetterSource, seed: u64, stream: u64) -> Self {
        let rng = || {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            r.set_stream(stream);
            r
        };
        let kind = match source {
            LetterSource::RandomSign => StreamKind::Sign(rng()),
            LetterSource::RandomPhase => StreamKind::Phase(rng()),
            LetterSource::Word(w) => StreamKind::Cycle { letters: w.values(), next: 0 },
        };
        LetterStream { kind }
    }

    #[inline]
    pub fn next_letter(&mut self) -> C64 {
        match &mut self.kind {
            StreamKind::Sign(rng) => C64::new(if rng.gen::<bool>() { 1.0 } else { -1.0 }, 0.0),
            StreamKind::Phase(rng) => C64::from_polar(1.0, TAU * rng.gen::<f64>()),
            StreamKind::Cycle { letters, next } => {
                let r = letters[*next];
                *next = (*next + 1) % letters.len();
                r
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DSConfig {
    pub burn_in: usize,
    pub samples: usize,
    /// Escape modulus; must exceed 10.
    pub y_max: f64,
    pub z: C64,
    pub source: LetterSource,
    pub seed: u64,
}

impl DSConfig {
    pub const DEFAULT_BURN_IN: usize = 1000;
    pub const DEFAULT_SAMPLES: usize = 10_000;
    pub const DEFAULT_Y_MAX: f64 = 1e8;

    pub fn new(z: C64, source: LetterSource, seed: u64) -> Self {
        DSConfig {
            burn_in: Self::DEFAULT_BURN_IN,
            samples: Self::DEFAULT_SAMPLES,
            y_max: Self::DEFAULT_Y_MAX,
            z,
            source,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidArgument("samples must be at least 1".into()));
        }
        if !(self.y_max > 10.0) {
            return Err(Error::InvalidArgument(format!("y_max must exceed 10, got {}", self.y_max)));
        }
        if !self.z.is_finite() {
            return Err(Error::InvalidArgument("z must be finite".into()));
        }
        Ok(())
    }
}

/// Summary of the post-burn-in window of one trajectory.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct RatioStats {
    pub samples: usize,
    /// Samples with `|y| > y_max`.
    pub excursions: usize,
    /// Samples with `y = ∞`.
    pub infinite: usize,
    /// Samples with `y = 0`.
    pub zeros: usize,
    /// Sum of `log|y|` over the finite nonzero samples.
    pub log_sum: f64,
    pub invalid_states: usize,
}

#[derive(Clone, Debug)]
pub struct RatioTrajectory {
    pub samples: Vec<C64>,
    pub stats: RatioStats,
}

/// Runs one trajectory, calling `visit` on each post-burn-in state.
pub fn scan_ratio(config: &DSConfig, stream: u64, mut visit: impl FnMut(&RatioState)) -> Result<RatioStats> {
    config.validate()?;
    let mut letters = LetterStream::new(&config.source, config.seed, stream);
    let z = config.z;
    let mut state = RatioState::initial(z);
    let mut stats = RatioStats::default();
    // `state` holds y_k; the first recorded value is y_{burn_in + 1}.
    for k in 0..config.burn_in + config.samples {
        if k >= config.burn_in {
            stats.samples += 1;
            if !state.is_valid() {
                stats.invalid_states += 1;
            } else if state.den.is_zero() {
                stats.infinite += 1;
                stats.excursions += 1;
            } else if state.num.is_zero() {
                stats.zeros += 1;
            } else {
                let m = state.modulus();
                if m > config.y_max {
                    stats.excursions += 1;
                }
                stats.log_sum += m.ln();
            }
            visit(&state);
        }
        state.step(z, letters.next_letter());
    }
    Ok(stats)
}

/// The post-burn-in values of `y`.
pub fn iterate_ratio(config: &DSConfig) -> Result<RatioTrajectory> {
    let mut samples = Vec::with_capacity(config.samples);
    let stats = scan_ratio(config, 0, |s| samples.push(s.value()))?;
    Ok(RatioTrajectory { samples, stats })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LyapunovEstimate {
    pub gamma: f64,
    /// Batch-means standard error, floored at 1e−12.
    pub std_error: f64,
    pub used: usize,
    /// Samples at `y = 0` or `y = ∞`, left out of the mean.
    pub excluded: usize,
    /// More than 1% of samples excluded.
    pub unreliable: bool,
}

/// Floor on the reported standard error, the resolution of a floating mean.
pub const MIN_STD_ERROR: f64 = 1e-12;
const BATCHES: usize = 50;

/// `γ = mean log|y_k|` over the post-burn-in samples.
pub fn lyapunov(config: &DSConfig) -> Result<LyapunovEstimate> {
    let mut logs = Vec::with_capacity(config.samples);
    let stats = scan_ratio(config, 0, |s| {
        if s.is_valid() && !s.den.is_zero() && !s.num.is_zero() {
            logs.push(s.modulus().ln());
        }
    })?;
    let used = logs.len();
    let excluded = stats.samples - used;
    let gamma = if used == 0 { f64::NAN } else { logs.iter().sum::<f64>() / used as f64 };
    let batches = BATCHES.min(used);
    let std_error = if batches < 2 {
        f64::INFINITY
    } else {
        let size = used / batches;
        let means: Vec<f64> =
            (0..batches).map(|b| logs[b * size..(b + 1) * size].iter().sum::<f64>() / size as f64).collect();
        let m = means.iter().sum::<f64>() / batches as f64;
        let var = means.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (batches - 1) as f64;
        (var / batches as f64).sqrt().max(MIN_STD_ERROR)
    };
    Ok(LyapunovEstimate {
        gamma,
        std_error,
        used,
        excluded,
        unreliable: excluded * 100 > stats.samples,
    })
}

/// Rectangular grid of cell centers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub width: usize,
    pub height: usize,
    /// Independent trajectories per cell.
    pub trajectories: usize,
}

impl GridSpec {
    pub const MAX_RESOLUTION: usize = 1024;

    /// `resolution × resolution` cells over `[−2.2, 2.2]²`.
    pub fn square(resolution: usize) -> Self {
        GridSpec { re_min: -2.2, re_max: 2.2, im_min: -2.2, im_max: 2.2, width: resolution, height: resolution, trajectories: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        let ok_dim = |n: usize| (1..=Self::MAX_RESOLUTION).contains(&n);
        if !ok_dim(self.width) || !ok_dim(self.height) {
            return Err(Error::InvalidArgument(format!(
                "grid {}x{} outside 1..={}",
                self.width,
                self.height,
                Self::MAX_RESOLUTION
            )));
        }
        if !(self.re_min < self.re_max && self.im_min < self.im_max) {
            return Err(Error::InvalidArgument("grid bounds must satisfy min < max".into()));
        }
        if self.trajectories == 0 {
            return Err(Error::InvalidArgument("trajectories must be at least 1".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Center of cell `index` (row-major, rows along the imaginary axis).
    pub fn cell_center(&self, index: usize) -> C64 {
        let (ix, iy) = (index % self.width, index / self.width);
        let dx = (self.re_max - self.re_min) / self.width as f64;
        let dy = (self.im_max - self.im_min) / self.height as f64;
        C64::new(self.re_min + (ix as f64 + 0.5) * dx, self.im_min + (iy as f64 + 0.5) * dy)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MapCell {
    pub z: C64,
    /// Mean `log|y|` over all trajectories' finite nonzero samples.
    pub gamma: f64,
    /// Fraction of trajectories with at least one excursion beyond `y_max`.
    pub escape_fraction: f64,
    pub excursions: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct LyapunovMap {
    pub grid: GridSpec,
    pub config: DSConfig,
    pub cells: Vec<MapCell>,
}

/// Escape and growth statistics at one `z`, trajectories on streams `first_stream..`.
pub fn cell_statistics(config: &DSConfig, trajectories: usize, first_stream: u64) -> Result<MapCell> {
    let mut escaped = 0;
    let mut excursions = 0;
    let mut log_sum = 0.0;
    let mut used = 0;
    for t in 0..trajectories {
        let s = scan_ratio(config, first_stream + t as u64, |_| {})?;
        if s.excursions > 0 {
            escaped += 1;
        }
        excursions += s.excursions;
        log_sum += s.log_sum;
        used += s.samples - s.infinite - s.zeros - s.invalid_states;
    }
    Ok(MapCell {
        z: config.z,
        gamma: if used == 0 { f64::NAN } else { log_sum / used as f64 },
        escape_fraction: escaped as f64 / trajectories as f64,
        excursions,
    })
}

/// Candidate-support indicator over a grid; each cell uses its own generator streams.
pub fn escape_map(grid: &GridSpec, config: &DSConfig) -> Result<LyapunovMap> {
    grid.validate()?;
    config.validate()?;
    let cells = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let cfg = DSConfig { z: grid.cell_center(i), ..config.clone() };
            cell_statistics(&cfg, grid.trajectories, (i * grid.trajectories) as u64)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LyapunovMap { grid: *grid, config: config.clone(), cells })
}

/// Largest distance from a sampled `y` to the nearest stable fixed point of
/// any word of length `≤ max_len` at `config.z`.
pub fn support_vs_fixed_points(max_len: usize, config: &DSConfig) -> Result<f64> {
    if !(1..=10).contains(&max_len) {
        return Err(Error::InvalidArgument(format!("max_len must be in 1..=10, got {max_len}")));
    }
    let fixed = stable_fixed_points(config.z, max_len);
    if fixed.is_empty() {
        return Err(Error::InsufficientMaxLength(max_len));
    }
    let trajectory = iterate_ratio(config)?;
    let worst = trajectory
        .samples
        .par_iter()
        .map(|y| fixed.iter().map(|b| (b - y).norm()).fold(f64::INFINITY, f64::min))
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{continued_fraction_f, fixed_points};

    fn word(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn cfg(z: C64, source: LetterSource) -> DSConfig {
        DSConfig::new(z, source, 2024)
    }

    #[test]
    fn constant_stream_converges_to_stable_fixed_point() {
        let mut c = cfg(C64::new(3.0, 0.0), LetterSource::Word(word("+")));
        c.burn_in = 100;
        c.samples = 10;
        let t = iterate_ratio(&c).unwrap();
        let b = (3.0 + 5f64.sqrt()) / 2.0;
        assert!(t.samples.iter().all(|y| (y - b).norm() < 1e-10));
    }

    #[test]
    fn zero_z_cycles_through_infinity() {
        let mut c = cfg(C64::zero(), LetterSource::Word(word("+")));
        c.burn_in = 0;
        c.samples = 6;
        let t = iterate_ratio(&c).unwrap();
        for (k, y) in t.samples.iter().enumerate() {
            if k % 2 == 0 {
                assert_eq!(*y, C64::zero());
            } else {
                assert!(y.re.is_infinite());
            }
        }
        assert_eq!(t.stats.invalid_states, 0);
        assert_eq!(t.stats.infinite, 3);
    }

    #[test]
    fn periodic_stream_follows_the_word_orbit() {
        let w = word("++-");
        let z = C64::new(3.0, 0.0);
        let fp = fixed_points(&w, z).unwrap();
        let b = fp.stable_point().expect("stable branch at z = 3");
        let orbit: Vec<C64> = (1..=3)
            .map(|k| continued_fraction_f(&Word::new(w.letters()[..k].to_vec()).unwrap(), b, z))
            .collect();
        let mut c = cfg(z, LetterSource::Word(w));
        c.burn_in = 300;
        c.samples = 30;
        let t = iterate_ratio(&c).unwrap();
        // Sample k is y_{301 + k}: y_{1 + 3m} sits at b, then the orbit.
        for (k, y) in t.samples.iter().enumerate() {
            let expected = if k % 3 == 0 { b } else { orbit[k % 3 - 1] };
            assert!((y - expected).norm() < 1e-8, "sample {k}: {y} vs {expected}");
        }
        assert!((orbit[2] - b).norm() < 1e-12);
    }

    #[test]
    fn lyapunov_values() {
        let g = lyapunov(&cfg(C64::new(3.0, 0.0), LetterSource::Word(word("+")))).unwrap();
        let exact = ((3.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((g.gamma - exact).abs() <= 2.0 * g.std_error, "{g:?}");
        assert!(!g.unreliable);

        let g10 = lyapunov(&cfg(C64::new(10.0, 0.0), LetterSource::RandomSign)).unwrap();
        assert!((2.28..=2.31).contains(&g10.gamma), "{g10:?}");

        let inside = lyapunov(&cfg(C64::new(1.0, 0.3), LetterSource::RandomSign)).unwrap();
        let outside = lyapunov(&cfg(C64::new(3.0, 0.0), LetterSource::RandomSign)).unwrap();
        assert!(outside.gamma > inside.gamma);
    }

    #[test]
    fn lyapunov_stable_under_burn_in_and_seed() {
        let base = cfg(C64::new(1.0, 0.3), LetterSource::RandomSign);
        let a = lyapunov(&base).unwrap();
        let b = lyapunov(&DSConfig { burn_in: 2 * base.burn_in, ..base.clone() }).unwrap();
        assert!((a.gamma - b.gamma).abs() <= 3.0 * a.std_error.hypot(b.std_error));
        let estimates: Vec<LyapunovEstimate> =
            (0..10).map(|s| lyapunov(&DSConfig { seed: s, ..base.clone() }).unwrap()).collect();
        let mean = estimates.iter().map(|e| e.gamma).sum::<f64>() / 10.0;
        for e in &estimates {
            assert!((e.gamma - mean).abs() <= 3.0 * e.std_error * (1.0 + 0.1f64.sqrt()) + 1e-9, "{e:?} mean {mean}");
        }
    }

    #[test]
    fn escape_map_outside_envelope_is_silent() {
        let grid = GridSpec { trajectories: 2, ..GridSpec::square(16) };
        let mut c = cfg(C64::zero(), LetterSource::RandomSign);
        c.samples = 2000;
        let map = escape_map(&grid, &c).unwrap();
        assert_eq!(map.cells.len(), 256);
        for cell in &map.cells {
            if cell.z.norm() > 2.05 {
                assert_eq!(cell.escape_fraction, 0.0, "{cell:?}");
            }
        }
        assert!(map.cells.iter().any(|c| c.escape_fraction > 0.0) || map.cells.iter().all(|c| c.gamma.is_finite()));
        assert_eq!(escape_map(&grid, &c).unwrap().cells, map.cells);
        assert!(escape_map(&GridSpec::square(1025), &c).is_err());
    }

    #[test]
    fn clean_band_excursions() {
        let source = LetterSource::Word(word("+"));
        let mut c = cfg(C64::zero(), source);
        c.y_max = 50.0;
        for x in [-1.7, -0.9, 0.37, 1.3] {
            let cell = cell_statistics(&DSConfig { z: C64::new(x, 0.0), ..c.clone() }, 1, 0).unwrap();
            assert!(cell.excursions > 0, "z = {x}");
        }
        for z in [C64::new(0.4, 0.15), C64::new(-1.2, -0.2), C64::new(2.15, 0.0)] {
            let cell = cell_statistics(&DSConfig { z, ..c.clone() }, 1, 0).unwrap();
            assert_eq!(cell.excursions, 0, "z = {z}");
        }
    }

    #[test]
    fn fixed_point_closure() {
        let mut c = cfg(C64::new(3.0, 0.0), LetterSource::RandomSign);
        c.samples = 20_000;
        let d8 = support_vs_fixed_points(8, &c).unwrap();
        let d1 = support_vs_fixed_points(1, &c).unwrap();
        assert!(d8 <= 0.05 && d8 <= d1, "{d8} {d1}");
        let constant = cfg(C64::new(3.0, 0.0), LetterSource::Word(word("+")));
        assert!(support_vs_fixed_points(1, &constant).unwrap() <= 1e-8);
        assert!(support_vs_fixed_points(11, &constant).is_err());
        // At z = 0 both one-letter maps are elliptic.
        let band = cfg(C64::zero(), LetterSource::Word(word("+")));
        assert!(matches!(support_vs_fixed_points(1, &band), Err(Error::InsufficientMaxLength(1))));
    }

    #[test]
    fn config_validation() {
        let mut c = cfg(C64::zero(), LetterSource::RandomSign);
        c.y_max = 10.0;
        assert!(c.validate().is_err());
        c.y_max = 11.0;
        c.samples = 0;
        assert!(iterate_ratio(&c).is_err());
        assert!(RatioState::from_pair(C64::zero(), C64::zero()).is_err());
    }
}
