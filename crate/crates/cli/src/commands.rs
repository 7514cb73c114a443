//! One function per subcommand.

use std::path::Path;

use fzspec_core::dyson::{escape_map, DSConfig, GridSpec, LetterSource};
use fzspec_core::poly::{find_roots, CPoly};
use fzspec_core::solver::{eigenvalues_qr, Diagnostics, HamiltonianSpec, Source};
use fzspec_core::spectrum::{
    bloch_curve, pqr, q_closed_form_word, support_union, transfer_polynomials, CurveGap, IsolatedPoint, WordSpectrum,
};
use fzspec_core::word::{canonical_rotation, enumerate_words, is_primitive, nontrivial_necklaces, Paragraph, Word};
use fzspec_core::{Error as CoreError, C64};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{EnumerateArgs, EscapeArgs, Model, OverlayArgs, PlotArgs, QpolyArgs, RandomArgs, SentenceArgs, WordArgs};
use crate::error::{CliError, CliResult};
use crate::output::{num, read_points, to_json, with_suffix, write_file, write_stdout, Emission, Table};
use crate::svg::{render_heatmap, render_scatter, Layer, PlotSpec, Style, Viewport};

const ROOT_TOL: f64 = 1e-14;
/// Beyond this length coefficient-form curve tracing loses accuracy.
const LONG_WORD: usize = 30;

fn parse_word(s: &str) -> CliResult<Word> {
    Ok(s.parse::<Word>()?)
}

fn viewport(s: Option<&str>) -> CliResult<Viewport> {
    s.map_or(Ok(Viewport::default()), Viewport::parse)
}

fn coeffs(p: &CPoly) -> Vec<C64> {
    p.coeffs().to_vec()
}

fn roots(p: &CPoly) -> CliResult<Vec<C64>> {
    if p.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    Ok(find_roots(p, ROOT_TOL)?.roots)
}

/// Renders a scatter plot, reporting clamped points on stderr.
fn plot(title: String, layers: Vec<Layer>, args: &PlotArgs) -> CliResult<String> {
    let spec = PlotSpec { title, layers, viewport: viewport(args.viewport.as_deref())?, width: args.size, height: args.size };
    let r = render_scatter(&spec)?;
    if r.clamped > 0 {
        eprintln!("fzspec: {} points outside the viewport were clamped to its border", r.clamped);
    }
    Ok(r.svg)
}

pub fn words_enumerate(args: &EnumerateArgs) -> CliResult<()> {
    let words: Vec<Word> = if args.necklaces {
        nontrivial_necklaces(args.length)?
    } else {
        enumerate_words(args.length)?.collect()
    };
    let mut table = Table::new(&["word", "length", "primitive", "canonical"]);
    for w in &words {
        table.push(vec![w.to_string(), w.len().to_string(), is_primitive(w).to_string(), canonical_rotation(w).to_string()]);
    }

    #[derive(Serialize)]
    struct Meta<'a> {
        length: usize,
        necklaces: bool,
        count: usize,
        words: &'a [Word],
    }
    let json = to_json(&Meta { length: args.length, necklaces: args.necklaces, count: words.len(), words: &words })?;
    Emission { table, json, svg: None }.emit(&args.output, None)
}

pub fn qpoly(args: &QpolyArgs) -> CliResult<()> {
    let w = parse_word(&args.word)?;
    let t = transfer_polynomials(&w);
    let pqr = pqr(&w);
    let closed = match q_closed_form_word(&w) {
        Ok(q) => Some(q),
        Err(CoreError::UnsupportedLength(_)) => None,
        Err(e) => return Err(e.into()),
    };

    let mut table = Table::new(&["poly", "power", "re", "im"]);
    for (name, p) in [("P", &pqr.p), ("Q", &pqr.q), ("R", &pqr.r), ("trace", &t.trace)] {
        for (k, c) in p.coeffs().iter().enumerate() {
            table.push(vec![name.into(), k.to_string(), num(c.re), num(c.im)]);
        }
    }

    #[derive(Serialize)]
    struct Meta<'a> {
        word: &'a Word,
        length: usize,
        det: C64,
        p: Vec<C64>,
        q: Vec<C64>,
        r: Vec<C64>,
        trace: Vec<C64>,
        /// Roots of Q.
        endpoints: Vec<C64>,
        /// Roots of R.
        poles: Vec<C64>,
        closed_form_q: Option<Vec<C64>>,
        closed_form_agrees: Option<bool>,
    }
    let meta = Meta {
        word: &w,
        length: w.len(),
        det: t.det,
        p: coeffs(&pqr.p),
        q: coeffs(&pqr.q),
        r: coeffs(&pqr.r),
        trace: coeffs(&t.trace),
        endpoints: roots(&pqr.q)?,
        poles: roots(&pqr.r)?,
        closed_form_agrees: closed.as_ref().map(|c| *c == pqr.q),
        closed_form_q: closed.as_ref().map(coeffs),
    };
    Emission { table, json: to_json(&meta)?, svg: None }.emit(&args.output, None)
}

fn curve_table(spec: &WordSpectrum) -> Table {
    let mut table = Table::new(&["re", "im", "theta", "word", "branch"]);
    let labels: Vec<String> = spec.words.iter().map(Word::to_string).collect();
    for c in &spec.curves {
        for p in &c.points {
            table.push(vec![num(p.z.re), num(p.z.im), num(p.theta), labels[c.source].clone(), c.branch.to_string()]);
        }
    }
    table
}

fn spectrum_layers(spec: &WordSpectrum) -> Vec<Layer> {
    let layer = |name: &str, style, points: Vec<C64>| Layer { name: name.into(), style, points };
    vec![
        layer("curves", Style::Curve, spec.curve_points().map(|p| p.z).collect()),
        layer("endpoints", Style::Endpoints, spec.endpoints.iter().map(|p| p.z).collect()),
        layer("poles", Style::Poles, spec.poles.iter().map(|p| p.z).collect()),
        layer("isolated", Style::Isolated, spec.isolated_points.iter().map(|p| p.z).collect()),
    ]
}

#[derive(Serialize)]
struct SpectrumMeta<'a> {
    words: &'a [Word],
    theta_steps: usize,
    points: usize,
    endpoints: Vec<(usize, C64)>,
    poles: Vec<(usize, C64)>,
    isolated: &'a [IsolatedPoint],
    marginal: Vec<(usize, C64)>,
    gaps: &'a [CurveGap],
}

impl<'a> SpectrumMeta<'a> {
    fn new(spec: &'a WordSpectrum) -> Self {
        let tagged = |v: &[fzspec_core::spectrum::TaggedPoint]| v.iter().map(|p| (p.source, p.z)).collect();
        SpectrumMeta {
            words: &spec.words,
            theta_steps: spec.theta_steps,
            points: spec.curve_points().count(),
            endpoints: tagged(&spec.endpoints),
            poles: tagged(&spec.poles),
            isolated: &spec.isolated_points,
            marginal: tagged(&spec.marginal),
            gaps: &spec.gaps,
        }
    }
}

fn warn_long(w: &Word) {
    if w.len() > LONG_WORD {
        eprintln!("fzspec: word {w} has {} letters; coefficient-form curves may be inaccurate", w.len());
    }
}

pub fn spectrum_word(args: &WordArgs) -> CliResult<()> {
    let w = parse_word(&args.word)?;
    warn_long(&w);
    let spec = bloch_curve(&w, args.theta_steps)?;
    let t = transfer_polynomials(&w);
    let pqr = pqr(&w);

    #[derive(Serialize)]
    struct Meta<'a> {
        word: &'a Word,
        length: usize,
        det: C64,
        p: Vec<C64>,
        q: Vec<C64>,
        r: Vec<C64>,
        #[serde(flatten)]
        spectrum: SpectrumMeta<'a>,
    }
    let meta = Meta {
        word: &w,
        length: w.len(),
        det: t.det,
        p: coeffs(&pqr.p),
        q: coeffs(&pqr.q),
        r: coeffs(&pqr.r),
        spectrum: SpectrumMeta::new(&spec),
    };
    let render = || plot(format!("spectrum of {w}"), spectrum_layers(&spec), &args.plot);
    Emission { table: curve_table(&spec), json: to_json(&meta)?, svg: Some(&render) }
        .emit(&args.output, args.plot.svg.as_deref())
}

pub fn spectrum_sentence(args: &SentenceArgs) -> CliResult<()> {
    let paragraph: Paragraph = args.paragraph.parse()?;
    let words = paragraph.distinct_words();
    words.iter().for_each(warn_long);
    let parts = words.iter().map(|w| bloch_curve(w, args.theta_steps)).collect::<Result<Vec<_>, _>>()?;
    let spec = support_union(&parts)?;

    #[derive(Serialize)]
    struct Meta<'a> {
        paragraph: &'a Paragraph,
        #[serde(flatten)]
        spectrum: SpectrumMeta<'a>,
    }
    let meta = Meta { paragraph: &paragraph, spectrum: SpectrumMeta::new(&spec) };
    let render = || plot(format!("spectrum of {paragraph}"), spectrum_layers(&spec), &args.plot);
    Emission { table: curve_table(&spec), json: to_json(&meta)?, svg: Some(&render) }
        .emit(&args.output, args.plot.svg.as_deref())
}

pub fn spectrum_random(args: &RandomArgs) -> CliResult<()> {
    if args.realizations == 0 {
        return Err(CliError::usage("--realizations must be at least 1"));
    }
    let seeds: Vec<u64> = (0..args.realizations as u64)
        .map(|k| args.seed.checked_add(k).ok_or_else(|| CliError::usage("seed range overflows u64")))
        .collect::<CliResult<_>>()?;
    let source_for = |seed: u64| -> CliResult<Source> {
        Ok(match (args.model, &args.word, &args.paragraph) {
            (Some(Model::A), _, _) => Source::RandomSign { seed },
            (Some(Model::B), _, _) => Source::RandomPhase { seed },
            (None, Some(w), _) => Source::Periodic(parse_word(w)?),
            (None, None, Some(p)) => Source::Paragraph(p.parse()?),
            (None, None, None) => unreachable!("clap requires a letter source"),
        })
    };
    if args.model.is_none() && args.realizations > 1 {
        return Err(CliError::usage("--realizations above 1 needs a random --model"));
    }
    let specs = seeds
        .iter()
        .map(|&s| HamiltonianSpec::new(args.n, source_for(s)?).map_err(CliError::from))
        .collect::<CliResult<Vec<_>>>()?;
    let results = specs.par_iter().map(eigenvalues_qr).collect::<Result<Vec<_>, _>>()?;

    let mut table = Table::new(&["re", "im", "seed", "n", "source"]);
    for r in &results {
        let seed = r.spec.source.seed().map_or(String::new(), |s| s.to_string());
        let label = r.spec.source.label();
        for z in &r.eigenvalues {
            table.push(vec![num(z.re), num(z.im), seed.clone(), r.spec.n.to_string(), label.clone()]);
        }
    }

    #[derive(Serialize)]
    struct Realization {
        seed: Option<u64>,
        eigenvalues: usize,
        max_modulus: f64,
        diagnostics: Diagnostics,
    }
    #[derive(Serialize)]
    struct Meta {
        source: String,
        n: usize,
        matrix_size: usize,
        realizations: Vec<Realization>,
        rows: usize,
    }
    let meta = Meta {
        source: results[0].spec.source.label(),
        n: args.n,
        matrix_size: args.n + 1,
        realizations: results
            .iter()
            .map(|r| Realization {
                seed: r.spec.source.seed(),
                eigenvalues: r.eigenvalues.len(),
                max_modulus: r.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max),
                diagnostics: r.diagnostics,
            })
            .collect(),
        rows: table.len(),
    };
    let render = || {
        let points = results.iter().flat_map(|r| r.eigenvalues.iter().copied()).collect();
        let title = format!("eigenvalues, {}, N+1 = {}", meta.source, args.n + 1);
        plot(title, vec![Layer { name: "eigenvalues".into(), style: Style::Cloud, points }], &args.plot)
    };
    Emission { table, json: to_json(&meta)?, svg: Some(&render) }.emit(&args.output, args.plot.svg.as_deref())
}

pub fn escape(args: &EscapeArgs) -> CliResult<()> {
    let b = Viewport::parse(&args.bounds)?;
    let grid = GridSpec {
        re_min: b.re_min,
        re_max: b.re_max,
        im_min: b.im_min,
        im_max: b.im_max,
        width: args.resolution,
        height: args.resolution,
        trajectories: args.trajectories,
    };
    if args.resolution > GridSpec::MAX_RESOLUTION {
        return Err(CoreError::SizeCap { size: args.resolution, cap: GridSpec::MAX_RESOLUTION }.into());
    }
    let source = match (&args.word, args.model) {
        (Some(w), _) => LetterSource::Word(parse_word(w)?),
        (None, Some(Model::B)) => LetterSource::RandomPhase,
        (None, _) => LetterSource::RandomSign,
    };
    let config = DSConfig {
        burn_in: args.burn_in,
        samples: args.samples,
        y_max: args.y_max,
        ..DSConfig::new(C64::new(0.0, 0.0), source, args.seed)
    };
    let map = escape_map(&grid, &config)?;

    let mut table = Table::new(&["re", "im", "gamma", "escape_fraction"]);
    for c in &map.cells {
        table.push(vec![num(c.z.re), num(c.z.im), num(c.gamma), num(c.escape_fraction)]);
    }

    #[derive(Serialize)]
    struct Meta<'a> {
        grid: &'a GridSpec,
        burn_in: usize,
        samples: usize,
        y_max: f64,
        source: &'a LetterSource,
        seed: u64,
        cells: usize,
        hot_cells: usize,
    }
    let meta = Meta {
        grid: &map.grid,
        burn_in: config.burn_in,
        samples: config.samples,
        y_max: config.y_max,
        source: &config.source,
        seed: config.seed,
        cells: map.cells.len(),
        hot_cells: map.cells.iter().filter(|c| c.escape_fraction > 0.0).count(),
    };
    let render = || {
        let values: Vec<f64> = map.cells.iter().map(|c| c.escape_fraction).collect();
        render_heatmap("escape map", grid.width, grid.height, &values, args.size)
    };
    let emission = Emission { table, json: to_json(&meta)?, svg: Some(&render) };
    emission.emit(&args.output, args.svg.as_deref())?;
    // The heat map is part of the map's file set.
    if let (Some(prefix), false) = (&args.output.out, args.output.format == crate::args::Format::Svg) {
        write_file(&with_suffix(prefix, "svg"), &render()?)?;
    }
    Ok(())
}

fn parse_layer(spec: &str) -> CliResult<Layer> {
    let (style, path) = spec
        .split_once('=')
        .ok_or_else(|| CliError::usage(format!("layer {spec:?} is not STYLE=PATH")))?;
    let style = Style::parse(style.trim())?;
    let path = Path::new(path);
    let name = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
    Ok(Layer { name, style, points: read_points(path)? })
}

pub fn overlay(args: &OverlayArgs) -> CliResult<()> {
    let layers = args.layers.iter().map(|s| parse_layer(s)).collect::<CliResult<Vec<_>>>()?;
    let spec = PlotSpec {
        title: args.title.clone(),
        layers,
        viewport: viewport(args.viewport.as_deref())?,
        width: args.size,
        height: args.size,
    };
    let r = render_scatter(&spec)?;
    if r.clamped > 0 {
        eprintln!("fzspec: {} points outside the viewport were clamped to its border", r.clamped);
    }
    match (&args.svg, &args.out) {
        (Some(path), _) => write_file(path, &r.svg)?,
        (None, Some(prefix)) => write_file(&with_suffix(prefix, "svg"), &r.svg)?,
        (None, None) => write_stdout(&r.svg)?,
    }
    if let (Some(_), Some(prefix)) = (&args.svg, &args.out) {
        write_file(&with_suffix(prefix, "svg"), &r.svg)?;
    }
    Ok(())
}
