//! Command-line grammar.

use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "fzspec", version, about = "Spectra of random-hopping tridiagonal matrices")]
pub struct Cli {
    /// key=value file supplying defaults for any long flag.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Worker threads for parallel sections.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Binary word listings.
    Words {
        #[command(subcommand)]
        cmd: WordsCmd,
    },
    /// Transfer polynomials P, Q, R and the trace of a word.
    Qpoly(QpolyArgs),
    /// Word spectra and finite-matrix eigenvalues.
    Spectrum {
        #[command(subcommand)]
        cmd: SpectrumCmd,
    },
    /// Monte Carlo escape map of the characteristic ratio.
    EscapeMap(EscapeArgs),
    /// Layered SVG scatter of CSV point files.
    Overlay(OverlayArgs),
}

#[derive(Debug, Subcommand)]
pub enum WordsCmd {
    /// All words of a length, or one representative per aperiodic mixed necklace.
    Enumerate(EnumerateArgs),
}

#[derive(Debug, Subcommand)]
pub enum SpectrumCmd {
    /// Bloch curves of one periodic word.
    Word(WordArgs),
    /// Union of the Bloch curves of a paragraph's words.
    Sentence(SentenceArgs),
    /// Eigenvalues of finite matrices.
    Random(RandomArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    /// ±1 letters.
    #[value(name = "A", alias = "a")]
    A,
    /// Unit-modulus random phases.
    #[value(name = "B", alias = "b")]
    B,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write PREFIX.csv and PREFIX.json (and PREFIX.svg with --format svg).
    #[arg(long, value_name = "PREFIX")]
    pub out: Option<PathBuf>,

    /// Stream written to stdout when --out is absent.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub length: usize,

    #[arg(long)]
    pub necklaces: bool,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct QpolyArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub word: String,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Also write an SVG plot here.
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,

    /// re_min,re_max,im_min,im_max
    #[arg(long, allow_hyphen_values = true)]
    pub viewport: Option<String>,

    /// SVG width and height in pixels.
    #[arg(long, default_value_t = 800)]
    pub size: u32,
}

#[derive(Debug, Args)]
pub struct WordArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub word: String,

    #[arg(long, default_value_t = 2048)]
    pub theta_steps: usize,

    #[command(flatten)]
    pub plot: PlotArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SentenceArgs {
    /// Comma-separated `word:count` segments.
    #[arg(long, allow_hyphen_values = true)]
    pub paragraph: String,

    #[arg(long, default_value_t = 2048)]
    pub theta_steps: usize,

    #[command(flatten)]
    pub plot: PlotArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("letters").required(true).args(["model", "word", "paragraph"])))]
pub struct RandomArgs {
    #[arg(long, value_enum)]
    pub model: Option<Model>,

    /// Periodic word source.
    #[arg(long, allow_hyphen_values = true)]
    pub word: Option<String>,

    /// Paragraph source, tiled to length N.
    #[arg(long, allow_hyphen_values = true)]
    pub paragraph: Option<String>,

    /// Subdiagonal length; the matrix is (N+1)×(N+1).
    #[arg(long, default_value_t = 999)]
    pub n: usize,

    /// First seed; realization k uses seed + k.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value_t = 1)]
    pub realizations: usize,

    #[command(flatten)]
    pub plot: PlotArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("letters").args(["model", "word"])))]
pub struct EscapeArgs {
    /// Cells per side.
    #[arg(long, default_value_t = 128)]
    pub resolution: usize,

    /// re_min,re_max,im_min,im_max
    #[arg(long, allow_hyphen_values = true, default_value = "-2.2,2.2,-2.2,2.2")]
    pub bounds: String,

    /// Random letters (default A).
    #[arg(long, value_enum)]
    pub model: Option<Model>,

    /// Periodic letter stream.
    #[arg(long, allow_hyphen_values = true)]
    pub word: Option<String>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value_t = 1000)]
    pub burn_in: usize,

    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,

    #[arg(long, default_value_t = 1e8)]
    pub y_max: f64,

    /// Independent trajectories per cell.
    #[arg(long, default_value_t = 1)]
    pub trajectories: usize,

    /// SVG width and height in pixels.
    #[arg(long, default_value_t = 800)]
    pub size: u32,

    /// Also write the heat map here.
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OverlayArgs {
    /// STYLE=PATH with STYLE one of curve, cloud, endpoints, poles, isolated; repeatable, drawn in order.
    #[arg(long = "layer", required = true, value_name = "STYLE=PATH")]
    pub layers: Vec<String>,

    /// re_min,re_max,im_min,im_max
    #[arg(long, allow_hyphen_values = true)]
    pub viewport: Option<String>,

    #[arg(long, default_value_t = 800)]
    pub size: u32,

    #[arg(long, default_value = "overlay")]
    pub title: String,

    /// Output SVG file (stdout when absent).
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,

    /// Writes PREFIX.svg.
    #[arg(long, value_name = "PREFIX")]
    pub out: Option<PathBuf>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn grammar_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn hyphen_words_parse() {
        let cli = Cli::try_parse_from(["fzspec", "qpoly", "--word", "-+-"]).unwrap();
        let Command::Qpoly(a) = cli.command else { panic!() };
        assert_eq!(a.word, "-+-");
    }

    #[test]
    fn random_sources_conflict() {
        assert!(Cli::try_parse_from(["fzspec", "spectrum", "random", "--model", "B", "--word", "++-"]).is_err());
        assert!(Cli::try_parse_from(["fzspec", "spectrum", "random", "--n", "10"]).is_err());
        assert!(Cli::try_parse_from(["fzspec", "spectrum", "random", "--model", "a"]).is_ok());
    }
}
