//! `dialogsim` — dialog similarity matrices, queries and evaluation runs.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use anyhow::{Context, Result, bail};
use clap::{Args, Parser, Subcommand, ValueEnum};

use dialogsim::corpus::{self, Corpus, CorpusFormat, Stoplist};
use dialogsim::evalx::{self, CurveBaseline, EvalOptions, EvalReport};
use dialogsim::fusion::{ranking_matrix, top_k_similar};
use dialogsim::matrix::{DistanceMatrix, RankingMatrix};
use dialogsim::pipeline::compute_matrices;
use dialogsim::structsim::{self, structure_distance_matrix, write_features_csv};
use dialogsim::textsim::{build_vocabulary, text_distance_matrix};

#[derive(Parser)]
#[command(
    name = "dialogsim",
    version,
    about = "Dialog similarity from text content and conversation structure"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute distance and ranking matrices and write them as CSV
    Distmat {
        /// Which similarity signal to use
        #[arg(long, value_enum)]
        mode: Mode,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Print the dialogs most similar to one dialog, best first
    Query {
        /// Dialog id to query for
        #[arg(long)]
        id: String,
        #[arg(long, value_enum)]
        mode: Mode,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Write the evaluation report: pairwise rank MSEs and the perturbation curve
    Eval {
        /// Matrix the perturbation sweep starts from
        #[arg(long, value_enum, default_value_t = BaselineOpt::Random)]
        baseline: BaselineOpt,
        /// Comma-separated dialog ids to report term intersections for
        #[arg(long, value_delimiter = ',')]
        ids: Vec<String>,
        /// Also write the curve points as curve.csv
        #[arg(long)]
        curve_csv: bool,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Print structural features and top-term intersections for chosen dialogs
    Report {
        /// Comma-separated dialog ids
        #[arg(long, value_delimiter = ',', required = true)]
        ids: Vec<String>,
        /// Also write the feature rows as features.csv
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Parse and validate a corpus file
    Validate {
        #[command(flatten)]
        opts: CommonOpts,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Text,
    Structure,
    Combined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatOpt {
    Jsonl,
    Transcript,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BaselineOpt {
    Random,
    Ordered,
}

#[derive(Args, Debug)]
struct CommonOpts {
    /// Corpus file
    corpus: PathBuf,

    /// Corpus file format
    #[arg(long, value_enum, default_value_t = FormatOpt::Jsonl)]
    format: FormatOpt,

    /// Stopword file (one lowercase term per line); default: embedded English list
    #[arg(long, value_name = "FILE")]
    stopwords: Option<PathBuf>,

    /// Adjacent-turn similarity threshold for cycle detection, in (0, 1]
    #[arg(long, default_value_t = structsim::DEFAULT_TAU, value_parser = parse_tau)]
    tau: f64,

    /// Number of top terms per dialog profile
    #[arg(long = "top-terms", default_value_t = evalx::DEFAULT_TOP_TERMS, value_parser = parse_positive)]
    top_terms: usize,

    /// Query depth (capped at n-1 for small corpora)
    #[arg(long, default_value_t = 10, value_parser = parse_positive)]
    k: usize,

    /// Seed for all randomized evaluation steps
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Worker threads for matrix computation; default: available parallelism
    #[arg(long, value_parser = parse_positive)]
    threads: Option<usize>,

    /// Output directory for generated files
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn parse_tau(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v > 0.0 && v <= 1.0 {
        Ok(v)
    } else {
        Err(format!("tau must be in (0, 1], got {v}"))
    }
}

fn parse_positive(s: &str) -> std::result::Result<usize, String> {
    let v: usize = s.parse().map_err(|_| format!("'{s}' is not an integer"))?;
    if v >= 1 {
        Ok(v)
    } else {
        Err("value must be at least 1".to_string())
    }
}

/// Resolved run configuration shared by all subcommands.
struct RunConfig {
    input: PathBuf,
    format: CorpusFormat,
    stopwords: Option<PathBuf>,
    tau: f64,
    top_terms: usize,
    k: usize,
    seed: u64,
    out: PathBuf,
}

impl RunConfig {
    fn from_opts(opts: &CommonOpts) -> Result<Self> {
        if let Some(threads) = opts.threads {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global()
                .context("configuring thread pool")?;
        }
        Ok(Self {
            input: opts.corpus.clone(),
            format: match opts.format {
                FormatOpt::Jsonl => CorpusFormat::Jsonl,
                FormatOpt::Transcript => CorpusFormat::Transcript,
            },
            stopwords: opts.stopwords.clone(),
            tau: opts.tau,
            top_terms: opts.top_terms,
            k: opts.k,
            seed: opts.seed,
            out: opts.out.clone(),
        })
    }

    fn load_corpus(&self) -> Result<Corpus> {
        let file = File::open(&self.input)
            .with_context(|| format!("opening {}", self.input.display()))?;
        corpus::parse_corpus(file, self.format)
            .with_context(|| format!("parsing {}", self.input.display()))
    }

    fn load_stoplist(&self) -> Result<Stoplist> {
        match &self.stopwords {
            Some(path) => {
                let file = File::open(path)
                    .with_context(|| format!("opening {}", path.display()))?;
                Stoplist::from_reader(file)
                    .with_context(|| format!("reading {}", path.display()))
            }
            None => Ok(Stoplist::default()),
        }
    }

    fn out_file(&self, name: &str) -> Result<(PathBuf, BufWriter<File>)> {
        fs::create_dir_all(&self.out)
            .with_context(|| format!("creating {}", self.out.display()))?;
        let path = self.out.join(name);
        let file =
            File::create(&path).with_context(|| format!("writing {}", path.display()))?;
        Ok((path, BufWriter::new(file)))
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Distmat { mode, opts } => cmd_distmat(mode, &RunConfig::from_opts(&opts)?),
        Command::Query { id, mode, opts } => cmd_query(&id, mode, &RunConfig::from_opts(&opts)?),
        Command::Eval {
            baseline,
            ids,
            curve_csv,
            opts,
        } => cmd_eval(baseline, ids, curve_csv, &RunConfig::from_opts(&opts)?),
        Command::Report { ids, csv, opts } => cmd_report(&ids, csv, &RunConfig::from_opts(&opts)?),
        Command::Validate { opts } => cmd_validate(&RunConfig::from_opts(&opts)?),
    }
}

fn write_distance(config: &RunConfig, name: &str, m: &DistanceMatrix<f64>) -> Result<()> {
    let (path, writer) = config.out_file(name)?;
    m.write_csv(writer)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn write_ranking(config: &RunConfig, name: &str, m: &RankingMatrix) -> Result<()> {
    let (path, writer) = config.out_file(name)?;
    m.write_csv(writer)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_distmat(mode: Mode, config: &RunConfig) -> Result<()> {
    let corpus = config.load_corpus()?;
    let stoplist = config.load_stoplist()?;
    match mode {
        Mode::Text => {
            let vocab = build_vocabulary(&corpus, &stoplist)?;
            let d_text = text_distance_matrix::<f64>(&corpus, &vocab, &stoplist)?;
            write_distance(config, "D_T.csv", &d_text)?;
            write_ranking(config, "R_T.csv", &ranking_matrix(&d_text))?;
        }
        Mode::Structure => {
            let d_structure = structure_distance_matrix::<f64>(&corpus, config.tau, &stoplist)?;
            write_distance(config, "D_S.csv", &d_structure)?;
            write_ranking(config, "R_S.csv", &ranking_matrix(&d_structure))?;
        }
        Mode::Combined => {
            let m = compute_matrices::<f64>(&corpus, config.tau, &stoplist)?;
            write_ranking(config, "R_T.csv", &m.r_text)?;
            write_ranking(config, "R_S.csv", &m.r_structure)?;
            write_distance(config, "D_B.csv", &m.d_borda)?;
            write_ranking(config, "R_B.csv", &m.r_borda)?;
        }
    }
    Ok(())
}

fn cmd_query(id: &str, mode: Mode, config: &RunConfig) -> Result<()> {
    let corpus = config.load_corpus()?;
    let stoplist = config.load_stoplist()?;
    if corpus.get(id).is_none() {
        bail!("unknown dialog id '{id}'");
    }
    if corpus.len() < 2 {
        bail!("corpus has a single dialog; nothing to rank against");
    }
    let ranking = match mode {
        Mode::Text => {
            let vocab = build_vocabulary(&corpus, &stoplist)?;
            ranking_matrix(&text_distance_matrix::<f64>(&corpus, &vocab, &stoplist)?)
        }
        Mode::Structure => ranking_matrix(&structure_distance_matrix::<f64>(
            &corpus,
            config.tau,
            &stoplist,
        )?),
        Mode::Combined => compute_matrices::<f64>(&corpus, config.tau, &stoplist)?.r_borda,
    };
    let k = config.k.min(corpus.len() - 1);
    for (neighbor, rank) in top_k_similar(&ranking, id, k)? {
        println!("{neighbor}\t{rank}");
    }
    Ok(())
}

fn cmd_eval(
    baseline: BaselineOpt,
    ids: Vec<String>,
    curve_csv: bool,
    config: &RunConfig,
) -> Result<()> {
    let corpus = config.load_corpus()?;
    let stoplist = config.load_stoplist()?;
    let options = EvalOptions::<f64> {
        tau: config.tau,
        seed: config.seed,
        baseline: match baseline {
            BaselineOpt::Random => CurveBaseline::Random,
            BaselineOpt::Ordered => CurveBaseline::Ordered,
        },
        top_terms: config.top_terms,
        ids,
    };
    let report: EvalReport<f64> = evalx::evaluate(&corpus, &stoplist, &options)?;
    let (path, mut writer) = config.out_file("report.json")?;
    writer.write_all(report.to_json().as_bytes())?;
    writer.write_all(b"\n")?;
    writer.flush()?;
    println!("wrote {}", path.display());
    if curve_csv {
        let (path, mut writer) = config.out_file("curve.csv")?;
        writeln!(writer, "swaps,mse")?;
        for (swaps, mse) in &report.curve {
            writeln!(writer, "{swaps},{mse}")?;
        }
        writer.flush()?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_report(ids: &[String], csv: bool, config: &RunConfig) -> Result<()> {
    let corpus = config.load_corpus()?;
    let stoplist = config.load_stoplist()?;
    let rows = evalx::feature_report::<f64>(&corpus, ids, config.tau, &stoplist)?;

    println!(
        "{:<16} {:>9} {:>19} {:>10} {:>20}",
        "id", "num_turns", "avg_words_per_turn", "num_cycles", "avg_turns_per_cycle"
    );
    for (id, f) in &rows {
        println!(
            "{:<16} {:>9} {:>19} {:>10} {:>20}",
            id, f.num_turns, f.avg_words_per_turn, f.num_cycles, f.avg_turns_per_cycle
        );
    }

    if ids.len() >= 2 {
        let profiles: Vec<_> = ids
            .iter()
            .map(|id| {
                let dialog = corpus
                    .get(id)
                    .ok_or_else(|| dialogsim::Error::UnknownId(id.clone()))?;
                Ok(evalx::term_profile(dialog, &stoplist, config.top_terms))
            })
            .collect::<Result<_>>()?;
        println!();
        println!("{:<24} terms", "intersection");
        for i in 0..profiles.len() {
            for j in (i + 1)..profiles.len() {
                let terms =
                    evalx::term_intersection(&[profiles[i].clone(), profiles[j].clone()]);
                println!(
                    "{:<24} {}",
                    format!("{}&{}", ids[i], ids[j]),
                    terms.into_iter().collect::<Vec<_>>().join(", ")
                );
            }
        }
        if profiles.len() > 2 {
            let terms = evalx::term_intersection(&profiles);
            println!(
                "{:<24} {}",
                "all",
                terms.into_iter().collect::<Vec<_>>().join(", ")
            );
        }
    }

    if csv {
        let (path, writer) = config.out_file("features.csv")?;
        write_features_csv(&rows, writer)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_validate(config: &RunConfig) -> Result<()> {
    let corpus = config.load_corpus()?;
    let turns: usize = corpus.dialogs().iter().map(|d| d.len()).sum();
    println!(
        "ok: {} dialogs, {} turns ({})",
        corpus.len(),
        turns,
        display_format(config.format)
    );
    Ok(())
}

fn display_format(format: CorpusFormat) -> &'static str {
    match format {
        CorpusFormat::Jsonl => "jsonl",
        CorpusFormat::Transcript => "transcript",
    }
}
