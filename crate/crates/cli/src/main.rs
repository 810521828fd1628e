//! `expertrank` command-line interface.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use expertrank::cohits::{AuthorityInit, CoHitsParams, HubInit};
use expertrank::extractor::{
    extract_corpus, Extraction, ExtractionConfig, ExtractionSnapshot, PosPattern, PretaggedCorpus,
    Stopwords, TaggerMode, DEFAULT_PATTERN,
};
use expertrank::ranking::{find_experts, profile_expert, QueryOptions, QueryOutcome, RankedList};
use expertrank::sparse::format_sig9;
use expertrank::{
    load_index, save_index, Corpus, CorpusFormat, Error, Index, NodeOrdering, Result, Role,
};

#[derive(Debug, Parser)]
#[command(
    name = "expertrank",
    version,
    about = "Find and profile experts from a document corpus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a corpus and write it as normalized JSON.
    Ingest {
        #[command(flatten)]
        input: InputArgs,
        /// Output JSON file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Extract tokens and noun-phrase topics into a JSON file.
    Extract {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        extraction: ExtractArgs,
        /// Output JSON file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Build weight matrices and the collaboration graph into an index directory.
    Build {
        #[command(flatten)]
        input: InputArgs,
        /// Reuse the output of `extract` instead of extracting again.
        #[arg(long, value_parser = existing_path)]
        extraction_file: Option<PathBuf>,
        #[command(flatten)]
        extraction: ExtractArgs,
        #[command(flatten)]
        graph: GraphArgs,
        /// Output index directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the reinforcement and store the reinforced expert-topic matrix.
    Reinforce {
        #[command(flatten)]
        index: IndexArgs,
        /// Write to this directory instead of updating the index in place.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        cohits: CoHitsArgs,
        #[command(flatten)]
        exec: ExecArgs,
    },
    /// Rank experts for a query.
    Rank {
        #[command(flatten)]
        index: IndexArgs,
        /// Free-text query, normalized like document text.
        #[arg(long)]
        query: String,
        /// Skip the lemma-overlap fallback when no topic matches exactly.
        #[arg(long)]
        exact_only: bool,
        /// Stopword file used to normalize the query; must match the index.
        #[arg(long, env = "EXPERTRANK_STOPWORDS")]
        stopwords: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Rank topics for an expert.
    Profile {
        #[command(flatten)]
        index: IndexArgs,
        /// Expert label.
        #[arg(long)]
        expert: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print a matrix or graph vector as a labeled table.
    Inspect {
        #[command(flatten)]
        index: IndexArgs,
        /// DTM, DPM, EDM, ETopM, DTopM, RETopM or M.
        #[arg(long, value_parser = parse_role, conflicts_with = "vector", required_unless_present = "vector")]
        matrix: Option<Role>,
        /// Count vector or node ordering.
        #[arg(long, value_enum)]
        vector: Option<VectorName>,
    },
    /// Ingest, extract, build and reinforce in one go.
    Pipeline {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        extraction: ExtractArgs,
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        cohits: CoHitsArgs,
        #[command(flatten)]
        exec: ExecArgs,
        /// Output index directory.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Corpus directory (documents.csv + authorship.csv) or JSON file.
    #[arg(long = "in", value_parser = existing_path)]
    input: PathBuf,
    /// Corpus format; detected from the path when omitted.
    #[arg(long, value_enum)]
    input_format: Option<FormatArg>,
}

#[derive(Debug, Args)]
struct ExtractArgs {
    /// Longest topic phrase in tokens.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    max_len: u32,
    /// Stopword file, one word per line.
    #[arg(long, env = "EXPERTRANK_STOPWORDS", value_parser = existing_path)]
    stopwords: Option<PathBuf>,
    /// Part-of-speech source.
    #[arg(long, value_enum, default_value_t = TaggerArg::Builtin)]
    tagger: TaggerArg,
    /// Pretagged tokens (`surface<TAB>pos<TAB>lemma`, `#DOC id` headers).
    #[arg(long, value_parser = existing_path, required_if_eq("tagger", "pretagged"))]
    pretagged: Option<PathBuf>,
    /// POS pattern for topic phrases.
    #[arg(long, default_value = DEFAULT_PATTERN)]
    pattern: String,
}

#[derive(Debug, Args)]
struct GraphArgs {
    /// Node ordering of the collaboration graph.
    #[arg(long, value_enum, default_value_t = OrderingArg::Interleaved)]
    ordering: OrderingArg,
}

#[derive(Debug, Args)]
struct CoHitsArgs {
    /// Weight of graph propagation in the authority update, in [0, 1].
    #[arg(long, default_value_t = 1.0, value_parser = unit_interval)]
    lambda_x: f64,
    /// Weight of graph propagation in the hub update, in [0, 1].
    #[arg(long, default_value_t = 0.7, value_parser = unit_interval)]
    lambda_d: f64,
    /// Number of iterations.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    iterations: u32,
    /// Initial hub vector.
    #[arg(long, value_enum, default_value_t = HubInitArg::Nvsm)]
    hub_init: HubInitArg,
    /// Initial authority vector.
    #[arg(long, value_enum, default_value_t = AuthorityInitArg::Nvsm)]
    authority_init: AuthorityInitArg,
}

#[derive(Debug, Args)]
struct ExecArgs {
    /// Worker threads for reinforcement [default: all cores].
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,
    /// Write per-topic diagnostics as JSON lines.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct IndexArgs {
    /// Index directory.
    #[arg(long, value_parser = existing_path)]
    index: PathBuf,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Number of results.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    top_k: u32,
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Tsv)]
    format: OutputFormat,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TaggerArg {
    Builtin,
    Pretagged,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OrderingArg {
    Interleaved,
    #[value(name = "docs_first", alias = "docs-first")]
    DocsFirst,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum HubInitArg {
    Nvsm,
    #[value(name = "uniform_docs", alias = "uniform-docs")]
    UniformDocs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AuthorityInitArg {
    Nvsm,
    #[value(name = "uniform_experts", alias = "uniform-experts")]
    UniformExperts,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Tsv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VectorName {
    #[value(name = "c_x", alias = "cx")]
    Cx,
    #[value(name = "c_d", alias = "cd")]
    Cd,
    /// The node ordering.
    S,
}

fn unit_interval(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s
        .parse()
        .map_err(|e| format!("`{s}` is not a number: {e}"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

fn existing_path(s: &str) -> std::result::Result<PathBuf, String> {
    let p = PathBuf::from(s);
    if p.exists() {
        Ok(p)
    } else {
        Err(format!("path `{s}` does not exist"))
    }
}

fn parse_role(s: &str) -> std::result::Result<Role, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Output of `extract`, consumed by `build --extraction-file`.
#[derive(Debug, Serialize, Deserialize)]
struct ExtractionFile {
    corpus_fingerprint: String,
    config: ExtractionSnapshot,
    extraction: Extraction,
}

impl InputArgs {
    fn load(&self) -> Result<Corpus> {
        let format = match self.input_format {
            Some(FormatArg::Csv) => CorpusFormat::Csv,
            Some(FormatArg::Json) => CorpusFormat::Json,
            None => CorpusFormat::detect(&self.input),
        };
        Corpus::ingest(&self.input, format)
    }
}

fn load_stopwords(path: Option<&Path>) -> Result<Stopwords> {
    match path {
        Some(p) => Stopwords::from_file(p),
        None => Ok(Stopwords::builtin()),
    }
}

impl ExtractArgs {
    fn config(&self) -> Result<ExtractionConfig> {
        let tagger = match self.tagger {
            TaggerArg::Builtin => TaggerMode::Builtin,
            TaggerArg::Pretagged => {
                let path = self.pretagged.as_ref().expect("clap requires --pretagged");
                let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                TaggerMode::Pretagged(PretaggedCorpus::parse(&text)?)
            }
        };
        let config = ExtractionConfig {
            max_len: self.max_len as usize,
            stopwords: load_stopwords(self.stopwords.as_deref())?,
            pattern: self.pattern.parse::<PosPattern>()?,
            tagger,
        };
        config.validate()?;
        Ok(config)
    }
}

impl GraphArgs {
    fn ordering(&self) -> NodeOrdering {
        match self.ordering {
            OrderingArg::Interleaved => NodeOrdering::Interleaved,
            OrderingArg::DocsFirst => NodeOrdering::DocsFirst,
        }
    }
}

impl CoHitsArgs {
    fn params(&self) -> CoHitsParams {
        CoHitsParams {
            lambda_x: self.lambda_x,
            lambda_d: self.lambda_d,
            iterations: self.iterations as usize,
            hub_init: match self.hub_init {
                HubInitArg::Nvsm => HubInit::Nvsm,
                HubInitArg::UniformDocs => HubInit::UniformDocs,
            },
            authority_init: match self.authority_init {
                AuthorityInitArg::Nvsm => AuthorityInit::Nvsm,
                AuthorityInitArg::UniformExperts => AuthorityInit::UniformExperts,
            },
        }
    }
}

fn threads(exec: &ExecArgs) -> usize {
    exec.threads.map_or_else(
        || std::thread::available_parallelism().map_or(1, |n| n.get()),
        |n| n as usize,
    )
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn reinforce_and_save(
    index: &mut Index,
    cohits: &CoHitsArgs,
    exec: &ExecArgs,
    out: &Path,
) -> Result<String> {
    let result = index.reinforce(&cohits.params(), threads(exec))?;
    if let Some(report) = &exec.report {
        write_file(report, &result.diagnostics_jsonl())?;
    }
    save_index(out, index)?;
    Ok(format!(
        "reinforced {} topic(s), {} zero-seed, into {}\n",
        result.diagnostics.len(),
        result.zero_seed_count(),
        out.display()
    ))
}

fn render_ranking(list: &RankedList, format: OutputFormat) -> String {
    match format {
        OutputFormat::Tsv => list.to_tsv(),
        OutputFormat::Json => list.to_json() + "\n",
    }
}

fn dense_table(row_labels: &[String], col_labels: &[String], dense: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for label in col_labels {
        out.push('\t');
        out.push_str(label);
    }
    out.push('\n');
    for (label, row) in row_labels.iter().zip(dense) {
        out.push_str(label);
        for v in row {
            out.push('\t');
            out.push_str(&format_sig9(*v));
        }
        out.push('\n');
    }
    out
}

fn inspect(index: &Index, matrix: Option<Role>, vector: Option<VectorName>) -> Result<String> {
    let labels = index.ecg.node_labels(&index.experts, &index.documents);
    if let Some(v) = vector {
        let (cx, cd) = index.ecg.count_vectors();
        let mut out = String::new();
        for (i, label) in labels.iter().enumerate() {
            let value = match v {
                VectorName::Cx => format_sig9(cx[i]),
                VectorName::Cd => format_sig9(cd[i]),
                VectorName::S => (i + 1).to_string(),
            };
            writeln!(out, "{label}\t{value}").expect("write to string");
        }
        return Ok(out);
    }
    let role = matrix.expect("clap requires --matrix or --vector");
    let dense = match role {
        Role::Adjacency => index.ecg.adjacency().to_dense(),
        Role::RETopM => index.retopm()?.matrix().to_dense(),
        other => index
            .matrix(other)
            .expect("every non-reinforced role is built")
            .matrix()
            .to_dense(),
    };
    let (rows, cols) = index.axis_labels(role);
    Ok(dense_table(&rows, &cols, &dense))
}

fn run(command: Command) -> Result<String> {
    match command {
        Command::Ingest { input, out } => {
            let corpus = input.load()?;
            write_file(&out, &corpus.to_json_string())?;
            Ok(format!(
                "ingested {} document(s), {} expert(s)\n",
                corpus.num_documents(),
                corpus.num_experts()
            ))
        }
        Command::Extract {
            input,
            extraction,
            out,
        } => {
            let corpus = input.load()?;
            let config = extraction.config()?;
            let file = ExtractionFile {
                corpus_fingerprint: corpus.fingerprint(),
                config: config.snapshot(),
                extraction: extract_corpus(&corpus, &config)?,
            };
            let mut json = serde_json::to_string_pretty(&file)?;
            json.push('\n');
            write_file(&out, &json)?;
            Ok(format!(
                "extracted {} token(s), {} topic(s)\n",
                file.extraction.tokens.len(),
                file.extraction.topics.len()
            ))
        }
        Command::Build {
            input,
            extraction_file,
            extraction,
            graph,
            out,
        } => {
            let corpus = input.load()?;
            let index = match extraction_file {
                Some(path) => {
                    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
                    let file: ExtractionFile = serde_json::from_str(&text)?;
                    if file.corpus_fingerprint != corpus.fingerprint() {
                        return Err(Error::Config(format!(
                            "{} was extracted from a different corpus",
                            path.display()
                        )));
                    }
                    Index::build(&corpus, &file.extraction, file.config, graph.ordering())?
                }
                None => Index::from_corpus(&corpus, &extraction.config()?, graph.ordering())?,
            };
            save_index(&out, &index)?;
            Ok(format!(
                "built index with {} topic(s) into {}\n",
                index.topics.len(),
                out.display()
            ))
        }
        Command::Reinforce {
            index,
            out,
            cohits,
            exec,
        } => {
            let mut loaded = load_index(&index.index)?;
            let out = out.unwrap_or(index.index);
            reinforce_and_save(&mut loaded, &cohits, &exec, &out)
        }
        Command::Rank {
            index,
            query,
            exact_only,
            stopwords,
            output,
        } => {
            let loaded = load_index(&index.index)?;
            let stopwords = load_stopwords(stopwords.as_deref())?;
            if stopwords.fingerprint() != loaded.extraction.stopwords_sha256 {
                return Err(Error::Config(
                    "stopword list differs from the one the index was built with".into(),
                ));
            }
            let options = QueryOptions {
                top_k: output.top_k as usize,
                exact_only,
            };
            let outcome = find_experts(
                &query,
                loaded.retopm()?,
                &loaded.topics,
                &loaded.experts,
                &stopwords,
                options,
            )?;
            Ok(match (outcome, output.format) {
                (QueryOutcome::Ranked(list), format) => render_ranking(&list, format),
                (QueryOutcome::NoMatch, OutputFormat::Tsv) => "# no-match\n".into(),
                (QueryOutcome::NoMatch, OutputFormat::Json) => "[]\n".into(),
            })
        }
        Command::Profile {
            index,
            expert,
            output,
        } => {
            let loaded = load_index(&index.index)?;
            let list = profile_expert(
                &expert,
                loaded.retopm()?,
                &loaded.topics,
                &loaded.experts,
                output.top_k as usize,
            )?;
            Ok(render_ranking(&list, output.format))
        }
        Command::Inspect {
            index,
            matrix,
            vector,
        } => inspect(&load_index(&index.index)?, matrix, vector),
        Command::Pipeline {
            input,
            extraction,
            graph,
            cohits,
            exec,
            out,
        } => {
            let corpus = input.load()?;
            let built = Index::from_corpus(&corpus, &extraction.config()?, graph.ordering())?;
            // reload so the reinforcement sees exactly what separate stages would
            save_index(&out, &built)?;
            let mut loaded = load_index(&out)?;
            reinforce_and_save(&mut loaded, &cohits, &exec, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or_default();
            eprintln!("ERROR usage: {}", first.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(stdout) => {
            let mut handle = std::io::stdout().lock();
            let _ = handle.write_all(stdout.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("ERROR {}: {e}", e.code());
            ExitCode::from(1)
        }
    }
}
