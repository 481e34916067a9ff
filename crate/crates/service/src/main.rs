use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use cpgctx::answer::{answer, AnswerRequest};
use cpgctx::{router, AppState, ServiceConfig, Store};
use cpgctx_core::corpus::{corpus_stats, parse_guideline, CorpusIndex, ExtractionConfig};
use cpgctx_core::eval::{evaluate_run, load_gold, RankedRun};
use cpgctx_core::numeric::{evaluate_range_gold, load_range_gold, CompareConfig};
use cpgctx_core::ontology::{AnnotationSet, SemanticTypeRegistry};
use cpgctx_core::{CcsTable, GuidelineCorpus, WordTokenizer};
use tracing_subscriber::EnvFilter;

#[derive(Parser)]
#[command(name = "cpgctx", version, about = "Guideline-grounded explanations for risk predictions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract a structured corpus from guideline HTML.
    Extract {
        #[arg(long)]
        html: PathBuf,
        /// Selector config.
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print coverage statistics for a corpus.
    Stats {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        annotations: Option<PathBuf>,
        /// Treat the corpus as HTML and extract it with these selectors.
        #[arg(long)]
        selectors: Option<PathBuf>,
    },
    /// List generated questions for a patient.
    Questions {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        patient: String,
    },
    /// Answer one question; prints the same JSON the HTTP API returns.
    Ask {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        patient: String,
        #[arg(long)]
        question: String,
        #[arg(long, default_value = "base")]
        strategy: String,
        #[arg(long, default_value = "lexical")]
        scorer: String,
    },
    /// Score a ranked run against gold annotations.
    Evaluate {
        #[arg(long)]
        run: PathBuf,
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        selectors: Option<PathBuf>,
        /// CCS table for the per-grouping breakdown.
        #[arg(long)]
        group_by_ccs: Option<PathBuf>,
        #[arg(long, default_value = "run")]
        model: String,
        #[arg(long)]
        json: bool,
    },
    /// Accuracy of range verdicts on a labelled lab-question set.
    RangeEval {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run the HTTP API.
    Serve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        port: Option<u16>,
    },
}

fn read_corpus(path: &Path, selectors: Option<&Path>) -> Result<GuidelineCorpus> {
    match selectors {
        Some(sel) => {
            let sel = ExtractionConfig::from_json_str(&std::fs::read_to_string(sel).with_context(|| sel.display().to_string())?)?;
            let html = std::fs::read_to_string(path).with_context(|| path.display().to_string())?;
            Ok(parse_guideline(&html, &sel)?)
        }
        None => Ok(GuidelineCorpus::load(path)?),
    }
}

fn load_config(path: &Path) -> Result<ServiceConfig> {
    Ok(ServiceConfig::load(path)?.with_env(|k| std::env::var(k).ok())?)
}

fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    emit(&(serde_json::to_string(value)? + "\n"))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Extract { html, config, out } => {
            let corpus = read_corpus(&html, Some(&config))?;
            std::fs::write(&out, corpus.to_json_pretty()).with_context(|| out.display().to_string())?;
            let stats = corpus_stats(&corpus, &WordTokenizer, None);
            eprintln!("{} chapters, {} sentences -> {}", stats.chapter_count, stats.sentence_count, out.display());
        }
        Command::Stats { corpus, annotations, selectors } => {
            let corpus = read_corpus(&corpus, selectors.as_deref())?;
            let anns = annotations
                .map(|p| AnnotationSet::load(p, &SemanticTypeRegistry::bundled()))
                .transpose()?;
            print_json(&corpus_stats(&corpus, &WordTokenizer, anns.as_ref()))?;
        }
        Command::Questions { config, patient } => {
            let store = Store::load(load_config(&config)?)?;
            store.patient(&patient)?;
            print_json(&store.questions[&patient].questions)?;
        }
        Command::Ask { config, patient, question, strategy, scorer } => {
            let store = Store::load(load_config(&config)?)?;
            let resp = answer(&store, None, &patient, &question, &AnswerRequest { strategy, scorer })?;
            print_json(resp.as_ref())?;
        }
        Command::Evaluate { run, gold, corpus, selectors, group_by_ccs, model, json } => {
            let corpus = read_corpus(&corpus, selectors.as_deref())?;
            let index = CorpusIndex::new(&corpus);
            let gold = load_gold(&gold)?;
            let run = RankedRun::load(&run)?;
            let ccs = group_by_ccs.map(CcsTable::load).transpose()?;
            let report = evaluate_run(&model, &run, &gold, &index, &WordTokenizer, ccs.as_ref())?;
            if json {
                print_json(&report)?;
            } else {
                emit(&report.table())?;
            }
        }
        Command::RangeEval { config, gold, json } => {
            let store = Store::load(load_config(&config)?)?;
            let questions: HashMap<&str, &str> = store
                .questions
                .values()
                .flat_map(|g| &g.questions)
                .map(|q| (q.id.as_str(), q.text.as_str()))
                .collect();
            let gold = load_range_gold(&gold)?;
            let ev = evaluate_range_gold(
                &gold,
                |id| questions.get(id).map(|s| s.to_string()),
                |id| store.index.get(id).map(|s| s.text.clone()),
                &CompareConfig::default(),
            )?;
            if json {
                print_json(&ev)?;
            } else {
                emit(&format!(
                    "{}\ngrammar-parseable subset\n{}\n",
                    ev.report.table(),
                    ev.parseable_report.table()
                ))?;
            }
        }
        Command::Serve { config, port } => {
            let mut cfg = load_config(&config)?;
            if let Some(port) = port {
                cfg.port = port;
            }
            serve(cfg)?;
        }
    }
    Ok(())
}

#[tokio::main]
async fn serve(cfg: ServiceConfig) -> Result<()> {
    let state = AppState::empty(cfg.cache_capacity);
    let addr = std::net::SocketAddr::from(([0, 0, 0, 0], cfg.port));
    let listener = tokio::net::TcpListener::bind(addr).await.with_context(|| format!("binding {addr}"))?;
    tracing::info!("listening on {addr}");

    let loader = state.clone();
    tokio::task::spawn_blocking(move || match Store::load(cfg) {
        Ok(store) => loader.install(store),
        Err(e) => tracing::error!("store failed to load: {e}"),
    });

    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

fn main() {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")))
        .with_writer(std::io::stderr)
        .init();
    if let Err(e) = run(Cli::parse()) {
        let broken_pipe = e
            .downcast_ref::<std::io::Error>()
            .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe);
        if broken_pipe {
            return;
        }
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
