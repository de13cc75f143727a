//! `policy-audit stats`: corpus-level statistics.

use anyhow::{Context, Result};

use policy_audit::corpus::{corpus_statistics, read_corpus_jsonl};
use policy_audit::evaluation::read_gold_jsonl;
use policy_audit::CorpusStatistics;

use crate::args::StatsArgs;
use crate::commands::{open_reader, write_json_pretty, write_text};

pub fn run(args: StatsArgs) -> Result<()> {
    let documents = read_corpus_jsonl(open_reader(&args.corpus)?)
        .with_context(|| format!("malformed corpus {}", args.corpus.display()))?;
    let annotations = match &args.gold {
        Some(path) => read_gold_jsonl(open_reader(path)?)
            .with_context(|| format!("malformed gold annotations {}", path.display()))?,
        None => Vec::new(),
    };

    let statistics: CorpusStatistics = corpus_statistics(&documents, &annotations)?;

    if let Some(path) = &args.csv {
        write_text(path, &statistics.to_csv())?;
    }
    match &args.output {
        Some(path) => {
            write_json_pretty(path, &statistics)?;
            println!(
                "policies: {}  words: {}  sentences: {}",
                statistics.policy_count, statistics.total_words, statistics.total_sentences
            );
        }
        None => {
            let json = serde_json::to_string_pretty(&statistics)?;
            println!("{json}");
        }
    }
    Ok(())
}
