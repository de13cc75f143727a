//! `policy-audit ingest`: manifest to filtered corpus JSONL.

use std::io;

use anyhow::{Context, Result};
use serde::Serialize;

use policy_audit::corpus::{
    ingest, write_corpus_jsonl, CorpusManifest, IngestEntryError, IngestOptions, IngestSummary,
};

use crate::args::IngestArgs;
use crate::commands::{create_writer, write_json_pretty};

#[derive(Serialize)]
struct IngestLog<'a> {
    manifest: String,
    options: IngestOptions,
    summary: IngestSummary,
    errors: &'a [IngestEntryError],
}

pub fn run(args: IngestArgs) -> Result<()> {
    let manifest = CorpusManifest::load(&args.manifest)?;
    let options = IngestOptions {
        min_bytes: args.min_bytes,
        language_threshold: args.language_threshold,
        size_on_cleaned_text: args.size_on_cleaned_text,
    };
    let outcome = ingest(&manifest, &options)?;
    let summary = outcome.summary();

    let writer = create_writer(&args.output)?;
    write_corpus_jsonl(writer, &outcome.documents)
        .with_context(|| format!("cannot write {}", args.output.display()))?;

    for error in &outcome.errors {
        eprintln!("warning: {error}");
    }
    if let Some(log_path) = &args.log {
        write_json_pretty(
            log_path,
            &IngestLog {
                manifest: manifest.name.clone(),
                options,
                summary,
                errors: &outcome.errors,
            },
        )?;
    }

    println!("manifest entries:        {}", summary.manifest_entries);
    println!("accepted:                {}", summary.accepted);
    println!("rejected (non-english):  {}", summary.rejected_non_english);
    println!("rejected (too short):    {}", summary.rejected_too_short);
    println!("rejected (duplicate):    {}", summary.rejected_duplicate);
    println!("unreadable:              {}", summary.unreadable);

    if args.strict && !outcome.errors.is_empty() {
        let message = format!("{} manifest entries were unreadable", outcome.errors.len());
        return Err(anyhow::Error::new(io::Error::other(message))
            .context("strict mode: ingestion incomplete"));
    }
    Ok(())
}
