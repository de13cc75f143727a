//! `policy-audit classify`: label corpus sentences with a trained model.

use anyhow::{Context, Result};

use policy_audit::classifier::{predict, write_predictions_jsonl};
use policy_audit::corpus::read_corpus_jsonl;
use policy_audit::textstats::{read_sentences_jsonl, segment, Sentence};
use policy_audit::ClassifierModel;

use crate::args::ClassifyArgs;
use crate::commands::{create_writer, open_reader};
use crate::UsageError;

pub fn run(args: ClassifyArgs) -> Result<()> {
    let model = ClassifierModel::load(&args.model)
        .with_context(|| format!("cannot load model {}", args.model.display()))?;

    let sentences: Vec<Sentence> = match (&args.corpus, &args.sentences) {
        (Some(corpus_path), None) => {
            let documents = read_corpus_jsonl(open_reader(corpus_path)?)
                .with_context(|| format!("malformed corpus {}", corpus_path.display()))?;
            documents
                .iter()
                .filter(|d| d.filter_status == policy_audit::corpus::FilterStatus::Accepted)
                .flat_map(|d| segment(&d.id, &d.cleaned_text))
                .collect()
        }
        (None, Some(sentences_path)) => read_sentences_jsonl(open_reader(sentences_path)?)
            .with_context(|| format!("malformed sentences {}", sentences_path.display()))?,
        _ => return Err(UsageError("pass exactly one of --corpus or --sentences".into()).into()),
    };

    let predictions = predict(&model, &sentences);
    write_predictions_jsonl(create_writer(&args.output)?, &predictions)
        .with_context(|| format!("cannot write {}", args.output.display()))?;
    println!(
        "labelled {} sentences, predictions written to {}",
        predictions.len(),
        args.output.display()
    );
    Ok(())
}
