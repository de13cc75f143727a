//! `policy-audit evaluate`: merge annotator triples into gold data, or
//! score predictions against gold annotations.

use anyhow::{Context, Result};

use policy_audit::classifier::import_predictions;
use policy_audit::evaluation::{
    evaluate, merge_annotations, read_gold_jsonl, read_triples_jsonl, write_gold_jsonl,
    write_triples_jsonl,
};
use policy_audit::textstats::Sentence;

use crate::args::EvaluateArgs;
use crate::commands::{create_writer, open_reader, write_json_pretty};
use crate::UsageError;

pub fn run(args: EvaluateArgs) -> Result<()> {
    match (&args.triples, &args.gold) {
        (Some(triples), None) => merge_mode(&args, triples),
        (None, Some(gold)) => scoring_mode(&args, gold),
        _ => Err(UsageError("pass exactly one of --triples or --gold".into()).into()),
    }
}

fn merge_mode(args: &EvaluateArgs, triples_path: &std::path::Path) -> Result<()> {
    let triples = read_triples_jsonl(open_reader(triples_path)?)
        .with_context(|| format!("malformed triples {}", triples_path.display()))?;
    let outcome = merge_annotations(&triples);

    let gold_out = args
        .gold_out
        .as_ref()
        .ok_or_else(|| UsageError("--triples requires --gold-out".into()))?;
    write_gold_jsonl(create_writer(gold_out)?, &outcome.gold)
        .with_context(|| format!("cannot write {}", gold_out.display()))?;
    if let Some(path) = &args.disputes_out {
        write_triples_jsonl(create_writer(path)?, &outcome.disputes)
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    println!(
        "triples: {}  unanimous: {}  disputed: {}",
        triples.len(),
        outcome.gold.len(),
        outcome.disputes.len()
    );
    Ok(())
}

fn scoring_mode(args: &EvaluateArgs, gold_path: &std::path::Path) -> Result<()> {
    let gold = read_gold_jsonl(open_reader(gold_path)?)
        .with_context(|| format!("malformed gold annotations {}", gold_path.display()))?;
    let predictions_path = args
        .predictions
        .as_ref()
        .ok_or_else(|| UsageError("--gold requires --predictions".into()))?;

    let expected: Vec<Sentence> = gold.iter().map(|g| g.sentence.clone()).collect();
    let imported = import_predictions::<f64, _>(open_reader(predictions_path)?, &expected)
        .with_context(|| format!("cannot import predictions {}", predictions_path.display()))?;
    for extra in &imported.extra {
        eprintln!("warning: prediction for unknown sentence {extra} ignored");
    }

    let report = evaluate(&gold, &imported.predictions)?;
    print!("{}", report.to_text_table());
    println!("accuracy: {:.4}", report.accuracy);
    if let Some(path) = &args.report {
        write_json_pretty(path, &report)?;
    }
    Ok(())
}
