//! `policy-audit train`: gold annotations to a trained model plus a
//! held-out evaluation.

use anyhow::{Context, Result};

use policy_audit::classifier::{train, train_test_split};
use policy_audit::evaluation::{evaluate_model, read_gold_jsonl};
use policy_audit::TrainConfig;

use crate::args::TrainArgs;
use crate::commands::{open_reader, write_json_pretty};

pub fn run(args: TrainArgs) -> Result<()> {
    let gold = read_gold_jsonl(open_reader(&args.gold)?)
        .with_context(|| format!("malformed gold annotations {}", args.gold.display()))?;

    let (train_set, test_set) = train_test_split(&gold, args.split.train_fraction, args.split_seed);
    let config = TrainConfig {
        epochs: args.epochs,
        learning_rate: args.learning_rate,
        lr_decay: args.lr_decay,
        l2_penalty: args.l2_penalty,
        oversample: args.oversample,
    };
    let model = train(&train_set, &config, args.seed).context("training failed")?;
    if let Some(parent) = args.model_out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .with_context(|| format!("cannot create directory {}", parent.display()))?;
        }
    }
    model.save(&args.model_out)?;

    println!(
        "trained on {} sentences ({} after oversampling), vocabulary {} terms, {} labels",
        model.training.original_sentences,
        model.training.trained_sentences,
        model.vocabulary.len(),
        model.label_set.len()
    );
    println!("model written to {}", args.model_out.display());

    if test_set.is_empty() {
        println!("no held-out sentences under split {}; skipping evaluation", args.split);
        return Ok(());
    }
    let report = evaluate_model(&model, &test_set)?;
    println!("held-out evaluation on {} sentences:", test_set.len());
    print!("{}", report.to_text_table());
    println!("accuracy: {:.4}", report.accuracy);
    if let Some(path) = &args.report {
        write_json_pretty(path, &report)?;
    }
    Ok(())
}
