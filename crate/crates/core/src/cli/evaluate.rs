use std::path::PathBuf;

use clap::Args;

use crate::cli::{dry_run_note, emit, CmdResult, Ctx, Failure};
use crate::error::Error;
use crate::io::report::encode_report;
use crate::io::{read_manifest, ObjectReport, ReportRecord, SummaryReport};
use crate::metrics::{aggregate, evaluate_batch, MetricReport};

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Evaluation manifest (JSON lines).
    #[arg(long)]
    pub manifest: PathBuf,
    /// Report path (JSON lines); stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Penalty used when no object in the batch was localized.
    #[arg(long)]
    pub penalty_fallback: Option<f64>,
    #[arg(long)]
    pub q_hi: Option<f64>,
    #[arg(long)]
    pub q_mid: Option<f64>,
    #[arg(long)]
    pub penalty_multiplier: Option<f64>,
}

pub fn run(ctx: &mut Ctx, args: EvaluateArgs) -> CmdResult {
    let policy = &mut ctx.config.evaluate.penalty;
    if let Some(f) = args.penalty_fallback {
        policy.fallback = Some(f);
    }
    if let Some(q) = args.q_hi {
        policy.q_hi = q;
    }
    if let Some(q) = args.q_mid {
        policy.q_mid = q;
    }
    if let Some(m) = args.penalty_multiplier {
        policy.multiplier = m;
    }
    ctx.config.validate().map_err(Failure::config)?;
    let policy = &ctx.config.evaluate.penalty;
    let norm = &ctx.config.evaluate.normalization;

    let manifest = read_manifest(&args.manifest)?;
    if manifest.is_empty() {
        return Err(Error::Manifest {
            line: 0,
            message: "manifest has no records".into(),
        }
        .into());
    }
    let inputs = manifest.load_inputs()?;
    let batch = evaluate_batch(&inputs, policy, norm).map_err(|e| match e {
        Error::EmptySample => Failure::config(Error::InvalidParameter(
            "no object was localized and no penalty fallback is configured".into(),
        )),
        other => Failure::input(other),
    })?;

    let mut objects: Vec<ObjectReport> = inputs
        .iter()
        .zip(&batch.reports)
        .map(|(input, report)| {
            ObjectReport::new(
                &input.item_id,
                &input.object_id,
                input.localized.is_some(),
                report,
                norm,
            )
        })
        .collect();
    objects.sort_by(|a, b| (&a.item_id, &a.object_id).cmp(&(&b.item_id, &b.object_id)));
    let sorted: Vec<MetricReport> = objects.iter().map(ObjectReport::metric_report).collect();
    let summary = aggregate(&sorted)?;

    let localized_count = objects.iter().filter(|o| o.localized).count();
    let mut records: Vec<ReportRecord> = objects.into_iter().map(ReportRecord::Object).collect();
    records.push(ReportRecord::Summary(SummaryReport {
        count: records.len(),
        localized_count,
        metrics: summary.metrics,
        deqa: summary.deqa,
        phys_vlm: summary.phys_vlm,
        penalties: batch.penalties,
        normalization: *norm,
    }));

    dry_run_note(
        ctx,
        "evaluate",
        serde_json::json!({"objects": inputs.len(), "localized": localized_count}),
    );
    emit(ctx, args.output.as_deref(), &encode_report(&records))
}
