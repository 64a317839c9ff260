//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical
//! failure. Results and a `key=value` summary line go to stdout,
//! diagnostics to stderr.

use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::ann::{train_lm_restarts, LmConfig, TrainReport};
use crate::artifacts::{export_eval_csv, export_scatter, load_model, save_model, Provenance, TrainingSummary};
use crate::dataset::{self, loocv_splits, DataSplit, Dataset, Features, SplitRatios, Target};
use crate::error::{Error, Result};
use crate::eval::{fmt_opt, EvalReport, RawPair};
use crate::geotech::{check_validity, AttritionTestRecord};
use crate::linreg::LinearModel;
use crate::model::{Model, ModelKind};
use crate::par::{self, Execution};

const EXIT_USAGE: i32 = 1;

#[derive(Debug, Parser)]
#[command(name = "aggpredict", version, about = "Predict LA and MDE coefficients of carbonate aggregates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TargetArg {
    La,
    Mde,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::La => Target::La,
            TargetArg::Mde => Target::Mde,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Ols,
    Ann,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Ols => ModelKind::Ols,
            ModelArg::Ann => ModelKind::Ann,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Attrition coefficient 100·m/M from test masses (grams)
    Coeff {
        #[arg(long)]
        total_mass: f64,
        #[arg(long)]
        fines_mass: f64,
        #[arg(long, value_enum)]
        kind: TargetArg,
    },
    /// Fit one model for one target and write a model file
    Fit {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum)]
        target: TargetArg,
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        ann: AnnArgs,
        /// Leave the creation timestamp out of the model file
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Score a model against measured values
    Evaluate {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        plot: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Predict coefficients for one sample or a CSV of samples
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, requires_all = ["density", "porosity"], conflicts_with = "data")]
        velocity: Option<String>,
        #[arg(long, requires = "velocity")]
        density: Option<String>,
        #[arg(long, requires = "velocity")]
        porosity: Option<String>,
        #[arg(long, required_unless_present = "velocity")]
        data: Option<PathBuf>,
    },
    /// Leave-one-out cross-validation
    Loocv {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum)]
        target: TargetArg,
        #[arg(long, value_enum)]
        model: ModelArg,
        #[command(flatten)]
        ann: AnnArgs,
    },
    /// Write the predicted-vs-measured scatter plot as SVG
    Plot {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Args)]
struct AnnArgs {
    /// Hidden units
    #[arg(long, default_value_t = 5)]
    hidden: usize,
    /// Weight-initialization and split seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    /// Train:validation:test proportions (fit only)
    #[arg(long, default_value = "5:1:1")]
    ratios: String,
    #[arg(long, default_value_t = 1e-3)]
    mu0: f64,
    #[arg(long, default_value_t = 10.0)]
    mu_inc: f64,
    #[arg(long, default_value_t = 0.1)]
    mu_dec: f64,
    #[arg(long, default_value_t = 1e10)]
    mu_max: f64,
    #[arg(long, default_value_t = 1000)]
    max_epochs: usize,
    #[arg(long, default_value_t = 1e-10)]
    goal_mse: f64,
    #[arg(long, default_value_t = 1e-10)]
    min_grad: f64,
    #[arg(long, default_value_t = 6)]
    max_val_fail: usize,
}

impl AnnArgs {
    fn config(&self) -> LmConfig {
        LmConfig {
            hidden: self.hidden,
            mu0: self.mu0,
            mu_inc: self.mu_inc,
            mu_dec: self.mu_dec,
            mu_max: self.mu_max,
            max_epochs: self.max_epochs,
            goal_mse: self.goal_mse,
            min_grad: self.min_grad,
            max_val_fail: self.max_val_fail,
            seed: self.seed,
        }
    }

    fn describe(&self) -> String {
        format!(
            "hidden={} seed={} restarts={} ratios={} mu0={:e} mu_inc={} mu_dec={} mu_max={:e} max_epochs={} goal_mse={:e} min_grad={:e} max_val_fail={}",
            self.hidden,
            self.seed,
            self.restarts,
            self.ratios,
            self.mu0,
            self.mu_inc,
            self.mu_dec,
            self.mu_max,
            self.max_epochs,
            self.goal_mse,
            self.min_grad,
            self.max_val_fail
        )
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn out(&mut self, line: &str) -> Result<()> {
        writeln!(self.out, "{line}")?;
        Ok(())
    }

    fn warn(&mut self, line: &str) {
        let _ = writeln!(self.err, "warning: {line}");
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let mut io = Io { out, err };
    match dispatch(cli.command, &mut io) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(io.err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, io: &mut Io) -> Result<()> {
    match command {
        Command::Coeff { total_mass, fines_mass, kind } => {
            let target: Target = kind.into();
            let value = AttritionTestRecord::new(target, total_mass, fines_mass)?.coefficient()?;
            io.out(&format!("{}={value:.2}", target.label()))
        }
        Command::Fit { data, target, model, out, ann, no_timestamp } => {
            run_fit(io, &data, target.into(), model.into(), &out, &ann, no_timestamp)
        }
        Command::Evaluate { data, model, plot, csv } => {
            run_evaluate(io, &data, &model, plot.as_deref(), csv.as_deref())
        }
        Command::Predict { model, velocity, density, porosity, data } => {
            run_predict(io, &model, velocity.zip(density).zip(porosity), data.as_deref())
        }
        Command::Loocv { data, target, model, ann } => run_loocv(io, &data, target.into(), model.into(), &ann),
        Command::Plot { data, model, out } => {
            let (model, _) = load_model(&model)?;
            let report = EvalReport::for_model(&model, &read_dataset(&data)?, None)?;
            export_scatter(&report, &out)?;
            io.out(&format!(
                "plot={} target={} model={} n={} r2_cod={} r2_pearson={}",
                out.display(),
                report.target.key(),
                report.model_kind.key(),
                report.metrics.n,
                fmt_opt(report.metrics.r2_cod),
                fmt_opt(report.metrics.r2_pearson)
            ))
        }
    }
}

fn read_dataset(path: &Path) -> Result<Dataset> {
    Dataset::load_csv(File::open(path)?)
}

/// Dataset restricted to samples that carry `target`.
fn labelled_subset(data: &Dataset, target: Target) -> Result<Dataset> {
    let samples: Vec<_> = data.samples.iter().filter(|s| s.target(target).is_some()).cloned().collect();
    if samples.is_empty() {
        return Err(Error::TargetAbsent(target.label()));
    }
    Ok(Dataset { samples, grain_class: data.grain_class.clone() })
}

fn fit_ols(data: &Dataset, split: &DataSplit, target: Target) -> Result<LinearModel> {
    LinearModel::fit(&data.labelled(&split.train, target), target)
}

fn log_report_warnings(io: &mut Io, report: &TrainReport) {
    for w in &report.warnings {
        io.warn(w);
    }
}

fn run_fit(
    io: &mut Io,
    data_path: &Path,
    target: Target,
    kind: ModelKind,
    out: &Path,
    ann: &AnnArgs,
    no_timestamp: bool,
) -> Result<()> {
    let full = read_dataset(data_path)?;
    let data = labelled_subset(&full, target)?;
    let created_unix =
        if no_timestamp { None } else { SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs()) };
    let mut provenance = Provenance {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        dataset_fingerprint: full.fingerprint(),
        created_unix,
        normalized_inputs: true,
        ..Provenance::default()
    };

    match kind {
        ModelKind::Ols => {
            io.out(&format!("config model=ols target={}", target.key()))?;
            let split = DataSplit::all_train(data.len());
            let model = Model::Linear(fit_ols(&data, &split, target)?);
            let train = EvalReport::for_model(&model, &data, Some(&split.train))?;
            save_model(&model, provenance, out)?;
            let m = &train.metrics;
            io.out(&format!(
                "fit model=ols target={} n_train={} r2_cod={} r2_pearson={} rmse={:.3} out={}",
                target.key(),
                m.n,
                fmt_opt(m.r2_cod),
                fmt_opt(m.r2_pearson),
                m.rmse,
                out.display()
            ))
        }
        ModelKind::Ann => {
            io.out(&format!("config model=ann target={} {}", target.key(), ann.describe()))?;
            let ratios = SplitRatios::parse_proportions(&ann.ratios)?;
            let split = dataset::split(&data, ratios, ann.seed)?;
            let cfg = ann.config();
            let (mlp, report) = train_lm_restarts(&data, &split, target, &cfg, ann.restarts, Execution::default())?;
            log_report_warnings(io, &report);
            let model = Model::Mlp(mlp);
            let train = EvalReport::for_model(&model, &data, Some(&split.train))?;

            provenance.split_seed = Some(ann.seed);
            provenance.split_ratios = Some([ratios.train, ratios.validation, ratios.test]);
            provenance.restarts = Some(ann.restarts);
            provenance.lm_config = Some(cfg);
            provenance.training = Some(TrainingSummary::from(&report));
            save_model(&model, provenance, out)?;

            let m = &train.metrics;
            let mut line = format!(
                "fit model=ann target={} n_train={} n_validation={} n_test={} r2_cod={} r2_pearson={} rmse={:.3} stop_reason={} epochs={} train_mse={:e} final_mu={:e}",
                target.key(),
                split.train.len(),
                split.validation.len(),
                split.test.len(),
                fmt_opt(m.r2_cod),
                fmt_opt(m.r2_pearson),
                m.rmse,
                report.stop_reason.as_str(),
                report.epochs_run,
                report.final_train_mse,
                report.final_mu,
            );
            if !split.test.is_empty() {
                let test = EvalReport::for_model(&model, &data, Some(&split.test))?;
                line.push_str(&format!(
                    " test_n={} test_rmse={:.3} test_invalid={}",
                    test.metrics.n,
                    test.metrics.rmse,
                    test.counts.invalid()
                ));
            }
            line.push_str(&format!(" out={}", out.display()));
            io.out(&line)
        }
    }
}

fn run_evaluate(io: &mut Io, data: &Path, model: &Path, plot: Option<&Path>, csv: Option<&Path>) -> Result<()> {
    let (model, _) = load_model(model)?;
    let report = EvalReport::for_model(&model, &read_dataset(data)?, None)?;
    if let Some(p) = plot {
        export_scatter(&report, p)?;
    }
    if let Some(p) = csv {
        export_eval_csv(&report, p)?;
    }
    write!(io.out, "{}", report.table())?;
    if report.counts.invalid() > 0 {
        io.warn(&format!("{} physically invalid prediction(s)", report.counts.invalid()));
    }
    io.out(&report.summary_line())
}

fn parse_feature(name: &'static str, text: &str) -> Result<f64> {
    text.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or(Error::InvalidFeature { flag: name, value: text.to_string() })
}

fn prediction_line(id: &str, model: &Model, features: &Features) -> Result<(String, crate::geotech::Validity, bool)> {
    let p = model.predict(features)?;
    let flag = check_validity(p.value)?;
    Ok((
        format!(
            "id={id} target={} predicted={:.3} validity={} extrapolated={}",
            model.target().key(),
            p.value,
            flag.status.key(),
            p.extrapolated
        ),
        flag.status,
        p.extrapolated,
    ))
}

fn run_predict(
    io: &mut Io,
    model_path: &Path,
    single: Option<((String, String), String)>,
    data: Option<&Path>,
) -> Result<()> {
    let (model, _) = load_model(model_path)?;
    let inputs: Vec<(String, Features)> = match (single, data) {
        (Some(((v, d), p)), _) => vec![(
            "input".to_string(),
            Features::new(
                parse_feature("velocity", &v)?,
                parse_feature("density", &d)?,
                parse_feature("porosity", &p)?,
            ),
        )],
        (None, Some(path)) => read_dataset(path)?.samples.iter().map(|s| (s.id.clone(), s.features())).collect(),
        (None, None) => unreachable!("clap requires --data or --velocity"),
    };
    let (mut negative, mut above, mut extrapolated) = (0, 0, 0);
    for (id, f) in &inputs {
        let (line, status, ext) = prediction_line(id, &model, f)?;
        match status {
            crate::geotech::Validity::NegativeInvalid => negative += 1,
            crate::geotech::Validity::AboveHundredInvalid => above += 1,
            crate::geotech::Validity::Valid => {}
        }
        extrapolated += ext as usize;
        io.out(&line)?;
    }
    io.out(&format!(
        "predictions={} invalid_negative={negative} invalid_above_hundred={above} extrapolated={extrapolated}",
        inputs.len()
    ))
}

/// Outcome of one cross-validation fold.
struct Fold {
    index: usize,
    id: String,
    result: Result<(f64, crate::Prediction, Option<TrainReport>)>,
}

fn run_fold(data: &Dataset, split: DataSplit, target: Target, kind: ModelKind, ann: &AnnArgs, k: usize) -> Fold {
    let held = split.test[0];
    let sample = &data.samples[held];
    let measured = sample.target(target).expect("labelled subset");
    let result = (|| {
        let (model, report) = match kind {
            ModelKind::Ols => (Model::Linear(fit_ols(data, &split, target)?), None),
            ModelKind::Ann => {
                // restarts run sequentially here; the folds themselves are parallel
                let (m, r) =
                    train_lm_restarts(data, &split, target, &ann.config(), ann.restarts, Execution::Sequential)?;
                (Model::Mlp(m), Some(r))
            }
        };
        Ok((measured, model.predict(&sample.features())?, report))
    })();
    Fold { index: k, id: sample.id.clone(), result }
}

fn run_loocv(io: &mut Io, data_path: &Path, target: Target, kind: ModelKind, ann: &AnnArgs) -> Result<()> {
    let data = labelled_subset(&read_dataset(data_path)?, target)?;
    let splits = loocv_splits(&data)?;
    match kind {
        ModelKind::Ols => io.out(&format!("config model=ols target={} folds={}", target.key(), splits.len()))?,
        ModelKind::Ann => {
            io.out(&format!("config model=ann target={} folds={} {}", target.key(), splits.len(), ann.describe()))?
        }
    }
    let jobs: Vec<(usize, DataSplit)> = splits.into_iter().enumerate().collect();
    let folds = par::map(Execution::default(), jobs, |(k, s)| run_fold(&data, s, target, kind, ann, k));

    let mut raw: Vec<RawPair> = Vec::new();
    let mut first_err = None;
    for fold in folds {
        match fold.result {
            Ok((measured, pred, report)) => {
                let flag = check_validity(pred.value)?;
                let mut line = format!(
                    "fold={} id={} measured={:.3} predicted={:.3} validity={} extrapolated={}",
                    fold.index + 1,
                    fold.id,
                    measured,
                    pred.value,
                    flag.status.key(),
                    pred.extrapolated
                );
                if let Some(r) = report {
                    line.push_str(&format!(" stop_reason={} epochs={}", r.stop_reason.as_str(), r.epochs_run));
                }
                io.out(&line)?;
                raw.push((fold.id, measured, pred));
            }
            Err(e) => {
                let _ = writeln!(io.err, "fold {} ({}) failed: {e}", fold.index + 1, fold.id);
                io.out(&format!("fold={} id={} status=failed", fold.index + 1, fold.id))?;
                first_err.get_or_insert(e);
            }
        }
    }
    let total = data.len();
    if raw.is_empty() {
        return Err(first_err.expect("at least one fold"));
    }
    if raw.len() < total {
        io.warn(&format!("pooled metrics cover {} of {total} folds", raw.len()));
    }
    let pooled = EvalReport::from_pairs(target, kind, raw)?;
    let m = &pooled.metrics;
    io.out(&format!(
        "pooled model={} target={} folds={total} completed={} r2_cod={} r2_pearson={} rmse={:.3} mae_line1={:.3} invalid_negative={} invalid_above_hundred={}",
        kind.key(),
        target.key(),
        m.n,
        fmt_opt(m.r2_cod),
        fmt_opt(m.r2_pearson),
        m.rmse,
        m.mean_abs_line1_deviation,
        pooled.counts.negative,
        pooled.counts.above_hundred
    ))
}
