//! Model files, evaluation CSVs and predicted-vs-measured SVG plots.

mod eval_csv;
mod model_file;
mod svg;

pub use eval_csv::{export_eval_csv, parse_eval_csv, render_eval_csv, EvalCsv, EVAL_CSV_HEADER};
pub use model_file::{
    load_model, save_model, LinearSection, ModelFile, NetworkSection, Provenance, TrainingSummary, FORMAT_VERSION,
};
pub use svg::{export_scatter, render_scatter, PlotGeometry, SVG_SIZE};
