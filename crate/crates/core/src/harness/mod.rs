//! Corpus survey, experiments and the property-suite runner.

pub mod cache;
pub mod corpus;
pub mod experiments;
pub mod props;
pub mod survey;

pub use corpus::{parse_corpus, shipped_corpus, CorpusEntry, Loaded};
pub use experiments::{agl_trend, binomial_check, AglRow, BinomialCheckRow};
pub use props::{verify_props, PropsReport, SuiteReport};
pub use survey::{run_survey, summarize, to_csv, to_jsonl, SurveyRow, SurveySummary};
