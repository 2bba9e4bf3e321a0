//! Corpus statistics under lossy letter codings, and maximum-entropy
//! prediction of the resulting code-frequency distributions.
//!
//! The pipeline this crate supports:
//!
//! 1. [`corpus`] — load UTF-8 text and tokenize it into a word corpus
//!    (alphabetic scripts) or a per-character corpus (Han scripts).
//! 2. [`coder`] — re-encode each word under a coding scheme that may merge
//!    distinct words into the same code (prefix codes, 3-2-1 chunk codes),
//!    keeping the code → source-word alignment.
//! 3. [`stats`] — count codes, build the frequency spectrum `N(k)`, the
//!    empirical distribution `P(k) = N(k)/N` and its CCDF, and measure the
//!    multiplicity curve `f̄(k)` (mean number of distinct source words per
//!    code occurring `k` times).
//! 4. [`multmodel`] — the three-parameter multiplicity parametrization
//!    `f(k) = k^α ((k+k_c−1)/k_c)^(−β)` and a deterministic fit of it.
//! 5. [`rgf`] — the random-group-formation maximum-entropy estimate
//!    `P(k) = A e^(−bk) (f(k)/k)^γ`, solved for `(A, b, γ)` from the triple
//!    `(M, N, k_max)` and a multiplicity function, plus information
//!    diagnostics.
//! 6. [`compare`] — distribution-agreement metrics (KS distance on CCDFs,
//!    mean squared log10 deviation on log-binned densities) and report
//!    assembly.
//!
//! [`testkit`] holds independent oracles (naive quadratic counting,
//! exhaustive grid solving, seeded synthetic corpora) used by the test
//! suites; it never shares code paths with the operations it checks.

#![forbid(unsafe_code)]

pub mod coder;
pub mod compare;
pub mod corpus;
pub mod multmodel;
pub mod rgf;
mod rng;
pub mod stats;
pub mod testkit;

pub use coder::{encode_corpus, encode_token, CodedCorpus, CodingScheme};
pub use compare::{build_report, ks_distance, log_deviation, ComparisonReport};
pub use corpus::{
    decode_text, load_text, take_fraction, tokenize_chars, tokenize_words, Corpus, FractionMode,
    RawText, Script, TokenizerConfig,
};
pub use multmodel::{fit_model, FitConfig, MultiplicityModel, MultiplicitySpec};
pub use rgf::{
    expected_kmax_orderstat, info_functional, pdf, solve, InfoDiagnostics, RgfInput, RgfSolution,
    SolverConfig, Support,
};
pub use stats::{
    count, empirical_ccdf, empirical_pdf, log_bin, log_bin_curve, log_bin_pdf,
    multiplicity_curve, spectrum, BinnedSeries, DistributionSeries, FrequencySpectrum,
    MultiplicityCurve, OccurrenceTable, SeriesKind,
};
