//! Numerical classification of positive functions by their asymptotic
//! scaling behaviour: regular variation, O-regular variation, finite
//! power order, and the two extreme classes dominated by / dominating
//! every power.
//!
//! Everything works in the log-log domain `l(y) = log U(e^y)`, so
//! arguments as large as `e^{10^9}` stay representable. Verdicts are
//! numerical decisions over windowed extrema trails, with the evidence
//! attached; `Inconclusive` is a first-class outcome.

pub mod catalog;
pub mod classifier;
pub mod error;
pub mod limit;
pub mod logfn;
pub mod quad;

pub use catalog::{
    build_m, build_orv, example, ClassName, CoefFn, GroundTruth, MRepresentation, Membership,
    OrvRepresentation, PiecewiseConstant,
};
pub use classifier::{
    full_report, recommended_config, ClassificationReport, OrvFit, ReportConfig, Verdict3,
};
pub use error::{Error, Result};
pub use limit::{LimitVerdict, Tolerances, VerdictKind, WindowStat};
pub use logfn::{GridMode, GridSpec, LogFunction, Y_CAP};
