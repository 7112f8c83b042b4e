//! Dyadic Fourier band analysis on periodic grids.
//!
//! The crate decomposes grid-sampled periodic functions into dyadic
//! frequency bands, either isotropic (annuli resolved by a single level
//! index) or dominating mixed (tensor products resolved by one level per
//! axis), and evaluates the Lizorkin-Triebel and Besov style quasi-norms
//! built from those bands. On top of the norm engine sit generators for
//! extremal test functions with closed-form norm behaviour and routines
//! that compare the isotropic and mixed scales empirically.

pub mod acceptance;
pub mod dyadic;
pub mod embed;
mod error;
pub mod grid;
pub mod maximal;
pub mod quasinorm;
pub mod testfun;

#[cfg(test)]
pub(crate) mod testsupport;

pub use acceptance::{run as run_criterion, run_all as run_all_criteria, CriterionOutcome};
pub use embed::{
    classifier_verdict, classify_f_into_sf, classify_sf_into_f, necessary_conditions,
    random_corpus_check, ratio_scan, ratio_scan_on, CoeffPolicy, Comparison, ConditionCheck,
    CorpusReport,
    ScanPoint, ScanReport, Verdict,
};
pub use error::{Error, Result};
pub use grid::{Grid, GridFunction, Spectrum};
pub use maximal::{dir_max, hl_max, peetre_max};
pub use quasinorm::{
    lp_lq_norm, nikolskij_decompose, nikolskij_reconstruct, norm_isotropic_b, norm_isotropic_f,
    norm_mixed_b, norm_mixed_f, quasi_norm, quasi_norm_spectrum, Decomposition, Family, Scale,
    SpaceParams,
};
pub use testfun::{FamilySpec, Oracle, TestFamily};
