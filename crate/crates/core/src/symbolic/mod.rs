//! Julia components by inverse-curve continuation, itineraries, the quasicircle
//! classifier and the bounded-turning estimate.

mod curve;
mod trace;
mod word;

pub use curve::{hausdorff, turning_constant, winding_number, ComponentCurve, DEFAULT_PAIR_BUDGET};
pub use trace::{default_base_radius, itinerary_of_point, pull_back_curve, symbol_of, trace_component, BandModel};
pub use word::{classify_itinerary, classify_run_lengths, ItineraryWord, RunLengthSequence, Verdict};

use crate::families::FamilyError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SymbolicError {
    #[error("point lies in a trap disk, not in a band")]
    OutOfBand,
    #[error("continuation broke down (step below the floor)")]
    ContinuationBreakdown,
    #[error("no preimage seed found in band {0}")]
    SeedNotFound(u8),
    #[error("orbit entered a trap after {step} steps")]
    OrbitEscaped { step: usize, prefix: Vec<u8> },
    #[error("word has no periodic tail")]
    Undecidable,
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),
    #[error("invalid word: {0}")]
    BadWord(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
}
