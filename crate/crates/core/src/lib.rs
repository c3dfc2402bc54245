// SPDX-License-Identifier: Apache-2.0

//! Leaf languages of train-track maps and bounded-depth classification of
//! boundary points of free groups.

pub mod cayley;
pub mod classify;
pub mod index;
pub mod leaflang;
pub mod rays;
pub mod traintrack;
pub mod words;

pub use cayley::{
    build_ball, estimate_delta, is_local_geodesic, BallOptions, CayleyBall, CayleyError, DeltaEstimate,
    DeltaOptions, GeodesicBackend, Presentation,
};
pub use classify::{
    classify_conical, classify_injective, classify_recurrent, consistency_check, Caveat, ClassifierKind,
    ClassifyError, ConicalCertificate, ConsistencyReport, Payload, Verdict, VerdictKind,
};
pub use index::FactorIndex;
pub use leaflang::{build_language, BuildOptions, HyperbolicityParams, LeafLanguage, LeafLanguageError};
pub use rays::{build_w_infinity, Provenance, RayError, RayScript, RayStream, WInfinityScheme};
pub use traintrack::{fixed_ray, sha256_hex, TrainTrackError, TrainTrackMap};
pub use words::{Alphabet, Letter, ReducedWord, WordError};
