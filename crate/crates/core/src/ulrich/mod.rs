//! Dimension-vector constraint systems for Ulrich bundles, their finiteness
//! certificates, candidate enumeration and trichotomy reports.

mod certificate;
mod enumerate;
mod system;
mod transform;
mod trichotomy;

pub use certificate::{finiteness_certificate, CertificateClass, FinitenessCertificate};
pub use enumerate::{enumerate_candidates, enumerate_candidates_parallel};
pub use system::{vertex_classes, UlrichSystem, VertexClass};
pub use transform::{cone_margin, transformation, verify_transformations, Diagonalization, SurdForm};
pub use trichotomy::{
    classify_trichotomy, classify_trichotomy_parallel, reports_to_csv, Candidate, RankCandidates, TrichotomyReport,
    Verdict,
};
