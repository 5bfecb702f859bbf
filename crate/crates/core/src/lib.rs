//! Picard lattices of del Pezzo surfaces, quiver Tits forms, and the integer
//! constraint systems whose solutions are candidate dimension vectors of
//! Ulrich bundles.
//!
//! Polarizations on blow-ups use the basis `(l, l_1, ..., l_d)` with negative
//! exceptional coefficients: the anticanonical class of `X_3` is `3,-1,-1,-1`.

pub mod error;
pub mod lattice;
pub mod oracle;
pub mod quiver;
pub mod ulrich;

pub use error::{Error, Result};
pub use lattice::{Divisor, Surface, SurfaceKind};
pub use oracle::{Definiteness, RationalMatrix};
pub use quiver::{DiagramType, DimVector, Quiver, RootClass, TitsTarget};
pub use ulrich::{
    classify_trichotomy, enumerate_candidates, finiteness_certificate, CertificateClass, FinitenessCertificate,
    TrichotomyReport, UlrichSystem, Verdict,
};
