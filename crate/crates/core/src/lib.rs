//! Tessellated surfaces, complexes of finite groups, and Bourdon-building
//! lattice quotients.
//!
//! The library works with closed oriented surfaces tessellated by `p`-gons,
//! all of whose vertices have valence four (the combinatorial shadow of a
//! tiling by regular right-angled hyperbolic polygons).  On top of a
//! tessellation it builds complexes of finite abelian groups and decides,
//! by exact integer computation, when the tessellation underlies a complex
//! of groups whose universal development is the Bourdon building `I_{p,v}`
//! — equivalently, when the surface is the quotient of `I_{p,v}` by a
//! uniform lattice.
//!
//! Everything is exact: incidence data is integral, linear algebra runs
//! over arbitrary-precision integers (Smith normal form), and group theory
//! is carried out on explicitly enumerated finite abelian groups.  No
//! floating point is used anywhere.
//!
//! Module map, bottom of the dependency order first:
//!
//! * [`snf`] — integer matrices, Smith normal form, exact linear solvers.
//! * [`abelian`] — finite abelian groups, subgroups, monomorphisms.
//! * [`diophantine`] — the unimodularity product equation and its
//!   solvability predicates.
//! * [`surface`] — the dart model of a tessellated surface: validation,
//!   barycentric subdivision, geodesics, parallelism classes, dual graph.
//! * [`tess`] — constructions of tessellations for every admissible
//!   `(p, F)`, with edge colorings and native homology certificates.
//! * [`homology`] — chain complexes, `H_1`, coefficient certificates,
//!   vertex types, intersection pairing.
//! * [`indexing`] — indexings of the barycentric subdivision and the
//!   unimodularity test.
//! * [`cog`] — complexes of finite abelian groups, local development
//!   links, the `K_{v,v}` test, and the two building constructions.
//! * [`decide`] — the decision procedure for `(p, v, g)` and for a fixed
//!   tessellation.
//! * [`json`] — serde schemas for every artifact, with canonical
//!   byte-stable serialization.

pub mod abelian;
pub mod cog;
pub mod decide;
pub mod diophantine;
pub mod homology;
pub mod indexing;
pub mod json;
pub mod snf;
pub mod surface;
pub mod tess;

pub use abelian::{FiniteAbelianGroup, Monomorphism, Subgroup};
pub use cog::{build_even_v, build_from_certificate, ComplexOfGroups, LinkGraph};
pub use decide::{decide, decide_over_tiling, Outcome, Verdict};
pub use homology::{
    CertKind, ChainComplex, CoefficientCertificate, LayeredCertificate, NonzeroSearch, SignSearch,
};
pub use surface::{BKind, BarycentricEdge, Geodesic, ParallelismClasses, TiledSurface};
pub use tess::{build_any, Build, Construction};
