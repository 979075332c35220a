//! Tensor semantics and numerical verification for three higher-order
//! operational theories built by iterating the completely-positive-maps
//! construction: density hypercubes, double dilation and double mixing.
//!
//! The crate is organised bottom-up:
//!
//! - [`tensor`]: dense complex tensors, contraction, axis surgery and
//!   tolerance-aware comparison (exact and up-to-positive-scalar).
//! - [`group`]: finite abelian groups, classical structures (spiders in the
//!   group-element and Fourier bases), characters, the antipode, phase
//!   functions and the Hopf-law check.
//! - [`linalg`]: a small Hermitian eigensolver and singular-value routines.
//! - [`cpm`]: pure maps, Kraus-presented completely positive maps, doubling,
//!   Choi/transfer views and the partial trace: one level of the iterated
//!   construction.
//! - [`hypercube`]: density-hypercube states, maps and effects; bridges and
//!   their realizations; decoherence and hyper-decoherence together with the
//!   probabilistic completion of the latter; the phase and hyper-phase
//!   families; embedding of quantum states and the effective quantum action.
//! - [`dilation`]: double-dilation and double-mixing semantics, the failed
//!   hyper-decoherence candidate, the sub-theory inclusion and invertibility
//!   probes.
//! - [`verify`]: seeded random generators and one runner per certified
//!   statement, producing structured [`verify::VerificationReport`]s.
//! - [`io`]: bit-stable structured-text serialization of tensors,
//!   realizations and reports.

pub mod cpm;
pub mod dilation;
pub mod group;
pub mod hypercube;
pub mod io;
pub mod linalg;
pub mod tensor;
pub mod verify;

pub use group::{ClassicalStructure, FiniteAbelianGroup, Flavor, PhaseFunction};
pub use tensor::Tensor;
