//! Matchgate and fermionic linear optics simulation.
//!
//! Pauli algebra and Lie bases live in [`algebra`], the two-qubit identities in
//! [`matchgate`], the `so(2n+1)` representation and its compiler in [`sorep`],
//! the dense reference engine in [`oracle`] and the polynomial engine in
//! [`gaussian`].

pub mod algebra;
pub mod circuit_io;
pub mod corpus;
pub mod gaussian;
pub mod matchgate;
pub mod numeric;
pub mod oracle;
pub mod sorep;

pub use algebra::{BasisKind, Letter, LieBasis, PauliString, Phase};
pub use circuit_io::{parse, Circuit, Item, MeasurementRecord, ParseError, ResultRecord, SampleRecord, Sign};
pub use gaussian::{CompiledCircuit, GaussianState};
pub use matchgate::{IdentityReport, Membership, TwoQubitOperator};
pub use oracle::{ElementaryGate, StateVector};
pub use sorep::{RotationFactor, SOElement};
