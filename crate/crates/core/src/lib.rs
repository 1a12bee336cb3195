//! Symbolic computation in two families of infinite groups whose algorithmic
//! hardness is controlled by a pluggable function `f: N -> N`.
//!
//! The library is organized around the separation between *evaluating* `f`
//! (expensive) and *verifying* a claimed value `f(n) = m` (cheap):
//!
//! * [`oracle`] — pluggable function oracles with separately metered
//!   evaluation and verification interfaces.
//! * [`afgroup`] — the countable abelian group `A_f` on generators
//!   `a_n, b_n` with relations `a_n^{f(n)} = b_n`: word reduction, the word
//!   problem (verification-only) and the discrete log problem
//!   (evaluation-requiring).
//! * [`gfgroup`] — the two-generated group `G_f = <F, s>` inside an iterated
//!   wreath product: canonical forms, arithmetic, the embedding of `A_f`,
//!   word problem and discrete log.
//! * [`semantics`] — an independent brute-force model of the wreath product,
//!   used as a test oracle for every `gfgroup` operation.
//! * [`protocol`] — a toy key-exchange scheme built on a commutative group
//!   action, with shares transported as `G`-words.
//! * [`bench`] — deterministic step-count records demonstrating that discrete
//!   log cost tracks evaluation cost while the word problem tracks only
//!   verification cost.

pub mod afgroup;
pub mod bench;
pub mod error;
pub mod gfgroup;
pub mod oracle;
pub mod protocol;
pub mod semantics;

mod numutil;

pub use afgroup::{ATerm, AWord, DlpResult, Family, ReducedAWord};
pub use bench::BenchRecord;
pub use error::Error;
pub use gfgroup::{AlphaTerm, CanonicalForm, CommTerm, GWord, Gen};
pub use oracle::{FunctionOracle, StepMeter};
pub use protocol::{ActionInstantiation, Message, PairFunctions, Session};
pub use semantics::{AVec, ConcreteElement, LElem};
