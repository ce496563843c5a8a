//! Tolerance ladder shared by the whole crate.
//!
//! Single algebraic operations are held to `ALGEBRAIC`, constructors to
//! `CONSTRUCTOR`, and products of many matrices to the looser word-level
//! values. Anything comparing against a brute-force oracle carries its own
//! tolerance next to the oracle.

/// Relative tolerance for identities of a single quaternion operation.
pub const ALGEBRAIC: f64 = 1e-12;

/// Tolerance for compositions of many operations.
pub const COMPOSED: f64 = 1e-9;

/// `P* H P = H` for freshly constructed group elements.
pub const CONSTRUCTOR: f64 = 1e-10;

/// Action of products: `act(PQ, p) = act(P, act(Q, p))`.
pub const ACTION_PRODUCT: f64 = 1e-8;

/// Hermitian-form defect allowed for words of up to 50 generators.
pub const LONG_WORD: f64 = 1e-7;

/// Beyond this defect a matrix is rejected as not in Sp(2,1).
pub const SYMPLECTIC_REJECT: f64 = 1e-6;

/// `|μ| = 1` check for unit quaternions.
pub const UNIT: f64 = 1e-9;

/// Largest real part tolerated (and then discarded) in a purely imaginary input.
pub const IMAGINARY: f64 = 1e-12;

/// Default absolute margin on `lhs >= rhs` in certificates.
pub const MARGIN: f64 = 1e-12;

/// Moduli below this are treated as zero when deciding applicability or degeneracy.
pub const ZERO: f64 = 1e-12;
