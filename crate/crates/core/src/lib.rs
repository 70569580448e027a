//! Exact arithmetic of k-free polynomials in short intervals of F_q[x].
//!
//! A polynomial over a finite field is *k-free* if no irreducible factor
//! occurs with multiplicity k or higher, and a *short interval* centered at a
//! monic polynomial F of degree n is the set of Q with deg(F - Q) <= h. This
//! crate provides the pieces needed to study k-free polynomials in such
//! intervals at desk scale:
//!
//! - [`field`]: arithmetic in GF(p^f) for p^f <= 2^16 in a fixed
//!   polynomial-basis representation,
//! - [`poly`]: dense univariate arithmetic over GF(q), including the
//!   characteristic-p operations (iterated derivatives, p-th roots,
//!   coefficient-pattern subspaces, monomial-wise antiderivatives),
//! - [`irreducibles`]: ordered enumeration and counting of monic
//!   irreducibles, with a persistent on-disk cache,
//! - [`powerfree`]: complete factorization and the k-free predicate, correct
//!   in characteristic p,
//! - [`intervals`]: exact interval counting, k-free search, k-th-power
//!   divisor sets, and exhaustive certification scans,
//! - [`gap`]: constructive intervals without k-free polynomials via covering
//!   congruences and a CRT solve, with verifiable certificates,
//! - [`bounds`]: evaluators for the explicit sieve bounds and the n0(q, h)
//!   table they imply,
//! - [`spacing`]: brute-force verification of the spacing laws satisfied by
//!   k-th-power divisors of interval members.

pub mod bounds;
pub mod error;
pub mod field;
pub mod gap;
pub mod intervals;
pub mod irreducibles;
pub mod poly;
pub mod powerfree;
pub mod spacing;

pub use error::{Error, Result};
pub use field::{Field, FieldElement};
