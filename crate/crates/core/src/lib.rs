//! Toolkit for building and evaluating minimal polynomial-system solvers
//! with the action-matrix method.
//!
//! The pipeline: parse or generate a polynomial system, compute reduced
//! Gröbner bases over Z_p ([`groebner`], enumerated across monomial
//! orderings by [`fan`]), pick a quotient-ring monomial basis either from
//! standard monomials or by heuristic sampling ([`basis`]), build and
//! prune an elimination template for it ([`template`]), then instantiate
//! the template with floating-point data and read solutions out of the
//! action matrix's eigenvectors ([`numeric`]). Built-in problem
//! generators live in [`problems`].

pub mod basis;
pub mod fan;
pub mod field;
pub mod groebner;
pub mod numeric;
pub mod poly;
pub mod problems;
pub mod sysio;
pub mod template;
pub mod util;
