//! Exact laboratory for generalized (n+1)-systems of parametric geometry of
//! numbers: construction, validation, exponent extraction, transference
//! checks, independence evidence and a brute-force successive-minima oracle.

pub mod exponents;
pub mod export;
pub mod families;
pub mod independence;
pub mod minima;
pub mod rational;
pub mod system;
pub mod transference;
