//! Exact and certified computations around the weight-graded cohomology of
//! Hilbert modular varieties attached to totally real fields.

pub mod interval;
pub mod linalg;
pub mod numfield;
pub mod poly;
pub mod quadarith;
pub mod group;
pub mod cohmodel;
pub mod extclass;
pub mod plectic;
pub mod toroidal;
