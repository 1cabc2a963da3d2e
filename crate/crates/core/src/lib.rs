//! Linear centralizer attacks on group-based key exchange.

pub mod ff;
pub mod linalg;
pub mod braid;
pub mod lkrep;
pub mod attacks;
pub mod protocols;
pub mod pipeline;
pub mod io;
pub mod runner;
pub mod bench;
pub mod selfcheck;
