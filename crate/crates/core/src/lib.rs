//! Regular t-balanced Cayley maps on split metacyclic 2-groups.

pub mod automorphism;
pub mod bruteforce;
pub mod cayley;
pub mod classify;
pub mod cli;
pub mod metacyclic;
pub mod modular;
pub mod two_adic;
