//! Idempotent semirings, free semimodules over them, kernel operators, and
//! tensor products of idempotent semimodules in free and extensional form.

pub mod cli;
pub mod error;
pub mod exttensor;
pub mod freemod;
pub mod freetensor;
pub mod harness;
pub mod kernelop;
pub mod report;
pub mod semiring;
pub mod text;
