//! Computational toolkit for growth and diameter questions in the classical
//! matrix groups `SL_n`, `SO_N` and `Sp_2n` over finite fields.

pub mod cayley;
pub mod classify;
pub mod constants;
pub mod degrees;
pub mod escape;
pub mod gf;
pub mod groups;
pub mod growth;
pub mod matrix;
pub mod report;
pub mod rng;
pub mod torus_lab;
pub mod varieties;
pub mod verify;
