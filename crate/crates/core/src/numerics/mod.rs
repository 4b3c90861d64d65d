//! Deterministic numeric building blocks shared by the model and the optimizer.

mod activation;
mod matrix;
mod rng;

pub use activation::{sigmoid, tanh_act};
pub use matrix::{dot, gemm, vec_add, vec_mul, vec_scale, Matrix, Op};
pub use rng::{derive_seed, Rng};
