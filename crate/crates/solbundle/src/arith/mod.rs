//! Exact arithmetic: overflow-safe integers, rationals, cyclotomic numbers,
//! and integer-matrix normal forms.

mod cyclo;
mod int;
mod matrix;
mod rational;

pub use cyclo::{
    cyclotomic_polynomial, divisors, euler_phi, root_of_unity_int, CycloNum,
};
pub use int::Int;
pub use matrix::{gcd4, smith_normal_form, IntMatrix2, Snf};
pub use rational::Rational;
