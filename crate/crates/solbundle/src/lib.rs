//! Exact modular data of SOL torus bundles.
//!
//! A torus bundle over the circle with monodromy `A ∈ SL(2,ℤ)`, `|tr A| > 2`,
//! determines a finite set of non-Abelian SL(2,ℂ) characters together with
//! Chern–Simons invariants and adjoint torsions. This crate constructs the
//! resulting modular data (simple objects, fusion rules, S- and T-matrices,
//! twists, quantum dimensions) twice — once from loop operators on the
//! bundle, once from the particle-hole (ℤ₂) equivariantization of a pointed
//! premodular category `C(G,q)` — and machine-checks that the two agree,
//! entry by entry, in exact cyclotomic arithmetic.
//!
//! The crate is organized along the pipeline:
//!
//! * [`arith`] — rationals, cyclotomic numbers, integer matrix normal forms;
//! * [`bundle`] — monodromy validation and bundle-level invariants;
//! * [`characters`] — the character set, quadratic form, CS/torsion data;
//! * [`loops`] — loop operators and the S-matrix they generate;
//! * [`pointed`] — `C(G,q)`, its ℤ₂-equivariantization, fusion and S/T data;
//! * [`verify`] — the consistency and coincidence checks, with witnesses;
//! * [`analyze`], [`batch`], [`output`], [`cli`] — the command-line surface.

pub mod analyze;
pub mod arith;
pub mod batch;
pub mod bundle;
pub mod characters;
pub mod cli;
pub mod loops;
pub mod output;
pub mod pointed;
pub mod verify;
