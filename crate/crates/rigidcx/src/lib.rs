//! Exact computational homological algebra over commutative rings.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactlin`]: exact scalars and dense linear algebra (Smith form, kernels, solving);
//! * [`polyring`]: presented rings, Gröbner bases, syzygies and finitely presented modules;
//! * [`dgcore`]: DG algebras, DG modules, Hom and tensor complexes, cohomology, homotopies;
//! * [`resolve`]: Koszul complexes, semi-free algebra and module resolutions, lifting;
//! * [`squaring`]: the squaring operation on objects and morphisms, cup products;
//! * [`smoothdiff`]: Kähler differentials, generalized fractions, the fundamental isomorphism;
//! * [`rigidity`]: rigid complexes, inverse images, traces and the existence pipeline;
//! * [`cli`]: the declaration language, verb dispatch and brute-force oracles.

pub mod error;
pub mod exactlin;
pub mod polyring;
pub mod dgcore;
pub mod resolve;
pub mod squaring;
pub mod smoothdiff;
pub mod rigidity;
pub mod cli;

pub use error::{Error, Result};
