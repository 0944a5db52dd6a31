//! Canonical bases of the equivariant K-theory and cohomology of symplectic
//! toric manifolds, computed exactly from the moment polytope.
//!
//! Classes are fixed-point restriction tables over the GKM graph. The crate is
//! `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod symcore;
pub mod fixtures;
pub mod gkm;
pub mod equivariant;
pub mod ktheory;
pub mod cohomology;
pub mod kirwan;
