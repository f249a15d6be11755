//! A workbench for positive inductive definitions over a concrete
//! programming system and the hyperarithmetical coding built on top of it.

pub mod coding;
pub mod fixpoint;
pub mod formula;
pub mod hyp;
pub mod kernel;
pub mod nat;
pub mod verify;

pub use nat::{nat, Nat};
