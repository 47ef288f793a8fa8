//! Exact verification of duality constructions for VB-groupoids, double
//! groupoids and Poisson double groupoids on concrete model families.

#![allow(clippy::needless_range_loop)]

pub mod coordmodels;
pub mod dvb;
pub mod exactcalc;
pub mod fingpd;
pub mod harness;
pub mod poisson;
