//! Exact and certified computation around principal algebraic actions of
//! the discrete Heisenberg group.
//!
//! The crate provides the group and group-ring arithmetic, the q-binomial
//! (Gaussian coefficient) machinery, ℓ¹-invertibility certificates built on
//! the local principle at each central character, nonexpansiveness
//! witnesses (characters, monomial representations, cocycle zeros),
//! summable homoclinic kernels for the stencil `2 - x⁻¹ - y⁻¹`, and the
//! toppling experiments behind its equal-entropy symbolic cover.
//!
//! Everything combinatorial is exact (arbitrary-precision integers and
//! rationals); floating point appears only in the numeric certificate and
//! quadrature layers. The crate is `no_std` + `alloc`; IO, CLI and report
//! formats live in the companion crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bivar;
pub mod cocycle;
pub mod coeff;
pub mod config;
pub mod cover;
pub mod cyclo;
pub mod decide;
pub mod group;
pub mod homoclinic;
pub mod laurent;
pub mod localize;
pub mod mahler;
pub mod parse;
pub mod qbinom;
pub mod ring;
pub mod roots;
pub mod twisted;
pub mod witness;

pub use config::{BoxWindow, Configuration};
pub use group::GroupElement;
pub use laurent::LaurentPoly;
pub use parse::{parse_poly, ParseError};
pub use ring::{format_canonical, tau_swap, CplxElement, IntElement, RatElement, RingElement};
