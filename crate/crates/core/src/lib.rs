//! Graph polynomials for Feynman integrals and the machinery to decide
//! whether a set of them can be integrated out one variable at a time.
//!
//! The crate provides:
//!
//! * exact multivariate polynomial arithmetic over Q with factorization
//!   ([`poly`]);
//! * multigraphs with external momentum labels, spanning-forest enumeration,
//!   minor containment, and vertex width ([`graph`]);
//! * symbolic kinematics: momentum-conservation-reduced dot-product bases
//!   ([`kinematics`]);
//! * the two spanning-forest polynomials of a labeled graph ([`symanzik`]);
//! * compatibility-graph reduction: the step, bracket sets, and the search
//!   for an order that keeps every step linear ([`reduction`]);
//! * a catalog of obstruction graphs and a screening routine
//!   ([`minors`]).

pub mod graph;
pub mod kinematics;
pub mod minors;
pub mod poly;
pub mod reduction;
pub mod rng;
pub mod symanzik;
