//! Exact computation of higher-order orbifold Euler characteristics.
//!
//! The library computes the order-`k` orbifold Euler characteristic
//! `chi^(k)(X, G)` of a group action by three independent routes and keeps
//! every intermediate value as an exact integer:
//!
//! - [`orbifold`]: the commuting-tuple definition (oracle), the recursion
//!   over conjugacy classes, and the orbit-type decomposition, for finite
//!   groups acting on finite sets;
//! - [`wreath`]: wreath products `G ≀ S_n` acting on `X^n`, their type-based
//!   conjugacy classification, and a recursive engine that evaluates
//!   `chi^(k)(X^n, G_n)` without enumerating the wreath product;
//! - [`series`]: truncated integer power series for both sides of the
//!   generating-series identity `sum_n chi^(k)(X^n, G_n) t^n =
//!   (prod (1 - t^{r_1...r_k})^{r_2 r_3^2 ... r_k^{k-1}})^{-chi^(k)(X,G)}`;
//! - [`euler`] and [`lie`]: integration with respect to the Euler
//!   characteristic over stratified models of the conjugacy-class spaces of
//!   `S^1` and `O(2)`, extending the definitions to those compact groups.

pub mod budget;
pub mod error;
pub mod euler;
pub mod group;
pub mod gspace;
mod hash;
pub mod input;
pub mod lie;
pub mod orbifold;
pub mod series;
pub mod wreath;

pub use budget::Budget;
pub use error::{Error, Result};
pub use group::{ConjugacyClass, FiniteGroup, GroupElement, Subgroup};
pub use gspace::FiniteGSet;
pub use orbifold::ChiOrder;
pub use series::TruncatedSeries;
