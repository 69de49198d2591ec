//! Exact arithmetic for the two-bidder position-randomized auction: optimal
//! bid sets, equilibrium values, constructive adversary best responses and a
//! brute-force verification oracle.

#![no_std]

extern crate alloc;

pub mod best_response;
pub mod bids;
pub mod ellset;
pub mod equilibrium;
pub mod error;
pub mod figure;
pub mod oracle;
pub mod psi;
pub mod rational;

pub use best_response::{best_response, BestResponseReport};
pub use bids::{expected_win_exact, make_profile, zero_sum_check, BidProfile};
pub use equilibrium::{
    equilibrium, AuctionInstance, Branch, EquilibriumResult, Fidelity, SpectrumDecomposition,
};
pub use error::{Error, Result};
pub use psi::{optimal_bid_set, PsiConstruction};
pub use rational::Rational;
