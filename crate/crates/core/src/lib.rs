//! Sequential single-item Groves auctions in exact arithmetic.
//!
//! The crate evaluates Vickrey, Bailey-Cavallo and generic Groves auctions
//! when bidders announce one after another, implements the welfare-improving
//! sequential strategies for both mechanisms, and ships an exhaustive oracle
//! ([`oracle`]) that checks their optimality and welfare properties over
//! finite grids of types.

pub mod auction;
pub mod error;
pub mod grid;
pub mod mechanism;
pub mod oracle;
pub mod strategy;
pub mod sweep;
pub mod value;

pub use auction::{
    argsmax, final_utility, kth_highest, kth_highest_excluding, prefix_max, AnnouncementVector,
    Outcome, TypeVector,
};
pub use error::{Error, Result};
pub use grid::Grid;
pub use mechanism::{
    bc_redistribution, bc_tax, check_feasible, check_incentive_compatible, pivotal_tax,
    run_mechanism, Mechanism, MechanismKind, NamedRedistribution, RedistributionRule,
};
pub use oracle::{
    consistent_announcements, run_suite, Suite, SuiteConfig, VerificationReport, Witness,
};
pub use strategy::{apply_profile, social_welfare, Strategy, StrategyKind, StrategyProfile};
pub use value::Value;
