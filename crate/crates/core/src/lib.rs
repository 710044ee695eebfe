//! Clearing payments and payment games in financial networks where firms
//! repay creditors by priority classes, paying proportionally inside a
//! class.
//!
//! The crate works in exact rational arithmetic throughout. Start with
//! [`model::validate_network`] or [`model::NetworkBuilder`], clear a
//! strategy profile with [`clearing::cds_clear`], and analyse the whole game
//! with [`game::analyze`].

pub mod clearing;
pub mod error;
pub mod fixtures;
pub mod game;
pub mod model;
pub mod money;
pub mod report;
pub mod strategy;
pub mod transform;
pub mod verify;

pub use error::{Error, Result};
pub use model::{FinancialNetwork, LiabilityMatrix, NetworkBuilder};
pub use money::Money;
pub use strategy::{Strategy, StrategyProfile};
