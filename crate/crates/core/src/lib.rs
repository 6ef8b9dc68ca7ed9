//! Parametrized games: strategic-form solvers, parametric decision lists,
//! parameter sampling with nearest-sample lookup, and closed-form models of
//! a final-round wagering game, generalized Kuhn poker and a Weakest Link
//! voting endgame.

pub mod cheatsheets;
pub mod error;
pub mod jeopardy;
pub mod kuhn;
pub mod numfmt;
pub mod pdl;
pub mod sampling;
pub mod strategic;
pub mod weakest_link;

pub use error::GameError;
pub use pdl::{parse_pdl, Assignment, Distribution, ParamStrategy, Pdl, PdlError};
pub use strategic::{
    best_response, expected_utility, max_regret, solve_2x2, BimatrixGame, MixedStrategy, Player, StrategyProfile,
    TwoByTwoPayoffs,
};
