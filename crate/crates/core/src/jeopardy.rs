//! Two-player final-round wagering game.
//!
//! The leader holds 5, the trailer 3; each wagers a whole amount up to their
//! bank and gains it on a correct answer, loses it otherwise. The higher
//! final amount wins (+0.5 to the winner, −0.5 to the loser, 0 each on a
//! tie). `p1` and `p2` are the chances the leader and trailer answer
//! correctly.

use std::sync::OnceLock;

use crate::cheatsheets::{self, cached};
use crate::error::GameError;
use crate::pdl::{Assignment, Distribution, Matched, ObjectiveFamily, Pdl, Policy};
use crate::strategic::{expected_utility, max_regret, BimatrixGame, MixedStrategy, Player, StrategyProfile};

pub const BANK_1: usize = 5;
pub const BANK_2: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JeopardyParams {
    p1: f64,
    p2: f64,
}

impl JeopardyParams {
    pub fn new(p1: f64, p2: f64) -> Result<Self, GameError> {
        for (name, v) in [("p1", p1), ("p2", p2)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(GameError::OutOfRange { name, reason: format!("{v} is not a probability") });
            }
        }
        Ok(JeopardyParams { p1, p2 })
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn assignment(&self) -> Assignment {
        Assignment::from([("p1", self.p1), ("p2", self.p2)])
    }
}

/// Leader's payoffs, rows = leader wagers 0..=5, columns = trailer wagers
/// 0..=3.
///
/// Entry (1, 2) is `0.5 − p2 + p1·p2`: the leader wins unless they miss and
/// the trailer answers (5 against 4).
pub fn payoff_matrix(params: &JeopardyParams) -> BimatrixGame {
    let (p1, p2) = (params.p1, params.p2);
    let lose_all = p1 - 0.5;
    let both = 0.5 - p2 + p1 * p2;
    let tie_mix = 0.5 * p1 * p2 + 0.5 * p1 - 0.5 * p2;
    let u = vec![
        vec![0.5, 0.5, 0.5 - 0.5 * p2, 0.5 - p2],
        vec![0.5, 0.5 * p1 * p2 - 0.5 * p2 + 0.5, both, 0.5 + 0.5 * p1 * p2 - p2],
        vec![0.5 * p1, both, both, both],
        vec![lose_all, tie_mix, both, both],
        vec![lose_all, lose_all, tie_mix, both],
        vec![lose_all, lose_all, lose_all, tie_mix],
    ];
    BimatrixGame::zero_sum(u).expect("6×4 table")
}

pub fn wager_actions(player: Player) -> &'static [&'static str] {
    const P1: [&str; 6] = ["wager0", "wager1", "wager2", "wager3", "wager4", "wager5"];
    const P2: [&str; 4] = ["wager0", "wager1", "wager2", "wager3"];
    match player {
        Player::Row => &P1,
        Player::Col => &P2,
    }
}

/// The bundled list for `player` (row = leader).
pub fn pdl(player: Player) -> &'static Pdl {
    static P1: OnceLock<Pdl> = OnceLock::new();
    static P2: OnceLock<Pdl> = OnceLock::new();
    match player {
        Player::Row => cached(&P1, cheatsheets::JEOPARDY_P1),
        Player::Col => cached(&P2, cheatsheets::JEOPARDY_P2),
    }
}

fn branch_id(player: Player, m: Matched) -> &'static str {
    const P1: [&str; 4] = ["p2_zero", "p1_zero", "p1_one", "p2_high"];
    const P2: [&str; 5] = ["p2_zero", "p1_zero", "p1_one", "both_high", "p2_high"];
    match m {
        Matched::Default => "mixed",
        Matched::Rule(i) => match player {
            Player::Row => P1[i - 1],
            Player::Col => P2[i - 1],
        },
    }
}

/// Wager distribution from `player`'s list, with the id of the branch that
/// fired.
pub fn advise(player: Player, params: &JeopardyParams) -> Result<(Distribution, &'static str), GameError> {
    let (d, m) = pdl(player).evaluate(&params.assignment())?;
    Ok((d, branch_id(player, m)))
}

/// Both advised strategies laid out over the wager indices.
pub fn advised_profile(params: &JeopardyParams) -> Result<StrategyProfile, GameError> {
    let strat = |player| -> Result<MixedStrategy, GameError> {
        let (d, _) = advise(player, params)?;
        MixedStrategy::new(d.over(wager_actions(player))?)
    };
    Ok(StrategyProfile::new(strat(Player::Row)?, strat(Player::Col)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibriumCase {
    ZeroZero,
    ZeroThree,
    TwoZero,
    TwoTwo,
    TwoThree,
    Mixed,
}

impl EquilibriumCase {
    pub fn label(self) -> &'static str {
        match self {
            EquilibriumCase::ZeroZero => "(0,0)",
            EquilibriumCase::ZeroThree => "(0,3)",
            EquilibriumCase::TwoZero => "(2,0)",
            EquilibriumCase::TwoTwo => "(2,2)",
            EquilibriumCase::TwoThree => "(2,3)",
            EquilibriumCase::Mixed => "mixed",
        }
    }
}

/// First case of the equilibrium table whose condition holds.
pub fn equilibrium_case(params: &JeopardyParams) -> EquilibriumCase {
    let (p1, p2) = (params.p1, params.p2);
    if p2 == 0.0 {
        EquilibriumCase::ZeroZero
    } else if p1 == 0.0 {
        EquilibriumCase::ZeroThree
    } else if p1 == 1.0 {
        EquilibriumCase::TwoZero
    } else if p1 >= 0.5 && p2 >= 0.5 {
        EquilibriumCase::TwoTwo
    } else if p2 >= 0.5 {
        EquilibriumCase::TwoThree
    } else {
        EquilibriumCase::Mixed
    }
}

/// Largest regret of the advised profile in the payoff matrix.
pub fn verify_equilibrium(params: &JeopardyParams) -> Result<f64, GameError> {
    max_regret(&payoff_matrix(params), &advised_profile(params)?)
}

/// Leader's expected payoff under the advised profile.
pub fn row_value(params: &JeopardyParams) -> Result<f64, GameError> {
    Ok(expected_utility(&payoff_matrix(params), &advised_profile(params)?)?.0)
}

/// Closed-form leader value on the mixed branch.
pub fn mixed_branch_value(params: &JeopardyParams) -> f64 {
    let (p1, p2) = (params.p1, params.p2);
    (0.5 + 2.0 * p1 * p2 - 0.5 * p1 - 0.5 * p1 * p1 * p2 - p2) / (1.0 + p1 * p2 - p1)
}

/// Equilibrium objective over `(p1, p2)`: the gap is the advised profile's
/// largest regret. Expects the policy to return the leader's distribution
/// then the trailer's.
#[derive(Debug, Clone, Copy, Default)]
pub struct JeopardyFamily;

impl ObjectiveFamily for JeopardyFamily {
    fn gap(&self, lambda: &Assignment, policy: &mut Policy<'_>) -> Result<f64, String> {
        let get = |k| lambda.get(k).ok_or(format!("missing `{k}`"));
        let params = JeopardyParams::new(get("p1")?, get("p2")?).map_err(|e| e.to_string())?;
        let out = policy(lambda).map_err(|e| e.to_string())?;
        let [d1, d2] = out.as_slice() else {
            return Err(format!("expected two distributions, got {}", out.len()));
        };
        let strat = |d: &Distribution, player| {
            d.over(wager_actions(player))
                .map_err(|e| e.to_string())
                .and_then(|p| MixedStrategy::new(p).map_err(|e| e.to_string()))
        };
        let profile = StrategyProfile::new(strat(d1, Player::Row)?, strat(d2, Player::Col)?);
        max_regret(&payoff_matrix(&params), &profile).map_err(|e| e.to_string())
    }
}

/// The 21×21 grid `{0, 0.05, …, 1}²`.
pub fn grid_21() -> Vec<JeopardyParams> {
    let pts: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    pts.iter().flat_map(|&p1| pts.iter().map(move |&p2| JeopardyParams { p1, p2 })).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pdl::check_implementability;

    fn jp(p1: f64, p2: f64) -> JeopardyParams {
        JeopardyParams::new(p1, p2).unwrap()
    }

    /// Expected leader payoff from the four answer outcomes.
    fn from_outcomes(p: &JeopardyParams, w1: usize, w2: usize) -> f64 {
        let mut ev = 0.0;
        for (r1, q1) in [(true, p.p1), (false, 1.0 - p.p1)] {
            for (r2, q2) in [(true, p.p2), (false, 1.0 - p.p2)] {
                let f1 = if r1 { BANK_1 + w1 } else { BANK_1 - w1 } as i64;
                let f2 = if r2 { BANK_2 + w2 } else { BANK_2 - w2 } as i64;
                let pay = match f1.cmp(&f2) {
                    std::cmp::Ordering::Greater => 0.5,
                    std::cmp::Ordering::Equal => 0.0,
                    std::cmp::Ordering::Less => -0.5,
                };
                ev += q1 * q2 * pay;
            }
        }
        ev
    }

    #[test]
    fn matrix_matches_outcome_enumeration() {
        for p in grid_21() {
            let g = payoff_matrix(&p);
            assert!(g.is_zero_sum());
            for i in 0..6 {
                for j in 0..4 {
                    let want = from_outcomes(&p, i, j);
                    assert!((g.u1(i, j) - want).abs() < 1e-12, "{p:?} ({i},{j})");
                    assert!((-0.5..=0.5).contains(&g.u1(i, j)));
                    assert_eq!(g.u2(i, j), -g.u1(i, j));
                }
            }
        }
    }

    #[test]
    fn wager_one_against_two() {
        // 6 or 4 against 5 or 1: only a leader miss with a trailer hit loses
        let p = jp(0.3, 0.6);
        let want = 0.3 + 0.7 * 0.4 - 0.5;
        assert!((payoff_matrix(&p).u1(1, 2) - want).abs() < 1e-15);
        assert!((want - (0.5 - 0.6)).abs() > 0.1);
    }

    #[test]
    fn matrix_examples() {
        assert_eq!(payoff_matrix(&jp(0.0, 0.0)).u1(0, 0), 0.5);
        assert!((payoff_matrix(&jp(0.3, 0.9)).u1(5, 0) + 0.2).abs() < 1e-15);
        assert_eq!(payoff_matrix(&jp(1.0, 1.0)).u1(2, 1), 0.5);
    }

    #[test]
    fn advice_examples() {
        let (d, b) = advise(Player::Row, &jp(0.4, 0.0)).unwrap();
        assert_eq!((d.to_string().as_str(), b), ("wager0", "p2_zero"));
        let (d, b) = advise(Player::Col, &jp(0.6, 0.7)).unwrap();
        assert_eq!((d.to_string().as_str(), b), ("wager2", "both_high"));
        let (d, b) = advise(Player::Col, &jp(0.5, 0.25)).unwrap();
        assert_eq!(b, "mixed");
        assert!((d.prob("wager0") - 0.2).abs() < 1e-12 && (d.prob("wager3") - 0.8).abs() < 1e-12);
        let (d, _) = advise(Player::Row, &jp(0.5, 0.25)).unwrap();
        assert!((d.prob("wager1") - 0.4).abs() < 1e-12 && (d.prob("wager2") - 0.6).abs() < 1e-12);
    }

    #[test]
    fn case_examples() {
        assert_eq!(equilibrium_case(&jp(0.7, 0.0)), EquilibriumCase::ZeroZero);
        assert_eq!(equilibrium_case(&jp(0.4, 0.6)), EquilibriumCase::TwoThree);
        assert_eq!(equilibrium_case(&jp(0.5, 0.25)), EquilibriumCase::Mixed);
        assert_eq!(equilibrium_case(&jp(0.5, 0.25)).label(), "mixed");
    }

    #[test]
    fn grid_certificate() {
        for p in grid_21() {
            let r = verify_equilibrium(&p).unwrap();
            assert!(r <= 1e-9, "{p:?}: regret {r}");
        }
        assert!(verify_equilibrium(&jp(1.0, 1.0)).unwrap() <= 1e-12);
    }

    #[test]
    fn mixed_value() {
        let p = jp(0.5, 0.25);
        assert!((row_value(&p).unwrap() - 0.35).abs() < 1e-12);
        assert!((mixed_branch_value(&p) - 0.35).abs() < 1e-12);
        for p in grid_21().into_iter().filter(|p| equilibrium_case(p) == EquilibriumCase::Mixed) {
            assert!((row_value(&p).unwrap() - mixed_branch_value(&p)).abs() < 1e-12);
        }
    }

    #[test]
    fn case_table_agrees_with_lists() {
        // cases are named (leader wager, trailer wager) for the pure ones
        for p in grid_21() {
            let prof = advised_profile(&p).unwrap();
            let pure = |s: &MixedStrategy| s.probs().iter().position(|&x| x == 1.0);
            let want = match equilibrium_case(&p) {
                EquilibriumCase::ZeroZero => Some((0, 0)),
                EquilibriumCase::ZeroThree => Some((0, 3)),
                EquilibriumCase::TwoZero => Some((2, 0)),
                EquilibriumCase::TwoTwo => Some((2, 2)),
                EquilibriumCase::TwoThree => Some((2, 3)),
                EquilibriumCase::Mixed => None,
            };
            if let Some(w) = want {
                assert_eq!((pure(&prof.row), pure(&prof.col)), (Some(w.0), Some(w.1)), "{p:?}");
            }
        }
    }

    #[test]
    fn list_shapes_and_implementability() {
        assert_eq!((pdl(Player::Row).depth(), pdl(Player::Row).width()), (5, 1));
        assert_eq!((pdl(Player::Col).depth(), pdl(Player::Col).width()), (6, 2));
        let grid: Vec<Assignment> = grid_21().iter().map(JeopardyParams::assignment).collect();
        let lists = [pdl(Player::Row).clone(), pdl(Player::Col).clone()];
        let rep = check_implementability(&lists, &JeopardyFamily, &grid).unwrap();
        assert!(rep.epsilon <= 1e-9);
    }

    #[test]
    fn params_validated() {
        assert!(JeopardyParams::new(1.1, 0.0).is_err());
        assert!(JeopardyParams::new(0.0, f64::NAN).is_err());
    }
}
