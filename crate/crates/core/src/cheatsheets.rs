//! Decision lists shipped with the crate, in cheat-sheet text form.

use std::sync::OnceLock;

use crate::pdl::{parse_pdl, Assignment, ObjectiveFamily, Pdl, Policy};
use crate::strategic::{max_regret, MixedStrategy, StrategyProfile, TwoByTwoPayoffs};

pub const JEOPARDY_P1: &str = include_str!("../cheatsheets/jeopardy_p1.pdl");
pub const JEOPARDY_P2: &str = include_str!("../cheatsheets/jeopardy_p2.pdl");
pub const WEAKEST_LINK: &str = include_str!("../cheatsheets/weakest_link.pdl");
pub const TWO_BY_TWO_ROW: &str = include_str!("../cheatsheets/two_by_two_row.pdl");
pub const TWO_BY_TWO_COL: &str = include_str!("../cheatsheets/two_by_two_col.pdl");
pub const KUHN_A_FIRST: &str = include_str!("../cheatsheets/kuhn_a_first.pdl");
pub const KUHN_B_VS_BET: &str = include_str!("../cheatsheets/kuhn_b_vs_bet.pdl");
pub const KUHN_B_VS_CHECK: &str = include_str!("../cheatsheets/kuhn_b_vs_check.pdl");
pub const KUHN_A_VS_BET: &str = include_str!("../cheatsheets/kuhn_a_vs_bet.pdl");

/// Every bundled sheet as `(name, text)`.
pub const ALL: [(&str, &str); 9] = [
    ("jeopardy_p1", JEOPARDY_P1),
    ("jeopardy_p2", JEOPARDY_P2),
    ("weakest_link", WEAKEST_LINK),
    ("two_by_two_row", TWO_BY_TWO_ROW),
    ("two_by_two_col", TWO_BY_TWO_COL),
    ("kuhn_a_first", KUHN_A_FIRST),
    ("kuhn_b_vs_bet", KUHN_B_VS_BET),
    ("kuhn_b_vs_check", KUHN_B_VS_CHECK),
    ("kuhn_a_vs_bet", KUHN_A_VS_BET),
];

/// Text of a bundled sheet by name.
pub fn text(name: &str) -> Option<&'static str> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub(crate) fn cached(cell: &'static OnceLock<Pdl>, text: &str) -> &'static Pdl {
    cell.get_or_init(|| parse_pdl(text).expect("bundled cheat sheet parses"))
}

/// The row and column lists for general-sum 2×2 games.
pub fn two_by_two() -> [&'static Pdl; 2] {
    static ROW: OnceLock<Pdl> = OnceLock::new();
    static COL: OnceLock<Pdl> = OnceLock::new();
    [cached(&ROW, TWO_BY_TWO_ROW), cached(&COL, TWO_BY_TWO_COL)]
}

/// Assignment `a..h` for a 2×2 game.
pub fn two_by_two_assignment(p: &TwoByTwoPayoffs) -> Assignment {
    Assignment::from([("a", p.a), ("b", p.b), ("c", p.c), ("d", p.d), ("e", p.e), ("f", p.f), ("g", p.g), ("h", p.h)])
}

/// Equilibrium objective for 2×2 games: the gap is the largest regret of
/// the profile the row and column lists produce.
#[derive(Debug, Clone, Copy, Default)]
pub struct TwoByTwoFamily;

impl ObjectiveFamily for TwoByTwoFamily {
    fn gap(&self, lambda: &Assignment, policy: &mut Policy<'_>) -> Result<f64, String> {
        let v: Vec<f64> = ["a", "b", "c", "d", "e", "f", "g", "h"]
            .iter()
            .map(|k| lambda.get(k).ok_or(format!("missing `{k}`")))
            .collect::<Result<_, _>>()?;
        let payoffs = TwoByTwoPayoffs::from_array(v.try_into().expect("eight entries"));
        let out = policy(lambda).map_err(|e| e.to_string())?;
        let [row, col] = out.as_slice() else {
            return Err(format!("expected two distributions, got {}", out.len()));
        };
        let strat = |d: &crate::pdl::Distribution, acts: &[&str]| {
            d.over(acts).map_err(|e| e.to_string()).and_then(|p| MixedStrategy::new(p).map_err(|e| e.to_string()))
        };
        let profile = StrategyProfile::new(strat(row, &["top", "bottom"])?, strat(col, &["left", "right"])?);
        max_regret(&payoffs.game(), &profile).map_err(|e| e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pdl::check_implementability;
    use crate::strategic::solve_2x2_branch;

    #[test]
    fn all_bundled_sheets_parse() {
        for (name, text) in ALL {
            assert!(parse_pdl(text).is_ok(), "{name}");
        }
        assert!(text("jeopardy_p1").is_some());
        assert!(text("nope").is_none());
    }

    #[test]
    fn two_by_two_lists_match_the_solver() {
        let games = [
            [3.0, 3.0, 0.0, 5.0, 5.0, 0.0, 1.0, 1.0],
            [1.0, -1.0, -1.0, 1.0, -1.0, 1.0, 1.0, -1.0],
            [2.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 2.0],
            [0.3, -0.2, 0.9, 0.1, -0.4, 0.6, 0.2, -0.8],
        ];
        let [row, col] = two_by_two();
        for g in games {
            let p = TwoByTwoPayoffs::from_array(g);
            let (prof, _) = solve_2x2_branch(&p).unwrap();
            let at = two_by_two_assignment(&p);
            let (r, _) = row.evaluate(&at).unwrap();
            let (c, _) = col.evaluate(&at).unwrap();
            assert!((r.prob("top") - prof.row.probs()[0]).abs() < 1e-12);
            assert!((c.prob("left") - prof.col.probs()[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn two_by_two_implementability() {
        let grid: Vec<Assignment> = (0..200)
            .map(|i| {
                let v: [f64; 8] = std::array::from_fn(|k| (((i * 37 + k * 11) % 17) as f64 - 8.0) / 8.0);
                two_by_two_assignment(&TwoByTwoPayoffs::from_array(v))
            })
            .collect();
        let lists: Vec<Pdl> = two_by_two().iter().map(|p| (*p).clone()).collect();
        let rep = check_implementability(&lists, &TwoByTwoFamily, &grid).unwrap();
        assert_eq!((rep.depth, rep.width), (5, 2));
        assert!(rep.epsilon <= 1e-9, "{rep:?}");
    }
}
