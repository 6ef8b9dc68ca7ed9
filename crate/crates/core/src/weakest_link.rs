//! The last elimination vote with three contestants left.
//!
//! You face opponents 1 and 2 and beat them head to head with probability
//! `p1` and `p2` (`p1 > p2`, opponent 2 is the stronger). Opponent `i`
//! votes for you with probability `y_i`, otherwise for the other opponent.
//! A three-way split eliminates a uniformly random contestant; the
//! survivor of the final duel takes the bank `W`.
//!
//! Two models are provided. The conditional model only weighs the two
//! profiles in which exactly one opponent votes for you. The full model
//! enumerates all four opponent profiles, including the one where both
//! opponents vote for each other and your vote picks your final opponent.

use std::fmt;
use std::sync::OnceLock;

use crate::cheatsheets::{self, cached};
use crate::error::GameError;
use crate::pdl::{Assignment, ObjectiveFamily, Pdl, Policy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Vote {
    Player1,
    Player2,
}

impl Vote {
    pub fn label(self) -> &'static str {
        match self {
            Vote::Player1 => "player1",
            Vote::Player2 => "player2",
        }
    }

    pub fn from_label(s: &str) -> Option<Vote> {
        match s {
            "player1" => Some(Vote::Player1),
            "player2" => Some(Vote::Player2),
            _ => None,
        }
    }
}

impl fmt::Display for Vote {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WLParams {
    w: f64,
    p1: f64,
    p2: f64,
    y1: f64,
    y2: f64,
}

impl WLParams {
    pub fn new(w: f64, p1: f64, p2: f64, y1: f64, y2: f64) -> Result<Self, GameError> {
        if !(w.is_finite() && w > 0.0) {
            return Err(GameError::OutOfRange { name: "W", reason: format!("{w} is not a positive amount") });
        }
        for (name, v) in [("p1", p1), ("p2", p2), ("y1", y1), ("y2", y2)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(GameError::OutOfRange { name, reason: format!("{v} is not a probability") });
            }
        }
        if p1 <= p2 {
            return Err(GameError::OutOfRange {
                name: "p2",
                reason: format!("opponent 2 must be the stronger (p1 = {p1} > p2 = {p2})"),
            });
        }
        Ok(WLParams { w, p1, p2, y1, y2 })
    }

    pub fn w(&self) -> f64 {
        self.w
    }
    pub fn p1(&self) -> f64 {
        self.p1
    }
    pub fn p2(&self) -> f64 {
        self.p2
    }
    pub fn y1(&self) -> f64 {
        self.y1
    }
    pub fn y2(&self) -> f64 {
        self.y2
    }

    /// Same situation with the bank multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self, GameError> {
        WLParams::new(self.w * factor, self.p1, self.p2, self.y1, self.y2)
    }

    pub fn assignment(&self) -> Assignment {
        Assignment::from([("p1", self.p1), ("p2", self.p2), ("y1", self.y1), ("y2", self.y2)])
    }

    /// Mass of "opponent 1 votes for you, opponent 2 for opponent 1".
    fn mass1(&self) -> f64 {
        self.y1 * (1.0 - self.y2)
    }

    /// Mass of "opponent 2 votes for you, opponent 1 for opponent 2".
    fn mass2(&self) -> f64 {
        self.y2 * (1.0 - self.y1)
    }

    /// Mass of "the opponents vote for each other".
    fn mass_open(&self) -> f64 {
        (1.0 - self.y1) * (1.0 - self.y2)
    }
}

/// Expected winnings after a three-way split.
pub fn tie_ev(params: &WLParams) -> f64 {
    params.w * (params.p1 + params.p2) / 3.0
}

/// Conditional probabilities of the two single-vote profiles.
pub fn case_probs(params: &WLParams) -> Result<(f64, f64), GameError> {
    let (m1, m2) = (params.mass1(), params.mass2());
    let total = m1 + m2;
    if total == 0.0 {
        return Err(GameError::Degenerate(
            "no profile where exactly one opponent votes for you has positive probability".into(),
        ));
    }
    Ok((m1 / total, m2 / total))
}

/// Conditional-model expected winnings of casting `vote`.
pub fn ev_vote_paper(vote: Vote, params: &WLParams) -> Result<f64, GameError> {
    let (c1, c2) = case_probs(params)?;
    let tie = tie_ev(params);
    Ok(match vote {
        Vote::Player1 => c1 * params.p2 * params.w + c2 * tie,
        Vote::Player2 => c1 * tie + c2 * params.p1 * params.w,
    })
}

/// The polynomial vote rule: player 1 when the weak inequality holds.
pub fn decide_vote_paper(params: &WLParams) -> Vote {
    let WLParams { p1, p2, y1, y2, .. } = *params;
    let lhs = 2.0 * y1 * p2 + y2 * p2 + 3.0 * y1 * y2 * p1;
    let rhs = 2.0 * y2 * p1 + y1 * p1 + 3.0 * y1 * y2 * p2;
    if lhs >= rhs {
        Vote::Player1
    } else {
        Vote::Player2
    }
}

/// `EV(player2) − EV(player1)` of the conditional model before the case
/// masses are normalised.
pub fn paper_margin_unnormalized(params: &WLParams) -> f64 {
    let tie = tie_ev(params);
    let w = params.w;
    params.mass1() * (tie - params.p2 * w) + params.mass2() * (params.p1 * w - tie)
}

fn ev_full_per_unit(vote: Vote, params: &WLParams) -> f64 {
    let tie = (params.p1 + params.p2) / 3.0;
    let (m1, m2, m0) = (params.mass1(), params.mass2(), params.mass_open());
    // both opponents voting for you contributes nothing either way
    match vote {
        Vote::Player1 => m1 * params.p2 + m2 * tie + m0 * params.p2,
        Vote::Player2 => m1 * tie + m2 * params.p1 + m0 * params.p1,
    }
}

/// Full-model expected winnings of casting `vote`.
pub fn ev_vote_full(vote: Vote, params: &WLParams) -> f64 {
    params.w * ev_full_per_unit(vote, params)
}

/// Best vote under the full model; player 2 on exact ties. Compared per
/// unit of bank so the answer cannot depend on `W`.
pub fn decide_vote_full(params: &WLParams) -> Vote {
    if ev_full_per_unit(Vote::Player1, params) > ev_full_per_unit(Vote::Player2, params) {
        Vote::Player1
    } else {
        Vote::Player2
    }
}

/// `EV(player2) − EV(player1)` under the full model.
pub fn full_margin(params: &WLParams) -> f64 {
    ev_vote_full(Vote::Player2, params) - ev_vote_full(Vote::Player1, params)
}

/// Bundled list implementing [`decide_vote_paper`].
pub fn pdl() -> &'static Pdl {
    static CELL: OnceLock<Pdl> = OnceLock::new();
    cached(&CELL, cheatsheets::WEAKEST_LINK)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgreementReport {
    pub grid_step: f64,
    pub cells: usize,
    pub agreeing: usize,
    /// Points (with `W = 1`) where the two rules pick different votes.
    pub disagreements: Vec<WLParams>,
}

impl AgreementReport {
    pub fn fraction(&self) -> f64 {
        self.agreeing as f64 / self.cells as f64
    }
}

/// Grid values `0, step, 2·step, …` up to 1.
pub fn grid_values(step: f64) -> Result<Vec<f64>, GameError> {
    if !(step > 0.0 && step <= 0.5) {
        return Err(GameError::OutOfRange { name: "grid_step", reason: format!("{step} not in (0, 0.5]") });
    }
    let m = (1.0 / step + 1e-9).floor() as usize;
    Ok((0..=m).map(|i| (i as f64 * step).min(1.0)).collect())
}

/// All grid points with `p1 > p2` and `W = 1`.
pub fn grid(step: f64) -> Result<Vec<WLParams>, GameError> {
    let v = grid_values(step)?;
    let mut out = Vec::new();
    for &p1 in &v {
        for &p2 in v.iter().filter(|&&p2| p2 < p1) {
            for &y1 in &v {
                for &y2 in &v {
                    out.push(WLParams { w: 1.0, p1, p2, y1, y2 });
                }
            }
        }
    }
    Ok(out)
}

/// Where the polynomial rule and the full model disagree on a grid.
pub fn agreement_report(grid_step: f64) -> Result<AgreementReport, GameError> {
    let pts = grid(grid_step)?;
    let disagreements: Vec<WLParams> =
        pts.iter().copied().filter(|p| decide_vote_paper(p) != decide_vote_full(p)).collect();
    Ok(AgreementReport { grid_step, cells: pts.len(), agreeing: pts.len() - disagreements.len(), disagreements })
}

/// Which expected-value model scores a vote.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VoteModel {
    /// Two-profile conditional model; points without a pivotal profile
    /// score zero gap.
    Conditional,
    Full,
}

/// Best-response objective per unit of bank: the gap is the best vote's
/// expected winnings minus those of the vote the policy names.
#[derive(Debug, Clone, Copy)]
pub struct WeakestLinkFamily(pub VoteModel);

impl ObjectiveFamily for WeakestLinkFamily {
    fn gap(&self, lambda: &Assignment, policy: &mut Policy<'_>) -> Result<f64, String> {
        let get = |k| lambda.get(k).ok_or(format!("missing `{k}`"));
        let params = WLParams::new(1.0, get("p1")?, get("p2")?, get("y1")?, get("y2")?).map_err(|e| e.to_string())?;
        let out = policy(lambda).map_err(|e| e.to_string())?;
        let d = out.first().ok_or("policy returned no distribution")?;
        let ev = |v| match self.0 {
            VoteModel::Conditional => ev_vote_paper(v, &params).ok(),
            VoteModel::Full => Some(ev_vote_full(v, &params)),
        };
        let (Some(e1), Some(e2)) = (ev(Vote::Player1), ev(Vote::Player2)) else {
            return Ok(0.0);
        };
        let got = d.prob("player1") * e1 + d.prob("player2") * e2;
        Ok(e1.max(e2) - got)
    }
}
