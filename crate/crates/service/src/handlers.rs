use std::collections::HashMap;

use axum::extract::rejection::JsonRejection;
use axum::extract::Query;
use axum::Json;
use pgames_core::jeopardy::{self, JeopardyParams};
use pgames_core::kuhn::{self, Exact, KuhnSpec, Prob, Scalar};
use pgames_core::pdl::Matched;
use pgames_core::weakest_link::{self as wl, Vote, WLParams};
use pgames_core::{max_regret, parse_pdl, Assignment, Distribution, Player, TwoByTwoPayoffs};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::{ApiError, CERTIFY_MAX_N};

type Body = Result<Json<Value>, JsonRejection>;

/// The request body as a JSON object.
fn object(body: Body) -> Result<Map<String, Value>, ApiError> {
    match body {
        Ok(Json(Value::Object(map))) => Ok(map),
        Ok(Json(_)) => Err(ApiError::bad_request("request body must be a JSON object")),
        Err(e) => Err(ApiError::bad_request(e.body_text())),
    }
}

fn number(obj: &Map<String, Value>, field: &str) -> Result<f64, ApiError> {
    match obj.get(field) {
        None | Some(Value::Null) => Err(ApiError::invalid(field, format!("missing field `{field}`"))),
        Some(v) => v.as_f64().ok_or_else(|| ApiError::invalid(field, format!("`{field}` must be a number"))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrategyEntry {
    pub action: String,
    pub prob: f64,
}

fn entries(d: &Distribution) -> Vec<StrategyEntry> {
    d.entries().iter().map(|(a, p)| StrategyEntry { action: a.clone(), prob: *p }).collect()
}

pub async fn health() -> Json<Value> {
    Json(serde_json::json!({ "status": "ok" }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JeopardyAdvice {
    pub strategy: Vec<StrategyEntry>,
    pub branch: &'static str,
    pub case: &'static str,
    /// Leader's expected payoff under both advised strategies.
    pub row_value: f64,
}

pub async fn jeopardy(body: Body) -> Result<Json<JeopardyAdvice>, ApiError> {
    let obj = object(body)?;
    let p1 = number(&obj, "p1")?;
    let p2 = number(&obj, "p2")?;
    let player = match number(&obj, "player")? {
        1.0 => Player::Row,
        2.0 => Player::Col,
        v => return Err(ApiError::invalid("player", format!("player must be 1 or 2, got {v}"))),
    };
    let params = JeopardyParams::new(p1, p2)?;
    let (dist, branch) = jeopardy::advise(player, &params)?;
    Ok(Json(JeopardyAdvice {
        strategy: entries(&dist),
        branch,
        case: jeopardy::equilibrium_case(&params).label(),
        row_value: jeopardy::row_value(&params)?,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VoteEvs {
    pub player1: f64,
    pub player2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeakestLinkAdvice {
    pub paper_rule: &'static str,
    pub full_enumeration: &'static str,
    pub agree: bool,
    pub tie_ev: f64,
    /// `None` when the split-vote probabilities are undefined.
    pub ev_paper: Option<VoteEvs>,
    pub ev_full: VoteEvs,
    pub case_probs: Option<[f64; 2]>,
    /// Both opponents vote for you: you leave whatever you do.
    pub vote_irrelevant: bool,
}

pub async fn weakest_link(body: Body) -> Result<Json<WeakestLinkAdvice>, ApiError> {
    let obj = object(body)?;
    let (w, p1, p2) = (number(&obj, "w")?, number(&obj, "p1")?, number(&obj, "p2")?);
    let (y1, y2) = (number(&obj, "y1")?, number(&obj, "y2")?);
    let params = WLParams::new(w, p1, p2, y1, y2)?;
    let paper = wl::decide_vote_paper(&params);
    let full = wl::decide_vote_full(&params);
    let case_probs = wl::case_probs(&params).ok();
    let ev_paper = match case_probs {
        Some(_) => Some(VoteEvs {
            player1: wl::ev_vote_paper(Vote::Player1, &params)?,
            player2: wl::ev_vote_paper(Vote::Player2, &params)?,
        }),
        None => None,
    };
    Ok(Json(WeakestLinkAdvice {
        paper_rule: paper.label(),
        full_enumeration: full.label(),
        agree: paper == full,
        tie_ev: wl::tie_ev(&params),
        ev_paper,
        ev_full: VoteEvs {
            player1: wl::ev_vote_full(Vote::Player1, &params),
            player2: wl::ev_vote_full(Vote::Player2, &params),
        },
        case_probs: case_probs.map(|(a, b)| [a, b]),
        vote_irrelevant: y1 == 1.0 && y2 == 1.0,
    }))
}

/// Per-card probabilities, index `c − 1` for card `c`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KuhnTables<T> {
    pub bet_first: Vec<T>,
    pub call_vs_bet: Vec<T>,
    pub bet_vs_check: Vec<T>,
    pub call_after_check_bet: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KuhnStrategy {
    pub n: usize,
    pub tables: KuhnTables<f64>,
    /// The same tables as exact fractions, e.g. `"2/9"`.
    pub exact: KuhnTables<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nashconv: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nashconv_exact: Option<String>,
}

fn tables<T>(m: kuhn::KuhnProfile<T>) -> KuhnTables<T> {
    KuhnTables {
        bet_first: m.bet_first,
        call_vs_bet: m.call_vs_bet,
        bet_vs_check: m.bet_vs_check,
        call_after_check_bet: m.call_after_check_bet,
    }
}

pub async fn kuhn_strategy(Query(q): Query<HashMap<String, String>>) -> Result<Json<KuhnStrategy>, ApiError> {
    let raw = q.get("n").ok_or_else(|| ApiError::invalid("n", "missing query parameter `n`"))?;
    let n: usize = raw.trim().parse().map_err(|_| ApiError::invalid("n", format!("`{raw}` is not a card count")))?;
    let certify = match q.get("certify").map(String::as_str) {
        None | Some("false") | Some("0") => false,
        Some("true") | Some("1") => true,
        Some(other) => return Err(ApiError::invalid("certify", format!("`{other}` is not true or false"))),
    };
    let spec = KuhnSpec::new(n)?;
    if certify && n > CERTIFY_MAX_N {
        return Err(ApiError::invalid("n", format!("certify is limited to n <= {CERTIFY_MAX_N}")));
    }
    let profile = kuhn::pdl_strategy(&spec)?;
    let nashconv = if certify { Some(kuhn::nashconv(&spec, &profile.to_scalar::<Exact>())?) } else { None };
    Ok(Json(KuhnStrategy {
        n,
        tables: tables(profile.to_scalar::<f64>()),
        exact: tables(profile.map(Prob::to_string)),
        nashconv: nashconv.map(|v| Scalar::to_f64(&v)),
        nashconv_exact: nashconv.map(|v| v.to_string()),
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PdlEvaluation {
    pub strategy: Vec<StrategyEntry>,
    /// 1-based rule number, `None` for the default.
    pub rule: Option<usize>,
    pub matched: String,
    pub depth: usize,
    pub width: usize,
}

pub async fn pdl_evaluate(body: Body) -> Result<Json<PdlEvaluation>, ApiError> {
    let obj = object(body)?;
    let text = match obj.get("pdl") {
        Some(Value::String(s)) => s,
        Some(_) => return Err(ApiError::invalid("pdl", "`pdl` must be cheat-sheet text")),
        None => return Err(ApiError::invalid("pdl", "missing field `pdl`")),
    };
    let pdl = parse_pdl(text).map_err(|e| ApiError::pdl("pdl", &e))?;
    let mut at = Assignment::new();
    match obj.get("params") {
        Some(Value::Object(m)) => {
            for (k, v) in m {
                let v = v
                    .as_f64()
                    .ok_or_else(|| ApiError::invalid(format!("params.{k}"), format!("`{k}` must be a number")))?;
                at.set(k.clone(), v);
            }
        }
        None => {}
        Some(_) => return Err(ApiError::invalid("params", "`params` must be an object of numbers")),
    }
    let (dist, matched) = pdl.evaluate(&at).map_err(|e| ApiError::pdl("params", &e))?;
    Ok(Json(PdlEvaluation {
        strategy: entries(&dist),
        rule: match matched {
            Matched::Rule(i) => Some(i),
            Matched::Default => None,
        },
        matched: matched.to_string(),
        depth: pdl.depth(),
        width: pdl.width(),
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolvedGame {
    pub row: Vec<f64>,
    pub col: Vec<f64>,
    pub branch: &'static str,
    pub row_payoff: f64,
    pub col_payoff: f64,
    pub max_regret: f64,
}

pub async fn solve_2x2(body: Body) -> Result<Json<SolvedGame>, ApiError> {
    let obj = object(body)?;
    let mut v = [0.0; 8];
    for (slot, field) in v.iter_mut().zip(["a", "b", "c", "d", "e", "f", "g", "h"]) {
        *slot = number(&obj, field)?;
    }
    let payoffs = TwoByTwoPayoffs::from_array(v);
    let (profile, branch) = pgames_core::strategic::solve_2x2_branch(&payoffs)?;
    let game = payoffs.game();
    let (row_payoff, col_payoff) = pgames_core::expected_utility(&game, &profile)?;
    Ok(Json(SolvedGame {
        row: profile.row.probs().to_vec(),
        col: profile.col.probs().to_vec(),
        branch: branch.label(),
        row_payoff,
        col_payoff,
        max_regret: max_regret(&game, &profile)?,
    }))
}
