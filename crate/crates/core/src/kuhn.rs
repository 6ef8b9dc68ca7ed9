//! Kuhn poker with an `n`-card deck.
//!
//! Each player antes 1 and is dealt one card without replacement (cards
//! `1..=n`, higher wins). A acts first: bet 1 or check. After a bet B calls
//! (showdown for 2) or folds (A takes 1). After a check B bets or checks
//! (showdown for 1); facing that bet A calls (showdown for 2) or folds
//! (B takes 1).
//!
//! Strategies are four per-card tables. Values are computed by walking the
//! betting tree for every ordered deal, generically over [`Scalar`] so the
//! same code runs in `f64` and in exact rationals.

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};
use std::sync::OnceLock;

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::cheatsheets::{self, cached};
use crate::error::GameError;
use crate::pdl::{Assignment, Distribution, ObjectiveFamily, Pdl, PdlError, Policy};
use crate::strategic::Player;

/// Probabilities in strategy tables.
pub type Prob = Ratio<i64>;
/// Exact accumulator for expected values.
pub type Exact = Ratio<i128>;

pub const DEFAULT_MAX_N: usize = 10_000;

/// Number type the evaluator runs in.
pub trait Scalar:
    Clone
    + PartialOrd
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn from_prob(p: &Prob) -> Self;
    fn from_int(v: i64) -> Self;
    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn from_prob(p: &Prob) -> Self {
        *p.numer() as f64 / *p.denom() as f64
    }
    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Exact {
    fn from_prob(p: &Prob) -> Self {
        Ratio::new(*p.numer() as i128, *p.denom() as i128)
    }
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(v as i128)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KuhnSpec {
    n: usize,
}

impl KuhnSpec {
    pub fn new(n: usize) -> Result<Self, GameError> {
        KuhnSpec::with_limit(n, DEFAULT_MAX_N)
    }

    pub fn with_limit(n: usize, limit: usize) -> Result<Self, GameError> {
        if n < 3 {
            return Err(GameError::OutOfRange { name: "n", reason: format!("deck of {n} cards; need at least 3") });
        }
        if n > limit {
            return Err(GameError::OutOfRange { name: "n", reason: format!("{n} exceeds the limit {limit}") });
        }
        Ok(KuhnSpec { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Per-card tables, index `c − 1` for card `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct KuhnProfile<T = Prob> {
    /// A bets on the first action.
    pub bet_first: Vec<T>,
    /// B calls a bet.
    pub call_vs_bet: Vec<T>,
    /// B bets after a check.
    pub bet_vs_check: Vec<T>,
    /// A calls after check then bet.
    pub call_after_check_bet: Vec<T>,
}

impl<T: Clone> KuhnProfile<T> {
    pub fn n(&self) -> usize {
        self.bet_first.len()
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> KuhnProfile<U> {
        KuhnProfile {
            bet_first: self.bet_first.iter().map(&f).collect(),
            call_vs_bet: self.call_vs_bet.iter().map(&f).collect(),
            bet_vs_check: self.bet_vs_check.iter().map(&f).collect(),
            call_after_check_bet: self.call_after_check_bet.iter().map(&f).collect(),
        }
    }

    /// Every table filled with `v`.
    pub fn constant(n: usize, bet_first: T, call_vs_bet: T, bet_vs_check: T, call_after_check_bet: T) -> Self {
        KuhnProfile {
            bet_first: vec![bet_first; n],
            call_vs_bet: vec![call_vs_bet; n],
            bet_vs_check: vec![bet_vs_check; n],
            call_after_check_bet: vec![call_after_check_bet; n],
        }
    }
}

impl KuhnProfile<Prob> {
    /// Converts to the evaluator's number type.
    pub fn to_scalar<T: Scalar>(&self) -> KuhnProfile<T> {
        self.map(T::from_prob)
    }
}

fn check_profile<T: Scalar>(spec: &KuhnSpec, p: &KuhnProfile<T>) -> Result<(), GameError> {
    let tables = [
        ("bet_first", &p.bet_first),
        ("call_vs_bet", &p.call_vs_bet),
        ("bet_vs_check", &p.bet_vs_check),
        ("call_after_check_bet", &p.call_after_check_bet),
    ];
    for (name, t) in tables {
        if t.len() != spec.n {
            return Err(GameError::Dimension(format!("{name} has {} entries for a {}-card deck", t.len(), spec.n)));
        }
        if let Some(i) = t.iter().position(|v| !(*v >= T::zero() && *v <= T::one())) {
            return Err(GameError::InvalidStrategy(format!("{name}[card {}] = {:?}", i + 1, t[i])));
        }
    }
    Ok(())
}

/// A's payoff for one deal, given the four action probabilities at the
/// dealt cards.
fn deal_value<T: Scalar>(a_high: bool, bet: &T, call: &T, b_bet: &T, a_call: &T) -> T {
    let one = T::one();
    let show = T::from_int(if a_high { 1 } else { -1 });
    let show2 = show.clone() + show.clone();
    // A bet: B calls or folds
    let after_bet = call.clone() * show2.clone() + (one.clone() - call.clone());
    // A checked, B bet: A calls or folds
    let after_check_bet = a_call.clone() * show2 - (one.clone() - a_call.clone());
    // A checked: B bets or checks
    let after_check = b_bet.clone() * after_check_bet + (one.clone() - b_bet.clone()) * show;
    bet.clone() * after_bet + (one - bet.clone()) * after_check
}

fn deals<T: Scalar>(n: usize) -> T {
    T::from_int((n * (n - 1)) as i64)
}

/// A's expected payoff (B's is its negation).
pub fn expected_value<T: Scalar>(spec: &KuhnSpec, profile: &KuhnProfile<T>) -> Result<T, GameError> {
    check_profile(spec, profile)?;
    let n = spec.n;
    let mut total = T::zero();
    for x in 0..n {
        for y in (0..n).filter(|&y| y != x) {
            total = total
                + deal_value(
                    x > y,
                    &profile.bet_first[x],
                    &profile.call_vs_bet[y],
                    &profile.bet_vs_check[y],
                    &profile.call_after_check_bet[x],
                );
        }
    }
    Ok(total / deals(n))
}

/// Best response for `player` against the other player's tables in
/// `profile`: the returned profile has `player`'s tables replaced by pure
/// choices, and the value is `player`'s own expected payoff.
///
/// Each card is decided independently by comparing the total payoff of
/// every pure plan against the opponent's cards; ties keep the earlier
/// plan (bet before check for A, fold/check before call/bet for B).
pub fn best_response<T: Scalar>(
    spec: &KuhnSpec,
    player: Player,
    profile: &KuhnProfile<T>,
) -> Result<(KuhnProfile<T>, T), GameError> {
    check_profile(spec, profile)?;
    let n = spec.n;
    let (zero, one) = (T::zero(), T::one());
    let mut out = profile.clone();
    let mut total = T::zero();
    match player {
        Player::Row => {
            let plans = [(one.clone(), zero.clone()), (zero.clone(), one.clone()), (zero.clone(), zero.clone())];
            for x in 0..n {
                let mut best: Option<(T, usize)> = None;
                for (k, (bet, call)) in plans.iter().enumerate() {
                    let mut v = T::zero();
                    for y in (0..n).filter(|&y| y != x) {
                        v = v + deal_value(x > y, bet, &profile.call_vs_bet[y], &profile.bet_vs_check[y], call);
                    }
                    if best.as_ref().is_none_or(|(b, _)| v > *b) {
                        best = Some((v, k));
                    }
                }
                let (v, k) = best.expect("three plans");
                out.bet_first[x] = plans[k].0.clone();
                out.call_after_check_bet[x] = plans[k].1.clone();
                total = total + v;
            }
        }
        Player::Col => {
            let plans = [
                (zero.clone(), zero.clone()),
                (zero.clone(), one.clone()),
                (one.clone(), zero.clone()),
                (one.clone(), one.clone()),
            ];
            for y in 0..n {
                let mut best: Option<(T, usize)> = None;
                for (k, (call, b_bet)) in plans.iter().enumerate() {
                    let mut v = T::zero();
                    for x in (0..n).filter(|&x| x != y) {
                        v = v - deal_value(x > y, &profile.bet_first[x], call, b_bet, &profile.call_after_check_bet[x]);
                    }
                    if best.as_ref().is_none_or(|(b, _)| v > *b) {
                        best = Some((v, k));
                    }
                }
                let (v, k) = best.expect("four plans");
                out.call_vs_bet[y] = plans[k].0.clone();
                out.bet_vs_check[y] = plans[k].1.clone();
                total = total + v;
            }
        }
    }
    Ok((out, total / deals(n)))
}

/// Sum over both players of the gain from switching to a best response.
pub fn nashconv<T: Scalar>(spec: &KuhnSpec, profile: &KuhnProfile<T>) -> Result<T, GameError> {
    let ev = expected_value(spec, profile)?;
    let (_, br_a) = best_response(spec, Player::Row, profile)?;
    let (_, br_b) = best_response(spec, Player::Col, profile)?;
    Ok((br_a - ev.clone()) + (br_b + ev))
}

fn floor(r: Prob) -> i64 {
    r.floor().to_integer()
}

fn ceil(r: Prob) -> i64 {
    r.ceil().to_integer()
}

fn frac(num: i64, den: i64) -> Prob {
    Ratio::new(num, den)
}

/// One line of a decision table: which cards it covers and what they do.
struct Line {
    covers: Box<dyn Fn(i64) -> bool>,
    prob: Prob,
}

fn line(covers: impl Fn(i64) -> bool + 'static, prob: Prob) -> Line {
    Line { covers: Box::new(covers), prob }
}

/// Fills a table from its lines. Every card must be covered by exactly one
/// line; mixing weights must be probabilities.
fn fill(name: &str, n: usize, lines: &[Line]) -> Result<Vec<Prob>, GameError> {
    let bug = |msg: String| GameError::Degenerate(format!("{name}: {msg}"));
    for l in lines {
        if l.prob < Prob::zero() || l.prob > Prob::one() {
            return Err(bug(format!("mixing probability {} outside [0,1]", l.prob)));
        }
    }
    (1..=n as i64)
        .map(|c| {
            let mut hits = lines.iter().filter(|l| (l.covers)(c));
            match (hits.next(), hits.next()) {
                (Some(l), None) => Ok(l.prob),
                (None, _) => Err(bug(format!("card {c} is not covered"))),
                (Some(_), Some(_)) => Err(bug(format!("card {c} is covered twice"))),
            }
        })
        .collect()
}

/// The threshold strategy for an `n`-card deck, built line by line from
/// the closed-form cut-offs (including the conditions under which the
/// boundary card mixes).
pub fn pdl_strategy(spec: &KuhnSpec) -> Result<KuhnProfile<Prob>, GameError> {
    let n = spec.n as i64;
    let (one, zero) = (Prob::one(), Prob::zero());

    let lo = frac(n - 1, 9);
    let hi = frac(2 * n + 4, 3);
    let (lo_f, lo_c, hi_f, hi_c) = (floor(lo), ceil(lo), floor(hi), ceil(hi));
    let mut a_first =
        vec![line(move |x| x <= lo_f, one), line(move |x| lo_c < x && x < hi_f, zero), line(move |x| x >= hi_c, one)];
    if n % 9 != 1 {
        a_first.push(line(move |x| x == lo_c, lo - lo_f));
    }
    if n % 3 != 1 {
        a_first.push(line(move |x| x == hi_f, Prob::from_integer(hi_c) - hi));
    }

    let c = frac(n - 1, 3);
    let (c_f, c_c) = (floor(c), ceil(c));
    let mut b_call = vec![line(move |y| y >= c_c, one), line(move |y| y < c_f, zero)];
    if n % 3 != 1 {
        b_call.push(line(move |y| y == c_f, Prob::from_integer(c_c) - c));
    }

    let l = frac(n - 1, 6);
    let h = frac(n + 3, 2);
    let (l_f, l_c, h_f, h_c) = (floor(l), ceil(l), floor(h), ceil(h));
    let mut b_bet =
        vec![line(move |y| y <= l_f, one), line(move |y| l_c < y && y < h_f, zero), line(move |y| y >= h_c, one)];
    if n % 6 != 1 {
        b_bet.push(line(move |y| y == l_c, l - l_f));
    }
    if n % 2 != 1 {
        b_bet.push(line(move |y| y == h_f, Prob::from_integer(h_c) - h));
    }

    let m = frac(n + 5, 3);
    let (m_f, m_c) = (floor(m), ceil(m));
    let mut a_call = vec![line(move |x| x >= m_c, one)];
    if n % 3 != 1 {
        a_call.push(line(move |x| x == m_f, Prob::from_integer(m_c) - m));
        a_call.push(line(move |x| x < m_f, zero));
    } else {
        a_call.push(line(move |x| x < m_c, zero));
    }

    Ok(KuhnProfile {
        bet_first: fill("bet_first", spec.n, &a_first)?,
        call_vs_bet: fill("call_vs_bet", spec.n, &b_call)?,
        bet_vs_check: fill("bet_vs_check", spec.n, &b_bet)?,
        call_after_check_bet: fill("call_after_check_bet", spec.n, &a_call)?,
    })
}

/// The one-parameter equilibrium family of the 3-card game.
pub fn alpha_equilibrium(alpha: Prob) -> Result<KuhnProfile<Prob>, GameError> {
    if alpha < Prob::zero() || alpha > Prob::one() {
        return Err(GameError::OutOfRange { name: "alpha", reason: format!("{alpha} not in [0, 1]") });
    }
    let third = frac(1, 3);
    let (zero, one) = (Prob::zero(), Prob::one());
    Ok(KuhnProfile {
        bet_first: vec![alpha * third, zero, alpha],
        call_vs_bet: vec![zero, third, one],
        bet_vs_check: vec![third, zero, one],
        call_after_check_bet: vec![zero, alpha * third + third, one],
    })
}

/// [`alpha_equilibrium`] for a decimal `alpha`, converted to the nearest
/// small-denominator fraction.
pub fn alpha_equilibrium_f64(alpha: f64) -> Result<KuhnProfile<Prob>, GameError> {
    let a = Prob::approximate_float(alpha)
        .ok_or(GameError::OutOfRange { name: "alpha", reason: format!("{alpha} is not representable") })?;
    alpha_equilibrium(a)
}

/// One chain of cut-off inequalities `v0 ≤ v1 ≤ v2 ≤ v3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdChain {
    pub name: &'static str,
    pub values: [i64; 4],
}

impl ThresholdChain {
    pub fn holds(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
    }
}

/// The two orderings of cut-offs that the indifference argument relies on:
/// `⌈(n−1)/9⌉ ≤ ⌊(n−1)/3⌋ ≤ ⌈(n−1)/3⌉ ≤ ⌊(2n+4)/3⌋` and
/// `⌈(n−1)/6⌉ ≤ ⌊(n−1)/3⌋ ≤ ⌈(n−1)/3⌉ ≤ ⌊(n+3)/2⌋`.
pub fn threshold_chains(spec: &KuhnSpec) -> [ThresholdChain; 2] {
    let n = spec.n as i64;
    let c = frac(n - 1, 3);
    [
        ThresholdChain {
            name: "first bet vs call",
            values: [ceil(frac(n - 1, 9)), floor(c), ceil(c), floor(frac(2 * n + 4, 3))],
        },
        ThresholdChain {
            name: "bet after check vs call",
            values: [ceil(frac(n - 1, 6)), floor(c), ceil(c), floor(frac(n + 3, 2))],
        },
    ]
}

/// Share of bluffs among bets, in card mass: for A's opening bet (cards up
/// to `⌈(n−1)/9⌉` against cards from `⌊(2n+4)/3⌋`) and for B's bet after a
/// check (cards up to `⌈(n−1)/6⌉` against cards from `⌊(n+3)/2⌋`).
pub fn bluff_ratios(spec: &KuhnSpec, profile: &KuhnProfile<Prob>) -> Result<(Prob, Prob), GameError> {
    check_profile(spec, &profile.to_scalar::<Exact>())?;
    let n = spec.n as i64;
    let ratio = |table: &[Prob], bluff_to: i64, value_from: i64| -> Result<Prob, GameError> {
        let mass = |cards: &mut dyn Iterator<Item = i64>| cards.map(|c| table[(c - 1) as usize]).sum::<Prob>();
        let bluff = mass(&mut (1..=bluff_to.min(n)));
        let value = mass(&mut (value_from.max(1)..=n));
        if bluff + value == Prob::zero() {
            return Err(GameError::Degenerate("no betting mass".into()));
        }
        Ok(bluff / (bluff + value))
    };
    Ok((
        ratio(&profile.bet_first, ceil(frac(n - 1, 9)), floor(frac(2 * n + 4, 3)))?,
        ratio(&profile.bet_vs_check, ceil(frac(n - 1, 6)), floor(frac(n + 3, 2)))?,
    ))
}

/// Names of the four decision tables, in [`general_pdls`] order.
pub const TABLES: [&str; 4] = ["a_first", "b_vs_bet", "b_vs_check", "a_vs_bet"];

/// The threshold strategy as four lists over `n` and the held card (`x`
/// for A, `y` for B).
pub fn general_pdls() -> [&'static Pdl; 4] {
    static A1: OnceLock<Pdl> = OnceLock::new();
    static B1: OnceLock<Pdl> = OnceLock::new();
    static B2: OnceLock<Pdl> = OnceLock::new();
    static A2: OnceLock<Pdl> = OnceLock::new();
    [
        cached(&A1, cheatsheets::KUHN_A_FIRST),
        cached(&B1, cheatsheets::KUHN_B_VS_BET),
        cached(&B2, cheatsheets::KUHN_B_VS_CHECK),
        cached(&A2, cheatsheets::KUHN_A_VS_BET),
    ]
}

/// The four lists with `n` fixed, keyed by table name.
pub fn export_pdls(spec: &KuhnSpec) -> Vec<(&'static str, Pdl)> {
    TABLES.iter().zip(general_pdls()).map(|(name, p)| (*name, p.substitute("n", spec.n as f64))).collect()
}

const TABLE_ACTIONS: [&str; 4] = ["bet", "call", "bet", "call"];

fn card_assignment(n: usize, card: usize) -> Assignment {
    Assignment::from([("n", n as f64), ("x", card as f64), ("y", card as f64)])
}

fn profile_from_distributions(
    n: usize,
    mut at_card: impl FnMut(usize) -> Result<Vec<Distribution>, PdlError>,
) -> Result<KuhnProfile<f64>, PdlError> {
    let mut tables: [Vec<f64>; 4] = Default::default();
    for card in 1..=n {
        let ds = at_card(card)?;
        if ds.len() != 4 {
            return Err(PdlError::Invalid(format!("expected four distributions, got {}", ds.len())));
        }
        for (t, (d, act)) in tables.iter_mut().zip(ds.iter().zip(TABLE_ACTIONS)) {
            t.push(d.prob(act));
        }
    }
    let [bet_first, call_vs_bet, bet_vs_check, call_after_check_bet] = tables;
    Ok(KuhnProfile { bet_first, call_vs_bet, bet_vs_check, call_after_check_bet })
}

/// Profile obtained by evaluating lists in [`general_pdls`] order at every
/// card.
pub fn profile_from_pdls(spec: &KuhnSpec, lists: &[&Pdl]) -> Result<KuhnProfile<f64>, PdlError> {
    profile_from_distributions(spec.n, |card| {
        let at = card_assignment(spec.n, card);
        lists.iter().map(|p| p.evaluate(&at).map(|(d, _)| d)).collect()
    })
}

/// Equilibrium objective over deck sizes: λ holds `n`, the policy is
/// queried once per card with `x = y = card` and must return the four
/// tables' distributions; the gap is the NashConv of the assembled profile.
#[derive(Debug, Clone, Copy, Default)]
pub struct KuhnFamily;

impl ObjectiveFamily for KuhnFamily {
    fn gap(&self, lambda: &Assignment, policy: &mut Policy<'_>) -> Result<f64, String> {
        let n = lambda.get("n").ok_or("missing `n`")?;
        if n.fract() != 0.0 || n < 0.0 {
            return Err(format!("n = {n} is not a whole number"));
        }
        let spec = KuhnSpec::new(n as usize).map_err(|e| e.to_string())?;
        let profile = profile_from_distributions(spec.n, |card| policy(&card_assignment(spec.n, card)))
            .map_err(|e| e.to_string())?;
        nashconv(&spec, &profile).map_err(|e| e.to_string())
    }
}
