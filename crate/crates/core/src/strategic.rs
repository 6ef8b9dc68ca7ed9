//! Finite two-player strategic-form games.
//!
//! Payoffs are stored row-major: entry `(i, j)` is the payoff when the row
//! player picks pure strategy `i` and the column player picks `j`.

use crate::error::GameError;

/// Tolerance for the exact-tie set returned by [`best_response`].
pub const TIE_BAND: f64 = 1e-12;
/// Tolerance on the sum of a mixed strategy.
pub const SIMPLEX_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    Row,
    Col,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Row => Player::Col,
            Player::Col => Player::Row,
        }
    }
}

/// A finite two-player game in strategic form.
#[derive(Debug, Clone, PartialEq)]
pub struct BimatrixGame {
    rows: usize,
    cols: usize,
    u1: Vec<f64>,
    u2: Vec<f64>,
    zero_sum: bool,
}

impl BimatrixGame {
    /// Builds a general-sum game from two `rows × cols` payoff tables.
    pub fn new(u1: Vec<Vec<f64>>, u2: Vec<Vec<f64>>) -> Result<Self, GameError> {
        let rows = u1.len();
        if rows == 0 || u2.len() != rows {
            return Err(GameError::Dimension(format!("payoff tables have {} and {} rows", rows, u2.len())));
        }
        let cols = u1[0].len();
        if cols == 0 {
            return Err(GameError::Dimension("payoff table has no columns".into()));
        }
        if u1.iter().chain(u2.iter()).any(|r| r.len() != cols) {
            return Err(GameError::Dimension("ragged payoff table".into()));
        }
        let u1: Vec<f64> = u1.into_iter().flatten().collect();
        let u2: Vec<f64> = u2.into_iter().flatten().collect();
        if u1.iter().chain(u2.iter()).any(|v| !v.is_finite()) {
            return Err(GameError::NonFinite);
        }
        Ok(BimatrixGame { rows, cols, u1, u2, zero_sum: false })
    }

    /// Builds a zero-sum game from the row player's payoffs; the column
    /// player's table is the exact negation.
    pub fn zero_sum(u1: Vec<Vec<f64>>) -> Result<Self, GameError> {
        let u2 = u1.iter().map(|r| r.iter().map(|v| -v).collect()).collect();
        let mut g = BimatrixGame::new(u1, u2)?;
        g.zero_sum = true;
        Ok(g)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero_sum(&self) -> bool {
        self.zero_sum
    }

    pub fn u1(&self, i: usize, j: usize) -> f64 {
        self.u1[i * self.cols + j]
    }

    pub fn u2(&self, i: usize, j: usize) -> f64 {
        self.u2[i * self.cols + j]
    }

    fn payoff(&self, player: Player, i: usize, j: usize) -> f64 {
        match player {
            Player::Row => self.u1(i, j),
            Player::Col => self.u2(i, j),
        }
    }

    fn strategies(&self, player: Player) -> usize {
        match player {
            Player::Row => self.rows,
            Player::Col => self.cols,
        }
    }

    /// Payoff to `player` for playing pure strategy `own` against `opp`.
    pub fn pure_payoff(&self, player: Player, own: usize, opp: &MixedStrategy) -> f64 {
        opp.probs()
            .iter()
            .enumerate()
            .map(|(k, &w)| {
                let (i, j) = match player {
                    Player::Row => (own, k),
                    Player::Col => (k, own),
                };
                w * self.payoff(player, i, j)
            })
            .sum()
    }
}

/// A probability vector over pure strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStrategy(Vec<f64>);

impl MixedStrategy {
    pub fn new(probs: Vec<f64>) -> Result<Self, GameError> {
        if probs.is_empty() {
            return Err(GameError::InvalidStrategy("empty probability vector".into()));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(GameError::InvalidStrategy(format!("negative or non-finite entry in {probs:?}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SIMPLEX_TOL {
            return Err(GameError::InvalidStrategy(format!("entries sum to {total}")));
        }
        Ok(MixedStrategy(probs))
    }

    /// The pure strategy `index` out of `len`.
    pub fn pure(len: usize, index: usize) -> Self {
        let mut v = vec![0.0; len];
        v[index] = 1.0;
        MixedStrategy(v)
    }

    pub fn uniform(len: usize) -> Self {
        MixedStrategy(vec![1.0 / len as f64; len])
    }

    /// Two-action strategy `(p, 1 − p)`; `p` must lie in `[0, 1]`.
    pub fn binary(p: f64) -> Result<Self, GameError> {
        MixedStrategy::new(vec![p, 1.0 - p])
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyProfile {
    pub row: MixedStrategy,
    pub col: MixedStrategy,
}

impl StrategyProfile {
    pub fn new(row: MixedStrategy, col: MixedStrategy) -> Self {
        StrategyProfile { row, col }
    }

    pub fn get(&self, player: Player) -> &MixedStrategy {
        match player {
            Player::Row => &self.row,
            Player::Col => &self.col,
        }
    }
}

fn check_dims(game: &BimatrixGame, profile: &StrategyProfile) -> Result<(), GameError> {
    if profile.row.len() != game.rows || profile.col.len() != game.cols {
        return Err(GameError::Dimension(format!(
            "profile is {}×{}, game is {}×{}",
            profile.row.len(),
            profile.col.len(),
            game.rows,
            game.cols
        )));
    }
    Ok(())
}

/// Expected payoffs `(row, col)` of a mixed profile.
pub fn expected_utility(game: &BimatrixGame, profile: &StrategyProfile) -> Result<(f64, f64), GameError> {
    check_dims(game, profile)?;
    let mut v1 = 0.0;
    let mut v2 = 0.0;
    for (i, &p) in profile.row.probs().iter().enumerate() {
        for (j, &q) in profile.col.probs().iter().enumerate() {
            let w = p * q;
            v1 += w * game.u1(i, j);
            v2 += w * game.u2(i, j);
        }
    }
    if game.zero_sum {
        // u2 is the exact negation, so the pair cancels bit for bit.
        v2 = -v1;
    }
    Ok((v1, v2))
}

/// Best-response value of `player` against `opp`, with every pure maximiser
/// inside [`TIE_BAND`] of the maximum.
pub fn best_response(game: &BimatrixGame, player: Player, opp: &MixedStrategy) -> Result<(f64, Vec<usize>), GameError> {
    if opp.len() != game.strategies(player.opponent()) {
        return Err(GameError::Dimension(format!(
            "opponent strategy has {} entries, expected {}",
            opp.len(),
            game.strategies(player.opponent())
        )));
    }
    let values: Vec<f64> = (0..game.strategies(player)).map(|s| game.pure_payoff(player, s, opp)).collect();
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let brs = values.iter().enumerate().filter(|(_, &v)| v >= best - TIE_BAND).map(|(i, _)| i).collect();
    Ok((best, brs))
}

/// Largest gain either player could obtain by deviating unilaterally.
pub fn max_regret(game: &BimatrixGame, profile: &StrategyProfile) -> Result<f64, GameError> {
    let (v1, v2) = expected_utility(game, profile)?;
    let (b1, _) = best_response(game, Player::Row, &profile.col)?;
    let (b2, _) = best_response(game, Player::Col, &profile.row)?;
    Ok((b1 - v1).max(b2 - v2))
}

/// General-sum 2×2 payoffs laid out as
///
/// ```text
/// (a,b) (c,d)
/// (e,f) (g,h)
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoByTwoPayoffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub h: f64,
}

impl TwoByTwoPayoffs {
    /// Zero-sum view: the column player's payoffs negate the row player's.
    pub fn zero_sum(a: f64, c: f64, e: f64, g: f64) -> Self {
        TwoByTwoPayoffs { a, b: -a, c, d: -c, e, f: -e, g, h: -g }
    }

    pub fn from_array(v: [f64; 8]) -> Self {
        let [a, b, c, d, e, f, g, h] = v;
        TwoByTwoPayoffs { a, b, c, d, e, f, g, h }
    }

    pub fn game(&self) -> BimatrixGame {
        let u1 = vec![vec![self.a, self.c], vec![self.e, self.g]];
        let is_zs = self.b == -self.a && self.d == -self.c && self.f == -self.e && self.h == -self.g;
        if is_zs {
            BimatrixGame::zero_sum(u1).expect("2×2 tables are well formed")
        } else {
            let u2 = vec![vec![self.b, self.d], vec![self.f, self.h]];
            BimatrixGame::new(u1, u2).expect("2×2 tables are well formed")
        }
    }
}

/// Which line of the 2×2 decision list produced an equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoByTwoBranch {
    TopLeft,
    TopRight,
    BottomLeft,
    BottomRight,
    Mixed,
}

impl TwoByTwoBranch {
    pub fn label(self) -> &'static str {
        match self {
            TwoByTwoBranch::TopLeft => "pure(1,1)",
            TwoByTwoBranch::TopRight => "pure(1,2)",
            TwoByTwoBranch::BottomLeft => "pure(2,1)",
            TwoByTwoBranch::BottomRight => "pure(2,2)",
            TwoByTwoBranch::Mixed => "mixed",
        }
    }
}

/// Solves a 2×2 game with the five-line decision list: four pure
/// equilibrium tests in fixed order, then the fully mixed formula.
pub fn solve_2x2_branch(p: &TwoByTwoPayoffs) -> Result<(StrategyProfile, TwoByTwoBranch), GameError> {
    let TwoByTwoPayoffs { a, b, c, d, e, f, g, h } = *p;
    if [a, b, c, d, e, f, g, h].iter().any(|v| !v.is_finite()) {
        return Err(GameError::NonFinite);
    }
    let pure = |i: usize, j: usize, br: TwoByTwoBranch| {
        Ok((StrategyProfile::new(MixedStrategy::pure(2, i), MixedStrategy::pure(2, j)), br))
    };
    if a >= e && b >= d {
        return pure(0, 0, TwoByTwoBranch::TopLeft);
    }
    if c >= g && d >= b {
        return pure(0, 1, TwoByTwoBranch::TopRight);
    }
    if e >= a && f >= h {
        return pure(1, 0, TwoByTwoBranch::BottomLeft);
    }
    if g >= c && h >= f {
        return pure(1, 1, TwoByTwoBranch::BottomRight);
    }
    let den_row = b - f + h - d;
    let den_col = a - c + g - e;
    if den_row == 0.0 || den_col == 0.0 {
        return Err(GameError::Degenerate(format!("mixed branch reached with zero denominator for {p:?}")));
    }
    let row_top = (h - f) / den_row;
    let col_left = (g - c) / den_col;
    let row = MixedStrategy::binary(row_top)
        .map_err(|_| GameError::Degenerate(format!("row mixing probability {row_top} outside [0,1]")))?;
    let col = MixedStrategy::binary(col_left)
        .map_err(|_| GameError::Degenerate(format!("column mixing probability {col_left} outside [0,1]")))?;
    Ok((StrategyProfile::new(row, col), TwoByTwoBranch::Mixed))
}

pub fn solve_2x2(p: &TwoByTwoPayoffs) -> Result<StrategyProfile, GameError> {
    solve_2x2_branch(p).map(|(profile, _)| profile)
}

/// Row player's value of the zero-sum game `[[a, c], [e, g]]`.
pub fn zero_sum_value_2x2(a: f64, c: f64, e: f64, g: f64) -> Result<f64, GameError> {
    let p = TwoByTwoPayoffs::zero_sum(a, c, e, g);
    let profile = solve_2x2(&p)?;
    Ok(expected_utility(&p.game(), &profile)?.0)
}

/// Row player's payoff when `row` faces a nemesis in the zero-sum game
/// `[[a, c], [e, g]]`.
pub fn nemesis_payoff_zs(
    a: f64,
    c: f64,
    e: f64,
    g: f64,
    player: Player,
    strategy: &MixedStrategy,
) -> Result<f64, GameError> {
    let game = TwoByTwoPayoffs::zero_sum(a, c, e, g).game();
    if strategy.len() != 2 {
        return Err(GameError::Dimension(format!("strategy has {} entries, expected 2", strategy.len())));
    }
    // The nemesis maximises its own payoff, which minimises ours.
    let (opp_best, _) = best_response(&game, player.opponent(), strategy)?;
    Ok(-opp_best)
}

/// Game value (for `player`) minus `player`'s payoff against a nemesis.
pub fn exploitability_zs(
    a: f64,
    c: f64,
    e: f64,
    g: f64,
    player: Player,
    strategy: &MixedStrategy,
) -> Result<f64, GameError> {
    let v = zero_sum_value_2x2(a, c, e, g)?;
    let own_value = match player {
        Player::Row => v,
        Player::Col => -v,
    };
    Ok(own_value - nemesis_payoff_zs(a, c, e, g, player, strategy)?)
}
