//! Parameter sampling, nearest-sample lookup and the exploitability-vs-k
//! experiment over random 2×2 zero-sum games.
//!
//! # Random streams
//!
//! Every generator is a [`ChaCha8Rng`] seeded with `seed_from_u64(seed)` and
//! then moved to a fixed stream: [`TRAIN_STREAM`] for training games,
//! [`TEST_STREAM`] for probe games and [`INIT_STREAM`] for k-means
//! initialisation. Identical seeds therefore reproduce identical draws on
//! every platform.

mod kdtree;
mod kmeans;

pub use kdtree::KdTree;
pub use kmeans::{kmeans_variant, KMeans};

use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::GameError;
use crate::numfmt;
use crate::strategic::{solve_2x2, zero_sum_value_2x2, MixedStrategy, StrategyProfile, TwoByTwoPayoffs};

pub const TRAIN_STREAM: u64 = 0;
pub const TEST_STREAM: u64 = 1;
pub const INIT_STREAM: u64 = 2;

/// Row player's payoffs `(a, c, e, g)` of `[[a, c], [e, g]]`.
pub type ZsGame = [f64; 4];

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn uniform(range: (f64, f64)) -> Result<Uniform<f64>, GameError> {
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(GameError::Config(format!("payoff range [{lo}, {hi}] must be finite with low < high")));
    }
    Uniform::new_inclusive(lo, hi).map_err(|e| GameError::Config(e.to_string()))
}

fn draw_games(t: usize, rng: &mut ChaCha8Rng, dist: &Uniform<f64>) -> Vec<ZsGame> {
    (0..t).map(|_| std::array::from_fn(|_| dist.sample(rng))).collect()
}

/// `t` games with i.i.d. uniform payoffs on `range`, drawn from the training
/// stream of `seed`.
pub fn sample_zs_games(t: usize, seed: u64, range: (f64, f64)) -> Result<Vec<ZsGame>, GameError> {
    let dist = uniform(range)?;
    Ok(draw_games(t, &mut stream_rng(seed, TRAIN_STREAM), &dist))
}

/// Squared Euclidean distance, summed in index order.
pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        acc += d * d;
    }
    acc
}

/// Index of the training point closest to `query`; the lowest index wins
/// exact ties.
pub fn nearest_index<P: AsRef<[f64]>>(train: &[P], query: &[f64]) -> Result<usize, GameError> {
    if train.is_empty() {
        return Err(GameError::Config("training set is empty".into()));
    }
    let mut best = (f64::INFINITY, 0);
    for (i, p) in train.iter().enumerate() {
        let p = p.as_ref();
        if p.len() != query.len() {
            return Err(GameError::Dimension(format!(
                "training point {i} has {} coordinates, query has {}",
                p.len(),
                query.len()
            )));
        }
        let d = squared_distance(p, query);
        if d < best.0 {
            best = (d, i);
        }
    }
    Ok(best.1)
}

/// Sampled games paired with an equilibrium of each.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    params: Vec<ZsGame>,
    strategies: Vec<StrategyProfile>,
}

impl SampleSet {
    /// Solves every game with the 2×2 decision list.
    pub fn solve(params: Vec<ZsGame>) -> Result<Self, GameError> {
        let strategies = params
            .iter()
            .map(|&[a, c, e, g]| solve_2x2(&TwoByTwoPayoffs::zero_sum(a, c, e, g)))
            .collect::<Result<_, _>>()?;
        Ok(SampleSet { params, strategies })
    }

    /// Pairs games with strategies computed elsewhere.
    pub fn from_parts(params: Vec<ZsGame>, strategies: Vec<StrategyProfile>) -> Result<Self, GameError> {
        if params.len() != strategies.len() {
            return Err(GameError::Dimension(format!(
                "{} games but {} strategy profiles",
                params.len(),
                strategies.len()
            )));
        }
        Ok(SampleSet { params, strategies })
    }

    /// Games at the cluster means, each solved afresh.
    pub fn from_clusters(km: &KMeans) -> Result<Self, GameError> {
        let params = km
            .means
            .iter()
            .map(|m| {
                <ZsGame>::try_from(m.as_slice())
                    .map_err(|_| GameError::Dimension(format!("cluster mean has {} coordinates, expected 4", m.len())))
            })
            .collect::<Result<_, _>>()?;
        SampleSet::solve(params)
    }

    pub fn params(&self) -> &[ZsGame] {
        &self.params
    }

    pub fn strategies(&self) -> &[StrategyProfile] {
        &self.strategies
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    /// Strategies stored for the sample nearest to `query`.
    pub fn lookup(&self, query: &ZsGame) -> Result<(usize, &StrategyProfile), GameError> {
        let i = nearest_index(&self.params, query)?;
        Ok((i, &self.strategies[i]))
    }
}

/// Exploitability of the row and column strategies `(p, 1−p)` and
/// `(q, 1−q)` in `game`, whose row value is `value`.
pub fn profile_exploitability(game: &ZsGame, value: f64, p: f64, q: f64) -> (f64, f64) {
    let [a, c, e, g] = *game;
    let row_worst = (p * a + (1.0 - p) * e).min(p * c + (1.0 - p) * g);
    let col_worst = (a * q + c * (1.0 - q)).max(e * q + g * (1.0 - q));
    (value - row_worst, col_worst - value)
}

/// Mean of the two players' exploitabilities.
pub fn averaged_exploitability(game: &ZsGame, value: f64, profile: &StrategyProfile) -> f64 {
    let (r, c) = profile_exploitability(game, value, top(&profile.row), top(&profile.col));
    0.5 * (r + c)
}

fn top(s: &MixedStrategy) -> f64 {
    s.probs()[0]
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n_train: usize,
    pub k_values: Vec<usize>,
    pub n_test: usize,
    pub seed: u64,
    pub payoff_range: (f64, f64),
}

impl ExperimentConfig {
    /// 100,000 training games, 10,000 probes, payoffs on [−1, 1].
    pub fn full_scale(seed: u64) -> Self {
        ExperimentConfig {
            n_train: 100_000,
            k_values: vec![1, 2, 3, 5, 10, 20, 100, 1_000, 10_000, 100_000],
            n_test: 10_000,
            seed,
            payoff_range: (-1.0, 1.0),
        }
    }

    /// Scaled-down profile: 10,000 training games, 1,000 probes.
    pub fn desk(seed: u64) -> Self {
        ExperimentConfig {
            n_train: 10_000,
            k_values: vec![1, 2, 3, 5, 10, 20, 100, 1_000, 10_000],
            n_test: 1_000,
            seed,
            payoff_range: (-1.0, 1.0),
        }
    }

    pub fn validate(&self) -> Result<(), GameError> {
        if self.n_train == 0 || self.n_test == 0 {
            return Err(GameError::Config("n_train and n_test must be at least 1".into()));
        }
        if self.k_values.is_empty() {
            return Err(GameError::Config("k_values must not be empty".into()));
        }
        if self.k_values.windows(2).any(|w| w[0] > w[1]) {
            return Err(GameError::Config("k_values must be sorted ascending".into()));
        }
        if self.k_values[0] == 0 {
            return Err(GameError::Config("every k must be at least 1".into()));
        }
        let max_k = *self.k_values.last().unwrap();
        if max_k > self.n_train {
            return Err(GameError::Config(format!("k = {max_k} exceeds n_train = {}", self.n_train)));
        }
        uniform(self.payoff_range).map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentRow {
    pub k: usize,
    pub avg_exploitability: f64,
    pub std_err: f64,
    pub n_test: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub rows: Vec<ExperimentRow>,
}

pub const CSV_HEADER: &str = "k,avg_exploitability,std_err,n_test,seed";

impl ExperimentResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.k,
                numfmt::sig(r.avg_exploitability, 6),
                numfmt::sig(r.std_err, 6),
                r.n_test,
                r.seed
            ));
        }
        out
    }

    pub fn row(&self, k: usize) -> Option<&ExperimentRow> {
        self.rows.iter().find(|r| r.k == k)
    }
}

/// Solved training point: lookup key plus the stored mixing probabilities.
struct Trained {
    key: Vec<f64>,
    p: f64,
    q: f64,
}

/// Probe point: lookup key, its game and the game's row value.
struct Probe {
    key: Vec<f64>,
    game: ZsGame,
    value: f64,
}

fn train_points(keys: Vec<Vec<f64>>, games: &[ZsGame]) -> Result<Vec<Trained>, GameError> {
    keys.into_iter()
        .zip(games)
        .map(|(key, &[a, c, e, g])| {
            let prof = solve_2x2(&TwoByTwoPayoffs::zero_sum(a, c, e, g))?;
            Ok(Trained { key, p: top(&prof.row), q: top(&prof.col) })
        })
        .collect()
}

fn probes(keys: Vec<Vec<f64>>, games: Vec<ZsGame>) -> Result<Vec<Probe>, GameError> {
    keys.into_iter()
        .zip(games)
        .map(|(key, game)| {
            let [a, c, e, g] = game;
            Ok(Probe { key, game, value: zero_sum_value_2x2(a, c, e, g)? })
        })
        .collect()
}

/// Mean and standard error of the averaged exploitability over `probes`
/// when only the first `k` training points are available, for every `k`.
fn prefix_stats(train: &[Trained], probes: &[Probe], ks: &[usize]) -> Vec<(f64, f64)> {
    ks.iter()
        .map(|&k| {
            let keys: Vec<&[f64]> = train[..k].iter().map(|t| t.key.as_slice()).collect();
            let tree = KdTree::build(&keys);
            let vals: Vec<f64> = probes
                .iter()
                .map(|pr| {
                    let t = &train[tree.nearest(&pr.key).expect("k ≥ 1")];
                    let (r, c) = profile_exploitability(&pr.game, pr.value, t.p, t.q);
                    0.5 * (r + c)
                })
                .collect();
            mean_and_se(&vals)
        })
        .collect()
}

fn mean_and_se(vals: &[f64]) -> (f64, f64) {
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    if vals.len() < 2 {
        return (mean, 0.0);
    }
    let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Exploitability of nearest-training-game strategies on fresh probe games,
/// one row per `k`. Training games come from the training stream, probes
/// from the test stream; row `k` uses the first `k` training games.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult, GameError> {
    config.validate()?;
    let dist = uniform(config.payoff_range)?;
    let max_k = *config.k_values.last().unwrap();
    let mut train_rng = stream_rng(config.seed, TRAIN_STREAM);
    let train_games = draw_games(config.n_train, &mut train_rng, &dist);
    let test_games = draw_games(config.n_test, &mut stream_rng(config.seed, TEST_STREAM), &dist);
    let used = &train_games[..max_k];
    let train = train_points(used.iter().map(|g| g.to_vec()).collect(), used)?;
    let probes = probes(test_games.iter().map(|g| g.to_vec()).collect(), test_games)?;
    let rows = prefix_stats(&train, &probes, &config.k_values)
        .into_iter()
        .zip(&config.k_values)
        .map(|((avg, se), &k)| ExperimentRow {
            k,
            avg_exploitability: avg,
            std_err: se,
            n_test: config.n_test,
            seed: config.seed,
        })
        .collect();
    Ok(ExperimentResult { rows })
}

/// A continuous map from parameter vectors to zero-sum 2×2 games, with a
/// sampling distribution over parameters.
pub trait ParamFamily {
    fn dim(&self) -> usize;
    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64>;
    fn game(&self, lambda: &[f64]) -> ZsGame;
}

/// Payoffs drawn directly: λ is the game.
#[derive(Debug, Clone, Copy)]
pub struct UniformPayoffs {
    pub low: f64,
    pub high: f64,
}

impl ParamFamily for UniformPayoffs {
    fn dim(&self) -> usize {
        4
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let d = Uniform::new_inclusive(self.low, self.high).expect("valid range");
        (0..4).map(|_| d.sample(rng)).collect()
    }

    fn game(&self, lambda: &[f64]) -> ZsGame {
        [lambda[0], lambda[1], lambda[2], lambda[3]]
    }
}

/// The same game for every λ ∈ [0, 1].
#[derive(Debug, Clone, Copy)]
pub struct ConstantPayoffs(pub ZsGame);

impl ParamFamily for ConstantPayoffs {
    fn dim(&self) -> usize {
        1
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        vec![Uniform::new_inclusive(0.0, 1.0).expect("valid range").sample(rng)]
    }

    fn game(&self, _lambda: &[f64]) -> ZsGame {
        self.0
    }
}

/// Straight-line blend `(1−λ)·from + λ·to`, λ ∈ [0, 1].
#[derive(Debug, Clone, Copy)]
pub struct Interpolated {
    pub from: ZsGame,
    pub to: ZsGame,
}

impl ParamFamily for Interpolated {
    fn dim(&self) -> usize {
        1
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        vec![Uniform::new_inclusive(0.0, 1.0).expect("valid range").sample(rng)]
    }

    fn game(&self, lambda: &[f64]) -> ZsGame {
        let l = lambda[0];
        std::array::from_fn(|i| (1.0 - l) * self.from[i] + l * self.to[i])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub t: usize,
    pub mean: f64,
    pub per_seed: Vec<f64>,
}

/// Mean exploitability of nearest-sample strategies with `t` samples, for
/// each `t`, averaged over `seeds`. Each seed draws `max(t)` training
/// parameters and `n_test` probes; smaller `t` use a prefix.
pub fn convergence_study(
    family: &dyn ParamFamily,
    t_values: &[usize],
    seeds: &[u64],
    n_test: usize,
) -> Result<Vec<ConvergenceRow>, GameError> {
    if t_values.is_empty() || t_values[0] == 0 || t_values.windows(2).any(|w| w[0] > w[1]) {
        return Err(GameError::Config("t_values must be ascending and at least 1".into()));
    }
    if seeds.is_empty() || n_test == 0 {
        return Err(GameError::Config("need at least one seed and one probe".into()));
    }
    let t_max = *t_values.last().unwrap();
    let mut per_t = vec![Vec::with_capacity(seeds.len()); t_values.len()];
    for &seed in seeds {
        let mut rng = stream_rng(seed, TRAIN_STREAM);
        let keys: Vec<Vec<f64>> = (0..t_max).map(|_| family.sample(&mut rng)).collect();
        let games: Vec<ZsGame> = keys.iter().map(|k| family.game(k)).collect();
        let train = train_points(keys, &games)?;
        let mut rng = stream_rng(seed, TEST_STREAM);
        let keys: Vec<Vec<f64>> = (0..n_test).map(|_| family.sample(&mut rng)).collect();
        let games = keys.iter().map(|k| family.game(k)).collect();
        let probes = probes(keys, games)?;
        for (slot, (mean, _)) in per_t.iter_mut().zip(prefix_stats(&train, &probes, t_values)) {
            slot.push(mean);
        }
    }
    Ok(t_values
        .iter()
        .zip(per_t)
        .map(|(&t, per_seed)| ConvergenceRow {
            t,
            mean: per_seed.iter().sum::<f64>() / per_seed.len() as f64,
            per_seed,
        })
        .collect())
}
