use std::net::IpAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "pgames", version, about = "Solve, advise on and certify parametrized games")]
pub struct Cli {
    /// Significant digits for printed numbers (1-17).
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub precision: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Equilibrium of a general-sum 2x2 game.
    ///
    /// Cells are (a,b) (c,d) on the top row and (e,f) (g,h) on the bottom
    /// row, row player's payoff first. Any finite reals.
    #[command(name = "solve2x2")]
    Solve2x2(Solve2x2Args),
    /// Final-round wager advice for the leader (player 1) or the trailer
    /// (player 2).
    ///
    /// Banks are fixed at 5 and 3; p1 and p2 are each player's probability
    /// of answering correctly, in [0, 1]. Wagers are wager0..wager5 for the
    /// leader and wager0..wager3 for the trailer, in bank units.
    Jeopardy(JeopardyArgs),
    /// Threshold strategies for Kuhn poker with an n-card deck.
    ///
    /// Tables are indexed by card 1..n and hold the probability of betting
    /// first, calling a bet, betting after a check and calling after
    /// check-bet. Tables are computed as exact rationals and printed as
    /// decimals unless --exact is given.
    Kuhn(KuhnArgs),
    /// Vote advice in the two-opponent Weakest Link endgame.
    ///
    /// W is the bank in currency units (> 0). p1 > p2 are your probabilities
    /// of beating opponent 1 and opponent 2 head to head; y1 and y2 are the
    /// probabilities that each opponent votes for you. EVs are in the same
    /// units as W.
    WeakestLink(WeakestLinkArgs),
    /// Nearest-sample exploitability experiment on random zero-sum 2x2
    /// games; writes CSV with columns k,avg_exploitability,std_err,n_test,seed.
    ///
    /// CSV numbers always use 6 significant digits.
    Sample(SampleArgs),
    /// Parse, evaluate, check or render cheat-sheet files.
    ///
    /// FILE is a path, `-` for standard input, or `@name` for a bundled
    /// sheet (jeopardy_p1, jeopardy_p2, weakest_link, two_by_two_row,
    /// two_by_two_col, kuhn_a_first, kuhn_b_vs_bet, kuhn_b_vs_check,
    /// kuhn_a_vs_bet).
    Pdl {
        #[command(subcommand)]
        action: PdlCommand,
    },
    /// Run every grid certificate and print one PASS/FAIL line each.
    Verify,
    /// Start the HTTP/JSON advisor service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct Solve2x2Args {
    #[arg(long, allow_negative_numbers = true, value_parser = finite)]
    pub a: f64,
    #[arg(long, allow_negative_numbers = true, value_parser = finite)]
    pub b: f64,
    #[arg(long, allow_negative_numbers = true, value_parser = finite)]
    pub c: f64,
    #[arg(long, allow_negative_numbers = true, value_parser = finite)]
    pub d: f64,
    #[arg(long, allow_negative_numbers = true, value_parser = finite)]
    pub e: f64,
    #[arg(long, allow_negative_numbers = true, value_parser = finite)]
    pub f: f64,
    #[arg(long, allow_negative_numbers = true, value_parser = finite)]
    pub g: f64,
    #[arg(long, allow_negative_numbers = true, value_parser = finite)]
    pub h: f64,
}

#[derive(Debug, Args)]
pub struct JeopardyArgs {
    /// Leader's probability of a correct answer, in [0, 1].
    #[arg(long, value_parser = probability)]
    pub p1: f64,
    /// Trailer's probability of a correct answer, in [0, 1].
    #[arg(long, value_parser = probability)]
    pub p2: f64,
    /// Who is asking: 1 (leader) or 2 (trailer).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub player: u8,
}

#[derive(Debug, Args)]
pub struct KuhnArgs {
    /// Number of cards, 3-10000.
    #[arg(long, value_parser = clap::value_parser!(u64).range(3..=10_000))]
    pub n: u64,
    /// Print tables as exact fractions instead of decimals.
    #[arg(long)]
    pub exact: bool,
    /// Also compute the NashConv and the first player's expected value
    /// (chips per hand, exact).
    #[arg(long)]
    pub nashconv: bool,
    /// Write the four decision lists with n fixed to DIR/<table>.pdl.
    #[arg(long, value_name = "DIR")]
    pub export_pdl: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WeakestLinkArgs {
    /// Bank in currency units, > 0.
    #[arg(long, value_parser = positive)]
    pub w: f64,
    /// Your probability of beating opponent 1 head to head, in [0, 1].
    #[arg(long, value_parser = probability)]
    pub p1: f64,
    /// Your probability of beating opponent 2 (the stronger), in [0, 1],
    /// below p1.
    #[arg(long, value_parser = probability)]
    pub p2: f64,
    /// Probability that opponent 1 votes for you, in [0, 1].
    #[arg(long, value_parser = probability)]
    pub y1: f64,
    /// Probability that opponent 2 votes for you, in [0, 1].
    #[arg(long, value_parser = probability)]
    pub y2: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Preset {
    /// 100000 training games, 10000 test games, k up to 100000.
    Full,
    /// 10000 training games, 1000 test games, k up to 10000.
    Desk,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Base configuration; the flags below override its fields.
    #[arg(long, value_enum, default_value_t = Preset::Full)]
    pub preset: Preset,
    /// Number of training games (>= 1).
    #[arg(long)]
    pub n_train: Option<usize>,
    /// Comma-separated ascending list sizes k, each between 1 and n_train.
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<usize>>,
    /// Number of fresh test games per k (>= 1).
    #[arg(long)]
    pub n_test: Option<usize>,
    /// 64-bit seed.
    #[arg(long, env = "PGAMES_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Lower end of the uniform payoff range.
    #[arg(long, allow_negative_numbers = true, value_parser = finite)]
    pub low: Option<f64>,
    /// Upper end of the uniform payoff range, above low.
    #[arg(long, allow_negative_numbers = true, value_parser = finite)]
    pub high: Option<f64>,
    /// Write the CSV here instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Family {
    /// Two lists (row, column) over a payoff lattice in {-1, 0, 1}^8;
    /// gap is the largest regret.
    TwoByTwo,
    /// Two lists (leader, trailer) over p1, p2 in {0, 0.05, .., 1};
    /// gap is the largest regret.
    Jeopardy,
    /// One list over p1 > p2, y1, y2 on a 0.05 grid; gap is the lost EV per
    /// unit bank under the two-profile conditional model.
    WeakestLink,
    /// As weakest-link but scored by the full four-profile model.
    WeakestLinkFull,
    /// Four lists over n = 3..50; gap is the NashConv in chips.
    Kuhn,
}

#[derive(Debug, Subcommand)]
pub enum PdlCommand {
    /// Evaluate a list at one parameter point.
    Eval {
        file: String,
        /// Parameter value, repeatable: --set p1=0.5 --set p2=0.25.
        #[arg(long = "set", value_name = "NAME=VALUE", value_parser = binding)]
        set: Vec<(String, f64)>,
    },
    /// Parse lists and report depth and width; with --family, also the
    /// worst objective gap over that family's grid.
    Check {
        #[arg(required = true)]
        files: Vec<String>,
        #[arg(long, value_enum)]
        family: Option<Family>,
    },
    /// Print the canonical form of a list.
    Render {
        file: String,
        /// Fix a parameter before rendering, repeatable.
        #[arg(long = "set", value_name = "NAME=VALUE", value_parser = binding)]
        set: Vec<(String, f64)>,
    },
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// TCP port, 0 picks a free one.
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    /// Address to bind.
    #[arg(long, default_value = "127.0.0.1")]
    pub bind: IpAddr,
}

fn finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn probability(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is not a probability in [0, 1]"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("{v} is not positive"))
    }
}

fn binding(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("`{s}` is not NAME=VALUE"))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(format!("`{s}` has an empty name"));
    }
    Ok((name.to_string(), finite(value.trim())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn value_parsers() {
        assert_eq!(probability("0.25"), Ok(0.25));
        assert!(probability("1.5").is_err());
        assert!(probability("nan").is_err());
        assert!(positive("0").is_err());
        assert!(finite("inf").is_err());
        assert_eq!(binding("p1 = 0.5"), Ok(("p1".into(), 0.5)));
        assert!(binding("p1").is_err());
        assert!(binding("=1").is_err());
    }
}
