use num_traits::{ToPrimitive, Zero};
use pgames_core::jeopardy::{self, JeopardyParams};
use pgames_core::kuhn::{self, Exact, KuhnProfile, KuhnSpec, Prob};
use pgames_core::sampling::{kmeans_variant, run_experiment, sample_zs_games, ExperimentConfig};
use pgames_core::weakest_link::{self as wl, Vote, WLParams};
use pgames_core::Player;
use proptest::prelude::*;

fn prob() -> impl Strategy<Value = Prob> {
    (0i64..=12).prop_map(|k| Prob::new(k, 12))
}

fn kuhn_profile(n: usize) -> impl Strategy<Value = KuhnProfile<Prob>> {
    prop::collection::vec(prob(), 4 * n).prop_map(move |v| KuhnProfile {
        bet_first: v[..n].to_vec(),
        call_vs_bet: v[n..2 * n].to_vec(),
        bet_vs_check: v[2 * n..3 * n].to_vec(),
        call_after_check_bet: v[3 * n..].to_vec(),
    })
}

fn with_tables(base: &KuhnProfile<Prob>, own: &KuhnProfile<Prob>, player: Player) -> KuhnProfile<Prob> {
    let mut out = base.clone();
    match player {
        Player::Row => {
            out.bet_first = own.bet_first.clone();
            out.call_after_check_bet = own.call_after_check_bet.clone();
        }
        Player::Col => {
            out.call_vs_bet = own.call_vs_bet.clone();
            out.bet_vs_check = own.bet_vs_check.clone();
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn kuhn_best_response_beats_random_strategies(
        (n, base, others) in (3usize..8).prop_flat_map(|n| {
            (Just(n), kuhn_profile(n), prop::collection::vec(kuhn_profile(n), 100))
        })
    ) {
        let spec = KuhnSpec::new(n).unwrap();
        let exact = base.to_scalar::<Exact>();
        for player in [Player::Row, Player::Col] {
            let (_, br) = kuhn::best_response(&spec, player, &exact).unwrap();
            for own in &others {
                let ev = kuhn::expected_value(&spec, &with_tables(&base, own, player).to_scalar::<Exact>()).unwrap();
                let mine = if player == Player::Row { ev } else { -ev };
                prop_assert!(br >= mine, "n={} {:?}: {} < {}", n, player, br, mine);
            }
        }
        prop_assert!(kuhn::nashconv(&spec, &exact).unwrap() >= Exact::zero());
    }

    #[test]
    fn kuhn_value_is_bounded_and_float_matches_exact((n, p) in (3usize..12).prop_flat_map(|n| (Just(n), kuhn_profile(n)))) {
        let spec = KuhnSpec::new(n).unwrap();
        let exact = kuhn::expected_value(&spec, &p.to_scalar::<Exact>()).unwrap().to_f64().unwrap();
        let float = kuhn::expected_value(&spec, &p.to_scalar::<f64>()).unwrap();
        prop_assert!((-2.0..=2.0).contains(&exact));
        prop_assert!((exact - float).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn jeopardy_advice_is_a_distribution_and_an_equilibrium(p1 in 0.0f64..=1.0, p2 in 0.0f64..=1.0) {
        let params = JeopardyParams::new(p1, p2).unwrap();
        for player in [Player::Row, Player::Col] {
            let (d, _) = jeopardy::advise(player, &params).unwrap();
            let total: f64 = d.entries().iter().map(|(_, p)| p).sum();
            prop_assert!(d.entries().iter().all(|(_, p)| *p >= 0.0));
            prop_assert!((total - 1.0).abs() <= 1e-9);
        }
        let game = jeopardy::payoff_matrix(&params);
        for i in 0..game.rows() {
            for j in 0..game.cols() {
                prop_assert!((-0.5..=0.5).contains(&game.u1(i, j)));
                prop_assert_eq!(game.u2(i, j), -game.u1(i, j));
            }
        }
        prop_assert!(jeopardy::verify_equilibrium(&params).unwrap() <= 1e-9);
    }

    #[test]
    fn weakest_link_rules_are_scale_free(
        w in 1.0f64..1e6,
        p2 in 0.0f64..0.99,
        gap in 0.001f64..1.0,
        y1 in 0.0f64..=1.0,
        y2 in 0.0f64..=1.0,
        factor in 0.01f64..100.0,
    ) {
        let p1 = (p2 + gap).min(1.0);
        prop_assume!(p1 > p2);
        let params = WLParams::new(w, p1, p2, y1, y2).unwrap();
        let scaled = params.scaled(factor).unwrap();
        prop_assert_eq!(wl::decide_vote_paper(&params), wl::decide_vote_paper(&scaled));
        prop_assert_eq!(wl::decide_vote_full(&params), wl::decide_vote_full(&scaled));
        if wl::case_probs(&params).is_ok() {
            let d = wl::ev_vote_paper(Vote::Player1, &params).unwrap() - wl::ev_vote_paper(Vote::Player2, &params).unwrap();
            // Away from ties the conditional rule follows the sign of its own EVs.
            if d.abs() > 1e-12 * w {
                prop_assert_eq!(wl::decide_vote_paper(&params) == Vote::Player1, d > 0.0);
            }
        }
        let omitted = (1.0 - y1) * (1.0 - y2) * (p1 - p2) * w;
        let diff = wl::full_margin(&params) - wl::paper_margin_unnormalized(&params);
        prop_assert!((diff - omitted).abs() <= 1e-12 * w.max(1.0));
    }
}

#[test]
fn experiments_are_reproducible_and_bounded() {
    let config = ExperimentConfig {
        n_train: 2_000,
        k_values: vec![1, 10, 100, 2_000],
        n_test: 300,
        seed: 99,
        payoff_range: (-1.0, 1.0),
    };
    let a = run_experiment(&config).unwrap();
    let b = run_experiment(&config).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    for row in &a.rows {
        assert!((-1e-9..=2.0).contains(&row.avg_exploitability), "{row:?}");
        assert!(row.std_err >= 0.0);
    }
    assert_eq!(sample_zs_games(5, 3, (-1.0, 1.0)).unwrap(), sample_zs_games(5, 3, (-1.0, 1.0)).unwrap());
}

#[test]
fn kmeans_history_never_increases() {
    for seed in 0..10 {
        let pts: Vec<Vec<f64>> =
            sample_zs_games(500, seed, (-1.0, 1.0)).unwrap().into_iter().map(|g| g.to_vec()).collect();
        let km = kmeans_variant(&pts, 10, 100, seed).unwrap();
        assert!(km.wcss_history.windows(2).all(|w| w[1] <= w[0]), "{:?}", km.wcss_history);
        assert_eq!(km.means.len(), 10);
    }
}
