//! Helpers shared by the integration tests.

#![allow(dead_code)]

use pgames_core::pdl::{BinOp, CmpOp, Comparison, Expr, Func, Rule, Weight};
use pgames_core::strategic::{exploitability_zs, nemesis_payoff_zs, zero_sum_value_2x2};
use pgames_core::{
    expected_utility, solve_2x2, Assignment, MixedStrategy, ParamStrategy, Pdl, Player, StrategyProfile,
    TwoByTwoPayoffs,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const NAMES: [&str; 4] = ["x", "y", "z", "w"];
const CMPS: [CmpOp; 6] = [CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge, CmpOp::Eq, CmpOp::Ne];

fn literal(r: &mut ChaCha8Rng) -> f64 {
    match r.random_range(0..4) {
        0 => r.random_range(-3i32..=3) as f64,
        1 => r.random_range(-4i32..=4) as f64 / 4.0,
        2 => r.random_range(-2.0..2.0),
        _ => r.random_range(-1e3..1e3) * 10f64.powi(r.random_range(-8..4)),
    }
}

pub fn random_expr(r: &mut ChaCha8Rng, params: &[String], depth: u32) -> Expr {
    if depth == 0 || r.random_bool(0.3) {
        return if r.random_bool(0.6) {
            Expr::param(params[r.random_range(0..params.len())].clone())
        } else {
            Expr::num(literal(r))
        };
    }
    match r.random_range(0..8) {
        0 => Expr::Neg(Box::new(random_expr(r, params, depth - 1))),
        1 => {
            let f = [Func::Abs, Func::Floor, Func::Ceil][r.random_range(0..3)];
            Expr::call(f, random_expr(r, params, depth - 1))
        }
        k => {
            let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div][k as usize % 4];
            Expr::bin(op, random_expr(r, params, depth - 1), random_expr(r, params, depth - 1))
        }
    }
}

/// `|e| / (m + m|e|)`, always inside `[0, 1/m)` when `e` is finite.
fn squashed(e: Expr, m: f64) -> Expr {
    let a = Expr::call(Func::Abs, e);
    a.clone().div(Expr::num(m).add(Expr::num(m).mul(a)))
}

fn random_strategy(r: &mut ChaCha8Rng, params: &[String]) -> ParamStrategy {
    let n = r.random_range(1..=3usize);
    if n == 1 {
        return ParamStrategy::pure(format!("act{}", r.random_range(0..5)));
    }
    let mut entries: Vec<(String, Weight)> =
        (0..n - 1).map(|i| (format!("a{i}"), Weight::Expr(squashed(random_expr(r, params, 2), n as f64)))).collect();
    let rest_at = r.random_range(0..n);
    entries.insert(rest_at, (format!("a{}", n - 1), Weight::Rest));
    ParamStrategy::mixed(entries).expect("distinct labels")
}

pub fn random_pdl(r: &mut ChaCha8Rng) -> Pdl {
    let np = r.random_range(1..=NAMES.len());
    let params: Vec<String> = NAMES[..np].iter().map(|s| s.to_string()).collect();
    let rules = (0..r.random_range(0..6))
        .map(|_| Rule {
            conditions: (0..r.random_range(1..=3))
                .map(|_| {
                    Comparison::new(
                        random_expr(r, &params, 3),
                        CMPS[r.random_range(0..CMPS.len())],
                        random_expr(r, &params, 2),
                    )
                })
                .collect(),
            strategy: random_strategy(r, &params),
        })
        .collect();
    let default = random_strategy(r, &params);
    Pdl::new(params, rules, default).expect("generated list is valid")
}

/// Assignments mixing integers, quarter steps and uniform reals so that
/// equality and floor/ceil boundaries are actually exercised.
pub fn random_assignment(r: &mut ChaCha8Rng, params: &[String]) -> Assignment {
    params
        .iter()
        .map(|p| {
            let v = match r.random_range(0..3) {
                0 => r.random_range(-3i32..=3) as f64,
                1 => r.random_range(-8i32..=8) as f64 / 4.0,
                _ => r.random_range(-3.0..3.0),
            };
            (p.clone(), v)
        })
        .collect()
}

/// Checks that `a` and `b` pick the same rule and the same distribution
/// (within `tol`) at `at`, or both fail.
pub fn agree_at(a: &Pdl, b: &Pdl, at: &Assignment, tol: f64) -> Result<(), String> {
    match (a.evaluate(at), b.evaluate(at)) {
        (Ok((da, ma)), Ok((db, mb))) => {
            if ma != mb {
                return Err(format!("at {at}: {ma} vs {mb}"));
            }
            if da.entries().len() != db.entries().len() {
                return Err(format!("at {at}: {da} vs {db}"));
            }
            for ((xa, pa), (xb, pb)) in da.entries().iter().zip(db.entries()) {
                if xa != xb || (pa - pb).abs() > tol {
                    return Err(format!("at {at}: {da} vs {db}"));
                }
            }
            Ok(())
        }
        (Err(_), Err(_)) => Ok(()),
        (x, y) => Err(format!("at {at}: {x:?} vs {y:?}")),
    }
}

/// How far each continuity bound is exceeded for one random pair of games
/// whose entries differ by at most `eps`; every entry should be `≤ 0`.
///
/// Order: payoff continuity (general-sum, random profile), nemesis
/// continuity, value continuity, equilibrium transfer.
pub fn perturbation_excess(r: &mut ChaCha8Rng, eps: f64) -> [f64; 4] {
    let g1: [f64; 8] = std::array::from_fn(|_| r.random_range(-1.0..=1.0));
    let g2: [f64; 8] = std::array::from_fn(|i| g1[i] + r.random_range(-eps..=eps));
    let (p, q) = (r.random_range(0.0..=1.0), r.random_range(0.0..=1.0));
    let profile = StrategyProfile::new(MixedStrategy::binary(p).unwrap(), MixedStrategy::binary(q).unwrap());
    let u1 = expected_utility(&TwoByTwoPayoffs::from_array(g1).game(), &profile).unwrap();
    let u2 = expected_utility(&TwoByTwoPayoffs::from_array(g2).game(), &profile).unwrap();
    let payoff = (u1.0 - u2.0).abs().max((u1.1 - u2.1).abs()) - (eps + 1e-12);

    // Zero-sum pair built from the row payoffs.
    let [a, c, e, g] = [g1[0], g1[2], g1[4], g1[6]];
    let [a2, c2, e2, g2_] = [g2[0], g2[2], g2[4], g2[6]];
    let s = MixedStrategy::binary(r.random_range(0.0..=1.0)).unwrap();
    let n1 = nemesis_payoff_zs(a, c, e, g, Player::Row, &s).unwrap();
    let n2 = nemesis_payoff_zs(a2, c2, e2, g2_, Player::Row, &s).unwrap();
    let nemesis = (n1 - n2).abs() - (eps + 1e-12);

    let v1 = zero_sum_value_2x2(a, c, e, g).unwrap();
    let v2 = zero_sum_value_2x2(a2, c2, e2, g2_).unwrap();
    let value = (v1 - v2).abs() - (eps + 1e-12);

    let eq = solve_2x2(&TwoByTwoPayoffs::zero_sum(a, c, e, g)).unwrap();
    let x_row = exploitability_zs(a2, c2, e2, g2_, Player::Row, &eq.row).unwrap();
    let x_col = exploitability_zs(a2, c2, e2, g2_, Player::Col, &eq.col).unwrap();
    let transfer = x_row.max(x_col) - (2.0 * eps + 1e-9);

    [payoff, nemesis, value, transfer]
}

/// A value in `(0, 0.2]`.
pub fn random_eps(r: &mut ChaCha8Rng) -> f64 {
    0.2 - r.random_range(0.0..0.2)
}

/// NashConv of the threshold strategy and A's value under it, as
/// `(n, nashconv numerator, denominator, value numerator, denominator)`.
/// Produced by tools/kuhn_oracle.py before the Rust evaluator existed.
pub const KUHN_PINS: [(usize, i128, i128, i128, i128); 48] = [
    (3, 25, 54, 1, 18),
    (4, 1, 3, 1, 24),
    (5, 49, 180, -1, 45),
    (6, 26, 135, -23, 540),
    (7, 1, 6, -1, 14),
    (8, 5, 36, -1, 16),
    (9, 85, 648, -7, 108),
    (10, 1, 9, -11, 180),
    (11, 103, 990, -7, 110),
    (12, 53, 594, -49, 792),
    (13, 1, 12, -5, 78),
    (14, 62, 819, -67, 1092),
    (15, 139, 1890, -13, 210),
    (16, 1, 15, -29, 480),
    (17, 157, 2448, -25, 408),
    (18, 80, 1377, -37, 612),
    (19, 1, 18, -7, 114),
    (20, 89, 1710, -137, 2280),
    (21, 193, 3780, -19, 315),
    (22, 1, 21, -5, 84),
    (23, 211, 4554, -91, 1518),
    (24, 107, 2484, -197, 3312),
    (25, 1, 24, -3, 50),
    (26, 116, 2925, -77, 1300),
    (27, 19, 486, -125, 2106),
    (28, 1, 27, -89, 1512),
    (29, 265, 7308, -12, 203),
    (30, 134, 3915, -307, 5220),
    (31, 1, 30, -11, 186),
    (32, 143, 4464, -349, 5952),
    (33, 301, 9504, -31, 528),
    (34, 1, 33, -131, 2244),
    (35, 319, 10710, -209, 3570),
    (36, 23, 810, -7, 120),
    (37, 1, 36, -13, 222),
    (38, 170, 6327, -491, 8436),
    (39, 355, 13338, -259, 4446),
    (40, 1, 39, -181, 3120),
    (41, 373, 14760, -143, 2460),
    (42, 188, 7749, -599, 10332),
    (43, 1, 42, -5, 86),
    (44, 197, 8514, -219, 3784),
    (45, 409, 17820, -86, 1485),
    (46, 1, 45, -239, 4140),
    (47, 427, 19458, -125, 2162),
    (48, 215, 10152, -781, 13536),
    (49, 1, 48, -17, 294),
    (50, 32, 1575, -121, 2100),
];
