use std::fmt::{self, Write as _};
use std::io::Read;
use std::net::SocketAddr;
use std::path::Path;

use pgames_core::cheatsheets::{self, TwoByTwoFamily};
use pgames_core::jeopardy::{self, JeopardyFamily, JeopardyParams};
use pgames_core::kuhn::{self, Exact, KuhnFamily, KuhnProfile, KuhnSpec, Prob, Scalar};
use pgames_core::numfmt::sig;
use pgames_core::pdl::{check_implementability, ObjectiveFamily};
use pgames_core::sampling::{run_experiment, ExperimentConfig};
use pgames_core::strategic::solve_2x2_branch;
use pgames_core::weakest_link::{self as wl, Vote, VoteModel, WLParams, WeakestLinkFamily};
use pgames_core::{
    expected_utility, max_regret, parse_pdl, Assignment, GameError, MixedStrategy, Pdl, PdlError, Player,
    TwoByTwoPayoffs,
};

use crate::args::*;

/// Why a command failed; decides the exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => f.write_str(m),
        }
    }
}

impl From<GameError> for Failure {
    fn from(e: GameError) -> Self {
        match e {
            GameError::OutOfRange { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

impl From<PdlError> for Failure {
    fn from(e: PdlError) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<fmt::Error> for Failure {
    fn from(e: fmt::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Out = Result<String, Failure>;

/// Runs a parsed command and returns what it prints on standard output.
pub fn execute(cli: Cli) -> Out {
    let p = cli.precision as usize;
    match cli.command {
        Command::Solve2x2(a) => solve2x2(&a, p),
        Command::Jeopardy(a) => jeopardy(&a, p),
        Command::Kuhn(a) => kuhn(&a, p),
        Command::WeakestLink(a) => weakest_link(&a, p),
        Command::Sample(a) => sample(&a),
        Command::Pdl { action } => pdl(action, p),
        Command::Verify => verify(p),
        Command::Serve(a) => serve(&a),
    }
}

fn mixed(names: [&str; 2], s: &MixedStrategy, p: usize) -> String {
    match s.probs() {
        [x, _] if *x == 1.0 => names[0].to_string(),
        [_, y] if *y == 1.0 => names[1].to_string(),
        probs => format!("{{{}: {}, {}: {}}}", names[0], sig(probs[0], p), names[1], sig(probs[1], p)),
    }
}

fn solve2x2(a: &Solve2x2Args, p: usize) -> Out {
    let payoffs = TwoByTwoPayoffs::from_array([a.a, a.b, a.c, a.d, a.e, a.f, a.g, a.h]);
    let (profile, branch) = solve_2x2_branch(&payoffs)?;
    let game = payoffs.game();
    let (u1, u2) = expected_utility(&game, &profile)?;
    let mut out = String::new();
    writeln!(out, "row: {}", mixed(["top", "bottom"], &profile.row, p))?;
    writeln!(out, "col: {}", mixed(["left", "right"], &profile.col, p))?;
    writeln!(out, "branch: {}", branch.label())?;
    writeln!(out, "row_payoff: {}", sig(u1, p))?;
    writeln!(out, "col_payoff: {}", sig(u2, p))?;
    writeln!(out, "max_regret: {}", sig(max_regret(&game, &profile)?, p))?;
    Ok(out)
}

fn jeopardy(a: &JeopardyArgs, p: usize) -> Out {
    let params = JeopardyParams::new(a.p1, a.p2)?;
    let player = if a.player == 1 { Player::Row } else { Player::Col };
    let (dist, branch) = jeopardy::advise(player, &params)?;
    let mut out = String::new();
    writeln!(out, "strategy: {dist:.p$}")?;
    writeln!(out, "branch: {branch}")?;
    writeln!(out, "case: {}", jeopardy::equilibrium_case(&params).label())?;
    writeln!(out, "row_value: {}", sig(jeopardy::row_value(&params)?, p))?;
    Ok(out)
}

fn tables<T>(m: &KuhnProfile<T>, mut cell: impl FnMut(&T) -> String) -> [(&'static str, String); 4] {
    let row = |v: &Vec<T>, cell: &mut dyn FnMut(&T) -> String| v.iter().map(cell).collect::<Vec<_>>().join(" ");
    [
        ("bet_first", row(&m.bet_first, &mut cell)),
        ("call_vs_bet", row(&m.call_vs_bet, &mut cell)),
        ("bet_vs_check", row(&m.bet_vs_check, &mut cell)),
        ("call_after_check_bet", row(&m.call_after_check_bet, &mut cell)),
    ]
}

fn kuhn(a: &KuhnArgs, p: usize) -> Out {
    let spec = KuhnSpec::new(a.n as usize)?;
    let profile = kuhn::pdl_strategy(&spec)?;
    let mut out = String::new();
    writeln!(out, "n: {}", spec.n())?;
    let rows =
        if a.exact { tables(&profile, Prob::to_string) } else { tables(&profile.to_scalar::<f64>(), |v| sig(*v, p)) };
    for (name, row) in rows {
        writeln!(out, "{name}: {row}")?;
    }
    if a.nashconv {
        let exact = profile.to_scalar::<Exact>();
        let nc = kuhn::nashconv(&spec, &exact)?;
        let ev = kuhn::expected_value(&spec, &exact)?;
        writeln!(out, "nashconv: {}", sig(Scalar::to_f64(&nc), p))?;
        writeln!(out, "nashconv_exact: {nc}")?;
        writeln!(out, "value: {}", sig(Scalar::to_f64(&ev), p))?;
        writeln!(out, "value_exact: {ev}")?;
    }
    if let Some(dir) = &a.export_pdl {
        std::fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
        for (name, list) in kuhn::export_pdls(&spec) {
            let path = dir.join(format!("{name}.pdl"));
            std::fs::write(&path, list.render()).map_err(|e| io_failure(&path, e))?;
            writeln!(out, "wrote: {}", path.display())?;
        }
    }
    Ok(out)
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Domain(format!("{}: {e}", path.display()))
}

fn weakest_link(a: &WeakestLinkArgs, p: usize) -> Out {
    let params = WLParams::new(a.w, a.p1, a.p2, a.y1, a.y2)?;
    let paper = wl::decide_vote_paper(&params);
    let full = wl::decide_vote_full(&params);
    let pair = |e1: f64, e2: f64| format!("player1={} player2={}", sig(e1, p), sig(e2, p));
    let mut out = String::new();
    writeln!(out, "paper_rule: {paper}")?;
    writeln!(out, "full_enumeration: {full}")?;
    writeln!(out, "agree: {}", paper == full)?;
    match wl::case_probs(&params) {
        Ok((c1, c2)) => {
            let e1 = wl::ev_vote_paper(Vote::Player1, &params)?;
            let e2 = wl::ev_vote_paper(Vote::Player2, &params)?;
            writeln!(out, "ev_paper: {}", pair(e1, e2))?;
            writeln!(out, "case_probs: {} {}", sig(c1, p), sig(c2, p))?;
        }
        Err(_) => {
            writeln!(out, "ev_paper: undefined")?;
            writeln!(out, "case_probs: undefined")?;
        }
    }
    let (f1, f2) = (wl::ev_vote_full(Vote::Player1, &params), wl::ev_vote_full(Vote::Player2, &params));
    writeln!(out, "ev_full: {}", pair(f1, f2))?;
    writeln!(out, "tie_ev: {}", sig(wl::tie_ev(&params), p))?;
    writeln!(out, "vote_irrelevant: {}", a.y1 == 1.0 && a.y2 == 1.0)?;
    Ok(out)
}

fn sample(a: &SampleArgs) -> Out {
    let mut config = match a.preset {
        Preset::Full => ExperimentConfig::full_scale(a.seed),
        Preset::Desk => ExperimentConfig::desk(a.seed),
    };
    if let Some(n) = a.n_train {
        config.n_train = n;
        config.k_values.retain(|&k| k <= n);
    }
    if let Some(k) = &a.k {
        config.k_values = k.clone();
    }
    if let Some(n) = a.n_test {
        config.n_test = n;
    }
    config.payoff_range = (a.low.unwrap_or(config.payoff_range.0), a.high.unwrap_or(config.payoff_range.1));
    config.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let csv = run_experiment(&config)?.to_csv();
    match &a.out {
        Some(path) => {
            std::fs::write(path, &csv).map_err(|e| io_failure(path, e))?;
            Ok(String::new())
        }
        None => Ok(csv),
    }
}

fn load(file: &str) -> Result<Pdl, Failure> {
    let text = if let Some(name) = file.strip_prefix('@') {
        cheatsheets::text(name)
            .ok_or_else(|| Failure::Usage(format!("no bundled cheat sheet named `{name}`")))?
            .to_string()
    } else if file == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Domain(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(file).map_err(|e| io_failure(Path::new(file), e))?
    };
    parse_pdl(&text).map_err(|e| Failure::Domain(format!("{file}: {e}")))
}

fn pdl(action: PdlCommand, p: usize) -> Out {
    let mut out = String::new();
    match action {
        PdlCommand::Eval { file, set } => {
            let list = load(&file)?;
            let at: Assignment = set.into_iter().collect();
            let (dist, matched) = list.evaluate(&at)?;
            writeln!(out, "strategy: {dist:.p$}")?;
            writeln!(out, "matched: {matched}")?;
        }
        PdlCommand::Check { files, family } => {
            let lists = files.iter().map(|f| load(f)).collect::<Result<Vec<_>, _>>()?;
            for (file, list) in files.iter().zip(&lists) {
                writeln!(
                    out,
                    "{file}: params [{}] depth {} width {}",
                    list.params().join(", "),
                    list.depth(),
                    list.width()
                )?;
            }
            if let Some(family) = family {
                let (objective, grid) = family_grid(family)?;
                let rep = check_implementability(&lists, objective.as_ref(), &grid)?;
                writeln!(out, "grid_points: {}", grid.len())?;
                writeln!(out, "depth: {}", rep.depth)?;
                writeln!(out, "width: {}", rep.width)?;
                writeln!(out, "epsilon: {}", sig(rep.epsilon, p))?;
                if let Some(worst) = rep.worst {
                    writeln!(out, "worst: {worst}")?;
                }
            }
        }
        PdlCommand::Render { file, set } => {
            let list = set.iter().fold(load(&file)?, |l, (name, v)| l.substitute(name, *v));
            out = list.render();
            if !out.ends_with('\n') {
                out.push('\n');
            }
        }
    }
    Ok(out)
}

fn family_grid(family: Family) -> Result<(Box<dyn ObjectiveFamily>, Vec<Assignment>), Failure> {
    Ok(match family {
        Family::TwoByTwo => (Box::new(TwoByTwoFamily), two_by_two_lattice()),
        Family::Jeopardy => {
            (Box::new(JeopardyFamily), jeopardy::grid_21().iter().map(JeopardyParams::assignment).collect())
        }
        Family::WeakestLink | Family::WeakestLinkFull => {
            let model = if matches!(family, Family::WeakestLink) { VoteModel::Conditional } else { VoteModel::Full };
            (Box::new(WeakestLinkFamily(model)), wl::grid(0.05)?.iter().map(WLParams::assignment).collect())
        }
        Family::Kuhn => (Box::new(KuhnFamily), (3..=50).map(|n| Assignment::from([("n", n as f64)])).collect()),
    })
}

/// Every game with payoffs in {-1, 0, 1}, keyed a..h.
fn two_by_two_lattice() -> Vec<Assignment> {
    const KEYS: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];
    (0..3usize.pow(8))
        .map(|mut i| {
            KEYS.iter()
                .map(|k| {
                    let v = (i % 3) as f64 - 1.0;
                    i /= 3;
                    (k.to_string(), v)
                })
                .collect()
        })
        .collect()
}

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn verify(p: usize) -> Out {
    let checks = [
        solver_certificate(p)?,
        lists_certificate(
            "2x2 cheat sheets",
            &[cheatsheets::TWO_BY_TWO_ROW, cheatsheets::TWO_BY_TWO_COL],
            Family::TwoByTwo,
            1e-9,
            p,
        )?,
        jeopardy_certificate(p)?,
        lists_certificate(
            "jeopardy cheat sheets",
            &[cheatsheets::JEOPARDY_P1, cheatsheets::JEOPARDY_P2],
            Family::Jeopardy,
            1e-9,
            p,
        )?,
        lists_certificate("weakest link cheat sheet", &[cheatsheets::WEAKEST_LINK], Family::WeakestLink, 1e-12, p)?,
        weakest_link_agreement(p)?,
        kuhn_family()?,
        kuhn_lists()?,
    ];
    let mut out = String::new();
    for c in &checks {
        writeln!(out, "{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail)?;
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    if failed > 0 {
        print!("{out}");
        return Err(Failure::Domain(format!("{failed} certificate(s) failed")));
    }
    Ok(out)
}

fn solver_certificate(p: usize) -> Result<Check, Failure> {
    let mut worst = 0.0f64;
    let grid = two_by_two_lattice();
    for at in &grid {
        let v: Vec<f64> = at.iter().map(|(_, v)| v).collect();
        let payoffs = TwoByTwoPayoffs::from_array(v.try_into().expect("eight payoffs"));
        let (profile, _) = solve_2x2_branch(&payoffs)?;
        worst = worst.max(max_regret(&payoffs.game(), &profile)?);
    }
    Ok(Check {
        name: "2x2 solver",
        pass: worst <= 1e-9,
        detail: format!("{} lattice games, max regret {} (<= 1e-9)", grid.len(), sig(worst, p)),
    })
}

fn lists_certificate(name: &'static str, texts: &[&str], family: Family, tol: f64, p: usize) -> Result<Check, Failure> {
    let lists = texts.iter().map(|t| parse_pdl(t)).collect::<Result<Vec<_>, _>>()?;
    let (objective, grid) = family_grid(family)?;
    let rep = check_implementability(&lists, objective.as_ref(), &grid)?;
    Ok(Check {
        name,
        pass: rep.epsilon <= tol,
        detail: format!(
            "{} grid points, depth {} width {}, epsilon {} (<= {tol:e})",
            grid.len(),
            rep.depth,
            rep.width,
            sig(rep.epsilon, p),
        ),
    })
}

fn jeopardy_certificate(p: usize) -> Result<Check, Failure> {
    let grid = jeopardy::grid_21();
    let mut worst = 0.0f64;
    for params in &grid {
        worst = worst.max(jeopardy::verify_equilibrium(params)?);
    }
    Ok(Check {
        name: "jeopardy advice",
        pass: worst <= 1e-9,
        detail: format!("{} grid points, max regret {} (<= 1e-9)", grid.len(), sig(worst, p)),
    })
}

fn weakest_link_agreement(p: usize) -> Result<Check, Failure> {
    let rep = wl::agreement_report(0.05)?;
    let scale_changes = wl::grid(0.05)?
        .iter()
        .filter(|c| {
            let s = c.scaled(7.3).expect("positive factor");
            wl::decide_vote_paper(c) != wl::decide_vote_paper(&s) || wl::decide_vote_full(c) != wl::decide_vote_full(&s)
        })
        .count();
    Ok(Check {
        name: "weakest link rules",
        pass: scale_changes == 0,
        detail: format!(
            "{} cells, {} decision changes when the bank is scaled; rules agree on {}/{} ({})",
            rep.cells,
            scale_changes,
            rep.agreeing,
            rep.cells,
            sig(rep.fraction(), p)
        ),
    })
}

fn kuhn_family() -> Result<Check, Failure> {
    let spec = KuhnSpec::new(3)?;
    let mut bad = Vec::new();
    for alpha in [Prob::new(0, 1), Prob::new(1, 4), Prob::new(1, 2), Prob::new(3, 4), Prob::new(1, 1)] {
        let prof = kuhn::alpha_equilibrium(alpha)?.to_scalar::<Exact>();
        let nc = kuhn::nashconv(&spec, &prof)?;
        let ev = kuhn::expected_value(&spec, &prof)?;
        if nc != Exact::new(0, 1) || ev != Exact::new(-1, 18) {
            bad.push(format!("alpha {alpha}: nashconv {nc}, value {ev}"));
        }
    }
    Ok(Check {
        name: "kuhn three-card equilibria",
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            "alpha in {0, 1/4, 1/2, 3/4, 1}: nashconv 0, value -1/18, exact".to_string()
        } else {
            bad.join("; ")
        },
    })
}

fn kuhn_lists() -> Result<Check, Failure> {
    let general = kuhn::general_pdls();
    let mut bad = Vec::new();
    for n in 3..=50 {
        let spec = KuhnSpec::new(n)?;
        let want = kuhn::pdl_strategy(&spec)?.to_scalar::<f64>();
        let got = kuhn::profile_from_pdls(&spec, &general)?;
        let gap = [
            (&got.bet_first, &want.bet_first),
            (&got.call_vs_bet, &want.call_vs_bet),
            (&got.bet_vs_check, &want.bet_vs_check),
            (&got.call_after_check_bet, &want.call_after_check_bet),
        ]
        .iter()
        .flat_map(|(g, w)| g.iter().zip(w.iter()).map(|(x, y)| (x - y).abs()))
        .fold(0.0f64, f64::max);
        if gap > 1e-12 {
            bad.push(n);
        }
    }
    Ok(Check {
        name: "kuhn cheat sheets",
        pass: bad.is_empty(),
        detail: format!("lists reproduce the threshold tables within 1e-12 for n = 3..50 ({} mismatches)", bad.len()),
    })
}

fn serve(a: &ServeArgs) -> Out {
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Domain(e.to_string()))?;
    runtime
        .block_on(pgames_service::serve(SocketAddr::new(a.bind, a.port)))
        .map_err(|e| Failure::Domain(format!("serve: {e}")))?;
    Ok(String::new())
}
