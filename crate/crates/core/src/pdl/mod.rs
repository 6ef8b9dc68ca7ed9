//! Parametric decision lists.
//!
//! A list is an ordered sequence of rules. Each rule is a conjunction of
//! comparisons over the parameters together with a (possibly
//! parameter-dependent) mixed strategy; the first rule whose conditions all
//! hold decides, and the default strategy applies when none does.
//!
//! Lists round-trip through a small text format ("cheat sheets"):
//!
//! ```text
//! params: p1, p2
//!   if p2 == 0 -> wager0
//!   else -> {wager1: 0.4, wager2: rest}
//! ```

mod check;
mod expr;
mod nn;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use check::{check_implementability, Implementability, ObjectiveFamily, Policy};
pub use expr::{BinOp, CmpOp, Comparison, Expr, Func};
pub use nn::{build_nn_pdl, nn_param_names, squared_distance_expr};
pub use parse::parse_pdl;

/// Tolerance on the distribution produced by a strategy's weights.
pub const WEIGHT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PdlError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("undeclared parameter `{name}` at {line}:{col}")]
    UndeclaredParam { name: String, line: usize, col: usize },
    #[error("duplicate action `{action}` at {line}:{col}")]
    DuplicateAction { action: String, line: usize, col: usize },
    #[error("more than one `rest` weight at {line}:{col}")]
    MultipleRest { line: usize, col: usize },
    #[error("invalid decision list: {0}")]
    Invalid(String),
    #[error("missing value for parameter `{0}`")]
    MissingParam(String),
    #[error("division by zero in `{0}`")]
    DivisionByZero(String),
    #[error("non-finite value in `{0}`")]
    NonFinite(String),
    #[error("weights do not form a distribution: {0}")]
    BadDistribution(String),
    #[error("objective evaluation failed at {at}: {message}")]
    Objective { at: String, message: String },
}

impl PdlError {
    /// `(line, col)` for errors that carry a source position.
    pub fn position(&self) -> Option<(usize, usize)> {
        match self {
            PdlError::Syntax { line, col, .. }
            | PdlError::UndeclaredParam { line, col, .. }
            | PdlError::DuplicateAction { line, col, .. }
            | PdlError::MultipleRest { line, col } => Some((*line, *col)),
            _ => None,
        }
    }
}

/// Values for named parameters.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Assignment(BTreeMap<String, f64>);

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.get(name).copied()
    }

    pub fn set(&mut self, name: impl Into<String>, value: f64) -> &mut Self {
        self.0.insert(name.into(), value);
        self
    }

    pub fn with(mut self, name: impl Into<String>, value: f64) -> Self {
        self.set(name, value);
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl<S: Into<String>> FromIterator<(S, f64)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (S, f64)>>(iter: I) -> Self {
        Assignment(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

impl<const N: usize> From<[(&str, f64); N]> for Assignment {
    fn from(pairs: [(&str, f64); N]) -> Self {
        pairs.into_iter().collect()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, v) in &self.0 {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Weight {
    Expr(Expr),
    /// One minus the sum of the strategy's other weights.
    Rest,
}

/// Mixed strategy whose weights may depend on the parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamStrategy {
    entries: Vec<(String, Weight)>,
}

impl ParamStrategy {
    /// Plays `action` with probability one.
    pub fn pure(action: impl Into<String>) -> Self {
        ParamStrategy { entries: vec![(action.into(), Weight::Expr(Expr::Num(1.0)))] }
    }

    pub fn mixed(entries: Vec<(String, Weight)>) -> Result<Self, PdlError> {
        if entries.is_empty() {
            return Err(PdlError::Invalid("strategy with no actions".into()));
        }
        for (i, (a, _)) in entries.iter().enumerate() {
            if entries[..i].iter().any(|(b, _)| a == b) {
                return Err(PdlError::Invalid(format!("duplicate action `{a}`")));
            }
        }
        if entries.iter().filter(|(_, w)| matches!(w, Weight::Rest)).count() > 1 {
            return Err(PdlError::Invalid("more than one `rest` weight".into()));
        }
        Ok(ParamStrategy { entries })
    }

    pub fn entries(&self) -> &[(String, Weight)] {
        &self.entries
    }

    fn is_pure(&self) -> bool {
        matches!(self.entries.as_slice(), [(_, Weight::Expr(Expr::Num(v)))] if *v == 1.0)
    }

    /// Evaluates the weights at `at`.
    pub fn evaluate(&self, at: &Assignment) -> Result<Distribution, PdlError> {
        let mut probs = Vec::with_capacity(self.entries.len());
        let mut rest_at = None;
        let mut total = 0.0;
        for (i, (action, w)) in self.entries.iter().enumerate() {
            match w {
                Weight::Expr(e) => {
                    let v = e.eval(at)?;
                    total += v;
                    probs.push((action.clone(), v));
                }
                Weight::Rest => {
                    rest_at = Some(i);
                    probs.push((action.clone(), 0.0));
                }
            }
        }
        if let Some(i) = rest_at {
            probs[i].1 = 1.0 - total;
            total = 1.0;
        }
        let bad = probs.iter().find(|(_, p)| !(-WEIGHT_TOL..=1.0 + WEIGHT_TOL).contains(p));
        if let Some((a, p)) = bad {
            return Err(PdlError::BadDistribution(format!("weight of `{a}` is {p}")));
        }
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(PdlError::BadDistribution(format!("weights sum to {total}")));
        }
        Ok(Distribution(probs))
    }

    fn params(&self) -> Vec<&str> {
        let mut out = Vec::new();
        for (_, w) in &self.entries {
            if let Weight::Expr(e) = w {
                for p in e.params() {
                    if !out.contains(&p) {
                        out.push(p);
                    }
                }
            }
        }
        out
    }

    fn substitute(&self, name: &str, value: f64) -> ParamStrategy {
        let entries = self
            .entries
            .iter()
            .map(|(a, w)| {
                let w = match w {
                    Weight::Expr(e) => Weight::Expr(e.substitute(name, value)),
                    Weight::Rest => Weight::Rest,
                };
                (a.clone(), w)
            })
            .collect();
        ParamStrategy { entries }
    }

    fn render(&self) -> String {
        if self.is_pure() {
            return self.entries[0].0.clone();
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(a, w)| match w {
                Weight::Expr(e) => format!("{a}: {}", e.render()),
                Weight::Rest => format!("{a}: rest"),
            })
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// A concrete distribution over action labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution(Vec<(String, f64)>);

impl Distribution {
    pub fn entries(&self) -> &[(String, f64)] {
        &self.0
    }

    /// Probability of `action`; zero for actions the strategy never names.
    pub fn prob(&self, action: &str) -> f64 {
        self.0.iter().find(|(a, _)| a == action).map_or(0.0, |(_, p)| *p)
    }

    /// Probabilities laid out over `actions`; fails if the distribution
    /// names an action outside that set.
    pub fn over(&self, actions: &[&str]) -> Result<Vec<f64>, PdlError> {
        if let Some((a, _)) = self.0.iter().find(|(a, _)| !actions.contains(&a.as_str())) {
            return Err(PdlError::BadDistribution(format!("unknown action `{a}`")));
        }
        Ok(actions.iter().map(|a| self.prob(a)).collect())
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let [(a, p)] = self.0.as_slice() {
            if *p == 1.0 {
                return f.write_str(a);
            }
        }
        f.write_str("{")?;
        for (i, (a, p)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}: {}", crate::numfmt::sig(*p, f.precision().unwrap_or(6)))?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub conditions: Vec<Comparison>,
    pub strategy: ParamStrategy,
}

/// Which rule of a list decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Matched {
    /// 1-based rule number.
    Rule(usize),
    Default,
}

impl fmt::Display for Matched {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Matched::Rule(i) => write!(f, "rule {i}"),
            Matched::Default => f.write_str("default"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pdl {
    params: Vec<String>,
    rules: Vec<Rule>,
    default: ParamStrategy,
}

impl Pdl {
    /// Validates and assembles a list. Every rule needs at least one
    /// condition and every referenced parameter must be declared.
    pub fn new(params: Vec<String>, rules: Vec<Rule>, default: ParamStrategy) -> Result<Self, PdlError> {
        for (i, p) in params.iter().enumerate() {
            if params[..i].contains(p) {
                return Err(PdlError::Invalid(format!("parameter `{p}` declared twice")));
            }
        }
        let declared = |name: &str| params.iter().any(|p| p == name);
        for (i, rule) in rules.iter().enumerate() {
            if rule.conditions.is_empty() {
                return Err(PdlError::Invalid(format!("rule {} has no conditions", i + 1)));
            }
            for c in &rule.conditions {
                for name in c.lhs.params().into_iter().chain(c.rhs.params()) {
                    if !declared(name) {
                        return Err(PdlError::Invalid(format!("undeclared parameter `{name}`")));
                    }
                }
            }
        }
        for s in rules.iter().map(|r| &r.strategy).chain(std::iter::once(&default)) {
            if let Some(name) = s.params().into_iter().find(|n| !declared(n)) {
                return Err(PdlError::Invalid(format!("undeclared parameter `{name}`")));
            }
        }
        Ok(Pdl { params, rules, default })
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn default_strategy(&self) -> &ParamStrategy {
        &self.default
    }

    /// Number of strategies: one per rule plus the default.
    pub fn depth(&self) -> usize {
        self.rules.len() + 1
    }

    /// Largest number of conditions in any rule; the default counts as 0.
    pub fn width(&self) -> usize {
        self.rules.iter().map(|r| r.conditions.len()).max().unwrap_or(0)
    }

    /// Returns the strategy of the first rule whose conditions all hold.
    pub fn evaluate(&self, at: &Assignment) -> Result<(Distribution, Matched), PdlError> {
        if let Some(missing) = self.params.iter().find(|p| at.get(p).is_none()) {
            return Err(PdlError::MissingParam(missing.clone()));
        }
        for (i, rule) in self.rules.iter().enumerate() {
            let mut all = true;
            for c in &rule.conditions {
                if !c.holds(at)? {
                    all = false;
                    break;
                }
            }
            if all {
                return Ok((rule.strategy.evaluate(at)?, Matched::Rule(i + 1)));
            }
        }
        Ok((self.default.evaluate(at)?, Matched::Default))
    }

    /// Fixes parameter `name` to `value`, removing it from the parameter list.
    pub fn substitute(&self, name: &str, value: f64) -> Pdl {
        Pdl {
            params: self.params.iter().filter(|p| *p != name).cloned().collect(),
            rules: self
                .rules
                .iter()
                .map(|r| Rule {
                    conditions: r.conditions.iter().map(|c| c.substitute(name, value)).collect(),
                    strategy: r.strategy.substitute(name, value),
                })
                .collect(),
            default: self.default.substitute(name, value),
        }
    }

    /// Canonical cheat-sheet text.
    pub fn render(&self) -> String {
        let mut out = format!("params: {}\n", self.params.join(", "));
        for rule in &self.rules {
            let conds: Vec<String> = rule.conditions.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!("  if {} -> {}\n", conds.join(" and "), rule.strategy.render()));
        }
        out.push_str(&format!("  else -> {}\n", self.default.render()));
        out
    }
}

impl fmt::Display for Pdl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn render_pdl(pdl: &Pdl) -> String {
    pdl.render()
}

pub fn evaluate_pdl(pdl: &Pdl, at: &Assignment) -> Result<(Distribution, Matched), PdlError> {
    pdl.evaluate(at)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE_RULE: &str = "params: l1\nif l1 >= 0 -> A\nelse -> B\n";

    #[test]
    fn weak_inequality_boundary_matches_first_rule() {
        let pdl = parse_pdl(ONE_RULE).unwrap();
        let (d, m) = pdl.evaluate(&Assignment::from([("l1", 0.0)])).unwrap();
        assert_eq!(d.to_string(), "A");
        assert_eq!(m, Matched::Rule(1));
        let (d, m) = pdl.evaluate(&Assignment::from([("l1", -0.5)])).unwrap();
        assert_eq!(d.to_string(), "B");
        assert_eq!(m, Matched::Default);
    }

    #[test]
    fn depth_and_width() {
        let pdl = parse_pdl("params: p1,p2\nif p2 == 0 -> wager0\nelse -> {wager1: 0.4, wager2: rest}").unwrap();
        assert_eq!((pdl.depth(), pdl.width()), (2, 1));
        let only_default = parse_pdl("params: x\nelse -> a").unwrap();
        assert_eq!((only_default.depth(), only_default.width()), (1, 0));
    }

    #[test]
    fn rest_weight_fills_remaining_mass() {
        let pdl = parse_pdl("params: p\nelse -> {a: p / 2, b: rest}").unwrap();
        let (d, _) = pdl.evaluate(&Assignment::from([("p", 0.5)])).unwrap();
        assert_eq!(d.prob("a"), 0.25);
        assert_eq!(d.prob("b"), 0.75);
    }

    #[test]
    fn invalid_weights_are_reported() {
        let pdl = parse_pdl("params: p\nelse -> {a: p, b: rest}").unwrap();
        let err = pdl.evaluate(&Assignment::from([("p", 1.5)])).unwrap_err();
        assert!(matches!(err, PdlError::BadDistribution(_)));
        let pdl = parse_pdl("params: p\nelse -> {a: p, b: 0.2}").unwrap();
        assert!(matches!(pdl.evaluate(&Assignment::from([("p", 0.5)])), Err(PdlError::BadDistribution(_))));
    }

    #[test]
    fn missing_parameter_is_reported() {
        let pdl = parse_pdl(ONE_RULE).unwrap();
        assert_eq!(pdl.evaluate(&Assignment::new()), Err(PdlError::MissingParam("l1".into())));
    }

    #[test]
    fn division_by_zero_in_condition() {
        let pdl = parse_pdl("params: x\nif 1 / x > 0 -> a\nelse -> b").unwrap();
        assert!(matches!(pdl.evaluate(&Assignment::from([("x", 0.0)])), Err(PdlError::DivisionByZero(_))));
    }

    #[test]
    fn later_rules_do_not_affect_earlier_matches() {
        let a = parse_pdl("params: x\nif x > 0 -> a\nif x > 1 -> b\nif x > 2 -> c\nelse -> d").unwrap();
        let b = parse_pdl("params: x\nif x > 0 -> a\nif x > 2 -> c\nif x > 1 -> b\nelse -> d").unwrap();
        for x in [0.5, 1.5, 2.5, 3.0] {
            let at = Assignment::from([("x", x)]);
            assert_eq!(a.evaluate(&at).unwrap(), b.evaluate(&at).unwrap());
        }
    }

    #[test]
    fn constructor_validation() {
        let bad = Pdl::new(
            vec!["x".into()],
            vec![Rule { conditions: vec![], strategy: ParamStrategy::pure("a") }],
            ParamStrategy::pure("b"),
        );
        assert!(bad.is_err());
        let undeclared = Pdl::new(
            vec!["x".into()],
            vec![],
            ParamStrategy::mixed(vec![("a".into(), Weight::Expr(Expr::param("y"))), ("b".into(), Weight::Rest)])
                .unwrap(),
        );
        assert!(undeclared.is_err());
        assert!(ParamStrategy::mixed(vec![("a".into(), Weight::Rest), ("b".into(), Weight::Rest)]).is_err());
    }

    #[test]
    fn distribution_display_uses_six_digits() {
        let pdl = parse_pdl("params: p\nelse -> {a: 1 / 3, b: rest}").unwrap();
        let (d, _) = pdl.evaluate(&Assignment::from([("p", 0.0)])).unwrap();
        assert_eq!(d.to_string(), "{a: 0.333333, b: 0.666667}");
    }
}
