//! Decision lists that reproduce nearest-sample lookup.

use super::expr::{CmpOp, Comparison, Expr};
use super::{ParamStrategy, Pdl, PdlError, Rule};

/// Parameter names `l1, l2, …` used by [`build_nn_pdl`].
pub fn nn_param_names(dim: usize) -> Vec<String> {
    (1..=dim).map(|k| format!("l{k}")).collect()
}

/// `Σ_k (l_k − c_k)²` summed left to right, the same order
/// [`crate::sampling::squared_distance`] uses.
pub fn squared_distance_expr(center: &[f64], names: &[String]) -> Expr {
    let mut terms = center.iter().zip(names).map(|(c, n)| {
        let d = Expr::param(n.clone()).sub(Expr::num(*c));
        d.clone().mul(d)
    });
    let first = terms.next().expect("at least one dimension");
    terms.fold(first, Expr::add)
}

/// Builds the list "play `s_j` if sample `j` is at least as close as every
/// other sample", one rule per sample except the last, which becomes the
/// default.
///
/// Rule `j` holds `dist_i − dist_j ≥ 0` for every `i ≠ j`. Because rules are
/// tried in order, equidistant samples resolve to the lowest index. Squared
/// Euclidean distance gives the same ordering as the Euclidean norm and keeps
/// the conditions inside the expression language.
pub fn build_nn_pdl(samples: &[Vec<f64>], strategies: &[ParamStrategy]) -> Result<Pdl, PdlError> {
    if samples.is_empty() {
        return Err(PdlError::Invalid("need at least one sample".into()));
    }
    if samples.len() != strategies.len() {
        return Err(PdlError::Invalid(format!("{} samples but {} strategies", samples.len(), strategies.len())));
    }
    let dim = samples[0].len();
    if dim == 0 || samples.iter().any(|s| s.len() != dim) {
        return Err(PdlError::Invalid("samples must share a positive dimension".into()));
    }
    if samples.iter().flatten().any(|v| !v.is_finite()) {
        return Err(PdlError::Invalid("sample coordinates must be finite".into()));
    }
    let names = nn_param_names(dim);
    let dists: Vec<Expr> = samples.iter().map(|s| squared_distance_expr(s, &names)).collect();
    let t = samples.len();
    let rules = (0..t - 1)
        .map(|j| Rule {
            conditions: (0..t)
                .filter(|&i| i != j)
                .map(|i| Comparison::new(dists[i].clone(), CmpOp::Ge, dists[j].clone()))
                .collect(),
            strategy: strategies[j].clone(),
        })
        .collect();
    Pdl::new(names, rules, strategies[t - 1].clone())
}
