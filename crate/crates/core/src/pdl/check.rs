use super::{Assignment, Distribution, Pdl, PdlError};

/// Evaluates a set of decision lists (one per decision the family needs) at
/// an arbitrary parameter point.
pub type Policy<'a> = dyn FnMut(&Assignment) -> Result<Vec<Distribution>, PdlError> + 'a;

/// A parametrized game together with an objective.
pub trait ObjectiveFamily {
    /// `optimal − achieved` at `lambda` for the strategies `policy` produces.
    fn gap(&self, lambda: &Assignment, policy: &mut Policy<'_>) -> Result<f64, String>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct Implementability {
    pub depth: usize,
    pub width: usize,
    pub epsilon: f64,
    /// Grid point attaining `epsilon`.
    pub worst: Option<Assignment>,
}

/// Largest objective gap of the lists over `grid`, with their depth and
/// width. Several lists may be checked together when the objective needs a
/// strategy for more than one decision (both players of a bimatrix game, the
/// four decision points of a poker game); depth and width are then the
/// maxima over the lists.
pub fn check_implementability(
    pdls: &[Pdl],
    family: &dyn ObjectiveFamily,
    grid: &[Assignment],
) -> Result<Implementability, PdlError> {
    let mut policy = |at: &Assignment| -> Result<Vec<Distribution>, PdlError> {
        pdls.iter().map(|p| p.evaluate(at).map(|(d, _)| d)).collect()
    };
    let mut epsilon = f64::NEG_INFINITY;
    let mut worst = None;
    for lambda in grid {
        let gap = family
            .gap(lambda, &mut policy)
            .map_err(|message| PdlError::Objective { at: lambda.to_string(), message })?;
        if gap > epsilon {
            epsilon = gap;
            worst = Some(lambda.clone());
        }
    }
    Ok(Implementability {
        depth: pdls.iter().map(Pdl::depth).max().unwrap_or(0),
        width: pdls.iter().map(Pdl::width).max().unwrap_or(0),
        epsilon: if grid.is_empty() { 0.0 } else { epsilon },
        worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pdl::parse_pdl;

    /// Objective: probability of action `good` should be one.
    struct WantsGood;

    impl ObjectiveFamily for WantsGood {
        fn gap(&self, lambda: &Assignment, policy: &mut Policy<'_>) -> Result<f64, String> {
            if lambda.get("x").is_some_and(|x| x.is_nan()) {
                return Err("nan".into());
            }
            let d = policy(lambda).map_err(|e| e.to_string())?;
            Ok(1.0 - d[0].prob("good"))
        }
    }

    #[test]
    fn reports_worst_point() {
        let pdl = parse_pdl("params: x\nif x > 0.5 -> good\nelse -> {good: x, bad: rest}").unwrap();
        let grid: Vec<Assignment> = [0.0, 0.25, 1.0].iter().map(|&x| Assignment::from([("x", x)])).collect();
        let rep = check_implementability(&[pdl], &WantsGood, &grid).unwrap();
        assert_eq!((rep.depth, rep.width), (2, 1));
        assert_eq!(rep.epsilon, 1.0);
        assert_eq!(rep.worst, Some(Assignment::from([("x", 0.0)])));
    }

    #[test]
    fn surfaces_failing_point() {
        let pdl = parse_pdl("params: x\nelse -> good").unwrap();
        let grid = vec![Assignment::from([("x", f64::NAN)])];
        let err = check_implementability(&[pdl], &WantsGood, &grid).unwrap_err();
        assert!(matches!(err, PdlError::Objective { ref at, .. } if at == "x=NaN"));
    }
}
