use rand::seq::index;

use super::{squared_distance, stream_rng, INIT_STREAM};
use crate::error::GameError;

#[derive(Debug, Clone, PartialEq)]
pub struct KMeans {
    pub means: Vec<Vec<f64>>,
    pub assignments: Vec<usize>,
    /// Within-cluster sum of squares after the initial assignment and after
    /// every completed iteration.
    pub wcss_history: Vec<f64>,
}

impl KMeans {
    pub fn wcss(&self) -> f64 {
        *self.wcss_history.last().expect("history is never empty")
    }
}

fn assign(points: &[Vec<f64>], means: &[Vec<f64>]) -> Vec<usize> {
    points
        .iter()
        .map(|p| {
            let mut best = (f64::INFINITY, 0);
            for (j, m) in means.iter().enumerate() {
                let d = squared_distance(p, m);
                if d < best.0 {
                    best = (d, j);
                }
            }
            best.1
        })
        .collect()
}

fn wcss(points: &[Vec<f64>], means: &[Vec<f64>], assignments: &[usize]) -> f64 {
    points.iter().zip(assignments).map(|(p, &j)| squared_distance(p, &means[j])).sum()
}

/// Lloyd's algorithm from `k` distinct sample points chosen with the
/// initialisation stream of `seed`.
///
/// A cluster left empty is moved onto the point farthest from its own
/// mean. An update that would raise the sum of squares through rounding is
/// discarded and iteration stops, so `wcss_history` never increases.
pub fn kmeans_variant(points: &[Vec<f64>], k: usize, max_iter: usize, seed: u64) -> Result<KMeans, GameError> {
    let n = points.len();
    if k == 0 || k > n {
        return Err(GameError::Config(format!("k = {k} must lie in 1..={n}")));
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(GameError::Dimension("samples must share a dimension".into()));
    }
    if points.iter().flatten().any(|v| !v.is_finite()) {
        return Err(GameError::NonFinite);
    }
    let mut rng = stream_rng(seed, INIT_STREAM);
    let mut init = index::sample(&mut rng, n, k).into_vec();
    init.sort_unstable();
    let mut means: Vec<Vec<f64>> = init.iter().map(|&i| points[i].clone()).collect();
    let mut assignments = assign(points, &means);
    let mut history = vec![wcss(points, &means, &assignments)];

    for _ in 0..max_iter {
        let mut counts = vec![0usize; k];
        for &j in &assignments {
            counts[j] += 1;
        }
        let mut taken = Vec::new();
        for j in 0..k {
            if counts[j] == 0 {
                let far = (0..n)
                    .filter(|i| !taken.contains(i))
                    .max_by(|&x, &y| {
                        let dx = squared_distance(&points[x], &means[assignments[x]]);
                        let dy = squared_distance(&points[y], &means[assignments[y]]);
                        dx.total_cmp(&dy).then(y.cmp(&x))
                    })
                    .expect("k ≤ n leaves a free point");
                taken.push(far);
                means[j] = points[far].clone();
            }
        }
        let mut next = means.clone();
        for j in 0..k {
            if counts[j] > 0 {
                let mut m = vec![0.0; dim];
                for (p, _) in points.iter().zip(&assignments).filter(|(_, &a)| a == j) {
                    for (acc, v) in m.iter_mut().zip(p) {
                        *acc += v;
                    }
                }
                m.iter_mut().for_each(|v| *v /= counts[j] as f64);
                next[j] = m;
            }
        }
        let last = *history.last().unwrap();
        if wcss(points, &next, &assignments) > last {
            break;
        }
        means = next;
        let reassigned = assign(points, &means);
        let changed = reassigned != assignments;
        assignments = reassigned;
        history.push(wcss(points, &means, &assignments));
        if !changed {
            break;
        }
    }
    Ok(KMeans { means, assignments, wcss_history: history })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::sample_zs_games;

    fn games(n: usize, seed: u64) -> Vec<Vec<f64>> {
        sample_zs_games(n, seed, (-1.0, 1.0)).unwrap().iter().map(|g| g.to_vec()).collect()
    }

    #[test]
    fn single_cluster_is_the_average() {
        let pts = games(200, 1);
        let km = kmeans_variant(&pts, 1, 10, 0).unwrap();
        for i in 0..4 {
            let avg = pts.iter().map(|p| p[i]).sum::<f64>() / pts.len() as f64;
            assert!((km.means[0][i] - avg).abs() < 1e-12);
        }
    }

    #[test]
    fn one_cluster_per_point() {
        let pts = games(25, 2);
        let km = kmeans_variant(&pts, 25, 10, 3).unwrap();
        assert_eq!(km.wcss(), 0.0);
        let mut seen = km.assignments.clone();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), 25);
    }

    #[test]
    fn wcss_never_increases() {
        let pts = games(1000, 4);
        let km = kmeans_variant(&pts, 10, 100, 17).unwrap();
        assert!(km.wcss_history.len() > 2);
        assert!(km.wcss_history.windows(2).all(|w| w[1] <= w[0]), "{:?}", km.wcss_history);
    }

    #[test]
    fn empty_cluster_reseeded() {
        // duplicates force two identical initial means; one cluster empties
        let pts = vec![vec![0.0], vec![0.0], vec![0.0], vec![10.0]];
        let km = kmeans_variant(&pts, 2, 10, 0).unwrap();
        assert_eq!(km.wcss(), 0.0);
        assert!(km.wcss_history.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn rejects_bad_k() {
        let pts = games(3, 5);
        assert!(kmeans_variant(&pts, 0, 10, 0).is_err());
        assert!(kmeans_variant(&pts, 4, 10, 0).is_err());
    }
}
