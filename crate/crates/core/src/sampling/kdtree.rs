//! Static k-d tree for exact nearest-neighbour queries.
//!
//! Results are identical to a linear scan with [`super::squared_distance`]
//! and lowest-index tie-breaking: candidates are compared on the pair
//! `(distance², index)` and a subtree is only skipped when its splitting
//! plane is strictly farther than the best distance found.

use super::squared_distance;

#[derive(Debug, Clone)]
pub struct KdTree {
    dim: usize,
    coords: Vec<f64>,
    perm: Vec<usize>,
}

impl KdTree {
    /// Builds over `points`, which must all share one positive dimension.
    pub fn build<P: AsRef<[f64]>>(points: &[P]) -> Self {
        let dim = points.first().map_or(0, |p| p.as_ref().len());
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in points {
            let p = p.as_ref();
            assert_eq!(p.len(), dim, "points must share a dimension");
            coords.extend_from_slice(p);
        }
        let mut tree = KdTree { dim, coords, perm: (0..points.len()).collect() };
        if dim > 0 {
            let mut perm = std::mem::take(&mut tree.perm);
            tree.split(&mut perm, 0);
            tree.perm = perm;
        }
        tree
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    fn split(&self, perm: &mut [usize], depth: usize) {
        if perm.len() <= 1 {
            return;
        }
        let axis = depth % self.dim;
        let mid = perm.len() / 2;
        perm.select_nth_unstable_by(mid, |&a, &b| self.point(a)[axis].total_cmp(&self.point(b)[axis]));
        let (left, right) = perm.split_at_mut(mid);
        self.split(left, depth + 1);
        self.split(&mut right[1..], depth + 1);
    }

    /// Index of the nearest point, or `None` for an empty tree.
    pub fn nearest(&self, query: &[f64]) -> Option<usize> {
        if self.perm.is_empty() {
            return None;
        }
        debug_assert_eq!(query.len(), self.dim);
        let mut best = (f64::INFINITY, usize::MAX);
        self.search(0, self.perm.len(), 0, query, &mut best);
        Some(best.1)
    }

    fn search(&self, lo: usize, hi: usize, depth: usize, q: &[f64], best: &mut (f64, usize)) {
        if lo >= hi {
            return;
        }
        let mid = lo + (hi - lo) / 2;
        let idx = self.perm[mid];
        let p = self.point(idx);
        let d = squared_distance(p, q);
        if d < best.0 || (d == best.0 && idx < best.1) {
            *best = (d, idx);
        }
        let axis = depth % self.dim;
        let diff = q[axis] - p[axis];
        let (near, far) = if diff < 0.0 { ((lo, mid), (mid + 1, hi)) } else { ((mid + 1, hi), (lo, mid)) };
        self.search(near.0, near.1, depth + 1, q, best);
        if diff * diff <= best.0 {
            self.search(far.0, far.1, depth + 1, q, best);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(points: &[Vec<f64>], q: &[f64]) -> usize {
        let mut best = 0;
        for i in 1..points.len() {
            if squared_distance(&points[i], q) < squared_distance(&points[best], q) {
                best = i;
            }
        }
        best
    }

    #[test]
    fn empty_tree() {
        let t = KdTree::build::<Vec<f64>>(&[]);
        assert!(t.is_empty());
        assert_eq!(t.nearest(&[0.0]), None);
    }

    #[test]
    fn duplicates_resolve_to_lowest_index() {
        let pts = vec![vec![1.0, 1.0], vec![0.0, 0.0], vec![0.0, 0.0], vec![0.0, 0.0]];
        let t = KdTree::build(&pts);
        assert_eq!(t.nearest(&[0.1, 0.1]), Some(1));
    }

    proptest! {
        #[test]
        fn agrees_with_linear_scan(
            pts in prop::collection::vec(prop::collection::vec(-4i32..4, 3), 1..80),
            q in prop::collection::vec(-5i32..5, 3),
        ) {
            // integer grids make exact ties common
            let pts: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(|&v| v as f64 * 0.5).collect()).collect();
            let q: Vec<f64> = q.iter().map(|&v| v as f64 * 0.5).collect();
            let t = KdTree::build(&pts);
            prop_assert_eq!(t.nearest(&q), Some(brute(&pts, &q)));
        }
    }
}
