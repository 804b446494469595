use std::cmp::Ordering;

use crate::geom::Scalar;

/// An axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rect<S> {
    pub x0: S,
    pub x1: S,
    pub y0: S,
    pub y1: S,
}

struct CoverTree<S> {
    ys: Vec<S>,
    count: Vec<u32>,
    covered: Vec<S>,
}

impl<S: Scalar> CoverTree<S> {
    fn new(ys: Vec<S>) -> Self {
        let leaves = ys.len().saturating_sub(1).max(1);
        CoverTree { ys, count: vec![0; 4 * leaves], covered: vec![S::zero(); 4 * leaves] }
    }

    fn leaves(&self) -> usize {
        self.ys.len().saturating_sub(1)
    }

    fn update(&mut self, node: usize, lo: usize, hi: usize, a: usize, b: usize, delta: i32) {
        if b <= lo || hi <= a {
            return;
        }
        if a <= lo && hi <= b {
            self.count[node] = (self.count[node] as i32 + delta) as u32;
        } else {
            let mid = (lo + hi) / 2;
            self.update(2 * node, lo, mid, a, b, delta);
            self.update(2 * node + 1, mid, hi, a, b, delta);
        }
        self.covered[node] = if self.count[node] > 0 {
            self.ys[hi].clone() - self.ys[lo].clone()
        } else if hi - lo == 1 {
            S::zero()
        } else {
            self.covered[2 * node].clone() + self.covered[2 * node + 1].clone()
        };
    }

    fn total(&self) -> S {
        self.covered[1].clone()
    }
}

fn sorted_unique<S: Scalar>(mut v: Vec<S>) -> Vec<S> {
    v.sort_by(|a, b| a.total_cmp(b));
    v.dedup_by(|a, b| a.total_cmp(b) == Ordering::Equal);
    v
}

fn rank<S: Scalar>(coords: &[S], x: &S) -> usize {
    coords.binary_search_by(|c| c.total_cmp(x)).expect("coordinate was inserted")
}

/// Area of the union of rectangles, by a sweep over x with a segment tree
/// over the distinct y coordinates. Exact whenever `S` is.
pub fn union_area<S: Scalar>(rects: &[Rect<S>]) -> S {
    let rects: Vec<&Rect<S>> = rects
        .iter()
        .filter(|r| r.x0.total_cmp(&r.x1) == Ordering::Less && r.y0.total_cmp(&r.y1) == Ordering::Less)
        .collect();
    if rects.is_empty() {
        return S::zero();
    }
    let ys = sorted_unique(rects.iter().flat_map(|r| [r.y0.clone(), r.y1.clone()]).collect());
    let mut events: Vec<(S, i32, usize, usize)> = Vec::with_capacity(2 * rects.len());
    for r in &rects {
        let (a, b) = (rank(&ys, &r.y0), rank(&ys, &r.y1));
        events.push((r.x0.clone(), 1, a, b));
        events.push((r.x1.clone(), -1, a, b));
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
    let mut tree = CoverTree::new(ys);
    let leaves = tree.leaves();
    let mut area = S::zero();
    let mut last_x = events[0].0.clone();
    for (x, delta, a, b) in events {
        if x.total_cmp(&last_x) != Ordering::Equal {
            area = area + tree.total() * (x.clone() - last_x);
            last_x = x;
        }
        tree.update(1, 0, leaves, a, b, delta);
    }
    area
}
