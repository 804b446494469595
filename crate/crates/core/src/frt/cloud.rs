use std::cmp::Ordering;

use rayon::prelude::*;

use super::params::FrtParams;
use crate::error::{FrtError, Result};
use crate::geom::{Scalar, Vec3};

/// Largest cloud built without an explicit budget: 4¹¹ points.
pub const DEFAULT_MAX_POINTS: usize = 1 << 22;

const PARALLEL_THRESHOLD: usize = 1 << 10;

/// The depth-`n` approximation of `A(c, P)`.
///
/// `points[k]` is `f_ω(0)` where `ω` is the `k`-th word of length `n` in
/// lexicographic order, so the points of piece `i` occupy the `i`-th quarter.
/// Every point of `A` is within `cell_diameter` of some point and vice versa.
#[derive(Clone, Debug)]
pub struct PointCloud<S> {
    pub points: Vec<Vec3<S>>,
    pub depth: u32,
    pub cell_diameter: f64,
    pub params: FrtParams<S>,
}

impl<S: Scalar> PointCloud<S> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points whose word starts with `letter`.
    pub fn piece(&self, letter: u8) -> &[Vec3<S>] {
        if self.depth == 0 {
            return &self.points;
        }
        let q = self.points.len() / 4;
        let i = (letter - 1) as usize;
        &self.points[i * q..(i + 1) * q]
    }

    pub fn to_f64_points(&self) -> Vec<Vec3<f64>> {
        self.points.iter().map(Vec3::to_f64).collect()
    }

    /// Index of the nearest point and its distance.
    pub fn nearest(&self, p: &Vec3<f64>) -> (usize, f64) {
        self.points
            .par_iter()
            .enumerate()
            .map(|(k, q)| (k, q.to_f64().distance(p)))
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
            .unwrap_or((0, f64::INFINITY))
    }
}

/// `2√3·cⁿ/(1−c)`, a bound on the diameter of every depth-`n` piece.
pub fn cell_diameter(c: f64, depth: u32) -> f64 {
    2.0 * 3f64.sqrt() * c.powi(depth as i32) / (1.0 - c)
}

pub fn generate_cloud<S: Scalar>(params: &FrtParams<S>, depth: u32) -> Result<PointCloud<S>> {
    generate_cloud_with_budget(params, depth, DEFAULT_MAX_POINTS)
}

pub fn generate_cloud_with_budget<S: Scalar>(
    params: &FrtParams<S>,
    depth: u32,
    max_points: usize,
) -> Result<PointCloud<S>> {
    let count = 4usize.checked_pow(depth).filter(|&n| n <= max_points).ok_or_else(|| {
        FrtError::Resource(format!("depth {depth} needs 4^{depth} points, budget is {max_points}"))
    })?;
    let mut points = vec![Vec3::zero()];
    for _ in 0..depth {
        let level: Vec<Vec3<S>> = if points.len() >= PARALLEL_THRESHOLD {
            (1..=4u8)
                .into_par_iter()
                .flat_map_iter(|l| points.iter().map(move |x| params.apply_map(l, x)).collect::<Vec<_>>())
                .collect()
        } else {
            (1..=4u8).flat_map(|l| points.iter().map(move |x| params.apply_map(l, x))).collect()
        };
        points = level;
    }
    debug_assert_eq!(points.len(), count);
    Ok(PointCloud { points, depth, cell_diameter: cell_diameter(params.c_f64(), depth), params: params.clone() })
}

/// The 16 points `(vᵢ + cPvⱼ)/(1−c²)`, `(i, j)` in row-major order.
///
/// When `P² = E` these are the fixed points of `fᵢ∘fⱼ`.
pub fn second_level_ifs<S: Scalar>(params: &FrtParams<S>) -> Vec<Vec3<S>> {
    let c = params.c().clone();
    let denom = S::one() - c.clone() * c;
    let cp = params.linear();
    let mut out = Vec::with_capacity(16);
    for vi in params.vertices() {
        for vj in params.vertices() {
            let num = vi.clone() + cp.apply(vj);
            out.push(num.map(|x| x.clone() / denom.clone()));
        }
    }
    out
}

/// A closed ball; `radius_squared` is kept in the scalar type so that
/// containment is decided exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball<S> {
    pub center: Vec3<S>,
    pub radius: f64,
    pub radius_squared: S,
}

impl<S: Scalar> Ball<S> {
    pub fn contains(&self, p: &Vec3<S>, tol: f64) -> bool {
        let d = (p.clone() - self.center.clone()).norm_squared();
        (d - self.radius_squared.clone()).sign(tol) != Ordering::Greater
    }

    pub fn contains_ball(&self, other: &Ball<S>) -> bool {
        let gap = (other.center.clone() - self.center.clone()).norm_f64();
        gap + other.radius <= self.radius * (1.0 + 1e-12)
    }
}

/// `B(0, √3/(1−c))`, mapped into itself by every `fᵢ`.
pub fn bounding_ball<S: Scalar>(params: &FrtParams<S>) -> Ball<S> {
    let one_minus = S::one() - params.c().clone();
    let c = params.c_f64();
    Ball {
        center: Vec3::zero(),
        radius: 3f64.sqrt() / (1.0 - c),
        radius_squared: S::from_int(3) / (one_minus.clone() * one_minus),
    }
}

/// `fᵢ(B) = B(vᵢ, c√3/(1−c))`.
pub fn piece_ball<S: Scalar>(params: &FrtParams<S>, letter: u8) -> Ball<S> {
    let big = bounding_ball(params);
    let c = params.c().clone();
    Ball {
        center: params.vertex(letter).clone(),
        radius: big.radius * params.c_f64(),
        radius_squared: big.radius_squared * c.clone() * c,
    }
}

/// Sorted, deduplicated copy; float coordinates are merged when within `tol`.
pub fn canonical_point_set<S: Scalar>(points: &[Vec3<S>], tol: f64) -> Vec<Vec3<S>> {
    let mut sorted = points.to_vec();
    sorted.par_sort_by(|a, b| a.lex_cmp(b));
    sorted.dedup_by(|a, b| (a.clone() - b.clone()).is_zero_tol(tol));
    sorted
}

/// Set equality, exact in the exact modes.
pub fn same_point_set<S: Scalar>(a: &[Vec3<S>], b: &[Vec3<S>], tol: f64) -> bool {
    let tol = if S::EXACT { 0.0 } else { tol };
    let (a, b) = (canonical_point_set(a, tol), canonical_point_set(b, tol));
    a.len() == b.len() && a.iter().zip(&b).all(|(p, q)| (p.clone() - q.clone()).is_zero_tol(tol))
}
