//! The imaginary-cube property: exact sub-cube covers `Φⁿ(C)` when `P`
//! preserves the cube, and raster or ball-cover evidence otherwise.

mod disks;
mod raster;
mod sweep;

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

pub use disks::{disk_area, union_of_disks_area, Disk};
pub use raster::{raster_disks, raster_squares, Axis, Raster};
pub use sweep::{union_area, Rect};

use crate::error::{unsupported, Result};
use crate::frt::{generate_cloud, generate_cloud_with_budget, FrtParams, PointCloud, DEFAULT_MAX_POINTS};
use crate::geom::{Scalar, Vec3};

pub const DEFAULT_RESOLUTION: u32 = 512;

/// An axis-aligned cube.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisCube<S> {
    pub center: Vec3<S>,
    pub half_side: S,
}

impl<S: Scalar> AxisCube<S> {
    pub fn contains_cube(&self, other: &AxisCube<S>) -> bool {
        (0..3).all(|k| {
            let gap = other.center.0[k].clone() - self.center.0[k].clone();
            let slack = self.half_side.clone() - other.half_side.clone();
            (gap.abs() - slack).sign(0.0) != Ordering::Greater
        })
    }

    pub fn vertices(&self) -> Vec<Vec3<S>> {
        let h = &self.half_side;
        let mut out = Vec::with_capacity(8);
        for sx in [-1i64, 1] {
            for sy in [-1i64, 1] {
                for sz in [-1i64, 1] {
                    let off = Vec3::from_ints([sx, sy, sz]).scale(h);
                    out.push(self.center.clone() + off);
                }
            }
        }
        out
    }

    /// The 12 edges as pairs of endpoints.
    pub fn edges(&self) -> Vec<(Vec3<S>, Vec3<S>)> {
        let v = self.vertices();
        let mut out = Vec::with_capacity(12);
        for a in 0..8usize {
            for bit in [4usize, 2, 1] {
                if a & bit == 0 {
                    out.push((v[a].clone(), v[a | bit].clone()));
                }
            }
        }
        out
    }
}

/// `C_c`: centre 0, half-side `1/(1−c)`, whose vertices include `vⱼ/(1−c)`.
pub fn normal_cube<S: Scalar>(params: &FrtParams<S>) -> AxisCube<S> {
    AxisCube { center: Vec3::zero(), half_side: S::one() / (S::one() - params.c().clone()) }
}

/// The `4ⁿ` cubes `f_ω(C_c)` in lexicographic word order.
#[derive(Clone, Debug)]
pub struct CubeCover<S> {
    pub depth: u32,
    pub half_side: S,
    pub centers: Vec<Vec3<S>>,
    pub face_half: S,
}

impl<S: Scalar> CubeCover<S> {
    pub fn cube(&self, k: usize) -> AxisCube<S> {
        AxisCube { center: self.centers[k].clone(), half_side: self.half_side.clone() }
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    fn squares(&self, axis: Axis) -> Vec<Rect<S>> {
        self.centers
            .iter()
            .map(|c| {
                let (u, v) = axis.project(c);
                let h = self.half_side.clone();
                Rect { x0: u.clone() - h.clone(), x1: u + h.clone(), y0: v.clone() - h.clone(), y1: v + h }
            })
            .collect()
    }
}

fn exact_params<S: Scalar>(params: &FrtParams<S>) -> Result<FrtParams<S>> {
    match params.exact_rotation() {
        Some(q) => FrtParams::with_tol(params.c().clone(), q.to_mat(), params.tol()),
        None => unsupported("P is not a cube rotation, so the images of C are not axis-aligned cubes"),
    }
}

pub fn exact_cover<S: Scalar>(params: &FrtParams<S>, depth: u32) -> Result<CubeCover<S>> {
    exact_cover_with_budget(params, depth, DEFAULT_MAX_POINTS)
}

pub fn exact_cover_with_budget<S: Scalar>(params: &FrtParams<S>, depth: u32, max_cubes: usize) -> Result<CubeCover<S>> {
    let snapped = exact_params(params)?;
    let cloud = generate_cloud_with_budget(&snapped, depth, max_cubes)?;
    let face_half = normal_cube(params).half_side;
    let half_side = face_half.clone() * params.c().pow(depth);
    Ok(CubeCover { depth, half_side, centers: cloud.points, face_half })
}

/// Coverage of one face of `C_c`.
#[derive(Clone, Debug, Serialize)]
pub struct FaceCoverage {
    pub axis: Axis,
    pub fraction: f64,
    /// The fraction as an exact string when it was computed exactly.
    pub exact: Option<String>,
    pub full: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverageMethod {
    /// Union of the projected cubes of `Φⁿ(C)`.
    CubeUnion,
    /// Pixels hit by disks of radius `cell_diameter/2` about the cloud.
    Raster,
    /// Union of the projected piece balls, relative to the projected bounding ball.
    BallCover,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverageReport {
    pub depth: u32,
    pub method: CoverageMethod,
    pub exact: bool,
    pub resolution: Option<u32>,
    pub faces: Vec<FaceCoverage>,
}

impl CoverageReport {
    pub fn full(&self) -> bool {
        self.faces.iter().all(|f| f.full)
    }

    pub fn min_fraction(&self) -> f64 {
        self.faces.iter().map(|f| f.fraction).fold(f64::INFINITY, f64::min)
    }

    pub fn max_fraction(&self) -> f64 {
        self.faces.iter().map(|f| f.fraction).fold(0.0, f64::max)
    }
}

/// Area of the union of the projected cubes over the face area, exact when `S` is.
pub fn cover_face_fraction<S: Scalar>(cover: &CubeCover<S>, axis: Axis) -> S {
    let side = cover.face_half.clone() + cover.face_half.clone();
    union_area(&cover.squares(axis)) / (side.clone() * side)
}

pub fn cover_coverage<S: Scalar>(cover: &CubeCover<S>) -> CoverageReport {
    let faces = Axis::ALL
        .par_iter()
        .map(|&axis| {
            let f = cover_face_fraction(cover, axis);
            FaceCoverage {
                axis,
                fraction: f.to_f64(),
                exact: exact_string(&f).or_else(|| S::EXACT.then(|| format!("{f:?}"))),
                full: (f - S::one()).sign(if S::EXACT { 0.0 } else { 1e-9 }) != Ordering::Less,
            }
        })
        .collect();
    CoverageReport { depth: cover.depth, method: CoverageMethod::CubeUnion, exact: S::EXACT, resolution: None, faces }
}

fn exact_string<S: Scalar>(s: &S) -> Option<String> {
    s.to_rational().map(|q| q.to_string())
}

/// Raster coverage of the faces of `C_c` by the thickened cloud.
pub fn raster_coverage<S: Scalar>(cloud: &PointCloud<S>, resolution: u32) -> Result<(CoverageReport, Vec<Raster>)> {
    let h = 1.0 / (1.0 - cloud.params.c_f64());
    let pts = cloud.to_f64_points();
    let r = cloud.cell_diameter / 2.0;
    let rasters: Vec<Raster> = Axis::ALL
        .iter()
        .map(|&axis| {
            let proj: Vec<(f64, f64)> = pts.iter().map(|p| axis.project(p)).collect();
            raster_disks(&proj, r, h, resolution)
        })
        .collect::<Result<_>>()?;
    let faces = Axis::ALL
        .iter()
        .zip(&rasters)
        .map(|(&axis, ras)| FaceCoverage { axis, fraction: ras.fraction(), exact: None, full: ras.covered() == ras.pixels.len() })
        .collect();
    let report = CoverageReport {
        depth: cloud.depth,
        method: CoverageMethod::Raster,
        exact: false,
        resolution: Some(resolution),
        faces,
    };
    Ok((report, rasters))
}

/// Raster of the projected cubes of a cover; converges to the exact fraction.
pub fn raster_cover<S: Scalar>(cover: &CubeCover<S>, axis: Axis, resolution: u32) -> Result<Raster> {
    let centers: Vec<(f64, f64)> = cover.centers.iter().map(|c| axis.project(&c.to_f64())).collect();
    raster_squares(&centers, cover.half_side.to_f64(), cover.face_half.to_f64(), resolution)
}

/// Each piece `f_ω(A)`, `|ω| = n`, lies in the ball of radius `√3·cⁿ/(1−c)`
/// about `f_ω(0)`, so the projections of those balls cover the projection
/// of `A`. The reported fraction is their union area over the area of the
/// projected bounding ball, which is at most `(4c²)ⁿ`.
pub fn ball_cover_coverage<S: Scalar>(cloud: &PointCloud<S>) -> CoverageReport {
    let c = cloud.params.c_f64();
    let big = 3f64.sqrt() / (1.0 - c);
    let r = big * c.powi(cloud.depth as i32);
    let pts = cloud.to_f64_points();
    let faces = Axis::ALL
        .par_iter()
        .map(|&axis| {
            let disks: Vec<Disk> = pts
                .iter()
                .map(|p| {
                    let (x, y) = axis.project(p);
                    Disk { x, y, r }
                })
                .collect();
            let fraction = (union_of_disks_area(&disks) / disk_area(big)).min(1.0);
            FaceCoverage { axis, fraction, exact: None, full: fraction >= 1.0 - 1e-9 }
        })
        .collect();
    CoverageReport { depth: cloud.depth, method: CoverageMethod::BallCover, exact: false, resolution: None, faces }
}

/// `c ≥ 1/2` and `P` a rotation of the cube.
pub fn ic_predicate<S: Scalar>(params: &FrtParams<S>, tol: f64) -> bool {
    let half = S::from_ratio(1, 2);
    let tol = if S::EXACT { 0.0 } else { tol };
    (params.c().clone() - half).sign(tol) != Ordering::Less
        && crate::rotgroup::classify_unchecked(params.p(), tol.max(params.tol())).in_hexahedral()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IcMode {
    /// Exact cube covers when `P` preserves the cube, raster otherwise.
    Exact,
    Raster(u32),
}

#[derive(Clone, Debug, Serialize)]
pub struct IcReport {
    pub predicate: bool,
    /// Coverage of every face was complete at every tested level.
    pub witnessed_ic: bool,
    pub levels: Vec<CoverageReport>,
    /// Ball-cover evidence per level; present when no exact cover exists.
    pub ball_cover: Vec<CoverageReport>,
    /// `(4c²)ⁿ` per level.
    pub decay_bound: Vec<f64>,
    pub nested: Option<bool>,
}

impl IcReport {
    /// The per-level coverage series used for the deficit statement.
    pub fn series(&self) -> Vec<f64> {
        let src = if self.ball_cover.is_empty() { &self.levels } else { &self.ball_cover };
        src.iter().map(CoverageReport::max_fraction).collect()
    }
}

/// Tests `Φⁿ(C)` for `n = 1..=depth`.
pub fn verify_ic<S: Scalar>(params: &FrtParams<S>, depth: u32, mode: IcMode) -> Result<IcReport> {
    let c = params.c_f64();
    let decay_bound = (1..=depth).map(|n| (4.0 * c * c).powi(n as i32)).collect();
    let predicate = ic_predicate(params, params.tol());
    let exact_ok = mode == IcMode::Exact && params.exact_rotation().is_some();
    let mut levels = Vec::new();
    let mut ball_cover = Vec::new();
    let mut nested = None;
    if exact_ok {
        let mut prev: Option<CubeCover<S>> = None;
        let mut all_nested = true;
        for n in 1..=depth {
            let cover = exact_cover(params, n)?;
            if let Some(p) = &prev {
                all_nested &= cover_is_nested(p, &cover);
            }
            levels.push(cover_coverage(&cover));
            prev = Some(cover);
        }
        nested = Some(all_nested);
    } else {
        let res = match mode {
            IcMode::Raster(r) => r,
            IcMode::Exact => DEFAULT_RESOLUTION,
        };
        for n in 1..=depth {
            let cloud = generate_cloud(params, n)?;
            levels.push(raster_coverage(&cloud, res)?.0);
            ball_cover.push(ball_cover_coverage(&cloud));
        }
    }
    let witnessed_ic = exact_ok && levels.iter().all(CoverageReport::full);
    Ok(IcReport { predicate, witnessed_ic, levels, ball_cover, decay_bound, nested })
}

/// Every cube of `finer` (depth `n+1`) lies in its parent cube of `coarser`.
pub fn cover_is_nested<S: Scalar>(coarser: &CubeCover<S>, finer: &CubeCover<S>) -> bool {
    finer.depth == coarser.depth + 1
        && finer.len() == 4 * coarser.len()
        && (0..finer.len()).into_par_iter().all(|k| coarser.cube(k / 4).contains_cube(&finer.cube(k)))
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeWitness {
    pub from: [f64; 3],
    pub to: [f64; 3],
    pub distance: f64,
    pub nearest: [f64; 3],
}

fn segment_distance(p: &Vec3<f64>, a: &Vec3<f64>, b: &Vec3<f64>) -> f64 {
    let ab = b.clone() - a.clone();
    let t = ((p.clone() - a.clone()).dot(&ab) / ab.norm_squared()).clamp(0.0, 1.0);
    p.distance(&(a.clone() + ab.scale(&t)))
}

/// Distance from the depth-`n` cloud to each of the 12 edges of `C_c`.
pub fn edge_witnesses<S: Scalar>(params: &FrtParams<S>, depth: u32) -> Result<Vec<EdgeWitness>> {
    let cloud = generate_cloud(params, depth)?;
    let pts = cloud.to_f64_points();
    let cube = normal_cube(params);
    Ok(cube
        .edges()
        .into_iter()
        .map(|(a, b)| {
            let (a, b) = (a.to_f64(), b.to_f64());
            let (k, distance) = pts
                .par_iter()
                .enumerate()
                .map(|(k, p)| (k, segment_distance(p, &a, &b)))
                .min_by(|x, y| x.1.total_cmp(&y.1).then(x.0.cmp(&y.0)))
                .expect("cloud is nonempty");
            EdgeWitness { from: a.0, to: b.0, distance, nearest: pts[k].0 }
        })
        .collect())
}
