use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::geom::Vec3;

/// Coordinate axis; a face projection drops this coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    /// The two coordinates kept by the projection, in increasing order.
    pub fn kept(self) -> (usize, usize) {
        match self {
            Axis::X => (1, 2),
            Axis::Y => (0, 2),
            Axis::Z => (0, 1),
        }
    }

    pub fn project<T: Clone>(self, p: &Vec3<T>) -> (T, T) {
        let (u, v) = self.kept();
        (p.0[u].clone(), p.0[v].clone())
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

impl std::str::FromStr for Axis {
    type Err = crate::FrtError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            _ => invalid(format!("unknown axis {s:?}")),
        }
    }
}

/// A square bitmap over the face `[−h, h]²`; row 0 is the top (largest `v`).
#[derive(Clone, Debug, PartialEq)]
pub struct Raster {
    pub resolution: u32,
    pub half_extent: f64,
    pub pixels: Vec<bool>,
}

impl Raster {
    pub fn covered(&self) -> usize {
        self.pixels.iter().filter(|&&b| b).count()
    }

    pub fn fraction(&self) -> f64 {
        self.covered() as f64 / self.pixels.len() as f64
    }

    /// Pixel values for a graymap: covered pixels black on white.
    pub fn gray(&self) -> Vec<u8> {
        self.pixels.iter().map(|&b| if b { 0 } else { 255 }).collect()
    }
}

fn pixel_center(h: f64, res: u32, k: u32) -> f64 {
    -h + (k as f64 + 0.5) * (2.0 * h / res as f64)
}

fn rasterize(res: u32, h: f64, hit: impl Fn(f64, f64) -> bool + Sync) -> Result<Raster> {
    if res == 0 {
        return invalid("raster resolution must be positive");
    }
    let pixels: Vec<bool> = (0..res)
        .into_par_iter()
        .flat_map_iter(|row| {
            let v = pixel_center(h, res, res - 1 - row);
            let hit = &hit;
            (0..res).map(move |col| hit(pixel_center(h, res, col), v))
        })
        .collect();
    Ok(Raster { resolution: res, half_extent: h, pixels })
}

/// Bucket grid so that each pixel tests only nearby shapes.
struct Buckets {
    h: f64,
    n: usize,
    cells: Vec<Vec<usize>>,
}

impl Buckets {
    fn new(h: f64, n: usize, boxes: impl Iterator<Item = (f64, f64, f64, f64)>) -> Self {
        let mut cells = vec![Vec::new(); n * n];
        let to_cell = |t: f64| (((t + h) / (2.0 * h) * n as f64).floor().max(0.0) as usize).min(n - 1);
        for (k, (u0, u1, v0, v1)) in boxes.enumerate() {
            if u1 < -h || u0 > h || v1 < -h || v0 > h {
                continue;
            }
            for cu in to_cell(u0)..=to_cell(u1) {
                for cv in to_cell(v0)..=to_cell(v1) {
                    cells[cu * n + cv].push(k);
                }
            }
        }
        Buckets { h, n, cells }
    }

    fn candidates(&self, u: f64, v: f64) -> &[usize] {
        let to_cell = |t: f64| (((t + self.h) / (2.0 * self.h) * self.n as f64).floor().max(0.0) as usize).min(self.n - 1);
        &self.cells[to_cell(u) * self.n + to_cell(v)]
    }
}

/// Pixels whose centre lies in some disk of radius `r` about a projected point.
pub fn raster_disks(points: &[(f64, f64)], r: f64, h: f64, res: u32) -> Result<Raster> {
    let n = (points.len() as f64).sqrt().ceil().clamp(1.0, 256.0) as usize;
    let buckets = Buckets::new(h, n, points.iter().map(|&(u, v)| (u - r, u + r, v - r, v + r)));
    let r2 = r * r;
    rasterize(res, h, |u, v| {
        buckets.candidates(u, v).iter().any(|&k| {
            let (pu, pv) = points[k];
            (u - pu) * (u - pu) + (v - pv) * (v - pv) <= r2
        })
    })
}

/// Pixels whose centre lies in some closed square `[u−s, u+s] × [v−s, v+s]`.
pub fn raster_squares(centers: &[(f64, f64)], s: f64, h: f64, res: u32) -> Result<Raster> {
    let n = (centers.len() as f64).sqrt().ceil().clamp(1.0, 256.0) as usize;
    let buckets = Buckets::new(h, n, centers.iter().map(|&(u, v)| (u - s, u + s, v - s, v + s)));
    rasterize(res, h, |u, v| {
        buckets.candidates(u, v).iter().any(|&k| {
            let (cu, cv) = centers[k];
            (u - cu).abs() <= s && (v - cv).abs() <= s
        })
    })
}
