use std::f64::consts::{PI, TAU};

/// A disk in the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disk {
    pub x: f64,
    pub y: f64,
    pub r: f64,
}

const EPS: f64 = 1e-12;

/// Area of a union of disks.
///
/// Integrates `(x dy − y dx)/2` over the boundary arcs of each disk that no
/// other disk covers, so the result is exact up to rounding.
pub fn union_of_disks_area(disks: &[Disk]) -> f64 {
    let mut ds: Vec<Disk> = disks.iter().copied().filter(|d| d.r > 0.0).collect();
    ds.sort_by(|a, b| b.r.total_cmp(&a.r).then(a.x.total_cmp(&b.x)).then(a.y.total_cmp(&b.y)));
    ds.dedup_by(|a, b| (a.x - b.x).abs() <= EPS && (a.y - b.y).abs() <= EPS && (a.r - b.r).abs() <= EPS);
    // drop disks contained in a larger one
    let kept: Vec<Disk> = (0..ds.len())
        .filter(|&i| {
            !ds.iter().enumerate().any(|(j, o)| {
                j != i && (o.r > ds[i].r || (o.r == ds[i].r && j < i)) && {
                    let d = (ds[i].x - o.x).hypot(ds[i].y - o.y);
                    d + ds[i].r <= o.r + EPS
                }
            })
        })
        .map(|i| ds[i])
        .collect();

    let mut total = 0.0;
    for (i, a) in kept.iter().enumerate() {
        let mut cuts: Vec<(f64, f64)> = Vec::new();
        let mut fully_covered = false;
        for (j, b) in kept.iter().enumerate() {
            if i == j {
                continue;
            }
            let (dx, dy) = (b.x - a.x, b.y - a.y);
            let d = dx.hypot(dy);
            if d >= a.r + b.r - EPS {
                continue;
            }
            if d + a.r <= b.r + EPS {
                fully_covered = true;
                break;
            }
            if d + b.r <= a.r + EPS {
                continue;
            }
            let base = dy.atan2(dx);
            let cos = ((a.r * a.r + d * d - b.r * b.r) / (2.0 * a.r * d)).clamp(-1.0, 1.0);
            let half = cos.acos();
            let (mut lo, mut hi) = (base - half, base + half);
            lo = lo.rem_euclid(TAU);
            hi = hi.rem_euclid(TAU);
            if lo <= hi {
                cuts.push((lo, hi));
            } else {
                cuts.push((lo, TAU));
                cuts.push((0.0, hi));
            }
        }
        if fully_covered {
            continue;
        }
        cuts.sort_by(|p, q| p.0.total_cmp(&q.0));
        let mut free: Vec<(f64, f64)> = Vec::new();
        let mut cursor = 0.0;
        for (lo, hi) in cuts {
            if lo > cursor {
                free.push((cursor, lo));
            }
            cursor = f64::max(cursor, hi);
        }
        if cursor < TAU {
            free.push((cursor, TAU));
        }
        for (t0, t1) in free {
            total += 0.5
                * (a.r * a.r * (t1 - t0) + a.r * (a.x * (t1.sin() - t0.sin()) - a.y * (t1.cos() - t0.cos())));
        }
    }
    total
}

pub fn disk_area(r: f64) -> f64 {
    PI * r * r
}
