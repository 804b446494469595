use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::{invalid, unsupported, Result};
use crate::frt::{canonical_point_set, second_level_ifs, FrtParams};
use crate::geom::{dual_vertices, orient3d, Scalar, Vec3};
use crate::rotgroup::RotationClass;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HullKind {
    Solid,
    Planar,
    Collinear,
    Point,
}

/// A convex polytope. Faces list vertex indices counter-clockwise as seen
/// from outside; every listed vertex is extreme.
#[derive(Clone, Debug, PartialEq)]
pub struct Polytope<S> {
    pub vertices: Vec<Vec3<S>>,
    pub faces: Vec<Vec<usize>>,
    pub kind: HullKind,
}

impl<S: Scalar> Polytope<S> {
    pub fn is_degenerate(&self) -> bool {
        self.kind != HullKind::Solid
    }

    /// Closed containment; exact in the exact modes.
    pub fn contains(&self, p: &Vec3<S>, tol: f64) -> bool {
        let tol = if S::EXACT { 0.0 } else { tol };
        match self.kind {
            HullKind::Solid => self.faces.iter().all(|f| {
                let (a, b, c) = (&self.vertices[f[0]], &self.vertices[f[1]], &self.vertices[f[2]]);
                orient3d(a, b, c, p, tol) != Ordering::Greater
            }),
            _ => self.vertices.iter().any(|v| (v.clone() - p.clone()).is_zero_tol(tol)),
        }
    }

    pub fn vertices_f64(&self) -> Vec<Vec3<f64>> {
        self.vertices.iter().map(Vec3::to_f64).collect()
    }
}

struct Builder<'a, S> {
    pts: &'a [Vec3<S>],
    approx: Vec<Vec3<f64>>,
    tol: f64,
}

impl<S: Scalar> Builder<'_, S> {
    /// Orientation with a floating-point filter in front of the exact test.
    fn orient(&self, a: usize, b: usize, c: usize, d: usize) -> Ordering {
        if S::EXACT {
            let (pa, pb, pc, pd) = (&self.approx[a], &self.approx[b], &self.approx[c], &self.approx[d]);
            let ab = pb.clone() - pa.clone();
            let ac = pc.clone() - pa.clone();
            let ad = pd.clone() - pa.clone();
            let det = ab.cross(&ac).dot(&ad);
            let scale = |x: &Vec3<f64>, y: &Vec3<f64>| x.norm() + y.norm() + 1.0;
            let bound = 1e-11 * scale(pa, pb) * scale(pa, pc) * scale(pa, pd);
            if det.abs() > bound {
                return det.partial_cmp(&0.0).unwrap();
            }
        }
        orient3d(&self.pts[a], &self.pts[b], &self.pts[c], &self.pts[d], self.tol)
    }

    fn plane_distance(&self, f: &[usize; 3], p: usize) -> f64 {
        let [a, b, c] = f.map(|k| &self.approx[k]);
        let n = (b.clone() - a.clone()).cross(&(c.clone() - a.clone()));
        n.dot(&(self.approx[p].clone() - a.clone())) / n.norm().max(f64::MIN_POSITIVE)
    }
}

fn collinear<S: Scalar>(a: &Vec3<S>, b: &Vec3<S>, c: &Vec3<S>, tol: f64) -> bool {
    (b.clone() - a.clone()).cross(&(c.clone() - a.clone())).is_zero_tol(tol)
}

/// 2D hull of coplanar points, returned as a counter-clockwise cycle
/// relative to `normal`.
fn planar_hull<S: Scalar>(pts: &[Vec3<S>], normal: &Vec3<S>, tol: f64) -> Vec<usize> {
    // Gift wrapping in the plane: start at the lexicographic minimum.
    let n = pts.len();
    let start = (0..n).min_by(|&i, &j| pts[i].lex_cmp(&pts[j])).unwrap();
    let turn = |o: usize, a: usize, b: usize| -> Ordering {
        let oa = pts[a].clone() - pts[o].clone();
        let ob = pts[b].clone() - pts[o].clone();
        oa.cross(&ob).dot(normal).sign(tol)
    };
    let dist2 = |a: usize, b: usize| (pts[a].clone() - pts[b].clone()).norm_squared();
    let mut cycle = vec![start];
    let mut cur = start;
    loop {
        let mut cand = if cur == 0 { 1 } else { 0 };
        for k in 0..n {
            if k == cur {
                continue;
            }
            match turn(cur, cand, k) {
                Ordering::Less => cand = k,
                Ordering::Equal if dist2(cur, k).total_cmp(&dist2(cur, cand)) == Ordering::Greater => cand = k,
                _ => {}
            }
        }
        if cand == start || cycle.len() > n {
            break;
        }
        cycle.push(cand);
        cur = cand;
    }
    cycle
}

/// Convex hull by quickhull with conflict lists.
///
/// Orientation tests are exact in the exact modes and use `tol` in float
/// mode. Coplanar triangles are merged into polygons and non-extreme points
/// (on edges or faces) are dropped.
pub fn convex_hull3<S: Scalar>(points: &[Vec3<S>], tol: f64) -> Result<Polytope<S>> {
    if points.is_empty() {
        return invalid("convex hull of an empty point set");
    }
    let tol = if S::EXACT { 0.0 } else { tol };
    let pts = canonical_point_set(points, tol);
    let n = pts.len();
    if n == 1 {
        return Ok(Polytope { vertices: pts, faces: Vec::new(), kind: HullKind::Point });
    }
    let i0 = 0;
    let i1 = (1..n).max_by(|&a, &b| {
        (pts[a].clone() - pts[i0].clone()).norm_squared().total_cmp(&(pts[b].clone() - pts[i0].clone()).norm_squared())
    }).unwrap();
    let Some(i2) = (0..n).find(|&k| !collinear(&pts[i0], &pts[i1], &pts[k], tol)) else {
        let far = (0..n).max_by(|&a, &b| pts[a].lex_cmp(&pts[b])).unwrap();
        let mut vertices = vec![pts[0].clone(), pts[far].clone()];
        vertices.sort_by(|a, b| a.lex_cmp(b));
        return Ok(Polytope { vertices, faces: Vec::new(), kind: HullKind::Collinear });
    };
    let builder = Builder { pts: &pts, approx: pts.iter().map(Vec3::to_f64).collect(), tol };
    let Some(i3) = (0..n).find(|&k| builder.orient(i0, i1, i2, k) != Ordering::Equal) else {
        let normal = (pts[i1].clone() - pts[i0].clone()).cross(&(pts[i2].clone() - pts[i0].clone()));
        let cycle = planar_hull(&pts, &normal, tol);
        let vertices: Vec<Vec3<S>> = cycle.iter().map(|&k| pts[k].clone()).collect();
        let faces = vec![(0..vertices.len()).collect(), (0..vertices.len()).rev().collect()];
        return Ok(Polytope { vertices, faces, kind: HullKind::Planar });
    };

    let mut faces: Vec<[usize; 3]> = Vec::new();
    let mut alive: Vec<bool> = Vec::new();
    let mut conflicts: Vec<Vec<usize>> = Vec::new();
    let mut edge_face: HashMap<(usize, usize), usize> = HashMap::new();

    let simplex = if builder.orient(i0, i1, i2, i3) == Ordering::Less {
        [[i0, i1, i2], [i0, i3, i1], [i1, i3, i2], [i2, i3, i0]]
    } else {
        [[i0, i2, i1], [i0, i1, i3], [i1, i2, i3], [i2, i0, i3]]
    };
    let add_face = |f: [usize; 3],
                    faces: &mut Vec<[usize; 3]>,
                    alive: &mut Vec<bool>,
                    conflicts: &mut Vec<Vec<usize>>,
                    edge_face: &mut HashMap<(usize, usize), usize>| {
        let id = faces.len();
        faces.push(f);
        alive.push(true);
        conflicts.push(Vec::new());
        for e in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
            edge_face.insert(e, id);
        }
        id
    };
    for f in simplex {
        add_face(f, &mut faces, &mut alive, &mut conflicts, &mut edge_face);
    }
    let used: HashSet<usize> = [i0, i1, i2, i3].into_iter().collect();
    for p in 0..n {
        if used.contains(&p) {
            continue;
        }
        if let Some(fid) = (0..4).find(|&fid| {
            let [a, b, c] = faces[fid];
            builder.orient(a, b, c, p) == Ordering::Greater
        }) {
            conflicts[fid].push(p);
        }
    }

    let mut stack: Vec<usize> = (0..4).collect();
    while let Some(fid) = stack.pop() {
        if !alive[fid] || conflicts[fid].is_empty() {
            continue;
        }
        let apex = *conflicts[fid]
            .iter()
            .max_by(|&&a, &&b| {
                builder.plane_distance(&faces[fid], a).total_cmp(&builder.plane_distance(&faces[fid], b)).then(b.cmp(&a))
            })
            .unwrap();
        // visible region by flood fill
        let mut visible = vec![fid];
        let mut seen: HashSet<usize> = [fid].into_iter().collect();
        let mut k = 0;
        while k < visible.len() {
            let [a, b, c] = faces[visible[k]];
            for (u, v) in [(a, b), (b, c), (c, a)] {
                let nb = edge_face[&(v, u)];
                if seen.insert(nb) {
                    let [x, y, z] = faces[nb];
                    if builder.orient(x, y, z, apex) == Ordering::Greater {
                        visible.push(nb);
                    }
                }
            }
            k += 1;
        }
        let vis: HashSet<usize> = visible.iter().copied().collect();
        let mut horizon = Vec::new();
        for &f in &visible {
            let [a, b, c] = faces[f];
            for (u, v) in [(a, b), (b, c), (c, a)] {
                if !vis.contains(&edge_face[&(v, u)]) {
                    horizon.push((u, v));
                }
            }
        }
        let mut orphans: Vec<usize> = Vec::new();
        for &f in &visible {
            alive[f] = false;
            orphans.append(&mut conflicts[f]);
            let [a, b, c] = faces[f];
            for e in [(a, b), (b, c), (c, a)] {
                if edge_face.get(&e) == Some(&f) {
                    edge_face.remove(&e);
                }
            }
        }
        let new_ids: Vec<usize> = horizon
            .into_iter()
            .map(|(u, v)| add_face([u, v, apex], &mut faces, &mut alive, &mut conflicts, &mut edge_face))
            .collect();
        for p in orphans {
            if p == apex {
                continue;
            }
            if let Some(&nf) = new_ids.iter().find(|&&nf| {
                let [a, b, c] = faces[nf];
                builder.orient(a, b, c, p) == Ordering::Greater
            }) {
                conflicts[nf].push(p);
            }
        }
        stack.extend(new_ids);
    }

    let tris: Vec<[usize; 3]> = (0..faces.len()).filter(|&f| alive[f]).map(|f| faces[f]).collect();
    Ok(assemble(&builder, &tris))
}

/// Merges coplanar neighbouring triangles and keeps only extreme vertices.
fn assemble<S: Scalar>(b: &Builder<'_, S>, tris: &[[usize; 3]]) -> Polytope<S> {
    let edge_tri: HashMap<(usize, usize), usize> = tris
        .iter()
        .enumerate()
        .flat_map(|(t, f)| [((f[0], f[1]), t), ((f[1], f[2]), t), ((f[2], f[0]), t)])
        .collect();
    let mut group: Vec<usize> = (0..tris.len()).collect();
    fn find(g: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while g[r] != r {
            r = g[r];
        }
        let mut y = x;
        while g[y] != r {
            let next = g[y];
            g[y] = r;
            y = next;
        }
        r
    }
    for (t, f) in tris.iter().enumerate() {
        for (u, v) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
            let nb = edge_tri[&(v, u)];
            let other = tris[nb].iter().copied().find(|&w| w != u && w != v).unwrap();
            if b.orient(f[0], f[1], f[2], other) == Ordering::Equal {
                let (ra, rb) = (find(&mut group, t), find(&mut group, nb));
                group[ra] = rb;
            }
        }
    }
    // boundary cycle of each merged face
    let mut boundary: HashMap<usize, HashMap<usize, usize>> = HashMap::new();
    for (t, f) in tris.iter().enumerate() {
        let g = find(&mut group, t);
        for (u, v) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
            let nb = edge_tri[&(v, u)];
            if find(&mut group, nb) != g {
                boundary.entry(g).or_default().insert(u, v);
            }
        }
    }
    let mut polygons: Vec<Vec<usize>> = Vec::new();
    let mut normals: Vec<Vec3<S>> = Vec::new();
    let mut roots: Vec<usize> = boundary.keys().copied().collect();
    roots.sort_unstable();
    for g in roots {
        let [a, bb, c] = tris[g].map(|k| &b.pts[k]);
        normals.push((bb.clone() - a.clone()).cross(&(c.clone() - a.clone())));
        let next = &boundary[&g];
        let start = *next.keys().min().unwrap();
        let mut cycle = vec![start];
        let mut cur = next[&start];
        while cur != start && cycle.len() <= next.len() {
            cycle.push(cur);
            cur = next[&cur];
        }
        polygons.push(cycle);
    }
    // a vertex is extreme iff the normals of its faces span R³
    let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
    for (fi, poly) in polygons.iter().enumerate() {
        for &v in poly {
            incident.entry(v).or_default().push(fi);
        }
    }
    let tol = b.tol;
    let extreme = |v: usize| -> bool {
        let ns: Vec<&Vec3<S>> = incident[&v].iter().map(|&f| &normals[f]).collect();
        for i in 0..ns.len() {
            for j in (i + 1)..ns.len() {
                let cij = ns[i].cross(ns[j]);
                if cij.is_zero_tol(tol) {
                    continue;
                }
                if ns[(j + 1)..].iter().any(|k| cij.dot(k).sign(tol) != Ordering::Equal) {
                    return true;
                }
            }
        }
        false
    };
    let mut keep: Vec<usize> = incident.keys().copied().filter(|&v| extreme(v)).collect();
    keep.sort_by(|&x, &y| b.pts[x].lex_cmp(&b.pts[y]));
    let index: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut faces: Vec<Vec<usize>> = polygons
        .iter()
        .map(|poly| {
            let mut f: Vec<usize> = poly.iter().filter_map(|v| index.get(v).copied()).collect();
            let m = (0..f.len()).min_by_key(|&k| f[k]).unwrap_or(0);
            f.rotate_left(m);
            f
        })
        .collect();
    faces.sort();
    Polytope { vertices: keep.iter().map(|&v| b.pts[v].clone()).collect(), faces, kind: HullKind::Solid }
}

/// `V(c) = {(vᵢ + c·v′ⱼ)/(1−c²)}`, `(i, j)` row-major.
pub fn v_points<S: Scalar>(c: &S) -> Vec<Vec3<S>> {
    let denom = S::one() - c.clone() * c.clone();
    let verts = crate::geom::tetra_vertices::<S>();
    let duals = dual_vertices::<S>();
    let mut out = Vec::with_capacity(16);
    for vi in &verts {
        for vj in &duals {
            out.push((vi.clone() + vj.scale(c)).map(|x| x.clone() / denom.clone()));
        }
    }
    out
}

/// `a_{c,i} = vᵢ/(1+c)`, the four points of `V(c)` inside the cube.
pub fn a_points<S: Scalar>(c: &S) -> Vec<Vec3<S>> {
    let k = S::one() / (S::one() + c.clone());
    crate::geom::tetra_vertices::<S>().iter().map(|v| v.scale(&k)).collect()
}

/// `V′(c) = V(c) ∖ {a_{c,i}}`, the 12 points on edges of `C_c`.
pub fn v_prime_points<S: Scalar>(c: &S) -> Vec<Vec3<S>> {
    let a = a_points(c);
    v_points(c).into_iter().filter(|p| !a.contains(p)).collect()
}

/// The two centroids `d₁, d₂` of three points of `V′(c)` each, with
/// `a_{c,1} = d₁/(1+c) + c·d₂/(1+c)`.
pub fn interior_witness<S: Scalar>(c: &S) -> (Vec3<S>, Vec3<S>, Vec3<S>) {
    let one = S::one();
    let p = one.clone() / (one.clone() - c.clone());
    let m = one.clone() / (one.clone() + c.clone());
    let pt = |x: &S, y: &S, z: &S| Vec3::new(x.clone(), y.clone(), z.clone());
    let third = S::from_ratio(1, 3);
    let (np, nm) = (-p.clone(), -m.clone());
    let d1 = (pt(&p, &nm, &p) + pt(&m, &np, &p) + pt(&p, &np, &m)).scale(&third);
    let d2 = (pt(&np, &p, &m) + pt(&np, &nm, &np) + pt(&m, &p, &np)).scale(&third);
    let combo = d1.scale(&m) + d2.scale(&(c.clone() * m.clone()));
    (d1, d2, combo)
}

/// The hull of `A(c, P)` for `P` a cube rotation: the tetrahedron
/// `{vᵢ/(1−c)}` when `P` preserves the tetrahedron, otherwise the hull of
/// the second-level points, whose vertices are `V′(c)`.
pub fn analytic_hull<S: Scalar>(params: &FrtParams<S>) -> Result<Polytope<S>> {
    let Some(q) = params.exact_rotation() else {
        return unsupported("no closed-form hull for P outside the cube group");
    };
    let snapped = FrtParams::with_tol(params.c().clone(), q.to_mat(), params.tol())?;
    match params.classify() {
        RotationClass::InTetrahedral => {
            let k = S::one() / (S::one() - params.c().clone());
            let pts: Vec<Vec3<S>> = params.vertices().iter().map(|v| v.scale(&k)).collect();
            convex_hull3(&pts, params.tol())
        }
        RotationClass::InHexahedralNotTetrahedral => convex_hull3(&second_level_ifs(&snapped), params.tol()),
        RotationClass::Outside => unsupported("no closed-form hull for P outside the cube group"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Rational;
    use crate::rotgroup::ExactRotation;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn ints(v: &[[i64; 3]]) -> Vec<Vec3<Rational>> {
        v.iter().map(|&p| Vec3::from_ints(p)).collect()
    }

    #[test]
    fn simplex() {
        let h = convex_hull3(&ints(&[[2, -2, 2], [-2, 2, 2], [-2, -2, -2], [2, 2, -2]]), 0.0).unwrap();
        assert_eq!(h.kind, HullKind::Solid);
        assert_eq!(h.vertices.len(), 4);
        assert_eq!(h.faces.len(), 4);
        assert!(h.contains(&Vec3::zero(), 0.0));
        assert!(!h.contains(&Vec3::from_ints([2, 2, 2]), 0.0));
    }

    #[test]
    fn degenerate_inputs() {
        assert!(convex_hull3::<Rational>(&[], 0.0).is_err());
        assert_eq!(convex_hull3(&ints(&[[1, 1, 1], [1, 1, 1]]), 0.0).unwrap().kind, HullKind::Point);
        let line = convex_hull3(&ints(&[[0, 0, 0], [1, 1, 1], [3, 3, 3], [2, 2, 2]]), 0.0).unwrap();
        assert_eq!(line.kind, HullKind::Collinear);
        assert_eq!(line.vertices, ints(&[[0, 0, 0], [3, 3, 3]]));
        let flat = convex_hull3(&ints(&[[0, 0, 0], [2, 0, 0], [2, 2, 0], [0, 2, 0], [1, 1, 0], [1, 0, 0]]), 0.0).unwrap();
        assert_eq!(flat.kind, HullKind::Planar);
        assert_eq!(flat.vertices.len(), 4);
    }

    #[test]
    fn cube_faces_are_merged() {
        let mut pts: Vec<Vec3<Rational>> = Vec::new();
        for x in -1..=1 {
            for y in -1..=1 {
                for z in -1..=1 {
                    pts.push(Vec3::from_ints([x, y, z]));
                }
            }
        }
        let h = convex_hull3(&pts, 0.0).unwrap();
        assert_eq!(h.vertices.len(), 8);
        assert_eq!(h.faces.len(), 6);
        assert!(h.faces.iter().all(|f| f.len() == 4));
        let hf = convex_hull3(&pts.iter().map(Vec3::to_f64).collect::<Vec<_>>(), 1e-9).unwrap();
        assert_eq!(hf.vertices.len(), 8);
        assert_eq!(hf.faces.len(), 6);
    }

    #[test]
    fn v_half_has_twelve_hull_vertices() {
        let c = rat(1, 2);
        let h = convex_hull3(&v_points(&c), 0.0).unwrap();
        assert_eq!(h.vertices.len(), 12);
        let mut expected = v_prime_points(&c);
        expected.sort_by(|a, b| a.lex_cmp(b));
        assert_eq!(h.vertices, expected);
        assert!(expected.contains(&Vec3::new(rat(2, 1), rat(-2, 3), rat(2, 1))));
        for a in a_points(&c) {
            assert!(h.contains(&a, 0.0));
        }
    }

    #[test]
    fn interior_witness_identity() {
        for c in [rat(1, 3), rat(1, 2), rat(2, 3)] {
            let (_, _, combo) = interior_witness(&c);
            assert_eq!(combo, a_points(&c)[0]);
        }
        let (_, _, combo) = interior_witness(&rat(1, 2));
        assert_eq!(combo, Vec3::new(rat(2, 3), rat(-2, 3), rat(2, 3)));
    }

    #[test]
    fn analytic_hulls() {
        let t = analytic_hull(&FrtParams::from_rotation(rat(1, 2), &ExactRotation::IDENTITY).unwrap()).unwrap();
        assert_eq!(t.vertices, {
            let mut v = ints(&[[2, -2, 2], [-2, 2, 2], [-2, -2, -2], [2, 2, -2]]);
            v.sort_by(|a, b| a.lex_cmp(b));
            v
        });
        let p = FrtParams::from_rotation(rat(1, 2), &ExactRotation::named("z90").unwrap()).unwrap();
        let o = analytic_hull(&p).unwrap();
        let mut expected = v_prime_points(&rat(1, 2));
        expected.sort_by(|a, b| a.lex_cmp(b));
        assert_eq!(o.vertices, expected);
    }

    proptest! {
        // Oracle: every input point is inside, every vertex is an input point,
        // and each face plane has all points on its inner side.
        #[test]
        fn hull_contains_its_input(raw in proptest::collection::vec(proptest::array::uniform3(-6i64..6), 4..40)) {
            let pts = ints(&raw);
            let h = convex_hull3(&pts, 0.0).unwrap();
            prop_assume!(h.kind == HullKind::Solid);
            for p in &pts {
                prop_assert!(h.contains(p, 0.0));
            }
            for v in &h.vertices {
                prop_assert!(pts.contains(v));
                // extreme: removing it shrinks the hull
                let rest: Vec<_> = pts.iter().filter(|q| *q != v).cloned().collect();
                let smaller = convex_hull3(&rest, 0.0).unwrap();
                prop_assert!(smaller.kind != HullKind::Solid || !smaller.contains(v, 0.0));
            }
            let hf = convex_hull3(&pts.iter().map(Vec3::to_f64).collect::<Vec<_>>(), 1e-9).unwrap();
            prop_assert_eq!(hf.vertices.len(), h.vertices.len());
        }
    }
}
