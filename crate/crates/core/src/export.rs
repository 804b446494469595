//! Deterministic text and binary writers. Floats use Rust's shortest
//! round-trip formatting so reruns are byte-identical.

use std::io::{self, Write};

use crate::analysis::{HataGraph, PairVerdict, Polytope};
use crate::cube::Raster;
use crate::geom::{Scalar, Vec3};

/// ASCII PLY with one `double` vertex element.
pub fn write_ply<W: Write>(w: &mut W, points: &[Vec3<f64>]) -> io::Result<()> {
    writeln!(w, "ply")?;
    writeln!(w, "format ascii 1.0")?;
    writeln!(w, "element vertex {}", points.len())?;
    for axis in ["x", "y", "z"] {
        writeln!(w, "property double {axis}")?;
    }
    writeln!(w, "end_header")?;
    for p in points {
        writeln!(w, "{} {} {}", p.0[0], p.0[1], p.0[2])?;
    }
    Ok(())
}

pub fn write_csv<W: Write>(w: &mut W, points: &[Vec3<f64>]) -> io::Result<()> {
    writeln!(w, "x,y,z")?;
    for p in points {
        writeln!(w, "{},{},{}", p.0[0], p.0[1], p.0[2])?;
    }
    Ok(())
}

/// Portable graymap: plain `P2` or binary `P5`, maxval 255.
pub fn write_pgm<W: Write>(w: &mut W, raster: &Raster, binary: bool) -> io::Result<()> {
    let n = raster.resolution as usize;
    let gray = raster.gray();
    if binary {
        write!(w, "P5\n{n} {n}\n255\n")?;
        return w.write_all(&gray);
    }
    write!(w, "P2\n{n} {n}\n255\n")?;
    for row in gray.chunks(n.max(1)) {
        let line: Vec<String> = row.iter().map(u8::to_string).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Wavefront OBJ of a solid hull; faces are 1-based and counter-clockwise
/// from outside.
pub fn write_obj<S: Scalar, W: Write>(w: &mut W, hull: &Polytope<S>) -> io::Result<()> {
    for v in hull.vertices_f64() {
        writeln!(w, "v {} {} {}", v.0[0], v.0[1], v.0[2])?;
    }
    for f in &hull.faces {
        let idx: Vec<String> = f.iter().map(|k| (k + 1).to_string()).collect();
        writeln!(w, "f {}", idx.join(" "))?;
    }
    Ok(())
}

/// Piece graph: solid edges for certified intersections, dashed edges for
/// undecided pairs, none for disjoint pairs.
pub fn write_dot<W: Write>(w: &mut W, graph: &HataGraph) -> io::Result<()> {
    writeln!(w, "graph hata {{")?;
    writeln!(w, "  label=\"{:?}\";", graph.verdict)?;
    for k in 1..=4 {
        writeln!(w, "  {k};")?;
    }
    for r in &graph.pairs {
        let (i, j) = r.pair;
        match &r.verdict {
            PairVerdict::CertifiedIntersect { .. } => writeln!(w, "  {i} -- {j};")?,
            PairVerdict::Unknown { .. } => writeln!(w, "  {i} -- {j} [style=dashed];")?,
            PairVerdict::CertifiedDisjoint { .. } => {}
        }
    }
    writeln!(w, "}}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{convex_hull3, hata_graph, SearchLimits};
    use crate::frt::FrtParams;
    use crate::geom::Rational;
    use crate::rotgroup::ExactRotation;

    fn text(f: impl FnOnce(&mut Vec<u8>) -> io::Result<()>) -> String {
        let mut buf = Vec::new();
        f(&mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn ply_and_csv() {
        let pts = vec![Vec3([0.5, -1.0, 2.0]), Vec3([0.1, 0.0, 1e-20])];
        let ply = text(|b| write_ply(b, &pts));
        assert!(ply.starts_with("ply\nformat ascii 1.0\nelement vertex 2\n"));
        assert!(ply.ends_with("end_header\n0.5 -1 2\n0.1 0 0.00000000000000000001\n"));
        let csv = text(|b| write_csv(b, &pts));
        assert_eq!(csv.lines().next(), Some("x,y,z"));
        let back: Vec<f64> = csv.lines().nth(2).unwrap().split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(back, vec![0.1, 0.0, 1e-20]);
    }

    #[test]
    fn pgm_formats() {
        let r = Raster { resolution: 2, half_extent: 1.0, pixels: vec![true, false, false, true] };
        assert_eq!(text(|b| write_pgm(b, &r, false)), "P2\n2 2\n255\n0 255\n255 0\n");
        let mut buf = Vec::new();
        write_pgm(&mut buf, &r, true).unwrap();
        assert_eq!(&buf[..11], b"P5\n2 2\n255\n");
        assert_eq!(&buf[11..], &[0, 255, 255, 0]);
    }

    #[test]
    fn obj_of_a_tetrahedron() {
        let pts: Vec<Vec3<Rational>> = crate::geom::tetra_vertices().to_vec();
        let hull = convex_hull3(&pts, 0.0).unwrap();
        let obj = text(|b| write_obj(b, &hull));
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 4);
        assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 4);
    }

    #[test]
    fn dot_edges() {
        let p = FrtParams::from_rotation(Rational::from_ratio(1, 2), &ExactRotation::IDENTITY).unwrap();
        let g = hata_graph(&p, &SearchLimits::default()).unwrap();
        let dot = text(|b| write_dot(b, &g));
        assert_eq!(dot.matches(" -- ").count(), 6);
        assert!(dot.contains("Connected"));
    }
}
