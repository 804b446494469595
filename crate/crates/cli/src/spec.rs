//! Parsing of `c` and `P` specifications.

use std::f64::consts::PI;

use frt_core::geom::{
    is_special_orthogonal, parse_rational, rotation_from_axis_angle, snap_rational_rotation, DEFAULT_TOL,
};
use frt_core::rotgroup::ExactRotation;
use frt_core::{Mat3, Rational, Scalar, Vec3};

/// Largest denominator tried when snapping an axis-angle rotation to rationals.
pub const SNAP_MAX_DEN: i64 = 24;

#[derive(Clone, Debug, PartialEq)]
pub enum CSpec {
    Exact(Rational),
    Decimal(f64),
}

impl CSpec {
    pub fn to_f64(&self) -> f64 {
        match self {
            CSpec::Exact(q) => Scalar::to_f64(q),
            CSpec::Decimal(x) => *x,
        }
    }
}

/// `"p/q"` or an integer is exact; anything with a decimal point or exponent is a float.
pub fn parse_c(text: &str) -> Result<CSpec, String> {
    let t = text.trim();
    let decimal = t.contains(['.', 'e', 'E']);
    let spec = if decimal {
        let x: f64 = t.parse().map_err(|_| format!("cannot parse c = {text:?}"))?;
        CSpec::Decimal(x)
    } else {
        CSpec::Exact(parse_rational(t).ok_or_else(|| format!("cannot parse c = {text:?}; use p/q or a decimal"))?)
    };
    let x = spec.to_f64();
    if !(x > 0.0 && x < 1.0) {
        return Err(format!("c = {text} must lie in the open interval (0, 1)"));
    }
    Ok(spec)
}

#[derive(Clone, Debug)]
pub struct PSpec {
    pub label: String,
    pub exact: Option<Mat3<Rational>>,
    pub float: Mat3<f64>,
}

/// Angles: radians, `Ndeg`, or multiples of pi such as `pi/3`, `-2pi/3`, `0.5pi`.
fn parse_angle(text: &str) -> Result<f64, String> {
    let t = text.trim().to_ascii_lowercase().replace(' ', "");
    if let Some(deg) = t.strip_suffix("deg") {
        return deg.parse::<f64>().map(f64::to_radians).map_err(|_| format!("bad angle {text:?}"));
    }
    if let Some(pos) = t.find("pi") {
        let (head, tail) = (&t[..pos], &t[pos + 2..]);
        let factor = match head.trim_end_matches('*') {
            "" | "+" => 1.0,
            "-" => -1.0,
            h => h.parse::<f64>().map_err(|_| format!("bad angle {text:?}"))?,
        };
        let divisor = match tail {
            "" => 1.0,
            d => d.strip_prefix('/').and_then(|d| d.parse::<f64>().ok()).ok_or_else(|| format!("bad angle {text:?}"))?,
        };
        return Ok(factor * PI / divisor);
    }
    t.parse::<f64>().map_err(|_| format!("bad angle {text:?}"))
}

fn split_numbers(text: &str) -> Vec<&str> {
    text.split(|ch: char| ch == ',' || ch == ';' || ch.is_whitespace()).filter(|s| !s.is_empty()).collect()
}

fn from_axis_angle(label: &str, axis: Vec3<f64>, angle: f64) -> Result<PSpec, String> {
    let float = rotation_from_axis_angle(&axis, angle).map_err(|e| e.to_string())?;
    let exact = snap_rational_rotation(&float, SNAP_MAX_DEN, DEFAULT_TOL);
    Ok(PSpec { label: label.to_string(), exact, float })
}

/// Accepts a named cube rotation (`E`, `z90`, `diag120:v1`, ...),
/// `diag60:vK` / `diag300:vK` (turns by ±π/3 about the line through `vK`),
/// `axis=x,y,z;angle=r`, or nine row-major entries.
pub fn parse_p(text: &str) -> Result<PSpec, String> {
    let t = text.trim();
    if let Some(q) = ExactRotation::named(t) {
        return Ok(PSpec { label: t.to_string(), exact: Some(q.to_mat()), float: q.to_mat() });
    }
    if let Some((kind, vertex)) = t.split_once(":v") {
        let sign = match kind {
            "diag60" => 1.0,
            "diag300" => -1.0,
            _ => return Err(format!("unknown rotation {t:?}")),
        };
        let k: usize = vertex.parse().map_err(|_| format!("unknown rotation {t:?}"))?;
        if !(1..=4).contains(&k) {
            return Err(format!("vertex index in {t:?} must be 1..4"));
        }
        let v = frt_core::geom::TETRA_VERTICES[k - 1].map(|x| x as f64);
        return from_axis_angle(t, Vec3(v), sign * PI / 3.0);
    }
    if t.starts_with("axis=") {
        let mut axis = None;
        let mut angle = None;
        for part in t.split(';') {
            let (key, value) = part.split_once('=').ok_or_else(|| format!("malformed rotation spec {t:?}"))?;
            match key.trim() {
                "axis" => {
                    let nums = split_numbers(value);
                    let parsed: Result<Vec<f64>, _> = nums.iter().map(|s| s.parse::<f64>()).collect();
                    match parsed {
                        Ok(v) if v.len() == 3 => axis = Some(Vec3([v[0], v[1], v[2]])),
                        _ => return Err(format!("axis in {t:?} must be three numbers")),
                    }
                }
                "angle" => angle = Some(parse_angle(value)?),
                other => return Err(format!("unknown key {other:?} in rotation spec")),
            }
        }
        let (Some(axis), Some(angle)) = (axis, angle) else {
            return Err(format!("rotation spec {t:?} needs both axis= and angle="));
        };
        return from_axis_angle(t, axis, angle);
    }
    let nums = split_numbers(t);
    if nums.len() != 9 {
        return Err(format!(
            "unknown rotation {t:?}; expected a name, axis=x,y,z;angle=r, or nine matrix entries"
        ));
    }
    let exact: Option<Vec<Rational>> =
        if t.contains(['e', 'E']) { None } else { nums.iter().map(|s| parse_rational(s)).collect() };
    let float_entries: Vec<f64> = match &exact {
        Some(q) => q.iter().map(Scalar::to_f64).collect(),
        None => nums
            .iter()
            .map(|s| s.parse::<f64>().map_err(|_| format!("bad matrix entry {s:?}")))
            .collect::<Result<_, _>>()?,
    };
    let float = Mat3::from_fn(|i, j| float_entries[3 * i + j]);
    let exact = exact.map(|q| Mat3::from_fn(|i, j| q[3 * i + j].clone())).filter(|m| is_special_orthogonal(m, 0.0));
    if exact.is_none() && !is_special_orthogonal(&float, DEFAULT_TOL) {
        return Err(format!("matrix {t:?} is not a rotation"));
    }
    Ok(PSpec { label: t.to_string(), exact, float })
}
