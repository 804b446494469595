use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use frt_core::analysis::{
    analytic_hull, certificate_search, convex_hull3, hata_graph, hausdorff_distance, separation_check,
    similarity_dimension, symmetry_check, verify_certificate, PairVerdict, SearchLimits, SymmetryVerdict,
};
use frt_core::cube::{
    cover_coverage, exact_cover, ic_predicate, raster_cover, raster_coverage, verify_ic, Axis, IcMode, Raster,
};
use frt_core::export::{write_csv, write_dot, write_obj, write_pgm, write_ply};
use frt_core::frt::generate_cloud;
use frt_core::rotgroup::hexahedral_group;
use frt_core::{Address, FrtError, FrtParams, Mat3, Rational, Scalar};

use crate::spec::{parse_c, parse_p, CSpec, PSpec};
use crate::{
    CliError, CliResult, CloudFormat, Command, Expectation, ParamArgs, ProjectSource, ReportArgs, SearchArgs,
};

enum AnyParams {
    Exact(FrtParams<Rational>),
    Float(FrtParams<f64>),
}

macro_rules! dispatch {
    ($any:expr, |$p:ident| $body:expr) => {
        match $any {
            AnyParams::Exact($p) => $body,
            AnyParams::Float($p) => $body,
        }
    };
}

const FLOAT_NOTE: &str = "intersection certification is disabled";

fn resolve(args: &ParamArgs, err: &mut dyn Write) -> CliResult<AnyParams> {
    let c = parse_c(&args.c).map_err(CliError::Usage)?;
    let p = parse_p(&args.p).map_err(CliError::Usage)?;
    if !(args.tol > 0.0 && args.tol < 0.5) {
        return Err(CliError::Usage(format!("--tol {} must lie in (0, 0.5)", args.tol)));
    }
    if let (CSpec::Exact(q), Some(m), false) = (&c, &p.exact, args.float) {
        return Ok(AnyParams::Exact(FrtParams::with_tol(q.clone(), m.clone(), args.tol)?));
    }
    let reason = if args.float {
        "float mode requested".to_string()
    } else if let CSpec::Decimal(_) = c {
        format!("decimal c = {} selects float mode", args.c.trim())
    } else {
        "P has no exact rational form; using float mode".to_string()
    };
    writeln!(err, "warning: {reason}; {FLOAT_NOTE}")?;
    Ok(AnyParams::Float(FrtParams::with_tol(c.to_f64(), p.float.clone(), args.tol)?))
}

fn params_json<S: Scalar>(p: &FrtParams<S>, args: &ParamArgs) -> Value {
    let exact = S::EXACT.then(|| {
        p.p().0.iter().map(|row| row.iter().map(|x| x.to_rational().map(|q| q.to_string())).collect::<Vec<_>>()).collect::<Vec<_>>()
    });
    json!({
        "c": args.c.trim(),
        "c_value": p.c_f64(),
        "mode": p.mode().to_string(),
        "p_spec": args.p.trim(),
        "p": p.p().to_f64().0,
        "p_exact": exact,
        "tol": p.tol(),
    })
}

fn emit(out: &mut dyn Write, rep: &ReportArgs, value: &Value, text: &str) -> CliResult<()> {
    let pretty = serde_json::to_string_pretty(value)?;
    if let Some(path) = &rep.report {
        write_file(path, |w| writeln!(w, "{pretty}"))?;
    }
    if rep.json {
        writeln!(out, "{pretty}")?;
    } else {
        write!(out, "{text}")?;
    }
    Ok(())
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut w = BufWriter::new(File::create(path)?);
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

fn to_value<T: Serialize>(v: &T) -> CliResult<Value> {
    Ok(serde_json::to_value(v)?)
}

fn path_string(p: &Path) -> String {
    p.display().to_string()
}

pub(crate) fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Info { params, report } => {
            let any = resolve(&params, err)?;
            dispatch!(any, |p| info(&p, &params, &report, out))
        }
        Command::Cloud { params, depth, out: path, format, report } => {
            let any = resolve(&params, err)?;
            let format = format.unwrap_or(match path.extension().and_then(|e| e.to_str()) {
                Some(ext) if ext.eq_ignore_ascii_case("csv") => CloudFormat::Csv,
                _ => CloudFormat::Ply,
            });
            dispatch!(any, |p| cloud(&p, &params, depth, &path, format, &report, out))
        }
        Command::Project { params, depth, resolution, out_dir, source, binary, report } => {
            let any = resolve(&params, err)?;
            let job = ProjectJob { depth, resolution, out_dir, source, binary };
            dispatch!(any, |p| project(&p, &params, &job, &report, out))
        }
        Command::CheckIc { params, depth, raster, resolution, expect, report } => {
            let any = resolve(&params, err)?;
            dispatch!(any, |p| check_ic(&p, &params, depth, raster, resolution, expect, &report, out))
        }
        Command::Hull { params, depth, out: obj, analytic_out, report } => {
            let any = resolve(&params, err)?;
            dispatch!(any, |p| hull(&p, &params, depth, obj.as_deref(), analytic_out.as_deref(), &report, out))
        }
        Command::Sym { params, depth, q, report } => {
            let any = resolve(&params, err)?;
            let q = q.map(|s| parse_p(&s)).transpose().map_err(CliError::Usage)?;
            match (any, q) {
                (AnyParams::Exact(p), Some(spec)) if spec.exact.is_none() => {
                    writeln!(err, "warning: Q has no exact rational form; comparing in float mode")?;
                    let targets = vec![Target { label: spec.label.clone(), tetrahedral: None, q: spec.float.clone() }];
                    sym(&p.to_f64(), &params, depth, targets, true, &report, out)
                }
                (any, q) => dispatch!(any, |p| {
                    let single = q.is_some();
                    let targets = match &q {
                        Some(spec) => vec![target_from_spec(spec)],
                        None => hexahedral_group()
                            .iter()
                            .map(|g| Target { label: g.to_string(), tetrahedral: Some(g.is_tetrahedral()), q: g.to_mat() })
                            .collect(),
                    };
                    sym(&p, &params, depth, targets, single, &report, out)
                }),
            }
        }
        Command::Connect { params, search, out: dot, report } => {
            let any = resolve(&params, err)?;
            let limits = limits(&search);
            dispatch!(any, |p| connect(&p, &params, &limits, dot.as_deref(), &report, out))
        }
        Command::Certify { params, first, second, pair, search, report } => {
            let any = resolve(&params, err)?;
            let job = match (first, second, pair) {
                (Some(a), Some(b), None) => {
                    let parse = |s: &str| s.parse::<Address>().map_err(|e| CliError::Usage(format!("address {s:?}: {e}")));
                    CertifyJob::Verify(parse(&a)?, parse(&b)?)
                }
                (None, None, Some(pair)) => CertifyJob::Search(parse_pair(&pair)?, limits(&search)),
                _ => return Err(CliError::Usage("give either --first and --second, or --pair i,j".into())),
            };
            dispatch!(any, |p| certify(&p, &params, &job, &report, out))
        }
    }
}

fn limits(a: &SearchArgs) -> SearchLimits {
    SearchLimits { max_depth: a.max_depth, max_period: a.max_period, max_nodes: a.max_nodes }
}

fn parse_pair(text: &str) -> CliResult<(u8, u8)> {
    let parts: Vec<&str> = text.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
    let bad = || CliError::Usage(format!("pair {text:?} must be two distinct letters i,j in 1..4"));
    let [i, j] = parts.as_slice() else { return Err(bad()) };
    let (i, j): (u8, u8) = (i.parse().map_err(|_| bad())?, j.parse().map_err(|_| bad())?);
    if !(1..=4).contains(&i) || !(1..=4).contains(&j) || i == j {
        return Err(bad());
    }
    Ok((i.min(j), i.max(j)))
}

fn info<S: Scalar>(p: &FrtParams<S>, args: &ParamArgs, rep: &ReportArgs, out: &mut dyn Write) -> CliResult<i32> {
    let c = p.c_f64();
    let class = p.classify();
    let dimension = similarity_dimension(c)?;
    let separation = separation_check(p.c())?;
    let ic = ic_predicate(p, p.tol());
    let exact_rotation = p.exact_rotation().map(|q| q.to_string());
    let value = json!({
        "command": "info",
        "params": params_json(p, args),
        "class": class,
        "exact_rotation": exact_rotation,
        "about_z_axis": p.is_about_z_axis(),
        "dimension": dimension,
        "separation": separation,
        "ic_predicate": ic,
        "bounding_radius": 3f64.sqrt() / (1.0 - c),
        "piece_radius": c * 3f64.sqrt() / (1.0 - c),
    });
    let text = format!(
        "c = {} ({} mode)\nP = {}\nclass = {class}\ndimension = {dimension}\nseparation margin = {}{} ({})\nic = {ic}\n",
        args.c.trim(),
        p.mode(),
        args.p.trim(),
        separation.margin,
        separation.margin_exact.as_ref().map(|m| format!(" = {m}")).unwrap_or_default(),
        if separation.disjoint { "pieces disjoint" } else { "balls overlap" },
    );
    emit(out, rep, &value, &text)?;
    Ok(0)
}

fn cloud<S: Scalar>(
    p: &FrtParams<S>,
    args: &ParamArgs,
    depth: u32,
    path: &Path,
    format: CloudFormat,
    rep: &ReportArgs,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let cloud = generate_cloud(p, depth)?;
    let pts = cloud.to_f64_points();
    match format {
        CloudFormat::Ply => write_file(path, |w| write_ply(w, &pts))?,
        CloudFormat::Csv => write_file(path, |w| write_csv(w, &pts))?,
    }
    let fmt = match format {
        CloudFormat::Ply => "ply",
        CloudFormat::Csv => "csv",
    };
    let value = json!({
        "command": "cloud",
        "params": params_json(p, args),
        "depth": depth,
        "points": pts.len(),
        "cell_diameter": cloud.cell_diameter,
        "format": fmt,
        "output": path_string(path),
    });
    let text = format!(
        "wrote {} points (depth {depth}, cell diameter {}) to {}\n",
        pts.len(),
        cloud.cell_diameter,
        path.display()
    );
    emit(out, rep, &value, &text)?;
    Ok(0)
}

struct ProjectJob {
    depth: u32,
    resolution: u32,
    out_dir: PathBuf,
    source: ProjectSource,
    binary: bool,
}

fn project<S: Scalar>(
    p: &FrtParams<S>,
    args: &ParamArgs,
    job: &ProjectJob,
    rep: &ReportArgs,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let (coverage, rasters, source) = match job.source {
        ProjectSource::Cloud => {
            let cloud = generate_cloud(p, job.depth)?;
            let (report, rasters) = raster_coverage(&cloud, job.resolution)?;
            (report, rasters, "cloud")
        }
        ProjectSource::Cover => {
            let cover = exact_cover(p, job.depth)?;
            let rasters: Vec<Raster> =
                Axis::ALL.iter().map(|&a| raster_cover(&cover, a, job.resolution)).collect::<Result<_, FrtError>>()?;
            (cover_coverage(&cover), rasters, "cover")
        }
    };
    fs::create_dir_all(&job.out_dir)?;
    let mut files = Vec::new();
    for (axis, raster) in Axis::ALL.iter().zip(&rasters) {
        let path = job.out_dir.join(format!("face_{}.pgm", axis.name()));
        write_file(&path, |w| write_pgm(w, raster, job.binary))?;
        files.push(path_string(&path));
    }
    let raster_fractions: Vec<f64> = rasters.iter().map(Raster::fraction).collect();
    let value = json!({
        "command": "project",
        "params": params_json(p, args),
        "depth": job.depth,
        "resolution": job.resolution,
        "source": source,
        "coverage": coverage,
        "raster_fractions": raster_fractions,
        "files": files,
    });
    let mut text = String::new();
    for (f, r) in coverage.faces.iter().zip(&raster_fractions) {
        let exact = f.exact.as_ref().map(|e| format!(" (exact {e})")).unwrap_or_default();
        text += &format!("face {:?}: coverage {}{exact}, raster {r}\n", f.axis, f.fraction);
    }
    text += &format!("wrote {}\n", files.join(", "));
    emit(out, rep, &value, &text)?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn check_ic<S: Scalar>(
    p: &FrtParams<S>,
    args: &ParamArgs,
    depth: u32,
    raster: bool,
    resolution: u32,
    expect: Option<Expectation>,
    rep: &ReportArgs,
    out: &mut dyn Write,
) -> CliResult<i32> {
    if depth == 0 {
        return Err(CliError::Usage("--depth must be at least 1".into()));
    }
    let mode = if raster || p.exact_rotation().is_none() { IcMode::Raster(resolution) } else { IcMode::Exact };
    let report = verify_ic(p, depth, mode)?;
    let series = report.series();
    let deficit = series.last().is_some_and(|&f| f < 1.0 - 1e-12);
    let strictly_decreasing = series.windows(2).all(|w| w[1] < w[0]);
    let within_decay_bound: Vec<bool> =
        series.iter().zip(&report.decay_bound).map(|(f, b)| *f <= b + 1e-12).collect();
    let met = expect.map(|e| match e {
        Expectation::Ic => report.predicate && report.witnessed_ic,
        Expectation::NotIc => !report.predicate && !report.witnessed_ic && deficit,
    });
    let value = json!({
        "command": "check-ic",
        "params": params_json(p, args),
        "depth": depth,
        "predicate": report.predicate,
        "witnessed_ic": report.witnessed_ic,
        "nested": report.nested,
        "series": series,
        "decay_bound": report.decay_bound,
        "within_decay_bound": within_decay_bound,
        "strictly_decreasing": strictly_decreasing,
        "deficit": deficit,
        "expect": expect.map(|e| match e { Expectation::Ic => "ic", Expectation::NotIc => "not-ic" }),
        "expectation_met": met,
        "levels": to_value(&report.levels)?,
        "ball_cover": to_value(&report.ball_cover)?,
    });
    let mut text = format!(
        "predicate (c >= 1/2 and P a cube rotation): {}\nwitnessed by exact covers: {}\n",
        report.predicate, report.witnessed_ic
    );
    for (n, level) in report.levels.iter().enumerate() {
        text += &format!(
            "depth {}: {:?} coverage min {} max {}, (4c^2)^n = {}\n",
            n + 1,
            level.method,
            level.min_fraction(),
            level.max_fraction(),
            report.decay_bound[n]
        );
    }
    if !report.ball_cover.is_empty() {
        let fmt: Vec<String> = series.iter().map(f64::to_string).collect();
        text += &format!("ball-cover series: {}\n", fmt.join(", "));
    }
    if let Some(met) = met {
        text += &format!("expectation {}: {}\n", if met { "met" } else { "NOT met" }, value["expect"].as_str().unwrap_or(""));
    }
    emit(out, rep, &value, &text)?;
    Ok(if met == Some(false) { 1 } else { 0 })
}

fn hull<S: Scalar>(
    p: &FrtParams<S>,
    args: &ParamArgs,
    depth: u32,
    obj: Option<&Path>,
    analytic_obj: Option<&Path>,
    rep: &ReportArgs,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let cloud = generate_cloud(p, depth)?;
    let tol = p.tol();
    let hull = convex_hull3(&cloud.points, tol)?;
    if let Some(path) = obj {
        write_file(path, |w| write_obj(w, &hull))?;
    }
    let analytic = match analytic_hull(p) {
        Ok(h) => Ok(h),
        Err(FrtError::Unsupported(reason)) => Err(reason),
        Err(e) => return Err(e.into()),
    };
    let mut comparison = Value::Null;
    let mut ok = true;
    let mut text = format!(
        "cloud hull (depth {depth}, {} points): {} vertices, {} faces\n",
        cloud.len(),
        hull.vertices.len(),
        hull.faces.len()
    );
    match &analytic {
        Ok(a) => {
            if let Some(path) = analytic_obj {
                write_file(path, |w| write_obj(w, a))?;
            }
            let hausdorff = hausdorff_distance(&hull.vertices_f64(), &a.vertices_f64())?;
            let inside = cloud.points.iter().all(|x| a.contains(x, tol));
            let within = hausdorff <= cloud.cell_diameter + 1e-12;
            ok = within && inside;
            comparison = json!({
                "vertex_count": a.vertices.len(),
                "face_count": a.faces.len(),
                "vertices": a.vertices_f64().iter().map(|v| v.0).collect::<Vec<_>>(),
                "hausdorff": hausdorff,
                "bound": cloud.cell_diameter,
                "within_bound": within,
                "cloud_inside": inside,
            });
            text += &format!(
                "analytic hull: {} vertices; Hausdorff distance {hausdorff} (bound {}); cloud inside: {inside}\n",
                a.vertices.len(),
                cloud.cell_diameter
            );
        }
        Err(reason) => text += &format!("analytic hull unavailable: {reason}\n"),
    }
    let value = json!({
        "command": "hull",
        "params": params_json(p, args),
        "depth": depth,
        "hull": {
            "kind": hull.kind,
            "vertex_count": hull.vertices.len(),
            "face_count": hull.faces.len(),
            "vertices": hull.vertices_f64().iter().map(|v| v.0).collect::<Vec<_>>(),
        },
        "analytic": comparison,
        "analytic_unavailable": analytic.as_ref().err(),
        "obj": obj.map(path_string),
        "analytic_obj": analytic_obj.filter(|_| analytic.is_ok()).map(path_string),
    });
    emit(out, rep, &value, &text)?;
    Ok(if ok { 0 } else { 1 })
}

struct Target<S> {
    label: String,
    tetrahedral: Option<bool>,
    q: Mat3<S>,
}

fn target_from_spec<S: Scalar>(spec: &PSpec) -> Target<S> {
    let q = match &spec.exact {
        Some(m) => m.map(S::from_rational),
        // only reached in float mode, where the float matrix is used as is
        None => spec.float.map(|x| S::from_rational(&rational_of(*x))),
    };
    Target { label: spec.label.clone(), tetrahedral: None, q }
}

fn rational_of(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_default()
}

#[allow(clippy::too_many_arguments)]
fn sym<S: Scalar>(
    p: &FrtParams<S>,
    args: &ParamArgs,
    depth: u32,
    targets: Vec<Target<S>>,
    single: bool,
    rep: &ReportArgs,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let mut results = Vec::new();
    let mut text = String::new();
    let mut refuted_any = false;
    let mut threshold = 0.0;
    for t in &targets {
        let r = symmetry_check(p, &t.q, depth)?;
        threshold = r.threshold;
        refuted_any |= r.verdict == SymmetryVerdict::Refuted;
        text += &format!("{:<12} {:?} (d_H = {})\n", t.label, r.verdict, r.hausdorff);
        results.push(json!({
            "q": t.label,
            "tetrahedral": t.tetrahedral,
            "verdict": r.verdict,
            "hausdorff": r.hausdorff,
        }));
    }
    let symmetric = results.iter().filter(|r| r["verdict"] != json!(SymmetryVerdict::Refuted)).count();
    text += &format!("{symmetric} of {} rotations not refuted (threshold {threshold})\n", targets.len());
    let value = json!({
        "command": "sym",
        "params": params_json(p, args),
        "depth": depth,
        "threshold": threshold,
        "results": results,
        "not_refuted": symmetric,
    });
    emit(out, rep, &value, &text)?;
    Ok(if single && refuted_any { 1 } else { 0 })
}

fn verdict_text(v: &PairVerdict) -> String {
    match v {
        PairVerdict::CertifiedIntersect { certificate } => format!(
            "CertifiedIntersect {} ~ {} ({:?}, residual {})",
            certificate.first, certificate.second, certificate.witness, certificate.residual
        ),
        PairVerdict::CertifiedDisjoint { evidence } => format!("CertifiedDisjoint ({})", serde_json::to_string(evidence).unwrap_or_default()),
        PairVerdict::Unknown { reason } => format!("Unknown ({reason})"),
    }
}

fn connect<S: Scalar>(
    p: &FrtParams<S>,
    args: &ParamArgs,
    limits: &SearchLimits,
    dot: Option<&Path>,
    rep: &ReportArgs,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let graph = hata_graph(p, limits)?;
    if let Some(path) = dot {
        write_file(path, |w| write_dot(w, &graph))?;
    }
    let isolated: Vec<u8> = (1..=4u8)
        .filter(|&k| graph.pairs.iter().filter(|r| r.pair.0 == k || r.pair.1 == k).all(|r| r.verdict.is_disjoint()))
        .collect();
    let value = json!({
        "command": "connect",
        "params": params_json(p, args),
        "limits": limits,
        "verdict": graph.verdict,
        "fast_paths": graph.fast_paths,
        "pairs": graph.pairs,
        "isolated": isolated,
        "dot": dot.map(path_string),
    });
    let mut text = format!("verdict: {:?}\n", graph.verdict);
    if !graph.fast_paths.is_empty() {
        let names: Vec<String> = graph.fast_paths.iter().map(|f| format!("{f:?}")).collect();
        text += &format!("fast paths: {}\n", names.join(", "));
    }
    for r in &graph.pairs {
        text += &format!("({},{}): {}\n", r.pair.0, r.pair.1, verdict_text(&r.verdict));
    }
    if !isolated.is_empty() {
        text += &format!("isolated pieces: {isolated:?}\n");
    }
    emit(out, rep, &value, &text)?;
    Ok(0)
}

enum CertifyJob {
    Verify(Address, Address),
    Search((u8, u8), SearchLimits),
}

fn certify<S: Scalar>(
    p: &FrtParams<S>,
    args: &ParamArgs,
    job: &CertifyJob,
    rep: &ReportArgs,
    out: &mut dyn Write,
) -> CliResult<i32> {
    match job {
        CertifyJob::Verify(a, b) => {
            let v = verify_certificate(p, a, b)?;
            let value = json!({
                "command": "certify",
                "params": params_json(p, args),
                "first": a,
                "second": b,
                "verification": v,
            });
            let text = format!(
                "p({a}) = {:?}\np({b}) = {:?}\ndistance {} (allowed {}), exact match: {}\nvalid: {}\n",
                v.first_point, v.second_point, v.distance, v.allowed, v.exact_match, v.valid
            );
            emit(out, rep, &value, &text)?;
            Ok(if v.valid { 0 } else { 1 })
        }
        CertifyJob::Search(pair, limits) => {
            let r = certificate_search(p, *pair, limits)?;
            let value = json!({
                "command": "certify",
                "params": params_json(p, args),
                "limits": limits,
                "search": r,
            });
            let text = format!("({},{}): {} after {} nodes\n", pair.0, pair.1, verdict_text(&r.verdict), r.nodes);
            emit(out, rep, &value, &text)?;
            Ok(0)
        }
    }
}
