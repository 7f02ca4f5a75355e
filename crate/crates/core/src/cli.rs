//! Command-line front end and the verification suites behind `verify`.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::action::{
    stabilizer_in_model, verify_cocompact, verify_equivariance, verify_orbit_map, verify_properly_discontinuous,
    MappingClass,
};
use crate::complex::{
    build_ball, cayley_ball_psl2z, class_table, derive_class_labels, distance_to_class, distance_to_set, edge_line_graph,
    g1_neighbors, observed_pattern, project_fibers, radius_bound, t1_subgraph, truncate, verify_cayley_isomorphism,
    verify_fibers, verify_line_graph_structure, verify_pattern, verify_qi, verify_split_relations,
    verify_split_totality, ComplexBall, MAX_RADIUS_S04,
};
use crate::error::{Error, Result};
use crate::farey::{det_abs, dual_tree, farey_ball, MAX_FAREY_DEPTH};
use crate::fixtures::{representatives, seed, s04_representatives, s11_seed};
use crate::graph::{export, is_connected, rooted_isomorphism, Format};
use crate::matrix::Psl2;
use crate::measures::{extremal_rays_pairing, slope_pair, weight_histogram};
use crate::report::{Report, SuiteReport};
use crate::track::{class_key, enumerate_complete, mirror_pairing, ClassKey, SurfaceId, TrainTrack};

#[derive(Debug, Parser)]
#[command(name = "ttgeo", version, about = "Train track complexes of S(1,1) and S(0,4)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List complete track classes.
    Enumerate {
        #[arg(long)]
        surface: SurfaceId,
        #[arg(long)]
        up_to_mirror: bool,
        /// Exit nonzero unless exactly this many classes are found.
        #[arg(long)]
        expect: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a ball of the complex and store it as JSON or DOT.
    Ball {
        #[arg(long)]
        surface: SurfaceId,
        #[arg(long)]
        radius: usize,
        /// Track file to center on instead of the shipped seed.
        #[arg(long)]
        seed: Option<PathBuf>,
        #[arg(long, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export a graph.
    Export {
        object: ExportObject,
        #[arg(long, default_value_t = Format::Dot)]
        format: Format,
        /// Farey depth for farey, dual and linegraph.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = SurfaceId::S11)]
        surface: SurfaceId,
        /// Radius for ball, cayley and image.
        #[arg(long, default_value_t = 3)]
        radius: usize,
        #[arg(long)]
        seed: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite and print its JSON report.
    Verify {
        #[arg(long)]
        suite: Suite,
        /// Restrict to one surface where the suite covers both.
        #[arg(long)]
        surface: Option<SurfaceId>,
        /// Override the suite's main ball radius.
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a matrix `a,b;c,d` to a track file.
    Act {
        matrix: Psl2,
        #[arg(long)]
        seed: PathBuf,
        /// Klein tag as two bits, e.g. `01`.
        #[arg(long)]
        klein: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportObject {
    Farey,
    Dual,
    Linegraph,
    Ball,
    Cayley,
    Image,
}

/// One suite per acceptance criterion, in criterion order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Classes,
    Switches,
    Cycles,
    Cayley,
    Fibers,
    Qi,
    Farey,
    Table1,
    T1reach,
    Mcg,
    Splits,
    All,
}

impl Suite {
    pub const EACH: [Suite; 11] = [
        Suite::Classes,
        Suite::Switches,
        Suite::Cycles,
        Suite::Cayley,
        Suite::Fibers,
        Suite::Qi,
        Suite::Farey,
        Suite::Table1,
        Suite::T1reach,
        Suite::Mcg,
        Suite::Splits,
    ];

    pub fn name(self) -> String {
        self.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
    }
}

/// Options shared by the suites.
#[derive(Clone, Copy, Debug, Default)]
pub struct SuiteOptions {
    pub surface: Option<SurfaceId>,
    pub radius: Option<usize>,
}

impl SuiteOptions {
    fn surfaces(&self) -> Vec<SurfaceId> {
        match self.surface {
            Some(s) => vec![s],
            None => vec![SurfaceId::S11, SurfaceId::S04],
        }
    }

    fn radius(&self, default: usize) -> usize {
        self.radius.unwrap_or(default)
    }
}

pub fn run_suite(suite: Suite, opts: SuiteOptions) -> Result<SuiteReport> {
    crate::parallel::init();
    let reports = match suite {
        Suite::Classes => opts.surfaces().into_iter().map(suite_classes).collect(),
        Suite::Switches => opts.surfaces().into_iter().map(suite_switches).collect(),
        Suite::Cycles => opts.surfaces().into_iter().map(suite_cycles).collect::<Result<_>>()?,
        Suite::Cayley => suite_cayley(opts.radius(6))?,
        Suite::Fibers => suite_fibers(opts)?,
        Suite::Qi => suite_qi(opts)?,
        Suite::Farey => suite_farey(opts.radius(8))?,
        Suite::Table1 => vec![suite_table1(opts.radius(6))?],
        Suite::T1reach => suite_t1reach(opts.radius(8))?,
        Suite::Mcg => suite_mcg(opts)?,
        Suite::Splits => opts
            .surfaces()
            .into_iter()
            .map(|s| {
                let r = match s {
                    SurfaceId::S11 => 8,
                    SurfaceId::S04 => 6,
                };
                build_ball(&seed(s), opts.radius(r)).map(|b| verify_split_totality(&b))
            })
            .collect::<Result<_>>()?,
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::EACH {
                all.extend(run_suite(s, opts)?.reports);
            }
            all
        }
    };
    Ok(SuiteReport::new(suite.name(), reports))
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

fn suite_classes(surface: SurfaceId) -> Report {
    let mut report = Report::new(format!("classes-{surface}"), None);
    let (classes, secs) = timed(|| enumerate_complete(surface));
    let keys: BTreeSet<_> = classes.iter().map(TrainTrack::class_key).collect();
    let mirrors: BTreeSet<_> = keys
        .iter()
        .map(|k| {
            let p: Vec<usize> = k.0.iter().map(|&x| x as usize).collect();
            k.clone().min(class_key(&mirror_pairing(&p)))
        })
        .collect();
    let amphichiral = class_table(surface).iter().filter(|c| c.amphichiral).count();
    let want = match surface {
        SurfaceId::S11 => (1, 1, 1),
        SurfaceId::S04 => (13, 8, 3),
    };
    let got = (keys.len(), mirrors.len(), amphichiral);
    report.require(got == want, "class counts differ", json!({"classes": got.0, "up_to_mirror": got.1, "amphichiral": got.2}));
    report.require(secs < 60.0, "enumeration slower than 60 s", json!({"seconds": secs}));
    report.certified_pairs = keys.len() as u64;
    report.detail("classes", got.0);
    report.detail("up_to_mirror", got.1);
    report.detail("amphichiral", got.2);
    report.detail("seconds", secs);
    report
}

fn suite_switches(surface: SurfaceId) -> Report {
    let mut report = Report::new(format!("switches-{surface}"), None);
    let want = match surface {
        SurfaceId::S11 => (2, 3),
        SurfaceId::S04 => (4, 6),
    };
    let classes = enumerate_complete(surface);
    for t in &classes {
        let got = (t.switch_count(), t.branch_count());
        report.require(got == want, "wrong switch or branch count", json!({"class": t.class_key().to_string(), "switches": got.0, "branches": got.1}));
    }
    report.certified_pairs = classes.len() as u64;
    report.detail("switches", want.0);
    report.detail("branches", want.1);
    report
}

fn suite_cycles(surface: SurfaceId) -> Result<Report> {
    let mut report = Report::new(format!("cycles-{surface}"), None);
    let reps = representatives(surface);
    report.require(!reps.is_empty(), "no class representatives", json!(null));
    let mut rays_all = Vec::new();
    let mut dets = BTreeSet::new();
    for t in &reps {
        let rays = extremal_rays_pairing(t.pairing());
        report.require(rays.len() == 2, "not exactly two vertex cycles", json!({"class": t.class_key().to_string(), "rays": rays}));
        let max = rays.iter().flatten().copied().max().unwrap_or(0);
        report.require(max <= 2, "vertex cycle weight above 2", json!({"class": t.class_key().to_string(), "rays": rays}));
        let (a, b) = slope_pair(t)?;
        let d = det_abs(a, b);
        let allowed: &[i64] = match surface {
            SurfaceId::S11 => &[1],
            SurfaceId::S04 => &[1, 2],
        };
        report.require(allowed.contains(&d), "slope pair det out of range", json!({"class": t.class_key().to_string(), "det": d}));
        dets.insert(d);
        rays_all.extend(rays);
    }
    report.certified_pairs = reps.len() as u64;
    report.detail("weight_histogram", weight_histogram(&rays_all));
    report.detail("dets", dets);
    Ok(report)
}

fn relators_report() -> Report {
    let mut report = Report::new("relators", None);
    let (r, l) = (Psl2::r(), Psl2::l());
    let x = l * r.inverse() * l;
    let y = l * r.inverse();
    report.require(x * x == Psl2::IDENTITY, "(l r^-1 l)^2 is not +-I", json!({"value": (x * x).to_string()}));
    report.require(y.pow(3) == Psl2::IDENTITY, "(l r^-1)^3 is not +-I", json!({"value": y.pow(3).to_string()}));
    report
}

fn suite_cayley(radius: usize) -> Result<Vec<Report>> {
    let mut report = Report::new("cayley", Some(radius));
    let (built, secs) = timed(|| -> Result<_> {
        let ball = build_ball(&s11_seed(), radius)?;
        let (cayley, root) = cayley_ball_psl2z(radius);
        let iso = verify_cayley_isomorphism(&ball, &cayley, root);
        Ok((ball, cayley, iso))
    });
    let (ball, cayley, iso) = built?;
    report.require(iso.is_some(), "no rooted isomorphism", json!({"ball": ball.len(), "cayley": cayley.len()}));
    report.require(secs < 120.0, "slower than 120 s", json!({"seconds": secs}));
    report.certified_pairs = ball.graph.edge_count() as u64;
    report.detail("vertices", ball.len());
    report.detail("edges", ball.graph.edge_count());
    report.detail("sphere_sizes", ball.sphere_sizes());
    report.detail("seconds", secs);
    Ok(vec![report, relators_report()])
}

/// The fibre constant on `S(0,4)`: the central fibre's certified diameter
/// in a ball of radius `radius`, if the fibre check passes.
pub fn s04_fiber_constant(radius: usize) -> Result<(Option<usize>, Report)> {
    let ball = build_ball(&seed(SurfaceId::S04), radius)?;
    let report = verify_fibers(&ball, None)?;
    let a = report.details.get("fiber_diameter").and_then(|d| d.as_u64()).filter(|_| report.passed);
    Ok((a.map(|a| a as usize), report))
}

fn suite_fibers(opts: SuiteOptions) -> Result<Vec<Report>> {
    let mut out = Vec::new();
    for s in opts.surfaces() {
        match s {
            SurfaceId::S11 => {
                let ball = build_ball(&s11_seed(), opts.radius(8))?;
                out.push(verify_fibers(&ball, Some((2, 3)))?);
            }
            SurfaceId::S04 => out.push(s04_fiber_constant(opts.radius(8))?.1),
        }
    }
    Ok(out)
}

fn suite_qi(opts: SuiteOptions) -> Result<Vec<Report>> {
    let mut out = Vec::new();
    for s in opts.surfaces() {
        match s {
            SurfaceId::S11 => {
                let ball = build_ball(&s11_seed(), opts.radius(8))?;
                out.push(verify_qi(&ball, 4, 3, &g1_neighbors));
            }
            SurfaceId::S04 => {
                let (a, fib) = s04_fiber_constant(8)?;
                let Some(a) = a else {
                    out.push(fib);
                    continue;
                };
                let wide = build_ball(&seed(s), MAX_RADIUS_S04)?;
                let pattern = observed_pattern(&wide)?;
                out.push(verify_pattern(&wide, &pattern));
                let ball = build_ball(&seed(s), opts.radius(6))?;
                let nbrs = move |e| pattern.neighbors(e);
                let mut r = verify_qi(&ball, a + 1, a, &nbrs);
                r.detail("a", a);
                out.push(r);
            }
        }
    }
    Ok(out)
}

fn suite_farey(radius: usize) -> Result<Vec<Report>> {
    let mut dual = Report::new("farey-dual", None);
    for d in 1..=6 {
        let f = farey_ball(d)?;
        let t = dual_tree(&f);
        let acyclic = is_connected(&t) && t.edge_count() + 1 == t.len();
        dual.require(acyclic, "dual graph is not a tree", json!({"depth": d}));
        let max = (0..t.len()).map(|v| t.degree(v)).max().unwrap_or(0);
        dual.require(max <= 3, "dual degree above 3", json!({"depth": d}));
    }
    let ball = build_ball(&s11_seed(), radius)?;
    Ok(vec![dual, verify_line_graph_structure(&ball)])
}

fn suite_table1(radius: usize) -> Result<Report> {
    let labels = derive_class_labels(&s04_representatives())?;
    let ball = build_ball(&seed(SurfaceId::S04), radius)?;
    let mut r = verify_split_relations(&ball, &labels);
    r.detail(
        "labels",
        labels.labels.iter().map(|(k, l)| (k.to_string(), *l)).collect::<BTreeMap<_, _>>(),
    );
    Ok(r)
}

fn suite_t1reach(radius: usize) -> Result<Vec<Report>> {
    let labels = derive_class_labels(&s04_representatives())?;
    let one = labels.class_one();
    let ball = build_ball(&seed(SurfaceId::S04), radius)?;
    let mut reach = verify_cocompact(&ball, Some(&one));
    reach.check = "t1-reach".into();
    let table: BTreeMap<ClassKey, Option<usize>> = s04_representatives()
        .iter()
        .map(|t| (t.class_key(), distance_to_class(t, &one, 8)))
        .collect();
    let per_class: Vec<_> = table
        .iter()
        .map(|(k, d)| json!({"class": k.to_string(), "label": labels.label(k), "distance": d}))
        .collect();
    for c in &per_class {
        reach.require(c["distance"].as_u64().is_some_and(|d| d <= 5), "class farther than 5 from class (1)", c.clone());
    }
    let in_ball = distance_to_set(&ball, |v| ball.tracks[v].class_key() == one);
    for v in 0..ball.len() {
        let d = table.get(&ball.tracks[v].class_key()).copied().flatten();
        if ball.depth[v] + 5 <= ball.radius {
            reach.require(in_ball[v] == d, "ball distance to class (1) differs from the class table", json!({"vertex": ball.keys[v].to_string()}));
        }
    }
    for v in 0..ball.len() {
        let d = table.get(&ball.tracks[v].class_key()).copied().flatten();
        reach.require(d.is_some_and(|d| d <= 5), "vertex farther than 5 from class (1)", json!({"vertex": ball.keys[v].to_string()}));
    }
    reach.certified_pairs = ball.len() as u64;
    reach.detail("per_class", per_class);

    let mut iso = Report::new("t1-structure", Some(radius));
    let t1 = t1_subgraph(&ball, &one)?;
    let r = radius / 2;
    match t1.index_of(&0) {
        None => iso.violation("center is not class (1)", json!(null)),
        Some(root) => {
            let (a, ra) = truncate(&t1, root, r);
            let s11 = build_ball(&s11_seed(), r)?;
            let ok = rooted_isomorphism(&a, ra, &s11.graph, 0).is_some();
            iso.require(ok, "T1 ball not isomorphic to the S(1,1) ball", json!({"r": r, "t1": a.len(), "s11": s11.len()}));
            iso.certified_pairs = a.edge_count() as u64;
            iso.detail("t1_radius", r);
            iso.detail("vertices", a.len());
        }
    }
    Ok(vec![reach, iso])
}

fn suite_mcg(opts: SuiteOptions) -> Result<Vec<Report>> {
    let mut out = Vec::new();
    for s in opts.surfaces() {
        let t = seed(s);
        let stab = stabilizer_in_model(s, &t, 8);
        let mut r = Report::new(format!("stabilizer-{s}"), None);
        let want = match s {
            SurfaceId::S11 => 1,
            SurfaceId::S04 => 4,
        };
        r.require(stab.order() == want, "stabilizer order", json!({"order": stab.order()}));
        r.require(stab.is_elementary_abelian_2(), "stabilizer is not (Z/2)^k", json!(null));
        r.detail("elements", stab.elements.iter().map(ToString::to_string).collect::<Vec<_>>());
        r.detail("table", &stab.table);
        out.push(r);

        let radius = opts.radius(6);
        let ball = build_ball(&t, radius)?;
        for k in 0..=3.min(radius - 1) {
            out.push(verify_properly_discontinuous(&ball, k, 20, 4));
        }
        let one = match s {
            SurfaceId::S11 => None,
            SurfaceId::S04 => Some(derive_class_labels(&s04_representatives())?.class_one()),
        };
        let mut cob = verify_cocompact(&ball, one.as_ref());
        if s == SurfaceId::S04 {
            cob.details["max_distance_to_t1"] = json!(null);
        }
        out.push(cob);
        out.push(verify_equivariance(&ball, &Psl2::generators(), 2));
        if s == SurfaceId::S11 {
            let (c, root) = cayley_ball_psl2z(radius);
            out.push(verify_orbit_map(&ball, &c, root));
        }
    }
    Ok(out)
}

fn read_track(path: &PathBuf) -> Result<TrainTrack> {
    let s = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    TrainTrack::from_json_str(&s)
}

fn center(surface: SurfaceId, path: &Option<PathBuf>) -> Result<TrainTrack> {
    match path {
        Some(p) => {
            let t = read_track(p)?;
            if t.surface() != surface {
                return Err(Error::WrongSurface { expected: surface.name() });
            }
            Ok(t)
        }
        None => Ok(seed(surface)),
    }
}

fn check_depth(depth: usize) -> Result<()> {
    if depth > MAX_FAREY_DEPTH {
        return Err(Error::DepthBound { depth, bound: MAX_FAREY_DEPTH });
    }
    Ok(())
}

fn check_radius(surface: SurfaceId, radius: usize) -> Result<()> {
    let bound = radius_bound(surface);
    if radius > bound {
        return Err(Error::RadiusBound { radius, bound, surface: surface.name() });
    }
    Ok(())
}

fn ball_output(ball: &ComplexBall, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&ball.to_json()).expect("ball json") + "\n"),
        Format::Dot => {
            let (g, ann) = ball.labelled();
            export(&g, Format::Dot, Some(&ann))
        }
    }
}

/// Runs one command and returns its output text and exit code.
pub fn execute(cli: Cli) -> Result<(String, i32, Option<PathBuf>)> {
    crate::parallel::init();
    match cli.command {
        Command::Enumerate { surface, up_to_mirror, expect, out } => {
            let mut table = class_table(surface);
            if up_to_mirror {
                let keep: BTreeSet<String> = table.iter().map(|c| c.key.clone().min(c.mirror.clone())).collect();
                table.retain(|c| keep.contains(&c.key));
            }
            let code = match expect {
                Some(n) if n != table.len() => 1,
                _ => 0,
            };
            let doc = json!({"surface": surface, "up_to_mirror": up_to_mirror, "count": table.len(), "classes": table});
            Ok((serde_json::to_string_pretty(&doc).expect("json") + "\n", code, out))
        }
        Command::Ball { surface, radius, seed, format, out } => {
            check_radius(surface, radius)?;
            let ball = build_ball(&center(surface, &seed)?, radius)?;
            Ok((ball_output(&ball, format)?, 0, out))
        }
        Command::Export { object, format, depth, surface, radius, seed, out } => {
            let text = match object {
                ExportObject::Farey => {
                    check_depth(depth)?;
                    export(&farey_ball(depth)?.to_graph(), format, None)?
                }
                ExportObject::Dual => {
                    check_depth(depth)?;
                    export(&dual_tree(&farey_ball(depth)?), format, None)?
                }
                ExportObject::Linegraph => {
                    check_depth(depth)?;
                    export(&edge_line_graph(depth)?, format, None)?
                }
                ExportObject::Ball => {
                    check_radius(surface, radius)?;
                    let ball = build_ball(&center(surface, &seed)?, radius)?;
                    let (g, ann) = ball.labelled();
                    export(&g, format, Some(&ann))?
                }
                ExportObject::Cayley => {
                    check_radius(SurfaceId::S11, radius)?;
                    export(&cayley_ball_psl2z(radius).0, format, None)?
                }
                ExportObject::Image => {
                    check_radius(surface, radius)?;
                    let ball = build_ball(&center(surface, &seed)?, radius)?;
                    export(&project_fibers(&ball).1, format, None)?
                }
            };
            Ok((text, 0, out))
        }
        Command::Verify { suite, surface, radius, out } => {
            let report = run_suite(suite, SuiteOptions { surface, radius })?;
            let code = if report.passed { 0 } else { 1 };
            Ok((serde_json::to_string_pretty(&report).expect("json") + "\n", code, out))
        }
        Command::Act { matrix, seed, klein, out } => {
            let t = read_track(&seed)?;
            let tag = match klein.as_deref() {
                None => [false, false],
                Some(s) if s.len() == 2 && s.chars().all(|c| c == '0' || c == '1') => {
                    let b: Vec<bool> = s.chars().map(|c| c == '1').collect();
                    [b[0], b[1]]
                }
                Some(s) => return Err(Error::Parse(format!("klein tag {s:?}, expected two bits"))),
            };
            if tag != [false, false] && t.surface() != SurfaceId::S04 {
                return Err(Error::WrongSurface { expected: "s04" });
            }
            let g = MappingClass { matrix, klein: tag };
            Ok((g.act_on_track(&t).to_json_string() + "\n", 0, out))
        }
    }
}

/// Entry point for the binary: parses `args`, runs, writes output, returns the exit code.
pub fn main_with_args(args: impl IntoIterator<Item = OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok((text, code, out)) => {
            match out {
                Some(p) => {
                    if let Err(e) = std::fs::write(&p, text) {
                        eprintln!("error: {}: {e}", p.display());
                        return 1;
                    }
                }
                None => print!("{text}"),
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_commands() {
        let c = Cli::try_parse_from(["ttgeo", "verify", "--suite", "cayley", "--radius", "6"]).unwrap();
        assert!(matches!(c.command, Command::Verify { suite: Suite::Cayley, radius: Some(6), .. }));
        let c = Cli::try_parse_from(["ttgeo", "act", "1,1;0,1", "--seed", "x.json"]).unwrap();
        assert!(matches!(c.command, Command::Act { .. }));
        assert!(Cli::try_parse_from(["ttgeo", "verify", "--suite", "nope"]).is_err());
    }

    #[test]
    fn suite_names_are_distinct() {
        let names: BTreeSet<String> = Suite::EACH.iter().map(|s| s.name()).collect();
        assert_eq!(names.len(), 11);
    }
}
