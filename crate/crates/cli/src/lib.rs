//! Front end for `fanifold/1` files: validation, chart censuses, skeleta,
//! mirror dictionaries and fan operations.

pub mod file;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fanifold_core::bmodel::{self, ToricDiagram};
use fanifold_core::fan::{self, Fan};
use fanifold_core::fanifold::{Fanifold, FanifoldError};
use fanifold_core::{mirror, skeleton};
use file::{FanifoldFile, FileError};
use serde::Serialize;
use serde_json::json;
use std::collections::BTreeSet;
use std::fmt::Write;
use std::path::PathBuf;

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Parser, Debug)]
#[command(name = "fanifold", version, about = "Combinatorics of fanifolds")]
struct Cli {
    /// Seed for randomized checks; every current command is deterministic.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structural checks and the shape of the exit diagram.
    Validate(Common),
    /// Glued toric charts and their section censuses.
    #[command(subcommand)]
    Bmodel(BmodelOp),
    /// Skeleton strata, Euler characteristic, handles and meshes.
    #[command(subcommand)]
    Skeleton(SkeletonOp),
    /// Paired labeled diagrams and restriction pairs.
    #[command(subcommand)]
    Mirror(MirrorOp),
    /// Operations on the fan of one stratum.
    #[command(subcommand)]
    Fan(FanOp),
}

#[derive(Subcommand, Debug)]
enum BmodelOp {
    /// One component per minimal stratum.
    Components(Common),
    /// Chart diagram of a stratum's closure.
    Chart {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        stratum: String,
    },
    /// Dimension of compatible sections in the degree box.
    Census {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        degree: i64,
        /// Census of the chart diagram of this stratum's closure.
        #[arg(long)]
        stratum: Option<String>,
    },
    /// Open locus attached to a closed set of strata.
    Ufunctor {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        closed: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
enum SkeletonOp {
    /// Skeleton strata and incidences.
    Report(Common),
    /// Compactly supported Euler characteristic.
    Euler(Common),
    /// Handle attachments ordered by index.
    Handles(Common),
    /// OBJ mesh of the skeleton (dimension at most 2).
    Mesh {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 16)]
        resolution: usize,
    },
}

#[derive(Subcommand, Debug)]
enum MirrorOp {
    /// B-side and A-side labels with a matching certificate.
    Dict(Common),
    /// Restriction pair for a closed set of strata.
    Restrict {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        closed: Vec<String>,
    },
}

#[derive(Args, Debug)]
struct FanArgs {
    #[command(flatten)]
    common: Common,
    /// Stratum whose fan is used; defaults to the first.
    #[arg(long)]
    stratum: Option<String>,
}

#[derive(Subcommand, Debug)]
enum FanOp {
    /// Validity, completeness, smoothness and related flags.
    Props(FanArgs),
    /// Quotient fan by a cone.
    Quotient {
        #[command(flatten)]
        fan: FanArgs,
        /// Ray indices of the cone.
        #[arg(long, value_delimiter = ',')]
        cone: Vec<usize>,
    },
    /// Smooth refinement by star subdivisions.
    Resolve(FanArgs),
    /// Whether the fan refines the fan of `--other`.
    Refines {
        #[command(flatten)]
        fan: FanArgs,
        #[arg(long)]
        other: PathBuf,
        #[arg(long)]
        other_stratum: Option<String>,
    },
}

/// Exit code with captured standard output and error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Invalid(String),
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        match e {
            FileError::Content(m) => Failure::Invalid(m),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<FanifoldError> for Failure {
    fn from(e: FanifoldError) -> Self {
        match e {
            FanifoldError::Invalid(_) | FanifoldError::Fan(_) | FanifoldError::Lattice(_) => Failure::Invalid(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<fan::FanError> for Failure {
    fn from(e: fan::FanError) -> Self {
        match e {
            fan::FanError::Precondition(_) | fan::FanError::ConeNotInFan => Failure::Usage(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

struct Output {
    text: String,
    warnings: Vec<String>,
    code: i32,
}

fn load(path: &PathBuf) -> Result<Fanifold, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(FanifoldFile::parse(&text)?.to_fanifold()?)
}

/// Loads and validates; invalid input ends the command with exit code 2.
fn load_valid(path: &PathBuf, warnings: &mut Vec<String>) -> Result<Fanifold, Failure> {
    let phi = load(path)?;
    let report = phi.validate();
    if !report.valid {
        let lines: Vec<String> = report.errors.iter().map(|v| format!("{:?} {:?}: {}", v.kind, v.strata, v.detail)).collect();
        return Err(Failure::Invalid(format!("invalid fanifold\n{}", lines.join("\n"))));
    }
    if !report.is_poset {
        warnings.push("exit diagram is not a poset; closures are unrolled where needed".into());
    }
    Ok(phi)
}

fn closed_set(phi: &Fanifold, ids: &[String]) -> Result<BTreeSet<usize>, Failure> {
    let ids: Vec<&str> = ids.iter().map(|s| s.trim()).filter(|s| !s.is_empty()).collect();
    Ok(phi.ids_to_indices(&ids)?)
}

fn stratum_fan(phi: &Fanifold, id: &Option<String>) -> Result<Fan, Failure> {
    match id {
        Some(id) => Ok(phi.stratum(phi.index_of(id)?).fan.clone()),
        None => phi.strata().first().map(|s| s.fan.clone()).ok_or_else(|| Failure::Usage("file has no strata".into())),
    }
}

fn json_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Left-aligned columns separated by two spaces.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = line(header.iter().map(|s| s.to_string()).collect());
    out.push('\n');
    for r in rows {
        out.push_str(&line(r.clone()));
        out.push('\n');
    }
    out
}

fn fan_json(f: &Fan) -> serde_json::Value {
    json!({
        "rank": f.rank(),
        "rays": f.rays(),
        "cones": (0..f.len()).map(|c| f.cone_rays(c).to_vec()).collect::<Vec<_>>(),
    })
}

fn fan_text(f: &Fan) -> String {
    let mut s = format!("rank {}\nrays {:?}\n", f.rank(), f.rays());
    let rows: Vec<Vec<String>> = (0..f.len()).map(|c| vec![c.to_string(), format!("{:?}", f.cone_rays(c)), f.cone(c).dim().to_string()]).collect();
    s.push_str(&table(&["cone", "rays", "dim"], &rows));
    s
}

fn render<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => json_text(value),
        Format::Text => text(),
    }
}

fn dispatch(cli: Cli) -> Result<(Output, Option<PathBuf>), Failure> {
    let mut warnings = vec![];
    let mut code = 0;
    let (text, out) = match cli.command {
        Command::Validate(c) => {
            let phi = load(&c.file)?;
            let r = phi.validate();
            if !r.valid {
                code = 2;
            }
            if r.valid && !r.is_poset {
                warnings.push("exit diagram is not a poset".into());
            }
            let text = render(c.format, &r, || {
                let mut s = format!("valid     {}\nposet     {}\ncoherent  {}\nstrata    {}\narrows    {}\n", r.valid, r.is_poset, r.coherent, r.strata, r.arrows);
                if let Some(ch) = &r.chain {
                    writeln!(s, "shape     {ch}").expect("write to string");
                }
                let rows: Vec<Vec<String>> = r.shape.iter().map(|e| vec![e.from.clone(), e.to.clone(), e.count.to_string()]).collect();
                s.push_str(&table(&["from", "to", "count"], &rows));
                for v in &r.errors {
                    writeln!(s, "error {:?} {:?}: {}", v.kind, v.strata, v.detail).expect("write to string");
                }
                s
            });
            (text, c.out)
        }
        Command::Bmodel(op) => match op {
            BmodelOp::Components(c) => {
                let phi = load_valid(&c.file, &mut warnings)?;
                let comps = bmodel::components(&phi);
                let text = render(c.format, &comps, || {
                    let rows: Vec<Vec<String>> = comps
                        .iter()
                        .map(|x| vec![x.stratum.clone(), x.dimension.to_string(), x.rays.len().to_string(), x.cones.len().to_string(), x.complete.to_string()])
                        .collect();
                    table(&["stratum", "dim", "rays", "cones", "complete"], &rows)
                });
                (text, c.out)
            }
            BmodelOp::Chart { common: c, stratum } => {
                let phi = load_valid(&c.file, &mut warnings)?;
                let d = bmodel::chart_diagram(&phi, phi.index_of(&stratum)?)?;
                let objects: Vec<String> = d.objects.iter().map(|o| o.label()).collect();
                let arrows: Vec<serde_json::Value> = d
                    .arrows
                    .iter()
                    .map(|a| {
                        let kind = match a.map {
                            bmodel::ChartMap::Face => "face",
                            bmodel::ChartMap::Orbit { .. } => "orbit",
                        };
                        json!({"from": objects[a.from], "to": objects[a.to], "kind": kind})
                    })
                    .collect();
                let value = json!({"stratum": stratum, "objects": objects, "arrows": arrows});
                let text = render(c.format, &value, || {
                    let rows: Vec<Vec<String>> =
                        arrows.iter().map(|a| ["from", "to", "kind"].iter().map(|k| a[k].as_str().unwrap_or_default().to_string()).collect()).collect();
                    format!("{} charts\n{}", objects.len(), table(&["from", "to", "kind"], &rows))
                });
                (text, c.out)
            }
            BmodelOp::Census { common: c, degree, stratum } => {
                let phi = load_valid(&c.file, &mut warnings)?;
                let d = match &stratum {
                    Some(id) => bmodel::chart_diagram(&phi, phi.index_of(id)?)?,
                    None => ToricDiagram::full(&phi)?,
                };
                let census = bmodel::limit_census(&d, degree)?;
                if let Some(w) = &census.warning {
                    warnings.push(w.clone());
                }
                let text = render(c.format, &census, || {
                    format!(
                        "degree     {}\ncharts     {}\nvariables  {}\nequations  {}\ndimension  {}\n",
                        census.degree,
                        census.supports.len(),
                        census.variables,
                        census.equations,
                        census.dimension
                    )
                });
                (text, c.out)
            }
            BmodelOp::Ufunctor { common: c, closed } => {
                let phi = load_valid(&c.file, &mut warnings)?;
                let z = closed_set(&phi, &closed)?;
                let u = bmodel::u_functor(&phi, &z)?;
                let text = render(c.format, &u, || {
                    let rows: Vec<Vec<String>> =
                        u.pieces.iter().map(|p| vec![p.stratum.clone(), p.torus_rank.to_string(), format!("{:?}", p.removed_cones)]).collect();
                    format!("removed strata {:?}\n{}", u.removed, table(&["stratum", "torus", "removed orbits"], &rows))
                });
                (text, c.out)
            }
        },
        Command::Skeleton(op) => match op {
            SkeletonOp::Report(c) => {
                let phi = load_valid(&c.file, &mut warnings)?;
                let m = skeleton::skeleton_model(&phi)?;
                let value = json!({
                    "dimension": m.dimension,
                    "strata": m.strata,
                    "incidences": m.incidences.len(),
                    "chi_c": skeleton::euler_characteristic_c(&m),
                    "canonical_section": skeleton::canonical_section_check(&m),
                });
                let text = render(c.format, &value, || {
                    let rows: Vec<Vec<String>> = m
                        .strata
                        .iter()
                        .map(|s| vec![s.base.clone(), format!("{:?}", s.cone), s.torus_rank.to_string(), format!("{:?}", s.component_group)])
                        .collect();
                    format!(
                        "{}incidences {}\nchi_c {}\ncanonical section {}\n",
                        table(&["base", "cone", "torus", "components"], &rows),
                        m.incidences.len(),
                        skeleton::euler_characteristic_c(&m),
                        skeleton::canonical_section_check(&m)
                    )
                });
                (text, c.out)
            }
            SkeletonOp::Euler(c) => {
                let phi = load_valid(&c.file, &mut warnings)?;
                let chi = skeleton::euler_characteristic_c(&skeleton::skeleton_model(&phi)?);
                (render(c.format, &json!({ "chi_c": chi }), || format!("{chi}\n")), c.out)
            }
            SkeletonOp::Handles(c) => {
                let phi = load_valid(&c.file, &mut warnings)?;
                let plan = skeleton::handle_plan(&phi)?;
                let text = render(c.format, &plan, || {
                    let rows: Vec<Vec<String>> = plan
                        .handles
                        .iter()
                        .map(|h| vec![h.index.to_string(), h.stratum.clone(), h.attaching_strata.join(","), h.trivial.to_string()])
                        .collect();
                    table(&["k", "stratum", "attaching", "trivial"], &rows)
                });
                (text, c.out)
            }
            SkeletonOp::Mesh { common: c, resolution } => {
                let phi = load_valid(&c.file, &mut warnings)?;
                (skeleton::export_mesh(&skeleton::skeleton_model(&phi)?, resolution)?, c.out)
            }
        },
        Command::Mirror(op) => match op {
            MirrorOp::Dict(c) => {
                let phi = load_valid(&c.file, &mut warnings)?;
                let d = mirror::mirror_dictionary(&phi)?;
                let text = render(c.format, &d, || {
                    let rows: Vec<Vec<String>> = d.strata.iter().map(|s| vec![s.id.clone(), s.b_label.clone(), s.a_label.clone()]).collect();
                    let arrows: Vec<Vec<String>> =
                        d.arrows.iter().map(|a| vec![format!("{}→{}", a.from, a.to), a.b_label.clone(), a.a_label.clone()]).collect();
                    format!("{}\n{}{}\n", table(&["stratum", "B", "A"], &rows), table(&["arrow", "B", "A"], &arrows), d.convention)
                });
                (text, c.out)
            }
            MirrorOp::Restrict { common: c, closed } => {
                let phi = load_valid(&c.file, &mut warnings)?;
                let z = closed_set(&phi, &closed)?;
                let p = mirror::restriction_pairs(&phi, &z)?;
                let text = render(c.format, &p, || {
                    format!(
                        "closed   {:?}\nkept     {:?}\nremoved  {:?}\nverified {}\nB: {}\nA: {}\n",
                        p.closed, p.kept_handles, p.removed_handles, p.verified, p.b_sequence, p.a_sequence
                    )
                });
                (text, c.out)
            }
        },
        Command::Fan(op) => match op {
            FanOp::Props(a) => {
                let f = stratum_fan(&load(&a.common.file)?, &a.stratum)?;
                let p = f.properties().clone();
                let text = render(a.common.format, &p, || {
                    format!(
                        "valid        {}\nface_closed  {}\nsimplicial   {}\nsmooth       {}\ncomplete     {}\n",
                        p.valid, p.face_closed, p.simplicial, p.smooth, p.complete
                    )
                });
                (text, a.common.out)
            }
            FanOp::Quotient { fan: a, cone } => {
                let f = stratum_fan(&load(&a.common.file)?, &a.stratum)?;
                let mut idx = cone.clone();
                idx.sort_unstable();
                let i = f.find_by_rays(&idx).ok_or(fan::FanError::ConeNotInFan)?;
                let (qf, q) = f.quotient(i)?;
                let value = json!({
                    "fan": fan_json(&qf),
                    "projection": q.projection.matrix.to_rows(),
                    "torsion": q.torsion,
                });
                let text = render(a.common.format, &value, || format!("{}projection {:?}\ntorsion {:?}\n", fan_text(&qf), q.projection.matrix.to_rows(), q.torsion));
                (text, a.common.out)
            }
            FanOp::Resolve(a) => {
                let f = stratum_fan(&load(&a.common.file)?, &a.stratum)?;
                let r = fan::resolve_to_smooth(&f)?;
                (render(a.common.format, &fan_json(&r), || fan_text(&r)), a.common.out)
            }
            FanOp::Refines { fan: a, other, other_stratum } => {
                let f = stratum_fan(&load(&a.common.file)?, &a.stratum)?;
                let g = stratum_fan(&load(&other)?, &other_stratum)?;
                let r = fan::refines(&f, &g)?;
                (render(a.common.format, &json!({ "refines": r }), || format!("{r}\n")), a.common.out)
            }
        },
    };
    Ok((Output { text, warnings, code }, out))
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(cli) {
        Ok((out, path)) => {
            let mut stderr: String = out.warnings.iter().map(|w| format!("warning: {w}\n")).collect();
            match path {
                Some(p) => match std::fs::write(&p, &out.text) {
                    Ok(()) => Outcome { code: out.code, stdout: String::new(), stderr },
                    Err(e) => {
                        stderr.push_str(&format!("error: cannot write {}: {e}\n", p.display()));
                        Outcome { code: 1, stdout: String::new(), stderr }
                    }
                },
                None => Outcome { code: out.code, stdout: out.text, stderr },
            }
        }
        Err(Failure::Usage(m)) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(Failure::Invalid(m)) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {m}\n") },
    }
}
