use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dendro::closed_ops::matching_report;
use dendro::gset::{reindex_free_complement, reindex_to_injective, TowerMap};
use dendro::homotopy::{build_e, shom_level, DEFAULT_BUDGET};
use dendro::lean::{coskeleton, LeanObject};
use dendro::lifting::{boundary_family, has_rlp_family, horn_family, solve_lift, LiftingProblem};
use dendro::normality::{is_normal_mono_upto, is_normal_upto, llp_normality_check};
use dendro::presheaf::{skeleton, FinitePresheaf, PresheafMap};
use dendro::verify::{self, Level, VerifyReport};
use dendro::{enumerate_trees, hom_set, parse_term, print_term, DendroError, Flavor};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Dendro(#[from] DendroError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}: not valid JSON: {1}")]
    Json(PathBuf, serde_json::Error),
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "dendro", version, about = "Finite checks on trees, dendroidal presheaves and their lifting properties")]
struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    General,
    Open,
    Closed,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Flavor {
        match f {
            FlavorArg::General => Flavor::General,
            FlavorArg::Open => Flavor::Open,
            FlavorArg::Closed => Flavor::Closed,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate and inspect trees.
    #[command(subcommand)]
    Trees(TreesCmd),
    /// Edge maps `SOURCE → TARGET`.
    Hom {
        source: String,
        target: String,
        #[arg(long, value_enum, default_value = "general")]
        flavor: FlavorArg,
    },
    /// Automorphisms of a tree.
    Aut {
        term: String,
        #[arg(long, value_enum, default_value = "general")]
        flavor: FlavorArg,
    },
    /// Presheaf files: validation, skeleta, coskeleta.
    #[command(subcommand)]
    Presheaf(PresheafCmd),
    /// Normality of presheaves and monos.
    #[command(subcommand)]
    Normal(NormalCmd),
    /// Lifting problems and lifting properties.
    #[command(subcommand)]
    Lift(LiftCmd),
    /// Finite G-sets.
    #[command(subcommand)]
    Gset(GsetCmd),
    /// Towers of G-sets.
    #[command(subcommand)]
    Tower(TowerCmd),
    /// The associative operad and its closed nerve.
    #[command(subcommand)]
    Ass(AssCmd),
    /// Builds the normal resolution of the point up to a size.
    BuildE {
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, value_enum, default_value = "general")]
        flavor: FlavorArg,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Number of maps `X ⊗ Δ[k] → cosk_n Y`.
    Shom {
        x: PathBuf,
        y: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 0)]
        k: usize,
    },
    /// Verification suites with JSON reports.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand)]
enum TreesCmd {
    /// All trees up to a size, one per isomorphism class.
    Enum {
        #[arg(long, default_value_t = 4)]
        max_size: usize,
        #[arg(long, value_enum, default_value = "general")]
        flavor: FlavorArg,
        #[arg(long, value_enum, default_value = "term")]
        format: Format,
    },
    /// Sizes, leaves, stumps and inner edges of one tree.
    Info {
        term: String,
        #[arg(long, value_enum, default_value = "general")]
        flavor: FlavorArg,
    },
    /// Graphviz rendering.
    Dot {
        term: String,
        #[arg(long, value_enum, default_value = "general")]
        flavor: FlavorArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Term,
    Json,
}

#[derive(Subcommand)]
enum PresheafCmd {
    /// Validates a presheaf file.
    Check {
        file: PathBuf,
        /// Check every composable pair, not only generators.
        #[arg(long)]
        full: bool,
    },
    /// The n-skeleton inclusion.
    Sk {
        file: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// `cosk_n` of a presheaf, evaluated on trees up to `max-size`.
    Cosk {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
    },
}

#[derive(Subcommand)]
enum NormalCmd {
    /// Normality of a presheaf, or of a map when the file holds one.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
        /// Also run the lifting test and compare.
        #[arg(long)]
        lifting: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Boundary,
    Horn,
}

#[derive(Subcommand)]
enum LiftCmd {
    /// Solves a square given as `{i, p, top, bottom}`.
    Solve { file: PathBuf },
    /// Right lifting property of a map against boundaries or inner horns.
    Family {
        file: PathBuf,
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
    },
}

#[derive(Subcommand)]
enum GsetCmd {
    /// LLP against the generator versus free monos, exhaustively.
    Verify {
        #[arg(long, default_value_t = 4)]
        max_carrier: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReindexMode {
    Injective,
    FreeComplement,
}

#[derive(Subcommand)]
enum TowerCmd {
    /// Reindexes a tower map to a levelwise injective or free-complement one.
    Reindex {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "injective")]
        mode: ReindexMode,
    },
}

#[derive(Subcommand)]
enum AssCmd {
    /// Operation counts, matching maps and nerve checks.
    Verify(AssArgs),
}

#[derive(Args, Clone, Copy)]
struct AssArgs {
    #[arg(long, default_value_t = 6)]
    max_arity: usize,
    #[arg(long, default_value_t = 5)]
    max_size: usize,
    /// Accepted for symmetry; output is always JSON.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Every suite, merged into one report.
    All {
        #[arg(long, value_enum, default_value = "quick")]
        level: LevelArg,
        #[arg(long)]
        timings: bool,
    },
    /// Hom sets, degeneracies and boundaries.
    Trees {
        #[arg(long, default_value_t = 4)]
        max_size: usize,
    },
    /// Lifting against the generator versus free monos.
    Gset {
        #[arg(long, default_value_t = 4)]
        max_carrier: usize,
    },
    /// Normal monos versus the lifting characterisation.
    Normality {
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, default_value_t = 2)]
        per_object: usize,
    },
    /// Same report as `ass verify`.
    Ass(AssArgs),
    /// The edge-poset functor and the resolution of the point.
    E {
        #[arg(long, default_value_t = 3)]
        max_size: usize,
    },
    /// Coskeletal reduction of boundary inclusions.
    Reduction {
        #[arg(long, default_value_t = 4)]
        max_size: usize,
    },
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|e| CliError::Json(path.into(), e))
}

fn read_presheaf(path: &Path) -> Result<Arc<FinitePresheaf>> {
    Ok(Arc::new(FinitePresheaf::from_json(&read_json(path)?)?))
}

fn map_json(v: &Value, key: &str) -> Result<PresheafMap> {
    Ok(PresheafMap::from_json(&v[key])?)
}

/// What a command prints, and whether it counts as success.
struct Outcome {
    body: Value,
    ok: bool,
}

impl Outcome {
    fn ok(body: Value) -> Outcome {
        Outcome { body, ok: true }
    }
}

impl From<VerifyReport> for Outcome {
    fn from(r: VerifyReport) -> Outcome {
        Outcome { ok: r.passed(), body: r.to_json() }
    }
}

fn tree_info(term: &str, flavor: Flavor) -> Result<Value> {
    let t = parse_term(term, flavor)?;
    Ok(json!({
        "term": print_term(&t),
        "flavor": flavor.name(),
        "size": t.size(),
        "edges": t.num_edges(),
        "vertices": t.num_vertices(),
        "leaves": t.leaves().collect::<Vec<_>>(),
        "stumps": t.stumps().collect::<Vec<_>>(),
        "inner_edges": t.inner_edges().collect::<Vec<_>>(),
        "automorphisms": dendro::automorphisms(&t).len(),
    }))
}

fn ass_report(a: AssArgs) -> Result<Outcome> {
    let mut r = verify::verify_ass(a.max_arity, a.max_size, a.timings)?;
    let details: Vec<Value> = (1..=a.max_arity)
        .map(|n| matching_report(n).map(|m| json!({"arity": m.arity, "operations": m.operations, "families": m.families, "image": m.image, "injective": m.injective, "surjective": m.surjective})))
        .collect::<dendro::Result<_>>()?;
    r.suite = "ass".into();
    let mut body = r.to_json();
    body["matching"] = json!(details);
    Ok(Outcome { ok: r.passed(), body })
}

fn run(cmd: Cmd) -> Result<Outcome> {
    Ok(match cmd {
        Cmd::Trees(TreesCmd::Enum { max_size, flavor, format }) => {
            let trees = enumerate_trees(max_size, flavor.into());
            match format {
                Format::Term => Outcome::ok(Value::String(trees.iter().map(print_term).collect::<Vec<_>>().join("\n"))),
                Format::Json => Outcome::ok(json!(trees.iter().map(dendro::tree::tree_to_json).collect::<Vec<_>>())),
            }
        }
        Cmd::Trees(TreesCmd::Info { term, flavor }) => Outcome::ok(tree_info(&term, flavor.into())?),
        Cmd::Trees(TreesCmd::Dot { term, flavor }) => Outcome::ok(Value::String(parse_term(&term, flavor.into())?.to_dot())),
        Cmd::Hom { source, target, flavor } => {
            let (s, t) = (parse_term(&source, flavor.into())?, parse_term(&target, flavor.into())?);
            let maps: Vec<Value> = hom_set(&s, &t)?
                .into_iter()
                .map(|m| json!({"edge_map": m.edge_map, "injective": m.is_injective(), "surjective": m.is_surjective()}))
                .collect();
            Outcome::ok(json!({"count": maps.len(), "maps": maps}))
        }
        Cmd::Aut { term, flavor } => {
            let t = parse_term(&term, flavor.into())?;
            let auts: Vec<Vec<usize>> = dendro::automorphisms(&t).into_iter().map(|m| m.edge_map).collect();
            Outcome::ok(json!({"order": auts.len(), "elements": auts}))
        }
        Cmd::Presheaf(PresheafCmd::Check { file, full }) => {
            let x = FinitePresheaf::from_json(&read_json(&file)?)?;
            let res = if full { x.check_functorial_full() } else { x.check_functorial() };
            Outcome { ok: res.is_ok(), body: json!({"functorial": res.is_ok(), "error": res.err().map(|e| e.to_string()), "total": x.total()}) }
        }
        Cmd::Presheaf(PresheafCmd::Sk { file, n }) => Outcome::ok(skeleton(&read_presheaf(&file)?, n).to_json()),
        Cmd::Presheaf(PresheafCmd::Cosk { file, n, max_size }) => {
            let x = read_presheaf(&file)?;
            Outcome::ok(coskeleton(&x, n)?.to_presheaf(max_size)?.to_json())
        }
        Cmd::Normal(NormalCmd::Check { file, max_size, lifting }) => {
            let v = read_json(&file)?;
            if v.get("components").is_some() {
                let f = PresheafMap::from_json(&v)?;
                let normal = is_normal_mono_upto(&f, max_size);
                let mut body = json!({"normal": normal});
                let mut ok = true;
                if lifting {
                    let l = llp_normality_check(&f, max_size)?;
                    body["lifting"] = json!(l);
                    ok = l == normal;
                }
                Outcome { body, ok }
            } else {
                let x = FinitePresheaf::from_json(&v)?;
                Outcome::ok(json!({"normal": is_normal_upto(&x, max_size)}))
            }
        }
        Cmd::Lift(LiftCmd::Solve { file }) => {
            let v = read_json(&file)?;
            let problem = LiftingProblem::new(map_json(&v, "i")?, map_json(&v, "p")?, map_json(&v, "top")?, map_json(&v, "bottom")?)?;
            match solve_lift(&problem) {
                Some(s) => Outcome::ok(json!({"solvable": true, "lift": s.lift.to_json()})),
                None => Outcome { ok: false, body: json!({"solvable": false}) },
            }
        }
        Cmd::Lift(LiftCmd::Family { file, family, max_size }) => {
            let p = PresheafMap::from_json(&read_json(&file)?)?;
            let (fl, n) = (p.cat().flavor(), p.cat().max_size());
            if max_size > n {
                return Err(DendroError::TruncationTooSmall { have: n, need: max_size }.into());
            }
            let fam = match family {
                FamilyArg::Boundary => boundary_family(fl, n, max_size),
                FamilyArg::Horn => horn_family(fl, n, max_size),
            };
            let ok = has_rlp_family(&p, &fam);
            Outcome::ok(json!({"family_size": fam.len(), "has_rlp": ok}))
        }
        Cmd::Gset(GsetCmd::Verify { max_carrier }) => verify::verify_gset(max_carrier, false).into(),
        Cmd::Tower(TowerCmd::Reindex { file, mode }) => {
            let v = read_json(&file)?;
            let f = TowerMap::from_json(&v)?;
            let group = dendro::gset::FiniteGroup::from_json(&v["group"])?;
            match mode {
                ReindexMode::Injective => {
                    let r = reindex_to_injective(&f)?;
                    Outcome::ok(json!({"verdict": r.verdict, "map": r.map.to_json(&group), "rho": r.rho}))
                }
                ReindexMode::FreeComplement => {
                    let r = reindex_free_complement(&f)?;
                    Outcome::ok(json!({
                        "verdict": r.verdict,
                        "theta": r.theta,
                        "inconclusive_from": r.inconclusive_from,
                        "map": r.map.to_json(&group),
                    }))
                }
            }
        }
        Cmd::Ass(AssCmd::Verify(a)) | Cmd::Verify(VerifyCmd::Ass(a)) => ass_report(a)?,
        Cmd::BuildE { max_size, flavor, budget, out } => {
            let s = build_e(flavor.into(), max_size, budget)?;
            let body = s.to_json();
            if let Some(path) = out {
                let text = serde_json::to_string_pretty(&body).expect("json values serialize");
                std::fs::write(&path, text).map_err(|source| CliError::Io { path: path.clone(), source })?;
            }
            Outcome { ok: s.is_complete(), body: json!({"level": s.level(), "complete": s.is_complete(), "exhausted_at": s.exhausted_at, "glued": s.glued.len(), "sets": s.top().sets()}) }
        }
        Cmd::Shom { x, y, degree, k } => {
            let x = read_presheaf(&x)?;
            let y = LeanObject::new(degree, read_presheaf(&y)?)?;
            Outcome::ok(json!({"k": k, "count": shom_level(&x, &y, k)?.len()}))
        }
        Cmd::Verify(VerifyCmd::All { level, timings }) => {
            let level = match level {
                LevelArg::Quick => Level::Quick,
                LevelArg::Full => Level::Full,
            };
            verify::verify_all(level, timings)?.into()
        }
        Cmd::Verify(VerifyCmd::Trees { max_size }) => verify::verify_trees(max_size, false).into(),
        Cmd::Verify(VerifyCmd::Gset { max_carrier }) => verify::verify_gset(max_carrier, false).into(),
        Cmd::Verify(VerifyCmd::Normality { max_size, per_object }) => verify::verify_normality(max_size, per_object, false)?.into(),
        Cmd::Verify(VerifyCmd::E { max_size }) => verify::verify_e(max_size, false)?.into(),
        Cmd::Verify(VerifyCmd::Reduction { max_size }) => verify::verify_reduction(max_size, false)?.into(),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("dendro: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.cmd) {
        Ok(out) => {
            let text = match &out.body {
                Value::String(s) => s.clone(),
                v => serde_json::to_string_pretty(v).expect("json values serialize"),
            };
            // a closed pipe downstream is not an error
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("dendro: {e}");
            ExitCode::from(2)
        }
    }
}
