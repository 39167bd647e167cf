//! The `sharbly` command line. Every command prints a JSON summary; with
//! `--out` the full result goes to that file, and `--cert` writes a
//! certificate that `cert check` can re-verify offline.

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::cert::{self, CensusCertificate, CertificateFile, FacetRecord, FlipIdentityCertificate, TriangulationCertificate};
use crate::cosharbly::mu_sign_certificate;
use crate::cycle::{
    build_zG, build_zG_symmetrized, secondary_flipons, verify_an_remark, verify_boundary_zero_with_budget,
    CycleChain, CycleTerm, Flipon,
};
use crate::exactq::{q, q_to_string, sign, Q};
use crate::polytope::{
    enumerate_regular_triangulations, flip_path, is_regular, is_valid_triangulation, lift_triangulation,
    placing_triangulation, verify_flip_identity, Flip, FlipIdentity, LiftingHeights, PointConfiguration,
    Triangulation,
};
use crate::repro::{run_all, ReproOptions, DEFAULT_SEED};
use crate::sharbly::{canonicalize_int, ChainTerm, OrbitDictionary, SharblyChain};
use crate::voronoi::dataset::{all_forms, builtin_dataset};
use crate::voronoi::tile::{facet_census, stabilizer_with_budget, tile_facets_with_normals};
use crate::voronoi::{builtin_tile, form_from_minvecs, tile_facets, Tile};
use crate::{Budget, Error, IVec, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_UNSUPPORTED: i32 = 4;

const DEFAULT_STATES: usize = 10_000;

#[derive(Debug, Parser)]
#[command(name = "sharbly", version, about = "Exact sharbly cycles for SL_n(Z)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the full result to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Certificate file: written by certifying commands, read by `cert check`.
    #[arg(long, global = true)]
    pub cert: Option<PathBuf>,
    /// Node limit for group searches.
    #[arg(long = "budget-nodes", global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget_nodes: Option<u64>,
    /// Limit on triangulations expanded by flip searches.
    #[arg(long = "budget-states", global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget_states: Option<u64>,
    /// Print timings on stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Built-in perfect forms.
    #[command(subcommand)]
    Forms(FormsCmd),
    /// Voronoi tiles of the built-in forms.
    #[command(subcommand)]
    Tile(TileCmd),
    /// Placing or lifted triangulation of a configuration.
    Triangulate(TriangulateArgs),
    #[command(subcommand)]
    Triangulations(TriangulationsCmd),
    #[command(subcommand)]
    Flip(FlipCmd),
    #[command(subcommand)]
    Sharbly(SharblyCmd),
    #[command(subcommand)]
    Cycle(CycleCmd),
    #[command(subcommand)]
    Cocycle(CocycleCmd),
    #[command(subcommand)]
    Cert(CertCmd),
    #[command(subcommand)]
    Repro(ReproCmd),
}

#[derive(Debug, Subcommand)]
pub enum FormsCmd {
    List {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        form: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum TileCmd {
    /// Facets of a tile with the census by ray count.
    Facets {
        #[arg(long)]
        form: String,
    },
    Stabilizer {
        #[arg(long)]
        form: String,
    },
}

/// Where a point configuration comes from: a JSON file, or a tile (or one
/// of its facets) through the trace-1 section.
#[derive(Debug, Args)]
pub struct ConfigSource {
    /// Configuration JSON: `{ambient_dim, points}` or a list of integer points.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub form: Option<String>,
    /// A facet of `--form`: its index, a comma-separated label list, or `F`
    /// for the built-in D5 facet.
    #[arg(long)]
    pub facet: Option<String>,
}

#[derive(Debug, Args)]
pub struct TriangulateArgs {
    #[command(flatten)]
    pub source: ConfigSource,
    /// Placing order as comma-separated labels (default: label order).
    #[arg(long)]
    pub order: Option<String>,
    /// Lifting heights JSON; overrides `--order`.
    #[arg(long)]
    pub heights: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum TriangulationsCmd {
    Enumerate {
        #[command(flatten)]
        source: ConfigSource,
    },
}

#[derive(Debug, Subcommand)]
pub enum FlipCmd {
    /// Shortest flip path through regular triangulations.
    Path {
        #[command(flatten)]
        source: ConfigSource,
        /// Triangulation JSON in configuration labels.
        #[arg(long)]
        from: Option<PathBuf>,
        #[arg(long)]
        to: Option<PathBuf>,
    },
    /// Re-verifies the flips of a `flip path` result.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        /// The vector `x` coning off the secondary flipons, comma-separated
        /// (default `e_1`). Needs a path computed on a tile.
        #[arg(long = "cone-vertex")]
        cone_vertex: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SharblyCmd {
    /// Canonical form of a basic sharbly given as a list of integer vectors.
    Canon {
        #[arg(long = "in")]
        input: PathBuf,
    },
    Boundary {
        #[arg(long = "in")]
        input: PathBuf,
        /// Project the boundary to orbit classes.
        #[arg(long)]
        coinvariants: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum CycleCmd {
    Build {
        #[arg(long)]
        n: usize,
        /// Spread every simplex over its tile stabilizer.
        #[arg(long)]
        symmetrized: bool,
    },
    /// Boundary certificate for a cycle.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    RemarkAn {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum CocycleCmd {
    /// Orientation and degeneracy verdicts of every term.
    Certify {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum CertCmd {
    Check {
        /// Certificate file (or use `--cert`).
        file: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ReproCmd {
    All {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Skip the n = 5 item.
        #[arg(long = "skip-n5")]
        skip_n5: bool,
    },
}

/// What a command produced.
struct Output {
    summary: Value,
    artifact: Option<Value>,
    certificate: Option<Value>,
    valid: bool,
}

impl Output {
    fn plain(summary: Value, artifact: Value) -> Self {
        Output {
            summary,
            artifact: Some(artifact),
            certificate: None,
            valid: true,
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded(_) => EXIT_BUDGET,
        Error::UnsupportedRank(_) => EXIT_UNSUPPORTED,
        Error::Parse(_) | Error::Json(_) | Error::InvalidInput(_) | Error::Io(_) | Error::NotFound(_) => EXIT_USAGE,
        _ => EXIT_INVALID,
    }
}

/// Runs one command, writing the summary (or the result) to `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> i32 {
    let start = Instant::now();
    let code = match execute(cli, stdout) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    if cli.verbose {
        eprintln!("finished in {} ms", start.elapsed().as_millis());
    }
    code
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<i32> {
    if let Command::Repro(ReproCmd::All { seed, skip_n5 }) = &cli.command {
        return repro(cli, *seed, *skip_n5, stdout);
    }
    if let Command::Cert(CertCmd::Check { file }) = &cli.command {
        let path = file
            .as_ref()
            .or(cli.cert.as_ref())
            .ok_or_else(|| Error::InvalidInput("no certificate file given".into()))?;
        return cert_check(path, stdout);
    }
    let guards = [cli.out.as_deref(), cli.cert.as_deref()]
        .into_iter()
        .flatten()
        .map(WriteGuard::new)
        .collect::<Result<Vec<_>>>()?;
    let out = dispatch(cli)?;
    if let Some(p) = &cli.out {
        write_json(p, out.artifact.as_ref().unwrap_or(&out.summary))?;
        writeln!(stdout, "{}", serde_json::to_string_pretty(&out.summary)?)?;
    } else {
        match &out.artifact {
            Some(a) => writeln!(stdout, "{}", serde_json::to_string(a)?)?,
            None => writeln!(stdout, "{}", serde_json::to_string_pretty(&out.summary)?)?,
        }
    }
    if let Some(p) = &cli.cert {
        match &out.certificate {
            Some(c) => write_json(p, c)?,
            None => eprintln!("note: this command emits no certificate"),
        }
    }
    guards.into_iter().for_each(WriteGuard::keep);
    Ok(if out.valid { EXIT_OK } else { EXIT_INVALID })
}

/// Checks that an output path is writable before any long computation, and
/// removes the placeholder again if the command fails.
struct WriteGuard {
    path: PathBuf,
    created: bool,
    keep: bool,
}

impl WriteGuard {
    fn new(path: &Path) -> Result<Self> {
        let created = !path.exists();
        std::fs::OpenOptions::new().create(true).append(true).open(path)?;
        Ok(WriteGuard {
            path: path.to_path_buf(),
            created,
            keep: false,
        })
    }

    fn keep(mut self) {
        self.keep = true;
    }
}

impl Drop for WriteGuard {
    fn drop(&mut self) {
        if self.created && !self.keep {
            let _ = std::fs::remove_file(&self.path);
        }
    }
}

fn write_json(path: &Path, v: &Value) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(v)? + "\n")?;
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let s = std::fs::read_to_string(path)?;
    serde_json::from_str(&s).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn budget(cli: &Cli) -> Budget {
    cli.budget_nodes.map_or_else(Budget::unlimited, Budget::new)
}

fn states(cli: &Cli) -> usize {
    cli.budget_states.map_or(DEFAULT_STATES, |s| s as usize)
}

fn dispatch(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Forms(FormsCmd::List { n, form }) => forms_list(*n, form.as_deref()),
        Command::Tile(TileCmd::Facets { form }) => tile_facets_cmd(form),
        Command::Tile(TileCmd::Stabilizer { form }) => {
            let tile = builtin_tile(form)?;
            let g = stabilizer_with_budget(&tile, &mut budget(cli))?;
            Ok(Output::plain(
                json!({"form": tile.form.name, "order": g.len()}),
                json!({"form": tile.form.name, "order": g.len(), "elements": g}),
            ))
        }
        Command::Triangulate(a) => triangulate(a),
        Command::Triangulations(TriangulationsCmd::Enumerate { source }) => {
            let (cfg, _) = load_config(source)?;
            let all = enumerate_regular_triangulations(&cfg, states(cli))?;
            Ok(Output::plain(
                json!({"points": cfg.len(), "regular_triangulations": all.len()}),
                serde_json::to_value(&all)?,
            ))
        }
        Command::Flip(FlipCmd::Path { source, from, to }) => flip_path_cmd(cli, source, from.as_deref(), to.as_deref()),
        Command::Flip(FlipCmd::Verify { input, cone_vertex }) => flip_verify(input, cone_vertex.as_deref()),
        Command::Sharbly(SharblyCmd::Canon { input }) => {
            let vs: Vec<IVec> = read_json(input)?;
            let v = match canonicalize_int(&vs)? {
                Some((s, b)) => json!({"zero": false, "sign": s, "vectors": b.vectors}),
                None => json!({"zero": true}),
            };
            Ok(Output::plain(v.clone(), v))
        }
        Command::Sharbly(SharblyCmd::Boundary { input, coinvariants }) => {
            let chain = load_chain(input)?;
            let d = chain.boundary()?;
            if *coinvariants {
                coinvariant_report(&d, &mut OrbitDictionary::with_budget(budget(cli)))
            } else {
                Ok(Output::plain(json!({"terms": d.len()}), serde_json::to_value(&d)?))
            }
        }
        Command::Cycle(CycleCmd::Build { n, symmetrized }) => {
            let z = if *symmetrized { build_zG_symmetrized(*n)? } else { build_zG(*n)? };
            Ok(Output::plain(json!({"n": n, "terms": z.len()}), serde_json::to_value(&z)?))
        }
        Command::Cycle(CycleCmd::Verify { input }) => {
            let z = load_cycle(input)?;
            let c = verify_boundary_zero_with_budget(&z, &mut OrbitDictionary::with_budget(budget(cli)))?;
            let summary = json!({
                "valid": c.valid,
                "terms": c.chain.len(),
                "ledger_entries": c.ledger.len(),
                "classes": c.classes.len(),
                "residual": c.residual,
            });
            let file = CertificateFile::boundary(&c)?;
            Ok(Output {
                summary: summary.clone(),
                artifact: Some(summary),
                certificate: Some(serde_json::to_value(&file)?),
                valid: c.valid,
            })
        }
        Command::Cycle(CycleCmd::RemarkAn { n }) => {
            let r = verify_an_remark(*n)?;
            let v = serde_json::to_value(&r)?;
            Ok(Output::plain(v.clone(), v))
        }
        Command::Cocycle(CocycleCmd::Certify { input }) => {
            let c = mu_sign_certificate(&load_chain(input)?)?;
            let mut counts = BTreeMap::new();
            for t in &c.terms {
                *counts.entry(format!("{:?}", t.verdict)).or_insert(0usize) += 1;
            }
            let summary = json!({"valid": c.valid, "verdicts": counts});
            Ok(Output {
                summary,
                artifact: Some(serde_json::to_value(&c)?),
                certificate: Some(serde_json::to_value(CertificateFile::positivity(&c)?)?),
                valid: c.valid,
            })
        }
        Command::Cert(_) | Command::Repro(_) => unreachable!("handled before dispatch"),
    }
}

fn forms_list(n: Option<usize>, name: Option<&str>) -> Result<Output> {
    if let Some(n) = n {
        builtin_dataset(n)?;
    }
    let mut forms = Vec::new();
    for d in all_forms() {
        if n.is_some_and(|n| n != d.n) || name.is_some_and(|s| !s.eq_ignore_ascii_case(&d.name)) {
            continue;
        }
        forms.push(form_from_minvecs(&d.name, &d.vectors)?);
    }
    if forms.is_empty() {
        return Err(Error::NotFound(format!("no built-in form named {}", name.unwrap_or("?"))));
    }
    let summary: Vec<Value> = forms
        .iter()
        .map(|f| json!({"name": f.name, "n": f.n, "min_vectors": f.minimal_vectors.len()}))
        .collect();
    Ok(Output::plain(json!(summary), serde_json::to_value(&forms)?))
}

fn tile_facets_cmd(form: &str) -> Result<Output> {
    let tile = builtin_tile(form)?;
    let facets = tile_facets_with_normals(&tile)?;
    let labels: Vec<Vec<usize>> = facets.iter().map(|f| f.labels.clone()).collect();
    let census = facet_census(&labels);
    let cert = CensusCertificate {
        form: tile.form.name.clone(),
        vectors: tile.vectors().to_vec(),
        facets: facets.into_iter().map(FacetRecord::from).collect(),
        census: census.clone(),
    };
    let summary = json!({"form": tile.form.name, "rays": tile.len(), "facets": labels.len(), "census": census});
    Ok(Output {
        summary: summary.clone(),
        artifact: Some(json!({"form": tile.form.name, "facets": labels, "census": census})),
        certificate: Some(serde_json::to_value(CertificateFile::census(&cert)?)?),
        valid: true,
    })
}

/// A configuration and, when it came from a tile, the tile labels of its
/// points.
fn load_config(src: &ConfigSource) -> Result<(PointConfiguration, Option<(Tile, Vec<usize>)>)> {
    match (&src.input, &src.form) {
        (Some(_), Some(_)) => Err(Error::InvalidInput("give either --in or --form".into())),
        (Some(p), None) => {
            let v: Value = read_json(p)?;
            let cfg = if let Ok(pts) = serde_json::from_value::<Vec<IVec>>(v.clone()) {
                PointConfiguration::from_int(&pts)?
            } else {
                let c: PointConfiguration =
                    serde_json::from_value(v).map_err(|e| Error::InvalidInput(format!("{}: {e}", p.display())))?;
                PointConfiguration::new(c.points)?
            };
            Ok((cfg, None))
        }
        (None, Some(form)) => {
            let tile = builtin_tile(form)?;
            let labels = match src.facet.as_deref() {
                None => (0..tile.len()).collect(),
                Some(f) => facet_labels(&tile, f)?,
            };
            let cfg = tile.section_configuration(&labels)?;
            Ok((cfg, Some((tile, labels))))
        }
        (None, None) => Err(Error::InvalidInput("no configuration: use --in or --form".into())),
    }
}

fn parse_labels(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| Error::InvalidInput(format!("bad label `{t}`"))))
        .collect()
}

fn facet_labels(tile: &Tile, f: &str) -> Result<Vec<usize>> {
    if f.eq_ignore_ascii_case("f") {
        let data = builtin_dataset(tile.n())?
            .facet
            .filter(|d| d.form.eq_ignore_ascii_case(&tile.form.name))
            .ok_or_else(|| Error::NotFound(format!("{} has no built-in facet F", tile.form.name)))?;
        return Ok(data.vertices);
    }
    let facets = tile_facets(tile)?;
    if f.contains(',') {
        let mut l = parse_labels(f)?;
        l.sort_unstable();
        return facets
            .into_iter()
            .find(|x| *x == l)
            .ok_or_else(|| Error::InvalidInput(format!("{l:?} is not a facet of {}", tile.form.name)));
    }
    let i = parse_labels(f)?[0];
    facets
        .get(i)
        .cloned()
        .ok_or_else(|| Error::InvalidInput(format!("{} has {} facets", tile.form.name, facets.len())))
}

fn triangulate(a: &TriangulateArgs) -> Result<Output> {
    let (cfg, _) = load_config(&a.source)?;
    let t = if let Some(h) = &a.heights {
        let h: LiftingHeights = match read_json::<LiftingHeights>(h) {
            Ok(h) => h,
            Err(_) => LiftingHeights {
                heights: read_json::<Vec<i64>>(h)?.into_iter().map(q).collect(),
            },
        };
        lift_triangulation(&cfg, &h)?
    } else {
        let order = match &a.order {
            Some(o) => parse_labels(o)?,
            None => (0..cfg.len()).collect(),
        };
        placing_triangulation(&cfg, &order)?.0
    };
    let valid = is_valid_triangulation(&cfg, &t);
    let heights = is_regular(&cfg, &t)?;
    let summary = json!({"simplices": t.len(), "valid": valid, "regular": heights.is_some()});
    let c = TriangulationCertificate {
        config: cfg,
        triangulation: t.clone(),
        valid,
        heights,
    };
    Ok(Output {
        summary,
        artifact: Some(serde_json::to_value(&t)?),
        certificate: Some(serde_json::to_value(CertificateFile::triangulation(&c)?)?),
        valid,
    })
}

/// Result of `flip path`, the input of `flip verify`.
#[derive(Debug, Serialize, Deserialize)]
pub struct FlipSet {
    pub config: PointConfiguration,
    pub from: Triangulation,
    pub to: Triangulation,
    pub flips: Vec<Flip>,
    /// Integer vector of each label, when the configuration comes from a tile.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vectors: Option<Vec<IVec>>,
}

fn local(t: &[Vec<usize>], labels: &[usize]) -> Result<Triangulation> {
    let lists = t
        .iter()
        .map(|s| {
            s.iter()
                .map(|g| {
                    labels
                        .iter()
                        .position(|x| x == g)
                        .ok_or_else(|| Error::InvalidInput(format!("label {g} is not on the facet")))
                })
                .collect::<Result<Vec<usize>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Triangulation::from_lists(&lists))
}

fn flip_path_cmd(cli: &Cli, src: &ConfigSource, from: Option<&Path>, to: Option<&Path>) -> Result<Output> {
    let (cfg, origin) = load_config(src)?;
    let vectors = origin
        .as_ref()
        .map(|(tile, labels)| labels.iter().map(|&l| tile.vectors()[l].clone()).collect::<Vec<IVec>>());
    let (a, b) = match (from, to) {
        (Some(f), Some(t)) => (read_json::<Triangulation>(f)?, read_json::<Triangulation>(t)?),
        (None, None) => {
            // the printed pair on the built-in facet
            let (tile, labels) = origin.as_ref().ok_or_else(|| Error::InvalidInput("--from and --to are required".into()))?;
            let data = builtin_dataset(tile.n())?
                .facet
                .filter(|d| d.vertices == *labels)
                .ok_or_else(|| Error::InvalidInput("--from and --to are required off the built-in facet".into()))?;
            (local(&data.triangulations[0], labels)?, local(&data.triangulations[1], labels)?)
        }
        _ => return Err(Error::InvalidInput("give both --from and --to".into())),
    };
    let path = flip_path(&cfg, &a, &b, states(cli))?;
    let mut certs = Vec::new();
    for f in &path {
        let identity = verify_flip_identity(&cfg, f)?;
        certs.push(CertificateFile::flip_identity(&FlipIdentityCertificate {
            config: cfg.clone(),
            flip: f.clone(),
            identity,
        })?);
    }
    let summary = json!({
        "length": path.len(),
        "circuits": path.iter().map(|f| f.circuit.labels.clone()).collect::<Vec<_>>(),
    });
    let set = FlipSet {
        config: cfg,
        from: a,
        to: b,
        flips: path,
        vectors,
    };
    Ok(Output {
        summary,
        artifact: Some(serde_json::to_value(&set)?),
        certificate: Some(serde_json::to_value(&certs)?),
        valid: true,
    })
}

fn flip_verify(input: &Path, cone_vertex: Option<&str>) -> Result<Output> {
    let set: FlipSet = read_json(input)?;
    let cfg = PointConfiguration::new(set.config.points.clone())?;
    if let Some(vs) = &set.vectors {
        if vs.len() != cfg.len() {
            return Err(Error::InvalidInput("one vector per point is needed".into()));
        }
    }
    let x: Option<IVec> = match (cone_vertex, &set.vectors) {
        (Some(_), None) => return Err(Error::InvalidInput("--cone-vertex needs a path computed on a tile".into())),
        (Some(s), Some(_)) => Some(
            s.split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| Error::InvalidInput(format!("bad entry `{t}`"))))
                .collect::<Result<IVec>>()?,
        ),
        (None, Some(vs)) => Some((0..vs[0].len()).map(|i| i64::from(i == 0)).collect()),
        (None, None) => None,
    };
    let mut t = set.from.clone();
    let mut ids: Vec<FlipIdentity> = Vec::new();
    let mut secondary = Vec::new();
    let mut valid = true;
    for f in &set.flips {
        if Flip::from_parts(f.circuit.clone(), f.links.clone()) != *f {
            return Err(Error::InvalidInput("flip is inconsistent with its circuit and links".into()));
        }
        let id = verify_flip_identity(&cfg, f)?;
        t = crate::polytope::apply_flip(&cfg, &t, f)?;
        if let Some(x) = &x {
            let fl = Flipon {
                circuit: f.circuit.labels.clone(),
                links: id.links.clone(),
                vectors: set.vectors.clone(),
            };
            if x.len() != set.vectors.as_ref().map_or(0, |v| v[0].len()) {
                return Err(Error::InvalidInput("cone vertex has the wrong length".into()));
            }
            let predicate = fl.check_predicate()?;
            let terms = fl.vector_terms().expect("vectors present");
            let s = secondary_flipons(&terms, x)?;
            let ok = predicate && s.identity_holds() && s.ii_iii_cancel();
            valid &= ok;
            secondary.push(json!({
                "x": x,
                "flipon_predicate": predicate,
                "omega_terms": s.omega.len(),
                "psi_terms": s.psi.len(),
                "identity": s.identity_holds() && s.ii_iii_cancel(),
            }));
        }
        ids.push(id);
    }
    if t != set.to {
        valid = false;
    }
    let summary = json!({
        "flips": set.flips.len(),
        "reaches_target": t == set.to,
        "secondary": secondary,
        "valid": valid,
    });
    let certs = set
        .flips
        .iter()
        .zip(&ids)
        .map(|(f, id)| {
            CertificateFile::flip_identity(&FlipIdentityCertificate {
                config: cfg.clone(),
                flip: f.clone(),
                identity: id.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Output {
        summary: summary.clone(),
        artifact: Some(json!({"summary": summary, "identities": ids})),
        certificate: Some(serde_json::to_value(&certs)?),
        valid,
    })
}

/// A chain from either a cycle file or a plain list of terms.
fn load_chain(path: &Path) -> Result<SharblyChain> {
    let v: Value = read_json(path)?;
    if let Ok(z) = serde_json::from_value::<CycleChain>(v.clone()) {
        return z.chain();
    }
    let terms: Vec<ChainTerm> =
        serde_json::from_value(v).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    SharblyChain::from_terms(&terms)
}

/// A cycle file, or a list of terms read as an unlabelled cycle.
fn load_cycle(path: &Path) -> Result<CycleChain> {
    let v: Value = read_json(path)?;
    if let Ok(z) = serde_json::from_value::<CycleChain>(v.clone()) {
        return Ok(z);
    }
    let terms: Vec<ChainTerm> =
        serde_json::from_value(v).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    let chain = SharblyChain::from_terms(&terms)?;
    let n = chain
        .iter()
        .next()
        .map(|(b, _)| b.n())
        .ok_or_else(|| Error::InvalidInput("empty chain".into()))?;
    let terms = chain
        .iter()
        .map(|(b, c)| CycleTerm {
            tile: String::new(),
            simplex: Vec::new(),
            vectors: b.vectors.clone(),
            weight: num_traits::Signed::abs(c),
            sign: sign(c),
        })
        .collect();
    Ok(CycleChain { n, terms })
}

fn coinvariant_report(d: &SharblyChain, dict: &mut OrbitDictionary) -> Result<Output> {
    let mut totals: BTreeMap<usize, Q> = BTreeMap::new();
    for (b, c) in d.iter() {
        let l = dict.lookup(b)?;
        *totals.entry(l.class_id).or_insert_with(num_traits::Zero::zero) += c * Q::from_integer(l.sign.into());
    }
    let mut rows = Vec::new();
    let mut nonzero = 0;
    for (id, c) in &totals {
        let class = dict.class(*id).expect("registered");
        if !class.is_zero && !num_traits::Zero::is_zero(c) {
            nonzero += 1;
        }
        let mut row = json!({
            "class_id": id,
            "vectors": class.representative.vectors,
            "coeff": q_to_string(c),
            "is_zero": class.is_zero,
        });
        if let Some(w) = &class.witness {
            row["witness_g"] = serde_json::to_value(w)?;
        }
        rows.push(row);
    }
    Ok(Output::plain(json!({"classes": totals.len(), "nonzero_classes": nonzero}), json!(rows)))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CertBundle {
    One(CertificateFile),
    Many(Vec<CertificateFile>),
}

fn cert_check(path: &Path, stdout: &mut dyn Write) -> Result<i32> {
    let files = match read_json::<CertBundle>(path)? {
        CertBundle::One(f) => vec![f],
        CertBundle::Many(v) => v,
    };
    let reports: Vec<cert::CheckReport> = files.iter().map(cert::check).collect();
    let valid = !reports.is_empty() && reports.iter().all(|r| r.valid());
    let v = json!({"valid": valid, "certificates": reports});
    writeln!(stdout, "{}", serde_json::to_string_pretty(&v)?)?;
    Ok(if valid { EXIT_OK } else { EXIT_INVALID })
}

fn repro(cli: &Cli, seed: u64, skip_n5: bool, stdout: &mut dyn Write) -> Result<i32> {
    let guard = cli.out.as_deref().map(WriteGuard::new).transpose()?;
    let results = run_all(&ReproOptions { seed, skip_n5 });
    for r in &results {
        let status = if r.skipped {
            "SKIP"
        } else if r.passed {
            "PASS"
        } else {
            "FAIL"
        };
        writeln!(stdout, "{:>2}  {status}  {:>9} ms  {:<36} {}", r.id, r.millis, r.name, r.detail)?;
    }
    if let Some(p) = &cli.out {
        write_json(p, &serde_json::to_value(&results)?)?;
        if let Some(_guard) = guard { WriteGuard::keep(_guard) }
    }
    Ok(if results.iter().all(|r| r.passed || r.skipped) { EXIT_OK } else { EXIT_INVALID })
}
