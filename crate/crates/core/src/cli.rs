//! Command-line frontend. Exit codes: 0 success, 1 verification or search
//! failure, 2 usage or input error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::construct::{self, ProductCensus, Tower};
use crate::datasets::{self, DatasetKind};
use crate::designs::TriangleSystem;
use crate::error::{Error, Result};
use crate::format::{self, DesignFile, Header};
use crate::gf2n::{default_poly, FieldCtx};
use crate::orbits::{self, parse_hex, Certificate};
use crate::search::{self, SearchOptions};
use crate::xcover::Limits;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "tridesign", version, about = "Triangle designs over GF(2)")]
struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Print the report as JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Field arithmetic queries.
    Field(FieldArgs),
    /// Gamma sets of residues and the triangle-orbit criterion.
    Gamma(GammaArgs),
    /// Search for an orbit certificate.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Expand a certificate into a design file.
    Expand(ExpandArgs),
    /// Verify a design file.
    Verify(VerifyArgs),
    /// Recursive constructions.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Embedded datasets.
    #[command(subcommand)]
    Datasets(DatasetsCmd),
}

#[derive(Args, Debug)]
struct FieldOpts {
    #[arg(long)]
    n: u32,
    /// Reduction polynomial in hex, including the x^n bit.
    #[arg(long)]
    poly: Option<String>,
}

#[derive(Args, Debug)]
struct FieldArgs {
    #[command(flatten)]
    field: FieldOpts,
    /// Zech logarithm z(k).
    #[arg(long, allow_negative_numbers = true)]
    zech: Vec<i64>,
    /// Discrete log of a hex element.
    #[arg(long)]
    log: Vec<String>,
    /// Element xi^k in hex.
    #[arg(long, allow_negative_numbers = true)]
    exp: Vec<i64>,
    /// Print the full exp/Zech table.
    #[arg(long)]
    table: bool,
}

#[derive(Args, Debug)]
struct GammaArgs {
    #[command(flatten)]
    field: FieldOpts,
    /// Residues; three of them are also tested as a triangle orbit.
    #[arg(long, required = true, allow_negative_numbers = true)]
    k: Vec<i64>,
}

#[derive(Args, Debug)]
struct SearchOpts {
    #[arg(long)]
    poly: Option<String>,
    /// Shuffle seed for the exact-cover solver.
    #[arg(long)]
    seed: Option<u64>,
    /// Race this many seeded solvers; the winner is not deterministic.
    #[arg(long)]
    portfolio: Option<usize>,
    #[arg(long)]
    node_limit: Option<u64>,
    /// Time limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Permit searches above the desk-scale work estimate.
    #[arg(long)]
    allow_long: bool,
    /// Certificate JSON output; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the exact-cover instance in text form.
    #[arg(long)]
    dump_instance: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum SearchCmd {
    /// Singer-invariant (n, m) GDD.
    Singer {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[command(flatten)]
        opts: SearchOpts,
    },
    /// Singer- and Frobenius-invariant design.
    Frobenius {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        opts: SearchOpts,
    },
}

#[derive(Args, Debug)]
struct ExpandArgs {
    #[arg(long)]
    cert: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Emit a GDD with point groups even when m = 1.
    #[arg(long)]
    groups: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Also check that every point lies on the same number of triangles.
    #[arg(long)]
    balanced: bool,
    /// Require a GDD file.
    #[arg(long)]
    gdd: bool,
}

#[derive(Subcommand, Debug)]
enum ConstructCmd {
    /// Direct product of two designs; one dimension must be even.
    Product {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        /// GDD file whose groups give the line spread of the even factor.
        #[arg(long)]
        spread: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Balanced design of dimension m + 6 from a balanced design of dimension m.
    BalancedExt {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The (6k, 6) GDD from the subfield tower.
    Gdd6k {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Count triangles by streaming every plane.
        #[arg(long)]
        count: bool,
        /// Check this many random non-group lines.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Fill every group of a GDD with a copy of a smaller design or GDD.
    Fill {
        #[arg(long)]
        gdd: PathBuf,
        #[arg(long)]
        filler: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EmitFormat {
    Design,
    Cert,
}

#[derive(Subcommand, Debug)]
enum DatasetsCmd {
    List,
    Emit {
        #[arg(long)]
        name: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = EmitFormat::Design)]
        format: EmitFormat,
    },
}

struct Outcome {
    ok: bool,
    json: Value,
    text: String,
}

impl Outcome {
    fn ok(json: Value, text: String) -> Self {
        Outcome {
            ok: true,
            json,
            text,
        }
    }
}

/// Exit code for an error: search and verification failures are 1,
/// everything else is a usage or input problem.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Unsatisfiable
        | Error::LimitExceeded { .. }
        | Error::OrbitCollision(_)
        | Error::GroupLineInTriangle(_)
        | Error::Construction(_)
        | Error::CorruptDataset { .. } => EXIT_FAILED,
        _ => EXIT_USAGE,
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let name = command_name(&cli.cmd);
    match pool.install(|| dispatch(&cli.cmd)) {
        Ok(out) => {
            let code = if out.ok { EXIT_OK } else { EXIT_FAILED };
            if cli.json {
                let mut v = json!({ "command": name, "ok": out.ok, "exit_code": code });
                if let (Value::Object(dst), Value::Object(src)) = (&mut v, out.json) {
                    dst.extend(src);
                }
                println!("{}", serde_json::to_string_pretty(&v).expect("json"));
            } else {
                print!("{}", out.text);
            }
            code
        }
        Err(e) => {
            let code = exit_code(&e);
            if cli.json {
                let v = json!({
                    "command": name,
                    "ok": false,
                    "exit_code": code,
                    "error": e.to_string(),
                });
                println!("{}", serde_json::to_string_pretty(&v).expect("json"));
            }
            eprintln!("error: {e}");
            code
        }
    }
}

fn command_name(c: &Cmd) -> &'static str {
    match c {
        Cmd::Field(_) => "field",
        Cmd::Gamma(_) => "gamma",
        Cmd::Search(SearchCmd::Singer { .. }) => "search singer",
        Cmd::Search(SearchCmd::Frobenius { .. }) => "search frobenius",
        Cmd::Expand(_) => "expand",
        Cmd::Verify(_) => "verify",
        Cmd::Construct(ConstructCmd::Product { .. }) => "construct product",
        Cmd::Construct(ConstructCmd::BalancedExt { .. }) => "construct balanced-ext",
        Cmd::Construct(ConstructCmd::Gdd6k { .. }) => "construct gdd6k",
        Cmd::Construct(ConstructCmd::Fill { .. }) => "construct fill",
        Cmd::Datasets(DatasetsCmd::List) => "datasets list",
        Cmd::Datasets(DatasetsCmd::Emit { .. }) => "datasets emit",
    }
}

fn dispatch(c: &Cmd) -> Result<Outcome> {
    match c {
        Cmd::Field(a) => field(a),
        Cmd::Gamma(a) => gamma(a),
        Cmd::Search(s) => search_cmd(s),
        Cmd::Expand(a) => expand(a),
        Cmd::Verify(a) => verify(a),
        Cmd::Construct(c) => construct_cmd(c),
        Cmd::Datasets(d) => datasets_cmd(d),
    }
}

fn parse_poly(n: u32, poly: &Option<String>) -> Result<Option<u32>> {
    let Some(p) = poly else { return Ok(None) };
    let p = parse_hex(p)?;
    if default_poly(n).ok() != Some(p) {
        eprintln!("warning: non-default polynomial {p:#x}; embedded datasets assume the defaults");
    }
    Ok(Some(p))
}

fn field_ctx(f: &FieldOpts) -> Result<FieldCtx> {
    FieldCtx::new(f.n, parse_poly(f.n, &f.poly)?)
}

fn field(a: &FieldArgs) -> Result<Outcome> {
    let ctx = field_ctx(&a.field)?;
    let mut text = format!(
        "GF(2^{}) poly {:#x} order {}\n",
        ctx.n(),
        ctx.poly(),
        ctx.order()
    );
    let mut zech = Vec::new();
    for &k in &a.zech {
        let z = ctx.zech(k)?;
        writeln!(text, "zech({k}) = {z}").unwrap();
        zech.push(json!({ "k": k, "value": z }));
    }
    let mut logs = Vec::new();
    for x in &a.log {
        let v = parse_hex(x)?;
        let l = ctx.log(v)?;
        writeln!(text, "log({v:#x}) = {l}").unwrap();
        logs.push(json!({ "x": v, "value": l }));
    }
    let mut exps = Vec::new();
    for &k in &a.exp {
        let e = ctx.exp(k);
        writeln!(text, "exp({k}) = {e:#x}").unwrap();
        exps.push(json!({ "k": k, "value": e }));
    }
    let mut table = Vec::new();
    if a.table {
        text.push_str("k exp zech\n");
        for k in 0..ctx.order() {
            let z = if k == 0 { None } else { Some(ctx.zech_r(k)) };
            match z {
                Some(z) => writeln!(text, "{k} {:x} {z}", ctx.exp_r(k)).unwrap(),
                None => writeln!(text, "{k} {:x} -", ctx.exp_r(k)).unwrap(),
            }
            table.push(json!({ "k": k, "exp": ctx.exp_r(k), "zech": z }));
        }
    }
    let mut j = json!({
        "n": ctx.n(),
        "poly": format!("{:#x}", ctx.poly()),
        "order": ctx.order(),
        "zech": zech,
        "log": logs,
        "exp": exps,
    });
    if a.table {
        j["table"] = Value::Array(table);
    }
    Ok(Outcome::ok(j, text))
}

fn gamma(a: &GammaArgs) -> Result<Outcome> {
    let ctx = field_ctx(&a.field)?;
    let mut text = String::new();
    let mut sets = Vec::new();
    for &k in &a.k {
        let g = orbits::gamma(&ctx, k)?;
        let cy = orbits::cy_gamma(&ctx, k)?;
        writeln!(
            text,
            "gamma({k}) = {:?} key {} (Frobenius closure: {} residues)",
            g.elems(),
            g.key(),
            cy.len()
        )
        .unwrap();
        sets.push(json!({ "k": k, "elems": g.elems(), "key": g.key(), "closure_size": cy.len() }));
    }
    let mut j = json!({ "n": ctx.n(), "poly": format!("{:#x}", ctx.poly()), "sets": sets });
    if let [k1, k2, k3] = a.k[..] {
        let t = orbits::is_triangle_orbit(&ctx, k1, k2, k3)?;
        writeln!(text, "triangle orbit: {}", if t { "yes" } else { "no" }).unwrap();
        j["triangle_orbit"] = json!(t);
    }
    Ok(Outcome::ok(j, text))
}

fn search_options(n: u32, o: &SearchOpts) -> Result<SearchOptions> {
    let limits = Limits {
        nodes: o.node_limit,
        time: o
            .time_limit
            .map(|t| {
                Duration::try_from_secs_f64(t)
                    .map_err(|e| Error::Precondition(format!("bad time limit {t}: {e}")))
            })
            .transpose()?,
        seed: o.seed,
    };
    let base = o.seed.unwrap_or(0);
    Ok(SearchOptions {
        poly: parse_poly(n, &o.poly)?,
        limits,
        portfolio: o
            .portfolio
            .map(|p| (0..p as u64).map(|i| base.wrapping_add(i)).collect()),
        allow_long: o.allow_long,
    })
}

fn write_cert(out: &Option<PathBuf>, cert: &Certificate, text: &mut String) -> Result<()> {
    match out {
        Some(p) => {
            fs::write(p, cert.to_json())?;
            writeln!(text, "certificate written to {}", p.display()).unwrap();
        }
        None => text.push_str(&cert.to_json()),
    }
    Ok(())
}

fn search_cmd(s: &SearchCmd) -> Result<Outcome> {
    let (kind, n, m, o) = match s {
        SearchCmd::Singer { n, m, opts } => ("singer", *n, *m, opts),
        SearchCmd::Frobenius { n, opts } => ("frobenius", *n, 1, opts),
    };
    let opts = search_options(n, o)?;
    if let Some(path) = &o.dump_instance {
        let ctx = FieldCtx::new(n, opts.poly)?;
        let inst = if kind == "singer" {
            search::singer_instance(&ctx, m)?
        } else {
            search::frobenius_instance(&ctx)?
        };
        inst.cover
            .dump(std::io::BufWriter::new(fs::File::create(path)?))?;
    }
    let (cert, stats, count) = if kind == "singer" {
        let r = search::search_singer(n, m, &opts)?;
        let c = r.cert.reps.len();
        (Certificate::Singer(r.cert), r.stats, c)
    } else {
        let r = search::search_frobenius(n, &opts)?;
        let c = r.cert.pairs.len();
        (Certificate::Frobenius(r.cert), r.stats, c)
    };
    let mut text = format!(
        "search {kind} n={n} m={m}: {count} representatives ({} items, {} candidates, {} nodes, {} ms)\n",
        stats.items, stats.candidates, stats.nodes, stats.elapsed_ms
    );
    write_cert(&o.out, &cert, &mut text)?;
    let j = json!({
        "kind": kind,
        "n": n,
        "m": m,
        "poly": format!("{:#x}", cert.poly()),
        "representatives": count,
        "stats": stats,
        "out": o.out.as_ref().map(|p| p.display().to_string()),
    });
    Ok(Outcome::ok(j, text))
}

fn file_label(p: &Path) -> String {
    p.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn save(out: &Option<PathBuf>, f: &DesignFile, text: &mut String) -> Result<()> {
    if let Some(p) = out {
        format::save(p, f)?;
        writeln!(text, "written to {}", p.display()).unwrap();
    }
    Ok(())
}

fn summary(s: &TriangleSystem) -> Value {
    let m = match s {
        TriangleSystem::Design(_) => 1,
        TriangleSystem::Gdd(g) => g.m(),
    };
    json!({
        "kind": if s.is_gdd() { "gdd" } else { "design" },
        "n": s.n(),
        "m": m,
        "triangle_count": s.triangles().len(),
    })
}

fn expand(a: &ExpandArgs) -> Result<Outcome> {
    let cert = Certificate::from_json(&fs::read_to_string(&a.cert)?)?;
    let ctx = FieldCtx::new(cert.n(), Some(cert.poly()))?;
    let sys = orbits::expand_certificate(&ctx, &cert, a.groups)?;
    let mut text = format!(
        "expanded {} into {} triangles on F_2^{}\n",
        a.cert.display(),
        sys.triangles().len(),
        sys.n()
    );
    let f = DesignFile::new(sys, Some(&format!("expand {}", file_label(&a.cert))));
    save(&Some(a.out.clone()), &f, &mut text)?;
    let mut j = summary(&f.system);
    j["out"] = json!(a.out.display().to_string());
    Ok(Outcome::ok(j, text))
}

fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let f = format::load(&a.input)?;
    if a.gdd && !f.system.is_gdd() {
        return Err(Error::Precondition(format!(
            "{} is not a GDD file",
            a.input.display()
        )));
    }
    let cover = f.system.verify()?;
    let mut ok = cover.ok;
    let mut text = cover.to_string();
    let mut j = json!({ "cover": cover });
    if a.balanced {
        let b = f.system.balance();
        ok &= b.balanced;
        text.push_str(&b.to_string());
        j["balance"] = serde_json::to_value(&b)?;
    }
    Ok(Outcome { ok, json: j, text })
}

fn load_design(p: &Path) -> Result<crate::designs::Design> {
    let f = format::load(p)?;
    if f.system.is_gdd() {
        return Err(Error::Precondition(format!(
            "{} is a GDD, expected a design",
            p.display()
        )));
    }
    f.system.into_design()
}

fn construct_cmd(c: &ConstructCmd) -> Result<Outcome> {
    match c {
        ConstructCmd::Product {
            left,
            right,
            spread,
            out,
        } => {
            let (l, r) = (load_design(left)?, load_design(right)?);
            let sp = match spread {
                Some(p) => Some(format::load(p)?.system.into_gdd()?.groups),
                None => None,
            };
            let po = construct::product(&l, &r, sp.as_ref())?;
            let (plain, spread_n) = if r.n % 2 == 0 { (l.n, r.n) } else { (r.n, l.n) };
            let expected = ProductCensus::expected(plain, spread_n);
            let c = po.census;
            let mut text = format!(
                "product n={}: {} triangles (A {} B {} C {} D {} E {} F {})\n",
                po.design.n,
                po.design.triangles.len(),
                c.a,
                c.b,
                c.c,
                c.d,
                c.e,
                c.f
            );
            let f = DesignFile::new(
                TriangleSystem::Design(po.design),
                Some(&format!(
                    "product {} {}",
                    file_label(left),
                    file_label(right)
                )),
            );
            save(out, &f, &mut text)?;
            let mut j = summary(&f.system);
            j["census"] = serde_json::to_value(c)?;
            j["census_matches"] = json!(c == expected);
            Ok(Outcome {
                ok: c == expected,
                json: j,
                text,
            })
        }
        ConstructCmd::BalancedExt { input, out } => {
            let d = load_design(input)?;
            let b = construct::balanced_extension(&d)?;
            let mut text = format!(
                "balanced extension n={}: {} triangles, {} rotated spreads\n",
                b.design.n,
                b.design.triangles.len(),
                b.special_y.len()
            );
            let f = DesignFile::new(
                TriangleSystem::Design(b.design),
                Some(&format!("balanced-ext {}", file_label(input))),
            );
            save(out, &f, &mut text)?;
            let mut j = summary(&f.system);
            j["intermediate_clean"] = json!(b.intermediate_clean);
            Ok(Outcome::ok(j, text))
        }
        ConstructCmd::Gdd6k {
            k,
            out,
            count,
            sample,
            seed,
        } => gdd6k(*k, out, *count, *sample, *seed),
        ConstructCmd::Fill { gdd, filler, out } => {
            let g = format::load(gdd)?.system.into_gdd()?;
            let fl = format::load(filler)?.system;
            let sys = construct::fill_groups(&g, &fl)?;
            let mut text = format!(
                "filled {} groups: {} triangles\n",
                g.groups.groups.len(),
                sys.triangles().len()
            );
            let f = DesignFile::new(
                sys,
                Some(&format!("fill {} {}", file_label(gdd), file_label(filler))),
            );
            save(out, &f, &mut text)?;
            Ok(Outcome::ok(summary(&f.system), text))
        }
    }
}

fn gdd6k(
    k: u32,
    out: &Option<PathBuf>,
    count: bool,
    sample: Option<usize>,
    seed: u64,
) -> Result<Outcome> {
    let t = Tower::new(k)?;
    let total = t.triangle_count();
    let mut ok = true;
    let mut text = format!(
        "tower k={k}: n={} planes={} per-plane={} triangles={total}\n",
        t.n(),
        t.planes().len(),
        t.per_plane()
    );
    let mut j = json!({
        "kind": "gdd",
        "n": t.n(),
        "m": 6,
        "triangle_count": total,
        "planes": t.planes().len(),
        "per_plane": t.per_plane(),
    });
    if count {
        let start = Instant::now();
        let streamed = t.stream_count();
        ok &= streamed == total;
        writeln!(
            text,
            "streamed {streamed} triangles in {} ms",
            start.elapsed().as_millis()
        )
        .unwrap();
        j["streamed"] = json!(streamed);
    }
    if let Some(s) = sample {
        let hit = t.sample_coverage(s, seed)?;
        ok &= hit == s;
        writeln!(
            text,
            "sampled {s} non-group lines: {hit} covered exactly once"
        )
        .unwrap();
        j["sampled"] = json!(s);
        j["sampled_exact"] = json!(hit);
    }
    if let Some(p) = out {
        let groups = t.groups()?;
        let h = Header {
            gdd: true,
            n: t.n(),
            m: 6,
            poly: t.ctx().poly(),
            count: total,
            provenance: Some(format!("gdd6k {k}")),
        };
        let mut w = format::open_write(p)?;
        format::write_stream(&mut w, &h, t.cursor(), Some(&groups))?;
        drop(w);
        writeln!(text, "written to {}", p.display()).unwrap();
        j["out"] = json!(p.display().to_string());
    }
    Ok(Outcome { ok, json: j, text })
}

fn kind_name(k: DatasetKind) -> &'static str {
    match k {
        DatasetKind::MuOrbitDesign => "mu-orbit design",
        DatasetKind::Xi3OrbitGdd => "xi3-orbit gdd",
        DatasetKind::SingerGdd => "singer gdd",
        DatasetKind::FrobeniusDesign => "frobenius design",
    }
}

fn datasets_cmd(d: &DatasetsCmd) -> Result<Outcome> {
    match d {
        DatasetsCmd::List => {
            let mut text = String::new();
            let mut list = Vec::new();
            for name in datasets::dataset_names() {
                let ds = datasets::load_dataset(name)?;
                writeln!(
                    text,
                    "{:<8} {:<17} n={:<2} m={} reps={:<3} {}",
                    ds.name,
                    kind_name(ds.kind),
                    ds.n,
                    ds.m,
                    ds.payload.len(),
                    ds.description
                )
                .unwrap();
                list.push(json!({
                    "name": ds.name,
                    "kind": kind_name(ds.kind),
                    "n": ds.n,
                    "m": ds.m,
                    "reps": ds.payload.len(),
                    "description": ds.description,
                }));
            }
            for name in datasets::EXTERNAL {
                writeln!(
                    text,
                    "{name:<8} external; re-derive with `search frobenius --n 19 --allow-long`"
                )
                .unwrap();
            }
            Ok(Outcome::ok(
                json!({ "datasets": list, "external": datasets::EXTERNAL }),
                text,
            ))
        }
        DatasetsCmd::Emit {
            name,
            out,
            format: fmt,
        } => {
            let ds = datasets::load_dataset(name)?;
            let mut text = String::new();
            let mut j = json!({ "name": ds.name, "format": if *fmt == EmitFormat::Cert { "cert" } else { "design" } });
            match fmt {
                EmitFormat::Cert => {
                    let cert = ds.certificate().ok_or_else(|| {
                        Error::Precondition(format!(
                            "{} has no orbit certificate; emit it as a design",
                            ds.name
                        ))
                    })?;
                    write_cert(&Some(out.clone()), &cert, &mut text)?;
                }
                EmitFormat::Design => {
                    let f = DesignFile::new(ds.expand()?, Some(ds.name));
                    save(&Some(out.clone()), &f, &mut text)?;
                    j["design"] = summary(&f.system);
                }
            }
            j["out"] = json!(out.display().to_string());
            Ok(Outcome::ok(j, text))
        }
    }
}
