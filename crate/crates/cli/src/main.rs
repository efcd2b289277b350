use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use bisetkit::biset::{biset_compose, bisets_isomorphic, butterfly, Biset};
use bisetkit::group::{
    all_subgroups, canonical_key, cyclic, dicyclic, dihedral, find_isomorphism, klein, alternating4, subgroup_class_index,
    subgroup_conjugacy_classes, symmetric, GroupKey, GroupRef,
};
use bisetkit::gset::{burnside_mul, table_of_marks, BurnsideElement, GSet, GSetRef};
use bisetkit::mackey::{
    is_deflative, BisetFunctor, BurnsideFunctor, Deflativity, MatrixAction, ObigFunctor, Phi, Psi, SpanAction,
    SpanFunctor, ZeroFunctor,
};
use bisetkit::span::{range, span_compose, span_of_biset, Obig, Span, VirtualSpan, DEFAULT_OBIG_CAP};
use bisetkit::twocat::{compose_onecells, is_stab_surjective, sim_factorize, two_pullback, OneCell};
use bisetkit::ZMatrix;
use bisetkit_cli::cache::{sha256_hex, Cache};
use bisetkit_cli::format::{render, to_canonical};
use bisetkit_cli::manifest::{
    biset_to_file, group_to_file, gset_to_file, onecell_to_file, span_to_file, Entity, Kind, Manifest, Payload,
    Resolver,
};
use bisetkit_cli::verify::{run_suite, FunctorChoice, Suite, VerifyOptions};
use bisetkit_cli::CliError;

#[derive(Parser)]
#[command(name = "bisetkit", version, about = "Spans, bisets and Mackey functors over small finite groups")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Largest group order for generated and enumerated groups.
    #[arg(long, global = true, default_value_t = 8)]
    max_order: usize,
    /// Number of random trials per suite.
    #[arg(long, global = true, default_value_t = 100)]
    trials: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Cache directory (default: $BISETKIT_CACHE or the user cache directory).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Groups given by multiplication tables.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Table of marks of a group.
    Marks { group: PathBuf },
    /// Arithmetic in the Burnside ring.
    #[command(subcommand)]
    Burnside(BurnsideCmd),
    /// 1-cells between finite sets with group actions.
    #[command(subcommand)]
    Cell(CellCmd),
    /// Spans of 1-cells and their ranges.
    #[command(subcommand)]
    Span(SpanCmd),
    /// The bigger Burnside ring.
    #[command(subcommand)]
    Obig(ObigCmd),
    /// Bisets: composition, butterfly decomposition, isomorphism.
    #[command(subcommand)]
    Biset(BisetCmd),
    /// Mackey functors from biset functors and back.
    #[command(subcommand)]
    Mackey(MackeyCmd),
    /// Run a verification suite (cells, pullback, sim, span-range, biset,
    /// burntobig, mackey, deflative, thm-roundtrip or all).
    Verify {
        suite: String,
        /// Functor examined by the deflative suite.
        #[arg(long, value_enum, default_value_t = DeflFunctor::Both)]
        functor: DeflFunctor,
        /// Where reproducer files of failed trials are written.
        #[arg(long, default_value = "bisetkit-repro")]
        repro_dir: PathBuf,
    },
    /// Validate any file and print it in canonical form.
    Fmt { file: PathBuf },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Validate a group file; a table whose identity is not element 0 is relabelled.
    Build { file: PathBuf },
    /// A standard group: cyclic n, dihedral n (order 2n), dicyclic n (order 4n), symmetric n, klein, alternating.
    Std { kind: StdKind, n: Option<usize> },
    /// All subgroups with their conjugacy classes.
    Subgroups { file: PathBuf },
    Iso { a: PathBuf, b: PathBuf },
    /// Canonical key: the least relabelled table up to order 8, else invariants.
    Key { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum StdKind {
    Cyclic,
    Dihedral,
    Dicyclic,
    Symmetric,
    Klein,
    Alternating,
}

#[derive(Subcommand)]
enum BurnsideCmd {
    /// Product of two elements given as coefficient vectors (JSON text or files).
    Mul { group: PathBuf, a: String, b: String },
}

#[derive(Subcommand)]
enum CellCmd {
    Validate { file: PathBuf },
    /// f∘g
    Compose { f: PathBuf, g: PathBuf },
    Sim { file: PathBuf },
    Pullback { f: PathBuf, g: PathBuf },
}

#[derive(Subcommand)]
enum SpanCmd {
    /// Decompose into classes of spans with transitive apex.
    Canon { file: PathBuf },
    /// t∘s
    Compose { t: PathBuf, s: PathBuf },
    Range { file: PathBuf },
}

#[derive(Subcommand)]
enum ObigCmd {
    /// Product of the classes of two 1-cells into the base.
    Mul {
        base: PathBuf,
        u: PathBuf,
        v: PathBuf,
        #[arg(long, default_value_t = DEFAULT_OBIG_CAP)]
        cap: usize,
    },
}

#[derive(Subcommand)]
enum BisetCmd {
    /// v ×_H u
    Compose { v: PathBuf, u: PathBuf },
    Butterfly { u: PathBuf },
    Iso { u: PathBuf, v: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum PsiFunctor {
    Burnside,
    Zero,
}

#[derive(Clone, Copy, ValueEnum)]
enum PhiFunctor {
    Burnside,
    Obig,
}

#[derive(Clone, Copy, ValueEnum)]
enum DeflFunctor {
    Burnside,
    Obig,
    Both,
}

#[derive(Subcommand)]
enum MackeyCmd {
    /// The matrix of a span under the Mackey functor of a biset functor.
    PsiEval {
        span: PathBuf,
        #[arg(long, value_enum, default_value_t = PsiFunctor::Burnside)]
        functor: PsiFunctor,
    },
    /// The value on a biset of the biset functor of a Mackey functor.
    PhiEval {
        biset: PathBuf,
        #[arg(long, value_enum, default_value_t = PhiFunctor::Burnside)]
        functor: PhiFunctor,
        /// Largest probe group order for the bigger Burnside functor.
        #[arg(long, default_value_t = bisetkit::mackey::DEFAULT_PROBE_ORDER)]
        probe_order: usize,
        #[arg(long, default_value_t = DEFAULT_OBIG_CAP)]
        cap: usize,
    },
    /// Test deflativity over catalog groups up to --max-order.
    Deflative {
        #[arg(long, value_enum, default_value_t = PhiFunctor::Obig)]
        functor: PhiFunctor,
    },
}

type Res<T> = Result<T, CliError>;

/// What a command produced: text for stdout and the exit status.
struct Out {
    text: String,
    code: u8,
}

impl Out {
    fn ok(v: Value) -> Out {
        Out { text: to_canonical(&v), code: 0 }
    }
}

fn load(path: &Path, kind: Kind) -> Res<Entity> {
    let m = Manifest::parse_file(path, Some(kind))?;
    Resolver::for_file(path).entity(&m.payload)
}

fn load_group(path: &Path) -> Res<GroupRef> {
    match load(path, Kind::Group)? {
        Entity::Group(g) => Ok(g),
        _ => unreachable!("kind checked"),
    }
}

fn load_gset(path: &Path) -> Res<GSetRef> {
    match load(path, Kind::Gset)? {
        Entity::Gset(x) => Ok(x),
        _ => unreachable!("kind checked"),
    }
}

fn load_cell(path: &Path) -> Res<OneCell> {
    match load(path, Kind::Onecell)? {
        Entity::Onecell(a) => Ok(a),
        _ => unreachable!("kind checked"),
    }
}

fn load_span(path: &Path) -> Res<Span> {
    match load(path, Kind::Span)? {
        Entity::Span(s) => Ok(s),
        _ => unreachable!("kind checked"),
    }
}

fn load_biset(path: &Path) -> Res<Biset> {
    match load(path, Kind::Biset)? {
        Entity::Biset(u) => Ok(u),
        _ => unreachable!("kind checked"),
    }
}

fn value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("plain data serializes")
}

fn matrix_json(m: &ZMatrix) -> Value {
    json!({"rows": m.rows(), "cols": m.cols(), "matrix": (0..m.rows()).map(|i| m.row(i).to_vec()).collect::<Vec<_>>()})
}

/// A coefficient vector given inline as JSON or as a file.
fn vector_arg(s: &str) -> Res<Vec<i64>> {
    let text = if s.trim_start().starts_with('[') {
        s.to_owned()
    } else {
        std::fs::read_to_string(s).map_err(|e| CliError::io(s, e))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Parse { path: s.into(), line: e.line(), column: e.column(), reason: e.to_string() })
}

fn classes_json(v: &VirtualSpan) -> Value {
    Value::Array(
        v.terms()
            .iter()
            .map(|(c, k)| {
                json!({
                    "group": value(&group_to_file(c.group())),
                    "left_orbit": c.left_orbit(),
                    "right_orbit": c.right_orbit(),
                    "lambda": c.lambda(),
                    "mu": c.mu(),
                    "coefficient": k,
                })
            })
            .collect(),
    )
}

fn obig_json(o: &Obig) -> Value {
    Value::Array(
        o.value()
            .terms()
            .iter()
            .map(|(c, k)| {
                json!({"group": value(&group_to_file(c.group())), "orbit": c.left_orbit(), "lambda": c.lambda(), "coefficient": k})
            })
            .collect(),
    )
}

fn key_json(k: &GroupKey) -> Value {
    match k {
        GroupKey::Table(t) => json!({"table": t}),
        GroupKey::Signature(s) => json!({"signature": {
            "order": s.order,
            "element_orders": s.element_orders,
            "class_sizes": s.class_sizes,
            "abelianization": s.abelianization,
        }}),
    }
}

fn table_text(g: &GroupRef) -> String {
    serde_json::to_string(&g.table()).expect("plain data serializes")
}

fn group_cmd(cmd: GroupCmd, cache: &Cache) -> Res<Out> {
    match cmd {
        GroupCmd::Build { file } => {
            let g = load_group(&file)?;
            Ok(Out { text: Manifest::bare(Payload::Group(group_to_file(&g))).serialize(), code: 0 })
        }
        GroupCmd::Std { kind, n } => {
            let need = || n.ok_or_else(|| CliError::Usage("this kind needs a parameter n".into()));
            let g = match kind {
                StdKind::Cyclic => cyclic(need()?)?,
                StdKind::Dihedral => dihedral(need()?)?,
                StdKind::Dicyclic => dicyclic(need()?)?,
                StdKind::Symmetric => symmetric(need()?)?,
                StdKind::Klein => klein(),
                StdKind::Alternating => alternating4(),
            };
            Ok(Out { text: Manifest::bare(Payload::Group(group_to_file(&g))).serialize(), code: 0 })
        }
        GroupCmd::Subgroups { file } => {
            let g = load_group(&file)?;
            let text = cache.get_or_compute("subgroups", &table_text(&g), || {
                let classes = subgroup_conjugacy_classes(&g)?;
                let mut sizes = vec![0usize; classes.len()];
                let mut subs = Vec::new();
                for h in all_subgroups(&g)? {
                    let c = subgroup_class_index(&h)?;
                    sizes[c] += 1;
                    subs.push(json!({"elements": h.elements(), "class": c}));
                }
                let classes: Vec<Value> = classes
                    .iter()
                    .zip(&sizes)
                    .map(|(h, n)| json!({"order": h.order(), "size": n, "representative": h.elements()}))
                    .collect();
                Ok(to_canonical(&json!({"order": g.order(), "classes": classes, "subgroups": subs})))
            })?;
            Ok(Out { text, code: 0 })
        }
        GroupCmd::Iso { a, b } => {
            let (g, h) = (load_group(&a)?, load_group(&b)?);
            let f = find_isomorphism(&g, &h, None)?;
            Ok(Out::ok(json!({"isomorphic": f.is_some(), "map": f.map(|f| f.image().to_vec())})))
        }
        GroupCmd::Key { file } => {
            let g = load_group(&file)?;
            let text = cache.get_or_compute("canon", &table_text(&g), || {
                let k = canonical_key(&g);
                let kj = key_json(&k);
                let mut out = json!({"order": g.order(), "exact": k.is_exact(), "key": sha256_hex(to_canonical(&kj).as_bytes())});
                if let GroupKey::Table(t) = &k {
                    let n = g.order();
                    out["table"] = json!(t.chunks(n).map(<[usize]>::to_vec).collect::<Vec<_>>());
                }
                Ok(to_canonical(&out))
            })?;
            Ok(Out { text, code: 0 })
        }
    }
}

fn cell_cmd(cmd: CellCmd) -> Res<Out> {
    match cmd {
        CellCmd::Validate { file } => {
            let m = Manifest::parse_file(&file, Some(Kind::Onecell))?;
            match Resolver::for_file(&file).entity(&m.payload) {
                Ok(_) => Ok(Out::ok(json!({"valid": true}))),
                Err(CliError::Validation { source, .. }) => {
                    Ok(Out { text: to_canonical(&json!({"valid": false, "reason": source.to_string()})), code: 1 })
                }
                Err(e) => Err(e),
            }
        }
        CellCmd::Compose { f, g } => {
            let c = compose_onecells(&load_cell(&f)?, &load_cell(&g)?)?;
            Ok(Out::ok(value(&onecell_to_file(&c))))
        }
        CellCmd::Sim { file } => {
            let a = load_cell(&file)?;
            let f = sim_factorize(&a);
            Ok(Out::ok(json!({
                "stab_surjective": is_stab_surjective(&a).holds(),
                "sim": value(&gset_to_file(&f.sim)),
                "upsilon": value(&onecell_to_file(&f.upsilon)),
                "tilde": value(&onecell_to_file(&f.tilde)),
            })))
        }
        CellCmd::Pullback { f, g } => {
            let pb = two_pullback(&load_cell(&f)?, &load_cell(&g)?)?;
            Ok(Out::ok(json!({
                "apex": value(&gset_to_file(&pb.apex)),
                "points": pb.points.iter().map(|&(x, y, k)| [x, y, k]).collect::<Vec<_>>(),
                "wp_x": value(&onecell_to_file(&pb.wp_x)),
                "wp_y": value(&onecell_to_file(&pb.wp_y)),
                "kappa": pb.kappa.eps(),
            })))
        }
    }
}

fn span_cmd(cmd: SpanCmd) -> Res<Out> {
    match cmd {
        SpanCmd::Canon { file } => {
            let s = load_span(&file)?;
            Ok(Out::ok(json!({"classes": classes_json(&VirtualSpan::of_span(&s)?)})))
        }
        SpanCmd::Compose { t, s } => {
            let c = span_compose(&load_span(&t)?, &load_span(&s)?)?;
            Ok(Out::ok(value(&span_to_file(&c))))
        }
        SpanCmd::Range { file } => Ok(Out::ok(value(&biset_to_file(&range(&load_span(&file)?))))),
    }
}

fn obig_cmd(cmd: ObigCmd) -> Res<Out> {
    let ObigCmd::Mul { base, u, v, cap } = cmd;
    let x = load_gset(&base)?;
    let of = |p: &Path| -> Res<Obig> {
        let a = load_cell(p)?;
        if *a.dst().as_ref() != *x {
            return Err(CliError::Usage(format!("{}: the 1-cell does not end at the base", p.display())));
        }
        // re-target at the shared base so products compare by pointer
        let a = OneCell::from_flat(a.src().clone(), x.clone(), a.alpha().to_vec(), a.theta_flat().to_vec())?;
        Ok(Obig::of_cell(&a)?.with_cap(cap))
    };
    let p = of(&u)?.mul(&of(&v)?)?;
    Ok(Out::ok(json!({"classes": obig_json(&p)})))
}

fn biset_cmd(cmd: BisetCmd) -> Res<Out> {
    match cmd {
        BisetCmd::Compose { v, u } => Ok(Out::ok(value(&biset_to_file(&biset_compose(&load_biset(&v)?, &load_biset(&u)?)?)))),
        BisetCmd::Butterfly { u } => {
            let u = load_biset(&u)?;
            let b = butterfly(&u)?;
            let d = &b.data;
            Ok(Out::ok(json!({
                "c": d.c.elements(),
                "d0": d.d0.elements(),
                "b": d.b.elements(),
                "a": d.a.elements(),
                "iso": d.iso.iter().map(|&(x, y)| [x, y]).collect::<Vec<_>>(),
                "reassembled_isomorphic": bisets_isomorphic(&b.reassembled, &u)?,
            })))
        }
        BisetCmd::Iso { u, v } => Ok(Out::ok(json!({"isomorphic": bisets_isomorphic(&load_biset(&u)?, &load_biset(&v)?)?}))),
    }
}

fn deflativity_json(label: &str, d: &Deflativity) -> Value {
    match d {
        Deflativity::Yes => json!({"functor": label, "deflative": true}),
        Deflativity::Witness { group, normal, probe } => json!({
            "functor": label,
            "deflative": false,
            "witness": {"group": group, "normal": normal, "probe": probe},
        }),
    }
}

fn mackey_cmd(cmd: MackeyCmd, g: &Global) -> Res<Out> {
    match cmd {
        MackeyCmd::PsiEval { span, functor } => {
            let s = load_span(&span)?;
            let m: ZMatrix = match functor {
                PsiFunctor::Burnside => Psi::new(BurnsideFunctor).eval_span(&s)?,
                PsiFunctor::Zero => Psi::new(ZeroFunctor).eval_span(&s)?,
            };
            Ok(Out::ok(matrix_json(&m)))
        }
        MackeyCmd::PhiEval { biset, functor, probe_order, cap } => {
            let u = load_biset(&biset)?;
            match functor {
                PhiFunctor::Burnside => {
                    let m: ZMatrix = Phi::new(Psi::new(BurnsideFunctor)).matrix(&u)?;
                    Ok(Out::ok(matrix_json(&m)))
                }
                PhiFunctor::Obig => {
                    let f = ObigFunctor { cap, probe_order };
                    let s = span_of_biset(&u);
                    let src: GSetRef = Arc::new(GSet::point(u.right_group()));
                    // re-source the span at the shared point so composites line up
                    let s = Span::new(s.left().clone(), OneCell::from_flat(s.apex().clone(), src.clone(), s.right().alpha().to_vec(), s.right().theta_flat().to_vec())?)?;
                    let rows: Vec<Value> = f
                        .probes(&src)?
                        .iter()
                        .map(|p| Ok(json!({"probe": obig_json(p), "image": obig_json(&f.act_span(&s, p)?)})))
                        .collect::<Res<_>>()?;
                    Ok(Out::ok(json!({"probes": rows})))
                }
            }
        }
        MackeyCmd::Deflative { functor } => {
            let v = match functor {
                PhiFunctor::Burnside => {
                    deflativity_json("burnside", &is_deflative(&MatrixAction(Psi::new(BurnsideFunctor)), g.max_order)?)
                }
                PhiFunctor::Obig => deflativity_json("obig", &is_deflative(&ObigFunctor::default(), g.max_order)?),
            };
            Ok(Out::ok(v))
        }
    }
}

fn verify_cmd(suite: &str, functor: DeflFunctor, repro_dir: &Path, g: &Global) -> Res<Out> {
    let suites = Suite::parse(suite)?;
    let opts = VerifyOptions {
        max_order: g.max_order,
        trials: g.trials,
        seed: g.seed,
        functor: match functor {
            DeflFunctor::Burnside => FunctorChoice::Burnside,
            DeflFunctor::Obig => FunctorChoice::Obig,
            DeflFunctor::Both => FunctorChoice::Both,
        },
    };
    let mut reports = Vec::new();
    let mut ok = true;
    for s in suites {
        let r = run_suite(s, &opts)?;
        eprintln!("{}: {} of {} passed in {:.1?}", r.suite, r.passed, r.trials, r.wall_time);
        if !r.ok() {
            ok = false;
            std::fs::create_dir_all(repro_dir).map_err(|e| CliError::io(repro_dir, e))?;
            for f in &r.failures {
                let path = repro_dir.join(f.reproducer.file_name());
                std::fs::write(&path, render(&f.reproducer)).map_err(|e| CliError::io(&path, e))?;
                eprintln!("  failure at seed {}: {} (reproducer {})", f.seed, f.reason, path.display());
            }
        }
        reports.push(value(&r));
    }
    let v = if reports.len() == 1 { reports.pop().expect("one report") } else { json!({"reports": reports}) };
    Ok(Out { text: to_canonical(&v), code: if ok { 0 } else { 1 } })
}

fn run(cli: Cli) -> Res<Out> {
    let g = cli.global;
    let cache = if g.no_cache { Cache::disabled() } else { Cache::at(g.cache_dir.clone().unwrap_or_else(Cache::default_dir)) };
    match cli.command {
        Command::Group(c) => group_cmd(c, &cache),
        Command::Marks { group } => {
            let grp = load_group(&group)?;
            let text = cache.get_or_compute("marks", &table_text(&grp), || {
                let reps: Vec<Value> = subgroup_conjugacy_classes(&grp)?.iter().map(|h| json!(h.elements())).collect();
                Ok(to_canonical(&json!({"classes": reps, "marks": table_of_marks(&grp)?})))
            })?;
            Ok(Out { text, code: 0 })
        }
        Command::Burnside(BurnsideCmd::Mul { group, a, b }) => {
            let grp = load_group(&group)?;
            let x = BurnsideElement::new(&grp, vector_arg(&a)?)?;
            let y = BurnsideElement::new(&grp, vector_arg(&b)?)?;
            Ok(Out::ok(json!({"coeffs": burnside_mul(&x, &y)?.coeffs()})))
        }
        Command::Cell(c) => cell_cmd(c),
        Command::Span(c) => span_cmd(c),
        Command::Obig(c) => obig_cmd(c),
        Command::Biset(c) => biset_cmd(c),
        Command::Mackey(c) => mackey_cmd(c, &g),
        Command::Verify { suite, functor, repro_dir } => verify_cmd(&suite, functor, &repro_dir, &g),
        Command::Fmt { file } => {
            let m = Manifest::parse_file(&file, None)?;
            Resolver::for_file(&file).entity(&m.payload)?;
            Ok(Out { text: m.serialize(), code: 0 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
