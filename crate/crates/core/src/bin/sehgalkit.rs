use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sehgalkit::abgroup::FinAbGroup;
use sehgalkit::autenum::{
    diagonal_subgroup, parse_pairs, singer_subgroup, subgroup_class_reps, Gl2Subgroup, DEFAULT_QMAX, FULL_ENUM_CAP,
};
use sehgalkit::cache::{e_set_cached, ESetCache};
use sehgalkit::construct::{
    build_candidate, format_tuple, gd_types, match_rows, table_rows_cached, tables, verify_candidate, TableRow,
};
use sehgalkit::esolve::{build_system, e_set, SolveOptions};
use sehgalkit::helpcmp::{help_solutions, help_system, GdGroup};
use sehgalkit::matact::AutGroup;
use sehgalkit::sehgal::{algorithm1, algorithm2, algorithm3, parse_gamma, Alg3Options, AlgOutcome, MetabelianGroup};
use sehgalkit::{Error, Result};

#[derive(Parser)]
#[command(name = "sehgalkit", version, about = "Partial-augmentation constraint sets for metabelian groups")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    #[arg(long, value_enum, default_value_t = Output::Pretty, global = true)]
    output: Output,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest prime for candidate searches and tables.
    #[arg(long, default_value_t = DEFAULT_QMAX, global = true)]
    qmax: u64,
    /// Permit --qmax above the default.
    #[arg(long, global = true)]
    allow_large: bool,
    /// Directory for cached E-sets (SEHGALKIT_CACHE overrides).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    no_cache: bool,
    /// Solve every system by full box scan.
    #[arg(long, global = true)]
    oracle: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Tsv,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// E(Aut(A), K, A) for A = C_q x C_q.
    Eset(EsetArgs),
    /// Algorithm 1 on N x| Gamma at one prime.
    Alg1 {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long)]
        prime: u64,
    },
    /// Algorithm 2 on N x| Gamma.
    Alg2 {
        #[command(flatten)]
        g: GroupArgs,
    },
    /// Algorithm 3 on an abelian group.
    Alg3 {
        #[arg(long)]
        group: String,
        /// Keep cyclic Sylow factors.
        #[arg(long)]
        no_reduce: bool,
    },
    /// Both tables of non-empty E-sets for 5 <= p <= qmax.
    Tables,
    /// Filtered subgroup classes of GL(2,5) and their E-sets.
    Gl5Check,
    /// HeLP system for a group of type G_d(p,q).
    HelpCheck {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: u64,
        /// Comma-separated tuple to test, e.g. 2,0,-1.
        #[arg(long, allow_hyphen_values = true)]
        tuple: Option<String>,
    },
    /// Glue table entries for two primes into candidate groups.
    Construct {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        /// Build every matched pair rather than the first.
        #[arg(long)]
        all_pairs: bool,
        /// Re-run Algorithm 2 and the structural checks.
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Args)]
struct EsetArgs {
    /// The prime q.
    #[arg(long)]
    q: u64,
    /// K = the Singer subgroup of this order.
    #[arg(long, group = "k")]
    singer: Option<u64>,
    /// K = the diagonal group with these generators, e.g. "(2,4),(1,5)".
    #[arg(long, group = "k")]
    diag: Option<String>,
    /// K = the i-th subgroup class of GL(2,q), q <= 5.
    #[arg(long, group = "k")]
    class: Option<usize>,
    /// Print the constraint systems as well.
    #[arg(long)]
    system: bool,
}

#[derive(Args)]
struct GroupArgs {
    /// N, e.g. 7^[1,1]x13^[1,1].
    #[arg(long)]
    n: String,
    /// Generators of Gamma as JSON: a list of generators, each a list of
    /// matrices (one per factor of N, rows first); or "full".
    #[arg(long, default_value = "full")]
    gamma: String,
}

struct Ctx {
    out: Output,
    solve: SolveOptions,
    qmax: u64,
    cache: Option<ESetCache>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_verification() { 2 } else { 1 })
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let g = cli.global;
    if let Some(n) = g.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Unsupported(e.to_string()))?;
    }
    if g.qmax > DEFAULT_QMAX {
        if !g.allow_large {
            return Err(Error::Unsupported(format!(
                "--qmax {} exceeds {DEFAULT_QMAX}; pass --allow-large",
                g.qmax
            )));
        }
        eprintln!("warning: enumeration cost grows quickly beyond q = {DEFAULT_QMAX}");
    }
    let ctx = Ctx {
        out: g.output,
        solve: SolveOptions {
            oracle: g.oracle,
            ..SolveOptions::default()
        },
        qmax: g.qmax,
        cache: if g.no_cache { None } else { ESetCache::from_env_or(g.cache_dir) },
    };
    match cli.command {
        Command::Eset(a) => eset(&ctx, a),
        Command::Alg1 { g, prime } => {
            let grp = metabelian(&g)?;
            let out = algorithm1(&grp, prime, ctx.solve)?;
            emit_outcome(&ctx, &out)
        }
        Command::Alg2 { g } => {
            let grp = metabelian(&g)?;
            let out = algorithm2(&grp, ctx.solve)?;
            emit_outcome(&ctx, &out)
        }
        Command::Alg3 { group, no_reduce } => alg3(&ctx, &group, !no_reduce),
        Command::Tables => emit_tables(&ctx),
        Command::Gl5Check => gl5(&ctx),
        Command::HelpCheck { p, q, d, tuple } => help(&ctx, p, q, d, tuple),
        Command::Construct { p, q, all_pairs, verify } => construct(&ctx, p, q, all_pairs, verify),
    }
}

fn print_json(v: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn pick_k(a: &EsetArgs) -> Result<Gl2Subgroup> {
    if let Some(m) = a.singer {
        return singer_subgroup(a.q, m);
    }
    if let Some(s) = &a.diag {
        return diagonal_subgroup(a.q, &parse_pairs(s)?);
    }
    if let Some(i) = a.class {
        if a.q > FULL_ENUM_CAP {
            return Err(Error::Unsupported(format!("--class needs q <= {FULL_ENUM_CAP}")));
        }
        let reps = subgroup_class_reps(a.q)?;
        let n = reps.len();
        return reps
            .into_iter()
            .nth(i)
            .ok_or_else(|| Error::Parse(format!("class index {i} out of range (0..{n})")));
    }
    Err(Error::Parse("give one of --singer, --diag, --class".into()))
}

fn eset(ctx: &Ctx, a: EsetArgs) -> Result<u8> {
    let k = pick_k(&a)?;
    let s = AutGroup::full(FinAbGroup::elementary_rank2(a.q)?)?;
    let kg = k.to_aut_group()?;
    let sols = e_set_cached(ctx.cache.as_ref(), &s, &k, ctx.solve)?;
    let systems = if a.system {
        s.local_classes()
            .into_iter()
            .filter(|l| !(l.len() == 1 && l[0].is_identity()))
            .map(|l| build_system(&s, &kg, &l))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    match ctx.out {
        Output::Json => {
            let keys: Vec<_> = sols.iter().map(|f| f.key()).collect();
            print_json(&json!({ "k": k, "iso": k.iso_type(), "systems": systems, "solutions": keys }))?
        },
        Output::Tsv => {
            println!("solution\trep\tvalue");
            for (i, sol) in sols.iter().enumerate() {
                for (r, v) in sol.key() {
                    println!("{i}\t{r}\t{v}");
                }
            }
        }
        Output::Pretty => {
            println!("K = {} ({}), |K| = {}", k.label, k.iso_type(), k.order);
            for sys in &systems {
                print!("{}", sys.to_text());
            }
            println!("{} solution(s)", sols.len());
            for sol in &sols {
                println!("  {}", key_text(&sol.key()));
            }
        }
    }
    Ok(0)
}

fn key_text(k: &[(sehgalkit::abgroup::AbElem, i64)]) -> String {
    k.iter().map(|(r, v)| format!("{r}:{v}")).collect::<Vec<_>>().join(" ")
}

fn metabelian(g: &GroupArgs) -> Result<MetabelianGroup> {
    let n = FinAbGroup::parse(&g.n)?;
    let gamma = parse_gamma(&n, &g.gamma)?;
    MetabelianGroup::new(n, gamma)
}

fn emit_outcome(ctx: &Ctx, out: &AlgOutcome) -> Result<u8> {
    match ctx.out {
        Output::Json => print_json(out)?,
        Output::Tsv => {
            println!("witness\trep\tvalue");
            for (i, w) in out.witnesses.iter().enumerate() {
                for (r, v) in w.epsilon.key() {
                    println!("{i}\t{r}\t{v}");
                }
            }
        }
        Output::Pretty => {
            println!("verdict: {:?}", out.verdict);
            for w in &out.witnesses {
                println!("  {}", key_text(&w.epsilon.key()));
            }
        }
    }
    Ok(0)
}

fn alg3(ctx: &Ctx, group: &str, reduce: bool) -> Result<u8> {
    let a = FinAbGroup::parse(group)?;
    let out = algorithm3(
        &a,
        Alg3Options {
            reduce,
            qmax: ctx.qmax,
            solve: ctx.solve,
        },
    )?;
    match ctx.out {
        Output::Json => print_json(&out)?,
        Output::Tsv => {
            println!("K\torder\tsolution\ttuple");
            for e in &out.entries {
                for (i, s) in e.solutions.iter().enumerate() {
                    let t = s.tuple.as_deref().map(format_tuple).unwrap_or_default();
                    println!("{}\t{}\t{i}\t{t}", e.label, e.order);
                }
            }
        }
        Output::Pretty => {
            println!("A = {}, core {}, coverage {:?}", out.group, out.core, out.coverage);
            println!("verdict: {:?}", out.verdict);
            for e in &out.entries {
                println!("  {} (order {}): {} solution(s)", e.label, e.order, e.solutions.len());
                for s in &e.solutions {
                    match &s.tuple {
                        Some(t) => println!("    {}", format_tuple(t)),
                        None => println!("    {}", key_text(&s.function.key())),
                    }
                }
            }
        }
    }
    Ok(0)
}

fn row_tsv(r: &TableRow) -> String {
    let t: Vec<String> = r.tuples.iter().map(|t| format_tuple(t)).collect();
    format!("{}\t{}\t{}\tC{}\t{}", r.p, r.k.label, r.iso, r.quotient, t.join(", "))
}

fn emit_tables(ctx: &Ctx) -> Result<u8> {
    let t = tables(ctx.qmax, ctx.solve, ctx.cache.as_ref())?;
    match ctx.out {
        Output::Json => print_json(&t)?,
        Output::Tsv | Output::Pretty => {
            let mut s = String::new();
            let _ = writeln!(s, "# K in the Singer cycle");
            let _ = writeln!(s, "p\tK\ttype\tquotient\tf");
            for r in &t.cyclic {
                let _ = writeln!(s, "{}", row_tsv(r));
            }
            let _ = writeln!(s, "# K in the diagonal torus");
            let _ = writeln!(s, "p\tK\ttype\tquotient\tf");
            for r in &t.diagonal {
                let _ = writeln!(s, "{}", row_tsv(r));
            }
            print!("{s}");
        }
    }
    Ok(0)
}

fn gl5(ctx: &Ctx) -> Result<u8> {
    let q = 5;
    let s = AutGroup::full(FinAbGroup::elementary_rank2(q)?)?;
    let all = subgroup_class_reps(q)?;
    let total = all.len();
    let mut rows = Vec::new();
    for k in all.into_iter().filter(Gl2Subgroup::is_candidate_shape) {
        let n = e_set(&s, &k.to_aut_group()?, ctx.solve)?.len();
        rows.push((k, n));
    }
    let ok = rows.len() == 7 && rows.iter().all(|(_, n)| *n == 0);
    match ctx.out {
        Output::Json => print_json(&json!({
            "classes": total,
            "filtered": rows.iter().map(|(k, n)| json!({"label": k.label, "iso": k.iso_type(), "order": k.order, "solutions": n})).collect::<Vec<_>>(),
            "all_empty": rows.iter().all(|(_, n)| *n == 0),
        }))?,
        _ => {
            println!("{total} subgroup classes of GL(2,5), {} after filtering", rows.len());
            for (k, n) in &rows {
                println!("{}\t{}\t{}\t{n}", k.label, k.iso_type(), k.order);
            }
        }
    }
    Ok(if ok { 0 } else { 2 })
}

fn help(ctx: &Ctx, p: u64, q: u64, d: u64, tuple: Option<String>) -> Result<u8> {
    let g = GdGroup::new(p, q, d)?;
    let sys = help_system(&g)?;
    let sols = help_solutions(&sys)?;
    let tuple = tuple
        .map(|t| {
            t.split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|e| Error::Parse(format!("--tuple: {e}"))))
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;
    if ctx.out != Output::Json {
        let head: Vec<String> = (0..d).map(|i| format!("mu{i}")).collect();
        println!("r\ts\t{}", head.join("\t"));
        for row in &sys.rows {
            let v: Vec<String> = row.mu.iter().map(u64::to_string).collect();
            println!("{}\t{}\t{}", row.r, row.s, v.join("\t"));
        }
    }
    let mut verdict = json!({
        "p": p, "q": q, "d": d,
        "column_sums": sys.column_sums(),
        "distinct_rows": sys.distinct_rows().into_keys().collect::<Vec<_>>(),
        "feasible": sols,
        "nontrivial_feasible": sols.iter().any(|s| s.iter().any(|&x| x < 0)),
    });
    if let Some(t) = tuple {
        verdict["tuple"] = json!(t);
        verdict["tuple_feasible"] = Value::Bool(sys.satisfies(&t));
    }
    println!("{}", serde_json::to_string(&verdict)?);
    Ok(0)
}

fn construct(ctx: &Ctx, p: u64, q: u64, all_pairs: bool, verify: bool) -> Result<u8> {
    if p == q {
        return Err(Error::InvalidGroup("the two primes must differ".into()));
    }
    for r in [p, q] {
        if r > ctx.qmax {
            return Err(Error::Unsupported(format!("{r} exceeds --qmax {}", ctx.qmax)));
        }
    }
    let prows = table_rows_cached(p, ctx.solve, ctx.cache.as_ref())?;
    let qrows = table_rows_cached(q, ctx.solve, ctx.cache.as_ref())?;
    let pairs = match_rows(&prows, &qrows)?;
    let chosen: Vec<_> = if all_pairs { pairs.iter().collect() } else { pairs.iter().take(1).collect() };
    let mut records = Vec::new();
    let mut failed = false;
    for pair in chosen {
        let c = build_candidate(pair)?;
        let report = if verify {
            let r = verify_candidate(&c, true, ctx.solve)?;
            failed |= !r.passed;
            Some(r)
        } else {
            None
        };
        records.push((c, report));
    }
    match ctx.out {
        Output::Json => print_json(&json!({
            "pairs": pairs.len(),
            "gd_types": gd_types(&pairs),
            "candidates": records.iter().map(|(c, r)| json!({"candidate": c, "verification": r})).collect::<Vec<_>>(),
        }))?,
        _ => {
            println!("{} matched pair(s) for p = {p}, q = {q}", pairs.len());
            for (c, r) in &records {
                let m = &c.pair;
                println!(
                    "K_p = {} < T_p = {}, K_q = {} < T_q = {}, quotient C{}, u = {}, |Gamma| = {}",
                    m.kp.label, m.tp.label, m.kq.label, m.tq.label, m.r, m.u, c.gamma_order
                );
                if let Some((d, p, q)) = c.gd_type {
                    println!("  type G_{d}({p},{q})");
                }
                println!("  epsilon: {}", key_text(&c.epsilon.key()));
                if let Some(r) = r {
                    for ch in &r.checks {
                        println!("  {:<28} {} {}", ch.name, if ch.passed { "ok" } else { "FAIL" }, ch.detail);
                    }
                }
            }
        }
    }
    Ok(if failed { 2 } else { 0 })
}
