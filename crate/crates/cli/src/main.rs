//! Command-line surface for the unital-lab library: build unitals, run the
//! explicit Triple O'Nan constructions, search configurations, and emit
//! self-describing JSON reports.
//!
//! Exit codes: 0 success, 2 invalid parameters, 3 invariant violation,
//! 4 resource cap exceeded.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use unital_lab::construct::{
    asq14_construction, conic_construction, cyclotomic, q3_construction,
    verify_order2_identities, verify_quartic_identities,
};
use unital_lab::gfield::{FieldCtx, Fq2Elem, FqElem, DEFAULT_MAX_ORDER};
use unital_lab::onan::{
    extend_onan, feng_li_scan, fl_diagonals, realize, verify_triple_onan, TripleOnanConfig,
    TripleOnanParams,
};
use unital_lab::report::{
    describe_b, elem_pair, ConfigurationRecord, ConstructJson, CountJson, CyclotomicJson,
    DiagonalRecord, EquivJson, FengLiJson, FieldHeader, PointRecord, SearchJson, UnitalJson,
};
use unital_lab::search::{canonical_search, count_invariance_check};
use unital_lab::unital::{
    canonical, equivalence_classes, mu, phi, psi, ACharacter, Unital, UnitalParams,
};
use unital_lab::Error;

#[derive(Parser)]
#[command(name = "unital-lab", version, about = "Orthogonal Buekenhout-Metz unitals in PG(2,q²): constructions, O'Nan configuration search and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a unital, report |U|, discriminant, character of a and the
    /// tangent/secant census, with a seeded automorphism spot-check.
    Unital(UnitalArgs),
    /// Run a named construction and verify the result.
    Construct(ConstructArgs),
    /// Exhaustive canonical-frame search for BM-special Triple O'Nans.
    Search(SearchArgs),
    /// Check that the canonical count is the same for every valid b of the
    /// requested square class of a.
    Count(CountArgs),
    /// Cyclotomic number table of order 2 or 4, with identity checks.
    Cyclotomic(CyclotomicArgs),
    /// Equivalence classes of valid (a, b) parameter pairs.
    Equiv(EquivArgs),
}

#[derive(Args)]
struct FieldArgs {
    /// Field order q, an odd prime power (9, 25, 27, 49, 81, 121, 125 and
    /// 169 are the supported non-primes).
    #[arg(long)]
    q: u32,
}

#[derive(Args)]
struct OutArgs {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct UnitalArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Parameter a: "square", "nonsquare", "conic", or explicit
    /// coordinates "c0" / "c0,c1".
    #[arg(long, default_value = "conic")]
    a: String,
    /// Parameter b: "auto" or explicit coordinates.
    #[arg(long, default_value = "auto")]
    b: String,
    /// Seed for the sampled automorphism check.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// One of: conic, asq14, q3asq, fengli.
    #[arg(long)]
    method: String,
    /// Parameter a (used by conic and fengli); defaults per method.
    #[arg(long)]
    a: Option<String>,
    /// Parameter b (b1 index for the square-parameter methods); "auto"
    /// picks the least valid choice.
    #[arg(long, default_value = "auto")]
    b: String,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long, default_value = "conic")]
    a: String,
    #[arg(long, default_value = "auto")]
    b: String,
    /// Worker threads for the x-range partition.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Square class of a: "square" or "nonsquare".
    #[arg(long)]
    a: String,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct CyclotomicArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    order: u32,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct EquivArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    out: OutArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::InvariantViolation(_) => 3u8,
                Error::ResourceCap(_) => 4,
                _ => 2,
            })
        }
    }
}

fn build_ctx(q: u32) -> Result<FieldCtx, Error> {
    let max_order = std::env::var("UNITAL_LAB_MAX_ORDER")
        .ok()
        .and_then(|v| v.parse::<u64>().ok())
        .unwrap_or(DEFAULT_MAX_ORDER);
    // factor q as p^exp
    if q < 3 {
        return Err(Error::InvalidParams("q must be an odd prime power >= 3".into()));
    }
    let mut p = 0u32;
    for d in 2..=q {
        if q % d == 0 {
            p = d;
            break;
        }
    }
    let mut exp = 0u32;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
        exp += 1;
    }
    if rest != 1 {
        return Err(Error::InvalidParams(format!("q = {q} is not a prime power")));
    }
    FieldCtx::with_max_order(p, exp, max_order)
}

fn parse_elem(ctx: &FieldCtx, text: &str) -> Result<Fq2Elem, Error> {
    let mut parts = text.split(',');
    let c0: u32 = parts
        .next()
        .unwrap()
        .trim()
        .parse()
        .map_err(|_| Error::InvalidParams(format!("cannot parse field element {text:?}")))?;
    let c1: u32 = match parts.next() {
        Some(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParams(format!("cannot parse field element {text:?}")))?,
        None => 0,
    };
    if parts.next().is_some() {
        return Err(Error::InvalidParams("field elements have at most two coordinates".into()));
    }
    Ok(ctx.fq2(ctx.fq_from_index(c0)?, ctx.fq_from_index(c1)?))
}

fn resolve_a(ctx: &FieldCtx, spec: &str) -> Result<(Fq2Elem, bool), Error> {
    Ok(match spec {
        "square" => (Fq2Elem::ONE, false),
        "nonsquare" => (canonical::least_nonsquare(ctx), false),
        "conic" => (canonical::least_nonsquare(ctx), true),
        other => (parse_elem(ctx, other)?, false),
    })
}

fn resolve_params(ctx: &FieldCtx, a_spec: &str, b_spec: &str) -> Result<UnitalParams, Error> {
    let (a, force_conic) = resolve_a(ctx, a_spec)?;
    let b = match b_spec {
        "auto" => {
            if force_conic || UnitalParams::validate(ctx, a, Fq2Elem::ZERO).is_ok() {
                Fq2Elem::ZERO
            } else {
                let b1 = canonical::least_valid_b1(ctx, a)?;
                ctx.fq2(FqElem::ZERO, b1)
            }
        }
        other => parse_elem(ctx, other)?,
    };
    UnitalParams::validate(ctx, a, b)
}

fn emit<T: serde::Serialize>(out: &OutArgs, value: &T) -> Result<(), Error> {
    let json = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvariantViolation(format!("serialization failed: {e}")))?;
    match &out.out {
        Some(path) => std::fs::write(path, json.as_bytes())
            .map_err(|e| Error::InvalidParams(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout();
            stdout
                .write_all(json.as_bytes())
                .and_then(|_| stdout.write_all(b"\n"))
                .map_err(|e| Error::InvalidParams(format!("cannot write to stdout: {e}")))
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Unital(args) => cmd_unital(args),
        Command::Construct(args) => cmd_construct(args),
        Command::Search(args) => cmd_search(args),
        Command::Count(args) => cmd_count(args),
        Command::Cyclotomic(args) => cmd_cyclotomic(args),
        Command::Equiv(args) => cmd_equiv(args),
    }
}

fn cmd_unital(args: UnitalArgs) -> Result<(), Error> {
    let ctx = build_ctx(args.field.q)?;
    let params = resolve_params(&ctx, &args.a, &args.b)?;
    let u = Unital::build(&ctx, params);
    let (tangents, secants) = u.line_census(&ctx)?;

    // sampled automorphism invariance check
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let checks = 20u32;
    let mut passed = 0u32;
    for _ in 0..checks {
        let gamma = ctx.fq2_from_index(rng.gen_range(0..ctx.qq()))?;
        let t = ctx.fq_from_index(rng.gen_range(0..ctx.q()))?;
        let delta = ctx.embed(ctx.fq_from_index(1 + rng.gen_range(0..ctx.q() - 1))?);
        let map = psi(&ctx, &params, gamma)
            .compose(&ctx, &phi(&ctx, t))
            .compose(&ctx, &mu(&ctx, &params, delta)?);
        if u.points().iter().all(|p| u.contains_point(&ctx, &map.apply(&ctx, p))) {
            passed += 1;
        }
    }
    if passed != checks {
        return Err(Error::InvariantViolation(format!(
            "automorphism spot-check failed: {passed}/{checks}"
        )));
    }

    let json = UnitalJson {
        field: FieldHeader::from_ctx(&ctx),
        a: elem_pair(&ctx, params.a),
        b: elem_pair(&ctx, params.b),
        a_character: params.a_character().as_str().into(),
        discriminant: params.discriminant().index(),
        classical: params.is_classical(),
        conic: params.is_conic(&ctx),
        size: u.size() as u64,
        tangents,
        secants,
        automorphism_checks_passed: passed,
        automorphism_checks: checks,
        seed: args.seed,
    };
    eprintln!(
        "unital q={} a={:?} b={}: {} points, {} tangents, {} secants{}",
        ctx.q(),
        json.a,
        describe_b(&ctx, params.b),
        json.size,
        tangents,
        secants,
        if json.classical { " (classical)" } else { "" }
    );
    emit(&args.out, &json)
}

fn construct_b1(ctx: &FieldCtx, spec: &str) -> Result<FqElem, Error> {
    match spec {
        "auto" => canonical::least_valid_b1(ctx, Fq2Elem::ONE),
        other => {
            let e = parse_elem(ctx, other)?;
            let (b0, b1) = ctx.parts(e);
            if !b0.is_zero() {
                return Err(Error::InvalidParams(
                    "square-parameter constructions take b of the form b1·e; pass the b1 index".into(),
                ));
            }
            // accept either "b1" (plain index) or "0,b1"
            if b1.is_zero() {
                ctx.fq_from_index(e.index())
            } else {
                Ok(b1)
            }
        }
    }
}

fn cmd_construct(args: ConstructArgs) -> Result<(), Error> {
    let ctx = build_ctx(args.field.q)?;
    match args.method.as_str() {
        "conic" => {
            let a = match &args.a {
                Some(spec) => resolve_a(&ctx, spec)?.0,
                None => canonical::least_nonsquare(&ctx),
            };
            emit_triple(&ctx, &args, "conic", conic_construction(&ctx, a)?)
        }
        "asq14" => {
            let b1 = construct_b1(&ctx, &args.b)?;
            emit_triple(&ctx, &args, "asq14", asq14_construction(&ctx, b1)?)
        }
        "q3asq" => {
            let b1 = construct_b1(&ctx, &args.b)?;
            emit_triple(&ctx, &args, "q3asq", q3_construction(&ctx, b1)?)
        }
        "fengli" => cmd_fengli(&ctx, &args),
        other => Err(Error::InvalidParams(format!(
            "unknown method {other:?}; expected conic, asq14, q3asq or fengli"
        ))),
    }
}

fn emit_triple(
    ctx: &FieldCtx,
    args: &ConstructArgs,
    method: &str,
    params: TripleOnanParams,
) -> Result<(), Error> {
    let uparams = UnitalParams::validate(ctx, params.a, params.b)?;
    let u = Unital::build(ctx, uparams);
    let realized = realize(ctx, &params)?;
    let verdict = verify_triple_onan(ctx, &u, &realized.points);
    if !verdict.valid {
        return Err(Error::InvariantViolation(format!(
            "construction output failed verification: {}",
            verdict.failures.join("; ")
        )));
    }
    let cfg = TripleOnanConfig::from_points(ctx, &u, realized.points)?;
    let json = ConstructJson {
        field: FieldHeader::from_ctx(ctx),
        method: method.into(),
        verified: true,
        configuration: ConfigurationRecord::new(ctx, &params, &cfg),
    };
    eprintln!(
        "construct {method} q={}: verified BM-special Triple O'Nan in U(a={:?}, b={})",
        ctx.q(),
        elem_pair(ctx, params.a),
        describe_b(ctx, params.b)
    );
    emit(&args.out, &json)
}

fn cmd_fengli(ctx: &FieldCtx, args: &ConstructArgs) -> Result<(), Error> {
    let a_spec = args.a.clone().unwrap_or_else(|| "square".into());
    let b_spec = if args.b == "auto" { "auto".to_string() } else { args.b.clone() };
    let params = resolve_params(ctx, &a_spec, &b_spec)?;
    if params.is_classical() {
        return Err(Error::InvalidParams("the Feng-Li scan needs a non-classical unital".into()));
    }
    let u = Unital::build(ctx, params);
    let (configs, stats) = feng_li_scan(ctx, &u)?;
    let Some(first) = configs.first() else {
        return Err(Error::NoConstruction("the scan found no O'Nan configuration".into()));
    };
    let diagonals = fl_diagonals(ctx, &u, first);
    let extends = !extend_onan(ctx, &u, &first.onan)?.is_empty();
    let json = FengLiJson {
        field: FieldHeader::from_ctx(ctx),
        a: elem_pair(ctx, params.a),
        b: elem_pair(ctx, params.b),
        lambda1: first.lambda1.index(),
        lambda2: first.lambda2.index(),
        lines: first
            .onan
            .lines()
            .iter()
            .map(|l| [elem_pair(ctx, l.c[0]), elem_pair(ctx, l.c[1]), elem_pair(ctx, l.c[2])])
            .collect(),
        points: first.onan.points().iter().map(|p| PointRecord::new(ctx, p)).collect(),
        diagonals: diagonals
            .iter()
            .map(|(p, inside)| DiagonalRecord { point: PointRecord::new(ctx, p), in_unital: *inside })
            .collect(),
        extends,
        scan_distinct_configs: stats.distinct_configs as u64,
    };
    eprintln!(
        "construct fengli q={}: {} distinct O'Nans; first has extends={}",
        ctx.q(),
        stats.distinct_configs,
        extends
    );
    emit(&args.out, &json)
}

fn cmd_search(args: SearchArgs) -> Result<(), Error> {
    let ctx = build_ctx(args.field.q)?;
    let params = resolve_params(&ctx, &args.a, &args.b)?;
    let u = Unital::build(&ctx, params);
    let found = canonical_search(&ctx, &u, args.threads)?;
    let json = SearchJson::new(&ctx, &found);
    eprintln!(
        "search q={} a={} b={}: {} canonical configurations, {} total",
        ctx.q(),
        params.a_character().as_str(),
        describe_b(&ctx, params.b),
        found.report.config_count,
        found.report.total_count
    );
    emit(&args.out, &json)
}

fn cmd_count(args: CountArgs) -> Result<(), Error> {
    let ctx = build_ctx(args.field.q)?;
    let (a, pairs) = match args.a.as_str() {
        "square" => {
            let a = Fq2Elem::ONE;
            let bs: Vec<Fq2Elem> = canonical::valid_b1_list(&ctx, a)
                .into_iter()
                .map(|b1| ctx.fq2(FqElem::ZERO, b1))
                .collect();
            (a, bs)
        }
        "nonsquare" => {
            let a = canonical::least_nonsquare(&ctx);
            let mut bs = vec![Fq2Elem::ZERO];
            bs.extend(
                canonical::valid_b1_list(&ctx, a)
                    .into_iter()
                    .map(|b1| ctx.fq2(FqElem::ZERO, b1)),
            );
            (a, bs)
        }
        other => {
            return Err(Error::InvalidParams(format!(
                "count takes --a square or --a nonsquare, got {other:?}"
            )))
        }
    };
    if pairs.is_empty() {
        return Err(Error::InvalidParams("no valid b for this square class".into()));
    }
    let unitals: Vec<Unital> = pairs
        .iter()
        .map(|&b| UnitalParams::validate(&ctx, a, b).map(|p| Unital::build(&ctx, p)))
        .collect::<Result<_, _>>()?;
    let refs: Vec<&Unital> = unitals.iter().collect();
    let count = count_invariance_check(&ctx, &refs, args.threads)?;
    let character = match args.a.as_str() {
        "square" => ACharacter::Square,
        _ => ACharacter::NonSquare,
    };
    let json = CountJson {
        field: FieldHeader::from_ctx(&ctx),
        a: elem_pair(&ctx, a),
        a_character: character.as_str().into(),
        b_values: pairs.iter().map(|&b| elem_pair(&ctx, b)).collect(),
        canonical_count: count,
        total_count: (ctx.q() as u64).pow(3) * count,
    };
    eprintln!(
        "count q={} a={}: canonical count {} across {} parameter choices",
        ctx.q(),
        args.a,
        count,
        pairs.len()
    );
    emit(&args.out, &json)
}

fn cmd_cyclotomic(args: CyclotomicArgs) -> Result<(), Error> {
    let ctx = build_ctx(args.field.q)?;
    let table = cyclotomic(&ctx, args.order)?;
    let identities = match args.order {
        2 => verify_order2_identities(&ctx).is_ok(),
        4 => verify_quartic_identities(&ctx).is_ok(),
        _ => false,
    };
    if !identities {
        return Err(Error::InvariantViolation("cyclotomic identities failed".into()));
    }
    let o = args.order as usize;
    let counts: Vec<Vec<u64>> = (0..o)
        .map(|i| (0..o).map(|j| table.get(i as i64, j as i64)).collect())
        .collect();
    let json = CyclotomicJson {
        field: FieldHeader::from_ctx(&ctx),
        order: args.order,
        counts,
        identities_hold: identities,
    };
    eprintln!("cyclotomic q={} order={}: identities hold", ctx.q(), args.order);
    emit(&args.out, &json)
}

fn cmd_equiv(args: EquivArgs) -> Result<(), Error> {
    let ctx = build_ctx(args.field.q)?;
    if ctx.q() > 13 {
        return Err(Error::ResourceCap(
            "the exhaustive equivalence scan is limited to q <= 13".into(),
        ));
    }
    let (classes, reps) = equivalence_classes(&ctx);
    let json = EquivJson {
        field: FieldHeader::from_ctx(&ctx),
        classes: classes as u64,
        representatives: reps
            .iter()
            .map(|&(a, b)| (elem_pair(&ctx, a), elem_pair(&ctx, b)))
            .collect(),
    };
    eprintln!("equiv q={}: {} classes (classical included)", ctx.q(), classes);
    emit(&args.out, &json)
}
