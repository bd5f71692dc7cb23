//! Exhaustive canonical-frame search for BM-special Triple O'Nans, plus an
//! independent brute-force oracle and the bookkeeping that ties the two
//! together.
//!
//! Every BM-special configuration is equivalent, under the unital's
//! automorphism group, to one whose special line is [1,0,0] with diagonal
//! point V = (0,0,1). The canonical search enumerates exactly that frame:
//! x over GF(q²)*, then ordered pairs (j,k) of unital points on the line
//! through V with infinite point (x,1,0), then ordered (s,t) over GF(q)*.
//! Every configuration is therefore hit exactly four times (the P↔Q and
//! X↔Y relabelings), which is asserted, not assumed. The total count over
//! the whole unital is q³ times the canonical count: the subgroup
//! S = {ψ_γ φ_t} is regular on the affine unital points, and a
//! configuration is pinned by its V point. The oracle validates that factor
//! at small q.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::gfield::{FieldCtx, Fq2Elem};
use crate::onan::{
    realize, verify_triple_onan, ConfigId, LabeledPoints, TripleOnanConfig, TripleOnanParams,
};
use crate::plane::{join, meet, ProjPoint};
use crate::unital::{phi, psi, special_point, ACharacter, Unital};
use crate::{Error, Result};

/// Sizes of the enumerated parameter space.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct EnumerationBounds {
    pub x_values: u64,
    pub ordered_point_pairs: u64,
    pub ordered_st_pairs: u64,
    pub tuples_checked: u64,
}

/// Outcome summary of one canonical search.
#[derive(Clone, Debug)]
pub struct SearchReport {
    pub q: u32,
    pub a_character: ACharacter,
    pub a: Fq2Elem,
    pub b: Fq2Elem,
    /// Parameter tuples passing all four equations; always 4 per
    /// configuration.
    pub tuple_count: u64,
    /// Deduplicated canonical configurations (V = (0,0,1) frame).
    pub config_count: u64,
    /// q³ × config_count: configurations in the whole unital.
    pub total_count: u64,
    pub wall_secs: f64,
    pub bounds: EnumerationBounds,
}

/// One deduplicated canonical configuration with its least parameter tuple.
#[derive(Clone, Debug)]
pub struct FoundConfig {
    pub params: TripleOnanParams,
    pub points: LabeledPoints,
    pub config: TripleOnanConfig,
}

pub struct CanonicalSearch {
    pub tuples: Vec<TripleOnanParams>,
    pub configs: Vec<FoundConfig>,
    pub report: SearchReport,
}

/// The unital points (xc, c, 1), c ≠ 0, of the line through V = (0,0,1)
/// with infinite point (x,1,0). Always exactly q points for a valid unital.
fn line_candidates(ctx: &FieldCtx, unital: &Unital, x: Fq2Elem) -> Vec<Fq2Elem> {
    let qq = ctx.qq() as u64;
    let mut out = Vec::with_capacity(ctx.q() as usize);
    for c in ctx.fq2_units() {
        let idx = ctx.mul(x, c).index() as u64 * qq + c.index() as u64;
        if unital.contains_index(idx) {
            out.push(c);
        }
    }
    out
}

fn search_chunk(
    ctx: &FieldCtx,
    unital: &Unital,
    xs: &[Fq2Elem],
) -> Result<Vec<(TripleOnanParams, ConfigId, LabeledPoints)>> {
    let params = unital.params();
    let (a, b) = (params.a, params.b);
    let mut hits = Vec::new();
    for &x in xs {
        let cands = line_candidates(ctx, unital, x);
        if cands.len() != ctx.q() as usize {
            return Err(Error::InvariantViolation(format!(
                "line through V has {} affine unital points; expected q",
                cands.len()
            )));
        }
        for &k in &cands {
            for &j in &cands {
                if j == k {
                    continue;
                }
                let h = ctx.div(j, k);
                for s in ctx.fq_units() {
                    for t in ctx.fq_units() {
                        if s == t {
                            continue;
                        }
                        let Some(check) = crate::onan::check_equations_raw(ctx, a, b, x, k, h, s, t)
                        else {
                            continue;
                        };
                        // j, k index unital points, so the P and Q equations
                        // hold by construction
                        debug_assert!(check.eq[0] && check.eq[1]);
                        if !check.holds() {
                            continue;
                        }
                        let tuple = TripleOnanParams::new(ctx, a, b, x, k, h, s, t)?;
                        let realized = realize(ctx, &tuple)?;
                        let verdict = verify_triple_onan(ctx, unital, &realized.points);
                        if !verdict.valid || !verdict.bm_special {
                            return Err(Error::InvariantViolation(format!(
                                "equations passed but verification failed: {}",
                                verdict.failures.join("; ")
                            )));
                        }
                        let cfg = TripleOnanConfig::from_points(ctx, unital, realized.points)?;
                        hits.push((tuple, cfg.id(ctx), realized.points));
                    }
                }
            }
        }
    }
    Ok(hits)
}

/// Exhaustive search over the canonical frame. `threads` partitions the x
/// range; results are merged in x order, so the outcome is independent of
/// the thread count.
pub fn canonical_search(ctx: &FieldCtx, unital: &Unital, threads: usize) -> Result<CanonicalSearch> {
    if unital.params().is_classical() {
        return Err(Error::InvalidParams(
            "the configuration search rejects classical unitals".into(),
        ));
    }
    let start = Instant::now();
    let xs: Vec<Fq2Elem> = ctx.fq2_units().collect();
    let threads = threads.max(1).min(xs.len());

    let mut hits: Vec<(TripleOnanParams, ConfigId, LabeledPoints)> = Vec::new();
    if threads <= 1 {
        hits = search_chunk(ctx, unital, &xs)?;
    } else {
        let chunk_len = xs.len().div_ceil(threads);
        let chunks: Vec<&[Fq2Elem]> = xs.chunks(chunk_len).collect();
        let results: Vec<Result<Vec<_>>> = std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .into_iter()
                .map(|chunk| scope.spawn(move || search_chunk(ctx, unital, chunk)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("search worker panicked")).collect()
        });
        for r in results {
            hits.extend(r?);
        }
    }

    let mut by_id: BTreeMap<ConfigId, (TripleOnanParams, LabeledPoints, u64)> = BTreeMap::new();
    for (tuple, id, points) in &hits {
        by_id
            .entry(*id)
            .and_modify(|(best, _, count)| {
                *count += 1;
                if tuple < best {
                    *best = *tuple;
                }
            })
            .or_insert((*tuple, *points, 1));
    }
    for (id, (_, _, count)) in &by_id {
        if *count != 4 {
            return Err(Error::InvariantViolation(format!(
                "configuration {:?} hit {count} times; the relabeling symmetry demands exactly 4",
                id
            )));
        }
    }

    let mut configs = Vec::with_capacity(by_id.len());
    for (params, points, _) in by_id.values() {
        configs.push(FoundConfig {
            params: *params,
            points: *points,
            config: TripleOnanConfig::from_points(ctx, unital, *points)?,
        });
    }

    let q = ctx.q() as u64;
    let qq = ctx.qq() as u64;
    let bounds = EnumerationBounds {
        x_values: qq - 1,
        ordered_point_pairs: (qq - 1) * q * (q - 1),
        ordered_st_pairs: (q - 1) * (q - 2),
        tuples_checked: (qq - 1) * q * (q - 1) * (q - 1) * (q - 2),
    };
    let config_count = configs.len() as u64;
    let report = SearchReport {
        q: ctx.q(),
        a_character: unital.params().a_character(),
        a: unital.params().a,
        b: unital.params().b,
        tuple_count: hits.len() as u64,
        config_count,
        total_count: q * q * q * config_count,
        wall_secs: start.elapsed().as_secs_f64(),
        bounds,
    };
    Ok(CanonicalSearch { tuples: hits.into_iter().map(|(t, _, _)| t).collect(), configs, report })
}

/// Run the canonical search over several parameter pairs with the same
/// square class of a; all canonical counts must agree. Returns the common
/// count.
pub fn count_invariance_check(
    ctx: &FieldCtx,
    unitals: &[&Unital],
    threads: usize,
) -> Result<u64> {
    if unitals.is_empty() {
        return Err(Error::InvalidParams("no unitals to compare".into()));
    }
    let character = unitals[0].params().a_character();
    let mut common: Option<u64> = None;
    for u in unitals {
        if u.params().a_character() != character {
            return Err(Error::InvalidParams(
                "count invariance compares unitals with the same character of a".into(),
            ));
        }
        let found = canonical_search(ctx, u, threads)?;
        match common {
            None => common = Some(found.report.config_count),
            Some(c) if c != found.report.config_count => {
                return Err(Error::InvariantViolation(format!(
                    "canonical count {} for b = {:?} differs from {}",
                    found.report.config_count,
                    u.params().b,
                    c
                )));
            }
            _ => {}
        }
    }
    Ok(common.unwrap())
}

/// Result of the brute-force enumeration.
pub struct OracleResult {
    /// Verified configurations keyed by line-set identity.
    pub configs: BTreeMap<ConfigId, LabeledPoints>,
    pub iterations: u64,
}

/// Brute-force enumeration of BM-special Triple O'Nans straight from the
/// point set: every quadrangle {P,Q,X,Y} with the side XY on a secant
/// through T∞ and V = PQ∩XY, M, N in the unital. Independent of the
/// canonical-frame machinery and of the configuration equations.
///
/// `lines` restricts the scan to the secants x = c for the given c values
/// (the slice used at q = 7); `None` scans all q². The cost guard demands
/// q ≤ 7 unless `override_guard` is set; `cap` bounds the inner iteration
/// count.
pub fn direct_enumeration_oracle(
    ctx: &FieldCtx,
    unital: &Unital,
    lines: Option<&[Fq2Elem]>,
    cap: u64,
    override_guard: bool,
) -> Result<OracleResult> {
    if unital.params().is_classical() {
        return Err(Error::InvalidParams("the oracle rejects classical unitals".into()));
    }
    if ctx.q() > 7 && !override_guard {
        return Err(Error::InvalidParams(
            "the brute-force oracle is guarded to q <= 7; pass the override to run anyway".into(),
        ));
    }
    let qq = ctx.qq();
    let mut configs = BTreeMap::new();
    let mut iterations = 0u64;

    let affine = unital.affine_points();
    for v in affine {
        if let Some(cs) = lines {
            if !cs.contains(&v.x) {
                continue;
            }
        }
        // bucket the other affine unital points by direction from V;
        // bucket qq is the horizontal direction (1,0,0)
        let mut buckets: Vec<Vec<ProjPoint>> = vec![Vec::new(); qq as usize + 1];
        for r in affine {
            if r == v {
                continue;
            }
            let dy = ctx.sub(r.y, v.y);
            if dy.is_zero() {
                buckets[qq as usize].push(*r);
            } else {
                let d = ctx.div(ctx.sub(r.x, v.x), dy);
                buckets[d.index() as usize].push(*r);
            }
        }
        // the vertical bucket (direction (0,1,0), i.e. d = 0 with r.x = v.x)
        // carries the special line; split it out
        let vertical: Vec<ProjPoint> =
            buckets[0].iter().copied().filter(|r| r.x == v.x).collect();
        buckets[0].retain(|r| r.x != v.x);
        debug_assert_eq!(vertical.len() as u32, ctx.q() - 1);

        for xi in 0..vertical.len() {
            for yi in xi + 1..vertical.len() {
                let (xp, yp) = (vertical[xi], vertical[yi]);
                for bucket in &buckets {
                    for pi in 0..bucket.len() {
                        for qi in pi + 1..bucket.len() {
                            iterations += 1;
                            if iterations > cap {
                                return Err(Error::ResourceCap(format!(
                                    "oracle iteration cap {cap} exceeded"
                                )));
                            }
                            let (pp, qp) = (bucket[pi], bucket[qi]);
                            let m = match join(ctx, &pp, &xp)
                                .and_then(|px| Ok((px, join(ctx, &qp, &yp)?)))
                                .and_then(|(px, qy)| meet(ctx, &px, &qy))
                            {
                                Ok(m) => m,
                                Err(_) => continue,
                            };
                            if !unital.contains_point(ctx, &m) {
                                continue;
                            }
                            let n = match join(ctx, &pp, &yp)
                                .and_then(|py| Ok((py, join(ctx, &qp, &xp)?)))
                                .and_then(|(py, qx)| meet(ctx, &py, &qx))
                            {
                                Ok(n) => n,
                                Err(_) => continue,
                            };
                            if !unital.contains_point(ctx, &n) {
                                continue;
                            }
                            let labeled = LabeledPoints {
                                p: pp,
                                q: qp,
                                x: xp,
                                y: yp,
                                v: *v,
                                m,
                                n,
                            };
                            let verdict = verify_triple_onan(ctx, unital, &labeled);
                            if verdict.valid && verdict.bm_special {
                                let cfg = TripleOnanConfig::from_points(ctx, unital, labeled)?;
                                configs.insert(cfg.id(ctx), labeled);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(OracleResult { configs, iterations })
}

/// Move a BM-special configuration into the canonical frame: ψ then φ send
/// its V point to (0,0,1), which also carries its special line to [1,0,0].
pub fn canonicalize_config(
    ctx: &FieldCtx,
    unital: &Unital,
    cfg: &TripleOnanConfig,
) -> Result<TripleOnanConfig> {
    if !cfg.bm_special() {
        return Err(Error::InvalidParams("only BM-special configurations have this frame".into()));
    }
    let v = cfg.points().v;
    let step1 = psi(ctx, unital.params(), ctx.neg(v.x));
    let moved_v = step1.apply(ctx, &v);
    debug_assert!(moved_v.x.is_zero());
    let shift = ctx.to_base(moved_v.y)?;
    let map = phi(ctx, ctx.fq_neg(shift)).compose(ctx, &step1);
    let out = cfg.apply_map(ctx, unital, &map)?;
    if out.points().v != ProjPoint::from_ints(ctx, 0, 0, 1) {
        return Err(Error::InvariantViolation("canonicalization missed (0,0,1)".into()));
    }
    Ok(out)
}

/// Check the q³ extrapolation against an oracle run: every oracle
/// configuration canonicalizes to a found canonical configuration, and each
/// canonical configuration is hit exactly `lines_scanned · q` times.
pub fn validate_against_oracle(
    ctx: &FieldCtx,
    unital: &Unital,
    search: &CanonicalSearch,
    oracle: &OracleResult,
    lines_scanned: u64,
) -> Result<()> {
    let expected_fiber = lines_scanned * ctx.q() as u64;
    let expected_total = expected_fiber * search.report.config_count;
    if oracle.configs.len() as u64 != expected_total {
        return Err(Error::InvariantViolation(format!(
            "oracle found {} configurations; extrapolation predicts {}",
            oracle.configs.len(),
            expected_total
        )));
    }
    let canonical_ids: BTreeMap<ConfigId, u64> =
        search.configs.iter().map(|f| (f.config.id(ctx), 0u64)).collect();
    let mut fibers = canonical_ids;
    for points in oracle.configs.values() {
        let cfg = TripleOnanConfig::from_points(ctx, unital, *points)?;
        let canon = canonicalize_config(ctx, unital, &cfg)?;
        let id = canon.id(ctx);
        match fibers.get_mut(&id) {
            Some(n) => *n += 1,
            None => {
                return Err(Error::InvariantViolation(
                    "oracle configuration canonicalizes outside the search results".into(),
                ))
            }
        }
    }
    for (id, n) in fibers {
        if n != expected_fiber {
            return Err(Error::InvariantViolation(format!(
                "canonical configuration {:?} hit {n} times; expected {expected_fiber}",
                id
            )));
        }
    }
    Ok(())
}

/// Special-line x-coordinates (the `lines` argument of the oracle) covering
/// the whole plane.
pub fn all_secant_columns(ctx: &FieldCtx) -> Vec<Fq2Elem> {
    ctx.fq2_elements().collect()
}

pub fn t_infinity(ctx: &FieldCtx) -> ProjPoint {
    special_point(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unital::{canonical, mu, UnitalParams};

    fn ctx(q: u32) -> FieldCtx {
        match q {
            9 => FieldCtx::new(3, 2).unwrap(),
            _ => FieldCtx::new(q, 1).unwrap(),
        }
    }

    #[test]
    fn conic_q3_q5_empty() {
        for q in [3u32, 5] {
            let c = ctx(q);
            let u = Unital::build(&c, canonical::conic_params(&c));
            let found = canonical_search(&c, &u, 1).unwrap();
            assert_eq!(found.report.config_count, 0);
            assert_eq!(found.report.tuple_count, 0);
            let oracle =
                direct_enumeration_oracle(&c, &u, None, 100_000_000, false).unwrap();
            assert!(oracle.configs.is_empty());
            validate_against_oracle(&c, &u, &found, &oracle, (c.qq()) as u64).unwrap();
        }
    }

    #[test]
    fn classical_rejected() {
        let c = ctx(5);
        let u = Unital::build(&c, canonical::classical_params(&c).unwrap());
        assert!(matches!(canonical_search(&c, &u, 1), Err(Error::InvalidParams(_))));
        assert!(matches!(
            direct_enumeration_oracle(&c, &u, None, 1000, false),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn q5_square_search_vs_oracle_full() {
        let c = ctx(5);
        let u = Unital::build(&c, canonical::square_params(&c).unwrap());
        let found = canonical_search(&c, &u, 1).unwrap();
        assert!(found.report.config_count > 0);
        assert_eq!(found.report.tuple_count, 4 * found.report.config_count);
        let oracle = direct_enumeration_oracle(&c, &u, None, 1_000_000_000, false).unwrap();
        validate_against_oracle(&c, &u, &found, &oracle, c.qq() as u64).unwrap();
        assert_eq!(found.report.total_count, oracle.configs.len() as u64);
    }

    #[test]
    fn search_deterministic_across_threads() {
        let c = ctx(7);
        let u = Unital::build(&c, canonical::conic_params(&c));
        let one = canonical_search(&c, &u, 1).unwrap();
        let three = canonical_search(&c, &u, 3).unwrap();
        let eight = canonical_search(&c, &u, 8).unwrap();
        assert_eq!(one.tuples, three.tuples);
        assert_eq!(one.tuples, eight.tuples);
        assert_eq!(one.report.config_count, three.report.config_count);
        let ids_one: Vec<ConfigId> = one.configs.iter().map(|f| f.config.id(&c)).collect();
        let ids_three: Vec<ConfigId> = three.configs.iter().map(|f| f.config.id(&c)).collect();
        assert_eq!(ids_one, ids_three);
    }

    #[test]
    fn q7_conic_contains_construction() {
        let c = ctx(7);
        let a = canonical::least_nonsquare(&c);
        let u = Unital::build(&c, UnitalParams::validate(&c, a, Fq2Elem::ZERO).unwrap());
        let found = canonical_search(&c, &u, 2).unwrap();
        assert!(found.report.config_count > 0);
        let built = crate::construct::conic_construction(&c, a).unwrap();
        let realized = realize(&c, &built).unwrap();
        let id = TripleOnanConfig::from_points(&c, &u, realized.points).unwrap().id(&c);
        assert!(found.configs.iter().any(|f| f.config.id(&c) == id));
    }

    #[test]
    fn q7_conic_oracle_slice() {
        let c = ctx(7);
        let u = Unital::build(&c, canonical::conic_params(&c));
        let found = canonical_search(&c, &u, 2).unwrap();
        // one secant through T∞: expect q · canonical count on the slice
        let slice = [c.fq2_int(1)];
        let oracle = direct_enumeration_oracle(&c, &u, Some(&slice), 1_000_000_000, false).unwrap();
        validate_against_oracle(&c, &u, &found, &oracle, 1).unwrap();
    }

    #[test]
    fn group_covariance_q5() {
        // automorphism images of found configurations are oracle configurations
        let c = ctx(5);
        let u = Unital::build(&c, canonical::square_params(&c).unwrap());
        let found = canonical_search(&c, &u, 1).unwrap();
        let oracle = direct_enumeration_oracle(&c, &u, None, 1_000_000_000, false).unwrap();
        let mut tested = 0;
        for f in &found.configs {
            for i in 0..12u32 {
                let gamma = Fq2Elem(1 + (5 * i + 2) % (c.qq() - 1));
                let t = c.fq_from_index(i % c.q()).unwrap();
                let delta = c.fq2_int(1 + (i % (c.q() as u64 - 1) as u32) as u64);
                let map = psi(&c, u.params(), gamma)
                    .compose(&c, &phi(&c, t))
                    .compose(&c, &mu(&c, u.params(), delta).unwrap());
                let image = f.config.apply_map(&c, &u, &map).unwrap();
                assert!(oracle.configs.contains_key(&image.id(&c)));
                tested += 1;
            }
        }
        assert!(tested > 0);
    }

    #[test]
    fn canonicalize_fixes_canonical_configs() {
        let c = ctx(5);
        let u = Unital::build(&c, canonical::square_params(&c).unwrap());
        let found = canonical_search(&c, &u, 1).unwrap();
        for f in &found.configs {
            let again = canonicalize_config(&c, &u, &f.config).unwrap();
            assert_eq!(again.id(&c), f.config.id(&c));
        }
    }

    #[test]
    fn oracle_cap_enforced() {
        let c = ctx(5);
        let u = Unital::build(&c, canonical::square_params(&c).unwrap());
        assert!(matches!(
            direct_enumeration_oracle(&c, &u, None, 10, false),
            Err(Error::ResourceCap(_))
        ));
        let c9 = ctx(9);
        let u9 = Unital::build(&c9, canonical::square_params(&c9).unwrap());
        assert!(matches!(
            direct_enumeration_oracle(&c9, &u9, None, 10, false),
            Err(Error::InvalidParams(_))
        ));
    }
}
