//! Frozen baselines for quantities the exhaustive machinery derives itself:
//! canonical configuration counts, Feng-Li scan counts, E-point tallies and
//! sub-O'Nan counts. These pin the behavior across refactors.

use std::collections::BTreeSet;

use unital_lab::gfield::{FieldCtx, Fq2Elem, FqElem};
use unital_lab::onan::{e_point, extend_onan, feng_li_scan};
use unital_lab::search::canonical_search;
use unital_lab::unital::{canonical, Unital, UnitalParams};

fn ctx_for(q: u32) -> FieldCtx {
    match q {
        9 => FieldCtx::new(3, 2).unwrap(),
        _ => FieldCtx::new(q, 1).unwrap(),
    }
}

#[test]
fn canonical_counts_frozen() {
    let expected: &[(u32, &str, u64)] = &[
        (3, "nonsquare", 0),
        (5, "nonsquare", 0),
        (5, "square", 80),
        (7, "nonsquare", 288),
        (7, "square", 216),
        (9, "nonsquare", 896),
        (9, "square", 832),
        (11, "nonsquare", 1760),
        (11, "square", 2640),
    ];
    for &(q, kind, count) in expected {
        let ctx = ctx_for(q);
        let params = match kind {
            "nonsquare" => canonical::conic_params(&ctx),
            _ => canonical::square_params(&ctx).unwrap(),
        };
        let u = Unital::build(&ctx, params);
        let found = canonical_search(&ctx, &u, 4).unwrap();
        assert_eq!(found.report.config_count, count, "q = {q}, a {kind}");
        assert_eq!(found.report.tuple_count, 4 * count);
        assert_eq!(found.report.total_count, (q as u64).pow(3) * count);
    }
}

#[test]
fn feng_li_scan_counts_frozen() {
    let expected: &[(u32, &str, usize)] = &[
        (3, "conic", 2),
        (5, "conic", 4),
        (5, "square", 2),
        (7, "conic", 6),
        (7, "square", 3),
        (9, "conic", 8),
        (9, "square", 4),
    ];
    for &(q, kind, count) in expected {
        let ctx = ctx_for(q);
        let params = match kind {
            "conic" => canonical::conic_params(&ctx),
            _ => canonical::square_params(&ctx).unwrap(),
        };
        let u = Unital::build(&ctx, params);
        let (configs, stats) = feng_li_scan(&ctx, &u).unwrap();
        assert_eq!(configs.len(), count, "q = {q}, {kind}");
        // each unordered pair appears twice in the ordered scan
        assert_eq!(stats.configs_found, 2 * count);
    }
}

#[test]
fn q7_sub_onans_all_extend_back() {
    // the O'Nans contained in found Triple O'Nans at q = 7: all distinct,
    // and each extends back to its parent
    let ctx = ctx_for(7);
    let u = Unital::build(&ctx, canonical::conic_params(&ctx));
    let found = canonical_search(&ctx, &u, 4).unwrap();
    let mut ids = BTreeSet::new();
    let mut extendable = 0u64;
    for f in &found.configs {
        let parent = f.config.id(&ctx);
        for sub in f.config.sub_onans(&ctx, &u).unwrap() {
            ids.insert(sub.id(&ctx));
            let completions = extend_onan(&ctx, &u, &sub).unwrap();
            assert!(completions.iter().any(|t| t.id(&ctx) == parent));
            extendable += 1;
        }
    }
    assert_eq!(extendable, 3 * found.report.config_count);
    // no O'Nan is shared between two Triple O'Nans here
    assert_eq!(ids.len() as u64, 3 * found.report.config_count);
    assert_eq!(ids.len(), 864);
}

#[test]
fn e_point_tallies_frozen() {
    // E in U never on the conic unitals, sometimes when a is a square
    let expected: &[(u32, &str, u64, u64)] = &[
        (5, "square", 16, 80),
        (7, "conic", 0, 288),
        (7, "square", 72, 216),
        (9, "conic", 0, 896),
        (9, "square", 192, 832),
    ];
    for &(q, kind, inside, total) in expected {
        let ctx = ctx_for(q);
        let params = match kind {
            "conic" => canonical::conic_params(&ctx),
            _ => canonical::square_params(&ctx).unwrap(),
        };
        let u = Unital::build(&ctx, params);
        let found = canonical_search(&ctx, &u, 4).unwrap();
        let mut count = 0u64;
        for f in &found.configs {
            count += e_point(&ctx, &u, &f.params).unwrap().e_in_unital as u64;
        }
        assert_eq!((count, found.report.config_count), (inside, total), "q = {q} {kind}");
    }
}

#[test]
fn q5_square_invariance_across_b1() {
    // both valid b1 choices at q = 5 give the same nonzero canonical count
    let ctx = ctx_for(5);
    let unitals: Vec<Unital> = canonical::valid_b1_list(&ctx, Fq2Elem::ONE)
        .into_iter()
        .map(|b1| {
            let p = UnitalParams::validate(&ctx, Fq2Elem::ONE, ctx.fq2(FqElem::ZERO, b1)).unwrap();
            Unital::build(&ctx, p)
        })
        .collect();
    assert_eq!(unitals.len(), 2);
    let refs: Vec<&Unital> = unitals.iter().collect();
    let common = unital_lab::search::count_invariance_check(&ctx, &refs, 2).unwrap();
    assert_eq!(common, 80);
}

#[test]
fn valid_b1_lists_frozen() {
    let ctx = ctx_for(7);
    let square: Vec<u32> = canonical::valid_b1_list(&ctx, Fq2Elem::ONE)
        .iter()
        .map(|b| b.index())
        .collect();
    assert_eq!(square, vec![2, 5]);
    // q = 3 has no valid square-parameter unital at all
    let ctx3 = ctx_for(3);
    assert!(canonical::valid_b1_list(&ctx3, Fq2Elem::ONE).is_empty());
    assert!(canonical::square_params(&ctx3).is_err());
    // but the classical and conic classes exist
    assert!(canonical::classical_params(&ctx3).is_ok());
    let conic = canonical::conic_params(&ctx3);
    assert!(UnitalParams::validate(&ctx3, conic.a, ctx3.fq2(FqElem::ZERO, FqElem::ONE)).is_err());
}
