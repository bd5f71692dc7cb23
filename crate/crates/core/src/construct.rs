//! Explicit BM-special Triple O'Nan constructions and the cyclotomic-number
//! machinery behind their existence counts.
//!
//! Three constructions are implemented:
//! - the conic unital (b = 0, a non-square), for odd q ≥ 7, split by
//!   q mod 4 into two residue-class searches;
//! - a = 1 (square) with b = b1·e, q ≡ 1 (mod 4);
//! - a = 1 (square) with b = b1·e, q ≡ 3 (mod 4).
//!
//! The b-transfer lemma moves a configuration between unitals U_{a,b1·e}
//! and U_{a,b2·e} with the same a, h, s, t, which is what makes the counts
//! depend only on q and the square class of a.

use crate::gfield::{FieldCtx, Fq2Elem, FqElem};
use crate::onan::{check_equations, TripleOnanParams};
use crate::unital::UnitalParams;
use crate::{Error, Result};

/// Cyclotomic numbers (i,j)_order: the count of x in GF(q)* with x in class
/// R_i, x+1 nonzero in class R_j, where R_i = w^i · (order-th powers).
#[derive(Clone, Debug)]
pub struct CyclotomicTable {
    pub q: u32,
    pub order: u32,
    pub w: FqElem,
    counts: Vec<u64>,
}

impl CyclotomicTable {
    /// Entry (i,j), indices taken mod order.
    pub fn get(&self, i: i64, j: i64) -> u64 {
        let o = self.order as i64;
        let i = i.rem_euclid(o) as usize;
        let j = j.rem_euclid(o) as usize;
        self.counts[i * self.order as usize + j]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }
}

/// Residue class of a nonzero element: its discrete log mod order.
fn class_of(ctx: &FieldCtx, x: FqElem, order: u32) -> u32 {
    ctx.fq_log(x).expect("class of zero") % order
}

/// Build the cyclotomic table by direct enumeration of GF(q)*.
pub fn cyclotomic(ctx: &FieldCtx, order: u32) -> Result<CyclotomicTable> {
    match order {
        2 => {}
        4 => {
            if ctx.q() % 4 != 1 {
                return Err(Error::InvalidParams(
                    "order-4 cyclotomic numbers need q = 1 mod 4".into(),
                ));
            }
        }
        _ => return Err(Error::InvalidParams("supported cyclotomic orders are 2 and 4".into())),
    }
    let mut counts = vec![0u64; (order * order) as usize];
    let one = FqElem::ONE;
    for x in ctx.fq_units() {
        let x1 = ctx.fq_add(x, one);
        if x1.is_zero() {
            continue;
        }
        let i = class_of(ctx, x, order);
        let j = class_of(ctx, x1, order);
        counts[(i * order + j) as usize] += 1;
    }
    Ok(CyclotomicTable { q: ctx.q(), order, w: ctx.w(), counts })
}

/// The indeterminates (ℓ1, ℓ2) read off the order-4 table at the designated
/// positions: (1,2) and (0,3) for q ≡ 1 mod 8, (1,0) and (0,1) for
/// q ≡ 5 mod 8.
///
/// For q ≡ 5 mod 8 the ℓ2 class is {(0,1), (1,3), (3,2)} under the index
/// relations; reading ℓ2 at (0,3) instead breaks the solution pattern
/// already at q = 5, where (0,1) = 1 but (0,3) = 0.
pub fn quartic_ells(table: &CyclotomicTable) -> (u64, u64) {
    if table.q % 8 == 1 {
        (table.get(1, 2), table.get(0, 3))
    } else {
        (table.get(1, 0), table.get(0, 1))
    }
}

/// Ordered (X, Y) pairs for the conic construction at q ≡ 1 mod 4:
/// X, Y both in R_1 with X+1 in R_0 ∪ R_2 and Y+1 in R_1 ∪ R_3, or both in
/// R_3 with the parities swapped.
pub fn conic_xy_candidates(ctx: &FieldCtx) -> Result<Vec<(FqElem, FqElem)>> {
    if ctx.q() % 4 != 1 {
        return Err(Error::InvalidParams("quartic-class candidates need q = 1 mod 4".into()));
    }
    let mut out = Vec::new();
    let one = FqElem::ONE;
    let bucket = |x: FqElem| -> Option<(u32, u32)> {
        let x1 = ctx.fq_add(x, one);
        if x1.is_zero() {
            return None;
        }
        Some((class_of(ctx, x, 4), class_of(ctx, x1, 4)))
    };
    for (xc, x1par, yc, y1par) in [(1u32, 0u32, 1u32, 1u32), (3, 1, 3, 0)] {
        for x in ctx.fq_units() {
            let Some((cx, cx1)) = bucket(x) else { continue };
            if cx != xc || cx1 % 2 != x1par {
                continue;
            }
            for y in ctx.fq_units() {
                let Some((cy, cy1)) = bucket(y) else { continue };
                if cy != yc || cy1 % 2 != y1par {
                    continue;
                }
                out.push((x, y));
            }
        }
    }
    Ok(out)
}

/// The two computations of the candidate-pair count n for q ≡ 1 mod 4:
/// the ℓ1/ℓ2 formula and the direct enumeration. They must agree.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ConicPairCount {
    pub formula: u64,
    pub direct: u64,
}

pub fn count_conic_xy_pairs(ctx: &FieldCtx) -> Result<ConicPairCount> {
    let table = cyclotomic(ctx, 4)?;
    let (l1, l2) = quartic_ells(&table);
    let quarter = (ctx.q() as u64 - 1) / 4;
    let formula = 2 * (quarter - l1 - l2) * (l1 + l2);
    let direct = conic_xy_candidates(ctx)?.len() as u64;
    if formula != direct {
        return Err(Error::InvariantViolation(format!(
            "conic pair count mismatch at q = {}: formula {formula}, direct {direct}",
            ctx.q()
        )));
    }
    Ok(ConicPairCount { formula, direct })
}

/// Ordered (X, Y) pairs for the conic construction at q ≡ 3 mod 4:
/// X, Y both squares, with exactly one of X+1, Y+1 a square (X+1 square in
/// the first case, Y+1 square in the second).
pub fn conic_xy_candidates_q3(ctx: &FieldCtx) -> Result<Vec<(FqElem, FqElem)>> {
    if ctx.q() % 4 != 3 {
        return Err(Error::InvalidParams("this candidate set needs q = 3 mod 4".into()));
    }
    let one = FqElem::ONE;
    let kinds: Vec<(FqElem, bool)> = ctx
        .fq_units()
        .filter_map(|x| {
            let x1 = ctx.fq_add(x, one);
            if x1.is_zero() || !ctx.fq_is_square(x) {
                return None;
            }
            Some((x, ctx.fq_is_square(x1)))
        })
        .collect();
    let mut out = Vec::new();
    for &(x, x1sq) in &kinds {
        for &(y, y1sq) in &kinds {
            if x1sq != y1sq {
                out.push((x, y));
            }
        }
    }
    Ok(out)
}

/// The type-compatible pair count ((0,0)+(1,1)) · ((1,0)+(0,1)) for
/// q ≡ 3 mod 4, computed from the order-2 table, and its closed form
/// ((q−3)/2)((q−1)/2).
pub fn q3_type_pair_count(ctx: &FieldCtx) -> Result<(u64, u64)> {
    if ctx.q() % 4 != 3 {
        return Err(Error::InvalidParams("type-pair count needs q = 3 mod 4".into()));
    }
    let t = cyclotomic(ctx, 2)?;
    let direct = (t.get(0, 0) + t.get(1, 1)) * (t.get(1, 0) + t.get(0, 1));
    let q = ctx.q() as u64;
    Ok((direct, (q - 3) / 2 * ((q - 1) / 2)))
}

fn assert_invariant(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvariantViolation(what.into()))
    }
}

/// Verify the order-4 relations for q ≡ 1 mod 4: the index symmetries, the
/// row sums, and the two-indeterminate solution pattern they generate.
pub fn verify_quartic_identities(ctx: &FieldCtx) -> Result<()> {
    let t = cyclotomic(ctx, 4)?;
    let q = ctx.q() as i64;
    let g = |i: i64, j: i64| t.get(i, j) as i64;
    let (l1, l2) = {
        let (a, b) = quartic_ells(&t);
        (a as i64, b as i64)
    };
    let groups: &[(&[(i64, i64)], i64)] = if ctx.q() % 8 == 1 {
        &[
            (&[(1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2)], 0),
            (&[(0, 3), (3, 0), (1, 1)], 1),
            (&[(0, 2), (2, 0), (2, 2)], 2),
            (&[(0, 1), (1, 0), (3, 3)], 3),
            (&[(0, 0)], 4),
        ]
    } else {
        &[
            (&[(1, 0), (1, 1), (2, 1), (2, 3), (3, 0), (3, 3)], 0),
            (&[(0, 1), (1, 3), (3, 2)], 1),
            (&[(0, 0), (2, 0), (2, 2)], 5),
            (&[(0, 3), (1, 2), (3, 1)], 3),
            (&[(0, 2)], 6),
        ]
    };
    for &(cells, kind) in groups {
        let expected = match kind {
            0 => l1,
            1 => l2,
            2 => (q - 1) / 8 - l1,
            3 => (q - 1) / 4 - 2 * l1 - l2,
            4 => 3 * l1 - (q + 7) / 8,
            5 => (q - 5) / 8 - l1,
            _ => 3 * l1 - (q - 5) / 8,
        };
        for &(i, j) in cells {
            assert_invariant(
                g(i, j) == expected,
                &format!("quartic solution pattern fails at ({i},{j}) for q = {q}"),
            )?;
        }
    }
    for i in 0..4i64 {
        for j in 0..4i64 {
            assert_invariant(g(i, j) == g(-i, j - i), "quartic relation (i,j)=(-i,j-i) fails")?;
            let other = if ctx.q() % 8 == 1 { g(j, i) } else { g(j + 2, i + 2) };
            assert_invariant(g(i, j) == other, "quartic conjugation relation fails")?;
        }
        let row: i64 = (0..4i64).map(|j| g(i, j)).sum();
        let delta_pos = if ctx.q() % 8 == 1 { 0 } else { 2 };
        assert_invariant(
            row == (q - 1) / 4 - i64::from(i == delta_pos),
            "quartic row sum fails",
        )?;
    }
    Ok(())
}

/// Verify the order-2 pattern: for q ≡ 3 mod 4 the three entries
/// (0,0), (1,0), (1,1) equal (q−3)/4 and (0,1) = (q+1)/4; for q ≡ 1 mod 4
/// the entries (0,1), (1,0), (1,1) equal (q−1)/4 and (0,0) = (q−5)/4.
pub fn verify_order2_identities(ctx: &FieldCtx) -> Result<()> {
    let t = cyclotomic(ctx, 2)?;
    let q = ctx.q() as u64;
    if q % 4 == 3 {
        let m = (q - 3) / 4;
        assert_invariant(
            t.get(0, 0) == m && t.get(1, 0) == m && t.get(1, 1) == m && t.get(0, 1) == m + 1,
            &format!("order-2 pattern fails for q = {q} = 3 mod 4"),
        )?;
    } else {
        let m = (q - 1) / 4;
        assert_invariant(
            t.get(0, 1) == m && t.get(1, 0) == m && t.get(1, 1) == m && t.get(0, 0) == m - 1,
            &format!("order-2 pattern fails for q = {q} = 1 mod 4"),
        )?;
    }
    Ok(())
}

/// Conic-unital construction (b = 0, a a non-square in GF(q²)), odd q ≥ 7.
///
/// Picks the first residue-class candidate (X, Y), derives u and a
/// non-square h², sets s = u, t = 1, k = c(1 + 1/h) with
/// c = (s²+t²)/(2(s+t)), and solves the quadratic
/// 2a(xk)² = −(1+1/h²)·st/(s+t) + (1/h)(s²+t²)/(s+t) for x. The result
/// satisfies all four configuration equations.
pub fn conic_construction(ctx: &FieldCtx, a: Fq2Elem) -> Result<TripleOnanParams> {
    let params = UnitalParams::validate(ctx, a, Fq2Elem::ZERO)?;
    if params.a_character() != crate::unital::ACharacter::NonSquare {
        return Err(Error::InvalidParams("the conic construction needs a non-square a".into()));
    }
    let q = ctx.q();
    if q <= 5 {
        return Err(Error::NoConstruction(format!(
            "the conic unital has no BM-special Triple O'Nan for q = {q}"
        )));
    }

    let candidates = if q % 4 == 1 { conic_xy_candidates(ctx)? } else { conic_xy_candidates_q3(ctx)? };
    assert_invariant(!candidates.is_empty(), "no residue-class candidates for q >= 7")?;

    for (xx, yy) in candidates {
        let (u, h2) = if q % 4 == 1 {
            let l = ctx.fq_log(ctx.fq_div(yy, xx)).expect("nonzero");
            assert_invariant(l % 4 == 0, "Y/X is not a fourth power")?;
            let u = ctx.fq_from_log(l / 4);
            let h2 = ctx.fq_neg(ctx.fq_div(yy, ctx.fq_mul(u, u)));
            (u, h2)
        } else {
            // square roots of X, Y that are themselves squares
            let pick_square_root = |v: FqElem| -> Result<FqElem> {
                let r = ctx.fq_sqrt(v)?;
                Ok(if ctx.fq_is_square(r) { r } else { ctx.fq_neg(r) })
            };
            let xr = pick_square_root(xx)?;
            let yr = pick_square_root(yy)?;
            if ctx.fq_mul(xr, yr) == FqElem::ONE {
                // would force h² = −1
                continue;
            }
            let u = ctx.fq_sqrt(ctx.fq_div(yr, xr))?;
            let h2 = ctx.fq_neg(ctx.fq_mul(xr, yr));
            (u, h2)
        };
        assert_invariant(!ctx.fq_is_square(h2), "h^2 must be a non-square")?;
        assert_invariant(h2 != ctx.fq_neg(FqElem::ONE), "h^2 = -1 slipped through")?;
        let u4 = ctx.fq_pow(u, 4);
        assert_invariant(u4 != FqElem::ONE, "u^4 = 1 slipped through")?;
        // X = −h²/u² and Y = −h²u² by construction
        let mh2 = ctx.fq_neg(h2);
        debug_assert!(
            (q % 4 != 1)
                || (ctx.fq_div(mh2, ctx.fq_mul(u, u)) == xx
                    || ctx.fq_mul(mh2, ctx.fq_mul(u, u)) == xx)
        );

        let s = u;
        let t = FqElem::ONE;
        let spt = ctx.fq_add(s, t);
        let s2pt2 = ctx.fq_add(ctx.fq_mul(s, s), ctx.fq_mul(t, t));
        assert_invariant(!spt.is_zero() && !s2pt2.is_zero(), "degenerate s, t")?;
        let c = ctx.fq_div(s2pt2, ctx.fq_mul(ctx.fq(2), spt));

        let h = ctx.sqrt(ctx.embed(h2))?;
        assert_invariant(!ctx.in_base(h), "h fell into GF(q)")?;
        let k = ctx.mul(ctx.embed(c), ctx.add(Fq2Elem::ONE, ctx.inv(h)));
        assert_invariant(!k.is_zero(), "k vanished")?;

        let h2e = ctx.mul(h, h);
        let spt_e = ctx.embed(spt);
        let rhs = ctx.add(
            ctx.neg(ctx.mul(
                ctx.add(Fq2Elem::ONE, ctx.inv(h2e)),
                ctx.div(ctx.embed(ctx.fq_mul(s, t)), spt_e),
            )),
            ctx.mul(ctx.inv(h), ctx.div(ctx.embed(s2pt2), spt_e)),
        );
        assert_invariant(!ctx.is_square(rhs), "construction target is a square in GF(q^2)")?;
        let xk2 = ctx.div(rhs, ctx.mul(ctx.fq2_int(2), a));
        assert_invariant(ctx.is_square(xk2), "(xk)^2 is not a square")?;
        let xk = ctx.sqrt(xk2)?;
        let x = ctx.div(xk, k);

        let out = TripleOnanParams::new(ctx, a, Fq2Elem::ZERO, x, k, h, s, t)?;
        assert_invariant(check_equations(ctx, &out).holds(), "conic construction fails its equations")?;
        return Ok(out);
    }
    Err(Error::InvariantViolation("all conic candidates were filtered out".into()))
}

/// Square-parameter construction for q ≡ 1 mod 4: a = 1, b = b1·e.
///
/// Uses h² = w, k = −b1·e·h + b1·e, x = 1/k and
/// t = 2h²(±i−1)/(h²+1), s = ±i·t where i = √−1; both signs are attempted
/// and the first verifying choice is returned.
pub fn asq14_construction(ctx: &FieldCtx, b1: FqElem) -> Result<TripleOnanParams> {
    if ctx.q() % 4 != 1 {
        return Err(Error::InvalidParams("this construction needs q = 1 mod 4".into()));
    }
    let b = ctx.fq2(FqElem::ZERO, b1);
    UnitalParams::validate(ctx, Fq2Elem::ONE, b)?;

    let h2 = ctx.w();
    let h = ctx.sqrt(ctx.embed(h2))?;
    assert_invariant(!ctx.in_base(h), "h fell into GF(q)")?;
    // e·h lies in GF(q) because h is a pure e-multiple
    let eh = ctx.to_base(ctx.mul(ctx.e(), h))?;
    let k = ctx.fq2(ctx.fq_neg(ctx.fq_mul(b1, eh)), b1);
    assert_invariant(!k.is_zero(), "k vanished")?;
    let x = ctx.inv(k);

    let i = ctx.fq_sqrt(ctx.fq_neg(FqElem::ONE))?;
    let h2p1 = ctx.fq_add(h2, FqElem::ONE);
    assert_invariant(!h2p1.is_zero(), "h^2 = -1 cannot happen for q = 1 mod 4")?;

    let mut last_err = None;
    for (sign_t, sign_s) in [(false, false), (true, true), (false, true), (true, false)] {
        let it = if sign_t { ctx.fq_neg(i) } else { i };
        let is = if sign_s { ctx.fq_neg(i) } else { i };
        let t = ctx.fq_div(
            ctx.fq_mul(ctx.fq_mul(ctx.fq(2), h2), ctx.fq_sub(it, FqElem::ONE)),
            h2p1,
        );
        let s = ctx.fq_mul(is, t);
        let params = match TripleOnanParams::new(ctx, Fq2Elem::ONE, b, x, k, h, s, t) {
            Ok(p) => p,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        if check_equations(ctx, &params).holds() {
            return Ok(params);
        }
    }
    Err(last_err.unwrap_or_else(|| {
        Error::InvariantViolation("no sign choice verifies in the q = 1 mod 4 construction".into())
    }))
}

/// The (s, t) solutions of −(s²+t²)/(2(s+t)) = Θ with s² ≠ t², where
/// Θ = θ^(q+1) for θ² = e. Only defined for q ≡ 3 mod 4 (e is a square
/// exactly then).
pub fn q3_st_candidates(ctx: &FieldCtx) -> Result<Vec<(FqElem, FqElem)>> {
    if ctx.q() % 4 != 3 {
        return Err(Error::InvalidParams("these candidates need q = 3 mod 4".into()));
    }
    let theta = ctx.sqrt(ctx.e())?;
    let big_theta = ctx.norm(theta);
    let two_theta = ctx.fq_mul(ctx.fq(2), big_theta);
    let mut out = Vec::new();
    for s in ctx.fq_units() {
        let s2 = ctx.fq_mul(s, s);
        for t in ctx.fq_units() {
            let t2 = ctx.fq_mul(t, t);
            if s2 == t2 {
                continue;
            }
            let lhs = ctx.fq_neg(ctx.fq_add(s2, t2));
            if lhs == ctx.fq_mul(two_theta, ctx.fq_add(s, t)) {
                out.push((s, t));
            }
        }
    }
    Ok(out)
}

/// Square-parameter construction for q ≡ 3 mod 4, q > 3: a = 1, b = b1·e.
///
/// Uses θ² = e, Θ = θ^(q+1) (a square root of −w), h = e/Θ (so h² = −1),
/// k = Θ(−1+b1Θ) + (1+b1Θ)e, x = θ/k, and the first (s, t) with
/// −(s²+t²)/(2(s+t)) = Θ.
pub fn q3_construction(ctx: &FieldCtx, b1: FqElem) -> Result<TripleOnanParams> {
    if ctx.q() % 4 != 3 {
        return Err(Error::InvalidParams("this construction needs q = 3 mod 4".into()));
    }
    if ctx.q() == 3 {
        return Err(Error::NoConstruction(
            "no (s,t) with s² ≠ t² exists at q = 3; the construction is empty".into(),
        ));
    }
    let b = ctx.fq2(FqElem::ZERO, b1);
    UnitalParams::validate(ctx, Fq2Elem::ONE, b)?;

    let theta = ctx.sqrt(ctx.e())?;
    let big_theta = ctx.norm(theta);
    assert_invariant(
        ctx.fq_mul(big_theta, big_theta) == ctx.fq_neg(ctx.w()),
        "Theta^2 != -w",
    )?;
    let h = ctx.div(ctx.e(), ctx.embed(big_theta));
    assert_invariant(ctx.mul(h, h) == ctx.neg(Fq2Elem::ONE), "h^2 != -1")?;
    assert_invariant(!ctx.in_base(h), "h fell into GF(q)")?;

    let b1t = ctx.fq_mul(b1, big_theta);
    let k0 = ctx.fq_mul(big_theta, ctx.fq_sub(b1t, FqElem::ONE));
    let k1 = ctx.fq_add(FqElem::ONE, b1t);
    let k = ctx.fq2(k0, k1);
    assert_invariant(!k.is_zero(), "k vanished")?;
    let x = ctx.div(theta, k);

    let candidates = q3_st_candidates(ctx)?;
    assert_invariant(!candidates.is_empty(), "no (s,t) candidates for q > 3")?;
    let mut last_err = None;
    for (s, t) in candidates {
        let params = match TripleOnanParams::new(ctx, Fq2Elem::ONE, b, x, k, h, s, t) {
            Ok(p) => p,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        if check_equations(ctx, &params).holds() {
            return Ok(params);
        }
        last_err = Some(Error::InvariantViolation(
            "a q = 3 mod 4 candidate failed its equations".into(),
        ));
    }
    Err(last_err.unwrap())
}

/// The new frame data (y, m) produced by the b-transfer.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct TransferWitness {
    pub m: Fq2Elem,
    pub y: Fq2Elem,
}

/// Transfer a configuration from U_{a,b1·e} to U_{a,b2·e}: same a, h, s, t;
/// m is the solution of the two linear difference equations
///
///   2(b1−b2)eΘ = ⟦k⟧ − ⟦m⟧,
///   2(b1−b2)eΘh^(q+1) = h(k−m) − h^q(k−m)^q,
///
/// and y = xk/m (so that ay²m² = ax²k² and (ym)^(q+1) = (xk)^(q+1)).
pub fn transfer_b(
    ctx: &FieldCtx,
    params: &TripleOnanParams,
    b2: FqElem,
) -> Result<(TripleOnanParams, TransferWitness)> {
    let (b0, b1) = ctx.parts(params.b);
    if !b0.is_zero() {
        return Err(Error::InvalidParams("transfer needs b of the form b1·e".into()));
    }
    let target_b = ctx.fq2(FqElem::ZERO, b2);
    UnitalParams::validate(ctx, params.a, target_b)?;

    let xk = ctx.mul(params.x, params.k);
    let theta = ctx.norm(xk);
    let diff = ctx.fq_sub(b1, b2);
    let (k0, k1) = ctx.parts(params.k);
    let (h0, h1) = ctx.parts(params.h);
    assert_invariant(!h1.is_zero(), "h lies in GF(q)")?;

    let m1 = ctx.fq_sub(k1, ctx.fq_mul(diff, theta));
    let m0 = ctx.fq_sub(
        k0,
        ctx.fq_div(
            ctx.fq_mul(diff, ctx.fq_mul(theta, ctx.fq_sub(ctx.norm(params.h), h0))),
            h1,
        ),
    );
    let m = ctx.fq2(m0, m1);
    assert_invariant(!m.is_zero(), "transfer target m vanished")?;

    // y² = Δ/(am²) is a square by construction: y = xk/m realizes it
    let delta = ctx.mul(params.a, ctx.mul(xk, xk));
    let y2 = ctx.div(delta, ctx.mul(params.a, ctx.mul(m, m)));
    assert_invariant(ctx.is_square(y2), "Delta/(a m^2) is not a square")?;
    let y = ctx.div(xk, m);
    assert_invariant(ctx.mul(y, y) == y2, "y = xk/m does not solve y^2 = Delta/(a m^2)")?;

    let out = TripleOnanParams::new(ctx, params.a, target_b, y, m, params.h, params.s, params.t)?;
    assert_invariant(
        check_equations(ctx, &out).holds(),
        "transferred parameters fail the configuration equations",
    )?;
    Ok((out, TransferWitness { m, y }))
}
