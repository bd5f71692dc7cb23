//! The orthogonal Buekenhout-Metz unital U_{a,b} in PG(2,q²).
//!
//! U_{a,b} = {(x, ax² + bx^(q+1) + r, 1) : r ∈ GF(q), x ∈ GF(q²)} ∪ {(0,1,0)},
//! valid whenever the discriminant d = (b−b^q)² + 4a^(q+1) is a non-square in
//! GF(q). The affine membership test is the single equation
//!
//!   a·x² − a^q·x^(2q) + (b − b^q)·x^(q+1) = y − y^q.
//!
//! The module also carries the unital's automorphism group (the maps φ_t,
//! ψ_γ, μ_δ) and the equivalence relation on parameter pairs.

use crate::gfield::{FieldCtx, Fq2Elem, FqElem};
use crate::plane::{self, PointSet, ProjLine, ProjPoint};
use crate::{Error, Result};

/// Square class of the parameter a in GF(q²).
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum ACharacter {
    /// a = 0: the classical (Hermitian) unital.
    Zero,
    Square,
    NonSquare,
}

impl ACharacter {
    pub fn as_str(self) -> &'static str {
        match self {
            ACharacter::Zero => "zero",
            ACharacter::Square => "square",
            ACharacter::NonSquare => "nonsquare",
        }
    }
}

/// Validated (a, b) parameter pair with its cached discriminant.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct UnitalParams {
    pub a: Fq2Elem,
    pub b: Fq2Elem,
    d: FqElem,
    a_character: ACharacter,
}

/// The special point T∞ = (0,1,0), the unique unital point at infinity.
pub fn special_point(ctx: &FieldCtx) -> ProjPoint {
    ProjPoint::from_ints(ctx, 0, 1, 0)
}

impl UnitalParams {
    /// Check the discriminant condition and cache derived data.
    ///
    /// The pair is rejected when d = (b−b^q)² + 4a^(q+1) is zero or a square
    /// in GF(q). A valid pair with a = 0 is the classical unital; it is
    /// accepted here and rejected by the configuration search.
    pub fn validate(ctx: &FieldCtx, a: Fq2Elem, b: Fq2Elem) -> Result<UnitalParams> {
        let bb = ctx.box_diff(b);
        let d2 = ctx.add(ctx.mul(bb, bb), ctx.mul(ctx.fq2_int(4), ctx.embed(ctx.norm(a))));
        let d = ctx
            .to_base(d2)
            .map_err(|_| Error::InvariantViolation("discriminant fell outside GF(q)".into()))?;
        if d.is_zero() {
            return Err(Error::InvalidParams("discriminant is zero".into()));
        }
        if ctx.fq_is_square(d) {
            return Err(Error::InvalidParams(
                "discriminant is a square in GF(q); not a Buekenhout-Metz unital".into(),
            ));
        }
        let a_character = if a.is_zero() {
            ACharacter::Zero
        } else if ctx.is_square(a) {
            ACharacter::Square
        } else {
            ACharacter::NonSquare
        };
        Ok(UnitalParams { a, b, d, a_character })
    }

    pub fn discriminant(&self) -> FqElem {
        self.d
    }

    pub fn a_character(&self) -> ACharacter {
        self.a_character
    }

    pub fn is_classical(&self) -> bool {
        self.a_character == ACharacter::Zero
    }

    /// b ∈ GF(q) gives the same point set as b = 0: the conic unital.
    pub fn is_conic(&self, ctx: &FieldCtx) -> bool {
        ctx.in_base(self.b) && !self.is_classical()
    }

    /// Formula-based membership test (no materialized point set needed).
    pub fn contains(&self, ctx: &FieldCtx, p: &ProjPoint) -> bool {
        if p.z.is_zero() {
            return *p == special_point(ctx);
        }
        debug_assert_eq!(p.z, Fq2Elem::ONE);
        let ax2 = ctx.mul(self.a, ctx.mul(p.x, p.x));
        let lhs = ctx.add(
            ctx.box_diff(ax2),
            ctx.mul(ctx.box_diff(self.b), ctx.embed(ctx.norm(p.x))),
        );
        lhs == ctx.box_diff(p.y)
    }
}

/// Materialized unital: the q³+1 points plus a plane-wide membership bitset.
pub struct Unital {
    params: UnitalParams,
    points: Vec<ProjPoint>,
    bits: PointSet,
}

impl Unital {
    pub fn build(ctx: &FieldCtx, params: UnitalParams) -> Unital {
        let q = ctx.q();
        let mut points = Vec::with_capacity((q as usize).pow(3) + 1);
        let mut bits = PointSet::new(ctx);
        for x in ctx.fq2_elements() {
            let base = ctx.add(
                ctx.mul(params.a, ctx.mul(x, x)),
                ctx.mul(params.b, ctx.embed(ctx.norm(x))),
            );
            for r in ctx.fq_elements() {
                let y = ctx.add(base, ctx.embed(r));
                let p = ProjPoint { x, y, z: Fq2Elem::ONE };
                bits.insert(p.index(ctx));
                points.push(p);
            }
        }
        let t = special_point(ctx);
        bits.insert(t.index(ctx));
        points.push(t);
        Unital { params, points, bits }
    }

    pub fn params(&self) -> &UnitalParams {
        &self.params
    }

    /// All q³+1 points, affine first, T∞ last.
    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn affine_points(&self) -> &[ProjPoint] {
        &self.points[..self.points.len() - 1]
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn contains_point(&self, ctx: &FieldCtx, p: &ProjPoint) -> bool {
        self.bits.contains(p.index(ctx))
    }

    pub fn contains_index(&self, idx: u64) -> bool {
        self.bits.contains(idx)
    }

    /// Number of unital points on the line: 1 (tangent) or q+1 (secant).
    /// Any other count is an internal consistency error.
    pub fn line_profile(&self, ctx: &FieldCtx, l: &ProjLine) -> Result<u32> {
        let n = l
            .points(ctx)
            .iter()
            .filter(|p| self.contains_point(ctx, p))
            .count() as u32;
        if n == 1 || n == ctx.q() + 1 {
            Ok(n)
        } else {
            Err(Error::InvariantViolation(format!(
                "line meets the unital in {n} points; expected 1 or q+1"
            )))
        }
    }

    /// (tangent count, secant count) over all q⁴+q²+1 lines.
    pub fn line_census(&self, ctx: &FieldCtx) -> Result<(u64, u64)> {
        let mut tangents = 0u64;
        let mut secants = 0u64;
        for l in plane::all_lines(ctx) {
            match self.line_profile(ctx, &l)? {
                1 => tangents += 1,
                _ => secants += 1,
            }
        }
        Ok((tangents, secants))
    }
}

/// A projective map given by a 3×3 matrix acting on column coordinate
/// vectors.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ProjMap {
    pub m: [[Fq2Elem; 3]; 3],
}

impl ProjMap {
    pub fn identity(ctx: &FieldCtx) -> ProjMap {
        let o = ctx.fq2_int(1);
        let z = Fq2Elem::ZERO;
        ProjMap { m: [[o, z, z], [z, o, z], [z, z, o]] }
    }

    pub fn apply(&self, ctx: &FieldCtx, p: &ProjPoint) -> ProjPoint {
        let v = p.coords();
        let mut out = [Fq2Elem::ZERO; 3];
        for (row, slot) in self.m.iter().zip(out.iter_mut()) {
            let mut acc = Fq2Elem::ZERO;
            for (c, x) in row.iter().zip(v.iter()) {
                acc = ctx.add(acc, ctx.mul(*c, *x));
            }
            *slot = acc;
        }
        ProjPoint::new(ctx, out[0], out[1], out[2]).expect("projective map is invertible")
    }

    /// Composition: (self ∘ other), i.e. apply `other` first.
    pub fn compose(&self, ctx: &FieldCtx, other: &ProjMap) -> ProjMap {
        let mut m = [[Fq2Elem::ZERO; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = Fq2Elem::ZERO;
                for (k, row) in other.m.iter().enumerate() {
                    acc = ctx.add(acc, ctx.mul(self.m[i][k], row[j]));
                }
                m[i][j] = acc;
            }
        }
        ProjMap { m }
    }

    pub fn inverse(&self, ctx: &FieldCtx) -> Result<ProjMap> {
        let m = &self.m;
        let det2 = |a: Fq2Elem, b: Fq2Elem, c: Fq2Elem, d: Fq2Elem| {
            ctx.sub(ctx.mul(a, d), ctx.mul(b, c))
        };
        let det = ctx.add(
            ctx.sub(
                ctx.mul(m[0][0], det2(m[1][1], m[1][2], m[2][1], m[2][2])),
                ctx.mul(m[0][1], det2(m[1][0], m[1][2], m[2][0], m[2][2])),
            ),
            ctx.mul(m[0][2], det2(m[1][0], m[1][1], m[2][0], m[2][1])),
        );
        if det.is_zero() {
            return Err(Error::Degenerate("singular projective map".into()));
        }
        let inv_det = ctx.inv(det);
        let mut adj = [[Fq2Elem::ZERO; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let r0 = (i + 1) % 3;
                let r1 = (i + 2) % 3;
                let c0 = (j + 1) % 3;
                let c1 = (j + 2) % 3;
                // adjugate: cofactor matrix transposed
                adj[j][i] = ctx.mul(inv_det, det2(m[r0][c0], m[r0][c1], m[r1][c0], m[r1][c1]));
            }
        }
        Ok(ProjMap { m: adj })
    }
}

/// φ_t: (x,y,z) ↦ (x, y+tz, z). Fixes T∞ and every line through it.
pub fn phi(ctx: &FieldCtx, t: FqElem) -> ProjMap {
    let mut m = ProjMap::identity(ctx);
    m.m[1][2] = ctx.embed(t);
    m
}

/// ψ_γ: (x,y,z) ↦ (x+γz, (2aγ − (b^q−b)γ^q)x + y + (aγ² + bγ^(q+1))z, z).
pub fn psi(ctx: &FieldCtx, params: &UnitalParams, gamma: Fq2Elem) -> ProjMap {
    let a = params.a;
    let b = params.b;
    let mut m = ProjMap::identity(ctx);
    m.m[0][2] = gamma;
    m.m[1][0] = ctx.add(
        ctx.mul(ctx.fq2_int(2), ctx.mul(a, gamma)),
        ctx.mul(ctx.box_diff(b), ctx.frobenius(gamma)),
    );
    m.m[1][2] = ctx.add(
        ctx.mul(a, ctx.mul(gamma, gamma)),
        ctx.mul(b, ctx.embed(ctx.norm(gamma))),
    );
    m
}

/// μ_δ: (x,y,z) ↦ (δx, δ²y, z), with δ² ∈ GF(q)* when b ∈ GF(q) and
/// δ ∈ GF(q)* otherwise.
pub fn mu(ctx: &FieldCtx, params: &UnitalParams, delta: Fq2Elem) -> Result<ProjMap> {
    if delta.is_zero() {
        return Err(Error::InvalidParams("mu requires a nonzero delta".into()));
    }
    let d2 = ctx.mul(delta, delta);
    if ctx.in_base(params.b) {
        if !ctx.in_base(d2) {
            return Err(Error::InvalidParams(
                "mu requires delta^2 in GF(q) when b is in GF(q)".into(),
            ));
        }
    } else if !ctx.in_base(delta) {
        return Err(Error::InvalidParams(
            "mu requires delta in GF(q) when b is not in GF(q)".into(),
        ));
    }
    let mut m = ProjMap::identity(ctx);
    m.m[0][0] = delta;
    m.m[1][1] = d2;
    Ok(m)
}

/// Witness for the equivalence (a',b') = (a^τ γ² v, b^τ γ^(q+1) v + u).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct EquivWitness {
    /// Power i of the base-field automorphism x ↦ x^(p^i).
    pub tau: u32,
    pub v: FqElem,
    pub gamma: Fq2Elem,
    pub u: FqElem,
}

/// Image of (a, b) under an equivalence witness.
pub fn apply_witness(
    ctx: &FieldCtx,
    w: &EquivWitness,
    a: Fq2Elem,
    b: Fq2Elem,
) -> (Fq2Elem, Fq2Elem) {
    let at = ctx.apply_tau(a, w.tau);
    let bt = ctx.apply_tau(b, w.tau);
    let ve = ctx.embed(w.v);
    let a2 = ctx.mul(at, ctx.mul(ctx.mul(w.gamma, w.gamma), ve));
    let b2 = ctx.add(
        ctx.mul(bt, ctx.mul(ctx.embed(ctx.norm(w.gamma)), ve)),
        ctx.embed(w.u),
    );
    (a2, b2)
}

/// Exhaustive witness search deciding whether U_{a,b} and U_{a',b'} are
/// equivalent under the plane's collineation group.
pub fn equivalent_params(
    ctx: &FieldCtx,
    a: Fq2Elem,
    b: Fq2Elem,
    a2: Fq2Elem,
    b2: Fq2Elem,
) -> Result<Option<EquivWitness>> {
    UnitalParams::validate(ctx, a, b)?;
    UnitalParams::validate(ctx, a2, b2)?;
    for tau in 0..ctx.ext_degree() {
        let at = ctx.apply_tau(a, tau);
        let bt = ctx.apply_tau(b, tau);
        for gamma in ctx.fq2_units() {
            let g2 = ctx.mul(gamma, gamma);
            let gn = ctx.embed(ctx.norm(gamma));
            for v in ctx.fq_units() {
                let ve = ctx.embed(v);
                if ctx.mul(at, ctx.mul(g2, ve)) != a2 {
                    continue;
                }
                // u is forced: u = b2 − b^τ γ^(q+1) v, and must lie in GF(q)
                let u2 = ctx.sub(b2, ctx.mul(bt, ctx.mul(gn, ve)));
                if ctx.in_base(u2) {
                    let u = ctx.to_base(u2)?;
                    return Ok(Some(EquivWitness { tau, v, gamma, u }));
                }
            }
        }
    }
    Ok(None)
}

/// Number of equivalence classes of valid parameter pairs (classical
/// included), with one representative pair per class.
pub fn equivalence_classes(ctx: &FieldCtx) -> (usize, Vec<(Fq2Elem, Fq2Elem)>) {
    let qq = ctx.qq() as usize;
    let mut seen = vec![false; qq * qq];
    let mut reps = Vec::new();
    for a in ctx.fq2_elements() {
        for b in ctx.fq2_elements() {
            let slot = a.index() as usize * qq + b.index() as usize;
            if seen[slot] || UnitalParams::validate(ctx, a, b).is_err() {
                continue;
            }
            reps.push((a, b));
            // mark the whole orbit: every witness is a complete group element
            for tau in 0..ctx.ext_degree() {
                let at = ctx.apply_tau(a, tau);
                let bt = ctx.apply_tau(b, tau);
                for gamma in ctx.fq2_units() {
                    let g2 = ctx.mul(gamma, gamma);
                    let gn = ctx.embed(ctx.norm(gamma));
                    for v in ctx.fq_units() {
                        let ve = ctx.embed(v);
                        let ia = ctx.mul(at, ctx.mul(g2, ve));
                        let ib0 = ctx.mul(bt, ctx.mul(gn, ve));
                        for u in ctx.fq_elements() {
                            let ib = ctx.add(ib0, ctx.embed(u));
                            seen[ia.index() as usize * qq + ib.index() as usize] = true;
                        }
                    }
                }
            }
        }
    }
    (reps.len(), reps)
}

/// Smallest valid parameter pairs of each kind, used as canonical choices.
pub mod canonical {
    use super::*;

    /// Least non-square of GF(q²) in index order.
    pub fn least_nonsquare(ctx: &FieldCtx) -> Fq2Elem {
        ctx.fq2_units()
            .find(|&x| !ctx.is_square(x))
            .expect("GF(q^2)* has non-squares")
    }

    /// Conic unital parameters: a the least non-square, b = 0.
    pub fn conic_params(ctx: &FieldCtx) -> UnitalParams {
        let a = least_nonsquare(ctx);
        UnitalParams::validate(ctx, a, Fq2Elem::ZERO)
            .expect("a non-square with b = 0 always has a non-square discriminant")
    }

    /// Least b1 in GF(q)* making (a, b1·e) valid.
    pub fn least_valid_b1(ctx: &FieldCtx, a: Fq2Elem) -> Result<FqElem> {
        ctx.fq_units()
            .find(|&b1| UnitalParams::validate(ctx, a, ctx.fq2(FqElem::ZERO, b1)).is_ok())
            .ok_or_else(|| Error::InvalidParams("no valid b1 for this a".into()))
    }

    /// All b1 in GF(q)* making (a, b1·e) valid.
    pub fn valid_b1_list(ctx: &FieldCtx, a: Fq2Elem) -> Vec<FqElem> {
        ctx.fq_units()
            .filter(|&b1| UnitalParams::validate(ctx, a, ctx.fq2(FqElem::ZERO, b1)).is_ok())
            .collect()
    }

    /// Square-parameter unital with a = 1 and the least valid b1.
    pub fn square_params(ctx: &FieldCtx) -> Result<UnitalParams> {
        let b1 = least_valid_b1(ctx, Fq2Elem::ONE)?;
        UnitalParams::validate(ctx, Fq2Elem::ONE, ctx.fq2(FqElem::ZERO, b1))
    }

    /// Classical unital with the least valid b of the form b1·e.
    pub fn classical_params(ctx: &FieldCtx) -> Result<UnitalParams> {
        let b1 = least_valid_b1(ctx, Fq2Elem::ZERO)?;
        UnitalParams::validate(ctx, Fq2Elem::ZERO, ctx.fq2(FqElem::ZERO, b1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::{all_points, incident, join};

    fn ctx(q: u32) -> FieldCtx {
        match q {
            9 => FieldCtx::new(3, 2).unwrap(),
            25 => FieldCtx::new(5, 2).unwrap(),
            _ => FieldCtx::new(q, 1).unwrap(),
        }
    }

    #[test]
    fn validate_conic_q3() {
        let c = ctx(3);
        let g = c.g();
        let p = UnitalParams::validate(&c, g, Fq2Elem::ZERO).unwrap();
        assert_eq!(p.a_character(), ACharacter::NonSquare);
        assert!(p.is_conic(&c));
        assert!(!c.fq_is_square(p.discriminant()));
    }

    #[test]
    fn validate_classical_flagging() {
        let c = ctx(5);
        // a = 0, b = e: valid but classical
        let p = UnitalParams::validate(&c, Fq2Elem::ZERO, c.e()).unwrap();
        assert!(p.is_classical());
        // a = 0 with b in GF(q): d = 0, invalid
        assert!(matches!(
            UnitalParams::validate(&c, Fq2Elem::ZERO, c.fq2_int(2)),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn valid_b1_scan_q7() {
        // a = 1 at q = 7: d = 4(1 + w·b1²) must be a non-square mod 7
        let c = ctx(7);
        let valid = canonical::valid_b1_list(&c, Fq2Elem::ONE);
        let expected: Vec<FqElem> = c
            .fq_units()
            .filter(|&b1| {
                let d = c.fq_add(FqElem::ONE, c.fq_mul(c.w(), c.fq_mul(b1, b1)));
                !d.is_zero() && !c.fq_is_square(d)
            })
            .collect();
        assert_eq!(valid, expected);
        let indices: Vec<u32> = valid.iter().map(|b| b.index()).collect();
        assert_eq!(indices, vec![2, 5]);
    }

    #[test]
    fn membership_edge_cases() {
        let c = ctx(5);
        let params = canonical::conic_params(&c);
        for r in c.fq_elements() {
            let p = ProjPoint::new(&c, Fq2Elem::ZERO, c.embed(r), Fq2Elem::ONE).unwrap();
            assert!(params.contains(&c, &p));
        }
        assert!(params.contains(&c, &special_point(&c)));
        // all other points of z = 0 are outside
        for x in c.fq2_elements() {
            let p = ProjPoint::new(&c, x, Fq2Elem::ONE, Fq2Elem::ZERO).unwrap();
            if p != special_point(&c) {
                assert!(!params.contains(&c, &p));
            }
        }
        let p = ProjPoint::new(&c, Fq2Elem::ZERO, c.e(), Fq2Elem::ONE).unwrap();
        assert!(!params.contains(&c, &p));
    }

    #[test]
    fn enumerate_counts() {
        for q in [3u32, 7] {
            let c = ctx(q);
            let u = Unital::build(&c, canonical::conic_params(&c));
            assert_eq!(u.size() as u32, q * q * q + 1);
        }
    }

    #[test]
    fn enumerate_agrees_with_contains() {
        // brute-force oracle over every plane point, q ≤ 7
        for q in [3u32, 5, 7] {
            let c = ctx(q);
            for params in [canonical::conic_params(&c), canonical::classical_params(&c).unwrap()] {
                let u = Unital::build(&c, params);
                let mut n = 0u64;
                for p in all_points(&c) {
                    let inside = params.contains(&c, &p);
                    assert_eq!(inside, u.contains_point(&c, &p));
                    n += inside as u64;
                }
                assert_eq!(n, (q * q * q + 1) as u64);
            }
        }
    }

    #[test]
    fn line_profiles() {
        let c = ctx(5);
        let u = Unital::build(&c, canonical::conic_params(&c));
        assert_eq!(u.line_profile(&c, &ProjLine::from_ints(&c, 0, 0, 1)).unwrap(), 1);
        assert_eq!(u.line_profile(&c, &ProjLine::from_ints(&c, 1, 0, 0)).unwrap(), c.q() + 1);
        assert_eq!(u.line_profile(&c, &ProjLine::from_ints(&c, 0, 1, 0)).unwrap(), 1);
        let (tangents, secants) = u.line_census(&c).unwrap();
        assert_eq!(tangents, (c.q() * c.q() * c.q() + 1) as u64);
        assert_eq!(tangents + secants, plane::plane_size(&c));
    }

    #[test]
    fn two_design_property_small_q() {
        // every pair of unital points lies on exactly one secant, q ∈ {3,5}
        for q in [3u32, 5] {
            let c = ctx(q);
            let u = Unital::build(&c, canonical::conic_params(&c));
            let pts = u.points();
            for (i, p) in pts.iter().enumerate() {
                for r in &pts[i + 1..] {
                    let l = join(&c, p, r).unwrap();
                    assert_eq!(u.line_profile(&c, &l).unwrap(), q + 1);
                }
            }
        }
    }

    #[test]
    fn phi_translates_vertical_line() {
        let c = ctx(5);
        let params = canonical::conic_params(&c);
        let u = Unital::build(&c, params);
        let origin = ProjPoint::from_ints(&c, 0, 0, 1);
        for t in c.fq_elements() {
            let img = phi(&c, t).apply(&c, &origin);
            assert_eq!(img, ProjPoint::new(&c, Fq2Elem::ZERO, c.embed(t), Fq2Elem::ONE).unwrap());
            assert!(u.contains_point(&c, &img));
        }
        // φ_t fixes every line through T∞
        let t_inf = special_point(&c);
        let m = phi(&c, FqElem(3));
        for x in c.fq2_elements() {
            let p = ProjPoint::new(&c, x, c.fq2_int(2), Fq2Elem::ONE).unwrap();
            let l = join(&c, &p, &t_inf).unwrap();
            let img = m.apply(&c, &p);
            assert!(incident(&c, &l, &img));
        }
    }

    #[test]
    fn automorphisms_preserve_unital() {
        for q in [3u32, 5, 9] {
            let c = ctx(q);
            let params = canonical::conic_params(&c);
            let u = Unital::build(&c, params);
            for i in 0..40u32 {
                let gamma = Fq2Elem(1 + (i * 13 + 3) % (c.qq() - 1));
                let t = c.fq_from_index(i % c.q()).unwrap();
                let delta = c.embed(c.fq_from_index(1 + i % (c.q() - 1)).unwrap());
                let m = psi(&c, &params, gamma)
                    .compose(&c, &phi(&c, t))
                    .compose(&c, &mu(&c, &params, delta).unwrap());
                for p in u.points().iter().step_by(5) {
                    assert!(u.contains_point(&c, &m.apply(&c, p)));
                }
                assert_eq!(m.apply(&c, &special_point(&c)), special_point(&c));
            }
        }
    }

    #[test]
    fn mu_domain_conditions() {
        let c = ctx(5);
        let conic = canonical::conic_params(&c); // b = 0 ∈ GF(q)
        // b ∈ GF(q): δ = e works since e² = w ∈ GF(q)
        assert!(mu(&c, &conic, c.e()).is_ok());
        let square = canonical::square_params(&c).unwrap(); // b = b1·e ∉ GF(q)
        assert!(mu(&c, &square, c.e()).is_err());
        assert!(mu(&c, &square, c.fq2_int(2)).is_ok());
        assert!(mu(&c, &conic, Fq2Elem::ZERO).is_err());
        // δ ∉ GF(q) with δ² ∉ GF(q) fails in both cases
        let bad = c.add(Fq2Elem::ONE, c.e());
        assert!(!c.in_base(c.mul(bad, bad)));
        assert!(mu(&c, &conic, bad).is_err());
    }

    #[test]
    fn subgroup_s_acts_regularly() {
        // orbit of (0,0,1) under S = {ψ_γ φ_t} has exactly q³ distinct points
        for q in [3u32, 5] {
            let c = ctx(q);
            let params = canonical::conic_params(&c);
            let u = Unital::build(&c, params);
            let origin = ProjPoint::from_ints(&c, 0, 0, 1);
            let mut orbit = std::collections::HashSet::new();
            for gamma in c.fq2_elements() {
                let pg = psi(&c, &params, gamma);
                for t in c.fq_elements() {
                    let m = pg.compose(&c, &phi(&c, t));
                    let img = m.apply(&c, &origin);
                    assert!(u.contains_point(&c, &img));
                    orbit.insert(img);
                }
            }
            assert_eq!(orbit.len() as u32, q * q * q);
        }
    }

    #[test]
    fn equivalence_reflexive_with_identity_witness() {
        let c = ctx(5);
        let p = canonical::square_params(&c).unwrap();
        let w = equivalent_params(&c, p.a, p.b, p.a, p.b).unwrap().unwrap();
        let (a2, b2) = apply_witness(&c, &w, p.a, p.b);
        assert_eq!((a2, b2), (p.a, p.b));
    }

    #[test]
    fn equivalence_class_counts_prime_q() {
        // (q+1)/2 classes for prime q, classical included
        for (q, expected) in [(3u32, 2usize), (5, 3), (7, 4)] {
            let c = ctx(q);
            let (n, _) = equivalence_classes(&c);
            assert_eq!(n, expected);
        }
    }

    #[test]
    fn equivalence_classes_q5_contents() {
        let c = ctx(5);
        let (n, reps) = equivalence_classes(&c);
        assert_eq!(n, 3);
        let mut kinds: Vec<&str> = reps
            .iter()
            .map(|&(a, b)| {
                let p = UnitalParams::validate(&c, a, b).unwrap();
                match p.a_character() {
                    ACharacter::Zero => "classical",
                    ACharacter::NonSquare => "conic-class",
                    ACharacter::Square => {
                        assert!(!b.is_zero());
                        "square-b-nonzero"
                    }
                }
            })
            .collect();
        kinds.sort();
        assert_eq!(kinds, vec!["classical", "conic-class", "square-b-nonzero"]);
        // the conic-class representative is equivalent to an actual conic pair
        let conic = canonical::conic_params(&c);
        let hit = reps
            .iter()
            .any(|&(a, b)| equivalent_params(&c, a, b, conic.a, conic.b).unwrap().is_some());
        assert!(hit);
    }

    #[test]
    fn classical_sanity_hermitian_count() {
        let c = ctx(5);
        let params = canonical::classical_params(&c).unwrap();
        let u = Unital::build(&c, params);
        assert_eq!(u.size() as u32, c.q().pow(3) + 1);
        let (tangents, _) = u.line_census(&c).unwrap();
        assert_eq!(tangents, (c.q().pow(3) + 1) as u64);
    }
}
