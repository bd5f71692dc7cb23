//! The projective plane PG(2,q²): points, lines, incidence, join and meet.
//!
//! Points and lines are homogeneous triples over GF(q²), normalized so the
//! last nonzero coordinate is 1. Normalization happens at construction, so
//! equality, hashing and ordering on the raw coordinates are projective.

use crate::gfield::{FieldCtx, Fq2Elem};
use crate::{Error, Result};

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ProjPoint {
    pub x: Fq2Elem,
    pub y: Fq2Elem,
    pub z: Fq2Elem,
}

/// Line [l0, l1, l2]; a point (x,y,z) is incident iff l0·x + l1·y + l2·z = 0.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ProjLine {
    pub c: [Fq2Elem; 3],
}

fn normalize(ctx: &FieldCtx, v: [Fq2Elem; 3]) -> Result<[Fq2Elem; 3]> {
    let pivot = if !v[2].is_zero() {
        v[2]
    } else if !v[1].is_zero() {
        v[1]
    } else if !v[0].is_zero() {
        v[0]
    } else {
        return Err(Error::Degenerate("zero homogeneous triple".into()));
    };
    let s = ctx.inv(pivot);
    Ok([ctx.mul(v[0], s), ctx.mul(v[1], s), ctx.mul(v[2], s)])
}

fn cross(ctx: &FieldCtx, a: [Fq2Elem; 3], b: [Fq2Elem; 3]) -> [Fq2Elem; 3] {
    [
        ctx.sub(ctx.mul(a[1], b[2]), ctx.mul(a[2], b[1])),
        ctx.sub(ctx.mul(a[2], b[0]), ctx.mul(a[0], b[2])),
        ctx.sub(ctx.mul(a[0], b[1]), ctx.mul(a[1], b[0])),
    ]
}

impl ProjPoint {
    pub fn new(ctx: &FieldCtx, x: Fq2Elem, y: Fq2Elem, z: Fq2Elem) -> Result<ProjPoint> {
        let [x, y, z] = normalize(ctx, [x, y, z])?;
        Ok(ProjPoint { x, y, z })
    }

    /// Point with small-integer coordinates, for constants like (0,1,0).
    pub fn from_ints(ctx: &FieldCtx, x: u64, y: u64, z: u64) -> ProjPoint {
        ProjPoint::new(ctx, ctx.fq2_int(x), ctx.fq2_int(y), ctx.fq2_int(z)).unwrap()
    }

    pub fn coords(&self) -> [Fq2Elem; 3] {
        [self.x, self.y, self.z]
    }

    /// Canonical index in 0..q⁴+q²+1: affine points (x,y,1) first, then the
    /// points (x,1,0) at infinity, then (1,0,0).
    pub fn index(&self, ctx: &FieldCtx) -> u64 {
        let qq = ctx.qq() as u64;
        if self.z == Fq2Elem::ONE {
            self.x.index() as u64 * qq + self.y.index() as u64
        } else if self.y == Fq2Elem::ONE {
            qq * qq + self.x.index() as u64
        } else {
            qq * qq + qq
        }
    }
}

impl ProjLine {
    pub fn new(ctx: &FieldCtx, c0: Fq2Elem, c1: Fq2Elem, c2: Fq2Elem) -> Result<ProjLine> {
        Ok(ProjLine { c: normalize(ctx, [c0, c1, c2])? })
    }

    pub fn from_ints(ctx: &FieldCtx, c0: u64, c1: u64, c2: u64) -> ProjLine {
        ProjLine::new(ctx, ctx.fq2_int(c0), ctx.fq2_int(c1), ctx.fq2_int(c2)).unwrap()
    }

    /// Canonical index, dual to [`ProjPoint::index`].
    pub fn index(&self, ctx: &FieldCtx) -> u64 {
        let qq = ctx.qq() as u64;
        if self.c[2] == Fq2Elem::ONE {
            self.c[0].index() as u64 * qq + self.c[1].index() as u64
        } else if self.c[1] == Fq2Elem::ONE {
            qq * qq + self.c[0].index() as u64
        } else {
            qq * qq + qq
        }
    }

    /// All q²+1 points of the line.
    pub fn points(&self, ctx: &FieldCtx) -> Vec<ProjPoint> {
        let (a, b) = self.two_points(ctx);
        let mut out = Vec::with_capacity(ctx.qq() as usize + 1);
        out.push(b);
        let (ac, bc) = (a.coords(), b.coords());
        for lam in ctx.fq2_elements() {
            let v = [
                ctx.add(ac[0], ctx.mul(lam, bc[0])),
                ctx.add(ac[1], ctx.mul(lam, bc[1])),
                ctx.add(ac[2], ctx.mul(lam, bc[2])),
            ];
            out.push(ProjPoint::new(ctx, v[0], v[1], v[2]).expect("span point nonzero"));
        }
        debug_assert_eq!(out.len(), ctx.qq() as usize + 1);
        out
    }

    /// Two distinct points of the line.
    fn two_points(&self, ctx: &FieldCtx) -> (ProjPoint, ProjPoint) {
        let [a, b, c] = self.c;
        let cands = [
            [Fq2Elem::ZERO, c, ctx.neg(b)],
            [c, Fq2Elem::ZERO, ctx.neg(a)],
            [b, ctx.neg(a), Fq2Elem::ZERO],
        ];
        let mut found: Vec<ProjPoint> = Vec::new();
        for v in cands {
            if let Ok(p) = ProjPoint::new(ctx, v[0], v[1], v[2]) {
                if !found.contains(&p) {
                    found.push(p);
                }
            }
        }
        assert!(found.len() >= 2, "a projective line has at least two candidate points");
        (found[0], found[1])
    }
}

/// Line through two distinct points.
pub fn join(ctx: &FieldCtx, p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine> {
    if p == q {
        return Err(Error::Degenerate("join of equal points".into()));
    }
    let v = cross(ctx, p.coords(), q.coords());
    ProjLine::new(ctx, v[0], v[1], v[2])
}

/// Common point of two distinct lines.
pub fn meet(ctx: &FieldCtx, l: &ProjLine, m: &ProjLine) -> Result<ProjPoint> {
    if l == m {
        return Err(Error::Degenerate("meet of equal lines".into()));
    }
    let v = cross(ctx, l.c, m.c);
    ProjPoint::new(ctx, v[0], v[1], v[2])
}

pub fn incident(ctx: &FieldCtx, l: &ProjLine, p: &ProjPoint) -> bool {
    let s = ctx.add(
        ctx.add(ctx.mul(l.c[0], p.x), ctx.mul(l.c[1], p.y)),
        ctx.mul(l.c[2], p.z),
    );
    s.is_zero()
}

/// Number of points (and of lines) of PG(2,q²).
pub fn plane_size(ctx: &FieldCtx) -> u64 {
    let qq = ctx.qq() as u64;
    qq * qq + qq + 1
}

pub fn all_points(ctx: &FieldCtx) -> impl Iterator<Item = ProjPoint> + '_ {
    let affine = ctx
        .fq2_elements()
        .flat_map(move |x| ctx.fq2_elements().map(move |y| ProjPoint { x, y, z: Fq2Elem::ONE }));
    let infinite = ctx.fq2_elements().map(move |x| ProjPoint { x, y: Fq2Elem::ONE, z: Fq2Elem::ZERO });
    let far = std::iter::once(ProjPoint { x: Fq2Elem::ONE, y: Fq2Elem::ZERO, z: Fq2Elem::ZERO });
    affine.chain(infinite).chain(far)
}

pub fn all_lines(ctx: &FieldCtx) -> impl Iterator<Item = ProjLine> + '_ {
    let a = ctx.fq2_elements().flat_map(move |c0| {
        ctx.fq2_elements().map(move |c1| ProjLine { c: [c0, c1, Fq2Elem::ONE] })
    });
    let b = ctx
        .fq2_elements()
        .map(move |c0| ProjLine { c: [c0, Fq2Elem::ONE, Fq2Elem::ZERO] });
    let c = std::iter::once(ProjLine { c: [Fq2Elem::ONE, Fq2Elem::ZERO, Fq2Elem::ZERO] });
    a.chain(b).chain(c)
}

/// Bitset over canonical point indices.
#[derive(Clone)]
pub struct PointSet {
    bits: Vec<u64>,
    len: u64,
}

impl PointSet {
    pub fn new(ctx: &FieldCtx) -> PointSet {
        let len = plane_size(ctx);
        PointSet { bits: vec![0u64; (len as usize).div_ceil(64)], len }
    }

    pub fn insert(&mut self, idx: u64) {
        debug_assert!(idx < self.len);
        self.bits[(idx / 64) as usize] |= 1u64 << (idx % 64);
    }

    pub fn contains(&self, idx: u64) -> bool {
        debug_assert!(idx < self.len);
        self.bits[(idx / 64) as usize] & (1u64 << (idx % 64)) != 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn ctx() -> FieldCtx {
        FieldCtx::new(3, 1).unwrap()
    }

    #[test]
    fn join_meet_basics() {
        let c = ctx();
        let o = ProjPoint::from_ints(&c, 0, 0, 1);
        let t_inf = ProjPoint::from_ints(&c, 0, 1, 0);
        let x_axis = ProjPoint::from_ints(&c, 1, 0, 0);
        assert_eq!(join(&c, &o, &t_inf).unwrap(), ProjLine::from_ints(&c, 1, 0, 0));
        assert_eq!(join(&c, &o, &x_axis).unwrap(), ProjLine::from_ints(&c, 0, 1, 0));
        let l = ProjLine::from_ints(&c, 1, 0, 0);
        let m = ProjLine::from_ints(&c, 0, 0, 1);
        assert_eq!(meet(&c, &l, &m).unwrap(), t_inf);
        assert!(matches!(meet(&c, &l, &l), Err(Error::Degenerate(_))));
        assert!(matches!(join(&c, &o, &o), Err(Error::Degenerate(_))));
    }

    #[test]
    fn incidence_basics() {
        let c = ctx();
        let l = ProjLine::from_ints(&c, 1, 0, 0);
        assert!(incident(&c, &l, &ProjPoint::from_ints(&c, 0, 1, 0)));
        for y in c.fq2_elements() {
            let p = ProjPoint::new(&c, Fq2Elem::ZERO, y, Fq2Elem::ONE).unwrap();
            assert!(incident(&c, &l, &p));
        }
        assert!(!incident(&c, &l, &ProjPoint::from_ints(&c, 1, 0, 1)));
    }

    #[test]
    fn plane_counts_q3() {
        let c = ctx();
        assert_eq!(plane_size(&c), 91);
        let pts: Vec<ProjPoint> = all_points(&c).collect();
        assert_eq!(pts.len(), 91);
        let idxs: HashSet<u64> = pts.iter().map(|p| p.index(&c)).collect();
        assert_eq!(idxs.len(), 91);
        let lines: Vec<ProjLine> = all_lines(&c).collect();
        assert_eq!(lines.len(), 91);
        for l in &lines {
            let on = l.points(&c);
            assert_eq!(on.len(), 10);
            let distinct: HashSet<_> = on.iter().collect();
            assert_eq!(distinct.len(), 10);
            for p in &on {
                assert!(incident(&c, l, p));
            }
        }
        // two distinct points on exactly one line, exhaustively
        for (i, p) in pts.iter().enumerate() {
            for q in &pts[i + 1..] {
                let through = lines
                    .iter()
                    .filter(|l| incident(&c, l, p) && incident(&c, l, q))
                    .count();
                assert_eq!(through, 1);
            }
        }
    }

    #[test]
    fn join_incident_random_pairs() {
        let c = FieldCtx::new(5, 1).unwrap();
        let pts: Vec<ProjPoint> = all_points(&c).collect();
        for i in (0..pts.len()).step_by(7) {
            for j in (0..pts.len()).step_by(11) {
                if pts[i] == pts[j] {
                    continue;
                }
                let l = join(&c, &pts[i], &pts[j]).unwrap();
                assert!(incident(&c, &l, &pts[i]));
                assert!(incident(&c, &l, &pts[j]));
            }
        }
    }

    #[test]
    fn meet_of_joins_recovers_point() {
        let c = FieldCtx::new(5, 1).unwrap();
        let p = ProjPoint::from_ints(&c, 1, 2, 1);
        let q = ProjPoint::from_ints(&c, 3, 1, 1);
        let r = ProjPoint::from_ints(&c, 0, 4, 1);
        let l = join(&c, &p, &q).unwrap();
        let m = join(&c, &p, &r).unwrap();
        assert_eq!(meet(&c, &l, &m).unwrap(), p);
    }

    #[test]
    fn normalization_is_canonical() {
        let c = ctx();
        for p in all_points(&c) {
            let scaled = ProjPoint::new(
                &c,
                c.mul(p.x, c.e()),
                c.mul(p.y, c.e()),
                c.mul(p.z, c.e()),
            )
            .unwrap();
            assert_eq!(scaled, p);
        }
    }
}
