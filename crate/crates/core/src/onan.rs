//! O'Nan and Triple O'Nan configurations in a Buekenhout-Metz unital.
//!
//! An O'Nan configuration is four lines forming a quadrilateral whose six
//! pairwise intersections are unital points. A Triple O'Nan is six lines
//! pairwise meeting in exactly seven unital points: a quadrangle P,Q,X,Y
//! plus its diagonal points V = PQ∩XY, M = PX∩QY, N = PY∩QX. It is
//! BM-special when one of the six lines passes through the special point
//! T∞, BM-ordinary when none does.
//!
//! A BM-special configuration is normalized (canonical frame) so that the
//! special line is [1,0,0] with V = (0,0,1), X = (0,s,1), Y = (0,t,1), and
//! P = (xj, j, 1), Q = (xk, k, 1) on the line through V with infinite point
//! (x,1,0), where j = hk. Membership of P, Q, M, N then reduces to four
//! equations in (a, b, x, k, h, s, t), checked here both in their compact
//! form and against the geometric membership oracle.
//!
//! Note on the second equation: with Δ = ax²k² and Θ = (xk)^(q+1), the
//! membership condition for P = (xhk, hk, 1) is
//!
//!   ⟦Δh²⟧ + (b−b^q)Θh^(q+1) = ⟦kh⟧,
//!
//! quadratic in h (substitute xj = xkh into the membership equation). The
//! degree is easy to mistype; the geometric oracle in the tests pins it.

use crate::gfield::{FieldCtx, Fq2Elem, FqElem};
use crate::plane::{incident, join, meet, ProjLine, ProjPoint};
use crate::unital::{special_point, ACharacter, Unital};
use crate::{Error, Result};

/// Canonical-frame parameters (a, b, x, k, h, s, t) of a putative BM-special
/// Triple O'Nan, with j = h·k.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TripleOnanParams {
    pub a: Fq2Elem,
    pub b: Fq2Elem,
    pub x: Fq2Elem,
    pub k: Fq2Elem,
    pub h: Fq2Elem,
    pub s: FqElem,
    pub t: FqElem,
}

impl TripleOnanParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        ctx: &FieldCtx,
        a: Fq2Elem,
        b: Fq2Elem,
        x: Fq2Elem,
        k: Fq2Elem,
        h: Fq2Elem,
        s: FqElem,
        t: FqElem,
    ) -> Result<TripleOnanParams> {
        if x.is_zero() || k.is_zero() || h.is_zero() {
            return Err(Error::InvalidParams("x, k, h must be nonzero".into()));
        }
        if s.is_zero() || t.is_zero() || s == t {
            return Err(Error::InvalidParams("s, t must be distinct elements of GF(q)*".into()));
        }
        if ctx.in_base(h) {
            return Err(Error::InvalidParams(
                "h = j/k lies in GF(q); no valid configuration has this".into(),
            ));
        }
        Ok(TripleOnanParams { a, b, x, k, h, s, t })
    }

    /// j = h·k, the parameter of P = (xj, j, 1).
    pub fn j(&self, ctx: &FieldCtx) -> Fq2Elem {
        ctx.mul(self.h, self.k)
    }
}

/// The coefficient quadruple (W, U, V̂, Ẑ) with
/// W = h(s−t)/(s−th), U = st(1−h)/(s−th) and V̂, Ẑ their s↔t swaps, so that
/// M = (kxW, kW+U, 1) and N = (kxV̂, kV̂+Ẑ, 1).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct DiagonalCoeffs {
    pub w: Fq2Elem,
    pub u: Fq2Elem,
    pub vh: Fq2Elem,
    pub zh: Fq2Elem,
}

pub fn diagonal_coeffs(ctx: &FieldCtx, h: Fq2Elem, s: FqElem, t: FqElem) -> Result<DiagonalCoeffs> {
    let se = ctx.embed(s);
    let te = ctx.embed(t);
    let d1 = ctx.sub(se, ctx.mul(te, h)); // s − th
    let d2 = ctx.sub(te, ctx.mul(se, h)); // t − sh
    if d1.is_zero() || d2.is_zero() {
        return Err(Error::Degenerate("s − th or t − sh vanishes".into()));
    }
    let st = ctx.mul(se, te);
    let smt = ctx.sub(se, te);
    let one_mh = ctx.sub(Fq2Elem::ONE, h);
    let i1 = ctx.inv(d1);
    let i2 = ctx.inv(d2);
    Ok(DiagonalCoeffs {
        w: ctx.mul(ctx.mul(h, smt), i1),
        u: ctx.mul(ctx.mul(st, one_mh), i1),
        vh: ctx.mul(ctx.mul(h, ctx.neg(smt)), i2),
        zh: ctx.mul(ctx.mul(st, one_mh), i2),
    })
}

/// Outcome of the four membership equations, in order P, Q, M, N
/// (equivalently: the k-equation, the kh-equation, and the two diagonal
/// equations).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct EquationCheck {
    pub eq: [bool; 4],
}

impl EquationCheck {
    pub fn holds(&self) -> bool {
        self.eq.iter().all(|&b| b)
    }
}

/// Compact (box-operator) form of the four equations. Returns `None` when
/// the diagonal denominators vanish, which cannot happen for h outside
/// GF(q).
#[allow(clippy::too_many_arguments)]
pub fn check_equations_raw(
    ctx: &FieldCtx,
    a: Fq2Elem,
    b: Fq2Elem,
    x: Fq2Elem,
    k: Fq2Elem,
    h: Fq2Elem,
    s: FqElem,
    t: FqElem,
) -> Option<EquationCheck> {
    let coeffs = diagonal_coeffs(ctx, h, s, t).ok()?;
    let xk = ctx.mul(x, k);
    let delta = ctx.mul(a, ctx.mul(xk, xk));
    let theta = ctx.embed(ctx.norm(xk));
    let bb = ctx.box_diff(b);
    let bt = ctx.mul(bb, theta);

    let eq_q = ctx.add(ctx.box_diff(delta), bt) == ctx.box_diff(k);

    let h2 = ctx.mul(h, h);
    let eq_p = ctx.add(
        ctx.box_diff(ctx.mul(delta, h2)),
        ctx.mul(bt, ctx.embed(ctx.norm(h))),
    ) == ctx.box_diff(ctx.mul(k, h));

    let diag = |cw: Fq2Elem, cu: Fq2Elem| -> bool {
        let lhs = ctx.add(
            ctx.box_diff(ctx.mul(delta, ctx.mul(cw, cw))),
            ctx.mul(bt, ctx.embed(ctx.norm(cw))),
        );
        let rhs = ctx.add(ctx.box_diff(ctx.mul(k, cw)), ctx.box_diff(cu));
        lhs == rhs
    };
    let eq_m = diag(coeffs.w, coeffs.u);
    let eq_n = diag(coeffs.vh, coeffs.zh);

    Some(EquationCheck { eq: [eq_p, eq_q, eq_m, eq_n] })
}

pub fn check_equations(ctx: &FieldCtx, params: &TripleOnanParams) -> EquationCheck {
    check_equations_raw(ctx, params.a, params.b, params.x, params.k, params.h, params.s, params.t)
        .expect("diagonal denominators are nonzero for h outside GF(q)")
}

/// Expanded form of the same four equations, written with literal powers
/// (x^q via `pow`, no box/norm shortcuts). A second algebraic route used to
/// cross-check [`check_equations`].
pub fn check_equations_expanded(ctx: &FieldCtx, params: &TripleOnanParams) -> EquationCheck {
    let q = ctx.q() as u64;
    let (a, b, k, h) = (params.a, params.b, params.k, params.h);
    let xk = ctx.mul(params.x, k);
    let aq = ctx.pow(a, q);
    let xk2 = ctx.mul(xk, xk);
    let xk2q = ctx.pow(xk, 2 * q);
    let xkq1 = ctx.pow(xk, q + 1);
    let bdiff = ctx.sub(b, ctx.pow(b, q));
    let coeffs = diagonal_coeffs(ctx, h, params.s, params.t).expect("h outside GF(q)");

    // membership of a frame point with multiplier c: y-part kc + u
    let member = |c: Fq2Elem, u: Fq2Elem| -> bool {
        let lhs = ctx.add(
            ctx.sub(
                ctx.mul(a, ctx.mul(xk2, ctx.mul(c, c))),
                ctx.mul(aq, ctx.mul(xk2q, ctx.pow(c, 2 * q))),
            ),
            ctx.mul(bdiff, ctx.mul(xkq1, ctx.pow(c, q + 1))),
        );
        let y = ctx.add(ctx.mul(k, c), u);
        lhs == ctx.sub(y, ctx.pow(y, q))
    };

    EquationCheck {
        eq: [
            member(h, Fq2Elem::ZERO),
            member(Fq2Elem::ONE, Fq2Elem::ZERO),
            member(coeffs.w, coeffs.u),
            member(coeffs.vh, coeffs.zh),
        ],
    }
}

/// The seven labeled points of a (candidate) Triple O'Nan.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct LabeledPoints {
    pub p: ProjPoint,
    pub q: ProjPoint,
    pub x: ProjPoint,
    pub y: ProjPoint,
    pub v: ProjPoint,
    pub m: ProjPoint,
    pub n: ProjPoint,
}

impl LabeledPoints {
    pub fn all(&self) -> [ProjPoint; 7] {
        [self.p, self.q, self.x, self.y, self.v, self.m, self.n]
    }
}

/// Candidate geometry realized from canonical-frame parameters. Membership
/// of P, Q, M, N is not checked here; V, X, Y lie in the unital whenever the
/// parameters do (x-coordinate zero, GF(q) second coordinate).
#[derive(Copy, Clone, Debug)]
pub struct RealizedConfig {
    pub points: LabeledPoints,
    /// In order PX, QY, PY, QX, PQ, XY; the special line XY is [1,0,0].
    pub lines: [ProjLine; 6],
}

pub fn realize(ctx: &FieldCtx, params: &TripleOnanParams) -> Result<RealizedConfig> {
    let j = params.j(ctx);
    let k = params.k;
    let x = params.x;
    let one = Fq2Elem::ONE;
    let p = ProjPoint::new(ctx, ctx.mul(x, j), j, one)?;
    let q = ProjPoint::new(ctx, ctx.mul(x, k), k, one)?;
    let xp = ProjPoint::new(ctx, Fq2Elem::ZERO, ctx.embed(params.s), one)?;
    let yp = ProjPoint::new(ctx, Fq2Elem::ZERO, ctx.embed(params.t), one)?;
    let v = ProjPoint::from_ints(ctx, 0, 0, 1);
    let coeffs = diagonal_coeffs(ctx, params.h, params.s, params.t)?;
    let kx = ctx.mul(k, x);
    let m = ProjPoint::new(
        ctx,
        ctx.mul(kx, coeffs.w),
        ctx.add(ctx.mul(k, coeffs.w), coeffs.u),
        one,
    )?;
    let n = ProjPoint::new(
        ctx,
        ctx.mul(kx, coeffs.vh),
        ctx.add(ctx.mul(k, coeffs.vh), coeffs.zh),
        one,
    )?;
    let points = LabeledPoints { p, q, x: xp, y: yp, v, m, n };
    let all = points.all();
    for i in 0..7 {
        for jj in i + 1..7 {
            if all[i] == all[jj] {
                return Err(Error::Degenerate("coincident configuration points".into()));
            }
        }
    }
    let lines = [
        join(ctx, &p, &xp)?,
        join(ctx, &q, &yp)?,
        join(ctx, &p, &yp)?,
        join(ctx, &q, &xp)?,
        join(ctx, &p, &q)?,
        join(ctx, &xp, &yp)?,
    ];
    // M and N are the diagonal meets by construction of the coefficients
    if !(incident(ctx, &lines[0], &m) && incident(ctx, &lines[1], &m)) {
        return Err(Error::InvariantViolation("M is not PX ∩ QY".into()));
    }
    if !(incident(ctx, &lines[2], &n) && incident(ctx, &lines[3], &n)) {
        return Err(Error::InvariantViolation("N is not PY ∩ QX".into()));
    }
    Ok(RealizedConfig { points, lines })
}

/// Result of the full Triple O'Nan verification.
#[derive(Clone, Debug)]
pub struct Verification {
    pub valid: bool,
    /// Exactly one of the six lines passes through T∞.
    pub bm_special: bool,
    pub failures: Vec<String>,
}

/// Full re-verification of the seven labeled points against the unital:
/// distinctness, membership, quadrangle shape, the diagonal-point
/// identities, and the pairwise-intersection closure of the six lines.
pub fn verify_triple_onan(ctx: &FieldCtx, unital: &Unital, pts: &LabeledPoints) -> Verification {
    let mut failures = Vec::new();
    let all = pts.all();
    let names = ["P", "Q", "X", "Y", "V", "M", "N"];

    for i in 0..7 {
        for j in i + 1..7 {
            if all[i] == all[j] {
                failures.push(format!("points {} and {} coincide", names[i], names[j]));
            }
        }
    }
    for (i, p) in all.iter().enumerate() {
        if !unital.contains_point(ctx, p) {
            failures.push(format!("point {} is outside the unital", names[i]));
        }
    }
    let t_inf = special_point(ctx);
    if all.contains(&t_inf) {
        failures.push("the special point T∞ is among the seven points".into());
    }
    if !failures.is_empty() {
        return Verification { valid: false, bm_special: false, failures };
    }

    // quadrangle: no three of P, Q, X, Y collinear
    let quad = [pts.p, pts.q, pts.x, pts.y];
    for i in 0..4 {
        for j in i + 1..4 {
            for k in j + 1..4 {
                if let Ok(l) = join(ctx, &quad[i], &quad[j]) {
                    if incident(ctx, &l, &quad[k]) {
                        failures.push("three quadrangle points are collinear".into());
                    }
                }
            }
        }
    }
    if !failures.is_empty() {
        return Verification { valid: false, bm_special: false, failures };
    }

    let lines = [
        join(ctx, &pts.p, &pts.x).unwrap(),
        join(ctx, &pts.q, &pts.y).unwrap(),
        join(ctx, &pts.p, &pts.y).unwrap(),
        join(ctx, &pts.q, &pts.x).unwrap(),
        join(ctx, &pts.p, &pts.q).unwrap(),
        join(ctx, &pts.x, &pts.y).unwrap(),
    ];
    for i in 0..6 {
        for j in i + 1..6 {
            if lines[i] == lines[j] {
                failures.push("two of the six lines coincide".into());
            }
        }
    }
    if !failures.is_empty() {
        return Verification { valid: false, bm_special: false, failures };
    }

    let checks = [
        (meet(ctx, &lines[4], &lines[5]).unwrap(), pts.v, "V = PQ ∩ XY"),
        (meet(ctx, &lines[0], &lines[1]).unwrap(), pts.m, "M = PX ∩ QY"),
        (meet(ctx, &lines[2], &lines[3]).unwrap(), pts.n, "N = PY ∩ QX"),
    ];
    for (got, want, what) in checks {
        if got != want {
            failures.push(format!("{what} fails"));
        }
    }

    // six lines pairwise intersect in exactly the seven points
    for i in 0..6 {
        for j in i + 1..6 {
            let pt = meet(ctx, &lines[i], &lines[j]).unwrap();
            if !all.contains(&pt) {
                failures.push("a pairwise line intersection escapes the seven points".into());
            }
        }
    }

    let through_special = lines.iter().filter(|l| incident(ctx, l, &t_inf)).count();
    if through_special > 1 {
        failures.push("more than one line passes through T∞".into());
    }

    Verification {
        valid: failures.is_empty(),
        bm_special: failures.is_empty() && through_special == 1,
        failures,
    }
}

/// Sorted line-index identity of a configuration; invariant under the
/// relabeling symmetries of the parametrization.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ConfigId(pub [u64; 6]);

/// A verified Triple O'Nan. The constructor re-runs the full verification,
/// so an invalid object cannot exist.
#[derive(Clone, Debug)]
pub struct TripleOnanConfig {
    points: LabeledPoints,
    lines: [ProjLine; 6],
    bm_special: bool,
}

impl TripleOnanConfig {
    pub fn from_points(ctx: &FieldCtx, unital: &Unital, points: LabeledPoints) -> Result<Self> {
        let v = verify_triple_onan(ctx, unital, &points);
        if !v.valid {
            return Err(Error::InvariantViolation(format!(
                "not a Triple O'Nan: {}",
                v.failures.join("; ")
            )));
        }
        let lines = [
            join(ctx, &points.p, &points.x)?,
            join(ctx, &points.q, &points.y)?,
            join(ctx, &points.p, &points.y)?,
            join(ctx, &points.q, &points.x)?,
            join(ctx, &points.p, &points.q)?,
            join(ctx, &points.x, &points.y)?,
        ];
        Ok(TripleOnanConfig { points, lines, bm_special: v.bm_special })
    }

    pub fn points(&self) -> &LabeledPoints {
        &self.points
    }

    /// Lines in order PX, QY, PY, QX, PQ, XY.
    pub fn lines(&self) -> &[ProjLine; 6] {
        &self.lines
    }

    pub fn bm_special(&self) -> bool {
        self.bm_special
    }

    pub fn id(&self, ctx: &FieldCtx) -> ConfigId {
        let mut ids = [0u64; 6];
        for (slot, l) in ids.iter_mut().zip(self.lines.iter()) {
            *slot = l.index(ctx);
        }
        ids.sort_unstable();
        ConfigId(ids)
    }

    /// The three O'Nan sub-configurations:
    /// {PX,QY,PY,QX}, {PX,QY,PQ,XY}, {PY,QX,PQ,XY}.
    pub fn sub_onans(&self, ctx: &FieldCtx, unital: &Unital) -> Result<[OnanConfig; 3]> {
        let l = &self.lines;
        Ok([
            OnanConfig::from_lines(ctx, unital, [l[0], l[1], l[2], l[3]])?,
            OnanConfig::from_lines(ctx, unital, [l[0], l[1], l[4], l[5]])?,
            OnanConfig::from_lines(ctx, unital, [l[2], l[3], l[4], l[5]])?,
        ])
    }

    /// Image under a collineation that preserves the unital.
    pub fn apply_map(&self, ctx: &FieldCtx, unital: &Unital, map: &crate::unital::ProjMap) -> Result<Self> {
        let p = &self.points;
        let points = LabeledPoints {
            p: map.apply(ctx, &p.p),
            q: map.apply(ctx, &p.q),
            x: map.apply(ctx, &p.x),
            y: map.apply(ctx, &p.y),
            v: map.apply(ctx, &p.v),
            m: map.apply(ctx, &p.m),
            n: map.apply(ctx, &p.n),
        };
        TripleOnanConfig::from_points(ctx, unital, points)
    }
}

/// A verified O'Nan configuration: four lines, six unital intersection
/// points (indexed by line pair, in order 01, 02, 03, 12, 13, 23).
#[derive(Clone, Debug)]
pub struct OnanConfig {
    lines: [ProjLine; 4],
    points: [ProjPoint; 6],
}

impl OnanConfig {
    pub fn from_lines(ctx: &FieldCtx, unital: &Unital, lines: [ProjLine; 4]) -> Result<Self> {
        for i in 0..4 {
            for j in i + 1..4 {
                if lines[i] == lines[j] {
                    return Err(Error::Degenerate("repeated line in quadrilateral".into()));
                }
            }
        }
        let mut points = [ProjPoint::from_ints(ctx, 1, 0, 0); 6];
        let mut slot = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                points[slot] = meet(ctx, &lines[i], &lines[j])?;
                slot += 1;
            }
        }
        for i in 0..6 {
            for j in i + 1..6 {
                if points[i] == points[j] {
                    return Err(Error::Degenerate(
                        "three concurrent lines: intersection points coincide".into(),
                    ));
                }
            }
        }
        for p in &points {
            if !unital.contains_point(ctx, p) {
                return Err(Error::InvariantViolation(
                    "quadrilateral intersection outside the unital".into(),
                ));
            }
        }
        Ok(OnanConfig { lines, points })
    }

    pub fn lines(&self) -> &[ProjLine; 4] {
        &self.lines
    }

    pub fn points(&self) -> &[ProjPoint; 6] {
        &self.points
    }

    pub fn id(&self, ctx: &FieldCtx) -> [u64; 4] {
        let mut ids = [0u64; 4];
        for (slot, l) in ids.iter_mut().zip(self.lines.iter()) {
            *slot = l.index(ctx);
        }
        ids.sort_unstable();
        ids
    }

    /// Opposite vertex pairs of the quadrilateral:
    /// (01,23), (02,13), (03,12) in the point order of `points`.
    fn opposite_pairs(&self) -> [(ProjPoint, ProjPoint); 3] {
        let p = &self.points;
        [(p[0], p[5]), (p[1], p[4]), (p[2], p[3])]
    }
}

/// Try to extend an O'Nan configuration to a Triple O'Nan.
///
/// Each of the three quadrangles inside the six points determines one new
/// diagonal point (a vertex of the diagonal triangle of the quadrilateral);
/// the extension exists when that point lies in the unital. Returns the
/// verified completions, possibly empty.
pub fn extend_onan(ctx: &FieldCtx, unital: &Unital, onan: &OnanConfig) -> Result<Vec<TripleOnanConfig>> {
    let pairs = onan.opposite_pairs();
    let mut diags = Vec::with_capacity(3);
    for (a, b) in pairs {
        diags.push(join(ctx, &a, &b)?);
    }
    let mut out = Vec::new();
    for skip in 0..3 {
        let i = (skip + 1) % 3;
        let j = (skip + 2) % 3;
        let new_point = match meet(ctx, &diags[i], &diags[j]) {
            Ok(p) => p,
            Err(_) => continue,
        };
        if !unital.contains_point(ctx, &new_point) {
            continue;
        }
        let (p, q) = pairs[i];
        let (x, y) = pairs[j];
        let m = match join(ctx, &p, &x).and_then(|px| {
            let qy = join(ctx, &q, &y)?;
            meet(ctx, &px, &qy)
        }) {
            Ok(m) => m,
            Err(_) => continue,
        };
        let n = match join(ctx, &p, &y).and_then(|py| {
            let qx = join(ctx, &q, &x)?;
            meet(ctx, &py, &qx)
        }) {
            Ok(n) => n,
            Err(_) => continue,
        };
        let labeled = LabeledPoints { p, q, x, y, v: new_point, m, n };
        if let Ok(cfg) = TripleOnanConfig::from_points(ctx, unital, labeled) {
            out.push(cfg);
        }
    }
    Ok(out)
}

/// One Feng-Li O'Nan configuration, built from a pair λ1 ≠ λ2 in GF(q).
#[derive(Clone, Debug)]
pub struct FengLiConfig {
    pub lambda1: FqElem,
    pub lambda2: FqElem,
    pub x1: Fq2Elem,
    pub x2: Fq2Elem,
    pub r: Fq2Elem,
    pub onan: OnanConfig,
}

/// Why a (λ1, λ2) pair produced no configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FengLiRejection {
    ZeroDenominator,
    CoincidentBasePoints,
    XSumZero,
    PointOutsideUnital(&'static str),
    Degenerate(String),
}

pub enum FengLiOutcome {
    Config(Box<FengLiConfig>),
    Rejected(FengLiRejection),
}

/// The Feng-Li construction: P = (0,0,1), base points
/// P_λ = (x_λ, −x_λ, 1) with x_λ = (a^q + λ − b) / ((λ−b)^(q+1) − a^(q+1)),
/// their images under σ: (x,y,z) ↦ (−x,y,z), and R = (0, r, 1) with
/// r = −2 x_{λ1} x_{λ2} / (x_{λ1} + x_{λ2}). The four lines are
/// [1,1,0], [1,−1,0], P_{λ1}P^σ_{λ2}, P^σ_{λ1}P_{λ2}.
///
/// The denominator orientation is the one that actually puts P_λ on the
/// unital: with the opposite sign no λ works, with this sign every λ with a
/// nonzero denominator parametrizes one unital point of [1,1,0] minus P.
pub fn feng_li_onan(
    ctx: &FieldCtx,
    unital: &Unital,
    lambda1: FqElem,
    lambda2: FqElem,
) -> Result<FengLiOutcome> {
    if lambda1 == lambda2 {
        return Err(Error::InvalidParams("lambda1 and lambda2 must differ".into()));
    }
    let params = unital.params();
    let (a, b) = (params.a, params.b);
    let aq = ctx.frobenius(a);
    let na = ctx.embed(ctx.norm(a));
    let base_point = |lambda: FqElem| -> Option<Fq2Elem> {
        let lam_b = ctx.sub(ctx.embed(lambda), b);
        let denom = ctx.sub(ctx.embed(ctx.norm(lam_b)), na);
        if denom.is_zero() {
            return None;
        }
        Some(ctx.div(ctx.add(aq, lam_b), denom))
    };
    let x1 = match base_point(lambda1) {
        Some(v) => v,
        None => return Ok(FengLiOutcome::Rejected(FengLiRejection::ZeroDenominator)),
    };
    let x2 = match base_point(lambda2) {
        Some(v) => v,
        None => return Ok(FengLiOutcome::Rejected(FengLiRejection::ZeroDenominator)),
    };
    if x1 == x2 {
        return Ok(FengLiOutcome::Rejected(FengLiRejection::CoincidentBasePoints));
    }
    if x1.is_zero() || x2.is_zero() {
        return Ok(FengLiOutcome::Rejected(FengLiRejection::Degenerate("x_lambda = 0".into())));
    }
    let sum = ctx.add(x1, x2);
    if sum.is_zero() {
        return Ok(FengLiOutcome::Rejected(FengLiRejection::XSumZero));
    }
    let r = ctx.neg(ctx.div(ctx.mul(ctx.fq2_int(2), ctx.mul(x1, x2)), sum));

    let one = Fq2Elem::ONE;
    let p1 = ProjPoint::new(ctx, x1, ctx.neg(x1), one)?;
    let p2 = ProjPoint::new(ctx, x2, ctx.neg(x2), one)?;
    let p1s = ProjPoint::new(ctx, ctx.neg(x1), ctx.neg(x1), one)?;
    let p2s = ProjPoint::new(ctx, ctx.neg(x2), ctx.neg(x2), one)?;
    let rp = ProjPoint::new(ctx, Fq2Elem::ZERO, r, one)?;

    for (pt, name) in [
        (&p1, "P_lambda1"),
        (&p2, "P_lambda2"),
        (&p1s, "sigma(P_lambda1)"),
        (&p2s, "sigma(P_lambda2)"),
        (&rp, "R"),
    ] {
        if !unital.contains_point(ctx, pt) {
            return Ok(FengLiOutcome::Rejected(FengLiRejection::PointOutsideUnital(name)));
        }
    }

    let l1 = ProjLine::from_ints(ctx, 1, 1, 0);
    let lm1 = ProjLine::new(ctx, one, ctx.neg(one), Fq2Elem::ZERO)?;
    let lp = match join(ctx, &p1, &p2s) {
        Ok(l) => l,
        Err(_) => return Ok(FengLiOutcome::Rejected(FengLiRejection::Degenerate("join".into()))),
    };
    let lpp = match join(ctx, &p1s, &p2) {
        Ok(l) => l,
        Err(_) => return Ok(FengLiOutcome::Rejected(FengLiRejection::Degenerate("join".into()))),
    };
    let onan = match OnanConfig::from_lines(ctx, unital, [l1, lm1, lp, lpp]) {
        Ok(o) => o,
        Err(e) => return Ok(FengLiOutcome::Rejected(FengLiRejection::Degenerate(e.to_string()))),
    };
    // the six intersection points are exactly P, the four base points, and R
    let expected = [ProjPoint::from_ints(ctx, 0, 0, 1), p1, p2, p1s, p2s, rp];
    for pt in onan.points() {
        if !expected.contains(pt) {
            return Err(Error::InvariantViolation(
                "Feng-Li quadrilateral produced an unexpected intersection".into(),
            ));
        }
    }
    Ok(FengLiOutcome::Config(Box::new(FengLiConfig { lambda1, lambda2, x1, x2, r, onan })))
}

/// Statistics of a full (λ1, λ2) scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FengLiScanStats {
    pub ordered_pairs: usize,
    pub configs_found: usize,
    pub distinct_configs: usize,
}

/// Scan all ordered pairs (λ1, λ2), dedup unordered by line set.
pub fn feng_li_scan(ctx: &FieldCtx, unital: &Unital) -> Result<(Vec<FengLiConfig>, FengLiScanStats)> {
    let mut found = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let mut ordered_pairs = 0usize;
    let mut configs_found = 0usize;
    for l1 in ctx.fq_elements() {
        for l2 in ctx.fq_elements() {
            if l1 == l2 {
                continue;
            }
            ordered_pairs += 1;
            if let FengLiOutcome::Config(cfg) = feng_li_onan(ctx, unital, l1, l2)? {
                configs_found += 1;
                if seen.insert(cfg.onan.id(ctx)) {
                    found.push(*cfg);
                }
            }
        }
    }
    let stats = FengLiScanStats {
        ordered_pairs,
        configs_found,
        distinct_configs: found.len(),
    };
    Ok((found, stats))
}

/// The three candidate diagonal points of a Feng-Li configuration with
/// their unital membership: I0 = (1,0,0), I1 = (0,−x_{λ1},1),
/// I2 = (0,−x_{λ2},1).
pub fn fl_diagonals(ctx: &FieldCtx, unital: &Unital, cfg: &FengLiConfig) -> [(ProjPoint, bool); 3] {
    let one = Fq2Elem::ONE;
    let i0 = ProjPoint::from_ints(ctx, 1, 0, 0);
    let i1 = ProjPoint::new(ctx, Fq2Elem::ZERO, ctx.neg(cfg.x1), one).unwrap();
    let i2 = ProjPoint::new(ctx, Fq2Elem::ZERO, ctx.neg(cfg.x2), one).unwrap();
    [
        (i0, unital.contains_point(ctx, &i0)),
        (i1, unital.contains_point(ctx, &i1)),
        (i2, unital.contains_point(ctx, &i2)),
    ]
}

/// The point F = MN ∩ XY of a canonical-frame configuration, with the
/// closed form (0, 2st/(s+t), 1) when s+t ≠ 0 and T∞ when s+t = 0.
#[derive(Clone, Debug)]
pub struct FPointReport {
    pub f: ProjPoint,
    pub in_unital: bool,
    pub closed_form: ProjPoint,
    pub matches_closed_form: bool,
}

pub fn f_point(ctx: &FieldCtx, unital: &Unital, params: &TripleOnanParams) -> Result<FPointReport> {
    let realized = realize(ctx, params)?;
    let mn = join(ctx, &realized.points.m, &realized.points.n)?;
    let f = meet(ctx, &mn, &realized.lines[5])?;
    let st_sum = ctx.fq_add(params.s, params.t);
    let closed_form = if st_sum.is_zero() {
        special_point(ctx)
    } else {
        let f2 = ctx.fq_div(
            ctx.fq_mul(ctx.fq(2), ctx.fq_mul(params.s, params.t)),
            st_sum,
        );
        ProjPoint::new(ctx, Fq2Elem::ZERO, ctx.embed(f2), Fq2Elem::ONE)?
    };
    Ok(FPointReport {
        f,
        in_unital: unital.contains_point(ctx, &f),
        matches_closed_form: f == closed_form,
        closed_form,
    })
}

/// One row of the E-point experiment: E = MN ∩ PQ, computed geometrically.
/// No assertion is made about membership; the row only records it.
#[derive(Clone, Debug)]
pub struct EPointRow {
    pub q: u32,
    pub a_character: ACharacter,
    pub e: ProjPoint,
    /// h = −1 makes the closed form for E degenerate; the meet is still
    /// defined (E is then the infinite point of PQ).
    pub h_degenerate: bool,
    pub e_in_unital: bool,
}

pub fn e_point(ctx: &FieldCtx, unital: &Unital, params: &TripleOnanParams) -> Result<EPointRow> {
    let realized = realize(ctx, params)?;
    let mn = join(ctx, &realized.points.m, &realized.points.n)?;
    let e = meet(ctx, &mn, &realized.lines[4])?;
    Ok(EPointRow {
        q: ctx.q(),
        a_character: unital.params().a_character(),
        e,
        h_degenerate: ctx.add(params.h, Fq2Elem::ONE).is_zero(),
        e_in_unital: unital.contains_point(ctx, &e),
    })
}

/// Tabulate the E-point over a batch of configurations; rows follow the
/// input order, so the report is deterministic for a deterministic input.
pub fn e_point_experiment(
    ctx: &FieldCtx,
    unital: &Unital,
    configs: &[TripleOnanParams],
) -> Result<Vec<EPointRow>> {
    configs.iter().map(|p| e_point(ctx, unital, p)).collect()
}
