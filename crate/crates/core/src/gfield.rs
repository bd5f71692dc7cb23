//! Exact arithmetic in GF(q) and GF(q²) for odd prime powers q.
//!
//! A [`FieldCtx`] fixes, once per field order:
//!
//! - `w`: the least generator of GF(q)* in the canonical element ordering
//!   (generators are exactly the non-squares that generate, and every
//!   generator is a non-square, so this is the least non-square generator);
//! - the basis {1, e} of GF(q²) over GF(q), with e² = w and e^q = −e;
//! - `g`: the least generator of GF(q²)* satisfying g^((q+1)/2) = e.
//!
//! Elements are canonical indices into log/antilog tables, so multiplication,
//! inversion, powers and the quadratic character are O(1) lookups. Contexts
//! are immutable once built and safe to share across threads.

use crate::{Error, Result};

/// Default bound on q² (the GF(q²) table size).
pub const DEFAULT_MAX_ORDER: u64 = 1 << 16;

const SENTINEL: u32 = u32::MAX;

/// Element of GF(q), stored as its canonical index: the base-p digit vector
/// of its polynomial representative read as an integer. For prime q this is
/// just the usual residue 0..q-1.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct FqElem(pub(crate) u32);

/// Element of GF(q²) = GF(q)[e]/(e² − w), denoting c0 + c1·e and stored as
/// the index c0 + q·c1.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Fq2Elem(pub(crate) u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl Fq2Elem {
    pub const ZERO: Fq2Elem = Fq2Elem(0);
    pub const ONE: Fq2Elem = Fq2Elem(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Fixed irreducible (in fact primitive) polynomials used to build GF(p^exp)
/// for the supported non-prime odd orders. Coefficients low-to-high, monic.
const MODULUS_TABLE: &[(u32, u32, &[u32])] = &[
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (7, 2, &[3, 6, 1]),
    (11, 2, &[2, 7, 1]),
    (13, 2, &[2, 12, 1]),
];

/// Precomputed arithmetic context for GF(q) and GF(q²).
pub struct FieldCtx {
    p: u32,
    exp: u32,
    q: u32,
    qq: u32,
    w: FqElem,
    g: Fq2Elem,
    modulus: Vec<u32>,
    // GF(q) tables
    add_q: Vec<u32>, // q*q, flat
    neg_q: Vec<u32>,
    exp_q: Vec<u32>, // 2*(q-1) powers of w
    log_q: Vec<u32>, // log_q[0] = SENTINEL
    // GF(q²) tables
    exp2: Vec<u32>, // 2*(qq-1) powers of g
    log2: Vec<u32>, // log2[0] = SENTINEL
    frob2: Vec<u32>,
    neg2: Vec<u32>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("exp", &self.exp)
            .field("q", &self.q)
            .field("w", &self.w.0)
            .field("g", &self.g.0)
            .field("modulus", &self.modulus)
            .finish()
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Polynomial arithmetic on canonical indices, used only while bootstrapping
/// the tables.
struct BaseField {
    p: u32,
    exp: u32,
    q: u32,
    modulus: Vec<u32>,
}

impl BaseField {
    fn digits(&self, mut idx: u32) -> Vec<u32> {
        let mut d = vec![0u32; self.exp as usize];
        for slot in d.iter_mut() {
            *slot = idx % self.p;
            idx /= self.p;
        }
        d
    }

    fn index(&self, d: &[u32]) -> u32 {
        let mut idx = 0u32;
        for &c in d.iter().rev() {
            idx = idx * self.p + c;
        }
        idx
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.index(&sum)
    }

    fn neg(&self, a: u32) -> u32 {
        let d: Vec<u32> = self.digits(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.index(&d)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        if self.exp == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let n = self.exp as usize;
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] += x as u64 * y as u64;
            }
        }
        // reduce by the monic modulus
        for i in (n..prod.len()).rev() {
            let c = prod[i] % self.p as u64;
            if c != 0 {
                for k in 0..n {
                    let sub = c * self.modulus[k] as u64 % self.p as u64;
                    let pos = i - n + k;
                    prod[pos] = (prod[pos] + (self.p as u64 - sub)) % self.p as u64;
                }
            }
            prod[i] = 0;
        }
        let d: Vec<u32> = prod[..n].iter().map(|&x| (x % self.p as u64) as u32).collect();
        self.index(&d)
    }

    fn pow(&self, mut a: u32, mut n: u64) -> u32 {
        let mut r = 1u32;
        while n > 0 {
            if n & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            n >>= 1;
        }
        r
    }

    fn is_generator(&self, a: u32, factors: &[u64]) -> bool {
        if a == 0 {
            return false;
        }
        let order = self.q as u64 - 1;
        factors.iter().all(|&f| self.pow(a, order / f) != 1)
    }
}

impl FieldCtx {
    /// Build the context for GF(q), q = p^exp, with the default q² bound.
    pub fn new(p: u32, exp: u32) -> Result<FieldCtx> {
        Self::with_max_order(p, exp, DEFAULT_MAX_ORDER)
    }

    /// Build the context with an explicit bound on q².
    pub fn with_max_order(p: u32, exp: u32, max_order: u64) -> Result<FieldCtx> {
        if p == 2 {
            return Err(Error::InvalidParams("even characteristic is not supported".into()));
        }
        if !is_prime(p) {
            return Err(Error::InvalidParams(format!("p = {p} is not prime")));
        }
        if exp == 0 {
            return Err(Error::InvalidParams("extension degree must be at least 1".into()));
        }
        let mut q: u64 = 1;
        for _ in 0..exp {
            q *= p as u64;
            if q * q > max_order {
                return Err(Error::InvalidParams(format!(
                    "field order {}^{} exceeds the table bound q^2 <= {max_order}",
                    p, exp
                )));
            }
        }
        let q = q as u32;
        let qq = q * q;

        let modulus: Vec<u32> = if exp == 1 {
            Vec::new()
        } else {
            MODULUS_TABLE
                .iter()
                .find(|&&(tp, te, _)| tp == p && te == exp)
                .map(|&(_, _, m)| m.to_vec())
                .ok_or_else(|| {
                    Error::InvalidParams(format!("no irreducible polynomial on record for {p}^{exp}"))
                })?
        };
        if exp > 1 {
            check_irreducible(p, &modulus)?;
        }

        let base = BaseField { p, exp, q, modulus: modulus.clone() };

        // w: least generator of GF(q)* in index order.
        let q_factors = prime_factors(q as u64 - 1);
        let w_idx = (1..q)
            .find(|&c| base.is_generator(c, &q_factors))
            .ok_or_else(|| Error::InvariantViolation("no generator of GF(q)* found".into()))?;

        // GF(q) tables
        let ord_q = (q - 1) as usize;
        let mut exp_q = vec![0u32; 2 * ord_q];
        let mut log_q = vec![SENTINEL; q as usize];
        let mut v = 1u32;
        for i in 0..ord_q {
            exp_q[i] = v;
            exp_q[i + ord_q] = v;
            log_q[v as usize] = i as u32;
            v = base.mul(v, w_idx);
        }
        if v != 1 {
            return Err(Error::InvariantViolation("w does not have order q-1".into()));
        }
        let mut add_q = vec![0u32; (q as usize) * (q as usize)];
        for a in 0..q {
            for b in 0..q {
                add_q[(a * q + b) as usize] = base.add(a, b);
            }
        }
        let neg_q: Vec<u32> = (0..q).map(|a| base.neg(a)).collect();

        // GF(q²) arithmetic bootstrapped on top of the GF(q) tables.
        let fq_mul = |a: u32, b: u32| -> u32 {
            if a == 0 || b == 0 {
                0
            } else {
                exp_q[(log_q[a as usize] + log_q[b as usize]) as usize]
            }
        };
        let fq_add = |a: u32, b: u32| -> u32 { add_q[(a * q + b) as usize] };
        let mul2_raw = |x: u32, y: u32| -> u32 {
            let (a0, a1) = (x % q, x / q);
            let (b0, b1) = (y % q, y / q);
            let c0 = fq_add(fq_mul(a0, b0), fq_mul(fq_mul(a1, b1), w_idx));
            let c1 = fq_add(fq_mul(a0, b1), fq_mul(a1, b0));
            c0 + q * c1
        };
        let pow2_raw = |mut a: u32, mut n: u64| -> u32 {
            let mut r = 1u32;
            while n > 0 {
                if n & 1 == 1 {
                    r = mul2_raw(r, a);
                }
                a = mul2_raw(a, a);
                n >>= 1;
            }
            r
        };

        // Any generator of GF(q²)*, to get provisional logs.
        let qq_factors = prime_factors(qq as u64 - 1);
        let order2 = qq as u64 - 1;
        let g0 = (1..qq)
            .find(|&c| qq_factors.iter().all(|&f| pow2_raw(c, order2 / f) != 1))
            .ok_or_else(|| Error::InvariantViolation("no generator of GF(q^2)* found".into()))?;
        let mut log0 = vec![SENTINEL; qq as usize];
        let mut v = 1u32;
        for i in 0..order2 {
            log0[v as usize] = i as u32;
            v = mul2_raw(v, g0);
        }

        // g: least generator with g^((q+1)/2) = e, where e has index q.
        let e_idx = q;
        let le = log0[e_idx as usize] as u64;
        let half = (q as u64 + 1) / 2;
        let g_idx = (1..qq)
            .find(|&c| {
                let i = log0[c as usize] as u64;
                gcd(i, order2) == 1 && (i * half) % order2 == le
            })
            .ok_or_else(|| {
                Error::InvariantViolation("no generator g with g^((q+1)/2) = e found".into())
            })?;

        // Final GF(q²) tables, indexed against g.
        let ord2 = order2 as usize;
        let mut exp2 = vec![0u32; 2 * ord2];
        let mut log2 = vec![SENTINEL; qq as usize];
        let mut v = 1u32;
        for i in 0..ord2 {
            exp2[i] = v;
            exp2[i + ord2] = v;
            log2[v as usize] = i as u32;
            v = mul2_raw(v, g_idx);
        }
        if v != 1 {
            return Err(Error::InvariantViolation("g does not have order q^2-1".into()));
        }
        let mut frob2 = vec![0u32; qq as usize];
        let mut neg2 = vec![0u32; qq as usize];
        for x in 0..qq {
            let (c0, c1) = (x % q, x / q);
            frob2[x as usize] = c0 + q * neg_q[c1 as usize];
            neg2[x as usize] = neg_q[c0 as usize] + q * neg_q[c1 as usize];
        }

        let ctx = FieldCtx {
            p,
            exp,
            q,
            qq,
            w: FqElem(w_idx),
            g: Fq2Elem(g_idx),
            modulus,
            add_q,
            neg_q,
            exp_q,
            log_q,
            exp2,
            log2,
            frob2,
            neg2,
        };

        // e² = w, e^q = −e, norm(g) = w.
        let e = ctx.e();
        if ctx.mul(e, e) != ctx.embed(ctx.w) {
            return Err(Error::InvariantViolation("e^2 != w".into()));
        }
        if ctx.frobenius(e) != ctx.neg(e) {
            return Err(Error::InvariantViolation("e^q != -e".into()));
        }
        if ctx.norm(ctx.g) != ctx.w {
            return Err(Error::InvariantViolation("norm(g) != w".into()));
        }
        Ok(ctx)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ext_degree(&self) -> u32 {
        self.exp
    }

    /// Order of the base field GF(q).
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Order of GF(q²).
    pub fn qq(&self) -> u32 {
        self.qq
    }

    /// The canonical non-square generator of GF(q)*.
    pub fn w(&self) -> FqElem {
        self.w
    }

    /// The canonical generator of GF(q²)*, with g^((q+1)/2) = e.
    pub fn g(&self) -> Fq2Elem {
        self.g
    }

    /// The basis element e = g^((q+1)/2), with e² = w.
    pub fn e(&self) -> Fq2Elem {
        Fq2Elem(self.q)
    }

    /// Irreducible polynomial used for GF(q) over GF(p); empty when exp = 1.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    // ---- GF(q) ----

    /// The image of an integer in the prime subfield of GF(q).
    pub fn fq(&self, n: u64) -> FqElem {
        FqElem((n % self.p as u64) as u32)
    }

    pub fn fq_from_index(&self, idx: u32) -> Result<FqElem> {
        if idx < self.q {
            Ok(FqElem(idx))
        } else {
            Err(Error::InvalidParams(format!("index {idx} out of range for GF({})", self.q)))
        }
    }

    pub fn fq_elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.q).map(FqElem)
    }

    pub fn fq_units(&self) -> impl Iterator<Item = FqElem> {
        (1..self.q).map(FqElem)
    }

    pub fn fq_add(&self, a: FqElem, b: FqElem) -> FqElem {
        FqElem(self.add_q[(a.0 * self.q + b.0) as usize])
    }

    pub fn fq_neg(&self, a: FqElem) -> FqElem {
        FqElem(self.neg_q[a.0 as usize])
    }

    pub fn fq_sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.fq_add(a, self.fq_neg(b))
    }

    pub fn fq_mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.0 == 0 || b.0 == 0 {
            FqElem(0)
        } else {
            FqElem(self.exp_q[(self.log_q[a.0 as usize] + self.log_q[b.0 as usize]) as usize])
        }
    }

    pub fn fq_inv(&self, a: FqElem) -> FqElem {
        assert!(a.0 != 0, "inverse of zero in GF(q)");
        let l = self.log_q[a.0 as usize];
        FqElem(self.exp_q[((self.q - 1) - l) as usize])
    }

    pub fn fq_div(&self, a: FqElem, b: FqElem) -> FqElem {
        self.fq_mul(a, self.fq_inv(b))
    }

    pub fn fq_pow(&self, a: FqElem, n: u64) -> FqElem {
        if n == 0 {
            return FqElem(1);
        }
        if a.0 == 0 {
            return FqElem(0);
        }
        let l = self.log_q[a.0 as usize] as u128;
        let ord = (self.q - 1) as u128;
        FqElem(self.exp_q[((l * n as u128) % ord) as usize])
    }

    /// Quadratic character in GF(q); zero counts as a square.
    pub fn fq_is_square(&self, a: FqElem) -> bool {
        a.0 == 0 || self.log_q[a.0 as usize] % 2 == 0
    }

    /// Canonical square root in GF(q): the root with the smaller index.
    pub fn fq_sqrt(&self, a: FqElem) -> Result<FqElem> {
        if a.0 == 0 {
            return Ok(FqElem(0));
        }
        let l = self.log_q[a.0 as usize];
        if l % 2 != 0 {
            return Err(Error::NotASquare);
        }
        let half_ord = (self.q - 1) / 2;
        let r1 = self.exp_q[(l / 2) as usize];
        let r2 = self.exp_q[(l / 2 + half_ord) as usize];
        Ok(FqElem(r1.min(r2)))
    }

    // ---- GF(q²) ----

    pub fn fq2(&self, c0: FqElem, c1: FqElem) -> Fq2Elem {
        Fq2Elem(c0.0 + self.q * c1.0)
    }

    pub fn fq2_from_index(&self, idx: u32) -> Result<Fq2Elem> {
        if idx < self.qq {
            Ok(Fq2Elem(idx))
        } else {
            Err(Error::InvalidParams(format!("index {idx} out of range for GF({})", self.qq)))
        }
    }

    /// Coordinates (c0, c1) of x = c0 + c1·e.
    pub fn parts(&self, x: Fq2Elem) -> (FqElem, FqElem) {
        (FqElem(x.0 % self.q), FqElem(x.0 / self.q))
    }

    pub fn embed(&self, a: FqElem) -> Fq2Elem {
        Fq2Elem(a.0)
    }

    /// True when x lies in the base field GF(q).
    pub fn in_base(&self, x: Fq2Elem) -> bool {
        x.0 < self.q
    }

    /// The GF(q) part of an element known to lie in the base field.
    pub fn to_base(&self, x: Fq2Elem) -> Result<FqElem> {
        if self.in_base(x) {
            Ok(FqElem(x.0))
        } else {
            Err(Error::InvariantViolation("element does not lie in GF(q)".into()))
        }
    }

    pub fn fq2_int(&self, n: u64) -> Fq2Elem {
        self.embed(self.fq(n))
    }

    pub fn fq2_elements(&self) -> impl Iterator<Item = Fq2Elem> {
        (0..self.qq).map(Fq2Elem)
    }

    pub fn fq2_units(&self) -> impl Iterator<Item = Fq2Elem> {
        (1..self.qq).map(Fq2Elem)
    }

    pub fn add(&self, x: Fq2Elem, y: Fq2Elem) -> Fq2Elem {
        let q = self.q;
        let (a0, a1) = (x.0 % q, x.0 / q);
        let (b0, b1) = (y.0 % q, y.0 / q);
        Fq2Elem(self.add_q[(a0 * q + b0) as usize] + q * self.add_q[(a1 * q + b1) as usize])
    }

    pub fn neg(&self, x: Fq2Elem) -> Fq2Elem {
        Fq2Elem(self.neg2[x.0 as usize])
    }

    pub fn sub(&self, x: Fq2Elem, y: Fq2Elem) -> Fq2Elem {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Fq2Elem, y: Fq2Elem) -> Fq2Elem {
        if x.0 == 0 || y.0 == 0 {
            Fq2Elem(0)
        } else {
            Fq2Elem(self.exp2[(self.log2[x.0 as usize] + self.log2[y.0 as usize]) as usize])
        }
    }

    pub fn inv(&self, x: Fq2Elem) -> Fq2Elem {
        assert!(x.0 != 0, "inverse of zero in GF(q^2)");
        let l = self.log2[x.0 as usize];
        Fq2Elem(self.exp2[((self.qq - 1) - l) as usize])
    }

    pub fn div(&self, x: Fq2Elem, y: Fq2Elem) -> Fq2Elem {
        self.mul(x, self.inv(y))
    }

    pub fn pow(&self, x: Fq2Elem, n: u64) -> Fq2Elem {
        if n == 0 {
            return Fq2Elem(1);
        }
        if x.0 == 0 {
            return Fq2Elem(0);
        }
        let l = self.log2[x.0 as usize] as u128;
        let ord = (self.qq - 1) as u128;
        Fq2Elem(self.exp2[((l * n as u128) % ord) as usize])
    }

    /// The Frobenius map x ↦ x^q, i.e. (c0, c1) ↦ (c0, −c1).
    pub fn frobenius(&self, x: Fq2Elem) -> Fq2Elem {
        Fq2Elem(self.frob2[x.0 as usize])
    }

    /// The difference x − x^q (the bracket operator of the configuration
    /// equations); always a pure e-multiple, and zero exactly on GF(q).
    pub fn box_diff(&self, x: Fq2Elem) -> Fq2Elem {
        self.sub(x, self.frobenius(x))
    }

    /// The norm x^(q+1) = x·x^q, valued in GF(q).
    pub fn norm(&self, x: Fq2Elem) -> FqElem {
        if x.0 == 0 {
            return FqElem(0);
        }
        let l = self.log2[x.0 as usize];
        FqElem(self.exp_q[(l % (self.q - 1)) as usize])
    }

    /// Quadratic character in GF(q²); zero counts as a square.
    pub fn is_square(&self, x: Fq2Elem) -> bool {
        x.0 == 0 || self.log2[x.0 as usize] % 2 == 0
    }

    /// Canonical square root in GF(q²): the root with the smaller index.
    pub fn sqrt(&self, x: Fq2Elem) -> Result<Fq2Elem> {
        if x.0 == 0 {
            return Ok(Fq2Elem(0));
        }
        let l = self.log2[x.0 as usize];
        if l % 2 != 0 {
            return Err(Error::NotASquare);
        }
        let half_ord = (self.qq - 1) / 2;
        let r1 = self.exp2[(l / 2) as usize];
        let r2 = self.exp2[(l / 2 + half_ord) as usize];
        Ok(Fq2Elem(r1.min(r2)))
    }

    /// Coefficientwise action of the base-field automorphism x ↦ x^(p^i)
    /// on the {1, e} coordinates.
    pub fn apply_tau(&self, x: Fq2Elem, i: u32) -> Fq2Elem {
        let (c0, c1) = self.parts(x);
        let n = (self.p as u64).pow(i % self.exp);
        self.fq2(self.fq_pow(c0, n), self.fq_pow(c1, n))
    }

    /// Discrete log base w in GF(q)*; `None` for zero.
    pub fn fq_log(&self, a: FqElem) -> Option<u32> {
        if a.0 == 0 {
            None
        } else {
            Some(self.log_q[a.0 as usize])
        }
    }

    /// w^i in GF(q).
    pub fn fq_from_log(&self, i: u32) -> FqElem {
        FqElem(self.exp_q[(i % (self.q - 1)) as usize])
    }

    /// Discrete log base g in GF(q²)*; `None` for zero.
    pub fn log(&self, x: Fq2Elem) -> Option<u32> {
        if x.0 == 0 {
            None
        } else {
            Some(self.log2[x.0 as usize])
        }
    }

    /// g^i in GF(q²).
    pub fn from_log(&self, i: u32) -> Fq2Elem {
        Fq2Elem(self.exp2[(i % (self.qq - 1)) as usize])
    }
}

/// Brute-force irreducibility check for the small moduli in the table.
fn check_irreducible(p: u32, modulus: &[u32]) -> Result<()> {
    let deg = modulus.len() - 1;
    let eval = |poly: &[u32], x: u32| -> u32 {
        let mut acc = 0u64;
        for &c in poly.iter().rev() {
            acc = (acc * x as u64 + c as u64) % p as u64;
        }
        acc as u32
    };
    for x in 0..p {
        if eval(modulus, x) == 0 {
            return Err(Error::InvariantViolation(format!(
                "modulus table entry for p={p} has a root"
            )));
        }
    }
    if deg == 4 {
        // no roots rules out degree-1 factors; also rule out quadratic factors
        for b in 0..p {
            for c in 0..p {
                // divide modulus by x² + b x + c and check the remainder
                let mut rem: Vec<u64> = modulus.iter().map(|&v| v as u64).collect();
                for i in (2..rem.len()).rev() {
                    let coef = rem[i] % p as u64;
                    if coef != 0 {
                        rem[i] = 0;
                        rem[i - 1] = (rem[i - 1] + (p as u64 - coef * b as u64 % p as u64)) % p as u64;
                        rem[i - 2] = (rem[i - 2] + (p as u64 - coef * c as u64 % p as u64)) % p as u64;
                    }
                }
                if rem[0] % p as u64 == 0 && rem[1] % p as u64 == 0 {
                    return Err(Error::InvariantViolation(format!(
                        "modulus table entry for p={p} has a quadratic factor"
                    )));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32, exp: u32) -> FieldCtx {
        FieldCtx::new(p, exp).unwrap()
    }

    /// Brute-force oracle: x^q by repeated multiplication.
    fn frobenius_oracle(c: &FieldCtx, x: Fq2Elem) -> Fq2Elem {
        let mut r = Fq2Elem::ONE;
        if x.is_zero() {
            return Fq2Elem::ZERO;
        }
        for _ in 0..c.q() {
            r = c.mul(r, x);
        }
        r
    }

    #[test]
    fn w_is_least_nonsquare_generator() {
        // brute-force oracle over all candidates
        for (p, exp) in [(3u32, 1u32), (5, 1), (7, 1), (11, 1), (3, 2)] {
            let c = ctx(p, exp);
            let q = c.q();
            let mut expected = None;
            'cand: for cand in 1..q {
                let x = FqElem(cand);
                // order check by walking powers
                let mut v = x;
                let mut order = 1;
                while v != FqElem::ONE {
                    v = c.fq_mul(v, x);
                    order += 1;
                }
                if order == q - 1 {
                    expected = Some(cand);
                    break 'cand;
                }
            }
            assert_eq!(c.w().index(), expected.unwrap());
            // a generator of a group of even order is never a square
            assert!(!c.fq_is_square(c.w()) || q == 2);
        }
        assert_eq!(ctx(3, 1).w(), FqElem(2));
        assert_eq!(ctx(7, 1).w(), FqElem(3));
    }

    #[test]
    fn even_characteristic_rejected() {
        assert!(matches!(FieldCtx::new(2, 1), Err(Error::InvalidParams(_))));
        assert!(matches!(FieldCtx::new(9, 1), Err(Error::InvalidParams(_))));
        assert!(matches!(FieldCtx::new(3, 0), Err(Error::InvalidParams(_))));
        assert!(matches!(FieldCtx::with_max_order(251, 2, DEFAULT_MAX_ORDER), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn frobenius_is_conjugation() {
        for (p, exp) in [(3u32, 1u32), (5, 1), (7, 1), (3, 2)] {
            let c = ctx(p, exp);
            let e = c.e();
            assert_eq!(c.frobenius(e), c.neg(e));
            for x in c.fq2_elements() {
                let (c0, c1) = c.parts(x);
                assert_eq!(c.frobenius(x), c.fq2(c0, c.fq_neg(c1)));
                assert_eq!(c.frobenius(x), frobenius_oracle(&c, x));
                if c.in_base(x) {
                    assert_eq!(c.frobenius(x), x);
                }
            }
        }
    }

    #[test]
    fn box_diff_properties() {
        let c = ctx(7, 1);
        let e = c.e();
        assert_eq!(c.box_diff(e), c.add(e, e));
        for a in c.fq_elements() {
            assert!(c.box_diff(c.embed(a)).is_zero());
        }
        for x in c.fq2_elements() {
            let b = c.box_diff(x);
            let (b0, _) = c.parts(b);
            assert!(b0.is_zero());
            assert_eq!(c.frobenius(b), c.neg(b));
            for y in [Fq2Elem(1), Fq2Elem(12), c.e()] {
                assert_eq!(c.box_diff(c.add(x, y)), c.add(c.box_diff(x), c.box_diff(y)));
            }
        }
    }

    #[test]
    fn norm_properties() {
        let c = ctx(7, 1);
        assert_eq!(c.norm(Fq2Elem::ONE), FqElem::ONE);
        // e^(q+1) = e·(−e) = −w
        assert_eq!(c.norm(c.e()), c.fq_neg(c.w()));
        // norm is x·x^q, lands in GF(q), and is multiplicative
        for x in c.fq2_elements() {
            let nx = c.mul(x, c.frobenius(x));
            assert!(c.in_base(nx));
            assert_eq!(c.embed(c.norm(x)), nx);
        }
        // surjective onto GF(q), each nonzero value hit q+1 times
        let mut hits = vec![0u32; c.q() as usize];
        for x in c.fq2_units() {
            hits[c.norm(x).index() as usize] += 1;
        }
        assert_eq!(hits[0], 0);
        for &h in &hits[1..] {
            assert_eq!(h, c.q() + 1);
        }
    }

    #[test]
    fn squares_and_roots() {
        for (p, exp) in [(3u32, 1u32), (5, 1), (7, 1), (11, 1), (13, 1), (3, 2)] {
            let c = ctx(p, exp);
            // every base-field element is a square in GF(q²)
            for a in c.fq_units() {
                assert!(c.is_square(c.embed(a)));
            }
            // w is a non-square in GF(q); its GF(q²) roots are ±e
            assert!(!c.fq_is_square(c.w()));
            let r = c.sqrt(c.embed(c.w())).unwrap();
            assert!(r == c.e() || r == c.neg(c.e()));
            // Euler criterion oracle for −1
            let minus_one = c.fq_neg(FqElem::ONE);
            let euler = c.fq_pow(minus_one, (c.q() as u64 - 1) / 2);
            assert_eq!(c.fq_is_square(minus_one), euler == FqElem::ONE);
            assert_eq!(c.fq_is_square(minus_one), c.q() % 4 == 1);
            // sqrt round-trips and is canonical
            for x in c.fq2_elements() {
                if c.is_square(x) {
                    let r = c.sqrt(x).unwrap();
                    assert_eq!(c.mul(r, r), x);
                    assert!(r.index() <= c.neg(r).index() || x.is_zero());
                } else {
                    assert!(c.sqrt(x).is_err());
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small_q() {
        // q ≤ 13: exhaustive associativity/distributivity/inverses in GF(q²)
        for (p, exp) in [(3u32, 1u32), (5, 1), (7, 1), (11, 1), (13, 1), (3, 2)] {
            let c = ctx(p, exp);
            let qq = c.qq();
            for x in 0..qq {
                let x = Fq2Elem(x);
                assert_eq!(c.add(x, Fq2Elem::ZERO), x);
                assert_eq!(c.mul(x, Fq2Elem::ONE), x);
                assert_eq!(c.add(x, c.neg(x)), Fq2Elem::ZERO);
                if !x.is_zero() {
                    assert_eq!(c.mul(x, c.inv(x)), Fq2Elem::ONE);
                }
            }
            // triples on a stride to keep the loop exhaustive-but-bounded per pair
            for x in 0..qq {
                let x = Fq2Elem(x);
                for y in 0..qq {
                    let y = Fq2Elem(y);
                    assert_eq!(c.add(x, y), c.add(y, x));
                    assert_eq!(c.mul(x, y), c.mul(y, x));
                    let fx = c.frobenius(x);
                    let fy = c.frobenius(y);
                    assert_eq!(c.frobenius(c.add(x, y)), c.add(fx, fy));
                    assert_eq!(c.frobenius(c.mul(x, y)), c.mul(fx, fy));
                }
            }
        }
        // full triple loops for every supported q up to 13
        for (p, exp) in [(3u32, 1u32), (5, 1), (7, 1), (11, 1), (13, 1), (3, 2)] {
            let c = ctx(p, exp);
            for x in c.fq2_elements() {
                for y in c.fq2_elements() {
                    for z in c.fq2_elements() {
                        assert_eq!(c.add(c.add(x, y), z), c.add(x, c.add(y, z)));
                        assert_eq!(c.mul(c.mul(x, y), z), c.mul(x, c.mul(y, z)));
                        assert_eq!(c.mul(x, c.add(y, z)), c.add(c.mul(x, y), c.mul(x, z)));
                    }
                }
            }
        }
    }

    #[test]
    fn extension_fields_build() {
        for (p, exp) in [(3u32, 2u32), (5, 2), (3, 3), (7, 2), (3, 4), (11, 2), (5, 3), (13, 2)] {
            let c = ctx(p, exp);
            assert_eq!(c.q() as u64, (p as u64).pow(exp));
            assert_eq!(c.pow(c.g(), (c.q() as u64 + 1) / 2), c.e());
            assert_eq!(c.norm(c.g()), c.w());
        }
    }

    #[test]
    fn generator_orders() {
        for (p, exp) in [(3u32, 1u32), (7, 1), (3, 2)] {
            let c = ctx(p, exp);
            let mut v = c.g();
            let mut order = 1u32;
            while v != Fq2Elem::ONE {
                v = c.mul(v, c.g());
                order += 1;
            }
            assert_eq!(order, c.qq() - 1);
        }
    }
}
