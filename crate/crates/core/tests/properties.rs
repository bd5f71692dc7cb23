//! Property tests over randomly sampled field elements and points.

use proptest::prelude::*;

use unital_lab::gfield::{FieldCtx, Fq2Elem};
use unital_lab::plane::{incident, join, meet, ProjPoint};
use unital_lab::unital::{canonical, phi, psi, Unital};

fn ctx13() -> &'static FieldCtx {
    use std::sync::OnceLock;
    static CTX: OnceLock<FieldCtx> = OnceLock::new();
    CTX.get_or_init(|| FieldCtx::new(13, 1).unwrap())
}

fn ctx9() -> &'static FieldCtx {
    use std::sync::OnceLock;
    static CTX: OnceLock<FieldCtx> = OnceLock::new();
    CTX.get_or_init(|| FieldCtx::new(3, 2).unwrap())
}

fn elem(ctx: &FieldCtx, seed: u32) -> Fq2Elem {
    ctx.fq2_from_index(seed % ctx.qq()).unwrap()
}

proptest! {
    #[test]
    fn ring_axioms(xs in 0u32..169, ys in 0u32..169, zs in 0u32..169) {
        for ctx in [ctx13(), ctx9()] {
            let (x, y, z) = (elem(ctx, xs), elem(ctx, ys), elem(ctx, zs));
            prop_assert_eq!(ctx.add(ctx.add(x, y), z), ctx.add(x, ctx.add(y, z)));
            prop_assert_eq!(ctx.mul(ctx.mul(x, y), z), ctx.mul(x, ctx.mul(y, z)));
            prop_assert_eq!(ctx.mul(x, ctx.add(y, z)), ctx.add(ctx.mul(x, y), ctx.mul(x, z)));
            if !x.is_zero() {
                prop_assert_eq!(ctx.mul(x, ctx.inv(x)), Fq2Elem::ONE);
            }
        }
    }

    #[test]
    fn frobenius_is_an_automorphism(xs in 0u32..169, ys in 0u32..169) {
        for ctx in [ctx13(), ctx9()] {
            let (x, y) = (elem(ctx, xs), elem(ctx, ys));
            prop_assert_eq!(ctx.frobenius(ctx.add(x, y)), ctx.add(ctx.frobenius(x), ctx.frobenius(y)));
            prop_assert_eq!(ctx.frobenius(ctx.mul(x, y)), ctx.mul(ctx.frobenius(x), ctx.frobenius(y)));
            prop_assert_eq!(ctx.frobenius(ctx.frobenius(x)), x);
        }
    }

    #[test]
    fn box_and_norm_shapes(xs in 0u32..169) {
        for ctx in [ctx13(), ctx9()] {
            let x = elem(ctx, xs);
            let b = ctx.box_diff(x);
            // box lands in the e-line and is skew under Frobenius
            prop_assert!(ctx.parts(b).0.is_zero());
            prop_assert_eq!(ctx.frobenius(b), ctx.neg(b));
            // norm is x·x^q and lands in the base field
            prop_assert_eq!(ctx.embed(ctx.norm(x)), ctx.mul(x, ctx.frobenius(x)));
        }
    }

    #[test]
    fn sqrt_roundtrip(xs in 0u32..169) {
        for ctx in [ctx13(), ctx9()] {
            let x = elem(ctx, xs);
            match ctx.sqrt(x) {
                Ok(r) => prop_assert_eq!(ctx.mul(r, r), x),
                Err(_) => prop_assert!(!ctx.is_square(x)),
            }
        }
    }

    #[test]
    fn join_meet_duality(a in 0u32..169, b in 0u32..169, c in 0u32..169, d in 0u32..169, e2 in 0u32..169, f in 0u32..169) {
        let ctx = ctx13();
        let mk = |u: u32, v: u32| ProjPoint::new(ctx, elem(ctx, u), elem(ctx, v), Fq2Elem::ONE).unwrap();
        let (p, q, r, s) = (mk(a, b), mk(c, d), mk(e2, f), mk(a ^ 5, f ^ 9));
        prop_assume!(p != q && r != s);
        let l = join(ctx, &p, &q).unwrap();
        let m = join(ctx, &r, &s).unwrap();
        prop_assume!(l != m);
        let x = meet(ctx, &l, &m).unwrap();
        prop_assert!(incident(ctx, &l, &x));
        prop_assert!(incident(ctx, &m, &x));
    }

    #[test]
    fn membership_invariant_under_translations(gamma_s in 0u32..169, t_s in 0u32..13, point_s in 0u32..2198) {
        let ctx = ctx13();
        let params = canonical::conic_params(ctx);
        let u = Unital::build(ctx, params);
        let gamma = elem(ctx, gamma_s);
        let t = ctx.fq_from_index(t_s % ctx.q()).unwrap();
        let map = psi(ctx, &params, gamma).compose(ctx, &phi(ctx, t));
        let p = u.points()[point_s as usize % u.size()];
        prop_assert!(u.contains_point(ctx, &map.apply(ctx, &p)));
    }
}
