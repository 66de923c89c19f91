use ncycle::constructor::{cyclotomic_construct, GSpec};
use ncycle::criteria::check_ncycle;
use ncycle::{to_table, Elem, FieldCtx, FieldFunction, IndexForm, PermTable, SparsePoly, Transform};
use proptest::prelude::*;

const FIELDS: [(u64, usize); 6] = [(2, 4), (3, 3), (5, 2), (13, 1), (31, 1), (2, 6)];

fn field() -> impl Strategy<Value = FieldCtx> {
    prop::sample::select(&FIELDS[..]).prop_map(|(p, m)| FieldCtx::new(p, m, None).unwrap())
}

fn elem(ctx: &FieldCtx) -> impl Strategy<Value = Elem> + Clone {
    (0..ctx.order()).prop_map(Elem)
}

/// A random index form: a divisor ell of q-1, an r and nonzero-or-zero h coefficients.
fn form_in(ctx: FieldCtx) -> impl Strategy<Value = (FieldCtx, IndexForm)> {
    let order = ctx.group_order();
    let ells: Vec<u64> = (1..=order).filter(|d| order % d == 0 && *d <= 8).collect();
    (prop::sample::select(ells), 1..order, prop::collection::vec(0..ctx.order(), 8)).prop_map(move |(ell, r, raw)| {
        let h: Vec<Elem> = raw[..ell as usize].iter().map(|&c| Elem(c)).collect();
        let form = IndexForm::new(r, order / ell, h, &ctx).unwrap();
        (ctx.clone(), form)
    })
}

fn random_perm(len: usize) -> impl Strategy<Value = PermTable> {
    Just((0..len as u32).collect::<Vec<_>>()).prop_shuffle().prop_map(PermTable::from_images)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms((ctx, a, b, c) in field().prop_flat_map(|ctx| {
        let e = elem(&ctx);
        (Just(ctx), e.clone(), e.clone(), e)
    })) {
        prop_assert_eq!(ctx.add(a, b), ctx.add(b, a));
        prop_assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
        prop_assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
        prop_assert_eq!(ctx.mul(a, ctx.add(b, c)), ctx.add(ctx.mul(a, b), ctx.mul(a, c)));
        prop_assert_eq!(ctx.sub(ctx.add(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), Elem::ONE);
            prop_assert_eq!(ctx.pow(a, ctx.group_order()), Elem::ONE);
        }
        prop_assert_eq!(ctx.encode(&ctx.decode(a)).unwrap(), a);
        prop_assert_eq!(ctx.frobenius(ctx.add(a, b)), ctx.add(ctx.frobenius(a), ctx.frobenius(b)));
    }

    #[test]
    fn log_tables_agree((ctx, a, k) in field().prop_flat_map(|ctx| {
        let e = elem(&ctx);
        (Just(ctx), e, 0u64..1000)
    })) {
        let fast = ctx.clone().with_log_table();
        prop_assert_eq!(fast.pow(a, k), ctx.pow(a, k));
        prop_assert_eq!(fast.mul(a, ctx.beta()), ctx.mul(a, ctx.beta()));
    }

    #[test]
    fn sparse_and_piecewise_agree((ctx, form) in field().prop_flat_map(form_in)) {
        let sparse = form.to_sparse(&ctx);
        let piece = form.to_piecewise(&ctx).unwrap();
        for x in ctx.elements() {
            let y = form.eval(x, &ctx);
            prop_assert_eq!(sparse.eval(x, &ctx), y);
            prop_assert_eq!(piece.eval(x, &ctx), y);
        }
        let back = IndexForm::from_sparse(&sparse, &ctx);
        if let Some(b) = back {
            prop_assert_eq!(b.to_sparse(&ctx), sparse);
        }
    }

    #[test]
    fn print_parse_round_trip((ctx, form) in field().prop_flat_map(form_in)) {
        let f = form.to_sparse(&ctx);
        let again = SparsePoly::parse(&f.to_string(), &ctx).unwrap();
        prop_assert_eq!(again, f);
    }

    #[test]
    fn criterion_matches_oracle((ctx, form) in field().prop_flat_map(form_in), n in 1u32..7) {
        let verdict = check_ncycle(&form, n, &ctx).unwrap();
        let table = to_table(&form, &ctx).unwrap();
        let oracle = table.is_bijective() && table.is_n_cycle(n as u64).unwrap();
        prop_assert_eq!(verdict.passed, oracle);
    }

    #[test]
    fn incremental_evaluation_matches((ctx, form) in field().prop_flat_map(form_in), start in 0u64..60) {
        // out[k] = f(beta^(start + k))
        let mut out = vec![0u32; ctx.group_order() as usize];
        form.eval_powers(start, &mut out, &ctx);
        let sparse = form.to_sparse(&ctx);
        let mut via_sparse = vec![0u32; out.len()];
        sparse.eval_powers(start, &mut via_sparse, &ctx);
        for (i, &y) in out.iter().enumerate() {
            let x = ctx.beta_pow((start + i as u64) as i128);
            prop_assert_eq!(Elem(y as u64), form.eval(x, &ctx));
            prop_assert_eq!(via_sparse[i], y);
        }
    }

    #[test]
    fn min_order_is_first_return(t in (1usize..40).prop_flat_map(random_perm)) {
        let k = t.min_order().unwrap();
        let mut acc = t.clone();
        let mut steps = 1u128;
        while !acc.is_identity() {
            acc = acc.compose(&t).unwrap();
            steps += 1;
        }
        prop_assert_eq!(steps, k);
        for n in 1..=12u64 {
            prop_assert_eq!(t.is_n_cycle(n).unwrap(), n as u128 % k == 0);
        }
        prop_assert!(t.functional_power(k as i64).unwrap().is_identity());
        prop_assert_eq!(t.functional_power(-1).unwrap(), t.inverse().unwrap());
    }

    #[test]
    fn power_and_conjugate_keep_n_cycle(t in (1usize..30).prop_flat_map(random_perm), seed in any::<u64>(), k in -5i64..6) {
        let n = t.min_order().unwrap() as u64;
        let pow = t.derive(Transform::Power(k)).unwrap();
        prop_assert!(pow.is_n_cycle(n).unwrap());
        let len = t.len();
        let mut images: Vec<u32> = (0..len as u32).collect();
        images.rotate_left((seed % len as u64) as usize);
        let g = PermTable::from_images(images);
        let conj = t.derive(Transform::Conjugate(&g)).unwrap();
        prop_assert_eq!(conj.cycle_structure().unwrap(), t.cycle_structure().unwrap());
    }

    #[test]
    fn cyclotomic_validity_matches_oracle(code in 0u64..4096, r_pick in 0usize..4, n in 2u32..4, cyc in any::<bool>()) {
        // GF(13): ell = 3, s = 4
        let ctx = FieldCtx::new(13, 1, None).unwrap();
        let sigma = if cyc && n == 3 { vec![1, 2, 0] } else if n == 2 && cyc { vec![0, 2, 1] } else { vec![0, 1, 2] };
        let mvec = vec![code % 4, code / 4 % 4, code / 16 % 4];
        let r = [1u64, 5, 9, 13][r_pick];
        let spec = GSpec::new(sigma, mvec).unwrap();
        let c = cyclotomic_construct(&spec, r, n, &ctx).unwrap();
        let t = to_table(&c.form, &ctx).unwrap();
        prop_assert_eq!(c.valid, t.is_bijective() && t.is_n_cycle(n as u64).unwrap());
    }
}
