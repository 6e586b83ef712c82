use magnusforge::embedding::{build_context, embed_h, eval_in_g, lower_bound_chain, pad_word, recognize, EmbeddingContext};
use magnusforge::groups::{CayleyTable, Cyclic, Group, Symmetric};
use magnusforge::metrics::TableLength;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn s3_context() -> &'static EmbeddingContext {
    static CTX: OnceLock<EmbeddingContext> = OnceLock::new();
    CTX.get_or_init(|| {
        let s = Symmetric::new(3);
        let (t, _) = CayleyTable::from_group(&s, &s.standard_generators());
        let ell = TableLength::word_length(&t);
        build_context(&t, &ell, 1, 10).unwrap()
    })
}

#[test]
fn s3_homomorphism_and_injectivity() {
    let ctx = s3_context();
    let h = &ctx.h_group;
    let images: Vec<_> = h.elements().map(|x| eval_in_g(ctx, &embed_h(ctx, x)).unwrap()).collect();
    for a in h.elements() {
        assert_eq!(recognize(ctx, &images[a]), Some(a));
        for b in h.elements() {
            let ab = ctx.g_group.mul(&images[a], &images[b]);
            assert_eq!(ab, images[h.mul(&a, &b)]);
        }
    }
    assert_eq!(ctx.q, 3);
}

#[test]
fn weighted_lengths_on_z5() {
    let (t, _) = CayleyTable::from_group(&Cyclic::new(5), &[1]);
    // Index order of the table is 0, 1, 4, 2, 3.
    let ell = TableLength::new(&t, vec![0, 2, 2, 3, 3]).unwrap();
    let ctx = build_context(&t, &ell, 1, 10).unwrap();
    assert_eq!(ctx.stratum_counts(), vec![1, 1, 5, 9]);
    for h in t.elements() {
        let w = embed_h(&ctx, h);
        assert!(w.len() as u64 <= (8 + 16 * ctx.q) * ell.values()[h]);
        let c = lower_bound_chain(&ctx, &w).unwrap();
        assert_eq!(c.h, h);
        assert!(c.holds());
    }
}

#[test]
fn lambda_hint_is_respected() {
    let (t, _) = CayleyTable::from_group(&Cyclic::new(3), &[1]);
    let ell = TableLength::word_length(&t);
    let ctx = build_context(&t, &ell, 3, 10).unwrap();
    assert_eq!(ctx.q, 3);
    assert_eq!(ctx.radius, 5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn padded_words_keep_the_chain(seed in any::<u64>(), h in 0usize..6, pieces in 0usize..4) {
        let ctx = s3_context();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = pad_word(ctx, &embed_h(ctx, h), pieces, &mut rng);
        let c = lower_bound_chain(ctx, &w).unwrap();
        prop_assert_eq!(c.h, h);
        prop_assert!(c.holds());
        prop_assert!(c.ell <= w.len() as u64);
    }
}
