use std::sync::OnceLock;

use num_traits::Zero;
use proptest::prelude::*;
use psi_core::arith::{format_rational, parse_rational, rational};
use psi_core::dvv::{dvv_step_at, eval_dvv};
use psi_core::genus::thm11_step_at;
use psi_core::key::enumerate_keys;
use psi_core::npoint::NPointEngine;
use psi_core::rules::{dilaton_step, string_step};
use psi_core::{canonicalize, CacheStore, Combination, CorrelatorKey, Rational};

fn oracle() -> &'static CacheStore {
    static CACHE: OnceLock<CacheStore> = OnceLock::new();
    CACHE.get_or_init(CacheStore::new)
}

fn engine() -> &'static NPointEngine {
    static ENGINE: OnceLock<NPointEngine> = OnceLock::new();
    ENGINE.get_or_init(NPointEngine::new)
}

fn dvv(k: &CorrelatorKey) -> Rational {
    eval_dvv(k, oracle()).unwrap()
}

fn dvv_combo(c: &Combination) -> Rational {
    c.evaluate(|k| eval_dvv(k, oracle())).unwrap()
}

fn keys(g_max: u32, n_max: usize) -> Vec<CorrelatorKey> {
    (0..=g_max).flat_map(|g| (1..=n_max).flat_map(move |n| enumerate_keys(g, n))).collect()
}

fn any_key() -> impl Strategy<Value = CorrelatorKey> {
    prop::sample::select(keys(3, 5))
}

fn raw_key() -> impl Strategy<Value = (u32, Vec<u32>)> {
    (0u32..=3, prop::collection::vec(0u32..=9, 1..=5))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn string_equation_holds(k in any_key()) {
        prop_assume!(k.contains(0) && k.indices() != [0, 0, 0]);
        prop_assert_eq!(dvv(&k), dvv_combo(&string_step(&k).unwrap()));
    }

    #[test]
    fn dilaton_equation_holds(k in any_key()) {
        prop_assume!(k.contains(1) && k.n() >= 2);
        prop_assert_eq!(dvv(&k), dvv_combo(&dilaton_step(&k).unwrap()));
    }

    #[test]
    fn insertion_order_is_irrelevant((g, d) in raw_key(), seed in any::<u64>()) {
        let mut shuffled = d.clone();
        let len = shuffled.len();
        for i in (1..len).rev() {
            shuffled.swap(i, (seed as usize).wrapping_mul(i + 7) % (i + 1));
        }
        let a = canonicalize(g, &d).unwrap();
        let b = canonicalize(g, &shuffled).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.indices().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn invalid_keys_vanish((g, d) in raw_key()) {
        let k = canonicalize(g, &d).unwrap();
        if !k.is_stable() || !k.dimension_matches() {
            prop_assert!(dvv(&k).is_zero());
        }
    }

    #[test]
    fn dvv_pivot_is_free(k in prop::sample::select(keys(2, 4))) {
        // <t0^3>_0 and <t1>_1 are initial values, not expansions
        prop_assume!(!k.is_trivially_zero() && k.indices() != [0, 0, 0] && k.indices() != [1]);
        let v = dvv(&k);
        for pos in 0..k.n() {
            if k.indices()[pos] == 0 {
                continue;
            }
            let exp = dvv_step_at(&k, pos).unwrap();
            prop_assert_eq!(&v, &dvv_combo(&exp.combination));
        }
    }

    #[test]
    fn genus_recursion_pivot_is_free(k in prop::sample::select(keys(3, 4))) {
        prop_assume!(k.genus() >= 1 && !k.contains(0));
        let v = dvv(&k);
        for pos in 0..k.n() {
            prop_assert_eq!(&v, &dvv_combo(&thm11_step_at(&k, pos).unwrap()));
        }
    }

    #[test]
    fn rational_text_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
        let r = rational(p, q);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn cache_file_round_trip(ks in prop::collection::vec(any_key(), 0..20)) {
        let cache = CacheStore::new();
        for k in &ks {
            cache.insert(k.clone(), dvv(k)).unwrap();
        }
        let mut bytes = Vec::new();
        cache.write_to(&mut bytes).unwrap();
        let back = CacheStore::read_from(bytes.as_slice()).unwrap();
        prop_assert_eq!(back.entries(), cache.entries());
    }
}

#[test]
fn slices_are_symmetric_with_expected_degree() {
    for n in 1..=4usize {
        for g in 0..=3u32 {
            let slice = engine().f_slice(n, g).unwrap();
            assert!(slice.poly.is_symmetric(), "F slice n={n} g={g}");
            if n >= 3 {
                let gs = engine().g_slice(n, g).unwrap();
                assert_eq!(gs.poly.degree() as usize, 3 * g as usize + n - 3);
                assert!(gs.poly.is_symmetric(), "G slice n={n} g={g}");
            }
        }
    }
}

#[test]
fn genus_zero_matches_multinomial() {
    // (n-3)! / prod d_i! on a few hand-picked points
    let cases = [(&[0u32, 0, 0][..], "1"), (&[1, 0, 0, 0], "1"), (&[2, 1, 0, 0, 0, 0], "3"), (&[1, 1, 1, 0, 0, 0], "6")];
    for (d, want) in cases {
        let k = canonicalize(0, d).unwrap();
        assert_eq!(dvv(&k), parse_rational(want).unwrap(), "{k}");
    }
}
