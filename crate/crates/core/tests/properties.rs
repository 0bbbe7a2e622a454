use proptest::prelude::*;

use opcat::corpus::{corpus, DEFAULT_CORPUS_SEED};
use opcat::correspond::{dm_algebra_to_lax, lax_to_dm_algebra, permutation_transport};
use opcat::decalage::{check_comonad_laws, dec};
use opcat::examples::ex_decalage_unary;
use opcat::fincat::FinCat;
use opcat::operadic::check_lax_operadic;
use opcat::simplicial::{dec_ss, nerve, segal, shift_identity_holds, sset_equal, undeck};
use opcat::sskel::{surjections_operadic, SMap};

fn shuffled(n: usize, seed: u64) -> SMap {
    let mut v: Vec<usize> = (1..=n).collect();
    let mut s = seed;
    for i in (1..n).rev() {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        v.swap(i, (s >> 33) as usize % (i + 1));
    }
    SMap::new(v, n).unwrap()
}

fn pick(i: usize) -> FinCat {
    let all = corpus(DEFAULT_CORPUS_SEED);
    all[i % all.len()].1.clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dec_has_one_object_per_morphism(i in 0usize..1000) {
        let c = pick(i);
        let d = dec(&c);
        prop_assert_eq!(d.cat.num_objects(), c.num_morphisms());
        let triangles = c.composable_pairs().len();
        prop_assert_eq!(d.cat.num_morphisms(), triangles);
    }

    #[test]
    fn comonad_laws_hold(i in 0usize..1000) {
        prop_assert!(check_comonad_laws(&pick(i)).is_ok());
    }

    #[test]
    fn nerves_are_segal_and_shift(i in 0usize..1000) {
        let c = pick(i);
        prop_assert!(segal(&nerve(&c, 3)).unwrap());
        prop_assert!(shift_identity_holds(&c, 2));
    }

    #[test]
    fn undecking_shifts_to_the_nerve(i in 0usize..1000) {
        let s = ex_decalage_unary(&pick(i));
        let u = undeck(&s, 3).unwrap();
        prop_assert!(sset_equal(&dec_ss(&u).unwrap(), &nerve(s.cat(), 2), 2));
    }

    #[test]
    fn transports_stay_lax_and_roundtrip(seeds in proptest::collection::vec(any::<u64>(), 3)) {
        let s = surjections_operadic(3);
        let sigma: Vec<SMap> = s.cat().objects().map(|x| shuffled(s.card_obj(x), seeds[x % 3])).collect();
        let t = permutation_transport(&s, &sigma).unwrap();
        prop_assert!(check_lax_operadic(&t).unwrap().is_ok());
        let back = dm_algebra_to_lax(&lax_to_dm_algebra(&t).unwrap());
        prop_assert_eq!(back, t);
    }
}
