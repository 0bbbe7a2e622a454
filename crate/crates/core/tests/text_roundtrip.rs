use opcat::corpus::{corpus, DEFAULT_CORPUS_SEED};
use opcat::correspond::permutation_transport;
use opcat::decalage::dec;
use opcat::examples::{
    disintegration_default_seeds, ex_decalage_unary, ex_disintegration, ex_pointed_sets, ex_sub_prob, pointed_letters,
    sub_prob_default_seeds, DEFAULT_CLOSURE_BOUND,
};
use opcat::fincat::{local_terminal_choices, FinCat};
use opcat::moddec::{dm_object, elements, LtOverS, OverS};
use opcat::operadic::OperadicStructure;
use opcat::simplicial::{boundary_of_triangle, nerve, undeck};
use opcat::sskel::{s_operadic, surjections_operadic, SMap};
use opcat::text::{emit_sset, emit_structure, parse, parse_structure, Structure};

fn roundtrip(name: &str, s: Structure) {
    let text = emit_structure(name, &s);
    let back = parse_structure(&text).unwrap_or_else(|e| panic!("{name}: {e}\n{text}"));
    assert_eq!(back, s, "{name}");
    assert_eq!(emit_structure(name, &back), text);
}

fn builders() -> Vec<(String, OperadicStructure)> {
    let surj = surjections_operadic(3);
    let sigma: Vec<SMap> = surj
        .cat()
        .objects()
        .map(|x| {
            let n = surj.card_obj(x);
            SMap::new((1..=n).map(|i| i % n + 1).collect(), n).unwrap()
        })
        .collect();
    vec![
        ("s2".into(), s_operadic(2)),
        ("s3".into(), s_operadic(3)),
        ("surj3".into(), surj.clone()),
        ("cycled".into(), permutation_transport(&surj, &sigma).unwrap()),
        ("lax_s2".into(), s_operadic(2).with_identity_relabel()),
        ("subprob".into(), ex_sub_prob(&sub_prob_default_seeds(), DEFAULT_CLOSURE_BOUND).unwrap()),
        (
            "disintegration".into(),
            ex_disintegration(&disintegration_default_seeds(), DEFAULT_CLOSURE_BOUND).unwrap(),
        ),
        ("pointed".into(), ex_pointed_sets(&pointed_letters(3)).unwrap()),
    ]
}

#[test]
fn operadic_builders_roundtrip() {
    for (name, s) in builders() {
        roundtrip(&name, Structure::Operadic(s));
    }
}

#[test]
fn corpus_categories_roundtrip() {
    for (name, c) in corpus(DEFAULT_CORPUS_SEED) {
        roundtrip(&name, Structure::Category(c.clone()));
        roundtrip(&name, Structure::Category(dec(&c).cat));
        for lt in local_terminal_choices(&c) {
            roundtrip(&name, Structure::Lt(lt));
        }
        roundtrip(&name, Structure::Operadic(ex_decalage_unary(&c)));
    }
}

#[test]
fn structures_over_s_roundtrip() {
    for (name, s) in builders() {
        let v = OverS {
            cat: s.cat().clone(),
            card: s.card.clone(),
        };
        roundtrip(&name, Structure::Category(elements(&v).cat));
        roundtrip(&name, Structure::Over(v));
        let lo = LtOverS::new(s.lt.clone(), s.card.clone()).unwrap();
        if s.cat().num_morphisms() <= 20 {
            let dm = dm_object(&lo).unwrap();
            roundtrip(&name, Structure::LtOver(dm.carrier.clone()));
        }
        roundtrip(&name, Structure::LtOver(lo));
    }
}

#[test]
fn simplicial_sets_roundtrip() {
    let s = ex_decalage_unary(&FinCat::arrow());
    for x in [boundary_of_triangle(), nerve(&FinCat::arrow(), 3), undeck(&s, 3).unwrap()] {
        let text = emit_sset("x", &x);
        let doc = parse(&text).unwrap();
        assert_eq!(emit_sset("x", &doc.ssets[0].1), text);
    }
}

#[test]
fn comments_and_spacing_are_ignored() {
    let a = parse_structure("category\nobjects a b\nmorphism f : a -> b\nterminal a = b\n").unwrap();
    let b = parse_structure("# an arrow\ncategory   # unnamed\n  objects a   b\n\nmorphism f : a -> b # the arrow\nterminal a=b\n")
        .unwrap();
    assert_eq!(a, b);
    assert!(matches!(a, Structure::Lt(_)));
}
