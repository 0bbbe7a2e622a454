//! Small categories for property checks: an exhaustive enumeration up to
//! isomorphism and a deterministic mixed corpus.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decalage::dec;
use crate::fincat::{canonical_key, coproduct, FinCat, Mor, Obj};

pub const CORPUS_MAX_OBJECTS: usize = 5;
pub const CORPUS_MAX_MORPHISMS: usize = 12;
pub const DEFAULT_CORPUS_SEED: u64 = 0x5eed;

/// Every category with `1..=max_objects` objects and at most
/// `max_morphisms` morphisms (identities included), one per isomorphism
/// class, ordered by size.
pub fn enumerate_categories(max_objects: usize, max_morphisms: usize) -> Vec<FinCat> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for n in 1..=max_objects {
        for total in n..=max_morphisms {
            let k = total - n;
            for ends in hom_shapes(n, k) {
                for c in compositions(n, &ends) {
                    if seen.insert(canonical_key(&c)) {
                        out.push(c);
                    }
                }
            }
        }
    }
    out
}

/// Lists of `(dom, cod)` for `k` non-identity arrows, sorted, so that each
/// multiset of endpoints is produced once.
fn hom_shapes(n: usize, k: usize) -> Vec<Vec<(Obj, Obj)>> {
    let pairs: Vec<(Obj, Obj)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(pairs: &[(Obj, Obj)], start: usize, k: usize, cur: &mut Vec<(Obj, Obj)>, out: &mut Vec<Vec<(Obj, Obj)>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for p in start..pairs.len() {
            cur.push(pairs[p]);
            rec(pairs, p, k, cur, out);
            cur.pop();
        }
    }
    rec(&pairs, 0, k, &mut cur, &mut out);
    out
}

/// All associative composition tables on the given arrows.
fn compositions(n: usize, ends: &[(Obj, Obj)]) -> Vec<FinCat> {
    let k = ends.len();
    let dom = |m: Mor| if m < n { m } else { ends[m - n].0 };
    let cod = |m: Mor| if m < n { m } else { ends[m - n].1 };
    let hom = |a: Obj, b: Obj| -> Vec<Mor> {
        let mut v: Vec<Mor> = if a == b { vec![a] } else { Vec::new() };
        v.extend((0..k).filter(|&j| ends[j] == (a, b)).map(|j| n + j));
        v
    };
    let pairs: Vec<(Mor, Mor)> = (n..n + k)
        .flat_map(|g| (n..n + k).map(move |f| (g, f)))
        .filter(|&(g, f)| dom(g) == cod(f))
        .collect();
    let slot: HashMap<(Mor, Mor), usize> = pairs.iter().enumerate().map(|(s, &p)| (p, s)).collect();
    let options: Vec<Vec<Mor>> = pairs.iter().map(|&(g, f)| hom(dom(f), cod(g))).collect();
    let triples: Vec<(Mor, Mor, Mor)> = pairs
        .iter()
        .flat_map(|&(h, g)| pairs.iter().filter(move |&&(g2, _)| g2 == g).map(move |&(_, f)| (h, g, f)))
        .collect();
    let mut table: Vec<Option<Mor>> = vec![None; pairs.len()];
    let mut out = Vec::new();

    fn comp(g: Mor, f: Mor, n: usize, slot: &HashMap<(Mor, Mor), usize>, table: &[Option<Mor>]) -> Option<Mor> {
        if g < n {
            return Some(f);
        }
        if f < n {
            return Some(g);
        }
        table[slot[&(g, f)]]
    }

    #[allow(clippy::too_many_arguments)]
    fn rec(
        s: usize,
        n: usize,
        pairs: &[(Mor, Mor)],
        options: &[Vec<Mor>],
        triples: &[(Mor, Mor, Mor)],
        slot: &HashMap<(Mor, Mor), usize>,
        table: &mut Vec<Option<Mor>>,
        out: &mut Vec<Vec<Mor>>,
    ) {
        for &(h, g, f) in triples {
            let left = comp(h, g, n, slot, table).and_then(|hg| comp(hg, f, n, slot, table));
            let right = comp(g, f, n, slot, table).and_then(|gf| comp(h, gf, n, slot, table));
            if let (Some(a), Some(b)) = (left, right) {
                if a != b {
                    return;
                }
            }
        }
        if s == pairs.len() {
            out.push(table.iter().map(|v| v.unwrap()).collect());
            return;
        }
        for &o in &options[s] {
            table[s] = Some(o);
            rec(s + 1, n, pairs, options, triples, slot, table, out);
        }
        table[s] = None;
    }

    let mut tables = Vec::new();
    rec(0, n, &pairs, &options, &triples, &slot, &mut table, &mut tables);
    for t in tables {
        let names = (0..n).map(|x| format!("o{x}")).collect();
        let arrows = ends
            .iter()
            .enumerate()
            .map(|(j, &(a, b))| (format!("m{j}"), a, b))
            .collect();
        out.push(FinCat::build(names, arrows, |g, f| t[slot[&(g, f)]]));
    }
    out
}

/// Posets on `n` points up to isomorphism, each given by a strict order
/// contained in the natural order of `0..n`.
pub fn enumerate_posets(n: usize, max_morphisms: usize) -> Vec<FinCat> {
    let names: Vec<String> = (0..n).map(|k| char::from(b'a' + k as u8).to_string()).collect();
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..1 << slots.len() {
        let rel: HashSet<(usize, usize)> = slots
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        if n + rel.len() > max_morphisms {
            continue;
        }
        let transitive = rel
            .iter()
            .all(|&(a, b)| rel.iter().filter(|&&(c, _)| c == b).all(|&(_, d)| rel.contains(&(a, d))));
        if !transitive {
            continue;
        }
        let c = FinCat::poset(&name_refs, |x, y| x == y || rel.contains(&(x, y)));
        if seen.insert(canonical_key(&c)) {
            out.push(c);
        }
    }
    out
}

/// A deterministic corpus of small categories: posets, small monoids,
/// décalages, coproducts and seeded random coproducts.
pub fn corpus(seed: u64) -> Vec<(String, FinCat)> {
    let fits = |c: &FinCat| c.num_objects() <= CORPUS_MAX_OBJECTS && c.num_morphisms() <= CORPUS_MAX_MORPHISMS;
    let mut out: Vec<(String, FinCat)> = Vec::new();
    for n in 1..=5 {
        for (k, p) in enumerate_posets(n, CORPUS_MAX_MORPHISMS).into_iter().enumerate() {
            out.push((format!("poset{n}.{k}"), p));
        }
    }
    let monoids: Vec<FinCat> = enumerate_categories(1, 3).into_iter().filter(|c| c.num_morphisms() >= 2).collect();
    for (k, m) in monoids.iter().enumerate() {
        out.push((format!("monoid{}.{k}", m.num_morphisms()), m.clone()));
    }
    let small: Vec<(String, FinCat)> = enumerate_categories(2, 4)
        .into_iter()
        .enumerate()
        .filter(|(_, c)| c.num_objects() == 2)
        .map(|(k, c)| (format!("cat2.{k}"), c))
        .collect();
    out.extend(small);
    for (name, base) in [
        ("arrow", FinCat::arrow()),
        ("chain3", FinCat::poset(&["a", "b", "c"], |x, y| x <= y)),
        ("monoid2", monoids[0].clone()),
    ] {
        let d = dec(&base).cat;
        if fits(&d) {
            out.push((format!("dec.{name}"), d));
        }
    }
    let pieces: Vec<(String, FinCat)> = out.clone();
    let arrow_and_monoid = coproduct(&[FinCat::arrow(), monoids[1].clone()]).cat;
    out.push(("sum.arrow+monoid".into(), arrow_and_monoid));
    out.push(("sum.point+point".into(), FinCat::discrete(2)));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut added = 0;
    while added < 12 {
        let parts = rng.gen_range(2..=3);
        let chosen: Vec<&(String, FinCat)> = pieces.choose_multiple(&mut rng, parts).collect();
        let cats: Vec<FinCat> = chosen.iter().map(|(_, c)| c.clone()).collect();
        let sum = coproduct(&cats).cat;
        if fits(&sum) {
            let names: Vec<&str> = chosen.iter().map(|(n, _)| n.as_str()).collect();
            out.push((format!("sum.{}", names.join("+")), sum));
            added += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::check_category;

    #[test]
    fn monoid_counts() {
        let cats = enumerate_categories(1, 4);
        let by_order: Vec<usize> = (1..=4).map(|m| cats.iter().filter(|c| c.num_morphisms() == m).count()).collect();
        assert_eq!(by_order, vec![1, 2, 7, 35]);
        assert!(cats.iter().all(|c| check_category(c).is_ok()));
    }

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (1..=4).map(|n| enumerate_posets(n, 100).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 16]);
    }

    #[test]
    fn two_object_categories() {
        let cats = enumerate_categories(2, 3);
        let two: Vec<&FinCat> = cats.iter().filter(|c| c.num_objects() == 2).collect();
        // discrete, the arrow, and the discrete pair with an idempotent or
        // an involution on one object
        assert_eq!(two.len(), 4);
    }

    #[test]
    fn corpus_is_deterministic_and_valid() {
        let a = corpus(DEFAULT_CORPUS_SEED);
        let b = corpus(DEFAULT_CORPUS_SEED);
        assert!(a.len() >= 50);
        assert_eq!(a.len(), b.len());
        for ((n1, c1), (n2, c2)) in a.iter().zip(&b) {
            assert_eq!(n1, n2);
            assert_eq!(c1, c2);
            assert!(check_category(c1).is_ok(), "{n1}");
            assert!(c1.num_objects() <= CORPUS_MAX_OBJECTS && c1.num_morphisms() <= CORPUS_MAX_MORPHISMS);
        }
    }
}
