//! The skeleton 𝕊 of finite sets: maps `m → n` between `{1..m}` and
//! `{1..n}`, their fibres and fibre maps.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::fincat::{FinCat, Functor, LtCat, Mor, Obj};
use crate::operadic::OperadicStructure;
use crate::report::Report;

/// A function `{1..m} → {1..n}`, stored as its list of 1-based values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SMap {
    target: usize,
    values: Vec<usize>,
}

impl SMap {
    pub fn new(values: Vec<usize>, target: usize) -> Result<SMap> {
        if let Some(&v) = values.iter().find(|&&v| v == 0 || v > target) {
            return Err(Error::OutOfRange {
                what: "SMap target",
                index: v,
                size: target,
            });
        }
        Ok(SMap { target, values })
    }

    pub fn identity(n: usize) -> SMap {
        SMap {
            target: n,
            values: (1..=n).collect(),
        }
    }

    pub fn unique_to_one(m: usize) -> SMap {
        SMap {
            target: 1,
            values: vec![1; m],
        }
    }

    pub fn source(&self) -> usize {
        self.values.len()
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// Image of the 1-based element `j`.
    pub fn apply(&self, j: usize) -> usize {
        self.values[j - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.target == self.values.len() && self.values.iter().enumerate().all(|(k, &v)| v == k + 1)
    }

    pub fn is_bijective(&self) -> bool {
        if self.target != self.values.len() {
            return false;
        }
        let mut seen = vec![false; self.target];
        self.values.iter().all(|&v| !std::mem::replace(&mut seen[v - 1], true))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SMap) -> Result<SMap> {
        if other.target != self.source() {
            return Err(Error::SizeMismatch(format!(
                "cannot compose {self} after {other}: {} ≠ {}",
                other.target,
                self.source()
            )));
        }
        Ok(SMap {
            target: self.target,
            values: other.values.iter().map(|&j| self.apply(j)).collect(),
        })
    }

    /// All maps `m → n` in lexicographic order of their value lists.
    pub fn all(m: usize, n: usize) -> Vec<SMap> {
        if n == 0 {
            return if m == 0 { vec![SMap::identity(0)] } else { Vec::new() };
        }
        let mut out = Vec::new();
        let mut cur = vec![1; m];
        loop {
            out.push(SMap {
                target: n,
                values: cur.clone(),
            });
            let mut k = m;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if cur[k] < n {
                    cur[k] += 1;
                    break;
                }
                cur[k] = 1;
            }
        }
    }
}

impl fmt::Display for SMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, v) in self.values.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// The fibre `φ⁻¹(i)` of a map, as its size and its monotone inclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibreData {
    pub k: usize,
    pub eps: SMap,
}

pub fn fibre(phi: &SMap, i: usize) -> Result<FibreData> {
    if i == 0 || i > phi.target {
        return Err(Error::OutOfRange {
            what: "fibre index",
            index: i,
            size: phi.target,
        });
    }
    let pre: Vec<usize> = (1..=phi.source()).filter(|&j| phi.apply(j) == i).collect();
    Ok(FibreData {
        k: pre.len(),
        eps: SMap {
            target: phi.source(),
            values: pre,
        },
    })
}

/// Size of `φ⁻¹(i)`.
pub fn fibre_size(phi: &SMap, i: usize) -> usize {
    phi.values.iter().filter(|&&v| v == i).count()
}

/// The fibre map `ψ^φ_i : (φψ)⁻¹(i) → φ⁻¹(i)`.
pub fn fibre_map(psi: &SMap, phi: &SMap, i: usize) -> Result<SMap> {
    let phipsi = phi.compose(psi)?;
    let top = fibre(&phipsi, i)?;
    let bottom = fibre(phi, i)?;
    let pos: HashMap<usize, usize> = bottom.eps.values.iter().enumerate().map(|(k, &v)| (v, k + 1)).collect();
    let values = top.eps.values.iter().map(|&l| pos[&psi.apply(l)]).collect();
    Ok(SMap {
        target: bottom.k,
        values,
    })
}

/// A functor into 𝕊: a size per object and a map per morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Card {
    pub obj: Vec<usize>,
    pub mor: Vec<SMap>,
}

impl Card {
    /// The constant functor at `{1}`.
    pub fn unary(c: &FinCat) -> Card {
        Card {
            obj: vec![1; c.num_objects()],
            mor: vec![SMap::identity(1); c.num_morphisms()],
        }
    }
}

pub fn check_card(c: &FinCat, card: &Card) -> Report {
    let mut r = Report::new();
    if card.obj.len() != c.num_objects() || card.mor.len() != c.num_morphisms() {
        r.push("typing", "cardinality tables do not match the category");
        return r;
    }
    for f in c.morphisms() {
        let m = &card.mor[f];
        if m.source() != card.obj[c.dom(f)] || m.target() != card.obj[c.cod(f)] {
            r.push(
                "typing",
                format!("|{}| = {m} is not a map {} → {}", c.mor_name(f), card.obj[c.dom(f)], card.obj[c.cod(f)]),
            );
        }
    }
    if r.has("typing") {
        return r;
    }
    for x in c.objects() {
        if !card.mor[c.id(x)].is_identity() {
            r.push("cardinality functor", format!("|id_{}| is not an identity", c.obj_name(x)));
        }
    }
    for (g, f) in c.composable_pairs() {
        let h = c.comp(g, f);
        if card.mor[g].compose(&card.mor[f]).ok().as_ref() != Some(&card.mor[h]) {
            r.push(
                "cardinality functor",
                format!("|{} ∘ {}| ≠ |{}| ∘ |{}|", c.mor_name(g), c.mor_name(f), c.mor_name(g), c.mor_name(f)),
            );
        }
    }
    r
}

/// The full subcategory of 𝕊 on `{0..N}`, with each morphism's map.
#[derive(Clone, Debug)]
pub struct TruncatedS {
    pub cat: FinCat,
    pub maps: Vec<SMap>,
    pub index: HashMap<SMap, Mor>,
}

impl TruncatedS {
    pub fn object(&self, n: usize) -> Obj {
        n
    }

    pub fn morphism(&self, phi: &SMap) -> Option<Mor> {
        self.index.get(phi).copied()
    }

    pub fn map(&self, f: Mor) -> &SMap {
        &self.maps[f]
    }
}

pub fn smap_name(phi: &SMap) -> String {
    let digits: Vec<String> = phi.values.iter().map(|v| v.to_string()).collect();
    format!("s{}_{}_{}", phi.source(), phi.target, digits.join("."))
}

pub fn truncated_s(n_max: usize) -> TruncatedS {
    let n_obj = n_max + 1;
    let mut maps: Vec<SMap> = (0..n_obj).map(SMap::identity).collect();
    let mut arrows = Vec::new();
    for m in 0..n_obj {
        for n in 0..n_obj {
            for phi in SMap::all(m, n) {
                if m == n && phi.is_identity() {
                    continue;
                }
                arrows.push((smap_name(&phi), m, n));
                maps.push(phi);
            }
        }
    }
    let index: HashMap<SMap, Mor> = maps.iter().enumerate().map(|(k, p)| (p.clone(), k)).collect();
    let names = (0..n_obj).map(|k| k.to_string()).collect();
    let cat = FinCat::build(names, arrows, |g, f| index[&maps[g].compose(&maps[f]).unwrap()]);
    TruncatedS { cat, maps, index }
}

/// 𝕊 truncated at `N` with its own operadic structure: terminal `1`,
/// identity cardinality, fibres and fibre maps computed in 𝕊.
pub fn s_operadic(n_max: usize) -> OperadicStructure {
    assert!(n_max >= 1, "the truncation must contain the terminal object 1");
    let t = truncated_s(n_max);
    let c = &t.cat;
    let lt = LtCat::new(c.clone(), vec![t.object(1)]).expect("1 is terminal in 𝕊");
    let card = Card {
        obj: c.objects().collect(),
        mor: t.maps.clone(),
    };
    let mut fibre_obj = BTreeMap::new();
    let mut fibre_mor = BTreeMap::new();
    for f in c.morphisms() {
        for i in 1..=c.cod(f) {
            fibre_obj.insert((f, i), t.object(fibre_size(t.map(f), i)));
        }
    }
    for (f, g) in c.composable_pairs() {
        for i in 1..=c.cod(f) {
            let m = fibre_map(t.map(g), t.map(f), i).expect("composable");
            fibre_mor.insert((g, f, i), t.morphism(&m).expect("fibres stay within the truncation"));
        }
    }
    OperadicStructure {
        lt,
        card,
        fibre_obj,
        fibre_mor,
        relabel: None,
    }
}

/// The surjections between `1..=N` as a sub-operadic category of 𝕊: fibres
/// of surjections are non-empty and their fibre maps are again surjective.
/// Object `k` is the set with `k + 1` elements.
pub fn surjections_operadic(n_max: usize) -> OperadicStructure {
    assert!(n_max >= 1, "the terminal object 1 is required");
    let sizes: Vec<usize> = (1..=n_max).collect();
    let mut maps: Vec<SMap> = sizes.iter().map(|&n| SMap::identity(n)).collect();
    let mut arrows = Vec::new();
    for &m in &sizes {
        for &n in &sizes {
            for phi in SMap::all(m, n) {
                let onto = (1..=n).all(|i| phi.values.contains(&i));
                if !onto || (m == n && phi.is_identity()) {
                    continue;
                }
                arrows.push((smap_name(&phi), m - 1, n - 1));
                maps.push(phi);
            }
        }
    }
    let index: HashMap<SMap, Mor> = maps.iter().enumerate().map(|(k, p)| (p.clone(), k)).collect();
    let names = sizes.iter().map(|n| n.to_string()).collect();
    let c = FinCat::build(names, arrows, |g, f| index[&maps[g].compose(&maps[f]).unwrap()]);
    let lt = LtCat::new(c.clone(), vec![0]).expect("1 is terminal among surjections");
    let card = Card {
        obj: sizes.clone(),
        mor: maps.clone(),
    };
    let mut fibre_obj = BTreeMap::new();
    let mut fibre_mor = BTreeMap::new();
    for f in c.morphisms() {
        for i in 1..=maps[f].target {
            fibre_obj.insert((f, i), fibre_size(&maps[f], i) - 1);
        }
    }
    for (f, g) in c.composable_pairs() {
        for i in 1..=maps[f].target {
            let m = fibre_map(&maps[g], &maps[f], i).expect("composable");
            fibre_mor.insert((g, f, i), index[&m]);
        }
    }
    OperadicStructure {
        lt,
        card,
        fibre_obj,
        fibre_mor,
        relabel: None,
    }
}

/// The inclusion of `truncated_s(n)` into `truncated_s(m)` for `n ≤ m`.
pub fn truncation_inclusion(small: &TruncatedS, big: &TruncatedS) -> Functor {
    Functor::new(
        small.cat.objects().collect(),
        small.maps.iter().map(|phi| big.index[phi]).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{check_category, connected_components};
    use proptest::prelude::*;

    fn s(v: &[usize], n: usize) -> SMap {
        SMap::new(v.to_vec(), n).unwrap()
    }

    #[test]
    fn surjections_are_operadic() {
        let s = surjections_operadic(3);
        assert_eq!(s.cat().num_morphisms(), 17);
        let r = crate::operadic::check_operadic(&s).unwrap();
        assert!(r.is_ok(), "{r}");
    }

    #[test]
    fn fibre_examples() {
        let phi = s(&[1, 2, 1], 2);
        let fd = fibre(&phi, 1).unwrap();
        assert_eq!(fd.k, 2);
        assert_eq!(fd.eps, s(&[1, 3], 3));
        let id = SMap::identity(3);
        assert_eq!(fibre(&id, 2).unwrap().eps, s(&[2], 3));
        let t = SMap::unique_to_one(4);
        assert_eq!(fibre(&t, 1).unwrap().eps, SMap::identity(4));
        assert!(fibre(&phi, 3).is_err());
        assert!(fibre(&phi, 0).is_err());
    }

    #[test]
    fn fibre_map_examples() {
        let psi = s(&[3, 1], 3);
        let phi = s(&[1, 2, 1], 2);
        assert_eq!(fibre_map(&psi, &phi, 1).unwrap(), s(&[2, 1], 2));
        let id = SMap::identity(3);
        assert_eq!(fibre_map(&id, &phi, 1).unwrap(), SMap::identity(2));
        let to_one = SMap::unique_to_one(3);
        assert_eq!(fibre_map(&psi, &to_one, 1).unwrap(), psi);
        assert!(fibre_map(&phi, &phi, 1).is_err());
    }

    #[test]
    fn truncated_s_counts() {
        // Σ_{m,n ≤ N} n^m with 0^0 = 1
        let count = |n_max: usize| -> usize {
            (0..=n_max)
                .flat_map(|m| (0..=n_max).map(move |n| (n as u64).pow(m as u32) as usize))
                .sum()
        };
        for n_max in 0..=3 {
            let t = truncated_s(n_max);
            assert_eq!(t.cat.num_objects(), n_max + 1);
            assert_eq!(t.cat.num_morphisms(), count(n_max));
            assert!(check_category(&t.cat).is_ok());
        }
        assert_eq!(truncated_s(1).cat.num_morphisms(), 3);
        assert_eq!(truncated_s(2).cat.num_morphisms(), 11);
        assert_eq!(connected_components(&truncated_s(2).cat).len(), 1);
    }

    #[test]
    fn s_operadic_fibres() {
        let s = s_operadic(3);
        let c = s.cat();
        for x in c.objects() {
            for i in 1..=x {
                assert_eq!(s.fib(c.id(x), i), Some(1));
            }
        }
        let tau3 = s.lt.tau(3);
        assert_eq!(s.fib(tau3, 1), Some(3));
        assert_eq!(s.lt.terminals(), &[1]);
    }

    #[test]
    fn inclusion_of_truncations_is_operadic() {
        use crate::operadic::check_operadic_functor;
        let (s2, s3) = (s_operadic(2), s_operadic(3));
        let inc = truncation_inclusion(&truncated_s(2), &truncated_s(3));
        let r = check_operadic_functor(&s2, &s3, &inc, None);
        assert!(r.is_ok(), "{r}");
        // shifting one fibre map breaks preservation at exactly that arrow
        let mut bad = s2.clone();
        let key = *bad.fibre_mor.keys().find(|&&(g, f, _)| !s2.cat().is_identity(g) && !s2.cat().is_identity(f)).unwrap();
        let m = bad.fibre_mor[&key];
        let c = s2.cat();
        if let Some(alt) = c.hom(c.dom(m), c.cod(m)).into_iter().find(|&a| a != m) {
            bad.fibre_mor.insert(key, alt);
            let r = check_operadic_functor(&bad, &s3, &inc, None);
            assert_eq!(r.count("fibre maps"), 1, "{r}");
        }
    }

    #[test]
    fn display_is_bracketed() {
        assert_eq!(s(&[1, 2, 1], 2).to_string(), "[1 2 1]");
        assert_eq!(SMap::identity(0).to_string(), "[]");
    }

    fn arb_map(max: usize) -> impl Strategy<Value = SMap> {
        (0..=max, 1..=max).prop_flat_map(|(m, n)| {
            proptest::collection::vec(1..=n, m).prop_map(move |v| SMap::new(v, n).unwrap())
        })
    }

    fn arb_chain() -> impl Strategy<Value = (SMap, SMap, SMap)> {
        (0..=4usize, 0..=4usize, 1..=4usize, 1..=4usize).prop_flat_map(|(l0, l, m, n)| {
            (
                proptest::collection::vec(1..=l.max(1), if l == 0 { 0 } else { l0 }),
                proptest::collection::vec(1..=m, l),
                proptest::collection::vec(1..=n, m),
            )
                .prop_map(move |(a, b, c)| {
                    let la = if l == 0 { 0 } else { l.max(1) };
                    (SMap::new(a, la).unwrap(), SMap::new(b, m).unwrap(), SMap::new(c, n).unwrap())
                })
        })
    }

    proptest! {
        #[test]
        fn fibre_sizes_sum_to_source(phi in arb_map(5)) {
            let total: usize = (1..=phi.target()).map(|i| fibre(&phi, i).unwrap().k).sum();
            prop_assert_eq!(total, phi.source());
            for i in 1..=phi.target() {
                let fd = fibre(&phi, i).unwrap();
                prop_assert!(fd.eps.values().windows(2).all(|w| w[0] < w[1]));
                prop_assert!(fd.eps.values().iter().all(|&j| phi.apply(j) == i));
            }
        }

        #[test]
        fn fibre_map_is_the_unique_filler((psi2, psi, phi) in arb_chain()) {
            let _ = psi2;
            for i in 1..=phi.target() {
                let got = fibre_map(&psi, &phi, i).unwrap();
                let phipsi = phi.compose(&psi).unwrap();
                let top = fibre(&phipsi, i).unwrap();
                let bottom = fibre(&phi, i).unwrap();
                let fillers: Vec<SMap> = SMap::all(top.k, bottom.k)
                    .into_iter()
                    .filter(|c| bottom.eps.compose(c).unwrap() == psi.compose(&top.eps).unwrap())
                    .collect();
                prop_assert_eq!(fillers, vec![got]);
            }
        }

        #[test]
        fn fibre_maps_are_functorial((psi2, psi, phi) in arb_chain()) {
            for i in 1..=phi.target() {
                let whole = fibre_map(&psi.compose(&psi2).unwrap(), &phi, i).unwrap();
                let outer = fibre_map(&psi, &phi, i).unwrap();
                let inner = fibre_map(&psi2, &phi.compose(&psi).unwrap(), i).unwrap();
                prop_assert_eq!(whole, outer.compose(&inner).unwrap());
                let id = fibre_map(&SMap::identity(phi.source()), &phi, i).unwrap();
                prop_assert!(id.is_identity());
            }
        }
    }
}
