//! Builders for concrete operadic categories: décalages, finite
//! sub-probability spaces, disintegration of probability spaces, and
//! pointed subsets of a finite universe.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::decalage::tilde_d;
use crate::error::{Error, Result};
use crate::fincat::{FinCat, LtCat, Mor, Obj};
use crate::operadic::OperadicStructure;
use crate::sskel::{fibre, fibre_map, Card, SMap};

pub type Weight = Ratio<i64>;

pub const DEFAULT_CLOSURE_BOUND: usize = 64;

/// `D(C)` with identities as terminals, the fibre of `g : fg → f` being the
/// object `g` and fibre maps `h : gh → g`.
pub fn ex_decalage_unary(c: &FinCat) -> OperadicStructure {
    let (d, lt) = tilde_d(c);
    let dc = &d.cat;
    let fibre_obj = dc.morphisms().map(|m| ((m, 1), d.object(d.triangle(m).0))).collect();
    let mut fibre_mor = BTreeMap::new();
    for (big_g, big_h) in dc.composable_pairs() {
        let (h, _) = d.triangle(big_h);
        let (g, _) = d.triangle(big_g);
        fibre_mor.insert((big_h, big_g, 1), d.morphism(h, g).expect("h : gh → g is a triangle"));
    }
    OperadicStructure {
        lt,
        card: Card::unary(dc),
        fibre_obj,
        fibre_mor,
        relabel: None,
    }
}

/// Parses a weight such as `1/4` or `0`.
pub fn parse_weight(s: &str) -> Result<Weight> {
    let bad = || Error::InvalidWeights(format!("`{s}` is not a rational number"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Weight::new(n, d))
        }
        None => Ok(Weight::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

/// `1/4|1/4|1/2`; the empty list is `-`.
pub fn weights_name(r: &[Weight]) -> String {
    if r.is_empty() {
        return "-".into();
    }
    r.iter().map(|w| w.to_string()).collect::<Vec<_>>().join("|")
}

pub fn parse_weights(s: &str) -> Result<Vec<Weight>> {
    if s == "-" {
        return Ok(Vec::new());
    }
    s.split(['|', ',']).map(parse_weight).collect()
}

fn check_sub_probability(r: &[Weight]) -> Result<()> {
    let mut sum = Weight::zero();
    for w in r {
        if *w < Weight::zero() || *w > Weight::one() {
            return Err(Error::InvalidWeights(format!("{} has an entry outside [0, 1]", weights_name(r))));
        }
        sum += w;
    }
    if sum > Weight::one() {
        return Err(Error::InvalidWeights(format!("{} has total mass above 1", weights_name(r))));
    }
    Ok(())
}

fn mass(r: &[Weight]) -> Weight {
    r.iter().fold(Weight::zero(), |a, b| a + b)
}

/// Maps `φ : s → r` of 𝕊 with `r_i = Σ_{φ j = i} s_j`.
fn weight_maps(s: &[Weight], r: &[Weight]) -> Vec<SMap> {
    SMap::all(s.len(), r.len())
        .into_iter()
        .filter(|phi| {
            let mut sums = vec![Weight::zero(); r.len()];
            for (j, &i) in phi.values().iter().enumerate() {
                sums[i - 1] += s[j];
            }
            sums == r
        })
        .collect()
}

/// The full category on a list of weighted lists with weight-preserving
/// maps, and the index of each map.
struct Weighted {
    cat: FinCat,
    maps: Vec<SMap>,
    index: HashMap<(Obj, Obj, SMap), Mor>,
}

fn weighted_category(objs: &[Vec<Weight>]) -> Weighted {
    let n = objs.len();
    let mut maps: Vec<SMap> = objs.iter().map(|r| SMap::identity(r.len())).collect();
    let mut ends: Vec<(Obj, Obj)> = (0..n).map(|x| (x, x)).collect();
    let mut arrows = Vec::new();
    for (a, s) in objs.iter().enumerate() {
        for (b, r) in objs.iter().enumerate() {
            for phi in weight_maps(s, r) {
                if a == b && phi.is_identity() {
                    continue;
                }
                let digits: Vec<String> = phi.values().iter().map(|v| v.to_string()).collect();
                arrows.push((format!("{}>{}@{}", weights_name(s), weights_name(r), digits.join(".")), a, b));
                maps.push(phi);
                ends.push((a, b));
            }
        }
    }
    let index: HashMap<(Obj, Obj, SMap), Mor> = maps
        .iter()
        .zip(&ends)
        .enumerate()
        .map(|(k, (p, &(a, b)))| ((a, b, p.clone()), k))
        .collect();
    let names = objs.iter().map(|r| weights_name(r)).collect();
    let cat = FinCat::build(names, arrows, |g, f| {
        index[&(ends[f].0, ends[g].1, maps[g].compose(&maps[f]).unwrap())]
    });
    Weighted { cat, maps, index }
}

/// Grows `seeds` by `step` (applied to every map between current objects)
/// until nothing new appears.
fn closure(
    seeds: Vec<Vec<Weight>>,
    bound: usize,
    step: impl Fn(&[Weight], &[Weight], &SMap) -> Vec<Vec<Weight>>,
) -> Result<Vec<Vec<Weight>>> {
    let mut objs: Vec<Vec<Weight>> = Vec::new();
    let mut seen: HashSet<Vec<Weight>> = HashSet::new();
    for s in seeds {
        if seen.insert(s.clone()) {
            objs.push(s);
        }
    }
    let mut done = 0;
    loop {
        let before = objs.len();
        let mut fresh = Vec::new();
        for a in 0..before {
            for b in 0..before {
                if a < done && b < done {
                    continue;
                }
                for phi in weight_maps(&objs[a], &objs[b]) {
                    for new in step(&objs[a], &objs[b], &phi) {
                        if seen.insert(new.clone()) {
                            fresh.push(new);
                        }
                    }
                }
            }
        }
        done = before;
        objs.extend(fresh);
        if objs.len() > bound {
            return Err(Error::BoundExceeded(format!("the closure has more than {bound} objects")));
        }
        if objs.len() == before {
            return Ok(objs);
        }
    }
}

fn subsequence(s: &[Weight], eps: &SMap) -> Vec<Weight> {
    eps.values().iter().map(|&j| s[j - 1]).collect()
}

/// Finite sub-probability spaces generated by `seeds` under fibres and
/// total-mass singletons.
pub fn ex_sub_prob(seeds: &[Vec<Weight>], bound: usize) -> Result<OperadicStructure> {
    if seeds.is_empty() {
        return Err(Error::InvalidWeights("at least one seed is required".into()));
    }
    for s in seeds {
        check_sub_probability(s)?;
    }
    let mut start: Vec<Vec<Weight>> = seeds.to_vec();
    start.extend(seeds.iter().map(|s| vec![mass(s)]));
    let objs = closure(start, bound, |s, r, phi| {
        let mut out: Vec<Vec<Weight>> = (1..=r.len())
            .map(|i| subsequence(s, &fibre(phi, i).unwrap().eps))
            .collect();
        let extra: Vec<Vec<Weight>> = out.iter().map(|f| vec![mass(f)]).collect();
        out.extend(extra);
        out
    })?;
    let w = weighted_category(&objs);
    let c = &w.cat;
    let obj_index: HashMap<&Vec<Weight>, Obj> = objs.iter().enumerate().map(|(k, r)| (r, k)).collect();
    let terminals: Vec<Obj> = c.objects().filter(|&x| objs[x].len() == 1).collect();
    let lt = LtCat::from_terminal_set(c.clone(), &terminals)?;
    let card = Card {
        obj: objs.iter().map(Vec::len).collect(),
        mor: w.maps.clone(),
    };
    let mut fibre_obj = BTreeMap::new();
    for f in c.morphisms() {
        for i in 1..=objs[c.cod(f)].len() {
            let eps = fibre(&w.maps[f], i)?.eps;
            fibre_obj.insert((f, i), obj_index[&subsequence(&objs[c.dom(f)], &eps)]);
        }
    }
    let mut fibre_mor = BTreeMap::new();
    for (f, g) in c.composable_pairs() {
        for i in 1..=objs[c.cod(f)].len() {
            let m = fibre_map(&w.maps[g], &w.maps[f], i)?;
            let a = fibre_obj[&(c.comp(f, g), i)];
            let b = fibre_obj[&(f, i)];
            fibre_mor.insert((g, f, i), w.index[&(a, b, m)]);
        }
    }
    Ok(OperadicStructure {
        lt,
        card,
        fibre_obj,
        fibre_mor,
        relabel: None,
    })
}

fn normalise(r: &[Weight]) -> Vec<Weight> {
    let m = mass(r);
    r.iter().map(|w| w / m).collect()
}

/// Positions `p_1 < … < p_k` of the non-zero entries.
fn support(r: &[Weight]) -> Vec<usize> {
    (1..=r.len()).filter(|&i| !r[i - 1].is_zero()).collect()
}

/// `|φ|₁`: the restriction of `φ` to non-zero entries.
fn restricted(s: &[Weight], r: &[Weight], phi: &SMap) -> SMap {
    let p = support(r);
    let values = support(s)
        .into_iter()
        .map(|q| p.iter().position(|&x| x == phi.apply(q)).unwrap() + 1)
        .collect();
    SMap::new(values, p.len()).unwrap()
}

/// Finite probability spaces generated by `seeds` under normalised
/// fibres, with the disintegration structure.
pub fn ex_disintegration(seeds: &[Vec<Weight>], bound: usize) -> Result<OperadicStructure> {
    if seeds.is_empty() {
        return Err(Error::InvalidWeights("at least one seed is required".into()));
    }
    for s in seeds {
        check_sub_probability(s)?;
        if mass(s) != Weight::one() {
            return Err(Error::InvalidWeights(format!("{} does not have total mass 1", weights_name(s))));
        }
    }
    let mut start: Vec<Vec<Weight>> = vec![vec![Weight::one()]];
    start.extend(seeds.iter().cloned());
    let objs = closure(start, bound, |s, r, phi| {
        support(r)
            .into_iter()
            .map(|p| normalise(&subsequence(s, &fibre(phi, p).unwrap().eps)))
            .collect()
    })?;
    let w = weighted_category(&objs);
    let c = &w.cat;
    let obj_index: HashMap<&Vec<Weight>, Obj> = objs.iter().enumerate().map(|(k, r)| (r, k)).collect();
    let lt = LtCat::from_terminal_set(c.clone(), &[0])?;
    let card = Card {
        obj: objs.iter().map(|r| support(r).len()).collect(),
        mor: c
            .morphisms()
            .map(|f| restricted(&objs[c.dom(f)], &objs[c.cod(f)], &w.maps[f]))
            .collect(),
    };
    let mut fibre_obj = BTreeMap::new();
    for f in c.morphisms() {
        let p = support(&objs[c.cod(f)]);
        for (i, &pi) in p.iter().enumerate() {
            let eps = fibre(&w.maps[f], pi)?.eps;
            fibre_obj.insert((f, i + 1), obj_index[&normalise(&subsequence(&objs[c.dom(f)], &eps))]);
        }
    }
    let mut fibre_mor = BTreeMap::new();
    for (f, g) in c.composable_pairs() {
        let p = support(&objs[c.cod(f)]);
        for (i, &pi) in p.iter().enumerate() {
            let m = fibre_map(&w.maps[g], &w.maps[f], pi)?;
            let a = fibre_obj[&(c.comp(f, g), i + 1)];
            let b = fibre_obj[&(f, i + 1)];
            fibre_mor.insert((g, f, i + 1), w.index[&(a, b, m)]);
        }
    }
    Ok(OperadicStructure {
        lt,
        card,
        fibre_obj,
        fibre_mor,
        relabel: None,
    })
}

/// Pointed subsets of `{∗} ∪ letters`, written `*ab`, with basepoint
/// preserving maps; the zero object is `*`, kernels are literal preimages
/// of the basepoint and fibre maps are restrictions.
pub fn ex_pointed_sets(letters: &[char]) -> Result<OperadicStructure> {
    let n = letters.len();
    let universe: Vec<char> = std::iter::once('*').chain(letters.iter().copied()).collect();
    if letters.contains(&'*') || letters.iter().collect::<HashSet<_>>().len() != n {
        return Err(Error::Precondition("the universe must be distinct letters besides the basepoint".into()));
    }
    if n > 4 {
        return Err(Error::BoundExceeded("at most 4 letters besides the basepoint".into()));
    }
    let subsets: Vec<Vec<usize>> = (0..1usize << n)
        .map(|mask| std::iter::once(0).chain((0..n).filter(|b| mask >> b & 1 == 1).map(|b| b + 1)).collect())
        .collect();
    let name = |s: &[usize]| s.iter().map(|&e| universe[e]).collect::<String>();
    let sub_index: HashMap<&Vec<usize>, Obj> = subsets.iter().enumerate().map(|(k, s)| (s, k)).collect();
    // a map is stored as the image of each element, in order
    let mut maps: Vec<(Obj, Obj, Vec<usize>)> = subsets.iter().enumerate().map(|(k, s)| (k, k, s.clone())).collect();
    let mut arrows = Vec::new();
    for (a, s) in subsets.iter().enumerate() {
        for (b, t) in subsets.iter().enumerate() {
            for phi in SMap::all(s.len() - 1, t.len()) {
                let images: Vec<usize> = std::iter::once(0).chain(phi.values().iter().map(|&v| t[v - 1])).collect();
                if a == b && images == *s {
                    continue;
                }
                let label: Vec<String> = images.iter().map(|&e| universe[e].to_string()).collect();
                arrows.push((format!("{}>{}@{}", name(s), name(t), label.join(".")), a, b));
                maps.push((a, b, images));
            }
        }
    }
    let index: HashMap<(Obj, Obj, Vec<usize>), Mor> =
        maps.iter().enumerate().map(|(k, m)| (m.clone(), k)).collect();
    let apply = |m: Mor, e: usize| -> usize {
        let (a, _, ref images) = maps[m];
        images[subsets[a].iter().position(|&x| x == e).unwrap()]
    };
    let names = subsets.iter().map(|s| name(s)).collect();
    let c = FinCat::build(names, arrows, |g, f| {
        let images = subsets[maps[f].0].iter().map(|&e| apply(g, apply(f, e))).collect();
        index[&(maps[f].0, maps[g].1, images)]
    });
    let lt = LtCat::from_terminal_set(c.clone(), &[0])?;
    let kernel = |f: Mor| -> Obj {
        if c.is_identity(f) {
            return 0;
        }
        let k: Vec<usize> = subsets[c.dom(f)].iter().copied().filter(|&e| apply(f, e) == 0).collect();
        sub_index[&k]
    };
    let fibre_obj = c.morphisms().map(|f| ((f, 1), kernel(f))).collect();
    let mut fibre_mor = BTreeMap::new();
    for (f, g) in c.composable_pairs() {
        let a = kernel(c.comp(f, g));
        let b = kernel(f);
        let images = subsets[a].iter().map(|&e| apply(g, e)).collect();
        let m = *index
            .get(&(a, b, images))
            .ok_or_else(|| Error::Precondition("restriction leaves the kernel".into()))?;
        fibre_mor.insert((g, f, 1), m);
    }
    Ok(OperadicStructure {
        lt,
        card: Card::unary(&c),
        fibre_obj,
        fibre_mor,
        relabel: None,
    })
}

/// Whether the chosen kernel of every identity agrees with the literal
/// preimage of the basepoint.
pub fn pointed_kernel_override_consistent(s: &OperadicStructure) -> bool {
    let c = s.cat();
    c.objects().all(|x| {
        let name = c.obj_name(s.fib(c.id(x), 1).unwrap());
        name == "*"
    })
}

pub fn sub_prob_default_seeds() -> Vec<Vec<Weight>> {
    vec![vec![Weight::new(1, 4), Weight::new(1, 4), Weight::new(1, 2)]]
}

pub fn disintegration_default_seeds() -> Vec<Vec<Weight>> {
    vec![vec![Weight::new(1, 4); 4]]
}

/// The first few letters used for a pointed universe of size `n` (the
/// basepoint included).
pub fn pointed_letters(n: usize) -> Vec<char> {
    ('a'..='z').take(n.saturating_sub(1)).collect()
}
