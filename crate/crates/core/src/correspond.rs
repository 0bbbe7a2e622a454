//! Operadic structures as algebras: unary operadic categories are
//! `D̃`-algebras, lax-operadic categories are `D̃_m`-algebras, and operadic
//! categories are the algebras whose structure map is a strict triangle.

use std::collections::BTreeMap;

use crate::decalage::{dec, dec_functor, mult_mu, preserves_terminals, tilde_d, unit_eta, Dec};
use crate::error::{Error, Result};
use crate::fincat::{check_functor, search_functors, slice, Functor, LtCat, Mor, Obj};
use crate::moddec::{
    check_lax_triangle, check_strict, dm_object, tilde_dm_mor, tilde_dm_mult, tilde_dm_unit, Dm, LaxTriangleMor,
    LtOverS,
};
use crate::operadic::{check_operadic, check_unary, OperadicStructure};
use crate::report::Report;
use crate::sskel::{fibre, Card, SMap};

/// `D̃(C)`, `D̃D̃(C)` and the monad structure maps, built once per carrier.
#[derive(Clone, Debug)]
pub struct DecContext {
    pub lt: LtCat,
    pub d: Dec,
    pub dlt: LtCat,
    pub dd: Dec,
    pub eta: Functor,
    pub mu: Functor,
}

impl DecContext {
    pub fn new(lt: &LtCat) -> DecContext {
        let (d, dlt) = tilde_d(lt.cat());
        let dd = dec(&d.cat);
        let eta = unit_eta(lt, &d);
        let mu = mult_mu(&d, &dd);
        DecContext {
            lt: lt.clone(),
            d,
            dlt,
            dd,
            eta,
            mu,
        }
    }
}

/// A `D̃`-algebra: a terminal-preserving functor `D̃(C) → C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TildeDAlgebra {
    pub carrier: LtCat,
    pub act: Functor,
}

/// The copairing of the fibre functors of a unary structure.
pub fn unary_to_algebra(s: &OperadicStructure, d: &Dec) -> Result<TildeDAlgebra> {
    if !check_unary(s) {
        return Err(Error::NotUnary("some cardinality is not 1".into()));
    }
    let missing = || Error::Precondition("fibre table is incomplete".into());
    let obj_map = d
        .cat
        .objects()
        .map(|f| s.fib(d.arrow(f), 1).ok_or_else(missing))
        .collect::<Result<Vec<_>>>()?;
    let mor_map = d
        .cat
        .morphisms()
        .map(|m| {
            let (g, f) = d.triangle(m);
            s.fib_mor(g, f, 1).ok_or_else(missing)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TildeDAlgebra {
        carrier: s.lt.clone(),
        act: Functor::new(obj_map, mor_map),
    })
}

pub fn algebra_to_unary(a: &TildeDAlgebra, d: &Dec) -> Result<OperadicStructure> {
    let c = a.carrier.cat();
    let (_, dlt) = tilde_d(c);
    if !preserves_terminals(&dlt, &a.carrier, &a.act) {
        return Err(Error::NotTerminalPreserving("the action moves an identity off the chosen terminals".into()));
    }
    let fibre_obj = c.morphisms().map(|f| ((f, 1), a.act.obj(d.object(f)))).collect();
    let fibre_mor = d
        .triangles()
        .iter()
        .enumerate()
        .map(|(m, &(g, f))| ((g, f, 1), a.act.mor(m)))
        .collect();
    Ok(OperadicStructure {
        lt: a.carrier.clone(),
        card: Card::unary(c),
        fibre_obj,
        fibre_mor,
        relabel: None,
    })
}

/// Laws "unit" (`act ∘ η = id`) and "associativity"
/// (`act ∘ μ = act ∘ D̃(act)`), after checking `act` is a functor.
pub fn check_algebra_laws(ctx: &DecContext, act: &Functor) -> Report {
    let c = ctx.lt.cat();
    let mut r = check_functor(&ctx.d.cat, c, act);
    if !r.is_ok() {
        return r;
    }
    if !preserves_terminals(&ctx.dlt, &ctx.lt, act) {
        r.push("terminals", "the action moves a chosen terminal");
    }
    if ctx.eta.then(act) != Functor::identity(c) {
        r.push("unit", "act ∘ η ≠ id");
    }
    let d_act = dec_functor(&ctx.dd, &ctx.d, act);
    if ctx.mu.then(act) != d_act.then(act) {
        r.push("associativity", "act ∘ μ ≠ act ∘ D̃(act)");
    }
    r
}

pub const THM1_MAX_OBJECTS: usize = 3;
pub const THM1_MAX_MORPHISMS: usize = 6;

/// Both sides of the unary correspondence on one carrier.
#[derive(Clone, Debug)]
pub struct Thm1Outcome {
    /// Lawful terminal-preserving functors `D̃(C) → C`, sorted.
    pub algebras: Vec<Functor>,
    /// Unary structures passing every axiom, in enumeration order.
    pub structures: Vec<OperadicStructure>,
    /// `unary_to_algebra` of each structure, sorted.
    pub encoded: Vec<Functor>,
}

impl Thm1Outcome {
    pub fn is_bijection(&self) -> bool {
        let mut dedup = self.encoded.clone();
        dedup.dedup();
        dedup.len() == self.encoded.len() && self.encoded == self.algebras
    }
}

/// Enumerates algebras over `D̃` directly and unary operadic structures slice
/// by slice, independently of one another.
pub fn thm1_enumerate(lt: &LtCat, max_objects: usize, max_morphisms: usize) -> Result<Thm1Outcome> {
    let c = lt.cat();
    if c.num_objects() > max_objects || c.num_morphisms() > max_morphisms {
        return Err(Error::BoundExceeded(format!(
            "{} objects and {} morphisms exceed the bounds {max_objects}/{max_morphisms}",
            c.num_objects(),
            c.num_morphisms()
        )));
    }
    let ctx = DecContext::new(lt);
    let term_cands: Vec<Obj> = lt.terminals().to_vec();
    let all: Vec<Obj> = c.objects().collect();
    let cands: Vec<Vec<Obj>> = ctx
        .d
        .cat
        .objects()
        .map(|f| if c.is_identity(ctx.d.arrow(f)) { term_cands.clone() } else { all.clone() })
        .collect();
    let mut algebras = Vec::new();
    search_functors(&ctx.d.cat, c, Some(&cands), &mut |act| {
        let r = check_algebra_laws(&ctx, act);
        if r.is_ok() {
            algebras.push(act.clone());
        }
        true
    });
    algebras.sort();

    let mut per_slice = Vec::new();
    for x in c.objects() {
        let sl = slice(c, x);
        let cands: Vec<Vec<Obj>> = sl
            .arrows
            .iter()
            .map(|&f| if c.is_identity(f) { term_cands.clone() } else { all.clone() })
            .collect();
        let mut fs = Vec::new();
        search_functors(&sl.cat, c, Some(&cands), &mut |phi| {
            fs.push(phi.clone());
            true
        });
        per_slice.push((sl, fs));
    }
    let mut structures = Vec::new();
    let mut pick = vec![0usize; per_slice.len()];
    if per_slice.iter().all(|(_, fs)| !fs.is_empty()) {
        loop {
            let mut fibre_obj = BTreeMap::new();
            let mut fibre_mor = BTreeMap::new();
            for (k, (sl, fs)) in per_slice.iter().enumerate() {
                let phi = &fs[pick[k]];
                for (o, &f) in sl.arrows.iter().enumerate() {
                    fibre_obj.insert((f, 1), phi.obj(o));
                }
                for (m, &(g, f)) in sl.tris.iter().enumerate() {
                    fibre_mor.insert((g, f, 1), phi.mor(m));
                }
            }
            let s = OperadicStructure {
                lt: lt.clone(),
                card: Card::unary(c),
                fibre_obj,
                fibre_mor,
                relabel: None,
            };
            if check_operadic(&s)?.is_ok() {
                structures.push(s);
            }
            let mut k = 0;
            loop {
                if k == pick.len() {
                    break;
                }
                pick[k] += 1;
                if pick[k] < per_slice[k].1.len() {
                    break;
                }
                pick[k] = 0;
                k += 1;
            }
            if k == pick.len() {
                break;
            }
        }
    }
    let mut encoded = structures
        .iter()
        .map(|s| unary_to_algebra(s, &ctx.d).map(|a| a.act))
        .collect::<Result<Vec<_>>>()?;
    encoded.sort();
    Ok(Thm1Outcome {
        algebras,
        structures,
        encoded,
    })
}

/// One single-entry change of a fibre map table and the verdicts it got.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mutation {
    pub key: (Mor, Mor, usize),
    pub replacement: Mor,
    pub a4_fails: bool,
    pub unit_fails: bool,
    pub a5_fails: bool,
    pub assoc_fails: bool,
}

impl Mutation {
    pub fn agrees(&self) -> bool {
        self.a4_fails == self.unit_fails && self.a5_fails == self.assoc_fails
    }
}

/// Replaces one fibre map by a parallel morphism, keeping only changes
/// after which the fibres still form terminal-preserving functors, and
/// records the axiom verdicts next to the algebra-law verdicts.
pub fn mutation_lockstep(s: &OperadicStructure, limit: usize) -> Result<Vec<Mutation>> {
    let c = s.cat();
    let ctx = DecContext::new(&s.lt);
    let mut out = Vec::new();
    for key in s.fibre_mor_keys() {
        let m = s.fibre_mor[&key];
        for alt in c.hom(c.dom(m), c.cod(m)) {
            if alt == m {
                continue;
            }
            if out.len() >= limit {
                return Ok(out);
            }
            let mut t = s.clone();
            t.fibre_mor.insert(key, alt);
            let r = check_operadic(&t)?;
            if r.has("typing") || r.has("D3") || r.has("A2") {
                continue;
            }
            let a = unary_to_algebra(&t, &ctx.d)?;
            let laws = check_algebra_laws(&ctx, &a.act);
            out.push(Mutation {
                key,
                replacement: alt,
                a4_fails: r.has("A4"),
                unit_fails: laws.has("unit"),
                a5_fails: r.has("A5"),
                assoc_fails: laws.has("associativity"),
            });
        }
    }
    Ok(out)
}

/// A `D̃_m`-algebra: a lax triangle `D_m(C) → C` over 𝕊.
#[derive(Clone, Debug)]
pub struct TildeDmAlgebra {
    pub carrier: LtOverS,
    pub dm: Dm,
    pub act: LaxTriangleMor,
}

pub fn lax_to_dm_algebra(s: &OperadicStructure) -> Result<TildeDmAlgebra> {
    let rel = s.relabel.as_ref().ok_or(Error::MissingRelabel)?;
    let carrier = LtOverS::new(s.lt.clone(), s.card.clone())?;
    let dm = dm_object(&carrier)?;
    let missing = || Error::Precondition("fibre table is incomplete".into());
    let mut obj_map = Vec::new();
    let mut nu = Vec::new();
    for x in dm.cat().objects() {
        let (f, i) = dm.obj_tag(x);
        let y = s.fib(f, i).ok_or_else(missing)?;
        let gamma = rel.get(&(f, i)).ok_or_else(missing)?;
        if gamma.source() != dm.carrier.card.obj[x] || gamma.target() != s.card_obj(y) {
            return Err(Error::SizeMismatch(format!(
                "relabelling of {} at {i} is {gamma}",
                s.cat().mor_name(f)
            )));
        }
        obj_map.push(y);
        nu.push(gamma.clone());
    }
    let mor_map = dm
        .cat()
        .morphisms()
        .map(|m| {
            let (g, f, i) = dm.mor_tag(m);
            s.fib_mor(g, f, i).ok_or_else(missing)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TildeDmAlgebra {
        carrier,
        dm,
        act: LaxTriangleMor {
            functor: Functor::new(obj_map, mor_map),
            nu,
        },
    })
}

pub fn dm_algebra_to_lax(a: &TildeDmAlgebra) -> OperadicStructure {
    let dm = &a.dm;
    let mut fibre_obj = BTreeMap::new();
    let mut relabel = BTreeMap::new();
    for x in dm.cat().objects() {
        let key = dm.obj_tag(x);
        fibre_obj.insert(key, a.act.functor.obj(x));
        relabel.insert(key, a.act.nu[x].clone());
    }
    let fibre_mor = dm
        .cat()
        .morphisms()
        .map(|m| (dm.mor_tag(m), a.act.functor.mor(m)))
        .collect();
    OperadicStructure {
        lt: a.carrier.lt.clone(),
        card: a.carrier.card.clone(),
        fibre_obj,
        fibre_mor,
        relabel: Some(relabel),
    }
}

/// Laws "unit" (`act ∘ η = id` as lax triangles) and "associativity"
/// (`act ∘ μ = act ∘ D̃_m(act)`), after checking `act` is a lax triangle.
pub fn check_dm_algebra_laws(a: &TildeDmAlgebra) -> Result<Report> {
    let base = &a.carrier;
    let dm = &a.dm;
    let mut r = check_lax_triangle(dm.cat(), &dm.carrier.card, base.cat(), &base.card, &a.act);
    if !r.is_ok() {
        return Ok(r);
    }
    let terminals_ok = dm
        .carrier
        .lt
        .terminals()
        .iter()
        .all(|&t| base.lt.is_chosen_terminal(a.act.functor.obj(t)));
    if !terminals_ok {
        r.push("terminals", "the action moves a chosen terminal");
    }
    let eta = tilde_dm_unit(base, dm);
    if eta.then(&a.act)? != LaxTriangleMor::identity(base.cat(), &base.card) {
        r.push("unit", "act ∘ η ≠ id");
    }
    let dm2 = dm_object(&dm.carrier)?;
    let mu = tilde_dm_mult(base, dm, &dm2);
    let d_act = match tilde_dm_mor(&dm.carrier, base, &dm2, dm, &a.act) {
        Ok(t) => t,
        Err(e) => {
            r.push("associativity", format!("D̃_m(act) is undefined: {e}"));
            return Ok(r);
        }
    };
    if mu.then(&a.act)? != d_act.then(&a.act)? {
        r.push("associativity", "act ∘ μ ≠ act ∘ D̃_m(act)");
    }
    Ok(r)
}

/// The two pastings of the associativity law evaluated on the object
/// `(X, i, f, j, g)` of `D_mD_m(C)`: `((g^f_i)⁻¹(γj), g⁻¹(εj))`.
pub fn associativity_pastings(a: &TildeDmAlgebra, dm2: &Dm, x: Obj) -> Result<(Obj, Obj)> {
    let (m, j) = dm2.obj_tag(x);
    let (g, f, i) = a.dm.mor_tag(m);
    let s = dm_algebra_to_lax(a);
    let gf = s.fib_mor(g, f, i).unwrap();
    let gj = s.gamma(f, i).unwrap().apply(j);
    let ej = fibre(s.card_mor(f), i)?.eps.apply(j);
    let left = s
        .fib(gf, gj)
        .ok_or_else(|| Error::Precondition("γj is out of range".into()))?;
    let right = s.fib(g, ej).unwrap();
    Ok((left, right))
}

pub fn operadic_to_strict_algebra(s: &OperadicStructure) -> Result<TildeDmAlgebra> {
    if s.relabel.is_some() {
        return Err(Error::UnexpectedRelabel);
    }
    let r = check_operadic(s)?;
    if r.has("typing") || r.has("A3") {
        return Err(Error::Precondition(format!("fibres do not have the expected cardinalities:\n{r}")));
    }
    lax_to_dm_algebra(&s.with_identity_relabel())
}

pub fn strict_algebra_to_operadic(a: &TildeDmAlgebra) -> Result<OperadicStructure> {
    if !check_strict(&a.act) {
        return Err(Error::NotStrict("some component of the action is not an identity".into()));
    }
    Ok(dm_algebra_to_lax(a).without_relabel())
}

/// Every `γ_{f,i}` is an identity.
pub fn is_gamma_trivial(s: &OperadicStructure) -> bool {
    s.relabel.as_ref().is_none_or(|rel| rel.values().all(SMap::is_identity))
}

/// Relabels the cardinalities of an operadic structure along permutations
/// `σ_X` of `|X|`; the result is lax, with `γ` recording the permutations.
pub fn permutation_transport(s: &OperadicStructure, sigma: &[SMap]) -> Result<OperadicStructure> {
    let c = s.cat();
    if s.relabel.is_some() {
        return Err(Error::UnexpectedRelabel);
    }
    if sigma.len() != c.num_objects() {
        return Err(Error::SizeMismatch("one permutation per object is required".into()));
    }
    for x in c.objects() {
        if !sigma[x].is_bijective() || sigma[x].source() != s.card_obj(x) {
            return Err(Error::Precondition(format!("σ at {} is not a permutation of |X|", c.obj_name(x))));
        }
    }
    let inv: Vec<SMap> = sigma.iter().map(inverse).collect();
    let mor = c
        .morphisms()
        .map(|f| sigma[c.cod(f)].compose(s.card_mor(f))?.compose(&inv[c.dom(f)]))
        .collect::<Result<Vec<_>>>()?;
    let card = Card {
        obj: s.card.obj.clone(),
        mor,
    };
    let mut fibre_obj = BTreeMap::new();
    let mut relabel = BTreeMap::new();
    for (f, i) in s.fibre_keys() {
        let x = c.cod(f);
        let y = c.dom(f);
        let old_i = inv[x].apply(i);
        let z = s.fib(f, old_i).unwrap();
        fibre_obj.insert((f, i), z);
        let new_eps = fibre(&card.mor[f], i)?.eps;
        let old_eps = fibre(s.card_mor(f), old_i)?.eps;
        let values = (1..=new_eps.source())
            .map(|k| {
                let old = inv[y].apply(new_eps.apply(k));
                let p = old_eps.values().iter().position(|&v| v == old).unwrap() + 1;
                sigma[z].apply(p)
            })
            .collect();
        relabel.insert((f, i), SMap::new(values, s.card_obj(z))?);
    }
    let fibre_mor = s
        .fibre_mor_keys()
        .into_iter()
        .map(|(g, f, i)| ((g, f, i), s.fib_mor(g, f, inv[c.cod(f)].apply(i)).unwrap()))
        .collect();
    Ok(OperadicStructure {
        lt: s.lt.clone(),
        card,
        fibre_obj,
        fibre_mor,
        relabel: Some(relabel),
    })
}

fn inverse(p: &SMap) -> SMap {
    let mut values = vec![0; p.source()];
    for (k, &v) in p.values().iter().enumerate() {
        values[v - 1] = k + 1;
    }
    SMap::new(values, p.source()).unwrap()
}

/// Whether `t : C → C'` is a morphism of `D̃_m`-algebras, i.e.
/// `t ∘ act = act' ∘ D̃_m(t)`.
pub fn is_dm_algebra_morphism(a: &TildeDmAlgebra, a2: &TildeDmAlgebra, t: &LaxTriangleMor) -> Result<bool> {
    if !preserves_terminals(&a.carrier.lt, &a2.carrier.lt, &t.functor) {
        return Ok(false);
    }
    let dt = match tilde_dm_mor(&a.carrier, &a2.carrier, &a.dm, &a2.dm, t) {
        Ok(dt) => dt,
        Err(_) => return Ok(false),
    };
    Ok(a.act.then(t)? == dt.then(&a2.act)?)
}

/// Whether `F : C → C'` is a morphism of `D̃`-algebras.
pub fn is_d_algebra_morphism(a: &TildeDAlgebra, a2: &TildeDAlgebra, f: &Functor) -> bool {
    if !preserves_terminals(&a.carrier, &a2.carrier, f) {
        return false;
    }
    let d = dec(a.carrier.cat());
    let d2 = dec(a2.carrier.cat());
    a.act.then(f) == dec_functor(&d, &d2, f).then(&a2.act)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{local_terminal_choices, FinCat, Functor};
    use crate::operadic::{check_lax_operadic, check_operadic_functor};
    use crate::sskel::{s_operadic, surjections_operadic};

    #[test]
    fn thm1_on_the_arrow() {
        let c = FinCat::arrow();
        for lt in local_terminal_choices(&c) {
            let out = thm1_enumerate(&lt, 3, 6).unwrap();
            assert!(out.is_bijection());
            assert!(!out.algebras.is_empty());
            for s in &out.structures {
                let d = dec(c_ref(&lt));
                let a = unary_to_algebra(s, &d).unwrap();
                assert_eq!(&algebra_to_unary(&a, &d).unwrap(), s);
            }
        }
    }

    fn c_ref(lt: &LtCat) -> &FinCat {
        lt.cat()
    }

    #[test]
    fn point_gives_the_trivial_algebra() {
        let lt = local_terminal_choices(&FinCat::point("t")).remove(0);
        let out = thm1_enumerate(&lt, 3, 6).unwrap();
        assert_eq!(out.algebras.len(), 1);
        assert_eq!(out.structures.len(), 1);
    }

    #[test]
    fn strict_roundtrip_on_s2() {
        let s = s_operadic(2);
        let a = operadic_to_strict_algebra(&s).unwrap();
        assert!(check_strict(&a.act));
        let r = check_dm_algebra_laws(&a).unwrap();
        assert!(r.is_ok(), "{r}");
        assert_eq!(strict_algebra_to_operadic(&a).unwrap(), s);
    }

    #[test]
    fn transported_surjections_are_lax_with_nontrivial_gamma() {
        let s = surjections_operadic(3);
        let sigma: Vec<SMap> = s
            .cat()
            .objects()
            .map(|x| {
                if s.card_obj(x) == 2 {
                    SMap::new(vec![2, 1], 2).unwrap()
                } else {
                    SMap::identity(s.card_obj(x))
                }
            })
            .collect();
        let t = permutation_transport(&s, &sigma).unwrap();
        assert!(!is_gamma_trivial(&t));
        let r = check_lax_operadic(&t).unwrap();
        assert!(r.is_ok(), "{r}");
        let a = lax_to_dm_algebra(&t).unwrap();
        assert!(!check_strict(&a.act));
        assert!(strict_algebra_to_operadic(&a).is_err());
        let r = check_dm_algebra_laws(&a).unwrap();
        assert!(r.is_ok(), "{r}");
        assert_eq!(dm_algebra_to_lax(&a), t);
        let iso = LaxTriangleMor {
            functor: Functor::identity(s.cat()),
            nu: sigma.clone(),
        };
        assert!(check_operadic_functor(&s.with_identity_relabel(), &t, &iso.functor, Some(&sigma)).is_ok());
        let a0 = lax_to_dm_algebra(&s.with_identity_relabel()).unwrap();
        assert!(is_dm_algebra_morphism(&a0, &a, &iso).unwrap());
    }

    #[test]
    fn pastings_on_the_transported_instance() {
        let s = s_operadic(2);
        let a = operadic_to_strict_algebra(&s).unwrap();
        let dm2 = dm_object(&a.dm.carrier).unwrap();
        for x in dm2.cat().objects() {
            let (l, r) = associativity_pastings(&a, &dm2, x).unwrap();
            assert_eq!(l, r);
        }
    }

    #[test]
    fn strict_algebra_morphisms_are_operadic_functors() {
        let s = s_operadic(2);
        let a = operadic_to_strict_algebra(&s).unwrap();
        let mut agree = 0;
        search_functors(s.cat(), s.cat(), None, &mut |f| {
            let strict = LaxTriangleMor {
                functor: f.clone(),
                nu: s.cat().objects().map(|x| SMap::identity(s.card_obj(x))).collect(),
            };
            let over = s.card.obj.iter().enumerate().all(|(x, &n)| s.card_obj(f.obj(x)) == n)
                && s.cat().morphisms().all(|m| s.card_mor(f.mor(m)) == s.card_mor(m));
            if over {
                let op = check_operadic_functor(&s, &s, f, None).is_ok();
                assert_eq!(op, is_dm_algebra_morphism(&a, &a, &strict).unwrap());
                agree += 1;
            }
            true
        });
        assert!(agree >= 1);
    }

    #[test]
    fn mutations_of_the_arrow_structure() {
        let c = FinCat::poset(&["a", "b", "c"], |x, y| x <= y);
        for lt in local_terminal_choices(&c) {
            for s in thm1_enumerate(&lt, 3, 6).unwrap().structures {
                for m in mutation_lockstep(&s, 100).unwrap() {
                    assert!(m.agrees(), "{m:?}");
                }
            }
        }
    }
}
