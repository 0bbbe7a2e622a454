//! The décalage comonad `D(C) = Σ_X C/X`, its coalgebras, and the monad
//! `D̃` it induces on categories with chosen local terminals.
//!
//! Object `f` of `D(C)` is the base morphism `f` itself (same index), lying
//! in the summand of `cod f`. Morphism `(g, f)` of `D(C)` is the triangle
//! `g : f∘g → f`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::fincat::{check_functor, search_functors, FinCat, Functor, LtCat, Mor, Obj};
use crate::report::Report;

#[derive(Clone, Debug)]
pub struct Dec {
    pub cat: FinCat,
    tri: Vec<(Mor, Mor)>,
    tri_index: HashMap<(Mor, Mor), Mor>,
}

impl Dec {
    /// Object of `D(C)` given by the base morphism `f`.
    pub fn object(&self, f: Mor) -> Obj {
        f
    }

    /// The base morphism an object of `D(C)` stands for.
    pub fn arrow(&self, d: Obj) -> Mor {
        d
    }

    /// The triangle `(g, f)` behind morphism `m`.
    pub fn triangle(&self, m: Mor) -> (Mor, Mor) {
        self.tri[m]
    }

    /// Morphism index of the triangle `g : f∘g → f`.
    pub fn morphism(&self, g: Mor, f: Mor) -> Option<Mor> {
        self.tri_index.get(&(g, f)).copied()
    }

    pub fn triangles(&self) -> &[(Mor, Mor)] {
        &self.tri
    }
}

pub fn tri_name(c: &FinCat, g: Mor, f: Mor) -> String {
    format!("{{{};{}}}", c.mor_name(g), c.mor_name(f))
}

pub fn dec(c: &FinCat) -> Dec {
    let mut tri: Vec<(Mor, Mor)> = c.morphisms().map(|f| (c.id(c.dom(f)), f)).collect();
    let mut arrows = Vec::new();
    for f in c.morphisms() {
        for &g in c.incoming(c.dom(f)) {
            if c.is_identity(g) {
                continue;
            }
            arrows.push((tri_name(c, g, f), c.comp(f, g), f));
            tri.push((g, f));
        }
    }
    let tri_index: HashMap<(Mor, Mor), Mor> = tri.iter().enumerate().map(|(k, &t)| (t, k)).collect();
    let names = c.morphisms().map(|f| c.mor_name(f).to_string()).collect();
    let cat = FinCat::build(names, arrows, |a, b| {
        let (g, f) = tri[a];
        let (h, _) = tri[b];
        tri_index[&(c.comp(g, h), f)]
    });
    Dec { cat, tri, tri_index }
}

/// Copairing of the domain projections `D(C) → C`.
pub fn counit(c: &FinCat, d: &Dec) -> Functor {
    Functor::new(
        d.cat.objects().map(|f| c.dom(f)).collect(),
        d.cat.morphisms().map(|m| d.triangle(m).0).collect(),
    )
}

/// `D(C) → DD(C)`, sending the `X`-summand onto the `1_X`-summand.
pub fn comult(c: &FinCat, d: &Dec, dd: &Dec) -> Functor {
    let up = |f: Mor| d.morphism(f, c.id(c.cod(f))).unwrap();
    let obj_map = d.cat.objects().map(up).collect();
    let mor_map = d
        .cat
        .morphisms()
        .map(|m| {
            let (_, f) = d.triangle(m);
            dd.morphism(m, up(f)).unwrap()
        })
        .collect();
    Functor::new(obj_map, mor_map)
}

/// `D(F) : D(C) → D(C')`, acting by `F/X` on each summand.
pub fn dec_functor(d: &Dec, d2: &Dec, f: &Functor) -> Functor {
    Functor::new(
        d.cat.objects().map(|x| f.mor(d.arrow(x))).collect(),
        d.cat
            .morphisms()
            .map(|m| {
                let (g, h) = d.triangle(m);
                d2.morphism(f.mor(g), f.mor(h)).expect("functor maps triangles to triangles")
            })
            .collect(),
    )
}

pub fn check_comonad_laws(c: &FinCat) -> Report {
    let mut r = Report::new();
    let d = dec(c);
    let dd = dec(&d.cat);
    let ddd = dec(&dd.cat);
    let eps = counit(c, &d);
    let eps_d = counit(&d.cat, &dd);
    let delta = comult(c, &d, &dd);
    let delta_d = comult(&d.cat, &dd, &ddd);
    let id = Functor::identity(&d.cat);
    if delta.then(&eps_d) != id {
        r.push("counit", "ε_D ∘ δ ≠ id");
    }
    let d_eps = dec_functor(&dd, &d, &eps);
    if delta.then(&d_eps) != id {
        r.push("counit", "D(ε) ∘ δ ≠ id");
    }
    let d_delta = dec_functor(&dd, &ddd, &delta);
    if delta.then(&d_delta) != delta.then(&delta_d) {
        r.push("coassociativity", "D(δ) ∘ δ ≠ δ_D ∘ δ");
    }
    r
}

/// The coalgebra of a local-terminal choice: `X ↦ τ_X`, `f ↦ (f, τ_X)`.
pub fn coalgebra_from_lt(lt: &LtCat, d: &Dec) -> Functor {
    let c = lt.cat();
    Functor::new(
        c.objects().map(|x| d.object(lt.tau(x))).collect(),
        c.morphisms()
            .map(|f| d.morphism(f, lt.tau(c.cod(f))).unwrap())
            .collect(),
    )
}

pub fn check_coalgebra(c: &FinCat, d: &Dec, dd: &Dec, alpha: &Functor) -> Report {
    let mut r = check_functor(c, &d.cat, alpha);
    if !r.is_ok() {
        return r;
    }
    if alpha.then(&counit(c, d)) != Functor::identity(c) {
        r.push("coalgebra counit", "ε ∘ α ≠ id");
    }
    let left = alpha.then(&dec_functor(d, dd, alpha));
    let right = alpha.then(&comult(c, d, dd));
    if left != right {
        r.push("coalgebra coassociativity", "D(α) ∘ α ≠ δ ∘ α");
    }
    r
}

pub const COALGEBRA_MAX_OBJECTS: usize = 4;
pub const COALGEBRA_MAX_MORPHISMS: usize = 8;

/// Every coalgebra structure on `c`, by exhaustive functor search.
pub fn enumerate_coalgebras(c: &FinCat) -> Result<Vec<Functor>> {
    if c.num_objects() > COALGEBRA_MAX_OBJECTS || c.num_morphisms() > COALGEBRA_MAX_MORPHISMS {
        return Err(Error::BoundExceeded(format!(
            "coalgebra search is limited to {COALGEBRA_MAX_OBJECTS} objects and {COALGEBRA_MAX_MORPHISMS} morphisms"
        )));
    }
    let d = dec(c);
    let dd = dec(&d.cat);
    // the counit law forces α(X) to be an arrow out of X
    let cands: Vec<Vec<Obj>> = c.objects().map(|x| c.outgoing(x).to_vec()).collect();
    let mut out = Vec::new();
    search_functors(c, &d.cat, Some(&cands), &mut |alpha| {
        if check_coalgebra(c, &d, &dd, alpha).is_ok() {
            out.push(alpha.clone());
        }
        true
    });
    Ok(out)
}

/// `D̃(C)`: the décalage with identities as chosen terminals.
pub fn tilde_d(c: &FinCat) -> (Dec, LtCat) {
    let d = dec(c);
    let terminals = c.objects().map(|x| d.object(c.id(x))).collect();
    let lt = LtCat::new(d.cat.clone(), terminals).expect("identities are terminal in their slices");
    (d, lt)
}

pub fn preserves_terminals(src: &LtCat, tgt: &LtCat, f: &Functor) -> bool {
    src.terminals().iter().all(|&t| tgt.is_chosen_terminal(f.obj(t)))
}

/// `D̃(F)` for a terminal-preserving `F`.
pub fn tilde_d_mor(src: &LtCat, tgt: &LtCat, f: &Functor) -> Result<Functor> {
    if !preserves_terminals(src, tgt, f) {
        return Err(Error::NotTerminalPreserving(
            "some chosen terminal is not sent to a chosen terminal".into(),
        ));
    }
    Ok(dec_functor(&dec(src.cat()), &dec(tgt.cat()), f))
}

/// `η : C → D̃(C)`, `X ↦ τ_X`, `f ↦ (f : τ_Y → τ_X)`.
pub fn unit_eta(lt: &LtCat, d: &Dec) -> Functor {
    coalgebra_from_lt(lt, d)
}

/// `μ : D̃D̃(C) → D̃(C)`, sending the summand of `f : Y → X` to the summand
/// of `Y`.
pub fn mult_mu(d: &Dec, dd: &Dec) -> Functor {
    Functor::new(
        dd.cat.objects().map(|m| d.object(d.triangle(dd.arrow(m)).0)).collect(),
        dd.cat
            .morphisms()
            .map(|k| {
                let (a, b) = dd.triangle(k);
                d.morphism(d.triangle(a).0, d.triangle(b).0).unwrap()
            })
            .collect(),
    )
}

pub fn check_monad_laws(lt: &LtCat) -> Report {
    let mut r = Report::new();
    let c = lt.cat();
    let (d, dlt) = tilde_d(c);
    let (dd, ddlt) = tilde_d(&d.cat);
    let ddd = dec(&dd.cat);
    let eta = unit_eta(lt, &d);
    let eta_d = unit_eta(&dlt, &dd);
    let mu = mult_mu(&d, &dd);
    let mu_d = mult_mu(&dd, &ddd);
    let id = Functor::identity(&d.cat);
    if eta_d.then(&mu) != id {
        r.push("unit", "μ ∘ η_D̃ ≠ id");
    }
    if dec_functor(&d, &dd, &eta).then(&mu) != id {
        r.push("unit", "μ ∘ D̃(η) ≠ id");
    }
    if mu_d.then(&mu) != dec_functor(&ddd, &dd, &mu).then(&mu) {
        r.push("associativity", "μ ∘ μ_D̃ ≠ μ ∘ D̃(μ)");
    }
    if !preserves_terminals(lt, &dlt, &eta) || !preserves_terminals(&ddlt, &dlt, &mu) {
        r.push("terminals", "unit or multiplication moves a chosen terminal");
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{check_category, connected_components, coproduct, local_terminal_choices};

    #[test]
    fn dec_of_point_and_arrow() {
        let p = FinCat::point("t");
        assert!(dec(&p).cat.same_shape(&p));
        let two = FinCat::arrow();
        let d = dec(&two);
        assert_eq!(d.cat.num_objects(), 3);
        assert_eq!(d.cat.num_morphisms(), 4);
        assert!(check_category(&d.cat).is_ok());
        assert_eq!(connected_components(&d.cat).len(), 2);
        let f = two.find_morphism("ab").unwrap();
        let m = d.cat.non_identities().next().unwrap();
        assert_eq!(d.cat.dom(m), f);
        assert_eq!(d.cat.cod(m), two.id(1));
    }

    #[test]
    fn counit_and_comult_on_the_arrow() {
        let two = FinCat::arrow();
        let f = two.find_morphism("ab").unwrap();
        let d = dec(&two);
        let dd = dec(&d.cat);
        let eps = counit(&two, &d);
        assert_eq!(eps.obj(f), 0);
        assert_eq!(eps.obj(two.id(1)), 1);
        let delta = comult(&two, &d, &dd);
        let expect = d.morphism(f, two.id(1)).unwrap();
        assert_eq!(dd.arrow(delta.obj(f)), expect);
        assert!(check_functor(&d.cat, &dd.cat, &delta).is_ok());
        assert!(check_comonad_laws(&two).is_ok());
        let p = FinCat::point("t");
        let dp = dec(&p);
        let ddp = dec(&dp.cat);
        assert_eq!(comult(&p, &dp, &ddp), Functor::identity(&dp.cat));
    }

    #[test]
    fn coalgebra_counts() {
        let two = FinCat::arrow();
        let coalgs = enumerate_coalgebras(&two).unwrap();
        assert_eq!(coalgs.len(), 1);
        let lt = &local_terminal_choices(&two)[0];
        let d = dec(&two);
        let alpha = coalgebra_from_lt(lt, &d);
        assert_eq!(coalgs[0], alpha);
        let f = two.find_morphism("ab").unwrap();
        assert_eq!(alpha.obj(0), f);
        assert_eq!(alpha.obj(1), two.id(1));
        let parallel = FinCat::build(
            vec!["a".into(), "b".into()],
            vec![("f".into(), 0, 1), ("g".into(), 0, 1)],
            |_, _| unreachable!(),
        );
        assert!(enumerate_coalgebras(&parallel).unwrap().is_empty());
        let pp = coproduct(&[FinCat::point("t"), FinCat::point("t")]).cat;
        assert_eq!(enumerate_coalgebras(&pp).unwrap().len(), 1);
        assert!(enumerate_coalgebras(&FinCat::discrete(5)).is_err());
    }

    #[test]
    fn monad_on_the_arrow() {
        let two = FinCat::arrow();
        let lt = &local_terminal_choices(&two)[0];
        assert!(check_monad_laws(lt).is_ok());
        let (d, _) = tilde_d(&two);
        let dd = dec(&d.cat);
        let mu = mult_mu(&d, &dd);
        let f = two.find_morphism("ab").unwrap();
        // the summand of f : a → b goes to the summand of a, i.e. onto id_a
        let g = d.morphism(f, two.id(1)).unwrap();
        assert_eq!(mu.obj(dd.object(g)), d.object(f));
        let fa = d.morphism(two.id(0), f).unwrap();
        assert_eq!(mu.obj(dd.object(fa)), d.object(two.id(0)));
        let p = FinCat::point("t");
        let plt = &local_terminal_choices(&p)[0];
        let (dp, _) = tilde_d(&p);
        assert_eq!(unit_eta(plt, &dp).obj(0), p.id(0));
    }

    #[test]
    fn unit_of_decalage_is_comultiplication() {
        let c = FinCat::poset(&["a", "b", "c"], |i, j| i <= j);
        let (d, dlt) = tilde_d(&c);
        let dd = dec(&d.cat);
        assert_eq!(unit_eta(&dlt, &dd), comult(&c, &d, &dd));
    }

    #[test]
    fn tilde_d_mor_requires_terminal_preservation() {
        let two = FinCat::arrow();
        let lt = local_terminal_choices(&two).remove(0);
        let to_a = Functor::new(vec![0, 0], vec![0, 0, 0]);
        assert!(tilde_d_mor(&lt, &lt, &to_a).is_err());
        let id = Functor::identity(&two);
        let dmor = tilde_d_mor(&lt, &lt, &id).unwrap();
        let (_, dlt) = tilde_d(&two);
        assert!(preserves_terminals(&dlt, &dlt, &dmor));
    }
}
