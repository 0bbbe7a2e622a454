//! Operadic, unary operadic and lax-operadic structures on a finite
//! category, stored as total tables, with exhaustive axiom checkers.
//!
//! Fibres are keyed by `(f, i)` with `i ∈ |cod f|` (1-based); fibre maps by
//! `(g, f, i)` for the triangle `g : f∘g → f`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fincat::{check_functor, FinCat, Functor, LtCat, Mor, Obj};
use crate::report::Report;
use crate::sskel::{check_card, fibre, fibre_map, fibre_size, Card, SMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperadicStructure {
    pub lt: LtCat,
    pub card: Card,
    pub fibre_obj: BTreeMap<(Mor, usize), Obj>,
    pub fibre_mor: BTreeMap<(Mor, Mor, usize), Mor>,
    pub relabel: Option<BTreeMap<(Mor, usize), SMap>>,
}

impl OperadicStructure {
    pub fn cat(&self) -> &FinCat {
        self.lt.cat()
    }

    /// `f⁻¹(i)`.
    pub fn fib(&self, f: Mor, i: usize) -> Option<Obj> {
        self.fibre_obj.get(&(f, i)).copied()
    }

    /// `g^f_i`.
    pub fn fib_mor(&self, g: Mor, f: Mor, i: usize) -> Option<Mor> {
        self.fibre_mor.get(&(g, f, i)).copied()
    }

    /// `γ_{f,i}`.
    pub fn gamma(&self, f: Mor, i: usize) -> Option<&SMap> {
        self.relabel.as_ref()?.get(&(f, i))
    }

    pub fn card_obj(&self, x: Obj) -> usize {
        self.card.obj[x]
    }

    pub fn card_mor(&self, f: Mor) -> &SMap {
        &self.card.mor[f]
    }

    /// Every `(f, i)` a fibre must be given for, in lexicographic order.
    pub fn fibre_keys(&self) -> Vec<(Mor, usize)> {
        let c = self.cat();
        let mut v = Vec::new();
        for f in c.morphisms() {
            for i in 1..=self.card.obj.get(c.cod(f)).copied().unwrap_or(0) {
                v.push((f, i));
            }
        }
        v
    }

    /// Every `(g, f, i)` a fibre map must be given for.
    pub fn fibre_mor_keys(&self) -> Vec<(Mor, Mor, usize)> {
        let c = self.cat();
        let mut v = Vec::new();
        for (f, g) in c.composable_pairs() {
            for i in 1..=self.card.obj.get(c.cod(f)).copied().unwrap_or(0) {
                v.push((g, f, i));
            }
        }
        v.sort_unstable();
        v
    }

    pub fn is_lax(&self) -> bool {
        self.relabel.is_some()
    }

    /// The same data with every `γ_{f,i}` an identity of size `|f|⁻¹(i)`.
    pub fn with_identity_relabel(&self) -> OperadicStructure {
        let mut s = self.clone();
        s.relabel = Some(
            self.fibre_keys()
                .into_iter()
                .map(|(f, i)| ((f, i), SMap::identity(fibre_size(self.card_mor(f), i))))
                .collect(),
        );
        s
    }

    pub fn without_relabel(&self) -> OperadicStructure {
        let mut s = self.clone();
        s.relabel = None;
        s
    }

    fn mname(&self, f: Mor) -> &str {
        self.cat().mor_name(f)
    }

    fn oname(&self, x: Obj) -> &str {
        self.cat().obj_name(x)
    }
}

/// Typing of the cardinality functor and of the fibre tables.
fn check_typing(s: &OperadicStructure) -> Report {
    let c = s.cat();
    let mut r = check_card(c, &s.card);
    if !r.is_ok() {
        return r;
    }
    let keys = s.fibre_keys();
    for &(f, i) in &keys {
        match s.fib(f, i) {
            None => r.push("typing", format!("missing fibre of {} at {i}", s.mname(f))),
            Some(y) if y >= c.num_objects() => r.push("typing", format!("fibre of {} at {i} is not an object", s.mname(f))),
            _ => {}
        }
    }
    if s.fibre_obj.len() != keys.len() {
        r.push("typing", "fibre table has entries outside its index set");
    }
    let mkeys = s.fibre_mor_keys();
    for &(g, f, i) in &mkeys {
        let Some(m) = s.fib_mor(g, f, i) else {
            r.push("typing", format!("missing fibre map of {} over {} at {i}", s.mname(g), s.mname(f)));
            continue;
        };
        if m >= c.num_morphisms() {
            r.push("typing", format!("fibre map of {} over {} at {i} is not a morphism", s.mname(g), s.mname(f)));
            continue;
        }
        let fg = c.comp(f, g);
        if Some(c.dom(m)) != s.fib(fg, i) || Some(c.cod(m)) != s.fib(f, i) {
            r.push(
                "typing",
                format!(
                    "fibre map {} of {} over {} at {i} does not run from the fibre of {} to the fibre of {}",
                    s.mname(m),
                    s.mname(g),
                    s.mname(f),
                    s.mname(fg),
                    s.mname(f)
                ),
            );
        }
    }
    if s.fibre_mor.len() != mkeys.len() {
        r.push("typing", "fibre map table has entries outside its index set");
    }
    r
}

fn check_relabel_typing(s: &OperadicStructure, r: &mut Report) {
    let Some(rel) = &s.relabel else { return };
    let keys = s.fibre_keys();
    for &(f, i) in &keys {
        match rel.get(&(f, i)) {
            None => r.push("typing", format!("missing relabelling of {} at {i}", s.mname(f))),
            Some(gm) => {
                let want_src = fibre_size(s.card_mor(f), i);
                let want_tgt = s.card_obj(s.fib(f, i).unwrap());
                if gm.source() != want_src || gm.target() != want_tgt {
                    r.push(
                        "typing",
                        format!("relabelling of {} at {i} is {gm}, not a map {want_src} → {want_tgt}", s.mname(f)),
                    );
                }
            }
        }
    }
    if rel.len() != keys.len() {
        r.push("typing", "relabelling table has entries outside its index set");
    }
}

/// Each `φ_{X,i}` preserves identities and composites.
fn check_fibre_functoriality(s: &OperadicStructure, r: &mut Report) {
    let c = s.cat();
    for (f, i) in s.fibre_keys() {
        let id = c.id(c.dom(f));
        if s.fib_mor(id, f, i) != Some(c.id(s.fib(f, i).unwrap())) {
            r.push("D3", format!("fibre map of the identity over {} at {i} is not an identity", s.mname(f)));
        }
    }
    for (g, f, i) in s.fibre_mor_keys() {
        let fg = c.comp(f, g);
        for &h in c.incoming(c.dom(g)) {
            let gh = c.comp(g, h);
            let whole = s.fib_mor(gh, f, i).unwrap();
            let parts = c.comp(s.fib_mor(g, f, i).unwrap(), s.fib_mor(h, fg, i).unwrap());
            if whole != parts {
                r.push(
                    "D3",
                    format!("fibre map of {} ∘ {} over {} at {i} is not the composite", s.mname(g), s.mname(h), s.mname(f)),
                );
            }
        }
    }
}

fn check_a1_a2(s: &OperadicStructure, r: &mut Report) {
    let c = s.cat();
    for &t in s.lt.terminals() {
        if s.card_obj(t) != 1 {
            r.push("A1", format!("|{}| = {} for the chosen terminal", s.oname(t), s.card_obj(t)));
        }
    }
    for x in c.objects() {
        for i in 1..=s.card_obj(x) {
            let y = s.fib(c.id(x), i).unwrap();
            if !s.lt.is_chosen_terminal(y) {
                r.push("A2", format!("fibre of id_{} at {i} is {}, not a chosen terminal", s.oname(x), s.oname(y)));
            }
        }
    }
}

fn check_a4(s: &OperadicStructure, r: &mut Report) {
    let c = s.cat();
    for x in c.objects() {
        let tau = s.lt.tau(x);
        if s.card_obj(s.lt.u(x)) == 0 {
            continue;
        }
        let fx = s.fib(tau, 1).unwrap();
        if fx != x {
            r.push("A4", format!("fibre of τ_{} is {}", s.oname(x), s.oname(fx)));
        }
        for &f in c.incoming(x) {
            let m = s.fib_mor(f, tau, 1).unwrap();
            if m != f {
                r.push("A4", format!("fibre map of {} over τ_{} is {}", s.mname(f), s.oname(x), s.mname(m)));
            }
        }
    }
}

pub fn check_operadic(s: &OperadicStructure) -> Result<Report> {
    if s.relabel.is_some() {
        return Err(Error::UnexpectedRelabel);
    }
    let mut r = check_typing(s);
    if !r.is_ok() {
        return Ok(r);
    }
    let c = s.cat();
    check_fibre_functoriality(s, &mut r);
    check_a1_a2(s, &mut r);
    for (f, i) in s.fibre_keys() {
        let y = s.fib(f, i).unwrap();
        let want = fibre_size(s.card_mor(f), i);
        if s.card_obj(y) != want {
            r.push(
                "A3",
                format!("|fibre of {} at {i}| = {} but |{}|⁻¹({i}) has {want} elements", s.mname(f), s.card_obj(y), s.mname(f)),
            );
        }
    }
    for (g, f, i) in s.fibre_mor_keys() {
        let m = s.fib_mor(g, f, i).unwrap();
        let want = fibre_map(s.card_mor(g), s.card_mor(f), i).unwrap();
        if *s.card_mor(m) != want {
            r.push(
                "A3",
                format!("|fibre map of {} over {} at {i}| = {} but should be {want}", s.mname(g), s.mname(f), s.card_mor(m)),
            );
        }
    }
    check_a4(s, &mut r);
    for (g, f, i) in s.fibre_mor_keys() {
        let eps = fibre(s.card_mor(f), i).unwrap().eps;
        let gf = s.fib_mor(g, f, i).unwrap();
        let fg = c.comp(f, g);
        for j in 1..=eps.source() {
            let ej = eps.apply(j);
            let left = s.fib(gf, j);
            let right = s.fib(g, ej);
            if left.is_some() && left != right {
                r.push(
                    "A5",
                    format!("fibre of {} at {j} differs from fibre of {} at {ej} (over {} at {i})", s.mname(gf), s.mname(g), s.mname(f)),
                );
                continue;
            }
            for &h in c.incoming(c.dom(g)) {
                let hfg = s.fib_mor(h, fg, i).unwrap();
                let left = s.fib_mor(hfg, gf, j);
                let right = s.fib_mor(h, g, ej);
                if left.is_some() && left != right {
                    r.push(
                        "A5",
                        format!(
                            "fibre map of {} over {} at {j} differs from fibre map of {} over {} at {ej}",
                            s.mname(hfg),
                            s.mname(gf),
                            s.mname(h),
                            s.mname(g)
                        ),
                    );
                }
            }
        }
    }
    Ok(r)
}

pub fn check_unary(s: &OperadicStructure) -> bool {
    s.card.obj.iter().all(|&n| n == 1)
}

/// The unique map `(|g|^{|f|}_i)⁻¹(j) → |g^f_i|⁻¹(γj)` compatible with the
/// inclusions and with `γ_{fg,i}`.
pub fn gamma_bar(s: &OperadicStructure, f: Mor, g: Mor, i: usize, j: usize) -> Result<SMap> {
    let c = s.cat();
    let fg = c.comp(f, g);
    let a = fibre_map(s.card_mor(g), s.card_mor(f), i)?;
    let eps_a = fibre(&a, j)?.eps;
    let gamma_fg = s.gamma(fg, i).ok_or(Error::MissingRelabel)?;
    let gamma_f = s.gamma(f, i).ok_or(Error::MissingRelabel)?;
    let m = s
        .fib_mor(g, f, i)
        .ok_or_else(|| Error::Precondition("missing fibre map".into()))?;
    let b = s.card_mor(m);
    let eps_b = fibre(b, gamma_f.apply(j))?.eps;
    let mut values = Vec::with_capacity(eps_a.source());
    for k in 1..=eps_a.source() {
        let image = gamma_fg.apply(eps_a.apply(k));
        match eps_b.values().iter().position(|&v| v == image) {
            Some(p) => values.push(p + 1),
            None => {
                return Err(Error::NoFactorization(format!(
                    "γ of {} at {i} sends {} outside the fibre of |{}| at {}",
                    s.mname(fg),
                    eps_a.apply(k),
                    s.mname(m),
                    gamma_f.apply(j)
                )))
            }
        }
    }
    SMap::new(values, eps_b.source())
}

pub fn check_lax_operadic(s: &OperadicStructure) -> Result<Report> {
    if s.relabel.is_none() {
        return Err(Error::MissingRelabel);
    }
    let mut r = check_typing(s);
    if r.is_ok() {
        check_relabel_typing(s, &mut r);
    }
    if !r.is_ok() {
        return Ok(r);
    }
    let c = s.cat();
    check_fibre_functoriality(s, &mut r);
    check_a1_a2(s, &mut r);
    for (g, f, i) in s.fibre_mor_keys() {
        let fg = c.comp(f, g);
        let m = s.fib_mor(g, f, i).unwrap();
        let left = s.card_mor(m).compose(s.gamma(fg, i).unwrap())?;
        let right = s
            .gamma(f, i)
            .unwrap()
            .compose(&fibre_map(s.card_mor(g), s.card_mor(f), i)?)?;
        if left != right {
            r.push(
                "A3-lax",
                format!("fibre map of {} over {} at {i} is not compatible with relabelling", s.mname(g), s.mname(f)),
            );
        }
    }
    check_a4(s, &mut r);
    for (g, f, i) in s.fibre_mor_keys() {
        let eps = fibre(s.card_mor(f), i).unwrap().eps;
        let gamma_f = s.gamma(f, i).unwrap();
        let gf = s.fib_mor(g, f, i).unwrap();
        let fg = c.comp(f, g);
        for j in 1..=eps.source() {
            let ej = eps.apply(j);
            let gj = gamma_f.apply(j);
            let left = s.fib(gf, gj);
            let right = s.fib(g, ej);
            if left != right {
                r.push(
                    "A5-lax",
                    format!("relabelled fibre of {} at {gj} differs from fibre of {} at {ej}", s.mname(gf), s.mname(g)),
                );
                continue;
            }
            match gamma_bar(s, f, g, i, j) {
                Err(e) => r.push("A3-lax", format!("no factorization over {} at ({i}, {j}): {e}", s.mname(f))),
                Ok(gb) => {
                    let top = s.gamma(gf, gj).unwrap().compose(&gb);
                    let bottom = s.gamma(g, ej).unwrap();
                    if top.as_ref() != Ok(bottom) {
                        r.push(
                            "A5-lax",
                            format!(
                                "relabelling square fails for {} over {} at ({i}, {j})",
                                s.mname(g),
                                s.mname(f)
                            ),
                        );
                    }
                }
            }
            for &h in c.incoming(c.dom(g)) {
                let hfg = s.fib_mor(h, fg, i).unwrap();
                let left = s.fib_mor(hfg, gf, gj);
                let right = s.fib_mor(h, g, ej);
                if left != right {
                    r.push(
                        "A5-lax",
                        format!(
                            "fibre map of {} over {} at {gj} differs from fibre map of {} over {} at {ej}",
                            s.mname(hfg),
                            s.mname(gf),
                            s.mname(h),
                            s.mname(g)
                        ),
                    );
                }
            }
        }
    }
    Ok(r)
}

/// Checks that `F` (with relabellings `ν` in the lax case) is an operadic
/// or lax-operadic functor `S → S'`.
pub fn check_operadic_functor(
    s: &OperadicStructure,
    s2: &OperadicStructure,
    f: &Functor,
    nu: Option<&[SMap]>,
) -> Report {
    let c = s.cat();
    let c2 = s2.cat();
    let mut r = check_functor(c, c2, f);
    if !r.is_ok() {
        return r;
    }
    for &t in s.lt.terminals() {
        if !s2.lt.is_chosen_terminal(f.obj(t)) {
            r.push("terminals", format!("{} is not sent to a chosen terminal", c.obj_name(t)));
        }
    }
    match nu {
        None => {
            for x in c.objects() {
                if s.card_obj(x) != s2.card_obj(f.obj(x)) {
                    r.push("cardinality", format!("|F{}| ≠ |{}|", c.obj_name(x), c.obj_name(x)));
                }
            }
            for m in c.morphisms() {
                if s.card_mor(m) != s2.card_mor(f.mor(m)) {
                    r.push("cardinality", format!("|F{}| ≠ |{}|", c.mor_name(m), c.mor_name(m)));
                }
            }
        }
        Some(nu) => {
            if nu.len() != c.num_objects() {
                r.push("relabelling", "one relabelling per object is required");
                return r;
            }
            for x in c.objects() {
                if nu[x].source() != s.card_obj(x) || nu[x].target() != s2.card_obj(f.obj(x)) {
                    r.push("relabelling", format!("ν at {} is mistyped", c.obj_name(x)));
                }
            }
            if !r.is_ok() {
                return r;
            }
            for m in c.morphisms() {
                let left = s2.card_mor(f.mor(m)).compose(&nu[c.dom(m)]).unwrap();
                let right = nu[c.cod(m)].compose(s.card_mor(m)).unwrap();
                if left != right {
                    r.push("relabelling", format!("ν is not natural at {}", c.mor_name(m)));
                }
            }
        }
    }
    if !r.is_ok() {
        return r;
    }
    let reindex = |x: Obj, i: usize| nu.map_or(i, |nu| nu[x].apply(i));
    for (m, i) in s.fibre_keys() {
        let i2 = reindex(c.cod(m), i);
        if s.fib(m, i).map(|y| f.obj(y)) != s2.fib(f.mor(m), i2) {
            r.push("fibres", format!("F does not preserve the fibre of {} at {i}", c.mor_name(m)));
        }
    }
    for (g, m, i) in s.fibre_mor_keys() {
        let i2 = reindex(c.cod(m), i);
        if s.fib_mor(g, m, i).map(|k| f.mor(k)) != s2.fib_mor(f.mor(g), f.mor(m), i2) {
            r.push(
                "fibre maps",
                format!("F does not preserve the fibre map of {} over {} at {i}", c.mor_name(g), c.mor_name(m)),
            );
        }
    }
    r
}
