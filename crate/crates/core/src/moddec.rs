//! Categories over 𝕊 and lax triangles between them; the category of
//! elements; the (π₀-bijective, π₀-cartesian) factorization; and the
//! modified décalage `D_m(C) = Σ_{X, i ∈ |X|} C/X` with its monad.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::fincat::{
    check_functor, connected_components, coproduct, full_subcategory, search_functors, FinCat, Functor, LtCat, Mor,
    Obj,
};
use crate::report::Report;
use crate::sskel::{check_card, fibre, fibre_map, fibre_size, Card, SMap};

/// A category with a functor to 𝕊.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverS {
    pub cat: FinCat,
    pub card: Card,
}

impl OverS {
    pub fn new(cat: FinCat, card: Card) -> Result<OverS> {
        let r = check_card(&cat, &card);
        if !r.is_ok() {
            return Err(Error::MalformedCategory(r.to_string()));
        }
        Ok(OverS { cat, card })
    }
}

/// A category over 𝕊 with chosen local terminals, each of cardinality 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LtOverS {
    pub lt: LtCat,
    pub card: Card,
}

impl LtOverS {
    pub fn new(lt: LtCat, card: Card) -> Result<LtOverS> {
        let r = check_card(lt.cat(), &card);
        if !r.is_ok() {
            return Err(Error::MalformedCategory(r.to_string()));
        }
        for &t in lt.terminals() {
            if card.obj[t] != 1 {
                return Err(Error::CoalgebraCondition(format!(
                    "|{}| = {} for a chosen terminal",
                    lt.cat().obj_name(t),
                    card.obj[t]
                )));
            }
        }
        Ok(LtOverS { lt, card })
    }

    pub fn cat(&self) -> &FinCat {
        self.lt.cat()
    }

    pub fn over_s(&self) -> OverS {
        OverS {
            cat: self.cat().clone(),
            card: self.card.clone(),
        }
    }
}

/// A functor `F` with relabellings `ν_X : |X| → |FX|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaxTriangleMor {
    pub functor: Functor,
    pub nu: Vec<SMap>,
}

impl LaxTriangleMor {
    pub fn identity(c: &FinCat, card: &Card) -> LaxTriangleMor {
        LaxTriangleMor {
            functor: Functor::identity(c),
            nu: c.objects().map(|x| SMap::identity(card.obj[x])).collect(),
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &LaxTriangleMor) -> Result<LaxTriangleMor> {
        let nu = self
            .nu
            .iter()
            .enumerate()
            .map(|(x, n)| next.nu[self.functor.obj(x)].compose(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(LaxTriangleMor {
            functor: self.functor.then(&next.functor),
            nu,
        })
    }
}

pub fn check_lax_triangle(src: &FinCat, src_card: &Card, tgt: &FinCat, tgt_card: &Card, t: &LaxTriangleMor) -> Report {
    let mut r = check_functor(src, tgt, &t.functor);
    if !r.is_ok() {
        return r;
    }
    if t.nu.len() != src.num_objects() {
        r.push("relabelling", "one component per object is required");
        return r;
    }
    for x in src.objects() {
        let n = &t.nu[x];
        if n.source() != src_card.obj[x] || n.target() != tgt_card.obj[t.functor.obj(x)] {
            r.push("relabelling", format!("component at {} is mistyped", src.obj_name(x)));
        }
    }
    if !r.is_ok() {
        return r;
    }
    for f in src.morphisms() {
        let left = tgt_card.mor[t.functor.mor(f)].compose(&t.nu[src.dom(f)]);
        let right = t.nu[src.cod(f)].compose(&src_card.mor[f]);
        if left.is_err() || left != right {
            r.push("naturality", src.mor_name(f).to_string());
        }
    }
    r
}

/// Every relabelling is an identity.
pub fn check_strict(t: &LaxTriangleMor) -> bool {
    t.nu.iter().all(SMap::is_identity)
}

/// `D_m(C)` with the tags identifying its objects `(X, i, f)` and
/// morphisms `g : (X, i, f∘g) → (X, i, f)`.
#[derive(Clone, Debug)]
pub struct Dm {
    pub carrier: LtOverS,
    obj_tag: Vec<(Mor, usize)>,
    obj_index: HashMap<(Mor, usize), Obj>,
    mor_tag: Vec<(Mor, Mor, usize)>,
    mor_index: HashMap<(Mor, Mor, usize), Mor>,
}

impl Dm {
    pub fn cat(&self) -> &FinCat {
        self.carrier.cat()
    }

    /// `(f, i)` for the object `(cod f, i, f)`.
    pub fn obj_tag(&self, x: Obj) -> (Mor, usize) {
        self.obj_tag[x]
    }

    /// `(g, f, i)` for the morphism `g : (X, i, f∘g) → (X, i, f)`.
    pub fn mor_tag(&self, m: Mor) -> (Mor, Mor, usize) {
        self.mor_tag[m]
    }

    pub fn object(&self, f: Mor, i: usize) -> Option<Obj> {
        self.obj_index.get(&(f, i)).copied()
    }

    pub fn morphism(&self, g: Mor, f: Mor, i: usize) -> Option<Mor> {
        self.mor_index.get(&(g, f, i)).copied()
    }
}

pub fn dm_object(base: &LtOverS) -> Result<Dm> {
    let c = base.cat();
    let card = &base.card;
    let mut obj_tag = Vec::new();
    for x in c.objects() {
        for i in 1..=card.obj[x] {
            for &f in c.incoming(x) {
                obj_tag.push((f, i));
            }
        }
    }
    let obj_index: HashMap<(Mor, usize), Obj> = obj_tag.iter().enumerate().map(|(k, &t)| (t, k)).collect();
    let mut mor_tag: Vec<(Mor, Mor, usize)> = obj_tag.iter().map(|&(f, i)| (c.id(c.dom(f)), f, i)).collect();
    let mut arrows = Vec::new();
    for &(f, i) in &obj_tag {
        for &g in c.incoming(c.dom(f)) {
            if c.is_identity(g) {
                continue;
            }
            arrows.push((
                format!("{{{};{};{i}}}", c.mor_name(g), c.mor_name(f)),
                obj_index[&(c.comp(f, g), i)],
                obj_index[&(f, i)],
            ));
            mor_tag.push((g, f, i));
        }
    }
    let mor_index: HashMap<(Mor, Mor, usize), Mor> = mor_tag.iter().enumerate().map(|(k, &t)| (t, k)).collect();
    let names = obj_tag
        .iter()
        .map(|&(f, i)| format!("{{{};{i}}}", c.mor_name(f)))
        .collect();
    let cat = FinCat::build(names, arrows, |a, b| {
        let (g, f, i) = mor_tag[a];
        let (h, _, _) = mor_tag[b];
        mor_index[&(c.comp(g, h), f, i)]
    });
    let dcard = Card {
        obj: obj_tag.iter().map(|&(f, i)| fibre_size(&card.mor[f], i)).collect(),
        mor: mor_tag
            .iter()
            .map(|&(g, f, i)| fibre_map(&card.mor[g], &card.mor[f], i))
            .collect::<Result<Vec<_>>>()?,
    };
    let terminals = obj_tag
        .iter()
        .enumerate()
        .filter(|(_, &(f, _))| c.is_identity(f))
        .map(|(k, _)| k)
        .collect();
    let lt = LtCat::new(cat, terminals)?;
    let carrier = LtOverS::new(lt, dcard)?;
    Ok(Dm {
        carrier,
        obj_tag,
        obj_index,
        mor_tag,
        mor_index,
    })
}

/// The counit `E_C` with relabellings `ε_{|f|,i}`.
pub fn dm_counit(base: &LtOverS, dm: &Dm) -> LaxTriangleMor {
    let c = base.cat();
    let functor = Functor::new(
        dm.cat().objects().map(|x| c.dom(dm.obj_tag(x).0)).collect(),
        dm.cat().morphisms().map(|m| dm.mor_tag(m).0).collect(),
    );
    let nu = dm
        .cat()
        .objects()
        .map(|x| {
            let (f, i) = dm.obj_tag(x);
            fibre(&base.card.mor[f], i).unwrap().eps
        })
        .collect();
    LaxTriangleMor { functor, nu }
}

/// `D̃_m(F, ν)`.
pub fn tilde_dm_mor(src: &LtOverS, tgt: &LtOverS, dm_src: &Dm, dm_tgt: &Dm, t: &LaxTriangleMor) -> Result<LaxTriangleMor> {
    let c = src.cat();
    let f_ = &t.functor;
    let mut obj_map = Vec::new();
    let mut nu = Vec::new();
    for x in dm_src.cat().objects() {
        let (f, i) = dm_src.obj_tag(x);
        let i2 = t.nu[c.cod(f)].apply(i);
        let ff = f_.mor(f);
        obj_map.push(
            dm_tgt
                .object(ff, i2)
                .ok_or_else(|| Error::Precondition("image object is missing".into()))?,
        );
        let top = fibre(&src.card.mor[f], i)?.eps;
        let bottom = fibre(&tgt.card.mor[ff], i2)?.eps;
        let nu_y = &t.nu[c.dom(f)];
        let mut values = Vec::new();
        for k in 1..=top.source() {
            let v = nu_y.apply(top.apply(k));
            let p = bottom.values().iter().position(|&b| b == v).ok_or_else(|| {
                Error::NoFactorization(format!("relabelling at {} leaves the fibre", c.obj_name(c.dom(f))))
            })?;
            values.push(p + 1);
        }
        nu.push(SMap::new(values, bottom.source())?);
    }
    let mor_map = dm_src
        .cat()
        .morphisms()
        .map(|m| {
            let (g, f, i) = dm_src.mor_tag(m);
            let i2 = t.nu[c.cod(f)].apply(i);
            dm_tgt
                .morphism(f_.mor(g), f_.mor(f), i2)
                .ok_or_else(|| Error::Precondition("image morphism is missing".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LaxTriangleMor {
        functor: Functor::new(obj_map, mor_map),
        nu,
    })
}

/// The strict unit `X ↦ (uX, 1, τ_X)`, `f ↦ (f : τ_X∘f → τ_X)`.
pub fn tilde_dm_unit(base: &LtOverS, dm: &Dm) -> LaxTriangleMor {
    let c = base.cat();
    let lt = &base.lt;
    LaxTriangleMor {
        functor: Functor::new(
            c.objects().map(|x| dm.object(lt.tau(x), 1).unwrap()).collect(),
            c.morphisms()
                .map(|f| dm.morphism(f, lt.tau(c.cod(f)), 1).unwrap())
                .collect(),
        ),
        nu: c.objects().map(|x| SMap::identity(base.card.obj[x])).collect(),
    }
}

/// The strict multiplication `(X, i, f, j, g) ↦ (Y, εj, g)`, `h ↦ h`.
pub fn tilde_dm_mult(base: &LtOverS, dm: &Dm, dm2: &Dm) -> LaxTriangleMor {
    let obj_map = dm2
        .cat()
        .objects()
        .map(|x| {
            let (m, j) = dm2.obj_tag(x);
            let (g, f, i) = dm.mor_tag(m);
            let ej = fibre(&base.card.mor[f], i).unwrap().eps.apply(j);
            dm.object(g, ej).unwrap()
        })
        .collect();
    let mor_map = dm2
        .cat()
        .morphisms()
        .map(|k| {
            let (a, b, j) = dm2.mor_tag(k);
            let (h, _, _) = dm.mor_tag(a);
            let (g, f, i) = dm.mor_tag(b);
            let ej = fibre(&base.card.mor[f], i).unwrap().eps.apply(j);
            dm.morphism(h, g, ej).unwrap()
        })
        .collect();
    LaxTriangleMor {
        functor: Functor::new(obj_map, mor_map),
        nu: dm2.carrier.card.obj.iter().map(|&n| SMap::identity(n)).collect(),
    }
}

pub fn check_dm_monad_laws(base: &LtOverS) -> Result<Report> {
    let mut r = Report::new();
    let dm = dm_object(base)?;
    let dm2 = dm_object(&dm.carrier)?;
    let dm3 = dm_object(&dm2.carrier)?;
    let eta = tilde_dm_unit(base, &dm);
    let eta_d = tilde_dm_unit(&dm.carrier, &dm2);
    let mu = tilde_dm_mult(base, &dm, &dm2);
    let mu_d = tilde_dm_mult(&dm.carrier, &dm2, &dm3);
    let d_eta = tilde_dm_mor(base, &dm.carrier, &dm, &dm2, &eta)?;
    let d_mu = tilde_dm_mor(&dm2.carrier, &dm.carrier, &dm3, &dm2, &mu)?;
    let id = LaxTriangleMor::identity(dm.cat(), &dm.carrier.card);
    if eta_d.then(&mu)? != id {
        r.push("unit", "μ ∘ η_{D_m} ≠ id");
    }
    if d_eta.then(&mu)? != id {
        r.push("unit", "μ ∘ D_m(η) ≠ id");
    }
    if mu_d.then(&mu)? != d_mu.then(&mu)? {
        r.push("associativity", "μ ∘ μ_{D_m} ≠ μ ∘ D_m(μ)");
    }
    for (name, t) in [("unit", &eta), ("multiplication", &mu)] {
        if !check_strict(t) {
            r.push("strictness", format!("the {name} is not strict"));
        }
    }
    let checks = [
        (base.cat(), &base.card, dm.cat(), &dm.carrier.card, &eta),
        (dm2.cat(), &dm2.carrier.card, dm.cat(), &dm.carrier.card, &mu),
    ];
    for (s, sc, t, tc, m) in checks {
        let rr = check_lax_triangle(s, sc, t, tc, m);
        r.extend(rr);
    }
    Ok(r)
}

/// The category of elements of `|−|` with its projection.
#[derive(Clone, Debug)]
pub struct Elements {
    pub cat: FinCat,
    pub proj: Functor,
    obj_tag: Vec<(Obj, usize)>,
    obj_index: HashMap<(Obj, usize), Obj>,
    mor_tag: Vec<(Mor, usize)>,
    mor_index: HashMap<(Mor, usize), Mor>,
}

impl Elements {
    /// `(X, i)`.
    pub fn obj_tag(&self, e: Obj) -> (Obj, usize) {
        self.obj_tag[e]
    }

    /// `(f, j)` for `f : (Y, j) → (X, |f|(j))`.
    pub fn mor_tag(&self, m: Mor) -> (Mor, usize) {
        self.mor_tag[m]
    }

    pub fn object(&self, x: Obj, i: usize) -> Option<Obj> {
        self.obj_index.get(&(x, i)).copied()
    }

    pub fn morphism(&self, f: Mor, j: usize) -> Option<Mor> {
        self.mor_index.get(&(f, j)).copied()
    }
}

pub fn elements(v: &OverS) -> Elements {
    let c = &v.cat;
    let card = &v.card;
    let obj_tag: Vec<(Obj, usize)> = c.objects().flat_map(|x| (1..=card.obj[x]).map(move |i| (x, i))).collect();
    let obj_index: HashMap<(Obj, usize), Obj> = obj_tag.iter().enumerate().map(|(k, &t)| (t, k)).collect();
    let mut mor_tag: Vec<(Mor, usize)> = obj_tag.iter().map(|&(x, i)| (c.id(x), i)).collect();
    let mut arrows = Vec::new();
    for f in c.non_identities() {
        for j in 1..=card.obj[c.dom(f)] {
            arrows.push((
                format!("{{{};{j}}}", c.mor_name(f)),
                obj_index[&(c.dom(f), j)],
                obj_index[&(c.cod(f), card.mor[f].apply(j))],
            ));
            mor_tag.push((f, j));
        }
    }
    let mor_index: HashMap<(Mor, usize), Mor> = mor_tag.iter().enumerate().map(|(k, &t)| (t, k)).collect();
    let names = obj_tag.iter().map(|&(x, i)| format!("{{{};{i}}}", c.obj_name(x))).collect();
    let cat = FinCat::build(names, arrows, |a, b| {
        let (g, _) = mor_tag[a];
        let (f, j) = mor_tag[b];
        mor_index[&(c.comp(g, f), j)]
    });
    let proj = Functor::new(
        obj_tag.iter().map(|&(x, _)| x).collect(),
        mor_tag.iter().map(|&(f, _)| f).collect(),
    );
    Elements {
        cat,
        proj,
        obj_tag,
        obj_index,
        mor_tag,
        mor_index,
    }
}

/// Objects `Y` and arrows `f : PY → X` with no lift or several lifts.
pub fn opfibration_failures(src: &FinCat, tgt: &FinCat, p: &Functor) -> Vec<String> {
    let mut out = Vec::new();
    for y in src.objects() {
        for &f in tgt.outgoing(p.obj(y)) {
            let lifts = src.outgoing(y).iter().filter(|&&e| p.mor(e) == f).count();
            if lifts != 1 {
                out.push(format!("{} lifts of {} from {}", lifts, tgt.mor_name(f), src.obj_name(y)));
            }
        }
    }
    out
}

pub fn is_discrete_opfib(src: &FinCat, tgt: &FinCat, p: &Functor) -> bool {
    opfibration_failures(src, tgt, p).is_empty()
}

/// Every fibre of a functor between finite categories is finite; kept as
/// a named predicate so that callers state the condition they rely on.
pub fn has_finite_fibres(src: &FinCat, tgt: &FinCat, p: &Functor) -> bool {
    let mut sizes = vec![0usize; tgt.num_objects()];
    for y in src.objects() {
        sizes[p.obj(y)] += 1;
    }
    sizes.iter().sum::<usize>() == src.num_objects()
}

/// `D_m(P) : Σ_Y E/Y → Σ_Y C/PY` for an arbitrary functor `P : E → C`.
#[derive(Clone, Debug)]
pub struct DmArrow {
    pub dom: FinCat,
    pub cod: FinCat,
    pub functor: Functor,
}

pub fn dm_arrow(e: &FinCat, c: &FinCat, p: &Functor) -> DmArrow {
    let de = crate::decalage::dec(e);
    let mut obj_tag: Vec<(Obj, Mor)> = Vec::new();
    for y in e.objects() {
        for &a in c.incoming(p.obj(y)) {
            obj_tag.push((y, a));
        }
    }
    let obj_index: HashMap<(Obj, Mor), Obj> = obj_tag.iter().enumerate().map(|(k, &t)| (t, k)).collect();
    let mut mor_tag: Vec<(Obj, Mor, Mor)> = obj_tag.iter().map(|&(y, a)| (y, c.id(c.dom(a)), a)).collect();
    let mut arrows = Vec::new();
    for &(y, a) in &obj_tag {
        for &g in c.incoming(c.dom(a)) {
            if c.is_identity(g) {
                continue;
            }
            arrows.push((
                format!("{{{};{};{}}}", e.obj_name(y), c.mor_name(g), c.mor_name(a)),
                obj_index[&(y, c.comp(a, g))],
                obj_index[&(y, a)],
            ));
            mor_tag.push((y, g, a));
        }
    }
    let mor_index: HashMap<(Obj, Mor, Mor), Mor> = mor_tag.iter().enumerate().map(|(k, &t)| (t, k)).collect();
    let names = obj_tag
        .iter()
        .map(|&(y, a)| format!("{{{};{}}}", e.obj_name(y), c.mor_name(a)))
        .collect();
    let cod = FinCat::build(names, arrows, |x, z| {
        let (y, g, a) = mor_tag[x];
        let (_, h, _) = mor_tag[z];
        mor_index[&(y, c.comp(g, h), a)]
    });
    let functor = Functor::new(
        de.cat.objects().map(|k| obj_index[&(e.cod(k), p.mor(k))]).collect(),
        de.cat
            .morphisms()
            .map(|m| {
                let (g, k) = de.triangle(m);
                mor_index[&(e.cod(k), p.mor(g), p.mor(k))]
            })
            .collect(),
    );
    DmArrow {
        dom: de.cat,
        cod,
        functor,
    }
}

/// `P = R ∘ L` with `L` π₀-bijective and `R` π₀-cartesian.
#[derive(Clone, Debug)]
pub struct Pi0Factorization {
    pub mid: FinCat,
    pub left: Functor,
    pub right: Functor,
}

pub fn pi0_factorize(src: &FinCat, tgt: &FinCat, p: &Functor) -> Pi0Factorization {
    let cs = connected_components(src);
    let ct = connected_components(tgt);
    let mut parts = Vec::new();
    let mut incl = Vec::new();
    for class in &cs.classes {
        let target_class = &ct.classes[ct.comp_of[p.obj(class[0])]];
        let (sub, inc) = full_subcategory(tgt, target_class);
        parts.push(sub);
        incl.push(inc);
    }
    let co = coproduct(&parts);
    let n_mid = co.cat.num_objects();
    let mut right_obj = vec![0; n_mid];
    let mut right_mor = vec![0; co.cat.num_morphisms()];
    for (k, inj) in co.injections.iter().enumerate() {
        for (local, &g) in inj.obj_map.iter().enumerate() {
            right_obj[g] = incl[k].obj(local);
        }
        for (local, &g) in inj.mor_map.iter().enumerate() {
            right_mor[g] = incl[k].mor(local);
        }
    }
    let back: Vec<(HashMap<Obj, Obj>, HashMap<Mor, Mor>)> = incl
        .iter()
        .map(|inc| {
            (
                inc.obj_map.iter().enumerate().map(|(l, &g)| (g, l)).collect(),
                inc.mor_map.iter().enumerate().map(|(l, &g)| (g, l)).collect(),
            )
        })
        .collect();
    let left = Functor::new(
        src.objects()
            .map(|x| {
                let k = cs.comp_of[x];
                co.injections[k].obj(back[k].0[&p.obj(x)])
            })
            .collect(),
        src.morphisms()
            .map(|m| {
                let k = cs.comp_of[src.dom(m)];
                co.injections[k].mor(back[k].1[&p.mor(m)])
            })
            .collect(),
    );
    Pi0Factorization {
        mid: co.cat,
        left,
        right: Functor::new(right_obj, right_mor),
    }
}

pub fn is_pi0_bijective(src: &FinCat, tgt: &FinCat, f: &Functor) -> bool {
    let cs = connected_components(src);
    let ct = connected_components(tgt);
    if cs.len() != ct.len() {
        return false;
    }
    let mut hit = vec![false; ct.len()];
    for class in &cs.classes {
        let k = ct.comp_of[f.obj(class[0])];
        if std::mem::replace(&mut hit[k], true) {
            return false;
        }
    }
    true
}

pub fn is_pi0_cartesian(src: &FinCat, tgt: &FinCat, f: &Functor) -> bool {
    let cs = connected_components(src);
    let ct = connected_components(tgt);
    for class in &cs.classes {
        let target = &ct.classes[ct.comp_of[f.obj(class[0])]];
        let mut objs: Vec<Obj> = class.iter().map(|&x| f.obj(x)).collect();
        objs.sort_unstable();
        objs.dedup();
        if objs.len() != class.len() || objs != *target {
            return false;
        }
        let src_mors: Vec<Mor> = class.iter().flat_map(|&x| src.outgoing(x).iter().copied()).collect();
        let mut images: Vec<Mor> = src_mors.iter().map(|&m| f.mor(m)).collect();
        images.sort_unstable();
        images.dedup();
        let target_mors = target.iter().map(|&y| tgt.outgoing(y).len()).sum::<usize>();
        if images.len() != src_mors.len() || images.len() != target_mors {
            return false;
        }
    }
    true
}

/// All `d : B → C` with `d ∘ l = u` and `r ∘ d = v` in the square
/// `r ∘ u = v ∘ l`.
pub fn diagonal_fillers(b: &FinCat, c: &FinCat, l: &Functor, r: &Functor, u: &Functor, v: &Functor) -> Vec<Functor> {
    let mut cands: Vec<Vec<Obj>> = b
        .objects()
        .map(|x| c.objects().filter(|&y| r.obj(y) == v.obj(x)).collect())
        .collect();
    for (a, &x) in l.obj_map.iter().enumerate() {
        cands[x].retain(|&y| y == u.obj(a));
    }
    let mut out = Vec::new();
    search_functors(b, c, Some(&cands), &mut |d| {
        if l.then(d) == *u && d.then(r) == *v {
            out.push(d.clone());
        }
        true
    });
    out
}

/// The square `(G, F)` between elements projections induced by a lax
/// triangle: `G(X, i) = (FX, ν_X(i))`.
pub fn upsilon_to_square(v: &OverS, v2: &OverS, t: &LaxTriangleMor) -> Result<Functor> {
    let e = elements(v);
    let e2 = elements(v2);
    let c = &v.cat;
    let obj_map = e
        .cat
        .objects()
        .map(|k| {
            let (x, i) = e.obj_tag(k);
            e2.object(t.functor.obj(x), t.nu[x].apply(i))
                .ok_or_else(|| Error::Precondition("relabelling leaves the cardinality".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mor_map = e
        .cat
        .morphisms()
        .map(|m| {
            let (f, j) = e.mor_tag(m);
            e2.morphism(t.functor.mor(f), t.nu[c.dom(f)].apply(j))
                .ok_or_else(|| Error::Precondition("relabelling leaves the cardinality".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Functor::new(obj_map, mor_map))
}

/// Reads the lax triangle back off a square `P' ∘ G = F ∘ P`.
pub fn upsilon_from_square(v: &OverS, v2: &OverS, g: &Functor, f: &Functor) -> Result<LaxTriangleMor> {
    let e = elements(v);
    let e2 = elements(v2);
    if g.then(&e2.proj) != e.proj.then(f) {
        return Err(Error::NotOverProjections("P' ∘ G ≠ F ∘ P".into()));
    }
    let nu = v
        .cat
        .objects()
        .map(|x| {
            let values = (1..=v.card.obj[x])
                .map(|i| e2.obj_tag(g.obj(e.object(x, i).unwrap())).1)
                .collect();
            SMap::new(values, v2.card.obj[f.obj(x)])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LaxTriangleMor {
        functor: f.clone(),
        nu,
    })
}

/// Given a discrete opfibration `H : E → C` and a linear order on each
/// fibre (`orders[X]` lists the objects over `X`), the category over 𝕊 it
/// presents and the monotone isomorphism `E ≅ el(|−|)` over `C`.
pub fn linear_order_iso(e: &FinCat, c: &FinCat, h: &Functor, orders: &[Vec<Obj>]) -> Result<(OverS, Functor)> {
    if let Some(w) = opfibration_failures(e, c, h).into_iter().next() {
        return Err(Error::NotDiscreteOpfibration(w));
    }
    if orders.len() != c.num_objects() {
        return Err(Error::SizeMismatch("one order per base object is required".into()));
    }
    let mut pos = vec![usize::MAX; e.num_objects()];
    for (x, order) in orders.iter().enumerate() {
        for (k, &y) in order.iter().enumerate() {
            if y >= e.num_objects() || h.obj(y) != x || pos[y] != usize::MAX {
                return Err(Error::Precondition(format!("order over {} is not a listing of its fibre", c.obj_name(x))));
            }
            pos[y] = k + 1;
        }
    }
    if pos.contains(&usize::MAX) {
        return Err(Error::Precondition("some object of the total category is not ordered".into()));
    }
    let mor = c
        .morphisms()
        .map(|f| {
            let values = orders[c.dom(f)]
                .iter()
                .map(|&y| {
                    let lift = *e.outgoing(y).iter().find(|&&m| h.mor(m) == f).unwrap();
                    pos[e.cod(lift)]
                })
                .collect();
            SMap::new(values, orders[c.cod(f)].len())
        })
        .collect::<Result<Vec<_>>>()?;
    let v = OverS::new(
        c.clone(),
        Card {
            obj: orders.iter().map(Vec::len).collect(),
            mor,
        },
    )?;
    let el = elements(&v);
    let iso = Functor::new(
        e.objects().map(|y| el.object(h.obj(y), pos[y]).unwrap()).collect(),
        e.morphisms().map(|m| el.morphism(h.mor(m), pos[e.dom(m)]).unwrap()).collect(),
    );
    Ok((v, iso))
}
