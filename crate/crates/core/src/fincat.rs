//! Finite categories presented by explicit composition tables.
//!
//! Objects and morphisms are dense indices. Morphism `x` for `x < n_objects`
//! is always the identity of object `x`; every construction in this crate
//! keeps that convention so that results can be compared on the nose.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::report::Report;

pub type Obj = usize;
pub type Mor = usize;

#[derive(Clone, Debug)]
pub struct FinCat {
    obj_names: Vec<String>,
    mor_names: Vec<String>,
    dom: Vec<Obj>,
    cod: Vec<Obj>,
    comp: HashMap<(Mor, Mor), Mor>,
    outgoing: Vec<Vec<Mor>>,
    incoming: Vec<Vec<Mor>>,
}

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        self.obj_names == other.obj_names
            && self.mor_names == other.mor_names
            && self.dom == other.dom
            && self.cod == other.cod
            && self.comp == other.comp
    }
}

impl Eq for FinCat {}

pub fn identity_name(obj: &str) -> String {
    format!("id_{obj}")
}

impl FinCat {
    /// Builds a category from objects and non-identity arrows.
    ///
    /// Arrow `k` receives index `n_objects + k`. `compose(g, f)` is called
    /// once for every composable pair of non-identity morphisms and must
    /// return the index of `g ∘ f`.
    pub fn build(
        obj_names: Vec<String>,
        arrows: Vec<(String, Obj, Obj)>,
        mut compose: impl FnMut(Mor, Mor) -> Mor,
    ) -> FinCat {
        let n = obj_names.len();
        let mut mor_names: Vec<String> = obj_names.iter().map(|o| identity_name(o)).collect();
        let mut dom: Vec<Obj> = (0..n).collect();
        let mut cod: Vec<Obj> = (0..n).collect();
        for (name, d, c) in arrows {
            mor_names.push(name);
            dom.push(d);
            cod.push(c);
        }
        let m = dom.len();
        let mut comp = HashMap::new();
        for f in 0..m {
            comp.insert((cod[f], f), f);
            comp.insert((f, dom[f]), f);
        }
        for f in n..m {
            let y = cod[f];
            for g in n..m {
                if dom[g] == y {
                    let h = compose(g, f);
                    comp.insert((g, f), h);
                }
            }
        }
        Self::assemble(obj_names, mor_names, dom, cod, comp)
    }

    /// Raw constructor: takes a full (possibly lawless) composition table.
    /// Only index ranges and the identity-index convention are validated;
    /// use [`check_category`] for the category laws.
    pub fn from_parts(
        obj_names: Vec<String>,
        mor_names: Vec<String>,
        dom: Vec<Obj>,
        cod: Vec<Obj>,
        comp: HashMap<(Mor, Mor), Mor>,
    ) -> Result<FinCat> {
        let n = obj_names.len();
        let m = mor_names.len();
        if dom.len() != m || cod.len() != m {
            return Err(Error::SizeMismatch(format!(
                "{m} morphism names but {} domains and {} codomains",
                dom.len(),
                cod.len()
            )));
        }
        if m < n {
            return Err(Error::MalformedCategory("fewer morphisms than objects".into()));
        }
        for x in 0..n {
            if dom[x] != x || cod[x] != x {
                return Err(Error::MalformedCategory(format!(
                    "morphism {x} must be the identity of object {x}"
                )));
            }
        }
        for f in 0..m {
            if dom[f] >= n || cod[f] >= n {
                return Err(Error::OutOfRange {
                    what: "objects",
                    index: dom[f].max(cod[f]),
                    size: n,
                });
            }
        }
        for (&(g, f), &h) in &comp {
            if g >= m || f >= m || h >= m {
                return Err(Error::OutOfRange {
                    what: "morphisms",
                    index: g.max(f).max(h),
                    size: m,
                });
            }
        }
        Ok(Self::assemble(obj_names, mor_names, dom, cod, comp))
    }

    fn assemble(
        obj_names: Vec<String>,
        mor_names: Vec<String>,
        dom: Vec<Obj>,
        cod: Vec<Obj>,
        comp: HashMap<(Mor, Mor), Mor>,
    ) -> FinCat {
        let n = obj_names.len();
        let mut outgoing = vec![Vec::new(); n];
        let mut incoming = vec![Vec::new(); n];
        for f in 0..dom.len() {
            outgoing[dom[f]].push(f);
            incoming[cod[f]].push(f);
        }
        FinCat {
            obj_names,
            mor_names,
            dom,
            cod,
            comp,
            outgoing,
            incoming,
        }
    }

    pub fn empty() -> FinCat {
        Self::build(Vec::new(), Vec::new(), |_, _| unreachable!())
    }

    /// The terminal category with one object named `name`.
    pub fn point(name: &str) -> FinCat {
        Self::build(vec![name.to_string()], Vec::new(), |_, _| unreachable!())
    }

    /// The poset on `names` whose order is given by `leq`; `leq` must be a
    /// partial order.
    pub fn poset(names: &[&str], leq: impl Fn(usize, usize) -> bool) -> FinCat {
        let n = names.len();
        let mut arrows = Vec::new();
        let mut index = HashMap::new();
        for x in 0..n {
            for y in 0..n {
                if x != y && leq(x, y) {
                    index.insert((x, y), n + arrows.len());
                    arrows.push((format!("{}{}", names[x], names[y]), x, y));
                }
            }
        }
        let ends: Vec<(Obj, Obj)> = arrows.iter().map(|(_, d, c)| (*d, *c)).collect();
        Self::build(
            names.iter().map(|s| s.to_string()).collect(),
            arrows,
            |g, f| {
                let (x, _) = ends[f - n];
                let (_, z) = ends[g - n];
                if x == z {
                    x
                } else {
                    index[&(x, z)]
                }
            },
        )
    }

    /// The single-object category of a monoid with multiplication table
    /// `mul[a][b] = a·b` on elements `0..k`, where `0` is the unit.
    pub fn monoid(name: &str, mul: &[Vec<usize>]) -> FinCat {
        let k = mul.len();
        let arrows = (1..k).map(|e| (format!("e{e}"), 0, 0)).collect();
        Self::build(vec![name.to_string()], arrows, |g, f| mul[g][f])
    }

    /// The arrow category `a → b`.
    pub fn arrow() -> FinCat {
        Self::poset(&["a", "b"], |x, y| x <= y)
    }

    /// `n` objects with only identities.
    pub fn discrete(n: usize) -> FinCat {
        let names = (0..n).map(|i| format!("o{i}")).collect();
        Self::build(names, Vec::new(), |_, _| unreachable!())
    }

    pub fn num_objects(&self) -> usize {
        self.obj_names.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.mor_names.len()
    }

    pub fn objects(&self) -> std::ops::Range<Obj> {
        0..self.num_objects()
    }

    pub fn morphisms(&self) -> std::ops::Range<Mor> {
        0..self.num_morphisms()
    }

    pub fn non_identities(&self) -> std::ops::Range<Mor> {
        self.num_objects()..self.num_morphisms()
    }

    pub fn dom(&self, f: Mor) -> Obj {
        self.dom[f]
    }

    pub fn cod(&self, f: Mor) -> Obj {
        self.cod[f]
    }

    pub fn id(&self, x: Obj) -> Mor {
        x
    }

    pub fn is_identity(&self, f: Mor) -> bool {
        f < self.num_objects()
    }

    /// `g ∘ f`, when recorded.
    pub fn compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        self.comp.get(&(g, f)).copied()
    }

    /// `g ∘ f` for a composable pair of a category that passed
    /// [`check_category`].
    pub fn comp(&self, g: Mor, f: Mor) -> Mor {
        match self.comp.get(&(g, f)) {
            Some(&h) => h,
            None => panic!(
                "composite {} ∘ {} is not defined",
                self.mor_names[g], self.mor_names[f]
            ),
        }
    }

    pub fn table(&self) -> &HashMap<(Mor, Mor), Mor> {
        &self.comp
    }

    /// Composition table entries sorted by key.
    pub fn sorted_table(&self) -> Vec<((Mor, Mor), Mor)> {
        let mut v: Vec<_> = self.comp.iter().map(|(&k, &h)| (k, h)).collect();
        v.sort_unstable();
        v
    }

    pub fn outgoing(&self, x: Obj) -> &[Mor] {
        &self.outgoing[x]
    }

    pub fn incoming(&self, x: Obj) -> &[Mor] {
        &self.incoming[x]
    }

    pub fn hom(&self, x: Obj, y: Obj) -> Vec<Mor> {
        self.outgoing[x].iter().copied().filter(|&f| self.cod[f] == y).collect()
    }

    pub fn obj_name(&self, x: Obj) -> &str {
        &self.obj_names[x]
    }

    pub fn mor_name(&self, f: Mor) -> &str {
        &self.mor_names[f]
    }

    pub fn obj_names(&self) -> &[String] {
        &self.obj_names
    }

    pub fn mor_names(&self) -> &[String] {
        &self.mor_names
    }

    pub fn find_object(&self, name: &str) -> Option<Obj> {
        self.obj_names.iter().position(|n| n == name)
    }

    pub fn find_morphism(&self, name: &str) -> Option<Mor> {
        self.mor_names.iter().position(|n| n == name)
    }

    /// Composable pairs `(g, f)` with `cod f = dom g`, sorted.
    pub fn composable_pairs(&self) -> Vec<(Mor, Mor)> {
        let mut v = Vec::new();
        for f in self.morphisms() {
            for &g in &self.outgoing[self.cod[f]] {
                v.push((g, f));
            }
        }
        v.sort_unstable();
        v
    }

    /// Equality of dom/cod/composition data, ignoring names.
    pub fn same_shape(&self, other: &FinCat) -> bool {
        self.num_objects() == other.num_objects()
            && self.dom == other.dom
            && self.cod == other.cod
            && self.comp == other.comp
    }

    /// A copy with new names; identity names are regenerated from the
    /// object names.
    pub fn renamed(&self, obj_names: Vec<String>, non_identity_names: Vec<String>) -> FinCat {
        assert_eq!(obj_names.len(), self.num_objects());
        assert_eq!(non_identity_names.len(), self.num_morphisms() - self.num_objects());
        let mut mor_names: Vec<String> = obj_names.iter().map(|o| identity_name(o)).collect();
        mor_names.extend(non_identity_names);
        Self::assemble(obj_names, mor_names, self.dom.clone(), self.cod.clone(), self.comp.clone())
    }
}

/// Checks every category law; the report is empty iff `c` is a category.
pub fn check_category(c: &FinCat) -> Report {
    let mut r = Report::new();
    let m = c.num_morphisms();
    for f in 0..m {
        for g in 0..m {
            let composable = c.cod(f) == c.dom(g);
            match (composable, c.compose(g, f)) {
                (true, None) => r.push(
                    "composition",
                    format!("missing {} ∘ {}", c.mor_name(g), c.mor_name(f)),
                ),
                (false, Some(_)) => r.push(
                    "composition",
                    format!("{} ∘ {} recorded for a non-composable pair", c.mor_name(g), c.mor_name(f)),
                ),
                _ => {}
            }
        }
    }
    let typed = |g: Mor, f: Mor| -> Option<Mor> {
        let h = c.compose(g, f)?;
        (c.cod(f) == c.dom(g) && c.dom(h) == c.dom(f) && c.cod(h) == c.cod(g)).then_some(h)
    };
    for ((g, f), h) in c.sorted_table() {
        if c.cod(f) == c.dom(g) && (c.dom(h) != c.dom(f) || c.cod(h) != c.cod(g)) {
            r.push(
                "typing",
                format!(
                    "{} ∘ {} = {} has the wrong domain or codomain",
                    c.mor_name(g),
                    c.mor_name(f),
                    c.mor_name(h)
                ),
            );
        }
    }
    for f in 0..m {
        if c.compose(c.id(c.cod(f)), f) != Some(f) {
            r.push("unit", format!("id ∘ {} ≠ {}", c.mor_name(f), c.mor_name(f)));
        }
        if c.compose(f, c.id(c.dom(f))) != Some(f) {
            r.push("unit", format!("{} ∘ id ≠ {}", c.mor_name(f), c.mor_name(f)));
        }
    }
    for (g, f) in c.composable_pairs() {
        let Some(gf) = typed(g, f) else { continue };
        for &h in c.outgoing(c.cod(g)) {
            let (Some(hg), Some(left)) = (typed(h, g), typed(h, gf)) else {
                continue;
            };
            let Some(right) = typed(hg, f) else { continue };
            if left != right {
                r.push(
                    "associativity",
                    format!("({} ∘ {}) ∘ {}", c.mor_name(h), c.mor_name(g), c.mor_name(f)),
                );
            }
        }
    }
    r
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Functor {
    pub obj_map: Vec<Obj>,
    pub mor_map: Vec<Mor>,
}

impl Functor {
    pub fn new(obj_map: Vec<Obj>, mor_map: Vec<Mor>) -> Self {
        Functor { obj_map, mor_map }
    }

    pub fn identity(c: &FinCat) -> Self {
        Functor::new(c.objects().collect(), c.morphisms().collect())
    }

    pub fn obj(&self, x: Obj) -> Obj {
        self.obj_map[x]
    }

    pub fn mor(&self, f: Mor) -> Mor {
        self.mor_map[f]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Functor) -> Functor {
        Functor::new(
            self.obj_map.iter().map(|&x| next.obj_map[x]).collect(),
            self.mor_map.iter().map(|&f| next.mor_map[f]).collect(),
        )
    }
}

/// On-the-nose equality of object and morphism maps.
pub fn functor_equal(a: &Functor, b: &Functor) -> bool {
    a == b
}

pub fn check_functor(src: &FinCat, tgt: &FinCat, f: &Functor) -> Report {
    let mut r = Report::new();
    if f.obj_map.len() != src.num_objects() || f.mor_map.len() != src.num_morphisms() {
        r.push("endpoints", "functor maps do not match the source category");
        return r;
    }
    if f.obj_map.iter().any(|&x| x >= tgt.num_objects()) || f.mor_map.iter().any(|&m| m >= tgt.num_morphisms()) {
        r.push("endpoints", "functor maps leave the target category");
        return r;
    }
    for m in src.morphisms() {
        let fm = f.mor(m);
        if tgt.dom(fm) != f.obj(src.dom(m)) || tgt.cod(fm) != f.obj(src.cod(m)) {
            r.push("dom/cod", format!("{} ↦ {}", src.mor_name(m), tgt.mor_name(fm)));
        }
    }
    for x in src.objects() {
        if f.mor(src.id(x)) != tgt.id(f.obj(x)) {
            r.push("identity", src.obj_name(x).to_string());
        }
    }
    for (g, h) in src.composable_pairs() {
        let gh = src.comp(g, h);
        if tgt.compose(f.mor(g), f.mor(h)) != Some(f.mor(gh)) {
            r.push("composition", format!("{} ∘ {}", src.mor_name(g), src.mor_name(h)));
        }
    }
    r
}

/// A natural transformation between parallel functors, by components.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NatTrans {
    pub components: Vec<Mor>,
}

pub fn check_nat_trans(src: &FinCat, tgt: &FinCat, f: &Functor, g: &Functor, alpha: &NatTrans) -> Report {
    let mut r = Report::new();
    if f.obj_map.len() != src.num_objects()
        || g.obj_map.len() != src.num_objects()
        || alpha.components.len() != src.num_objects()
    {
        r.push("endpoints", "components do not match the source category");
        return r;
    }
    for x in src.objects() {
        let a = alpha.components[x];
        if a >= tgt.num_morphisms() || tgt.dom(a) != f.obj(x) || tgt.cod(a) != g.obj(x) {
            r.push("component", format!("component at {} is mistyped", src.obj_name(x)));
            return r;
        }
    }
    for m in src.morphisms() {
        let (y, x) = (src.dom(m), src.cod(m));
        let left = tgt.compose(g.mor(m), alpha.components[y]);
        let right = tgt.compose(alpha.components[x], f.mor(m));
        if left.is_none() || left != right {
            r.push("naturality", src.mor_name(m).to_string());
        }
    }
    r
}

/// Partition of the objects into connected components, numbered by their
/// least object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    pub comp_of: Vec<usize>,
    pub classes: Vec<Vec<Obj>>,
}

impl Components {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

pub fn connected_components(c: &FinCat) -> Components {
    let n = c.num_objects();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for f in c.morphisms() {
        let a = find(&mut parent, c.dom(f));
        let b = find(&mut parent, c.cod(f));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut comp_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<Obj>> = Vec::new();
    let mut root_id: HashMap<usize, usize> = HashMap::new();
    for x in 0..n {
        let r = find(&mut parent, x);
        let id = *root_id.entry(r).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        comp_of[x] = id;
        classes[id].push(x);
    }
    Components { comp_of, classes }
}

/// `t` is terminal in its connected component.
pub fn is_terminal_in_component(c: &FinCat, comps: &Components, t: Obj) -> bool {
    comps.classes[comps.comp_of[t]]
        .iter()
        .all(|&y| c.hom(y, t).len() == 1)
}

/// A category endowed with one chosen terminal object per connected
/// component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LtCat {
    cat: FinCat,
    comps: Components,
    terminals: Vec<Obj>,
    tau: Vec<Mor>,
}

impl LtCat {
    /// `terminals[k]` is the chosen terminal of component `k`.
    pub fn new(cat: FinCat, terminals: Vec<Obj>) -> Result<LtCat> {
        let comps = connected_components(&cat);
        if terminals.len() != comps.len() {
            return Err(Error::NotLocalTerminal(format!(
                "{} terminals for {} components",
                terminals.len(),
                comps.len()
            )));
        }
        for (k, &t) in terminals.iter().enumerate() {
            if t >= cat.num_objects() || comps.comp_of[t] != k {
                return Err(Error::NotLocalTerminal(format!("terminal {t} is not in component {k}")));
            }
            if !is_terminal_in_component(&cat, &comps, t) {
                return Err(Error::NotLocalTerminal(format!(
                    "{} is not terminal in its component",
                    cat.obj_name(t)
                )));
            }
        }
        let tau = cat
            .objects()
            .map(|x| cat.hom(x, terminals[comps.comp_of[x]])[0])
            .collect();
        Ok(LtCat {
            cat,
            comps,
            terminals,
            tau,
        })
    }

    /// Matches each chosen object to its component.
    pub fn from_terminal_set(cat: FinCat, chosen: &[Obj]) -> Result<LtCat> {
        let comps = connected_components(&cat);
        let mut terminals = vec![usize::MAX; comps.len()];
        for &t in chosen {
            if t >= cat.num_objects() {
                return Err(Error::OutOfRange {
                    what: "objects",
                    index: t,
                    size: cat.num_objects(),
                });
            }
            let k = comps.comp_of[t];
            if terminals[k] != usize::MAX {
                return Err(Error::NotLocalTerminal(format!("two terminals chosen in component {k}")));
            }
            terminals[k] = t;
        }
        if terminals.contains(&usize::MAX) {
            return Err(Error::NotLocalTerminal("some component has no chosen terminal".into()));
        }
        LtCat::new(cat, terminals)
    }

    pub fn cat(&self) -> &FinCat {
        &self.cat
    }

    pub fn into_cat(self) -> FinCat {
        self.cat
    }

    pub fn components(&self) -> &Components {
        &self.comps
    }

    pub fn terminals(&self) -> &[Obj] {
        &self.terminals
    }

    /// The chosen terminal in the component of `x`.
    pub fn u(&self, x: Obj) -> Obj {
        self.terminals[self.comps.comp_of[x]]
    }

    /// The unique map `x → u(x)`.
    pub fn tau(&self, x: Obj) -> Mor {
        self.tau[x]
    }

    pub fn is_chosen_terminal(&self, x: Obj) -> bool {
        self.u(x) == x
    }
}

/// Every way of choosing one terminal per component; empty when some
/// component has none.
pub fn local_terminal_choices(c: &FinCat) -> Vec<LtCat> {
    let comps = connected_components(c);
    let candidates: Vec<Vec<Obj>> = comps
        .classes
        .iter()
        .map(|class| {
            class
                .iter()
                .copied()
                .filter(|&t| is_terminal_in_component(c, &comps, t))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut pick = Vec::with_capacity(candidates.len());
    fn rec(
        c: &FinCat,
        candidates: &[Vec<Obj>],
        pick: &mut Vec<Obj>,
        out: &mut Vec<LtCat>,
    ) {
        if pick.len() == candidates.len() {
            out.push(LtCat::new(c.clone(), pick.clone()).expect("terminal candidates are terminal"));
            return;
        }
        for &t in &candidates[pick.len()] {
            pick.push(t);
            rec(c, candidates, pick, out);
            pick.pop();
        }
    }
    rec(c, &candidates, &mut pick, &mut out);
    out
}

/// The slice `C/X` together with its domain projection.
#[derive(Clone, Debug)]
pub struct Slice {
    pub cat: FinCat,
    pub proj: Functor,
    /// Slice object `k` is the arrow `arrows[k]` into `X`.
    pub arrows: Vec<Mor>,
    /// Slice morphism `k` is the triangle `tris[k] = (g, f)`, i.e.
    /// `g : f∘g → f`.
    pub tris: Vec<(Mor, Mor)>,
}

pub fn slice(c: &FinCat, x: Obj) -> Slice {
    let arrows: Vec<Mor> = c.incoming(x).to_vec();
    let obj_of: HashMap<Mor, Obj> = arrows.iter().enumerate().map(|(k, &f)| (f, k)).collect();
    let n = arrows.len();
    let mut tris: Vec<(Mor, Mor)> = arrows.iter().map(|&f| (c.id(c.dom(f)), f)).collect();
    let mut names = Vec::new();
    let mut ends = Vec::new();
    for &f in &arrows {
        for &g in c.incoming(c.dom(f)) {
            if c.is_identity(g) {
                continue;
            }
            tris.push((g, f));
            names.push(format!("{{{};{}}}", c.mor_name(g), c.mor_name(f)));
            ends.push((obj_of[&c.comp(f, g)], obj_of[&f]));
        }
    }
    let tri_index: HashMap<(Mor, Mor), Mor> = tris.iter().enumerate().map(|(k, &t)| (t, k)).collect();
    let obj_names = arrows.iter().map(|&f| c.mor_name(f).to_string()).collect();
    let arrows_def = names
        .into_iter()
        .zip(ends)
        .map(|(name, (d, e))| (name, d, e))
        .collect();
    let cat = FinCat::build(obj_names, arrows_def, |a, b| {
        let (g, f) = tris[a];
        let (h, _) = tris[b];
        tri_index[&(c.comp(g, h), f)]
    });
    let proj = Functor::new(
        arrows.iter().map(|&f| c.dom(f)).collect(),
        tris.iter().map(|&(g, _)| g).collect(),
    );
    debug_assert_eq!(cat.num_objects(), n);
    Slice {
        cat,
        proj,
        arrows,
        tris,
    }
}

/// Disjoint union with injections; object and morphism names are prefixed
/// with the summand index.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub cat: FinCat,
    pub injections: Vec<Functor>,
}

pub fn coproduct(parts: &[FinCat]) -> Coproduct {
    let mut obj_names = Vec::new();
    let mut obj_offset = Vec::new();
    for (k, p) in parts.iter().enumerate() {
        obj_offset.push(obj_names.len());
        obj_names.extend(p.obj_names().iter().map(|o| format!("{k}.{o}")));
    }
    let n = obj_names.len();
    let mut arrows = Vec::new();
    let mut mor_offset = Vec::new();
    for (k, p) in parts.iter().enumerate() {
        mor_offset.push(n + arrows.len());
        for f in p.non_identities() {
            arrows.push((
                format!("{k}.{}", p.mor_name(f)),
                obj_offset[k] + p.dom(f),
                obj_offset[k] + p.cod(f),
            ));
        }
    }
    let injections: Vec<Functor> = parts
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let obj_map: Vec<Obj> = p.objects().map(|x| obj_offset[k] + x).collect();
            let mor_map = p
                .morphisms()
                .map(|f| {
                    if p.is_identity(f) {
                        obj_offset[k] + f
                    } else {
                        mor_offset[k] + (f - p.num_objects())
                    }
                })
                .collect();
            Functor::new(obj_map, mor_map)
        })
        .collect();
    // owner[m] = (part, local morphism) for non-identity m
    let mut owner = Vec::new();
    for (k, p) in parts.iter().enumerate() {
        for f in p.non_identities() {
            owner.push((k, f));
        }
    }
    let cat = FinCat::build(obj_names, arrows, |g, f| {
        let (k, lg) = owner[g - n];
        let (_, lf) = owner[f - n];
        injections[k].mor(parts[k].comp(lg, lf))
    });
    Coproduct { cat, injections }
}

/// Full subcategory on `objs` (in the given order) with its inclusion.
pub fn full_subcategory(c: &FinCat, objs: &[Obj]) -> (FinCat, Functor) {
    let local: HashMap<Obj, Obj> = objs.iter().enumerate().map(|(k, &x)| (x, k)).collect();
    let n = objs.len();
    let mut arrows = Vec::new();
    let mut mor_map: Vec<Mor> = objs.iter().map(|&x| c.id(x)).collect();
    let mut local_mor: HashMap<Mor, Mor> = objs.iter().enumerate().map(|(k, &x)| (c.id(x), k)).collect();
    for f in c.non_identities() {
        if let (Some(&d), Some(&e)) = (local.get(&c.dom(f)), local.get(&c.cod(f))) {
            local_mor.insert(f, n + arrows.len());
            mor_map.push(f);
            arrows.push((c.mor_name(f).to_string(), d, e));
        }
    }
    let sub = FinCat::build(
        objs.iter().map(|&x| c.obj_name(x).to_string()).collect(),
        arrows,
        |g, f| local_mor[&c.comp(mor_map[g], mor_map[f])],
    );
    (sub, Functor::new(objs.to_vec(), mor_map))
}

/// All functors `src → tgt`, optionally restricting the image of each
/// object to a candidate list. Results are in lexicographic search order.
pub fn enumerate_functors(src: &FinCat, tgt: &FinCat, obj_candidates: Option<&[Vec<Obj>]>) -> Vec<Functor> {
    let mut out = Vec::new();
    search_functors(src, tgt, obj_candidates, &mut |f| {
        out.push(f.clone());
        true
    });
    out
}

/// Backtracking functor search; `visit` returns `false` to stop early.
pub fn search_functors(
    src: &FinCat,
    tgt: &FinCat,
    obj_candidates: Option<&[Vec<Obj>]>,
    visit: &mut dyn FnMut(&Functor) -> bool,
) {
    let n = src.num_objects();
    let all: Vec<Obj> = tgt.objects().collect();
    let cands: Vec<Vec<Obj>> = match obj_candidates {
        Some(c) => c.to_vec(),
        None => vec![all; n],
    };
    // Constraint (a, b, c) meaning F(a)∘F(b) = F(c) is checked when the last
    // of the non-identity members is assigned.
    let non_ids: Vec<Mor> = src.non_identities().collect();
    let pos = |m: Mor| -> Option<usize> { (!src.is_identity(m)).then(|| m - n) };
    let mut checks: Vec<Vec<(Mor, Mor, Mor)>> = vec![Vec::new(); non_ids.len()];
    for (g, f) in src.composable_pairs() {
        if src.is_identity(g) || src.is_identity(f) {
            continue;
        }
        let h = src.comp(g, f);
        let last = [pos(g), pos(f), pos(h)].into_iter().flatten().max().unwrap();
        checks[last].push((g, f, h));
    }
    let mut functor = Functor::new(vec![0; n], vec![0; src.num_morphisms()]);
    let mut stop = false;
    assign_objects(src, tgt, &cands, &non_ids, &checks, 0, &mut functor, visit, &mut stop);
}

#[allow(clippy::too_many_arguments)]
fn assign_objects(
    src: &FinCat,
    tgt: &FinCat,
    cands: &[Vec<Obj>],
    non_ids: &[Mor],
    checks: &[Vec<(Mor, Mor, Mor)>],
    x: Obj,
    f: &mut Functor,
    visit: &mut dyn FnMut(&Functor) -> bool,
    stop: &mut bool,
) {
    if *stop {
        return;
    }
    if x == src.num_objects() {
        for y in src.objects() {
            f.mor_map[y] = tgt.id(f.obj_map[y]);
        }
        assign_morphisms(src, tgt, non_ids, checks, 0, f, visit, stop);
        return;
    }
    for &t in &cands[x] {
        f.obj_map[x] = t;
        let reachable = src.non_identities().all(|m| {
            let (a, b) = (src.dom(m), src.cod(m));
            a.max(b) != x || tgt.outgoing(f.obj_map[a]).iter().any(|&g| tgt.cod(g) == f.obj_map[b])
        });
        if !reachable {
            continue;
        }
        assign_objects(src, tgt, cands, non_ids, checks, x + 1, f, visit, stop);
        if *stop {
            return;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn assign_morphisms(
    src: &FinCat,
    tgt: &FinCat,
    non_ids: &[Mor],
    checks: &[Vec<(Mor, Mor, Mor)>],
    k: usize,
    f: &mut Functor,
    visit: &mut dyn FnMut(&Functor) -> bool,
    stop: &mut bool,
) {
    if *stop {
        return;
    }
    if k == non_ids.len() {
        if !visit(f) {
            *stop = true;
        }
        return;
    }
    let m = non_ids[k];
    let d = f.obj_map[src.dom(m)];
    let c = f.obj_map[src.cod(m)];
    for t in tgt.hom(d, c) {
        f.mor_map[m] = t;
        let ok = checks[k]
            .iter()
            .all(|&(g, h, gh)| tgt.compose(f.mor_map[g], f.mor_map[h]) == Some(f.mor_map[gh]));
        if ok {
            assign_morphisms(src, tgt, non_ids, checks, k + 1, f, visit, stop);
            if *stop {
                return;
            }
        }
    }
}

/// Isomorphism search. Diagnostic only; never used to decide equality.
pub fn find_isomorphism(a: &FinCat, b: &FinCat) -> Option<Functor> {
    if a.num_objects() != b.num_objects() || a.num_morphisms() != b.num_morphisms() {
        return None;
    }
    let mut found = None;
    search_functors(a, b, None, &mut |f| {
        let objs: HashSet<Obj> = f.obj_map.iter().copied().collect();
        let mors: HashSet<Mor> = f.mor_map.iter().copied().collect();
        if objs.len() == b.num_objects() && mors.len() == b.num_morphisms() {
            found = Some(f.clone());
            false
        } else {
            true
        }
    });
    found
}

/// A key that is equal for two categories iff they are isomorphic, found by
/// brute force over relabellings. Only meant for the tiny categories of the
/// enumeration corpus.
pub fn canonical_key(c: &FinCat) -> Vec<usize> {
    let n = c.num_objects();
    let mut best: Option<Vec<usize>> = None;
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p| {
        // p[x] = new label of object x
        let mut slots: BTreeMap<(usize, usize), Vec<Mor>> = BTreeMap::new();
        for f in c.non_identities() {
            slots.entry((p[c.dom(f)], p[c.cod(f)])).or_default().push(f);
        }
        let groups: Vec<Vec<Mor>> = slots.values().cloned().collect();
        let keys: Vec<(usize, usize)> = slots.keys().copied().collect();
        let mut orders: Vec<Vec<Mor>> = groups.clone();
        enumerate_group_orders(&groups, 0, &mut orders, &mut |ord| {
            let mut label = vec![0usize; c.num_morphisms()];
            for x in 0..n {
                label[x] = p[x];
            }
            let mut next = n;
            let mut key = vec![n];
            for (g, ks) in ord.iter().zip(&keys) {
                for &f in g {
                    label[f] = next;
                    next += 1;
                    key.push(ks.0);
                    key.push(ks.1);
                }
            }
            let mut table: Vec<(usize, usize, usize)> = c
                .table()
                .iter()
                .map(|(&(g, f), &h)| (label[g], label[f], label[h]))
                .collect();
            table.sort_unstable();
            key.push(usize::MAX);
            for (a, b, h) in table {
                key.extend([a, b, h]);
            }
            if best.as_ref().map_or(true, |b| key < *b) {
                best = Some(key);
            }
        });
    });
    best.unwrap_or_default()
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

fn enumerate_group_orders(
    groups: &[Vec<Mor>],
    k: usize,
    cur: &mut Vec<Vec<Mor>>,
    visit: &mut dyn FnMut(&[Vec<Mor>]),
) {
    if k == groups.len() {
        visit(cur);
        return;
    }
    let mut g = groups[k].clone();
    permute(&mut g, 0, &mut |order| {
        cur[k] = order.to_vec();
        enumerate_group_orders(groups, k + 1, cur, visit);
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two() -> FinCat {
        FinCat::arrow()
    }

    #[test]
    fn point_and_arrow_are_categories() {
        assert!(check_category(&FinCat::point("t")).is_ok());
        assert!(check_category(&two()).is_ok());
    }

    #[test]
    fn corrupted_unit_is_reported_once() {
        let c = two();
        let f = c.find_morphism("ab").unwrap();
        let id_b = c.id(1);
        let mut table = c.table().clone();
        table.insert((id_b, f), id_b);
        let bad = FinCat::from_parts(
            c.obj_names().to_vec(),
            c.mor_names().to_vec(),
            c.morphisms().map(|m| c.dom(m)).collect(),
            c.morphisms().map(|m| c.cod(m)).collect(),
            table,
        )
        .unwrap();
        let r = check_category(&bad);
        assert_eq!(r.count("unit"), 1, "{r}");
        assert_eq!(r.count("associativity"), 0);
    }

    #[test]
    fn components_of_small_categories() {
        let pp = coproduct(&[FinCat::point("t"), FinCat::point("t")]).cat;
        assert_eq!(connected_components(&pp).len(), 2);
        assert_eq!(connected_components(&two()).len(), 1);
        let c = coproduct(&[two(), FinCat::point("t")]).cat;
        assert_eq!(c.num_objects(), 3);
        assert_eq!(connected_components(&c).len(), 2);
        assert!(check_category(&c).is_ok());
        assert!(coproduct(&[]).cat.num_objects() == 0);
    }

    #[test]
    fn slices_of_the_arrow() {
        let c = two();
        let sa = slice(&c, 0);
        assert_eq!(sa.cat.num_objects(), 1);
        assert_eq!(sa.cat.num_morphisms(), 1);
        let sb = slice(&c, 1);
        assert_eq!(sb.cat.num_objects(), 2);
        assert_eq!(sb.cat.num_morphisms(), 3);
        let f = c.find_morphism("ab").unwrap();
        let nonid = sb.cat.non_identities().next().unwrap();
        assert_eq!(sb.tris[nonid], (f, c.id(1)));
        assert!(check_category(&sb.cat).is_ok());
        assert!(check_functor(&sb.cat, &c, &sb.proj).is_ok());
        let p = FinCat::point("t");
        assert!(slice(&p, 0).cat.same_shape(&p));
    }

    #[test]
    fn local_terminals() {
        assert_eq!(local_terminal_choices(&two()).len(), 1);
        assert_eq!(local_terminal_choices(&two())[0].terminals(), &[1]);
        assert_eq!(local_terminal_choices(&FinCat::discrete(2)).len(), 1);
        let parallel = FinCat::build(
            vec!["a".into(), "b".into()],
            vec![("f".into(), 0, 1), ("g".into(), 0, 1)],
            |_, _| unreachable!(),
        );
        assert!(check_category(&parallel).is_ok());
        assert!(local_terminal_choices(&parallel).is_empty());
    }

    #[test]
    fn functor_checks() {
        let c = two();
        assert!(check_functor(&c, &c, &Functor::identity(&c)).is_ok());
        let pp = coproduct(&[FinCat::point("t"), FinCat::point("t")]).cat;
        let swap = Functor::new(vec![1, 0], vec![0, 1]);
        let r = check_functor(&pp, &pp, &swap);
        assert!(r.has("dom/cod"), "{r}");
    }

    #[test]
    fn natural_transformation_check() {
        let c = two();
        let f = c.find_morphism("ab").unwrap();
        // constant functors at a and at b from the point, with component f
        let p = FinCat::point("t");
        let ca = Functor::new(vec![0], vec![0]);
        let cb = Functor::new(vec![1], vec![1]);
        let alpha = NatTrans { components: vec![f] };
        assert!(check_nat_trans(&p, &c, &ca, &cb, &alpha).is_ok());
        let back = NatTrans { components: vec![f] };
        assert!(!check_nat_trans(&p, &c, &cb, &ca, &back).is_ok());
    }

    #[test]
    fn functor_enumeration_counts() {
        // functors 2 → 2 are the monotone maps of the two-element chain
        assert_eq!(enumerate_functors(&two(), &two(), None).len(), 3);
        let m = FinCat::monoid("*", &[vec![0, 1], vec![1, 1]]);
        // endomorphisms of the idempotent monoid {1, e}
        assert_eq!(enumerate_functors(&m, &m, None).len(), 2);
    }

    #[test]
    fn canonical_keys_detect_isomorphism() {
        let a = FinCat::poset(&["x", "y"], |i, j| i <= j);
        let b = FinCat::poset(&["x", "y"], |i, j| i >= j);
        assert_eq!(canonical_key(&a), canonical_key(&b));
        assert!(find_isomorphism(&a, &b).is_some());
        assert_ne!(canonical_key(&a), canonical_key(&FinCat::discrete(2)));
    }

    #[test]
    fn full_subcategory_inclusion() {
        let c = FinCat::poset(&["a", "b", "c"], |i, j| i <= j);
        let (sub, inc) = full_subcategory(&c, &[0, 2]);
        assert_eq!(sub.num_morphisms(), 3);
        assert!(check_category(&sub).is_ok());
        assert!(check_functor(&sub, &c, &inc).is_ok());
    }
}
