//! A line-oriented text format for categories, structures over 𝕊,
//! operadic structures and functors between them.
//!
//! ```text
//! category two
//! objects a b
//! morphism f : a -> b
//! terminal a = b
//! functor swap : two -> two
//! obj a = a
//! ```
//!
//! Tokens are separated by whitespace; `( ) , [ ] =` are tokens on their
//! own and `#` starts a comment. Identities are implicit and named
//! `id_<object>`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, ParseError, Result};
use crate::fincat::{connected_components, identity_name, FinCat, Functor, LtCat, Mor, Obj};
use crate::moddec::{LtOverS, OverS};
use crate::operadic::{check_unary, OperadicStructure};
use crate::simplicial::TruncatedSSet;
use crate::sskel::{Card, SMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Category(FinCat),
    Lt(LtCat),
    Over(OverS),
    LtOver(LtOverS),
    Operadic(OperadicStructure),
}

impl Structure {
    pub fn cat(&self) -> &FinCat {
        match self {
            Structure::Category(c) => c,
            Structure::Lt(lt) => lt.cat(),
            Structure::Over(v) => &v.cat,
            Structure::LtOver(v) => v.cat(),
            Structure::Operadic(s) => s.cat(),
        }
    }

    pub fn card(&self) -> Option<&Card> {
        match self {
            Structure::Over(v) => Some(&v.card),
            Structure::LtOver(v) => Some(&v.card),
            Structure::Operadic(s) => Some(&s.card),
            _ => None,
        }
    }

    pub fn lt(&self) -> Option<&LtCat> {
        match self {
            Structure::Lt(lt) => Some(lt),
            Structure::LtOver(v) => Some(&v.lt),
            Structure::Operadic(s) => Some(&s.lt),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Structure::Category(_) => "category",
            Structure::Lt(_) => "category with local terminals",
            Structure::Over(_) => "category over S",
            Structure::LtOver(_) => "category over S with local terminals",
            Structure::Operadic(s) if s.is_lax() => "lax-operadic category",
            Structure::Operadic(_) => "operadic category",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorDoc {
    pub name: String,
    pub source: String,
    pub target: String,
    pub functor: Functor,
    pub nu: Option<Vec<SMap>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub structures: Vec<(String, Structure)>,
    pub functors: Vec<FunctorDoc>,
    pub ssets: Vec<(String, TruncatedSSet)>,
}

impl Document {
    pub fn structure(&self, name: &str) -> Option<&Structure> {
        self.structures.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    /// The first structure, for one-structure files.
    pub fn single(&self) -> Result<&Structure> {
        self.structures
            .first()
            .map(|(_, s)| s)
            .ok_or_else(|| perr(0, "the document declares no category"))
    }
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse(vec![ParseError {
        line,
        message: message.into(),
    }])
}

fn tokens(line: &str) -> Vec<String> {
    let line = line.split('#').next().unwrap_or("");
    let mut padded = String::with_capacity(line.len());
    for ch in line.chars() {
        if "(),[]=".contains(ch) {
            padded.push(' ');
            padded.push(ch);
            padded.push(' ');
        } else {
            padded.push(ch);
        }
    }
    padded.split_whitespace().map(str::to_string).collect()
}

#[derive(Default)]
struct RawCategory {
    name: String,
    line: usize,
    objects: Vec<(String, usize)>,
    morphisms: Vec<(String, String, String, usize)>,
    composes: Vec<(String, String, String, usize)>,
    terminals: Vec<(String, String, usize)>,
    cards: Vec<(String, usize, usize)>,
    cardmaps: Vec<(String, Vec<usize>, usize)>,
    fibres: Vec<(String, usize, String, String, usize)>,
    fibremaps: Vec<(String, usize, String, String, String, usize)>,
    relabels: Vec<(String, usize, Vec<usize>, usize)>,
}

#[derive(Default)]
struct RawFunctor {
    name: String,
    source: String,
    target: String,
    line: usize,
    objs: Vec<(String, String, usize)>,
    mors: Vec<(String, String, usize)>,
    nus: Vec<(String, Vec<usize>, usize)>,
}

#[derive(Default)]
struct RawSset {
    name: String,
    line: usize,
    truncation: Option<(usize, usize)>,
    sizes: Vec<(usize, usize, usize)>,
    faces: Vec<(usize, usize, Vec<usize>, usize)>,
    degens: Vec<(usize, usize, Vec<usize>, usize)>,
}

enum Block {
    Cat(RawCategory),
    Fun(RawFunctor),
    Sset(RawSset),
}

struct Cursor<'a> {
    toks: &'a [String],
    pos: usize,
    line: usize,
}

impl Cursor<'_> {
    fn next(&mut self, what: &str) -> std::result::Result<String, ParseError> {
        let t = self.toks.get(self.pos).cloned().ok_or_else(|| ParseError {
            line: self.line,
            message: format!("expected {what} at end of line"),
        })?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, tok: &str) -> std::result::Result<(), ParseError> {
        let t = self.next(&format!("`{tok}`"))?;
        if t != tok {
            return Err(ParseError {
                line: self.line,
                message: format!("expected `{tok}`, found `{t}`"),
            });
        }
        Ok(())
    }

    fn number(&mut self, what: &str) -> std::result::Result<usize, ParseError> {
        let t = self.next(what)?;
        t.parse().map_err(|_| ParseError {
            line: self.line,
            message: format!("expected {what}, found `{t}`"),
        })
    }

    fn list(&mut self) -> std::result::Result<Vec<usize>, ParseError> {
        self.expect("[")?;
        let mut out = Vec::new();
        loop {
            let t = self.next("`]`")?;
            match t.as_str() {
                "]" => return Ok(out),
                "," => continue,
                _ => out.push(t.parse().map_err(|_| ParseError {
                    line: self.line,
                    message: format!("expected a list entry, found `{t}`"),
                })?),
            }
        }
    }

    fn finish(&self) -> std::result::Result<(), ParseError> {
        match self.toks.get(self.pos) {
            None => Ok(()),
            Some(t) => Err(ParseError {
                line: self.line,
                message: format!("unexpected `{t}`"),
            }),
        }
    }
}

fn parse_blocks(text: &str) -> std::result::Result<Vec<Block>, Vec<ParseError>> {
    let mut blocks: Vec<Block> = Vec::new();
    let mut errs = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let toks = tokens(raw);
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor {
            toks: &toks,
            pos: 1,
            line,
        };
        let result = (|| -> std::result::Result<(), ParseError> {
            let head = toks[0].as_str();
            match head {
                "category" => {
                    let name = if toks.len() > 1 { cur.next("a name")? } else { "main".into() };
                    blocks.push(Block::Cat(RawCategory {
                        name,
                        line,
                        ..Default::default()
                    }));
                }
                "sset" => {
                    let name = if toks.len() > 1 { cur.next("a name")? } else { "main".into() };
                    blocks.push(Block::Sset(RawSset {
                        name,
                        line,
                        ..Default::default()
                    }));
                }
                "functor" => {
                    let name = cur.next("a name")?;
                    cur.expect(":")?;
                    let source = cur.next("a source")?;
                    cur.expect("->")?;
                    let target = cur.next("a target")?;
                    blocks.push(Block::Fun(RawFunctor {
                        name,
                        source,
                        target,
                        line,
                        ..Default::default()
                    }));
                }
                _ => match blocks.last_mut() {
                    None => {
                        return Err(ParseError {
                            line,
                            message: format!("`{head}` before any `category` or `functor` header"),
                        })
                    }
                    Some(Block::Cat(c)) => match head {
                        "objects" => {
                            while cur.pos < toks.len() {
                                c.objects.push((cur.next("an object")?, line));
                            }
                        }
                        "morphism" => {
                            let f = cur.next("a morphism name")?;
                            cur.expect(":")?;
                            let a = cur.next("a domain")?;
                            cur.expect("->")?;
                            let b = cur.next("a codomain")?;
                            c.morphisms.push((f, a, b, line));
                        }
                        "compose" => {
                            let g = cur.next("a morphism")?;
                            let f = cur.next("a morphism")?;
                            cur.expect("=")?;
                            let h = cur.next("a morphism")?;
                            c.composes.push((g, f, h, line));
                        }
                        "terminal" => {
                            let rep = cur.next("an object")?;
                            cur.expect("=")?;
                            let t = cur.next("an object")?;
                            c.terminals.push((rep, t, line));
                        }
                        "card" => {
                            let x = cur.next("an object")?;
                            cur.expect("=")?;
                            let n = cur.number("a cardinality")?;
                            c.cards.push((x, n, line));
                        }
                        "cardmap" => {
                            let f = cur.next("a morphism")?;
                            cur.expect("=")?;
                            let v = cur.list()?;
                            c.cardmaps.push((f, v, line));
                        }
                        "fibre" => {
                            cur.expect("(")?;
                            let x = cur.next("an object")?;
                            cur.expect(",")?;
                            let i = cur.number("an index")?;
                            cur.expect(")")?;
                            let f = cur.next("a morphism")?;
                            cur.expect("=")?;
                            let y = cur.next("an object")?;
                            c.fibres.push((x, i, f, y, line));
                        }
                        "fibremap" => {
                            cur.expect("(")?;
                            let x = cur.next("an object")?;
                            cur.expect(",")?;
                            let i = cur.number("an index")?;
                            cur.expect(")")?;
                            let g = cur.next("a morphism")?;
                            let f = cur.next("a morphism")?;
                            cur.expect("=")?;
                            let m = cur.next("a morphism")?;
                            c.fibremaps.push((x, i, g, f, m, line));
                        }
                        "relabel" => {
                            let f = cur.next("a morphism")?;
                            let i = cur.number("an index")?;
                            cur.expect("=")?;
                            let v = cur.list()?;
                            c.relabels.push((f, i, v, line));
                        }
                        _ => {
                            return Err(ParseError {
                                line,
                                message: format!("unknown declaration `{head}`"),
                            })
                        }
                    },
                    Some(Block::Sset(x)) => match head {
                        "truncation" => x.truncation = Some((cur.number("a level")?, line)),
                        "simplices" => {
                            let n = cur.number("a level")?;
                            cur.expect("=")?;
                            x.sizes.push((n, cur.number("a count")?, line));
                        }
                        "face" | "degen" => {
                            let n = cur.number("a level")?;
                            let i = cur.number("an index")?;
                            cur.expect("=")?;
                            let v = cur.list()?;
                            if head == "face" {
                                x.faces.push((n, i, v, line));
                            } else {
                                x.degens.push((n, i, v, line));
                            }
                        }
                        _ => {
                            return Err(ParseError {
                                line,
                                message: format!("unknown simplicial declaration `{head}`"),
                            })
                        }
                    },
                    Some(Block::Fun(fun)) => match head {
                        "obj" => {
                            let x = cur.next("an object")?;
                            cur.expect("=")?;
                            fun.objs.push((x, cur.next("an object")?, line));
                        }
                        "mor" => {
                            let f = cur.next("a morphism")?;
                            cur.expect("=")?;
                            fun.mors.push((f, cur.next("a morphism")?, line));
                        }
                        "nu" => {
                            let x = cur.next("an object")?;
                            cur.expect("=")?;
                            fun.nus.push((x, cur.list()?, line));
                        }
                        _ => {
                            return Err(ParseError {
                                line,
                                message: format!("unknown functor declaration `{head}`"),
                            })
                        }
                    },
                },
            }
            cur.finish()
        })();
        if let Err(e) = result {
            errs.push(e);
        }
    }
    if errs.is_empty() {
        Ok(blocks)
    } else {
        Err(errs)
    }
}

fn build_structure(raw: &RawCategory, errs: &mut Vec<ParseError>) -> Option<Structure> {
    let start = errs.len();
    let mut push = |line: usize, message: String| errs.push(ParseError { line, message });
    let mut obj_index: HashMap<&str, Obj> = HashMap::new();
    let mut obj_names = Vec::new();
    for (name, line) in &raw.objects {
        if obj_index.insert(name, obj_names.len()).is_some() {
            push(*line, format!("object `{name}` is declared twice"));
        }
        obj_names.push(name.clone());
    }
    let n = obj_names.len();
    let mut mor_names: Vec<String> = obj_names.iter().map(|o| identity_name(o)).collect();
    let mut dom: Vec<Obj> = (0..n).collect();
    let mut cod: Vec<Obj> = (0..n).collect();
    let mut mor_index: HashMap<String, Mor> = mor_names.iter().enumerate().map(|(k, m)| (m.clone(), k)).collect();
    for (f, a, b, line) in &raw.morphisms {
        let (Some(&a), Some(&b)) = (obj_index.get(a.as_str()), obj_index.get(b.as_str())) else {
            push(*line, format!("morphism `{f}` refers to an undeclared object"));
            continue;
        };
        if mor_index.insert(f.clone(), mor_names.len()).is_some() {
            push(*line, format!("morphism `{f}` is declared twice"));
            continue;
        }
        mor_names.push(f.clone());
        dom.push(a);
        cod.push(b);
    }
    let m = mor_names.len();
    let obj = |name: &str, line: usize, errs: &mut Vec<ParseError>| -> Option<Obj> {
        let r = obj_index.get(name).copied();
        if r.is_none() {
            errs.push(ParseError {
                line,
                message: format!("undeclared object `{name}`"),
            });
        }
        r
    };
    let mor = |name: &str, line: usize, errs: &mut Vec<ParseError>| -> Option<Mor> {
        let r = mor_index.get(name).copied();
        if r.is_none() {
            errs.push(ParseError {
                line,
                message: format!("undeclared morphism `{name}`"),
            });
        }
        r
    };
    let mut comp: HashMap<(Mor, Mor), Mor> = HashMap::new();
    for f in 0..m {
        comp.insert((cod[f], f), f);
        comp.insert((f, dom[f]), f);
    }
    for (g, f, h, line) in &raw.composes {
        let (Some(gi), Some(fi), Some(hi)) = (mor(g, *line, errs), mor(f, *line, errs), mor(h, *line, errs)) else {
            continue;
        };
        if dom[gi] != cod[fi] {
            errs.push(ParseError {
                line: *line,
                message: format!("`{g}` and `{f}` are not composable"),
            });
            continue;
        }
        if gi >= n && fi >= n {
            comp.insert((gi, fi), hi);
        }
    }
    for f in n..m {
        for g in n..m {
            if dom[g] == cod[f] && !comp.contains_key(&(g, f)) {
                errs.push(ParseError {
                    line: raw.line,
                    message: format!("missing `compose {} {} = …`", mor_names[g], mor_names[f]),
                });
            }
        }
    }
    if errs.len() > start {
        return None;
    }
    let cat = match FinCat::from_parts(obj_names, mor_names, dom, cod, comp) {
        Ok(c) => c,
        Err(e) => {
            errs.push(ParseError {
                line: raw.line,
                message: e.to_string(),
            });
            return None;
        }
    };

    let lt = if raw.terminals.is_empty() {
        None
    } else {
        let comps = connected_components(&cat);
        let mut chosen: Vec<Option<Obj>> = vec![None; comps.len()];
        for (rep, t, line) in &raw.terminals {
            let (Some(r), Some(t)) = (obj(rep, *line, errs), obj(t, *line, errs)) else {
                continue;
            };
            if comps.comp_of[r] != comps.comp_of[t] {
                errs.push(ParseError {
                    line: *line,
                    message: format!("`{}` is not in the component of `{}`", cat.obj_name(t), cat.obj_name(r)),
                });
            } else if chosen[comps.comp_of[r]].replace(t).is_some() {
                errs.push(ParseError {
                    line: *line,
                    message: format!("a second terminal for the component of `{}`", cat.obj_name(r)),
                });
            }
        }
        if errs.len() > start {
            return None;
        }
        let terminals: Vec<Obj> = chosen.iter().flatten().copied().collect();
        match LtCat::from_terminal_set(cat.clone(), &terminals) {
            Ok(lt) => Some(lt),
            Err(e) => {
                errs.push(ParseError {
                    line: raw.terminals[0].2,
                    message: e.to_string(),
                });
                return None;
            }
        }
    };

    let card = if raw.cards.is_empty() {
        if !raw.cardmaps.is_empty() {
            errs.push(ParseError {
                line: raw.cardmaps[0].2,
                message: "`cardmap` without `card` declarations".into(),
            });
            return None;
        }
        None
    } else {
        let mut sizes: Vec<Option<usize>> = vec![None; cat.num_objects()];
        for (x, k, line) in &raw.cards {
            if let Some(x) = obj(x, *line, errs) {
                sizes[x] = Some(*k);
            }
        }
        for x in cat.objects() {
            if sizes[x].is_none() {
                errs.push(ParseError {
                    line: raw.line,
                    message: format!("missing `card {} = …`", cat.obj_name(x)),
                });
            }
        }
        if errs.len() > start {
            return None;
        }
        let sizes: Vec<usize> = sizes.into_iter().map(Option::unwrap).collect();
        let mut maps: Vec<Option<SMap>> = cat.morphisms().map(|f| cat.is_identity(f).then(|| SMap::identity(sizes[f]))).collect();
        for (f, v, line) in &raw.cardmaps {
            let Some(fi) = mor(f, *line, errs) else { continue };
            if v.len() != sizes[cat.dom(fi)] {
                errs.push(ParseError {
                    line: *line,
                    message: format!("`{f}` needs {} entries", sizes[cat.dom(fi)]),
                });
                continue;
            }
            match SMap::new(v.clone(), sizes[cat.cod(fi)]) {
                Ok(p) => maps[fi] = Some(p),
                Err(e) => errs.push(ParseError {
                    line: *line,
                    message: e.to_string(),
                }),
            }
        }
        for f in cat.morphisms() {
            if maps[f].is_none() {
                let (a, b) = (sizes[cat.dom(f)], sizes[cat.cod(f)]);
                if b == 1 || a == 0 {
                    maps[f] = Some(SMap::new(vec![1; a], b).unwrap());
                } else {
                    errs.push(ParseError {
                        line: raw.line,
                        message: format!("missing `cardmap {} = […]`", cat.mor_name(f)),
                    });
                }
            }
        }
        if errs.len() > start {
            return None;
        }
        Some(Card {
            obj: sizes,
            mor: maps.into_iter().map(Option::unwrap).collect(),
        })
    };

    if raw.fibres.is_empty() && raw.fibremaps.is_empty() && raw.relabels.is_empty() {
        return Some(match (lt, card) {
            (None, None) => Structure::Category(cat),
            (Some(lt), None) => Structure::Lt(lt),
            (None, Some(card)) => Structure::Over(OverS { cat, card }),
            (Some(lt), Some(card)) => match LtOverS::new(lt, card) {
                Ok(v) => Structure::LtOver(v),
                Err(e) => {
                    errs.push(ParseError {
                        line: raw.line,
                        message: e.to_string(),
                    });
                    return None;
                }
            },
        });
    }
    let Some(lt) = lt else {
        errs.push(ParseError {
            line: raw.line,
            message: "fibres need `terminal` declarations".into(),
        });
        return None;
    };
    let card = card.unwrap_or_else(|| Card::unary(&cat));
    let in_range = |x: Obj, i: usize, line: usize, errs: &mut Vec<ParseError>| {
        let ok = i >= 1 && i <= card.obj[x];
        if !ok {
            errs.push(ParseError {
                line,
                message: format!("index {i} is outside |{}| = {}", cat.obj_name(x), card.obj[x]),
            });
        }
        ok
    };
    let mut fibre_obj = BTreeMap::new();
    for (x, i, f, y, line) in &raw.fibres {
        let (Some(x), Some(f), Some(y)) = (obj(x, *line, errs), mor(f, *line, errs), obj(y, *line, errs)) else {
            continue;
        };
        if cat.cod(f) != x {
            errs.push(ParseError {
                line: *line,
                message: format!("`{}` does not end at `{}`", cat.mor_name(f), cat.obj_name(x)),
            });
        } else if in_range(x, *i, *line, errs) {
            fibre_obj.insert((f, *i), y);
        }
    }
    let mut fibre_mor = BTreeMap::new();
    for (x, i, g, f, mm, line) in &raw.fibremaps {
        let (Some(x), Some(g), Some(f), Some(mm)) =
            (obj(x, *line, errs), mor(g, *line, errs), mor(f, *line, errs), mor(mm, *line, errs))
        else {
            continue;
        };
        if cat.cod(f) != x || cat.cod(g) != cat.dom(f) {
            errs.push(ParseError {
                line: *line,
                message: format!("`{}` over `{}` is not a triangle over `{}`", cat.mor_name(g), cat.mor_name(f), cat.obj_name(x)),
            });
        } else if in_range(x, *i, *line, errs) {
            fibre_mor.insert((g, f, *i), mm);
        }
    }
    let relabel = if raw.relabels.is_empty() {
        None
    } else {
        let mut rel = BTreeMap::new();
        for (f, i, v, line) in &raw.relabels {
            let Some(f) = mor(f, *line, errs) else { continue };
            if !in_range(cat.cod(f), *i, *line, errs) {
                continue;
            }
            let Some(&y) = fibre_obj.get(&(f, *i)) else {
                errs.push(ParseError {
                    line: *line,
                    message: format!("relabelling of `{}` at {i} before its fibre", cat.mor_name(f)),
                });
                continue;
            };
            match SMap::new(v.clone(), card.obj[y]) {
                Ok(p) => {
                    rel.insert((f, *i), p);
                }
                Err(e) => errs.push(ParseError {
                    line: *line,
                    message: e.to_string(),
                }),
            }
        }
        Some(rel)
    };
    if errs.len() > start {
        return None;
    }
    Some(Structure::Operadic(OperadicStructure {
        lt,
        card,
        fibre_obj,
        fibre_mor,
        relabel,
    }))
}

fn build_functor(raw: &RawFunctor, structures: &[(String, Structure)], errs: &mut Vec<ParseError>) -> Option<FunctorDoc> {
    let start = errs.len();
    let find = |name: &str| structures.iter().find(|(n, _)| n == name).map(|(_, s)| s);
    let (Some(src), Some(tgt)) = (find(&raw.source), find(&raw.target)) else {
        errs.push(ParseError {
            line: raw.line,
            message: format!("`{}` or `{}` is not a declared category", raw.source, raw.target),
        });
        return None;
    };
    let (c, d) = (src.cat(), tgt.cat());
    let mut obj_map: Vec<Option<Obj>> = vec![None; c.num_objects()];
    for (x, y, line) in &raw.objs {
        match (c.find_object(x), d.find_object(y)) {
            (Some(x), Some(y)) => obj_map[x] = Some(y),
            _ => errs.push(ParseError {
                line: *line,
                message: format!("`obj {x} = {y}` names an undeclared object"),
            }),
        }
    }
    for x in c.objects() {
        if obj_map[x].is_none() {
            errs.push(ParseError {
                line: raw.line,
                message: format!("missing `obj {} = …`", c.obj_name(x)),
            });
        }
    }
    if errs.len() > start {
        return None;
    }
    let obj_map: Vec<Obj> = obj_map.into_iter().map(Option::unwrap).collect();
    let mut mor_map: Vec<Option<Mor>> = c.morphisms().map(|f| c.is_identity(f).then(|| d.id(obj_map[f]))).collect();
    for (f, g, line) in &raw.mors {
        match (c.find_morphism(f), d.find_morphism(g)) {
            (Some(f), Some(g)) => mor_map[f] = Some(g),
            _ => errs.push(ParseError {
                line: *line,
                message: format!("`mor {f} = {g}` names an undeclared morphism"),
            }),
        }
    }
    for f in c.morphisms() {
        if mor_map[f].is_none() {
            errs.push(ParseError {
                line: raw.line,
                message: format!("missing `mor {} = …`", c.mor_name(f)),
            });
        }
    }
    let nu = if raw.nus.is_empty() {
        None
    } else {
        let Some(card) = tgt.card() else {
            errs.push(ParseError {
                line: raw.nus[0].2,
                message: "`nu` needs a target over S".into(),
            });
            return None;
        };
        let mut nu: Vec<Option<SMap>> = vec![None; c.num_objects()];
        for (x, v, line) in &raw.nus {
            let Some(x) = c.find_object(x) else {
                errs.push(ParseError {
                    line: *line,
                    message: format!("undeclared object `{x}`"),
                });
                continue;
            };
            match SMap::new(v.clone(), card.obj[obj_map[x]]) {
                Ok(p) => nu[x] = Some(p),
                Err(e) => errs.push(ParseError {
                    line: *line,
                    message: e.to_string(),
                }),
            }
        }
        if nu.iter().any(Option::is_none) {
            errs.push(ParseError {
                line: raw.line,
                message: "`nu` must be given for every object".into(),
            });
        }
        Some(nu.into_iter().flatten().collect())
    };
    if errs.len() > start {
        return None;
    }
    Some(FunctorDoc {
        name: raw.name.clone(),
        source: raw.source.clone(),
        target: raw.target.clone(),
        functor: Functor::new(obj_map, mor_map.into_iter().map(Option::unwrap).collect()),
        nu,
    })
}

fn build_sset(raw: &RawSset, errs: &mut Vec<ParseError>) -> Option<TruncatedSSet> {
    let start = errs.len();
    let Some((k, _)) = raw.truncation else {
        errs.push(ParseError {
            line: raw.line,
            message: "missing `truncation`".into(),
        });
        return None;
    };
    let mut sizes: Vec<Option<usize>> = vec![None; k + 1];
    for &(n, c, line) in &raw.sizes {
        if n > k {
            errs.push(ParseError {
                line,
                message: format!("level {n} is above the truncation {k}"),
            });
        } else {
            sizes[n] = Some(c);
        }
    }
    if let Some(n) = sizes.iter().position(Option::is_none) {
        errs.push(ParseError {
            line: raw.line,
            message: format!("missing `simplices {n} = …`"),
        });
        return None;
    }
    let sizes: Vec<usize> = sizes.into_iter().flatten().collect();
    let mut faces: Vec<Vec<Option<Vec<usize>>>> = (0..=k).map(|n| vec![None; if n == 0 { 0 } else { n + 1 }]).collect();
    let mut degens: Vec<Vec<Option<Vec<usize>>>> = (0..=k).map(|n| vec![None; if n == k { 0 } else { n + 1 }]).collect();
    for (is_face, list) in [(true, &raw.faces), (false, &raw.degens)] {
        for (n, i, v, line) in list {
            let (n, i, line) = (*n, *i, *line);
            let table = if is_face { &mut faces } else { &mut degens };
            if n > k || i >= table[n].len() {
                errs.push(ParseError {
                    line,
                    message: format!("no operator {i} at level {n}"),
                });
                continue;
            }
            let target = if is_face { sizes[n - 1] } else { sizes[n + 1] };
            if v.len() != sizes[n] || v.iter().any(|&x| x == 0 || x > target) {
                errs.push(ParseError {
                    line,
                    message: format!("needs {} entries in 1..{target}", sizes[n]),
                });
                continue;
            }
            table[n][i] = Some(v.iter().map(|x| x - 1).collect());
        }
    }
    for (what, table) in [("face", &faces), ("degen", &degens)] {
        for (n, ops) in table.iter().enumerate() {
            for (i, op) in ops.iter().enumerate() {
                if op.is_none() {
                    errs.push(ParseError {
                        line: raw.line,
                        message: format!("missing `{what} {n} {i} = […]`"),
                    });
                }
            }
        }
    }
    if errs.len() > start {
        return None;
    }
    let unwrap = |t: Vec<Vec<Option<Vec<usize>>>>| -> Vec<Vec<Vec<usize>>> {
        t.into_iter().map(|ops| ops.into_iter().flatten().collect()).collect()
    };
    Some(TruncatedSSet {
        k,
        keys: sizes.iter().map(|&c| (0..c).map(|x| vec![x]).collect()).collect(),
        faces: unwrap(faces),
        degens: unwrap(degens),
        coskeletal: false,
    })
}

pub fn parse(text: &str) -> Result<Document> {
    let blocks = parse_blocks(text).map_err(Error::Parse)?;
    let mut errs = Vec::new();
    let mut doc = Document::default();
    for b in &blocks {
        if let Block::Cat(raw) = b {
            if doc.structures.iter().any(|(n, _)| *n == raw.name) {
                errs.push(ParseError {
                    line: raw.line,
                    message: format!("category `{}` is declared twice", raw.name),
                });
            } else if let Some(s) = build_structure(raw, &mut errs) {
                doc.structures.push((raw.name.clone(), s));
            }
        }
    }
    for b in &blocks {
        if let Block::Sset(raw) = b {
            if let Some(x) = build_sset(raw, &mut errs) {
                doc.ssets.push((raw.name.clone(), x));
            }
        }
    }
    if errs.is_empty() {
        for b in &blocks {
            if let Block::Fun(raw) = b {
                if let Some(f) = build_functor(raw, &doc.structures, &mut errs) {
                    doc.functors.push(f);
                }
            }
        }
    }
    if errs.is_empty() {
        Ok(doc)
    } else {
        Err(Error::Parse(errs))
    }
}

pub fn parse_structure(text: &str) -> Result<Structure> {
    Ok(parse(text)?.single()?.clone())
}

fn smap_list(p: &SMap) -> String {
    let v: Vec<String> = p.values().iter().map(|x| x.to_string()).collect();
    format!("[{}]", v.join(" "))
}

fn emit_cat_lines(out: &mut String, name: &str, c: &FinCat) {
    let _ = writeln!(out, "category {name}");
    if c.num_objects() > 0 {
        let _ = writeln!(out, "objects {}", c.obj_names().join(" "));
    }
    for f in c.non_identities() {
        let _ = writeln!(out, "morphism {} : {} -> {}", c.mor_name(f), c.obj_name(c.dom(f)), c.obj_name(c.cod(f)));
    }
    for f in c.non_identities() {
        for g in c.non_identities() {
            if c.dom(g) == c.cod(f) {
                let _ = writeln!(out, "compose {} {} = {}", c.mor_name(g), c.mor_name(f), c.mor_name(c.comp(g, f)));
            }
        }
    }
}

fn emit_lt_lines(out: &mut String, lt: &LtCat) {
    let c = lt.cat();
    for (k, class) in lt.components().classes.iter().enumerate() {
        let _ = writeln!(out, "terminal {} = {}", c.obj_name(class[0]), c.obj_name(lt.terminals()[k]));
    }
}

fn emit_card_lines(out: &mut String, c: &FinCat, card: &Card) {
    for x in c.objects() {
        let _ = writeln!(out, "card {} = {}", c.obj_name(x), card.obj[x]);
    }
    for f in c.non_identities() {
        let _ = writeln!(out, "cardmap {} = {}", c.mor_name(f), smap_list(&card.mor[f]));
    }
}

pub fn emit_structure(name: &str, s: &Structure) -> String {
    let mut out = String::new();
    emit_cat_lines(&mut out, name, s.cat());
    match s {
        Structure::Category(_) => {}
        Structure::Lt(lt) => emit_lt_lines(&mut out, lt),
        Structure::Over(v) => emit_card_lines(&mut out, &v.cat, &v.card),
        Structure::LtOver(v) => {
            emit_lt_lines(&mut out, &v.lt);
            emit_card_lines(&mut out, v.cat(), &v.card);
        }
        Structure::Operadic(s) => {
            let c = s.cat();
            emit_lt_lines(&mut out, &s.lt);
            if !check_unary(s) {
                emit_card_lines(&mut out, c, &s.card);
            }
            for (&(f, i), &y) in &s.fibre_obj {
                let _ = writeln!(out, "fibre ({},{i}) {} = {}", c.obj_name(c.cod(f)), c.mor_name(f), c.obj_name(y));
            }
            for (&(g, f, i), &m) in &s.fibre_mor {
                let _ = writeln!(
                    out,
                    "fibremap ({},{i}) {} {} = {}",
                    c.obj_name(c.cod(f)),
                    c.mor_name(g),
                    c.mor_name(f),
                    c.mor_name(m)
                );
            }
            if let Some(rel) = &s.relabel {
                for (&(f, i), p) in rel {
                    let _ = writeln!(out, "relabel {} {i} = {}", c.mor_name(f), smap_list(p));
                }
            }
        }
    }
    out
}

pub fn emit_category(name: &str, c: &FinCat) -> String {
    emit_structure(name, &Structure::Category(c.clone()))
}

pub fn emit_operadic(name: &str, s: &OperadicStructure) -> String {
    emit_structure(name, &Structure::Operadic(s.clone()))
}

/// Simplices are written by position; keys are not kept.
pub fn emit_sset(name: &str, x: &TruncatedSSet) -> String {
    let mut out = String::new();
    let list = |v: &[usize]| {
        let v: Vec<String> = v.iter().map(|y| (y + 1).to_string()).collect();
        format!("[{}]", v.join(" "))
    };
    let _ = writeln!(out, "sset {name}");
    let _ = writeln!(out, "truncation {}", x.k);
    for n in 0..=x.k {
        let _ = writeln!(out, "simplices {n} = {}", x.size(n));
    }
    for n in 1..=x.k {
        for i in 0..=n {
            let _ = writeln!(out, "face {n} {i} = {}", list(&x.faces[n][i]));
        }
    }
    for n in 0..x.k {
        for j in 0..=n {
            let _ = writeln!(out, "degen {n} {j} = {}", list(&x.degens[n][j]));
        }
    }
    out
}

pub fn emit_functor(doc: &FunctorDoc, src: &FinCat, tgt: &FinCat) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "functor {} : {} -> {}", doc.name, doc.source, doc.target);
    for x in src.objects() {
        let _ = writeln!(out, "obj {} = {}", src.obj_name(x), tgt.obj_name(doc.functor.obj(x)));
    }
    for f in src.non_identities() {
        let _ = writeln!(out, "mor {} = {}", src.mor_name(f), tgt.mor_name(doc.functor.mor(f)));
    }
    if let Some(nu) = &doc.nu {
        for x in src.objects() {
            let _ = writeln!(out, "nu {} = {}", src.obj_name(x), smap_list(&nu[x]));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sskel::s_operadic;

    #[test]
    fn minimal_point() {
        let s = parse_structure("category\nobjects t\n").unwrap();
        assert_eq!(s, Structure::Category(FinCat::point("t")));
    }

    #[test]
    fn operadic_roundtrip() {
        let s = s_operadic(2);
        let text = emit_operadic("s2", &s);
        assert_eq!(parse_structure(&text).unwrap(), Structure::Operadic(s));
    }

    #[test]
    fn missing_compose_names_the_pair() {
        let text = "category m\nobjects x\nmorphism e : x -> x\n";
        let err = parse(text).unwrap_err().to_string();
        assert!(err.contains("compose e e"), "{err}");
        assert!(err.starts_with("line 1"), "{err}");
    }

    #[test]
    fn errors_are_positioned() {
        let text = "category c\nobjects a b\nmorphism f : a -> q\ncompose f f = f\nbogus\n";
        let Err(Error::Parse(errs)) = parse(text) else { panic!() };
        assert_eq!(errs[0].line, 5);
        let text = "category c\nobjects a b\nmorphism f : a -> q\n";
        let Err(Error::Parse(errs)) = parse(text) else { panic!() };
        assert_eq!(errs[0].line, 3);
        let text = "category c\nobjects a b\nmorphism f : a -> b\ncompose f f = f\n";
        let Err(Error::Parse(errs)) = parse(text) else { panic!() };
        assert!(errs[0].message.contains("not composable"));
    }

    #[test]
    fn sset_roundtrip() {
        use crate::simplicial::{boundary_of_triangle, sset_equal};
        let b = boundary_of_triangle();
        let doc = parse(&emit_sset("b", &b)).unwrap();
        let back = &doc.ssets[0].1;
        let positional = b.rekey(|_, _| Vec::new());
        assert_eq!(back.k, 2);
        assert_eq!((0..=2).map(|n| back.size(n)).collect::<Vec<_>>(), vec![3, 6, 9]);
        assert_eq!(emit_sset("b", back), emit_sset("b", &b));
        assert!(sset_equal(back, &parse(&emit_sset("b", back)).unwrap().ssets[0].1, 2));
        assert!(!sset_equal(back, &positional, 2));
    }

    #[test]
    fn functor_blocks() {
        let text = "category two\nobjects a b\nmorphism f : a -> b\nfunctor c : two -> two\nobj a = b\nobj b = b\nmor f = id_b\n";
        let doc = parse(text).unwrap();
        let f = &doc.functors[0];
        assert_eq!(f.functor.obj_map, vec![1, 1]);
        assert_eq!(f.functor.mor(2), 1);
        let c = doc.single().unwrap().cat();
        assert!(emit_functor(f, c, c).contains("mor f = id_b"));
    }
}
