//! Truncated simplicial sets: nerves, the shift `dec`, the Segal condition
//! and the undecking of a unary operadic category.
//!
//! Every simplex carries a key (a list of indices) that identifies it
//! across constructions; equality of simplicial sets compares keys.

use std::collections::HashMap;
use std::fmt;

use crate::correspond::unary_to_algebra;
use crate::decalage::{dec, Dec};
use crate::error::{Error, Result};
use crate::fincat::{FinCat, Mor};
use crate::moddec::is_discrete_opfib;
use crate::operadic::{check_unary, OperadicStructure};
use crate::report::Report;

pub const DEFAULT_TRUNCATION: usize = 3;

/// Levels `0..=k`; `faces[n][i]` is `d_i : X_n → X_{n−1}` (for `n ≥ 1`) and
/// `degens[n][j]` is `s_j : X_n → X_{n+1}` (for `n < k`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSSet {
    pub k: usize,
    pub keys: Vec<Vec<Vec<usize>>>,
    pub faces: Vec<Vec<Vec<usize>>>,
    pub degens: Vec<Vec<Vec<usize>>>,
    pub coskeletal: bool,
}

impl TruncatedSSet {
    pub fn size(&self, n: usize) -> usize {
        self.keys[n].len()
    }

    pub fn face(&self, n: usize, i: usize, x: usize) -> usize {
        self.faces[n][i][x]
    }

    pub fn degen(&self, n: usize, j: usize, x: usize) -> usize {
        self.degens[n][j][x]
    }

    /// The same simplicial set cut down to levels `0..=k`.
    pub fn truncate(&self, k: usize) -> TruncatedSSet {
        let k = k.min(self.k);
        TruncatedSSet {
            k,
            keys: self.keys[..=k].to_vec(),
            faces: self.faces[..=k].to_vec(),
            degens: (0..=k)
                .map(|n| if n < k { self.degens[n].clone() } else { Vec::new() })
                .collect(),
            coskeletal: self.coskeletal,
        }
    }

    /// Replaces every key through `f(level, key)`.
    pub fn rekey(&self, f: impl Fn(usize, &[usize]) -> Vec<usize>) -> TruncatedSSet {
        let mut out = self.clone();
        for (n, level) in out.keys.iter_mut().enumerate() {
            for key in level.iter_mut() {
                *key = f(n, key);
            }
        }
        out
    }
}

impl fmt::Display for TruncatedSSet {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in 0..=self.k {
            writeln!(out, "level {n}: {} simplices", self.size(n))?;
            for x in 0..self.size(n) {
                write!(out, "  {:?}", self.keys[n][x])?;
                if n > 0 {
                    let fs: Vec<String> = (0..=n).map(|i| format!("{:?}", self.keys[n - 1][self.face(n, i, x)])).collect();
                    write!(out, " faces {}", fs.join(" "))?;
                }
                if n < self.k {
                    let ds: Vec<String> = (0..=n).map(|j| format!("{:?}", self.keys[n + 1][self.degen(n, j, x)])).collect();
                    write!(out, " degeneracies {}", ds.join(" "))?;
                }
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

/// Levelwise equality up to level `k`: the same keys, faces and
/// degeneracies, regardless of the order simplices are stored in.
pub fn sset_equal(a: &TruncatedSSet, b: &TruncatedSSet, k: usize) -> bool {
    if a.k < k || b.k < k {
        return false;
    }
    let index: Vec<HashMap<&[usize], usize>> = (0..=k)
        .map(|n| b.keys[n].iter().enumerate().map(|(x, key)| (key.as_slice(), x)).collect())
        .collect();
    for n in 0..=k {
        if a.size(n) != b.size(n) || index[n].len() != b.size(n) {
            return false;
        }
        let mut hit = vec![false; b.size(n)];
        for x in 0..a.size(n) {
            let Some(&y) = index[n].get(a.keys[n][x].as_slice()) else {
                return false;
            };
            if std::mem::replace(&mut hit[y], true) {
                return false;
            }
            if n > 0 {
                for i in 0..=n {
                    if a.keys[n - 1][a.face(n, i, x)] != b.keys[n - 1][b.face(n, i, y)] {
                        return false;
                    }
                }
            }
            if n < k {
                for j in 0..=n {
                    if a.keys[n + 1][a.degen(n, j, x)] != b.keys[n + 1][b.degen(n, j, y)] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

pub fn check_simplicial_identities(x: &TruncatedSSet) -> Report {
    let mut r = Report::new();
    for n in 2..=x.k {
        for j in 0..=n {
            for i in 0..j {
                for s in 0..x.size(n) {
                    if x.face(n - 1, i, x.face(n, j, s)) != x.face(n - 1, j - 1, x.face(n, i, s)) {
                        r.push("face-face", format!("d{i} d{j} ≠ d{} d{i} on {:?}", j - 1, x.keys[n][s]));
                    }
                }
            }
        }
    }
    for n in 0..x.k.saturating_sub(1) {
        for j in 0..=n {
            for i in 0..=j {
                for s in 0..x.size(n) {
                    if x.degen(n + 1, i, x.degen(n, j, s)) != x.degen(n + 1, j + 1, x.degen(n, i, s)) {
                        r.push("degeneracy-degeneracy", format!("s{i} s{j} ≠ s{} s{i} on {:?}", j + 1, x.keys[n][s]));
                    }
                }
            }
        }
    }
    for n in 0..x.k {
        for j in 0..=n {
            for s in 0..x.size(n) {
                let up = x.degen(n, j, s);
                for i in 0..=n + 1 {
                    let lhs = x.face(n + 1, i, up);
                    let rhs = if i < j {
                        x.degen(n - 1, j - 1, x.face(n, i, s))
                    } else if i == j || i == j + 1 {
                        s
                    } else {
                        x.degen(n - 1, j, x.face(n, i - 1, s))
                    };
                    if lhs != rhs {
                        r.push("face-degeneracy", format!("d{i} s{j} wrong on {:?}", x.keys[n][s]));
                    }
                }
            }
        }
    }
    r
}

/// Composable chains `[m1, …, mn]` with `cod m_k = dom m_{k+1}`; level 0
/// holds the objects as `[x]`.
pub fn nerve(c: &FinCat, k: usize) -> TruncatedSSet {
    let mut keys: Vec<Vec<Vec<usize>>> = vec![c.objects().map(|x| vec![x]).collect()];
    for n in 1..=k {
        let mut level = Vec::new();
        if n == 1 {
            level = c.morphisms().map(|m| vec![m]).collect();
        } else {
            for chain in &keys[n - 1] {
                let last = *chain.last().unwrap();
                for &m in c.outgoing(c.cod(last)) {
                    let mut ch = chain.clone();
                    ch.push(m);
                    level.push(ch);
                }
            }
        }
        keys.push(level);
    }
    let index: Vec<HashMap<Vec<usize>, usize>> = keys
        .iter()
        .map(|level| level.iter().enumerate().map(|(x, key)| (key.clone(), x)).collect())
        .collect();
    let vertex = |chain: &[Mor], v: usize| if v == 0 { c.dom(chain[0]) } else { c.cod(chain[v - 1]) };
    let mut faces = vec![Vec::new()];
    for n in 1..=k {
        let mut level = Vec::new();
        for i in 0..=n {
            let map = keys[n]
                .iter()
                .map(|chain| {
                    let key = if n == 1 {
                        vec![if i == 0 { c.cod(chain[0]) } else { c.dom(chain[0]) }]
                    } else if i == 0 {
                        chain[1..].to_vec()
                    } else if i == n {
                        chain[..n - 1].to_vec()
                    } else {
                        let mut ch = chain[..i - 1].to_vec();
                        ch.push(c.comp(chain[i], chain[i - 1]));
                        ch.extend_from_slice(&chain[i + 1..]);
                        ch
                    };
                    index[n - 1][&key]
                })
                .collect();
            level.push(map);
        }
        faces.push(level);
    }
    let mut degens = Vec::new();
    for n in 0..=k {
        let mut level = Vec::new();
        if n < k {
            for j in 0..=n {
                let map = keys[n]
                    .iter()
                    .map(|key| {
                        let up = if n == 0 {
                            vec![c.id(key[0])]
                        } else {
                            let mut ch = key[..j].to_vec();
                            ch.push(c.id(vertex(key, j)));
                            ch.extend_from_slice(&key[j..]);
                            ch
                        };
                        index[n + 1][&up]
                    })
                    .collect();
                level.push(map);
            }
        }
        degens.push(level);
    }
    TruncatedSSet {
        k,
        keys,
        faces,
        degens,
        coskeletal: true,
    }
}

/// `(dec X)_n = X_{n+1}`, forgetting the top face and top degeneracy.
pub fn dec_ss(x: &TruncatedSSet) -> Result<TruncatedSSet> {
    if x.k == 0 {
        return Err(Error::Precondition("the shift needs at least one level above 0".into()));
    }
    let k = x.k - 1;
    Ok(TruncatedSSet {
        k,
        keys: x.keys[1..].to_vec(),
        faces: (0..=k)
            .map(|n| if n == 0 { Vec::new() } else { x.faces[n + 1][..=n].to_vec() })
            .collect(),
        degens: (0..=k)
            .map(|n| if n < k { x.degens[n + 1][..=n].to_vec() } else { Vec::new() })
            .collect(),
        coskeletal: x.coskeletal,
    })
}

/// `nerve(dec C)` with each chain of triangles renamed to the chain of
/// `C` it stands for, so that it can be compared with `dec_ss(nerve C)`.
pub fn nerve_of_dec(c: &FinCat, d: &Dec, k: usize) -> TruncatedSSet {
    let n = nerve(&d.cat, k);
    debug_assert_eq!(d.cat.num_objects(), c.num_morphisms());
    n.rekey(|level, key| {
        if level == 0 {
            return vec![d.arrow(key[0])];
        }
        let mut chain: Vec<usize> = key.iter().map(|&m| d.triangle(m).0).collect();
        chain.push(d.triangle(*key.last().unwrap()).1);
        chain
    })
}

/// `nerve ∘ dec = dec_ss ∘ nerve` up to level `k − 1`.
pub fn shift_identity_holds(c: &FinCat, k: usize) -> bool {
    let d = dec(c);
    let left = nerve_of_dec(c, &d, k - 1);
    let right = dec_ss(&nerve(c, k)).unwrap();
    sset_equal(&left, &right, k - 1)
}

/// The spine map `X_n → X_1 ×_{X_0} ⋯ ×_{X_0} X_1` is a bijection for
/// `2 ≤ n ≤ k`; failures are witnessed in the report.
pub fn segal_report(x: &TruncatedSSet) -> Result<Report> {
    if x.k < 2 {
        return Err(Error::Precondition("the Segal condition needs level 2".into()));
    }
    let mut r = Report::new();
    let src = |e: usize| x.face(1, 1, e);
    let tgt = |e: usize| x.face(1, 0, e);
    for n in 2..=x.k {
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        for s in 0..x.size(n) {
            let sp = spine(x, n, s);
            if let Some(&t) = seen.get(&sp) {
                r.push(
                    "segal",
                    format!("level {n}: {:?} and {:?} have the same spine", x.keys[n][t], x.keys[n][s]),
                );
            } else {
                seen.insert(sp, s);
            }
        }
        let mut chains: Vec<Vec<usize>> = (0..x.size(1)).map(|e| vec![e]).collect();
        for _ in 1..n {
            chains = chains
                .into_iter()
                .flat_map(|ch| {
                    let end = tgt(*ch.last().unwrap());
                    (0..x.size(1)).filter(move |&e| src(e) == end).map(move |e| {
                        let mut c2 = ch.clone();
                        c2.push(e);
                        c2
                    })
                })
                .collect();
        }
        for ch in chains {
            if !seen.contains_key(&ch) {
                let names: Vec<&Vec<usize>> = ch.iter().map(|&e| &x.keys[1][e]).collect();
                r.push("segal", format!("level {n}: the chain {names:?} has no filler"));
            }
        }
    }
    Ok(r)
}

pub fn segal(x: &TruncatedSSet) -> Result<bool> {
    Ok(segal_report(x)?.is_ok())
}

/// The `n` edges `v_k → v_{k+1}` of an `n`-simplex.
fn spine(x: &TruncatedSSet, n: usize, s: usize) -> Vec<usize> {
    (0..n)
        .map(|k| {
            let mut cur = s;
            let mut level = n;
            while level > k + 1 {
                cur = x.face(level, level, cur);
                level -= 1;
            }
            while level > 1 {
                cur = x.face(level, 0, cur);
                level -= 1;
            }
            cur
        })
        .collect()
}

/// The boundary of the 2-simplex, truncated at level 2: every triangle is
/// degenerate, so the chain `0 → 1 → 2` has no filler.
pub fn boundary_of_triangle() -> TruncatedSSet {
    let k = 2;
    let mut keys: Vec<Vec<Vec<usize>>> = Vec::new();
    for n in 0..=k {
        let mut level = Vec::new();
        let mut t = vec![0usize; n + 1];
        loop {
            let mut vs = t.clone();
            vs.dedup();
            if vs.len() < 3 {
                level.push(t.clone());
            }
            let mut p = n + 1;
            loop {
                if p == 0 {
                    break;
                }
                p -= 1;
                if t[p] < 2 {
                    t[p] += 1;
                    for q in p + 1..=n {
                        t[q] = t[p];
                    }
                    break;
                }
                if p == 0 {
                    p = usize::MAX;
                    break;
                }
            }
            if p == usize::MAX {
                break;
            }
        }
        keys.push(level);
    }
    let index: Vec<HashMap<Vec<usize>, usize>> = keys
        .iter()
        .map(|level| level.iter().enumerate().map(|(x, key)| (key.clone(), x)).collect())
        .collect();
    let faces = (0..=k)
        .map(|n| {
            if n == 0 {
                return Vec::new();
            }
            (0..=n)
                .map(|i| {
                    keys[n]
                        .iter()
                        .map(|t| {
                            let mut u = t.clone();
                            u.remove(i);
                            index[n - 1][&u]
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let degens = (0..=k)
        .map(|n| {
            if n == k {
                return Vec::new();
            }
            (0..=n)
                .map(|j| {
                    keys[n]
                        .iter()
                        .map(|t| {
                            let mut u = t.clone();
                            u.insert(j, t[j]);
                            index[n + 1][&u]
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    TruncatedSSet {
        k,
        keys,
        faces,
        degens,
        coskeletal: false,
    }
}

/// The simplicial set whose décalage is the nerve of a unary operadic
/// category, up to level `min(k, 3)`: terminals, objects, morphisms and
/// composable pairs `[g, f]`.
pub fn undeck(s: &OperadicStructure, k: usize) -> Result<TruncatedSSet> {
    if !check_unary(s) {
        return Err(Error::NotUnary("undecking needs a unary structure".into()));
    }
    let c = s.cat();
    let lt = &s.lt;
    let phi = |f: Mor| s.fib(f, 1).ok_or_else(|| Error::Precondition("fibre table is incomplete".into()));
    let k = k.min(DEFAULT_TRUNCATION);
    let terminals = lt.terminals().to_vec();
    let t_index: HashMap<usize, usize> = terminals.iter().enumerate().map(|(k, &t)| (t, k)).collect();
    let pairs: Vec<(Mor, Mor)> = c.composable_pairs().into_iter().map(|(f, g)| (g, f)).collect();
    let p_index: HashMap<(Mor, Mor), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let mut keys = vec![
        terminals.iter().map(|&t| vec![t]).collect::<Vec<_>>(),
        c.objects().map(|x| vec![x]).collect(),
        c.morphisms().map(|f| vec![f]).collect(),
        pairs.iter().map(|&(g, f)| vec![g, f]).collect(),
    ];
    keys.truncate(k + 1);
    let term = |y: usize| {
        t_index
            .get(&y)
            .copied()
            .ok_or_else(|| Error::Precondition(format!("{} is not a chosen terminal", c.obj_name(y))))
    };
    let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    if k >= 1 {
        let d0 = c.objects().map(|x| term(lt.u(x))).collect::<Result<Vec<_>>>()?;
        let d1 = c.objects().map(|x| term(phi(c.id(x))?)).collect::<Result<Vec<_>>>()?;
        faces.push(vec![d0, d1]);
    }
    if k >= 2 {
        let d0 = c.morphisms().map(|f| c.cod(f)).collect();
        let d1 = c.morphisms().map(|f| c.dom(f)).collect();
        let d2 = c.morphisms().map(phi).collect::<Result<Vec<_>>>()?;
        faces.push(vec![d0, d1, d2]);
    }
    if k >= 3 {
        let d0 = pairs.iter().map(|&(_, f)| f).collect();
        let d1 = pairs.iter().map(|&(g, f)| c.comp(f, g)).collect();
        let d2 = pairs.iter().map(|&(g, _)| g).collect();
        let d3 = pairs
            .iter()
            .map(|&(g, f)| s.fib_mor(g, f, 1).ok_or_else(|| Error::Precondition("fibre map table is incomplete".into())))
            .collect::<Result<Vec<_>>>()?;
        faces.push(vec![d0, d1, d2, d3]);
    }
    let mut degens: Vec<Vec<Vec<usize>>> = Vec::new();
    if k >= 1 {
        degens.push(vec![terminals.clone()]);
    }
    if k >= 2 {
        let s0 = c.objects().map(|x| c.id(x)).collect();
        let s1 = c.objects().map(|x| lt.tau(x)).collect();
        degens.push(vec![s0, s1]);
    }
    if k >= 3 {
        let s0 = c.morphisms().map(|f| p_index[&(c.id(c.dom(f)), f)]).collect();
        let s1 = c.morphisms().map(|f| p_index[&(f, c.id(c.cod(f)))]).collect();
        let s2 = c.morphisms().map(|f| p_index[&(f, lt.tau(c.cod(f)))]).collect();
        degens.push(vec![s0, s1, s2]);
    }
    degens.push(Vec::new());
    Ok(TruncatedSSet {
        k,
        keys,
        faces,
        degens,
        coskeletal: true,
    })
}

/// Whether the copairing of the fibre functors `D(C) → C` is a discrete
/// opfibration.
pub fn fibre_copairing_is_opfibration(s: &OperadicStructure) -> Result<bool> {
    let d = dec(s.cat());
    let a = unary_to_algebra(s, &d)?;
    Ok(is_discrete_opfib(&d.cat, s.cat(), &a.act))
}
