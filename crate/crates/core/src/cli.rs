//! Command dispatch for the `opcat` binary.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::corpus::{corpus, DEFAULT_CORPUS_SEED};
use crate::correspond::{
    algebra_to_unary, check_algebra_laws, check_dm_algebra_laws, dm_algebra_to_lax, is_gamma_trivial, lax_to_dm_algebra,
    mutation_lockstep, operadic_to_strict_algebra, strict_algebra_to_operadic, thm1_enumerate, unary_to_algebra, DecContext,
    THM1_MAX_MORPHISMS, THM1_MAX_OBJECTS,
};
use crate::decalage::{
    check_comonad_laws, check_monad_laws, coalgebra_from_lt, dec, enumerate_coalgebras, COALGEBRA_MAX_MORPHISMS,
    COALGEBRA_MAX_OBJECTS,
};
use crate::error::{Error, Result};
use crate::examples::{
    disintegration_default_seeds, ex_decalage_unary, ex_disintegration, ex_pointed_sets, ex_sub_prob, parse_weights,
    pointed_letters, sub_prob_default_seeds, weights_name, Weight, DEFAULT_CLOSURE_BOUND,
};
use crate::fincat::{check_category, check_functor, local_terminal_choices, FinCat};
use crate::moddec::{
    check_dm_monad_laws, check_lax_triangle, check_strict, dm_arrow, elements, has_finite_fibres, is_discrete_opfib,
    is_pi0_bijective, is_pi0_cartesian, pi0_factorize, LtOverS, OverS,
};
use crate::operadic::{check_lax_operadic, check_operadic, check_unary, OperadicStructure};
use crate::report::Report;
use crate::simplicial::{
    check_simplicial_identities, dec_ss, nerve, segal_report, sset_equal, undeck, TruncatedSSet, DEFAULT_TRUNCATION,
};
use crate::sskel::Card;
use crate::text::{emit_category, emit_functor, emit_operadic, emit_sset, parse, Document, FunctorDoc, Structure};

pub const DEFAULT_CARD_BOUND: usize = 3;

#[derive(Parser, Debug)]
#[command(name = "opcat", version, about = "Checks operadic categories and décalage constructions on finite inputs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Largest number of objects for exhaustive searches
    #[arg(long, global = true, default_value_t = THM1_MAX_OBJECTS)]
    pub bound_objects: usize,
    /// Largest number of morphisms (identities included) for exhaustive searches
    #[arg(long, global = true, default_value_t = THM1_MAX_MORPHISMS)]
    pub bound_morphisms: usize,
    /// Largest cardinality accepted by the modified décalage
    #[arg(long, global = true, default_value_t = DEFAULT_CARD_BOUND)]
    pub bound_card: usize,
    /// Largest object count of a generated closure
    #[arg(long, global = true, default_value_t = DEFAULT_CLOSURE_BOUND)]
    pub bound_closure: usize,
    /// Top simplicial level
    #[arg(long, global = true, default_value_t = DEFAULT_TRUNCATION)]
    pub truncation: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_CORPUS_SEED)]
    pub corpus_seed: u64,
    /// Append the constructed object in the text format
    #[arg(long, global = true)]
    pub emit: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Category, cardinality and functor laws
    Check { path: PathBuf },
    /// Axioms A1 to A5
    Operadic { path: PathBuf },
    /// Lax axioms
    Lax { path: PathBuf },
    /// Comonad laws of D and its coalgebras
    Comonad { path: PathBuf },
    /// Monad laws of the lifted décalage monads
    Monad { path: PathBuf },
    /// Unary structures against algebras of the lifted décalage
    Thm1 { path: PathBuf },
    /// Lax structures against algebras of the modified décalage
    Thm2 { path: PathBuf },
    /// Operadic structures against strict algebras
    Thm4 { path: PathBuf },
    /// The simplicial set whose décalage is the nerve
    Undeck { path: PathBuf },
    /// Segal condition
    Segal { path: PathBuf },
    /// π₀ factorization of the first functor in the file
    Factorize { path: PathBuf },
    /// Category of elements and its projection
    Elements { path: PathBuf },
    /// Built-in example families
    Examples {
        name: ExampleName,
        /// Seed distribution such as `1/4|1/4|1/2`
        #[arg(long = "seed")]
        seeds: Vec<String>,
        /// Size of the pointed universe, basepoint included
        #[arg(long, default_value_t = 3)]
        universe: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExampleName {
    Decalage,
    Subprob,
    Disintegration,
    Pointed,
}

#[derive(Default)]
struct Out {
    facts: Vec<String>,
    violations: Vec<String>,
    emitted: String,
}

impl Out {
    fn fact(&mut self, key: impl AsRef<str>, value: impl std::fmt::Display) {
        self.facts.push(format!("{}: {value}", key.as_ref()));
    }

    fn report(&mut self, scope: &str, r: &Report) {
        for v in &r.violations {
            if scope.is_empty() {
                self.violations.push(format!("{}: {}", v.law, v.witness));
            } else {
                self.violations.push(format!("{scope} {}: {}", v.law, v.witness));
            }
        }
    }

    fn require(&mut self, ok: bool, law: &str, witness: impl Into<String>) {
        if !ok {
            self.violations.push(format!("{law}: {}", witness.into()));
        }
    }

    /// With emitted text the report becomes comments, so the whole output
    /// parses as a document.
    fn render(mut self) -> (i32, String) {
        self.facts.sort();
        self.violations.sort();
        let pass = self.violations.is_empty();
        let lead = if self.emitted.is_empty() { "" } else { "# " };
        let mut text = String::new();
        for f in &self.facts {
            text.push_str(&format!("{lead}{f}\n"));
        }
        for v in &self.violations {
            text.push_str(&format!("{lead}violation {v}\n"));
        }
        text.push_str(&format!("{lead}result: {}\n", if pass { "pass" } else { "fail" }));
        text.push_str(&self.emitted);
        (if pass { 0 } else { 1 }, text)
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn load(path: &PathBuf) -> Result<Document> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Precondition(format!("{}: {e}", path.display())))?;
    parse(&text)
}

fn operadic_of(doc: &Document) -> Result<&OperadicStructure> {
    match doc.single()? {
        Structure::Operadic(s) => Ok(s),
        other => Err(Error::Precondition(format!("expected an operadic structure, found a {}", other.kind()))),
    }
}

fn lt_over_of(s: &Structure) -> Result<Option<LtOverS>> {
    Ok(match s {
        Structure::LtOver(v) => Some(v.clone()),
        Structure::Operadic(o) => Some(LtOverS::new(o.lt.clone(), o.card.clone())?),
        _ => None,
    })
}

fn over_of(s: &Structure) -> Option<OverS> {
    s.card().map(|card| OverS {
        cat: s.cat().clone(),
        card: card.clone(),
    })
}

fn card_bound(card: &Card, bound: usize) -> Result<()> {
    match card.obj.iter().max() {
        Some(&m) if m > bound => Err(Error::BoundExceeded(format!("cardinality {m} exceeds the bound {bound}"))),
        _ => Ok(()),
    }
}

fn describe(out: &mut Out, c: &FinCat) {
    out.fact("objects", c.num_objects());
    out.fact("morphisms", c.num_morphisms());
}

fn cmd_check(doc: &Document, out: &mut Out) {
    for (name, s) in &doc.structures {
        out.fact(format!("structure {name}"), s.kind());
        out.report(name, &check_category(s.cat()));
        if let Some(card) = s.card() {
            out.report(name, &crate::sskel::check_card(s.cat(), card));
        }
    }
    for f in &doc.functors {
        let (Some(src), Some(tgt)) = (doc.structure(&f.source), doc.structure(&f.target)) else {
            continue;
        };
        let r = check_functor(src.cat(), tgt.cat(), &f.functor);
        out.report(&f.name, &r);
        if let (Some(nu), Some(sc), Some(tc)) = (&f.nu, src.card(), tgt.card()) {
            let t = crate::moddec::LaxTriangleMor {
                functor: f.functor.clone(),
                nu: nu.clone(),
            };
            out.report(&f.name, &check_lax_triangle(src.cat(), sc, tgt.cat(), tc, &t));
            out.fact(format!("functor {} strict", f.name), yes(check_strict(&t)));
        }
    }
    for (name, x) in &doc.ssets {
        out.fact(format!("sset {name} truncation"), x.k);
        out.report(name, &check_simplicial_identities(x));
    }
}

fn cmd_operadic(s: &OperadicStructure, out: &mut Out) -> Result<()> {
    describe(out, s.cat());
    out.fact("fibres", s.fibre_keys().len());
    out.fact("unary", yes(check_unary(s)));
    out.report("", &check_operadic(s)?);
    Ok(())
}

fn cmd_lax(s: &OperadicStructure, out: &mut Out) -> Result<()> {
    let s = if s.is_lax() { s.clone() } else { s.with_identity_relabel() };
    describe(out, s.cat());
    out.fact("gamma trivial", yes(is_gamma_trivial(&s)));
    out.report("", &check_lax_operadic(&s)?);
    Ok(())
}

fn cmd_comonad(c: &FinCat, out: &mut Out) -> Result<()> {
    describe(out, c);
    out.report("", &check_comonad_laws(c));
    if c.num_objects() <= COALGEBRA_MAX_OBJECTS && c.num_morphisms() <= COALGEBRA_MAX_MORPHISMS {
        let found = enumerate_coalgebras(c)?;
        let choices = local_terminal_choices(c);
        let d = dec(c);
        out.fact("coalgebras", found.len());
        out.fact("local terminal choices", choices.len());
        let mut encoded: Vec<_> = choices.iter().map(|lt| coalgebra_from_lt(lt, &d)).collect();
        encoded.sort();
        encoded.dedup();
        let mut found_sorted = found.clone();
        found_sorted.sort();
        out.require(
            encoded == found_sorted,
            "coalgebras",
            "coalgebras do not match local terminal choices",
        );
    } else {
        out.fact("coalgebras", "not enumerated");
    }
    Ok(())
}

fn cmd_monad(s: &Structure, bound_card: usize, out: &mut Out) -> Result<()> {
    describe(out, s.cat());
    let lt = s
        .lt()
        .ok_or_else(|| Error::Precondition("the monads need chosen local terminals".into()))?;
    out.report("D~", &check_monad_laws(lt));
    out.fact("D~ checked", "yes");
    if let Some(v) = lt_over_of(s)? {
        card_bound(&v.card, bound_card)?;
        out.report("D~m", &check_dm_monad_laws(&v)?);
        out.fact("D~m checked", "yes");
    }
    Ok(())
}

fn cmd_thm1(s: &Structure, cli: &Cli, out: &mut Out) -> Result<()> {
    let lt = s
        .lt()
        .ok_or_else(|| Error::Precondition("needs chosen local terminals".into()))?;
    describe(out, lt.cat());
    let o = thm1_enumerate(lt, cli.bound_objects, cli.bound_morphisms)?;
    out.fact("algebras", o.algebras.len());
    out.fact("unary structures", o.structures.len());
    out.fact("bijection", yes(o.is_bijection()));
    out.require(o.is_bijection(), "bijection", "unary structures and algebras differ");
    if let Structure::Operadic(s) = s {
        if check_unary(s) && !s.is_lax() {
            let ctx = DecContext::new(&s.lt);
            let a = unary_to_algebra(s, &ctx.d)?;
            out.report("algebra", &check_algebra_laws(&ctx, &a.act));
            let back = algebra_to_unary(&a, &ctx.d)?;
            out.require(back == *s, "roundtrip", "the algebra does not decode to the input");
            let muts = mutation_lockstep(s, usize::MAX)?;
            let agree = muts.iter().filter(|m| m.agrees()).count();
            out.fact("mutations", muts.len());
            out.fact("mutations in lockstep", agree);
            out.require(agree == muts.len(), "lockstep", format!("{} of {} mutations disagree", muts.len() - agree, muts.len()));
        }
    }
    Ok(())
}

fn cmd_thm2(s: &OperadicStructure, bound_card: usize, out: &mut Out) -> Result<()> {
    card_bound(&s.card, bound_card)?;
    let s = if s.is_lax() { s.clone() } else { s.with_identity_relabel() };
    describe(out, s.cat());
    let a = lax_to_dm_algebra(&s)?;
    out.fact("Dm objects", a.dm.cat().num_objects());
    out.fact("Dm morphisms", a.dm.cat().num_morphisms());
    out.fact("action strict", yes(check_strict(&a.act)));
    out.fact("gamma trivial", yes(is_gamma_trivial(&s)));
    out.report("algebra", &check_dm_algebra_laws(&a)?);
    out.require(dm_algebra_to_lax(&a) == s, "roundtrip", "the algebra does not decode to the input");
    Ok(())
}

fn cmd_thm4(s: &OperadicStructure, bound_card: usize, out: &mut Out) -> Result<()> {
    card_bound(&s.card, bound_card)?;
    describe(out, s.cat());
    let trivial = !s.is_lax() || is_gamma_trivial(s);
    out.fact("gamma trivial", yes(trivial));
    let lax = if s.is_lax() { s.clone() } else { s.with_identity_relabel() };
    let a = lax_to_dm_algebra(&lax)?;
    let strict = check_strict(&a.act);
    out.fact("action strict", yes(strict));
    out.require(strict == trivial, "strictness", "strictness of the action disagrees with triviality of gamma");
    if !trivial {
        out.require(false, "strict", "the relabellings are not identities");
        return Ok(());
    }
    let s = s.without_relabel();
    let a = operadic_to_strict_algebra(&s)?;
    out.report("algebra", &check_dm_algebra_laws(&a)?);
    out.require(
        strict_algebra_to_operadic(&a)? == s,
        "roundtrip",
        "the algebra does not decode to the input",
    );
    Ok(())
}

fn cmd_undeck(s: &OperadicStructure, k: usize, out: &mut Out) -> Result<TruncatedSSet> {
    if k < 1 {
        return Err(Error::Precondition("undecking needs truncation at least 1".into()));
    }
    let u = undeck(s, k)?;
    for n in 0..=k {
        out.fact(format!("level {n} simplices"), u.size(n));
    }
    out.report("", &check_simplicial_identities(&u));
    let top = (k - 1).min(2);
    let shifted = dec_ss(&u)?;
    let n = nerve(s.cat(), k - 1);
    out.require(sset_equal(&shifted, &n, top), "decalage", format!("the décalage differs from the nerve below level {}", top + 1));
    if shifted.k >= 2 {
        out.report("décalage", &segal_report(&shifted)?);
    }
    Ok(u)
}

fn cmd_segal(doc: &Document, k: usize, out: &mut Out) -> Result<TruncatedSSet> {
    let x = if let Some((_, x)) = doc.ssets.first() {
        x.clone()
    } else {
        match doc.single()? {
            Structure::Operadic(s) if check_unary(s) => dec_ss(&undeck(s, k + 1)?)?,
            s => nerve(s.cat(), k),
        }
    };
    for n in 0..=x.k {
        out.fact(format!("level {n} simplices"), x.size(n));
    }
    out.report("", &check_simplicial_identities(&x));
    out.report("", &segal_report(&x)?);
    Ok(x)
}

fn first_functor(doc: &Document) -> Result<(&FunctorDoc, &FinCat, &FinCat)> {
    let f = doc
        .functors
        .first()
        .ok_or_else(|| Error::Precondition("the file declares no functor".into()))?;
    let src = doc.structure(&f.source).unwrap().cat();
    let tgt = doc.structure(&f.target).unwrap().cat();
    Ok((f, src, tgt))
}

fn cmd_factorize(doc: &Document, emit: bool, out: &mut Out) -> Result<()> {
    let (f, src, tgt) = first_functor(doc)?;
    let r = check_functor(src, tgt, &f.functor);
    if !r.is_ok() {
        out.report(&f.name, &r);
        return Ok(());
    }
    let fac = pi0_factorize(src, tgt, &f.functor);
    out.fact("middle objects", fac.mid.num_objects());
    out.fact("middle morphisms", fac.mid.num_morphisms());
    out.require(fac.left.then(&fac.right) == f.functor, "composite", "R∘L differs from the functor");
    out.require(is_pi0_bijective(src, &fac.mid, &fac.left), "left", "L is not π₀-bijective");
    out.require(is_pi0_cartesian(&fac.mid, tgt, &fac.right), "right", "R is not π₀-cartesian");
    if emit {
        out.emitted.push_str(&emit_category("middle", &fac.mid));
        let mk = |name: &str, source: &str, target: &str, functor| FunctorDoc {
            name: name.into(),
            source: source.into(),
            target: target.into(),
            functor,
            nu: None,
        };
        out.emitted
            .push_str(&emit_functor(&mk("left", &f.source, "middle", fac.left.clone()), src, &fac.mid));
        out.emitted
            .push_str(&emit_functor(&mk("right", "middle", &f.target, fac.right.clone()), &fac.mid, tgt));
    }
    Ok(())
}

fn cmd_elements(s: &Structure, emit: bool, out: &mut Out) -> Result<()> {
    let v = over_of(s).ok_or_else(|| Error::Precondition("elements need cardinalities".into()))?;
    let e = elements(&v);
    out.fact("elements objects", e.cat.num_objects());
    out.fact("elements morphisms", e.cat.num_morphisms());
    out.require(is_discrete_opfib(&e.cat, &v.cat, &e.proj), "opfibration", "the projection is not a discrete opfibration");
    out.require(has_finite_fibres(&e.cat, &v.cat, &e.proj), "finite fibres", "a fibre is infinite");
    let a = dm_arrow(&e.cat, &v.cat, &e.proj);
    out.fact("Dm objects", a.dom.num_objects());
    out.require(is_discrete_opfib(&a.dom, &a.cod, &a.functor), "Dm opfibration", "Dm of the projection is not a discrete opfibration");
    if emit {
        out.emitted.push_str(&emit_category("elements", &e.cat));
    }
    Ok(())
}

fn seeds_or(defaults: Vec<Vec<Weight>>, given: &[String]) -> Result<Vec<Vec<Weight>>> {
    if given.is_empty() {
        Ok(defaults)
    } else {
        given.iter().map(|s| parse_weights(s)).collect()
    }
}

fn check_example(name: &str, s: &OperadicStructure, out: &mut Out) -> Result<()> {
    out.report(name, &check_operadic(s)?);
    Ok(())
}

fn cmd_examples(cli: &Cli, which: ExampleName, seeds: &[String], universe: usize, out: &mut Out) -> Result<()> {
    let built = match which {
        ExampleName::Decalage => {
            let cs = corpus(cli.corpus_seed);
            out.fact("instances", cs.len());
            for (name, c) in &cs {
                let s = ex_decalage_unary(c);
                out.require(check_unary(&s), "unary", name.clone());
                check_example(name, &s, out)?;
            }
            None
        }
        ExampleName::Subprob => {
            let seeds = seeds_or(sub_prob_default_seeds(), seeds)?;
            out.fact("seeds", seeds.iter().map(|s| weights_name(s)).collect::<Vec<_>>().join(" "));
            Some(ex_sub_prob(&seeds, cli.bound_closure)?)
        }
        ExampleName::Disintegration => {
            let seeds = seeds_or(disintegration_default_seeds(), seeds)?;
            out.fact("seeds", seeds.iter().map(|s| weights_name(s)).collect::<Vec<_>>().join(" "));
            Some(ex_disintegration(&seeds, cli.bound_closure)?)
        }
        ExampleName::Pointed => {
            out.fact("universe", universe);
            Some(ex_pointed_sets(&pointed_letters(universe))?)
        }
    };
    if let Some(s) = built {
        describe(out, s.cat());
        check_example("", &s, out)?;
        if cli.emit {
            out.emitted.push_str(&emit_operadic("example", &s));
        }
    }
    Ok(())
}

fn dispatch(cli: &Cli, out: &mut Out) -> Result<()> {
    match &cli.command {
        Command::Check { path } => cmd_check(&load(path)?, out),
        Command::Operadic { path } => cmd_operadic(operadic_of(&load(path)?)?, out)?,
        Command::Lax { path } => cmd_lax(operadic_of(&load(path)?)?, out)?,
        Command::Comonad { path } => cmd_comonad(load(path)?.single()?.cat(), out)?,
        Command::Monad { path } => cmd_monad(load(path)?.single()?, cli.bound_card, out)?,
        Command::Thm1 { path } => cmd_thm1(load(path)?.single()?, cli, out)?,
        Command::Thm2 { path } => cmd_thm2(operadic_of(&load(path)?)?, cli.bound_card, out)?,
        Command::Thm4 { path } => cmd_thm4(operadic_of(&load(path)?)?, cli.bound_card, out)?,
        Command::Undeck { path } => {
            let doc = load(path)?;
            let s = operadic_of(&doc)?;
            let u = cmd_undeck(s, cli.truncation, out)?;
            if cli.emit {
                out.emitted.push_str(&emit_sset("undeck", &u));
            }
        }
        Command::Segal { path } => {
            let x = cmd_segal(&load(path)?, cli.truncation, out)?;
            if cli.emit {
                out.emitted.push_str(&emit_sset("segal", &x));
            }
        }
        Command::Factorize { path } => cmd_factorize(&load(path)?, cli.emit, out)?,
        Command::Elements { path } => cmd_elements(load(path)?.single()?, cli.emit, out)?,
        Command::Examples { name, seeds, universe } => cmd_examples(cli, *name, seeds, *universe, out)?,
    }
    Ok(())
}

/// Runs one command line and returns the exit code with the report.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    let mut out = Out::default();
    match dispatch(&cli, &mut out) {
        Ok(()) => out.render(),
        Err(e) => (2, format!("error: {e}\n")),
    }
}
