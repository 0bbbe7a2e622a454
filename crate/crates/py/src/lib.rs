use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;

use opcat::correspond::{self, is_gamma_trivial};
use opcat::decalage;
use opcat::examples;
use opcat::fincat::{self, local_terminal_choices};
use opcat::moddec::{self, LtOverS};
use opcat::operadic;
use opcat::simplicial::{self, TruncatedSSet};
use opcat::sskel;
use opcat::text::{self, Structure};
use opcat::Report;

fn err(e: opcat::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn violations(r: Report) -> Vec<(String, String)> {
    r.violations.into_iter().map(|v| (v.law.to_string(), v.witness)).collect()
}

#[pyclass(name = "Category", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCategory(fincat::FinCat);

#[pymethods]
impl PyCategory {
    /// Parses a category, or the underlying category of any structure block.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyCategory(text::parse_structure(text).map_err(err)?.cat().clone()))
    }

    #[staticmethod]
    fn arrow() -> Self {
        PyCategory(fincat::FinCat::arrow())
    }

    #[staticmethod]
    fn discrete(n: usize) -> Self {
        PyCategory(fincat::FinCat::discrete(n))
    }

    /// The poset `0 < 1 < ... < n-1`.
    #[staticmethod]
    fn chain(n: usize) -> Self {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        PyCategory(fincat::FinCat::poset(&refs, |a, b| a <= b))
    }

    #[getter]
    fn num_objects(&self) -> usize {
        self.0.num_objects()
    }

    #[getter]
    fn num_morphisms(&self) -> usize {
        self.0.num_morphisms()
    }

    fn objects(&self) -> Vec<String> {
        self.0.obj_names().to_vec()
    }

    fn morphisms(&self) -> Vec<String> {
        self.0.mor_names().to_vec()
    }

    fn dom(&self, f: usize) -> PyResult<usize> {
        self.check_mor(f)?;
        Ok(self.0.dom(f))
    }

    fn cod(&self, f: usize) -> PyResult<usize> {
        self.check_mor(f)?;
        Ok(self.0.cod(f))
    }

    fn compose(&self, g: usize, f: usize) -> PyResult<Option<usize>> {
        self.check_mor(g)?;
        self.check_mor(f)?;
        Ok(self.0.compose(g, f))
    }

    fn check(&self) -> Vec<(String, String)> {
        violations(fincat::check_category(&self.0))
    }

    /// The décalage `D(C)`.
    fn dec(&self) -> Self {
        PyCategory(decalage::dec(&self.0).cat)
    }

    fn comonad_violations(&self) -> Vec<(String, String)> {
        violations(decalage::check_comonad_laws(&self.0))
    }

    /// Number of coalgebras over `D`, one per choice of local terminals.
    fn coalgebra_count(&self) -> PyResult<usize> {
        Ok(decalage::enumerate_coalgebras(&self.0).map_err(err)?.len())
    }

    fn local_terminal_choices(&self) -> Vec<Vec<usize>> {
        local_terminal_choices(&self.0).iter().map(|lt| lt.terminals().to_vec()).collect()
    }

    fn nerve(&self, k: usize) -> PySimplicialSet {
        PySimplicialSet(simplicial::nerve(&self.0, k))
    }

    fn shift_identity_holds(&self, k: usize) -> bool {
        simplicial::shift_identity_holds(&self.0, k)
    }

    /// The unary operadic structure on `D(C)`.
    fn decalage_unary(&self) -> PyOperadic {
        PyOperadic(examples::ex_decalage_unary(&self.0))
    }

    fn emit(&self, name: &str) -> String {
        text::emit_category(name, &self.0)
    }

    fn __repr__(&self) -> String {
        format!("Category(objects={}, morphisms={})", self.0.num_objects(), self.0.num_morphisms())
    }
}

impl PyCategory {
    fn check_mor(&self, f: usize) -> PyResult<()> {
        if f < self.0.num_morphisms() {
            Ok(())
        } else {
            Err(PyIndexError::new_err(format!("no morphism {f}")))
        }
    }
}

#[pyclass(name = "OperadicStructure", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyOperadic(operadic::OperadicStructure);

#[pymethods]
impl PyOperadic {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        match text::parse_structure(text).map_err(err)? {
            Structure::Operadic(s) => Ok(PyOperadic(s)),
            other => Err(PyValueError::new_err(format!("expected an operadic structure, got {}", other.kind()))),
        }
    }

    /// The skeleton of finite sets and all maps, truncated at `n`.
    #[staticmethod]
    fn finite_sets(n: usize) -> Self {
        PyOperadic(sskel::s_operadic(n))
    }

    #[staticmethod]
    fn surjections(n: usize) -> Self {
        PyOperadic(sskel::surjections_operadic(n))
    }

    #[staticmethod]
    #[pyo3(signature = (seeds, bound = examples::DEFAULT_CLOSURE_BOUND))]
    fn sub_probability(seeds: Vec<String>, bound: usize) -> PyResult<Self> {
        let seeds = seeds.iter().map(|s| examples::parse_weights(s)).collect::<opcat::Result<Vec<_>>>().map_err(err)?;
        Ok(PyOperadic(examples::ex_sub_prob(&seeds, bound).map_err(err)?))
    }

    #[staticmethod]
    #[pyo3(signature = (seeds, bound = examples::DEFAULT_CLOSURE_BOUND))]
    fn disintegration(seeds: Vec<String>, bound: usize) -> PyResult<Self> {
        let seeds = seeds.iter().map(|s| examples::parse_weights(s)).collect::<opcat::Result<Vec<_>>>().map_err(err)?;
        Ok(PyOperadic(examples::ex_disintegration(&seeds, bound).map_err(err)?))
    }

    #[staticmethod]
    fn pointed_sets(universe: usize) -> PyResult<Self> {
        Ok(PyOperadic(examples::ex_pointed_sets(&examples::pointed_letters(universe)).map_err(err)?))
    }

    #[getter]
    fn category(&self) -> PyCategory {
        PyCategory(self.0.cat().clone())
    }

    #[getter]
    fn is_lax(&self) -> bool {
        self.0.is_lax()
    }

    #[getter]
    fn is_unary(&self) -> bool {
        operadic::check_unary(&self.0)
    }

    fn card(&self, x: usize) -> PyResult<usize> {
        if x >= self.0.cat().num_objects() {
            return Err(PyIndexError::new_err(format!("no object {x}")));
        }
        Ok(self.0.card_obj(x))
    }

    /// Fibre object over the 1-based element `i` of the codomain of `f`.
    fn fibre(&self, f: usize, i: usize) -> Option<usize> {
        self.0.fib(f, i)
    }

    fn fibre_keys(&self) -> Vec<(usize, usize)> {
        self.0.fibre_keys()
    }

    /// Strict or lax axioms, depending on whether relabelling data is present.
    fn check(&self) -> PyResult<Vec<(String, String)>> {
        let r = if self.0.is_lax() {
            operadic::check_lax_operadic(&self.0)
        } else {
            operadic::check_operadic(&self.0)
        };
        Ok(violations(r.map_err(err)?))
    }

    fn with_identity_relabel(&self) -> Self {
        PyOperadic(self.0.with_identity_relabel())
    }

    fn gamma_trivial(&self) -> bool {
        is_gamma_trivial(&self.0)
    }

    /// Round trip through the algebra encoding; unary structures go through
    /// `D~`, the rest through `D~_m`.
    fn roundtrip(&self) -> PyResult<Self> {
        if operadic::check_unary(&self.0) && !self.0.is_lax() {
            let d = decalage::dec(self.0.cat());
            let a = correspond::unary_to_algebra(&self.0, &d).map_err(err)?;
            return Ok(PyOperadic(correspond::algebra_to_unary(&a, &d).map_err(err)?));
        }
        let lax = if self.0.is_lax() { self.0.clone() } else { self.0.with_identity_relabel() };
        let a = correspond::lax_to_dm_algebra(&lax).map_err(err)?;
        let back = correspond::dm_algebra_to_lax(&a);
        Ok(PyOperadic(if self.0.is_lax() { back } else { back.without_relabel() }))
    }

    fn dm_monad_violations(&self) -> PyResult<Vec<(String, String)>> {
        let base = LtOverS::new(self.0.lt.clone(), self.0.card.clone()).map_err(err)?;
        Ok(violations(moddec::check_dm_monad_laws(&base).map_err(err)?))
    }

    fn undeck(&self, k: usize) -> PyResult<PySimplicialSet> {
        Ok(PySimplicialSet(simplicial::undeck(&self.0, k).map_err(err)?))
    }

    /// Sizes of the algebra and structure sides of the unary correspondence.
    #[pyo3(signature = (max_objects = 3, max_morphisms = 6))]
    fn unary_correspondence(&self, max_objects: usize, max_morphisms: usize) -> PyResult<(usize, usize, bool)> {
        let out = correspond::thm1_enumerate(&self.0.lt, max_objects, max_morphisms).map_err(err)?;
        Ok((out.algebras.len(), out.structures.len(), out.is_bijection()))
    }

    fn emit(&self, name: &str) -> String {
        text::emit_operadic(name, &self.0)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!(
            "OperadicStructure(objects={}, morphisms={}, lax={})",
            self.0.cat().num_objects(),
            self.0.cat().num_morphisms(),
            self.0.is_lax()
        )
    }
}

#[pyclass(name = "SimplicialSet", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySimplicialSet(TruncatedSSet);

#[pymethods]
impl PySimplicialSet {
    #[staticmethod]
    fn triangle_boundary() -> Self {
        PySimplicialSet(simplicial::boundary_of_triangle())
    }

    #[getter]
    fn truncation(&self) -> usize {
        self.0.k
    }

    fn size(&self, n: usize) -> PyResult<usize> {
        if n > self.0.k {
            return Err(PyIndexError::new_err(format!("no level {n}")));
        }
        Ok(self.0.size(n))
    }

    fn identity_violations(&self) -> Vec<(String, String)> {
        violations(simplicial::check_simplicial_identities(&self.0))
    }

    fn is_segal(&self) -> PyResult<bool> {
        simplicial::segal(&self.0).map_err(err)
    }

    fn segal_violations(&self) -> PyResult<Vec<(String, String)>> {
        Ok(violations(simplicial::segal_report(&self.0).map_err(err)?))
    }

    /// The shifted simplicial set, one level lower.
    fn dec(&self) -> PyResult<Self> {
        Ok(PySimplicialSet(simplicial::dec_ss(&self.0).map_err(err)?))
    }

    fn equals(&self, other: &Self, k: usize) -> bool {
        simplicial::sset_equal(&self.0, &other.0, k)
    }

    fn emit(&self, name: &str) -> String {
        text::emit_sset(name, &self.0)
    }

    fn __repr__(&self) -> String {
        let sizes: Vec<String> = (0..=self.0.k).map(|n| self.0.size(n).to_string()).collect();
        format!("SimplicialSet(sizes=[{}])", sizes.join(", "))
    }
}

/// Runs the command-line tool in-process; returns `(exit_code, report)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String) {
    opcat::cli::run(std::iter::once("opcat".to_string()).chain(args))
}

#[pymodule]
fn opcat_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCategory>()?;
    m.add_class::<PyOperadic>()?;
    m.add_class::<PySimplicialSet>()?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
