//! Python bindings. Rationals are accepted as `int`, `str` or `fractions.Fraction`
//! and returned as `fractions.Fraction`.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList, PyTuple};

use miniwalls_core::classical::{self, xi_admissible, WallXi};
use miniwalls_core::lattice::{ClassVec, LatticeModel, Preset};
use miniwalls_core::moduli::{self, ModuliKind, TorsionConvention};
use miniwalls_core::oracle;
use miniwalls_core::rational::parse_rational;
use miniwalls_core::{
    CandidateShadow, ChamberCell, CharVec, EngineError, FilterLevel, Interval, MiniWall, Rational, SearchBounds,
    Segment, Shadow, StabilityParams,
};

create_exception!(miniwalls, RefusedError, PyRuntimeError, "The engine declined a well-formed request.");

fn err(e: EngineError) -> PyErr {
    if e.is_refusal() {
        RefusedError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn rat(v: &Bound<'_, PyAny>) -> PyResult<Rational> {
    parse_rational(&v.str()?.to_string_lossy()).map_err(err)
}

fn class(v: &[Bound<'_, PyAny>]) -> PyResult<ClassVec> {
    v.iter().map(rat).collect::<PyResult<Vec<_>>>().map(ClassVec::new)
}

fn fraction<'py>(py: Python<'py>, x: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((x.to_string(),))
}

fn integer<'py>(py: Python<'py>, n: &impl std::fmt::Display) -> PyResult<Bound<'py, PyAny>> {
    py.import("builtins")?.getattr("int")?.call1((n.to_string(),))
}

fn fractions<'py>(py: Python<'py>, v: &ClassVec) -> PyResult<Bound<'py, PyList>> {
    PyList::new(py, v.coords().iter().map(|x| fraction(py, x)).collect::<PyResult<Vec<_>>>()?)
}

fn opt_fraction<'py>(py: Python<'py>, x: Option<&Rational>) -> PyResult<Bound<'py, PyAny>> {
    match x {
        Some(x) => fraction(py, x),
        None => Ok(py.None().into_bound(py)),
    }
}

fn filter_level(name: &str) -> PyResult<FilterLevel> {
    FilterLevel::from_name(name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown filter {name:?}; use heart, aside or bside")))
}

fn bounds(t: &CharVec, rank_bound: Option<u32>, filter: &str, c_step: Option<&Bound<'_, PyAny>>) -> PyResult<SearchBounds> {
    let level = filter_level(filter)?;
    let mut b = match rank_bound {
        Some(n) => SearchBounds::new(n, level).map_err(err)?,
        None => SearchBounds::default_for(t.rk, level),
    };
    if let Some(step) = c_step {
        b = b.with_c_step(rat(step)?).map_err(err)?;
    }
    Ok(b)
}

fn interval(lo: &Bound<'_, PyAny>, hi: Option<&Bound<'_, PyAny>>) -> PyResult<Interval> {
    match hi {
        Some(hi) => Interval::closed(rat(lo)?, rat(hi)?),
        None => Interval::from(rat(lo)?),
    }
    .map_err(err)
}

/// Intersection lattice with a reference ample class.
#[pyclass(name = "Lattice", module = "miniwalls", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyLattice {
    inner: LatticeModel,
}

#[pymethods]
impl PyLattice {
    #[new]
    fn new(gram: Vec<Vec<Bound<'_, PyAny>>>, ample_ref: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let gram = gram.iter().map(|row| class(row).map(|c| c.0)).collect::<PyResult<Vec<_>>>()?;
        Ok(PyLattice {
            inner: LatticeModel::new(gram, class(&ample_ref)?).map_err(err)?,
        })
    }

    /// `"P2"` or `"P1xP1"`.
    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        let p = Preset::from_name(name).ok_or_else(|| PyValueError::new_err(format!("unknown preset {name:?}")))?;
        Ok(PyLattice {
            inner: LatticeModel::preset(p),
        })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn gram<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let rows = self
            .inner
            .gram()
            .iter()
            .map(|row| fractions(py, &ClassVec::new(row.clone())))
            .collect::<PyResult<Vec<_>>>()?;
        PyList::new(py, rows)
    }

    fn pairing<'py>(&self, py: Python<'py>, a: Vec<Bound<'py, PyAny>>, b: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.pairing(&class(&a)?, &class(&b)?).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("Lattice(rank={})", self.inner.rank())
    }
}

/// Numerical type `(rank, c1, ch2)`.
#[pyclass(name = "ChernType", module = "miniwalls", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyChernType {
    inner: CharVec,
}

#[pymethods]
impl PyChernType {
    /// Give exactly one of `ch2` or `c2`; `c2` needs the lattice.
    #[new]
    #[pyo3(signature = (rank, c1, ch2=None, c2=None, lattice=None))]
    fn new(
        rank: i64,
        c1: Vec<Bound<'_, PyAny>>,
        ch2: Option<Bound<'_, PyAny>>,
        c2: Option<Bound<'_, PyAny>>,
        lattice: Option<&PyLattice>,
    ) -> PyResult<Self> {
        let c1 = class(&c1)?;
        let inner = match (ch2, c2, lattice) {
            (Some(ch2), None, _) => CharVec::new(rank, c1, rat(&ch2)?),
            (None, Some(c2), Some(l)) => CharVec::from_c2(rank, c1, rat(&c2)?, &l.inner),
            (None, Some(_), None) => return Err(PyValueError::new_err("c2 needs lattice")),
            _ => return Err(PyValueError::new_err("give exactly one of ch2 or c2")),
        }
        .map_err(err)?;
        Ok(PyChernType { inner })
    }

    #[getter]
    fn rank(&self) -> i64 {
        self.inner.rk
    }

    #[getter]
    fn c1<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        fractions(py, self.inner.c1())
    }

    #[getter]
    fn ch2<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, self.inner.ch2())
    }

    fn c2<'py>(&self, py: Python<'py>, lattice: &PyLattice) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.c2(&lattice.inner).map_err(err)?)
    }

    /// `(-r, c1, -ch2)`.
    fn dual(&self) -> Self {
        PyChernType {
            inner: moduli::dual_type(&self.inner),
        }
    }

    fn __repr__(&self) -> String {
        format!("ChernType({})", self.inner)
    }
}

/// Lattice together with `beta` and `omega`.
#[pyclass(name = "Stability", module = "miniwalls", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyStability {
    inner: StabilityParams,
}

#[pymethods]
impl PyStability {
    #[new]
    fn new(lattice: &PyLattice, beta: Vec<Bound<'_, PyAny>>, omega: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        Ok(PyStability {
            inner: StabilityParams::new(lattice.inner.clone(), class(&beta)?, class(&omega)?).map_err(err)?,
        })
    }

    #[getter]
    fn lattice(&self) -> PyLattice {
        PyLattice {
            inner: self.inner.lattice().clone(),
        }
    }

    #[getter]
    fn beta<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        fractions(py, self.inner.beta())
    }

    #[getter]
    fn omega<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        fractions(py, self.inner.omega())
    }

    /// `(rank, x, c)` with `x = c1.omega` and `c = -ch2 + c1.beta - rank beta^2 / 2`.
    fn shadow<'py>(&self, py: Python<'py>, t: &PyChernType) -> PyResult<Bound<'py, PyTuple>> {
        shadow_tuple(py, &self.inner.shadow(&t.inner).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("Stability(beta={}, omega={})", self.inner.beta(), self.inner.omega())
    }
}

fn shadow_tuple<'py>(py: Python<'py>, s: &Shadow) -> PyResult<Bound<'py, PyTuple>> {
    PyTuple::new(
        py,
        [
            s.rk.into_pyobject(py)?.into_any(),
            fraction(py, &s.x)?,
            fraction(py, &s.c)?,
        ],
    )
}

fn candidate_dict<'py>(py: Python<'py>, c: &CandidateShadow) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("shadow", shadow_tuple(py, &c.shadow)?)?;
    d.set_item("filter_level_passed", c.filter_level_passed.name())?;
    Ok(d)
}

fn wall_dict<'py>(py: Python<'py>, w: &MiniWall) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("m_squared", fraction(py, &w.m_squared)?)?;
    let witnesses = w.witnesses.iter().map(|c| candidate_dict(py, c)).collect::<PyResult<Vec<_>>>()?;
    d.set_item("witnesses", PyList::new(py, witnesses)?)?;
    Ok(d)
}

fn xi_dict<'py>(py: Python<'py>, w: &WallXi) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("xi", fractions(py, &w.xi)?)?;
    d.set_item("s", w.s)?;
    d.set_item("f", fractions(py, &w.f)?)?;
    Ok(d)
}

/// `(re2, im1, re0)` with `Z(m) = re2 m^2 + re0 + i im1 m`.
#[pyfunction]
fn central_charge<'py>(py: Python<'py>, t: &PyChernType, stability: &PyStability) -> PyResult<Bound<'py, PyTuple>> {
    let z = miniwalls_core::central_charge(&t.inner, &stability.inner);
    PyTuple::new(py, [fraction(py, &z.re2)?, fraction(py, &z.im1)?, fraction(py, &z.re0)?])
}

/// `1` when the phase of `e` exceeds that of `b` at `m`, `-1` when smaller, `0` when equal.
#[pyfunction]
fn phase_compare(e: &PyChernType, b: &PyChernType, stability: &PyStability, m: Bound<'_, PyAny>) -> PyResult<i32> {
    let ord = miniwalls_core::phase_compare(&e.inner, &b.inner, &stability.inner, &rat(&m)?).map_err(err)?;
    Ok(ord as i32)
}

/// Positive wall `m^2` of a pair, if any.
#[pyfunction]
fn wall_of_pair<'py>(py: Python<'py>, e: &PyChernType, a: &PyChernType, stability: &PyStability) -> PyResult<Bound<'py, PyAny>> {
    opt_fraction(py, miniwalls_core::wall_of_pair(&e.inner, &a.inner, &stability.inner).as_ref())
}

#[pyfunction]
#[pyo3(signature = (t, stability, lo, hi=None, rank_bound=None, filter="bside", c_step=None))]
#[allow(clippy::too_many_arguments)]
fn find_mini_walls<'py>(
    py: Python<'py>,
    t: &PyChernType,
    stability: &PyStability,
    lo: Bound<'py, PyAny>,
    hi: Option<Bound<'py, PyAny>>,
    rank_bound: Option<u32>,
    filter: &str,
    c_step: Option<Bound<'py, PyAny>>,
) -> PyResult<Bound<'py, PyList>> {
    let b = bounds(&t.inner, rank_bound, filter, c_step.as_ref())?;
    let iv = interval(&lo, hi.as_ref())?;
    let walls = miniwalls_core::find_mini_walls(&t.inner, &stability.inner, &iv, &b).map_err(err)?;
    PyList::new(py, walls.iter().map(|w| wall_dict(py, w)).collect::<PyResult<Vec<_>>>()?)
}

/// Alternating chambers and walls covering the interval.
#[pyfunction]
#[pyo3(signature = (t, stability, lo, hi=None, rank_bound=None, filter="bside"))]
fn chamber_decomposition<'py>(
    py: Python<'py>,
    t: &PyChernType,
    stability: &PyStability,
    lo: Bound<'py, PyAny>,
    hi: Option<Bound<'py, PyAny>>,
    rank_bound: Option<u32>,
    filter: &str,
) -> PyResult<Bound<'py, PyList>> {
    let b = bounds(&t.inner, rank_bound, filter, None)?;
    let iv = interval(&lo, hi.as_ref())?;
    let cells = miniwalls_core::chamber_decomposition(&t.inner, &stability.inner, &iv, &b).map_err(err)?;
    let out = cells
        .iter()
        .map(|c| {
            let d = PyDict::new(py);
            match c {
                ChamberCell::Chamber { lo_sq, hi_sq } => {
                    d.set_item("kind", "chamber")?;
                    d.set_item("lo_squared", fraction(py, lo_sq)?)?;
                    d.set_item("hi_squared", opt_fraction(py, hi_sq.as_ref())?)?;
                }
                ChamberCell::Wall(w) => {
                    d.set_item("kind", "wall")?;
                    d.set_item("wall", wall_dict(py, w)?)?;
                }
            }
            Ok(d)
        })
        .collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, out)
}

/// Candidates whose phase exceeds that of `t` at `m`.
#[pyfunction]
#[pyo3(signature = (t, stability, lo, hi, m, rank_bound=None, filter="bside"))]
#[allow(clippy::too_many_arguments)]
fn destabilizers_at<'py>(
    py: Python<'py>,
    t: &PyChernType,
    stability: &PyStability,
    lo: Bound<'py, PyAny>,
    hi: Option<Bound<'py, PyAny>>,
    m: Bound<'py, PyAny>,
    rank_bound: Option<u32>,
    filter: &str,
) -> PyResult<Bound<'py, PyList>> {
    let b = bounds(&t.inner, rank_bound, filter, None)?;
    let iv = interval(&lo, hi.as_ref())?;
    let found = miniwalls_core::destabilizers_at(&t.inner, &stability.inner, &iv, &rat(&m)?, &b).map_err(err)?;
    PyList::new(py, found.iter().map(|c| candidate_dict(py, c)).collect::<PyResult<Vec<_>>>()?)
}

#[pyfunction]
#[pyo3(signature = (t, stability, rank_bound=None, base=None))]
fn large_volume_threshold<'py>(
    py: Python<'py>,
    t: &PyChernType,
    stability: &PyStability,
    rank_bound: Option<u32>,
    base: Option<Bound<'py, PyAny>>,
) -> PyResult<Bound<'py, PyDict>> {
    let b = bounds(&t.inner, rank_bound, "bside", None)?;
    let base = match base {
        Some(v) => rat(&v)?,
        None => Rational::from_integer(miniwalls_core::miniwalls::DEFAULT_THRESHOLD_BASE.into()),
    };
    let th = miniwalls_core::large_volume_threshold(&t.inner, &stability.inner, &b, &base).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("threshold", fraction(py, &th.value)?)?;
    d.set_item("base", fraction(py, &th.base)?)?;
    d.set_item("max_wall_squared", opt_fraction(py, th.max_wall_sq.as_ref())?)?;
    d.set_item("rank_bound", th.rank_bound)?;
    d.set_item("walls_above_base", th.walls_above_base)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(name = "xi_admissible")]
fn py_xi_admissible(xi: Vec<Bound<'_, PyAny>>, s: i64, t: &PyChernType, lattice: &PyLattice) -> PyResult<bool> {
    xi_admissible(&class(&xi)?, s, &t.inner, &lattice.inner).map_err(err)
}

/// Classical walls in the coefficient box `[-box_bound, box_bound]` meeting the segment.
#[pyfunction]
#[pyo3(signature = (t, lattice, start, end, box_bound=5))]
fn walls_through_region<'py>(
    py: Python<'py>,
    t: &PyChernType,
    lattice: &PyLattice,
    start: Vec<Bound<'py, PyAny>>,
    end: Vec<Bound<'py, PyAny>>,
    box_bound: u32,
) -> PyResult<Bound<'py, PyDict>> {
    let seg = Segment {
        from: class(&start)?,
        to: class(&end)?,
    };
    let r = classical::walls_through_region(&t.inner, &lattice.inner, &seg, box_bound).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("walls", PyList::new(py, r.walls.iter().map(|w| xi_dict(py, w)).collect::<PyResult<Vec<_>>>()?)?)?;
    d.set_item("box_bound", r.box_bound)?;
    d.set_item("saturated", r.saturated)?;
    Ok(d)
}

/// Large-volume moduli classification; the wall check uses the coefficient box.
#[pyfunction]
#[pyo3(signature = (t, stability, box_bound=5, convention="geometric"))]
fn classify_moduli<'py>(
    py: Python<'py>,
    t: &PyChernType,
    stability: &PyStability,
    box_bound: u32,
    convention: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let convention = TorsionConvention::from_name(convention)
        .ok_or_else(|| PyValueError::new_err(format!("unknown convention {convention:?}")))?;
    let p = &stability.inner;
    let wall = if t.inner.rk != 0 {
        classical::omega_on_wall(p.omega(), &t.inner, p.lattice(), box_bound).map_err(err)?
    } else {
        None
    };
    let class = moduli::classify_moduli(&t.inner, p, wall.as_ref(), convention).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("kind", class.kind.tag())?;
    d.set_item(
        "target_type",
        class.kind.target_type().map(|tt| PyChernType { inner: tt.clone() }),
    )?;
    match &class.kind {
        ModuliKind::SymmetricProduct(n) => d.set_item("symmetric_power", integer(py, n)?)?,
        _ => d.set_item("symmetric_power", py.None())?,
    }
    match &class.kind {
        ModuliKind::OnWallUndetermined(w) => d.set_item("wall", xi_dict(py, w)?)?,
        _ => d.set_item("wall", py.None())?,
    }
    d.set_item("notes", class.notes)?;
    Ok(d)
}

#[pyfunction]
fn dual_type(t: &PyChernType) -> PyChernType {
    t.dual()
}

/// `(type, c2, sym_power)` triples from `c2` down to the discriminant cutoff.
#[pyfunction]
fn uhlenbeck_strata<'py>(py: Python<'py>, t: &PyChernType, lattice: &PyLattice) -> PyResult<Bound<'py, PyList>> {
    let strata = moduli::uhlenbeck_strata(&t.inner, &lattice.inner).map_err(err)?;
    let out = strata
        .iter()
        .map(|s| {
            PyTuple::new(
                py,
                [
                    Bound::new(
                        py,
                        PyChernType {
                            inner: s.stratum_type.clone(),
                        },
                    )?
                    .into_any(),
                    integer(py, &s.c2)?,
                    integer(py, &s.sym_power)?,
                ],
            )
        })
        .collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, out)
}

/// Sign-scan cross-check of every enumerated candidate on a bounded interval.
#[pyfunction]
#[pyo3(signature = (t, stability, lo, hi, rank_bound=None, filter="bside", step=None))]
#[allow(clippy::too_many_arguments)]
fn crosscheck_walls<'py>(
    py: Python<'py>,
    t: &PyChernType,
    stability: &PyStability,
    lo: Bound<'py, PyAny>,
    hi: Bound<'py, PyAny>,
    rank_bound: Option<u32>,
    filter: &str,
    step: Option<Bound<'py, PyAny>>,
) -> PyResult<Bound<'py, PyDict>> {
    let b = bounds(&t.inner, rank_bound, filter, None)?;
    let iv = interval(&lo, Some(&hi))?;
    let step = step.as_ref().map(rat).transpose()?;
    let r = oracle::crosscheck_walls(&t.inner, &stability.inner, &iv, &b, step).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("candidates", r.candidates)?;
    d.set_item("bracketed_pairs", r.bracketed_pairs)?;
    d.set_item("step", fraction(py, &r.step)?)?;
    d.set_item("walls", PyList::new(py, r.walls.iter().map(|w| fraction(py, w)).collect::<PyResult<Vec<_>>>()?)?)?;
    d.set_item("mismatches", r.mismatches.len())?;
    d.set_item("clean", r.is_clean())?;
    Ok(d)
}

/// Registers the classes, functions and `RefusedError` on `m`.
#[pymodule]
pub fn miniwalls(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLattice>()?;
    m.add_class::<PyChernType>()?;
    m.add_class::<PyStability>()?;
    m.add("RefusedError", m.py().get_type::<RefusedError>())?;
    m.add_function(wrap_pyfunction!(central_charge, m)?)?;
    m.add_function(wrap_pyfunction!(phase_compare, m)?)?;
    m.add_function(wrap_pyfunction!(wall_of_pair, m)?)?;
    m.add_function(wrap_pyfunction!(find_mini_walls, m)?)?;
    m.add_function(wrap_pyfunction!(chamber_decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(destabilizers_at, m)?)?;
    m.add_function(wrap_pyfunction!(large_volume_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(py_xi_admissible, m)?)?;
    m.add_function(wrap_pyfunction!(walls_through_region, m)?)?;
    m.add_function(wrap_pyfunction!(classify_moduli, m)?)?;
    m.add_function(wrap_pyfunction!(dual_type, m)?)?;
    m.add_function(wrap_pyfunction!(uhlenbeck_strata, m)?)?;
    m.add_function(wrap_pyfunction!(crosscheck_walls, m)?)?;
    Ok(())
}
