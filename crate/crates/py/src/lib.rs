//! Python bindings: thin wrappers over the core crate with levels and
//! labels passed as plain integers and complex values returned as Python
//! complex numbers.

use nalgebra::Vector2;
use num_complex::Complex64;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use csbf_core::braid::{self, BraidContext, BraidWord};
use csbf_core::error::Error as CoreError;
use csbf_core::field;
use csbf_core::fusion::{self, Level};
use csbf_core::graphene;
use csbf_core::modular;
use csbf_core::turaev;

fn err(e: CoreError) -> PyErr {
    match e {
        CoreError::Io(io) => PyIOError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn level(k: u32) -> PyResult<Level> {
    Level::new(k).map_err(err)
}

#[pyfunction]
fn qdim(a: u32, k: u32) -> PyResult<f64> {
    fusion::qdim(a, &level(k)?).map_err(err)
}

#[pyfunction]
fn admissible(a: u32, b: u32, c: u32, k: u32) -> PyResult<bool> {
    Ok(fusion::admissible(a, b, c, &level(k)?))
}

#[pyfunction]
fn total_dim(k: u32) -> PyResult<f64> {
    Ok(fusion::total_dim(&level(k)?))
}

#[pyfunction]
fn six_j(a: u32, b: u32, e: u32, c: u32, d: u32, f: u32, k: u32) -> PyResult<f64> {
    fusion::six_j(a, b, e, c, d, f, &level(k)?).map_err(err)
}

#[pyfunction]
fn f_symbol(a: u32, b: u32, c: u32, d: u32, e: u32, f: u32, k: u32) -> PyResult<f64> {
    fusion::f_symbol(a, b, c, d, e, f, &level(k)?).map_err(err)
}

#[pyfunction]
fn r_symbol(a: u32, b: u32, c: u32, k: u32) -> PyResult<Complex64> {
    modular::r_symbol(a, b, c, &level(k)?).map_err(err)
}

#[pyfunction]
fn twist(a: u32, k: u32) -> PyResult<Complex64> {
    modular::twist(a, &level(k)?).map_err(err)
}

#[pyfunction]
fn s_matrix(k: u32) -> PyResult<Vec<Vec<Complex64>>> {
    let m = modular::s_matrix(&level(k)?);
    Ok((0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect())
        .collect())
}

#[pyfunction]
fn pentagon_check(k: u32) -> PyResult<f64> {
    Ok(modular::pentagon_check(&level(k)?))
}

#[pyfunction]
fn hexagon_check(k: u32) -> PyResult<f64> {
    Ok(modular::hexagon_check(&level(k)?))
}

#[pyfunction]
fn verlinde_check(k: u32) -> PyResult<f64> {
    Ok(modular::verlinde_check(&level(k)?))
}

#[pyfunction]
fn fusion_space_dim(n: usize, a: u32, total: u32, k: u32) -> PyResult<u64> {
    braid::fusion_space_dim(n, a, total, &level(k)?).map_err(err)
}

#[pyfunction]
fn braid_matrix(word: &str, anyon: u32, total: u32, k: u32) -> PyResult<Vec<Vec<Complex64>>> {
    let lv = level(k)?;
    let w = BraidWord::parse(word).map_err(err)?;
    let ctx = BraidContext::new(w.strand_count(), anyon, total, &lv).map_err(err)?;
    let m = ctx.word_matrix(&w).map_err(err)?;
    Ok((0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect())
        .collect())
}

#[pyfunction]
fn link_invariant(word: &str, anyon: u32, k: u32) -> PyResult<Complex64> {
    let w = BraidWord::parse(word).map_err(err)?;
    braid::link_invariant(&w, anyon, &level(k)?).map_err(err)
}

#[pyfunction]
fn doubled_invariant(word: &str, anyon: u32, k: u32) -> PyResult<f64> {
    let w = BraidWord::parse(word).map_err(err)?;
    braid::doubled_invariant(&w, anyon, &level(k)?).map_err(err)
}

#[pyclass(name = "Triangulation")]
#[derive(Clone)]
struct PyTriangulation {
    inner: turaev::Triangulation,
}

#[pymethods]
impl PyTriangulation {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyTriangulation {
            inner: turaev::Triangulation::parse(text).map_err(err)?,
        })
    }

    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        Ok(PyTriangulation {
            inner: turaev::Triangulation::builtin(name).map_err(err)?,
        })
    }

    #[getter]
    fn tets(&self) -> usize {
        self.inner.tet_count()
    }

    #[getter]
    fn vertices(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edges(&self) -> usize {
        self.inner.edge_count()
    }

    #[getter]
    fn faces(&self) -> usize {
        self.inner.face_count()
    }

    #[getter]
    fn euler_characteristic(&self) -> i64 {
        self.inner.euler_characteristic()
    }

    /// Returns (value, colorings, admissible_colorings).
    fn state_sum(&self, k: u32) -> PyResult<(f64, u64, u64)> {
        let r = turaev::state_sum(&self.inner, &level(k)?).map_err(err)?;
        Ok((r.value, r.coloring_count, r.admissible_count))
    }

    fn pachner_23(&self, tet: usize, face: usize) -> PyResult<Self> {
        Ok(PyTriangulation {
            inner: self.inner.pachner_23(tet, face).map_err(err)?,
        })
    }

    fn pachner_32(&self, tet: usize, edge: usize) -> PyResult<Self> {
        Ok(PyTriangulation {
            inner: self.inner.pachner_32(tet, edge).map_err(err)?,
        })
    }

    fn interior_faces(&self) -> Vec<(usize, usize)> {
        self.inner.interior_faces()
    }

    fn degree_three_edges(&self) -> Vec<(usize, usize)> {
        self.inner.degree_three_edges()
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn __repr__(&self) -> String {
        format!(
            "Triangulation(tets={}, vertices={}, edges={}, faces={})",
            self.inner.tet_count(),
            self.inner.vertex_count(),
            self.inner.edge_count(),
            self.inner.face_count()
        )
    }
}

#[pyfunction]
fn doubled_check(manifold: &str, k: u32) -> PyResult<(f64, f64)> {
    turaev::doubled_check(manifold, &level(k)?).map_err(err)
}

#[pyclass(name = "GaugeConfig")]
#[derive(Clone)]
struct PyGaugeConfig {
    inner: field::GaugeConfig,
}

#[pymethods]
impl PyGaugeConfig {
    #[staticmethod]
    #[pyo3(signature = (seed, grid_size, band_limit=3, amplitude=0.8))]
    fn smooth_random(
        seed: u64,
        grid_size: usize,
        band_limit: usize,
        amplitude: f64,
    ) -> PyResult<Self> {
        Ok(PyGaugeConfig {
            inner: field::smooth_random(seed, grid_size, band_limit, amplitude).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_bytes(data: &[u8]) -> PyResult<Self> {
        Ok(PyGaugeConfig {
            inner: field::GaugeConfig::from_bytes(data).map_err(err)?,
        })
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, pyo3::types::PyBytes> {
        pyo3::types::PyBytes::new_bound(py, &self.inner.to_bytes())
    }

    #[getter]
    fn grid_size(&self) -> usize {
        self.inner.grid_size()
    }

    #[getter]
    fn spacing(&self) -> f64 {
        self.inner.spacing()
    }

    fn __repr__(&self) -> String {
        format!("GaugeConfig(grid_size={})", self.inner.grid_size())
    }
}

#[pyfunction]
fn cs_bf_residual(cfg: &PyGaugeConfig, kappa: i64) -> PyResult<f64> {
    let coupling = field::CouplingConstants::new(kappa).map_err(err)?;
    field::cs_bf_residual(&cfg.inner, &coupling).map_err(err)
}

#[pyfunction]
fn bf_action(cfg: &PyGaugeConfig, kappa: i64) -> PyResult<f64> {
    let coupling = field::CouplingConstants::new(kappa).map_err(err)?;
    field::bf_action(&cfg.inner, &coupling).map_err(err)
}

/// Chern–Simons actions of the two chiral combinations, as (plus, minus).
#[pyfunction]
fn chiral_actions(cfg: &PyGaugeConfig, kappa: i64) -> PyResult<(f64, f64)> {
    let coupling = field::CouplingConstants::new(kappa).map_err(err)?;
    let (plus, minus) = field::chiral_split(&cfg.inner, &coupling);
    Ok((
        field::cs_action(&plus, &coupling).map_err(err)?,
        field::cs_action(&minus, &coupling).map_err(err)?,
    ))
}

fn plane_axes(plane: &str) -> PyResult<(usize, usize)> {
    match plane {
        "xy" => Ok((0, 1)),
        "yz" => Ok((1, 2)),
        "zx" => Ok((2, 0)),
        other => Err(PyValueError::new_err(format!(
            "unknown plane {other:?}; expected xy, yz, or zx"
        ))),
    }
}

/// Wilson-loop matrix around an axis-aligned rectangle, as a 2x2 nested list.
#[pyfunction]
#[pyo3(signature = (cfg, kappa, sign=1, plane="xy", origin=(0, 0, 0), size=4))]
fn holonomy(
    cfg: &PyGaugeConfig,
    kappa: i64,
    sign: i32,
    plane: &str,
    origin: (usize, usize, usize),
    size: usize,
) -> PyResult<Vec<Vec<Complex64>>> {
    let coupling = field::CouplingConstants::new(kappa).map_err(err)?;
    let (mu, nu) = plane_axes(plane)?;
    let path = field::LoopPath::rectangle(
        cfg.inner.grid_size(),
        [origin.0, origin.1, origin.2],
        mu,
        nu,
        size,
        size,
    )
    .map_err(err)?;
    let u = field::holonomy(&path, &cfg.inner, sign, &coupling).map_err(err)?;
    Ok(vec![
        vec![u[(0, 0)], u[(0, 1)]],
        vec![u[(1, 0)], u[(1, 1)]],
    ])
}

/// Conjugate the fields by a seeded topologically trivial gauge transformation.
#[pyfunction]
#[pyo3(signature = (cfg, seed, band_limit=2, amplitude=0.5))]
fn apply_random_gauge(
    cfg: &PyGaugeConfig,
    seed: u64,
    band_limit: usize,
    amplitude: f64,
) -> PyResult<PyGaugeConfig> {
    let g = field::smooth_random_gauge(seed, cfg.inner.grid_size(), band_limit, amplitude)
        .map_err(err)?;
    Ok(PyGaugeConfig {
        inner: field::gauge_transform(&cfg.inner, &g).map_err(err)?,
    })
}

fn honeycomb(t: f64, a: f64, mu: f64) -> PyResult<graphene::HoneycombParams> {
    graphene::HoneycombParams::new(t, a, mu).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (kx, ky, t=1.0, a=1.0, mu=0.0))]
fn bands(kx: f64, ky: f64, t: f64, a: f64, mu: f64) -> PyResult<(f64, f64)> {
    Ok(graphene::bands(Vector2::new(kx, ky), &honeycomb(t, a, mu)?))
}

#[pyfunction]
#[pyo3(signature = (t=1.0, a=1.0, mu=0.0))]
fn dirac_points(t: f64, a: f64, mu: f64) -> PyResult<((f64, f64), (f64, f64))> {
    let (k, kp) = graphene::dirac_points(&honeycomb(t, a, mu)?).map_err(err)?;
    Ok(((k.x, k.y), (kp.x, kp.y)))
}

#[pyfunction]
#[pyo3(signature = (t=1.0, a=1.0, mu=0.0))]
fn fermi_velocity(t: f64, a: f64, mu: f64) -> PyResult<f64> {
    Ok(graphene::fermi_velocity(&honeycomb(t, a, mu)?))
}

#[pyfunction]
#[pyo3(signature = (valley="K", t=1.0, a=1.0, mu=0.0))]
fn berry_phase(valley: &str, t: f64, a: f64, mu: f64) -> PyResult<f64> {
    let v = match valley {
        "K" => graphene::Valley::K,
        "K'" | "Kp" => graphene::Valley::KPrime,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown valley {other:?}; expected K or K' (Kp)"
            )))
        }
    };
    Ok(graphene::berry_phase(v, &honeycomb(t, a, mu)?))
}

#[pyfunction]
#[pyo3(signature = (l, t=1.0, a=1.0, mu=0.0, em_uniform=0.0, chiral=(0.0, 0.0, 0.0)))]
fn lattice_spectrum(
    l: usize,
    t: f64,
    a: f64,
    mu: f64,
    em_uniform: f64,
    chiral: (f64, f64, f64),
) -> PyResult<Vec<f64>> {
    let params = honeycomb(t, a, mu)?;
    let mut coupling = graphene::GaugeCoupling::uniform_chiral(l, [chiral.0, chiral.1, chiral.2])
        .map_err(err)?;
    if em_uniform != 0.0 {
        for m in 0..l {
            for n in 0..l {
                for b in 0..3 {
                    coupling.set_em_phase(m, n, b, em_uniform);
                }
            }
        }
    }
    graphene::finite_lattice_spectrum(l, &coupling, &params).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (l, delta, t=1.0, a=1.0, mu=0.0))]
fn valley_shift(
    l: usize,
    delta: f64,
    t: f64,
    a: f64,
    mu: f64,
) -> PyResult<((f64, f64), (f64, f64))> {
    let (sk, skp) = graphene::valley_shift(l, delta, &honeycomb(t, a, mu)?).map_err(err)?;
    Ok(((sk.x, sk.y), (skp.x, skp.y)))
}

#[pymodule]
fn csbf(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(qdim, m)?)?;
    m.add_function(wrap_pyfunction!(admissible, m)?)?;
    m.add_function(wrap_pyfunction!(total_dim, m)?)?;
    m.add_function(wrap_pyfunction!(six_j, m)?)?;
    m.add_function(wrap_pyfunction!(f_symbol, m)?)?;
    m.add_function(wrap_pyfunction!(r_symbol, m)?)?;
    m.add_function(wrap_pyfunction!(twist, m)?)?;
    m.add_function(wrap_pyfunction!(s_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(pentagon_check, m)?)?;
    m.add_function(wrap_pyfunction!(hexagon_check, m)?)?;
    m.add_function(wrap_pyfunction!(verlinde_check, m)?)?;
    m.add_function(wrap_pyfunction!(fusion_space_dim, m)?)?;
    m.add_function(wrap_pyfunction!(braid_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(link_invariant, m)?)?;
    m.add_function(wrap_pyfunction!(doubled_invariant, m)?)?;
    m.add_class::<PyTriangulation>()?;
    m.add_function(wrap_pyfunction!(doubled_check, m)?)?;
    m.add_class::<PyGaugeConfig>()?;
    m.add_function(wrap_pyfunction!(cs_bf_residual, m)?)?;
    m.add_function(wrap_pyfunction!(bf_action, m)?)?;
    m.add_function(wrap_pyfunction!(chiral_actions, m)?)?;
    m.add_function(wrap_pyfunction!(holonomy, m)?)?;
    m.add_function(wrap_pyfunction!(apply_random_gauge, m)?)?;
    m.add_function(wrap_pyfunction!(bands, m)?)?;
    m.add_function(wrap_pyfunction!(dirac_points, m)?)?;
    m.add_function(wrap_pyfunction!(fermi_velocity, m)?)?;
    m.add_function(wrap_pyfunction!(berry_phase, m)?)?;
    m.add_function(wrap_pyfunction!(lattice_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(valley_shift, m)?)?;
    Ok(())
}
