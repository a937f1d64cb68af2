//! Honeycomb tight-binding layer: Bloch bands, Dirac-point location, Berry
//! phases, and finite periodic lattices with per-bond gauge phases.
//!
//! Geometry is fixed once: the three nearest-neighbour bonds leave an A site
//! at 120 degrees from each other with the first one along +y, so the two
//! Dirac points land on the kx axis.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix2, Vector2};
use num_complex::Complex64;

use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HoneycombParams {
    pub t: f64,
    pub a: f64,
    pub mu: f64,
}

impl HoneycombParams {
    pub fn new(t: f64, a: f64, mu: f64) -> Result<Self> {
        if !t.is_finite() || t <= 0.0 {
            return Err(Error::domain(format!("hopping must be positive, got {t}")));
        }
        if !a.is_finite() || a <= 0.0 {
            return Err(Error::domain(format!(
                "lattice spacing must be positive, got {a}"
            )));
        }
        if !mu.is_finite() {
            return Err(Error::domain("chemical potential must be finite"));
        }
        Ok(HoneycombParams { t, a, mu })
    }

    /// Vectors from an A site to its three B neighbours.
    pub fn bond_vectors(&self) -> [Vector2<f64>; 3] {
        let a = self.a;
        let h = 0.5 * 3.0f64.sqrt();
        [
            Vector2::new(0.0, a),
            Vector2::new(-h * a, -0.5 * a),
            Vector2::new(h * a, -0.5 * a),
        ]
    }

    /// Primitive translations of the triangular Bravais lattice.
    pub fn lattice_vectors(&self) -> [Vector2<f64>; 2] {
        let [d1, d2, d3] = self.bond_vectors();
        [d1 - d2, d1 - d3]
    }

    /// Reciprocal basis with `a_i . b_j = 2 pi delta_ij`.
    pub fn reciprocal_vectors(&self) -> [Vector2<f64>; 2] {
        let [a1, a2] = self.lattice_vectors();
        let det = a1.x * a2.y - a1.y * a2.x;
        let s = 2.0 * PI / det;
        [
            Vector2::new(s * a2.y, -s * a2.x),
            Vector2::new(-s * a1.y, s * a1.x),
        ]
    }

    /// Closed form for the Dirac point with positive kx.
    pub fn dirac_momentum(&self) -> Vector2<f64> {
        Vector2::new(4.0 * PI / (3.0 * 3.0f64.sqrt() * self.a), 0.0)
    }
}

/// Sum of `exp(i k . delta)` over the three bonds.
pub fn structure_factor(k: Vector2<f64>, params: &HoneycombParams) -> Complex64 {
    let mut f = Complex64::new(0.0, 0.0);
    for d in params.bond_vectors() {
        f += (I * k.dot(&d)).exp();
    }
    f
}

fn structure_factor_gradient(k: Vector2<f64>, params: &HoneycombParams) -> [Complex64; 2] {
    let mut gx = Complex64::new(0.0, 0.0);
    let mut gy = Complex64::new(0.0, 0.0);
    for d in params.bond_vectors() {
        let e = I * (I * k.dot(&d)).exp();
        gx += e * d.x;
        gy += e * d.y;
    }
    [gx, gy]
}

/// Two-band Bloch Hamiltonian in the (A, B) sublattice basis.
pub fn bloch_hamiltonian(k: Vector2<f64>, params: &HoneycombParams) -> Matrix2<Complex64> {
    let f = structure_factor(k, params);
    let off = Complex64::new(-params.t, 0.0) * f;
    let diag = Complex64::new(-params.mu, 0.0);
    Matrix2::new(diag, off, off.conj(), diag)
}

/// Band energies `(E_minus, E_plus)` at momentum `k`.
pub fn bands(k: Vector2<f64>, params: &HoneycombParams) -> (f64, f64) {
    let m = params.t * structure_factor(k, params).norm();
    (-m - params.mu, m - params.mu)
}

/// Locate the two inequivalent zeros of the structure factor by a coarse scan
/// of the Brillouin-zone cell followed by Newton refinement.  Returns the
/// minimal-norm representatives ordered as (K, K'), with K on the +kx side.
pub fn dirac_points(params: &HoneycombParams) -> Result<(Vector2<f64>, Vector2<f64>)> {
    let [b1, b2] = params.reciprocal_vectors();
    let [a1, a2] = params.lattice_vectors();
    let grid = 36;
    let mut classes: Vec<Vector2<f64>> = Vec::new();
    for p in 0..grid {
        for q in 0..grid {
            let mut k = b1 * (p as f64 / grid as f64) + b2 * (q as f64 / grid as f64);
            let mut ok = false;
            for _ in 0..60 {
                let f = structure_factor(k, params);
                if f.norm() < 1e-13 {
                    ok = true;
                    break;
                }
                let [gx, gy] = structure_factor_gradient(k, params);
                let det = gx.re * gy.im - gy.re * gx.im;
                if det.abs() < 1e-12 {
                    break;
                }
                let dx = (f.re * gy.im - gy.re * f.im) / det;
                let dy = (gx.re * f.im - f.re * gx.im) / det;
                k.x -= dx;
                k.y -= dy;
            }
            if !ok {
                continue;
            }
            // fractional coordinates mod 1 identify the class
            let fr = Vector2::new(
                (k.dot(&a1) / (2.0 * PI)).rem_euclid(1.0),
                (k.dot(&a2) / (2.0 * PI)).rem_euclid(1.0),
            );
            let known = classes.iter().any(|c| {
                let dx = (c.x - fr.x).rem_euclid(1.0);
                let dy = (c.y - fr.y).rem_euclid(1.0);
                dx.min(1.0 - dx) < 1e-6 && dy.min(1.0 - dy) < 1e-6
            });
            if !known {
                classes.push(fr);
            }
        }
    }
    if classes.len() != 2 {
        return Err(Error::domain(format!(
            "Dirac point search found {} zero classes instead of 2",
            classes.len()
        )));
    }
    // The zeros sit on zone corners, so several images share the minimal
    // norm; break the tie towards the kx axis.
    let reduce = |fr: Vector2<f64>| -> Vector2<f64> {
        let base = b1 * fr.x + b2 * fr.y;
        let mut images = Vec::new();
        for dp in -2..=2 {
            for dq in -2..=2 {
                images.push(base + b1 * dp as f64 + b2 * dq as f64);
            }
        }
        let min_norm = images.iter().map(|c| c.norm()).fold(f64::INFINITY, f64::min);
        images.retain(|c| c.norm() <= min_norm + 1e-9 * (1.0 + min_norm));
        images
            .into_iter()
            .min_by(|x, y| x.y.abs().partial_cmp(&y.y.abs()).unwrap())
            .unwrap()
    };
    let mut pts = [reduce(classes[0]), reduce(classes[1])];
    if pts[0].x < pts[1].x {
        pts.swap(0, 1);
    }
    for p in &pts {
        if structure_factor(*p, params).norm() >= 1e-10 {
            return Err(Error::domain("Dirac point refinement did not converge"));
        }
    }
    Ok((pts[0], pts[1]))
}

/// Slope of the upper band against |q| near the Dirac point, fitted through
/// the origin over `|q| a` in [1e-4, 1e-2] and averaged over 12 directions.
pub fn fermi_velocity(params: &HoneycombParams) -> f64 {
    let kd = params.dirac_momentum();
    let mut total = 0.0;
    let dirs = 12;
    for i in 0..dirs {
        let phi = 2.0 * PI * i as f64 / dirs as f64;
        let u = Vector2::new(phi.cos(), phi.sin());
        let mut num = 0.0;
        let mut den = 0.0;
        for j in 0..25 {
            let q = (1e-4 + (1e-2 - 1e-4) * j as f64 / 24.0) / params.a;
            let (_, ep) = bands(kd + u * q, params);
            num += (ep + params.mu) * q;
            den += q * q;
        }
        total += num / den;
    }
    total / dirs as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valley {
    K,
    KPrime,
}

impl Valley {
    pub fn center(self, params: &HoneycombParams) -> Vector2<f64> {
        let kd = params.dirac_momentum();
        match self {
            Valley::K => kd,
            Valley::KPrime => -kd,
        }
    }
}

fn lower_band_vector(k: Vector2<f64>, params: &HoneycombParams) -> [Complex64; 2] {
    let f = structure_factor(k, params);
    if f.norm() < 1e-14 {
        return [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    }
    let r = 0.5f64.sqrt();
    [Complex64::new(r, 0.0), f.conj() / f.norm() * r]
}

/// Discrete Wilson-loop phase of the lower band around a circle.  The loop is
/// traversed counter-clockwise; each segment contributes the argument of the
/// overlap between consecutive eigenvectors, so the total telescopes to the
/// enclosed winding up to discretisation error.
pub fn berry_phase_around(
    center: Vector2<f64>,
    radius: f64,
    points: usize,
    params: &HoneycombParams,
) -> Result<f64> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::domain("loop radius must be positive"));
    }
    let half_sep = 0.5 * params.dirac_momentum().norm();
    if radius >= half_sep {
        return Err(Error::domain(format!(
            "loop radius {radius} may enclose more than one Dirac point; need < {half_sep}"
        )));
    }
    if points < 16 {
        return Err(Error::domain("need at least 16 loop points"));
    }
    let vecs: Vec<[Complex64; 2]> = (0..points)
        .map(|j| {
            let phi = 2.0 * PI * j as f64 / points as f64;
            let k = center + Vector2::new(radius * phi.cos(), radius * phi.sin());
            lower_band_vector(k, params)
        })
        .collect();
    let mut total = 0.0;
    for j in 0..points {
        let u = &vecs[j];
        let v = &vecs[(j + 1) % points];
        total += (u[0].conj() * v[0] + u[1].conj() * v[1]).arg();
    }
    Ok(total)
}

/// Berry phase of the lower band around one valley; +pi at K, -pi at K'.
pub fn berry_phase(valley: Valley, params: &HoneycombParams) -> f64 {
    let center = valley.center(params);
    let radius = 0.25 * params.dirac_momentum().norm();
    berry_phase_around(center, radius, 12_000, params)
        .expect("default Berry loop parameters are always valid")
}

const MIN_CELLS: usize = 4;
const MAX_CELLS: usize = 64;

fn check_cells(l: usize) -> Result<()> {
    if !(MIN_CELLS..=MAX_CELLS).contains(&l) {
        return Err(Error::domain(format!(
            "lattice side {l} outside supported range {MIN_CELLS}..={MAX_CELLS}"
        )));
    }
    Ok(())
}

/// Per-bond phases and hopping modulations on an L x L periodic cluster.
///
/// Bond `b` of cell `(m, n)` connects A(m, n) to the B site reached along
/// bond vector `b`: B(m, n) for b = 0, B(m-1, n) for b = 1, B(m, n-1) for
/// b = 2.  `em_phases` multiply the hop by `exp(i phase)`; `chiral_phases`
/// add to the hopping amplitude, which is the strain-like pattern that
/// couples with opposite sign at the two valleys.
#[derive(Clone, Debug)]
pub struct GaugeCoupling {
    l: usize,
    em_phases: Vec<f64>,
    chiral_phases: Vec<f64>,
}

impl GaugeCoupling {
    pub fn zero(l: usize) -> Result<Self> {
        check_cells(l)?;
        Ok(GaugeCoupling {
            l,
            em_phases: vec![0.0; 3 * l * l],
            chiral_phases: vec![0.0; 3 * l * l],
        })
    }

    pub fn new(l: usize, em_phases: Vec<f64>, chiral_phases: Vec<f64>) -> Result<Self> {
        check_cells(l)?;
        if em_phases.len() != 3 * l * l || chiral_phases.len() != 3 * l * l {
            return Err(Error::domain(format!(
                "phase arrays must have 3*{l}^2 = {} entries",
                3 * l * l
            )));
        }
        if em_phases.iter().chain(&chiral_phases).any(|p| !p.is_finite()) {
            return Err(Error::domain("bond phases must be finite"));
        }
        Ok(GaugeCoupling {
            l,
            em_phases,
            chiral_phases,
        })
    }

    /// Same additive hopping pattern in every cell.
    pub fn uniform_chiral(l: usize, pattern: [f64; 3]) -> Result<Self> {
        let mut c = GaugeCoupling::zero(l)?;
        for cell in 0..l * l {
            for b in 0..3 {
                c.chiral_phases[cell * 3 + b] = pattern[b];
            }
        }
        Ok(c)
    }

    pub fn cells(&self) -> usize {
        self.l
    }

    fn bond(&self, m: usize, n: usize, b: usize) -> usize {
        ((m % self.l) * self.l + n % self.l) * 3 + b
    }

    pub fn em_phase(&self, m: usize, n: usize, b: usize) -> f64 {
        self.em_phases[self.bond(m, n, b)]
    }

    pub fn chiral_phase(&self, m: usize, n: usize, b: usize) -> f64 {
        self.chiral_phases[self.bond(m, n, b)]
    }

    pub fn set_em_phase(&mut self, m: usize, n: usize, b: usize, value: f64) {
        let i = self.bond(m, n, b);
        self.em_phases[i] = value;
    }

    pub fn set_chiral_phase(&mut self, m: usize, n: usize, b: usize, value: f64) {
        let i = self.bond(m, n, b);
        self.chiral_phases[i] = value;
    }
}

fn site_index(l: usize, m: usize, n: usize, s: usize) -> usize {
    ((m % l) * l + n % l) * 2 + s
}

fn build_hamiltonian(
    l: usize,
    coupling: &GaugeCoupling,
    params: &HoneycombParams,
) -> DMatrix<Complex64> {
    let dim = 2 * l * l;
    let mut h = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    let diag = Complex64::new(-params.mu, 0.0);
    for m in 0..l {
        for n in 0..l {
            let ai = site_index(l, m, n, 0);
            let targets = [(m, n), (m + l - 1, n), (m, n + l - 1)];
            for (b, (tm, tn)) in targets.into_iter().enumerate() {
                let bi = site_index(l, tm, tn, 1);
                let amp = -(params.t + coupling.chiral_phase(m, n, b));
                let hop = Complex64::new(amp, 0.0) * (I * coupling.em_phase(m, n, b)).exp();
                h[(ai, bi)] += hop;
                h[(bi, ai)] += hop.conj();
            }
            h[(ai, ai)] = diag;
            h[(site_index(l, m, n, 1), site_index(l, m, n, 1))] = diag;
        }
    }
    h
}

/// Eigenvalues of the 2L^2 x 2L^2 periodic hopping matrix, ascending.
pub fn finite_lattice_spectrum(
    l: usize,
    coupling: &GaugeCoupling,
    params: &HoneycombParams,
) -> Result<Vec<f64>> {
    check_cells(l)?;
    if coupling.cells() != l {
        return Err(Error::domain(format!(
            "coupling built for side {} but lattice side is {l}",
            coupling.cells()
        )));
    }
    let h = build_hamiltonian(l, coupling, params);
    let eig = h.symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(vals)
}

/// Apply a uniform strain-like bond pattern `(delta, -delta/2, -delta/2)` and
/// locate where the low-energy spectral weight moved, separately near each
/// valley.  Returns the displacements of the weight maximum from K and from
/// K', measured on the folded discrete momentum grid.
pub fn valley_shift(
    l: usize,
    delta: f64,
    params: &HoneycombParams,
) -> Result<(Vector2<f64>, Vector2<f64>)> {
    check_cells(l)?;
    if !delta.is_finite() || delta.abs() >= params.t {
        return Err(Error::domain(
            "bond modulation must be finite and smaller than the hopping",
        ));
    }
    let coupling = GaugeCoupling::uniform_chiral(l, [delta, -0.5 * delta, -0.5 * delta])?;
    let h = build_hamiltonian(l, &coupling, params);
    let eig = h.symmetric_eigen();

    let mut order: Vec<usize> = (0..2 * l * l).collect();
    order.sort_by(|&x, &y| {
        eig.eigenvalues[x]
            .abs()
            .partial_cmp(&eig.eigenvalues[y].abs())
            .unwrap()
    });
    let low = &order[..4];

    let [a1, a2] = params.lattice_vectors();
    let [b1, b2] = params.reciprocal_vectors();
    let kd = params.dirac_momentum();
    let window = 0.6 * kd.norm();

    let weight = |k: Vector2<f64>| -> f64 {
        let mut total = 0.0;
        for &state in low {
            for s in 0..2 {
                let mut amp = Complex64::new(0.0, 0.0);
                for m in 0..l {
                    for n in 0..l {
                        let r = a1 * m as f64 + a2 * n as f64;
                        let phase = (-I * k.dot(&r)).exp();
                        amp += phase * eig.eigenvectors[(site_index(l, m, n, s), state)];
                    }
                }
                total += amp.norm_sqr();
            }
        }
        total / (l * l) as f64
    };

    let mut shifts = [Vector2::zeros(); 2];
    for (v, center) in [kd, -kd].into_iter().enumerate() {
        let mut best = (f64::NEG_INFINITY, Vector2::zeros());
        for p in 0..l {
            for q in 0..l {
                for dp in -1..=1 {
                    for dq in -1..=1 {
                        let k = b1 * (p as f64 / l as f64 + dp as f64)
                            + b2 * (q as f64 / l as f64 + dq as f64);
                        if (k - center).norm() >= window {
                            continue;
                        }
                        let w = weight(k);
                        if w > best.0 {
                            best = (w, k);
                        }
                    }
                }
            }
        }
        shifts[v] = best.1 - center;
    }
    Ok((shifts[0], shifts[1]))
}
