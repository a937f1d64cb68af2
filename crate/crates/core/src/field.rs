//! u(2)-valued gauge fields on a periodic N³ grid: Chern–Simons and BF
//! actions with spectral derivatives, chiral splitting, path-ordered
//! holonomies, and gauge transformations.
//!
//! Conventions: fields are anti-Hermitian 2×2 matrices A_μ(x), μ ∈ {0,1,2},
//! stored per direction in site-major order (x outer, then y, then z). The
//! box length is n·spacing and all derivatives are Fourier derivatives, so
//! band-limited fields are differentiated to round-off.

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub type Mat2 = Matrix2<Complex64>;

/// ε^{μνσ} as (μ, ν, σ, sign) over the six nonzero entries.
const EPS: [(usize, usize, usize, f64); 6] = [
    (0, 1, 2, 1.0),
    (1, 2, 0, 1.0),
    (2, 0, 1, 1.0),
    (0, 2, 1, -1.0),
    (2, 1, 0, -1.0),
    (1, 0, 2, -1.0),
];

fn pauli(g: usize) -> Mat2 {
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match g {
        0 => Mat2::new(o, z, z, o),
        1 => Mat2::new(z, o, o, z),
        2 => Mat2::new(z, -i, i, z),
        _ => Mat2::new(o, z, z, -o),
    }
}

/// exp of an anti-Hermitian 2×2 matrix W = i(a₀·1 + a·σ) in closed form.
pub(crate) fn expm2(w: &Mat2) -> Mat2 {
    let inv_i = Complex64::new(0.0, -1.0);
    let a0 = (w[(0, 0)] + w[(1, 1)]) * inv_i * 0.5;
    let m00 = w[(0, 0)] * inv_i - a0;
    let m01 = w[(0, 1)] * inv_i;
    let ax = m01.re;
    let ay = -m01.im;
    let az = m00.re;
    let r = (ax * ax + ay * ay + az * az).sqrt();
    let s = if r > 1e-300 { r.sin() / r } else { 1.0 };
    let phase = (Complex64::new(0.0, 1.0) * a0).exp();
    let cos = Complex64::new(r.cos(), 0.0);
    let is = Complex64::new(0.0, s);
    let m = Mat2::new(
        cos + is * az,
        is * Complex64::new(ax, -ay),
        is * Complex64::new(ax, ay),
        cos - is * az,
    );
    m * phase
}

/// Effective coupling: integer level κ and the derived constant λ = 4π/κ.
#[derive(Clone, Copy, Debug)]
pub struct CouplingConstants {
    pub kappa: i64,
    pub lambda: f64,
}

impl CouplingConstants {
    pub fn new(kappa: i64) -> Result<Self> {
        if kappa == 0 {
            return Err(Error::domain("coupling level kappa must be nonzero"));
        }
        Ok(CouplingConstants { kappa, lambda: 4.0 * PI / kappa as f64 })
    }
}

/// One u(2)-valued 1-form on the grid: three matrix components per site.
#[derive(Clone, Debug)]
pub struct MatrixField {
    n: usize,
    spacing: f64,
    comps: [Vec<Mat2>; 3],
}

impl MatrixField {
    pub fn zero(n: usize, spacing: f64) -> Self {
        let sites = n * n * n;
        MatrixField {
            n,
            spacing,
            comps: [
                vec![Mat2::zeros(); sites],
                vec![Mat2::zeros(); sites],
                vec![Mat2::zeros(); sites],
            ],
        }
    }

    pub fn grid_size(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn site_count(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn site_index(&self, x: usize, y: usize, z: usize) -> usize {
        let n = self.n;
        ((x % n) * n + (y % n)) * n + (z % n)
    }

    pub fn comp(&self, mu: usize) -> &[Mat2] {
        &self.comps[mu]
    }

    pub fn comp_mut(&mut self, mu: usize) -> &mut [Mat2] {
        &mut self.comps[mu]
    }

    /// Largest entry of A + A† over all sites and directions.
    pub fn anti_hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for mu in 0..3 {
            for m in &self.comps[mu] {
                let d = m + m.adjoint();
                for e in d.iter() {
                    worst = worst.max(e.norm());
                }
            }
        }
        worst
    }

    /// self + factor·other, entrywise.
    pub fn add_scaled(&self, other: &MatrixField, factor: f64) -> Result<MatrixField> {
        check_same_grid(self, other)?;
        let mut out = self.clone();
        let f = Complex64::new(factor, 0.0);
        for mu in 0..3 {
            for (dst, src) in out.comps[mu].iter_mut().zip(other.comps[mu].iter()) {
                *dst += src * f;
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, factor: f64) -> MatrixField {
        let mut out = self.clone();
        let f = Complex64::new(factor, 0.0);
        for mu in 0..3 {
            for m in out.comps[mu].iter_mut() {
                *m *= f;
            }
        }
        out
    }
}

fn check_same_grid(a: &MatrixField, b: &MatrixField) -> Result<()> {
    if a.n != b.n || a.spacing != b.spacing {
        return Err(Error::domain(format!(
            "grid mismatch: {}^3 (h={}) vs {}^3 (h={})",
            a.n, a.spacing, b.n, b.spacing
        )));
    }
    Ok(())
}

/// The pair (A, B) of conjugate fields sharing one grid.
#[derive(Clone, Debug)]
pub struct GaugeConfig {
    pub a: MatrixField,
    pub b: MatrixField,
}

impl GaugeConfig {
    pub fn new(a: MatrixField, b: MatrixField) -> Result<Self> {
        check_same_grid(&a, &b)?;
        Ok(GaugeConfig { a, b })
    }

    pub fn grid_size(&self) -> usize {
        self.a.n
    }

    pub fn spacing(&self) -> f64 {
        self.a.spacing
    }

    /// Flat binary layout: u64 grid size, f64 spacing, u64 field count (six:
    /// A then B, three directions each), then per field the sites in
    /// row-major order, each a row-major 2×2 of little-endian (re, im) f64
    /// pairs.
    pub fn to_bytes(&self) -> Vec<u8> {
        let n = self.a.n;
        let sites = n * n * n;
        let mut out = Vec::with_capacity(24 + 6 * sites * 64);
        out.extend_from_slice(&(n as u64).to_le_bytes());
        out.extend_from_slice(&self.a.spacing.to_le_bytes());
        out.extend_from_slice(&6u64.to_le_bytes());
        for field in [&self.a, &self.b] {
            for mu in 0..3 {
                for m in &field.comps[mu] {
                    for r in 0..2 {
                        for c in 0..2 {
                            out.extend_from_slice(&m[(r, c)].re.to_le_bytes());
                            out.extend_from_slice(&m[(r, c)].im.to_le_bytes());
                        }
                    }
                }
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 24 {
            return Err(Error::domain("gauge config data truncated (no header)"));
        }
        let n = u64::from_le_bytes(bytes[0..8].try_into().unwrap()) as usize;
        let spacing = f64::from_le_bytes(bytes[8..16].try_into().unwrap());
        let count = u64::from_le_bytes(bytes[16..24].try_into().unwrap());
        if count != 6 {
            return Err(Error::domain(format!("expected 6 field components, header says {count}")));
        }
        if n == 0 || !(spacing > 0.0) {
            return Err(Error::domain("invalid grid size or spacing in header"));
        }
        let sites = n * n * n;
        let want = 24 + 6 * sites * 64;
        if bytes.len() != want {
            return Err(Error::domain(format!(
                "gauge config data has {} bytes, expected {want}",
                bytes.len()
            )));
        }
        let mut off = 24;
        let mut read_field = || {
            let mut f = MatrixField::zero(n, spacing);
            for mu in 0..3 {
                for m in f.comps[mu].iter_mut() {
                    for r in 0..2 {
                        for c in 0..2 {
                            let re = f64::from_le_bytes(bytes[off..off + 8].try_into().unwrap());
                            let im =
                                f64::from_le_bytes(bytes[off + 8..off + 16].try_into().unwrap());
                            m[(r, c)] = Complex64::new(re, im);
                            off += 16;
                        }
                    }
                }
            }
            f
        };
        let a = read_field();
        let b = read_field();
        let cfg = GaugeConfig { a, b };
        let defect = cfg.a.anti_hermitian_defect().max(cfg.b.anti_hermitian_defect());
        if defect > 1e-13 {
            return Err(Error::domain(format!(
                "stored fields are not anti-Hermitian (defect {defect:.3e})"
            )));
        }
        Ok(cfg)
    }
}

/// U(2)-valued site field (gauge transformation data).
#[derive(Clone, Debug)]
pub struct UnitaryField {
    n: usize,
    data: Vec<Mat2>,
}

impl UnitaryField {
    pub fn new(n: usize, data: Vec<Mat2>) -> Result<Self> {
        if data.len() != n * n * n {
            return Err(Error::domain(format!(
                "unitary field has {} entries for grid size {n}",
                data.len()
            )));
        }
        let mut worst = 0.0f64;
        for g in &data {
            let d = g * g.adjoint() - Mat2::identity();
            for e in d.iter() {
                worst = worst.max(e.norm());
            }
        }
        if worst > 1e-13 {
            return Err(Error::domain(format!(
                "gauge field entries are not unitary (defect {worst:.3e})"
            )));
        }
        Ok(UnitaryField { n, data })
    }

    pub fn identity(n: usize) -> Self {
        UnitaryField { n, data: vec![Mat2::identity(); n * n * n] }
    }

    pub fn grid_size(&self) -> usize {
        self.n
    }

    pub fn site(&self, idx: usize) -> &Mat2 {
        &self.data[idx]
    }
}

// ---------------------------------------------------------------------------
// spectral machinery

fn fft_mode(idx: usize, n: usize) -> i64 {
    if idx <= (n - 1) / 2 {
        idx as i64
    } else {
        idx as i64 - n as i64
    }
}

/// In-place 1D FFT along one axis of the cube, with a per-mode multiplier
/// applied in frequency space, followed by the unnormalized inverse; the 1/n
/// normalization is folded into the multiplier here.
fn axis_filter(data: &mut [Complex64], n: usize, axis: usize, mult: &[Complex64]) {
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let scaled: Vec<Complex64> = mult.iter().map(|m| m / n as f64).collect();
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    let (stride, outer): (usize, Box<dyn Iterator<Item = usize>>) = match axis {
        0 => (n * n, Box::new((0..n * n).map(move |r| r))),
        1 => (n, Box::new((0..n).flat_map(move |x| (0..n).map(move |z| x * n * n + z)))),
        _ => (1, Box::new((0..n * n).map(move |r| r * n))),
    };
    for base in outer {
        for (j, slot) in line.iter_mut().enumerate() {
            *slot = data[base + j * stride];
        }
        fwd.process(&mut line);
        for (j, slot) in line.iter_mut().enumerate() {
            *slot *= scaled[j];
        }
        inv.process(&mut line);
        for (j, v) in line.iter().enumerate() {
            data[base + j * stride] = *v;
        }
    }
}

fn matrix_axis_filter(field: &[Mat2], n: usize, axis: usize, mult: &[Complex64]) -> Vec<Mat2> {
    let sites = n * n * n;
    let mut out = vec![Mat2::zeros(); sites];
    let mut buf = vec![Complex64::new(0.0, 0.0); sites];
    for r in 0..2 {
        for c in 0..2 {
            for (s, m) in field.iter().enumerate() {
                buf[s] = m[(r, c)];
            }
            axis_filter(&mut buf, n, axis, mult);
            for (s, v) in buf.iter().enumerate() {
                out[s][(r, c)] = *v;
            }
        }
    }
    out
}

/// Fourier derivative ∂_axis of one matrix component field.
pub(crate) fn spectral_derivative(
    field: &[Mat2],
    n: usize,
    spacing: f64,
    axis: usize,
) -> Vec<Mat2> {
    let mult: Vec<Complex64> = (0..n)
        .map(|j| {
            let k = 2.0 * PI * fft_mode(j, n) as f64 / (n as f64 * spacing);
            Complex64::new(0.0, k)
        })
        .collect();
    matrix_axis_filter(field, n, axis, &mult)
}

/// Per-link averages (1/h)∫₀ʰ W(x + t e_axis) dt of a band-limited field,
/// computed exactly in frequency space via the factor (e^{ikh}−1)/(ikh).
fn line_integral_field(field: &[Mat2], n: usize, spacing: f64, axis: usize) -> Vec<Mat2> {
    let mult: Vec<Complex64> = (0..n)
        .map(|j| {
            let k = 2.0 * PI * fft_mode(j, n) as f64 / (n as f64 * spacing);
            let u = k * spacing;
            if u.abs() < 1e-300 {
                Complex64::new(1.0, 0.0)
            } else {
                ((Complex64::new(0.0, u)).exp() - 1.0) / Complex64::new(0.0, u)
            }
        })
        .collect();
    matrix_axis_filter(field, n, axis, &mult)
}

/// Unnormalized inverse 3D FFT (frequency table -> site samples).
fn inverse_fft3(data: &mut [Complex64], n: usize) {
    let mut planner = FftPlanner::new();
    let inv = planner.plan_fft_inverse(n);
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for chunk in data.chunks_exact_mut(n) {
        inv.process(chunk);
    }
    for x in 0..n {
        for z in 0..n {
            let base = x * n * n + z;
            for y in 0..n {
                line[y] = data[base + y * n];
            }
            inv.process(&mut line);
            for y in 0..n {
                data[base + y * n] = line[y];
            }
        }
    }
    for y in 0..n {
        for z in 0..n {
            let base = y * n + z;
            for x in 0..n {
                line[x] = data[base + x * n * n];
            }
            inv.process(&mut line);
            for x in 0..n {
                data[base + x * n * n] = line[x];
            }
        }
    }
}

// ---------------------------------------------------------------------------
// seeded band-limited fields

struct ModeTable {
    modes: Vec<([i64; 3], Complex64)>,
}

/// Draw one real scalar field's spectrum: modes on the cube [-bl, bl]³ in a
/// fixed lexicographic order, Gaussian decay, Hermitian-symmetrized. The
/// table does not depend on the grid size, so one seed defines one continuum
/// field that can be sampled at any resolution.
fn draw_mode_table(rng: &mut ChaCha8Rng, band_limit: usize, amplitude: f64) -> ModeTable {
    let bl = band_limit as i64;
    let sigma = (bl as f64 / 2.0).max(0.75);
    let mut modes = Vec::new();
    for nx in -bl..=bl {
        for ny in -bl..=bl {
            for nz in -bl..=bl {
                if (nx, ny, nz) <= (0, 0, 0) {
                    continue;
                }
                let n2 = (nx * nx + ny * ny + nz * nz) as f64;
                let decay = (-n2 / (2.0 * sigma * sigma)).exp();
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                let c = Complex64::new(re, im) * (amplitude * decay / 2.0f64.sqrt());
                modes.push(([nx, ny, nz], c));
                modes.push(([-nx, -ny, -nz], c.conj()));
            }
        }
    }
    ModeTable { modes }
}

/// Sample the scalar field on an n³ grid (real part of the inverse FFT).
fn synthesize(table: &ModeTable, n: usize) -> Vec<f64> {
    let sites = n * n * n;
    let mut spec = vec![Complex64::new(0.0, 0.0); sites];
    let wrap = |m: i64| -> usize { m.rem_euclid(n as i64) as usize };
    for ([nx, ny, nz], c) in &table.modes {
        let idx = (wrap(*nx) * n + wrap(*ny)) * n + wrap(*nz);
        spec[idx] = *c;
    }
    inverse_fft3(&mut spec, n);
    spec.into_iter().map(|v| v.re).collect()
}

fn check_band_limit(grid_size: usize, band_limit: usize) -> Result<()> {
    if band_limit == 0 || 4 * band_limit >= grid_size {
        return Err(Error::domain(format!(
            "band limit {band_limit} not in 1..{} for grid size {grid_size}",
            (grid_size + 3) / 4
        )));
    }
    Ok(())
}

fn draw_matrix_field(rng: &mut ChaCha8Rng, n: usize, band_limit: usize, amplitude: f64) -> MatrixField {
    let mut field = MatrixField::zero(n, 1.0 / n as f64);
    let i = Complex64::new(0.0, 1.0);
    for mu in 0..3 {
        for g in 0..4 {
            let table = draw_mode_table(rng, band_limit, amplitude);
            let f = synthesize(&table, n);
            let sigma = pauli(g);
            for (site, v) in f.iter().enumerate() {
                field.comps[mu][site] += sigma * (i * *v);
            }
        }
    }
    field
}

/// Seeded anti-Hermitian (A, B) pair, band-limited and bit-reproducible.
/// The box length is 1, so `spacing = 1/n` and the same seed sampled at a
/// finer grid refines the same continuum configuration.
pub fn smooth_random(
    seed: u64,
    grid_size: usize,
    band_limit: usize,
    amplitude: f64,
) -> Result<GaugeConfig> {
    check_band_limit(grid_size, band_limit)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = draw_matrix_field(&mut rng, grid_size, band_limit, amplitude);
    let b = draw_matrix_field(&mut rng, grid_size, band_limit, amplitude);
    GaugeConfig::new(a, b)
}

/// Seeded topologically trivial gauge transformation g = exp(ξ) with ξ a
/// band-limited anti-Hermitian site field.
pub fn smooth_random_gauge(
    seed: u64,
    grid_size: usize,
    band_limit: usize,
    amplitude: f64,
) -> Result<UnitaryField> {
    check_band_limit(grid_size, band_limit)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sites = grid_size * grid_size * grid_size;
    let mut xi = vec![Mat2::zeros(); sites];
    let i = Complex64::new(0.0, 1.0);
    for g in 0..4 {
        let table = draw_mode_table(&mut rng, band_limit, amplitude);
        let f = synthesize(&table, grid_size);
        let sigma = pauli(g);
        for (site, v) in f.iter().enumerate() {
            xi[site] += sigma * (i * *v);
        }
    }
    let data: Vec<Mat2> = xi.iter().map(expm2).collect();
    UnitaryField::new(grid_size, data)
}

// ---------------------------------------------------------------------------
// actions

fn require_grid(field: &MatrixField) -> Result<()> {
    if field.n < 8 {
        return Err(Error::domain(format!(
            "grid size {} too small for controlled derivatives (need at least 8)",
            field.n
        )));
    }
    Ok(())
}

/// (κ/4π)·Σ h³ ε^{μνσ} tr(A_μ ∂_ν A_σ + (2/3) A_μ A_ν A_σ).
pub fn cs_action(field: &MatrixField, coupling: &CouplingConstants) -> Result<f64> {
    require_grid(field)?;
    Ok(coupling.kappa as f64 / (4.0 * PI) * cs_functional(field))
}

/// The bare functional I[A]; real for anti-Hermitian fields.
pub fn cs_functional(field: &MatrixField) -> f64 {
    let n = field.n;
    let h = field.spacing;
    let mut d = Vec::with_capacity(9);
    for nu in 0..3 {
        for sg in 0..3 {
            d.push(spectral_derivative(&field.comps[sg], n, h, nu));
        }
    }
    let mut total = Complex64::new(0.0, 0.0);
    for site in 0..field.site_count() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, nu, sg, sign) in EPS {
            let am = &field.comps[m][site];
            let da = &d[nu * 3 + sg][site];
            let cubic = am * &field.comps[nu][site] * &field.comps[sg][site];
            let t = (am * da).trace() + cubic.trace() * (2.0 / 3.0);
            acc += t * sign;
        }
        total += acc;
    }
    (total * h.powi(3)).re
}

/// Σ h³ ε^{μνσ} tr(2 B_μ F_νσ + (4λ²/3) B_μ B_ν B_σ) with the curvature
/// F_νσ = ∂_ν A_σ − ∂_σ A_ν + [A_ν, A_σ]; normalized so that it equals the
/// chiral Chern–Simons difference exactly.
pub fn bf_action(cfg: &GaugeConfig, coupling: &CouplingConstants) -> Result<f64> {
    require_grid(&cfg.a)?;
    let n = cfg.a.n;
    let h = cfg.a.spacing;
    let lam2 = coupling.lambda * coupling.lambda;
    let mut d = Vec::with_capacity(9);
    for nu in 0..3 {
        for sg in 0..3 {
            d.push(spectral_derivative(&cfg.a.comps[sg], n, h, nu));
        }
    }
    let mut total = Complex64::new(0.0, 0.0);
    for site in 0..cfg.a.site_count() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, nu, sg, sign) in EPS {
            let an = &cfg.a.comps[nu][site];
            let asg = &cfg.a.comps[sg][site];
            let f = &d[nu * 3 + sg][site] - &d[sg * 3 + nu][site] + an * asg - asg * an;
            let bm = &cfg.b.comps[m][site];
            let t1 = (bm * f).trace();
            let t3 = (bm * &cfg.b.comps[nu][site] * &cfg.b.comps[sg][site]).trace();
            acc += (t1 * 2.0 + t3 * (4.0 * lam2 / 3.0)) * sign;
        }
        total += acc;
    }
    Ok((total * h.powi(3)).re)
}

/// A± = A ± λB.
pub fn chiral_split(cfg: &GaugeConfig, coupling: &CouplingConstants) -> (MatrixField, MatrixField) {
    let plus = cfg.a.add_scaled(&cfg.b, coupling.lambda).expect("same grid by construction");
    let minus = cfg.a.add_scaled(&cfg.b, -coupling.lambda).expect("same grid by construction");
    (plus, minus)
}

/// Inverse of the split: A = (A⁺+A⁻)/2, B = (κ/8π)(A⁺−A⁻).
pub fn chiral_combine(
    plus: &MatrixField,
    minus: &MatrixField,
    coupling: &CouplingConstants,
) -> Result<GaugeConfig> {
    check_same_grid(plus, minus)?;
    let a = plus.add_scaled(minus, 1.0)?.scaled(0.5);
    let b = plus.add_scaled(minus, -1.0)?.scaled(coupling.kappa as f64 / (8.0 * PI));
    GaugeConfig::new(a, b)
}

/// |(κ/4π)(I[A⁺] − I[A⁻]) − S_BF| / (|S_BF| + ε_floor).
pub fn cs_bf_residual(cfg: &GaugeConfig, coupling: &CouplingConstants) -> Result<f64> {
    let (plus, minus) = chiral_split(cfg, coupling);
    let lhs = cs_action(&plus, coupling)? - cs_action(&minus, coupling)?;
    let rhs = bf_action(cfg, coupling)?;
    Ok((lhs - rhs).abs() / (rhs.abs() + 1e-12))
}

/// Microscopic fields (a, b) = (A, λB).
pub fn microscopic_map(cfg: &GaugeConfig, coupling: &CouplingConstants) -> (MatrixField, MatrixField) {
    (cfg.a.clone(), cfg.b.scaled(coupling.lambda))
}

pub fn microscopic_inverse(
    a: &MatrixField,
    b: &MatrixField,
    coupling: &CouplingConstants,
) -> Result<GaugeConfig> {
    GaugeConfig::new(a.clone(), b.scaled(1.0 / coupling.lambda))
}

// ---------------------------------------------------------------------------
// holonomy

/// Closed nearest-neighbor loop on the periodic grid.
#[derive(Clone, Debug)]
pub struct LoopPath {
    grid_size: usize,
    sites: Vec<[usize; 3]>,
    /// per segment: (direction, +1 forward / -1 backward)
    steps: Vec<(usize, i8)>,
}

impl LoopPath {
    pub fn new(grid_size: usize, sites: Vec<[usize; 3]>) -> Result<Self> {
        let n = grid_size;
        if sites.len() < 2 {
            return Err(Error::domain("loop needs at least two sites"));
        }
        for s in &sites {
            if s.iter().any(|&c| c >= n) {
                return Err(Error::domain(format!(
                    "site ({},{},{}) outside grid of size {n}",
                    s[0], s[1], s[2]
                )));
            }
        }
        let mut steps = Vec::with_capacity(sites.len());
        for i in 0..sites.len() {
            let from = sites[i];
            let to = sites[(i + 1) % sites.len()];
            let mut found = None;
            for axis in 0..3 {
                let others_equal = (0..3).all(|a| a == axis || from[a] == to[a]);
                if !others_equal || from[axis] == to[axis] {
                    continue;
                }
                let diff = (to[axis] + n - from[axis]) % n;
                if diff == 1 {
                    found = Some((axis, 1i8));
                } else if diff == n - 1 {
                    found = Some((axis, -1i8));
                }
                break;
            }
            match found {
                Some(step) => steps.push(step),
                None => {
                    return Err(Error::domain(format!(
                        "sites ({},{},{}) and ({},{},{}) are not nearest neighbors",
                        from[0], from[1], from[2], to[0], to[1], to[2]
                    )))
                }
            }
        }
        Ok(LoopPath { grid_size: n, sites, steps })
    }

    /// Axis-aligned rectangle in the (mu, nu) plane from `origin`, with side
    /// lengths (len_mu, len_nu).
    pub fn rectangle(
        grid_size: usize,
        origin: [usize; 3],
        mu: usize,
        nu: usize,
        len_mu: usize,
        len_nu: usize,
    ) -> Result<Self> {
        if mu > 2 || nu > 2 || mu == nu {
            return Err(Error::domain("rectangle plane needs two distinct axes in 0..3"));
        }
        if len_mu == 0 || len_nu == 0 {
            return Err(Error::domain("rectangle side lengths must be positive"));
        }
        let n = grid_size;
        let mut sites = Vec::new();
        let mut pos = origin;
        let mut push = |p: [usize; 3]| sites.push(p);
        for _ in 0..len_mu {
            push(pos);
            pos[mu] = (pos[mu] + 1) % n;
        }
        for _ in 0..len_nu {
            push(pos);
            pos[nu] = (pos[nu] + 1) % n;
        }
        for _ in 0..len_mu {
            push(pos);
            pos[mu] = (pos[mu] + n - 1) % n;
        }
        for _ in 0..len_nu {
            push(pos);
            pos[nu] = (pos[nu] + n - 1) % n;
        }
        LoopPath::new(grid_size, sites)
    }

    pub fn sites(&self) -> &[[usize; 3]] {
        &self.sites
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Same loop walked the other way, keeping the base site, so the
    /// holonomy is the exact matrix inverse.
    pub fn reversed(&self) -> LoopPath {
        let mut sites = vec![self.sites[0]];
        sites.extend(self.sites[1..].iter().rev());
        LoopPath::new(self.grid_size, sites).expect("reversal preserves validity")
    }
}

/// Path-ordered product of per-link exponentials of W = A + sign·λB, with
/// each link factor built from the exact line integral of the band-limited
/// field along that link.
pub fn holonomy(
    path: &LoopPath,
    cfg: &GaugeConfig,
    sign: i32,
    coupling: &CouplingConstants,
) -> Result<Mat2> {
    if sign != 1 && sign != -1 {
        return Err(Error::domain("holonomy chirality sign must be +1 or -1"));
    }
    if path.grid_size != cfg.grid_size() {
        return Err(Error::domain(format!(
            "loop lives on a grid of size {}, fields on {}",
            path.grid_size,
            cfg.grid_size()
        )));
    }
    let w = cfg.a.add_scaled(&cfg.b, sign as f64 * coupling.lambda)?;
    let n = w.n;
    let h = w.spacing;
    let links: Vec<Vec<Mat2>> =
        (0..3).map(|axis| line_integral_field(&w.comps[axis], n, h, axis)).collect();
    let mut u = Mat2::identity();
    let hs = Complex64::new(h, 0.0);
    for (i, &(axis, dir)) in path.steps.iter().enumerate() {
        let from = path.sites[i];
        let site = if dir > 0 {
            w.site_index(from[0], from[1], from[2])
        } else {
            let to = path.sites[(i + 1) % path.sites.len()];
            w.site_index(to[0], to[1], to[2])
        };
        let arg = links[axis][site] * hs * Complex64::new(dir as f64, 0.0);
        u = expm2(&arg) * u;
    }
    Ok(u)
}

pub fn traced_holonomy(
    path: &LoopPath,
    cfg: &GaugeConfig,
    sign: i32,
    coupling: &CouplingConstants,
) -> Result<Complex64> {
    Ok(holonomy(path, cfg, sign, coupling)?.trace())
}

/// A ↦ gAg⁻¹ + g∂g⁻¹ (spectral derivative), B ↦ gBg⁻¹. The outputs are
/// projected back onto anti-Hermitian matrices to strip rounding residue.
pub fn gauge_transform(cfg: &GaugeConfig, g: &UnitaryField) -> Result<GaugeConfig> {
    if g.n != cfg.grid_size() {
        return Err(Error::domain(format!(
            "gauge field grid {} does not match configuration grid {}",
            g.n,
            cfg.grid_size()
        )));
    }
    let n = cfg.grid_size();
    let h = cfg.spacing();
    let sites = cfg.a.site_count();
    let ginv: Vec<Mat2> = g.data.iter().map(|m| m.adjoint()).collect();
    let mut a = MatrixField::zero(n, h);
    let mut b = MatrixField::zero(n, h);
    for mu in 0..3 {
        let dginv = spectral_derivative(&ginv, n, h, mu);
        for site in 0..sites {
            let gm = &g.data[site];
            let gi = &ginv[site];
            let ta = gm * &cfg.a.comps[mu][site] * gi + gm * &dginv[site];
            let tb = gm * &cfg.b.comps[mu][site] * gi;
            a.comps[mu][site] = (ta - ta.adjoint()) * Complex64::new(0.5, 0.0);
            b.comps[mu][site] = (tb - tb.adjoint()) * Complex64::new(0.5, 0.0);
        }
    }
    GaugeConfig::new(a, b)
}
