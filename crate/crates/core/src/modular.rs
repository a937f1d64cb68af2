//! Braiding and modular data on top of the fusion layer: R symbols, twists,
//! the S matrix, and the consistency sweeps (pentagon, hexagon, Verlinde).

use crate::error::{Error, Result};
use crate::fusion::{admissible, check_label, quantum_integer, six_j_raw, total_dim, Label, Level, QFactorial, SixJTable};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

/// R^{ab}_c = (−1)^{(a+b−c)/2} exp(iπ [c(c+2) − a(a+2) − b(b+2)] / (4(k+2))).
/// Errors if (a,b,c) is not an admissible fusion channel.
pub fn r_symbol(a: Label, b: Label, c: Label, level: &Level) -> Result<Complex64> {
    check_label(a, level)?;
    check_label(b, level)?;
    check_label(c, level)?;
    if !admissible(a, b, c, level) {
        return Err(Error::domain(format!(
            "({a},{b};{c}) is not an admissible fusion channel at level {}",
            level.k()
        )));
    }
    let (af, bf, cf) = (f64::from(a), f64::from(b), f64::from(c));
    let sign = if ((a + b - c) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let phase = PI * (cf * (cf + 2.0) - af * (af + 2.0) - bf * (bf + 2.0))
        / (4.0 * (f64::from(level.k()) + 2.0));
    Ok(sign * Complex64::new(0.0, phase).exp())
}

/// Topological spin θ_a = exp(iπ a(a+2) / (2(k+2))).
pub fn twist(a: Label, level: &Level) -> Result<Complex64> {
    check_label(a, level)?;
    let af = f64::from(a);
    let arg = PI * af * (af + 2.0) / (2.0 * (f64::from(level.k()) + 2.0));
    Ok(Complex64::new(0.0, arg).exp())
}

/// Modular S matrix, S_ab = sqrt(2/(k+2)) sin(π(a+1)(b+1)/(k+2)).
/// Real symmetric unitary with S² = identity (charge conjugation is trivial
/// for SU(2)_k in this labeling... it is the identity permutation since all
/// labels are self-dual).
pub fn s_matrix(level: &Level) -> DMatrix<Complex64> {
    let n = level.label_count();
    let kp2 = f64::from(level.k()) + 2.0;
    let norm = (2.0 / kp2).sqrt();
    DMatrix::from_fn(n, n, |a, b| {
        Complex64::new(norm * (PI * ((a + 1) * (b + 1)) as f64 / kp2).sin(), 0.0)
    })
}

/// Precomputed modular data for one level: S matrix and twist vector.
pub struct ModularData {
    pub level: Level,
    pub s: DMatrix<Complex64>,
    pub twists: Vec<Complex64>,
}

impl ModularData {
    pub fn new(level: &Level) -> Self {
        let twists = level.labels().map(|a| twist(a, level).unwrap()).collect();
        ModularData { level: *level, s: s_matrix(level), twists }
    }
}

/// Largest deviation of the Verlinde sum Σ_x S_ax S_bx S_cx / S_0x from the
/// integer fusion multiplicity, over all label triples.
pub fn verlinde_check(level: &Level) -> f64 {
    let n = level.label_count();
    let kp2 = f64::from(level.k()) + 2.0;
    let norm = (2.0 / kp2).sqrt();
    let s: Vec<Vec<f64>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| norm * (PI * ((a + 1) * (b + 1)) as f64 / kp2).sin())
                .collect()
        })
        .collect();
    let mut worst: f64 = 0.0;
    for a in level.labels() {
        for b in level.labels() {
            for c in level.labels() {
                let mut acc = 0.0;
                for x in 0..n {
                    acc += s[a as usize][x] * s[b as usize][x] * s[c as usize][x] / s[0][x];
                }
                let n_abc = f64::from(admissible(a, b, c, level) as u8);
                worst = worst.max((acc - n_abc).abs());
            }
        }
    }
    worst
}

fn sqrt_qdims(level: &Level) -> Vec<f64> {
    level
        .labels()
        .map(|a| quantum_integer(a + 1, level).sqrt())
        .collect()
}

/// Largest pentagon residual over all admissible configurations:
/// F^{fcd}_e F^{abl}_e against Σ_h F^{abc}_g F^{ahd}_e F^{bcd}_k.
pub fn pentagon_check(level: &Level) -> f64 {
    let table = SixJTable::build(level);
    let sq = sqrt_qdims(level);
    let fsym = |a: Label, b: Label, c: Label, d: Label, e: Label, f: Label| -> f64 {
        if !(admissible(a, b, e, level)
            && admissible(e, c, d, level)
            && admissible(b, c, f, level)
            && admissible(a, f, d, level))
        {
            return 0.0;
        }
        let sign = if ((a + b + c + d) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        sign * sq[e as usize] * sq[f as usize] * table.get(a, b, e, c, d, f)
    };
    let mut worst: f64 = 0.0;
    for a in level.labels() {
        for b in level.labels() {
            for c in level.labels() {
                for d in level.labels() {
                    for f in level.labels() {
                        if !admissible(a, b, f, level) {
                            continue;
                        }
                        for g in level.labels() {
                            if !admissible(f, c, g, level) {
                                continue;
                            }
                            for e in level.labels() {
                                if !admissible(g, d, e, level) {
                                    continue;
                                }
                                for l in level.labels() {
                                    if !admissible(c, d, l, level) {
                                        continue;
                                    }
                                    for kk in level.labels() {
                                        let lhs =
                                            fsym(f, c, d, e, g, l) * fsym(a, b, l, e, f, kk);
                                        let mut rhs = 0.0;
                                        for h in level.labels() {
                                            rhs += fsym(a, b, c, g, f, h)
                                                * fsym(a, h, d, e, g, kk)
                                                * fsym(b, c, d, kk, h, l);
                                        }
                                        worst = worst.max((lhs - rhs).abs());
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    worst
}

/// Largest hexagon residual, checking both the R and R⁻¹ equations.
pub fn hexagon_check(level: &Level) -> f64 {
    let table = SixJTable::build(level);
    let sq = sqrt_qdims(level);
    let fsym = |a: Label, b: Label, c: Label, d: Label, e: Label, f: Label| -> f64 {
        if !(admissible(a, b, e, level)
            && admissible(e, c, d, level)
            && admissible(b, c, f, level)
            && admissible(a, f, d, level))
        {
            return 0.0;
        }
        let sign = if ((a + b + c + d) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        sign * sq[e as usize] * sq[f as usize] * table.get(a, b, e, c, d, f)
    };
    // Inadmissible channels contribute zero terms, encoded as R = 0 here so
    // the same loop covers both sides of each equation.
    let rloc = |a: Label, b: Label, c: Label| -> Complex64 {
        if !admissible(a, b, c, level) {
            return Complex64::new(0.0, 0.0);
        }
        r_symbol(a, b, c, level).unwrap()
    };
    let mut worst: f64 = 0.0;
    for a in level.labels() {
        for b in level.labels() {
            for c in level.labels() {
                for d in level.labels() {
                    for e in level.labels() {
                        for g in level.labels() {
                            for invert in [false, true] {
                                let r = |x: Label, y: Label, z: Label| -> Complex64 {
                                    let v = rloc(x, y, z);
                                    if invert {
                                        v.conj()
                                    } else {
                                        v
                                    }
                                };
                                let lhs = r(c, a, e)
                                    * fsym(a, c, b, d, e, g)
                                    * r(c, b, g);
                                let mut rhs = Complex64::new(0.0, 0.0);
                                for f in level.labels() {
                                    rhs += fsym(c, a, b, d, e, f)
                                        * r(c, f, d)
                                        * fsym(a, b, c, d, f, g);
                                }
                                worst = worst.max((lhs - rhs).norm());
                            }
                        }
                    }
                }
            }
        }
    }
    worst
}

/// Orthogonality defect of the full 6j symbol viewed as the matrix family
/// {e ↦ f}: max |Σ_e [F]_ef [F]_ef' − δ_ff'|. Exposed for diagnostics.
pub fn f_orthogonality_defect(level: &Level) -> f64 {
    let qf = QFactorial::new(level);
    let sq = sqrt_qdims(level);
    let mut worst: f64 = 0.0;
    for a in level.labels() {
        for b in level.labels() {
            for c in level.labels() {
                for d in level.labels() {
                    for f1 in level.labels() {
                        if !(admissible(b, c, f1, level) && admissible(a, f1, d, level)) {
                            continue;
                        }
                        for f2 in level.labels() {
                            if !(admissible(b, c, f2, level) && admissible(a, f2, d, level)) {
                                continue;
                            }
                            let mut acc = 0.0;
                            for e in level.labels() {
                                if !(admissible(a, b, e, level) && admissible(e, c, d, level)) {
                                    continue;
                                }
                                acc += sq[e as usize].powi(2)
                                    * sq[f1 as usize]
                                    * sq[f2 as usize]
                                    * six_j_raw(a, b, e, c, d, f1, level, &qf)
                                    * six_j_raw(a, b, e, c, d, f2, level, &qf);
                            }
                            let target = if f1 == f2 { 1.0 } else { 0.0 };
                            worst = worst.max((acc - target).abs());
                        }
                    }
                }
            }
        }
    }
    worst
}

/// |S S† − 1| in the max-entry sense; should be at roundoff for every level.
pub fn s_unitarity_defect(level: &Level) -> f64 {
    let s = s_matrix(level);
    let prod = &s * s.adjoint();
    let n = level.label_count();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// sqrt(Σ d_a²); re-exported here so modular consumers don't need the fusion
/// module for the one scalar they use.
pub fn total_dimension(level: &Level) -> f64 {
    total_dim(level)
}
