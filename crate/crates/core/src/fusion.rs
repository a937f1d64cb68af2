//! SU(2)_k fusion data: quantum integers, admissible triples, quantum
//! dimensions, and the unitary quantum 6j symbol.
//!
//! Labels are doubled spins a = 2j, integers in 0..=k. The deformation
//! parameter is q = exp(iπ/(k+2)), the root chosen so that every quantum
//! dimension is positive (unitary theory); no other Galois conjugate is
//! supported.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Level of the theory. Everything else is derived from k.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Level {
    k: u32,
}

impl Level {
    pub fn new(k: u32) -> Result<Self> {
        if k < 1 {
            return Err(Error::domain("level must be at least 1"));
        }
        if k > 100 {
            return Err(Error::domain("level too large (max 100)"));
        }
        Ok(Level { k })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Number of simple objects, k + 1.
    pub fn label_count(&self) -> usize {
        self.k as usize + 1
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> {
        0..=self.k
    }

    fn kp2(&self) -> f64 {
        f64::from(self.k + 2)
    }
}

/// Doubled-spin label a = 2j.
pub type Label = u32;

pub(crate) fn check_label(a: Label, level: &Level) -> Result<()> {
    if a > level.k {
        Err(Error::LabelRange { label: a, k: level.k })
    } else {
        Ok(())
    }
}

/// [n] = sin(nπ/(k+2)) / sin(π/(k+2)). [0] = 0, [1] = 1, [n] = [k+2−n].
pub fn quantum_integer(n: u32, level: &Level) -> f64 {
    let kp2 = level.kp2();
    (f64::from(n) * PI / kp2).sin() / (PI / kp2).sin()
}

/// Fusion admissibility: parity, triangle inequality, level cutoff.
/// Out-of-range labels are treated as inadmissible rather than an error.
pub fn admissible(a: Label, b: Label, c: Label, level: &Level) -> bool {
    let k = level.k;
    a <= k
        && b <= k
        && c <= k
        && (a + b + c) % 2 == 0
        && c <= a + b
        && a <= b + c
        && b <= a + c
        && a + b + c <= 2 * k
}

/// N_{ab}^c for SU(2)_k: 0 or 1, symmetric in all three labels.
pub fn fusion_mult(a: Label, b: Label, c: Label, level: &Level) -> Result<u8> {
    check_label(a, level)?;
    check_label(b, level)?;
    check_label(c, level)?;
    Ok(admissible(a, b, c, level) as u8)
}

/// Quantum dimension d_a = [a+1].
pub fn qdim(a: Label, level: &Level) -> Result<f64> {
    check_label(a, level)?;
    Ok(quantum_integer(a + 1, level))
}

/// D = sqrt(Σ_a d_a²); also equals sqrt((k+2)/2)/sin(π/(k+2)).
pub fn total_dim(level: &Level) -> f64 {
    level
        .labels()
        .map(|a| quantum_integer(a + 1, level).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Quantum factorials [n]! for n = 0..=k+2, shared by 6j evaluations.
pub(crate) struct QFactorial {
    vals: Vec<f64>,
}

impl QFactorial {
    pub(crate) fn new(level: &Level) -> Self {
        let top = level.k as usize + 2;
        let mut vals = Vec::with_capacity(top + 1);
        vals.push(1.0);
        for n in 1..=top {
            let prev = vals[n - 1];
            vals.push(prev * quantum_integer(n as u32, level));
        }
        QFactorial { vals }
    }

    fn get(&self, n: i64) -> f64 {
        self.vals[n as usize]
    }
}

fn tri_delta(a: i64, b: i64, c: i64, qf: &QFactorial) -> f64 {
    (qf.get((a + b - c) / 2) * qf.get((a - b + c) / 2) * qf.get((-a + b + c) / 2)
        / qf.get((a + b + c) / 2 + 1))
    .sqrt()
}

/// q-Racah single-sum evaluation. Gates on the four triads (a,b,e), (c,d,e),
/// (a,d,f), (c,b,f); the truncated z-range keeps every factorial argument in
/// 0..=k+1, so no denominator vanishes.
pub(crate) fn six_j_raw(
    a: Label,
    b: Label,
    e: Label,
    c: Label,
    d: Label,
    f: Label,
    level: &Level,
    qf: &QFactorial,
) -> f64 {
    if !(admissible(a, b, e, level)
        && admissible(c, d, e, level)
        && admissible(a, d, f, level)
        && admissible(c, b, f, level))
    {
        return 0.0;
    }
    let (a, b, e, c, d, f) = (a as i64, b as i64, e as i64, c as i64, d as i64, f as i64);
    let t = [(a + b + e) / 2, (c + d + e) / 2, (a + d + f) / 2, (c + b + f) / 2];
    let q = [(a + b + c + d) / 2, (a + c + e + f) / 2, (b + d + e + f) / 2];
    let pref = tri_delta(a, b, e, qf)
        * tri_delta(c, d, e, qf)
        * tri_delta(a, d, f, qf)
        * tri_delta(c, b, f, qf);
    let zlo = *t.iter().max().unwrap();
    let zhi = (*q.iter().min().unwrap()).min(i64::from(level.k) + 1);
    let mut s = 0.0;
    for z in zlo..=zhi {
        let sign = if z % 2 == 0 { 1.0 } else { -1.0 };
        let mut den = 1.0;
        for ti in t {
            den *= qf.get(z - ti);
        }
        for qi in q {
            den *= qf.get(qi - z);
        }
        s += sign * qf.get(z + 1) / den;
    }
    pref * s
}

/// Unitary (Racah–Wigner) 6j symbol {a b e; c d f}. Real, invariant under the
/// tetrahedral symmetries of the sextet; zero when any constituent triad is
/// inadmissible.
pub fn six_j(a: Label, b: Label, e: Label, c: Label, d: Label, f: Label, level: &Level) -> Result<f64> {
    for x in [a, b, e, c, d, f] {
        check_label(x, level)?;
    }
    let qf = QFactorial::new(level);
    Ok(six_j_raw(a, b, e, c, d, f, level, &qf))
}

/// F-move matrix element [F^{abc}_d]_{ef} = (−1)^{(a+b+c+d)/2} sqrt(d_e d_f)
/// {a b e; c d f}. For fixed (a,b,c,d) the matrix over (e,f) is real
/// orthogonal.
pub fn f_symbol(a: Label, b: Label, c: Label, d: Label, e: Label, f: Label, level: &Level) -> Result<f64> {
    for x in [a, b, e, c, d, f] {
        check_label(x, level)?;
    }
    if !(admissible(a, b, e, level)
        && admissible(e, c, d, level)
        && admissible(b, c, f, level)
        && admissible(a, f, d, level))
    {
        return Ok(0.0);
    }
    let qf = QFactorial::new(level);
    let sign = if ((a + b + c + d) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign
        * (quantum_integer(e + 1, level) * quantum_integer(f + 1, level)).sqrt()
        * six_j_raw(a, b, e, c, d, f, level, &qf))
}

/// Dense table of all 6j values for one level; entries are nonzero exactly for
/// the admissible sextets. Immutable after construction.
pub struct SixJTable {
    level: Level,
    m: usize,
    vals: Vec<f64>,
}

impl SixJTable {
    pub fn build(level: &Level) -> Self {
        let m = level.label_count();
        let qf = QFactorial::new(level);
        let mut vals = vec![0.0; m.pow(6)];
        // e,f ranges are gated before the raw evaluation to skip dead sextets
        for a in level.labels() {
            for b in level.labels() {
                for e in level.labels() {
                    if !admissible(a, b, e, level) {
                        continue;
                    }
                    for c in level.labels() {
                        for d in level.labels() {
                            if !admissible(c, d, e, level) {
                                continue;
                            }
                            for f in level.labels() {
                                let v = six_j_raw(a, b, e, c, d, f, level, &qf);
                                if v != 0.0 {
                                    let idx = Self::index(m, a, b, e, c, d, f);
                                    vals[idx] = v;
                                }
                            }
                        }
                    }
                }
            }
        }
        SixJTable { level: *level, m, vals }
    }

    #[inline]
    fn index(m: usize, a: Label, b: Label, e: Label, c: Label, d: Label, f: Label) -> usize {
        ((((a as usize * m + b as usize) * m + e as usize) * m + c as usize) * m + d as usize) * m
            + f as usize
    }

    #[inline]
    pub fn get(&self, a: Label, b: Label, e: Label, c: Label, d: Label, f: Label) -> f64 {
        self.vals[Self::index(self.m, a, b, e, c, d, f)]
    }

    pub fn level(&self) -> &Level {
        &self.level
    }
}
