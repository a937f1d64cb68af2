//! Braid-group representations on left-comb fusion trees, and link invariants
//! via quantum-trace closure with writhe correction.
//!
//! A basis state for n anyons of colors c_0..c_{n-1} with total charge t is
//! the chain m_0..m_{n-1} with m_0 = c_0, m_{n-1} = t and every
//! (m_{j-1}, c_j, m_j) admissible. σ_1 acts diagonally by R; σ_i for i ≥ 2 is
//! R conjugated into place by one F-move on each side.

use crate::error::{Error, Result};
use crate::fusion::{admissible, check_label, qdim, Label, Level, SixJTable};
use crate::modular::{r_symbol, twist};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::Arc;

/// Left-comb fusion tree: leaves fused strictly left to right. `internal`
/// holds the chain labels between the first pair outcome and the total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionTree {
    pub leaves: Vec<Label>,
    pub internal: Vec<Label>,
    pub total: Label,
}

impl FusionTree {
    /// Full chain m_0..m_{n-1} including the first leaf and the total.
    pub fn chain(&self) -> Vec<Label> {
        let n = self.leaves.len();
        let mut m = Vec::with_capacity(n.max(1));
        if n == 0 {
            return m;
        }
        m.push(self.leaves[0]);
        m.extend_from_slice(&self.internal);
        if n >= 2 {
            m.push(self.total);
        }
        m
    }

    fn from_chain(leaves: &[Label], chain: &[Label]) -> Self {
        let n = leaves.len();
        let internal = if n >= 2 { chain[1..n - 1].to_vec() } else { Vec::new() };
        let total = if n == 0 { 0 } else { chain[n - 1] };
        FusionTree { leaves: leaves.to_vec(), internal, total }
    }

    pub fn is_valid(&self, level: &Level) -> bool {
        let chain = self.chain();
        let n = self.leaves.len();
        if n == 0 {
            return self.total == 0 && self.internal.is_empty();
        }
        if chain.len() != n || chain[0] != self.leaves[0] || chain[n - 1] != self.total {
            return false;
        }
        (1..n).all(|j| admissible(chain[j - 1], self.leaves[j], chain[j], level))
    }
}

/// Word in the braid group B_n: generator indices with signs, applied left to
/// right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidWord {
    strand_count: usize,
    letters: Vec<(usize, i8)>,
}

impl BraidWord {
    pub fn new(strand_count: usize, letters: Vec<(usize, i8)>) -> Result<Self> {
        for &(i, s) in &letters {
            if i < 1 || i + 1 > strand_count {
                return Err(Error::domain(format!(
                    "generator index {i} out of range for {strand_count} strands"
                )));
            }
            if s != 1 && s != -1 {
                return Err(Error::domain(format!("letter sign must be +1 or -1, got {s}")));
            }
        }
        Ok(BraidWord { strand_count, letters })
    }

    /// Text form `n; i1 s1 i2 s2 …`. Signs may be written `+1`/`-1`/`+`/`-`,
    /// or fused onto the index as `2+` / `2-`.
    pub fn parse(text: &str) -> Result<Self> {
        let perr = |detail: String| Error::Parse { line: 1, detail };
        let (head, rest) = text
            .split_once(';')
            .ok_or_else(|| perr("expected `n; letters`".into()))?;
        let strand_count: usize = head
            .trim()
            .parse()
            .map_err(|_| perr(format!("bad strand count {:?}", head.trim())))?;
        let mut letters = Vec::new();
        let mut toks = rest.split_whitespace().peekable();
        while let Some(tok) = toks.next() {
            if let Some(idx) = tok.strip_suffix('+') {
                let i = idx.parse().map_err(|_| perr(format!("bad letter {tok:?}")))?;
                letters.push((i, 1));
            } else if let Some(idx) = tok.strip_suffix('-') {
                let i = idx.parse().map_err(|_| perr(format!("bad letter {tok:?}")))?;
                letters.push((i, -1));
            } else {
                let i: usize = tok.parse().map_err(|_| perr(format!("bad letter {tok:?}")))?;
                let sign_tok = toks
                    .next()
                    .ok_or_else(|| perr(format!("index {i} has no sign")))?;
                let s = match sign_tok {
                    "+" | "+1" | "1" => 1,
                    "-" | "-1" => -1,
                    other => return Err(perr(format!("bad sign {other:?}"))),
                };
                letters.push((i, s));
            }
        }
        BraidWord::new(strand_count, letters).map_err(|e| match e {
            Error::Domain(d) => perr(d),
            other => other,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{};", self.strand_count);
        for &(i, sg) in &self.letters {
            s.push_str(&format!(" {} {}", i, if sg > 0 { "+1" } else { "-1" }));
        }
        s
    }

    pub fn strand_count(&self) -> usize {
        self.strand_count
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    /// Underlying permutation: entry p is where the strand starting at
    /// position p ends up.
    pub fn permutation(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.strand_count).collect();
        for &(i, _) in &self.letters {
            perm.swap(i - 1, i);
        }
        perm
    }

    pub fn inverse(&self) -> BraidWord {
        let letters = self.letters.iter().rev().map(|&(i, s)| (i, -s)).collect();
        BraidWord { strand_count: self.strand_count, letters }
    }
}

/// (component id per strand, self-writhe per component).
fn closure_components(word: &BraidWord) -> (Vec<usize>, Vec<i64>) {
    let n = word.strand_count;
    let perm = word.permutation();
    let mut comp = vec![usize::MAX; n];
    let mut ncomp = 0;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut x = start;
        while comp[x] == usize::MAX {
            comp[x] = ncomp;
            x = perm[x];
        }
        ncomp += 1;
    }
    let mut writhes = vec![0i64; ncomp];
    let mut at: Vec<usize> = (0..n).collect();
    for &(i, s) in &word.letters {
        let (u, v) = (at[i - 1], at[i]);
        if comp[u] == comp[v] {
            writhes[comp[u]] += i64::from(s);
        }
        at.swap(i - 1, i);
    }
    (comp, writhes)
}

fn chain_basis(colors: &[Label], total: Label, level: &Level) -> Vec<Vec<Label>> {
    let n = colors.len();
    if n == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if n == 1 {
        return if colors[0] == total { vec![vec![colors[0]]] } else { vec![] };
    }
    let mut out = Vec::new();
    let mut chain = vec![colors[0]];
    fn rec(
        chain: &mut Vec<Label>,
        colors: &[Label],
        total: Label,
        level: &Level,
        out: &mut Vec<Vec<Label>>,
    ) {
        let j = chain.len();
        if j == colors.len() - 1 {
            if admissible(chain[j - 1], colors[j], total, level) {
                let mut full = chain.clone();
                full.push(total);
                out.push(full);
            }
            return;
        }
        for m in level.labels() {
            if admissible(chain[j - 1], colors[j], m, level) {
                chain.push(m);
                rec(chain, colors, total, level, out);
                chain.pop();
            }
        }
    }
    rec(&mut chain, colors, total, level, &mut out);
    out
}

/// Number of admissible left-comb labelings for n anyons of color a with
/// total charge `total`.
pub fn fusion_space_dim(n: usize, a: Label, total: Label, level: &Level) -> Result<u64> {
    if n == 0 {
        return Err(Error::domain("strand count must be at least 1"));
    }
    check_label(a, level)?;
    check_label(total, level)?;
    let mut counts = vec![0u64; level.label_count()];
    counts[a as usize] = 1;
    for _ in 1..n {
        let mut next = vec![0u64; level.label_count()];
        for m in level.labels() {
            if counts[m as usize] == 0 {
                continue;
            }
            for mp in level.labels() {
                if admissible(m, a, mp, level) {
                    next[mp as usize] = next[mp as usize].saturating_add(counts[m as usize]);
                }
            }
        }
        counts = next;
    }
    Ok(counts[total as usize])
}

struct FData {
    level: Level,
    table: SixJTable,
    sqd: Vec<f64>,
}

impl FData {
    fn new(level: &Level) -> Self {
        let sqd = level.labels().map(|a| qdim(a, level).unwrap().sqrt()).collect();
        FData { level: *level, table: SixJTable::build(level), sqd }
    }

    fn f(&self, a: Label, b: Label, c: Label, d: Label, e: Label, f: Label) -> f64 {
        let lv = &self.level;
        if !(admissible(a, b, e, lv)
            && admissible(e, c, d, lv)
            && admissible(b, c, f, lv)
            && admissible(a, f, d, lv))
        {
            return 0.0;
        }
        let sign = if ((a + b + c + d) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        sign * self.sqd[e as usize] * self.sqd[f as usize] * self.table.get(a, b, e, c, d, f)
    }

    fn r(&self, a: Label, b: Label, c: Label) -> Complex64 {
        if !admissible(a, b, c, &self.level) {
            return Complex64::new(0.0, 0.0);
        }
        r_symbol(a, b, c, &self.level).unwrap()
    }
}

fn basis_index(basis: &[Vec<Label>]) -> HashMap<Vec<Label>, usize> {
    basis.iter().enumerate().map(|(j, c)| (c.clone(), j)).collect()
}

/// σ_i on the chain basis for `colors`, mapping into the basis where leaves
/// i−1 and i (zero-based) are exchanged. Unitary; square when the two colors
/// coincide.
fn generator_on(fd: &FData, colors: &[Label], i: usize, total: Label) -> DMatrix<Complex64> {
    let level = &fd.level;
    let basis_in = chain_basis(colors, total, level);
    let mut swapped = colors.to_vec();
    swapped.swap(i - 1, i);
    let basis_out = chain_basis(&swapped, total, level);
    let out_idx = basis_index(&basis_out);
    let mut mat = DMatrix::zeros(basis_out.len(), basis_in.len());
    let (ca, cb) = (colors[i - 1], colors[i]);
    for (j, s) in basis_in.iter().enumerate() {
        if i == 1 {
            let mut sp = s.clone();
            sp[0] = swapped[0];
            if let Some(&jp) = out_idx.get(&sp) {
                mat[(jp, j)] = fd.r(ca, cb, s[1]);
            }
        } else {
            let u = s[i - 2];
            let v = s[i];
            let m = s[i - 1];
            for mp in level.labels() {
                let mut sp = s.clone();
                sp[i - 1] = mp;
                let Some(&jp) = out_idx.get(&sp) else { continue };
                let mut val = Complex64::new(0.0, 0.0);
                for h in level.labels() {
                    val += fd.f(u, ca, cb, v, m, h) * fd.r(ca, cb, h) * fd.f(u, cb, ca, v, mp, h);
                }
                mat[(jp, j)] = val;
            }
        }
    }
    mat
}

/// Immutable braid-representation context for n identical anyons: chain basis
/// plus all n−1 generator matrices, built once up front so word evaluation is
/// pure reads and can be shared across threads.
pub struct BraidContext {
    level: Level,
    n: usize,
    color: Label,
    total: Label,
    basis: Vec<Vec<Label>>,
    gens: Vec<DMatrix<Complex64>>,
}

impl BraidContext {
    pub fn new(n: usize, color: Label, total: Label, level: &Level) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("strand count must be at least 1"));
        }
        check_label(color, level)?;
        check_label(total, level)?;
        let colors = vec![color; n];
        let basis = chain_basis(&colors, total, level);
        let fd = FData::new(level);
        let gens = (1..n).map(|i| generator_on(&fd, &colors, i, total)).collect();
        Ok(BraidContext { level: *level, n, color, total, basis, gens })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn strand_count(&self) -> usize {
        self.n
    }

    pub fn total(&self) -> Label {
        self.total
    }

    pub fn level(&self) -> &Level {
        &self.level
    }

    pub fn trees(&self) -> Vec<FusionTree> {
        let leaves = vec![self.color; self.n];
        self.basis.iter().map(|c| FusionTree::from_chain(&leaves, c)).collect()
    }

    /// Matrix of σ_i (1-based).
    pub fn generator(&self, i: usize) -> Result<&DMatrix<Complex64>> {
        if i < 1 || i >= self.n {
            return Err(Error::domain(format!(
                "generator index {i} out of range for {} strands",
                self.n
            )));
        }
        Ok(&self.gens[i - 1])
    }

    pub fn word_matrix(&self, word: &BraidWord) -> Result<DMatrix<Complex64>> {
        if word.strand_count != self.n {
            return Err(Error::domain(format!(
                "word has {} strands, context has {}",
                word.strand_count, self.n
            )));
        }
        let d = self.dim();
        let mut m = DMatrix::identity(d, d);
        for &(i, s) in &word.letters {
            let g = &self.gens[i - 1];
            m = if s > 0 { g * m } else { g.adjoint() * m };
        }
        Ok(m)
    }

    fn identity_state(&self) -> DVector<Complex64> {
        let mut v = DVector::zeros(self.dim().max(1));
        if self.dim() > 0 {
            v[0] = Complex64::new(1.0, 0.0);
        }
        v
    }
}

/// Matrix of σ_i for n identical anyons of the given color and total charge.
pub fn braid_generator(
    i: usize,
    n: usize,
    color: Label,
    total: Label,
    level: &Level,
) -> Result<DMatrix<Complex64>> {
    let ctx = BraidContext::new(n, color, total, level)?;
    ctx.generator(i).cloned()
}

/// Ordered product of generator matrices for a whole word.
pub fn braid_rep(
    word: &BraidWord,
    color: Label,
    total: Label,
    level: &Level,
) -> Result<DMatrix<Complex64>> {
    let ctx = BraidContext::new(word.strand_count, color, total, level)?;
    ctx.word_matrix(word)
}

/// Amplitude vector over the chain basis of one context.
pub struct AnyonState {
    context: Arc<BraidContext>,
    pub amplitudes: DVector<Complex64>,
}

impl AnyonState {
    /// State concentrated on the first basis chain.
    pub fn ground(context: Arc<BraidContext>) -> Result<Self> {
        if context.dim() == 0 {
            return Err(Error::domain("fusion space is zero-dimensional"));
        }
        let amplitudes = context.identity_state();
        Ok(AnyonState { context, amplitudes })
    }

    pub fn with_amplitudes(context: Arc<BraidContext>, amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() != context.dim() {
            return Err(Error::domain(format!(
                "amplitude vector length {} does not match basis size {}",
                amplitudes.len(),
                context.dim()
            )));
        }
        Ok(AnyonState { context, amplitudes })
    }

    pub fn basis(&self) -> Vec<FusionTree> {
        self.context.trees()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn apply(&mut self, word: &BraidWord) -> Result<()> {
        let m = self.context.word_matrix(word)?;
        self.amplitudes = m * &self.amplitudes;
        Ok(())
    }
}

fn colored_trace(word: &BraidWord, colors: &[Label], total: Label, fd: &FData) -> Complex64 {
    let level = &fd.level;
    let basis0 = chain_basis(colors, total, level);
    if basis0.is_empty() {
        return Complex64::new(0.0, 0.0);
    }
    let d = basis0.len();
    let mut m = DMatrix::<Complex64>::identity(d, d);
    let mut cur = colors.to_vec();
    let mut cache: HashMap<(Vec<Label>, usize), DMatrix<Complex64>> = HashMap::new();
    for &(i, s) in word.letters() {
        let g = if s > 0 {
            let key = (cur.clone(), i);
            cache
                .entry(key)
                .or_insert_with(|| generator_on(fd, &cur, i, total))
                .clone()
        } else {
            let mut swapped = cur.clone();
            swapped.swap(i - 1, i);
            let key = (swapped.clone(), i);
            cache
                .entry(key)
                .or_insert_with(|| generator_on(fd, &swapped, i, total))
                .adjoint()
        };
        m = g * m;
        cur.swap(i - 1, i);
    }
    debug_assert_eq!(cur, colors);
    m.trace()
}

/// Quantum-trace closure without writhe correction: the regular-isotopy
/// (framed, blackboard) value. Requires each closure component to carry a
/// single color.
pub fn framed_invariant(word: &BraidWord, colors: &[Label], level: &Level) -> Result<Complex64> {
    if colors.len() != word.strand_count() {
        return Err(Error::domain(format!(
            "{} colors given for {} strands",
            colors.len(),
            word.strand_count()
        )));
    }
    for &c in colors {
        check_label(c, level)?;
    }
    let (comp, _) = closure_components(word);
    for s in 1..colors.len() {
        for sp in 0..s {
            if comp[s] == comp[sp] && colors[s] != colors[sp] {
                return Err(Error::domain(
                    "closure joins strands of different colors".to_string(),
                ));
            }
        }
    }
    let fd = FData::new(level);
    let mut raw = Complex64::new(0.0, 0.0);
    for t in level.labels() {
        let tr = colored_trace(word, colors, t, &fd);
        raw += Complex64::new(qdim(t, level)?, 0.0) * tr;
    }
    Ok(raw)
}

/// Ambient-isotopy invariant of the trace closure, one color per strand:
/// framed value times θ^{−w} per component self-writhe w. Empty closure is 1.
pub fn link_invariant_colored(
    word: &BraidWord,
    colors: &[Label],
    level: &Level,
) -> Result<Complex64> {
    let raw = framed_invariant(word, colors, level)?;
    let (comp, writhes) = closure_components(word);
    let mut corr = Complex64::new(1.0, 0.0);
    for (c, &w) in writhes.iter().enumerate() {
        let color = colors[comp.iter().position(|&x| x == c).unwrap()];
        let th = twist(color, level)?;
        corr *= th.powi(-(w as i32));
    }
    Ok(raw * corr)
}

/// Single-color closure invariant.
pub fn link_invariant(word: &BraidWord, color: Label, level: &Level) -> Result<Complex64> {
    let colors = vec![color; word.strand_count()];
    link_invariant_colored(word, &colors, level)
}

/// Squared modulus of the chiral invariant — the value seen by the doubled
/// theory.
pub fn doubled_invariant(word: &BraidWord, color: Label, level: &Level) -> Result<f64> {
    Ok(link_invariant(word, color, level)?.norm_sqr())
}
