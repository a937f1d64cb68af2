//! Triangulated closed 3-manifolds and the Turaev–Viro state sum, with the
//! 2↔3 bistellar moves used to test topological invariance.
//!
//! A triangulation is a list of tetrahedra with faces glued in pairs. Faces
//! are indexed by their opposite vertex; a gluing carries one of the six
//! bijections between the two face-vertex triples, encoded as an index into
//! `PERMS3` acting on ascending vertex order.

use crate::error::{Error, Result};
use crate::fusion::{admissible, total_dim, Label, Level, SixJTable};
use std::collections::HashMap;
use std::fmt::Write as _;

/// Tetrahedron edges in slot order: slot e joins the vertex pair `EDGES[e]`.
pub const EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

const PERMS3: [[usize; 3]; 6] =
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
const PERM_INV: [usize; 6] = [0, 1, 2, 4, 3, 5];

/// Edge slots lying in face f (the face opposite vertex f).
const FACE_EDGES: [[usize; 3]; 4] = [[3, 4, 5], [1, 2, 5], [0, 2, 4], [0, 1, 3]];

fn face_verts(f: usize) -> [usize; 3] {
    match f {
        0 => [1, 2, 3],
        1 => [0, 2, 3],
        2 => [0, 1, 3],
        _ => [0, 1, 2],
    }
}

fn edge_index(u: usize, v: usize) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    EDGES.iter().position(|&p| p == (a, b)).unwrap()
}

/// Full vertex bijection of a gluing: face verts of fa map through the perm,
/// the opposite vertex maps to the opposite vertex.
fn vertex_map(fa: usize, fb: usize, perm: usize) -> [usize; 4] {
    let va = face_verts(fa);
    let vb = face_verts(fb);
    let mut m = [0usize; 4];
    for j in 0..3 {
        m[va[j]] = vb[PERMS3[perm][j]];
    }
    m[fa] = fb;
    m
}

fn perm_from_vertex_map(fa: usize, fb: usize, m: &[usize; 4]) -> Option<usize> {
    (0..6).find(|&p| vertex_map(fa, fb, p) == *m)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.parent[ra] = rb;
    }

    /// Class ids numbered by first appearance, plus the class count.
    fn classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut ids = HashMap::new();
        let mut out = vec![0; n];
        for x in 0..n {
            let r = self.find(x);
            let next = ids.len();
            out[x] = *ids.entry(r).or_insert(next);
        }
        (out, ids.len())
    }
}

#[derive(Clone, Debug)]
pub struct Triangulation {
    tet_count: usize,
    glue: Vec<[Option<(usize, usize, usize)>; 4]>,
    edge_class: Vec<[usize; 6]>,
    edge_count: usize,
    vertex_count: usize,
}

impl Triangulation {
    /// Build from gluing tuples (tetA, faceA, tetB, faceB, perm); the reverse
    /// gluings are added automatically. Checks ranges, the involution
    /// property, and (for closed inputs) vanishing Euler characteristic.
    pub fn from_gluings(
        tet_count: usize,
        pairs: &[(usize, usize, usize, usize, usize)],
    ) -> Result<Self> {
        if tet_count == 0 {
            return Err(Error::domain("triangulation needs at least one tetrahedron"));
        }
        let mut glue = vec![[None; 4]; tet_count];
        for &(ta, fa, tb, fb, perm) in pairs {
            Self::add_pair(&mut glue, ta, fa, tb, fb, perm)?;
        }
        Self::finish(tet_count, glue)
    }

    fn add_pair(
        glue: &mut [[Option<(usize, usize, usize)>; 4]],
        ta: usize,
        fa: usize,
        tb: usize,
        fb: usize,
        perm: usize,
    ) -> Result<()> {
        let n = glue.len();
        if ta >= n || tb >= n {
            return Err(Error::domain(format!(
                "tetrahedron index out of range in gluing {ta} {fa} {tb} {fb} {perm}"
            )));
        }
        if fa > 3 || fb > 3 || perm > 5 {
            return Err(Error::domain(format!(
                "face or permutation index out of range in gluing {ta} {fa} {tb} {fb} {perm}"
            )));
        }
        if ta == tb && fa == fb {
            return Err(Error::domain(format!(
                "face {fa} of tetrahedron {ta} glued to itself"
            )));
        }
        if glue[ta][fa].is_some() || glue[tb][fb].is_some() {
            return Err(Error::domain(format!(
                "gluing not involutive: face of tetrahedron {} already glued",
                if glue[ta][fa].is_some() { ta } else { tb }
            )));
        }
        glue[ta][fa] = Some((tb, fb, perm));
        glue[tb][fb] = Some((ta, fa, PERM_INV[perm]));
        Ok(())
    }

    fn finish(tet_count: usize, glue: Vec<[Option<(usize, usize, usize)>; 4]>) -> Result<Self> {
        let mut euf = UnionFind::new(6 * tet_count);
        let mut vuf = UnionFind::new(4 * tet_count);
        for ta in 0..tet_count {
            for fa in 0..4 {
                let Some((tb, fb, perm)) = glue[ta][fa] else { continue };
                let m = vertex_map(fa, fb, perm);
                let va = face_verts(fa);
                for i in 0..3 {
                    vuf.union(4 * ta + va[i], 4 * tb + m[va[i]]);
                    for j in i + 1..3 {
                        let ea = edge_index(va[i], va[j]);
                        let eb = edge_index(m[va[i]], m[va[j]]);
                        euf.union(6 * ta + ea, 6 * tb + eb);
                    }
                }
            }
        }
        let (eids, edge_count) = euf.classes();
        let (_, vertex_count) = vuf.classes();
        let edge_class = (0..tet_count)
            .map(|t| std::array::from_fn(|e| eids[6 * t + e]))
            .collect();
        let tri = Triangulation { tet_count, glue, edge_class, edge_count, vertex_count };
        if tri.is_closed() && tri.euler_characteristic() != 0 {
            return Err(Error::domain(format!(
                "Euler characteristic violation: V-E+F-T = {} for closed input",
                tri.euler_characteristic()
            )));
        }
        Ok(tri)
    }

    /// Parse the text grammar: header `tets N`, then `g tetA faceA tetB faceB
    /// perm` lines; `#` starts a comment. Boundary (unglued) faces are
    /// allowed here.
    pub fn parse(text: &str) -> Result<Self> {
        let mut tet_count = None;
        let mut glue: Vec<[Option<(usize, usize, usize)>; 4]> = Vec::new();
        for (li, raw) in text.lines().enumerate() {
            let line = li + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut toks = content.split_whitespace();
            let head = toks.next().unwrap();
            if head == "tets" {
                if tet_count.is_some() {
                    return Err(Error::Parse { line, detail: "duplicate tets header".into() });
                }
                let n: usize = toks
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::Parse { line, detail: "bad tets header".into() })?;
                if n == 0 {
                    return Err(Error::Parse { line, detail: "tets count must be positive".into() });
                }
                if toks.next().is_some() {
                    return Err(Error::Parse { line, detail: "trailing tokens after tets header".into() });
                }
                tet_count = Some(n);
                glue = vec![[None; 4]; n];
            } else if head == "g" {
                if tet_count.is_none() {
                    return Err(Error::Parse { line, detail: "gluing before tets header".into() });
                }
                let nums: Vec<usize> = toks
                    .map(|t| t.parse::<usize>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::Parse { line, detail: "bad gluing numbers".into() })?;
                if nums.len() != 5 {
                    return Err(Error::Parse {
                        line,
                        detail: format!("expected 5 numbers after g, got {}", nums.len()),
                    });
                }
                Self::add_pair(&mut glue, nums[0], nums[1], nums[2], nums[3], nums[4]).map_err(
                    |e| match e {
                        Error::Domain(d) => Error::Parse { line, detail: d },
                        other => other,
                    },
                )?;
            } else {
                return Err(Error::Parse { line, detail: format!("unknown directive {head:?}") });
            }
        }
        let tet_count =
            tet_count.ok_or_else(|| Error::Parse { line: 1, detail: "missing tets header".into() })?;
        Self::finish(tet_count, glue)
    }

    /// Built-in census. `S3S3` is the connected sum of two copies of `S3`.
    pub fn builtin(name: &str) -> Result<Self> {
        let text = match name {
            "S3" => include_str!("../../../assets/triangulations/s3.tri"),
            "S2xS1" => include_str!("../../../assets/triangulations/s2xs1.tri"),
            "RP3" => include_str!("../../../assets/triangulations/rp3.tri"),
            "L31" => include_str!("../../../assets/triangulations/l31.tri"),
            "S3S3" => include_str!("../../../assets/triangulations/s3s3.tri"),
            _ => {
                return Err(Error::domain(format!(
                    "unknown manifold {name:?}; built-ins: S3, S2xS1, RP3, L31, S3S3"
                )))
            }
        };
        Self::parse(text)
    }

    pub fn builtin_names() -> &'static [&'static str] {
        &["S3", "S2xS1", "RP3", "L31", "S3S3"]
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("tets {}\n", self.tet_count);
        for ta in 0..self.tet_count {
            for fa in 0..4 {
                if let Some((tb, fb, perm)) = self.glue[ta][fa] {
                    if (ta, fa) <= (tb, fb) {
                        let _ = writeln!(s, "g {ta} {fa} {tb} {fb} {perm}");
                    }
                }
            }
        }
        s
    }

    pub fn tet_count(&self) -> usize {
        self.tet_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn face_count(&self) -> usize {
        let glued: usize = (0..self.tet_count)
            .map(|t| (0..4).filter(|&f| self.glue[t][f].is_some()).count())
            .sum();
        let boundary = 4 * self.tet_count - glued;
        glued / 2 + boundary
    }

    pub fn is_closed(&self) -> bool {
        self.glue.iter().all(|fs| fs.iter().all(|g| g.is_some()))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edge_count as i64 + self.face_count() as i64
            - self.tet_count as i64
    }

    pub fn edge_class_of(&self, tet: usize, edge: usize) -> Option<usize> {
        self.edge_class.get(tet).and_then(|row| row.get(edge)).copied()
    }

    fn edge_class_slots(&self, class: usize) -> Vec<(usize, usize)> {
        let mut slots = Vec::new();
        for t in 0..self.tet_count {
            for e in 0..6 {
                if self.edge_class[t][e] == class {
                    slots.push((t, e));
                }
            }
        }
        slots
    }

    /// Interior faces joining two distinct tetrahedra, one entry per glued
    /// pair: the sites where the 2→3 move applies.
    pub fn interior_faces(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for ta in 0..self.tet_count {
            for fa in 0..4 {
                if let Some((tb, fb, _)) = self.glue[ta][fa] {
                    if ta != tb && (ta, fa) < (tb, fb) {
                        out.push((ta, fa));
                    }
                }
            }
        }
        out
    }

    /// One representative slot per edge class of degree 3 whose three slots
    /// lie in three distinct tetrahedra: the sites where the 3→2 move
    /// applies.
    pub fn degree_three_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for class in 0..self.edge_count {
            let slots = self.edge_class_slots(class);
            if slots.len() != 3 {
                continue;
            }
            let mut tets: Vec<usize> = slots.iter().map(|&(t, _)| t).collect();
            tets.dedup();
            if tets.len() == 3 && self.pachner_32(slots[0].0, slots[0].1).is_ok() {
                out.push(slots[0]);
            }
        }
        out
    }

    /// Replace the two tetrahedra sharing the given face by three around the
    /// new edge joining their opposite vertices.
    pub fn pachner_23(&self, tet: usize, face: usize) -> Result<Triangulation> {
        if tet >= self.tet_count || face > 3 {
            return Err(Error::domain(format!("no face {face} of tetrahedron {tet}")));
        }
        let Some((tb, fb, perm)) = self.glue[tet][face] else {
            return Err(Error::domain("cannot expand across a boundary face".to_string()));
        };
        if tb == tet {
            return Err(Error::domain(
                "cannot expand a face glued to the same tetrahedron".to_string(),
            ));
        }
        let vm = vertex_map(face, fb, perm);
        let pv = face_verts(face);

        let mut survivor = HashMap::new();
        let mut next = 0usize;
        for t in 0..self.tet_count {
            if t != tet && t != tb {
                survivor.insert(t, next);
                next += 1;
            }
        }
        let new_ids = [next, next + 1, next + 2];

        // transferred faces: old (tet, opposite p_i) and (tb, opposite
        // vm[p_i]) become the outer faces of the new wheel
        let mut xfer: HashMap<(usize, usize), (usize, usize, [Option<usize>; 4])> = HashMap::new();
        for i in 0..3 {
            let ni = new_ids[(i + 1) % 3];
            let mut phi_a = [None; 4];
            phi_a[face] = Some(0);
            phi_a[pv[(i + 1) % 3]] = Some(2);
            phi_a[pv[(i + 2) % 3]] = Some(3);
            xfer.insert((tet, pv[i]), (ni, 1, phi_a));
            let mut phi_b = [None; 4];
            phi_b[fb] = Some(1);
            phi_b[vm[pv[(i + 1) % 3]]] = Some(2);
            phi_b[vm[pv[(i + 2) % 3]]] = Some(3);
            xfer.insert((tb, vm[pv[i]]), (ni, 0, phi_b));
        }

        let mut pairs = self.transfer_gluings(&[tet, tb], &xfer, &survivor)?;
        for i in 0..3 {
            pairs.push((new_ids[i], 2, new_ids[(i + 1) % 3], 3, 0));
        }
        Triangulation::from_gluings(self.tet_count + 1, &pairs)
    }

    /// Collapse the three tetrahedra around a degree-3 interior edge back to
    /// two. The edge is named by any slot (tet, edge index) in its class.
    pub fn pachner_32(&self, tet: usize, edge: usize) -> Result<Triangulation> {
        if tet >= self.tet_count || edge > 5 {
            return Err(Error::domain(format!("no edge {edge} of tetrahedron {tet}")));
        }
        let class = self.edge_class[tet][edge];
        let slots = self.edge_class_slots(class);
        if slots.len() != 3 {
            return Err(Error::domain(format!(
                "edge has degree {}, need exactly 3",
                slots.len()
            )));
        }
        {
            let mut tets: Vec<usize> = slots.iter().map(|&(t, _)| t).collect();
            tets.sort_unstable();
            tets.dedup();
            if tets.len() != 3 {
                return Err(Error::domain(
                    "edge slots do not lie in three distinct tetrahedra".to_string(),
                ));
            }
        }

        // walk the wheel: tets t[i] = {X, Y, p_i, p_{i+1}} with locals
        // lx, ly, lp (p_i), lq (p_{i+1})
        let (u0, v0) = EDGES[edge];
        let mut t = [tet, 0, 0];
        let others: Vec<usize> = (0..4).filter(|&v| v != u0 && v != v0).collect();
        let mut lx = [u0, 0, 0];
        let mut ly = [v0, 0, 0];
        let mut lp = [others[0], 0, 0];
        let mut lq = [others[1], 0, 0];
        for i in 0..3 {
            let Some((tn, fn_, perm)) = self.glue[t[i]][lp[i]] else {
                return Err(Error::domain("edge touches the boundary".to_string()));
            };
            let m = vertex_map(lp[i], fn_, perm);
            if i < 2 {
                t[i + 1] = tn;
                lx[i + 1] = m[lx[i]];
                ly[i + 1] = m[ly[i]];
                lp[i + 1] = m[lq[i]];
                lq[i + 1] = fn_;
            } else if tn != t[0]
                || fn_ != lq[0]
                || m[lx[2]] != lx[0]
                || m[ly[2]] != ly[0]
                || m[lq[2]] != lp[0]
            {
                return Err(Error::domain(
                    "edge link does not close into a triangle".to_string(),
                ));
            }
        }
        if t[1] == t[0] || t[2] == t[0] || t[1] == t[2] {
            return Err(Error::domain(
                "edge link revisits a tetrahedron".to_string(),
            ));
        }

        let mut survivor = HashMap::new();
        let mut next = 0usize;
        for s in 0..self.tet_count {
            if !t.contains(&s) {
                survivor.insert(s, next);
                next += 1;
            }
        }
        let (na, nb) = (next, next + 1);

        let mut xfer: HashMap<(usize, usize), (usize, usize, [Option<usize>; 4])> = HashMap::new();
        for i in 0..3 {
            let mut phi_a = [None; 4];
            phi_a[lx[i]] = Some(3);
            phi_a[lp[i]] = Some(i);
            phi_a[lq[i]] = Some((i + 1) % 3);
            xfer.insert((t[i], ly[i]), (na, (i + 2) % 3, phi_a));
            let mut phi_b = [None; 4];
            phi_b[ly[i]] = Some(3);
            phi_b[lp[i]] = Some(i);
            phi_b[lq[i]] = Some((i + 1) % 3);
            xfer.insert((t[i], lx[i]), (nb, (i + 2) % 3, phi_b));
        }

        let mut pairs = self.transfer_gluings(&t, &xfer, &survivor)?;
        pairs.push((na, 3, nb, 3, 0));
        Triangulation::from_gluings(self.tet_count - 1, &pairs)
    }

    /// Rewrite the old gluing pairs in terms of new tetrahedron indices.
    /// Faces of removed tetrahedra are looked up in `xfer` (new tet, new
    /// face, vertex renaming); faces absent from `xfer` are the interior
    /// faces consumed by the move and are dropped.
    fn transfer_gluings(
        &self,
        removed: &[usize],
        xfer: &HashMap<(usize, usize), (usize, usize, [Option<usize>; 4])>,
        survivor: &HashMap<usize, usize>,
    ) -> Result<Vec<(usize, usize, usize, usize, usize)>> {
        let resolve = |t: usize, f: usize| -> Option<(usize, usize, [Option<usize>; 4])> {
            if removed.contains(&t) {
                xfer.get(&(t, f)).copied()
            } else {
                let mut identity = [None; 4];
                for v in face_verts(f) {
                    identity[v] = Some(v);
                }
                Some((survivor[&t], f, identity))
            }
        };
        let mut pairs = Vec::new();
        for ta in 0..self.tet_count {
            for fa in 0..4 {
                let Some((tb, fb, perm)) = self.glue[ta][fa] else { continue };
                if (ta, fa) > (tb, fb) {
                    continue;
                }
                let (sa, sb) = (resolve(ta, fa), resolve(tb, fb));
                let (Some((nta, nfa, phi_a)), Some((ntb, nfb, phi_b))) = (sa, sb) else {
                    if sa.is_some() != sb.is_some() {
                        return Err(Error::domain(
                            "internal move error: half-consumed gluing".to_string(),
                        ));
                    }
                    continue;
                };
                let m_old = vertex_map(fa, fb, perm);
                let mut m_new = [usize::MAX; 4];
                for v in face_verts(fa) {
                    m_new[phi_a[v].unwrap()] = phi_b[m_old[v]].unwrap();
                }
                m_new[nfa] = nfb;
                let p = perm_from_vertex_map(nfa, nfb, &m_new).ok_or_else(|| {
                    Error::domain("internal move error: bad vertex map".to_string())
                })?;
                pairs.push((nta, nfa, ntb, nfb, p));
            }
        }
        Ok(pairs)
    }
}

/// Label per edge class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoring {
    pub assignment: Vec<Label>,
}

impl Triangulation {
    /// Whether every face triple of edge colors is admissible.
    pub fn coloring_admissible(&self, coloring: &EdgeColoring, level: &Level) -> Result<bool> {
        if coloring.assignment.len() != self.edge_count {
            return Err(Error::domain(format!(
                "coloring has {} entries for {} edge classes",
                coloring.assignment.len(),
                self.edge_count
            )));
        }
        for t in 0..self.tet_count {
            for fe in FACE_EDGES {
                let [a, b, c] = fe.map(|e| coloring.assignment[self.edge_class[t][e]]);
                if !admissible(a, b, c, level) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct StateSumResult {
    pub value: f64,
    pub coloring_count: u64,
    pub admissible_count: u64,
}

/// Turaev–Viro sum: D^{−2V} Σ_colorings ±Π_edges d_e Π_tets {6j}, where the
/// sign carries the self-duality data — (−1)^a per edge label and
/// (−1)^{(a+b+c)/2} per glued face. Dropping it breaks triangulation
/// independence on vertex-rich inputs even though small census examples
/// happen to agree. The per-coloring weights and their final accumulation
/// are both evaluated in a canonical sorted order, so the value is
/// bit-for-bit independent of tetrahedron numbering and of the search path.
pub fn state_sum(tri: &Triangulation, level: &Level) -> Result<StateSumResult> {
    if !tri.is_closed() {
        return Err(Error::domain(
            "state sum requires a closed triangulation (open faces present)".to_string(),
        ));
    }
    let n_class = tri.edge_count;
    let table = SixJTable::build(level);
    let dims: Vec<f64> = level.labels().map(|a| crate::fusion::quantum_integer(a + 1, level)).collect();

    // distinct face constraints: (class triple) per glued face pair
    let mut face_triples: Vec<[usize; 3]> = Vec::new();
    for t in 0..tri.tet_count {
        for f in 0..4 {
            let (tb, fb, _) = tri.glue[t][f].unwrap();
            if (t, f) <= (tb, fb) {
                face_triples.push(FACE_EDGES[f].map(|e| tri.edge_class[t][e]));
            }
        }
    }

    // most-constrained-first: repeatedly pick the class that completes the
    // most face constraints
    let mut order = Vec::with_capacity(n_class);
    let mut chosen = vec![false; n_class];
    for _ in 0..n_class {
        let mut best = (usize::MAX, usize::MAX);
        for c in 0..n_class {
            if chosen[c] {
                continue;
            }
            let completed = face_triples
                .iter()
                .filter(|tr| tr.contains(&c) && tr.iter().all(|&x| x == c || chosen[x]))
                .count();
            if best.0 == usize::MAX || completed > best.1 {
                best = (c, completed);
            }
        }
        chosen[best.0] = true;
        order.push(best.0);
    }
    let mut position = vec![0usize; n_class];
    for (p, &c) in order.iter().enumerate() {
        position[c] = p;
    }
    // face constraint becomes checkable at the step coloring its last class
    let mut checks_at: Vec<Vec<[usize; 3]>> = vec![Vec::new(); n_class];
    for tr in &face_triples {
        let p = tr.iter().map(|&c| position[c]).max().unwrap();
        checks_at[p].push(*tr);
    }

    let tet_classes: Vec<[usize; 6]> = tri.edge_class.clone();
    let n_labels = level.label_count() as Label;
    let mut assignment = vec![0 as Label; n_class];
    let mut weights: Vec<f64> = Vec::new();
    let mut admissible_count = 0u64;

    fn descend(
        depth: usize,
        order: &[usize],
        checks_at: &[Vec<[usize; 3]>],
        face_triples: &[[usize; 3]],
        assignment: &mut [Label],
        n_labels: Label,
        level: &Level,
        tet_classes: &[[usize; 6]],
        dims: &[f64],
        table: &SixJTable,
        weights: &mut Vec<f64>,
        admissible_count: &mut u64,
    ) {
        if depth == order.len() {
            *admissible_count += 1;
            let mut counts = vec![0i32; n_labels as usize];
            let mut parity: u32 = 0;
            for &c in assignment.iter() {
                counts[c as usize] += 1;
                parity += c;
            }
            for tr in face_triples {
                let [x, y, z] = tr.map(|c| assignment[c]);
                parity += (x + y + z) / 2;
            }
            let mut w = 1.0;
            for (a, &cnt) in counts.iter().enumerate() {
                if cnt > 0 {
                    w *= dims[a].powi(cnt);
                }
            }
            let mut factors: Vec<f64> = tet_classes
                .iter()
                .map(|cls| {
                    let c: Vec<Label> = cls.iter().map(|&e| assignment[e]).collect();
                    table.get(c[0], c[3], c[1], c[5], c[2], c[4])
                })
                .collect();
            factors.sort_by(f64::total_cmp);
            for f in factors {
                w *= f;
            }
            if parity % 2 == 1 {
                w = -w;
            }
            weights.push(w);
            return;
        }
        let class = order[depth];
        'labels: for a in 0..n_labels {
            assignment[class] = a;
            for tr in &checks_at[depth] {
                let [x, y, z] = tr.map(|c| assignment[c]);
                if !admissible(x, y, z, level) {
                    continue 'labels;
                }
            }
            descend(
                depth + 1,
                order,
                checks_at,
                face_triples,
                assignment,
                n_labels,
                level,
                tet_classes,
                dims,
                table,
                weights,
                admissible_count,
            );
        }
    }

    descend(
        0,
        &order,
        &checks_at,
        &face_triples,
        &mut assignment,
        n_labels,
        level,
        &tet_classes,
        &dims,
        &table,
        &mut weights,
        &mut admissible_count,
    );

    weights.sort_by(f64::total_cmp);
    let sum: f64 = weights.iter().sum();
    let d2 = total_dim(level).powi(2);
    let value = d2.powi(-(tri.vertex_count as i32)) * sum;
    let coloring_count = (n_labels as u64)
        .checked_pow(n_class as u32)
        .unwrap_or(u64::MAX);
    Ok(StateSumResult { value, coloring_count, admissible_count })
}

/// Spec-level loader: parse and insist the result is closed.
pub fn load_triangulation(text: &str) -> Result<Triangulation> {
    let tri = Triangulation::parse(text)?;
    if !tri.is_closed() {
        for t in 0..tri.tet_count {
            for f in 0..4 {
                if tri.glue[t][f].is_none() {
                    return Err(Error::domain(format!(
                        "open face: face {f} of tetrahedron {t} is unglued"
                    )));
                }
            }
        }
    }
    Ok(tri)
}

/// State sum against the squared chiral value, for the built-ins where the
/// latter is independently known (S3: |S_00|², S2xS1: 1).
pub fn doubled_check(manifold: &str, level: &Level) -> Result<(f64, f64)> {
    let chiral = match manifold {
        "S3" => {
            let d = total_dim(level);
            1.0 / (d * d)
        }
        "S2xS1" => 1.0,
        other => {
            return Err(Error::domain(format!(
                "no independent chiral value for manifold {other:?} (have: S3, S2xS1)"
            )))
        }
    };
    let tri = Triangulation::builtin(manifold)?;
    let tv = state_sum(&tri, level)?.value;
    Ok((tv, chiral))
}
