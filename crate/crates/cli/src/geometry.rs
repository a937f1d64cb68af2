use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use csbf_core::error::{Error, Result};
use csbf_core::fusion::Level;
use csbf_core::turaev::{doubled_check, state_sum, Triangulation};

use crate::emit::Json;

pub struct TvQuery {
    pub level: u32,
    pub file: Option<std::path::PathBuf>,
    pub manifold: Option<String>,
    pub pachner: usize,
    pub pachner_inverse: usize,
    pub seed: u64,
    pub doubled: bool,
}

/// Apply `count` random expansion moves (2 tets -> 3 around a face), retrying
/// rejected picks so the seed alone fixes the outcome.
pub fn random_expansions(
    tri: &Triangulation,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Triangulation> {
    let mut cur = tri.clone();
    for _ in 0..count {
        let mut done = false;
        for _ in 0..200 {
            let faces = cur.interior_faces();
            if faces.is_empty() {
                break;
            }
            let (t, f) = faces[rng.gen_range(0..faces.len())];
            if let Ok(next) = cur.pachner_23(t, f) {
                cur = next;
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::domain(
                "no admissible expansion move found".to_string(),
            ));
        }
    }
    Ok(cur)
}

/// Apply `count` random collapse moves (3 tets around a degree-3 edge -> 2).
pub fn random_collapses(
    tri: &Triangulation,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Triangulation> {
    let mut cur = tri.clone();
    for _ in 0..count {
        let mut done = false;
        for _ in 0..200 {
            let edges = cur.degree_three_edges();
            if edges.is_empty() {
                break;
            }
            let (t, e) = edges[rng.gen_range(0..edges.len())];
            if let Ok(next) = cur.pachner_32(t, e) {
                cur = next;
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::domain(
                "no admissible collapse move found".to_string(),
            ));
        }
    }
    Ok(cur)
}

pub fn tv(q: &TvQuery) -> Result<String> {
    let level = Level::new(q.level)?;
    let (mut tri, source) = match (&q.file, &q.manifold) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)?;
            (
                Triangulation::parse(&text)?,
                path.display().to_string(),
            )
        }
        (None, Some(name)) => (Triangulation::builtin(name)?, name.clone()),
        _ => {
            return Err(Error::domain(
                "exactly one of --file or --manifold is required".to_string(),
            ))
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(q.seed);
    if q.pachner > 0 {
        tri = random_expansions(&tri, q.pachner, &mut rng)?;
    }
    if q.pachner_inverse > 0 {
        tri = random_collapses(&tri, q.pachner_inverse, &mut rng)?;
    }

    let result = state_sum(&tri, &level)?;
    let mut fields = vec![
        ("source", Json::Str(source)),
        ("level", Json::UInt(q.level as u64)),
        ("tets", Json::UInt(tri.tet_count() as u64)),
        ("vertices", Json::UInt(tri.vertex_count() as u64)),
        ("edges", Json::UInt(tri.edge_count() as u64)),
        ("faces", Json::UInt(tri.face_count() as u64)),
        ("moves", Json::UInt((q.pachner + q.pachner_inverse) as u64)),
        ("colorings", Json::UInt(result.coloring_count)),
        ("admissible", Json::UInt(result.admissible_count)),
        ("value", Json::Num(result.value)),
    ];
    if q.doubled {
        let name = q.manifold.as_ref().ok_or_else(|| {
            Error::domain("--doubled needs a built-in --manifold".to_string())
        })?;
        let (tv_value, doubled_rt) = doubled_check(name, &level)?;
        fields.push(("doubled_rt", Json::Num(doubled_rt)));
        fields.push(("doubled_difference", Json::Num((tv_value - doubled_rt).abs())));
    }
    Ok(Json::Obj(fields).render())
}
