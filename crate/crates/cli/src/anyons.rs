use csbf_core::braid::{
    framed_invariant, fusion_space_dim, link_invariant_colored, BraidContext, BraidWord,
};
use csbf_core::error::{Error, Result};
use csbf_core::fusion::{f_symbol, qdim, total_dim, Label, Level};
use csbf_core::modular::{
    hexagon_check, pentagon_check, r_symbol, s_unitarity_defect, verlinde_check, ModularData,
};

use crate::emit::Json;

pub fn modular_data(level_k: u32) -> Result<String> {
    let level = Level::new(level_k)?;
    let md = ModularData::new(&level);
    let labels: Vec<Json> = level.labels().map(|a| Json::UInt(a as u64)).collect();
    let dims: Vec<Json> = level
        .labels()
        .map(|a| Ok(Json::Num(qdim(a, &level)?)))
        .collect::<Result<_>>()?;
    let twists: Vec<Json> = md.twists.iter().map(|&t| Json::complex(t)).collect();
    Ok(Json::Obj(vec![
        ("level", Json::UInt(level_k as u64)),
        ("labels", Json::Arr(labels)),
        ("dims", Json::Arr(dims)),
        ("total_dim", Json::Num(total_dim(&level))),
        ("twists", Json::Arr(twists)),
        ("s_matrix", Json::matrix(&md.s)),
    ])
    .render())
}

fn parse_labels(text: &str, count: usize, what: &str) -> Result<Vec<Label>> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != count {
        return Err(Error::domain(format!(
            "{what} needs {count} comma-separated labels, got {}",
            parts.len()
        )));
    }
    parts
        .iter()
        .map(|p| {
            p.parse::<Label>()
                .map_err(|_| Error::domain(format!("bad label {p:?} in {what}")))
        })
        .collect()
}

pub struct FusionQuery {
    pub level: u32,
    pub check: Option<String>,
    pub f_entry: Option<String>,
    pub r_entry: Option<String>,
    pub space: Option<String>,
}

pub fn fusion(q: &FusionQuery) -> Result<String> {
    let level = Level::new(q.level)?;
    let mut fields: Vec<(&'static str, Json)> = vec![("level", Json::UInt(q.level as u64))];

    let mut specific = false;
    if let Some(check) = &q.check {
        specific = true;
        let mut add = |name: &'static str, value: f64| fields.push((name, Json::Num(value)));
        match check.as_str() {
            "pentagon" => add("pentagon", pentagon_check(&level)),
            "hexagon" => add("hexagon", hexagon_check(&level)),
            "verlinde" => add("verlinde", verlinde_check(&level)),
            "unitarity" => add("s_unitarity", s_unitarity_defect(&level)),
            "all" => {
                add("pentagon", pentagon_check(&level));
                add("hexagon", hexagon_check(&level));
                add("verlinde", verlinde_check(&level));
                add("s_unitarity", s_unitarity_defect(&level));
            }
            other => {
                return Err(Error::domain(format!(
                    "unknown check {other:?}; expected pentagon, hexagon, verlinde, unitarity, or all"
                )))
            }
        }
    }
    if let Some(spec) = &q.f_entry {
        specific = true;
        let l = parse_labels(spec, 6, "--f-symbol")?;
        let value = f_symbol(l[0], l[1], l[2], l[3], l[4], l[5], &level)?;
        fields.push(("f_symbol", Json::Num(value)));
    }
    if let Some(spec) = &q.r_entry {
        specific = true;
        let l = parse_labels(spec, 3, "--r-symbol")?;
        fields.push(("r_symbol", Json::complex(r_symbol(l[0], l[1], l[2], &level)?)));
    }
    if let Some(spec) = &q.space {
        specific = true;
        let l = parse_labels(spec, 3, "--space")?;
        let dim = fusion_space_dim(l[0] as usize, l[1], l[2], &level)?;
        fields.push(("space_dim", Json::UInt(dim)));
    }
    if !specific {
        let labels: Vec<Json> = level.labels().map(|a| Json::UInt(a as u64)).collect();
        let dims: Vec<Json> = level
            .labels()
            .map(|a| Ok(Json::Num(qdim(a, &level)?)))
            .collect::<Result<_>>()?;
        fields.push(("labels", Json::Arr(labels)));
        fields.push(("dims", Json::Arr(dims)));
        fields.push(("total_dim", Json::Num(total_dim(&level))));
    }
    Ok(Json::Obj(fields).render())
}

pub fn read_word(
    word: &Option<String>,
    word_file: &Option<std::path::PathBuf>,
    strands: Option<usize>,
) -> Result<BraidWord> {
    let text = match (word, word_file) {
        (Some(w), None) => {
            // inline words may omit the `n;` header when --strands is given
            if w.contains(';') {
                w.clone()
            } else {
                let n = strands.ok_or_else(|| {
                    Error::domain("--word without `n;` header requires --strands".to_string())
                })?;
                format!("{n}; {w}")
            }
        }
        (None, Some(path)) => std::fs::read_to_string(path)?,
        _ => {
            return Err(Error::domain(
                "exactly one of --word or --word-file is required".to_string(),
            ))
        }
    };
    let parsed = BraidWord::parse(text.trim())?;
    if let Some(n) = strands {
        if n != parsed.strand_count() {
            return Err(Error::domain(format!(
                "--strands {n} disagrees with word header {}",
                parsed.strand_count()
            )));
        }
    }
    Ok(parsed)
}

pub struct BraidQuery {
    pub level: u32,
    pub anyon: Label,
    pub total: Option<Label>,
    pub word: Option<String>,
    pub word_file: Option<std::path::PathBuf>,
    pub strands: Option<usize>,
}

pub fn braid(q: &BraidQuery) -> Result<String> {
    let level = Level::new(q.level)?;
    let word = read_word(&q.word, &q.word_file, q.strands)?;
    let n = word.strand_count();

    let totals: Vec<Label> = match q.total {
        Some(t) => vec![t],
        None => level
            .labels()
            .filter(|&t| fusion_space_dim(n, q.anyon, t, &level).unwrap_or(0) > 0)
            .collect(),
    };
    let mut blocks = Vec::new();
    for t in totals {
        let ctx = BraidContext::new(n, q.anyon, t, &level)?;
        let m = ctx.word_matrix(&word)?;
        let dim = m.nrows();
        let defect = (m.adjoint() * &m - nalgebra::DMatrix::identity(dim, dim)).norm();
        blocks.push(Json::Obj(vec![
            ("total", Json::UInt(t as u64)),
            ("dimension", Json::UInt(dim as u64)),
            ("unitary_defect", Json::Num(defect)),
            ("matrix", Json::matrix(&m)),
        ]));
    }
    Ok(Json::Obj(vec![
        ("level", Json::UInt(q.level as u64)),
        ("strands", Json::UInt(n as u64)),
        ("anyon", Json::UInt(q.anyon as u64)),
        ("word", Json::Str(word.to_text())),
        ("blocks", Json::Arr(blocks)),
    ])
    .render())
}

pub struct LinkQuery {
    pub level: u32,
    pub anyon: Label,
    pub colors: Option<String>,
    pub framed: bool,
    pub word: Option<String>,
    pub word_file: Option<std::path::PathBuf>,
    pub strands: Option<usize>,
}

pub fn link(q: &LinkQuery) -> Result<String> {
    let level = Level::new(q.level)?;
    let word = read_word(&q.word, &q.word_file, q.strands)?;
    let n = word.strand_count();
    let colors = match &q.colors {
        Some(spec) => parse_labels(spec, n, "--colors")?,
        None => vec![q.anyon; n],
    };
    let value = if q.framed {
        framed_invariant(&word, &colors, &level)?
    } else {
        link_invariant_colored(&word, &colors, &level)?
    };
    let writhe: i64 = word.letters().iter().map(|&(_, s)| s as i64).sum();
    Ok(Json::Obj(vec![
        ("level", Json::UInt(q.level as u64)),
        ("strands", Json::UInt(n as u64)),
        ("colors", Json::Arr(colors.iter().map(|&c| Json::UInt(c as u64)).collect())),
        ("framed", Json::Bool(q.framed)),
        ("writhe", Json::Int(writhe)),
        ("value", Json::complex(value)),
        ("modulus_sq", Json::Num(value.norm_sqr())),
    ])
    .render())
}
