use csbf_core::error::{Error, Result};
use csbf_core::field::{
    bf_action, chiral_split, cs_action, cs_bf_residual, gauge_transform, holonomy,
    microscopic_map, smooth_random, smooth_random_gauge, traced_holonomy, CouplingConstants,
    GaugeConfig, LoopPath, MatrixField,
};
use nalgebra::DMatrix;

use crate::emit::Json;

pub struct CheckQuery {
    pub seed: u64,
    pub grid: usize,
    pub kappa: i64,
    pub band_limit: usize,
    pub amplitude: f64,
    pub refine: bool,
    pub dump_config: Option<std::path::PathBuf>,
    pub dump_json: Option<std::path::PathBuf>,
    pub microscopic: bool,
}

fn field_norm(field: &MatrixField) -> f64 {
    let h = field.spacing();
    let mut sum = 0.0;
    for mu in 0..3 {
        for m in field.comp(mu) {
            sum += m.iter().map(|z| z.norm_sqr()).sum::<f64>();
        }
    }
    (sum * h * h * h).sqrt()
}

fn config_json(cfg: &GaugeConfig) -> Json {
    let field_to_json = |field: &MatrixField| {
        let comps: Vec<Json> = (0..3)
            .map(|mu| {
                let sites: Vec<Json> = field
                    .comp(mu)
                    .iter()
                    .map(|m| {
                        Json::Arr(vec![
                            Json::Arr(vec![Json::complex(m[(0, 0)]), Json::complex(m[(0, 1)])]),
                            Json::Arr(vec![Json::complex(m[(1, 0)]), Json::complex(m[(1, 1)])]),
                        ])
                    })
                    .collect();
                Json::Arr(sites)
            })
            .collect();
        Json::Arr(comps)
    };
    Json::Obj(vec![
        ("grid", Json::UInt(cfg.grid_size() as u64)),
        ("spacing", Json::Num(cfg.spacing())),
        ("a", field_to_json(&cfg.a)),
        ("b", field_to_json(&cfg.b)),
    ])
}

pub fn csbf_check(q: &CheckQuery) -> Result<String> {
    let coupling = CouplingConstants::new(q.kappa)?;
    let cfg = smooth_random(q.seed, q.grid, q.band_limit, q.amplitude)?;

    let (plus, minus) = chiral_split(&cfg, &coupling);
    let cs_plus = cs_action(&plus, &coupling)?;
    let cs_minus = cs_action(&minus, &coupling)?;
    let bf = bf_action(&cfg, &coupling)?;
    let residual = cs_bf_residual(&cfg, &coupling)?;

    let mut fields = vec![
        ("seed", Json::UInt(q.seed)),
        ("grid", Json::UInt(q.grid as u64)),
        ("kappa", Json::Int(q.kappa)),
        ("band_limit", Json::UInt(q.band_limit as u64)),
        ("amplitude", Json::Num(q.amplitude)),
        ("lambda", Json::Num(coupling.lambda)),
        ("cs_plus", Json::Num(cs_plus)),
        ("cs_minus", Json::Num(cs_minus)),
        ("chiral_difference", Json::Num(cs_plus - cs_minus)),
        ("bf", Json::Num(bf)),
        ("residual", Json::Num(residual)),
    ];

    if q.microscopic {
        let (em, chiral) = microscopic_map(&cfg, &coupling);
        fields.push(("em_norm", Json::Num(field_norm(&em))));
        fields.push(("chiral_norm", Json::Num(field_norm(&chiral))));
    }

    if q.refine {
        let mut rows = Vec::new();
        for n in [16usize, 32, 64] {
            let c = smooth_random(q.seed, n, q.band_limit, q.amplitude)?;
            rows.push(Json::Obj(vec![
                ("grid", Json::UInt(n as u64)),
                ("residual", Json::Num(cs_bf_residual(&c, &coupling)?)),
                ("chiral_difference", Json::Num({
                    let (p, m) = chiral_split(&c, &coupling);
                    cs_action(&p, &coupling)? - cs_action(&m, &coupling)?
                })),
            ]));
        }
        fields.push(("refinement", Json::Arr(rows)));
    }

    if let Some(path) = &q.dump_config {
        std::fs::write(path, cfg.to_bytes())?;
        fields.push(("config_path", Json::Str(path.display().to_string())));
    }
    if let Some(path) = &q.dump_json {
        if q.grid > 8 {
            return Err(Error::domain(
                "JSON config dump supported for grids up to 8".to_string(),
            ));
        }
        std::fs::write(path, config_json(&cfg).render())?;
        fields.push(("json_path", Json::Str(path.display().to_string())));
    }

    Ok(Json::Obj(fields).render())
}

pub struct HolonomyQuery {
    pub seed: u64,
    pub grid: usize,
    pub kappa: i64,
    pub band_limit: usize,
    pub amplitude: f64,
    pub plane: String,
    pub size: usize,
    pub origin: String,
    pub sign: i32,
    pub gauge_seed: Option<u64>,
    pub gauge_amplitude: f64,
    pub reverse_check: bool,
}

fn parse_origin(text: &str, grid: usize) -> Result<[usize; 3]> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::domain(format!(
            "origin needs three comma-separated coordinates, got {text:?}"
        )));
    }
    let mut out = [0usize; 3];
    for (i, p) in parts.iter().enumerate() {
        let v: usize = p
            .parse()
            .map_err(|_| Error::domain(format!("bad origin coordinate {p:?}")))?;
        if v >= grid {
            return Err(Error::domain(format!(
                "origin coordinate {v} outside grid of size {grid}"
            )));
        }
        out[i] = v;
    }
    Ok(out)
}

pub fn holonomy_cmd(q: &HolonomyQuery) -> Result<String> {
    let coupling = CouplingConstants::new(q.kappa)?;
    let cfg = smooth_random(q.seed, q.grid, q.band_limit, q.amplitude)?;
    let (mu, nu) = match q.plane.as_str() {
        "xy" => (0, 1),
        "yz" => (1, 2),
        "zx" => (2, 0),
        other => {
            return Err(Error::domain(format!(
                "unknown plane {other:?}; expected xy, yz, or zx"
            )))
        }
    };
    let origin = parse_origin(&q.origin, q.grid)?;
    let path = LoopPath::rectangle(q.grid, origin, mu, nu, q.size, q.size)?;

    let u = holonomy(&path, &cfg, q.sign, &coupling)?;
    let trace = u.trace();
    let unitary_defect = (u.adjoint() * u - nalgebra::Matrix2::identity()).norm();
    let matrix = DMatrix::from_fn(2, 2, |r, c| u[(r, c)]);

    let mut fields = vec![
        ("seed", Json::UInt(q.seed)),
        ("grid", Json::UInt(q.grid as u64)),
        ("kappa", Json::Int(q.kappa)),
        ("plane", Json::Str(q.plane.clone())),
        ("size", Json::UInt(q.size as u64)),
        ("sign", Json::Int(q.sign as i64)),
        ("trace", Json::complex(trace)),
        ("unitary_defect", Json::Num(unitary_defect)),
        ("matrix", Json::matrix(&matrix)),
    ];

    if let Some(gs) = q.gauge_seed {
        let g = smooth_random_gauge(gs, q.grid, q.band_limit, q.gauge_amplitude)?;
        let transformed = gauge_transform(&cfg, &g)?;
        let t2 = traced_holonomy(&path, &transformed, q.sign, &coupling)?;
        fields.push(("gauge_trace", Json::complex(t2)));
        fields.push(("trace_shift", Json::Num((t2 - trace).norm())));
    }
    if q.reverse_check {
        let v = holonomy(&path.reversed(), &cfg, q.sign, &coupling)?;
        let defect = (v * u - nalgebra::Matrix2::identity()).norm();
        fields.push(("reverse_defect", Json::Num(defect)));
    }

    Ok(Json::Obj(fields).render())
}
