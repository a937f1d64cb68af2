use csbf_core::error::{Error, Result};
use csbf_core::graphene::{
    bands, berry_phase_around, dirac_points, fermi_velocity, finite_lattice_spectrum,
    structure_factor, valley_shift, GaugeCoupling, HoneycombParams, Valley,
};
use nalgebra::Vector2;

use crate::emit::{float, Json};

pub struct LatticeParams {
    pub t: f64,
    pub a: f64,
    pub mu: f64,
}

impl LatticeParams {
    fn build(&self) -> Result<HoneycombParams> {
        HoneycombParams::new(self.t, self.a, self.mu)
    }
}

fn waypoint(name: &str, params: &HoneycombParams) -> Result<Vector2<f64>> {
    let k = params.dirac_momentum();
    match name {
        "G" => Ok(Vector2::zeros()),
        "K" => Ok(k),
        "K'" | "Kp" => Ok(-k),
        "M" => Ok(params.reciprocal_vectors()[0] * 0.5),
        other => Err(Error::domain(format!(
            "unknown path point {other:?}; expected G, K, K' (Kp), or M"
        ))),
    }
}

pub fn bands_csv(lp: &LatticeParams, path: &str, samples: usize) -> Result<String> {
    let params = lp.build()?;
    if samples < 2 {
        return Err(Error::domain("need at least 2 samples per segment".to_string()));
    }
    let names: Vec<&str> = path.split('-').collect();
    if names.len() < 2 {
        return Err(Error::domain(format!(
            "path {path:?} needs at least two dash-separated points"
        )));
    }
    let points: Vec<Vector2<f64>> = names
        .iter()
        .map(|n| waypoint(n, &params))
        .collect::<Result<_>>()?;

    let mut out = String::from("k_distance,e_minus,e_plus\n");
    let mut distance = 0.0;
    for (seg, pair) in points.windows(2).enumerate() {
        let (from, to) = (pair[0], pair[1]);
        let seg_len = (to - from).norm();
        // interior segments skip their first point: it was emitted as the
        // previous segment's endpoint
        let start = if seg == 0 { 0 } else { 1 };
        for i in start..samples {
            let s = i as f64 / (samples - 1) as f64;
            let k = from + (to - from) * s;
            let (lo, hi) = bands(k, &params);
            out.push_str(&format!(
                "{},{},{}\n",
                float(distance + seg_len * s),
                float(lo),
                float(hi)
            ));
        }
        distance += seg_len;
    }
    Ok(out)
}

pub fn berry(lp: &LatticeParams, valley: &str, radius: Option<f64>, points: usize) -> Result<String> {
    let params = lp.build()?;
    let v = match valley {
        "K" => Valley::K,
        "K'" | "Kp" => Valley::KPrime,
        other => {
            return Err(Error::domain(format!(
                "unknown valley {other:?}; expected K or K' (Kp)"
            )))
        }
    };
    let center = v.center(&params);
    let r = radius.unwrap_or(0.25 * params.dirac_momentum().norm());
    let phase = berry_phase_around(center, r, points, &params)?;
    Ok(Json::Obj(vec![
        ("valley", Json::Str(valley.to_string())),
        ("radius", Json::Num(r)),
        ("points", Json::UInt(points as u64)),
        ("phase", Json::Num(phase)),
    ])
    .render())
}

pub fn dirac(lp: &LatticeParams) -> Result<String> {
    let params = lp.build()?;
    let (k, kp) = dirac_points(&params)?;
    Ok(Json::Obj(vec![
        ("k", Json::vector2([k.x, k.y])),
        ("k_prime", Json::vector2([kp.x, kp.y])),
        ("structure_factor_norm", Json::Num(structure_factor(k, &params).norm())),
        ("fermi_velocity", Json::Num(fermi_velocity(&params))),
    ])
    .render())
}

pub fn spectrum_csv(
    lp: &LatticeParams,
    l: usize,
    em_uniform: Option<f64>,
    chiral: Option<&str>,
) -> Result<String> {
    let params = lp.build()?;
    let mut coupling = GaugeCoupling::zero(l)?;
    if let Some(phi) = em_uniform {
        for m in 0..l {
            for n in 0..l {
                for b in 0..3 {
                    coupling.set_em_phase(m, n, b, phi);
                }
            }
        }
    }
    if let Some(spec) = chiral {
        let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::domain(
                "--chiral needs three comma-separated bond amplitudes".to_string(),
            ));
        }
        let mut pattern = [0.0; 3];
        for (i, p) in parts.iter().enumerate() {
            pattern[i] = p
                .parse()
                .map_err(|_| Error::domain(format!("bad bond amplitude {p:?}")))?;
        }
        for m in 0..l {
            for n in 0..l {
                for b in 0..3 {
                    coupling.set_chiral_phase(m, n, b, pattern[b]);
                }
            }
        }
    }
    let energies = finite_lattice_spectrum(l, &coupling, &params)?;
    let mut out = String::from("index,energy\n");
    for (i, e) in energies.iter().enumerate() {
        out.push_str(&format!("{},{}\n", i, float(*e)));
    }
    Ok(out)
}

pub fn valley(lp: &LatticeParams, l: usize, delta: f64) -> Result<String> {
    let params = lp.build()?;
    let (sk, skp) = valley_shift(l, delta, &params)?;
    Ok(Json::Obj(vec![
        ("l", Json::UInt(l as u64)),
        ("delta", Json::Num(delta)),
        ("shift_k", Json::vector2([sk.x, sk.y])),
        ("shift_k_prime", Json::vector2([skp.x, skp.y])),
    ])
    .render())
}
