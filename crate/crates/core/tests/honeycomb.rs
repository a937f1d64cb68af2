use std::f64::consts::PI;

use csbf_core::graphene::{
    bands, berry_phase, berry_phase_around, bloch_hamiltonian, dirac_points,
    fermi_velocity, finite_lattice_spectrum, structure_factor, valley_shift, GaugeCoupling,
    HoneycombParams, Valley,
};
use nalgebra::Vector2;

fn p(t: f64, a: f64, mu: f64) -> HoneycombParams {
    HoneycombParams::new(t, a, mu).unwrap()
}

#[test]
fn band_extremes_and_chemical_potential_shift() {
    let params = p(1.0, 1.0, 0.0);
    let (lo, hi) = bands(Vector2::zeros(), &params);
    assert!((lo + 3.0).abs() < 1e-14 && (hi - 3.0).abs() < 1e-14);

    let k = params.dirac_momentum();
    let (lo, hi) = bands(k, &params);
    assert!(hi - lo < 1e-12, "gap at the Dirac point: {}", hi - lo);
    let (lo, hi) = bands(-k, &params);
    assert!(hi - lo < 1e-12);

    // halfway along a reciprocal basis vector the structure factor has unit modulus
    let [b1, _] = params.reciprocal_vectors();
    let (lo, hi) = bands(b1 * 0.5, &params);
    assert!((lo + 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);

    let shifted = p(1.0, 1.0, 0.1);
    for k in [Vector2::new(0.3, -1.1), Vector2::new(2.0, 0.7), b1 * 0.5] {
        let (lo0, hi0) = bands(k, &params);
        let (lo1, hi1) = bands(k, &shifted);
        assert!((lo1 - (lo0 - 0.1)).abs() < 1e-14);
        assert!((hi1 - (hi0 - 0.1)).abs() < 1e-14);
    }

    assert!(HoneycombParams::new(0.0, 1.0, 0.0).is_err());
    assert!(HoneycombParams::new(-1.0, 1.0, 0.0).is_err());
    assert!(HoneycombParams::new(1.0, 0.0, 0.0).is_err());
    assert!(HoneycombParams::new(1.0, 1.0, f64::NAN).is_err());
}

#[test]
fn bloch_hamiltonian_is_hermitian_and_periodic() {
    let params = p(1.3, 0.9, 0.25);
    let [b1, b2] = params.reciprocal_vectors();
    let [a1, a2] = params.lattice_vectors();
    assert!((a1.dot(&b1) - 2.0 * PI).abs() < 1e-12);
    assert!(a1.dot(&b2).abs() < 1e-12);
    assert!(a2.dot(&b1).abs() < 1e-12);
    assert!((a2.dot(&b2) - 2.0 * PI).abs() < 1e-12);

    for seed in 0..20 {
        let k = Vector2::new((seed as f64 * 0.77).sin() * 3.0, (seed as f64 * 1.31).cos() * 3.0);
        let h = bloch_hamiltonian(k, &params);
        let defect = (h - h.adjoint()).norm();
        assert!(defect < 1e-13);
        // eigenvalues of the two-level matrix must agree with the band formula
        let (lo, hi) = bands(k, &params);
        let tr = h[(0, 0)].re + h[(1, 1)].re;
        let det = (h[(0, 0)] * h[(1, 1)] - h[(0, 1)] * h[(1, 0)]).re;
        let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
        assert!((lo - (tr / 2.0 - disc)).abs() < 1e-12);
        assert!((hi - (tr / 2.0 + disc)).abs() < 1e-12);

        // translating by a reciprocal vector rotates the structure factor by
        // the sublattice-offset phase, so only its modulus (and the bands)
        // are periodic
        let f0 = structure_factor(k, &params);
        let f1 = structure_factor(k + b1, &params);
        assert!((f0.norm() - f1.norm()).abs() < 1e-12);
        let (lo0, hi0) = bands(k, &params);
        let (lo1, hi1) = bands(k + b2 * 3.0, &params);
        assert!((lo0 - lo1).abs() < 1e-11 && (hi0 - hi1).abs() < 1e-11);
    }
}

#[test]
fn dirac_point_search_matches_closed_form() {
    for (t, a) in [(1.0, 1.0), (2.7, 1.42)] {
        let params = p(t, a, 0.0);
        let (k, kp) = dirac_points(&params).unwrap();
        let expected = 4.0 * PI / (3.0 * 3.0f64.sqrt() * a);
        assert!((k.x - expected).abs() < 1e-9, "K off by {}", k.x - expected);
        assert!(k.y.abs() < 1e-9);
        assert!((k + kp).norm() < 1e-9, "K' is not -K");
        assert!(structure_factor(k, &params).norm() < 1e-10);
        assert!(structure_factor(kp, &params).norm() < 1e-10);
    }
}

#[test]
fn fermi_velocity_slope_and_scaling() {
    let v = fermi_velocity(&p(1.0, 1.0, 0.0));
    assert!((v - 1.5).abs() / 1.5 < 0.005, "v = {v}");

    let v = fermi_velocity(&p(2.7, 1.42, 0.0));
    let target = 1.5 * 2.7 * 1.42;
    assert!((v - target).abs() / target < 0.005);

    let v1 = fermi_velocity(&p(0.8, 1.1, 0.3));
    let v2 = fermi_velocity(&p(1.6, 1.1, 0.3));
    assert!((v2 - 2.0 * v1).abs() < 1e-10 * v2.abs());

    // ratio to t*a stays pinned over a 10x range in both parameters
    for t in [0.3, 1.0, 3.0] {
        for a in [0.4, 1.0, 4.0] {
            let v = fermi_velocity(&p(t, a, 0.0));
            assert!((v / (t * a) - 1.5).abs() < 0.0075, "t={t} a={a} v={v}");
        }
    }
}

#[test]
fn fermi_velocity_is_isotropic() {
    let params = p(1.0, 1.0, 0.0);
    let k = params.dirac_momentum();
    let mut slopes = Vec::new();
    for i in 0..24 {
        let phi = 2.0 * PI * i as f64 / 24.0;
        let u = Vector2::new(phi.cos(), phi.sin());
        let q = 5e-3;
        let (_, hi) = bands(k + u * q, &params);
        slopes.push(hi / q);
    }
    let mean = slopes.iter().sum::<f64>() / slopes.len() as f64;
    for s in slopes {
        assert!((s - mean).abs() / mean < 0.01);
    }
}

#[test]
fn berry_phases_at_the_two_valleys() {
    let params = p(1.0, 1.0, 0.0);
    let bk = berry_phase(Valley::K, &params);
    let bkp = berry_phase(Valley::KPrime, &params);
    assert!((bk - PI).abs() < 1e-6, "K loop gave {bk}");
    assert!((bkp + PI).abs() < 1e-6, "K' loop gave {bkp}");
    assert!((bk + bkp).abs() < 1e-9);

    // chemical potential rescales energies but not the eigenvector winding
    let bk_mu = berry_phase(Valley::K, &p(2.0, 1.0, 0.4));
    assert!((bk_mu - PI).abs() < 1e-6);

    // a loop in a cone-free region carries no phase
    let trivial =
        berry_phase_around(Vector2::new(0.1, 0.1), 0.05, 10_000, &params).unwrap();
    assert!(trivial.abs() < 1e-6);
}

#[test]
fn berry_loop_rejects_bad_radii() {
    let params = p(1.0, 1.0, 0.0);
    let center = params.dirac_momentum();
    assert!(berry_phase_around(center, 0.0, 10_000, &params).is_err());
    assert!(berry_phase_around(center, -1.0, 10_000, &params).is_err());
    assert!(berry_phase_around(center, 1.3, 10_000, &params).is_err());
    assert!(berry_phase_around(center, 0.3, 8, &params).is_err());
    // just under half the valley separation is still accepted
    assert!(berry_phase_around(center, 0.49 * center.norm(), 10_000, &params).is_ok());
}

#[test]
fn finite_lattice_matches_bloch_bands_on_the_grid() {
    for (l, mu) in [(6usize, 0.0), (5, 0.2)] {
        let params = p(1.0, 1.0, mu);
        let coupling = GaugeCoupling::zero(l).unwrap();
        let spectrum = finite_lattice_spectrum(l, &coupling, &params).unwrap();
        assert_eq!(spectrum.len(), 2 * l * l);

        let [b1, b2] = params.reciprocal_vectors();
        let mut expected = Vec::new();
        for p in 0..l {
            for q in 0..l {
                let k = b1 * (p as f64 / l as f64) + b2 * (q as f64 / l as f64);
                let (lo, hi) = bands(k, &params);
                expected.push(lo);
                expected.push(hi);
            }
        }
        expected.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (s, e) in spectrum.iter().zip(&expected) {
            assert!((s - e).abs() < 1e-10, "lattice {s} vs band {e}");
        }
    }
}

#[test]
fn finite_lattice_particle_hole_symmetry() {
    let params = p(1.0, 1.0, 0.0);
    let mut coupling = GaugeCoupling::zero(6).unwrap();
    // arbitrary bond phases keep the spectrum symmetric: the matrix stays
    // block off-diagonal in the sublattice splitting
    for m in 0..6 {
        for n in 0..6 {
            for b in 0..3 {
                coupling.set_em_phase(m, n, b, ((m * 7 + n * 3 + b) as f64 * 0.61).sin());
            }
        }
    }
    let spectrum = finite_lattice_spectrum(6, &coupling, &params).unwrap();
    let dim = spectrum.len();
    for i in 0..dim {
        assert!((spectrum[i] + spectrum[dim - 1 - i]).abs() < 1e-12);
    }
}

#[test]
fn uniform_peierls_phase_is_pure_gauge() {
    let l = 8;
    let params = p(1.0, 1.0, 0.15);
    let base = finite_lattice_spectrum(l, &GaugeCoupling::zero(l).unwrap(), &params).unwrap();

    let phases = vec![0.37; 3 * l * l];
    let coupling = GaugeCoupling::new(l, phases, vec![0.0; 3 * l * l]).unwrap();
    let twisted = finite_lattice_spectrum(l, &coupling, &params).unwrap();
    for (x, y) in base.iter().zip(&twisted) {
        assert!((x - y).abs() < 1e-10);
    }
}

#[test]
fn coupling_validation() {
    assert!(GaugeCoupling::zero(3).is_err());
    assert!(GaugeCoupling::zero(65).is_err());
    assert!(GaugeCoupling::zero(4).is_ok());
    assert!(GaugeCoupling::new(4, vec![0.0; 10], vec![0.0; 48]).is_err());
    assert!(GaugeCoupling::new(4, vec![f64::NAN; 48], vec![0.0; 48]).is_err());

    let c4 = GaugeCoupling::zero(4).unwrap();
    let params = p(1.0, 1.0, 0.0);
    assert!(finite_lattice_spectrum(5, &c4, &params).is_err());
    assert!(finite_lattice_spectrum(4, &c4, &params).is_ok());

    let mut c = GaugeCoupling::zero(4).unwrap();
    c.set_chiral_phase(2, 3, 1, 0.5);
    assert_eq!(c.chiral_phase(2, 3, 1), 0.5);
    assert_eq!(c.chiral_phase(6, 7, 1), 0.5); // indices wrap
    assert_eq!(c.em_phase(2, 3, 1), 0.0);
}

#[test]
fn bond_modulation_moves_the_valleys_apart() {
    let l = 15;
    let delta = 0.35;
    let params = p(1.0, 1.0, 0.0);
    let (sk, skp) = valley_shift(l, delta, &params).unwrap();

    assert!((sk + skp).norm() < 1e-9, "shifts not opposite: {sk:?} {skp:?}");
    assert!(sk.y.abs() < 1e-9);
    assert!(sk.x > 0.3, "shift too small: {}", sk.x);

    // the weight maximum lands on the grid momentum nearest the displaced
    // band-touching point, whose x coordinate solves
    // cos(sqrt(3) kx / 2) = -(t + delta) / (2 t - delta)
    let exact = 2.0 / 3.0f64.sqrt() * (-(1.0 + delta) / (2.0 - delta)).acos()
        - params.dirac_momentum().x;
    let step = params.reciprocal_vectors()[0].x / l as f64;
    assert!((sk.x - exact).abs() < 0.5 * step);

    let snapped = 4.0 * PI / (l as f64 * 3.0f64.sqrt());
    assert!((sk.x - snapped).abs() < 1e-6);

    let (z1, z2) = valley_shift(l, 0.0, &params).unwrap();
    assert!(z1.norm() < 1e-9 && z2.norm() < 1e-9);

    assert!(valley_shift(l, 1.5, &params).is_err());
    assert!(valley_shift(l, f64::NAN, &params).is_err());
}
