use std::collections::BTreeSet;

use num_traits::{One, Zero};
use polyharm::geometry::{Family, Point, SolidInstance};
use polyharm::group::Group;
use polyharm::invariants::{face_weights, FaceWeights};
use polyharm::{Float100, Rational, Real, Scalar};

type F = Float100;

const GRID: [(i64, i64); 6] = [(1, 2), (1, 1), (3, 2), (2, 1), (3, 1), (5, 1)];

fn f(n: i64, d: i64) -> F {
    F::from_ratio(n, d)
}

fn close(a: &F, b: &F) -> bool {
    let scale = 1.0 + b.to_f64().abs();
    (a.clone() - b).abs().to_f64() <= 1e-12 * scale
}

fn close_point(a: &Point<F>, b: &Point<F>) -> bool {
    (0..3).all(|i| close(&a[i], &b[i]))
}

/// Hand-derived incidence numbers `[ve1, ve2, ve3, ef1, ef2]`.
fn incidence_oracle(family: Family, r: &F) -> [F; 5] {
    let one = F::one();
    let two = F::from_i64(2);
    let three = F::from_i64(3);
    let r2 = r.clone() * r;
    let q3 = r2.clone() - two.clone() * r + three.clone();
    let rr1 = r.clone() * (r.clone() - &one);
    match family {
        Family::TriakisTetra => {
            let q9 = r2 - two.clone() * r + F::from_i64(9);
            let s9 = (three.clone() * &q9).sqrt();
            [
                two.sqrt(),
                (F::from_i64(9) - r) / &s9,
                rr1.clone() / &s9,
                (three.clone() - r) / (three * &q3).sqrt(),
                two.sqrt() * rr1 / (q3 * q9).sqrt(),
            ]
        }
        Family::TriakisOcta => {
            let q2 = two.clone() * &r2 - F::from_i64(4) * r + three.clone();
            let s3 = (three.clone() * &q3).sqrt();
            [
                one / two.sqrt(),
                (three.clone() - r) / &s3,
                rr1.clone() / &s3,
                (three - two * r) / (F::from_i64(6) * &q2).sqrt(),
                rr1 / (q3 * q2).sqrt(),
            ]
        }
    }
}

#[test]
fn incidence_numbers_match_closed_forms() {
    for family in Family::ALL {
        for (n, d) in GRID {
            let r = f(n, d);
            let inst = SolidInstance::build(family, r.clone()).unwrap();
            let inc = inst.incidence_numbers().unwrap();
            let got = [inc.ve1, inc.ve2, inc.ve3, inc.ef1, inc.ef2];
            let want = incidence_oracle(family, &r);
            for (i, (g, w)) in got.iter().zip(&want).enumerate() {
                assert!(close(g, w), "{family:?} r={n}/{d} slot {i}: {} vs {}", g.to_f64(), w.to_f64());
            }
        }
    }
}

/// Normalized flag weights as rational functions of `r`.
fn flag_weight_oracle(family: Family, r: &Rational) -> [Rational; 3] {
    let q = |a: i64, b: i64, c: i64| Rational::from_i64(a) * r * r + Rational::from_i64(b) * r + Rational::from_i64(c);
    let r1 = r.clone() * (r.clone() - Rational::from_i64(1));
    match family {
        Family::TriakisTetra => {
            let (q3, q9) = (q(1, -2, 3), q(1, -2, 9));
            [
                (Rational::from_i64(3) - r) / &q3,
                (Rational::from_i64(9) - r) * &r1 / (q3.clone() * &q9),
                r1.clone() * &r1 / (q3 * q9),
            ]
        }
        Family::TriakisOcta => {
            let (q3, q2) = (q(1, -2, 3), q(2, -4, 3));
            [
                (Rational::from_i64(3) - Rational::from_i64(2) * r) / (Rational::from_i64(2) * &q2),
                (Rational::from_i64(3) - r) * &r1 / (q3.clone() * &q2),
                r1.clone() * &r1 / (q3 * q2),
            ]
        }
    }
}

#[test]
fn normalized_flag_weights_are_rational_in_r() {
    for family in Family::ALL {
        for (n, d) in GRID {
            let inst = SolidInstance::build(family, f(n, d)).unwrap();
            let got = face_weights(&inst, FaceWeights::Normalized).unwrap();
            let want = flag_weight_oracle(family, &Rational::from_ratio(n, d)).map(|w| F::from_rational(&w));
            for (g, w) in got.iter().zip(&want) {
                assert!(close(g, w), "{family:?} r={n}/{d}: {} vs {}", g.to_f64(), w.to_f64());
            }
        }
    }
}

#[test]
fn tetra_feet_closed_forms() {
    for (n, d) in GRID {
        let r = f(n, d);
        let inst = SolidInstance::build(Family::TriakisTetra, r.clone()).unwrap();
        let r2 = r.clone() * &r;
        let q9 = F::from_i64(3) * (r2.clone() - F::from_i64(2) * &r + F::from_i64(9));
        let alpha = F::from_i64(4) * &r * (r.clone() - F::from_i64(3)) / &q9;
        let beta = F::from_i64(2) * &r * (r.clone() + F::from_i64(3)) / &q9;
        let ad = &inst.edges[inst.edge_index("Ad").unwrap()].foot;
        assert!(close_point(ad, &[alpha, -beta.clone(), -beta]), "r={n}/{d}");

        let q3 = F::from_i64(3) * (r2.clone() - F::from_i64(2) * &r + F::from_i64(3));
        let gamma = F::from_i64(2) * &r2 / &q3;
        let delta = r.clone() * (r.clone() - F::from_i64(3)) / &q3;
        let abd = &inst.faces[inst.face_index("ABd").unwrap()].foot;
        assert!(close_point(abd, &[delta.clone(), delta, -gamma]), "r={n}/{d}");

        let ab = &inst.edges[inst.edge_index("AB").unwrap()].foot;
        assert!(close_point(ab, &[F::zero(), F::zero(), -F::one()]));
    }
}

#[test]
fn octa_face_foot_closed_form() {
    for (n, d) in GRID {
        let r = f(n, d);
        let inst = SolidInstance::build(Family::TriakisOcta, r.clone()).unwrap();
        let den = F::from_i64(3) * (F::from_i64(2) * &r * &r - F::from_i64(4) * &r + F::from_i64(3));
        let p = r.clone() * (F::from_i64(3) - F::from_i64(2) * &r) / &den;
        let q = r.clone() * &r / &den;
        let foot = &inst.faces[inst.face_index("A+B+D+++").unwrap()].foot;
        assert!(close_point(foot, &[q.clone(), q, p]), "r={n}/{d}");
    }
}

/// Flags rebuilt from vertex sets alone: `v` in `e` in `f`.
fn brute_force_flags<S: Scalar>(inst: &SolidInstance<S>) -> BTreeSet<(usize, usize, usize)> {
    let mut out = BTreeSet::new();
    for (fi, face) in inst.faces.iter().enumerate() {
        for (ei, edge) in inst.edges.iter().enumerate() {
            if !edge.ends.iter().all(|v| face.vertices.contains(v)) {
                continue;
            }
            for &v in &edge.ends {
                out.insert((v, ei, fi));
            }
        }
    }
    out
}

#[test]
fn flags_agree_with_brute_force_enumeration() {
    for (family, total) in [(Family::TriakisTetra, 72), (Family::TriakisOcta, 144)] {
        let inst = SolidInstance::build(family, Rational::from_ratio(5, 2)).unwrap();
        let brute = brute_force_flags(&inst);
        let listed: BTreeSet<_> = inst.flags.iter().map(|fl| (fl.vertex, fl.edge, fl.face)).collect();
        assert_eq!(brute.len(), total);
        assert_eq!(listed, brute);
        for kind in 1..=3 {
            assert_eq!(inst.flags.iter().filter(|fl| fl.kind == kind).count(), total / 3);
        }
    }
}

#[test]
fn euler_characteristic() {
    for family in Family::ALL {
        let inst = SolidInstance::build(family, Rational::from_ratio(7, 3)).unwrap();
        let chi = inst.vertices.len() as i64 - inst.edges.len() as i64 + inst.faces.len() as i64;
        assert_eq!(chi, 2);
    }
}

#[test]
fn base_group_preserves_the_skeleton() {
    for family in Family::ALL {
        for (n, d) in GRID {
            let inst = SolidInstance::build(family, Rational::from_ratio(n, d)).unwrap();
            for g in family.base_group().elements() {
                assert!(inst.preserved_by(&g, 0.0), "{family:?} r={n}/{d}");
            }
        }
    }
}

#[test]
fn generic_tetra_is_not_cube_symmetric() {
    let inst = SolidInstance::build(Family::TriakisTetra, Rational::from_ratio(5, 2)).unwrap();
    let broken = Group::B3.elements().into_iter().filter(|g| !inst.preserved_by(g, 0.0)).count();
    assert_eq!(broken, Group::B3.order() - Group::A3.order());
}

#[test]
fn report_round_trips_counts() {
    let inst = SolidInstance::build(Family::TriakisOcta, F::from_i64(2)).unwrap();
    let report = inst.report().unwrap();
    assert_eq!(report.vertices.len(), 14);
    assert_eq!(report.edge_feet.len(), 36);
    assert_eq!(report.face_feet.len(), 24);
    assert_eq!(report.flag_count, 144);
}
