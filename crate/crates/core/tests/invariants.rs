use num_traits::Zero;
use polyharm::geometry::{dot, Family, Point, SolidInstance};
use polyharm::group::Group;
use polyharm::invariants::{
    closed_form_degrees, coefficient_closed_form, decompose, normalization_factor, tau_series, tau_vertex, FaceWeights,
    InvariantBasis,
};
use polyharm::{Float100, Rational, Scalar};
use proptest::prelude::*;

type F = Float100;

const SAMPLES: [[i64; 3]; 6] = [[1, 0, 0], [1, 1, 0], [1, 1, 1], [1, 2, 0], [1, 2, 3], [2, -1, 1]];

/// `h_m` of the given numbers: the sum of all monomials of degree `m`.
fn h(m: u32, xs: &[F]) -> F {
    match xs {
        [] => {
            if m == 0 {
                F::from_i64(1)
            } else {
                F::zero()
            }
        }
        [first, rest @ ..] => {
            let mut total = F::zero();
            let mut power = F::from_i64(1);
            for i in 0..=m {
                total += power.clone() * h(m - i, rest);
                power *= first;
            }
            total
        }
    }
}

/// `tau_m^(k)(x)` straight from the definition, with every incidence number
/// computed per pair instead of per type.
fn tau_pointwise(inst: &SolidInstance<F>, k: u8, m: u32, x: &Point<F>) -> F {
    let v = |i: usize| dot(&inst.vertices[i].point, x);
    let mut total = F::zero();
    match k {
        0 => {
            for i in 0..inst.vertices.len() {
                total += h(m, &[v(i)]);
            }
        }
        1 => {
            for (e, edge) in inst.edges.iter().enumerate() {
                for &i in &edge.ends {
                    let w = inst.incidence_ve(i, e).unwrap();
                    total += w * h(m, &[v(i), dot(&edge.foot, x)]);
                }
            }
        }
        _ => {
            let c = normalization_factor(inst.family, &inst.r);
            for fl in &inst.flags {
                let w = inst.incidence_ve(fl.vertex, fl.edge).unwrap() * inst.incidence_ef(fl.edge, fl.face).unwrap();
                let forms = [v(fl.vertex), dot(&inst.edges[fl.edge].foot, x), dot(&inst.faces[fl.face].foot, x)];
                total += w * &c * h(m, &forms);
            }
        }
    }
    total
}

fn point(p: [i64; 3]) -> Point<F> {
    p.map(F::from_i64)
}

/// The basis invariants evaluated at a point, from their definitions.
fn generator_values(group: Group, x: &Point<F>) -> [F; 3] {
    let sq = x.clone().map(|c| c.clone() * c);
    let e2 = sq[0].clone() + &sq[1] + &sq[2];
    let e3 = x[0].clone() * &x[1] * &x[2];
    let e4 = sq[1].clone() * &sq[2] + sq[2].clone() * &sq[0] + sq[0].clone() * &sq[1];
    match group {
        Group::A3 => [e2, e3, e4],
        Group::B3 => [e2, e4, e3.clone() * e3],
    }
}

/// Least squares solution of `rows * c = rhs` through the normal equations.
fn least_squares(rows: &[Vec<F>], rhs: &[F]) -> Vec<F> {
    let n = rows[0].len();
    let mut a: Vec<Vec<F>> = (0..n)
        .map(|i| {
            let mut row: Vec<F> = (0..n)
                .map(|j| rows.iter().fold(F::zero(), |s, r| s + r[i].clone() * &r[j]))
                .collect();
            row.push(rows.iter().zip(rhs).fold(F::zero(), |s, (r, b)| s + r[i].clone() * b));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&p, &q| a[p][col].abs().partial_cmp(&a[q][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        let pivot_row = a[col].clone();
        for (row, target) in a.iter_mut().enumerate() {
            if row != col {
                let factor = target[col].clone() / &pivot_row[col];
                for (t, p) in target.iter_mut().zip(&pivot_row).skip(col) {
                    *t -= p.clone() * &factor;
                }
            }
        }
    }
    (0..n).map(|i| a[i][n].clone() / &a[i][i]).collect()
}

/// Coordinates of `tau_m^(k)` in the invariant monomials, recovered from
/// point values only.
fn coefficients_from_samples(inst: &SolidInstance<F>, k: u8, m: u32) -> Vec<F> {
    let group = inst.family.base_group();
    let keys = InvariantBasis::<F>::new(group).keys(m);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for s in SAMPLES {
        let x = point(s);
        let g = generator_values(group, &x);
        rows.push(
            keys.iter()
                .map(|key| (0..3).fold(F::from_i64(1), |acc, i| acc * g[i].clone().pow_u32(key[i])))
                .collect(),
        );
        rhs.push(tau_pointwise(inst, k, m, &x));
    }
    least_squares(&rows, &rhs)
}

trait PowU32 {
    fn pow_u32(self, n: u32) -> Self;
}

impl PowU32 for F {
    fn pow_u32(self, n: u32) -> Self {
        (0..n).fold(F::from_i64(1), |acc, _| acc * &self)
    }
}

const GRID: [(i64, i64); 9] = [(1, 2), (1, 1), (3, 2), (2, 1), (5, 2), (3, 1), (4, 1), (5, 1), (9, 1)];

fn relative_gap(a: &F, b: &F) -> f64 {
    (a.clone() - b).abs().to_f64() / (1.0 + b.to_f64().abs())
}

#[test]
fn assembled_tau_matches_pointwise_definition() {
    let x = [F::from_ratio(3, 7), F::from_ratio(-5, 11), F::from_ratio(2, 3)];
    for family in Family::ALL {
        for r in [F::from_ratio(5, 2), F::from_ratio(7, 4)] {
            let inst = SolidInstance::build(family, r).unwrap();
            for k in 0..=2u8 {
                let taus = tau_series(&inst, k, 8, FaceWeights::Normalized).unwrap();
                for m in 0..=8u32 {
                    let got = taus[m as usize].evaluate(&x);
                    let want = tau_pointwise(&inst, k, m, &x);
                    assert!(relative_gap(&got, &want) < 1e-25, "{family:?} k={k} m={m}");
                }
            }
        }
    }
}

#[test]
fn closed_forms_match_sampled_coefficients() {
    for family in Family::ALL {
        for (n, d) in GRID {
            let r = F::from_ratio(n, d);
            let inst = SolidInstance::build(family, r.clone()).unwrap();
            for k in 0..=3u8 {
                for m in closed_form_degrees(family) {
                    let sampled = coefficients_from_samples(&inst, k.min(2), m);
                    let closed = coefficient_closed_form(family, k, m, &r).unwrap();
                    let gap = relative_gap(&sampled[0], &closed);
                    assert!(gap < 1e-20, "{family:?} k={k} m={m} r={n}/{d}: {gap:e}");
                }
            }
        }
    }
}

#[test]
fn tetra_vertex_quadratic_from_norms() {
    // Every quadratic invariant is a multiple of e2, with factor sum |v|^2 / 3.
    for (n, d) in GRID {
        let r = Rational::from_ratio(n, d);
        let inst = SolidInstance::build(Family::TriakisTetra, r.clone()).unwrap();
        let norms = inst.vertices.iter().fold(Rational::zero(), |s, v| s + dot(&v.point, &v.point));
        let want = norms / Rational::from_i64(3);
        let tau2 = tau_vertex(&inst, 2);
        let dec = decompose(&tau2, 2, &InvariantBasis::new(Group::A3), 0.0).unwrap();
        assert_eq!(dec.named(0), want);
        let closed = Rational::from_i64(4) * (Rational::from_i64(9) + r.clone() * &r) / Rational::from_i64(9);
        assert_eq!(want, closed);
    }
}

#[test]
fn odd_octa_sums_vanish() {
    let inst = SolidInstance::build(Family::TriakisOcta, F::from_ratio(7, 3)).unwrap();
    for k in 0..=2u8 {
        let taus = tau_series(&inst, k, 7, FaceWeights::Normalized).unwrap();
        for m in [1, 3, 5, 7] {
            assert!(taus[m].max_abs_coefficient().to_f64() < 1e-25, "k={k} m={m}");
        }
    }
}

fn positive_rational() -> impl Strategy<Value = (i64, i64)> {
    (1i64..=60, 1i64..=12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn vertex_sums_decompose_exactly((n, d) in positive_rational(), fam in 0usize..2) {
        let family = Family::ALL[fam];
        let inst = SolidInstance::build(family, Rational::from_ratio(n, d)).unwrap();
        let basis = InvariantBasis::new(family.base_group());
        for m in 1..=8u32 {
            let tau = tau_vertex(&inst, m);
            let dec = decompose(&tau, m, &basis, 0.0).unwrap();
            prop_assert_eq!(dec.reconstruct(&basis), tau);
        }
    }

    #[test]
    fn tau_is_group_invariant_and_homogeneous(
        (n, d) in positive_rational(),
        fam in 0usize..2,
        k in 0u8..3,
        x in prop::array::uniform3(-20i64..=20),
        lambda in 1i64..=5,
    ) {
        let family = Family::ALL[fam];
        let inst = SolidInstance::build(family, F::from_ratio(n, d)).unwrap();
        let taus = tau_series(&inst, k, 6, FaceWeights::Normalized).unwrap();
        let p = x.map(|c| F::from_ratio(c, 7));
        let scaled = p.clone().map(|c| c * F::from_i64(lambda));
        for m in 2..=6u32 {
            let tau = &taus[m as usize];
            let base = tau.evaluate(&p);
            let size = tau.max_abs_coefficient().to_f64().max(1.0) * 1e3;
            for g in family.base_group().elements() {
                let moved = tau.evaluate(&g.apply(&p));
                prop_assert!((moved - &base).abs().to_f64() < 1e-24 * size);
            }
            let factor = (0..m).fold(F::from_i64(1), |acc, _| acc * F::from_i64(lambda));
            let homogeneous = tau.evaluate(&scaled) - base * factor;
            prop_assert!(homogeneous.abs().to_f64() < 1e-20 * size);
        }
    }
}
