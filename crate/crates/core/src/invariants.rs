//! The invariant polynomials `tau_m^(k)` of a skeleton and their coordinates
//! in the invariant monomial basis.
//!
//! * `k = 0`: `sum_v <v, x>^m` over vertices.
//! * `k = 1`: `sum [v:e] h_m(<v, x>, <e, x>)` over vertex-edge incidences.
//! * `k = 2`: `sum [v:e][e:f] h_m(<v, x>, <e, x>, <f, x>)` over flags.
//!
//! Here `<e, x>` and `<f, x>` use the feet of the edge and face. The volume
//! problem `k = 3` shares its solution space with `k = 2`, so it is routed to
//! the face sums.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{EdgeKind, Family, SolidInstance, VertexKind};
use crate::group::Group;
use crate::linalg;
use crate::poly::{complete_symmetric_series, e2, e3, e4, e6, LinearForm, Monomial, Polynomial};
use crate::scalar::{Real, Scalar};

/// Weights for the face sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FaceWeights {
    /// `[v:e][e:f]` as computed from the geometry.
    Raw,
    /// Raw weights times a positive factor depending on `r` only, chosen so
    /// the products become rational functions of `r`.
    #[default]
    Normalized,
}

fn form<S: Scalar>(p: &[S; 3]) -> LinearForm<S> {
    LinearForm(p.clone())
}

/// Vertex sums, split into base vertices and apexes, for degrees `0..=max_m`.
pub fn tau_vertex_components<S: Scalar>(inst: &SolidInstance<S>, max_m: u32) -> [Vec<Polynomial<S>>; 2] {
    let mut out: [Vec<Polynomial<S>>; 2] = std::array::from_fn(|_| vec![Polynomial::zero(); max_m as usize + 1]);
    for v in &inst.vertices {
        let slot = match v.kind {
            VertexKind::Base => 0,
            VertexKind::Apex => 1,
        };
        let f = form(&v.point);
        let mut power = Polynomial::one();
        for acc in out[slot].iter_mut() {
            *acc = &*acc + &power;
            power = power.times_linear(&f);
        }
    }
    out
}

pub fn tau_vertex<S: Scalar>(inst: &SolidInstance<S>, m: u32) -> Polynomial<S> {
    let [base, apex] = tau_vertex_components(inst, m);
    &base[m as usize] + &apex[m as usize]
}

fn ve_type<S>(inst: &SolidInstance<S>, v: usize, e: usize) -> usize {
    match (inst.vertices[v].kind, inst.edges[e].kind) {
        (VertexKind::Base, EdgeKind::BaseBase) => 0,
        (VertexKind::Base, EdgeKind::BaseApex) => 1,
        _ => 2,
    }
}

/// Unweighted edge sums per vertex-edge type, for degrees `0..=max_m`.
pub fn tau_edge_components<S: Scalar>(inst: &SolidInstance<S>, max_m: u32) -> Result<[Vec<Polynomial<S>>; 3]> {
    let mut out: [Vec<Polynomial<S>>; 3] = std::array::from_fn(|_| vec![Polynomial::zero(); max_m as usize + 1]);
    for (e, edge) in inst.edges.iter().enumerate() {
        for &v in &edge.ends {
            let t = ve_type(inst, v, e);
            let series = complete_symmetric_series(max_m, &[form(&inst.vertices[v].point), form(&edge.foot)])?;
            for (m, h) in series.iter().enumerate() {
                out[t][m] = &out[t][m] + h;
            }
        }
    }
    Ok(out)
}

/// Unweighted flag sums per flag type, for degrees `0..=max_m`.
pub fn tau_face_components<S: Scalar>(inst: &SolidInstance<S>, max_m: u32) -> Result<[Vec<Polynomial<S>>; 3]> {
    let mut out: [Vec<Polynomial<S>>; 3] = std::array::from_fn(|_| vec![Polynomial::zero(); max_m as usize + 1]);
    for flag in &inst.flags {
        let forms = [
            form(&inst.vertices[flag.vertex].point),
            form(&inst.edges[flag.edge].foot),
            form(&inst.faces[flag.face].foot),
        ];
        let series = complete_symmetric_series(max_m, &forms)?;
        let t = flag.kind as usize - 1;
        for (m, h) in series.iter().enumerate() {
            out[t][m] = &out[t][m] + h;
        }
    }
    Ok(out)
}

/// Factor turning raw face weights into the normalized ones.
pub fn normalization_factor<S: Real>(family: Family, r: &S) -> S {
    let r2 = r.clone() * r;
    let q = match family {
        Family::TriakisTetra => S::from_i64(2) * (r2 - S::from_i64(2) * r + S::from_i64(3)),
        Family::TriakisOcta => S::from_i64(2) * r2 - S::from_i64(4) * r + S::from_i64(3),
    };
    (S::from_i64(3) / q).sqrt()
}

/// Vertex-edge weights `[ve1, ve2, ve3]`.
pub fn edge_weights<S: Real>(inst: &SolidInstance<S>) -> Result<[S; 3]> {
    let inc = inst.incidence_numbers()?;
    Ok([inc.ve1, inc.ve2, inc.ve3])
}

/// Flag weights `[ve1 ef1, ve2 ef2, ve3 ef2]`.
pub fn face_weights<S: Real>(inst: &SolidInstance<S>, weights: FaceWeights) -> Result<[S; 3]> {
    let inc = inst.incidence_numbers()?;
    let raw = [inc.ve1 * &inc.ef1, inc.ve2 * &inc.ef2, inc.ve3 * &inc.ef2];
    Ok(match weights {
        FaceWeights::Raw => raw,
        FaceWeights::Normalized => {
            let c = normalization_factor(inst.family, &inst.r);
            raw.map(|w| w * &c)
        }
    })
}

fn combine<S: Scalar>(components: &[Vec<Polynomial<S>>], weights: &[S], m: usize) -> Polynomial<S> {
    components
        .iter()
        .zip(weights)
        .fold(Polynomial::zero(), |acc, (c, w)| acc + c[m].scale(w))
}

/// `tau_m^(k)` for `m = 0..=max_m`.
pub fn tau_series<S: Real>(inst: &SolidInstance<S>, k: u8, max_m: u32, weights: FaceWeights) -> Result<Vec<Polynomial<S>>> {
    let range = 0..=max_m as usize;
    match k {
        0 => {
            let [base, apex] = tau_vertex_components(inst, max_m);
            Ok(range.map(|m| &base[m] + &apex[m]).collect())
        }
        1 => {
            let comps = tau_edge_components(inst, max_m)?;
            let w = edge_weights(inst)?;
            Ok(range.map(|m| combine(&comps, &w, m)).collect())
        }
        2 | 3 => {
            let comps = tau_face_components(inst, max_m)?;
            let w = face_weights(inst, weights)?;
            Ok(range.map(|m| combine(&comps, &w, m)).collect())
        }
        _ => Err(Error::BadSkeletonDimension(k)),
    }
}

pub fn tau_edge<S: Real>(inst: &SolidInstance<S>, m: u32) -> Result<Polynomial<S>> {
    Ok(tau_series(inst, 1, m, FaceWeights::Raw)?.swap_remove(m as usize))
}

pub fn tau_face<S: Real>(inst: &SolidInstance<S>, m: u32, weights: FaceWeights) -> Result<Polynomial<S>> {
    Ok(tau_series(inst, 2, m, weights)?.swap_remove(m as usize))
}

/// Generators of the invariant ring of a reflection group.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantBasis<S> {
    pub group: Group,
    pub generators: [Polynomial<S>; 3],
    pub names: [&'static str; 3],
    pub weights: [u32; 3],
}

impl<S: Scalar> InvariantBasis<S> {
    /// `e2, e3, e4` for A3 and `e2, e4, e6` for B3.
    pub fn new(group: Group) -> Self {
        match group {
            Group::A3 => InvariantBasis {
                group,
                generators: [e2(), e3(), e4()],
                names: ["e2", "e3", "e4"],
                weights: [2, 3, 4],
            },
            Group::B3 => InvariantBasis {
                group,
                generators: [e2(), e4(), e6()],
                names: ["e2", "e4", "e6"],
                weights: [2, 4, 6],
            },
        }
    }

    /// Exponent triples of the basis monomials of degree `d`: ascending in
    /// the power of `e2`, ties broken by descending order of the rest. The
    /// first key carries the coefficient called `a`, then `b`, `c`, `d`.
    pub fn keys(&self, d: u32) -> Vec<[u32; 3]> {
        let w = self.weights;
        let mut keys = Vec::new();
        for i in 0..=d / w[0] {
            for j in 0..=(d - i * w[0]) / w[1] {
                let rest = d - i * w[0] - j * w[1];
                if rest.is_multiple_of(w[2]) {
                    keys.push([i, j, rest / w[2]]);
                }
            }
        }
        keys.sort_by(|a, b| a[0].cmp(&b[0]).then_with(|| (b[1], b[2]).cmp(&(a[1], a[2]))));
        keys
    }

    pub fn monomial(&self, key: &[u32; 3]) -> Polynomial<S> {
        (0..3).fold(Polynomial::one(), |acc, i| &acc * &self.generators[i].pow(key[i]))
    }

    pub fn key_name(&self, key: &[u32; 3]) -> String {
        let parts: Vec<String> = (0..3)
            .filter(|&i| key[i] > 0)
            .map(|i| {
                if key[i] == 1 {
                    self.names[i].to_string()
                } else {
                    format!("{}^{}", self.names[i], key[i])
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Coordinates of a homogeneous invariant in the monomials of an
/// [`InvariantBasis`], listed in the order of [`InvariantBasis::keys`].
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantDecomposition<S> {
    pub group: Group,
    pub degree: u32,
    pub coefficients: Vec<([u32; 3], S)>,
}

impl<S: Scalar> InvariantDecomposition<S> {
    /// Coefficient number `i` (`0` is `a`, `1` is `b`, ...), zero if the
    /// degree has fewer basis monomials.
    pub fn named(&self, i: usize) -> S {
        self.coefficients.get(i).map(|(_, c)| c.clone()).unwrap_or_else(S::zero)
    }

    pub fn get(&self, key: &[u32; 3]) -> Option<&S> {
        self.coefficients.iter().find(|(k, _)| k == key).map(|(_, c)| c)
    }

    pub fn reconstruct(&self, basis: &InvariantBasis<S>) -> Polynomial<S> {
        self.coefficients
            .iter()
            .fold(Polynomial::zero(), |acc, (k, c)| acc + basis.monomial(k).scale(c))
    }
}

/// Writes the degree-`degree` polynomial `f` in the invariant basis.
///
/// `f` must be homogeneous of that degree (or zero) and invariant under the
/// basis group, with coefficients compared at absolute tolerance `tol`.
pub fn decompose<S: Scalar>(
    f: &Polynomial<S>,
    degree: u32,
    basis: &InvariantBasis<S>,
    tol: f64,
) -> Result<InvariantDecomposition<S>> {
    if !f.is_zero() && f.homogeneous_degree() != Some(degree) {
        return Err(Error::NotHomogeneous);
    }
    basis.group.check_invariant(f, tol)?;
    let keys = basis.keys(degree);
    let monomials = Monomial::of_degree(degree);
    let columns: Vec<Vec<S>> = keys.iter().map(|k| basis.monomial(k).to_dense(&monomials)).collect();
    let rows: Vec<Vec<S>> = (0..monomials.len())
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect();
    let rhs = f.to_dense(&monomials);
    let solution = linalg::solve(&rows, &rhs, keys.len(), tol).ok_or_else(|| Error::NotInvariant {
        group: format!("invariant ring of {}", basis.group),
        monomial: "(no solution)".into(),
        residual: f.max_abs_coefficient().to_text(),
    })?;
    let dec = InvariantDecomposition {
        group: basis.group,
        degree,
        coefficients: keys.into_iter().zip(solution).collect(),
    };
    let residual = &dec.reconstruct(basis) - f;
    if let Some((m, c)) = residual.terms().find(|(_, c)| !c.is_negligible(tol)) {
        return Err(Error::NotInvariant {
            group: format!("invariant ring of {}", basis.group),
            monomial: m.to_string(),
            residual: c.to_text(),
        });
    }
    Ok(dec)
}

/// `(k, m)` pairs with a closed form for the first coefficient `a_m^(k)`.
pub fn closed_form_degrees(family: Family) -> [u32; 4] {
    match family {
        Family::TriakisTetra => [2, 3, 4, 6],
        Family::TriakisOcta => [2, 4, 6, 8],
    }
}

fn poly_at<S: Scalar>(coeffs: &[i64], r: &S) -> S {
    coeffs
        .iter()
        .rev()
        .fold(S::zero(), |acc, &c| acc * r + S::from_i64(c))
}

/// Closed form of the leading coefficient `a_m^(k)` as a function of `r`.
///
/// Polynomials are written with ascending coefficient lists. Face problems
/// use the normalized weights.
pub fn coefficient_closed_form<S: Real>(family: Family, k: u8, m: u32, r: &S) -> Result<S> {
    let q = |n: i64, d: i64| S::from_ratio(n, d);
    let p = |c: &[i64]| poly_at(c, r);
    let sqrt2 = S::from_i64(2).sqrt();
    let none = || Error::NoClosedForm {
        family: family.to_string(),
        k,
        m,
    };
    // The volume problem shares the face sums.
    let k = if k == 3 { 2 } else { k };
    let value = match family {
        Family::TriakisTetra => {
            let root = (S::from_i64(3) * p(&[9, -2, 1])).sqrt();
            match (k, m) {
                (0, 2) => q(4, 9) * p(&[9, 0, 1]),
                (0, 3) => q(8, 9) * p(&[3, -1]) * p(&[9, 3, 1]),
                (0, 4) => q(16, 81) * p(&[81, 0, 0, 0, 1]),
                (0, 6) => q(64, 243) * p(&[9, 0, 1]) * p(&[81, 0, -9, 0, 1]),
                (1, 2) => S::from_i64(20) * &sqrt2 + q(4, 9) * p(&[9, 1, 1]) * root,
                (1, 3) => S::from_i64(96) * &sqrt2 + q(8, 9) * p(&[3, -1]) * p(&[9, 4, 1]) * root,
                (1, 4) => S::from_i64(48) * &sqrt2 + q(16, 81) * p(&[81, 9, -3, 1, 1]) * root,
                (1, 6) => S::from_i64(768) * &sqrt2 + q(64, 243) * p(&[729, 81, -27, -18, -3, 1, 1]) * root,
                (2, 2) => q(8, 3) * p(&[15, 2, 1]),
                (2, 3) => q(16, 3) * p(&[3, -1]) * p(&[12, 5, 1]),
                (2, 4) => q(32, 27) * p(&[81, 0, -3, 2, 1]),
                (2, 6) => q(128, 81) * p(&[972, 81, -54, -27, -3, 2, 1]),
                _ => return Err(none()),
            }
        }
        Family::TriakisOcta => {
            let root = (S::from_i64(3) * p(&[3, -2, 1])).sqrt();
            match (k, m) {
                (0, 2) => q(8, 9) * p(&[0, 0, 1]) + S::from_i64(2),
                (0, 4) => q(32, 81) * (p(&[0, 0, 0, 0, 1]) - q(81, 8)),
                (0, 6) => q(2, 243) * p(&[9, 0, 4]) * p(&[81, 0, -36, 0, 16]),
                (0, 8) => q(128, 6561) * p(&[0, 0, 0, 0, 0, 0, 0, 0, 1]) + S::from_i64(4),
                (1, 2) => S::from_i64(8) * &sqrt2 + q(8, 9) * p(&[3, 1, 1]) * root,
                (1, 4) => -S::from_i64(12) * &sqrt2 + q(16, 81) * p(&[-27, -9, 0, 2, 2]) * root,
                (1, 6) => S::from_i64(12) * &sqrt2 + q(8, 243) * p(&[243, 81, 0, -18, 0, 16, 16]) * root,
                (1, 8) => {
                    S::from_i64(12) * &sqrt2
                        + q(16, 6561) * p(&[2187, 729, 0, -162, -108, -36, 0, 8, 8]) * root
                }
                (2, 2) => q(8, 3) * p(&[6, 2, 1]),
                (2, 4) => q(8, 27) * p(&[-81, -18, 6, 8, 4]),
                (2, 6) => q(8, 81) * p(&[243, 0, -54, -18, 24, 32, 16]),
                (2, 8) => q(8, 2187) * p(&[6561, 1458, -486, -648, -324, -72, 24, 32, 16]),
                _ => return Err(none()),
            }
        }
    };
    Ok(value)
}

/// Relative tolerance for [`decompose_series`]: the sums cancel heavily at
/// large `r`, so this sits a few decades above the rounding level.
pub fn decomposition_tolerance<S: Scalar>() -> f64 {
    1e9 * S::noise_floor()
}

/// Decompositions of `tau_m^(k)` for `m = 1..=max_m`. The tolerance is
/// relative to the largest coefficient of each `tau_m^(k)`.
pub fn decompose_series<S: Real>(
    inst: &SolidInstance<S>,
    k: u8,
    max_m: u32,
    weights: FaceWeights,
    tol: f64,
) -> Result<Vec<(u32, InvariantDecomposition<S>)>> {
    let basis = InvariantBasis::new(inst.family.base_group());
    let taus = tau_series(inst, k, max_m, weights)?;
    (1..=max_m)
        .map(|m| {
            let scale = taus[m as usize].max_abs_coefficient().to_f64().max(1.0);
            decompose(&taus[m as usize], m, &basis, tol * scale).map(|d| (m, d))
        })
        .collect()
}
