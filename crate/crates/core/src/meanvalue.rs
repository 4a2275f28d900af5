//! Mean value property over scaled skeletons `x + rho P(k)`.
//!
//! Integrals over the skeleton are computed once as normalized moments
//! `m_alpha = (1/|P|) int y^alpha`; the mean of a polynomial over the scaled,
//! translated skeleton then follows from the binomial expansion of
//! `(x + rho y)^beta`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{add, cross, det, norm, scale, sub, Family, Point, SolidInstance};
use crate::harmonic::{standard_space, SpaceKind};
use crate::poly::{e2, Monomial, Polynomial};
use crate::scalar::Real;

/// Seed for centers and radii of the sampled balls.
pub const SEED: u64 = 0x6d65_616e;

/// Gauss-Legendre rule with `n` nodes on `[0, 1]`, exact up to degree `2n - 1`.
pub fn gauss_legendre<S: Real>(n: usize) -> (Vec<S>, Vec<S>) {
    let two = S::from_i64(2);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 1..=n {
        let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut x = S::from_f64(guess);
        let mut dp = S::one();
        // Newton on P_n from the asymptotic guess.
        for _ in 0..(S::precision_bits() / 4 + 8) {
            let (p, d) = legendre(n, &x);
            dp = d.clone();
            let step = p / d;
            x -= &step;
            if step.to_f64().abs() < S::noise_floor() {
                let (_, d) = legendre(n, &x);
                dp = d;
                break;
            }
        }
        let w = two.clone() / ((S::one() - x.clone() * &x) * dp.clone() * &dp);
        nodes.push((S::one() - x) / &two);
        weights.push(w / &two);
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre<S: Real>(n: usize, x: &S) -> (S, S) {
    let mut p0 = S::one();
    let mut p1 = x.clone();
    for j in 2..=n {
        let jj = S::from_i64(j as i64);
        let p2 = ((S::from_i64(2 * j as i64 - 1)) * x.clone() * &p1 - S::from_i64(j as i64 - 1) * &p0) / &jj;
        p0 = p1;
        p1 = p2;
    }
    let d = S::from_i64(n as i64) * (x.clone() * &p1 - &p0) / (x.clone() * x - S::one());
    (p1, d)
}

/// Weighted nodes for the natural measure on `P(k)`: counting measure on
/// vertices, length on edges, area on faces, volume on the solid.
///
/// The solid is stored as cones from the origin over its faces. A monomial
/// of degree `d` integrates over the cone on `p` as `int_0^1 s^(d+2) ds = 1/(d+3)`
/// times its value at `p`, so only face nodes are kept.
#[derive(Debug, Clone)]
pub struct Quadrature<S> {
    pub nodes: Vec<Point<S>>,
    pub weights: Vec<S>,
    pub cone: bool,
}

/// Nodes per direction; 8 keeps the collapsed rules exact through degree 13.
pub const RULE_POINTS: usize = 8;

impl<S: Real> Quadrature<S> {
    pub fn skeleton(inst: &SolidInstance<S>, k: u8) -> Result<Self> {
        let (t, w) = gauss_legendre::<S>(RULE_POINTS);
        let mut q = Quadrature::empty(k == 3);
        let pt = |i: usize| inst.vertices[i].point.clone();
        match k {
            0 => {
                for v in &inst.vertices {
                    q.push(v.point.clone(), S::one());
                }
            }
            1 => {
                for e in &inst.edges {
                    let (a, b) = (pt(e.ends[0]), pt(e.ends[1]));
                    let d = sub(&b, &a);
                    let len = norm(&d);
                    for (ti, wi) in t.iter().zip(&w) {
                        q.push(add(&a, &scale(ti, &d)), wi.clone() * &len);
                    }
                }
            }
            2 => {
                for f in &inst.faces {
                    let [a, b, c] = f.vertices.map(pt);
                    let area2 = norm(&cross(&sub(&b, &a), &sub(&c, &a)));
                    q.push_triangle(&a, &b, &c, &area2, &t, &w);
                }
            }
            3 => {
                // Signed determinants keep this valid for nonconvex solids.
                for f in &inst.faces {
                    let [a, b, c] = f.vertices.map(pt);
                    q.push_triangle(&a, &b, &c, &det(&a, &b, &c), &t, &w);
                }
            }
            _ => return Err(Error::BadSkeletonDimension(k)),
        }
        Ok(q)
    }

    fn empty(cone: bool) -> Self {
        Quadrature {
            nodes: Vec::new(),
            weights: Vec::new(),
            cone,
        }
    }

    /// Factor applied to the node sum of a degree `d` monomial.
    fn degree_factor(&self, d: u32) -> S {
        if self.cone {
            S::from_ratio(1, d as i64 + 3)
        } else {
            S::one()
        }
    }

    fn push(&mut self, node: Point<S>, weight: S) {
        self.nodes.push(node);
        self.weights.push(weight);
    }

    /// Collapsed rule on a triangle: `a + s (b - a) + s t (c - b)` has
    /// Jacobian `area2 * s`.
    fn push_triangle(&mut self, a: &Point<S>, b: &Point<S>, c: &Point<S>, area2: &S, t: &[S], w: &[S]) {
        let (ab, bc) = (sub(b, a), sub(c, b));
        for (si, wsi) in t.iter().zip(w) {
            let base = add(a, &scale(si, &ab));
            for (ti, wti) in t.iter().zip(w) {
                let st = si.clone() * ti;
                self.push(add(&base, &scale(&st, &bc)), area2.clone() * si * wsi * wti);
            }
        }
    }

    pub fn measure(&self) -> S {
        self.weights.iter().fold(S::zero(), |acc, w| acc + w) * self.degree_factor(0)
    }

    pub fn integrate(&self, f: &Polynomial<S>) -> S {
        let mut total = S::zero();
        for (m, c) in f.terms() {
            let mono = Polynomial::term(*m, S::one());
            let sum = self
                .nodes
                .iter()
                .zip(&self.weights)
                .fold(S::zero(), |acc, (n, w)| acc + mono.evaluate(n) * w);
            total += sum * c * self.degree_factor(m.degree());
        }
        total
    }

    /// Normalized moments of every monomial up to `max_degree`.
    pub fn moments(&self, max_degree: u32) -> Moments<S> {
        let measure = self.measure();
        let d = max_degree as usize;
        // Dense table indexed by exponents (a, b, c) with a + b + c <= d.
        let idx = |a: usize, b: usize, c: usize| (a * (d + 1) + b) * (d + 1) + c;
        let mut sums = vec![S::zero(); (d + 1).pow(3)];
        for (node, w) in self.nodes.iter().zip(&self.weights) {
            let powers: [Vec<S>; 3] = std::array::from_fn(|i| {
                let mut v = Vec::with_capacity(d + 1);
                v.push(S::one());
                for j in 0..d {
                    let next = v[j].clone() * &node[i];
                    v.push(next);
                }
                v
            });
            for a in 0..=d {
                let wa = powers[0][a].clone() * w;
                for b in 0..=d - a {
                    let wab = wa.clone() * &powers[1][b];
                    for c in 0..=d - a - b {
                        sums[idx(a, b, c)] += wab.clone() * &powers[2][c];
                    }
                }
            }
        }
        let values = Monomial::up_to_degree(max_degree)
            .into_iter()
            .map(|m| {
                let [a, b, c] = m.0.map(|e| e as usize);
                let v = sums[idx(a, b, c)].clone() * self.degree_factor(m.degree()) / &measure;
                (m, v)
            })
            .collect();
        Moments {
            measure,
            max_degree,
            values,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Moments<S> {
    pub measure: S,
    pub max_degree: u32,
    /// `(1/|P|) int y^alpha`.
    pub values: BTreeMap<Monomial, S>,
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

impl<S: Real> Moments<S> {
    /// Mean of `f` over `x + rho P`.
    pub fn mean(&self, f: &Polynomial<S>, x: &Point<S>, rho: &S) -> Result<S> {
        if f.degree().unwrap_or(0) > self.max_degree {
            return Err(Error::CheckFailed(format!(
                "moments known to degree {}, polynomial has degree {}",
                self.max_degree,
                f.degree().unwrap_or(0)
            )));
        }
        let pow = |base: &S, e: u32| (0..e).fold(S::one(), |acc, _| acc * base);
        let mut total = S::zero();
        for (beta, c) in f.terms() {
            for a0 in 0..=beta.0[0] {
                for a1 in 0..=beta.0[1] {
                    for a2 in 0..=beta.0[2] {
                        let alpha = [a0, a1, a2];
                        let mut term = c.clone() * &self.values[&Monomial(alpha)] * pow(rho, a0 + a1 + a2);
                        for i in 0..3 {
                            term = term
                                * S::from_i64(binomial(beta.0[i], alpha[i]))
                                * pow(&x[i], beta.0[i] - alpha[i]);
                        }
                        total += term;
                    }
                }
            }
        }
        Ok(total)
    }

    /// `mean - f(x)` over `x + rho P`.
    pub fn defect(&self, f: &Polynomial<S>, x: &Point<S>, rho: &S) -> Result<S> {
        Ok(self.mean(f, x, rho)? - f.evaluate(x))
    }
}

/// `|P(k)|`: vertex count, total edge length, total face area or volume.
pub fn skeleton_measure<S: Real>(inst: &SolidInstance<S>, k: u8) -> Result<S> {
    Ok(Quadrature::skeleton(inst, k)?.measure())
}

/// `|mean of f over x + rho P(k)| - f(x)|`.
pub fn mean_value_defect<S: Real>(inst: &SolidInstance<S>, k: u8, f: &Polynomial<S>, x: &Point<S>, rho: &S) -> Result<S> {
    let moments = Quadrature::skeleton(inst, k)?.moments(f.degree().unwrap_or(0));
    Ok(moments.defect(f, x, rho)?.abs())
}

/// Five seeded centers in `[-1, 1]^3`.
pub fn sample_centers<S: Real>() -> Vec<Point<S>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..5)
        .map(|_| std::array::from_fn(|_| S::from_ratio(rng.random_range(-1000..=1000), 1000)))
        .collect()
}

pub fn sample_radii<S: Real>() -> [S; 3] {
    [S::from_ratio(1, 2), S::one(), S::from_i64(2)]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    /// Members must stay below this defect.
    pub pass: f64,
    /// Counterexamples must exceed this defect.
    pub fail: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { pass: 1e-9, fail: 1e-4 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ElementDefect {
    pub id: String,
    pub degree: u32,
    pub max_defect: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleDefect {
    pub name: String,
    pub min_defect: f64,
    pub rejected: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DefectReport {
    pub family: Family,
    pub k: u8,
    pub r: String,
    pub space: SpaceKind,
    /// `|P(k)|`.
    pub measure: String,
    pub centers: Vec<[String; 3]>,
    pub radii: Vec<String>,
    pub elements: Vec<ElementDefect>,
    pub max_defect: f64,
    pub counterexamples: Vec<CounterexampleDefect>,
    pub thresholds: Thresholds,
    pub note: Option<String>,
    pub passed: bool,
}

impl DefectReport {
    pub fn members_pass(&self) -> bool {
        self.max_defect < self.thresholds.pass
    }

    pub fn counterexamples_rejected(&self) -> bool {
        self.counterexamples.iter().all(|c| c.rejected)
    }
}

fn coincident_faces_note<S: Real>(family: Family, r: &S) -> Option<String> {
    let near = |v: i64| (r.to_f64() - v as f64).abs() < 1e-12;
    if near(1) || (family == Family::TriakisTetra && near(3)) {
        Some("coincident faces are counted with multiplicity".into())
    } else {
        None
    }
}

/// Checks the mean value property for every basis element of `space` on
/// `P(k)` at the seeded centers and radii. `e2` is always tested as a
/// counterexample, together with any in `extra`.
pub fn verify_space<S: Real>(
    family: Family,
    k: u8,
    r: S,
    space: SpaceKind,
    extra: &[(String, Polynomial<S>)],
    thresholds: Thresholds,
) -> Result<DefectReport> {
    let inst = SolidInstance::build(family, r.clone())?;
    let quad = Quadrature::skeleton(&inst, k)?;
    let basis = standard_space(space).map(S::from_rational);
    let mut counter: Vec<(String, Polynomial<S>)> = vec![("e2".into(), e2())];
    counter.extend(extra.iter().cloned());
    let max_degree = counter
        .iter()
        .filter_map(|(_, f)| f.degree())
        .chain(basis.top_degree())
        .max()
        .unwrap_or(0);
    let moments = quad.moments(max_degree);
    let centers = sample_centers::<S>();
    let radii = sample_radii::<S>();
    let defects = |f: &Polynomial<S>| -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(centers.len() * radii.len());
        for x in &centers {
            for rho in &radii {
                out.push(moments.defect(f, x, rho)?.abs().to_f64());
            }
        }
        Ok(out)
    };
    let mut elements = Vec::new();
    for (d, fs) in &basis.per_degree {
        for (i, f) in fs.iter().enumerate() {
            let worst = defects(f)?.into_iter().fold(0.0, f64::max);
            elements.push(ElementDefect {
                id: format!("{d}.{i}"),
                degree: *d,
                max_defect: worst,
            });
        }
    }
    let counterexamples = counter
        .iter()
        .map(|(name, f)| {
            let least = defects(f)?.into_iter().fold(f64::INFINITY, f64::min);
            Ok(CounterexampleDefect {
                name: name.clone(),
                min_defect: least,
                rejected: least > thresholds.fail,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_defect = elements.iter().map(|e| e.max_defect).fold(0.0, f64::max);
    let mut report = DefectReport {
        family,
        k,
        r: r.to_text(),
        space,
        measure: moments.measure.to_text(),
        centers: centers.iter().map(|c| c.clone().map(|v| v.to_text())).collect(),
        radii: radii.iter().map(|v| v.to_text()).collect(),
        elements,
        max_defect,
        counterexamples,
        thresholds,
        note: coincident_faces_note(family, &r),
        passed: false,
    };
    report.passed = report.members_pass() && report.counterexamples_rejected();
    Ok(report)
}
