//! Solution spaces of invariant PDE systems `phi(d) f = 0`.
//!
//! Each homogeneous slice is the kernel of a finite matrix, so a space is
//! computed degree by degree and stored as a [`GradedBasis`].

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Family, SolidInstance};
use crate::group::Group;
use crate::invariants::{decompose_series, decomposition_tolerance, FaceWeights, InvariantDecomposition};
use crate::linalg::{rank, rref};
use crate::poly::{delta_a3, delta_b3, e2, e3, e4, e6, jumped_generator, Monomial, Polynomial};
use crate::scalar::{Rational, Real, Scalar};

/// Falling factorial `n (n-1) ... (n-k+1)` as a scalar.
fn falling<S: Scalar>(n: u32, k: u32) -> S {
    ((n - k + 1)..=n).fold(S::one(), |acc, v| acc * S::from_i64(v as i64))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdeSystem<S> {
    pub generators: Vec<Polynomial<S>>,
}

impl<S: Scalar> PdeSystem<S> {
    /// Every generator must be homogeneous of degree at least one.
    pub fn new(generators: Vec<Polynomial<S>>) -> Result<Self> {
        for g in &generators {
            match g.homogeneous_degree() {
                Some(d) if d >= 1 => {}
                _ => return Err(Error::NotHomogeneous),
            }
        }
        Ok(PdeSystem { generators })
    }

    /// Matrix of `f -> (phi(d) f)_phi` on degree-`d` polynomials, one row per
    /// generator and target monomial, one column per source monomial.
    fn slice_matrix(&self, d: u32) -> (Vec<Monomial>, Vec<Vec<S>>) {
        let columns = Monomial::of_degree(d);
        let mut rows = Vec::new();
        for phi in &self.generators {
            let k = phi.homogeneous_degree().expect("checked at construction");
            if k > d {
                continue;
            }
            let targets = Monomial::of_degree(d - k);
            let index: BTreeMap<Monomial, usize> = targets.iter().enumerate().map(|(i, m)| (*m, i)).collect();
            let mut block = vec![vec![S::zero(); columns.len()]; targets.len()];
            for (j, beta) in columns.iter().enumerate() {
                for (alpha, c) in phi.terms() {
                    if !alpha.divides(beta) {
                        continue;
                    }
                    let e = beta.exponents();
                    let a = alpha.exponents();
                    let rest = Monomial::new(e[0] - a[0], e[1] - a[1], e[2] - a[2]);
                    let factor = (0..3).fold(c.clone(), |acc, i| acc * falling::<S>(e[i], a[i]));
                    block[index[&rest]][j] += factor;
                }
            }
            rows.extend(block);
        }
        (columns, rows)
    }
}

impl PdeSystem<Rational> {
    pub fn standard(kind: SpaceKind) -> Self {
        let gens = match kind {
            SpaceKind::A3 => vec![e2(), e3(), e4()],
            SpaceKind::B3 => vec![e2(), e4(), e6()],
            SpaceKind::Jumped => vec![e2(), e6(), e4().pow(2)],
        };
        PdeSystem::new(gens).expect("standard generators are homogeneous")
    }
}

/// The three solution spaces that occur for triakis solids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SpaceKind {
    /// Harmonics of W(A3): `e2(d) f = e3(d) f = e4(d) f = 0`.
    #[serde(rename = "A3Space")]
    A3,
    /// Harmonics of W(B3): `e2(d) f = e4(d) f = e6(d) f = 0`.
    #[serde(rename = "B3Space")]
    B3,
    /// `e2(d) f = e6(d) f = e4(d)^2 f = 0`.
    #[serde(rename = "JumpedSpace")]
    Jumped,
}

impl SpaceKind {
    pub fn label(self) -> &'static str {
        match self {
            SpaceKind::A3 => "A3Space",
            SpaceKind::B3 => "B3Space",
            SpaceKind::Jumped => "JumpedSpace",
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            SpaceKind::A3 => 24,
            SpaceKind::B3 => 48,
            SpaceKind::Jumped => 96,
        }
    }

    /// Degree of the module generator.
    pub fn top_degree(self) -> u32 {
        match self {
            SpaceKind::A3 => 6,
            SpaceKind::B3 => 9,
            SpaceKind::Jumped => 13,
        }
    }

    pub fn generator_name(self) -> &'static str {
        match self {
            SpaceKind::A3 => "delta_a3",
            SpaceKind::B3 => "delta_b3",
            SpaceKind::Jumped => "F",
        }
    }

    pub fn generator<S: Scalar>(self) -> Polynomial<S> {
        match self {
            SpaceKind::A3 => delta_a3(),
            SpaceKind::B3 => delta_b3(),
            SpaceKind::Jumped => jumped_generator(),
        }
    }

    /// Harmonics of `group`.
    pub fn of_group(group: Group) -> Self {
        match group {
            Group::A3 => SpaceKind::A3,
            Group::B3 => SpaceKind::B3,
        }
    }
}

impl std::str::FromStr for SpaceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a3" | "a3space" => Ok(SpaceKind::A3),
            "b3" | "b3space" => Ok(SpaceKind::B3),
            "jumped" | "jumpedspace" | "sol" => Ok(SpaceKind::Jumped),
            _ => Err(Error::Parse(format!("unknown space {s:?} (expected a3, b3 or jumped)"))),
        }
    }
}

/// Per-degree bases of a graded space of polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedBasis<S> {
    pub per_degree: BTreeMap<u32, Vec<Polynomial<S>>>,
    pub max_degree_checked: u32,
}

impl<S: Scalar> GradedBasis<S> {
    pub fn total_dim(&self) -> usize {
        self.per_degree.values().map(Vec::len).sum()
    }

    pub fn dim(&self, d: u32) -> usize {
        self.per_degree.get(&d).map_or(0, Vec::len)
    }

    /// Dimensions for degrees `0..=max_degree_checked`.
    pub fn dims(&self) -> Vec<usize> {
        (0..=self.max_degree_checked).map(|d| self.dim(d)).collect()
    }

    pub fn top_degree(&self) -> Option<u32> {
        self.per_degree.iter().rev().find(|(_, b)| !b.is_empty()).map(|(d, _)| *d)
    }

    pub fn elements(&self) -> impl Iterator<Item = &Polynomial<S>> {
        self.per_degree.values().flatten()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> GradedBasis<T> {
        GradedBasis {
            per_degree: self
                .per_degree
                .iter()
                .map(|(d, b)| (*d, b.iter().map(|p| p.map(f)).collect()))
                .collect(),
            max_degree_checked: self.max_degree_checked,
        }
    }

    /// Basis restricted to degrees `<= d`.
    pub fn truncated(&self, d: u32) -> Self {
        GradedBasis {
            per_degree: self.per_degree.range(..=d).map(|(k, v)| (*k, v.clone())).collect(),
            max_degree_checked: d.min(self.max_degree_checked),
        }
    }
}

/// Reduced row echelon form of the span of `polys`, all of degree `d`.
fn canonical_span<S: Scalar>(polys: &[Polynomial<S>], d: u32, tol: f64) -> Vec<Polynomial<S>> {
    let monomials: Vec<Monomial> = Monomial::of_degree(d);
    let rows: Vec<Vec<S>> = polys.iter().map(|p| p.to_dense(&monomials)).collect();
    let red = rref(rows, monomials.len(), tol);
    red.rows.iter().map(|r| Polynomial::from_dense(&monomials, r)).collect()
}

/// Kernel of the system on each homogeneous slice of degree `<= max_degree`.
/// `tol` is the absolute pivot tolerance (unused for exact scalars).
pub fn solve<S: Scalar>(system: &PdeSystem<S>, max_degree: u32, tol: f64) -> GradedBasis<S> {
    let mut per_degree = BTreeMap::new();
    for d in 0..=max_degree {
        let (columns, rows) = system.slice_matrix(d);
        let kernel = if rows.is_empty() {
            (0..columns.len())
                .map(|j| {
                    let mut v = vec![S::zero(); columns.len()];
                    v[j] = S::one();
                    v
                })
                .collect()
        } else {
            rref(rows, columns.len(), tol).null_space()
        };
        let basis: Vec<Polynomial<S>> = kernel.iter().map(|v| Polynomial::from_dense(&columns, v)).collect();
        per_degree.insert(d, canonical_span(&basis, d, tol));
    }
    GradedBasis {
        per_degree,
        max_degree_checked: max_degree,
    }
}

/// Span of all derivatives `d^alpha g`, graded by degree, up to `max_degree`.
pub fn module_span<S: Scalar>(generator: &Polynomial<S>, max_degree: u32, tol: f64) -> Result<GradedBasis<S>> {
    let mut per_degree = BTreeMap::new();
    if generator.is_zero() {
        return Ok(GradedBasis {
            per_degree: (0..=max_degree).map(|d| (d, Vec::new())).collect(),
            max_degree_checked: max_degree,
        });
    }
    let top = generator.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    for d in 0..=max_degree {
        let polys: Vec<Polynomial<S>> = if d > top {
            Vec::new()
        } else {
            Monomial::of_degree(top - d)
                .iter()
                .map(|alpha| generator.derivative(alpha))
                .collect()
        };
        per_degree.insert(d, canonical_span(&polys, d, tol));
    }
    Ok(GradedBasis {
        per_degree,
        max_degree_checked: max_degree,
    })
}

/// True when the two bases span the same space in every degree up to the
/// smaller of their checked ranges.
pub fn same_spaces<S: Scalar>(a: &GradedBasis<S>, b: &GradedBasis<S>, tol: f64) -> bool {
    let top = a.max_degree_checked.min(b.max_degree_checked);
    (0..=top).all(|d| {
        let empty = Vec::new();
        let pa = a.per_degree.get(&d).unwrap_or(&empty);
        let pb = b.per_degree.get(&d).unwrap_or(&empty);
        canonical_span(pa, d, tol) == canonical_span(pb, d, tol)
    })
}

/// Exact solution space of a standard system, with a guard band of two
/// degrees beyond the generator. Computed once per process.
pub fn standard_space(kind: SpaceKind) -> &'static GradedBasis<Rational> {
    static A3: OnceLock<GradedBasis<Rational>> = OnceLock::new();
    static B3: OnceLock<GradedBasis<Rational>> = OnceLock::new();
    static JUMPED: OnceLock<GradedBasis<Rational>> = OnceLock::new();
    let cell = match kind {
        SpaceKind::A3 => &A3,
        SpaceKind::B3 => &B3,
        SpaceKind::Jumped => &JUMPED,
    };
    cell.get_or_init(|| solve(&PdeSystem::standard(kind), kind.top_degree() + 2, 0.0))
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactSequenceReport {
    pub sol_dims: Vec<usize>,
    pub h_b3_dims: Vec<usize>,
    pub kernel_dims: Vec<usize>,
    pub image_dims: Vec<usize>,
    pub sol_dim: usize,
    pub kernel_dim: usize,
    pub image_dim: usize,
}

/// Checks `0 -> H_B3 -> Sol -> H_B3 -> 0` with the last map `e4(d)`.
pub fn verify_exact_sequence(max_degree: u32) -> Result<ExactSequenceReport> {
    let max_degree = max_degree.max(SpaceKind::Jumped.top_degree());
    let sol = solve(&PdeSystem::standard(SpaceKind::Jumped), max_degree, 0.0);
    let hb3 = solve(&PdeSystem::standard(SpaceKind::B3), max_degree, 0.0);
    let e4p = e4::<Rational>();
    let fail = |degree, what: &str, defect| {
        Err(Error::ExactSequence {
            degree,
            what: what.to_string(),
            defect,
        })
    };
    let mut kernel_dims = Vec::new();
    let mut image_dims = Vec::new();
    for d in 0..=max_degree {
        let s = sol.per_degree[&d].clone();
        let h = hb3.per_degree[&d].clone();
        let monomials = Monomial::of_degree(d);
        let dense = |ps: &[Polynomial<Rational>]| ps.iter().map(|p| p.to_dense(&monomials)).collect::<Vec<_>>();

        let mut union = dense(&s);
        union.extend(dense(&h));
        let inclusion_defect = rank(union, monomials.len(), 0.0) - s.len();
        if inclusion_defect > 0 {
            return fail(d, "H_B3 is not contained in Sol", inclusion_defect);
        }

        let images: Vec<Polynomial<Rational>> = s.iter().map(|f| Polynomial::apply_operator(&e4p, f)).collect();
        let image_dim = if d >= 4 {
            let target = Monomial::of_degree(d - 4);
            let img_rows: Vec<Vec<Rational>> = images.iter().map(|p| p.to_dense(&target)).collect();
            let image_rank = rank(img_rows.clone(), target.len(), 0.0);
            let h_low = &hb3.per_degree[&(d - 4)];
            let mut with_h = img_rows;
            with_h.extend(h_low.iter().map(|p| p.to_dense(&target)));
            let outside = rank(with_h, target.len(), 0.0) - h_low.len();
            if outside > 0 {
                return fail(d, "e4(d) maps Sol outside H_B3", outside);
            }
            image_rank
        } else {
            0
        };

        // Kernel of e4(d) on Sol: coordinate vectors c with sum c_i e4(d) s_i = 0.
        let kernel: Vec<Polynomial<Rational>> = if d >= 4 && !s.is_empty() {
            let target = Monomial::of_degree(d - 4);
            let cols: Vec<Vec<Rational>> = images.iter().map(|p| p.to_dense(&target)).collect();
            let rows: Vec<Vec<Rational>> = (0..target.len())
                .map(|i| cols.iter().map(|c| c[i].clone()).collect())
                .collect();
            rref(rows, s.len(), 0.0)
                .null_space()
                .iter()
                .map(|c| {
                    c.iter()
                        .zip(&s)
                        .fold(Polynomial::zero(), |acc, (ci, si)| acc + si.scale(ci))
                })
                .collect()
        } else {
            s.clone()
        };
        if canonical_span(&kernel, d, 0.0) != canonical_span(&h, d, 0.0) {
            let defect = kernel.len().abs_diff(h.len()).max(1);
            return fail(d, "kernel of e4(d) on Sol differs from H_B3", defect);
        }
        kernel_dims.push(kernel.len());
        image_dims.push(image_dim);
    }
    let report = ExactSequenceReport {
        sol_dims: sol.dims(),
        h_b3_dims: hb3.dims(),
        sol_dim: sol.total_dim(),
        kernel_dim: kernel_dims.iter().sum(),
        image_dim: image_dims.iter().sum(),
        kernel_dims,
        image_dims,
    };
    if report.image_dim != 48 {
        return fail(max_degree, "image of e4(d) does not have dimension 48", report.image_dim.abs_diff(48));
    }
    if report.sol_dim != 96 {
        return fail(max_degree, "dim Sol is not 96", report.sol_dim.abs_diff(96));
    }
    Ok(report)
}

/// Thresholds for zero / nonzero decisions on float coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// A coefficient is zero when `|a| <= zero_factor * noise_floor * (1 + |a_2|)`.
    pub zero_factor: f64,
    /// A coefficient is nonzero when `|a| >= nonzero`.
    pub nonzero: f64,
    /// `tau(d) f` counts as zero when every coefficient is below
    /// `annihilation * |tau| * |f|`, raised to `zero_factor` times the
    /// rounding level at low precision.
    pub annihilation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            zero_factor: 1e6,
            nonzero: 1e-8,
            annihilation: 1e-18,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Zero,
    Nonzero,
}

#[derive(Debug, Clone, Serialize)]
pub struct Evidence {
    pub name: String,
    pub value: String,
    pub value_f64: f64,
    pub verdict: Sign,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub family: Family,
    pub k: u8,
    pub r: String,
    pub space: SpaceKind,
    pub dimension: usize,
    pub generator: &'static str,
    /// Symmetry group of the skeleton `P(k)` at this `r`.
    pub group: Group,
    /// True when the polyhedral harmonics are strictly larger than the
    /// harmonics of the symmetry group.
    pub critical: bool,
    pub evidence: Vec<Evidence>,
    /// See [`annihilation_residual`].
    pub annihilation_residual: f64,
    pub max_tau_degree: u32,
}

fn classify<S: Real>(name: &str, a: &S, a2: &S, tol: &Tolerances) -> Result<Evidence> {
    let v = a.to_f64();
    let zero_band = tol.zero_factor * S::noise_floor() * (1.0 + a2.to_f64().abs());
    let verdict = if v.abs() <= zero_band {
        Sign::Zero
    } else if v.abs() >= tol.nonzero {
        Sign::Nonzero
    } else {
        return Err(Error::Indeterminate {
            coefficient: name.to_string(),
            value: a.to_text(),
            zero_tol: zero_band,
            nonzero_tol: tol.nonzero,
        });
    };
    Ok(Evidence {
        name: name.to_string(),
        value: a.to_text(),
        value_f64: v,
        verdict,
    })
}

/// Largest residual of `tau_m(d) f` over `f` in `basis` and `m >= 1`,
/// relative to `max_m |tau_m| * |f|`. Measuring against the largest `tau`
/// keeps the odd sums, which vanish up to rounding, from dominating.
pub fn annihilation_residual<S: Real>(taus: &[Polynomial<S>], basis: &GradedBasis<S>) -> f64 {
    let scale = taus
        .iter()
        .skip(1)
        .map(|t| t.max_abs_coefficient().to_f64())
        .fold(0.0f64, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let mut worst = 0.0f64;
    for tau in taus.iter().skip(1) {
        for f in basis.elements() {
            let out = Polynomial::apply_operator(tau, f);
            let rel = out.max_abs_coefficient().to_f64() / (scale * f.max_abs_coefficient().to_f64());
            worst = worst.max(rel);
        }
    }
    worst
}

/// Identifies the polyhedral harmonic space of `P(k)` at parameter `r`.
///
/// The leading coefficients of `tau_2, ..., tau_8` decide between the three
/// candidate systems; the claimed space is then checked to be annihilated by
/// every `tau_m(d)` with `m <= max_tau_degree`.
pub fn equivalence_check<S: Real>(
    family: Family,
    k: u8,
    r: S,
    max_tau_degree: u32,
    tol: &Tolerances,
) -> Result<EquivalenceReport> {
    if k > 3 {
        return Err(Error::BadSkeletonDimension(k));
    }
    let inst = SolidInstance::build(family, r.clone())?;
    let max_m = max_tau_degree.max(8);
    let decs = decompose_series(&inst, k, max_m, FaceWeights::Normalized, decomposition_tolerance::<S>())?;
    let a = |m: u32| -> &InvariantDecomposition<S> { &decs[m as usize - 1].1 };
    let a2 = a(2).named(0);
    let ev = |m: u32| classify(&format!("a{m}"), &a(m).named(0), &a2, tol);
    let nonzero = |e: &Evidence| e.verdict == Sign::Nonzero;

    let (space, evidence) = match family {
        Family::TriakisTetra => {
            let (e2_, e3_, e4_, e6_) = (ev(2)?, ev(3)?, ev(4)?, ev(6)?);
            let space = if nonzero(&e2_) && nonzero(&e3_) && nonzero(&e4_) {
                SpaceKind::A3
            } else if !nonzero(&e3_) && nonzero(&e2_) && nonzero(&e4_) && nonzero(&e6_) {
                SpaceKind::B3
            } else {
                return Err(Error::Undecided(format!("tetra k={k}: a2, a3, a4, a6 = {}, {}, {}, {}", e2_.value, e3_.value, e4_.value, e6_.value)));
            };
            (space, vec![e2_, e3_, e4_, e6_])
        }
        Family::TriakisOcta => {
            let (e2_, e4_, e6_, e8_) = (ev(2)?, ev(4)?, ev(6)?, ev(8)?);
            let space = if nonzero(&e2_) && nonzero(&e4_) && nonzero(&e6_) {
                SpaceKind::B3
            } else if !nonzero(&e4_) && nonzero(&e2_) && nonzero(&e6_) && nonzero(&e8_) {
                SpaceKind::Jumped
            } else {
                return Err(Error::Undecided(format!("octa k={k}: a2, a4, a6, a8 = {}, {}, {}, {}", e2_.value, e4_.value, e6_.value, e8_.value)));
            };
            (space, vec![e2_, e4_, e6_, e8_])
        }
    };

    let taus = crate::invariants::tau_series(&inst, k, max_tau_degree, FaceWeights::Normalized)?;
    let basis = standard_space(space).map(S::from_rational);
    let residual = annihilation_residual(&taus, &basis);
    let bound = tol.annihilation.max(tol.zero_factor * S::noise_floor());
    if residual > bound {
        return Err(Error::CheckFailed(format!(
            "tau(d) does not annihilate {} (relative residual {residual:e})",
            space.label()
        )));
    }
    let group = inst.skeleton_group(k, 1e3 * S::noise_floor().max(1e-30))?;
    Ok(EquivalenceReport {
        family,
        k,
        r: r.to_text(),
        space,
        dimension: space.dimension(),
        generator: space.generator_name(),
        group,
        critical: space.dimension() > SpaceKind::of_group(group).dimension(),
        evidence,
        annihilation_residual: residual,
        max_tau_degree,
    })
}
