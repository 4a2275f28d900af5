//! Labeled skeletons of triakis tetrahedra and octahedra.
//!
//! A solid is built from a regular base polyhedron by raising a pyramid over
//! each base face, with apex at `r` times the face centroid. The combinatorial
//! complex is the same for every `r > 0`; coplanar or coincident faces at
//! special values of `r` are never merged.
//!
//! Every face of every dimension carries its foot of perpendicular: the point
//! of its affine hull closest to the origin.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Group, SignedPermutation};
use crate::scalar::{Real, Scalar};

pub type Point<S> = [S; 3];

pub fn add<S: Scalar>(a: &Point<S>, b: &Point<S>) -> Point<S> {
    std::array::from_fn(|i| a[i].clone() + &b[i])
}

pub fn sub<S: Scalar>(a: &Point<S>, b: &Point<S>) -> Point<S> {
    std::array::from_fn(|i| a[i].clone() - &b[i])
}

pub fn scale<S: Scalar>(c: &S, a: &Point<S>) -> Point<S> {
    std::array::from_fn(|i| c.clone() * &a[i])
}

pub fn dot<S: Scalar>(a: &Point<S>, b: &Point<S>) -> S {
    a[0].clone() * &b[0] + a[1].clone() * &b[1] + a[2].clone() * &b[2]
}

pub fn cross<S: Scalar>(a: &Point<S>, b: &Point<S>) -> Point<S> {
    [
        a[1].clone() * &b[2] - a[2].clone() * &b[1],
        a[2].clone() * &b[0] - a[0].clone() * &b[2],
        a[0].clone() * &b[1] - a[1].clone() * &b[0],
    ]
}

pub fn det<S: Scalar>(a: &Point<S>, b: &Point<S>, c: &Point<S>) -> S {
    dot(a, &cross(b, c))
}

pub fn norm<S: Real>(a: &Point<S>) -> S {
    dot(a, a).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    #[serde(rename = "tetra")]
    TriakisTetra,
    #[serde(rename = "octa")]
    TriakisOcta,
}

impl Family {
    pub const ALL: [Family; 2] = [Family::TriakisTetra, Family::TriakisOcta];

    pub fn short_name(self) -> &'static str {
        match self {
            Family::TriakisTetra => "tetra",
            Family::TriakisOcta => "octa",
        }
    }

    /// Symmetry group for generic `r`.
    pub fn base_group(self) -> Group {
        match self {
            Family::TriakisTetra => Group::A3,
            Family::TriakisOcta => Group::B3,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tetra" | "triakis-tetra" | "tetrahedron" => Ok(Family::TriakisTetra),
            "octa" | "triakis-octa" | "octahedron" => Ok(Family::TriakisOcta),
            _ => Err(Error::UnsupportedFamily(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    Base,
    Apex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    BaseBase,
    BaseApex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex<S> {
    pub label: String,
    pub kind: VertexKind,
    pub point: Point<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge<S> {
    pub label: String,
    pub kind: EdgeKind,
    pub ends: [usize; 2],
    pub foot: Point<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Face<S> {
    pub label: String,
    /// Vertex indices in outward cyclic order (base, base, apex).
    pub vertices: [usize; 3],
    pub edges: [usize; 3],
    pub foot: Point<S>,
}

/// Flag types: 1 = base vertex on a base edge, 2 = base vertex on an apex
/// edge, 3 = apex on an apex edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Flag {
    pub vertex: usize,
    pub edge: usize,
    pub face: usize,
    pub kind: u8,
}

/// One incidence number per type, in the sign convention of
/// [`SolidInstance::incidence_ve`] and [`SolidInstance::incidence_ef`].
#[derive(Debug, Clone, PartialEq)]
pub struct IncidenceNumbers<S> {
    pub ve1: S,
    pub ve2: S,
    pub ve3: S,
    pub ef1: S,
    pub ef2: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolidInstance<S> {
    pub family: Family,
    pub r: S,
    pub vertices: Vec<Vertex<S>>,
    pub edges: Vec<Edge<S>>,
    pub faces: Vec<Face<S>>,
    pub flags: Vec<Flag>,
}

struct Combinatorics {
    base: Vec<(String, [i64; 3])>,
    /// Per apex: label and the outward-ordered base triangle below it.
    apexes: Vec<(String, [usize; 3])>,
}

fn tetra_combinatorics() -> Combinatorics {
    let base: Vec<(String, [i64; 3])> = vec![
        ("A".into(), [1, -1, -1]),
        ("B".into(), [-1, 1, -1]),
        ("C".into(), [-1, -1, 1]),
        ("D".into(), [1, 1, 1]),
    ];
    let apexes = (0..4)
        .map(|s| {
            let others: Vec<usize> = (0..4).filter(|&t| t != s).collect();
            let label = base[s].0.to_lowercase();
            (label, [others[0], others[1], others[2]])
        })
        .collect();
    Combinatorics { base, apexes }
}

fn octa_combinatorics() -> Combinatorics {
    let mut base = Vec::new();
    for (axis, name) in ["A", "B", "C"].iter().enumerate() {
        for (sign, tag) in [(1, "+"), (-1, "-")] {
            let mut p = [0; 3];
            p[axis] = sign;
            base.push((format!("{name}{tag}"), p));
        }
    }
    let mut apexes = Vec::new();
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                let tag = |i: usize| if i == 0 { '+' } else { '-' };
                let label = format!("D{}{}{}", tag(a), tag(b), tag(c));
                apexes.push((label, [a, 2 + b, 4 + c]));
            }
        }
    }
    Combinatorics { base, apexes }
}

fn integer_det(a: [i64; 3], b: [i64; 3], c: [i64; 3]) -> i64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

impl<S: Scalar> SolidInstance<S> {
    /// Builds the solid at parameter `r > 0`.
    pub fn build(family: Family, r: S) -> Result<Self> {
        if r <= S::zero() {
            return Err(Error::NonPositiveParameter(r.to_text()));
        }
        let comb = match family {
            Family::TriakisTetra => tetra_combinatorics(),
            Family::TriakisOcta => octa_combinatorics(),
        };
        let mut vertices: Vec<Vertex<S>> = comb
            .base
            .iter()
            .map(|(label, p)| Vertex {
                label: label.clone(),
                kind: VertexKind::Base,
                point: p.map(S::from_i64),
            })
            .collect();
        let nbase = vertices.len();
        let third = r.clone() / S::from_i64(3);
        let mut triangles = Vec::new();
        for (label, tri) in &comb.apexes {
            let sum = tri.iter().fold([S::zero(), S::zero(), S::zero()], |acc, &i| {
                add(&acc, &vertices[i].point)
            });
            vertices.push(Vertex {
                label: label.clone(),
                kind: VertexKind::Apex,
                point: scale(&third, &sum),
            });
            let [x, mut y, mut z] = *tri;
            if integer_det(comb.base[x].1, comb.base[y].1, comb.base[z].1) < 0 {
                std::mem::swap(&mut y, &mut z);
            }
            triangles.push([x, y, z]);
        }

        let mut edges: Vec<Edge<S>> = Vec::new();
        let edge_index = |i: usize, j: usize, edges: &mut Vec<Edge<S>>, vertices: &[Vertex<S>]| -> Result<usize> {
            let (i, j) = (i.min(j), i.max(j));
            if let Some(k) = edges.iter().position(|e| e.ends == [i, j]) {
                return Ok(k);
            }
            let kind = if j < nbase {
                EdgeKind::BaseBase
            } else {
                EdgeKind::BaseApex
            };
            let label = format!("{}{}", vertices[i].label, vertices[j].label);
            let foot = line_foot(&vertices[i].point, &vertices[j].point).ok_or_else(|| Error::DegenerateNormal(label.clone()))?;
            edges.push(Edge {
                label,
                kind,
                ends: [i, j],
                foot,
            });
            Ok(edges.len() - 1)
        };

        // Base edges first, in label order, so that edge numbering does not
        // depend on the apex enumeration.
        for i in 0..nbase {
            for j in (i + 1)..nbase {
                let adjacent = triangles.iter().any(|t| t.contains(&i) && t.contains(&j));
                if adjacent {
                    edge_index(i, j, &mut edges, &vertices)?;
                }
            }
        }

        let mut faces = Vec::new();
        for (n, tri) in triangles.iter().enumerate() {
            let apex = nbase + n;
            for k in 0..3 {
                let (p, q) = (tri[k], tri[(k + 1) % 3]);
                let (lo, hi) = (p.min(q), p.max(q));
                let label = format!("{}{}{}", vertices[lo].label, vertices[hi].label, vertices[apex].label);
                let e_base = edge_index(p, q, &mut edges, &vertices)?;
                let e_q = edge_index(q, apex, &mut edges, &vertices)?;
                let e_p = edge_index(p, apex, &mut edges, &vertices)?;
                let foot = plane_foot(&vertices[p].point, &vertices[q].point, &vertices[apex].point)
                    .ok_or_else(|| Error::DegenerateNormal(label.clone()))?;
                faces.push(Face {
                    label,
                    vertices: [p, q, apex],
                    edges: [e_base, e_q, e_p],
                    foot,
                });
            }
        }

        let mut flags = Vec::new();
        for (f, face) in faces.iter().enumerate() {
            for &e in &face.edges {
                for &v in &edges[e].ends {
                    let kind = match (vertices[v].kind, edges[e].kind) {
                        (VertexKind::Base, EdgeKind::BaseBase) => 1,
                        (VertexKind::Base, EdgeKind::BaseApex) => 2,
                        _ => 3,
                    };
                    flags.push(Flag {
                        vertex: v,
                        edge: e,
                        face: f,
                        kind,
                    });
                }
            }
        }

        Ok(SolidInstance {
            family,
            r,
            vertices,
            edges,
            faces,
            flags,
        })
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.label == label)
    }

    pub fn edge_index(&self, label: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.label == label)
    }

    pub fn face_index(&self, label: &str) -> Option<usize> {
        self.faces.iter().position(|f| f.label == label)
    }

    /// Labels of the representative flags of types 1, 2, 3.
    pub fn representative_flags(&self) -> [(&'static str, &'static str, &'static str); 3] {
        match self.family {
            Family::TriakisTetra => [("A", "AB", "ABd"), ("A", "Ad", "ABd"), ("d", "Ad", "ABd")],
            Family::TriakisOcta => [
                ("A+", "A+B+", "A+B+D+++"),
                ("A+", "A+D+++", "A+B+D+++"),
                ("D+++", "A+D+++", "A+B+D+++"),
            ],
        }
    }

    /// Largest violation of the defining conditions of the feet: each foot
    /// lies on its affine hull and is orthogonal to every direction in it.
    pub fn foot_residual(&self) -> S {
        let mut worst = S::zero();
        let mut bump = |v: S| {
            let a = v.abs();
            if a > worst {
                worst = a;
            }
        };
        for e in &self.edges {
            let a = &self.vertices[e.ends[0]].point;
            let b = &self.vertices[e.ends[1]].point;
            let d = sub(b, a);
            bump(dot(&e.foot, &d));
            for c in cross(&sub(&e.foot, a), &d) {
                bump(c);
            }
        }
        for f in &self.faces {
            let [a, b, c] = f.vertices.map(|i| &self.vertices[i].point);
            let u = sub(b, a);
            let v = sub(c, a);
            bump(dot(&f.foot, &u));
            bump(dot(&f.foot, &v));
            bump(dot(&sub(&f.foot, a), &cross(&u, &v)));
        }
        worst
    }

    /// True when `g` maps the vertex set onto itself and the feet of the
    /// edges and faces onto feet of the same dimension.
    pub fn preserved_by(&self, g: &SignedPermutation, tol: f64) -> bool {
        let close = |p: &Point<S>, q: &Point<S>| (0..3).all(|i| (p[i].clone() - &q[i]).is_negligible(tol));
        let vertices_ok = self
            .vertices
            .iter()
            .all(|v| self.vertices.iter().any(|w| close(&g.apply(&v.point), &w.point)));
        let edges_ok = self
            .edges
            .iter()
            .all(|e| self.edges.iter().any(|o| close(&g.apply(&e.foot), &o.foot)));
        let faces_ok = self
            .faces
            .iter()
            .all(|f| self.faces.iter().any(|o| close(&g.apply(&f.foot), &o.foot)));
        vertices_ok && edges_ok && faces_ok
    }
}

/// Foot of perpendicular from the origin onto the line through `a` and `b`.
fn line_foot<S: Scalar>(a: &Point<S>, b: &Point<S>) -> Option<Point<S>> {
    let d = sub(b, a);
    let dd = dot(&d, &d);
    if dd.is_zero() {
        return None;
    }
    let t = -dot(a, &d) / dd;
    Some(add(a, &scale(&t, &d)))
}

/// Foot of perpendicular from the origin onto the plane through `a, b, c`.
fn plane_foot<S: Scalar>(a: &Point<S>, b: &Point<S>, c: &Point<S>) -> Option<Point<S>> {
    let n = cross(&sub(b, a), &sub(c, a));
    let nn = dot(&n, &n);
    if nn.is_zero() {
        return None;
    }
    let t = dot(a, &n) / nn;
    Some(scale(&t, &n))
}

impl<S: Real> SolidInstance<S> {
    /// `[v : e] = <v - foot(e), n>` where `n` is the unit vector along the
    /// edge pointing from its other endpoint towards `v`.
    pub fn incidence_ve(&self, v: usize, e: usize) -> Result<S> {
        let edge = &self.edges[e];
        let w = if edge.ends[0] == v {
            edge.ends[1]
        } else {
            edge.ends[0]
        };
        let p = &self.vertices[v].point;
        let dir = sub(p, &self.vertices[w].point);
        let len = norm(&dir);
        if len.is_zero() {
            return Err(Error::DegenerateNormal(format!("{}:{}", self.vertices[v].label, edge.label)));
        }
        Ok(dot(&sub(p, &edge.foot), &dir) / len)
    }

    /// `[e : f] = <foot(e) - foot(f), n>` where `n` is the unit vector in the
    /// plane of `f`, orthogonal to `e`, pointing away from the opposite vertex.
    pub fn incidence_ef(&self, e: usize, f: usize) -> Result<S> {
        let edge = &self.edges[e];
        let face = &self.faces[f];
        let opposite = *face
            .vertices
            .iter()
            .find(|v| !edge.ends.contains(v))
            .expect("edge belongs to face");
        let a = &self.vertices[edge.ends[0]].point;
        let d = sub(&self.vertices[edge.ends[1]].point, a);
        let t = sub(&self.vertices[opposite].point, a);
        let along = dot(&t, &d) / dot(&d, &d);
        let inward = sub(&t, &scale(&along, &d));
        let len = norm(&inward);
        if len.is_zero() {
            return Err(Error::DegenerateNormal(format!("{}:{}", edge.label, face.label)));
        }
        Ok(-dot(&sub(&edge.foot, &face.foot), &inward) / len)
    }

    pub fn incidence_numbers(&self) -> Result<IncidenceNumbers<S>> {
        let [(v1, e1, f1), (v2, e2, f2), (v3, e3, _)] = self.representative_flags();
        let idx = |found: Option<usize>, label: &str| found.ok_or_else(|| Error::CheckFailed(format!("missing label {label}")));
        let v = |l: &str| idx(self.vertex_index(l), l);
        let e = |l: &str| idx(self.edge_index(l), l);
        let f = |l: &str| idx(self.face_index(l), l);
        Ok(IncidenceNumbers {
            ve1: self.incidence_ve(v(v1)?, e(e1)?)?,
            ve2: self.incidence_ve(v(v2)?, e(e2)?)?,
            ve3: self.incidence_ve(v(v3)?, e(e3)?)?,
            ef1: self.incidence_ef(e(e1)?, f(f1)?)?,
            ef2: self.incidence_ef(e(e2)?, f(f2)?)?,
        })
    }

    /// Symmetry group of the skeleton `P(k)` as a point set.
    ///
    /// The base group always acts. The skeleton is hyperoctahedral exactly
    /// when the sign change of `x1` maps it into itself, tested on sample
    /// points of every cell. For `k = 3` the boundary surface decides.
    pub fn skeleton_group(&self, k: u8, tol: f64) -> Result<Group> {
        if self.family == Family::TriakisOcta {
            return Ok(Group::B3);
        }
        let flip = SignedPermutation {
            perm: [0, 1, 2],
            signs: [-1, 1, 1],
        };
        let preserved = match k {
            0 => self
                .vertices
                .iter()
                .all(|v| self.vertices.iter().any(|w| near(&flip.apply(&v.point), &w.point, tol))),
            1 => self.edge_samples().iter().all(|p| {
                let q = flip.apply(p);
                self.edges.iter().any(|e| self.on_segment(e, &q, tol))
            }),
            2 | 3 => self.face_samples().iter().all(|p| {
                let q = flip.apply(p);
                self.faces.iter().any(|f| self.in_triangle(f, &q, tol))
            }),
            _ => return Err(Error::BadSkeletonDimension(k)),
        };
        Ok(if preserved { Group::B3 } else { Group::A3 })
    }

    fn edge_samples(&self) -> Vec<Point<S>> {
        let ts = [S::from_ratio(1, 2), S::from_ratio(2, 7)];
        self.edges
            .iter()
            .flat_map(|e| {
                let a = &self.vertices[e.ends[0]].point;
                let b = &self.vertices[e.ends[1]].point;
                ts.iter()
                    .map(|t| add(a, &scale(t, &sub(b, a))))
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    fn face_samples(&self) -> Vec<Point<S>> {
        let bary = [(1, 1, 1, 3), (5, 3, 1, 9), (1, 2, 4, 7)];
        self.faces
            .iter()
            .flat_map(|f| {
                let [a, b, c] = f.vertices.map(|i| &self.vertices[i].point);
                bary.iter()
                    .map(|&(x, y, z, n)| {
                        let pa = scale(&S::from_ratio(x, n), a);
                        let pb = scale(&S::from_ratio(y, n), b);
                        let pc = scale(&S::from_ratio(z, n), c);
                        add(&add(&pa, &pb), &pc)
                    })
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    fn on_segment(&self, e: &Edge<S>, q: &Point<S>, tol: f64) -> bool {
        let a = &self.vertices[e.ends[0]].point;
        let d = sub(&self.vertices[e.ends[1]].point, a);
        let w = sub(q, a);
        let dd = dot(&d, &d);
        let t = dot(&w, &d) / dd.clone();
        let off = sub(&w, &scale(&t, &d));
        norm(&off).is_negligible(tol) && t.to_f64() >= -tol && t.to_f64() <= 1.0 + tol
    }

    fn in_triangle(&self, f: &Face<S>, q: &Point<S>, tol: f64) -> bool {
        let [a, b, c] = f.vertices.map(|i| &self.vertices[i].point);
        let u = sub(b, a);
        let v = sub(c, a);
        let w = sub(q, a);
        let n = cross(&u, &v);
        let nn = dot(&n, &n);
        let height = dot(&w, &n) / nn.clone().sqrt();
        if !height.is_negligible(tol) {
            return false;
        }
        let s = dot(&cross(&w, &v), &n) / nn.clone();
        let t = dot(&cross(&u, &w), &n) / nn;
        let (s, t) = (s.to_f64(), t.to_f64());
        s >= -tol && t >= -tol && s + t <= 1.0 + tol
    }

    pub fn report(&self) -> Result<GeometryReport> {
        let text = |p: &Point<S>| p.clone().map(|c| c.to_text());
        let inc = self.incidence_numbers()?;
        Ok(GeometryReport {
            family: self.family,
            r: self.r.to_text(),
            vertices: self
                .vertices
                .iter()
                .map(|v| LabeledPoint {
                    label: v.label.clone(),
                    point: text(&v.point),
                })
                .collect(),
            edge_feet: self
                .edges
                .iter()
                .map(|e| LabeledPoint {
                    label: e.label.clone(),
                    point: text(&e.foot),
                })
                .collect(),
            face_feet: self
                .faces
                .iter()
                .map(|f| LabeledPoint {
                    label: f.label.clone(),
                    point: text(&f.foot),
                })
                .collect(),
            flag_count: self.flags.len(),
            incidence: IncidenceReport {
                ve1: inc.ve1.to_text(),
                ve2: inc.ve2.to_text(),
                ve3: inc.ve3.to_text(),
                ef1: inc.ef1.to_text(),
                ef2: inc.ef2.to_text(),
            },
        })
    }
}

fn near<S: Scalar>(p: &Point<S>, q: &Point<S>, tol: f64) -> bool {
    (0..3).all(|i| (p[i].clone() - &q[i]).is_negligible(tol))
}

#[derive(Debug, Clone, Serialize)]
pub struct LabeledPoint {
    pub label: String,
    pub point: [String; 3],
}

#[derive(Debug, Clone, Serialize)]
pub struct IncidenceReport {
    pub ve1: String,
    pub ve2: String,
    pub ve3: String,
    pub ef1: String,
    pub ef2: String,
}

/// Serializable snapshot of a [`SolidInstance`].
#[derive(Debug, Clone, Serialize)]
pub struct GeometryReport {
    pub family: Family,
    pub r: String,
    pub vertices: Vec<LabeledPoint>,
    pub edge_feet: Vec<LabeledPoint>,
    pub face_feet: Vec<LabeledPoint>,
    pub flag_count: usize,
    pub incidence: IncidenceReport,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Float, Rational};

    type F = Float<100>;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn point(s: &SolidInstance<Rational>, label: &str) -> Point<Rational> {
        s.vertices[s.vertex_index(label).unwrap()].point.clone()
    }

    #[test]
    fn counts() {
        for r in [q(1, 2), q(1, 1), q(3, 2), q(3, 1), q(7, 1)] {
            let t = SolidInstance::build(Family::TriakisTetra, r.clone()).unwrap();
            assert_eq!((t.vertices.len(), t.edges.len(), t.faces.len(), t.flags.len()), (8, 18, 12, 72));
            let o = SolidInstance::build(Family::TriakisOcta, r).unwrap();
            assert_eq!((o.vertices.len(), o.edges.len(), o.faces.len(), o.flags.len()), (14, 36, 24, 144));
        }
    }

    #[test]
    fn apex_at_r_one_is_face_centroid() {
        let t = SolidInstance::build(Family::TriakisTetra, q(1, 1)).unwrap();
        assert_eq!(point(&t, "d"), [q(-1, 3), q(-1, 3), q(-1, 3)]);
    }

    #[test]
    fn rejects_non_positive_r() {
        assert!(matches!(
            SolidInstance::build(Family::TriakisTetra, q(0, 1)),
            Err(Error::NonPositiveParameter(_))
        ));
        assert!(SolidInstance::build(Family::TriakisOcta, q(-1, 2)).is_err());
    }

    #[test]
    fn edge_foot_at_r_three() {
        let t = SolidInstance::build(Family::TriakisTetra, q(3, 1)).unwrap();
        let e = &t.edges[t.edge_index("Ad").unwrap()];
        assert_eq!(e.foot, [q(0, 1), q(-1, 1), q(-1, 1)]);
    }

    #[test]
    fn flag_types_of_named_flags() {
        let t = SolidInstance::build(Family::TriakisTetra, q(2, 1)).unwrap();
        let find = |v: &str, e: &str, f: &str| {
            let (v, e, f) = (t.vertex_index(v).unwrap(), t.edge_index(e).unwrap(), t.face_index(f).unwrap());
            t.flags.iter().find(|fl| fl.vertex == v && fl.edge == e && fl.face == f).unwrap().kind
        };
        assert_eq!(find("A", "AB", "ABd"), 1);
        assert_eq!(find("A", "Ad", "ABd"), 2);
        assert_eq!(find("d", "Ad", "ABd"), 3);
        let per_type = |k| t.flags.iter().filter(|f| f.kind == k).count();
        assert_eq!((per_type(1), per_type(2), per_type(3)), (24, 24, 24));
    }

    #[test]
    fn feet_are_exact_over_rationals() {
        for fam in Family::ALL {
            for r in [q(1, 2), q(1, 1), q(3, 2), q(2, 1), q(3, 1), q(5, 1)] {
                let s = SolidInstance::build(fam, r).unwrap();
                assert_eq!(s.foot_residual(), q(0, 1));
            }
        }
    }

    #[test]
    fn outward_orientation_at_convex_parameter() {
        // At r = 2 (tetra) and r = 5/4 (octa) the solids are convex, so every
        // outward normal points away from the origin.
        for (fam, r) in [(Family::TriakisTetra, q(2, 1)), (Family::TriakisOcta, q(5, 4))] {
            let s = SolidInstance::build(fam, r).unwrap();
            for f in &s.faces {
                let [a, b, c] = f.vertices.map(|i| s.vertices[i].point.clone());
                let n = cross(&sub(&b, &a), &sub(&c, &a));
                assert!(dot(&n, &a) > q(0, 1), "{}", f.label);
            }
        }
    }

    #[test]
    fn incidence_zeros() {
        let t9 = SolidInstance::build(Family::TriakisTetra, F::from_i64(9)).unwrap();
        assert!(t9.incidence_numbers().unwrap().ve2.to_f64().abs() < 1e-25);
        let t1 = SolidInstance::build(Family::TriakisTetra, F::from_i64(1)).unwrap();
        assert!(t1.incidence_numbers().unwrap().ve3.to_f64().abs() < 1e-25);
        let o = SolidInstance::build(Family::TriakisOcta, F::from_ratio(3, 2)).unwrap();
        assert!(o.incidence_numbers().unwrap().ef1.to_f64().abs() < 1e-25);
    }

    #[test]
    fn incidence_depends_only_on_type() {
        for fam in Family::ALL {
            let s = SolidInstance::build(fam, F::from_ratio(5, 2)).unwrap();
            let inc = s.incidence_numbers().unwrap();
            for fl in &s.flags {
                let ve = s.incidence_ve(fl.vertex, fl.edge).unwrap();
                let ef = s.incidence_ef(fl.edge, fl.face).unwrap();
                let (want_ve, want_ef) = match fl.kind {
                    1 => (&inc.ve1, &inc.ef1),
                    2 => (&inc.ve2, &inc.ef2),
                    _ => (&inc.ve3, &inc.ef2),
                };
                assert!((ve - want_ve).abs().to_f64() < 1e-25);
                assert!((ef - want_ef).abs().to_f64() < 1e-25);
            }
        }
    }

    #[test]
    fn tetra_becomes_cube_symmetric_at_three() {
        let s = SolidInstance::build(Family::TriakisTetra, F::from_i64(3)).unwrap();
        assert_eq!(s.skeleton_group(0, 1e-20).unwrap(), Group::B3);
        assert_eq!(s.skeleton_group(1, 1e-20).unwrap(), Group::A3);
        assert_eq!(s.skeleton_group(2, 1e-20).unwrap(), Group::B3);
        assert_eq!(s.skeleton_group(3, 1e-20).unwrap(), Group::B3);
        let g = SolidInstance::build(Family::TriakisTetra, F::from_i64(2)).unwrap();
        for k in 0..=3 {
            assert_eq!(g.skeleton_group(k, 1e-20).unwrap(), Group::A3);
        }
        assert!(g.skeleton_group(4, 1e-20).is_err());
    }

    #[test]
    fn family_parsing() {
        assert_eq!("tetra".parse::<Family>().unwrap(), Family::TriakisTetra);
        assert_eq!("Octa".parse::<Family>().unwrap(), Family::TriakisOcta);
        assert_eq!(
            "icosa".parse::<Family>(),
            Err(Error::UnsupportedFamily("icosa".into()))
        );
    }
}
