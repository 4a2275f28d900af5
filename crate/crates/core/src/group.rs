//! Signed permutation groups W(A3) and W(B3) acting on `R^3`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};
use crate::scalar::Scalar;

/// The linear map `x -> (s_0 x_{p_0}, s_1 x_{p_1}, s_2 x_{p_2})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    pub perm: [usize; 3],
    pub signs: [i8; 3],
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

impl SignedPermutation {
    pub const IDENTITY: SignedPermutation = SignedPermutation {
        perm: [0, 1, 2],
        signs: [1, 1, 1],
    };

    pub fn sign_product(&self) -> i8 {
        self.signs.iter().product()
    }

    pub fn apply<S: Scalar>(&self, p: &[S; 3]) -> [S; 3] {
        std::array::from_fn(|i| {
            let v = p[self.perm[i]].clone();
            if self.signs[i] < 0 {
                -v
            } else {
                v
            }
        })
    }

    /// `f(g x)`.
    pub fn act<S: Scalar>(&self, f: &Polynomial<S>) -> Polynomial<S> {
        Polynomial::from_terms(f.terms().map(|(m, c)| {
            let mut e = [0u32; 3];
            let mut negative = false;
            for i in 0..3 {
                e[self.perm[i]] += m.0[i];
                if self.signs[i] < 0 && m.0[i] % 2 == 1 {
                    negative = !negative;
                }
            }
            let c = if negative { -c.clone() } else { c.clone() };
            (Monomial(e), c)
        }))
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..3)
            .map(|i| {
                let s = if self.signs[i] < 0 { "-" } else { "" };
                format!("{s}x{}", self.perm[i] + 1)
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Reflection groups appearing as symmetry groups of the two families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Group {
    /// Rotations and reflections of the regular tetrahedron, order 24.
    A3,
    /// Hyperoctahedral group, order 48.
    B3,
}

impl Group {
    pub fn name(self) -> &'static str {
        match self {
            Group::A3 => "A3",
            Group::B3 => "B3",
        }
    }

    pub fn order(self) -> usize {
        match self {
            Group::A3 => 24,
            Group::B3 => 48,
        }
    }

    /// All elements, identity first.
    pub fn elements(self) -> Vec<SignedPermutation> {
        let mut out = Vec::with_capacity(48);
        for perm in PERMUTATIONS {
            for bits in 0..8u8 {
                let signs: [i8; 3] = std::array::from_fn(|i| if bits >> i & 1 == 1 { -1 } else { 1 });
                let g = SignedPermutation { perm, signs };
                if self == Group::A3 && g.sign_product() < 0 {
                    continue;
                }
                out.push(g);
            }
        }
        out
    }

    /// Checks `f(g x) = f(x)` for every element, comparing coefficients with
    /// absolute tolerance `tol`.
    pub fn check_invariant<S: Scalar>(self, f: &Polynomial<S>, tol: f64) -> Result<()> {
        for g in self.elements() {
            let diff = &g.act(f) - f;
            let violation = diff
                .terms()
                .find(|(_, c)| !c.is_negligible(tol))
                .map(|(m, c)| (m.to_string(), c.to_text()));
            if let Some((monomial, residual)) = violation {
                return Err(Error::NotInvariant {
                    group: format!("W({}) element {g}", self.name()),
                    monomial,
                    residual,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
