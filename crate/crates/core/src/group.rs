//! Finite groups for Cayley-graph construction: the additive cyclic groups
//! and the projective groups PGL(2, q) and PSL(2, q).

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numtheory::{is_prime, mod_inverse, sqrt_mod};

/// A finite group with a fixed, indexable enumeration of its elements.
pub trait FiniteGroup {
    type Element: Clone + Eq + Hash + fmt::Debug;

    fn elements(&self) -> &[Self::Element];
    fn index_of(&self, element: &Self::Element) -> Option<usize>;
    fn multiply(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn inverse(&self, a: &Self::Element) -> Self::Element;

    fn order(&self) -> usize {
        self.elements().len()
    }
}

/// Z_n under addition.
#[derive(Clone, Debug)]
pub struct CyclicGroup {
    elements: Vec<u64>,
}

impl CyclicGroup {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroArgument("n"));
        }
        Ok(CyclicGroup { elements: (0..n).collect() })
    }

    /// Reduce a signed representative, so `-1` means `n - 1`.
    pub fn element(&self, value: i64) -> u64 {
        value.rem_euclid(self.elements.len() as i64) as u64
    }
}

impl FiniteGroup for CyclicGroup {
    type Element = u64;

    fn elements(&self) -> &[u64] {
        &self.elements
    }

    fn index_of(&self, element: &u64) -> Option<usize> {
        ((*element as usize) < self.elements.len()).then_some(*element as usize)
    }

    fn multiply(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.elements.len() as u64
    }

    fn inverse(&self, a: &u64) -> u64 {
        let n = self.elements.len() as u64;
        (n - a % n) % n
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GroupKind {
    #[serde(rename = "PGL")]
    Pgl,
    #[serde(rename = "PSL")]
    Psl,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::Pgl => "PGL",
            GroupKind::Psl => "PSL",
        })
    }
}

/// A 2x2 matrix over Z_q stored as the canonical representative of its
/// projective class.
///
/// PGL: scaled so the first nonzero of (a, b, c, d) is 1.
/// PSL: determinant 1, sign chosen so the first nonzero lies in `1..=(q-1)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjMatrix {
    entries: [u32; 4],
    q: u32,
    kind: GroupKind,
}

impl PartialOrd for GroupKind {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupKind {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (*self as u8).cmp(&(*other as u8))
    }
}

fn scale_entries(entries: [u64; 4], factor: u64, q: u64) -> [u64; 4] {
    entries.map(|e| e * factor % q)
}

impl ProjMatrix {
    /// Canonical representative of `[[a, b], [c, d]]` (entries taken mod q).
    pub fn new(entries: [i64; 4], q: u32, kind: GroupKind) -> Result<Self> {
        let qi = q as i64;
        let reduced = entries.map(|e| e.rem_euclid(qi) as u64);
        let q64 = q as u64;
        let det = (reduced[0] * reduced[3] + q64 * q64 - reduced[1] * reduced[2] % q64) % q64;
        if det == 0 {
            return Err(Error::SingularMatrix(q64));
        }
        let canon = match kind {
            GroupKind::Pgl => {
                let lead = *reduced.iter().find(|&&e| e != 0).expect("nonsingular");
                scale_entries(reduced, mod_inverse(lead, q64)?, q64)
            }
            GroupKind::Psl => {
                let unit = if det == 1 {
                    reduced
                } else {
                    let root = sqrt_mod(det, q64)?;
                    scale_entries(reduced, mod_inverse(root, q64)?, q64)
                };
                let lead = *unit.iter().find(|&&e| e != 0).expect("nonsingular");
                if lead > (q64 - 1) / 2 {
                    scale_entries(unit, q64 - 1, q64)
                } else {
                    unit
                }
            }
        };
        Ok(ProjMatrix { entries: canon.map(|e| e as u32), q, kind })
    }

    pub fn entries(&self) -> [u32; 4] {
        self.entries
    }

    pub fn modulus(&self) -> u32 {
        self.q
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn determinant(&self) -> u32 {
        let [a, b, c, d] = self.entries.map(u64::from);
        let q = self.q as u64;
        ((a * d + q * q - b * c % q) % q) as u32
    }

    pub fn mul(&self, other: &ProjMatrix) -> ProjMatrix {
        debug_assert_eq!((self.q, self.kind), (other.q, other.kind));
        let [a, b, c, d] = self.entries.map(i64::from);
        let [e, f, g, h] = other.entries.map(i64::from);
        ProjMatrix::new([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h], self.q, self.kind)
            .expect("product of invertible matrices is invertible")
    }

    pub fn inverse(&self) -> ProjMatrix {
        // adjugate; same class as the inverse up to the determinant scalar
        let [a, b, c, d] = self.entries.map(i64::from);
        ProjMatrix::new([d, -b, -c, a], self.q, self.kind).expect("invertible")
    }
}

impl fmt::Display for ProjMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.entries;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

/// PGL(2, q) or PSL(2, q) with a deterministic element order (lexicographic
/// on the canonical entries).
#[derive(Clone, Debug)]
pub struct ProjectiveGroup {
    q: u32,
    kind: GroupKind,
    elements: Vec<ProjMatrix>,
    index: HashMap<[u32; 4], usize>,
}

/// Canonical elements of PGL(2, q) or PSL(2, q), in lexicographic order.
pub fn enumerate_group(q: u32, kind: GroupKind) -> Result<Vec<ProjMatrix>> {
    let q64 = q as u64;
    if q == 2 || !is_prime(q64) {
        return Err(Error::NotOddPrime(q64));
    }
    let half = (q - 1) / 2;
    let mut elements = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    let entries = [a, b, c, d];
                    let lead = entries.iter().copied().find(|&e| e != 0);
                    let Some(lead) = lead else { continue };
                    let det = (a as u64 * d as u64 + q64 * q64 - (b as u64 * c as u64) % q64) % q64;
                    let keep = match kind {
                        GroupKind::Pgl => lead == 1 && det != 0,
                        GroupKind::Psl => lead <= half && det == 1,
                    };
                    if keep {
                        elements.push(ProjMatrix { entries, q, kind });
                    }
                }
            }
        }
    }
    Ok(elements)
}

impl ProjectiveGroup {
    pub fn new(q: u32, kind: GroupKind) -> Result<Self> {
        let elements = enumerate_group(q, kind)?;
        let index = elements.iter().enumerate().map(|(i, m)| (m.entries, i)).collect();
        Ok(ProjectiveGroup { q, kind, elements, index })
    }

    pub fn modulus(&self) -> u32 {
        self.q
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }
}

impl FiniteGroup for ProjectiveGroup {
    type Element = ProjMatrix;

    fn elements(&self) -> &[ProjMatrix] {
        &self.elements
    }

    fn index_of(&self, element: &ProjMatrix) -> Option<usize> {
        if element.q != self.q || element.kind != self.kind {
            return None;
        }
        self.index.get(&element.entries).copied()
    }

    fn multiply(&self, a: &ProjMatrix, b: &ProjMatrix) -> ProjMatrix {
        a.mul(b)
    }

    fn inverse(&self, a: &ProjMatrix) -> ProjMatrix {
        a.inverse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn group_orders() {
        assert_eq!(enumerate_group(29, GroupKind::Psl).unwrap().len(), 12180);
        assert_eq!(enumerate_group(5, GroupKind::Pgl).unwrap().len(), 120);
        assert_eq!(enumerate_group(13, GroupKind::Pgl).unwrap().len(), 2184);
        for q in [5u32, 13, 17, 29] {
            let order = q as usize * (q as usize * q as usize - 1);
            assert_eq!(enumerate_group(q, GroupKind::Pgl).unwrap().len(), order);
            assert_eq!(enumerate_group(q, GroupKind::Psl).unwrap().len(), order / 2);
        }
        assert_eq!(enumerate_group(9, GroupKind::Pgl), Err(Error::NotOddPrime(9)));
        assert_eq!(enumerate_group(2, GroupKind::Psl), Err(Error::NotOddPrime(2)));
    }

    #[test]
    fn enumeration_is_sorted_and_canonical() {
        let elems = enumerate_group(7, GroupKind::Psl).unwrap();
        assert!(elems.windows(2).all(|w| w[0].entries < w[1].entries));
        for m in &elems {
            let e = m.entries.map(i64::from);
            assert_eq!(ProjMatrix::new(e, 7, GroupKind::Psl).unwrap(), *m);
            assert_eq!(m.determinant(), 1);
        }
    }

    #[test]
    fn singular_matrices_rejected() {
        assert_eq!(ProjMatrix::new([1, 2, 2, 4], 5, GroupKind::Pgl), Err(Error::SingularMatrix(5)));
    }

    #[test]
    fn psl_requires_square_determinant() {
        // det 2 is a non-residue mod 5
        assert!(ProjMatrix::new([2, 0, 0, 1], 5, GroupKind::Psl).is_err());
    }

    #[test]
    fn group_axioms_small() {
        let g = ProjectiveGroup::new(5, GroupKind::Pgl).unwrap();
        let id = ProjMatrix::new([1, 0, 0, 1], 5, GroupKind::Pgl).unwrap();
        for a in g.elements() {
            assert_eq!(a.mul(&a.inverse()), id);
            assert_eq!(a.mul(&id), *a);
        }
        let e = g.elements();
        for a in e.iter().step_by(7) {
            for b in e.iter().step_by(11) {
                for c in e.iter().step_by(13) {
                    assert_eq!(a.mul(b).mul(c), a.mul(&b.mul(c)));
                }
            }
        }
    }

    #[test]
    fn cyclic_group_basics() {
        let z6 = CyclicGroup::new(6).unwrap();
        assert_eq!(z6.element(-1), 5);
        assert_eq!(z6.multiply(&4, &5), 3);
        assert_eq!(z6.inverse(&2), 4);
        assert_eq!(z6.inverse(&0), 0);
        assert_eq!(z6.index_of(&6), None);
        assert!(CyclicGroup::new(0).is_err());
    }

    proptest! {
        #[test]
        fn canonicalization_is_scalar_invariant(
            a in 0i64..13, b in 0i64..13, c in 0i64..13, d in 0i64..13, s in 1i64..13,
            psl in any::<bool>(),
        ) {
            let q = 13u32;
            let kind = if psl { GroupKind::Psl } else { GroupKind::Pgl };
            let base = ProjMatrix::new([a, b, c, d], q, kind);
            let scaled = ProjMatrix::new([a * s, b * s, c * s, d * s], q, kind);
            match (base, scaled) {
                (Ok(m), Ok(n)) => {
                    prop_assert_eq!(m, n);
                    let again = ProjMatrix::new(m.entries.map(i64::from), q, kind).unwrap();
                    prop_assert_eq!(again, m);
                }
                // PSL rejects non-square determinants; scaling by s multiplies
                // the determinant by the square s^2, so both sides fail together.
                (Err(_), Err(_)) => {}
                (x, y) => prop_assert!(false, "{:?} vs {:?}", x, y),
            }
        }
    }
}
