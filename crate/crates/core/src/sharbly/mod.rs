//! The sharbly complex: canonical basic sharblies, chains and their
//! boundary, and reduction to `SL_n(Z)`-coinvariants.

mod orbit;

pub use orbit::{project_coinvariants, CoinvariantChain, OrbitClass, OrbitDictionary, OrbitLookup};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::antisym::sort_with_sign;
use crate::exactq::{det, primitive_normalize, primitive_normalize_int, rank, sign, to_q, Matrix, Q};
use crate::voronoi::{match_line_sets, vec_sym, GroupElement};
use crate::{Budget, Error, IVec, Result};

pub use crate::antisym::AntisymChain as AntisymTuple;

/// A basic sharbly `[v_1, .., v_{n+k}]` in canonical form: primitive
/// vectors with positive leading entry, distinct, sorted, spanning `Q^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BasicSharbly {
    pub vectors: Vec<IVec>,
}

impl BasicSharbly {
    pub fn n(&self) -> usize {
        self.vectors.first().map_or(0, |v| v.len())
    }

    /// Degree `k` in `Sh_k`.
    pub fn degree(&self) -> usize {
        self.vectors.len() - self.n()
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// `g [v_1, ..] = [g v_1, ..]`, canonicalized.
    pub fn act(&self, g: &GroupElement) -> (i32, BasicSharbly) {
        let moved: Vec<IVec> = self.vectors.iter().map(|v| g.apply(v)).collect();
        canonicalize_int(&moved)
            .expect("nonzero vectors")
            .expect("invertible image of a spanning set spans")
    }
}

/// Applies relations (i)-(iii): returns the sign and canonical basic, or
/// `None` when the symbol vanishes (repeated line or no span).
pub fn canonicalize(vectors: &[Vec<Q>]) -> Result<Option<(i32, BasicSharbly)>> {
    let ints: Vec<IVec> = vectors
        .iter()
        .map(|v| primitive_normalize(v))
        .collect::<Result<_>>()?;
    finish_canonical(ints)
}

pub fn canonicalize_int(vectors: &[IVec]) -> Result<Option<(i32, BasicSharbly)>> {
    let ints: Vec<IVec> = vectors
        .iter()
        .map(|v| primitive_normalize_int(v))
        .collect::<Result<_>>()?;
    finish_canonical(ints)
}

fn finish_canonical(mut ints: Vec<IVec>) -> Result<Option<(i32, BasicSharbly)>> {
    let n = match ints.first() {
        Some(v) => v.len(),
        None => return Err(Error::InvalidInput("empty sharbly".into())),
    };
    if ints.iter().any(|v| v.len() != n) {
        return Err(Error::Dimension("vectors of mixed length".into()));
    }
    let Some(s) = sort_with_sign(&mut ints) else {
        return Ok(None);
    };
    let rows: Vec<Vec<Q>> = ints.iter().map(|v| to_q(v)).collect();
    if rank(&Matrix::from_rows(&rows)) < n {
        return Ok(None);
    }
    Ok(Some((s, BasicSharbly { vectors: ints })))
}

/// A rational combination of basic sharblies of one rank and degree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SharblyChain {
    terms: BTreeMap<BasicSharbly, Q>,
}

/// One entry of the JSON form of a chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainTerm {
    pub vectors: Vec<IVec>,
    #[serde(with = "crate::exactq::serde_q")]
    pub coeff: Q,
}

impl Serialize for SharblyChain {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_terms().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SharblyChain {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<ChainTerm>::deserialize(d)?;
        SharblyChain::from_terms(&terms).map_err(serde::de::Error::custom)
    }
}

impl SharblyChain {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_basic(b: BasicSharbly, coeff: Q) -> Self {
        let mut c = Self::new();
        c.add_basic(b, coeff);
        c
    }

    pub fn from_terms(terms: &[ChainTerm]) -> Result<Self> {
        let mut c = Self::new();
        for t in terms {
            c.add_vectors(&t.vectors, t.coeff.clone())?;
        }
        c.check_shape()?;
        Ok(c)
    }

    pub fn to_terms(&self) -> Vec<ChainTerm> {
        self.terms
            .iter()
            .map(|(b, c)| ChainTerm {
                vectors: b.vectors.clone(),
                coeff: c.clone(),
            })
            .collect()
    }

    fn check_shape(&self) -> Result<()> {
        let mut shapes = self.terms.keys().map(|b| (b.n(), b.len()));
        if let Some(first) = shapes.next() {
            if shapes.any(|s| s != first) {
                return Err(Error::Dimension("chain mixes ranks or degrees".into()));
            }
        }
        Ok(())
    }

    pub fn add_basic(&mut self, b: BasicSharbly, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        let e = self.terms.entry(b).or_insert_with(Q::zero);
        *e += coeff;
        if e.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    /// Adds `coeff * [vectors]` after canonicalization.
    pub fn add_vectors(&mut self, vectors: &[IVec], coeff: Q) -> Result<()> {
        if let Some((s, b)) = canonicalize_int(vectors)? {
            self.add_basic(b, coeff * Q::from_integer(s.into()));
        }
        Ok(())
    }

    pub fn add(&mut self, other: &SharblyChain) {
        for (b, c) in &other.terms {
            self.add_basic(b.clone(), c.clone());
        }
    }

    pub fn sub(&mut self, other: &SharblyChain) {
        for (b, c) in &other.terms {
            self.add_basic(b.clone(), -c.clone());
        }
    }

    pub fn scaled(&self, a: &Q) -> Self {
        let mut c = Self::new();
        for (b, x) in &self.terms {
            c.add_basic(b.clone(), x * a);
        }
        c
    }

    pub fn act(&self, g: &GroupElement) -> Self {
        let mut c = Self::new();
        for (b, x) in &self.terms {
            let (s, gb) = b.act(g);
            c.add_basic(gb, x * Q::from_integer(s.into()));
        }
        c
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasicSharbly, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, b: &BasicSharbly) -> Q {
        self.terms.get(b).cloned().unwrap_or_else(Q::zero)
    }

    /// `sum_i (-1)^(i+1) [.., v_i^, ..]`, 1-based.
    pub fn boundary(&self) -> Result<Self> {
        let mut out = Self::new();
        for (b, c) in &self.terms {
            if b.degree() == 0 {
                return Err(Error::InvalidInput("boundary of a degree 0 sharbly".into()));
            }
            for (i, face) in faces(b).into_iter().enumerate() {
                let s = if i % 2 == 0 { Q::one() } else { -Q::one() };
                out.add_vectors(&face, c * s)?;
            }
        }
        Ok(out)
    }
}

/// The vector lists obtained by deleting each entry in turn.
pub fn faces(b: &BasicSharbly) -> Vec<Vec<IVec>> {
    (0..b.len())
        .map(|i| {
            b.vectors
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, v)| v.clone())
                .collect()
        })
        .collect()
}

/// A `g` in `SL_n(Z)` and sign `s` with `g a = s b`, if one exists.
pub fn equivalent(a: &BasicSharbly, b: &BasicSharbly) -> Result<Option<(GroupElement, i32)>> {
    equivalent_with_budget(a, b, &mut Budget::unlimited())
}

pub fn equivalent_with_budget(
    a: &BasicSharbly,
    b: &BasicSharbly,
    budget: &mut Budget,
) -> Result<Option<(GroupElement, i32)>> {
    if a.n() != b.n() || a.len() != b.len() {
        return Ok(None);
    }
    let m = match_line_sets(&a.vectors, &b.vectors, None, 1, budget)?;
    Ok(m.into_iter().next().map(|lm| {
        let (s, gb) = a.act(&lm.g);
        debug_assert_eq!(&gb, b);
        (lm.g, s)
    }))
}

/// All `g` with `g a = s a`, with their signs.
pub fn automorphisms(a: &BasicSharbly, budget: &mut Budget) -> Result<Vec<(GroupElement, i32)>> {
    Ok(match_line_sets(&a.vectors, &a.vectors, None, usize::MAX, budget)?
        .into_iter()
        .map(|lm| {
            let (s, _) = a.act(&lm.g);
            (lm.g, s)
        })
        .collect())
}

/// Orders `d` linearly independent rays so that the determinant of their
/// rank-1 forms is positive, and returns the resulting signed basic.
/// `orientation = -1` reverses the reference orientation.
pub fn sharbly_of_cone(vectors: &[IVec], orientation: i32) -> Result<(i32, BasicSharbly)> {
    let (s, b) = canonicalize_int(vectors)?
        .ok_or_else(|| Error::Degenerate("rays repeat or do not span".into()))?;
    let n = b.n();
    if b.len() != n * (n + 1) / 2 {
        return Err(Error::Dimension(format!(
            "{} rays for a cone in dimension {}",
            b.len(),
            n * (n + 1) / 2
        )));
    }
    let _ = s; // the sorting sign is irrelevant, the determinant fixes orientation
    let rows: Vec<Vec<Q>> = b.vectors.iter().map(|v| vec_sym(v)).collect();
    let d = sign(&det(&Matrix::from_rows(&rows))?);
    if d == 0 {
        return Err(Error::Degenerate("rays are linearly dependent".into()));
    }
    Ok((d * orientation.signum(), b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::q;

    fn basic(vs: &[&[i64]]) -> BasicSharbly {
        canonicalize_int(&vs.iter().map(|v| v.to_vec()).collect::<Vec<_>>())
            .unwrap()
            .unwrap()
            .1
    }

    #[test]
    fn canonical_forms() {
        let (s, b) = canonicalize_int(&[vec![0, 1], vec![1, 0]]).unwrap().unwrap();
        assert_eq!(b.vectors, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(s, 1);
        let (s2, b2) = canonicalize_int(&[vec![1, 0], vec![0, 1]]).unwrap().unwrap();
        assert_eq!((s2, &b2), (-1, &b));
        let (s3, b3) = canonicalize_int(&[vec![2, 0], vec![0, -1]]).unwrap().unwrap();
        assert_eq!((s3, &b3), (-1, &b));
        assert!(canonicalize_int(&[vec![1, 0], vec![-3, 0]]).unwrap().is_none());
        assert!(canonicalize_int(&[vec![1, 0], vec![0, 0]]).is_err());
        let r = canonicalize(&[vec![q(2), q(0)], vec![q(0), crate::exactq::qf(1, 3)]]).unwrap();
        assert_eq!(r.unwrap().1, b);
    }

    #[test]
    fn boundary_of_a2() {
        let (s, b) = canonicalize_int(&[vec![1, 0], vec![0, 1], vec![1, -1]]).unwrap().unwrap();
        assert_eq!(b, basic(&[&[1, 0], &[0, 1], &[1, -1]]));
        let c = SharblyChain::from_basic(b, q(s as i64));
        let d = c.boundary().unwrap();
        let mut expected = SharblyChain::new();
        expected.add_vectors(&[vec![0, 1], vec![1, -1]], q(1)).unwrap();
        expected.add_vectors(&[vec![1, 0], vec![1, -1]], q(-1)).unwrap();
        expected.add_vectors(&[vec![1, 0], vec![0, 1]], q(1)).unwrap();
        assert_eq!(d, expected);
        assert!(d.boundary().is_err() || d.boundary().unwrap().is_empty());
    }

    #[test]
    fn printed_witnesses() {
        let g = GroupElement::new(vec![vec![0, 1], vec![-1, 0]]).unwrap();
        let h = GroupElement::new(vec![vec![0, 1], vec![-1, -1]]).unwrap();
        let (s, e) = canonicalize_int(&[vec![1, 0], vec![0, 1]]).unwrap().unwrap();
        let c = SharblyChain::from_basic(e.clone(), q(s as i64));
        assert_eq!(c.act(&g), c.scaled(&q(-1)));
        let mut target = SharblyChain::new();
        target.add_vectors(&[vec![0, 1], vec![1, -1]], q(1)).unwrap();
        assert_eq!(c.act(&h), target);
        let (w, sg) = equivalent(&e, &e).unwrap().unwrap();
        assert_eq!(e.act(&w), (sg, e.clone()));
        let k = GroupElement::new(vec![vec![0, 0, -1], vec![0, 1, 1], vec![1, 0, 0]]).unwrap();
        let (s5, b5) = canonicalize_int(&[
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![1, -1, 0],
            vec![0, 1, -1],
        ])
        .unwrap()
        .unwrap();
        let c5 = SharblyChain::from_basic(b5, q(s5 as i64));
        assert_eq!(c5.act(&k), c5.scaled(&q(-1)));
    }

    #[test]
    fn cone_orientation() {
        let vs = vec![vec![1, 0], vec![0, 1], vec![1, -1]];
        let (s, b) = sharbly_of_cone(&vs, 1).unwrap();
        let (s2, b2) = sharbly_of_cone(&[vs[2].clone(), vs[0].clone(), vs[1].clone()], 1).unwrap();
        assert_eq!((s, &b), (s2, &b2));
        assert_eq!(sharbly_of_cone(&vs, -1).unwrap().0, -s);
        assert!(sharbly_of_cone(&vs[..2], 1).is_err());
    }
}
