//! Certificate that the boundary of a cycle vanishes in the coinvariants.
//!
//! Every face of every term gets a ledger entry naming its orbit class and
//! a transport `g` with `g face = sign rep`. Faces in self-negating classes
//! carry a witness negating them; the rest are paired with a cancelling
//! partner where possible. `check` recomputes all of it without searching.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

use super::{CycleChain, CycleTerm};
use crate::exactq::Q;
use crate::sharbly::{
    automorphisms, canonicalize_int, equivalent_with_budget, faces, BasicSharbly, OrbitClass,
    OrbitDictionary,
};
use crate::voronoi::GroupElement;
use crate::{Budget, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryKind {
    /// The face vanishes by the sharbly relations.
    Degenerate,
    /// The class is negated by a stabilizer element.
    SelfNegating,
    /// Cancelled by the same face of another simplex of the same tile.
    InteriorWall,
    /// Cancelled by an equivalent face elsewhere.
    CrossPair,
    /// No single partner; the class total is what matters.
    Unpaired,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub term: usize,
    /// Deleted position in the term's vector list.
    pub position: usize,
    pub face: Option<BasicSharbly>,
    /// Coefficient of `face` in the boundary.
    #[serde(with = "crate::exactq::serde_q")]
    pub coeff: Q,
    pub kind: EntryKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_id: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transport: Option<GroupElement>,
    #[serde(default)]
    pub sign: i32,
    /// For self-negating classes: `transport^-1 w transport`, negating `face`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<GroupElement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partner: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryCertificate {
    pub n: usize,
    pub input_hash: String,
    pub chain: Vec<CycleTerm>,
    pub classes: Vec<OrbitClass>,
    pub ledger: Vec<LedgerEntry>,
    /// Nonzero class totals: `(class id, coefficient)`.
    pub residual: Vec<(usize, String)>,
    pub valid: bool,
}

pub(crate) fn hash_terms(terms: &[CycleTerm]) -> Result<String> {
    let bytes = serde_json::to_vec(terms)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn signed(s: i32) -> Q {
    Q::from_integer(s.into())
}

/// Raw boundary faces of every term, in ledger order:
/// `(term, position, canonical face or None, coefficient)`.
fn boundary_faces(terms: &[CycleTerm]) -> Result<Vec<(usize, usize, Option<BasicSharbly>, Q)>> {
    let mut out = Vec::new();
    for (ti, t) in terms.iter().enumerate() {
        let b = t.basic();
        if canonicalize_int(&b.vectors)? != Some((1, b.clone())) {
            return Err(Error::InvalidInput(format!("term {ti} is not in canonical form")));
        }
        let c = t.coeff();
        for (i, f) in faces(&b).into_iter().enumerate() {
            let s = if i % 2 == 0 { Q::one() } else { -Q::one() };
            match canonicalize_int(&f)? {
                Some((fs, fb)) => out.push((ti, i, Some(fb), &c * &s * signed(fs))),
                None => out.push((ti, i, None, &c * &s)),
            }
        }
    }
    Ok(out)
}

pub fn verify_boundary_zero(z: &CycleChain) -> Result<BoundaryCertificate> {
    verify_boundary_zero_with_budget(z, &mut OrbitDictionary::new())
}

/// Builds the certificate, registering classes in `dict`.
pub fn verify_boundary_zero_with_budget(
    z: &CycleChain,
    dict: &mut OrbitDictionary,
) -> Result<BoundaryCertificate> {
    let raw = boundary_faces(&z.terms)?;
    let mut ledger = Vec::with_capacity(raw.len());
    for (term, position, face, coeff) in raw {
        let mut e = LedgerEntry {
            term,
            position,
            face: face.clone(),
            coeff,
            kind: EntryKind::Degenerate,
            class_id: None,
            transport: None,
            sign: 0,
            witness: None,
            partner: None,
        };
        if let Some(f) = face {
            let l = dict.lookup(&f)?;
            let class = dict.class(l.class_id).expect("just registered");
            if let Some(w) = &class.witness {
                e.kind = EntryKind::SelfNegating;
                e.witness = Some(l.transport.inverse().mul(w).mul(&l.transport));
            } else {
                e.kind = EntryKind::Unpaired;
            }
            e.class_id = Some(l.class_id);
            e.transport = Some(l.transport);
            e.sign = l.sign;
        }
        ledger.push(e);
    }
    pair_entries(&z.terms, &mut ledger);
    let classes = dict.classes().to_vec();
    let residual = residual_of(&ledger, &classes);
    Ok(BoundaryCertificate {
        n: z.n,
        input_hash: hash_terms(&z.terms)?,
        chain: z.terms.clone(),
        valid: residual.is_empty(),
        classes,
        ledger,
        residual,
    })
}

/// Greedy pairing inside each non-vanishing class: equal faces from the
/// same tile first, then any entry with the opposite class contribution.
fn pair_entries(terms: &[CycleTerm], ledger: &mut [LedgerEntry]) {
    let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, e) in ledger.iter().enumerate() {
        if e.kind == EntryKind::Unpaired {
            by_class.entry(e.class_id.expect("classified")).or_default().push(i);
        }
    }
    let contribution = |e: &LedgerEntry| &e.coeff * signed(e.sign);
    for idx in by_class.values() {
        for pass in 0..2 {
            for a in 0..idx.len() {
                let i = idx[a];
                if ledger[i].partner.is_some() {
                    continue;
                }
                for &j in &idx[a + 1..] {
                    if ledger[j].partner.is_some() {
                        continue;
                    }
                    let cancels = (contribution(&ledger[i]) + contribution(&ledger[j])).is_zero();
                    let wall = ledger[i].face == ledger[j].face
                        && terms[ledger[i].term].tile == terms[ledger[j].term].tile;
                    if cancels && (pass == 1 || wall) {
                        let kind = if wall { EntryKind::InteriorWall } else { EntryKind::CrossPair };
                        ledger[i].partner = Some(j);
                        ledger[j].partner = Some(i);
                        ledger[i].kind = kind;
                        ledger[j].kind = kind;
                        break;
                    }
                }
            }
        }
    }
}

fn residual_of(ledger: &[LedgerEntry], classes: &[OrbitClass]) -> Vec<(usize, String)> {
    let mut totals: BTreeMap<usize, Q> = BTreeMap::new();
    for e in ledger {
        if let Some(id) = e.class_id {
            if !classes[id].is_zero {
                *totals.entry(id).or_insert_with(Q::zero) += &e.coeff * signed(e.sign);
            }
        }
    }
    totals
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(id, c)| (id, crate::exactq::q_to_string(&c)))
        .collect()
}

impl BoundaryCertificate {
    /// Re-verifies every claim by direct arithmetic. Returns the list of
    /// problems found (empty iff the certificate is sound and valid).
    pub fn audit(&self) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        if hash_terms(&self.chain)? != self.input_hash {
            bad.push("input hash does not match the chain".to_string());
        }
        if self.chain.iter().any(|t| t.vectors.first().is_none_or(|v| v.len() != self.n)) {
            bad.push("chain rank does not match n".to_string());
        }
        let raw = boundary_faces(&self.chain)?;
        if raw.len() != self.ledger.len() {
            bad.push(format!("{} boundary faces but {} ledger entries", raw.len(), self.ledger.len()));
            return Ok(bad);
        }
        for (id, c) in self.classes.iter().enumerate() {
            if c.id != id {
                bad.push(format!("class {id} has id {}", c.id));
            }
            match (&c.witness, c.is_zero) {
                (Some(w), true) => {
                    if w.n() != c.representative.n() || c.representative.act(w) != (-1, c.representative.clone()) {
                        bad.push(format!("witness of class {id} does not negate it"));
                    }
                }
                (None, false) => {}
                _ => bad.push(format!("class {id}: witness and flag disagree")),
            }
        }
        for (k, ((term, pos, face, coeff), e)) in raw.into_iter().zip(&self.ledger).enumerate() {
            if e.term != term || e.position != pos || e.face != face || e.coeff != coeff {
                bad.push(format!("entry {k} does not match the recomputed face"));
                continue;
            }
            let Some(face) = face else {
                if e.kind != EntryKind::Degenerate || e.class_id.is_some() {
                    bad.push(format!("entry {k}: vanishing face is classified"));
                }
                continue;
            };
            let (Some(id), Some(g)) = (e.class_id, &e.transport) else {
                bad.push(format!("entry {k}: missing class or transport"));
                continue;
            };
            let Some(class) = self.classes.get(id) else {
                bad.push(format!("entry {k}: unknown class {id}"));
                continue;
            };
            if g.n() != self.n || face.act(g) != (e.sign, class.representative.clone()) {
                bad.push(format!("entry {k}: transport does not carry the face to its class"));
            }
            match e.kind {
                EntryKind::SelfNegating => match &e.witness {
                    Some(w) if w.n() == self.n && face.act(w) == (-1, face.clone()) && class.is_zero => {}
                    _ => bad.push(format!("entry {k}: bad self-negation witness")),
                },
                EntryKind::InteriorWall | EntryKind::CrossPair => {
                    let ok = e.partner.and_then(|p| self.ledger.get(p)).is_some_and(|o| {
                        o.partner == Some(k)
                            && o.class_id == e.class_id
                            && (&o.coeff * signed(o.sign) + &e.coeff * signed(e.sign)).is_zero()
                    });
                    if !ok || class.is_zero {
                        bad.push(format!("entry {k}: partner does not cancel it"));
                    }
                }
                EntryKind::Unpaired => {
                    if class.is_zero {
                        bad.push(format!("entry {k}: class is self-negating"));
                    }
                }
                EntryKind::Degenerate => bad.push(format!("entry {k}: face does not vanish")),
            }
        }
        let residual = residual_of(&self.ledger, &self.classes);
        if residual != self.residual {
            bad.push("stated residual differs from the recomputed one".to_string());
        }
        if self.valid != residual.is_empty() {
            bad.push("validity flag disagrees with the residual".to_string());
        }
        if !residual.is_empty() {
            bad.push(format!("{} classes survive", residual.len()));
        }
        Ok(bad)
    }

    pub fn check(&self) -> Result<bool> {
        Ok(self.audit()?.is_empty())
    }
}

/// Independent oracle: groups the boundary faces by direct pairwise
/// equivalence tests and checks every group cancels or is self-negating.
pub fn boundary_zero_pairwise(z: &CycleChain, budget: &mut Budget) -> Result<bool> {
    let raw = boundary_faces(&z.terms)?;
    let mut groups: Vec<(BasicSharbly, Q)> = Vec::new();
    for (_, _, face, coeff) in raw {
        let Some(f) = face else { continue };
        let mut placed = false;
        for (rep, total) in groups.iter_mut() {
            if let Some((_, s)) = equivalent_with_budget(&f, rep, budget)? {
                *total += &coeff * signed(s);
                placed = true;
                break;
            }
        }
        if !placed {
            groups.push((f, coeff));
        }
    }
    for (rep, total) in &groups {
        if total.is_zero() {
            continue;
        }
        if !automorphisms(rep, budget)?.iter().any(|(_, s)| *s < 0) {
            return Ok(false);
        }
    }
    Ok(true)
}
