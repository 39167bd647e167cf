//! Self-contained certificate files. Producing one may involve budgeted
//! searches; checking one is plain arithmetic on the recorded witnesses.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

use crate::cosharbly::PositivityCertificate;
use crate::cycle::BoundaryCertificate;
use crate::exactq::{rank, Matrix, Q};
use crate::polytope::{
    is_valid_triangulation, lift_triangulation, verify_flip_identity, Flip, FlipIdentity,
    LiftingHeights, PointConfiguration, Triangulation,
};
use crate::voronoi::tile::TileFacet;
use crate::voronoi::vec_sym;
use crate::{Error, IVec, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertKind {
    Boundary,
    Positivity,
    Triangulation,
    FlipIdentity,
    Census,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub schema_version: u32,
    pub kind: CertKind,
    /// sha256 of the JSON of the certified input.
    pub input_hash: String,
    /// sha256 of the JSON of `payload`.
    pub payload_hash: String,
    pub payload: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationCertificate {
    pub config: PointConfiguration,
    pub triangulation: Triangulation,
    pub valid: bool,
    /// Heights whose lower hull is the triangulation, if it is regular.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heights: Option<LiftingHeights>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipIdentityCertificate {
    pub config: PointConfiguration,
    pub flip: Flip,
    pub identity: FlipIdentity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetRecord {
    pub labels: Vec<usize>,
    #[serde(with = "crate::exactq::serde_qvec")]
    pub normal: Vec<Q>,
}

impl From<TileFacet> for FacetRecord {
    fn from(f: TileFacet) -> Self {
        FacetRecord {
            labels: f.labels,
            normal: f.normal,
        }
    }
}

/// Facets of the cone on `v v^t` over the listed vectors, with normals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusCertificate {
    pub form: String,
    pub vectors: Vec<IVec>,
    pub facets: Vec<FacetRecord>,
    /// Facet count by number of rays.
    pub census: BTreeMap<usize, usize>,
}

fn sha(v: &impl Serialize) -> Result<String> {
    Ok(hex::encode(Sha256::digest(serde_json::to_vec(v)?)))
}

fn input_of(kind: CertKind, payload: &Value) -> Result<String> {
    let field = match kind {
        CertKind::Boundary => "chain",
        CertKind::Positivity => "terms",
        CertKind::Triangulation | CertKind::FlipIdentity => "config",
        CertKind::Census => "vectors",
    };
    let v = payload
        .get(field)
        .ok_or_else(|| Error::InvalidInput(format!("payload lacks `{field}`")))?;
    sha(v)
}

impl CertificateFile {
    pub fn new(kind: CertKind, payload: &impl Serialize) -> Result<Self> {
        let payload = serde_json::to_value(payload)?;
        Ok(CertificateFile {
            schema_version: SCHEMA_VERSION,
            kind,
            input_hash: input_of(kind, &payload)?,
            payload_hash: sha(&payload)?,
            payload,
        })
    }

    pub fn boundary(c: &BoundaryCertificate) -> Result<Self> {
        Self::new(CertKind::Boundary, c)
    }

    pub fn positivity(c: &PositivityCertificate) -> Result<Self> {
        Self::new(CertKind::Positivity, c)
    }

    pub fn triangulation(c: &TriangulationCertificate) -> Result<Self> {
        Self::new(CertKind::Triangulation, c)
    }

    pub fn flip_identity(c: &FlipIdentityCertificate) -> Result<Self> {
        Self::new(CertKind::FlipIdentity, c)
    }

    pub fn census(c: &CensusCertificate) -> Result<Self> {
        Self::new(CertKind::Census, c)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Result of [`check`]: the problems found, empty iff the certificate holds.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub kind: Option<CertKind>,
    pub problems: Vec<String>,
}

impl CheckReport {
    pub fn valid(&self) -> bool {
        self.problems.is_empty()
    }
}

fn parse<T: serde::de::DeserializeOwned>(v: &Value) -> std::result::Result<T, String> {
    serde_json::from_value(v.clone()).map_err(|e| format!("malformed payload: {e}"))
}

/// Checks integrity and every arithmetic claim of a certificate.
pub fn check(file: &CertificateFile) -> CheckReport {
    let mut r = CheckReport {
        kind: Some(file.kind),
        problems: Vec::new(),
    };
    if file.schema_version != SCHEMA_VERSION {
        r.problems.push(format!("unknown schema version {}", file.schema_version));
        return r;
    }
    match sha(&file.payload) {
        Ok(h) if h == file.payload_hash => {}
        _ => r.problems.push("payload hash mismatch".into()),
    }
    match input_of(file.kind, &file.payload) {
        Ok(h) if h == file.input_hash => {}
        Ok(_) => r.problems.push("input hash mismatch".into()),
        Err(e) => r.problems.push(e.to_string()),
    }
    let outcome = match file.kind {
        CertKind::Boundary => parse::<BoundaryCertificate>(&file.payload)
            .and_then(|c| c.audit().map_err(|e| e.to_string())),
        CertKind::Positivity => parse::<PositivityCertificate>(&file.payload).and_then(|c| {
            match c.check() {
                Ok(true) if c.valid => Ok(vec![]),
                Ok(true) => Ok(vec!["positivity certificate is recorded as invalid".into()]),
                Ok(false) => Ok(vec!["recorded verdicts do not match".into()]),
                Err(e) => Err(e.to_string()),
            }
        }),
        CertKind::Triangulation => parse::<TriangulationCertificate>(&file.payload).map(check_triangulation),
        CertKind::FlipIdentity => parse::<FlipIdentityCertificate>(&file.payload).map(check_flip),
        CertKind::Census => parse::<CensusCertificate>(&file.payload).map(check_census),
    };
    match outcome {
        Ok(p) => r.problems.extend(p),
        Err(e) => r.problems.push(e),
    }
    r
}

fn check_triangulation(c: TriangulationCertificate) -> Vec<String> {
    let mut bad = Vec::new();
    let valid = is_valid_triangulation(&c.config, &c.triangulation);
    if valid != c.valid {
        bad.push("validity claim is wrong".into());
    }
    if !valid {
        bad.push("triangulation is not valid".into());
    }
    if let Some(h) = &c.heights {
        match lift_triangulation(&c.config, h) {
            Ok(t) if t == c.triangulation => {}
            _ => bad.push("heights do not induce the triangulation".into()),
        }
    }
    bad
}

fn check_flip(c: FlipIdentityCertificate) -> Vec<String> {
    let mut bad = Vec::new();
    if Flip::from_parts(c.flip.circuit.clone(), c.flip.links.clone()) != c.flip {
        bad.push("flip is not built from its circuit and links".into());
    }
    match verify_flip_identity(&c.config, &c.flip) {
        Ok(id) if id == c.identity => {}
        Ok(_) => bad.push("recorded signs differ".into()),
        Err(e) => bad.push(e.to_string()),
    }
    bad
}

fn check_census(c: CensusCertificate) -> Vec<String> {
    let mut bad = Vec::new();
    let rays: Vec<Vec<Q>> = c.vectors.iter().map(|v| vec_sym(v)).collect();
    let d = rays.first().map_or(0, |r| r.len());
    if rank(&Matrix::from_rows(&rays)) != d {
        bad.push("rays do not span".into());
    }
    let mut counts = BTreeMap::new();
    let mut seen = std::collections::BTreeSet::new();
    for f in &c.facets {
        if !seen.insert(f.labels.clone()) {
            bad.push(format!("facet {:?} listed twice", f.labels));
        }
        if f.normal.len() != d {
            bad.push(format!("facet {:?}: normal has wrong length", f.labels));
            continue;
        }
        let rec = TileFacet {
            labels: f.labels.clone(),
            normal: f.normal.clone(),
        };
        let on: Vec<usize> = (0..rays.len())
            .filter(|&i| {
                let v = rec.eval(&rays[i]);
                if v < Q::zero() {
                    bad.push(format!("facet {:?}: ray {i} on the wrong side", f.labels));
                }
                v.is_zero()
            })
            .collect();
        if on != f.labels {
            bad.push(format!("facet {:?}: zero set differs", f.labels));
        }
        let sub: Vec<Vec<Q>> = on.iter().map(|&i| rays[i].clone()).collect();
        if sub.is_empty() || rank(&Matrix::from_rows(&sub)) + 1 != d {
            bad.push(format!("facet {:?} has the wrong dimension", f.labels));
        }
        *counts.entry(f.labels.len()).or_insert(0) += 1;
    }
    if counts != c.census {
        bad.push("census does not match the facet list".into());
    }
    bad
}
