//! Built-in perfect forms for n = 2..5 and the auxiliary triangulation data
//! for the D4 and D5 tiles.

use serde::{Deserialize, Serialize};

use crate::{Error, IVec, Result};

/// A named list of minimal vectors, one per line, in label order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormData {
    pub name: String,
    pub n: usize,
    pub vectors: Vec<IVec>,
}

/// The non-simplicial D5 facet with two of its triangulations and the two
/// sides of the flip between them. `vertices` and `triangulations` use tile
/// labels; `circuit`, `t_plus` and `t_minus` use facet-local labels
/// (positions in `vertices`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetData {
    pub form: String,
    pub vertices: Vec<usize>,
    pub triangulations: Vec<Vec<Vec<usize>>>,
    pub t_plus: Vec<Vec<usize>>,
    pub t_minus: Vec<Vec<usize>>,
    pub circuit: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dataset {
    pub n: usize,
    pub forms: Vec<FormData>,
    /// Triangulation of the D4 tile, in tile labels.
    pub d4_triangulation: Option<Vec<Vec<usize>>>,
    pub facet: Option<FacetData>,
}

/// `e_1..e_n` followed by `e_i - e_j` for `i < j`.
pub fn a_n_vectors(n: usize) -> Vec<IVec> {
    let e = |i: usize| -> IVec { (0..n).map(|k| i64::from(k == i)).collect() };
    let mut out: Vec<IVec> = (0..n).map(e).collect();
    for i in 0..n {
        for j in i + 1..n {
            out.push(e(i).iter().zip(e(j)).map(|(a, b)| a - b).collect());
        }
    }
    out
}

fn columns(rows: &[&[i64]]) -> Vec<IVec> {
    (0..rows[0].len())
        .map(|c| rows.iter().map(|r| r[c]).collect())
        .collect()
}

pub fn d4_vectors() -> Vec<IVec> {
    columns(&[
        &[-1, -1, -1, -1, -1, -1, 0, 0, 0, 0, 0, 0],
        &[-1, 0, 0, 0, 0, 1, -1, -1, -1, -1, 0, 0],
        &[0, -1, 0, 0, 1, 0, -1, 0, 0, 1, -1, -1],
        &[1, 1, 0, 1, 0, 0, 1, 0, 1, 0, 0, 1],
    ])
}

pub fn a5_plus3_vectors() -> Vec<IVec> {
    columns(&[
        &[1, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 1],
        &[1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 0],
        &[1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        &[1, 1, 1, 0, 1, 0, 1, 0, 0, 0, 1, 0, 1, 1, 0],
        &[1, 1, 1, 1, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 0],
    ])
}

pub fn d5_vectors() -> Vec<IVec> {
    columns(&[
        &[0, 1, 0, 0, 0, 0, 1, 0, 1, 0, 1, 0, 1, 0, 0, 1, 0, 0, 1, 1],
        &[0, 0, 1, 0, 0, 1, 0, 0, 0, 1, 1, 0, 0, 1, 0, 0, 1, 1, -1, 0],
        &[0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, -1, -1, 0, 0, 0],
        &[1, -1, -1, -1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, 0, 0, 0, 0, 0, 0],
    ])
}

pub fn d4_triangulation() -> Vec<Vec<usize>> {
    vec![
        vec![0, 1, 2, 3, 4, 5, 6, 7, 8, 10],
        vec![0, 1, 3, 4, 5, 6, 7, 8, 9, 10],
        vec![0, 1, 2, 4, 5, 6, 7, 8, 9, 10],
        vec![0, 1, 2, 3, 4, 5, 7, 8, 9, 10],
        vec![1, 2, 3, 4, 5, 6, 7, 8, 10, 11],
        vec![1, 3, 4, 5, 6, 7, 8, 9, 10, 11],
        vec![1, 2, 4, 5, 6, 7, 8, 9, 10, 11],
        vec![1, 2, 3, 4, 5, 7, 8, 9, 10, 11],
        vec![0, 1, 2, 3, 4, 6, 7, 8, 10, 11],
        vec![0, 1, 3, 4, 6, 7, 8, 9, 10, 11],
        vec![0, 1, 2, 4, 6, 7, 8, 9, 10, 11],
        vec![0, 1, 2, 3, 4, 7, 8, 9, 10, 11],
        vec![0, 1, 2, 3, 4, 5, 7, 8, 9, 11],
        vec![0, 1, 2, 4, 5, 6, 7, 8, 9, 11],
        vec![0, 1, 3, 4, 5, 6, 7, 8, 9, 11],
        vec![0, 1, 2, 3, 4, 5, 6, 7, 8, 11],
    ]
}

pub fn d5_facet() -> FacetData {
    FacetData {
        form: "D5".into(),
        vertices: vec![0, 1, 3, 4, 5, 6, 7, 8, 9, 11, 12, 13, 14, 15, 18, 19],
        triangulations: vec![
            vec![
                vec![0, 1, 3, 4, 5, 6, 7, 8, 9, 11, 12, 13, 14, 18],
                vec![0, 1, 3, 4, 5, 6, 7, 8, 9, 11, 13, 14, 15, 18],
                vec![0, 1, 3, 4, 5, 6, 7, 9, 11, 12, 13, 14, 18, 19],
                vec![0, 1, 3, 4, 5, 6, 7, 9, 11, 13, 14, 15, 18, 19],
                vec![0, 1, 3, 4, 5, 6, 8, 9, 11, 12, 13, 14, 15, 18],
                vec![0, 1, 3, 4, 5, 6, 9, 11, 12, 13, 14, 15, 18, 19],
                vec![0, 1, 3, 5, 6, 7, 8, 9, 11, 12, 13, 14, 18, 19],
                vec![0, 1, 3, 5, 6, 7, 8, 9, 11, 13, 14, 15, 18, 19],
                vec![0, 1, 3, 5, 6, 8, 9, 11, 12, 13, 14, 15, 18, 19],
                vec![0, 1, 4, 5, 6, 7, 8, 9, 11, 12, 13, 14, 18, 19],
                vec![0, 1, 4, 5, 6, 7, 8, 9, 11, 13, 14, 15, 18, 19],
                vec![0, 1, 4, 5, 6, 8, 9, 11, 12, 13, 14, 15, 18, 19],
                vec![1, 3, 4, 5, 6, 7, 8, 9, 11, 12, 13, 14, 15, 18],
                vec![1, 3, 4, 5, 6, 7, 9, 11, 12, 13, 14, 15, 18, 19],
                vec![1, 3, 5, 6, 7, 8, 9, 11, 12, 13, 14, 15, 18, 19],
                vec![1, 4, 5, 6, 7, 8, 9, 11, 12, 13, 14, 15, 18, 19],
            ],
            vec![
                vec![0, 1, 3, 4, 5, 6, 7, 8, 9, 11, 12, 13, 15, 18],
                vec![0, 1, 3, 4, 5, 6, 7, 8, 9, 12, 13, 14, 15, 18],
                vec![0, 1, 3, 4, 5, 6, 7, 9, 11, 12, 13, 15, 18, 19],
                vec![0, 1, 3, 4, 5, 6, 7, 9, 12, 13, 14, 15, 18, 19],
                vec![0, 1, 3, 4, 5, 7, 8, 9, 11, 12, 13, 14, 15, 18],
                vec![0, 1, 3, 4, 5, 7, 9, 11, 12, 13, 14, 15, 18, 19],
                vec![0, 1, 3, 5, 6, 7, 8, 9, 11, 12, 13, 15, 18, 19],
                vec![0, 1, 3, 5, 6, 7, 8, 9, 12, 13, 14, 15, 18, 19],
                vec![0, 1, 3, 5, 7, 8, 9, 11, 12, 13, 14, 15, 18, 19],
                vec![0, 1, 4, 5, 6, 7, 8, 9, 11, 12, 13, 15, 18, 19],
                vec![0, 1, 4, 5, 6, 7, 8, 9, 12, 13, 14, 15, 18, 19],
                vec![0, 1, 4, 5, 7, 8, 9, 11, 12, 13, 14, 15, 18, 19],
                vec![0, 3, 4, 5, 6, 7, 8, 9, 11, 12, 13, 14, 15, 18],
                vec![0, 3, 4, 5, 6, 7, 9, 11, 12, 13, 14, 15, 18, 19],
                vec![0, 3, 5, 6, 7, 8, 9, 11, 12, 13, 14, 15, 18, 19],
                vec![0, 4, 5, 6, 7, 8, 9, 11, 12, 13, 14, 15, 18, 19],
            ],
        ],
        t_plus: vec![
            vec![0, 1, 5, 6, 9, 10, 13],
            vec![0, 1, 5, 6, 10, 12, 13],
            vec![0, 1, 6, 9, 10, 12, 13],
            vec![0, 5, 6, 9, 10, 12, 13],
        ],
        t_minus: vec![
            vec![0, 1, 5, 6, 9, 10, 12],
            vec![0, 1, 5, 6, 9, 12, 13],
            vec![0, 1, 5, 9, 10, 12, 13],
            vec![1, 5, 6, 9, 10, 12, 13],
        ],
        circuit: vec![0, 1, 5, 6, 9, 10, 12, 13],
    }
}

/// Every built-in form by name.
pub fn all_forms() -> Vec<FormData> {
    let f = |name: &str, n: usize, vectors: Vec<IVec>| FormData {
        name: name.into(),
        n,
        vectors,
    };
    vec![
        f("A2", 2, a_n_vectors(2)),
        f("A3", 3, a_n_vectors(3)),
        f("A4", 4, a_n_vectors(4)),
        f("D4", 4, d4_vectors()),
        f("A5", 5, a_n_vectors(5)),
        f("A5+3", 5, a5_plus3_vectors()),
        f("D5", 5, d5_vectors()),
    ]
}

pub fn form_data(name: &str) -> Result<FormData> {
    all_forms()
        .into_iter()
        .find(|f| f.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::NotFound(format!("no built-in form named {name}")))
}

pub fn builtin_dataset(n: usize) -> Result<Dataset> {
    if !(2..=5).contains(&n) {
        return Err(Error::UnsupportedRank(n));
    }
    Ok(Dataset {
        n,
        forms: all_forms().into_iter().filter(|f| f.n == n).collect(),
        d4_triangulation: (n == 4).then(d4_triangulation),
        facet: (n == 5).then(d5_facet),
    })
}
