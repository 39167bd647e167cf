//! Elements of `SL_n(Z)` and the search for elements carrying one finite
//! set of lines onto another.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

use crate::exactq::{as_i64, inverse, int_det, Matrix, Q};
use crate::{Budget, Error, IVec, Result};

/// An integer matrix of determinant 1 acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct GroupElement {
    rows: Vec<Vec<i64>>,
}

impl TryFrom<Vec<Vec<i64>>> for GroupElement {
    type Error = Error;

    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        GroupElement::new(rows)
    }
}

impl From<GroupElement> for Vec<Vec<i64>> {
    fn from(g: GroupElement) -> Self {
        g.rows
    }
}

impl GroupElement {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("group element must be a nonempty square matrix".into()));
        }
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        if int_det(&refs) != 1 {
            return Err(Error::InvalidInput("determinant is not 1".into()));
        }
        Ok(GroupElement { rows })
    }

    pub fn identity(n: usize) -> Self {
        GroupElement {
            rows: (0..n)
                .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_int_rows(&self.rows)
    }

    pub fn apply(&self, v: &[i64]) -> IVec {
        self.rows
            .iter()
            .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul(&self, o: &GroupElement) -> GroupElement {
        let n = self.n();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| self.rows[i][k] * o.rows[k][j]).sum()).collect())
            .collect();
        GroupElement { rows }
    }

    pub fn inverse(&self) -> GroupElement {
        let inv = inverse(&self.to_matrix()).expect("determinant is 1");
        let rows = (0..self.n())
            .map(|i| {
                inv.row(i)
                    .iter()
                    .map(|x| as_i64(x).expect("inverse of a unimodular matrix is integral"))
                    .collect()
            })
            .collect();
        GroupElement { rows }
    }

    /// Re-checks integrality and determinant from scratch.
    pub fn is_valid(&self) -> bool {
        GroupElement::new(self.rows.clone()).is_ok()
    }
}

/// `g` with `g a_i = signs[i] * b[perm[i]]` for every `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineMatch {
    pub g: GroupElement,
    pub perm: Vec<usize>,
    pub signs: Vec<i32>,
}

/// Invariants of a vector list under `SL_n(Z)` acting on lines: `|det|` of
/// every `n`-subset, collected per vector and per pair.
struct DetProfile {
    single: Vec<Vec<i128>>,
    pair: HashMap<(usize, usize), Vec<i128>>,
    all: Vec<i128>,
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    rec(0, m, k, &mut cur, &mut out);
    out
}

impl DetProfile {
    fn new(vs: &[IVec], n: usize) -> Self {
        let m = vs.len();
        let mut single = vec![Vec::new(); m];
        let mut pair: HashMap<(usize, usize), Vec<i128>> = HashMap::new();
        let mut all = Vec::new();
        for s in subsets(m, n) {
            let rows: Vec<&[i64]> = s.iter().map(|&i| vs[i].as_slice()).collect();
            let d = int_det(&rows).abs();
            all.push(d);
            for (a, &i) in s.iter().enumerate() {
                single[i].push(d);
                for &j in &s[a + 1..] {
                    pair.entry((i, j)).or_default().push(d);
                }
            }
        }
        for v in single.iter_mut() {
            v.sort_unstable();
        }
        for v in pair.values_mut() {
            v.sort_unstable();
        }
        all.sort_unstable();
        DetProfile { single, pair, all }
    }

    fn pair(&self, i: usize, j: usize) -> &[i128] {
        let key = if i < j { (i, j) } else { (j, i) };
        self.pair.get(&key).map_or(&[], |v| v.as_slice())
    }
}

fn is_zero_vec(v: &[i64]) -> bool {
    v.iter().all(|&c| c == 0)
}

fn negate(v: &[i64]) -> IVec {
    v.iter().map(|c| -c).collect()
}

/// Elements `g` of `SL_n(Z)` carrying the lines of `a` bijectively onto the
/// lines of `b`. Stops after `limit` matches. `pair_value`, if given, is an
/// extra invariant of index pairs that must agree between `a` and `b`.
pub fn match_line_sets(
    a: &[IVec],
    b: &[IVec],
    pair_value: Option<(&dyn Fn(usize, usize) -> Q, &dyn Fn(usize, usize) -> Q)>,
    limit: usize,
    budget: &mut Budget,
) -> Result<Vec<LineMatch>> {
    let m = a.len();
    if m != b.len() || m == 0 {
        return Ok(Vec::new());
    }
    let n = a[0].len();
    if a.iter().chain(b).any(|v| v.len() != n || is_zero_vec(v)) {
        return Err(Error::InvalidInput("vectors must be nonzero and of equal length".into()));
    }
    let pa = DetProfile::new(a, n);
    let pb = DetProfile::new(b, n);
    if pa.all != pb.all {
        return Ok(Vec::new());
    }
    let mut sa: Vec<&Vec<i128>> = pa.single.iter().collect();
    let mut sb: Vec<&Vec<i128>> = pb.single.iter().collect();
    sa.sort();
    sb.sort();
    if sa != sb {
        return Ok(Vec::new());
    }
    // basis of a: independent vectors, rarest profile first
    let mut freq: BTreeMap<&Vec<i128>, usize> = BTreeMap::new();
    for s in &pb.single {
        *freq.entry(s).or_default() += 1;
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&i| (freq[&pa.single[i]], i));
    let mut basis: Vec<usize> = Vec::new();
    for &i in &order {
        let mut trial: Vec<Vec<Q>> = basis.iter().map(|&j| crate::exactq::to_q(&a[j])).collect();
        trial.push(crate::exactq::to_q(&a[i]));
        if crate::exactq::rank(&Matrix::from_rows(&trial)) == trial.len() {
            basis.push(i);
            if basis.len() == n {
                break;
            }
        }
    }
    if basis.len() < n {
        return Err(Error::InvalidInput("vectors do not span".into()));
    }
    let a_basis = Matrix::from_cols(&basis.iter().map(|&i| crate::exactq::to_q(&a[i])).collect::<Vec<_>>());
    let a_inv = inverse(&a_basis).expect("basis is independent");
    let a_rows: Vec<&[i64]> = basis.iter().map(|&i| a[i].as_slice()).collect();
    let det_a = int_det(&a_rows);

    let b_index: HashMap<IVec, (usize, i32)> = b
        .iter()
        .enumerate()
        .flat_map(|(j, v)| [(v.clone(), (j, 1)), (negate(v), (j, -1))])
        .collect();

    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; m];
    search(
        &SearchCtx {
            a,
            b,
            pa: &pa,
            pb: &pb,
            basis: &basis,
            a_inv: &a_inv,
            det_a,
            b_index: &b_index,
            pair_value,
            limit,
        },
        &mut chosen,
        &mut used,
        &mut out,
        budget,
    )?;
    Ok(out)
}

struct SearchCtx<'a> {
    a: &'a [IVec],
    b: &'a [IVec],
    pa: &'a DetProfile,
    pb: &'a DetProfile,
    basis: &'a [usize],
    a_inv: &'a Matrix,
    det_a: i128,
    b_index: &'a HashMap<IVec, (usize, i32)>,
    pair_value: Option<(&'a dyn Fn(usize, usize) -> Q, &'a dyn Fn(usize, usize) -> Q)>,
    limit: usize,
}

fn search(
    ctx: &SearchCtx,
    chosen: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<LineMatch>,
    budget: &mut Budget,
) -> Result<()> {
    if out.len() >= ctx.limit {
        return Ok(());
    }
    let k = chosen.len();
    let n = ctx.basis.len();
    if k == n {
        try_signs(ctx, chosen, out);
        return Ok(());
    }
    let ai = ctx.basis[k];
    for j in 0..ctx.b.len() {
        if used[j] || ctx.pb.single[j] != ctx.pa.single[ai] {
            continue;
        }
        let consistent = (0..k).all(|l| {
            let (al, bl) = (ctx.basis[l], chosen[l]);
            ctx.pa.pair(al, ai) == ctx.pb.pair(bl, j)
                && ctx.pair_value.as_ref().is_none_or(|(fa, fb)| {
                    use num_traits::Signed;
                    fa(al, ai).abs() == fb(bl, j).abs()
                })
        });
        if !consistent {
            continue;
        }
        budget.tick()?;
        chosen.push(j);
        used[j] = true;
        search(ctx, chosen, used, out, budget)?;
        used[j] = false;
        chosen.pop();
        if out.len() >= ctx.limit {
            break;
        }
    }
    Ok(())
}

fn try_signs(ctx: &SearchCtx, chosen: &[usize], out: &mut Vec<LineMatch>) {
    let n = chosen.len();
    let b_rows: Vec<&[i64]> = chosen.iter().map(|&j| ctx.b[j].as_slice()).collect();
    let det_b = int_det(&b_rows);
    if det_b.abs() != ctx.det_a.abs() {
        return;
    }
    for mask in 0u32..(1 << n) {
        let signs: Vec<i64> = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
        let s: i64 = signs.iter().product();
        if det_b * s as i128 != ctx.det_a {
            continue;
        }
        let w = Matrix::from_cols(
            &chosen
                .iter()
                .zip(&signs)
                .map(|(&j, &sg)| ctx.b[j].iter().map(|&x| Q::from_integer((x * sg).into())).collect())
                .collect::<Vec<_>>(),
        );
        let g = w.mul(ctx.a_inv);
        let rows: Option<Vec<Vec<i64>>> = (0..n)
            .map(|r| g.row(r).iter().map(as_i64).collect())
            .collect();
        let Some(rows) = rows else { continue };
        let Ok(g) = GroupElement::new(rows) else { continue };
        let mut perm = Vec::with_capacity(ctx.a.len());
        let mut sgn = Vec::with_capacity(ctx.a.len());
        let mut hit = vec![false; ctx.b.len()];
        let ok = ctx.a.iter().all(|v| match ctx.b_index.get(&g.apply(v)) {
            Some(&(j, s)) if !hit[j] => {
                hit[j] = true;
                perm.push(j);
                sgn.push(s);
                true
            }
            _ => false,
        });
        if ok {
            out.push(LineMatch {
                g,
                perm,
                signs: sgn,
            });
            if out.len() >= ctx.limit {
                return;
            }
        }
    }
}
