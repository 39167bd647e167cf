//! The reproduction suite: one check per acceptance item, shared by
//! `repro all` and the `acceptance` test target.

use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::time::Instant;

use crate::antisym::AntisymChain;
use crate::cosharbly::{is_flipon, is_flipon_by_rank, mu_sign_certificate, OrientedSectionSimplex};
use crate::cycle::{
    build_zG, flipons_for_config, representatives, assemble, secondary_flipons_in, verify_an_remark,
    verify_boundary_zero, EntryKind,
};
use crate::exactq::{qf, Q};
use crate::polytope::flip::alternating_circuit_sum;
use crate::polytope::{
    affine_dependence, enumerate_regular_triangulations, flip_path, is_regular,
    is_valid_triangulation, placing_triangulation, verify_flip_identity, PointConfiguration,
    Triangulation,
};
use crate::sharbly::{canonicalize_int, SharblyChain};
use crate::voronoi::dataset::{all_forms, builtin_dataset, d5_vectors};
use crate::voronoi::tile::facet_census;
use crate::voronoi::{builtin_tile, form_from_minvecs, stabilizer, tile_facets, GroupElement};
use crate::{IVec, Result};

pub const DEFAULT_SEED: u64 = 20_170_801;

#[derive(Clone, Debug)]
pub struct ReproOptions {
    pub seed: u64,
    /// Skip the n = 5 data item.
    pub skip_n5: bool,
}

impl Default for ReproOptions {
    fn default() -> Self {
        ReproOptions {
            seed: DEFAULT_SEED,
            skip_n5: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ItemResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub skipped: bool,
    pub detail: String,
    pub millis: u128,
}

pub const ITEMS: [(usize, &str); 8] = [
    (1, "n=2 closed form and witnesses"),
    (2, "n=3 closed form and self-negation"),
    (3, "n=4 boundary certificate"),
    (4, "A_n remark"),
    (5, "n=5 data"),
    (6, "appendix properties"),
    (7, "cosharbly signs"),
    (8, "dataset integrity"),
];

/// Runs every item in order.
pub fn run_all(opts: &ReproOptions) -> Vec<ItemResult> {
    ITEMS.iter().map(|&(id, _)| run_item(id, opts)).collect()
}

pub fn run_item(id: usize, opts: &ReproOptions) -> ItemResult {
    let name = ITEMS.iter().find(|x| x.0 == id).map_or("unknown", |x| x.1);
    let start = Instant::now();
    if id == 5 && opts.skip_n5 {
        return ItemResult {
            id,
            name,
            passed: true,
            skipped: true,
            detail: "skipped".into(),
            millis: 0,
        };
    }
    let r = match id {
        1 => item1(),
        2 => item2(),
        3 => item3(),
        4 => item4(),
        5 => item5(),
        6 => item6(opts.seed),
        7 => item7(opts.seed),
        8 => item8(),
        _ => Ok(Err(format!("no item {id}"))),
    };
    let (passed, detail) = match r {
        Ok(Ok(d)) => (true, d),
        Ok(Err(d)) => (false, d),
        Err(e) => (false, format!("error: {e}")),
    };
    ItemResult {
        id,
        name,
        passed,
        skipped: false,
        detail,
        millis: start.elapsed().as_millis(),
    }
}

/// `Ok(Ok(detail))` on success, `Ok(Err(why))` on a failed check.
type Outcome = Result<std::result::Result<String, String>>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Ok(Err(format!($($msg)*)));
        }
    };
}

fn g(rows: Vec<Vec<i64>>) -> GroupElement {
    GroupElement::new(rows).expect("determinant one")
}

fn chain_of(vs: &[IVec], c: Q) -> Result<SharblyChain> {
    let mut ch = SharblyChain::new();
    ch.add_vectors(vs, c)?;
    Ok(ch)
}

fn item1() -> Outcome {
    let z = build_zG(2)?;
    let expected = chain_of(&[vec![1, 0], vec![0, 1], vec![1, -1]], qf(1, 6))?;
    ensure!(z.chain()? == expected, "z differs from (1/6)[e1,e2,e1-e2]");
    let cert = verify_boundary_zero(&z)?;
    ensure!(cert.valid && cert.check()?, "boundary certificate invalid");
    let pg = g(vec![vec![0, 1], vec![-1, 0]]);
    let ph = g(vec![vec![0, 1], vec![-1, -1]]);
    let e12 = chain_of(&[vec![1, 0], vec![0, 1]], Q::one())?;
    let e2d = chain_of(&[vec![0, 1], vec![1, -1]], Q::one())?;
    ensure!(e12.act(&pg) == e12.scaled(&-Q::one()), "g does not negate [e1,e2]");
    ensure!(e12.act(&ph) == e2d, "h[e1,e2] != [e2,e1-e2]");
    let hgh = ph.mul(&pg).mul(&ph.inverse());
    ensure!(e2d.act(&hgh) == e2d.scaled(&-Q::one()), "hgh^-1 does not negate [e2,e1-e2]");
    let mut cited = 0;
    for e in &cert.ledger {
        let face = e.face.as_ref().map(|f| f.vectors.clone());
        let w = e.witness.clone();
        let expect = match face.as_deref() {
            Some([a, b]) if a == &vec![0, 1] && b == &vec![1, 0] => Some(&pg),
            Some([a, b]) if a == &vec![0, 1] && b == &vec![1, -1] => Some(&hgh),
            _ => None,
        };
        if let (Some(x), Some(w)) = (expect, w) {
            ensure!(w == *x || w == x.inverse(), "witness {:?} is not g or hgh^-1 up to inverse", w);
            cited += 1;
        }
    }
    ensure!(cited == 2, "expected both printed faces in the ledger, saw {cited}");
    Ok(Ok(format!("{} ledger entries, witnesses g and hgh^-1", cert.ledger.len())))
}

fn item2() -> Outcome {
    let t = builtin_tile("A3")?;
    let order = stabilizer(&t)?.len();
    ensure!(order == 24, "stabilizer order {order}");
    let z = build_zG(3)?;
    let expected = chain_of(
        &[
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![1, -1, 0],
            vec![1, 0, -1],
            vec![0, 1, -1],
        ],
        qf(1, 24),
    )?;
    ensure!(z.chain()? == expected, "z differs from the closed form");
    let cert = verify_boundary_zero(&z)?;
    ensure!(cert.valid && cert.check()?, "boundary certificate invalid");
    let witnessed = cert
        .ledger
        .iter()
        .filter(|e| e.kind == EntryKind::SelfNegating && e.witness.is_some())
        .count();
    ensure!(witnessed == 6, "{witnessed} of 6 boundary terms carry a witness");
    let k = g(vec![vec![0, 0, -1], vec![0, 1, 1], vec![1, 0, 0]]);
    let face = chain_of(
        &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, -1, 0], vec![0, 1, -1]],
        Q::one(),
    )?;
    ensure!(face.act(&k) == face.scaled(&-Q::one()), "k does not negate the printed face");
    Ok(Ok(format!(
        "|Stab| = 24, 6 witnessed faces in {} class(es), k checked",
        cert.classes.len()
    )))
}

fn item3() -> Outcome {
    let reps = representatives(4, None)?;
    ensure!(reps.len() == 2, "{} tile orbits", reps.len());
    ensure!(reps[1].tile.len() == 12, "D4 tile has {} rays", reps[1].tile.len());
    let cfg = reps[1].tile.section_configuration(&(0..12).collect::<Vec<_>>())?;
    let d4 = Triangulation::from_lists(builtin_dataset(4)?.d4_triangulation.as_ref().expect("present"));
    ensure!(is_valid_triangulation(&cfg, &d4), "16-simplex list is not a triangulation");
    // recorded, not required
    let regular = is_regular(&cfg, &d4)?.is_some();
    let z = assemble(&reps)?;
    ensure!(z.len() == 17, "{} terms", z.len());
    let cert = verify_boundary_zero(&z)?;
    ensure!(cert.valid && cert.residual.is_empty(), "residual {:?}", cert.residual);
    ensure!(cert.check()?, "certificate does not re-check");
    Ok(Ok(format!(
        "|Stab| = {} and {}, D4 triangulation regular: {regular}, {} ledger entries, {} classes, empty residual",
        reps[0].stabilizer_order,
        reps[1].stabilizer_order,
        cert.ledger.len(),
        cert.classes.len()
    )))
}

fn item4() -> Outcome {
    let r = verify_an_remark(4)?;
    ensure!(r.single_class, "{} classes", r.classes.len());
    ensure!(r.abs_coefficient.as_deref() == Some("10"), "coefficient {:?}", r.abs_coefficient);
    for n in [2, 3] {
        let s = verify_an_remark(n)?;
        ensure!(s.classes.is_empty(), "n = {n} leaves {} classes", s.classes.len());
    }
    Ok(Ok("n=4: one class, |coefficient| 10; n=2,3: empty".into()))
}

fn item5() -> Outcome {
    let pf = form_from_minvecs("D5", &d5_vectors())?;
    ensure!(pf.verify()?, "D5 minimal vectors not reproduced");
    let tile = builtin_tile("D5")?;
    let facets = tile_facets(&tile)?;
    let census = facet_census(&facets);
    ensure!(
        facets.len() == 400 && census.get(&14) == Some(&320) && census.get(&16) == Some(&80),
        "census {census:?}"
    );
    let data = builtin_dataset(5)?.facet.expect("n = 5 facet");
    ensure!(facets.contains(&data.vertices), "F is not a facet");
    let cfg = tile.section_configuration(&data.vertices)?;
    let local: Vec<Triangulation> = data
        .triangulations
        .iter()
        .map(|t| {
            Triangulation::from_lists(
                &t.iter()
                    .map(|s| s.iter().map(|g| data.vertices.iter().position(|x| x == g).expect("on F")).collect())
                    .collect::<Vec<Vec<usize>>>(),
            )
        })
        .collect();
    for t in &local {
        ensure!(is_valid_triangulation(&cfg, t), "printed triangulation invalid");
        ensure!(is_regular(&cfg, t)?.is_some(), "printed triangulation not regular");
    }
    let all = enumerate_regular_triangulations(&cfg, 1000)?;
    ensure!(all.len() == 3, "{} regular triangulations", all.len());
    let path = flip_path(&cfg, &local[0], &local[1], 1000)?;
    ensure!(path.len() == 1, "flip path of length {}", path.len());
    ensure!(path[0].circuit.labels == data.circuit, "circuit {:?}", path[0].circuit.labels);
    let id = verify_flip_identity(&cfg, &path[0])?;
    // the circuit and its two triangulations are printed in facet-local labels
    let cells = |cells: Vec<crate::polytope::Simplex>| -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = cells.iter().map(|c| c.labels().to_vec()).collect();
        v.sort();
        v
    };
    let removed = cells(path[0].circuit.positive_cells());
    let inserted = cells(path[0].circuit.negative_cells());
    let mut tp = data.t_plus.clone();
    let mut tm = data.t_minus.clone();
    tp.sort();
    tm.sort();
    ensure!(
        (tp == removed && tm == inserted) || (tp == inserted && tm == removed),
        "printed circuit triangulations are not the two sides of the flip"
    );
    let printed_plus_side = if tp == inserted { "inserted" } else { "removed" };
    Ok(Ok(format!(
        "400 = 320 + 80 facets, 3 regular triangulations, one flip, {} links, printed T+ is the {printed_plus_side} side",
        id.links.len()
    )))
}

fn random_circuit(rng: &mut ChaCha8Rng, p: usize) -> Result<Option<(PointConfiguration, Vec<usize>)>> {
    let dim = p - 2;
    let pts: Vec<IVec> = (0..p)
        .map(|_| (0..dim.max(1)).map(|_| rng.gen_range(-6..=6)).collect())
        .collect();
    let cfg = PointConfiguration::from_int(&pts)?;
    let labels: Vec<usize> = (0..p).collect();
    Ok(affine_dependence(&cfg, &labels).ok().map(|_| (cfg, labels)))
}

fn lemma_signs(rng: &mut ChaCha8Rng) -> Result<std::result::Result<usize, String>> {
    let mut tested = 0;
    for p in 3..=6 {
        for _ in 0..10 {
            let Some((_, z)) = random_circuit(rng, p)? else { continue };
            let mut good = 0;
            for mask in 0u32..(1 << p) {
                let mut c = AntisymChain::new();
                for i in 0..p {
                    let tuple: Vec<usize> = z.iter().copied().filter(|&l| l != z[i]).collect();
                    let e = if mask >> i & 1 == 1 { -Q::one() } else { Q::one() };
                    c.add_tuple(tuple, e);
                }
                if c.boundary().is_zero() {
                    let alt = (0..p).all(|i| (mask >> i & 1 == 1) == (i % 2 == 0))
                        || (0..p).all(|i| (mask >> i & 1 == 1) == (i % 2 == 1));
                    if !alt {
                        return Ok(Err(format!("non-alternating pattern {mask:b} for p = {p}")));
                    }
                    good += 1;
                }
            }
            if good != 2 {
                return Ok(Err(format!("{good} patterns for p = {p}")));
            }
            tested += 1;
        }
    }
    Ok(Ok(tested))
}

fn pyramid_remark() -> Result<std::result::Result<(), String>> {
    let cfg = PointConfiguration::from_int(&[
        vec![0, 0, 0],
        vec![1, 0, 0],
        vec![1, 1, 0],
        vec![0, 1, 0],
        vec![0, 0, 1],
    ])?;
    let a = Triangulation::from_lists(&[vec![0, 1, 2, 4], vec![0, 2, 3, 4]]);
    let b = Triangulation::from_lists(&[vec![0, 1, 3, 4], vec![1, 2, 3, 4]]);
    let (path, fl) = flipons_for_config(&cfg, &a, &b, 10)?;
    if path.len() != 1 || fl.len() != 1 {
        return Ok(Err("pyramid needs exactly one flip".into()));
    }
    // -[2345] + [1345] - [1245] + [1235], labels shifted to start at 0
    let mut printed = AntisymChain::new();
    for (t, c) in [
        (vec![1, 2, 3, 4], -1),
        (vec![0, 2, 3, 4], 1),
        (vec![0, 1, 3, 4], -1),
        (vec![0, 1, 2, 4], 1),
    ] {
        printed.add_tuple(t, Q::from_integer(c.into()));
    }
    let z = alternating_circuit_sum(&[0, 1, 2, 3], &[4]);
    if z != printed && z.negated() != printed {
        return Ok(Err("alternating sum differs from the printed identity".into()));
    }
    let s = secondary_flipons_in(&cfg, &fl[0].label_terms(), 4)?;
    if !(s.identity_holds() && s.ii_iii_cancel()) {
        return Ok(Err("Omega identity fails on the pyramid".into()));
    }
    let square: Vec<Vec<usize>> = s.psi.iter().map(|(k, _)| k.clone()).collect();
    if square != vec![vec![0, 1, 2, 3]] {
        return Ok(Err(format!("error term {square:?} is not the square")));
    }
    Ok(Ok(()))
}

fn random_vectors(rng: &mut ChaCha8Rng, n: usize, m: usize, r: i64) -> Vec<IVec> {
    (0..m)
        .map(|_| loop {
            let v: IVec = (0..n).map(|_| rng.gen_range(-r..=r)).collect();
            if v.iter().any(|&x| x != 0) {
                break v;
            }
        })
        .collect()
}

fn boundary_squared(rng: &mut ChaCha8Rng) -> Result<std::result::Result<usize, String>> {
    let mut count = 0;
    for n in 2..=4 {
        for k in 1..=2 {
            for _ in 0..100 {
                let mut c = SharblyChain::new();
                for _ in 0..3 {
                    let vs = random_vectors(rng, n, n + k + 1, 3);
                    c.add_vectors(&vs, Q::from_integer(rng.gen_range(-5..=5).into()))?;
                }
                if !c.boundary()?.boundary()?.is_empty() {
                    return Ok(Err(format!("dd != 0 for n = {n}, k = {k}")));
                }
                count += 1;
            }
        }
    }
    Ok(Ok(count))
}

fn telescoping(rng: &mut ChaCha8Rng) -> Result<std::result::Result<usize, String>> {
    let mut done = 0;
    let mut attempts = 0;
    while done < 12 && attempts < 200 {
        attempts += 1;
        let dim = if done % 2 == 0 { 2 } else { 3 };
        let m = rng.gen_range(dim + 2..=7);
        let pts = random_vectors(rng, dim, m, 5);
        let Ok(cfg) = PointConfiguration::from_int(&pts) else { continue };
        if !cfg.is_full_dimensional() || pts.iter().enumerate().any(|(i, p)| pts[..i].contains(p)) {
            continue;
        }
        let mut o1: Vec<usize> = (0..m).collect();
        let mut o2 = o1.clone();
        o1.shuffle(rng);
        o2.shuffle(rng);
        let (t1, _) = placing_triangulation(&cfg, &o1)?;
        let (t2, _) = placing_triangulation(&cfg, &o2)?;
        match flipons_for_config(&cfg, &t1, &t2, 5000) {
            Ok(_) => done += 1,
            Err(crate::Error::BudgetExceeded(_)) => continue,
            Err(e) => return Ok(Err(format!("configuration {pts:?}: {e}"))),
        }
    }
    Ok(Ok(done))
}

fn item6(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let signs = match lemma_signs(&mut rng)? {
        Ok(c) => c,
        Err(e) => return Ok(Err(e)),
    };
    if let Err(e) = pyramid_remark()? {
        return Ok(Err(e));
    }
    let dd = match boundary_squared(&mut rng)? {
        Ok(c) => c,
        Err(e) => return Ok(Err(e)),
    };
    let tele = match telescoping(&mut rng)? {
        Ok(c) => c,
        Err(e) => return Ok(Err(e)),
    };
    ensure!(tele >= 10, "only {tele} telescoping configurations completed");
    Ok(Ok(format!(
        "{signs} circuits with 2 sign patterns, pyramid ok, {dd} chains with dd = 0, {tele} telescoping paths"
    )))
}

fn item7(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut tested = 0;
    let mut flipons = 0;
    while tested < 1200 {
        let n = if tested % 2 == 0 { 2 } else { 3 };
        let d = n * (n + 1) / 2;
        let vs = random_vectors(&mut rng, n, d, 2);
        let Some((_, b)) = canonicalize_int(&vs)? else { continue };
        let a = is_flipon(&b.vectors)?;
        let r = is_flipon_by_rank(&b.vectors);
        let proper = OrientedSectionSimplex::from_vectors(&b.vectors)?.is_proper();
        ensure!(a == r && a == !proper, "predicates disagree on {:?}", b.vectors);
        flipons += usize::from(a);
        tested += 1;
    }
    let ex = vec![
        vec![1, 0, 0],
        vec![0, 1, 0],
        vec![1, 1, 0],
        vec![1, -1, 0],
        vec![0, 0, 1],
        vec![1, 0, 1],
    ];
    ensure!(is_flipon(&ex)? && is_flipon_by_rank(&ex), "n=3 example is not a flipon");
    for n in 2..=4 {
        let c = mu_sign_certificate(&build_zG(n)?.chain()?)?;
        ensure!(c.valid, "positivity fails for n = {n}");
    }
    Ok(Ok(format!("{tested} random sharblies ({flipons} flipons) agree; positivity n=2,3,4")))
}

fn item8() -> Outcome {
    let mut names = Vec::new();
    for f in all_forms() {
        let pf = form_from_minvecs(&f.name, &f.vectors)?;
        ensure!(pf.verify()?, "{} does not reproduce its vectors", f.name);
        names.push(f.name);
    }
    Ok(Ok(names.join(" ")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_items() {
        for id in [1, 2, 4] {
            let r = run_item(id, &ReproOptions::default());
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
        assert!(run_item(5, &ReproOptions { skip_n5: true, ..Default::default() }).skipped);
        assert!(!run_item(99, &ReproOptions::default()).passed);
    }
}
