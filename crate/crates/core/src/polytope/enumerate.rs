//! Breadth-first search over regular triangulations connected by flips.

use std::collections::{BTreeMap, VecDeque};

use super::flip::{apply_flip, supported_flips, Flip};
use super::triangulation::{is_regular, placing_triangulation};
use super::{PointConfiguration, Triangulation};
use crate::{Error, Result};

/// Regular neighbours of `t` together with the flip leading to each.
fn regular_neighbours(
    config: &PointConfiguration,
    t: &Triangulation,
) -> Result<Vec<(Flip, Triangulation)>> {
    let mut out = Vec::new();
    for f in supported_flips(config, t)? {
        let next = match apply_flip(config, t, &f) {
            Ok(n) => n,
            Err(Error::FlipNotApplicable(_)) => continue,
            Err(e) => return Err(e),
        };
        if is_regular(config, &next)?.is_some() {
            out.push((f, next));
        }
    }
    Ok(out)
}

/// All regular triangulations, found by flipping outward from the placing
/// triangulation in label order. At most `budget` triangulations are
/// expanded before giving up.
pub fn enumerate_regular_triangulations(
    config: &PointConfiguration,
    budget: usize,
) -> Result<Vec<Triangulation>> {
    let order: Vec<usize> = (0..config.len()).collect();
    let (start, _) = placing_triangulation(config, &order)?;
    let mut seen: Vec<Triangulation> = vec![start.clone()];
    let mut index: BTreeMap<Triangulation, usize> = BTreeMap::from([(start, 0)]);
    let mut queue = VecDeque::from([0usize]);
    let mut expanded = 0;
    while let Some(i) = queue.pop_front() {
        expanded += 1;
        if expanded > budget {
            return Err(Error::BudgetExceeded(format!(
                "more than {budget} triangulations expanded"
            )));
        }
        let t = seen[i].clone();
        for (_, next) in regular_neighbours(config, &t)? {
            if !index.contains_key(&next) {
                index.insert(next.clone(), seen.len());
                queue.push_back(seen.len());
                seen.push(next);
            }
        }
    }
    seen.sort();
    Ok(seen)
}

/// A shortest sequence of flips through regular triangulations taking `t1`
/// to `t2`.
pub fn flip_path(
    config: &PointConfiguration,
    t1: &Triangulation,
    t2: &Triangulation,
    budget: usize,
) -> Result<Vec<Flip>> {
    for t in [t1, t2] {
        if is_regular(config, t)?.is_none() {
            return Err(Error::NotRegular);
        }
    }
    let mut parent: BTreeMap<Triangulation, Option<(Triangulation, Flip)>> =
        BTreeMap::from([(t1.clone(), None)]);
    let mut queue = VecDeque::from([t1.clone()]);
    let mut expanded = 0;
    while let Some(t) = queue.pop_front() {
        if &t == t2 {
            let mut path = Vec::new();
            let mut cur = t;
            while let Some(Some((prev, f))) = parent.get(&cur).cloned() {
                path.push(f);
                cur = prev;
            }
            path.reverse();
            return Ok(path);
        }
        expanded += 1;
        if expanded > budget {
            return Err(Error::BudgetExceeded(format!(
                "more than {budget} triangulations expanded"
            )));
        }
        for (f, next) in regular_neighbours(config, &t)? {
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((t.clone(), f)));
                queue.push_back(next);
            }
        }
    }
    Err(Error::NotFound("no flip path between the triangulations".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_and_pyramid_counts() {
        let sq = PointConfiguration::from_int(&[vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 1]])
            .unwrap();
        let all = enumerate_regular_triangulations(&sq, 100).unwrap();
        assert_eq!(all.len(), 2);
        let path = flip_path(&sq, &all[0], &all[1], 100).unwrap();
        assert_eq!(path.len(), 1);
        assert!(flip_path(&sq, &all[0], &all[0], 100).unwrap().is_empty());

        let pyr = PointConfiguration::from_int(&[
            vec![0, 0, 0],
            vec![1, 0, 0],
            vec![1, 1, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
        ])
        .unwrap();
        assert_eq!(enumerate_regular_triangulations(&pyr, 100).unwrap().len(), 2);
    }

    #[test]
    fn pentagon_has_five() {
        let c = PointConfiguration::from_int(&[
            vec![0, 0],
            vec![2, 0],
            vec![3, 2],
            vec![1, 3],
            vec![-1, 2],
        ])
        .unwrap();
        assert_eq!(enumerate_regular_triangulations(&c, 100).unwrap().len(), 5);
    }

    #[test]
    fn square_with_center() {
        let c = PointConfiguration::from_int(&[
            vec![0, 0],
            vec![2, 0],
            vec![2, 2],
            vec![0, 2],
            vec![1, 1],
        ])
        .unwrap();
        let all = enumerate_regular_triangulations(&c, 100).unwrap();
        assert_eq!(all.len(), 3);
        for a in &all {
            for b in &all {
                assert!(flip_path(&c, a, b, 100).is_ok());
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let c = PointConfiguration::from_int(&[
            vec![0, 0],
            vec![2, 0],
            vec![3, 2],
            vec![1, 3],
            vec![-1, 2],
        ])
        .unwrap();
        assert!(matches!(
            enumerate_regular_triangulations(&c, 2),
            Err(Error::BudgetExceeded(_))
        ));
    }
}
