//! Maximality test: search for an admissible refinement.
//!
//! Merging two color classes never breaks admissibility, so a coloring has
//! an admissible refinement with more colors iff some single class can be
//! split in two. For each class we collect, per vertex pair, the witnessing
//! directions whose shared color is that class. A pair whose only witnesses
//! lie in the class needs at least one witnessing edge pair to stay
//! together; a single witness forces a union outright. What remains is a
//! small 2-coloring problem over union-find components, solved by
//! backtracking.

use crate::coloring::{normalize, ColorId, EdgeColoring};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementWitness {
    pub finer: EdgeColoring,
    /// For each color of `finer`, the input color it merges back into.
    pub merged_from: Vec<ColorId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refinement {
    Maximal,
    Refined(RefinementWitness),
}

impl Refinement {
    pub fn is_maximal(&self) -> bool {
        matches!(self, Refinement::Maximal)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // keep the smaller root so component order follows edge order
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Find an admissible coloring strictly finer than `c`, or report that `c`
/// is maximal. Classes are tried in color order and the first split found
/// (least side vector, side 0 first) is returned.
pub fn find_refinement(c: &EdgeColoring) -> Result<Refinement> {
    c.require_admissible()?;
    let cube = c.cube();
    let n = c.n();
    let nv = cube.vertex_count() as u32;

    // Pairs whose witnesses all share one color: (color, list of edge index pairs).
    let mut constrained: Vec<Vec<Vec<(usize, usize)>>> = vec![Vec::new(); c.color_count()];
    for a in 0..nv {
        for b in (a + 1)..nv {
            let diff = a ^ b;
            if diff.count_ones() == 1 {
                continue;
            }
            let mut color: Option<ColorId> = None;
            let mut mixed = false;
            let mut pairs = Vec::new();
            for d in (0..n).filter(|d| diff >> d & 1 == 1) {
                let (ea, eb) = (cube.incident_index(a, d), cube.incident_index(b, d));
                let ca = c.colors()[ea];
                if ca != c.colors()[eb] {
                    continue;
                }
                match color {
                    None => color = Some(ca),
                    Some(k) if k != ca => {
                        mixed = true;
                        break;
                    }
                    _ => {}
                }
                pairs.push((ea, eb));
            }
            if !mixed {
                let k = color.expect("admissible pair has a witness");
                constrained[k as usize].push(pairs);
            }
        }
    }

    for (color, clauses) in constrained.iter().enumerate() {
        let members: Vec<usize> =
            c.colors().iter().enumerate().filter(|(_, &k)| k as usize == color).map(|(i, _)| i).collect();
        if members.len() < 2 {
            continue;
        }
        if let Some(sides) = split_class(&members, clauses) {
            let fresh = c.color_count() as ColorId;
            let mut raw = c.colors().to_vec();
            for (&edge, &side) in members.iter().zip(&sides) {
                if side {
                    raw[edge] = fresh;
                }
            }
            let (colors, origin) = normalize(&raw);
            let merged_from = origin.iter().map(|&k| if k == fresh { color as ColorId } else { k }).collect();
            let finer = EdgeColoring::from_normalized(cube, colors);
            return Ok(Refinement::Refined(RefinementWitness { finer, merged_from }));
        }
    }
    Ok(Refinement::Maximal)
}

/// Try to split one class in two. Returns a side per member edge.
fn split_class(members: &[usize], clauses: &[Vec<(usize, usize)>]) -> Option<Vec<bool>> {
    let local = |e: usize| members.binary_search(&e).expect("edge in class");
    let mut uf = UnionFind::new(members.len());
    let mut open: Vec<Vec<(usize, usize)>> =
        clauses.iter().map(|cl| cl.iter().map(|&(x, y)| (local(x), local(y))).collect()).collect();

    // Unit propagation to a fixpoint.
    loop {
        let mut changed = false;
        let mut next = Vec::with_capacity(open.len());
        for clause in open {
            let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(clause.len());
            let mut satisfied = false;
            for (x, y) in clause {
                let (rx, ry) = (uf.find(x), uf.find(y));
                if rx == ry {
                    satisfied = true;
                    break;
                }
                let p = (rx.min(ry), rx.max(ry));
                if !pairs.contains(&p) {
                    pairs.push(p);
                }
            }
            if satisfied {
                continue;
            }
            if pairs.len() == 1 {
                uf.union(pairs[0].0, pairs[0].1);
                changed = true;
            } else {
                next.push(pairs);
            }
        }
        open = next;
        if !changed {
            break;
        }
    }

    let mut roots: Vec<usize> = (0..members.len()).map(|i| uf.find(i)).collect();
    let mut comp_ids: Vec<usize> = roots.clone();
    comp_ids.sort_unstable();
    comp_ids.dedup();
    if comp_ids.len() < 2 {
        return None;
    }
    for r in roots.iter_mut() {
        *r = comp_ids.binary_search(r).expect("root listed");
    }
    let clauses: Vec<Vec<(usize, usize)>> = open
        .into_iter()
        .map(|cl| {
            cl.into_iter()
                .map(|(x, y)| (comp_ids.binary_search(&x).unwrap(), comp_ids.binary_search(&y).unwrap()))
                .collect()
        })
        .collect();
    // A clause can be checked once its largest component is assigned.
    let mut due: Vec<Vec<usize>> = vec![Vec::new(); comp_ids.len()];
    for (i, cl) in clauses.iter().enumerate() {
        let last = cl.iter().map(|&(x, y)| x.max(y)).max().expect("nonempty clause");
        due[last].push(i);
    }

    let mut sides = vec![false; comp_ids.len()];
    if assign(1, &mut sides, &clauses, &due) {
        Some(roots.iter().map(|&r| sides[r]).collect())
    } else {
        None
    }
}

fn assign(k: usize, sides: &mut [bool], clauses: &[Vec<(usize, usize)>], due: &[Vec<usize>]) -> bool {
    if k == sides.len() {
        return sides.iter().any(|&s| s);
    }
    for side in [false, true] {
        sides[k] = side;
        let ok = due[k].iter().all(|&i| clauses[i].iter().any(|&(x, y)| sides[x] == sides[y]));
        if ok && assign(k + 1, sides, clauses, due) {
            return true;
        }
    }
    sides[k] = false;
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{fixture, minimal_coloring, Fixture};

    #[test]
    fn reference_colorings_are_maximal() {
        assert!(find_refinement(&fixture(Fixture::Fig1).coloring).unwrap().is_maximal());
        assert!(find_refinement(&fixture(Fixture::Fig2).coloring).unwrap().is_maximal());
        assert!(find_refinement(&fixture(Fixture::Bdf4).coloring).unwrap().is_maximal());
    }

    #[test]
    fn q2_both_directions_monochromatic_refines_to_three_colors() {
        let c = EdgeColoring::from_raw(2, &[0, 0, 1, 1]).unwrap();
        let Refinement::Refined(w) = find_refinement(&c).unwrap() else { panic!("expected a refinement") };
        assert_eq!(w.finer.color_count(), 3);
        assert!(w.finer.is_admissible());
        assert!(c.precedes(&w.finer));
        let merged: Vec<ColorId> = w.finer.colors().iter().map(|&k| w.merged_from[k as usize]).collect();
        assert_eq!(EdgeColoring::from_raw(2, &merged).unwrap(), c);
    }

    #[test]
    fn minimal_coloring_is_not_maximal() {
        for n in 1..=4 {
            let r = find_refinement(&minimal_coloring(n).unwrap()).unwrap();
            assert_eq!(r.is_maximal(), n == 1);
        }
    }

    #[test]
    fn rejects_inadmissible() {
        let c = EdgeColoring::from_raw(2, &[0, 1, 2, 3]).unwrap();
        assert!(find_refinement(&c).is_err());
    }
}
