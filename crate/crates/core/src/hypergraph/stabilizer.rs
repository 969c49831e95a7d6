//! Setwise stabilizers by backtracking over a stabilizer chain.

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

/// `{ g ∈ G : Y^g = Y }`.
///
/// The chain is rebuilt with the points of `Y` (or of its complement, if that
/// is smaller) first in the base. An element then stabilizes `Y` exactly when
/// it maps each of those base points into `Y`, so the search only has to
/// branch on the first `|Y|` levels. Images already reachable by the
/// generators found so far are skipped.
pub fn setwise_stabilizer(group: &PermGroup, y: &VertexSet) -> Result<PermGroup> {
    let n = group.degree();
    if y.iter().any(|p| p >= n) {
        return Err(Error::InvalidArgument(format!("subset {y:?} is not within {n} points")));
    }
    let mut set = y.clone();
    if set.words().len() != crate::bitset::words_for(n) {
        set = VertexSet::from_points(n, y.iter());
    }
    if 2 * set.len() > n {
        set = set.complement(n);
    }
    let points = set.to_vec();
    let m = points.len();
    if m == 0 || m == n {
        return Ok(group.clone());
    }
    let chain = PermGroup::with_base_prefix(n, group.generators().to_vec(), &points)?;

    let mut gens: Vec<Permutation> = chain.level_generators(m).to_vec();
    let identity = Permutation::identity(n);
    for level in (0..m).rev() {
        let b = points[level];
        let mut failed: Vec<usize> = Vec::new();
        let candidates: Vec<usize> = chain
            .basic_orbit(level)
            .iter()
            .copied()
            .filter(|&g| g != b && set.contains(g))
            .collect();
        for gamma in candidates {
            let orbit = orbit_of(n, &gens, gamma);
            if orbit[b] || failed.iter().any(|&f| orbit[f]) {
                continue;
            }
            let u = chain.transversal_element(level, gamma).expect("gamma lies in the basic orbit");
            match extend(&chain, &set, &points, level + 1, u) {
                Some(g) => gens.push(g),
                None => failed.push(gamma),
            }
        }
    }
    gens.retain(|g| *g != identity);
    gens.dedup();
    PermGroup::with_base_prefix(n, gens, &points)
}

/// Completes the partial element `s` (which already maps the first `level`
/// base points into the set) through the remaining prefix levels.
fn extend(chain: &PermGroup, set: &VertexSet, points: &[usize], level: usize, s: &Permutation) -> Option<Permutation> {
    if level == points.len() {
        return Some(s.clone());
    }
    for &delta in chain.basic_orbit(level) {
        if !set.contains(s.apply(delta)) {
            continue;
        }
        let u = chain.transversal_element(level, delta).unwrap();
        if let Some(g) = extend(chain, set, points, level + 1, &u.then(s)) {
            return Some(g);
        }
    }
    None
}

fn orbit_of(n: usize, gens: &[Permutation], point: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[point] = true;
    let mut stack = vec![point];
    while let Some(p) = stack.pop() {
        for g in gens {
            let q = g.apply(p);
            if !seen[q] {
                seen[q] = true;
                stack.push(q);
            }
        }
    }
    seen
}
