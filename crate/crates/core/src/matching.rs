//! Bipartite perfect matching by augmenting paths (Kuhn's algorithm).

/// Finds a perfect matching between `n` left and `n` right vertices.
///
/// Returns `mate[left] = right`, or `None` if no perfect matching exists.
pub(crate) fn perfect_matching(n: usize, adjacent: impl Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    let mut right_mate: Vec<Option<usize>> = vec![None; n];
    for left in 0..n {
        let mut seen = vec![false; n];
        if !augment(left, &adjacent, &mut seen, &mut right_mate) {
            return None;
        }
    }
    let mut mate = vec![usize::MAX; n];
    for (r, l) in right_mate.iter().enumerate() {
        mate[l.expect("perfect")] = r;
    }
    Some(mate)
}

fn augment(
    left: usize,
    adjacent: &impl Fn(usize, usize) -> bool,
    seen: &mut [bool],
    right_mate: &mut [Option<usize>],
) -> bool {
    // a free right vertex ends the path immediately
    if let Some(r) = (0..right_mate.len()).find(|&r| !seen[r] && right_mate[r].is_none() && adjacent(left, r)) {
        right_mate[r] = Some(left);
        return true;
    }
    for r in 0..right_mate.len() {
        if seen[r] || !adjacent(left, r) {
            continue;
        }
        seen[r] = true;
        if right_mate[r].is_some_and(|other| augment(other, adjacent, seen, right_mate)) {
            right_mate[r] = Some(left);
            return true;
        }
    }
    false
}
