use std::cmp::Ordering;

use crate::solution::{dominates_unchecked, Solution};

/// Splits `pop` into non-dominated fronts (front 0 best) and writes each
/// solution's front number into its `rank` field. Indices inside a front are
/// ascending.
pub fn fast_nondominated_sort(pop: &mut [Solution]) -> Vec<Vec<usize>> {
    let n = pop.len();
    let mut dominated_by_me: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];

    for p in 0..n {
        for q in (p + 1)..n {
            if dominates_unchecked(&pop[p], &pop[q]) {
                dominated_by_me[p].push(q);
                domination_count[q] += 1;
            } else if dominates_unchecked(&pop[q], &pop[p]) {
                dominated_by_me[q].push(p);
                domination_count[p] += 1;
            }
        }
    }

    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| domination_count[i] == 0).collect();
    let mut rank = 0;
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            pop[p].rank = rank;
            for &q in &dominated_by_me[p] {
                domination_count[q] -= 1;
                if domination_count[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
        rank += 1;
    }
    fronts
}

/// Crowding distance for the members of `front` (indices into `pop`),
/// written into their `crowding` field.
pub fn assign_crowding_distance(pop: &mut [Solution], front: &[usize]) {
    let distances = {
        let members: Vec<&Solution> = front.iter().map(|&i| &pop[i]).collect();
        crowding_distances(&members)
    };
    for (&i, d) in front.iter().zip(distances) {
        pop[i].crowding = d;
    }
}

/// Crowding distances of a mutually non-dominated set, in input order.
///
/// Per objective the extreme members get `+inf` and every interior member
/// accumulates the normalized gap between its two neighbours. An objective
/// with zero range contributes nothing.
pub fn crowding_distances(front: &[&Solution]) -> Vec<f64> {
    let n = front.len();
    let mut dist = vec![0.0; n];
    if n <= 2 {
        dist.fill(f64::INFINITY);
        return dist;
    }
    let m = front[0].f.len();
    let mut order: Vec<usize> = (0..n).collect();
    for k in 0..m {
        order.sort_by(|&a, &b| front[a].f[k].total_cmp(&front[b].f[k]));
        let lo = front[order[0]].f[k];
        let hi = front[order[n - 1]].f[k];
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for w in order.windows(3) {
            let gap = front[w[2]].f[k] - front[w[0]].f[k];
            dist[w[1]] += gap / range;
        }
    }
    dist
}

/// Crowded-comparison order: lower rank first, then larger crowding.
pub fn crowded_cmp(a: &Solution, b: &Solution) -> Ordering {
    a.rank
        .cmp(&b.rank)
        .then_with(|| b.crowding.total_cmp(&a.crowding))
}

/// Binary tournament winner under [`crowded_cmp`]; `a` wins exact ties.
pub fn crowded_tournament<'a>(a: &'a Solution, b: &'a Solution) -> &'a Solution {
    if crowded_cmp(b, a) == Ordering::Less {
        b
    } else {
        a
    }
}

/// Picks `n` survivors from `merged`: whole fronts in rank order, then the
/// most widely spaced members of the first front that does not fit (by
/// descending crowding distance, lower index first on ties). Survivors keep
/// the rank and crowding computed within `merged`.
pub fn environmental_selection(mut merged: Vec<Solution>, n: usize) -> Vec<Solution> {
    let fronts = fast_nondominated_sort(&mut merged);
    let mut chosen = Vec::with_capacity(n);
    for front in fronts {
        assign_crowding_distance(&mut merged, &front);
        let missing = n - chosen.len();
        if front.len() <= missing {
            chosen.extend_from_slice(&front);
        } else {
            let mut front = front;
            front.sort_by(|&a, &b| merged[b].crowding.total_cmp(&merged[a].crowding));
            chosen.extend_from_slice(&front[..missing]);
        }
        if chosen.len() == n {
            break;
        }
    }
    let mut slots: Vec<Option<Solution>> = merged.into_iter().map(Some).collect();
    chosen
        .into_iter()
        .map(|i| slots[i].take().expect("index chosen twice"))
        .collect()
}
