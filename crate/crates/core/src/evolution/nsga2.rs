//! Non-dominated sorting and crowding distance (minimisation).

use std::cmp::Ordering;

use crate::error::EvolutionError;

/// `a` dominates `b`: no worse everywhere, strictly better somewhere.
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

/// Fronts of indices, best first; each front is in ascending index order.
pub fn fast_nondominated_sort<V: AsRef<[f64]>>(objectives: &[V]) -> Result<Vec<Vec<usize>>, EvolutionError> {
    let n = objectives.len();
    if let Some(first) = objectives.first() {
        let m = first.as_ref().len();
        if let Some(bad) = objectives.iter().find(|v| v.as_ref().len() != m) {
            return Err(EvolutionError::MixedObjectiveLengths(m, bad.as_ref().len()));
        }
    }
    let mut dominated_by_count = vec![0usize; n];
    let mut dominates_list: Vec<Vec<usize>> = vec![Vec::new(); n];
    for p in 0..n {
        for q in (p + 1)..n {
            let (a, b) = (objectives[p].as_ref(), objectives[q].as_ref());
            if dominates(a, b) {
                dominates_list[p].push(q);
                dominated_by_count[q] += 1;
            } else if dominates(b, a) {
                dominates_list[q].push(p);
                dominated_by_count[p] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            for &q in &dominates_list[p] {
                dominated_by_count[q] -= 1;
                if dominated_by_count[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    Ok(fronts)
}

/// Crowding distance of each front member; extremes get `f64::INFINITY`.
pub fn crowding_distance<V: AsRef<[f64]>>(front: &[V]) -> Vec<f64> {
    let n = front.len();
    if n == 0 {
        return Vec::new();
    }
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let m = front[0].as_ref().len();
    let mut distance = vec![0.0; n];
    let mut order: Vec<usize> = (0..n).collect();
    for k in 0..m {
        let value = |i: usize| front[i].as_ref()[k];
        order.sort_by(|&a, &b| value(a).total_cmp(&value(b)).then(a.cmp(&b)));
        let (first, last) = (order[0], order[n - 1]);
        distance[first] = f64::INFINITY;
        distance[last] = f64::INFINITY;
        let range = value(last) - value(first);
        if range <= 0.0 {
            continue;
        }
        for w in order.windows(3) {
            distance[w[1]] += (value(w[2]) - value(w[0])) / range;
        }
    }
    distance
}

/// Rank (0 = first front) and crowding distance for every individual.
pub fn rank_and_crowd<V: AsRef<[f64]>>(objectives: &[V]) -> Result<(Vec<usize>, Vec<f64>), EvolutionError> {
    let fronts = fast_nondominated_sort(objectives)?;
    let mut rank = vec![0; objectives.len()];
    let mut crowd = vec![0.0; objectives.len()];
    for (r, front) in fronts.iter().enumerate() {
        let members: Vec<&[f64]> = front.iter().map(|&i| objectives[i].as_ref()).collect();
        for (&i, d) in front.iter().zip(crowding_distance(&members)) {
            rank[i] = r;
            crowd[i] = d;
        }
    }
    Ok((rank, crowd))
}

/// Crowded comparison: lower rank, then larger distance, then lower index.
pub fn crowded_cmp(a: usize, b: usize, rank: &[usize], crowd: &[f64]) -> Ordering {
    rank[a]
        .cmp(&rank[b])
        .then_with(|| crowd[b].total_cmp(&crowd[a]))
        .then(a.cmp(&b))
}

/// Pick `count` survivors: whole fronts first, the overflowing front by crowding.
pub fn select_survivors<V: AsRef<[f64]>>(objectives: &[V], count: usize) -> Result<Vec<usize>, EvolutionError> {
    let fronts = fast_nondominated_sort(objectives)?;
    let mut chosen = Vec::with_capacity(count);
    for front in fronts {
        if chosen.len() + front.len() <= count {
            chosen.extend(front);
            if chosen.len() == count {
                break;
            }
            continue;
        }
        let members: Vec<&[f64]> = front.iter().map(|&i| objectives[i].as_ref()).collect();
        let crowd = crowding_distance(&members);
        let mut order: Vec<usize> = (0..front.len()).collect();
        order.sort_by(|&a, &b| crowd[b].total_cmp(&crowd[a]).then(a.cmp(&b)));
        let room = count - chosen.len();
        chosen.extend(order.into_iter().take(room).map(|j| front[j]));
        break;
    }
    Ok(chosen)
}
