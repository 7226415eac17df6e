//! Brute-force oracles shared by the oracle and acceptance targets.

#![allow(dead_code)]

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            rec(n, k, x + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

pub fn mean_pair_distance(positions: &[i64]) -> f64 {
    let mut total = 0i64;
    let mut pairs = 0i64;
    for a in 0..positions.len() {
        for b in a + 1..positions.len() {
            total += (positions[a] - positions[b]).abs();
            pairs += 1;
        }
    }
    total as f64 / pairs as f64
}

/// Residents sit at positions 1..=S. A removal set of p residents leaves and
/// p incomers arrive at positions X; average over all removal sets and all
/// position sets of the mean pairwise distance inside the category.
pub fn intra_oracle(s: usize, p: usize) -> f64 {
    let mut total = 0.0;
    let mut count = 0usize;
    for removed in subsets(s, p) {
        for incoming in subsets(s, p) {
            let mut members: Vec<i64> = (1..=s as i64)
                .filter(|&i| !removed.contains(&(i as usize - 1)))
                .collect();
            members.extend(incoming.iter().map(|&x| x as i64 + 1));
            total += mean_pair_distance(&members);
            count += 1;
        }
    }
    total / count as f64
}

/// Two blocks of S ranks, the second starting `S * (D + 1)` ranks after the
/// first. Each category picks p members and the two picks trade ranks; the
/// average is over all C(S, p)^2 picks and all S^2 cross-category pairs.
pub fn inter_oracle(s: usize, p: usize, gap: usize) -> f64 {
    let offset = (s * (gap + 1)) as i64;
    let mut total = 0.0;
    let mut count = 0usize;
    for pick_a in subsets(s, p) {
        for pick_b in subsets(s, p) {
            let mut rank_a: Vec<i64> = (0..s as i64).collect();
            let mut rank_b: Vec<i64> = (0..s as i64).map(|i| offset + i).collect();
            for (&x, &y) in pick_a.iter().zip(&pick_b) {
                std::mem::swap(&mut rank_a[x], &mut rank_b[y]);
            }
            let mut sum = 0i64;
            for &ra in &rank_a {
                for &rb in &rank_b {
                    sum += (ra - rb).abs();
                }
            }
            total += sum as f64 / (s * s) as f64;
            count += 1;
        }
    }
    total / count as f64
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
