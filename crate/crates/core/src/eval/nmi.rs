//! Normalized mutual information between two partitions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NmiScore {
    pub value: f64,
    pub mutual_information: f64,
    pub entropy_a: f64,
    pub entropy_b: f64,
}

/// Sum after sorting so the result is independent of term order.
fn stable_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.into_iter().sum()
}

fn entropy(sizes: &[usize], n: f64) -> f64 {
    stable_sum(
        sizes
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / n;
                -p * p.ln()
            })
            .collect(),
    )
}

/// `2 I(A, B) / (H(A) + H(B))` with natural logarithms.
///
/// Two single-community partitions score 1; if exactly one side has a
/// single community the mutual information is 0 and so is the score.
pub fn nmi(a: &Partition, b: &Partition) -> Result<NmiScore> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let n = a.len() as f64;
    let (sa, sb) = (a.sizes(), b.sizes());
    let mut joint = std::collections::HashMap::new();
    for (&x, &y) in a.as_slice().iter().zip(b.as_slice()) {
        *joint.entry((x, y)).or_insert(0usize) += 1;
    }
    let mutual_information = stable_sum(
        joint
            .iter()
            .map(|(&(x, y), &c)| {
                let c = c as f64;
                c / n * (n * c / (sa[x] as f64 * sb[y] as f64)).ln()
            })
            .collect(),
    )
    .max(0.0);
    let (entropy_a, entropy_b) = (entropy(&sa, n), entropy(&sb, n));
    let denom = entropy_a + entropy_b;
    // partitions are canonically numbered, so equal slices mean equal groupings
    let value = if a.is_empty() || denom == 0.0 || a.as_slice() == b.as_slice() {
        1.0
    } else {
        (2.0 * mutual_information / denom).clamp(0.0, 1.0)
    };
    Ok(NmiScore {
        value,
        mutual_information,
        entropy_a,
        entropy_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_and_degenerate() {
        let a = Partition::from_labels(&[0, 0, 1, 1, 2]);
        assert_eq!(nmi(&a, &a).unwrap().value, 1.0);
        let s = nmi(&Partition::singletons(5), &Partition::single(5)).unwrap();
        assert_eq!(s.value, 0.0);
        assert_eq!(
            nmi(&Partition::single(4), &Partition::single(4))
                .unwrap()
                .value,
            1.0
        );
        assert!(nmi(&Partition::single(4), &Partition::single(3)).is_err());
    }
}
