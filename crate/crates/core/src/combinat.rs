//! Enumerators for the ordered partitions every brace sum runs over.
//!
//! Positions are zero-based throughout.  All enumerators return their
//! results in a fixed lexicographic order.

use crate::sign::parity_of;

/// A tuple of disjoint blocks covering `0..n`, each block sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderedSetPartition {
    blocks: Vec<Vec<usize>>,
    contiguous: bool,
}

impl OrderedSetPartition {
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn is_contiguous(&self) -> bool {
        self.contiguous
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Checks disjointness, coverage, sortedness and (if flagged) contiguity.
    pub fn is_valid(&self) -> bool {
        let n = self.len();
        let mut seen = vec![false; n];
        for b in &self.blocks {
            if b.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            for &i in b {
                if i >= n || seen[i] {
                    return false;
                }
                seen[i] = true;
            }
        }
        if self.contiguous {
            let flat: Vec<usize> = self.blocks.iter().flatten().copied().collect();
            return flat.iter().enumerate().all(|(p, &i)| p == i);
        }
        true
    }

    /// Parity of `ε` in `z_[n] = (-1)^ε z_{B_1} ∧ z_{B_2} ∧ ...`, where
    /// `degrees[i]` is the degree of the element at position `i`.
    pub fn wedge_epsilon(&self, degrees: &[i64]) -> bool {
        let perm: Vec<usize> = self.blocks.iter().flatten().copied().collect();
        parity_of(&perm, degrees)
    }
}

/// Block sizes of every contiguous split of `k` items into `m` blocks, in
/// lexicographic order.
pub fn composition_sizes(k: usize, m: usize) -> Vec<Vec<usize>> {
    assert!(m >= 1, "at least one block is required");
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn rec(rest: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 1 {
            cur.push(rest);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for s in 0..=rest {
            cur.push(s);
            rec(rest - s, left - 1, cur, out);
            cur.pop();
        }
    }
    rec(k, m, &mut cur, &mut out);
    out
}

/// All contiguous ordered partitions of `0..k` into `m` possibly empty blocks.
pub fn compositions(k: usize, m: usize) -> Vec<OrderedSetPartition> {
    composition_sizes(k, m)
        .into_iter()
        .map(|sizes| {
            let mut start = 0;
            let blocks = sizes
                .iter()
                .map(|&s| {
                    let b: Vec<usize> = (start..start + s).collect();
                    start += s;
                    b
                })
                .collect();
            OrderedSetPartition { blocks, contiguous: true }
        })
        .collect()
}

/// Every assignment of `l` positions to `r` labelled blocks, as a vector of
/// block labels, in lexicographic order with position 0 most significant.
pub fn block_assignments(l: usize, r: usize) -> Vec<Vec<usize>> {
    assert!(r >= 1, "at least one block is required");
    let total = r.checked_pow(l as u32).expect("too many assignments");
    (0..total)
        .map(|mut code| {
            let mut a = vec![0; l];
            for slot in a.iter_mut().rev() {
                *slot = code % r;
                code /= r;
            }
            a
        })
        .collect()
}

/// All ordered partitions of `0..l` into `r` labelled, possibly empty,
/// arbitrary subsets.  There are `r^l` of them.
pub fn subset_partitions(l: usize, r: usize) -> Vec<OrderedSetPartition> {
    block_assignments(l, r)
        .into_iter()
        .map(|a| {
            let mut blocks = vec![Vec::new(); r];
            for (i, &b) in a.iter().enumerate() {
                blocks[b].push(i);
            }
            OrderedSetPartition { blocks, contiguous: false }
        })
        .collect()
}

/// Binomial coefficient for small arguments.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compositions_of_two_into_two() {
        let c = compositions(2, 2);
        let sizes: Vec<Vec<usize>> = c.iter().map(|p| p.block_sizes()).collect();
        assert_eq!(sizes, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(c[1].blocks(), &[vec![0], vec![1]]);
    }

    #[test]
    fn compositions_of_zero() {
        let c = compositions(0, 3);
        assert_eq!(c.len(), 1);
        assert!(c[0].blocks().iter().all(Vec::is_empty));
    }

    #[test]
    fn compositions_of_three_into_two() {
        assert_eq!(compositions(3, 2).len(), 4);
    }

    #[test]
    fn subset_partition_counts() {
        assert_eq!(subset_partitions(2, 2).len(), 4);
        assert_eq!(subset_partitions(3, 3).len(), 27);
        assert_eq!(subset_partitions(0, 4).len(), 1);
    }

    #[test]
    fn subset_partition_epsilon() {
        let p = subset_partitions(2, 2)
            .into_iter()
            .find(|p| p.blocks() == [vec![1], vec![0]])
            .unwrap();
        assert!(p.wedge_epsilon(&[1, 1]));
        assert!(!p.wedge_epsilon(&[1, 2]));
    }

    #[test]
    fn validity() {
        for p in compositions(4, 3) {
            assert!(p.is_valid() && p.is_contiguous());
        }
        for p in subset_partitions(3, 2) {
            assert!(p.is_valid());
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 1), 4);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(2, 3), 0);
    }
}
