//! Exact edge expansion by subset enumeration.

use std::collections::BTreeSet;

use num_rational::Ratio;

use crate::error::{AnalysisError, GraphError};
use crate::graph::WeightedMultigraph;
use crate::name::VertexName;

/// Largest graph [`edge_expansion_exact`] accepts.
pub const MAX_EXACT_VERTICES: usize = 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionReport {
    pub h: Ratio<u64>,
    /// Smallest set attaining `h`, in canonical order.
    pub argmin_set: Vec<VertexName>,
    pub n_subsets_checked: u64,
}

/// True if the sorted index set of `a` is lexicographically smaller than `b`'s.
fn lex_less(a: u32, b: u32) -> bool {
    let diff = a ^ b;
    if diff == 0 {
        return false;
    }
    let t = diff.trailing_zeros();
    let (with, without) = if a >> t & 1 == 1 { (a, b) } else { (b, a) };
    // `without` continues past t with a larger element, or stops (is a prefix)
    let with_wins = without.checked_shr(t + 1).unwrap_or(0) != 0;
    (with == a) == with_wins
}

/// `h(G)`: the minimum of `w(S, complement) / |S|` over `1 <= |S| <= n/2`.
///
/// Walks a Gray code over the first `n - 1` vertices (the last vertex is fixed
/// outside the mask) and updates the cut weight incrementally; each mask stands
/// for itself and for its complement. Paired and heavy edges count with their
/// full weight.
pub fn edge_expansion_exact(g: &WeightedMultigraph) -> Result<ExpansionReport, AnalysisError> {
    let n = g.vertex_count();
    if n > MAX_EXACT_VERTICES {
        return Err(AnalysisError::TooLarge {
            n,
            max: MAX_EXACT_VERTICES,
        });
    }
    if n < 2 {
        return Err(AnalysisError::DegenerateSet);
    }
    let order: Vec<VertexName> = g.vertices().copied().collect();
    let index = g.index();
    let adj: Vec<Vec<(usize, u64)>> = order
        .iter()
        .map(|v| g.neighbors(v).map(|(u, w)| (index[u], w as u64)).collect())
        .collect();
    let degree: Vec<u64> = adj.iter().map(|row| row.iter().map(|(_, w)| w).sum()).collect();

    let full: u32 = ((1u64 << n) - 1) as u32;
    let half = n / 2;
    let mut to_mask = vec![0u64; n];
    let (mut mask, mut cut) = (0u32, 0u64);
    let mut best: Option<(u64, u64, u32)> = None;
    let mut checked = 0u64;
    let mut consider = |cut: u64, size: u64, set: u32, checked: &mut u64| {
        *checked += 1;
        let better = match best {
            None => true,
            Some((bc, bs, bset)) => {
                let (lhs, rhs) = (cut * bs, bc * size);
                lhs < rhs || (lhs == rhs && lex_less(set, bset))
            }
        };
        if better {
            best = Some((cut, size, set));
        }
    };

    for step in 1u64..(1u64 << (n - 1)) {
        let v = step.trailing_zeros() as usize;
        if mask >> v & 1 == 0 {
            cut = cut + degree[v] - 2 * to_mask[v];
            mask |= 1 << v;
            for &(u, w) in &adj[v] {
                to_mask[u] += w;
            }
        } else {
            cut = cut + 2 * to_mask[v] - degree[v];
            mask &= !(1 << v);
            for &(u, w) in &adj[v] {
                to_mask[u] -= w;
            }
        }
        let size = mask.count_ones() as usize;
        if size <= half {
            consider(cut, size as u64, mask, &mut checked);
        }
        if n - size <= half {
            consider(cut, (n - size) as u64, full & !mask, &mut checked);
        }
    }

    let (cut, size, set) = best.expect("n >= 2 has an admissible set");
    Ok(ExpansionReport {
        h: Ratio::new(cut, size),
        argmin_set: (0..n).filter(|&i| set >> i & 1 == 1).map(|i| order[i]).collect(),
        n_subsets_checked: checked,
    })
}

/// `h_G(S) = w(S, complement) / |S|` for a nonempty proper subset.
pub fn expansion_of_set(g: &WeightedMultigraph, set: &BTreeSet<VertexName>) -> Result<Ratio<u64>, AnalysisError> {
    if let Some(v) = set.iter().find(|v| !g.contains(v)) {
        return Err(GraphError::UnknownVertex(*v).into());
    }
    if set.is_empty() || set.len() == g.vertex_count() {
        return Err(AnalysisError::DegenerateSet);
    }
    Ok(Ratio::new(g.cut_weight(set), set.len() as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Degree;

    fn doubled_clique(k: u32, d: u32) -> WeightedMultigraph {
        let mut g = WeightedMultigraph::new(Degree::new(d).unwrap());
        for a in 0..k {
            for b in (a + 1)..k {
                g.set_weight(VertexName::root(a), VertexName::root(b), 2).unwrap();
            }
        }
        g
    }

    /// Plain enumeration of every admissible subset.
    fn brute_force(g: &WeightedMultigraph) -> (Ratio<u64>, Vec<VertexName>) {
        let order: Vec<VertexName> = g.vertices().copied().collect();
        let n = order.len();
        let mut best: Option<(Ratio<u64>, Vec<VertexName>)> = None;
        for mask in 1u32..(1 << n) {
            let set: Vec<VertexName> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| order[i]).collect();
            if set.len() > n / 2 {
                continue;
            }
            let s: BTreeSet<VertexName> = set.iter().copied().collect();
            let h = expansion_of_set(g, &s).unwrap();
            let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let better = match &best {
                None => true,
                Some((bh, bset)) => {
                    let bidx: Vec<usize> = bset.iter().map(|v| order.iter().position(|o| o == v).unwrap()).collect();
                    h < *bh || (h == *bh && idx < bidx)
                }
            };
            if better {
                best = Some((h, set));
            }
        }
        best.unwrap()
    }

    #[test]
    fn doubled_k4_and_k6() {
        let r = edge_expansion_exact(&doubled_clique(4, 6)).unwrap();
        assert_eq!(r.h, Ratio::from_integer(4));
        assert_eq!(r.argmin_set.len(), 2);
        let r = edge_expansion_exact(&doubled_clique(6, 10)).unwrap();
        assert_eq!(r.h, Ratio::from_integer(6));
        assert_eq!(r.argmin_set.len(), 3);
    }

    #[test]
    fn single_edge() {
        let mut g = WeightedMultigraph::new(Degree::new(6).unwrap());
        g.set_weight(VertexName::root(0), VertexName::root(1), 1).unwrap();
        let r = edge_expansion_exact(&g).unwrap();
        assert_eq!(r.h, Ratio::from_integer(1));
        assert_eq!(r.argmin_set, vec![VertexName::root(0)]);
        assert_eq!(r.n_subsets_checked, 2);
    }

    #[test]
    fn lex_order_on_masks() {
        assert!(lex_less(0b011, 0b101));
        assert!(lex_less(0b001, 0b011));
        assert!(!lex_less(0b011, 0b001));
        assert!(lex_less(0b0110, 0b1100));
        assert!(!lex_less(0b101, 0b101));
    }

    #[test]
    fn gray_code_agrees_with_plain_enumeration() {
        let mut g = WeightedMultigraph::new(Degree::new(6).unwrap());
        let edges = [(0, 1, 3), (1, 2, 1), (2, 3, 2), (3, 4, 1), (4, 0, 2), (1, 4, 1), (5, 2, 2), (5, 0, 1), (6, 5, 2), (6, 3, 1)];
        for (a, b, w) in edges {
            g.set_weight(VertexName::root(a), VertexName::root(b), w).unwrap();
        }
        let fast = edge_expansion_exact(&g).unwrap();
        let (h, set) = brute_force(&g);
        assert_eq!(fast.h, h);
        assert_eq!(fast.argmin_set, set);
    }

    #[test]
    fn set_expansion_errors_and_symmetry() {
        let g = doubled_clique(4, 6);
        assert!(expansion_of_set(&g, &BTreeSet::new()).is_err());
        let all: BTreeSet<VertexName> = g.vertices().copied().collect();
        assert!(expansion_of_set(&g, &all).is_err());
        let s: BTreeSet<VertexName> = [VertexName::root(0)].into();
        assert_eq!(expansion_of_set(&g, &s).unwrap(), Ratio::from_integer(6));
        let rest: BTreeSet<VertexName> = all.difference(&s).copied().collect();
        assert_eq!(g.cut_weight(&s), g.cut_weight(&rest));
        let ghost: BTreeSet<VertexName> = [VertexName::root(9)].into();
        assert!(expansion_of_set(&g, &ghost).is_err());
    }

    #[test]
    fn too_large_is_rejected() {
        let mut g = WeightedMultigraph::new(Degree::new(6).unwrap());
        for k in 0..27u32 {
            g.set_weight(VertexName::root(k), VertexName::root((k + 1) % 27), 1).unwrap();
        }
        assert!(matches!(edge_expansion_exact(&g), Err(AnalysisError::TooLarge { n: 27, .. })));
    }
}
