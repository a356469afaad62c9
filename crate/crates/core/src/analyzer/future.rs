//! Cuts of a growth state compared with the matching cuts of the target lift.
//!
//! The future set of `A` replaces every unsplit member by both of its lift
//! copies, giving a vertex set of `H`. `w_G` is the current weight function
//! with the edges between paired split vertices left out; `w_H` is the weight
//! function of `H`.

use std::collections::BTreeSet;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{AnalysisError, GraphError};
use crate::grower::GrowthState;
use crate::name::VertexName;

/// Which side's split status each endpoint has: `(A side, complement side)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Block {
    SplitSplit,
    SplitUnsplit,
    UnsplitSplit,
    UnsplitUnsplit,
}

impl Block {
    pub const ALL: [Block; 4] = [
        Block::SplitSplit,
        Block::SplitUnsplit,
        Block::UnsplitSplit,
        Block::UnsplitUnsplit,
    ];

    fn of(a_split: bool, abar_split: bool) -> Block {
        match (a_split, abar_split) {
            (true, true) => Block::SplitSplit,
            (true, false) => Block::SplitUnsplit,
            (false, true) => Block::UnsplitSplit,
            (false, false) => Block::UnsplitUnsplit,
        }
    }

    /// `w_H = factor * w_G` on this block.
    pub fn factor(self) -> u64 {
        match self {
            Block::SplitSplit => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BlockWeight {
    pub block: Block,
    pub w_g: u64,
    pub w_h: u64,
}

impl BlockWeight {
    pub fn holds(&self) -> bool {
        self.w_h == self.block.factor() * self.w_g
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutDecomposition {
    pub split_a: BTreeSet<VertexName>,
    pub unsplit_a: BTreeSet<VertexName>,
    pub split_abar: BTreeSet<VertexName>,
    pub unsplit_abar: BTreeSet<VertexName>,
    pub future_a: BTreeSet<VertexName>,
    pub future_abar: BTreeSet<VertexName>,
    pub blocks: [BlockWeight; 4],
    /// `w_G(A, complement)`, paired edges excluded.
    pub w_g: u64,
    /// `w_H(F(A), F(complement))`.
    pub w_h: u64,
}

/// `F(X)`: split members of `X` plus both copies of each unsplit member.
pub fn future_set(state: &GrowthState, x: &BTreeSet<VertexName>) -> BTreeSet<VertexName> {
    x.iter()
        .flat_map(|v| {
            if state.unsplit_set().contains(v) {
                vec![v.child(false), v.child(true)]
            } else {
                vec![*v]
            }
        })
        .collect()
}

/// Current weight between `x` and `y`, leaving out paired edges.
pub fn w_g(state: &GrowthState, x: &BTreeSet<VertexName>, y: &BTreeSet<VertexName>) -> u64 {
    x.iter()
        .flat_map(|a| {
            state
                .current()
                .neighbors(a)
                .filter(move |(b, _)| y.contains(b) && !state.is_paired(a, b))
        })
        .map(|(_, w)| w as u64)
        .sum()
}

/// Weight in the target lift between `x` and `y`.
pub fn w_h(state: &GrowthState, x: &BTreeSet<VertexName>, y: &BTreeSet<VertexName>) -> u64 {
    state.target().weight_between(x, y)
}

pub fn cut_decomposition(state: &GrowthState, a: &BTreeSet<VertexName>) -> Result<CutDecomposition, AnalysisError> {
    let g = state.current();
    if let Some(v) = a.iter().find(|v| !g.contains(v)) {
        return Err(GraphError::UnknownVertex(*v).into());
    }
    let abar: BTreeSet<VertexName> = g.vertices().filter(|v| !a.contains(v)).copied().collect();
    let (split_a, unsplit_a): (BTreeSet<_>, BTreeSet<_>) = a.iter().partition(|v| state.split_set().contains(v));
    let (split_abar, unsplit_abar): (BTreeSet<_>, BTreeSet<_>) =
        abar.iter().partition(|v| state.split_set().contains(v));
    let blocks = Block::ALL.map(|block| {
        let (x, y) = match block {
            Block::SplitSplit => (&split_a, &split_abar),
            Block::SplitUnsplit => (&split_a, &unsplit_abar),
            Block::UnsplitSplit => (&unsplit_a, &split_abar),
            Block::UnsplitUnsplit => (&unsplit_a, &unsplit_abar),
        };
        BlockWeight {
            block,
            w_g: w_g(state, x, y),
            w_h: w_h(state, &future_set(state, x), &future_set(state, y)),
        }
    });
    let future_a = future_set(state, a);
    let future_abar = future_set(state, &abar);
    Ok(CutDecomposition {
        w_g: w_g(state, a, &abar),
        w_h: w_h(state, &future_a, &future_abar),
        split_a,
        unsplit_a,
        split_abar,
        unsplit_abar,
        future_a,
        future_abar,
        blocks,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfLemmaReport {
    pub decomposition: CutDecomposition,
    /// Every block satisfies its identity.
    pub blocks_ok: bool,
    /// `w_G(A, complement) >= w_H(F(A), F(complement)) / 2`.
    pub half_ok: bool,
}

impl HalfLemmaReport {
    pub fn ok(&self) -> bool {
        self.blocks_ok && self.half_ok
    }
}

/// Checks the four block identities and the half inequality on one cut, in
/// exact integers.
pub fn half_lemma_check(state: &GrowthState, a: &BTreeSet<VertexName>) -> Result<HalfLemmaReport, AnalysisError> {
    let decomposition = cut_decomposition(state, a)?;
    Ok(HalfLemmaReport {
        blocks_ok: decomposition.blocks.iter().all(BlockWeight::holds),
        half_ok: Ratio::from_integer(decomposition.w_g) >= Ratio::new(decomposition.w_h, 2),
        decomposition,
    })
}

/// Result of checking every cut of a state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FutureCutSuite {
    pub n: usize,
    pub cuts_checked: u64,
    pub block_failures: u64,
    pub half_failures: u64,
    /// `min over |A| <= n/2 of w_H(F(A), F(complement)) / (2|A|)`, as `(num, den)`.
    pub half_future_expansion: (u64, u64),
}

impl FutureCutSuite {
    pub fn ok(&self) -> bool {
        self.block_failures == 0 && self.half_failures == 0
    }

    pub fn half_future_expansion(&self) -> Ratio<u64> {
        Ratio::new(self.half_future_expansion.0, self.half_future_expansion.1)
    }
}

/// Every nonempty cut `{A, complement}` of the current graph (the last vertex
/// is kept in the complement, so each cut is seen once).
pub fn future_cut_suite(state: &GrowthState) -> Result<FutureCutSuite, AnalysisError> {
    let g = state.current();
    let n = g.vertex_count();
    if n > super::expansion::MAX_EXACT_VERTICES {
        return Err(AnalysisError::TooLarge {
            n,
            max: super::expansion::MAX_EXACT_VERTICES,
        });
    }
    let index = g.index();
    let split: Vec<bool> = g.vertices().map(|v| state.split_set().contains(v)).collect();
    let g_edges: Vec<(usize, usize, u64)> = g
        .edges()
        .filter(|(a, b, _)| !state.is_paired(a, b))
        .map(|(a, b, w)| (index[&a], index[&b], w as u64))
        .collect();
    // each vertex of H belongs to itself if split, to its parent otherwise
    let owner = |x: &VertexName| -> usize {
        match index.get(x) {
            Some(&i) if split[i] => i,
            _ => index[&x.parent().expect("lift names are nonempty")],
        }
    };
    let h_edges: Vec<(usize, usize, u64)> = state
        .target()
        .edges()
        .map(|(a, b, w)| (owner(&a), owner(&b), w as u64))
        .filter(|(a, b, _)| a != b)
        .collect();

    let block_index = |block: Block| Block::ALL.iter().position(|b| *b == block).unwrap();
    let mut suite = FutureCutSuite {
        n,
        cuts_checked: 0,
        block_failures: 0,
        half_failures: 0,
        half_future_expansion: (u64::MAX, 1),
    };
    let tally = |edges: &[(usize, usize, u64)], in_a: &dyn Fn(usize) -> bool| -> [u64; 4] {
        let mut sums = [0u64; 4];
        for &(x, y, w) in edges {
            let (ax, ay) = (in_a(x), in_a(y));
            if ax != ay {
                let (p, q) = if ax { (x, y) } else { (y, x) };
                sums[block_index(Block::of(split[p], split[q]))] += w;
            }
        }
        sums
    };
    for mask in 1u64..(1u64 << (n - 1)) {
        let in_a = |i: usize| mask >> i & 1 == 1;
        let gs = tally(&g_edges, &in_a);
        let hs = tally(&h_edges, &in_a);
        suite.cuts_checked += 1;
        if Block::ALL.iter().enumerate().any(|(k, b)| hs[k] != b.factor() * gs[k]) {
            suite.block_failures += 1;
        }
        let (wg, wh): (u64, u64) = (gs.iter().sum(), hs.iter().sum());
        if 2 * wg < wh {
            suite.half_failures += 1;
        }
        let size = mask.count_ones() as usize;
        let small = if 2 * size <= n { size } else { n - size };
        if 2 * small <= n {
            let (num, den) = suite.half_future_expansion;
            let cand_den = 2 * small as u64;
            if (wh as u128) * (den as u128) < (num as u128) * (cand_den as u128) {
                suite.half_future_expansion = (wh, cand_den);
            }
        }
    }
    let r = suite.half_future_expansion();
    suite.half_future_expansion = (*r.numer(), *r.denom());
    Ok(suite)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grower::{begin_cycle, initial_graph};

    fn third_point() -> GrowthState {
        let mut s = crate::grower::state_at(6, 16, 1).unwrap();
        for _ in 0..5 {
            s.split_next().unwrap();
        }
        s
    }

    #[test]
    fn split_side_blocks_at_a_third() {
        let s = third_point();
        let a: BTreeSet<VertexName> = s.split_set().clone();
        let r = half_lemma_check(&s, &a).unwrap();
        assert!(r.ok());
        assert_eq!(r.decomposition.future_a, a);
        let ss = r.decomposition.blocks[0];
        assert_eq!(ss.block, Block::SplitSplit);
        assert_eq!(ss.w_g, 0);
        assert_eq!(r.decomposition.w_h, 2 * r.decomposition.w_g);
    }

    #[test]
    fn single_unsplit_vertex() {
        let s = third_point();
        let u = *s.unsplit_set().iter().next().unwrap();
        let a: BTreeSet<VertexName> = [u].into();
        let r = half_lemma_check(&s, &a).unwrap();
        assert!(r.ok());
        assert_eq!(r.decomposition.future_a.len(), 2);
        assert_eq!(r.decomposition.w_g, 6);
        assert_eq!(r.decomposition.w_h, 12);
    }

    #[test]
    fn paired_edges_excluded_from_w_g() {
        let mut s = begin_cycle(initial_graph(6).unwrap(), 0).unwrap();
        s.split_next().unwrap();
        let a: BTreeSet<VertexName> = [VertexName::zeros(1)].into();
        let r = half_lemma_check(&s, &a).unwrap();
        // full cut is 6, three of which sit on the paired edge
        assert_eq!(s.current().cut_weight(&a), 6);
        assert_eq!(r.decomposition.w_g, 3);
        assert!(r.ok());
    }

    #[test]
    fn suite_agrees_with_single_cut_checks() {
        let s = third_point();
        let suite = future_cut_suite(&s).unwrap();
        assert!(suite.ok());
        assert_eq!(suite.cuts_checked, (1 << (s.n() - 1)) - 1);
        let order: Vec<VertexName> = s.current().vertices().copied().collect();
        for mask in [1u64, 5, 77, 300, 4095] {
            let a: BTreeSet<VertexName> = (0..order.len()).filter(|i| mask >> i & 1 == 1).map(|i| order[i]).collect();
            assert!(half_lemma_check(&s, &a).unwrap().ok());
        }
    }
}
