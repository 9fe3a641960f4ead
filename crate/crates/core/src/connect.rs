//! U-chains: components, minimal chain lengths and Hu boundedness.
//!
//! A U-chain from `x` to `y` is a sequence `x = x_0, …, x_{n-1} = y` with
//! consecutive points related by `U` in either direction. Its length is the
//! number of points `n`; reports carry the step count `n - 1` as well.

use std::collections::VecDeque;

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::space::{Entourage, EntourageLadder, PointSet};

/// Chain length in points; `None` means no chain exists.
pub type ChainLength = Option<usize>;

fn ser_length<S: Serializer>(v: &ChainLength, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(n) => s.serialize_u64(*n as u64),
        None => s.serialize_str("infinity"),
    }
}

fn ser_steps<S: Serializer>(v: &ChainLength, s: S) -> std::result::Result<S::Ok, S::Error> {
    ser_length(&v.map(|n| n - 1), s)
}

fn ser_matrix<S: Serializer>(m: &Option<Vec<Vec<ChainLength>>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Cell(#[serde(serialize_with = "ser_length")] ChainLength);
    match m {
        None => s.serialize_none(),
        Some(rows) => {
            let rows: Vec<Vec<Cell>> = rows.iter().map(|r| r.iter().map(|&c| Cell(c)).collect()).collect();
            s.serialize_some(&rows)
        }
    }
}

/// Classes of the equivalence relation generated by `U`, each sorted, listed
/// by smallest member.
pub fn chain_components(u: &Entourage) -> Vec<Vec<usize>> {
    let n = u.carrier_size();
    let mut uf = UnionFind::<usize>::new(n);
    for (x, y) in u.pairs() {
        uf.union(x, y);
    }
    let labels = uf.into_labeling();
    let mut slot = vec![usize::MAX; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        let root = labels[x];
        if slot[root] == usize::MAX {
            slot[root] = out.len();
            out.push(Vec::new());
        }
        out[slot[root]].push(x);
    }
    out
}

/// Symmetrised adjacency lists without loops.
fn neighbours(u: &Entourage) -> Vec<Vec<usize>> {
    let n = u.carrier_size();
    let mut adj = vec![Vec::new(); n];
    for (x, y) in u.pairs() {
        if x != y {
            adj[x].push(y);
            adj[y].push(x);
        }
    }
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }
    adj
}

fn bfs(adj: &[Vec<usize>], from: usize) -> Vec<ChainLength> {
    let mut dist: Vec<ChainLength> = vec![None; adj.len()];
    let mut queue = VecDeque::new();
    dist[from] = Some(1);
    queue.push_back(from);
    while let Some(x) = queue.pop_front() {
        let next = dist[x].map(|d| d + 1);
        for &y in &adj[x] {
            if dist[y].is_none() {
                dist[y] = next;
                queue.push_back(y);
            }
        }
    }
    dist
}

fn check_point(u: &Entourage, x: usize) -> Result<()> {
    if x >= u.carrier_size() {
        return Err(Error::invalid(format!("point {x} outside a carrier of {} points", u.carrier_size())));
    }
    Ok(())
}

/// Fewest points in a U-chain from `x` to `y`.
pub fn min_chain_length(u: &Entourage, x: usize, y: usize) -> Result<ChainLength> {
    check_point(u, x)?;
    check_point(u, y)?;
    Ok(bfs(&neighbours(u), x)[y])
}

/// Least `n` such that any two points of `b` are joined by a U-chain of at
/// most `n` points running through the whole carrier.
pub fn hu_bound(b: &PointSet, u: &Entourage) -> Result<ChainLength> {
    let pts: Vec<usize> = b.ones().collect();
    if let Some(&x) = pts.iter().find(|&&x| x >= u.carrier_size()) {
        return Err(Error::invalid(format!("point {x} outside a carrier of {} points", u.carrier_size())));
    }
    if pts.is_empty() {
        return Err(Error::invalid("the bounded set must be non-empty"));
    }
    let adj = neighbours(u);
    let worst = pts
        .par_iter()
        .map(|&x| {
            let d = bfs(&adj, x);
            pts.iter().try_fold(1usize, |acc, &y| d[y].map(|l| acc.max(l)))
        })
        .collect::<Vec<_>>();
    Ok(worst.into_iter().try_fold(1usize, |acc, w| w.map(|l| acc.max(l))))
}

/// Chain data at one rung.
#[derive(Clone, Debug, Serialize)]
pub struct ChainProfile {
    pub rung: usize,
    pub scale: f64,
    pub components: Vec<Vec<usize>>,
    /// Hu bound of the whole carrier, in points.
    #[serde(serialize_with = "ser_length")]
    pub hu_bound: ChainLength,
    /// The same bound counted in steps.
    #[serde(serialize_with = "ser_steps")]
    pub hu_bound_steps: ChainLength,
    /// Pairwise minimal lengths, when requested.
    #[serde(serialize_with = "ser_matrix", skip_serializing_if = "Option::is_none")]
    pub lengths: Option<Vec<Vec<ChainLength>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConnectivityProfile {
    pub rungs: Vec<ChainProfile>,
    pub chain_connected_at_all_rungs: bool,
    pub bounded_in_itself_at_all_rungs: bool,
}

/// One [`ChainProfile`] per rung, computed in parallel.
pub fn connectivity_profile(ladder: &EntourageLadder, with_lengths: bool) -> ConnectivityProfile {
    let rungs: Vec<ChainProfile> = (0..ladder.len())
        .into_par_iter()
        .map(|k| {
            let u = ladder.entourage(k);
            let adj = neighbours(u);
            let n = u.carrier_size();
            let table: Vec<Vec<ChainLength>> = (0..n).map(|x| bfs(&adj, x)).collect();
            let hu = table.iter().flatten().try_fold(1usize, |acc, l| l.map(|l| acc.max(l)));
            ChainProfile {
                rung: k,
                scale: ladder.scale(k),
                components: chain_components(u),
                hu_bound: hu,
                hu_bound_steps: hu,
                lengths: with_lengths.then_some(table),
            }
        })
        .collect();
    ConnectivityProfile {
        chain_connected_at_all_rungs: rungs.iter().all(|r| r.components.len() == 1),
        bounded_in_itself_at_all_rungs: rungs.iter().all(|r| r.hu_bound.is_some()),
        rungs,
    }
}
