//! Brute-force discovery of twisted classes inside a finite box.
//!
//! Every element `h` of the box is pushed through `g·h·t(g⁻¹)` for every
//! conjugator `g` of the conjugator box; whenever the image stays inside the
//! element box the two are merged. The result refines the true partition:
//! it never merges non-conjugate elements, but may leave conjugate ones
//! apart when their witnesses fall outside the bounds.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::grp::{Elem, Group, Sign, Twist};
use crate::reid::{
    are_twisted_conjugate, parity_table_cell, reidemeister_number, ClassId, ReidError,
    Reidemeister, TableCell, TwistedClasses,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("validation failed: {0}")]
    ValidationFailure(Box<Mismatch>),
    #[error("could not build a thread pool: {0}")]
    ThreadPool(String),
}

/// Bounds of the element box `|m|,|k| ≤ v_bound, |n| ≤ n_bound` and of the
/// conjugator box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoxSpec {
    pub v_bound: u32,
    pub n_bound: u32,
    pub conj_v_bound: u32,
    pub conj_z_bound: u32,
}

impl Default for BoxSpec {
    fn default() -> Self {
        BoxSpec {
            v_bound: 6,
            n_bound: 4,
            conj_v_bound: 10,
            conj_z_bound: 4,
        }
    }
}

impl BoxSpec {
    fn side(&self) -> usize {
        2 * self.v_bound as usize + 1
    }

    pub fn len(&self) -> usize {
        self.side() * self.side() * (2 * self.n_bound as usize + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Elements ordered by level, then `m`, then `k`.
    pub fn elements(&self) -> Vec<Elem> {
        let (vb, nb) = (self.v_bound as i64, self.n_bound as i64);
        let mut out = Vec::with_capacity(self.len());
        for n in -nb..=nb {
            for m in -vb..=vb {
                for k in -vb..=vb {
                    out.push(Elem::new(m, k, n));
                }
            }
        }
        out
    }

    pub fn index_of(&self, e: &Elem) -> Option<usize> {
        let (vb, nb) = (self.v_bound as i64, self.n_bound as i64);
        if e.n.abs() > nb {
            return None;
        }
        let m = i64::try_from(&e.v[0]).ok().filter(|m| m.abs() <= vb)?;
        let k = i64::try_from(&e.v[1]).ok().filter(|k| k.abs() <= vb)?;
        let side = self.side() as i64;
        Some((((e.n + nb) * side + (m + vb)) * side + (k + vb)) as usize)
    }

    /// Conjugators grouped by level `z`, ordered by `z`, then `x`, then `y`.
    fn conjugators(&self) -> Vec<(i64, Vec<Elem>)> {
        let (cv, cz) = (self.conj_v_bound as i64, self.conj_z_bound as i64);
        (-cz..=cz)
            .map(|z| {
                let level = (-cv..=cv)
                    .flat_map(|x| (-cv..=cv).map(move |y| Elem::new(x, y, z)))
                    .collect();
                (z, level)
            })
            .collect()
    }
}

/// Disjoint sets with path compression and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Returns `true` when two distinct sets were joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] || (self.size[ra] == self.size[rb] && rb < ra) {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    /// Sets ordered by their smallest member; members ascending.
    pub fn sets(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut slot = vec![usize::MAX; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let r = self.find(x);
            if slot[r] == usize::MAX {
                slot[r] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(x);
        }
        out
    }
}

/// One union performed by the oracle: `g · elements[from] · t(g⁻¹) = elements[to]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Merge {
    pub from: usize,
    pub to: usize,
    pub g: Elem,
}

#[derive(Debug, Clone)]
pub struct Partition {
    pub spec: BoxSpec,
    pub elements: Vec<Elem>,
    /// Unions that joined two different sets, in sweep order.
    pub merges: Vec<Merge>,
    /// Confirmed in-box conjugations, including redundant ones.
    pub relations: usize,
    pub blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Block number of every element.
    pub fn block_of(&self) -> Vec<usize> {
        let mut of = vec![0; self.elements.len()];
        for (b, members) in self.blocks.iter().enumerate() {
            for &i in members {
                of[i] = b;
            }
        }
        of
    }
}

fn edges_from(
    group: &Group,
    t: &Twist,
    spec: &BoxSpec,
    conjugators: &[(i64, Vec<Elem>)],
    i: usize,
    h: &Elem,
) -> Vec<(u32, u32, u32)> {
    let per_level = conjugators.first().map_or(0, |c| c.1.len());
    let nb = spec.n_bound as i64;
    let mut out = Vec::new();
    for (zi, (z, level)) in conjugators.iter().enumerate() {
        let target_level = match t.eps() {
            Sign::Minus => h.n + 2 * z,
            Sign::Plus => h.n,
        };
        if target_level.abs() > nb {
            continue;
        }
        for (ci, g) in level.iter().enumerate() {
            let image = group.twisted_conj(g, h, t);
            if let Some(j) = spec.index_of(&image) {
                if j != i {
                    out.push((i as u32, j as u32, (zi * per_level + ci) as u32));
                }
            }
        }
    }
    out
}

/// Closes the box under the defining relation and returns the blocks.
/// `jobs > 1` shards the sweep over a thread pool; the result does not
/// depend on `jobs`.
pub fn brute_force_partition(
    group: &Group,
    t: &Twist,
    spec: &BoxSpec,
    jobs: usize,
) -> Result<Partition, OracleError> {
    let elements = spec.elements();
    let conjugators = spec.conjugators();
    let sweep = |(i, h): (usize, &Elem)| edges_from(group, t, spec, &conjugators, i, h);
    let edges: Vec<Vec<(u32, u32, u32)>> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| OracleError::ThreadPool(e.to_string()))?;
        pool.install(|| elements.par_iter().enumerate().map(sweep).collect())
    } else {
        elements.iter().enumerate().map(sweep).collect()
    };

    let per_level = conjugators.first().map_or(0, |c| c.1.len());
    let mut uf = UnionFind::new(elements.len());
    let mut merges = Vec::new();
    let mut relations = 0;
    for (i, j, c) in edges.into_iter().flatten() {
        relations += 1;
        if uf.union(i as usize, j as usize) {
            let c = c as usize;
            merges.push(Merge {
                from: i as usize,
                to: j as usize,
                g: conjugators[c / per_level].1[c % per_level].clone(),
            });
        }
    }
    let blocks = uf.sets();
    Ok(Partition {
        spec: *spec,
        elements,
        merges,
        relations,
        blocks,
    })
}

/// A disagreement between the oracle and the analytic classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mismatch {
    /// One oracle block holds two different class labels.
    BlockSpansClasses { a: Elem, b: Elem },
    /// The oracle merged a pair the decision procedure rejects.
    Unconfirmed {
        from: Elem,
        to: Elem,
        oracle_witness: Elem,
    },
    /// The analytic witness does not reproduce the target.
    WitnessReplay { from: Elem, to: Elem, witness: Elem },
    /// An element sits in a block whose table cell it violates.
    TableCell {
        elem: Elem,
        class: usize,
        cell: TableCell,
    },
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mismatch::BlockSpansClasses { a, b } => {
                write!(
                    f,
                    "{a} and {b} share a block but have different class labels"
                )
            }
            Mismatch::Unconfirmed {
                from,
                to,
                oracle_witness,
            } => write!(
                f,
                "oracle merged {from} -> {to} via {oracle_witness}, decision procedure disagrees"
            ),
            Mismatch::WitnessReplay { from, to, witness } => {
                write!(f, "witness {witness} does not carry {from} to {to}")
            }
            Mismatch::TableCell { elem, class, cell } => {
                write!(f, "{elem} in B{} violates cell '{cell}'", class + 1)
            }
        }
    }
}

/// Per-class bookkeeping for one level of the parity table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellCheck {
    pub cell: TableCell,
    pub count: usize,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelRow {
    pub level: i64,
    /// Indexed by `B₁..B₄`.
    pub cells: Vec<CellCheck>,
    /// Elements whose block holds none of the four anchors.
    pub unassigned: usize,
}

/// Anchors naming the blocks `B₁..B₄` for the standard `φ`.
pub fn class_anchors() -> [Elem; 4] {
    [
        Elem::new(0, 0, 0),
        Elem::new(1, 0, 0),
        Elem::new(0, 0, 1),
        Elem::new(1, 0, 1),
    ]
}

#[derive(Debug, Clone)]
pub struct Report {
    pub block_count: usize,
    pub block_sizes: Vec<usize>,
    pub relations: usize,
    pub merges_checked: usize,
    /// Pairs the decision procedure could not rule on (degenerate lattices).
    pub undecided: usize,
    pub reidemeister: Reidemeister,
    /// Class label of each block, when the twist supports labelling.
    pub block_classes: Option<Vec<ClassId>>,
    /// Parity table reproduction, standard `φ` only.
    pub level_table: Option<Vec<LevelRow>>,
    pub mismatches: Vec<Mismatch>,
}

impl Report {
    /// Block count equals the Reidemeister number.
    pub fn complete(&self) -> Option<bool> {
        match &self.reidemeister {
            Reidemeister::Finite(r) => Some(*r == self.block_count.into()),
            Reidemeister::Infinite(_) => None,
        }
    }

    pub fn table_reproduced(&self) -> Option<bool> {
        self.level_table.as_ref().map(|rows| {
            rows.iter()
                .all(|r| r.unassigned == 0 && r.cells.iter().all(|c| c.ok))
        })
    }

    pub fn into_result(self) -> Result<Report, OracleError> {
        match self.mismatches.first() {
            Some(m) => Err(OracleError::ValidationFailure(Box::new(m.clone()))),
            None => Ok(self),
        }
    }
}

fn level_table(partition: &Partition, block_of: &[usize]) -> Vec<LevelRow> {
    let anchor_blocks: Vec<Option<usize>> = class_anchors()
        .iter()
        .map(|a| partition.spec.index_of(a).map(|i| block_of[i]))
        .collect();
    let nb = partition.spec.n_bound as i64;
    (-nb..=nb)
        .map(|level| {
            let mut cells: Vec<CellCheck> = (0..4)
                .map(|c| CellCheck {
                    cell: parity_table_cell(c, level),
                    count: 0,
                    ok: true,
                })
                .collect();
            let mut unassigned = 0;
            for (i, e) in partition.elements.iter().enumerate() {
                if e.n != level {
                    continue;
                }
                match anchor_blocks.iter().position(|b| *b == Some(block_of[i])) {
                    Some(c) => {
                        cells[c].count += 1;
                        if !cells[c].cell.holds(&e.v) {
                            cells[c].ok = false;
                        }
                    }
                    None => unassigned += 1,
                }
            }
            LevelRow {
                level,
                cells,
                unassigned,
            }
        })
        .collect()
}

/// Runs the oracle and checks it against the analytic classification.
pub fn cross_validate(
    group: &Group,
    t: &Twist,
    spec: &BoxSpec,
    jobs: usize,
) -> Result<Report, OracleError> {
    let partition = brute_force_partition(group, t, spec, jobs)?;
    let block_of = partition.block_of();
    let mut mismatches = Vec::new();

    let classes = TwistedClasses::new(group, t).ok();
    let block_classes = classes.as_ref().map(|cl| {
        let ids: Vec<ClassId> = partition.elements.iter().map(|e| cl.class_id(e)).collect();
        for members in &partition.blocks {
            let first = members[0];
            if let Some(&other) = members.iter().find(|&&i| ids[i] != ids[first]) {
                mismatches.push(Mismatch::BlockSpansClasses {
                    a: partition.elements[first].clone(),
                    b: partition.elements[other].clone(),
                });
            }
        }
        partition
            .blocks
            .iter()
            .map(|members| ids[members[0]].clone())
            .collect()
    });

    let mut undecided = 0;
    for merge in &partition.merges {
        let from = &partition.elements[merge.from];
        let to = &partition.elements[merge.to];
        match are_twisted_conjugate(group, from, to, t) {
            Ok(Some(w)) => {
                if !w.replays(group, from, to, t) {
                    mismatches.push(Mismatch::WitnessReplay {
                        from: from.clone(),
                        to: to.clone(),
                        witness: w.g,
                    });
                }
            }
            Ok(None) => mismatches.push(Mismatch::Unconfirmed {
                from: from.clone(),
                to: to.clone(),
                oracle_witness: merge.g.clone(),
            }),
            Err(ReidError::DegenerateLattice { .. }) => undecided += 1,
            Err(e) => unreachable!("pairwise decision cannot fail with {e}"),
        }
    }

    let standard_phi = *group == Group::standard() && group.phi().ok().as_ref() == Some(t);
    let level_table = standard_phi.then(|| {
        let rows = level_table(&partition, &block_of);
        for row in &rows {
            for (c, check) in row.cells.iter().enumerate() {
                if check.ok {
                    continue;
                }
                let bad = partition
                    .elements
                    .iter()
                    .enumerate()
                    .find(|(i, e)| {
                        e.n == row.level
                            && class_anchors()
                                .get(c)
                                .and_then(|a| partition.spec.index_of(a))
                                .map(|a| block_of[a])
                                == Some(block_of[*i])
                            && !check.cell.holds(&e.v)
                    })
                    .map(|(_, e)| e.clone())
                    .expect("a failing cell has a witness");
                mismatches.push(Mismatch::TableCell {
                    elem: bad,
                    class: c,
                    cell: check.cell,
                });
            }
        }
        rows
    });

    Ok(Report {
        block_count: partition.block_count(),
        block_sizes: partition.blocks.iter().map(Vec::len).collect(),
        relations: partition.relations,
        merges_checked: partition.merges.len(),
        undecided,
        reidemeister: reidemeister_number(group, t),
        block_classes,
        level_table,
        mismatches,
    })
}
