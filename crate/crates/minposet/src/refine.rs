//! Ordered partition refinement on poset points.
//!
//! The search code individualizes points and refines to an equitable
//! partition. Everything here is equivariant: relabelling a poset by a
//! permutation maps partitions cell by cell, because cells are keyed only by
//! label-free data (degree counts against other cells, in cell order). That
//! property is what makes the canonical form well defined.

use std::collections::BTreeMap;

use crate::poset::{set_bit, words_for, Poset};

#[derive(Clone, Debug)]
pub(crate) struct Partition {
    /// Cells in order; each cell lists its points in increasing order.
    cells: Vec<Vec<u32>>,
    cell_of: Vec<u32>,
}

impl Partition {
    pub fn is_discrete(&self) -> bool {
        self.cells.iter().all(|c| c.len() == 1)
    }

    pub fn first_non_singleton(&self) -> Option<usize> {
        self.cells.iter().position(|c| c.len() > 1)
    }

    pub fn cell(&self, i: usize) -> &[u32] {
        &self.cells[i]
    }

    pub fn cell_index_of(&self, v: u32) -> usize {
        self.cell_of[v as usize] as usize
    }

    /// Splits `v` out of its cell, placing the singleton `[v]` directly
    /// before the remainder of the cell.
    pub fn individualize(&mut self, v: u32) {
        let ci = self.cell_of[v as usize] as usize;
        debug_assert!(self.cells[ci].len() > 1);
        let rest: Vec<u32> = self.cells[ci].iter().copied().filter(|&x| x != v).collect();
        self.cells[ci] = vec![v];
        self.cells.insert(ci + 1, rest);
        self.reindex();
    }

    /// Cell sizes in order. Two partitions connected by an isomorphism have
    /// equal shapes, so a mismatch prunes the search.
    pub fn same_shape(&self, other: &Partition) -> bool {
        self.cells.len() == other.cells.len()
            && self.cells.iter().zip(&other.cells).all(|(a, b)| a.len() == b.len())
    }

    /// When discrete, maps each point to its cell position.
    pub fn positions(&self) -> Vec<u32> {
        debug_assert!(self.is_discrete());
        let mut pos = vec![0u32; self.cell_of.len()];
        for (i, cell) in self.cells.iter().enumerate() {
            pos[cell[0] as usize] = i as u32;
        }
        pos
    }

    fn reindex(&mut self) {
        for (i, cell) in self.cells.iter().enumerate() {
            for &v in cell {
                self.cell_of[v as usize] = i as u32;
            }
        }
    }
}

/// The initial invariant coloring: points grouped by
/// (in-degree, out-degree, height, depth), cells ordered by key.
pub(crate) fn initial_partition(p: &Poset) -> Partition {
    let n = p.n();
    let heights = p.heights();
    let depths = p.depths();
    let mut groups: BTreeMap<[u32; 4], Vec<u32>> = BTreeMap::new();
    for x in 0..n {
        let key = [p.in_degree(x), p.out_degree(x), heights[x], depths[x]];
        groups.entry(key).or_default().push(x as u32);
    }
    let cells: Vec<Vec<u32>> = groups.into_values().collect();
    let mut part = Partition { cells, cell_of: vec![0; n] };
    part.reindex();
    refine(p, &mut part);
    part
}

/// Refines to an equitable partition: repeatedly splits cells by the counts
/// of neighbours above and below in every cell, until stable. Sub-cells are
/// ordered by their count signature, which keeps the result equivariant.
pub(crate) fn refine(p: &Poset, part: &mut Partition) {
    let n = p.n();
    let words = words_for(n);
    loop {
        let masks: Vec<Vec<u64>> = part
            .cells
            .iter()
            .map(|cell| {
                let mut m = vec![0u64; words];
                for &v in cell {
                    set_bit(&mut m, v as usize);
                }
                m
            })
            .collect();
        let mut new_cells: Vec<Vec<u32>> = Vec::with_capacity(part.cells.len());
        let mut changed = false;
        for cell in &part.cells {
            if cell.len() == 1 {
                new_cells.push(cell.clone());
                continue;
            }
            let mut groups: BTreeMap<Vec<u32>, Vec<u32>> = BTreeMap::new();
            for &v in cell {
                let up = p.up_row(v as usize);
                let down = p.down_row(v as usize);
                let mut key = Vec::with_capacity(2 * masks.len());
                for mask in &masks {
                    let mut above = 0u32;
                    let mut below = 0u32;
                    for ((&u, &d), &m) in up.iter().zip(down).zip(mask) {
                        above += (u & m).count_ones();
                        below += (d & m).count_ones();
                    }
                    key.push(above);
                    key.push(below);
                }
                groups.entry(key).or_default().push(v);
            }
            if groups.len() > 1 {
                changed = true;
            }
            new_cells.extend(groups.into_values());
        }
        if !changed {
            return;
        }
        part.cells = new_cells;
        part.reindex();
    }
}
