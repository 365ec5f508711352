//! Sparse exact linear algebra over F_p: incremental row echelon forms,
//! rank, membership, nullspaces and linear solves.

use crate::field::FieldParams;

/// Sparse vector as sorted `(index, nonzero value)` pairs.
pub type SparseVec = Vec<(u32, u32)>;

const NONE: u32 = u32::MAX;

pub fn sparse_from_dense(v: &[u32]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| (k as u32, c))
        .collect()
}

/// Accumulates `(index, value)` contributions into a sorted sparse vector.
pub fn sparse_collect(field: FieldParams, mut items: Vec<(u32, u32)>) -> SparseVec {
    items.sort_unstable_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(items.len());
    for (k, v) in items {
        match out.last_mut() {
            Some(last) if last.0 == k => last.1 = field.add(last.1, v),
            _ => out.push((k, v)),
        }
    }
    out.retain(|e| e.1 != 0);
    out
}

/// Incremental echelon form of a set of vectors of fixed length, optionally
/// recording every row as a combination of the inserted inputs.
pub struct Echelon {
    field: FieldParams,
    ncols: usize,
    rows: Vec<SparseVec>,
    pivot_row: Vec<u32>,
    tracks: Vec<SparseVec>,
    ninputs: usize,
    tracking: bool,
    scratch: Vec<u32>,
    tscratch: Vec<u32>,
}

/// Outcome of inserting a vector.
pub enum Insert {
    /// New pivot created at this column.
    Pivot(usize),
    /// The vector was dependent; with tracking, the combination of inputs
    /// (including the new one) that vanishes.
    Dependent(Option<SparseVec>),
}

impl Echelon {
    pub fn new(field: FieldParams, ncols: usize) -> Self {
        Echelon {
            field,
            ncols,
            rows: Vec::new(),
            pivot_row: vec![NONE; ncols],
            tracks: Vec::new(),
            ninputs: 0,
            tracking: false,
            scratch: vec![0; ncols],
            tscratch: Vec::new(),
        }
    }

    /// Echelon form that records combinations of at most `max_inputs` inputs.
    pub fn with_tracking(field: FieldParams, ncols: usize, max_inputs: usize) -> Self {
        let mut e = Echelon::new(field, ncols);
        e.tracking = true;
        e.tscratch = vec![0; max_inputs];
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col] != NONE
    }

    fn load(&mut self, v: &SparseVec) {
        for &(k, c) in v {
            let k = k as usize;
            assert!(k < self.ncols, "column {k} out of range {}", self.ncols);
            self.scratch[k] = self.field.add(self.scratch[k], c);
        }
    }

    fn reduce_scratch(&mut self, track: bool) {
        let f = self.field;
        for col in 0..self.ncols {
            let c = self.scratch[col];
            if c == 0 {
                continue;
            }
            let r = self.pivot_row[col];
            if r == NONE {
                continue;
            }
            let m = f.neg(c);
            for &(k, v) in &self.rows[r as usize] {
                let k = k as usize;
                self.scratch[k] = f.add(self.scratch[k], f.mul(m, v));
            }
            if track {
                for &(k, v) in &self.tracks[r as usize] {
                    let k = k as usize;
                    self.tscratch[k] = f.add(self.tscratch[k], f.mul(m, v));
                }
            }
        }
    }

    fn drain_scratch(&mut self) -> SparseVec {
        let mut out = Vec::new();
        for (k, c) in self.scratch.iter_mut().enumerate() {
            if *c != 0 {
                out.push((k as u32, *c));
                *c = 0;
            }
        }
        out
    }

    fn drain_tscratch(&mut self) -> SparseVec {
        let mut out = Vec::new();
        for (k, c) in self.tscratch.iter_mut().enumerate() {
            if *c != 0 {
                out.push((k as u32, *c));
                *c = 0;
            }
        }
        out
    }

    /// Canonical remainder of `v` modulo the row space; linear in `v` and
    /// zero exactly on the row space.
    pub fn reduce(&mut self, v: &SparseVec) -> SparseVec {
        self.load(v);
        self.reduce_scratch(false);
        self.drain_scratch()
    }

    pub fn contains(&mut self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Insert a vector. With tracking, the input receives the next input id.
    pub fn insert(&mut self, v: &SparseVec) -> Insert {
        let id = self.ninputs;
        self.ninputs += 1;
        self.load(v);
        if self.tracking {
            assert!(id < self.tscratch.len(), "too many tracked inputs");
            self.tscratch[id] = 1;
        }
        let tracking = self.tracking;
        self.reduce_scratch(tracking);
        let row = self.drain_scratch();
        if row.is_empty() {
            let t = if tracking { Some(self.drain_tscratch()) } else { None };
            return Insert::Dependent(t);
        }
        let f = self.field;
        let (pc, lead) = row[0];
        let inv = f.inv(lead);
        let row: SparseVec = row.into_iter().map(|(k, c)| (k, f.mul(c, inv))).collect();
        if tracking {
            let t = self.drain_tscratch();
            self.tracks.push(t.into_iter().map(|(k, c)| (k, f.mul(c, inv))).collect());
        }
        self.pivot_row[pc as usize] = self.rows.len() as u32;
        self.rows.push(row);
        Insert::Pivot(pc as usize)
    }

    /// Express `b` as a combination of the tracked inputs, if it lies in the span.
    pub fn solve(&mut self, b: &SparseVec) -> Option<SparseVec> {
        assert!(self.tracking, "solve requires tracking");
        self.load(b);
        self.reduce_scratch(true);
        let rem = self.drain_scratch();
        let t = self.drain_tscratch();
        if !rem.is_empty() {
            return None;
        }
        let f = self.field;
        Some(t.into_iter().map(|(k, c)| (k, f.neg(c))).collect())
    }
}

/// Rank of a list of sparse vectors of length `ncols`.
pub fn rank(field: FieldParams, ncols: usize, vecs: &[SparseVec]) -> usize {
    let mut e = Echelon::new(field, ncols);
    for v in vecs {
        e.insert(v);
    }
    e.rank()
}

/// Basis of `{c : sum_j c_j cols[j] = 0}`.
pub fn nullspace(field: FieldParams, nrows: usize, cols: &[SparseVec]) -> Vec<SparseVec> {
    let mut e = Echelon::with_tracking(field, nrows, cols.len());
    let mut out = Vec::new();
    for c in cols {
        if let Insert::Dependent(Some(t)) = e.insert(c) {
            out.push(t);
        }
    }
    out
}

/// Solve `sum_j x_j cols[j] = b`. Returns one solution if consistent.
pub fn solve(field: FieldParams, nrows: usize, cols: &[SparseVec], b: &SparseVec) -> Option<SparseVec> {
    let mut e = Echelon::with_tracking(field, nrows, cols.len() + 1);
    for c in cols {
        e.insert(c);
    }
    e.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_nullspace() {
        let f = FieldParams::new(5).unwrap();
        let cols = vec![vec![(0, 1), (1, 2)], vec![(0, 2), (1, 4)], vec![(2, 1)]];
        assert_eq!(rank(f, 3, &cols), 2);
        let ns = nullspace(f, 3, &cols);
        assert_eq!(ns.len(), 1);
        // 2*c0 - c1 = 0
        let v = &ns[0];
        let mut acc = [0u32; 3];
        for &(j, c) in v {
            for &(k, a) in &cols[j as usize] {
                acc[k as usize] = f.add(acc[k as usize], f.mul(a, c));
            }
        }
        assert_eq!(acc, [0, 0, 0]);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let f = FieldParams::new(3).unwrap();
        let cols = vec![vec![(0, 1)], vec![(1, 1)]];
        let x = solve(f, 3, &cols, &vec![(0, 2), (1, 1)]).unwrap();
        assert_eq!(x, vec![(0, 2), (1, 1)]);
        assert!(solve(f, 3, &cols, &vec![(2, 1)]).is_none());
    }

    #[test]
    fn remainder_is_canonical() {
        let f = FieldParams::new(7).unwrap();
        let mut e = Echelon::new(f, 3);
        e.insert(&vec![(0, 1), (1, 1)]);
        let r1 = e.reduce(&vec![(0, 1)]);
        let r2 = e.reduce(&vec![(1, 6)]);
        assert_eq!(r1, r2);
    }
}
