//! Sparse parity-check matrices, their column/row layering, and the loaders
//! for alist and quasi-cyclic base-matrix descriptions.

mod alist;
mod qc;

use std::path::Path;

pub use alist::{load_alist, to_alist};
pub use qc::{expand_qc, random_qc_base, QcBase, QcConstruction};

use crate::error::CodeError;

const WIMAX_RATE_HALF: &str = include_str!("../../data/wimax_rate_half_z96.qc");

/// Sparse binary M×N parity-check matrix with adjacency in both directions.
///
/// Edges are numbered in check-major order: the edges of check `c` occupy
/// `check_edges(c)` and appear in the same order as `check_neighbors(c)`.
/// Every column belongs to exactly one column layer and every row to exactly
/// one row layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    m: usize,
    n: usize,
    check_ptr: Vec<usize>,
    check_vars: Vec<usize>,
    var_ptr: Vec<usize>,
    var_checks: Vec<usize>,
    var_edges: Vec<usize>,
    layer_of_column: Vec<usize>,
    layers: Vec<Vec<usize>>,
    row_layer_of_check: Vec<usize>,
    row_layers: Vec<Vec<usize>>,
    one_per_layer: bool,
}

impl ParityCheckMatrix {
    /// Build from per-check neighbor lists. Lists are sorted; duplicates and
    /// out-of-range indices are rejected. Layering defaults to one column per
    /// column layer and one row per row layer.
    pub fn from_check_neighbors(n: usize, checks: Vec<Vec<usize>>) -> Result<Self, CodeError> {
        let m = checks.len();
        let mut check_ptr = Vec::with_capacity(m + 1);
        let mut check_vars = Vec::new();
        check_ptr.push(0);
        let mut var_deg = vec![0usize; n];
        for (c, mut vars) in checks.into_iter().enumerate() {
            vars.sort_unstable();
            for w in vars.windows(2) {
                if w[0] == w[1] {
                    return Err(CodeError::DuplicateEntry { check: c, var: w[0] });
                }
            }
            for &v in &vars {
                if v >= n {
                    return Err(CodeError::IndexOutOfRange {
                        what: "variable",
                        index: v,
                        limit: n,
                    });
                }
                var_deg[v] += 1;
            }
            check_vars.extend_from_slice(&vars);
            check_ptr.push(check_vars.len());
        }

        let mut var_ptr = Vec::with_capacity(n + 1);
        var_ptr.push(0);
        for d in &var_deg {
            var_ptr.push(var_ptr.last().unwrap() + d);
        }
        let e = check_vars.len();
        let mut var_checks = vec![0; e];
        let mut var_edges = vec![0; e];
        let mut fill = var_ptr[..n].to_vec();
        for (c, w) in check_ptr.windows(2).enumerate() {
            for (edge, &v) in (w[0]..w[1]).zip(&check_vars[w[0]..w[1]]) {
                var_checks[fill[v]] = c;
                var_edges[fill[v]] = edge;
                fill[v] += 1;
            }
        }

        let mut h = ParityCheckMatrix {
            m,
            n,
            check_ptr,
            check_vars,
            var_ptr,
            var_checks,
            var_edges,
            layer_of_column: Vec::new(),
            layers: Vec::new(),
            row_layer_of_check: Vec::new(),
            row_layers: Vec::new(),
            one_per_layer: false,
        };
        h.set_column_layers((0..n).collect());
        h.set_row_layers((0..m).collect());
        Ok(h)
    }

    /// Build from a dense 0/1 row-major matrix.
    pub fn from_dense(m: usize, n: usize, data: &[u8]) -> Result<Self, CodeError> {
        if data.len() != m * n {
            return Err(CodeError::LengthMismatch {
                got: data.len(),
                expected: m * n,
            });
        }
        let checks = (0..m)
            .map(|r| (0..n).filter(|&c| data[r * n + c] != 0).collect())
            .collect();
        Self::from_check_neighbors(n, checks)
    }

    fn set_column_layers(&mut self, layer_of_column: Vec<usize>) {
        let g = layer_of_column.iter().map(|&l| l + 1).max().unwrap_or(0);
        let mut layers = vec![Vec::new(); g];
        for (v, &l) in layer_of_column.iter().enumerate() {
            layers[l].push(v);
        }
        self.one_per_layer = (0..self.m).all(|c| {
            let mut seen: Vec<usize> = self.check_neighbors(c).iter().map(|&v| layer_of_column[v]).collect();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        });
        self.layer_of_column = layer_of_column;
        self.layers = layers;
    }

    fn set_row_layers(&mut self, row_layer_of_check: Vec<usize>) {
        let g = row_layer_of_check.iter().map(|&l| l + 1).max().unwrap_or(0);
        let mut layers = vec![Vec::new(); g];
        for (c, &l) in row_layer_of_check.iter().enumerate() {
            layers[l].push(c);
        }
        self.row_layer_of_check = row_layer_of_check;
        self.row_layers = layers;
    }

    /// Regroup columns into consecutive layers of `group_size` columns.
    pub fn regroup_layers(&self, group_size: usize) -> Result<Self, CodeError> {
        if group_size == 0 || !self.n.is_multiple_of(group_size) {
            return Err(CodeError::BadGroupSize {
                group_size,
                n: self.n,
            });
        }
        let mut h = self.clone();
        h.set_column_layers((0..self.n).map(|v| v / group_size).collect());
        Ok(h)
    }

    /// Regroup rows into consecutive row layers of `group_size` checks.
    pub fn regroup_row_layers(&self, group_size: usize) -> Result<Self, CodeError> {
        if group_size == 0 || !self.m.is_multiple_of(group_size) {
            return Err(CodeError::BadGroupSize {
                group_size,
                n: self.m,
            });
        }
        let mut h = self.clone();
        h.set_row_layers((0..self.m).map(|c| c / group_size).collect());
        Ok(h)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.check_vars.len()
    }

    pub fn check_neighbors(&self, c: usize) -> &[usize] {
        &self.check_vars[self.check_ptr[c]..self.check_ptr[c + 1]]
    }

    /// Edge ids of check `c`, aligned with `check_neighbors(c)`.
    pub fn check_edges(&self, c: usize) -> std::ops::Range<usize> {
        self.check_ptr[c]..self.check_ptr[c + 1]
    }

    pub fn var_neighbors(&self, v: usize) -> &[usize] {
        &self.var_checks[self.var_ptr[v]..self.var_ptr[v + 1]]
    }

    /// Edge ids of variable `v`, aligned with `var_neighbors(v)`.
    pub fn var_edges(&self, v: usize) -> &[usize] {
        &self.var_edges[self.var_ptr[v]..self.var_ptr[v + 1]]
    }

    /// Variable at the far end of an edge.
    pub fn edge_var(&self, edge: usize) -> usize {
        self.check_vars[edge]
    }

    pub fn check_degree(&self, c: usize) -> usize {
        self.check_ptr[c + 1] - self.check_ptr[c]
    }

    pub fn var_degree(&self, v: usize) -> usize {
        self.var_ptr[v + 1] - self.var_ptr[v]
    }

    pub fn max_check_degree(&self) -> usize {
        (0..self.m).map(|c| self.check_degree(c)).max().unwrap_or(0)
    }

    pub fn max_var_degree(&self) -> usize {
        (0..self.n).map(|v| self.var_degree(v)).max().unwrap_or(0)
    }

    pub fn layer_of_column(&self, v: usize) -> usize {
        self.layer_of_column[v]
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    /// Columns of layer `g`, ascending.
    pub fn layer(&self, g: usize) -> &[usize] {
        &self.layers[g]
    }

    pub fn num_row_layers(&self) -> usize {
        self.row_layers.len()
    }

    pub fn row_layer(&self, g: usize) -> &[usize] {
        &self.row_layers[g]
    }

    /// Whether every check has at most one neighbor per column layer.
    pub fn one_neighbor_per_layer(&self) -> bool {
        self.one_per_layer
    }

    /// Index stored in a check's sorted vector for column `v`: the layer index
    /// when each check meets each layer at most once, else the column itself.
    pub fn edge_key(&self, v: usize) -> u32 {
        if self.one_per_layer {
            self.layer_of_column[v] as u32
        } else {
            v as u32
        }
    }

    /// Design rate `(n - m) / n` as the pair `(n - m, n)`.
    pub fn design_rate(&self) -> (usize, usize) {
        (self.n.saturating_sub(self.m), self.n)
    }

    /// True iff every parity check is satisfied by `bits` (0/1 values).
    pub fn syndrome_ok(&self, bits: &[u8]) -> Result<bool, CodeError> {
        if bits.len() != self.n {
            return Err(CodeError::LengthMismatch {
                got: bits.len(),
                expected: self.n,
            });
        }
        Ok(self.syndrome_ok_unchecked(bits))
    }

    pub(crate) fn syndrome_ok_unchecked(&self, bits: &[u8]) -> bool {
        (0..self.m).all(|c| {
            self.check_neighbors(c)
                .iter()
                .fold(0u8, |acc, &v| acc ^ (bits[v] & 1))
                == 0
        })
    }

    /// WiMax (802.16e) rate-1/2 length-2304 code, z = 96, one layer per
    /// block column and one row layer per block row.
    pub fn wimax_rate_half() -> Self {
        let base = QcBase::parse(WIMAX_RATE_HALF).expect("bundled base matrix is valid");
        expand_qc(&base)
    }

    /// Resolve a code description:
    ///
    /// * `wimax-1/2`: the bundled WiMax rate-1/2 (2304, 1152) code
    /// * `random-qc:ROWS,COLS,Z,SEED`: [`random_qc_base`] then [`expand_qc`]
    /// * `alist:PATH`, `qc:PATH`: explicit loaders
    /// * any other string is a path; `.alist` files are alist, the rest QC base files
    pub fn from_spec(spec: &str) -> Result<Self, CodeError> {
        if spec == "wimax-1/2" || spec == "wimax-r12" {
            return Ok(Self::wimax_rate_half());
        }
        if let Some(rest) = spec.strip_prefix("random-qc:") {
            let parts: Vec<u64> = rest
                .split(',')
                .map(|p| p.trim().parse::<u64>())
                .collect::<Result<_, _>>()
                .map_err(|_| CodeError::UnknownSpec(spec.to_string()))?;
            let [rows, cols, z, seed] = parts[..] else {
                return Err(CodeError::UnknownSpec(spec.to_string()));
            };
            let base = random_qc_base(
                rows as usize,
                cols as usize,
                z as usize,
                seed,
                QcConstruction::default(),
            )?;
            return Ok(expand_qc(&base));
        }
        if let Some(path) = spec.strip_prefix("alist:") {
            return load_alist(&read(path)?);
        }
        if let Some(path) = spec.strip_prefix("qc:") {
            return Ok(expand_qc(&QcBase::parse(&read(path)?)?));
        }
        let path = Path::new(spec);
        if !path.exists() {
            return Err(CodeError::UnknownSpec(spec.to_string()));
        }
        let text = read(spec)?;
        if path.extension().is_some_and(|e| e == "alist") {
            load_alist(&text)
        } else {
            Ok(expand_qc(&QcBase::parse(&text)?))
        }
    }
}

fn read(path: &str) -> Result<String, CodeError> {
    std::fs::read_to_string(path).map_err(|e| CodeError::Io {
        path: path.to_string(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transpose_consistency() {
        let h = ParityCheckMatrix::from_check_neighbors(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(h.check_neighbors(0), &[0, 1]);
        assert_eq!(h.check_neighbors(1), &[2, 3]);
        assert_eq!(h.var_neighbors(1), &[0]);
        for v in 0..4 {
            for (&c, &e) in h.var_neighbors(v).iter().zip(h.var_edges(v)) {
                assert!(h.check_edges(c).contains(&e));
                assert_eq!(h.edge_var(e), v);
            }
        }
    }

    #[test]
    fn rejects_bad_entries() {
        assert!(matches!(
            ParityCheckMatrix::from_check_neighbors(2, vec![vec![0, 2]]),
            Err(CodeError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            ParityCheckMatrix::from_check_neighbors(2, vec![vec![1, 1]]),
            Err(CodeError::DuplicateEntry { .. })
        ));
    }

    #[test]
    fn syndrome_examples() {
        let h = ParityCheckMatrix::from_check_neighbors(2, vec![vec![0, 1]]).unwrap();
        assert!(h.syndrome_ok(&[0, 0]).unwrap());
        assert!(!h.syndrome_ok(&[1, 0]).unwrap());
        assert!(h.syndrome_ok(&[1, 1]).unwrap());
        assert!(h.syndrome_ok(&[1]).is_err());
    }

    #[test]
    fn regroup_examples() {
        let h = ParityCheckMatrix::from_check_neighbors(4, vec![vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(h.num_layers(), 4);
        assert_eq!(h.regroup_layers(4).unwrap().num_layers(), 1);
        assert_eq!(h.regroup_layers(1).unwrap().num_layers(), 4);
        let g2 = h.regroup_layers(2).unwrap();
        assert_eq!(g2.layer(1), &[2, 3]);
        assert!(!g2.one_neighbor_per_layer());
        assert_eq!(g2.edge_key(3), 3);
        assert!(matches!(h.regroup_layers(3), Err(CodeError::BadGroupSize { .. })));
    }

    #[test]
    fn wimax_dimensions() {
        let h = ParityCheckMatrix::wimax_rate_half();
        assert_eq!((h.m(), h.n()), (1152, 2304));
        assert_eq!(h.num_layers(), 24);
        assert_eq!(h.num_row_layers(), 12);
        assert_eq!(h.num_edges(), 76 * 96);
        assert!(h.one_neighbor_per_layer());
        assert_eq!(h.max_var_degree(), 6);
        assert_eq!(h.max_check_degree(), 7);
    }

    #[test]
    fn spec_strings() {
        let h = ParityCheckMatrix::from_spec("random-qc:2,8,16,3").unwrap();
        assert_eq!((h.m(), h.n()), (32, 128));
        assert!(ParityCheckMatrix::from_spec("random-qc:2,8").is_err());
        assert!(ParityCheckMatrix::from_spec("/no/such/file").is_err());
    }
}
