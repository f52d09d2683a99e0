use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ParityCheckMatrix;
use crate::error::CodeError;

/// Base matrix of a quasi-cyclic code: a `rows_b × cols_b` grid of z×z blocks,
/// each either zero (`None`, written `-1`) or the identity cyclically shifted
/// by the given amount.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QcBase {
    rows_b: usize,
    cols_b: usize,
    z: usize,
    shifts: Vec<Option<usize>>,
}

impl QcBase {
    pub fn new(rows_b: usize, cols_b: usize, z: usize, shifts: Vec<i64>) -> Result<Self, CodeError> {
        if rows_b == 0 || cols_b == 0 || z == 0 {
            return Err(CodeError::InvalidParameters(format!(
                "base dimensions {rows_b}x{cols_b} with z={z}"
            )));
        }
        if shifts.len() != rows_b * cols_b {
            return Err(CodeError::InvalidParameters(format!(
                "{} shifts for a {rows_b}x{cols_b} base",
                shifts.len()
            )));
        }
        let shifts = shifts
            .into_iter()
            .enumerate()
            .map(|(k, s)| match s {
                -1 => Ok(None),
                s if s >= 0 && (s as usize) < z => Ok(Some(s as usize)),
                s => Err(CodeError::BadShift {
                    row: k / cols_b,
                    col: k % cols_b,
                    shift: s,
                    z,
                }),
            })
            .collect::<Result<_, _>>()?;
        Ok(QcBase {
            rows_b,
            cols_b,
            z,
            shifts,
        })
    }

    /// Parse `rows_b cols_b z` followed by `rows_b` lines of `cols_b` shifts.
    pub fn parse(text: &str) -> Result<Self, CodeError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let numbers = |line: usize, l: &str| -> Result<Vec<i64>, CodeError> {
            l.split_whitespace()
                .map(|t| t.parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|e| CodeError::Parse {
                    line,
                    message: e.to_string(),
                })
        };
        let (line, head) = lines.next().ok_or(CodeError::Parse {
            line: 0,
            message: "empty QC base file".into(),
        })?;
        let head = numbers(line, head)?;
        let [rows_b, cols_b, z] = head[..] else {
            return Err(CodeError::Parse {
                line,
                message: "header must be `rows_b cols_b z`".into(),
            });
        };
        if rows_b <= 0 || cols_b <= 0 || z <= 0 {
            return Err(CodeError::Parse {
                line,
                message: "dimensions must be positive".into(),
            });
        }
        let (rows_b, cols_b, z) = (rows_b as usize, cols_b as usize, z as usize);
        let mut shifts = Vec::with_capacity(rows_b * cols_b);
        for r in 0..rows_b {
            let (line, l) = lines.next().ok_or(CodeError::Parse {
                line: 0,
                message: format!("missing base row {r}"),
            })?;
            let row = numbers(line, l)?;
            if row.len() != cols_b {
                return Err(CodeError::Parse {
                    line,
                    message: format!("expected {cols_b} shifts, found {}", row.len()),
                });
            }
            shifts.extend(row);
        }
        if let Some((line, _)) = lines.next() {
            return Err(CodeError::Parse {
                line,
                message: "trailing data after base rows".into(),
            });
        }
        QcBase::new(rows_b, cols_b, z, shifts)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows_b, self.cols_b, self.z);
        for r in 0..self.rows_b {
            let row: Vec<String> = (0..self.cols_b)
                .map(|c| self.shift(r, c).map_or("-1".to_string(), |s| s.to_string()))
                .collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s
    }

    pub fn rows_b(&self) -> usize {
        self.rows_b
    }

    pub fn cols_b(&self) -> usize {
        self.cols_b
    }

    pub fn z(&self) -> usize {
        self.z
    }

    pub fn shift(&self, row: usize, col: usize) -> Option<usize> {
        self.shifts[row * self.cols_b + col]
    }

    /// Whether the expanded graph contains a length-4 cycle: two block rows
    /// and two block columns, all nonzero, whose shifts close the loop
    /// `s(i,j) - s(i,l) + s(k,l) - s(k,j) ≡ 0 (mod z)`.
    pub fn has_four_cycle(&self) -> bool {
        let z = self.z as i64;
        for i in 0..self.rows_b {
            for k in i + 1..self.rows_b {
                let mut seen = vec![false; self.z];
                for j in 0..self.cols_b {
                    if let (Some(a), Some(b)) = (self.shift(i, j), self.shift(k, j)) {
                        let d = (a as i64 - b as i64).rem_euclid(z) as usize;
                        if seen[d] {
                            return true;
                        }
                        seen[d] = true;
                    }
                }
            }
        }
        false
    }
}

/// Expand a base matrix. Block `(i, j)` with shift `s` contributes edges
/// `(i·z + r, j·z + (r + s) mod z)`. Column layers are the block columns and
/// row layers the block rows.
pub fn expand_qc(base: &QcBase) -> ParityCheckMatrix {
    let z = base.z;
    let mut checks = vec![Vec::new(); base.rows_b * z];
    for i in 0..base.rows_b {
        for j in 0..base.cols_b {
            if let Some(s) = base.shift(i, j) {
                for r in 0..z {
                    checks[i * z + r].push(j * z + (r + s) % z);
                }
            }
        }
    }
    let h = ParityCheckMatrix::from_check_neighbors(base.cols_b * z, checks)
        .expect("expanded circulants are well formed");
    h.regroup_layers(z)
        .and_then(|h| h.regroup_row_layers(z))
        .expect("z divides both dimensions")
}

/// Options for [`random_qc_base`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QcConstruction {
    /// Draws per block column before giving up.
    pub max_attempts: usize,
    /// Accept the last draw instead of failing when no 4-cycle-free column is found.
    pub allow_four_cycles: bool,
}

impl Default for QcConstruction {
    fn default() -> Self {
        QcConstruction {
            max_attempts: 10_000,
            allow_four_cycles: false,
        }
    }
}

/// Seeded regular QC base with every block nonzero. Columns are drawn one at
/// a time and rejected when some pair of block rows repeats a shift
/// difference already used by an earlier column (a 4-cycle).
pub fn random_qc_base(
    rows_b: usize,
    cols_b: usize,
    z: usize,
    seed: u64,
    opts: QcConstruction,
) -> Result<QcBase, CodeError> {
    if rows_b == 0 || cols_b < rows_b || z == 0 {
        return Err(CodeError::InvalidParameters(format!(
            "need rows_b >= 1, cols_b >= rows_b, z >= 1 (got {rows_b}, {cols_b}, {z})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(usize, usize)> = (0..rows_b)
        .flat_map(|i| (i + 1..rows_b).map(move |k| (i, k)))
        .collect();
    // used[p][d]: difference d already taken for row pair p
    let mut used = vec![vec![false; z]; pairs.len()];
    let mut columns: Vec<Vec<usize>> = Vec::with_capacity(cols_b);
    let diff = |col: &[usize], (i, k): (usize, usize)| (col[i] + z - col[k]) % z;

    for j in 0..cols_b {
        let mut chosen = None;
        let mut last = Vec::new();
        for _ in 0..opts.max_attempts.max(1) {
            let col: Vec<usize> = (0..rows_b).map(|_| rng.random_range(0..z)).collect();
            let clean = pairs
                .iter()
                .enumerate()
                .all(|(p, &pair)| !used[p][diff(&col, pair)]);
            if clean {
                chosen = Some(col);
                break;
            }
            last = col;
        }
        let col = match chosen {
            Some(c) => c,
            None if opts.allow_four_cycles => last,
            None => {
                return Err(CodeError::ConstructionFailed {
                    column: j,
                    attempts: opts.max_attempts,
                })
            }
        };
        for (p, &pair) in pairs.iter().enumerate() {
            used[p][diff(&col, pair)] = true;
        }
        columns.push(col);
    }

    let shifts = (0..rows_b)
        .flat_map(|i| columns.iter().map(move |col| col[i] as i64))
        .collect();
    QcBase::new(rows_b, cols_b, z, shifts)
}
