use std::fmt::Write as _;

use super::ParityCheckMatrix;
use crate::error::CodeError;

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.trim()))
                .filter(|(_, l)| !l.is_empty()),
        );
        Lines { inner: it.peekable() }
    }

    fn next_numbers(&mut self, what: &str) -> Result<(usize, Vec<usize>), CodeError> {
        let (line, text) = self.inner.next().ok_or_else(|| CodeError::Parse {
            line: 0,
            message: format!("unexpected end of input while reading {what}"),
        })?;
        let nums = text
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CodeError::Parse {
                line,
                message: format!("{what}: {e}"),
            })?;
        Ok((line, nums))
    }

    fn exact(&mut self, what: &str, count: usize) -> Result<Vec<usize>, CodeError> {
        let (line, nums) = self.next_numbers(what)?;
        if nums.len() != count {
            return Err(CodeError::Parse {
                line,
                message: format!("{what}: expected {count} values, found {}", nums.len()),
            });
        }
        Ok(nums)
    }
}

fn neighbor_lists(
    lines: &mut Lines<'_>,
    what: &'static str,
    degrees: &[usize],
    max_degree: usize,
    limit: usize,
) -> Result<Vec<Vec<usize>>, CodeError> {
    let mut out = Vec::with_capacity(degrees.len());
    for (node, &declared) in degrees.iter().enumerate() {
        let (line, nums) = lines.next_numbers(what)?;
        if nums.len() > max_degree.max(declared).max(1) {
            return Err(CodeError::Parse {
                line,
                message: format!("{what} {node}: {} entries exceed max degree {max_degree}", nums.len()),
            });
        }
        let list: Vec<usize> = nums.into_iter().filter(|&x| x != 0).map(|x| x - 1).collect();
        if list.len() != declared {
            return Err(CodeError::DegreeMismatch {
                what,
                node,
                declared,
                listed: list.len(),
            });
        }
        if let Some(&bad) = list.iter().find(|&&x| x >= limit) {
            return Err(CodeError::IndexOutOfRange {
                what: if what == "variable" { "check" } else { "variable" },
                index: bad + 1,
                limit,
            });
        }
        out.push(list);
    }
    Ok(out)
}

/// Parse an alist description.
///
/// Layout: `n m`, `max_var_degree max_check_degree`, the n variable degrees,
/// the m check degrees, then one line per variable listing its 1-based check
/// indices and one line per check listing its 1-based variable indices.
/// Zero entries pad a line to the maximum degree and are ignored.
pub fn load_alist(text: &str) -> Result<ParityCheckMatrix, CodeError> {
    let mut lines = Lines::new(text);
    let header = lines.exact("header (n m)", 2)?;
    let (n, m) = (header[0], header[1]);
    let maxes = lines.exact("max degrees", 2)?;
    let var_degrees = lines.exact("variable degrees", n)?;
    let check_degrees = lines.exact("check degrees", m)?;
    let var_lists = neighbor_lists(&mut lines, "variable", &var_degrees, maxes[0], m)?;
    let check_lists = neighbor_lists(&mut lines, "check", &check_degrees, maxes[1], n)?;

    let h = ParityCheckMatrix::from_check_neighbors(n, check_lists)?;
    for (v, list) in var_lists.into_iter().enumerate() {
        let mut list = list;
        list.sort_unstable();
        if list != h.var_neighbors(v) {
            let c = list
                .iter()
                .copied()
                .find(|c| !h.var_neighbors(v).contains(c))
                .or_else(|| h.var_neighbors(v).iter().copied().find(|c| !list.contains(c)))
                .unwrap_or(0);
            return Err(CodeError::Inconsistent { check: c, var: v });
        }
    }
    Ok(h)
}

/// Serialize to alist, zero-padding each neighbor line to the maximum degree
/// (a single `0` when that maximum is zero, so no line is blank).
pub fn to_alist(h: &ParityCheckMatrix) -> String {
    let mut s = String::new();
    let maxv = h.max_var_degree();
    let maxc = h.max_check_degree();
    let _ = writeln!(s, "{} {}", h.n(), h.m());
    let _ = writeln!(s, "{maxv} {maxc}");
    let join = |it: &mut dyn Iterator<Item = usize>| it.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let _ = writeln!(s, "{}", join(&mut (0..h.n()).map(|v| h.var_degree(v))));
    let _ = writeln!(s, "{}", join(&mut (0..h.m()).map(|c| h.check_degree(c))));
    for v in 0..h.n() {
        let nb = h.var_neighbors(v);
        let pad = (maxv - nb.len()).max(usize::from(maxv == 0));
        let _ = writeln!(s, "{}", join(&mut nb.iter().map(|&c| c + 1).chain(std::iter::repeat_n(0, pad))));
    }
    for c in 0..h.m() {
        let nb = h.check_neighbors(c);
        let pad = (maxc - nb.len()).max(usize::from(maxc == 0));
        let _ = writeln!(s, "{}", join(&mut nb.iter().map(|&v| v + 1).chain(std::iter::repeat_n(0, pad))));
    }
    s
}
