use smallvec::SmallVec;

use crate::fixed::{Msg, Sign};

/// One stored magnitude and the index (layer or column) it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MagEntry {
    pub mag: u16,
    pub index: u32,
}

/// The smallest message magnitudes seen by a check node, ascending, with
/// their indices, plus the exact sign product over all of the check's edges.
///
/// Ties keep insertion order: an incumbent entry stays ahead of a newcomer
/// with the same magnitude.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SortedMagVector {
    entries: SmallVec<[MagEntry; 4]>,
    capacity: usize,
    sign_product: Sign,
}

/// Result of Step-A: the vector with the target entry removed (if present)
/// and the sign product with the target's old sign divided out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TempMagVector {
    pub vector: SortedMagVector,
    pub removed: bool,
}

/// How Step-B merges the refreshed magnitude back in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UpdateMode {
    /// Every magnitude is kept; capacity equals the check degree.
    Exact,
    /// Keep the `capacity` smallest; a newcomer that is not smaller than the
    /// last entry of a full vector is dropped.
    ThreeMin,
    /// Like `ThreeMin`, but a full vector only compares the newcomer against
    /// its first `capacity - 1` entries, so the final comparison is skipped.
    Simplified,
}

/// Where Step-B put the new magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Placement {
    /// 1-based position in the updated vector.
    Inserted(usize),
    Discarded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorError {
    DuplicateIndex(u32),
    Overflow,
}

impl SortedMagVector {
    pub fn new(capacity: usize) -> Self {
        SortedMagVector {
            entries: SmallVec::new(),
            capacity,
            sign_product: Sign::Plus,
        }
    }

    /// Vector over the given `(index, message)` pairs: the `capacity`
    /// smallest magnitudes in stable order and the product of all signs.
    pub fn from_messages(capacity: usize, msgs: impl IntoIterator<Item = (u32, Msg)>) -> Self {
        let mut v = SortedMagVector::new(capacity);
        for (index, msg) in msgs {
            v.sign_product *= msg.sign;
            let pos = v.upper_bound(msg.mag, v.entries.len());
            if pos < capacity {
                v.entries.insert(pos, MagEntry { mag: msg.mag, index });
                v.entries.truncate(capacity);
            }
        }
        v
    }

    pub fn entries(&self) -> &[MagEntry] {
        &self.entries
    }

    pub fn valid_count(&self) -> usize {
        self.entries.len()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn sign_product(&self) -> Sign {
        self.sign_product
    }

    pub fn contains(&self, index: u32) -> bool {
        self.entries.iter().any(|e| e.index == index)
    }

    /// First position among `entries[..limit]` holding a magnitude strictly
    /// greater than `mag`.
    fn upper_bound(&self, mag: u16, limit: usize) -> usize {
        self.entries[..limit]
            .iter()
            .position(|e| e.mag > mag)
            .unwrap_or(limit)
    }

    /// R message for the edge keyed `target` without modifying the vector:
    /// the same value as `compute_rcv(step_a_remove(..))`.
    pub fn rcv_excluding(&self, target: u32, old_sign: Sign) -> Option<Msg> {
        self.entries
            .iter()
            .find(|e| e.index != target)
            .map(|e| Msg::new(self.sign_product * old_sign, e.mag))
    }
}

/// Step-A: drop the entry keyed `target` if present (otherwise pass the
/// contents through) and divide its old sign out of the sign product.
pub fn step_a_remove(vec: SortedMagVector, target: u32, edge_sign_old: Sign) -> TempMagVector {
    let mut vector = vec;
    let removed = vector.remove_in_place(target, edge_sign_old);
    TempMagVector { vector, removed }
}

/// R message from a Step-A result: temp sign product times the smallest
/// remaining magnitude. `None` when the removal emptied the vector.
pub fn compute_rcv(temp: &TempMagVector) -> Option<Msg> {
    temp.vector
        .entries
        .first()
        .map(|e| Msg::new(temp.vector.sign_product, e.mag))
}

/// Step-B: merge the refreshed message of edge `new_index` into the temp
/// vector according to `mode`, and multiply its sign into the sign product.
pub fn step_b_insert(
    temp: TempMagVector,
    new_index: u32,
    new_mag: u16,
    new_sign: Sign,
    mode: UpdateMode,
) -> Result<(SortedMagVector, Placement), VectorError> {
    let mut v = temp.vector;
    let placement = v.insert_in_place(new_index, new_mag, new_sign, mode)?;
    Ok((v, placement))
}

impl SortedMagVector {
    /// In-place Step-A; returns whether an entry was removed.
    pub(crate) fn remove_in_place(&mut self, target: u32, edge_sign_old: Sign) -> bool {
        self.sign_product *= edge_sign_old;
        match self.entries.iter().position(|e| e.index == target) {
            Some(pos) => {
                self.entries.remove(pos);
                true
            }
            None => false,
        }
    }

    /// In-place Step-B. On error the vector is left unchanged.
    pub(crate) fn insert_in_place(
        &mut self,
        new_index: u32,
        new_mag: u16,
        new_sign: Sign,
        mode: UpdateMode,
    ) -> Result<Placement, VectorError> {
        if self.contains(new_index) {
            return Err(VectorError::DuplicateIndex(new_index));
        }
        let len = self.entries.len();
        let cap = self.capacity;
        let limit = match mode {
            _ if len < cap => len,
            UpdateMode::Exact => return Err(VectorError::Overflow),
            UpdateMode::ThreeMin => len,
            UpdateMode::Simplified => cap.saturating_sub(1),
        };
        self.sign_product *= new_sign;
        let pos = self.upper_bound(new_mag, limit);
        let fits = if len < cap { true } else { pos < limit.min(cap) };
        if !fits {
            return Ok(Placement::Discarded);
        }
        let entry = MagEntry {
            mag: new_mag,
            index: new_index,
        };
        if len == cap {
            self.entries.pop();
        }
        self.entries.insert(pos, entry);
        Ok(Placement::Inserted(pos + 1))
    }
}
