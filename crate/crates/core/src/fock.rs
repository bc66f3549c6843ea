//! Number-eigenstate bases with fixed occupation totals per sector.
//!
//! A basis is the Cartesian product of sectors. Inside a sector the
//! occupation tuples `(n_1, …, n_L)` with `Σ n = N` (and `n_l ≤ cap_l` where a
//! cap is given) are listed in lexicographic order; the first sector varies
//! slowest. A hash index maps each tuple back to its position.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Modes sharing one conserved total occupation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorSpec {
    pub mode_count: usize,
    pub total: u32,
    /// Per-mode maximum occupation; `None` means uncapped (bosonic).
    pub caps: Option<Vec<u32>>,
}

impl SectorSpec {
    pub fn bosonic(mode_count: usize, total: u32) -> Self {
        Self {
            mode_count,
            total,
            caps: None,
        }
    }

    /// Modes restricted to occupation 0 or 1.
    pub fn qubits(mode_count: usize, total: u32) -> Self {
        Self {
            mode_count,
            total,
            caps: Some(vec![1; mode_count]),
        }
    }

    pub fn with_caps(caps: Vec<u32>, total: u32) -> Self {
        Self {
            mode_count: caps.len(),
            total,
            caps: Some(caps),
        }
    }

    fn cap(&self, mode: usize) -> Option<u32> {
        self.caps.as_ref().map(|c| c[mode])
    }

    /// Largest occupation any single mode can reach inside this sector.
    fn max_occupation(&self, mode: usize) -> u32 {
        self.cap(mode).map_or(self.total, |c| c.min(self.total))
    }

    fn validate(&self) -> Result<()> {
        if let Some(caps) = &self.caps {
            if caps.len() != self.mode_count {
                return Err(Error::InfeasibleSector(format!(
                    "{} caps given for {} modes",
                    caps.len(),
                    self.mode_count
                )));
            }
        }
        let reachable: u64 = (0..self.mode_count)
            .map(|l| u64::from(self.max_occupation(l)))
            .sum();
        if reachable < u64::from(self.total) {
            return Err(Error::InfeasibleSector(format!(
                "total occupation {} cannot be distributed over {} modes",
                self.total, self.mode_count
            )));
        }
        Ok(())
    }

    /// Number of admissible tuples, or `None` on overflow.
    pub fn count(&self) -> Option<u128> {
        let n = self.total as usize;
        // ways[r] = tuples over the modes processed so far summing to r
        let mut ways = vec![0u128; n + 1];
        ways[0] = 1;
        for l in 0..self.mode_count {
            let cap = self.max_occupation(l) as usize;
            let mut next = vec![0u128; n + 1];
            for (r, slot) in next.iter_mut().enumerate() {
                let mut acc = 0u128;
                for k in 0..=cap.min(r) {
                    acc = acc.checked_add(ways[r - k])?;
                }
                *slot = acc;
            }
            ways = next;
        }
        Some(ways[n])
    }

    /// All admissible tuples in lexicographic order, flattened.
    fn enumerate(&self, out: &mut Vec<u32>) {
        let mut current = vec![0u32; self.mode_count];
        if self.mode_count == 0 {
            return;
        }
        self.fill(0, self.total, &mut current, out);
    }

    fn fill(&self, mode: usize, remaining: u32, current: &mut [u32], out: &mut Vec<u32>) {
        let last = mode + 1 == self.mode_count;
        if last {
            if remaining <= self.max_occupation(mode) {
                current[mode] = remaining;
                out.extend_from_slice(current);
            }
            return;
        }
        // Capacity of the modes after this one bounds how little we may take.
        let tail: u32 = (mode + 1..self.mode_count)
            .map(|l| self.max_occupation(l))
            .fold(0u32, u32::saturating_add);
        let lo = remaining.saturating_sub(tail);
        let hi = self.max_occupation(mode).min(remaining);
        for k in lo..=hi {
            current[mode] = k;
            self.fill(mode + 1, remaining - k, current, out);
        }
    }
}

/// Predicted basis dimension, checked against the address space.
pub fn predicted_dimension(sectors: &[SectorSpec]) -> Result<usize> {
    let mut dim: u128 = 1;
    for s in sectors {
        s.validate()?;
        dim = s
            .count()
            .and_then(|c| dim.checked_mul(c))
            .ok_or(Error::Capacity)?;
    }
    let modes: usize = sectors.iter().map(|s| s.mode_count).sum();
    let words = dim
        .checked_mul(modes.max(1) as u128)
        .ok_or(Error::Capacity)?;
    if words > (isize::MAX as u128) / 4 {
        return Err(Error::Capacity);
    }
    usize::try_from(dim).map_err(|_| Error::Capacity)
}

#[derive(Debug, Clone)]
enum StateIndex {
    /// Occupations bit-packed into one word.
    Packed {
        shifts: Vec<u32>,
        map: HashMap<u128, usize>,
    },
    Wide(HashMap<Box<[u32]>, usize>),
}

/// Enumerated Fock basis with O(1) reverse lookup.
#[derive(Debug, Clone)]
pub struct Basis {
    sectors: Vec<SectorSpec>,
    modes: usize,
    states: Vec<u32>,
    max_occupation: Vec<u32>,
    caps: Vec<Option<u32>>,
    sector_of_mode: Vec<usize>,
    index: StateIndex,
}

impl Basis {
    /// Enumerates the product basis of `sectors`.
    pub fn enumerate(sectors: &[SectorSpec]) -> Result<Self> {
        let dim = predicted_dimension(sectors)?;
        let modes: usize = sectors.iter().map(|s| s.mode_count).sum();
        if modes == 0 {
            return Err(Error::InfeasibleSector(
                "basis needs at least one mode".into(),
            ));
        }

        let per_sector: Vec<Vec<u32>> = sectors
            .iter()
            .map(|s| {
                let mut out = Vec::new();
                s.enumerate(&mut out);
                out
            })
            .collect();

        let mut states = Vec::with_capacity(dim * modes);
        let mut tuple = Vec::with_capacity(modes);
        product(sectors, &per_sector, 0, &mut tuple, &mut states);
        debug_assert_eq!(states.len(), dim * modes);

        let mut max_occupation = Vec::with_capacity(modes);
        let mut caps = Vec::with_capacity(modes);
        let mut sector_of_mode = Vec::with_capacity(modes);
        for (k, s) in sectors.iter().enumerate() {
            for l in 0..s.mode_count {
                max_occupation.push(s.max_occupation(l));
                caps.push(s.cap(l));
                sector_of_mode.push(k);
            }
        }

        let bits: Vec<u32> = max_occupation
            .iter()
            .map(|&m| u32::BITS - m.leading_zeros())
            .collect();
        let index = if bits.iter().sum::<u32>() <= u128::BITS {
            let mut shifts = Vec::with_capacity(modes);
            let mut acc = 0;
            for b in &bits {
                shifts.push(acc);
                acc += b;
            }
            let mut map = HashMap::with_capacity(dim);
            for i in 0..dim {
                map.insert(pack(&shifts, &states[i * modes..(i + 1) * modes]), i);
            }
            StateIndex::Packed { shifts, map }
        } else {
            let mut map = HashMap::with_capacity(dim);
            for i in 0..dim {
                map.insert(states[i * modes..(i + 1) * modes].into(), i);
            }
            StateIndex::Wide(map)
        };

        Ok(Self {
            sectors: sectors.to_vec(),
            modes,
            states,
            max_occupation,
            caps,
            sector_of_mode,
            index,
        })
    }

    pub fn dim(&self) -> usize {
        self.states.len() / self.modes
    }

    pub fn mode_count(&self) -> usize {
        self.modes
    }

    pub fn sectors(&self) -> &[SectorSpec] {
        &self.sectors
    }

    /// Explicit occupation cap of every mode (`None` for bosonic modes).
    pub fn caps(&self) -> &[Option<u32>] {
        &self.caps
    }

    pub fn sector_of_mode(&self, mode: usize) -> usize {
        self.sector_of_mode[mode]
    }

    /// Global mode indices belonging to `sector`.
    pub fn sector_modes(&self, sector: usize) -> std::ops::Range<usize> {
        let start: usize = self.sectors[..sector].iter().map(|s| s.mode_count).sum();
        start..start + self.sectors[sector].mode_count
    }

    /// Occupation tuple at position `i`.
    pub fn state_at(&self, i: usize) -> Result<&[u32]> {
        if i >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index: i,
                dim: self.dim(),
            });
        }
        Ok(&self.states[i * self.modes..(i + 1) * self.modes])
    }

    /// All tuples in basis order.
    pub fn states(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        self.states.chunks_exact(self.modes)
    }

    /// Position of `state`, or `None` if it is not an admissible tuple.
    pub fn index_of(&self, state: &[u32]) -> Option<usize> {
        if state.len() != self.modes {
            return None;
        }
        if state
            .iter()
            .zip(&self.max_occupation)
            .any(|(n, max)| n > max)
        {
            return None;
        }
        match &self.index {
            StateIndex::Packed { shifts, map } => map.get(&pack(shifts, state)).copied(),
            StateIndex::Wide(map) => map.get(state).copied(),
        }
    }
}

fn pack(shifts: &[u32], state: &[u32]) -> u128 {
    state.iter().zip(shifts).fold(0u128, |acc, (&n, &s)| {
        acc | u128::from(n).checked_shl(s).unwrap_or(0)
    })
}

fn product(
    sectors: &[SectorSpec],
    per_sector: &[Vec<u32>],
    k: usize,
    tuple: &mut Vec<u32>,
    out: &mut Vec<u32>,
) {
    if k == sectors.len() {
        out.extend_from_slice(tuple);
        return;
    }
    let width = sectors[k].mode_count;
    if width == 0 {
        product(sectors, per_sector, k + 1, tuple, out);
        return;
    }
    for s in per_sector[k].chunks_exact(width) {
        let len = tuple.len();
        tuple.extend_from_slice(s);
        product(sectors, per_sector, k + 1, tuple, out);
        tuple.truncate(len);
    }
}
