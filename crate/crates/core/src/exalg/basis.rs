//! Basis blades `e^{i1...ik}` of Λ^k(Rⁿ)* in lexicographic order.
//!
//! A blade is stored as a bitmask over the axes (bit `i` = axis `i+1`).
//! Every module shares the ordering produced here.

use std::sync::OnceLock;

use crate::{Error, Result};

/// Strictly increasing tuple of (1-based) axis indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(u16);

impl MultiIndex {
    pub fn from_mask(mask: u16) -> Self {
        MultiIndex(mask)
    }

    /// Build from 1-based axis labels; they must be strictly increasing.
    pub fn new(axes: &[usize]) -> Result<Self> {
        let mut mask = 0u16;
        let mut last = 0;
        for &a in axes {
            if a <= last || a > 8 {
                return Err(Error::InvalidInput(format!(
                    "multi-index {axes:?} is not strictly increasing in 1..=8"
                )));
            }
            last = a;
            mask |= 1 << (a - 1);
        }
        Ok(MultiIndex(mask))
    }

    pub fn mask(self) -> u16 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    /// 1-based axis labels in increasing order.
    pub fn axes(self) -> Vec<usize> {
        (0..16).filter(|b| self.0 & (1 << b) != 0).map(|b| b + 1).collect()
    }
}

pub struct Basis {
    pub dim: usize,
    /// `blades[k]` lists the degree-k masks in lexicographic order.
    blades: Vec<Vec<u16>>,
    /// Position of a mask inside its degree.
    position: Vec<u16>,
}

impl Basis {
    fn build(dim: usize) -> Self {
        let mut blades = vec![Vec::new(); dim + 1];
        fn rec(start: usize, dim: usize, mask: u16, out: &mut Vec<Vec<u16>>) {
            out[mask.count_ones() as usize].push(mask);
            for a in start..dim {
                rec(a + 1, dim, mask | (1 << a), out);
            }
        }
        rec(0, dim, 0, &mut blades);
        // Depth-first enumeration already yields lexicographic order within
        // each degree.
        let mut position = vec![u16::MAX; 1 << dim];
        for list in &blades {
            for (i, &m) in list.iter().enumerate() {
                position[m as usize] = i as u16;
            }
        }
        Basis { dim, blades, position }
    }

    pub fn blades(&self, degree: usize) -> &[u16] {
        &self.blades[degree]
    }

    pub fn count(&self, degree: usize) -> usize {
        self.blades[degree].len()
    }

    pub fn index_of(&self, mask: u16) -> usize {
        self.position[mask as usize] as usize
    }

    pub fn full_mask(&self) -> u16 {
        ((1u32 << self.dim) - 1) as u16
    }
}

pub fn basis(dim: usize) -> Result<&'static Basis> {
    static B7: OnceLock<Basis> = OnceLock::new();
    static B8: OnceLock<Basis> = OnceLock::new();
    match dim {
        7 => Ok(B7.get_or_init(|| Basis::build(7))),
        8 => Ok(B8.get_or_init(|| Basis::build(8))),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// Sign of the shuffle that sorts the concatenation `(a, b)` of two disjoint
/// blades: `(-1)^{#{(x, y) : x ∈ a, y ∈ b, x > y}}`.
pub fn shuffle_sign(a: u16, b: u16) -> i64 {
    debug_assert_eq!(a & b, 0);
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let y = rest.trailing_zeros();
        inversions += (a >> (y + 1)).count_ones();
        rest &= rest - 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Number of axes of `mask` strictly below `axis` (0-based).
pub fn rank_below(mask: u16, axis: usize) -> u32 {
    (mask & ((1u16 << axis) - 1)).count_ones()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
