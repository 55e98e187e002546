//! Uniform periodic grids over a subset of the seven torus axes.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Active axes (1-based, increasing) and points per active axis; fields are
/// constant along the remaining axes. Coordinates have period one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusGrid {
    axes: Vec<usize>,
    n: usize,
}

impl TorusGrid {
    pub fn new(axes: &[usize], n: usize) -> Result<Self> {
        if axes.is_empty() || axes.len() > 7 {
            return Err(Error::InvalidInput(format!("need 1 to 7 active axes, got {}", axes.len())));
        }
        if axes.windows(2).any(|w| w[0] >= w[1]) || axes.iter().any(|&a| !(1..=7).contains(&a)) {
            return Err(Error::InvalidInput(format!("active axes must be increasing in 1..=7: {axes:?}")));
        }
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::InvalidInput(format!("resolution must be a power of two ≥ 2, got {n}")));
        }
        let points = n.checked_pow(axes.len() as u32).filter(|&p| p <= 1 << 24);
        if points.is_none() {
            return Err(Error::InvalidInput(format!("grid {n}^{} is too large", axes.len())));
        }
        Ok(TorusGrid { axes: axes.to_vec(), n })
    }

    pub fn axes(&self) -> &[usize] {
        &self.axes
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.axes.len()
    }

    pub fn points(&self) -> usize {
        self.n.pow(self.axes.len() as u32)
    }

    /// Per-axis indices of a flat point index; the first active axis varies slowest.
    pub fn multi_index(&self, p: usize) -> Vec<usize> {
        let mut out = vec![0; self.rank()];
        let mut rest = p;
        for slot in out.iter_mut().rev() {
            *slot = rest % self.n;
            rest /= self.n;
        }
        out
    }

    /// Coordinates (x¹..x⁷) of a grid point; inactive axes read zero.
    pub fn coords(&self, p: usize) -> [f64; 7] {
        let mut x = [0.0; 7];
        for (axis, i) in self.axes.iter().zip(self.multi_index(p)) {
            x[axis - 1] = i as f64 / self.n as f64;
        }
        x
    }

    /// Same axes, different resolution (any n ≥ 1; used for quadrature grids).
    pub(crate) fn with_resolution(&self, n: usize) -> Self {
        TorusGrid { axes: self.axes.clone(), n }
    }

    /// Signed integer wavenumber of a 1D FFT slot; `None` for the Nyquist slot.
    pub fn wavenumber(&self, i: usize) -> Option<i64> {
        wavenumber(i, self.n)
    }
}

pub(crate) fn wavenumber(i: usize, n: usize) -> Option<i64> {
    if 2 * i < n {
        Some(i as i64)
    } else if 2 * i == n {
        None
    } else {
        Some(i as i64 - n as i64)
    }
}

type PlanKey = (usize, bool);

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    static PLANS: OnceLock<Mutex<HashMap<PlanKey, Arc<dyn Fft<f64>>>>> = OnceLock::new();
    let mut plans = PLANS.get_or_init(Default::default).lock().expect("plan cache poisoned");
    plans
        .entry((n, inverse))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if inverse {
                planner.plan_fft_inverse(n)
            } else {
                planner.plan_fft_forward(n)
            }
        })
        .clone()
}

/// Unnormalized m-dimensional DFT in place over an n^m array.
pub(crate) fn fft_nd(data: &mut [Complex64], n: usize, m: usize, inverse: bool) {
    let fft = plan(n, inverse);
    let mut line = vec![Complex64::default(); n];
    for axis in 0..m {
        let stride = n.pow((m - 1 - axis) as u32);
        let block = stride * n;
        for start in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                let base = start + offset;
                for (i, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + i * stride];
                }
                fft.process(&mut line);
                for (i, v) in line.iter().enumerate() {
                    data[base + i * stride] = *v;
                }
            }
        }
    }
}

/// Quadrature resolution that integrates products of up to five band-limited
/// fields on an n-grid exactly.
pub fn quadrature_resolution(n: usize) -> usize {
    let m = (5 * (n / 2).saturating_sub(1) + 1).max(n);
    m + m % 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_shape() {
        assert!(TorusGrid::new(&[1, 2], 4).is_ok());
        assert!(TorusGrid::new(&[2, 1], 4).is_err());
        assert!(TorusGrid::new(&[1], 6).is_err());
        assert!(TorusGrid::new(&[8], 4).is_err());
        assert!(TorusGrid::new(&[], 4).is_err());
    }

    #[test]
    fn indexing_is_lexicographic() {
        let g = TorusGrid::new(&[2, 5], 4).unwrap();
        assert_eq!(g.multi_index(6), vec![1, 2]);
        let x = g.coords(6);
        assert_eq!(x[1], 0.25);
        assert_eq!(x[4], 0.5);
        assert_eq!(x[0], 0.0);
    }

    #[test]
    fn quadrature_sizes() {
        assert_eq!(quadrature_resolution(8), 16);
        assert_eq!(quadrature_resolution(4), 6);
        assert_eq!(quadrature_resolution(2), 2);
    }

    #[test]
    fn wavenumbers_skip_nyquist() {
        let got: Vec<_> = (0..4).map(|i| wavenumber(i, 4)).collect();
        assert_eq!(got, vec![Some(0), Some(1), None, Some(-1)]);
    }
}
