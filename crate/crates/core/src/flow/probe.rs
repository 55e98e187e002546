//! Exact per-mode check of the linearized operator at the trivial solution:
//! b̂ ↦ (k∧b̂)∧*φ has kernel span{k}, and its image equals {k∧γ : γ ∈ Λ⁵}.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::exalg::{nullspace, KForm, Scalar};
use crate::g2::G2Data;
use crate::{Error, Result};

/// Integer tables: `linear[i][j]` = coefficients of (eⁱ∧eʲ)∧*φ and
/// `image[i][c]` = coefficients of eⁱ∧(c-th basis 5-form).
struct Tables {
    linear: Vec<Vec<[i64; 7]>>,
    image: Vec<Vec<[i64; 7]>>,
}

fn integer_coeffs(f: &KForm<BigRational>) -> [i64; 7] {
    let mut out = [0; 7];
    for (o, c) in out.iter_mut().zip(f.coeffs()) {
        assert!(c.is_integer(), "integer structure constants");
        *o = c.to_integer().try_into().expect("small structure constant");
    }
    out
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let g = G2Data::<BigRational>::standard();
        let e = |i: usize| KForm::blade(7, &[i + 1]).expect("unit 1-form");
        let linear = (0..7)
            .map(|i| {
                (0..7)
                    .map(|j| integer_coeffs(&e(i).wedge(&e(j)).and_then(|w| w.wedge(&g.star_phi)).expect("degrees fit")))
                    .collect()
            })
            .collect();
        let image = (0..7)
            .map(|i| {
                (0..21)
                    .map(|c| {
                        let mut coeffs = vec![BigRational::zero(); 21];
                        coeffs[c] = BigRational::one();
                        let gamma = KForm::from_coeffs(7, 5, coeffs).expect("21 coefficients");
                        integer_coeffs(&e(i).wedge(&gamma).expect("degrees fit"))
                    })
                    .collect()
            })
            .collect();
        Tables { linear, image }
    })
}

/// Columns of the two maps for a mode, as 7-row integer matrices.
fn mode_columns(k: &[i64; 7]) -> (Vec<[i64; 7]>, Vec<[i64; 7]>) {
    let t = tables();
    let combine = |table: &Vec<Vec<[i64; 7]>>, cols: usize| -> Vec<[i64; 7]> {
        (0..cols)
            .map(|j| {
                let mut col = [0; 7];
                for (i, &ki) in k.iter().enumerate() {
                    for r in 0..7 {
                        col[r] += ki * table[i][j][r];
                    }
                }
                col
            })
            .collect()
    };
    (combine(&t.linear, 7), combine(&t.image, 21))
}

/// Rank of a 7-row integer matrix given by columns, by fraction-free
/// (Bareiss) elimination in i128.
fn bareiss_rank(cols: &[[i64; 7]]) -> usize {
    let mut m: Vec<Vec<i128>> = (0..7).map(|r| cols.iter().map(|c| c[r] as i128).collect()).collect();
    let ncols = cols.len();
    let mut rank = 0;
    let mut prev: i128 = 1;
    for col in 0..ncols {
        if rank == 7 {
            break;
        }
        let Some(pivot) = (rank..7).find(|&r| m[r][col] != 0) else { continue };
        m.swap(rank, pivot);
        for r in rank + 1..7 {
            for c in col + 1..ncols {
                let v = m[rank][col] * m[r][c] - m[r][col] * m[rank][c];
                m[r][c] = v / prev;
            }
            m[r][col] = 0;
        }
        prev = m[rank][col];
        rank += 1;
    }
    rank
}

/// Kernel dimension and image rank data for one mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ModeRanks {
    pub kernel_dim: usize,
    pub operator_rank: usize,
    pub image_rank: usize,
    pub joint_rank: usize,
}

impl ModeRanks {
    pub fn images_agree(&self) -> bool {
        self.operator_rank == self.image_rank && self.image_rank == self.joint_rank
    }
}

fn check_mode(k: &[i64; 7]) -> Result<()> {
    if k.iter().all(|&x| x == 0) {
        return Err(Error::InvalidInput("the zero mode is excluded".into()));
    }
    Ok(())
}

pub fn mode_ranks(k: &[i64; 7]) -> Result<ModeRanks> {
    check_mode(k)?;
    let (op, img) = mode_columns(k);
    let operator_rank = bareiss_rank(&op);
    let joint: Vec<[i64; 7]> = op.iter().chain(&img).copied().collect();
    Ok(ModeRanks {
        kernel_dim: 7 - operator_rank,
        operator_rank,
        image_rank: bareiss_rank(&img),
        joint_rank: bareiss_rank(&joint),
    })
}

/// Exact kernel basis of b̂ ↦ (k∧b̂)∧*φ.
pub fn mode_kernel(k: &[i64; 7]) -> Result<Vec<Vec<BigRational>>> {
    check_mode(k)?;
    let (op, _) = mode_columns(k);
    let rows: Vec<Vec<BigRational>> =
        (0..7).map(|r| op.iter().map(|c| BigRational::from_i64(c[r])).collect()).collect();
    Ok(nullspace(&rows, 7))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelProbeReport {
    pub kmax: i64,
    pub modes: usize,
    /// kernel dimension → number of modes.
    pub kernel_dims: BTreeMap<usize, usize>,
    pub rank_equality_failures: usize,
    pub passed: bool,
}

/// All nonzero k ∈ Z⁷ with |k|∞ ≤ kmax.
pub fn kernel_probe(kmax: i64) -> Result<KernelProbeReport> {
    if kmax < 1 {
        return Err(Error::InvalidInput(format!("kmax must be at least 1, got {kmax}")));
    }
    let side = (2 * kmax + 1) as usize;
    let total = side.pow(7);
    let ranks: Vec<ModeRanks> = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let mut k = [0i64; 7];
            let mut rest = idx;
            for slot in k.iter_mut().rev() {
                *slot = (rest % side) as i64 - kmax;
                rest /= side;
            }
            mode_ranks(&k).ok()
        })
        .collect();
    let mut kernel_dims = BTreeMap::new();
    let mut rank_equality_failures = 0;
    for r in &ranks {
        *kernel_dims.entry(r.kernel_dim).or_insert(0) += 1;
        if !r.images_agree() {
            rank_equality_failures += 1;
        }
    }
    let passed = kernel_dims.len() == 1 && kernel_dims.contains_key(&1) && rank_equality_failures == 0;
    Ok(KernelProbeReport { kmax, modes: ranks.len(), kernel_dims, rank_equality_failures, passed })
}
