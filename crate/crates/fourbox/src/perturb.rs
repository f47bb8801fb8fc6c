//! Degenerate first-order perturbation theory: the g x g secular problem on
//! each multiplet, symmetry labels for the roots via projection, and the
//! truncated energy series `E(lambda) = E0 + E1 lambda`.

use crate::boxbasis::{pair_potential_elem, DegenerateMultiplet};
use crate::symgroup::{Irrep, SymmetryGroup, IRREPS};
use nalgebra::{DMatrix, DVector};
use num_traits::ToPrimitive;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PerturbError {
    #[error("no projector reproduces a secular eigenvector cluster at e1 = {e1}")]
    UnlabeledRoot { e1: f64 },
}

/// Relative tolerance for treating secular roots as one degenerate cluster.
pub const CLUSTER_TOL: f64 = 1e-9;

/// A first-order level: `E(lambda) = e0 + e1 lambda` with its symmetry label.
#[derive(Debug, Clone, Copy)]
pub struct PtLevel {
    pub shell: u32,
    pub e0: f64,
    pub e1: f64,
    pub irrep: Irrep,
    /// number of independent irrep copies sharing this root
    pub multiplicity: u32,
    /// the k in labels like 3A1g; 0 until assigned by `pt_spectrum`
    pub sequence_index: u32,
}

impl PtLevel {
    pub fn label(&self) -> String {
        format!("{}{}", self.sequence_index, self.irrep)
    }
}

/// First-order energy at coupling `lambda`.
pub fn pt_energy(level: &PtLevel, lambda: f64) -> f64 {
    assert!(lambda >= 0.0);
    level.e0 + level.e1 * lambda
}

/// The g x g matrix of the pair interaction on the multiplet members.
pub fn secular_matrix(m: &DegenerateMultiplet) -> DMatrix<f64> {
    let g = m.degeneracy();
    DMatrix::from_fn(g, g, |i, j| {
        pair_potential_elem(&m.members[i], &m.members[j])
    })
}

/// Solve the secular problem on one multiplet and label every root with its
/// irrep. Degenerate roots (within `CLUSTER_TOL` relative) are labeled
/// jointly; a cluster containing several irreps yields one `PtLevel` per
/// irrep with the shared `e1`. Levels are sorted ascending by `e1`.
pub fn first_order(
    group: &SymmetryGroup,
    m: &DegenerateMultiplet,
) -> Result<Vec<PtLevel>, PerturbError> {
    let hp = secular_matrix(m);
    let g = m.degeneracy();
    let eig = hp.clone().symmetric_eigen();

    // sort eigenpairs ascending
    let mut order: Vec<usize> = (0..g).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let evals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let evecs: Vec<DVector<f64>> = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into_owned())
        .collect();

    // projector matrices restricted to the multiplet span
    let scale = evals.iter().fold(1.0f64, |a, &b| a.max(b.abs()));
    let projectors: Vec<DMatrix<f64>> = IRREPS
        .iter()
        .map(|&s| {
            let rat = group.projector_matrix(s, &m.members);
            DMatrix::from_fn(g, g, |i, j| rat[i][j].to_f64().unwrap())
        })
        .collect();

    let mut levels = Vec::new();
    let mut start = 0;
    while start < g {
        let mut end = start + 1;
        while end < g && (evals[end] - evals[start]).abs() <= CLUSTER_TOL * scale {
            end += 1;
        }
        let k = end - start;
        let cluster = DMatrix::from_columns(&evecs[start..end]);
        let e1 = evals[start..end].iter().sum::<f64>() / k as f64;

        let mut accounted = 0;
        for (si, p) in projectors.iter().enumerate() {
            let image = p * &cluster;
            let rank = image
                .svd(false, false)
                .singular_values
                .iter()
                .filter(|&&sv| sv > 1e-7)
                .count() as u32;
            let irrep = IRREPS[si];
            if rank > 0 {
                debug_assert_eq!(rank % irrep.dim(), 0);
                let mult = rank / irrep.dim();
                accounted += rank;
                levels.push(PtLevel {
                    shell: m.shell,
                    e0: m.e0(),
                    e1,
                    irrep,
                    multiplicity: mult,
                    sequence_index: 0,
                });
            }
        }
        if accounted as usize != k {
            return Err(PerturbError::UnlabeledRoot { e1 });
        }
        start = end;
    }
    levels.sort_by(|a, b| a.e1.total_cmp(&b.e1));
    Ok(levels)
}

/// First-order levels for every multiplet up to `shell_cutoff`, with global
/// sequence indices assigned by ascending `e0`, then ascending `e1`, per
/// irrep name (reproducing labels like 3A1g).
pub fn pt_spectrum(group: &SymmetryGroup, shell_cutoff: u32) -> Result<Vec<PtLevel>, PerturbError> {
    let mut counters: std::collections::BTreeMap<Irrep, u32> = Default::default();
    let mut out = Vec::new();
    for m in crate::boxbasis::enumerate_multiplets(shell_cutoff) {
        let mut levels = first_order(group, &m)?;
        for level in &mut levels {
            let c = counters.entry(level.irrep).or_insert(0);
            for _ in 0..level.multiplicity {
                *c += 1;
            }
            level.sequence_index = *c - level.multiplicity + 1;
        }
        out.extend(levels);
    }
    Ok(out)
}
