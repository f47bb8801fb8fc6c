//! Symmetry-adapted Rayleigh-Ritz: project product states into one irrep
//! block, orthonormalize, assemble `H(lambda) = K + lambda V` in the block
//! and diagonalize over a coupling grid.

use crate::boxbasis::{e0, pair_potential_elem, DegenerateMultiplet, ProductState};
use crate::symgroup::{Irrep, SymmetryGroup};
use nalgebra::{DMatrix, DVector};
use num_traits::ToPrimitive;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RitzError {
    #[error("irrep {0} does not occur in any of the included shells")]
    EmptyBasis(Irrep),
}

/// Orthonormal symmetry-adapted vectors spanning one irrep block.
pub struct SymmetrizedBasis {
    pub irrep: Irrep,
    pub source_shells: Vec<u32>,
    /// underlying product states (the block's ambient span)
    pub states: Vec<ProductState>,
    /// column k = coefficients of basis vector k over `states`
    pub vectors: DMatrix<f64>,
    kinetic: DMatrix<f64>,
    potential: DMatrix<f64>,
}

/// Energy samples of one tracked level over a coupling grid.
#[derive(Debug, Clone)]
pub struct EnergyCurve {
    pub irrep: Irrep,
    pub level_index: usize,
    pub samples: Vec<(f64, f64)>,
}

/// Apply the projector of `irrep` to every product state of the given shells,
/// drop null results and orthonormalize the survivors by modified
/// Gram-Schmidt. The resulting dimension is the summed multiplicity times the
/// irrep dimension over the included shells.
pub fn build_symmetrized_basis(
    group: &SymmetryGroup,
    irrep: Irrep,
    shells: &[DegenerateMultiplet],
) -> Result<SymmetrizedBasis, RitzError> {
    let states: Vec<ProductState> = shells.iter().flat_map(|m| m.members.clone()).collect();
    let index: std::collections::HashMap<ProductState, usize> =
        states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let n = states.len();

    let mut raw: Vec<DVector<f64>> = Vec::new();
    for s in &states {
        let mut combo = crate::symgroup::RationalCombo::new();
        combo.insert(*s, num_rational::Rational64::from_integer(1));
        let projected = group.project(irrep, &combo);
        let mut v = DVector::<f64>::zeros(n);
        for (state, amp) in &projected {
            v[index[state]] = amp.to_f64().unwrap();
        }
        if v.norm() >= 1e-10 {
            raw.push(v);
        }
    }

    // modified Gram-Schmidt with rank tolerance
    let mut ortho: Vec<DVector<f64>> = Vec::new();
    for mut v in raw {
        for b in &ortho {
            let c = b.dot(&v);
            v -= b * c;
        }
        let norm = v.norm();
        if norm > 1e-10 {
            ortho.push(v / norm);
        }
    }
    if ortho.is_empty() {
        return Err(RitzError::EmptyBasis(irrep));
    }
    let vectors = DMatrix::from_columns(&ortho);

    let kinetic_full = DMatrix::from_fn(n, n, |i, j| if i == j { e0(&states[i]) } else { 0.0 });
    let potential_full = DMatrix::from_fn(n, n, |i, j| pair_potential_elem(&states[i], &states[j]));
    let kinetic = vectors.transpose() * &kinetic_full * &vectors;
    let potential = vectors.transpose() * &potential_full * &vectors;

    Ok(SymmetrizedBasis {
        irrep,
        source_shells: shells.iter().map(|m| m.shell).collect(),
        states,
        vectors,
        kinetic,
        potential,
    })
}

impl SymmetrizedBasis {
    pub fn dim(&self) -> usize {
        self.vectors.ncols()
    }
}

/// The block Hamiltonian `K + lambda V` in the symmetrized basis.
pub fn assemble_hamiltonian(basis: &SymmetrizedBasis, lambda: f64) -> DMatrix<f64> {
    assert!(lambda >= 0.0);
    &basis.kinetic + lambda * &basis.potential
}

/// Sorted eigenvalues of the block at one coupling.
pub fn block_eigenvalues(basis: &SymmetrizedBasis, lambda: f64) -> Vec<f64> {
    let mut ev: Vec<f64> = assemble_hamiltonian(basis, lambda)
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Diagonalize over the grid and report one curve per level. Eigenvalues of a
/// d-dimensional irrep appear in exact d-fold clusters (the partner
/// functions), so levels are the consecutive d-chunk means of the sorted
/// spectrum.
pub fn sweep(basis: &SymmetrizedBasis, lambda_grid: &[f64]) -> Vec<EnergyCurve> {
    assert!(!lambda_grid.is_empty());
    assert!(lambda_grid.iter().all(|&l| l >= 0.0));
    assert!(lambda_grid.windows(2).all(|w| w[0] < w[1]) || lambda_grid.len() == 1);
    let d = basis.irrep.dim() as usize;
    let n_levels = basis.dim() / d;
    let mut curves: Vec<EnergyCurve> = (0..n_levels)
        .map(|level_index| EnergyCurve {
            irrep: basis.irrep,
            level_index,
            samples: Vec::with_capacity(lambda_grid.len()),
        })
        .collect();
    for &lambda in lambda_grid {
        let ev = block_eigenvalues(basis, lambda);
        for (k, curve) in curves.iter_mut().enumerate() {
            let chunk = &ev[k * d..(k + 1) * d];
            let rep = chunk.iter().sum::<f64>() / d as f64;
            curve.samples.push((lambda, rep));
        }
    }
    curves
}
