//! Large-box limit: the orthogonal coordinate change that separates the
//! center of mass, the free-plus-oscillator spectrum, scaled-limit
//! extrapolation and irrep assignment of the limiting eigenfunctions.

use crate::symgroup::{GroupElement, Irrep, SymmetryGroup, IRREPS};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LargeBoxError {
    #[error("scaled-limit extrapolation needs at least 3 tail samples, got {0}")]
    InsufficientTail(usize),
}

/// Orthogonal map from particle coordinates to relative-plus-center-of-mass
/// coordinates. Row 4 is the center of mass `(q1+q2+q3+q4)/2`.
pub struct JacobiTransform {
    pub matrix: [[f64; 4]; 4],
}

impl JacobiTransform {
    pub fn standard() -> Self {
        let s2 = 2.0f64.sqrt();
        let s3 = 3.0f64.sqrt();
        let s6 = 6.0f64.sqrt();
        JacobiTransform {
            matrix: [
                [-s2 / 2.0, s2 / 2.0, 0.0, 0.0],
                [-s6 / 6.0, -s6 / 6.0, s6 / 3.0, 0.0],
                [-s3 / 6.0, -s3 / 6.0, -s3 / 6.0, s3 / 2.0],
                [0.5, 0.5, 0.5, 0.5],
            ],
        }
    }

    pub fn to_jacobi(&self, q: [f64; 4]) -> [f64; 4] {
        let mut xi = [0.0; 4];
        for (i, row) in self.matrix.iter().enumerate() {
            xi[i] = row.iter().zip(&q).map(|(a, b)| a * b).sum();
        }
        xi
    }

    /// Inverse map (the transpose, since the matrix is orthogonal).
    pub fn from_jacobi(&self, xi: [f64; 4]) -> [f64; 4] {
        let mut q = [0.0; 4];
        for (i, qi) in q.iter_mut().enumerate() {
            *qi = (0..4).map(|j| self.matrix[j][i] * xi[j]).sum();
        }
        q
    }

    /// The action of a group element in Jacobi coordinates, `J M J^T`.
    fn conjugate(&self, e: &GroupElement) -> [[f64; 4]; 4] {
        let mut jm = [[0.0; 4]; 4];
        for (i, row) in jm.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..4)
                    .map(|k| self.matrix[i][k] * f64::from(e.matrix[k][j]))
                    .sum();
            }
        }
        let mut out = [[0.0; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..4).map(|k| jm[i][k] * self.matrix[j][k]).sum();
            }
        }
        out
    }
}

/// Symmetrized free factor of the center of mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreeFactor {
    Cosine,
    Sine,
}

/// A large-box eigenfunction: free center-of-mass factor times three
/// harmonic-oscillator factors along the relative coordinates.
#[derive(Debug, Clone, Copy)]
pub struct LargeBoxState {
    pub k: f64,
    pub n: [u32; 3],
    pub cs: FreeFactor,
}

/// `E = K^2 + 2 sqrt(lambda) (2 n1 + 2 n2 + 2 n3 + 3)`.
pub fn largebox_energy(s: &LargeBoxState, lambda: f64) -> f64 {
    assert!(lambda > 0.0);
    let quanta: u32 = s.n.iter().sum();
    s.k * s.k + 2.0 * lambda.sqrt() * f64::from(2 * quanta + 3)
}

/// Extrapolated `lim lambda^(-1/2) E(lambda)` plus a convergence indicator.
#[derive(Debug, Clone, Copy)]
pub struct ScaledLimit {
    pub value: f64,
    /// spread of the pairwise slope estimates before extrapolation
    pub convergence: f64,
}

/// Estimate `lim lambda^(-1/2) E` from the last three samples of an energy
/// curve, assuming `E ~ c sqrt(lambda) + d (+ e / sqrt(lambda))`. The two
/// pairwise slopes in `sqrt(lambda)` are Richardson-extrapolated against the
/// known decay of the correction term.
pub fn scaled_limit(samples: &[(f64, f64)]) -> Result<ScaledLimit, LargeBoxError> {
    if samples.len() < 3 {
        return Err(LargeBoxError::InsufficientTail(samples.len()));
    }
    let tail = &samples[samples.len() - 3..];
    let r: Vec<f64> = tail.iter().map(|(l, _)| l.sqrt()).collect();
    let e: Vec<f64> = tail.iter().map(|(_, en)| *en).collect();
    let c01 = (e[1] - e[0]) / (r[1] - r[0]);
    let c12 = (e[2] - e[1]) / (r[2] - r[1]);
    // slope error of the pair (j,k) decays like 1/(r_j r_k)
    let rho = (r[0] * r[1]) / (r[1] * r[2]);
    let value = if (1.0 - rho).abs() > 1e-12 {
        (c12 - rho * c01) / (1.0 - rho)
    } else {
        c12
    };
    Ok(ScaledLimit {
        value,
        convergence: (c12 - c01).abs(),
    })
}

/// Irrep content of a large-box eigenfunction. The free factor contributes
/// the A1g (cosine) or A1u (sine) character; the oscillator triple
/// contributes the trace of the group action on the span of Hermite products
/// with the given occupation multiset.
pub fn largebox_irrep(group: &SymmetryGroup, s: &LargeBoxState) -> BTreeMap<Irrep, u32> {
    let jt = JacobiTransform::standard();
    let assignments = occupation_assignments(s.n);
    let dim = assignments.len() as f64;

    let mut char_total = vec![0.0f64; group.elements.len()];
    for (gi, e) in group.elements.iter().enumerate() {
        let m4 = jt.conjugate(e);
        // center of mass picks up the overall sign of the element
        let eps4 = m4[3][3];
        let free_char = match s.cs {
            FreeFactor::Cosine => 1.0,
            FreeFactor::Sine => eps4,
        };
        let mut m3 = [[0.0; 3]; 3];
        for (i, row) in m3.iter_mut().enumerate() {
            row.copy_from_slice(&m4[i][..3]);
        }
        char_total[gi] = free_char * oscillator_trace(&m3, &assignments);
    }

    let mut out = BTreeMap::new();
    for irrep in IRREPS {
        let mut acc = 0.0;
        for (gi, &c) in char_total.iter().enumerate() {
            acc += f64::from(group.table.chi(irrep, gi) as i32) * c;
        }
        let m = acc / 48.0;
        let rounded = m.round();
        debug_assert!(
            (m - rounded).abs() < 1e-8,
            "non-integer multiplicity {m} for {irrep}"
        );
        if rounded > 0.5 {
            out.insert(irrep, rounded as u32);
        }
    }
    let total: u32 = out.iter().map(|(s, m)| s.dim() * m).sum();
    debug_assert_eq!(f64::from(total), dim);
    out
}

/// Distinct assignments of an occupation multiset to the three coordinates.
fn occupation_assignments(n: [u32; 3]) -> Vec<[u32; 3]> {
    use itertools::Itertools;
    let mut v: Vec<[u32; 3]> = n
        .iter()
        .copied()
        .permutations(3)
        .map(|p| [p[0], p[1], p[2]])
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

// --- Hermite-product polynomial algebra -----------------------------------
//
// The oscillator factors are chi_n(xi) = H_n(xi) exp(-xi^2/2) up to
// normalization; the Gaussian is rotation invariant, so the action of an
// orthogonal matrix on a product state is carried entirely by the Hermite
// polynomials. The trace over a multiset span is read off by substituting
// the rotated coordinates and converting back to the Hermite-product basis.

type Poly3 = std::collections::HashMap<[u32; 3], f64>;

fn poly_add(p: &mut Poly3, mono: [u32; 3], c: f64) {
    *p.entry(mono).or_insert(0.0) += c;
}

fn poly_mul(a: &Poly3, b: &Poly3) -> Poly3 {
    let mut out = Poly3::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m = [ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]];
            poly_add(&mut out, m, ca * cb);
        }
    }
    out
}

/// Coefficients of the physicists' Hermite polynomial `H_n`.
fn hermite_coeffs(n: u32) -> Vec<f64> {
    let mut h0 = vec![1.0];
    if n == 0 {
        return h0;
    }
    let mut h1 = vec![0.0, 2.0];
    for k in 1..n {
        // H_{k+1} = 2x H_k - 2k H_{k-1}
        let mut next = vec![0.0; k as usize + 2];
        for (i, &c) in h1.iter().enumerate() {
            next[i + 1] += 2.0 * c;
        }
        for (i, &c) in h0.iter().enumerate() {
            next[i] -= 2.0 * f64::from(k) * c;
        }
        h0 = std::mem::replace(&mut h1, next);
    }
    h1
}

/// Expansion of the monomial `x^k` over `H_0 .. H_k`, via
/// `x H_m = H_{m+1}/2 + m H_{m-1}`.
fn monomial_in_hermite(kmax: u32) -> Vec<Vec<f64>> {
    let n = kmax as usize + 1;
    let mut table = vec![vec![0.0; n]; n];
    table[0][0] = 1.0;
    for k in 1..n {
        let prev = table[k - 1].clone();
        for (m, &c) in prev.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            table[k][m + 1] += 0.5 * c;
            if m > 0 {
                table[k][m - 1] += m as f64 * c;
            }
        }
    }
    table
}

/// Polynomial `H_a(l . xi)` for a linear form `l`.
fn hermite_of_linear_form(a: u32, l: [f64; 3]) -> Poly3 {
    // powers of the linear form
    let mut lin = Poly3::new();
    poly_add(&mut lin, [1, 0, 0], l[0]);
    poly_add(&mut lin, [0, 1, 0], l[1]);
    poly_add(&mut lin, [0, 0, 1], l[2]);
    let mut powers: Vec<Poly3> = vec![Poly3::from([([0, 0, 0], 1.0)])];
    for k in 1..=a {
        powers.push(poly_mul(&powers[k as usize - 1], &lin));
    }
    let mut out = Poly3::new();
    for (deg, &c) in hermite_coeffs(a).iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        for (m, pc) in &powers[deg] {
            poly_add(&mut out, *m, c * pc);
        }
    }
    out
}

/// Trace of the rotation `m3` on the span of Hermite products with the given
/// occupation assignments.
fn oscillator_trace(m3: &[[f64; 3]; 3], assignments: &[[u32; 3]]) -> f64 {
    let kmax = assignments
        .iter()
        .flat_map(|a| a.iter())
        .copied()
        .max()
        .unwrap_or(0)
        .max(1);
    let degree: u32 = assignments[0].iter().sum();
    let mono2herm = monomial_in_hermite(degree.max(kmax));
    let mut trace = 0.0;
    for alpha in assignments {
        // O_g H_alpha(xi) = prod_i H_{alpha_i}((M^T xi)_i)
        let mut poly = Poly3::from([([0, 0, 0], 1.0)]);
        for (i, &ai) in alpha.iter().enumerate() {
            let row = [m3[0][i], m3[1][i], m3[2][i]];
            poly = poly_mul(&poly, &hermite_of_linear_form(ai, row));
        }
        // diagonal coefficient: weight of H_alpha in the transformed product
        let mut diag = 0.0;
        for (mono, &c) in &poly {
            let w: f64 = (0..3)
                .map(|i| {
                    let k = mono[i] as usize;
                    let m = alpha[i] as usize;
                    if m < mono2herm[k].len() {
                        mono2herm[k][m]
                    } else {
                        0.0
                    }
                })
                .product();
            diag += c * w;
        }
        trace += diag;
    }
    trace
}
