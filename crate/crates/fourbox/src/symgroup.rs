//! The 48-element group of signed permutation matrices `S4 (x) O(1)`,
//! its identification with the O_h character table, and projection
//! operators acting on product sine states.
//!
//! Everything here is exact: group elements are integer matrices, characters
//! are integers and projector coefficients are rationals, so projector
//! idempotency and orthogonality are checked without tolerances.

use crate::boxbasis::ProductState;
use num_rational::Rational64;
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SymError {
    #[error("class signatures admit {0} consistent character-table assignments")]
    AmbiguousClassMatch(usize),
}

/// A 4x4 signed permutation matrix with cached trace, determinant and order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub matrix: [[i32; 4]; 4],
    pub trace: i32,
    pub det: i32,
    pub order: u32,
}

impl GroupElement {
    fn from_matrix(matrix: [[i32; 4]; 4]) -> Self {
        let trace = (0..4).map(|i| matrix[i][i]).sum();
        let det = det4(&matrix);
        // order via raw matrix powers (mul would recurse back into here)
        let mut p = matrix;
        let mut order = 1;
        while p != IDENTITY {
            p = mat_mul(&p, &matrix);
            order += 1;
        }
        GroupElement {
            matrix,
            trace,
            det,
            order,
        }
    }

    pub fn identity() -> Self {
        GroupElement::from_matrix(IDENTITY)
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        GroupElement::from_matrix(mat_mul(&self.matrix, &other.matrix))
    }

    /// Inverse; equals the transpose for orthogonal integer matrices.
    pub fn inverse(&self) -> GroupElement {
        let mut m = [[0i32; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.matrix[j][i];
            }
        }
        GroupElement::from_matrix(m)
    }
}

const IDENTITY: [[i32; 4]; 4] = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];

fn mat_mul(a: &[[i32; 4]; 4], b: &[[i32; 4]; 4]) -> [[i32; 4]; 4] {
    let mut m = [[0i32; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    m
}

fn det4(m: &[[i32; 4]; 4]) -> i32 {
    // signed permutation matrices only; the determinant is the permutation
    // sign times the product of the nonzero entries
    let mut perm = [0usize; 4];
    let mut prod = 1i32;
    for (r, row) in m.iter().enumerate() {
        let (c, &v) = row.iter().enumerate().find(|(_, &v)| v != 0).unwrap();
        perm[r] = c;
        prod *= v;
    }
    let mut sign = 1i32;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if perm[i] > perm[j] {
                sign = -sign;
            }
        }
    }
    sign * prod
}

/// The 48 signed permutation matrices: the 24 row permutations of the
/// identity followed by the 24 row permutations of its negative.
pub fn build_group() -> Vec<GroupElement> {
    use itertools::Itertools;
    let mut out = Vec::with_capacity(48);
    for sign in [1i32, -1] {
        for perm in (0..4usize).permutations(4) {
            let mut m = [[0i32; 4]; 4];
            for (r, &c) in perm.iter().enumerate() {
                m[r][c] = sign;
            }
            out.push(GroupElement::from_matrix(m));
        }
    }
    out
}

/// `(trace, det, order)` triple used to match a matrix class to an O_h column.
pub fn class_signature(e: &GroupElement) -> (i32, i32, u32) {
    (e.trace, e.det, e.order)
}

/// Partition of the group into conjugacy classes (lists of element indices,
/// each sorted, ordered by first member).
pub fn conjugacy_classes(group: &[GroupElement]) -> Vec<Vec<usize>> {
    let index: HashMap<[[i32; 4]; 4], usize> = group
        .iter()
        .enumerate()
        .map(|(i, e)| (e.matrix, i))
        .collect();
    let mut seen = vec![false; group.len()];
    let mut classes = Vec::new();
    for i in 0..group.len() {
        if seen[i] {
            continue;
        }
        let mut class: Vec<usize> = group
            .iter()
            .map(|k| index[&k.mul(&group[i]).mul(&k.inverse()).matrix])
            .collect();
        class.sort_unstable();
        class.dedup();
        for &j in &class {
            seen[j] = true;
        }
        classes.push(class);
    }
    classes
}

/// The ten irreducible representations of O_h.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Irrep {
    A1g,
    A2g,
    Eg,
    T1g,
    T2g,
    A1u,
    A2u,
    Eu,
    T1u,
    T2u,
}

pub const IRREPS: [Irrep; 10] = [
    Irrep::A1g,
    Irrep::A2g,
    Irrep::Eg,
    Irrep::T1g,
    Irrep::T2g,
    Irrep::A1u,
    Irrep::A2u,
    Irrep::Eu,
    Irrep::T1u,
    Irrep::T2u,
];

impl Irrep {
    pub fn dim(&self) -> u32 {
        match self {
            Irrep::A1g | Irrep::A2g | Irrep::A1u | Irrep::A2u => 1,
            Irrep::Eg | Irrep::Eu => 2,
            _ => 3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Irrep::A1g => "A1g",
            Irrep::A2g => "A2g",
            Irrep::Eg => "Eg",
            Irrep::T1g => "T1g",
            Irrep::T2g => "T2g",
            Irrep::A1u => "A1u",
            Irrep::A2u => "A2u",
            Irrep::Eu => "Eu",
            Irrep::T1u => "T1u",
            Irrep::T2u => "T2u",
        }
    }

    pub fn parse(s: &str) -> Option<Irrep> {
        IRREPS.iter().copied().find(|r| r.name() == s)
    }

    fn row(&self) -> usize {
        IRREPS.iter().position(|r| r == self).unwrap()
    }
}

impl std::fmt::Display for Irrep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// O_h class columns: name, size, and the `(trace, det, order)` signature the
/// class carries in the 4x4 signed permutation representation.
pub struct OhClass {
    pub name: &'static str,
    pub size: usize,
    pub signature: (i32, i32, u32),
}

pub const OH_CLASSES: [OhClass; 10] = [
    OhClass {
        name: "E",
        size: 1,
        signature: (4, 1, 1),
    },
    OhClass {
        name: "8C3",
        size: 8,
        signature: (1, 1, 3),
    },
    OhClass {
        name: "6C2",
        size: 6,
        signature: (2, -1, 2),
    },
    OhClass {
        name: "6C4",
        size: 6,
        signature: (0, -1, 4),
    },
    OhClass {
        name: "3C2",
        size: 3,
        signature: (0, 1, 2),
    },
    OhClass {
        name: "i",
        size: 1,
        signature: (-4, 1, 2),
    },
    OhClass {
        name: "6S4",
        size: 6,
        signature: (0, -1, 4),
    },
    OhClass {
        name: "8S6",
        size: 8,
        signature: (-1, 1, 6),
    },
    OhClass {
        name: "3sh",
        size: 3,
        signature: (0, 1, 2),
    },
    OhClass {
        name: "6sd",
        size: 6,
        signature: (-2, -1, 2),
    },
];

/// O_h characters, rows in `IRREPS` order, columns in `OH_CLASSES` order
/// (Cotton's table).
pub const OH_CHARACTERS: [[i64; 10]; 10] = [
    [1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
    [1, 1, -1, -1, 1, 1, -1, 1, 1, -1],
    [2, -1, 0, 0, 2, 2, 0, -1, 2, 0],
    [3, 0, -1, 1, -1, 3, 1, 0, -1, -1],
    [3, 0, 1, -1, -1, 3, -1, 0, -1, 1],
    [1, 1, 1, 1, 1, -1, -1, -1, -1, -1],
    [1, 1, -1, -1, 1, -1, 1, -1, -1, 1],
    [2, -1, 0, 0, 2, -2, 0, 1, -2, 0],
    [3, 0, -1, 1, -1, -3, -1, 0, 1, 1],
    [3, 0, 1, -1, -1, -3, 1, 0, 1, -1],
];

/// The matrix classes joined to their O_h columns.
pub struct CharacterTable {
    /// per matrix class: sorted member indices
    pub classes: Vec<Vec<usize>>,
    /// per matrix class: the O_h column it was matched to
    pub columns: Vec<usize>,
    /// element index -> matrix class index
    pub class_of: Vec<usize>,
}

impl CharacterTable {
    /// Character of `irrep` on the class of element `elem_idx`.
    pub fn chi(&self, irrep: Irrep, elem_idx: usize) -> i64 {
        OH_CHARACTERS[irrep.row()][self.columns[self.class_of[elem_idx]]]
    }
}

/// Match each matrix class to an O_h column by `(trace, det, order)` and class
/// size. Two signature pairs coincide (3C2/3sh and 6C4/6S4), so every
/// signature-consistent bijection is tried and validated by exact projector
/// idempotency in the regular representation; exactly one survives.
pub fn match_to_character_table(
    group: &[GroupElement],
    classes: &[Vec<usize>],
) -> Result<CharacterTable, SymError> {
    let mut class_of = vec![0usize; group.len()];
    for (ci, class) in classes.iter().enumerate() {
        for &e in class {
            class_of[e] = ci;
        }
    }

    // candidate columns per class
    let candidates: Vec<Vec<usize>> = classes
        .iter()
        .map(|class| {
            let sig = class_signature(&group[class[0]]);
            OH_CLASSES
                .iter()
                .enumerate()
                .filter(|(_, c)| c.signature == sig && c.size == class.len())
                .map(|(i, _)| i)
                .collect()
        })
        .collect();

    let mut assignments = Vec::new();
    let mut current = vec![usize::MAX; classes.len()];
    let mut used = [false; 10];
    enumerate_assignments(&candidates, 0, &mut current, &mut used, &mut assignments);

    let index: HashMap<[[i32; 4]; 4], usize> = group
        .iter()
        .enumerate()
        .map(|(i, e)| (e.matrix, i))
        .collect();
    let inv: Vec<usize> = group.iter().map(|e| index[&e.inverse().matrix]).collect();
    let mul: Vec<Vec<usize>> = group
        .iter()
        .map(|a| group.iter().map(|b| index[&a.mul(b).matrix]).collect())
        .collect();

    let valid: Vec<Vec<usize>> = assignments
        .into_iter()
        .filter(|cols| regular_rep_idempotent(&class_of, cols, &inv, &mul))
        .collect();
    if valid.len() != 1 {
        return Err(SymError::AmbiguousClassMatch(valid.len()));
    }
    Ok(CharacterTable {
        classes: classes.to_vec(),
        columns: valid.into_iter().next().unwrap(),
        class_of,
    })
}

fn enumerate_assignments(
    candidates: &[Vec<usize>],
    i: usize,
    current: &mut Vec<usize>,
    used: &mut [bool; 10],
    out: &mut Vec<Vec<usize>>,
) {
    if i == candidates.len() {
        out.push(current.clone());
        return;
    }
    for &col in &candidates[i] {
        if !used[col] {
            used[col] = true;
            current[i] = col;
            enumerate_assignments(candidates, i + 1, current, used, out);
            used[col] = false;
        }
    }
}

/// Check `P_S * P_S = P_S` for all ten irreps as exact rational convolutions
/// over the group, given a candidate class-to-column assignment.
fn regular_rep_idempotent(
    class_of: &[usize],
    columns: &[usize],
    inv: &[usize],
    mul: &[Vec<usize>],
) -> bool {
    let h = class_of.len() as i64;
    for irrep in IRREPS {
        let coeff: Vec<Rational64> = class_of
            .iter()
            .map(|&ci| {
                Rational64::new(
                    i64::from(irrep.dim()) * OH_CHARACTERS[irrep.row()][columns[ci]],
                    h,
                )
            })
            .collect();
        for g in 0..class_of.len() {
            let mut conv = Rational64::zero();
            for hh in 0..class_of.len() {
                conv += coeff[hh] * coeff[mul[inv[hh]][g]];
            }
            if conv != coeff[g] {
                return false;
            }
        }
    }
    true
}

/// Group action on a product state: `O f(q) = f(M^-1 q)` permutes the quantum
/// numbers and flips signs by the parity rule `phi_n(-q) = (-1)^(n-1) phi_n(q)`.
pub fn act(e: &GroupElement, s: &ProductState) -> (i32, ProductState) {
    let mut n = [0u32; 4];
    let mut sign = 1i32;
    for i in 0..4 {
        // (M^-1 q)_i = M[j][i] q_j for the unique j with a nonzero entry
        let j = (0..4).find(|&j| e.matrix[j][i] != 0).unwrap();
        n[j] = s.0[i];
        if e.matrix[j][i] < 0 && s.0[i].is_multiple_of(2) {
            sign = -sign;
        }
    }
    (sign, ProductState(n))
}

/// Exact-rational linear combination of product states.
pub type RationalCombo = BTreeMap<ProductState, Rational64>;

/// Exact-rational combination carrying its irrep label.
#[derive(Debug, Clone)]
pub struct SymmetrizedVector {
    pub irrep: Irrep,
    pub terms: RationalCombo,
}

/// Projection operator `P_S = (n_S / 48) sum_j chi_j(S) O_j` with one rational
/// coefficient per group element.
#[derive(Debug, Clone)]
pub struct Projector {
    pub irrep: Irrep,
    pub coefficients: Vec<Rational64>,
}

impl Projector {
    pub fn apply(&self, group: &[GroupElement], v: &RationalCombo) -> RationalCombo {
        let mut out = RationalCombo::new();
        for (state, &amp) in v {
            if amp.is_zero() {
                continue;
            }
            for (e, &c) in group.iter().zip(&self.coefficients) {
                if c.is_zero() {
                    continue;
                }
                let (sign, s2) = act(e, state);
                let term = amp * c * Rational64::from_integer(i64::from(sign));
                let entry = out.entry(s2).or_insert_with(Rational64::zero);
                *entry += term;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

/// The constructed group, its class structure and projectors, bundled for the
/// downstream perturbation and Rayleigh-Ritz machinery.
pub struct SymmetryGroup {
    pub elements: Vec<GroupElement>,
    pub table: CharacterTable,
}

impl SymmetryGroup {
    pub fn new() -> Result<Self, SymError> {
        let elements = build_group();
        let classes = conjugacy_classes(&elements);
        let table = match_to_character_table(&elements, &classes)?;
        Ok(SymmetryGroup { elements, table })
    }

    pub fn projector(&self, irrep: Irrep) -> Projector {
        let coefficients = (0..self.elements.len())
            .map(|i| Rational64::new(i64::from(irrep.dim()) * self.table.chi(irrep, i), 48))
            .collect();
        Projector {
            irrep,
            coefficients,
        }
    }

    pub fn project(&self, irrep: Irrep, v: &RationalCombo) -> RationalCombo {
        self.projector(irrep).apply(&self.elements, v)
    }

    /// Matrix of `P_S` restricted to the span of `states` (which must be
    /// closed under the group action), exact rationals, `out[i][j]` the
    /// amplitude of `states[i]` in `P_S states[j]`.
    pub fn projector_matrix(&self, irrep: Irrep, states: &[ProductState]) -> Vec<Vec<Rational64>> {
        let index: HashMap<ProductState, usize> =
            states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let proj = self.projector(irrep);
        let n = states.len();
        let mut m = vec![vec![Rational64::zero(); n]; n];
        for (j, s) in states.iter().enumerate() {
            for (e, &c) in self.elements.iter().zip(&proj.coefficients) {
                if c.is_zero() {
                    continue;
                }
                let (sign, s2) = act(e, s);
                let i = *index
                    .get(&s2)
                    .expect("state span not closed under the group action");
                m[i][j] += c * Rational64::from_integer(i64::from(sign));
            }
        }
        m
    }

    /// Irrep multiplicities of the permutation span of a quantum-number
    /// multiset, by the character inner product.
    pub fn decompose_multiplet(&self, multiset: [u32; 4]) -> BTreeMap<Irrep, u32> {
        let states = permutation_span(multiset);
        let mut out = BTreeMap::new();
        for irrep in IRREPS {
            let mut total = 0i64;
            for (gi, e) in self.elements.iter().enumerate() {
                let chi = self.table.chi(irrep, gi);
                if chi == 0 {
                    continue;
                }
                // trace of the signed permutation action on the span
                let tr: i64 = states
                    .iter()
                    .map(|s| {
                        let (sign, s2) = act(e, s);
                        if s2 == *s {
                            i64::from(sign)
                        } else {
                            0
                        }
                    })
                    .sum();
                total += chi * tr;
            }
            debug_assert_eq!(total.rem_euclid(48), 0);
            let m = total / 48;
            if m > 0 {
                out.insert(irrep, m as u32);
            }
        }
        out
    }
}

/// All distinct permutations of a quantum-number multiset, sorted.
pub fn permutation_span(multiset: [u32; 4]) -> Vec<ProductState> {
    use itertools::Itertools;
    let mut states: Vec<ProductState> = multiset
        .iter()
        .copied()
        .permutations(4)
        .map(|p| ProductState([p[0], p[1], p[2], p[3]]))
        .collect();
    states.sort_unstable();
    states.dedup();
    states
}

/// Rank of a rational matrix by exact Gaussian elimination.
pub fn rational_rank(m: &[Vec<Rational64>]) -> usize {
    let mut a: Vec<Vec<Rational64>> = m.to_vec();
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if let Some(p) = (row..rows).find(|&r| !a[r][col].is_zero()) {
            a.swap(row, p);
            let pivot = a[row][col];
            for r in (row + 1)..rows {
                if !a[r][col].is_zero() {
                    let f = a[r][col] / pivot;
                    #[allow(clippy::needless_range_loop)] // two rows of `a` in play
                    for c in col..cols {
                        let sub = f * a[row][c];
                        a[r][c] -= sub;
                    }
                }
            }
            rank += 1;
            row += 1;
            if row == rows {
                break;
            }
        }
    }
    rank
}
