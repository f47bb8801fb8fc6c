//! One-dimensional particle-in-a-box sine basis on `[-1, 1]` and the
//! bookkeeping of four-particle product states.
//!
//! The single-particle functions are `phi_n(q) = sin(n pi (q + 1) / 2)` with
//! `n >= 1`; they are orthonormal on `[-1, 1]` and satisfy
//! `phi_n(-q) = (-1)^(n-1) phi_n(q)`.

use std::f64::consts::PI;
use std::fmt;

/// Product of four box eigenfunctions, named by its quantum numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductState(pub [u32; 4]);

impl ProductState {
    pub fn new(n: [u32; 4]) -> Self {
        assert!(n.iter().all(|&ni| ni >= 1), "quantum numbers must be >= 1");
        ProductState(n)
    }

    /// The integer `n1^2 + n2^2 + n3^2 + n4^2` that fixes the unperturbed energy.
    pub fn shell(&self) -> u32 {
        self.0.iter().map(|&n| n * n).sum()
    }

    /// Sorted copy of the quantum numbers.
    pub fn multiset(&self) -> [u32; 4] {
        let mut m = self.0;
        m.sort_unstable();
        m
    }
}

impl fmt::Display for ProductState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a},{b},{c},{d})")
    }
}

/// Unperturbed energy `(pi^2 / 4) (n1^2 + n2^2 + n3^2 + n4^2)`.
pub fn e0(s: &ProductState) -> f64 {
    PI * PI / 4.0 * f64::from(s.shell())
}

/// `<phi_m | q | phi_n>` on `[-1, 1]`. Vanishes identically when `m + n` is even.
pub fn x_elem(m: u32, n: u32) -> f64 {
    assert!(m >= 1 && n >= 1);
    if (m + n).is_multiple_of(2) {
        return 0.0;
    }
    let (mf, nf) = (f64::from(m), f64::from(n));
    let d = mf * mf - nf * nf;
    -16.0 * mf * nf / (PI * PI * d * d)
}

/// `<phi_m | q^2 | phi_n>` on `[-1, 1]`. Vanishes identically when `m + n` is odd.
pub fn x2_elem(m: u32, n: u32) -> f64 {
    assert!(m >= 1 && n >= 1);
    if m == n {
        let mf = f64::from(m);
        return 1.0 / 3.0 - 2.0 / (mf * mf * PI * PI);
    }
    if (m + n) % 2 == 1 {
        return 0.0;
    }
    let (mf, nf) = (f64::from(m), f64::from(n));
    let d = mf * mf - nf * nf;
    32.0 * mf * nf / (PI * PI * d * d)
}

/// `<Phi_a | sum_{i<j} (q_i - q_j)^2 | Phi_b>` assembled from the 1D elements
/// and orthonormality of the factors.
pub fn pair_potential_elem(a: &ProductState, b: &ProductState) -> f64 {
    let mut total = 0.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            // the two coordinates not touched by this pair must match
            let rest_match = (0..4)
                .filter(|&k| k != i && k != j)
                .all(|k| a.0[k] == b.0[k]);
            if !rest_match {
                continue;
            }
            let di = a.0[i] == b.0[i];
            let dj = a.0[j] == b.0[j];
            if dj {
                total += x2_elem(a.0[i], b.0[i]);
            }
            if di {
                total += x2_elem(a.0[j], b.0[j]);
            }
            total -= 2.0 * x_elem(a.0[i], b.0[i]) * x_elem(a.0[j], b.0[j]);
        }
    }
    total
}

/// A degenerate level: every product state sharing one shell integer.
/// Pythagorean coincidences are merged by construction since grouping is on
/// the exact integer.
#[derive(Debug, Clone)]
pub struct DegenerateMultiplet {
    pub shell: u32,
    pub members: Vec<ProductState>,
}

impl DegenerateMultiplet {
    pub fn degeneracy(&self) -> usize {
        self.members.len()
    }

    pub fn e0(&self) -> f64 {
        PI * PI / 4.0 * f64::from(self.shell)
    }

    /// Distinct quantum-number multisets contained in this multiplet.
    pub fn multisets(&self) -> Vec<[u32; 4]> {
        let mut ms: Vec<[u32; 4]> = self.members.iter().map(|s| s.multiset()).collect();
        ms.sort_unstable();
        ms.dedup();
        ms
    }
}

/// All multiplets with shell integer `<= shell_cutoff`, sorted by shell.
pub fn enumerate_multiplets(shell_cutoff: u32) -> Vec<DegenerateMultiplet> {
    assert!(shell_cutoff >= 4, "cutoff must be >= 4");
    let nmax = (shell_cutoff as f64).sqrt() as u32 + 1;
    let mut by_shell: std::collections::BTreeMap<u32, Vec<ProductState>> =
        std::collections::BTreeMap::new();
    for n1 in 1..=nmax {
        for n2 in 1..=nmax {
            for n3 in 1..=nmax {
                for n4 in 1..=nmax {
                    let s = ProductState([n1, n2, n3, n4]);
                    if s.shell() <= shell_cutoff {
                        by_shell.entry(s.shell()).or_default().push(s);
                    }
                }
            }
        }
    }
    by_shell
        .into_iter()
        .map(|(shell, mut members)| {
            members.sort_unstable();
            DegenerateMultiplet { shell, members }
        })
        .collect()
}

/// The multiplet for a single shell integer (all 4-tuples with that exact sum
/// of squares). Empty members if the shell is not a sum of four positive squares.
pub fn multiplet_for_shell(shell: u32) -> DegenerateMultiplet {
    let nmax = (shell as f64).sqrt() as u32 + 1;
    let mut members = Vec::new();
    for n1 in 1..=nmax {
        for n2 in 1..=nmax {
            for n3 in 1..=nmax {
                for n4 in 1..=nmax {
                    let s = ProductState([n1, n2, n3, n4]);
                    if s.shell() == shell {
                        members.push(s);
                    }
                }
            }
        }
    }
    members.sort_unstable();
    DegenerateMultiplet { shell, members }
}
