//! One-parameter Gaussian-envelope variational method for the lowest A1g,
//! A1u and T2u levels.
//!
//! The trial function is a symmetry prefactor (1, the center-of-mass
//! coordinate, or a relative coordinate) times the wall factor
//! `prod (q_i^2 - 1)` times `exp(-a sum q_i^2)`. Every 4D integral of the
//! Rayleigh quotient factorizes into 1D moments
//! `int q^k (q^2-1)^p exp(-2 a q^2) dq`, evaluated by adaptive quadrature.

use crate::largebox::JacobiTransform;
use crate::perturb::{pt_energy, PtLevel};
use crate::quad::{self, QuadError};
use crate::symgroup::Irrep;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VarError {
    #[error("1D moment integration failed: {0}")]
    QuadratureFailure(#[from] QuadError),
    #[error("no interior minimum in the exponent bracket up to a = {cap}")]
    BracketFailure { cap: f64 },
    #[error("crossover spec and PT level carry different irreps: {spec} vs {level}")]
    IrrepMismatch { spec: Irrep, level: Irrep },
}

/// The three variational levels treated by the one-parameter trial family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialLevel {
    A1g,
    A1u,
    /// partner index 0, 1 or 2 selects the relative coordinate used as the
    /// prefactor; the three give identical Rayleigh quotients by symmetry
    T2u(usize),
}

/// Trial-function description: the symmetry prefactor as a linear form
/// `c0 + sum c_i q_i` multiplying the wall-and-Gaussian envelope.
#[derive(Debug, Clone, Copy)]
pub struct TrialSpec {
    pub level: TrialLevel,
    c0: f64,
    c: [f64; 4],
}

impl TrialSpec {
    pub fn new(level: TrialLevel) -> Self {
        let jt = JacobiTransform::standard();
        let (c0, c) = match level {
            TrialLevel::A1g => (1.0, [0.0; 4]),
            TrialLevel::A1u => (0.0, jt.matrix[3]),
            TrialLevel::T2u(k) => {
                assert!(k < 3, "partner index must be 0, 1 or 2");
                (0.0, jt.matrix[k])
            }
        };
        TrialSpec { level, c0, c }
    }

    pub fn irrep(&self) -> Irrep {
        match self.level {
            TrialLevel::A1g => Irrep::A1g,
            TrialLevel::A1u => Irrep::A1u,
            TrialLevel::T2u(_) => Irrep::T2u,
        }
    }

    /// Pointwise value of the (unnormalized) trial function.
    pub fn value(&self, a: f64, q: [f64; 4]) -> f64 {
        let lin = self.c0 + (0..4).map(|i| self.c[i] * q[i]).sum::<f64>();
        let walls: f64 = q.iter().map(|&qi| qi * qi - 1.0).product();
        let r2: f64 = q.iter().map(|&qi| qi * qi).sum();
        lin * walls * (-a * r2).exp()
    }

    /// Gradient of the trial function, for the Dirichlet-form oracle tests.
    pub fn gradient(&self, a: f64, q: [f64; 4]) -> [f64; 4] {
        let lin = self.c0 + (0..4).map(|i| self.c[i] * q[i]).sum::<f64>();
        let r2: f64 = q.iter().map(|&qi| qi * qi).sum();
        let gauss = (-a * r2).exp();
        let walls: f64 = q.iter().map(|&qi| qi * qi - 1.0).product();
        std::array::from_fn(|i| {
            let walls_rest: f64 = q
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, &qk)| qk * qk - 1.0)
                .product();
            let d_wall = 2.0 * q[i] * walls_rest;
            (self.c[i] * walls + lin * d_wall - lin * walls * 2.0 * a * q[i]) * gauss
        })
    }
}

/// Optimized exponent and energy at one coupling.
#[derive(Debug, Clone, Copy)]
pub struct VariationalResult {
    pub irrep: Irrep,
    pub lambda: f64,
    pub a_star: f64,
    pub energy: f64,
}

/// 1D moments `m(k, p) = int_{-1}^{1} q^k (q^2 - 1)^p exp(-2 a q^2) dq`
/// for even `k <= 6`, `p <= 2`. Odd moments vanish by parity.
struct Moments {
    m: [[f64; 3]; 4],
    a: f64,
}

impl Moments {
    fn compute(a: f64) -> Result<Self, QuadError> {
        // panel [0, 1] at multiples of the Gaussian width so sharp envelopes
        // at large `a` cannot slip between the quadrature nodes
        let mut cuts = vec![0.0];
        let mut w = 1.0 / (2.0 * a).sqrt();
        while w < 0.9 {
            cuts.push(w);
            w *= 8.0;
        }
        cuts.push(1.0);

        let mut m = [[0.0; 3]; 4];
        for (ki, row) in m.iter_mut().enumerate() {
            let k = 2 * ki as i32;
            for (p, cell) in row.iter_mut().enumerate() {
                let f =
                    |q: f64| q.powi(k) * (q * q - 1.0).powi(p as i32) * (-2.0 * a * q * q).exp();
                let mut total = 0.0;
                for pair in cuts.windows(2) {
                    total += quad::integrate(f, pair[0], pair[1], 1e-13)?;
                }
                *cell = 2.0 * total; // even integrand
            }
        }
        Ok(Moments { m, a })
    }

    fn moment(&self, k: u32, p: u32) -> f64 {
        if k % 2 == 1 {
            return 0.0; // odd integrand
        }
        self.m[(k / 2) as usize][p as usize]
    }

    /// `int q^k w dq` where the weight is `u^2`, `u u'` or `u'^2` for
    /// `u = (q^2 - 1) exp(-a q^2)` and `nderiv` in {0, 1, 2}.
    fn weighted(&self, k: u32, nderiv: u32) -> f64 {
        let a = self.a;
        match nderiv {
            0 => self.moment(k, 2),
            // u u' = 2 q (q^2-1)(1 - a (q^2-1)) e^{-2 a q^2}
            1 => 2.0 * (self.moment(k + 1, 1) - a * self.moment(k + 1, 2)),
            // u'^2 = 4 q^2 (1 - a (q^2-1))^2 e^{-2 a q^2}
            2 => {
                4.0 * (self.moment(k + 2, 0) - 2.0 * a * self.moment(k + 2, 1)
                    + a * a * self.moment(k + 2, 2))
            }
            _ => unreachable!(),
        }
    }
}

/// One additive term of the trial function or its partial derivative:
/// a coefficient, per-coordinate monomial powers, and at most one coordinate
/// carrying a `u'` factor instead of `u`.
#[derive(Clone, Copy)]
struct Term {
    coeff: f64,
    pow: [u32; 4],
    deriv: Option<usize>,
}

fn pair_integral(t1: &Term, t2: &Term, extra: [u32; 4], mom: &Moments) -> f64 {
    let c = t1.coeff * t2.coeff;
    if c == 0.0 {
        return 0.0;
    }
    let mut total = c;
    for (i, &ex) in extra.iter().enumerate() {
        let k = t1.pow[i] + t2.pow[i] + ex;
        let nd = u32::from(t1.deriv == Some(i)) + u32::from(t2.deriv == Some(i));
        total *= mom.weighted(k, nd);
        if total == 0.0 {
            return 0.0;
        }
    }
    total
}

fn linear_terms(spec: &TrialSpec) -> Vec<Term> {
    let mut t = vec![Term {
        coeff: spec.c0,
        pow: [0; 4],
        deriv: None,
    }];
    for i in 0..4 {
        let mut pow = [0; 4];
        pow[i] = 1;
        t.push(Term {
            coeff: spec.c[i],
            pow,
            deriv: None,
        });
    }
    t.retain(|t| t.coeff != 0.0);
    t
}

/// Rayleigh quotient `(<grad F . grad F> + lambda <F|W|F>) / <F|F>` with the
/// pair interaction `W = sum_{i<j} (q_i - q_j)^2`.
pub fn trial_energy(spec: &TrialSpec, a: f64, lambda: f64) -> Result<f64, VarError> {
    assert!(a > 0.0, "exponent must be positive");
    assert!(lambda >= 0.0);
    let mom = Moments::compute(a)?;
    let lterms = linear_terms(spec);
    let zero = [0u32; 4];

    let mut norm = 0.0;
    for t1 in &lterms {
        for t2 in &lterms {
            norm += pair_integral(t1, t2, zero, &mom);
        }
    }

    let mut grad = 0.0;
    for i in 0..4 {
        // dF/dq_i = c_i prod u + L u'(q_i) prod_{j != i} u
        let mut dterms: Vec<Term> = Vec::with_capacity(lterms.len() + 1);
        if spec.c[i] != 0.0 {
            dterms.push(Term {
                coeff: spec.c[i],
                pow: [0; 4],
                deriv: None,
            });
        }
        for t in &lterms {
            dterms.push(Term {
                deriv: Some(i),
                ..*t
            });
        }
        for t1 in &dterms {
            for t2 in &dterms {
                grad += pair_integral(t1, t2, zero, &mom);
            }
        }
    }

    let mut pot = 0.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            let mut ei = zero;
            ei[i] = 2;
            let mut ej = zero;
            ej[j] = 2;
            let mut eij = zero;
            eij[i] = 1;
            eij[j] = 1;
            for t1 in &lterms {
                for t2 in &lterms {
                    pot += pair_integral(t1, t2, ei, &mom) + pair_integral(t1, t2, ej, &mom)
                        - 2.0 * pair_integral(t1, t2, eij, &mom);
                }
            }
        }
    }

    Ok((grad + lambda * pot) / norm)
}

const BRACKET_LO: f64 = 1e-3;
const BRACKET_HI: f64 = 64.0;
const BRACKET_CAP: f64 = 1e6;

/// Minimize the trial energy over the exponent by golden-section search,
/// growing the bracket geometrically from `[1e-3, 64]` while the minimum
/// sits on the upper edge.
pub fn minimize(spec: &TrialSpec, lambda: f64) -> Result<VariationalResult, VarError> {
    let f = |a: f64| trial_energy(spec, a, lambda);
    let mut hi = BRACKET_HI;
    loop {
        // coarse geometric scan to locate the basin
        let n = 48usize;
        let ratio = (hi / BRACKET_LO).powf(1.0 / (n - 1) as f64);
        let grid: Vec<f64> = (0..n).map(|k| BRACKET_LO * ratio.powi(k as i32)).collect();
        let mut best = 0;
        let mut best_val = f64::INFINITY;
        for (k, &a) in grid.iter().enumerate() {
            let v = f(a)?;
            if v < best_val {
                best_val = v;
                best = k;
            }
        }
        if best + 1 == n {
            if hi >= BRACKET_CAP {
                return Err(VarError::BracketFailure { cap: BRACKET_CAP });
            }
            hi = (hi * 8.0).min(BRACKET_CAP);
            continue;
        }
        let lo_edge = grid[best.saturating_sub(1)];
        let hi_edge = grid[(best + 1).min(n - 1)];
        let (a_star, energy) = golden_section(&f, lo_edge, hi_edge, 1e-8)?;
        return Ok(VariationalResult {
            irrep: spec.irrep(),
            lambda,
            a_star,
            energy,
        });
    }
}

fn golden_section<F>(f: &F, mut lo: f64, mut hi: f64, rel_tol: f64) -> Result<(f64, f64), VarError>
where
    F: Fn(f64) -> Result<f64, VarError>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > rel_tol * lo.abs().max(x1.abs()) {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 < f2 { (x1, f1) } else { (x2, f2) })
}

/// Coupling at which the variational energy drops below the first-order
/// perturbation series, located by bisection to 1e-4 in `lambda`. `None` if
/// the difference does not change sign on the scanned range.
pub fn crossover(
    spec: &TrialSpec,
    pt_level: &PtLevel,
    lambda_range: (f64, f64),
) -> Result<Option<f64>, VarError> {
    if spec.irrep() != pt_level.irrep {
        return Err(VarError::IrrepMismatch {
            spec: spec.irrep(),
            level: pt_level.irrep,
        });
    }
    let g = |lambda: f64| -> Result<f64, VarError> {
        Ok(minimize(spec, lambda)?.energy - pt_energy(pt_level, lambda))
    };
    let (lo, hi) = lambda_range;
    assert!(lo >= 0.0 && hi > lo);
    let n = 32;
    let mut prev_l = lo;
    let mut prev_g = g(lo)?;
    for k in 1..=n {
        let l = lo + (hi - lo) * k as f64 / n as f64;
        let cur = g(l)?;
        if prev_g > 0.0 && cur <= 0.0 {
            // bisect
            let (mut a, mut b) = (prev_l, l);
            let mut ga = prev_g;
            while b - a > 1e-4 {
                let mid = 0.5 * (a + b);
                let gm = g(mid)?;
                if ga > 0.0 && gm <= 0.0 {
                    b = mid;
                } else {
                    a = mid;
                    ga = gm;
                }
            }
            return Ok(Some(0.5 * (a + b)));
        }
        prev_l = l;
        prev_g = cur;
    }
    Ok(None)
}
