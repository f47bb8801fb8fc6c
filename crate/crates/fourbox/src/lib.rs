//! Energy spectrum of four identical particles with pairwise harmonic
//! interaction confined to a one-dimensional box.
//!
//! The Hamiltonian, in dimensionless box coordinates `q_i` on `[-1, 1]`, is
//!
//! ```text
//! H = -sum_i d^2/dq_i^2 + lambda sum_{i<j} (q_i - q_j)^2
//! ```
//!
//! with hard walls at `q_i = +-1`. The crate provides:
//!
//! - [`symgroup`]: the 48-element symmetry group of signed particle
//!   permutations, its conjugacy classes, character table and exact rational
//!   projection operators;
//! - [`boxbasis`]: the sine product basis, its degenerate multiplets and
//!   closed-form matrix elements of the pair interaction;
//! - [`perturb`]: degenerate first-order perturbation theory with symmetry
//!   labels on every secular root;
//! - [`ritz`]: Rayleigh-Ritz curves in symmetry-adapted bases;
//! - [`largebox`]: the strong-coupling limit where the spectrum collapses
//!   onto a free-plus-oscillator ladder;
//! - [`vartrial`]: a one-parameter variational treatment of the three lowest
//!   levels;
//! - [`quad`], [`plot`], [`cli`]: adaptive quadrature, SVG output and the
//!   command-line front end.
//!
//! # Quick start
//!
//! ```
//! use fourbox::perturb::pt_spectrum;
//! use fourbox::symgroup::SymmetryGroup;
//!
//! let group = SymmetryGroup::new().unwrap();
//! let spectrum = pt_spectrum(&group, 7).unwrap();
//! let ground = &spectrum[0];
//! assert_eq!(ground.label(), "1A1g");
//! let pi2 = std::f64::consts::PI.powi(2);
//! assert!((ground.e0 - pi2).abs() < 1e-12);
//! assert!((ground.e1 - 4.0 * (pi2 - 6.0) / pi2).abs() < 1e-12);
//! ```

pub mod boxbasis;
pub mod cli;
pub mod largebox;
pub mod perturb;
pub mod plot;
pub mod quad;
pub mod ritz;
pub mod symgroup;
pub mod vartrial;

/// Keep the guide's code blocks compiling: every snippet in the book is run
/// as a doc-test of this hidden module.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }
    chapter!(introduction, "../../../book/src/introduction.md");
    chapter!(symmetry, "../../../book/src/symmetry.md");
    chapter!(basis_and_pt, "../../../book/src/basis-and-pt.md");
    chapter!(ritz_chapter, "../../../book/src/ritz.md");
    chapter!(large_box, "../../../book/src/large-box.md");
    chapter!(variational, "../../../book/src/variational.md");
    chapter!(cli_chapter, "../../../book/src/cli.md");
}
