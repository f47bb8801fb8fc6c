//! Acceptance suite: the nine pinned criteria, one test and one PASS line
//! each, with the tolerances stated in the criterion.

use fourbox::boxbasis::{
    e0, enumerate_multiplets, multiplet_for_shell, pair_potential_elem, x2_elem, x_elem,
    ProductState,
};
use fourbox::largebox::{
    largebox_energy, largebox_irrep, FreeFactor, JacobiTransform, LargeBoxState,
};
use fourbox::perturb::{pt_spectrum, PtLevel};
use fourbox::quad::integrate;
use fourbox::ritz::{assemble_hamiltonian, build_symmetrized_basis, sweep};
use fourbox::symgroup::{
    build_group, conjugacy_classes, permutation_span, rational_rank, Irrep, SymmetryGroup, IRREPS,
};
use fourbox::vartrial::{minimize, trial_energy, TrialLevel, TrialSpec};
use num_rational::Rational64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use std::collections::HashMap;
use std::f64::consts::PI;

fn spectrum_by_label(cutoff: u32) -> HashMap<String, PtLevel> {
    let group = SymmetryGroup::new().unwrap();
    pt_spectrum(&group, cutoff)
        .unwrap()
        .into_iter()
        .map(|l| (l.label(), l))
        .collect()
}

/// Closed-form `(label, e0, e1)` for every published first-order level.
fn closed_forms() -> Vec<(&'static str, f64, f64)> {
    let p2 = PI * PI;
    let p4 = p2 * p2;
    let s424321 = 424321f64.sqrt();
    let s53329 = 53329f64.sqrt();
    vec![
        ("1A1g", p2, 4.0 * (p2 - 6.0) / p2),
        (
            "1A1u",
            1.75 * p2,
            (216.0 * p4 - 1053.0 * p2 - 4096.0) / (54.0 * p4),
        ),
        (
            "1T2u",
            1.75 * p2,
            (648.0 * p4 - 3159.0 * p2 + 4096.0) / (162.0 * p4),
        ),
        (
            "2A1g",
            2.5 * p2,
            (324.0 * p4 - 1215.0 * p2 - 8192.0) / (81.0 * p4),
        ),
        ("1T2g", 2.5 * p2, (4.0 * p2 - 15.0) / p2),
        (
            "1Eg",
            2.5 * p2,
            (324.0 * p4 - 1215.0 * p2 + 4096.0) / (81.0 * p4),
        ),
        ("3A1g", 3.0 * p2, 4.0 * (3.0 * p2 - 14.0) / (3.0 * p2)),
        ("2T2g", 3.0 * p2, 4.0 * (3.0 * p2 - 14.0) / (3.0 * p2)),
        (
            "2A1u",
            3.25 * p2,
            (216.0 * p4 - 567.0 * p2 - 4096.0) / (54.0 * p4),
        ),
        (
            "2T2u",
            3.25 * p2,
            (648.0 * p4 - 1701.0 * p2 + 4096.0) / (162.0 * p4),
        ),
        (
            "3A1u",
            3.75 * p2,
            (405000.0 * p4 - 1434375.0 * p2 - 8105984.0) / (101250.0 * p4),
        ),
        (
            "3T2u",
            3.75 * p2,
            (405000.0 * p4 - 1434375.0 * p2 - 6144.0 * s424321 - 1280000.0) / (101250.0 * p4),
        ),
        (
            "1Eu",
            3.75 * p2,
            (405000.0 * p4 - 1434375.0 * p2 - 425984.0) / (101250.0 * p4),
        ),
        (
            "4T2u",
            3.75 * p2,
            (405000.0 * p4 - 1434375.0 * p2 + 6144.0 * s424321 - 1280000.0) / (101250.0 * p4),
        ),
        (
            "1T1u",
            3.75 * p2,
            (405000.0 * p4 - 1434375.0 * p2 + 5545984.0) / (101250.0 * p4),
        ),
        ("4A1g", 4.0 * p2, 2.0 * (2.0 * p2 - 3.0) / p2),
        (
            "5A1g",
            4.5 * p2,
            (202500.0 * p4 - 489375.0 * p2 - 5545984.0) / (50625.0 * p4),
        ),
        (
            "3T2g",
            4.5 * p2,
            (202500.0 * p4 - 489375.0 * p2 - 6144.0 * s53329 - 1386496.0) / (50625.0 * p4),
        ),
        (
            "4T2g",
            4.5 * p2,
            (202500.0 * p4 - 489375.0 * p2 + 6144.0 * s53329 - 1386496.0) / (50625.0 * p4),
        ),
        (
            "1T1g",
            4.5 * p2,
            (202500.0 * p4 - 489375.0 * p2 + 2772992.0) / (50625.0 * p4),
        ),
        (
            "2Eg",
            4.5 * p2,
            (202500.0 * p4 - 489375.0 * p2 + 2772992.0) / (50625.0 * p4),
        ),
    ]
}

#[test]
fn criterion_1_first_order_coefficients() {
    let levels = spectrum_by_label(18);
    for (label, e0_ref, e1_ref) in closed_forms() {
        let level = levels
            .get(label)
            .unwrap_or_else(|| panic!("level {label} missing from the computed spectrum"));
        assert!(
            (level.e0 - e0_ref).abs() <= 1e-9 * e0_ref,
            "{label}: e0 {} vs {}",
            level.e0,
            e0_ref
        );
        assert!(
            (level.e1 - e1_ref).abs() <= 1e-9 * e1_ref.abs(),
            "{label}: e1 {} vs closed form {}",
            level.e1,
            e1_ref
        );
    }
    println!("criterion 1: PASS");
}

#[test]
fn criterion_2_irrep_labels_and_residual_degeneracies() {
    let levels = spectrum_by_label(18);
    // every published label is attached to a computed root (existence checks
    // the label; criterion 1 checks the value)
    for (label, _, _) in closed_forms() {
        assert!(levels.contains_key(label), "missing label {label}");
    }
    // residual first-order degeneracies are exact: both members of each pair
    // come from one secular cluster and share its mean eigenvalue
    let pairs = [("3A1g", "2T2g"), ("2Eg", "1T1g")];
    for (a, b) in pairs {
        assert_eq!(
            levels[a].e1, levels[b].e1,
            "{a} and {b} must be reported first-order-degenerate"
        );
        assert_eq!(levels[a].shell, levels[b].shell);
    }
    // and a counterexample: 5A1g splits away from 3T2g in the same multiplet
    assert!(levels["5A1g"].e1 < levels["3T2g"].e1);
    println!("criterion 2: PASS");
}

#[test]
fn criterion_3_decomposition_table_with_flagged_typos() {
    // printed reference rows: multiset, printed state count, printed irreps
    #[allow(clippy::type_complexity)]
    let printed: [([u32; 4], usize, &[(Irrep, u32)]); 12] = [
        ([1, 1, 1, 1], 1, &[(Irrep::A1g, 1)]),
        ([1, 1, 1, 2], 3, &[(Irrep::A1u, 1), (Irrep::T2u, 1)]),
        (
            [1, 1, 2, 2],
            6,
            &[(Irrep::A1g, 1), (Irrep::T2g, 1), (Irrep::Eg, 1)],
        ),
        ([1, 1, 1, 3], 4, &[(Irrep::A1g, 1), (Irrep::T2g, 1)]),
        ([1, 2, 2, 2], 4, &[(Irrep::A1u, 1), (Irrep::T2u, 1)]),
        (
            [1, 1, 2, 3],
            12,
            &[
                (Irrep::A1u, 1),
                (Irrep::T2u, 2),
                (Irrep::Eu, 1),
                (Irrep::T1u, 1),
            ],
        ),
        ([2, 2, 2, 2], 1, &[(Irrep::A1g, 1)]),
        (
            [1, 2, 2, 3],
            12,
            &[
                (Irrep::A1g, 1),
                (Irrep::T2g, 2),
                (Irrep::Eg, 1),
                (Irrep::T1g, 1),
            ],
        ),
        ([1, 1, 1, 4], 4, &[(Irrep::A1u, 1), (Irrep::T2u, 1)]),
        (
            [1, 1, 3, 3],
            6,
            &[(Irrep::A1g, 1), (Irrep::Eg, 1), (Irrep::T2g, 1)],
        ),
        ([2, 2, 2, 3], 4, &[(Irrep::A1u, 1), (Irrep::T2u, 1)]),
        // the printed row duplicates "2T1g"; reading it literally gives T1g
        // twice and T2g once
        (
            [1, 1, 2, 4],
            12,
            &[
                (Irrep::A1g, 1),
                (Irrep::T1g, 2),
                (Irrep::T2g, 1),
                (Irrep::Eg, 1),
            ],
        ),
    ];
    let group = SymmetryGroup::new().unwrap();
    let mut discrepancies = Vec::new();
    for (multiset, printed_count, printed_dec) in printed {
        let computed = group.decompose_multiplet(multiset);
        let span = permutation_span(multiset);
        // per-row total dimension always equals the distinct-permutation count
        let dim: u32 = computed.iter().map(|(s, m)| s.dim() * m).sum();
        assert_eq!(dim as usize, span.len(), "{multiset:?}");

        let printed_map: std::collections::BTreeMap<Irrep, u32> =
            printed_dec.iter().copied().collect();
        let count_ok = printed_count == span.len();
        let dec_ok = printed_map == computed;
        if !count_ok || !dec_ok {
            discrepancies.push(multiset);
        } else {
            assert_eq!(printed_map, computed, "{multiset:?}");
        }
    }
    // exactly the two suspected misprints disagree, nothing else
    assert_eq!(discrepancies, vec![[1, 1, 1, 2], [1, 1, 2, 4]]);
    // and their computed truths
    let r7 = group.decompose_multiplet([1, 1, 1, 2]);
    assert_eq!(permutation_span([1, 1, 1, 2]).len(), 4); // printed: 3
    assert_eq!(r7.iter().map(|(s, m)| s.dim() * m).sum::<u32>(), 4);
    let r22 = group.decompose_multiplet([1, 1, 2, 4]);
    let want: std::collections::BTreeMap<Irrep, u32> = [
        (Irrep::A1g, 1),
        (Irrep::Eg, 1),
        (Irrep::T1g, 1),
        (Irrep::T2g, 2),
    ]
    .into_iter()
    .collect();
    assert_eq!(r22, want); // printed: duplicated 2T1g
    println!("criterion 3: PASS");
}

#[test]
fn criterion_4_group_invariants_and_exact_projector_algebra() {
    let elements = build_group();
    assert_eq!(elements.len(), 48);
    let classes = conjugacy_classes(&elements);
    assert_eq!(classes.len(), 10);
    assert_eq!(classes.iter().map(|c| c.len()).sum::<usize>(), 48);

    let group = SymmetryGroup::new().unwrap();
    for m in enumerate_multiplets(22) {
        let span = permutation_span(m.members[0].multiset());
        let n = span.len();
        let mats: Vec<Vec<Vec<Rational64>>> = IRREPS
            .iter()
            .map(|&s| group.projector_matrix(s, &span))
            .collect();
        let mul = |a: &Vec<Vec<Rational64>>, b: &Vec<Vec<Rational64>>| -> Vec<Vec<Rational64>> {
            let mut out = vec![vec![Rational64::zero(); n]; n];
            for i in 0..n {
                for j in 0..n {
                    let mut acc = Rational64::zero();
                    for k in 0..n {
                        acc += a[i][k] * b[k][j];
                    }
                    out[i][j] = acc;
                }
            }
            out
        };
        // idempotency and mutual orthogonality, exactly
        for (si, a) in mats.iter().enumerate() {
            for (sj, b) in mats.iter().enumerate() {
                let prod = mul(a, b);
                if si == sj {
                    assert_eq!(
                        &prod, a,
                        "P^2 != P for {} on {:?}",
                        IRREPS[si], m.members[0]
                    );
                } else {
                    assert!(
                        prod.iter().all(|row| row.iter().all(Rational64::is_zero)),
                        "P_{} P_{} != 0 on {:?}",
                        IRREPS[si],
                        IRREPS[sj],
                        m.members[0]
                    );
                }
            }
        }
        // completeness: the ten projectors sum to the identity on the span
        for i in 0..n {
            for j in 0..n {
                let total: Rational64 = mats.iter().map(|p| p[i][j]).sum();
                let expect = if i == j {
                    Rational64::from_integer(1)
                } else {
                    Rational64::zero()
                };
                assert_eq!(total, expect);
            }
        }
    }
    println!("criterion 4: PASS");
}

#[test]
fn criterion_5_rayleigh_ritz_splitting() {
    let group = SymmetryGroup::new().unwrap();
    let shells_a: Vec<_> = [4, 10, 12]
        .iter()
        .map(|&s| multiplet_for_shell(s))
        .collect();
    let shells_t: Vec<_> = [10, 12].iter().map(|&s| multiplet_for_shell(s)).collect();
    let a1g = build_symmetrized_basis(&group, Irrep::A1g, &shells_a).unwrap();
    let t2g = build_symmetrized_basis(&group, Irrep::T2g, &shells_t).unwrap();

    let grid: Vec<f64> = (1..=10).map(|k| k as f64 / 10.0).collect();
    let e3a1g = &sweep(&a1g, &grid)[2];
    let e2t2g = &sweep(&t2g, &grid)[1];
    let mut prev_gap = 0.0;
    for ((l, ea), (_, et)) in e3a1g.samples.iter().zip(&e2t2g.samples) {
        let gap = ea - et;
        assert!(gap > 0.0, "E_3A1g - E_2T2g must be positive at lambda={l}");
        assert!(gap >= prev_gap, "gap must grow monotonically on the grid");
        prev_gap = gap;
    }
    // both tend to 3 pi^2 as lambda -> 0
    let at0_a = sweep(&a1g, &[0.0])[2].samples[0].1;
    let at0_t = sweep(&t2g, &[0.0])[1].samples[0].1;
    assert!((at0_a - 3.0 * PI * PI).abs() < 1e-10);
    assert!((at0_t - 3.0 * PI * PI).abs() < 1e-10);

    // single-state blocks are exactly e0 + e1 lambda
    let single = build_symmetrized_basis(&group, Irrep::A1g, &[multiplet_for_shell(4)]).unwrap();
    assert_eq!(single.dim(), 1);
    let e1 = 4.0 * (PI * PI - 6.0) / (PI * PI);
    for lambda in [0.0, 0.3, 1.0] {
        let h = assemble_hamiltonian(&single, lambda);
        assert!(
            (h[(0, 0)] - (PI * PI + e1 * lambda)).abs() <= 1e-12,
            "single-state block must reproduce the first-order series"
        );
    }
    println!("criterion 5: PASS");
}

#[test]
fn criterion_6_jacobi_identity_and_orthogonality() {
    let jt = JacobiTransform::standard();
    // orthogonality to 1e-14
    for i in 0..4 {
        for j in 0..4 {
            let dot: f64 = (0..4).map(|k| jt.matrix[i][k] * jt.matrix[j][k]).sum();
            let expect = if i == j { 1.0 } else { 0.0 };
            assert!((dot - expect).abs() <= 1e-14);
        }
    }
    // interaction identity at 100 random points to 1e-12
    let mut rng = rand::rngs::StdRng::seed_from_u64(2024);
    for _ in 0..100 {
        let q: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let xi = jt.to_jacobi(q);
        let mut pair = 0.0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                pair += (q[i] - q[j]).powi(2);
            }
        }
        let rel = 4.0 * (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
        assert!((pair - rel).abs() <= 1e-12, "{pair} vs {rel}");
    }
    println!("criterion 6: PASS");
}

#[test]
fn criterion_7_largebox_ladder_and_symmetry() {
    // energy formula K^2 + 2 sqrt(lambda) (2 sum n + 3), exactly
    for (k, n, lambda) in [
        (0.0f64, [0u32, 0, 0], 1.0f64),
        (2.0, [0, 0, 0], 4.0),
        (1.0, [1, 2, 0], 9.0),
    ] {
        let s = LargeBoxState {
            k,
            n,
            cs: FreeFactor::Cosine,
        };
        let quanta: u32 = n.iter().sum();
        let expect = k * k + 2.0 * lambda.sqrt() * f64::from(2 * quanta + 3);
        assert_eq!(largebox_energy(&s, lambda), expect);
    }
    // irrep assignments of the four lowest limiting states
    let group = SymmetryGroup::new().unwrap();
    let cases = [
        (FreeFactor::Cosine, [0u32, 0, 0], Irrep::A1g),
        (FreeFactor::Sine, [0, 0, 0], Irrep::A1u),
        (FreeFactor::Cosine, [0, 0, 1], Irrep::T2u),
        (FreeFactor::Sine, [0, 0, 1], Irrep::T2g),
    ];
    for (cs, n, want) in cases {
        let dec = largebox_irrep(&group, &LargeBoxState { k: 0.0, n, cs });
        assert_eq!(dec.len(), 1, "{cs:?} {n:?} must be irrep-pure");
        assert_eq!(dec.get(&want), Some(&1), "{cs:?} {n:?} -> {want}");
    }
    println!("criterion 7: PASS");
}

#[test]
fn criterion_8_variational_behavior() {
    let levels = spectrum_by_label(7);
    let cases = [
        (TrialLevel::A1g, "1A1g"),
        (TrialLevel::A1u, "1A1u"),
        (TrialLevel::T2u(0), "1T2u"),
    ];

    // lambda = 0: the series is exact (E_PT = e0) and variational sits above
    for (level, label) in cases {
        let spec = TrialSpec::new(level);
        let pt = &levels[label];
        assert_eq!(pt.e0 + pt.e1 * 0.0, pt.e0);
        let r = minimize(&spec, 0.0).unwrap();
        assert!(
            r.energy > pt.e0,
            "{label}: variational bound above the exact e0"
        );
    }

    // one sign change of E_var - E_PT per level over (0, 10], strict level
    // ordering at every sampled positive coupling, using one shared scan
    let scan: Vec<f64> = (1..=20).map(|k| k as f64 / 2.0).collect();
    let mut energies: Vec<Vec<f64>> = Vec::new();
    for (level, label) in cases {
        let spec = TrialSpec::new(level);
        let pt = &levels[label];
        let mut signs = Vec::new();
        let mut evars = Vec::new();
        for &l in &scan {
            let r = minimize(&spec, l).unwrap();
            evars.push(r.energy);
            signs.push((r.energy - (pt.e0 + pt.e1 * l)).signum());
        }
        let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
        // g > 0 at 0+ always; count the crossing inside the scan (the A1g
        // crossover sits below the first sample, so its scan is all-negative)
        assert!(changes <= 1, "{label}: non-monotone sign pattern {signs:?}");
        if changes == 0 {
            assert!(
                signs[0] < 0.0,
                "{label}: without an interior crossing the scan must start past lambda_c"
            );
        }
        energies.push(evars);
    }
    for i in 0..scan.len() {
        assert!(
            energies[0][i] < energies[1][i] && energies[1][i] < energies[2][i],
            "ordering E(1A1g) < E(1A1u) < E(1T2u) at lambda={}",
            scan[i]
        );
    }

    // a_star strictly increasing across {0.1, 1, 10}
    let spec = TrialSpec::new(TrialLevel::A1g);
    let a1 = minimize(&spec, 0.1).unwrap().a_star;
    let a2 = minimize(&spec, 1.0).unwrap().a_star;
    let a3 = minimize(&spec, 10.0).unwrap().a_star;
    assert!(a1 < a2 && a2 < a3);

    // scaled ground energy at lambda = 1e6 within 2% of sqrt(48)
    let r = minimize(&spec, 1e6).unwrap();
    let scaled = r.energy / 1e3;
    let target = 48f64.sqrt();
    assert!(
        (scaled - target).abs() / target < 0.02,
        "{scaled} vs {target}"
    );
    println!("criterion 8: PASS");
}

#[test]
fn criterion_9_oracle_equivalences() {
    // (a) closed-form 1D matrix elements vs adaptive quadrature, <= 1e-12
    let phi = |n: u32, q: f64| (f64::from(n) * PI * (q + 1.0) / 2.0).sin();
    for m in 1..=12u32 {
        for n in 1..=12u32 {
            let x_ref = integrate(|q| phi(m, q) * q * phi(n, q), -1.0, 1.0, 1e-13).unwrap();
            assert!((x_elem(m, n) - x_ref).abs() <= 1e-12, "x({m},{n})");
            let x2_ref = integrate(|q| phi(m, q) * q * q * phi(n, q), -1.0, 1.0, 1e-13).unwrap();
            assert!((x2_elem(m, n) - x2_ref).abs() <= 1e-12, "x2({m},{n})");
        }
    }

    // (b) factorized variational integrals vs direct 4D tensor quadrature at
    // 3 spot points, <= 1e-8
    let gl = gauss_legendre(32);
    for (level, a, lambda) in [
        (TrialLevel::A1g, 0.5, 1.0),
        (TrialLevel::A1u, 1.0, 2.0),
        (TrialLevel::T2u(0), 2.0, 0.5),
    ] {
        let spec = TrialSpec::new(level);
        let (mut norm, mut grad, mut pot) = (0.0, 0.0, 0.0);
        for &(q1, w1) in &gl {
            for &(q2, w2) in &gl {
                for &(q3, w3) in &gl {
                    for &(q4, w4) in &gl {
                        let q = [q1, q2, q3, q4];
                        let w = w1 * w2 * w3 * w4;
                        let f = spec.value(a, q);
                        let df = spec.gradient(a, q);
                        let mut pair = 0.0;
                        for i in 0..4 {
                            for j in (i + 1)..4 {
                                pair += (q[i] - q[j]).powi(2);
                            }
                        }
                        norm += w * f * f;
                        grad += w * df.iter().map(|d| d * d).sum::<f64>();
                        pot += w * pair * f * f;
                    }
                }
            }
        }
        let oracle = (grad + lambda * pot) / norm;
        let fast = trial_energy(&spec, a, lambda).unwrap();
        assert!((fast - oracle).abs() <= 1e-8, "{fast} vs {oracle}");
    }

    // (c) irrep multiplicities: character formula vs exact projector rank on
    // every shell through 22
    let group = SymmetryGroup::new().unwrap();
    for m in enumerate_multiplets(22) {
        let multiset = m.members[0].multiset();
        let span = permutation_span(multiset);
        let dec = group.decompose_multiplet(multiset);
        for irrep in IRREPS {
            let rank = rational_rank(&group.projector_matrix(irrep, &span));
            let mult = dec.get(&irrep).copied().unwrap_or(0);
            assert_eq!(rank as u32, mult * irrep.dim(), "{irrep} on {multiset:?}");
        }
    }

    // bonus consistency: the secular diagonal reproduces e0-independent pair
    // matrix elements under particle relabeling
    let a = ProductState([1, 2, 2, 3]);
    let b = ProductState([2, 1, 3, 2]);
    assert!((pair_potential_elem(&a, &a) - pair_potential_elem(&b, &b)).abs() < 1e-14);
    assert!((e0(&a) - e0(&b)).abs() < 1e-14);
    println!("criterion 9: PASS");
}

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}
