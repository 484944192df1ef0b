//! Acceptance suite: the nine reproduction criteria, one test each, every
//! tolerance pinned in code. Each test prints a single PASS line (visible
//! with `cargo test --test acceptance -- --nocapture`).

use std::time::Instant;

use num_bigint::BigInt;
use rand::Rng;

use coiso_core::arith::{
    frac_dist, liouville_constant, small_divisor, AlphaArith, AlphaSpec,
};
use coiso_core::foliation::{d_f0, gauge_normalize, Connection, FoliatedForm, YAlphaFamily};
use coiso_core::fourier::{
    decay_fit, Axis, DecayVerdict, RadialGrid, CUTOFF_CENTER, CUTOFF_EPSILON,
};
use coiso_core::haefliger::{coboundary_test, regular_cover_reduce, RegularCover};
use coiso_core::linfty::{check_coherence, GradedElement};
use coiso_core::probes;
use coiso_core::solver::{
    first_obstruction, mc_continue, solve_rotation, witness_liouville, witness_rational,
    McOutcome, SolveStatus,
};

const PI: f64 = std::f64::consts::PI;
const TAU: f64 = std::f64::consts::TAU;

fn grid() -> RadialGrid {
    RadialGrid::DEFAULT
}

fn golden() -> AlphaSpec {
    AlphaSpec::quadratic(-1, 5, 2).unwrap()
}

/// Criterion 1 — rational obstructedness: α = 2/3 with the q = 3 witness
/// yields ObstructedResonance exactly at modes n = ±3, in under a second.
#[test]
fn acceptance_1_rational_obstructedness() {
    let t0 = Instant::now();
    let alpha = AlphaSpec::rational(2, 3).unwrap();
    let arith = AlphaArith::new(alpha).unwrap();
    let conn = Connection::flat(grid());
    let cover = RegularCover::three_charts();
    let w = witness_rational(2, 3, grid()).unwrap();
    let (_, _, report) = first_obstruction(&w.gamma, &arith, &conn, &cover, 1e-10).unwrap();
    let modes = match report.status {
        SolveStatus::ObstructedResonance { ref modes } => modes,
        ref other => panic!("expected ObstructedResonance, got {}", other.name()),
    };
    let mut ns: Vec<i64> = modes.iter().map(|m| i64::try_from(&m.p).unwrap()).collect();
    ns.sort();
    assert_eq!(ns, vec![-3, 3], "resonant residual exactly at n = ±3");
    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 1.0, "runtime {dt:?} ≥ 1 s");
    println!("ACCEPTANCE 1 rational-obstructedness: PASS (modes ±3, {dt:?})");
}

/// Criterion 2 — Liouville obstructedness: every divided witness mode
/// q_n ∈ {10, 100, 10^6} has |G_{q_n}| ≥ 1/(2π) − 1e-6, and the witness
/// input passes the rapid-decay smoothness check; under 10 s.
#[test]
fn acceptance_2_liouville_obstructedness() {
    let t0 = Instant::now();
    let alpha = liouville_constant(10, 3).unwrap();
    let arith = AlphaArith::new(alpha.clone()).unwrap();
    let conn = Connection::flat(grid());
    let cover = RegularCover::three_charts();
    let w = witness_liouville(&alpha, 3, grid()).unwrap();

    // the input F is smooth because α is Liouville
    let decay = decay_fit(w.f_component(), Axis::Theta1);
    assert_eq!(decay.verdict, DecayVerdict::RapidDecay, "input smoothness");

    let (_, _, report) = first_obstruction(&w.gamma, &arith, &conn, &cover, 1e-10).unwrap();
    let cert = match report.status {
        SolveStatus::DivergentSmallDivisor { ref certificate } => certificate,
        ref other => panic!("expected DivergentSmallDivisor, got {}", other.name()),
    };
    let floor = 1.0 / TAU - 1e-6;
    let expected_qs = [
        BigInt::from(10),
        BigInt::from(100),
        BigInt::from(1_000_000),
    ];
    for q in &expected_qs {
        use num_traits::Signed;
        let row = cert
            .iter()
            .find(|r| r.index.p.abs() == *q)
            .unwrap_or_else(|| panic!("mode q_n = {q} missing from certificate"));
        assert!(
            row.output_abs >= floor,
            "mode {q}: |G| = {} < 1/(2π) - 1e-6",
            row.output_abs
        );
    }
    // every divided mode in the report satisfies the bound as well
    for row in &report.rows {
        assert!(row.output_abs >= floor, "mode {}: |G| below the floor", row.index);
    }
    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 10.0, "runtime {dt:?} ≥ 10 s");
    println!(
        "ACCEPTANCE 2 liouville-obstructedness: PASS (|G| ≥ {floor:.6} at q = 10, 100, 10^6; {dt:?})"
    );
}

/// Criterion 3 — diophantine unobstructedness: 20 seeded closed Γ₁ with
/// ≤ 32 modes continue to order 4 with per-order residual ≤ 1e-8, under
/// 30 s total.
#[test]
fn acceptance_3_diophantine_unobstructedness() {
    let t0 = Instant::now();
    let arith = AlphaArith::new(golden()).unwrap();
    let conn = Connection::cutoff(grid());
    let mut worst = 0.0f64;
    for seed in 0..20u64 {
        let gamma =
            probes::random_closed_one_form(&mut probes::rng(300 + seed), &grid(), &arith, 32)
                .unwrap();
        match mc_continue(&gamma, &arith, &conn, 4, 1e-9).unwrap() {
            McOutcome::Solved { residuals, .. } => {
                for (order, r) in residuals {
                    assert!(
                        r <= 1e-8,
                        "seed {seed} order t^{order}: residual {r:.3e} > 1e-8"
                    );
                    worst = worst.max(r);
                }
            }
            McOutcome::Obstructed(f) => panic!(
                "seed {seed}: obstructed at order {} ({})",
                f.order,
                f.report.status.name()
            ),
        }
    }
    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 30.0, "runtime {dt:?} ≥ 30 s");
    println!(
        "ACCEPTANCE 3 diophantine-unobstructedness: PASS (20 seeds, K=4, worst residual {worst:.2e}, {dt:?})"
    );
}

/// Criterion 4 — chord sandwich: π·dist(nα, Z) ≤ |1 - e^{2πinα}| ≤
/// 2π·dist(nα, Z) within relative 1e-3, on 1000 random (α, n).
#[test]
fn acceptance_4_chord_sandwich() {
    let mut rng = probes::rng(4040);
    let pool: Vec<AlphaSpec> = vec![
        AlphaSpec::rational(2, 3).unwrap(),
        AlphaSpec::rational(22, 7).unwrap(),
        AlphaSpec::rational(-5, 12).unwrap(),
        golden(),
        AlphaSpec::quadratic(0, 2, 1).unwrap(),
        AlphaSpec::quadratic(1, 3, 3).unwrap(),
        liouville_constant(10, 3).unwrap(),
        liouville_constant(2, 4).unwrap(),
        AlphaSpec::decimal("0.7390851332151606416553120876738734040134").unwrap(),
    ];
    let mut checked = 0usize;
    while checked < 1000 {
        let alpha = &pool[rng.gen_range(0..pool.len())];
        let n = BigInt::from(rng.gen_range(1..=10_000i64) * if rng.gen_bool(0.5) { 1 } else { -1 });
        let v = small_divisor(alpha, &n, None).unwrap();
        let d = frac_dist(alpha, &n).unwrap().dist_f64;
        assert!(
            v <= TAU * d * (1.0 + 1e-3) + 1e-300,
            "upper chord bound at α={alpha}, n={n}: v={v}, 2πd={}",
            TAU * d
        );
        assert!(
            v >= PI * d * (1.0 - 1e-3),
            "lower chord bound at α={alpha}, n={n}: v={v}, πd={}",
            PI * d
        );
        // independent direct evaluation where f64 resolves the angle
        if d > 1e-8 {
            let direct = 2.0 * (PI * d).sin();
            assert!(
                (v - direct).abs() <= 1e-3 * direct.max(1e-12),
                "direct oracle at α={alpha}, n={n}"
            );
        }
        checked += 1;
    }
    println!("ACCEPTANCE 4 chord-sandwich: PASS (1000 pairs within relative 1e-3)");
}

/// Criterion 5 — complex identity: d_F² ≤ 1e-12 on 100 random degree-0
/// forms, and the Leibniz coherence l₁∘l₂ + l₂∘l₁ ≤ 1e-9 on 100 random
/// probes with the flat connection.
#[test]
fn acceptance_5_complex_identity() {
    let arith = AlphaArith::new(golden()).unwrap();
    let conn = Connection::flat(grid());
    let family = YAlphaFamily::new(&arith, &conn);

    let d2_probes: Vec<Vec<FoliatedForm>> = (0..100)
        .map(|s| vec![probes::random_scalar_form(&mut probes::rng(500 + s), &grid(), 12)])
        .collect();
    let d2 = check_coherence(&family, 2, &d2_probes).unwrap();
    assert!(d2 <= 1e-12, "d_F² residual {d2:.3e} > 1e-12");

    let mut leibniz_probes: Vec<Vec<FoliatedForm>> = Vec::new();
    for s in 0..100u64 {
        let mut rng = probes::rng(700 + s);
        let a = match s % 4 {
            0 | 2 => probes::random_scalar_form(&mut rng, &grid(), 8),
            1 => probes::random_one_form(&mut rng, &grid(), 8),
            _ => FoliatedForm::Two(probes::random_series(&mut rng, &grid(), 8, 3, 3, 1)),
        };
        let b = match s % 3 {
            0 => probes::random_one_form(&mut rng, &grid(), 8),
            1 => probes::random_scalar_form(&mut rng, &grid(), 8),
            _ => probes::random_one_form(&mut rng, &grid(), 8),
        };
        leibniz_probes.push(vec![a, b]);
    }
    let leib = check_coherence(&family, 3, &leibniz_probes).unwrap();
    assert!(leib <= 1e-9, "Leibniz residual {leib:.3e} > 1e-9");
    println!(
        "ACCEPTANCE 5 complex-identity: PASS (d² ≤ {d2:.1e}, Leibniz ≤ {leib:.1e})"
    );
}

/// Criterion 6 — circle-diffeomorphism cohomology at finite truncation:
/// for the golden slope, solve_rotation succeeds on 50 mean-zero inputs
/// and reports ObstructedZeroMode on all 50 mean-shifted copies.
#[test]
fn acceptance_6_circle_cohomology() {
    let alpha = golden();
    for seed in 0..50u64 {
        let f = probes::random_disk_function(&mut probes::rng(600 + seed), &grid(), 12, true);
        let solved = solve_rotation(&f, &alpha, 1e-10).unwrap();
        assert!(
            solved.is_solved(),
            "seed {seed} (mean-zero): {}",
            solved.status.name()
        );
        let shifted = f
            .add(&coiso_core::fourier::SparseFourierSeries::constant(
                grid(),
                0.25 + (seed as f64) * 0.01,
            ))
            .unwrap();
        let blocked = solve_rotation(&shifted, &alpha, 1e-10).unwrap();
        assert!(
            matches!(blocked.status, SolveStatus::ObstructedZeroMode { .. }),
            "seed {seed} (mean-shifted): {}",
            blocked.status.name()
        );
    }
    println!("ACCEPTANCE 6 circle-cohomology: PASS (50 solved, 50 zero-mode obstructed)");
}

/// Criterion 7 — higher-operator locality: l₃(Γ,Γ,Γ) with the cutoff
/// connection vanishes (≤ 1e-12) at every radial node outside the ε-band
/// and is identically zero for the flat connection; the polarized and
/// reduced formulas agree to 1e-10 on equal arguments.
#[test]
fn acceptance_7_higher_operator_locality() {
    let arith = AlphaArith::new(golden()).unwrap();
    let gamma = probes::random_one_form(&mut probes::rng(777), &grid(), 16);

    let flat = Connection::flat(grid());
    let fam_flat = YAlphaFamily::new(&arith, &flat);
    let v_flat = fam_flat.lk_reduced(&gamma, 3).unwrap();
    assert_eq!(v_flat.norm(), 0.0, "flat connection must kill l₃ exactly");

    let conn = Connection::cutoff(grid());
    let fam = YAlphaFamily::new(&arith, &conn);
    let v = fam.lk_reduced(&gamma, 3).unwrap();
    let coeff = v.as_two().unwrap();
    for (i, r) in grid().nodes().enumerate() {
        let inside = r > CUTOFF_CENTER - CUTOFF_EPSILON && r < CUTOFF_CENTER + CUTOFF_EPSILON;
        if !inside {
            let leak = coeff
                .terms()
                .map(|(_, c)| c.value_at(i).norm())
                .fold(0.0f64, f64::max);
            assert!(leak <= 1e-12, "l₃ leaks {leak:.3e} at r = {r}");
        }
    }

    let (c1, c2, c3) = (gamma.clone(), gamma.clone(), gamma.clone());
    let polarized = fam.lk_polarized(&[&c1, &c2, &c3]).unwrap();
    let reduced = fam.lk_reduced(&gamma, 3).unwrap();
    let diff = polarized.add_scaled(&reduced, -1.0).norm();
    assert!(
        diff <= 1e-10 * reduced.norm().max(1.0),
        "polarized vs reduced: {diff:.3e}"
    );
    println!("ACCEPTANCE 7 higher-operator-locality: PASS (off-band ≤ 1e-12, polarized = reduced)");
}

/// Criterion 8 — Kuranishi gauge invariance: for the golden slope,
/// reduce(l₂(Γ+d_Fh, Γ+d_Fh)) − reduce(l₂(Γ,Γ)) passes the coboundary
/// test for 20 random (Γ, h) pairs.
#[test]
fn acceptance_8_gauge_invariance() {
    let arith = AlphaArith::new(golden()).unwrap();
    let conn = Connection::cutoff(grid());
    let family = YAlphaFamily::new(&arith, &conn);
    let cover = RegularCover::three_charts();
    for seed in 0..20u64 {
        let gamma =
            probes::random_closed_one_form(&mut probes::rng(800 + seed), &grid(), &arith, 16)
                .unwrap();
        let h = probes::random_series(&mut probes::rng(900 + seed), &grid(), 10, 3, 3, 1);
        let dh = d_f0(&h, &arith).unwrap();
        let shifted = gamma.add_scaled(&dh, 1.0);
        let a = family.l2(&shifted, &shifted).unwrap();
        let b = family.l2(&gamma, &gamma).unwrap();
        let diff = a.add_scaled(&b, -1.0);
        let cls = regular_cover_reduce(&diff, &cover, arith.spec()).unwrap();
        let verdict = coboundary_test(&cls, 1e-9).unwrap();
        assert!(verdict.is_in_span(), "seed {seed}: class moved under gauge");
    }
    println!("ACCEPTANCE 8 gauge-invariance: PASS (20 pairs in span)");
}

/// Criterion 9 — zero-mode lemma: after gauge normalization the (0,0)
/// Fourier mode of l₂(Γ̃,Γ̃) vanishes at every radial node to 1e-10, for
/// the flat and the cutoff connection alike.
#[test]
fn acceptance_9_zero_mode_lemma() {
    let arith = AlphaArith::new(golden()).unwrap();
    for conn in [Connection::flat(grid()), Connection::cutoff(grid())] {
        let family = YAlphaFamily::new(&arith, &conn);
        for seed in 0..20u64 {
            let gamma = probes::random_closed_one_form(
                &mut probes::rng(950 + seed),
                &grid(),
                &arith,
                24,
            )
            .unwrap();
            let (normalized, _) = gauge_normalize(&gamma, &arith, 1e-10).unwrap();
            let sq = family.l2(&normalized, &normalized).unwrap();
            let avg = sq.as_two().unwrap().average_00();
            // check node-by-node, not just the sup over terms
            for (_, coeff) in avg.terms() {
                for i in 0..grid().len {
                    assert!(
                        coeff.value_at(i).norm() <= 1e-10,
                        "seed {seed}, node {i}, flat={}: {}",
                        conn.is_flat(),
                        coeff.value_at(i).norm()
                    );
                }
            }
        }
    }
    println!("ACCEPTANCE 9 zero-mode-lemma: PASS (flat and cutoff, 20 seeds each)");
}
