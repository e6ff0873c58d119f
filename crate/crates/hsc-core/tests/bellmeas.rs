mod common;

use common::{c, Ladder, RailSpace};
use hsc_core::bellmeas::*;
use hsc_core::codes::{hybrid_codeword, squeezed_cat_state, Parity};
use hsc_core::fock::{tensor_product, DenseState, FockVector};
use hsc_core::linalg::Matrix;
use hsc_core::C64;
use proptest::prelude::*;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

// (α, ξ, success, error) from a dense scipy reference at cutoff 34 that
// keys outcomes by (B_D letter, B_C verdict).
const HYBRID: [(f64, f64, f64, f64); 4] = [
    (1.2, 0.1, 0.954941953185349, 0.0009996617557706854),
    (1.0, 0.25, 0.8951763734271796, 0.004813219107222551),
    (0.5, 0.0, 0.6937278095001302, 0.07126847829827551),
    (1.5, 0.5, 0.8857269068241242, 0.00013937584421859804),
];

fn one(bit: u8) -> (C64, Vec<u8>) {
    (c(1.0), vec![bit])
}

#[test]
fn hybrid_success_matches_reference() {
    for (a, xi, s, e) in HYBRID {
        let r = bell_report(Encoding::Hybrid, &LogicalBasis::new(a, xi, 34).unwrap()).unwrap();
        assert!((r.success - s).abs() < 1e-9, "{a} {xi}: {}", r.success);
        assert!((r.error - e).abs() < 1e-9, "{a} {xi}: {}", r.error);
        assert!((r.success + r.error + r.failure - 1.0).abs() < 1e-8);
    }
}

#[test]
fn polarization_adds_nothing_for_lossless_codewords() {
    let b = LogicalBasis::new(1.1, 0.3, 30).unwrap();
    let h = bell_report(Encoding::Hybrid, &b).unwrap();
    let s = bell_report(Encoding::SqueezedCat, &b).unwrap();
    assert!((h.success - s.success).abs() < 1e-12);
}

#[test]
fn small_amplitude_limit_is_five_eighths() {
    let p = hybrid_bell_success(0.02, 0.0, 12).unwrap();
    assert!((p - 0.625).abs() < 1e-3, "{p}");
}

#[test]
#[ignore = "the codewords |±⟩|C±⟩ give 5/8 in this limit, see small_amplitude_limit_is_five_eighths"]
fn small_amplitude_limit_is_one_half() {
    let p = hybrid_bell_success(0.02, 0.0, 12).unwrap();
    assert!((p - 0.5).abs() < 1e-3, "{p}");
}

#[test]
fn success_grows_with_amplitude_without_squeezing() {
    let mut last = 0.0;
    for k in 0..=10 {
        let a = 0.5 + 0.2 * k as f64;
        let p = hybrid_bell_success(a, 0.0, 40).unwrap();
        assert!(p >= last - 1e-12, "{a}: {p} < {last}");
        assert!((0.5..=1.0).contains(&p));
        last = p;
    }
}

#[test]
fn uniform_bell_mixture_is_half_identified_by_polarization() {
    let mut total = 0.0;
    for b in BellState::ALL {
        let a = b.amplitudes();
        let mut m = [[c(0.0); 3]; 3];
        for (k, x) in a.iter().enumerate() {
            m[1 + k / 2][1 + k % 2] = c(*x);
        }
        total += bd_measure(&m).unwrap().identified() / 4.0;
    }
    assert!((total - 0.5).abs() < 1e-14);
}

fn product(f: &FockVector, g: &FockVector) -> DenseState {
    let a = DenseState::new(vec![f.cutoff() + 1], f.amps().to_vec()).unwrap();
    let b = DenseState::new(vec![g.cutoff() + 1], g.amps().to_vec()).unwrap();
    tensor_product(&a, &b)
}

#[test]
fn large_cat_pair_rarely_fails() {
    let cp = squeezed_cat_state(c(3.0), c(0.0), Parity::Even, 50).unwrap();
    let cm = squeezed_cat_state(c(3.0), c(0.0), Parity::Odd, 50).unwrap();
    for (f, g) in [(&cp, &cp), (&cp, &cm), (&cm, &cm)] {
        let d = bc_measure(&product(f, g)).unwrap();
        assert!(d.mass(|v| *v == Verdict::Failure) < 1e-3);
        let both: f64 = d.outcomes.iter().filter(|o| o.pattern.0 > 0 && o.pattern.1 > 0).map(|o| o.probability).sum();
        assert!(both < 1e-12);
        assert!((d.total() - 1.0).abs() < 1e-8);
    }
}

/// Half beam splitter as a dense exponential on a two-mode space large
/// enough that no photon-number block is clipped.
fn dense_half(m: usize) -> Matrix {
    let rs = RailSpace { rails: 2, m };
    let g = rs.operator(&[(c(-PI / 4.0), vec![Ladder::Up(0), Ladder::Down(1)]), (c(PI / 4.0), vec![Ladder::Down(0), Ladder::Up(1)])]);
    g.to_dense().expm()
}

#[test]
fn squeezed_vacuum_pair_matches_dense_reference() {
    let n = 12;
    let sv = squeezed_cat_state(c(0.0), c(0.15), Parity::Even, n).unwrap();
    let d = bc_measure(&product(&sv, &sv)).unwrap();
    let m = 2 * n;
    let u = dense_half(m);
    let mut v = vec![c(0.0); (m + 1) * (m + 1)];
    for i in 0..=n {
        for j in 0..=n {
            v[i * (m + 1) + j] = sv.amps()[i] * sv.amps()[j];
        }
    }
    let out = u.mul_vec(&v);
    let mut fail = 0.0;
    for (idx, a) in out.iter().enumerate() {
        let (n5, n6) = (idx / (m + 1), idx % (m + 1));
        if bc_verdict(n5, n6) == Verdict::Failure {
            fail += a.norm_sqr();
        }
    }
    assert!((d.mass(|v| *v == Verdict::Failure) - fail).abs() < 1e-10);
    assert!(fail > 0.9 && fail < 1.0, "{fail}");
}

#[test]
fn bc_classification_is_deterministic() {
    let cp = squeezed_cat_state(c(1.0), c(0.25), Parity::Even, 20).unwrap();
    let a = bc_measure(&product(&cp, &cp)).unwrap();
    let b = bc_measure(&product(&cp, &cp)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn x_gate_acts_on_polarization_as_a_swap() {
    let f = FockVector::vacuum(20);
    let plus = hsc_core::codes::HybridState::product(&hsc_core::codes::pol::plus(), &f);
    let minus = hsc_core::codes::HybridState::product(&hsc_core::codes::pol::minus(), &f);
    let x = apply_x_gate(&plus, 0.0).unwrap();
    assert!((x.inner(&minus).norm_sqr() - 1.0).abs() < 1e-14);
    let xx = apply_x_gate(&x, 0.0).unwrap();
    assert!((xx.inner(&plus).norm_sqr() - 1.0).abs() < 1e-14);
}

#[test]
fn x_gate_default_needs_squeezing() {
    assert!(default_x_magnitude(0.0).is_err());
    assert!((default_x_magnitude(0.25).unwrap() - PI).abs() < 1e-15);
}

#[test]
fn x_gate_best_magnitude_is_near_the_cat_scale() {
    let (a, xi) = (1.2, 0.25);
    let grid: Vec<f64> = (1..=60).map(|k| 0.02 * k as f64).collect();
    let (m, f, _) = x_gate_magnitude_scan(a, xi, 40, &grid).unwrap();
    assert!(f > 0.7 && f <= 1.0 + 1e-12, "{f}");
    assert!((m - PI / (4.0 * a)).abs() < 0.1, "{m}");
    let at_default = x_gate_fidelity(a, xi, 60, default_x_magnitude(xi).unwrap()).unwrap();
    assert!(at_default < f);
}

#[test]
fn z_gate_phases() {
    let (a, xi) = (c(1.0), c(0.25));
    let zero = hybrid_codeword(0, a, xi, 30).unwrap();
    let onec = hybrid_codeword(1, a, xi, 30).unwrap();
    let plus = zero.plus(&onec).scaled(c(FRAC_1_SQRT_2));
    assert_eq!(apply_z_gate(&plus, 0.0), plus);
    let back = apply_z_gate(&apply_z_gate(&plus, PI), PI);
    assert!((back.inner(&plus).norm_sqr() - 1.0).abs() < 1e-14);
    assert!(apply_z_gate(&plus, PI).inner(&plus).norm() < 1e-14);
    for theta in [0.3, 1.1, 2.5] {
        let z = apply_z_gate(&plus, theta);
        let want = (C64::new(1.0, 0.0) + C64::from_polar(1.0, theta)).norm_sqr() / 4.0;
        assert!((plus.inner(&z).norm_sqr() - want).abs() < 1e-12);
        assert!((zero.inner(&z).norm_sqr() - 0.5).abs() < 1e-12);
    }
}

#[test]
#[ignore = "|⟨0_L|Z(θ)|+_L⟩|² is 1/2 for every θ; the cosine law holds for the overlap with |+_L⟩, see z_gate_phases"]
fn z_gate_overlap_with_zero_follows_cosine_law() {
    let (a, xi) = (c(1.0), c(0.25));
    let zero = hybrid_codeword(0, a, xi, 30).unwrap();
    let plus = zero.plus(&hybrid_codeword(1, a, xi, 30).unwrap()).scaled(c(FRAC_1_SQRT_2));
    let theta = 1.1;
    let want = (C64::new(1.0, 0.0) + C64::from_polar(1.0, theta)).norm_sqr() / 4.0;
    assert!((zero.inner(&apply_z_gate(&plus, theta)).norm_sqr() - want).abs() < 1e-12);
}

#[test]
fn h_teleport_success_equals_hybrid_success() {
    for (a, xi) in [(1.0, 0.0), (1.2, 0.25)] {
        let b = LogicalBasis::new(a, xi, 34).unwrap();
        let anc = AncillaResource::new(GateKind::H, QubitKind::Hybrid, &b).unwrap();
        let r = derive_decoder(&anc, QubitKind::Hybrid, &b).unwrap();
        let p = hybrid_bell_success(a, xi, 34).unwrap();
        assert!((r.weighted_success - p).abs() < 1e-10);
    }
}

#[test]
fn h_teleport_on_zero_gives_plus() {
    for xi in [0.0, 0.25] {
        let b = LogicalBasis::new(1.0, xi, 30).unwrap();
        let anc = AncillaResource::new(GateKind::H, QubitKind::Hybrid, &b).unwrap();
        let inp = Register::logical(&[QubitKind::Hybrid], &b, &[one(0)]).unwrap();
        let r = teleport_gate(&inp, &[0], &anc, &b).unwrap();
        assert!((r.conditional_fidelity - 1.0).abs() < 1e-6, "{xi}: {}", r.conditional_fidelity);
        let plus = [c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)];
        let f = hsc_core::linalg::inner(&plus, &r.output.mul_vec(&plus)).re;
        assert!((f - 1.0).abs() < 1e-6);
    }
}

#[test]
fn identity_teleport_of_basis_states_is_exact() {
    let b = LogicalBasis::new(1.0, 0.25, 30).unwrap();
    let anc = AncillaResource::new(GateKind::Identity, QubitKind::Hybrid, &b).unwrap();
    for bit in 0..2 {
        let inp = Register::logical(&[QubitKind::Hybrid], &b, &[one(bit)]).unwrap();
        let r = teleport_gate(&inp, &[0], &anc, &b).unwrap();
        assert!((r.conditional_fidelity - 1.0).abs() < 1e-10);
    }
}

// Φ± keys are never perfectly separable, so a phase-sensitive output such
// as the Bell state below picks up the residual decoding error.
#[test]
fn cnot_teleport_on_plus_zero() {
    let b = LogicalBasis::new(0.7, 0.0, 10).unwrap();
    let anc = AncillaResource::new(GateKind::Cnot, QubitKind::Hybrid, &b).unwrap();
    let h = c(FRAC_1_SQRT_2);
    let inp = Register::logical(&[QubitKind::Hybrid; 2], &b, &[(h, vec![0, 0]), (h, vec![1, 0])]).unwrap();
    let r = teleport_gate(&inp, &[0, 1], &anc, &b).unwrap();
    assert!((r.conditional_fidelity - 0.953547931436508).abs() < 1e-9, "{}", r.conditional_fidelity);
    assert!((r.success_probability - 0.4834768932496261).abs() < 1e-9);
}

#[test]
fn cnot_truth_table_on_basis_inputs() {
    let b = LogicalBasis::new(0.7, 0.0, 10).unwrap();
    let anc = AncillaResource::new(GateKind::Cnot, QubitKind::Hybrid, &b).unwrap();
    for (x, y) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let inp = Register::logical(&[QubitKind::Hybrid; 2], &b, &[(c(1.0), vec![x, y])]).unwrap();
        let r = teleport_gate(&inp, &[0, 1], &anc, &b).unwrap();
        let want = (x << 1) | (x ^ y);
        assert!((r.output[(want as usize, want as usize)].re - 1.0).abs() < 1e-6, "{x}{y}");
    }
}

#[test]
fn optimal_squeezing_beats_no_squeezing() {
    let grid: Vec<f64> = (0..=10).map(|k| 0.02 * k as f64).collect();
    let o = optimal_squeezing(1.2, &grid, 30).unwrap();
    let p0 = bell_success_at_nbar(Encoding::Hybrid, 1.2, 0.0, 30).unwrap().0;
    assert!(o.p_star >= p0);
    assert!(o.xi_star > 0.0 && o.xi_star < 0.2, "{}", o.xi_star);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bd_distribution_sums_to_one(re in proptest::array::uniform4(-1.0f64..1.0), im in proptest::array::uniform4(-1.0f64..1.0)) {
        let mut m = [[c(0.0); 3]; 3];
        for k in 0..4 {
            m[1 + k / 2][1 + k % 2] = C64::new(re[k], im[k]);
        }
        prop_assume!(re.iter().chain(&im).map(|x| x * x).sum::<f64>() > 1e-3);
        prop_assert!((bd_measure(&m).unwrap().total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bc_distribution_sums_to_one(a in 0.0f64..2.0, b in 0.0f64..2.0, xi in 0.0f64..0.5) {
        let f = squeezed_cat_state(c(a), c(xi), Parity::Even, 30).unwrap();
        let g = squeezed_cat_state(c(b), c(xi), Parity::Even, 30).unwrap();
        prop_assert!((bc_measure(&product(&f, &g)).unwrap().total() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn argmax_is_scale_invariant(scale in 0.01f64..100.0, x0 in 0.1f64..0.9) {
        let grid: Vec<f64> = (0..=20).map(|k| 0.05 * k as f64).collect();
        let f = |x: f64| Ok((-(x - x0) * (x - x0)).exp());
        let a = hsc_core::optimize::maximize_on_grid(&grid, f).unwrap();
        let b = hsc_core::optimize::maximize_on_grid(&grid, |x| f(x).map(|v| v * scale)).unwrap();
        prop_assert!((a.x_star - b.x_star).abs() < 1e-12);
    }
}

