mod common;

use common::{annihilator, c};
use hsc_core::bellmeas::hybrid_bell_success;
use hsc_core::codes::{cat_state, Parity};
use hsc_core::fock::{coherent_amplitudes, DenseState, DensityMatrix, FockVector, ProductTermState};
use hsc_core::linalg::Matrix;
use hsc_core::loss::*;
use hsc_core::C64;
use proptest::prelude::*;

// (code, α, ξ, η, success) from a dense scipy reference at cutoff 30.
const COMPENSATION: [(Code, f64, f64, f64, f64); 6] = [
    (Code::Hsc, 1.0, 0.25, 0.9, 0.7564426018895161),
    (Code::Hsc, 0.8, 0.0, 0.99, 0.7935401700901779),
    (Code::Hsc, 1.3, 0.4, 0.95, 0.8334476678634621),
    (Code::Sc, 1.0, 0.25, 0.9, 0.8000433516854872),
    (Code::Sc, 0.8, 0.0, 0.99, 0.7989391125207687),
    (Code::Sc, 1.3, 0.4, 0.95, 0.8397024735946869),
];

fn pure(v: &[C64]) -> DensityMatrix {
    DensityMatrix::from_pure(&DenseState::new(vec![v.len()], v.to_vec()).unwrap())
}

fn single(eta: f64) -> LossChannelParams {
    LossChannelParams { eta, modes: vec![0] }
}

fn number_op(d: usize) -> Matrix {
    Matrix::diag(&(0..d).map(|n| c(n as f64)).collect::<Vec<_>>())
}

#[test]
fn no_loss_is_identity() {
    let k = loss_kraus(1.0, 6, 6).unwrap();
    assert_eq!(k.ops.len(), 1);
    assert_eq!(k.ops[0], Matrix::identity(7));
    let rho = pure(coherent_amplitudes(c(0.7), 12).amps());
    assert_eq!(apply_loss(&rho, &single(1.0)).unwrap(), rho);
}

#[test]
fn single_photon_loss() {
    let rho = apply_loss(&pure(FockVector::number(1, 4).amps()), &single(0.9)).unwrap();
    let m = rho.matrix();
    assert!((m[(1, 1)].re - 0.9).abs() < 1e-15);
    assert!((m[(0, 0)].re - 0.1).abs() < 1e-15);
    assert!(m.max_abs() <= 0.9 + 1e-15);
}

#[test]
fn coherent_state_stays_coherent() {
    let n = 30;
    let rho = apply_loss(&pure(coherent_amplitudes(c(1.0), n).amps()), &single(0.8)).unwrap();
    let target = DenseState::new(vec![n + 1], coherent_amplitudes(c(0.8f64.sqrt()), n).amps().to_vec()).unwrap();
    assert!((rho.overlap_pure(&target).unwrap() - 1.0).abs() < 1e-8);
}

#[test]
fn cat_coherence_decays_by_the_analytic_factor() {
    let (a, eta, n) = (1.0, 0.9, 30);
    let rho = apply_loss(&pure(cat_state(c(a), Parity::Even, n).unwrap().amps()), &single(eta)).unwrap();
    // ρ ∝ |β⟩⟨β| + |−β⟩⟨−β| + e^{−2(1−η)α²}(|β⟩⟨−β| + |−β⟩⟨β|) with β = √η α.
    let b = (eta.sqrt()) * a;
    let p = coherent_amplitudes(c(b), n);
    let m = coherent_amplitudes(c(-b), n);
    let damp = (-2.0 * (1.0 - eta) * a * a).exp();
    let proj = |x: &FockVector, y: &FockVector| {
        let d = n + 1;
        Matrix::from_fn(d, d, |r, col| x.amps()[r] * y.amps()[col].conj())
    };
    let want = proj(&p, &p).add(&proj(&m, &m)).add(&proj(&p, &m).add(&proj(&m, &p)).scale(c(damp)));
    let want = want.scale(c(1.0 / want.trace().re));
    assert!(rho.matrix().sub(&want).max_abs() < 1e-10);
}

#[test]
fn master_equation_agrees_with_kraus_map() {
    let n = 10;
    let a = annihilator(n);
    let ad = a.adjoint();
    let num = ad.matmul(&a);
    let v = cat_state(c(0.9), Parity::Odd, n + 10).unwrap().resized(n).normalized().unwrap();
    let rho0 = pure(v.amps()).matrix().clone();
    let gamma: f64 = 1.0;
    let t_end: f64 = 0.3;
    let steps = 3000;
    let h = t_end / steps as f64;
    let rhs = |r: &Matrix| {
        let jump = a.matmul(r).matmul(&ad);
        let anti = num.matmul(r).add(&r.matmul(&num)).scale(c(0.5));
        jump.sub(&anti).scale(c(gamma))
    };
    let mut r = rho0.clone();
    for _ in 0..steps {
        let k1 = rhs(&r);
        let k2 = rhs(&r.add(&k1.scale(c(h / 2.0))));
        let k3 = rhs(&r.add(&k2.scale(c(h / 2.0))));
        let k4 = rhs(&r.add(&k3.scale(c(h))));
        r = r.add(&k1.add(&k2.scale(c(2.0))).add(&k3.scale(c(2.0))).add(&k4).scale(c(h / 6.0)));
    }
    let kraus = apply_loss(&pure(v.amps()), &single((-gamma * t_end).exp())).unwrap();
    assert!(kraus.matrix().sub(&r).max_abs() < 1e-10);
}

#[test]
fn purified_loss_reproduces_the_density_matrix() {
    let n = 10;
    let f = coherent_amplitudes(c(0.5), n).into_amps();
    let g = cat_state(c(0.7), Parity::Even, n).unwrap().into_amps();
    let mut s = ProductTermState::new(vec![n + 1, n + 1], vec!["a".into(), "b".into()]).unwrap();
    s.push(c(0.6), vec![f.clone(), g.clone()]).unwrap();
    s.push(c(0.8), vec![g, f]).unwrap();
    let params = LossChannelParams { eta: 0.7, modes: vec![0, 1] };
    let branches = apply_loss_purified(&s, &params).unwrap();
    let d = (n + 1) * (n + 1);
    let mut mixed = Matrix::zeros(d, d);
    for b in &branches {
        let v = b.to_dense();
        mixed = mixed.add(&Matrix::from_fn(d, d, |r, col| v.amps()[r] * v.amps()[col].conj()));
    }
    let dense = apply_loss(&DensityMatrix::from_pure(&s.to_dense()), &params).unwrap();
    assert!(mixed.sub(dense.matrix()).max_abs() < 1e-12);
}

#[test]
fn compensation_matches_reference() {
    for (code, a, xi, eta, p) in COMPENSATION {
        let r = run_compensation(code, a, xi, eta, 30).unwrap();
        assert!((r.success_probability - p).abs() < 1e-9, "{code:?} {a} {xi} {eta}: {}", r.success_probability);
        assert!(r.identified >= r.success_probability && r.identified <= 1.0);
    }
}

#[test]
fn lossless_hsc_compensation_is_the_hybrid_bell_measurement() {
    for (a, xi) in [(1.0, 0.0), (1.2, 0.25)] {
        let r = run_compensation(Code::Hsc, a, xi, 1.0, 30).unwrap();
        assert!((r.success_probability - hybrid_bell_success(a, xi, 30).unwrap()).abs() < 1e-10);
    }
}

// Φ± keys are not perfectly separable, so the accepted outcomes carry a
// residual logical error even without loss.
#[test]
fn lossless_conditional_fidelity() {
    let r = run_compensation(Code::Hsc, 1.2, 0.1, 1.0, 30).unwrap();
    assert!((r.conditional_fidelity - 0.954941953185349 / r.identified).abs() < 1e-9);
    assert!(r.conditional_fidelity < 1.0 - 1e-4);
}

#[test]
#[ignore = "accepted Φ± outcomes keep a residual error, see lossless_conditional_fidelity"]
fn lossless_compensation_is_exact() {
    for code in [Code::Hsc, Code::Sc] {
        let r = run_compensation(code, 1.2, 0.1, 1.0, 30).unwrap();
        assert!((r.conditional_fidelity - 1.0).abs() < 1e-8);
    }
}

#[test]
fn sweep_rows_are_probabilities_and_fall_with_loss() {
    let xi: Vec<f64> = (0..=5).map(|k| 0.1 * k as f64).collect();
    let rows = compensation_sweep(&[1.0], &[0.99, 0.9], &[Code::Hsc, Code::Sc], &xi, 30);
    assert_eq!(rows.len(), 4);
    let rows: Vec<CompensationRow> = rows.into_iter().map(Result::unwrap).collect();
    for r in &rows {
        assert!((0.0..=1.0).contains(&r.p_success));
    }
    assert!(rows[0].p_success >= rows[1].p_success);
    assert!(rows[2].p_success >= rows[3].p_success);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn channel_laws(re in proptest::collection::vec(-1.0f64..1.0, 9), im in proptest::collection::vec(-1.0f64..1.0, 9),
                    e1 in 0.05f64..1.0, e2 in 0.05f64..1.0) {
        let v: Vec<C64> = re.iter().zip(&im).map(|(a, b)| C64::new(*a, *b)).collect();
        let nrm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(nrm > 1e-3);
        let v: Vec<C64> = v.iter().map(|x| x / nrm).collect();
        let rho = pure(&v);
        let out = apply_loss(&rho, &single(e1)).unwrap();
        prop_assert!((out.trace() - 1.0).abs() < 1e-8);
        prop_assert!(out.eigenvalues().iter().all(|&l| l > -1e-9));
        let n_in = rho.expectation(&number_op(9)).re;
        let n_out = out.expectation(&number_op(9)).re;
        prop_assert!((n_out - e1 * n_in).abs() < 1e-8);
        let twice = apply_loss(&out, &single(e2)).unwrap();
        let once = apply_loss(&rho, &single(e1 * e2)).unwrap();
        prop_assert!(twice.matrix().sub(once.matrix()).max_abs() < 1e-8);
        prop_assert!(loss_kraus(e1, 8, 8).unwrap().residual < 1e-8);
    }
}
