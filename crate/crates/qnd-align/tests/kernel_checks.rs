//! Kernel-layer checks: Bessel evaluations against an independent
//! reference table, the passivity identity for the collective single-pass
//! moments, closed-form transfer weights, and the finite-difference
//! oracle's regression values.

use qnd_align::kernel::{
    bessel_j, collective_output_variance, exact_double_pass_conditional_variance, j0, j1,
    j1_over_x, pde_oracle, quad, self_kernel_collapse_residual, KernelError, KernelSolution,
    PassSetup,
};

/// (x, J0(x), J1(x)) frozen from an independent reference evaluation,
/// including points at and beyond the series/recurrence switchover and the
/// first few zeros of each order.
const BESSEL_TABLE: &[(f64, f64, f64)] = &[
    (0.001, 0.9999997500000155, 0.0004999999375000026),
    (0.01, 0.9999750001562495, 0.004999937500260416),
    (0.1, 0.99750156206604, 0.049937526036242),
    (0.25, 0.9844359292958528, 0.12402597732272692),
    (0.5, 0.938469807240813, 0.24226845767487387),
    (0.7, 0.8812008886074052, 0.3289957415400589),
    (1.0, 0.7651976865579665, 0.44005058574493355),
    (1.5, 0.5118276717359181, 0.5579365079100997),
    (2.0, 0.22389077914123562, 0.5767248077568734),
    (2.404825557695773, -9.586882554916807e-17, 0.5191474972894666),
    (3.0, -0.2600519549019335, 0.33905895852593654),
    (3.8317059702075125, -0.402759395702553, -9.335846914555864e-17),
    (4.5, -0.3205425089851215, -0.2310604319233706),
    (5.0, -0.1775967713143383, -0.3275791375914653),
    (5.520078110286311, -1.6495129789841916e-17, -0.34026480655836827),
    (6.5, 0.26009460558160646, -0.15384130140997188),
    (7.0158646, 0.30011574093503685, 8.340957321306568e-05),
    (8.0, 0.1716508071375539, 0.2346363468539146),
    (8.653727912911013, -8.704431814720906e-17, 0.271452299928382),
    (9.0, -0.09033361118287592, 0.2453117865733253),
    (9.5, -0.19392874768742227, 0.1612644307575298),
    (10.0, -0.24593576445134832, 0.04347274616886141),
    (11.791534439014281, -2.6481984375475295e-16, -0.23245983136472478),
    (13.0, 0.2069261023770678, -0.07031805212177818),
    (14.930917708487787, 3.1163506548748245e-17, 0.20654643307799597),
    (16.0, -0.1748990739836291, 0.09039717566130404),
    (18.071063967910924, 2.018692387036633e-17, -0.18772880304043946),
    (20.0, 0.16702466434058322, 0.0668331241758502),
    (25.0, 0.09626678327595801, -0.1253502495802898),
    (30.0, -0.08636798358104031, -0.11875106261662305),
];

#[test]
fn bessel_values_match_the_reference_table() {
    for &(x, ref0, ref1) in BESSEL_TABLE {
        let e0 = (j0(x) - ref0).abs();
        let e1 = (j1(x) - ref1).abs();
        assert!(e0 < 1e-12, "J0({x}): error {e0:e}");
        assert!(e1 < 1e-12, "J1({x}): error {e1:e}");
        assert_eq!(bessel_j(0, x), j0(x));
        assert_eq!(bessel_j(1, x), j1(x));
    }
    // odd/even parity and the removable singularity of J1(x)/x
    assert_eq!(j1(-2.0), -j1(2.0));
    assert_eq!(j0(-2.0), j0(2.0));
    assert_eq!(j1_over_x(0.0), 0.5);
    assert!((j1_over_x(1e-8) - 0.5).abs() < 1e-15);
}

#[test]
#[should_panic]
fn bessel_j_rejects_higher_orders() {
    bessel_j(2, 1.0);
}

#[test]
fn quadrature_is_exact_on_polynomials() {
    // n points integrate degree 2n-1 exactly; x^15 over [0, 1] with n = 8
    let v = quad::integrate(8, |x| x.powi(15));
    assert!((v - 1.0 / 16.0).abs() < 1e-15, "got {v}");
    let (nodes, weights) = qnd_align::kernel::gauss_legendre(16);
    assert!((weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    assert!(nodes.windows(2).all(|w| w[0] < w[1]));
    assert!(nodes[0] > 0.0 && nodes[15] < 1.0);
}

#[test]
fn squared_kernels_match_their_closed_forms() {
    for &k in &[0.1, 0.35, 0.8, 1.5] {
        let ks = KernelSolution::new(k);
        let self2 = quad::integrate(256, |u| ks.atom_self_kernel(u).powi(2));
        let closed = j0(2.0 * k).powi(2) + j1(2.0 * k).powi(2);
        assert!((self2 - closed).abs() < 1e-10, "k = {k}: {self2} vs {closed}");
        let cross2 = quad::integrate(256, |u| ks.field_cross_kernel(u).powi(2));
        assert!((self2 + cross2 - 1.0).abs() < 1e-10, "k = {k}");
    }
}

#[test]
fn single_pass_collective_outputs_are_passive() {
    // every collective output variance is exactly vacuum and nothing is
    // correlated: a lone pass stores no conditioning information
    for &k in &[0.05, 0.35, 1.0, 2.0] {
        let m = collective_output_variance(k).unwrap();
        assert!((m.var_x - 1.0).abs() < 1e-9, "k = {k}: var_x = {}", m.var_x);
        assert!((m.var_p - 1.0).abs() < 1e-9);
        assert!((m.var_sy - 1.0).abs() < 1e-9);
        assert!(m.cov_x_sy.abs() < 1e-9, "k = {k}: cov = {:e}", m.cov_x_sy);
        assert!(m.cov_p_sx.abs() < 1e-9);
        assert!((m.pairing_x_p - 1.0).abs() < 1e-9);
    }
}

#[test]
fn transfer_weights_follow_the_bessel_forms() {
    for &k in &[0.1, 0.35, 0.9] {
        let m = collective_output_variance(k).unwrap();
        let light = (1.0 - j0(2.0 * k)) / k;
        let own = j1(2.0 * k) / k;
        assert!((m.light_weight - light).abs() < 1e-9, "k = {k}");
        assert!((m.self_weight - own).abs() < 1e-9, "k = {k}");
    }
    // the light weight falls short of the truncated map's k by k^3/4
    let d1 = collective_output_variance(0.01).unwrap().light_weight - 0.01;
    let d2 = collective_output_variance(0.02).unwrap().light_weight - 0.02;
    assert!((d1 + 0.01f64.powi(3) / 4.0).abs() < 1e-11, "d1 = {d1:e}");
    assert!((d2 / d1 - 8.0).abs() < 0.01, "cubic scaling broken: {}", d2 / d1);
}

#[test]
fn nested_self_kernel_collapses_to_j0() {
    for &k in &[0.3, 0.7, 1.2] {
        let r = self_kernel_collapse_residual(k);
        assert!(r < 1e-8, "k = {k}: residual {r:e}");
    }
}

#[test]
fn pde_oracle_reproduces_the_single_pass_quadrature() {
    let g = pde_oracle(0.35, 128, 128, PassSetup::Single).unwrap();
    assert!((g.var_x() - 1.0).abs() < 1e-3, "var_x = {}", g.var_x());
    assert!((g.var_sy() - 1.0).abs() < 1e-3);
    assert!(g.cov_x_sy().abs() < 1e-3);
    assert!((g.pairing_x_p() - 1.0).abs() < 1e-3);
}

#[test]
fn frozen_double_pass_conditional_variances() {
    // values frozen from the finite-difference oracle at 256^2
    const FROZEN: &[(f64, f64)] = &[
        (0.05, 0.99501868),
        (0.1, 0.98029586),
        (0.35, 0.79345023),
        (0.5, 0.63912899),
        (0.6, 0.53930185),
    ];
    for &(k, v) in FROZEN {
        let got = exact_double_pass_conditional_variance(k).unwrap();
        assert!((got - v).abs() < 5e-6, "k = {k}: {got} vs {v}");
    }
}

#[test]
fn double_pass_grid_refinement_is_second_order() {
    let k = 0.35;
    let v = |n: usize| {
        pde_oracle(k, n, n, PassSetup::Double)
            .unwrap()
            .conditional_variance_x_given_sy()
    };
    let (c64, c128, c256) = (v(64), v(128), v(256));
    let ratio = (c64 - c128) / (c128 - c256);
    assert!(
        (3.0..5.0).contains(&ratio),
        "refinement ratio {ratio} (steps {:e}, {:e})",
        c64 - c128,
        c128 - c256
    );
}

#[test]
fn kernel_errors_cover_the_failure_modes() {
    assert!(matches!(
        pde_oracle(0.35, 32, 32, PassSetup::Single),
        Err(KernelError::GridTooCoarse { nz: 32, nt: 32 })
    ));
    assert!(matches!(
        pde_oracle(10.0, 128, 128, PassSetup::Double),
        Err(KernelError::Unstable { .. })
    ));
    assert!(matches!(
        exact_double_pass_conditional_variance(0.7),
        Err(KernelError::KappaOutOfRange(_))
    ));
    assert!(matches!(
        collective_output_variance(f64::NAN),
        Err(KernelError::QuadratureNonConvergence { .. })
    ));
}
