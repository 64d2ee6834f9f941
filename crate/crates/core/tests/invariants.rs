use std::f64::consts::PI;

use mvbv_core::diagnostics::{
    best_approx_proxy, co_trend_sign, convergence_trace, lemma2_check, necessity_check,
    TraceVerdict,
};
use mvbv_core::kernels::{kernel_l1, kernel_quad_spec, KernelKind};
use mvbv_core::mvbv::{condition_two_sum, mvbv_scan, Verdict};
use mvbv_core::quadrature::uniform_nodes;
use mvbv_core::sequences::{make_family, CoefficientSequence, FamilyDescriptor};
use mvbv_core::synthesis::{partial_sum, sample_partial_sum, PlanPolicy};
use proptest::prelude::*;

fn family(id: &str) -> CoefficientSequence {
    make_family(&FamilyDescriptor::new(id)).unwrap()
}

fn dyadic(lo: u32, hi: u32) -> Vec<u64> {
    (lo..=hi).map(|j| 1u64 << j).collect()
}

#[test]
fn error_and_coefficient_term_trend_together() {
    let policy = PlanPolicy::default();
    let grid = dyadic(4, 9);
    for id in ["inv_n", "inv_log", "inv_log_sq", "inv_pow"] {
        let seq = family(id);
        let t = convergence_trace(&seq, &grid, &policy).unwrap();
        assert!(
            matches!(
                t.verdict,
                TraceVerdict::BothVanish | TraceVerdict::BothPersist
            ),
            "{id}: {:?} err {:?} coeff_log {:?}",
            t.verdict,
            t.err,
            t.coeff_log
        );
        assert!(t.cond2.iter().all(|&v| v == 0.0), "{id}");
    }
}

#[test]
fn mvbv_families_scan_bounded() {
    let grid = dyadic(1, 12);
    for id in ["inv_n", "inv_log", "inv_log_sq", "inv_pow"] {
        let r = mvbv_scan(&family(id), &grid, 2.0).unwrap();
        assert_eq!(
            r.verdict,
            Verdict::BoundedEvidence,
            "{id} slope {}",
            r.trend_slope
        );
    }
}

#[test]
fn coefficient_bound_holds_on_nonnegative_families() {
    let policy = PlanPolicy::default();
    for id in [
        "inv_n",
        "inv_log",
        "inv_log_sq",
        "inv_pow",
        "lacunary_spike",
    ] {
        for n in [8u64, 32, 128] {
            let r = lemma2_check(&family(id), n, &policy).unwrap();
            assert!(r.pass, "{id}@{n}: lhs {} rhs {}", r.lhs, r.rhs);
        }
    }
}

#[test]
fn finite_family_is_exact_past_its_degree() {
    let seq = make_family(&FamilyDescriptor::new("finite").with_coeffs(&[1.0, -0.5, 0.25, 0.125]))
        .unwrap();
    let policy = PlanPolicy::default();
    let t = convergence_trace(&seq, &[4, 8, 16], &policy).unwrap();
    assert!(t.err.iter().all(|&e| e < 1e-12), "{:?}", t.err);
    assert!(best_approx_proxy(&seq, 4, 1.5, &policy).unwrap() < 1e-12);
}

#[test]
fn proxy_decreases_for_inv_pow() {
    let seq = make_family(&FamilyDescriptor::new("inv_pow").with_param("alpha", 2.0)).unwrap();
    let policy = PlanPolicy::default();
    let p: Vec<f64> = dyadic(3, 8)
        .iter()
        .map(|&n| best_approx_proxy(&seq, n, 1.5, &policy).unwrap())
        .collect();
    assert!(p.windows(2).all(|w| w[1] < w[0]), "{p:?}");
}

#[test]
fn necessity_constant_stays_bounded_for_inv_n() {
    let r = necessity_check(&family("inv_n"), &dyadic(6, 14), 2.0).unwrap();
    assert!(r.bounded, "spread {}", r.spread);
}

#[test]
fn refining_quadrature_leaves_norms_stable() {
    for k in [16u64, 128, 1024] {
        for kind in [KernelKind::D, KernelKind::E] {
            let coarse = kernel_l1(kind, k, k, &kernel_quad_spec(kind, k, k, 16).unwrap()).unwrap();
            let fine = kernel_l1(kind, k, k, &kernel_quad_spec(kind, k, k, 64).unwrap()).unwrap();
            assert!(
                (coarse - fine).abs() <= 1e-8 * fine,
                "{kind:?} k={k}: {coarse} vs {fine}"
            );
        }
    }
}

#[test]
fn kernel_norms_grow_like_log() {
    for k in dyadic(2, 12) {
        let d = kernel_l1(
            KernelKind::D,
            k,
            k,
            &kernel_quad_spec(KernelKind::D, k, k, 32).unwrap(),
        )
        .unwrap();
        assert!(d >= (k as f64).ln() / PI, "k={k}: {d}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sampled_partial_sums_match_direct(
        coeffs in prop::collection::vec(-2.0f64..2.0, 1..12),
        n in 0u64..16,
        m_pow in 6u32..9,
        odd in any::<bool>(),
    ) {
        let seq = make_family(&FamilyDescriptor::new("finite").with_coeffs(&coeffs)).unwrap();
        let m = (1usize << m_pow) + if odd { 6 } else { 0 };
        let s = sample_partial_sum(&seq, n, m).unwrap();
        for (x, v) in uniform_nodes(m).zip(&s).step_by(7) {
            let d = partial_sum(&seq, n, x).unwrap();
            prop_assert!((d - v).norm() < 1e-11, "x={x}: {d} vs {v}");
        }
    }

    #[test]
    fn real_even_sequences_have_zero_condition_two(
        alpha in 0.2f64..3.0,
        n in 1u64..2000,
        mu in 1.01f64..2.0,
    ) {
        let seq = make_family(&FamilyDescriptor::new("inv_pow").with_param("alpha", alpha)).unwrap();
        prop_assert_eq!(condition_two_sum(&seq, n, mu).unwrap(), 0.0);
    }

    #[test]
    fn co_trend_sign_is_antisymmetric(a in 1e-6f64..1e6, b in 1e-6f64..1e6) {
        prop_assume!((b / a).ln().abs() > 0.11);
        let s = co_trend_sign(a, b).unwrap();
        prop_assert_eq!(co_trend_sign(b, a).unwrap(), -s);
    }
}
