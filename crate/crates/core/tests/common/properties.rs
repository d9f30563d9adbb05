//! Seeded property suites shared by `tests/properties.rs` and the acceptance runner.
//!
//! Each suite returns `Err(message)` with the shrunk counterexample on failure.

use std::f64::consts::TAU;

use dyngal::diagnostics::{error_functional, loglog_slope, relative_l2_error};
use dyngal::equations::{burgers_rhs, euler2d_rhs, sine_initial, BurgersParams};
use dyngal::grid::{Axis, Dim, Grid};
use dyngal::oracle::{analytic_energy, entropy_eval, entropy_sample, shock_time};
use dyngal::projectors::{CvsParams, DissipationLedger, DynamicalProjector, LedgerTag, ProjectorRule};
use dyngal::spectral::{dealiased_product, PhysicalField, SpectralField};
use dyngal::timestepping::{advance, Scheme, StepperConfig};
use dyngal::wavelets::{
    band_power, hard_threshold, level_len, safety_zone, CoeffMask, WaveletCoeffs, WaveletFamily, WaveletTransform,
};
use num_complex::Complex;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Suite = (&'static str, fn() -> Result<(), String>);

pub const ALL: &[Suite] = &[
    ("spectral_round_trip", spectral_round_trip),
    ("spectral_parseval", spectral_parseval),
    ("dealiased_product_is_truncated_convolution", dealiased_product_is_truncated_convolution),
    ("fourier_projection_is_orthogonal", fourier_projection_is_orthogonal),
    ("wavelet_transforms_preserve_inner_products", wavelet_transforms_preserve_inner_products),
    ("shannon_interior_levels_stay_in_band", shannon_interior_levels_stay_in_band),
    ("daubechies_removal_spills_beyond_cut", daubechies_removal_spills_beyond_cut),
    ("safety_zone_is_bounded_superset", safety_zone_is_bounded_superset),
    ("hard_threshold_boundary", hard_threshold_boundary),
    ("punctual_filter_energy_audit", punctual_filter_energy_audit),
    ("punctual_apply_is_idempotent", punctual_apply_is_idempotent),
    ("cvs_reapplication_is_nearly_idempotent", cvs_reapplication_is_nearly_idempotent),
    ("ledger_losses_are_positive", ledger_losses_are_positive),
    ("inviscid_burgers_is_energy_neutral", inviscid_burgers_is_energy_neutral),
    ("viscous_burgers_dissipation_rate", viscous_burgers_dissipation_rate),
    ("euler_quadratic_invariants_are_neutral", euler_quadratic_invariants_are_neutral),
    ("identity_energy_drift_is_fourth_order", identity_energy_drift_is_fourth_order),
    ("states_stay_in_the_active_subspace", states_stay_in_the_active_subspace),
    ("entropy_solution_is_odd", entropy_solution_is_odd),
    ("galerkin_matches_entropy_solution_before_shock", galerkin_matches_entropy_solution_before_shock),
    ("analytic_energy_is_non_increasing", analytic_energy_is_non_increasing),
    ("error_functional_is_a_discrepancy", error_functional_is_a_discrepancy),
];

fn runner(cases: u32, salt: u8) -> TestRunner {
    let mut seed = [0u8; 32];
    for (i, b) in seed.iter_mut().enumerate() {
        *b = (i as u8).wrapping_mul(37).wrapping_add(11) ^ salt;
    }
    let config = Config {
        cases,
        failure_persistence: None,
        max_shrink_iters: 256,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &seed))
}

fn check<S>(cases: u32, salt: u8, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S: Strategy,
    S::Value: std::fmt::Debug,
{
    runner(cases, salt).run(&strategy, test).map_err(|e| e.to_string())
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

fn grid(dim: Dim, n: usize) -> Grid<f64> {
    Grid::dealiased(dim, n).expect("valid grid")
}

fn random_physical(g: &Grid<f64>, seed: u64) -> PhysicalField<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..g.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
    PhysicalField::new(g.clone(), values).unwrap()
}

fn random_truncated(g: &Grid<f64>, seed: u64) -> SpectralField<f64> {
    random_physical(g, seed).to_spectral().truncate()
}

fn l2_distance(a: &SpectralField<f64>, b: &SpectralField<f64>) -> f64 {
    let mut d = a.clone();
    d.add_scaled(-1.0, b);
    d.energy().sqrt()
}

/// Levels whose basis functions carry no power beyond the dealiasing cut.
fn in_band_levels(family: WaveletFamily, g: &Grid<f64>) -> Vec<usize> {
    let n = g.n();
    let levels = n.trailing_zeros() as usize;
    (0..levels)
        .filter(|&j| {
            (g.k_cut() as i64 + 1..=n as i64 / 2)
                .all(|k| band_power(family, n, Some(j), k).is_some_and(|p| p == 0.0))
        })
        .collect()
}

fn family_strategy() -> impl Strategy<Value = WaveletFamily> {
    prop_oneof![
        Just(WaveletFamily::Shannon),
        Just(WaveletFamily::Meyer),
        Just(WaveletFamily::Daubechies12)
    ]
}

pub fn spectral_round_trip() -> Result<(), String> {
    check(128, 1, (3u32..=12, any::<u64>(), any::<bool>()), |(p, seed, two_d)| {
        let (dim, n) = if two_d && p <= 7 { (Dim::Two, 1usize << p) } else { (Dim::One, 1usize << p) };
        let g = grid(dim, n);
        let x = random_physical(&g, seed);
        let back = x.to_spectral().to_physical().map_err(|e| fail(e.to_string()))?;
        let num: f64 = x.values().iter().zip(back.values()).map(|(a, b)| (a - b) * (a - b)).sum();
        let den: f64 = x.values().iter().map(|a| a * a).sum();
        prop_assert!((num / den).sqrt() <= 1e-13, "n={n} {dim:?}: relative error {}", (num / den).sqrt());
        Ok(())
    })
}

pub fn spectral_parseval() -> Result<(), String> {
    check(128, 2, (3u32..=12, any::<u64>(), any::<bool>()), |(p, seed, two_d)| {
        let (dim, n) = if two_d && p <= 7 { (Dim::Two, 1usize << p) } else { (Dim::One, 1usize << p) };
        let g = grid(dim, n);
        let x = random_physical(&g, seed);
        let mean_sq = x.values().iter().map(|a| a * a).sum::<f64>() / g.len() as f64;
        let e = x.to_spectral().energy();
        prop_assert!((e - mean_sq).abs() <= 1e-12 * mean_sq, "n={n}: {e} vs {mean_sq}");
        Ok(())
    })
}

fn convolution_1d(a: &SpectralField<f64>, b: &SpectralField<f64>, k: i64) -> Complex<f64> {
    let kc = a.grid().k_cut() as i64;
    let mut s = Complex::new(0.0, 0.0);
    for p in -kc..=kc {
        let q = k - p;
        if q.abs() <= kc {
            s += a.coeff(p) * b.coeff(q);
        }
    }
    s
}

fn convolution_2d(a: &SpectralField<f64>, b: &SpectralField<f64>, kx: i64, ky: i64) -> Complex<f64> {
    let kc = a.grid().k_cut() as i64;
    let mut s = Complex::new(0.0, 0.0);
    for px in -kc..=kc {
        for py in -kc..=kc {
            let (qx, qy) = (kx - px, ky - py);
            if qx.abs() <= kc && qy.abs() <= kc {
                s += a.coeff2(px, py) * b.coeff2(qx, qy);
            }
        }
    }
    s
}

pub fn dealiased_product_is_truncated_convolution() -> Result<(), String> {
    let sizes = prop_oneof![
        Just((Dim::One, 8usize)),
        Just((Dim::One, 16)),
        Just((Dim::One, 32)),
        Just((Dim::One, 64)),
        Just((Dim::Two, 8)),
        Just((Dim::Two, 16)),
        Just((Dim::Two, 32)),
    ];
    check(112, 3, (sizes, any::<u64>(), any::<u64>()), |((dim, n), sa, sb)| {
        let g = grid(dim, n);
        let a = random_truncated(&g, sa);
        let b = random_truncated(&g, sb);
        let c = dealiased_product(&a, &b).map_err(|e| fail(e.to_string()))?;
        let kc = g.k_cut() as i64;
        let half = n as i64 / 2;
        let scale = a.energy().sqrt() * b.energy().sqrt();
        for kx in -half + 1..half {
            let kys: Vec<i64> = if dim == Dim::One { vec![0] } else { (-half + 1..half).collect() };
            for &ky in &kys {
                let inside = kx.abs() <= kc && ky.abs() <= kc;
                let (got, want) = if dim == Dim::One {
                    (c.coeff(kx), if inside { convolution_1d(&a, &b, kx) } else { Complex::new(0.0, 0.0) })
                } else {
                    (c.coeff2(kx, ky), if inside { convolution_2d(&a, &b, kx, ky) } else { Complex::new(0.0, 0.0) })
                };
                prop_assert!((got - want).norm() <= 1e-12 * scale, "n={n} k=({kx},{ky}): {got} vs {want}");
            }
        }
        Ok(())
    })
}

pub fn fourier_projection_is_orthogonal() -> Result<(), String> {
    check(128, 4, (3u32..=10, any::<u64>(), any::<u64>(), 0.0f64..1.0), |(p, sa, sb, frac)| {
        let n = 1usize << p;
        let g = grid(Dim::One, n);
        let a = random_physical(&g, sa).to_spectral();
        let b = random_physical(&g, sb).to_spectral();
        let k_max = (frac * (n / 2) as f64) as usize;
        let pa = a.fourier_project(k_max);
        let ppa = pa.fourier_project(k_max);
        prop_assert_eq!(ppa.coeffs(), pa.coeffs());
        let lhs = pa.inner(&b);
        let rhs = a.inner(&b.fourier_project(k_max));
        let scale = a.energy().sqrt() * b.energy().sqrt();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale, "<Pa,b>={lhs} <a,Pb>={rhs}");
        Ok(())
    })
}

pub fn wavelet_transforms_preserve_inner_products() -> Result<(), String> {
    check(
        120,
        5,
        (family_strategy(), 3u32..=10, any::<bool>(), any::<u64>(), any::<u64>()),
        |(family, p, two_d, sa, sb)| {
            let (dim, n) = if two_d && p <= 6 { (Dim::Two, 1usize << p) } else { (Dim::One, 1usize << p) };
            let g = grid(dim, n);
            let t = WaveletTransform::new(family, &g).map_err(|e| fail(e.to_string()))?;
            let a = random_physical(&g, sa);
            let b = random_physical(&g, sb);
            let wa = t.forward(&a).map_err(|e| fail(e.to_string()))?;
            let wb = t.forward(&b).map_err(|e| fail(e.to_string()))?;
            let len = g.len() as f64;
            let ab: f64 = a.values().iter().zip(b.values()).map(|(x, y)| x * y).sum::<f64>() / len;
            let scale = (a.energy() * b.energy()).sqrt();
            prop_assert!(
                (wa.inner(&wb) - ab).abs() <= 1e-10 * scale,
                "{family} n={n} {dim:?}: {} vs {ab}",
                wa.inner(&wb)
            );
            Ok(())
        },
    )
}

fn random_levels(g: &Grid<f64>, levels: &[usize], seed: u64, density: f64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = g.n().trailing_zeros() as usize;
    (0..total)
        .map(|j| {
            (0..level_len(g.dim(), j))
                .map(|_| {
                    if levels.contains(&j) && rng.random::<f64>() < density {
                        rng.random_range(-1.0..1.0)
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

pub fn shannon_interior_levels_stay_in_band() -> Result<(), String> {
    check(120, 6, (4u32..=11, any::<u64>(), 0.05f64..1.0), |(p, seed, density)| {
        let g = grid(Dim::One, 1usize << p);
        let interior = in_band_levels(WaveletFamily::Shannon, &g);
        prop_assert!(!interior.is_empty());
        let levels = random_levels(&g, &interior, seed, density);
        let w = WaveletCoeffs::from_parts(g.clone(), WaveletFamily::Shannon, 0.3, levels).map_err(|e| fail(e.to_string()))?;
        let t = WaveletTransform::new(WaveletFamily::Shannon, &g).map_err(|e| fail(e.to_string()))?;
        let s = t.inverse(&w).map_err(|e| fail(e.to_string()))?.to_spectral();
        let outside = s.energy_outside(g.k_cut());
        prop_assert!(outside <= 1e-28 * w.energy(), "n={}: {outside:e} beyond the cut", g.n());
        let kept = s.truncate().energy();
        prop_assert!((kept - w.energy()).abs() <= 1e-13 * w.energy());
        Ok(())
    })
}

pub fn daubechies_removal_spills_beyond_cut() -> Result<(), String> {
    check(120, 7, (5u32..=11, any::<u64>(), any::<prop::sample::Index>()), |(p, seed, pick)| {
        let g = grid(Dim::One, 1usize << p);
        let t = WaveletTransform::new(WaveletFamily::Daubechies12, &g).map_err(|e| fail(e.to_string()))?;
        let u = random_truncated(&g, seed).to_physical().map_err(|e| fail(e.to_string()))?;
        let mut w = t.forward(&u).map_err(|e| fail(e.to_string()))?;
        let floor = t.inverse(&w).map_err(|e| fail(e.to_string()))?.to_spectral().energy_outside(g.k_cut());
        let j = pick.index(w.num_levels());
        let lvl = w.level_mut(j);
        let i = (0..lvl.len()).max_by(|&a, &b| lvl[a].abs().total_cmp(&lvl[b].abs())).unwrap();
        lvl[i] = 0.0;
        let spill = t.inverse(&w).map_err(|e| fail(e.to_string()))?.to_spectral().energy_outside(g.k_cut());
        prop_assert!(spill > 0.0 && spill > 10.0 * floor, "level {j}: spill {spill:e}, floor {floor:e}");
        Ok(())
    })
}

pub fn safety_zone_is_bounded_superset() -> Result<(), String> {
    check(128, 8, (3u32..=10, any::<bool>(), any::<u64>(), 0.0f64..0.5), |(p, two_d, seed, density)| {
        let (dim, n) = if two_d && p <= 6 { (Dim::Two, 1usize << p) } else { (Dim::One, 1usize << p) };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut mask = CoeffMask::empty(dim, n);
        for j in 0..mask.num_levels() {
            for i in 0..level_len(dim, j) {
                if rng.random::<f64>() < density {
                    mask.set(j, i, true);
                }
            }
        }
        let out = safety_zone(&mask);
        prop_assert!(out.is_superset_of(&mask));
        if dim == Dim::One {
            prop_assert!(out.count_details() <= 6 * mask.count_details());
        }
        Ok(())
    })
}

pub fn hard_threshold_boundary() -> Result<(), String> {
    check(128, 9, (3u32..=9, any::<u64>(), any::<prop::sample::Index>(), any::<bool>()), |(p, seed, pick, on_value)| {
        let g = grid(Dim::One, 1usize << p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let levels: Vec<Vec<f64>> = (0..p as usize)
            .map(|j| (0..level_len(Dim::One, j)).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let flat: Vec<f64> = levels.iter().flatten().copied().collect();
        // Half the cases put the threshold exactly on a coefficient magnitude.
        let eps = if on_value { flat[pick.index(flat.len())].abs() } else { rng.random_range(0.0..1.0) };
        let w = WaveletCoeffs::from_parts(g, WaveletFamily::Shannon, 0.0, levels).map_err(|e| fail(e.to_string()))?;
        let (filtered, mask) = hard_threshold(&w, eps).map_err(|e| fail(e.to_string()))?;
        for j in 0..w.num_levels() {
            for (i, &c) in w.level(j).iter().enumerate() {
                let keep = c.abs() > eps;
                prop_assert_eq!(mask.get(j, i), keep);
                prop_assert_eq!(filtered.level(j)[i], if keep { c } else { 0.0 });
            }
        }
        Ok(())
    })
}

fn punctual_rule(kind: u8, n: usize, a: f64, b: f64, t_b: f64, t_e: f64) -> ProjectorRule {
    let g = grid(Dim::One, n);
    match kind {
        0 => ProjectorRule::FourierPunctual {
            k_f: 1 + (a * g.k_cut() as f64) as usize % g.k_cut(),
            t_b,
            t_e,
        },
        _ => {
            let family = if kind == 1 { WaveletFamily::Shannon } else { WaveletFamily::Meyer };
            let lv = in_band_levels(family, &g);
            let j_f = lv[(a * lv.len() as f64) as usize % lv.len()];
            let i_f = (b * level_len(Dim::One, j_f) as f64) as usize % level_len(Dim::One, j_f);
            ProjectorRule::WaveletPunctual { family, j_f, i_f, t_b, t_e }
        }
    }
}

pub fn punctual_filter_energy_audit() -> Result<(), String> {
    let s = (0u8..3, 0.0f64..1.0, 0.0f64..1.0, 0.0f64..0.06, 0.0f64..0.04);
    check(100, 10, s, |(kind, a, b, t_b, len)| {
        let n = 64;
        let g = grid(Dim::One, n);
        let rule = punctual_rule(kind, n, a, b, t_b, t_b + len);
        let mut proj = DynamicalProjector::new(rule.clone(), &g).map_err(|e| fail(e.to_string()))?;
        let mut ledger = DissipationLedger::new();
        let params = BurgersParams::inviscid();
        // The residual is RK4 energy drift plus round-off, below 3e-13 at this step size; filter jumps are O(0.1).
        let cfg = StepperConfig::from_cfl(Scheme::Rk4, 1.0 / n as f64, 64.0, 0.1).unwrap();
        let u0 = sine_initial(&g).unwrap();
        let e0 = u0.energy();
        let mut worst = 0.0f64;
        advance(u0, |u| burgers_rhs(u, &params), &mut proj, &cfg, &mut ledger, |s| {
            worst = worst.max((e0 - s.state.energy() - s.ledger.cumulative()).abs());
            Ok(())
        })
        .map_err(|e| fail(e.to_string()))?;
        prop_assert!(worst <= 1e-12, "{}: audit residual {worst:e}", rule.describe());
        Ok(())
    })
}

pub fn punctual_apply_is_idempotent() -> Result<(), String> {
    let s = (0u8..4, 0.0f64..1.0, 0.0f64..1.0, 4u32..=9, any::<u64>());
    check(128, 11, s, |(kind, a, b, p, seed)| {
        let n = 1usize << p;
        let g = grid(Dim::One, n);
        let rule = if kind == 3 {
            let j_f = (a * p as f64) as usize % p as usize;
            ProjectorRule::WaveletPunctual {
                family: WaveletFamily::Daubechies12,
                j_f,
                i_f: (b * level_len(Dim::One, j_f) as f64) as usize % level_len(Dim::One, j_f),
                t_b: 0.0,
                t_e: 1.0,
            }
        } else {
            punctual_rule(kind, n, a, b, 0.0, 1.0)
        };
        let mut proj = DynamicalProjector::new(rule.clone(), &g).map_err(|e| fail(e.to_string()))?;
        let mut ledger = DissipationLedger::new();
        let u = random_truncated(&g, seed);
        let once = proj.apply_detailed(0.5, u.clone(), &mut ledger, false).map_err(|e| fail(e.to_string()))?;
        let twice = proj.apply(0.5, &once.field, &mut ledger, false).map_err(|e| fail(e.to_string()))?;
        let defect = l2_distance(&twice, &once.field);
        if kind == 3 {
            // Truncation re-creates a sliver of the removed coefficient: at most
            // |c| * ||(1 - T) psi||^2, whose square is bounded by the first dealias loss.
            prop_assert!(
                defect * defect <= once.losses.dealias + 1e-28,
                "{}: defect^2 {:e}, dealias {:e}",
                rule.describe(),
                defect * defect,
                once.losses.dealias
            );
        } else {
            prop_assert!(defect <= 1e-13 * u.energy().sqrt(), "{}: defect {defect:e}", rule.describe());
        }
        Ok(())
    })
}

fn front_field(g: &Grid<f64>, seed: u64) -> SpectralField<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = rng.random_range(0.3..1.0);
    let k = rng.random_range(1..4) as f64;
    let b = rng.random_range(-0.5..0.5);
    let x0 = rng.random_range(0.2..0.8);
    let w = rng.random_range(0.005..0.05);
    PhysicalField::from_fn(g.clone(), |x| a * (TAU * k * x).sin() + b * ((x - x0) / w).tanh())
        .to_spectral()
        .truncate()
}

pub fn cvs_reapplication_is_nearly_idempotent() -> Result<(), String> {
    check(100, 12, (family_strategy(), any::<bool>(), 7u32..=11, any::<u64>()), |(family, safety, p, seed)| {
        let g = grid(Dim::One, 1usize << p);
        let rule = ProjectorRule::Cvs(CvsParams::new(family, 8.0, safety));
        let mut proj = DynamicalProjector::new(rule, &g).map_err(|e| fail(e.to_string()))?;
        let mut ledger = DissipationLedger::new();
        let u = front_field(&g, seed);
        let once = proj.apply(0.0, &u, &mut ledger, false).map_err(|e| fail(e.to_string()))?;
        let twice = proj.apply(0.0, &once, &mut ledger, false).map_err(|e| fail(e.to_string()))?;
        let extra = once.energy() - twice.energy();
        prop_assert!(extra < 1e-3 * once.energy(), "{family} safety={safety}: second pass removed {extra:e} of {}", once.energy());
        Ok(())
    })
}

pub fn ledger_losses_are_positive() -> Result<(), String> {
    let s = (0u8..4, 0.0f64..1.0, 0.0f64..1.0, family_strategy(), any::<bool>());
    check(100, 13, s, |(kind, a, b, family, safety)| {
        let n = 64;
        let g = grid(Dim::One, n);
        let rule = if kind == 3 {
            ProjectorRule::Cvs(CvsParams::new(family, 4.0, safety))
        } else {
            punctual_rule(kind, n, a, b, 0.02, 0.08)
        };
        let mut proj = DynamicalProjector::new(rule, &g).map_err(|e| fail(e.to_string()))?;
        let mut ledger = DissipationLedger::new();
        let params = BurgersParams::inviscid();
        let cfg = StepperConfig::from_cfl(Scheme::Rk4, 1.0 / n as f64, 16.0, 0.25).unwrap();
        advance(sine_initial(&g).unwrap(), |u| burgers_rhs(u, &params), &mut proj, &cfg, &mut ledger, |_| Ok(()))
            .map_err(|e| fail(e.to_string()))?;
        prop_assert!(ledger.entries().iter().all(|e| e.loss > 0.0 && e.loss.is_finite()));
        prop_assert!(!ledger.record(0.3, -1e-3, LedgerTag::Cvs, "negative"));
        Ok(())
    })
}

pub fn inviscid_burgers_is_energy_neutral() -> Result<(), String> {
    check(128, 14, (3u32..=11, any::<u64>()), |(p, seed)| {
        let g = grid(Dim::One, 1usize << p);
        let u = random_truncated(&g, seed);
        let r = burgers_rhs(&u, &BurgersParams::inviscid()).map_err(|e| fail(e.to_string()))?;
        let scale = u.energy().sqrt() * r.energy().sqrt();
        prop_assert!(u.inner(&r).abs() <= 1e-12 * scale, "(u, rhs) = {:e}", u.inner(&r));
        Ok(())
    })
}

pub fn viscous_burgers_dissipation_rate() -> Result<(), String> {
    check(128, 15, (3u32..=11, any::<u64>(), 1e-4f64..1e-1), |(p, seed, nu)| {
        let g = grid(Dim::One, 1usize << p);
        let u = random_truncated(&g, seed);
        let r = burgers_rhs(&u, &BurgersParams::new(nu).unwrap()).map_err(|e| fail(e.to_string()))?;
        let want = -nu * u.derivative(Axis::X).energy();
        let got = u.inner(&r);
        prop_assert!((got - want).abs() <= 1e-11 * want.abs(), "{got} vs {want}");
        Ok(())
    })
}

pub fn euler_quadratic_invariants_are_neutral() -> Result<(), String> {
    check(100, 16, (3u32..=6, any::<u64>()), |(p, seed)| {
        let n = 1usize << p;
        let g = grid(Dim::Two, n);
        let mut w = random_truncated(&g, seed);
        w.coeffs_mut()[0] = Complex::new(0.0, 0.0);
        let r = euler2d_rhs(&w).map_err(|e| fail(e.to_string()))?;
        let kc = g.k_cut() as i64;
        // (psi, rhs) with psi_k = -omega_k / (4 pi^2 |k|^2).
        let mut psi_r = 0.0;
        let mut psi_norm = 0.0;
        for kx in -kc..=kc {
            for ky in -kc..=kc {
                if kx == 0 && ky == 0 {
                    continue;
                }
                let psi = -w.coeff2(kx, ky) / (TAU * TAU * (kx * kx + ky * ky) as f64);
                psi_r += (psi.conj() * r.coeff2(kx, ky)).re;
                psi_norm += psi.norm_sqr();
            }
        }
        let rn = r.energy().sqrt();
        prop_assert!(w.inner(&r).abs() <= 1e-11 * w.energy().sqrt() * rn, "(w, rhs) = {:e}", w.inner(&r));
        prop_assert!(psi_r.abs() <= 1e-11 * psi_norm.sqrt() * rn, "(psi, rhs) = {psi_r:e}");
        Ok(())
    })
}

fn burgers_energy_drift(n: usize, cfl: f64, t_end: f64) -> f64 {
    let g = grid(Dim::One, n);
    let mut proj = DynamicalProjector::new(ProjectorRule::Identity, &g).unwrap();
    let mut ledger = DissipationLedger::new();
    let params = BurgersParams::inviscid();
    let cfg = StepperConfig::from_cfl(Scheme::Rk4, 1.0 / n as f64, cfl, t_end).unwrap();
    let u0 = sine_initial(&g).unwrap();
    let e0 = u0.energy();
    let u = advance(u0, |u| burgers_rhs(u, &params), &mut proj, &cfg, &mut ledger, |_| Ok(())).unwrap();
    (e0 - u.energy()).abs()
}

/// Deterministic: identity projector, smooth solution, three dyadic refinements.
pub fn identity_energy_drift_is_fourth_order() -> Result<(), String> {
    let ratios = [4.0, 8.0, 16.0, 32.0];
    let dts: Vec<f64> = ratios.iter().map(|r| 1.0 / (128.0 * r)).collect();
    let drifts: Vec<f64> = ratios.iter().map(|&r| burgers_energy_drift(128, r, 0.15)).collect();
    let slope = loglog_slope(&dts, &drifts).map_err(|e| e.to_string())?;
    if (slope - 4.0).abs() <= 0.3 {
        Ok(())
    } else {
        Err(format!("drift slope {slope:.3} from {drifts:?}"))
    }
}

pub fn states_stay_in_the_active_subspace() -> Result<(), String> {
    check(100, 17, (0u8..3, 0.0f64..1.0, 0.0f64..1.0, 0.0f64..0.05), |(kind, a, b, t_b)| {
        let n = 64;
        let g = grid(Dim::One, n);
        let rule = punctual_rule(kind, n, a, b, t_b, t_b + 0.03);
        let checker = DynamicalProjector::new(rule.clone(), &g).map_err(|e| fail(e.to_string()))?;
        let mut proj = checker.clone();
        let mut ledger = DissipationLedger::new();
        let params = BurgersParams::inviscid();
        let cfg = StepperConfig::from_cfl(Scheme::Rk4, 1.0 / n as f64, 16.0, 0.1).unwrap();
        let mut worst = 0.0f64;
        advance(sine_initial(&g).unwrap(), |u| burgers_rhs(u, &params), &mut proj, &cfg, &mut ledger, |s| {
            let (p, _) = checker.resolve(s.t, s.state)?;
            let (again, _) = checker.project(&p, s.state.clone())?;
            worst = worst.max(l2_distance(&again, s.state));
            Ok(())
        })
        .map_err(|e| fail(e.to_string()))?;
        prop_assert!(worst <= 1e-13, "{}: {worst:e}", rule.describe());
        Ok(())
    })
}

pub fn entropy_solution_is_odd() -> Result<(), String> {
    check(1000, 18, (0.0f64..1.0, 0.0f64..1.0), |(x, t)| {
        let s = entropy_eval(1.0 - x, t) + entropy_eval(x, t);
        prop_assert!(s.abs() <= 1e-12, "x={x} t={t}: {s:e}");
        Ok(())
    })
}

/// Deterministic: the Galerkin error at `t = 0.1` shrinks as the grid is refined.
pub fn galerkin_matches_entropy_solution_before_shock() -> Result<(), String> {
    let t_end = 0.1;
    let mut errors = Vec::new();
    for n in [16usize, 32, 64, 128] {
        let g = grid(Dim::One, n);
        let mut proj = DynamicalProjector::new(ProjectorRule::Identity, &g).unwrap();
        let mut ledger = DissipationLedger::new();
        let params = BurgersParams::inviscid();
        let cfg = StepperConfig::from_cfl(Scheme::Rk4, 1.0 / n as f64, 16.0, t_end).unwrap();
        let u = advance(sine_initial(&g).unwrap(), |u| burgers_rhs(u, &params), &mut proj, &cfg, &mut ledger, |_| Ok(()))
            .map_err(|e| e.to_string())?;
        let reference = entropy_sample(&g, t_end).map_err(|e| e.to_string())?;
        errors.push(relative_l2_error(&u.to_physical().map_err(|e| e.to_string())?, &reference).map_err(|e| e.to_string())?);
    }
    if errors.windows(2).all(|w| w[1] < w[0]) && errors[errors.len() - 1] < 1e-6 {
        Ok(())
    } else {
        Err(format!("errors {errors:?}"))
    }
}

pub fn analytic_energy_is_non_increasing() -> Result<(), String> {
    check(128, 19, (0.0f64..0.6, 0.0f64..0.3), |(t, dt)| {
        let (e1, e2) = (analytic_energy(t), analytic_energy(t + dt));
        prop_assert!(e2 <= e1 + 1e-10, "E({t})={e1} < E({})={e2}", t + dt);
        if t <= shock_time() {
            prop_assert!((e1 - 0.5).abs() <= 1e-10);
        }
        Ok(())
    })
}

pub fn error_functional_is_a_discrepancy() -> Result<(), String> {
    check(128, 20, (any::<u64>(), 3usize..40, any::<prop::sample::Index>()), |(seed, len, pick)| {
        let g = grid(Dim::One, 32);
        let times: Vec<f64> = (0..len).map(|i| i as f64 * 0.01).collect();
        let refs: Vec<PhysicalField<f64>> = (0..len).map(|i| random_physical(&g, seed.wrapping_add(i as u64))).collect();
        let (t0, t1) = (times[0], times[len - 1]);
        let same: Vec<(f64, f64)> = times
            .iter()
            .zip(&refs)
            .map(|(&t, r)| (t, relative_l2_error(r, r).unwrap()))
            .collect();
        prop_assert_eq!(error_functional(&same, t0, t1).unwrap(), 0.0);
        let k = pick.index(len);
        let perturbed: Vec<(f64, f64)> = times
            .iter()
            .zip(&refs)
            .enumerate()
            .map(|(i, (&t, r))| {
                let u = if i == k { random_physical(&g, !seed) } else { r.clone() };
                (t, relative_l2_error(&u, r).unwrap())
            })
            .collect();
        let e = error_functional(&perturbed, t0, t1).unwrap();
        prop_assert!(e > 0.0, "perturbing snapshot {k} left the functional at {e}");
        Ok(())
    })
}
