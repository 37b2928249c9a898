//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use vortex_core::complex::random::{random_complex, random_shift, RandomParams};
use vortex_core::complex::{
    tensor_product, ChainVector, DifferentialEntry, FilteredComplex, Grading, OrbitGenerator, PeriodLattice,
};
use vortex_core::novikov::{Coefficient, CoefficientMode, NovikovScalar};
use vortex_core::quasimap::brane_rank;
use vortex_core::quasistate::{homogenize, OracleTag, SpectralOracle};
use vortex_core::rational::{q, qi, ExtRational, Q};
use vortex_core::selftest::{selftest, SelftestConfig};
use vortex_core::toric::{scan_fibers, Brane, HeavinessCertificate, MomentPolytope, ScanRow};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

const ORDER: i64 = -10;

fn order_floor() -> ExtRational {
    ExtRational::Finite(qi(ORDER))
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

/// Everything certified by criteria 1, 2 and 6, for the later cross-checks.
#[derive(Default)]
struct Emitted {
    certificates: Vec<HeavinessCertificate>,
}

fn certified(rows: &[ScanRow]) -> Vec<&HeavinessCertificate> {
    rows.iter().filter_map(|r| r.outcome.certificate()).collect()
}

fn criterion_1(emitted: &mut Emitted) -> Outcome {
    let cp1 = MomentPolytope::interval(qi(0), qi(1));
    let (rows, elapsed) = timed(|| scan_fibers(&cp1, 8, &qi(ORDER), CoefficientMode::Gaussian));
    let rows = rows.map_err(|e| e.to_string())?;
    let fibers: Vec<Q> = rows.iter().map(|r| r.fiber[0].clone()).collect();
    ensure!(fibers == (1..=7).map(|k| q(k, 8)).collect::<Vec<_>>(), "grid {fibers:?}");
    let certs = certified(&rows);
    ensure!(certs.len() == 1 && certs[0].fiber == [q(1, 2)], "certified fibers {:?}", certs.iter().map(|c| &c.fiber).collect::<Vec<_>>());
    let cert = certs[0];
    // x ∂W/∂x = q^{-λ}x − q^{λ−1}x⁻¹ vanishes only at λ = 1/2, x² = 1.
    let mut leads = Vec::new();
    for b in &cert.branes {
        let Brane::Exact(c) = b else { return Err("brane is not exact".into()) };
        ensure!(c.residual_valuation == ExtRational::NegInfinity, "residual {:?}", c.residual_valuation);
        ensure!(c.x[0].terms().len() == 1 && c.x[0].terms()[0].exp == qi(0), "x = {}", c.x[0].to_json());
        let z = c.x[0].terms()[0].coeff.to_complex();
        ensure!(z.im == 0.0, "x = {z}");
        leads.push(z.re);
    }
    leads.sort_by(f64::total_cmp);
    ensure!(leads == [-1.0, 1.0], "branes {leads:?}");
    ensure!(elapsed < Duration::from_secs(1), "scan took {elapsed:?}");
    emitted.certificates.push(cert.clone());
    Ok(format!("certificate only at 1/2, x = ±1, residual exactly 0, {elapsed:.2?}"))
}

fn criterion_2(emitted: &mut Emitted) -> Outcome {
    let cp2 = MomentPolytope::simplex(2);
    let (rows, elapsed) = timed(|| scan_fibers(&cp2, 6, &qi(ORDER), CoefficientMode::Complex));
    let rows = rows.map_err(|e| e.to_string())?;
    ensure!(rows.len() == 10, "{} interior grid points", rows.len());
    let barycenter = [q(1, 3), q(1, 3)];
    for r in &rows {
        ensure!((r.fiber == barycenter) == r.outcome.certificate().is_some(), "fiber {:?}: {}", r.fiber, r.outcome.to_json());
    }
    let cert = certified(&rows)[0];
    ensure!(cert.branes.len() == 3, "{} branes", cert.branes.len());
    let w = cert.potential().map_err(|e| e.to_string())?;
    // Symmetric elimination: x₁ = x₂ = (x₁x₂)⁻¹, so x₁ = x₂ = ω with ω³ = 1.
    let roots: Vec<Complex64> = (0..3).map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 3.0)).collect();
    let mut matched = [false; 3];
    let mut worst: f64 = 0.0;
    for b in &cert.branes {
        ensure!(matches!(b, Brane::Numeric(_)), "brane is not floating");
        let lead = b.leading();
        let k = roots.iter().position(|w| (lead[0] - w).norm() < 1e-9 && (lead[1] - w).norm() < 1e-9);
        let Some(k) = k else { return Err(format!("brane {lead:?} is not a cube root of unity")) };
        ensure!(!matched[k], "root {k} repeated");
        matched[k] = true;
        let hand = (lead[0] - (lead[0] * lead[1]).inv()).norm().max((lead[1] - (lead[0] * lead[1]).inv()).norm());
        let y = w.log_gradient(&b.as_numeric(), &order_floor()).map_err(|e| e.to_string())?;
        let lib = y.iter().flat_map(|s| s.terms()).map(|t| t.coeff.to_complex().norm()).fold(0.0, f64::max);
        worst = worst.max(hand).max(lib);
    }
    ensure!(worst < 1e-10, "residual norm {worst:e}");
    ensure!(elapsed < Duration::from_secs(5), "scan took {elapsed:?}");
    emitted.certificates.push(cert.clone());
    Ok(format!("3 cube-root branes, residual norm {worst:.1e}, 9 other fibers none-found, {elapsed:.2?}"))
}

fn criterion_3(emitted: &Emitted) -> Outcome {
    let floor = order_floor();
    let mut checked = 0;
    for cert in &emitted.certificates {
        let w = cert.potential().map_err(|e| e.to_string())?;
        let full = 1usize << w.dim;
        for b in &cert.branes {
            let r1 = brane_rank(&w, b, 1, &floor).map_err(|e| e.to_string())?;
            let r2 = brane_rank(&w, b, 2, &floor).map_err(|e| e.to_string())?;
            ensure!(r1.rank == full, "certified brane at {:?} has rank {} ≠ {full}", cert.fiber, r1.rank);
            ensure!(r1.unit_nonzero, "unit vanishes at {:?}", cert.fiber);
            ensure!(r2.rank == 0, "perturbed brane at {:?} has rank {}", cert.fiber, r2.rank);
            checked += 1;
        }
    }
    ensure!(checked > 0, "no branes to check");
    Ok(format!("{checked}/{checked} branes agree"))
}

fn hand_complex() -> FilteredComplex<Q> {
    let mono = |c: i64, e: Q| NovikovScalar::monomial(qi(c), e);
    FilteredComplex::new(
        PeriodLattice::new(vec![q(1, 2)]),
        vec![
            OrbitGenerator::new("a1", qi(3), 0),
            OrbitGenerator::new("a2", qi(1), 0),
            OrbitGenerator::new("b", qi(2), 1),
        ],
        vec![
            DifferentialEntry { from: "b".into(), to: "a1".into(), coeff: mono(1, qi(-2)) },
            DifferentialEntry { from: "b".into(), to: "a2".into(), coeff: mono(-1, q(-1, 2)) },
        ],
        ExtRational::NegInfinity,
    )
}

fn criterion_4() -> Outcome {
    let c = hand_complex();
    let s = c.spectral_number(&ChainVector::basis("a1")).map_err(|e| e.to_string())?;
    let r = s.finite().ok_or("hand case vanishes")?;
    ensure!(r.value == q(5, 2), "hand case c = {}", r.value);
    let witness = ChainVector::from_pairs([("a2".to_owned(), NovikovScalar::monomial(qi(1), q(3, 2)))]);
    ensure!(r.witness_cycle == witness, "witness {}", r.witness_cycle.to_json());

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let params = RandomParams::default();
    let (mut complexes, mut classes, mut shifts) = (0, 0, 0);
    while complexes < 200 {
        let rc = random_complex::<Q, _>(&mut rng, &params);
        let c = &rc.complex;
        ensure!(c.generators.len() <= 8 && c.lattice.rank() <= 2, "random complex exceeds size bounds");
        ensure!(c.validate().is_valid(), "invalid random complex {}", c.to_json());
        complexes += 1;
        let Some((a, _)) = rc.random_nonzero_cycle(&mut rng) else { continue };
        let s = c.spectral_number(&a).map_err(|e| e.to_string())?;
        let r = s.finite().ok_or_else(|| format!("nonzero class vanishes in {}", c.to_json()))?;
        ensure!(c.spectrum().contains(&r.value), "c = {} outside spectrum of {}", r.value, c.to_json());
        let (g, v) = r.spectrality_witness.clone().ok_or("no spectrality witness")?;
        let action = &c.generator(&g).ok_or("unknown witness generator")?.action;
        ensure!(action - c.lattice.period(&v) == r.value, "witness {g} does not realise {}", r.value);
        ensure!(c.level(&r.witness_cycle).map_err(|e| e.to_string())? == ExtRational::Finite(r.value.clone()), "witness level");
        classes += 1;
        for _ in 0..5 {
            let lambda = random_shift::<Q, _>(&mut rng);
            let ExtRational::Finite(v) = lambda.valuation() else { return Err("zero shift".into()) };
            let shifted = c.spectral_number(&a.scale(&lambda)).map_err(|e| e.to_string())?.value();
            ensure!(shifted == ExtRational::Finite(&r.value + &v), "shift by {} fails on {}", lambda.to_json(), c.to_json());
            shifts += 1;
        }
    }
    Ok(format!("hand case c = 5/2 at q^(3/2)a2; {complexes} complexes, {classes} classes, {shifts} shifts exact"))
}

/// Ranks of a tensor product from the ranks of the factors.
fn convolve(a: &BTreeMap<i64, usize>, b: &BTreeMap<i64, usize>, parity: bool) -> BTreeMap<i64, usize> {
    let mut out = BTreeMap::new();
    for (&i, &r) in a {
        for (&j, &s) in b {
            let d = if parity { (i + j).rem_euclid(2) } else { i + j };
            *out.entry(d).or_insert(0) += r * s;
        }
    }
    out.retain(|_, r| *r > 0);
    out
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let params = RandomParams { max_generators: 4, ..RandomParams::default() };
    let (mut pairs, mut additive) = (0, 0);
    while pairs < 100 {
        let r0 = random_complex::<Q, _>(&mut rng, &params);
        let r1 = random_complex::<Q, _>(&mut rng, &params);
        let t = tensor_product(&r0.complex, &r1.complex).map_err(|e| e.to_string())?;
        let h0 = r0.complex.homology_rank().map_err(|e| e.to_string())?;
        let h1 = r1.complex.homology_rank().map_err(|e| e.to_string())?;
        let ht = t.homology_rank().map_err(|e| e.to_string())?;
        let parity = ht.grading == Grading::Parity;
        let fold = |h: &vortex_core::complex::HomologyRanks| -> BTreeMap<i64, usize> {
            if parity && h.grading == Grading::Integer {
                convolve(&h.ranks, &BTreeMap::from([(0, 1)]), true)
            } else {
                h.ranks.iter().filter(|(_, &r)| r > 0).map(|(&d, &r)| (d, r)).collect()
            }
        };
        let expected = convolve(&fold(&h0), &fold(&h1), parity);
        let actual: BTreeMap<i64, usize> = ht.ranks.iter().filter(|(_, &r)| r > 0).map(|(&d, &r)| (d, r)).collect();
        ensure!(actual == expected, "tensor ranks {actual:?} ≠ {expected:?}");
        pairs += 1;
        let (Some((a0, _)), Some((a1, _))) = (r0.random_nonzero_cycle(&mut rng), r1.random_nonzero_cycle(&mut rng)) else {
            continue;
        };
        let c0 = r0.complex.spectral_number(&a0).map_err(|e| e.to_string())?.value();
        let c1 = r1.complex.spectral_number(&a1).map_err(|e| e.to_string())?.value();
        let ct = t.spectral_number(&a0.tensor(&a1)).map_err(|e| e.to_string())?.value();
        ensure!(ct == &c0 + &c1, "c(a0⊗a1) = {ct:?} ≠ {c0:?} + {c1:?}");
        additive += 1;
    }
    Ok(format!("{pairs} pairs with matching ranks, {additive} exact additivity checks"))
}

fn x_json(b: &Brane) -> Vec<Value> {
    b.to_json()["x"].as_array().expect("x is a list").clone()
}

fn criterion_6(emitted: &mut Emitted) -> Outcome {
    let cp1 = MomentPolytope::interval(qi(0), qi(1));
    let square = cp1.product(&cp1);
    let factor: BTreeMap<Q, Vec<Vec<Value>>> = scan_fibers(&cp1, 8, &qi(ORDER), CoefficientMode::Gaussian)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|r| {
            let branes = r.outcome.certificate().map(|c| c.branes.iter().map(x_json).collect()).unwrap_or_default();
            (r.fiber[0].clone(), branes)
        })
        .collect();
    let rows = scan_fibers(&square, 8, &qi(ORDER), CoefficientMode::Gaussian).map_err(|e| e.to_string())?;
    ensure!(rows.len() == 49, "{} fibers", rows.len());
    let mut central = 0;
    for r in &rows {
        let mut actual: Vec<Vec<Value>> =
            r.outcome.certificate().map(|c| c.branes.iter().map(x_json).collect()).unwrap_or_default();
        let mut expected: Vec<Vec<Value>> = factor[&r.fiber[0]]
            .iter()
            .flat_map(|a| factor[&r.fiber[1]].iter().map(move |b| [a.clone(), b.clone()].concat()))
            .collect();
        actual.sort_by_key(|x| Value::from(x.clone()).to_string());
        expected.sort_by_key(|x| Value::from(x.clone()).to_string());
        ensure!(actual == expected, "fiber {:?}: product branes differ from pairs", r.fiber);
        if let Some(c) = r.outcome.certificate() {
            ensure!(r.fiber == [q(1, 2), q(1, 2)], "unexpected certificate at {:?}", r.fiber);
            central = c.branes.len();
            emitted.certificates.push(c.clone());
        }
    }
    ensure!(central == 4, "{central} branes at the central fiber");
    Ok("49 fibers agree with factor pairs; 4 branes at (1/2, 1/2)".into())
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for case in 0..20 {
        let s: f64 = rng.random_range(-5.0..5.0);
        let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let noise: Vec<f64> = (0..64).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let r = |n: u64| -> f64 {
            match case % 4 {
                0 => noise[n as usize - 1],
                1 => 1.0,
                2 => if n % 2 == 0 { 1.0 } else { -1.0 },
                _ => (n as f64 + phase).sin(),
            }
        };
        let oracle = SpectralOracle::synthetic(|n| s * n as f64 + r(n), 1..=64).with_bound(1.0);
        ensure!(oracle.tag == OracleTag::Synthetic, "tag");
        let est = homogenize(&oracle).map_err(|e| e.to_string())?;
        let err = (est.value + s).abs();
        ensure!(err <= 2.0 / 64.0, "case {case}: s = {s}, estimate {} (error {err})", est.value);
        ensure!(est.slope_ci[0] <= -s && -s <= est.slope_ci[1], "case {case}: −s outside {:?}", est.slope_ci);
        worst = worst.max(err);
    }
    Ok(format!("20 cases, worst error {worst:.4} ≤ 2/64"))
}

fn criterion_8(emitted: &Emitted) -> Outcome {
    for cert in &emitted.certificates {
        let text = cert.to_json().to_string();
        let parsed: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        let back = HeavinessCertificate::from_json(&parsed).map_err(|e| e.to_string())?;
        ensure!(&back == cert, "certificate at {:?} changes in transit", cert.fiber);
        let check = back.verify().map_err(|e| e.to_string())?;
        ensure!(check.passed, "certificate at {:?} fails verification: {check:?}", cert.fiber);
    }
    let cfg = SelftestConfig::default();
    let a = selftest(&cfg);
    let b = selftest(&cfg);
    ensure!(a.passed, "selftest fails: {:?}", a.summary_lines());
    let (ja, jb) = (a.to_json().to_string(), b.to_json().to_string());
    ensure!(ja == jb, "selftest reports differ");
    Ok(format!("{} certificates re-validate; selftest reports byte-identical ({} bytes)", emitted.certificates.len(), ja.len()))
}

fn main() {
    let mut emitted = Emitted::default();
    let results = [
        ("cp1_heaviness", criterion_1(&mut emitted)),
        ("cp2_barycenter", criterion_2(&mut emitted)),
        ("product_heaviness", criterion_6(&mut emitted)),
        ("quasimap_dichotomy", criterion_3(&emitted)),
        ("spectral_axioms", criterion_4()),
        ("kunneth_additivity", criterion_5()),
        ("homogenization", criterion_7()),
        ("round_trip_and_determinism", criterion_8(&emitted)),
    ];
    let number = |name: &str| match name {
        "cp1_heaviness" => 1,
        "cp2_barycenter" => 2,
        "quasimap_dichotomy" => 3,
        "spectral_axioms" => 4,
        "kunneth_additivity" => 5,
        "product_heaviness" => 6,
        "homogenization" => 7,
        _ => 8,
    };
    let mut sorted: Vec<_> = results.iter().collect();
    sorted.sort_by_key(|(name, _)| number(name));
    let mut failed = 0;
    for (name, outcome) in sorted {
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", number(name)),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", number(name));
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
