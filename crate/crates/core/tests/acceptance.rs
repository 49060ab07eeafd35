//! Acceptance suite. Each test prints one `[PASS]`/`[FAIL]` line.

use std::io::Write;
use std::time::Instant;

use nbqi::bivariate::{self, BoxMesh, CrissCross, TensorMesh};
use nbqi::nearbest::{self, NearBestProblem, UniformKind};
use nbqi::normest::{self, NormOptions};
use nbqi::partition;
use nbqi::quadrature;
use nbqi::quasiinterp;
use nbqi::{KnotSequence, QuasiInterpolant};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn report(name: &str, pass: bool, detail: &str) -> bool {
    let tag = if pass { "PASS" } else { "FAIL" };
    // Bypasses the harness capture so the line shows on every run.
    let _ = writeln!(std::io::stdout().lock(), "\n[{tag}] {name}: {detail}");
    pass
}

fn random_knots(m: usize, seed: u64) -> KnotSequence {
    let mut rng = partition::rng(seed);
    let n = rng.gen_range(m + 6..m + 20);
    let b = partition::random(n, partition::DEFAULT_MAX_RATIO, &mut rng);
    KnotSequence::clamped(m, &b).unwrap()
}

/// Jittered quadratic partitions that satisfy the centred-stencil
/// admissibility condition for `p`.
fn admissible_knots(p: usize, rng: &mut ChaCha8Rng) -> KnotSequence {
    loop {
        let n = rng.gen_range(2 * p + 6..2 * p + 30);
        let ks = KnotSequence::clamped(2, &partition::jittered(n, 0.3, rng)).unwrap();
        if quasiinterp::check_q2_admissible(&ks, p).is_ok() {
            return ks;
        }
    }
}

fn random_mesh(seed: u64, ratio: f64) -> TensorMesh {
    let mut rng = partition::rng(seed);
    let nx = rng.gen_range(3..12);
    let ny = rng.gen_range(3..12);
    let x = partition::random(nx, ratio, &mut rng);
    let y = partition::random(ny, ratio, &mut rng);
    TensorMesh::new(x, y).unwrap()
}

/// `θ² − θ^{(2)}` of a window, as the mean squared pairwise gap.
fn lambda_oracle(window: &[f64]) -> f64 {
    let m = window.len() as f64;
    if m < 2.0 {
        return 0.0;
    }
    let mut s = 0.0;
    for (a, &u) in window.iter().enumerate() {
        for &v in &window[a + 1..] {
            s += (u - v) * (u - v);
        }
    }
    s / (m * m * (m - 1.0))
}

#[test]
fn cardinal_dqi_nu() {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    let mut vals = Vec::new();
    for n in 1..=3 {
        let q = quasiinterp::uniform_nb_dqi(4, n, 3).unwrap();
        let oracle = 1.0 + 2.0 / (3.0 * (n * n) as f64);
        worst = worst.max((q.nu_bound() - oracle).abs());
        vals.push(q.nu_bound());
    }
    let secs = t.elapsed().as_secs_f64();
    let printed = [1.666, 1.166, 1.074];
    let near_printed = vals.iter().zip(printed).all(|(v, p)| (v - p).abs() < 1e-3);
    let pass = worst <= 1e-12 && near_printed && secs < 1.0;
    assert!(report(
        "cardinal dQI nu",
        pass,
        &format!("nu={vals:.6?} max|nu-(1+2/(3n^2))|={worst:.1e} time={secs:.3}s")
    ));
}

#[test]
fn cardinal_dqi_empirical_norm() {
    let t = Instant::now();
    let target = [1.222, 1.139, 1.074];
    let mut got = Vec::new();
    for n in 1..=3 {
        let q = quasiinterp::uniform_nb_dqi(4, n, 3).unwrap();
        got.push(normest::empirical_norm_discrete(&q, &NormOptions::default()).unwrap().value);
    }
    let secs = t.elapsed().as_secs_f64();
    let ok = got.iter().zip(target).all(|(g, p)| (g - p).abs() <= 0.01);
    assert!(report(
        "cardinal dQI empirical norm",
        ok && secs < 10.0,
        &format!("norm={got:.4?} target={target:?} time={secs:.2}s")
    ));
}

#[test]
fn cardinal_iqi_nu_and_norm() {
    let t = Instant::now();
    let nu_target = [7.0 / 3.0, 4.0 / 3.0, 1.0 + 4.0 / 27.0];
    let norm_target = [1.5278, 1.2778, 1.1481];
    let opts = NormOptions::default();
    let (mut nus, mut skel, mut kern) = (Vec::new(), Vec::new(), Vec::new());
    for n in 1..=3 {
        let q = quasiinterp::uniform_nb_iqi(4, n, 3).unwrap();
        nus.push(q.nu_bound());
        skel.push(normest::empirical_norm_skeleton(&q, &opts).unwrap().value);
        kern.push(normest::empirical_norm_integral(&q, &opts).unwrap().value);
    }
    let secs = t.elapsed().as_secs_f64();
    let nu_ok = nus.iter().zip(nu_target).all(|(a, b)| (a - b).abs() <= 1e-12);
    let norm_ok = skel.iter().zip(norm_target).all(|(a, b)| (a - b).abs() <= 0.01);
    let ordered = kern.iter().zip(&skel).all(|(k, s)| *k <= s + 1e-9);
    assert!(report(
        "cardinal iQI nu and norm",
        nu_ok && norm_ok && ordered && secs < 60.0,
        &format!(
            "nu={nus:.4?} node-weight norm={skel:.4?} kernel norm={kern:.4?} time={secs:.1}s"
        )
    ));
}

#[test]
fn box_spline_nu_and_zp_norm() {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for mesh in [BoxMesh::ThreeDirection, BoxMesh::FourDirection] {
        for s in 1..=3 {
            let c = bivariate::nb_box_coeffs(mesh, s).unwrap();
            worst = worst.max((c.nu - (1.0 + 1.0 / (s * s) as f64)).abs());
        }
    }
    let target = [1.5, 1.25, 1.111];
    let got: Vec<f64> = (1..=3)
        .map(|s| {
            let c = bivariate::nb_box_coeffs(BoxMesh::FourDirection, s).unwrap();
            bivariate::four_direction_norm(&c, 400).unwrap()
        })
        .collect();
    let ok = got.iter().zip(target).all(|(g, p)| (g - p).abs() <= 0.01);
    assert!(report(
        "box-spline nu and four-direction norm",
        worst <= 1e-12 && ok,
        &format!(
            "max|nu-(1+1/s^2)|={worst:.1e} ZP norm={got:.4?} time={:.2}s",
            t.elapsed().as_secs_f64()
        )
    ));
}

#[test]
fn s2_nu_general_bound() {
    let mut violations = 0;
    let mut worst_ratio: f64 = 0.0;
    for m in 2..=8 {
        let bound = ((m + 4) / 2) as f64;
        for seed in 0..1000 {
            let q = quasiinterp::s2(&random_knots(m, seed)).unwrap();
            let nu = q.nu_bound();
            worst_ratio = worst_ratio.max(nu / bound);
            if nu > bound + 1e-12 {
                violations += 1;
            }
        }
    }
    assert!(report(
        "S2 nu <= floor((m+4)/2), m=2..8",
        violations == 0,
        &format!("violations={violations}/7000 max nu/bound={worst_ratio:.4}")
    ));
}

/// Literal reading of the quadratic clause: ν itself at most 2.5.
#[test]
fn s2_quadratic_nu_at_most_two_and_half() {
    let mut violations = 0;
    let mut worst: f64 = 0.0;
    for seed in 0..1000 {
        let nu = quasiinterp::s2(&random_knots(2, seed)).unwrap().nu_bound();
        worst = worst.max(nu);
        if nu > 2.5 {
            violations += 1;
        }
    }
    assert!(report(
        "S2 quadratic nu <= 2.5",
        violations == 0,
        &format!("violations={violations}/1000 max nu={worst:.4} (interior nu tends to 3 as h_i dominates)")
    ));
}

#[test]
fn s2_quadratic_norm_at_most_two_and_half() {
    let mut worst: f64 = 0.0;
    for seed in 0..1000 {
        let q = quasiinterp::s2(&random_knots(2, seed)).unwrap();
        worst = worst.max(normest::empirical_norm_discrete(&q, &NormOptions::default()).unwrap().value);
    }
    assert!(report(
        "S2 quadratic empirical norm <= 2.5",
        worst <= 2.5,
        &format!("max over 1000 partitions={worst:.4}")
    ));
}

#[test]
fn s2_quadratic_uniform_norm() {
    let ks = KnotSequence::clamped(2, &partition::uniform(20)).unwrap();
    let q = quasiinterp::s2(&ks).unwrap();
    let opts = NormOptions {
        samples_per_span: 256,
        ..Default::default()
    };
    let v = normest::empirical_norm_discrete(&q, &opts).unwrap().value;
    let target = 305.0 / 207.0;
    assert!(report(
        "S2 quadratic uniform norm = 305/207",
        (v - target).abs() <= 0.005,
        &format!("norm={v:.6} target={target:.6}")
    ));
}

#[test]
fn lp_matches_cardinal_closed_forms() {
    let mut worst: f64 = 0.0;
    for kind in [UniformKind::Discrete, UniformKind::Integral] {
        let c = if kind == UniformKind::Discrete { 1.0 } else { 2.0 };
        for n in 1..=3 {
            let nn = (n * n) as f64;
            let mut oracle = vec![0.0; 2 * n + 1];
            oracle[n] = 1.0 + c / (3.0 * nn);
            oracle[0] = -c / (6.0 * nn);
            oracle[2 * n] = -c / (6.0 * nn);
            let sym = nearbest::solve_symmetric_uniform(4, n, 3, kind).unwrap().stencil();
            let full = nearbest::solve_l1(&NearBestProblem::uniform(4, n, 3, kind).unwrap()).unwrap();
            for (k, o) in oracle.iter().enumerate() {
                worst = worst.max((sym[k] - o).abs()).max((full.weights[k] - o).abs());
            }
        }
    }
    assert!(report(
        "LP reproduces cardinal closed forms",
        worst <= 1e-9,
        &format!("max weight error={worst:.1e}")
    ));
}

#[test]
fn lp_matches_qstar_closed_form() {
    let mut rng = partition::rng(6);
    let mut worst: f64 = 0.0;
    let mut anchors = 0;
    for trial in 0..100 {
        let p = [2, 3, 5][trial % 3];
        let ks = admissible_knots(p, &mut rng);
        for i in p..ks.len() - p {
            let th = |k: usize| ks.greville(k).unwrap();
            let (dm, dp) = (th(i) - th(i - p), th(i + p) - th(i));
            let lam = lambda_oracle(ks.window(i).unwrap());
            let mut oracle = vec![0.0; 2 * p + 1];
            oracle[0] = -lam / (dm * (dm + dp));
            oracle[p] = 1.0 + lam / (dm * dp);
            oracle[2 * p] = -lam / (dp * (dm + dp));
            let sol = quasiinterp::near_best_anchor(&ks, i, p, 2).unwrap();
            assert!(sol.centred);
            for (w, o) in sol.functional.weights().iter().zip(&oracle) {
                worst = worst.max((w - o).abs());
            }
            anchors += 1;
        }
    }
    assert!(report(
        "LP reproduces the quadratic near-best closed form",
        worst <= 1e-9,
        &format!("{anchors} anchors on 100 admissible partitions, max error={worst:.1e}")
    ));
}

#[test]
fn qstar_nu_at_most_three() {
    let mut rng = partition::rng(7);
    let mut violations = 0;
    let mut worst = [0.0f64; 3];
    for (k, p) in [2, 3, 5].into_iter().enumerate() {
        for _ in 0..1000 {
            let q = quasiinterp::nb_dqi_nonuniform(&admissible_knots(p, &mut rng), p).unwrap();
            worst[k] = worst[k].max(q.nu_bound());
            if q.nu_bound() > 3.0 {
                violations += 1;
            }
        }
    }
    assert!(report(
        "quadratic near-best nu <= 3, p=2,3,5",
        violations == 0,
        &format!("violations={violations}/3000 max nu by p={worst:.4?}")
    ));
}

type Mono = Box<dyn Fn(f64) -> f64>;

/// Fifty monotone functions on `[0, 1]`: ten shapes, five parameters,
/// alternating sense.
fn monotone_functions() -> Vec<(Mono, f64)> {
    let mut out: Vec<(Mono, f64)> = Vec::new();
    for k in 0..5 {
        let a = 1.0 + 4.0 * k as f64;
        let c = 0.1 + 0.2 * k as f64;
        let shapes: [Mono; 10] = [
            Box::new(move |x| (a * (x - c)).tanh()),
            Box::new(move |x| (a * x).exp()),
            Box::new(move |x| (a * (x - c)).atan()),
            Box::new(move |x| (x - c).powi(3)),
            Box::new(move |x| (x + 1e-3 * a).sqrt()),
            Box::new(move |x| (x - c).max(0.0).powi(2)),
            Box::new(move |x| (1.0 + a * x).ln()),
            Box::new(move |x| x.powf(a)),
            Box::new(move |x| if x < c { 0.0 } else { 1.0 }),
            Box::new(move |x| x + 0.3 * (a * x).sin() / a),
        ];
        for (s, f) in shapes.into_iter().enumerate() {
            let sense = if (s + k) % 2 == 0 { 1.0 } else { -1.0 };
            out.push((Box::new(move |x| sense * f(x)), sense));
        }
    }
    out
}

#[test]
fn gs1_preserves_monotonicity() {
    let funcs = monotone_functions();
    assert_eq!(funcs.len(), 50);
    let mut violations = 0;
    let mut checked = 0;
    for m in 2..=4 {
        for seed in 0..100 {
            let q = quasiinterp::gs1(&random_knots(m, 1000 + seed)).unwrap();
            for (f, sense) in &funcs {
                let c = q.coefficients(f).unwrap();
                let scale = c.iter().fold(1.0f64, |s, v| s.max(v.abs()));
                if c.windows(2).any(|w| sense * (w[1] - w[0]) < -1e-12 * scale) {
                    violations += 1;
                }
                checked += 1;
            }
        }
    }
    assert!(report(
        "G1 coefficients preserve monotonicity",
        violations == 0,
        &format!("violations={violations}/{checked}")
    ));
}

#[test]
fn gs2_nu_at_most_five() {
    let mut worst = Vec::new();
    let mut violations = 0;
    for m in 2..=6 {
        let mut w: f64 = 0.0;
        for seed in 0..1000 {
            let nu = quasiinterp::gs2(&random_knots(m, 2000 + seed)).unwrap().nu_bound();
            w = w.max(nu);
            if nu > 5.0 {
                violations += 1;
            }
        }
        worst.push(w);
    }
    assert!(report(
        "G2 nu <= 5, m=2..6",
        violations == 0,
        &format!("violations={violations}/5000 max nu by m={worst:.3?}")
    ));
}

#[test]
fn gs2_quadratic_closed_form_matches_solver() {
    let mut worst: f64 = 0.0;
    for seed in 0..1000 {
        let ks = random_knots(2, 2000 + seed);
        let u = ks.knots();
        for i in 1..ks.len() - 1 {
            let h = |d: usize| u[i + 1 + d] - u[i + d];
            let (hp, h0, hn) = (h(0), h(1), h(2));
            let a = -h0 * h0 / ((hp + h0) * (hp + h0 + hn));
            let c = -h0 * h0 / ((h0 + hn) * (hp + h0 + hn));
            let w = quasiinterp::gs2_weights(&ks, i).unwrap();
            for (x, y) in w.iter().zip([a, 1.0 - a - c, c]) {
                worst = worst.max((x - y).abs());
            }
        }
    }
    assert!(report(
        "G2 quadratic closed form matches solver",
        worst <= 1e-12,
        &format!("max error={worst:.1e}")
    ));
}

#[test]
fn gs2_empirical_norm_at_most_five() {
    let opts = NormOptions {
        samples_per_span: 16,
        ..Default::default()
    };
    let mut worst = Vec::new();
    for m in 2..=6 {
        let mut w: f64 = 0.0;
        for seed in 0..20 {
            let q = quasiinterp::gs2(&random_knots(m, 2000 + seed)).unwrap();
            w = w.max(normest::empirical_norm_integral(&q, &opts).unwrap().value);
        }
        worst.push(w);
    }
    assert!(report(
        "G2 empirical norm <= 5, m=2..6",
        worst.iter().all(|&w| w <= 5.0),
        &format!("max over 20 partitions per m={worst:.3?}")
    ));
}

#[test]
fn crisscross_weight_bounds() {
    let mut worst = [0.0f64; 4];
    for seed in 0..1000 {
        let mesh = random_mesh(3000 + seed, 1e6);
        let t2 = bivariate::crisscross_t2(&mesh).unwrap();
        let g2 = bivariate::crisscross_g2(&mesh).unwrap();
        worst[0] = worst[0].max(t2.max_directional());
        worst[1] = worst[1].max(g2.max_directional());
        worst[2] = worst[2].max(t2.nu_bound());
        worst[3] = worst[3].max(g2.nu_bound());
    }
    let bounds_ok = worst[0] <= 0.75 && worst[1] <= 1.0 && worst[2] <= 7.0 && worst[3] <= 9.0;

    let mesh = TensorMesh::uniform(6, 6).unwrap();
    let mut uniform_err: f64 = 0.0;
    for (fam, dir, centre, nu) in [
        (CrissCross::T2, -3.0 / 20.0, 8.0 / 5.0, 11.0 / 5.0),
        (CrissCross::G2, -1.0 / 6.0, 5.0 / 3.0, 7.0 / 3.0),
    ] {
        let f = bivariate::crisscross(fam, &mesh).unwrap();
        for c in f.cells.iter().filter(|c| (2..=5).contains(&c.i) && (2..=5).contains(&c.j)) {
            let w = c.weights;
            for d in [w.west, w.east, w.south, w.north] {
                uniform_err = uniform_err.max((d - dir).abs());
            }
            uniform_err = uniform_err.max((w.center - centre).abs()).max((w.nu() - nu).abs());
        }
    }
    assert!(report(
        "criss-cross weight and nu bounds",
        bounds_ok && uniform_err <= 1e-12,
        &format!(
            "max |T2 dir|={:.4} |G2 dir|={:.4} nu(T2)={:.4} nu(G2)={:.4}; uniform error={uniform_err:.1e}",
            worst[0], worst[1], worst[2], worst[3]
        )
    ));
}

fn exact(q: &QuasiInterpolant) -> bool {
    q.is_exact_on(q.exactness_degree()).unwrap().exact
}

#[test]
fn exactness_suite() {
    let mut failures = Vec::new();
    let mut checks = 0;
    let mut rng = partition::rng(11);
    for seed in 0..200 {
        for m in 2..=6 {
            let ks = random_knots(m, 4000 + seed);
            let ops = [
                ("S1", quasiinterp::schoenberg(&ks)),
                ("S2", quasiinterp::s2(&ks)),
                ("G1", quasiinterp::gs1(&ks)),
                ("G2", quasiinterp::gs2(&ks)),
                ("NB(p=2,q=2)", quasiinterp::near_best_dqi(&ks, 2, 2)),
                ("NB(p=m,q=m)", quasiinterp::near_best_dqi(&ks, m, m)),
            ];
            for (name, q) in ops {
                checks += 1;
                if !exact(&q.unwrap()) {
                    failures.push(format!("{name} m={m} seed={seed}"));
                }
            }
        }
        let p = [2, 3, 5][seed as usize % 3];
        checks += 1;
        if !exact(&quasiinterp::nb_dqi_nonuniform(&admissible_knots(p, &mut rng), p).unwrap()) {
            failures.push(format!("Q*(p={p}) seed={seed}"));
        }
        let mesh = random_mesh(5000 + seed, 1e6);
        for fam in [CrissCross::S1, CrissCross::T1, CrissCross::G1, CrissCross::T2, CrissCross::G2] {
            checks += 1;
            let f = bivariate::crisscross(fam, &mesh).unwrap();
            if !f.is_exact_on(fam.exactness_degree()) {
                failures.push(format!("{fam} seed={seed}"));
            }
        }
    }
    for (order, n) in [(4, 1), (4, 2), (4, 3)] {
        for q in [
            quasiinterp::uniform_nb_dqi(order, n, 3).unwrap(),
            quasiinterp::uniform_nb_iqi(order, n, 3).unwrap(),
        ] {
            checks += 1;
            if !exact(&q) {
                failures.push(format!("{}", q.family()));
            }
        }
    }

    // e_2 residuals about the Greville point: S1 gives λ_j, G1 gives 2m/(m+1) λ_j.
    let mut worst_rel: f64 = 0.0;
    for seed in 0..200 {
        for m in 2..=6 {
            let ks = random_knots(m, 4000 + seed);
            let s1 = quasiinterp::schoenberg(&ks).unwrap();
            let g1 = quasiinterp::gs1(&ks).unwrap();
            let factor = 2.0 * m as f64 / (m as f64 + 1.0);
            for j in 0..ks.len() {
                let th = ks.greville(j).unwrap();
                let lam = lambda_oracle(ks.window(j).unwrap());
                let target = ks.symmetric_coeff_shifted(j, 2, th, 1.0).unwrap();
                let r1 = s1.functionals()[j].apply_monomial_shifted(2, th, 1.0) - target;
                let r2 = g1.functionals()[j].apply_monomial_shifted(2, th, 1.0) - target;
                let scale = |v: f64| v.abs().max(f64::MIN_POSITIVE);
                worst_rel = worst_rel
                    .max((r1 - lam).abs() / scale(lam))
                    .max((r2 - factor * lam).abs() / scale(factor * lam));
            }
        }
    }
    let ok = failures.is_empty() && worst_rel <= 1e-12;
    assert!(report(
        "exactness suite",
        ok,
        &format!(
            "{checks} operator checks, failures={:?}; max relative e2-residual error={worst_rel:.1e}",
            failures.iter().take(5).collect::<Vec<_>>()
        )
    ));
}

#[test]
fn quadrature_exactness_and_convergence() {
    let mut rng = partition::rng(12);
    let mut transfer_failures = Vec::new();
    for seed in 0..100 {
        for m in 2..=3 {
            let ks = random_knots(m, 6000 + seed);
            let ops = [
                quasiinterp::schoenberg(&ks).unwrap(),
                quasiinterp::s2(&ks).unwrap(),
                quasiinterp::near_best_dqi(&ks, 2, 2).unwrap(),
                quasiinterp::near_best_dqi(&ks, 3, m).unwrap(),
            ];
            for q in ops {
                let rule = quadrature::qi_to_quadrature(&q).unwrap();
                let d = quadrature::exactness_degree(&rule, q.exactness_degree() + 3);
                if d.is_none_or(|d| d < q.exactness_degree()) {
                    transfer_failures.push(format!("{} seed={seed}", q.family()));
                }
            }
        }
        let p = [2, 3, 5][seed as usize % 3];
        let q = quasiinterp::nb_dqi_nonuniform(&admissible_knots(p, &mut rng), p).unwrap();
        let rule = quadrature::qi_to_quadrature(&q).unwrap();
        if quadrature::exactness_degree(&rule, 5).is_none_or(|d| d < 2) {
            transfer_failures.push(format!("{} seed={seed}", q.family()));
        }
    }
    for n in 1..=3 {
        let q = quasiinterp::uniform_nb_dqi(4, n, 3).unwrap();
        let rule = quadrature::qi_to_quadrature(&q).unwrap();
        if quadrature::exactness_degree(&rule, 6).is_none_or(|d| d < 3) {
            transfer_failures.push(format!("{}", q.family()));
        }
    }

    // Convergence on uniform meshes. The expected rate is d+1 with d the
    // exactness degree the rule actually has; symmetry lifts even q by one.
    type Build = fn(&KnotSequence) -> nbqi::Result<QuasiInterpolant>;
    let cases: [(&str, usize, Build); 6] = [
        ("S1", 2, quasiinterp::schoenberg),
        ("S1", 3, quasiinterp::schoenberg),
        ("S2", 2, quasiinterp::s2),
        ("S2", 3, quasiinterp::s2),
        ("Q*(p=2)", 2, |ks| quasiinterp::nb_dqi_nonuniform(ks, 2)),
        ("NB(p=3,q=3)", 3, |ks| quasiinterp::near_best_dqi(ks, 3, 3)),
    ];
    let exact_int = std::f64::consts::E - 1.0;
    let mut slope_lines = Vec::new();
    let mut slopes_ok = true;
    for (name, m, build) in cases {
        let make = |n: usize| {
            let ks = KnotSequence::clamped(m, &partition::uniform(n))?;
            quadrature::qi_to_quadrature(&build(&ks)?)
        };
        let spans = [32, 64, 128, 256];
        let d = quadrature::exactness_degree(&make(spans[0]).unwrap(), 8).unwrap();
        let q = build(&KnotSequence::clamped(m, &partition::uniform(16)).unwrap())
            .unwrap()
            .exactness_degree();
        let errs = quadrature::refinement_errors(make, f64::exp, exact_int, &spans).unwrap();
        let rate = -quadrature::loglog_slope(&errs);
        let ok = (rate - (d as f64 + 1.0)).abs() <= 0.25;
        slopes_ok &= ok;
        slope_lines.push(format!("{name} m={m} q={q} d={d} rate={rate:.2}"));
    }
    assert!(report(
        "quadrature exactness transfer and convergence",
        transfer_failures.is_empty() && slopes_ok,
        &format!(
            "transfer failures={:?}; {}",
            transfer_failures.iter().take(5).collect::<Vec<_>>(),
            slope_lines.join(", ")
        )
    ));
}
