//! Acceptance suite: one PASS/FAIL line per criterion, each checked against
//! an oracle computed here independently of the library code under test.
//!
//! Criterion 6 is a known failure at its stated tolerance (see the README);
//! the test fails if any other criterion fails or if 6 starts passing.

use std::collections::HashSet;
use std::f64::consts::SQRT_2;
use std::path::Path;
use std::time::Instant;

use displace_cli::config::{AmsGapArgs, ContortionArgs, DepthRootsArgs, MatGeoArgs, PingPongArgs, WordArgs, WordOp};
use displace_cli::config::{Command, CommonArgs, ExperimentConfig, Prop422Args, Prop507Args, Sampler};
use displace_cli::experiments::{prop422, prop507};
use displace_cli::{run, Format};
use displace_core::freewords::{
    ball, cyclic_reduce, gromov_product, gromov_product_e, stable_norm_free, translation_length_free, Word,
};
use displace_core::intmat::IntMatrix;
use displace_core::matgeo::sampling::random_sl;
use displace_core::matgeo::{benoist_gap, cartan_projection_of_power, jordan_projection, RealMatrix};
use displace_core::zlattice::{
    contortion_witness, depth_root_bound, sl_order, unipotence_exponent, zp_conjugation_identity,
    DEFAULT_ROOT_CANDIDATES,
};
use displace_core::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = (bool, String);

fn words(radius: usize) -> Vec<Word> {
    ball(2, radius).unwrap().collect()
}

/// `[g]∞` as the eventual increment `||g³|| − ||g²||`, by plain multiplication.
fn stable_norm_oracle(g: &Word) -> usize {
    let g2 = g.multiply(g).unwrap();
    let g3 = g2.multiply(g).unwrap();
    g3.len() - g2.len()
}

/// ACR straight from the definition: `⟨g, g⁻¹⟩ = (2||g|| − ||g²||)/2 ≤ ||g||/3`.
fn acr_oracle(g: &Word) -> bool {
    let g2 = g.multiply(g).unwrap().len() as i64;
    let n = g.len() as i64;
    3 * (2 * n - g2) <= 2 * n
}

fn criteria_1_to_3() -> [Outcome; 3] {
    let start = Instant::now();
    let params = prop422::Params {
        radius: 12,
        u: "aab".into(),
        v: "bba".into(),
        delta: Rational::from(0),
        alpha_override: None,
    };
    let report = prop422::run(&params).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let s = |k: &str| report.summary_value(k).unwrap().to_string();

    // Independent rescan: α = 3·3 + 100·0, stable norms by multiplication.
    let u = Word::parse("aab", 2).unwrap();
    let v = Word::parse("bba", 2).unwrap();
    let (mut oracle_viol, mut oracle_sel, mut oracle_fals, mut oracle_acr, mut oracle_acr_viol) = (0, 0, 0, 0, 0);
    let mut scanned = 0u64;
    for g in ball(2, 12).unwrap() {
        scanned += 1;
        let gu = g.multiply(&u).unwrap();
        let gv = g.multiply(&v).unwrap();
        let top = stable_norm_oracle(&g).max(stable_norm_oracle(&gu)).max(stable_norm_oracle(&gv));
        if g.len() > 3 * top + 9 {
            oracle_viol += 1;
        }
        if g.len() >= 9 {
            oracle_sel += 1;
            if !(acr_oracle(&g) || acr_oracle(&gu) || acr_oracle(&gv)) {
                oracle_fals += 1;
            }
        }
        if acr_oracle(&g) {
            oracle_acr += 1;
            if 3 * stable_norm_oracle(&g) < g.len() {
                oracle_acr_viol += 1;
            }
        }
    }
    let ball_size = 2 * 3u64.pow(12) - 1;
    let shell_9_12: u64 = (9..=12).map(|k| 4 * 3u64.pow(k - 1)).sum();

    let c1 = scanned == ball_size
        && s("words_scanned") == ball_size.to_string()
        && s("prop422_violations") == "0"
        && oracle_viol == 0
        && s("alpha_used") == "9"
        && elapsed < 120.0;
    let c2 = s("selector_checked") == shell_9_12.to_string()
        && oracle_sel == shell_9_12
        && s("selector_falsified") == "0"
        && oracle_fals == 0;
    let c3 = s("acr_bound_violations") == "0" && oracle_acr_viol == 0 && s("acr_words") == oracle_acr.to_string();
    [
        (c1, format!("{ball_size} words, 0 violations (oracle {oracle_viol}), scan {elapsed:.2}s")),
        (
            c2,
            format!(
                "{shell_9_12} words with 9 ≤ ||g|| ≤ 12, falsified {} (oracle {oracle_fals})",
                s("selector_falsified")
            ),
        ),
        (
            c3,
            format!(
                "{oracle_acr} ACR words, bound violations {} (oracle {oracle_acr_viol})",
                s("acr_bound_violations")
            ),
        ),
    ]
}

fn criterion_4() -> Outcome {
    let b2 = words(2);
    let b3 = words(3);
    let b5 = words(5);
    let mut eq5 = 0u64;
    for g in &b3 {
        for h in &b3 {
            let base = gromov_product_e(g, h).unwrap();
            for u in &b2 {
                let ug = u.multiply(g).unwrap();
                let uh = u.multiply(h).unwrap();
                if gromov_product(&ug, &uh, u).unwrap() != base {
                    eq5 += 1;
                }
            }
        }
    }
    let mut stable = 0u64;
    let mut conj = 0u64;
    for g in &b5 {
        let cyc = cyclic_reduce(g).core.len();
        if translation_length_free(g) != cyc
            || stable_norm_free(g) != cyc
            || (!g.is_identity() && stable_norm_oracle(g) != cyc)
        {
            stable += 1;
        }
        for eta in &b2 {
            if translation_length_free(&eta.conjugate(g).unwrap()) != translation_length_free(g) {
                conj += 1;
            }
        }
    }
    let mut four_point = 0u64;
    for g in &b3 {
        for h in &b3 {
            let gh = gromov_product_e(g, h).unwrap();
            for k in &b3 {
                let gk = gromov_product_e(g, k).unwrap();
                let hk = gromov_product_e(h, k).unwrap();
                if gk < gh.min(hk) {
                    four_point += 1;
                }
            }
        }
    }
    let ok = eq5 == 0 && stable == 0 && conj == 0 && four_point == 0;
    (
        ok,
        format!(
            "failures: base change {eq5}, ℓ = [·]∞ = cyclic length {stable}, conjugation {conj}, four-point {four_point}"
        ),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let report = prop507::run(&prop507::Params {
        n: 3,
        power_max: 1 << 20,
        radius: prop507::DEFAULT_RADIUS,
        max_ball: 2_000_000,
        control: false,
    })
    .unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let c: f64 = report.summary_value("c").unwrap().parse().unwrap();
    let disp = report.column("displacement").unwrap();
    let lower: Vec<f64> =
        report.column("translation_length_lower").unwrap().iter().map(|x| x.parse().unwrap()).collect();
    let gcd = report.column("gcd_minus_identity").unwrap();
    let mut ok = report.rows.len() == 21 && c <= 1.62 && elapsed < 10.0 && report.passed();
    // Oracle: γ^p = E₁₃(p), so gcd(γ^p − I) = p and the bound is ln p / ln c.
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    for j in 0..=20u32 {
        let p = 1u64 << j;
        let expected = (p as f64).ln() / phi.ln();
        ok &= disp[j as usize] == "0";
        ok &= gcd[j as usize] == p.to_string();
        ok &= (lower[j as usize] - expected).abs() <= 1e-9 * expected.max(1.0);
        if j > 0 {
            ok &= lower[j as usize] > lower[j as usize - 1];
        }
    }
    let last = *lower.last().unwrap();
    ok &= last > 10.0;
    (
        ok,
        format!("21 powers, displacement 0, lower bound 0 → {last:.3} strictly increasing, c = {c:.11}, {elapsed:.2}s"),
    )
}

/// Returns the outcome at the stated tolerance plus two informational lines.
fn criterion_6() -> (Outcome, Vec<Outcome>) {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let gs: Vec<RealMatrix> = (0..100).map(|_| random_sl(3, 1.0, &mut rng)).collect();
    let deviation = |g: &RealMatrix, m: u64| -> f64 {
        let mu = cartan_projection_of_power(g, m).unwrap();
        let lambda = jordan_projection(g).unwrap();
        mu.values().iter().zip(lambda.values()).map(|(a, b)| (a / m as f64 - b).powi(2)).sum::<f64>().sqrt()
    };
    let at_1024: Vec<f64> = gs.iter().map(|g| deviation(g, 1 << 10)).collect();
    let fails_1024 = at_1024.iter().filter(|&&d| d > 1e-3).count();
    let worst_1024 = at_1024.iter().copied().fold(0.0, f64::max);
    let at_2_20: Vec<f64> = gs.iter().map(|g| deviation(g, 1 << 20)).collect();
    let fails_2_20 = at_2_20.iter().filter(|&&d| d > 1e-3).count();
    // The deviation decays like C(g)/m, so m·deviation stays of order one.
    let scaled_max = at_2_20.iter().map(|d| d * (1 << 20) as f64).fold(0.0, f64::max);

    let diag_gap = [
        RealMatrix::diagonal(&[2.0, 0.5]).unwrap(),
        RealMatrix::diagonal(&[10.0, 1.0, 0.1]).unwrap(),
        RealMatrix::diagonal(&[0.25, 8.0, 0.5]).unwrap(),
        RealMatrix::diagonal(&[3.0, 1.0 / 3.0, 5.0, 0.2]).unwrap(),
    ]
    .iter()
    .map(|g| benoist_gap(g).unwrap())
    .fold(0.0, f64::max);
    let unipotent = RealMatrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap();
    let golden = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    let parabolic_err = (benoist_gap(&unipotent).unwrap() - SQRT_2 * golden).abs();

    let strict = (
        fails_1024 == 0 && diag_gap <= 1e-10 && parabolic_err <= 1e-8,
        format!("{fails_1024}/100 random g exceed 1e-3 at m = 2^10 (worst {worst_1024:.2e})"),
    );
    let extra = vec![
        (fails_2_20 == 0, format!("m = 2^20: {fails_2_20}/100 exceed 1e-3; max m·|μ(g^m)/m − λ(g)| = {scaled_max:.2}")),
        (
            diag_gap <= 1e-10 && parabolic_err <= 1e-8,
            format!("diagonal gap {diag_gap:.1e}; [[1,1],[0,1]] gap − √2·ln φ = {parabolic_err:.1e}"),
        ),
    ];
    (strict, extra)
}

fn naive_totient(m: u64) -> u64 {
    (1..=m).filter(|k| k.gcd(&m) == 1).count() as u64
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let a = IntMatrix::from_i64(&[[2, 1], [1, 1]]).unwrap();
    let cert = depth_root_bound(&a, None, DEFAULT_ROOT_CANDIDATES).unwrap();
    let mut found = 0;
    for e in box_tuples(4) {
        if e[0] * e[3] - e[1] * e[2] != 1 {
            continue;
        }
        let b = IntMatrix::from_i64(&[[e[0], e[1]], [e[2], e[3]]]).unwrap();
        for k in 2..=3 {
            if b.pow(k) == a {
                found += 1;
            }
        }
    }
    let lcm_oracle = |n: u64| (1..=2 * n * n).filter(|&m| naive_totient(m) <= n).fold(1u64, |acc, m| acc.lcm(&m));
    let exps = [(2, unipotence_exponent(2)), (3, unipotence_exponent(3)), (4, unipotence_exponent(4))];
    let exps_ok = exps.iter().all(|&(n, e)| e == lcm_oracle(n as u64)) && exps.map(|x| x.1) == [12, 12, 120];
    let elapsed = start.elapsed().as_secs_f64();
    let ok = cert.depth == 2
        && cert.search.roots.is_empty()
        && cert.search.box_bound >= 4
        && *cert.search.exponents.end() >= 3
        && found == 0
        && exps_ok
        && elapsed < 30.0;
    (
        ok,
        format!(
            "depth {}, K1 {}, box {} with k in {:?}: {} roots; naive search over SL(2, Z) with |b| ≤ 4: {found}; M = 12, 12, 120; {elapsed:.2}s",
            cert.depth,
            cert.k1,
            cert.search.box_bound,
            cert.search.exponents,
            cert.search.roots.len()
        ),
    )
}

/// All 4-tuples with entries in `[-b, b]`.
fn box_tuples(b: i64) -> Vec<[i64; 4]> {
    let r: Vec<i64> = (-b..=b).collect();
    let mut out = Vec::new();
    for &x in &r {
        for &y in &r {
            for &z in &r {
                for &w in &r {
                    out.push([x, y, z, w]);
                }
            }
        }
    }
    out
}

/// `|SL(n, F_p)|` by counting all matrices with determinant 1 mod p.
fn count_sl(n: usize, p: i64) -> u64 {
    let cells = n * n;
    let total = (p as u64).pow(cells as u32);
    let mut count = 0;
    for code in 0..total {
        let mut c = code;
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..cells {
            rows[i / n][i % n] = (c % p as u64) as i64;
            c /= p as u64;
        }
        let m = IntMatrix::from_i64(&rows).unwrap();
        if m.det().mod_floor(&BigInt::from(p)) == BigInt::from(1) {
            count += 1;
        }
    }
    count
}

fn criterion_8() -> Outcome {
    let g = IntMatrix::elementary(2, 1, 2, 1);
    let w = contortion_witness(&g, std::slice::from_ref(&g), 1000).unwrap();
    let mut g6 = IntMatrix::identity(2);
    for _ in 0..6 {
        g6 = &g6 * &g;
    }
    let g6_mod2_trivial = g6
        .entries()
        .iter()
        .zip(IntMatrix::identity(2).entries())
        .all(|(a, b)| (a - b).is_multiple_of(&BigInt::from(2)));
    let g_mod2_trivial =
        g.entries().iter().zip(IntMatrix::identity(2).entries()).all(|(a, b)| (a - b).is_multiple_of(&BigInt::from(2)));
    let orders = [(2, 2, 6), (2, 3, 24), (3, 2, 168)];
    let orders_ok = orders
        .iter()
        .all(|&(n, p, expected)| count_sl(n, p) == expected && sl_order(n, p as u64) == BigInt::from(expected));
    let ok = w.modulus == 2
        && w.k == BigInt::from(6)
        && w.gamma_k_mod.is_identity()
        && g6_mod2_trivial
        && !g_mod2_trivial
        && orders_ok;
    (ok, format!("m = {}, k = {}, γ⁶ ≡ I mod 2, E₁₂(1) ≢ I mod 2; |SL| = 6, 24, 168 by enumeration", w.modulus, w.k))
}

fn criterion_9() -> Outcome {
    let ts = [(1, 1), (3, 1), (1, 2), (125, 1)];
    let mut ok = true;
    for (n, d) in ts {
        let t = BigRational::new(n.into(), d.into());
        let c = zp_conjugation_identity(&t).unwrap();
        // diag(t, 1/t)·[[1,1],[0,1]]·diag(1/t, t) entrywise: [[1, t·1·t], [0, 1]].
        let one = BigRational::from_integer(1.into());
        let zero = BigRational::from_integer(0.into());
        let expected = [[one.clone(), &t * &t], [zero, one]];
        ok &= c.verified && c.result == expected;
    }
    (ok, "u(t²) exactly for t = 1, 3, 1/2, 125".into())
}

fn cfg(command: Command, common: CommonArgs) -> ExperimentConfig {
    ExperimentConfig { common, command }
}

fn criterion_10(matrix_file: &Path) -> Outcome {
    let seeded = CommonArgs { seed: Some(42), ..Default::default() };
    let radius8 = CommonArgs { radius: Some(8), ..Default::default() };
    let configs = vec![
        cfg(Command::Prop422(Prop422Args { u: "aab".into(), v: "bba".into(), alpha_override: None }), radius8),
        cfg(Command::Prop507(Prop507Args { n: 3, power_max: 1 << 20, control: false }), CommonArgs::default()),
        cfg(Command::Prop507(Prop507Args { n: 3, power_max: 1 << 10, control: true }), CommonArgs::default()),
        cfg(
            Command::AmsGap(AmsGapArgs {
                dimension: 2,
                samples: 1000,
                r: 0.5,
                epsilon: 0.05,
                sampler: Sampler::Kak,
                max_log: 5.0,
                grid: 512,
                gap_bound: None,
            }),
            seeded,
        ),
        cfg(
            Command::DepthRoots(DepthRootsArgs {
                matrix_file: matrix_file.to_path_buf(),
                max_candidates: DEFAULT_ROOT_CANDIDATES,
            }),
            CommonArgs::default(),
        ),
        cfg(
            Command::Pingpong(PingPongArgs { u: None, v: None, find: Some("ab".into()), a: "b".into(), n_max: 16 }),
            CommonArgs::default(),
        ),
        cfg(
            Command::Contortion(ContortionArgs {
                gamma: "[[1,1],[0,1]]".into(),
                reps: "[[[1,1],[0,1]]]".into(),
                prime_cap: 100,
            }),
            CommonArgs::default(),
        ),
        cfg(Command::Word(WordArgs { op: WordOp::Cyclic, args: vec!["bAbaB".into()], rank: 2 }), CommonArgs::default()),
        cfg(
            Command::Matgeo(MatGeoArgs {
                matrix: "[[2,1],[1,1]]".into(),
                power: Some(1024),
                r: Some(0.5),
                epsilon: Some(0.05),
                grid: 512,
            }),
            CommonArgs::default(),
        ),
    ];
    let mut distinct = HashSet::new();
    let mut ok = true;
    for c in &configs {
        for format in [Format::Report, Format::Csv] {
            let first = run(c).unwrap().render(format).unwrap();
            let second = run(c).unwrap().render(format).unwrap();
            ok &= first == second;
            distinct.insert(first);
        }
    }
    // Parallel scans must not depend on the thread count.
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let serial = single.install(|| run(&configs[0]).unwrap().render(Format::Csv).unwrap());
    ok &= serial == run(&configs[0]).unwrap().render(Format::Csv).unwrap();
    (
        ok,
        format!(
            "{} experiment configurations, report and CSV byte-identical across re-runs and thread counts",
            configs.len()
        ),
    )
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let matrix_file = dir.path().join("matrices.txt");
    std::fs::write(&matrix_file, "# depth-roots inputs\n[[2,1],[1,1]]\n[[1,0],[0,1]]\n[[1,1],[0,1]]\n[[5,3],[3,2]]\n")
        .unwrap();

    let mut lines: Vec<(String, Outcome)> = Vec::new();
    for (i, o) in criteria_1_to_3().into_iter().enumerate() {
        lines.push(((i + 1).to_string(), o));
    }
    lines.push(("4".into(), criterion_4()));
    lines.push(("5".into(), criterion_5()));
    let (six, six_extra) = criterion_6();
    lines.push(("6".into(), six));
    for (i, o) in six_extra.into_iter().enumerate() {
        lines.push((format!("6.{}", i + 1), o));
    }
    lines.push(("7".into(), criterion_7()));
    lines.push(("8".into(), criterion_8()));
    lines.push(("9".into(), criterion_9()));
    lines.push(("10".into(), criterion_10(&matrix_file)));

    let known_failures = ["6"];
    let mut unexpected = Vec::new();
    for (id, (passed, detail)) in &lines {
        println!("{} criterion {id}: {detail}", if *passed { "PASS" } else { "FAIL" });
        if *passed == known_failures.contains(&id.as_str()) {
            unexpected.push(id.clone());
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
