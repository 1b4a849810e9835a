//! Acceptance suite: one PASS/FAIL line per criterion.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use iqp_core::cheat::{
    bias_from_f, cheat_sample, check_bias_one_implication, classical_bias_exact,
    f_second_derivative, f_second_derivative_closed,
};
use iqp_core::codes::qr_code;
use iqp_core::gf2::{BitMatrix, BitVector};
use iqp_core::protocol::{
    build_challenge, cheat_prove, default_params, honest_prove, verify, Decision,
};
use iqp_core::reductions::{
    simulate_graphprogram, simulate_znetwork, xprogram_to_graphprogram, xprogram_to_znetwork,
    znetwork_to_xprogram,
};
use iqp_core::simulator::{
    distribution_fourier, distribution_pathsum, exact_bias, OutputDistribution,
};
use iqp_core::xprogram::{Action, ConstantActionProgram, Element, XProgram};
use iqp_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cos2_pi8() -> f64 {
    (PI / 8.0).cos().powi(2)
}

/// The bare QR code as a program, with the direction that selects every row.
fn pure_qr(q: u64) -> (ConstantActionProgram, BitVector) {
    let g = qr_code(q).unwrap().generator().clone();
    let s = g
        .solve(&BitVector::ones(g.row_count()))
        .expect("all-ones word is in the code");
    (ConstantActionProgram::new(g, Action::PI_OVER_8), s)
}

fn instances() -> Vec<(String, ConstantActionProgram, BitVector)> {
    let mut out = Vec::new();
    for q in [7u64, 23, 31] {
        let (prog, s) = pure_qr(q);
        out.push((format!("qr{q}"), prog, s));
        for seed in 0..10 {
            let (ch, secret) = build_challenge(q, q as usize, seed).unwrap();
            out.push((format!("q{q}/seed{seed}"), ch.program(), secret.s));
        }
    }
    out
}

fn random_program<R: Rng>(rng: &mut R, n: usize, k: usize, actions: &[Action]) -> XProgram {
    let elements = (0..k)
        .map(|_| Element {
            theta: actions[rng.gen_range(0..actions.len())],
            row: BitVector::random(n, rng),
        })
        .collect();
    XProgram::new(n, elements).unwrap()
}

fn random_matrix<R: Rng>(rng: &mut R, max_n: usize, max_k: usize) -> BitMatrix {
    let n = rng.gen_range(1..=max_n);
    let k = rng.gen_range(0..=max_k);
    BitMatrix::random(k, n, rng)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (name, prog, s) in instances() {
        let b = exact_bias(&prog, &s).map_err(|e| format!("{name}: {e}"))?;
        worst = worst.max((b - cos2_pi8()).abs());
        ensure((b - cos2_pi8()).abs() < 1e-9, || {
            format!("{name}: bias {b}")
        })?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(30), || format!("took {t:?}"))?;
    Ok(format!("33 instances, max deviation {worst:.1e}, {t:.2?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for (name, prog, s) in instances() {
        let c = classical_bias_exact(&prog.matrix, &s);
        ensure(c == 0.75, || format!("{name}: classical bias {c}"))?;
        let set = cheat_sample(&prog.matrix, 40_000, &mut rng);
        let emp = set.empirical_bias(&s);
        worst = worst.max((emp - 0.75).abs());
        ensure((emp - 0.75).abs() <= 0.01, || {
            format!("{name}: empirical {emp}")
        })?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(30), || format!("took {t:?}"))?;
    Ok(format!(
        "exactly 0.75 on 33 instances, empirical max deviation {worst:.4}, {t:.2?}"
    ))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let actions: Vec<Action> = [(1, 8), (1, 3), (2, 5), (1, 2), (3, 4), (1, 1), (7, 12)]
        .iter()
        .map(|&(a, b)| Action::new(a, b).unwrap())
        .collect();
    let mut worst_tv = 0.0f64;
    for i in 0..60 {
        let n = rng.gen_range(1..=6);
        let k = rng.gen_range(0..=8);
        let prog = random_program(&mut rng, n, k, &actions);
        let tv = distribution_fourier(&prog)
            .unwrap()
            .total_variation(&distribution_pathsum(&prog).unwrap());
        worst_tv = worst_tv.max(tv);
        ensure(tv < 1e-10, || format!("program {i}: TV {tv:e}"))?;
    }
    let mut worst_bias = 0.0f64;
    let mut directions = 0;
    for i in 0..20 {
        let n = rng.gen_range(1..=8);
        let k = rng.gen_range(1..=12);
        let theta = actions[rng.gen_range(0..actions.len())];
        let prog = ConstantActionProgram::new(BitMatrix::random(k, n, &mut rng), theta);
        let dist = distribution_fourier(&prog.to_xprogram()).unwrap();
        for idx in 0..(1u64 << n) {
            let s = BitVector::from_index(idx, n);
            let d = (exact_bias(&prog, &s).unwrap() - dist.bias(&s)).abs();
            worst_bias = worst_bias.max(d);
            directions += 1;
            ensure(d < 1e-10, || format!("program {i}, s={s}: gap {d:e}"))?;
        }
    }
    Ok(format!(
        "60 programs max TV {worst_tv:.1e}; {directions} directions max bias gap {worst_bias:.1e}"
    ))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    for i in 0..20 {
        let p = random_matrix(&mut rng, 8, 12);
        let n = p.cols();
        let pi = ConstantActionProgram::new(p.clone(), Action::new(1, 1).unwrap());
        let d = distribution_fourier(&pi.to_xprogram()).unwrap();
        let expect = OutputDistribution::point_mass(n, &BitVector::zeros(n));
        ensure(d.total_variation(&expect) < 1e-12, || {
            format!("θ=π program {i}")
        })?;
        let half = ConstantActionProgram::new(p.clone(), Action::new(1, 2).unwrap());
        let d = distribution_fourier(&half.to_xprogram()).unwrap();
        let expect = OutputDistribution::point_mass(n, &p.row_sum());
        ensure(d.total_variation(&expect) < 1e-12, || {
            format!("θ=π/2 program {i}")
        })?;
    }
    Ok("20 programs at θ=π and θ=π/2".into())
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let p = random_matrix(&mut rng, 8, 16);
        let prog = ConstantActionProgram::new(p, Action::PI_OVER_8).to_xprogram();
        let d = distribution_fourier(&prog).unwrap();
        let gap = (d.collision_entropy() - d.collision_entropy_via_bias()).abs();
        worst = worst.max(gap);
        ensure(gap < 1e-10, || format!("program {i}: gap {gap:e}"))?;
    }
    for i in 0..5 {
        let p = random_matrix(&mut rng, 8, 16);
        for theta in [Action::new(1, 1).unwrap(), Action::new(1, 2).unwrap()] {
            let d =
                distribution_fourier(&ConstantActionProgram::new(p.clone(), theta).to_xprogram())
                    .unwrap();
            let (a, b) = (d.collision_entropy(), d.collision_entropy_via_bias());
            ensure(a == 0.0 && b == 0.0, || format!("point mass {i}: {a} {b}"))?;
        }
    }
    Ok(format!(
        "20 programs max gap {worst:.1e}; point masses exactly 0"
    ))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for i in 0..30 {
        let p = random_matrix(&mut rng, 8, 14);
        let prog = ConstantActionProgram::new(p.clone(), Action::PI_OVER_8);
        for idx in 0..(1u64 << p.cols()) {
            let s = BitVector::from_index(idx, p.cols());
            let gap = (bias_from_f(&p, &s).unwrap() - exact_bias(&prog, &s).unwrap()).abs();
            worst = worst.max(gap);
            ensure(gap < 1e-10, || format!("program {i}, s={s}: gap {gap:e}"))?;
        }
    }
    let p = BitMatrix::random(12, 6, &mut rng);
    for _ in 0..1000 {
        let [a, d, e] = [0; 3].map(|_| BitVector::random(6, &mut rng));
        let (x, y) = (
            f_second_derivative(&p, &a, &d, &e),
            f_second_derivative_closed(&p, &a, &d, &e),
        );
        ensure(x == y, || format!("a={a} d={d} e={e}: {x} vs {y}"))?;
    }
    Ok(format!(
        "30 programs all directions max gap {worst:.1e}; 1000 derivative triples agree"
    ))
}

fn criterion_7() -> Outcome {
    let mut programs = 0usize;
    let mut checks = 0usize;
    let mut violations = 0usize;
    let mut converse: Option<String> = None;
    for n in 1..=4usize {
        // multisets of up to six rows, as non-decreasing index sequences
        let mut stack: Vec<Vec<u64>> = vec![vec![]];
        while let Some(rows) = stack.pop() {
            programs += 1;
            let p = BitMatrix::from_rows(
                n,
                rows.iter().map(|&r| BitVector::from_index(r, n)).collect(),
            )
            .unwrap();
            for s in 0..(1u64 << n) {
                let s = BitVector::from_index(s, n);
                let (q, c) = check_bias_one_implication(&p, &s).unwrap();
                checks += 1;
                if q && !c {
                    violations += 1;
                }
                if !q && c && converse.is_none() {
                    let ps = iqp_core::xprogram::submatrix_ps(&p, &s);
                    let mut sorted = ps.rows().to_vec();
                    sorted.sort();
                    if sorted.windows(2).any(|w| w[0] == w[1]) {
                        let rows: Vec<String> = p.rows().iter().map(|r| r.to_string()).collect();
                        converse = Some(format!("P=[{}] s={s}", rows.join(",")));
                    }
                }
            }
            if rows.len() < 6 {
                let start = rows.last().copied().unwrap_or(0);
                for r in start..(1u64 << n) {
                    let mut next = rows.clone();
                    next.push(r);
                    stack.push(next);
                }
            }
        }
    }
    ensure(violations == 0, || format!("{violations} violations"))?;
    let example = converse.ok_or("no converse counterexample with repeated rows")?;
    Ok(format!(
        "{programs} programs, {checks} (P,s) pairs, 0 violations; converse e.g. {example}"
    ))
}

fn criterion_8() -> Outcome {
    let params = default_params(1e-3).unwrap();
    let (mut honest_ok, mut cheat_ok) = (0, 0);
    for run in 0..100u64 {
        let (ch, secret) = build_challenge(23, 23, 1000 + run).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(run);
        let h = honest_prove(&ch, 2000, &mut rng).unwrap();
        let c = cheat_prove(&ch, 2000, &mut rng);
        honest_ok +=
            (verify(&ch, &secret, &h, &params).unwrap().decision == Decision::Accept) as usize;
        cheat_ok +=
            (verify(&ch, &secret, &c, &params).unwrap().decision == Decision::Accept) as usize;
    }
    ensure(honest_ok >= 99, || {
        format!("honest accepted {honest_ok}/100")
    })?;
    ensure(cheat_ok <= 1, || format!("cheat accepted {cheat_ok}/100"))?;

    let start = Instant::now();
    let (ch, secret) = build_challenge(487, 487, 487).unwrap();
    let gen_time = start.elapsed();
    ensure(gen_time < Duration::from_secs(60), || {
        format!("q=487 generation took {gen_time:?}")
    })?;
    let mut rng = ChaCha20Rng::seed_from_u64(487);
    let report = verify(&ch, &secret, &cheat_prove(&ch, 2000, &mut rng), &params).unwrap();
    ensure(report.decision == Decision::Reject, || {
        format!("q=487 cheat: {report}")
    })?;
    let honest = honest_prove(&ch, 2000, &mut rng);
    ensure(
        matches!(honest, Err(Error::HonestProvingInfeasible { .. })),
        || "q=487 honest proving did not report infeasibility".into(),
    )?;
    Ok(format!(
        "q=23 honest {honest_ok}/100, cheat {cheat_ok}/100; q=487 gen {gen_time:.2?}, cheat bias {:.4} rejected, honest infeasible",
        report.bias_observed
    ))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    let actions = [Action::PI_OVER_8, Action::new(1, 3).unwrap()];
    let mut worst_tv = 0.0f64;
    let mut worst_flat = 0.0f64;
    let mut done = 0;
    while done < 30 {
        let n = rng.gen_range(1..=4);
        let k = rng.gen_range(n..=6);
        let prog = random_program(&mut rng, n, k, &actions);
        // the primal marginal is flat only when the rows span F2^n
        if prog.matrix().rank() < n {
            continue;
        }
        done += 1;
        let direct = distribution_fourier(&prog).unwrap();

        let net = xprogram_to_znetwork(&prog);
        let znet = simulate_znetwork(&net).unwrap();
        let (back, pp) = znetwork_to_xprogram(&net);
        let roundtrip = pp
            .push_forward(&distribution_fourier(&back).unwrap())
            .unwrap();

        let (gp, gpp) = xprogram_to_graphprogram(&prog);
        let raw = simulate_graphprogram(&gp).unwrap();
        let graph = gpp.push_forward(&raw).unwrap();

        for (a, b, what) in [
            (&direct, &znet, "direct/znet"),
            (&direct, &graph, "direct/graph"),
            (&znet, &graph, "znet/graph"),
            (&direct, &roundtrip, "direct/roundtrip"),
        ] {
            let tv = a.total_variation(b);
            worst_tv = worst_tv.max(tv);
            ensure(tv < 1e-10, || {
                format!("{what}: TV {tv:e} on program {done}")
            })?;
        }
        let primal: Vec<usize> = (0..n).collect();
        let ancilla: Vec<usize> = (n..n + k).collect();
        for (keep, what) in [(&primal, "primal"), (&ancilla, "ancilla")] {
            let m = raw.marginal(keep);
            let flat = 1.0 / m.probs().len() as f64;
            let dev = m
                .probs()
                .iter()
                .map(|p| (p - flat).abs())
                .fold(0.0, f64::max);
            worst_flat = worst_flat.max(dev);
            ensure(dev < 1e-9, || {
                format!("{what} marginal off by {dev:e} on program {done}")
            })?;
        }
    }
    Ok(format!(
        "30 programs max TV {worst_tv:.1e}, max marginal deviation {worst_flat:.1e}"
    ))
}

fn run_cli(dir: &Path, args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_iqp"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn iqp");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

fn pipeline(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let steps: [&[&str]; 5] = [
        &[
            "gen",
            "--q",
            "23",
            "--seed",
            "77",
            "--out-challenge",
            "c.txt",
            "--out-secret",
            "s.txt",
        ],
        &[
            "prove",
            "--challenge",
            "c.txt",
            "--m",
            "2000",
            "--seed",
            "5",
            "--out",
            "h.txt",
        ],
        &[
            "cheat",
            "--challenge",
            "c.txt",
            "--m",
            "2000",
            "--seed",
            "5",
            "--out",
            "y.txt",
        ],
        &[
            "verify",
            "--challenge",
            "c.txt",
            "--secret",
            "s.txt",
            "--transcript",
            "h.txt",
        ],
        &[
            "verify",
            "--challenge",
            "c.txt",
            "--secret",
            "s.txt",
            "--transcript",
            "y.txt",
        ],
    ];
    let mut artifacts = Vec::new();
    for (i, step) in steps.iter().enumerate() {
        let (code, stdout) = run_cli(dir, step);
        artifacts.push((format!("step{i}.stdout"), stdout.into_bytes()));
        artifacts.push((format!("step{i}.exit"), code.to_string().into_bytes()));
    }
    for f in ["c.txt", "s.txt", "h.txt", "y.txt"] {
        artifacts.push((
            f.to_string(),
            std::fs::read(dir.join(f)).unwrap_or_default(),
        ));
    }
    artifacts
}

fn criterion_10() -> Outcome {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let first = pipeline(a.path());
    let second = pipeline(b.path());
    for ((name, x), (_, y)) in first.iter().zip(&second) {
        ensure(!x.is_empty(), || format!("{name} is empty"))?;
        ensure(x == y, || format!("{name} differs between runs"))?;
    }
    let exits: Vec<String> = first
        .iter()
        .filter(|(n, _)| n.ends_with(".exit"))
        .map(|(_, v)| String::from_utf8_lossy(v).into_owned())
        .collect();
    ensure(exits == ["0", "0", "0", "0", "1"], || {
        format!("exit codes {exits:?}")
    })?;
    Ok(format!(
        "{} artifacts byte-identical across two runs",
        first.len()
    ))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("quantum bias reproduction", criterion_1),
        ("classical bias reproduction", criterion_2),
        ("oracle equivalence", criterion_3),
        ("exact θ=π and θ=π/2 cases", criterion_4),
        ("collision-entropy identity", criterion_5),
        ("phase-function bias identity", criterion_6),
        ("bias-one implication sweep", criterion_7),
        ("protocol end-to-end", criterion_8),
        ("reductions triangle", criterion_9),
        ("CLI determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{t:.2?}]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{t:.2?}]: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
