//! End-to-end acceptance checks, one line of output per criterion.
//!
//! Runs without the libtest harness so the report is always printed.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use common::*;
use qplane::toeplitz::shift_coefficients;
use qplane::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<(), String>;
type Check = fn() -> Outcome;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn dim(n: usize) -> TruncationDim {
    TruncationDim::new(n).unwrap()
}

fn algebra_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let qs: Vec<_> = exact_qs().into_iter().map(qp).collect();
    for n in 0..500 {
        let q = &qs[rng.random_range(0..qs.len())];
        let a = Monomial::new(rng.random_range(0..=6), rng.random_range(0..=6));
        let b = Monomial::new(rng.random_range(0..=6), rng.random_range(0..=6));
        let got = mul_monomials(a, b, q);
        let want = oracle_mul_monomials(a, b, q.value());
        ensure!(got == want, "product #{n}: ({a})({b}) at q = {q}: {got:?} vs oracle {want:?}");
    }
    for n in 0..200 {
        let q = &qs[rng.random_range(0..qs.len())];
        let f = random_element(&mut rng, q, 3, 3);
        let g = random_element(&mut rng, q, 3, 3);
        let h = random_element(&mut rng, q, 3, 3);
        let left = mul(&mul(&f, &g).unwrap(), &h).unwrap();
        let right = mul(&f, &mul(&g, &h).unwrap()).unwrap();
        ensure!(left == right, "triple #{n} at q = {q} is not associative");
    }
    Ok(())
}

fn inner_product_table() -> Outcome {
    let q = qp(rat(2, 1));
    let one = Element::one(q.clone());
    let tt = parse_element("t tb", &q).unwrap();
    let families = [
        ("factorial", [rat(1, 1), rat(1, 1), rat(2, 1)]),
        ("qfactorial:q=1/2:w0=1", [rat(1, 1), rat(1, 1), rat(3, 1)]),
        ("table:[2,5,\"7/3\"]", [rat(2, 1), rat(5, 1), rat(7, 3)]),
    ];
    for (spec, [w0, w1, w2]) in families {
        let w = WeightSequence::<Exact>::parse(spec).unwrap();
        let got = [
            inner(&one, &one, &w).unwrap(),
            inner(&tt, &one, &w).unwrap(),
            inner(&one, &tt, &w).unwrap(),
            inner(&tt, &tt, &w).unwrap(),
        ];
        let want = [w0, w1.clone(), w1, w2];
        ensure!(got == want, "{spec}: got {got:?}, want {want:?}");
    }
    Ok(())
}

fn indefiniteness_witness() -> Outcome {
    let w = WeightSequence::<Exact>::parse("table:[1,2,1]").unwrap();
    let q = qp(rat(1, 1));
    let f = parse_element("1 - t tb", &q).unwrap();
    let v = inner(&f, &f, &w).unwrap();
    ensure!(v == rat(-2, 1), "<1 - t tb, 1 - t tb> = {v:?}, want -2");
    let rep = definiteness_probe(&w, 1).unwrap();
    ensure!(rep.min_eigenvalue < 0.0, "least eigenvalue {} not negative", rep.min_eigenvalue);
    let (g, pairing) = rep.indefinite_witness.ok_or("no witness returned")?;
    let recomputed = inner(&g, &g, &w.to_float()).unwrap();
    ensure!(
        recomputed.re < 0.0 && recomputed.im.abs() < 1e-12 && (recomputed.re - pairing).abs() < 1e-12,
        "witness {g} pairs to {recomputed}, reported {pairing}"
    );
    Ok(())
}

fn positive_definite_family() -> Outcome {
    let rep = definiteness_probe(&WeightSequence::<Exact>::factorial(), 3).unwrap();
    ensure!(rep.basis.len() == 16, "basis has {} monomials", rep.basis.len());
    ensure!(rep.min_eigenvalue > 1e-9, "least eigenvalue {}", rep.min_eigenvalue);
    ensure!(rep.indefinite_witness.is_none(), "unexpected witness");
    Ok(())
}

fn degeneracy_scan() -> Outcome {
    let q = qp(rat(1, 1));
    let constant = WeightSequence::<Exact>::parse("constant:1").unwrap();
    let s_max = 10;
    let rep = nondegeneracy_scan(&constant, 2, 4, s_max).unwrap();
    for m in 0..=2 {
        for r in 2..=4 {
            let e = rep.entry(m, r).ok_or(format!("missing (m={m}, R={r})"))?;
            let Verdict::CandidateWitness { witness, horizon } = &e.verdict else {
                return Err(format!("constant weights certified at (m={m}, R={r})"));
            };
            ensure!(*horizon == s_max, "horizon {horizon}");
            ensure!(
                verify_witness(&constant, m, witness, s_max, &q).unwrap(),
                "witness at (m={m}, R={r}) fails re-verification"
            );
        }
    }
    let fact = WeightSequence::<Exact>::factorial();
    let rep = nondegeneracy_scan(&fact, 3, 4, 8).unwrap();
    for e in &rep.results {
        ensure!(
            e.verdict == Verdict::CertifiedNondegenerate,
            "factorial weights not certified at (m={}, R={})",
            e.m,
            e.r
        );
    }
    ensure!(rep.results.len() == 16, "scanned {} slices", rep.results.len());
    Ok(())
}

fn projection_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let q = qp(rat(3, 2));
    for spec in ["factorial", "qfactorial:q=3/4:w0=2", "table:[3,1,4,1,5,9,2,6,5,3,5,9,7]"] {
        let w = WeightSequence::<Exact>::parse(spec).unwrap();
        let set: Vec<_> = (0..20).map(|_| random_element(&mut rng, &q, 5, 4)).collect();
        for (n, f) in set.iter().enumerate() {
            let p = project_k(f, &w).unwrap();
            ensure!(project_k(&p, &w).unwrap() == p, "{spec}: not idempotent on #{n}: {f}");
            let g = &set[(n + 7) % set.len()];
            let lhs = inner(f, &project_k(g, &w).unwrap(), &w).unwrap();
            let rhs = inner(&p, g, &w).unwrap();
            ensure!(lhs == rhs, "{spec}: not symmetric on #{n}");
        }
    }
    let w = WeightSequence::<Exact>::factorial();
    let got = project_k(&parse_element("t^2 tb", &q).unwrap(), &w).unwrap();
    let want = parse_element("2 t", &q).unwrap();
    ensure!(got == want, "P_K(t^2 tb) = {got}");
    Ok(())
}

fn toeplitz_action() -> Outcome {
    let n = 12;
    for spec in ["factorial", "qfactorial:q=2/3:w0=1"] {
        let w = WeightSequence::<Exact>::parse(spec).unwrap();
        let ws = w.upto(n + 3).unwrap();
        for i in 0..=3usize {
            for j in 0..=3usize {
                let t = toeplitz_monomial(i as u32, j as u32, &w, dim(n)).unwrap();
                for a in 0..n {
                    for b in 0..n {
                        let e = t.phi_entry_exact(b, a);
                        let target = (a + i).checked_sub(j).filter(|&b2| b2 == b);
                        match target {
                            Some(b) => {
                                // w_{i+a} / (w_a w_{i+a-j})^{1/2}, compared squared and by sign.
                                let want_sq = ws[a + i].clone() * ws[a + i].clone()
                                    / (ws[a].clone() * ws[b].clone());
                                ensure!(
                                    e.squared() == want_sq && e.coeff.is_positive_real(),
                                    "{spec}: T(t^{i} tb^{j}) entry ({b},{a})"
                                );
                            }
                            None => ensure!(
                                e.coeff.is_zero(),
                                "{spec}: T(t^{i} tb^{j}) has stray entry ({b},{a})"
                            ),
                        }
                    }
                }
            }
        }
        let id = toeplitz(&Element::one(qp(rat(2, 1))), &w, dim(n)).unwrap();
        ensure!(
            id.coeffs() == TruncatedOperator::identity(&w, dim(n)).unwrap().coeffs(),
            "{spec}: T_1 is not the identity"
        );
    }
    Ok(())
}

fn composition_and_ordering() -> Outcome {
    let q = qp(rat(1, 2));
    let w = ccr_weights(&q, Exact::one()).unwrap();
    let n = dim(16);
    let t = toeplitz_monomial(1, 0, &w, n).unwrap();
    let tb = toeplitz_monomial(0, 1, &w, n).unwrap();
    let t_tb = toeplitz(&parse_element("t tb", &q).unwrap(), &w, n).unwrap();
    let tb_t = toeplitz(&parse_element("tb t", &q).unwrap(), &w, n).unwrap();

    let anti_wick = compose(&tb, &t).unwrap();
    ensure!(anti_wick.agrees_on_interior(&t_tb), "T_tb T_t != T_(t tb)");

    let number = compose(&t, &tb).unwrap();
    let cols = number.interior_columns();
    for b in 0..16 {
        for a in 0..cols {
            let want = if a == b { w.deformed_int(a).unwrap() } else { Exact::zero() };
            ensure!(*number.coeff(b, a) == want, "T_t T_tb entry ({b},{a})");
        }
    }

    ensure!(tb_t.coeffs() == t_tb.scale(q.inverse()).coeffs(), "T_(tb t) != q^-1 T_(t tb)");

    let mut power = TruncatedOperator::identity(&w, n).unwrap();
    for i in 1..=6u32 {
        power = compose(&power, &t).unwrap();
        let direct = toeplitz_monomial(i, 0, &w, n).unwrap();
        ensure!(power.agrees_on_interior(&direct), "(T_t)^{i} != T_(t^{i})");
    }
    Ok(())
}

fn adjoint_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let families = weight_families();
    let qs: Vec<_> = exact_qs().into_iter().map(qp).collect();
    for n in 0..50 {
        let q = &qs[n % qs.len()];
        let w = &families[n % families.len()];
        let g = random_element(&mut rng, q, 3, 5);
        let t = toeplitz(&g, w, dim(10)).unwrap();
        let direct = toeplitz(&star(&g), w, dim(10)).unwrap();
        ensure!(
            adjoint(&t).coeffs() == direct.coeffs(),
            "symbol #{n} {g} under {}",
            w.label()
        );
    }
    Ok(())
}

fn ccr_reproduction() -> Outcome {
    for qv in [rat(1, 1), rat(1, 2), rat(3, 4), rat(2, 1)] {
        let q = qp(qv);
        let r = ccr_residual(&q, Exact::one(), dim(32)).unwrap();
        ensure!(r.residual.is_zero(), "q = {q}: residual {:?}", r.residual);
    }
    let w = ccr_weights(&qp(rat(1, 1)), Exact::one()).unwrap();
    let ws = w.upto(32).unwrap();
    let mut fact = Exact::one();
    for (k, wk) in ws.iter().enumerate() {
        if k > 0 {
            fact *= rat(k as i64, 1);
        }
        ensure!(*wk == fact, "w_{k} = {wk:?} is not {k}!");
    }
    Ok(())
}

fn unboundedness_evidence() -> Outcome {
    let fact = WeightSequence::<Exact>::factorial();
    let nb = norm_bound_monomial(1, 0, &fact, 64).unwrap();
    ensure!(nb.verdict == NormVerdict::Diverging, "factorial verdict {}", nb.verdict.as_str());
    for a in 0..=64usize {
        ensure!(
            nb.coefficients.squared[a] == rat(a as i64 + 1, 1),
            "c_{a}^2 = {:?}",
            nb.coefficients.squared[a]
        );
        let want = ((a + 1) as f64).sqrt();
        ensure!(
            (nb.coefficients.values[a] - want).abs() <= 1e-12 * want,
            "c_{a} = {}",
            nb.coefficients.values[a]
        );
    }
    let constant = WeightSequence::<Exact>::parse("constant:1").unwrap();
    let nb = norm_bound_monomial(1, 0, &constant, 64).unwrap();
    ensure!(
        nb.verdict == NormVerdict::BoundedCandidate,
        "constant verdict {}",
        nb.verdict.as_str()
    );
    ensure!(nb.sup_estimate == 1.0, "constant sup {}", nb.sup_estimate);
    let c = compactness_probe(1, 0, &constant, 64, 1e-6).unwrap();
    ensure!(c == CompactVerdict::NotCompactCandidate, "constant compactness {}", c.as_str());
    // Same coefficients, independently.
    let sc = shift_coefficients(1, 0, &constant, 64).unwrap();
    ensure!(sc.squared.iter().all(|v| *v == Exact::one()), "constant c_a != 1");
    Ok(())
}

fn qplane(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qplane"))
        .args(args)
        .env_remove("QPLANE_FORMAT")
        .output()
        .expect("run qplane")
}

fn cli_and_round_trip() -> Outcome {
    let out = qplane(&["inner", "--weights", "factorial", "--q", "1", "t tb", "1"]);
    ensure!(out.status.success(), "inner failed: {}", String::from_utf8_lossy(&out.stderr));
    ensure!(out.stdout == b"1\n", "inner printed {:?}", String::from_utf8_lossy(&out.stdout));

    let args = ["ccr-check", "--q", "1/2", "--w0", "1", "--dim", "16", "--format", "json"];
    let first = qplane(&args);
    let second = qplane(&args);
    ensure!(first.status.success(), "ccr-check failed");
    ensure!(
        first.stdout == b"{\"residual\":\"0\"}\n",
        "ccr-check printed {:?}",
        String::from_utf8_lossy(&first.stdout)
    );
    ensure!(first.stdout == second.stdout, "ccr-check output is not deterministic");

    let args = [
        "degeneracy", "--weights", "constant:1", "--mmax", "2", "--rmax", "3", "--smax", "10",
        "--format", "json",
    ];
    let out = qplane(&args);
    ensure!(out.status.success(), "degeneracy failed");
    ensure!(out.stdout == qplane(&args).stdout, "degeneracy output is not deterministic");
    let report: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let rows = report["results"].as_array().ok_or("no results array")?;
    ensure!(rows.len() == 9, "{} rows", rows.len());
    for row in rows {
        let r = row["R"].as_u64().unwrap_or(0);
        let want = if r >= 2 { "CANDIDATE_WITNESS" } else { "CERTIFIED_NONDEGENERATE" };
        ensure!(row["verdict"] == want, "row {row}");
    }
    let human = qplane(&args[..9]);
    let text = String::from_utf8_lossy(&human.stdout);
    ensure!(
        text.lines().filter(|l| l.contains("CANDIDATE_WITNESS")).count() == 6,
        "human table:\n{text}"
    );

    let corpus = [
        "0", "1", "-1", "t", "tb", "t tb", "tb t", "t^2 tb", "tb^3 t^2", "3/4 t tb",
        "1 - 3/4 t tb + i tb^2", "(1/2-3i) t + 2i tb", "-(2+i) t^3 tb^3", "t t t tb tb",
        "tb t tb t", "5 t^6 + 5 tb^6", "i", "-i tb", "(0+1i) t", "7/9 * t^2",
        "t^10 tb^9 - t^9 tb^10", "1 + t + tb + t tb + tb t", "(3-4i)", "2 tb^2 t^2 - 1/3",
        "-t^4 + t^4", "100/7 t^5 tb^2", "(-1/2+1/2i) tb t^3", "t^2 tb^2 t", "tb^2 t^2 tb", "1/1000000 t",
    ];
    ensure!(corpus.len() == 30, "corpus has {} entries", corpus.len());
    for qv in exact_qs() {
        let q = qp(qv);
        for src in corpus {
            let e = parse_element(src, &q).map_err(|err| format!("{src}: {err}"))?;
            let text = serde_json::to_string(&element_to_json(&e)).unwrap();
            let back: Element<Exact> = element_from_json_str(&text).map_err(|err| err.to_string())?;
            ensure!(back == e, "{src}: JSON round trip changed the element");
            let again = parse_element(&e.to_string(), &q).map_err(|err| err.to_string())?;
            ensure!(again == e, "{src}: textual round trip changed the element");
        }
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, Check); 12] = [
        ("algebra oracle equivalence", algebra_oracle),
        ("inner-product table", inner_product_table),
        ("indefiniteness witness", indefiniteness_witness),
        ("positive-definite family", positive_definite_family),
        ("degeneracy scan", degeneracy_scan),
        ("projection laws", projection_laws),
        ("Toeplitz action", toeplitz_action),
        ("composition and ordering", composition_and_ordering),
        ("adjoint law", adjoint_law),
        ("CCR reproduction", ccr_reproduction),
        ("unboundedness evidence", unboundedness_evidence),
        ("CLI determinism and round trip", cli_and_round_trip),
    ];
    let started = Instant::now();
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let ms = t0.elapsed().as_millis();
        match outcome {
            Ok(()) => println!("acceptance {:>2} PASS  {name} ({ms} ms)", n + 1),
            Err(why) => {
                failed += 1;
                println!("acceptance {:>2} FAIL  {name} ({ms} ms): {why}", n + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.2} s",
        criteria.len() - failed,
        started.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
