//! End-to-end acceptance checks, one test per criterion. Each prints a
//! single `PASS`/`FAIL` line with its timing before asserting.

use std::time::Instant;

use goursat::abnormal::{characteristic_basis, derived_generators};
use goursat::contact::{self, Degree};
use goursat::flags::{dual, growth_vector_of, undual, DualSeq, GrowthVector};
use goursat::krforms::{build, KRWord};
use goursat::sigtype::{
    beta_sequence, delta_of_word, growth_from_sigtype, jacquard_count, jacquard_enum, sigtype_from_growth,
};
use goursat::suite::{self, SuiteOptions};
use goursat::symcore::{linalg, origin, q, qf, PolyVF, Rational};
use goursat::trailer::{delta_trailer, kr_to_trailer};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn report(id: u32, title: &str, start: Instant, failures: &[String]) {
    let tag = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!(
        "{tag} criterion {id:>2} {title} ({:.2}s){}",
        start.elapsed().as_secs_f64(),
        if failures.is_empty() { String::new() } else { format!(": {}", failures.join("; ")) }
    );
    assert!(failures.is_empty(), "criterion {id} failed: {failures:?}");
}

fn word(s: &str) -> KRWord {
    s.parse().unwrap()
}

fn growth(s: &str) -> GrowthVector {
    suite::parse_growth(s).unwrap()
}

#[test]
fn criterion_01_growth_equivalence_sweep() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut count = 0;
    for len in 1..=5 {
        for w in KRWord::enumerate(len, &[q(0), q(1)]) {
            let flag = growth_vector_of(&build(&w), &origin(w.dim())).unwrap();
            let st = delta_of_word(&w).unwrap();
            let ds = DualSeq::new(beta_sequence(&st).unwrap()).unwrap();
            if flag != undual(&ds, w.dim()).unwrap() {
                bad.push(w.to_string());
            }
            count += 1;
        }
    }
    report(1, &format!("growth sweep over {count} words"), start, &bad);
}

#[test]
fn criterion_02_reference_growth_values() {
    let start = Instant::now();
    let mut bad = Vec::new();
    for (w, g) in [
        ("R0.S", "2,3,4,4,5"),
        ("R0.S.S.R1", "2,3,4,5,5,6,6,6,7"),
        ("R0.S.S.R0", "2,3,4,5,5,5,6,6,6,6,7"),
    ] {
        let got = growth_vector_of(&build(&word(w)), &origin(word(w).dim())).unwrap();
        if got != growth(g) {
            bad.push(format!("{w}: {got}"));
        }
    }
    for c in suite::catalog() {
        if !c.pass {
            bad.push(format!("{}: {}", c.name, c.detail));
        }
    }
    report(2, "growth values and 9 captions", start, &bad);
}

#[test]
fn criterion_03_dual_sequences() {
    let start = Instant::now();
    let mut bad = Vec::new();
    for (g, d) in [
        ("2,3,4,5,6", vec![1, 2, 3, 4, 5]),
        ("2,3,4,5,5,5,6", vec![1, 2, 3, 4, 7]),
        ("2,3,4,4,5,5,5,6", vec![1, 2, 3, 5, 8]),
    ] {
        let g = growth(g);
        let ds = DualSeq::new(d).unwrap();
        if dual(&g) != ds || undual(&ds, g.ambient_dim()).unwrap() != g {
            bad.push(g.to_string());
        }
    }
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..10_000 {
        let len = rng.gen_range(1..12);
        let mut e = vec![1usize];
        for _ in 1..len {
            let last = *e.last().unwrap();
            e.push(last + rng.gen_range(1..4));
        }
        let ds = DualSeq::new(e).unwrap();
        let n = ds.entries().len() + 1;
        let g = undual(&ds, n).unwrap();
        if dual(&g) != ds || undual(&dual(&g), n).unwrap() != g {
            bad.push(format!("{:?}", ds.entries()));
        }
    }
    report(3, "dual pairs and 10^4 round trips", start, &bad);
}

#[test]
fn criterion_04_jacquard_language() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let listing = |n| jacquard_enum(n).iter().map(|w| w.to_string()).collect::<Vec<_>>();
    if listing(2) != ["a0.a0", "a0.a1"] {
        bad.push(format!("J2 = {:?}", listing(2)));
    }
    if listing(3) != ["a0.a0.a0", "a0.a0.a1", "a0.a1.a0", "a0.a1.a1", "a0.a1.a2"] {
        bad.push(format!("J3 = {:?}", listing(3)));
    }
    for n in 3..=12 {
        let (a, b, c) = (jacquard_enum(n).len(), jacquard_enum(n - 1).len(), jacquard_enum(n - 2).len());
        if a != 3 * b - c || a != jacquard_count(n) {
            bad.push(format!("card J{n} = {a}"));
        }
    }
    report(4, "J2, J3 and cardinality recursion to n = 12", start, &bad);
}

#[test]
fn criterion_05_sigtype_inversion() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut count = 0;
    for k in 1..=9 {
        for w in jacquard_enum(k) {
            let g = growth_from_sigtype(&w, k + 3).unwrap();
            if sigtype_from_growth(&g).ok().as_ref() != Some(&w) {
                bad.push(w.to_string());
            }
            count += 1;
        }
    }
    report(5, &format!("inversion on {count} Jacquard words"), start, &bad);
}

#[test]
fn criterion_06_trailer_conversion() {
    let start = Instant::now();
    let opts = SuiteOptions { tol: 1e-9, seed: 1, ..SuiteOptions::default() };
    let bad: Vec<String> = suite::trailer_checks(&opts)
        .into_iter()
        .filter(|c| c.name.contains("-trailer") && !c.name.contains("a0.a1.a2") && !c.pass)
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect();
    report(6, "trailer conversion n <= 5 and wrong-branch control", start, &bad);
}

#[test]
fn criterion_07_universal_model() {
    let start = Instant::now();
    let words = KRWord::enumerate_01(5);
    let bad: Vec<String> = words
        .iter()
        .filter(|w| {
            let got = kr_to_trailer(w, None).ok().and_then(|c| delta_trailer(&c).ok());
            got != delta_of_word(w).ok()
        })
        .map(|w| w.to_string())
        .collect();
    report(7, &format!("universal model on {} words", words.len()), start, &bad);
}

#[test]
fn criterion_08_abnormal_cones() {
    let start = Instant::now();
    let mut bad: Vec<String> = suite::abnormal_checks()
        .into_iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect();
    let (u, v) = (word("R0.R0.R0"), word("R0.S.R1"));
    if delta_of_word(&u).unwrap() == delta_of_word(&v).unwrap() {
        bad.push("weak pair shares a singularity type".into());
    }
    report(8, "dim-7 example and weak pair", start, &bad);
}

#[test]
fn criterion_09_contact_moduli() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let bases = contact::base_family();
    if bases.len() < 8 {
        bad.push(format!("only {} bases", bases.len()));
    }
    for (name, base) in &bases {
        match contact::check_r9(base) {
            Ok(v) if v == q(0) => {}
            other => bad.push(format!("R9 {name}: {other:?}")),
        }
    }
    let id = contact::identity_base();
    for c in [q(0), q(1), qf(3, 2), q(-2)] {
        let r = contact::check_r11(&id, &c).unwrap();
        if r.c11_tilde != c || !r.intermediates_match() || !r.printed_intermediates_match() {
            bad.push(format!("R11 c11 = {c}: got {}", r.c11_tilde));
        }
    }
    report(9, &format!("R9 over {} bases, R11 identity", bases.len()), start, &bad);
}

#[test]
fn criterion_10_degree_tables() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let tables = [
        (contact::r9_word(q(0)), vec![(5, 1), (6, 2), (1, 3), (4, 4)]),
        (contact::r11_word(q(0)), vec![(6, 3), (4, 5), (1, 4)]),
    ];
    for (w, want) in tables {
        let coords: Vec<usize> = want.iter().map(|(k, _)| *k).collect();
        let got = suite::degree_table(&w, &coords).unwrap();
        for ((k, d), (_, e)) in got.iter().zip(&want) {
            if *d != Degree::Finite(*e) {
                bad.push(format!("{w}: x{k} -> {d}, want {e}"));
            }
        }
    }
    report(10, "R9 and R11 degree tables", start, &bad);
}

fn rank_at(fields: &[PolyVF], p: &[Rational]) -> usize {
    let rows: Vec<Vec<Rational>> = fields.iter().map(|f| f.evaluate(p).unwrap()).collect();
    linalg::rank(&rows)
}

#[test]
fn criterion_11_characteristic_property() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut rng = StdRng::seed_from_u64(11);
    let words = KRWord::enumerate_01(4);
    for w in &words {
        let n = w.dim();
        let points: Vec<Vec<Rational>> = (0..10)
            .map(|_| (0..n).map(|_| qf(rng.gen_range(-9..=9), rng.gen_range(1..=5))).collect())
            .collect();
        for i in 0..=n - 4 {
            let c_i: Vec<PolyVF> = characteristic_basis(w, i)
                .unwrap()
                .into_iter()
                .map(|k| PolyVF::coordinate(n, k - 1))
                .collect();
            let d_i = derived_generators(w, i).unwrap();
            let d_next = derived_generators(w, i + 1).unwrap();
            for p in &points {
                let rank_i = rank_at(&d_i, p);
                let rank_next = rank_at(&d_next, p);
                // Corank one inside D^(i), and D^(i) inside D^(i+1).
                let with_c: Vec<PolyVF> = d_i.iter().chain(&c_i).cloned().collect();
                let ok_corank = rank_at(&c_i, p) + 1 == rank_i && rank_at(&with_c, p) == rank_i;
                let with_d: Vec<PolyVF> = d_next.iter().chain(&d_i).cloned().collect();
                let ok_nested = rank_at(&with_d, p) == rank_next;
                // [c, g] stays in D^(i+1) for every generator g.
                let ok_char = c_i.iter().all(|c| {
                    d_next.iter().all(|g| {
                        let mut ext = d_next.clone();
                        ext.push(c.lie_bracket(g).unwrap());
                        rank_at(&ext, p) == rank_next
                    })
                });
                if !(ok_corank && ok_nested && ok_char) {
                    bad.push(format!("{w} level {i} at {p:?}"));
                }
            }
        }
    }
    report(11, &format!("characteristic property on {} words", words.len()), start, &bad);
}

