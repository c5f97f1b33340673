//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fractal_cli::{run, EXIT_OK};
use fractal_core::analysis::{upper_bound_witness, ExactSource};
use fractal_core::fixtures::{self, random_code};
use fractal_core::gf2::{kron_matrix, subspace_intersection, subspace_sum};
use fractal_core::{
    analyze, construct, dimension_formula, embedded_params, lower_bound, upper_bound, AnalysisReport, AnalyzeOptions,
    BitMatrix, BitVector, CodeFamily, LinearCode,
};

/// Randomized trials per property in criterion 7.
const PROPERTY_TRIALS: u64 = 200;
/// Longest code length drawn in criterion 7.
const PROPERTY_MAX_LEN: usize = 12;
/// Largest family drawn in criterion 7.
const PROPERTY_MAX_S: usize = 3;
/// Randomized pairs in criterion 6.
const UUV_TRIALS: u64 = 50;
const UUV_MAX_N: usize = 10;
const UUV_MAX_K: usize = 5;

type Outcome = Result<String, String>;

struct Criterion {
    id: &'static str,
    name: &'static str,
    limit: Option<Duration>,
    check: fn() -> Outcome,
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

/// Words of a code of length ≤ 64 as bit masks.
fn masks(code: &LinearCode) -> Vec<u64> {
    assert!(code.length() <= 64);
    code.generator().rows().iter().map(|r| r.words()[0]).collect()
}

/// Weight histogram by brute force over all messages.
fn naive_weights(rows: &[u64], n: usize) -> Vec<u64> {
    let mut hist = vec![0u64; n + 1];
    for msg in 0u64..1 << rows.len() {
        let mut word = 0u64;
        for (i, r) in rows.iter().enumerate() {
            if msg >> i & 1 == 1 {
                word ^= r;
            }
        }
        hist[word.count_ones() as usize] += 1;
    }
    hist
}

fn naive_distance(code: &LinearCode) -> Option<usize> {
    let hist = naive_weights(&masks(code), code.length());
    (1..hist.len()).find(|&w| hist[w] > 0)
}

fn report_of(build: fn() -> (CodeFamily, CodeFamily)) -> (CodeFamily, CodeFamily, AnalysisReport) {
    let (c, d) = build();
    let report = analyze(&c, &d, AnalyzeOptions::default()).expect("fixture analyzes");
    (c, d, report)
}

fn expect<T: PartialEq + std::fmt::Debug>(errors: &mut Vec<String>, what: &str, actual: T, expected: T) {
    if actual != expected {
        errors.push(format!("{what} = {actual:?}, expected {expected:?}"));
    }
}

fn finish(errors: Vec<String>, summary: String) -> Outcome {
    if errors.is_empty() {
        Ok(summary)
    } else {
        Err(errors.join("; "))
    }
}

fn summary(r: &AnalysisReport) -> String {
    format!(
        "({},{},{:?}) upper {} lower {:?} kappa {:?}",
        r.length(),
        r.rank,
        r.exact_distance,
        r.upper_bound,
        r.lower_bound,
        r.kappa_formula
    )
}

/// Moves bit `i·inner + j` to `j·outer + i`.
fn transpose_layout(code: &LinearCode, outer: usize, inner: usize) -> LinearCode {
    let rows = code
        .generator()
        .rows()
        .iter()
        .map(|v| {
            let mut out = BitVector::zeros(v.len());
            for p in v.support() {
                out.set((p % inner) * outer + p / inner, true);
            }
            out
        })
        .collect();
    LinearCode::from_rows(code.length(), rows).unwrap()
}

fn golay() -> Outcome {
    let (c, d, r) = report_of(fixtures::golay24);
    let mut errors = Vec::new();
    expect(&mut errors, "rank", r.rank, 12);
    expect(&mut errors, "exact_distance", r.exact_distance, Some(8));
    expect(&mut errors, "exact_source", r.exact_source, ExactSource::Enumeration);
    expect(&mut errors, "upper_bound", r.upper_bound, 8);
    expect(&mut errors, "lower_bound", r.lower_bound, Some(4));
    let printed = LinearCode::from_matrix(&fixtures::golay_printed_generator());
    // The printed rows put the length-3 factor's coordinate in the outer block.
    expect(
        &mut errors,
        "printed == D⊗C layout",
        construct(&d, &c).unwrap() == printed,
        true,
    );
    let built = construct(&c, &d).unwrap();
    expect(
        &mut errors,
        "printed == transposed C⊗D",
        transpose_layout(&built, 8, 3) == printed,
        true,
    );
    finish(errors, format!("{}, printed generator row space matched", summary(&r)))
}

fn example_2() -> Outcome {
    let (_, _, r) = report_of(fixtures::p21_12_5);
    let mut errors = Vec::new();
    expect(&mut errors, "kappa_formula", r.kappa_formula, Some(12));
    expect(&mut errors, "rank", r.rank, 12);
    expect(&mut errors, "upper_bound", r.upper_bound, 6);
    expect(&mut errors, "exact_distance", r.exact_distance, Some(5));
    expect(&mut errors, "lower_bound", r.lower_bound, Some(4));
    finish(errors, summary(&r))
}

fn example_3() -> Outcome {
    let (c, d, r) = report_of(fixtures::p21_x3);
    let mut errors = Vec::new();
    expect(&mut errors, "rank", r.rank, 9);
    expect(&mut errors, "kappa_formula", r.kappa_formula, Some(9));
    expect(&mut errors, "upper_bound", r.upper_bound, 8);
    expect(&mut errors, "lower_bound", r.lower_bound, Some(6));
    let oracle = naive_distance(&construct(&c, &d).unwrap());
    expect(&mut errors, "oracle distance", oracle, Some(r.upper_bound));
    expect(&mut errors, "exact_distance", r.exact_distance, oracle);
    finish(errors, summary(&r))
}

fn example_4() -> Outcome {
    let (_, _, r) = report_of(fixtures::p28_22_4);
    let mut errors = Vec::new();
    expect(&mut errors, "theorem_b_applies", r.theorem_b_applies, true);
    expect(&mut errors, "rank", r.rank, 22);
    expect(&mut errors, "upper_bound", r.upper_bound, 4);
    expect(&mut errors, "lower_bound", r.lower_bound, Some(4));
    expect(&mut errors, "exact_distance", r.exact_distance, Some(4));
    expect(&mut errors, "exact_source", r.exact_source, ExactSource::Enumeration);

    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(["fractal", "example", "p28_22_4", "--table"], &mut out, &mut err);
    expect(&mut errors, "example exit code", code, EXIT_OK);
    let text = String::from_utf8(out).unwrap();
    let m1: Vec<String> = text
        .lines()
        .skip_while(|l| !l.starts_with("Ψ(e)"))
        .skip(2)
        .take_while(|l| l.starts_with('{'))
        .map(|l| l.split_whitespace().last().unwrap_or("").to_string())
        .collect();
    expect(&mut errors, "m1 rows", m1.len(), 7);
    expect(&mut errors, "m1 column all 4", m1.iter().all(|v| v == "4"), true);
    finish(errors, format!("{}, m1 column {:?}", summary(&r), m1))
}

/// RM(2,5) from evaluations of all monomials of degree ≤ 2 on F2^5.
fn reed_muller_2_5_rows() -> Vec<u64> {
    let eval = |vars: &[usize]| -> u64 {
        (0..32u64)
            .filter(|p| vars.iter().all(|&v| p >> v & 1 == 1))
            .fold(0, |acc, p| acc | 1 << p)
    };
    let mut rows = vec![eval(&[])];
    for i in 0..5 {
        rows.push(eval(&[i]));
        for j in i + 1..5 {
            rows.push(eval(&[i, j]));
        }
    }
    rows
}

fn example_5() -> Outcome {
    let (c, d, r) = report_of(fixtures::rm32_16_8);
    let mut errors = Vec::new();
    expect(
        &mut errors,
        "embedded_params",
        embedded_params(&c, &d.reversed()).ok(),
        Some((16, 8)),
    );
    expect(
        &mut errors,
        "(n,k,d)",
        (r.length(), r.rank, r.exact_distance),
        (32, 16, Some(8)),
    );
    let built = construct(&c, &d).unwrap();
    let oracle = reed_muller_2_5_rows();
    let rm = naive_weights(&oracle, 32);
    expect(&mut errors, "oracle RM(2,5) size", rm.iter().sum::<u64>(), 1 << 16);
    expect(
        &mut errors,
        "weight distribution",
        naive_weights(&masks(&built), 32),
        rm.clone(),
    );
    let nonzero: Vec<(usize, u64)> = rm
        .iter()
        .enumerate()
        .filter(|(_, &a)| a > 0)
        .map(|(w, &a)| (w, a))
        .collect();
    finish(errors, format!("{}, weights {:?}", summary(&r), nonzero))
}

fn example_6() -> Outcome {
    let mut errors = Vec::new();
    for seed in 0..UUV_TRIALS {
        let (c, d) = fixtures::u_uplusv_random(seed, UUV_MAX_N, UUV_MAX_K);
        let d1 = naive_distance(c.code(1)).expect("nonzero");
        let d2 = naive_distance(c.code(2)).expect("nonzero");
        let predicted = (2 * d1).min(d2);
        let exact = naive_distance(&construct(&c, &d).unwrap());
        let r = analyze(&c, &d, AnalyzeOptions::default()).unwrap();
        let got = (exact, r.exact_distance, r.upper_bound, r.lower_bound);
        if got != (Some(predicted), Some(predicted), predicted, Some(predicted)) {
            errors.push(format!(
                "seed {seed}: min(2d1, d2) = {predicted}, (oracle, exact, upper, lower) = {got:?}"
            ));
        }
    }
    finish(
        errors,
        format!("{UUV_TRIALS} seeds, n ≤ {UUV_MAX_N}, k_i ≤ {UUV_MAX_K}"),
    )
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> BitVector {
    let bits: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    BitVector::from_bits(&bits)
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> BitMatrix {
    let rows = rng.gen_range(0..=n.min(8));
    BitMatrix::from_rows(n, (0..rows).map(|_| random_vector(rng, n)).collect()).unwrap()
}

fn random_chain(rng: &mut ChaCha8Rng, n: usize, s: usize) -> CodeFamily {
    let mut rows = random_code(rng, n, 1).generator().rows().to_vec();
    let mut codes = vec![LinearCode::from_rows(n, rows.clone()).unwrap()];
    while codes.len() < s {
        for _ in 0..rng.gen_range(0..=2) {
            rows.push(random_vector(rng, n));
        }
        codes.push(LinearCode::from_rows(n, rows.clone()).unwrap());
    }
    CodeFamily::new(codes).unwrap()
}

fn random_family(rng: &mut ChaCha8Rng, n: usize, s: usize) -> CodeFamily {
    let codes = (0..s)
        .map(|_| {
            let k = rng.gen_range(1..=3);
            random_code(rng, n, k)
        })
        .collect();
    CodeFamily::new(codes).unwrap()
}

/// Pairs are always acyclic; triples are chains or filtered random triples.
fn random_acyclic(rng: &mut ChaCha8Rng, n: usize, s: usize) -> CodeFamily {
    if s <= 2 || rng.gen_bool(0.5) {
        return if s <= 2 {
            random_family(rng, n, s)
        } else {
            random_chain(rng, n, s)
        };
    }
    loop {
        let f = random_family(rng, n, s);
        if f.is_acyclic() {
            return f;
        }
    }
}

/// Lengths up to 6 and 5 keep the product rank enumerable.
fn pair(rng: &mut ChaCha8Rng, embedded_c: bool) -> (CodeFamily, CodeFamily) {
    loop {
        let s = rng.gen_range(1..=PROPERTY_MAX_S);
        let (n, m) = (rng.gen_range(2..=6), rng.gen_range(2..=5));
        let c = if embedded_c {
            random_chain(rng, n, s)
        } else {
            random_acyclic(rng, n, s)
        };
        let d = random_acyclic(rng, m, s);
        if construct(&c, &d).unwrap().dimension() <= 16 {
            return (c, d);
        }
    }
}

fn trials(property: &str, mut trial: impl FnMut(&mut ChaCha8Rng) -> Result<(), String>) -> Outcome {
    let mut errors = Vec::new();
    for seed in 0..PROPERTY_TRIALS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Err(e) = trial(&mut rng) {
            errors.push(format!("seed {seed}: {e}"));
        }
    }
    finish(errors, format!("{PROPERTY_TRIALS} trials, {property}"))
}

fn property_a() -> Outcome {
    trials("dim(A+B) + dim(A∩B) = dim A + dim B", |rng| {
        let n = rng.gen_range(1..=PROPERTY_MAX_LEN);
        let (a, b) = (random_matrix(rng, n), random_matrix(rng, n));
        let lhs = subspace_sum(&a, &b).unwrap().rank() + subspace_intersection(&a, &b).unwrap().rank();
        (lhs == a.rank() + b.rank())
            .then_some(())
            .ok_or(format!("{lhs} vs {}", a.rank() + b.rank()))
    })
}

fn property_b() -> Outcome {
    trials("(L1⊗M1) ∩ (L2⊗M2) = (L1∩L2) ⊗ (M1∩M2)", |rng| {
        let (n, m) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let (l1, l2) = (random_matrix(rng, n), random_matrix(rng, n));
        let (m1, m2) = (random_matrix(rng, m), random_matrix(rng, m));
        let lhs = subspace_intersection(&kron_matrix(&l1, &m1), &kron_matrix(&l2, &m2)).unwrap();
        let rhs = kron_matrix(
            &subspace_intersection(&l1, &l2).unwrap(),
            &subspace_intersection(&m1, &m2).unwrap(),
        );
        (LinearCode::from_matrix(&lhs) == LinearCode::from_matrix(&rhs))
            .then_some(())
            .ok_or("row spaces differ".to_string())
    })
}

fn property_c() -> Outcome {
    trials("inclusion-exclusion dimension = rank for acyclic families", |rng| {
        let s = rng.gen_range(1..=PROPERTY_MAX_S);
        let n = rng.gen_range(2..=PROPERTY_MAX_LEN);
        let f = random_acyclic(rng, n, s);
        let full = f.sum_code(fractal_core::MultiIndex::full(s)).unwrap().dimension() as i64;
        if f.inclusion_exclusion_dimension() != full {
            return Err(format!("family: {} vs {full}", f.inclusion_exclusion_dimension()));
        }
        let (c, d) = pair(rng, false);
        let (kappa, rank) = (
            dimension_formula(&c, &d).unwrap(),
            construct(&c, &d).unwrap().dimension(),
        );
        (kappa == rank).then_some(()).ok_or(format!("code: {kappa} vs {rank}"))
    })
}

fn property_d() -> Outcome {
    trials("{C_i ⊗ D_i} is acyclic for acyclic C, D", |rng| {
        let (c, d) = pair(rng, false);
        let product = CodeFamily::new(
            c.codes()
                .iter()
                .zip(d.codes())
                .map(|(x, y)| x.tensor_product(y))
                .collect(),
        )
        .unwrap();
        product
            .is_acyclic()
            .then_some(())
            .ok_or("product family is not acyclic".to_string())
    })
}

fn property_e() -> Outcome {
    trials("lower ≤ exact ≤ upper for acyclic × acyclic", |rng| {
        let (c, d) = pair(rng, false);
        let exact = naive_distance(&construct(&c, &d).unwrap()).unwrap();
        let (lower, upper) = (lower_bound(&c, &d).unwrap().value, upper_bound(&c, &d).unwrap().value);
        (lower <= exact && exact <= upper)
            .then_some(())
            .ok_or(format!("{lower} ≤ {exact} ≤ {upper} fails"))
    })
}

fn property_f() -> Outcome {
    trials("lower = upper = exact for embedded × acyclic", |rng| {
        let (c, d) = pair(rng, true);
        let exact = naive_distance(&construct(&c, &d).unwrap()).unwrap();
        let (lower, upper) = (lower_bound(&c, &d).unwrap().value, upper_bound(&c, &d).unwrap().value);
        (lower == exact && upper == exact)
            .then_some(())
            .ok_or(format!("lower {lower}, upper {upper}, exact {exact}"))
    })
}

fn property_g() -> Outcome {
    trials("upper-bound witness x⊗y is a codeword of the claimed weight", |rng| {
        let s = rng.gen_range(1..=PROPERTY_MAX_S);
        let (n, m) = (rng.gen_range(2..=PROPERTY_MAX_LEN), rng.gen_range(2..=PROPERTY_MAX_LEN));
        let c = random_family(rng, n, s);
        let d = random_family(rng, m, s);
        let w = upper_bound_witness(&c, &d).unwrap();
        let bound = upper_bound(&c, &d).unwrap().value;
        let member = construct(&c, &d).unwrap().contains(&w.codeword).unwrap();
        (member && w.codeword.weight() == bound).then_some(()).ok_or(format!(
            "member {member}, weight {} vs bound {bound}",
            w.codeword.weight()
        ))
    })
}

fn example_all() -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(["fractal", "example", "all"], &mut out, &mut err);
    let text = String::from_utf8(out).unwrap();
    let clean = text.matches("findings: none").count();
    let total = fixtures::all().len();
    if code == EXIT_OK && clean == total {
        Ok(format!("exit 0, {clean}/{total} examples with zero findings"))
    } else {
        Err(format!(
            "exit {code}, {clean}/{total} clean: {}",
            String::from_utf8_lossy(&err).trim()
        ))
    }
}

fn main() {
    let criteria = [
        Criterion {
            id: "1",
            name: "Golay (24,12,8) reproduction",
            limit: secs(1),
            check: golay,
        },
        Criterion {
            id: "2",
            name: "(21,12,5) with lower bound 4",
            limit: secs(1),
            check: example_2,
        },
        Criterion {
            id: "3",
            name: "(21,9,8) from disjoint components",
            limit: secs(1),
            check: example_3,
        },
        Criterion {
            id: "4",
            name: "(28,22,4) embedded chain",
            limit: secs(10),
            check: example_4,
        },
        Criterion {
            id: "5",
            name: "(32,16,8) with RM(2,5) weights",
            limit: secs(5),
            check: example_5,
        },
        Criterion {
            id: "6",
            name: "random |u|u+v| pairs",
            limit: None,
            check: example_6,
        },
        Criterion {
            id: "7a",
            name: "sum/intersection dimensions",
            limit: None,
            check: property_a,
        },
        Criterion {
            id: "7b",
            name: "tensor intersection identity",
            limit: None,
            check: property_b,
        },
        Criterion {
            id: "7c",
            name: "inclusion-exclusion dimension",
            limit: None,
            check: property_c,
        },
        Criterion {
            id: "7d",
            name: "product family acyclicity",
            limit: None,
            check: property_d,
        },
        Criterion {
            id: "7e",
            name: "distance sandwich",
            limit: None,
            check: property_e,
        },
        Criterion {
            id: "7f",
            name: "embedded × acyclic equality",
            limit: None,
            check: property_f,
        },
        Criterion {
            id: "7g",
            name: "upper-bound witness",
            limit: None,
            check: property_g,
        },
        Criterion {
            id: "8",
            name: "example all",
            limit: secs(60),
            check: example_all,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.check)();
        let elapsed = start.elapsed();
        let slow = c.limit.is_some_and(|l| elapsed > l);
        let limit = c.limit.map_or(String::new(), |l| format!(", limit {} s", l.as_secs()));
        let (status, detail) = match (&outcome, slow) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("too slow; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "{status} {:<3} {}: {detail} ({:.3} s{limit})",
            c.id,
            c.name,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
