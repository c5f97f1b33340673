use fractal_core::analysis::{lower_bound_with, upper_bound_witness};
use fractal_core::fixtures::{self, GOLAY_C1, GOLAY_C2};
use fractal_core::{
    analyze, construct, dimension_formula, embedded_params, lower_bound, upper_bound, verify, AnalyzeOptions,
    BitMatrix, BitVector, CodeFamily, Distance, Finding, LinearCode, MultiIndex, DEFAULT_BUDGET,
};

fn idx(m: &[usize]) -> MultiIndex {
    MultiIndex::new(m).unwrap()
}

/// Moves bit `i·inner + j` to `j·outer + i`.
fn transpose_layout(v: &BitVector, outer: usize, inner: usize) -> BitVector {
    let mut out = BitVector::zeros(v.len());
    for p in v.support() {
        let (i, j) = (p / inner, p % inner);
        out.set(j * outer + i, true);
    }
    out
}

fn transposed_code(code: &LinearCode, outer: usize, inner: usize) -> LinearCode {
    let rows = code
        .generator()
        .rows()
        .iter()
        .map(|r| transpose_layout(r, outer, inner))
        .collect();
    LinearCode::from_rows(code.length(), rows).unwrap()
}

#[test]
fn every_fixture_matches_its_expectations() {
    for fixture in fixtures::all() {
        let (c, d) = (fixture.build)();
        let report = analyze(&c, &d, AnalyzeOptions::default()).unwrap();
        let e = fixture.expected;
        assert_eq!(report.length(), e.n, "{}", fixture.name);
        assert_eq!(report.rank, e.k, "{}", fixture.name);
        assert_eq!(report.kappa_formula, Some(e.k), "{}", fixture.name);
        assert_eq!(report.exact_distance, Some(e.d), "{}", fixture.name);
        assert_eq!(report.upper_bound, e.upper, "{}", fixture.name);
        assert_eq!(report.lower_bound, Some(e.lower), "{}", fixture.name);
        assert_eq!(report.theorem_b_applies, e.theorem_b_applies, "{}", fixture.name);
        assert!(verify(&report, &c, &d).unwrap().is_empty(), "{}", fixture.name);
        if let Some(params) = e.embedded_params {
            assert_eq!(embedded_params(&c, &d.reversed()).unwrap(), params, "{}", fixture.name);
        }
    }
}

#[test]
fn golay_matches_printed_generator() {
    let (c, d) = fixtures::golay24();
    let printed = LinearCode::from_matrix(&fixtures::golay_printed_generator());
    assert_eq!(printed.dimension(), 12);
    // The printed matrix lists D-coordinates as the outer blocks.
    assert_eq!(construct(&d, &c).unwrap(), printed);
    let built = construct(&c, &d).unwrap();
    assert_eq!(transposed_code(&built, 8, 3), printed);
    assert_eq!(printed.min_distance().unwrap(), Distance::Finite(8));
}

#[test]
fn golay_weight_distribution() {
    let (c, d) = fixtures::golay24();
    let dist = construct(&c, &d).unwrap().weight_distribution(DEFAULT_BUDGET).unwrap();
    assert_eq!(dist[8], 759);
    assert_eq!(dist.iter().sum::<u64>(), 4096);
}

#[test]
fn golay_lattice_and_tags() {
    let (c, d) = fixtures::golay24();
    let c12 = c.intersection_code(idx(&[1, 2])).unwrap();
    assert_eq!((c12.dimension(), c12.min_distance().unwrap()), (1, Distance::Finite(8)));
    assert_eq!(c.family_basis().tags(), vec![idx(&[1]), idx(&[1, 2]), idx(&[2])]);
    assert_eq!(d.family_basis().tags(), vec![idx(&[1]), idx(&[2])]);
    assert!(!c.is_embedded());

    let lb = lower_bound(&c, &d).unwrap();
    let m1: Vec<(String, usize)> = lb
        .from_c
        .rows
        .iter()
        .map(|r| (fractal_core::family::format_index_set(&r.psi0), r.value))
        .collect();
    for (set, value) in [
        ("{1}", 12),
        ("{2}", 8),
        ("{12}", 4),
        ("{1,12}", 12),
        ("{12,2}", 8),
        ("{1,2}", 6),
        ("{1,12,2}", 6),
    ] {
        assert!(
            m1.contains(&(set.to_string(), value)),
            "{set} -> {value} missing from {m1:?}"
        );
    }
    let m2: Vec<usize> = lb.from_d.rows.iter().map(|r| r.value).collect();
    assert_eq!(m2, vec![12, 8, 4]);
    assert_eq!((lb.from_c.value, lb.from_d.value, lb.value), (4, 4, 4));
}

#[test]
fn punctured_golay_components() {
    let (c, d) = fixtures::p21_12_5();
    for code in c.codes() {
        assert_eq!((code.length(), code.dimension()), (7, 4));
        assert_eq!(code.min_distance().unwrap(), Distance::Finite(3));
    }
    let meet = c.intersection_code(idx(&[1, 2])).unwrap();
    assert_eq!(meet.generator().rows(), &[BitVector::ones(7)]);
    assert_eq!(c.alpha_of(&BitVector::ones(7)).unwrap(), idx(&[1, 2]));
    assert_eq!(dimension_formula(&c, &d).unwrap(), 12);
    assert_eq!(upper_bound(&c, &d).unwrap().value, 6);
    let lb = lower_bound(&c, &d).unwrap();
    assert_eq!((lb.from_c.value, lb.from_d.value), (3, 3));
    assert_eq!(construct(&c, &d).unwrap().min_distance().unwrap(), Distance::Finite(5));
}

#[test]
fn disjoint_seven_bit_components() {
    let (c, d) = fixtures::p21_x3();
    assert!(c.intersection_code(idx(&[1, 2])).unwrap().is_zero());
    let lb = lower_bound(&c, &d).unwrap();
    assert_eq!((lb.from_c.value, lb.from_d.value), (6, 4));
    let code = construct(&c, &d).unwrap();
    assert_eq!(
        (code.dimension(), code.min_distance().unwrap()),
        (9, Distance::Finite(8))
    );
}

#[test]
fn embedded_chain_table_is_flat() {
    let (c, d) = fixtures::p28_22_4();
    assert!(c.is_embedded() && !d.is_embedded() && d.is_acyclic());
    let tags: std::collections::BTreeSet<_> = c.family_basis().tags().into_iter().collect();
    assert_eq!(tags, [idx(&[1, 2, 3]), idx(&[2, 3]), idx(&[3])].into_iter().collect());
    let d_tags: std::collections::BTreeSet<_> = d.family_basis().tags().into_iter().collect();
    assert_eq!(d_tags, [idx(&[1]), idx(&[1, 2]), idx(&[1, 2, 3])].into_iter().collect());
    let lb = lower_bound(&c, &d).unwrap();
    assert_eq!(lb.from_c.rows.len(), 7);
    assert!(lb.from_c.rows.iter().all(|r| r.value == 4));
    let row = lb
        .from_c
        .rows
        .iter()
        .find(|r| r.psi0 == vec![idx(&[1, 2, 3]), idx(&[2, 3])])
        .unwrap();
    assert_eq!(
        row.psi0_star,
        vec![idx(&[1, 2]), idx(&[1, 3]), idx(&[2]), idx(&[2, 3]), idx(&[3])]
    );
    assert_eq!(row.psi0_star_minimal, vec![idx(&[2]), idx(&[3])]);
    assert_eq!(embedded_params(&c, &d.reversed()).unwrap(), (22, 4));
}

#[test]
fn reed_muller_equivalent_weights() {
    let (c, d) = fixtures::rm32_16_8();
    let code = construct(&c, &d).unwrap();
    let rm = LinearCode::reed_muller(2, 5);
    assert_eq!(
        code.weight_distribution(DEFAULT_BUDGET).unwrap(),
        rm.weight_distribution(DEFAULT_BUDGET).unwrap()
    );
    let chain = d.reversed();
    assert!(chain.is_embedded());
    assert_eq!(embedded_params(&c, &chain).unwrap(), (16, 8));
}

#[test]
fn u_uplusv_is_the_interleaved_construction() {
    let (c, d) = fixtures::u_uplusv();
    let built = construct(&c, &d).unwrap();
    let n = c.length();
    let mut rows: Vec<BitVector> = c.code(1).generator().rows().iter().map(|u| u.concat(u)).collect();
    rows.extend(
        c.code(2)
            .generator()
            .rows()
            .iter()
            .map(|v| BitVector::zeros(n).concat(v)),
    );
    let direct = LinearCode::from_rows(2 * n, rows).unwrap();
    assert_eq!(transposed_code(&built, n, 2), direct);
    assert_eq!(built.min_distance().unwrap(), Distance::Finite(8));
    assert_eq!(direct, LinearCode::reed_muller(1, 4));
}

#[test]
fn single_summand_is_the_tensor_product() {
    let c = CodeFamily::new(vec![LinearCode::from_text(&GOLAY_C1).unwrap()]).unwrap();
    let d = CodeFamily::new(vec![LinearCode::repetition(3)]).unwrap();
    let code = construct(&c, &d).unwrap();
    assert_eq!((code.length(), code.dimension()), (24, 4));
    assert_eq!(code.min_distance().unwrap(), Distance::Finite(12));
}

#[test]
fn corrupted_report_yields_one_finding() {
    let (c, d) = fixtures::golay24();
    let mut report = analyze(&c, &d, AnalyzeOptions::default()).unwrap();
    report.upper_bound = 7;
    let findings = verify(&report, &c, &d).unwrap();
    assert_eq!(findings, vec![Finding::ExactExceedsUpper { exact: 8, upper: 7 }]);
    assert!(findings[0].to_string().starts_with("exact exceeds upper"));
}

#[test]
fn witnesses_on_fixtures() {
    for fixture in fixtures::all() {
        let (c, d) = (fixture.build)();
        let w = upper_bound_witness(&c, &d).unwrap();
        let code = construct(&c, &d).unwrap();
        assert!(code.contains(&w.codeword).unwrap(), "{}", fixture.name);
        assert_eq!(w.codeword.weight(), fixture.expected.upper, "{}", fixture.name);
    }
}

#[test]
fn pruning_never_changes_lower_bound_on_fixtures() {
    for fixture in fixtures::all() {
        let (c, d) = (fixture.build)();
        let pruned = lower_bound_with(&c, &d, true).unwrap();
        let full = lower_bound_with(&c, &d, false).unwrap();
        assert_eq!(pruned.value, full.value, "{}", fixture.name);
        for (a, b) in pruned.from_c.rows.iter().zip(&full.from_c.rows) {
            assert_eq!(a.value, b.value, "{}", fixture.name);
        }
    }
}

#[test]
fn rank_of_golay_component_generators() {
    let m = BitMatrix::from_strs(&GOLAY_C1).unwrap();
    assert_eq!(m.rank(), 4);
    let c1 = LinearCode::from_text(&GOLAY_C1).unwrap();
    // Oracle: list all 16 codewords and look for the all-ones word.
    let rows = c1.generator().rows();
    let mut found = false;
    for mask in 0u32..16 {
        let mut v = BitVector::zeros(8);
        for (i, r) in rows.iter().enumerate() {
            if mask >> i & 1 == 1 {
                v.xor_assign(r).unwrap();
            }
        }
        found |= v == BitVector::ones(8);
    }
    assert_eq!(c1.contains(&BitVector::ones(8)).unwrap(), found);
    let c2 = LinearCode::from_text(&GOLAY_C2).unwrap();
    assert!(c2.contains(&BitVector::ones(8)).unwrap());
}
