//! Built-in example families with their expected parameters.
//!
//! Each fixture builds a pair `(C, D)` of families. Expected values marked
//! "enumerated" were computed by brute-force span enumeration outside this
//! crate; the others follow from the constructions (noted inline).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::code::{LinearCode, DEFAULT_BUDGET};
use crate::error::Result;
use crate::family::CodeFamily;
use crate::gf2::{BitMatrix, BitVector};

/// Expected report values for a fixture.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Expected {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub upper: usize,
    pub lower: usize,
    pub theorem_b_applies: bool,
    /// Closed-form `(κ, δ)` for embedded chains, evaluated on `(C, D reversed)`.
    pub embedded_params: Option<(usize, usize)>,
}

#[derive(Clone, Copy)]
pub struct ExampleFixture {
    pub name: &'static str,
    pub title: &'static str,
    pub build: fn() -> (CodeFamily, CodeFamily),
    pub expected: Expected,
}

impl std::fmt::Debug for ExampleFixture {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExampleFixture")
            .field("name", &self.name)
            .field("expected", &self.expected)
            .finish()
    }
}

fn code(rows: &[&str]) -> LinearCode {
    LinearCode::from_text(rows).expect("fixture rows are well formed")
}

fn family(codes: Vec<LinearCode>) -> CodeFamily {
    CodeFamily::new(codes).expect("fixture families are valid")
}

pub const GOLAY_C1: [&str; 4] = ["...11.11", "..11.1.1", ".11.1..1", "11.1...1"];
pub const GOLAY_C2: [&str; 4] = ["1.11...1", ".1.11..1", "..1.11.1", "...1.111"];

/// The 12-row generator of the (24,12,8) Golay code, laid out as
/// `Σ D_i ⊗ C_i`: three consecutive 8-bit blocks, one per coordinate of the
/// length-3 factor.
pub const GOLAY_PRINTED: [&str; 12] = [
    "...11.11...11.11...11.11",
    "..11.1.1..11.1.1..11.1.1",
    ".11.1..1.11.1..1.11.1..1",
    "11.1...111.1...111.1...1",
    "........1.11...11.11...1",
    ".........1.11..1.1.11..1",
    "..........1.11.1..1.11.1",
    "...........1.111...1.111",
    "1.11...11.11...1........",
    ".1.11..1.1.11..1........",
    "..1.11.1..1.11.1........",
    "...1.111...1.111........",
];

pub fn golay_printed_generator() -> BitMatrix {
    BitMatrix::from_strs(&GOLAY_PRINTED).expect("well formed")
}

/// `{(3,1,3), (3,2,2)}`: the repetition code and the even-weight code of length 3.
pub fn turyn_d_family() -> CodeFamily {
    family(vec![code(&["111"]), code(&[".11", "11."])])
}

pub fn golay24() -> (CodeFamily, CodeFamily) {
    (family(vec![code(&GOLAY_C1), code(&GOLAY_C2)]), turyn_d_family())
}

/// Both Golay components punctured at the last coordinate: two (7,4,3) codes
/// meeting in `{0, 1111111}`.
pub fn p21_12_5() -> (CodeFamily, CodeFamily) {
    let c1 = code(&GOLAY_C1).puncture(7).expect("in range");
    let c2 = code(&GOLAY_C2).puncture(7).expect("in range");
    (family(vec![c1, c2]), turyn_d_family())
}

fn p21_x3_c1() -> LinearCode {
    code(&GOLAY_C1[1..]).puncture(6).expect("in range")
}

fn p21_x3_c2() -> LinearCode {
    code(&GOLAY_C2[..3]).puncture(6).expect("in range")
}

/// Two (7,3,4) codes with zero intersection: first row of the first Golay
/// component and last row of the second dropped, then coordinate 6 deleted
/// from both.
pub fn p21_x3() -> (CodeFamily, CodeFamily) {
    (family(vec![p21_x3_c1(), p21_x3_c2()]), turyn_d_family())
}

/// `C = (7,3,4) ⊂ (7,6,2) ⊂ (7,7,1)` against `D = (4,4,1) ⊃ (4,3,2) ⊃ (4,1,4)`.
pub fn p28_22_4() -> (CodeFamily, CodeFamily) {
    let c = family(vec![p21_x3_c2(), LinearCode::even_weight(7), LinearCode::universe(7)]);
    let d = family(vec![
        LinearCode::universe(4),
        LinearCode::even_weight(4),
        LinearCode::repetition(4),
    ]);
    (c, d)
}

/// `C = (4,1,4) ⊂ (4,3,2) ⊂ (4,4,1)` paired against the reversed chain
/// `(8,1,8) ⊂ (8,4,4) ⊂ (8,7,2)`, so `C_i` meets `D_{s-i+1}`.
pub fn rm32_16_8() -> (CodeFamily, CodeFamily) {
    let c = family(vec![
        LinearCode::repetition(4),
        LinearCode::even_weight(4),
        LinearCode::universe(4),
    ]);
    let d_chain = family(vec![
        LinearCode::repetition(8),
        LinearCode::reed_muller(1, 3),
        LinearCode::even_weight(8),
    ]);
    (c, d_chain.reversed())
}

/// `D_1 = {00, 11}` and `D_2 = {00, 01}`.
pub fn u_uplusv_d_family() -> CodeFamily {
    family(vec![code(&["11"]), code(&["01"])])
}

/// `(u, u+v)` with `u ∈ RM(1,3)` and `v` in the length-8 repetition code.
pub fn u_uplusv() -> (CodeFamily, CodeFamily) {
    let c = family(vec![LinearCode::reed_muller(1, 3), LinearCode::repetition(8)]);
    (c, u_uplusv_d_family())
}

/// `(a+x, b+x, a+b+x)` with `x` in the first Golay component and `a, b` in RM(1,3).
pub fn turyn_axbx() -> (CodeFamily, CodeFamily) {
    let c = family(vec![code(&GOLAY_C1), LinearCode::reed_muller(1, 3)]);
    (c, turyn_d_family())
}

pub fn all() -> Vec<ExampleFixture> {
    vec![
        ExampleFixture {
            name: "golay24",
            title: "Turyn-type (24,12,8) Golay code",
            build: golay24,
            expected: Expected {
                n: 24,
                k: 12,
                d: 8,
                upper: 8,
                lower: 4,
                theorem_b_applies: false,
                embedded_params: None,
            },
        },
        ExampleFixture {
            name: "p21_12_5",
            title: "(21,12,5) code from punctured Golay components",
            build: p21_12_5,
            expected: Expected {
                n: 21,
                k: 12,
                d: 5,
                upper: 6,
                // Both tag walks bottom out at 3 = 3·1 (the {1,2} rows). The
                // available distances are {1,3,7} and {1,2,3}, so 4 is not a
                // reachable product.
                lower: 3,
                theorem_b_applies: false,
                embedded_params: None,
            },
        },
        ExampleFixture {
            // Sometimes quoted as (21,8,9); the dimension is 3·1 + 3·2 = 9 and
            // the enumerated distance is 8.
            name: "p21_x3",
            title: "(21,9,8) code from two disjoint (7,3,4) codes",
            build: p21_x3,
            expected: Expected {
                n: 21,
                k: 9,
                d: 8,
                upper: 8,
                lower: 6,
                theorem_b_applies: false,
                embedded_params: None,
            },
        },
        ExampleFixture {
            name: "p28_22_4",
            title: "(28,22,4) code from an embedded chain",
            build: p28_22_4,
            expected: Expected {
                n: 28,
                k: 22,
                d: 4,
                upper: 4,
                lower: 4,
                theorem_b_applies: true,
                embedded_params: Some((22, 4)),
            },
        },
        ExampleFixture {
            name: "rm32_16_8",
            title: "(32,16,8) code with the RM(2,5) weight distribution",
            build: rm32_16_8,
            expected: Expected {
                n: 32,
                k: 16,
                d: 8,
                upper: 8,
                lower: 8,
                theorem_b_applies: true,
                embedded_params: Some((16, 8)),
            },
        },
        ExampleFixture {
            name: "u_uplusv",
            title: "|u|u+v| construction, here RM(1,4) = (16,5,8)",
            build: u_uplusv,
            expected: Expected {
                n: 16,
                k: 5,
                d: 8,
                upper: 8,
                lower: 8,
                theorem_b_applies: false,
                embedded_params: None,
            },
        },
        ExampleFixture {
            name: "turyn_axbx",
            title: "|a+x|b+x|a+b+x| construction with overlapping components",
            build: turyn_axbx,
            // Enumerated: k = 4·1 + 4·2 - 2·0 = 12 and d = 4.
            expected: Expected {
                n: 24,
                k: 12,
                d: 4,
                upper: 4,
                lower: 4,
                theorem_b_applies: false,
                embedded_params: None,
            },
        },
    ]
}

pub fn by_name(name: &str) -> Option<ExampleFixture> {
    all().into_iter().find(|f| f.name == name)
}

pub fn names() -> Vec<&'static str> {
    all().iter().map(|f| f.name).collect()
}

/// A random nonzero code of length `n` spanned by `rows` random vectors.
pub fn random_code<R: Rng>(rng: &mut R, n: usize, rows: usize) -> LinearCode {
    loop {
        let gen = (0..rows)
            .map(|_| {
                let bits: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
                BitVector::from_bits(&bits)
            })
            .collect();
        let c = LinearCode::from_rows(n, gen).expect("uniform rows");
        if !c.is_zero() {
            return c;
        }
    }
}

/// A seeded `|u|u+v|` instance: two random codes of length `2..=max_n` with
/// at most `max_k` generator rows each, against [`u_uplusv_d_family`].
pub fn u_uplusv_random(seed: u64, max_n: usize, max_k: usize) -> (CodeFamily, CodeFamily) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=max_n);
    let (k1, k2) = (rng.gen_range(1..=max_k), rng.gen_range(1..=max_k));
    let c1 = random_code(&mut rng, n, k1);
    let c2 = random_code(&mut rng, n, k2);
    (family(vec![c1, c2]), u_uplusv_d_family())
}

/// `min(2·d1, d2)` for a `|u|u+v|` pair.
pub fn u_uplusv_prediction(c: &CodeFamily) -> Result<usize> {
    let d1 = c.code(1).min_distance_with_budget(DEFAULT_BUDGET)?;
    let d2 = c.code(2).min_distance_with_budget(DEFAULT_BUDGET)?;
    let d1 = d1.finite().expect("nonzero member");
    let d2 = d2.finite().expect("nonzero member");
    Ok((2 * d1).min(d2))
}
