//! Fixed formula corpora for the law suites and the CLI.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{Axiom, Formula};

pub const DEFAULT_SEED: u64 = 2024;

/// Number of formulas in [`standard_corpus`].
pub const CORPUS_SIZE: usize = 200;

/// Every A1–A15 instance whose slots are filled with the atoms `p` and `q` (90 formulas).
pub fn axiom_corpus() -> Vec<Formula> {
    let atoms = [Formula::atom("p"), Formula::atom("q")];
    let mut out = Vec::new();
    for ax in Axiom::ALL {
        let k = ax.arity();
        for code in 0..1usize << k {
            let args: Vec<Formula> = (0..k).map(|i| atoms[code >> (k - 1 - i) & 1].clone()).collect();
            out.push(ax.instantiate(&args).expect("atoms fill every slot"));
        }
    }
    out
}

/// A random formula over `p`, `q` and `_|_` of depth at most `depth`.
pub fn random_formula<R: Rng>(rng: &mut R, depth: usize) -> Formula {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return match rng.gen_range(0..5) {
            0 => Formula::Bot,
            1 | 2 => Formula::atom("p"),
            _ => Formula::atom("q"),
        };
    }
    let l = random_formula(rng, depth - 1);
    match rng.gen_range(0..6) {
        0 => Formula::not(l),
        1 => Formula::and(l, random_formula(rng, depth - 1)),
        2 => Formula::or(l, random_formula(rng, depth - 1)),
        3 => Formula::tensor(l, random_formula(rng, depth - 1)),
        _ => Formula::imp(l, random_formula(rng, depth - 1)),
    }
}

/// `count` random formulas of depth at most 3 from a seeded ChaCha8 stream.
pub fn random_corpus(seed: u64, count: usize) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_formula(&mut rng, 3)).collect()
}

/// The axiom corpus followed by random formulas, 200 in total.
pub fn standard_corpus(seed: u64) -> Vec<Formula> {
    let mut out = axiom_corpus();
    let rest = CORPUS_SIZE - out.len();
    out.extend(random_corpus(seed, rest));
    out
}
