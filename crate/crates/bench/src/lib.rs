//! Programs shared by the benchmarks.

use flp_core::random::{random_program, ProgramShape};
use flp_core::{parse_program, Program};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const WEIGHTED: &str = "r <- 0.3 \\/ (s /\\ 0.6). s <- s.";
pub const CHOICE: &str = "p <- ~q \\/ r. q <- ~p \\/ s. r <- 0.3 \\/ (s /\\ 0.6). s <- s.";
pub const LOOP: &str = "p <- q. p <- p. q <- ~r. r <- ~q.";
pub const SELF_NEGATION: &str = "p <- p. p <- ~p.";

pub fn program(text: &str) -> Program {
    parse_program(text).expect("benchmark program parses")
}

/// `n` seeded random Gödel programs of the default shape.
pub fn corpus(n: usize, seed: u64) -> Vec<Program> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = ProgramShape::default();
    (0..n).map(|_| random_program(&mut rng, &shape)).collect()
}

/// A chain `a0 <- ~a1 \/ 0.k, a1 <- ~a2 ...` of `n` atoms.
pub fn negation_chain(n: usize) -> Program {
    let text: String = (0..n)
        .map(|i| {
            if i + 1 < n {
                format!("a{i} <- ~a{} \\/ 0.{}. ", i + 1, i % 10)
            } else {
                format!("a{i} <- 0.5. ")
            }
        })
        .collect();
    program(&text)
}
