//! Seeded fixtures shared by the benchmarks.

use modlab_core::sample::{random_kripke, random_monotone_nbd, random_valuation};
use modlab_core::{Frame, Model, Var};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn vars() -> Vec<Var> {
    vec![modlab_core::formula::var("p"), modlab_core::formula::var("q")]
}

fn pair(seed: u64, n: usize, frame: impl Fn(&mut ChaCha8Rng) -> Frame) -> (Model, Model) {
    let mut r = rng(seed);
    let mut model = || {
        let f = frame(&mut r);
        let val = random_valuation(&mut r, n, &vars());
        Model::new(f, val).expect("sized to the frame")
    };
    (model(), model())
}

/// Two random Kripke models on `n` worlds over `p, q`.
pub fn kripke_pair(seed: u64, n: usize) -> (Model, Model) {
    pair(seed, n, |r| Frame::Kripke(random_kripke(r, n, 0.3)))
}

/// Two random monotone neighborhood models on `n` worlds over `p, q`.
pub fn nbd_pair(seed: u64, n: usize) -> (Model, Model) {
    pair(seed, n, |r| Frame::Nbd(random_monotone_nbd(r, n, false)))
}
