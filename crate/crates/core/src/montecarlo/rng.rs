//! Per-path random streams.
//!
//! Every path owns a ChaCha8 stream keyed by `(master seed, path index)`;
//! the step index is the position inside that stream. Results therefore do
//! not depend on how paths are distributed over workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type PathRng = ChaCha8Rng;

pub fn path_rng(master_seed: u64, path_index: u64) -> PathRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(path_index);
    rng
}
