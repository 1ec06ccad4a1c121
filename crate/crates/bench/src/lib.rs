//! Workload builders shared by the benchmarks.

use cat0_core::complex_core::{validate_cat0, Location};
use cat0_core::fixtures::{random_cone_complex, random_cone_points};
use cat0_core::single_vertex::{ConePoint, SingleVertexComplex};
use cat0_core::spm::fixtures::{random_grid, SpmFixture};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A CAT(0) triangulated grid with `2·m·n` faces and a corner source.
pub fn manifold_grid(m: usize, n: usize, seed: u64) -> SpmFixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let saddle = rng.gen_range(0.0..0.6);
        let c = random_grid(&mut rng, m, n, 0.25, saddle);
        if validate_cat0(&c).ok {
            return SpmFixture { complex: c, source: Location::Vertex(0) };
        }
    }
}

/// A random cone complex with `points` points.
pub fn hull_instance(rays: usize, points: usize, seed: u64) -> (SingleVertexComplex, Vec<ConePoint>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = random_cone_complex(&mut rng, rays);
    let p = random_cone_points(&mut rng, &c, points);
    (c, p)
}
