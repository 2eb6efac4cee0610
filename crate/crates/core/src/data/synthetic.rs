//! Seeded generator of plausible Use Case Point project tables.
//!
//! The generated columns follow [`UCP_COLUMNS`](super::UCP_COLUMNS) and the
//! effort is UCP times a methodology-dependent productivity with
//! multiplicative noise. Used by the runnable examples and the tests; it is
//! not a stand-in for real project data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Dataset, DEFAULT_TARGET, UCP_COLUMNS};
use crate::ucp::{self, GradedCounts, DEFAULT_EF, DEFAULT_TCF};

pub fn ucp_projects(n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(n);
    let mut targets = Vec::with_capacity(n);
    for _ in 0..n {
        let donator = rng.gen_range(0..3) as f64;
        let agile = rng.gen_bool(0.5);
        let actors = GradedCounts::new(
            rng.gen_range(0..6) as f64,
            rng.gen_range(0..6) as f64,
            rng.gen_range(0..7) as f64,
        );
        let use_cases = GradedCounts::new(
            rng.gen_range(0..16) as f64,
            rng.gen_range(5..26) as f64,
            rng.gen_range(0..16) as f64,
        );
        let tfactor: f64 = rng.gen_range(10.0..50.0);
        let efactor: f64 = rng.gen_range(5.0..30.0);

        let uaw = ucp::compute_uaw(&actors, ucp::KARNER_ACTOR_WEIGHTS).unwrap();
        let uucw = ucp::compute_uucw(&use_cases, ucp::KARNER_USE_CASE_WEIGHTS).unwrap();
        let tcf = ucp::compute_tcf(tfactor, DEFAULT_TCF.intercept, DEFAULT_TCF.slope);
        let ef = ucp::compute_ef(efactor, DEFAULT_EF.intercept, DEFAULT_EF.slope);
        let points = ucp::compute_ucp(uaw, uucw, tcf, ef).unwrap().ucp;

        let productivity = if agile { 16.0 } else { 22.0 };
        let noise: f64 = rng.gen_range(0.85..1.15);

        rows.push(vec![
            donator,
            if agile { 1.0 } else { 0.0 },
            actors.simple,
            actors.average,
            actors.complex,
            uaw,
            use_cases.simple,
            use_cases.average,
            use_cases.complex,
            uucw,
            tfactor,
            efactor,
            20.0 * points,
        ]);
        targets.push(points * productivity * noise);
    }
    Dataset::new(
        UCP_COLUMNS.iter().map(|s| s.to_string()).collect(),
        rows,
        targets,
        DEFAULT_TARGET,
    )
    .expect("generator produces well-formed rows")
}
