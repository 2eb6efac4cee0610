//! Use case points for a small project, step by step.

use rfnn::ucp::{
    compute_ef, compute_tcf, compute_tfactor, compute_uaw, compute_ucp, compute_uucw, FactorRatings, GradedCounts,
    DEFAULT_EF, DEFAULT_TCF, KARNER_ACTOR_WEIGHTS, KARNER_USE_CASE_WEIGHTS,
};

fn main() -> rfnn::Result<()> {
    let actors = GradedCounts::new(2.0, 1.0, 3.0);
    let use_cases = GradedCounts::new(5.0, 10.0, 2.0);
    let uaw = compute_uaw(&actors, KARNER_ACTOR_WEIGHTS)?;
    let uucw = compute_uucw(&use_cases, KARNER_USE_CASE_WEIGHTS)?;

    let technical = FactorRatings::technical_example();
    let environmental = FactorRatings::from_pairs(&[(1.5, 3.0), (0.5, 3.0), (1.0, 3.0), (0.5, 3.0), (1.0, 3.0), (2.0, 3.0), (-1.0, 3.0), (-1.0, 3.0)]);
    let tfactor = compute_tfactor(&technical)?;
    let efactor = compute_tfactor(&environmental)?;
    let tcf = compute_tcf(tfactor, DEFAULT_TCF.intercept, DEFAULT_TCF.slope);
    let ef = compute_ef(efactor, DEFAULT_EF.intercept, DEFAULT_EF.slope);

    let ucp = compute_ucp(uaw, uucw, tcf, ef)?;
    println!("UAW {uaw}, UUCW {uucw}, UUCP {}", ucp.uucp);
    println!("TFactor {tfactor} -> TCF {tcf:.3}");
    println!("EFactor {efactor} -> EF {ef:.3}");
    println!("UCP {:.2}", ucp.ucp);
    Ok(())
}
