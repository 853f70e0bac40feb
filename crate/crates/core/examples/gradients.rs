//! Parameter-shift gradients against central finite differences.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regvqe::{data, AnsatzSpec, Objective};

fn main() -> regvqe::Result<()> {
    let spec = AnsatzSpec::two_local(4, 2);
    let mut obj = Objective::new(Arc::new(data::h2()), spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let theta: Vec<f64> = (0..spec.param_count()).map(|_| rng.random_range(-3.0..3.0)).collect();

    let before = obj.eval_count();
    let ps = obj.parameter_shift_gradient(&theta)?;
    println!("parameter shift: {} evaluations for P={}", obj.eval_count() - before, spec.param_count());
    let fd = obj.finite_difference_gradient(&theta, 1e-5)?;
    let dev = ps.iter().zip(&fd).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("max |ps - fd| = {dev:.3e}");

    obj.set_lambda(0.1)?;
    let g = obj.gradient(&theta)?;
    println!("with lambda=0.1, dF/dθ0 = {:.6} = {:.6} + 2·0.1·{:.6}", g[0], ps[0], theta[0]);
    Ok(())
}
