//! The Σ|c_i| / P reference scale for the bundled problems.

use regvqe::pauli::{abs_coefficient_sum, generate_rfim};
use regvqe::stats::lambda_scale;
use regvqe::{data, AnsatzSpec, RfimSpec, WeightedPauliSum};

fn main() -> regvqe::Result<()> {
    let cases: [(&str, WeightedPauliSum, AnsatzSpec); 3] = [
        ("H2", data::h2(), AnsatzSpec::two_local(4, 4)),
        ("LiH", data::lih(), AnsatzSpec::two_local(8, 4)),
        ("RFIM", generate_rfim(&RfimSpec::calibrated(12, 7))?, AnsatzSpec::ry_layer(12)),
    ];
    for (name, h, spec) in &cases {
        let p = spec.param_count();
        println!("{name:<5} sum|c| = {:>8.4}  P = {p:>2}  lambda_scale = {:.4}", abs_coefficient_sum(h), lambda_scale(h, p)?);
    }
    Ok(())
}
