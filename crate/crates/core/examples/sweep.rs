use std::time::Instant;

use laced::{avg_sensitivity_exact, weight_exact, LacedParams};
use num_traits::ToPrimitive;

fn main() {
    let ns: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("n")).collect();
    for n in ns {
        let params = LacedParams::new(n).expect("n >= 1");
        let start = Instant::now();
        let weight = weight_exact(&params);
        let w_time = start.elapsed();
        let start = Instant::now();
        let sens = avg_sensitivity_exact(&params);
        let s_time = start.elapsed();
        println!(
            "n={n} p={} weight_ratio={:.6} ({w_time:?}) sens_ratio={:.6} ({s_time:?})",
            params.p(),
            weight.to_f64().unwrap() / 2f64.powi(n as i32 - 1),
            sens.average.to_f64().unwrap() / n as f64,
        );
    }
}
