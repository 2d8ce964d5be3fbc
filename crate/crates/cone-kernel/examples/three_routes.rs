//! Evaluates one propagator kernel value by all three routes and prints the
//! mutual agreement.
//!
//! ```sh
//! cargo run --example three_routes -- 0.7 0.5 1.2 0.9 1.5 0.1
//! # rho, t, r1, theta1, r2, theta2 (all optional, defaults shown)
//! ```

use cone_kernel::asymptotic::s_uniform;
use cone_kernel::contour::{s_contour, ContourSpec};
use cone_kernel::series::{s_series, SeriesConfig};
use cone_kernel::{assemble_kernel, reduce, ConeGeometry, KernelQuery};

fn main() {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    let get = |i: usize, d: f64| args.get(i).copied().unwrap_or(d);
    let g = ConeGeometry::new(get(0, 0.7)).expect("rho > 0");
    let q = KernelQuery::new(
        get(1, 0.5),
        get(2, 1.2),
        get(3, 0.9),
        get(4, 1.5),
        get(5, 0.1),
    )
    .expect("valid query");
    let red = reduce(&q, &g);
    println!("rho = {}, x = {:.6}, eta = {:.6}", g.rho(), red.x, red.eta);

    let series = s_series(red.x, red.eta, &g, &SeriesConfig::default()).expect("series");
    let k = assemble_kernel(&series, &q, &g).unwrap();
    println!(
        "series : K = {:+.12e} {:+.12e} i  (err ~{:.1e})",
        k.value.re, k.value.im, k.abs_err
    );

    match s_contour(red.x, red.eta, &g, &ContourSpec::default()) {
        Ok(c) => {
            let k2 = assemble_kernel(&c, &q, &g).unwrap();
            println!(
                "contour: K = {:+.12e} {:+.12e} i  (diff {:.1e})",
                k2.value.re,
                k2.value.im,
                (k2.value - k.value).norm()
            );
        }
        Err(e) => println!("contour: {e}"),
    }

    match s_uniform(red.x, red.eta, &g, 2) {
        Ok(u) => {
            let k3 = assemble_kernel(&u, &q, &g).unwrap();
            println!(
                "uniform: K = {:+.12e} {:+.12e} i  (diff {:.1e})",
                k3.value.re,
                k3.value.im,
                (k3.value - k.value).norm()
            );
        }
        Err(e) => println!("uniform: {e}"),
    }
}
