use wqed::model::make_params;
use wqed::tevolve::{fidelity_vs_analytic, GridSpec};

fn main() {
    let params = make_params(5.0, 1.0).unwrap();
    let grid = GridSpec::default_desk();
    eprintln!("grid: x in [{}, {}], n={}, dx={}, j0={}", grid.x_min, grid.x_max, grid.n_points, grid.dx, grid.index_of_zero());
    let t0 = std::time::Instant::now();
    let rep = fidelity_vs_analytic(&params, &grid, 10.0, 0.0, 8.0, 8.0).unwrap();
    eprintln!("resonant: {rep:?}  [{:.1?}]", t0.elapsed());
    let t0 = std::time::Instant::now();
    let rep = fidelity_vs_analytic(&params, &grid, 10.0 + 20.0, -0.5, 8.0, 8.0).unwrap();
    eprintln!("off-resonant: {rep:?}  [{:.1?}]", t0.elapsed());
}
