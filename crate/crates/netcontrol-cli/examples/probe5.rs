// Shifted-disk compression ladder: per-cell trace / trace_inv chains.
use netcontrol::gramian::MixedGramianSolver;
use netcontrol::netgen;
use netcontrol::placement;
use netcontrol_cli::runner::derive_seed;
use nalgebra::DMatrix;

fn main() {
    let n = 100;
    let m = 10;
    let centers = [-1.8f64, -1.5, -1.25, -1.05];
    let total = 25u64;
    let mut tr_ok = 0;
    let mut ti_ok = 0;
    let t0 = std::time::Instant::now();
    for cell in 0..total {
        let order = placement::random_placement(n, n, derive_seed(42, &[1, cell])).unwrap();
        let mut b = DMatrix::<f64>::zeros(n, m);
        for (j, &d) in order[..m].iter().enumerate() { b[(d, j)] = 1.0; }
        let mut traces = Vec::new();
        let mut tinvs = Vec::new();
        for (pi, &c) in centers.iter().enumerate() {
            let a = netgen::random_matrix_circular(n, c, derive_seed(42, &[2, pi as u64, cell])).unwrap();
            let e = MixedGramianSolver::with_default_tol(&a).and_then(|sv| sv.metrics(&b)).unwrap();
            traces.push(e.trace);
            tinvs.push(e.trace_inv);
        }
        if traces.windows(2).all(|w| w[0] < w[1]) { tr_ok += 1; }
        if tinvs.windows(2).all(|w| w[0] > w[1]) { ti_ok += 1; }
        if cell < 2 {
            println!("cell {cell}: tr {traces:?}");
            println!("cell {cell}: ti {tinvs:?}");
        }
    }
    println!("trace chains {tr_ok}/{total}, trace_inv chains {ti_ok}/{total}, elapsed {:?}", t0.elapsed());
}
