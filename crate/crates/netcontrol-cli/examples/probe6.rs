// Criterion 6 probe: rw vs random median on ER (n=200) and SF (n=500).
use netcontrol::gramian::MixedGramianSolver;
use netcontrol::netgen;
use netcontrol::placement;
use netcontrol_cli::runner::derive_seed;
use nalgebra::DMatrix;

fn bmat(n: usize, set: &[usize]) -> DMatrix<f64> {
    let mut b = DMatrix::<f64>::zeros(n, set.len());
    for (j, &d) in set.iter().enumerate() { b[(d, j)] = 1.0; }
    b
}

fn main() {
    let t0 = std::time::Instant::now();
    for p in [0.05f64, 0.1] {
        let n = 200;
        let mut wins = [0usize; 3];
        let mut cells = [0usize; 3];
        for r in 0..25u64 {
            let a = netgen::random_matrix_er(n, p, 0.0, 0.0, derive_seed(7, &[1, r])).unwrap();
            let solver = match MixedGramianSolver::with_default_tol(&a) { Ok(s) => s, Err(_) => continue };
            let order = placement::rank_by_rw(&a);
            for (mi, &m) in [10usize, 20, 40].iter().enumerate() {
                let rw = solver.metrics(&bmat(n, &order[..m])).map(|e| e.lambda_min);
                let mut rands: Vec<f64> = (0..11)
                    .filter_map(|d| {
                        let set = placement::random_placement(n, m, derive_seed(7, &[2, r, m as u64, d])).unwrap();
                        solver.metrics(&bmat(n, &set)).map(|e| e.lambda_min).ok()
                    })
                    .collect();
                if rands.len() < 6 { continue; }
                rands.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let med = rands[rands.len() / 2];
                if let Ok(rw) = rw {
                    cells[mi] += 1;
                    if rw >= med { wins[mi] += 1; }
                }
            }
        }
        println!("ER p={p}: wins per m {:?} of cells {:?}", wins, cells);
    }
    println!("elapsed {:?}", t0.elapsed());

    // SF at n=500
    let n = 500;
    let mut factors = Vec::new();
    for r in 0..9u64 {
        let a = netgen::sf_adjacency_resampled(n, 3.14, 2.87, derive_seed(7, &[3, r]), derive_seed(7, &[4, r])).unwrap();
        let solver = match MixedGramianSolver::with_default_tol(&a) { Ok(s) => s, Err(e) => { println!("r={r}: split failed {e}"); continue } };
        let m = 50;
        let order = placement::rank_by_rw(&a);
        let rw = solver.metrics(&bmat(n, &order[..m])).map(|e| e.lambda_min);
        let mut rands: Vec<f64> = (0..9)
            .filter_map(|d| {
                let set = placement::random_placement(n, m, derive_seed(7, &[5, r, d])).unwrap();
                solver.metrics(&bmat(n, &set)).map(|e| e.lambda_min).ok()
            })
            .collect();
        rands.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if rands.is_empty() { println!("r={r}: all random singular"); continue; }
        let med = rands[rands.len() / 2];
        match rw {
            Ok(v) => { println!("r={r}: rw {v:.3e} random_med {med:.3e} factor {:.1}", v / med); factors.push(v / med); }
            Err(e) => println!("r={r}: rw failed {e}"),
        }
    }
    factors.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if !factors.is_empty() {
        println!("SF median improvement factor: {:.2}", factors[factors.len()/2]);
    }
    println!("total elapsed {:?}", t0.elapsed());
}
