//! Matrix exponential by scaling-and-squaring with diagonal Padé approximants.
//!
//! Follows Higham, "The Scaling and Squaring Method for the Matrix Exponential
//! Revisited" (2005): pick the smallest Padé order in {3,5,7,9,13} whose accuracy
//! bound covers ||A||_1, falling back to order 13 with 2^s scaling.

use nalgebra::DMatrix;

use crate::error::Result;
use crate::matfun::check_square;

const THETA_3: f64 = 1.495585217958292e-2;
const THETA_5: f64 = 2.539398330063230e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068e0;
const THETA_13: f64 = 5.371920351148152e0;

/// e^{A t}. Exact (to roundoff) for diagonal and nilpotent inputs.
pub fn expm(a: &DMatrix<f64>, t: f64) -> Result<DMatrix<f64>> {
    check_square(a, "expm input")?;
    if !t.is_finite() {
        return Err(crate::error::Error::invalid("expm: t must be finite"));
    }
    let at = a * t;
    Ok(expm_inner(&at))
}

fn expm_inner(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let norm = one_norm(a);

    if norm <= THETA_3 {
        return pade(a, &[120.0, 60.0, 12.0, 1.0]);
    }
    if norm <= THETA_5 {
        return pade(a, &[30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0]);
    }
    if norm <= THETA_7 {
        return pade(
            a,
            &[
                17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
            ],
        );
    }
    if norm <= THETA_9 {
        return pade(
            a,
            &[
                17643225600.0,
                8821612800.0,
                2075673600.0,
                302702400.0,
                30270240.0,
                2162160.0,
                110880.0,
                3960.0,
                90.0,
                1.0,
            ],
        );
    }

    // Order 13 with scaling by 2^s so that ||A/2^s|| <= theta_13.
    let s = ((norm / THETA_13).log2().ceil().max(0.0)) as u32;
    let scaled = a / 2f64.powi(s as i32);
    let mut e = pade13(&scaled);
    for _ in 0..s {
        e = &e * &e;
    }
    let _ = n;
    e
}

fn one_norm(a: &DMatrix<f64>) -> f64 {
    let mut best = 0.0f64;
    for j in 0..a.ncols() {
        let s: f64 = a.column(j).iter().map(|x| x.abs()).sum();
        best = best.max(s);
    }
    best
}

/// Diagonal Padé of odd order given coefficients b_0..b_m:
/// U = A (b_m A^{m-1} + ... ) odd part, V even part, result (V-U)^{-1}(V+U).
fn pade(a: &DMatrix<f64>, b: &[f64]) -> DMatrix<f64> {
    let n = a.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let a2 = a * a;

    // Powers A^0, A^2, A^4, ...
    let mut even_pows = vec![id.clone()];
    let half = b.len() / 2;
    for _ in 1..half {
        let last = even_pows.last().unwrap();
        even_pows.push(last * &a2);
    }

    let mut u_poly = DMatrix::<f64>::zeros(n, n);
    let mut v = DMatrix::<f64>::zeros(n, n);
    for (k, pw) in even_pows.iter().enumerate() {
        u_poly += pw * b[2 * k + 1];
        v += pw * b[2 * k];
    }
    let u = a * u_poly;
    solve_pade(&u, &v)
}

fn pade13(a: &DMatrix<f64>) -> DMatrix<f64> {
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    let n = a.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    let u = a * (&a6 * (&a6 * B[13] + &a4 * B[11] + &a2 * B[9])
        + &a6 * B[7]
        + &a4 * B[5]
        + &a2 * B[3]
        + &id * B[1]);
    let v = &a6 * (&a6 * B[12] + &a4 * B[10] + &a2 * B[8])
        + &a6 * B[6]
        + &a4 * B[4]
        + &a2 * B[2]
        + &id * B[0];
    solve_pade(&u, &v)
}

fn solve_pade(u: &DMatrix<f64>, v: &DMatrix<f64>) -> DMatrix<f64> {
    let denom = v - u;
    let numer = v + u;
    denom
        .lu()
        .solve(&numer)
        .unwrap_or_else(|| DMatrix::from_element(u.nrows(), u.ncols(), f64::NAN))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    #[test]
    fn t_zero_gives_identity() {
        let a = dmatrix![1.0, 2.0; 3.0, -4.0];
        let e = expm(&a, 0.0).unwrap();
        assert!((e - DMatrix::identity(2, 2)).norm() < 1e-15);
    }

    #[test]
    fn diagonal_exponential() {
        let a = dmatrix![-1.0, 0.0; 0.0, 2.0];
        let e = expm(&a, 1.0).unwrap();
        assert!((e[(0, 0)] - (-1.0f64).exp()).abs() < 1e-14);
        assert!((e[(1, 1)] - 2.0f64.exp()).abs() < 1e-13);
        assert!(e[(0, 1)].abs() < 1e-16 && e[(1, 0)].abs() < 1e-16);
    }

    #[test]
    fn nilpotent_series_terminates() {
        let a = dmatrix![0.0, 1.0; 0.0, 0.0];
        let e = expm(&a, 1.0).unwrap();
        let expected = dmatrix![1.0, 1.0; 0.0, 1.0];
        assert!((e - expected).norm() < 1e-15);
    }

    #[test]
    fn rotation_matrix() {
        // Generator of rotations: exp([[0,-1],[1,0]]*pi/2) maps e1 to e2.
        let a = dmatrix![0.0, -1.0; 1.0, 0.0];
        let e = expm(&a, std::f64::consts::FRAC_PI_2).unwrap();
        let expected = dmatrix![0.0, -1.0; 1.0, 0.0];
        assert!((e - expected).norm() < 1e-13);
    }

    #[test]
    fn rejects_non_finite() {
        let a = dmatrix![f64::NAN, 0.0; 0.0, 1.0];
        assert!(expm(&a, 1.0).is_err());
    }

    #[test]
    fn group_law_large_argument() {
        // exp(A s) exp(A t) = exp(A (s+t)) with ||A||(s+t) around 20.
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let n = 8;
        let a = DMatrix::from_fn(n, n, |_, _| rng.random::<f64>() - 0.5);
        let nrm = a.norm();
        let total = 20.0 / nrm;
        let s = 0.3 * total;
        let t = total - s;
        let es = expm(&a, s).unwrap();
        let et = expm(&a, t).unwrap();
        let est = expm(&a, total).unwrap();
        let err = (&es * &et - &est).norm() / est.norm();
        assert!(err < 1e-9, "group law error {err:e}");
    }
}
