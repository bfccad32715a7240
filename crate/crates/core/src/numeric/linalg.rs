use rug::{Complex, Float};

use super::ComplexMP;
use crate::error::{Error, Result};

/// Solve `A x = b` by Gaussian elimination with partial pivoting.
///
/// `rcond_floor` rejects pivots smaller than this fraction of the largest
/// entry, reported as degeneracy.
pub fn solve(mut a: Vec<Vec<ComplexMP>>, mut b: Vec<ComplexMP>, rcond_floor: f64) -> Result<Vec<ComplexMP>> {
    let n = b.len();
    assert!(a.len() == n && a.iter().all(|r| r.len() == n));
    if n == 0 {
        return Ok(vec![]);
    }
    let prec = b[0].prec().0;
    let scale = a
        .iter()
        .flatten()
        .map(|z| Float::with_val(64, z.abs_ref()).to_f64())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::Degenerate("zero Jacobian".into()));
    }
    for col in 0..n {
        let (piv, mag) = (col..n)
            .map(|r| (r, Float::with_val(64, a[r][col].abs_ref()).to_f64()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if mag <= scale * rcond_floor {
            return Err(Error::Degenerate(format!(
                "singular Jacobian at column {col} (pivot {mag:e}, scale {scale:e})"
            )));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = Complex::with_val(prec, a[col][col].recip_ref());
        for row in col + 1..n {
            let f = Complex::with_val(prec, &a[row][col] * &inv);
            if f.is_zero() {
                continue;
            }
            for k in col..n {
                let t = Complex::with_val(prec, &f * &a[col][k]);
                a[row][k] -= t;
            }
            let t = Complex::with_val(prec, &f * &b[col]);
            b[row] -= t;
        }
    }
    let mut x = vec![Complex::new(prec); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for k in row + 1..n {
            acc -= Complex::with_val(prec, &a[row][k] * &x[k]);
        }
        x[row] = acc / &a[row][row];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_system() {
        let c = |re: f64, im: f64| Complex::with_val(128, (re, im));
        let a = vec![vec![c(2.0, 0.0), c(1.0, 1.0)], vec![c(0.0, 1.0), c(3.0, 0.0)]];
        let x_true = [c(1.0, -1.0), c(0.5, 2.0)];
        let b: Vec<_> = a
            .iter()
            .map(|row| {
                Complex::with_val(128, &row[0] * &x_true[0]) + Complex::with_val(128, &row[1] * &x_true[1])
            })
            .collect();
        let x = solve(a, b, 1e-30).unwrap();
        for (u, v) in x.iter().zip(x_true.iter()) {
            assert!(Float::with_val(128, Complex::with_val(128, u - v).abs_ref()).to_f64() < 1e-30);
        }
    }

    #[test]
    fn singular_rejected() {
        let c = |re: f64| Complex::with_val(128, (re, 0.0));
        let a = vec![vec![c(1.0), c(2.0)], vec![c(2.0), c(4.0)]];
        assert!(solve(a, vec![c(1.0), c(1.0)], 1e-30).is_err());
    }
}
