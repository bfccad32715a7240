//! Simultaneous Aberth iteration with inclusion radii.

use rug::{Complex, Float};

use super::cpoly::CPoly;
use super::ComplexMP;
use crate::error::{Error, Result};

/// A disc `|z - center| ≤ radius` that contains a root.
#[derive(Clone, Debug)]
pub struct RootBox {
    pub center: ComplexMP,
    pub radius: Float,
}

/// All `deg p` roots of `p`, each refined until its inclusion radius drops
/// below `2^(-prec/2)`.
///
/// Iteration runs at roughly twice the requested precision so that clusters
/// from multiple roots still meet the radius target.
pub fn roots(p: &CPoly, prec: u32) -> Result<Vec<RootBox>> {
    let n = p.degree();
    if p.coeffs.len() < 2 {
        return Err(Error::InvalidInput("root finding needs a nonconstant polynomial".into()));
    }
    let wp = 2 * prec + 64;
    let p = p.set_prec(wp);
    let lc = p.coeffs[n].clone();
    let norm = p.norm_inf();
    if super::abs_f64(&lc) <= norm * 1e-60 {
        return Err(Error::Degenerate("leading coefficient vanishes at tolerance".into()));
    }
    let target = Float::with_val(64, Float::i_exp(1, -((prec / 2) as i32)));

    if n == 1 {
        let c = Complex::with_val(wp, -&p.coeffs[0]) / &lc;
        return Ok(vec![RootBox { center: c, radius: Float::new(64) }]);
    }

    let mut z = initial_guesses(&p, wp);
    let dp = p.derivative();
    let tiny = Float::with_val(wp, Float::i_exp(1, -(wp as i32) + 16));
    let cap = 200 + 40 * n;
    let mut history: Vec<f64> = Vec::new();
    for iter in 0..cap {
        let mut max_step = Float::new(wp);
        let mut max_mag = Float::with_val(wp, 1);
        for i in 0..n {
            let pv = p.eval(&z[i]);
            if pv.is_zero() {
                continue;
            }
            let dv = dp.eval(&z[i]);
            let mut sum = Complex::new(wp);
            for j in 0..n {
                if j != i {
                    let d = Complex::with_val(wp, &z[i] - &z[j]);
                    if !d.is_zero() {
                        sum += d.recip();
                    }
                }
            }
            let step = if dv.is_zero() {
                // stationary point: nudge off it
                Complex::with_val(wp, (Float::i_exp(1, -(wp as i32) / 4), 0)) * (i as u32 + 1)
            } else {
                let w = Complex::with_val(wp, &pv / &dv);
                let den = Complex::with_val(wp, 1) - Complex::with_val(wp, &w * &sum);
                if den.is_zero() {
                    w
                } else {
                    w / den
                }
            };
            let mag = Float::with_val(wp, step.abs_ref());
            if mag > max_step {
                max_step = mag;
            }
            let zm = Float::with_val(wp, z[i].abs_ref());
            if zm > max_mag {
                max_mag = zm;
            }
            z[i] -= step;
        }
        let rel = Float::with_val(wp, &max_step / &max_mag);
        if rel <= tiny {
            break;
        }
        history.push(rel.to_f64());
        // multiple roots converge linearly and then stall at the noise floor
        if iter > 8 && stalled(&history) {
            let boxes = enclose(&p, &z, wp);
            if boxes.iter().all(|b| b.radius < target) {
                return Ok(boxes);
            }
        }
    }
    let boxes = enclose(&p, &z, wp);
    if let Some(bad) = boxes.iter().find(|b| b.radius >= target) {
        return Err(Error::NonConvergence(format!(
            "root finder did not reach radius 2^-{} for polynomial of degree {} (worst radius {:e}, near {:?})",
            prec / 2,
            n,
            bad.radius.to_f64(),
            (bad.center.real().to_f64(), bad.center.imag().to_f64()),
        )));
    }
    Ok(boxes)
}

fn stalled(history: &[f64]) -> bool {
    let k = history.len();
    k >= 6 && history[k - 1] >= 0.5 * history[k - 6]
}

/// Inclusion radius `n |p(z_i)| / |lc ∏_{j≠i} (z_i - z_j)|`.
fn enclose(p: &CPoly, z: &[ComplexMP], wp: u32) -> Vec<RootBox> {
    let n = z.len();
    let lc = &p.coeffs[n];
    (0..n)
        .map(|i| {
            let pv = p.eval(&z[i]);
            let mut den = lc.clone();
            for j in 0..n {
                if j != i {
                    den *= Complex::with_val(wp, &z[i] - &z[j]);
                }
            }
            let radius = if pv.is_zero() {
                Float::new(64)
            } else if den.is_zero() {
                Float::with_val(64, f64::INFINITY)
            } else {
                let r = Float::with_val(wp, Complex::with_val(wp, &pv / &den).abs_ref()) * n as u32;
                Float::with_val(64, r)
            };
            RootBox { center: z[i].clone(), radius }
        })
        .collect()
}

/// Points on a circle whose radius is the geometric mean of the roots'
/// magnitudes, centered at their mean.
fn initial_guesses(p: &CPoly, wp: u32) -> Vec<ComplexMP> {
    let n = p.degree();
    let lc = &p.coeffs[n];
    let center = Complex::with_val(wp, -&p.coeffs[n - 1]) / Complex::with_val(wp, lc * n as u32);
    let shifted = shift_origin(p, &center);
    let c0 = Float::with_val(wp, shifted.coeffs[0].abs_ref());
    let cn = Float::with_val(wp, lc.abs_ref());
    let mut r = if c0.is_zero() {
        Float::with_val(wp, 1)
    } else {
        Float::with_val(wp, &c0 / &cn).root(n as u32)
    };
    // Fujiwara-style cap keeps the circle from collapsing on sparse inputs.
    let mut bound = Float::new(wp);
    for k in 0..n {
        let ck = Float::with_val(wp, shifted.coeffs[k].abs_ref()) / &cn;
        let b = ck.root((n - k) as u32) * 2u32;
        if b > bound {
            bound = b;
        }
    }
    if r.is_zero() || r > bound {
        r = bound;
    }
    if r.is_zero() {
        r = Float::with_val(wp, 1);
    }
    let pi = Float::with_val(wp, rug::float::Constant::Pi);
    (0..n)
        .map(|k| {
            let theta = Float::with_val(wp, &pi * 2u32) * k as u32 / n as u32 + 0.4f64;
            let (s, c) = theta.sin_cos(Float::new(wp));
            Complex::with_val(wp, (c * &r, s * &r)) + &center
        })
        .collect()
}

/// Taylor shift `p(z + c)`.
fn shift_origin(p: &CPoly, c: &ComplexMP) -> CPoly {
    let wp = p.prec;
    let mut a = p.coeffs.clone();
    let n = a.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = Complex::with_val(wp, &a[j + 1] * c);
            a[j] += t;
        }
    }
    CPoly::new(wp, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RatPoly;

    const P: u32 = 256;

    fn sorted_real(boxes: &[RootBox]) -> Vec<f64> {
        let mut v: Vec<f64> = boxes.iter().map(|b| b.center.real().to_f64()).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn unit_roots() {
        let p = CPoly::from_rat(P, &RatPoly::from_ints(&[-1, 0, 1]));
        let r = roots(&p, P).unwrap();
        for b in &r {
            let re = b.center.real().to_f64();
            assert!((re.abs() - 1.0).abs() < 1e-30);
            assert!(b.radius.to_f64() < 1e-30);
        }
        assert_eq!(sorted_real(&r).len(), 2);
        assert!(sorted_real(&r)[0] < 0.0);
    }

    #[test]
    fn sqrt_two() {
        let p = CPoly::from_rat(P, &RatPoly::from_ints(&[-2, 0, 1]));
        let r = roots(&p, P).unwrap();
        let sqrt2 = Float::with_val(P, 2).sqrt();
        for b in &r {
            let err = Float::with_val(P, b.center.real().abs_ref()) - &sqrt2;
            assert!(err.abs().to_f64() < 1e-60);
        }
    }

    #[test]
    fn double_root_cluster() {
        let p = CPoly::from_rat(P, &RatPoly::from_ints(&[-4, 27, -54, 27]));
        let r = roots(&p, P).unwrap();
        let v = sorted_real(&r);
        assert!((v[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((v[1] - 1.0 / 3.0).abs() < 1e-15);
        assert!((v[2] - 4.0 / 3.0).abs() < 1e-15);
        for b in &r {
            assert!(b.radius.to_f64() < 2f64.powi(-128));
        }
    }

    #[test]
    fn residual_and_conjugate_symmetry() {
        let p = CPoly::from_rat(P, &RatPoly::from_ints(&[5, -3, 0, 2, 1, 7]));
        let r = roots(&p, P).unwrap();
        assert_eq!(r.len(), 5);
        for b in &r {
            let v = super::super::abs_f64(&p.eval(&b.center));
            assert!(v < p.norm_inf() * 5.0 * 1e-38);
            let conj = Complex::with_val(P, b.center.conj_ref());
            let closest = r
                .iter()
                .map(|o| super::super::abs_f64(&Complex::with_val(P, &o.center - &conj)))
                .fold(f64::INFINITY, f64::min);
            assert!(closest < 1e-30);
        }
    }
}
