//! Shared test oracles.
#![allow(dead_code)]

pub mod bessel_oracle {
    //! Power series for `J_m` and `Y_m` evaluated in binary fixed point with
    //! `PREC` fractional bits. Arguments are dyadic rationals `a / 2^q`, so
    //! they enter exactly; only the handful of transcendental constants are
    //! rounded, far below `f64` resolution.

    use num_bigint::BigInt;
    use num_traits::{One, Signed, ToPrimitive, Zero};

    const PREC: u32 = 480;

    const PI_DIGITS: &str =
        "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899862803482534211706798";
    const EULER_GAMMA_DIGITS: &str =
        "0.57721566490153286060651209008240243104215933593992359880576723488486772677766467093694706329174674951";

    fn one() -> BigInt {
        BigInt::one() << PREC
    }

    fn from_decimal(s: &str) -> BigInt {
        let (int, frac) = s.split_once('.').unwrap();
        let digits: BigInt = format!("{int}{frac}").parse().unwrap();
        (digits << PREC) / BigInt::from(10u32).pow(frac.len() as u32)
    }

    fn mul(a: &BigInt, b: &BigInt) -> BigInt {
        (a * b) >> PREC
    }

    fn div(a: &BigInt, b: &BigInt) -> BigInt {
        (a << PREC) / b
    }

    fn to_f64(a: &BigInt) -> f64 {
        // keep 64 significant bits before the conversion
        let bits = a.bits() as i64;
        let shift = (bits - 64).max(0);
        let top = (a >> shift as usize).to_f64().unwrap();
        top * 2f64.powi((shift - PREC as i64) as i32)
    }

    /// Dyadic argument `num / 2^log_den`.
    #[derive(Clone, Copy, Debug)]
    pub struct Dyadic {
        pub num: u64,
        pub log_den: u32,
    }

    impl Dyadic {
        pub fn value(self) -> f64 {
            self.num as f64 / 2f64.powi(self.log_den as i32)
        }

        /// `x / 2` in fixed point, exact.
        fn half(self) -> BigInt {
            (BigInt::from(self.num) << PREC) >> (self.log_den + 1)
        }
    }

    /// `ln y` for positive fixed-point `y`: shift into `[1, 2)`, then
    /// `2 atanh((y - 1) / (y + 1))`.
    fn ln(y: &BigInt) -> BigInt {
        assert!(y.is_positive());
        let mut shift = y.bits() as i64 - 1 - PREC as i64;
        let reduced = if shift >= 0 {
            y >> shift as usize
        } else {
            y << (-shift) as usize
        };
        let ln2 = atanh2(&(one() / BigInt::from(3u32)));
        let z = div(&(&reduced - one()), &(&reduced + one()));
        let mut r = atanh2(&z);
        if shift < 0 {
            shift = -shift;
            r -= ln2 * BigInt::from(shift);
        } else {
            r += ln2 * BigInt::from(shift);
        }
        r
    }

    /// `2 atanh z` for `|z| <= 1/3`.
    fn atanh2(z: &BigInt) -> BigInt {
        let z2 = mul(z, z);
        let mut power = z.clone();
        let mut sum = BigInt::zero();
        let mut k = 1u32;
        while !power.is_zero() {
            sum += &power / BigInt::from(k);
            power = mul(&power, &z2);
            k += 2;
        }
        sum * 2
    }

    /// Terms `c_k = (-1)^k (x/2)^(2k+m) / (k! (m+k)!)` until they vanish in
    /// fixed point and the series has turned over.
    fn series_terms(m: u32, x: Dyadic) -> Vec<BigInt> {
        let h = x.half();
        let mut t = one();
        for j in 1..=m {
            t = mul(&t, &h) / BigInt::from(j);
        }
        let h2 = mul(&h, &h);
        let mut terms = Vec::new();
        let mut k = 0u32;
        loop {
            let past_peak = (k as f64) > x.value();
            if t.is_zero() && past_peak {
                break;
            }
            terms.push(t.clone());
            k += 1;
            t = -(mul(&t, &h2) / BigInt::from(k) / BigInt::from(m + k));
        }
        terms
    }

    fn j_fixed(m: u32, x: Dyadic) -> BigInt {
        series_terms(m, x).into_iter().sum()
    }

    pub fn bessel_j(m: i64, x: Dyadic) -> f64 {
        let v = to_f64(&j_fixed(m.unsigned_abs() as u32, x));
        if m < 0 && m % 2 != 0 {
            -v
        } else {
            v
        }
    }

    /// `Y_m = -A/pi + (2/pi)(ln(x/2) + gamma) J_m - (1/pi) sum (H_k + H_{m+k}) c_k`
    /// with `A = sum_{k<m} (m-k-1)!/k! (x/2)^(2k-m)`.
    pub fn bessel_y(m: i64, x: Dyadic) -> f64 {
        let n = m.unsigned_abs() as u32;
        let pi = from_decimal(PI_DIGITS);
        let gamma = from_decimal(EULER_GAMMA_DIGITS);
        let h = x.half();
        let terms = series_terms(n, x);
        let j: BigInt = terms.iter().sum();

        let mut a = BigInt::zero();
        if n > 0 {
            // k = 0 term: (n-1)! (x/2)^(-n)
            let mut t = one();
            for _ in 0..n {
                t = div(&t, &h);
            }
            for f in 1..n {
                t *= BigInt::from(f);
            }
            for k in 0..n {
                a += &t;
                if k + 1 < n {
                    // (n-k-2)!/(k+1)! = (n-k-1)!/k! / ((n-k-1)(k+1))
                    t = mul(&t, &mul(&h, &h)) / BigInt::from(n - k - 1) / BigInt::from(k + 1);
                }
            }
        }

        let harmonic = |upto: u32| -> Vec<BigInt> {
            let mut h = vec![BigInt::zero()];
            for i in 1..=upto {
                let prev = h.last().unwrap().clone();
                h.push(prev + one() / BigInt::from(i));
            }
            h
        };
        let hs = harmonic(n + terms.len() as u32);
        let mut tail = BigInt::zero();
        for (k, c) in terms.iter().enumerate() {
            tail += mul(&(&hs[k] + &hs[n as usize + k]), c);
        }

        let log_term = mul(&((ln(&h) + gamma) * 2), &j);
        let y = div(&(log_term - a - tail), &pi);
        let v = to_f64(&y);
        if m < 0 && m % 2 != 0 {
            -v
        } else {
            v
        }
    }

    /// 500 `(m, x)` points: orders `-4..=20` against 20 dyadic arguments
    /// spanning `1/16..48`.
    pub fn grid() -> Vec<(i64, Dyadic)> {
        let xs: [(u64, u32); 20] = [
            (1, 4),
            (3, 3),
            (1, 0),
            (3, 1),
            (9, 2),
            (3, 0),
            (9, 1),
            (25, 2),
            (31, 2),
            (19, 1),
            (12, 0),
            (29, 1),
            (69, 2),
            (20, 0),
            (47, 1),
            (27, 0),
            (31, 0),
            (71, 1),
            (40, 0),
            (191, 2),
        ];
        let mut out = Vec::with_capacity(500);
        for m in -4..=20 {
            for &(num, log_den) in &xs {
                out.push((m, Dyadic { num, log_den }));
            }
        }
        out
    }
}
