//! Bivariate standard normal and Student-t lower-orthant probabilities.

use crate::distributions::student::t_cdf;
use crate::math::{self, norm_cdf, FRAC_1_2PI};

// Gauss-Legendre half rules (weight, abscissa) on [-1, 0] used by the
// Drezner-Wesolowsky / Genz single-integral reduction.
const GL6: [(f64, f64); 3] = [
    (0.171_324_492_379_170_5, -0.932_469_514_203_152_2),
    (0.360_761_573_048_138_4, -0.661_209_386_466_264_7),
    (0.467_913_934_572_691, -0.238_619_186_083_197),
];
const GL12: [(f64, f64); 6] = [
    (0.047_175_336_386_511_77, -0.981_560_634_246_719_1),
    (0.106_939_325_995_318_3, -0.904_117_256_370_475),
    (0.160_078_328_543_346_4, -0.769_902_674_194_305),
    (0.203_167_426_723_065_9, -0.587_317_954_286_617_1),
    (0.233_492_536_538_354_7, -0.367_831_498_998_180_2),
    (0.249_147_045_813_402_9, -0.125_233_408_511_469_2),
];
const GL20: [(f64, f64); 10] = [
    (0.017_614_007_139_152_12, -0.993_128_599_185_094_9),
    (0.040_601_429_800_386_94, -0.963_971_927_277_913_8),
    (0.062_672_048_334_109_06, -0.912_234_428_251_325_9),
    (0.083_276_741_576_704_75, -0.839_116_971_822_218_8),
    (0.101_930_119_817_240_4, -0.746_331_906_460_150_8),
    (0.118_194_531_961_518_4, -0.636_053_680_726_515),
    (0.131_688_638_449_176_6, -0.510_867_001_950_827_1),
    (0.142_096_109_318_382_1, -0.373_706_088_715_419_6),
    (0.149_172_986_472_603_7, -0.227_785_851_141_645_1),
    (0.152_753_387_130_725_9, -0.076_526_521_133_497_33),
];

/// `P(X > dh, Y > dk)` for a standard bivariate normal with correlation `r`,
/// after Genz's BVND (Drezner & Wesolowsky 1989 with double-precision
/// modifications for |r| near 1).
fn upper_orthant(dh: f64, dk: f64, r: f64) -> f64 {
    let quad: &[(f64, f64)] = if r.abs() < 0.3 {
        &GL6
    } else if r.abs() < 0.75 {
        &GL12
    } else {
        &GL20
    };
    let h = dh;
    let mut k = dk;
    let mut hk = h * k;
    let mut bvn = 0.0;
    if r.abs() < 0.925 {
        if r != 0.0 {
            let hs = 0.5 * (h * h + k * k);
            let asr = 0.5 * libm::asin(r);
            for &(w, x) in quad {
                for sign in [-1.0, 1.0] {
                    let sn = libm::sin(asr * (sign * x + 1.0));
                    bvn += w * math::exp((sn * hk - hs) / (1.0 - sn * sn));
                }
            }
            bvn *= asr * FRAC_1_2PI;
        }
        return bvn + norm_cdf(-h) * norm_cdf(-k);
    }
    if r < 0.0 {
        k = -k;
        hk = -hk;
    }
    if r.abs() < 1.0 {
        let a_s = (1.0 - r) * (1.0 + r);
        let mut a = math::sqrt(a_s);
        let b_s = (h - k) * (h - k);
        let c = (4.0 - hk) / 8.0;
        let d = (12.0 - hk) / 16.0;
        let asr = -0.5 * (b_s / a_s + hk);
        if asr > -100.0 {
            bvn = a * math::exp(asr) * (1.0 - c * (b_s - a_s) * (1.0 - d * b_s / 5.0) / 3.0 + c * d * a_s * a_s / 5.0);
        }
        if -hk < 100.0 {
            let b = math::sqrt(b_s);
            bvn -= math::exp(-0.5 * hk)
                * math::sqrt(2.0 * core::f64::consts::PI)
                * norm_cdf(-b / a)
                * b
                * (1.0 - c * b_s * (1.0 - d * b_s / 5.0) / 3.0);
        }
        a *= 0.5;
        for &(w, x) in quad {
            for sign in [-1.0, 1.0] {
                let xs_root = a * (sign * x + 1.0);
                let xs = xs_root * xs_root;
                let rs = math::sqrt(1.0 - xs);
                let asr = -0.5 * (b_s / xs + hk);
                if asr > -100.0 {
                    bvn += a
                        * w
                        * math::exp(asr)
                        * (math::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs - (1.0 + c * xs * (1.0 + d * xs)));
                }
            }
        }
        bvn = -bvn * FRAC_1_2PI;
    }
    if r > 0.0 {
        bvn + norm_cdf(-h.max(k))
    } else if h >= k {
        -bvn
    } else {
        let l = if h < 0.0 { norm_cdf(k) - norm_cdf(h) } else { norm_cdf(-h) - norm_cdf(-k) };
        l - bvn
    }
}

/// Bivariate standard normal CDF `P(X <= x, Y <= y)` with correlation `rho`.
pub fn bvn_cdf(rho: f64, x: f64, y: f64) -> f64 {
    if x == f64::NEG_INFINITY || y == f64::NEG_INFINITY {
        return 0.0;
    }
    if x == f64::INFINITY {
        return norm_cdf(y);
    }
    if y == f64::INFINITY {
        return norm_cdf(x);
    }
    upper_orthant(-x, -y, rho).clamp(0.0, 1.0)
}

/// Bivariate Student-t CDF `P(X <= x, Y <= y)` with correlation `rho` and
/// `nu` degrees of freedom. Integer `nu` uses the Dunnett-Sobel finite
/// series; other values integrate the normal CDF over the chi mixing law.
pub fn bvt_cdf(rho: f64, nu: f64, x: f64, y: f64) -> f64 {
    if x == f64::NEG_INFINITY || y == f64::NEG_INFINITY {
        return 0.0;
    }
    if x == f64::INFINITY {
        return t_cdf(nu, y);
    }
    if y == f64::INFINITY {
        return t_cdf(nu, x);
    }
    let v = if (1.0..=400.0).contains(&nu) && nu == libm::floor(nu) {
        bvt_integer(nu as u32, x, y, rho)
    } else {
        bvt_mixture(rho, nu, x, y)
    };
    v.clamp(0.0, 1.0)
}

/// Dunnett & Sobel (1954) series as arranged in Genz's BVTL.
pub fn bvt_integer(nu: u32, dh: f64, dk: f64, r: f64) -> f64 {
    use core::f64::consts::PI;
    let tpi = 2.0 * PI;
    let nuf = nu as f64;
    let snu = math::sqrt(nuf);
    let ors = 1.0 - r * r;
    let hrk = dh - r * dk;
    let krh = dk - r * dh;
    let (xnhk, xnkh) = if hrk.abs() + ors > 0.0 {
        (hrk * hrk / (hrk * hrk + ors * (nuf + dk * dk)), krh * krh / (krh * krh + ors * (nuf + dh * dh)))
    } else {
        (0.0, 0.0)
    };
    let hs = if hrk < 0.0 { -1.0 } else { 1.0 };
    let ks = if krh < 0.0 { -1.0 } else { 1.0 };
    let mut bvt;
    if nu.is_multiple_of(2) {
        bvt = libm::atan2(math::sqrt(ors), -r) / tpi;
        let mut gmph = dh / math::sqrt(16.0 * (nuf + dh * dh));
        let mut gmpk = dk / math::sqrt(16.0 * (nuf + dk * dk));
        let mut btnckh = 2.0 * libm::atan2(math::sqrt(xnkh), math::sqrt(1.0 - xnkh)) / PI;
        let mut btpdkh = 2.0 * math::sqrt(xnkh * (1.0 - xnkh)) / PI;
        let mut btnchk = 2.0 * libm::atan2(math::sqrt(xnhk), math::sqrt(1.0 - xnhk)) / PI;
        let mut btpdhk = 2.0 * math::sqrt(xnhk * (1.0 - xnhk)) / PI;
        for j in 1..=nu / 2 {
            let jf = j as f64;
            bvt += gmph * (1.0 + ks * btnckh);
            bvt += gmpk * (1.0 + hs * btnchk);
            btnckh += btpdkh;
            btpdkh = 2.0 * jf * btpdkh * (1.0 - xnkh) / (2.0 * jf + 1.0);
            btnchk += btpdhk;
            btpdhk = 2.0 * jf * btpdhk * (1.0 - xnhk) / (2.0 * jf + 1.0);
            gmph = gmph * (2.0 * jf - 1.0) / (2.0 * jf * (1.0 + dh * dh / nuf));
            gmpk = gmpk * (2.0 * jf - 1.0) / (2.0 * jf * (1.0 + dk * dk / nuf));
        }
    } else {
        let qhrk = math::sqrt(dh * dh + dk * dk - 2.0 * r * dh * dk + nuf * ors);
        let hkrn = dh * dk + r * nuf;
        let hkn = dh * dk - nuf;
        let hpk = dh + dk;
        bvt = libm::atan2(-snu * (hkn * qhrk + hpk * hkrn), hkn * hkrn - nuf * hpk * qhrk) / tpi;
        if bvt < -1e-15 {
            bvt += 1.0;
        }
        let mut gmph = dh / (tpi * snu * (1.0 + dh * dh / nuf));
        let mut gmpk = dk / (tpi * snu * (1.0 + dk * dk / nuf));
        let mut btnckh = math::sqrt(xnkh);
        let mut btpdkh = btnckh;
        let mut btnchk = math::sqrt(xnhk);
        let mut btpdhk = btnchk;
        for j in 1..=(nu - 1) / 2 {
            let jf = j as f64;
            bvt += gmph * (1.0 + ks * btnckh);
            bvt += gmpk * (1.0 + hs * btnchk);
            btpdkh = (2.0 * jf - 1.0) * btpdkh * (1.0 - xnkh) / (2.0 * jf);
            btnckh += btpdkh;
            btpdhk = (2.0 * jf - 1.0) * btpdhk * (1.0 - xnhk) / (2.0 * jf);
            btnchk += btpdhk;
            gmph = 2.0 * jf * gmph / ((2.0 * jf + 1.0) * (1.0 + dh * dh / nuf));
            gmpk = 2.0 * jf * gmpk / ((2.0 * jf + 1.0) * (1.0 + dk * dk / nuf));
        }
    }
    bvt
}

/// `E_S[ Phi2(x S, y S; rho) ]` with `S = sqrt(W / nu)`, `W ~ chi^2_nu`.
pub fn bvt_mixture(rho: f64, nu: f64, x: f64, y: f64) -> f64 {
    // Laurent-Massart: P(W > nu + 2 sqrt(nu t) + 2t) <= exp(-t).
    let t = 32.0;
    let w_max = nu + 2.0 * math::sqrt(nu * t) + 2.0 * t;
    let s_max = math::sqrt(w_max / nu);
    let ln_norm = core::f64::consts::LN_2 + 0.5 * nu * math::ln(0.5 * nu) - math::ln_gamma(0.5 * nu);
    if nu >= 2.0 {
        let f = |s: f64| {
            if s <= 0.0 {
                return 0.0;
            }
            let dens = math::exp(ln_norm + (nu - 1.0) * math::ln(s) - 0.5 * nu * s * s);
            dens * bvn_cdf(rho, x * s, y * s)
        };
        math::adaptive_simpson_panels(&f, 0.0, s_max, 64, 1e-10)
    } else {
        // s = r^(1/nu) removes the s^(nu-1) singularity at the origin.
        let r_max = math::powf(s_max, nu);
        let f = |r: f64| {
            let s = math::powf(r, 1.0 / nu);
            let dens = math::exp(ln_norm - math::ln(nu) - 0.5 * nu * s * s);
            dens * bvn_cdf(rho, x * s, y * s)
        };
        math::adaptive_simpson_panels(&f, 0.0, r_max, 64, 1e-10)
    }
}
