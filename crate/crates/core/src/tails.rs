//! Binomial and Poisson point masses with small relative error.
//!
//! Uses Loader's saddle-point decomposition: each log-mass is assembled from
//! the Stirling-series remainder and the deviance `bd0`, so no large
//! log-factorials are subtracted from each other.

use std::f64::consts::PI;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// stirlerr(n/2) for n = 0..30, digits as published
#[allow(clippy::excessive_precision)]
const STIRLERR_HALVES: [f64; 31] = [
    0.0,
    0.153_426_409_720_027_345_291_384_8,
    0.081_061_466_795_327_258_219_670_2,
    0.054_814_121_051_917_653_896_139_0,
    0.041_340_695_955_409_294_093_822_1,
    0.033_162_873_519_936_287_485_110_48,
    0.027_677_925_684_998_339_148_789_29,
    0.023_746_163_656_297_495_971_329_20,
    0.020_790_672_103_765_093_111_522_77,
    0.018_488_450_532_673_185_230_779_34,
    0.016_644_691_189_821_192_163_194_87,
    0.015_134_973_221_917_378_873_512_55,
    0.013_876_128_823_070_747_998_745_73,
    0.012_810_465_242_920_226_924_249_86,
    0.011_896_709_945_891_770_095_055_72,
    0.011_104_559_758_206_917_326_629_91,
    0.010_411_265_261_972_096_497_478_567,
    0.009_799_416_126_158_803_298_389_475,
    0.009_255_462_182_712_732_917_728_637,
    0.008_768_700_134_139_385_462_952_823,
    0.008_330_563_433_362_871_256_469_318,
    0.007_934_114_564_314_020_547_248_100,
    0.007_573_675_487_951_840_794_972_024,
    0.007_244_554_301_320_383_179_543_912,
    0.006_942_840_107_209_529_865_664_152,
    0.006_665_247_032_707_682_442_354_394,
    0.006_408_994_188_004_207_068_439_631,
    0.006_171_712_263_039_457_647_532_867,
    0.005_951_370_112_758_847_735_624_416,
    0.005_746_216_513_010_115_682_023_589,
    0.005_554_733_551_962_801_371_038_690,
];

/// `ln(n!) - [(n + 1/2) ln n - n + ln sqrt(2 pi)]`.
pub(crate) fn stirlerr(n: f64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;

    if n <= 15.0 {
        let nn = n + n;
        if nn == nn.trunc() {
            return STIRLERR_HALVES[nn as usize];
        }
        return libm::lgamma(n + 1.0) - (n + 0.5) * n.ln() + n - LN_SQRT_2PI;
    }
    let nn = n * n;
    if n > 500.0 {
        (S0 - S1 / nn) / n
    } else if n > 80.0 {
        (S0 - (S1 - S2 / nn) / nn) / n
    } else if n > 35.0 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
    }
}

/// Deviance term `x ln(x / np) + np - x`, accurate when `x ~ np`.
pub(crate) fn bd0(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let mut v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        v *= v;
        for j in 1..1000 {
            ej *= v;
            let s1 = s + ej / f64::from(2 * j + 1);
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / np).ln() + np - x
    }
}

/// Binomial point mass `C(n, x) p^x (1-p)^(n-x)`.
pub(crate) fn binomial_pmf(x: u64, n: u64, p: f64) -> f64 {
    let q = 1.0 - p;
    if x > n {
        return 0.0;
    }
    if p == 0.0 {
        return if x == 0 { 1.0 } else { 0.0 };
    }
    if q == 0.0 {
        return if x == n { 1.0 } else { 0.0 };
    }
    let (xf, nf) = (x as f64, n as f64);
    if x == 0 {
        return (nf * (-p).ln_1p()).exp();
    }
    if x == n {
        return (nf * p.ln()).exp();
    }
    let lc =
        stirlerr(nf) - stirlerr(xf) - stirlerr(nf - xf) - bd0(xf, nf * p) - bd0(nf - xf, nf * q);
    let lf = (2.0 * PI).ln() + xf.ln() + (-xf / nf).ln_1p();
    (lc - 0.5 * lf).exp()
}

/// Poisson point mass `e^-m m^x / x!`.
pub(crate) fn poisson_pmf(x: u64, mean: f64) -> f64 {
    if mean == 0.0 {
        return if x == 0 { 1.0 } else { 0.0 };
    }
    if x == 0 {
        return (-mean).exp();
    }
    let xf = x as f64;
    (-stirlerr(xf) - bd0(xf, mean)).exp() / (2.0 * PI * xf).sqrt()
}

/// Sum of `pmf(q)` for `q >= zeta`, where `pmf` is unimodal with its mode
/// at `mode` and support `0..=upper`. The smaller side is summed directly and
/// the other obtained as its complement.
pub(crate) fn upper_tail(zeta: u64, mode: u64, upper: u64, pmf: impl Fn(u64) -> f64) -> f64 {
    if zeta == 0 {
        return 1.0;
    }
    if zeta > upper {
        return 0.0;
    }
    if zeta <= mode {
        // 1 - P(X < zeta); walk down from zeta - 1, stopping once terms vanish
        let mut lower = 0.0;
        let mut q = zeta;
        while q > 0 {
            q -= 1;
            let term = pmf(q);
            lower += term;
            if term < lower * 1e-18 {
                break;
            }
        }
        (1.0 - lower).clamp(0.0, 1.0)
    } else {
        let mut tail = 0.0;
        let mut q = zeta;
        loop {
            let term = pmf(q);
            tail += term;
            if term < tail * 1e-18 || term == 0.0 || q == upper {
                break;
            }
            q += 1;
        }
        tail.clamp(0.0, 1.0)
    }
}
