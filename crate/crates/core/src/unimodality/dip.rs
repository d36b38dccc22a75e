//! Hartigan's dip statistic and its Monte-Carlo p-value.
//!
//! The dip is the sup-norm distance between the empirical CDF and the closest
//! unimodal CDF. It is computed exactly by alternating greatest-convex-minorant
//! and least-concave-majorant fits over a shrinking modal interval, following
//! Hartigan & Hartigan's published procedure (with the later fixes for the
//! LCM distance and for the no-progress loop).

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::reduce::Series;
use crate::seed::{derived_rng, label, StreamRng};

/// Default number of uniform null samples behind a dip p-value.
pub const DEFAULT_DIP_REPLICATES: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipResult {
    pub dip: f64,
    pub p_value: f64,
    pub null_replicates: usize,
}

/// Dip of a sorted sample. Ties are allowed.
pub fn dip_statistic(sample: &Series) -> Result<f64> {
    if !sample.is_sorted() {
        let index = sample.values().windows(2).position(|w| w[0] > w[1]).map_or(0, |i| i + 1);
        return Err(Error::NotSorted { index });
    }
    Ok(dip_sorted(sample.values()))
}

/// Dip of a slice the caller guarantees to be sorted.
///
/// Values lie in `[1/(2n), 1/4]`; a sample of identical values gets the
/// lower bound.
pub(crate) fn dip_sorted(x: &[f64]) -> f64 {
    let n = x.len();
    debug_assert!(n >= 1);
    // 1-based views keep the index arithmetic identical to the published procedure.
    let xs = |i: usize| x[i - 1];

    let mut low = 1usize;
    let mut high = n;
    // Work in units of 2n * dip until the very end.
    let mut dip = 1.0f64;
    if n < 2 || xs(n) == xs(1) {
        return dip / (2 * n) as f64;
    }

    // Change-point links for the convex minorant.
    let mut mn = vec![0usize; n + 1];
    mn[1] = 1;
    for j in 2..=n {
        mn[j] = j - 1;
        loop {
            let mnj = mn[j];
            let mnmnj = mn[mnj];
            if mnj == 1
                || (xs(j) - xs(mnj)) * (mnj as f64 - mnmnj as f64)
                    < (xs(mnj) - xs(mnmnj)) * (j as f64 - mnj as f64)
            {
                break;
            }
            mn[j] = mnmnj;
        }
    }

    // Change-point links for the concave majorant.
    let mut mj = vec![0usize; n + 1];
    mj[n] = n;
    for k in (1..n).rev() {
        mj[k] = k + 1;
        loop {
            let mjk = mj[k];
            let mjmjk = mj[mjk];
            if mjk == n
                || (xs(k) - xs(mjk)) * (mjk as f64 - mjmjk as f64)
                    < (xs(mjk) - xs(mjmjk)) * (k as f64 - mjk as f64)
            {
                break;
            }
            mj[k] = mjmjk;
        }
    }

    let mut gcm = vec![0usize; n + 2];
    let mut lcm = vec![0usize; n + 2];

    loop {
        // GCM change points from high down to low.
        gcm[1] = high;
        let mut i = 1;
        while gcm[i] > low {
            gcm[i + 1] = mn[gcm[i]];
            i += 1;
        }
        let l_gcm = i;
        let mut ig = l_gcm;
        let mut ix = ig - 1;

        // LCM change points from low up to high.
        lcm[1] = low;
        let mut i = 1;
        while lcm[i] < high {
            lcm[i + 1] = mj[lcm[i]];
            i += 1;
        }
        let l_lcm = i;
        let mut ih = l_lcm;
        let mut iv = 2;

        // Largest GCM/LCM gap over the current modal interval.
        let mut d = 0.0f64;
        if l_gcm != 2 || l_lcm != 2 {
            loop {
                let gcmix = gcm[ix];
                let lcmiv = lcm[iv];
                if gcmix > lcmiv {
                    let gcmi1 = gcm[ix + 1];
                    let dx = (lcmiv as f64 - gcmi1 as f64 + 1.0)
                        - (xs(lcmiv) - xs(gcmi1)) * (gcmix as f64 - gcmi1 as f64) / (xs(gcmix) - xs(gcmi1));
                    iv += 1;
                    if dx >= d {
                        d = dx;
                        ig = ix + 1;
                        ih = iv - 1;
                    }
                } else {
                    let lcmiv1 = lcm[iv - 1];
                    let dx = (xs(gcmix) - xs(lcmiv1)) * (lcmiv as f64 - lcmiv1 as f64) / (xs(lcmiv) - xs(lcmiv1))
                        - (gcmix as f64 - lcmiv1 as f64 - 1.0);
                    ix -= 1;
                    if dx >= d {
                        d = dx;
                        ig = ix + 1;
                        ih = iv;
                    }
                }
                ix = ix.max(1);
                iv = iv.min(l_lcm);
                if gcm[ix] == lcm[iv] {
                    break;
                }
            }
        } else {
            d = 1.0;
        }

        if d < dip {
            break;
        }

        // Dip of the convex minorant on the left part.
        let mut dip_l = 0.0f64;
        for j in ig..l_gcm {
            let mut max_t = 1.0f64;
            let (jb, je) = (gcm[j + 1], gcm[j]);
            if je - jb > 1 && xs(je) != xs(jb) {
                let c = (je - jb) as f64 / (xs(je) - xs(jb));
                for jj in jb..=je {
                    let t = (jj - jb + 1) as f64 - (xs(jj) - xs(jb)) * c;
                    max_t = max_t.max(t);
                }
            }
            dip_l = dip_l.max(max_t);
        }

        // Dip of the concave majorant on the right part.
        let mut dip_u = 0.0f64;
        for j in ih..l_lcm {
            let mut max_t = 1.0f64;
            let (jb, je) = (lcm[j], lcm[j + 1]);
            if je - jb > 1 && xs(je) != xs(jb) {
                let c = (je - jb) as f64 / (xs(je) - xs(jb));
                for jj in jb..=je {
                    let t = (xs(jj) - xs(jb)) * c - (jj as f64 - jb as f64 - 1.0);
                    max_t = max_t.max(t);
                }
            }
            dip_u = dip_u.max(max_t);
        }

        dip = dip.max(dip_l.max(dip_u));

        // Without this check the cycle can repeat forever.
        if low == gcm[ig] && high == lcm[ih] {
            break;
        }
        low = gcm[ig];
        high = lcm[ih];
    }

    dip / (2 * n) as f64
}

/// Sorted dips of `replicates` uniform samples of size `m`.
///
/// Replicate `b` draws from its own stream derived from `(seed, b)`, so the
/// table does not depend on thread scheduling.
#[derive(Debug, Clone, PartialEq)]
pub struct DipNull {
    m: usize,
    dips: Vec<f64>,
}

impl DipNull {
    pub fn simulate(m: usize, replicates: usize, seed: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidArgument(format!("dip null needs sample size >= 2, got {m}")));
        }
        if replicates < 1 {
            return Err(Error::InvalidArgument("dip null needs at least one replicate".into()));
        }
        let mut dips: Vec<f64> = (0..replicates)
            .into_par_iter()
            .map_init(
                || vec![0.0; m],
                |buf, b| {
                    let mut rng = derived_rng(seed, &[label::DIP_NULL, b as u64]);
                    sorted_uniforms(&mut rng, buf);
                    dip_sorted(buf)
                },
            )
            .collect();
        dips.sort_unstable_by(f64::total_cmp);
        Ok(Self { m, dips })
    }

    pub fn sample_size(&self) -> usize {
        self.m
    }

    pub fn replicates(&self) -> usize {
        self.dips.len()
    }

    /// `(1 + #{null dips >= dip}) / (B + 1)`.
    pub fn p_value(&self, dip: f64) -> f64 {
        let below = self.dips.partition_point(|&d| d < dip);
        let at_least = self.dips.len() - below;
        (1 + at_least) as f64 / (self.dips.len() + 1) as f64
    }
}

/// Monte-Carlo p-value of `dip` against `replicates` uniform(0,1) samples of size `m`.
pub fn dip_pvalue(dip: f64, m: usize, replicates: usize, seed: u64) -> Result<f64> {
    if dip.is_nan() || dip < 0.0 {
        return Err(Error::InvalidArgument(format!("dip must be nonnegative, got {dip}")));
    }
    Ok(DipNull::simulate(m, replicates, seed)?.p_value(dip))
}

/// Dip and p-value for a sorted series.
pub fn dip_test(sample: &Series, replicates: usize, seed: u64) -> Result<DipResult> {
    let dip = dip_statistic(sample)?;
    let p_value = dip_pvalue(dip, sample.len(), replicates, seed)?;
    Ok(DipResult { dip, p_value, null_replicates: replicates })
}

/// Fills `out` with the order statistics of `out.len()` uniform(0,1) draws,
/// built from normalized exponential spacings.
fn sorted_uniforms(rng: &mut StreamRng, out: &mut [f64]) {
    let mut acc = 0.0;
    for v in out.iter_mut() {
        acc += exp1(rng);
        *v = acc;
    }
    let total = acc + exp1(rng);
    out.iter_mut().for_each(|v| *v /= total);
}

fn exp1(rng: &mut StreamRng) -> f64 {
    // 1 - U lies in (0, 1], so the log is finite.
    -(1.0 - rng.random::<f64>()).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(v: &[f64]) -> Series {
        Series::new_sorted(v.to_vec()).unwrap()
    }

    #[test]
    fn two_points_hit_the_upper_bound() {
        assert!((dip_statistic(&series(&[0.0, 1.0])).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn constant_sample_gets_the_lower_bound() {
        let d = dip_statistic(&series(&[5.0; 6])).unwrap();
        assert!((d - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn unsorted_input_is_rejected() {
        let s = Series::new(vec![0.0, 2.0, 1.0]).unwrap();
        assert_eq!(dip_statistic(&s), Err(Error::NotSorted { index: 2 }));
    }

    #[test]
    fn bimodal_exceeds_near_constant() {
        let bimodal = dip_statistic(&series(&[0.0, 0.0, 0.0, 10.0, 10.0, 10.0])).unwrap();
        let flat = dip_statistic(&series(&[0.0, 1e-9, 2e-9, 3e-9, 4e-9, 5e-9])).unwrap();
        assert!(bimodal > flat, "{bimodal} vs {flat}");
    }

    #[test]
    fn p_value_extremes() {
        let b = 200;
        assert_eq!(dip_pvalue(0.0, 30, b, 9).unwrap(), 1.0);
        assert_eq!(dip_pvalue(0.25, 30, b, 9).unwrap(), 1.0 / (b as f64 + 1.0));
        assert!(dip_pvalue(-1.0, 30, b, 9).is_err());
    }

    #[test]
    fn sorted_uniforms_are_sorted_and_in_range() {
        let mut rng = derived_rng(3, &[]);
        let mut buf = vec![0.0; 1000];
        sorted_uniforms(&mut rng, &mut buf);
        assert!(buf.windows(2).all(|w| w[0] <= w[1]));
        assert!(buf[0] > 0.0 && buf[999] < 1.0);
        let mean = buf.iter().sum::<f64>() / 1000.0;
        assert!((mean - 0.5).abs() < 0.05);
    }
}
