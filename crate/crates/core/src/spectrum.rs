//! Exact spectra of i.i.d. states `rho^(x)n` via type classes.
//!
//! An atom is an eigenvalue `prod_j p_j^{k_j}` together with its
//! multiplicity (multinomial coefficient times eigenvalue degeneracies).
//! Both are stored as base-2 logarithms so that `n` in the tens of thousands
//! neither underflows the values nor overflows the counts.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::smoothing::{smooth_hmax_classical, smooth_hmin_classical};

/// Hard cap on the number of type classes enumerated.
pub const MAX_TYPE_CLASSES: f64 = 1e7;

/// `n` above which linear-domain values are no longer meaningful.
pub const LOG_DOMAIN_THRESHOLD: u32 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub log2_value: f64,
    pub log2_multiplicity: f64,
}

impl Atom {
    pub fn value(&self) -> f64 {
        self.log2_value.exp2()
    }

    pub fn multiplicity(&self) -> f64 {
        self.log2_multiplicity.exp2()
    }

    /// `multiplicity * value`, evaluated without forming either factor.
    pub fn mass(&self) -> f64 {
        (self.log2_value + self.log2_multiplicity).exp2()
    }
}

/// Multiset of eigenvalues with multiplicities, sorted by value descending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedSpectrum {
    atoms: Vec<Atom>,
    log_domain: bool,
}

/// Neumaier's compensated sum.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `log2(2^a + 2^b)`.
pub fn log2_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp2().ln_1p() / std::f64::consts::LN_2
}

/// `log2(2^a - 2^b)` for `a >= b`; `-inf` when they coincide.
pub fn log2_sub(a: f64, b: f64) -> f64 {
    if b == f64::NEG_INFINITY {
        return a;
    }
    let r = (b - a).exp2();
    if r >= 1.0 {
        return f64::NEG_INFINITY;
    }
    a + (-r).ln_1p() / std::f64::consts::LN_2
}

fn same_value(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

impl WeightedSpectrum {
    /// Builds a spectrum from `(log2 value, log2 multiplicity)` pairs,
    /// dropping zero atoms and merging values equal within relative `1e-12`.
    pub fn from_log_atoms(mut atoms: Vec<Atom>, log_domain: bool) -> Result<Self> {
        if atoms.iter().any(|a| a.log2_value.is_nan() || a.log2_multiplicity.is_nan() || a.log2_value == f64::INFINITY)
        {
            return Err(Error::InvalidSpectrum("non-finite atom".into()));
        }
        atoms.retain(|a| a.log2_value > f64::NEG_INFINITY && a.log2_multiplicity > f64::NEG_INFINITY);
        atoms.sort_by(|a, b| b.log2_value.total_cmp(&a.log2_value));
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match merged.last_mut() {
                Some(last) if same_value(last.log2_value, a.log2_value) => {
                    last.log2_multiplicity = log2_add(last.log2_multiplicity, a.log2_multiplicity);
                }
                _ => merged.push(a),
            }
        }
        Ok(Self { atoms: merged, log_domain })
    }

    /// A spectrum from plain `(value, multiplicity)` pairs.
    pub fn from_atoms(pairs: &[(f64, f64)]) -> Result<Self> {
        let mut atoms = Vec::with_capacity(pairs.len());
        for &(v, m) in pairs {
            if !(v >= 0.0) || !(m >= 0.0) || !v.is_finite() || !m.is_finite() {
                return Err(Error::InvalidSpectrum(format!("bad atom ({v}, {m})")));
            }
            atoms.push(Atom { log2_value: v.log2(), log2_multiplicity: m.log2() });
        }
        Self::from_log_atoms(atoms, false)
    }

    /// A spectrum from a list of eigenvalues or probabilities, each of multiplicity one.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        Self::from_atoms(&values.iter().map(|&v| (v, 1.0)).collect::<Vec<_>>())
    }

    /// Keeps only values above `TOL.rank_cutoff` times the largest, matching
    /// the rank convention of the dense path.
    pub fn from_eigenvalues(values: &[f64]) -> Result<Self> {
        let cutoff = crate::operator::support_cutoff(values);
        let kept: Vec<f64> = values.iter().map(|&v| if v > cutoff { v } else { 0.0 }).collect();
        Self::from_values(&kept)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn log_domain(&self) -> bool {
        self.log_domain
    }

    /// `sum multiplicity * value`, compensated.
    pub fn total_mass(&self) -> f64 {
        let mut s = CompensatedSum::default();
        self.atoms.iter().for_each(|a| s.add(a.mass()));
        s.value()
    }

    /// `log2` of the number of eigenvalues (support size).
    pub fn log2_support_size(&self) -> f64 {
        self.atoms.iter().fold(f64::NEG_INFINITY, |acc, a| log2_add(acc, a.log2_multiplicity))
    }

    /// Sum of the `budget` largest eigenvalues, counting multiplicity.
    pub fn top_mass(&self, budget: f64) -> f64 {
        let mut left = budget;
        let mut s = CompensatedSum::default();
        for a in &self.atoms {
            if left <= 0.0 {
                break;
            }
            let m = a.multiplicity();
            let take = m.min(left);
            s.add(take * a.value());
            left -= take;
        }
        s.value()
    }

    /// Expands into a plain eigenvalue list; only for small spectra.
    pub fn expand(&self) -> Result<Vec<f64>> {
        let mut out = Vec::new();
        for a in &self.atoms {
            let m = a.multiplicity().round();
            if m > 1e6 || (out.len() as f64 + m) > 1e6 {
                return Err(Error::InvalidSpectrum("spectrum too large to expand".into()));
            }
            out.extend(std::iter::repeat_n(a.value(), m as usize));
        }
        Ok(out)
    }
}

/// Number of compositions of `n` into `parts` non-negative parts.
pub fn composition_count(n: u32, parts: usize) -> f64 {
    if parts <= 1 {
        return 1.0;
    }
    let k = (parts - 1) as f64;
    (ln_gamma(n as f64 + k + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n as f64 + 1.0)).exp()
}

/// Natural log of the multinomial coefficient `n! / prod k_i!`.
pub fn ln_multinomial(counts: &[u32]) -> f64 {
    let n: u32 = counts.iter().sum();
    ln_gamma(n as f64 + 1.0) - counts.iter().map(|&k| ln_gamma(k as f64 + 1.0)).sum::<f64>()
}

/// Exact multinomial coefficient, or `None` on `u128` overflow.
pub fn exact_multinomial(counts: &[u32]) -> Option<u128> {
    let mut acc: u128 = 1;
    let mut total: u32 = 0;
    for &k in counts {
        for i in 1..=k {
            total += 1;
            // acc * total / i stays integral: it is a running product of binomials
            acc = acc.checked_mul(total as u128)? / i as u128;
        }
    }
    Some(acc)
}

/// Distinct non-zero base eigenvalues with their degeneracies.
fn distinct_eigenvalues(base: &[f64]) -> Vec<(f64, u32)> {
    let mut sorted: Vec<f64> = base.iter().copied().filter(|&p| p > 0.0).collect();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut out: Vec<(f64, u32)> = Vec::new();
    for p in sorted {
        match out.last_mut() {
            Some((v, g)) if (*v - p).abs() <= 1e-12 * v.max(1e-300) => *g += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Spectrum of `rho^(x)n` for `rho` with eigenvalues `base`.
pub fn iid_spectrum(base: &[f64], n: u32) -> Result<WeightedSpectrum> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    if base.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
        return Err(Error::InvalidSpectrum("base eigenvalues must be non-negative".into()));
    }
    let total: f64 = base.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidSpectrum(format!("base eigenvalues sum to {total}, not 1")));
    }
    let distinct = distinct_eigenvalues(base);
    let classes = composition_count(n, distinct.len());
    if classes > MAX_TYPE_CLASSES {
        return Err(Error::TooManyClasses { classes, limit: MAX_TYPE_CLASSES });
    }
    let log_p: Vec<f64> = distinct.iter().map(|(p, _)| p.log2()).collect();
    let log_g: Vec<f64> = distinct.iter().map(|(_, g)| (*g as f64).log2()).collect();
    let ln_n_fact = ln_gamma(n as f64 + 1.0);
    let exact = n < 50;

    let mut atoms = Vec::with_capacity(classes as usize);
    let mut counts = vec![0u32; distinct.len()];
    enumerate_compositions(n, 0, &mut counts, &mut |k| {
        let mut lv = 0.0;
        let mut lm_extra = 0.0;
        for (j, &kj) in k.iter().enumerate() {
            if kj > 0 {
                lv += kj as f64 * log_p[j];
                lm_extra += kj as f64 * log_g[j];
            }
        }
        let ln_multi = ln_n_fact - k.iter().map(|&kj| ln_gamma(kj as f64 + 1.0)).sum::<f64>();
        let log2_multi = match exact.then(|| exact_multinomial(k)).flatten() {
            Some(m) => (m as f64).log2(),
            None => ln_multi / std::f64::consts::LN_2,
        };
        atoms.push(Atom { log2_value: lv, log2_multiplicity: log2_multi + lm_extra });
    });
    WeightedSpectrum::from_log_atoms(atoms, n > LOG_DOMAIN_THRESHOLD)
}

fn enumerate_compositions(remaining: u32, idx: usize, counts: &mut [u32], f: &mut impl FnMut(&[u32])) {
    if idx + 1 == counts.len() {
        counts[idx] = remaining;
        f(counts);
        return;
    }
    for k in (0..=remaining).rev() {
        counts[idx] = k;
        enumerate_compositions(remaining - k, idx + 1, counts, f);
    }
}

/// `Tr[{rho_n >= 2^{-n gamma} I} rho_n]`: mass of atoms with value at least
/// `2^{-n gamma}`. Ties within relative `1e-12` in the exponent count as passing.
pub fn spectral_trace_gamma(spec: &WeightedSpectrum, gamma: f64, n: u32) -> f64 {
    let threshold = -(n as f64) * gamma;
    let mut s = CompensatedSum::default();
    for a in spec.atoms() {
        if a.log2_value >= threshold || same_value(a.log2_value, threshold) {
            s.add(a.mass());
        } else {
            break;
        }
    }
    s.value()
}

/// One row of [`rate_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub n: u32,
    pub epsilon: f64,
    pub hmin_rate: f64,
    pub hmax_rate: f64,
}

/// Smooth entropy rates `H^eps(rho^(x)n) / n` over an `(n, eps)` grid,
/// rows ordered by `n` then `eps` as given.
pub fn rate_scan(base: &[f64], n_list: &[u32], epsilon_list: &[f64]) -> Result<Vec<RateRow>> {
    let mut rows = Vec::with_capacity(n_list.len() * epsilon_list.len());
    for &n in n_list {
        let spec = iid_spectrum(base, n)?;
        for &epsilon in epsilon_list {
            let hmin = smooth_hmin_classical(&spec, epsilon)?.value.bits();
            let hmax = smooth_hmax_classical(&spec, epsilon)?.value.bits();
            rows.push(RateRow { n, epsilon, hmin_rate: hmin / n as f64, hmax_rate: hmax / n as f64 });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_and_flat_bases() {
        let s = iid_spectrum(&[1.0], 7).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.atoms()[0].value(), 1.0);
        assert_eq!(s.atoms()[0].multiplicity(), 1.0);
        let s = iid_spectrum(&[0.5, 0.5], 3).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s.atoms()[0].value() - 0.125).abs() < 1e-15);
        assert!((s.atoms()[0].multiplicity() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn binomial_expansion() {
        let s = iid_spectrum(&[0.75, 0.25], 2).unwrap();
        let got: Vec<(f64, f64)> = s.atoms().iter().map(|a| (a.value(), a.multiplicity())).collect();
        let want = [(0.5625, 1.0), (0.1875, 2.0), (0.0625, 1.0)];
        for (g, w) in got.iter().zip(want.iter()) {
            assert!((g.0 - w.0).abs() < 1e-15 && (g.1 - w.1).abs() < 1e-12);
        }
        assert!((spectral_trace_gamma(&s, 1.0, 2) - 0.5625).abs() < 1e-15);
        assert!((spectral_trace_gamma(&s, 100.0, 2) - 1.0).abs() < 1e-12);
        assert_eq!(spectral_trace_gamma(&s, 0.0, 2), 0.0);
    }

    #[test]
    fn coincident_products_merge() {
        // 0.5 * 0.125 == 0.25 * 0.25
        let s = iid_spectrum(&[0.5, 0.25, 0.125, 0.125], 2).unwrap();
        assert!(s.atoms().windows(2).all(|w| !same_value(w[0].log2_value, w[1].log2_value)));
        assert!((s.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_and_log_gamma_multinomials_agree() {
        for counts in [[10u32, 20, 19], [0, 0, 49], [16, 16, 17], [1, 2, 3]] {
            let exact = exact_multinomial(&counts).unwrap() as f64;
            assert!((exact.ln() - ln_multinomial(&counts)).abs() < 1e-9);
        }
    }

    #[test]
    fn mass_conserved_for_large_n() {
        for n in [100, 1000, 10_000] {
            let s = iid_spectrum(&[0.75, 0.25], n).unwrap();
            assert!((s.total_mass() - 1.0).abs() < 1e-9, "n={n}");
            assert_eq!(s.log_domain(), n > 100);
        }
        let s = iid_spectrum(&[0.5, 0.3, 0.2], 500).unwrap();
        assert!((s.total_mass() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn too_many_classes() {
        let base = vec![0.1; 10];
        assert!(matches!(iid_spectrum(&[0.1, 0.2, 0.3, 0.4], 1000), Err(Error::TooManyClasses { .. })));
        // ten equal eigenvalues collapse to one distinct value
        assert_eq!(iid_spectrum(&base, 1000).unwrap().len(), 1);
    }

    #[test]
    fn rate_scan_small_n() {
        let rows = rate_scan(&[0.75, 0.25], &[2], &[0.0]).unwrap();
        assert!((rows[0].hmin_rate - 0.415037).abs() < 1e-6);
        let rows = rate_scan(&[0.5, 0.5], &[5, 50], &[0.0]).unwrap();
        assert!(rows.iter().all(|r| (r.hmin_rate - 1.0).abs() < 1e-12 && (r.hmax_rate - 1.0).abs() < 1e-12));
    }
}
