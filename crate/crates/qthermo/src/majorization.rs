//! Majorization order on probability spectra.
//!
//! p ≻ q when every partial sum of p (sorted non-increasing) dominates the
//! matching partial sum of q. Spectra of different lengths are compared after
//! zero-padding the shorter one; ties count as dominance.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::states::Spectrum;

/// Partial-sum slack allowed when deciding dominance.
pub const MAJORIZE_TOL: f64 = 1e-12;

/// Outcome of comparing two spectra in the majorization order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparability {
    Equal,
    FirstMajorizes,
    SecondMajorizes,
    Incomparable,
}

impl Comparability {
    pub fn as_str(&self) -> &'static str {
        match self {
            Comparability::Equal => "Equal",
            Comparability::FirstMajorizes => "FirstMajorizes",
            Comparability::SecondMajorizes => "SecondMajorizes",
            Comparability::Incomparable => "Incomparable",
        }
    }
}

fn padded_pair(p: &Spectrum, q: &Spectrum) -> (Vec<f64>, Vec<f64>) {
    let n = p.len().max(q.len());
    (p.padded(n).unwrap(), q.padded(n).unwrap())
}

/// Does p majorize q within `tol` on every partial sum?
pub fn majorizes(p: &Spectrum, q: &Spectrum, tol: f64) -> bool {
    let (a, b) = padded_pair(p, q);
    let (mut sa, mut sb) = (0.0, 0.0);
    for k in 0..a.len() {
        sa += a[k];
        sb += b[k];
        if sa < sb - tol {
            return false;
        }
    }
    // totals both 1 by the Spectrum invariant, so no trailing check needed
    true
}

/// Classify the pair; `Equal` means elementwise equality within `tol` after
/// padding, and wins over the two one-sided verdicts.
pub fn compare(p: &Spectrum, q: &Spectrum, tol: f64) -> Comparability {
    let (a, b) = padded_pair(p, q);
    if a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= tol) {
        return Comparability::Equal;
    }
    match (majorizes(p, q, tol), majorizes(q, p, tol)) {
        (true, false) => Comparability::FirstMajorizes,
        (false, true) => Comparability::SecondMajorizes,
        (true, true) => Comparability::Equal,
        (false, false) => Comparability::Incomparable,
    }
}

/// Random doubly-stochastic image of `p`: a convex combination of `terms`
/// random permutations of it. The result is always majorized by `p`.
pub fn random_doubly_stochastic_image(
    rng: &mut impl Rng,
    p: &Spectrum,
    terms: usize,
) -> Result<Spectrum> {
    let n = p.len();
    let mut weights: Vec<f64> = (0..terms.max(1)).map(|_| rng.gen::<f64>() + 1e-6).collect();
    let wsum: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= wsum);

    let mut out = vec![0.0; n];
    let mut perm: Vec<usize> = (0..n).collect();
    for &w in &weights {
        perm.shuffle(rng);
        for (i, &src) in perm.iter().enumerate() {
            out[i] += w * p.probs()[src];
        }
    }
    Spectrum::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_spectrum, rng_from_seed};

    fn spec(v: &[f64]) -> Spectrum {
        Spectrum::new(v.to_vec()).unwrap()
    }

    #[test]
    fn reflexive_and_equal() {
        let p = spec(&[0.5, 0.3, 0.2]);
        assert!(majorizes(&p, &p, MAJORIZE_TOL));
        assert_eq!(compare(&p, &p, MAJORIZE_TOL), Comparability::Equal);
    }

    #[test]
    fn pure_tops_uniform_bottoms() {
        let mut rng = rng_from_seed(21);
        let pure = spec(&[1.0]);
        let uniform = spec(&[0.25; 4]);
        for _ in 0..50 {
            let p = random_spectrum(&mut rng, 4).unwrap();
            assert!(majorizes(&pure, &p, MAJORIZE_TOL));
            assert!(majorizes(&p, &uniform, MAJORIZE_TOL));
        }
    }

    #[test]
    fn zero_padding_compares_across_lengths() {
        // (0.5, 0.5) vs (0.5, 0.25, 0.25): the first majorizes
        let p = spec(&[0.5, 0.5]);
        let q = spec(&[0.5, 0.25, 0.25]);
        assert_eq!(compare(&p, &q, MAJORIZE_TOL), Comparability::FirstMajorizes);
        // (0.5, 0.5) vs (0.5, 0.5, 0.0) are equal after padding
        let r = spec(&[0.5, 0.5, 0.0]);
        assert_eq!(compare(&p, &r, MAJORIZE_TOL), Comparability::Equal);
    }

    #[test]
    fn detects_incomparable_pair() {
        // classic incomparable pair
        let p = spec(&[0.55, 0.275, 0.125, 0.05]);
        let q = spec(&[0.35, 0.35, 0.3, 0.0]);
        assert_eq!(compare(&p, &q, MAJORIZE_TOL), Comparability::Incomparable);
    }

    #[test]
    fn doubly_stochastic_image_is_majorized() {
        let mut rng = rng_from_seed(22);
        for _ in 0..100 {
            let p = random_spectrum(&mut rng, 5).unwrap();
            let q = random_doubly_stochastic_image(&mut rng, &p, 4).unwrap();
            assert!(majorizes(&p, &q, MAJORIZE_TOL));
        }
    }

    #[test]
    fn transitive_on_constructed_chains() {
        let mut rng = rng_from_seed(23);
        for _ in 0..500 {
            let p = random_spectrum(&mut rng, 6).unwrap();
            let q = random_doubly_stochastic_image(&mut rng, &p, 3).unwrap();
            let r = random_doubly_stochastic_image(&mut rng, &q, 3).unwrap();
            assert!(majorizes(&p, &q, MAJORIZE_TOL));
            assert!(majorizes(&q, &r, MAJORIZE_TOL));
            assert!(majorizes(&p, &r, MAJORIZE_TOL));
        }
    }
}
