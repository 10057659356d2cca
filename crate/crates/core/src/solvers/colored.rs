//! Surjective coloured matching through an occurrence-counting oracle.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::instances::ColoredPpmInstance;
use crate::perm::{count_occurrences, Permutation};

/// Anything that can count occurrences of a pattern in a text.
pub trait OccurrenceCounter {
    fn count(&self, pattern: &Permutation, text: &Permutation) -> Result<BigUint>;
}

/// Counting by pruned backtracking over the text.
#[derive(Clone, Copy, Debug, Default)]
pub struct BacktrackCounter;

impl OccurrenceCounter for BacktrackCounter {
    fn count(&self, pattern: &Permutation, text: &Permutation) -> Result<BigUint> {
        Ok(BigUint::from(count_occurrences(text, pattern)))
    }
}

/// The subpermutation of `text` formed by the positions whose colour is not
/// in `excluded` (a bitmask over colours).
pub fn restrict_text(text: &Permutation, colors: &[usize], excluded: u64) -> Permutation {
    let keep: Vec<usize> = (0..text.len()).filter(|&i| excluded >> colors[i] & 1 == 0).collect();
    text.subpattern(&keep)
}

/// Number of colour-surjective occurrences, by inclusion–exclusion over the
/// set of colours left out.
pub fn surjective_count(inst: &ColoredPpmInstance, counter: &dyn OccurrenceCounter) -> Result<BigInt> {
    assert!(inst.t < 64, "inclusion-exclusion over more than 63 colours");
    let mut total = BigInt::zero();
    for s in 0u64..(1u64 << inst.t) {
        let c = BigInt::from(counter.count(&inst.pattern, &restrict_text(&inst.text, &inst.colors, s))?);
        if s.count_ones() % 2 == 0 {
            total += c;
        } else {
            total -= c;
        }
    }
    Ok(total)
}

pub fn solve_colored_via_counting(inst: &ColoredPpmInstance, counter: &dyn OccurrenceCounter) -> Result<bool> {
    Ok(surjective_count(inst, counter)?.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_colour_is_containment() {
        let inst = ColoredPpmInstance::new("12".parse().unwrap(), "2413".parse().unwrap(), vec![0; 4]).unwrap();
        assert_eq!(surjective_count(&inst, &BacktrackCounter).unwrap(), BigInt::from(3));
        let inst = ColoredPpmInstance::new("123".parse().unwrap(), "321".parse().unwrap(), vec![0, 1, 0]).unwrap();
        assert!(!solve_colored_via_counting(&inst, &BacktrackCounter).unwrap());
    }

    #[test]
    fn two_colours() {
        // 2413 with colours a a b b: occurrences of 12 are 24, 23 (a,b), 13 (b,b).
        let inst = ColoredPpmInstance::new("12".parse().unwrap(), "2413".parse().unwrap(), vec![0, 0, 1, 1]).unwrap();
        assert_eq!(surjective_count(&inst, &BacktrackCounter).unwrap(), BigInt::from(1));
    }
}
