use smallvec::SmallVec;
use std::cmp::Ordering;

/// Dense exponent vector over the variable set of the enclosing polynomial.
///
/// Ordering is graded lexicographic with the later-listed variable greater:
/// total degree first, then exponents compared from the last variable down.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(SmallVec<[u16; 10]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, index: usize, exp: u16) -> Self {
        let mut m = Self::one(nvars);
        m.0[index] = exp;
        m
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    #[inline]
    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn degree(&self, var: usize) -> u16 {
        self.0[var]
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(other.0.iter().zip(self.0.iter()).map(|(a, b)| a - b).collect()))
    }

    pub fn with_exp(&self, var: usize, exp: u16) -> Monomial {
        let mut m = self.clone();
        m.0[var] = exp;
        m
    }

    pub(crate) fn set(&mut self, var: usize, exp: u16) {
        self.0[var] = exp;
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.0.len(), other.0.len());
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.0.iter().rev().zip(other.0.iter().rev()) {
            match a.cmp(b) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_then_later_variable_greater() {
        // variables (x, y, z)
        let x2 = Monomial::from_exps(&[2, 0, 0]);
        let y2 = Monomial::from_exps(&[0, 2, 0]);
        let z2 = Monomial::from_exps(&[0, 0, 2]);
        let xyz = Monomial::from_exps(&[1, 1, 1]);
        assert!(xyz > z2);
        assert!(z2 > y2);
        assert!(y2 > x2);
        let xz = Monomial::from_exps(&[1, 0, 1]);
        let y2b = Monomial::from_exps(&[0, 2, 0]);
        assert!(xz > y2b);
    }

    #[test]
    fn division() {
        let a = Monomial::from_exps(&[1, 2, 0]);
        let b = Monomial::from_exps(&[2, 3, 1]);
        assert_eq!(a.quotient_of(&b), Some(Monomial::from_exps(&[1, 1, 1])));
        assert_eq!(b.quotient_of(&a), None);
    }
}
