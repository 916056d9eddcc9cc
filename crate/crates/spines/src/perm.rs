//! Permutations of the four slot symbols of a vertex gadget.
//!
//! A gluing between two vertex gadgets extends to a permutation of the four
//! slot symbols; its parity is what the orientability convention constrains.

/// A permutation of {0,1,2,3}. `p.0[i]` is the image of `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm4(pub [u8; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    pub fn new(images: [u8; 4]) -> Option<Perm4> {
        let mut seen = [false; 4];
        for &x in &images {
            if x > 3 || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        Some(Perm4(images))
    }

    #[inline]
    pub fn apply(&self, x: u8) -> u8 {
        self.0[x as usize]
    }

    pub fn inverse(&self) -> Perm4 {
        let mut inv = [0u8; 4];
        for i in 0..4 {
            inv[self.0[i] as usize] = i as u8;
        }
        Perm4(inv)
    }

    /// `self.compose(other)` is the permutation `x -> self(other(x))`.
    pub fn compose(&self, other: &Perm4) -> Perm4 {
        let mut out = [0u8; 4];
        for i in 0..4 {
            out[i] = self.apply(other.0[i]);
        }
        Perm4(out)
    }

    /// True for odd permutations (odd number of transpositions).
    pub fn is_odd(&self) -> bool {
        let mut inversions = 0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        inversions % 2 == 1
    }

    /// All 24 permutations in lexicographic order of their image arrays.
    pub fn all() -> Vec<Perm4> {
        let mut out = Vec::with_capacity(24);
        let mut items = [0u8, 1, 2, 3];
        permute(&mut items, 0, &mut out);
        out.sort_by_key(|p| p.0);
        out
    }

    /// The 12 even permutations, lexicographically ordered.
    pub fn all_even() -> Vec<Perm4> {
        Perm4::all().into_iter().filter(|p| !p.is_odd()).collect()
    }

    /// The 12 odd permutations, lexicographically ordered.
    pub fn all_odd() -> Vec<Perm4> {
        Perm4::all().into_iter().filter(|p| p.is_odd()).collect()
    }
}

fn permute(items: &mut [u8; 4], k: usize, out: &mut Vec<Perm4>) {
    if k == 4 {
        out.push(Perm4(*items));
        return;
    }
    for i in k..4 {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}

/// Parity of the arrangement `[a, b, c, d]` of four distinct symbols,
/// viewed as the permutation sending 0,1,2,3 to a,b,c,d. Returns true if even.
pub fn arrangement_is_even(a: u8, b: u8, c: u8, d: u8) -> bool {
    !Perm4([a, b, c, d]).is_odd()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_counts() {
        assert_eq!(Perm4::all().len(), 24);
        assert_eq!(Perm4::all_even().len(), 12);
        assert_eq!(Perm4::all_odd().len(), 12);
        assert!(!Perm4::IDENTITY.is_odd());
        assert!(Perm4([1, 0, 2, 3]).is_odd());
    }

    #[test]
    fn compose_inverse() {
        for p in Perm4::all() {
            assert_eq!(p.compose(&p.inverse()), Perm4::IDENTITY);
            assert_eq!(p.inverse().compose(&p), Perm4::IDENTITY);
        }
    }
}
