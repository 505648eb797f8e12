//! Fixed-universe bit set over vertex ids.

/// A set of vertex ids drawn from a fixed universe `0..capacity`. Backed by
/// packed 64-bit words; equality, ordering, and hashing see only the
/// contents, so sets of different capacity with equal members compare equal
/// as long as trailing words are zero, which the constructors guarantee.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct VertexSet {
    words: Vec<u64>,
}

impl VertexSet {
    pub fn with_capacity(n: usize) -> Self {
        VertexSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(capacity: usize, it: I) -> Self {
        let mut s = VertexSet::with_capacity(capacity);
        for i in it {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, i: usize) {
        let w = i / 64;
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        let w = i / 64;
        if w < self.words.len() {
            self.words[w] &= !(1 << (i % 64));
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        let w = i / 64;
        w < self.words.len() && self.words[w] & (1 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn toggle(&mut self, i: usize) {
        let w = i / 64;
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        self.words[w] ^= 1 << (i % 64);
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .any(|(a, b)| a & b != 0)
    }

    /// True when self is a subset of other (not necessarily proper).
    pub fn is_subset(&self, other: &VertexSet) -> bool {
        for (i, &w) in self.words.iter().enumerate() {
            let o = other.words.get(i).copied().unwrap_or(0);
            if w & !o != 0 {
                return false;
            }
        }
        true
    }

    /// Members of self not in other.
    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        for (i, w) in out.words.iter_mut().enumerate() {
            *w &= !other.words.get(i).copied().unwrap_or(0);
        }
        out
    }

    /// Ascending iterator over members.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl std::fmt::Display for VertexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", i)?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_membership() {
        let mut s = VertexSet::with_capacity(100);
        assert!(s.is_empty());
        s.insert(0);
        s.insert(63);
        s.insert(64);
        s.insert(99);
        assert_eq!(s.len(), 4);
        assert!(s.contains(63) && s.contains(64));
        assert!(!s.contains(62));
        s.remove(63);
        assert!(!s.contains(63));
        assert_eq!(s.to_vec(), vec![0, 64, 99]);
    }

    #[test]
    fn subset_and_difference() {
        let a = VertexSet::from_iter(128, [1, 5, 70]);
        let b = VertexSet::from_iter(128, [1, 5, 70, 100]);
        assert!(a.is_subset(&b));
        assert!(!b.is_subset(&a));
        assert!(a.is_subset(&a));
        assert_eq!(b.difference(&a).to_vec(), vec![100]);
        assert!(a.intersects(&b));
        let c = VertexSet::from_iter(128, [2, 3]);
        assert!(!a.intersects(&c));
    }

    #[test]
    fn toggle_flips() {
        let mut s = VertexSet::with_capacity(10);
        s.toggle(7);
        assert!(s.contains(7));
        s.toggle(7);
        assert!(!s.contains(7));
        assert!(s.is_empty());
    }

    #[test]
    fn equality_ignores_capacity_padding() {
        let a = VertexSet::from_iter(64, [3, 9]);
        let b = VertexSet::from_iter(64, [3, 9]);
        assert_eq!(a, b);
        let mut c = VertexSet::with_capacity(64);
        c.insert(3);
        c.insert(9);
        assert_eq!(a, c);
    }

    #[test]
    fn ordering_is_total_and_stable() {
        let mut sets = vec![
            VertexSet::from_iter(64, [2]),
            VertexSet::from_iter(64, [0, 1]),
            VertexSet::from_iter(64, [1, 2]),
        ];
        sets.sort();
        let again = {
            let mut s = sets.clone();
            s.sort();
            s
        };
        assert_eq!(sets, again);
    }
}
