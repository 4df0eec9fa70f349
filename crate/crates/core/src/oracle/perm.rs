/// A permutation of `{0, .., n-1}` stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Perm(pub Vec<u8>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u8).collect())
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut p = Perm::identity(n);
        p.0.swap(i, j);
        p
    }

    /// Coset representative of `S_{level+1} / S_level` sending `level` to `k`.
    pub fn coset_rep(level: usize, k: usize) -> Self {
        Perm::transposition(level + 1, k, level)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.len(), other.len());
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    /// Extend by fixed points up to size `n`.
    pub fn extend(&self, n: usize) -> Perm {
        let mut v = self.0.clone();
        v.extend(self.0.len() as u8..n as u8);
        Perm(v)
    }

    /// Drop the last point, which must be fixed.
    pub fn shrink(mut self) -> Perm {
        let last = self.0.pop().expect("nonempty permutation");
        debug_assert_eq!(last as usize, self.0.len());
        self
    }

    /// Write `self` as `r_{k_1} r_{k_2} … r_{k_depth} · h` with coset
    /// representatives for the tower `S_{n-depth} ⊂ … ⊂ S_n`, outermost first.
    pub fn decompose(&self, depth: usize) -> (Vec<u8>, Perm) {
        let mut g = self.clone();
        let mut ks = Vec::with_capacity(depth);
        for _ in 0..depth {
            let top = g.len() - 1;
            let k = g.apply(top);
            ks.push(k as u8);
            g = Perm::coset_rep(top, k).compose(&g).shrink();
        }
        (ks, g)
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// All permutations of `{0..n}` in lexicographic order.
pub fn all_perms(n: usize) -> Vec<Perm> {
    use itertools::Itertools;
    (0..n as u8).permutations(n).map(Perm).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompose_recomposes() {
        for g in all_perms(4) {
            let (ks, h) = g.decompose(2);
            let mut rebuilt = h.extend(4);
            let r2 = Perm::coset_rep(2, ks[1] as usize).extend(4);
            let r3 = Perm::coset_rep(3, ks[0] as usize);
            rebuilt = r3.compose(&r2.compose(&rebuilt));
            assert_eq!(rebuilt, g);
        }
    }
}
