//! Dense bit-packed linear algebra over GF(2).
//!
//! Vectors are `Vec<u64>` with bit i of word w holding coordinate 64*w + i.
//! Row spaces are kept in reduced row-echelon form keyed by pivot column, so
//! membership tests and reductions are a single sweep.

pub type BitVec = Vec<u64>;

pub fn zero_vec(ncols: usize) -> BitVec {
    vec![0u64; ncols.div_ceil(64)]
}

pub fn unit_vec(ncols: usize, i: usize) -> BitVec {
    let mut v = zero_vec(ncols);
    set_bit(&mut v, i);
    v
}

#[inline]
pub fn set_bit(v: &mut BitVec, i: usize) {
    v[i / 64] |= 1u64 << (i % 64);
}

#[inline]
pub fn get_bit(v: &BitVec, i: usize) -> bool {
    (v[i / 64] >> (i % 64)) & 1 == 1
}

#[inline]
pub fn flip_bit(v: &mut BitVec, i: usize) {
    v[i / 64] ^= 1u64 << (i % 64);
}

#[inline]
pub fn xor_into(dst: &mut BitVec, src: &BitVec) {
    for (d, s) in dst.iter_mut().zip(src.iter()) {
        *d ^= *s;
    }
}

pub fn is_zero(v: &BitVec) -> bool {
    v.iter().all(|&w| w == 0)
}

/// Index of the lowest set bit, if any.
pub fn leading_bit(v: &BitVec) -> Option<usize> {
    for (w, &word) in v.iter().enumerate() {
        if word != 0 {
            return Some(w * 64 + word.trailing_zeros() as usize);
        }
    }
    None
}

pub fn support(v: &BitVec) -> Vec<usize> {
    let mut out = Vec::new();
    for (w, &word) in v.iter().enumerate() {
        let mut bits = word;
        while bits != 0 {
            out.push(w * 64 + bits.trailing_zeros() as usize);
            bits &= bits - 1;
        }
    }
    out
}

/// A subspace of F2^n held in reduced row-echelon form.
///
/// Invariant: every stored row has its pivot (lowest set bit) distinct from
/// all other rows' pivots, and no row has a set bit at another row's pivot.
#[derive(Clone, Debug, Default)]
pub struct RowSpace {
    ncols: usize,
    rows: std::collections::BTreeMap<usize, BitVec>,
}

impl RowSpace {
    pub fn new(ncols: usize) -> Self {
        RowSpace {
            ncols,
            rows: Default::default(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn has_pivot(&self, i: usize) -> bool {
        self.rows.contains_key(&i)
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, &BitVec)> {
        self.rows.iter().map(|(&p, v)| (p, v))
    }

    /// Reduce `v` against the stored rows; the result has no set bit at any
    /// stored pivot. A single pass in increasing pivot order suffices because
    /// rows in RREF carry no set bit at other rows' pivots.
    pub fn reduce(&self, mut v: BitVec) -> BitVec {
        for (&p, row) in self.rows.iter() {
            if get_bit(&v, p) {
                xor_into(&mut v, row);
            }
        }
        v
    }

    /// Membership test.
    pub fn contains(&self, v: &BitVec) -> bool {
        is_zero(&self.reduce(v.clone()))
    }

    /// Insert `v`; returns the new pivot if `v` was independent.
    pub fn insert(&mut self, v: BitVec) -> Option<usize> {
        let v = self.reduce(v);
        let lead = leading_bit(&v)?;
        // Back-substitute into existing rows to keep RREF.
        for row in self.rows.values_mut() {
            if get_bit(row, lead) {
                xor_into(row, &v);
            }
        }
        self.rows.insert(lead, v);
        Some(lead)
    }

    pub fn full(ncols: usize) -> Self {
        let mut s = RowSpace::new(ncols);
        for i in 0..ncols {
            s.rows.insert(i, unit_vec(ncols, i));
        }
        s
    }

    /// Basis vectors of this space reduced modulo `other`, i.e. coset
    /// representatives for self/other, keyed by their pivot. Requires
    /// `other` to be a subspace of `self` for the quotient reading.
    pub fn quotient_reps(&self, other: &RowSpace) -> Vec<(usize, BitVec)> {
        let mut reps: RowSpace = other.clone();
        let mut out = Vec::new();
        for v in self.rows.values() {
            let before = reps.rank();
            if let Some(p) = reps.insert(v.clone()) {
                debug_assert_eq!(reps.rank(), before + 1);
                let row = reps.rows.get(&p).unwrap().clone();
                out.push((p, row));
            }
        }
        out.sort_by_key(|&(p, _)| p);
        out
    }
}

/// Rank of a collection of sparse vectors given by sorted index lists.
///
/// Pivot choice is the lowest index; rows are kept sparse. Intended for the
/// cobar coboundary matrices, which are near-triangular in filtration order.
pub fn sparse_rank(cols: impl IntoIterator<Item = Vec<u32>>) -> usize {
    let mut pivots: std::collections::BTreeMap<u32, std::rc::Rc<Vec<u32>>> = Default::default();
    for col in cols {
        let mut cur = col;
        debug_assert!(cur.windows(2).all(|w| w[0] < w[1]));
        loop {
            let Some(&lead) = cur.first() else { break };
            match pivots.get(&lead) {
                Some(row) => cur = xor_sorted(&cur, row),
                None => {
                    pivots.insert(lead, std::rc::Rc::new(cur));
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Symmetric difference of two sorted index lists.
pub fn xor_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rowspace_rank_and_membership() {
        let mut s = RowSpace::new(5);
        assert_eq!(s.insert(unit_vec(5, 1)), Some(1));
        let mut v = unit_vec(5, 1);
        set_bit(&mut v, 3);
        assert_eq!(s.insert(v.clone()), Some(3));
        assert_eq!(s.rank(), 2);
        assert!(s.contains(&unit_vec(5, 3)));
        assert!(!s.contains(&unit_vec(5, 0)));
        // inserting a dependent vector is a no-op
        assert_eq!(s.insert(unit_vec(5, 3)), None);
        assert_eq!(s.rank(), 2);
    }

    #[test]
    fn rowspace_rref_invariant() {
        let mut s = RowSpace::new(8);
        let mut v1 = unit_vec(8, 0);
        set_bit(&mut v1, 4);
        let mut v2 = unit_vec(8, 2);
        set_bit(&mut v2, 4);
        s.insert(v1);
        s.insert(v2);
        let mut v3 = unit_vec(8, 4);
        set_bit(&mut v3, 7);
        s.insert(v3);
        // after inserting pivot 4, rows 0 and 2 must be cleaned at column 4
        for (_, row) in s.rows() {
            let pivs: Vec<usize> = s.pivots().collect();
            let mut count = 0;
            for &p in &pivs {
                if get_bit(row, p) {
                    count += 1;
                }
            }
            assert_eq!(count, 1);
        }
    }

    #[test]
    fn quotient_reps_counts() {
        let mut z = RowSpace::new(4);
        z.insert(unit_vec(4, 0));
        z.insert(unit_vec(4, 1));
        z.insert(unit_vec(4, 2));
        let mut b = RowSpace::new(4);
        b.insert(unit_vec(4, 1));
        let reps = z.quotient_reps(&b);
        assert_eq!(reps.len(), 2);
        assert_eq!(reps[0].0, 0);
        assert_eq!(reps[1].0, 2);
    }

    #[test]
    fn sparse_rank_small() {
        // columns of a 4x4 identity plus a dependent column
        let cols = vec![vec![0], vec![1], vec![2], vec![0, 1, 2]];
        assert_eq!(sparse_rank(cols), 3);
    }

    #[test]
    fn xor_sorted_merge() {
        assert_eq!(xor_sorted(&[1, 3, 5], &[3, 4]), vec![1, 4, 5]);
    }
}
