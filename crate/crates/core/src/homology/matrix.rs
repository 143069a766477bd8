use rustc_hash::FxHashMap;

/// A sparse matrix over GF(2) stored by columns; each column is the sorted
/// list of its nonzero row indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Gf2Matrix {
    columns: Vec<Vec<u32>>,
}

/// Result of left-to-right column reduction.
#[derive(Clone, Debug)]
pub struct Reduction {
    /// Reduced columns; every nonzero one has a distinct lowest row.
    pub columns: Vec<Vec<u32>>,
    /// Lowest row of each nonzero reduced column, mapped to that column.
    pub pivots: FxHashMap<u32, usize>,
}

impl Reduction {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn low(&self, col: usize) -> Option<u32> {
        self.columns[col].last().copied()
    }
}

/// `a + b` over GF(2) for sorted index lists.
pub(crate) fn add_columns(a: &[u32], b: &[u32]) -> Vec<u32> {
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

impl Gf2Matrix {
    /// Columns are sorted and deduplicated mod 2.
    pub fn new(columns: Vec<Vec<u32>>) -> Self {
        let columns = columns
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                let mut out: Vec<u32> = Vec::with_capacity(c.len());
                for x in c {
                    if out.last() == Some(&x) {
                        out.pop();
                    } else {
                        out.push(x);
                    }
                }
                out
            })
            .collect();
        Gf2Matrix { columns }
    }

    pub fn columns(&self) -> &[Vec<u32>] {
        &self.columns
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    /// Standard persistence reduction: add earlier columns to later ones
    /// until all lowest rows are distinct.
    pub fn reduce(&self) -> Reduction {
        let mut columns = self.columns.clone();
        let mut pivots: FxHashMap<u32, usize> = FxHashMap::default();
        for j in 0..columns.len() {
            while let Some(&low) = columns[j].last() {
                match pivots.get(&low) {
                    Some(&p) => columns[j] = add_columns(&columns[j], &columns[p]),
                    None => {
                        pivots.insert(low, j);
                        break;
                    }
                }
            }
        }
        Reduction { columns, pivots }
    }

    pub fn rank(&self) -> usize {
        self.reduce().rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        let zero = Gf2Matrix::new(vec![vec![], vec![]]);
        let r = zero.reduce();
        assert_eq!(r.rank(), 0);
        assert!(r.columns.iter().all(|c| c.is_empty()));

        let id = Gf2Matrix::new(vec![vec![0], vec![1], vec![2]]);
        assert_eq!(id.reduce().columns, id.columns().to_vec());

        // Hollow triangle on vertices 0, 1, 2.
        let tri = Gf2Matrix::new(vec![vec![0, 1], vec![1, 2], vec![0, 2]]);
        let r = tri.reduce();
        assert_eq!(r.rank(), 2);
        assert_eq!(r.columns.iter().filter(|c| c.is_empty()).count(), 1);
    }

    fn dense_rank(cols: &[Vec<u32>], rows: usize) -> usize {
        let mut m: Vec<Vec<bool>> = cols
            .iter()
            .map(|c| (0..rows as u32).map(|r| c.iter().filter(|&&x| x == r).count() % 2 == 1).collect())
            .collect();
        let mut rank = 0;
        for row in 0..rows {
            let Some(p) = (rank..m.len()).find(|&i| m[i][row]) else {
                continue;
            };
            m.swap(rank, p);
            for i in 0..m.len() {
                if i != rank && m[i][row] {
                    let pivot = m[rank].clone();
                    for (x, y) in m[i].iter_mut().zip(pivot) {
                        *x ^= y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    proptest! {
        #[test]
        fn rank_matches_elimination(cols in prop::collection::vec(prop::collection::vec(0u32..8, 0..6), 0..10)) {
            let m = Gf2Matrix::new(cols.clone());
            let r = m.reduce();
            prop_assert_eq!(r.rank(), dense_rank(&cols, 8));
            let lows: Vec<u32> = r.columns.iter().filter_map(|c| c.last().copied()).collect();
            let mut dedup = lows.clone();
            dedup.sort_unstable();
            dedup.dedup();
            prop_assert_eq!(dedup.len(), lows.len());
        }
    }
}
