//! Gauss-Jordan elimination over GF(2) with provenance tracking.
//!
//! Each row remembers which input equations were XORed into it, so an
//! inconsistent row `0 = 1` doubles as a certificate.

/// Growable bitset over equation indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Provenance(Vec<u64>);

impl Provenance {
    fn single(index: usize, words: usize) -> Provenance {
        let mut bits = vec![0u64; words];
        bits[index / 64] |= 1 << (index % 64);
        Provenance(bits)
    }

    fn xor_assign(&mut self, other: &Provenance) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }

    fn indices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &word) in self.0.iter().enumerate() {
            let mut rest = word;
            while rest != 0 {
                out.push(w * 64 + rest.trailing_zeros() as usize);
                rest &= rest - 1;
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
struct Row {
    coeffs: u64,
    rhs: bool,
    origin: Provenance,
}

/// A system of parity equations `Σ_{k∈vars} x_k = rhs (mod 2)` over at most
/// 64 variables.
#[derive(Clone, Debug, Default)]
pub struct Gf2System {
    variables: usize,
    equations: Vec<(u64, bool)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gf2Solution {
    /// Pivot variables solved, free variables set to 0.
    Consistent(Vec<bool>),
    /// Indices of input equations that XOR to `0 = 1`.
    Inconsistent(Vec<usize>),
}

impl Gf2System {
    pub fn new(variables: usize) -> Gf2System {
        assert!(variables <= 64, "at most 64 variables");
        Gf2System { variables, equations: Vec::new() }
    }

    pub fn push(&mut self, vars: u64, rhs: bool) {
        assert!(
            self.variables == 64 || vars >> self.variables == 0,
            "equation names a variable beyond {}",
            self.variables
        );
        self.equations.push((vars, rhs));
    }

    /// Reduced row echelon form, pivoting on the lowest variable index and
    /// the earliest available row.
    pub fn solve(&self) -> Gf2Solution {
        let words = self.equations.len().div_ceil(64).max(1);
        let mut rows: Vec<Row> = self
            .equations
            .iter()
            .enumerate()
            .map(|(i, &(coeffs, rhs))| Row { coeffs, rhs, origin: Provenance::single(i, words) })
            .collect();

        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (variable, row)
        let mut next = 0;
        for var in 0..self.variables {
            let bit = 1u64 << var;
            let Some(found) = (next..rows.len()).find(|&r| rows[r].coeffs & bit != 0) else {
                continue;
            };
            rows.swap(next, found);
            let pivot = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && row.coeffs & bit != 0 {
                    row.coeffs ^= pivot.coeffs;
                    row.rhs ^= pivot.rhs;
                    row.origin.xor_assign(&pivot.origin);
                }
            }
            pivots.push((var, next));
            next += 1;
        }

        if let Some(bad) = rows[next..].iter().find(|r| r.coeffs == 0 && r.rhs) {
            return Gf2Solution::Inconsistent(bad.origin.indices());
        }
        let mut x = vec![false; self.variables];
        for (var, row) in pivots {
            // Free variables are zero, so each pivot equals its row's rhs.
            x[var] = rows[row].rhs;
        }
        Gf2Solution::Consistent(x)
    }
}
