//! Test-only oracles that share no code path with the library.
//!
//! `DenseState` stores all `2^n` integer amplitudes of `Σ θ_i |S_i⟩` and
//! answers probability questions by direct summation over basis states.
#![allow(dead_code)]

use davn_core::{PcgStateSpec, Rational};

/// Basis index bit `k` is qubit `k + 1` in |1⟩.
pub struct DenseState {
    pub n: usize,
    pub amps: Vec<i64>,
}

impl DenseState {
    pub fn new(state: &PcgStateSpec) -> DenseState {
        let n = state.n();
        let mut amps = vec![0i64; 1 << n];
        for c in state.components() {
            let index: usize = c.support.to_one_based().iter().map(|q| 1usize << (q - 1)).sum();
            assert_eq!(amps[index], 0, "duplicate basis state");
            amps[index] = c.sign.value();
        }
        DenseState { n, amps }
    }

    fn norm(&self) -> i64 {
        self.amps.iter().map(|a| a * a).sum()
    }

    /// Probability of a full Z outcome given as ±1 per qubit.
    pub fn z_probability(&self, values: &[i64]) -> Rational {
        let index: usize = values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == -1)
            .map(|(k, _)| 1usize << k)
            .sum();
        Rational::new(self.amps[index] * self.amps[index], self.norm())
    }

    /// Partial trace onto qubit `k` (0-based): `[[ρ00, ρ01], [ρ10, ρ11]]`.
    pub fn reduced_density(&self, k: usize) -> [[Rational; 2]; 2] {
        let bit = 1usize << k;
        let mut m = [[0i64; 2]; 2];
        for x in 0..self.amps.len() {
            if x & bit != 0 {
                continue;
            }
            let (a0, a1) = (self.amps[x], self.amps[x | bit]);
            m[0][0] += a0 * a0;
            m[0][1] += a0 * a1;
            m[1][0] += a1 * a0;
            m[1][1] += a1 * a1;
        }
        let norm = self.norm();
        m.map(|row| row.map(|v| Rational::new(v, norm)))
    }

    /// `P(∏_{k∈edge} X_k = alpha | Z_q = v for (q, v) in conditioning)`,
    /// qubits 1-based. `None` when the conditioning has probability zero.
    pub fn conditional_x_probability(
        &self,
        edge: &[usize],
        alpha: i64,
        conditioning: &[(usize, i64)],
    ) -> Option<Rational> {
        let flip: usize = edge.iter().map(|q| 1usize << (q - 1)).sum();
        let projected: Vec<i64> = (0..self.amps.len())
            .map(|x| {
                let agrees = conditioning.iter().all(|&(q, v)| {
                    let one = x >> (q - 1) & 1 == 1;
                    one == (v == -1)
                });
                if agrees {
                    self.amps[x]
                } else {
                    0
                }
            })
            .collect();
        let norm: i64 = projected.iter().map(|a| a * a).sum();
        if norm == 0 {
            return None;
        }
        let overlap: i64 = (0..projected.len()).map(|x| projected[x] * projected[x ^ flip]).sum();
        let expectation = Rational::new(overlap, norm);
        Some((Rational::from_integer(1) + Rational::from_integer(alpha) * expectation) / 2)
    }

    /// Schmidt rank across `part` (1-based qubits) via fraction-free
    /// elimination on the dense coefficient matrix.
    pub fn schmidt_rank(&self, part: &[usize]) -> usize {
        let a: Vec<usize> = part.iter().map(|q| q - 1).collect();
        let b: Vec<usize> = (0..self.n).filter(|k| !a.contains(k)).collect();
        let mut m = vec![vec![0i128; 1 << b.len()]; 1 << a.len()];
        for x in 0..self.amps.len() {
            let row = a.iter().enumerate().map(|(i, &k)| (x >> k & 1) << i).sum::<usize>();
            let col = b.iter().enumerate().map(|(i, &k)| (x >> k & 1) << i).sum::<usize>();
            m[row][col] = self.amps[x] as i128;
        }
        bareiss_rank(m)
    }
}

fn bareiss_rank(mut m: Vec<Vec<i128>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][col] != 0) else { continue };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                m[r][c] = (m[rank][col] * m[r][c] - m[r][col] * m[rank][c]) / prev;
            }
            m[r][col] = 0;
        }
        prev = m[rank][col];
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// `n choose 2`.
pub fn pairs(n: usize) -> usize {
    n * (n - 1) / 2
}
