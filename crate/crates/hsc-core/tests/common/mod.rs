//! Naive reference constructions shared by the integration tests.
#![allow(dead_code)]

use hsc_core::linalg::{Matrix, Sparse};
use hsc_core::C64;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Dense `â` on `0..=n`.
pub fn annihilator(n: usize) -> Matrix {
    Matrix::from_fn(n + 1, n + 1, |r, col| if col == r + 1 { c((col as f64).sqrt()) } else { c(0.0) })
}

/// `D(α)S(ξ)|0⟩` by dense matrix exponentials at cutoff `n`, real arguments.
pub fn dense_dsv(alpha: f64, xi: f64, n: usize) -> Vec<C64> {
    let a = annihilator(n);
    let ad = a.adjoint();
    let d = ad.scale(c(alpha)).sub(&a.scale(c(alpha))).expm();
    let s = a.matmul(&a).sub(&ad.matmul(&ad)).scale(c(0.5 * xi)).expm();
    let mut vac = vec![c(0.0); n + 1];
    vac[0] = c(1.0);
    d.mul_vec(&s.mul_vec(&vac))
}

/// Ladder action on one rail of a multi-rail Fock space.
#[derive(Clone, Copy)]
pub enum Ladder {
    Up(usize),
    Down(usize),
}

/// Operators on `rails` modes of common cutoff `m`, built from sums of
/// ladder monomials (applied right to left).
pub struct RailSpace {
    pub rails: usize,
    pub m: usize,
}

impl RailSpace {
    pub fn dim(&self) -> usize {
        (self.m + 1).pow(self.rails as u32)
    }

    pub fn index(&self, occ: &[usize]) -> usize {
        occ.iter().fold(0, |acc, &o| acc * (self.m + 1) + o)
    }

    fn occupation(&self, mut idx: usize) -> Vec<usize> {
        let mut occ = vec![0; self.rails];
        for k in (0..self.rails).rev() {
            occ[k] = idx % (self.m + 1);
            idx /= self.m + 1;
        }
        occ
    }

    pub fn operator(&self, terms: &[(C64, Vec<Ladder>)]) -> Sparse {
        let mut s = Sparse::new(self.dim());
        for col in 0..self.dim() {
            for (coef, mono) in terms {
                let mut occ = self.occupation(col);
                let mut amp = *coef;
                let mut alive = true;
                for op in mono.iter().rev() {
                    match *op {
                        Ladder::Down(k) => {
                            if occ[k] == 0 {
                                alive = false;
                                break;
                            }
                            amp *= (occ[k] as f64).sqrt();
                            occ[k] -= 1;
                        }
                        Ladder::Up(k) => {
                            if occ[k] == self.m {
                                alive = false;
                                break;
                            }
                            occ[k] += 1;
                            amp *= (occ[k] as f64).sqrt();
                        }
                    }
                }
                if alive {
                    s.push(self.index(&occ), col, amp);
                }
            }
        }
        s
    }
}
