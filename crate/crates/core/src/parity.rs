//! The count `N` of equivalence classes of valid arrangements and its parity.
//!
//! `N = multinomial(M; m_1..m_n) * prod S(m_i, k_i) / |G|` where `m_i = l_i + k_i - 1`
//! and `G` permutes families with identical `(L_i, k_i)`. Every quantity is
//! computed exactly, and the closed-form mod-2 rules are computed alongside so
//! the two routes can be compared.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Stirling number of the second kind by the triangular recurrence.
pub fn stirling2(m: usize, k: usize) -> BigUint {
    if k > m {
        return BigUint::zero();
    }
    // row[j] holds S(i, j) for the current i.
    let mut row = vec![BigUint::zero(); k + 1];
    row[0] = BigUint::one();
    for i in 1..=m {
        for j in (1..=k.min(i)).rev() {
            let v = &row[j] * BigUint::from(j) + &row[j - 1];
            row[j] = v;
        }
        row[0] = BigUint::zero();
    }
    row[k].clone()
}

/// `C(n, r) mod 2` by Lucas' theorem in base two: odd iff the bits of `r` are a subset of those of `n`.
pub fn binomial_parity(n: u64, r: u64) -> u8 {
    if r > n {
        return 0;
    }
    u8::from(r & !n == 0)
}

/// `S(m, k) mod 2` via `S(m,k) ≡ C(m - ceil((k+1)/2), floor((k-1)/2))`.
pub fn stirling2_parity(m: u64, k: u64) -> Result<u8> {
    if k == 0 || m < k {
        return Err(Error::InvalidInput(format!("stirling2_parity needs m >= k >= 1, got ({m}, {k})")));
    }
    let top = m - (k + 2) / 2;
    let bottom = (k - 1) / 2;
    Ok(binomial_parity(top, bottom))
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Multinomial coefficient `M! / prod(parts_i!)`, computed as a product of binomials.
pub fn multinomial(total: usize, parts: &[usize]) -> Result<BigUint> {
    let s: usize = parts.iter().sum();
    if s != total {
        return Err(Error::InvalidInput(format!("parts sum to {s}, expected {total}")));
    }
    let mut acc = BigUint::one();
    let mut running = 0usize;
    for &p in parts {
        running += p;
        acc *= binomial(running, p);
    }
    Ok(acc)
}

pub fn binomial(n: usize, r: usize) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Parity of the multinomial: odd iff the binary expansions of the parts share no set bit.
pub fn multinomial_parity(parts: &[u64]) -> u8 {
    let mut seen = 0u64;
    for &p in parts {
        if seen & p != 0 {
            return 0;
        }
        seen |= p;
    }
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureEntry {
    /// Canonical token of the direction subspace `L`.
    pub subspace: String,
    /// `dim L`.
    pub l: usize,
    pub k: usize,
}

impl SignatureEntry {
    pub fn m(&self) -> usize {
        self.l + self.k - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSignature {
    pub d: usize,
    pub entries: Vec<SignatureEntry>,
}

impl InstanceSignature {
    pub fn new(d: usize, entries: Vec<SignatureEntry>) -> Result<Self> {
        for e in &entries {
            if e.k == 0 {
                return Err(Error::InvalidInput("hyperplane count k must be positive".into()));
            }
            if e.l == 0 || e.l > d {
                return Err(Error::InvalidInput(format!("subspace dimension {} outside 1..={d}", e.l)));
            }
        }
        Ok(InstanceSignature { d, entries })
    }

    pub fn parts(&self) -> Vec<usize> {
        self.entries.iter().map(SignatureEntry::m).collect()
    }

    pub fn total(&self) -> usize {
        self.parts().iter().sum()
    }
}

pub fn automorphism_group_order(sig: &InstanceSignature) -> BigUint {
    let mut classes: BTreeMap<(&str, usize), usize> = BTreeMap::new();
    for e in &sig.entries {
        *classes.entry((e.subspace.as_str(), e.k)).or_default() += 1;
    }
    classes.values().fold(BigUint::one(), |acc, &c| acc * factorial(c))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityReport {
    pub n: BigUint,
    pub n_mod2: u8,
    pub total: usize,
    pub parts: Vec<usize>,
    pub multinomial: BigUint,
    pub stirling: Vec<BigUint>,
    pub group_order: BigUint,
    /// Parity predicted by the closed-form rules, when they apply (`|G|` odd).
    pub closed_form_mod2: Option<u8>,
}

pub fn compute_n(sig: &InstanceSignature) -> Result<ParityReport> {
    let parts = sig.parts();
    let total = sig.total();
    let mult = multinomial(total, &parts)?;
    let stirling: Vec<BigUint> = sig.entries.iter().map(|e| stirling2(e.m(), e.k)).collect();
    let product = stirling.iter().fold(mult.clone(), |acc, s| acc * s);
    let g = automorphism_group_order(sig);
    let (n, rem) = product.div_rem(&g);
    if !rem.is_zero() {
        return Err(Error::Inconsistent(format!("|G| = {g} does not divide {product}")));
    }
    let n_mod2 = u8::from(n.is_odd());
    let closed_form_mod2 = if g.is_odd() {
        let mut bit = multinomial_parity(&parts.iter().map(|&p| p as u64).collect::<Vec<_>>());
        for e in &sig.entries {
            bit &= stirling2_parity(e.m() as u64, e.k as u64)?;
        }
        Some(bit)
    } else {
        None
    };
    Ok(ParityReport {
        n,
        n_mod2,
        total,
        parts,
        multinomial: mult,
        stirling,
        group_order: g,
        closed_form_mod2,
    })
}

/// `grid[d-1][k-1] = S(d+k-1, k) mod 2`, the cases of one family of `k`
/// parallel hyperplanes with unconstrained direction in `R^d`.
pub fn stirling_parity_table(d_max: usize, k_max: usize) -> Vec<Vec<u8>> {
    (1..=d_max)
        .map(|d| {
            (1..=k_max)
                .map(|k| stirling2_parity((d + k - 1) as u64, k as u64).expect("d + k - 1 >= k >= 1"))
                .collect()
        })
        .collect()
}

pub fn table_text(grid: &[Vec<u8>]) -> String {
    let mut s = String::new();
    for row in grid {
        let line: String = row.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect();
        s.push_str(&line);
        s.push('\n');
    }
    s
}
