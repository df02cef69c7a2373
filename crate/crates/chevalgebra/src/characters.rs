//! Formal characters and the Freudenthal multiplicity recursion.
//!
//! Weights live in the ambient model of [`RootSystem`], so κ is
//! [`RootSystem::pairing`]. ρ is kept doubled to stay integral.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::rootsys::{vadd, vsub, RootSystem, Vector};

#[derive(Debug, thiserror::Error)]
pub enum CharacterError {
    #[error("highest weight is not dominant")]
    NotDominant,
    #[error("Freudenthal denominator vanished at {0:?}")]
    ZeroDenominator(Vector),
}

/// Weight ↦ multiplicity, zero multiplicities omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalCharacter {
    pub terms: BTreeMap<Vector, u64>,
}

#[derive(Serialize)]
pub struct CharacterTerm {
    pub weight: Vector,
    pub mult: u64,
}

impl FormalCharacter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, w: Vector, m: u64) {
        if m > 0 {
            *self.terms.entry(w).or_insert(0) += m;
        }
    }

    pub fn mult(&self, w: &[i64]) -> u64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn dim(&self) -> u64 {
        self.terms.values().sum()
    }

    /// `self − other`, or `None` when some multiplicity would go negative.
    pub fn checked_sub(&self, other: &FormalCharacter) -> Option<FormalCharacter> {
        let mut out = self.clone();
        for (w, &m) in &other.terms {
            let e = out.terms.get_mut(w)?;
            *e = e.checked_sub(m)?;
            if *e == 0 {
                out.terms.remove(w);
            }
        }
        Some(out)
    }

    /// Weights on which the two characters differ, with both multiplicities.
    pub fn diff(&self, other: &FormalCharacter) -> Vec<(Vector, u64, u64)> {
        let keys: std::collections::BTreeSet<&Vector> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .filter_map(|w| {
                let (a, b) = (self.mult(w), other.mult(w));
                (a != b).then(|| (w.clone(), a, b))
            })
            .collect()
    }

    pub fn is_weyl_invariant(&self, rs: &RootSystem) -> bool {
        self.terms.iter().all(|(w, &m)| rs.simple().iter().all(|&s| self.mult(&rs.reflect(s, w)) == m))
    }

    pub fn to_doc(&self) -> Vec<CharacterTerm> {
        self.terms.iter().map(|(w, &m)| CharacterTerm { weight: w.clone(), mult: m }).collect()
    }
}

/// Half the sum of positive roots, doubled.
pub fn two_rho(rs: &RootSystem) -> Vector {
    rs.two_rho()
}

pub fn is_dominant(rs: &RootSystem, v: &[i64]) -> bool {
    rs.simple().iter().all(|&s| rs.pairing(v, rs.root(s)) >= 0)
}

/// The dominant element of the Weyl orbit of `v`.
pub fn to_dominant(rs: &RootSystem, v: &[i64]) -> Vector {
    let mut v = v.to_vec();
    'outer: loop {
        for &s in rs.simple() {
            if rs.pairing(&v, rs.root(s)) < 0 {
                v = rs.reflect(s, &v);
                continue 'outer;
            }
        }
        return v;
    }
}

pub fn weyl_orbit(rs: &RootSystem, v: &[i64]) -> Vec<Vector> {
    let mut seen: HashSet<Vector> = HashSet::from([v.to_vec()]);
    let mut queue = VecDeque::from([v.to_vec()]);
    while let Some(w) = queue.pop_front() {
        for &s in rs.simple() {
            let u = rs.reflect(s, &w);
            if seen.insert(u.clone()) {
                queue.push_back(u);
            }
        }
    }
    seen.into_iter().collect()
}

/// Character of S²(𝓛) from the weight sets.
pub fn char_s2(rs: &RootSystem) -> FormalCharacter {
    let n = rs.rank as u64;
    let mut ch = FormalCharacter::new();
    for e in &rs.weight_sets().entries {
        let nl = e.n() as u64;
        let m = match e.class {
            -2 => n * (n + 1) / 2 + nl,
            -1 => nl + n,
            _ => nl,
        };
        ch.add(e.weight.clone(), m);
    }
    ch
}

/// Character of 𝒱 in closed form.
pub fn char_v_closed(rs: &RootSystem) -> FormalCharacter {
    let mut ch = FormalCharacter::new();
    for e in &rs.weight_sets().entries {
        let nl = e.n() as u64;
        let m = match e.class {
            -2 => nl,
            -1 => nl + 1,
            0 => nl - 1,
            _ => 1,
        };
        ch.add(e.weight.clone(), m);
    }
    ch
}

/// Character of 𝒜 in closed form.
pub fn char_a(rs: &RootSystem) -> FormalCharacter {
    let n = rs.rank as u64;
    let mut ch = FormalCharacter::new();
    for e in &rs.weight_sets().entries {
        let m = match e.class {
            -2 => n * (n + 1) / 2,
            -1 => n - 1,
            0 => 1,
            _ => 0,
        };
        ch.add(e.weight.clone(), m);
    }
    ch
}

/// 2ω for the highest root ω.
pub fn two_omega(rs: &RootSystem) -> Vector {
    let w = rs.root(rs.highest_root());
    vadd(w, w)
}

/// Character of the irreducible module with dominant highest weight `hw`.
pub fn freudenthal_char(rs: &RootSystem, hw: &[i64]) -> Result<FormalCharacter, CharacterError> {
    if !is_dominant(rs, hw) {
        return Err(CharacterError::NotDominant);
    }
    let rho2 = rs.two_rho();
    let pos: Vec<Vector> = (0..rs.npos()).map(|i| rs.root(i).to_vec()).collect();
    // κ(λ+ρ,λ+ρ) − κ(ρ,ρ).
    let norm = |v: &[i64]| rs.pairing(v, v) + rs.pairing(v, &rho2);

    // Dominant weights below hw are connected to it through dominant weights
    // differing by positive roots.
    let mut dominant: HashSet<Vector> = HashSet::from([hw.to_vec()]);
    let mut queue = VecDeque::from([hw.to_vec()]);
    while let Some(w) = queue.pop_front() {
        for a in &pos {
            let u = vsub(&w, a);
            if is_dominant(rs, &u) && dominant.insert(u.clone()) {
                queue.push_back(u);
            }
        }
    }
    let mut order: Vec<Vector> = dominant.iter().cloned().collect();
    order.sort_by_key(|v| std::cmp::Reverse(norm(v)));

    let top = norm(hw);
    let mut mult: HashMap<Vector, i64> = HashMap::new();
    mult.insert(hw.to_vec(), 1);
    for mu in order.iter().filter(|v| v.as_slice() != hw) {
        let mut sum = 0i64;
        for a in &pos {
            let mut nu = vadd(mu, a);
            loop {
                let d = to_dominant(rs, &nu);
                if !dominant.contains(&d) {
                    break;
                }
                let m = *mult.get(&d).expect("higher weights are processed first");
                sum += m * rs.pairing(&nu, a);
                nu = vadd(&nu, a);
            }
        }
        let den = top - norm(mu);
        if den == 0 {
            return Err(CharacterError::ZeroDenominator(mu.clone()));
        }
        debug_assert!((2 * sum) % den == 0);
        mult.insert(mu.clone(), 2 * sum / den);
    }

    let mut ch = FormalCharacter::new();
    for (d, &m) in &mult {
        if m > 0 {
            for w in weyl_orbit(rs, d) {
                ch.add(w, m as u64);
            }
        }
    }
    Ok(ch)
}
