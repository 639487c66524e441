//! Named states and state families.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::state::{validate_pcg_state, PcgStateSpec, RawComponent, RawState, ValidationMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyId {
    /// (|000⟩−|011⟩−|101⟩−|110⟩)/2.
    Ghz3,
    /// (|0000⟩ − S(2,2))/√7.
    Phi4,
    /// (|0000⟩−|0101⟩−|0110⟩−|1001⟩−|1010⟩−|1100⟩)/√6.
    Phi4Prime,
    /// (|0000⟩+|0101⟩+|0110⟩+|1001⟩+|1010⟩−|1100⟩)/√6.
    Phi4DoublePrime,
    /// (|0…0⟩ − S(n−2,2))/√(C(n,2)+1) on `n ≥ 4` qubits.
    PhiN(usize),
    /// (|00000⟩ − S(1,4))/√6.
    Phi5,
    /// (|0…0⟩ − S(1,2m+2))/√(2m+4) on `2m+3` qubits, `m ≥ 1`.
    Phi2n3(usize),
    /// (|001⟩+|010⟩−|100⟩)/√3.
    Fig1a,
    /// (|0000⟩−|1101⟩+|0011⟩)/√3.
    Fig1b,
    /// (|000⟩+|011⟩−|101⟩+|110⟩)/2.
    Fig1c,
}

pub const FAMILY_NAMES: [&str; 10] = [
    "ghz3",
    "phi4",
    "phi4_prime",
    "phi4_double_prime",
    "phi_n",
    "phi5",
    "phi_2n3",
    "fig1a",
    "fig1b",
    "fig1c",
];

impl FamilyId {
    /// Resolves a family name plus optional parameter.
    pub fn parse(name: &str, param: Option<usize>) -> Result<FamilyId> {
        let fixed = |id: FamilyId, family: &'static str| match param {
            None => Ok(id),
            Some(_) => Err(Error::FamilyParameter {
                family,
                param,
                reason: "this state takes no parameter",
            }),
        };
        match name {
            "ghz3" => fixed(FamilyId::Ghz3, "ghz3"),
            "phi4" => fixed(FamilyId::Phi4, "phi4"),
            "phi4_prime" => fixed(FamilyId::Phi4Prime, "phi4_prime"),
            "phi4_double_prime" => fixed(FamilyId::Phi4DoublePrime, "phi4_double_prime"),
            "phi5" => fixed(FamilyId::Phi5, "phi5"),
            "fig1a" => fixed(FamilyId::Fig1a, "fig1a"),
            "fig1b" => fixed(FamilyId::Fig1b, "fig1b"),
            "fig1c" => fixed(FamilyId::Fig1c, "fig1c"),
            "phi_n" => match param {
                Some(n) if n >= 4 => Ok(FamilyId::PhiN(n)),
                _ => Err(Error::FamilyParameter { family: "phi_n", param, reason: "requires n >= 4" }),
            },
            "phi_2n3" => match param {
                Some(m) if m >= 1 => Ok(FamilyId::Phi2n3(m)),
                _ => Err(Error::FamilyParameter {
                    family: "phi_2n3",
                    param,
                    reason: "requires n >= 1",
                }),
            },
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilyId::Ghz3 => "ghz3",
            FamilyId::Phi4 => "phi4",
            FamilyId::Phi4Prime => "phi4_prime",
            FamilyId::Phi4DoublePrime => "phi4_double_prime",
            FamilyId::PhiN(_) => "phi_n",
            FamilyId::Phi5 => "phi5",
            FamilyId::Phi2n3(_) => "phi_2n3",
            FamilyId::Fig1a => "fig1a",
            FamilyId::Fig1b => "fig1b",
            FamilyId::Fig1c => "fig1c",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyId::PhiN(n) | FamilyId::Phi2n3(n) => write!(f, "{}({n})", self.name()),
            _ => f.write_str(self.name()),
        }
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<FamilyId> {
        FamilyId::parse(s, None)
    }
}

/// All-|0⟩ with sign +1, followed by every `weight`-subset of `1..=n` with `sign`.
fn zero_plus_weight_class(n: usize, weight: usize, sign: i64) -> RawState {
    let mut components = vec![RawComponent { sign: 1, support: vec![] }];
    let mut subset: Vec<usize> = (1..=weight).collect();
    loop {
        components.push(RawComponent { sign, support: subset.clone() });
        // Next combination in lexicographic order.
        let Some(i) = (0..weight).rev().find(|&i| subset[i] < n - weight + i + 1) else {
            break;
        };
        subset[i] += 1;
        for j in i + 1..weight {
            subset[j] = subset[j - 1] + 1;
        }
    }
    RawState { n, components }
}

pub fn generate(id: FamilyId) -> Result<PcgStateSpec> {
    let raw = match id {
        FamilyId::Ghz3 => RawState::from_pairs(3, &[(1, &[]), (-1, &[2, 3]), (-1, &[1, 3]), (-1, &[1, 2])]),
        FamilyId::Phi4 => zero_plus_weight_class(4, 2, -1),
        FamilyId::Phi4Prime => RawState::from_pairs(
            4,
            &[(1, &[]), (-1, &[2, 4]), (-1, &[2, 3]), (-1, &[1, 4]), (-1, &[1, 3]), (-1, &[1, 2])],
        ),
        FamilyId::Phi4DoublePrime => RawState::from_pairs(
            4,
            &[(1, &[]), (1, &[2, 4]), (1, &[2, 3]), (1, &[1, 4]), (1, &[1, 3]), (-1, &[1, 2])],
        ),
        FamilyId::PhiN(n) => {
            if n < 4 {
                return Err(Error::FamilyParameter { family: "phi_n", param: Some(n), reason: "requires n >= 4" });
            }
            zero_plus_weight_class(n, 2, -1)
        }
        FamilyId::Phi5 => zero_plus_weight_class(5, 4, -1),
        FamilyId::Phi2n3(m) => {
            if m < 1 {
                return Err(Error::FamilyParameter { family: "phi_2n3", param: Some(m), reason: "requires n >= 1" });
            }
            zero_plus_weight_class(2 * m + 3, 2 * m + 2, -1)
        }
        FamilyId::Fig1a => RawState::from_pairs(3, &[(1, &[3]), (1, &[2]), (-1, &[1])]),
        FamilyId::Fig1b => RawState::from_pairs(4, &[(1, &[]), (-1, &[1, 2, 4]), (1, &[3, 4])]),
        FamilyId::Fig1c => RawState::from_pairs(3, &[(1, &[]), (1, &[2, 3]), (-1, &[1, 3]), (1, &[1, 2])]),
    };
    validate_pcg_state(&raw, ValidationMode::PaperCompatible).map_err(Error::InvalidState)
}
