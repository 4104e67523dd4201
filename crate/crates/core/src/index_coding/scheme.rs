//! Uncoded sends plus clique XORs, and a decoder that checks them.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::gf2::{BitRow, DenseBasis};
use crate::nodeset::NodeSet;
use crate::IndexCodingError;

use super::SideInfoInstance;

/// Bits `0..length` of class `class`, sent as they are.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UncodedSend {
    pub class: usize,
    pub length: u64,
}

/// One member vector of a clique send: bits `0..length` of `class`, which
/// `client` demands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueMember {
    pub client: usize,
    pub class: usize,
    pub length: u64,
}

/// Symbol `j` is the XOR over members with `length > j` of their bit `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodedSend {
    pub clique: NodeSet,
    pub members: Vec<CliqueMember>,
    pub length: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransmissionScheme {
    pub uncoded: Vec<UncodedSend>,
    pub coded: Vec<CodedSend>,
}

impl TransmissionScheme {
    pub fn total_load(&self) -> u64 {
        self.uncoded.iter().map(|s| s.length).sum::<u64>() + self.coded.iter().map(|s| s.length).sum::<u64>()
    }

    /// Scheme description with class references resolved to `(P, Q)`.
    pub fn to_json(&self, instance: &SideInfoInstance) -> serde_json::Value {
        let class = |i: usize| {
            let c = &instance.classes()[i];
            json!({ "p": c.demanders.to_vec(), "q": c.side_info.to_vec() })
        };
        json!({
            "load": self.total_load(),
            "uncoded": self.uncoded.iter().map(|s| json!({
                "class": class(s.class),
                "length": s.length,
            })).collect::<Vec<_>>(),
            "cliques": self.coded.iter().map(|s| json!({
                "clique": s.clique.to_vec(),
                "length": s.length,
                "members": s.members.iter().map(|m| json!({
                    "client": m.client,
                    "class": class(m.class),
                    "length": m.length,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn require_unicast(instance: &SideInfoInstance) -> Result<(), IndexCodingError> {
    match instance.classes().iter().position(|c| c.demanders.len() != 1) {
        Some(i) => Err(IndexCodingError::NotUnicast(i)),
        None => Ok(()),
    }
}

/// Members of a clique with unequal counts are zero-padded to the longest.
pub fn clique_cover_scheme(instance: &SideInfoInstance) -> Result<TransmissionScheme, IndexCodingError> {
    require_unicast(instance)?;
    let mut scheme = TransmissionScheme::default();
    let mut cliques: BTreeMap<(usize, u64), Vec<CliqueMember>> = BTreeMap::new();
    for (i, c) in instance.classes().iter().enumerate() {
        let client = c.demanders.min().expect("unicast");
        if c.side_info.is_empty() {
            scheme.uncoded.push(UncodedSend {
                class: i,
                length: c.count,
            });
        } else {
            let clique = c.side_info.with(client);
            cliques.entry((clique.len(), clique.mask())).or_default().push(CliqueMember {
                client,
                class: i,
                length: c.count,
            });
        }
    }
    for ((_, mask), mut members) in cliques {
        members.sort_by_key(|m| m.client);
        let length = members.iter().map(|m| m.length).max().unwrap_or(0);
        scheme.coded.push(CodedSend {
            clique: NodeSet::from_mask(mask),
            members,
            length,
        });
    }
    Ok(scheme)
}

/// Each send symbol as a set of bit coordinates.
fn symbols(instance: &SideInfoInstance, scheme: &TransmissionScheme, offsets: &[usize], len: usize) -> Result<Vec<BitRow>, IndexCodingError> {
    let check = |class: usize, length: u64| -> Result<(), IndexCodingError> {
        let c = instance
            .classes()
            .get(class)
            .ok_or_else(|| IndexCodingError::MalformedScheme(format!("class {class} does not exist")))?;
        if length > c.count {
            return Err(IndexCodingError::MalformedScheme(format!(
                "class {class} has {} bits, send uses {length}",
                c.count
            )));
        }
        Ok(())
    };
    let mut rows = Vec::new();
    for s in &scheme.uncoded {
        check(s.class, s.length)?;
        for j in 0..s.length as usize {
            rows.push(BitRow::unit(len, offsets[s.class] + j));
        }
    }
    for s in &scheme.coded {
        for m in &s.members {
            check(m.class, m.length)?;
            if m.length > s.length {
                return Err(IndexCodingError::MalformedScheme(format!(
                    "member of class {} is longer than its send",
                    m.class
                )));
            }
        }
        for j in 0..s.length {
            let mut row = BitRow::zeros(len);
            for m in s.members.iter().filter(|m| m.length > j) {
                row.xor_assign(&BitRow::unit(len, offsets[m.class] + j as usize));
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Simulates every client decoding from its side information and all sends.
///
/// The deterministic part checks that each demanded coordinate lies in the
/// span of the client's equations; each trial then draws random bit values,
/// builds the payloads and compares the decoded values with the truth.
pub fn verify_scheme(
    instance: &SideInfoInstance,
    scheme: &TransmissionScheme,
    trials: usize,
    seed: u64,
) -> Result<bool, IndexCodingError> {
    let mut offsets = Vec::with_capacity(instance.classes().len());
    let mut len = 0usize;
    for c in instance.classes() {
        offsets.push(len);
        len += c.count as usize;
    }
    let rows = symbols(instance, scheme, &offsets, len)?;

    let coordinates = |pick: &dyn Fn(&super::SideInfoClass) -> bool| -> Vec<usize> {
        instance
            .classes()
            .iter()
            .zip(&offsets)
            .filter(|(c, _)| pick(c))
            .flat_map(|(c, &o)| o..o + c.count as usize)
            .collect()
    };
    let views: Vec<(Vec<usize>, Vec<usize>)> = instance
        .client_set()
        .iter()
        .map(|k| {
            (
                coordinates(&|c| c.side_info.contains(k)),
                coordinates(&|c| c.demanders.contains(k)),
            )
        })
        .collect();

    let decoder = |side: &[usize], values: &BitRow| -> DenseBasis {
        let mut basis = DenseBasis::new(len);
        for &b in side {
            basis.insert(BitRow::unit(len, b), values.get(b));
        }
        for row in &rows {
            basis.insert(row.clone(), row.dot(values));
        }
        basis
    };

    let zeros = BitRow::zeros(len);
    for (side, wanted) in &views {
        let basis = decoder(side, &zeros);
        if wanted.iter().any(|&b| basis.solve_unit(len, b).is_none()) {
            return Ok(false);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let mut values = BitRow::zeros(len);
        for b in 0..len {
            if rng.random::<bool>() {
                values.set(b);
            }
        }
        for (side, wanted) in &views {
            let basis = decoder(side, &values);
            if wanted.iter().any(|&b| basis.solve_unit(len, b) != Some(values.get(b))) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
