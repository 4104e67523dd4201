//! Instance interchange document.
//!
//! ```json
//! {
//!   "k": 3,
//!   "centralized": false,
//!   "classes": [
//!     { "p": [1], "q": [2], "count": 2 }
//!   ]
//! }
//! ```
//!
//! Node lists are written in ascending order and classes in canonical
//! `(P mask, Q mask)` order. Integral counts are JSON integers; fractional
//! masses (exact-fraction scenario outputs) are strings such as `"3/8"`.
//! A missing `centralized` field reads as `false`.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::instance::{BitClass, ExchangeInstance};
use crate::nodeset::NodeSet;
use crate::rational::{self, Rational};
use crate::InstanceError;

#[derive(Serialize, Deserialize)]
struct InstanceDoc {
    k: usize,
    #[serde(default)]
    centralized: bool,
    classes: Vec<ClassDoc>,
}

#[derive(Serialize, Deserialize)]
struct ClassDoc {
    p: Vec<usize>,
    q: Vec<usize>,
    count: CountDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CountDoc {
    Int(u64),
    Text(String),
}

fn node_list(nodes: &[usize]) -> Result<NodeSet, InstanceError> {
    NodeSet::from_nodes(nodes.iter().copied())
        .ok_or_else(|| InstanceError::Format(format!("node list {nodes:?} has an index above 63")))
}

/// Parses a document. The result is not validated; call
/// [`ExchangeInstance::validate`] before relying on invariants.
pub fn from_json(text: &str) -> Result<ExchangeInstance, InstanceError> {
    let doc: InstanceDoc = serde_json::from_str(text)?;
    let mut classes = Vec::with_capacity(doc.classes.len());
    for c in doc.classes {
        let count = match c.count {
            CountDoc::Int(n) => rational::uint(n),
            CountDoc::Text(s) => rational::parse(&s)
                .ok_or_else(|| InstanceError::Format(format!("bad count {s:?}")))?,
        };
        classes.push(BitClass::with_mass(node_list(&c.p)?, node_list(&c.q)?, count));
    }
    Ok(ExchangeInstance::new(doc.k, doc.centralized, classes))
}

fn count_doc(count: &Rational) -> CountDoc {
    match count.is_integer().then(|| count.to_integer().to_u64()).flatten() {
        Some(n) => CountDoc::Int(n),
        None => CountDoc::Text(rational::format_exact(count)),
    }
}

/// Serializes the canonical form of `instance`, newline-terminated.
pub fn to_json(instance: &ExchangeInstance) -> String {
    let canonical = instance.clone().canonicalize();
    let doc = InstanceDoc {
        k: canonical.node_count,
        centralized: canonical.centralized,
        classes: canonical
            .classes
            .iter()
            .map(|c| ClassDoc {
                p: c.demanders.to_vec(),
                q: c.owners.to_vec(),
                count: count_doc(&c.count),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("instance documents always serialize");
    out.push('\n');
    out
}

pub fn read_file(path: &std::path::Path) -> Result<ExchangeInstance, InstanceError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InstanceError::Format(format!("{}: {e}", path.display())))?;
    from_json(&text)
}
