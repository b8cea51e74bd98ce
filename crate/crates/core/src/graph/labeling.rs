use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PartName {
    V1,
    V2,
    V3,
    V4,
    V5,
    X,
    Y,
    Z,
}

impl fmt::Display for PartName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Part {
    pub name: PartName,
    pub vertices: Vec<usize>,
}

/// Ordered, disjoint, covering assignment of the vertices `0..n` to named
/// roles. The order of `parts` is meaningful: it is the order used when a
/// linear ordering of the vertex set is derived from the labeling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LabelingRepr", into = "LabelingRepr")]
pub struct PartLabeling {
    n: usize,
    parts: Vec<Part>,
    #[serde(skip)]
    owner: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct LabelingRepr {
    n: usize,
    parts: Vec<Part>,
}

impl TryFrom<LabelingRepr> for PartLabeling {
    type Error = Error;
    fn try_from(r: LabelingRepr) -> Result<Self> {
        PartLabeling::new(r.n, r.parts, true)
    }
}

impl From<PartLabeling> for LabelingRepr {
    fn from(l: PartLabeling) -> Self {
        LabelingRepr { n: l.n, parts: l.parts }
    }
}

impl PartLabeling {
    /// Validates disjointness, coverage, distinct names and (unless
    /// `allow_empty`) nonempty parts. Vertex lists are stored sorted.
    pub fn new(n: usize, mut parts: Vec<Part>, allow_empty: bool) -> Result<PartLabeling> {
        let mut owner = vec![usize::MAX; n];
        for (i, p) in parts.iter_mut().enumerate() {
            if !allow_empty && p.vertices.is_empty() {
                return Err(Error::Labeling(format!("part {} is empty", p.name)));
            }
            p.vertices.sort_unstable();
            for &v in &p.vertices {
                if v >= n {
                    return Err(Error::Labeling(format!("vertex {v} in part {} is out of range (n = {n})", p.name)));
                }
                if owner[v] != usize::MAX {
                    return Err(Error::Labeling(format!("vertex {v} appears in more than one part")));
                }
                owner[v] = i;
            }
        }
        for i in 0..parts.len() {
            if parts[i + 1..].iter().any(|q| q.name == parts[i].name) {
                return Err(Error::Labeling(format!("part name {} repeated", parts[i].name)));
            }
        }
        if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::Labeling(format!("vertex {v} is not covered")));
        }
        Ok(PartLabeling { n, parts, owner })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn part(&self, name: PartName) -> Option<&Part> {
        self.parts.iter().find(|p| p.name == name)
    }

    pub fn vertices(&self, name: PartName) -> &[usize] {
        self.part(name).map(|p| p.vertices.as_slice()).unwrap_or(&[])
    }

    /// Position (in `parts()`) of the part containing `v`.
    pub fn position(&self, v: usize) -> usize {
        self.owner[v]
    }

    pub fn name_of(&self, v: usize) -> PartName {
        self.parts[self.owner[v]].name
    }

    pub fn names(&self) -> Vec<PartName> {
        self.parts.iter().map(|p| p.name).collect()
    }

    /// Same parts under new names; names missing from `map` are kept.
    pub fn renamed(&self, map: &[(PartName, PartName)]) -> Result<PartLabeling> {
        let parts = self
            .parts
            .iter()
            .map(|p| Part {
                name: map.iter().find(|(from, _)| *from == p.name).map_or(p.name, |&(_, to)| to),
                vertices: p.vertices.clone(),
            })
            .collect();
        PartLabeling::new(self.n, parts, true)
    }

    /// Restriction to the sampled vertices `s`, renumbered in ascending
    /// order of `s` (matching `Graph::induced_subgraph`). Parts may become empty.
    pub fn restrict(&self, s: &[usize]) -> Result<PartLabeling> {
        let mut sorted = s.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut parts: Vec<Part> = self
            .parts
            .iter()
            .map(|p| Part {
                name: p.name,
                vertices: vec![],
            })
            .collect();
        for (i, &v) in sorted.iter().enumerate() {
            if v >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
            parts[self.owner[v]].vertices.push(i);
        }
        PartLabeling::new(sorted.len(), parts, true)
    }
}
