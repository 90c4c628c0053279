//! JSON factor files.
//!
//! ```json
//! {"p":17,"method":"quartic1mod8","root":3,"edges":[[12,13],[7,9],...,[0,"c"]]}
//! ```
//!
//! Field vertices are integers and the centre is the string `"c"`. Edges are
//! written in canonical endpoint order and sorted by length, infinite last.
//! Only `p` and `edges` are read back.

use std::fmt;

use paley_core::construction::{Edge, Length, Method, OneFactor, Vertex};
use paley_core::numtheory::PrimeContext;
use paley_core::verification::edge_length;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JsonVertex(pub Vertex);

impl Serialize for JsonVertex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Vertex::Field(v) => s.serialize_u64(v),
            Vertex::Centre => s.serialize_str("c"),
        }
    }
}

impl<'de> Deserialize<'de> for JsonVertex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = JsonVertex;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a non-negative integer or \"c\"")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonVertex, E> {
                Ok(JsonVertex(Vertex::Field(v)))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonVertex, E> {
                u64::try_from(v)
                    .map(|v| JsonVertex(Vertex::Field(v)))
                    .map_err(|_| E::custom(format!("negative vertex {v}")))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonVertex, E> {
                match v {
                    "c" => Ok(JsonVertex(Vertex::Centre)),
                    other => Err(E::custom(format!("unknown vertex {other:?}"))),
                }
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorFile {
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default)]
    pub root: Option<u64>,
    pub edges: Vec<[JsonVertex; 2]>,
}

/// Edges sorted by length (infinite last), then canonically.
pub fn edges_by_length(f: &OneFactor, ctx: &PrimeContext) -> Vec<Edge> {
    let mut edges = f.edges().to_vec();
    edges.sort_by_key(|e| (edge_length(e, ctx), *e));
    edges
}

fn json_edges(f: &OneFactor, ctx: &PrimeContext) -> Vec<[JsonVertex; 2]> {
    edges_by_length(f, ctx)
        .into_iter()
        .map(|e| {
            let (x, y) = e.endpoints();
            [JsonVertex(x), JsonVertex(y)]
        })
        .collect()
}

impl FactorFile {
    pub fn from_factor(f: &OneFactor, ctx: &PrimeContext, method: Method) -> Self {
        Self {
            p: ctx.p(),
            method: Some(method.name().to_string()),
            root: method.root(),
            edges: json_edges(f, ctx),
        }
    }

    /// Rebuild the factor; rejects degenerate edges and out-of-field vertices.
    pub fn to_factor(&self) -> paley_core::Result<OneFactor> {
        let edges = self
            .edges
            .iter()
            .map(|[x, y]| Edge::new(x.0, y.0))
            .collect::<Result<Vec<_>, _>>()?;
        OneFactor::new(self.p, edges)
    }
}

/// `[[v, w], ...]` in length order, for embedding in other documents.
pub fn edge_list(f: &OneFactor, ctx: &PrimeContext) -> Vec<[JsonVertex; 2]> {
    json_edges(f, ctx)
}

pub fn length_label(l: Length) -> String {
    l.to_string()
}
