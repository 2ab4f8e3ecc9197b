//! Firefighter strategies and the name-based registry.
//!
//! A strategy is asked once per round for the vertices to protect and must
//! return at most `state.remaining_budget()` of them. Strategies keep private
//! cursors, so the same strategy value is not meant to drive two games.

mod basic;
mod hex;
mod spiral;
mod square;
mod translate;
mod tri;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::engine::GameState;
use crate::error::{Error, Result};
use crate::lattice::Vertex;

pub use basic::{Greedy, Idle, Random, Scripted};
pub use hex::{HexContain, HexTwoRay};
pub use spiral::{HexSlowdown, HexSpiral, SpiralPlan};
pub use square::{canonical_start, wedge_vertex, SquareWedge};
pub use translate::{hex_schedule_for, tri_to_hex_vertex, TriToHex};
pub use tri::{TriSpiral2, TriSpiralPlan};

pub trait Strategy: Send {
    fn spec(&self) -> StrategySpec;
    fn choose(&mut self, state: &GameState) -> Result<Vec<Vertex>>;
}

/// Registry entry as it appears in configs: `{"name": ..., "params": {...}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategySpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub params: Value,
}

impl StrategySpec {
    pub fn new(name: &str, params: Value) -> StrategySpec {
        StrategySpec { name: name.to_string(), params }
    }

    pub fn named(name: &str) -> StrategySpec {
        StrategySpec::new(name, Value::Null)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StrategyInfo {
    pub name: &'static str,
    pub lattices: &'static [&'static str],
    pub params: Value,
    pub summary: &'static str,
}

pub fn catalog() -> Vec<StrategyInfo> {
    vec![
        StrategyInfo { name: "idle", lattices: &["any"], params: json!({}), summary: "never protects" },
        StrategyInfo {
            name: "greedy",
            lattices: &["any"],
            params: json!({}),
            summary: "protects free neighbors of the fire with the most free neighbors",
        },
        StrategyInfo {
            name: "random",
            lattices: &["any"],
            params: json!({"seed": "u64", "spread": "max distance from the fire (default 2)"}),
            summary: "seeded random protections near the fire",
        },
        StrategyInfo {
            name: "scripted",
            lattices: &["any"],
            params: json!({"turns": "list of vertex lists, one per round"}),
            summary: "replays a fixed protection script",
        },
        StrategyInfo {
            name: "square_wedge",
            lattices: &["finite_square", "infinite_square"],
            params: json!({}),
            summary: "two diagonal walls from a single fire, then a vertical wall to the far border",
        },
        StrategyInfo {
            name: "hex_two_ray",
            lattices: &["hexagonal"],
            params: json!({}),
            summary: "two rays at a 120 degree angle, one vertex of the sphere per turn",
        },
        StrategyInfo {
            name: "hex_contain",
            lattices: &["hexagonal"],
            params: json!({"t1": "u32", "t2": "u32", "strip_factor": "u32 (default 128)"}),
            summary: "contains a fire with one extra firefighter on turns t1 and t2",
        },
        StrategyInfo {
            name: "hex_spiral",
            lattices: &["hexagonal"],
            params: json!({"k0": "starting cone (default 0)"}),
            summary: "spiral for a fire that burns exactly a ball",
        },
        StrategyInfo {
            name: "hex_slowdown",
            lattices: &["hexagonal"],
            params: json!({"delay": "idle turns first (default 0)", "k0": "starting cone"}),
            summary: "normalizes the fire to a ball and spirals around it",
        },
        StrategyInfo {
            name: "tri_spiral2",
            lattices: &["triangular"],
            params: json!({"delay": "idle turns first (default 0)"}),
            summary: "two firefighters spiralling around the fire with doubling segments",
        },
    ]
}

fn param_u32(params: &Value, key: &str) -> Result<Option<u32>> {
    match params.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v
            .as_u64()
            .and_then(|x| u32::try_from(x).ok())
            .map(Some)
            .ok_or_else(|| Error::InvalidParams(format!("'{key}' must be a non-negative integer"))),
    }
}

/// Builds a strategy from its registry entry.
pub fn build(spec: &StrategySpec) -> Result<Box<dyn Strategy>> {
    let p = &spec.params;
    if !(p.is_null() || p.is_object()) {
        return Err(Error::InvalidParams("params must be an object".into()));
    }
    let s: Box<dyn Strategy> = match spec.name.as_str() {
        "idle" => Box::new(Idle),
        "greedy" => Box::new(Greedy),
        "random" => {
            let seed = p.get("seed").and_then(Value::as_u64).unwrap_or(0);
            let spread = param_u32(p, "spread")?.unwrap_or(2);
            Box::new(Random::new(seed, spread))
        }
        "scripted" => {
            let turns: Vec<Vec<Vertex>> = serde_json::from_value(p.get("turns").cloned().unwrap_or(json!([])))?;
            Box::new(Scripted::new(turns))
        }
        "square_wedge" => Box::new(SquareWedge::new()),
        "hex_two_ray" => Box::new(HexTwoRay::new()),
        "hex_contain" => {
            let t1 = param_u32(p, "t1")?.ok_or_else(|| Error::InvalidParams("hex_contain needs t1".into()))?;
            let t2 = param_u32(p, "t2")?.ok_or_else(|| Error::InvalidParams("hex_contain needs t2".into()))?;
            let mut hc = HexContain::new(t1, t2)?;
            if let Some(f) = param_u32(p, "strip_factor")? {
                hc.strip_factor = f.max(1);
            }
            Box::new(hc)
        }
        "hex_spiral" => Box::new(HexSpiral::from_ball(param_u32(p, "k0")?.unwrap_or(0) as usize % 6)),
        "hex_slowdown" => Box::new(HexSlowdown::new(
            param_u32(p, "delay")?.unwrap_or(0),
            param_u32(p, "k0")?.unwrap_or(0) as usize % 6,
        )),
        "tri_spiral2" => Box::new(TriSpiral2::new(param_u32(p, "delay")?.unwrap_or(0))),
        other => return Err(Error::UnknownStrategy(other.to_string())),
    };
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_round_trip() {
        for info in catalog() {
            let params = match info.name {
                "hex_contain" => json!({"t1": 3, "t2": 7}),
                _ => Value::Null,
            };
            let s = build(&StrategySpec::new(info.name, params)).unwrap();
            assert_eq!(s.spec().name, info.name);
        }
        assert!(matches!(build(&StrategySpec::named("nope")), Err(Error::UnknownStrategy(_))));
        assert!(matches!(build(&StrategySpec::new("hex_contain", json!({"t1": 3}))), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn spec_json_shape() {
        let s: StrategySpec = serde_json::from_str(r#"{"name":"hex_contain","params":{"t1":3,"t2":7}}"#).unwrap();
        let b = build(&s).unwrap();
        assert_eq!(b.spec(), s);
    }
}
