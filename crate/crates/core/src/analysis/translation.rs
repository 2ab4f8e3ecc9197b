//! End-to-end check of triangular strategies replayed on the hexagonal
//! lattice.

use serde::Serialize;

use crate::engine::{BudgetSchedule, GameTrace};
use crate::error::{Error, Result};
use crate::hexcoord;
use crate::lattice::{Lattice, LatticeKind, Vertex};
use crate::strategies::{build, Strategy, StrategySpec, TriToHex};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TranslationAudit {
    pub turns_tri: u32,
    pub burnt_tri: u64,
    pub turns_hex: u32,
    pub burnt_hex: u64,
    /// Burnt vertices of the hexagonal game outside the embedded sublattice.
    pub burnt_hex_b: u64,
    /// Firefighters used by the triangular strategy.
    pub firefighters: u64,
    /// Whether `burnt_hex_b <= burnt_tri`. This is stronger than the
    /// injection argument gives and fails for small instances.
    pub b_within_tri_burnt: bool,
}

/// Checks `turns_hex <= 2 turns_tri + 1`, `burnt_hex <= 2 burnt_tri + f`,
/// `burnt_hex_b <= burnt_tri + f`, and that odd hexagonal rounds ignite only B
/// vertices while even rounds ignite only A vertices.
pub fn translation_audit(tri: &GameTrace, hex: &GameTrace, f: u64) -> Result<TranslationAudit> {
    if tri.lattice.kind != LatticeKind::Triangular || hex.lattice.kind != LatticeKind::Hexagonal {
        return Err(Error::Precondition("audit needs a triangular and a hexagonal trace".into()));
    }
    if !tri.outcome.contained {
        return Err(Error::Precondition("the triangular strategy does not contain the fire".into()));
    }
    let mut bad = Vec::new();
    for r in &hex.rounds {
        for &v in &r.ignited {
            let is_a = hexcoord::from_brick(v).is_a();
            if is_a == (r.turn % 2 == 1) {
                bad.push(format!("round {} ignites {} vertex {v}", r.turn, if is_a { "A" } else { "B" }));
            }
        }
    }
    let burnt_hex_b = hex
        .fires
        .iter()
        .chain(hex.rounds.iter().flat_map(|r| r.ignited.iter()))
        .filter(|&&v| !hexcoord::from_brick(v).is_a())
        .count() as u64;
    let a = TranslationAudit {
        turns_tri: tri.outcome.turns,
        burnt_tri: tri.outcome.burnt,
        turns_hex: hex.outcome.turns,
        burnt_hex: hex.outcome.burnt,
        burnt_hex_b,
        firefighters: f,
        b_within_tri_burnt: burnt_hex_b <= tri.outcome.burnt,
    };
    if !hex.outcome.contained {
        bad.push("the hexagonal game is not contained".into());
    }
    if a.turns_hex > 2 * a.turns_tri + 1 {
        bad.push(format!("hexagonal game took {} turns, more than 2*{}+1", a.turns_hex, a.turns_tri));
    }
    if a.burnt_hex > 2 * a.burnt_tri + f {
        bad.push(format!("{} hexagonal vertices burnt, more than 2*{}+{f}", a.burnt_hex, a.burnt_tri));
    }
    if a.burnt_hex_b > a.burnt_tri + f {
        bad.push(format!("{} B vertices burnt, more than {}+{f}", a.burnt_hex_b, a.burnt_tri));
    }
    if bad.is_empty() {
        Ok(a)
    } else {
        Err(Error::Precondition(bad.join("; ")))
    }
}

/// Runs a triangular strategy, then its translation, and audits the pair.
pub fn translate_and_audit(
    tri_lattice: Lattice,
    fires: &[Vertex],
    schedule: &BudgetSchedule,
    spec: &StrategySpec,
    horizon: u32,
) -> Result<(GameTrace, GameTrace, TranslationAudit)> {
    let st = crate::engine::GameState::new(tri_lattice, fires, schedule.clone())?;
    let mut inner = build(spec)?;
    let (_, tri) = st.run(inner.as_mut(), horizon)?;
    if !tri.outcome.contained {
        return Err(Error::Precondition("the triangular strategy does not contain the fire".into()));
    }
    let f: u64 = tri.rounds.iter().map(|r| r.protected.len() as u64).sum();
    let hex_st = TriToHex::hex_game(&tri_lattice, fires, schedule)?;
    let mut tr: Box<dyn Strategy> = Box::new(TriToHex::new(build(spec)?, tri_lattice, schedule.clone())?);
    let (_, hex) = hex_st.run(tr.as_mut(), 2 * horizon + 2)?;
    let audit = translation_audit(&tri, &hex, f)?;
    Ok((tri, hex, audit))
}
