//! Deterministic per-agent action schedules. A script is the stand-in for
//! live participants: every run of the same script produces the same world
//! trajectory and the same event stream.

use std::collections::BTreeMap;

use super::types::{GridPos, Vec3};

/// One scripted agent action. Ticks are scheduled at authoring time; the
/// world applies all actions due on a tick in agent-name lexicographic
/// order, preserving authoring order within one agent.
#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    /// Move toward a waypoint at `speed` blocks per tick until reached.
    Walk { target: Vec3, speed: f64 },
    /// Snap the view to the given angles.
    Turn { pitch: f64, yaw: f64 },
    BreakBlock { at: GridPos },
    /// Begin mining (damages the block without removing it).
    MineBlock { at: GridPos },
    PlaceBlock { at: GridPos, material: String },
    /// Generic world interaction, e.g. `RIGHT_CLICK_BLOCK`.
    Interact { at: GridPos, action: String },
    TouchEntity { entity: u64 },
    AttackEntity { entity: u64, damage: f64 },
    /// Incoming damage from the named source type.
    ReceiveDamage { damage: f64, source: String },
    ConsumeItem { item: String },
    /// Switch the active hotbar slot (0..=8).
    HoldSlot { slot: u8 },
    DropItem { item_type: String, amount: u32 },
    PickupItem { item_type: String, amount: u32 },
    /// Click a combined inventory slot (0..=8 hotbar, 9..=44 inventory).
    ClickSlot { slot: u8 },
    CraftItem { item: String, amount: u32 },
    /// Remove the agent from the world (disconnect).
    Leave,
}

/// Ordered (tick, action) schedules keyed by agent name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScenarioScript {
    by_agent: BTreeMap<String, Vec<(u64, Action)>>,
}

impl ScenarioScript {
    pub fn new() -> ScenarioScript {
        ScenarioScript::default()
    }

    /// Append an action to an agent's schedule. Ticks must be non-decreasing
    /// per agent and at least 1 (tick 0 is the initial committed state and
    /// never executes actions).
    pub fn schedule(
        &mut self,
        agent: impl Into<String>,
        tick: u64,
        action: Action,
    ) -> Result<(), ScriptError> {
        let agent = agent.into();
        if tick == 0 {
            return Err(ScriptError::TickZero { agent });
        }
        let list = self.by_agent.entry(agent.clone()).or_default();
        if let Some((last, _)) = list.last() {
            if tick < *last {
                return Err(ScriptError::TickOrder { agent, tick, previous: *last });
            }
        }
        list.push((tick, action));
        Ok(())
    }

    /// All actions due at `tick`, agents in lexicographic order, authoring
    /// order within an agent.
    pub fn actions_at(&self, tick: u64) -> impl Iterator<Item = (&str, &Action)> {
        self.by_agent.iter().flat_map(move |(agent, list)| {
            list.iter()
                .filter(move |(t, _)| *t == tick)
                .map(move |(_, a)| (agent.as_str(), a))
        })
    }

    pub fn agents(&self) -> impl Iterator<Item = &str> {
        self.by_agent.keys().map(|s| s.as_str())
    }

    pub fn is_empty(&self) -> bool {
        self.by_agent.values().all(|v| v.is_empty())
    }

    /// Highest scheduled tick, or 0 for an empty script.
    pub fn last_tick(&self) -> u64 {
        self.by_agent
            .values()
            .filter_map(|v| v.last().map(|(t, _)| *t))
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScriptError {
    #[error("agent \"{agent}\": action at tick {tick} scheduled before tick {previous}")]
    TickOrder { agent: String, tick: u64, previous: u64 },
    #[error("agent \"{agent}\": actions cannot be scheduled at tick 0")]
    TickZero { agent: String },
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn actions_fire_in_agent_order_then_script_order() {
        let mut s = ScenarioScript::new();
        s.schedule("Bob", 3, Action::HoldSlot { slot: 1 }).unwrap();
        s.schedule("Alice", 3, Action::HoldSlot { slot: 2 }).unwrap();
        s.schedule("Alice", 3, Action::HoldSlot { slot: 3 }).unwrap();
        let seq: Vec<(&str, u8)> = s
            .actions_at(3)
            .map(|(a, act)| match act {
                Action::HoldSlot { slot } => (a, *slot),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(seq, vec![("Alice", 2), ("Alice", 3), ("Bob", 1)]);
    }

    #[test]
    fn out_of_order_ticks_rejected() {
        let mut s = ScenarioScript::new();
        s.schedule("Alice", 5, Action::Leave).unwrap();
        let err = s.schedule("Alice", 4, Action::Leave).unwrap_err();
        assert!(matches!(err, ScriptError::TickOrder { tick: 4, previous: 5, .. }));
    }

    #[test]
    fn tick_zero_rejected() {
        let mut s = ScenarioScript::new();
        assert!(matches!(
            s.schedule("Alice", 0, Action::Leave),
            Err(ScriptError::TickZero { .. })
        ));
    }
}
