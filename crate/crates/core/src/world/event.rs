//! Discrete interaction events emitted by the simulation.
//!
//! Every event kind carries exactly the field set the capture layer logs for
//! it; the payload map is the wire-ready `event_info` object.

use serde_json::{Map, Value};

use super::types::GridPos;

/// Whether a combat event was dealt by the actor or received by them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DamageDirection {
    Dealt,
    Received,
}

/// The twelve interaction categories the simulator can emit.
#[derive(Debug, Clone, PartialEq)]
pub enum EventKind {
    BlockBreak {
        block_type: String,
        block_location: GridPos,
    },
    BlockDamage {
        block_type: String,
        block_location: GridPos,
        item_in_hand: String,
    },
    BlockPlace {
        block_type: String,
        block_location: GridPos,
    },
    PlayerInteract {
        action: String,
        item_in_hand: String,
        block_type: String,
        block_location: GridPos,
    },
    EntityInteract {
        entity_type: String,
    },
    EntityDamage {
        direction: DamageDirection,
        entity_type: String,
        damage: f64,
    },
    ItemConsume {
        item: String,
    },
    ItemHeld {
        new_item: String,
    },
    ItemDrop {
        item_type: String,
        amount: u32,
    },
    ItemPickup {
        item_type: String,
        amount: u32,
    },
    InventoryClick {
        slot: u8,
        clicked_item: String,
    },
    Craft {
        crafted_item: String,
        amount: u32,
    },
}

/// One discrete interaction, attributed to the acting participant and the
/// tick it happened on.
#[derive(Debug, Clone, PartialEq)]
pub struct GameEvent {
    pub game_tick: u64,
    pub actor: String,
    pub kind: EventKind,
}

impl GameEvent {
    /// Logged event name, e.g. `BlockBreakEvent`.
    pub fn name(&self) -> &'static str {
        match &self.kind {
            EventKind::BlockBreak { .. } => "BlockBreakEvent",
            EventKind::BlockDamage { .. } => "BlockDamageEvent",
            EventKind::BlockPlace { .. } => "BlockPlaceEvent",
            EventKind::PlayerInteract { .. } => "PlayerInteractEvent",
            EventKind::EntityInteract { .. } => "EntityInteractEvent",
            EventKind::EntityDamage { direction: DamageDirection::Dealt, .. } => {
                "EntityDamageDealtEvent"
            }
            EventKind::EntityDamage { direction: DamageDirection::Received, .. } => {
                "EntityDamageReceivedEvent"
            }
            EventKind::ItemConsume { .. } => "ItemConsumeEvent",
            EventKind::ItemHeld { .. } => "ItemHeldEvent",
            EventKind::ItemDrop { .. } => "ItemDropEvent",
            EventKind::ItemPickup { .. } => "ItemPickupEvent",
            EventKind::InventoryClick { .. } => "InventoryClickEvent",
            EventKind::Craft { .. } => "CraftEvent",
        }
    }

    /// The `event_info` object: actor attribution, event name, then the
    /// kind-specific fields, in their documented order.
    pub fn payload(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("player".into(), Value::String(self.actor.clone()));
        m.insert("event".into(), Value::String(self.name().to_string()));
        match &self.kind {
            EventKind::BlockBreak { block_type, block_location }
            | EventKind::BlockPlace { block_type, block_location } => {
                m.insert("block_type".into(), Value::String(block_type.clone()));
                m.insert("block_location".into(), grid_pos_value(block_location));
            }
            EventKind::BlockDamage { block_type, block_location, item_in_hand } => {
                m.insert("block_type".into(), Value::String(block_type.clone()));
                m.insert("block_location".into(), grid_pos_value(block_location));
                m.insert("item_in_hand".into(), Value::String(item_in_hand.clone()));
            }
            EventKind::PlayerInteract { action, item_in_hand, block_type, block_location } => {
                m.insert("action".into(), Value::String(action.clone()));
                m.insert("item_in_hand".into(), Value::String(item_in_hand.clone()));
                m.insert("block_type".into(), Value::String(block_type.clone()));
                m.insert("block_location".into(), grid_pos_value(block_location));
            }
            EventKind::EntityInteract { entity_type } => {
                m.insert("entity_type".into(), Value::String(entity_type.clone()));
            }
            EventKind::EntityDamage { entity_type, damage, .. } => {
                m.insert("entity_type".into(), Value::String(entity_type.clone()));
                m.insert("damage".into(), json_f64(*damage));
            }
            EventKind::ItemConsume { item } => {
                m.insert("item".into(), Value::String(item.clone()));
            }
            EventKind::ItemHeld { new_item } => {
                m.insert("new_item".into(), Value::String(new_item.clone()));
            }
            EventKind::ItemDrop { item_type, amount }
            | EventKind::ItemPickup { item_type, amount } => {
                m.insert("item_type".into(), Value::String(item_type.clone()));
                m.insert("amount".into(), Value::from(*amount));
            }
            EventKind::InventoryClick { slot, clicked_item } => {
                m.insert("slot".into(), Value::from(*slot));
                m.insert("clicked_item".into(), Value::String(clicked_item.clone()));
            }
            EventKind::Craft { crafted_item, amount } => {
                m.insert("crafted_item".into(), Value::String(crafted_item.clone()));
                m.insert("amount".into(), Value::from(*amount));
            }
        }
        m
    }
}

pub(crate) fn grid_pos_value(pos: &GridPos) -> Value {
    let mut m = Map::new();
    m.insert("x".into(), Value::from(pos.x));
    m.insert("y".into(), Value::from(pos.y));
    m.insert("z".into(), Value::from(pos.z));
    Value::Object(m)
}

pub(crate) fn json_f64(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
}
