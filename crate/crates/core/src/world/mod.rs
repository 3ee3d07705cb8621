//! Deterministic tick-based voxel world with scripted agents.
//!
//! The world is the data source for capture pipelines: it produces every
//! pollable state variable (position, view, vitals, inventory, line-of-sight
//! targets, surroundings) and every discrete interaction event. Advancing a
//! tick applies scripted actions in agent-name lexicographic order, then
//! integrates motion; all mutation happens inside [`World::advance_tick`],
//! so a committed world can be read freely between ticks.

mod clock;
mod event;
mod raycast;
mod script;
mod types;

pub use clock::{
    default_epoch, format_utc_ms, parse_utc_ms, TimeParseError, WorldClock, TICK_MS, TICK_RATE,
};
pub use event::{DamageDirection, EventKind, GameEvent};
pub use raycast::{first_solid_voxel, ray_unit_cube_distance, view_to_direction};
pub use script::{Action, ScenarioScript, ScriptError};
pub use types::{
    normalize_yaw, valid_material, Avatar, EntityRec, Equipment, EquipmentSlot, GridPos,
    ItemStack, Vec3, ViewAngles, ViewError, MAX_HEALTH, MAX_HUNGER,
};

use std::collections::{BTreeMap, HashMap};

use chrono::{DateTime, Utc};

pub(crate) use event::{grid_pos_value, json_f64};

/// Sparse voxel storage. Absent coordinates are air; each (x, z) column may
/// carry a biome identifier.
#[derive(Debug, Clone, Default)]
pub struct BlockGrid {
    blocks: HashMap<(i64, i64, i64), String>,
    biomes: HashMap<(i64, i64), String>,
}

/// Biome reported for columns that were never assigned one.
pub const DEFAULT_BIOME: &str = "PLAINS";

/// A solid block hit by a line-of-sight query.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockHit {
    /// Point where the ray enters the voxel's face (the ray origin when it
    /// starts inside the voxel).
    pub hit_location: Vec3,
    pub block_type: String,
    pub voxel: GridPos,
    pub distance: f64,
}

/// An entity intersected by a line-of-sight query.
#[derive(Debug, Clone, PartialEq)]
pub struct EntityHit {
    pub entity_id: u64,
    pub entity_type: String,
    pub hit_distance: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WorldError {
    #[error("invalid material \"{0}\": must be non-empty uppercase")]
    BadMaterial(String),
    #[error("invalid biome \"{0}\": must be non-empty uppercase")]
    BadBiome(String),
    #[error("entity id {0} already exists")]
    DuplicateEntity(u64),
    #[error("avatar \"{0}\" already exists")]
    DuplicateAvatar(String),
    #[error("entity health {0} must be finite and non-negative")]
    BadHealth(f64),
}

/// Errors raised while applying a script during a tick.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("tick {tick}: script references unknown agent \"{agent}\"")]
    UnknownAgent { agent: String, tick: u64 },
    #[error("tick {tick}: agent \"{agent}\": {reason}")]
    InvalidAction { agent: String, tick: u64, reason: String },
}

/// The simulated world: clock, voxel grid, entities, and scripted avatars.
#[derive(Debug, Clone)]
pub struct World {
    clock: WorldClock,
    grid: BlockGrid,
    entities: BTreeMap<u64, EntityRec>,
    avatars: BTreeMap<String, Avatar>,
}

impl World {
    pub fn new(epoch: DateTime<Utc>) -> World {
        World {
            clock: WorldClock::new(epoch),
            grid: BlockGrid::default(),
            entities: BTreeMap::new(),
            avatars: BTreeMap::new(),
        }
    }

    pub fn clock(&self) -> &WorldClock {
        &self.clock
    }

    pub fn tick(&self) -> u64 {
        self.clock.tick()
    }

    // ---- fixtures -------------------------------------------------------

    /// Place a block. `"AIR"` clears the coordinate.
    pub fn set_block(&mut self, at: GridPos, material: &str) -> Result<(), WorldError> {
        if material == "AIR" {
            self.grid.blocks.remove(&(at.x, at.y, at.z));
            return Ok(());
        }
        if !valid_material(material) {
            return Err(WorldError::BadMaterial(material.to_string()));
        }
        self.grid.blocks.insert((at.x, at.y, at.z), material.to_string());
        Ok(())
    }

    pub fn block_at(&self, at: GridPos) -> Option<&str> {
        self.grid.blocks.get(&(at.x, at.y, at.z)).map(|s| s.as_str())
    }

    pub fn set_biome(&mut self, x: i64, z: i64, biome: &str) -> Result<(), WorldError> {
        if !valid_material(biome) {
            return Err(WorldError::BadBiome(biome.to_string()));
        }
        self.grid.biomes.insert((x, z), biome.to_string());
        Ok(())
    }

    pub fn spawn_entity(
        &mut self,
        entity_id: u64,
        entity_type: &str,
        position: Vec3,
        health: f64,
    ) -> Result<(), WorldError> {
        if self.entities.contains_key(&entity_id) {
            return Err(WorldError::DuplicateEntity(entity_id));
        }
        if !health.is_finite() || health < 0.0 {
            return Err(WorldError::BadHealth(health));
        }
        self.entities.insert(
            entity_id,
            EntityRec { entity_id, entity_type: entity_type.to_string(), position, health },
        );
        Ok(())
    }

    pub fn spawn_avatar(&mut self, avatar: Avatar) -> Result<(), WorldError> {
        if self.avatars.contains_key(&avatar.name) {
            return Err(WorldError::DuplicateAvatar(avatar.name));
        }
        self.avatars.insert(avatar.name.clone(), avatar);
        Ok(())
    }

    pub fn avatar(&self, name: &str) -> Option<&Avatar> {
        self.avatars.get(name)
    }

    pub fn avatar_mut(&mut self, name: &str) -> Option<&mut Avatar> {
        self.avatars.get_mut(name)
    }

    pub fn avatars(&self) -> impl Iterator<Item = &Avatar> {
        self.avatars.values()
    }

    pub fn entity(&self, id: u64) -> Option<&EntityRec> {
        self.entities.get(&id)
    }

    pub fn entities(&self) -> impl Iterator<Item = &EntityRec> {
        self.entities.values()
    }

    // ---- simulation -----------------------------------------------------

    /// Advance exactly one tick: apply every scripted action due on the new
    /// tick (agents in lexicographic order, authoring order within an
    /// agent), then integrate motion and clamp vitals. Every agent-caused
    /// mutation emits the corresponding event stamped with the new tick.
    pub fn advance_tick(&mut self, script: &ScenarioScript) -> Result<Vec<GameEvent>, SimError> {
        self.clock.advance();
        let tick = self.clock.tick();
        let mut events = Vec::new();
        let due: Vec<(String, Action)> = script
            .actions_at(tick)
            .map(|(a, act)| (a.to_string(), act.clone()))
            .collect();
        for (agent, action) in due {
            self.apply_action(tick, &agent, &action, &mut events)?;
        }
        for avatar in self.avatars.values_mut() {
            avatar.integrate();
        }
        Ok(events)
    }

    fn apply_action(
        &mut self,
        tick: u64,
        agent: &str,
        action: &Action,
        events: &mut Vec<GameEvent>,
    ) -> Result<(), SimError> {
        if !self.avatars.contains_key(agent) {
            return Err(SimError::UnknownAgent { agent: agent.to_string(), tick });
        }
        let invalid = |reason: String| SimError::InvalidAction {
            agent: agent.to_string(),
            tick,
            reason,
        };
        let mut emit = |kind: EventKind| {
            events.push(GameEvent { game_tick: tick, actor: agent.to_string(), kind });
        };

        match action {
            Action::Walk { target, speed } => {
                if !(*speed > 0.0) || !speed.is_finite() || !target.is_finite() {
                    return Err(invalid(format!("walk speed {speed} must be positive")));
                }
                self.avatars.get_mut(agent).unwrap().waypoint = Some((*target, *speed));
            }
            Action::Turn { pitch, yaw } => {
                let view = ViewAngles::new(*pitch, *yaw).map_err(|e| invalid(e.to_string()))?;
                self.avatars.get_mut(agent).unwrap().view = view;
            }
            Action::BreakBlock { at } => {
                let material = self
                    .grid
                    .blocks
                    .remove(&(at.x, at.y, at.z))
                    .ok_or_else(|| invalid(format!("no block to break at {at}")))?;
                emit(EventKind::BlockBreak { block_type: material, block_location: *at });
            }
            Action::MineBlock { at } => {
                let material = self
                    .block_at(*at)
                    .ok_or_else(|| invalid(format!("no block to mine at {at}")))?
                    .to_string();
                let hand = self.avatars[agent].held_item_name();
                emit(EventKind::BlockDamage {
                    block_type: material,
                    block_location: *at,
                    item_in_hand: hand,
                });
            }
            Action::PlaceBlock { at, material } => {
                if self.block_at(*at).is_some() {
                    return Err(invalid(format!("block placement at occupied {at}")));
                }
                if !valid_material(material) {
                    return Err(invalid(format!("invalid material \"{material}\"")));
                }
                self.grid.blocks.insert((at.x, at.y, at.z), material.clone());
                emit(EventKind::BlockPlace {
                    block_type: material.clone(),
                    block_location: *at,
                });
            }
            Action::Interact { at, action } => {
                let block_type =
                    self.block_at(*at).unwrap_or("AIR").to_string();
                let hand = self.avatars[agent].held_item_name();
                emit(EventKind::PlayerInteract {
                    action: action.clone(),
                    item_in_hand: hand,
                    block_type,
                    block_location: *at,
                });
            }
            Action::TouchEntity { entity } => {
                let rec = self
                    .entities
                    .get(entity)
                    .ok_or_else(|| invalid(format!("unknown entity {entity}")))?;
                emit(EventKind::EntityInteract { entity_type: rec.entity_type.clone() });
            }
            Action::AttackEntity { entity, damage } => {
                if !(*damage >= 0.0) || !damage.is_finite() {
                    return Err(invalid(format!("damage {damage} must be non-negative")));
                }
                let rec = self
                    .entities
                    .get_mut(entity)
                    .ok_or_else(|| invalid(format!("unknown entity {entity}")))?;
                rec.health = (rec.health - damage).max(0.0);
                emit(EventKind::EntityDamage {
                    direction: DamageDirection::Dealt,
                    entity_type: rec.entity_type.clone(),
                    damage: *damage,
                });
            }
            Action::ReceiveDamage { damage, source } => {
                if !(*damage >= 0.0) || !damage.is_finite() {
                    return Err(invalid(format!("damage {damage} must be non-negative")));
                }
                let avatar = self.avatars.get_mut(agent).unwrap();
                avatar.health = (avatar.health - damage).clamp(0.0, MAX_HEALTH);
                emit(EventKind::EntityDamage {
                    direction: DamageDirection::Received,
                    entity_type: source.clone(),
                    damage: *damage,
                });
            }
            Action::ConsumeItem { item } => {
                let avatar = self.avatars.get_mut(agent).unwrap();
                remove_items(avatar, item, 1);
                avatar.hunger = (avatar.hunger + 4.0).clamp(0.0, MAX_HUNGER);
                emit(EventKind::ItemConsume { item: item.clone() });
            }
            Action::HoldSlot { slot } => {
                if *slot as usize >= types::HOTBAR_SLOTS {
                    return Err(invalid(format!("held slot {slot} outside 0..=8")));
                }
                let avatar = self.avatars.get_mut(agent).unwrap();
                avatar.held_slot = *slot;
                let new_item = avatar.held_item_name();
                emit(EventKind::ItemHeld { new_item });
            }
            Action::DropItem { item_type, amount } => {
                let avatar = self.avatars.get_mut(agent).unwrap();
                remove_items(avatar, item_type, *amount);
                emit(EventKind::ItemDrop { item_type: item_type.clone(), amount: *amount });
            }
            Action::PickupItem { item_type, amount } => {
                let avatar = self.avatars.get_mut(agent).unwrap();
                insert_items(avatar, item_type, *amount);
                emit(EventKind::ItemPickup { item_type: item_type.clone(), amount: *amount });
            }
            Action::ClickSlot { slot } => {
                let total = types::HOTBAR_SLOTS + types::INVENTORY_SLOTS;
                if *slot as usize >= total {
                    return Err(invalid(format!("inventory slot {slot} outside 0..={}", total - 1)));
                }
                let avatar = &self.avatars[agent];
                let idx = *slot as usize;
                let clicked = if idx < types::HOTBAR_SLOTS {
                    avatar.hotbar[idx].as_ref()
                } else {
                    avatar.inventory[idx - types::HOTBAR_SLOTS].as_ref()
                };
                let clicked_item =
                    clicked.map(|s| s.item.clone()).unwrap_or_else(|| "AIR".to_string());
                emit(EventKind::InventoryClick { slot: *slot, clicked_item });
            }
            Action::CraftItem { item, amount } => {
                if !valid_material(item) {
                    return Err(invalid(format!("invalid item \"{item}\"")));
                }
                let avatar = self.avatars.get_mut(agent).unwrap();
                insert_items(avatar, item, *amount);
                emit(EventKind::Craft { crafted_item: item.clone(), amount: *amount });
            }
            Action::Leave => {
                self.avatars.remove(agent);
            }
        }
        Ok(())
    }

    // ---- queries --------------------------------------------------------

    /// First solid block along the view ray, within `max_distance`.
    pub fn ray_trace_block(
        &self,
        origin: Vec3,
        view: ViewAngles,
        max_distance: f64,
    ) -> Option<BlockHit> {
        debug_assert!(max_distance > 0.0);
        let direction = view_to_direction(view);
        let (voxel, distance) =
            first_solid_voxel(origin, direction, max_distance, |v| self.block_at(v).is_some())?;
        Some(BlockHit {
            hit_location: origin + direction.scale(distance),
            block_type: self.block_at(voxel).expect("hit voxel is solid").to_string(),
            voxel,
            distance,
        })
    }

    /// Entities whose unit-cube bounding box intersects the view ray within
    /// `max_distance`, nearest first (ties broken by entity id).
    pub fn ray_trace_entities(
        &self,
        origin: Vec3,
        view: ViewAngles,
        max_distance: f64,
    ) -> Vec<EntityHit> {
        debug_assert!(max_distance > 0.0);
        let direction = view_to_direction(view);
        let mut hits: Vec<EntityHit> = self
            .entities
            .values()
            .filter_map(|e| {
                ray_unit_cube_distance(origin, direction, e.position)
                    .filter(|d| *d <= max_distance)
                    .map(|d| EntityHit {
                        entity_id: e.entity_id,
                        entity_type: e.entity_type.clone(),
                        hit_distance: d,
                    })
            })
            .collect();
        hits.sort_by(|a, b| {
            a.hit_distance
                .partial_cmp(&b.hit_distance)
                .unwrap()
                .then(a.entity_id.cmp(&b.entity_id))
        });
        hits
    }

    /// All solid voxels within Chebyshev distance `radius` of the voxel
    /// containing `center`, in (x, y, z) lexicographic order.
    pub fn nearby_blocks(&self, center: Vec3, radius: i64) -> Vec<(GridPos, String)> {
        debug_assert!(radius >= 0);
        let home = GridPos::containing(center);
        let mut out: Vec<(GridPos, String)> = self
            .grid
            .blocks
            .iter()
            .filter(|((x, y, z), _)| GridPos::new(*x, *y, *z).chebyshev(&home) <= radius)
            .map(|((x, y, z), m)| (GridPos::new(*x, *y, *z), m.clone()))
            .collect();
        out.sort_by_key(|(p, _)| (p.x, p.y, p.z));
        out
    }

    /// Entities within Euclidean distance `radius` of `center` (closed
    /// ball: an entity at exactly `radius` is included), ordered by id.
    pub fn nearby_entities(&self, center: Vec3, radius: f64) -> Vec<(u64, String, Vec3)> {
        debug_assert!(radius >= 0.0);
        self.entities
            .values()
            .filter(|e| e.position.distance(&center) <= radius)
            .map(|e| (e.entity_id, e.entity_type.clone(), e.position))
            .collect()
    }

    /// Biome of the voxel column containing `position`.
    pub fn biome_at(&self, position: Vec3) -> &str {
        let x = position.x.floor() as i64;
        let z = position.z.floor() as i64;
        self.grid.biomes.get(&(x, z)).map(|s| s.as_str()).unwrap_or(DEFAULT_BIOME)
    }
}

fn remove_items(avatar: &mut Avatar, item: &str, mut amount: u32) {
    for slot in avatar.hotbar.iter_mut().chain(avatar.inventory.iter_mut()) {
        if amount == 0 {
            break;
        }
        if let Some(stack) = slot {
            if stack.item == item {
                let take = stack.count.min(amount);
                stack.count -= take;
                amount -= take;
                if stack.count == 0 {
                    *slot = None;
                }
            }
        }
    }
}

fn insert_items(avatar: &mut Avatar, item: &str, amount: u32) {
    if amount == 0 {
        return;
    }
    // merge into an existing stack first, else the first free slot
    for slot in avatar.hotbar.iter_mut().chain(avatar.inventory.iter_mut()) {
        if let Some(stack) = slot {
            if stack.item == item {
                stack.count += amount;
                return;
            }
        }
    }
    for slot in avatar.hotbar.iter_mut().chain(avatar.inventory.iter_mut()) {
        if slot.is_none() {
            *slot = Some(ItemStack::new(item, amount));
            return;
        }
    }
    // nowhere to put it: the pickup still happened, the items are lost
}
