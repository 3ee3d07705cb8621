//! State polling: snapshot selected fields of one participant into a
//! wire-ready payload map.

use serde_json::{Map, Value};
use std::collections::BTreeSet;

use crate::world::{grid_pos_value, json_f64, Avatar, BlockHit, ItemStack, Vec3, World};

use super::fields::{FieldSelector, SelectorParams};

/// Snapshot the selected fields for `participant` from a committed world.
/// Payload keys appear in the canonical selector order with the documented
/// names and nesting. Returns `None` when the participant is absent from
/// the snapshot (departed between schedule and fire); the caller counts the
/// skip.
pub fn poll_state(
    world: &World,
    participant: &str,
    fields: &BTreeSet<FieldSelector>,
    params: &SelectorParams,
) -> Option<Map<String, Value>> {
    let avatar = world.avatar(participant)?;
    let mut payload = Map::new();
    for selector in FieldSelector::ALL {
        if !fields.contains(&selector) {
            continue;
        }
        let value = field_value(world, avatar, selector, params);
        payload.insert(selector.json_key().to_string(), value);
    }
    Some(payload)
}

fn field_value(
    world: &World,
    avatar: &Avatar,
    selector: FieldSelector,
    params: &SelectorParams,
) -> Value {
    match selector {
        FieldSelector::Health => json_f64(avatar.health),
        FieldSelector::Hunger => json_f64(avatar.hunger),
        FieldSelector::Location => vec3_value(avatar.position),
        FieldSelector::View => {
            let mut m = Map::new();
            m.insert("pitch".into(), json_f64(avatar.view.pitch()));
            m.insert("yaw".into(), json_f64(avatar.view.yaw()));
            Value::Object(m)
        }
        FieldSelector::TargetBlock => block_hit_value(world.ray_trace_block(
            avatar.position,
            avatar.view,
            params.target_block_distance,
        )),
        FieldSelector::NearbyEntities => Value::Array(
            world
                .nearby_entities(avatar.position, params.nearby_entities_radius)
                .into_iter()
                .map(|(id, ty, pos)| {
                    let mut m = Map::new();
                    m.insert("entity_id".into(), Value::from(id));
                    m.insert("entity_type".into(), Value::String(ty));
                    m.insert("position".into(), vec3_value(pos));
                    Value::Object(m)
                })
                .collect(),
        ),
        FieldSelector::NearbyBlocks => Value::Array(
            world
                .nearby_blocks(avatar.position, params.nearby_blocks_radius)
                .into_iter()
                .map(|(pos, material)| {
                    let mut m = Map::new();
                    m.insert("location".into(), grid_pos_value(&pos));
                    m.insert("material".into(), Value::String(material));
                    Value::Object(m)
                })
                .collect(),
        ),
        FieldSelector::Biome => Value::String(world.biome_at(avatar.position).to_string()),
        FieldSelector::Hotbar => {
            Value::Array(avatar.hotbar.iter().map(stack_value).collect())
        }
        FieldSelector::Inventory => {
            Value::Array(avatar.inventory.iter().map(stack_value).collect())
        }
        FieldSelector::Equipment => {
            let mut m = Map::new();
            m.insert("helmet".into(), stack_value(&avatar.equipment.helmet));
            m.insert("chestplate".into(), stack_value(&avatar.equipment.chestplate));
            m.insert("leggings".into(), stack_value(&avatar.equipment.leggings));
            m.insert("boots".into(), stack_value(&avatar.equipment.boots));
            m.insert("main_hand".into(), stack_value(&avatar.main_hand().cloned()));
            m.insert("off_hand".into(), stack_value(&avatar.equipment.off_hand));
            Value::Object(m)
        }
        FieldSelector::RayTraceBlock => block_hit_value(world.ray_trace_block(
            avatar.position,
            avatar.view,
            params.ray_trace_distance,
        )),
        FieldSelector::RayTraceEntities => Value::Array(
            world
                .ray_trace_entities(avatar.position, avatar.view, params.ray_trace_distance)
                .into_iter()
                .map(|hit| {
                    let mut m = Map::new();
                    m.insert("entity_id".into(), Value::from(hit.entity_id));
                    m.insert("entity_type".into(), Value::String(hit.entity_type));
                    m.insert("hit_distance".into(), json_f64(hit.hit_distance));
                    Value::Object(m)
                })
                .collect(),
        ),
    }
}

fn vec3_value(v: Vec3) -> Value {
    let mut m = Map::new();
    m.insert("x".into(), json_f64(v.x));
    m.insert("y".into(), json_f64(v.y));
    m.insert("z".into(), json_f64(v.z));
    Value::Object(m)
}

/// A missing line-of-sight target serializes as null (rather than being
/// omitted) so high-frequency records keep a stable shape.
fn block_hit_value(hit: Option<BlockHit>) -> Value {
    match hit {
        None => Value::Null,
        Some(hit) => {
            let mut m = Map::new();
            m.insert("hit_location".into(), vec3_value(hit.hit_location));
            m.insert("block_type".into(), Value::String(hit.block_type));
            Value::Object(m)
        }
    }
}

fn stack_value(stack: &Option<ItemStack>) -> Value {
    match stack {
        None => Value::Null,
        Some(s) => {
            let mut m = Map::new();
            m.insert("item".into(), Value::String(s.item.clone()));
            m.insert("count".into(), Value::from(s.count));
            Value::Object(m)
        }
    }
}
