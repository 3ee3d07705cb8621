//! Pollable state fields and their query parameters.

use serde::{Deserialize, Serialize};

/// One pollable participant state variable. Each selector maps to exactly
/// one key in the serialized sample payload; payloads always emit selected
/// fields in the order declared here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldSelector {
    Health,
    Hunger,
    Location,
    View,
    TargetBlock,
    NearbyEntities,
    NearbyBlocks,
    Biome,
    Hotbar,
    Inventory,
    Equipment,
    RayTraceBlock,
    RayTraceEntities,
}

impl FieldSelector {
    pub const ALL: [FieldSelector; 13] = [
        FieldSelector::Health,
        FieldSelector::Hunger,
        FieldSelector::Location,
        FieldSelector::View,
        FieldSelector::TargetBlock,
        FieldSelector::NearbyEntities,
        FieldSelector::NearbyBlocks,
        FieldSelector::Biome,
        FieldSelector::Hotbar,
        FieldSelector::Inventory,
        FieldSelector::Equipment,
        FieldSelector::RayTraceBlock,
        FieldSelector::RayTraceEntities,
    ];

    /// Key under which the field appears in sample payloads.
    pub fn json_key(&self) -> &'static str {
        match self {
            FieldSelector::Health => "health",
            FieldSelector::Hunger => "hunger",
            FieldSelector::Location => "location",
            FieldSelector::View => "view",
            FieldSelector::TargetBlock => "target_block",
            FieldSelector::NearbyEntities => "nearby_entities",
            FieldSelector::NearbyBlocks => "nearby_blocks",
            FieldSelector::Biome => "biome",
            FieldSelector::Hotbar => "hotbar",
            FieldSelector::Inventory => "inventory",
            FieldSelector::Equipment => "equipment",
            FieldSelector::RayTraceBlock => "ray_tracing_block",
            FieldSelector::RayTraceEntities => "ray_tracing_entities",
        }
    }
}

/// Radii and distances for the surroundings and line-of-sight selectors.
/// The defaults are configuration, not constants of the format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SelectorParams {
    /// Chebyshev radius for `nearby_blocks`.
    pub nearby_blocks_radius: i64,
    /// Euclidean radius for `nearby_entities`.
    pub nearby_entities_radius: f64,
    /// Reach for `ray_tracing_block` / `ray_tracing_entities`.
    pub ray_trace_distance: f64,
    /// Shorter reach for `target_block` (the block under the cursor).
    pub target_block_distance: f64,
}

impl Default for SelectorParams {
    fn default() -> Self {
        SelectorParams {
            nearby_blocks_radius: 4,
            nearby_entities_radius: 8.0,
            ray_trace_distance: 64.0,
            target_block_distance: 5.0,
        }
    }
}
