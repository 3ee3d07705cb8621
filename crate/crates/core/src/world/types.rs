//! Core spatial and actor types for the simulated world.

use std::fmt;

/// Maximum avatar health, matching the usual survival-game scale.
pub const MAX_HEALTH: f64 = 20.0;
/// Maximum avatar hunger level.
pub const MAX_HUNGER: f64 = 20.0;
/// Number of quick-access hotbar slots.
pub const HOTBAR_SLOTS: usize = 9;
/// Number of main inventory slots (excluding the hotbar).
pub const INVENTORY_SLOTS: usize = 36;

/// A point or displacement in world space, in block units.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Vec3 {
        debug_assert!(x.is_finite() && y.is_finite() && z.is_finite());
        Vec3 { x, y, z }
    }

    pub fn length(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn scale(&self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn distance(&self, other: &Vec3) -> f64 {
        (*other - *self).length()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl std::ops::Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl std::ops::Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

/// Integer voxel coordinate. The voxel `(x, y, z)` spans the half-open cube
/// `[x, x+1) x [y, y+1) x [z, z+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPos {
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

impl GridPos {
    pub fn new(x: i64, y: i64, z: i64) -> GridPos {
        GridPos { x, y, z }
    }

    /// Voxel containing a world point (floor convention: the boundary plane
    /// `x = 1.0` belongs to column 1).
    pub fn containing(p: Vec3) -> GridPos {
        GridPos {
            x: p.x.floor() as i64,
            y: p.y.floor() as i64,
            z: p.z.floor() as i64,
        }
    }

    /// Chebyshev (chessboard) distance to another voxel.
    pub fn chebyshev(&self, other: &GridPos) -> i64 {
        (self.x - other.x)
            .abs()
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }
}

impl fmt::Display for GridPos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Look direction: pitch in degrees within [-90, +90] (positive looks down),
/// yaw in degrees normalized to [-180, +180).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViewAngles {
    pitch: f64,
    yaw: f64,
}

impl ViewAngles {
    pub fn new(pitch: f64, yaw: f64) -> Result<ViewAngles, ViewError> {
        if !pitch.is_finite() || !yaw.is_finite() {
            return Err(ViewError::NotFinite);
        }
        if !(-90.0..=90.0).contains(&pitch) {
            return Err(ViewError::PitchRange(pitch));
        }
        Ok(ViewAngles { pitch, yaw: normalize_yaw(yaw) })
    }

    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    pub fn yaw(&self) -> f64 {
        self.yaw
    }
}

impl Default for ViewAngles {
    fn default() -> Self {
        ViewAngles { pitch: 0.0, yaw: 0.0 }
    }
}

/// Wrap an arbitrary finite yaw into [-180, +180).
pub fn normalize_yaw(yaw: f64) -> f64 {
    let y = (yaw + 180.0).rem_euclid(360.0) - 180.0;
    // rem_euclid can land exactly on 360.0 for inputs like -1e-14
    if y >= 180.0 {
        y - 360.0
    } else {
        y
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ViewError {
    #[error("view angles must be finite")]
    NotFinite,
    #[error("pitch {0} outside [-90, +90]")]
    PitchRange(f64),
}

/// A stack of identical items occupying one slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ItemStack {
    pub item: String,
    pub count: u32,
}

impl ItemStack {
    pub fn new(item: impl Into<String>, count: u32) -> ItemStack {
        ItemStack { item: item.into(), count }
    }
}

/// Worn armor plus the off-hand slot. The main hand is derived from the
/// avatar's held hotbar slot rather than stored here.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Equipment {
    pub helmet: Option<ItemStack>,
    pub chestplate: Option<ItemStack>,
    pub leggings: Option<ItemStack>,
    pub boots: Option<ItemStack>,
    pub off_hand: Option<ItemStack>,
}

/// Armor or hand slot names accepted by scenario fixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquipmentSlot {
    Helmet,
    Chestplate,
    Leggings,
    Boots,
    OffHand,
}

impl std::str::FromStr for EquipmentSlot {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "helmet" => Ok(EquipmentSlot::Helmet),
            "chestplate" => Ok(EquipmentSlot::Chestplate),
            "leggings" => Ok(EquipmentSlot::Leggings),
            "boots" => Ok(EquipmentSlot::Boots),
            "off_hand" => Ok(EquipmentSlot::OffHand),
            other => Err(format!("unknown equipment slot \"{other}\"")),
        }
    }
}

/// A non-player entity (mob, item frame, etc.) tracked by the world.
#[derive(Debug, Clone, PartialEq)]
pub struct EntityRec {
    pub entity_id: u64,
    pub entity_type: String,
    pub position: Vec3,
    pub health: f64,
}

/// A scripted participant: position, orientation, vitals, and carried items.
#[derive(Debug, Clone, PartialEq)]
pub struct Avatar {
    pub name: String,
    pub position: Vec3,
    pub view: ViewAngles,
    pub velocity: Vec3,
    pub health: f64,
    pub hunger: f64,
    pub hotbar: [Option<ItemStack>; HOTBAR_SLOTS],
    pub inventory: [Option<ItemStack>; INVENTORY_SLOTS],
    pub equipment: Equipment,
    pub held_slot: u8,
    pub(crate) waypoint: Option<(Vec3, f64)>,
}

impl Avatar {
    pub fn new(name: impl Into<String>, position: Vec3) -> Avatar {
        Avatar {
            name: name.into(),
            position,
            view: ViewAngles::default(),
            velocity: Vec3::ZERO,
            health: MAX_HEALTH,
            hunger: MAX_HUNGER,
            hotbar: std::array::from_fn(|_| None),
            inventory: std::array::from_fn(|_| None),
            equipment: Equipment::default(),
            held_slot: 0,
            waypoint: None,
        }
    }

    /// Item name in the active hotbar slot; "AIR" when the hand is empty.
    pub fn held_item_name(&self) -> String {
        self.hotbar[self.held_slot as usize]
            .as_ref()
            .map(|s| s.item.clone())
            .unwrap_or_else(|| "AIR".to_string())
    }

    /// Stack in the active hotbar slot, used as the main-hand equipment view.
    pub fn main_hand(&self) -> Option<&ItemStack> {
        self.hotbar[self.held_slot as usize].as_ref()
    }

    /// One tick of motion: waypoint steering decides this tick's
    /// displacement (recorded as velocity, blocks per tick), position
    /// integrates it, vitals are clamped back into range.
    pub(crate) fn integrate(&mut self) {
        let step = if let Some((target, speed)) = self.waypoint {
            let delta = target - self.position;
            let dist = delta.length();
            if dist <= speed || dist < 1e-12 {
                self.waypoint = None;
                delta
            } else {
                delta.scale(speed / dist)
            }
        } else {
            Vec3::ZERO
        };
        self.velocity = step;
        self.position = self.position + step;
        self.health = self.health.clamp(0.0, MAX_HEALTH);
        self.hunger = self.hunger.clamp(0.0, MAX_HUNGER);
    }
}

/// Validate a block/item material identifier: non-empty, uppercase
/// alphanumerics and underscores.
pub fn valid_material(material: &str) -> bool {
    !material.is_empty()
        && material
            .chars()
            .all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_')
}
