//! Line-of-sight queries: exact voxel traversal for block targeting and
//! slab-test intersection for entity targeting.

use super::types::{GridPos, Vec3, ViewAngles};

/// Unit direction vector for a view. Convention: pitch 0 / yaw 0 looks down
/// +z; positive pitch looks down; yaw -90 looks down +x.
pub fn view_to_direction(view: ViewAngles) -> Vec3 {
    let pitch = view.pitch().to_radians();
    let yaw = view.yaw().to_radians();
    Vec3::new(
        -yaw.sin() * pitch.cos(),
        -pitch.sin(),
        yaw.cos() * pitch.cos(),
    )
}

/// First solid voxel along a ray, found by stepping through every voxel the
/// ray passes (grid traversal; no voxel can be skipped regardless of angle).
///
/// Returns the voxel and the distance at which the ray enters it. A ray
/// starting inside a solid voxel reports that voxel at distance 0.
pub fn first_solid_voxel(
    origin: Vec3,
    direction: Vec3,
    max_distance: f64,
    is_solid: impl Fn(GridPos) -> bool,
) -> Option<(GridPos, f64)> {
    debug_assert!((direction.length() - 1.0).abs() < 1e-6, "direction must be unit length");
    let mut voxel = GridPos::containing(origin);
    if is_solid(voxel) {
        return Some((voxel, 0.0));
    }

    let axes = [
        (origin.x, direction.x),
        (origin.y, direction.y),
        (origin.z, direction.z),
    ];
    let mut step = [0i64; 3];
    let mut t_max = [f64::INFINITY; 3];
    let mut t_delta = [f64::INFINITY; 3];
    for (i, (p, d)) in axes.iter().enumerate() {
        if *d > 0.0 {
            step[i] = 1;
            t_max[i] = (p.floor() + 1.0 - p) / d;
            t_delta[i] = 1.0 / d;
        } else if *d < 0.0 {
            step[i] = -1;
            t_max[i] = (p - p.floor()) / -d;
            t_delta[i] = -1.0 / d;
        }
    }

    loop {
        let axis = if t_max[0] < t_max[1] {
            if t_max[0] < t_max[2] {
                0
            } else {
                2
            }
        } else if t_max[1] < t_max[2] {
            1
        } else {
            2
        };
        let t = t_max[axis];
        if t > max_distance {
            return None;
        }
        match axis {
            0 => voxel.x += step[0],
            1 => voxel.y += step[1],
            _ => voxel.z += step[2],
        }
        t_max[axis] += t_delta[axis];
        if is_solid(voxel) {
            return Some((voxel, t));
        }
    }
}

/// Ray / axis-aligned-box intersection (slab method). The box is the unit
/// cube centered on `center`. Returns the entry distance, 0 when the ray
/// starts inside.
pub fn ray_unit_cube_distance(origin: Vec3, direction: Vec3, center: Vec3) -> Option<f64> {
    let mut t_near = f64::NEG_INFINITY;
    let mut t_far = f64::INFINITY;
    let axes = [
        (origin.x, direction.x, center.x),
        (origin.y, direction.y, center.y),
        (origin.z, direction.z, center.z),
    ];
    for (p, d, c) in axes {
        let lo = c - 0.5;
        let hi = c + 0.5;
        if d == 0.0 {
            if p < lo || p > hi {
                return None;
            }
        } else {
            let mut t1 = (lo - p) / d;
            let mut t2 = (hi - p) / d;
            if t1 > t2 {
                std::mem::swap(&mut t1, &mut t2);
            }
            t_near = t_near.max(t1);
            t_far = t_far.min(t2);
            if t_near > t_far {
                return None;
            }
        }
    }
    if t_far < 0.0 {
        return None;
    }
    Some(t_near.max(0.0))
}
