//! Reference scenes: a large disc with small discs attached, and variants.
//!
//! Geometry: big disc radius 1 at the origin, small discs radius 0.3,
//! 0.05 gaps between neighbours, wavenumber 2 pi.

use std::f64::consts::PI;

use super::{Disc, Scene};

pub const BIG_RADIUS: f64 = 1.0;
pub const SMALL_RADIUS: f64 = 0.3;
pub const GAP: f64 = 0.05;
pub const WAVENUMBER: f64 = 2.0 * PI;

/// Distance from the origin to the centre of the first attached small disc.
pub const FIRST_RING: f64 = BIG_RADIUS + GAP + SMALL_RADIUS;

fn build(discs: Vec<Disc>) -> Scene {
    Scene::new(discs, WAVENUMBER).expect("reference scenes are valid")
}

fn big() -> Disc {
    Disc::new(0.0, 0.0, BIG_RADIUS)
}

/// The big disc alone, fully rotation invariant.
pub fn centered_disc() -> Scene {
    build(vec![big()])
}

/// One small disc on top (+y) of the big disc.
pub fn one_small_on_big() -> Scene {
    stacked_on_big(1)
}

/// Three small discs stacked in a column on top (+y) of the big disc.
pub fn three_stacked_on_big() -> Scene {
    stacked_on_big(3)
}

/// `count` small discs stacked along +y on top of the big disc.
pub fn stacked_on_big(count: usize) -> Scene {
    let mut discs = vec![big()];
    for i in 0..count {
        let y = FIRST_RING + i as f64 * (2.0 * SMALL_RADIUS + GAP);
        discs.push(Disc::new(0.0, y, SMALL_RADIUS));
    }
    build(discs)
}

/// Three small discs at 120 degree spacing around the big disc (three-fold
/// rotation symmetry).
pub fn c3_ring() -> Scene {
    let mut discs = vec![big()];
    for i in 0..3 {
        let angle = PI / 2.0 + 2.0 * PI * i as f64 / 3.0;
        discs.push(Disc::new(FIRST_RING * angle.cos(), FIRST_RING * angle.sin(), SMALL_RADIUS));
    }
    build(discs)
}

/// A single small disc away from the origin.
pub fn off_center_disc() -> Scene {
    build(vec![Disc::new(0.7, -0.4, 0.5)])
}

/// Every bundled scene with a short name.
pub fn all() -> Vec<(&'static str, Scene)> {
    vec![
        ("centered_disc", centered_disc()),
        ("one_small_on_big", one_small_on_big()),
        ("three_stacked_on_big", three_stacked_on_big()),
        ("c3_ring", c3_ring()),
        ("off_center_disc", off_center_disc()),
    ]
}
