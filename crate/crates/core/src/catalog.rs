//! Sun–Jupiter reference orbits used throughout the tests and the CLI.
//!
//! Each entry carries the initial state, the quoted period and Jacobi constant,
//! the quoted value of the enclosed-region integral and the return window used
//! to detect the period.

use crate::dynamics::{MassParameter, RotatingState};

/// Sun–Jupiter mass ratio.
pub const SUN_JUPITER_MU: f64 = 0.000953875;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceOrbit {
    pub id: u8,
    pub initial: RotatingState,
    pub period: f64,
    pub jacobi: f64,
    /// Quoted integral of the Laplacian of `ln f` over the enclosed (or lifted) region.
    pub area_integral: f64,
    pub window: (f64, f64),
    pub description: &'static str,
}

impl ReferenceOrbit {
    pub fn mu(&self) -> MassParameter {
        MassParameter::new(SUN_JUPITER_MU).expect("valid constant")
    }
}

pub const REFERENCE_ORBITS: [ReferenceOrbit; 4] = [
    ReferenceOrbit {
        id: 1,
        initial: RotatingState::new(
            0.487957127501505,
            0.84849821703225,
            -0.036041155996589,
            0.02072666577125,
            0.0,
        ),
        period: 6.3036094149426,
        jacobi: 2.9986240063314,
        area_integral: 6.32403,
        window: (5.0, 8.0),
        description: "clockwise loop near L4, encloses no primary",
    },
    ReferenceOrbit {
        id: 2,
        initial: RotatingState::new(1.01159848498974, 0.0, 0.0, 0.26384566980412, 0.0),
        period: 0.30139544664015,
        jacobi: 3.0790227765880,
        area_integral: -3.74433,
        window: (0.1, 0.5),
        description: "counterclockwise loop around the second primary",
    },
    ReferenceOrbit {
        id: 3,
        initial: RotatingState::new(
            1.285278846123773,
            3.401751107285172,
            3.892316782809678,
            -1.47062858674288,
            0.0,
        ),
        period: 5.4912835927302,
        jacobi: -3.5390576031917,
        area_integral: 10.9823,
        window: (4.5, 6.5),
        description: "clockwise loop around both primaries",
    },
    ReferenceOrbit {
        id: 4,
        initial: RotatingState::new(
            0.3964805517652452,
            -0.07419606744562268,
            0.2120527494053103,
            1.133143493746107,
            0.0,
        ),
        period: 6.2849221865548,
        jacobi: 3.7789562336238,
        area_integral: -21.9944,
        window: (5.0, 8.0),
        description: "counterclockwise orbit winding three times around the first primary",
    },
];

pub fn reference_orbit(id: u8) -> Option<&'static ReferenceOrbit> {
    REFERENCE_ORBITS.iter().find(|o| o.id == id)
}
