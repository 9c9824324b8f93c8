//! Shared inputs for the criterion benches.

use sacenter_core::fixtures;
use sacenter_core::{Point2, PolygonDomain};

/// Named domains of increasing vertex count, with an interior probe point.
pub fn domains() -> Vec<(&'static str, PolygonDomain, Point2)> {
    vec![
        ("square", fixtures::unit_square(), Point2::new(0.3, 0.6)),
        ("lshape", fixtures::l_shape(), Point2::new(0.5, 0.5)),
        ("disc128", fixtures::disc(1.0, 128).unwrap(), Point2::new(0.2, -0.1)),
        ("two_discs256", fixtures::two_discs(1.0, 4.0, 256).unwrap(), Point2::new(2.1, 0.3)),
    ]
}
