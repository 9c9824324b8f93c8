//! Domain files: `{"polygons": [[[x, y], ...], ...]}`, one CCW ring per
//! component.

use serde::{Deserialize, Serialize};

use super::{Point2, PolygonDomain};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct DomainFile {
    polygons: Vec<Vec<[f64; 2]>>,
}

impl PolygonDomain {
    /// Parses and validates a domain file. Clockwise rings are accepted and
    /// reoriented like any other input.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: DomainFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidDomain(format!("domain JSON: {e}")))?;
        let rings = file
            .polygons
            .into_iter()
            .map(|ring| ring.into_iter().map(|[x, y]| Point2::new(x, y)).collect())
            .collect();
        Self::from_rings(rings)
    }

    pub fn to_json(&self) -> String {
        let file = DomainFile {
            polygons: self
                .components()
                .iter()
                .map(|c| c.vertices().iter().map(|v| [v.x, v.y]).collect())
                .collect(),
        };
        serde_json::to_string(&file).expect("finite coordinates serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn round_trip() {
        let d = fixtures::two_discs(1.0, 4.0, 16).unwrap();
        let back = PolygonDomain::from_json(&d.to_json()).unwrap();
        assert_eq!(back.components(), d.components());
    }

    #[test]
    fn clockwise_and_errors() {
        let d = PolygonDomain::from_json(r#"{"polygons": [[[0,0],[0,1],[1,1],[1,0]]]}"#).unwrap();
        assert!((d.area() - 1.0).abs() < 1e-15);
        assert!(PolygonDomain::from_json(r#"{"polygons": []}"#).is_err());
        assert!(PolygonDomain::from_json(r#"{"polygons": [[[0,0],[1,0]]]}"#).is_err());
        assert!(PolygonDomain::from_json(r#"{"rings": []}"#).is_err());
        assert!(PolygonDomain::from_json(r#"{"polygons": [[[0,0],[1,0],[0,1]]], "x": 1}"#).is_ok());
    }
}
