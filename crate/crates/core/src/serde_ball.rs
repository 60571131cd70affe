//! Lossless text form for balls: exact decimal midpoint and radius plus the
//! working precision.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::numerics::{Ball, Dyadic};

#[derive(Serialize, Deserialize)]
struct BallRepr {
    mid: String,
    rad: String,
    prec: u32,
}

impl Serialize for Ball {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        BallRepr {
            mid: self.mid().to_decimal_string(),
            rad: self.rad().to_decimal_string(),
            prec: self.prec(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Ball {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = BallRepr::deserialize(deserializer)?;
        let mid = Dyadic::parse_decimal(&repr.mid)
            .ok_or_else(|| D::Error::custom(format!("midpoint {:?} is not dyadic", repr.mid)))?;
        let rad = Dyadic::parse_decimal(&repr.rad)
            .ok_or_else(|| D::Error::custom(format!("radius {:?} is not dyadic", repr.rad)))?;
        Ball::new(mid, rad, repr.prec).map_err(D::Error::custom)
    }
}
