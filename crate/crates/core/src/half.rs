use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// A half-integer stored exactly as its doubled value.
///
/// Gromov products of points at integer distances live in (1/2)Z; keeping
/// them as doubled integers makes comparisons and maxima exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Half(i64);

impl Half {
    pub const ZERO: Half = Half(0);

    pub fn from_doubled(doubled: i64) -> Half {
        Half(doubled)
    }

    pub fn from_int(n: i64) -> Half {
        Half(2 * n)
    }

    pub fn doubled(self) -> i64 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Smallest integer >= self.
    pub fn ceil(self) -> i64 {
        if self.0 >= 0 {
            (self.0 + 1) / 2
        } else {
            self.0 / 2
        }
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }
}

impl Add for Half {
    type Output = Half;
    fn add(self, rhs: Half) -> Half {
        Half(self.0 + rhs.0)
    }
}

impl Sub for Half {
    type Output = Half;
    fn sub(self, rhs: Half) -> Half {
        Half(self.0 - rhs.0)
    }
}

impl Neg for Half {
    type Output = Half;
    fn neg(self) -> Half {
        Half(-self.0)
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_ceil() {
        let a = Half::from_int(2);
        let b = Half::from_doubled(3); // 3/2
        assert_eq!((a + b).doubled(), 7);
        assert_eq!((a - b).doubled(), 1);
        assert_eq!(b.ceil(), 2);
        assert_eq!(a.ceil(), 2);
        assert_eq!(Half::from_doubled(-3).ceil(), -1);
        assert_eq!(b.to_string(), "3/2");
        assert_eq!(a.to_string(), "2");
        assert!(!b.is_integer());
    }
}
