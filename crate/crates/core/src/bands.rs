//! Three-band systems on the extended real line.

use crate::error::{Error, Result};

/// Closed real interval [lo, hi].
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }
    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Real Moebius map (a x + b)/(c x + d), ad - bc != 0.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Moebius {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Moebius {
    pub fn identity() -> Self {
        Moebius {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            d: 1.0,
        }
    }

    /// The unique real Moebius map with z1 -> w1, z2 -> w2, z3 -> w3.
    pub fn three_points(z: [f64; 3], w: [f64; 3]) -> Result<Self> {
        let to_std = |p: [f64; 3]| -> Moebius {
            // p1 -> 0, p2 -> 1, p3 -> infinity
            let [p1, p2, p3] = p;
            Moebius {
                a: p2 - p3,
                b: -p1 * (p2 - p3),
                c: p2 - p1,
                d: -p3 * (p2 - p1),
            }
        };
        let mz = to_std(z);
        let mw = to_std(w);
        let m = mw.inverse()?.compose(&mz);
        if m.det().abs() < 1e-300 {
            return Err(Error::Domain("degenerate three-point Moebius map".into()));
        }
        Ok(m)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, x: f64) -> f64 {
        if x.is_infinite() {
            return if self.c != 0.0 {
                self.a / self.c
            } else {
                f64::INFINITY
            };
        }
        let den = self.c * x + self.d;
        if den == 0.0 {
            f64::INFINITY
        } else {
            (self.a * x + self.b) / den
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if det.abs() < 1e-300 {
            return Err(Error::Domain("singular Moebius map".into()));
        }
        Ok(Moebius {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        })
    }

    pub fn compose(&self, other: &Moebius) -> Moebius {
        // self(other(x))
        Moebius {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }
}

/// A stopband and two passbands in the cyclic order
/// `E- < T1 < E1+ < T12 < E2+ < T2` with all six endpoints finite and
/// increasing; the gap T2 wraps through infinity.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BandSystem {
    pub eminus: Interval,
    pub e1plus: Interval,
    pub e2plus: Interval,
}

impl BandSystem {
    pub fn new(eminus: Interval, e1plus: Interval, e2plus: Interval) -> Result<Self> {
        let e = [
            eminus.lo, eminus.hi, e1plus.lo, e1plus.hi, e2plus.lo, e2plus.hi,
        ];
        if e.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("band endpoints must be finite".into()));
        }
        for w in e.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Domain(format!(
                    "band endpoints must be strictly increasing, got {e:?}"
                )));
            }
        }
        Ok(BandSystem {
            eminus,
            e1plus,
            e2plus,
        })
    }

    pub fn endpoints(&self) -> [f64; 6] {
        [
            self.eminus.lo,
            self.eminus.hi,
            self.e1plus.lo,
            self.e1plus.hi,
            self.e2plus.lo,
            self.e2plus.hi,
        ]
    }

    pub fn bands(&self) -> [Interval; 3] {
        [self.eminus, self.e1plus, self.e2plus]
    }

    /// Gap between the stopband and the first passband.
    pub fn t1(&self) -> Interval {
        Interval::new(self.eminus.hi, self.e1plus.lo)
    }

    /// Lacuna between the two passbands.
    pub fn t12(&self) -> Interval {
        Interval::new(self.e1plus.hi, self.e2plus.lo)
    }

    /// The two finite rays of the gap wrapping through infinity.
    pub fn t2_rays(&self) -> (f64, f64) {
        (self.e2plus.hi, self.eminus.lo)
    }

    /// Indicator S_E: -1 on the stopband, +1 on the passbands.
    pub fn indicator(&self, x: f64) -> Option<f64> {
        if self.eminus.contains(x) {
            Some(-1.0)
        } else if self.e1plus.contains(x) || self.e2plus.contains(x) {
            Some(1.0)
        } else {
            None
        }
    }

    /// Moebius map pinning (E- left, E- right, E1+ left) to (-1, 0, 1),
    /// and the normalized system.
    pub fn normalize(&self) -> Result<(BandSystem, Moebius)> {
        let m = Moebius::three_points(
            [self.eminus.lo, self.eminus.hi, self.e1plus.lo],
            [-1.0, 0.0, 1.0],
        )?;
        let map = |iv: Interval| Interval::new(m.apply(iv.lo), m.apply(iv.hi));
        let out = BandSystem::new(map(self.eminus), map(self.e1plus), map(self.e2plus))?;
        Ok((out, m))
    }

    pub fn transform(&self, m: &Moebius) -> Result<BandSystem> {
        let map = |iv: Interval| {
            let a = m.apply(iv.lo);
            let b = m.apply(iv.hi);
            Interval::new(a.min(b), a.max(b))
        };
        BandSystem::new(map(self.eminus), map(self.e1plus), map(self.e2plus))
    }
}
