use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::tolerance;
use crate::{Result, WalkError, C64};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Amplitudes of the coin in the `(H, V)` basis.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct CoinState {
    pub h: C64,
    pub v: C64,
}

impl CoinState {
    pub const fn new(h: C64, v: C64) -> Self {
        Self { h, v }
    }

    pub const fn zero() -> Self {
        Self { h: ZERO, v: ZERO }
    }

    pub const fn horizontal() -> Self {
        Self::new(ONE, ZERO)
    }

    pub const fn vertical() -> Self {
        Self::new(ZERO, ONE)
    }

    /// `|D> = (|H> + |V>)/sqrt(2)`
    pub const fn diagonal() -> Self {
        Self::new(C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0))
    }

    /// `|A> = (|H> - |V>)/sqrt(2)`
    pub const fn antidiagonal() -> Self {
        Self::new(C64::new(FRAC_1_SQRT_2, 0.0), C64::new(-FRAC_1_SQRT_2, 0.0))
    }

    /// Left-circular polarization `|L> = (|H> + i|V>)/sqrt(2)`. Started from
    /// this coin, the Hadamard walk is mirror symmetric about its origin.
    pub const fn left_circular() -> Self {
        Self::new(C64::new(FRAC_1_SQRT_2, 0.0), C64::new(0.0, FRAC_1_SQRT_2))
    }

    /// `|R> = (|H> - i|V>)/sqrt(2)`
    pub const fn right_circular() -> Self {
        Self::new(C64::new(FRAC_1_SQRT_2, 0.0), C64::new(0.0, -FRAC_1_SQRT_2))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.h.norm_sqr() + self.v.norm_sqr()
    }

    pub fn is_zero(&self) -> bool {
        self.h == ZERO && self.v == ZERO
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(self.h * k, self.v * k)
    }

    /// `<self|other>`
    pub fn inner(&self, other: &CoinState) -> C64 {
        self.h.conj() * other.h + self.v.conj() * other.v
    }

    /// Returns the state scaled to unit norm, rejecting the zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if !n.is_finite() {
            return Err(WalkError::NonFinite("coin state"));
        }
        if n == 0.0 {
            return Err(WalkError::InvalidInput(
                "coin state is the zero vector".into(),
            ));
        }
        Ok(self.scale(1.0 / n.sqrt()))
    }
}

/// A 2x2 unitary acting on the coin space, stored row-major in the `(H, V)`
/// basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoinOperator {
    m: [[C64; 2]; 2],
}

impl CoinOperator {
    /// Wraps `m`, rejecting matrices that are not unitary to within
    /// [`tolerance::UNITARY`].
    pub fn new(m: [[C64; 2]; 2]) -> Result<Self> {
        if m.iter().flatten().any(|z| !z.is_finite()) {
            return Err(WalkError::NonFinite("coin operator"));
        }
        let deviation = unitarity_deviation(&m);
        if deviation > tolerance::UNITARY {
            return Err(WalkError::NotUnitary { deviation });
        }
        Ok(Self { m })
    }

    pub fn identity() -> Self {
        Self {
            m: [[ONE, ZERO], [ZERO, ONE]],
        }
    }

    /// The unbiased coin `(1/sqrt 2) [[1, 1], [1, -1]]`: `|H> -> |D>`, `|V> -> |A>`.
    pub fn hadamard() -> Self {
        let s = C64::new(FRAC_1_SQRT_2, 0.0);
        Self {
            m: [[s, s], [s, -s]],
        }
    }

    pub fn matrix(&self) -> [[C64; 2]; 2] {
        self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.m[row][col]
    }

    pub fn apply(&self, s: CoinState) -> CoinState {
        CoinState::new(
            self.m[0][0] * s.h + self.m[0][1] * s.v,
            self.m[1][0] * s.h + self.m[1][1] * s.v,
        )
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Self {
            m: [
                [m[0][0].conj(), m[1][0].conj()],
                [m[0][1].conj(), m[1][1].conj()],
            ],
        }
    }

    /// Matrix product `self * rhs` (apply `rhs` first).
    pub fn then_after(&self, rhs: &CoinOperator) -> Self {
        Self {
            m: mul(&self.m, &rhs.m),
        }
    }

    /// Largest entrywise deviation of `U U^dagger` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.m)
    }
}

fn mul(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> [[C64; 2]; 2] {
    let mut out = [[ZERO; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn unitarity_deviation(m: &[[C64; 2]; 2]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let uu = m[i][0] * m[j][0].conj() + m[i][1] * m[j][1].conj();
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((uu - target).norm());
        }
    }
    worst
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Waveplate {
    Half,
    Quarter,
}

impl FromStr for Waveplate {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "half" | "hwp" => Ok(Waveplate::Half),
            "quarter" | "qwp" => Ok(Waveplate::Quarter),
            other => Err(WalkError::UnknownWaveplate(other.to_string())),
        }
    }
}

impl fmt::Display for Waveplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Waveplate::Half => "half",
            Waveplate::Quarter => "quarter",
        })
    }
}

/// Jones matrix of a waveplate whose fast axis sits at `angle_deg` from `H`.
///
/// Half-wave: `[[cos 2t, sin 2t], [sin 2t, -cos 2t]]`, so 22.5 degrees gives
/// the Hadamard coin. Quarter-wave:
/// `e^{-i pi/4} [[cos^2 t + i sin^2 t, (1-i) sin t cos t], [(1-i) sin t cos t, sin^2 t + i cos^2 t]]`.
/// The global phase and handedness of the quarter-wave plate follow this
/// convention only; named coin states never go through it.
pub fn waveplate_unitary(kind: Waveplate, angle_deg: f64) -> Result<CoinOperator> {
    if !angle_deg.is_finite() {
        return Err(WalkError::InvalidInput(format!(
            "waveplate angle must be finite, got {angle_deg}"
        )));
    }
    let t = angle_deg.to_radians();
    let m = match kind {
        Waveplate::Half => {
            let (s, c) = (2.0 * t).sin_cos();
            [
                [C64::new(c, 0.0), C64::new(s, 0.0)],
                [C64::new(s, 0.0), C64::new(-c, 0.0)],
            ]
        }
        Waveplate::Quarter => {
            let (s, c) = t.sin_cos();
            let phase = C64::from_polar(1.0, -FRAC_PI_4);
            let off = C64::new(1.0, -1.0) * (s * c);
            [
                [phase * C64::new(c * c, s * s), phase * off],
                [phase * off, phase * C64::new(s * s, c * c)],
            ]
        }
    };
    CoinOperator::new(m)
}
