use super::{CoinOperator, CoinState, Distribution, Window};
use crate::{Result, WalkError};

/// Coherent walker: one coin amplitude pair per site of a bounded window.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    window: Window,
    amplitudes: Vec<CoinState>,
}

impl PureState {
    /// All-zero state on `window`.
    pub fn vacuum(window: Window) -> Self {
        Self {
            window,
            amplitudes: vec![CoinState::zero(); window.len()],
        }
    }

    /// Walker localized at `position` with coin `coin`.
    pub fn localized(window: Window, position: i64, coin: CoinState) -> Result<Self> {
        let mut state = Self::vacuum(window);
        let i = window
            .index_of(position)
            .ok_or_else(|| window.overflow(position))?;
        state.amplitudes[i] = coin;
        Ok(state)
    }

    pub fn from_amplitudes(window: Window, amplitudes: Vec<CoinState>) -> Result<Self> {
        if amplitudes.len() != window.len() {
            return Err(WalkError::InvalidInput(format!(
                "{} amplitudes for a window of {} sites",
                amplitudes.len(),
                window.len()
            )));
        }
        Ok(Self { window, amplitudes })
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn amplitudes(&self) -> &[CoinState] {
        &self.amplitudes
    }

    /// Coin amplitudes at `position`; zero outside the window.
    pub fn at(&self, position: i64) -> CoinState {
        self.window
            .index_of(position)
            .map(|i| self.amplitudes[i])
            .unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(CoinState::norm_sqr).sum()
    }

    /// Applies `coin` independently at every site.
    pub fn apply_coin(&self, coin: &CoinOperator) -> Self {
        Self {
            window: self.window,
            amplitudes: self.amplitudes.iter().map(|&a| coin.apply(a)).collect(),
        }
    }

    /// Conditional shift: `H` amplitude at `j` moves to `j - 1`, `V` amplitude
    /// to `j + 1`. Fails if nonzero amplitude would leave the window.
    pub fn shift(&self) -> Result<Self> {
        let n = self.amplitudes.len();
        let first = self.amplitudes[0];
        if first.h.norm_sqr() != 0.0 {
            return Err(self.window.overflow(self.window.min() - 1));
        }
        let last = self.amplitudes[n - 1];
        if last.v.norm_sqr() != 0.0 {
            return Err(self.window.overflow(self.window.max() + 1));
        }
        let mut out = vec![CoinState::zero(); n];
        for (i, a) in self.amplitudes.iter().enumerate() {
            if i > 0 {
                out[i - 1].h = a.h;
            }
            if i + 1 < n {
                out[i + 1].v = a.v;
            }
        }
        Ok(Self {
            window: self.window,
            amplitudes: out,
        })
    }

    /// One walk step `W = S C`.
    pub fn step(&self, coin: &CoinOperator) -> Result<Self> {
        self.apply_coin(coin).shift()
    }

    /// Removes all amplitude at `positions` and returns the mass removed. The
    /// state is not renormalized.
    pub fn absorb(&self, positions: &[i64]) -> (Self, f64) {
        let mut out = self.clone();
        let mut removed = 0.0;
        for &x in positions {
            if let Some(i) = self.window.index_of(x) {
                removed += out.amplitudes[i].norm_sqr();
                out.amplitudes[i] = CoinState::zero();
            }
        }
        (out, removed)
    }

    pub fn distribution(&self) -> Distribution {
        Distribution::from_window(
            self.window.min(),
            self.amplitudes.iter().map(CoinState::norm_sqr).collect(),
        )
    }

    /// Projects onto `position` and rescales so the norm is unchanged.
    /// Used by the trajectory sampler for a position collapse.
    pub(crate) fn collapse_to(&self, position: i64) -> Self {
        let total = self.norm_sqr();
        let mut out = Self::vacuum(self.window);
        if let Some(i) = self.window.index_of(position) {
            let local = self.amplitudes[i].norm_sqr();
            if local > 0.0 {
                out.amplitudes[i] = self.amplitudes[i].scale((total / local).sqrt());
            }
        }
        out
    }
}
