use nalgebra::DMatrix;

use super::{CoinOperator, CoinState, Distribution, PureState, Window};
use crate::tolerance;
use crate::{Exec, Result, WalkError, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Mixed walker state: a Hermitian matrix over the composite
/// `(position, coin)` basis.
///
/// Basis index `2 * site + coin` with `coin = 0` for `H` and `1` for `V`,
/// where `site` counts from the window minimum. Stored dense and row-major;
/// the dimension is twice the window length.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityState {
    window: Window,
    data: Vec<C64>,
}

impl DensityState {
    pub fn vacuum(window: Window) -> Self {
        let d = 2 * window.len();
        Self {
            window,
            data: vec![ZERO; d * d],
        }
    }

    /// `|psi><psi|`
    pub fn from_pure(state: &PureState) -> Self {
        let window = state.window();
        let psi: Vec<C64> = state.amplitudes().iter().flat_map(|a| [a.h, a.v]).collect();
        let d = psi.len();
        let mut data = vec![ZERO; d * d];
        for (r, row) in data.chunks_mut(d).enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = psi[r] * psi[c].conj();
            }
        }
        Self { window, data }
    }

    /// Wraps a row-major matrix, checking its size and Hermiticity.
    pub fn from_matrix(window: Window, data: Vec<C64>) -> Result<Self> {
        let d = 2 * window.len();
        if data.len() != d * d {
            return Err(WalkError::InvalidInput(format!(
                "density matrix has {} entries, expected {d}x{d}",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.is_finite()) {
            return Err(WalkError::NonFinite("density matrix"));
        }
        let state = Self { window, data };
        let dev = state.hermiticity_deviation();
        if dev > tolerance::HERMITIAN {
            return Err(WalkError::InvalidInput(format!(
                "density matrix is not Hermitian (deviation {dev:e})"
            )));
        }
        Ok(state)
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn dim(&self) -> usize {
        2 * self.window.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim() + col]
    }

    /// Real part of the trace: the total probability mass.
    pub fn trace(&self) -> f64 {
        let d = self.dim();
        (0..d).map(|i| self.data[i * d + i].re).sum()
    }

    /// The 2x2 coin block `<x| rho |y>`; zero outside the window.
    pub fn block(&self, x: i64, y: i64) -> [[C64; 2]; 2] {
        let (Some(i), Some(j)) = (self.window.index_of(x), self.window.index_of(y)) else {
            return [[ZERO; 2]; 2];
        };
        let e = |a, b| self.entry(2 * i + a, 2 * j + b);
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    }

    /// `<x, s| rho |x, s>`: probability of finding the walker at `x` with coin
    /// state `s`.
    pub fn projection(&self, x: i64, s: &CoinState) -> f64 {
        let b = self.block(x, x);
        let amp = [s.h, s.v];
        let mut acc = ZERO;
        for a in 0..2 {
            for c in 0..2 {
                acc += amp[a].conj() * b[a][c] * amp[c];
            }
        }
        acc.re
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..d {
            for c in r..d {
                worst = worst.max((self.data[r * d + c] - self.data[c * d + r].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let d = self.dim();
        let m = DMatrix::from_row_slice(d, d, &self.data);
        // Symmetrize away rounding so the Hermitian solver sees an exact input.
        let h = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// Checks Hermiticity, positivity and the trace bound.
    pub fn validate(&self) -> Result<()> {
        let dev = self.hermiticity_deviation();
        if dev > tolerance::HERMITIAN {
            return Err(WalkError::InvalidInput(format!(
                "not Hermitian (deviation {dev:e})"
            )));
        }
        let tr = self.trace();
        if !(-tolerance::TRACE..=1.0 + tolerance::TRACE).contains(&tr) {
            return Err(WalkError::InvalidInput(format!(
                "trace {tr} outside [0, 1]"
            )));
        }
        let min = self.min_eigenvalue();
        if min < -tolerance::POSITIVITY {
            return Err(WalkError::InvalidInput(format!(
                "not positive semidefinite (min eigenvalue {min:e})"
            )));
        }
        Ok(())
    }

    /// Position dephasing: `(1 - q) rho + q sum_i P_i rho P_i` with
    /// `P_i = |i><i| (x) I_coin`. Coherences between different sites shrink by
    /// `1 - q`; the coin blocks on the diagonal are untouched.
    pub fn dephase(&self, q: f64) -> Result<Self> {
        WalkError::check_probability("q", q)?;
        let d = self.dim();
        let keep = 1.0 - q;
        let mut out = self.clone();
        for (r, row) in out.data.chunks_mut(d).enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                if r / 2 != c / 2 {
                    *cell *= keep;
                }
            }
        }
        Ok(out)
    }

    /// One step of the dephased walk, `dephase(W rho W^dagger, q)` with `W = S C`.
    pub fn step(&self, coin: &CoinOperator, q: f64) -> Result<Self> {
        self.step_with(coin, q, Exec::default())
    }

    /// [`step`](Self::step) with an explicit execution strategy.
    ///
    /// The shift is a partial permutation of the basis, so the whole step is
    /// evaluated entrywise in `O(d^2)`: each output entry pulls one entry of
    /// `C rho C^dagger` from its pre-shift location.
    pub fn step_with(&self, coin: &CoinOperator, q: f64, exec: Exec) -> Result<Self> {
        WalkError::check_probability("q", q)?;
        let n = self.window.len();
        let d = 2 * n;
        let c = coin.matrix();
        let data = &self.data;

        // Entry (r, s) of (I (x) C) rho (I (x) C)^dagger.
        let coined = |r: usize, s: usize| -> C64 {
            let (i, k) = (r / 2, r % 2);
            let (j, l) = (s / 2, s % 2);
            let row_h = &data[2 * i * d..(2 * i + 1) * d];
            let row_v = &data[(2 * i + 1) * d..(2 * i + 2) * d];
            let t0 = c[k][0] * row_h[2 * j] + c[k][1] * row_v[2 * j];
            let t1 = c[k][0] * row_h[2 * j + 1] + c[k][1] * row_v[2 * j + 1];
            c[l][0].conj() * t0 + c[l][1].conj() * t1
        };

        // H at the first site and V at the last site have nowhere to go.
        if coined(0, 0).re != 0.0 {
            return Err(self.window.overflow(self.window.min() - 1));
        }
        if coined(d - 1, d - 1).re != 0.0 {
            return Err(self.window.overflow(self.window.max() + 1));
        }

        // Pre-shift index that lands on `r`: (i, H) <- (i + 1, H), (i, V) <- (i - 1, V).
        let source = |r: usize| -> Option<usize> {
            let (i, k) = (r / 2, r % 2);
            if k == 0 {
                (i + 1 < n).then(|| r + 2)
            } else {
                (i > 0).then(|| r - 2)
            }
        };

        let keep = 1.0 - q;
        let mut out = vec![ZERO; d * d];
        exec.for_each_chunk_mut(&mut out, d, |row, out_row| {
            let Some(r) = source(row) else { return };
            for (col, cell) in out_row.iter_mut().enumerate() {
                let Some(s) = source(col) else { continue };
                let v = coined(r, s);
                *cell = if row / 2 == col / 2 { v } else { v * keep };
            }
        });
        Ok(Self {
            window: self.window,
            data: out,
        })
    }

    /// Zeroes every row and column belonging to `positions` and returns the
    /// trace removed. The state is not renormalized.
    pub fn absorb(&self, positions: &[i64]) -> (Self, f64) {
        let d = self.dim();
        let sites: Vec<usize> = positions
            .iter()
            .filter_map(|&x| self.window.index_of(x))
            .collect();
        if sites.is_empty() {
            return (self.clone(), 0.0);
        }
        let mut out = self.clone();
        let mut removed = 0.0;
        for &i in &sites {
            removed += self.data[2 * i * d + 2 * i].re + self.data[(2 * i + 1) * d + 2 * i + 1].re;
        }
        let hit = |idx: usize| sites.contains(&(idx / 2));
        for (r, row) in out.data.chunks_mut(d).enumerate() {
            if hit(r) {
                row.fill(ZERO);
            } else {
                for &i in &sites {
                    row[2 * i] = ZERO;
                    row[2 * i + 1] = ZERO;
                }
            }
        }
        (out, removed.max(0.0))
    }

    /// Multiplies the amplitude of every state at `x` by `e^{i phi}`, i.e.
    /// conjugates by a phase shifter placed in that spatial mode.
    pub fn with_site_phase(&self, x: i64, phi: f64) -> Self {
        let Some(i) = self.window.index_of(x) else {
            return self.clone();
        };
        let d = self.dim();
        let phase = C64::from_polar(1.0, phi);
        let mut out = self.clone();
        for (r, row) in out.data.chunks_mut(d).enumerate() {
            let row_in = r / 2 == i;
            for (c, cell) in row.iter_mut().enumerate() {
                let col_in = c / 2 == i;
                match (row_in, col_in) {
                    (true, false) => *cell *= phase,
                    (false, true) => *cell *= phase.conj(),
                    _ => {}
                }
            }
        }
        out
    }

    /// `p(x) = Tr[(|x><x| (x) I) rho]`
    pub fn distribution(&self) -> Distribution {
        let d = self.dim();
        let probs = (0..self.window.len())
            .map(|i| self.data[2 * i * d + 2 * i].re + self.data[(2 * i + 1) * d + 2 * i + 1].re)
            .collect();
        Distribution::from_window(self.window.min(), probs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_site_coherent() -> DensityState {
        // Equal superposition of |0,H> and |2,H> on window [-1, 3].
        let w = Window::new(-1, 3).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![CoinState::zero(); w.len()];
        amps[1] = CoinState::horizontal().scale(s);
        amps[3] = CoinState::horizontal().scale(s);
        DensityState::from_pure(&PureState::from_amplitudes(w, amps).unwrap())
    }

    #[test]
    fn dephase_endpoints_and_midpoint() {
        let rho = two_site_coherent();
        assert_eq!(rho.dephase(0.0).unwrap(), rho);

        let full = rho.dephase(1.0).unwrap();
        assert_eq!(full.block(0, 2)[0][0], ZERO);
        assert_eq!(full.block(0, 0), rho.block(0, 0));

        let half = rho.dephase(0.5).unwrap();
        let c = rho.block(0, 2)[0][0];
        assert!((half.block(0, 2)[0][0] - c * 0.5).norm() < 1e-16);
        assert!((half.trace() - rho.trace()).abs() < 1e-15);
    }

    #[test]
    fn dephase_keeps_intra_site_coin_coherence() {
        let w = Window::around(0, 1);
        let rho = DensityState::from_pure(
            &PureState::localized(w, 0, CoinState::left_circular()).unwrap(),
        );
        let out = rho.dephase(1.0).unwrap();
        assert_eq!(out, rho);
    }

    #[test]
    fn q_out_of_range_rejected() {
        let rho = two_site_coherent();
        assert!(matches!(
            rho.dephase(1.5),
            Err(WalkError::ProbabilityOutOfRange { .. })
        ));
        assert!(rho.step(&CoinOperator::hadamard(), -0.1).is_err());
    }

    #[test]
    fn step_matches_pure_at_q0() {
        let w = Window::around(0, 3);
        let mut psi = PureState::localized(w, 0, CoinState::left_circular()).unwrap();
        let mut rho = DensityState::from_pure(&psi);
        let h = CoinOperator::hadamard();
        for _ in 0..3 {
            psi = psi.step(&h).unwrap();
            rho = rho.step_with(&h, 0.0, Exec::Sequential).unwrap();
        }
        let expected = DensityState::from_pure(&psi);
        for (a, b) in rho.as_slice().iter().zip(expected.as_slice()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn sequential_and_parallel_agree_bitwise() {
        let w = Window::around(0, 6);
        let mut a = DensityState::from_pure(
            &PureState::localized(w, 0, CoinState::left_circular()).unwrap(),
        );
        let mut b = a.clone();
        for _ in 0..6 {
            a = a
                .step_with(&CoinOperator::hadamard(), 0.3, Exec::Sequential)
                .unwrap();
            b = b
                .step_with(&CoinOperator::hadamard(), 0.3, Exec::Parallel)
                .unwrap();
        }
        assert_eq!(a, b);
    }

    #[test]
    fn overflow_detected() {
        let w = Window::around(0, 0);
        let rho =
            DensityState::from_pure(&PureState::localized(w, 0, CoinState::horizontal()).unwrap());
        assert!(matches!(
            rho.step(&CoinOperator::identity(), 0.0),
            Err(WalkError::WindowOverflow { position: -1, .. })
        ));
    }

    #[test]
    fn absorb_removes_rows_and_columns() {
        let rho = two_site_coherent();
        let (out, removed) = rho.absorb(&[2]);
        assert!((removed - 0.5).abs() < 1e-15);
        assert_eq!(out.block(0, 2), [[ZERO; 2]; 2]);
        assert_eq!(out.block(2, 2), [[ZERO; 2]; 2]);
        assert!((out.trace() - 0.5).abs() < 1e-15);

        let (same, none) = rho.absorb(&[1, 40]);
        assert_eq!(none, 0.0);
        assert_eq!(same, rho);
    }

    #[test]
    fn site_phase_only_touches_coherences() {
        let rho = two_site_coherent();
        let out = rho.with_site_phase(2, std::f64::consts::PI);
        assert!((out.block(0, 2)[0][0] + rho.block(0, 2)[0][0]).norm() < 1e-15);
        assert_eq!(out.block(2, 2), rho.block(2, 2));
    }

    #[test]
    fn eigenvalues_of_pure_state() {
        let ev = two_site_coherent().eigenvalues();
        assert!((ev.last().unwrap() - 1.0).abs() < 1e-12);
        assert!(ev[0].abs() < 1e-12);
        two_site_coherent().validate().unwrap();
    }

    #[test]
    fn from_matrix_checks_shape_and_hermiticity() {
        let w = Window::around(0, 0);
        assert!(DensityState::from_matrix(w, vec![ZERO; 3]).is_err());
        let mut m = vec![ZERO; 4];
        m[1] = C64::new(0.0, 0.5);
        assert!(DensityState::from_matrix(w, m.clone()).is_err());
        m[2] = C64::new(0.0, -0.5);
        assert!(DensityState::from_matrix(w, m).is_ok());
    }
}
