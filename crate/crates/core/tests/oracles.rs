//! Cross-checks of the engine against independent brute-force routes.

use std::collections::BTreeMap;

use qwalk_core::analysis::binomial_reference;
use qwalk_core::lattice::{
    evolve, CoinOperator, CoinState, DensityState, Mode, PureState, StepSchedule, WalkTemplate,
    Window,
};
use qwalk_core::C64;

/// Sum over all coin histories. A history `(c_0, ..., c_N)` has amplitude
/// `init[c_0] * prod_k C[c_k][c_{k-1}]` and ends at `sum_k (c_k == V ? +1 : -1)`.
/// Histories that sit on an absorbing site after any step are dropped.
/// Returns final amplitudes keyed by `(position, coin)`.
fn path_sum(
    n: usize,
    init: CoinState,
    coin: &CoinOperator,
    absorbers: &[i64],
) -> BTreeMap<(i64, usize), C64> {
    let init = [init.h, init.v];
    let mut out = BTreeMap::new();
    for bits in 0u64..(1 << (n + 1)) {
        let c = |k: usize| ((bits >> k) & 1) as usize;
        let mut amp = init[c(0)];
        let mut x = 0i64;
        let mut alive = true;
        for k in 1..=n {
            amp *= coin.entry(c(k), c(k - 1));
            x += if c(k) == 1 { 1 } else { -1 };
            if absorbers.contains(&x) {
                alive = false;
                break;
            }
        }
        if alive {
            *out.entry((x, c(n))).or_insert(C64::new(0.0, 0.0)) += amp;
        }
    }
    out
}

fn path_sum_distribution(n: usize, absorbers: &[i64]) -> BTreeMap<i64, f64> {
    let mut p = BTreeMap::new();
    for ((x, _), a) in path_sum(
        n,
        CoinState::left_circular(),
        &CoinOperator::hadamard(),
        absorbers,
    ) {
        *p.entry(x).or_insert(0.0) += a.norm_sqr();
    }
    p
}

/// Classical walk with walls: probability moves half left, half right, and
/// anything landing on an absorber is lost.
fn classical_with_wall(n: usize, absorbers: &[i64]) -> (BTreeMap<i64, f64>, Vec<f64>) {
    let mut p = BTreeMap::from([(0i64, 1.0)]);
    let mut absorbed = Vec::new();
    for _ in 0..n {
        let mut next = BTreeMap::new();
        for (&x, &w) in &p {
            *next.entry(x - 1).or_insert(0.0) += 0.5 * w;
            *next.entry(x + 1).or_insert(0.0) += 0.5 * w;
        }
        let mut lost = 0.0;
        for a in absorbers {
            lost += next.remove(a).unwrap_or(0.0);
        }
        absorbed.push(lost);
        p = next;
    }
    (p, absorbed)
}

type Dense = Vec<Vec<C64>>;

fn zeros(d: usize) -> Dense {
    vec![vec![C64::new(0.0, 0.0); d]; d]
}

fn matmul(a: &Dense, b: &Dense) -> Dense {
    let d = a.len();
    let mut out = zeros(d);
    for i in 0..d {
        for k in 0..d {
            if a[i][k] == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..d {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

fn adjoint(a: &Dense) -> Dense {
    let d = a.len();
    let mut out = zeros(d);
    for i in 0..d {
        for j in 0..d {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

/// `W = S (I (x) C)` as an explicit matrix on the window.
fn step_matrix(window: Window, coin: &CoinOperator) -> Dense {
    let n = window.len();
    let d = 2 * n;
    let mut ic = zeros(d);
    for i in 0..n {
        for a in 0..2 {
            for b in 0..2 {
                ic[2 * i + a][2 * i + b] = coin.entry(a, b);
            }
        }
    }
    let mut s = zeros(d);
    for i in 0..n {
        if i > 0 {
            s[2 * (i - 1)][2 * i] = C64::new(1.0, 0.0);
        }
        if i + 1 < n {
            s[2 * (i + 1) + 1][2 * i + 1] = C64::new(1.0, 0.0);
        }
    }
    matmul(&s, &ic)
}

/// Kraus projectors `|i><i| (x) I_coin`.
fn position_projectors(n: usize) -> Vec<Dense> {
    (0..n)
        .map(|i| {
            let mut p = zeros(2 * n);
            p[2 * i][2 * i] = C64::new(1.0, 0.0);
            p[2 * i + 1][2 * i + 1] = C64::new(1.0, 0.0);
            p
        })
        .collect()
}

fn to_dense(rho: &DensityState) -> Dense {
    let d = rho.dim();
    (0..d)
        .map(|r| (0..d).map(|c| rho.entry(r, c)).collect())
        .collect()
}

#[test]
fn pure_walk_matches_path_sum() {
    for n in 0..=10 {
        let s = StepSchedule::uniform(&WalkTemplate::default(), n, &[]).unwrap();
        let got = evolve(&s, Mode::Pure).unwrap();
        let oracle = path_sum_distribution(n, &[]);
        let d = got.final_distribution();
        for x in s.window().positions() {
            let want = oracle.get(&x).copied().unwrap_or(0.0);
            assert!(
                (d.get(x) - want).abs() < 1e-12,
                "n={n} x={x}: {} vs {want}",
                d.get(x)
            );
        }
    }
}

#[test]
fn pure_amplitudes_match_path_sum_for_arbitrary_coin() {
    let coin =
        qwalk_core::lattice::waveplate_unitary(qwalk_core::lattice::Waveplate::Quarter, 17.0)
            .unwrap()
            .then_after(&CoinOperator::hadamard());
    let init = CoinState::new(C64::new(0.6, 0.0), C64::new(0.0, -0.8));
    let n = 7;
    let w = Window::around(0, n);
    let mut psi = PureState::localized(w, 0, init).unwrap();
    for _ in 0..n {
        psi = psi.step(&coin).unwrap();
    }
    let oracle = path_sum(n, init, &coin, &[]);
    for x in w.positions() {
        let a = psi.at(x);
        let zero = C64::new(0.0, 0.0);
        let oh = oracle.get(&(x, 0)).copied().unwrap_or(zero);
        let ov = oracle.get(&(x, 1)).copied().unwrap_or(zero);
        assert!(
            (a.h - oh).norm() < 1e-12 && (a.v - ov).norm() < 1e-12,
            "x={x}"
        );
    }
}

#[test]
fn documented_small_distributions() {
    let p3 = path_sum_distribution(3, &[]);
    assert_eq!(p3.values().filter(|&&p| p > 0.0).count(), 4);
    for (x, want) in [(-3, 0.125), (-1, 0.375), (1, 0.375), (3, 0.125)] {
        assert!((p3[&x] - want).abs() < 1e-12);
    }
    let p4 = path_sum_distribution(4, &[]);
    for (x, want) in [
        (-4, 1.0 / 16.0),
        (-2, 0.375),
        (0, 0.125),
        (2, 0.375),
        (4, 1.0 / 16.0),
    ] {
        assert!((p4[&x] - want).abs() < 1e-12);
    }
    let p2 = path_sum_distribution(2, &[]);
    for (x, want) in [(-2, 0.25), (0, 0.5), (2, 0.25)] {
        assert!((p2[&x] - want).abs() < 1e-12);
    }
}

#[test]
fn density_step_matches_explicit_kraus_channel() {
    let n_steps = 4;
    let window = Window::around(0, n_steps);
    let coin = CoinOperator::hadamard();
    let w = step_matrix(window, &coin);
    let wd = adjoint(&w);
    let projectors = position_projectors(window.len());

    // Completeness: sum_i K_i K_i^dagger = I on the window.
    let mut sum = zeros(2 * window.len());
    for p in &projectors {
        let pp = matmul(p, &adjoint(p));
        for (r, row) in pp.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                sum[r][c] += v;
            }
        }
    }
    for (r, row) in sum.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            let want = if r == c { 1.0 } else { 0.0 };
            assert!((v - C64::new(want, 0.0)).norm() < 1e-15);
        }
    }

    for q in [0.0, 0.2, 0.5, 0.85, 1.0] {
        let mut rho = DensityState::from_pure(
            &PureState::localized(window, 0, CoinState::left_circular()).unwrap(),
        );
        let mut dense = to_dense(&rho);
        for _ in 0..n_steps {
            rho = rho.step(&coin, q).unwrap();
            let evolved = matmul(&matmul(&w, &dense), &wd);
            let mut next = zeros(evolved.len());
            for p in &projectors {
                let term = matmul(&matmul(p, &evolved), p);
                for r in 0..next.len() {
                    for c in 0..next.len() {
                        next[r][c] += term[r][c] * q;
                    }
                }
            }
            for r in 0..next.len() {
                for c in 0..next.len() {
                    next[r][c] += evolved[r][c] * (1.0 - q);
                }
            }
            dense = next;
        }
        let got = to_dense(&rho);
        for r in 0..got.len() {
            for c in 0..got.len() {
                assert!((got[r][c] - dense[r][c]).norm() < 1e-12, "q={q} ({r},{c})");
            }
        }
    }
}

#[test]
fn fully_dephased_walk_is_binomial() {
    for n in 0..=12 {
        let s = StepSchedule::uniform(&WalkTemplate::default().with_q(1.0), n, &[]).unwrap();
        let got = evolve(&s, Mode::Density).unwrap();
        let reference = binomial_reference(n);
        let d = got.final_distribution();
        for x in s.window().positions() {
            assert!((d.get(x) - reference.get(x)).abs() < 1e-12, "n={n} x={x}");
        }
    }
}

#[test]
fn absorption_matches_projection_oracles() {
    for n in 1..=8 {
        let quantum = evolve(
            &StepSchedule::uniform(&WalkTemplate::default(), n, &[-1]).unwrap(),
            Mode::Pure,
        )
        .unwrap();
        let oracle: f64 = path_sum_distribution(n, &[-1]).values().sum();
        assert!((quantum.remaining_mass() - oracle).abs() < 1e-12, "n={n}");

        let classical = evolve(
            &StepSchedule::uniform(&WalkTemplate::default().with_q(1.0), n, &[-1]).unwrap(),
            Mode::Density,
        )
        .unwrap();
        let (p, absorbed) = classical_with_wall(n, &[-1]);
        let remaining: f64 = p.values().sum();
        assert!(
            (classical.remaining_mass() - remaining).abs() < 1e-12,
            "n={n}"
        );
        for (k, a) in absorbed.iter().enumerate() {
            assert!((classical.steps[k + 1].absorbed - a).abs() < 1e-12);
        }
    }
    let (p5, _) = classical_with_wall(5, &[-1]);
    assert!((p5.values().sum::<f64>() - 5.0 / 16.0).abs() < 1e-15);
    assert!((path_sum_distribution(5, &[-1]).values().sum::<f64>() - 3.0 / 8.0).abs() < 1e-12);
}
