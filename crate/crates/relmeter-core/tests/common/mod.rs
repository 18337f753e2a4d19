//! Test-side oracles, independent of the library's computation paths.
//!
//! The dense oracle evaluates each indicator by transcribing its defining
//! formula over a dense matrix; the Shapley oracle averages marginal
//! contributions over explicit permutations. Neither shares code with the
//! sparse kernels or the subset-weighted Shapley implementation they check.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use relmeter_core::platform::Platform;
use relmeter_core::rational::{int, Rat};

/// A dense platform mirror: `rows[i][s]` is C_is, `prices[s]` is p_s.
pub struct DenseOracle {
    pub rows: Vec<Vec<Rat>>,
    pub prices: Vec<Rat>,
}

impl DenseOracle {
    pub fn new(rows: Vec<Vec<Rat>>, prices: Vec<Rat>) -> Self {
        assert!(!rows.is_empty());
        for row in &rows {
            assert_eq!(row.len(), prices.len());
        }
        DenseOracle { rows, prices }
    }

    pub fn from_platform(p: &Platform) -> Self {
        let rows = p
            .services()
            .map(|i| p.subscribers().map(|s| p.entry(i, s)).collect())
            .collect();
        DenseOracle::new(rows, p.prices().to_vec())
    }

    pub fn services(&self) -> usize {
        self.rows.len()
    }

    pub fn subscribers(&self) -> usize {
        self.prices.len()
    }

    pub fn sigma(&self) -> Rat {
        self.prices.iter().fold(Rat::zero(), |acc, p| acc + p)
    }

    fn column_sum(&self, s: usize) -> Rat {
        (0..self.services()).fold(Rat::zero(), |acc, i| acc + &self.rows[i][s])
    }

    fn row_sum(&self, i: usize) -> Rat {
        self.rows[i].iter().fold(Rat::zero(), |acc, q| acc + q)
    }

    fn support_size(&self, s: usize) -> usize {
        (0..self.services()).filter(|i| !self.rows[*i][s].is_zero()).count()
    }

    /// R^U_i = σ / |N|.
    pub fn uniform(&self) -> Vec<Rat> {
        let share = self.sigma() / int(self.services() as i64);
        vec![share; self.services()]
    }

    /// R^SU_i = Σ_{s : C_is > 0} p_s / |N_s|.
    pub fn subscriber_uniform(&self) -> Vec<Rat> {
        (0..self.services())
            .map(|i| {
                (0..self.subscribers())
                    .filter(|s| !self.rows[i][*s].is_zero())
                    .fold(Rat::zero(), |acc, s| {
                        acc + &self.prices[s] / int(self.support_size(s) as i64)
                    })
            })
            .collect()
    }

    /// R^P_i = ‖C_i·‖ / Σ_j ‖C_j·‖ · σ.
    pub fn proportional(&self) -> Vec<Rat> {
        let total = (0..self.services()).fold(Rat::zero(), |acc, i| acc + self.row_sum(i));
        let sigma = self.sigma();
        (0..self.services())
            .map(|i| self.row_sum(i) / &total * &sigma)
            .collect()
    }

    /// R^SP_i = Σ_s C_is / ‖C_·s‖ · p_s.
    pub fn subscriber_proportional(&self) -> Vec<Rat> {
        (0..self.services())
            .map(|i| {
                (0..self.subscribers()).fold(Rat::zero(), |acc, s| {
                    if self.rows[i][s].is_zero() {
                        acc
                    } else {
                        acc + &self.rows[i][s] / self.column_sum(s) * &self.prices[s]
                    }
                })
            })
            .collect()
    }
}

/// Shapley value by brute-force enumeration of every player ordering:
/// the average over all |N|! permutations of each player's marginal
/// contribution when joining the coalition of its predecessors.
pub fn shapley_by_permutations(n: usize, value: &dyn Fn(&[usize]) -> Rat) -> Vec<Rat> {
    assert!(n <= 8, "factorial enumeration oracle is for small games");
    let mut order: Vec<usize> = (0..n).collect();
    let mut sums = vec![Rat::zero(); n];
    let mut count = BigInt::zero();
    permute(&mut order, 0, &mut |perm| {
        count += 1;
        let mut coalition: Vec<usize> = Vec::with_capacity(n);
        let mut previous = Rat::zero();
        for &player in perm {
            coalition.push(player);
            coalition.sort_unstable();
            let with_player = value(&coalition);
            sums[player] += &with_player - &previous;
            previous = with_player;
        }
    });
    let permutations = Rat::from_integer(count);
    sums.into_iter().map(|s| s / &permutations).collect()
}

fn permute(order: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == order.len() {
        visit(order);
        return;
    }
    for i in k..order.len() {
        order.swap(k, i);
        permute(order, k + 1, visit);
        order.swap(k, i);
    }
}

/// Deterministic random platform for property tests: n in [3, max_services],
/// m in [1, max_subscribers], density about one half, small rational entries,
/// zero columns repaired.
pub fn random_platform<R: Rng>(rng: &mut R, max_services: usize, max_subscribers: usize) -> Platform {
    let n = rng.gen_range(3..=max_services.max(3));
    let m = rng.gen_range(1..=max_subscribers.max(1));
    let mut entries: Vec<(usize, usize, Rat)> = Vec::new();
    let mut column_hit = vec![false; m];
    for i in 0..n {
        for s in 0..m {
            if rng.gen_bool(0.5) {
                entries.push((i, s, small_positive_rational(rng)));
                column_hit[s] = true;
            }
        }
    }
    for (s, hit) in column_hit.iter().enumerate() {
        if !hit {
            let i = rng.gen_range(0..n);
            entries.push((i, s, small_positive_rational(rng)));
        }
    }
    let prices: Vec<Rat> = (0..m).map(|_| small_positive_rational(rng)).collect();
    Platform::build_raw(prices, entries, n).expect("generated platform is valid")
}

pub fn small_positive_rational<R: Rng>(rng: &mut R) -> Rat {
    let numer = rng.gen_range(1..=8i64);
    let denom = *[1i64, 2, 3, 4].get(rng.gen_range(0..4)).unwrap();
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

/// The worked six-subscriber example shared by the golden tests.
pub fn worked_example() -> Platform {
    Platform::from_dense(
        vec![
            int(2),
            int(4),
            Rat::new(BigInt::from(5), BigInt::from(2)),
            int(2),
            int(1),
            Rat::new(BigInt::from(7), BigInt::from(2)),
        ],
        vec![
            vec![int(0), int(5), int(0), int(1), int(2), int(3)],
            vec![int(1), int(1), int(2), int(3), int(6), int(0)],
            vec![int(0), int(0), int(0), int(0), int(0), int(0)],
        ],
    )
    .unwrap()
}

/// One is sanity: the oracle itself must reproduce hand-checked arithmetic.
pub fn oracle_self_check() {
    let oracle = DenseOracle::from_platform(&worked_example());
    assert_eq!(oracle.sigma(), int(15));
    assert!(!oracle.uniform().is_empty());
    let one = Rat::one();
    assert_eq!(&one + &one, int(2));
}
