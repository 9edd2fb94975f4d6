//! Moments of the Legendre polynomials and their triangular algebra.
//!
//! The moment matrix has entries `F[i][j] = ∫₋₁¹ P_{i-1}(η) η^{j-1} dη`.
//! All indices in the public API are 1-based: `(i, j)` refers to row `i`,
//! column `j`, with `P_{i-1}` and `η^{j-1}` as above. Internally only the
//! structurally nonzero cells (`i <= j` and `i + j` even) are stored; every
//! other cell reads back as an exact zero.
//!
//! Besides `F` the module builds the expansion matrix `B` of coefficients
//! `β[k][i]`, the diagonal `D = F·B`, and the inverse `G = F⁻¹ = B·D⁻¹`.
//! Everything is exact; there is no floating point here.

use std::fmt;
use std::ops::Deref;
use std::sync::LazyLock;

use num_bigint::BigInt;
use num_traits::One;

use crate::exec::{self, Strategy};
use crate::rational::Rational;

static ZERO: LazyLock<Rational> = LazyLock::new(Rational::zero);

/// Table of `k!` for `k = 0..=max`.
#[derive(Debug, Clone)]
pub struct Factorials(Vec<BigInt>);

impl Factorials {
    pub fn up_to(max: usize) -> Self {
        let mut table = Vec::with_capacity(max + 1);
        table.push(BigInt::one());
        for k in 1..=max {
            let next = &table[k - 1] * BigInt::from(k);
            table.push(next);
        }
        Factorials(table)
    }

    pub fn get(&self, k: usize) -> &BigInt {
        &self.0[k]
    }

    pub fn max(&self) -> usize {
        self.0.len() - 1
    }
}

fn pow2(e: usize) -> BigInt {
    BigInt::one() << e
}

fn sign(half_steps: usize) -> i32 {
    if half_steps.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn is_structural(i: usize, j: usize) -> bool {
    i >= 1 && i <= j && (i + j).is_multiple_of(2)
}

/// Square upper-triangular matrix whose entries vanish wherever `i + j` is odd.
///
/// This is the shared shape of `F`, `B` and `G`, and it is closed under
/// multiplication.
#[derive(Clone, PartialEq, Eq)]
pub struct ParityTriangular {
    order: usize,
    // rows[i-1][(j-i)/2] holds cell (i, j)
    rows: Vec<Vec<Rational>>,
}

impl ParityTriangular {
    /// Fills every structural cell from `entry(i, j)` (1-based).
    pub fn from_fn<F>(order: usize, strategy: Strategy, entry: F) -> Self
    where
        F: Fn(usize, usize) -> Rational + Sync + Send,
    {
        assert!(order >= 1, "matrix order must be at least 1");
        let rows = exec::map_range(strategy, order, |r| {
            let i = r + 1;
            (i..=order).step_by(2).map(|j| entry(i, j)).collect()
        });
        ParityTriangular { order, rows }
    }

    pub fn identity(order: usize) -> Self {
        Self::from_fn(order, Strategy::Sequential, |i, j| {
            if i == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Entry `(i, j)`, 1-based. Cells outside the structure are zero.
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        assert!(
            (1..=self.order).contains(&i) && (1..=self.order).contains(&j),
            "index ({i}, {j}) out of range for order {}",
            self.order
        );
        if is_structural(i, j) {
            &self.rows[i - 1][(j - i) / 2]
        } else {
            &ZERO
        }
    }

    pub fn diagonal(&self) -> Vec<Rational> {
        (1..=self.order).map(|i| self.get(i, i).clone()).collect()
    }

    /// Exact product `self · rhs`.
    pub fn mul_with(&self, rhs: &ParityTriangular, strategy: Strategy) -> ParityTriangular {
        assert_eq!(self.order, rhs.order, "order mismatch in product");
        ParityTriangular::from_fn(self.order, strategy, |i, j| {
            (i..=j)
                .step_by(2)
                .map(|k| self.get(i, k) * rhs.get(k, j))
                .sum()
        })
    }

    /// Scales column `j` by `factors[j-1]`, i.e. `self · diag(factors)`.
    pub fn scale_columns(&self, factors: &[Rational]) -> ParityTriangular {
        assert_eq!(factors.len(), self.order);
        ParityTriangular::from_fn(self.order, Strategy::Sequential, |i, j| {
            self.get(i, j) * &factors[j - 1]
        })
    }

    /// `self · v` for a dense vector of length `order`.
    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.order);
        (1..=self.order)
            .map(|i| {
                (i..=self.order)
                    .step_by(2)
                    .map(|k| self.get(i, k) * &v[k - 1])
                    .sum()
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.is_diagonal() && self.diagonal().iter().all(|d| *d == Rational::one())
    }

    pub fn is_diagonal(&self) -> bool {
        self.rows.iter().all(|row| row.iter().skip(1).all(Rational::is_zero))
    }

    /// Dense copy, row-major, 1-based positions mapped to 0-based storage.
    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        (1..=self.order)
            .map(|i| (1..=self.order).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }
}

/// Debug dump: one row per line, space-separated `p/q` entries.
impl fmt::Display for ParityTriangular {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.order {
            let row: Vec<String> = (1..=self.order).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for ParityTriangular {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParityTriangular(order={})\n{self}", self.order)
    }
}

macro_rules! parity_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Debug)]
        pub struct $name(ParityTriangular);

        impl $name {
            pub fn into_inner(self) -> ParityTriangular {
                self.0
            }
        }

        impl Deref for $name {
            type Target = ParityTriangular;
            fn deref(&self) -> &ParityTriangular {
                &self.0
            }
        }
    };
}

parity_newtype!(
    /// The Legendre moment matrix `F`.
    MomentMatrix
);
parity_newtype!(
    /// The expansion matrix `B`; column `i` holds the coefficients `β[k][i]`.
    ExpansionMatrix
);
parity_newtype!(
    /// `G = F⁻¹`.
    InverseMatrix
);

/// Diagonal matrix `D = F·B`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiagonalMatrix(Vec<Rational>);

impl DiagonalMatrix {
    pub fn order(&self) -> usize {
        self.0.len()
    }

    /// Diagonal entry `i`, 1-based.
    pub fn get(&self, i: usize) -> &Rational {
        &self.0[i - 1]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn to_parity_triangular(&self) -> ParityTriangular {
        ParityTriangular::from_fn(self.order(), Strategy::Sequential, |i, j| {
            if i == j {
                self.get(i).clone()
            } else {
                Rational::zero()
            }
        })
    }
}

// ---------------------------------------------------------------------------
// Entry formulas
// ---------------------------------------------------------------------------

/// Raw Rodrigues sum for `F[i][j]` assuming `i + j` even. It is valid for
/// `i > j` as well, where it evaluates to zero.
fn rodrigues_sum(fact: &Factorials, i: usize, j: usize) -> Rational {
    let mut total = Rational::zero();
    for k in 0..=(i - 1) / 2 {
        // (2i-2k-2)! / (k! (i-k-1)! (i-2k-1)!) is a multinomial coefficient
        let multinomial = fact.get(2 * i - 2 * k - 2)
            / (fact.get(k) * fact.get(i - k - 1) * fact.get(i - 2 * k - 1));
        let term = Rational::new(multinomial, BigInt::from(i - 2 * k - 1 + j));
        if k % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    // 1 / 2^(i-2); for i = 1 that is a factor of 2
    if i >= 2 {
        total * Rational::new(1, pow2(i - 2))
    } else {
        total * Rational::from_integer(2)
    }
}

pub(crate) fn f_entry_with(fact: &Factorials, i: usize, j: usize) -> Rational {
    if is_structural(i, j) {
        rodrigues_sum(fact, i, j)
    } else {
        Rational::zero()
    }
}

/// `F[i][j]` from the finite alternating Rodrigues sum.
pub fn f_entry_closed_form(i: usize, j: usize) -> Rational {
    assert!(i >= 1 && j >= 1, "indices are 1-based");
    if !is_structural(i, j) {
        return Rational::zero();
    }
    f_entry_with(&Factorials::up_to(2 * i), i, j)
}

/// Three-term recurrence in the row index, valid for `i >= 3`:
/// `F[i][j] = ((2i-3)·F[i-1][j+1] − (i-2)·F[i-2][j]) / (i-1)`.
///
/// `f_up` is `F[i-1][j+1]`, `f_up2` is `F[i-2][j]`.
pub fn f_entry_recurrence(i: usize, j: usize, f_up: &Rational, f_up2: &Rational) -> Rational {
    assert!(i >= 3, "recurrence needs i >= 3");
    if !is_structural(i, j) {
        return Rational::zero();
    }
    let a = Rational::from_integer(2 * i as i64 - 3) * f_up;
    let b = Rational::from_integer(i as i64 - 2) * f_up2;
    (a - b) / Rational::from_integer(i as i64 - 1)
}

/// Rows one and two in their elementary form: `F[1][j] = 2/j` for odd `j`,
/// `F[2][j] = 2/(j+1)` for even `j`.
pub fn f_leading_rows(i: usize, j: usize) -> Rational {
    match i {
        1 if j % 2 == 1 => Rational::new(2, j as i64),
        2 if j.is_multiple_of(2) && j >= 2 => Rational::new(2, j as i64 + 1),
        1 | 2 => Rational::zero(),
        _ => panic!("f_leading_rows covers rows 1 and 2 only, got {i}"),
    }
}

/// `F[i][i] = 2^{i+1} i! (i-1)! / (2i)!`.
pub fn f_diagonal(i: usize) -> Rational {
    assert!(i >= 1);
    let fact = Factorials::up_to(2 * i);
    Rational::new(pow2(i + 1) * fact.get(i) * fact.get(i - 1), fact.get(2 * i).clone())
}

/// `F[i-2][i] = 2^{i-1} ((i-1)!)² / (2i-2)!` for `i >= 3`.
pub fn f_second_superdiagonal(i: usize) -> Rational {
    assert!(i >= 3, "second superdiagonal starts at column 3");
    let fact = Factorials::up_to(2 * i - 2);
    let f = fact.get(i - 1);
    Rational::new(pow2(i - 1) * f * f, fact.get(2 * i - 2).clone())
}

fn beta_with(fact: &Factorials, k: usize, i: usize) -> Rational {
    if !is_structural(k, i) {
        return Rational::zero();
    }
    let half = (i - k) / 2;
    let numer = fact.get(i + k - 2).clone() * sign(half);
    let denom = pow2(i - 1) * fact.get(k - 1) * fact.get(half) * fact.get((i + k) / 2 - 1);
    Rational::new(numer, denom)
}

/// `β[k][i] = (−1)^{(i−k)/2} (i+k−2)! / (2^{i−1} (k−1)! ((i−k)/2)! ((i+k)/2 − 1)!)`,
/// zero unless `k <= i` and `k + i` is even.
pub fn beta_entry(k: usize, i: usize) -> Rational {
    assert!(k >= 1 && i >= 1, "indices are 1-based");
    if !is_structural(k, i) {
        return Rational::zero();
    }
    beta_with(&Factorials::up_to(i + k), k, i)
}

/// `D[i][i] = 2 / (2i − 1)`.
pub fn d_diagonal(i: usize) -> Rational {
    assert!(i >= 1);
    Rational::new(2, 2 * i as i64 - 1)
}

pub(crate) fn g_with(fact: &Factorials, i: usize, j: usize) -> Rational {
    if !is_structural(i, j) {
        return Rational::zero();
    }
    let half = (j - i) / 2;
    let numer = BigInt::from(2 * j - 1) * fact.get(j + i - 2) * sign(half);
    let denom = pow2(j) * fact.get(i - 1) * fact.get(half) * fact.get((j + i) / 2 - 1);
    Rational::new(numer, denom)
}

/// Closed-form entry of `G = F⁻¹`.
pub fn g_entry(i: usize, j: usize) -> Rational {
    assert!(i >= 1 && j >= 1, "indices are 1-based");
    if !is_structural(i, j) {
        return Rational::zero();
    }
    g_with(&Factorials::up_to(i + j), i, j)
}

// ---------------------------------------------------------------------------
// Whole matrices
// ---------------------------------------------------------------------------

pub fn build_f(order: usize) -> MomentMatrix {
    build_f_with(order, Strategy::default())
}

/// Builds `F` from the closed form. In debug builds every entry is
/// re-derived from the recurrence and compared.
pub fn build_f_with(order: usize, strategy: Strategy) -> MomentMatrix {
    let fact = Factorials::up_to(2 * order.max(1));
    let f = MomentMatrix(ParityTriangular::from_fn(order, strategy, |i, j| {
        f_entry_with(&fact, i, j)
    }));
    debug_assert_eq!(f.recurrence_violation(), None);
    f
}

impl MomentMatrix {
    /// First cell `(i, j)` with `i >= 3, j <= order - 1` where the stored
    /// entry disagrees with the three-term recurrence, if any.
    pub fn recurrence_violation(&self) -> Option<(usize, usize)> {
        let n = self.order();
        for i in 3..=n {
            for j in 1..n {
                let rec = f_entry_recurrence(i, j, self.get(i - 1, j + 1), self.get(i - 2, j));
                if &rec != self.get(i, j) {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// Builds `F` purely from rows one and two plus the recurrence, with no use
/// of the closed form. Row `i` needs row `i-1` one column further out, so
/// the seed rows are generated out to column `2·order`.
pub fn build_f_by_recurrence(order: usize) -> MomentMatrix {
    assert!(order >= 1);
    let width = 2 * order;
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(order);
    for i in 1..=order {
        let row = match i {
            1 | 2 => (1..=width).map(|j| f_leading_rows(i, j)).collect(),
            _ => {
                let cols = width - (i - 2);
                (1..=cols)
                    .map(|j| f_entry_recurrence(i, j, &rows[i - 2][j], &rows[i - 3][j - 1]))
                    .collect()
            }
        };
        rows.push(row);
    }
    MomentMatrix(ParityTriangular::from_fn(order, Strategy::Sequential, |i, j| {
        rows[i - 1][j - 1].clone()
    }))
}

pub fn build_b(order: usize) -> ExpansionMatrix {
    build_b_with(order, Strategy::default())
}

pub fn build_b_with(order: usize, strategy: Strategy) -> ExpansionMatrix {
    let fact = Factorials::up_to(2 * order.max(1));
    ExpansionMatrix(ParityTriangular::from_fn(order, strategy, |k, i| {
        beta_with(&fact, k, i)
    }))
}

pub fn build_d(order: usize) -> DiagonalMatrix {
    assert!(order >= 1);
    DiagonalMatrix((1..=order).map(d_diagonal).collect())
}

pub fn build_g(order: usize) -> InverseMatrix {
    build_g_with(order, Strategy::default())
}

/// `G` from its closed form.
pub fn build_g_with(order: usize, strategy: Strategy) -> InverseMatrix {
    let fact = Factorials::up_to(2 * order.max(1));
    InverseMatrix(ParityTriangular::from_fn(order, strategy, |i, j| {
        g_with(&fact, i, j)
    }))
}

/// `G` as `B·D⁻¹`, the second construction path.
pub fn build_g_via_bd(order: usize) -> InverseMatrix {
    let b = build_b(order);
    let d_inv: Vec<Rational> = build_d(order).entries().iter().map(Rational::recip).collect();
    InverseMatrix(b.scale_columns(&d_inv))
}

/// Coefficients `α_i = ((2i−1)/2)·F[i][m+1]` for `i = 1..=m+1`.
///
/// They express `(F[1][m+1], F[1][m+2], …)` as a combination of rows of `F`
/// and solve `B·α = e_{m+1}` for the order-`(m+1)` matrix `B`.
pub fn alpha_coefficients(m: usize) -> Vec<Rational> {
    let fact = Factorials::up_to(2 * (m + 1));
    (1..=m + 1)
        .map(|i| Rational::new(2 * i as i64 - 1, 2) * f_entry_with(&fact, i, m + 1))
        .collect()
}

/// The shifted first row `(F[1][m+1], …, F[1][m+n+1])`.
pub fn shifted_first_row(m: usize, n: usize) -> Vec<Rational> {
    (1..=n + 1).map(|j| f_leading_rows(1, m + j)).collect()
}

/// `Σ_k α_k · (F[k][1], …, F[k][n+1])` with `α` from [`alpha_coefficients`].
/// Equals [`shifted_first_row`] for every `m, n`.
pub fn row_combination(m: usize, n: usize) -> Vec<Rational> {
    let alpha = alpha_coefficients(m);
    let fact = Factorials::up_to(2 * (m + n + 2));
    (1..=n + 1)
        .map(|j| {
            alpha
                .iter()
                .enumerate()
                .map(|(idx, a)| a * f_entry_with(&fact, idx + 1, j))
                .sum()
        })
        .collect()
}
