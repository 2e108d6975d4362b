use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::Mono;

/// Lex or graded reverse lex; variable 0 is the largest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum BaseOrder {
    Lex,
    #[default]
    Grevlex,
}

/// Monomial order. A block order compares the exponents of the eliminated
/// variables first (with the inner order) and breaks ties on the rest, so
/// every monomial involving an eliminated variable exceeds every monomial
/// free of them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Base(BaseOrder),
    Block { eliminated: Vec<bool>, inner: BaseOrder },
}

impl Default for Order {
    fn default() -> Self {
        Order::Base(BaseOrder::Grevlex)
    }
}

impl From<BaseOrder> for Order {
    fn from(b: BaseOrder) -> Self {
        Order::Base(b)
    }
}

fn cmp_subset(base: BaseOrder, a: &[u32], b: &[u32], keep: impl Fn(usize) -> bool) -> Ordering {
    match base {
        BaseOrder::Lex => {
            for i in 0..a.len() {
                if keep(i) && a[i] != b[i] {
                    return a[i].cmp(&b[i]);
                }
            }
            Ordering::Equal
        }
        BaseOrder::Grevlex => {
            let (mut da, mut db) = (0u64, 0u64);
            for i in 0..a.len() {
                if keep(i) {
                    da += a[i] as u64;
                    db += b[i] as u64;
                }
            }
            if da != db {
                return da.cmp(&db);
            }
            for i in (0..a.len()).rev() {
                if keep(i) && a[i] != b[i] {
                    return b[i].cmp(&a[i]);
                }
            }
            Ordering::Equal
        }
    }
}

impl Order {
    pub const LEX: Order = Order::Base(BaseOrder::Lex);
    pub const GREVLEX: Order = Order::Base(BaseOrder::Grevlex);

    /// Block order eliminating the variables at `indices` of an `nvars` table.
    pub fn block(nvars: usize, indices: &[usize], inner: BaseOrder) -> Order {
        let mut eliminated = vec![false; nvars];
        for &i in indices {
            eliminated[i] = true;
        }
        Order::Block { eliminated, inner }
    }

    pub fn base(&self) -> BaseOrder {
        match self {
            Order::Base(b) => *b,
            Order::Block { inner, .. } => *inner,
        }
    }

    pub fn cmp(&self, a: &Mono, b: &Mono) -> Ordering {
        let (a, b) = (a.exps(), b.exps());
        debug_assert_eq!(a.len(), b.len());
        match self {
            Order::Base(base) => cmp_subset(*base, a, b, |_| true),
            Order::Block { eliminated, inner } => {
                debug_assert_eq!(eliminated.len(), a.len());
                cmp_subset(*inner, a, b, |i| eliminated[i])
                    .then_with(|| cmp_subset(*inner, a, b, |i| !eliminated[i]))
            }
        }
    }

    /// Whether `m` involves an eliminated variable (always false for base orders).
    pub fn touches_eliminated(&self, m: &Mono) -> bool {
        match self {
            Order::Base(_) => false,
            Order::Block { eliminated, .. } => {
                m.exps().iter().zip(eliminated).any(|(&e, &el)| el && e > 0)
            }
        }
    }
}

/// Compare two monomials under `order`.
pub fn compare(m1: &Mono, m2: &Mono, order: &Order) -> Ordering {
    order.cmp(m1, m2)
}
