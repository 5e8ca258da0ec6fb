use std::cmp::Ordering;

use crate::poly::Monomial;

/// Monomial orderings. The global kinds are well orders with `1` smallest;
/// the local kind has `1` largest and is what standard bases in the local
/// ring at the origin are computed with.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    DegRevLex,
    /// Elimination order: variables flagged `true` form the first block and
    /// dominate; degrevlex inside each block.
    Block(Vec<bool>),
    /// Negative degree reverse lexicographic (Singular's `ds`): lower total
    /// degree is larger, ties broken as in degrevlex.
    LocalDegRevLex,
}

fn revlex_tiebreak(a: &[u32], b: &[u32]) -> Ordering {
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

fn degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| revlex_tiebreak(a, b))
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.0.cmp(&b.0),
            MonomialOrder::DegRevLex => degrevlex(&a.0, &b.0),
            MonomialOrder::LocalDegRevLex => {
                let da = a.degree();
                let db = b.degree();
                db.cmp(&da).then_with(|| revlex_tiebreak(&a.0, &b.0))
            }
            MonomialOrder::Block(first) => {
                let pick = |m: &Monomial, flag: bool| -> Vec<u32> {
                    m.0.iter().zip(first).filter(|(_, f)| **f == flag).map(|(e, _)| *e).collect()
                };
                degrevlex(&pick(a, true), &pick(b, true)).then_with(|| degrevlex(&pick(a, false), &pick(b, false)))
            }
        }
    }

    pub fn is_global(&self) -> bool {
        !matches!(self, MonomialOrder::LocalDegRevLex)
    }

    pub fn name(&self) -> &'static str {
        match self {
            MonomialOrder::Lex => "lex",
            MonomialOrder::DegRevLex => "degrevlex",
            MonomialOrder::Block(_) => "elimination",
            MonomialOrder::LocalDegRevLex => "local-degrevlex",
        }
    }
}

/// Ordering on terms `m * e_c` of a free module. Components below `split`
/// dominate every component at or above it; inside a block the monomial is
/// compared first and the lower component index wins ties.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleOrder {
    pub mono: MonomialOrder,
    pub split: usize,
}

impl ModuleOrder {
    pub fn new(mono: MonomialOrder) -> Self {
        ModuleOrder { mono, split: 0 }
    }

    pub fn with_split(mono: MonomialOrder, split: usize) -> Self {
        ModuleOrder { mono, split }
    }

    pub fn cmp(&self, a: (usize, &Monomial), b: (usize, &Monomial)) -> Ordering {
        let block = |c: usize| (c >= self.split) as u8;
        block(b.0)
            .cmp(&block(a.0))
            .then_with(|| self.mono.cmp(a.1, b.1))
            .then_with(|| b.0.cmp(&a.0))
    }

    pub fn is_global(&self) -> bool {
        self.mono.is_global()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial(e.to_vec())
    }

    #[test]
    fn local_order_puts_one_first() {
        let o = MonomialOrder::LocalDegRevLex;
        assert_eq!(o.cmp(&m(&[0, 0]), &m(&[1, 0])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[2, 0]), &m(&[0, 3])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 1])), Ordering::Greater);
    }

    #[test]
    fn block_order_eliminates() {
        let o = MonomialOrder::Block(vec![true, false, false]);
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 5, 5])), Ordering::Greater);
    }

    fn orders() -> Vec<MonomialOrder> {
        vec![
            MonomialOrder::Lex,
            MonomialOrder::DegRevLex,
            MonomialOrder::Block(vec![false, true, false]),
            MonomialOrder::LocalDegRevLex,
        ]
    }

    proptest! {
        #[test]
        fn multiplicative_and_total(a in prop::collection::vec(0u32..5, 3),
                                    b in prop::collection::vec(0u32..5, 3),
                                    w in prop::collection::vec(0u32..5, 3)) {
            let (a, b, w) = (m(&a), m(&b), m(&w));
            for o in orders() {
                let ab = o.cmp(&a, &b);
                prop_assert_eq!(ab, o.cmp(&a.mul(&w), &b.mul(&w)));
                prop_assert_eq!(ab == Ordering::Equal, a == b);
                let one = Monomial::one(3);
                if o.is_global() {
                    prop_assert!(o.cmp(&one, &a) != Ordering::Greater);
                } else {
                    prop_assert!(o.cmp(&a, &one) != Ordering::Greater);
                }
            }
        }
    }
}
