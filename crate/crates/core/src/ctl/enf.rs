use super::formula::Formula;

/// CTL restricted to the adequate existential fragment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NormalFormula {
    True,
    Atom(String),
    Not(Box<NormalFormula>),
    And(Box<NormalFormula>, Box<NormalFormula>),
    EX(Box<NormalFormula>),
    EU(Box<NormalFormula>, Box<NormalFormula>),
    EG(Box<NormalFormula>),
}

use NormalFormula as N;

// Collapses double negation so that e.g. AG !p does not become
// !E[true U !!p].
fn neg(f: N) -> N {
    match f {
        N::Not(inner) => *inner,
        other => N::Not(Box::new(other)),
    }
}

fn and(a: N, b: N) -> N {
    N::And(Box::new(a), Box::new(b))
}

fn or(a: N, b: N) -> N {
    neg(and(neg(a), neg(b)))
}

fn eu(a: N, b: N) -> N {
    N::EU(Box::new(a), Box::new(b))
}

fn eg(f: N) -> N {
    N::EG(Box::new(f))
}

/// Rewrites `f` into existential normal form.
pub fn to_enf(f: &Formula) -> NormalFormula {
    match f {
        Formula::True => N::True,
        Formula::False => neg(N::True),
        Formula::Atom(name) => N::Atom(name.clone()),
        Formula::Not(g) => neg(to_enf(g)),
        Formula::And(a, b) => and(to_enf(a), to_enf(b)),
        Formula::Or(a, b) => or(to_enf(a), to_enf(b)),
        Formula::Implies(a, b) => neg(and(to_enf(a), neg(to_enf(b)))),
        Formula::EX(g) => N::EX(Box::new(to_enf(g))),
        Formula::AX(g) => neg(N::EX(Box::new(neg(to_enf(g))))),
        Formula::EF(g) => eu(N::True, to_enf(g)),
        Formula::AF(g) => neg(eg(neg(to_enf(g)))),
        Formula::EG(g) => eg(to_enf(g)),
        Formula::AG(g) => neg(eu(N::True, neg(to_enf(g)))),
        Formula::EU(a, b) => eu(to_enf(a), to_enf(b)),
        Formula::AU(a, b) => {
            // A[a U b] = !(E[!b U (!a & !b)] | EG !b)
            let (a, b) = (to_enf(a), to_enf(b));
            let stuck = eu(neg(b.clone()), and(neg(a), neg(b.clone())));
            neg(or(stuck, eg(neg(b))))
        }
    }
}
