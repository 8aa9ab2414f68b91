//! Structural crossover: midpoints of integers, recursion on matching
//! classes.

use rand::Rng;

use crate::algebra::Term;

fn mid(a: u32, b: u32) -> u32 {
    ((a as u64 + b as u64 + 1) / 2) as u32
}

/// Crosses two terms of the same sort.
///
/// # Panics
/// If the sorts differ.
pub fn crossover<R: Rng + ?Sized>(t1: &Term, t2: &Term, rng: &mut R) -> Term {
    assert_eq!(t1.sort(), t2.sort(), "crossover needs terms of one sort");
    if t1.name() == t2.name() {
        return same_class(t1, t2, rng);
    }
    let (own, other) = if rng.gen() { (t1, t2) } else { (t2, t1) };
    adopt(own, other, rng)
}

fn same_class<R: Rng + ?Sized>(t1: &Term, t2: &Term, rng: &mut R) -> Term {
    let mut x = |a: &Term, b: &Term| Box::new(crossover(a, b, rng));
    match (t1, t2) {
        (Term::Insert(a), Term::Insert(b)) => Term::Insert(mid(*a, *b)),
        (Term::Lds(a, b, c), Term::Lds(d, e, f)) => Term::Lds(mid(*a, *d), mid(*b, *e), mid(*c, *f)),
        (Term::Chain(a, b), Term::Chain(c, d)) => Term::Chain(mid(*a, *c), mid(*b, *d)),
        (Term::Tree(a, b, c), Term::Tree(d, e, f)) => Term::Tree(mid(*a, *d), mid(*b, *e), mid(*c, *f)),
        (Term::Do(a, b), Term::Do(c, d)) => {
            let l = x(a, c);
            Term::Do(l, x(b, d))
        }
        (Term::Forall(a, b), Term::Forall(c, d)) => {
            let l = x(a, c);
            Term::Forall(l, x(b, d))
        }
        (Term::Then(a, b), Term::Then(c, d)) => {
            let l = x(a, c);
            Term::Then(l, x(b, d))
        }
        (Term::Lns(a, b, c), Term::Lns(d, e, f)) => Term::Lns(mid(*a, *d), mid(*b, *e), x(c, f)),
        (Term::Loop(a, b), Term::Loop(c, d)) => Term::Loop(mid(*a, *c), x(b, d)),
        _ => unreachable!("classes differ"),
    }
}

/// Keeps the class of `own`. Each slot is crossed with the first sub-term
/// of `other` (pre-order) of the same class, failing that of the same sort;
/// a leaf `own` is crossed with a same-class sub-term of `other` if any.
fn adopt<R: Rng + ?Sized>(own: &Term, other: &Term, rng: &mut R) -> Term {
    let fill = |slot: &Term, rng: &mut R| -> Box<Term> {
        let same_class = find(other, &|t| t.name() == slot.name());
        // FORALL heads must stay LDS, which same-class matching guarantees.
        let partner = same_class.or_else(|| {
            (slot.name() != "LDS")
                .then(|| find(other, &|t| t.sort() == slot.sort()))
                .flatten()
        });
        Box::new(match partner {
            Some(p) => crossover(slot, p, rng),
            None => slot.clone(),
        })
    };
    match own {
        Term::Insert(..) | Term::Lds(..) | Term::Chain(..) | Term::Tree(..) => {
            match find(other, &|t| t.name() == own.name()) {
                Some(p) => same_class(own, p, rng),
                None => own.clone(),
            }
        }
        Term::Do(a, b) => {
            let l = fill(a, rng);
            Term::Do(l, fill(b, rng))
        }
        Term::Forall(a, b) => {
            let l = fill(a, rng);
            Term::Forall(l, fill(b, rng))
        }
        Term::Then(a, b) => {
            let l = fill(a, rng);
            Term::Then(l, fill(b, rng))
        }
        Term::Lns(n, h, b) => Term::Lns(*n, *h, fill(b, rng)),
        Term::Loop(n, b) => Term::Loop(*n, fill(b, rng)),
    }
}

fn find<'a>(t: &'a Term, pred: &dyn Fn(&Term) -> bool) -> Option<&'a Term> {
    if pred(t) {
        return Some(t);
    }
    t.children().into_iter().find_map(|c| find(c, pred))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_term, random_term, Sort};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn integer_midpoints() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(crossover(&p("INSERT(1)"), &p("INSERT(3)"), &mut rng), p("INSERT(2)"));
        assert_eq!(crossover(&p("INSERT(1)"), &p("INSERT(2)"), &mut rng), p("INSERT(2)"));
        assert_eq!(
            crossover(&p("DO(LDS(3,3,100),CHAIN(80,2))"), &p("DO(LDS(1,0,0),CHAIN(10,1))"), &mut rng),
            p("DO(LDS(2,2,50),CHAIN(45,2))")
        );
    }

    #[test]
    fn self_cross_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for k in 0..300 {
            let sort = if k % 2 == 0 { Sort::Build } else { Sort::Optimize };
            let t = random_term(sort, 0, &mut rng);
            assert_eq!(crossover(&t, &t, &mut rng), t);
        }
    }

    #[test]
    fn mixed_classes() {
        let a = p("CHAIN(10,1)");
        let b = p("LOOP(4,CHAIN(20,2))");
        let mut seen = std::collections::BTreeSet::new();
        for seed in 0..1000 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = crossover(&a, &b, &mut rng);
            assert!(c.check().is_ok());
            assert_eq!(c.sort(), Sort::Optimize);
            seen.insert(c.to_string());
        }
        let seen: Vec<_> = seen.into_iter().collect();
        assert_eq!(seen, ["CHAIN(15,2)", "LOOP(4,CHAIN(15,2))"]);
    }

    #[test]
    fn random_pairs_stay_sorted() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for k in 0..1000 {
            let sort = if k % 2 == 0 { Sort::Build } else { Sort::Optimize };
            let a = random_term(sort, 0, &mut rng);
            let b = random_term(sort, 0, &mut rng);
            let c = crossover(&a, &b, &mut rng);
            assert_eq!(c.sort(), sort);
            assert!(c.check().is_ok(), "{a} x {b} = {c}");
            assert_eq!(parse_term(&c.to_string()).unwrap(), c);
        }
    }

    #[test]
    #[should_panic(expected = "one sort")]
    fn sorts_must_match() {
        crossover(&p("INSERT(1)"), &p("CHAIN(1,1)"), &mut ChaCha8Rng::seed_from_u64(0));
    }
}
