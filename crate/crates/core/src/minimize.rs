//! Two-level minimization of a node function against its don't-cares

use crate::netlist::{Cube, Sop};
use crate::truth::{Isf, TruthTable};

/// Irredundant sum of products implementing an incompletely specified function
///
/// The cover `F` satisfies `onset <= F <= onset + dcset`. Every cube is prime with respect to the
/// upper bound and no cube can be removed without uncovering part of the on-set.
pub fn isop(isf: &Isf) -> Sop {
    let n = isf.num_vars();
    let upper = isf.upper();
    let (cubes, _) = isop_rec(isf.onset(), &upper, 0, n);
    let cubes = make_prime(cubes, &upper, n);
    let cubes = make_irredundant(cubes, isf.onset(), n);
    Sop::new(n, cubes)
}

/// Irredundant cover of a completely specified function
pub fn isop_exact(f: &TruthTable) -> Sop {
    isop(&Isf::from_function(f.clone()))
}

/// Minato-Morreale recursion; returns the cubes and the function they cover
fn isop_rec(lower: &TruthTable, upper: &TruthTable, first_var: usize, n: usize) -> (Vec<Cube>, TruthTable) {
    if lower.is_zero() {
        return (Vec::new(), TruthTable::zero(n));
    }
    if upper.is_one() {
        return (vec![Cube::full()], TruthTable::one(n));
    }
    let var = (first_var..n)
        .find(|v| lower.depends_on(*v) || upper.depends_on(*v))
        .expect("a non-constant interval depends on some variable");
    let (l0, l1) = (lower.cofactor(var, false), lower.cofactor(var, true));
    let (u0, u1) = (upper.cofactor(var, false), upper.cofactor(var, true));

    let (c0, f0) = isop_rec(&(&l0 & &!&u1), &u0, var + 1, n);
    let (c1, f1) = isop_rec(&(&l1 & &!&u0), &u1, var + 1, n);
    let rest = (&l0 & &!&f0) | (&l1 & &!&f1);
    let (cs, fs) = isop_rec(&rest, &(&u0 & &u1), var + 1, n);

    let x = TruthTable::var(n, var);
    let covered = (&!&x & &f0) | (&x & &f1) | fs;
    let mut cubes = Vec::with_capacity(c0.len() + c1.len() + cs.len());
    cubes.extend(c0.into_iter().map(|c| c.with_literal(var, Some(false))));
    cubes.extend(c1.into_iter().map(|c| c.with_literal(var, Some(true))));
    cubes.extend(cs);
    (cubes, covered)
}

/// Drop literals whose removal keeps the cube inside the upper bound
fn make_prime(cubes: Vec<Cube>, upper: &TruthTable, n: usize) -> Vec<Cube> {
    cubes
        .into_iter()
        .map(|mut c| {
            for v in 0..n {
                if c.literal(v).is_some() {
                    let expanded = c.with_literal(v, None);
                    if expanded.truth_table(n).implies(upper) {
                        c = expanded;
                    }
                }
            }
            c
        })
        .collect()
}

/// Drop cubes whose on-set contribution is covered by the remaining cubes
fn make_irredundant(mut cubes: Vec<Cube>, lower: &TruthTable, n: usize) -> Vec<Cube> {
    cubes.dedup();
    let mut i = 0;
    while i < cubes.len() {
        let others = cubes
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .fold(TruthTable::zero(n), |acc, (_, c)| acc | c.truth_table(n));
        if lower.implies(&others) {
            cubes.remove(i);
        } else {
            i += 1;
        }
    }
    cubes
}

/// Remove variables that appear in no cube
///
/// Returns the reduced SOP and, for each of its variables, the index of the original variable.
pub fn support_reduce(sop: &Sop) -> (Sop, Vec<usize>) {
    let support = sop.support();
    let kept: Vec<usize> = (0..sop.num_vars()).filter(|v| support >> v & 1 != 0).collect();
    (sop.restrict_vars(&kept), kept)
}

/// Whether `new` should replace `old`: strictly fewer literals; ties keep the old function
pub fn is_smaller(old: &Sop, new: &Sop) -> bool {
    new.num_literals() < old.num_literals()
}

/// Pick `new` if it has strictly fewer literals than `old`
pub fn accept_if_smaller<'a>(old: &'a Sop, new: &'a Sop) -> &'a Sop {
    if is_smaller(old, new) {
        new
    } else {
        old
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check_cover(isf: &Isf, sop: &Sop) {
        let f = sop.truth_table();
        assert!(isf.is_implemented_by(&f), "{sop:?} does not implement {isf:?}");
    }

    #[test]
    fn constant_covers() {
        let one = isop(&Isf::from_function(TruthTable::one(3)));
        assert_eq!(one.as_constant(), Some(true));
        assert_eq!(one.num_literals(), 0);
        let zero = isop(&Isf::from_function(TruthTable::zero(3)));
        assert_eq!(zero.as_constant(), Some(false));
    }

    #[test]
    fn dont_care_absorbs_literal() {
        // on-set {ab}, dc {a!b} -> a
        let isf = Isf::new(TruthTable::from_minterms(2, [3]), TruthTable::from_minterms(2, [1]));
        let sop = isop(&isf);
        assert_eq!(sop.num_literals(), 1);
        assert_eq!(sop.cubes(), &[Cube::from_masks(1, 0)]);
    }

    #[test]
    fn xor_needs_two_cubes() {
        let f = TruthTable::var(2, 0) ^ TruthTable::var(2, 1);
        let sop = isop_exact(&f);
        assert_eq!(sop.cubes().len(), 2);
        assert_eq!(sop.num_literals(), 4);
        assert_eq!(sop.truth_table(), f);
    }

    #[test]
    fn support_reduce_drops_unused() {
        let sop = Sop::new(2, vec![Cube::from_masks(1, 0)]);
        let (r, kept) = support_reduce(&sop);
        assert_eq!(kept, vec![0]);
        assert!(r.is_buffer());
        let (r, kept) = support_reduce(&Sop::one(3));
        assert!(kept.is_empty());
        assert_eq!(r.num_vars(), 0);
    }

    #[test]
    fn acceptance_rule() {
        let two = Sop::and(2);
        let one = Sop::buffer();
        assert_eq!(accept_if_smaller(&two, &one), &one);
        let other = Sop::inverter();
        assert_eq!(accept_if_smaller(&one, &other), &one);
    }

    fn arb_isf(max_vars: usize) -> impl Strategy<Value = Isf> {
        (0..=max_vars).prop_flat_map(|n| {
            let bits = 1usize << n;
            (Just(n), proptest::collection::vec(0u8..3, bits)).prop_map(|(n, vals)| {
                let on = TruthTable::from_fn(n, |m| vals[m] == 1);
                let dc = TruthTable::from_fn(n, |m| vals[m] == 2);
                Isf::new(on, dc)
            })
        })
    }

    proptest! {
        #[test]
        fn cover_is_prime_and_irredundant(isf in arb_isf(7)) {
            let n = isf.num_vars();
            let sop = isop(&isf);
            check_cover(&isf, &sop);
            let upper = isf.upper();
            for (i, c) in sop.cubes().iter().enumerate() {
                for v in 0..n {
                    if c.literal(v).is_some() {
                        let e = c.with_literal(v, None);
                        prop_assert!(!e.truth_table(n).implies(&upper));
                    }
                }
                let others = sop.cubes().iter().enumerate().filter(|(j, _)| *j != i)
                    .fold(TruthTable::zero(n), |acc, (_, c)| acc | c.truth_table(n));
                prop_assert!(!isf.onset().implies(&others));
            }
            prop_assert_eq!(isop(&isf), sop);
        }

        #[test]
        fn support_reduce_preserves_function(isf in arb_isf(6)) {
            let n = isf.num_vars();
            let sop = isop(&isf);
            let (r, kept) = support_reduce(&sop);
            prop_assert_eq!(r.extend_vars(n, &kept).truth_table(), sop.truth_table());
        }
    }
}
