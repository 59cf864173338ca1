//! The unimodularity product equation and its solvability predicates.
//!
//! For a vertical dual circuit of length `k` in a `v`-thick complex, the
//! unimodularity condition reduces to the Diophantine equation
//!
//! ```text
//!   a_1 a_2 … a_k  =  (v - a_1)(v - a_2) … (v - a_k),   1 <= a_j <= v - 1.
//! ```
//!
//! This module provides an exhaustive search over nondecreasing tuples
//! (with sound pruning and an explicit work budget, so "no solutions" and
//! "search truncated" are never conflated), closed-form solution families,
//! and number-theoretic predicates that prove emptiness for certain `(v, k)`.
//!
//! The predicates are advisory: they never overrule the exhaustive search.
//! [`consistency_check`] cross-validates the two and reports any
//! disagreement as a hard error, which would indicate an implementation bug.

use std::collections::BTreeSet;

/// How much of the search to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Stop at the first solution.
    First,
    /// Enumerate all solutions.
    All,
    /// Enumerate all solutions (the count is what the caller wants; the
    /// solutions are retained anyway since the sizes are small).
    Count,
}

/// Result of [`solve_unimod`].  `solutions` holds nondecreasing tuples in
/// lexicographic order; `complete` distinguishes an exhausted search from a
/// truncated one.
#[derive(Clone, Debug)]
pub struct UnimodSearch {
    pub v: u64,
    pub k: usize,
    pub mode: SearchMode,
    pub complete: bool,
    pub nodes_explored: u64,
    pub solutions: Vec<Vec<u64>>,
}

impl UnimodSearch {
    pub fn count(&self) -> usize {
        self.solutions.len()
    }
}

/// Default node budget for the search; far more than any desk-scale
/// instance needs, but it keeps pathological inputs from hanging.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Exhaustive search for solutions of the product equation, enumerating
/// nondecreasing tuples `a_1 <= … <= a_k`.
///
/// Pruning: with partial products `P = prod a_j`, `Q = prod (v - a_j)` and
/// `r` slots left, every completion using values `>= a` has final left
/// side `>= P a^r` and final right side `<= Q (v-a)^r`; once the lower
/// bound exceeds the upper bound, no larger `a` can work either.
pub fn solve_unimod(v: u64, k: usize, mode: SearchMode, budget: Option<u64>) -> UnimodSearch {
    assert!(v >= 2, "v must be at least 2");
    assert!(k >= 1, "k must be at least 1");
    let budget = budget.unwrap_or(DEFAULT_BUDGET);
    let mut out = UnimodSearch {
        v,
        k,
        mode,
        complete: true,
        nodes_explored: 0,
        solutions: Vec::new(),
    };
    let mut stack = vec![0u64; k];
    search(v, k, mode, budget, &mut stack, 0, 1, 1, 1, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn search(
    v: u64,
    k: usize,
    mode: SearchMode,
    budget: u64,
    tuple: &mut [u64],
    depth: usize,
    lo: u64,
    p: u128,
    q: u128,
    out: &mut UnimodSearch,
) -> bool {
    // Returns false to abort the whole search (budget hit or First found).
    out.nodes_explored += 1;
    if out.nodes_explored > budget {
        out.complete = false;
        return false;
    }
    if depth == k {
        if p == q {
            out.solutions.push(tuple.to_vec());
            if mode == SearchMode::First {
                return false;
            }
        }
        return true;
    }
    let rem = (k - depth - 1) as u32;
    for a in lo..v {
        let p2 = p * a as u128;
        let q2 = q * (v - a) as u128;
        // Lower bound for the left side exceeds upper bound for the right:
        // hopeless for this a and every larger one.
        if p2 * (a as u128).pow(rem) > q2 * ((v - a) as u128).pow(rem) {
            break;
        }
        // Upper bound for the left side below lower bound for the right:
        // hopeless for this a, but a larger a raises the left side.
        if p2 * ((v - 1) as u128).pow(rem) < q2 {
            continue;
        }
        tuple[depth] = a;
        if !search(v, k, mode, budget, tuple, depth + 1, a, p2, q2, out) {
            return false;
        }
    }
    true
}

/// All distinct permutations of a solution tuple, sorted.
pub fn expand_orbit(sol: &[u64]) -> Vec<Vec<u64>> {
    let mut set = BTreeSet::new();
    let mut tuple = sol.to_vec();
    permute(&mut tuple, 0, &mut set);
    set.into_iter().collect()
}

fn permute(tuple: &mut Vec<u64>, at: usize, out: &mut BTreeSet<Vec<u64>>) {
    if at == tuple.len() {
        out.insert(tuple.clone());
        return;
    }
    for i in at..tuple.len() {
        tuple.swap(at, i);
        permute(tuple, at + 1, out);
        tuple.swap(at, i);
    }
}

/// Largest even `b` tried by the closed-form family below and by the
/// decision procedure's composite-`F` clause.
pub const B_SCAN_MAX: u64 = 64;

/// A closed-form solution when one applies:
///
/// * `k` even: the pairing `(1, v-1, 2, v-2, …)` — each pair `(j, v-j)`
///   contributes the same factor to both sides;
/// * `v` even: the constant tuple `(v/2, …, v/2)`;
/// * `v` odd, `k >= 3` odd and `(b+1)(b^2+1) | v` for some even `b`: with
///   `t = v / ((b+1)(b^2+1))`, the triple
///   `(v - (b+1)t, (b^2+1)t, (b^2+1)t)` solves the equation, padded to
///   length `k` with `(1, v-1)` pairs.
pub fn easy_solutions(v: u64, k: usize) -> Option<Vec<u64>> {
    assert!(v >= 2 && k >= 1);
    if k % 2 == 0 {
        if (k / 2) as u64 >= v {
            return None;
        }
        let mut sol = Vec::with_capacity(k);
        for j in 1..=(k as u64 / 2) {
            sol.push(j);
            sol.push(v - j);
        }
        return Some(sol);
    }
    if v % 2 == 0 {
        return Some(vec![v / 2; k]);
    }
    if k >= 3 {
        for b in (2..=B_SCAN_MAX).step_by(2) {
            let m = (b + 1) * (b * b + 1);
            if v % m == 0 {
                let t = v / m;
                let mut sol = vec![v - (b + 1) * t, (b * b + 1) * t, (b * b + 1) * t];
                for j in 1..=((k as u64 - 3) / 2) {
                    sol.push(j);
                    sol.push(v - j);
                }
                return Some(sol);
            }
        }
    }
    None
}

/// Verify a tuple against the product equation.
pub fn is_solution(v: u64, sol: &[u64]) -> bool {
    sol.iter().all(|&a| a >= 1 && a <= v - 1)
        && sol.iter().map(|&a| a as u128).product::<u128>()
            == sol.iter().map(|&a| (v - a) as u128).product::<u128>()
}

/// Trial-division primality; ample for the sizes involved.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Write an odd `n >= 3` as `q^e` for an odd prime `q`, if possible.
pub fn odd_prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 3 || n % 2 == 0 {
        return None;
    }
    let mut q = 3;
    while q * q <= n {
        if n % q == 0 {
            let mut m = n;
            let mut e = 0;
            while m % q == 0 {
                m /= q;
                e += 1;
            }
            return if m == 1 { Some((q, e)) } else { None };
        }
        q += 2;
    }
    Some((n, 1)) // n itself is an odd prime
}

/// Write `v = 3 q^e` with `q` an odd prime different from 3, if possible.
pub fn factor_3qn(v: u64) -> Option<(u64, u32)> {
    if v % 3 != 0 {
        return None;
    }
    match odd_prime_power(v / 3) {
        Some((q, e)) if q != 3 => Some((q, e)),
        _ => None,
    }
}

/// The product equation has no solutions when `v` is an odd prime power
/// and `k` is odd: comparing q-adic valuations of the two sides forces a
/// parity contradiction.
pub fn no_solution_prime_power(v: u64, k: usize) -> bool {
    k % 2 == 1 && odd_prime_power(v).is_some()
}

/// Multiplicative order of 2 modulo an odd prime `q`.
pub fn order2_mod(q: u64) -> u64 {
    assert!(q % 2 == 1 && is_prime(q), "order2_mod wants an odd prime");
    let mut pow = 2 % q;
    let mut ord = 1;
    while pow != 1 {
        pow = pow * 2 % q;
        ord += 1;
        assert!(ord < q, "order computation runaway");
    }
    ord
}

/// Details of the `v = 3 q^n` obstruction when it applies.
#[derive(Clone, Debug)]
pub struct Obstruction3qn {
    pub q: u64,
    pub n: u32,
    pub ord2: u64,
    /// `q ≡ 3 (mod 8)` always puts `q` in the obstructed family (2 is then
    /// a quadratic nonresidue with `ν_2(ord) = 1`); reported separately.
    pub q_mod8_is_3: bool,
}

/// The product equation has no solutions when `k` is odd, `v = 3 q^n` for
/// an odd prime `q != 3`, and the multiplicative order of 2 modulo `q` is
/// `≡ 2 (mod 4)`.
pub fn obstruction_3qn(v: u64, k: usize) -> Option<Obstruction3qn> {
    if k % 2 == 0 {
        return None;
    }
    let (q, n) = factor_3qn(v)?;
    let ord2 = order2_mod(q);
    if ord2 % 4 == 2 {
        Some(Obstruction3qn { q, n, ord2, q_mod8_is_3: q % 8 == 3 })
    } else {
        None
    }
}

/// Smallest `m >= 0` with `2^m ≡ (-1)^(m+1) (mod q)`, if one exists.
/// Solutions are periodic with period `lcm(ord_q(2), 2)`, so scanning
/// `m < 2 ord_q(2)` is exhaustive.  When the order of 2 is `≡ 2 (mod 4)`
/// no such `m` exists, which is exactly the obstruction above.
pub fn exists_m_condition(q: u64) -> Option<u64> {
    assert!(q % 2 == 1 && is_prime(q));
    let ord = order2_mod(q);
    let mut pow = 1u64; // 2^m mod q
    for m in 0..(2 * ord) {
        let want = if m % 2 == 0 { q - 1 } else { 1 }; // (-1)^(m+1) mod q
        if pow == want % q {
            return Some(m);
        }
        pow = pow * 2 % q;
    }
    None
}

/// What `explain` can conclude for a pair `(v, k)` without running the
/// exhaustive search.
#[derive(Clone, Debug)]
pub struct Explanation {
    /// `Some(true)`: a closed-form solution exists.  `Some(false)`: provably
    /// no solutions.  `None`: no applicable criterion; the exhaustive
    /// search is authoritative.
    pub verdict: Option<bool>,
    pub reasons: Vec<String>,
    pub easy: Option<Vec<u64>>,
}

/// Apply the closed forms and obstructions to `(v, k)`.
pub fn explain(v: u64, k: usize) -> Explanation {
    let mut reasons = Vec::new();
    if let Some(sol) = easy_solutions(v, k) {
        let how = if k % 2 == 0 {
            "k even: pair (j, v-j) factors cancel"
        } else if v % 2 == 0 {
            "v even: the constant v/2 tuple"
        } else {
            "odd v divisible by (b+1)(b^2+1) for an even b: closed-form triple"
        };
        reasons.push(format!("constructive solution {:?} ({})", sol, how));
        return Explanation { verdict: Some(true), reasons, easy: Some(sol) };
    }
    if no_solution_prime_power(v, k) {
        let (q, e) = odd_prime_power(v).unwrap();
        reasons.push(format!(
            "no solutions: v = {}^{} is an odd prime power and k is odd",
            q, e
        ));
        return Explanation { verdict: Some(false), reasons, easy: None };
    }
    if let Some(ob) = obstruction_3qn(v, k) {
        reasons.push(format!(
            "no solutions: v = 3·{}^{} with ord_{}(2) = {} ≡ 2 (mod 4) and k odd",
            ob.q, ob.n, ob.q, ob.ord2
        ));
        if ob.q_mod8_is_3 {
            reasons.push(format!("q = {} ≡ 3 (mod 8): member of the always-obstructed family", ob.q));
        }
        return Explanation { verdict: Some(false), reasons, easy: None };
    }
    reasons.push("no applicable criterion; exhaustive search is authoritative".into());
    Explanation { verdict: None, reasons, easy: None }
}

/// Cross-validate predicates against an exhaustive search result.  Returns
/// an error if a predicate contradicts the search — that would mean a bug,
/// and callers should treat it as fatal.
pub fn consistency_check(search: &UnimodSearch) -> Result<(), String> {
    let e = explain(search.v, search.k);
    match e.verdict {
        Some(false) if !search.solutions.is_empty() => Err(format!(
            "predicate claims no solutions for (v={}, k={}) but the search found {:?}",
            search.v, search.k, search.solutions[0]
        )),
        Some(true) if search.complete && search.solutions.is_empty() => Err(format!(
            "predicate claims a solution for (v={}, k={}) but the exhaustive search found none",
            search.v, search.k
        )),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_exact_solution_sets() {
        let s = solve_unimod(4, 3, SearchMode::All, None);
        assert!(s.complete);
        assert_eq!(s.solutions, vec![vec![1, 2, 3], vec![2, 2, 2]]);

        let s = solve_unimod(6, 3, SearchMode::All, None);
        assert_eq!(s.solutions, vec![vec![1, 3, 5], vec![2, 3, 4], vec![3, 3, 3]]);

        let s = solve_unimod(15, 3, SearchMode::All, None);
        assert_eq!(s.solutions, vec![vec![3, 10, 10], vec![5, 5, 12]]);
    }

    #[test]
    fn frozen_counts() {
        // Odd v in 3..=33: nonempty only at v = 15 for k = 3.
        for v in (3..=33u64).step_by(2) {
            let s = solve_unimod(v, 3, SearchMode::Count, None);
            assert!(s.complete);
            if v == 15 {
                assert_eq!(s.count(), 2, "v = {}", v);
            } else {
                assert_eq!(s.count(), 0, "v = {}", v);
            }
        }
        // k = 5 spot values.
        assert_eq!(solve_unimod(15, 5, SearchMode::Count, None).count(), 16);
        assert_eq!(solve_unimod(21, 5, SearchMode::Count, None).count(), 6);
        assert_eq!(solve_unimod(33, 5, SearchMode::Count, None).count(), 0);
        // Even k is never empty.
        assert_eq!(solve_unimod(7, 4, SearchMode::Count, None).count(), 6);
    }

    #[test]
    fn first_mode_and_budget() {
        let s = solve_unimod(30, 3, SearchMode::First, None);
        assert!(!s.solutions.is_empty());
        assert!(is_solution(30, &s.solutions[0]));

        let s = solve_unimod(33, 5, SearchMode::All, Some(10));
        assert!(!s.complete, "tiny budget must report truncation");
        // Truncated-and-empty is not the same as proven-empty.
        assert!(s.solutions.is_empty());
    }

    #[test]
    fn orbit_expansion() {
        let orbit = expand_orbit(&[2, 2, 3]);
        assert_eq!(orbit, vec![vec![2, 2, 3], vec![2, 3, 2], vec![3, 2, 2]]);
        assert_eq!(expand_orbit(&[1, 2, 3]).len(), 6);
    }

    #[test]
    fn easy_solution_forms() {
        assert_eq!(easy_solutions(7, 4), Some(vec![1, 6, 2, 5]));
        assert_eq!(easy_solutions(30, 3), Some(vec![15, 15, 15]));
        assert_eq!(easy_solutions(15, 5), Some(vec![12, 5, 5, 1, 14]));
        assert_eq!(easy_solutions(15, 3), Some(vec![12, 5, 5]));
        assert_eq!(easy_solutions(9, 3), None);
        for (v, k) in [(7u64, 4usize), (30, 3), (15, 5), (15, 3), (8, 1)] {
            if let Some(sol) = easy_solutions(v, k) {
                assert!(is_solution(v, &sol), "easy solution invalid for ({}, {})", v, k);
                assert_eq!(sol.len(), k);
            }
        }
    }

    #[test]
    fn prime_power_predicate() {
        assert!(no_solution_prime_power(27, 3));
        assert!(no_solution_prime_power(7, 5));
        assert!(!no_solution_prime_power(15, 3));
        assert!(!no_solution_prime_power(9, 4)); // k even
        assert!(!no_solution_prime_power(33, 3)); // 33 = 3·11 is not a prime power
    }

    #[test]
    fn order_and_obstruction() {
        assert_eq!(order2_mod(7), 3);
        assert_eq!(order2_mod(11), 10);
        assert_eq!(order2_mod(3), 2);

        let ob = obstruction_3qn(33, 3).expect("33 = 3·11 is obstructed");
        assert_eq!(ob.q, 11);
        assert_eq!(ob.ord2, 10);
        assert!(ob.q_mod8_is_3);
        assert!(obstruction_3qn(21, 3).is_none()); // ord_7(2) = 3 is odd
        assert!(obstruction_3qn(33, 4).is_none()); // k even

        assert_eq!(exists_m_condition(7), Some(3));
        assert_eq!(exists_m_condition(11), None);
        assert_eq!(exists_m_condition(3), None);
    }

    #[test]
    fn obstruction_family_implies_no_m() {
        // ord_q(2) ≡ 2 (mod 4) forces 2^m ≡ (-1)^(m+1) to be unsolvable;
        // check the two predicates agree on all small odd primes.
        for q in (3..100u64).filter(|&q| is_prime(q)) {
            if order2_mod(q) % 4 == 2 {
                assert_eq!(exists_m_condition(q), None, "q = {}", q);
            }
        }
    }

    #[test]
    fn predicates_never_overrule_search() {
        for v in 3..=33u64 {
            for k in [3usize, 4, 5] {
                let s = solve_unimod(v, k, SearchMode::All, None);
                consistency_check(&s).unwrap();
            }
        }
    }

    #[test]
    fn empirical_holes_have_no_predicate() {
        // (21, 3) has no solutions but no predicate covers it: ord_7(2) = 3.
        let s = solve_unimod(21, 3, SearchMode::All, None);
        assert!(s.complete && s.solutions.is_empty());
        assert_eq!(explain(21, 3).verdict, None);
    }
}
