//! Searching for solutions along a fixed variable ordering.
//!
//! The whole module hinges on one availability rule: a value for the current
//! variable is *available* when the extended prefix assignment stays
//! compatible with every constraint whose scope lies entirely inside the
//! assigned prefix. Constraints straddling the prefix boundary are ignored
//! until their last variable is reached.
//!
//! [`greedy_run`] never reassigns; a failed run certifies that the instance
//! is not backtrack-free under the given ordering. [`backtrack_solve`] is a
//! complete chronological solver whose dead-end counter makes backtrack-free
//! runs observable. [`exact_backtrack_free`] decides backtrack-freeness
//! under one ordering exactly, and [`is_backtrack_free`] quantifies over
//! orderings.

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::hypergraph::{compute_width, Hypergraph, VariableOrdering};
use crate::model::{check_solution, Assignment, Instance};
use crate::rng::{derive_seed, stream, tag};

/// Default cap on solver nodes (value-assignment attempts).
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;
/// Default cap on enumeration work for the exact checks.
pub const DEFAULT_ENUM_BUDGET: u64 = 10_000_000;
/// Orderings are enumerated exhaustively up to this many variables.
pub const MAX_ORDERING_ENUMERATION: usize = 8;

/// How a search picks among available values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueRule {
    /// Smallest available value.
    LexMin,
    /// First available value in a seeded per-variable shuffle of the domain.
    /// A pure function of `(seed, variable, available set)`.
    SeededRandom(u64),
}

impl ValueRule {
    /// The order in which values are tried for `var`.
    fn try_order(&self, var: usize, d: usize) -> Vec<usize> {
        let mut order: Vec<usize> = (0..d).collect();
        if let ValueRule::SeededRandom(seed) = self {
            let mut rng = stream(derive_seed(*seed, &[tag::VALUE_ORDER, var as u64]));
            order.shuffle(&mut rng);
        }
        order
    }
}

/// Result of a single greedy pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyOutcome {
    pub success: bool,
    /// Total on success, partial otherwise.
    pub assignment: Assignment,
    /// The variable that had no available value, when the run got stuck.
    pub stuck_at: Option<usize>,
    /// Variables processed, including the one that got stuck.
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Sat,
    Unsat,
}

/// Result of a complete backtracking search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub witness: Option<Assignment>,
    /// Retreats forced by a variable with no available value at all.
    pub dead_ends: u64,
    /// Value-assignment attempts.
    pub nodes_visited: u64,
}

/// Prefix-complete constraint checking shared by every search in here.
///
/// `completing[i]` lists the constraints whose scope becomes fully assigned
/// exactly when position `i` of the ordering is assigned; testing those and
/// only those implements the availability rule.
struct PrefixChecker<'a> {
    inst: &'a Instance,
    perm: Vec<usize>,
    completing: Vec<Vec<usize>>,
}

impl<'a> PrefixChecker<'a> {
    fn new(inst: &'a Instance, order: &VariableOrdering) -> Self {
        assert_eq!(order.len(), inst.n(), "ordering does not permute the instance variables");
        let rank = order.rank();
        let mut completing = vec![Vec::new(); inst.n()];
        for (ci, c) in inst.constraints.iter().enumerate() {
            let last = c.scope.iter().map(|&v| rank[v]).max().unwrap();
            completing[last].push(ci);
        }
        PrefixChecker { inst, perm: order.perm().to_vec(), completing }
    }

    /// Whether assigning `value` at position `pos` keeps the prefix
    /// compatible. `values` must already hold the prefix assignment.
    fn available(&self, values: &[Option<usize>], pos: usize, value: usize) -> bool {
        let var = self.perm[pos];
        let d = self.inst.d as u64;
        for &ci in &self.completing[pos] {
            let c = &self.inst.constraints[ci];
            let mut code = 0u64;
            for &v in &c.scope {
                let val = if v == var { value } else { values[v].expect("prefix variable assigned") };
                code = code * d + val as u64;
            }
            if !c.relation.contains(code) {
                return false;
            }
        }
        true
    }
}

/// Assign variables in order, never revisiting a choice.
///
/// A stuck step returns `success = false` with the offending variable, which
/// certifies that the instance is not backtrack-free under this ordering.
pub fn greedy_run(inst: &Instance, order: &VariableOrdering, rule: ValueRule) -> GreedyOutcome {
    let checker = PrefixChecker::new(inst, order);
    let mut values: Vec<Option<usize>> = vec![None; inst.n()];
    let mut steps = 0;
    for pos in 0..inst.n() {
        let var = checker.perm[pos];
        steps += 1;
        let chosen = rule
            .try_order(var, inst.d)
            .into_iter()
            .find(|&v| checker.available(&values, pos, v));
        match chosen {
            Some(v) => values[var] = Some(v),
            None => {
                return GreedyOutcome {
                    success: false,
                    assignment: collect(values),
                    stuck_at: Some(var),
                    steps,
                };
            }
        }
    }
    GreedyOutcome { success: true, assignment: collect(values), stuck_at: None, steps }
}

fn collect(values: Vec<Option<usize>>) -> Assignment {
    let mut a = Assignment::new(values.len());
    for (var, v) in values.into_iter().enumerate() {
        if let Some(v) = v {
            a.set(var, v);
        }
    }
    a
}

/// Complete chronological depth-first search in the given order, values
/// tried smallest first.
///
/// Exceeding `node_budget` aborts with [`Error::BudgetExhausted`] so sweeps
/// can report timeouts instead of mislabeling them.
pub fn backtrack_solve(inst: &Instance, order: &VariableOrdering, node_budget: u64) -> Result<SolveResult> {
    let checker = PrefixChecker::new(inst, order);
    let mut values: Vec<Option<usize>> = vec![None; inst.n()];
    let mut dead_ends = 0u64;
    let mut nodes = 0u64;
    let sat = dfs(&checker, inst.d, &mut values, 0, node_budget, &mut nodes, &mut dead_ends)?;
    let witness = sat.then(|| collect(values));
    Ok(SolveResult {
        status: if sat { SolveStatus::Sat } else { SolveStatus::Unsat },
        witness,
        dead_ends,
        nodes_visited: nodes,
    })
}

fn dfs(
    checker: &PrefixChecker,
    d: usize,
    values: &mut [Option<usize>],
    pos: usize,
    budget: u64,
    nodes: &mut u64,
    dead_ends: &mut u64,
) -> Result<bool> {
    if pos == checker.perm.len() {
        return Ok(true);
    }
    let var = checker.perm[pos];
    let mut any_available = false;
    for v in 0..d {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::budget(format!("solver exceeded the {budget}-node budget")));
        }
        if checker.available(values, pos, v) {
            any_available = true;
            values[var] = Some(v);
            if dfs(checker, d, values, pos + 1, budget, nodes, dead_ends)? {
                return Ok(true);
            }
            values[var] = None;
        }
    }
    if !any_available {
        *dead_ends += 1;
    }
    Ok(false)
}

/// Exhaustive satisfiability test over all `d^n` assignments.
pub fn brute_force_sat(inst: &Instance, max_candidates: u64) -> Result<bool> {
    let n = inst.n();
    let d = inst.d as u64;
    let total = d
        .checked_pow(n as u32)
        .filter(|&t| t <= max_candidates)
        .ok_or_else(|| Error::budget(format!("d^n exceeds the {max_candidates}-candidate budget")))?;
    let mut values = vec![0usize; n];
    for _ in 0..total {
        let a = Assignment::from_values(values.clone());
        if check_solution(inst, &a)? {
            return Ok(true);
        }
        // Odometer increment.
        for slot in values.iter_mut().rev() {
            *slot += 1;
            if *slot < inst.d {
                break;
            }
            *slot = 0;
        }
    }
    Ok(false)
}

/// Decide backtrack-freeness under one ordering exactly.
///
/// Walks every prefix assignment that is compatible with the constraints
/// inside its prefix and demands an available value for the next variable.
/// `work_budget` caps the number of availability probes.
pub fn exact_backtrack_free(inst: &Instance, order: &VariableOrdering, work_budget: u64) -> Result<bool> {
    let checker = PrefixChecker::new(inst, order);
    let mut values: Vec<Option<usize>> = vec![None; inst.n()];
    let mut work = 0u64;
    extendable(&checker, inst.d, &mut values, 0, work_budget, &mut work)
}

fn extendable(
    checker: &PrefixChecker,
    d: usize,
    values: &mut [Option<usize>],
    pos: usize,
    budget: u64,
    work: &mut u64,
) -> Result<bool> {
    if pos == checker.perm.len() {
        return Ok(true);
    }
    let var = checker.perm[pos];
    *work += d as u64;
    if *work > budget {
        return Err(Error::budget(format!("enumeration exceeded the {budget}-probe budget")));
    }
    let available: Vec<usize> = (0..d).filter(|&v| checker.available(values, pos, v)).collect();
    if available.is_empty() {
        // A compatible prefix with no extension: not backtrack-free.
        return Ok(false);
    }
    for v in available {
        values[var] = Some(v);
        if !extendable(checker, d, values, pos + 1, budget, work)? {
            return Ok(false);
        }
    }
    values[var] = None;
    Ok(true)
}

/// Whether some ordering makes the instance backtrack-free.
///
/// Up to [`MAX_ORDERING_ENUMERATION`] variables every ordering is tried;
/// beyond that only the width-optimal ordering is, making the answer a
/// sufficient check at large `n`.
pub fn is_backtrack_free(inst: &Instance, work_budget: u64) -> Result<bool> {
    let hg = Hypergraph::from_instance(inst);
    if inst.n() <= MAX_ORDERING_ENUMERATION {
        let mut perm: Vec<usize> = (0..inst.n()).collect();
        let mut candidates = Vec::new();
        all_perms(&mut perm, 0, &mut |p| {
            candidates.push(VariableOrdering::from_perm(&hg, p.to_vec()).expect("valid permutation"));
        });
        is_backtrack_free_with(inst, &candidates, work_budget)
    } else {
        let (_, order) = compute_width(&hg);
        is_backtrack_free_with(inst, std::slice::from_ref(&order), work_budget)
    }
}

/// Backtrack-freeness over a caller-supplied candidate set of orderings.
pub fn is_backtrack_free_with(
    inst: &Instance,
    orderings: &[VariableOrdering],
    work_budget: u64,
) -> Result<bool> {
    let mut exhausted = None;
    for order in orderings {
        match exact_backtrack_free(inst, order, work_budget) {
            Ok(true) => return Ok(true),
            Ok(false) => {}
            Err(e) if e.is_budget() => exhausted = Some(e),
            Err(e) => return Err(e),
        }
    }
    match exhausted {
        // Some ordering was undecidable, so `false` would overclaim.
        Some(e) => Err(e),
        None => Ok(false),
    }
}

fn all_perms(items: &mut Vec<usize>, at: usize, f: &mut impl FnMut(&[usize])) {
    if at == items.len() {
        f(items);
        return;
    }
    for i in at..items.len() {
        items.swap(at, i);
        all_perms(items, at + 1, f);
        items.swap(at, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{generate, CodeSet, Constraint, GenParams, Model};

    fn tiny_params(n: usize, r: f64, seed: u64) -> GenParams {
        GenParams { n, k: 2, alpha: 0.55, p: 0.5, r, model: Model::Rd, seed }
    }

    fn width_ordering(inst: &Instance) -> VariableOrdering {
        compute_width(&Hypergraph::from_instance(inst)).1
    }

    fn unconstrained(n: usize, d: usize) -> Instance {
        Instance {
            params: GenParams { n, k: 2, alpha: 0.5, p: 0.5, r: 1.0, model: Model::Rd, seed: 0 },
            d,
            constraints: vec![],
        }
    }

    fn with_empty_relation(n: usize, d: usize, scope: Vec<usize>) -> Instance {
        let space = (d as u64).pow(scope.len() as u32);
        Instance {
            params: GenParams { n, k: scope.len(), alpha: 0.5, p: 0.5, r: 1.0, model: Model::Rd, seed: 0 },
            d,
            constraints: vec![Constraint { scope, relation: CodeSet::new(space) }],
        }
    }

    #[test]
    fn greedy_succeeds_without_constraints() {
        let inst = unconstrained(5, 3);
        let hg = Hypergraph::from_instance(&inst);
        for perm in [vec![0, 1, 2, 3, 4], vec![4, 2, 0, 1, 3]] {
            let order = VariableOrdering::from_perm(&hg, perm).unwrap();
            for rule in [ValueRule::LexMin, ValueRule::SeededRandom(3)] {
                let out = greedy_run(&inst, &order, rule);
                assert!(out.success);
                assert_eq!(out.steps, 5);
                assert!(out.assignment.is_total());
                assert!(check_solution(&inst, &out.assignment).unwrap());
            }
        }
    }

    #[test]
    fn greedy_gets_stuck_at_last_scope_variable() {
        let inst = with_empty_relation(4, 2, vec![1, 3]);
        let hg = Hypergraph::from_instance(&inst);
        // Under 0,1,2,3 the constraint completes at variable 3.
        let order = VariableOrdering::from_perm(&hg, vec![0, 1, 2, 3]).unwrap();
        let out = greedy_run(&inst, &order, ValueRule::LexMin);
        assert!(!out.success);
        assert_eq!(out.stuck_at, Some(3));
        assert_eq!(out.steps, 4);
        // Under 3,1,0,2 it completes at variable 1.
        let order = VariableOrdering::from_perm(&hg, vec![3, 1, 0, 2]).unwrap();
        let out = greedy_run(&inst, &order, ValueRule::LexMin);
        assert_eq!(out.stuck_at, Some(1));
        assert_eq!(out.steps, 2);
    }

    /// Step-by-step re-simulation straight from the availability rule:
    /// recompute the fully-assigned constraint set from scratch every step.
    fn greedy_oracle(inst: &Instance, order: &VariableOrdering, rule: ValueRule) -> GreedyOutcome {
        let mut assignment = Assignment::new(inst.n());
        let mut steps = 0;
        for &var in order.perm() {
            steps += 1;
            let mut found = None;
            for v in rule.try_order(var, inst.d) {
                assignment.set(var, v);
                let ok = inst.constraints.iter().all(|c| {
                    if c.scope.iter().all(|&w| assignment.get(w).is_some()) {
                        crate::model::is_compatible(c, &assignment, inst.d).unwrap()
                    } else {
                        true
                    }
                });
                assignment.unset(var);
                if ok {
                    found = Some(v);
                    break;
                }
            }
            match found {
                Some(v) => assignment.set(var, v),
                None => return GreedyOutcome { success: false, assignment, stuck_at: Some(var), steps },
            }
        }
        GreedyOutcome { success: true, assignment, stuck_at: None, steps }
    }

    #[test]
    fn greedy_matches_resimulation_oracle() {
        for seed in 0..40 {
            let inst = generate(&tiny_params(6, 0.8, seed)).unwrap();
            let order = width_ordering(&inst);
            for rule in [ValueRule::LexMin, ValueRule::SeededRandom(seed)] {
                assert_eq!(greedy_run(&inst, &order, rule), greedy_oracle(&inst, &order, rule), "seed {seed}");
            }
        }
    }

    #[test]
    fn solver_trivial_cases() {
        let inst = unconstrained(4, 2);
        let order = width_ordering(&inst);
        let res = backtrack_solve(&inst, &order, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(res.status, SolveStatus::Sat);
        assert_eq!(res.dead_ends, 0);
        assert!(check_solution(&inst, res.witness.as_ref().unwrap()).unwrap());

        let blocked = with_empty_relation(3, 2, vec![0, 2]);
        let order = width_ordering(&blocked);
        let res = backtrack_solve(&blocked, &order, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(res.status, SolveStatus::Unsat);
        assert!(res.witness.is_none());
    }

    #[test]
    fn solver_agrees_with_bruteforce() {
        let mut sat = 0;
        for seed in 0..60 {
            let r = [0.5, 1.0, 2.0][seed as usize % 3];
            let inst = generate(&tiny_params(6, r, seed)).unwrap();
            let order = width_ordering(&inst);
            let res = backtrack_solve(&inst, &order, DEFAULT_NODE_BUDGET).unwrap();
            let expect = brute_force_sat(&inst, 10_000_000).unwrap();
            assert_eq!(res.status == SolveStatus::Sat, expect, "seed {seed}");
            if expect {
                sat += 1;
                assert!(check_solution(&inst, res.witness.as_ref().unwrap()).unwrap());
            }
        }
        // The r grid straddles the threshold, so both outcomes must occur.
        assert!(sat > 0 && sat < 60);
    }

    #[test]
    fn solver_budget_is_a_distinct_outcome() {
        let inst = generate(&tiny_params(8, 2.0, 3)).unwrap();
        let order = width_ordering(&inst);
        let err = backtrack_solve(&inst, &order, 5).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn bruteforce_trivial_cases() {
        assert!(brute_force_sat(&unconstrained(3, 2), 1000).unwrap());
        assert!(!brute_force_sat(&with_empty_relation(3, 2, vec![0, 1]), 1000).unwrap());
        // Full relation: satisfiable.
        let mut full = CodeSet::new(4);
        for c in 0..4 {
            full.insert(c);
        }
        let inst = Instance {
            params: GenParams { n: 3, k: 2, alpha: 0.5, p: 0.5, r: 1.0, model: Model::Rd, seed: 0 },
            d: 2,
            constraints: vec![Constraint { scope: vec![0, 1], relation: full }],
        };
        assert!(brute_force_sat(&inst, 1000).unwrap());
        // Budget guard.
        assert!(brute_force_sat(&unconstrained(30, 3), 1000).is_err());
    }

    /// Definition-level oracle: enumerate all `d^i` prefix assignments at
    /// every level, filter the compatible ones by scanning every constraint,
    /// and demand an extension.
    fn backtrack_free_oracle(inst: &Instance, order: &VariableOrdering) -> bool {
        let n = inst.n();
        let d = inst.d;
        for level in 0..n {
            let prefix: Vec<usize> = order.perm()[..level].to_vec();
            let next = order.perm()[level];
            let total = (d as u64).pow(level as u32);
            for idx in 0..total {
                let vals = crate::model::decode_tuple(idx, d, level);
                let mut a = Assignment::new(n);
                for (i, &var) in prefix.iter().enumerate() {
                    a.set(var, vals[i]);
                }
                let compatible = inst.constraints.iter().all(|c| {
                    if c.scope.iter().all(|&w| a.get(w).is_some()) {
                        crate::model::is_compatible(c, &a, d).unwrap()
                    } else {
                        true
                    }
                });
                if !compatible {
                    continue;
                }
                let extendable = (0..d).any(|v| {
                    a.set(next, v);
                    let ok = inst.constraints.iter().all(|c| {
                        if c.scope.iter().all(|&w| a.get(w).is_some()) {
                            crate::model::is_compatible(c, &a, d).unwrap()
                        } else {
                            true
                        }
                    });
                    a.unset(next);
                    ok
                });
                if !extendable {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn exact_check_trivial_cases() {
        let inst = unconstrained(4, 2);
        let hg = Hypergraph::from_instance(&inst);
        for perm in [vec![0, 1, 2, 3], vec![3, 2, 1, 0]] {
            let order = VariableOrdering::from_perm(&hg, perm).unwrap();
            assert!(exact_backtrack_free(&inst, &order, DEFAULT_ENUM_BUDGET).unwrap());
        }
        let blocked = with_empty_relation(3, 2, vec![0, 1]);
        let hg = Hypergraph::from_instance(&blocked);
        let mut perm = vec![0, 1, 2];
        let mut checked = 0;
        all_perms(&mut perm, 0, &mut |p| {
            let order = VariableOrdering::from_perm(&hg, p.to_vec()).unwrap();
            assert!(!exact_backtrack_free(&blocked, &order, DEFAULT_ENUM_BUDGET).unwrap());
            checked += 1;
        });
        assert_eq!(checked, 6);
    }

    #[test]
    fn exact_check_matches_definition_oracle() {
        for seed in 0..50 {
            let inst = generate(&tiny_params(5, 1.0, 200 + seed)).unwrap();
            let order = width_ordering(&inst);
            assert_eq!(
                exact_backtrack_free(&inst, &order, DEFAULT_ENUM_BUDGET).unwrap(),
                backtrack_free_oracle(&inst, &order),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn exact_check_reports_budget() {
        let inst = generate(&tiny_params(8, 0.5, 1)).unwrap();
        let order = width_ordering(&inst);
        assert!(exact_backtrack_free(&inst, &order, 3).unwrap_err().is_budget());
    }

    #[test]
    fn failed_greedy_run_refutes_backtrack_freeness() {
        for seed in 0..30 {
            let inst = generate(&tiny_params(5, 1.2, 300 + seed)).unwrap();
            let order = width_ordering(&inst);
            for rule_seed in 0..5 {
                let out = greedy_run(&inst, &order, ValueRule::SeededRandom(rule_seed));
                if !out.success {
                    assert!(!exact_backtrack_free(&inst, &order, DEFAULT_ENUM_BUDGET).unwrap());
                }
            }
        }
    }

    #[test]
    fn exact_check_implies_greedy_success() {
        // LexMin plus 50 random seeds on every instance the exact check approves.
        let mut approved = 0;
        for seed in 0..60 {
            let inst = generate(&GenParams {
                n: 5,
                k: 2,
                alpha: 0.68,
                p: 0.5,
                r: 0.4,
                model: Model::Rd,
                seed: 400 + seed,
            })
            .unwrap();
            let order = width_ordering(&inst);
            if exact_backtrack_free(&inst, &order, DEFAULT_ENUM_BUDGET).unwrap() {
                approved += 1;
                assert!(greedy_run(&inst, &order, ValueRule::LexMin).success);
                for rule_seed in 0..50 {
                    assert!(greedy_run(&inst, &order, ValueRule::SeededRandom(rule_seed)).success);
                }
            }
        }
        assert!(approved > 0);
    }

    #[test]
    fn lexmin_greedy_success_means_backtrack_free_solve() {
        // The solver tries values smallest-first, so a successful LexMin
        // greedy pass is exactly the solver's first path: no dead ends.
        let mut successes = 0;
        for seed in 0..40 {
            let inst = generate(&GenParams {
                n: 6,
                k: 2,
                alpha: 0.55,
                p: 0.25,
                r: 0.9,
                model: Model::Rd,
                seed: 700 + seed,
            })
            .unwrap();
            let order = width_ordering(&inst);
            let out = greedy_run(&inst, &order, ValueRule::LexMin);
            if out.success {
                successes += 1;
                let res = backtrack_solve(&inst, &order, DEFAULT_NODE_BUDGET).unwrap();
                assert_eq!(res.status, SolveStatus::Sat, "seed {seed}");
                assert_eq!(res.dead_ends, 0, "seed {seed}");
                assert_eq!(res.witness.as_ref(), Some(&out.assignment), "seed {seed}");
            }
        }
        assert!(successes > 0);
    }

    #[test]
    fn ordering_quantifier_trivial_cases() {
        assert!(is_backtrack_free(&unconstrained(3, 2), DEFAULT_ENUM_BUDGET).unwrap());
        assert!(!is_backtrack_free(&with_empty_relation(3, 2, vec![0, 1]), DEFAULT_ENUM_BUDGET).unwrap());
    }

    #[test]
    fn ordering_quantifier_matches_enumeration() {
        for seed in 0..25 {
            let inst = generate(&tiny_params(4, 1.4, 500 + seed)).unwrap();
            let hg = Hypergraph::from_instance(&inst);
            let mut perm: Vec<usize> = (0..4).collect();
            let mut any = false;
            all_perms(&mut perm, 0, &mut |p| {
                let order = VariableOrdering::from_perm(&hg, p.to_vec()).unwrap();
                any |= exact_backtrack_free(&inst, &order, DEFAULT_ENUM_BUDGET).unwrap();
            });
            assert_eq!(is_backtrack_free(&inst, DEFAULT_ENUM_BUDGET).unwrap(), any, "seed {seed}");
        }
    }

    #[test]
    fn some_instance_distinguishes_orderings() {
        // Backtrack-freeness can hold under one ordering and fail under
        // another; find a witness to keep the quantifier honest.
        let mut found = false;
        for seed in 600..700 {
            let inst = generate(&tiny_params(4, 1.2, seed)).unwrap();
            let hg = Hypergraph::from_instance(&inst);
            let mut perm: Vec<usize> = (0..4).collect();
            let mut good = 0;
            let mut bad = 0;
            all_perms(&mut perm, 0, &mut |p| {
                let order = VariableOrdering::from_perm(&hg, p.to_vec()).unwrap();
                if exact_backtrack_free(&inst, &order, DEFAULT_ENUM_BUDGET).unwrap() {
                    good += 1;
                } else {
                    bad += 1;
                }
            });
            if good > 0 && bad > 0 {
                found = true;
                assert!(is_backtrack_free(&inst, DEFAULT_ENUM_BUDGET).unwrap());
                break;
            }
        }
        assert!(found, "no ordering-sensitive instance in the seed range");
    }
}
