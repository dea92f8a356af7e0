//! Variable-centered consistency and the width-consistency certificate for
//! backtrack-freeness.
//!
//! For a variable `u` and a set `C_u` of constraints containing `u`, look at
//! the neighborhood all those constraints touch. `u` passes the check for
//! `C_u` when every assignment of the neighborhood-minus-`u` that satisfies
//! the constraints lying entirely inside it can be extended at `u` so that
//! all of `C_u` holds. `u` is *variable-centered t-consistent* when this
//! holds for every such set of at most `t` constraints. (The same notion is
//! sometimes called vertex-centered; this crate treats the two words as one
//! concept.)
//!
//! [`width_certificate`] applies the check once per variable to exactly the
//! constraints contained in the variable's prefix under a given ordering.
//! When it returns true, every compatible prefix extends, so the instance is
//! backtrack-free under that ordering; false is inconclusive.

use crate::error::{Error, Result};
use crate::hypergraph::VariableOrdering;
use crate::model::{Assignment, Instance};

/// Enumeration limits for the consistency checks.
///
/// `max_work` caps the number of enumerated candidate assignments and
/// extension probes; `max_centered_degree` caps the degree of a variable
/// whose constraint subsets are enumerated. Past either limit the check
/// reports budget exhaustion instead of sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumBudget {
    pub max_work: u64,
    pub max_centered_degree: usize,
}

impl Default for EnumBudget {
    fn default() -> Self {
        EnumBudget { max_work: 10_000_000, max_centered_degree: 16 }
    }
}

/// The neighborhood data of one variable-centered constraint set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodContext {
    /// The centered variable.
    pub var: usize,
    /// Indices of the chosen constraints, each containing `var`.
    pub centered: Vec<usize>,
    /// All variables touched by the centered constraints, ascending
    /// (includes `var` whenever `centered` is nonempty).
    pub neighborhood: Vec<usize>,
    /// The neighborhood without `var`.
    pub rest: Vec<usize>,
    /// Indices of instance constraints whose scope lies entirely in `rest`.
    pub internal: Vec<usize>,
    /// Assignments on `rest` (parallel to it) compatible with every internal
    /// constraint.
    pub compatible: Vec<Vec<usize>>,
}

struct WorkMeter {
    used: u64,
    limit: u64,
}

impl WorkMeter {
    fn new(limit: u64) -> Self {
        WorkMeter { used: 0, limit }
    }

    fn spend(&mut self, amount: u64) -> Result<()> {
        self.used = self.used.saturating_add(amount);
        if self.used > self.limit {
            Err(Error::budget(format!("consistency enumeration exceeded {} probes", self.limit)))
        } else {
            Ok(())
        }
    }
}

/// Build the neighborhood context of `centered` (constraint indices, all
/// containing `var`), materializing the compatible assignments.
pub fn build_context(
    inst: &Instance,
    var: usize,
    centered: &[usize],
    budget: &EnumBudget,
) -> Result<NeighborhoodContext> {
    let mut meter = WorkMeter::new(budget.max_work);
    build_context_metered(inst, var, centered, &mut meter)
}

fn build_context_metered(
    inst: &Instance,
    var: usize,
    centered: &[usize],
    meter: &mut WorkMeter,
) -> Result<NeighborhoodContext> {
    for &ci in centered {
        if !inst.constraints[ci].scope.contains(&var) {
            return Err(Error::invalid(format!("constraint {ci} does not contain variable {var}")));
        }
    }
    let mut neighborhood: Vec<usize> = centered
        .iter()
        .flat_map(|&ci| inst.constraints[ci].scope.iter().copied())
        .collect();
    neighborhood.sort_unstable();
    neighborhood.dedup();
    let rest: Vec<usize> = neighborhood.iter().copied().filter(|&v| v != var).collect();

    let rest_set: Vec<bool> = {
        let mut s = vec![false; inst.n()];
        for &v in &rest {
            s[v] = true;
        }
        s
    };
    let internal: Vec<usize> = inst
        .constraints
        .iter()
        .enumerate()
        .filter(|(_, c)| c.scope.iter().all(|&v| rest_set[v]))
        .map(|(i, _)| i)
        .collect();

    // Enumerate d^{|rest|} assignments, keeping those the internal
    // constraints accept.
    let d = inst.d;
    let total = (d as u64)
        .checked_pow(rest.len() as u32)
        .ok_or_else(|| Error::budget("neighborhood assignment space overflows".to_string()))?;
    meter.spend(total)?;
    let mut compatible = Vec::new();
    let mut values = vec![0usize; rest.len()];
    let mut scratch = Assignment::new(inst.n());
    for _ in 0..total {
        for (i, &v) in rest.iter().enumerate() {
            scratch.set(v, values[i]);
        }
        let ok = internal
            .iter()
            .all(|&ci| crate::model::is_compatible(&inst.constraints[ci], &scratch, d).unwrap_or(false));
        if ok {
            compatible.push(values.clone());
        }
        for slot in values.iter_mut().rev() {
            *slot += 1;
            if *slot < d {
                break;
            }
            *slot = 0;
        }
    }
    Ok(NeighborhoodContext { var, centered: centered.to_vec(), neighborhood, rest, internal, compatible })
}

/// Whether every compatible neighborhood assignment extends at `ctx.var` to
/// satisfy all centered constraints.
fn context_extends(inst: &Instance, ctx: &NeighborhoodContext, meter: &mut WorkMeter) -> Result<bool> {
    let d = inst.d;
    meter.spend(ctx.compatible.len() as u64 * d as u64)?;
    // Position of each scope variable: the centered variable itself or an
    // index into `rest`.
    let slots: Vec<Vec<Option<usize>>> = ctx
        .centered
        .iter()
        .map(|&ci| {
            inst.constraints[ci]
                .scope
                .iter()
                .map(|&v| if v == ctx.var { None } else { Some(ctx.rest.binary_search(&v).unwrap()) })
                .collect()
        })
        .collect();
    'assignments: for row in &ctx.compatible {
        'values: for value in 0..d {
            for (&ci, slot) in ctx.centered.iter().zip(&slots) {
                let c = &inst.constraints[ci];
                let mut code = 0u64;
                for s in slot {
                    let v = match s {
                        None => value,
                        Some(j) => row[*j],
                    };
                    code = code * d as u64 + v as u64;
                }
                if !c.relation.contains(code) {
                    continue 'values;
                }
            }
            continue 'assignments;
        }
        return Ok(false);
    }
    Ok(true)
}

/// Variable-centered `t`-consistency of one variable: every subset of at
/// most `t` of its constraints passes the neighborhood-extension check.
pub fn vertex_centered_consistent(inst: &Instance, var: usize, t: usize, budget: &EnumBudget) -> Result<bool> {
    let mut meter = WorkMeter::new(budget.max_work);
    let owning: Vec<usize> = inst
        .constraints
        .iter()
        .enumerate()
        .filter(|(_, c)| c.scope.contains(&var))
        .map(|(i, _)| i)
        .collect();
    if owning.len() > budget.max_centered_degree {
        return Err(Error::budget(format!(
            "variable {var} has degree {} above the subset-enumeration cap {}",
            owning.len(),
            budget.max_centered_degree
        )));
    }
    let cap = t.min(owning.len());
    // The empty set is vacuously consistent; start at singletons.
    for mask in 1u64..(1u64 << owning.len()) {
        if mask.count_ones() as usize > cap {
            continue;
        }
        let centered: Vec<usize> =
            (0..owning.len()).filter(|&i| mask >> i & 1 == 1).map(|i| owning[i]).collect();
        let ctx = build_context_metered(inst, var, &centered, &mut meter)?;
        if !context_extends(inst, &ctx, &mut meter)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Variable-centered `t`-consistency of the whole instance.
pub fn instance_consistent(inst: &Instance, t: usize, budget: &EnumBudget) -> Result<bool> {
    for var in 0..inst.n() {
        if !vertex_centered_consistent(inst, var, t, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sufficient certificate for backtrack-freeness under `order`.
///
/// For each variable, the centered set is exactly the constraints contained
/// in the variable's prefix. True certifies `exact_backtrack_free` under the
/// same ordering; false proves nothing.
pub fn width_certificate(inst: &Instance, order: &VariableOrdering, budget: &EnumBudget) -> Result<bool> {
    if order.len() != inst.n() {
        return Err(Error::invalid("ordering does not permute the instance variables".to_string()));
    }
    let mut meter = WorkMeter::new(budget.max_work);
    let rank = order.rank();
    for pos in 0..inst.n() {
        let var = order.perm()[pos];
        let centered: Vec<usize> = inst
            .constraints
            .iter()
            .enumerate()
            .filter(|(_, c)| {
                c.scope.contains(&var) && c.scope.iter().all(|&v| rank[v] <= pos)
            })
            .map(|(i, _)| i)
            .collect();
        let ctx = build_context_metered(inst, var, &centered, &mut meter)?;
        if !context_extends(inst, &ctx, &mut meter)? {
            return Ok(false);
        }
    }
    Ok(true)
}
