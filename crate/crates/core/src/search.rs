//! Construction chains: sequences of product and `A^d_k` steps from `{0}` that
//! realise a target scaling factor or repeat factor.
//!
//! Every intermediate seed is generated and certified before the next step is
//! taken, so each step's preconditions are checked against a proven certificate.

use std::collections::HashMap;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::analyzer::IndependenceCertificate;
use crate::constructor::{adk, adk_alpha, admissible_d_range, product, CertifiedSeed};
use crate::error::{Error, Result};
use crate::seq::SeedSet;
use crate::triadic::Triadic;

/// An independent seed used as the right-hand factor of product steps.
///
/// The seed is `base` followed by a series of doublings: a doubling `(k, t)`
/// replaces the current seed by `P ∪ (P + t)`, where `P` is the first `2^k` terms
/// of the Stanley sequence it generates. Each result is certified on first use;
/// the table stores only the recipe, never the resulting parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OperandRecipe {
    pub base: &'static [u64],
    pub doublings: &'static [(u32, u64)],
}

const B6: &[u64] = &[0, 3, 4, 7, 25, 28];

/// Product operands, found by an offline search over doublings of small seeds
/// for large `ln(alpha) / kappa`. Comments give the certified `(kappa, alpha)`.
pub const PRODUCT_OPERANDS: &[OperandRecipe] = &[
    // (2, 10/9)
    OperandRecipe { base: &[0, 1, 7], doublings: &[] },
    // (3, 34/27)
    OperandRecipe { base: B6, doublings: &[] },
    // (4, 4/3)
    OperandRecipe { base: &[0, 1, 7], doublings: &[(3, 78)] },
    // (4, 109/81)
    OperandRecipe { base: B6, doublings: &[(3, 75)] },
    // (5, 347/243)
    OperandRecipe { base: B6, doublings: &[(4, 245)] },
    // (5, 365/243)
    OperandRecipe { base: B6, doublings: &[(4, 263)] },
    // (5, 124/81)
    OperandRecipe { base: B6, doublings: &[(4, 270)] },
    // (6, 394/243)
    OperandRecipe { base: B6, doublings: &[(4, 270), (5, 810)] },
    // (7, 149/81)
    OperandRecipe { base: B6, doublings: &[(4, 270), (6, 2907)] },
    // (7, 1352/729)
    OperandRecipe { base: B6, doublings: &[(4, 270), (6, 2940)] },
];

impl OperandRecipe {
    /// Builds the seed; each doubling is validated as a seed in its own right.
    pub fn build(&self) -> Result<SeedSet> {
        let mut seed = SeedSet::new(self.base.to_vec())?;
        for &(k, t) in self.doublings {
            let len = 1usize << k;
            let seq = crate::seq::generate(&seed, len)?;
            let prefix = &seq.terms()[..len];
            let mut elems = prefix.to_vec();
            elems.extend(prefix.iter().map(|a| a + t));
            seed = SeedSet::new(elems)?;
        }
        Ok(seed)
    }
}

/// Limits for chain searches. Hitting one is an out-of-range error, not a proof
/// that the target is unattainable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainCaps {
    pub max_depth: usize,
    /// Largest `k` used by any single step.
    pub max_k: u32,
    pub max_seed_len: usize,
    /// Largest horizon used when certifying an intermediate seed.
    pub max_horizon: usize,
}

impl Default for ChainCaps {
    fn default() -> Self {
        ChainCaps {
            max_depth: 8,
            max_k: 14,
            max_seed_len: 1 << 16,
            max_horizon: 1 << 18,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepKind {
    /// `current ⊗_k operand`.
    Product { operand: SeedSet },
    /// `current^d_k`.
    Adk { d: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionStep {
    #[serde(flatten)]
    pub kind: StepKind,
    pub k: u32,
    /// Known in closed form for `A^d_k` steps only.
    pub predicted_rho: Option<u64>,
    pub predicted_alpha: Triadic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionChain {
    pub start: SeedSet,
    pub steps: Vec<ConstructionStep>,
    pub final_seed: SeedSet,
    pub final_certificate: IndependenceCertificate,
}

impl ConstructionChain {
    pub fn depth(&self) -> usize {
        self.steps.len()
    }
}

fn check_prediction(step: &ConstructionStep, cert: &IndependenceCertificate) -> Result<()> {
    let rho_ok = step.predicted_rho.is_none_or(|rho| rho == cert.rho);
    if !rho_ok || step.predicted_alpha != cert.alpha {
        return Err(Error::Inconsistency(format!(
            "step predicted rho {:?}, alpha {} but certified rho {}, alpha {}",
            step.predicted_rho, step.predicted_alpha, cert.rho, cert.alpha
        )));
    }
    Ok(())
}

/// Applies one step to a certified seed and returns the new (uncertified) seed.
fn apply_step(
    from: &CertifiedSeed,
    step: &ConstructionStep,
    operand: Option<&CertifiedSeed>,
) -> Result<SeedSet> {
    match &step.kind {
        StepKind::Product { operand: seed_b } => {
            let cert_b = operand.map(|o| &o.cert);
            if let Some(cert_b) = cert_b {
                let expected = from.cert.alpha * cert_b.alpha;
                if expected != step.predicted_alpha {
                    return Err(Error::Inconsistency(format!(
                        "product predicts {} but alpha(A) * alpha(B) = {expected}",
                        step.predicted_alpha
                    )));
                }
            }
            product(&from.seq, &from.cert, step.k, seed_b)
        }
        StepKind::Adk { d } => {
            let c = adk(&from.seq, &from.cert, from.omega(), step.k, *d)?;
            if Some(c.predicted_rho) != step.predicted_rho || c.predicted_alpha != step.predicted_alpha {
                return Err(Error::Inconsistency("A^d_k step predictions changed on replay".into()));
            }
            Ok(c.seed)
        }
    }
}

/// Replays a chain from its start seed, re-certifying every intermediate seed and
/// checking each prediction. Returns the final certified seed.
pub fn replay(chain: &ConstructionChain, caps: &ChainCaps) -> Result<CertifiedSeed> {
    let mut current = CertifiedSeed::materialize(&chain.start, caps.max_horizon)?;
    for step in &chain.steps {
        let operand = match &step.kind {
            StepKind::Product { operand } => {
                Some(CertifiedSeed::materialize(operand, caps.max_horizon)?)
            }
            StepKind::Adk { .. } => None,
        };
        let seed = apply_step(&current, step, operand.as_ref())?;
        current = CertifiedSeed::materialize(&seed, caps.max_horizon)?;
        check_prediction(step, &current.cert)?;
    }
    if current.seed() != &chain.final_seed {
        return Err(Error::Inconsistency("replay produced a different final seed".into()));
    }
    Ok(current)
}

type Node = Rc<CertifiedSeed>;

/// Chain search with a cache of certified seeds shared across targets.
pub struct ChainSearch {
    caps: ChainCaps,
    cache: HashMap<SeedSet, Option<Node>>,
    operands: Option<Vec<Node>>,
}

/// Intermediate seeds at or below this size stay cached between searches.
const CACHE_SEED_LIMIT: usize = 1 << 12;

impl ChainSearch {
    pub fn new(caps: ChainCaps) -> Self {
        ChainSearch {
            caps,
            cache: HashMap::new(),
            operands: None,
        }
    }

    pub fn caps(&self) -> &ChainCaps {
        &self.caps
    }

    /// Certified seed for `seed`, or `None` when certification fails within caps.
    fn node(&mut self, seed: &SeedSet) -> Result<Option<Node>> {
        if let Some(hit) = self.cache.get(seed) {
            return Ok(hit.clone());
        }
        let node = match CertifiedSeed::materialize(seed, self.caps.max_horizon) {
            Ok(c) => Some(Rc::new(c)),
            Err(Error::OutOfRange(_) | Error::Resource { .. }) => None,
            Err(e) => return Err(e),
        };
        if seed.len() <= CACHE_SEED_LIMIT {
            self.cache.insert(seed.clone(), node.clone());
        }
        Ok(node)
    }

    fn operands(&mut self) -> Result<Vec<Node>> {
        if let Some(ops) = &self.operands {
            return Ok(ops.clone());
        }
        let mut ops = Vec::new();
        for recipe in PRODUCT_OPERANDS {
            let seed = recipe.build()?;
            let node = self.node(&seed)?.ok_or_else(|| {
                Error::Inconsistency(format!("product operand {seed} failed to certify"))
            })?;
            ops.push(node);
        }
        // Largest scaling factor first.
        ops.sort_by_key(|op| std::cmp::Reverse(op.cert.alpha));
        self.operands = Some(ops.clone());
        Ok(ops)
    }

    fn root(&mut self) -> Result<Node> {
        self.node(&SeedSet::zero())?
            .ok_or_else(|| Error::Inconsistency("S(0) failed to certify".into()))
    }

    fn finish(&self, steps: Vec<ConstructionStep>, last: &CertifiedSeed) -> ConstructionChain {
        ConstructionChain {
            start: SeedSet::zero(),
            steps,
            final_seed: last.seed().clone(),
            final_certificate: last.cert.clone(),
        }
    }

    /// Builds an `A^d_k` step from `from`, certifies it, and checks the predictions.
    fn adk_step(&mut self, from: &CertifiedSeed, k: u32, d: i64) -> Result<Option<(ConstructionStep, Node)>> {
        if (1usize << (k + 2)) > self.caps.max_seed_len {
            return Ok(None);
        }
        let c = match adk(&from.seq, &from.cert, from.omega(), k, d) {
            Ok(c) => c,
            Err(Error::Precondition(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let step = ConstructionStep {
            kind: StepKind::Adk { d },
            k,
            predicted_rho: Some(c.predicted_rho),
            predicted_alpha: c.predicted_alpha,
        };
        let Some(node) = self.node(&c.seed)? else {
            return Ok(None);
        };
        check_prediction(&step, &node.cert)?;
        Ok(Some((step, node)))
    }

    /// Makes sure `node` has at least `2^k + 1` terms, extending a private copy if needed.
    fn with_terms(node: &Node, k: u32) -> Result<Node> {
        let needed = (1usize << k) + 1;
        if node.seq.len() >= needed {
            return Ok(node.clone());
        }
        let mut longer = (**node).clone();
        longer.seq.extend(needed - longer.seq.len())?;
        Ok(Rc::new(longer))
    }

    /// A chain from `{0}` whose final sequence has scaling factor exactly `target`.
    ///
    /// Product steps by the seeds in [`PRODUCT_OPERANDS`] bring the scaling factor
    /// just below the target; `A^d_k` steps then close the gap, the last one with
    /// `d = 3^k (10 alpha - 9 target)`.
    pub fn target_scaling(&mut self, target: Triadic) -> Result<ConstructionChain> {
        if target < Triadic::ONE {
            return Err(Error::Domain(format!(
                "scaling factors are at least 1, got {target}"
            )));
        }
        let root = self.root()?;
        if target == root.cert.alpha {
            return Ok(self.finish(Vec::new(), &root));
        }
        let ops = self.operands()?;
        if let Some((steps, last)) = self.scaling_by_plans(&root, target, &ops)? {
            return Ok(self.finish(steps, &last));
        }
        let table = MultiplierTable::new(&ops, &self.caps);
        let mut steps = Vec::new();
        match self.scaling_dfs(&root, target, &ops, &table, &mut steps)? {
            Some(last) => Ok(self.finish(steps, &last)),
            None => Err(Error::OutOfRange(format!(
                "no chain reaches alpha = {target} within depth {}, k <= {}, seed size <= {}",
                self.caps.max_depth, self.caps.max_k, self.caps.max_seed_len
            ))),
        }
    }

    /// Tries product plans in order of the estimated `k` of their closing step.
    ///
    /// A plan is a multiset of operands; its scaling factor and `kappa` are the
    /// product and sum of the operands' (the product rule), so plans are ranked
    /// before anything is generated. Each plan is then built and closed for real.
    fn scaling_by_plans(
        &mut self,
        root: &Node,
        target: Triadic,
        ops: &[Node],
    ) -> Result<Option<(Vec<ConstructionStep>, Node)>> {
        let mut plans = Vec::new();
        enumerate_plans(ops, &self.caps, 0, &mut Vec::new(), Triadic::ONE, 0, &mut plans);
        let mut ranked: Vec<(u32, usize, Vec<usize>)> = plans
            .into_iter()
            .filter_map(|(plan, alpha, kappa)| {
                let k = estimated_closing_k(alpha, kappa, target, &self.caps)?;
                Some((k, plan.len(), plan))
            })
            .collect();
        ranked.sort();
        for (_, _, plan) in ranked {
            let mut node = root.clone();
            let mut steps = Vec::new();
            let mut built = true;
            for &i in &plan {
                match self.product_step(&node, &ops[i])? {
                    Some((step, next)) => {
                        steps.push(step);
                        node = next;
                    }
                    None => {
                        built = false;
                        break;
                    }
                }
            }
            if !built {
                continue;
            }
            if node.cert.alpha == target {
                return Ok(Some((steps, node)));
            }
            if steps.len() < self.caps.max_depth {
                if let Some((step, last)) = self.closing_step(&node, target)? {
                    steps.push(step);
                    return Ok(Some((steps, last)));
                }
            }
        }
        Ok(None)
    }

    /// `node ⊗_kappa op`, certified, or `None` when it exceeds the caps.
    fn product_step(&mut self, node: &Node, op: &Node) -> Result<Option<(ConstructionStep, Node)>> {
        let kappa = node.cert.kappa;
        if kappa > self.caps.max_k || (op.seed().len() << kappa) > self.caps.max_seed_len {
            return Ok(None);
        }
        let from = Self::with_terms(node, kappa)?;
        let seed = match product(&from.seq, &from.cert, kappa, op.seed()) {
            Ok(s) => s,
            Err(Error::Precondition(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let Some(next) = self.node(&seed)? else {
            return Ok(None);
        };
        let step = ConstructionStep {
            kind: StepKind::Product {
                operand: op.seed().clone(),
            },
            k: kappa,
            predicted_rho: None,
            predicted_alpha: node.cert.alpha * op.cert.alpha,
        };
        check_prediction(&step, &next.cert)?;
        Ok(Some((step, next)))
    }

    /// One `A^d_k` step from `node` landing exactly on `target`, at the smallest `k`
    /// where `d = 3^k (10 alpha - 9 target)` is admissible.
    fn closing_step(&mut self, node: &Node, target: Triadic) -> Result<Option<(ConstructionStep, Node)>> {
        let alpha = node.cert.alpha;
        if target <= alpha {
            return Ok(None);
        }
        for k in node.cert.kappa + 1..=self.caps.max_k {
            let Some(d) = (alpha * 10 - target * 9).mul_pow3(k).to_integer() else {
                continue;
            };
            // d scales with 3^k while the range's lower end is fixed, so a
            // larger k may still work when this one does not.
            let Ok(d) = i64::try_from(d) else { break };
            let from = Self::with_terms(node, k)?;
            match admissible_d_range(&from.seq, &from.cert, from.omega(), k) {
                Ok(range) if range.contains(d) => {}
                _ => continue,
            }
            if let Some(found) = self.adk_step(&from, k, d)? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }

    fn scaling_dfs(
        &mut self,
        node: &Node,
        target: Triadic,
        ops: &[Node],
        table: &MultiplierTable,
        steps: &mut Vec<ConstructionStep>,
    ) -> Result<Option<Node>> {
        let alpha = node.cert.alpha;
        if alpha == target {
            return Ok(Some(node.clone()));
        }
        let depth_left = self.caps.max_depth - steps.len();
        if depth_left == 0 || target < alpha {
            return Ok(None);
        }
        let kappa = node.cert.kappa;
        if table.upper_bound(kappa, depth_left) * alpha.to_f64() < target.to_f64() * (1.0 - 1e-12) {
            return Ok(None);
        }

        if let Some((step, next)) = self.closing_step(node, target)? {
            steps.push(step);
            return Ok(Some(next));
        }

        // Multiply by an operand, largest first.
        for op in ops {
            if alpha * op.cert.alpha > target {
                continue;
            }
            let Some((step, next)) = self.product_step(node, op)? else {
                continue;
            };
            steps.push(step);
            if let Some(done) = self.scaling_dfs(&next, target, ops, table, steps)? {
                return Ok(Some(done));
            }
            steps.pop();
        }

        // An intermediate A^d_k step at the smallest k: aim just below target * 9/10
        // times a margin, falling back to the largest reachable alpha.
        let k = kappa + 1;
        if k > self.caps.max_k {
            return Ok(None);
        }
        let from = Self::with_terms(node, k)?;
        let Ok(range) = admissible_d_range(&from.seq, &from.cert, from.omega(), k) else {
            return Ok(None);
        };
        if range.is_empty() {
            return Ok(None);
        }
        let want = target.to_f64() * 0.95;
        let d_want = (3f64.powi(k as i32) * (10.0 * alpha.to_f64() - 9.0 * want)).ceil() as i64;
        let mut candidates = vec![d_want.clamp(range.low, range.high), range.low];
        candidates.dedup();
        for d in candidates {
            if adk_alpha(alpha, k, d) >= target {
                continue;
            }
            let Some((step, next)) = self.adk_step(&from, k, d)? else {
                continue;
            };
            steps.push(step);
            if let Some(done) = self.scaling_dfs(&next, target, ops, table, steps)? {
                return Ok(Some(done));
            }
            steps.pop();
        }
        Ok(None)
    }

    /// A chain of `A^d_k` steps from `{0}` whose final sequence has repeat factor `target`.
    ///
    /// Iterative deepening over chain depth; within a depth, parents are tried by
    /// increasing `k - kappa(parent)` and then increasing repeat factor.
    pub fn target_repeat(&mut self, target: u64) -> Result<ConstructionChain> {
        if target == 0 {
            return Err(Error::Domain("repeat factors are positive".into()));
        }
        let mut memo = HashMap::new();
        for depth in 0..=self.caps.max_depth {
            if let Some((steps, node)) = self.repeat_dfs(target, depth, &mut memo)? {
                return Ok(self.finish(steps, &node));
            }
        }
        Err(Error::OutOfRange(format!(
            "no chain reaches rho = {target} within depth {}, k <= {} (not a proof that none exists)",
            self.caps.max_depth, self.caps.max_k
        )))
    }

    #[allow(clippy::type_complexity)]
    fn repeat_dfs(
        &mut self,
        target: u64,
        depth: usize,
        memo: &mut HashMap<(u64, usize), Option<(Vec<ConstructionStep>, Node)>>,
    ) -> Result<Option<(Vec<ConstructionStep>, Node)>> {
        if let Some(hit) = memo.get(&(target, depth)) {
            return Ok(hit.clone());
        }
        let found = self.repeat_search(target, depth, memo)?;
        memo.insert((target, depth), found.clone());
        Ok(found)
    }

    #[allow(clippy::type_complexity)]
    fn repeat_search(
        &mut self,
        target: u64,
        depth: usize,
        memo: &mut HashMap<(u64, usize), Option<(Vec<ConstructionStep>, Node)>>,
    ) -> Result<Option<(Vec<ConstructionStep>, Node)>> {
        if target == 1 {
            // S(0) is the only chain of depth 0.
            let root = self.root()?;
            return Ok((depth == 0).then(|| (Vec::new(), root)));
        }
        if depth == 0 {
            return Ok(None);
        }
        // The last step uses c = parent_rho * 3^j with j = k - kappa(parent) >= 1 and
        // lands in [9c + lambda, 10c - omega - 1]; scan parents with c near target / 9.5.
        for j in 1..=self.caps.max_k {
            let scale = 3u64.pow(j) as f64;
            if 9.0 * scale > target as f64 * 2.0 {
                break;
            }
            let lo = ((target as f64 / (10.0 * scale)).floor() as u64).max(1);
            let hi = (target as f64 / (9.0 * scale)).ceil() as u64 + 1;
            for parent in lo..=hi {
                let Some((mut steps, node)) = self.repeat_dfs(parent, depth - 1, memo)? else {
                    continue;
                };
                let k = node.cert.kappa + j;
                if k > self.caps.max_k {
                    continue;
                }
                let from = Self::with_terms(&node, k)?;
                let c = from.seq.terms()[1 << k] as i128;
                let d = 10 * c - target as i128;
                let Ok(d) = i64::try_from(d) else { continue };
                match admissible_d_range(&from.seq, &from.cert, from.omega(), k) {
                    Ok(range) if range.contains(d) => {}
                    _ => continue,
                }
                if let Some((step, next)) = self.adk_step(&from, k, d)? {
                    steps.push(step);
                    return Ok(Some((steps, next)));
                }
            }
        }
        Ok(None)
    }
}

/// Collects every multiset of operands (as non-decreasing index lists) whose
/// total `kappa` leaves room for a closing step, with its scaling factor and `kappa`.
fn enumerate_plans(
    ops: &[Node],
    caps: &ChainCaps,
    start: usize,
    plan: &mut Vec<usize>,
    alpha: Triadic,
    kappa: u32,
    out: &mut Vec<(Vec<usize>, Triadic, u32)>,
) {
    out.push((plan.clone(), alpha, kappa));
    if plan.len() + 1 >= caps.max_depth {
        return;
    }
    for (i, op) in ops.iter().enumerate().skip(start) {
        let next_kappa = kappa + op.cert.kappa;
        if next_kappa >= caps.max_k {
            continue;
        }
        plan.push(i);
        enumerate_plans(ops, caps, i, plan, alpha * op.cert.alpha, next_kappa, out);
        plan.pop();
    }
}

/// Smallest `k` at which a plan with factor `alpha` and threshold `kappa` can
/// plausibly be closed onto `target`, or `None`.
///
/// Exact plans score `kappa`. Otherwise `target / alpha` must lie in `[1, 10/9)`
/// with a margin of about `3^(kappa - k) / 9` at both ends, which stands in for
/// the unknown `lambda` and `omega` of the built seed.
fn estimated_closing_k(alpha: Triadic, kappa: u32, target: Triadic, caps: &ChainCaps) -> Option<u32> {
    if alpha == target {
        return Some(kappa);
    }
    if target < alpha {
        return None;
    }
    let ratio = target.to_f64() / alpha.to_f64();
    (kappa + 1..=caps.max_k).find(|&k| {
        let margin = 3f64.powi(kappa as i32 - k as i32) / 9.0;
        ratio >= 1.0 + margin && ratio <= 10.0 / 9.0 - margin
    })
}

/// Upper bounds on the factor by which `alpha` can still grow, indexed by the
/// `kappa` budget and the number of steps left.
struct MultiplierTable {
    max_k: u32,
    /// `best[budget][steps]`: largest product of operand factors with total kappa <= budget.
    best: Vec<Vec<f64>>,
    ten_ninths: f64,
}

impl MultiplierTable {
    fn new(ops: &[Node], caps: &ChainCaps) -> Self {
        let budgets = caps.max_k as usize + 2;
        let steps = caps.max_depth + 1;
        let mut best = vec![vec![1.0f64; steps]; budgets];
        // A^d_k steps multiply by less than 10/9 and cost at least 3, so the
        // operand {0,1,7} (10/9 for 2) dominates them.
        let mut factors: Vec<(usize, f64)> = ops
            .iter()
            .map(|o| (o.cert.kappa as usize, o.cert.alpha.to_f64()))
            .collect();
        factors.push((2, 10.0 / 9.0));
        for b in 0..budgets {
            for s in 1..steps {
                let mut v = best[b][s - 1];
                for &(cost, f) in &factors {
                    if cost >= 1 && cost <= b {
                        v = v.max(best[b - cost][s - 1] * f);
                    }
                }
                best[b][s] = v;
            }
        }
        MultiplierTable {
            max_k: caps.max_k,
            best,
            ten_ninths: 10.0 / 9.0,
        }
    }

    /// Largest factor reachable from `kappa` with `steps` steps.
    fn upper_bound(&self, kappa: u32, steps: usize) -> f64 {
        if steps == 0 {
            return 1.0;
        }
        // Products keep k = kappa <= max_k; the closing A^d_k step needs kappa < max_k.
        let budget = (self.max_k + 1).saturating_sub(kappa) as usize;
        let budget = budget.min(self.best.len() - 1);
        let products = self.best[budget][steps];
        let closing = self.best[budget.saturating_sub(1)][steps - 1] * self.ten_ninths;
        products.max(closing)
    }
}

/// [`ChainSearch::target_scaling`] with default caps.
pub fn target_scaling(target: Triadic) -> Result<ConstructionChain> {
    ChainSearch::new(ChainCaps::default()).target_scaling(target)
}

/// [`ChainSearch::target_repeat`] with default caps.
pub fn target_repeat(target: u64) -> Result<ConstructionChain> {
    ChainSearch::new(ChainCaps::default()).target_repeat(target)
}
