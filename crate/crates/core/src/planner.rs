//! Recursive construction plans and the claims report.
//!
//! A plan is a tree of base-case searches, compositions, and stacking
//! extensions. Planning and execution are separate: the plan records what
//! will be built and what run length the construction recipe claims for it;
//! execution builds bottom-up, re-verifies everything, and reports honestly
//! whether the measurement met the claim. A certified cycle never carries a
//! `claim_met = true` with a measured run length below its claim.
//!
//! The claims report evaluates families of instances against the advertised
//! bounds — composition bound and its two corollaries, the directed cap, the
//! prime-power and even-size recipes, and the two stacking guarantees — with
//! the exhaustive oracle or the constructions themselves as evidence. A
//! bound that fails on a machine-checked instance is reported as unmet or as
//! a counterexample, not hidden.

use std::fmt;

use crate::compose::{compose_best, corollary_conditions, bound_thm1, feasible_splits, gcd, SplitParams};
use crate::error::{Error, Result};
use crate::extend::{extend_even, extend_multiple};
use crate::oracle::{self, SearchBudget};
use crate::torus::{TorusSpec, Walk};

/// Construction strategy selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Inspect the sizes and pick the best known recipe, composing or
    /// stacking leftovers; makes only trivial claims when no recipe fits.
    Auto,
    /// Triples recursion for tori whose total size is a prime power;
    /// claims run length `n + 1` on `3n` dimensions.
    Exp,
    /// Pairs recursion for tori whose sizes are all even with odd parts
    /// powers of one prime; claims `n + 1` on `2n` dimensions.
    Exp2,
}

impl Strategy {
    pub fn parse(s: &str) -> Result<Strategy> {
        match s {
            "auto" => Ok(Strategy::Auto),
            "exp" => Ok(Strategy::Exp),
            "exp2" => Ok(Strategy::Exp2),
            other => Err(Error::Parse {
                line: None,
                message: format!("unknown strategy {other:?} (expected auto, exp, or exp2)"),
            }),
        }
    }
}

/// A split the planner prescribes for a composition node, together with
/// whether the closed-form adjustment had to be widened to a full
/// feasibility scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrescribedSplit {
    pub split: SplitParams,
    pub widened: bool,
}

/// The split an execution actually selected after measuring candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChosenSplit {
    pub split: SplitParams,
    pub order_swapped: bool,
}

/// One node of a construction plan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanNode {
    /// Solve the torus directly by bounded exhaustive search, aiming for
    /// `claimed_rl` and falling back to the best found.
    BaseSearch { spec: TorusSpec, claimed_rl: usize },
    /// Compose the two children. Execution tries every qualifying split in
    /// both orders and keeps the best measured run length; `chosen` records
    /// the winner after execution.
    Compose {
        left: Box<PlanNode>,
        right: Box<PlanNode>,
        prescribed: Option<PrescribedSplit>,
        chosen: Option<ChosenSplit>,
        claimed_rl: usize,
    },
    /// Reflection stacking over `even_dim` into a new dimension of size `m`.
    ExtendEven { child: Box<PlanNode>, even_dim: usize, m: usize, claimed_rl: usize },
    /// Translation stacking along `dim` into a new dimension of size `m`.
    ExtendMultiple { child: Box<PlanNode>, dim: usize, m: usize, claimed_rl: usize },
}

impl PlanNode {
    pub fn claimed_rl(&self) -> usize {
        match self {
            PlanNode::BaseSearch { claimed_rl, .. }
            | PlanNode::Compose { claimed_rl, .. }
            | PlanNode::ExtendEven { claimed_rl, .. }
            | PlanNode::ExtendMultiple { claimed_rl, .. } => *claimed_rl,
        }
    }

    /// The torus this node constructs a cycle for.
    pub fn spec(&self) -> TorusSpec {
        match self {
            PlanNode::BaseSearch { spec, .. } => spec.clone(),
            PlanNode::Compose { left, right, .. } => left.spec().concat(&right.spec()),
            PlanNode::ExtendEven { child, m, .. } => {
                child.spec().with_extra_dim(*m, false).expect("plan dims valid")
            }
            PlanNode::ExtendMultiple { child, m, .. } => {
                child.spec().with_extra_dim(*m, false).expect("plan dims valid")
            }
        }
    }
}

impl fmt::Display for PlanNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanNode::BaseSearch { spec, claimed_rl } => {
                write!(f, "search{{dims={}; claim={claimed_rl}}}", join(spec.sizes()))
            }
            PlanNode::Compose { left, right, prescribed, chosen, claimed_rl } => {
                write!(f, "compose{{claim={claimed_rl}")?;
                if let Some(p) = prescribed {
                    write!(f, "; prescribed={}+{}", p.split.s1, p.split.s2)?;
                    if p.widened {
                        write!(f, "(widened)")?;
                    }
                }
                if let Some(c) = chosen {
                    write!(
                        f,
                        "; chosen={}+{}{}",
                        c.split.s1,
                        c.split.s2,
                        if c.order_swapped { "/swapped" } else { "" }
                    )?;
                }
                write!(f, "}}({left}, {right})")
            }
            PlanNode::ExtendEven { child, even_dim, m, claimed_rl } => {
                write!(f, "stack-even{{dim={even_dim}; m={m}; claim={claimed_rl}}}({child})")
            }
            PlanNode::ExtendMultiple { child, dim, m, claimed_rl } => {
                write!(f, "stack-mult{{dim={dim}; m={m}; claim={claimed_rl}}}({child})")
            }
        }
    }
}

fn join(sizes: &[usize]) -> String {
    sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
}

/// A verifier-approved Hamiltonian cycle with its claim honestly compared
/// against an independently re-measured run length.
#[derive(Debug, Clone)]
pub struct CertifiedCycle {
    pub walk: Walk,
    pub measured_rl: usize,
    pub claimed_rl: usize,
    pub claim_met: bool,
    pub provenance: PlanNode,
}

impl CertifiedCycle {
    /// Re-verifies the walk and re-measures its run length; refuses walks
    /// that are not Hamiltonian.
    pub fn certify(walk: Walk, claimed_rl: usize, provenance: PlanNode) -> Result<CertifiedCycle> {
        let report = walk.verify();
        if !report.is_hamiltonian {
            return Err(Error::NotHamiltonian(format!(
                "constructed walk fails verification (missing {} vertices)",
                report.missing_count
            )));
        }
        let measured_rl = walk.run_length();
        Ok(CertifiedCycle { walk, measured_rl, claimed_rl, claim_met: measured_rl >= claimed_rl, provenance })
    }
}

// ---------------------------------------------------------------------------
// Planning
// ---------------------------------------------------------------------------

/// If every size is a power of one prime, returns that prime.
fn prime_power_base(sizes: &[usize]) -> Option<usize> {
    let mut base = None;
    for &s in sizes {
        let mut p = 2;
        while p * p <= s && s % p != 0 {
            p += 1;
        }
        if s % p != 0 {
            p = s; // s itself is prime
        }
        let mut rest = s;
        while rest % p == 0 {
            rest /= p;
        }
        if rest != 1 {
            return None;
        }
        match base {
            None => base = Some(p),
            Some(b) if b == p => {}
            Some(_) => return None,
        }
    }
    base
}

/// If every size is even and every nontrivial odd part is a power of one
/// odd prime, returns that prime (or `None` inside `Some` when all odd
/// parts are 1, in which case no prime constraint applies).
fn even_with_common_odd_prime(sizes: &[usize]) -> Option<Option<usize>> {
    if sizes.iter().any(|&s| s % 2 != 0) {
        return None;
    }
    let odd_parts: Vec<usize> = sizes
        .iter()
        .map(|&s| {
            let mut v = s;
            while v % 2 == 0 {
                v /= 2;
            }
            v
        })
        .filter(|&v| v > 1)
        .collect();
    if odd_parts.is_empty() {
        return Some(None);
    }
    prime_power_base(&odd_parts).map(Some)
}

/// The closed-form split prescription: `s1 = floor(c1 * g / (c1 + c2)) + i`
/// for the first `i` in `adjust` making `s1` coprime to both sides (and odd
/// or prime-free where constrained). Falls back to scanning all feasible
/// splits for the one closest in ratio, marking the prescription widened.
fn prescribe_split(
    n1: usize,
    n2: usize,
    claim1: usize,
    claim2: usize,
    adjust: std::ops::RangeInclusive<usize>,
    require_odd: bool,
    avoid_prime: Option<usize>,
) -> Option<PrescribedSplit> {
    let g = gcd(n1, n2);
    if g < 2 {
        return None;
    }
    let base = claim1 * g / (claim1 + claim2);
    for i in adjust {
        let s1 = base + i;
        if s1 == 0 || s1 >= g {
            continue;
        }
        if require_odd && s1 % 2 == 0 {
            continue;
        }
        if let Some(p) = avoid_prime {
            if s1 % p == 0 {
                continue;
            }
        }
        let s2 = g - s1;
        if gcd(n1, s1) == 1 && gcd(n2, s2) == 1 {
            return Some(PrescribedSplit { split: SplitParams::new(s1, s2), widened: false });
        }
    }
    feasible_splits(n1, n2)
        .into_iter()
        .min_by_key(|s| ((s.s2 * claim1).abs_diff(s.s1 * claim2), s.s1))
        .map(|split| PrescribedSplit { split, widened: true })
}

fn plan_exp(sizes: &[usize], p: usize) -> Result<PlanNode> {
    let k = sizes.len();
    debug_assert_eq!(k % 3, 0);
    let n = k / 3;
    if n == 1 {
        return Ok(PlanNode::BaseSearch {
            spec: TorusSpec::undirected(sizes.to_vec())?,
            claimed_rl: 2,
        });
    }
    let j = n.div_ceil(2);
    let (ls, rs) = sizes.split_at(3 * j);
    let left = plan_exp(ls, p)?;
    let right = plan_exp(rs, p)?;
    let (n1, n2): (usize, usize) = (ls.iter().product(), rs.iter().product());
    let prescribed = prescribe_split(n1, n2, j + 1, n - j + 1, 0..=1, false, Some(p));
    if prescribed.is_none() {
        return Err(Error::Unplannable(format!(
            "no feasible split for subproducts ({n1}, {n2})"
        )));
    }
    Ok(PlanNode::Compose {
        left: Box::new(left),
        right: Box::new(right),
        prescribed,
        chosen: None,
        claimed_rl: n + 1,
    })
}

fn plan_exp2(sizes: &[usize], p: Option<usize>) -> Result<PlanNode> {
    let k = sizes.len();
    debug_assert_eq!(k % 2, 0);
    let n = k / 2;
    if n == 1 {
        return Ok(PlanNode::BaseSearch {
            spec: TorusSpec::undirected(sizes.to_vec())?,
            claimed_rl: 2,
        });
    }
    let j = n.div_ceil(2);
    let (ls, rs) = sizes.split_at(2 * j);
    let left = plan_exp2(ls, p)?;
    let right = plan_exp2(rs, p)?;
    let (n1, n2): (usize, usize) = (ls.iter().product(), rs.iter().product());
    let prescribed = prescribe_split(n1, n2, j + 1, n - j + 1, 0..=3, true, p);
    if prescribed.is_none() {
        return Err(Error::Unplannable(format!(
            "no feasible split for subproducts ({n1}, {n2})"
        )));
    }
    Ok(PlanNode::Compose {
        left: Box::new(left),
        right: Box::new(right),
        prescribed,
        chosen: None,
        claimed_rl: n + 1,
    })
}

/// Base-search cutoff for the general fallback: a whole leaf is searched
/// directly when it has at most this many vertices.
const GENERAL_LEAF_LIMIT: usize = 64;

fn plan_general(sizes: &[usize]) -> Result<PlanNode> {
    let k = sizes.len();
    let product: usize = sizes.iter().product();
    if k <= 2 || product <= GENERAL_LEAF_LIMIT {
        return Ok(PlanNode::BaseSearch {
            spec: TorusSpec::undirected(sizes.to_vec())?,
            claimed_rl: 1,
        });
    }
    // Prefer the most balanced split point with any feasible interleave.
    let mut cuts: Vec<usize> = (1..k).collect();
    cuts.sort_by_key(|&j| ((2 * j).abs_diff(k), j));
    for j in cuts {
        let (ls, rs) = sizes.split_at(j);
        let (n1, n2): (usize, usize) = (ls.iter().product(), rs.iter().product());
        if !feasible_splits(n1, n2).is_empty() {
            return Ok(PlanNode::Compose {
                left: Box::new(plan_general(ls)?),
                right: Box::new(plan_general(rs)?),
                prescribed: None,
                chosen: None,
                claimed_rl: 1,
            });
        }
    }
    // No composition anywhere: peel the last dimension by stacking.
    let (rest, last) = sizes.split_at(k - 1);
    let m = last[0];
    let rest_product: usize = rest.iter().product();
    if rest_product % 2 == 0 {
        let even_dim = rest.iter().position(|s| s % 2 == 0).unwrap();
        return Ok(PlanNode::ExtendEven {
            child: Box::new(plan_general(rest)?),
            even_dim,
            m,
            claimed_rl: 1,
        });
    }
    if let Some(dim) = rest.iter().position(|&s| m % s == 0) {
        return Ok(PlanNode::ExtendMultiple {
            child: Box::new(plan_general(rest)?),
            dim,
            m,
            claimed_rl: 1,
        });
    }
    Err(Error::Unplannable(format!(
        "sizes [{}] admit no feasible split and no stacking base",
        join(sizes)
    )))
}

/// Auto planning for prime-power sizes with a dimension count that is not a
/// multiple of 3: recurse on the first `3n` dimensions, then stack each
/// leftover dimension (its size is a multiple of some earlier size, both
/// being powers of the same prime). Claims `floor(k/3) + 1`.
fn plan_exp_with_leftovers(sizes: &[usize], p: usize) -> Result<PlanNode> {
    let k = sizes.len();
    let n = k / 3;
    let mut node = plan_exp(&sizes[..3 * n], p)?;
    let mut prefix: Vec<usize> = sizes[..3 * n].to_vec();
    for &m in &sizes[3 * n..] {
        let dim = prefix
            .iter()
            .position(|&s| m % s == 0)
            .ok_or_else(|| Error::Unplannable(format!("no dimension size divides leftover {m}")))?;
        node = PlanNode::ExtendMultiple {
            child: Box::new(node),
            dim,
            m,
            claimed_rl: n + 1,
        };
        prefix.push(m);
    }
    Ok(node)
}

/// Auto planning for all-even sizes with an odd dimension count: recurse on
/// the first `k - 1` dimensions, then stack the last over any even
/// dimension. Claims `floor(k/2) + 1`.
fn plan_exp2_with_leftover(sizes: &[usize], p: Option<usize>) -> Result<PlanNode> {
    let k = sizes.len();
    let node = plan_exp2(&sizes[..k - 1], p)?;
    Ok(PlanNode::ExtendEven {
        child: Box::new(node),
        even_dim: 0,
        m: sizes[k - 1],
        claimed_rl: (k - 1) / 2 + 1,
    })
}

/// Builds a construction plan for `spec`.
///
/// `exp` requires `3n` dimensions with a prime-power total size; `exp2`
/// requires `2n` even dimensions with odd parts powers of one prime. Both
/// claim run length `n + 1`. `auto` picks whichever recipe applies (stacking
/// leftover dimensions when the count does not fit), and otherwise falls
/// back to composing wherever a feasible split exists, claiming only the
/// trivial run length 1.
pub fn plan(spec: &TorusSpec, strategy: Strategy) -> Result<PlanNode> {
    if spec.directed_flags().iter().any(|&d| d) {
        return Err(Error::Unplannable("construction plans target undirected tori".into()));
    }
    let sizes = spec.sizes();
    match strategy {
        Strategy::Exp => {
            let p = prime_power_base(sizes).ok_or_else(|| {
                Error::Unplannable("exp strategy needs sizes that are powers of one prime".into())
            })?;
            if sizes.len() % 3 != 0 {
                return Err(Error::Unplannable(format!(
                    "exp strategy needs a multiple of 3 dimensions, got {}",
                    sizes.len()
                )));
            }
            plan_exp(sizes, p)
        }
        Strategy::Exp2 => {
            let p = even_with_common_odd_prime(sizes).ok_or_else(|| {
                Error::Unplannable(
                    "exp2 strategy needs even sizes with odd parts powers of one prime".into(),
                )
            })?;
            if sizes.len() % 2 != 0 {
                return Err(Error::Unplannable(format!(
                    "exp2 strategy needs an even number of dimensions, got {}",
                    sizes.len()
                )));
            }
            plan_exp2(sizes, p)
        }
        Strategy::Auto => {
            if let Some(p) = prime_power_base(sizes) {
                if sizes.len() % 3 == 0 {
                    return plan_exp(sizes, p);
                }
                if sizes.len() >= 3 {
                    if let Ok(node) = plan_exp_with_leftovers(sizes, p) {
                        return Ok(node);
                    }
                }
            }
            if let Some(p) = even_with_common_odd_prime(sizes) {
                if sizes.len() % 2 == 0 {
                    return plan_exp2(sizes, p);
                }
                if sizes.len() >= 3 {
                    if let Ok(node) = plan_exp2_with_leftover(sizes, p) {
                        return Ok(node);
                    }
                }
            }
            plan_general(sizes)
        }
    }
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

fn exec_node(node: &PlanNode, budget: &SearchBudget) -> Result<(Walk, PlanNode)> {
    match node {
        PlanNode::BaseSearch { spec, claimed_rl } => {
            let walk = oracle::best_cycle_up_to(spec, *claimed_rl, budget)?;
            Ok((walk, node.clone()))
        }
        PlanNode::Compose { left, right, prescribed, claimed_rl, .. } => {
            let (lw, lp) = exec_node(left, budget)?;
            let (rw, rp) = exec_node(right, budget)?;
            let best = compose_best(&lw, &rw)?;
            let annotated = PlanNode::Compose {
                left: Box::new(lp),
                right: Box::new(rp),
                prescribed: *prescribed,
                chosen: Some(ChosenSplit { split: best.split, order_swapped: best.order_swapped }),
                claimed_rl: *claimed_rl,
            };
            Ok((best.walk, annotated))
        }
        PlanNode::ExtendEven { child, even_dim, m, claimed_rl } => {
            let (cw, cp) = exec_node(child, budget)?;
            let ext = extend_even(&cw, *even_dim, *m)?;
            let annotated = PlanNode::ExtendEven {
                child: Box::new(cp),
                even_dim: *even_dim,
                m: *m,
                claimed_rl: *claimed_rl,
            };
            Ok((ext.walk, annotated))
        }
        PlanNode::ExtendMultiple { child, dim, m, claimed_rl } => {
            let (cw, cp) = exec_node(child, budget)?;
            let ext = extend_multiple(&cw, *dim, *m)?;
            let annotated = PlanNode::ExtendMultiple {
                child: Box::new(cp),
                dim: *dim,
                m: *m,
                claimed_rl: *claimed_rl,
            };
            Ok((ext.walk, annotated))
        }
    }
}

/// Executes a plan bottom-up and certifies the result. The returned
/// provenance is the plan annotated with the splits execution chose.
pub fn execute(plan: &PlanNode, budget: &SearchBudget) -> Result<CertifiedCycle> {
    let (walk, annotated) = exec_node(plan, budget)?;
    CertifiedCycle::certify(walk, plan.claimed_rl(), annotated)
}

/// Plans and executes in one call.
pub fn construct(spec: &TorusSpec, strategy: Strategy, budget: &SearchBudget) -> Result<CertifiedCycle> {
    let p = plan(spec, strategy)?;
    execute(&p, budget)
}

// ---------------------------------------------------------------------------
// Claims report
// ---------------------------------------------------------------------------

/// Identifier of an advertised bound under test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum ClaimId {
    Thm1Bound,
    Cor2,
    Cor3,
    ExampleRlk,
    ExampleExp,
    ExampleExp2,
    Thm3,
    Thm4,
}

/// What the claim predicts for the instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expectation {
    AtLeast(usize),
    LessThan(usize),
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expectation::AtLeast(v) => write!(f, "rl>={v}"),
            Expectation::LessThan(v) => write!(f, "mrl<{v}"),
        }
    }
}

/// Status of one claim on one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimOutcome {
    Met,
    Unmet,
    Counterexample,
    Skipped,
}

/// One machine-checked claim evaluation. `status` derives mechanically from
/// `expected` versus `measured`; `witness` carries the cycle that proves the
/// measurement where one exists.
#[derive(Debug, Clone)]
pub struct ClaimStatus {
    pub claim_id: ClaimId,
    pub instance: TorusSpec,
    pub expected: Expectation,
    pub measured: usize,
    pub status: ClaimOutcome,
    pub witness: Option<Walk>,
}

/// A finite family of claim instances, parsed from a descriptor string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// `rlk2:LO..HI` — directed 2-tori with both sizes in the range; tests
    /// the claim that a directed torus never reaches run length k.
    DirectedRlk { lo: usize, hi: usize },
    /// `compose2:LO..HI` — products of two cycles; tests the composition
    /// bound and its corollaries against exact maxima.
    ComposePairs { lo: usize, hi: usize },
    /// `exp:D1,D2,...` — the prime-power recipe on the given sizes.
    Exp { sizes: Vec<usize> },
    /// `exp2:D1,D2,...` — the even-size recipe on the given sizes.
    Exp2 { sizes: Vec<usize> },
    /// `thm3:D1,..:MLO..MHI` — reflection stacking of a constructed base.
    StackEven { sizes: Vec<usize>, m_lo: usize, m_hi: usize },
    /// `thm4:D1,..:J:M1,M2,..` — translation stacking of a constructed base.
    StackMultiple { sizes: Vec<usize>, dim: usize, ms: Vec<usize> },
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = s.split("..").collect();
    if parts.len() != 2 {
        return Err(Error::Parse { line: None, message: format!("expected LO..HI, got {s:?}") });
    }
    let lo = parts[0].parse().map_err(|_| bad_number(parts[0]))?;
    let hi = parts[1].parse().map_err(|_| bad_number(parts[1]))?;
    if lo < 2 || hi < lo {
        return Err(Error::Parse { line: None, message: format!("invalid range {s:?}") });
    }
    Ok((lo, hi))
}

fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    s.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| bad_number(t))).collect()
}

fn bad_number(t: &str) -> Error {
    Error::Parse { line: None, message: format!("invalid number {t:?}") }
}

impl Family {
    pub fn parse(desc: &str) -> Result<Family> {
        let (head, rest) = desc.split_once(':').ok_or_else(|| Error::Parse {
            line: None,
            message: format!("family descriptor {desc:?} has no ':'"),
        })?;
        match head {
            "rlk2" => {
                let (lo, hi) = parse_range(rest)?;
                Ok(Family::DirectedRlk { lo, hi })
            }
            "compose2" => {
                let (lo, hi) = parse_range(rest)?;
                Ok(Family::ComposePairs { lo, hi })
            }
            "exp" => Ok(Family::Exp { sizes: parse_sizes(rest)? }),
            "exp2" => Ok(Family::Exp2 { sizes: parse_sizes(rest)? }),
            "thm3" => {
                let (dims, mrange) = rest.rsplit_once(':').ok_or_else(|| Error::Parse {
                    line: None,
                    message: "thm3 needs thm3:D1,..:MLO..MHI".into(),
                })?;
                let (m_lo, m_hi) = parse_range(mrange)?;
                Ok(Family::StackEven { sizes: parse_sizes(dims)?, m_lo, m_hi })
            }
            "thm4" => {
                let parts: Vec<&str> = rest.split(':').collect();
                if parts.len() != 3 {
                    return Err(Error::Parse {
                        line: None,
                        message: "thm4 needs thm4:D1,..:J:M1,M2,..".into(),
                    });
                }
                let dim = parts[1].parse().map_err(|_| bad_number(parts[1]))?;
                Ok(Family::StackMultiple {
                    sizes: parse_sizes(parts[0])?,
                    dim,
                    ms: parse_sizes(parts[2])?,
                })
            }
            other => Err(Error::Parse {
                line: None,
                message: format!(
                    "unknown family {other:?} (expected rlk2, compose2, exp, exp2, thm3, thm4)"
                ),
            }),
        }
    }
}

/// Evaluates every applicable claim of the family, in deterministic
/// instance order. Budget exhaustion yields `skipped` statuses, never
/// fabricated decisions. Instances are independent; `workers > 1` evaluates
/// them on that many threads with the report assembled in instance order.
pub fn claims_report(family: &Family, budget: &SearchBudget, workers: usize) -> Result<Vec<ClaimStatus>> {
    match family {
        Family::DirectedRlk { lo, hi } => {
            let instances: Vec<(usize, usize)> =
                (*lo..=*hi).flat_map(|a| (*lo..=*hi).map(move |b| (a, b))).collect();
            let budget = budget.clone();
            let rows = parallel_map(instances, workers, move |(a, b)| rlk_status(a, b, &budget));
            rows.into_iter().collect()
        }
        Family::ComposePairs { lo, hi } => {
            let instances: Vec<(usize, usize)> =
                (*lo..=*hi).flat_map(|a| (a..=*hi).map(move |b| (a, b))).collect();
            let budget = budget.clone();
            let rows =
                parallel_map(instances, workers, move |(a, b)| compose_pair_statuses(a, b, &budget));
            let mut out = Vec::new();
            for r in rows {
                out.extend(r?);
            }
            Ok(out)
        }
        Family::Exp { sizes } => example_status(sizes, Strategy::Exp, ClaimId::ExampleExp, budget),
        Family::Exp2 { sizes } => example_status(sizes, Strategy::Exp2, ClaimId::ExampleExp2, budget),
        Family::StackEven { sizes, m_lo, m_hi } => {
            let base = construct(&TorusSpec::undirected(sizes.clone())?, Strategy::Auto, budget)?;
            let even_dim = sizes
                .iter()
                .position(|s| s % 2 == 0)
                .ok_or_else(|| Error::Unplannable("no even dimension to stack over".into()))?;
            let mut out = Vec::new();
            for m in *m_lo..=*m_hi {
                out.push(stack_even_status(&base, even_dim, m));
            }
            Ok(out)
        }
        Family::StackMultiple { sizes, dim, ms } => {
            let base = construct(&TorusSpec::undirected(sizes.clone())?, Strategy::Auto, budget)?;
            let mut out = Vec::new();
            for &m in ms {
                out.push(stack_multiple_status(&base, *dim, m));
            }
            Ok(out)
        }
    }
}

fn rlk_status(a: usize, b: usize, budget: &SearchBudget) -> Result<ClaimStatus> {
    let spec = TorusSpec::fully_directed(vec![a, b])?;
    let k = 2;
    let res = oracle::exact_mrl(&spec, budget);
    let status = if res.value >= k {
        ClaimOutcome::Counterexample
    } else if res.exhausted {
        ClaimOutcome::Met
    } else {
        ClaimOutcome::Skipped
    };
    Ok(ClaimStatus {
        claim_id: ClaimId::ExampleRlk,
        instance: spec,
        expected: Expectation::LessThan(k),
        measured: res.value,
        status,
        witness: res.witness,
    })
}

fn compose_pair_statuses(n1: usize, n2: usize, budget: &SearchBudget) -> Result<Vec<ClaimStatus>> {
    let splits = feasible_splits(n1, n2);
    if splits.is_empty() {
        return Ok(Vec::new());
    }
    let spec = TorusSpec::undirected(vec![n1, n2])?;
    let exact = oracle::exact_mrl(&spec, budget);
    let (rl1, rl2) = (1usize, 1usize); // factors are single cycles
    let mut out = Vec::new();

    let against = |bound: usize| -> ClaimOutcome {
        if exact.value >= bound {
            ClaimOutcome::Met
        } else if exact.exhausted {
            ClaimOutcome::Unmet
        } else {
            ClaimOutcome::Skipped
        }
    };

    // The headline bound, evaluated for the split the selection rule picks.
    let c1 = TorusSpec::fully_directed(vec![n1])?;
    let c2 = TorusSpec::fully_directed(vec![n2])?;
    let h1 = directed_ring(&c1);
    let h2 = directed_ring(&c2);
    let best = compose_best(&h1, &h2)?;
    let rl_a = if best.order_swapped { rl2 } else { rl1 };
    let bound = bound_thm1(rl_a, &best.split);
    out.push(ClaimStatus {
        claim_id: ClaimId::Thm1Bound,
        instance: spec.clone(),
        expected: Expectation::AtLeast(bound),
        measured: exact.value,
        status: against(bound),
        witness: exact.witness.clone(),
    });

    // Corollaries: evaluated on the first split satisfying their hypothesis;
    // skipped when none does or when the promised bound is trivial.
    let cor2_split = splits.iter().find(|s| corollary_conditions(rl1, rl2, s).exact_ratio);
    out.push(match cor2_split {
        Some(_) => ClaimStatus {
            claim_id: ClaimId::Cor2,
            instance: spec.clone(),
            expected: Expectation::AtLeast(rl1 + rl2),
            measured: exact.value,
            status: against(rl1 + rl2),
            witness: exact.witness.clone(),
        },
        None => ClaimStatus {
            claim_id: ClaimId::Cor2,
            instance: spec.clone(),
            expected: Expectation::AtLeast(rl1 + rl2),
            measured: exact.value,
            status: ClaimOutcome::Skipped,
            witness: None,
        },
    });

    let cor3_bound = rl1 + rl2 - 1;
    let cor3_applies = cor3_bound > 1
        && splits.iter().any(|s| corollary_conditions(rl1, rl2, s).near_ratio);
    out.push(ClaimStatus {
        claim_id: ClaimId::Cor3,
        instance: spec,
        expected: Expectation::AtLeast(cor3_bound),
        measured: exact.value,
        status: if cor3_applies { against(cor3_bound) } else { ClaimOutcome::Skipped },
        witness: if cor3_applies { exact.witness } else { None },
    });
    Ok(out)
}

fn directed_ring(spec: &TorusSpec) -> Walk {
    let n = spec.vertex_count();
    Walk::new(
        spec.clone(),
        crate::torus::Vertex::origin(spec),
        vec![crate::torus::Step::forward(0); n],
        true,
    )
    .expect("single directed ring is well-formed")
}

fn example_status(
    sizes: &[usize],
    strategy: Strategy,
    claim_id: ClaimId,
    budget: &SearchBudget,
) -> Result<Vec<ClaimStatus>> {
    let spec = TorusSpec::undirected(sizes.to_vec())?;
    let node = plan(&spec, strategy)?;
    let expected = Expectation::AtLeast(node.claimed_rl());
    let status = match execute(&node, budget) {
        Ok(cert) => ClaimStatus {
            claim_id,
            instance: spec,
            expected,
            measured: cert.measured_rl,
            status: if cert.claim_met { ClaimOutcome::Met } else { ClaimOutcome::Unmet },
            witness: Some(cert.walk),
        },
        Err(Error::BudgetExceeded { .. }) => ClaimStatus {
            claim_id,
            instance: spec,
            expected,
            measured: 0,
            status: ClaimOutcome::Skipped,
            witness: None,
        },
        Err(e) => return Err(e),
    };
    Ok(vec![status])
}

fn stack_even_status(base: &CertifiedCycle, even_dim: usize, m: usize) -> ClaimStatus {
    let rl = base.measured_rl;
    let instance = base
        .walk
        .torus()
        .with_extra_dim(m.max(2), false)
        .expect("stacked torus valid");
    match extend_even(&base.walk, even_dim, m) {
        Ok(ext) => ClaimStatus {
            claim_id: ClaimId::Thm3,
            instance: ext.walk.torus().clone(),
            expected: Expectation::AtLeast(rl),
            measured: ext.measured_rl,
            status: if ext.regressed_from.is_none() { ClaimOutcome::Met } else { ClaimOutcome::Unmet },
            witness: Some(ext.walk),
        },
        Err(_) => ClaimStatus {
            claim_id: ClaimId::Thm3,
            instance,
            expected: Expectation::AtLeast(rl),
            measured: 0,
            status: ClaimOutcome::Skipped,
            witness: None,
        },
    }
}

fn stack_multiple_status(base: &CertifiedCycle, dim: usize, m: usize) -> ClaimStatus {
    let rl = base.measured_rl;
    let instance = base
        .walk
        .torus()
        .with_extra_dim(m.max(2), false)
        .expect("stacked torus valid");
    match extend_multiple(&base.walk, dim, m) {
        Ok(ext) => ClaimStatus {
            claim_id: ClaimId::Thm4,
            instance: ext.walk.torus().clone(),
            expected: Expectation::AtLeast(rl),
            measured: ext.measured_rl,
            status: if ext.regressed_from.is_none() { ClaimOutcome::Met } else { ClaimOutcome::Unmet },
            witness: Some(ext.walk),
        },
        Err(_) => ClaimStatus {
            claim_id: ClaimId::Thm4,
            instance,
            expected: Expectation::AtLeast(rl),
            measured: 0,
            status: ClaimOutcome::Skipped,
            witness: None,
        },
    }
}

/// Maps `f` over `items`, preserving input order in the output. With more
/// than one worker the items are processed on scoped threads in contiguous
/// chunks; the fold is order-independent of scheduling.
fn parallel_map<T, R, F>(items: Vec<T>, workers: usize, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync,
{
    let workers = workers.max(1);
    if workers == 1 || items.len() <= 1 {
        return items.into_iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(workers);
    let mut slots: Vec<Vec<R>> = Vec::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        let mut items = items;
        while !items.is_empty() {
            let tail = items.split_off(items.len().min(chunk));
            let head = std::mem::replace(&mut items, tail);
            let f = &f;
            handles.push(scope.spawn(move || head.into_iter().map(f).collect::<Vec<R>>()));
        }
        for h in handles {
            slots.push(h.join().expect("claims worker panicked"));
        }
    });
    slots.into_iter().flatten().collect()
}
