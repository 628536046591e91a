//! Brute-force ground truth: exhaustive enumeration of the labeled
//! trees realizing a degree sequence, dense-solver extremal reports,
//! and end-to-end verification of the main results at exhaustive
//! scale. Everything here is deterministic: enumeration follows the
//! lexicographic order of the codes, and parallel evaluation merges
//! in input order.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::degseq::{
    enumerate_tree_sequences, majorization_compare, DegreeSequence, MajorizationRelation,
};
use crate::rearrange::majorization_chain;
use crate::spectral::{dense_max_eigenvalue, max_laplacian_eigenpair};
use crate::tree::{
    build_bfd_tree, canonical_code, has_bfd_ordering, prufer_decode, CanonicalCode, Tree,
};
use crate::{Error, Result};

/// Labeled-class budget applied when the caller does not supply one.
pub const DEFAULT_ENUM_BUDGET: u64 = 10_000_000;

/// Two eigenvalues within 1e-9 · max(1, λ) of each other count as tied
/// when grouping maximizers; dense results at enumeration scale are
/// accurate to roughly 1e-12, so the band separates ties from noise.
const GROUPING_TOL: f64 = 1e-9;

/// What brute force found in one degree class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalReport {
    pub sequence: DegreeSequence,
    pub class_size_labeled: u128,
    pub class_size_unlabeled: usize,
    pub max_lambda: f64,
    /// Canonical codes of every member within the grouping tolerance
    /// of the maximum; sorted, so reports compare bit-for-bit.
    pub maximizer_codes: BTreeSet<CanonicalCode>,
    pub bfd_code: CanonicalCode,
    pub bfd_lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremId {
    Thm1,
    Thm2,
    Cor3,
    Cor4,
    Lemma1,
    Lemma2,
}

impl fmt::Display for TheoremId {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            TheoremId::Thm1 => "thm1",
            TheoremId::Thm2 => "thm2",
            TheoremId::Cor3 => "cor3",
            TheoremId::Cor4 => "cor4",
            TheoremId::Lemma1 => "lemma1",
            TheoremId::Lemma2 => "lemma2",
        };
        out.write_str(name)
    }
}

/// Outcome of checking one claim on one instance. A failed report
/// always carries a witness describing what went wrong.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub theorem: TheoremId,
    pub instance: String,
    pub passed: bool,
    pub witness: Option<String>,
    pub tolerance: f64,
}

impl VerificationReport {
    fn conclude(
        theorem: TheoremId,
        instance: String,
        tolerance: f64,
        failures: Vec<String>,
    ) -> Self {
        let passed = failures.is_empty();
        VerificationReport {
            theorem,
            instance,
            passed,
            witness: if passed {
                None
            } else {
                Some(failures.join("; "))
            },
            tolerance,
        }
    }
}

/// Number of labeled trees in which vertex i has degree exactly d_i:
/// the multinomial (n−2)! / Π (d_i − 1)!. Saturates at u128::MAX if
/// the count overflows, which any sane budget rejects anyway.
pub fn class_size_labeled(pi: &DegreeSequence) -> Result<u128> {
    if !pi.is_tree_sequence() {
        return Err(Error::NotTreeSequence(pi.to_string()));
    }
    let mut result: u128 = 1;
    let mut placed: u128 = 0;
    for &d in pi.degrees() {
        for j in 1..=(d as u128).saturating_sub(1) {
            placed += 1;
            // Exact at every step: result is a running multinomial.
            match result.checked_mul(placed) {
                Some(v) => result = v / j,
                None => return Ok(u128::MAX),
            }
        }
    }
    Ok(result)
}

fn next_multiset_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Streams the labeled trees in which vertex i has degree exactly
/// pi\[i\], in lexicographic order of the underlying codes. With
/// `dedupe`, only the first representative of each isomorphism class
/// is yielded.
pub struct TreeEnumeration {
    code: Vec<usize>,
    started: bool,
    done: bool,
    seen: Option<HashSet<CanonicalCode>>,
}

impl Iterator for TreeEnumeration {
    type Item = Tree;

    fn next(&mut self) -> Option<Tree> {
        loop {
            if self.done {
                return None;
            }
            if self.started {
                if !next_multiset_permutation(&mut self.code) {
                    self.done = true;
                    return None;
                }
            } else {
                self.started = true;
            }
            let t = prufer_decode(&self.code).expect("enumeration codes are in range");
            if let Some(seen) = &mut self.seen {
                if !seen.insert(canonical_code(&t)) {
                    continue;
                }
            }
            return Some(t);
        }
    }
}

/// Enumerates every labeled tree whose vertex i has degree pi\[i\].
/// Every unlabeled shape with degree multiset pi appears among the
/// stream (vertex relabeling within equal degrees is exhausted), so
/// the deduped stream is exactly the isomorphism classes of pi.
pub fn enumerate_trees(pi: &DegreeSequence, dedupe: bool) -> Result<TreeEnumeration> {
    if !pi.is_tree_sequence() {
        return Err(Error::NotTreeSequence(pi.to_string()));
    }
    if pi.n() < 2 {
        return Err(Error::InvalidInput(
            "enumeration needs at least 2 vertices".into(),
        ));
    }
    let mut code = Vec::with_capacity(pi.n().saturating_sub(2));
    for (i, &d) in pi.degrees().iter().enumerate() {
        for _ in 1..d {
            code.push(i);
        }
    }
    Ok(TreeEnumeration {
        code,
        started: false,
        done: false,
        seen: dedupe.then(HashSet::new),
    })
}

/// Exhausts the class of pi with the dense solver and reports the
/// maximum eigenvalue, every maximizing shape, and the BFD-tree's
/// data for comparison. Errors if the labeled class size exceeds the
/// budget.
pub fn find_extremal_bruteforce(pi: &DegreeSequence, budget: u64) -> Result<ExtremalReport> {
    let labeled = class_size_labeled(pi)?;
    if labeled > u128::from(budget) {
        return Err(Error::BudgetExceeded {
            size: labeled,
            budget,
        });
    }
    let bfd = build_bfd_tree(pi)?;
    let bfd_code = canonical_code(&bfd);
    let bfd_lambda = dense_max_eigenvalue(&bfd)?;

    let mut members: Vec<(CanonicalCode, f64)> = Vec::new();
    for t in enumerate_trees(pi, true)? {
        members.push((canonical_code(&t), dense_max_eigenvalue(&t)?));
    }
    let max_lambda = members
        .iter()
        .map(|&(_, l)| l)
        .fold(f64::NEG_INFINITY, f64::max);
    let band = GROUPING_TOL * max_lambda.max(1.0);
    let maximizer_codes: BTreeSet<CanonicalCode> = members
        .iter()
        .filter(|&&(_, l)| l >= max_lambda - band)
        .map(|(c, _)| c.clone())
        .collect();
    Ok(ExtremalReport {
        sequence: pi.clone(),
        class_size_labeled: labeled,
        class_size_unlabeled: members.len(),
        max_lambda,
        maximizer_codes,
        bfd_code,
        bfd_lambda,
    })
}

/// Checks, by exhaustion, that the BFD-tree is the unique maximizer of
/// the top Laplacian eigenvalue in its class and that no other shape
/// admits a BFD-ordering.
pub fn verify_theorem1(pi: &DegreeSequence, tol: f64, budget: u64) -> Result<VerificationReport> {
    let report = find_extremal_bruteforce(pi, budget)?;
    let mut failures = Vec::new();

    let expected: BTreeSet<CanonicalCode> = BTreeSet::from([report.bfd_code.clone()]);
    if report.maximizer_codes != expected {
        failures.push(format!(
            "maximizers are not exactly the BFD shape: {:?}",
            report.maximizer_codes
        ));
    }
    if (report.max_lambda - report.bfd_lambda).abs() > tol {
        failures.push(format!(
            "brute-force maximum {:.12} differs from the BFD eigenvalue {:.12}",
            report.max_lambda, report.bfd_lambda
        ));
    }
    for t in enumerate_trees(pi, true)? {
        if has_bfd_ordering(&t).is_some() && canonical_code(&t) != report.bfd_code {
            failures.push(format!(
                "a non-BFD shape admits a BFD-ordering: {}",
                canonical_code(&t)
            ));
        }
    }
    Ok(VerificationReport::conclude(
        TheoremId::Thm1,
        format!("pi={pi}"),
        tol,
        failures,
    ))
}

/// Checks strict eigenvalue monotonicity across a majorization step:
/// the dominated sequence's BFD eigenvalue must sit strictly below the
/// dominating one's, and the step-by-step chain must exist with the
/// eigenvalue climbing at every link.
pub fn verify_theorem2(
    pi: &DegreeSequence,
    pi_prime: &DegreeSequence,
    tol: f64,
) -> Result<VerificationReport> {
    match majorization_compare(pi, pi_prime) {
        MajorizationRelation::Less => {}
        other => {
            return Err(Error::NotComparable(format!(
                "need {pi} strictly below {pi_prime}, got {other:?}"
            )))
        }
    }
    let mut failures = Vec::new();
    let lambda = max_laplacian_eigenpair(&build_bfd_tree(pi)?, 1e-10)?.lambda;
    let lambda_prime = max_laplacian_eigenpair(&build_bfd_tree(pi_prime)?, 1e-10)?.lambda;
    let separated = lambda < lambda_prime - tol;
    if !separated {
        failures.push(format!(
            "eigenvalues not separated: {lambda:.12} vs {lambda_prime:.12}"
        ));
    }
    match majorization_chain(pi, pi_prime) {
        Ok(chain) => {
            for (i, (_, step)) in chain.iter().enumerate() {
                let increased = step.lambda_after > step.lambda_before;
                if !increased {
                    failures.push(format!(
                        "chain step {i} did not increase the eigenvalue: {:.12} -> {:.12}",
                        step.lambda_before, step.lambda_after
                    ));
                }
            }
            if let Some((last, _)) = chain.last() {
                if last.degree_sequence() != *pi_prime {
                    failures.push("chain did not land on the target sequence".into());
                }
            } else {
                failures.push("chain is empty for a strict relation".into());
            }
        }
        Err(e) => failures.push(format!("chain construction failed: {e}")),
    }
    Ok(VerificationReport::conclude(
        TheoremId::Thm2,
        format!("pi={pi} pi'={pi_prime}"),
        tol,
        failures,
    ))
}

fn bfd_lambda_of(pi: &DegreeSequence) -> Result<f64> {
    Ok(max_laplacian_eigenpair(&build_bfd_tree(pi)?, 1e-10)?.lambda)
}

/// Checks that among all degree classes on n vertices the star's class
/// carries the strictly largest BFD eigenvalue and that its value is n.
pub fn verify_corollary3(n: usize, tol: f64) -> Result<VerificationReport> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 vertices, got {n}"
        )));
    }
    let sequences = enumerate_tree_sequences(n)?;
    let lambdas: Vec<f64> = sequences
        .par_iter()
        .map(bfd_lambda_of)
        .collect::<Result<_>>()?;
    let star = DegreeSequence::star(n)?;
    let mut failures = Vec::new();
    let star_lambda = sequences
        .iter()
        .position(|s| *s == star)
        .map(|i| lambdas[i]);
    let star_lambda = match star_lambda {
        Some(l) => l,
        None => {
            return Err(Error::Anomaly(
                "sequence enumeration omitted the star".into(),
            ))
        }
    };
    if (star_lambda - n as f64).abs() > tol {
        failures.push(format!(
            "star eigenvalue {star_lambda:.12} differs from {n}"
        ));
    }
    let band = GROUPING_TOL * star_lambda.max(1.0);
    for (seq, &l) in sequences.iter().zip(&lambdas) {
        if *seq == star {
            continue;
        }
        if l >= star_lambda - band {
            failures.push(format!(
                "class {seq} reaches {l:.12}, not strictly below the star's {star_lambda:.12}"
            ));
        }
    }
    Ok(VerificationReport::conclude(
        TheoremId::Cor3,
        format!("n={n}"),
        tol,
        failures,
    ))
}

/// The claimed maximizer among classes with exactly k pendant
/// vertices: one vertex of degree k, the rest interior of degree 2.
fn spider_sequence(n: usize, k: usize) -> Result<DegreeSequence> {
    let mut degrees = Vec::with_capacity(n);
    degrees.push(k);
    degrees.extend(std::iter::repeat_n(2, n - k - 1));
    degrees.extend(std::iter::repeat_n(1, k));
    DegreeSequence::new(degrees)
}

/// Leg lengths of t seen from the center vertex, or None if some
/// vertex off the center branches.
fn spider_legs(t: &Tree, center: usize) -> Option<Vec<usize>> {
    let mut legs = Vec::new();
    for &start in t.neighbors(center) {
        let (mut prev, mut cur, mut len) = (center, start, 1usize);
        loop {
            let next: Vec<usize> = t
                .neighbors(cur)
                .iter()
                .copied()
                .filter(|&w| w != prev)
                .collect();
            match next.len() {
                0 => break,
                1 => {
                    prev = cur;
                    cur = next[0];
                    len += 1;
                }
                _ => return None,
            }
        }
        legs.push(len);
    }
    Some(legs)
}

/// Checks that among all classes on n vertices with exactly k pendant
/// vertices, the balanced spider's class wins strictly, and that the
/// constructed maximizer really is a spider with near-equal legs.
/// When the combined labeled size of all candidate classes fits the
/// budget, the winner is additionally cross-checked against the
/// brute-force maximum over every tree with k leaves.
pub fn verify_corollary4(n: usize, k: usize, tol: f64, budget: u64) -> Result<VerificationReport> {
    if n < 3 || k < 2 || k > n - 1 {
        return Err(Error::InvalidInput(format!(
            "need n >= 3 and 2 <= k <= n-1, got n={n}, k={k}"
        )));
    }
    let spider_seq = spider_sequence(n, k)?;
    let candidates: Vec<DegreeSequence> = enumerate_tree_sequences(n)?
        .into_iter()
        .filter(|s| s.degrees().iter().filter(|&&d| d == 1).count() == k)
        .collect();
    if !candidates.contains(&spider_seq) {
        return Err(Error::Anomaly(format!(
            "candidate enumeration omitted {spider_seq}"
        )));
    }
    let lambdas: Vec<f64> = candidates
        .par_iter()
        .map(bfd_lambda_of)
        .collect::<Result<_>>()?;

    let mut failures = Vec::new();
    let spider_pos = candidates.iter().position(|s| *s == spider_seq).unwrap();
    let spider_lambda = lambdas[spider_pos];
    let band = GROUPING_TOL * spider_lambda.max(1.0);
    for (seq, &l) in candidates.iter().zip(&lambdas) {
        if *seq == spider_seq {
            continue;
        }
        if l >= spider_lambda - band {
            failures.push(format!(
                "class {seq} reaches {l:.12}, tying or beating {spider_seq} at {spider_lambda:.12}"
            ));
        }
    }

    let spider = build_bfd_tree(&spider_seq)?;
    match spider_legs(&spider, 0) {
        Some(legs) => {
            let lo = legs.iter().min().copied().unwrap_or(0);
            let hi = legs.iter().max().copied().unwrap_or(0);
            if legs.len() != k || hi - lo > 1 {
                failures.push(format!(
                    "constructed maximizer has legs {legs:?}, not {k} near-equal paths"
                ));
            }
        }
        None => failures.push("constructed maximizer is not a spider".into()),
    }

    let mut total_labeled: u128 = 0;
    for seq in &candidates {
        total_labeled = total_labeled.saturating_add(class_size_labeled(seq)?);
    }
    if total_labeled <= u128::from(budget) {
        let spider_code = canonical_code(&spider);
        let reports: Vec<ExtremalReport> = candidates
            .par_iter()
            .map(|seq| find_extremal_bruteforce(seq, budget))
            .collect::<Result<_>>()?;
        let global_max = reports
            .iter()
            .map(|r| r.max_lambda)
            .fold(f64::NEG_INFINITY, f64::max);
        let band = GROUPING_TOL * global_max.max(1.0);
        let mut winners: BTreeSet<CanonicalCode> = BTreeSet::new();
        for r in &reports {
            for (code, _) in r
                .maximizer_codes
                .iter()
                .map(|c| (c, ()))
                .filter(|_| r.max_lambda >= global_max - band)
            {
                winners.insert(code.clone());
            }
        }
        if winners != BTreeSet::from([spider_code.clone()]) {
            failures.push(format!(
                "brute force over all {k}-leaf trees crowns {winners:?} instead of exactly {spider_code}"
            ));
        }
        if (global_max - spider_lambda).abs() > tol {
            failures.push(format!(
                "brute-force maximum {global_max:.12} differs from the spider's {spider_lambda:.12}"
            ));
        }
    }

    Ok(VerificationReport::conclude(
        TheoremId::Cor4,
        format!("n={n} k={k}"),
        tol,
        failures,
    ))
}
