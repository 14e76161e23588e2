//! Exhaustive classification of the normal-form families over `F_p` into
//! isomorphism and isotopism classes.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::StructureTable;
use crate::error::{Error, Result};
use crate::families::{build, Family};
use crate::field::{Field, Fp};
use crate::invariants::{fingerprint, Fingerprint};
use crate::linalg::Matrix;
use crate::morphism::{
    closed_form_rule_g7, find_isomorphism, heuristic_isotopism_search, known_isotopisms, matrix_from_images,
    verify_isomorphism, verify_isotopism, Certificate, ClosedFormRule, IsoWitness, IsotopyBudget, SearchOptions,
    Verdict,
};

/// A family member together with its structure table.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub family: Family<u32>,
    pub table: StructureTable<Fp>,
}

impl Candidate {
    pub fn new(family: Family<u32>, p: u32) -> Result<Self> {
        let table = build(&Fp::new(p)?, &family)?;
        Ok(Self { family, table })
    }
}

/// Every normal form of the given dimension over `F_p`.
pub fn enumerate_candidates(dim: usize, p: u32) -> Result<Vec<Candidate>> {
    Fp::new(p)?;
    let families: Vec<Family<u32>> = match dim {
        5 => vec![Family::Model(5), Family::Dim5NonModel],
        6 => (0..p.pow(3))
            .map(|x| Family::G6 {
                a: x / (p * p),
                b: x / p % p,
                c: x % p,
            })
            .collect(),
        7 => {
            let mut v: Vec<Family<u32>> = (0..p.pow(4))
                .map(|x| Family::G7 {
                    a: x / (p * p * p),
                    b: x / (p * p) % p,
                    c: x / p % p,
                    d: x % p,
                })
                .collect();
            if p == 2 {
                v.extend([
                    Family::G7Type2(0),
                    Family::G7Type2(1),
                    Family::H7Type3(0),
                    Family::H7Type3(1),
                ]);
            }
            v
        }
        n => return Err(Error::UnsupportedDim(n)),
    };
    families.into_iter().map(|f| Candidate::new(f, p)).collect()
}

pub(crate) fn matrix_rows(m: &Matrix<Fp>) -> Vec<Vec<u32>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

pub(crate) fn matrix_from_rows(p: u32, rows: &[Vec<u32>]) -> Result<Matrix<Fp>> {
    let field = Fp::new(p)?;
    let cols = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.iter().any(|&x| x >= p)) {
        return Err(Error::Report("matrix entry out of range".into()));
    }
    Matrix::from_rows(field, cols, rows)
}

/// How a member was attached to its isomorphism class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IsoMerge {
    /// Decided from the parameters; the witness is present when a search
    /// cross-check was run.
    ClosedForm {
        rule: ClosedFormRule,
        witness: Option<Vec<Vec<u32>>>,
    },
    Search { witness: Vec<Vec<u32>> },
    /// `e_1 -> e_1, e_i -> (c/C) e_i`.
    ScalingWitness { witness: Vec<Vec<u32>> },
}

impl IsoMerge {
    pub fn witness(&self) -> Option<&Vec<Vec<u32>>> {
        match self {
            IsoMerge::ClosedForm { witness, .. } => witness.as_ref(),
            IsoMerge::Search { witness } | IsoMerge::ScalingWitness { witness } => Some(witness),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassMember {
    pub family: Family<u32>,
    /// `None` for the representative. Witnesses map the member to the
    /// representative.
    pub merge: Option<IsoMerge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoClass {
    pub representative: Family<u32>,
    pub fingerprint: Fingerprint,
    pub members: Vec<ClassMember>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeparationCertificate {
    FingerprintMismatch { detail: String },
    ExhaustedSearch { nodes: u64 },
    /// No isotopism was found within the stated budget; not a proof.
    HeuristicOnly { ansatz: String, budget: u64, explored: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    pub first: Family<u32>,
    pub second: Family<u32>,
    pub certificate: SeparationCertificate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkOrigin {
    Known,
    Search,
}

/// A verified isotopism `(f, g, h)` from `source` to `target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsotopyLink {
    pub source: Family<u32>,
    pub target: Family<u32>,
    pub f: Vec<Vec<u32>>,
    pub g: Vec<Vec<u32>>,
    pub h: Vec<Vec<u32>>,
    pub origin: LinkOrigin,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsotopyClass {
    pub representative: Family<u32>,
    /// Representatives of the isomorphism classes in this isotopism class.
    pub iso_classes: Vec<Family<u32>>,
    pub links: Vec<IsotopyLink>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub iso_classes: usize,
    pub isotopy_classes: usize,
}

/// Class counts known for the families.
pub fn expected_counts(dim: usize, p: u32) -> Option<Expected> {
    let (iso_classes, isotopy_classes) = match (dim, p) {
        (5, _) => (2, 2),
        (6, 2) => (6, 5),
        (6, _) => (5, 5),
        (7, 2) => (15, 10),
        (7, p) => (p as usize + 8, 8),
        _ => return None,
    };
    Some(Expected {
        iso_classes,
        isotopy_classes,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossChecks {
    pub performed: usize,
    pub disagreements: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub dim: usize,
    pub characteristic: u32,
    pub candidate_count: usize,
    pub iso_classes: Vec<IsoClass>,
    pub iso_separations: Vec<Separation>,
    pub isotopy_classes: Option<Vec<IsotopyClass>>,
    pub isotopy_separations: Option<Vec<Separation>>,
    pub expected: Option<Expected>,
    pub matches: bool,
    pub cross_checks: CrossChecks,
    pub seconds: f64,
}

impl ClassificationReport {
    fn refresh_match(&mut self) {
        self.matches = match self.expected {
            None => true,
            Some(e) => {
                self.iso_classes.len() == e.iso_classes
                    && self
                        .isotopy_classes
                        .as_ref()
                        .is_none_or(|c| c.len() == e.isotopy_classes)
                    && self.cross_checks.disagreements == 0
            }
        };
    }

    /// Human-readable summary.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "dimension {} over F_{}: {} candidates\n",
            self.dim, self.characteristic, self.candidate_count
        );
        let exp = |f: fn(&Expected) -> usize| self.expected.as_ref().map_or("-".to_string(), |e| f(e).to_string());
        s += &format!(
            "isomorphism classes: expected {}, found {}\n",
            exp(|e| e.iso_classes),
            self.iso_classes.len()
        );
        for c in &self.iso_classes {
            s += &format!("  {} ({} members)\n", c.representative, c.members.len());
        }
        if let Some(iso) = &self.isotopy_classes {
            s += &format!(
                "isotopism classes: expected {}, found {}\n",
                exp(|e| e.isotopy_classes),
                iso.len()
            );
            for c in iso {
                let names: Vec<String> = c.iso_classes.iter().map(|f| f.to_string()).collect();
                s += &format!("  {}: {}\n", c.representative, names.join(", "));
            }
            let heuristic = self.heuristic_separations();
            if !heuristic.is_empty() {
                s += "separations without a certificate (no isotopism found within budget):\n";
                for (a, b) in heuristic {
                    s += &format!("  {a} / {b}\n");
                }
            }
        }
        if self.cross_checks.performed > 0 {
            s += &format!(
                "search cross-checks: {} performed, {} disagreements\n",
                self.cross_checks.performed, self.cross_checks.disagreements
            );
        }
        s += if self.matches { "result: match\n" } else { "result: MISMATCH\n" };
        s
    }

    /// Isotopism separations carrying only a heuristic label.
    pub fn heuristic_separations(&self) -> Vec<(Family<u32>, Family<u32>)> {
        self.isotopy_separations
            .iter()
            .flatten()
            .filter(|s| matches!(s.certificate, SeparationCertificate::HeuristicOnly { .. }))
            .map(|s| (s.first.clone(), s.second.clone()))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    /// Seed for sampled cross-checks and the isotopism search.
    pub seed: u64,
    /// From this prime on, closed-form decisions are cross-checked by search
    /// only on a sample.
    pub sampling_from_prime: u32,
    pub sample_fraction: f64,
    /// Group by fingerprint and use closed forms. When false every decision
    /// is a plain isomorphism search.
    pub use_fingerprints: bool,
    pub isotopy: bool,
    pub isotopy_budget: IsotopyBudget,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            sampling_from_prime: 11,
            sample_fraction: 0.05,
            use_fingerprints: true,
            isotopy: false,
            isotopy_budget: IsotopyBudget::default(),
        }
    }
}

fn g7_params(f: &Family<u32>) -> Option<[u32; 4]> {
    match f {
        Family::G7 { a, b, c, d } => Some([*a, *b, *c, *d]),
        _ => None,
    }
}

fn scaling_witness(x: &Family<u32>, y: &Family<u32>, p: u32) -> Option<Matrix<Fp>> {
    match (x, y) {
        (Family::G6 { a: 0, b: 0, c }, Family::G6 { a: 0, b: 0, c: cc }) if *c != 0 && *cc != 0 => {
            let field = Fp::new(p).ok()?;
            let s = field.mul(c, &field.inv(cc).ok()?);
            let images: Vec<(usize, Vec<(usize, u32)>)> = (2..=6).map(|i| (i, vec![(i, s)])).collect();
            Some(matrix_from_images(&field, 6, &images))
        }
        _ => None,
    }
}

struct Decider<'a> {
    p: u32,
    opts: &'a ClassifyOptions,
    search: SearchOptions,
}

struct Decision {
    merge: Option<IsoMerge>,
    cross_checked: bool,
    disagreement: bool,
}

impl Decider<'_> {
    fn sampled(&self, x: &Family<u32>, y: &Family<u32>) -> bool {
        if self.p < self.opts.sampling_from_prime {
            return true;
        }
        // a per-pair seed keeps the sample independent of evaluation order
        let key = format!("{x}|{y}");
        let mut h: u64 = self.opts.seed ^ 0x9e37_79b9_7f4a_7c15;
        for b in key.bytes() {
            h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
        }
        ChaCha8Rng::seed_from_u64(h).gen_bool(self.opts.sample_fraction)
    }

    fn search(&self, a: &Candidate, b: &Candidate) -> Result<Option<IsoWitness<Fp>>> {
        match find_isomorphism(&a.table, &b.table, &self.search)? {
            Verdict::Isomorphic(w) => Ok(Some(w)),
            Verdict::NotIsomorphic(_) => Ok(None),
            other => Err(Error::Inconsistent(format!("unbounded search returned {other:?}"))),
        }
    }

    fn decide(&self, member: &Candidate, rep: &Candidate) -> Result<Decision> {
        if self.opts.use_fingerprints {
            if let (Some(x), Some(y)) = (g7_params(&member.family), g7_params(&rep.family)) {
                if let Ok((iso, rule)) = closed_form_rule_g7(x, y, self.p) {
                    let check = iso && self.sampled(&member.family, &rep.family);
                    if !check {
                        return Ok(Decision {
                            merge: iso.then_some(IsoMerge::ClosedForm { rule, witness: None }),
                            cross_checked: false,
                            disagreement: false,
                        });
                    }
                    let w = self.search(member, rep)?;
                    return Ok(Decision {
                        disagreement: w.is_none(),
                        merge: Some(IsoMerge::ClosedForm {
                            rule,
                            witness: w.map(|w| matrix_rows(&w.matrix)),
                        }),
                        cross_checked: true,
                    });
                }
            }
            if let Some(m) = scaling_witness(&member.family, &rep.family, self.p) {
                if verify_isomorphism(&member.table, &rep.table, &m)? {
                    return Ok(Decision {
                        merge: Some(IsoMerge::ScalingWitness {
                            witness: matrix_rows(&m),
                        }),
                        cross_checked: false,
                        disagreement: false,
                    });
                }
            }
        }
        Ok(Decision {
            merge: self
                .search(member, rep)?
                .map(|w| IsoMerge::Search {
                    witness: matrix_rows(&w.matrix),
                }),
            cross_checked: false,
            disagreement: false,
        })
    }
}

struct GroupResult {
    classes: Vec<(usize, Vec<ClassMember>)>,
    cross: CrossChecks,
}

fn partition_group(cands: &[Candidate], group: &[usize], decider: &Decider<'_>) -> Result<GroupResult> {
    let mut classes: Vec<(usize, Vec<ClassMember>)> = Vec::new();
    let mut cross = CrossChecks::default();
    for &i in group {
        let mut placed = false;
        for (rep, members) in classes.iter_mut() {
            let d = decider.decide(&cands[i], &cands[*rep])?;
            cross.performed += d.cross_checked as usize;
            cross.disagreements += d.disagreement as usize;
            if let Some(m) = d.merge {
                members.push(ClassMember {
                    family: cands[i].family.clone(),
                    merge: Some(m),
                });
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push((
                i,
                vec![ClassMember {
                    family: cands[i].family.clone(),
                    merge: None,
                }],
            ));
        }
    }
    Ok(GroupResult { classes, cross })
}

/// Partition into isomorphism classes. Candidates are grouped by
/// fingerprint; inside a group, `g7` pairs use the closed-form criteria and
/// everything else uses the isomorphism search. Representatives are the
/// lexicographically least members. Representatives of distinct classes
/// with equal fingerprints are separated by an exhaustive search.
pub fn partition_isomorphism(cands: &[Candidate], opts: &ClassifyOptions) -> Result<ClassificationReport> {
    let start = Instant::now();
    let Some(first) = cands.first() else {
        return Err(Error::IndexError("no candidates".into()));
    };
    let dim = first.table.dim();
    let p = first.table.field().p();
    if cands.iter().any(|c| c.table.dim() != dim || c.table.field().p() != p) {
        return Err(Error::FieldMismatch);
    }
    let mut order: Vec<usize> = (0..cands.len()).collect();
    order.sort_by(|&x, &y| cands[x].family.sort_key().cmp(&cands[y].family.sort_key()));

    let fps: Vec<Fingerprint> = cands
        .par_iter()
        .map(|c| fingerprint(&c.table))
        .collect::<Result<_>>()?;

    let mut groups: BTreeMap<Option<&Fingerprint>, Vec<usize>> = BTreeMap::new();
    for &i in &order {
        let key = opts.use_fingerprints.then_some(&fps[i]);
        groups.entry(key).or_default().push(i);
    }
    let decider = Decider {
        p,
        opts,
        search: SearchOptions {
            node_budget: None,
            use_fingerprints: false,
        },
    };
    let group_list: Vec<&Vec<usize>> = groups.values().collect();
    let results: Vec<GroupResult> = group_list
        .par_iter()
        .map(|g| partition_group(cands, g, &decider))
        .collect::<Result<_>>()?;

    let mut cross = CrossChecks::default();
    let mut classes: Vec<(usize, Vec<ClassMember>)> = Vec::new();
    for r in results {
        cross.performed += r.cross.performed;
        cross.disagreements += r.cross.disagreements;
        classes.extend(r.classes);
    }
    classes.sort_by(|x, y| cands[x.0].family.sort_key().cmp(&cands[y.0].family.sort_key()));

    // separation certificates between representatives
    let pairs: Vec<(usize, usize)> = (0..classes.len())
        .flat_map(|i| (i + 1..classes.len()).map(move |j| (i, j)))
        .collect();
    let separations: Vec<Separation> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (x, y) = (classes[i].0, classes[j].0);
            let certificate = match fps[x].first_difference(&fps[y]) {
                Some(detail) => SeparationCertificate::FingerprintMismatch { detail },
                None => match find_isomorphism(&cands[x].table, &cands[y].table, &decider.search)? {
                    Verdict::NotIsomorphic(Certificate::ExhaustedSearch { nodes }) => {
                        SeparationCertificate::ExhaustedSearch { nodes }
                    }
                    other => {
                        return Err(Error::Inconsistent(format!(
                            "{} and {} were put in different classes but the search gave {other:?}",
                            cands[x].family, cands[y].family
                        )))
                    }
                },
            };
            Ok(Separation {
                first: cands[x].family.clone(),
                second: cands[y].family.clone(),
                certificate,
            })
        })
        .collect::<Result<_>>()?;

    let iso_classes = classes
        .into_iter()
        .map(|(rep, members)| IsoClass {
            representative: cands[rep].family.clone(),
            fingerprint: fps[rep].clone(),
            members,
        })
        .collect();
    let mut report = ClassificationReport {
        dim,
        characteristic: p,
        candidate_count: cands.len(),
        iso_classes,
        iso_separations: separations,
        isotopy_classes: None,
        isotopy_separations: None,
        expected: expected_counts(dim, p),
        matches: false,
        cross_checks: cross,
        seconds: 0.0,
    };
    report.refresh_match();
    report.seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

fn find_root(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Extend an isomorphism report with isotopism classes. Isomorphism classes
/// are merged along the known explicit isotopisms and along isotopisms found
/// by the bounded search; classes whose `d`-sequences differ are separated
/// by that invariant.
/// Remaining separations are labeled heuristic.
pub fn partition_isotopism(report: &mut ClassificationReport, opts: &ClassifyOptions) -> Result<()> {
    let start = Instant::now();
    let p = report.characteristic;
    let field = Fp::new(p)?;
    let n = report.iso_classes.len();
    let reps: Vec<Candidate> = report
        .iso_classes
        .iter()
        .map(|c| Candidate::new(c.representative.clone(), p))
        .collect::<Result<_>>()?;
    let mut class_of: HashMap<Family<u32>, usize> = HashMap::new();
    for (i, c) in report.iso_classes.iter().enumerate() {
        for m in &c.members {
            class_of.insert(m.family.clone(), i);
        }
    }
    let mut parent: Vec<usize> = (0..n).collect();
    let mut links: Vec<(usize, IsotopyLink)> = Vec::new();

    if matches!(report.dim, 6 | 7) {
        for k in known_isotopisms(report.dim, p)? {
            let (Some(&i), Some(&j)) = (class_of.get(&k.source), class_of.get(&k.target)) else {
                continue;
            };
            let (ri, rj) = (find_root(&mut parent, i), find_root(&mut parent, j));
            if ri == rj {
                continue;
            }
            let a = build(&field, &k.source)?;
            let b = build(&field, &k.target)?;
            if !k.witness.verify(&a, &b)? {
                return Err(Error::Inconsistent(format!("stated isotopism {} -> {} fails", k.source, k.target)));
            }
            parent[ri.max(rj)] = ri.min(rj);
            links.push((
                i,
                IsotopyLink {
                    source: k.source,
                    target: k.target,
                    f: matrix_rows(&k.witness.f),
                    g: matrix_rows(&k.witness.g),
                    h: matrix_rows(&k.witness.h),
                    origin: LinkOrigin::Known,
                },
            ));
        }
    }

    let key = |i: usize| report.iso_classes[i].fingerprint.isotopy_part().to_vec();
    let separations = loop {
        let roots: Vec<usize> = (0..n).filter(|&i| find_root(&mut parent, i) == i).collect();
        let pairs: Vec<(usize, usize)> = roots
            .iter()
            .enumerate()
            .flat_map(|(t, &i)| roots[t + 1..].iter().map(move |&j| (i, j)))
            .collect();
        let outcomes: Vec<(usize, usize, std::result::Result<SeparationCertificate, IsotopyLink>)> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let fi = &report.iso_classes[i].fingerprint;
                let fj = &report.iso_classes[j].fingerprint;
                if key(i) != key(j) {
                    let detail = fi.first_isotopy_difference(fj).unwrap_or_default();
                    return Ok((i, j, Ok(SeparationCertificate::FingerprintMismatch { detail })));
                }
                let budget = IsotopyBudget {
                    seed: opts.isotopy_budget.seed ^ opts.seed,
                    ..opts.isotopy_budget.clone()
                };
                Ok(match heuristic_isotopism_search(&reps[i].table, &reps[j].table, &budget)? {
                    Verdict::Isotopic(w) => (
                        i,
                        j,
                        Err(IsotopyLink {
                            source: reps[i].family.clone(),
                            target: reps[j].family.clone(),
                            f: matrix_rows(&w.f),
                            g: matrix_rows(&w.g),
                            h: matrix_rows(&w.h),
                            origin: LinkOrigin::Search,
                        }),
                    ),
                    Verdict::NotSeparated(info) => (
                        i,
                        j,
                        Ok(SeparationCertificate::HeuristicOnly {
                            ansatz: info.ansatz,
                            budget: info.budget,
                            explored: info.explored,
                        }),
                    ),
                    other => return Err(Error::Inconsistent(format!("unexpected verdict {other:?}"))),
                })
            })
            .collect::<Result<_>>()?;
        // merge the first link found (in pair order) and try again
        if let Some((i, j, Err(link))) = outcomes.iter().find(|o| o.2.is_err()).cloned() {
            let (ri, rj) = (find_root(&mut parent, i), find_root(&mut parent, j));
            parent[ri.max(rj)] = ri.min(rj);
            links.push((i, link));
            continue;
        }
        break outcomes
            .into_iter()
            .map(|(i, j, c)| Separation {
                first: report.iso_classes[i].representative.clone(),
                second: report.iso_classes[j].representative.clone(),
                certificate: c.expect("no links left"),
            })
            .collect::<Vec<_>>();
    };

    let mut by_root: BTreeMap<usize, IsotopyClass> = BTreeMap::new();
    for i in 0..n {
        let r = find_root(&mut parent, i);
        let entry = by_root.entry(r).or_insert_with(|| IsotopyClass {
            representative: report.iso_classes[r].representative.clone(),
            iso_classes: Vec::new(),
            links: Vec::new(),
        });
        entry.iso_classes.push(report.iso_classes[i].representative.clone());
    }
    for (i, link) in links {
        let r = find_root(&mut parent, i);
        by_root.get_mut(&r).expect("root exists").links.push(link);
    }
    let mut classes: Vec<IsotopyClass> = by_root.into_values().collect();
    for c in &mut classes {
        c.iso_classes.sort_by_key(|f| f.sort_key());
        c.representative = c.iso_classes[0].clone();
    }
    classes.sort_by_key(|c| c.representative.sort_key());
    report.isotopy_classes = Some(classes);
    report.isotopy_separations = Some(separations);
    report.refresh_match();
    report.seconds += start.elapsed().as_secs_f64();
    Ok(())
}

/// Enumerate, partition into isomorphism classes and, if requested, into
/// isotopism classes.
pub fn classify(dim: usize, p: u32, opts: &ClassifyOptions) -> Result<ClassificationReport> {
    let cands = enumerate_candidates(dim, p)?;
    let mut report = partition_isomorphism(&cands, opts)?;
    if opts.isotopy {
        partition_isotopism(&mut report, opts)?;
    }
    Ok(report)
}

/// Re-verify every witness stored in a report against freshly built
/// tables. Returns the number of witnesses checked.
pub fn reverify_report(report: &ClassificationReport) -> Result<usize> {
    let p = report.characteristic;
    let field = Fp::new(p)?;
    let mut checked = 0;
    for class in &report.iso_classes {
        let rep = build(&field, &class.representative)?;
        for m in &class.members {
            if let Some(w) = m.merge.as_ref().and_then(|x| x.witness()) {
                let a = build(&field, &m.family)?;
                if !verify_isomorphism(&a, &rep, &matrix_from_rows(p, w)?)? {
                    return Err(Error::Report(format!("witness {} -> {} fails", m.family, class.representative)));
                }
                checked += 1;
            }
        }
    }
    for class in report.isotopy_classes.iter().flatten() {
        for l in &class.links {
            let a = build(&field, &l.source)?;
            let b = build(&field, &l.target)?;
            let (f, g, h) = (matrix_from_rows(p, &l.f)?, matrix_from_rows(p, &l.g)?, matrix_from_rows(p, &l.h)?);
            if !verify_isotopism(&a, &b, &f, &g, &h)? {
                return Err(Error::Report(format!("isotopism {} -> {} fails", l.source, l.target)));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Result of [`identify`].
#[derive(Debug, Clone)]
pub enum Identification {
    Identified {
        representative: Family<u32>,
        witness: IsoWitness<Fp>,
    },
    /// No normal form matched; this would contradict the exhaustiveness of
    /// the families.
    Unclassified { fingerprint: Fingerprint },
}

type RepCache = Mutex<HashMap<(usize, u32), Vec<(Family<u32>, Fingerprint)>>>;

/// Isomorphism class representatives with their fingerprints, cached per
/// `(dim, p)`.
pub fn representatives(dim: usize, p: u32) -> Result<Vec<(Family<u32>, Fingerprint)>> {
    static CACHE: OnceLock<RepCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("cache lock").get(&(dim, p)) {
        return Ok(v.clone());
    }
    let report = classify(dim, p, &ClassifyOptions::default())?;
    let reps: Vec<(Family<u32>, Fingerprint)> = report
        .iso_classes
        .into_iter()
        .map(|c| (c.representative, c.fingerprint))
        .collect();
    cache.lock().expect("cache lock").insert((dim, p), reps.clone());
    Ok(reps)
}

/// Name the isomorphism class of a filiform algebra of dimension 5 to 7.
pub fn identify(g: &StructureTable<Fp>) -> Result<Identification> {
    if !g.is_filiform() {
        return Err(Error::NotFiliform);
    }
    let p = g.field().p();
    let fp = fingerprint(g)?;
    let search = SearchOptions {
        node_budget: None,
        use_fingerprints: false,
    };
    for (family, f) in representatives(g.dim(), p)? {
        if f != fp {
            continue;
        }
        let rep = build(g.field(), &family)?;
        if let Verdict::Isomorphic(witness) = find_isomorphism(g, &rep, &search)? {
            return Ok(Identification::Identified {
                representative: family,
                witness,
            });
        }
    }
    Ok(Identification::Unclassified { fingerprint: fp })
}

/// Which counts to recompute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scope {
    pub entries: Vec<(usize, u32)>,
    /// Also compute isotopism classes where an expected count exists and
    /// `p` is at most this bound.
    pub isotopy_up_to: u32,
}

impl Scope {
    pub fn dim(dim: usize) -> Self {
        let primes: &[u32] = match dim {
            5 => &[2, 3],
            _ => &[2, 3, 5, 7],
        };
        Self {
            entries: primes.iter().map(|&p| (dim, p)).collect(),
            isotopy_up_to: 7,
        }
    }

    pub fn all() -> Self {
        let mut s = Self::dim(5);
        s.entries.extend(Self::dim(6).entries);
        s.entries.extend(Self::dim(7).entries);
        s
    }

    /// `all`, `dim<n>` or `dim<n>:<p>,<p>,...`; several scopes may be joined
    /// with `;`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Parse {
            line: 1,
            reason: format!("bad scope `{text}`"),
        };
        let mut out = Self {
            entries: Vec::new(),
            isotopy_up_to: 7,
        };
        for part in text.split(';').map(str::trim) {
            if part == "all" {
                out.entries.extend(Self::all().entries);
                continue;
            }
            let (d, primes) = match part.split_once(':') {
                Some((d, ps)) => (d, Some(ps)),
                None => (part, None),
            };
            let dim: usize = d.strip_prefix("dim").and_then(|x| x.parse().ok()).ok_or_else(bad)?;
            if !(5..=7).contains(&dim) {
                return Err(Error::UnsupportedDim(dim));
            }
            match primes {
                None => out.entries.extend(Self::dim(dim).entries),
                Some(ps) => {
                    for p in ps.split(',') {
                        let p: u32 = p.trim().parse().map_err(|_| bad())?;
                        Fp::new(p)?;
                        out.entries.push((dim, p));
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimStatus {
    Pass,
    Fail,
    OutOfScope,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub id: String,
    pub statement: String,
    pub expected: String,
    pub found: String,
    pub status: ClaimStatus,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub claims: Vec<Claim>,
    pub all_pass: bool,
}

impl VerifyReport {
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.claims {
            let tag = match c.status {
                ClaimStatus::Pass => "PASS",
                ClaimStatus::Fail => "FAIL",
                ClaimStatus::OutOfScope => "SKIP",
            };
            s += &format!(
                "[{tag}] {}: {} (expected {}, found {}, {:.2}s)\n",
                c.id, c.statement, c.expected, c.found, c.seconds
            );
        }
        s += if self.all_pass { "all claims pass\n" } else { "some claims FAIL\n" };
        s
    }
}

/// The named isomorphism class representatives in dimension 7 over `F_2`.
pub fn dim7_char2_names() -> Vec<Family<u32>> {
    let g = |a, b, c, d| Family::G7 { a, b, c, d };
    vec![
        g(0, 0, 0, 0),
        g(0, 0, 0, 1),
        g(0, 0, 1, 0),
        g(0, 0, 1, 1),
        g(0, 1, 0, 0),
        g(0, 1, 1, 0),
        g(1, 0, 0, 0),
        g(1, 0, 1, 0),
        g(1, 0, 1, 1),
        g(1, 1, 0, 0),
        g(1, 1, 1, 0),
        Family::G7Type2(0),
        Family::G7Type2(1),
        Family::H7Type3(0),
        Family::H7Type3(1),
    ]
}

/// Recompute the class counts in `scope` and compare with the known values.
pub fn verify_paper(scope: &Scope, opts: &ClassifyOptions) -> Result<VerifyReport> {
    let mut claims = Vec::new();
    for &(dim, p) in &scope.entries {
        let Some(exp) = expected_counts(dim, p) else {
            continue;
        };
        let t = Instant::now();
        let mut report = classify(dim, p, opts)?;
        let iso_secs = t.elapsed().as_secs_f64();
        let iso_found = report.iso_classes.len();
        claims.push(Claim {
            id: format!("iso-dim{dim}-p{p}"),
            statement: format!("isomorphism classes in dimension {dim} over F_{p}"),
            expected: exp.iso_classes.to_string(),
            found: iso_found.to_string(),
            status: if iso_found == exp.iso_classes && report.cross_checks.disagreements == 0 {
                ClaimStatus::Pass
            } else {
                ClaimStatus::Fail
            },
            seconds: iso_secs,
        });
        if dim == 7 && p == 2 {
            let names = dim7_char2_names();
            let reps: Vec<Family<u32>> = report.iso_classes.iter().map(|c| c.representative.clone()).collect();
            claims.push(Claim {
                id: "names-dim7-p2".into(),
                statement: "named representatives in dimension 7 over F_2".into(),
                expected: format!("{} named", names.len()),
                found: format!("{} of {} match", names.iter().filter(|f| reps.contains(f)).count(), reps.len()),
                status: if reps == names { ClaimStatus::Pass } else { ClaimStatus::Fail },
                seconds: 0.0,
            });
        }
        if p <= scope.isotopy_up_to {
            let t = Instant::now();
            partition_isotopism(&mut report, opts)?;
            let found = report.isotopy_classes.as_ref().map_or(0, |c| c.len());
            claims.push(Claim {
                id: format!("isotopy-dim{dim}-p{p}"),
                statement: format!("isotopism classes in dimension {dim} over F_{p}"),
                expected: exp.isotopy_classes.to_string(),
                found: found.to_string(),
                status: if found == exp.isotopy_classes {
                    ClaimStatus::Pass
                } else {
                    ClaimStatus::Fail
                },
                seconds: t.elapsed().as_secs_f64(),
            });
        }
    }
    for (dim, count) in [(8, 47), (9, 124)] {
        claims.push(Claim {
            id: format!("iso-dim{dim}-p2"),
            statement: format!("isomorphism classes in dimension {dim} over F_2"),
            expected: count.to_string(),
            found: "not computed".into(),
            status: ClaimStatus::OutOfScope,
            seconds: 0.0,
        });
    }
    let all_pass = claims.iter().all(|c| c.status != ClaimStatus::Fail);
    Ok(VerifyReport { claims, all_pass })
}
