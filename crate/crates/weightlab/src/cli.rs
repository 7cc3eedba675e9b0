//! The commands behind the `weightlab` binary, as library functions
//! returning a [`Report`].

use std::collections::BTreeMap;

use crate::double_complex::{Cell, DoubleComplex, Label, Pair};
use crate::duality::{gysin_square_check, pd_chain_identity};
use crate::error::{Error, Result};
use crate::homology::{homology_ranks, ChainComplex};
use crate::io::{ModelBody, ModelFile};
use crate::linalg::{q_to_string, rational_rank, SparseVec, Q};
use crate::ncd::NCDModel;
use crate::plumbing::{boundary_weight_ranks, e1_boundary_from_plumbing, h1_formula_check, PlumbingGraph};
use crate::report::{Certificate, CheckOutcome, DegreeWeights, GradedPiece, PageDump, PageEntry, Report, TailBlock, Term, WeightTable};
use crate::spectral::checks::{
    les_and_truncation_checks, purity_ncd, purity_plumbing, support_checks, transverse_filter, PurityReport, SupportKind,
};
use crate::spectral::{integral_homology, WeightedComplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Weights,
    Pages,
    Complete,
    Verify,
    Plumbing,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Weights => "weights",
            Command::Pages => "pages",
            Command::Complete => "complete",
            Command::Verify => "verify",
            Command::Plumbing => "plumbing",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub pair: Option<Pair>,
    /// `Some(None)` asks for `E^∞`.
    pub r: Option<Option<usize>>,
    pub seed: Option<(isize, isize, usize)>,
}

impl Options {
    /// Parse the raw flag values: `--pair Y|XY|X_XmY|XmY|dU`, `--r N|inf`, `--seed s,t,i`.
    pub fn parse(pair: Option<&str>, r: Option<&str>, seed: Option<&str>) -> Result<Self> {
        let pair = pair
            .map(|p| Pair::parse(p).ok_or_else(|| Error::Input(format!("unknown pair {p:?}; expected Y, XY, X_XmY, XmY or dU"))))
            .transpose()?;
        let r = r
            .map(|r| match r {
                "inf" | "infinity" | "∞" => Ok(None),
                _ => match r.parse::<usize>() {
                    Ok(n) if n >= 1 => Ok(Some(n)),
                    _ => Err(Error::Input(format!("page {r:?} is not a positive integer or inf"))),
                },
            })
            .transpose()?;
        let seed = seed
            .map(|s| {
                let parts: Vec<&str> = s.split(',').map(str::trim).collect();
                let bad = || Error::Input(format!("seed {s:?} is not of the form s,t,i"));
                if parts.len() != 3 {
                    return Err(bad());
                }
                Ok((
                    parts[0].parse().map_err(|_| bad())?,
                    parts[1].parse().map_err(|_| bad())?,
                    parts[2].parse().map_err(|_| bad())?,
                ))
            })
            .transpose()?;
        Ok(Options { pair, r, seed })
    }
}

/// 1 for anything wrong with the input, 2 for a failed computation.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotAComplex(_) | Error::NotChainMap(_) | Error::ObstructedCompletion => 2,
        _ => 1,
    }
}

pub fn run(cmd: Command, file: &ModelFile, opts: &Options) -> Result<Report> {
    let mut report = Report::new(cmd.as_str(), file.name());
    match &file.body {
        ModelBody::Ncd(spec) => {
            let m = spec.build()?;
            run_ncd(cmd, &m, opts, &mut report)?;
        }
        ModelBody::Plumbing(spec) => {
            let g = spec.build()?;
            run_plumbing(cmd, &g, spec.isolated_singularity, opts, &mut report)?;
        }
        ModelBody::Double(spec) => {
            if cmd == Command::Verify {
                verify_double(spec.build(), &mut report)?;
            } else {
                run_double(cmd, &spec.build()?, opts, &mut report)?;
            }
        }
    }
    Ok(report)
}

fn pairs(opts: &Options) -> Vec<Pair> {
    opts.pair.map_or_else(|| Pair::ALL.to_vec(), |p| vec![p])
}

// ---------------------------------------------------------------------------
// tables

pub fn weight_table(pair: &str, source: &str, wc: &WeightedComplex) -> Result<WeightTable> {
    let mut degrees = Vec::new();
    for (k, (rank, torsion)) in integral_homology(&wc.tot)? {
        if rank == 0 && torsion.is_empty() {
            continue;
        }
        let w = wc.ss.weight_filtration(k);
        degrees.push(DegreeWeights {
            k,
            rank,
            torsion: torsion.iter().map(i64::to_string).collect(),
            graded: w.graded.iter().map(|(&weight, &rank)| GradedPiece { weight, rank }).collect(),
        });
    }
    Ok(WeightTable { pair: pair.to_string(), source: source.to_string(), degrees })
}

pub fn plumbing_table(g: &PlumbingGraph) -> Result<WeightTable> {
    let bw = boundary_weight_ranks(g)?;
    let mut degrees = Vec::new();
    for k in 0..=3 {
        let rank = bw.betti(k);
        let torsion: Vec<String> = if k == 1 { bw.h1_torsion.iter().map(i64::to_string).collect() } else { Vec::new() };
        if rank == 0 && torsion.is_empty() {
            continue;
        }
        let graded = bw.graded.iter().filter(|((kk, _), _)| *kk == k).map(|(&(_, weight), &rank)| GradedPiece { weight, rank }).collect();
        degrees.push(DegreeWeights { k, rank, torsion, graded });
    }
    Ok(WeightTable { pair: Pair::DU.as_str().to_string(), source: "plumbing".to_string(), degrees })
}

fn page_dump(pair: &str, wc: &WeightedComplex, r: Option<usize>) -> PageDump {
    let page = wc.ss.page(r);
    let entries = page
        .ranks
        .iter()
        .filter(|(_, n)| **n > 0)
        .map(|(&(s, t), &rank)| PageEntry { s, t, rank, d_rank: r.map_or(0, |r| rational_rank(&wc.ss.differential(r, s, t))) })
        .collect();
    PageDump { pair: pair.to_string(), r, entries }
}

/// The requested page, or every page up to stabilization followed by `E^∞`.
fn page_dumps(pair: &str, wc: &WeightedComplex, r: Option<Option<usize>>) -> Vec<PageDump> {
    match r {
        Some(r) => vec![page_dump(pair, wc, r)],
        None => {
            let last = (wc.ss.max_gap() as usize + 1).max(2);
            let mut out: Vec<PageDump> = (1..=last).map(|r| page_dump(pair, wc, Some(r))).collect();
            out.push(page_dump(pair, wc, None));
            out
        }
    }
}

fn plumbing_pages(g: &PlumbingGraph, r: Option<Option<usize>>) -> Vec<PageDump> {
    let e = e1_boundary_from_plumbing(g);
    let dump = |r: Option<usize>| {
        let entries = if r == Some(1) {
            e.e1.iter().map(|(&(s, t), &rank)| PageEntry { s, t, rank, d_rank: e.d1.get(&(s, t)).map_or(0, rational_rank) }).collect()
        } else {
            e.e2.iter().filter(|(_, n)| **n > 0).map(|(&(s, t), &rank)| PageEntry { s, t, rank, d_rank: 0 }).collect()
        };
        PageDump { pair: Pair::DU.as_str().to_string(), r, entries }
    };
    match r {
        Some(r) => vec![dump(r)],
        None => vec![dump(Some(1)), dump(Some(2)), dump(None)],
    }
}

// ---------------------------------------------------------------------------
// certificates

fn label_string(l: &Label) -> String {
    let cell = match &l.cell {
        Cell::Chain(id, s) => format!("{id:?}:{:?}", s.vertices()),
        Cell::Cochain(id, s) => format!("{id:?}:{:?}*", s.vertices()),
        Cell::Generator(g) => g.clone(),
    };
    if l.bottom {
        format!("cone:{cell}")
    } else {
        cell
    }
}

fn terms(a: &DoubleComplex, wc: &WeightedComplex, k: isize, v: &[(usize, Q)]) -> Vec<Term> {
    let mut out = Vec::new();
    for b in wc.tot.blocks(k) {
        let labels = a.basis(b.s, b.t);
        for (i, c) in v.iter().filter(|(i, _)| (b.offset..b.offset + b.len).contains(i)) {
            out.push(Term { s: b.s, t: b.t, cell: label_string(&labels[i - b.offset]), coeff: q_to_string(c) });
        }
    }
    out
}

/// Complete generator `index` of `E²_{s,t}` (a class of `ker d¹` modulo `im d¹`). For `A(Y)` and `A(X,Y)` the
/// seed and the completion prefer simplices meeting the deeper strata in low
/// dimension.
pub fn certify(m: Option<&NCDModel>, pair: &str, kind: Option<SupportKind>, wc: &WeightedComplex, seed: (isize, isize, usize)) -> Result<Certificate> {
    certify_on(Some(2), m, pair, kind, wc, seed)
}

fn certify_on(
    r: Option<usize>,
    m: Option<&NCDModel>,
    pair: &str,
    kind: Option<SupportKind>,
    wc: &WeightedComplex,
    seed: (isize, isize, usize),
) -> Result<Certificate> {
    let (s, t, index) = seed;
    let k = s + t;
    let gens = wc.ss.generators(r, s, t);
    let Some((_, rep)) = gens.get(index) else {
        return Err(Error::Input(format!("E2 at ({s},{t}) has {} generator(s); index {index} is out of range", gens.len())));
    };
    let mut seed: SparseVec<Q> = wc.tot.component(k, s, rep);
    let c = match (m, kind) {
        (Some(m), Some(kind)) => {
            let filter = transverse_filter(m, wc, kind, k, t);
            let start = wc.tot.block_range(k, s).map_or(0, |r| r.start);
            if let Some(better) = wc.transverse_seed(s, t, &seed, &|i| filter(start + i)) {
                seed = better;
            }
            wc.complete(s, t, &seed, Some(&filter))?
        }
        _ => wc.complete(s, t, &seed, None)?,
    };
    let seed_terms = terms(&wc.a, wc, k, &wc.tot.embed(k, s, &c.seed));
    let tail = wc
        .tot
        .blocks(k)
        .iter()
        .filter(|b| b.s < s)
        .map(|b| TailBlock { s: b.s, t: b.t, size: c.cycle.iter().filter(|(i, _)| (b.offset..b.offset + b.len).contains(i)).count() })
        .filter(|b| b.size > 0)
        .rev()
        .collect();
    Ok(Certificate {
        pair: pair.to_string(),
        s,
        t,
        index,
        degree: k,
        seed: seed_terms,
        tail,
        cycle: terms(&wc.a, wc, k, &c.cycle),
        class: c.class.iter().map(q_to_string).collect(),
        weight: c.weight,
        routes_agree: c.routes_agree,
        restricted: c.restricted,
    })
}

fn support_kind(p: Pair) -> Option<SupportKind> {
    match p {
        Pair::Y => Some(SupportKind::Y),
        Pair::XY => Some(SupportKind::XY),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// geometric models

fn run_ncd(cmd: Command, m: &NCDModel, opts: &Options, report: &mut Report) -> Result<()> {
    match cmd {
        Command::Weights => {
            for p in pairs(opts) {
                let wc = WeightedComplex::new(p.build(m)?)?;
                report.weights.push(weight_table(p.as_str(), "simplicial", &wc)?);
            }
        }
        Command::Pages => {
            for p in pairs(opts) {
                let wc = WeightedComplex::new(p.build(m)?)?;
                report.pages.extend(page_dumps(p.as_str(), &wc, opts.r));
            }
        }
        Command::Complete => {
            let seed = opts.seed.ok_or_else(|| Error::Input("complete needs --seed s,t,i".into()))?;
            let p = opts.pair.unwrap_or(Pair::Y);
            let wc = WeightedComplex::new(p.build(m)?)?;
            report.certificate = Some(certify(Some(m), p.as_str(), support_kind(p), &wc, seed)?);
        }
        Command::Verify => verify_ncd(m, report)?,
        Command::Plumbing => {
            let g = m.dual_graph()?;
            let table = plumbing_table(&g)?;
            let wc = WeightedComplex::new(Pair::DU.build(m)?)?;
            let simplicial = weight_table(Pair::DU.as_str(), "simplicial", &wc)?;
            let graded = |t: &WeightTable| -> Vec<(isize, isize, usize)> {
                t.degrees.iter().flat_map(|d| d.graded.iter().map(move |g| (d.k, g.weight, g.rank))).collect()
            };
            let same = graded(&table) == graded(&simplicial);
            report.checks.push(CheckOutcome::new("plumbing/simplicial", same, "graded ranks of H(∂U) from both paths"));
            report.checks.push(CheckOutcome::new("plumbing/h1_formula", h1_formula_check(&g), ""));
            report.weights.push(table);
            report.weights.push(simplicial);
        }
    }
    Ok(())
}

fn outcome(name: String, f: impl FnOnce() -> Result<(bool, String)>) -> CheckOutcome {
    match f() {
        Ok((passed, detail)) => CheckOutcome::new(name, passed, detail),
        Err(e) => CheckOutcome::new(name, false, e.to_string()),
    }
}

type Ranks = BTreeMap<isize, (usize, Vec<i64>)>;

fn nonzero(h: Ranks) -> Ranks {
    h.into_iter().filter(|(_, (r, t))| *r > 0 || !t.is_empty()).collect()
}

fn ranks_of(c: &ChainComplex) -> Result<Ranks> {
    Ok(nonzero(homology_ranks(c)?.into_iter().map(|h| (h.degree, (h.rank, h.torsion))).collect()))
}

fn describe(h: &Ranks) -> String {
    h.iter()
        .map(|(k, (r, t))| if t.is_empty() { format!("H{k}={r}") } else { format!("H{k}={r}+{t:?}") })
        .collect::<Vec<_>>()
        .join(" ")
}

fn oracle(name: &str, wc: Option<&WeightedComplex>, c: impl FnOnce() -> ChainComplex) -> CheckOutcome {
    outcome(format!("oracle/{name}"), || {
        let wc = wc.ok_or_else(|| Error::Input("double complex unavailable".into()))?;
        let tot = nonzero(integral_homology(&wc.tot)?);
        let geo = ranks_of(&c())?;
        Ok((tot == geo, describe(&geo)))
    })
}

fn mv_axioms(m: &NCDModel) -> bool {
    let top = 2 * m.n();
    (1..=m.max_level()).all(|p| {
        (0..=top).all(|k| {
            let ik = m.mv_operator(p, k);
            let square = p < 2 || m.mv_operator(p - 1, k).mul(&ik).is_zero();
            let commute =
                k == 0 || m.level_boundary(p - 1, k).mul(&ik).add(&m.mv_operator(p, k - 1).mul(&m.level_boundary(p, k))).is_zero();
            square && commute
        })
    })
}

fn completion_check(name: &str, m: Option<&NCDModel>, kind: Option<SupportKind>, wc: &WeightedComplex) -> CheckOutcome {
    outcome(format!("completion/{name}"), || {
        let mut n = 0;
        let mut agree = true;
        for (&(s, t), _) in wc.ss.page(None).ranks.iter() {
            for i in 0..wc.ss.generators(None, s, t).len() {
                agree &= certify_on(None, m, name, kind, wc, (s, t, i))?.routes_agree;
                n += 1;
            }
        }
        Ok((agree, format!("{n} seed(s)")))
    })
}

fn degeneration_check(name: &str, wc: &WeightedComplex) -> CheckOutcome {
    let detail = match wc.ss.nonzero_differential(2) {
        Some((r, s, t)) => format!("d{r} nonzero at ({s},{t})"),
        None => String::new(),
    };
    CheckOutcome::new(format!("degeneration/{name}"), wc.ss.degenerates_at(2), detail)
}

fn purity_check(r: Result<PurityReport>) -> CheckOutcome {
    outcome("purity".into(), || {
        let r = r?;
        let failed: Vec<String> = r.items.iter().filter(|i| !i.holds).map(|i| format!("item {} H{}", i.item, i.k)).collect();
        let detail = match &r.precondition {
            Some(p) => p.clone(),
            None if failed.is_empty() => format!("{} statement(s)", r.items.len()),
            None => failed.join(", "),
        };
        Ok((r.passed(), detail))
    })
}

pub fn verify_ncd(m: &NCDModel, report: &mut Report) -> Result<()> {
    let checks = &mut report.checks;
    let mut wcs: BTreeMap<Pair, WeightedComplex> = BTreeMap::new();
    for p in Pair::ALL {
        let name = format!("axioms/{}", p.as_str());
        match p.build(m).and_then(WeightedComplex::new) {
            Ok(wc) => {
                let dims: Vec<String> = wc.tot.degrees().map(|k| wc.tot.dim(k).to_string()).collect();
                checks.push(CheckOutcome::new(name, true, format!("Tot dims {}", dims.join(","))));
                wcs.insert(p, wc);
            }
            Err(e) => checks.push(CheckOutcome::new(name, false, e.to_string())),
        }
    }
    checks.push(CheckOutcome::new("axioms/mv", mv_axioms(m), "i² = 0 and i∂ + ∂i = 0"));
    for st in m.strata() {
        checks.push(outcome(format!("pd/{:?}", st.id), || {
            for i in 0..=st.dim() {
                if !pd_chain_identity(m.x(), &st.complex, &st.orientation, i)? {
                    return Ok((false, format!("∂pd ≠ pdδ in degree {i}")));
                }
            }
            Ok((true, String::new()))
        }));
    }
    for st in m.strata() {
        for a in 0..m.num_components() {
            checks.push(outcome(format!("gysin/{:?}/{a}", st.id), || Ok((gysin_square_check(m, &st.id, a)?.passed(), String::new()))));
        }
    }
    for (p, wc) in &wcs {
        checks.push(degeneration_check(p.as_str(), wc));
    }
    checks.push(outcome("les".into(), || {
        let r = les_and_truncation_checks(m)?;
        Ok((r.passed(), format!("{} degree(s), {} truncation kernel(s)", r.les.len(), r.kernels.len())))
    }));
    for p in [Pair::Y, Pair::XY] {
        checks.push(outcome(format!("support/{}", p.as_str()), || {
            let r = support_checks(m, p)?;
            let bad = r.iter().filter(|c| !c.passed).count();
            Ok((bad == 0, format!("{} class(es), {bad} failing", r.len())))
        }));
    }
    if m.isolated_singularity {
        checks.push(purity_check(purity_ncd(m)));
    }
    let y = m.union_y();
    checks.push(oracle("Y", wcs.get(&Pair::Y), || ChainComplex::of_complex(&y)));
    checks.push(oracle("XY", wcs.get(&Pair::XY), || ChainComplex::relative(m.x(), &y)));
    let (sd, complement) = m.deleted_star_complement();
    checks.push(oracle("XmY", wcs.get(&Pair::XmY), || ChainComplex::of_complex(&complement)));
    checks.push(oracle("X_XmY", wcs.get(&Pair::XXmY), || ChainComplex::relative(&sd, &complement)));
    checks.push(outcome("milnor".into(), || {
        let sy = m.milnor_realization();
        Ok((ranks_of(&ChainComplex::of_complex(&sy.complex))? == ranks_of(&ChainComplex::of_complex(&y))?, String::new()))
    }));
    for (p, wc) in &wcs {
        checks.push(completion_check(p.as_str(), Some(m), support_kind(*p), wc));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// plumbing graphs

fn run_plumbing(cmd: Command, g: &PlumbingGraph, isolated: bool, opts: &Options, report: &mut Report) -> Result<()> {
    if let Some(p) = opts.pair.filter(|p| *p != Pair::DU) {
        return Err(Error::Input(format!("a plumbing graph only describes dU, not {}", p.as_str())));
    }
    match cmd {
        Command::Weights => report.weights.push(plumbing_table(g)?),
        Command::Pages => report.pages = plumbing_pages(g, opts.r),
        Command::Complete => return Err(Error::Input("complete needs a geometric model or a double complex".into())),
        Command::Plumbing | Command::Verify => {
            report.weights.push(plumbing_table(g)?);
            report.checks.push(CheckOutcome::new("plumbing/h1_formula", h1_formula_check(g), ""));
            let closed = boundary_weight_ranks(g)?.graded;
            let e2 = e1_boundary_from_plumbing(g).graded();
            report.checks.push(CheckOutcome::new("plumbing/closed_form", closed == e2, "E² against the closed-form table"));
            if cmd == Command::Verify {
                let bw = boundary_weight_ranks(g)?;
                let sym = bw.betti(0) == bw.betti(3) && bw.betti(1) == bw.betti(2);
                report.checks.push(CheckOutcome::new("plumbing/duality", sym, "b0 = b3, b1 = b2"));
                if isolated {
                    report.checks.push(purity_check(purity_plumbing(g, true)));
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// raw double complexes

fn run_double(cmd: Command, a: &DoubleComplex, opts: &Options, report: &mut Report) -> Result<()> {
    let wc = WeightedComplex::new(a.clone())?;
    let name = a.name();
    match cmd {
        Command::Weights => report.weights.push(weight_table(name, "double", &wc)?),
        Command::Pages => report.pages = page_dumps(name, &wc, opts.r),
        Command::Complete => {
            let seed = opts.seed.ok_or_else(|| Error::Input("complete needs --seed s,t,i".into()))?;
            report.certificate = Some(certify(None, name, None, &wc, seed)?);
        }
        Command::Plumbing => return Err(Error::Input("plumbing needs a geometric model or a plumbing graph".into())),
        Command::Verify => unreachable!("handled by verify_double"),
    }
    Ok(())
}

fn verify_double(built: Result<DoubleComplex>, report: &mut Report) -> Result<()> {
    let a = match built {
        Ok(a) => a,
        Err(e @ Error::AnticommutationViolated(_)) => {
            report.checks.push(CheckOutcome::new("axioms", false, e.to_string()));
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    let wc = WeightedComplex::new(a)?;
    report.checks.push(CheckOutcome::new("axioms", true, ""));
    report.checks.push(degeneration_check(wc.a.name(), &wc));
    report.checks.push(outcome("convergence".into(), || {
        let h = integral_homology(&wc.tot)?;
        let einf = wc.ss.page(None);
        let ok = h.iter().all(|(k, (r, _))| einf.ranks.iter().filter(|((s, t), _)| s + t == *k).map(|(_, n)| n).sum::<usize>() == *r);
        Ok((ok, "E^∞ against rational homology of Tot".into()))
    }));
    report.checks.push(completion_check(wc.a.name(), None, None, &wc));
    Ok(())
}
