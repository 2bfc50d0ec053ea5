//! Self-checks grouped into suites, as run by `k4graph verify`.

use std::fmt;
use std::str::FromStr;

use num::BigInt;
use serde::Serialize;

use crate::catalog::{Catalog, CatalogTables, K3Vertex, CATALOG_SIZE, PRINCIPAL_SIZE};
use crate::classes::{
    classify_element, construct_witness, exists_class, search_witness_with, target_square,
    ElementClass, SearchConfig,
};
use crate::error::Error;
use crate::forms::{discriminant_quadratic, forms_isomorphic};
use crate::graph::{
    basic_cycles_regular, build_k3_graph, build_k4_graph, find_flip_triples, flip, irregular_lattice,
    k4_lattice, regular_subgraphs_and_f, structural_checks, swap_check, synthesize_k4_plus,
    verify_flip_cycle, IRR,
};
use crate::lattice::{GramLattice, LatticeVector, Signature, StandardLattice};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Lattice,
    Forms,
    Catalog,
    Predicates,
    Graphs,
    Synthesis,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Self::Lattice,
        Self::Forms,
        Self::Catalog,
        Self::Predicates,
        Self::Graphs,
        Self::Synthesis,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Lattice => "lattice",
            Self::Forms => "forms",
            Self::Catalog => "catalog",
            Self::Predicates => "predicates",
            Self::Graphs => "graphs",
            Self::Synthesis => "synthesis",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: usize,
    /// First failing invariant, with the offending object.
    pub failure: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    /// `lattice: pass (12 checks)` or `catalog: FAIL ...`.
    pub fn line(&self) -> String {
        match &self.failure {
            None => format!("{}: pass ({} checks)", self.suite, self.checks),
            Some(f) => format!("{}: FAIL {f}", self.suite),
        }
    }
}

/// Counts checks and stops at the first failure.
struct Checker {
    checks: usize,
}

type Step = std::result::Result<(), String>;

impl Checker {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) -> Step {
        self.checks += 1;
        if ok {
            Ok(())
        } else {
            Err(what())
        }
    }
}

fn json<T: Serialize>(x: &T) -> String {
    serde_json::to_string(x).unwrap_or_else(|e| format!("<{e}>"))
}

fn err(e: Error) -> String {
    e.to_string()
}

fn vertex(v: &K3Vertex) -> String {
    json(&v.record())
}

pub struct Verifier {
    tables: CatalogTables,
    search: SearchConfig,
}

impl Default for Verifier {
    fn default() -> Self {
        Self::new(CatalogTables::builtin())
    }
}

impl Verifier {
    pub fn new(tables: CatalogTables) -> Self {
        Self {
            tables,
            search: SearchConfig::default(),
        }
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.search.budget = budget;
        self
    }

    pub fn run(&self, suite: Suite) -> SuiteReport {
        let mut c = Checker { checks: 0 };
        let outcome = match suite {
            Suite::Catalog => self.catalog(&mut c),
            _ => match Catalog::from_tables(&self.tables) {
                Err(e) => Err(format!("catalog does not build: {e}")),
                Ok(cat) => match suite {
                    Suite::Lattice => lattice_suite(&mut c),
                    Suite::Forms => forms_suite(&mut c, &cat),
                    Suite::Predicates => self.predicates(&mut c, &cat),
                    Suite::Graphs => graphs_suite(&mut c, &cat),
                    Suite::Synthesis => synthesis_suite(&mut c, &cat),
                    Suite::Catalog => unreachable!(),
                },
            },
        };
        SuiteReport {
            suite,
            checks: c.checks,
            failure: outcome.err(),
        }
    }

    pub fn run_all(&self) -> Vec<SuiteReport> {
        Suite::ALL.into_iter().map(|s| self.run(s)).collect()
    }

    fn catalog(&self, c: &mut Checker) -> Step {
        let cat = Catalog::from_tables(&self.tables).map_err(err)?;
        c.check(cat.len() == CATALOG_SIZE, || format!("catalog has {} entries", cat.len()))?;
        let principal = cat.iter().filter(|v| v.principal).count();
        c.check(principal == PRINCIPAL_SIZE, || {
            format!("{principal} principal entries")
        })?;
        for v in cat.iter() {
            let (p, m) = (v.lplus.signature().map_err(err)?, v.lminus.signature().map_err(err)?);
            c.check(v.lplus.rank() + v.lminus.rank() == 22, || {
                format!("rank sum at {}: {}", v.id, vertex(v))
            })?;
            c.check(p.positive == 1 && m.positive == 2, || {
                format!("signatures {p:?}, {m:?} at {}: {}", v.id, vertex(v))
            })?;
            let (a, b) = (&v.lplus_form, &v.lminus_form);
            c.check(
                a.rank == b.rank && a.parity == b.parity && (a.brown + b.brown) % 8 == 0,
                || format!("eigenlattice forms of {} are not anti-isometric: {}", v.id, vertex(v)),
            )?;
            for (l, f) in [(&v.lplus, a), (&v.lminus, b)] {
                let s = l.signature().map_err(err)?;
                c.check(s.index().rem_euclid(8) == i64::from(f.brown), || {
                    format!("Milgram fails at {}: {}", v.id, vertex(v))
                })?;
            }
        }
        Ok(())
    }

    fn predicates(&self, c: &mut Checker, cat: &Catalog) -> Step {
        for v in cat.iter() {
            for n in [0u8, 1] {
                for cls in ElementClass::ALL {
                    let what = || format!("{} n={n} {cls}", v.id);
                    if exists_class(v, n, cls) {
                        let x = construct_witness(v, n, cls).map_err(err)?;
                        let norm = v.lminus.norm(&x).map_err(err)?;
                        let got = classify_element(&v.lminus, &x).map_err(err)?;
                        c.check(
                            norm == BigInt::from(target_square(n)) && got == cls,
                            || format!("witness {x} for {} has square {norm}, class {got}", what()),
                        )?;
                    } else if v.lminus.rank() <= 12 {
                        let found = search_witness_with(&v.lminus, target_square(n), cls, &self.search)
                            .map_err(err)?;
                        c.check(found.is_none(), || {
                            format!("predicate false but search found {:?} for {}", found, what())
                        })?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn lattice_suite(c: &mut Checker) -> Step {
    for s in StandardLattice::ALL {
        let l = s.lattice();
        c.check(l.gram().asymmetry().is_none(), || format!("{} is not symmetric", s.name()))?;
        let expected: i64 = match s {
            StandardLattice::Plus2 => 2,
            StandardLattice::Minus2 => -2,
            StandardLattice::One | StandardLattice::E8 => 1,
            StandardLattice::U => -1,
            StandardLattice::U2 => -4,
            StandardLattice::D4 => 4,
            StandardLattice::E7 => -2,
            StandardLattice::E8x2 => 256,
        };
        c.check(l.determinant() == BigInt::from(expected), || {
            format!("det {} = {}", s.name(), l.determinant())
        })?;
    }
    let e8 = StandardLattice::E8.lattice();
    c.check(e8.is_even() && e8.is_unimodular(), || "E8 is not even unimodular".into())?;
    c.check(e8.signature().map_err(err)? == Signature::new(0, 8), || "E8 sign".into())?;
    let pos = e8.negate();
    c.check(pos.signature().map_err(err)? == Signature::new(8, 0), || "-E8 sign".into())?;

    // twists move one unit of signature and are involutive up to the form
    let l = GramLattice::diagonal(&[2, -2, 2]);
    for (i, root) in [(0usize, 2i64), (1, -2)] {
        let v = LatticeVector::basis(3, i);
        let t = l.twist(&v).map_err(err)?;
        let (s0, s1) = (l.signature().map_err(err)?, t.signature().map_err(err)?);
        c.check((s0.index() - s1.index()).abs() == 2, || {
            format!("twist at square {root} gives {s1:?} from {s0:?}")
        })?;
        let x = LatticeVector::from_ints(&[1, 2, 3]);
        let back = l.reflect(&v, &l.reflect(&v, &x).map_err(err)?).map_err(err)?;
        c.check(back == x, || format!("reflection at {v} is not an involution"))?;
    }
    let k4 = k4_lattice().map_err(err)?;
    c.check(
        !k4.is_even() && k4.is_unimodular() && k4.signature().map_err(err)? == Signature::new(21, 2),
        || "K4 lattice is not odd unimodular (21, 2)".into(),
    )?;
    let comp = e8.orthogonal_sublattice(&LatticeVector::basis(8, 0)).map_err(err)?;
    c.check(comp.lattice.rank() == 7 && comp.lattice.determinant().magnitude() == &2u8.into(), || {
        "root complement in E8 is not E7".into()
    })?;
    Ok(())
}

fn forms_suite(c: &mut Checker, cat: &Catalog) -> Step {
    for v in cat.iter() {
        let fp = discriminant_quadratic(&v.lplus, None).map_err(err)?;
        let fm = discriminant_quadratic(&v.lminus, None).map_err(err)?;
        let iso = forms_isomorphic(&fp, &fm.negate()).map_err(err)?;
        c.check(iso, || format!("q(L+) is not -q(L-) at {}: {}", v.id, json(&fp)))?;
        for (l, f) in [(&v.lplus, &fp), (&v.lminus, &fm)] {
            let b = f.brown_invariant_with_limit(16).map_err(err)?;
            let s = l.signature().map_err(err)?;
            c.check(s.index().rem_euclid(8) == i64::from(b), || {
                format!("Brown {b} against signature {s:?} at {}: {}", v.id, json(f))
            })?;
        }
    }
    Ok(())
}

fn graphs_suite(c: &mut Checker, cat: &Catalog) -> Step {
    let k3 = build_k3_graph(cat).map_err(err)?;
    let k4 = build_k4_graph(cat).map_err(err)?;
    for (name, g) in [("k3", &k3), ("k4", &k4.graph)] {
        let bad = g.invariant_violations();
        c.check(bad.is_empty(), || format!("{name}: {}", bad.join("; ")))?;
    }
    c.check(k3.vertex_count() == CATALOG_SIZE, || "k3 vertex count".into())?;
    c.check(k3.sinks() == ["[10S]", "[8S]_I"], || format!("k3 sinks {:?}", k3.sinks()))?;
    c.check(k3.terminal("[7S]", ElementClass::Wu) == Some("[8S]_I"), || {
        "Wu edge from [7S] does not end at [8S]_I".into()
    })?;
    for e in k3.edges() {
        let (a, b) = (&k3.nodes()[e.from], &k3.nodes()[e.to]);
        let dd = if e.class == ElementClass::Odd { 1 } else { -1 };
        let ok = b.r == a.r + 1
            && i64::from(b.d) == i64::from(a.d) + dd
            && (b.vtype == crate::catalog::VertexType::I) == (e.class == ElementClass::Wu);
        c.check(ok, || format!("edge {} -> {} ({}) breaks the key rule", a.id, b.id, e.class))?;
    }
    c.check(k4.graph.vertex_count() == CATALOG_SIZE, || "k4 vertex count".into())?;
    let into_irr: Vec<_> = k4
        .graph
        .edges()
        .iter()
        .filter(|e| k4.graph.nodes()[e.to].id == IRR)
        .map(|e| (k4.graph.nodes()[e.from].id.clone(), e.class))
        .collect();
    c.check(into_irr == [("[3S]".to_string(), ElementClass::Wu)], || {
        format!("edges into irr: {into_irr:?}")
    })?;
    let irr = k4.data_of(IRR).ok_or("no irr data")?;
    let m = irr.mminus.negate();
    c.check(
        m.gram() == irregular_lattice().gram()
            && m.signature().map_err(err)? == Signature::new(1, 13)
            && m.is_even(),
        || format!("-M-(irr) is wrong: {}", json(&m)),
    )?;
    let fm = discriminant_quadratic(&m, None).map_err(err)?;
    c.check(fm.rank() == 8, || format!("-M-(irr) has discriminant rank {}", fm.rank()))?;

    let f = regular_subgraphs_and_f(&k3, &k4, cat).map_err(err)?;
    c.check(f.is_isomorphism() && f.vertex_map.len() == 74, || {
        format!("F: {}", f.failures.join("; "))
    })?;
    let swap = swap_check(&k3, &k4.graph);
    c.check(swap.is_empty(), || swap.join("; "))?;
    let s = structural_checks(&k3, &k4, cat).map_err(err)?;
    c.check(s.passed(), || s.failures.join("; "))?;

    for v in cat.iter() {
        for t in find_flip_triples(v, 3).map_err(err)? {
            let back = flip(&v.lminus, &flip(&v.lminus, &t).map_err(err)?).map_err(err)?;
            c.check(back == t, || format!("flip is not an involution at {}: {t:?}", v.id))?;
            let r = verify_flip_cycle(cat, v, &t, &k4).map_err(err)?;
            c.check(r.holds(), || format!("flip cycle at {}: {r:?}", v.id))?;
        }
    }
    let b = basic_cycles_regular(&k3, cat).map_err(err)?;
    c.check(b.passed(), || {
        format!(
            "basic cycles: {} of {} expected, rank {}, all regular {}, {:?}",
            b.cycles.len(),
            b.expected_count,
            b.rational_rank,
            b.all_regular(),
            b.failures
        )
    })?;
    Ok(())
}

fn synthesis_suite(c: &mut Checker, cat: &Catalog) -> Step {
    for v in cat.iter() {
        for cls in ElementClass::ALL {
            if !exists_class(v, 1, cls) {
                continue;
            }
            let h = construct_witness(v, 1, cls).map_err(err)?;
            let r = synthesize_k4_plus(v, &h);
            c.check(r.is_ok(), || format!("{} ({cls}, h = {h}): {}", v.id, r.unwrap_err()))?;
        }
    }
    let k4 = k4_lattice().map_err(err)?;
    c.check(k4.find_characteristic().is_ok(), || "K4 lattice has no characteristic".into())?;
    Ok(())
}

/// Runs `suites` (all when empty) on the built-in tables.
pub fn run(suites: &[Suite]) -> Vec<SuiteReport> {
    let v = Verifier::default();
    if suites.is_empty() {
        v.run_all()
    } else {
        suites.iter().map(|&s| v.run(s)).collect()
    }
}

pub fn all_passed(reports: &[SuiteReport]) -> bool {
    reports.iter().all(SuiteReport::passed)
}
