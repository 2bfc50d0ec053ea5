use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use k4graph_core::catalog::{build_catalog, shared, K3Vertex, VertexType};
use k4graph_core::classes::{
    classify_element, construct_witness, exists_class, search_witness, target_square, ElementClass,
};
use k4graph_core::forms::{discriminant_quadratic, lattices_equivalent, Equivalence, Parity};
use k4graph_core::graph::{
    basic_cycles_regular, build_k3_graph, build_k4_graph, find_flip_triples, flip,
    regular_subgraphs_and_f, swap_check, synthesize_k4_plus, verify_flip_cycle, k4_lattice, IRR,
};
use k4graph_core::lattice::{direct_sum_all, LatticeVector, Signature, StandardLattice};
use num::BigInt;

type Outcome = Result<String, String>;

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn catalog_cardinality() -> Outcome {
    let t = Instant::now();
    let cat = build_catalog().map_err(e)?;
    let took = t.elapsed();
    let principal = cat.iter().filter(|v| v.principal).count();
    ensure(cat.len() == 75, || format!("{} entries", cat.len()))?;
    ensure(principal == 64 && cat.len() - principal == 11, || {
        format!("{principal} principal entries")
    })?;
    ensure(took < Duration::from_secs(1), || format!("built in {took:?}"))?;
    Ok(format!("75 = 64 + 11 in {took:?}"))
}

fn catalog_validity() -> Outcome {
    let mut keys = BTreeSet::new();
    for v in shared().iter() {
        let bad = |what: &str| format!("{}: {what}", v.id);
        ensure(v.lplus.rank() + v.lminus.rank() == 22, || bad("rank sum"))?;
        let (sp, sm) = (v.lplus.signature().map_err(e)?, v.lminus.signature().map_err(e)?);
        ensure(sp.positive == 1 && sm.positive == 2, || bad("signatures"))?;
        let fp = discriminant_quadratic(&v.lplus, None).map_err(e)?;
        let fm = discriminant_quadratic(&v.lminus, None).map_err(e)?;
        let (bp, bm) = (
            fp.brown_invariant_with_limit(16).map_err(e)?,
            fm.brown_invariant_with_limit(16).map_err(e)?,
        );
        ensure(fp.rank() == fm.rank(), || bad("discriminant ranks differ"))?;
        ensure(fp.parity() == fm.parity(), || bad("parities differ"))?;
        ensure((bp + bm) % 8 == 0, || bad("Brown sum"))?;
        ensure(sp.index().rem_euclid(8) == i64::from(bp), || bad("Milgram on L+"))?;
        ensure(sm.index().rem_euclid(8) == i64::from(bm), || bad("Milgram on L-"))?;
        ensure(keys.insert(v.key()), || bad("duplicate key"))?;
    }
    Ok("75 entries, zero failures".into())
}

fn predicate_agreement() -> Outcome {
    let t = Instant::now();
    let (mut witnessed, mut refuted) = (0, 0);
    for v in shared().iter() {
        for n in [0u8, 1] {
            for cls in ElementClass::ALL {
                let at = || format!("{} n={n} {cls}", v.id);
                if exists_class(v, n, cls) {
                    let x = construct_witness(v, n, cls).map_err(|err| format!("{}: {err}", at()))?;
                    ensure(
                        v.lminus.norm(&x).map_err(e)? == BigInt::from(8 * i64::from(n) - 2),
                        || format!("{}: witness norm", at()),
                    )?;
                    ensure(classify_element(&v.lminus, &x).map_err(e)? == cls, || {
                        format!("{}: witness class", at())
                    })?;
                    witnessed += 1;
                } else if v.lminus.rank() <= 12 {
                    let found = search_witness(&v.lminus, target_square(n), cls, 3).map_err(e)?;
                    ensure(found.is_none(), || format!("{}: search found {found:?}", at()))?;
                    refuted += 1;
                }
            }
        }
    }
    let took = t.elapsed();
    ensure(took < Duration::from_secs(120), || format!("took {took:?}"))?;
    Ok(format!("{witnessed} witnessed, {refuted} refuted in {took:?}"))
}

fn key_delta(a: &K3Vertex, b: &K3Vertex, cls: ElementClass) -> bool {
    let dd: i64 = if cls == ElementClass::Odd { 1 } else { -1 };
    b.r == a.r + 1
        && i64::from(b.d) == i64::from(a.d) + dd
        && (b.vtype == VertexType::I) == (cls == ElementClass::Wu)
}

fn k3_structure() -> Outcome {
    let g = build_k3_graph(shared()).map_err(e)?;
    let bad = g.invariant_violations();
    ensure(bad.is_empty(), || bad.join("; "))?;
    ensure(g.sinks() == ["[10S]", "[8S]_I"], || format!("sinks {:?}", g.sinks()))?;
    for edge in g.edges() {
        let a = shared().by_id(&g.nodes()[edge.from].id).map_err(e)?;
        let b = shared().by_id(&g.nodes()[edge.to].id).map_err(e)?;
        ensure(key_delta(a, b, edge.class), || {
            format!("{} -> {} ({})", a.id, b.id, edge.class)
        })?;
    }
    let into_type_one: Vec<_> = g
        .edges()
        .iter()
        .filter(|x| x.class == ElementClass::Wu && g.nodes()[x.to].id == "[8S]_I")
        .map(|x| g.nodes()[x.from].id.as_str())
        .collect();
    ensure(into_type_one == ["[7S]"], || format!("Wu edges into [8S]_I from {into_type_one:?}"))?;
    Ok(format!("{} vertices, {} edges", g.vertex_count(), g.edge_count()))
}

fn k4_structure() -> Outcome {
    let k4 = build_k4_graph(shared()).map_err(e)?;
    let g = &k4.graph;
    ensure(g.vertex_count() == 75, || format!("{} vertices", g.vertex_count()))?;
    let into: Vec<_> = g
        .edges()
        .iter()
        .filter(|x| g.nodes()[x.to].id == IRR)
        .map(|x| (g.nodes()[x.from].id.as_str(), x.class))
        .collect();
    ensure(into == [("[3S]", ElementClass::Wu)], || format!("edges into irr: {into:?}"))?;
    let m = k4.data_of(IRR).ok_or("no irr data")?.mminus.negate();
    let d4 = StandardLattice::D4.lattice();
    let expected = direct_sum_all([&StandardLattice::U2.lattice(), &d4, &d4, &d4]);
    ensure(m.gram() == expected.gram(), || "-M- is not U(2)+3D4".into())?;
    ensure(m.signature().map_err(e)? == Signature::new(1, 13), || "signature".into())?;
    let f = discriminant_quadratic(&m, None).map_err(e)?;
    ensure(f.rank() == 8 && f.parity() == Parity::Even, || "discriminant".into())?;
    for v in shared().iter() {
        ensure(lattices_equivalent(&m, &v.lplus) != Equivalence::Yes, || {
            format!("-M-(irr) equivalent to L+ of {}", v.id)
        })?;
    }
    Ok("irr edge from [3S], -M- = U(2)+3D4 of signature (1,13), d = 8".into())
}

fn isomorphism() -> Outcome {
    let k3 = build_k3_graph(shared()).map_err(e)?;
    let k4 = build_k4_graph(shared()).map_err(e)?;
    let f = regular_subgraphs_and_f(&k3, &k4, shared()).map_err(e)?;
    ensure(f.is_isomorphism(), || f.failures.join("; "))?;
    ensure(f.vertex_map.len() == 74, || format!("{} vertices mapped", f.vertex_map.len()))?;
    let regular_edges = k3.edge_count() - 1;
    ensure(f.edge_map.len() == regular_edges, || format!("{} edges mapped", f.edge_map.len()))?;
    let swap = swap_check(&k3, &k4.graph);
    ensure(swap.is_empty(), || swap.join("; "))?;
    Ok(format!("74 vertices, {regular_edges} edges"))
}

fn flip_cycles() -> Outcome {
    let k4 = build_k4_graph(shared()).map_err(e)?;
    let (mut vertices, mut triples) = (0, 0);
    for v in shared().iter() {
        let found = find_flip_triples(v, 3).map_err(e)?;
        if !found.is_empty() {
            vertices += 1;
        }
        for t in found {
            let twice = flip(&v.lminus, &flip(&v.lminus, &t).map_err(e)?).map_err(e)?;
            ensure(twice == t, || format!("flip twice at {} moved {t:?}", v.id))?;
            let r = verify_flip_cycle(shared(), v, &t, &k4).map_err(e)?;
            ensure(r.holds(), || format!("{}: identities {:?}", v.id, r.identities))?;
            let back = flip(&v.lminus, &t).map_err(e)?;
            let r = verify_flip_cycle(shared(), v, &back, &k4).map_err(e)?;
            ensure(r.holds(), || format!("{}: reversed cycle fails", v.id))?;
            triples += 1;
        }
    }
    ensure(triples > 0, || "no triples found".into())?;
    Ok(format!("{triples} triples at {vertices} vertices"))
}

fn basic_cycles() -> Outcome {
    let k3 = build_k3_graph(shared()).map_err(e)?;
    let r = basic_cycles_regular(&k3, shared()).map_err(e)?;
    ensure(r.failures.is_empty(), || r.failures.join("; "))?;
    ensure(r.all_regular(), || "irregular basic cycle".into())?;
    let expected = k3.edge_count() + 1 - k3.vertex_count();
    ensure(r.cycles.len() == expected, || {
        format!("{} cycles, expected {expected}", r.cycles.len())
    })?;
    ensure(r.rational_rank == expected, || format!("rank {}", r.rational_rank))?;
    Ok(format!("{expected} cycles, rank {}", r.rational_rank))
}

fn synthesis() -> Outcome {
    let mut count = 0;
    for v in shared().iter() {
        for cls in ElementClass::ALL {
            if !exists_class(v, 1, cls) {
                continue;
            }
            let h = construct_witness(v, 1, cls).map_err(e)?;
            let s = synthesize_k4_plus(v, &h).map_err(|err| format!("{} {cls}: {err}", v.id))?;
            ensure(s.a.norm(&s.w).map_err(e)? == BigInt::from(-2), || "w²".into())?;
            ensure(s.a.norm(&s.big_h).map_err(e)? == BigInt::from(3), || "H²".into())?;
            ensure(s.a.inner(&s.w, &s.big_h).map_err(e)? == BigInt::from(0), || "w.H".into())?;
            ensure(!s.mplus.is_even(), || format!("{}: M+ even", v.id))?;
            ensure(
                s.mplus.signature().map_err(e)? == Signature::new(v.lminus.rank(), 1),
                || format!("{}: M+ signature", v.id),
            )?;
            count += 1;
        }
    }
    let u = StandardLattice::U.lattice();
    let e8 = StandardLattice::E8.lattice();
    let a = direct_sum_all([&u, &u, &u, &e8, &e8])
        .negate()
        .direct_sum(&StandardLattice::One.lattice());
    let mut w = vec![0i64; 23];
    (w[0], w[1], w[22]) = (1, 3, 2);
    let t = a.twist(&LatticeVector::from_ints(&w)).map_err(e)?;
    ensure(
        !t.is_even() && t.is_unimodular() && t.signature().map_err(e)? == Signature::new(21, 2),
        || "twisted K3 + <1> is not odd unimodular (21,2)".into(),
    )?;
    ensure(t.gram() == k4_lattice().map_err(e)?.gram(), || "k4_lattice differs".into())?;
    Ok(format!("{count} (vertex, class) pairs"))
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_k4graph"))
            .args(["build", "--graph", "k4", "--format", "json"])
            .output()
            .map_err(e)
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success() && b.status.success(), || "build failed".into())?;
    ensure(a.stdout == b.stdout, || "outputs differ".into())?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("catalog cardinality", catalog_cardinality),
        ("catalog validity", catalog_validity),
        ("predicate/oracle agreement", predicate_agreement),
        ("K3 graph structure", k3_structure),
        ("K4 graph structure", k4_structure),
        ("graph isomorphism", isomorphism),
        ("flip cycles", flip_cycles),
        ("basic-cycle regularity", basic_cycles),
        ("K4-lattice synthesis", synthesis),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
