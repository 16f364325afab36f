//! Invariant checks shared by the property suites and the acceptance run.
//! Each check takes its inputs explicitly so proptest strategies and the
//! seeded generator can feed it alike.
#![allow(dead_code)]

use circulant_wl::cr::{cr_stabilize, cr_step, individualize, individualize_all, VertexColoring};
use circulant_wl::graph::{build_cayley, CayleyGraph, DiGraph};
use circulant_wl::group::{
    abelian_groups_up_to, divisor_count, element_power, gcd, power_class_count, unit_multipliers,
    GroupSpec,
};
use circulant_wl::iso::count_automorphisms;
use circulant_wl::partition::OrderedPartition;
use circulant_wl::ring::{
    induced_partition, is_exponentiation_stable, multiplier_round_envelope, multiply, power_map, refine,
    refine_con, scale_set, GroupRingElement,
};
use circulant_wl::spectral::{
    eigenvalue_classes, numeric_spectrum, predicted_individualized_partition, stabilizer_subgroup,
};
use circulant_wl::sweep::{run_group_sweep, Mcg};
use circulant_wl::wl::{induced_smodule, initial_pair_coloring, initial_smodule, wl2_step};
use circulant_wl::Execution;

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+));
        }
    };
}

pub const PRIMES_13: [usize; 6] = [2, 3, 5, 7, 11, 13];

pub fn cyclic(n: usize) -> GroupSpec {
    GroupSpec::cyclic(n).unwrap()
}

pub fn con_of(mask: u64, n: usize) -> Vec<usize> {
    (1..n).filter(|&i| mask >> i & 1 == 1).collect()
}

/// All connection sets of a group of order `n`, as masks.
pub fn all_masks(n: usize) -> impl Iterator<Item = u64> {
    (0..1u64 << (n - 1)).map(|r| r << 1)
}

/// Nonempty proper connection sets of `Z_p`.
pub fn nontrivial_masks(p: usize) -> impl Iterator<Item = u64> {
    let full = (1u64 << p) - 2;
    all_masks(p).filter(move |&m| m != 0 && m != full)
}

pub fn random_partition(rng: &mut Mcg, n: usize, max_classes: usize) -> OrderedPartition {
    let k = 1 + rng.next_u64() as usize % max_classes.max(1);
    let labels: Vec<usize> = (0..n).map(|_| rng.next_u64() as usize % k).collect();
    OrderedPartition::from_labels(&labels)
}

/// `{0}` as its own class, the rest split at random.
pub fn random_smodule_like(rng: &mut Mcg, n: usize, max_classes: usize) -> OrderedPartition {
    let k = 1 + rng.next_u64() as usize % max_classes.max(1);
    let labels: Vec<usize> = (0..n)
        .map(|g| if g == 0 { 0 } else { 1 + rng.next_u64() as usize % k })
        .collect();
    OrderedPartition::from_labels(&labels)
}

pub fn combination(spec: &GroupSpec, v: &OrderedPartition, coeffs: &[i64]) -> GroupRingElement {
    let mut c = vec![0i64; spec.order()];
    for (class, &a) in v.classes().iter().zip(coeffs.iter().cycle()) {
        for &g in class {
            c[g] = a;
        }
    }
    GroupRingElement::from_coeffs(spec, c).unwrap()
}

// ---- groups ----

pub fn power_map_bijective_iff_unit(max_order: usize) -> Check {
    for spec in abelian_groups_up_to(max_order) {
        let n = spec.order();
        for m in -(n as i64)..=2 * n as i64 {
            let mut hit = vec![false; n];
            for i in 0..n {
                hit[spec.index(&element_power(&spec, &spec.element(i), m))] = true;
            }
            let bijective = hit.iter().all(|&b| b);
            let unit = gcd(m.unsigned_abs(), n as u64) == 1;
            ensure!(bijective == unit, "{spec}, m = {m}: bijective {bijective}, unit {unit}");
        }
    }
    Ok(())
}

pub fn power_classes_count_divisors(max_n: usize) -> Check {
    for n in 1..=max_n {
        let d = divisor_count(n as i64).unwrap() as usize;
        ensure!(power_class_count(&cyclic(n)) == d, "Z{n}: d = {d}");
    }
    Ok(())
}

pub fn index_round_trip(max_order: usize) -> Check {
    for spec in abelian_groups_up_to(max_order) {
        for i in 0..spec.order() {
            ensure!(spec.index(&spec.element(i)) == i, "{spec}: {i}");
        }
    }
    Ok(())
}

// ---- group ring ----

/// A coefficient-wise function of a basic-set combination is
/// constant on every class.
pub fn extraction(spec: &GroupSpec, v: &OrderedPartition, coeffs: &[i64]) -> Check {
    let u = combination(spec, v, coeffs);
    let phi: Vec<i64> = u.coeffs().iter().map(|&x| (x * x + 3 * x) % 5).collect();
    let image = GroupRingElement::from_coeffs(spec, phi).unwrap();
    ensure!(v.refines(&induced_partition(&image)), "{spec} {v}: image not constant on classes");
    Ok(())
}

/// Spanned sets are closed under intersection and union.
pub fn spanned_sets_closed(v: &OrderedPartition, rng: &mut Mcg, samples: usize) -> Check {
    let n = v.ground_size();
    let k = v.len();
    let union = |bits: u64| -> Vec<usize> {
        (0..k)
            .filter(|&i| bits >> i & 1 == 1)
            .flat_map(|i| v.classes()[i].iter().copied())
            .collect()
    };
    let pairs: Vec<(u64, u64)> = if k <= 6 {
        (0..1u64 << k).flat_map(|a| (0..1u64 << k).map(move |b| (a, b))).collect()
    } else {
        (0..samples).map(|_| (rng.next_bits(k as u32), rng.next_bits(k as u32))).collect()
    };
    for (a, b) in pairs {
        let (ta, tb) = (union(a), union(b));
        ensure!(v.spans(&ta) && v.spans(&tb), "{v}: union of classes not spanned");
        let mut member = vec![0u8; n];
        ta.iter().for_each(|&x| member[x] |= 1);
        tb.iter().for_each(|&x| member[x] |= 2);
        let inter: Vec<usize> = (0..n).filter(|&x| member[x] == 3).collect();
        let join: Vec<usize> = (0..n).filter(|&x| member[x] != 0).collect();
        ensure!(v.spans(&inter) && v.spans(&join), "{v}: closure fails for {a:#x}, {b:#x}");
    }
    Ok(())
}

/// Products of spanned elements are constant on the classes of
/// `R(V)`.
pub fn product_constant_on_refinement(spec: &GroupSpec, v: &OrderedPartition, a: &[i64], b: &[i64]) -> Check {
    let (x, y) = (combination(spec, v, a), combination(spec, v, b));
    let r = refine(spec, v).unwrap();
    let xy = multiply(&x, &y).unwrap();
    ensure!(r.refines(&induced_partition(&xy)), "{spec} {v}: product splits a class of R(V) = {r}");
    Ok(())
}

/// `R` and `R_Con` are monotone.
pub fn refinement_monotone(spec: &GroupSpec, fine: &OrderedPartition, coarse: &OrderedPartition, con: &[usize]) -> Check {
    ensure!(fine.refines(coarse), "inputs are not nested");
    let (rf, rc) = (refine(spec, fine).unwrap(), refine(spec, coarse).unwrap());
    ensure!(rf.refines(&rc), "{spec}: R({fine}) = {rf} does not refine R({coarse}) = {rc}");
    let (cf, cc) = (refine_con(spec, fine, con).unwrap(), refine_con(spec, coarse, con).unwrap());
    ensure!(cf.refines(&cc), "{spec}: R_Con not monotone for {con:?}");
    Ok(())
}

/// `m T` is spanned after `2 ceil(log2 m)` refinements.
pub fn multiplier_envelope(spec: &GroupSpec, v: &OrderedPartition) -> Check {
    let units = unit_multipliers(spec);
    let deepest = units.iter().map(|&m| multiplier_round_envelope(m)).max().unwrap_or(0);
    let mut levels = vec![v.clone()];
    for _ in 0..deepest {
        let next = refine(spec, levels.last().unwrap()).unwrap();
        levels.push(next);
    }
    for &m in &units {
        let r = &levels[multiplier_round_envelope(m)];
        for t in v.classes() {
            let image = scale_set(spec, t, m as i64);
            ensure!(r.spans(&image), "{spec} {v}: {m}*{t:?} not spanned after {} rounds", multiplier_round_envelope(m));
        }
    }
    Ok(())
}

/// `R` preserves exponentiation stability.
pub fn stability_preserved(spec: &GroupSpec, v: &OrderedPartition) -> Check {
    if is_exponentiation_stable(spec, v) {
        let r = refine(spec, v).unwrap();
        ensure!(is_exponentiation_stable(spec, &r), "{spec}: R({v}) = {r} is not stable");
    }
    Ok(())
}

/// Rounds stay within the bound for every connection set of every group of
/// order <= `max`.
pub fn round_bound_all_groups(max_order: usize) -> Check {
    for spec in abelian_groups_up_to(max_order).into_iter().filter(|g| g.order() >= 2) {
        let records = run_group_sweep(&spec, false, Execution::Parallel).map_err(|e| e.to_string())?;
        ensure!(records.len() == 1 << (spec.order() - 1), "{spec}: record count");
    }
    Ok(())
}

pub fn ring_algebra(spec: &GroupSpec, u: &[i64], v: &[i64], w: &[i64], m: i64) -> Check {
    let el = |c: &[i64]| GroupRingElement::from_coeffs(spec, c.to_vec()).unwrap();
    let (u, v, w) = (el(u), el(v), el(w));
    let uv = multiply(&u, &v).unwrap();
    ensure!(uv == multiply(&v, &u).unwrap(), "not commutative");
    ensure!(
        multiply(&uv, &w).unwrap() == multiply(&u, &multiply(&v, &w).unwrap()).unwrap(),
        "not associative"
    );
    if gcd(m.unsigned_abs(), spec.order() as u64) == 1 {
        let lhs = power_map(&uv, m).unwrap();
        let rhs = multiply(&power_map(&u, m).unwrap(), &power_map(&v, m).unwrap()).unwrap();
        ensure!(lhs == rhs, "power map is not multiplicative for m = {m}");
    }
    Ok(())
}

// ---- 2-WL and color refinement ----

/// One 2-WL round on a Cayley graph agrees with one S-module refinement.
pub fn wl_step_is_refinement(spec: &GroupSpec, mask: u64) -> Check {
    let cay = CayleyGraph::from_mask(spec.clone(), mask).map_err(|e| e.to_string())?;
    let c = initial_pair_coloring(&cay.to_digraph());
    let mut cur = c;
    loop {
        let v = induced_smodule(&cur, spec).map_err(|e| e.to_string())?;
        let next = wl2_step(&cur);
        let lhs = induced_smodule(&next, spec).map_err(|e| e.to_string())?;
        let rhs = refine(spec, &v).unwrap();
        ensure!(lhs == rhs, "{}: S(WL(C)) = {lhs}, R(S(C)) = {rhs}", cay.describe());
        if next.class_count() == cur.class_count() {
            return Ok(());
        }
        cur = next;
    }
}

/// One CR round on a vertex coloring given by an S-module is
/// `R_Con` of that S-module.
pub fn cr_step_is_con_refinement(spec: &GroupSpec, con: &[usize], v: &OrderedPartition) -> Check {
    let g = build_cayley(spec, con).unwrap();
    let stepped = cr_step(&g, &VertexColoring::from_partition(v)).to_partition();
    let algebraic = refine_con(spec, v, con).unwrap();
    ensure!(stepped == algebraic, "{spec} {con:?} {v}: CR {stepped}, R_Con {algebraic}");
    Ok(())
}

/// CR commutes with `phi(g) = h g + b` on `Z_p`, starting from a coloring constant on
/// the orbits of `phi`.
pub fn cr_respects_automorphism(p: usize, con: &[usize], h: usize, b: usize, rng: &mut Mcg) -> Check {
    let g = build_cayley(&cyclic(p), con).unwrap();
    let phi = |x: usize| (h * x + b) % p;
    let mut label = vec![usize::MAX; p];
    for start in 0..p {
        if label[start] != usize::MAX {
            continue;
        }
        let orbit_label = rng.next_u64() as usize % 3;
        let mut x = start;
        while label[x] == usize::MAX {
            label[x] = orbit_label;
            x = phi(x);
        }
    }
    let c = VertexColoring::from_labels(&label);
    let stepped = cr_step(&g, &c);
    ensure!(
        (0..p).all(|x| stepped.color(x) == stepped.color(phi(x))),
        "Z{p} {con:?}: phi(g) = {h}g+{b} not respected"
    );
    let stable = cr_stabilize(&g, &c).final_state;
    ensure!((0..p).all(|x| stable.color(x) == stable.color(phi(x))), "stable coloring breaks phi");
    Ok(())
}

/// CR and 2-WL steps never merge classes.
pub fn steps_refine(g: &DiGraph, c: &VertexColoring) -> Check {
    let next = cr_step(g, c);
    ensure!(next.to_partition().refines(&c.to_partition()), "cr_step merged classes");
    let pc = initial_pair_coloring(g);
    let w = wl2_step(&pc);
    ensure!(w.as_partition().refines(&pc.as_partition()), "wl2_step merged classes");
    Ok(())
}

// ---- prime circulants ----

/// Individualizing any single `g0` gives the predicted coset partition.
pub fn one_individualization(p: usize, mask: u64) -> Check {
    let con = con_of(mask, p);
    let g = build_cayley(&cyclic(p), &con).unwrap();
    let sd = stabilizer_subgroup(p, &con).map_err(|e| e.to_string())?;
    for g0 in 0..p {
        let got = cr_stabilize(&g, &individualize(&VertexColoring::uniform(p), g0)).final_state.to_partition();
        let want = predicted_individualized_partition(&sd, g0);
        ensure!(got == want, "Z{p} {con:?} g0 = {g0}: {got} != {want}");
    }
    Ok(())
}

/// Individualizing each given pair of distinct vertices ends discrete.
pub fn two_individualizations(p: usize, mask: u64, pairs: &[(usize, usize)]) -> Check {
    let con = con_of(mask, p);
    let g = build_cayley(&cyclic(p), &con).unwrap();
    for &(a, b) in pairs {
        let start = individualize(&individualize_all(&VertexColoring::uniform(p), &[a]), b);
        let stable = cr_stabilize(&g, &start).final_state;
        ensure!(stable.is_discrete(), "Z{p} {con:?}: ({a}, {b}) leaves {}", stable.to_partition());
    }
    Ok(())
}

/// The maps `g -> h g + b` are automorphisms, and for
/// nontrivial `Con` they are all of them.
pub fn affine_automorphisms(p: usize, mask: u64, count_all: bool) -> Check {
    let con = con_of(mask, p);
    let g = build_cayley(&cyclic(p), &con).unwrap();
    let sd = stabilizer_subgroup(p, &con).map_err(|e| e.to_string())?;
    for &h in &sd.h_elements {
        for b in 0..p {
            let map: Vec<usize> = (0..p).map(|x| (h * x + b) % p).collect();
            ensure!(g.is_isomorphism(&g, &map), "Z{p} {con:?}: {h}g+{b} is not an automorphism");
        }
    }
    if count_all && con.len() < p - 1 {
        let count = count_automorphisms(&g);
        let expected = (p * sd.h_elements.len()) as u64;
        ensure!(count == expected, "Z{p} {con:?}: {count} automorphisms, expected {expected}");
    }
    Ok(())
}

/// Numeric eigenvalue grouping agrees with the coset classes.
pub fn spectrum_grouping(p: usize, mask: u64) -> Check {
    let con = con_of(mask, p);
    let sd = stabilizer_subgroup(p, &con).map_err(|e| e.to_string())?;
    let numeric = numeric_spectrum(&sd, 1e-9);
    ensure!(numeric.grouping == eigenvalue_classes(&sd), "Z{p} {con:?}: {}", numeric.grouping);
    Ok(())
}

/// Initial S-modules of every connection set of every group up to `max`.
pub fn initial_smodules(max_order: usize) -> Vec<(GroupSpec, OrderedPartition)> {
    let mut out = Vec::new();
    for spec in abelian_groups_up_to(max_order).into_iter().filter(|g| g.order() >= 2) {
        for mask in all_masks(spec.order()) {
            let con = con_of(mask, spec.order());
            out.push((spec.clone(), initial_smodule(&spec, &con)));
        }
    }
    out
}
