//! The algebraic law catalog, checked on seeded random instances.

use std::fmt;

use crate::error::Result;
use crate::finrel::{FinRel, IndexedFamily, SetAlgebra};
use crate::gen::{self, case_rng, GenConfig, Rng64};
use crate::lattice::{check_lub, check_monotone, check_partial_order, lfp, MonotoneMap};
use crate::par::{map_indexed, Exec};
use crate::rels::{
    compose_rr, compose_rs, compose_ts, compose_tt, compose_tw, id_r, id_t, Lasso, OmegaSet,
    Trace, TraceRel, TraceSet,
};
use crate::symbolic::check_soundness;
use crate::universe::{Atom, Limits, Sort, Tuple};

/// `Ok(None)` when the law holds on the instance, `Ok(Some(cx))` with a
/// rendered counterexample otherwise.
pub type CaseResult = Result<Option<String>>;

type CheckFn = dyn Fn(&mut Rng64, &GenConfig) -> CaseResult + Send + Sync;

pub struct Law {
    pub name: String,
    check: Box<CheckFn>,
}

impl Law {
    pub fn new(
        name: impl Into<String>,
        check: impl Fn(&mut Rng64, &GenConfig) -> CaseResult + Send + Sync + 'static,
    ) -> Law {
        Law {
            name: name.into(),
            check: Box::new(check),
        }
    }

    pub fn check(&self, rng: &mut Rng64, cfg: &GenConfig) -> CaseResult {
        (self.check)(rng, cfg)
    }
}

impl fmt::Debug for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Law").field("name", &self.name).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LawConfig {
    pub seed: u64,
    pub cases: usize,
    pub gen: GenConfig,
}

impl Default for LawConfig {
    fn default() -> Self {
        LawConfig {
            seed: 0,
            cases: 1000,
            gen: GenConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawResult {
    pub name: String,
    pub cases: usize,
    /// Lowest failing case index and its counterexample.
    pub failure: Option<(usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawReport {
    pub results: Vec<LawResult>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.failure.is_none())
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            match &r.failure {
                None => writeln!(f, "PASS {} ({} cases)", r.name, r.cases)?,
                Some((case, cx)) => writeln!(f, "FAIL {} (case {case}): {cx}", r.name)?,
            }
        }
        let failed = self.results.iter().filter(|r| r.failure.is_some()).count();
        writeln!(
            f,
            "{} laws, {} passed, {} failed",
            self.results.len(),
            self.results.len() - failed,
            failed
        )
    }
}

/// Runs `cfg.cases` instances of every law. Case `k` of law `i` draws from
/// its own generator stream, so the report does not depend on scheduling.
pub fn run_laws(laws: &[Law], cfg: &LawConfig, exec: Exec) -> LawReport {
    let n = cfg.cases;
    let outcomes = map_indexed(laws.len() * n, exec, |k| {
        let (i, case) = (k / n.max(1), k % n.max(1));
        let mut rng = case_rng(cfg.seed, i as u64, case as u64);
        match laws[i].check(&mut rng, &cfg.gen) {
            Ok(r) => r,
            Err(e) => Some(format!("error: {e}")),
        }
    });
    let results = laws
        .iter()
        .enumerate()
        .map(|(i, law)| LawResult {
            name: law.name.clone(),
            cases: n,
            failure: outcomes[i * n..(i + 1) * n]
                .iter()
                .enumerate()
                .find_map(|(case, o)| o.clone().map(|cx| (case, cx))),
        })
        .collect();
    LawReport { results }
}

// ---- helpers ----

trait Show {
    fn show(&self) -> String;
}

impl Show for Tuple {
    fn show(&self) -> String {
        self.to_string()
    }
}

impl Show for (Atom, Trace, Atom) {
    fn show(&self) -> String {
        format!("({},{},{})", self.0, self.1, self.2)
    }
}

impl Show for (Atom, Trace) {
    fn show(&self) -> String {
        format!("({},{})", self.0, self.1)
    }
}

impl Show for (Atom, Lasso) {
    fn show(&self) -> String {
        format!("({},{})", self.0, self.1)
    }
}

/// Extensional equality with the first differing element as counterexample.
fn same<T: SetAlgebra>(lhs: &T, rhs: &T) -> CaseResult
where
    T::Elem: Show,
{
    if lhs.equiv(rhs)? {
        return Ok(None);
    }
    if let Some(e) = lhs.elems().difference(rhs.elems()).next() {
        return Ok(Some(format!("{} in lhs only", e.show())));
    }
    let e = rhs.elems().difference(lhs.elems()).next().expect("sets differ");
    Ok(Some(format!("{} in rhs only", e.show())))
}

struct Sorts {
    a: Sort,
    b: Sort,
    c: Sort,
    d: Sort,
    e: Sort,
}

fn sorts(rng: &mut Rng64, cfg: &GenConfig) -> Sorts {
    let m = cfg.max_carrier;
    Sorts {
        a: gen::sort(rng, "A", m),
        b: gen::sort(rng, "B", m),
        c: gen::sort(rng, "C", m),
        d: gen::sort(rng, "D", m),
        e: gen::event_sort(cfg.events),
    }
}

/// Random signature of arity 0..=3 over the given sorts.
fn random_sig(rng: &mut Rng64, s: &Sorts) -> Vec<Sort> {
    use rand::Rng;
    let pool = [&s.a, &s.b, &s.c];
    let n = rng.gen_range(0..=3);
    (0..n).map(|_| pool[rng.gen_range(0..3)].clone()).collect()
}

fn rr(rng: &mut Rng64, x: &Sort, y: &Sort, cfg: &GenConfig) -> FinRel {
    gen::rel(rng, &[x.clone(), y.clone()], cfg)
}

fn un(rng: &mut Rng64, x: &Sort, cfg: &GenConfig) -> FinRel {
    gen::rel(rng, &[x.clone()], cfg)
}

fn tt(rng: &mut Rng64, x: &Sort, s: &Sorts, y: &Sort, cfg: &GenConfig) -> TraceRel {
    gen::trace_rel(rng, x, &s.e, y, cfg)
}

fn ts(rng: &mut Rng64, x: &Sort, s: &Sorts, cfg: &GenConfig) -> TraceSet {
    gen::trace_set(rng, x, &s.e, cfg)
}

fn tw(rng: &mut Rng64, x: &Sort, s: &Sorts, cfg: &GenConfig) -> OmegaSet {
    gen::omega_set(rng, x, &s.e, cfg)
}

fn fam<T: SetAlgebra>(
    rng: &mut Rng64,
    cfg: &GenConfig,
    member: impl FnMut(&mut Rng64) -> T,
) -> IndexedFamily<T> {
    gen::family(rng, cfg, member)
}

/// The five composition variants as `(name, law builder)` hooks. Each
/// builder returns the two operands' generators and the composition.
macro_rules! variant_laws {
    ($out:ident, $tag:literal, |$rng:ident, $s:ident, $cfg:ident| lhs: $l:expr, rhs: $r:expr, compose: $f:expr) => {{
        $out.push(Law::new(concat!("concat_union_distr_r[", $tag, "]"), |$rng, $cfg| {
            let $s = sorts($rng, $cfg);
            let (x1, x2, y) = ($l, $l, $r);
            let lhs = $f(&x1.union(&x2)?, &y)?;
            let rhs = $f(&x1, &y)?.union(&$f(&x2, &y)?)?;
            same(&lhs, &rhs)
        }));
        $out.push(Law::new(concat!("concat_union_distr_l[", $tag, "]"), |$rng, $cfg| {
            let $s = sorts($rng, $cfg);
            let (x, y1, y2) = ($l, $r, $r);
            let lhs = $f(&x, &y1.union(&y2)?)?;
            let rhs = $f(&x, &y1)?.union(&$f(&x, &y2)?)?;
            same(&lhs, &rhs)
        }));
        $out.push(Law::new(concat!("concat_indexed_union_distr_r[", $tag, "]"), |$rng, $cfg| {
            let $s = sorts($rng, $cfg);
            let xs = fam($rng, $cfg, |$rng| $l);
            let y = $r;
            let lhs = $f(&xs.indexed_union(), &y)?;
            let rhs = xs.map(|x| $f(x, &y))?.indexed_union();
            same(&lhs, &rhs)
        }));
        $out.push(Law::new(concat!("concat_indexed_union_distr_l[", $tag, "]"), |$rng, $cfg| {
            let $s = sorts($rng, $cfg);
            let x = $l;
            let ys = fam($rng, $cfg, |$rng| $r);
            let lhs = $f(&x, &ys.indexed_union())?;
            let rhs = ys.map(|y| $f(&x, y))?.indexed_union();
            same(&lhs, &rhs)
        }));
    }};
}

/// Commutativity and associativity of `∪` and `∩`, over plain relations of
/// random arity and over traced relations.
fn boolean_laws(out: &mut Vec<Law>) {
    type Op<T> = fn(&T, &T) -> Result<T>;
    fn add<T: SetAlgebra + 'static>(
        out: &mut Vec<Law>,
        kind: &'static str,
        make: fn(&mut Rng64, &Sorts, &[Sort], &GenConfig) -> T,
    ) where
        T::Elem: Show,
    {
        let ops: [(&str, Op<T>); 2] = [("union", |a, b| a.union(b)), ("intersect", |a, b| a.intersect(b))];
        for (name, op) in ops {
            out.push(Law::new(format!("{name}_comm[{kind}]"), move |rng, cfg| {
                let s = sorts(rng, cfg);
                let sig = random_sig(rng, &s);
                let (x, y) = (make(rng, &s, &sig, cfg), make(rng, &s, &sig, cfg));
                same(&op(&x, &y)?, &op(&y, &x)?)
            }));
            out.push(Law::new(format!("{name}_assoc[{kind}]"), move |rng, cfg| {
                let s = sorts(rng, cfg);
                let sig = random_sig(rng, &s);
                let (x, y, z) = (
                    make(rng, &s, &sig, cfg),
                    make(rng, &s, &sig, cfg),
                    make(rng, &s, &sig, cfg),
                );
                same(&op(&op(&x, &y)?, &z)?, &op(&x, &op(&y, &z)?)?)
            }));
        }
    }
    add::<FinRel>(out, "rel", |rng, _, sig, cfg| gen::rel(rng, sig, cfg));
    add::<TraceRel>(out, "traced", |rng, s, _, cfg| tt(rng, &s.a, s, &s.b, cfg));
}

fn assoc_laws(out: &mut Vec<Law>) {
    out.push(Law::new("concat_assoc[case1: rel,rel,rel]", |rng, cfg| {
        let s = sorts(rng, cfg);
        let (x, y, z) = (rr(rng, &s.a, &s.b, cfg), rr(rng, &s.b, &s.c, cfg), rr(rng, &s.c, &s.d, cfg));
        same(&compose_rr(&compose_rr(&x, &y)?, &z)?, &compose_rr(&x, &compose_rr(&y, &z)?)?)
    }));
    out.push(Law::new("concat_assoc[case2: rel,rel,unary]", |rng, cfg| {
        let s = sorts(rng, cfg);
        let (x, y, z) = (rr(rng, &s.a, &s.b, cfg), rr(rng, &s.b, &s.c, cfg), un(rng, &s.c, cfg));
        same(&compose_rs(&compose_rr(&x, &y)?, &z)?, &compose_rs(&x, &compose_rs(&y, &z)?)?)
    }));
    out.push(Law::new("concat_assoc[case3: traced,traced,traced]", |rng, cfg| {
        let s = sorts(rng, cfg);
        let x = tt(rng, &s.a, &s, &s.b, cfg);
        let y = tt(rng, &s.b, &s, &s.c, cfg);
        let z = tt(rng, &s.c, &s, &s.d, cfg);
        same(&compose_tt(&compose_tt(&x, &y)?, &z)?, &compose_tt(&x, &compose_tt(&y, &z)?)?)
    }));
    out.push(Law::new("concat_assoc[case4: traced,traced,trace-set]", |rng, cfg| {
        let s = sorts(rng, cfg);
        let x = tt(rng, &s.a, &s, &s.b, cfg);
        let y = tt(rng, &s.b, &s, &s.c, cfg);
        let z = ts(rng, &s.c, &s, cfg);
        same(&compose_ts(&compose_tt(&x, &y)?, &z)?, &compose_ts(&x, &compose_ts(&y, &z)?)?)
    }));
    out.push(Law::new("concat_assoc[case5: traced,traced,stream]", |rng, cfg| {
        let s = sorts(rng, cfg);
        let x = tt(rng, &s.a, &s, &s.b, cfg);
        let y = tt(rng, &s.b, &s, &s.c, cfg);
        let z = tw(rng, &s.c, &s, cfg);
        same(&compose_tw(&compose_tt(&x, &y)?, &z)?, &compose_tw(&x, &compose_tw(&y, &z)?)?)
    }));
}

fn distribution_laws(out: &mut Vec<Law>) {
    variant_laws!(out, "rel,rel", |rng, s, cfg|
        lhs: rr(rng, &s.a, &s.b, cfg), rhs: rr(rng, &s.b, &s.c, cfg), compose: compose_rr);
    variant_laws!(out, "rel,unary", |rng, s, cfg|
        lhs: rr(rng, &s.a, &s.b, cfg), rhs: un(rng, &s.b, cfg), compose: compose_rs);
    variant_laws!(out, "traced,traced", |rng, s, cfg|
        lhs: tt(rng, &s.a, &s, &s.b, cfg), rhs: tt(rng, &s.b, &s, &s.c, cfg), compose: compose_tt);
    variant_laws!(out, "traced,trace-set", |rng, s, cfg|
        lhs: tt(rng, &s.a, &s, &s.b, cfg), rhs: ts(rng, &s.b, &s, cfg), compose: compose_ts);
    variant_laws!(out, "traced,stream", |rng, s, cfg|
        lhs: tt(rng, &s.a, &s, &s.b, cfg), rhs: tw(rng, &s.b, &s, cfg), compose: compose_tw);
}

fn identity_laws(out: &mut Vec<Law>) {
    out.push(Law::new("id_unit[rel]", |rng, cfg| {
        let s = sorts(rng, cfg);
        let r = rr(rng, &s.a, &s.b, cfg);
        Ok(same(&compose_rr(&id_r(&s.a), &r)?, &r)?.or(same(&compose_rr(&r, &id_r(&s.b))?, &r)?))
    }));
    out.push(Law::new("id_unit[rel,unary]", |rng, cfg| {
        let s = sorts(rng, cfg);
        let u = un(rng, &s.a, cfg);
        same(&compose_rs(&id_r(&s.a), &u)?, &u)
    }));
    out.push(Law::new("id_unit[traced]", |rng, cfg| {
        let s = sorts(rng, cfg);
        let r = tt(rng, &s.a, &s, &s.b, cfg);
        let left = same(&compose_tt(&id_t(&s.a, &s.e), &r)?, &r)?;
        Ok(left.or(same(&compose_tt(&r, &id_t(&s.b, &s.e))?, &r)?))
    }));
    out.push(Law::new("id_unit[traced,trace-set]", |rng, cfg| {
        let s = sorts(rng, cfg);
        let t = ts(rng, &s.a, &s, cfg);
        same(&compose_ts(&id_t(&s.a, &s.e), &t)?, &t)
    }));
    out.push(Law::new("id_unit[traced,stream]", |rng, cfg| {
        let s = sorts(rng, cfg);
        let w = tw(rng, &s.a, &s, cfg);
        same(&compose_tw(&id_t(&s.a, &s.e), &w)?, &w)
    }));
    out.push(Law::new("id_membership", |rng, cfg| {
        use rand::seq::SliceRandom;
        let s = sorts(rng, cfg);
        let a = s.a.carrier().choose(rng).expect("nonempty").clone();
        let b = s.a.carrier().choose(rng).expect("nonempty").clone();
        let l = gen::trace(rng, &s.e, cfg);
        let plain = id_r(&s.a).member(&Tuple(vec![a.clone(), b.clone()]))?;
        if plain != (a == b) {
            return Ok(Some(format!("({a},{b}) ∈ id is {plain}")));
        }
        let traced = id_t(&s.a, &s.e).triples().contains(&(a.clone(), l.clone(), b.clone()));
        if traced != (a == b && l.is_empty()) {
            return Ok(Some(format!("({a},{l},{b}) ∈ id is {traced}")));
        }
        Ok(None)
    }));
}

fn misc_laws(out: &mut Vec<Law>) {
    out.push(Law::new("intersect_indexed_union_distr", |rng, cfg| {
        let s = sorts(rng, cfg);
        let sig = random_sig(rng, &s);
        let x = gen::rel(rng, &sig, cfg);
        let ys = fam(rng, cfg, |rng| gen::rel(rng, &sig, cfg));
        let lhs = x.intersect(&ys.indexed_union())?;
        let rhs = ys.map(|y| x.intersect(y))?.indexed_union();
        same(&lhs, &rhs)
    }));
    out.push(Law::new("antisymmetry", |rng, cfg| {
        use rand::Rng;
        let s = sorts(rng, cfg);
        let sig = random_sig(rng, &s);
        let x = gen::rel(rng, &sig, cfg);
        let y = if rng.gen_bool(0.5) { x.clone() } else { gen::rel(rng, &sig, cfg) };
        let both = x.included(&y)? && y.included(&x)?;
        if both != x.equiv(&y)? {
            return Ok(Some(format!("x={{{}}} y={{{}}}", show_set(&x), show_set(&y))));
        }
        Ok(None)
    }));
    out.push(Law::new("unfold_soundness", |rng, cfg| {
        let (stmt, model) = gen::statement_and_model(rng, cfg, 3);
        let (direct, unfolded) = check_soundness(&stmt, &model)?;
        if direct != unfolded {
            return Ok(Some(format!("{stmt}: direct {direct}, unfolded {unfolded}")));
        }
        Ok(None)
    }));
}

fn show_set(x: &FinRel) -> String {
    x.tuples().iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// A random monotone functional `X ↦ R ∪ S∘X ∪ X∘T ∪ X∘X` over `A×A`, with
/// each term present at random (and at least one of them).
pub fn random_functional(rng: &mut Rng64, cfg: &GenConfig) -> (Sort, MonotoneMap<'static>) {
    use rand::Rng;
    let a = gen::sort(rng, "A", cfg.max_carrier);
    let (r, s, t) = (rr(rng, &a, &a, cfg), rr(rng, &a, &a, cfg), rr(rng, &a, &a, cfg));
    let mut mask: u8 = rng.gen_range(1..16);
    if mask == 0 {
        mask = 1;
    }
    let sig = vec![a.clone(), a.clone()];
    let f = MonotoneMap::new(sig, move |x| {
        let mut acc = r.empty_like();
        if mask & 1 != 0 {
            acc = acc.union(&r)?;
        }
        if mask & 2 != 0 {
            acc = acc.union(&compose_rr(&s, x)?)?;
        }
        if mask & 4 != 0 {
            acc = acc.union(&compose_rr(x, &t)?)?;
        }
        if mask & 8 != 0 {
            acc = acc.union(&compose_rr(x, x)?)?;
        }
        Ok(acc)
    });
    (a, f)
}

/// Smallest pre-fixed point of `f` containing `p`, by naive iteration of
/// `X ↦ p ∪ f(X)`; used as a sample of pre-fixed points.
pub fn pre_fixed_point_above(f: &MonotoneMap<'_>, p: &FinRel) -> Result<FinRel> {
    let mut x = p.clone();
    loop {
        let next = p.union(&f.apply(&x)?)?;
        if next == x {
            return Ok(x);
        }
        x = next;
    }
}

/// Checks one random functional: `lfp` is a fixed point, lies below every
/// sampled pre-fixed point, and took at most `|A×A| + 1` iterations.
pub fn check_lfp_instance(rng: &mut Rng64, cfg: &GenConfig) -> CaseResult {
    let (a, f) = random_functional(rng, cfg);
    let fp = lfp(&f)?;
    let space = a.len() * a.len();
    if fp.iterations > space + 1 {
        return Ok(Some(format!("{} iterations for a space of {space}", fp.iterations)));
    }
    if f.apply(&fp.value)? != fp.value {
        return Ok(Some(format!("lfp {{{}}} is not a fixed point", show_set(&fp.value))));
    }
    let sig = vec![a.clone(), a.clone()];
    let mut samples = vec![FinRel::full(sig.clone(), &Limits::default())?];
    for _ in 0..4 {
        let p = gen::rel(rng, &sig, cfg);
        samples.push(pre_fixed_point_above(&f, &p)?);
    }
    for p in &samples {
        if !fp.value.included(p)? {
            return Ok(Some(format!(
                "lfp {{{}}} not below pre-fixed point {{{}}}",
                show_set(&fp.value),
                show_set(p)
            )));
        }
    }
    let mono = check_monotone(&f, &samples)?;
    Ok(mono.violations.into_iter().next())
}

fn lattice_laws(out: &mut Vec<Law>) {
    out.push(Law::new("lattice_partial_order", |rng, cfg| {
        let s = sorts(rng, cfg);
        let sig = vec![s.a.clone(), s.b.clone()];
        let mut samples: Vec<FinRel> = (0..4).map(|_| gen::rel(rng, &sig, cfg)).collect();
        samples.push(samples[0].clone());
        samples.push(samples[0].intersect(&samples[1])?);
        let rep = check_partial_order(&sig, &samples, &Limits::default())?;
        Ok(rep.violations.into_iter().next())
    }));
    out.push(Law::new("lattice_lub", |rng, cfg| {
        let s = sorts(rng, cfg);
        let sig = vec![s.a.clone(), s.b.clone()];
        let family: Vec<FinRel> = (0..3).map(|_| gen::rel(rng, &sig, cfg)).collect();
        let mut samples: Vec<FinRel> = (0..4).map(|_| gen::rel(rng, &sig, cfg)).collect();
        samples.push(FinRel::full(sig.clone(), &Limits::default())?);
        samples.push(family[0].union(&family[1])?.union(&family[2])?);
        let rep = check_lub(&family, &samples)?;
        Ok(rep.violations.into_iter().next())
    }));
    out.push(Law::new("lfp_least_fixed_point", check_lfp_instance));
}

/// Every law, in report order.
pub fn catalog() -> Vec<Law> {
    let mut out = Vec::new();
    boolean_laws(&mut out);
    assoc_laws(&mut out);
    distribution_laws(&mut out);
    identity_laws(&mut out);
    misc_laws(&mut out);
    lattice_laws(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes_and_is_deterministic() {
        let cfg = LawConfig {
            cases: 20,
            ..LawConfig::default()
        };
        let laws = catalog();
        let a = run_laws(&laws, &cfg, Exec::Parallel);
        let b = run_laws(&laws, &cfg, Exec::Sequential);
        assert!(a.passed(), "{a}");
        assert_eq!(a.to_string(), b.to_string());
    }

    #[test]
    fn corrupted_law_reports_a_counterexample() {
        // union is not a left identity-free operation: x ∪ y == x is false
        // whenever y adds something
        let broken = Law::new("union_absorbs", |rng, cfg| {
            let a = gen::sort(rng, "A", cfg.max_carrier);
            let (x, y) = (un(rng, &a, cfg), un(rng, &a, cfg));
            same(&x.union(&y)?, &x)
        });
        let cfg = LawConfig {
            cases: 50,
            ..LawConfig::default()
        };
        let rep = run_laws(&[broken], &cfg, Exec::Parallel);
        let (case, cx) = rep.results[0].failure.clone().expect("must fail");
        assert!(cx.ends_with("in lhs only"), "{cx}");
        assert!(rep.to_string().starts_with(&format!("FAIL union_absorbs (case {case}): (")));
    }
}
