//! Seeded property-check suites over random terms and model elements.
//!
//! Each suite reports, per property, how many instances passed, failed or
//! were skipped (an implication whose hypothesis did not hold, or a check
//! that hit the equivalence cap). Runs are deterministic given the seed.

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::axioms::{Implication, Vars, EQUATIONS};
use crate::countermodel::{
    cm_dot, cm_plus, cm_star, eval_cm, eval_cm_with, standard_valuation, ModelElement, UnaryLang,
};
use crate::derivatives::{build_automaton, delta, fundamental_unfold, out, reach};
use crate::equivalence::{equiv_with_cap, member};
use crate::error::CountermodelError;
use crate::gen::{model_element, TermGen};
use crate::language::{sem_bounded, BoundedLang, SyncWord};
use crate::normalform::{build_system, solve, to_normal_form};
use crate::semilattice::SymSet;
use crate::syntax::{is_nsf, parse_term, Letter, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Suite {
    Axioms,
    Derivatives,
    Fundamental,
    Normalform,
    Countermodel,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::Axioms, Suite::Derivatives, Suite::Fundamental, Suite::Normalform, Suite::Countermodel];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Derivatives => "derivatives",
            Suite::Fundamental => "fundamental",
            Suite::Normalform => "normalform",
            Suite::Countermodel => "countermodel",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub seed: u64,
    pub iters: usize,
    pub bound: usize,
    pub cap: usize,
    pub alphabet: SymSet,
    /// Largest generated term; each suite uses `min` of this and its own limit.
    pub max_size: usize,
}

impl Default for CheckConfig {
    fn default() -> CheckConfig {
        CheckConfig {
            seed: 0,
            iters: 100,
            bound: 4,
            cap: crate::equivalence::DEFAULT_PAIR_CAP,
            alphabet: SymSet::of("abc"),
            max_size: 12,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PropertyReport {
    pub property: String,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub first_failure: Option<String>,
}

impl PropertyReport {
    fn new(name: &str) -> PropertyReport {
        PropertyReport { property: name.to_string(), ..PropertyReport::default() }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    /// `None` counts as skipped.
    fn record_opt(&mut self, ok: Option<bool>, describe: impl FnOnce() -> String) {
        match ok {
            Some(ok) => self.record(ok, describe),
            None => self.skipped += 1,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub seed: u64,
    pub iterations: usize,
    pub properties: Vec<PropertyReport>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.properties.iter().all(|p| p.failed == 0)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.property == name)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} (seed {}, {} iterations)", self.suite, self.seed, self.iterations)?;
        for p in &self.properties {
            let status = if p.failed == 0 { "ok" } else { "FAIL" };
            write!(
                f,
                "  {status:4} {:<28} passed {:>6}  failed {:>4}  skipped {:>4}",
                p.property, p.passed, p.failed, p.skipped
            )?;
            if let Some(msg) = &p.first_failure {
                write!(f, "\n       first failure: {msg}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub fn run(suite: Suite, config: &CheckConfig) -> SuiteReport {
    let properties = match suite {
        Suite::Axioms => check_axioms(config),
        Suite::Derivatives => check_derivatives(config),
        Suite::Fundamental => check_fundamental(config),
        Suite::Normalform => check_normalform(config),
        Suite::Countermodel => check_countermodel(config),
    };
    SuiteReport { suite: suite.name(), seed: config.seed, iterations: config.iters, properties }
}

fn rng_for(config: &CheckConfig, suite: Suite) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(config.seed ^ (suite as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Language equality, or `None` past the cap.
fn same(e: &Term, f: &Term, cap: usize) -> Option<bool> {
    equiv_with_cap(e, f, cap).ok().map(|r| r.equivalent)
}

fn all_same(eqs: &[(Term, Term)], cap: usize) -> Option<bool> {
    for (l, r) in eqs {
        if !same(l, r, cap)? {
            return Some(false);
        }
    }
    Some(true)
}

fn guarded<R: Rng>(g: &TermGen, rng: &mut R) -> Term {
    Term::seq(Term::Atom(g.sl(rng)), g.term(rng))
}

/// A substitution for an implication; about three times in four `g` is
/// built so that the hypothesis holds.
fn implication_vars<R: Rng>(imp: Implication, g: &TermGen, rng: &mut R) -> Vars {
    let e = g.term(rng);
    let f = match imp {
        Implication::UniqueFixpoint => guarded(g, rng),
        _ => g.term(rng),
    };
    let h = g.term(rng);
    let gt = if rng.gen_ratio(1, 4) {
        g.term(rng)
    } else {
        match imp {
            Implication::LeastFixpointLeft => Term::seq(Term::star(f.clone()), Term::plus(e.clone(), h)),
            Implication::LeastFixpointRight => Term::seq(Term::plus(e.clone(), h), Term::star(f.clone())),
            Implication::UniqueFixpoint => Term::seq(Term::star(f.clone()), e.clone()),
        }
    };
    Vars { e, f, g: gt, alpha: Term::Atom(g.sl(rng)), beta: Term::Atom(g.sl(rng)) }
}

fn check_axioms(config: &CheckConfig) -> Vec<PropertyReport> {
    let mut rng = rng_for(config, Suite::Axioms);
    let size = config.max_size.min(6);
    let sf1 = TermGen::new(config.alphabet, size);
    let ska = sf1.clone().without_h();
    let mut reports = Vec::new();
    for schema in EQUATIONS {
        let mut p = PropertyReport::new(schema.name);
        for i in 0..config.iters {
            // Shared axioms alternate between H-free and unrestricted terms.
            let g = if schema.in_ska && (!schema.in_sf1 || i % 2 == 0) { &ska } else { &sf1 };
            let v = Vars {
                e: g.term(&mut rng),
                f: g.term(&mut rng),
                g: g.term(&mut rng),
                alpha: Term::Atom(g.sl(&mut rng)),
                beta: Term::Atom(g.sl(&mut rng)),
            };
            let (l, r) = schema.instantiate(&v);
            p.record_opt(same(&l, &r, config.cap), || format!("{l}  vs  {r}"));
        }
        reports.push(p);
    }
    for imp in Implication::ALL {
        let mut p = PropertyReport::new(imp.name());
        // Sample until `iters` instances meet the hypothesis, within a budget.
        for i in 0..4 * config.iters {
            if p.passed + p.failed >= config.iters {
                break;
            }
            let g = if imp.in_ska() && i % 2 == 0 { &ska } else { &sf1 };
            let v = implication_vars(imp, g, &mut rng);
            let verdict = match all_same(&imp.hypotheses(&v), config.cap) {
                Some(true) => {
                    let (l, r) = imp.conclusion(&v);
                    same(&l, &r, config.cap)
                }
                _ => None,
            };
            p.record_opt(verdict, || format!("e = {}, f = {}, g = {}", v.e, v.f, v.g));
        }
        reports.push(p);
    }
    reports
}

fn check_derivatives(config: &CheckConfig) -> Vec<PropertyReport> {
    let mut rng = rng_for(config, Suite::Derivatives);
    let gen = TermGen::new(config.alphabet, config.max_size);
    let universe = BoundedLang::universe(config.alphabet, config.bound);
    let mut soundness = PropertyReport::new("automaton-vs-semantics");
    let mut membership = PropertyReport::new("member-vs-semantics");
    let mut termination = PropertyReport::new("out-is-empty-word");
    let mut closure = PropertyReport::new("reach-closed-under-delta");
    for _ in 0..config.iters {
        let t = gen.term(&mut rng);
        let sem = sem_bounded(&t, config.bound);
        let aut = build_automaton(&t);
        let bad = universe.words().iter().find(|w| aut.accepts(w) != sem.contains(w));
        soundness.record(bad.is_none(), || format!("{t} on {}", bad.expect("failure")));
        let bad = universe.words().iter().find(|w| member(w, &t) != sem.contains(w));
        membership.record(bad.is_none(), || format!("{t} on {}", bad.expect("failure")));
        termination.record(out(&t) == sem.contains(&SyncWord::empty()), || t.to_string());
        let states = reach(&t);
        let ok = states
            .iter()
            .chain(std::iter::once(&t))
            .all(|s| config.alphabet.subsets().all(|a| delta(s, a).iter().all(|d| states.contains(d))));
        closure.record(ok, || t.to_string());
    }
    vec![soundness, membership, termination, closure]
}

fn check_fundamental(config: &CheckConfig) -> Vec<PropertyReport> {
    let mut rng = rng_for(config, Suite::Fundamental);
    let gen = TermGen::new(config.alphabet, config.max_size);
    let mut bounded = PropertyReport::new("unfold-bounded-equal");
    let mut decided = PropertyReport::new("unfold-decided-equal");
    for _ in 0..config.iters {
        let t = gen.term(&mut rng);
        let u = fundamental_unfold(&t).to_term();
        bounded
            .record(sem_bounded(&t, config.bound) == sem_bounded(&u, config.bound), || format!("{t}  unfolds to  {u}"));
        decided.record_opt(same(&t, &u, config.cap), || format!("{t}  unfolds to  {u}"));
    }
    vec![bounded, decided]
}

fn check_normalform(config: &CheckConfig) -> Vec<PropertyReport> {
    let mut rng = rng_for(config, Suite::Normalform);
    let gen = TermGen::new(config.alphabet, config.max_size.min(8));
    let mut nsf = PropertyReport::new("result-is-nsf");
    let mut equal = PropertyReport::new("result-equivalent");
    let mut normal = PropertyReport::new("system-in-normal-form");
    let mut identity = PropertyReport::new("states-solve-system");
    let mut solved = PropertyReport::new("solution-solves-system");
    for _ in 0..config.iters {
        let t = gen.term(&mut rng);
        let sys = build_system(&t);
        normal.record(sys.is_normal_form(), || t.to_string());
        identity.record_opt(sys.is_solution(sys.states()).ok(), || t.to_string());
        match solve(&sys) {
            Ok(sol) => solved.record_opt(sys.is_solution(&sol.assignment).ok(), || t.to_string()),
            Err(e) => solved.record(false, || format!("{t}: {e}")),
        }
        match to_normal_form(&t) {
            Ok(nf) => {
                nsf.record(is_nsf(&nf), || format!("{t}  gave  {nf}"));
                equal.record_opt(same(&t, &nf, config.cap), || format!("{t}  gave  {nf}"));
            }
            Err(e) => {
                nsf.record(false, || format!("{t}: {e}"));
                equal.record(false, || format!("{t}: {e}"));
            }
        }
    }
    vec![nsf, equal, normal, identity, solved]
}

/// Model values for the schema variables `e`, `f`, `g`; every other letter
/// is the generator.
fn model_value(
    e: &ModelElement,
    f: &ModelElement,
    g: &ModelElement,
) -> impl Fn(Letter) -> Result<ModelElement, CountermodelError> {
    let (e, f, g) = (e.clone(), f.clone(), g.clone());
    move |l: Letter| {
        Ok(match l.as_char() {
            'e' => e.clone(),
            'f' => f.clone(),
            'g' => g.clone(),
            _ => ModelElement::generator(),
        })
    }
}

fn schema_vars() -> Vars {
    Vars {
        e: Term::letter('e'),
        f: Term::letter('f'),
        g: Term::letter('g'),
        alpha: Term::letter('a'),
        beta: Term::letter('b'),
    }
}

fn model_holds(eqs: &[(Term, Term)], value: &dyn Fn(Letter) -> Result<ModelElement, CountermodelError>) -> bool {
    eqs.iter().all(|(l, r)| eval_cm_with(l, value).ok() == eval_cm_with(r, value).ok())
}

/// Number of elements sampled for the countermodel suite.
pub const MODEL_SAMPLE: usize = 64;

fn check_countermodel(config: &CheckConfig) -> Vec<PropertyReport> {
    let mut rng = rng_for(config, Suite::Countermodel);
    let mut pool = vec![ModelElement::zero(), ModelElement::one(), ModelElement::generator(), ModelElement::Dagger];
    while pool.len() < MODEL_SAMPLE {
        pool.push(model_element(&mut rng));
    }
    let pick = |rng: &mut ChaCha8Rng| pool[rng.gen_range(0..pool.len())].clone();
    let vars = schema_vars();
    let mut reports = Vec::new();

    for schema in EQUATIONS.iter().filter(|s| s.in_ska) {
        let mut p = PropertyReport::new(schema.name);
        let eq = schema.instantiate(&vars);
        for _ in 0..config.iters {
            let (e, f, g) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let value = model_value(&e, &f, &g);
            p.record(model_holds(std::slice::from_ref(&eq), &value), || format!("e = {e}, f = {f}, g = {g}"));
        }
        reports.push(p);
    }

    for imp in [Implication::LeastFixpointLeft, Implication::LeastFixpointRight] {
        let mut p = PropertyReport::new(imp.name());
        for _ in 0..config.iters {
            let (e, f, h) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let g = if rng.gen_ratio(1, 4) {
                h
            } else if imp == Implication::LeastFixpointLeft {
                cm_dot(&cm_star(&f), &cm_plus(&e, &h))
            } else {
                cm_dot(&cm_plus(&e, &h), &cm_star(&f))
            };
            let value = model_value(&e, &f, &g);
            let verdict = model_holds(&imp.hypotheses(&vars), &value)
                .then(|| model_holds(std::slice::from_ref(&imp.conclusion(&vars)), &value));
            p.record_opt(verdict, || format!("e = {e}, f = {f}, g = {g}"));
        }
        reports.push(p);
    }

    // The unique fixpoint rule fails: {{s}};dagger = dagger, yet {{s}}*;0 = 0.
    let mut unique = PropertyReport::new("unique-fixpoint-refuted");
    let (s, zero) = (ModelElement::generator(), ModelElement::zero());
    let fixpoint = cm_plus(&zero, &cm_dot(&s, &ModelElement::Dagger)) == ModelElement::Dagger;
    unique.record(fixpoint && cm_dot(&cm_star(&s), &zero) != ModelElement::Dagger, || "no refutation".into());
    reports.push(unique);

    let mut infinite = PropertyReport::new("infinite-sync-infinite");
    for _ in 0..config.iters {
        let (k, l) = (pick(&mut rng), pick(&mut rng));
        let (ModelElement::Lang(a), ModelElement::Lang(b)) = (&k, &l) else {
            infinite.skipped += 1;
            continue;
        };
        let product = crate::countermodel::cm_sync(&k, &l);
        let expected = if a.is_empty() || b.is_empty() {
            ModelElement::zero()
        } else if a.is_infinite() && b.is_infinite() {
            ModelElement::Dagger
        } else {
            ModelElement::Lang(a.pointwise_max(b))
        };
        infinite.record(product == expected, || format!("{k} & {l} = {product}"));
    }
    reports.push(infinite);

    // ×-free, H-free terms over one letter: the model and the language agree.
    let mut agree = PropertyReport::new("agrees-with-semantics");
    let unary = TermGen::new(SymSet::of("a"), config.max_size.min(8)).without_h().without_sync();
    for _ in 0..config.iters {
        let t = unary.term(&mut rng);
        let verdict = match eval_cm(&t, &standard_valuation(&t)) {
            Ok(ModelElement::Lang(l)) => {
                let mut lengths: Vec<usize> = sem_bounded(&t, config.bound).words().iter().map(SyncWord::len).collect();
                lengths.dedup();
                Some(l.members_below(config.bound + 1) == lengths)
            }
            _ => Some(false),
        };
        agree.record_opt(verdict, || t.to_string());
    }
    reports.push(agree);

    let mut witness = PropertyReport::new("incompleteness-witness");
    let (lhs, rhs) = (parse_term("a* & a*").expect("valid"), parse_term("a*").expect("valid"));
    let separated = eval_cm(&lhs, &standard_valuation(&lhs)) == Ok(ModelElement::Dagger)
        && eval_cm(&rhs, &standard_valuation(&rhs)) == Ok(ModelElement::Lang(UnaryLang::naturals()));
    let equal = same(&lhs, &rhs, config.cap) == Some(true);
    witness.record(separated && equal, || "a* & a* and a* not separated".into());
    reports.push(witness);

    reports
}
