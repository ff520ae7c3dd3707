use crate::error::{Error, Result};
use crate::module::ModuleSpec;
use crate::ring::divisors;

use super::{check_one, CheckResult, Corpus, Instance, Verdict};

/// Smaller module specs, smallest order first.
fn shrinks(spec: &ModuleSpec) -> Vec<ModuleSpec> {
    let mut out = Vec::new();
    for i in 0..spec.orders.len() {
        let mut orders = spec.orders.clone();
        orders.remove(i);
        out.push(ModuleSpec::new(spec.ring, orders));
    }
    for i in 0..spec.orders.len() {
        for d in divisors(spec.orders[i]) {
            if d > 1 && d < spec.orders[i] {
                let mut orders = spec.orders.clone();
                orders[i] = d;
                out.push(ModuleSpec::new(spec.ring, orders));
            }
        }
    }
    for n in divisors(spec.ring) {
        if n > 1 && n < spec.ring && spec.orders.iter().all(|d| n % d == 0) {
            out.push(ModuleSpec::new(n, spec.orders.clone()));
        }
    }
    let size = |s: &ModuleSpec| (s.orders.iter().product::<u64>(), s.ring, s.orders.clone());
    out.sort_by_key(size);
    out.dedup();
    out
}

/// Greedily shrinks a failing module instance while the same statement keeps failing.
///
/// Hom instances are returned unchanged.
pub fn minimize(corpus: &Corpus, failing: &CheckResult) -> Result<CheckResult> {
    if failing.verdict != Verdict::Fail {
        return Err(Error::NothingToMinimize);
    }
    let mut best = failing.clone();
    if best.instance.hom.is_some() {
        return Ok(best);
    }
    'outer: loop {
        for spec in shrinks(&best.instance.module) {
            let inst = Instance {
                module: spec,
                ..best.instance.clone()
            };
            if let Ok(r) = check_one(corpus, &best.statement_id, &inst) {
                if r.verdict == Verdict::Fail {
                    best = r;
                    continue 'outer;
                }
            }
        }
        return Ok(best);
    }
}
