//! Paraparsing: graph rewrites that make semantically equivalent sentences
//! share one graph.
//!
//! Stages run in a fixed order: entity compaction, particle and lemma
//! normalization, adnominal clause restoration, coordination equalization,
//! and passive normalization. Passive normalization may fork the parse, one
//! variant per candidate agent.

mod adnominal;
mod coordination;
mod lexical;
mod passive;
mod trace;

pub use adnominal::rewrite_adnominal;
pub use coordination::equalize_coordination;
pub use lexical::{merge_particles_and_lemmas, Lexicon};
pub use passive::normalize_passive;
pub use trace::{diff, replay, Edit, RewriteTrace, TraceEntry};

use serde::{Deserialize, Serialize};

use crate::entities::compact_entities;
use crate::error::Result;
use crate::parse::DependencyParse;

/// One paraparsed variant with the edits that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Paraparsed {
    pub parse: DependencyParse,
    pub trace: RewriteTrace,
}

type Stage<'a> = (&'a str, &'a dyn Fn(&DependencyParse) -> Result<DependencyParse>);

/// Runs every stage in order and returns the resulting variants.
pub fn paraparse(parse: &DependencyParse, lexicon: &Lexicon) -> Result<Vec<Paraparsed>> {
    let mut trace = RewriteTrace::default();
    let mut cur = parse.clone();
    let steps: [Stage; 4] = [
        ("compact_entities", &compact_entities),
        ("merge_particles_and_lemmas", &|p| Ok(merge_particles_and_lemmas(p, lexicon))),
        ("rewrite_adnominal", &|p| Ok(rewrite_adnominal(p))),
        ("equalize_coordination", &equalize_coordination),
    ];
    for (rule, stage) in steps {
        let next = stage(&cur)?;
        trace.record(rule, &cur, &next);
        cur = next;
    }
    Ok(normalize_passive(&cur)
        .into_iter()
        .map(|variant| {
            let mut trace = trace.clone();
            trace.record("normalize_passive", &cur, &variant);
            Paraparsed { parse: variant, trace }
        })
        .collect())
}
