//! Passive to active voice.

use crate::parse::DependencyParse;

const AGENT_LABELS: [&str; 2] = ["obl:by", "obl:agent"];

/// By-phrases of `verb`: `obl:by`/`obl:agent` edges, or `obl` edges whose
/// target has a `case` child `by`. Returns (target, label, case token).
fn agents(p: &DependencyParse, verb: u32) -> Vec<(u32, String, Option<u32>)> {
    let v = p.token(verb).unwrap();
    v.out_edges
        .iter()
        .filter_map(|e| {
            if AGENT_LABELS.contains(&e.label.as_str()) {
                return Some((e.target, e.label.clone(), None));
            }
            if e.label == "obl" {
                let by = p
                    .token(e.target)?
                    .out_targets("case")
                    .find(|&c| p.token(c).is_some_and(|c| c.lemma.eq_ignore_ascii_case("by")))?;
                return Some((e.target, e.label.clone(), Some(by)));
            }
            None
        })
        .collect()
}

fn is_passive(p: &DependencyParse, verb: u32) -> bool {
    let v = p.token(verb).unwrap();
    v.has_out("aux:pass") || v.has_out("nsubj:pass")
}

/// Active form of each passive clause. A clause is passive when its verb
/// has an `aux:pass` or `nsubj:pass` dependent. The passive subject becomes
/// `obj`, passive auxiliaries are removed, and one by-phrase becomes
/// `nsubj` (its `by` is removed). With several by-phrases one variant is
/// produced per choice; with none the clause is left without a subject.
/// Several passive clauses multiply out, in token order.
pub fn normalize_passive(parse: &DependencyParse) -> Vec<DependencyParse> {
    let verbs: Vec<u32> = parse.ids().filter(|&v| is_passive(parse, v)).collect();
    let mut variants = vec![parse.clone()];
    for verb in verbs {
        let mut next = Vec::new();
        for base in &variants {
            let mut agent_choices: Vec<Option<(u32, String, Option<u32>)>> =
                agents(base, verb).into_iter().map(Some).collect();
            if agent_choices.is_empty() {
                agent_choices.push(None);
            }
            for choice in agent_choices {
                let mut p = base.clone();
                let v = p.token(verb).unwrap();
                let subjects: Vec<u32> = v.out_targets("nsubj:pass").collect();
                let auxes: Vec<u32> = v.out_targets("aux:pass").collect();
                for s in subjects {
                    p.relabel(verb, s, "nsubj:pass", "obj");
                }
                if let Some((agent, label, case)) = choice {
                    p.relabel(verb, agent, &label, "nsubj");
                    if let Some(c) = case {
                        p.reattach_dependents(c, agent);
                        p.remove_token(c);
                    }
                }
                for a in auxes {
                    p.reattach_dependents(a, verb);
                    p.remove_token(a);
                }
                next.push(p);
            }
        }
        variants = next;
    }
    variants
}
