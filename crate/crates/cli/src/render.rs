//! Human-readable rendering. Spans are labelled S, Q, P, ... in the order a
//! witness lists them, with legs written s_L/s_R, q_L/q_R and so on.

use std::fmt::Write;

use spanforge::{CheckReport, PairRecord, Witness};

const LETTERS: [char; 6] = ['S', 'Q', 'P', 'T', 'U', 'V'];
const SHOWN_WITNESSES: usize = 8;

pub fn span(letter: char, r: &PairRecord) -> String {
    let l = letter.to_ascii_lowercase();
    format!(
        "{letter}: {l}_L = {}, {l}_R = {}   ({} <- {} -> {})",
        r.left, r.right, r.left_foot, r.apex, r.right_foot
    )
}

pub fn cospan(r: &PairRecord) -> String {
    format!(
        "C: c_L = {}, c_R = {}   ({} -> {} <- {})",
        r.left, r.right, r.left_foot, r.apex, r.right_foot
    )
}

fn witness(out: &mut String, w: &Witness, indent: &str) {
    let _ = writeln!(out, "{indent}{}", w.detail);
    if let Some(c) = &w.cospan {
        let _ = writeln!(out, "{indent}  {}", cospan(c));
    }
    for (i, s) in w.spans.iter().enumerate() {
        let letter = LETTERS.get(i).copied().unwrap_or('X');
        let _ = writeln!(out, "{indent}  {}", span(letter, s));
    }
    if let Some(n) = w.morphism_count {
        let _ = writeln!(out, "{indent}  count: {n}");
    }
}

pub fn report(r: &CheckReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}: {}", r.check, r.subject, r.verdict);
    if r.budget_hit {
        let _ = writeln!(out, "budget exceeded");
    }
    if let Some(ce) = &r.counterexample {
        let _ = writeln!(out, "counterexample:");
        witness(&mut out, ce, "  ");
    }
    if !r.witnesses.is_empty() {
        let _ = writeln!(out, "witnesses ({}):", r.witnesses.len());
        for w in r.witnesses.iter().take(SHOWN_WITNESSES) {
            witness(&mut out, w, "  ");
        }
        if r.witnesses.len() > SHOWN_WITNESSES {
            let _ = writeln!(out, "  ... {} more (see --json)", r.witnesses.len() - SHOWN_WITNESSES);
        }
    }
    if !r.stats.is_empty() {
        let _ = writeln!(out, "stats:");
        for (k, v) in &r.stats {
            let _ = writeln!(out, "  {k}: {v}");
        }
    }
    out
}
