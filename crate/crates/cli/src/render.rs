//! Human-readable tables.

use std::fmt::Write;

use kummer_quartic::conditions::{ConditionReport, GeneratorCheck};
use kummer_quartic::cyclotomic::{KummerSplitting, SplittingReport, SymbolValue};
use kummer_quartic::diophantine::{SolutionRecord, TraceReport};

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn row(out: &mut String, label: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "  {label:<34} {value}");
}

fn generator_detail(g: &GeneratorCheck) -> String {
    match (&g.order, &g.group_order) {
        (Some(o), Some(n)) => format!("{} (order {o} of {n})", yes_no(g.holds)),
        _ => format!("{} (undefined)", yes_no(g.holds)),
    }
}

pub fn conditions(rep: &ConditionReport) -> String {
    let t = rep.triple;
    let mut out = format!("conditions for p = {}, q = {}, r = {}\n", t.p, t.q, t.r);
    row(&mut out, "p, q, r are primes:", yes_no(rep.primes));
    row(&mut out, "p ≠ q ≠ r ≠ p:", yes_no(rep.distinct));
    row(&mut out, "q ≠ 2:", yes_no(rep.q_not_two));
    row(&mut out, "p ≡ 3 (mod 4):", format!("{} ({} ≡ {})", yes_no(rep.p_mod4.holds), t.p, rep.p_mod4.residue));
    row(
        &mut out,
        "p ≡ 1 (mod r):",
        format!("{} ({} ≡ {} mod {})", yes_no(rep.p_mod_r.holds), t.p, rep.p_mod_r.residue, t.r),
    );
    row(&mut out, "r ≡ ±3 (mod 8):", format!("{} ({} ≡ {})", yes_no(rep.r_mod8.holds), t.r, rep.r_mod8.residue));
    row(
        &mut out,
        &format!("p generates U(Z_{{{}^{}}}):", t.q, t.r.saturating_sub(1)),
        generator_detail(&rep.p_generates),
    );
    row(&mut out, &format!("q generates Z_{}^*:", t.r), generator_detail(&rep.q_generates));
    row(&mut out, "2 is an r-power residue mod q:", yes_no(rep.two_residue));
    if let Some(b) = rep.two_residue_in_residue_field {
        row(&mut out, "  (in the residue field of Z[ζ_r]:", format!("{})", yes_no(b)));
    }
    row(&mut out, "all conditions satisfied:", yes_no(rep.all_satisfied));
    out
}

pub fn scan(reports: &[ConditionReport]) -> String {
    let mut out = format!("{} satisfying triple(s)\n", reports.len());
    let _ = writeln!(out, "  {:>10} {:>10} {:>10}", "p", "q", "r");
    for rep in reports {
        let t = rep.triple;
        let _ = writeln!(out, "  {:>10} {:>10} {:>10}", t.p, t.q, t.r);
    }
    out
}

pub fn solution(rec: &SolutionRecord) -> String {
    let mut out = format!("(x, y) = ({}, {})\n", rec.x, rec.y);
    row(&mut out, "is a solution:", yes_no(rec.is_solution));
    row(&mut out, "residual x^4 - q^4 - p*y^r:", &rec.residual);
    row(&mut out, "gcd(x, y) = 1:", yes_no(rec.coprime));
    row(&mut out, "xy ≠ 0:", yes_no(rec.xy_nonzero));
    row(&mut out, "p divides y:", rec.p_divides_y.map_or("n/a", yes_no));
    out
}

pub fn solutions(recs: &[SolutionRecord]) -> String {
    let mut out = format!("{} solution(s)\n", recs.len());
    let _ = writeln!(out, "  {:>14} {:>14} {:>8} {:>10} {:>8}", "x", "y", "coprime", "xy≠0", "p | y");
    for r in recs {
        let _ = writeln!(
            out,
            "  {:>14} {:>14} {:>8} {:>10} {:>8}",
            r.x.to_string(),
            r.y.to_string(),
            yes_no(r.coprime),
            yes_no(r.xy_nonzero),
            r.p_divides_y.map_or("n/a", yes_no)
        );
    }
    out
}

pub fn trace(t: &TraceReport) -> String {
    let mut out = format!("trace of (x, y) = ({}, {}) on {}\n", t.x, t.y, t.instance);
    row(&mut out, "parity case:", format!("{:?}", t.parity_case));
    row(&mut out, "d = gcd(x^2 - q^2, x^2 + q^2):", &t.d);
    row(&mut out, "branch:", format!("{:?}", t.branch));
    row(&mut out, "y1, y2:", format!("{}, {}", t.y1, t.y2));
    row(&mut out, "recombination holds:", yes_no(t.recombination_holds));
    row(&mut out, "key identity holds:", yes_no(t.key_identity_holds));
    let h = &t.lemma_hypotheses;
    row(&mut out, "lemma variant:", format!("{:?}", h.variant));
    row(&mut out, "  gcd(y1, y2) = 1:", yes_no(h.gcd_y1_y2_is_1));
    row(&mut out, "  p | y2:", yes_no(h.p_divides_y2));
    row(&mut out, "  r | y2 - y1:", yes_no(h.r_divides_y2_minus_y1));
    row(&mut out, "  r | y2 - 2^(r-2) p y1:", yes_no(h.r_divides_y2_minus_2r2p_y1));
    row(&mut out, "  hypotheses hold:", yes_no(h.lemma_applies));
    row(&mut out, "note:", &t.contradiction_note.message);
    out
}

pub fn split(s: &SplittingReport) -> String {
    let mut out = format!("{} in Z[ζ_{}]\n", s.rational_prime, s.conductor);
    row(&mut out, "ramification index e:", s.e);
    row(&mut out, "residual degree f:", s.f);
    row(&mut out, "number of primes g:", s.g);
    row(&mut out, "norm N(P) = p^f:", &s.norm);
    out
}

pub fn symbol(v: &SymbolValue, k: KummerSplitting) -> String {
    let mut out = String::new();
    row(&mut out, "symbol:", format!("{:?}", v.tag));
    row(&mut out, "witness:", v.witness.map_or_else(|| "n/a".to_string(), |w| w.to_string()));
    row(&mut out, "splitting in the Kummer ring:", format!("{k:?}"));
    out
}

pub fn scalar(label: &str, value: impl std::fmt::Display) -> String {
    format!("{label}: {value}\n")
}
