//! The exact relation suite: every displayed linear identity among the
//! universal constants, checked in rational-π arithmetic with zero
//! tolerance.
//!
//! The identities come from the derivations that determine the constants —
//! adjoint symmetry of the heat flow, doubling onto one-sided
//! Dirichlet/Robin problems, vanishing on harmonic units, shifting the
//! endomorphism by a scalar, separation of variables on flat cylinders,
//! divergence (integration-by-parts) insensitivity, and warped-product
//! reductions. Together they pin every nonzero constant, which is what
//! makes the mutation criterion meaningful: perturb any one constant and at
//! least one relation here breaks.

use super::constants::{Constants, UniversalConstant};
use num_rational::Ratio;

/// One linear identity `Σ coeffᵢ·cᵢ = rhs` over the constant tables.
#[derive(Clone, Debug)]
pub struct Relation {
    pub name: String,
    pub terms: Vec<(UniversalConstant, &'static str)>,
    pub rhs: UniversalConstant,
}

impl Relation {
    /// Exact left-hand side under the given table.
    pub fn lhs(&self, c: &Constants) -> UniversalConstant {
        self.terms
            .iter()
            .fold(UniversalConstant::ZERO, |acc, (coeff, name)| {
                acc.add(coeff.mul(c.get(name)))
            })
    }

    pub fn holds(&self, c: &Constants) -> bool {
        self.lhs(c) == self.rhs
    }
}

/// A relation that failed, with both exact sides for the report.
#[derive(Clone, Debug)]
pub struct RelationViolation {
    pub name: String,
    pub lhs: UniversalConstant,
    pub rhs: UniversalConstant,
}

/// Outcome of running the full suite.
#[derive(Clone, Debug)]
pub struct RelationReport {
    pub total: usize,
    pub violations: Vec<RelationViolation>,
}

impl RelationReport {
    pub fn all_hold(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Evaluate every relation against `c`; failures become report entries.
pub fn verify_constant_relations(c: &Constants) -> RelationReport {
    let rels = all_relations();
    let total = rels.len();
    let violations = rels
        .into_iter()
        .filter(|r| !r.holds(c))
        .map(|r| RelationViolation {
            name: r.name.clone(),
            lhs: r.lhs(c),
            rhs: r.rhs,
        })
        .collect();
    RelationReport { total, violations }
}

fn rat(p: i64, q: i64) -> UniversalConstant {
    UniversalConstant::rational(p, q)
}

/// Relation with small-rational coefficients `(num, den)` per constant.
fn rel(name: &str, terms: &[(i64, i64, &'static str)], rhs: UniversalConstant) -> Relation {
    Relation {
        name: name.to_string(),
        terms: terms
            .iter()
            .map(|&(p, q, n)| (rat(p, q), n))
            .collect(),
        rhs,
    }
}

/// The full displayed suite.
pub fn all_relations() -> Vec<Relation> {
    let mut v = Vec::new();
    let z = UniversalConstant::ZERO;

    // — adjoint symmetry of β₂ (interface) —
    v.push(rel("adjoint: a5 = a6", &[(1, 1, "a5"), (-1, 1, "a6")], z));
    v.push(rel(
        "adjoint: a7 - a9 = 1",
        &[(1, 1, "a7"), (-1, 1, "a9")],
        rat(1, 1),
    ));
    v.push(rel("adjoint: a8 = a10", &[(1, 1, "a8"), (-1, 1, "a10")], z));

    // — doubling onto Dirichlet ⊕ Robin: β₁/β₂ block —
    v.push(rel("doubling: 2a1+2a2 = 0", &[(2, 1, "a1"), (2, 1, "a2")], z));
    v.push(Relation {
        name: "doubling: 2a1-2a2 = -4/√π".into(),
        terms: vec![(rat(2, 1), "a1"), (rat(-2, 1), "a2")],
        rhs: UniversalConstant::over_sqrt_pi(-4, 1),
    });
    v.push(rel(
        "doubling: 2a3+2a4+2a5+2a6 = 0",
        &[(2, 1, "a3"), (2, 1, "a4"), (2, 1, "a5"), (2, 1, "a6")],
        z,
    ));
    v.push(rel(
        "doubling: 2a3+2a4-2a5-2a6 = 1",
        &[(2, 1, "a3"), (2, 1, "a4"), (-2, 1, "a5"), (-2, 1, "a6")],
        rat(1, 1),
    ));
    v.push(rel(
        "doubling: 2a7+2a8 = 2",
        &[(2, 1, "a7"), (2, 1, "a8")],
        rat(2, 1),
    ));
    v.push(rel("doubling: 2a7-2a8 = 0", &[(2, 1, "a7"), (-2, 1, "a8")], z));
    v.push(rel("doubling: 2a9+2a10 = 0", &[(2, 1, "a9"), (2, 1, "a10")], z));
    v.push(rel(
        "doubling: 2a9-2a10 = -2",
        &[(2, 1, "a9"), (-2, 1, "a10")],
        rat(-2, 1),
    ));
    v.push(rel(
        "doubling: -4a11-4a12 = 2",
        &[(-4, 1, "a11"), (-4, 1, "a12")],
        rat(2, 1),
    ));
    v.push(rel(
        "doubling: 2a11-2a12 = 0",
        &[(2, 1, "a11"), (-2, 1, "a12")],
        z,
    ));

    // — harmonic unit (φ≡1, U=0, arbitrary ρ): β₁/β₂ block —
    v.push(rel("harmonic-unit: a1+a2 = 0", &[(1, 1, "a1"), (1, 1, "a2")], z));
    v.push(rel("harmonic-unit: a3+a6 = 0", &[(1, 1, "a3"), (1, 1, "a6")], z));
    v.push(rel("harmonic-unit: a4+a5 = 0", &[(1, 1, "a4"), (1, 1, "a5")], z));
    v.push(rel(
        "harmonic-unit: a9+a10 = 0",
        &[(1, 1, "a9"), (1, 1, "a10")],
        z,
    ));

    // — warped reduction at β₂ level —
    v.push(rel(
        "warped-b2: -2a3 = a7+a9+a11",
        &[(2, 1, "a3"), (1, 1, "a7"), (1, 1, "a9"), (1, 1, "a11")],
        z,
    ));
    v.push(rel("warped-b2: -2a4 = a11", &[(2, 1, "a4"), (1, 1, "a11")], z));
    v.push(rel(
        "warped-b2: -2a5 = a8+a12",
        &[(2, 1, "a5"), (1, 1, "a8"), (1, 1, "a12")],
        z,
    ));
    v.push(rel(
        "warped-b2: -2a6 = a10+a12",
        &[(2, 1, "a6"), (1, 1, "a10"), (1, 1, "a12")],
        z,
    ));

    // — doubling: β₃ block (sum/difference per basis slot) —
    let doubling_b3: [(&str, &[(i64, i64, &'static str)], i64); 24] = [
        ("2a20+2a21 = 0", &[(2, 1, "a20"), (2, 1, "a21")], 0),
        ("2a20-2a21 = 16", &[(2, 1, "a20"), (-2, 1, "a21")], 16),
        ("2a24+2a25 = 16", &[(2, 1, "a24"), (2, 1, "a25")], 16),
        ("2a24-2a25 = 0", &[(2, 1, "a24"), (-2, 1, "a25")], 0),
        ("2a26+2a27 = 0", &[(2, 1, "a26"), (2, 1, "a27")], 0),
        ("2a26-2a27 = -8", &[(2, 1, "a26"), (-2, 1, "a27")], -8),
        ("-4a28-4a29 = 16", &[(-4, 1, "a28"), (-4, 1, "a29")], 16),
        ("2a28-2a29 = 0", &[(2, 1, "a28"), (-2, 1, "a29")], 0),
        (
            "a30+a31+a32+a33 = 0",
            &[(1, 1, "a30"), (1, 1, "a31"), (1, 1, "a32"), (1, 1, "a33")],
            0,
        ),
        (
            "2a30+2a31-2a32-2a33 = 0",
            &[(2, 1, "a30"), (2, 1, "a31"), (-2, 1, "a32"), (-2, 1, "a33")],
            0,
        ),
        (
            "a36+a37+a38+a39+2a40 = 0",
            &[
                (1, 1, "a36"),
                (1, 1, "a37"),
                (1, 1, "a38"),
                (1, 1, "a39"),
                (2, 1, "a40"),
            ],
            0,
        ),
        (
            "a36+a37+a38-a39-2a40 = -1",
            &[
                (1, 1, "a36"),
                (1, 1, "a37"),
                (1, 1, "a38"),
                (-1, 1, "a39"),
                (-2, 1, "a40"),
            ],
            -1,
        ),
        (
            "a41+a42+a43+a44+2a45 = 0",
            &[
                (1, 1, "a41"),
                (1, 1, "a42"),
                (1, 1, "a43"),
                (1, 1, "a44"),
                (2, 1, "a45"),
            ],
            0,
        ),
        (
            "a41+a42+a43-a44-2a45 = 2",
            &[
                (1, 1, "a41"),
                (1, 1, "a42"),
                (1, 1, "a43"),
                (-1, 1, "a44"),
                (-2, 1, "a45"),
            ],
            2,
        ),
        (
            "2a46+2a47+4a48 = 0",
            &[(2, 1, "a46"), (2, 1, "a47"), (4, 1, "a48")],
            0,
        ),
        (
            "2a46+2a47-4a48 = 0",
            &[(2, 1, "a46"), (2, 1, "a47"), (-4, 1, "a48")],
            0,
        ),
        ("8a49+8a50 = 16", &[(8, 1, "a49"), (8, 1, "a50")], 16),
        ("2a49-2a50 = 0", &[(2, 1, "a49"), (-2, 1, "a50")], 0),
        (
            "2a51+2a52+4a53 = 0",
            &[(2, 1, "a51"), (2, 1, "a52"), (4, 1, "a53")],
            0,
        ),
        (
            "2a51+2a52-4a53 = 8",
            &[(2, 1, "a51"), (2, 1, "a52"), (-4, 1, "a53")],
            8,
        ),
        (
            "2a54+2a55+4a56 = 0",
            &[(2, 1, "a54"), (2, 1, "a55"), (4, 1, "a56")],
            0,
        ),
        (
            "2a54+2a55-4a56 = 0",
            &[(2, 1, "a54"), (2, 1, "a55"), (-4, 1, "a56")],
            0,
        ),
        (
            "2a57+2a58+4a59 = 0",
            &[(2, 1, "a57"), (2, 1, "a58"), (4, 1, "a59")],
            0,
        ),
        (
            "2a57+2a58-4a59 = 4",
            &[(2, 1, "a57"), (2, 1, "a58"), (-4, 1, "a59")],
            4,
        ),
    ];
    for (name, terms, rhs) in doubling_b3 {
        v.push(rel(&format!("doubling-b3: {name}"), terms, rat(rhs, 1)));
    }

    // — harmonic unit: β₃ block —
    let hu: [(&'static str, &'static str); 14] = [
        ("a30", "a32"),
        ("a31", "a33"),
        ("a36", "a40"),
        ("a38", "a40"),
        ("a37", "a39"),
        ("a41", "a45"),
        ("a43", "a45"),
        ("a42", "a44"),
        ("a51", "a53"),
        ("a52", "a53"),
        ("a54", "a56"),
        ("a55", "a56"),
        ("a57", "a59"),
        ("a58", "a59"),
    ];
    for (x, y) in hu {
        v.push(rel(
            &format!("harmonic-unit-b3: {x}+{y} = 0"),
            &[(1, 1, x), (1, 1, y)],
            z,
        ));
    }

    // — endomorphism shift E → E+ε: dβ₃/dε coefficients reproduce β₁ —
    let sixth = UniversalConstant::over_sqrt_pi(1, 6);
    v.push(Relation {
        name: "eps-shift: (1/6√π)(-2a20+a51+a52) = a1".into(),
        terms: vec![
            (sixth.mul_ratio(Ratio::new(-2, 1)), "a20"),
            (sixth, "a51"),
            (sixth, "a52"),
            (rat(-1, 1), "a1"),
        ],
        rhs: z,
    });
    v.push(Relation {
        name: "eps-shift: (1/6√π)(-2a21+2a53) = a2".into(),
        terms: vec![
            (sixth.mul_ratio(Ratio::new(-2, 1)), "a21"),
            (sixth.mul_ratio(Ratio::new(2, 1)), "a53"),
            (rat(-1, 1), "a2"),
        ],
        rhs: z,
    });

    // — separation of variables on flat cylinders —
    v.push(rel(
        "separation: 2a22-a26+a34-a51 = 0",
        &[(2, 1, "a22"), (-1, 1, "a26"), (1, 1, "a34"), (-1, 1, "a51")],
        z,
    ));
    v.push(rel(
        "separation: a34-a52 = 0",
        &[(1, 1, "a34"), (-1, 1, "a52")],
        z,
    ));
    v.push(rel(
        "separation: -2a22-2a34 = 0",
        &[(-2, 1, "a22"), (-2, 1, "a34")],
        z,
    ));
    v.push(rel(
        "separation: a23+a35-a53 = 0",
        &[(1, 1, "a23"), (1, 1, "a35"), (-1, 1, "a53")],
        z,
    ));
    v.push(rel(
        "separation: -2a23-a27-2a35 = 0",
        &[(-2, 1, "a23"), (-1, 1, "a27"), (-2, 1, "a35")],
        z,
    ));

    // — divergence terms (integration by parts along Σ) —
    v.push(rel(
        "divergence: -a22-a23+a26+a51+a53 = 0",
        &[
            (-1, 1, "a22"),
            (-1, 1, "a23"),
            (1, 1, "a26"),
            (1, 1, "a51"),
            (1, 1, "a53"),
        ],
        z,
    ));
    v.push(rel(
        "divergence: a22+a23+a27+a52+a53 = 0",
        &[
            (1, 1, "a22"),
            (1, 1, "a23"),
            (1, 1, "a27"),
            (1, 1, "a52"),
            (1, 1, "a53"),
        ],
        z,
    ));

    // — warped reduction at β₃ level, by monomial —
    let warped: [(&str, &[(i64, i64, &'static str)]); 17] = [
        ("-a57 = -a51/2", &[(-1, 1, "a57"), (1, 2, "a51")]),
        ("-a58 = -a52/2", &[(-1, 1, "a58"), (1, 2, "a52")]),
        ("-a59 = -a53/2", &[(-1, 1, "a59"), (1, 2, "a53")]),
        (
            "a36+a41-a57 = a24/4+a28/2+a49/4-a51/4",
            &[
                (1, 1, "a36"),
                (1, 1, "a41"),
                (-1, 1, "a57"),
                (-1, 4, "a24"),
                (-1, 2, "a28"),
                (-1, 4, "a49"),
                (1, 4, "a51"),
            ],
        ),
        (
            "a38+a43-a58 = a49/4-a52/4",
            &[
                (1, 1, "a38"),
                (1, 1, "a43"),
                (-1, 1, "a58"),
                (-1, 4, "a49"),
                (1, 4, "a52"),
            ],
        ),
        (
            "a37+a42 = a28/2+a49/2",
            &[(1, 1, "a37"), (1, 1, "a42"), (-1, 2, "a28"), (-1, 2, "a49")],
        ),
        (
            "2a36 = a24/2+a28+a49/2-a51/2",
            &[
                (2, 1, "a36"),
                (-1, 2, "a24"),
                (-1, 1, "a28"),
                (-1, 2, "a49"),
                (1, 2, "a51"),
            ],
        ),
        (
            "2a38 = a49/2-a52/2",
            &[(2, 1, "a38"), (-1, 2, "a49"), (1, 2, "a52")],
        ),
        (
            "a37 = a28/2+a49/2",
            &[(1, 1, "a37"), (-1, 2, "a28"), (-1, 2, "a49")],
        ),
        (
            "a40+a45-a59 = a29/4+a50/4-a53/4",
            &[
                (1, 1, "a40"),
                (1, 1, "a45"),
                (-1, 1, "a59"),
                (-1, 4, "a29"),
                (-1, 4, "a50"),
                (1, 4, "a53"),
            ],
        ),
        (
            "a39+a44 = a25/4+a29/2+a50/2",
            &[
                (1, 1, "a39"),
                (1, 1, "a44"),
                (-1, 4, "a25"),
                (-1, 2, "a29"),
                (-1, 2, "a50"),
            ],
        ),
        (
            "2a40 = a29/2+a50/2-a53/2",
            &[(2, 1, "a40"), (-1, 2, "a29"), (-1, 2, "a50"), (1, 2, "a53")],
        ),
        (
            "a39 = a25/4+a29/2+a50/2",
            &[(1, 1, "a39"), (-1, 4, "a25"), (-1, 2, "a29"), (-1, 2, "a50")],
        ),
        (
            "-a46 = a28+a49",
            &[(-1, 1, "a46"), (-1, 1, "a28"), (-1, 1, "a49")],
        ),
        ("-a47 = a49", &[(-1, 1, "a47"), (-1, 1, "a49")]),
        (
            "-a48 = a29/2+a50",
            &[(-1, 1, "a48"), (-1, 2, "a29"), (-1, 1, "a50")],
        ),
        ("-a31 = a28/2", &[(-1, 1, "a31"), (-1, 2, "a28")]),
        // final pair uses ρ = ρ(r)
    ];
    for (name, terms) in warped {
        v.push(rel(&format!("warped-b3: {name}"), terms, z));
    }
    v.push(rel(
        "warped-b3: -a33 = a25/2+a29/2",
        &[(-1, 1, "a33"), (-1, 2, "a25"), (-1, 2, "a29")],
        z,
    ));

    // — transmission: value pins and derived identities —
    for (n, val) in [("b1", 0), ("b2", 0), ("b3", 0), ("b4", 1), ("b5", 0), ("b6", 1)] {
        v.push(rel(
            &format!("transmission: {n} = {val}"),
            &[(1, 1, n)],
            rat(val, 1),
        ));
    }
    v.push(rel(
        "transmission: b6-b7 = 0",
        &[(1, 1, "b6"), (-1, 1, "b7")],
        z,
    ));
    v.push(rel(
        "transmission: b10-b12 = 0",
        &[(1, 1, "b10"), (-1, 1, "b12")],
        z,
    ));
    for n in ["b11", "b14", "b15", "b16"] {
        v.push(rel(&format!("transmission: {n} = 0"), &[(1, 1, n)], z));
    }
    v.push(rel(
        "transmission: b10 = b13",
        &[(1, 1, "b10"), (-1, 1, "b13")],
        z,
    ));
    v.push(rel(
        "transmission: b12 = b13",
        &[(1, 1, "b12"), (-1, 1, "b13")],
        z,
    ));
    v.push(rel("transmission: b10 = 0", &[(1, 1, "b10")], z));

    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_table_satisfies_every_relation() {
        let report = verify_constant_relations(&Constants::published());
        for viol in &report.violations {
            println!("violated: {} ({} vs {})", viol.name, viol.lhs, viol.rhs);
        }
        assert!(report.all_hold());
        assert_eq!(report.total, 101);
    }

    #[test]
    fn every_nonzero_constant_is_pinned_by_some_relation() {
        // the backbone of the mutation criterion: a 5% change to any single
        // nonzero constant must break at least one exact relation
        let c = Constants::published();
        for name in c.nonzero_names() {
            let report = verify_constant_relations(&c.perturbed(name));
            assert!(
                !report.all_hold(),
                "perturbing {name} should violate at least one relation"
            );
        }
    }

    #[test]
    fn violation_reports_carry_both_sides() {
        let c = Constants::published().perturbed("a7");
        let report = verify_constant_relations(&c);
        assert!(report.violations.iter().any(|v| v.name.contains("a7")));
    }
}
