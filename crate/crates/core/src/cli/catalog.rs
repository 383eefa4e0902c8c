//! Built-in knots.

use serde::Serialize;

use crate::foxcalc::IntLaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    /// Integer coefficients, low degree first.
    pub alexander: &'static [i64],
    /// Schubert normal form `(α, β)` of the two-bridge knot, when it has one.
    #[serde(skip)]
    pub schubert: Option<(u32, u32)>,
    pub two_bridge: bool,
}

impl CatalogEntry {
    pub fn alexander_poly(&self) -> IntLaurentPoly {
        IntLaurentPoly::from_coeffs(self.alexander)
    }

    /// Two-generator presentation text for two-bridge entries.
    pub fn presentation(&self) -> Option<String> {
        self.schubert.map(|(alpha, beta)| two_bridge_presentation(alpha, beta))
    }
}

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "trefoil",
        alexander: &[1, -1, 1],
        schubert: Some((3, 1)),
        two_bridge: true,
    },
    CatalogEntry {
        name: "figure8",
        alexander: &[-1, 3, -1],
        schubert: Some((5, 3)),
        two_bridge: true,
    },
    CatalogEntry {
        name: "6_2",
        alexander: &[1, -3, 3, -3, 1],
        schubert: Some((11, 3)),
        two_bridge: true,
    },
    CatalogEntry {
        name: "9_1",
        // (t² − t + 1)(t⁶ − t³ + 1)
        alexander: &[1, -1, 1, -1, 1, -1, 1, -1, 1],
        schubert: Some((9, 1)),
        two_bridge: true,
    },
];

pub fn lookup(name: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.name.eq_ignore_ascii_case(name))
}

/// `⟨x, y | x w = w y⟩` with `w = y^{ε₁} x^{ε₂} y^{ε₃} ⋯` of length `α − 1`
/// and `ε_i = (−1)^{⌊iβ/α⌋}`.
pub fn two_bridge_presentation(alpha: u32, beta: u32) -> String {
    let w: Vec<String> = (1..alpha)
        .map(|i| {
            let g = if i % 2 == 1 { "y" } else { "x" };
            if (i * beta / alpha).is_multiple_of(2) {
                g.to_string()
            } else {
                format!("{g}^-1")
            }
        })
        .collect();
    let w_inv: Vec<String> = w
        .iter()
        .rev()
        .map(|l| match l.strip_suffix("^-1") {
            Some(g) => g.to_string(),
            None => format!("{l}^-1"),
        })
        .collect();
    format!(
        "# two-bridge knot b({alpha},{beta})\ngens x y\nkappa x=1 y=1\ndist x\nrel x {} y^-1 {}\n",
        w.join(" "),
        w_inv.join(" ")
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foxcalc::{alexander_matrix, check_unit_at_one, parse_presentation};

    #[test]
    fn trefoil_presentation_text() {
        let text = two_bridge_presentation(3, 1);
        let pres = parse_presentation(&text).unwrap();
        let expected = parse_presentation("gens x y; kappa x=1 y=1; dist x; rel x y x y^-1 x^-1 y^-1").unwrap();
        assert_eq!(pres.relators, expected.relators);
    }

    #[test]
    fn presentations_reproduce_catalog_polynomials() {
        for entry in CATALOG {
            assert_eq!(entry.alexander_poly().eval_at_one().abs(), 1, "{}", entry.name);
            let pres = parse_presentation(&entry.presentation().unwrap()).unwrap();
            let m = alexander_matrix(&pres).unwrap();
            check_unit_at_one(&m).unwrap();
            assert_eq!(
                m[0][0].normalized(),
                entry.alexander_poly().normalized(),
                "{}",
                entry.name
            );
        }
    }

    #[test]
    fn lookup_is_case_insensitive() {
        assert_eq!(lookup("Trefoil").unwrap().name, "trefoil");
        assert!(lookup("unknot").is_none());
    }
}
