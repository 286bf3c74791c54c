use serde::Serialize;

use super::config::ModelKind;
use crate::embedding::{point_factorization, root_shear_decomposition};
use crate::hyperbolic::shear_decomposition;
use crate::numeric::{parse_rational, Rational, SquareMatrix, TolerancePolicy};
use crate::reflection::{word_act, RealLine, ReflectionWord, SpaceModel, SpdModel};

/// Parses `"a,b;c,d"` (rows separated by `;`) into an exact square matrix.
pub fn parse_matrix(text: &str) -> Result<SquareMatrix<Rational>, String> {
    let rows: Vec<Vec<Rational>> = text
        .split(';')
        .map(|row| row.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    SquareMatrix::from_rows(rows).map_err(|e| format!("{text:?}: {e}"))
}

/// Letters separated by `|`; `o` names the basepoint.
pub fn parse_word<P>(text: &str, point: impl Fn(&str) -> Result<P, String>) -> Result<Vec<P>, String> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split('|').map(|s| point(s.trim())).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActResult {
    pub model: String,
    pub word_length: usize,
    pub point: String,
    pub image: String,
}

/// Applies the word `p₁ | … | p_k` to a point, exactly.
pub fn act(model: ModelKind, word: &str, point: &str, policy: &TolerancePolicy) -> Result<ActResult, String> {
    match model {
        ModelKind::Geodesic => {
            let parse = |s: &str| if s == "o" { Ok(RealLine.basepoint()) } else { parse_rational(s) };
            let w = ReflectionWord::new(parse_word(word, parse)?);
            let y = parse(point.trim())?;
            let image = word_act(&RealLine, &w, &y).map_err(|e| e.to_string())?;
            Ok(ActResult {
                model: model.name().to_string(),
                word_length: w.len(),
                point: y.to_string(),
                image: image.to_string(),
            })
        }
        ModelKind::Sl2 | ModelKind::Sl3 | ModelKind::A2Diagram => {
            let n = if model == ModelKind::Sl2 { 2 } else { 3 };
            let space = SpdModel::exact(n);
            let parse = |s: &str| {
                if s == "o" {
                    return Ok(space.basepoint());
                }
                let m = parse_matrix(s)?;
                if m.n() != n {
                    return Err(format!("{s:?} is {0}x{0}, expected {n}x{n}", m.n()));
                }
                space.point(m, policy).map_err(|e| e.to_string())
            };
            let w = ReflectionWord::new(parse_word(word, parse)?);
            let y = parse(point.trim())?;
            let image = word_act(&space, &w, &y).map_err(|e| e.to_string())?;
            Ok(ActResult {
                model: model.name().to_string(),
                word_length: w.len(),
                point: y.to_string(),
                image: image.to_string(),
            })
        }
        ModelKind::BrokenSl2 => Err("the broken model is a test fixture and has no act command".to_string()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorReport {
    pub matrix: String,
    pub shears: Vec<String>,
    /// Exact `τ(h_i)` over `ℚ(√2)`, with `r2` standing for `√2`.
    pub factors: Vec<String>,
    pub expression: String,
    pub sign: i8,
    pub status: String,
    pub residual: String,
    pub tolerance: String,
}

/// Writes `g·gᵀ` as a nested reflection expression over root-subspace points.
pub fn factor_report(g: &SquareMatrix<Rational>, policy: &TolerancePolicy, abs_tol: &str) -> Result<FactorReport, String> {
    let shears = if g.n() == 2 {
        shear_decomposition(g).map_err(|e| e.to_string())?.iter().map(ToString::to_string).collect()
    } else {
        root_shear_decomposition(g).map_err(|e| e.to_string())?.iter().map(ToString::to_string).collect()
    };
    let f = point_factorization(g, policy).map_err(|e| e.to_string())?;
    let passed = f.residual.within(policy);
    Ok(FactorReport {
        matrix: g.to_string(),
        shears,
        factors: f.factors.iter().map(|r| r.exact.to_string()).collect(),
        expression: f.expression.to_string(),
        sign: f.sign,
        status: if passed { "pass" } else { "fail" }.to_string(),
        residual: f.residual.to_report_string(),
        tolerance: abs_tol.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, ratio};

    #[test]
    fn matrix_syntax() {
        let m = parse_matrix("2, 1/2; 0, 1/2").unwrap();
        assert_eq!(m, SquareMatrix::from_ratios(&[&[(2, 1), (1, 2)], &[(0, 1), (1, 2)]]));
        assert!(parse_matrix("1,2;3").is_err());
        assert!(parse_matrix("1,x;0,1").is_err());
    }

    #[test]
    fn geodesic_act() {
        let p = TolerancePolicy::default();
        // σ_1 σ_o (2) = σ_1(−2) = 4
        let r = act(ModelKind::Geodesic, "1|o", "2", &p).unwrap();
        assert_eq!(r.image, int(4).to_string());
        assert_eq!(r.word_length, 2);
        let half = act(ModelKind::Geodesic, "1/2", "0", &p).unwrap();
        assert_eq!(half.image, int(1).to_string());
        assert_eq!(ratio(1, 1), int(1));
    }

    #[test]
    fn spd_act_matches_formula() {
        let p = TolerancePolicy::default();
        // P.Q = P·Q⁻¹·P with P = [[2,1],[1,1]] and Q = I gives P².
        let r = act(ModelKind::Sl2, "2,1;1,1", "o", &p).unwrap();
        assert_eq!(r.image, SquareMatrix::from_ints(&[&[5, 3], &[3, 2]]).to_string());
        assert!(act(ModelKind::Sl2, "1,2;2,1", "o", &p).is_err());
        assert!(act(ModelKind::Sl2, "1,0,0;0,1,0;0,0,1", "o", &p).is_err());
    }

    #[test]
    fn factor_report_round_trips() {
        let p = TolerancePolicy::default();
        let r = factor_report(&parse_matrix("1,1;0,1").unwrap(), &p, "1e-9").unwrap();
        assert_eq!(r.status, "pass");
        assert_eq!(r.factors.len(), 3);
        assert_eq!(r.expression, "h1.(o.(h2.(o.(h3.o))))");
    }
}
