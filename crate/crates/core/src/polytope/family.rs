//! Expression tree over the generating families (segment, del Pezzo,
//! pseudo del Pezzo) and the convex-hull product, with a tiny parser.
//!
//! Grammar: `atom := "seg" | "dp(" int ")" | "pdp(" int ")"`,
//! `expr := atom ("*" atom)*`, `*` left-associative.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::LatticePolytope;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyExpr {
    Seg,
    Dp(u32),
    Pdp(u32),
    Product(Box<FamilyExpr>, Box<FamilyExpr>),
}

impl FamilyExpr {
    /// Leaf atoms in left-to-right order.
    pub fn atoms(&self) -> Vec<&FamilyExpr> {
        match self {
            FamilyExpr::Product(a, b) => {
                let mut v = a.atoms();
                v.extend(b.atoms());
                v
            }
            leaf => vec![leaf],
        }
    }

    /// Ambient dimension of the realized polytope.
    pub fn dim(&self) -> usize {
        match self {
            FamilyExpr::Seg => 1,
            FamilyExpr::Dp(k) | FamilyExpr::Pdp(k) => 2 * *k as usize,
            FamilyExpr::Product(a, b) => a.dim() + b.dim(),
        }
    }

    /// Builds the polytope by folding the convex-hull product over atoms.
    pub fn realize(&self) -> Result<LatticePolytope> {
        match self {
            FamilyExpr::Seg => Ok(LatticePolytope::segment()),
            FamilyExpr::Dp(k) => LatticePolytope::del_pezzo(*k),
            FamilyExpr::Pdp(k) => LatticePolytope::pseudo_del_pezzo(*k),
            FamilyExpr::Product(a, b) => a.realize()?.convex_hull_product(&b.realize()?),
        }
    }

    /// Left-associative product of a nonempty atom list.
    pub fn product_of(atoms: Vec<FamilyExpr>) -> Option<FamilyExpr> {
        let mut iter = atoms.into_iter();
        let first = iter.next()?;
        Some(iter.fold(first, |acc, a| {
            FamilyExpr::Product(Box::new(acc), Box::new(a))
        }))
    }
}

impl fmt::Display for FamilyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyExpr::Seg => write!(f, "seg"),
            FamilyExpr::Dp(k) => write!(f, "dp({k})"),
            FamilyExpr::Pdp(k) => write!(f, "pdp({k})"),
            FamilyExpr::Product(a, b) => write!(f, "{a}*{b}"),
        }
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.text[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        let rest = &self.text[self.pos..];
        let len = rest.chars().take_while(|c| c.is_ascii_digit()).count();
        if len == 0 {
            return Err(self.err("expected an integer"));
        }
        self.pos += len;
        self.text[start..self.pos]
            .parse::<i64>()
            .map_err(|_| self.err("integer out of range"))
    }

    fn atom(&mut self) -> Result<FamilyExpr> {
        self.skip_ws();
        // "pdp" must be probed before "dp"
        if self.eat("pdp") {
            return self.indexed(FamilyExpr::Pdp);
        }
        if self.eat("dp") {
            return self.indexed(FamilyExpr::Dp);
        }
        if self.eat("seg") {
            return Ok(FamilyExpr::Seg);
        }
        Err(self.err("expected `seg`, `dp(k)` or `pdp(k)`"))
    }

    fn indexed(&mut self, make: fn(u32) -> FamilyExpr) -> Result<FamilyExpr> {
        if !self.eat("(") {
            return Err(self.err("expected `(`"));
        }
        self.skip_ws();
        let k = self.integer()?;
        if k < 1 {
            return Err(Error::BadFamilyIndex(k));
        }
        let k = u32::try_from(k).map_err(|_| self.err("index out of range"))?;
        self.skip_ws();
        if !self.eat(")") {
            return Err(self.err("expected `)`"));
        }
        Ok(make(k))
    }

    fn expr(&mut self) -> Result<FamilyExpr> {
        let mut acc = self.atom()?;
        loop {
            self.skip_ws();
            if self.eat("*") {
                let rhs = self.atom()?;
                acc = FamilyExpr::Product(Box::new(acc), Box::new(rhs));
            } else {
                break;
            }
        }
        self.skip_ws();
        if self.pos != self.text.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(acc)
    }
}

/// Parses the family DSL.
pub fn parse_family(text: &str) -> Result<FamilyExpr> {
    Parser { text, pos: 0 }.expr()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_atoms_and_products() {
        assert_eq!(parse_family("seg").unwrap(), FamilyExpr::Seg);
        assert_eq!(parse_family("dp(2)").unwrap(), FamilyExpr::Dp(2));
        assert_eq!(parse_family("pdp(1)").unwrap(), FamilyExpr::Pdp(1));
        let e = parse_family("seg * dp(1)*pdp(3)").unwrap();
        assert_eq!(e.to_string(), "seg*dp(1)*pdp(3)");
        assert_eq!(e.dim(), 1 + 2 + 6);
        assert_eq!(e.atoms().len(), 3);
    }

    #[test]
    fn realizes_by_folding() {
        let p = parse_family("dp(1)*pdp(1)").unwrap().realize().unwrap();
        assert_eq!(p.dim(), 4);
        assert_eq!(p.vertices().len(), 6 + 5);
    }

    #[test]
    fn rejects_bad_input_with_position() {
        assert!(matches!(
            parse_family("dp(0)"),
            Err(Error::BadFamilyIndex(0))
        ));
        match parse_family("seg*flip") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_family("").is_err());
        assert!(parse_family("seg seg").is_err());
        assert!(parse_family("dp(1").is_err());
    }
}
