//! Parser and evaluator for bracket expressions over interval generators.
//!
//! Grammar:
//! ```text
//! atom := ('e' | 'f' | 'h') '(' interval ')'
//! expr := atom | rat '*' expr | expr '+' expr | expr '-' expr
//!       | '[' expr ',' expr ']'
//! ```
//! Intervals use the display syntax of [`crate::interval::parse_interval`],
//! e.g. `e(r:0,2)` or `f(c:0,1+t:0,1/2)`. Evaluation is over one shape
//! graph; an unresolvable bracket aborts with the engine's error.

use thiserror::Error;

use crate::lie::{bracket, LieElement, Unresolvable};
use crate::rat::{rat, Rat};
use crate::shape::ShapeGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("parse error at byte {at}: {msg}")]
    Parse { at: usize, msg: String },
    #[error(transparent)]
    Unresolvable(#[from] Unresolvable),
}

/// Parse and evaluate `src` against `g`.
pub fn eval_expr(g: &ShapeGraph, src: &str) -> Result<LieElement, ExprError> {
    let mut p = Parser { g, src, pos: 0 };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    g: &'a ShapeGraph,
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> ExprError {
        ExprError::Parse {
            at: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> Result<(), ExprError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<LieElement, ExprError> {
        let mut acc = self.unary()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.unary()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.unary()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<LieElement, ExprError> {
        self.skip_ws();
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.scale(rat(-1, 1)))
            }
            Some(c) if c.is_ascii_digit() => {
                let r = self.rational()?;
                self.eat(b'*')?;
                Ok(self.unary()?.scale(r))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<LieElement, ExprError> {
        self.skip_ws();
        match self.peek() {
            Some(b'[') => {
                self.pos += 1;
                let left = self.expr()?;
                self.eat(b',')?;
                let right = self.expr()?;
                self.eat(b']')?;
                Ok(bracket(self.g, &left, &right)?)
            }
            Some(k @ (b'e' | b'f' | b'h')) => {
                self.pos += 1;
                self.eat(b'(')?;
                let start = self.pos;
                let end = self.src[start..]
                    .find(')')
                    .map(|off| start + off)
                    .ok_or_else(|| self.err("unterminated `(`"))?;
                let iv = crate::interval::parse_interval(self.g, &self.src[start..end])
                    .map_err(|msg| ExprError::Parse { at: start, msg })?;
                self.pos = end + 1;
                Ok(match k {
                    b'e' => LieElement::e(iv),
                    b'f' => LieElement::f(iv),
                    _ => LieElement::h(self.g, &iv),
                })
            }
            _ => Err(self.err("expected atom, `[`, rational, or `-`")),
        }
    }

    fn rational(&mut self) -> Result<Rat, ExprError> {
        let num = self.integer()?;
        self.skip_ws();
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let den = self.integer()?;
            if den == 0 {
                return Err(self.err("zero denominator"));
            }
            Ok(rat(num, den))
        } else {
            Ok(rat(num, 1))
        }
    }

    fn integer(&mut self) -> Result<i64, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected digits"));
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| self.err("integer out of range"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::{parse_interval, Interval};
    use crate::rat::rat_int;
    use crate::shape::{circle_graph, line_graph};

    fn iv(g: &ShapeGraph, s: &str) -> Interval {
        parse_interval(g, s).unwrap()
    }

    #[test]
    fn atoms_and_linear_combinations() {
        let g = line_graph();
        let e = eval_expr(&g, "e(r:0,2)").unwrap();
        assert_eq!(e, LieElement::e(iv(&g, "r:0,2")));
        let x = eval_expr(&g, "2*e(r:0,1) - 1/2*f(r:1,2) + h(r:0,2)").unwrap();
        let want = LieElement::e(iv(&g, "r:0,1"))
            .scale(rat_int(2))
            .add(&LieElement::f(iv(&g, "r:1,2")).scale(rat(-1, 2)))
            .add(&LieElement::h(&g, &iv(&g, "r:0,2")));
        assert_eq!(x, want);
    }

    #[test]
    fn brackets_nest_and_obey_precedence() {
        let g = line_graph();
        let x = eval_expr(&g, "[e(r:0,1), e(r:1,2)]").unwrap();
        assert_eq!(x, LieElement::e(iv(&g, "r:0,2")));
        let y = eval_expr(&g, "[[e(r:0,1), e(r:1,2)], f(r:0,1)]").unwrap();
        assert_eq!(y, LieElement::e(iv(&g, "r:1,2")).scale(rat_int(-1)));
        // `2*[x,y] + z` binds the scalar to the bracket only.
        let z = eval_expr(&g, "2*[e(r:0,1), e(r:1,2)] + e(r:0,2)").unwrap();
        assert_eq!(z, LieElement::e(iv(&g, "r:0,2")).scale(rat_int(3)));
    }

    #[test]
    fn prefix_minus_negates() {
        let g = line_graph();
        let x = eval_expr(&g, "-e(r:0,1)").unwrap();
        assert_eq!(x, LieElement::e(iv(&g, "r:0,1")).scale(rat_int(-1)));
        let y = eval_expr(&g, "e(r:0,1) - -e(r:0,1)").unwrap();
        assert_eq!(y, LieElement::e(iv(&g, "r:0,1")).scale(rat_int(2)));
    }

    #[test]
    fn multi_run_intervals_parse_inside_atoms() {
        let g = circle_graph(2);
        let x = eval_expr(&g, "e(c1:0,1+c2:0,1)").unwrap();
        assert_eq!(x, LieElement::e(iv(&g, "c1:0,1+c2:0,1")));
    }

    #[test]
    fn unresolvable_brackets_surface() {
        let g = circle_graph(2);
        let err = eval_expr(&g, "[e(c1:0,1), e(c2:0,1)]").unwrap_err();
        assert!(matches!(err, ExprError::Unresolvable(_)), "{err}");
    }

    #[test]
    fn parse_errors_carry_positions() {
        let g = line_graph();
        for bad in ["", "e(r:0,2", "[e(r:0,1) e(r:1,2)]", "q(r:0,1)", "1/0*e(r:0,1)", "e(r:0,1))"] {
            let err = eval_expr(&g, bad).unwrap_err();
            assert!(matches!(err, ExprError::Parse { .. }), "input `{bad}` gave {err}");
        }
    }
}
