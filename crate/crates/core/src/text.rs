//! Canonical text forms and their parsers.
//!
//! ```text
//! TUPLE  := LEAF | "(" TUPLE ("," TUPLE)* ")"
//! LAYOUT := TUPLE ":" TUPLE
//! STRIDE := TERM ("+" TERM)*       TERM := INT | [INT ["*"]] "e" INT | "f" INT
//! TILER  := "[" ITEM ("," ITEM)* "]"   ITEM := TILER | LAYOUT | TUPLE
//! SLICE  := TUPLE with leaves INT | "_"
//! ```
//! Whitespace is ignored everywhere.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::inttuple::{IntTuple, Tuple};
use crate::layout::{Layout, Tiler};
use crate::stride::{Stride, StrideElem};
use crate::tensor::{SliceCoord, Slot};

impl<T: fmt::Display> fmt::Display for Tuple<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tuple::Leaf(v) => write!(f, "{v}"),
            Tuple::List(c) => {
                f.write_str("(")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser { src: s.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { offset: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(format!("unexpected '{}'", c as char)),
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse().map_err(|_| {
            self.pos = start;
            Error::Syntax { offset: start, msg: "expected an integer".into() }
        })
    }

    fn tuple<T>(&mut self, leaf: &mut impl FnMut(&mut Self) -> Result<T>) -> Result<Tuple<T>> {
        if self.eat(b'(') {
            if self.peek() == Some(b')') {
                return self.err("empty tuple");
            }
            let mut items = vec![self.tuple(leaf)?];
            while self.eat(b',') {
                items.push(self.tuple(leaf)?);
            }
            self.expect(b')')?;
            Ok(Tuple::List(items))
        } else {
            Ok(Tuple::Leaf(leaf(self)?))
        }
    }

    fn stride_term(&mut self) -> Result<StrideElem> {
        match self.peek() {
            Some(b'f') => {
                self.pos += 1;
                let m = self.int()?;
                if m < 0 {
                    return self.err("xor masks are non-negative");
                }
                Ok(StrideElem::xor(m as u64))
            }
            Some(b'e') => {
                self.pos += 1;
                self.axis().map(StrideElem::basis)
            }
            _ => {
                let k = self.int()?;
                self.eat(b'*');
                if self.eat(b'e') {
                    Ok(StrideElem::scaled_basis(k, self.axis()?))
                } else {
                    Ok(StrideElem::Int(k))
                }
            }
        }
    }

    fn axis(&mut self) -> Result<usize> {
        let a = self.int()?;
        if !(0..64).contains(&a) {
            return self.err("basis axis out of range");
        }
        Ok(a as usize)
    }

    fn stride_elem(&mut self) -> Result<StrideElem> {
        let mut e = self.stride_term()?;
        while self.eat(b'+') {
            let t = self.stride_term()?;
            e = e.add(&t).map_err(|_| Error::Syntax {
                offset: self.pos,
                msg: "cannot add stride terms of different kinds".into(),
            })?;
        }
        Ok(e)
    }

    fn slot(&mut self) -> Result<Slot> {
        if self.eat(b'_') {
            Ok(Slot::Free)
        } else {
            Ok(Slot::Fixed(self.int()?))
        }
    }

    fn layout(&mut self) -> Result<Layout> {
        let shape = self.tuple(&mut Self::int)?;
        self.expect(b':')?;
        let stride = self.tuple(&mut Self::stride_elem)?;
        Layout::new(shape, stride)
    }

    fn tiler(&mut self) -> Result<Tuple<Layout>> {
        if self.eat(b'[') {
            let mut items = vec![self.tiler()?];
            while self.eat(b',') {
                items.push(self.tiler()?);
            }
            self.expect(b']')?;
            return Ok(Tuple::List(items));
        }
        let shape = self.tuple(&mut Self::int)?;
        if self.eat(b':') {
            let stride = self.tuple(&mut Self::stride_elem)?;
            return Ok(Tuple::Leaf(Layout::new(shape, stride)?));
        }
        // a bare shape tiles mode by mode with unit strides
        shape.try_map(&mut |&n| Layout::new(Tuple::Leaf(n), Tuple::Leaf(StrideElem::Int(1))))
    }
}

fn parse_all<T>(s: &str, f: impl FnOnce(&mut Parser) -> Result<T>) -> Result<T> {
    let mut p = Parser::new(s);
    let v = f(&mut p)?;
    p.finish()?;
    Ok(v)
}

impl FromStr for IntTuple {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_all(s, |p| p.tuple(&mut Parser::int))
    }
}

impl FromStr for Stride {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_all(s, |p| p.tuple(&mut Parser::stride_elem))
    }
}

impl FromStr for SliceCoord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_all(s, |p| p.tuple(&mut Parser::slot))
    }
}

impl FromStr for Layout {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_all(s, |p| p.layout())
    }
}

impl FromStr for Tiler {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_all(s, |p| p.tiler()).map(Tiler)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuples() {
        let t: IntTuple = " ( 2 , (3 ,-4) ) ".parse().unwrap();
        assert_eq!(t.to_string(), "(2,(3,-4))");
        assert!("(2,".parse::<IntTuple>().is_err());
        assert!("(2)x".parse::<IntTuple>().is_err());
    }

    #[test]
    fn stride_forms() {
        let d: Stride = "(e1,(6*e1,6e0),f5,0,2e0+7e1)".parse().unwrap();
        assert_eq!(d.to_string(), "(e1,(6*e1,6*e0),f5,0,2*e0+7*e1)");
        assert!("f1+3".parse::<Stride>().is_err());
    }

    #[test]
    fn syntax_offsets() {
        match "(4,8):(1,x)".parse::<Layout>() {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 9),
            other => panic!("{other:?}"),
        }
        assert!(matches!("(4,8):(1)".parse::<Layout>(), Err(Error::Structure(_))));
    }

    #[test]
    fn tilers() {
        let t: Tiler = "[4:1, 8:2]".parse().unwrap();
        assert_eq!(t.to_string(), "[4:1,8:2]");
        let t: Tiler = "(4,8)".parse().unwrap();
        assert_eq!(t.to_string(), "[4:1,8:1]");
        let t: Tiler = "[[2,3],(2,2):(1,4)]".parse().unwrap();
        assert_eq!(t.to_string(), "[[2:1,3:1],(2,2):(1,4)]");
    }

    #[test]
    fn slices() {
        let s: SliceCoord = "((1,_),((_,0),_))".parse().unwrap();
        assert_eq!(s.to_string(), "((1,_),((_,0),_))");
    }
}
