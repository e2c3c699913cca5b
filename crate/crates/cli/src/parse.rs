//! Element expressions such as `3/2 a1 b1 - a2 a2`, `N(a1 b1) + 2 N(a1)` or
//! `N(a1)^N(b1)`. Error offsets are 1-based character positions.

use necklace_core::json::Chain;
use necklace_core::wedge::{add_factors, Factors};
use necklace_core::{DerivationElem, Error, Genus, Letter, LinComb, Necklace, Result, Scalar, Tensor, Word};

/// A parsed expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Element {
    Tensor(Tensor),
    Derivation(DerivationElem),
    /// A wedge of necklaces in `Λ* a_g⁻`.
    Chain(Chain),
}

impl Element {
    pub fn kind(&self) -> &'static str {
        match self {
            Element::Tensor(_) => "tensor",
            Element::Derivation(_) => "derivation element",
            Element::Chain(_) => "chain",
        }
    }
}

enum Body {
    Word(Word),
    Wedge(Vec<Necklace>),
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    g: Genus,
}

fn err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn here(&self) -> usize {
        self.pos + 1
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn coefficient(&mut self) -> Result<Option<Scalar>> {
        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
            return Ok(None);
        }
        let num = self.digits();
        let mut text = num;
        if self.peek() == Some('/') {
            let at = self.here();
            self.pos += 1;
            let den = self.digits();
            if den.is_empty() {
                return Err(err(self.here(), "expected a denominator"));
            }
            if den.chars().all(|c| c == '0') {
                return Err(err(at, "zero denominator"));
            }
            text = format!("{text}/{den}");
        }
        text.parse().map(Some)
    }

    fn letter(&mut self) -> Result<Letter> {
        let at = self.here();
        let kind = self.peek();
        if !matches!(kind, Some('a' | 'b')) {
            return Err(err(at, "expected a letter a<i> or b<i>"));
        }
        self.pos += 1;
        let idx = self.digits();
        if idx.is_empty() {
            return Err(err(self.here(), "expected a letter index"));
        }
        let i: u8 = idx.parse().map_err(|_| err(at, format!("letter index {idx} is too large")))?;
        if i == 0 || i > self.g {
            return Err(err(at, format!("letter index {i} out of range for g = {}", self.g)));
        }
        Ok(if kind == Some('a') { Letter::a(i) } else { Letter::b(i) })
    }

    fn letters(&mut self) -> Result<Word> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some('a' | 'b') => out.push(self.letter()?),
                _ => break,
            }
        }
        Ok(Word::from_letters(&out))
    }

    fn necklace(&mut self) -> Result<Necklace> {
        let at = self.here();
        self.pos += 1; // N
        self.skip_ws();
        if self.peek() != Some('(') {
            return Err(err(self.here(), "expected '(' after N"));
        }
        self.pos += 1;
        let w = self.letters()?;
        self.skip_ws();
        if self.peek() != Some(')') {
            return Err(err(self.here(), "expected ')'"));
        }
        self.pos += 1;
        Necklace::of(&w).ok_or_else(|| err(at, "empty necklace"))
    }

    fn body(&mut self) -> Result<Option<Body>> {
        self.skip_ws();
        match self.peek() {
            Some('N') => {
                let mut fs = vec![self.necklace()?];
                loop {
                    self.skip_ws();
                    if self.peek() != Some('^') {
                        break;
                    }
                    self.pos += 1;
                    self.skip_ws();
                    if self.peek() != Some('N') {
                        return Err(err(self.here(), "expected a necklace after '^'"));
                    }
                    fs.push(self.necklace()?);
                }
                Ok(Some(Body::Wedge(fs)))
            }
            Some('a' | 'b') => Ok(Some(Body::Word(self.letters()?))),
            _ => Ok(None),
        }
    }

    fn term(&mut self) -> Result<(Scalar, Body)> {
        self.skip_ws();
        let at = self.here();
        let c = self.coefficient()?;
        if c.is_some() {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
            }
        }
        match (c, self.body()?) {
            (c, Some(b)) => Ok((c.unwrap_or_else(Scalar::one), b)),
            (Some(c), None) => Ok((c, Body::Word(Word::empty()))),
            (None, None) => Err(err(at, "expected a term")),
        }
    }
}

/// Parses an expression in genus `g`. Words give a [`Tensor`], single
/// necklaces a [`DerivationElem`], and wedges `N(..)^N(..)` a chain; a bare
/// coefficient is a multiple of the empty word.
pub fn parse_element(text: &str, g: Genus) -> Result<Element> {
    necklace_core::word::check_genus(g)?;
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        g,
    };
    let mut terms: Vec<(usize, Scalar, Body)> = Vec::new();
    let mut sign = Scalar::one();
    p.skip_ws();
    if let Some(c @ ('+' | '-' | '−')) = p.peek() {
        if c != '+' {
            sign = -sign;
        }
        p.pos += 1;
    }
    loop {
        p.skip_ws();
        let at = p.here();
        let (c, b) = p.term()?;
        terms.push((at, sign * c, b));
        p.skip_ws();
        match p.peek() {
            None => break,
            Some('+') => sign = Scalar::one(),
            Some('-' | '−') => sign = -Scalar::one(),
            Some(ch) => return Err(err(p.here(), format!("unexpected '{ch}'"))),
        }
        p.pos += 1;
    }
    let words = terms.iter().filter(|t| matches!(t.2, Body::Word(_))).count();
    if words == terms.len() {
        let mut out = LinComb::new();
        for (_, c, b) in terms {
            if let Body::Word(w) = b {
                out.add_term(w, c);
            }
        }
        return Ok(Element::Tensor(Tensor::from_terms(g, out)?));
    }
    if words > 0 {
        let at = terms.iter().find(|t| matches!(t.2, Body::Word(_))).unwrap().0;
        return Err(err(at, "cannot mix words with necklaces"));
    }
    let single = terms.iter().all(|t| matches!(&t.2, Body::Wedge(fs) if fs.len() == 1));
    if single {
        let mut out = LinComb::new();
        for (_, c, b) in terms {
            if let Body::Wedge(mut fs) = b {
                out.add_term(fs.pop().unwrap(), c);
            }
        }
        return Ok(Element::Derivation(DerivationElem::from_terms(g, out)?));
    }
    let mut out = LinComb::new();
    for (_, c, b) in terms {
        if let Body::Wedge(fs) = b {
            add_factors(&mut out, fs.into_iter().collect::<Factors>(), &c);
        }
    }
    Ok(Element::Chain(Chain { g, vector: out }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn offset(r: Result<Element>) -> usize {
        match r {
            Err(Error::Parse { offset, .. }) => offset,
            other => panic!("expected a syntax error, got {other:?}"),
        }
    }

    #[test]
    fn necklace() {
        let Element::Derivation(u) = parse_element("N(a1 b1)", 1).unwrap() else { panic!() };
        assert_eq!(u, DerivationElem::necklace(1, Necklace::of(&"a1 b1".parse().unwrap()).unwrap()));
    }

    #[test]
    fn two_term_tensor() {
        let Element::Tensor(t) = parse_element("3/2 a1 b1 - a2 a2", 2).unwrap() else { panic!() };
        assert_eq!(t.terms().len(), 2);
        assert_eq!(t.coeff(&"a1 b1".parse().unwrap()), Scalar::new(3, 2));
        assert_eq!(t.coeff(&"a2 a2".parse().unwrap()), Scalar::from_int(-1));
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(offset(parse_element("N(a1 b1", 1)), 8);
        assert_eq!(offset(parse_element("a1 + ", 1)), 6);
        assert_eq!(offset(parse_element("a1 a2", 1)), 4);
        assert_eq!(offset(parse_element("a1 + N(a1)", 1)), 1);
        assert_eq!(offset(parse_element("1/0 a1", 1)), 2);
        assert_eq!(offset(parse_element("a1 ? b1", 1)), 4);
    }

    #[test]
    fn wedges_and_units() {
        let Element::Chain(c) = parse_element("N(b1)^N(a1)", 1).unwrap() else { panic!() };
        assert_eq!(c.vector.len(), 1);
        assert_eq!(c.vector.iter().next().unwrap().1, &Scalar::from_int(-1));
        let Element::Chain(z) = parse_element("N(a1)^N(a1)", 1).unwrap() else { panic!() };
        assert!(z.vector.is_zero());
        let Element::Tensor(t) = parse_element("-2", 1).unwrap() else { panic!() };
        assert_eq!(t, Tensor::unit(1).scale(&Scalar::from_int(-2)));
        let Element::Derivation(u) = parse_element("2*N(a1) - N(a1)", 1).unwrap() else { panic!() };
        assert_eq!(u.terms().len(), 1);
    }
}
