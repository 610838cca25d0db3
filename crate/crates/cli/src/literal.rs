//! Correlator literals: `<t0^3>_0`, `<t2 t3>_2`, `<tau4>_2`.
//!
//! ```text
//! literal := '<' term (ws term)* '>' '_' INT
//! term    := ('t' | 'tau') INT ('^' INT)?
//! ```
//!
//! Whitespace is allowed around terms and brackets. Positions in errors are
//! 0-based character offsets.

use psi_core::{canonicalize, CorrelatorKey};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LiteralError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("invalid input at position {position}: multiplicity must be at least 1")]
    ZeroMultiplicity { position: usize },
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn new(text: &str) -> Self {
        Self { chars: text.chars().collect(), pos: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) -> bool {
        let start = self.pos;
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
        self.pos > start
    }

    fn error(&self, message: impl Into<String>) -> LiteralError {
        LiteralError::Syntax { position: self.pos, message: message.into() }
    }

    fn expect(&mut self, c: char) -> Result<(), LiteralError> {
        match self.peek() {
            Some(found) if found == c => {
                self.pos += 1;
                Ok(())
            }
            Some(found) => Err(self.error(format!("expected '{c}', found '{found}'"))),
            None => Err(self.error(format!("expected '{c}', found end of input"))),
        }
    }

    fn eat(&mut self, word: &str) -> bool {
        let w: Vec<char> = word.chars().collect();
        if self.chars[self.pos..].starts_with(&w) {
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<u32, LiteralError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a non-negative integer"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits
            .parse()
            .map_err(|_| LiteralError::Syntax { position: start, message: "integer too large".into() })
    }
}

pub fn parse_correlator(text: &str) -> Result<CorrelatorKey, LiteralError> {
    let mut cur = Cursor::new(text);
    cur.skip_ws();
    cur.expect('<')?;
    let mut indices = Vec::new();
    loop {
        cur.skip_ws();
        if cur.peek() == Some('>') {
            if indices.is_empty() {
                return Err(cur.error("expected at least one term"));
            }
            cur.pos += 1;
            break;
        }
        if !indices.is_empty() && !cur.chars[cur.pos - 1].is_whitespace() {
            return Err(cur.error("terms must be separated by whitespace"));
        }
        if !(cur.eat("tau") || cur.eat("t")) {
            return Err(match cur.peek() {
                Some(c) => cur.error(format!("expected 't', 'tau' or '>', found '{c}'")),
                None => cur.error("unterminated literal, expected '>'"),
            });
        }
        let index = cur.integer()?;
        let mut count = 1;
        if cur.peek() == Some('^') {
            cur.pos += 1;
            let at = cur.pos;
            count = cur.integer()?;
            if count == 0 {
                return Err(LiteralError::ZeroMultiplicity { position: at });
            }
        }
        indices.extend(std::iter::repeat_n(index, count as usize));
    }
    cur.skip_ws();
    cur.expect('_')?;
    cur.skip_ws();
    let genus = cur.integer()?;
    cur.skip_ws();
    if let Some(c) = cur.peek() {
        return Err(cur.error(format!("unexpected trailing '{c}'")));
    }
    Ok(canonicalize(genus, &indices).expect("at least one index was parsed"))
}
