//! Minimal S-expression reader shared by every text format in the crate.

use std::fmt;

use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom { text: String, pos: usize },
    List { items: Vec<Sexp>, pos: usize },
}

impl Sexp {
    pub fn pos(&self) -> usize {
        match self {
            Sexp::Atom { pos, .. } | Sexp::List { pos, .. } => *pos,
        }
    }

    pub fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom { text, .. } => Some(text),
            Sexp::List { .. } => None,
        }
    }

    pub fn list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List { items, .. } => Some(items),
            Sexp::Atom { .. } => None,
        }
    }

    /// Head symbol of a list form, e.g. `and` in `(and f g)`.
    pub fn head(&self) -> Option<&str> {
        self.list().and_then(|items| items.first()).and_then(Sexp::atom)
    }

    pub fn new_atom(text: impl Into<String>) -> Sexp {
        Sexp::Atom { text: text.into(), pos: 0 }
    }

    pub fn new_list(items: Vec<Sexp>) -> Sexp {
        Sexp::List { items, pos: 0 }
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom { text, .. } => f.write_str(text),
            Sexp::List { items, .. } => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

fn is_atom_char(c: char) -> bool {
    !c.is_whitespace() && c != '(' && c != ')' && c != ';'
}

/// Reads every top-level form in `text`. Comments run from `;` to end of line.
pub fn read_all(text: &str) -> Result<Vec<Sexp>, ParseError> {
    let mut stack: Vec<(usize, Vec<Sexp>)> = Vec::new();
    let mut top = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == ';' {
            while let Some(&(_, c)) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
            }
        } else if c == '(' {
            chars.next();
            stack.push((pos, Vec::new()));
        } else if c == ')' {
            chars.next();
            let (start, items) = stack
                .pop()
                .ok_or_else(|| ParseError::lexical(pos, "unbalanced ')'"))?;
            let node = Sexp::List { items, pos: start };
            match stack.last_mut() {
                Some((_, parent)) => parent.push(node),
                None => top.push(node),
            }
        } else {
            if !c.is_ascii() {
                return Err(ParseError::lexical(pos, format!("non-ASCII character {c:?}")));
            }
            let mut s = String::new();
            while let Some(&(p, c)) = chars.peek() {
                if !is_atom_char(c) {
                    break;
                }
                if !c.is_ascii() {
                    return Err(ParseError::lexical(p, format!("non-ASCII character {c:?}")));
                }
                s.push(c);
                chars.next();
            }
            let node = Sexp::Atom { text: s, pos };
            match stack.last_mut() {
                Some((_, parent)) => parent.push(node),
                None => top.push(node),
            }
        }
    }
    if let Some((start, _)) = stack.last() {
        return Err(ParseError::lexical(
            text.len(),
            format!("unexpected end of input; list opened at {start} is not closed"),
        ));
    }
    Ok(top)
}

/// Reads exactly one form.
pub fn read_one(text: &str) -> Result<Sexp, ParseError> {
    let mut forms = read_all(text)?;
    match forms.len() {
        0 => Err(ParseError::lexical(text.len(), "unexpected end of input; expected a form")),
        1 => Ok(forms.pop().unwrap()),
        _ => Err(ParseError::lexical(forms[1].pos(), "trailing input after form")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_lists() {
        let s = read_one("(all x (-> (P x) (P x)))").unwrap();
        assert_eq!(s.to_string(), "(all x (-> (P x) (P x)))");
        assert_eq!(s.head(), Some("all"));
    }

    #[test]
    fn unclosed_reports_end_of_input() {
        let text = "(all x (P x y";
        let err = read_one(text).unwrap_err();
        assert_eq!(err.pos, text.len());
        assert!(err.message.contains("end of input"));
    }

    #[test]
    fn comments_skipped() {
        let forms = read_all("; header\n(a b) ; trailing\nc").unwrap();
        assert_eq!(forms.len(), 2);
    }
}
