use std::fmt;
use std::str::FromStr;

use crate::semantics::Action;

use super::VerifyError;

/// Matches transition labels.
///
/// Text form: `i`, `exit`, or a gate (or `*`) followed by one `!value` or
/// `!*` per offer, e.g. `terClt !* !*`. Spaces around `!` are optional. The
/// number of offers must match exactly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LabelPattern {
    Internal,
    Terminate,
    Observable {
        /// `None` is the wildcard.
        gate: Option<String>,
        offers: Vec<Option<String>>,
    },
}

impl LabelPattern {
    pub fn matches(&self, a: &Action) -> bool {
        match (self, a) {
            (LabelPattern::Internal, Action::Internal) | (LabelPattern::Terminate, Action::Terminate) => true,
            (LabelPattern::Observable { gate, offers }, Action::Observable { gate: g, offers: vs }) => {
                gate.as_ref().is_none_or(|p| p == g)
                    && offers.len() == vs.len()
                    && offers.iter().zip(vs).all(|(p, v)| p.as_ref().is_none_or(|p| *p == v.name))
            }
            _ => false,
        }
    }
}

fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_')
}

impl FromStr for LabelPattern {
    type Err = VerifyError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| VerifyError::Pattern {
            text: text.to_string(),
            reason: why.to_string(),
        };
        let mut parts = text.split('!').map(str::trim);
        let head = parts.next().unwrap_or_default();
        let offers: Vec<&str> = parts.collect();
        match head {
            "i" | "exit" if !offers.is_empty() => Err(bad("`i` and `exit` take no offers")),
            "i" => Ok(LabelPattern::Internal),
            "exit" => Ok(LabelPattern::Terminate),
            _ => {
                let gate = match head {
                    "*" => None,
                    g if is_ident(g) => Some(g.to_string()),
                    "" => return Err(bad("missing gate")),
                    _ => return Err(bad("gate must be an identifier or `*`")),
                };
                let offers = offers
                    .into_iter()
                    .map(|o| match o {
                        "*" => Ok(None),
                        v if is_ident(v) => Ok(Some(v.to_string())),
                        _ => Err(bad("offer must be `!value` or `!*`")),
                    })
                    .collect::<Result<_, _>>()?;
                Ok(LabelPattern::Observable { gate, offers })
            }
        }
    }
}

impl fmt::Display for LabelPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelPattern::Internal => f.write_str("i"),
            LabelPattern::Terminate => f.write_str("exit"),
            LabelPattern::Observable { gate, offers } => {
                f.write_str(gate.as_deref().unwrap_or("*"))?;
                for o in offers {
                    write!(f, " !{}", o.as_deref().unwrap_or("*"))?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::Value;

    fn obs(gate: &str, vals: &[&str]) -> Action {
        Action::Observable {
            gate: gate.into(),
            offers: vals
                .iter()
                .map(|v| Value {
                    sort: "S".into(),
                    name: v.to_string(),
                })
                .collect(),
        }
    }

    #[test]
    fn compact_and_spaced_forms() {
        let p: LabelPattern = "terClt!*!*".parse().unwrap();
        assert_eq!(p, "terClt !* !*".parse().unwrap());
        assert!(p.matches(&obs("terClt", &["s1", "r1"])));
        assert!(!p.matches(&obs("terClt", &["s1"])));
        assert!(!p.matches(&obs("invClt", &["s1", "r1"])));
    }

    #[test]
    fn wildcards_and_specials() {
        let p: LabelPattern = "* !Service3".parse().unwrap();
        assert!(p.matches(&obs("ter", &["Service3"])));
        assert!(!p.matches(&obs("ter", &["Service1"])));
        assert!(!p.matches(&Action::Internal));
        assert!("i".parse::<LabelPattern>().unwrap().matches(&Action::Internal));
        assert!("exit".parse::<LabelPattern>().unwrap().matches(&Action::Terminate));
    }

    #[test]
    fn malformed() {
        for t in ["", "!x", "a !", "a b", "i !x"] {
            assert!(t.parse::<LabelPattern>().is_err(), "{t}");
        }
    }
}
