use std::collections::BTreeSet;
use std::fmt;

/// A CTL formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    AX(Box<Formula>),
    EX(Box<Formula>),
    AF(Box<Formula>),
    EF(Box<Formula>),
    AG(Box<Formula>),
    EG(Box<Formula>),
    AU(Box<Formula>, Box<Formula>),
    EU(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    // Constructor helpers, mostly for tests and generated suites.
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }
    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }
    pub fn ax(f: Formula) -> Self {
        Formula::AX(Box::new(f))
    }
    pub fn ex(f: Formula) -> Self {
        Formula::EX(Box::new(f))
    }
    pub fn af(f: Formula) -> Self {
        Formula::AF(Box::new(f))
    }
    pub fn ef(f: Formula) -> Self {
        Formula::EF(Box::new(f))
    }
    pub fn ag(f: Formula) -> Self {
        Formula::AG(Box::new(f))
    }
    pub fn eg(f: Formula) -> Self {
        Formula::EG(Box::new(f))
    }
    pub fn au(a: Formula, b: Formula) -> Self {
        Formula::AU(Box::new(a), Box::new(b))
    }
    pub fn eu(a: Formula, b: Formula) -> Self {
        Formula::EU(Box::new(a), Box::new(b))
    }

    /// Atom names occurring in the formula, sorted.
    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(name) => {
                out.insert(name);
            }
            Formula::Not(f)
            | Formula::AX(f)
            | Formula::EX(f)
            | Formula::AF(f)
            | Formula::EF(f)
            | Formula::AG(f)
            | Formula::EG(f) => f.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::AU(a, b) | Formula::EU(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Nesting depth; atoms and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 0,
            Formula::Not(f)
            | Formula::AX(f)
            | Formula::EX(f)
            | Formula::AF(f)
            | Formula::EF(f)
            | Formula::AG(f)
            | Formula::EG(f) => 1 + f.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::AU(a, b) | Formula::EU(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    /// True when the formula has no temporal operators.
    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => true,
            Formula::Not(f) => f.is_propositional(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_propositional() && b.is_propositional()
            }
            _ => false,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Not(_)
            | Formula::AX(_)
            | Formula::EX(_)
            | Formula::AF(_)
            | Formula::EF(_)
            | Formula::AG(_)
            | Formula::EG(_) => 4,
            _ => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let wrap = self.precedence() < min;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Formula::True => f.write_str("true")?,
            Formula::False => f.write_str("false")?,
            Formula::Atom(name) => match Comparison::parse(name) {
                Some(c) => write!(f, "{} {} {}", c.path, c.op, c.value)?,
                None => f.write_str(name)?,
            },
            Formula::Not(g) => {
                f.write_str("!")?;
                g.fmt_prec(f, 4)?;
            }
            Formula::AX(g) => unary(f, "AX", g)?,
            Formula::EX(g) => unary(f, "EX", g)?,
            Formula::AF(g) => unary(f, "AF", g)?,
            Formula::EF(g) => unary(f, "EF", g)?,
            Formula::AG(g) => unary(f, "AG", g)?,
            Formula::EG(g) => unary(f, "EG", g)?,
            Formula::And(a, b) => {
                a.fmt_prec(f, 3)?;
                f.write_str(" & ")?;
                b.fmt_prec(f, 4)?;
            }
            Formula::Or(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str(" | ")?;
                b.fmt_prec(f, 3)?;
            }
            Formula::Implies(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str(" -> ")?;
                b.fmt_prec(f, 1)?;
            }
            Formula::AU(a, b) => write!(f, "A [{a} U {b}]")?,
            Formula::EU(a, b) => write!(f, "E [{a} U {b}]")?,
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

fn unary(f: &mut fmt::Formatter<'_>, op: &str, g: &Formula) -> fmt::Result {
    f.write_str(op)?;
    f.write_str(" ")?;
    g.fmt_prec(f, 4)
}

/// Pretty-prints in the concrete syntax accepted by the parser, with the
/// minimum parentheses needed to reparse to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Le,
    Lt,
    Ge,
    Gt,
}

impl CmpOp {
    pub fn as_str(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Le => "<=",
            CmpOp::Lt => "<",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        }
    }

    pub fn eval<T: Ord>(self, lhs: T, rhs: T) -> bool {
        match self {
            CmpOp::Eq => lhs == rhs,
            CmpOp::Ne => lhs != rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Lt => lhs < rhs,
            CmpOp::Ge => lhs >= rhs,
            CmpOp::Gt => lhs > rhs,
        }
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A comparison atom such as `light0.wait<=54`, split into its parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub path: String,
    pub op: CmpOp,
    pub value: String,
}

impl Comparison {
    /// Splits a canonical comparison atom name. Returns `None` for plain
    /// propositions.
    pub fn parse(name: &str) -> Option<Self> {
        // two-character operators first so "<=" is not read as "<"
        const OPS: [(&str, CmpOp); 6] = [
            ("!=", CmpOp::Ne),
            ("<=", CmpOp::Le),
            (">=", CmpOp::Ge),
            ("=", CmpOp::Eq),
            ("<", CmpOp::Lt),
            (">", CmpOp::Gt),
        ];
        let pos = name.find(['=', '!', '<', '>'])?;
        let rest = &name[pos..];
        let (sym, op) = OPS.iter().find(|(sym, _)| rest.starts_with(sym))?;
        let value = &rest[sym.len()..];
        if pos == 0 || value.is_empty() {
            return None;
        }
        Some(Self {
            path: name[..pos].to_string(),
            op: *op,
            value: value.to_string(),
        })
    }

    pub fn int_value(&self) -> Option<i64> {
        self.value.parse().ok()
    }

    /// The canonical atom name: no whitespace around the operator.
    pub fn canonical(&self) -> String {
        format!("{}{}{}", self.path, self.op, self.value)
    }
}
