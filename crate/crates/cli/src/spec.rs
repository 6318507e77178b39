//! Geometry specifications such as `W(5,2) i=2` or `Q+(5,2) halfspin:A`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use geomcensus::fields::{prime_power, FieldSpec, MAX_ORDER};
use geomcensus::forms::{standard_form, Family};
use geomcensus::grassmann::{Ambient, Instance, SpinClass};
use geomcensus::linalg::gaussian_binomial;
use geomcensus::spaces::{PolarSpace, ProjectiveSpace};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpecFamily {
    Projective,
    Polar(Family),
}

impl SpecFamily {
    pub fn symbol(self) -> &'static str {
        match self {
            SpecFamily::Projective => "PG",
            SpecFamily::Polar(Family::Symplectic) => "W",
            SpecFamily::Polar(Family::Parabolic) => "Q",
            SpecFamily::Polar(Family::Hyperbolic) => "Q+",
            SpecFamily::Polar(Family::Elliptic) => "Q-",
            SpecFamily::Polar(Family::Hermitian) => "H",
        }
    }

    pub const ALL: [SpecFamily; 6] = [
        SpecFamily::Projective,
        SpecFamily::Polar(Family::Symplectic),
        SpecFamily::Polar(Family::Parabolic),
        SpecFamily::Polar(Family::Hyperbolic),
        SpecFamily::Polar(Family::Elliptic),
        SpecFamily::Polar(Family::Hermitian),
    ];
}

/// A geometry: a projective or polar space, a type index (vector dimension
/// of the vertices) and, for hyperbolic generators, a half-spin class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeometrySpec {
    pub family: SpecFamily,
    /// Projective dimension of the ambient space.
    pub n: usize,
    /// Field order; for Hermitian spaces this is the square `q^2`.
    pub q: usize,
    pub type_index: Option<usize>,
    pub half_spin: Option<SpinClass>,
}

impl fmt::Display for GeometrySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.family.symbol(), self.n, self.q)?;
        if let Some(i) = self.type_index {
            write!(f, " i={i}")?;
        }
        if let Some(c) = self.half_spin {
            write!(f, " halfspin:{}", class_name(c))?;
        }
        Ok(())
    }
}

pub fn class_name(c: SpinClass) -> &'static str {
    match c {
        SpinClass::A => "A",
        SpinClass::B => "B",
    }
}

struct Cursor<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, message: impl Into<String>) -> CliResult<T> {
        Err(CliError::Parse { input: self.input.to_string(), position: self.pos, message: message.into() })
    }

    fn rest(&self) -> &'a str {
        &self.input[self.pos..]
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> CliResult<()> {
        if self.eat(token) {
            Ok(())
        } else {
            self.err(format!("expected {token:?}"))
        }
    }

    fn skip_spaces(&mut self) -> usize {
        let n = self.rest().len() - self.rest().trim_start().len();
        self.pos += n;
        n
    }

    fn number(&mut self) -> CliResult<usize> {
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return self.err("expected a number");
        }
        let value = self.rest()[..digits].parse().or_else(|_| self.err("number out of range"))?;
        self.pos += digits;
        Ok(value)
    }
}

impl FromStr for GeometrySpec {
    type Err = CliError;

    fn from_str(input: &str) -> CliResult<GeometrySpec> {
        let mut c = Cursor { input, pos: 0 };
        c.skip_spaces();
        // Longest symbols first so that `Q+` is not read as `Q`.
        let family = ["PG", "Q+", "Q-", "W", "Q", "H"]
            .into_iter()
            .find(|s| c.rest().starts_with(s))
            .and_then(|s| SpecFamily::ALL.into_iter().find(|f| f.symbol() == s));
        let Some(family) = family else {
            return c.err("expected one of PG, W, Q, Q+, Q-, H");
        };
        c.pos += family.symbol().len();
        c.expect("(")?;
        c.skip_spaces();
        let n = c.number()?;
        c.skip_spaces();
        c.expect(",")?;
        c.skip_spaces();
        let q = c.number()?;
        c.skip_spaces();
        c.expect(")")?;
        let mut spec = GeometrySpec { family, n, q, type_index: None, half_spin: None };
        loop {
            let gap = c.skip_spaces();
            if c.rest().is_empty() {
                break;
            }
            if gap == 0 {
                return c.err("expected a space before the next option");
            }
            if c.eat("i=") {
                if spec.type_index.is_some() {
                    return c.err("type given twice");
                }
                spec.type_index = Some(c.number()?);
            } else if c.eat("halfspin:") {
                if spec.half_spin.is_some() {
                    return c.err("half-spin class given twice");
                }
                spec.half_spin = Some(if c.eat("A") {
                    SpinClass::A
                } else if c.eat("B") {
                    SpinClass::B
                } else {
                    return c.err("expected half-spin class A or B");
                });
            } else {
                return c.err("expected option i=<k> or halfspin:A|B");
            }
        }
        Ok(spec)
    }
}

fn pow(b: u128, e: usize) -> u128 {
    b.saturating_pow(e as u32)
}

/// Number of singular subspaces of vector dimension `k` in a polar space of
/// rank `r` and order `(s, t)`.
pub fn polar_count(r: usize, k: usize, s: usize, t: usize) -> u128 {
    let mut n = gaussian_binomial(r, k, s);
    for j in 0..k {
        n = n.saturating_mul(pow(s as u128, r - j - 1).saturating_mul(t as u128).saturating_add(1));
    }
    n
}

impl GeometrySpec {
    pub fn parse(input: &str) -> CliResult<GeometrySpec> {
        input.parse()
    }

    /// The spec with the type index replaced, keeping the half-spin class.
    pub fn with_type(mut self, i: Option<usize>) -> CliResult<GeometrySpec> {
        match (self.type_index, i) {
            (Some(a), Some(b)) if a != b => {
                return Err(CliError::Usage(format!("{self} already has type {a}, conflicting with --type {b}")))
            }
            (_, Some(b)) => self.type_index = Some(b),
            _ => {}
        }
        Ok(self)
    }

    fn invalid<T>(&self, reason: impl Into<String>) -> CliResult<T> {
        Err(CliError::Invalid { spec: self.to_string(), reason: reason.into() })
    }

    pub fn rank(&self) -> usize {
        match self.family {
            SpecFamily::Projective => self.n,
            SpecFamily::Polar(Family::Symplectic | Family::Hyperbolic | Family::Hermitian) => (self.n + 1) / 2,
            SpecFamily::Polar(Family::Parabolic) => self.n / 2,
            SpecFamily::Polar(Family::Elliptic) => self.n.saturating_sub(1) / 2,
        }
    }

    /// Order `(s, t)` of the polar space.
    pub fn order(&self) -> Option<(usize, usize)> {
        let q = self.q;
        match self.family {
            SpecFamily::Projective => None,
            SpecFamily::Polar(Family::Symplectic | Family::Parabolic) => Some((q, q)),
            SpecFamily::Polar(Family::Hyperbolic) => Some((q, 1)),
            SpecFamily::Polar(Family::Elliptic) => Some((q, q * q)),
            SpecFamily::Polar(Family::Hermitian) => {
                let root = (1..=q).find(|r| r * r == q).unwrap_or(1);
                Some((q, if self.n % 2 == 1 { root } else { root * root * root }))
            }
        }
    }

    /// The vertex type, defaulting to points, or to generators for half-spin.
    pub fn effective_type(&self) -> usize {
        match (self.type_index, self.half_spin) {
            (Some(i), _) => i,
            (None, Some(_)) => self.rank(),
            (None, None) => 1,
        }
    }

    /// Checks the parameters against the family constraints.
    pub fn validate(&self) -> CliResult<()> {
        if prime_power(self.q).is_none() {
            return self.invalid(format!("{} is not a prime power", self.q));
        }
        if self.q > MAX_ORDER {
            return self.invalid(format!("fields of order above {MAX_ORDER} are not supported"));
        }
        let i = self.effective_type();
        match self.family {
            SpecFamily::Projective => {
                if self.n < 2 {
                    return self.invalid("projective dimension must be at least 2");
                }
                if self.half_spin.is_some() {
                    return self.invalid("half-spin classes exist only for hyperbolic quadrics");
                }
                if i < 1 || i > self.n {
                    return self.invalid(format!("type must lie in 1..={}", self.n));
                }
            }
            SpecFamily::Polar(family) => {
                if let Err(e) = family.validate(self.n, self.q) {
                    return self.invalid(e.to_string());
                }
                let r = self.rank();
                if r < 2 {
                    return self.invalid(format!("rank {r} is below 2"));
                }
                match (family, self.half_spin) {
                    (Family::Hyperbolic, Some(_)) => {
                        if r < 3 {
                            return self.invalid("half-spin geometries need rank at least 3");
                        }
                        if i != r {
                            return self.invalid(format!("half-spin vertices are generators, of type {r}"));
                        }
                    }
                    (_, Some(_)) => return self.invalid("half-spin classes exist only for hyperbolic quadrics"),
                    (Family::Hyperbolic, None) if i + 2 > r => {
                        return self.invalid(format!(
                            "hyperbolic types must lie in 1..={}; use halfspin:A|B for generators",
                            r.saturating_sub(2)
                        ));
                    }
                    _ => {}
                }
                if i < 1 || i > r {
                    return self.invalid(format!("type must lie in 1..={r}"));
                }
            }
        }
        Ok(())
    }

    /// Estimated number of vertices, from closed-form counts.
    pub fn estimate_vertices(&self) -> u128 {
        let i = self.effective_type();
        match (self.family, self.order()) {
            (SpecFamily::Projective, _) => gaussian_binomial(self.n + 1, i, self.q),
            (SpecFamily::Polar(_), Some((s, t))) => {
                let all = polar_count(self.rank(), i, s, t);
                if self.half_spin.is_some() {
                    all / 2
                } else {
                    all
                }
            }
            (SpecFamily::Polar(_), None) => 0,
        }
    }

    /// Validates and applies the size guard.
    pub fn check(&self, max_vertices: u128) -> CliResult<()> {
        self.validate()?;
        let estimate = self.estimate_vertices();
        if estimate > max_vertices {
            return Err(CliError::OverLimit { spec: self.to_string(), estimate, limit: max_vertices });
        }
        Ok(())
    }

    /// The projective or polar space alone.
    pub fn build_ambient(&self) -> CliResult<Ambient> {
        self.validate()?;
        let field = Arc::new(FieldSpec::of_order(self.q)?);
        Ok(match self.family {
            SpecFamily::Projective => Ambient::Projective(ProjectiveSpace::new(field, self.n)?),
            SpecFamily::Polar(family) => Ambient::Polar(PolarSpace::build(standard_form(family, self.n, field)?)?),
        })
    }

    /// Validates, applies the size guard and builds the geometry.
    pub fn build(&self, max_vertices: u128) -> CliResult<Instance> {
        self.check(max_vertices)?;
        let i = self.effective_type();
        Ok(match (self.build_ambient()?, self.half_spin) {
            (Ambient::Projective(pg), _) => Instance::projective(pg, i - 1)?,
            (Ambient::Polar(ps), Some(c)) => Instance::half_spin(ps, c)?,
            (Ambient::Polar(ps), None) => Instance::polar(ps, i)?,
        })
    }
}
