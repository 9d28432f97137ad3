//! Main terms as linear combinations of simple shape functions of X.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    Const,
    LogX,
    XPow { exponent: Interval },
}

impl Shape {
    pub fn eval(&self, x: Interval) -> Result<Interval> {
        match self {
            Shape::Const => Ok(Interval::ONE),
            Shape::LogX => x.ln(),
            Shape::XPow { exponent } => x.pow(*exponent),
        }
    }

    fn same_as(&self, other: &Shape) -> bool {
        match (self, other) {
            (Shape::Const, Shape::Const) | (Shape::LogX, Shape::LogX) => true,
            (Shape::XPow { exponent: a }, Shape::XPow { exponent: b }) => a == b,
            _ => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MainTermPart {
    pub coefficient: Interval,
    pub shape: Shape,
}

/// `Σ coefficient_i · shape_i(X)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MainTermDescriptor {
    pub terms: Vec<MainTermPart>,
}

impl MainTermDescriptor {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `coefficient · shape`, merging with an existing identical shape.
    pub fn push(&mut self, coefficient: Interval, shape: Shape) {
        if let Some(t) = self.terms.iter_mut().find(|t| t.shape.same_as(&shape)) {
            t.coefficient = t.coefficient + coefficient;
        } else {
            self.terms.push(MainTermPart { coefficient, shape });
        }
    }

    pub fn with(mut self, coefficient: Interval, shape: Shape) -> Self {
        self.push(coefficient, shape);
        self
    }

    pub fn coefficient(&self, shape: &Shape) -> Option<Interval> {
        self.terms.iter().find(|t| t.shape.same_as(shape)).map(|t| t.coefficient)
    }

    pub fn eval(&self, x: Interval) -> Result<Interval> {
        if !x.is_positive() {
            return Err(Error::DomainError(format!("main term evaluated at {x:?}")));
        }
        let mut acc = Interval::ZERO;
        for t in &self.terms {
            acc = acc + t.coefficient * t.shape.eval(x)?;
        }
        Ok(acc)
    }

    pub fn scaled(&self, c: Interval) -> Self {
        MainTermDescriptor {
            terms: self.terms.iter().map(|t| MainTermPart { coefficient: t.coefficient * c, shape: t.shape }).collect(),
        }
    }
}
