use std::collections::BTreeMap;

use thiserror::Error;

use crate::parity::Parity;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BasisError {
    #[error("generator `{0}` appears twice")]
    DuplicateName(String),
    #[error("no generator named `{0}`")]
    UnknownName(String),
    #[error("parity assignment does not cover `{0}`")]
    MissingParity(String),
}

/// Name to parity map over a basis.
pub type ParityAssignment = BTreeMap<String, Parity>;

#[derive(Clone, Debug, PartialEq)]
pub struct Generator<T> {
    pub name: String,
    pub op: T,
    pub parity: Parity,
}

/// Ordered generator list with unique names and parity tags.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedBasis<T> {
    gens: Vec<Generator<T>>,
}

impl<T> Default for NamedBasis<T> {
    fn default() -> Self {
        NamedBasis { gens: Vec::new() }
    }
}

impl<T> NamedBasis<T> {
    pub fn new() -> Self {
        NamedBasis::default()
    }

    pub fn push(&mut self, name: &str, op: T, parity: Parity) -> Result<(), BasisError> {
        if self.index_of(name).is_some() {
            return Err(BasisError::DuplicateName(name.to_string()));
        }
        self.gens.push(Generator { name: name.to_string(), op, parity });
        Ok(())
    }

    pub fn with(mut self, name: &str, op: T, parity: Parity) -> Result<Self, BasisError> {
        self.push(name, op, parity)?;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Generator<T>> {
        self.gens.iter()
    }

    pub fn generator(&self, i: usize) -> &Generator<T> {
        &self.gens[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn get(&self, name: &str) -> Option<&T> {
        self.gens.iter().find(|g| g.name == name).map(|g| &g.op)
    }

    pub fn require(&self, name: &str) -> Result<&T, BasisError> {
        self.get(name).ok_or_else(|| BasisError::UnknownName(name.to_string()))
    }

    pub fn names(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.name.clone()).collect()
    }

    pub fn parities(&self) -> Vec<Parity> {
        self.gens.iter().map(|g| g.parity).collect()
    }

    pub fn parity_assignment(&self) -> ParityAssignment {
        self.gens.iter().map(|g| (g.name.clone(), g.parity)).collect()
    }

    /// Same operators with every generator even.
    pub fn all_even(&self) -> Self
    where
        T: Clone,
    {
        NamedBasis { gens: self.gens.iter().map(|g| Generator { parity: Parity::Even, ..g.clone() }).collect() }
    }

    /// Same operators with parities taken from `assignment`, which must be
    /// total on the basis.
    pub fn with_parities(&self, assignment: &ParityAssignment) -> Result<Self, BasisError>
    where
        T: Clone,
    {
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let parity = *assignment.get(&g.name).ok_or_else(|| BasisError::MissingParity(g.name.clone()))?;
                Ok(Generator { parity, ..g.clone() })
            })
            .collect::<Result<Vec<_>, BasisError>>()?;
        Ok(NamedBasis { gens })
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> NamedBasis<U> {
        NamedBasis {
            gens: self
                .gens
                .iter()
                .map(|g| Generator { name: g.name.clone(), op: f(&g.op), parity: g.parity })
                .collect(),
        }
    }

    pub fn try_map<U, E>(&self, mut f: impl FnMut(&T) -> Result<U, E>) -> Result<NamedBasis<U>, E> {
        let gens = self
            .gens
            .iter()
            .map(|g| Ok(Generator { name: g.name.clone(), op: f(&g.op)?, parity: g.parity }))
            .collect::<Result<Vec<_>, E>>()?;
        Ok(NamedBasis { gens })
    }
}
