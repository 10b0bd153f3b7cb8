//! Layered breadth-first closure of a generating set.
//!
//! Layer `t` holds the elements of word length exactly `t`, sorted by their
//! canonical encoding. Each expansion step is split across the rayon pool and
//! merged by sort and dedup, so the layers never depend on the schedule.

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use thiserror::Error;

use crate::gf::Field;
use crate::matrix::Mat;

/// Default limit on materialized elements.
pub const DEFAULT_BALL_CAP: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BallError {
    #[error("ball exceeds the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("generating set is empty")]
    NoGenerators,
}

/// Ball of a symmetric generating set, grown one word length at a time.
#[derive(Clone, Debug)]
pub struct Ball {
    field: Field,
    gens: Vec<Mat>,
    depth: FxHashMap<Mat, u32>,
    layers: Vec<Vec<Mat>>,
    cap: usize,
    closed: bool,
}

impl Ball {
    /// Starts from the identity; `gens` is used as given.
    pub fn new(gens: &[Mat], field: &Field, cap: usize) -> Result<Self, BallError> {
        let first = gens.first().ok_or(BallError::NoGenerators)?;
        let id = Mat::identity(first.n());
        let mut gens = gens.to_vec();
        gens.sort();
        gens.dedup();
        let mut depth = FxHashMap::default();
        depth.insert(id.clone(), 0);
        Ok(Ball {
            field: field.clone(),
            gens,
            depth,
            layers: vec![vec![id]],
            cap,
            closed: false,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn generators(&self) -> &[Mat] {
        &self.gens
    }

    /// Largest word length reached so far.
    pub fn radius(&self) -> usize {
        self.layers.len() - 1
    }

    /// Whether the last expansion produced nothing new.
    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn layer(&self, t: usize) -> &[Mat] {
        self.layers.get(t).map_or(&[], Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.depth.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depth.is_empty()
    }

    /// Word length of `g`, if already reached.
    pub fn depth_of(&self, g: &Mat) -> Option<u32> {
        self.depth.get(g).copied()
    }

    pub fn contains(&self, g: &Mat) -> bool {
        self.depth.contains_key(g)
    }

    /// `|A^t|` for `t ≤ radius`.
    pub fn size_at(&self, t: usize) -> usize {
        self.layers.iter().take(t + 1).map(Vec::len).sum()
    }

    /// Elements of `A^t`, for `t ≤ radius`.
    pub fn elements_within(&self, t: usize) -> impl Iterator<Item = &Mat> {
        self.layers.iter().take(t + 1).flatten()
    }

    pub fn elements(&self) -> impl Iterator<Item = &Mat> {
        self.layers.iter().flatten()
    }

    /// Adds the next layer; returns its size.
    pub fn grow(&mut self) -> Result<usize, BallError> {
        if self.closed {
            self.layers.push(Vec::new());
            return Ok(0);
        }
        let frontier = self.layers.last().expect("layer 0 exists");
        let (gens, f, depth) = (&self.gens, &self.field, &self.depth);
        let mut next: Vec<Mat> = frontier
            .par_chunks(256)
            .flat_map_iter(|chunk| {
                let mut local = FxHashSet::default();
                for x in chunk {
                    for a in gens {
                        let y = a.mul(x, f);
                        if !depth.contains_key(&y) {
                            local.insert(y);
                        }
                    }
                }
                local.into_iter()
            })
            .collect();
        next.par_sort_unstable();
        next.dedup();
        if self.depth.len() + next.len() > self.cap {
            return Err(BallError::CapExceeded { cap: self.cap });
        }
        let t = self.layers.len() as u32;
        for g in &next {
            self.depth.insert(g.clone(), t);
        }
        let n = next.len();
        self.closed = n == 0;
        self.layers.push(next);
        Ok(n)
    }

    /// Grows until `radius == t` or closure.
    pub fn grow_to(&mut self, t: usize) -> Result<(), BallError> {
        while self.radius() < t && !self.closed {
            self.grow()?;
        }
        Ok(())
    }

    /// Grows until no new elements appear.
    pub fn close(&mut self) -> Result<(), BallError> {
        while !self.closed {
            self.grow()?;
        }
        Ok(())
    }

    /// Smallest `t` with `A^t` equal to the full closure; requires a closed ball.
    pub fn diameter(&self) -> Option<usize> {
        self.closed
            .then(|| self.layers.iter().rposition(|l| !l.is_empty()).unwrap_or(0))
    }
}

/// Closure of `gens` under multiplication, sorted.
pub fn closure(gens: &[Mat], field: &Field, cap: usize) -> Result<Vec<Mat>, BallError> {
    let mut ball = Ball::new(gens, field, cap)?;
    ball.close()?;
    let mut all: Vec<Mat> = ball.elements().cloned().collect();
    all.sort();
    Ok(all)
}
