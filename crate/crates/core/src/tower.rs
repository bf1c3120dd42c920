//! Finite-depth chains of quotients `G_0 <- G_1 <- ... <- G_d`.

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::words::torsion_set;
use crate::Measure;

/// Levels ordered coarse to fine; `maps[i]` sends `G_{i+1}` onto `G_i`.
#[derive(Debug, Clone)]
pub struct Tower<'g> {
    levels: Vec<&'g FiniteGroup>,
    maps: Vec<Vec<usize>>,
}

impl<'g> Tower<'g> {
    /// Validates that every map is a surjective homomorphism.
    pub fn new(levels: Vec<&'g FiniteGroup>, maps: Vec<Vec<usize>>) -> Result<Self> {
        if levels.is_empty() || maps.len() + 1 != levels.len() {
            return Err(Error::TowerShape {
                levels: levels.len(),
                maps: maps.len(),
            });
        }
        for (level, map) in maps.iter().enumerate() {
            let (coarse, fine) = (levels[level], levels[level + 1]);
            if map.len() != fine.order() {
                return Err(Error::WrongLength {
                    len: map.len(),
                    expected: fine.order(),
                });
            }
            if let Some(&value) = map.iter().find(|&&v| v >= coarse.order()) {
                return Err(Error::TowerMapOutOfRange { level, value });
            }
            for x in fine.elements() {
                for y in fine.elements() {
                    if map[fine.mul(x, y)] != coarse.mul(map[x], map[y]) {
                        return Err(Error::TowerNotMultiplicative { level, x, y });
                    }
                }
            }
            let mut hit = vec![false; coarse.order()];
            for &v in map {
                hit[v] = true;
            }
            if let Some(missing) = hit.iter().position(|h| !h) {
                return Err(Error::NotSurjective { level, missing });
            }
        }
        Ok(Tower { levels, maps })
    }

    pub fn levels(&self) -> &[&'g FiniteGroup] {
        &self.levels
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }

    pub fn depth(&self) -> usize {
        self.maps.len()
    }

    /// Measure of `{x : x^n = 1}` at each level, coarse to fine.
    pub fn torsion_measure_sequence(&self, n: usize) -> Vec<Measure> {
        self.levels
            .iter()
            .map(|g| torsion_set(g, n).measure())
            .collect()
    }

    /// Whether each fine-level torsion set maps into the coarse one.
    pub fn torsion_images_contained(&self, n: usize) -> bool {
        self.maps.iter().enumerate().all(|(i, map)| {
            let coarse = torsion_set(self.levels[i], n).set;
            torsion_set(self.levels[i + 1], n)
                .set
                .iter()
                .all(|x| coarse.contains(map[x]))
        })
    }
}
