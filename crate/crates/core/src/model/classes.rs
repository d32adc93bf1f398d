use rand::Rng;

/// Vertices bucketed by degree. Members of a class are stored in an
/// unordered list with swap-remove, so moving a vertex between classes is O(1).
#[derive(Debug, Clone, Default)]
pub struct DegreeClasses {
    members: Vec<Vec<u32>>,
    slot: Vec<u32>,
}

impl DegreeClasses {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds vertex `v` (which must be the next unused index) with degree `d`.
    pub fn push(&mut self, v: u32, d: u32) {
        debug_assert_eq!(v as usize, self.slot.len());
        let list = self.class_mut(d);
        list.push(v);
        let pos = (list.len() - 1) as u32;
        self.slot.push(pos);
    }

    /// Moves vertex `v` from degree class `d` to `d + 1`.
    pub fn increment(&mut self, v: u32, d: u32) {
        let pos = self.slot[v as usize] as usize;
        let list = &mut self.members[d as usize];
        debug_assert_eq!(list[pos], v);
        list.swap_remove(pos);
        if let Some(&moved) = list.get(pos) {
            self.slot[moved as usize] = pos as u32;
        }
        let next = self.class_mut(d + 1);
        next.push(v);
        let pos = (next.len() - 1) as u32;
        self.slot[v as usize] = pos;
    }

    fn class_mut(&mut self, d: u32) -> &mut Vec<u32> {
        let d = d as usize;
        if self.members.len() <= d {
            self.members.resize_with(d + 1, Vec::new);
        }
        &mut self.members[d]
    }

    pub fn count(&self, d: u32) -> usize {
        self.members.get(d as usize).map_or(0, Vec::len)
    }

    pub fn members(&self, d: u32) -> &[u32] {
        self.members.get(d as usize).map_or(&[], Vec::as_slice)
    }

    /// Nonempty classes as `(degree, count)`, ascending in degree.
    pub fn iter(&self) -> impl Iterator<Item = (u32, usize)> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.is_empty())
            .map(|(d, l)| (d as u32, l.len()))
    }

    pub fn max_degree(&self) -> u32 {
        self.iter().last().map_or(0, |(d, _)| d)
    }

    pub fn len(&self) -> usize {
        self.slot.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slot.is_empty()
    }

    pub fn pick_uniform<R: Rng + ?Sized>(&self, d: u32, rng: &mut R) -> Option<u32> {
        let list = self.members(d);
        if list.is_empty() {
            None
        } else {
            Some(list[rng.random_range(0..list.len())])
        }
    }

    /// Checks membership against a per-vertex degree array.
    pub fn consistent_with(&self, degrees: &[u32]) -> bool {
        if degrees.len() != self.slot.len() {
            return false;
        }
        let listed: usize = self.members.iter().map(Vec::len).sum();
        listed == degrees.len()
            && degrees.iter().enumerate().all(|(v, &d)| {
                self.members(d).get(self.slot[v] as usize) == Some(&(v as u32))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_remove_keeps_slots_valid() {
        let mut c = DegreeClasses::new();
        let mut degrees = vec![1, 1, 1, 2];
        for (v, &d) in degrees.iter().enumerate() {
            c.push(v as u32, d);
        }
        c.increment(0, 1);
        degrees[0] = 2;
        c.increment(2, 1);
        degrees[2] = 2;
        c.increment(3, 2);
        degrees[3] = 3;
        assert!(c.consistent_with(&degrees));
        assert_eq!(c.iter().collect::<Vec<_>>(), vec![(1, 1), (2, 2), (3, 1)]);
        assert_eq!(c.max_degree(), 3);
    }
}
