use super::perm::Permutation;

/// Character table of `S_2` or `S_4`. Columns are conjugacy classes keyed by
/// cycle type, rows are irreducible representations keyed by partitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    pub t: usize,
    pub irreps: Vec<&'static str>,
    pub classes: Vec<&'static [usize]>,
    pub class_sizes: Vec<i64>,
    pub values: Vec<Vec<i64>>,
}

impl CharacterTable {
    pub fn order(&self) -> i64 {
        self.class_sizes.iter().sum()
    }

    /// Dimension of each irrep, the character at the identity.
    pub fn dims(&self) -> Vec<i64> {
        self.values.iter().map(|row| row[0]).collect()
    }

    pub fn class_of(&self, p: &Permutation) -> usize {
        let ct = p.cycle_type();
        self.classes.iter().position(|c| *c == ct.as_slice()).expect("every cycle type has a class")
    }

    pub fn character(&self, irrep: usize, p: &Permutation) -> i64 {
        self.values[irrep][self.class_of(p)]
    }

    /// Row and column orthogonality, checked in integer arithmetic.
    pub fn is_orthogonal(&self) -> bool {
        let g = self.order();
        let r = self.values.len();
        let c = self.classes.len();
        let rows_ok = (0..r).all(|a| {
            (0..r).all(|b| {
                let s: i64 = (0..c).map(|k| self.class_sizes[k] * self.values[a][k] * self.values[b][k]).sum();
                s == if a == b { g } else { 0 }
            })
        });
        let cols_ok = (0..c).all(|k| {
            (0..c).all(|l| {
                let s: i64 = (0..r).map(|a| self.values[a][k] * self.values[a][l]).sum();
                s * self.class_sizes[k] == if k == l { g } else { 0 }
            })
        });
        rows_ok && cols_ok
    }
}

pub fn s2_character_table() -> CharacterTable {
    CharacterTable {
        t: 2,
        irreps: vec!["[2]", "[1,1]"],
        classes: vec![&[1, 1], &[2]],
        class_sizes: vec![1, 1],
        values: vec![vec![1, 1], vec![1, -1]],
    }
}

/// Classes ordered `e, (ab), (ab)(cd), (abc), (abcd)`.
pub fn s4_character_table() -> CharacterTable {
    CharacterTable {
        t: 4,
        irreps: vec!["[4]", "[3,1]", "[2,2]", "[2,1,1]", "[1,1,1,1]"],
        classes: vec![&[1, 1, 1, 1], &[2, 1, 1], &[2, 2], &[3, 1], &[4]],
        class_sizes: vec![1, 6, 3, 8, 6],
        values: vec![
            vec![1, 1, 1, 1, 1],
            vec![3, 1, -1, 0, -1],
            vec![2, 0, 2, -1, 0],
            vec![3, -1, -1, 0, 1],
            vec![1, -1, 1, 1, -1],
        ],
    }
}

pub fn character_table(t: usize) -> crate::Result<CharacterTable> {
    match t {
        2 => Ok(s2_character_table()),
        4 => Ok(s4_character_table()),
        _ => Err(crate::Error::InvalidInput(format!("no character table for S_{t}"))),
    }
}
