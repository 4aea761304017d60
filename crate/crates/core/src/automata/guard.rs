use std::fmt;

use crate::logic::Letter;

/// Conjunction of literals: atoms in `pos` true, atoms in `neg` false.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Cube {
    pub pos: Letter,
    pub neg: Letter,
}

impl Cube {
    pub const TRUE: Cube = Cube { pos: 0, neg: 0 };

    pub fn holds(&self, letter: Letter) -> bool {
        letter & self.pos == self.pos && letter & self.neg == 0
    }

    /// `None` when the conjunction is contradictory.
    pub fn and(&self, other: &Cube) -> Option<Cube> {
        let c = Cube { pos: self.pos | other.pos, neg: self.neg | other.neg };
        (c.pos & c.neg == 0).then_some(c)
    }

    /// Whether every letter satisfying `other` satisfies `self`.
    pub fn implied_by(&self, other: &Cube) -> bool {
        self.pos & other.pos == self.pos && self.neg & other.neg == self.neg
    }

    pub fn is_true(&self) -> bool {
        self.pos == 0 && self.neg == 0
    }

    /// Writes the cube with atoms as indices (`0 & !2`), HOA style.
    pub fn fmt_indexed(&self, atoms: usize, f: &mut impl fmt::Write) -> fmt::Result {
        if self.is_true() {
            return write!(f, "t");
        }
        let mut first = true;
        for i in 0..atoms {
            let bit = 1 << i;
            let neg = if self.pos & bit != 0 {
                false
            } else if self.neg & bit != 0 {
                true
            } else {
                continue;
            };
            if !first {
                write!(f, " & ")?;
            }
            first = false;
            write!(f, "{}{i}", if neg { "!" } else { "" })?;
        }
        Ok(())
    }
}

/// Disjunction of cubes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Guard(pub Vec<Cube>);

impl Guard {
    pub fn holds(&self, letter: Letter) -> bool {
        self.0.iter().any(|c| c.holds(letter))
    }

    /// A cover of exactly the letters `l < 2^atoms` with `member(l)`, found by
    /// recursive splitting on the atoms.
    pub fn from_letters(atoms: usize, member: impl Fn(Letter) -> bool) -> Guard {
        let mut cubes = Vec::new();
        split(atoms, &member, 0, Cube::TRUE, &mut cubes);
        Guard(cubes)
    }

    pub fn fmt_indexed(&self, atoms: usize, f: &mut impl fmt::Write) -> fmt::Result {
        match self.0.as_slice() {
            [] => write!(f, "f"),
            [c] => c.fmt_indexed(atoms, f),
            cubes => {
                for (k, c) in cubes.iter().enumerate() {
                    if k > 0 {
                        write!(f, " | ")?;
                    }
                    if c.pos.count_ones() + c.neg.count_ones() > 1 {
                        write!(f, "(")?;
                        c.fmt_indexed(atoms, f)?;
                        write!(f, ")")?;
                    } else {
                        c.fmt_indexed(atoms, f)?;
                    }
                }
                Ok(())
            }
        }
    }
}

// Emits cubes covering the members inside `cube`, whose atoms below `var`
// are already fixed.
fn split(atoms: usize, member: &dyn Fn(Letter) -> bool, var: usize, cube: Cube, out: &mut Vec<Cube>) {
    let free = (var..atoms).map(|i| 1u64 << i).fold(0, |a, b| a | b);
    let mut all = true;
    let mut none = true;
    // Enumerate the subcube: fixed bits from `cube.pos`, free bits varying.
    let mut sub = free;
    loop {
        if member(cube.pos | sub) {
            none = false;
        } else {
            all = false;
        }
        if !all && !none {
            break;
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & free;
    }
    if none {
        return;
    }
    if all {
        out.push(cube);
        return;
    }
    let bit = 1u64 << var;
    split(atoms, member, var + 1, Cube { pos: cube.pos, neg: cube.neg | bit }, out);
    split(atoms, member, var + 1, Cube { pos: cube.pos | bit, neg: cube.neg }, out);
}
