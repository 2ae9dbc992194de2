use serde::{Deserialize, Serialize};
use std::fmt;

macro_rules! atoms {
    ($($variant:ident => $name:literal),* $(,)?) => {
        /// The closed table of jet symbols.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum Atom {
            $($variant),*
        }

        impl Atom {
            pub const ALL: &'static [Atom] = &[$(Atom::$variant),*];

            pub fn name(self) -> &'static str {
                match self {
                    $(Atom::$variant => $name),*
                }
            }
        }
    };
}

atoms! {
    F => "f", F1 => "f1", F2 => "f2", F3 => "f3", F4 => "f4",
    G => "g", G1 => "g1", G2 => "g2", G3 => "g3", G4 => "g4",
    H => "h", H1 => "h1", H2 => "h2", H3 => "h3", H4 => "h4",
    V1 => "v1", V2 => "v2", V3 => "v3",
    C => "c", K => "k", A => "a", B => "b", M0 => "m0", M1 => "m1",
    P0 => "p0", P1 => "p1", P2 => "p2", P3 => "p3",
    C1 => "c1", C2 => "c2", C3 => "c3",
    P => "p", PPrime => "p_1", Q => "q", QPrime => "q_1",
    X => "x", R => "r",
}

pub const N_ATOMS: usize = Atom::ALL.len();

/// How an atom behaves under a derivation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Zero,
    One,
    /// The next derivative in the same family.
    Next(Atom),
    /// Chain rule through a function of `f` or `g`: `d p = p_1 * f1`.
    Chain(Atom, Atom),
    /// The stored derivative order is exhausted.
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    X,
    Y,
}

impl Atom {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn parse(name: &str) -> Option<Atom> {
        Atom::ALL.iter().copied().find(|a| a.name() == name)
    }

    pub fn action(self, dir: Direction) -> Action {
        use Atom::*;
        let next = |family: [Atom; 5]| match family.iter().position(|&a| a == self) {
            Some(4) => Action::Overflow,
            Some(i) => Action::Next(family[i + 1]),
            None => Action::Zero,
        };
        match dir {
            Direction::X => match self {
                F | F1 | F2 | F3 | F4 => next([F, F1, F2, F3, F4]),
                H | H1 | H2 | H3 | H4 => next([H, H1, H2, H3, H4]),
                X => Action::One,
                P => Action::Chain(PPrime, F1),
                PPrime => Action::Overflow,
                _ => Action::Zero,
            },
            Direction::Y => match self {
                G | G1 | G2 | G3 | G4 => next([G, G1, G2, G3, G4]),
                Q => Action::Chain(QPrime, G1),
                QPrime => Action::Overflow,
                _ => Action::Zero,
            },
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
