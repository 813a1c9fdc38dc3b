use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symalg::Composition;

/// A colored braid: strand colors along the top and a word of signed
/// generator indices (`-2` is the inverse of the second generator).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    colors: Composition,
    word: Vec<i64>,
}

impl BraidWord {
    pub fn new(colors: Composition, word: Vec<i64>) -> Result<Self> {
        let strands = colors.len();
        for &g in &word {
            if g == 0 || g.unsigned_abs() as usize >= strands {
                return Err(Error::GeneratorOutOfRange { index: g, strands });
            }
        }
        Ok(BraidWord { colors, word })
    }

    /// Braid on `strands` strands all colored 1.
    pub fn uncolored(strands: usize, word: Vec<i64>) -> Result<Self> {
        Self::new(Composition::ones(strands), word)
    }

    pub fn strands(&self) -> usize {
        self.colors.len()
    }

    pub fn colors(&self) -> &Composition {
        &self.colors
    }

    pub fn word(&self) -> &[i64] {
        &self.word
    }

    pub fn writhe(&self) -> i64 {
        self.word.iter().map(|g| g.signum()).sum()
    }

    pub fn is_uncolored(&self) -> bool {
        self.colors.parts().iter().all(|&c| c == 1)
    }

    /// Colors before each letter, followed by the bottom coloring.
    pub fn colorings(&self) -> Vec<Vec<usize>> {
        let mut cur = self.colors.parts().to_vec();
        let mut out = vec![cur.clone()];
        for &g in &self.word {
            let p = g.unsigned_abs() as usize - 1;
            cur.swap(p, p + 1);
            out.push(cur.clone());
        }
        out
    }

    pub fn bottom_colors(&self) -> Composition {
        Composition::new(self.colorings().pop().unwrap()).expect("positive colors")
    }

    pub fn is_closable(&self) -> bool {
        self.bottom_colors() == self.colors
    }

    pub fn check_closable(&self) -> Result<()> {
        let bottom = self.bottom_colors();
        if bottom != self.colors {
            return Err(Error::NotClosable { top: self.colors.parts().to_vec(), bottom: bottom.parts().to_vec() });
        }
        Ok(())
    }

    /// Strand positions of each component of the closure.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.strands();
        // perm[p]: bottom position of the strand starting at top position p
        let mut at: Vec<usize> = (0..n).collect();
        for &g in &self.word {
            let p = g.unsigned_abs() as usize - 1;
            at.swap(p, p + 1);
        }
        let mut perm = vec![0; n];
        for (pos, &strand) in at.iter().enumerate() {
            perm[strand] = pos;
        }
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = perm[x];
            }
            out.push(cycle);
        }
        out
    }

    /// The same braid followed by `other`.
    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord> {
        if other.colors != self.bottom_colors() {
            return Err(Error::NotClosable { top: other.colors.parts().to_vec(), bottom: self.bottom_colors().parts().to_vec() });
        }
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        BraidWord::new(self.colors.clone(), word)
    }

    /// Inverse braid, starting from the bottom coloring.
    pub fn inverse(&self) -> BraidWord {
        let word = self.word.iter().rev().map(|g| -g).collect();
        BraidWord { colors: self.bottom_colors(), word }
    }

    /// Adds a strand of color `color` on the right and appends `σ_n^{sign}`.
    pub fn stabilized(&self, color: usize, sign: i64) -> Result<BraidWord> {
        let mut parts = self.colors.parts().to_vec();
        parts.push(color);
        let mut word = self.word.clone();
        word.push(sign.signum() * self.strands() as i64);
        BraidWord::new(Composition::new(parts)?, word)
    }
}

/// Parses `colors: c1 c2 ... ; word: g1 g2 ...`.
pub fn parse_braid(text: &str) -> Result<BraidWord> {
    let bad = |msg: &str| Error::Parse(format!("{msg} in {text:?}"));
    let (c, w) = text.split_once(';').ok_or_else(|| bad("missing ';'"))?;
    let c = c.trim().strip_prefix("colors:").ok_or_else(|| bad("expected 'colors:'"))?;
    let w = w.trim().strip_prefix("word:").ok_or_else(|| bad("expected 'word:'"))?;
    let colors = c
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| bad(&format!("bad color {t:?}"))))
        .collect::<Result<Vec<_>>>()?;
    if colors.is_empty() || colors.contains(&0) {
        return Err(bad("colors must be positive and nonempty"));
    }
    let word = w
        .split_whitespace()
        .map(|t| t.trim_start_matches('+').parse::<i64>().map_err(|_| bad(&format!("bad generator {t:?}"))))
        .collect::<Result<Vec<_>>>()?;
    BraidWord::new(Composition::new(colors)?, word)
}

impl FromStr for BraidWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_braid(s)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.colors.parts().iter().map(|c| c.to_string()).collect();
        let w: Vec<String> = self.word.iter().map(|g| g.to_string()).collect();
        write!(f, "colors: {} ; word:", c.join(" "))?;
        for g in w {
            write!(f, " {g}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let u = parse_braid("colors: 1 ; word:").unwrap();
        assert_eq!(u.strands(), 1);
        assert!(u.word().is_empty());
        let t = parse_braid("colors: 1 1 ; word: 1 1 1").unwrap();
        assert_eq!(t.writhe(), 3);
        let c = parse_braid("colors: 2 1 ; word: 1 1").unwrap();
        assert!(c.is_closable());
        assert!(!parse_braid("colors: 2 1 ; word: 1").unwrap().is_closable());
        assert!(parse_braid("colors: 1 1 ; word: 2").is_err());
        assert!(parse_braid("colors: 1 1 word: 1").is_err());
        assert!(parse_braid("colors: 0 ; word:").is_err());
    }

    #[test]
    fn component_counts() {
        let count = |s: &str| parse_braid(s).unwrap().components().len();
        assert_eq!(count("colors: 1 1 ; word: 1 1 1"), 1);
        assert_eq!(count("colors: 1 1 ; word: 1 1"), 2);
        assert_eq!(count("colors: 1 1 1 ; word: 1 2"), 1);
        assert_eq!(count("colors: 1 1 1 ; word:"), 3);
    }

    #[test]
    fn round_trip() {
        for s in ["colors: 1 ; word:", "colors: 1 1 1 ; word: 1 -2 1", "colors: 2 1 ; word: 1 -1"] {
            let b = parse_braid(s).unwrap();
            assert_eq!(b.to_string(), s);
            assert_eq!(parse_braid(&b.to_string()).unwrap(), b);
        }
    }
}
