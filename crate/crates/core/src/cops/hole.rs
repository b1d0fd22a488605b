//! The fast hole: one empty cell sliding along a path of cops.
//!
//! A line of cops with a gap at one end can advance as a unit: every cop
//! steps simultaneously into the cell its neighbor just left, the lead cop
//! steps into the hole, and after the single synchronized move the gap sits
//! at the opposite end. Net effect, no cop left its two-cell beat but the
//! hole crossed the whole path.

use crate::board::Coord;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HoleEnd {
    Front,
    Back,
}

/// `line` lists the cells of a contiguous path (consecutive cells adjacent
/// in the king metric); cops stand on every cell except the `hole` end.
/// Returns the cops' cells after the synchronized step toward the hole.
pub fn hole_shift(line: &[Coord], hole: HoleEnd) -> Result<Vec<Coord>> {
    if line.len() < 2 {
        return Err(Error::invalid(
            "hole shift needs the hole cell and at least one cop",
        ));
    }
    for w in line.windows(2) {
        let (p, q) = (&w[0], &w[1]);
        if p.dim() != q.dim() {
            return Err(Error::invalid("path cells have mixed dimensions"));
        }
        let d = (0..p.dim()).map(|a| (p[a] - q[a]).abs()).max().unwrap_or(0);
        if d != 1 {
            return Err(Error::invalid(format!(
                "path is not contiguous: {p} and {q} are not adjacent"
            )));
        }
    }
    Ok(match hole {
        HoleEnd::Front => line[..line.len() - 1].to_vec(),
        HoleEnd::Back => line[1..].to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coord;

    fn row(range: std::ops::RangeInclusive<i64>) -> Vec<Coord> {
        range.map(|x| coord![x, 1]).collect()
    }

    #[test]
    fn cops_slide_one_toward_the_hole() {
        // Hole at 1, cops on 2..10: after the step cops hold 1..9 and the
        // hole has crossed to 10.
        let line = row(1..=10);
        let after = hole_shift(&line, HoleEnd::Front).unwrap();
        assert_eq!(after, row(1..=9));
    }

    #[test]
    fn single_cop_swaps_into_the_hole() {
        let after = hole_shift(&[coord![4], coord![5]], HoleEnd::Back).unwrap();
        assert_eq!(after, vec![coord![5]]);
    }

    #[test]
    fn shifting_back_along_the_reversed_path_restores_the_line() {
        let line = row(1..=10);
        let cops_before = &line[1..];
        let after = hole_shift(&line, HoleEnd::Front).unwrap();
        // The hole is now at the back; run the step along the reversed path
        // and the original configuration reappears.
        let mut reversed = line.clone();
        reversed.reverse();
        let restored = hole_shift(&reversed, HoleEnd::Front).unwrap();
        assert_eq!(after, row(1..=9));
        let mut restored_sorted = restored;
        restored_sorted.sort();
        assert_eq!(restored_sorted, cops_before.to_vec());
    }

    /// Every path length up to 20, over straight, diagonal, and zigzag
    /// shapes and both hole ends: the step conserves the cop count, keeps
    /// every cop on the path, and moves the hole end to end.
    #[test]
    fn conservation_and_relocation_hold_for_all_lengths_to_twenty() {
        let shapes: [fn(i64) -> Coord; 3] = [
            |i| coord![i, 0],
            |i| coord![i, i],
            |i| coord![i, i.rem_euclid(2)],
        ];
        for len in 2..=20usize {
            for shape in shapes {
                let line: Vec<Coord> = (0..len as i64).map(shape).collect();
                for hole in [HoleEnd::Front, HoleEnd::Back] {
                    let after = hole_shift(&line, hole).unwrap();
                    assert_eq!(after.len(), len - 1, "cop count conserved");
                    assert!(after.iter().all(|c| line.contains(c)));
                    let vacated = match hole {
                        HoleEnd::Front => line.last().unwrap(),
                        HoleEnd::Back => &line[0],
                    };
                    assert!(!after.contains(vacated), "hole reached the far end");
                }
            }
        }
    }

    #[test]
    fn gaps_in_the_path_are_rejected() {
        let line = vec![coord![1, 1], coord![2, 1], coord![4, 1]];
        let err = hole_shift(&line, HoleEnd::Front).unwrap_err();
        assert!(err.is_config());
    }
}
