//! Exact half-plane intersection for the bounded linear regions.

use alloc::vec::Vec;

use crate::geometry::LinearForm;
use crate::rational::RationalPoint2;

/// Vertices of `{form ≤ 0 for every form}` (assumed bounded), counterclockwise
/// from the lexicographically largest vertex.
pub(crate) fn halfplane_polygon(forms: &[LinearForm]) -> Vec<RationalPoint2> {
    let mut pts = Vec::new();
    for (i, a) in forms.iter().enumerate() {
        for b in &forms[i + 1..] {
            if let Some(p) = a.intersect(b) {
                if forms.iter().all(|f| f.eval(&p) <= num_traits::Zero::zero()) {
                    pts.push(p);
                }
            }
        }
    }
    pts.sort();
    pts.dedup();
    ccw_from_lexmax(pts)
}

pub(crate) fn ccw_from_lexmax(mut pts: Vec<RationalPoint2>) -> Vec<RationalPoint2> {
    if pts.len() < 3 {
        return pts;
    }
    let n = pts.len() as f64;
    let (cx, cy) = pts.iter().map(|p| p.to_f64()).fold((0.0, 0.0), |(x, y), (a, b)| (x + a / n, y + b / n));
    let angle = |p: &RationalPoint2| {
        let (x, y) = p.to_f64();
        libm::atan2(y - cy, x - cx)
    };
    pts.sort_by(|a, b| angle(a).total_cmp(&angle(b)));
    let start = (0..pts.len()).max_by(|&i, &j| pts[i].cmp(&pts[j])).unwrap_or(0);
    pts.rotate_left(start);
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn unit_square() {
        let forms = [
            LinearForm::new(int(1), int(0), int(-1)),
            LinearForm::new(int(-1), int(0), int(0)),
            LinearForm::new(int(0), int(1), int(-1)),
            LinearForm::new(int(0), int(-1), int(0)),
            // redundant
            LinearForm::new(int(1), int(1), int(-5)),
        ];
        let v = halfplane_polygon(&forms);
        assert_eq!(
            v,
            [
                RationalPoint2::ints(1, 1),
                RationalPoint2::ints(0, 1),
                RationalPoint2::ints(0, 0),
                RationalPoint2::ints(1, 0)
            ]
        );
    }
}
